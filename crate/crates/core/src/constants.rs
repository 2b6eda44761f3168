//! Named spectrum constants as exact surds.

use crate::cf::{CFExpansion, QuadraticSurd};

fn cf(pre: &[u64], period: &[u64]) -> QuadraticSurd {
    CFExpansion::new(0, pre.to_vec(), period.to_vec())
        .expect("entries >= 1")
        .value()
}

fn int(n: i64) -> QuadraticSurd {
    QuadraticSurd::from_integer(n)
}

/// Minimum of the spectrum: `7*sqrt(21)/3 = 7 + 14*[overline{3,1}]`.
pub fn phi1() -> QuadraticSurd {
    int(7) + int(14) * cf(&[], &[3, 1])
}

/// Second smallest value: `14*[1,4,overline{1,3}]`.
pub fn phi2() -> QuadraticSurd {
    int(14) * cf(&[1, 4], &[1, 3])
}

/// Accumulation point of the first-generation gaps: `14*[1,4,overline{1,4,2,4}]`.
pub fn phi_inf() -> QuadraticSurd {
    int(14) * cf(&[1, 4], &[1, 4, 2, 4])
}

/// Upper limit of the subshift description: `7*([1,4,2,overline{1,5}] + 5 + [1,5,1,overline{1,5}])/4`.
pub fn eta1() -> QuadraticSurd {
    int(7) * (cf(&[1, 4, 2], &[1, 5]) + int(5) + cf(&[1, 5, 1], &[1, 5])) / int(4)
}

/// `7*([1,overline{1,6}] + 6 + [overline{6,1}])/4`.
pub fn eta2() -> QuadraticSurd {
    int(7) * (cf(&[1], &[1, 6]) + int(6) + cf(&[], &[6, 1])) / int(4)
}

/// `7*(1 + [1,overline{1,6}] + [overline{6,1}])`; default ceiling of loop scans.
pub fn eta3() -> QuadraticSurd {
    int(7) * (int(1) + cf(&[1], &[1, 6]) + cf(&[], &[6, 1]))
}

/// `7*(7 + 2*[overline{7,1}])/4`; below it eventual entries are at most 6.
pub fn entry_cap_bound() -> QuadraticSurd {
    int(7) * (int(7) + int(2) * cf(&[], &[7, 1])) / int(4)
}

/// `14*[1,overline{5,2}]`, the value of the `[overline{5,2}]` loop in the m=2 cusp.
pub fn loop_52_value() -> QuadraticSurd {
    int(14) * cf(&[1], &[5, 2])
}

/// `7*([1,5,2,4,overline{1,3}] + [1,4,overline{1,3}])`.
pub fn cut_above_four() -> QuadraticSurd {
    int(7) * (cf(&[1, 5, 2, 4], &[1, 3]) + cf(&[1, 4], &[1, 3]))
}

/// `[1,4,overline{1,3}] + [1,4,overline{1,3}] = phi2 / 7`.
pub fn double_bracket() -> QuadraticSurd {
    cf(&[1, 4], &[1, 3]) + cf(&[1, 4], &[1, 3])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi1_closed_form() {
        assert_eq!(phi1(), int(7) * QuadraticSurd::sqrt(21).unwrap() / int(3));
    }

    #[test]
    fn ordering() {
        assert!(phi1() < phi2());
        assert!(phi2() < phi_inf());
        assert!(phi_inf() < eta1());
        assert!(eta1() < eta2());
        assert!(eta2() < eta3());
        assert!(eta3() < entry_cap_bound());
    }

    #[test]
    fn phi_inf_closed_form() {
        let s = QuadraticSurd::sqrt(210).unwrap();
        let expect = int(14) * (int(2) * &s + int(24)) / (int(2) * &s + int(35));
        assert_eq!(phi_inf(), expect);
    }
}
