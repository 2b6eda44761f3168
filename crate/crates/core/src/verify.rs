//! Self-checks run by `origami-spectrum verify`.

use std::fmt;

use crate::cf::{CFExpansion, QuadraticSurd};
use crate::constants;
use crate::error::{Error, Result};
use crate::orbit::{b7, OrbitGraph};
use crate::spectrum::{
    closes, lagrange, lagrange_even_loop, oracle_lagrange, scan_even_loops, ScanConfig,
};
use crate::subshift::{
    gap_first, gap_second, interval_first, l_sigma_periodic, subshift_vs_orbit,
    verify_lexicographic, ABWord, Letter,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

pub const ITEMS: &[&str] = &[
    "orbit",
    "constants",
    "tables",
    "minimum",
    "lexicographic",
    "gaps",
    "oracle",
    "subshift",
];

/// All words over `{a, b}` of length `1..=max_len`.
pub fn all_words(max_len: usize) -> Vec<ABWord> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for bits in 0..(1u32 << len) {
            out.push(ABWord::new(
                (0..len)
                    .map(|t| {
                        if bits >> t & 1 == 1 {
                            Letter::B
                        } else {
                            Letter::A
                        }
                    })
                    .collect(),
            ));
        }
    }
    out
}

fn int(n: i64) -> QuadraticSurd {
    QuadraticSurd::from_integer(n)
}

fn sqrt(n: i64) -> QuadraticSurd {
    QuadraticSurd::sqrt(n).expect("positive")
}

fn check_orbit(g: &OrbitGraph) -> Vec<Check> {
    let widths = g.cusp_widths();
    let m2: Vec<usize> = (0..g.cusps().len())
        .filter(|&c| g.cusps()[c].members.iter().any(|&x| g.multiplicity(x) == 2))
        .collect();
    let m2_ok = m2.len() == 1 && {
        let c = &g.cusps()[m2[0]];
        c.width() == 7 && c.members.iter().all(|&x| g.multiplicity(x) == 2)
    };
    vec![
        Check::new("orbit size", g.len() == 36, format!("{}", g.len())),
        Check::new(
            "cusp widths",
            widths == [7, 7, 7, 5, 3, 3, 3, 1],
            format!("{widths:?}"),
        ),
        Check::new(
            "single multiplicity-2 cusp of width 7",
            m2_ok,
            format!("{} cusps with m=2", m2.len()),
        ),
    ]
}

fn check_constants() -> Vec<Check> {
    let named = [
        (
            "phi1 = 7 sqrt(21)/3",
            constants::phi1(),
            int(7) * sqrt(21) / int(3),
        ),
        (
            "phi2 = 14 (4 sqrt(21)+18)/(5 sqrt(21)+21)",
            constants::phi2(),
            int(14) * (int(4) * sqrt(21) + int(18)) / (int(5) * sqrt(21) + int(21)),
        ),
        (
            "phi_inf = 14 (2 sqrt(210)+24)/(2 sqrt(210)+35)",
            constants::phi_inf(),
            int(14) * (int(2) * sqrt(210) + int(24)) / (int(2) * sqrt(210) + int(35)),
        ),
        (
            "14[1,overline{5,2}] = 2 sqrt(35)",
            constants::loop_52_value(),
            int(2) * sqrt(35),
        ),
        (
            "2[1,4,overline{1,3}] = phi2/7",
            constants::double_bracket(),
            constants::phi2() / int(7),
        ),
    ];
    let mut out: Vec<Check> = named
        .into_iter()
        .map(|(n, x, y)| Check::new(n, x == y, x.to_decimal_with_bound(8)))
        .collect();
    let chain = [
        constants::phi1(),
        constants::phi2(),
        constants::phi_inf(),
        constants::eta1(),
        constants::eta2(),
        constants::eta3(),
        constants::entry_cap_bound(),
    ];
    out.push(Check::new(
        "phi1 < phi2 < phi_inf < eta1 < eta2 < eta3 < cap",
        chain.windows(2).all(|w| w[0] < w[1]),
        chain
            .iter()
            .map(|x| x.to_decimal(6))
            .collect::<Vec<_>>()
            .join(" < "),
    ));
    out.push(Check::new(
        "eta1 < cut above 4",
        constants::eta1() < constants::cut_above_four(),
        constants::cut_above_four().to_decimal(6),
    ));
    out
}

fn cfv(pre: &[u64], period: &[u64]) -> QuadraticSurd {
    CFExpansion::new(0, pre.to_vec(), period.to_vec())
        .expect("positive entries")
        .value()
}

/// Closing vertex, multiplicity-2 vertices first.
pub fn preferred_start(g: &OrbitGraph, period: &[u64]) -> Option<usize> {
    (0..g.len())
        .filter(|&x| closes(g, x, period))
        .min_by_key(|&x| (g.multiplicity(x) != 2, x))
}

/// Per-row quotients of the loops `[overline{1,3}]` and `[overline{5,2}]`,
/// written as sums of continued fractions.
pub fn table_rows() -> Vec<(Vec<u64>, Vec<QuadraticSurd>)> {
    let p13 = cfv(&[], &[1, 3]);
    let p31 = cfv(&[], &[3, 1]);
    let p52 = cfv(&[], &[5, 2]);
    let p25 = cfv(&[], &[2, 5]);
    let one_13 = cfv(&[1], &[1, 3]) + cfv(&[2], &[1, 3]);
    let r1 = cfv(&[1], &[2, 5]) + cfv(&[4], &[2, 5]);
    let r2 = cfv(&[2], &[2, 5]) + cfv(&[3], &[2, 5]);
    vec![
        (
            vec![1, 3],
            vec![
                (&p13 + int(3) + &p13) / int(4),
                one_13.clone(),
                one_13,
                &p31 + int(1) + &p31,
            ],
        ),
        (
            vec![5, 2],
            vec![
                r1.clone(),
                r2.clone(),
                r2,
                r1,
                (int(2) + int(2) * &p52) / int(4),
                int(2) * cfv(&[1], &[5, 2]),
                (int(5) + int(2) * &p25) / int(4),
            ],
        ),
    ]
}

fn check_tables(g: &OrbitGraph) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (period, expect) in table_rows() {
        let Some(x) = preferred_start(g, &period) else {
            out.push(Check::new(
                format!("loop {period:?}"),
                false,
                "no closing vertex",
            ));
            continue;
        };
        let v = lagrange_even_loop(g, x, &period)?;
        let got: Vec<String> = v
            .candidates
            .iter()
            .map(|c| c.quotient.to_decimal(7))
            .collect();
        let ok = v.candidates.len() == expect.len()
            && v.candidates
                .iter()
                .zip(&expect)
                .all(|(c, e)| c.quotient == *e);
        out.push(Check::new(
            format!("loop {period:?} at vertex {x}"),
            ok,
            format!("quotients {}", got.join(", ")),
        ));
    }
    Ok(out)
}

fn check_minimum(g: &OrbitGraph) -> Result<Vec<Check>> {
    let alpha = CFExpansion::periodic(&[1, 3])?;
    let mut min: Option<QuadraticSurd> = None;
    for x in 0..g.len() {
        let v = lagrange(g, x, &alpha)?.value;
        if min.as_ref().is_none_or(|m| v < *m) {
            min = Some(v);
        }
    }
    let min = min.expect("nonempty orbit");
    let scan = scan_even_loops(g, &ScanConfig::new(14));
    let (p1, p2) = (constants::phi1(), constants::phi2());
    let inside: Vec<&QuadraticSurd> = scan
        .iter()
        .map(|e| &e.value)
        .filter(|v| p1 < **v && **v < p2)
        .collect();
    Ok(vec![
        Check::new(
            "min over starts of L(., [overline{1,3}]) = phi1",
            min == p1,
            min.to_decimal(8),
        ),
        Check::new(
            "no loop value in (phi1, phi2), period sum <= 14",
            inside.is_empty() && scan.first().is_some_and(|e| e.value == p1),
            format!("{} distinct values", scan.len()),
        ),
    ])
}

fn check_gaps() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let gaps: Vec<_> = (0..=15).map(gap_first).collect::<Result<_>>()?;
    let ordered =
        gaps.iter().all(|g| g.left < g.right) && gaps.windows(2).all(|w| w[0].right < w[1].left);
    let tail = constants::phi_inf().to_f64() - gaps[15].right.to_f64();
    out.push(Check::new(
        "G_0..G_15 ordered and disjoint, G_15^+ within 1e-6 below phi_inf",
        ordered
            && gaps[15].right < constants::phi_inf()
            && gaps[15].right.within(&constants::phi_inf(), 6),
        format!("phi_inf - G_15^+ = {tail:.3e}"),
    ));
    let mut nested = true;
    let mut decreasing = true;
    let mut detail = String::new();
    for k in 1..=5 {
        let ik = interval_first(k)?;
        let row: Vec<_> = (1..=10).map(|n| gap_second(k, n)).collect::<Result<_>>()?;
        nested &= row.iter().all(|g| g.left < g.right && ik.contains_gap(g));
        decreasing &= row.windows(2).all(|w| w[1].right < w[0].left);
        let lower = if k == 1 {
            constants::phi2()
        } else {
            gap_first(k - 1)?.right
        };
        detail = format!(
            "k=5: G_(5,10)^- - inf I_5 = {:.3e}",
            row[9].left.to_f64() - lower.to_f64()
        );
    }
    out.push(Check::new("G_(k,n) nested in I_k, k<=5, n<=10", nested, ""));
    out.push(Check::new(
        "G_(k,n) decrease in n toward inf I_k",
        decreasing,
        detail,
    ));
    Ok(out)
}

fn check_oracle(g: &OrbitGraph, depth: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for period in [&[1u64, 3][..], &[5, 2], &[1, 4, 2, 4]] {
        let Some(x) = preferred_start(g, period) else {
            out.push(Check::new(
                format!("oracle {period:?}"),
                false,
                "no closing vertex",
            ));
            continue;
        };
        let alpha = CFExpansion::periodic(period)?;
        let r = oracle_lagrange(g, x, &alpha, depth.max(3 * period.len()))?;
        out.push(Check::new(
            format!("oracle {period:?} at vertex {x}, depth {}", r.depth),
            r.gap < 1e-4,
            format!(
                "exact {} oracle {} gap {:.2e}",
                r.exact.to_decimal(8),
                r.tail_max.to_decimal(8),
                r.gap
            ),
        ));
    }
    Ok(out)
}

fn check_subshift(g: &OrbitGraph) -> Result<Vec<Check>> {
    let eta1 = constants::eta1();
    let mut tested = 0;
    let mut bad = Vec::new();
    for w in all_words(5) {
        if w.count(Letter::A) == 0 || l_sigma_periodic(&w)? >= eta1 {
            continue;
        }
        let r = subshift_vs_orbit(g, &w)?;
        tested += 1;
        if !r.equal {
            bad.push(w.to_string());
        }
    }
    Ok(vec![Check::new(
        "L(X, [overline{expand(w)}]) = L^sigma(w), words of length <= 5",
        bad.is_empty(),
        if bad.is_empty() {
            format!("{tested} words")
        } else {
            format!("mismatch: {}", bad.join(" "))
        },
    )])
}

fn run_group(g: &OrbitGraph, name: &str, oracle_depth: usize) -> Result<Vec<Check>> {
    Ok(match name {
        "orbit" => check_orbit(g),
        "constants" => check_constants(),
        "tables" => check_tables(g)?,
        "minimum" => check_minimum(g)?,
        "lexicographic" => verify_lexicographic(&all_words(5)),
        "gaps" => check_gaps()?,
        "oracle" => check_oracle(g, oracle_depth)?,
        "subshift" => check_subshift(g)?,
        _ => vec![],
    })
}

/// Runs every group, one group when `item` names it, or otherwise the checks
/// whose name starts with `item`. An item matching nothing is an error.
pub fn run(item: Option<&str>, oracle_depth: usize) -> Result<Vec<Check>> {
    let g = b7()?;
    match item {
        Some(i) if ITEMS.contains(&i) => run_group(g, i, oracle_depth),
        Some(i) => {
            let mut out = Vec::new();
            for name in ITEMS {
                out.extend(
                    run_group(g, name, oracle_depth)?
                        .into_iter()
                        .filter(|c| c.name.starts_with(i)),
                );
            }
            if out.is_empty() {
                return Err(Error::OutOfRange(format!("unknown verify item '{i}'")));
            }
            Ok(out)
        }
        None => {
            let mut out = Vec::new();
            for name in ITEMS {
                out.extend(run_group(g, name, oracle_depth)?);
            }
            Ok(out)
        }
    }
}
