//! Eventually periodic continued fractions and the quantities built from them.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::surd::QuadraticSurd;
use crate::error::{Error, Result};

/// `a0 + [b_1, ..., b_m, overline{c_1, ..., c_L}]`; an empty period means the
/// expansion is finite (a rational number).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CFExpansion {
    integer_part: BigInt,
    preperiod: Vec<u64>,
    period: Vec<u64>,
}

fn primitive_root(period: &[u64]) -> usize {
    let n = period.len();
    (1..=n)
        .find(|&t| n.is_multiple_of(t) && (0..n).all(|i| period[i] == period[i % t]))
        .unwrap_or(n)
}

/// Lexicographically smallest rotation of a word.
pub fn min_rotation(w: &[u64]) -> Vec<u64> {
    (0..w.len().max(1))
        .map(|s| {
            let mut v = w.to_vec();
            v.rotate_left(s.min(w.len()));
            v
        })
        .min()
        .unwrap_or_default()
}

impl CFExpansion {
    /// Builds and normalises: minimal preperiod, primitive period, and for
    /// finite expansions a last entry different from 1.
    pub fn new(
        integer_part: impl Into<BigInt>,
        preperiod: Vec<u64>,
        period: Vec<u64>,
    ) -> Result<Self> {
        if preperiod.iter().chain(period.iter()).any(|&a| a == 0) {
            return Err(Error::ZeroEntry);
        }
        let mut e = CFExpansion {
            integer_part: integer_part.into(),
            preperiod,
            period,
        };
        e.normalize();
        Ok(e)
    }

    /// `[overline{period}]` with integer part 0.
    pub fn periodic(period: &[u64]) -> Result<Self> {
        Self::new(0, vec![], period.to_vec())
    }

    /// `a0 + [entries]`, a rational number.
    pub fn finite(integer_part: impl Into<BigInt>, entries: &[u64]) -> Result<Self> {
        Self::new(integer_part, entries.to_vec(), vec![])
    }

    fn normalize(&mut self) {
        if !self.period.is_empty() {
            let t = primitive_root(&self.period);
            self.period.truncate(t);
            while !self.preperiod.is_empty() && self.preperiod.last() == self.period.last() {
                self.preperiod.pop();
                self.period.rotate_right(1);
            }
        } else if self.preperiod.len() >= 2 && self.preperiod.last() == Some(&1) {
            self.preperiod.pop();
            *self.preperiod.last_mut().unwrap() += 1;
        } else if self.preperiod == [1] {
            self.integer_part += 1;
            self.preperiod.clear();
        }
    }

    pub fn integer_part(&self) -> &BigInt {
        &self.integer_part
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    pub fn is_rational(&self) -> bool {
        self.period.is_empty()
    }

    /// Entry `a_k` for `k >= 1`, `None` past the end of a finite expansion.
    pub fn entry(&self, k: usize) -> Option<u64> {
        if k == 0 {
            return None;
        }
        let m = self.preperiod.len();
        if k <= m {
            return Some(self.preperiod[k - 1]);
        }
        if self.period.is_empty() {
            return None;
        }
        Some(self.period[(k - 1 - m) % self.period.len()])
    }

    /// The entries `a_1, a_2, ...` (infinite unless rational).
    pub fn entries(&self) -> impl Iterator<Item = u64> + '_ {
        (1..).map_while(move |k| self.entry(k))
    }

    /// Phase in the period of entry `a_k`, for `k` past the preperiod.
    pub fn phase(&self, k: usize) -> Option<usize> {
        let m = self.preperiod.len();
        if self.period.is_empty() || k <= m {
            return None;
        }
        Some((k - 1 - m) % self.period.len())
    }

    /// Period rotated to its lexicographically minimal form; equal for loops
    /// that differ only by where they start.
    pub fn period_key(&self) -> Vec<u64> {
        min_rotation(&self.period)
    }

    /// Exact value.
    pub fn value(&self) -> QuadraticSurd {
        eval_cf(self)
    }
}

impl fmt::Display for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| {
            v.iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        if !self.integer_part.is_zero() {
            write!(f, "{}+", self.integer_part)?;
        }
        if self.period.is_empty() {
            write!(f, "[{}]", join(&self.preperiod))
        } else {
            write!(f, "[{};({})]", join(&self.preperiod), join(&self.period))
        }
    }
}

fn parse_entries(s: &str) -> Result<Vec<u64>> {
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad entry '{t}'")))
        })
        .collect()
}

impl FromStr for CFExpansion {
    type Err = Error;

    /// Parses `[1,4;(1,3)]`, `[;(1,3)]`, `[1,4,(1,3)]`, `[(1,3)]`, `[1,2,3]`
    /// and an optional integer part prefix such as `2+[;(1)]`. The period is
    /// the parenthesised tail.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let open = s
            .find('[')
            .ok_or_else(|| Error::Parse(format!("expected '[' in '{s}'")))?;
        let head = &s[..open];
        let body = s[open + 1..]
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse(format!("expected trailing ']' in '{s}'")))?;
        let integer_part: BigInt = if head.is_empty() {
            BigInt::zero()
        } else {
            let h = head
                .strip_suffix('+')
                .ok_or_else(|| Error::Parse(format!("expected 'a0+' before '[' in '{s}'")))?;
            h.parse()
                .map_err(|_| Error::Parse(format!("bad integer part '{h}'")))?
        };
        // the period is the parenthesised tail; ';' and ',' both separate
        let (pre, per) = match body.find('(') {
            Some(at) => {
                let per = body[at + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("unclosed period in '{s}'")))?;
                (&body[..at], per)
            }
            None => (body, ""),
        };
        let pre = pre.trim_end_matches([',', ';']).replace(';', ",");
        let pre = pre.trim_start_matches(',');
        let pre = parse_entries(pre)?;
        let per = parse_entries(per)?;
        if head.is_empty() && pre.is_empty() && per.is_empty() {
            return Err(Error::EmptyExpansion);
        }
        CFExpansion::new(integer_part, pre, per)
    }
}

/// `2x2` integer matrix `[[a, b], [c, d]]` acting as `x -> (ax+b)/(cx+d)`.
#[derive(Clone, Debug)]
struct Mobius([BigInt; 4]);

impl Mobius {
    fn identity() -> Self {
        Mobius([BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()])
    }

    /// Right-multiplies by `[[0,1],[1,c]]`, i.e. appends the entry `c`.
    fn push(&mut self, c: u64) {
        let [a, b, cc, d] = &self.0;
        let c = BigInt::from(c);
        self.0 = [b.clone(), a + &c * b, d.clone(), cc + &c * d];
    }

    fn of(entries: &[u64]) -> Self {
        let mut m = Self::identity();
        for &c in entries {
            m.push(c);
        }
        m
    }

    fn apply(&self, x: &QuadraticSurd) -> QuadraticSurd {
        let [a, b, c, d] = &self.0;
        let num =
            x * &QuadraticSurd::from_integer(a.clone()) + QuadraticSurd::from_integer(b.clone());
        let den =
            x * &QuadraticSurd::from_integer(c.clone()) + QuadraticSurd::from_integer(d.clone());
        num / den
    }
}

/// `[overline{c_1, ..., c_L}]`, the fixed point in (0,1) of the period's Möbius map.
pub fn periodic_value(period: &[u64]) -> QuadraticSurd {
    assert!(!period.is_empty() && period.iter().all(|&c| c >= 1));
    let [a, b, c, d] = Mobius::of(period).0;
    // c x^2 + (d - a) x - b = 0, positive root
    let disc = (&a + &d) * (&a + &d) - BigInt::from(4) * (&a * &d - &b * &c);
    QuadraticSurd::new(&a - &d, 1, disc, BigInt::from(2) * c).expect("positive discriminant")
}

/// Exact value of an expansion.
pub fn eval_cf(e: &CFExpansion) -> QuadraticSurd {
    let frac = if e.period.is_empty() {
        if e.preperiod.is_empty() {
            QuadraticSurd::zero()
        } else {
            Mobius::of(&e.preperiod).apply(&QuadraticSurd::zero())
        }
    } else {
        let x = periodic_value(&e.period);
        Mobius::of(&e.preperiod).apply(&x)
    };
    frac + QuadraticSurd::from_integer(e.integer_part.clone())
}

fn to_entry(a: &BigInt) -> Result<u64> {
    a.to_u64().filter(|&v| v >= 1).ok_or(Error::Overflow)
}

fn cf_of_rational(p: &BigInt, r: &BigInt) -> Result<CFExpansion> {
    let (a0, mut num) = p.div_mod_floor(r);
    let mut den = r.clone();
    let mut entries = Vec::new();
    // fractional part num/den in [0,1)
    while !num.is_zero() {
        let (a, rem) = den.div_mod_floor(&num);
        entries.push(to_entry(&a)?);
        den = num;
        num = rem;
    }
    CFExpansion::new(a0, entries, vec![])
}

/// Continued fraction of a surd; periodic for quadratic irrationals.
pub fn cf_of_surd(x: &QuadraticSurd) -> Result<CFExpansion> {
    if x.is_rational() {
        return cf_of_rational(x.p(), x.r());
    }
    // x = (P + sqrt(D)) / Q with Q | D - P^2
    let sgn = if x.q().is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let mut pp = &sgn * x.p();
    let mut qq = &sgn * x.r();
    let mut dd = x.q() * x.q() * x.d();
    if !((&dd - &pp * &pp) % &qq).is_zero() {
        let m = qq.abs();
        pp *= &m;
        dd *= &m * &m;
        qq *= &m;
    }
    let s0 = dd.sqrt();
    let floor_of = |p: &BigInt, q: &BigInt| -> BigInt {
        if q.is_positive() {
            (p + &s0).div_floor(q)
        } else {
            (p + &s0 + BigInt::one()).div_floor(q)
        }
    };
    let a0 = floor_of(&pp, &qq);
    pp = &a0 * &qq - &pp;
    qq = (&dd - &pp * &pp) / &qq;
    let mut entries = Vec::new();
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    loop {
        if let Some(&start) = seen.get(&(pp.clone(), qq.clone())) {
            let period = entries.split_off(start);
            return CFExpansion::new(a0, entries, period);
        }
        seen.insert((pp.clone(), qq.clone()), entries.len());
        let a = floor_of(&pp, &qq);
        entries.push(to_entry(&a)?);
        pp = &a * &qq - &pp;
        qq = (&dd - &pp * &pp) / &qq;
    }
}

/// A Gauss convergent (`i = a_k`) or Farey intermediate (`1 <= i < a_k`)
/// `p/q = a0 + [a_1, ..., a_{k-1}, i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approximant {
    pub index: usize,
    pub i: u64,
    pub p: BigInt,
    pub q: BigInt,
    pub gauss: bool,
}

/// All Gauss and Farey approximants with index `1..=depth`, in order.
pub fn approximants(e: &CFExpansion, depth: usize) -> Vec<Approximant> {
    let (mut p2, mut q2) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (e.integer_part.clone(), BigInt::one());
    let mut out = Vec::new();
    for (k, a) in e.entries().take(depth).enumerate() {
        for i in 1..=a {
            let bi = BigInt::from(i);
            out.push(Approximant {
                index: k + 1,
                i,
                p: &bi * &p1 + &p2,
                q: &bi * &q1 + &q2,
                gauss: i == a,
            });
        }
        let ba = BigInt::from(a);
        let p = &ba * &p1 + &p2;
        let q = &ba * &q1 + &q2;
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
    }
    out
}

/// Gauss convergents only.
pub fn convergents(e: &CFExpansion, depth: usize) -> Vec<(BigInt, BigInt)> {
    approximants(e, depth)
        .into_iter()
        .filter(|a| a.gauss)
        .map(|a| (a.p, a.q))
        .collect()
}

/// Forward and backward periodic tails of a period `c_0..c_{L-1}`:
/// `forward[j] = [overline{c_j, c_{j+1}, ...}]`,
/// `backward[j] = [overline{c_j, c_{j-1}, ...}]`. All lie in one quadratic field.
#[derive(Clone, Debug)]
pub struct PeriodTails {
    period: Vec<u64>,
    forward: Vec<QuadraticSurd>,
    backward: Vec<QuadraticSurd>,
}

impl PeriodTails {
    pub fn new(period: &[u64]) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Rational);
        }
        if period.contains(&0) {
            return Err(Error::ZeroEntry);
        }
        let l = period.len();
        let mut forward = Vec::with_capacity(l);
        forward.push(periodic_value(period));
        for j in 0..l - 1 {
            let next = forward[j].recip()? - QuadraticSurd::from_integer(period[j]);
            forward.push(next);
        }
        let rev: Vec<u64> = period.iter().rev().copied().collect();
        let mut backward = vec![QuadraticSurd::zero(); l];
        backward[l - 1] = periodic_value(&rev);
        let mut prev = backward[l - 1].clone();
        for j in 0..l - 1 {
            let b = (QuadraticSurd::from_integer(period[j]) + &prev).recip()?;
            backward[j] = b.clone();
            prev = b;
        }
        Ok(PeriodTails {
            period: period.to_vec(),
            forward,
            backward,
        })
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    pub fn forward(&self, j: usize) -> &QuadraticSurd {
        &self.forward[j % self.period.len()]
    }

    pub fn backward(&self, j: usize) -> &QuadraticSurd {
        let l = self.period.len();
        &self.backward[j % l]
    }

    /// `D` at phase `j` (entry `c_j`) and `1 <= i <= c_j`:
    /// `[i, overline{c_{j-1}, c_{j-2}, ...}] + [c_j - i, overline{c_{j+1}, ...}]`.
    pub fn d_value(&self, j: usize, i: u64) -> Result<QuadraticSurd> {
        let l = self.period.len();
        let j = j % l;
        let c = self.period[j];
        if i == 0 || i > c {
            return Err(Error::OutOfRange(format!("i={i} not in 1..={c}")));
        }
        let back = (QuadraticSurd::from_integer(i) + self.backward(j + l - 1)).recip()?;
        let fwd = (QuadraticSurd::from_integer(c - i) + self.forward(j + 1)).recip()?;
        Ok(back + fwd)
    }
}

/// `D(n, i, alpha)` in asymptotic mode: the backward tail is replaced by its
/// periodic limit. `n` must lie past the preperiod.
pub fn d_value(e: &CFExpansion, n: usize, i: u64) -> Result<QuadraticSurd> {
    let j = e
        .phase(n)
        .ok_or_else(|| Error::OutOfRange(format!("n={n} is not in the periodic part")))?;
    PeriodTails::new(&e.period)?.d_value(j, i)
}

/// `limsup [a_n, ..., a_1] + a_{n+1} + [a_{n+2}, ...]`, exact.
pub fn classical_lagrange(e: &CFExpansion) -> Result<QuadraticSurd> {
    if e.is_rational() {
        return Err(Error::Unbounded("rational number".into()));
    }
    let tails = PeriodTails::new(&e.period)?;
    let mut best: Option<QuadraticSurd> = None;
    for (j, &c) in e.period.iter().enumerate() {
        let v = tails.d_value(j, c)?;
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    }
    Ok(best.expect("nonempty period"))
}

/// Exact `(min, max)` of `[prefix, t_1, t_2, ...]` over tails with `1 <= t_k <= m`.
pub fn min_max_tail(prefix: &[u64], m: u64) -> Result<(QuadraticSurd, QuadraticSurd)> {
    if m == 0 {
        return Err(Error::ZeroEntry);
    }
    let low = CFExpansion::new(0, prefix.to_vec(), vec![m, 1])?.value();
    let high = CFExpansion::new(0, prefix.to_vec(), vec![1, m])?.value();
    if prefix.len().is_multiple_of(2) {
        Ok((low, high))
    } else {
        Ok((high, low))
    }
}
