//! Lagrange values `L(S, alpha)` on an orbit graph, via the finite max over
//! the asymptotic cycle of the continued fraction path.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::cf::{
    approximants, classical_lagrange, min_rotation, CFExpansion, PeriodTails, QuadraticSurd,
};
use crate::constants;
use crate::error::{Error, Result};
use crate::orbit::{CFPathState, OrbitGraph, Step};

/// One term `D(n, i, alpha) / m^2` of the max.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    /// Position in the cycle (1-based).
    pub n: usize,
    pub i: u64,
    /// Vertex `R * g(a_1, ..., a_{n-1}, i) * start` whose multiplicity is used.
    pub vertex: usize,
    pub d: QuadraticSurd,
    pub m2: u32,
    pub quotient: QuadraticSurd,
}

#[derive(Clone, Debug)]
pub struct LagrangeValue {
    /// `N * max quotient`, `N` the number of squares.
    pub value: QuadraticSurd,
    /// Every term of the max, in path order.
    pub candidates: Vec<Candidate>,
    /// Indices into `candidates` of the terms attaining the max.
    pub witnesses: Vec<usize>,
}

impl LagrangeValue {
    pub fn witness_list(&self) -> impl Iterator<Item = &Candidate> {
        self.witnesses.iter().map(move |&k| &self.candidates[k])
    }
}

/// D values of a period, computed once per `(phase, i)`.
struct DTable {
    tails: PeriodTails,
    cache: HashMap<(usize, u64), QuadraticSurd>,
}

impl DTable {
    fn new(period: &[u64]) -> Result<Self> {
        Ok(DTable {
            tails: PeriodTails::new(period)?,
            cache: HashMap::new(),
        })
    }

    fn get(&mut self, phase: usize, i: u64) -> Result<QuadraticSurd> {
        if let Some(v) = self.cache.get(&(phase, i)) {
            return Ok(v.clone());
        }
        let v = self.tails.d_value(phase, i)?;
        self.cache.insert((phase, i), v.clone());
        Ok(v)
    }
}

fn check_hypothesis(g: &OrbitGraph, alpha: &CFExpansion) -> Result<()> {
    let m = g.max_multiplicity() as i64;
    // m <= 2: m^2 - 2 <= 2 < sqrt(5) <= L(T^2, alpha) for every alpha
    if m > 2 {
        let bound = QuadraticSurd::from_integer(m * m - 2);
        if bound >= classical_lagrange(alpha)? {
            return Err(Error::Hypothesis);
        }
    }
    Ok(())
}

fn evaluate_steps(
    g: &OrbitGraph,
    steps: &[Step],
    phases: impl Fn(&Step) -> usize,
    table: &mut DTable,
) -> Result<LagrangeValue> {
    let mut candidates = Vec::new();
    for (pos, st) in steps.iter().enumerate() {
        let phase = phases(st);
        for (k, &y) in st.stops.iter().enumerate() {
            let i = k as u64 + 1;
            let vertex = g.r_img(y);
            let m = g.multiplicity(vertex);
            let d = table.get(phase, i)?;
            let quotient = if m == 1 {
                d.clone()
            } else {
                &d / &QuadraticSurd::from_integer(m * m)
            };
            candidates.push(Candidate {
                n: pos + 1,
                i,
                vertex,
                d,
                m2: m * m,
                quotient,
            });
        }
    }
    let mut best = 0;
    for k in 1..candidates.len() {
        if candidates[k].quotient > candidates[best].quotient {
            best = k;
        }
    }
    let top = candidates[best].quotient.clone();
    let witnesses = (0..candidates.len())
        .filter(|&k| candidates[k].quotient == top)
        .collect();
    let value = QuadraticSurd::from_integer(g.squares() as i64) * top;
    Ok(LagrangeValue {
        value,
        candidates,
        witnesses,
    })
}

fn require_unit_interval(alpha: &CFExpansion) -> Result<()> {
    if alpha.is_rational() {
        return Err(Error::Rational);
    }
    if alpha.integer_part() != &BigInt::from(0) {
        return Err(Error::OutOfRange("alpha must lie in (0,1)".into()));
    }
    Ok(())
}

/// `L(start, alpha)` for an eventually periodic irrational `alpha` in (0,1).
pub fn lagrange(g: &OrbitGraph, start: usize, alpha: &CFExpansion) -> Result<LagrangeValue> {
    require_unit_interval(alpha)?;
    check_hypothesis(g, alpha)?;
    let pc = g.path_cycle(start, alpha)?;
    let mut table = DTable::new(alpha.period())?;
    evaluate_steps(
        g,
        &pc.cycle,
        |st| alpha.phase(st.index).expect("periodic part"),
        &mut table,
    )
}

/// Whether `g(period) * start = start` with the parity restored.
pub fn closes(g: &OrbitGraph, start: usize, period: &[u64]) -> bool {
    period.len().is_multiple_of(2) && g.walk(start, period) == CFPathState::start(start)
}

/// Lagrange value of the even loop `(start, [overline{period}])`: the max over
/// `1 <= n <= len(period)` and `1 <= i <= a_n`.
pub fn lagrange_even_loop(g: &OrbitGraph, start: usize, period: &[u64]) -> Result<LagrangeValue> {
    if start >= g.len() {
        return Err(Error::UnknownVertex(start));
    }
    if period.is_empty() || !closes(g, start, period) {
        return Err(Error::NotEvenLoop);
    }
    let alpha = CFExpansion::new(0, vec![], period.to_vec())?;
    check_hypothesis(g, &alpha)?;
    let mut table = DTable::new(period)?;
    even_loop_with_table(g, start, period, &mut table)
}

fn even_loop_with_table(
    g: &OrbitGraph,
    start: usize,
    period: &[u64],
    table: &mut DTable,
) -> Result<LagrangeValue> {
    let mut steps = Vec::with_capacity(period.len());
    let mut s = CFPathState::start(start);
    for (k, &a) in period.iter().enumerate() {
        let st = g.step(s, a, k + 1);
        s = st.to;
        steps.push(st);
    }
    evaluate_steps(g, &steps, |st| st.index - 1, table)
}

/// One point of the approximation oracle.
#[derive(Clone, Debug)]
pub struct OracleSample {
    pub index: usize,
    pub i: u64,
    pub gauss: bool,
    pub p: BigInt,
    pub q: BigInt,
    pub m: u32,
    pub value: QuadraticSurd,
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    /// Max of the samples with index in `[depth/2, depth]`.
    pub tail_max: QuadraticSurd,
    pub exact: QuadraticSurd,
    /// `|exact - tail_max|`.
    pub gap: f64,
    pub samples: Vec<OracleSample>,
    pub depth: usize,
}

/// Evaluates `N / (m^2(p/q, start) * q * |q alpha - p|)` over all Gauss and
/// Farey approximants up to `depth`, with `m` from the slope's own path.
pub fn oracle_lagrange(
    g: &OrbitGraph,
    start: usize,
    alpha: &CFExpansion,
    depth: usize,
) -> Result<OracleReport> {
    require_unit_interval(alpha)?;
    let need = 3 * (alpha.preperiod().len() + alpha.period().len());
    if depth < need {
        return Err(Error::OutOfRange(format!("depth {depth} < {need}")));
    }
    let exact = lagrange(g, start, alpha)?.value;
    let x = alpha.value();
    let nsq = QuadraticSurd::from_integer(g.squares() as i64);
    let mut samples = Vec::new();
    for ap in approximants(alpha, depth) {
        let m = g.rational_multiplicity(start, &ap.p, &ap.q)?;
        let qs = QuadraticSurd::from_integer(ap.q.clone());
        let err = (&qs * &x - QuadraticSurd::from_integer(ap.p.clone())).abs();
        let den = QuadraticSurd::from_integer((m * m) as i64) * qs * err;
        samples.push(OracleSample {
            index: ap.index,
            i: ap.i,
            gauss: ap.gauss,
            p: ap.p,
            q: ap.q,
            m,
            value: &nsq / &den,
        });
    }
    let lo = depth / 2;
    let tail_max = samples
        .iter()
        .filter(|s| s.index >= lo)
        .map(|s| &s.value)
        .max()
        .cloned()
        .ok_or_else(|| Error::OutOfRange("empty window".into()))?;
    let gap = (&exact - &tail_max).abs().to_f64();
    Ok(OracleReport {
        tail_max,
        exact,
        gap,
        samples,
        depth,
    })
}

/// Limits for `scan_even_loops`.
#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub max_period_sum: u64,
    pub max_entry: u64,
    /// Values above the ceiling are dropped; `None` keeps everything.
    pub ceiling: Option<QuadraticSurd>,
}

impl ScanConfig {
    pub fn new(max_period_sum: u64) -> Self {
        ScanConfig {
            max_period_sum,
            max_entry: 6,
            ceiling: Some(constants::eta3()),
        }
    }

    /// Warnings for settings outside the range where entries <= 6 suffice.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        let above = match &self.ceiling {
            None => true,
            Some(c) => *c > constants::entry_cap_bound(),
        };
        if above && self.max_entry <= 6 {
            w.push(
                "ceiling exceeds 7(7+2[overline{7,1}])/4: entries > 6 may be needed for completeness"
                    .into(),
            );
        }
        if self.max_entry > 6 {
            w.push(format!("entry cap raised to {}", self.max_entry));
        }
        w
    }
}

#[derive(Clone, Debug)]
pub struct ScanEntry {
    pub vertex: usize,
    /// Even-length loop period (odd periods are doubled).
    pub period: Vec<u64>,
    pub value: QuadraticSurd,
}

fn compositions(max_sum: u64, max_entry: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(left: u64, max_entry: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        for a in 1..=max_entry.min(left) {
            cur.push(a);
            out.push(cur.clone());
            rec(left - a, max_entry, cur, out);
            cur.pop();
        }
    }
    rec(max_sum, max_entry, &mut cur, &mut out);
    out
}

fn is_primitive_word(w: &[u64]) -> bool {
    let n = w.len();
    (1..n).all(|t| !n.is_multiple_of(t) || (0..n).any(|i| w[i] != w[i % t]))
}

/// Even-shift canonical: the word is minimal among its rotations by an even amount.
fn is_even_rotation_min(w: &[u64]) -> bool {
    let n = w.len();
    (0..n).step_by(2).all(|s| {
        let rot = w[s..].iter().chain(w[..s].iter());
        w.iter().cmp(rot) != Ordering::Greater
    })
}

/// Lagrange values of all even loops whose period (before doubling odd
/// lengths) has entries in `1..=max_entry` and sum at most `max_period_sum`,
/// over all start vertices; one entry per distinct value, ascending.
pub fn scan_even_loops(g: &OrbitGraph, config: &ScanConfig) -> Vec<ScanEntry> {
    let periods: Vec<Vec<u64>> = compositions(config.max_period_sum, config.max_entry)
        .into_iter()
        .filter(|c| is_primitive_word(c))
        .filter_map(|c| {
            if c.len() % 2 == 1 {
                // every rotation of an odd word is an even rotation of its square
                (min_rotation(&c) == c).then(|| [c.clone(), c].concat())
            } else {
                is_even_rotation_min(&c).then_some(c)
            }
        })
        .collect();
    let mut found: Vec<ScanEntry> = periods
        .par_iter()
        .flat_map_iter(|period| {
            let starts: Vec<usize> = (0..g.len()).filter(|&x| closes(g, x, period)).collect();
            let mut out = Vec::new();
            if starts.is_empty() {
                return out.into_iter();
            }
            let mut table = DTable::new(period).expect("nonempty period");
            for x in starts {
                let v = even_loop_with_table(g, x, period, &mut table).expect("closed loop");
                if config.ceiling.as_ref().is_none_or(|c| v.value <= *c) {
                    out.push(ScanEntry {
                        vertex: x,
                        period: period.clone(),
                        value: v.value,
                    });
                }
            }
            out.into_iter()
        })
        .collect();
    found.sort_by(|a, b| {
        a.value
            .cmp(&b.value)
            .then(a.period.len().cmp(&b.period.len()))
            .then(a.period.cmp(&b.period))
            .then(a.vertex.cmp(&b.vertex))
    });
    found.dedup_by(|b, a| a.value == b.value);
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_count() {
        // compositions of s with parts <= 6, s = 1..=4: 1 + 2 + 4 + 8
        assert_eq!(compositions(4, 6).len(), 15);
        assert_eq!(compositions(3, 1).len(), 3);
    }

    #[test]
    fn even_rotation_canonical() {
        assert!(is_even_rotation_min(&[1, 3]));
        assert!(is_even_rotation_min(&[3, 1]));
        assert!(is_even_rotation_min(&[1, 3, 2, 4]));
        assert!(!is_even_rotation_min(&[2, 4, 1, 3]));
        assert!(is_primitive_word(&[1, 3]));
        assert!(!is_primitive_word(&[1, 3, 1, 3]));
    }

    #[test]
    fn torus_is_classical() {
        let g = OrbitGraph::torus();
        let alpha: CFExpansion = "[;(1)]".parse().unwrap();
        let v = lagrange(&g, 0, &alpha).unwrap();
        assert_eq!(v.value, QuadraticSurd::sqrt(5).unwrap());
        let alpha: CFExpansion = "[;(2)]".parse().unwrap();
        assert_eq!(
            lagrange(&g, 0, &alpha).unwrap().value,
            QuadraticSurd::sqrt(8).unwrap()
        );
    }
}
