//! Words over `a = 1,4,2,4` and `b = 1,3`, the function `L^sigma` on
//! periodic and limit words, and the first two generations of gaps.

use std::fmt;
use std::str::FromStr;

use crate::cf::{min_max_tail, CFExpansion, QuadraticSurd};
use crate::constants;
use crate::error::{Error, Result};
use crate::orbit::OrbitGraph;
use crate::spectrum::{closes, lagrange};
use crate::verify::Check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn expansion(self) -> &'static [u64] {
        match self {
            Letter::A => &[1, 4, 2, 4],
            Letter::B => &[1, 3],
        }
    }

    fn symbol(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }
}

/// Finite word in the letters `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ABWord {
    letters: Vec<Letter>,
}

impl ABWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        ABWord { letters }
    }

    pub fn a() -> Self {
        ABWord::new(vec![Letter::A])
    }

    pub fn b() -> Self {
        ABWord::new(vec![Letter::B])
    }

    /// `self` repeated `n` times.
    pub fn pow(&self, n: usize) -> Self {
        ABWord::new(self.letters.repeat(n))
    }

    pub fn concat(&self, other: &ABWord) -> Self {
        ABWord::new([self.letters.as_slice(), other.letters.as_slice()].concat())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn count(&self, l: Letter) -> usize {
        self.letters.iter().filter(|&&x| x == l).count()
    }

    /// Cyclic rotation starting at letter `k`.
    pub fn rotate(&self, k: usize) -> Self {
        let mut v = self.letters.clone();
        let n = v.len();
        if n > 0 {
            v.rotate_left(k % n);
        }
        ABWord::new(v)
    }

    /// CF entries: `a -> 1,4,2,4`, `b -> 1,3`.
    pub fn expand(&self) -> Vec<u64> {
        expand_letters(self.letters.iter().copied())
    }

    /// Maximal runs `(letter, length)` of the cyclic word, starting at a run
    /// boundary. A constant word gives a single run.
    pub fn cyclic_runs(&self) -> Vec<(Letter, usize)> {
        let n = self.len();
        if n == 0 {
            return vec![];
        }
        let Some(start) = (0..n).find(|&i| self.letters[i] != self.letters[(i + n - 1) % n]) else {
            return vec![(self.letters[0], n)];
        };
        let mut runs: Vec<(Letter, usize)> = Vec::new();
        for k in 0..n {
            let l = self.letters[(start + k) % n];
            match runs.last_mut() {
                Some((x, c)) if *x == l => *c += 1,
                _ => runs.push((l, 1)),
            }
        }
        runs
    }
}

fn expand_letters(it: impl Iterator<Item = Letter>) -> Vec<u64> {
    it.flat_map(|l| l.expansion().iter().copied()).collect()
}

impl fmt::Display for ABWord {
    /// Run-length form such as `a^3b^2ab`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            write!(f, "{}", l.symbol())?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        Ok(())
    }
}

struct WordParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl WordParser<'_> {
    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn seq(&mut self) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            let item = match c {
                b'a' | b'A' => {
                    self.pos += 1;
                    vec![Letter::A]
                }
                b'b' | b'B' => {
                    self.pos += 1;
                    vec![Letter::B]
                }
                b'(' => {
                    self.pos += 1;
                    let inner = self.seq()?;
                    if self.peek() != Some(b')') {
                        return Err(Error::Parse("unclosed '('".into()));
                    }
                    self.pos += 1;
                    inner
                }
                b')' => break,
                _ => return Err(Error::Parse(format!("unexpected '{}'", c as char))),
            };
            let reps = self.exponent()?;
            out.extend(item.repeat(reps));
        }
        Ok(out)
    }

    fn exponent(&mut self) -> Result<usize> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let braced = self.peek() == Some(b'{');
        if braced {
            self.pos += 1;
        }
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let n = std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("expected exponent after '^'".into()))?;
        if braced {
            if self.peek() != Some(b'}') {
                return Err(Error::Parse("unclosed '{'".into()));
            }
            self.pos += 1;
        }
        Ok(n)
    }
}

impl FromStr for ABWord {
    type Err = Error;

    /// Accepts letters with optional exponents and groups: `ab^3`, `a^{2}b`,
    /// `(ab)^2a`. Whitespace, commas and `*` are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let clean: Vec<u8> = s
            .bytes()
            .filter(|c| !c.is_ascii_whitespace() && *c != b',' && *c != b'*')
            .collect();
        let mut p = WordParser { s: &clean, pos: 0 };
        let letters = p.seq()?;
        if p.pos != clean.len() {
            return Err(Error::Parse(format!("unbalanced ')' in '{s}'")));
        }
        if letters.is_empty() {
            return Err(Error::Parse("empty word".into()));
        }
        Ok(ABWord::new(letters))
    }
}

/// The bi-infinite limit word `v^inf u v^inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitWordSpec {
    pub u: ABWord,
    pub v: ABWord,
}

impl LimitWordSpec {
    pub fn new(u: ABWord, v: ABWord) -> Self {
        LimitWordSpec { u, v }
    }

    /// `b^inf u b^inf`.
    pub fn in_b(u: ABWord) -> Self {
        LimitWordSpec::new(u, ABWord::b())
    }
}

impl fmt::Display for LimitWordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^inf {} ({})^inf", self.v, self.u, self.v)
    }
}

/// `[1,4, expand(prefix), overline{period}]` with `period` given as CF entries.
fn bracket(prefix: &[Letter], period: &[u64]) -> QuadraticSurd {
    let mut pre = vec![1, 4];
    pre.extend(expand_letters(prefix.iter().copied()));
    CFExpansion::new(0, pre, period.to_vec())
        .expect("entries are positive")
        .value()
}

/// `L^sigma(w^inf)`: seven times the max over positions `j` with `w_j = a` of
/// `[1,4,w_{j+1},w_{j+2},...] + [1,4,w_{j-1},w_{j-2},...]`.
pub fn l_sigma_periodic(w: &ABWord) -> Result<QuadraticSurd> {
    if w.count(Letter::A) == 0 {
        return Err(Error::NotInXi);
    }
    let n = w.len();
    let l = w.letters();
    let mut best: Option<QuadraticSurd> = None;
    for j in (0..n).filter(|&j| l[j] == Letter::A) {
        let fwd = expand_letters((1..=n).map(|t| l[(j + t) % n]));
        let bwd = expand_letters((1..=n).map(|t| l[(j + n * t - t) % n]));
        let s = bracket(&[], &fwd) + bracket(&[], &bwd);
        if best.as_ref().is_none_or(|b| s > *b) {
            best = Some(s);
        }
    }
    Ok(QuadraticSurd::from_integer(7) * best.expect("w contains a"))
}

/// `L^sigma(b^inf u b^inf)` from its closed form, for `u = a^k` or
/// `u = a^k b^n a`; with `k = 2i+1` or `k = 2i+2`.
pub fn l_sigma_limit(s: &LimitWordSpec) -> Result<QuadraticSurd> {
    let no_form = || Error::NoClosedForm;
    if s.v != ABWord::b() {
        return Err(no_form());
    }
    let runs = runs_linear(s.u.letters());
    let b = Letter::B.expansion();
    let a_pow = |m: usize| vec![Letter::A; m];
    let seven = QuadraticSurd::from_integer(7);
    match runs.as_slice() {
        [(Letter::A, k)] => {
            let (i, odd) = ((k - 1) / 2, k % 2 == 1);
            let x = bracket(&a_pow(i), b);
            Ok(if odd {
                QuadraticSurd::from_integer(14) * x
            } else {
                seven * (x + bracket(&a_pow(i + 1), b))
            })
        }
        [(Letter::A, k), (Letter::B, n), (Letter::A, 1)] => {
            let (i, odd) = ((k - 1) / 2, k % 2 == 1);
            let mut tail = a_pow(i);
            tail.extend(vec![Letter::B; *n]);
            tail.push(Letter::A);
            let y = bracket(&tail, b);
            let x = bracket(&a_pow(if odd { i } else { i + 1 }), b);
            Ok(seven * (x + y))
        }
        _ => Err(no_form()),
    }
}

fn runs_linear(l: &[Letter]) -> Vec<(Letter, usize)> {
    let mut runs: Vec<(Letter, usize)> = Vec::new();
    for &x in l {
        match runs.last_mut() {
            Some((y, c)) if *y == x => *c += 1,
            _ => runs.push((x, 1)),
        }
    }
    runs
}

fn word(parts: &[(Letter, usize)]) -> ABWord {
    ABWord::new(
        parts
            .iter()
            .flat_map(|&(l, m)| std::iter::repeat_n(l, m))
            .collect(),
    )
}

/// Open gap with exact endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gap {
    pub left: QuadraticSurd,
    pub right: QuadraticSurd,
    /// 0 for `(phi1, phi2)`, 1 for `G_k`, 2 for `G_{k,n}`.
    pub generation: u8,
    pub k: usize,
    pub n: Option<usize>,
}

impl Gap {
    pub fn contains(&self, x: &QuadraticSurd) -> bool {
        self.left < *x && *x < self.right
    }
}

/// Closed interval with exact endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: QuadraticSurd,
    pub hi: QuadraticSurd,
}

impl Interval {
    pub fn contains(&self, x: &QuadraticSurd) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_gap(&self, g: &Gap) -> bool {
        self.lo < g.left && g.right < self.hi
    }
}

/// `G_0 = (phi1, phi2)` and `G_k = (L^sigma((b a^k)^inf), L^sigma(b^inf a^{k+1} b^inf))`.
pub fn gap_first(k: usize) -> Result<Gap> {
    let (left, right) = if k == 0 {
        (constants::phi1(), constants::phi2())
    } else {
        (
            l_sigma_periodic(&word(&[(Letter::B, 1), (Letter::A, k)]))?,
            l_sigma_limit(&LimitWordSpec::in_b(word(&[(Letter::A, k + 1)])))?,
        )
    };
    Ok(Gap {
        left,
        right,
        generation: if k == 0 { 0 } else { 1 },
        k,
        n: None,
    })
}

/// `G_{k,n} = (L^sigma((a^k b^{n+1})^inf), L^sigma(b^inf a^k b^n a b^inf))`.
pub fn gap_second(k: usize, n: usize) -> Result<Gap> {
    if k == 0 || n == 0 {
        return Err(Error::OutOfRange("k and n must be >= 1".into()));
    }
    Ok(Gap {
        left: l_sigma_periodic(&word(&[(Letter::A, k), (Letter::B, n + 1)]))?,
        right: l_sigma_limit(&LimitWordSpec::in_b(word(&[
            (Letter::A, k),
            (Letter::B, n),
            (Letter::A, 1),
        ])))?,
        generation: 2,
        k,
        n: Some(n),
    })
}

/// `I_k = [L^sigma(b^inf a^k b^inf), L^sigma((b a^k)^inf)]`.
pub fn interval_first(k: usize) -> Result<Interval> {
    if k == 0 {
        return Err(Error::OutOfRange("k must be >= 1".into()));
    }
    Ok(Interval {
        lo: l_sigma_limit(&LimitWordSpec::in_b(word(&[(Letter::A, k)])))?,
        hi: l_sigma_periodic(&word(&[(Letter::B, 1), (Letter::A, k)]))?,
    })
}

/// `J_n = [L^sigma(b^inf a^k b^n a b^inf), L^sigma((a^k b^n)^inf)]` inside `I_k`.
pub fn interval_second(k: usize, n: usize) -> Result<Interval> {
    if k == 0 || n == 0 {
        return Err(Error::OutOfRange("k and n must be >= 1".into()));
    }
    Ok(Interval {
        lo: l_sigma_limit(&LimitWordSpec::in_b(word(&[
            (Letter::A, k),
            (Letter::B, n),
            (Letter::A, 1),
        ])))?,
        hi: l_sigma_periodic(&word(&[(Letter::A, k), (Letter::B, n)]))?,
    })
}

/// Longest run of `a` in the cyclic word.
pub fn kappa(w: &ABWord) -> Result<usize> {
    if w.count(Letter::A) == 0 {
        return Err(Error::NotInXi);
    }
    if w.count(Letter::B) == 0 {
        return Err(Error::UnboundedRun);
    }
    Ok(w.cyclic_runs()
        .iter()
        .filter(|r| r.0 == Letter::A)
        .map(|r| r.1)
        .max()
        .expect("has a"))
}

/// Shortest `b`-run adjacent to an `a`-run of length `kappa(w)`; `None` when
/// `w` has no `b`.
pub fn nu(w: &ABWord) -> Result<Option<usize>> {
    if w.count(Letter::A) == 0 {
        return Err(Error::NotInXi);
    }
    if w.count(Letter::B) == 0 {
        return Ok(None);
    }
    let k = kappa(w)?;
    let runs = w.cyclic_runs();
    let r = runs.len();
    let mut best: Option<usize> = None;
    for (t, &(l, len)) in runs.iter().enumerate() {
        if l == Letter::A && len == k {
            for nb in [runs[(t + 1) % r], runs[(t + r - 1) % r]] {
                best = Some(best.map_or(nb.1, |x| x.min(nb.1)));
            }
        }
    }
    Ok(best)
}

/// Checks the ordering facts for the words `a`, `b`: the two comparison
/// inequalities, the separation `[1,4,u,b,w] < [1,4,u,a,w']` for each `u` in
/// `words`, and one centring instance.
pub fn verify_lexicographic(words: &[ABWord]) -> Vec<Check> {
    let a = Letter::A.expansion();
    let b = Letter::B.expansion();
    let ainf = CFExpansion::new(0, vec![], a.to_vec()).unwrap().value();
    let binf = CFExpansion::new(0, vec![], b.to_vec()).unwrap().value();
    let a_binf = CFExpansion::new(0, a.to_vec(), b.to_vec()).unwrap().value();
    let b_ainf = CFExpansion::new(0, b.to_vec(), a.to_vec()).unwrap().value();
    let two = QuadraticSurd::from_integer(2);
    let mut out = vec![
        Check::new(
            "2[a,b^inf] > [b,a^inf] + [a^inf]",
            &two * &a_binf > &b_ainf + &ainf,
            format!(
                "{} vs {}",
                (&two * &a_binf).to_decimal(10),
                (&b_ainf + &ainf).to_decimal(10)
            ),
        ),
        Check::new(
            "2[b,a^inf] < [a,b^inf] + [b^inf]",
            &two * &b_ainf < &a_binf + &binf,
            format!(
                "{} vs {}",
                (&two * &b_ainf).to_decimal(10),
                (&a_binf + &binf).to_decimal(10)
            ),
        ),
    ];
    let mut sep_ok = true;
    let mut worst = String::new();
    for u in words {
        let mut pb = vec![1, 4];
        pb.extend(u.expand());
        let mut pa = pb.clone();
        pb.extend_from_slice(b);
        pa.extend_from_slice(a);
        // extremal letter tails, then every tail with entries <= 4
        let hi_b = bracket(&[u.letters(), &[Letter::B]].concat(), a);
        let lo_a = bracket(&[u.letters(), &[Letter::A]].concat(), b);
        let (_, max_b) = min_max_tail(&pb, 4).expect("nonempty prefix");
        let (min_a, _) = min_max_tail(&pa, 4).expect("nonempty prefix");
        if !(hi_b < lo_a && max_b < min_a) {
            sep_ok = false;
            worst = format!("u={u}");
        }
    }
    out.push(Check::new(
        "[1,4,u,b,w] < [1,4,u,a,w'] for all tails",
        sep_ok,
        if sep_ok {
            format!("{} words", words.len())
        } else {
            worst
        },
    ));
    // i=j=1, i'=2, j'=0 with both tails b^inf
    let ab = [Letter::A, Letter::B];
    let lhs = bracket(&ab, b) + bracket(&ab, b);
    let rhs = bracket(&[Letter::A, Letter::A, Letter::B], b) + bracket(&[Letter::B], b);
    out.push(Check::new(
        "centring: 2[1,4,a,b,b^inf] > [1,4,a^2,b,b^inf] + [1,4,b,b^inf]",
        lhs > rhs,
        format!("{} vs {}", lhs.to_decimal(10), rhs.to_decimal(10)),
    ));
    out
}

/// Outcome of comparing `L^sigma(w^inf)` with `L(X, [overline{expand(w)}])`.
#[derive(Clone, Debug)]
pub struct SubshiftReport {
    pub word: ABWord,
    pub vertex: usize,
    pub alpha: CFExpansion,
    pub lagrange: QuadraticSurd,
    pub l_sigma: QuadraticSurd,
    pub equal: bool,
}

/// Vertices where both the `a` loop and the `b` loop close, vertices of
/// multiplicity-2 cusps first.
pub fn loop_vertices(g: &OrbitGraph) -> Vec<usize> {
    let mut v: Vec<usize> = (0..g.len())
        .filter(|&x| closes(g, x, Letter::A.expansion()) && closes(g, x, Letter::B.expansion()))
        .collect();
    v.sort_by_key(|&x| (g.multiplicity(x) != 2, x));
    v
}

pub fn subshift_vs_orbit(g: &OrbitGraph, w: &ABWord) -> Result<SubshiftReport> {
    let l_sigma = l_sigma_periodic(w)?;
    if l_sigma >= constants::eta1() {
        return Err(Error::OutOfRange("L^sigma(w) must be below eta1".into()));
    }
    let vertex = *loop_vertices(g).first().ok_or(Error::NoRealizingVertex)?;
    let alpha = CFExpansion::new(0, vec![], w.expand())?;
    let lagrange = lagrange(g, vertex, &alpha)?.value;
    Ok(SubshiftReport {
        word: w.clone(),
        vertex,
        alpha,
        equal: lagrange == l_sigma,
        lagrange,
        l_sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let w: ABWord = "a^3b^2ab".parse().unwrap();
        assert_eq!(w.len(), 7);
        assert_eq!(w.to_string(), "a^3b^2ab");
        let g: ABWord = "(ab)^2a".parse().unwrap();
        assert_eq!(g.to_string(), "ababa");
        assert_eq!(w.expand().len(), 4 * 4 + 2 * 3);
        assert!("".parse::<ABWord>().is_err());
        assert!("ac".parse::<ABWord>().is_err());
        assert!("(ab".parse::<ABWord>().is_err());
    }

    #[test]
    fn kappa_nu_examples() {
        let w: ABWord = "ab".parse().unwrap();
        assert_eq!(kappa(&w).unwrap(), 1);
        let w: ABWord = "a^3b^2ab".parse().unwrap();
        assert_eq!(kappa(&w).unwrap(), 3);
        assert_eq!(nu(&"aba^2".parse().unwrap()).unwrap(), Some(1));
        assert_eq!(nu(&"a^2b^3a^2b".parse().unwrap()).unwrap(), Some(1));
        assert_eq!(nu(&"a^3".parse().unwrap()).unwrap(), None);
        assert_eq!(kappa(&"b".parse().unwrap()), Err(Error::NotInXi));
    }

    #[test]
    fn a_gives_phi_inf() {
        assert_eq!(
            l_sigma_periodic(&ABWord::a()).unwrap(),
            constants::phi_inf()
        );
        assert_eq!(
            l_sigma_limit(&LimitWordSpec::in_b(ABWord::a())).unwrap(),
            constants::phi2()
        );
        assert_eq!(l_sigma_periodic(&ABWord::b()), Err(Error::NotInXi));
    }
}
