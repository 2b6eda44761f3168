//! Square-tiled surfaces given by a pair of permutations, and the SL(2,Z)
//! generator action on them.
//!
//! Squares are labelled `1..=n` in all text and JSON forms and `0..n`
//! internally. `h` sends a square to its right neighbour, `v` to the square
//! above it.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `{0..n}` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    /// From zero-based images.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// From one-based images, e.g. `[2, 3, 1]` for the cycle `(1,2,3)`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation(format!("{images:?}")));
        }
        Self::from_images(images.iter().map(|&x| (x - 1) as u32).collect())
    }

    /// From one-based cycles on `{1..=n}`; omitted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut used = vec![false; n];
        for cyc in cycles {
            for (k, &x) in cyc.iter().enumerate() {
                if x == 0 || x > n || used[x - 1] {
                    return Err(Error::InvalidPermutation(format!("bad cycle {cyc:?}")));
                }
                used[x - 1] = true;
                let y = cyc[(k + 1) % cyc.len()];
                images[x - 1] = (y - 1) as u32;
            }
        }
        Self::from_images(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of a zero-based point.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `self` first, then `other`: `i -> other(self(i))`.
    pub fn then(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Zero-based cycles, each starting at its smallest point, including fixed points.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            let mut cyc = vec![s];
            seen[s] = true;
            let mut x = self.apply(s);
            while x != s {
                seen[x] = true;
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }

    /// Conjugate by a relabelling `sigma`: the result maps `sigma(i)` to `sigma(self(i))`.
    pub fn relabel(&self, sigma: &Permutation) -> Self {
        let mut images = vec![0u32; self.len()];
        for i in 0..self.len() {
            images[sigma.apply(i)] = sigma.images[self.apply(i)];
        }
        Permutation { images }
    }
}

/// Composition with the left factor applied first.
impl Mul for &Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "()");
        }
        for cyc in self.cycles() {
            let s: Vec<String> = cyc.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", s.join(","))?;
        }
        Ok(())
    }
}

/// Orders of the zeros of the translation structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StratumSignature {
    /// Sorted in decreasing order.
    pub zero_orders: Vec<u32>,
}

impl StratumSignature {
    pub fn genus(&self) -> u32 {
        (self.zero_orders.iter().sum::<u32>() + 2) / 2
    }
}

impl fmt::Display for StratumSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.zero_orders.iter().map(|k| k.to_string()).collect();
        write!(f, "H({})", s.join(","))
    }
}

/// A rank-2 sublattice of Z^2 in Hermite normal form, with basis rows `(a, b)`
/// and `(0, c)`, `a, c > 0`, `0 <= b < c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Lattice {
    /// Lattice generated by the given vectors (must have rank 2).
    pub fn generated_by(vectors: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut pivot: Option<(i64, i64)> = None;
        let mut c = 0i64;
        for (x, y) in vectors {
            if x == 0 {
                c = c.gcd(&y);
                continue;
            }
            match pivot {
                None => pivot = Some(if x < 0 { (-x, -y) } else { (x, y) }),
                Some((px, py)) => {
                    let eg = px.extended_gcd(&x);
                    let g = eg.gcd;
                    let new = (g, eg.x * py + eg.y * y);
                    // the other unimodular combination kills the first coordinate
                    let rest = (x / g) * py - (px / g) * y;
                    c = c.gcd(&rest);
                    pivot = Some(new);
                }
            }
        }
        let (a, b) = pivot.unwrap_or((0, 0));
        let b = if c > 0 { b.rem_euclid(c) } else { b };
        Lattice { a, b, c }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [0, self.c]]
    }

    pub fn index(&self) -> i64 {
        self.a * self.c
    }

    pub fn is_full(&self) -> bool {
        self.a == 1 && self.b == 0 && self.c == 1
    }
}

/// SL(2,Z) generators: `T = [[1,1],[0,1]]`, `R = [[0,-1],[1,0]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    T,
    TInv,
    R,
}

/// A word in the generators, applied first letter first.
pub type GL2Word = Vec<Generator>;

/// A connected square-tiled surface.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "OrigamiJson", into = "OrigamiJson")]
pub struct Origami {
    h: Permutation,
    v: Permutation,
}

#[derive(Serialize, Deserialize)]
struct OrigamiJson {
    n: usize,
    h: Vec<usize>,
    v: Vec<usize>,
}

impl TryFrom<OrigamiJson> for Origami {
    type Error = Error;
    fn try_from(j: OrigamiJson) -> Result<Self> {
        if j.h.len() != j.n || j.v.len() != j.n {
            return Err(Error::SizeMismatch);
        }
        Origami::new(
            Permutation::from_one_based(&j.h)?,
            Permutation::from_one_based(&j.v)?,
        )
    }
}

impl From<Origami> for OrigamiJson {
    fn from(o: Origami) -> Self {
        OrigamiJson {
            n: o.n(),
            h: o.h.one_based(),
            v: o.v.one_based(),
        }
    }
}

impl Origami {
    /// The pair `(h, v)`; it need not be connected.
    pub fn new(h: Permutation, v: Permutation) -> Result<Self> {
        if h.len() != v.len() || h.is_empty() {
            return Err(Error::SizeMismatch);
        }
        Ok(Origami { h, v })
    }

    /// The one-square torus.
    pub fn torus() -> Self {
        Origami {
            h: Permutation::identity(1),
            v: Permutation::identity(1),
        }
    }

    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &Permutation {
        &self.h
    }

    pub fn v(&self) -> &Permutation {
        &self.v
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for y in [self.h.apply(x), self.v.apply(x)] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == n
    }

    /// Relabelling found by breadth-first search from `start`, visiting the
    /// right neighbour before the upper one. Entry `i` is the new label of square `i`.
    fn bfs_labels(&self, start: usize) -> Vec<u32> {
        let n = self.n();
        let mut label = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(n);
        label[start] = 0;
        order.push(start);
        let mut k = 0;
        while k < order.len() {
            let x = order[k];
            k += 1;
            for y in [self.h.apply(x), self.v.apply(x)] {
                if label[y] == u32::MAX {
                    label[y] = order.len() as u32;
                    order.push(y);
                }
            }
        }
        label
    }

    /// Conjugates both permutations by the relabelling `sigma`.
    pub fn relabel(&self, sigma: &Permutation) -> Self {
        Origami {
            h: self.h.relabel(sigma),
            v: self.v.relabel(sigma),
        }
    }

    /// Lexicographically smallest `(h, v)` among the breadth-first
    /// relabellings from every square.
    pub fn canonicalize(&self) -> Result<Self> {
        if !self.is_connected() {
            return Err(Error::NotConnected);
        }
        let mut best: Option<Origami> = None;
        for s in 0..self.n() {
            let sigma = Permutation {
                images: self.bfs_labels(s),
            };
            let cand = self.relabel(&sigma);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
        Ok(best.expect("n >= 1"))
    }

    /// Lower-left corner monodromy: the square whose lower-left corner is met
    /// next when turning counterclockwise around the lower-left corner of `i`.
    pub fn corner_permutation(&self) -> Permutation {
        let hi = self.h.inverse();
        let vi = self.v.inverse();
        hi.then(&vi).then(&self.h).then(&self.v)
    }

    pub fn stratum(&self) -> StratumSignature {
        let mut zero_orders: Vec<u32> = self
            .corner_permutation()
            .cycles()
            .iter()
            .filter(|c| c.len() >= 2)
            .map(|c| c.len() as u32 - 1)
            .collect();
        zero_orders.sort_unstable_by(|a, b| b.cmp(a));
        StratumSignature { zero_orders }
    }

    pub fn genus(&self) -> u32 {
        let vertices = self.corner_permutation().cycles().len();
        ((self.n() - vertices + 2) / 2) as u32
    }

    /// Lattice of holonomies of closed paths through square centres.
    pub fn absolute_period_lattice(&self) -> Lattice {
        let n = self.n();
        let mut pos: Vec<Option<(i64, i64)>> = vec![None; n];
        pos[0] = Some((0, 0));
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let (px, py) = pos[x].unwrap();
            for (y, step) in [(self.h.apply(x), (1, 0)), (self.v.apply(x), (0, 1))] {
                if pos[y].is_none() {
                    pos[y] = Some((px + step.0, py + step.1));
                    queue.push_back(y);
                }
            }
        }
        let mut cycles = Vec::with_capacity(2 * n);
        for x in 0..n {
            let Some((px, py)) = pos[x] else { continue };
            for (y, (sx, sy)) in [(self.h.apply(x), (1, 0)), (self.v.apply(x), (0, 1))] {
                if let Some((qx, qy)) = pos[y] {
                    cycles.push((px + sx - qx, py + sy - qy));
                }
            }
        }
        Lattice::generated_by(cycles)
    }

    pub fn is_primitive(&self) -> bool {
        self.is_connected() && self.absolute_period_lattice().is_full()
    }

    /// Image under the shear `T`, without canonicalising.
    pub fn t(&self) -> Self {
        Origami {
            h: self.h.clone(),
            v: self.h.inverse().then(&self.v),
        }
    }

    /// Image under `T^-1`, without canonicalising.
    pub fn t_inv(&self) -> Self {
        Origami {
            h: self.h.clone(),
            v: self.h.then(&self.v),
        }
    }

    /// Image under the quarter turn `R`, without canonicalising.
    pub fn r(&self) -> Self {
        Origami {
            h: self.v.inverse(),
            v: self.h.clone(),
        }
    }

    /// Applies the letters of `word` in order and canonicalises.
    pub fn act(&self, word: &[Generator]) -> Result<Self> {
        let mut o = self.clone();
        for g in word {
            o = match g {
                Generator::T => o.t(),
                Generator::TInv => o.t_inv(),
                Generator::R => o.r(),
            };
        }
        o.canonicalize()
    }

    /// Whether the lower-left corner of each square is a cone point.
    pub fn singular_corners(&self) -> Vec<bool> {
        let c = self.corner_permutation();
        (0..self.n()).map(|i| c.apply(i) != i).collect()
    }

    /// Length, in squares, of the shortest horizontal saddle connection.
    pub fn horizontal_multiplicity(&self) -> Result<u32> {
        let sing = self.singular_corners();
        if !sing.iter().any(|&s| s) {
            return Err(Error::NoSaddleConnections);
        }
        let mut best = u32::MAX;
        for cyc in self.h.cycles() {
            let marks: Vec<usize> = (0..cyc.len()).filter(|&k| sing[cyc[k]]).collect();
            if marks.is_empty() {
                continue;
            }
            for (j, &m) in marks.iter().enumerate() {
                let next = marks[(j + 1) % marks.len()];
                let gap = if next > m {
                    next - m
                } else {
                    next + cyc.len() - m
                };
                best = best.min(gap as u32);
            }
        }
        Ok(best)
    }

    /// Multiplicity used by orbit graphs: a surface without cone points is
    /// treated as a torus with one marked point (value 1).
    pub fn marked_multiplicity(&self) -> u32 {
        self.horizontal_multiplicity().unwrap_or(1)
    }
}

impl fmt::Display for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h={} v={}", self.h, self.v)
    }
}

fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    if rest == "id" {
        return Ok(out);
    }
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' at '{rest}'")))?;
        let close = body
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unclosed cycle in '{s}'")))?;
        let cyc = body[..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad square label '{t}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        if !cyc.is_empty() {
            out.push(cyc);
        }
        rest = body[close + 1..].trim_start_matches(|c: char| c == ',' || c.is_whitespace());
    }
    Ok(out)
}

impl FromStr for Origami {
    type Err = Error;

    /// Parses `h=(1,2,4)(3)(5,6,7) v=(1,3)(2,5)(4,6)(7)`. Entries inside a cycle may be
    /// separated by commas or spaces; omitted squares are fixed.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut sections: Vec<(char, usize)> = Vec::new();
        let chars: Vec<(usize, char)> = s.char_indices().collect();
        for (k, &(i, c)) in chars.iter().enumerate() {
            if c == 'h' || c == 'v' {
                let next = chars[k + 1..].iter().find(|(_, c)| !c.is_whitespace());
                if matches!(next, Some((_, '='))) {
                    sections.push((c, i));
                }
            }
        }
        let mut h_cycles = None;
        let mut v_cycles = None;
        for (j, &(name, start)) in sections.iter().enumerate() {
            let end = sections.get(j + 1).map(|x| x.1).unwrap_or(s.len());
            let text = &s[start + 1..end];
            let text = text.trim_start().strip_prefix('=').unwrap_or(text);
            let text = text.trim().trim_end_matches([',', ';']).trim();
            let cycles = parse_cycles(text)?;
            match name {
                'h' => h_cycles = Some(cycles),
                _ => v_cycles = Some(cycles),
            }
        }
        let (Some(hc), Some(vc)) = (h_cycles, v_cycles) else {
            return Err(Error::Parse(format!("expected 'h=... v=...' in '{s}'")));
        };
        let n = hc
            .iter()
            .chain(vc.iter())
            .flatten()
            .copied()
            .max()
            .unwrap_or(1);
        Origami::new(
            Permutation::from_cycles(n, &hc)?,
            Permutation::from_cycles(n, &vc)?,
        )
    }
}
