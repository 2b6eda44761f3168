//! SL(2,Z) orbits of primitive origamis, their cusps, and paths driven by
//! continued fraction entries.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde_json::json;

use crate::cf::CFExpansion;
use crate::error::{Error, Result};
use crate::origami::{Origami, Permutation};

/// A T-orbit inside an SL(2,Z) orbit. `members[k+1] = T * members[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cusp {
    pub members: Vec<usize>,
}

impl Cusp {
    pub fn width(&self) -> usize {
        self.members.len()
    }
}

/// The orbit of a primitive origami with its T and R arrows.
#[derive(Clone, Debug)]
pub struct OrbitGraph {
    vertices: Vec<Origami>,
    index: HashMap<Origami, usize>,
    t_succ: Vec<usize>,
    t_pred: Vec<usize>,
    r_img: Vec<usize>,
    cusps: Vec<Cusp>,
    cusp_of: Vec<usize>,
    multiplicity: Vec<u32>,
}

/// Sign of the next T-power along a continued fraction path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// Position along a continued fraction path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CFPathState {
    pub vertex: usize,
    pub parity: Parity,
}

impl CFPathState {
    pub fn start(vertex: usize) -> Self {
        CFPathState {
            vertex,
            parity: Parity::Even,
        }
    }
}

/// One entry `a` consumed from state `from`: `stops[i-1] = T^{±i} R * from.vertex`
/// for `1 <= i <= a`; the last stop is the Gauss vertex, the others are Farey vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    /// Index `n` of the entry `a_n` in the expansion (1-based).
    pub index: usize,
    pub entry: u64,
    pub from: CFPathState,
    pub stops: Vec<usize>,
    pub to: CFPathState,
}

impl Step {
    pub fn farey(&self) -> &[usize] {
        &self.stops[..self.stops.len() - 1]
    }

    pub fn gauss(&self) -> usize {
        *self.stops.last().expect("entry >= 1")
    }
}

/// Eventual behaviour of a path: transient steps, then a cycle of steps whose
/// end state equals its start state at the same phase of the period.
#[derive(Clone, Debug)]
pub struct PathCycle {
    pub preperiod: Vec<Step>,
    pub cycle: Vec<Step>,
}

impl PathCycle {
    /// Vertices reached at Gauss times within the cycle.
    pub fn support(&self) -> BTreeSet<usize> {
        self.cycle.iter().map(Step::gauss).collect()
    }
}

impl OrbitGraph {
    /// Closure of `seed` under T, T^-1 and R.
    pub fn enumerate(seed: &Origami) -> Result<Self> {
        if !seed.is_connected() {
            return Err(Error::NotConnected);
        }
        if !seed.is_primitive() {
            return Err(Error::NotPrimitive);
        }
        let seed = seed.canonicalize()?;
        let mut seen: BTreeSet<Origami> = BTreeSet::new();
        let mut queue = VecDeque::from([seed.clone()]);
        seen.insert(seed);
        while let Some(x) = queue.pop_front() {
            for y in [x.t(), x.t_inv(), x.r()] {
                let y = y.canonicalize()?;
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(Self::from_vertices(seen.into_iter().collect()))
    }

    /// Builds the arrows for a set of canonical origamis closed under the action.
    fn from_vertices(vertices: Vec<Origami>) -> Self {
        let index: HashMap<Origami, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), i))
            .collect();
        let look = |o: Origami| index[&o.canonicalize().expect("connected")];
        let t_succ: Vec<usize> = vertices.iter().map(|o| look(o.t())).collect();
        let r_img: Vec<usize> = vertices.iter().map(|o| look(o.r())).collect();
        let mut t_pred = vec![0; vertices.len()];
        for (i, &j) in t_succ.iter().enumerate() {
            t_pred[j] = i;
        }
        let mut cusp_of = vec![usize::MAX; vertices.len()];
        let mut cusps = Vec::new();
        for s in 0..vertices.len() {
            if cusp_of[s] != usize::MAX {
                continue;
            }
            let mut members = vec![s];
            cusp_of[s] = cusps.len();
            let mut x = t_succ[s];
            while x != s {
                cusp_of[x] = cusps.len();
                members.push(x);
                x = t_succ[x];
            }
            cusps.push(Cusp { members });
        }
        let multiplicity = vertices.iter().map(Origami::marked_multiplicity).collect();
        OrbitGraph {
            vertices,
            index,
            t_succ,
            t_pred,
            r_img,
            cusps,
            cusp_of,
            multiplicity,
        }
    }

    /// The one-vertex graph of the torus.
    pub fn torus() -> Self {
        Self::enumerate(&Origami::torus()).expect("torus is primitive")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Number of squares of every vertex.
    pub fn squares(&self) -> usize {
        self.vertices[0].n()
    }

    pub fn vertices(&self) -> &[Origami] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Origami {
        &self.vertices[i]
    }

    /// Vertex id of any labelling of a surface in the orbit.
    pub fn id_of(&self, o: &Origami) -> Option<usize> {
        o.canonicalize()
            .ok()
            .and_then(|c| self.index.get(&c).copied())
    }

    pub fn t_succ(&self, i: usize) -> usize {
        self.t_succ[i]
    }

    pub fn t_pred(&self, i: usize) -> usize {
        self.t_pred[i]
    }

    pub fn r_img(&self, i: usize) -> usize {
        self.r_img[i]
    }

    /// `T^k * vertex`.
    pub fn t_power(&self, mut i: usize, k: i64) -> usize {
        let w = self.cusps[self.cusp_of[i]].width() as i64;
        let k = k.rem_euclid(w);
        for _ in 0..k {
            i = self.t_succ[i];
        }
        i
    }

    pub fn cusps(&self) -> &[Cusp] {
        &self.cusps
    }

    pub fn cusp_of(&self, i: usize) -> usize {
        self.cusp_of[i]
    }

    pub fn cusp_width(&self, i: usize) -> usize {
        self.cusps[self.cusp_of[i]].width()
    }

    /// Cusp widths in decreasing order.
    pub fn cusp_widths(&self) -> Vec<usize> {
        let mut w: Vec<usize> = self.cusps.iter().map(Cusp::width).collect();
        w.sort_unstable_by(|a, b| b.cmp(a));
        w
    }

    /// Horizontal multiplicity of a vertex.
    pub fn multiplicity(&self, i: usize) -> u32 {
        self.multiplicity[i]
    }

    pub fn max_multiplicity(&self) -> u32 {
        self.multiplicity.iter().copied().max().unwrap_or(1)
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(i))
        }
    }

    /// Applies `R`, then `T^entry` (even parity) or `T^-entry` (odd parity).
    pub fn step(&self, from: CFPathState, entry: u64, index: usize) -> Step {
        assert!(entry >= 1, "continued fraction entries are >= 1");
        let mut x = self.r_img[from.vertex];
        let mut stops = Vec::with_capacity(entry as usize);
        // a T-orbit has period `width`, so only entry mod width steps matter
        // for the position, but every stop is recorded
        for _ in 0..entry {
            x = match from.parity {
                Parity::Even => self.t_succ[x],
                Parity::Odd => self.t_pred[x],
            };
            stops.push(x);
        }
        Step {
            index,
            entry,
            from,
            stops,
            to: CFPathState {
                vertex: x,
                parity: from.parity.flip(),
            },
        }
    }

    /// Gauss vertex `g(a_1, ..., a_n) * start`.
    pub fn walk(&self, start: usize, entries: &[u64]) -> CFPathState {
        let mut s = CFPathState::start(start);
        for (k, &a) in entries.iter().enumerate() {
            s = self.step(s, a, k + 1).to;
        }
        s
    }

    /// Steps of the path `(start, alpha)` until the pair (state, period phase)
    /// repeats.
    pub fn path_cycle(&self, start: usize, alpha: &CFExpansion) -> Result<PathCycle> {
        self.check(start)?;
        if alpha.is_rational() {
            return Err(Error::Rational);
        }
        let mut state = CFPathState::start(start);
        let mut preperiod = Vec::new();
        let m = alpha.preperiod().len();
        for (k, &a) in alpha.preperiod().iter().enumerate() {
            let st = self.step(state, a, k + 1);
            state = st.to;
            preperiod.push(st);
        }
        let period = alpha.period();
        let mut seen: HashMap<(CFPathState, usize), usize> = HashMap::new();
        let mut steps: Vec<Step> = Vec::new();
        let mut k = m + 1;
        loop {
            let phase = (k - 1 - m) % period.len();
            if let Some(&at) = seen.get(&(state, phase)) {
                let cycle = steps.split_off(at);
                preperiod.extend(steps);
                return Ok(PathCycle { preperiod, cycle });
            }
            seen.insert((state, phase), steps.len());
            let st = self.step(state, period[phase], k);
            state = st.to;
            steps.push(st);
            k += 1;
        }
    }

    /// Multiplicity of the slope `p/q` in `(0, 1]` on `start`, read off as the
    /// horizontal multiplicity of `R * g(a_1, ..., a_n) * start` where
    /// `p/q = [a_1, ..., a_n]`.
    pub fn rational_multiplicity(&self, start: usize, p: &BigInt, q: &BigInt) -> Result<u32> {
        self.check(start)?;
        let entries = slope_entries(p, q)?;
        let g = self.walk(start, &entries).vertex;
        Ok(self.multiplicity[self.r_img[g]])
    }

    /// DOT rendering: T arrows solid, R arrows dashed and undirected.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph orbit {\n  node [shape=circle];\n");
        for i in 0..self.len() {
            let _ = writeln!(
                s,
                "  v{i} [label=\"{i}\\nw={} m={}\"];",
                self.cusp_width(i),
                self.multiplicity[i]
            );
        }
        for i in 0..self.len() {
            let _ = writeln!(s, "  v{i} -> v{} [label=\"T\"];", self.t_succ[i]);
        }
        for i in 0..self.len() {
            let j = self.r_img[i];
            if i <= j {
                let _ = writeln!(s, "  v{i} -> v{j} [label=\"R\", style=dashed, dir=none];");
            }
        }
        s.push_str("}\n");
        s
    }

    /// JSON dump of vertices, arrows and cusps.
    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<_> = (0..self.len())
            .map(|i| {
                json!({
                    "id": i,
                    "origami": self.vertices[i],
                    "text": self.vertices[i].to_string(),
                    "cusp": self.cusp_of[i],
                    "cusp_width": self.cusp_width(i),
                    "m": self.multiplicity[i],
                    "t": self.t_succ[i],
                    "r": self.r_img[i],
                })
            })
            .collect();
        let cusps: Vec<_> = self
            .cusps
            .iter()
            .map(|c| json!({"members": c.members, "width": c.width()}))
            .collect();
        json!({ "squares": self.squares(), "vertices": vertices, "cusps": cusps })
    }
}

/// Continued fraction entries of `p/q` in `(0, 1]` (last entry >= 2 unless `p/q = 1`).
pub fn slope_entries(p: &BigInt, q: &BigInt) -> Result<Vec<u64>> {
    if p <= &BigInt::zero() || q < p || !p.gcd(q).to_u64().is_some_and(|g| g == 1) {
        return Err(Error::OutOfRange(format!(
            "{p}/{q} is not a reduced fraction in (0,1]"
        )));
    }
    let (mut num, mut den) = (p.clone(), q.clone());
    let mut out = Vec::new();
    while !num.is_zero() {
        let (a, r) = den.div_rem(&num);
        out.push(a.to_u64().ok_or(Error::Overflow)?);
        den = num;
        num = r;
    }
    Ok(out)
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn next_permutation(v: &mut [u32]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All connected primitive `n`-square origamis with the given zero orders
/// (decreasing), as sorted canonical forms.
pub fn enumerate_origamis(n: usize, zero_orders: &[u32]) -> Vec<Origami> {
    let mut found: BTreeSet<Origami> = BTreeSet::new();
    for part in partitions(n, n) {
        let mut cycles = Vec::new();
        let mut next = 1;
        for len in part {
            cycles.push((next..next + len).collect::<Vec<usize>>());
            next += len;
        }
        let h = Permutation::from_cycles(n, &cycles).expect("valid cycles");
        let mut images: Vec<u32> = (0..n as u32).collect();
        loop {
            let v = Permutation::from_images(images.clone()).expect("permutation");
            let o = Origami::new(h.clone(), v).expect("same size");
            if o.is_connected() && o.stratum().zero_orders == zero_orders && o.is_primitive() {
                found.insert(o.canonicalize().expect("connected"));
            }
            if !next_permutation(&mut images) {
                break;
            }
        }
    }
    found.into_iter().collect()
}

/// Splits a set of canonical origamis into SL(2,Z) orbits, largest first.
pub fn partition_orbits(set: &[Origami]) -> Result<Vec<OrbitGraph>> {
    let mut left: BTreeSet<Origami> = set.iter().cloned().collect();
    let mut orbits = Vec::new();
    while let Some(seed) = left.iter().next().cloned() {
        let g = OrbitGraph::enumerate(&seed)?;
        for v in g.vertices() {
            left.remove(v);
        }
        orbits.push(g);
    }
    orbits.sort_by_key(|g| std::cmp::Reverse(g.len()));
    Ok(orbits)
}

/// SL(2,Z) orbits of primitive 7-square origamis in H(2).
pub fn h2_seven_square_orbits() -> Result<Vec<OrbitGraph>> {
    partition_orbits(&enumerate_origamis(7, &[2]))
}

/// The 36-element orbit; fails unless the 7-square H(2) origamis split as 54 + 36.
pub fn find_b7() -> Result<OrbitGraph> {
    let orbits = h2_seven_square_orbits()?;
    let sizes: Vec<usize> = orbits.iter().map(OrbitGraph::len).collect();
    if sizes != [54, 36] {
        return Err(Error::ConventionMismatch(sizes));
    }
    Ok(orbits.into_iter().nth(1).expect("two orbits"))
}

/// `find_b7`, computed once per process.
pub fn b7() -> Result<&'static OrbitGraph> {
    static B7: OnceLock<Result<OrbitGraph>> = OnceLock::new();
    B7.get_or_init(find_b7).as_ref().map_err(Clone::clone)
}
