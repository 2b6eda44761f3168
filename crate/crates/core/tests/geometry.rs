//! Independent checks of the origami layer: straight-line tracing for slope
//! multiplicities, brute-force relabelling for canonical forms, and closed-form
//! counts of primitive H(2) origamis.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use origami_spectrum::orbit::{b7, enumerate_origamis, partition_orbits, OrbitGraph};
use origami_spectrum::origami::{Generator, Origami, Permutation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Squares whose lower-left corner is the same point as the one of `i`,
/// found by walking around the corner one square at a time.
fn corner_class(o: &Origami, i: usize) -> usize {
    let (h, v) = (o.h(), o.v());
    let (hi, vi) = (h.inverse(), v.inverse());
    let mut len = 1;
    let mut x = v.apply(h.apply(vi.apply(hi.apply(i))));
    while x != i {
        x = v.apply(h.apply(vi.apply(hi.apply(x))));
        len += 1;
    }
    len
}

/// Number of copies of the vector `(dx, dy)` a straight segment from the
/// lower-left corner of `start` crosses before it ends on a cone point.
fn laps_from(o: &Origami, start: usize, dx: u64, dy: u64, singular: &[bool]) -> u32 {
    // crossing parameters along one lap, scaled by dx*dy
    let mut events: Vec<(u64, bool)> = Vec::new();
    for i in 1..dx {
        events.push((i * dy, true));
    }
    for j in 1..dy {
        events.push((j * dx, false));
    }
    events.sort_unstable();
    let mut sq = start;
    for lap in 1..=(o.n() as u32 + 1) {
        for &(_, vertical) in &events {
            sq = if vertical {
                o.h().apply(sq)
            } else {
                o.v().apply(sq)
            };
        }
        // the segment ends at the upper-right corner of `sq`
        let next = if dx == 0 {
            o.v().apply(sq)
        } else if dy == 0 {
            o.h().apply(sq)
        } else {
            o.v().apply(o.h().apply(sq))
        };
        if singular[next] {
            return lap;
        }
        sq = next;
    }
    panic!("segment never reached a cone point");
}

/// Minimal degree onto the torus of saddle connections with holonomy
/// parallel to `(dx, dy)`, both non-negative.
fn traced_multiplicity(o: &Origami, dx: u64, dy: u64) -> u32 {
    let singular: Vec<bool> = (0..o.n()).map(|i| corner_class(o, i) > 1).collect();
    (0..o.n())
        .filter(|&s| singular[s])
        .map(|s| laps_from(o, s, dx, dy, &singular))
        .min()
        .expect("a cone point exists")
}

#[test]
fn horizontal_multiplicity_matches_tracing() {
    let g = b7().unwrap();
    for x in 0..g.len() {
        let o = g.vertex(x);
        assert_eq!(
            g.multiplicity(x),
            traced_multiplicity(o, 1, 0),
            "vertex {x}"
        );
        assert_eq!(
            o.horizontal_multiplicity().unwrap(),
            traced_multiplicity(o, 1, 0)
        );
    }
}

// The shear acts as (x, y) -> (x + y, y) and R as the quarter turn
// (x, y) -> (-y, x); reflecting x turns (-y, x) into (y, x).
#[test]
fn generators_act_as_matrices_on_directions() {
    let g = b7().unwrap();
    for x in 0..g.len() {
        let o = g.vertex(x);
        let t = o.t();
        let r = o.r();
        let r_mirror = Origami::new(r.h().inverse(), r.v().clone()).unwrap();
        for dx in 0..=8u64 {
            for dy in 0..=8u64 {
                if dx.gcd(&dy) != 1 {
                    continue;
                }
                let m = traced_multiplicity(o, dx, dy);
                assert_eq!(m, traced_multiplicity(&t, dx + dy, dy), "T, vertex {x}");
                assert_eq!(m, traced_multiplicity(&r_mirror, dy, dx), "R, vertex {x}");
            }
        }
    }
}

// Co-slope p/q is the direction of holonomy (p, q); co-slope infinity is horizontal.
#[test]
fn slope_multiplicity_matches_tracing() {
    let g = b7().unwrap();
    for x in 0..g.len() {
        let o = g.vertex(x);
        for q in 1..=12u64 {
            for p in 1..=q {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let path = g
                    .rational_multiplicity(x, &BigInt::from(p), &BigInt::from(q))
                    .unwrap();
                assert_eq!(
                    path,
                    traced_multiplicity(o, p, q),
                    "vertex {x}, co-slope {p}/{q}"
                );
            }
        }
    }
}

#[test]
fn multiplicity_two_only_on_one_cusp() {
    let g = b7().unwrap();
    let m2: BTreeSet<usize> = (0..g.len())
        .filter(|&x| g.multiplicity(x) == 2)
        .map(|x| g.cusp_of(x))
        .collect();
    assert_eq!(m2.len(), 1);
    let c = *m2.iter().next().unwrap();
    assert_eq!(g.cusps()[c].width(), 7);
    assert!(g.cusps()[c].members.iter().all(|&x| g.multiplicity(x) == 2));
    assert!((0..g.len()).all(|x| g.multiplicity(x) <= 2));
}

fn all_permutations(n: usize) -> Vec<Permutation> {
    fn rec(cur: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        if cur.len() == used.len() {
            out.push(Permutation::from_images(cur.clone()).unwrap());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                cur.push(k as u32);
                rec(cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn random_connected(rng: &mut ChaCha8Rng, n: usize) -> Origami {
    loop {
        let mut h: Vec<u32> = (0..n as u32).collect();
        let mut v = h.clone();
        for k in (1..n).rev() {
            h.swap(k, rng.gen_range(0..=k));
            v.swap(k, rng.gen_range(0..=k));
        }
        let o = Origami::new(
            Permutation::from_images(h).unwrap(),
            Permutation::from_images(v).unwrap(),
        )
        .unwrap();
        if o.is_connected() {
            return o;
        }
    }
}

#[test]
fn canonical_form_is_relabelling_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=5 {
        let perms = all_permutations(n);
        for _ in 0..20 {
            let o = random_connected(&mut rng, n);
            let c = o.canonicalize().unwrap();
            let relabellings: BTreeSet<Origami> = perms.iter().map(|s| o.relabel(s)).collect();
            assert!(
                relabellings.contains(&c),
                "canonical form must be a relabelling"
            );
            for s in &perms {
                assert_eq!(o.relabel(s).canonicalize().unwrap(), c);
            }
        }
    }
}

/// Smallest relabelling, by exhaustion.
fn brute_canonical(o: &Origami, perms: &[Permutation]) -> Origami {
    perms.iter().map(|s| o.relabel(s)).min().unwrap()
}

fn brute_orbit_sizes(n: usize) -> Vec<usize> {
    let perms = all_permutations(n);
    let mut left: BTreeSet<Origami> = enumerate_origamis(n, &[2])
        .iter()
        .map(|o| brute_canonical(o, &perms))
        .collect();
    let mut sizes = Vec::new();
    while let Some(seed) = left.pop_first() {
        let mut seen = BTreeSet::from([seed.clone()]);
        let mut queue = VecDeque::from([seed]);
        while let Some(o) = queue.pop_front() {
            for g in [o.t(), o.t_inv(), o.r()] {
                let c = brute_canonical(&g, &perms);
                if seen.insert(c.clone()) {
                    left.remove(&c);
                    queue.push_back(c);
                }
            }
        }
        sizes.push(seen.len());
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

fn orbit_sizes(n: usize) -> Vec<usize> {
    partition_orbits(&enumerate_origamis(n, &[2]))
        .unwrap()
        .iter()
        .map(OrbitGraph::len)
        .collect()
}

#[test]
fn small_orbits_agree_with_brute_force() {
    for n in 3..=5 {
        assert_eq!(orbit_sizes(n), brute_orbit_sizes(n), "n = {n}");
    }
}

/// `(3/8) (n-2) n^2 prod_{p | n} (1 - 1/p^2)`, times 16 so it stays integral.
fn primitive_h2_count_times16(n: u64) -> u64 {
    let mut num = 6 * (n - 2) * n * n;
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if m.is_multiple_of(p) {
            num = num / (p * p) * (p * p - 1);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    num
}

#[test]
fn primitive_h2_counts() {
    for n in 3..=7u64 {
        let total: usize = orbit_sizes(n as usize).iter().sum();
        assert_eq!(16 * total as u64, primitive_h2_count_times16(n), "n = {n}");
    }
    // odd n >= 5 splits into two orbits of sizes (3/16)(n-1)n^2 prod and (3/16)(n-3)n^2 prod
    assert_eq!(orbit_sizes(5), [18, 9]);
    assert_eq!(orbit_sizes(7), [54, 36]);
}

#[test]
fn generators_satisfy_modular_relations() {
    let g = b7().unwrap();
    use Generator::{TInv, R, T};
    for o in g.vertices() {
        assert_eq!(&o.act(&[R, R, R, R]).unwrap(), o);
        assert_eq!(&o.act(&[T, TInv]).unwrap(), o);
        // (RT)^3 = R^2 acts trivially on origamis up to relabelling
        assert_eq!(o.act(&[R, T, R, T, R, T]).unwrap(), o.act(&[R, R]).unwrap());
        assert_eq!(o.act(&[R, R]).unwrap().stratum(), o.stratum());
    }
}
