//! Acceptance run: one PASS/FAIL line per criterion, published decimals
//! compared at their stated tolerances. Exits nonzero if any criterion fails.

use std::process::ExitCode;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use origami_spectrum::cf::{
    cf_of_surd, classical_lagrange, convergents, min_max_tail, CFExpansion, QuadraticSurd,
};
use origami_spectrum::constants;
use origami_spectrum::orbit::{b7, h2_seven_square_orbits, OrbitGraph};
use origami_spectrum::spectrum::{
    closes, lagrange, lagrange_even_loop, oracle_lagrange, scan_even_loops, ScanConfig,
};
use origami_spectrum::subshift::{
    gap_first, gap_second, interval_first, l_sigma_periodic, subshift_vs_orbit,
    verify_lexicographic, ABWord, Letter,
};
use origami_spectrum::verify::preferred_start;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn dec(s: &str) -> QuadraticSurd {
    QuadraticSurd::from_decimal(s).expect("decimal literal")
}

fn cfv(pre: &[u64], period: &[u64]) -> QuadraticSurd {
    CFExpansion::new(0, pre.to_vec(), period.to_vec())
        .unwrap()
        .value()
}

/// Compares each value with its published decimal at `10^-k`; lists misses.
fn against_decimals(rows: &[(&str, QuadraticSurd, &str)], k: u32) -> Outcome {
    let mut misses = Vec::new();
    for (name, x, published) in rows {
        if !x.within(&dec(published), k) {
            misses.push(format!(
                "{name}: exact {} vs {published} (off by {:.1e})",
                x.to_decimal(k + 2),
                (x.to_f64() - dec(published).to_f64()).abs()
            ));
        }
    }
    if misses.is_empty() {
        (true, format!("{} values within 1e-{k}", rows.len()))
    } else {
        (false, misses.join("; "))
    }
}

fn orbit_derivation() -> Outcome {
    let orbits = h2_seven_square_orbits().unwrap();
    let sizes: Vec<usize> = orbits.iter().map(OrbitGraph::len).collect();
    let g = b7().unwrap();
    let widths = g.cusp_widths();
    let m2: Vec<usize> = (0..g.cusps().len())
        .filter(|&c| g.cusps()[c].members.iter().any(|&x| g.multiplicity(x) == 2))
        .collect();
    let m2_ok = m2.len() == 1 && {
        let c = &g.cusps()[m2[0]];
        c.width() == 7 && c.members.iter().all(|&x| g.multiplicity(x) == 2)
    };
    (
        sizes == [54, 36] && widths == [7, 7, 7, 5, 3, 3, 3, 1] && m2_ok,
        format!(
            "orbit sizes {sizes:?}, cusp widths {widths:?}, width-7 cusps with m=2: {}",
            m2.len()
        ),
    )
}

fn constants_decimals() -> Outcome {
    against_decimals(
        &[
            ("phi1", constants::phi1(), "10.696277"),
            ("phi2", constants::phi2(), "11.582576"),
            ("phi_inf", constants::phi_inf(), "11.593101"),
            ("eta1", constants::eta1(), "11.655309"),
            ("eta2", constants::eta2(), "11.688957"),
            ("eta3", constants::eta3(), "11.755835"),
            (
                "14[1,overline{5,2}]",
                constants::loop_52_value(),
                "11.832159",
            ),
            (
                "7(7+2[overline{7,1}])/4",
                constants::entry_cap_bound(),
                "12.693741",
            ),
            (
                "7([1,5,2,4,overline{1,3}]+[1,4,overline{1,3}])",
                constants::cut_above_four(),
                "11.706478",
            ),
            (
                "2[1,4,overline{1,3}]",
                constants::double_bracket(),
                "1.654653",
            ),
        ],
        6,
    )
}

fn tables() -> Outcome {
    let g = b7().unwrap();
    let published: [(&[u64], &[&str]); 2] = [
        (&[1, 3], &["1.1456435", "0.916515", "0.916515", "1.527524"]),
        (
            &[5, 2],
            &[
                "0.910165", "0.696009", "0.696009", "0.910165", "0.591607", "1.690309", "1.479019",
            ],
        ),
    ];
    let mut ok = true;
    let mut detail = Vec::new();
    for (period, rows) in published {
        let Some(x) = preferred_start(g, period) else {
            return (false, format!("{period:?} closes nowhere"));
        };
        let v = lagrange_even_loop(g, x, period).unwrap();
        if v.candidates.len() != rows.len() {
            ok = false;
            detail.push(format!(
                "{period:?}: {} rows, expected {}",
                v.candidates.len(),
                rows.len()
            ));
            continue;
        }
        for (c, r) in v.candidates.iter().zip(rows) {
            if !c.quotient.within(&dec(r), 6) {
                ok = false;
                detail.push(format!(
                    "{period:?} row {r}: exact {}",
                    c.quotient.to_decimal(8)
                ));
            }
        }
    }
    if ok {
        (true, "11 quotients within 1e-6".into())
    } else {
        (false, detail.join("; "))
    }
}

fn minimum_and_first_gap() -> Outcome {
    let g = b7().unwrap();
    let alpha = CFExpansion::periodic(&[1, 3]).unwrap();
    let min = (0..g.len())
        .map(|x| lagrange(g, x, &alpha).unwrap().value)
        .min()
        .unwrap();
    let (p1, p2) = (constants::phi1(), constants::phi2());
    let scan = scan_even_loops(g, &ScanConfig::new(14));
    let inside = scan.iter().filter(|e| p1 < e.value && e.value < p2).count();
    let top = &p2 + &dec("0.01");
    let scan_near = scan
        .iter()
        .filter(|e| p2 <= e.value && e.value < top)
        .count();
    // left endpoints of G_{1,n} are periodic words, realised on the orbit
    let mut near = Vec::new();
    for n in 1..=4 {
        let w = ABWord::new([vec![Letter::A], vec![Letter::B; n + 1]].concat());
        let gap = gap_second(1, n).unwrap();
        let r = subshift_vs_orbit(g, &w).unwrap();
        if r.equal && r.lagrange == gap.left && p2 <= r.lagrange && r.lagrange < top {
            near.push(r.lagrange);
        }
    }
    near.dedup();
    (
        min == p1 && inside == 0 && near.len() >= 3,
        format!(
            "min {} (= phi1: {}), loop values in (phi1, phi2): {inside}, loop values in [phi2, phi2+0.01) at sum <= 14: {scan_near}, realised G_(1,n) endpoints there: {}",
            min.to_decimal(8),
            min == p1,
            near.len()
        ),
    )
}

fn comparison_decimals() -> Outcome {
    let a = Letter::A.expansion();
    let b = Letter::B.expansion();
    let checks = verify_lexicographic(&[]);
    let inequalities = checks[0].passed && checks[1].passed;
    let (ok, detail) = against_decimals(
        &[
            ("[b^inf]", cfv(&[], b), "0.79128784"),
            ("[b,a^inf]", cfv(b, a), "0.79238557"),
            ("[a,b^inf]", cfv(a, b), "0.81660638"),
            ("[a^inf]", cfv(&[], a), "0.81661395"),
        ],
        8,
    );
    (
        ok && inequalities,
        format!("inequalities exact: {inequalities}; {detail}"),
    )
}

fn gap_structure() -> Outcome {
    let gaps: Vec<_> = (0..=15).map(|k| gap_first(k).unwrap()).collect();
    let disjoint =
        gaps.iter().all(|g| g.left < g.right) && gaps.windows(2).all(|w| w[0].right < w[1].left);
    let increasing = gaps.windows(2).all(|w| w[0].right < w[1].right);
    let pinf = constants::phi_inf();
    let rate_ok = gaps[15].right < pinf && gaps[15].right.within(&pinf, 6);
    let mut nested = true;
    let mut decreasing = true;
    let mut toward_plus = true;
    let mut toward_inf = true;
    for (k, gk) in gaps.iter().enumerate().take(6).skip(1) {
        let ik = interval_first(k).unwrap();
        let row: Vec<_> = (1..=10).map(|n| gap_second(k, n).unwrap()).collect();
        nested &= row.iter().all(|g| g.left < g.right && ik.contains_gap(g));
        decreasing &= row.windows(2).all(|w| w[1].left < w[0].left);
        // where the left ends accumulate, read at n = 10
        toward_plus &= row[9].left.within(&gk.right, 6);
        toward_inf &= row[9].left.within(&ik.lo, 6);
    }
    (
        disjoint && increasing && rate_ok && nested && decreasing && toward_plus,
        format!(
            "G_0..G_15 disjoint+ordered {}, right ends increasing {increasing}, G_15^+ = {} vs phi_inf {}; \
             G_(k,n) nested in I_k {nested}, G_(k,n)^- decreasing {decreasing}, \
             G_(k,10)^- within 1e-6 of G_k^+ {toward_plus}, of inf I_k = G_(k-1)^+ {toward_inf}",
            disjoint,
            gaps[15].right.to_decimal(12),
            pinf.to_decimal(12)
        ),
    )
}

fn random_closing_loops(
    g: &OrbitGraph,
    rng: &mut ChaCha8Rng,
    count: usize,
) -> Vec<(usize, Vec<u64>)> {
    let mut out = Vec::new();
    while out.len() < count {
        let len = 2 * rng.gen_range(1..=3);
        let period: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=5)).collect();
        let starts: Vec<usize> = (0..g.len()).filter(|&x| closes(g, x, &period)).collect();
        if starts.is_empty() {
            continue;
        }
        out.push((starts[rng.gen_range(0..starts.len())], period));
    }
    out
}

fn oracle_equivalence() -> Outcome {
    let g = b7().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b7);
    let mut loops: Vec<(usize, Vec<u64>)> = [vec![1, 3], vec![5, 2], vec![1, 4, 2, 4]]
        .into_iter()
        .map(|p| (preferred_start(g, &p).expect("closes"), p))
        .collect();
    loops.extend(random_closing_loops(g, &mut rng, 20));
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for (x, p) in &loops {
        let alpha = CFExpansion::periodic(p).unwrap();
        let r = oracle_lagrange(g, *x, &alpha, 40).unwrap();
        worst = worst.max(r.gap);
        if r.gap >= 1e-4 {
            bad.push(format!("{p:?}@{x}: {:.2e}", r.gap));
        }
    }
    (
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} loops, worst gap {worst:.2e}", loops.len())
        } else {
            bad.join("; ")
        },
    )
}

fn subshift_consistency() -> Outcome {
    let g = b7().unwrap();
    let eta1 = constants::eta1();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5b5);
    let mut tested = 0;
    let mut bad = Vec::new();
    while tested < 30 {
        let len = rng.gen_range(1..=7);
        let w = ABWord::new(
            (0..len)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        Letter::A
                    } else {
                        Letter::B
                    }
                })
                .collect(),
        );
        if w.count(Letter::A) == 0 || l_sigma_periodic(&w).unwrap() >= eta1 {
            continue;
        }
        tested += 1;
        let r = subshift_vs_orbit(g, &w).unwrap();
        if !r.equal {
            bad.push(w.to_string());
        }
    }
    (
        bad.is_empty(),
        format!(
            "{tested} words, mismatches: {}",
            if bad.is_empty() {
                "none".into()
            } else {
                bad.join(" ")
            }
        ),
    )
}

fn eval_f64(entries: &[u64]) -> f64 {
    entries.iter().rev().fold(0.0, |x, &a| 1.0 / (a as f64 + x))
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut round_trip = 0;
    let mut unimodular = true;
    while round_trip < 1000 {
        let x = QuadraticSurd::new(
            rng.gen_range(-40..40),
            rng.gen_range(-20..20),
            rng.gen_range(2..300),
            rng.gen_range(1..40),
        )
        .unwrap();
        if x.is_rational() {
            continue;
        }
        let e = cf_of_surd(&x).unwrap();
        if e.value() != x || cf_of_surd(&e.value()).unwrap() != e {
            return (false, format!("round trip failed for {x}"));
        }
        for w in convergents(&e, 30).windows(2) {
            let det: BigInt = &w[1].0 * &w[0].1 - &w[0].0 * &w[1].1;
            unimodular &= det.abs().is_one();
        }
        round_trip += 1;
    }
    let mut extremes = true;
    for prefix in [vec![], vec![1]] {
        let (lo, hi) = min_max_tail(&prefix, 3).unwrap();
        let (mut bmin, mut bmax) = (f64::INFINITY, f64::NEG_INFINITY);
        for code in 0..3u32.pow(12) {
            let mut e = prefix.clone();
            let mut c = code;
            for _ in 0..12 {
                e.push(u64::from(c % 3) + 1);
                c /= 3;
            }
            let v = eval_f64(&e);
            bmin = bmin.min(v);
            bmax = bmax.max(v);
        }
        extremes &= (lo.to_f64() - bmin).abs() < 1e-6 && (hi.to_f64() - bmax).abs() < 1e-6;
    }
    let sqrt5 = classical_lagrange(&CFExpansion::periodic(&[1]).unwrap()).unwrap()
        == QuadraticSurd::sqrt(5).unwrap();
    let sqrt8 = classical_lagrange(&CFExpansion::periodic(&[2]).unwrap()).unwrap()
        == QuadraticSurd::sqrt(8).unwrap();
    (
        unimodular && extremes && sqrt5 && sqrt8,
        format!(
            "{round_trip} surd round trips, unimodular {unimodular}, extremal tails vs 3^12 {extremes}, sqrt5 {sqrt5}, sqrt8 {sqrt8}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("orbit derivation", orbit_derivation),
        ("constants to 1e-6", constants_decimals),
        ("loop tables to 1e-6", tables),
        ("minimum and first gap", minimum_and_first_gap),
        ("comparison decimals to 1e-8", comparison_decimals),
        ("gap structure", gap_structure),
        ("oracle equivalence", oracle_equivalence),
        ("subshift consistency", subshift_consistency),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let (ok, detail) = f();
        println!(
            "{} criterion {}: {name}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            k + 1
        );
        failed += usize::from(!ok);
    }
    println!("{} criteria, {failed} failed", criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
