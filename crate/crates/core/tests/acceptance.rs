//! Acceptance suite. Each criterion runs in sequence under its own time
//! limit and prints one PASS/FAIL line; the process fails if any does.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use lgh_core::approximation::{
    approximation_implies_lgh, build_approximation_witness, check_approximation,
    ApproximationWitness,
};
use lgh_core::correspondence::{
    appendix_sandwich_check, check_admissible, hausdorff_distance, induced_pseudometric, label_sup,
    lgh_exact, lgh_upper_bound_heuristic, pseudometric_to_correspondence, Correspondence,
    HeuristicOptions,
};
use lgh_core::generate::{
    gen_graph_space, gen_projection_family, perturb, Boundary, EdgeWeights, GraphKind,
};
use lgh_core::gluing::dyadic_chain;
use lgh_core::isometry::{check_eps_l_isometry, correspondence_to_map, find_l_isometry};
use lgh_core::precompact::{cauchy_subsequence_probe, equicontinuity_modulus, Collection};
use lgh_core::space::{snap_to_net, LabelSet, LabeledMetricSpace};
use lgh_core::traveltime::{
    embedding_distortion, reconstruct_from_data, stability_experiment, travel_time_data,
};
use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::Rng;

const CAP: usize = 16;

fn pair(seed: u64, max_n: usize) -> (LabeledMetricSpace, LabeledMetricSpace) {
    let mut r = rng(seed);
    let m = r.gen_range(0..=3);
    let (nx, ny) = (r.gen_range(1..=max_n), r.gen_range(1..=max_n));
    (random_space(&mut r, nx, m), random_space(&mut r, ny, m))
}

fn metric_axioms() -> String {
    let mut checked = 0;
    for seed in 0..200u64 {
        let mut r = rng(1_000 + seed);
        let m = r.gen_range(0..=3);
        let spaces: Vec<_> = (0..3)
            .map(|_| {
                let n = r.gen_range(1..=4);
                random_space(&mut r, n, m)
            })
            .collect();
        let mut d = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                d[i][j] = lgh_exact(&spaces[i], &spaces[j], CAP).unwrap().value;
            }
        }
        for i in 0..3 {
            assert_eq!(d[i][i], 0.0, "seed {seed}");
            for j in 0..3 {
                assert_eq!(d[i][j], d[j][i], "symmetry, seed {seed}");
                for k in 0..3 {
                    assert!(
                        d[i][k] <= d[i][j] + d[j][k] + TAU,
                        "triangle ({i},{j},{k}), seed {seed}"
                    );
                }
            }
        }
        checked += 1;
    }
    format!("{checked} triples")
}

fn cycle4(label_at: &[usize]) -> LabeledMetricSpace {
    let s = gen_graph_space(
        GraphKind::Cycle { n: 4 },
        EdgeWeights::Unit,
        &Boundary::Explicit(vec![]),
    )
    .unwrap();
    relabel(&s, label_at)
}

fn zero_iff_isometry() -> String {
    let mut pairs: Vec<(LabeledMetricSpace, LabeledMetricSpace)> = vec![
        (cycle4(&[0]), cycle4(&[1])),
        (cycle4(&[0, 1]), cycle4(&[1, 2])),
        (cycle4(&[0, 2]), cycle4(&[1, 3])),
        (cycle4(&[0, 1]), cycle4(&[0, 2])),
    ];
    let mut r = rng(2_000);
    while pairs.len() < 100 {
        let n = r.gen_range(1..=4);
        let m = r.gen_range(0..=2);
        let base = one_two_space(&mut r, n);
        let x = random_labels(&mut r, &base, m);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut r);
        let y = match pairs.len() % 3 {
            // rotated copy: same space, points reordered
            0 => x.permuted(&order).unwrap(),
            // relabeled copy: labels moved, may or may not be isometric
            1 => random_labels(&mut r, &x.permuted(&order).unwrap(), m),
            _ => {
                let other = one_two_space(&mut r, n);
                random_labels(&mut r, &other, m)
            }
        };
        pairs.push((x, y));
    }
    let mut zeros = 0;
    for (k, (x, y)) in pairs.iter().enumerate() {
        let zero = lgh_exact(x, y, CAP).unwrap().value <= TAU;
        let iso = find_l_isometry(x, y, 10, TAU).unwrap().is_found();
        assert_eq!(zero, iso, "pair {k}");
        zeros += zero as usize;
    }
    assert!(zeros > 0 && zeros < pairs.len());
    format!("{} pairs, {zeros} isometric", pairs.len())
}

fn constructive_sandwich() -> String {
    let mut minimizers = 0;
    let mut pseudometrics = 0;
    for seed in 0..100u64 {
        let (x, y) = pair(3_000 + seed, 3);
        let (v, argmins) = brute_lgh(&x, &y);
        assert_eq!(lgh_exact(&x, &y, CAP).unwrap().value, v, "seed {seed}");
        for r in &argmins {
            let c = Correspondence::new(&x, &y, r.iter().copied()).unwrap();
            let t = 0.5 * c.distortion(&x, &y);
            let p = induced_pseudometric(&x, &y, &c, t, TAU).unwrap();
            let verdict = check_admissible(&x, &y, &p, t, TAU);
            assert!(verdict.is_ok(), "seed {seed}: {:?}", verdict.violations);
            minimizers += 1;
        }
        // admissible pseudometrics induced by every correspondence, at and above dis/2
        for (k, r) in all_correspondences(&x, &y).iter().enumerate() {
            let c = Correspondence::new(&x, &y, r.iter().copied()).unwrap();
            let s = 0.5 * c.distortion(&x, &y) + if k % 2 == 0 { 0.0 } else { 0.25 };
            let p = induced_pseudometric(&x, &y, &c, s, TAU).unwrap();
            assert!(check_admissible(&x, &y, &p, s, TAU).is_ok());
            let t_prime = s + 1e-6;
            let back = pseudometric_to_correspondence(&x, &y, &p, t_prime, TAU).unwrap();
            assert!(back.distortion(&x, &y) < 2.0 * t_prime + TAU, "seed {seed}");
            pseudometrics += 1;
        }
    }
    format!("100 instances, {minimizers} minimizers, {pseudometrics} pseudometrics")
}

fn isometry_bounds() -> String {
    let mut maps = 0;
    for seed in 0..100u64 {
        let (x, y) = pair(4_000 + seed, 4);
        let e = lgh_exact(&x, &y, CAP).unwrap();
        let f = correspondence_to_map(&x, &y, &e.argmin);
        let v = check_eps_l_isometry(&x, &y, &f, 2.0 * e.value + 1e-6).unwrap();
        assert!(v.is_ok(), "seed {seed}: {v:?}");
        for f in all_maps(x.len(), y.len()) {
            let measured = check_eps_l_isometry(&x, &y, &f, 1.0).unwrap().measured();
            for eps in [
                measured * (1.0 + 1e-12) + 1e-15,
                measured + 0.1,
                2.0 * measured + 0.5,
            ] {
                if check_eps_l_isometry(&x, &y, &f, eps).unwrap().is_ok() {
                    assert!(
                        e.value <= 1.5 * eps + TAU,
                        "seed {seed}: {} vs eps {eps}",
                        e.value
                    );
                    maps += 1;
                }
            }
        }
    }
    format!("100 instances, {maps} passing maps")
}

fn random_witness(
    seed: u64,
) -> (
    LabeledMetricSpace,
    LabeledMetricSpace,
    ApproximationWitness,
    f64,
    f64,
) {
    let (x, y) = pair(seed, 4);
    let mut r = rng(seed ^ 0xa11ce);
    let k = r.gen_range(1..=4);
    let x_indices: Vec<usize> = (0..k).map(|_| r.gen_range(0..x.len())).collect();
    let y_indices: Vec<usize> = (0..k).map(|_| r.gen_range(0..y.len())).collect();
    let alpha0 = x
        .labeling()
        .iter()
        .map(|&a| snap_to_net(&x, &x_indices, a))
        .collect();
    let beta0 = y
        .labeling()
        .iter()
        .map(|&b| snap_to_net(&y, &y_indices, b))
        .collect();
    let w = ApproximationWitness {
        x_indices,
        y_indices,
        alpha0,
        beta0,
    };
    let m = check_approximation(&x, &y, &w, f64::MAX, f64::MAX, false).unwrap();
    let eps = [
        m.x_net.covering_radius,
        m.x_net.displacement,
        m.y_net.covering_radius,
        m.y_net.displacement,
    ]
    .into_iter()
    .fold(0.0, f64::max)
        + 1e-9;
    (x, y, w, eps, m.distortion + 1e-9)
}

fn approximation_both_ways() -> String {
    for seed in 0..50u64 {
        // construction: a near-isometric perturbation and the identity map
        let mut r = rng(5_000 + seed);
        let n = r.gen_range(1..=6);
        let m = r.gen_range(0..=3);
        let x = random_space(&mut r, n, m);
        let y = perturb(&x, r.gen_range(0.0..0.2), seed).unwrap();
        let f: Vec<usize> = (0..n).collect();
        let eps = 0.5 * check_eps_l_isometry(&x, &y, &f, 1.0).unwrap().measured() + 0.01;
        let w = build_approximation_witness(&x, &y, &f, eps).unwrap();
        let v = check_approximation(&x, &y, &w, 6.0 * eps, 6.0 * eps, true).unwrap();
        assert!(v.is_ok(), "seed {seed}: {:?}", v.failures);
        // bound: random valid witnesses
        let (x, y, w, eps, delta) = random_witness(5_500 + seed);
        assert!(check_approximation(&x, &y, &w, eps, delta, false)
            .unwrap()
            .is_ok());
        let b = approximation_implies_lgh(&x, &y, &w, eps, delta, CAP, TAU).unwrap();
        assert!(b.exact);
        assert!(b.lgh < 2.0 * eps + 0.5 * delta + TAU, "seed {seed}: {b:?}");
    }
    "50 instances".into()
}

fn embedding_sandwich() -> String {
    for seed in 0..100u64 {
        let (x, y) = pair(6_000 + seed, 3);
        let rep = appendix_sandwich_check(&x, &y, CAP, TAU).unwrap();
        assert!(rep.ok, "seed {seed}: {rep:?}");
        // independent minimum of Hausdorff + label sup over every correspondence
        let oracle = all_correspondences(&x, &y)
            .iter()
            .map(|r| {
                let c = Correspondence::new(&x, &y, r.iter().copied()).unwrap();
                let p = induced_pseudometric(&x, &y, &c, 0.5 * c.distortion(&x, &y), TAU).unwrap();
                hausdorff_distance(&p.cross) + label_sup(&x, &y, &p.cross)
            })
            .fold(f64::INFINITY, f64::min);
        assert!((rep.dl_upper - oracle).abs() <= TAU, "seed {seed}");
        assert!(rep.lgh <= rep.dl_upper + TAU && rep.dl_upper <= 2.0 * rep.lgh + TAU);
    }
    "100 pairs".into()
}

fn gluing() -> String {
    let c = dyadic_chain(1, 8, TAU).unwrap();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            let p = c.chain_metric(i, j).unwrap();
            let sum: f64 = (i..j).map(|k| 2f64.powi(-(k as i32 + 2))).sum();
            assert!((p.t - sum).abs() <= TAU);
            let v = check_admissible(&c.spaces()[i], &c.spaces()[j], &p, sum, TAU);
            assert!(v.is_ok(), "({i},{j}): {:?}", v.violations.first());
        }
    }
    let proxy = c.limit_proxy();
    let bound = proxy.tail_bounds[2];
    assert!(bound <= 0.25, "bound {bound}");
    let ub = lgh_upper_bound_heuristic(&c.spaces()[2], &proxy.space, &HeuristicOptions::default())
        .unwrap();
    assert!(ub.value <= bound + 1e-6, "{} > {bound}", ub.value);
    format!("28 level pairs, X_3 bound {bound}, heuristic {}", ub.value)
}

fn travel_time() -> String {
    let mut family = Vec::new();
    for n in 3..=10 {
        family.push(
            gen_graph_space(
                GraphKind::Path { n },
                EdgeWeights::Unit,
                &Boundary::Endpoints,
            )
            .unwrap(),
        );
    }
    for (b, depth) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
        family.push(
            gen_graph_space(
                GraphKind::Tree {
                    branching: b,
                    depth,
                },
                EdgeWeights::Unit,
                &Boundary::Leaves,
            )
            .unwrap(),
        );
    }
    for s in &family {
        let rep = embedding_distortion(s, TAU).unwrap();
        assert!(rep.worst <= TAU, "{rep:?}");
        let back = reconstruct_from_data(&travel_time_data(s).unwrap(), TAU).unwrap();
        let cap = s.len() * back.len();
        assert!(lgh_exact(s, &back, cap).unwrap().value <= TAU);
    }
    let c4 = cycle4(&[0]);
    let rep = embedding_distortion(&c4, TAU).unwrap();
    assert_eq!(rep.worst, 2.0);
    let data = travel_time_data(&c4).unwrap();
    assert_eq!(data.rows[1], data.rows[3]);
    let back = reconstruct_from_data(&data, TAU).unwrap();
    assert_eq!(back.len(), 3);
    // v0, v1, v2 survive; v3 falls into the class of v1
    assert_eq!(back.d(0, 1), 1.0);
    assert_eq!(back.d(1, 2), 1.0);
    format!(
        "{} resolved spaces, C4 merged to {} points",
        family.len(),
        back.len()
    )
}

fn stability() -> String {
    let family: Vec<_> = (0..6)
        .map(|k| {
            let w = EdgeWeights::Constant(1.0 + 0.1 * k as f64);
            gen_graph_space(GraphKind::Path { n: 5 }, w, &Boundary::Endpoints).unwrap()
        })
        .collect();
    let rep = stability_experiment(&family, 25, TAU).unwrap();
    assert!(rep.excluded.is_empty());
    println!("i,j,d_data,d_space,slack");
    for r in &rep.rows {
        println!("{},{},{},{},{}", r.i, r.j, r.d_data, r.d_space, r.slack);
        assert!(r.d_data <= r.d_space + TAU, "{r:?}");
    }
    assert!(rep.holds && rep.rows.len() == 15);
    format!("{} pairs", rep.rows.len())
}

/// Labels on points of random spaces, with `d_L` at least every distance
/// between label images: every labeling is 1-Lipschitz.
fn lipschitz_family(seed: u64) -> Collection {
    let mut r = rng(seed);
    let m = r.gen_range(2..=4);
    let items: Vec<_> = (0..4)
        .map(|_| {
            let n = r.gen_range(1..=5);
            random_space(&mut r, n, m)
        })
        .collect();
    let ids: Vec<String> = items[0].label_set().ids().to_vec();
    let metric = Array2::from_shape_fn((m, m), |(a, b)| {
        if a == b {
            return 0.0;
        }
        let far = items
            .iter()
            .map(|s| s.d(s.label_point(a), s.label_point(b)))
            .fold(0.0, f64::max);
        far + 0.1
    });
    let ls = Arc::new(LabelSet::with_metric(ids, &metric, TAU).unwrap());
    Collection::new(
        items
            .iter()
            .map(|s| s.relabeled(ls.clone(), s.labeling().to_vec()).unwrap())
            .collect(),
    )
    .unwrap()
}

fn counterexample() -> String {
    for k in 1..=6 {
        let c = gen_projection_family(k).unwrap();
        assert_eq!(
            equicontinuity_modulus(&c, 2f64.powi(-(k as i32)))
                .unwrap()
                .omega,
            1.0,
            "k = {k}"
        );
        let probe = cauchy_subsequence_probe(&c, 0.4, 20).unwrap();
        assert!(
            probe.clusters.iter().all(|cl| cl.len() == 1),
            "k = {k}: {:?}",
            probe.clusters
        );
        assert!(!probe.conservative);
    }
    let mut checks = 0;
    for seed in 0..20u64 {
        let c = lipschitz_family(10_000 + seed);
        let metric = c.items()[0].label_set().metric().unwrap().clone();
        let mut deltas: Vec<f64> = metric.iter().copied().filter(|&v| v > 0.0).collect();
        deltas.extend([0.05, 0.5, 1.0, 2.0, 5.0]);
        for &d in &deltas {
            let w = equicontinuity_modulus(&c, d).unwrap().omega;
            assert!(w <= d, "seed {seed}: omega({d}) = {w}");
            checks += 1;
        }
    }
    format!("k = 1..6, {checks} control checks")
}

type Criterion = (&'static str, fn() -> String, u64);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 metric axioms of the exact distance", metric_axioms, 60),
        ("2 zero distance iff label isometry", zero_iff_isometry, 30),
        (
            "3 correspondence/pseudometric sandwich",
            constructive_sandwich,
            60,
        ),
        ("4 (eps,L)-isometry bounds", isometry_bounds, 60),
        (
            "5 approximations in both directions",
            approximation_both_ways,
            60,
        ),
        ("6 embedding distance sandwich", embedding_sandwich, 60),
        ("7 dyadic chain gluing and limit bound", gluing, 30),
        (
            "8 travel time embeddings and reconstruction",
            travel_time,
            30,
        ),
        ("9 travel time stability table", stability, 30),
        ("10 projection family counterexample", counterexample, 30),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(limit);
        let (ok, detail) = match outcome {
            Ok(d) if !over => (true, d),
            Ok(d) => (false, format!("{d}; over the time limit")),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into());
                (false, msg)
            }
        };
        failed += !ok as usize;
        println!(
            "[{}] {name}: {detail} ({:.2} s, limit {limit} s)",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
