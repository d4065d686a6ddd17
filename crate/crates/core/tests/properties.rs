mod common;

use common::*;
use lgh_core::approximation::{
    approximation_implies_lgh, build_approximation_witness, check_approximation,
    ApproximationWitness,
};
use lgh_core::correspondence::{
    check_admissible, induced_pseudometric, lgh_exact, lgh_lower_bound, lgh_upper_bound_heuristic,
    pseudometric_to_correspondence, Correspondence, HeuristicOptions,
};
use lgh_core::generate::{
    gen_graph_space, gen_random_space, perturb, Boundary, EdgeWeights, GraphKind, RandomMethod,
};
use lgh_core::gluing::Chain;
use lgh_core::isometry::{check_eps_l_isometry, correspondence_to_map, find_l_isometry};
use lgh_core::precompact::{
    cauchy_subsequence_probe, equicontinuity_modulus, utb_report, Collection,
};
use lgh_core::space::{
    check_labeled_net, covering_number, diameter, greedy_labeled_net, snap_to_net, validate_space,
    CoverMode, LabelSet, PseudoSpace,
};
use lgh_core::traveltime::{embedding_distortion, reconstruct_from_data, travel_time_data};
use ndarray::Array2;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use std::sync::Arc;

const CAP: usize = 16;

/// Two spaces with `m` shared labels, sizes in `1..=3`.
fn pair(
    seed: u64,
) -> (
    lgh_core::space::LabeledMetricSpace,
    lgh_core::space::LabeledMetricSpace,
) {
    let mut r = rng(seed);
    let m = r.gen_range(0..=3);
    let (nx, ny) = (r.gen_range(1..=3), r.gen_range(1..=3));
    (random_space(&mut r, nx, m), random_space(&mut r, ny, m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_spaces_satisfy_the_metric_axioms(n in 1usize..12, seed: u64, p in 0.0f64..1.0) {
        for method in [RandomMethod::Euclidean { k: 3 }, RandomMethod::RandomGraph { p }] {
            let s = gen_random_space(n, method, seed).unwrap();
            prop_assert!(validate_space(&s.to_raw(), TAU).unwrap().is_ok());
        }
        let w = EdgeWeights::Jitter { amplitude: 0.5, seed };
        let g = gen_graph_space(GraphKind::Grid { rows: 1 + n % 4, cols: 1 + n / 4 }, w, &Boundary::Leaves).unwrap();
        prop_assert!(validate_space(&g.to_raw(), TAU).unwrap().is_ok());
    }

    #[test]
    fn quotient_is_idempotent(seed: u64, n in 1usize..6) {
        let mut r = rng(seed);
        let s = random_space(&mut r, n, 2);
        // duplicate every point once
        let m = 2 * n;
        let dist = Array2::from_shape_fn((m, m), |(i, j)| s.d(i % n, j % n));
        let points = (0..m).map(|i| format!("q{i}")).collect();
        let p = PseudoSpace::with_label_set(points, dist, s.label_set().clone(), s.labeling().to_vec(), TAU).unwrap();
        let q = p.quotient(TAU).unwrap();
        prop_assert_eq!(q.len(), n);
        prop_assert_eq!(q.matrix(), s.matrix());
        let again = PseudoSpace::from(q.clone()).quotient(TAU).unwrap();
        prop_assert_eq!(again, q);
    }

    #[test]
    fn greedy_labeled_nets_pass_the_checker(seed: u64, n in 1usize..10, eps in 0.05f64..2.0) {
        let mut r = rng(seed);
        let s = random_space(&mut r, n, 3);
        let net = greedy_labeled_net(&s, eps).unwrap();
        let v = check_labeled_net(&s, &net.points, &net.relabel, eps).unwrap();
        prop_assert!(v.ok, "{:?}", v);
    }

    #[test]
    fn exact_cover_is_no_larger_than_greedy(seed: u64, n in 1usize..9, eps in 0.05f64..2.0) {
        let mut r = rng(seed);
        let s = random_space(&mut r, n, 0);
        let e = covering_number(&s, eps, CoverMode::Exact { cap: 16 }).unwrap();
        let g = covering_number(&s, eps, CoverMode::default()).unwrap();
        prop_assert!(e.size <= g.size);
    }

    #[test]
    fn diameter_ignores_point_order(seed: u64, n in 1usize..9) {
        let mut r = rng(seed);
        let s = random_space(&mut r, n, 1);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut r);
        prop_assert_eq!(diameter(&s.permuted(&order).unwrap()), diameter(&s));
    }

    #[test]
    fn exact_search_matches_brute_force(seed: u64) {
        let (x, y) = pair(seed);
        let (v, argmins) = brute_lgh(&x, &y);
        let e = lgh_exact(&x, &y, CAP).unwrap();
        prop_assert_eq!(e.value, v);
        prop_assert!(argmins.iter().any(|r| r.as_slice() == e.argmin.pairs()));
    }

    #[test]
    fn exact_distance_is_symmetric_and_bounded(seed: u64) {
        let (x, y) = pair(seed);
        let e = lgh_exact(&x, &y, CAP).unwrap().value;
        prop_assert_eq!(e, lgh_exact(&y, &x, CAP).unwrap().value);
        let lo = lgh_lower_bound(&x, &y).unwrap();
        let hi = lgh_upper_bound_heuristic(&x, &y, &HeuristicOptions { restarts: 2, seed }).unwrap().value;
        prop_assert!(lo <= e + TAU && e <= hi + TAU, "{} {} {}", lo, e, hi);
    }

    #[test]
    fn zero_distance_iff_isometric(seed: u64, shuffle: bool) {
        let mut r = rng(seed);
        let m = r.gen_range(0..=2);
        let n = r.gen_range(1..=4);
        let base = one_two_space(&mut r, n);
        let x = random_labels(&mut r, &base, m);
        let y = if shuffle {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut r);
            x.permuted(&order).unwrap()
        } else {
            let other = one_two_space(&mut r, n);
            random_labels(&mut r, &other, m)
        };
        let zero = lgh_exact(&x, &y, CAP).unwrap().value <= TAU;
        prop_assert_eq!(zero, find_l_isometry(&x, &y, 10, TAU).unwrap().is_found());
        if shuffle {
            prop_assert!(zero);
        }
    }

    #[test]
    fn induced_pseudometrics_round_trip(seed: u64, extra in 0.0f64..0.5) {
        let (x, y) = pair(seed);
        let e = lgh_exact(&x, &y, CAP).unwrap();
        let s = e.value + extra;
        let p = induced_pseudometric(&x, &y, &e.argmin, s, TAU).unwrap();
        let v = check_admissible(&x, &y, &p, s, TAU);
        prop_assert!(v.is_ok(), "{:?}", v.violations);
        let t = s + 1e-6;
        let r = pseudometric_to_correspondence(&x, &y, &p, t, TAU).unwrap();
        prop_assert!(r.distortion(&x, &y) < 2.0 * t + TAU);
        for pair in e.argmin.pairs() {
            prop_assert!(r.contains(*pair));
        }
    }

    #[test]
    fn scaling_both_spaces_scales_the_distance(seed: u64, c in 0.1f64..10.0) {
        let (x, y) = pair(seed);
        let e = lgh_exact(&x, &y, CAP).unwrap().value;
        let s = lgh_exact(&x.scaled(c).unwrap(), &y.scaled(c).unwrap(), CAP).unwrap().value;
        prop_assert!((s - c * e).abs() <= TAU * c.max(1.0) * 10.0, "{} vs {}", s, c * e);
    }

    #[test]
    fn minimizer_gives_a_two_t_isometry(seed: u64) {
        let (x, y) = pair(seed);
        let e = lgh_exact(&x, &y, CAP).unwrap();
        let f = correspondence_to_map(&x, &y, &e.argmin);
        prop_assert!(check_eps_l_isometry(&x, &y, &f, 2.0 * e.value + 1e-6).unwrap().is_ok());
    }

    #[test]
    fn passing_maps_bound_the_distance(seed: u64) {
        let (x, y) = pair(seed);
        let e = lgh_exact(&x, &y, CAP).unwrap().value;
        for f in all_maps(x.len(), y.len()) {
            let measured = check_eps_l_isometry(&x, &y, &f, 1.0).unwrap().measured();
            let eps = measured + 1e-12;
            prop_assert!(check_eps_l_isometry(&x, &y, &f, eps).unwrap().is_ok());
            prop_assert!(e <= 1.5 * eps + TAU, "{} > 1.5 * {}", e, eps);
        }
    }

    #[test]
    fn maps_from_relations_do_not_increase_distortion(seed: u64, pick: prop::sample::Index) {
        let (x, y) = pair(seed);
        let all = all_correspondences(&x, &y);
        let r = &all[pick.index(all.len())];
        let c = Correspondence::new(&x, &y, r.iter().copied()).unwrap();
        let f = correspondence_to_map(&x, &y, &c);
        let graph: Vec<(usize, usize)> = f.iter().copied().enumerate().collect();
        prop_assert!(distortion(&x, &y, &graph) <= c.distortion(&x, &y));
    }

    #[test]
    fn built_witnesses_are_strong(seed: u64, eta in 0.0f64..0.3) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=5);
        let m = r.gen_range(0..=3);
        let x = random_space(&mut r, n, m);
        let y = perturb(&x, eta, seed).unwrap();
        let f: Vec<usize> = (0..n).collect();
        let measured = check_eps_l_isometry(&x, &y, &f, 1.0).unwrap().measured();
        let eps = 0.5 * measured + 0.05;
        let w = build_approximation_witness(&x, &y, &f, eps).unwrap();
        let v = check_approximation(&x, &y, &w, 6.0 * eps, 6.0 * eps, true).unwrap();
        prop_assert!(v.is_ok(), "{:?}", v.failures);
    }

    #[test]
    fn valid_witnesses_bound_the_distance(seed: u64) {
        let (x, y, w, eps, delta) = random_witness(seed);
        let v = check_approximation(&x, &y, &w, eps, delta, false).unwrap();
        prop_assert!(v.is_ok(), "{:?}", v.failures);
        let b = approximation_implies_lgh(&x, &y, &w, eps, delta, CAP, TAU).unwrap();
        prop_assert!(b.exact && b.holds && b.lgh < b.bound + TAU);
        // monotone in both parameters
        prop_assert!(check_approximation(&x, &y, &w, 2.0 * eps, delta + 0.1, false).unwrap().is_ok());
    }

    #[test]
    fn chains_of_induced_links_are_admissible(seed: u64) {
        let mut r = rng(seed);
        let m = r.gen_range(0..=2);
        let spaces: Vec<_> = (0..4).map(|_| { let n = r.gen_range(1..=3); random_space(&mut r, n, m) }).collect();
        let links: Vec<_> = spaces
            .windows(2)
            .map(|w| {
                let e = lgh_exact(&w[0], &w[1], CAP).unwrap();
                induced_pseudometric(&w[0], &w[1], &e.argmin, e.value, TAU).unwrap()
            })
            .collect();
        let c = Chain::new(spaces.clone(), links, TAU).unwrap();
        for i in 0..4 {
            for j in i + 1..4 {
                let p = c.chain_metric(i, j).unwrap();
                let sum: f64 = c.links()[i..j].iter().map(|l| l.t).sum();
                prop_assert_eq!(p.t, sum);
                let v = check_admissible(&spaces[i], &spaces[j], &p, sum, TAU);
                prop_assert!(v.is_ok(), "({},{}): {:?}", i, j, v.violations);
                for (&a, &b) in spaces[i].labeling().iter().zip(spaces[j].labeling()) {
                    prop_assert!(p.cross[[a, b]] <= sum + TAU);
                }
                // composition through any intermediate level never beats the chain metric
                for k in i + 1..j {
                    let (a, b) = (c.chain_metric(i, k).unwrap(), c.chain_metric(k, j).unwrap());
                    for ((u, v), &d) in p.cross.indexed_iter() {
                        let via = (0..spaces[k].len()).map(|w| a.cross[[u, w]] + b.cross[[w, v]]).fold(f64::INFINITY, f64::min);
                        prop_assert!((via - d).abs() <= TAU);
                    }
                }
            }
        }
    }

    #[test]
    fn modulus_and_covering_are_monotone(seed: u64) {
        let mut r = rng(seed);
        let ids: Vec<String> = (0..3).map(|k| format!("l{k}")).collect();
        let items: Vec<_> = (0..3).map(|_| { let n = r.gen_range(1..=5); random_space(&mut r, n, 0) }).collect();
        let labelings: Vec<Vec<usize>> = items.iter().map(|s| (0..3).map(|_| r.gen_range(0..s.len())).collect()).collect();
        let metric = Array2::from_shape_fn((3, 3), |(a, b)| if a == b { 0.0 } else { r.gen_range(1.0..2.0) });
        let sym = Array2::from_shape_fn((3, 3), |(a, b)| metric[[a.min(b), a.max(b)]]);
        let ls = Arc::new(LabelSet::with_metric(ids, &sym, TAU).unwrap());
        let c = Collection::new(items.iter().zip(labelings).map(|(s, l)| s.relabeled(ls.clone(), l).unwrap()).collect()).unwrap();
        let deltas = [0.5, 1.0, 1.25, 1.5, 1.75, 2.0, 3.0];
        let w: Vec<f64> = deltas.iter().map(|&d| equicontinuity_modulus(&c, d).unwrap().omega).collect();
        prop_assert!(w.windows(2).all(|p| p[0] <= p[1]));
        let rep = utb_report(&c, &[0.1, 0.3, 0.6, 1.0, 2.0], CoverMode::Exact { cap: 16 }).unwrap();
        prop_assert!(rep.covering.windows(2).all(|p| p[0].1 >= p[1].1));
    }

    #[test]
    fn probe_at_large_resolution_keeps_everything(seed: u64) {
        let mut r = rng(seed);
        let items: Vec<_> = (0..4).map(|_| { let n = r.gen_range(1..=3); random_space(&mut r, n, 1) }).collect();
        let c = Collection::new(items).unwrap();
        let first = cauchy_subsequence_probe(&c, 1e-12, CAP).unwrap();
        let rho = first.pairwise.iter().cloned().fold(0.0, f64::max).max(1e-12);
        let p = cauchy_subsequence_probe(&c, rho, CAP).unwrap();
        prop_assert_eq!(p.subsequence, vec![0, 1, 2, 3]);
    }

    #[test]
    fn travel_times_are_one_lipschitz(seed: u64) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=7);
        let m = r.gen_range(1..=3);
        let s = random_space(&mut r, n, m);
        let t = travel_time_data(&s).unwrap();
        let mut all_equal = true;
        for i in 0..n {
            for j in 0..n {
                prop_assert!(t.sup_distance(i, j) <= s.d(i, j) + TAU);
                all_equal &= (t.sup_distance(i, j) - s.d(i, j)).abs() <= TAU;
            }
            // rows are 1-Lipschitz against the label images
            for (k, &a) in s.labeling().iter().enumerate() {
                for (l, &b) in s.labeling().iter().enumerate() {
                    prop_assert!((t.rows[i][k] - t.rows[i][l]).abs() <= s.d(a, b) + TAU);
                }
            }
        }
        let rep = embedding_distortion(&s, TAU).unwrap();
        prop_assert_eq!(all_equal, rep.resolved);
        if rep.resolved {
            let back = reconstruct_from_data(&t, TAU).unwrap();
            prop_assert!(lgh_exact(&s, &back, 64).unwrap().value <= TAU);
        }
    }

    #[test]
    fn jittered_trees_with_leaf_labels_are_resolved(seed: u64, b in 1usize..4, depth in 1usize..4) {
        let s = gen_graph_space(
            GraphKind::Tree { branching: b, depth },
            EdgeWeights::Jitter { amplitude: 0.5, seed },
            &Boundary::Leaves,
        )
        .unwrap();
        prop_assert!(embedding_distortion(&s, TAU).unwrap().resolved);
    }

    #[test]
    fn serialization_round_trips(seed: u64) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=8);
        let m = r.gen_range(0..=3);
        let s = random_space(&mut r, n, m);
        let text = lgh_core::io::serialize_space(&s);
        let back = lgh_core::io::parse_space(&text, TAU).unwrap();
        prop_assert_eq!(lgh_core::io::serialize_space(&back), text.clone());
        prop_assert_eq!(lgh_core::io::canonicalize(&text).unwrap(), text);
    }
}

/// A valid (ε,δ)-approximation on random data: random nets on both sides,
/// labels snapped into them, random pairing, and parameters just above the
/// measured quantities.
fn random_witness(
    seed: u64,
) -> (
    lgh_core::space::LabeledMetricSpace,
    lgh_core::space::LabeledMetricSpace,
    ApproximationWitness,
    f64,
    f64,
) {
    let (x, y) = pair(seed);
    let mut r = rng(seed ^ 0x5eed);
    let k = r.gen_range(1..=x.len().max(y.len()));
    let x_indices: Vec<usize> = (0..k).map(|_| r.gen_range(0..x.len())).collect();
    let y_indices: Vec<usize> = (0..k).map(|_| r.gen_range(0..y.len())).collect();
    let alpha0: Vec<usize> = x
        .labeling()
        .iter()
        .map(|&a| snap_to_net(&x, &x_indices, a))
        .collect();
    let beta0: Vec<usize> = y
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
    let probe = check_approximation(&x, &y, &w, 1e9, 1e9, false).unwrap();
    let eps = [
        probe.x_net.covering_radius,
        probe.x_net.displacement,
        probe.y_net.covering_radius,
        probe.y_net.displacement,
    ]
    .into_iter()
    .fold(0.0, f64::max)
        + 1e-9;
    let delta = probe.distortion + 1e-9;
    (x, y, w, eps, delta)
}

#[test]
fn random_witness_corpus_is_valid() {
    for seed in 0..50 {
        let (x, y, w, eps, delta) = random_witness(seed);
        assert!(check_approximation(&x, &y, &w, eps, delta, false)
            .unwrap()
            .is_ok());
    }
}
