#![allow(dead_code)]

use std::sync::Arc;

use lgh_core::generate::{gen_random_space, RandomMethod};
use lgh_core::space::{LabelSet, LabeledMetricSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TAU: f64 = 1e-9;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn label_set(m: usize) -> Arc<LabelSet> {
    Arc::new(LabelSet::new((0..m).map(|k| char::from(b'A' + k as u8).to_string())).unwrap())
}

/// Labels `A, B, ...` on the given points.
pub fn relabel(s: &LabeledMetricSpace, points: &[usize]) -> LabeledMetricSpace {
    s.relabeled(label_set(points.len()), points.to_vec())
        .unwrap()
}

pub fn random_labels(rng: &mut ChaCha8Rng, s: &LabeledMetricSpace, m: usize) -> LabeledMetricSpace {
    let points: Vec<usize> = (0..m).map(|_| rng.gen_range(0..s.len())).collect();
    relabel(s, &points)
}

/// All off-diagonal distances drawn from `{1, 2}`: always a metric, and
/// rich in ties and isometries.
pub fn one_two_space(rng: &mut ChaCha8Rng, n: usize) -> LabeledMetricSpace {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = if rng.gen_bool(0.5) { 1.0 } else { 2.0 };
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    LabeledMetricSpace::from_matrix(d, &[]).unwrap()
}

/// A random space on `n` points with `m` labels, drawn from a mix of
/// Euclidean, weighted-graph and `{1, 2}` metrics.
pub fn random_space(rng: &mut ChaCha8Rng, n: usize, m: usize) -> LabeledMetricSpace {
    let seed = rng.gen();
    let base = match rng.gen_range(0..3) {
        0 => gen_random_space(n, RandomMethod::Euclidean { k: 2 }, seed).unwrap(),
        1 => gen_random_space(n, RandomMethod::RandomGraph { p: 0.4 }, seed).unwrap(),
        _ => one_two_space(rng, n),
    };
    random_labels(rng, &base, m)
}

pub fn distortion(x: &LabeledMetricSpace, y: &LabeledMetricSpace, r: &[(usize, usize)]) -> f64 {
    let mut dis = 0.0f64;
    for &(i, j) in r {
        for &(k, l) in r {
            dis = dis.max((x.d(i, k) - y.d(j, l)).abs());
        }
    }
    dis
}

/// Every relation that covers both spaces and holds all label pairs, by
/// plain subset enumeration.
pub fn all_correspondences(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
) -> Vec<Vec<(usize, usize)>> {
    let (nx, ny) = (x.len(), y.len());
    assert!(nx * ny <= 16, "oracle is exponential");
    let cells: Vec<(usize, usize)> = (0..nx).flat_map(|i| (0..ny).map(move |j| (i, j))).collect();
    let labels: Vec<(usize, usize)> = x
        .labeling()
        .iter()
        .copied()
        .zip(y.labeling().iter().copied())
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << cells.len() {
        let r: Vec<(usize, usize)> = (0..cells.len())
            .filter(|&b| mask >> b & 1 == 1)
            .map(|b| cells[b])
            .collect();
        let covers = (0..nx).all(|i| r.iter().any(|p| p.0 == i))
            && (0..ny).all(|j| r.iter().any(|p| p.1 == j));
        if covers && labels.iter().all(|l| r.contains(l)) {
            out.push(r);
        }
    }
    out
}

/// Half the least distortion, and all relations attaining it.
pub fn brute_lgh(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
) -> (f64, Vec<Vec<(usize, usize)>>) {
    let all = all_correspondences(x, y);
    let best = all
        .iter()
        .map(|r| distortion(x, y, r))
        .fold(f64::INFINITY, f64::min);
    let argmins = all
        .into_iter()
        .filter(|r| distortion(x, y, r) == best)
        .collect();
    (0.5 * best, argmins)
}

/// Every map `X -> Y` as an index vector.
pub fn all_maps(nx: usize, ny: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..nx {
        out = out
            .into_iter()
            .flat_map(|f| {
                (0..ny).map(move |j| {
                    let mut g = f.clone();
                    g.push(j);
                    g
                })
            })
            .collect();
    }
    out
}
