//! Deterministic instance generators: weighted graphs under the shortest-path
//! metric, seeded random spaces, and the coordinate projection family.

use std::sync::Arc;

use ndarray::Array2;
use petgraph::algo::{connected_components, floyd_warshall};
use petgraph::graph::{NodeIndex, UnGraph};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::io::round12;
use crate::precompact::Collection;
use crate::space::{LabelSet, LabeledMetricSpace, RawSpace, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphKind {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    /// A center `v0` joined to `leaves` further vertices.
    Star {
        leaves: usize,
    },
    /// Complete `branching`-ary tree; the root is `v0`, vertices in
    /// breadth-first order.
    Tree {
        branching: usize,
        depth: usize,
    },
    /// `rows x cols` lattice, vertex `r * cols + c`.
    Grid {
        rows: usize,
        cols: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeWeights {
    Unit,
    Constant(f64),
    /// `1 + amplitude * u` with `u` uniform in `[-1, 1)`, seeded per call.
    Jitter {
        amplitude: f64,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Boundary {
    /// Both ends of a path.
    Endpoints,
    /// Vertices of degree at most one.
    Leaves,
    Explicit(Vec<usize>),
}

/// `A`, `B`, ..., `Z`, then `L26`, `L27`, ...
pub fn label_id(k: usize) -> String {
    if k < 26 {
        char::from(b'A' + k as u8).to_string()
    } else {
        format!("L{k}")
    }
}

fn graph_edges(kind: GraphKind) -> Result<(usize, Vec<(usize, usize)>)> {
    let bad = |what: &str| Err(Error::Parameter(format!("{what} in {kind:?}")));
    Ok(match kind {
        GraphKind::Path { n } => {
            if n == 0 {
                return bad("no vertices");
            }
            (n, (1..n).map(|i| (i - 1, i)).collect())
        }
        GraphKind::Cycle { n } => {
            if n < 3 {
                return bad("a cycle needs 3 vertices");
            }
            (n, (0..n).map(|i| (i, (i + 1) % n)).collect())
        }
        GraphKind::Star { leaves } => (leaves + 1, (1..=leaves).map(|i| (0, i)).collect()),
        GraphKind::Tree { branching, depth } => {
            if branching == 0 {
                return bad("zero branching");
            }
            let mut n = 1usize;
            let mut level = 1usize;
            for _ in 0..depth {
                level = level
                    .checked_mul(branching)
                    .ok_or_else(|| Error::Parameter("tree too large".into()))?;
                n += level;
            }
            (n, (1..n).map(|i| ((i - 1) / branching, i)).collect())
        }
        GraphKind::Grid { rows, cols } => {
            if rows == 0 || cols == 0 {
                return bad("empty grid");
            }
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    let v = r * cols + c;
                    if c + 1 < cols {
                        edges.push((v, v + 1));
                    }
                    if r + 1 < rows {
                        edges.push((v, v + cols));
                    }
                }
            }
            (rows * cols, edges)
        }
    })
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// All-pairs shortest paths of a connected weighted graph.
fn shortest_paths(n: usize, edges: &[(usize, usize, f64)]) -> Result<Vec<Vec<f64>>> {
    let mut g = UnGraph::<(), f64>::with_capacity(n, edges.len());
    let nodes: Vec<NodeIndex> = (0..n).map(|_| g.add_node(())).collect();
    for &(a, b, w) in edges {
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::Parameter(format!("edge ({a},{b}) has weight {w}")));
        }
        g.add_edge(nodes[a], nodes[b], w);
    }
    if connected_components(&g) != 1 {
        return Err(Error::Parameter("graph is not connected".into()));
    }
    let d = floyd_warshall(&g, |e| *e.weight()).expect("positive weights");
    Ok((0..n)
        .map(|i| (0..n).map(|j| round12(d[&(nodes[i], nodes[j])])).collect())
        .collect())
}

/// A graph with the shortest-path metric. Vertices are `v0, v1, ...` and
/// boundary vertices get labels `A, B, ...` in vertex order.
pub fn gen_graph_space(
    kind: GraphKind,
    weights: EdgeWeights,
    boundary: &Boundary,
) -> Result<LabeledMetricSpace> {
    let (n, edges) = graph_edges(kind)?;
    let mut rng = match weights {
        EdgeWeights::Jitter { seed, .. } => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let weighted: Vec<(usize, usize, f64)> = edges
        .iter()
        .map(|&(a, b)| {
            let w = match weights {
                EdgeWeights::Unit => 1.0,
                EdgeWeights::Constant(c) => c,
                EdgeWeights::Jitter { amplitude, .. } => {
                    let u: f64 = rng.as_mut().expect("seeded").gen_range(-1.0..1.0);
                    round12(1.0 + amplitude * u)
                }
            };
            (a, b, w)
        })
        .collect();
    let dist = shortest_paths(n, &weighted)?;
    let mut degree = vec![0usize; n];
    for &(a, b) in &edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let points: Vec<usize> = match boundary {
        Boundary::Endpoints => match kind {
            GraphKind::Path { n } if n > 1 => vec![0, n - 1],
            GraphKind::Path { .. } => vec![0],
            _ => {
                return Err(Error::Parameter(
                    "endpoints are defined for paths only".into(),
                ))
            }
        },
        Boundary::Leaves => (0..n).filter(|&v| degree[v] <= 1).collect(),
        Boundary::Explicit(v) => {
            if let Some(bad) = v.iter().find(|&&i| i >= n) {
                return Err(Error::LabelOutOfRange {
                    label: bad.to_string(),
                    index: *bad,
                    n,
                });
            }
            v.clone()
        }
    };
    let raw = RawSpace {
        points: names(n),
        dist,
        labels: points
            .iter()
            .enumerate()
            .map(|(k, &v)| (label_id(k), v))
            .collect(),
        label_metric: None,
    };
    LabeledMetricSpace::from_raw(&raw, DEFAULT_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RandomMethod {
    /// Uniform points in `[0, 1]^k`, Euclidean distances.
    Euclidean { k: usize },
    /// A random spanning tree plus each other edge with probability `p`;
    /// weights uniform in `[0.5, 1.5)`.
    RandomGraph { p: f64 },
}

/// A seeded random space on points `v0..v{n-1}`. Distances are rounded to 12
/// decimals. Between 0 and `min(n, 3)` labels `A, B, ...` are placed on
/// uniformly drawn points.
pub fn gen_random_space(n: usize, method: RandomMethod, seed: u64) -> Result<LabeledMetricSpace> {
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = match method {
        RandomMethod::Euclidean { k } => {
            if k == 0 {
                return Err(Error::Parameter("dimension must be positive".into()));
            }
            let pts: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..k).map(|_| rng.gen::<f64>()).collect())
                .collect();
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let s: f64 = pts[i]
                                .iter()
                                .zip(&pts[j])
                                .map(|(a, b)| (a - b).powi(2))
                                .sum();
                            round_decimals(s.sqrt())
                        })
                        .collect()
                })
                .collect()
        }
        RandomMethod::RandomGraph { p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Parameter(format!(
                    "edge probability {p} outside [0, 1]"
                )));
            }
            let mut edges = Vec::new();
            for i in 1..n {
                let parent = rng.gen_range(0..i);
                edges.push((parent, i));
            }
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(p) && !edges.contains(&(i, j)) {
                        edges.push((i, j));
                    }
                }
            }
            let weighted: Vec<_> = edges
                .into_iter()
                .map(|(a, b)| (a, b, round_decimals(rng.gen_range(0.5..1.5))))
                .collect();
            shortest_paths(n, &weighted)?
        }
    };
    let m = rng.gen_range(0..=n.min(3));
    let labels = (0..m).map(|k| (label_id(k), rng.gen_range(0..n))).collect();
    let raw = RawSpace {
        points: names(n),
        dist,
        labels,
        label_metric: None,
    };
    LabeledMetricSpace::from_raw(&raw, DEFAULT_TOL)
}

fn round_decimals(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

/// Adds `eta * (1 + u)` with `u` uniform in `[0, 1)` to every off-diagonal
/// distance. Increments lie in `[eta, 2 eta]`, so the triangle inequality is
/// preserved and the labeled distance to the original is at most `eta`.
pub fn perturb(space: &LabeledMetricSpace, eta: f64, seed: u64) -> Result<LabeledMetricSpace> {
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::Parameter(format!(
            "eta must be nonnegative, got {eta}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = space.len();
    let mut dist = space.matrix().clone();
    for i in 0..n {
        for j in i + 1..n {
            let v = round_decimals(dist[[i, j]] + eta * (1.0 + rng.gen::<f64>()));
            dist[[i, j]] = v;
            dist[[j, i]] = v;
        }
    }
    LabeledMetricSpace::with_label_set(
        space.points().to_vec(),
        dist,
        space.label_set().clone(),
        space.labeling().to_vec(),
        DEFAULT_TOL,
    )
}

/// A seeded uniform random subset of `0..n` of size `k`, sorted.
pub fn random_subset(n: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = sample(&mut rng, n, k.min(n)).into_vec();
    v.sort_unstable();
    v
}

pub const MAX_PROJECTION_K: usize = 10;

/// Labels are the bit strings of length `k`, with
/// `d_L(l, l') = sum_i 2^-i |l_i - l'_i|` (`i` from 1). Every member is the
/// two-point space `{0, 1}` at distance 1, and member `n` sends a label to
/// its `n`-th bit.
pub fn gen_projection_family(k: usize) -> Result<Collection> {
    if !(1..=MAX_PROJECTION_K).contains(&k) {
        return Err(Error::Parameter(format!(
            "k must lie in 1..={MAX_PROJECTION_K}, got {k}"
        )));
    }
    let ids: Vec<String> = (0..1usize << k).map(|b| format!("{b:0k$b}")).collect();
    let bits: Vec<&[u8]> = ids.iter().map(|s| s.as_bytes()).collect();
    let metric = Array2::from_shape_fn((ids.len(), ids.len()), |(a, b)| {
        (0..k)
            .filter(|&i| bits[a][i] != bits[b][i])
            .map(|i| 2f64.powi(-(i as i32 + 1)))
            .sum()
    });
    let labels = Arc::new(LabelSet::with_metric(ids.clone(), &metric, DEFAULT_TOL)?);
    let dist = Array2::from_shape_fn((2, 2), |(i, j)| if i == j { 0.0 } else { 1.0 });
    let items = (0..k)
        .map(|n| {
            let labeling = labels
                .ids()
                .iter()
                .map(|id| usize::from(id.as_bytes()[n] == b'1'))
                .collect();
            LabeledMetricSpace::with_label_set(
                vec!["0".into(), "1".into()],
                dist.clone(),
                labels.clone(),
                labeling,
                DEFAULT_TOL,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Collection::new(items)
}
