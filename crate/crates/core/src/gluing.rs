//! Gluing chains of labeled spaces along admissible pseudometrics, and a
//! finite stand-in for the limit of such a chain.
//!
//! Levels are 0-based in the API; point and label names in the glued union
//! use 1-based levels.

use std::sync::Arc;

use ndarray::Array2;

use crate::correspondence::{check_admissible, AdmissiblePseudometric};
use crate::error::{Error, Result};
use crate::space::{LabelSet, LabeledMetricSpace, PseudoSpace};

/// Spaces `X_0..X_{N-1}` with admissible links between consecutive ones.
/// Link `k` joins `X_k` to `X_{k+1}` at parameter `links[k].t`.
#[derive(Debug, Clone)]
pub struct Chain {
    spaces: Vec<LabeledMetricSpace>,
    links: Vec<AdmissiblePseudometric>,
}

impl Chain {
    pub fn new(
        spaces: Vec<LabeledMetricSpace>,
        links: Vec<AdmissiblePseudometric>,
        tol: f64,
    ) -> Result<Self> {
        if spaces.is_empty() {
            return Err(Error::Parameter("empty chain".into()));
        }
        if links.len() + 1 != spaces.len() {
            return Err(Error::Parameter(format!(
                "{} spaces need {} links, got {}",
                spaces.len(),
                spaces.len() - 1,
                links.len()
            )));
        }
        if spaces.iter().any(|s| !s.compatible(&spaces[0])) {
            return Err(Error::LabelMismatch);
        }
        for (k, link) in links.iter().enumerate() {
            let v = check_admissible(&spaces[k], &spaces[k + 1], link, link.t, tol);
            if let Some(first) = v.violations.first() {
                return Err(Error::Precondition(format!(
                    "link {k} is not admissible at {}: {first}",
                    link.t
                )));
            }
        }
        Ok(Self { spaces, links })
    }

    pub fn spaces(&self) -> &[LabeledMetricSpace] {
        &self.spaces
    }

    pub fn links(&self) -> &[AdmissiblePseudometric] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    /// Cross distances between `X_i` and `X_j` for `i < j`, by min-plus
    /// composition of the links in between. The parameter is the sum of the
    /// link parameters.
    pub fn chain_metric(&self, i: usize, j: usize) -> Result<AdmissiblePseudometric> {
        if !(i < j && j < self.len()) {
            return Err(Error::Index(format!(
                "levels ({i},{j}) must satisfy i < j < {}",
                self.len()
            )));
        }
        let mut acc = self.links[i].clone();
        for link in &self.links[i + 1..j] {
            acc = AdmissiblePseudometric {
                cross: min_plus(&acc.cross, &link.cross),
                t: acc.t + link.t,
            };
        }
        Ok(acc)
    }

    /// All levels in one pseudo-space, with cross blocks from
    /// [`Chain::chain_metric`]. Points are named `L{n}:{name}` and labels
    /// `{id}@{n}`. A single-space chain returns that space unchanged.
    pub fn glue_disjoint_union(&self, tol: f64) -> Result<PseudoSpace> {
        if self.len() == 1 {
            return Ok(self.spaces[0].clone().into());
        }
        let offsets: Vec<usize> = self
            .spaces
            .iter()
            .scan(0, |acc, s| {
                let o = *acc;
                *acc += s.len();
                Some(o)
            })
            .collect();
        let total: usize = self.spaces.iter().map(LabeledMetricSpace::len).sum();
        let mut dist = Array2::zeros((total, total));
        for (a, s) in self.spaces.iter().enumerate() {
            let o = offsets[a];
            dist.slice_mut(ndarray::s![o..o + s.len(), o..o + s.len()])
                .assign(s.matrix());
            for b in a + 1..self.len() {
                let cross = self.chain_metric(a, b)?.cross;
                let ob = offsets[b];
                for ((p, q), &v) in cross.indexed_iter() {
                    dist[[o + p, ob + q]] = v;
                    dist[[ob + q, o + p]] = v;
                }
            }
        }
        let points = self
            .spaces
            .iter()
            .enumerate()
            .flat_map(|(n, s)| s.points().iter().map(move |p| format!("L{}:{p}", n + 1)))
            .collect();
        let ids = self.spaces[0].label_set().ids();
        let mut level_ids = Vec::new();
        let mut level_points = Vec::new();
        for (n, s) in self.spaces.iter().enumerate() {
            for (k, id) in ids.iter().enumerate() {
                level_ids.push(format!("{id}@{}", n + 1));
                level_points.push(offsets[n] + s.labeling()[k]);
            }
        }
        let labels = LabelSet::new(level_ids.iter().cloned())?;
        let labeling = labels
            .ids()
            .iter()
            .map(|id| {
                let pos = level_ids
                    .iter()
                    .position(|x| x == id)
                    .expect("id was inserted");
                level_points[pos]
            })
            .collect();
        PseudoSpace::with_label_set(points, dist, Arc::new(labels), labeling, tol)
    }

    /// The last level as a stand-in for the limit, with certified bounds.
    pub fn limit_proxy(&self) -> LimitProxy {
        let mut tail = vec![0.0; self.len()];
        for n in (0..self.len() - 1).rev() {
            tail[n] = tail[n + 1] + self.links[n].t;
        }
        LimitProxy {
            space: self.spaces[self.len() - 1].clone(),
            tail_bounds: tail,
        }
    }
}

fn min_plus(a: &Array2<f64>, b: &Array2<f64>) -> Array2<f64> {
    let (n, m, k) = (a.nrows(), a.ncols(), b.ncols());
    Array2::from_shape_fn((n, k), |(i, j)| {
        (0..m)
            .map(|l| a[[i, l]] + b[[l, j]])
            .fold(f64::INFINITY, f64::min)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitProxy {
    pub space: LabeledMetricSpace,
    /// `tail_bounds[n]` bounds the labeled distance from level `n` to the
    /// proxy: the sum of link parameters from `n` on.
    pub tail_bounds: Vec<f64>,
}

impl LimitProxy {
    /// Bound relative to the second-to-last level, or 0 for a single level.
    pub fn bound(&self) -> f64 {
        let n = self.tail_bounds.len();
        if n < 2 {
            0.0
        } else {
            self.tail_bounds[n - 2]
        }
    }
}

/// Uniform grid `{k / 2^n}` on `[0, 1]` with labels `A` at 0 and `B` at 1.
pub fn dyadic_grid(n: u32) -> Result<LabeledMetricSpace> {
    let m = 1usize << n;
    let step = 1.0 / m as f64;
    let dist = (0..=m)
        .map(|i| {
            (0..=m)
                .map(|j| (i as f64 - j as f64).abs() * step)
                .collect()
        })
        .collect();
    let mut s = LabeledMetricSpace::from_matrix(dist, &[("A", 0), ("B", m)])?;
    let names = (0..=m).map(|i| format!("{i}/{m}")).collect();
    s = s.renamed(names)?;
    Ok(s)
}

/// Grids at levels `first..=last` linked by `|x - y|` at parameter
/// `2^-(n+1)` between levels `n` and `n + 1`.
pub fn dyadic_chain(first: u32, last: u32, tol: f64) -> Result<Chain> {
    if first == 0 || first > last {
        return Err(Error::Parameter(format!(
            "bad level range {first}..={last}"
        )));
    }
    let spaces = (first..=last)
        .map(dyadic_grid)
        .collect::<Result<Vec<_>>>()?;
    let links = (first..last)
        .map(|n| {
            let (a, b) = (1usize << n, 1usize << (n + 1));
            let cross = Array2::from_shape_fn((a + 1, b + 1), |(i, j)| {
                (i as f64 / a as f64 - j as f64 / b as f64).abs()
            });
            AdmissiblePseudometric::new(cross, 2f64.powi(-(n as i32 + 1)))
        })
        .collect();
    Chain::new(spaces, links, tol)
}
