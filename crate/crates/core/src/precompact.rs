//! Finite diagnostics for precompactness of collections of labeled spaces:
//! uniform total boundedness, the label equicontinuity modulus, and a
//! clustering probe for Cauchy subsequences.

use ndarray::Array2;
use rayon::prelude::*;

use crate::correspondence::{lgh_exact, lgh_upper_bound_heuristic, HeuristicOptions};
use crate::error::{Error, Result};
use crate::space::{covering_number, diameter, CoverMode, LabeledMetricSpace};

/// A nonempty, ordered collection of spaces over one label set.
#[derive(Debug, Clone)]
pub struct Collection {
    items: Vec<LabeledMetricSpace>,
}

impl Collection {
    pub fn new(items: Vec<LabeledMetricSpace>) -> Result<Self> {
        let Some(first) = items.first() else {
            return Err(Error::Parameter("empty collection".into()));
        };
        if items.iter().any(|s| !s.compatible(first)) {
            return Err(Error::LabelMismatch);
        }
        Ok(Self { items })
    }

    pub fn items(&self) -> &[LabeledMetricSpace] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UtbReport {
    pub diam_max: f64,
    /// `(eps, N_eps)`: the largest covering number over the items.
    pub covering: Vec<(f64, usize)>,
}

pub fn utb_report(c: &Collection, eps_list: &[f64], mode: CoverMode) -> Result<UtbReport> {
    let diam_max = c.items.iter().map(diameter).fold(0.0, f64::max);
    let covering = eps_list
        .iter()
        .map(|&eps| {
            let n = c
                .items
                .iter()
                .map(|s| covering_number(s, eps, mode).map(|cv| cv.size))
                .collect::<Result<Vec<_>>>()?;
            Ok((eps, n.into_iter().max().unwrap_or(0)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UtbReport { diam_max, covering })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulusReport {
    pub delta: f64,
    pub omega: f64,
    /// The modulus of each item on its own.
    pub per_item: Vec<f64>,
    /// `(item, label, label)` attaining `omega`, if any pair qualifies.
    pub witness: Option<(usize, usize, usize)>,
}

/// `omega(delta)`: the largest `d_X(alpha(l), alpha(l'))` over items and
/// label pairs with `d_L(l, l') <= delta`.
pub fn equicontinuity_modulus(c: &Collection, delta: f64) -> Result<ModulusReport> {
    if !(delta > 0.0) {
        return Err(Error::Parameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let metric = c.items[0]
        .label_set()
        .metric()
        .ok_or_else(|| Error::Parameter("the label set has no label metric".into()))?
        .clone();
    let nl = metric.nrows();
    let mut per_item = Vec::with_capacity(c.len());
    let mut omega = 0.0f64;
    let mut witness = None;
    for (n, s) in c.items.iter().enumerate() {
        let mut w = 0.0f64;
        for k in 0..nl {
            for m in k + 1..nl {
                if metric[[k, m]] > delta {
                    continue;
                }
                let v = s.d(s.label_point(k), s.label_point(m));
                if v > w {
                    w = v;
                }
                if witness.is_none() || v > omega {
                    omega = omega.max(v);
                    witness = Some((n, k, m));
                }
            }
        }
        per_item.push(w);
    }
    Ok(ModulusReport {
        delta,
        omega,
        per_item,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub rho: f64,
    /// Pairwise exact distances, or heuristic upper bounds over the cap.
    pub pairwise: Array2<f64>,
    /// Some pair was over the exact cap.
    pub conservative: bool,
    /// Clusters ordered by first member, members in sequence order.
    pub clusters: Vec<Vec<usize>>,
    /// The largest cluster (first on ties).
    pub subsequence: Vec<usize>,
    pub ok: bool,
}

/// Groups the sequence into clusters of pairwise distance at most `rho`.
/// Items are scanned from the end of the sequence, where a convergent
/// sequence is tightest, and each joins the first cluster it fits. The
/// verdict is ok when some cluster holds at least two items (or the whole
/// sequence, if shorter).
pub fn cauchy_subsequence_probe(c: &Collection, rho: f64, cap: usize) -> Result<ProbeReport> {
    if !(rho > 0.0) {
        return Err(Error::Parameter(format!("rho must be positive, got {rho}")));
    }
    let n = c.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (x, y) = (&c.items[i], &c.items[j]);
            if x.len() * y.len() <= cap {
                Ok((lgh_exact(x, y, cap)?.value, false))
            } else {
                Ok((
                    lgh_upper_bound_heuristic(x, y, &HeuristicOptions::default())?.value,
                    true,
                ))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pairwise = Array2::zeros((n, n));
    let mut conservative = false;
    for (&(i, j), &(v, heur)) in pairs.iter().zip(&values) {
        pairwise[[i, j]] = v;
        pairwise[[j, i]] = v;
        conservative |= heur;
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in (0..n).rev() {
        match clusters
            .iter_mut()
            .find(|cl| cl.iter().all(|&m| pairwise[[m, i]] <= rho))
        {
            Some(cl) => cl.push(i),
            None => clusters.push(vec![i]),
        }
    }
    for cl in clusters.iter_mut() {
        cl.reverse();
    }
    clusters.sort();
    let subsequence = clusters
        .iter()
        .fold(
            &clusters[0],
            |best, cl| if cl.len() > best.len() { cl } else { best },
        )
        .clone();
    let ok = subsequence.len() >= n.min(2);
    Ok(ProbeReport {
        rho,
        pairwise,
        conservative,
        clusters,
        subsequence,
        ok,
    })
}
