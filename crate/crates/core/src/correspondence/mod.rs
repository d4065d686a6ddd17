//! Correspondences between labeled spaces, their distortion, and the labeled
//! Gromov-Hausdorff distance computed as half the least distortion.

mod admissible;
mod exact;
mod heuristic;

pub use admissible::{
    appendix_sandwich_check, check_admissible, hausdorff_distance, induced_pseudometric, label_sup,
    pseudometric_to_correspondence, AdmissibilityVerdict, AdmissibilityViolation,
    AdmissiblePseudometric, SandwichReport, PSEUDOMETRIC_SLACK,
};
pub use exact::{lgh_exact, ExactLgh, DEFAULT_EXACT_CAP};
pub use heuristic::{lgh_upper_bound_heuristic, HeuristicOptions, UpperBound};

use crate::error::{Error, Result};
use crate::space::{diameter, LabeledMetricSpace};

/// Distortion contribution of two pairs `(i, j)` and `(k, l)`.
///
/// Every distortion in the crate is a maximum of these values, so results
/// from different search paths compare exactly.
#[inline]
pub(crate) fn gap(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    (i, j): (usize, usize),
    (k, l): (usize, usize),
) -> f64 {
    (x.d(i, k) - y.d(j, l)).abs()
}

pub(crate) fn require_compatible(x: &LabeledMetricSpace, y: &LabeledMetricSpace) -> Result<()> {
    if x.compatible(y) {
        Ok(())
    } else {
        Err(Error::LabelMismatch)
    }
}

/// Distortion of an arbitrary nonempty relation between `x` and `y`.
pub fn relation_distortion(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    pairs: &[(usize, usize)],
) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::Parameter("distortion of an empty relation".into()));
    }
    if let Some(p) = pairs.iter().find(|&&(i, j)| i >= x.len() || j >= y.len()) {
        return Err(Error::Index(format!("pair {p:?} out of range")));
    }
    Ok(max_gap(x, y, pairs))
}

fn max_gap(x: &LabeledMetricSpace, y: &LabeledMetricSpace, pairs: &[(usize, usize)]) -> f64 {
    let mut worst = 0.0f64;
    for (a, &p) in pairs.iter().enumerate() {
        for &q in &pairs[a + 1..] {
            worst = worst.max(gap(x, y, p, q));
        }
    }
    worst
}

/// A relation covering both spaces and containing every label pair
/// `(alpha(l), beta(l))`. Pairs are kept sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Correspondence {
    nx: usize,
    ny: usize,
    pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn new<I>(x: &LabeledMetricSpace, y: &LabeledMetricSpace, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        require_compatible(x, y)?;
        let (nx, ny) = (x.len(), y.len());
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        if let Some(p) = pairs.iter().find(|&&(i, j)| i >= nx || j >= ny) {
            return Err(Error::Index(format!("pair {p:?} out of range")));
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut row = vec![false; nx];
        let mut col = vec![false; ny];
        for &(i, j) in &pairs {
            row[i] = true;
            col[j] = true;
        }
        if let Some(i) = row.iter().position(|c| !c) {
            return Err(Error::NotCorrespondence(format!(
                "x point {i} is unmatched"
            )));
        }
        if let Some(j) = col.iter().position(|c| !c) {
            return Err(Error::NotCorrespondence(format!(
                "y point {j} is unmatched"
            )));
        }
        let ids = x.label_set().ids();
        for (k, (&a, &b)) in x.labeling().iter().zip(y.labeling()).enumerate() {
            if pairs.binary_search(&(a, b)).is_err() {
                return Err(Error::NotCorrespondence(format!(
                    "label '{}' pair ({a},{b}) is missing",
                    ids[k]
                )));
            }
        }
        Ok(Self { nx, ny, pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, pair: (usize, usize)) -> bool {
        self.pairs.binary_search(&pair).is_ok()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn distortion(&self, x: &LabeledMetricSpace, y: &LabeledMetricSpace) -> f64 {
        assert_eq!(
            (x.len(), y.len()),
            (self.nx, self.ny),
            "correspondence used with spaces of a different shape"
        );
        max_gap(x, y, &self.pairs)
    }

    /// The same relation read from `y` to `x`.
    pub fn transposed(&self) -> Self {
        let mut pairs: Vec<(usize, usize)> = self.pairs.iter().map(|&(i, j)| (j, i)).collect();
        pairs.sort_unstable();
        Self {
            nx: self.ny,
            ny: self.nx,
            pairs,
        }
    }
}

/// Lower bound on the labeled distance from label-pair distances and
/// diameters: every correspondence contains all label pairs, and any
/// correspondence distorts the diameter by at least the diameter gap.
pub fn lgh_lower_bound(x: &LabeledMetricSpace, y: &LabeledMetricSpace) -> Result<f64> {
    require_compatible(x, y)?;
    let (a, b) = (x.labeling(), y.labeling());
    let mut label_gap = 0.0f64;
    for k in 0..a.len() {
        for m in k + 1..a.len() {
            label_gap = label_gap.max(gap(x, y, (a[k], b[k]), (a[m], b[m])));
        }
    }
    let diam_gap = (diameter(x) - diameter(y)).abs();
    Ok(0.5 * label_gap.max(diam_gap))
}
