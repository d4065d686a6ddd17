use std::fmt;

use ndarray::Array2;

use super::{lgh_exact, require_compatible, Correspondence};
use crate::error::{Error, Result};
use crate::space::LabeledMetricSpace;

/// Additive slack used where an open condition `< t` has to be witnessed.
pub const PSEUDOMETRIC_SLACK: f64 = 1e-6;

/// Cross block of a pseudometric on `X ⊔ Y`; the diagonal blocks are the
/// metrics of the two spaces. Not validated on construction, see
/// [`check_admissible`].
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissiblePseudometric {
    pub cross: Array2<f64>,
    pub t: f64,
}

impl AdmissiblePseudometric {
    pub fn new(cross: Array2<f64>, t: f64) -> Self {
        Self { cross, t }
    }

    /// Full `(|X|+|Y|)`-square matrix, `X` first.
    pub fn full_matrix(&self, x: &LabeledMetricSpace, y: &LabeledMetricSpace) -> Array2<f64> {
        let (nx, ny) = (x.len(), y.len());
        Array2::from_shape_fn((nx + ny, nx + ny), |(a, b)| match (a < nx, b < nx) {
            (true, true) => x.d(a, b),
            (false, false) => y.d(a - nx, b - nx),
            (true, false) => self.cross[(a, b - nx)],
            (false, true) => self.cross[(b, a - nx)],
        })
    }
}

/// Hausdorff distance between `X` and `Y` inside the union.
pub fn hausdorff_distance(cross: &Array2<f64>) -> f64 {
    let rows = cross
        .rows()
        .into_iter()
        .map(|r| r.iter().copied().fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    let cols = cross
        .columns()
        .into_iter()
        .map(|c| c.iter().copied().fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    rows.max(cols)
}

/// Largest cross distance between corresponding labeled points.
pub fn label_sup(x: &LabeledMetricSpace, y: &LabeledMetricSpace, cross: &Array2<f64>) -> f64 {
    x.labeling()
        .iter()
        .zip(y.labeling())
        .map(|(&a, &b)| cross[(a, b)])
        .fold(0.0, f64::max)
}

/// `cross(x, y) = min over (x', y') in R of d(x, x') + s + d(y', y)`.
pub fn induced_pseudometric(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    r: &Correspondence,
    s: f64,
    tol: f64,
) -> Result<AdmissiblePseudometric> {
    if r.shape() != (x.len(), y.len()) {
        return Err(Error::Parameter(
            "correspondence shape does not match the spaces".into(),
        ));
    }
    let dis = r.distortion(x, y);
    if s < 0.5 * dis - tol {
        return Err(Error::Parameter(format!(
            "s = {s} is below half the distortion {dis}; the triangle inequality would fail"
        )));
    }
    let cross = Array2::from_shape_fn((x.len(), y.len()), |(i, j)| {
        r.pairs()
            .iter()
            .map(|&(a, b)| x.d(i, a) + s + y.d(b, j))
            .fold(f64::INFINITY, f64::min)
    });
    Ok(AdmissiblePseudometric { cross, t: s })
}

#[derive(Debug, Clone, PartialEq)]
pub enum AdmissibilityViolation {
    Shape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    Negative {
        x: usize,
        y: usize,
        value: f64,
    },
    /// Indices refer to the union, `X` first.
    Triangle {
        a: usize,
        b: usize,
        c: usize,
        excess: f64,
    },
    Hausdorff {
        value: f64,
        t: f64,
    },
    Label {
        label: String,
        value: f64,
        t: f64,
    },
}

impl fmt::Display for AdmissibilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Shape { expected, found } => {
                write!(f, "cross block is {found:?}, expected {expected:?}")
            }
            Self::Negative { x, y, value } => {
                write!(f, "negative cross distance ({x},{y}) = {value}")
            }
            Self::Triangle { a, b, c, excess } => {
                write!(f, "triangle ({a},{b},{c}) exceeded by {excess}")
            }
            Self::Hausdorff { value, t } => write!(f, "Hausdorff distance {value} exceeds t = {t}"),
            Self::Label { label, value, t } => {
                write!(
                    f,
                    "label '{label}' pair at distance {value} exceeds t = {t}"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityVerdict {
    /// At most [`AdmissibilityVerdict::MAX_LISTED`] triangle violations are listed.
    pub violations: Vec<AdmissibilityViolation>,
    pub triangle_violations: usize,
    pub hausdorff: f64,
    pub label_sup: f64,
}

impl AdmissibilityVerdict {
    pub const MAX_LISTED: usize = 32;

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the union matrix for the pseudometric axioms and the Hausdorff and
/// label bounds at `t`, all within `tol`. Triangles lying entirely inside one
/// space are not re-checked.
pub fn check_admissible(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    p: &AdmissiblePseudometric,
    t: f64,
    tol: f64,
) -> AdmissibilityVerdict {
    let (nx, ny) = (x.len(), y.len());
    let mut violations = Vec::new();
    if p.cross.dim() != (nx, ny) {
        violations.push(AdmissibilityViolation::Shape {
            expected: (nx, ny),
            found: p.cross.dim(),
        });
        return AdmissibilityVerdict {
            violations,
            triangle_violations: 0,
            hausdorff: f64::NAN,
            label_sup: f64::NAN,
        };
    }
    for ((i, j), &v) in p.cross.indexed_iter() {
        if v < -tol {
            violations.push(AdmissibilityViolation::Negative {
                x: i,
                y: j,
                value: v,
            });
        }
    }
    let full = p.full_matrix(x, y);
    let n = nx + ny;
    let mut triangle_violations = 0;
    for a in 0..n {
        for c in a + 1..n {
            let direct = full[(a, c)];
            for b in 0..n {
                if b == a || b == c {
                    continue;
                }
                let side = |k: usize| k < nx;
                if side(a) == side(b) && side(b) == side(c) {
                    continue;
                }
                let excess = direct - full[(a, b)] - full[(b, c)];
                if excess > tol {
                    triangle_violations += 1;
                    if triangle_violations <= AdmissibilityVerdict::MAX_LISTED {
                        violations.push(AdmissibilityViolation::Triangle { a, b, c, excess });
                    }
                }
            }
        }
    }
    let hausdorff = hausdorff_distance(&p.cross);
    if hausdorff > t + tol {
        violations.push(AdmissibilityViolation::Hausdorff {
            value: hausdorff,
            t,
        });
    }
    let ids = x.label_set().ids();
    for (k, (&a, &b)) in x.labeling().iter().zip(y.labeling()).enumerate() {
        let v = p.cross[(a, b)];
        if v > t + tol {
            violations.push(AdmissibilityViolation::Label {
                label: ids[k].clone(),
                value: v,
                t,
            });
        }
    }
    AdmissibilityVerdict {
        violations,
        triangle_violations,
        hausdorff,
        label_sup: label_sup(x, y, &p.cross),
    }
}

/// `R = {(x, y) : cross(x, y) < t'}` for `t'` strictly above `p.t`.
pub fn pseudometric_to_correspondence(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    p: &AdmissiblePseudometric,
    t_prime: f64,
    tol: f64,
) -> Result<Correspondence> {
    require_compatible(x, y)?;
    if t_prime <= p.t {
        return Err(Error::Parameter(format!(
            "t' = {t_prime} must exceed the admissibility parameter {}",
            p.t
        )));
    }
    if p.cross.dim() != (x.len(), y.len()) {
        return Err(Error::Parameter(
            "cross block shape does not match the spaces".into(),
        ));
    }
    let pairs = p
        .cross
        .indexed_iter()
        .filter(|(_, &v)| v < t_prime)
        .map(|(ij, _)| ij);
    let r = Correspondence::new(x, y, pairs).map_err(|e| match e {
        Error::NotCorrespondence(m) => {
            Error::NotCorrespondence(format!("{m}; t' = {t_prime} is below the actual gap"))
        }
        other => other,
    })?;
    let dis = r.distortion(x, y);
    if dis >= 2.0 * t_prime + tol {
        return Err(Error::Precondition(format!(
            "distortion {dis} is not below 2t' = {}; the pseudometric is not admissible",
            2.0 * t_prime
        )));
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub lgh: f64,
    pub dl_upper: f64,
    pub ok: bool,
}

/// Compares the exact distance with the embedding-style bound obtained from
/// induced pseudometrics.
///
/// For `p` induced by `R` at `s = dis(R)/2` every cross entry is at least
/// `s` and pairs of `R` sit at exactly `s`, so the Hausdorff term and the
/// label term both equal `s`. Their sum is therefore monotone in `dis(R)`
/// and the minimum over all `R` is attained at the exact minimizer.
pub fn appendix_sandwich_check(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    cap: usize,
    tol: f64,
) -> Result<SandwichReport> {
    let exact = lgh_exact(x, y, cap)?;
    let p = induced_pseudometric(x, y, &exact.argmin, exact.value, tol)?;
    let dl_upper = hausdorff_distance(&p.cross) + label_sup(x, y, &p.cross);
    let ok = exact.value <= dl_upper + tol && dl_upper <= 2.0 * exact.value + tol;
    Ok(SandwichReport {
        lgh: exact.value,
        dl_upper,
        ok,
    })
}
