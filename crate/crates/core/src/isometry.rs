//! Exact label-preserving isometries and (ε,L)-isometries between labeled
//! spaces.

use crate::correspondence::{require_compatible, Correspondence};
use crate::error::{Error, Result};
use crate::space::LabeledMetricSpace;

pub const DEFAULT_ISOMETRY_CAP: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NoIsometry {
    SizeMismatch {
        nx: usize,
        ny: usize,
    },
    /// Label constraints alone are contradictory.
    LabelConflict(String),
    /// Search finished without a match.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsometryOutcome {
    /// `h[i]` is the image of point `i`.
    Found(Vec<usize>),
    NotFound(NoIsometry),
}

impl IsometryOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, Self::Found(_))
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded {
            what: "isometry search",
            size: n,
            cap,
            advice: "",
        });
    }
    Ok(())
}

/// Bijection preserving distances within `tol` and sending `alpha(l)` to
/// `beta(l)` for every label.
pub fn find_l_isometry(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    cap: usize,
    tol: f64,
) -> Result<IsometryOutcome> {
    require_compatible(x, y)?;
    let (nx, ny) = (x.len(), y.len());
    if nx != ny {
        return Ok(IsometryOutcome::NotFound(NoIsometry::SizeMismatch {
            nx,
            ny,
        }));
    }
    check_cap(nx, cap)?;
    let mut fixed: Vec<Option<usize>> = vec![None; nx];
    let ids = x.label_set().ids();
    for (k, (&a, &b)) in x.labeling().iter().zip(y.labeling()).enumerate() {
        match fixed[a] {
            Some(prev) if prev != b => {
                return Ok(IsometryOutcome::NotFound(NoIsometry::LabelConflict(
                    format!(
                        "label '{}' sends point {a} to {b}, another label sends it to {prev}",
                        ids[k]
                    ),
                )))
            }
            _ => fixed[a] = Some(b),
        }
    }
    let mut found = None;
    search(x, y, &fixed, tol, &mut |h| {
        found = Some(h.to_vec());
        false
    })?;
    Ok(match found {
        Some(h) => IsometryOutcome::Found(h),
        None => IsometryOutcome::NotFound(NoIsometry::Exhausted),
    })
}

/// Every distance-preserving bijection, ignoring labels, in lexicographic order.
pub fn all_isometries(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    cap: usize,
    tol: f64,
) -> Result<Vec<Vec<usize>>> {
    if x.len() != y.len() {
        return Ok(Vec::new());
    }
    check_cap(x.len(), cap)?;
    let mut out = Vec::new();
    search(x, y, &vec![None; x.len()], tol, &mut |h| {
        out.push(h.to_vec());
        true
    })?;
    Ok(out)
}

fn sorted_row(s: &LabeledMetricSpace, i: usize) -> Vec<f64> {
    let mut r: Vec<f64> = (0..s.len()).map(|j| s.d(i, j)).collect();
    r.sort_by(f64::total_cmp);
    r
}

/// Backtracking over profile-compatible assignments. `visit` returns whether
/// to keep enumerating.
fn search(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    fixed: &[Option<usize>],
    tol: f64,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<()> {
    let n = x.len();
    let px: Vec<Vec<f64>> = (0..n).map(|i| sorted_row(x, i)).collect();
    let py: Vec<Vec<f64>> = (0..n).map(|j| sorted_row(y, j)).collect();
    let compatible =
        |i: usize, j: usize| px[i].iter().zip(&py[j]).all(|(a, b)| (a - b).abs() <= tol);

    let mut h = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut order: Vec<usize> = (0..n).filter(|&i| fixed[i].is_some()).collect();
    for i in order.clone() {
        let j = fixed[i].expect("filtered");
        if used[j] || !compatible(i, j) {
            return Ok(());
        }
        used[j] = true;
        h[i] = j;
    }
    for &a in &order {
        for &b in &order {
            if (x.d(a, b) - y.d(h[a], h[b])).abs() > tol {
                return Ok(());
            }
        }
    }
    let start = order.len();
    order.extend((0..n).filter(|&i| fixed[i].is_none()));

    fn rec(
        depth: usize,
        order: &[usize],
        h: &mut Vec<usize>,
        used: &mut Vec<bool>,
        x: &LabeledMetricSpace,
        y: &LabeledMetricSpace,
        tol: f64,
        compatible: &dyn Fn(usize, usize) -> bool,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == order.len() {
            return visit(h);
        }
        let i = order[depth];
        for j in 0..y.len() {
            if used[j] || !compatible(i, j) {
                continue;
            }
            let consistent = order[..depth]
                .iter()
                .all(|&a| (x.d(a, i) - y.d(h[a], j)).abs() <= tol);
            if !consistent {
                continue;
            }
            h[i] = j;
            used[j] = true;
            let go_on = rec(depth + 1, order, h, used, x, y, tol, compatible, visit);
            used[j] = false;
            h[i] = usize::MAX;
            if !go_on {
                return false;
            }
        }
        true
    }
    rec(
        start,
        &order,
        &mut h,
        &mut used,
        x,
        y,
        tol,
        &compatible,
        visit,
    );
    Ok(())
}

fn check_map(x: &LabeledMetricSpace, y: &LabeledMetricSpace, f: &[usize]) -> Result<()> {
    if f.len() != x.len() {
        return Err(Error::Index(format!(
            "map has {} entries for {} points",
            f.len(),
            x.len()
        )));
    }
    if let Some(&j) = f.iter().find(|&&j| j >= y.len()) {
        return Err(Error::Index(format!("map image {j} out of range")));
    }
    Ok(())
}

/// Largest `d_Y(h(alpha(l)), beta(l))`. For a distance-preserving `h` this
/// bounds the labeled distance from above.
pub fn displacement_upper_bound(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    h: &[usize],
) -> Result<f64> {
    require_compatible(x, y)?;
    check_map(x, y, h)?;
    Ok(x.labeling()
        .iter()
        .zip(y.labeling())
        .map(|(&a, &b)| y.d(h[a], b))
        .fold(0.0, f64::max))
}

/// Least label displacement over all unlabeled isometries, with the
/// minimizing map. `None` when the spaces are not isometric.
pub fn min_isometry_displacement(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    cap: usize,
    tol: f64,
) -> Result<Option<(f64, Vec<usize>)>> {
    require_compatible(x, y)?;
    let mut best: Option<(f64, Vec<usize>)> = None;
    for h in all_isometries(x, y, cap, tol)? {
        let d = displacement_upper_bound(x, y, &h)?;
        if best.as_ref().is_none_or(|(b, _)| d < *b) {
            best = Some((d, h));
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsIsometryVerdict {
    pub dis: f64,
    pub label_displacement: f64,
    /// Largest distance from a point of `Y` to the image `f(X)`.
    pub net_radius: f64,
    pub dis_ok: bool,
    pub label_ok: bool,
    pub net_ok: bool,
}

impl EpsIsometryVerdict {
    pub fn is_ok(&self) -> bool {
        self.dis_ok && self.label_ok && self.net_ok
    }

    /// Smallest ε the map could pass at, up to the strict inequalities.
    pub fn measured(&self) -> f64 {
        self.dis.max(self.label_displacement).max(self.net_radius)
    }

    fn failed_clauses(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.dis_ok {
            out.push("distortion");
        }
        if !self.label_ok {
            out.push("label displacement");
        }
        if !self.net_ok {
            out.push("image net");
        }
        out
    }
}

/// Distortion, label displacement and image-net clauses, each strict `< eps`.
pub fn check_eps_l_isometry(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    f: &[usize],
    eps: f64,
) -> Result<EpsIsometryVerdict> {
    require_compatible(x, y)?;
    check_map(x, y, f)?;
    if !(eps > 0.0) {
        return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
    }
    let n = x.len();
    let mut dis = 0.0f64;
    for i in 0..n {
        for k in i + 1..n {
            dis = dis.max((x.d(i, k) - y.d(f[i], f[k])).abs());
        }
    }
    let label_displacement = displacement_upper_bound(x, y, f)?;
    let net_radius = (0..y.len())
        .map(|j| f.iter().map(|&fi| y.d(fi, j)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    Ok(EpsIsometryVerdict {
        dis,
        label_displacement,
        net_radius,
        dis_ok: dis < eps,
        label_ok: label_displacement < eps,
        net_ok: net_radius < eps,
    })
}

/// Selects the least partner of each point, except that a labeled point goes
/// to the partner of its lowest-index label.
pub fn correspondence_to_map(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    r: &Correspondence,
) -> Vec<usize> {
    assert_eq!(
        r.shape(),
        (x.len(), y.len()),
        "correspondence shape mismatch"
    );
    let mut f = vec![usize::MAX; x.len()];
    for &(i, j) in r.pairs() {
        if f[i] == usize::MAX {
            f[i] = j;
        }
    }
    let mut pinned = vec![false; x.len()];
    for (&a, &b) in x.labeling().iter().zip(y.labeling()) {
        if !pinned[a] {
            pinned[a] = true;
            f[a] = b;
        }
    }
    f
}

/// `R = {(x, y) : d_Y(f(x), y) < eps}` for an (ε,L)-isometry `f`.
pub fn map_to_correspondence(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    f: &[usize],
    eps: f64,
    tol: f64,
) -> Result<Correspondence> {
    let verdict = check_eps_l_isometry(x, y, f, eps)?;
    if !verdict.is_ok() {
        return Err(Error::Precondition(format!(
            "map is not an ({eps},L)-isometry: {} clause failed",
            verdict.failed_clauses().join(", ")
        )));
    }
    let pairs = (0..x.len()).flat_map(|i| {
        (0..y.len())
            .filter(move |&j| y.d(f[i], j) < eps)
            .map(move |j| (i, j))
    });
    let r = Correspondence::new(x, y, pairs)?;
    let dis = r.distortion(x, y);
    assert!(
        dis < 3.0 * eps + tol,
        "distortion {dis} of the induced correspondence is not below 3 eps"
    );
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub verdicts: Vec<EpsIsometryVerdict>,
    /// `measured()` of each verdict.
    pub measured: Vec<f64>,
    /// The measured values never increase.
    pub monotone: bool,
    pub all_ok: bool,
}

/// Checks `f_n: X_n -> X` against `eps_n` for each term of a finite prefix.
pub fn convergence_witness(
    terms: &[(LabeledMetricSpace, Vec<usize>)],
    limit: &LabeledMetricSpace,
    eps: &[f64],
) -> Result<ConvergenceReport> {
    if terms.len() != eps.len() {
        return Err(Error::Parameter(format!(
            "{} terms but {} eps values",
            terms.len(),
            eps.len()
        )));
    }
    let verdicts = terms
        .iter()
        .zip(eps)
        .map(|((xn, f), &e)| check_eps_l_isometry(xn, limit, f, e))
        .collect::<Result<Vec<_>>>()?;
    let measured: Vec<f64> = verdicts.iter().map(EpsIsometryVerdict::measured).collect();
    let monotone = measured.windows(2).all(|w| w[1] <= w[0]);
    let all_ok = verdicts.iter().all(EpsIsometryVerdict::is_ok);
    Ok(ConvergenceReport {
        verdicts,
        measured,
        monotone,
        all_ok,
    })
}
