//! (ε,δ)-approximations by finite subsets, their strong form, and the
//! finite-net convergence criterion.

use crate::correspondence::{
    lgh_exact, lgh_upper_bound_heuristic, relation_distortion, require_compatible, HeuristicOptions,
};
use crate::error::{Error, Result};
use crate::isometry::check_eps_l_isometry;
use crate::space::{
    check_labeled_net, greedy_net, snap_to_net, LabeledMetricSpace, NetVerdict, NET_MARGIN,
};

/// Paired finite subsets `x_i <-> y_i` with relabelings into them.
/// `alpha0[k]` and `beta0[k]` are point indices of the two spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproximationWitness {
    pub x_indices: Vec<usize>,
    pub y_indices: Vec<usize>,
    pub alpha0: Vec<usize>,
    pub beta0: Vec<usize>,
}

impl ApproximationWitness {
    fn validate(&self, x: &LabeledMetricSpace, y: &LabeledMetricSpace) -> Result<()> {
        if self.x_indices.is_empty() || self.x_indices.len() != self.y_indices.len() {
            return Err(Error::Parameter(
                "witness lists must be nonempty and of equal length".into(),
            ));
        }
        let nl = x.labeling().len();
        if self.alpha0.len() != nl || self.beta0.len() != nl {
            return Err(Error::Parameter(
                "relabelings must cover every label".into(),
            ));
        }
        let bad_x = self
            .x_indices
            .iter()
            .chain(&self.alpha0)
            .find(|&&i| i >= x.len());
        let bad_y = self
            .y_indices
            .iter()
            .chain(&self.beta0)
            .find(|&&j| j >= y.len());
        if let Some(i) = bad_x {
            return Err(Error::Index(format!("x index {i} out of range")));
        }
        if let Some(j) = bad_y {
            return Err(Error::Index(format!("y index {j} out of range")));
        }
        if self.alpha0.iter().any(|a| !self.x_indices.contains(a))
            || self.beta0.iter().any(|b| !self.y_indices.contains(b))
        {
            return Err(Error::Parameter(
                "relabelings must point into the witness lists".into(),
            ));
        }
        Ok(())
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        self.x_indices
            .iter()
            .copied()
            .zip(self.y_indices.iter().copied())
            .chain(self.alpha0.iter().copied().zip(self.beta0.iter().copied()))
            .collect()
    }
}

fn distinct(v: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(v.len());
    for &p in v {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproximationVerdict {
    pub x_net: NetVerdict,
    pub y_net: NetVerdict,
    pub distortion: f64,
    /// `None` when the strong clause was not requested.
    pub strong: Option<bool>,
    pub failures: Vec<String>,
}

impl ApproximationVerdict {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_approximation(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    w: &ApproximationWitness,
    eps: f64,
    delta: f64,
    strong: bool,
) -> Result<ApproximationVerdict> {
    require_compatible(x, y)?;
    if !(eps > 0.0 && delta > 0.0) {
        return Err(Error::Parameter(format!(
            "eps and delta must be positive, got {eps} and {delta}"
        )));
    }
    w.validate(x, y)?;
    let x_net = check_labeled_net(x, &distinct(&w.x_indices), &w.alpha0, eps)?;
    let y_net = check_labeled_net(y, &distinct(&w.y_indices), &w.beta0, eps)?;
    let distortion = relation_distortion(x, y, &w.pairs())?;
    let mut failures = Vec::new();
    if !x_net.ok {
        failures.push(format!(
            "x side is not a labeled {eps}-net (radius {}, displacement {})",
            x_net.covering_radius, x_net.displacement
        ));
    }
    if !y_net.ok {
        failures.push(format!(
            "y side is not a labeled {eps}-net (radius {}, displacement {})",
            y_net.covering_radius, y_net.displacement
        ));
    }
    if distortion >= delta {
        failures.push(format!("distortion {distortion} is not below {delta}"));
    }
    let strong = strong.then(|| {
        let mut ok = true;
        for (i, (&xi, &yi)) in w.x_indices.iter().zip(&w.y_indices).enumerate() {
            for (k, (&a, &b)) in w.alpha0.iter().zip(&w.beta0).enumerate() {
                if (xi == a) != (yi == b) {
                    ok = false;
                    failures.push(format!(
                        "strong clause fails at position {i} for label {}",
                        x.label_set().ids()[k]
                    ));
                }
            }
        }
        ok
    });
    Ok(ApproximationVerdict {
        x_net,
        y_net,
        distortion,
        strong,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImpliedBound {
    /// Exact distance, or a heuristic upper bound when over the cap.
    pub lgh: f64,
    pub exact: bool,
    /// `2 eps + delta / 2`.
    pub bound: f64,
    pub holds: bool,
}

/// Compares the labeled distance with the bound implied by a valid
/// (ε,δ)-approximation.
pub fn approximation_implies_lgh(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    w: &ApproximationWitness,
    eps: f64,
    delta: f64,
    cap: usize,
    tol: f64,
) -> Result<ImpliedBound> {
    let verdict = check_approximation(x, y, w, eps, delta, false)?;
    if !verdict.is_ok() {
        return Err(Error::Precondition(format!(
            "not an ({eps},{delta})-approximation: {}",
            verdict.failures.join("; ")
        )));
    }
    let (lgh, exact) = if x.len() * y.len() <= cap {
        (lgh_exact(x, y, cap)?.value, true)
    } else {
        (
            lgh_upper_bound_heuristic(x, y, &HeuristicOptions::default())?.value,
            false,
        )
    };
    let bound = 2.0 * eps + 0.5 * delta;
    Ok(ImpliedBound {
        lgh,
        exact,
        bound,
        holds: lgh < bound + tol,
    })
}

/// Builds a strong approximation from a map `f` that is a (2ε,L)-isometry.
///
/// `X_0` is a greedy strict ε/2-net, each label snaps to its nearest net
/// point and `y_i = f(x_i)`. Net points sharing an image with a labeled net
/// point are collapsed onto it, so that the strong clause is well defined.
pub fn build_approximation_witness(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    f: &[usize],
    eps: f64,
) -> Result<ApproximationWitness> {
    let verdict = check_eps_l_isometry(x, y, f, 2.0 * eps)?;
    if !verdict.is_ok() {
        return Err(Error::Precondition(format!(
            "map is not a ({},L)-isometry (measured {})",
            2.0 * eps,
            verdict.measured()
        )));
    }
    let net = greedy_net(x, 0, 0.5 * eps * (1.0 - NET_MARGIN));
    let mut alpha0: Vec<usize> = x
        .labeling()
        .iter()
        .map(|&a| snap_to_net(x, &net, a))
        .collect();
    let mut x_indices = Vec::with_capacity(net.len());
    for &p in &net {
        let rep = net
            .iter()
            .copied()
            .find(|&q| f[q] == f[p] && alpha0.contains(&q));
        match rep {
            Some(r) if r != p => {
                for a in alpha0.iter_mut().filter(|a| **a == p) {
                    *a = r;
                }
            }
            _ => x_indices.push(p),
        }
    }
    let y_indices = x_indices.iter().map(|&p| f[p]).collect();
    let beta0 = alpha0.iter().map(|&a| f[a]).collect();
    Ok(ApproximationWitness {
        x_indices,
        y_indices,
        alpha0,
        beta0,
    })
}

/// One term of a net sequence: a space, net points and a relabeling into them.
#[derive(Debug, Clone)]
pub struct NetTerm {
    pub space: LabeledMetricSpace,
    pub net: Vec<usize>,
    pub relabel: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetConvergenceReport {
    pub term_verdicts: Vec<NetVerdict>,
    pub limit_verdict: NetVerdict,
    /// Exact distance from each term's net to the limit's net.
    pub lgh: Vec<f64>,
    pub nonincreasing: bool,
    /// The last distance is below `eps / 3`.
    pub final_small: bool,
    /// First term whose net check fails.
    pub first_failure: Option<usize>,
}

impl NetConvergenceReport {
    pub fn is_ok(&self) -> bool {
        self.limit_verdict.ok && self.first_failure.is_none() && self.final_small
    }
}

pub fn net_convergence_check(
    terms: &[NetTerm],
    limit: &NetTerm,
    eps: f64,
    cap: usize,
) -> Result<NetConvergenceReport> {
    let limit_verdict = check_labeled_net(&limit.space, &limit.net, &limit.relabel, eps)?;
    let limit_net = limit.space.subspace(&limit.net, &limit.relabel)?;
    let mut term_verdicts = Vec::with_capacity(terms.len());
    let mut lgh = Vec::with_capacity(terms.len());
    for t in terms {
        term_verdicts.push(check_labeled_net(&t.space, &t.net, &t.relabel, eps)?);
        let sub = t.space.subspace(&t.net, &t.relabel)?;
        lgh.push(lgh_exact(&sub, &limit_net, cap)?.value);
    }
    let first_failure = term_verdicts.iter().position(|v| !v.ok);
    Ok(NetConvergenceReport {
        nonincreasing: lgh.windows(2).all(|w| w[1] <= w[0]),
        final_small: lgh.last().is_none_or(|&d| d < eps / 3.0),
        term_verdicts,
        limit_verdict,
        lgh,
        first_failure,
    })
}
