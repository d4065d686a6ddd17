//! Finite labeled metric spaces.
//!
//! A [`LabeledMetricSpace`] is a finite point set with a full distance matrix
//! and a labeling: a total map from a shared [`LabelSet`] into the points.
//! Labelings are stored as index maps and may be neither injective nor
//! surjective. The label set may be empty, in which case every labeled
//! quantity degenerates to its unlabeled counterpart (a supremum over no
//! labels is 0).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use ndarray::Array2;

use crate::error::{Error, Result};

/// Absolute tolerance for metric-axiom and equality checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative margin used to realize strict `< eps` net conditions as
/// `<= eps * (1 - NET_MARGIN)`.
pub const NET_MARGIN: f64 = 1e-6;

/// Default size cap for exhaustive covering-number search.
pub const DEFAULT_COVER_CAP: usize = 16;

/// A finite set of label identifiers, kept in sorted order, with an optional
/// metric on the labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelSet {
    ids: Vec<String>,
    metric: Option<Array2<f64>>,
}

impl LabelSet {
    pub fn empty() -> Self {
        Self {
            ids: Vec::new(),
            metric: None,
        }
    }

    /// Builds a label set from arbitrary ids. Ids are sorted; duplicates and
    /// empty strings are rejected.
    pub fn new<I, S>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        if let Some(bad) = ids.iter().find(|s| s.is_empty()) {
            return Err(Error::InvalidLabels(format!("empty label id {bad:?}")));
        }
        ids.sort();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidLabels(format!(
                "duplicate label id '{}'",
                w[0]
            )));
        }
        Ok(Self { ids, metric: None })
    }

    /// Builds a metrized label set. `metric[i][j]` is the distance between
    /// `ids[i]` and `ids[j]` in the order given; it is permuted into sorted
    /// order and checked for the metric axioms within `tol`.
    pub fn with_metric(ids: Vec<String>, metric: &Array2<f64>, tol: f64) -> Result<Self> {
        let n = ids.len();
        if metric.dim() != (n, n) {
            return Err(Error::InvalidLabels(format!(
                "label metric is {:?}, expected {n}x{n}",
                metric.dim()
            )));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| ids[a].cmp(&ids[b]));
        let base = Self::new(ids.clone())?;
        let sorted = Array2::from_shape_fn((n, n), |(i, j)| metric[[order[i], order[j]]]);
        for ((i, j), &v) in sorted.indexed_iter() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidLabels(format!(
                    "label distance ({}, {}) = {v} is not a nonnegative real",
                    base.ids[i], base.ids[j]
                )));
            }
        }
        let violations = metric_violations(&sorted, tol, true);
        if let Some(v) = violations.first() {
            return Err(Error::InvalidLabels(format!("label metric: {v}")));
        }
        Ok(Self {
            ids: base.ids,
            metric: Some(sorted),
        })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.binary_search_by(|s| s.as_str().cmp(id)).ok()
    }

    pub fn metric(&self) -> Option<&Array2<f64>> {
        self.metric.as_ref()
    }

    /// Two label sets are compatible when they carry the same ids; the
    /// optional metric does not take part.
    pub fn same_ids(&self, other: &LabelSet) -> bool {
        self.ids == other.ids
    }
}

/// A candidate space description, before validation. Label metric rows and
/// columns follow the order of `labels`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawSpace {
    pub points: Vec<String>,
    pub dist: Vec<Vec<f64>>,
    pub labels: Vec<(String, usize)>,
    pub label_metric: Option<Vec<Vec<f64>>>,
}

/// A single metric-axiom violation.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Diagonal {
        i: usize,
        value: f64,
    },
    Asymmetric {
        i: usize,
        j: usize,
    },
    /// `d(a,c) > d(a,b) + d(b,c)` beyond tolerance.
    Triangle {
        a: usize,
        b: usize,
        c: usize,
        excess: f64,
    },
    /// Distinct points at distance zero.
    Coincident {
        i: usize,
        j: usize,
    },
    DuplicatePoint {
        name: String,
    },
    Labels(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Diagonal { i, value } => write!(f, "nonzero diagonal ({i}) = {value}"),
            Violation::Asymmetric { i, j } => write!(f, "asymmetric ({i},{j})"),
            Violation::Triangle { a, b, c, excess } => {
                write!(f, "triangle ({a},{b},{c}) exceeded by {excess}")
            }
            Violation::Coincident { i, j } => write!(f, "coincident points ({i},{j})"),
            Violation::DuplicatePoint { name } => write!(f, "duplicate point name '{name}'"),
            Violation::Labels(msg) => write!(f, "labels: {msg}"),
        }
    }
}

/// Outcome of [`validate_space`]: ok iff there are no violations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Diagonal, symmetry, triangle and (unless `allow_zero`) definiteness checks
/// on a square matrix. Each triangle violation is reported once, as
/// `(a, b, c)` with `a < c` and `b` the intermediate point.
pub(crate) fn metric_violations(dist: &Array2<f64>, tol: f64, allow_zero: bool) -> Vec<Violation> {
    let n = dist.nrows();
    let mut out = Vec::new();
    for i in 0..n {
        let v = dist[[i, i]];
        if v.abs() > tol {
            out.push(Violation::Diagonal { i, value: v });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if (dist[[i, j]] - dist[[j, i]]).abs() > tol {
                out.push(Violation::Asymmetric { i, j });
            }
            if !allow_zero && dist[[i, j]].max(dist[[j, i]]) <= tol {
                out.push(Violation::Coincident { i, j });
            }
        }
    }
    for a in 0..n {
        for c in a + 1..n {
            let direct = dist[[a, c]];
            for b in 0..n {
                if b == a || b == c {
                    continue;
                }
                let excess = direct - (dist[[a, b]] + dist[[b, c]]);
                if excess > tol {
                    out.push(Violation::Triangle { a, b, c, excess });
                }
            }
        }
    }
    out
}

fn check_shape(dist: &[Vec<f64>]) -> Result<Array2<f64>> {
    let n = dist.len();
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    for (row, r) in dist.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare {
                rows: n,
                row,
                len: r.len(),
            });
        }
        for (j, &v) in r.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { i: row, j });
            }
            if v < 0.0 {
                return Err(Error::NegativeEntry {
                    i: row,
                    j,
                    value: v,
                });
            }
        }
    }
    Ok(Array2::from_shape_fn((n, n), |(i, j)| dist[i][j]))
}

fn label_violations(raw: &RawSpace, n: usize, tol: f64) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    for (label, index) in &raw.labels {
        if *index >= n {
            return Err(Error::LabelOutOfRange {
                label: label.clone(),
                index: *index,
                n,
            });
        }
    }
    let ids: Vec<String> = raw.labels.iter().map(|(l, _)| l.clone()).collect();
    if let Err(e) = LabelSet::new(ids.clone()) {
        out.push(Violation::Labels(e.to_string()));
        return Ok(out);
    }
    if let Some(m) = &raw.label_metric {
        let k = ids.len();
        if m.len() != k || m.iter().any(|r| r.len() != k) {
            out.push(Violation::Labels(format!("label metric must be {k}x{k}")));
        } else {
            let arr = Array2::from_shape_fn((k, k), |(i, j)| m[i][j]);
            if let Err(e) = LabelSet::with_metric(ids, &arr, tol) {
                out.push(Violation::Labels(e.to_string()));
            }
        }
    }
    Ok(out)
}

/// Validates a candidate space against the metric and labeling invariants.
///
/// Structural problems (non-square matrix, negative or non-finite entry,
/// label index out of range) are errors; axiom failures are collected as
/// violations in the report.
pub fn validate_space(raw: &RawSpace, tol: f64) -> Result<ValidationReport> {
    validate_with(raw, tol, false)
}

fn validate_with(raw: &RawSpace, tol: f64, allow_zero: bool) -> Result<ValidationReport> {
    let dist = check_shape(&raw.dist)?;
    let n = dist.nrows();
    let mut violations = Vec::new();
    if raw.points.len() != n {
        violations.push(Violation::Labels(format!(
            "{} point names for {n} matrix rows",
            raw.points.len()
        )));
    }
    let mut seen = BTreeSet::new();
    for p in &raw.points {
        if !seen.insert(p.as_str()) {
            violations.push(Violation::DuplicatePoint { name: p.clone() });
        }
    }
    violations.extend(metric_violations(&dist, tol, allow_zero));
    violations.extend(label_violations(raw, n, tol)?);
    Ok(ValidationReport { violations })
}

fn build_parts(raw: &RawSpace, tol: f64, allow_zero: bool) -> Result<Parts> {
    let report = validate_with(raw, tol, allow_zero)?;
    if !report.is_ok() {
        return Err(Error::Invalid(report));
    }
    let dist = check_shape(&raw.dist)?;
    let ids: Vec<String> = raw.labels.iter().map(|(l, _)| l.clone()).collect();
    let labels = match &raw.label_metric {
        Some(m) => {
            let k = ids.len();
            let arr = Array2::from_shape_fn((k, k), |(i, j)| m[i][j]);
            LabelSet::with_metric(ids, &arr, tol)?
        }
        None => LabelSet::new(ids)?,
    };
    let labeling = labeling_for(&labels, &raw.labels);
    Ok(Parts {
        points: raw.points.clone(),
        dist,
        labels: Arc::new(labels),
        labeling,
    })
}

fn labeling_for(labels: &LabelSet, pairs: &[(String, usize)]) -> Vec<usize> {
    let mut labeling = vec![0; labels.len()];
    for (id, index) in pairs {
        let k = labels.index_of(id).expect("label ids validated");
        labeling[k] = *index;
    }
    labeling
}

struct Parts {
    points: Vec<String>,
    dist: Array2<f64>,
    labels: Arc<LabelSet>,
    labeling: Vec<usize>,
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// A finite metric space together with a labeling `L -> X`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMetricSpace {
    points: Vec<String>,
    dist: Array2<f64>,
    labels: Arc<LabelSet>,
    labeling: Vec<usize>,
}

impl LabeledMetricSpace {
    /// Validates `raw` and builds the space; any violation is an error.
    pub fn from_raw(raw: &RawSpace, tol: f64) -> Result<Self> {
        let p = build_parts(raw, tol, false)?;
        Ok(Self {
            points: p.points,
            dist: p.dist,
            labels: p.labels,
            labeling: p.labeling,
        })
    }

    /// Builds a space with points named `p0, p1, ...` from a distance matrix
    /// and `(label, point)` pairs, validated at [`DEFAULT_TOL`].
    pub fn from_matrix(dist: Vec<Vec<f64>>, labels: &[(&str, usize)]) -> Result<Self> {
        let raw = RawSpace {
            points: default_names(dist.len()),
            dist,
            labels: labels.iter().map(|(l, i)| (l.to_string(), *i)).collect(),
            label_metric: None,
        };
        Self::from_raw(&raw, DEFAULT_TOL)
    }

    /// Builds a space over an existing (shared) label set. `labeling[k]` is
    /// the point carrying label `labels.ids()[k]`.
    pub fn with_label_set(
        points: Vec<String>,
        dist: Array2<f64>,
        labels: Arc<LabelSet>,
        labeling: Vec<usize>,
        tol: f64,
    ) -> Result<Self> {
        let n = dist.nrows();
        let rows: Vec<Vec<f64>> = dist.outer_iter().map(|r| r.to_vec()).collect();
        let raw = RawSpace {
            points,
            dist: rows,
            labels: Vec::new(),
            label_metric: None,
        };
        let report = validate_with(&raw, tol, false)?;
        if !report.is_ok() {
            return Err(Error::Invalid(report));
        }
        check_labeling(&labels, &labeling, n)?;
        Ok(Self {
            points: raw.points,
            dist,
            labels,
            labeling,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[[i, j]]
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.dist
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    pub fn label_set(&self) -> &Arc<LabelSet> {
        &self.labels
    }

    /// `labeling()[k]` is the point carrying the `k`-th label.
    pub fn labeling(&self) -> &[usize] {
        &self.labeling
    }

    pub fn label_point(&self, label: usize) -> usize {
        self.labeling[label]
    }

    /// True when both spaces are labeled by the same ids.
    pub fn compatible(&self, other: &Self) -> bool {
        self.labels.same_ids(&other.labels)
    }

    /// Same points and distances, different labeling over `labels`.
    pub fn relabeled(&self, labels: Arc<LabelSet>, labeling: Vec<usize>) -> Result<Self> {
        check_labeling(&labels, &labeling, self.len())?;
        Ok(Self {
            points: self.points.clone(),
            dist: self.dist.clone(),
            labels,
            labeling,
        })
    }

    /// Same space with new, distinct, nonempty point names.
    pub fn renamed(&self, points: Vec<String>) -> Result<Self> {
        if points.len() != self.len() {
            return Err(Error::Parameter(format!(
                "{} names for {} points",
                points.len(),
                self.len()
            )));
        }
        let mut seen: Vec<&String> = points.iter().collect();
        seen.sort();
        if seen.windows(2).any(|w| w[0] == w[1]) || points.iter().any(String::is_empty) {
            return Err(Error::Parameter(
                "point names must be distinct and nonempty".into(),
            ));
        }
        Ok(Self {
            points,
            ..self.clone()
        })
    }

    /// The same space with every distance multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Parameter(format!(
                "scale factor {c} must be positive"
            )));
        }
        Ok(Self {
            points: self.points.clone(),
            dist: self.dist.mapv(|v| v * c),
            labels: self.labels.clone(),
            labeling: self.labeling.clone(),
        })
    }

    /// Reorders points: new point `k` is old point `order[k]`. Labels follow
    /// their points, so the result is L-isometric to `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let n = self.len();
        let mut inverse = vec![usize::MAX; n];
        for (k, &o) in order.iter().enumerate() {
            if o >= n || inverse[o] != usize::MAX {
                return Err(Error::Parameter("order is not a permutation".into()));
            }
            inverse[o] = k;
        }
        if order.len() != n {
            return Err(Error::Parameter("order is not a permutation".into()));
        }
        Ok(Self {
            points: order.iter().map(|&o| self.points[o].clone()).collect(),
            dist: Array2::from_shape_fn((n, n), |(i, j)| self.dist[[order[i], order[j]]]),
            labels: self.labels.clone(),
            labeling: self.labeling.iter().map(|&p| inverse[p]).collect(),
        })
    }

    /// The subspace on `subset` (indices into `self`, distinct), labeled by
    /// `labeling` which must point into `subset` (as indices of `self`).
    pub fn subspace(&self, subset: &[usize], labeling: &[usize]) -> Result<Self> {
        let mut position = vec![usize::MAX; self.len()];
        for (k, &p) in subset.iter().enumerate() {
            if p >= self.len() {
                return Err(Error::Index(format!("subset point {p} out of range")));
            }
            if position[p] != usize::MAX {
                return Err(Error::Parameter(format!("subset repeats point {p}")));
            }
            position[p] = k;
        }
        if subset.is_empty() {
            return Err(Error::EmptySpace);
        }
        if labeling.len() != self.labels.len() {
            return Err(Error::Parameter(
                "labeling length differs from label count".into(),
            ));
        }
        let mut sub_labeling = Vec::with_capacity(labeling.len());
        for &p in labeling {
            match position.get(p) {
                Some(&k) if k != usize::MAX => sub_labeling.push(k),
                _ => {
                    return Err(Error::Parameter(format!(
                        "label target {p} is not in the subset"
                    )))
                }
            }
        }
        let m = subset.len();
        Ok(Self {
            points: subset.iter().map(|&p| self.points[p].clone()).collect(),
            dist: Array2::from_shape_fn((m, m), |(i, j)| self.dist[[subset[i], subset[j]]]),
            labels: self.labels.clone(),
            labeling: sub_labeling,
        })
    }

    pub fn to_raw(&self) -> RawSpace {
        raw_parts(&self.points, &self.dist, &self.labels, &self.labeling)
    }
}

fn raw_parts(
    points: &[String],
    dist: &Array2<f64>,
    labels: &LabelSet,
    labeling: &[usize],
) -> RawSpace {
    RawSpace {
        points: points.to_vec(),
        dist: dist.outer_iter().map(|r| r.to_vec()).collect(),
        labels: labels
            .ids()
            .iter()
            .cloned()
            .zip(labeling.iter().copied())
            .collect(),
        label_metric: labels
            .metric()
            .map(|m| m.outer_iter().map(|r| r.to_vec()).collect()),
    }
}

fn check_labeling(labels: &LabelSet, labeling: &[usize], n: usize) -> Result<()> {
    if labeling.len() != labels.len() {
        return Err(Error::Parameter(format!(
            "labeling has {} entries for {} labels",
            labeling.len(),
            labels.len()
        )));
    }
    for (k, &p) in labeling.iter().enumerate() {
        if p >= n {
            return Err(Error::LabelOutOfRange {
                label: labels.ids()[k].clone(),
                index: p,
                n,
            });
        }
    }
    Ok(())
}

/// Like [`LabeledMetricSpace`], but distinct points may be at distance zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoSpace {
    points: Vec<String>,
    dist: Array2<f64>,
    labels: Arc<LabelSet>,
    labeling: Vec<usize>,
}

impl PseudoSpace {
    pub fn from_raw(raw: &RawSpace, tol: f64) -> Result<Self> {
        let p = build_parts(raw, tol, true)?;
        Ok(Self {
            points: p.points,
            dist: p.dist,
            labels: p.labels,
            labeling: p.labeling,
        })
    }

    pub fn with_label_set(
        points: Vec<String>,
        dist: Array2<f64>,
        labels: Arc<LabelSet>,
        labeling: Vec<usize>,
        tol: f64,
    ) -> Result<Self> {
        let n = dist.nrows();
        let rows: Vec<Vec<f64>> = dist.outer_iter().map(|r| r.to_vec()).collect();
        let raw = RawSpace {
            points,
            dist: rows,
            labels: Vec::new(),
            label_metric: None,
        };
        let report = validate_with(&raw, tol, true)?;
        if !report.is_ok() {
            return Err(Error::Invalid(report));
        }
        check_labeling(&labels, &labeling, n)?;
        Ok(Self {
            points: raw.points,
            dist,
            labels,
            labeling,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[[i, j]]
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.dist
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn label_set(&self) -> &Arc<LabelSet> {
        &self.labels
    }

    pub fn labeling(&self) -> &[usize] {
        &self.labeling
    }

    pub fn to_raw(&self) -> RawSpace {
        raw_parts(&self.points, &self.dist, &self.labels, &self.labeling)
    }

    /// Merges points at mutual distance `<= tol` (transitively) into one
    /// class represented by its lowest index. Fails if two merged points see
    /// some third point at distances differing by more than `tol`.
    pub fn quotient(&self, tol: f64) -> Result<LabeledMetricSpace> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for i in 0..n {
            for j in i + 1..n {
                if self.dist[[i, j]] <= tol {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        for a in 0..n {
            for b in a + 1..n {
                if roots[a] != roots[b] {
                    continue;
                }
                for c in 0..n {
                    let gap = (self.dist[[a, c]] - self.dist[[b, c]]).abs();
                    if gap > tol {
                        return Err(Error::MergeInconsistency { a, b, c, gap });
                    }
                }
            }
        }
        let reps: Vec<usize> = (0..n).filter(|&i| roots[i] == i).collect();
        let mut class_of = vec![0; n];
        for i in 0..n {
            class_of[i] = reps
                .binary_search(&roots[i])
                .expect("root is a representative");
        }
        let m = reps.len();
        Ok(LabeledMetricSpace {
            points: reps.iter().map(|&r| self.points[r].clone()).collect(),
            dist: Array2::from_shape_fn((m, m), |(i, j)| self.dist[[reps[i], reps[j]]]),
            labels: self.labels.clone(),
            labeling: self.labeling.iter().map(|&p| class_of[p]).collect(),
        })
    }
}

impl From<LabeledMetricSpace> for PseudoSpace {
    fn from(s: LabeledMetricSpace) -> Self {
        Self {
            points: s.points,
            dist: s.dist,
            labels: s.labels,
            labeling: s.labeling,
        }
    }
}

/// Largest pairwise distance.
pub fn diameter(space: &LabeledMetricSpace) -> f64 {
    space.matrix().iter().copied().fold(0.0, f64::max)
}

/// Largest distance from a point of the space to its nearest point of
/// `subset`. `subset` must be nonempty.
pub fn covering_radius(space: &LabeledMetricSpace, subset: &[usize]) -> f64 {
    (0..space.len())
        .map(|i| {
            subset
                .iter()
                .map(|&s| space.d(i, s))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// Farthest-point insertion from `start`, adding the farthest point (lowest
/// index on ties) until every point is within `radius` of the chosen set.
/// Returns the chosen points in insertion order.
pub fn greedy_net(space: &LabeledMetricSpace, start: usize, radius: f64) -> Vec<usize> {
    let n = space.len();
    let mut chosen = vec![start];
    let mut nearest: Vec<f64> = (0..n).map(|i| space.d(i, start)).collect();
    loop {
        let (far, far_d) =
            nearest
                .iter()
                .copied()
                .enumerate()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
                );
        if far_d <= radius {
            return chosen;
        }
        chosen.push(far);
        for (i, v) in nearest.iter_mut().enumerate() {
            *v = v.min(space.d(i, far));
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    /// Farthest-point insertion from `start`.
    Greedy { start: usize },
    /// Exhaustive search for a minimum cover; refused above `cap` points.
    Exact { cap: usize },
}

impl Default for CoverMode {
    fn default() -> Self {
        CoverMode::Greedy { start: 0 }
    }
}

/// A covering of a space by closed `eps`-balls.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    pub size: usize,
    pub witness: Vec<usize>,
}

/// Number of closed `eps`-balls needed to cover the space, with a witness.
///
/// Exact mode returns the lexicographically first minimum cover; greedy mode
/// returns the farthest-point insertion order.
pub fn covering_number(space: &LabeledMetricSpace, eps: f64, mode: CoverMode) -> Result<Cover> {
    if !(eps > 0.0) {
        return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
    }
    let n = space.len();
    match mode {
        CoverMode::Greedy { start } => {
            if start >= n {
                return Err(Error::Index(format!("start point {start} out of range")));
            }
            let witness = greedy_net(space, start, eps);
            Ok(Cover {
                size: witness.len(),
                witness,
            })
        }
        CoverMode::Exact { cap } => {
            if n > cap {
                return Err(Error::CapExceeded {
                    what: "exact covering number",
                    size: n,
                    cap,
                    advice: "; use greedy mode",
                });
            }
            for k in 1..=n {
                let mut combo: Vec<usize> = (0..k).collect();
                loop {
                    if covering_radius(space, &combo) <= eps {
                        return Ok(Cover {
                            size: k,
                            witness: combo,
                        });
                    }
                    if !next_combination(&mut combo, n) {
                        break;
                    }
                }
            }
            unreachable!("the full point set covers the space")
        }
    }
}

/// Advances `combo` to the next k-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Nearest point of `net` to `p` (lowest position in `net` on ties), or `p`
/// itself when it belongs to the net.
pub fn snap_to_net(space: &LabeledMetricSpace, net: &[usize], p: usize) -> usize {
    if net.contains(&p) {
        return p;
    }
    let mut best = net[0];
    for &s in &net[1..] {
        if space.d(p, s) < space.d(p, best) || (space.d(p, s) == space.d(p, best) && s < best) {
            best = s;
        }
    }
    best
}

/// A labeled net: a subset of points and a relabeling into it.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledNet {
    /// Net points, in insertion order.
    pub points: Vec<usize>,
    /// `relabel[k]` is the net point carrying label `k`.
    pub relabel: Vec<usize>,
    pub covering_radius: f64,
    pub displacement: f64,
}

impl LabeledNet {
    pub fn to_space(&self, space: &LabeledMetricSpace) -> Result<LabeledMetricSpace> {
        space.subspace(&self.points, &self.relabel)
    }
}

/// Largest distance between a label's point and its relabeled point.
pub fn label_displacement(space: &LabeledMetricSpace, relabel: &[usize]) -> f64 {
    space
        .labeling()
        .iter()
        .zip(relabel)
        .map(|(&a, &b)| space.d(a, b))
        .fold(0.0, f64::max)
}

/// Greedy labeled `eps`-net with strict covering radius and label
/// displacement below `eps`.
pub fn greedy_labeled_net(space: &LabeledMetricSpace, eps: f64) -> Result<LabeledNet> {
    if !(eps > 0.0) {
        return Err(Error::Parameter(format!("eps must be positive, got {eps}")));
    }
    let target = eps * (1.0 - NET_MARGIN);
    let points = greedy_net(space, 0, target);
    let relabel: Vec<usize> = space
        .labeling()
        .iter()
        .map(|&p| snap_to_net(space, &points, p))
        .collect();
    Ok(LabeledNet {
        covering_radius: covering_radius(space, &points),
        displacement: label_displacement(space, &relabel),
        points,
        relabel,
    })
}

/// Verdict of [`check_labeled_net`].
#[derive(Debug, Clone, PartialEq)]
pub struct NetVerdict {
    pub covering_radius: f64,
    pub displacement: f64,
    /// Every relabeled point lies in the net.
    pub relabel_in_net: bool,
    pub ok: bool,
}

/// Checks that `(net, relabel)` is a labeled `eps`-net: covering radius and
/// label displacement both strictly below `eps`.
pub fn check_labeled_net(
    space: &LabeledMetricSpace,
    net: &[usize],
    relabel: &[usize],
    eps: f64,
) -> Result<NetVerdict> {
    if net.is_empty() {
        return Err(Error::Parameter("empty net".into()));
    }
    if relabel.len() != space.labeling().len() {
        return Err(Error::Parameter(
            "relabeling length differs from label count".into(),
        ));
    }
    if let Some(&p) = net.iter().chain(relabel).find(|&&p| p >= space.len()) {
        return Err(Error::Index(format!("point {p} out of range")));
    }
    let covering_radius = covering_radius(space, net);
    let displacement = label_displacement(space, relabel);
    let relabel_in_net = relabel.iter().all(|p| net.contains(p));
    Ok(NetVerdict {
        ok: relabel_in_net && covering_radius < eps && displacement < eps,
        covering_radius,
        displacement,
        relabel_in_net,
    })
}
