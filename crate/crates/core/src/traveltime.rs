//! Travel time data: each point seen through its distances to the labeled
//! (boundary) points, under the sup-norm.

use std::sync::Arc;

use crate::correspondence::lgh_exact;
use crate::error::{Error, Result};
use crate::space::{LabelSet, LabeledMetricSpace, RawSpace};

/// `rows[x][l] = d(x, alpha(l))`, columns in label-id order.
#[derive(Debug, Clone, PartialEq)]
pub struct TravelTimeData {
    pub boundary_ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl TravelTimeData {
    pub fn sup_distance(&self, a: usize, b: usize) -> f64 {
        sup_norm(&self.rows[a], &self.rows[b])
    }

    fn validate(&self) -> Result<()> {
        if self.boundary_ids.is_empty() {
            return Err(Error::MalformedData("no boundary columns".into()));
        }
        if self.rows.is_empty() {
            return Err(Error::MalformedData("no rows".into()));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.boundary_ids.len() {
                return Err(Error::MalformedData(format!(
                    "row {i} has {} entries for {} columns",
                    row.len(),
                    self.boundary_ids.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(Error::MalformedData(format!("row {i} has entry {v}")));
            }
        }
        Ok(())
    }
}

fn sup_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max)
}

pub fn travel_time_data(x: &LabeledMetricSpace) -> Result<TravelTimeData> {
    if x.label_set().is_empty() {
        return Err(Error::Parameter(
            "travel time data needs at least one label".into(),
        ));
    }
    let rows = (0..x.len())
        .map(|i| x.labeling().iter().map(|&a| x.d(i, a)).collect())
        .collect();
    Ok(TravelTimeData {
        boundary_ids: x.label_set().ids().to_vec(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingReport {
    /// Largest `d(x, y) - |r_x - r_y|_inf`; never negative.
    pub worst: f64,
    pub witness: Option<(usize, usize)>,
    /// `worst <= tol`: rows determine all distances.
    pub resolved: bool,
}

pub fn embedding_distortion(x: &LabeledMetricSpace, tol: f64) -> Result<EmbeddingReport> {
    let data = travel_time_data(x)?;
    let mut worst = 0.0f64;
    let mut witness = None;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let gap = x.d(i, j) - data.sup_distance(i, j);
            if gap > worst {
                worst = gap;
                witness = Some((i, j));
            }
        }
    }
    Ok(EmbeddingReport {
        worst,
        witness,
        resolved: worst <= tol,
    })
}

/// Rebuilds a labeled space from rows: rows within `tol` in sup-norm become
/// one point (named `r{k}`, first row of each class), distances are
/// sup-norms, and label `l` sits on the row vanishing in column `l`.
pub fn reconstruct_from_data(t: &TravelTimeData, tol: f64) -> Result<LabeledMetricSpace> {
    t.validate()?;
    let mut reps: Vec<usize> = Vec::new();
    let mut class_of = Vec::with_capacity(t.rows.len());
    for i in 0..t.rows.len() {
        match reps.iter().position(|&r| t.sup_distance(r, i) <= tol) {
            Some(k) => class_of.push(k),
            None => {
                class_of.push(reps.len());
                reps.push(i);
            }
        }
    }
    let mut labels = Vec::with_capacity(t.boundary_ids.len());
    for (l, id) in t.boundary_ids.iter().enumerate() {
        let mut classes: Vec<usize> = (0..t.rows.len())
            .filter(|&i| t.rows[i][l] <= tol)
            .map(|i| class_of[i])
            .collect();
        classes.sort_unstable();
        classes.dedup();
        match classes.as_slice() {
            [] => {
                return Err(Error::MalformedData(format!(
                    "no row vanishes in column '{id}'"
                )))
            }
            [k] => labels.push((id.clone(), *k)),
            _ => {
                return Err(Error::MalformedData(format!(
                    "several distinct rows vanish in column '{id}'"
                )))
            }
        }
    }
    let raw = RawSpace {
        points: (0..reps.len()).map(|k| format!("r{k}")).collect(),
        dist: reps
            .iter()
            .map(|&a| reps.iter().map(|&b| t.sup_distance(a, b)).collect())
            .collect(),
        labels,
        label_metric: None,
    };
    LabeledMetricSpace::from_raw(&raw, tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRow {
    pub i: usize,
    pub j: usize,
    /// Unlabeled distance between the reconstructed spaces.
    pub d_data: f64,
    /// Labeled distance between the originals.
    pub d_space: f64,
    /// `d_space - d_data`.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub rows: Vec<StabilityRow>,
    /// Members that are not boundary-resolved, left out of the table.
    pub excluded: Vec<usize>,
    /// `d_data <= d_space + tol` on every row.
    pub holds: bool,
}

pub fn stability_experiment(
    family: &[LabeledMetricSpace],
    cap: usize,
    tol: f64,
) -> Result<StabilityReport> {
    let empty = Arc::new(LabelSet::empty());
    let mut kept = Vec::new();
    let mut excluded = Vec::new();
    for (k, x) in family.iter().enumerate() {
        if embedding_distortion(x, tol)?.resolved {
            let rebuilt = reconstruct_from_data(&travel_time_data(x)?, tol)?;
            kept.push((k, rebuilt.relabeled(empty.clone(), Vec::new())?));
        } else {
            excluded.push(k);
        }
    }
    let mut rows = Vec::new();
    for (a, (i, ri)) in kept.iter().enumerate() {
        for (j, rj) in &kept[a + 1..] {
            let d_data = lgh_exact(ri, rj, cap)?.value;
            let d_space = lgh_exact(&family[*i], &family[*j], cap)?.value;
            rows.push(StabilityRow {
                i: *i,
                j: *j,
                d_data,
                d_space,
                slack: d_space - d_data,
            });
        }
    }
    let holds = rows.iter().all(|r| r.d_data <= r.d_space + tol);
    Ok(StabilityReport {
        rows,
        excluded,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::DEFAULT_TOL;

    fn path(n: usize, scale: f64, labels: &[(&str, usize)]) -> LabeledMetricSpace {
        let dist = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| scale * (i as f64 - j as f64).abs())
                    .collect()
            })
            .collect();
        LabeledMetricSpace::from_matrix(dist, labels).unwrap()
    }

    fn cycle4() -> LabeledMetricSpace {
        let d = |i: usize, j: usize| {
            let k = (i as i64 - j as i64).rem_euclid(4) as usize;
            k.min(4 - k) as f64
        };
        LabeledMetricSpace::from_matrix(
            (0..4).map(|i| (0..4).map(|j| d(i, j)).collect()).collect(),
            &[("A", 0)],
        )
        .unwrap()
    }

    fn ends() -> [(&'static str, usize); 2] {
        [("A", 0), ("B", 4)]
    }

    #[test]
    fn rows_of_path_and_cycle() {
        let t = travel_time_data(&path(5, 1.0, &ends())).unwrap();
        assert_eq!(t.boundary_ids, vec!["A", "B"]);
        let expect: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64, 4.0 - i as f64]).collect();
        assert_eq!(t.rows, expect);
        let t = travel_time_data(&cycle4()).unwrap();
        assert_eq!(t.rows, vec![vec![0.0], vec![1.0], vec![2.0], vec![1.0]]);
        let one = LabeledMetricSpace::from_matrix(vec![vec![0.0]], &[("A", 0)]).unwrap();
        assert_eq!(travel_time_data(&one).unwrap().rows, vec![vec![0.0]]);
        assert!(travel_time_data(&path(3, 1.0, &[])).is_err());
    }

    #[test]
    fn distortion_of_path_and_cycle() {
        let r = embedding_distortion(&path(5, 1.0, &ends()), DEFAULT_TOL).unwrap();
        assert!(r.resolved && r.worst == 0.0);
        let r = embedding_distortion(&cycle4(), DEFAULT_TOL).unwrap();
        assert_eq!((r.worst, r.witness, r.resolved), (2.0, Some((1, 3)), false));
    }

    #[test]
    fn reconstruction_of_resolved_path_is_isometric() {
        let x = path(5, 1.0, &ends());
        let r = reconstruct_from_data(&travel_time_data(&x).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!(lgh_exact(&x, &r, 25).unwrap().value, 0.0);
        assert_eq!(r.points()[0], "r0");
    }

    #[test]
    fn reconstruction_of_cycle_loses_a_point() {
        let x = cycle4();
        let r = reconstruct_from_data(&travel_time_data(&x).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!(r.len(), 3);
        assert!(lgh_exact(&x, &r, 12).unwrap().value > 0.0);
    }

    #[test]
    fn missing_zero_row_is_malformed() {
        let t = TravelTimeData {
            boundary_ids: vec!["A".into()],
            rows: vec![vec![1.0], vec![2.0]],
        };
        assert!(matches!(
            reconstruct_from_data(&t, DEFAULT_TOL),
            Err(Error::MalformedData(_))
        ));
    }

    #[test]
    fn stability_on_scaled_paths() {
        let family: Vec<_> = [1.0, 1.1, 1.2]
            .iter()
            .map(|&c| path(5, c, &ends()))
            .collect();
        let rep = stability_experiment(&family, 25, DEFAULT_TOL).unwrap();
        assert!(rep.holds && rep.excluded.is_empty());
        let last = rep.rows.iter().find(|r| (r.i, r.j) == (0, 2)).unwrap();
        assert!((last.d_data - 0.4).abs() < 1e-12);
        assert!((last.d_space - 0.4).abs() < 1e-12);
    }

    #[test]
    fn stability_excludes_unresolved_members() {
        let family = vec![cycle4(), cycle4(), cycle4()];
        let rep = stability_experiment(&family, 25, DEFAULT_TOL).unwrap();
        assert_eq!(rep.excluded, vec![0, 1, 2]);
        assert!(rep.rows.is_empty());
        let family = vec![path(5, 1.0, &ends()), path(5, 1.0, &ends())];
        let rep = stability_experiment(&family, 25, DEFAULT_TOL).unwrap();
        assert_eq!((rep.rows[0].d_data, rep.rows[0].d_space), (0.0, 0.0));
    }
}
