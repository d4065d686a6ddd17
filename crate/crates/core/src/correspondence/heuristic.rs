use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{gap, require_compatible, Correspondence};
use crate::error::Result;
use crate::space::LabeledMetricSpace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeuristicOptions {
    /// Randomized restarts after the deterministic greedy start.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for HeuristicOptions {
    fn default() -> Self {
        Self {
            restarts: 4,
            seed: 0,
        }
    }
}

/// A certified upper bound: `value` is exactly half the distortion of
/// `witness`.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperBound {
    pub value: f64,
    pub witness: Correspondence,
}

/// Upper bound on the labeled distance by local search over correspondences
/// of the form `{label pairs} ∪ graph(f) ∪ graph(g)^T`.
pub fn lgh_upper_bound_heuristic(
    x: &LabeledMetricSpace,
    y: &LabeledMetricSpace,
    opts: &HeuristicOptions,
) -> Result<UpperBound> {
    require_compatible(x, y)?;
    let profile = Profile::new(x, y);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<(f64, f64, Vec<(usize, usize)>)> = None;
    for round in 0..=opts.restarts {
        let (fwd, bwd) = if round == 0 {
            profile.greedy()
        } else {
            profile.perturbed(&mut rng)
        };
        let mut state = State::new(x, y, fwd, bwd);
        state.descend();
        let better = match &best {
            None => true,
            Some((d, s, _)) => lex_better((state.dis, state.sumsq), (*d, *s)),
        };
        if better {
            best = Some((state.dis, state.sumsq, state.pairs.clone()));
        }
    }
    let (_, _, pairs) = best.expect("at least one round runs");
    let witness = Correspondence::new(x, y, pairs)?;
    let value = 0.5 * witness.distortion(x, y);
    Ok(UpperBound { value, witness })
}

fn lex_better(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1 - 1e-12 * b.1.max(1.0))
}

/// Dissimilarity of points by distances to labeled points and eccentricity.
struct Profile {
    nx: usize,
    ny: usize,
    cost: Vec<f64>,
}

impl Profile {
    fn new(x: &LabeledMetricSpace, y: &LabeledMetricSpace) -> Self {
        let (nx, ny) = (x.len(), y.len());
        let ecc =
            |s: &LabeledMetricSpace, i: usize| (0..s.len()).map(|k| s.d(i, k)).fold(0.0, f64::max);
        let ex: Vec<f64> = (0..nx).map(|i| ecc(x, i)).collect();
        let ey: Vec<f64> = (0..ny).map(|j| ecc(y, j)).collect();
        let mut cost = vec![0.0; nx * ny];
        for i in 0..nx {
            for j in 0..ny {
                let mut c = (ex[i] - ey[j]).abs();
                for (&a, &b) in x.labeling().iter().zip(y.labeling()) {
                    c = c.max((x.d(i, a) - y.d(j, b)).abs());
                }
                cost[i * ny + j] = c;
            }
        }
        Self { nx, ny, cost }
    }

    fn greedy(&self) -> (Vec<usize>, Vec<usize>) {
        let argmin = |it: &mut dyn Iterator<Item = (usize, f64)>| {
            let mut best = (0, f64::INFINITY);
            for (k, c) in it {
                if c < best.1 {
                    best = (k, c);
                }
            }
            best.0
        };
        let fwd = (0..self.nx)
            .map(|i| argmin(&mut (0..self.ny).map(|j| (j, self.cost[i * self.ny + j]))))
            .collect();
        let bwd = (0..self.ny)
            .map(|j| argmin(&mut (0..self.nx).map(|i| (i, self.cost[i * self.ny + j]))))
            .collect();
        (fwd, bwd)
    }

    fn perturbed(&self, rng: &mut ChaCha8Rng) -> (Vec<usize>, Vec<usize>) {
        let (mut fwd, mut bwd) = self.greedy();
        for f in fwd.iter_mut() {
            if rng.gen_bool(0.5) {
                *f = rng.gen_range(0..self.ny);
            }
        }
        for g in bwd.iter_mut() {
            if rng.gen_bool(0.5) {
                *g = rng.gen_range(0..self.nx);
            }
        }
        (fwd, bwd)
    }
}

const TOP: usize = 3;

/// Slots: label pairs first (fixed), then one per x point, then one per y point.
struct State<'a> {
    x: &'a LabeledMetricSpace,
    y: &'a LabeledMetricSpace,
    fixed: usize,
    pairs: Vec<(usize, usize)>,
    g: Vec<f64>,
    rowsq: Vec<f64>,
    top: Vec<[(f64, usize); TOP]>,
    dis: f64,
    sumsq: f64,
}

impl<'a> State<'a> {
    fn new(
        x: &'a LabeledMetricSpace,
        y: &'a LabeledMetricSpace,
        fwd: Vec<usize>,
        bwd: Vec<usize>,
    ) -> Self {
        let mut pairs: Vec<(usize, usize)> = x
            .labeling()
            .iter()
            .copied()
            .zip(y.labeling().iter().copied())
            .collect();
        let fixed = pairs.len();
        pairs.extend(fwd.into_iter().enumerate());
        pairs.extend(bwd.into_iter().enumerate().map(|(j, i)| (i, j)));
        let n = pairs.len();
        let mut s = Self {
            x,
            y,
            fixed,
            pairs,
            g: vec![0.0; n * n],
            rowsq: vec![0.0; n],
            top: vec![[(f64::NEG_INFINITY, usize::MAX); TOP]; n],
            dis: 0.0,
            sumsq: 0.0,
        };
        for a in 0..n {
            for b in 0..n {
                s.g[a * n + b] = gap(x, y, s.pairs[a], s.pairs[b]);
            }
        }
        s.refresh();
        s
    }

    fn n(&self) -> usize {
        self.pairs.len()
    }

    fn refresh(&mut self) {
        let n = self.n();
        for a in 0..n {
            self.top[a] = self.row_top(a);
            self.rowsq[a] = (0..n)
                .filter(|&b| b != a)
                .map(|b| self.g[a * n + b].powi(2))
                .sum();
        }
        self.dis = self.top.iter().map(|t| t[0].0).fold(0.0, f64::max);
        self.sumsq = 0.5 * self.rowsq.iter().sum::<f64>();
    }

    /// Maximum gap among pairs of slots outside `skip`.
    fn max_excluding(&self, skip: &[usize]) -> f64 {
        let mut m = 0.0f64;
        for (a, top) in self.top.iter().enumerate() {
            if skip.contains(&a) {
                continue;
            }
            if let Some(&(v, _)) = top.iter().find(|(_, c)| !skip.contains(c)) {
                m = m.max(v);
            }
        }
        m
    }

    /// Max and squared sum of gaps of `p` against slots outside `skip`, or
    /// `None` as soon as a gap exceeds `limit`. Label slots come first, and
    /// they reject most bad candidates early.
    fn row_against(&self, p: (usize, usize), skip: &[usize], limit: f64) -> Option<(f64, f64)> {
        let mut m = 0.0f64;
        let mut sq = 0.0;
        for (b, &q) in self.pairs.iter().enumerate() {
            if skip.contains(&b) {
                continue;
            }
            let v = gap(self.x, self.y, p, q);
            if v > limit {
                return None;
            }
            m = m.max(v);
            sq += v * v;
        }
        Some((m, sq))
    }

    fn row_top(&self, a: usize) -> [(f64, usize); TOP] {
        let n = self.n();
        let mut top = [(f64::NEG_INFINITY, usize::MAX); TOP];
        for (b, &v) in self.g[a * n..(a + 1) * n].iter().enumerate() {
            if b != a && v > top[TOP - 1].0 {
                let mut k = TOP - 1;
                while k > 0 && v > top[k - 1].0 {
                    top[k] = top[k - 1];
                    k -= 1;
                }
                top[k] = (v, b);
            }
        }
        top
    }

    /// Moves `slot` to `p`, updating row sums and top lists incrementally.
    fn set(&mut self, slot: usize, p: (usize, usize)) {
        let n = self.n();
        self.pairs[slot] = p;
        let mut row_sq = 0.0;
        for b in 0..n {
            if b == slot {
                continue;
            }
            let v = gap(self.x, self.y, p, self.pairs[b]);
            let old = self.g[b * n + slot];
            self.g[slot * n + b] = v;
            self.g[b * n + slot] = v;
            self.rowsq[b] += v * v - old * old;
            self.sumsq += v * v - old * old;
            row_sq += v * v;
            let top = &self.top[b];
            if top.iter().any(|&(_, c)| c == slot) || v > top[TOP - 1].0 {
                self.top[b] = self.row_top(b);
            }
        }
        self.rowsq[slot] = row_sq;
        self.top[slot] = self.row_top(slot);
        self.dis = self.top.iter().map(|t| t[0].0).fold(0.0, f64::max);
    }

    fn forward_slot(&self, s: usize) -> bool {
        s < self.fixed + self.x.len()
    }

    fn moved(&self, s: usize, target: usize) -> (usize, usize) {
        let (i, j) = self.pairs[s];
        if self.forward_slot(s) {
            (i, target)
        } else {
            (target, j)
        }
    }

    fn try_moves(&mut self) -> bool {
        let mut improved = false;
        let n = self.n();
        for s in self.fixed..n {
            let range = if self.forward_slot(s) {
                self.y.len()
            } else {
                self.x.len()
            };
            let excl = self.max_excluding(&[s]);
            let base = self.sumsq - self.rowsq[s];
            for t in 0..range {
                let p = self.moved(s, t);
                if p == self.pairs[s] {
                    continue;
                }
                let Some((m, sq)) = self.row_against(p, &[s], self.dis) else {
                    continue;
                };
                let cand = (excl.max(m), base + sq);
                if lex_better(cand, (self.dis, self.sumsq)) {
                    self.set(s, p);
                    improved = true;
                }
            }
        }
        improved
    }

    fn try_swaps(&mut self) -> bool {
        let n = self.n();
        let nfx = self.fixed + self.x.len();
        for s in self.fixed..n {
            let side_end = if s < nfx { nfx } else { n };
            for t in s + 1..side_end {
                let (ps, pt) = (self.pairs[s], self.pairs[t]);
                let (qs, qt) = if s < nfx {
                    ((ps.0, pt.1), (pt.0, ps.1))
                } else {
                    ((pt.0, ps.1), (ps.0, pt.1))
                };
                if qs == ps {
                    continue;
                }
                let skip = [s, t];
                let cross = gap(self.x, self.y, qs, qt);
                if cross > self.dis {
                    continue;
                }
                let Some((ms, sqs)) = self.row_against(qs, &skip, self.dis) else {
                    continue;
                };
                let Some((mt, sqt)) = self.row_against(qt, &skip, self.dis) else {
                    continue;
                };
                let excl = self.max_excluding(&skip);
                let old_st = self.g[s * n + t];
                let dis = excl.max(ms).max(mt).max(cross);
                let sumsq = self.sumsq - self.rowsq[s] - self.rowsq[t]
                    + old_st * old_st
                    + sqs
                    + sqt
                    + cross * cross;
                if lex_better((dis, sumsq), (self.dis, self.sumsq)) {
                    self.set(s, qs);
                    self.set(t, qt);
                    return true;
                }
            }
        }
        false
    }

    fn descend(&mut self) {
        loop {
            let moved = self.try_moves();
            if !moved && !self.try_swaps() {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::lgh_exact;

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

    #[test]
    fn identical_spaces_give_zero() {
        let x = path(6, 1.0, &[("A", 0), ("B", 5)]);
        let ub = lgh_upper_bound_heuristic(&x, &x, &HeuristicOptions::default()).unwrap();
        assert_eq!(ub.value, 0.0);
    }

    #[test]
    fn value_is_half_witness_distortion() {
        let x = path(5, 1.0, &[("A", 0)]);
        let y = path(4, 1.5, &[("A", 3)]);
        let ub = lgh_upper_bound_heuristic(&x, &y, &HeuristicOptions::default()).unwrap();
        assert_eq!(ub.value, 0.5 * ub.witness.distortion(&x, &y));
        let exact = lgh_exact(&x, &y, 20).unwrap();
        assert!(ub.value >= exact.value);
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let x = path(7, 1.0, &[("A", 2)]);
        let y = path(5, 1.3, &[("A", 0)]);
        let opts = HeuristicOptions {
            restarts: 6,
            seed: 42,
        };
        let a = lgh_upper_bound_heuristic(&x, &y, &opts).unwrap();
        let b = lgh_upper_bound_heuristic(&x, &y, &opts).unwrap();
        assert_eq!(a, b);
    }
}
