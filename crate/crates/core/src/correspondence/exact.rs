use super::{gap, require_compatible, Correspondence, HeuristicOptions};
use crate::error::{Error, Result};
use crate::space::LabeledMetricSpace;

/// Default limit on `|X| * |Y|` for the exact search.
pub const DEFAULT_EXACT_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct ExactLgh {
    pub value: f64,
    /// Minimizing correspondence. Among all minimizers this is the one whose
    /// pair bitmask (bit `i * |Y| + j`) is numerically smallest.
    pub argmin: Correspondence,
}

/// Exact labeled distance by branch and bound over pair subsets.
///
/// Bits are decided from the highest index down, exclusion first, so leaves
/// are visited in increasing mask order and the first minimizer found is the
/// smallest one. Label pairs are always included.
pub fn lgh_exact(x: &LabeledMetricSpace, y: &LabeledMetricSpace, cap: usize) -> Result<ExactLgh> {
    require_compatible(x, y)?;
    let size = x.len() * y.len();
    if size > cap {
        return Err(Error::CapExceeded {
            what: "exact search",
            size,
            cap,
            advice: "; use bounds or the heuristic instead",
        });
    }
    let start = super::lgh_upper_bound_heuristic(x, y, &HeuristicOptions::default())?;
    let mut search = Search::new(x, y, 2.0 * start.value);
    let mask = search.run();
    let pairs = (0..size)
        .filter(|&b| mask[b])
        .map(|b| (b / y.len(), b % y.len()));
    let argmin = Correspondence::new(x, y, pairs)?;
    let value = 0.5 * argmin.distortion(x, y);
    Ok(ExactLgh { value, argmin })
}

struct Search<'a> {
    x: &'a LabeledMetricSpace,
    y: &'a LabeledMetricSpace,
    ny: usize,
    included: Vec<bool>,
    /// Largest gap of each pair against the included pairs.
    maxc: Vec<f64>,
    row_cover: Vec<u32>,
    col_cover: Vec<u32>,
    cur: f64,
    bound: f64,
    best: Option<(f64, Vec<bool>)>,
}

impl<'a> Search<'a> {
    fn new(x: &'a LabeledMetricSpace, y: &'a LabeledMetricSpace, bound: f64) -> Self {
        let (nx, ny) = (x.len(), y.len());
        Self {
            x,
            y,
            ny,
            included: vec![false; nx * ny],
            maxc: vec![0.0; nx * ny],
            row_cover: vec![0; nx],
            col_cover: vec![0; ny],
            cur: 0.0,
            bound,
            best: None,
        }
    }

    fn pair(&self, b: usize) -> (usize, usize) {
        (b / self.ny, b % self.ny)
    }

    fn acceptable(&self, v: f64) -> bool {
        match &self.best {
            None => v <= self.bound,
            Some((b, _)) => v < *b,
        }
    }

    /// Includes bit `b`, returning the previous `maxc` for undo.
    fn include(&mut self, b: usize) -> Vec<f64> {
        let saved = self.maxc.clone();
        let p = self.pair(b);
        for q in 0..self.maxc.len() {
            let g = gap(self.x, self.y, p, self.pair(q));
            if g > self.maxc[q] {
                self.maxc[q] = g;
            }
        }
        self.cur = self.cur.max(saved[b]);
        self.included[b] = true;
        self.row_cover[p.0] += 1;
        self.col_cover[p.1] += 1;
        saved
    }

    fn undo(&mut self, b: usize, saved: Vec<f64>, cur: f64) {
        let p = self.pair(b);
        self.maxc = saved;
        self.cur = cur;
        self.included[b] = false;
        self.row_cover[p.0] -= 1;
        self.col_cover[p.1] -= 1;
    }

    /// Every uncovered row and column still needs an acceptable candidate
    /// among the undecided bits below `limit`.
    fn lookahead(&self, limit: usize, forced: &[bool]) -> bool {
        let ny = self.ny;
        let mut col_ok: Vec<bool> = self.col_cover.iter().map(|&c| c > 0).collect();
        for (r, &cov) in self.row_cover.iter().enumerate() {
            let lo = r * ny;
            let mut row_ok = cov > 0;
            for b in lo..(lo + ny).min(limit) {
                if forced[b] || self.included[b] || !self.acceptable(self.maxc[b]) {
                    continue;
                }
                row_ok = true;
                col_ok[b - lo] = true;
            }
            if !row_ok {
                return false;
            }
        }
        col_ok.into_iter().all(|c| c)
    }

    fn run(&mut self) -> Vec<bool> {
        let (x, y) = (self.x, self.y);
        let total = self.included.len();
        let mut forced = vec![false; total];
        for (&a, &b) in x.labeling().iter().zip(y.labeling()) {
            let bit = a * self.ny + b;
            if !forced[bit] {
                forced[bit] = true;
                self.include(bit);
            }
        }
        let seq: Vec<usize> = (0..total).rev().filter(|&b| !forced[b]).collect();
        let m = seq.len();
        // state: 0 try exclude, 1 try include, 2 exhausted
        let mut state = vec![0u8; m + 1];
        let mut undo: Vec<Option<(Vec<f64>, f64)>> = vec![None; m + 1];
        let mut depth = 0usize;
        let mut done = !self.acceptable(self.cur) || !self.lookahead(total, &forced);
        while !done {
            let mut pop = false;
            if depth == m {
                if self.acceptable(self.cur) {
                    self.best = Some((self.cur, self.included.clone()));
                }
                pop = true;
            } else if state[depth] == 0 && !self.acceptable(self.cur) {
                pop = true;
            } else {
                let b = seq[depth];
                let (i, j) = self.pair(b);
                match state[depth] {
                    0 => {
                        state[depth] = 1;
                        let row_dead = j == 0 && self.row_cover[i] == 0;
                        let col_dead = i == 0 && self.col_cover[j] == 0;
                        if !row_dead && !col_dead && self.lookahead(b, &forced) {
                            depth += 1;
                            state[depth] = 0;
                        }
                    }
                    1 => {
                        state[depth] = 2;
                        if self.acceptable(self.maxc[b]) {
                            let cur = self.cur;
                            let saved = self.include(b);
                            if self.lookahead(b, &forced) {
                                undo[depth] = Some((saved, cur));
                                depth += 1;
                                state[depth] = 0;
                            } else {
                                self.undo(b, saved, cur);
                            }
                        }
                    }
                    _ => pop = true,
                }
            }
            if pop {
                if depth == 0 {
                    done = true;
                } else {
                    depth -= 1;
                    if let Some((saved, cur)) = undo[depth].take() {
                        self.undo(seq[depth], saved, cur);
                    }
                }
            }
        }
        self.best
            .take()
            .map(|(_, mask)| mask)
            .expect("heuristic bound guarantees a feasible correspondence")
    }
}
