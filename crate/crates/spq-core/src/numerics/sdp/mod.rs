//! Block-structured conic programs and their interior-point solver.
//!
//! The primal form is
//!
//! ```text
//! min  <c, x>   s.t.  A x = b,   x in  S+^{d1} x ... x S+^{dk} x R+^nn x R^nf,
//! ```
//!
//! i.e. a product of dense PSD blocks, nonnegative scalars, and free
//! scalars, with linear equality constraints. LPs are the degenerate case
//! with no PSD blocks.

use ndarray::Array2;

mod solver;

pub use solver::solve_sdp;

/// Linear functional over the block variables. A PSD entry `(block, i, j, c)`
/// with `i <= j` contributes `c * X[i][j]` (the symmetric entry counted
/// once).
#[derive(Debug, Clone, Default)]
pub struct LinExpr {
    pub psd: Vec<(usize, u32, u32, f64)>,
    pub nonneg: Vec<(usize, f64)>,
    pub free: Vec<(usize, f64)>,
}

impl LinExpr {
    pub fn new() -> Self {
        LinExpr::default()
    }

    pub fn psd(mut self, block: usize, i: usize, j: usize, c: f64) -> Self {
        self.add_psd(block, i, j, c);
        self
    }

    pub fn nn(mut self, idx: usize, c: f64) -> Self {
        self.add_nonneg(idx, c);
        self
    }

    pub fn fr(mut self, idx: usize, c: f64) -> Self {
        self.add_free(idx, c);
        self
    }

    pub fn add_psd(&mut self, block: usize, i: usize, j: usize, c: f64) {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if c != 0.0 {
            self.psd.push((block, i as u32, j as u32, c));
        }
    }

    pub fn add_nonneg(&mut self, idx: usize, c: f64) {
        if c != 0.0 {
            self.nonneg.push((idx, c));
        }
    }

    pub fn add_free(&mut self, idx: usize, c: f64) {
        if c != 0.0 {
            self.free.push((idx, c));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.psd.is_empty() && self.nonneg.is_empty() && self.free.is_empty()
    }

    /// Merges duplicate coordinates (summing coefficients).
    fn normalized(&self) -> LinExpr {
        use std::collections::HashMap;
        let mut psd: HashMap<(usize, u32, u32), f64> = HashMap::new();
        for &(b, i, j, c) in &self.psd {
            *psd.entry((b, i, j)).or_default() += c;
        }
        let mut nonneg: HashMap<usize, f64> = HashMap::new();
        for &(i, c) in &self.nonneg {
            *nonneg.entry(i).or_default() += c;
        }
        let mut free: HashMap<usize, f64> = HashMap::new();
        for &(i, c) in &self.free {
            *free.entry(i).or_default() += c;
        }
        let mut out = LinExpr {
            psd: psd.into_iter().filter(|&(_, c)| c != 0.0).map(|((b, i, j), c)| (b, i, j, c)).collect(),
            nonneg: nonneg.into_iter().filter(|&(_, c)| c != 0.0).collect(),
            free: free.into_iter().filter(|&(_, c)| c != 0.0).collect(),
        };
        out.psd.sort_unstable_by_key(|&(b, i, j, _)| (b, i, j));
        out.nonneg.sort_unstable_by_key(|&(i, _)| i);
        out.free.sort_unstable_by_key(|&(i, _)| i);
        out
    }

    fn max_abs(&self) -> f64 {
        let m1 = self.psd.iter().map(|&(_, _, _, c)| c.abs()).fold(0.0, f64::max);
        let m2 = self.nonneg.iter().map(|&(_, c)| c.abs()).fold(0.0, f64::max);
        let m3 = self.free.iter().map(|&(_, c)| c.abs()).fold(0.0, f64::max);
        m1.max(m2).max(m3)
    }
}

/// A block-structured semidefinite program.
#[derive(Debug, Clone, Default)]
pub struct SdpProblem {
    pub psd_dims: Vec<usize>,
    pub nonneg_count: usize,
    pub free_count: usize,
    /// Minimized objective.
    pub objective: LinExpr,
    pub constraints: Vec<LinExpr>,
    pub rhs: Vec<f64>,
}

impl SdpProblem {
    pub fn new() -> Self {
        SdpProblem::default()
    }

    pub fn add_psd_block(&mut self, dim: usize) -> usize {
        assert!(dim > 0);
        self.psd_dims.push(dim);
        self.psd_dims.len() - 1
    }

    pub fn add_nonneg_vars(&mut self, count: usize) -> std::ops::Range<usize> {
        let start = self.nonneg_count;
        self.nonneg_count += count;
        start..self.nonneg_count
    }

    pub fn add_free_vars(&mut self, count: usize) -> std::ops::Range<usize> {
        let start = self.free_count;
        self.free_count += count;
        start..self.free_count
    }

    pub fn set_objective(&mut self, obj: LinExpr) {
        self.objective = obj;
    }

    pub fn add_constraint(&mut self, expr: LinExpr, rhs: f64) {
        self.constraints.push(expr);
        self.rhs.push(rhs);
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub(crate) fn validate(&self) {
        let check = |e: &LinExpr| {
            for &(b, i, j, _) in &e.psd {
                assert!(b < self.psd_dims.len(), "bad block id");
                assert!((j as usize) < self.psd_dims[b] && i <= j, "bad block entry");
            }
            for &(i, _) in &e.nonneg {
                assert!(i < self.nonneg_count, "bad nonneg index");
            }
            for &(i, _) in &e.free {
                assert!(i < self.free_count, "bad free index");
            }
        };
        check(&self.objective);
        for c in &self.constraints {
            check(c);
        }
        assert_eq!(self.constraints.len(), self.rhs.len());
    }
}

/// Solver options.
#[derive(Debug, Clone)]
pub struct SdpOptions {
    /// Relative duality-gap tolerance.
    pub tol_gap: f64,
    /// Relative primal/dual feasibility tolerance.
    pub tol_feas: f64,
    pub max_iter: usize,
    pub verbose: bool,
    /// Optional CSV iteration dump: `iter, mu, primal_res, dual_res`.
    pub trace_csv: Option<std::path::PathBuf>,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions { tol_gap: 1e-8, tol_feas: 1e-8, max_iter: 100, verbose: false, trace_csv: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIter,
    IllConditioned,
}

/// Primal/dual solution with residuals. `status == Optimal` guarantees all
/// residuals are at or below the solver tolerances.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    pub psd: Vec<Array2<f64>>,
    pub nonneg: Vec<f64>,
    pub free: Vec<f64>,
    /// Dual multipliers, one per constraint.
    pub y: Vec<f64>,
    /// Dual slack blocks.
    pub dual_psd: Vec<Array2<f64>>,
    pub objective: f64,
    pub dual_objective: f64,
    pub res_primal: f64,
    pub res_dual: f64,
    pub res_gap: f64,
    pub iterations: usize,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SdpStatus::Optimal
    }

    /// Value of a linear expression at the primal solution.
    pub fn eval_expr(&self, e: &LinExpr) -> f64 {
        let mut acc = 0.0;
        for &(b, i, j, c) in &e.psd {
            acc += c * self.psd[b][(i as usize, j as usize)];
        }
        for &(i, c) in &e.nonneg {
            acc += c * self.nonneg[i];
        }
        for &(i, c) in &e.free {
            acc += c * self.free[i];
        }
        acc
    }
}


