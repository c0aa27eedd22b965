//! Primal-dual interior-point method with Nesterov-Todd scaling and a
//! Mehrotra predictor-corrector. Free variables are handled directly through
//! a bordered Schur system rather than splitting.

use std::io::Write as _;

use ndarray::{Array1, Array2, Axis};
use ndarray_linalg::{Cholesky, Eigh, SVD, UPLO};
use ndarray_linalg::triangular::{Diag, SolveTriangular};
use rayon::prelude::*;

use super::{LinExpr, SdpOptions, SdpProblem, SdpSolution, SdpStatus};

/// Threshold below which a PSD block uses the outer-product path for
/// `W A W` instead of gather + matmul.
const SMALL_BLOCK: usize = 48;

pub fn solve_sdp(prob: &SdpProblem, opts: &SdpOptions) -> SdpSolution {
    prob.validate();
    let mut ws = Workspace::new(prob);
    ws.run(opts)
}

struct BlockCons {
    /// Constraint indices with entries in this block.
    cons: Vec<u32>,
    /// row_of[j] = position of constraint j in `cons`, or u32::MAX.
    row_of: Vec<u32>,
    /// Entries per constraint, as symmetric-matrix values: `(p, q, f)` with
    /// p <= q meaning F[p][q] = F[q][p] = f.
    entries: Vec<Vec<(u32, u32, f64)>>,
}

struct Workspace {
    m: usize,
    psd_dims: Vec<usize>,
    nn: usize,
    nf: usize,
    // Scaled data.
    b: Vec<f64>,
    row_scale: Vec<f64>,
    obj_scale: f64,
    c_psd: Vec<Array2<f64>>,
    c_nn: Vec<f64>,
    c_free: Vec<f64>,
    blocks: Vec<BlockCons>,
    nn_entries: Vec<Vec<(u32, f64)>>,   // per constraint
    nn_cols: Vec<Vec<(u32, f64)>>,      // per nonneg coordinate
    af: Array2<f64>,                    // m x nf
    // Iterates.
    x_psd: Vec<Array2<f64>>,
    s_psd: Vec<Array2<f64>>,
    x_nn: Vec<f64>,
    s_nn: Vec<f64>,
    x_free: Vec<f64>,
    y: Vec<f64>,
}

/// Converts a LinExpr's PSD part into symmetric-matrix entry values.
fn matrix_entries(e: &LinExpr, block: usize) -> Vec<(u32, u32, f64)> {
    e.psd
        .iter()
        .filter(|&&(b, _, _, _)| b == block)
        .map(|&(_, i, j, c)| (i, j, if i == j { c } else { 0.5 * c }))
        .collect()
}

fn sym_accumulate(m: &mut Array2<f64>, entries: &[(u32, u32, f64)], scale: f64) {
    for &(p, q, f) in entries {
        let (p, q) = (p as usize, q as usize);
        m[(p, q)] += scale * f;
        if p != q {
            m[(q, p)] += scale * f;
        }
    }
}

fn sym_inner(entries: &[(u32, u32, f64)], t: &Array2<f64>) -> f64 {
    let mut acc = 0.0;
    for &(p, q, f) in entries {
        let (p, q) = (p as usize, q as usize);
        if p == q {
            acc += f * t[(p, p)];
        } else {
            acc += f * (t[(p, q)] + t[(q, p)]);
        }
    }
    acc
}

impl Workspace {
    fn new(prob: &SdpProblem) -> Self {
        let m = prob.num_constraints();
        let nb = prob.psd_dims.len();
        let obj_scale = prob.objective.max_abs().max(1.0);
        let mut row_scale = vec![1.0f64; m];
        let cons_norm: Vec<LinExpr> = prob
            .constraints
            .iter()
            .enumerate()
            .map(|(j, e)| {
                let e = e.normalized();
                row_scale[j] = e.max_abs().max(1e-12).max(prob.rhs[j].abs() / 1e6).max(1e-6);
                e
            })
            .collect();
        let b: Vec<f64> = prob.rhs.iter().zip(&row_scale).map(|(r, s)| r / s).collect();

        let obj = prob.objective.normalized();
        let mut c_psd: Vec<Array2<f64>> =
            prob.psd_dims.iter().map(|&d| Array2::zeros((d, d))).collect();
        for bidx in 0..nb {
            let entries = matrix_entries(&obj, bidx);
            sym_accumulate(&mut c_psd[bidx], &entries, 1.0 / obj_scale);
        }
        let mut c_nn = vec![0.0; prob.nonneg_count];
        for &(i, c) in &obj.nonneg {
            c_nn[i] = c / obj_scale;
        }
        let mut c_free = vec![0.0; prob.free_count];
        for &(i, c) in &obj.free {
            c_free[i] = c / obj_scale;
        }

        let mut blocks = Vec::with_capacity(nb);
        for bidx in 0..nb {
            let mut cons = Vec::new();
            let mut row_of = vec![u32::MAX; m];
            let mut entries = Vec::new();
            for (j, e) in cons_norm.iter().enumerate() {
                let ent: Vec<(u32, u32, f64)> = e
                    .psd
                    .iter()
                    .filter(|&&(b2, _, _, _)| b2 == bidx)
                    .map(|&(_, p, q, c)| {
                        let f = c / row_scale[j];
                        (p, q, if p == q { f } else { 0.5 * f })
                    })
                    .collect();
                if !ent.is_empty() {
                    row_of[j] = cons.len() as u32;
                    cons.push(j as u32);
                    entries.push(ent);
                }
            }
            blocks.push(BlockCons { cons, row_of, entries });
        }

        let mut nn_entries: Vec<Vec<(u32, f64)>> = vec![Vec::new(); m];
        let mut nn_cols: Vec<Vec<(u32, f64)>> = vec![Vec::new(); prob.nonneg_count];
        let mut af = Array2::<f64>::zeros((m, prob.free_count));
        for (j, e) in cons_norm.iter().enumerate() {
            for &(i, c) in &e.nonneg {
                let v = c / row_scale[j];
                nn_entries[j].push((i as u32, v));
                nn_cols[i].push((j as u32, v));
            }
            for &(i, c) in &e.free {
                af[(j, i)] = c / row_scale[j];
            }
        }

        // Initial point: identity blocks scaled by problem magnitudes.
        let bnorm = b.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let xi = (10.0f64).max(2.0 * bnorm);
        let eta = (10.0f64)
            .max(c_psd.iter().map(|c| c.iter().map(|v| v.abs()).fold(0.0, f64::max)).fold(0.0, f64::max))
            .max(c_nn.iter().map(|v| v.abs()).fold(0.0, f64::max))
            .max(c_free.iter().map(|v| v.abs()).fold(0.0, f64::max));

        Workspace {
            m,
            psd_dims: prob.psd_dims.clone(),
            nn: prob.nonneg_count,
            nf: prob.free_count,
            b,
            row_scale,
            obj_scale,
            c_psd,
            c_nn,
            c_free,
            blocks,
            nn_entries,
            nn_cols,
            af,
            x_psd: prob.psd_dims.iter().map(|&d| Array2::eye(d) * xi).collect(),
            s_psd: prob.psd_dims.iter().map(|&d| Array2::eye(d) * eta).collect(),
            x_nn: vec![xi; prob.nonneg_count],
            s_nn: vec![eta; prob.nonneg_count],
            x_free: vec![0.0; prob.free_count],
            y: vec![0.0; m],
        }
    }

    fn cone_degree(&self) -> f64 {
        (self.psd_dims.iter().sum::<usize>() + self.nn) as f64
    }

    fn primal_obj(&self) -> f64 {
        let mut acc = 0.0;
        for (c, x) in self.c_psd.iter().zip(&self.x_psd) {
            acc += (c * x).sum();
        }
        for (c, x) in self.c_nn.iter().zip(&self.x_nn) {
            acc += c * x;
        }
        for (c, x) in self.c_free.iter().zip(&self.x_free) {
            acc += c * x;
        }
        acc
    }

    fn dual_obj(&self) -> f64 {
        self.b.iter().zip(&self.y).map(|(b, y)| b * y).sum()
    }

    fn gap(&self) -> f64 {
        let mut acc = 0.0;
        for (x, s) in self.x_psd.iter().zip(&self.s_psd) {
            acc += (x * s).sum();
        }
        for (x, s) in self.x_nn.iter().zip(&self.s_nn) {
            acc += x * s;
        }
        acc
    }

    /// rp = b - A(x).
    fn primal_residual(&self) -> Vec<f64> {
        let mut ax = vec![0.0; self.m];
        for (bidx, blk) in self.blocks.iter().enumerate() {
            let x = &self.x_psd[bidx];
            for (pos, &j) in blk.cons.iter().enumerate() {
                ax[j as usize] += sym_inner(&blk.entries[pos], x);
            }
        }
        for (j, ents) in self.nn_entries.iter().enumerate() {
            for &(i, v) in ents {
                ax[j] += v * self.x_nn[i as usize];
            }
        }
        if self.nf > 0 {
            for j in 0..self.m {
                for k in 0..self.nf {
                    ax[j] += self.af[(j, k)] * self.x_free[k];
                }
            }
        }
        (0..self.m).map(|j| self.b[j] - ax[j]).collect()
    }

    /// Rd_b = C_b - S_b - (A^T y)_b per block; plus nonneg and free parts.
    fn dual_residuals(&self) -> (Vec<Array2<f64>>, Vec<f64>, Vec<f64>) {
        let mut rd_psd = Vec::with_capacity(self.psd_dims.len());
        for (bidx, blk) in self.blocks.iter().enumerate() {
            let mut aty = Array2::<f64>::zeros((self.psd_dims[bidx], self.psd_dims[bidx]));
            for (pos, &j) in blk.cons.iter().enumerate() {
                sym_accumulate(&mut aty, &blk.entries[pos], self.y[j as usize]);
            }
            rd_psd.push(&self.c_psd[bidx] - &self.s_psd[bidx] - aty);
        }
        let mut rd_nn = self.c_nn.clone();
        for (i, s) in rd_nn.iter_mut().zip(&self.s_nn) {
            *i -= s;
        }
        for (j, ents) in self.nn_entries.iter().enumerate() {
            for &(i, v) in ents {
                rd_nn[i as usize] -= v * self.y[j];
            }
        }
        let mut rd_free = self.c_free.clone();
        if self.nf > 0 {
            for j in 0..self.m {
                for k in 0..self.nf {
                    rd_free[k] -= self.af[(j, k)] * self.y[j];
                }
            }
        }
        (rd_psd, rd_nn, rd_free)
    }

    fn run(&mut self, opts: &SdpOptions) -> SdpSolution {
        let nu = self.cone_degree().max(1.0);
        let bnorm = 1.0 + self.b.iter().map(|v| v * v).sum::<f64>().sqrt();
        let cnorm = 1.0 + {
            let mut acc = self.c_nn.iter().map(|v| v * v).sum::<f64>()
                + self.c_free.iter().map(|v| v * v).sum::<f64>();
            for c in &self.c_psd {
                acc += c.iter().map(|v| v * v).sum::<f64>();
            }
            acc.sqrt()
        };
        let mut trace: Option<std::fs::File> =
            opts.trace_csv.as_ref().map(|p| std::fs::File::create(p).expect("trace file"));
        if let Some(f) = trace.as_mut() {
            writeln!(f, "iter,mu,primal_res,dual_res").ok();
        }

        let mut status = SdpStatus::MaxIter;
        let mut iters = 0;
        let mut stalls = 0;
        for iter in 0..opts.max_iter {
            iters = iter + 1;
            let rp = self.primal_residual();
            let (rd_psd, rd_nn, rd_free) = self.dual_residuals();
            let gap = self.gap();
            let mu = gap / nu;
            let pobj = self.primal_obj();
            let dobj = self.dual_obj();
            let pinf = rp.iter().map(|v| v * v).sum::<f64>().sqrt() / bnorm;
            let dinf = {
                let mut acc = rd_nn.iter().map(|v| v * v).sum::<f64>()
                    + rd_free.iter().map(|v| v * v).sum::<f64>();
                for r in &rd_psd {
                    acc += r.iter().map(|v| v * v).sum::<f64>();
                }
                acc.sqrt() / cnorm
            };
            let relgap = gap.abs() / (1.0 + pobj.abs() + dobj.abs());
            if opts.verbose {
                eprintln!(
                    "it {iter:3}  mu {mu:10.3e}  pinf {pinf:9.2e}  dinf {dinf:9.2e}  gap {relgap:9.2e}  pobj {pobj:12.5e}"
                );
                if std::env::var("SPQ_SDP_DEBUG").is_ok() {
                    eprintln!("   y {:?}", self.y);
                    eprintln!("   x_nn {:?} s_nn {:?} x_free {:?}", self.x_nn, self.s_nn, self.x_free);
                    let rdp: f64 = rd_psd.iter().map(|r| r.iter().map(|v| v * v).sum::<f64>()).sum::<f64>();
                    let rdn: f64 = rd_nn.iter().map(|v| v * v).sum();
                    let rdf: f64 = rd_free.iter().map(|v| v * v).sum();
                    eprintln!("   |rd_psd| {:.3e} |rd_nn| {:.3e} |rd_free| {:.3e}", rdp.sqrt(), rdn.sqrt(), rdf.sqrt());
                }
            }
            if let Some(f) = trace.as_mut() {
                writeln!(f, "{iter},{mu:.g$},{pinf:.g$},{dinf:.g$}", g = 12).ok();
            }
            if pinf <= opts.tol_feas && dinf <= opts.tol_feas && relgap <= opts.tol_gap {
                status = SdpStatus::Optimal;
                break;
            }
            if pobj < -1e13 && pinf <= 1e-6 {
                status = SdpStatus::Unbounded;
                break;
            }
            if dobj > 1e13 && dinf <= 1e-6 {
                status = SdpStatus::Infeasible;
                break;
            }
            if !mu.is_finite() || mu > 1e18 {
                status = SdpStatus::IllConditioned;
                break;
            }

            // NT scaling.
            let Some(scal) = self.nt_scaling() else {
                status = SdpStatus::IllConditioned;
                break;
            };
            // Schur complement (shared by predictor and corrector).
            let Some(kkt) = self.factor_schur(&scal) else {
                status = SdpStatus::IllConditioned;
                break;
            };

            // Predictor: affine direction.
            let g_psd: Vec<Array2<f64>> = self.x_psd.iter().map(|x| -x).collect();
            let g_nn: Vec<f64> = self.x_nn.iter().map(|x| -x).collect();
            let aff = self.solve_direction(&scal, &kkt, &rp, &rd_psd, &rd_nn, &rd_free, &g_psd, &g_nn);
            let Some(aff) = aff else {
                status = SdpStatus::IllConditioned;
                break;
            };
            let (ap_aff, ad_aff) = self.step_lengths(&scal, &aff);

            // Centering parameter from the affine step length; complements
            // the gap-ratio rule and keeps iterates centered when steps
            // collapse near a rank-deficient optimum.
            let alpha_aff = ap_aff.min(ad_aff).min(1.0);
            let gap_aff = self.gap_after(&aff, ap_aff, ad_aff);
            let sigma_gap = (gap_aff / gap).clamp(0.0, 1.0).powi(3);
            let sigma = sigma_gap.max((1.0 - alpha_aff).powi(3)).clamp(1e-10, 1.0);

            // Corrector targets in scaled space.
            let (g_psd, g_nn) = self.corrector_targets(&scal, &aff, sigma * mu);
            let dir = self.solve_direction(&scal, &kkt, &rp, &rd_psd, &rd_nn, &rd_free, &g_psd, &g_nn);
            let Some(dir) = dir else {
                status = SdpStatus::IllConditioned;
                break;
            };
            if opts.verbose && std::env::var("SPQ_SDP_DEBUG").is_ok() {
                eprintln!("   corr dy {:?} dx_nn {:?} ds_nn {:?} dx_free {:?}", dir.dy, dir.dx_nn, dir.ds_nn, dir.dx_free);
                let afty: Vec<f64> = (0..self.nf).map(|k| (0..self.m).map(|j| self.af[(j,k)]*dir.dy[j]).sum()).collect();
                eprintln!("   AF^T dy {:?} vs rd_free {:?}", afty, rd_free);
            }
            let (ap, ad) = self.step_lengths(&scal, &dir);
            let frac = 0.9 + 0.09 * ap.min(ad).min(1.0);
            let ap = (frac * ap).min(1.0);
            let ad = (frac * ad).min(1.0);
            if opts.verbose && std::env::var("SPQ_SDP_DEBUG").is_ok() {
                eprintln!("   sigma {sigma:.3e} ap {ap:.4} ad {ad:.4}");
            }
            if ap.min(ad) < 1e-7 {
                stalls += 1;
                if stalls >= 2 {
                    status = SdpStatus::IllConditioned;
                    break;
                }
            } else {
                stalls = 0;
            }
            self.take_step(&dir, ap, ad);
        }

        self.extract_solution(status, iters, bnorm, cnorm, nu)
    }

    fn extract_solution(
        &self,
        status: SdpStatus,
        iterations: usize,
        bnorm: f64,
        cnorm: f64,
        nu: f64,
    ) -> SdpSolution {
        let _ = nu;
        let rp = self.primal_residual();
        let (rd_psd, rd_nn, rd_free) = self.dual_residuals();
        let pinf = rp.iter().map(|v| v * v).sum::<f64>().sqrt() / bnorm;
        let dinf = {
            let mut acc = rd_nn.iter().map(|v| v * v).sum::<f64>()
                + rd_free.iter().map(|v| v * v).sum::<f64>();
            for r in &rd_psd {
                acc += r.iter().map(|v| v * v).sum::<f64>();
            }
            acc.sqrt() / cnorm
        };
        let pobj = self.primal_obj();
        let dobj = self.dual_obj();
        let relgap = self.gap().abs() / (1.0 + pobj.abs() + dobj.abs());
        // Undo the objective and row scalings.
        let y: Vec<f64> =
            (0..self.m).map(|j| self.obj_scale * self.y[j] / self.row_scale[j]).collect();
        SdpSolution {
            status,
            psd: self.x_psd.clone(),
            nonneg: self.x_nn.clone(),
            free: self.x_free.clone(),
            y,
            dual_psd: self.s_psd.iter().map(|s| s * self.obj_scale).collect(),
            objective: pobj * self.obj_scale,
            dual_objective: dobj * self.obj_scale,
            res_primal: pinf,
            res_dual: dinf,
            res_gap: relgap,
            iterations,
        }
    }

    fn nt_scaling(&self) -> Option<Scaling> {
        let nb = self.psd_dims.len();
        let mut r = Vec::with_capacity(nb);
        let mut rinv = Vec::with_capacity(nb);
        let mut w = Vec::with_capacity(nb);
        let mut lam = Vec::with_capacity(nb);
        let mut lx_all = Vec::with_capacity(nb);
        let mut ls_all = Vec::with_capacity(nb);
        for bidx in 0..nb {
            let lx = self.x_psd[bidx].cholesky(UPLO::Lower).ok()?;
            let ls = self.s_psd[bidx].cholesky(UPLO::Lower).ok()?;
            // SVD of Ls^T Lx: R = Lx V S^{-1/2}, R^{-1} = S^{-1/2} U^T Ls^T.
            let prod = ls.t().dot(&lx);
            let (u, sv, vt) = prod.svd(true, true).ok()?;
            let u = u?;
            let vt = vt?;
            if sv.iter().any(|&v| v <= 0.0 || !v.is_finite()) {
                return None;
            }
            let inv_sqrt: Array1<f64> = sv.iter().map(|&v| 1.0 / v.sqrt()).collect();
            let rb = lx.dot(&vt.t()) * &inv_sqrt; // scale columns
            let rbi = {
                let ut_lst = u.t().dot(&ls.t());
                let mut m = ut_lst;
                for (mut row, s) in m.axis_iter_mut(Axis(0)).zip(inv_sqrt.iter()) {
                    row.mapv_inplace(|v| v * s);
                }
                m
            };
            let wb = rb.dot(&rb.t());
            r.push(rb);
            rinv.push(rbi);
            w.push(wb);
            lam.push(sv.mapv(f64::sqrt));
            lx_all.push(lx);
            ls_all.push(ls);
        }
        let wn: Vec<f64> = self
            .x_nn
            .iter()
            .zip(&self.s_nn)
            .map(|(x, s)| (x / s).sqrt())
            .collect();
        if wn.iter().any(|v| !v.is_finite()) {
            return None;
        }
        Some(Scaling { r, rinv, w, lam, lx: lx_all, ls: ls_all, wn })
    }

    /// Forms and factors the Schur complement of the cone part, plus the
    /// free-variable border.
    fn factor_schur(&self, scal: &Scaling) -> Option<Kkt> {
        let m = self.m;
        let mut mat = Array2::<f64>::zeros((m, m));
        {
            let mslice = mat.as_slice_mut().unwrap();
            for (bidx, blk) in self.blocks.iter().enumerate() {
                let d = self.psd_dims[bidx];
                let w = &scal.w[bidx];
                if blk.cons.is_empty() {
                    continue;
                }
                // Parallel over rows of M; each row owns its slice.
                mslice.par_chunks_mut(m).enumerate().for_each(|(j, row)| {
                    let pos = blk.row_of[j];
                    if pos == u32::MAX {
                        return;
                    }
                    let entries = &blk.entries[pos as usize];
                    let t = if d <= SMALL_BLOCK {
                        let mut t = Array2::<f64>::zeros((d, d));
                        // T = W A W by rank-1 accumulation.
                        for &(p, q, f) in entries {
                            let (p, q) = (p as usize, q as usize);
                            let wp = w.row(p);
                            let wq = w.row(q);
                            for a in 0..d {
                                let wpa = w[(a, p)];
                                let wqa = w[(a, q)];
                                let mut trow = t.row_mut(a);
                                if p == q {
                                    for bb in 0..d {
                                        trow[bb] += f * wpa * wp[bb];
                                    }
                                } else {
                                    for bb in 0..d {
                                        trow[bb] += f * (wpa * wq[bb] + wqa * wp[bb]);
                                    }
                                }
                            }
                        }
                        t
                    } else {
                        // Gather rows, multiply: T = W[:, R] * (A W)[R, :].
                        let mut rows: Vec<u32> = Vec::with_capacity(entries.len() * 2);
                        for &(p, q, _) in entries {
                            rows.push(p);
                            rows.push(q);
                        }
                        rows.sort_unstable();
                        rows.dedup();
                        let k = rows.len();
                        let mut bmat = Array2::<f64>::zeros((k, d));
                        let lookup = |r: u32| rows.binary_search(&r).unwrap();
                        for &(p, q, f) in entries {
                            let rp = lookup(p);
                            for (dst, src) in bmat.row_mut(rp).iter_mut().zip(w.row(q as usize)) {
                                *dst += f * src;
                            }
                            if p != q {
                                let rq = lookup(q);
                                for (dst, src) in bmat.row_mut(rq).iter_mut().zip(w.row(p as usize)) {
                                    *dst += f * src;
                                }
                            }
                        }
                        let wcols = {
                            let mut g = Array2::<f64>::zeros((d, k));
                            for (col, &ridx) in rows.iter().enumerate() {
                                g.column_mut(col).assign(&w.column(ridx as usize));
                            }
                            g
                        };
                        wcols.dot(&bmat)
                    };
                    // Lower-triangular part of this block's contribution.
                    for &k2 in &blk.cons {
                        let k2 = k2 as usize;
                        if k2 <= j {
                            row[k2] += sym_inner(&blk.entries[blk.row_of[k2] as usize], &t);
                        }
                    }
                });
            }
        }
        // Nonnegative scalars.
        for (i, col) in self.nn_cols.iter().enumerate() {
            let w2 = scal.wn[i] * scal.wn[i];
            for a in 0..col.len() {
                let (ja, va) = col[a];
                for &(jb, vb) in &col[..=a] {
                    let (hi, lo) = if ja >= jb { (ja, jb) } else { (jb, ja) };
                    mat[(hi as usize, lo as usize)] += w2 * va * vb;
                }
            }
        }
        // Symmetrize.
        for j in 0..m {
            for k in (j + 1)..m {
                mat[(j, k)] = mat[(k, j)];
            }
        }
        // Factor with escalating ridge.
        let mean_diag = (0..m).map(|j| mat[(j, j)].abs()).sum::<f64>() / m.max(1) as f64;
        let mut ridge = 0.0;
        let l = loop {
            let attempt = if ridge == 0.0 {
                mat.cholesky(UPLO::Lower)
            } else {
                let mut mm = mat.clone();
                for j in 0..m {
                    mm[(j, j)] += ridge;
                }
                mm.cholesky(UPLO::Lower)
            };
            match attempt {
                Ok(l) => break l,
                Err(_) => {
                    ridge = if ridge == 0.0 { 1e-12 * mean_diag.max(1e-8) } else { ridge * 100.0 };
                    if ridge > 1e-2 * mean_diag.max(1e-8) {
                        return None;
                    }
                }
            }
        };
        // Free-variable border: U = M^{-1} A_F, S_F = A_F^T U.
        let (u_border, sf_chol) = if self.nf > 0 {
            let z = l.solve_triangular(UPLO::Lower, Diag::NonUnit, &self.af).ok()?;
            let u = l.t().solve_triangular(UPLO::Upper, Diag::NonUnit, &z).ok()?;
            let mut sf = self.af.t().dot(&u);
            let sf_mean = (0..self.nf).map(|k| sf[(k, k)].abs()).sum::<f64>() / self.nf as f64;
            for k in 0..self.nf {
                sf[(k, k)] += 1e-12 * sf_mean.max(1e-10);
            }
            let sfl = sf.cholesky(UPLO::Lower).ok()?;
            (Some(u), Some(sfl))
        } else {
            (None, None)
        };
        Some(Kkt { mat, l, u_border, sf_chol })
    }

    /// Solves the Newton system for given centrality targets `G` (PSD) and
    /// `g` (nonneg): dX + W dS W = G, dx + w^2 ds = g.
    #[allow(clippy::too_many_arguments)]
    fn solve_direction(
        &self,
        scal: &Scaling,
        kkt: &Kkt,
        rp: &[f64],
        rd_psd: &[Array2<f64>],
        rd_nn: &[f64],
        rd_free: &[f64],
        g_psd: &[Array2<f64>],
        g_nn: &[f64],
    ) -> Option<Direction> {
        let m = self.m;
        // rhs_j = rp_j - sum_b <A_j, G_b - W Rd_b W> - sum_i a_ji (g_i - w_i^2 rd_i)
        let mut rhs = rp.to_vec();
        for (bidx, blk) in self.blocks.iter().enumerate() {
            if blk.cons.is_empty() {
                continue;
            }
            let w = &scal.w[bidx];
            let inner = &g_psd[bidx] - &w.dot(&rd_psd[bidx]).dot(w);
            for (pos, &j) in blk.cons.iter().enumerate() {
                rhs[j as usize] -= sym_inner(&blk.entries[pos], &inner);
            }
        }
        for (j, ents) in self.nn_entries.iter().enumerate() {
            for &(i, v) in ents {
                let i = i as usize;
                rhs[j] -= v * (g_nn[i] - scal.wn[i] * scal.wn[i] * rd_nn[i]);
            }
        }
        let rhs = Array1::from(rhs);
        let rfree = Array1::from(rd_free.to_vec());
        // Solve the bordered system, then one round of iterative refinement;
        // the late-stage Schur complement is ill-conditioned and the free
        // border loses accuracy without it.
        let (mut dy, mut dxf) = kkt.solve_bordered(&self.af, &rhs, &rfree)?;
        for _ in 0..2 {
            let mut r1 = &rhs - &kkt.mat.dot(&dy);
            if self.nf > 0 {
                r1 -= &self.af.dot(&dxf);
            }
            let r2 = &rfree - &self.af.t().dot(&dy);
            let norm = r1.iter().map(|v| v * v).sum::<f64>() + r2.iter().map(|v| v * v).sum::<f64>();
            if norm.sqrt() <= 1e-13 * (1.0 + rhs.iter().map(|v| v * v).sum::<f64>().sqrt()) {
                break;
            }
            let (ddy, ddxf) = kkt.solve_bordered(&self.af, &r1, &r2)?;
            dy += &ddy;
            dxf += &ddxf;
        }

        // Recover dS, dX.
        let mut ds_psd = Vec::with_capacity(self.psd_dims.len());
        let mut dx_psd = Vec::with_capacity(self.psd_dims.len());
        for (bidx, blk) in self.blocks.iter().enumerate() {
            let d = self.psd_dims[bidx];
            let mut aty = Array2::<f64>::zeros((d, d));
            for (pos, &j) in blk.cons.iter().enumerate() {
                sym_accumulate(&mut aty, &blk.entries[pos], dy[j as usize]);
            }
            let ds = &rd_psd[bidx] - &aty;
            let w = &scal.w[bidx];
            let dx = &g_psd[bidx] - &w.dot(&ds).dot(w);
            // Symmetrize against roundoff drift.
            let dx = 0.5 * (&dx + &dx.t());
            let ds = 0.5 * (&ds + &ds.t());
            ds_psd.push(ds);
            dx_psd.push(dx);
        }
        let mut ds_nn = rd_nn.to_vec();
        for (j, ents) in self.nn_entries.iter().enumerate() {
            for &(i, v) in ents {
                ds_nn[i as usize] -= v * dy[j];
            }
        }
        let dx_nn: Vec<f64> = (0..self.nn)
            .map(|i| g_nn[i] - scal.wn[i] * scal.wn[i] * ds_nn[i])
            .collect();
        Some(Direction { dy: dy.to_vec(), dx_psd, ds_psd, dx_nn, ds_nn, dx_free: dxf.to_vec() })
    }

    /// Maximum feasible primal/dual step fractions (before the 0.9x damping).
    fn step_lengths(&self, scal: &Scaling, dir: &Direction) -> (f64, f64) {
        let mut ap = 1.0f64;
        let mut ad = 1.0f64;
        for bidx in 0..self.psd_dims.len() {
            ap = ap.min(max_psd_step(&scal.lx[bidx], &dir.dx_psd[bidx]));
            ad = ad.min(max_psd_step(&scal.ls[bidx], &dir.ds_psd[bidx]));
        }
        for i in 0..self.nn {
            if dir.dx_nn[i] < 0.0 {
                ap = ap.min(-self.x_nn[i] / dir.dx_nn[i]);
            }
            if dir.ds_nn[i] < 0.0 {
                ad = ad.min(-self.s_nn[i] / dir.ds_nn[i]);
            }
        }
        (ap, ad)
    }

    fn gap_after(&self, dir: &Direction, ap: f64, ad: f64) -> f64 {
        let ap = (0.99 * ap).min(1.0);
        let ad = (0.99 * ad).min(1.0);
        let mut acc = 0.0;
        for bidx in 0..self.psd_dims.len() {
            let x = &self.x_psd[bidx] + &(&dir.dx_psd[bidx] * ap);
            let s = &self.s_psd[bidx] + &(&dir.ds_psd[bidx] * ad);
            acc += (&x * &s).sum();
        }
        for i in 0..self.nn {
            acc += (self.x_nn[i] + ap * dir.dx_nn[i]) * (self.s_nn[i] + ad * dir.ds_nn[i]);
        }
        acc.max(0.0)
    }

    /// Mehrotra corrector targets: in scaled space
    /// d = sigma*mu*I - lambda^2 - sym(dX^ dS^), mapped back through R.
    fn corrector_targets(&self, scal: &Scaling, aff: &Direction, sigma_mu: f64) -> (Vec<Array2<f64>>, Vec<f64>) {
        let mut g_psd = Vec::with_capacity(self.psd_dims.len());
        for bidx in 0..self.psd_dims.len() {
            let rinv = &scal.rinv[bidx];
            let r = &scal.r[bidx];
            let lam = &scal.lam[bidx];
            let dxh = rinv.dot(&aff.dx_psd[bidx]).dot(&rinv.t());
            let dsh = r.t().dot(&aff.ds_psd[bidx]).dot(r);
            let prod = dxh.dot(&dsh);
            let corr = 0.5 * (&prod + &prod.t());
            let d = self.psd_dims[bidx];
            let mut e = Array2::<f64>::zeros((d, d));
            for a in 0..d {
                for b2 in 0..d {
                    let mut v = -corr[(a, b2)];
                    if a == b2 {
                        v += sigma_mu - lam[a] * lam[a];
                    }
                    e[(a, b2)] = 2.0 * v / (lam[a] + lam[b2]);
                }
            }
            g_psd.push(r.dot(&e).dot(&r.t()));
        }
        let g_nn: Vec<f64> = (0..self.nn)
            .map(|i| {
                (sigma_mu - self.x_nn[i] * self.s_nn[i] - aff.dx_nn[i] * aff.ds_nn[i]) / self.s_nn[i]
            })
            .collect();
        (g_psd, g_nn)
    }

    fn take_step(&mut self, dir: &Direction, ap: f64, ad: f64) {
        for bidx in 0..self.psd_dims.len() {
            self.x_psd[bidx] = &self.x_psd[bidx] + &(&dir.dx_psd[bidx] * ap);
            self.s_psd[bidx] = &self.s_psd[bidx] + &(&dir.ds_psd[bidx] * ad);
        }
        for i in 0..self.nn {
            self.x_nn[i] += ap * dir.dx_nn[i];
            self.s_nn[i] += ad * dir.ds_nn[i];
        }
        for k in 0..self.nf {
            self.x_free[k] += ap * dir.dx_free[k];
        }
        for j in 0..self.m {
            self.y[j] += ad * dir.dy[j];
        }
    }
}

struct Scaling {
    r: Vec<Array2<f64>>,
    rinv: Vec<Array2<f64>>,
    w: Vec<Array2<f64>>,
    lam: Vec<Array1<f64>>,
    lx: Vec<Array2<f64>>,
    ls: Vec<Array2<f64>>,
    wn: Vec<f64>,
}

struct Kkt {
    mat: Array2<f64>,
    l: Array2<f64>,
    u_border: Option<Array2<f64>>,
    sf_chol: Option<Array2<f64>>,
}

impl Kkt {
    fn solve_m(&self, v: &Array1<f64>) -> Option<Array1<f64>> {
        let z = self.l.solve_triangular(UPLO::Lower, Diag::NonUnit, v).ok()?;
        self.l.t().solve_triangular(UPLO::Upper, Diag::NonUnit, &z).ok()
    }

    /// Solves [M A_F; A_F^T 0] [dy; dxf] = [r1; r2].
    fn solve_bordered(
        &self,
        af: &Array2<f64>,
        r1: &Array1<f64>,
        r2: &Array1<f64>,
    ) -> Option<(Array1<f64>, Array1<f64>)> {
        let nf = af.ncols();
        if nf == 0 {
            return Some((self.solve_m(r1)?, Array1::zeros(0)));
        }
        let u = self.u_border.as_ref().unwrap();
        let sfl = self.sf_chol.as_ref().unwrap();
        let minv_r1 = self.solve_m(r1)?;
        let t = &af.t().dot(&minv_r1) - r2;
        let z = sfl.solve_triangular(UPLO::Lower, Diag::NonUnit, &t).ok()?;
        let dxf = sfl.t().solve_triangular(UPLO::Upper, Diag::NonUnit, &z).ok()?;
        let dy = &minv_r1 - &u.dot(&dxf);
        Some((dy, dxf))
    }
}

struct Direction {
    dy: Vec<f64>,
    dx_psd: Vec<Array2<f64>>,
    ds_psd: Vec<Array2<f64>>,
    dx_nn: Vec<f64>,
    ds_nn: Vec<f64>,
    dx_free: Vec<f64>,
}

/// Largest step alpha with X + alpha dX >= 0, given chol(X) = L:
/// alpha = -1 / lambda_min(L^{-1} dX L^{-T}) when that eigenvalue is negative.
fn max_psd_step(l: &Array2<f64>, dx: &Array2<f64>) -> f64 {
    let z = l.solve_triangular(UPLO::Lower, Diag::NonUnit, dx).expect("triangular solve");
    let zt = z.t().to_owned();
    let h = l.solve_triangular(UPLO::Lower, Diag::NonUnit, &zt).expect("triangular solve");
    let h = 0.5 * (&h + &h.t());
    match h.eigh(UPLO::Lower) {
        Ok((vals, _)) => {
            let lmin = vals[0];
            if lmin >= 0.0 {
                f64::INFINITY
            } else {
                -1.0 / lmin
            }
        }
        Err(_) => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SdpOptions {
        SdpOptions::default()
    }

    #[test]
    fn min_y_with_2x2_psd_constraint() {
        // min y s.t. [[y,1],[1,y]] >= 0  => y* = 1.
        let mut p = SdpProblem::new();
        let blk = p.add_psd_block(2);
        let yv = p.add_free_vars(1).start;
        p.set_objective(LinExpr::new().fr(yv, 1.0));
        p.add_constraint(LinExpr::new().psd(blk, 0, 0, 1.0).fr(yv, -1.0), 0.0);
        p.add_constraint(LinExpr::new().psd(blk, 1, 1, 1.0).fr(yv, -1.0), 0.0);
        p.add_constraint(LinExpr::new().psd(blk, 0, 1, 1.0), 1.0);
        let sol = solve_sdp(&p, &opts());
        assert_eq!(sol.status, SdpStatus::Optimal, "{sol:?}");
        assert!((sol.free[0] - 1.0).abs() < 1e-6, "y = {}", sol.free[0]);
    }

    #[test]
    fn sos_lower_bound_of_univariate_quadratic() {
        // max gamma s.t. t^2 - 2t + 2 - gamma is sos with basis (1, t):
        // Gram [[2-gamma, -1], [-1, 1]]; optimum gamma* = 1.
        let mut p = SdpProblem::new();
        let q = p.add_psd_block(2);
        let gamma = p.add_free_vars(1).start;
        p.set_objective(LinExpr::new().fr(gamma, -1.0)); // maximize gamma
        p.add_constraint(LinExpr::new().psd(q, 0, 0, 1.0).fr(gamma, 1.0), 2.0);
        p.add_constraint(LinExpr::new().psd(q, 0, 1, 1.0), -2.0);
        p.add_constraint(LinExpr::new().psd(q, 1, 1, 1.0), 1.0);
        let sol = solve_sdp(&p, &opts());
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.free[0] - 1.0).abs() < 1e-6, "gamma = {}", sol.free[0]);
    }

    #[test]
    fn lp_min_x_subject_to_bound() {
        // min x s.t. x >= 3: x free, x - s = 3 with s >= 0.
        let mut p = SdpProblem::new();
        let x = p.add_free_vars(1).start;
        let s = p.add_nonneg_vars(1).start;
        p.set_objective(LinExpr::new().fr(x, 1.0));
        p.add_constraint(LinExpr::new().fr(x, 1.0).nn(s, -1.0), 3.0);
        let sol = solve_sdp(&p, &opts());
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.free[0] - 3.0).abs() < 1e-7, "x = {}", sol.free[0]);
        assert!((sol.objective - 3.0).abs() < 1e-7);
    }

    #[test]
    fn strong_duality_and_feasibility_residuals() {
        // Random-ish small SDP: min <C,X> s.t. <A_k, X> = b_k, X >= 0.
        let mut p = SdpProblem::new();
        let blk = p.add_psd_block(4);
        let mut obj = LinExpr::new();
        for i in 0..4 {
            obj.add_psd(blk, i, i, 1.0 + i as f64);
        }
        obj.add_psd(blk, 0, 2, -0.5);
        p.set_objective(obj);
        p.add_constraint(LinExpr::new().psd(blk, 0, 0, 1.0).psd(blk, 1, 1, 1.0), 2.0);
        p.add_constraint(LinExpr::new().psd(blk, 2, 2, 1.0).psd(blk, 0, 1, 2.0), 1.5);
        p.add_constraint(LinExpr::new().psd(blk, 3, 3, 1.0).psd(blk, 1, 2, -1.0), 1.0);
        let sol = solve_sdp(&p, &opts());
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!(
            (sol.objective - sol.dual_objective).abs() <= 1e-6 * (1.0 + sol.objective.abs()),
            "pobj {} dobj {}",
            sol.objective,
            sol.dual_objective
        );
        // Feasibility per constraint.
        for (e, &rhs) in p.constraints.iter().zip(&p.rhs) {
            let v = sol.eval_expr(e);
            assert!((v - rhs).abs() <= 1e-7 * (1.0 + rhs.abs()), "constraint residual {v} vs {rhs}");
        }
    }

    #[test]
    fn direction_matches_dense_kkt_reference() {
        // Same near-optimal iterate as the dense reference in the debugging
        // notes: the affine direction must be small and centered.
        let mut p = SdpProblem::new();
        let blk = p.add_psd_block(2);
        let yv = p.add_free_vars(1).start;
        p.set_objective(LinExpr::new().fr(yv, 1.0));
        p.add_constraint(LinExpr::new().psd(blk, 0, 0, 1.0).fr(yv, -1.0), 0.0);
        p.add_constraint(LinExpr::new().psd(blk, 1, 1, 1.0).fr(yv, -1.0), 0.0);
        p.add_constraint(LinExpr::new().psd(blk, 0, 1, 1.0), 1.0);
        let mut ws = Workspace::new(&p);
        let t = 1e-4;
        let e = 1e-5;
        ws.x_psd[0] = ndarray::array![[1.0 + t, 1.0], [1.0, 1.0 + t]];
        ws.s_psd[0] = ndarray::array![[0.5 + e, -0.5], [-0.5, 0.5 + e]];
        ws.y = vec![-0.5 + 1e-6, -0.5 - 2e-6, 1.0 + 1e-6];
        ws.x_free = vec![1.0 + t];
        let rp = ws.primal_residual();
        let (rd_psd, rd_nn, rd_free) = ws.dual_residuals();
        let scal = ws.nt_scaling().unwrap();
        let kkt = ws.factor_schur(&scal).unwrap();
        let g_psd: Vec<Array2<f64>> = ws.x_psd.iter().map(|x| -x).collect();
        let g_nn: Vec<f64> = vec![];
        let dir = ws
            .solve_direction(&scal, &kkt, &rp, &rd_psd, &rd_nn, &rd_free, &g_psd, &g_nn)
            .unwrap();
        // Dense-KKT reference values.
        let dx_ref = ndarray::array![[-9.9999e-5, 0.0], [0.0, -9.9999e-5]];
        let ds_ref = ndarray::array![[-1.0e-5, 5.0e-10], [5.0e-10, -1.0e-5]];
        let err_dx = (&dir.dx_psd[0] - &dx_ref).iter().map(|v| v.abs()).fold(0.0, f64::max);
        let err_ds = (&dir.ds_psd[0] - &ds_ref).iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert!(err_dx < 1e-8, "dX mismatch: {:?}", dir.dx_psd[0]);
        assert!(err_ds < 1e-8, "dS mismatch: {:?}", dir.ds_psd[0]);
        assert!((dir.dx_free[0] + 9.9999e-5).abs() < 1e-8, "dxf {:?}", dir.dx_free);
    }

    #[test]
    fn infeasible_by_phase1() {
        // x1 + x2 = -1 with x >= 0 is infeasible; phase-I slack program:
        // min t s.t. x1 + x2 - t... here just check a plain slack program.
        let mut p = SdpProblem::new();
        let xs = p.add_nonneg_vars(2);
        let t = p.add_nonneg_vars(1).start;
        p.set_objective(LinExpr::new().nn(t, 1.0));
        // x1 + x2 - t = -1  => t >= 1 at feasibility, so min t = 1 > 0.
        p.add_constraint(LinExpr::new().nn(xs.start, 1.0).nn(xs.start + 1, 1.0).nn(t, -1.0), -1.0);
        let sol = solve_sdp(&p, &opts());
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.objective - 1.0).abs() < 1e-7);
    }
}
