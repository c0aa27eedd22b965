//! Dense symmetric matrices over dual-mode scalars, with an exact pivoted
//! LDL^T factorization for rational PSD verification and float
//! eigendecomposition for everything else.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use num::rational::BigRational;
use num::{Signed, Zero};

use crate::scalar::{Mode, Scalar};

/// Symmetric matrix; storage is the full square, kept symmetric by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    mode: Mode,
    data: Vec<Scalar>,
}

impl SymMatrix {
    pub fn zeros(dim: usize, mode: Mode) -> Self {
        SymMatrix { dim, mode, data: vec![Scalar::zero(mode); dim * dim] }
    }

    pub fn identity(dim: usize, mode: Mode) -> Self {
        let mut m = SymMatrix::zeros(dim, mode);
        for i in 0..dim {
            m.set(i, i, Scalar::one(mode));
        }
        m
    }

    /// Builds from rows; panics unless the input is exactly symmetric.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let dim = rows.len();
        let mode = if dim == 0 { Mode::Exact } else { rows[0][0].mode() };
        let mut m = SymMatrix::zeros(dim, mode);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "non-square input");
            for (j, v) in row.iter().enumerate() {
                m.data[i * dim + j] = v.clone();
            }
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                assert_eq!(m.get(i, j), m.get(j, i), "input not symmetric at ({i},{j})");
            }
        }
        m
    }

    pub fn from_f64(a: &Array2<f64>) -> Self {
        let dim = a.nrows();
        assert_eq!(dim, a.ncols());
        let mut m = SymMatrix::zeros(dim, Mode::Float);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = Scalar::from_f64(0.5 * (a[(i, j)] + a[(j, i)]));
            }
        }
        m
    }

    /// Integer entries divided by a common denominator, row-major.
    pub fn from_int_rows(dim: usize, num: &[&[i64]], den: i64) -> Self {
        assert_eq!(num.len(), dim);
        let rows = num
            .iter()
            .map(|r| {
                assert_eq!(r.len(), dim);
                r.iter().map(|&v| Scalar::from_ratio(v, den, Mode::Exact)).collect()
            })
            .collect();
        SymMatrix::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.dim + j].clone()
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.mode(), self.mode);
        self.data[i * self.dim + j] = v.clone();
        self.data[j * self.dim + i] = v;
    }

    pub fn to_f64(&self) -> Array2<f64> {
        Array2::from_shape_fn((self.dim, self.dim), |(i, j)| self.data[i * self.dim + j].to_f64())
    }

    pub fn convert_mode(&self, mode: Mode) -> SymMatrix {
        SymMatrix {
            dim: self.dim,
            mode,
            data: self.data.iter().map(|v| v.convert(mode)).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64().powi(2)).sum::<f64>().sqrt()
    }

    /// v^T M v, in the matrix's own mode.
    pub fn quadratic_form(&self, v: &[Scalar]) -> Scalar {
        assert_eq!(v.len(), self.dim);
        let mut acc = Scalar::zero(self.mode);
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc = acc.add(&self.get(i, j).mul(&v[i]).mul(&v[j]));
            }
        }
        acc
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.mode, other.mode);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        SymMatrix { dim: self.dim, mode: self.mode, data }
    }
}

/// Outcome of a positive-semidefiniteness test.
#[derive(Debug, Clone)]
pub enum PsdVerdict {
    PositiveDefinite(PsdWitness),
    PositiveSemidefinite(PsdWitness),
    /// Carries a direction `v` with `v^T M v < 0`.
    Indefinite { direction: Vec<Scalar>, value: Scalar },
}

impl PsdVerdict {
    pub fn is_psd(&self) -> bool {
        !matches!(self, PsdVerdict::Indefinite { .. })
    }

    pub fn is_positive_definite(&self) -> bool {
        matches!(self, PsdVerdict::PositiveDefinite(_))
    }
}

/// Evidence backing a PSD verdict: the exact factorization, or the extreme
/// eigenpair in float mode.
#[derive(Debug, Clone)]
pub enum PsdWitness {
    ExactLdlt { pivots: Vec<BigRational>, rank: usize },
    FloatEig { lambda_min: f64 },
}

/// PSD test. Exact mode runs a pivoted rational LDL^T (no tolerance); float
/// mode accepts iff `lambda_min >= -tol * (1 + ||M||_F)`.
pub fn psd_check(m: &SymMatrix, tol: f64) -> PsdVerdict {
    match m.mode {
        Mode::Exact => psd_check_exact(m),
        Mode::Float => psd_check_float(m, tol),
    }
}

fn psd_check_float(m: &SymMatrix, tol: f64) -> PsdVerdict {
    let a = m.to_f64();
    if m.dim == 0 {
        return PsdVerdict::PositiveDefinite(PsdWitness::FloatEig { lambda_min: f64::INFINITY });
    }
    let (vals, vecs) = a.eigh(UPLO::Lower).expect("eigendecomposition failed");
    let lambda_min = vals[0];
    let cutoff = tol * (1.0 + m.frobenius_norm());
    if lambda_min < -cutoff {
        let v: Vec<Scalar> = vecs.column(0).iter().map(|&x| Scalar::from_f64(x)).collect();
        return PsdVerdict::Indefinite { direction: v, value: Scalar::from_f64(lambda_min) };
    }
    let witness = PsdWitness::FloatEig { lambda_min };
    if lambda_min > cutoff {
        PsdVerdict::PositiveDefinite(witness)
    } else {
        PsdVerdict::PositiveSemidefinite(witness)
    }
}

fn psd_check_exact(m: &SymMatrix) -> PsdVerdict {
    let n = m.dim;
    let mut w: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| m.get(i, j).as_rational().clone()).collect()).collect();
    // Column permutation: perm[k] = original index placed at step k.
    let mut perm: Vec<usize> = (0..n).collect();
    let mut pivots: Vec<BigRational> = Vec::new();
    // Unit lower-triangular multipliers in permuted coordinates.
    let mut lower: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; n];

    for k in 0..n {
        // Diagonal pivoting: pick the largest remaining diagonal entry.
        let mut best = k;
        for i in (k + 1)..n {
            if w[perm[i]][perm[i]] > w[perm[best]][perm[best]] {
                best = i;
            }
        }
        perm.swap(k, best);
        let pk = perm[k];
        let d = w[pk][pk].clone();

        if d.is_negative() {
            pivots.push(d.clone());
            let v = indefinite_witness(&lower, &perm, &pivots, n, k, None);
            let value = m.quadratic_form(&v);
            debug_assert!(value.is_negative());
            return PsdVerdict::Indefinite { direction: v, value };
        }
        if d.is_zero() {
            // Largest diagonal is zero: PSD requires the whole remaining
            // block to vanish.
            for i in (k + 1)..n {
                if w[perm[i]][perm[i]].is_negative() {
                    let v = indefinite_witness(&lower, &perm, &pivots, n, k, Some((i, i, false)));
                    let value = m.quadratic_form(&v);
                    debug_assert!(value.is_negative());
                    return PsdVerdict::Indefinite { direction: v, value };
                }
            }
            for i in k..n {
                for j in (i + 1)..n {
                    if !w[perm[i]][perm[j]].is_zero() {
                        let sign_pos = w[perm[i]][perm[j]].is_positive();
                        let v = indefinite_witness(&lower, &perm, &pivots, n, k, Some((i, j, sign_pos)));
                        let value = m.quadratic_form(&v);
                        debug_assert!(value.is_negative());
                        return PsdVerdict::Indefinite { direction: v, value };
                    }
                }
            }
            let rank = k;
            return PsdVerdict::PositiveSemidefinite(PsdWitness::ExactLdlt { pivots, rank });
        }

        // Eliminate.
        for i in (k + 1)..n {
            let l = &w[perm[i]][pk] / &d;
            lower[perm[i]][pk] = l.clone();
            if l.is_zero() {
                continue;
            }
            for j in (k + 1)..n {
                let delta = &l * &w[pk][perm[j]];
                let pi = perm[i];
                let pj = perm[j];
                let upd = &w[pi][pj] - &delta;
                w[pi][pj] = upd;
            }
        }
        pivots.push(d);
    }

    PsdVerdict::PositiveDefinite(PsdWitness::ExactLdlt { pivots, rank: n })
}

/// Reconstructs v with v^T M v < 0 from the elimination state. In permuted
/// coordinates M = L D L^T; a vector y in "eliminated" coordinates maps back
/// through L^T x = y.
fn indefinite_witness(
    lower: &[Vec<BigRational>],
    perm: &[usize],
    pivots: &[BigRational],
    n: usize,
    step: usize,
    zero_pair: Option<(usize, usize, bool)>,
) -> Vec<Scalar> {
    // Target in eliminated coordinates.
    let mut y = vec![BigRational::zero(); n];
    match zero_pair {
        // Negative pivot at `step`.
        None => y[step] = BigRational::from_integer(1.into()),
        // Negative remaining diagonal (i == j), or a nonzero off-diagonal
        // paired with zero diagonals.
        Some((i, j, sign_pos)) => {
            y[i] = BigRational::from_integer(1.into());
            y[j] = if sign_pos { BigRational::from_integer((-1).into()) } else { BigRational::from_integer(1.into()) };
        }
    }
    let _ = pivots;
    // Solve L^T z = y (unit diagonal), from the last eliminated row upward.
    // Only the first `step` columns of L were formed.
    let mut z = y;
    for k in (0..step).rev() {
        let pk = perm[k];
        let mut acc = z[k].clone();
        for i in (k + 1)..n {
            let l = &lower[perm[i]][pk];
            if !l.is_zero() {
                acc -= l * &z[i];
            }
        }
        z[k] = acc;
    }
    // Map from permuted back to original coordinates.
    let mut v = vec![BigRational::zero(); n];
    for k in 0..n {
        v[perm[k]] = z[k].clone();
    }
    v.into_iter().map(Scalar::Exact).collect()
}

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix via
/// eigendecomposition; eigenvalues `<= tol * lambda_max` are treated as zero.
/// Always returns a float-mode matrix.
pub fn pseudo_inverse(m: &SymMatrix, tol: f64) -> SymMatrix {
    let a = m.to_f64();
    let (vals, vecs) = a.eigh(UPLO::Lower).expect("eigendecomposition failed");
    let lambda_max = vals.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
    let cutoff = tol * lambda_max.max(1e-300);
    let inv_vals: Array1<f64> =
        vals.iter().map(|&v| if v.abs() <= cutoff { 0.0 } else { 1.0 / v }).collect();
    let scaled = &vecs * &inv_vals; // columns scaled by 1/lambda
    let pinv = scaled.dot(&vecs.t());
    SymMatrix::from_f64(&pinv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(rows: &[&[i64]]) -> SymMatrix {
        SymMatrix::from_int_rows(rows.len(), rows, 1)
    }

    #[test]
    fn identity_is_positive_definite() {
        let m = SymMatrix::identity(3, Mode::Exact);
        assert!(psd_check(&m, 0.0).is_positive_definite());
        let f = SymMatrix::identity(3, Mode::Float);
        assert!(psd_check(&f, 1e-9).is_positive_definite());
    }

    #[test]
    fn indefinite_with_witness() {
        let m = exact(&[&[1, 2], &[2, 1]]);
        match psd_check(&m, 0.0) {
            PsdVerdict::Indefinite { direction, value } => {
                assert!(value.is_negative());
                let q = m.quadratic_form(&direction);
                assert!(q.is_negative());
            }
            other => panic!("expected indefinite, got {other:?}"),
        }
        // The canonical witness (1, -1) gives -2.
        let v = vec![Scalar::from_int(1, Mode::Exact), Scalar::from_int(-1, Mode::Exact)];
        assert_eq!(m.quadratic_form(&v), Scalar::from_int(-2, Mode::Exact));
    }

    #[test]
    fn rank_deficient_psd() {
        let m = exact(&[&[4, 0], &[0, 0]]);
        match psd_check(&m, 0.0) {
            PsdVerdict::PositiveSemidefinite(PsdWitness::ExactLdlt { rank, .. }) => {
                assert_eq!(rank, 1)
            }
            other => panic!("expected semidefinite, got {other:?}"),
        }
        // Zero diagonal with nonzero off-diagonal is indefinite.
        let m = exact(&[&[0, 1], &[1, 0]]);
        assert!(!psd_check(&m, 0.0).is_psd());
    }

    #[test]
    fn pseudo_inverse_examples() {
        let m = SymMatrix::identity(2, Mode::Float);
        let p = pseudo_inverse(&m, 1e-12);
        assert!((p.get(0, 0).to_f64() - 1.0).abs() < 1e-12);

        let m = SymMatrix::from_f64(&ndarray::array![[4.0, 0.0], [0.0, 0.0]]);
        let p = pseudo_inverse(&m, 1e-12);
        assert!((p.get(0, 0).to_f64() - 0.25).abs() < 1e-12);
        assert!(p.get(1, 1).to_f64().abs() < 1e-12);

        // M^+ M = I for invertible M.
        let m = SymMatrix::from_f64(&ndarray::array![[2.0, 1.0], [1.0, 2.0]]);
        let p = pseudo_inverse(&m, 1e-12);
        let prod = p.to_f64().dot(&m.to_f64());
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - expect).abs() < 1e-12);
            }
        }
    }
}
