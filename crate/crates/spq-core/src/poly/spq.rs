//! Canonical separable-plus-quadratic form.
//!
//! Every single-variable monomial (any degree, including linear and square
//! terms) lives in the separable part; the cross matrix holds only strict
//! two-variable quadratic terms and has an exactly zero diagonal. This makes
//! the split unique.

use crate::numerics::sym::SymMatrix;
use crate::scalar::{Mode, Scalar};

use super::{DensePoly, ExponentVector, PolyError, UnivariatePoly};

/// SPQ polynomial: `sum_i u_i(x_i) + x^T cross x + constant`, where the
/// coefficient of `x_i x_j` (i != j) is `2 * cross[i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpqPoly {
    n: usize,
    mode: Mode,
    separable: Vec<UnivariatePoly>,
    cross: SymMatrix,
    constant: Scalar,
}

impl SpqPoly {
    pub fn new(separable: Vec<UnivariatePoly>, cross: SymMatrix, constant: Scalar) -> Self {
        let n = separable.len();
        let mode = constant.mode();
        assert_eq!(cross.dim(), n);
        assert_eq!(cross.mode(), mode);
        for u in &separable {
            assert_eq!(u.mode(), mode);
        }
        for i in 0..n {
            assert!(cross.get(i, i).is_zero(), "cross diagonal must be zero");
        }
        // Univariate constants are folded into the global constant.
        let mut constant = constant;
        let mut separable = separable;
        for u in separable.iter_mut() {
            let c0 = u.coeff(0);
            if !c0.is_zero() {
                constant = constant.add(&c0);
                u.set_coeff(0, Scalar::zero(mode));
            }
        }
        SpqPoly { n, mode, separable, cross, constant }
    }

    pub fn zero(n: usize, mode: Mode) -> Self {
        SpqPoly {
            n,
            mode,
            separable: vec![UnivariatePoly::zero(mode); n],
            cross: SymMatrix::zeros(n, mode),
            constant: Scalar::zero(mode),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn separable(&self) -> &[UnivariatePoly] {
        &self.separable
    }

    pub fn cross(&self) -> &SymMatrix {
        &self.cross
    }

    pub fn constant(&self) -> &Scalar {
        &self.constant
    }

    pub fn degree(&self) -> u32 {
        let sep = self.separable.iter().map(|u| if u.is_zero() { 0 } else { u.degree() as u32 }).max().unwrap_or(0);
        let has_cross = (0..self.n).any(|i| (0..self.n).any(|j| !self.cross.get(i, j).is_zero()));
        sep.max(if has_cross { 2 } else { 0 })
    }

    /// True when the cross matrix is identically zero.
    pub fn is_separable(&self) -> bool {
        (0..self.n).all(|i| ((i + 1)..self.n).all(|j| self.cross.get(i, j).is_zero()))
    }

    /// Hessian of the quadratic part: coefficient of `x_i x_j` is
    /// `2 * cross[i][j]`, so the Hessian contribution is exactly
    /// `2 * cross` off the diagonal.
    pub fn cross_hessian(&self) -> SymMatrix {
        let mut h = SymMatrix::zeros(self.n, self.mode);
        let two = Scalar::from_int(2, self.mode);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                h.set(i, j, self.cross.get(i, j).mul(&two));
            }
        }
        h
    }

    pub fn eval(&self, x: &[Scalar]) -> Scalar {
        assert_eq!(x.len(), self.n);
        let mut acc = self.constant.clone();
        for (i, u) in self.separable.iter().enumerate() {
            acc = acc.add(&u.eval(&x[i]));
        }
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let c = self.cross.get(i, j);
                if !c.is_zero() {
                    acc = acc.add(&Scalar::from_int(2, self.mode).mul(&c).mul(&x[i]).mul(&x[j]));
                }
            }
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        let mut acc = self.constant.to_f64();
        for (i, u) in self.separable.iter().enumerate() {
            acc += u.eval_f64(x[i]);
        }
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                acc += 2.0 * self.cross.get(i, j).to_f64() * x[i] * x[j];
            }
        }
        acc
    }

    pub fn to_dense(&self) -> DensePoly {
        let mut p = DensePoly::zero(self.n, self.mode);
        p.add_term(ExponentVector::constant(self.n), self.constant.clone());
        for (i, u) in self.separable.iter().enumerate() {
            for (k, c) in u.coeffs().iter().enumerate() {
                if k > 0 {
                    p.add_term(ExponentVector::unit(self.n, i, k as u32), c.clone());
                }
            }
        }
        let two = Scalar::from_int(2, self.mode);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let c = self.cross.get(i, j);
                if c.is_zero() {
                    continue;
                }
                let mut e = vec![0u32; self.n];
                e[i] = 1;
                e[j] = 1;
                p.add_term(ExponentVector(e), c.mul(&two));
            }
        }
        p
    }

    pub fn convert_mode(&self, mode: Mode) -> SpqPoly {
        SpqPoly {
            n: self.n,
            mode,
            separable: self.separable.iter().map(|u| u.convert_mode(mode)).collect(),
            cross: self.cross.convert_mode(mode),
            constant: self.constant.convert(mode),
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        let mut m = self.constant.to_f64().abs();
        for u in &self.separable {
            m = m.max(u.max_abs_coeff());
        }
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                m = m.max(2.0 * self.cross.get(i, j).to_f64().abs());
            }
        }
        m
    }
}

/// Canonicalizes a polynomial into SPQ form. Fails with the first offending
/// monomial (in the written order, highest first) when `p` is not SPQ.
pub fn to_spq(p: &DensePoly) -> Result<SpqPoly, PolyError> {
    // Float-mode SDP output carries rounding dust; prune it first so the
    // classification is by structural support.
    let p = p.pruned(1e-12);
    let n = p.n();
    let mode = p.mode();
    let mut separable = vec![UnivariatePoly::zero(mode); n];
    let mut cross = SymMatrix::zeros(n, mode);
    let mut constant = Scalar::zero(mode);

    for (m, c) in p.terms_written() {
        let support: Vec<usize> = m.support().collect();
        match support.len() {
            0 => constant = c.clone(),
            1 => {
                let var = support[0];
                separable[var].set_coeff(m.0[var] as usize, c.clone());
            }
            2 if m.0[support[0]] == 1 && m.0[support[1]] == 1 => {
                let half = c.div(&Scalar::from_int(2, mode));
                cross.set(support[0], support[1], half);
            }
            _ => return Err(PolyError::NotSpq { offender: m.clone() }),
        }
    }
    Ok(SpqPoly { n, mode, separable, cross, constant })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_poly;

    #[test]
    fn lemma_2_6_polynomial_splits_canonically() {
        let p = parse_poly(
            "x1^4 - x1^2 + 2*x1 + x2^4 - x2^2 - 2*x2 + 12/5 - 2*x1*x2",
            2,
            Mode::Exact,
        )
        .unwrap();
        let s = to_spq(&p).unwrap();
        let u1 = &s.separable()[0];
        assert_eq!(u1.coeff(4), Scalar::from_int(1, Mode::Exact));
        assert_eq!(u1.coeff(2), Scalar::from_int(-1, Mode::Exact));
        assert_eq!(u1.coeff(1), Scalar::from_int(2, Mode::Exact));
        let u2 = &s.separable()[1];
        assert_eq!(u2.coeff(1), Scalar::from_int(-2, Mode::Exact));
        assert_eq!(s.cross().get(0, 1), Scalar::from_int(-1, Mode::Exact));
        assert_eq!(*s.constant(), Scalar::from_ratio(12, 5, Mode::Exact));
        // Round trip on the coefficient map.
        assert_eq!(s.to_dense(), p);
    }

    #[test]
    fn motzkin_is_rejected_with_first_offender() {
        let p = parse_poly("x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2 + 1", 2, Mode::Exact).unwrap();
        match to_spq(&p) {
            Err(PolyError::NotSpq { offender }) => {
                assert_eq!(offender, ExponentVector(vec![4, 2]));
            }
            other => panic!("expected NotSpq, got {other:?}"),
        }
    }

    #[test]
    fn pure_quadratic() {
        let p = parse_poly("x1^2 + 4*x1*x2 + x2^2", 2, Mode::Exact).unwrap();
        let s = to_spq(&p).unwrap();
        assert_eq!(s.separable()[0].coeff(2), Scalar::from_int(1, Mode::Exact));
        assert_eq!(s.separable()[1].coeff(2), Scalar::from_int(1, Mode::Exact));
        assert_eq!(s.cross().get(0, 1), Scalar::from_int(2, Mode::Exact));
        assert_eq!(s.to_dense(), p);
    }
}
