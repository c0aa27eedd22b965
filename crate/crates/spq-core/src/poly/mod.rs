//! Polynomial representations: sparse multivariate maps, univariate
//! coefficient vectors, the canonical SPQ form, and monomial bases.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::scalar::{Mode, Scalar};

pub mod basis;
pub mod parse;
pub mod spq;

pub use basis::MonomialBasis;
pub use spq::SpqPoly;

/// Exponent vector of a monomial; entry `i` is the power of `x_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn constant(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn unit(n: usize, var: usize, power: u32) -> Self {
        let mut e = vec![0; n];
        e[var] = power;
        ExponentVector(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices of variables with nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        debug_assert_eq!(self.len(), other.len());
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

// Graded lexicographic with x1 > x2 > ...: lower total degree first, and
// within a degree the x1-heaviest monomial first (the ordering used for
// every monomial vector in this crate).
impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Errors from polynomial construction and arithmetic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("variable index {index} out of range (n = {n})")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("scalar mode mismatch")]
    ModeMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not an SPQ polynomial: offending monomial {offender}")]
    NotSpq { offender: ExponentVector },
    #[error("not univariate-plus-quadratic: {reason}")]
    NotUniPlusQuad { reason: String },
}

/// Sparse multivariate polynomial over a single scalar mode.
///
/// Invariants: no zero coefficients are stored, every exponent vector has
/// length `n`, and all coefficients share `mode`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensePoly {
    n: usize,
    mode: Mode,
    terms: BTreeMap<ExponentVector, Scalar>,
}

impl DensePoly {
    pub fn zero(n: usize, mode: Mode) -> Self {
        DensePoly { n, mode, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        let mode = c.mode();
        let mut p = DensePoly::zero(n, mode);
        p.add_term(ExponentVector::constant(n), c);
        p
    }

    /// The monomial `x_{var+1}^power` with coefficient `c`.
    pub fn monomial(n: usize, var: usize, power: u32, c: Scalar) -> Self {
        let mode = c.mode();
        let mut p = DensePoly::zero(n, mode);
        p.add_term(ExponentVector::unit(n, var, power), c);
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &Scalar)> {
        self.terms.iter()
    }

    /// Terms in the conventional written order: degree descending, and within
    /// a degree the x1-heaviest monomial first.
    pub fn terms_written(&self) -> Vec<(&ExponentVector, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then_with(|| b.0.cmp(&a.0)));
        v
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn coeff(&self, m: &ExponentVector) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| Scalar::zero(self.mode))
    }

    /// Adds `c` to the coefficient of `m`, dropping the term if it cancels.
    pub fn add_term(&mut self, m: ExponentVector, c: Scalar) {
        assert_eq!(m.len(), self.n, "exponent vector length != n");
        assert_eq!(c.mode(), self.mode, "scalar mode mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn set_coeff(&mut self, m: ExponentVector, c: Scalar) {
        assert_eq!(m.len(), self.n);
        if c.is_zero() {
            self.terms.remove(&m);
        } else {
            assert_eq!(c.mode(), self.mode);
            self.terms.insert(m, c);
        }
    }

    fn check_compatible(&self, other: &DensePoly) -> Result<(), PolyError> {
        if self.mode != other.mode {
            return Err(PolyError::ModeMismatch);
        }
        if self.n != other.n {
            return Err(PolyError::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &DensePoly) -> Result<DensePoly, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DensePoly) -> Result<DensePoly, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.neg());
        }
        Ok(out)
    }

    pub fn neg(&self) -> DensePoly {
        let mut out = DensePoly::zero(self.n, self.mode);
        for (m, c) in self.terms() {
            out.terms.insert(m.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, k: &Scalar) -> Result<DensePoly, PolyError> {
        if k.mode() != self.mode {
            return Err(PolyError::ModeMismatch);
        }
        let mut out = DensePoly::zero(self.n, self.mode);
        if k.is_zero() {
            return Ok(out);
        }
        for (m, c) in self.terms() {
            let v = c.mul(k);
            if !v.is_zero() {
                out.terms.insert(m.clone(), v);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &DensePoly) -> Result<DensePoly, PolyError> {
        self.check_compatible(other)?;
        let mut out = DensePoly::zero(self.n, self.mode);
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                out.add_term(ma.add(mb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub fn eval(&self, x: &[Scalar]) -> Result<Scalar, PolyError> {
        if x.len() != self.n {
            return Err(PolyError::DimensionMismatch { expected: self.n, got: x.len() });
        }
        for v in x {
            if v.mode() != self.mode {
                return Err(PolyError::ModeMismatch);
            }
        }
        // Per-variable power tables up to the maximum degree present.
        let mut max_deg = vec![0u32; self.n];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                max_deg[i] = max_deg[i].max(e);
            }
        }
        let pow: Vec<Vec<Scalar>> = (0..self.n)
            .map(|i| {
                let mut v = Vec::with_capacity(max_deg[i] as usize + 1);
                v.push(Scalar::one(self.mode));
                for k in 1..=max_deg[i] as usize {
                    let next = v[k - 1].mul(&x[i]);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = Scalar::zero(self.mode);
        for (m, c) in self.terms() {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&pow[i][e as usize]);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Fast float evaluation (coefficients converted once per call).
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        let mut acc = 0.0;
        for (m, c) in self.terms() {
            let mut t = c.to_f64();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= x[i];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn partial(&self, var: usize) -> DensePoly {
        let mut out = DensePoly::zero(self.n, self.mode);
        for (m, c) in self.terms() {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut me = m.clone();
            me.0[var] = e - 1;
            out.add_term(me, c.mul(&Scalar::from_int(e as i64, self.mode)));
        }
        out
    }

    pub fn gradient(&self) -> Vec<DensePoly> {
        (0..self.n).map(|i| self.partial(i)).collect()
    }

    pub fn hessian(&self) -> Vec<Vec<DensePoly>> {
        let grad = self.gradient();
        let mut h = vec![vec![DensePoly::zero(self.n, self.mode); self.n]; self.n];
        for i in 0..self.n {
            for j in i..self.n {
                let hij = grad[i].partial(j);
                h[j][i] = hij.clone();
                h[i][j] = hij;
            }
        }
        h
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Drops float-mode coefficients below `rel_tol * max|coeff|`.
    pub fn pruned(&self, rel_tol: f64) -> DensePoly {
        if self.mode == Mode::Exact {
            return self.clone();
        }
        let cutoff = rel_tol * self.max_abs_coeff();
        let mut out = DensePoly::zero(self.n, self.mode);
        for (m, c) in self.terms() {
            if c.to_f64().abs() > cutoff {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn convert_mode(&self, mode: Mode) -> DensePoly {
        let mut out = DensePoly::zero(self.n, mode);
        for (m, c) in self.terms() {
            out.add_term(m.clone(), c.convert(mode));
        }
        out
    }

    /// Extends the variable count to `n >= self.n` (new variables unused).
    pub fn extend_vars(&self, n: usize) -> DensePoly {
        assert!(n >= self.n);
        let mut out = DensePoly::zero(n, self.mode);
        for (m, c) in self.terms() {
            let mut e = m.0.clone();
            e.resize(n, 0);
            out.terms.insert(ExponentVector(e), c.clone());
        }
        out
    }

    /// Coefficient vector in the order of `basis`; fails if the support is
    /// not contained in the basis.
    pub fn coeff_vector(&self, basis: &[ExponentVector]) -> Option<Vec<Scalar>> {
        let index: std::collections::HashMap<&ExponentVector, usize> =
            basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut v = vec![Scalar::zero(self.mode); basis.len()];
        for (m, c) in self.terms() {
            let &i = index.get(m)?;
            v[i] = c.clone();
        }
        Some(v)
    }
}

impl fmt::Display for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Highest monomial first, the way the polynomials are written on paper.
        for (k, (m, c)) in self.terms_written().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = m.degree() == 0;
            let is_unit = mag == Scalar::one(self.mode);
            if is_const {
                write!(f, "{mag}")?;
            } else if is_unit {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Univariate polynomial, coefficients in ascending degree.
///
/// Invariant: the leading coefficient is nonzero unless the polynomial is
/// identically zero (empty coefficient vector).
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariatePoly {
    mode: Mode,
    coeffs: Vec<Scalar>,
}

impl UnivariatePoly {
    pub fn zero(mode: Mode) -> Self {
        UnivariatePoly { mode, coeffs: Vec::new() }
    }

    pub fn new(mode: Mode, coeffs: Vec<Scalar>) -> Self {
        let mut u = UnivariatePoly { mode, coeffs };
        u.trim();
        u
    }

    pub fn from_f64(coeffs: &[f64]) -> Self {
        UnivariatePoly::new(Mode::Float, coeffs.iter().map(|&c| Scalar::from_f64(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Scalar::zero(self.mode))
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| Scalar::zero(self.mode))
    }

    pub fn set_coeff(&mut self, k: usize, c: Scalar) {
        assert_eq!(c.mode(), self.mode);
        if k >= self.coeffs.len() {
            if c.is_zero() {
                return;
            }
            self.coeffs.resize(k + 1, Scalar::zero(self.mode));
        }
        self.coeffs[k] = c;
        self.trim();
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(self.mode);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64();
        }
        acc
    }

    pub fn derivative(&self) -> UnivariatePoly {
        if self.coeffs.len() <= 1 {
            return UnivariatePoly::zero(self.mode);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul(&Scalar::from_int(k as i64, self.mode)))
            .collect();
        UnivariatePoly::new(self.mode, coeffs)
    }

    pub fn add(&self, other: &UnivariatePoly) -> UnivariatePoly {
        assert_eq!(self.mode, other.mode);
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k).add(&other.coeff(k))).collect();
        UnivariatePoly::new(self.mode, coeffs)
    }

    pub fn sub(&self, other: &UnivariatePoly) -> UnivariatePoly {
        assert_eq!(self.mode, other.mode);
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k).sub(&other.coeff(k))).collect();
        UnivariatePoly::new(self.mode, coeffs)
    }

    pub fn scale(&self, k: &Scalar) -> UnivariatePoly {
        assert_eq!(self.mode, k.mode());
        UnivariatePoly::new(self.mode, self.coeffs.iter().map(|c| c.mul(k)).collect())
    }

    pub fn mul(&self, other: &UnivariatePoly) -> UnivariatePoly {
        assert_eq!(self.mode, other.mode);
        if self.is_zero() || other.is_zero() {
            return UnivariatePoly::zero(self.mode);
        }
        let mut coeffs = vec![Scalar::zero(self.mode); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        UnivariatePoly::new(self.mode, coeffs)
    }

    pub fn convert_mode(&self, mode: Mode) -> UnivariatePoly {
        UnivariatePoly::new(mode, self.coeffs.iter().map(|c| c.convert(mode)).collect())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Embeds as a polynomial in `x_{var+1}` among `n` variables.
    pub fn to_dense(&self, n: usize, var: usize) -> DensePoly {
        let mut p = DensePoly::zero(n, self.mode);
        for (k, c) in self.coeffs.iter().enumerate() {
            p.add_term(ExponentVector::unit(n, var, k as u32), c.clone());
        }
        p
    }

    /// The univariate part of `p` in variable `var` (monomials involving only
    /// that variable, excluding the constant term).
    pub fn from_dense(p: &DensePoly, var: usize) -> UnivariatePoly {
        let mut coeffs = Vec::new();
        for (m, c) in p.terms() {
            let deg_var = m.0[var];
            if deg_var > 0 && m.degree() == deg_var {
                if coeffs.len() <= deg_var as usize {
                    coeffs.resize(deg_var as usize + 1, Scalar::zero(p.mode()));
                }
                coeffs[deg_var as usize] = c.clone();
            }
        }
        UnivariatePoly::new(p.mode(), coeffs)
    }
}

impl fmt::Display for UnivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dense(1, 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(e: &[u32]) -> ExponentVector {
        ExponentVector(e.to_vec())
    }

    #[test]
    fn grlex_order_matches_paper_listing() {
        // 1, x1, x2, x1^2, x1x2, x2^2, x1^3, ...
        let mut v = vec![ev(&[1, 1]), ev(&[0, 0]), ev(&[2, 0]), ev(&[0, 1]), ev(&[1, 0]), ev(&[0, 2]), ev(&[3, 0])];
        v.sort();
        let expect = vec![ev(&[0, 0]), ev(&[1, 0]), ev(&[0, 1]), ev(&[2, 0]), ev(&[1, 1]), ev(&[0, 2]), ev(&[3, 0])];
        assert_eq!(v, expect);
    }

    #[test]
    fn product_and_cancellation() {
        let mode = Mode::Exact;
        // (x1+x2)*(x1-x2) = x1^2 - x2^2
        let mut a = DensePoly::zero(2, mode);
        a.add_term(ev(&[1, 0]), Scalar::one(mode));
        a.add_term(ev(&[0, 1]), Scalar::one(mode));
        let mut b = DensePoly::zero(2, mode);
        b.add_term(ev(&[1, 0]), Scalar::one(mode));
        b.add_term(ev(&[0, 1]), Scalar::from_int(-1, mode));
        let p = a.mul(&b).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&ev(&[2, 0])), Scalar::one(mode));
        assert_eq!(p.coeff(&ev(&[0, 2])), Scalar::from_int(-1, mode));
        // p + (-1)p = 0
        assert!(p.add(&p.neg()).unwrap().is_zero());
    }

    #[test]
    fn gradient_and_hessian_basics() {
        let mode = Mode::Exact;
        // p = x1^2: grad (2x1), hess (2)
        let p = DensePoly::monomial(1, 0, 2, Scalar::one(mode));
        let g = p.gradient();
        assert_eq!(g[0].coeff(&ev(&[1])), Scalar::from_int(2, mode));
        let h = p.hessian();
        assert_eq!(h[0][0].coeff(&ev(&[0])), Scalar::from_int(2, mode));
        // p = x1 x2: hessian [[0,1],[1,0]]
        let mut q = DensePoly::zero(2, mode);
        q.add_term(ev(&[1, 1]), Scalar::one(mode));
        let h = q.hessian();
        assert!(h[0][0].is_zero());
        assert_eq!(h[0][1].coeff(&ev(&[0, 0])), Scalar::one(mode));
        assert_eq!(h[1][0].coeff(&ev(&[0, 0])), Scalar::one(mode));
        assert!(h[1][1].is_zero());
    }

    #[test]
    fn univariate_eval_and_derivative() {
        let u = UnivariatePoly::from_f64(&[1.0, -2.0, 1.0]); // 1 - 2t + t^2
        assert_eq!(u.eval_f64(1.0), 0.0);
        assert_eq!(u.eval_f64(3.0), 4.0);
        let d = u.derivative();
        assert_eq!(d.coeffs().len(), 2);
        assert_eq!(d.eval_f64(3.0), 4.0);
    }
}
