//! Univariate real-root analysis: square-free decomposition and Sturm chains
//! over the rationals, companion-matrix roots in floating point, and the
//! nonnegativity / global-minimum routines built on them.

use ndarray::Array2;
use ndarray_linalg::Eig;
use num::rational::BigRational;
use num::{Signed, Zero};
use thiserror::Error;

use crate::poly::UnivariatePoly;
use crate::scalar::{rationalize, Mode, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UniError {
    #[error("polynomial is unbounded below")]
    UnboundedBelow,
    #[error("zero polynomial has no root structure")]
    ZeroPolynomial,
}

/// Relative cluster-merging distance for float roots.
const CLUSTER_TOL: f64 = 1e-7;

// ---------------------------------------------------------------------------
// Exact helpers over Vec<BigRational> (ascending coefficients).

fn to_rat(u: &UnivariatePoly) -> Vec<BigRational> {
    u.coeffs()
        .iter()
        .map(|c| match c {
            Scalar::Exact(r) => r.clone(),
            Scalar::Float(v) => BigRational::from_float(*v).expect("non-finite coefficient"),
        })
        .collect()
}

fn rat_trim(v: &mut Vec<BigRational>) {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
}

fn rat_deriv(v: &[BigRational]) -> Vec<BigRational> {
    if v.len() <= 1 {
        return Vec::new();
    }
    v.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigRational::from_integer(k.into()))
        .collect()
}

/// Remainder of a by b (b nonzero), normalized to a positive leading
/// coefficient bound via monic division.
fn rat_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    rat_trim(&mut r);
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() >= b.len() && !r.is_empty() {
        let dr = r.len() - 1;
        let f = &r[dr] / lb;
        for k in 0..=db {
            let idx = dr - db + k;
            let delta = &f * &b[k];
            r[idx] = &r[idx] - delta;
        }
        r.pop(); // leading term cancels exactly
        rat_trim(&mut r);
    }
    r
}

fn rat_div_exact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    // Assumes b divides a exactly.
    let mut r = a.to_vec();
    rat_trim(&mut r);
    if r.is_empty() {
        return Vec::new();
    }
    let db = b.len() - 1;
    let lb = &b[db];
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() >= b.len() && !r.is_empty() {
        let dr = r.len() - 1;
        let f = &r[dr] / lb;
        q[dr - db] = f.clone();
        for k in 0..=db {
            let idx = dr - db + k;
            let delta = &f * &b[k];
            r[idx] = &r[idx] - delta;
        }
        r.pop();
        rat_trim(&mut r);
    }
    debug_assert!(r.is_empty(), "inexact polynomial division");
    q
}

/// Monic gcd via the Euclidean algorithm with monic normalization.
fn rat_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    rat_trim(&mut x);
    rat_trim(&mut y);
    while !y.is_empty() {
        let r = rat_rem(&x, &y);
        x = y;
        y = r;
        // Monic normalization controls coefficient growth.
        if let Some(l) = y.last().cloned() {
            if !l.is_zero() {
                for c in y.iter_mut() {
                    *c = &*c / &l;
                }
            }
        }
    }
    if let Some(l) = x.last().cloned() {
        for c in x.iter_mut() {
            *c = &*c / &l;
        }
    }
    x
}

/// Yun's square-free decomposition: returns `(factor, multiplicity)` with
/// each factor square-free, monic, and pairwise coprime.
fn square_free_decomposition(u: &[BigRational]) -> Vec<(Vec<BigRational>, usize)> {
    let mut u = u.to_vec();
    rat_trim(&mut u);
    assert!(!u.is_empty());
    if u.len() == 1 {
        return Vec::new();
    }
    // Make monic.
    let l = u.last().unwrap().clone();
    for c in u.iter_mut() {
        *c = &*c / &l;
    }
    let du = rat_deriv(&u);
    let a0 = rat_gcd(&u, &du);
    if a0.len() == 1 {
        return vec![(u, 1)];
    }
    let mut out = Vec::new();
    let mut b = rat_div_exact(&u, &a0);
    let mut c = rat_div_exact(&du, &a0);
    let mut i = 1usize;
    loop {
        let db = rat_deriv(&b);
        let mut d: Vec<BigRational> = {
            let len = c.len().max(db.len());
            (0..len)
                .map(|k| {
                    let cv = c.get(k).cloned().unwrap_or_else(BigRational::zero);
                    let dv = db.get(k).cloned().unwrap_or_else(BigRational::zero);
                    cv - dv
                })
                .collect()
        };
        rat_trim(&mut d);
        if d.is_empty() {
            if b.len() > 1 {
                out.push((b, i));
            }
            break;
        }
        let f = rat_gcd(&b, &d);
        if f.len() > 1 {
            out.push((f.clone(), i));
        }
        b = rat_div_exact(&b, &f);
        c = rat_div_exact(&d, &f);
        if b.len() == 1 {
            break;
        }
        i += 1;
    }
    out
}

fn sign_at_pos_inf(p: &[BigRational]) -> i32 {
    match p.last() {
        None => 0,
        Some(l) => {
            if l.is_positive() {
                1
            } else {
                -1
            }
        }
    }
}

fn sign_at_neg_inf(p: &[BigRational]) -> i32 {
    match p.last() {
        None => 0,
        Some(l) => {
            let s = if l.is_positive() { 1 } else { -1 };
            if (p.len() - 1) % 2 == 0 {
                s
            } else {
                -s
            }
        }
    }
}

/// Number of distinct real roots of a nonconstant polynomial, by the Sturm
/// chain evaluated at minus and plus infinity. Exact.
pub(crate) fn sturm_real_root_count(p: &[BigRational]) -> usize {
    let mut chain: Vec<Vec<BigRational>> = Vec::new();
    let mut p0 = p.to_vec();
    rat_trim(&mut p0);
    if p0.len() <= 1 {
        return 0;
    }
    let p1 = rat_deriv(&p0);
    chain.push(p0);
    chain.push(p1);
    loop {
        let k = chain.len();
        let r = rat_rem(&chain[k - 2], &chain[k - 1]);
        if r.is_empty() {
            break;
        }
        let mut neg = r;
        for c in neg.iter_mut() {
            *c = -c.clone();
        }
        // Positive scaling keeps signs and controls growth.
        let scale = neg.last().unwrap().abs();
        for c in neg.iter_mut() {
            *c = &*c / &scale;
        }
        chain.push(neg);
    }
    let count_changes = |signs: Vec<i32>| {
        let s: Vec<i32> = signs.into_iter().filter(|&x| x != 0).collect();
        s.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let v_neg = count_changes(chain.iter().map(|q| sign_at_neg_inf(q)).collect());
    let v_pos = count_changes(chain.iter().map(|q| sign_at_pos_inf(q)).collect());
    v_neg - v_pos
}

/// Exact sign of u at a rational point.
fn rat_eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

// ---------------------------------------------------------------------------
// Float root finding.

/// Real eigenvalues of the companion matrix, keeping eigenvalues with
/// relatively small imaginary part.
fn companion_real_roots(coeffs: &[f64]) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    while c.last().map_or(false, |&v| v == 0.0) {
        c.pop();
    }
    let d = c.len().saturating_sub(1);
    if d == 0 {
        return Vec::new();
    }
    if d == 1 {
        return vec![-c[0] / c[1]];
    }
    if d == 2 {
        let (a, b, c0) = (c[2], c[1], c[0]);
        let disc = b * b - 4.0 * a * c0;
        if disc < 0.0 {
            return Vec::new();
        }
        let s = disc.sqrt();
        let q = -0.5 * (b + b.signum() * s);
        let mut roots = if b == 0.0 {
            vec![s / (2.0 * a), -s / (2.0 * a)]
        } else {
            vec![q / a, if q != 0.0 { c0 / q } else { 0.0 }]
        };
        roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
        return roots;
    }
    let lead = c[d];
    let mut m = Array2::<f64>::zeros((d, d));
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    let (eigs, _) = m.eig().expect("companion eigendecomposition failed");
    let mut roots: Vec<f64> = eigs
        .iter()
        .filter(|z| z.im.abs() <= CLUSTER_TOL * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect();
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}

/// Newton polish; keeps the best iterate by |u|.
fn polish_root(coeffs: &[f64], mut x: f64) -> f64 {
    let eval = |x: f64| {
        let mut acc = 0.0;
        for c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    let dcoeffs: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    let deval = |x: f64| {
        let mut acc = 0.0;
        for c in dcoeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    let mut best = x;
    let mut best_val = eval(x).abs();
    for _ in 0..4 {
        let d = deval(x);
        if d == 0.0 {
            break;
        }
        x -= eval(x) / d;
        let v = eval(x).abs();
        if v < best_val {
            best_val = v;
            best = x;
        }
    }
    best
}

fn cluster(mut roots: Vec<f64>) -> Vec<(f64, usize)> {
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut out: Vec<(f64, usize)> = Vec::new();
    for r in roots {
        match out.last_mut() {
            Some((c, k)) if (r - *c).abs() <= CLUSTER_TOL * (1.0 + r.abs()) => {
                // Running mean of the cluster.
                *c = (*c * (*k as f64) + r) / (*k as f64 + 1.0);
                *k += 1;
            }
            _ => out.push((r, 1)),
        }
    }
    out
}

/// Real roots with multiplicities.
///
/// Exact mode: Yun square-free decomposition, then float refinement of each
/// square-free factor (multiplicities are exact). Float mode:
/// companion-matrix eigenvalues with cluster merging.
pub fn uni_roots(u: &UnivariatePoly) -> Result<Vec<(f64, usize)>, UniError> {
    if u.is_zero() {
        return Err(UniError::ZeroPolynomial);
    }
    match u.mode() {
        Mode::Exact => {
            let parts = square_free_decomposition(&to_rat(u));
            let mut out: Vec<(f64, usize)> = Vec::new();
            for (factor, mult) in parts {
                let fc: Vec<f64> = factor.iter().map(|r| Scalar::Exact(r.clone()).to_f64()).collect();
                for r in companion_real_roots(&fc) {
                    out.push((polish_root(&fc, r), mult));
                }
            }
            out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            Ok(out)
        }
        Mode::Float => {
            let coeffs: Vec<f64> = u.coeffs().iter().map(|c| c.to_f64()).collect();
            let roots = companion_real_roots(&coeffs);
            Ok(cluster(roots))
        }
    }
}

/// Why a nonnegativity verdict was reached.
#[derive(Debug, Clone, PartialEq)]
pub enum NonnegReason {
    ConstantSign,
    OddDegree,
    NegativeLeadingCoeff,
    OddMultiplicityRoot(f64),
    NegativeValue { at: f64, value: f64 },
    EvenRootsAndPositiveSample,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonnegVerdict {
    pub nonneg: bool,
    pub reason: NonnegReason,
}

/// Global nonnegativity of a univariate polynomial.
///
/// True iff `u` is a nonnegative constant, or has even degree, positive
/// leading coefficient, only even-multiplicity real roots, and a positive
/// value at a non-root sample. Exact mode decides root parity by Sturm
/// counts on the square-free factors (no tolerances).
pub fn uni_nonneg(u: &UnivariatePoly) -> NonnegVerdict {
    if u.is_zero() {
        return NonnegVerdict { nonneg: true, reason: NonnegReason::ConstantSign };
    }
    if u.degree() == 0 {
        return NonnegVerdict { nonneg: !u.coeff(0).is_negative(), reason: NonnegReason::ConstantSign };
    }
    if u.degree() % 2 == 1 {
        return NonnegVerdict { nonneg: false, reason: NonnegReason::OddDegree };
    }
    if u.leading().is_negative() {
        return NonnegVerdict { nonneg: false, reason: NonnegReason::NegativeLeadingCoeff };
    }
    match u.mode() {
        Mode::Exact => {
            let parts = square_free_decomposition(&to_rat(u));
            for (factor, mult) in &parts {
                if mult % 2 == 1 && sturm_real_root_count(factor) > 0 {
                    let fc: Vec<f64> = factor.iter().map(|r| Scalar::Exact(r.clone()).to_f64()).collect();
                    let root = companion_real_roots(&fc).first().copied().unwrap_or(0.0);
                    return NonnegVerdict {
                        nonneg: false,
                        reason: NonnegReason::OddMultiplicityRoot(polish_root(&fc, root)),
                    };
                }
            }
            // All real roots have even multiplicity and the leading
            // coefficient is positive, so u >= 0 everywhere.
            NonnegVerdict { nonneg: true, reason: NonnegReason::EvenRootsAndPositiveSample }
        }
        Mode::Float => {
            let roots = uni_roots(u).expect("nonzero");
            let scale = 1.0 + u.max_abs_coeff();
            for &(r, mult) in &roots {
                if mult % 2 == 1 {
                    // Confirm an actual sign change near the root.
                    let h = 10.0 * CLUSTER_TOL * (1.0 + r.abs());
                    let v = u.eval_f64(r - h).min(u.eval_f64(r + h));
                    if v < 0.0 {
                        return NonnegVerdict { nonneg: false, reason: NonnegReason::OddMultiplicityRoot(r) };
                    }
                }
            }
            // Sample between roots and outside the root range.
            let mut samples = vec![0.0];
            let bound = cauchy_root_bound(u);
            samples.push(-bound - 1.0);
            samples.push(bound + 1.0);
            for w in roots.windows(2) {
                samples.push(0.5 * (w[0].0 + w[1].0));
            }
            for &s in &samples {
                let v = u.eval_f64(s);
                if v < -1e-9 * scale {
                    return NonnegVerdict { nonneg: false, reason: NonnegReason::NegativeValue { at: s, value: v } };
                }
            }
            NonnegVerdict { nonneg: true, reason: NonnegReason::EvenRootsAndPositiveSample }
        }
    }
}

/// Cauchy bound: every real root lies in `[-b, b]`.
pub fn cauchy_root_bound(u: &UnivariatePoly) -> f64 {
    if u.degree() == 0 {
        return 1.0;
    }
    let lead = u.leading().to_f64().abs();
    let m = u.coeffs()[..u.degree()].iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
    1.0 + m / lead
}

/// Global minimum of a bounded-below univariate polynomial, via the real
/// critical points. Ties break toward the smallest argmin.
pub fn uni_global_min(u: &UnivariatePoly) -> Result<(f64, f64), UniError> {
    if u.is_zero() {
        return Ok((0.0, 0.0));
    }
    if u.degree() == 0 {
        return Ok((0.0, u.coeff(0).to_f64()));
    }
    if u.degree() % 2 == 1 || u.leading().is_negative() {
        return Err(UniError::UnboundedBelow);
    }
    let du = u.derivative();
    let crit = uni_roots(&du)?;
    let mut best: Option<(f64, f64)> = None;
    for &(x, _) in &crit {
        let v = u.eval_f64(x);
        let better = match best {
            None => true,
            Some((_, bv)) => v < bv - 0.0,
        };
        if better {
            best = Some((x, v));
        }
    }
    Ok(best.unwrap_or((0.0, u.eval_f64(0.0))))
}

/// Exact global minimum search restricted to rational candidates: exact
/// rational roots of u' plus rationalized float critical points; returns the
/// candidate with the smallest exact value. The result is an upper bound on
/// the true minimum, exact whenever the argmin is rational.
pub fn uni_min_rational_candidates(u: &UnivariatePoly) -> Result<(BigRational, BigRational), UniError> {
    assert_eq!(u.mode(), Mode::Exact);
    if u.is_zero() || u.degree() == 0 {
        let v = if u.is_zero() { BigRational::zero() } else { u.coeff(0).as_rational().clone() };
        return Ok((BigRational::zero(), v));
    }
    if u.degree() % 2 == 1 || u.leading().is_negative() {
        return Err(UniError::UnboundedBelow);
    }
    let p = to_rat(u);
    let du = rat_deriv(&p);
    let mut candidates: Vec<BigRational> = rational_roots(&du);
    for (r, _) in uni_roots(&u.derivative())? {
        candidates.push(rationalize(r, 1_000_000_000_000));
    }
    candidates.push(BigRational::zero());
    let mut best: Option<(BigRational, BigRational)> = None;
    for x in candidates {
        let v = rat_eval(&p, &x);
        let better = match &best {
            None => true,
            Some((bx, bv)) => v < *bv || (v == *bv && x < *bx),
        };
        if better {
            best = Some((x, v));
        }
    }
    Ok(best.unwrap())
}

/// All rational roots of an exact polynomial, by clearing denominators and
/// testing divisors of the extreme coefficients.
pub fn rational_roots(p: &[BigRational]) -> Vec<BigRational> {
    use num::bigint::BigInt;
    use num::Integer;
    let mut p = p.to_vec();
    rat_trim(&mut p);
    if p.len() <= 1 {
        return Vec::new();
    }
    // Factor out t^k.
    let mut out = Vec::new();
    let mut start = 0;
    while p[start].is_zero() {
        start += 1;
    }
    if start > 0 {
        out.push(BigRational::zero());
        p.drain(0..start);
    }
    if p.len() <= 1 {
        return out;
    }
    // Clear denominators to integer coefficients.
    let mut den = BigInt::from(1);
    for c in &p {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let a0 = ints[0].abs();
    let an = ints.last().unwrap().abs();
    let div0 = small_divisors(&a0);
    let divn = small_divisors(&an);
    for num in &div0 {
        for d in &divn {
            for sign in [1i64, -1] {
                let cand = BigRational::new(num * BigInt::from(sign), d.clone());
                if rat_eval(&p, &cand).is_zero() && !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
    }
    out
}

fn small_divisors(v: &num::bigint::BigInt) -> Vec<num::bigint::BigInt> {
    use num::bigint::BigInt;
    use num::ToPrimitive;
    // Divisor enumeration is only practical for moderate integers; fall back
    // to {1, |v|} otherwise (the float-candidate path still applies).
    match v.to_u64() {
        Some(x) if x > 0 && x <= 1_000_000 => {
            let mut divs = Vec::new();
            let mut d = 1u64;
            while d * d <= x {
                if x % d == 0 {
                    divs.push(BigInt::from(d));
                    divs.push(BigInt::from(x / d));
                }
                d += 1;
            }
            divs.sort();
            divs.dedup();
            divs
        }
        _ => {
            if v.is_zero() {
                vec![BigInt::from(1)]
            } else {
                vec![BigInt::from(1), v.abs()]
            }
        }
    }
}

/// A certified rational lower bound on `min u`, within `eps` of the true
/// minimum. If the minimum is attained at a rational point the exact value is
/// returned; otherwise a Sturm-certified bisection bound. Requires `u`
/// bounded below.
pub fn certified_lower_bound(u: &UnivariatePoly, eps: f64) -> Result<BigRational, UniError> {
    assert_eq!(u.mode(), Mode::Exact);
    if u.degree() == 0 || u.is_zero() {
        let v = if u.is_zero() { BigRational::zero() } else { u.coeff(0).as_rational().clone() };
        return Ok(v);
    }
    if u.degree() % 2 == 1 || u.leading().is_negative() {
        return Err(UniError::UnboundedBelow);
    }
    // Exact path: a rational candidate whose shift leaves u nonnegative is
    // the exact minimum.
    if let Ok((_, v)) = uni_min_rational_candidates(u) {
        let mut shifted = u.clone();
        shifted.set_coeff(0, u.coeff(0).sub(&Scalar::Exact(v.clone())));
        if uni_nonneg(&shifted).nonneg {
            return Ok(v);
        }
    }
    // Bisection on b with the exact predicate "u - b has no real roots".
    let p = to_rat(u);
    let no_roots_above = |b: &BigRational| -> bool {
        let mut q = p.clone();
        q[0] = &q[0] - b;
        sturm_real_root_count(&q) == 0
    };
    let (_, float_min) = uni_global_min(u)?;
    let pad = 1.0 + float_min.abs();
    let mut lo = rationalize(float_min - pad, 1_000_000_000);
    for _ in 0..64 {
        if no_roots_above(&lo) {
            break;
        }
        lo = &lo - BigRational::from_float(pad).unwrap();
    }
    if !no_roots_above(&lo) {
        return Err(UniError::UnboundedBelow);
    }
    let mut hi = rationalize(float_min + pad, 1_000_000_000);
    let eps = BigRational::from_float(eps.max(1e-15)).unwrap();
    while &hi - &lo > eps {
        let mid = (&hi + &lo) / BigRational::from_integer(2.into());
        if no_roots_above(&mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(coeffs: &[i64]) -> UnivariatePoly {
        UnivariatePoly::new(
            Mode::Exact,
            coeffs.iter().map(|&c| Scalar::from_int(c, Mode::Exact)).collect(),
        )
    }

    #[test]
    fn simple_roots() {
        // t^2 - 1
        let roots = uni_roots(&exact(&[-1, 0, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].0 + 1.0).abs() < 1e-9 && roots[0].1 == 1);
        assert!((roots[1].0 - 1.0).abs() < 1e-9 && roots[1].1 == 1);
    }

    #[test]
    fn double_roots_exact_multiplicity() {
        // (t^2-1)^2 = t^4 - 2t^2 + 1
        let roots = uni_roots(&exact(&[1, 0, -2, 0, 1])).unwrap();
        assert_eq!(roots.iter().map(|r| r.1).collect::<Vec<_>>(), vec![2, 2]);
    }

    #[test]
    fn triple_root_via_gcd_chain() {
        // t^3 - 3t^2 + 3t - 1 = (t-1)^3
        let roots = uni_roots(&exact(&[-1, 3, -3, 1])).unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0].0 - 1.0).abs() < 1e-9);
        assert_eq!(roots[0].1, 3);
    }

    #[test]
    fn float_mode_cluster_merging() {
        // (t^2-1)^2 in float mode: double roots found by clustering.
        let u = UnivariatePoly::from_f64(&[1.0, 0.0, -2.0, 0.0, 1.0]);
        let roots = uni_roots(&u).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].1 + roots[1].1, 4);
    }

    #[test]
    fn nonneg_examples() {
        assert!(uni_nonneg(&exact(&[1, 0, -2, 0, 1])).nonneg); // (t^2-1)^2
        let v = uni_nonneg(&exact(&[1, 0, 0, 1])); // t^3 + 1
        assert!(!v.nonneg);
        assert_eq!(v.reason, NonnegReason::OddDegree);
        assert!(uni_nonneg(&exact(&[2, -2, 1])).nonneg); // t^2 - 2t + 2
        assert!(!uni_nonneg(&exact(&[-1, 0, 1])).nonneg); // t^2 - 1
    }

    #[test]
    fn global_min_examples() {
        let (x, v) = uni_global_min(&exact(&[0, 0, 1])).unwrap(); // t^2
        assert!(x.abs() < 1e-9 && v.abs() < 1e-9);
        // t^4 - 4t: critical point at t = 1, min -3.
        let (x, v) = uni_global_min(&exact(&[0, -4, 0, 0, 1])).unwrap();
        assert!((x - 1.0).abs() < 1e-9);
        assert!((v + 3.0).abs() < 1e-9);
        // Constant 5: argmin convention 0.
        let (x, v) = uni_global_min(&exact(&[5])).unwrap();
        assert_eq!((x, v), (0.0, 5.0));
        assert_eq!(uni_global_min(&exact(&[0, 1])), Err(UniError::UnboundedBelow));
    }

    #[test]
    fn exact_min_at_rational_point() {
        // t^4 - 4t has exact min -3 at t = 1.
        let (x, v) = uni_min_rational_candidates(&exact(&[0, -4, 0, 0, 1])).unwrap();
        assert_eq!(x, BigRational::from_integer(1.into()));
        assert_eq!(v, BigRational::from_integer((-3).into()));
        let b = certified_lower_bound(&exact(&[0, -4, 0, 0, 1]), 1e-9).unwrap();
        assert_eq!(b, BigRational::from_integer((-3).into()));
    }

    #[test]
    fn certified_bound_irrational_argmin() {
        // t^4 - t has min at t = (1/4)^(1/3), value == -3/(4*4^(1/3)).
        let u = exact(&[0, -1, 0, 0, 1]);
        let b = certified_lower_bound(&u, 1e-9).unwrap();
        let truth = -3.0 / (4.0 * 4.0f64.powf(1.0 / 3.0));
        let bf = Scalar::Exact(b).to_f64();
        assert!(bf <= truth + 1e-12, "bound {bf} not below true min {truth}");
        assert!(bf >= truth - 1e-6, "bound {bf} too loose vs {truth}");
    }

    #[test]
    fn sturm_counts() {
        // (t^2-2) has 2 real roots; (t^2+1) has none.
        let two = |v: i64| BigRational::from_integer(v.into());
        assert_eq!(sturm_real_root_count(&[two(-2), two(0), two(1)]), 2);
        assert_eq!(sturm_real_root_count(&[two(1), two(0), two(1)]), 0);
    }
}
