//! Monomial bases and the half-Newton-polytope basis used for Gram
//! matrices. Polytope membership is decided by an exact rational phase-I
//! simplex on the convex-combination system, so boundary lattice points are
//! never lost to rounding.

use num::rational::BigRational;
use num::{Signed, Zero};

use super::{DensePoly, ExponentVector};

/// Ordered list of distinct monomials (graded-lex, x1 > x2 > ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    entries: Vec<ExponentVector>,
}

impl MonomialBasis {
    pub fn new(mut entries: Vec<ExponentVector>) -> Self {
        entries.sort();
        entries.dedup();
        MonomialBasis { entries }
    }

    /// All monomials of degree at most `d` in `n` variables.
    pub fn all_up_to_degree(n: usize, d: u32) -> Self {
        let mut entries = Vec::new();
        let mut cur = vec![0u32; n];
        enumerate_box(&mut cur, 0, d, &mut |e| entries.push(ExponentVector(e.to_vec())));
        MonomialBasis::new(entries)
    }

    pub fn entries(&self) -> &[ExponentVector] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn position(&self, m: &ExponentVector) -> Option<usize> {
        self.entries.binary_search(m).ok()
    }
}

fn enumerate_box(cur: &mut Vec<u32>, var: usize, remaining: u32, f: &mut impl FnMut(&[u32])) {
    if var == cur.len() {
        f(cur);
        return;
    }
    for e in 0..=remaining {
        cur[var] = e;
        enumerate_box(cur, var + 1, remaining - e, f);
    }
    cur[var] = 0;
}

/// Basis for a Gram representation of `p`: all lattice points `a` with `2a`
/// inside the Newton polytope of `p`, graded-lex ordered.
pub fn half_newton_basis(p: &DensePoly) -> MonomialBasis {
    let support: Vec<Vec<i64>> =
        p.terms().map(|(m, _)| m.0.iter().map(|&e| e as i64).collect()).collect();
    if support.is_empty() {
        return MonomialBasis::new(Vec::new());
    }
    let n = p.n();
    let max_deg: i64 = support.iter().map(|s| s.iter().sum()).max().unwrap();
    let axis_max: Vec<i64> =
        (0..n).map(|i| support.iter().map(|s| s[i]).max().unwrap()).collect();

    let mut entries = Vec::new();
    let mut cur = vec![0u32; n];
    enumerate_candidates(&mut cur, 0, &axis_max, max_deg, &mut |alpha| {
        let target: Vec<i64> = alpha.iter().map(|&a| 2 * a as i64).collect();
        if in_convex_hull(&support, &target) {
            entries.push(ExponentVector(alpha.to_vec()));
        }
    });
    MonomialBasis::new(entries)
}

fn enumerate_candidates(
    cur: &mut Vec<u32>,
    var: usize,
    axis_max: &[i64],
    deg_budget: i64,
    f: &mut impl FnMut(&[u32]),
) {
    if var == cur.len() {
        f(cur);
        return;
    }
    let cap = (axis_max[var] / 2).min(deg_budget / 2);
    for e in 0..=cap {
        cur[var] = e as u32;
        enumerate_candidates(cur, var + 1, axis_max, deg_budget - 2 * e, f);
    }
    cur[var] = 0;
}

/// Exact test for `target in conv(points)` via phase-I simplex on
/// `sum λ_k p_k = target, sum λ_k = 1, λ >= 0`.
pub fn in_convex_hull(points: &[Vec<i64>], target: &[i64]) -> bool {
    let n = target.len();
    let rows = n + 1;
    let cols = points.len();
    // Tableau rows: [coefficients | rhs], rhs made nonnegative by row flips.
    let mut a: Vec<Vec<BigRational>> = Vec::with_capacity(rows);
    for r in 0..rows {
        let mut row: Vec<BigRational> = Vec::with_capacity(cols + 1);
        for p in points {
            let v = if r < n { p[r] } else { 1 };
            row.push(BigRational::from_integer(v.into()));
        }
        let rhs = if r < n { target[r] } else { 1 };
        row.push(BigRational::from_integer(rhs.into()));
        if row[cols].is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
        }
        a.push(row);
    }
    simplex_phase1_feasible(&mut a, cols)
}

/// Phase-I simplex with artificial variables and Bland's rule. `a` holds the
/// constraint rows with nonnegative rhs in the last column; returns whether
/// the artificial objective reaches zero.
fn simplex_phase1_feasible(a: &mut [Vec<BigRational>], cols: usize) -> bool {
    let rows = a.len();
    // basis[r] = column index basic in row r; artificial columns are
    // cols..cols+rows (implicit identity, tracked by index only).
    let mut basis: Vec<usize> = (0..rows).map(|r| cols + r).collect();
    // Objective row for minimize sum(artificials): reduced cost of column j
    // is -(sum of a[r][j] over rows with artificial basis).
    let mut obj: Vec<BigRational> = (0..=cols)
        .map(|j| -a.iter().map(|row| row[j].clone()).fold(BigRational::zero(), |s, v| s + v))
        .collect();

    loop {
        // Bland: first column with negative reduced cost.
        let Some(enter) = (0..cols).find(|&j| obj[j].is_negative()) else {
            break;
        };
        // Ratio test, Bland tie-break on smallest basis index.
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for r in 0..rows {
            if a[r][enter].is_positive() {
                let ratio = &a[r][cols] / &a[r][enter];
                let better = match &best {
                    None => true,
                    Some(b) => {
                        ratio < *b || (ratio == *b && basis[r] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(r);
                }
            }
        }
        let Some(lr) = leave else {
            // Unbounded phase-I cannot happen (objective bounded below by 0),
            // but bail out defensively.
            return false;
        };
        // Pivot.
        let piv = a[lr][enter].clone();
        for v in a[lr].iter_mut() {
            *v = &*v / &piv;
        }
        for r in 0..rows {
            if r != lr && !a[r][enter].is_zero() {
                let f = a[r][enter].clone();
                for j in 0..=cols {
                    let delta = &f * &a[lr][j];
                    a[r][j] = &a[r][j] - delta;
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for j in 0..=cols {
                let delta = &f * &a[lr][j];
                obj[j] = &obj[j] - delta;
            }
        }
        basis[lr] = enter;
    }

    // Feasible iff all artificial variables are (value) zero: the phase-I
    // objective value is -obj[cols].
    obj[cols].is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_poly;
    use crate::scalar::Mode;

    fn ev(e: &[u32]) -> ExponentVector {
        ExponentVector(e.to_vec())
    }

    #[test]
    fn hull_membership_exact() {
        let pts = vec![vec![0, 0], vec![6, 0], vec![0, 4]];
        assert!(in_convex_hull(&pts, &[6, 0]));
        assert!(in_convex_hull(&pts, &[3, 2])); // boundary point
        assert!(in_convex_hull(&pts, &[2, 2]));
        assert!(!in_convex_hull(&pts, &[4, 2]));
        assert!(!in_convex_hull(&pts, &[7, 0]));
    }

    #[test]
    fn thm_3_2_basis_has_seven_elements() {
        let p = parse_poly(
            "17*x1^6 - 20*x1^4 + 7*x1^2 + 18*x1 + 18*x2^4 - 19*x2^2 - 19*x2 + 21 - 20*x1*x2",
            2,
            Mode::Exact,
        )
        .unwrap();
        let b = half_newton_basis(&p);
        let expect: Vec<ExponentVector> = vec![
            ev(&[0, 0]),
            ev(&[1, 0]),
            ev(&[0, 1]),
            ev(&[2, 0]),
            ev(&[1, 1]),
            ev(&[0, 2]),
            ev(&[3, 0]),
        ];
        assert_eq!(b.entries(), &expect[..]);
    }

    #[test]
    fn pure_square_basis() {
        let p = parse_poly("x1^2", 1, Mode::Exact).unwrap();
        let b = half_newton_basis(&p);
        assert_eq!(b.entries(), &[ev(&[1])]);
    }

    #[test]
    fn quartic_simplex_basis() {
        let p = parse_poly("x1^4 + x2^4 + 1", 2, Mode::Exact).unwrap();
        let b = half_newton_basis(&p);
        // Independent oracle: enumerate lattice points of
        // conv{(0,0),(4,0),(0,4)} / 2, i.e. all degree <= 2 monomials.
        let expect = MonomialBasis::all_up_to_degree(2, 2);
        assert_eq!(b, expect);
        assert_eq!(b.len(), 6);
    }
}
