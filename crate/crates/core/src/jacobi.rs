//! Jacobi polynomials for arbitrary rational parameters, their two-variable
//! inflation, the Jacobi differential equation, and the exceptional integer
//! parameter set where the family degenerates.
//!
//! The polynomials are built from the denominator-free binomial sum
//!
//! ```text
//! P_a^{alpha,beta}(t) = sum_s C(a+alpha, a-s) C(a+beta, s) ((t-1)/2)^s ((t+1)/2)^{a-s}
//! ```
//!
//! rather than the hypergeometric series: the series normalization divides by
//! `(alpha+1)_k`, which vanishes exactly at the degenerate integer parameters
//! this module has to handle, while the binomial sum is total. The two forms
//! are cross-checked where both are defined (see the tests), as is the
//! Rodrigues formula.
//!
//! For a fixed degree index `ell`, the family collapses on the finite set
//! [`lambda_set`]: there `P_ell^{alpha,beta}` is the zero polynomial, the ODE
//! acquires two independent polynomial solutions of degree at most `ell`, and
//! the three explicit solutions of [`g_solutions`] / [`g_renormalized`]
//! become linearly dependent.

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::linalg;
use crate::poly::Poly;
use crate::rational::{factorial, gen_binomial, pochhammer, rint, rq, Rat};

/// Variable of the one-variable Jacobi polynomials.
pub const T: &str = "t";
/// Variable of the hypergeometric-side solutions, `z = (1 - t)/2`.
pub const ZVAR: &str = "z";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JacobiError {
    #[error("genuine pole at the z^{k} coefficient; the limit does not exist")]
    Pole { k: u32 },
    #[error("({alpha}, {beta}) is not in the exceptional set for ell = {ell}")]
    OutsideExceptionalSet { ell: u32, alpha: i64, beta: i64 },
    #[error("lower hypergeometric parameter hits zero at term {k}")]
    ZeroLowerParameter { k: u32 },
}

/// Parameters `(a, alpha, beta)` of a Jacobi polynomial; `degree` is the
/// index written `a` (or `ell` when it is held fixed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiParams {
    pub degree: u32,
    pub alpha: Rat,
    pub beta: Rat,
}

impl JacobiParams {
    pub fn new(degree: u32, alpha: Rat, beta: Rat) -> JacobiParams {
        JacobiParams { degree, alpha, beta }
    }
}

/// The exceptional integer parameter pairs for a fixed degree index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalSet {
    pub ell: u32,
    pub pairs: BTreeSet<(i64, i64)>,
}

impl ExceptionalSet {
    pub fn contains(&self, alpha: i64, beta: i64) -> bool {
        self.pairs.contains(&(alpha, beta))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// `P_a^{alpha,beta}(t)` via the binomial sum, valid for all rational
/// parameters including the degenerate integer cases.
pub fn jacobi_poly(p: &JacobiParams) -> Poly {
    let a = p.degree;
    let t = Poly::var(T);
    let half = rq(1, 2);
    let lo = (&t - &Poly::one()).scale(&half); // (t - 1)/2
    let hi = (&t + &Poly::one()).scale(&half); // (t + 1)/2
    let mut acc = Poly::zero();
    for s in 0..=a {
        let c = gen_binomial(&(&p.alpha + rint(a as i64)), a - s)
            * gen_binomial(&(&p.beta + rint(a as i64)), s);
        if c.is_zero() {
            continue;
        }
        let term = &lo.pow(s) * &hi.pow(a - s);
        acc = &acc + &term.scale(&c);
    }
    acc
}

/// Two-variable inflation `P_a^{alpha,beta}(x, y) = y^a P_a^{alpha,beta}(2x/y + 1)`,
/// expanded as an exact homogeneous polynomial of degree `a`.
///
/// Substituting `t = 2x/y + 1` into the binomial sum gives `(t-1)/2 = x/y`
/// and `(t+1)/2 = (x+y)/y`, so the inflation is the denominator-free sum
/// `sum_s C(a+alpha, a-s) C(a+beta, s) x^s (x+y)^{a-s}`.
pub fn jacobi_inflate(p: &JacobiParams) -> Poly {
    let a = p.degree;
    let x = Poly::var(crate::bidiff::SYM_X);
    let xy = &x + &Poly::var(crate::bidiff::SYM_Y);
    let mut acc = Poly::zero();
    for s in 0..=a {
        let c = gen_binomial(&(&p.alpha + rint(a as i64)), a - s)
            * gen_binomial(&(&p.beta + rint(a as i64)), s);
        if c.is_zero() {
            continue;
        }
        let term = &x.pow(s) * &xy.pow(a - s);
        acc = &acc + &term.scale(&c);
    }
    acc
}

/// Left-hand side of the Jacobi differential equation applied to `f(t)`:
/// `(1 - t^2) f'' + (beta - alpha - (alpha + beta + 2) t) f' + a (a + alpha + beta + 1) f`.
pub fn jacobi_ode_residual(p: &JacobiParams, f: &Poly) -> Poly {
    let t = Poly::var(T);
    let one_minus_t2 = &Poly::one() - &(&t * &t);
    let first_coeff =
        &Poly::constant(&p.beta - &p.alpha) - &t.scale(&(&p.alpha + &p.beta + rint(2)));
    let mult = rint(p.degree as i64) * (rint(p.degree as i64) + &p.alpha + &p.beta + rint(1));
    let f1 = f.diff(T);
    let f2 = f1.diff(T);
    &(&(&one_minus_t2 * &f2) + &(&first_coeff * &f1)) + &f.scale(&mult)
}

/// All integer pairs `(alpha, beta)` with `alpha + ell >= 0`,
/// `beta + ell >= 0` and `alpha + beta <= -(ell + 1)`.
///
/// The set has exactly `ell (ell + 1) / 2` elements.
pub fn lambda_set(ell: u32) -> ExceptionalSet {
    let l = ell as i64;
    let mut pairs = BTreeSet::new();
    for alpha in -l..=0 {
        for beta in -l..=(-(l + 1) - alpha) {
            pairs.insert((alpha, beta));
        }
    }
    debug_assert_eq!(pairs.len() as u32, ell * (ell + 1) / 2);
    ExceptionalSet { ell, pairs }
}

/// True iff `P_a^{alpha,beta}` is the zero polynomial.
pub fn jacobi_vanishes(p: &JacobiParams) -> bool {
    jacobi_poly(p).is_zero()
}

/// The limit `lim_{eps -> 0} 2F1(-ell, b; alpha + 1 + eps; z)` as a
/// polynomial in `z`, for integer `alpha`.
///
/// The `z^k` coefficient is the rational function
/// `eps -> (-ell)_k (b)_k / ((alpha + 1 + eps)_k k!)`. The numerator carries
/// no `eps`, so after cancelling common factors the limit exists at a given
/// `k` iff the numerator vanishes or the denominator is nonzero at
/// `eps = 0`; a nonzero numerator over a vanishing denominator is a genuine
/// pole and is reported as an error.
pub fn hyp2f1_limit(ell: u32, b: &Rat, alpha: i64) -> Result<Poly, JacobiError> {
    let mut acc = Poly::zero();
    for k in 0..=ell {
        let numer = pochhammer(&rint(-(ell as i64)), k) * pochhammer(b, k);
        if numer.is_zero() {
            continue;
        }
        let denom = pochhammer(&rint(alpha + 1), k) * factorial(k);
        if denom.is_zero() {
            return Err(JacobiError::Pole { k });
        }
        acc = &acc + &Poly::monomial(numer / denom, ZVAR, k);
    }
    Ok(acc)
}

/// Terminating hypergeometric sum `sum_{k=0}^{n} (-n)_k (b)_k / ((c)_k k!) arg^k`.
fn hyp2f1_terminating(n: u32, b: &Rat, c: &Rat, arg: &Poly) -> Result<Poly, JacobiError> {
    let mut acc = Poly::zero();
    for k in 0..=n {
        let numer = pochhammer(&rint(-(n as i64)), k) * pochhammer(b, k);
        if numer.is_zero() {
            continue;
        }
        let denom = pochhammer(c, k) * factorial(k);
        if denom.is_zero() {
            return Err(JacobiError::ZeroLowerParameter { k });
        }
        acc = &acc + &arg.pow(k).scale(&(numer / denom));
    }
    Ok(acc)
}

fn require_exceptional(ell: u32, alpha: i64, beta: i64) -> Result<(), JacobiError> {
    if lambda_set(ell).contains(alpha, beta) {
        Ok(())
    } else {
        Err(JacobiError::OutsideExceptionalSet { ell, alpha, beta })
    }
}

/// The three explicit polynomial solutions of the Jacobi equation in the
/// variable `z = (1 - t)/2`, for parameters in the exceptional set:
///
/// ```text
/// g1(z) = z^{-alpha}      2F1(-alpha - ell, beta + ell + 1; 1 - alpha; z)
/// g2(z) =                 lim 2F1(-ell, alpha + beta + ell + 1; alpha + 1 + eps; z)
/// g3(z) = (1 - z)^{-beta} 2F1(-beta - ell, alpha + ell + 1; 1 - beta; 1 - z)
/// ```
///
/// Their degrees are `ell`, `-(alpha + beta + ell + 1)` and `ell`.
pub fn g_solutions(ell: u32, alpha: i64, beta: i64) -> Result<(Poly, Poly, Poly), JacobiError> {
    require_exceptional(ell, alpha, beta)?;
    let l = ell as i64;
    let z = Poly::var(ZVAR);
    let one_minus_z = &Poly::one() - &z;

    // alpha + ell >= 0 and alpha <= -1 on the exceptional set, so the
    // prefactor exponents and termination orders below are all nonnegative.
    let g1 = &z.pow((-alpha) as u32)
        * &hyp2f1_terminating((alpha + l) as u32, &rint(beta + l + 1), &rint(1 - alpha), &z)?;
    let g2 = hyp2f1_limit(ell, &rint(alpha + beta + l + 1), alpha)?;
    let g3 = &one_minus_z.pow((-beta) as u32)
        * &hyp2f1_terminating(
            (beta + l) as u32,
            &rint(alpha + l + 1),
            &rint(1 - beta),
            &one_minus_z,
        )?;
    Ok((g1, g2, g3))
}

/// Renormalizations of [`g_solutions`] expressed through Jacobi polynomials
/// with shifted parameters:
///
/// ```text
/// g~1(z) = z^{-alpha}      P_{ell+alpha}^{-alpha, beta}(1 - 2z)
/// g~2(z) =                 P_{-ell-alpha-beta-1}^{alpha, beta}(1 - 2z)
/// g~3(z) = (1 - z)^{-beta} P_{ell+beta}^{alpha, -beta}(1 - 2z)
/// ```
///
/// They satisfy `(-1)^alpha g~3 = g~1 - g~2` exactly.
pub fn g_renormalized(ell: u32, alpha: i64, beta: i64) -> Result<(Poly, Poly, Poly), JacobiError> {
    require_exceptional(ell, alpha, beta)?;
    let l = ell as i64;
    let z = Poly::var(ZVAR);
    let one_minus_2z = &Poly::one() - &z.scale(&rint(2));
    let at = |deg: i64, a: i64, b: i64| -> Poly {
        let p = JacobiParams::new(deg as u32, rint(a), rint(b));
        jacobi_poly(&p).substitute(T, &one_minus_2z)
    };
    let g1 = &z.pow((-alpha) as u32) * &at(l + alpha, -alpha, beta);
    let g2 = at(-l - alpha - beta - 1, alpha, beta);
    let g3 = &(&Poly::one() - &z).pow((-beta) as u32) * &at(l + beta, alpha, -beta);
    Ok((g1, g2, g3))
}

/// Basis of polynomial solutions of degree `<= ell` of the Jacobi equation
/// with degree index `ell`, computed by exact elimination on the coefficient
/// matrix of [`jacobi_ode_residual`].
pub fn ode_polynomial_kernel(ell: u32, alpha: &Rat, beta: &Rat) -> Vec<Poly> {
    let p = JacobiParams::new(ell, alpha.clone(), beta.clone());
    // The residual of t^i has degree <= ell for i <= ell, so the coefficient
    // matrix is square of size ell + 1.
    let n = (ell + 1) as usize;
    let mut rows = vec![vec![Rat::zero(); n]; n];
    for i in 0..=ell {
        let res = jacobi_ode_residual(&p, &Poly::monomial(rint(1), T, i));
        for (d, row) in rows.iter_mut().enumerate() {
            row[i as usize] = res.coeff(&[(T, d as u32)]);
        }
    }
    linalg::kernel_basis(&rows, n)
        .into_iter()
        .map(|v| {
            let mut f = Poly::zero();
            for (i, c) in v.into_iter().enumerate() {
                f = &f + &Poly::monomial(c, T, i as u32);
            }
            f
        })
        .collect()
}
