//! Closed-form classification of the space of differential symmetry breaking
//! operators for integer weight triples `(lp, lpp, lppp)`, together with the
//! exceptional operators `D1, D2, D3` that span it when the Rankin-Cohen
//! bracket vanishes.
//!
//! The trichotomy:
//!
//! - Case 0: `lppp - lp - lpp` is odd or negative; the space is zero.
//! - Case 1: `lppp - lp - lpp = 2a` for some `a >= 0` but the degenerate
//!   condition below fails; the space is spanned by the bracket.
//! - Case 2: additionally `2 >= lp + lpp + lppp` and
//!   `lppp >= |lp - lpp| + 2`; the bracket vanishes and the space is
//!   two-dimensional, spanned by any two of `D1, D2, D3`.
//!
//! Case 2 is exactly the condition that the derived Jacobi parameters
//! `alpha = lp - 1`, `beta = 1 - lppp`, `ell = (lppp - lp - lpp)/2` land in
//! the exceptional set of [`crate::jacobi::lambda_set`]. The `D_j` are built
//! by inflating the renormalized solutions `g~_j`: the inflation argument
//! `1 + 2x/y` is read as the Jacobi variable `t`, i.e. `z = -x/y`, which is
//! the convention under which the factorization identities hold exactly at
//! the symbol level. The other reading is kept behind
//! [`InflationConvention::PlainArgument`] for comparison; it does not
//! factorize (see the tests).

use num_traits::One;
use thiserror::Error;

use crate::bidiff::{BiDiffOp, SYM_X, SYM_Y};
use crate::jacobi::{g_renormalized, lambda_set, ZVAR};
use crate::poly::Poly;
use crate::rankin_cohen::{bracket_order, covariance_check, rc_symbol, RcParams};
use crate::rational::{rint, sign_pow, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("({lp}, {lpp}, {lppp}) is not a Case 2 triple")]
    NotCase2 { lp: i64, lpp: i64, lppp: i64 },
    #[error("lppp - lp - lpp must be a nonnegative even integer")]
    OddOrNegativeOrder,
    #[error("D{j} is not proportional to its factorized composition")]
    ProportionalityFailure { j: usize },
}

/// The three mutually exclusive classification cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Case {
    Case0,
    Case1,
    Case2,
}

impl std::fmt::Display for Case {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Case::Case0 => write!(f, "Case0"),
            Case::Case1 => write!(f, "Case1"),
            Case::Case2 => write!(f, "Case2"),
        }
    }
}

/// Jacobi-side parameters attached to a Case 2 triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivedParams {
    pub alpha: i64,
    pub beta: i64,
    pub ell: u32,
}

/// Result of classifying a weight triple.
#[derive(Clone, Debug)]
pub struct SboClassification {
    pub case: Case,
    pub dimension: usize,
    pub basis: Vec<BiDiffOp>,
    /// Bracket order `a = (lppp - lp - lpp)/2` when it is a nonnegative integer.
    pub bracket_order: Option<u32>,
    /// Derived `(alpha, beta, ell)`, present in Case 2.
    pub derived: Option<DerivedParams>,
}

/// The degenerate-locus condition: `2 >= lp + lpp + lppp` and
/// `lppp >= |lp - lpp| + 2`.
pub fn l2_condition(lp: i64, lpp: i64, lppp: i64) -> bool {
    2 >= lp + lpp + lppp && lppp >= (lp - lpp).abs() + 2
}

fn derived_params(lp: i64, lpp: i64, lppp: i64) -> Option<DerivedParams> {
    let a = bracket_order(&rint(lp), &rint(lpp), &rint(lppp))?;
    Some(DerivedParams { alpha: lp - 1, beta: 1 - lppp, ell: a })
}

/// Classify an integer weight triple.
pub fn classify(lp: i64, lpp: i64, lppp: i64) -> SboClassification {
    let order = bracket_order(&rint(lp), &rint(lpp), &rint(lppp));
    let Some(a) = order else {
        return SboClassification {
            case: Case::Case0,
            dimension: 0,
            basis: Vec::new(),
            bracket_order: None,
            derived: None,
        };
    };
    if l2_condition(lp, lpp, lppp) {
        let [d1, d2, _d3] = dj_symbols(lp, lpp, lppp).expect("Case 2 construction");
        SboClassification {
            case: Case::Case2,
            dimension: 2,
            basis: vec![d1, d2],
            bracket_order: Some(a),
            derived: derived_params(lp, lpp, lppp),
        }
    } else {
        let bracket = rc_symbol(&RcParams::new(rint(lp), rint(lpp), a));
        SboClassification {
            case: Case::Case1,
            dimension: 1,
            basis: vec![bracket],
            bracket_order: Some(a),
            derived: None,
        }
    }
}

/// True iff the bracket symbol vanishes identically. Requires
/// `lppp - lp - lpp` to be a nonnegative even integer.
pub fn rc_vanishes(lp: i64, lpp: i64, lppp: i64) -> Result<bool, ClassifyError> {
    let a = bracket_order(&rint(lp), &rint(lpp), &rint(lppp))
        .ok_or(ClassifyError::OddOrNegativeOrder)?;
    Ok(rc_symbol(&RcParams::new(rint(lp), rint(lpp), a)).is_zero())
}

/// How the inflation argument `1 + 2x/y` of the `G_j` construction is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InflationConvention {
    /// `1 + 2x/y` is the Jacobi variable `t`, so the solution variable is
    /// `z = (1 - t)/2 = -x/y`. This is the convention used everywhere.
    JacobiArgument,
    /// `1 + 2x/y` is substituted directly for the solution variable `z`.
    /// Kept for comparison only; the factorization identities fail under it.
    PlainArgument,
}

/// Inflate a solution `g(z)` of degree `<= ell` to the homogeneous symbol
/// `(-y)^ell g` under the given reading of the argument.
fn inflate_solution(g: &Poly, ell: u32, convention: InflationConvention) -> Poly {
    let mut acc = Poly::zero();
    for k in 0..=ell {
        let c = g.coeff(&[(ZVAR, k)]);
        if c == rint(0) {
            continue;
        }
        let term = match convention {
            // (-y)^ell (-x/y)^k = (-1)^{ell+k} x^k y^{ell-k}
            InflationConvention::JacobiArgument => {
                let coeff = c * sign_pow((ell + k) as i64);
                &Poly::monomial(coeff, SYM_X, k) * &Poly::monomial(Rat::one(), SYM_Y, ell - k)
            }
            // (-y)^ell (1 + 2x/y)^k = (-1)^ell y^{ell-k} (y + 2x)^k
            InflationConvention::PlainArgument => {
                let base = &Poly::var(SYM_Y) + &Poly::var(SYM_X).scale(&rint(2));
                &Poly::monomial(c * sign_pow(ell as i64), SYM_Y, ell - k) * &base.pow(k)
            }
        };
        acc = &acc + &term;
    }
    acc
}

/// The three exceptional operators of a Case 2 triple, under the default
/// inflation convention.
pub fn dj_symbols(lp: i64, lpp: i64, lppp: i64) -> Result<[BiDiffOp; 3], ClassifyError> {
    dj_symbols_with(InflationConvention::JacobiArgument, lp, lpp, lppp)
}

/// [`dj_symbols`] with an explicit inflation convention.
pub fn dj_symbols_with(
    convention: InflationConvention,
    lp: i64,
    lpp: i64,
    lppp: i64,
) -> Result<[BiDiffOp; 3], ClassifyError> {
    let params = case2_params(lp, lpp, lppp)?;
    let (g1, g2, g3) = g_renormalized(params.ell, params.alpha, params.beta)
        .expect("Case 2 parameters lie in the exceptional set");
    let mk = |g: &Poly| {
        BiDiffOp::new(inflate_solution(g, params.ell, convention), rint(lp), rint(lpp), rint(lppp))
    };
    Ok([mk(&g1), mk(&g2), mk(&g3)])
}

fn case2_params(lp: i64, lpp: i64, lppp: i64) -> Result<DerivedParams, ClassifyError> {
    let err = ClassifyError::NotCase2 { lp, lpp, lppp };
    let Some(params) = derived_params(lp, lpp, lppp) else {
        return Err(err);
    };
    if !l2_condition(lp, lpp, lppp) {
        return Err(err);
    }
    debug_assert!(lambda_set(params.ell).contains(params.alpha, params.beta));
    Ok(params)
}

/// Outcome of checking the factorization identities on a Case 2 triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    pub ell: u32,
    /// `D_j = constants[j-1] *` (its composition of two intertwiners).
    pub constants: [Rat; 3],
    /// `D1 - D2 + (-1)^{lp} D3 = 0` holds exactly.
    pub linear_relation: bool,
    /// `1 - lp`, `1 - lpp` and `lppp - 1` are all positive integers.
    pub shifts_positive: bool,
}

impl FactorizationReport {
    pub fn all_hold(&self) -> bool {
        self.linear_relation && self.shifts_positive
    }
}

/// Verify, at the symbol level, that each `D_j` factorizes through the
/// corresponding pair of intertwining operators:
///
/// ```text
/// D1 ~ RC_{2-lp, lpp}^{lppp} o (d1^{1-lp} (x) id)
/// D2 ~ RC_{lp, 2-lpp}^{lppp} o (id (x) d2^{1-lpp})
/// D3 ~ (d/dz)^{lppp-1} o RC_{lp, lpp}^{2-lppp}
/// ```
///
/// The proportionality constants are recorded, not asserted to be 1: they
/// depend on the generator conventions fixed in this crate.
pub fn factorization_check(lp: i64, lpp: i64, lppp: i64) -> Result<FactorizationReport, ClassifyError> {
    let params = case2_params(lp, lpp, lppp)?;
    let ell = params.ell;
    let [d1, d2, d3] = dj_symbols(lp, lpp, lppp)?;

    let a1 = bracket_order(&rint(2 - lp), &rint(lpp), &rint(lppp)).expect("even order");
    let a2 = bracket_order(&rint(lp), &rint(2 - lpp), &rint(lppp)).expect("even order");
    let a3 = bracket_order(&rint(lp), &rint(lpp), &rint(2 - lppp)).expect("even order");
    let comp1 = rc_symbol(&RcParams::new(rint(2 - lp), rint(lpp), a1)).compose((1 - lp) as u32, 0, 0);
    let comp2 = rc_symbol(&RcParams::new(rint(lp), rint(2 - lpp), a2)).compose(0, (1 - lpp) as u32, 0);
    let comp3 = rc_symbol(&RcParams::new(rint(lp), rint(lpp), a3)).compose(0, 0, (lppp - 1) as u32);

    let mut constants = [Rat::one(), Rat::one(), Rat::one()];
    for (j, (d, comp)) in [(&d1, &comp1), (&d2, &comp2), (&d3, &comp3)].into_iter().enumerate() {
        let c = crate::linalg::proportionality_constant(
            &d.homogeneous_coeffs(ell),
            &comp.homogeneous_coeffs(ell),
        )
        .ok_or(ClassifyError::ProportionalityFailure { j: j + 1 })?;
        constants[j] = c;
    }

    let relation = &(&d1.symbol - &d2.symbol) + &d3.symbol.scale(&sign_pow(lp));
    Ok(FactorizationReport {
        ell,
        constants,
        linear_relation: relation.is_zero(),
        shifts_positive: lp <= 0 && lpp <= 0 && lppp >= 2,
    })
}

/// Covariance of all three exceptional operators, checked on monomials up to
/// total degree `n`.
pub fn covariance_of_dj(lp: i64, lpp: i64, lppp: i64, n: u32) -> Result<bool, ClassifyError> {
    let djs = dj_symbols(lp, lpp, lppp)?;
    Ok(djs
        .iter()
        .all(|d| covariance_check(&rint(lp), &rint(lpp), &rint(lppp), d, n)))
}

/// All Case 2 triples with `|lp|, |lpp| <= bound` (and the `lppp` range that
/// the condition then allows), in lexicographic order.
pub fn case2_triples(bound: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    for lp in -bound..=bound {
        for lpp in -bound..=bound {
            // lppp ranges over [|lp-lpp|+2, 2-lp-lpp] with the right parity.
            let lo = (lp - lpp).abs() + 2;
            let hi = 2 - lp - lpp;
            for lppp in lo..=hi {
                if (lppp - lp - lpp) % 2 == 0 {
                    debug_assert!(classify(lp, lpp, lppp).case == Case::Case2);
                    out.push((lp, lpp, lppp));
                }
            }
        }
    }
    out
}
