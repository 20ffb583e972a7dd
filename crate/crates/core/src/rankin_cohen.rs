//! Rankin-Cohen brackets: construction, application, infinitesimal
//! covariance certification, and a brute-force dimension oracle for
//! differential symmetry breaking operators.
//!
//! The `a`-th bracket for weights `(lp, lpp)` is the bidifferential operator
//! with symbol
//!
//! ```text
//! Q(x, y) = sum_{l=0}^{a} (-1)^l C(lp + a - 1, l) C(lpp + a - 1, a - l) x^{a-l} y^l,
//! ```
//!
//! which coincides with `(-1)^a P_a^{lp - 1, 1 - lppp}(x, y)` for the
//! inflated Jacobi polynomial with `lppp = lp + lpp + 2a`.
//!
//! Covariance is certified infinitesimally: an operator `D` intertwines the
//! weight-`(lp, lpp)` diagonal action with the weight-`lppp` action iff the
//! three generator identities hold on enough monomials. Both sides of the
//! identity are determined by their values on `z1^i z2^j` with
//! `i + j <= order + 2`, because the action formulas have polynomial
//! coefficients of degree at most two (`e-` is `lambda z + z^2 d/dz`): the
//! covariance defect of an order-`d` operator is an operator of order at
//! most `d + 2` with such coefficients, and those are separated by monomials
//! of degree up to order + 2. The dimension oracle below therefore tests
//! monomials up to `maxdeg + 2`; it makes no homogeneity assumption and lets
//! `h`-equivariance cut the symbol space down on its own.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::bidiff::{BiDiffOp, SYM_X, SYM_Y, Z, Z1, Z2};
use crate::jacobi::{jacobi_inflate, JacobiParams};
use crate::linalg::FractionFreeEchelon;
use crate::poly::Poly;
use crate::rational::{gen_binomial, is_integer, rint, sign_pow, to_i64, Rat};
use crate::sl2::{dpi_in, Sl2Element};

/// Parameters of a bracket: source weights and the order `a`; the target
/// weight is always `lp + lpp + 2a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RcParams {
    pub lp: Rat,
    pub lpp: Rat,
    pub a: u32,
}

impl RcParams {
    pub fn new(lp: Rat, lpp: Rat, a: u32) -> RcParams {
        RcParams { lp, lpp, a }
    }

    /// Target weight `lp + lpp + 2a`.
    pub fn lppp(&self) -> Rat {
        &self.lp + &self.lpp + rint(2 * self.a as i64)
    }
}

/// Symbol of the `a`-th Rankin-Cohen bracket.
pub fn rc_symbol(p: &RcParams) -> BiDiffOp {
    let mut symbol = Poly::zero();
    for l in 0..=p.a {
        let c = sign_pow(l as i64)
            * gen_binomial(&(&p.lp + rint(p.a as i64 - 1)), l)
            * gen_binomial(&(&p.lpp + rint(p.a as i64 - 1)), p.a - l);
        if c.is_zero() {
            continue;
        }
        let term = &Poly::monomial(c, SYM_X, p.a - l) * &Poly::monomial(Rat::one(), SYM_Y, l);
        symbol = &symbol + &term;
    }
    BiDiffOp::new(symbol, p.lp.clone(), p.lpp.clone(), p.lppp())
}

/// Apply the bracket to `(f1(z), f2(z))`: form `f1(z1) f2(z2)`, apply the
/// symbol, restrict to the diagonal.
pub fn rc_apply(p: &RcParams, f1: &Poly, f2: &Poly) -> Poly {
    let g = &f1.rename(Z, Z1) * &f2.rename(Z, Z2);
    rc_symbol(p).apply(&g)
}

/// Diagonal action `dpi_lp(X) (x) id + id (x) dpi_lpp(X)` on a polynomial in
/// `(z1, z2)`.
pub fn diagonal_dpi(lp: &Rat, lpp: &Rat, x: Sl2Element, f: &Poly) -> Poly {
    &dpi_in(lp, x, f, Z1) + &dpi_in(lpp, x, f, Z2)
}

/// Infinitesimal covariance check: `D` intertwines weights `(lp, lpp)` with
/// `lppp` on all monomials `z1^i z2^j`, `i + j <= n`, for all three
/// generators.
pub fn covariance_check(lp: &Rat, lpp: &Rat, lppp: &Rat, d: &BiDiffOp, n: u32) -> bool {
    use Sl2Element::{EMinus, EPlus, H};
    for i in 0..=n {
        for j in 0..=(n - i) {
            let f = &Poly::monomial(Rat::one(), Z1, i) * &Poly::monomial(Rat::one(), Z2, j);
            for x in [EPlus, H, EMinus] {
                let lhs = d.apply(&diagonal_dpi(lp, lpp, x, &f));
                let rhs = dpi_in(lppp, x, &d.apply(&f), Z);
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// `lambda f f'' - (lambda + 1) (f')^2`, the quadratic expression whose
/// polarization is the `a = 2` bracket: `(lambda + 1)` times this equals
/// `rc_apply` at `(lambda, lambda, 2)` with `f1 = f2 = f`.
pub fn polarized_quadratic(lambda: &Rat, f: &Poly) -> Poly {
    let fp = f.diff(Z);
    let fpp = fp.diff(Z);
    &(f * &fpp).scale(lambda) - &(&fp * &fp).scale(&(lambda + Rat::one()))
}

/// Monomial symbols `x^i y^j` with `i + j <= maxdeg` in a fixed order.
fn symbol_monomials(maxdeg: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for d in 0..=maxdeg {
        for i in 0..=d {
            out.push((i, d - i));
        }
    }
    out
}

/// Falling factorial `n (n-1) ... (n-k+1)` as a rational; zero when `k > n`.
fn falling(n: u32, k: u32) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = Rat::one();
    for j in 0..k {
        acc *= rint((n - j) as i64);
    }
    acc
}

/// Brute-force computation of the space of symbols `Q(x, y)` of total degree
/// `<= maxdeg` whose operators intertwine weights `(lp, lpp) -> lppp`.
///
/// Solves, by exact elimination, the linear system expressing the three
/// generator identities on all monomials `z1^p z2^q` with
/// `p + q <= maxdeg + 2`. Returns the kernel dimension and a basis.
///
/// Everything in the covariance identity of a single test monomial is again
/// a sum of monomials, so the rows are assembled with plain falling-factorial
/// calculus; no intermediate polynomials are built.
pub fn sbo_dimension_oracle(
    lp: &Rat,
    lpp: &Rat,
    lppp: &Rat,
    maxdeg: u32,
) -> (usize, Vec<BiDiffOp>) {
    use Sl2Element::{EMinus, EPlus, H};
    let unknowns = symbol_monomials(maxdeg);
    let ncols = unknowns.len();
    let mut ech = FractionFreeEchelon::new(ncols);
    'outer: for p in 0..=(maxdeg + 2) {
        for q in 0..=(maxdeg + 2 - p) {
            if ech.full_rank() {
                break 'outer; // kernel already empty
            }
            for x in [EPlus, H, EMinus] {
                // Diagonal action on z1^p z2^q, as monomial terms (p', q', c).
                let diag: Vec<(u32, u32, Rat)> = match x {
                    EPlus => {
                        let mut v = Vec::new();
                        if p > 0 {
                            v.push((p - 1, q, rint(-(p as i64))));
                        }
                        if q > 0 {
                            v.push((p, q - 1, rint(-(q as i64))));
                        }
                        v
                    }
                    H => vec![(p, q, -(lp + lpp + rint(2 * (p + q) as i64)))],
                    EMinus => vec![
                        (p + 1, q, lp + rint(p as i64)),
                        (p, q + 1, lpp + rint(q as i64)),
                    ],
                    Sl2Element::Casimir => unreachable!("only generators are swept"),
                };
                // Rows of the residual, keyed by the z-degree they live at.
                let mut rows: BTreeMap<u32, Vec<Rat>> = BTreeMap::new();
                let add = |rows: &mut BTreeMap<u32, Vec<Rat>>, d: u32, u: usize, v: Rat| {
                    let row = rows.entry(d).or_insert_with(|| vec![Rat::zero(); ncols]);
                    row[u] += v;
                };
                for (u, &(i, j)) in unknowns.iter().enumerate() {
                    // D applied after the diagonal action.
                    for (bp, bq, c) in &diag {
                        let f = falling(*bp, i) * falling(*bq, j);
                        if !f.is_zero() {
                            add(&mut rows, bp + bq - i - j, u, c * f);
                        }
                    }
                    // Minus the target action applied after D: the image of
                    // z1^p z2^q under D is fall(p,i) fall(q,j) z^d.
                    let f = falling(p, i) * falling(q, j);
                    if f.is_zero() {
                        continue;
                    }
                    let d = p + q - i - j;
                    match x {
                        EPlus => {
                            if d > 0 {
                                add(&mut rows, d - 1, u, f * rint(d as i64));
                            }
                        }
                        H => add(&mut rows, d, u, f * (lppp + rint(2 * d as i64))),
                        EMinus => add(&mut rows, d + 1, u, -(f * (lppp + rint(d as i64)))),
                        Sl2Element::Casimir => unreachable!("only generators are swept"),
                    }
                }
                for (_, row) in rows {
                    ech.insert(row);
                }
            }
        }
    }
    let basis: Vec<BiDiffOp> = ech
        .kernel_basis()
        .into_iter()
        .map(|v| {
            let mut symbol = Poly::zero();
            for (u, c) in v.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (i, j) = unknowns[u];
                let term = &Poly::monomial(c, SYM_X, i) * &Poly::monomial(Rat::one(), SYM_Y, j);
                symbol = &symbol + &term;
            }
            BiDiffOp::new(symbol, lp.clone(), lpp.clone(), lppp.clone())
        })
        .collect();
    (basis.len(), basis)
}

/// The Jacobi-side expression of the bracket symbol:
/// `(-1)^a P_a^{lp - 1, 1 - lppp}(x, y)`.
pub fn rc_symbol_via_jacobi(p: &RcParams) -> Poly {
    let prm = JacobiParams::new(p.a, &p.lp - Rat::one(), Rat::one() - p.lppp());
    jacobi_inflate(&prm).scale(&sign_pow(p.a as i64))
}

/// True iff the bracket symbol vanishes identically, which for integer
/// weights happens exactly on the dimension-two locus of [`crate::classify`].
pub fn rc_is_zero(p: &RcParams) -> bool {
    rc_symbol(p).is_zero()
}

/// Helper shared with the classifier: integer bracket order
/// `(lppp - lp - lpp)/2` when it is a nonnegative integer.
pub fn bracket_order(lp: &Rat, lpp: &Rat, lppp: &Rat) -> Option<u32> {
    let twice_a = lppp - lp - lpp;
    if !is_integer(&twice_a) {
        return None;
    }
    let n = to_i64(&twice_a)?;
    if n < 0 || n % 2 != 0 {
        return None;
    }
    Some((n / 2) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::proportionality_constant;
    use crate::rational::rq;
    use crate::sl2::kappa_closed_form;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn rc(lp: i64, lpp: i64, a: u32) -> RcParams {
        RcParams::new(rint(lp), rint(lpp), a)
    }

    #[test]
    fn low_order_symbols() {
        assert_eq!(rc_symbol(&rc(4, 6, 0)).symbol, Poly::one());
        assert_eq!(rc_symbol(&rc(4, 6, 1)).symbol, p("6x - 4y"));
        // a = 2: (1/2) lpp (lpp+1) x^2 - (lp+1)(lpp+1) x y + (1/2) lp (lp+1) y^2
        for (lp, lpp) in [(3i64, 5i64), (-2, 7), (0, 0)] {
            let s = rc_symbol(&rc(lp, lpp, 2)).symbol;
            assert_eq!(s.coeff(&[("x", 2)]), rq(lpp * (lpp + 1), 2));
            assert_eq!(s.coeff(&[("x", 1), ("y", 1)]), rint(-(lp + 1) * (lpp + 1)));
            assert_eq!(s.coeff(&[("y", 2)]), rq(lp * (lp + 1), 2));
        }
    }

    #[test]
    fn apply_examples() {
        assert_eq!(rc_apply(&rc(1, 1, 0), &p("z"), &p("z")), p("z^2"));
        let f = p("1 + 3z + z^4");
        assert!(rc_apply(&rc(5, 5, 1), &f, &f).is_zero());
        assert!(rc_apply(&rc(0, 0, 1), &p("z^2"), &p("1 + z")).is_zero());
    }

    #[test]
    fn symbol_matches_inflated_jacobi() {
        for lp in -4i64..=4 {
            for lpp in -4i64..=4 {
                for a in 0..=4u32 {
                    let prm = rc(lp, lpp, a);
                    assert_eq!(
                        rc_symbol(&prm).symbol,
                        rc_symbol_via_jacobi(&prm),
                        "lp={lp} lpp={lpp} a={a}"
                    );
                }
            }
        }
    }

    #[test]
    fn symbol_coefficients_are_the_singular_vector() {
        // kappa_l equals the coefficient of x^l y^{a-l}, exactly.
        for lp in -3i64..=5 {
            for lpp in -3i64..=5 {
                for a in 0..=5u32 {
                    let Ok(kappa) = kappa_closed_form(&rint(lp), &rint(lpp), a) else {
                        continue;
                    };
                    let s = rc_symbol(&rc(lp, lpp, a)).symbol;
                    for l in 0..=a {
                        assert_eq!(
                            kappa[&l],
                            s.coeff(&[("x", l), ("y", a - l)]),
                            "lp={lp} lpp={lpp} a={a} l={l}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn covariance_of_the_bracket() {
        let d = rc_symbol(&rc(4, 6, 1));
        assert!(covariance_check(&rint(4), &rint(6), &rint(12), &d, 8));

        let wrong = BiDiffOp::new(p("x + 2y"), rint(4), rint(6), rint(12));
        assert!(!covariance_check(&rint(4), &rint(6), &rint(12), &wrong, 8));

        // a = 0: plain restriction of the product intertwines.
        let restrict = BiDiffOp::new(Poly::one(), rq(1, 3), rq(-2, 5), rq(1, 3) + rq(-2, 5));
        assert!(covariance_check(&rq(1, 3), &rq(-2, 5), &(rq(1, 3) + rq(-2, 5)), &restrict, 6));
    }

    #[test]
    fn oracle_dimensions_at_sample_points() {
        let (dim, _) = sbo_dimension_oracle(&rint(4), &rint(6), &rint(11), 6);
        assert_eq!(dim, 0);

        let (dim, basis) = sbo_dimension_oracle(&rint(4), &rint(6), &rint(12), 6);
        assert_eq!(dim, 1);
        let found = basis[0].homogeneous_coeffs(1);
        let expect = rc_symbol(&rc(4, 6, 1)).homogeneous_coeffs(1);
        assert!(proportionality_constant(&found, &expect).is_some());

        let (dim, _) = sbo_dimension_oracle(&rint(0), &rint(0), &rint(2), 6);
        assert_eq!(dim, 2);
    }

    #[test]
    fn oracle_rejects_non_integer_order() {
        let (dim, _) = sbo_dimension_oracle(&rq(1, 2), &rint(0), &rint(2), 4);
        assert_eq!(dim, 0);
    }

    #[test]
    fn quadratic_expression() {
        assert!(polarized_quadratic(&rint(7), &Poly::constant(rint(5))).is_zero());
        assert_eq!(polarized_quadratic(&rint(1), &p("z")), Poly::constant(rint(-2)));

        // (lambda + 1) * quadratic = a = 2 bracket on f1 = f2 = f.
        let f = p("1 + z + z^2");
        let lambda = rint(4);
        let lhs = polarized_quadratic(&lambda, &f).scale(&(&lambda + Rat::one()));
        let rhs = rc_apply(&RcParams::new(lambda.clone(), lambda.clone(), 2), &f, &f);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bracket_order_helper() {
        assert_eq!(bracket_order(&rint(4), &rint(6), &rint(12)), Some(1));
        assert_eq!(bracket_order(&rint(4), &rint(6), &rint(11)), None);
        assert_eq!(bracket_order(&rint(4), &rint(6), &rint(8)), None);
        assert_eq!(bracket_order(&rq(1, 2), &rq(1, 2), &rint(3)), Some(1));
    }
}
