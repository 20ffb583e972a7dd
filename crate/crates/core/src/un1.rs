//! Rankin-Cohen-type operators for U(n,1): vector-valued bidifferential
//! operators on the product of two unit balls, restricted to the diagonal.
//!
//! The order-`a` operator for reduced weights `lp = l1p - l2p` and
//! `lpp = l1pp - l2pp` has symbol
//!
//! ```text
//! P_a^{lp - 1, -lp - lpp - 2a + 1}(X, Y),   X = sum_i v_i x_i,  Y = sum_j v_j y_j,
//! ```
//!
//! where `P_a` is the inflated Jacobi polynomial of [`crate::jacobi`], the
//! `x_i` stand for derivatives in the first factor's coordinates, the `y_j`
//! for derivatives in the second factor's, and the `v_i` are coordinates of
//! the degree-`a` polynomial-valued target. The two Jacobi arguments look
//! alike in the display but live on different factors; reading the first as
//! the `z'`-block and the second as the `z''`-block is the only
//! interpretation that reduces to the classical bracket at `n = 1` (namely
//! `(-1)^a` times it, under `v_1 = 1`).
//!
//! The symbol vanishes identically exactly when the derived Jacobi
//! parameters `(lp - 1, 1 - lp - lpp - 2a)` lie in the exceptional set of
//! degree index `a`; that is also where the space of such operators jumps
//! from dimension one to two. For integer weights the condition reads
//! `1 - a <= lp, lpp <= 0` and `lp + lpp <= 1 - a`.

use std::collections::BTreeMap;

use crate::jacobi::{jacobi_inflate, lambda_set, JacobiParams};
use crate::poly::Poly;
use crate::rational::{is_integer, rint, to_i64, Rat};

/// Full parameter set: dimension `n`, the two weight pairs, and the order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Un1Params {
    pub n: u32,
    pub l1p: Rat,
    pub l2p: Rat,
    pub l1pp: Rat,
    pub l2pp: Rat,
    pub a: u32,
}

impl Un1Params {
    pub fn new(n: u32, l1p: Rat, l2p: Rat, l1pp: Rat, l2pp: Rat, a: u32) -> Un1Params {
        debug_assert!(n >= 1);
        Un1Params { n, l1p, l2p, l1pp, l2pp, a }
    }

    /// Parameters with the second weights zero, so `lp`, `lpp` are given
    /// directly.
    pub fn reduced(n: u32, lp: Rat, lpp: Rat, a: u32) -> Un1Params {
        Un1Params::new(n, lp, rint(0), lpp, rint(0), a)
    }

    /// Reduced weight `lp = l1p - l2p`.
    pub fn lp(&self) -> Rat {
        &self.l1p - &self.l2p
    }

    /// Reduced weight `lpp = l1pp - l2pp`.
    pub fn lpp(&self) -> Rat {
        &self.l1pp - &self.l2pp
    }
}

/// Symbol polynomial in the variables `x1..xn, y1..yn, v1..vn`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Un1Symbol {
    pub n: u32,
    pub a: u32,
    pub poly: Poly,
}

impl Un1Symbol {
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

fn contraction(prefix: &str, n: u32) -> Poly {
    let mut acc = Poly::zero();
    for i in 1..=n {
        let term = &Poly::var(&format!("v{i}")) * &Poly::var(&format!("{prefix}{i}"));
        acc = &acc + &term;
    }
    acc
}

/// The symbol `P_a^{lp-1, -lp-lpp-2a+1}(sum v_i x_i, sum v_j y_j)`.
pub fn un1_symbol(p: &Un1Params) -> Un1Symbol {
    let lp = p.lp();
    let lpp = p.lpp();
    let beta = -&lp - &lpp - rint(2 * p.a as i64) + rint(1);
    let inflated = jacobi_inflate(&JacobiParams::new(p.a, &lp - rint(1), beta));
    let poly = inflated
        .substitute(crate::bidiff::SYM_X, &contraction("x", p.n))
        .substitute(crate::bidiff::SYM_Y, &contraction("y", p.n));
    Un1Symbol { n: p.n, a: p.a, poly }
}

/// True iff the order-`a` symbol vanishes identically for reduced weights
/// `(lp, lpp)`: the derived Jacobi parameters must land in the exceptional
/// set, which requires the weights to be integers with
/// `1 - a <= lp, lpp <= 0` and `lp + lpp <= 1 - a`.
pub fn un1_vanishes(lp: &Rat, lpp: &Rat, a: u32) -> bool {
    if !is_integer(lp) || !is_integer(lpp) {
        return false;
    }
    let (Some(lp), Some(lpp)) = (to_i64(lp), to_i64(lpp)) else {
        return false;
    };
    let alpha = lp - 1;
    let beta = 1 - lp - lpp - 2 * a as i64;
    lambda_set(a).contains(alpha, beta)
}

/// Dimension of the space of order-`a` symmetry breaking operators: two on
/// the degenerate locus where the symbol vanishes, one otherwise.
pub fn un1_dim(lp: &Rat, lpp: &Rat, a: u32) -> usize {
    if un1_vanishes(lp, lpp, a) {
        2
    } else {
        1
    }
}

/// Equivariance for the translation part of the action: the operator
/// commutes with simultaneous translation of both factors, i.e. for every
/// coordinate `i`
///
/// ```text
/// D (d/dzp_i + d/dzpp_i) F = d/dz_i (D F)   componentwise.
/// ```
///
/// Translations act with multiplier one, so this together with the linear
/// (Levi) equivariance of the contraction structure is the part of the
/// covariance that the symbol alone certifies for every `n`; at `n = 1` the
/// reduction to the classical bracket carries the full certification.
pub fn translation_covariance(p: &Un1Params, f: &Poly) -> bool {
    let out = un1_apply(p, f);
    for i in 1..=p.n {
        let shifted = &f.diff(&format!("zp{i}")) + &f.diff(&format!("zpp{i}"));
        let lhs = un1_apply(p, &shifted);
        let mut rhs: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        for (ve, g) in &out {
            let d = g.diff(&format!("z{i}"));
            if !d.is_zero() {
                rhs.insert(ve.clone(), d);
            }
        }
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Apply the operator to a polynomial `F` in the source coordinates
/// `zp1..zpn` (first factor) and `zpp1..zppn` (second factor).
///
/// The symbol is expanded in monomials of `v`; each coefficient acts as a
/// constant-coefficient operator (`x_i -> d/dzp_i`, `y_j -> d/dzpp_j`) and
/// the result is restricted to the diagonal `zp_i = zpp_i = z_i`. Returns
/// the nonzero components keyed by the `v`-exponent vector `(e_1..e_n)`.
pub fn un1_apply(p: &Un1Params, f: &Poly) -> BTreeMap<Vec<u32>, Poly> {
    debug_assert!(f
        .vars()
        .iter()
        .all(|v| v.starts_with("zp") && v[2..].parse::<u32>().is_ok()
            || v.starts_with("zpp") && v[3..].parse::<u32>().is_ok()));
    let symbol = un1_symbol(p);
    let vars = symbol.poly.vars().to_vec();
    let mut out: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
    for (exps, c) in symbol.poly.terms() {
        let mut v_exps = vec![0u32; p.n as usize];
        let mut g = f.clone();
        for (idx, name) in vars.iter().enumerate() {
            let e = exps[idx];
            if e == 0 {
                continue;
            }
            if let Some(i) = name.strip_prefix('v') {
                let i: usize = i.parse().unwrap();
                v_exps[i - 1] = e;
            } else if let Some(i) = name.strip_prefix("x") {
                g = g.diff_n(&format!("zp{i}"), e);
            } else if let Some(i) = name.strip_prefix("y") {
                g = g.diff_n(&format!("zpp{i}"), e);
            }
        }
        for i in 1..=p.n {
            let zi = Poly::var(&format!("z{i}"));
            g = g.substitute(&format!("zp{i}"), &zi).substitute(&format!("zpp{i}"), &zi);
        }
        let slot = out.entry(v_exps).or_insert_with(Poly::zero);
        *slot = &*slot + &g.scale(c);
    }
    out.retain(|_, g| !g.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rankin_cohen::{rc_symbol, RcParams};
    use crate::rational::{rq, sign_pow};

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn order_zero_is_restriction() {
        for n in 1..=3u32 {
            let s = un1_symbol(&Un1Params::reduced(n, rq(5, 2), rint(-3), 0));
            assert_eq!(s.poly, Poly::one());
            let f = p("zp1*zpp1");
            let out = un1_apply(&Un1Params::reduced(n, rq(5, 2), rint(-3), 0), &f);
            assert_eq!(out.len(), 1);
            assert_eq!(out[&vec![0u32; n as usize]], p("z1^2"));
        }
    }

    #[test]
    fn reduces_to_the_classical_bracket_at_n_equals_one() {
        for lp in -4i64..=4 {
            for lpp in -4i64..=4 {
                for a in 0..=4u32 {
                    let s = un1_symbol(&Un1Params::reduced(1, rint(lp), rint(lpp), a));
                    let reduced = s
                        .poly
                        .substitute("v1", &Poly::one())
                        .rename("x1", "x")
                        .rename("y1", "y");
                    let classical = rc_symbol(&RcParams::new(rint(lp), rint(lpp), a))
                        .symbol
                        .scale(&sign_pow(a as i64));
                    assert_eq!(reduced, classical, "lp={lp} lpp={lpp} a={a}");
                }
            }
        }
    }

    #[test]
    fn explicit_first_order_symbol() {
        // n = 2, a = 1, lp = lpp = 3: alpha = 2, beta = -7, so the symbol is
        // (2 + alpha + beta) X + (alpha + 1) Y = -3 X + 3 Y.
        let s = un1_symbol(&Un1Params::reduced(2, rint(3), rint(3), 1));
        let x_part = p("v1*x1 + v2*x2");
        let y_part = p("v1*y1 + v2*y2");
        assert_eq!(s.poly, &x_part.scale(&rint(-3)) + &y_part.scale(&rint(3)));
    }

    #[test]
    fn apply_first_order() {
        let params = Un1Params::reduced(2, rint(3), rint(3), 1);
        let out = un1_apply(&params, &p("zp1*zpp2"));
        assert_eq!(out.len(), 2);
        assert_eq!(out[&vec![1, 0]], p("z2").scale(&rint(-3)));
        assert_eq!(out[&vec![0, 1]], p("z1").scale(&rint(3)));
    }

    #[test]
    fn apply_at_n_equals_one_is_the_classical_bracket() {
        // Single v-component equal to (-1)^a rc_apply.
        let f1 = Poly::parse("1 + 2z + z^3").unwrap();
        let f2 = Poly::parse("z^2 - 5").unwrap();
        for (lp, lpp, a) in [(4i64, 6i64, 1u32), (2, 3, 2), (-1, 5, 3)] {
            let params = Un1Params::reduced(1, rint(lp), rint(lpp), a);
            let src = &f1.rename("z", "zp1") * &f2.rename("z", "zpp1");
            let out = un1_apply(&params, &src);
            let classical = crate::rankin_cohen::rc_apply(
                &RcParams::new(rint(lp), rint(lpp), a),
                &f1,
                &f2,
            )
            .scale(&sign_pow(a as i64))
            .rename("z", "z1");
            if classical.is_zero() {
                assert!(out.is_empty(), "lp={lp} lpp={lpp} a={a}");
            } else {
                assert_eq!(out.len(), 1, "lp={lp} lpp={lpp} a={a}");
                assert_eq!(out[&vec![a]], classical, "lp={lp} lpp={lpp} a={a}");
            }
        }
    }

    #[test]
    fn vanishing_examples() {
        assert!(!un1_vanishes(&rint(3), &rint(3), 1));
        assert!(un1_vanishes(&rint(-1), &rint(-1), 2));
        assert!(un1_symbol(&Un1Params::reduced(2, rint(-1), rint(-1), 2)).is_zero());
        assert!(!un1_vanishes(&rint(-1), &rint(5), 1));
        assert!(!un1_vanishes(&rq(-1, 2), &rint(-1), 2));
    }

    #[test]
    fn vanishing_matches_symbol_on_a_grid() {
        for n in 1..=3u32 {
            for lp in -3i64..=3 {
                for lpp in -3i64..=3 {
                    for a in 0..=3u32 {
                        let s = un1_symbol(&Un1Params::reduced(n, rint(lp), rint(lpp), a));
                        assert_eq!(
                            un1_vanishes(&rint(lp), &rint(lpp), a),
                            s.is_zero(),
                            "n={n} lp={lp} lpp={lpp} a={a}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(un1_dim(&rint(3), &rint(3), 1), 1);
        assert_eq!(un1_dim(&rint(-1), &rint(-1), 2), 2);
        assert_eq!(un1_dim(&rint(-2), &rint(-2), 3), 2);
    }

    #[test]
    fn symbol_bidegrees() {
        // Homogeneous of degree a in v and of degree a in (x, y) jointly.
        let s = un1_symbol(&Un1Params::reduced(2, rint(4), rint(-2), 3));
        for (exps, _) in s.poly.terms() {
            let mut vdeg = 0;
            let mut xydeg = 0;
            for (idx, name) in s.poly.vars().iter().enumerate() {
                if name.starts_with('v') {
                    vdeg += exps[idx];
                } else {
                    xydeg += exps[idx];
                }
            }
            assert_eq!(vdeg, 3);
            assert_eq!(xydeg, 3);
        }
    }

    #[test]
    fn symbol_sees_only_the_contractions() {
        // Substitute x -> A x, y -> A y, v -> A^{-T} v for an invertible
        // rational A; the contractions, hence the symbol, are unchanged.
        let params = Un1Params::reduced(2, rint(-2), rint(3), 2);
        let s = un1_symbol(&params).poly;
        // A = [[1, 2], [1, 3]], A^{-1} = [[3, -2], [-1, 1]], A^{-T} rows: (3, -1), (-2, 1).
        let sub = |f: &Poly, names: [&str; 2], rows: [[i64; 2]; 2]| -> Poly {
            let tmp: Vec<String> = names.iter().map(|n| format!("t{n}")).collect();
            let mut g = f.clone();
            for (i, name) in names.iter().enumerate() {
                let repl = &Poly::var(&tmp[0]).scale(&rint(rows[i][0]))
                    + &Poly::var(&tmp[1]).scale(&rint(rows[i][1]));
                g = g.substitute(name, &repl);
            }
            for (i, name) in names.iter().enumerate() {
                g = g.rename(&tmp[i], name);
            }
            g
        };
        let a_rows = [[1, 2], [1, 3]];
        let a_inv_t_rows = [[3, -1], [-2, 1]];
        let transformed = sub(
            &sub(&sub(&s, ["x1", "x2"], a_rows), ["y1", "y2"], a_rows),
            ["v1", "v2"],
            a_inv_t_rows,
        );
        assert_eq!(transformed, s);
    }

    #[test]
    fn commutes_with_diagonal_translations() {
        for (n, lp, lpp, a, ftext) in [
            (2u32, 3i64, 5i64, 1u32, "zp1^2*zpp2 + zp2^3"),
            (2, -1, -2, 2, "zp1^3*zpp1 + zp2*zpp2^2"),
            (3, 4, 2, 2, "zp1*zp3*zpp2^2"),
        ] {
            let params = Un1Params::reduced(n, rint(lp), rint(lpp), a);
            let f = p(ftext);
            assert!(translation_covariance(&params, &f), "n={n} lp={lp} lpp={lpp} a={a}");
        }
    }

    #[test]
    fn apply_lowers_degree_by_the_order() {
        let params = Un1Params::reduced(2, rint(5), rint(4), 2);
        for f in [p("zp1^2*zpp1^2"), p("zp1*zp2*zpp1^2 + zp2^2*zpp2^2")] {
            let d = f.total_degree().unwrap();
            let out = un1_apply(&params, &f);
            assert!(!out.is_empty());
            for (ve, g) in &out {
                assert_eq!(
                    g.total_degree(),
                    Some(d - 2),
                    "v-component {ve:?} of {f}: got {g}"
                );
            }
        }
    }
}
