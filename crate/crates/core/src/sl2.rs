//! The infinitesimal sl(2) action in the weight-`lambda` multiplier model,
//! lowest-weight module bookkeeping, and the singular-vector solver.
//!
//! On holomorphic functions the generators act by
//!
//! ```text
//! e-: f -> lambda z f + z^2 f'
//! e+: f -> -f'
//! h : f -> -lambda f - 2 z f'
//! ```
//!
//! and the Casimir `h^2 + 2h + 4 e- e+` acts by the scalar
//! `lambda^2 - 2 lambda`. The abstract lowest-weight module `V_lambda` has
//! basis `v_0, v_1, ...` with `e+ v_l = v_{l+1}`,
//! `e- v_l = -l (lambda + l - 1) v_{l-1}` and `h v_l = (lambda + 2l) v_l`;
//! this module works with the abstract basis throughout, since every action
//! formula closes on it.
//!
//! A singular vector in `V_lp (x) V_lpp` of weight `lp + lpp + 2a` is an
//! element `sum_l kappa_l v_l (x) v_{a-l}` killed by the diagonal `e-`;
//! comparing coefficients gives the recurrence
//!
//! ```text
//! (l+1)(lp + l) kappa_{l+1} + (a-l)(lpp + a - l - 1) kappa_l = 0.
//! ```
//!
//! [`singular_vectors`] solves the kernel problem by exact elimination on the
//! actual lowering action (it never consults the recurrence), while
//! [`kappa_closed_form`] evaluates the closed-form solution
//!
//! ```text
//! kappa_l = (-1)^{a+l} C(lpp + a - 1, l) C(lp + a - 1, a - l),
//! ```
//!
//! normalized so that the induced symbol `sum_l kappa_l x^l y^{a-l}` is
//! exactly the `a`-th Rankin-Cohen symbol. The two routes are compared on
//! parameter grids by the verification suites.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::linalg;
use crate::poly::Poly;
use crate::rational::{gen_binomial, pochhammer, rint, sign_pow, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Sl2Error {
    #[error("degenerate normalization: the Pochhammer prefactor vanishes")]
    DegenerateNormalization,
}

/// Basis elements of sl(2) together with the Casimir element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sl2Element {
    EPlus,
    H,
    EMinus,
    Casimir,
}

/// Infinitesimal action of weight `lambda` on a polynomial in the variable
/// `var`.
pub fn dpi_in(lambda: &Rat, x: Sl2Element, f: &Poly, var: &str) -> Poly {
    let z = Poly::var(var);
    let fp = f.diff(var);
    match x {
        Sl2Element::EMinus => &(&z * f).scale(lambda) + &(&(&z * &z) * &fp),
        Sl2Element::EPlus => -&fp,
        Sl2Element::H => &(-f).scale(lambda) - &(&z * &fp).scale(&rint(2)),
        Sl2Element::Casimir => f.scale(&(lambda * lambda - lambda * rint(2))),
    }
}

/// [`dpi_in`] in the default variable `z`.
pub fn dpi(lambda: &Rat, x: Sl2Element, f: &Poly) -> Poly {
    dpi_in(lambda, x, f, "z")
}

/// Finite-support element `sum_l coeffs[l] v_l` of the lowest-weight module
/// `V_lambda`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LwVector {
    pub lambda: Rat,
    pub coeffs: BTreeMap<u32, Rat>,
}

impl LwVector {
    pub fn basis(lambda: Rat, l: u32) -> LwVector {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(l, rint(1));
        LwVector { lambda, coeffs }
    }

    pub fn zero(lambda: Rat) -> LwVector {
        LwVector { lambda, coeffs: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn insert(&mut self, l: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(l).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&l);
        }
    }
}

/// Action of a generator on a lowest-weight vector.
pub fn lw_action(x: Sl2Element, v: &LwVector) -> LwVector {
    let lambda = v.lambda.clone();
    let mut out = LwVector::zero(lambda.clone());
    for (&l, c) in &v.coeffs {
        match x {
            Sl2Element::EPlus => out.insert(l + 1, c.clone()),
            Sl2Element::EMinus => {
                if l > 0 {
                    let factor = -rint(l as i64) * (&lambda + rint(l as i64 - 1));
                    out.insert(l - 1, c * factor);
                }
            }
            Sl2Element::H => {
                out.insert(l, c * (&lambda + rint(2 * l as i64)));
            }
            Sl2Element::Casimir => {
                out.insert(l, c * (&lambda * &lambda - &lambda * rint(2)));
            }
        }
    }
    out
}

/// Finite-support element of `V_lp (x) V_lpp` in the tensor basis
/// `v_l (x) v_m`. An element is an `h`-eigenvector iff its support lies on a
/// single diagonal `l + m = const`, with eigenvalue `lp + lpp + 2(l + m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorVector {
    pub lp: Rat,
    pub lpp: Rat,
    pub coeffs: BTreeMap<(u32, u32), Rat>,
}

impl TensorVector {
    pub fn zero(lp: Rat, lpp: Rat) -> TensorVector {
        TensorVector { lp, lpp, coeffs: BTreeMap::new() }
    }

    pub fn basis(lp: Rat, lpp: Rat, l: u32, m: u32) -> TensorVector {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((l, m), rint(1));
        TensorVector { lp, lpp, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn insert(&mut self, key: (u32, u32), c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(key).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&key);
        }
    }
}

/// Diagonal action `dpi_lp(X) (x) id + id (x) dpi_lpp(X)` on tensor vectors.
pub fn diagonal_action(x: Sl2Element, v: &TensorVector) -> TensorVector {
    let mut out = TensorVector::zero(v.lp.clone(), v.lpp.clone());
    for (&(l, m), c) in &v.coeffs {
        let left = lw_action(x, &LwVector::basis(v.lp.clone(), l));
        for (&l2, cl) in &left.coeffs {
            out.insert((l2, m), c * cl);
        }
        let right = lw_action(x, &LwVector::basis(v.lpp.clone(), m));
        for (&m2, cr) in &right.coeffs {
            out.insert((l, m2), c * cr);
        }
    }
    out
}

/// Basis of the singular vectors of weight `lp + lpp + 2a`: the kernel of
/// the diagonal `e-` on the span of `{v_l (x) v_{a-l} : 0 <= l <= a}`,
/// computed by exact elimination on the lowering action itself.
///
/// The kernel always has dimension 1 or 2.
pub fn singular_vectors(lp: &Rat, lpp: &Rat, a: u32) -> Vec<TensorVector> {
    let n = (a + 1) as usize;
    // The image lives on the diagonal l + m = a - 1.
    let mut rows = vec![vec![Rat::zero(); n]; a as usize];
    for l in 0..=a {
        let image = diagonal_action(
            Sl2Element::EMinus,
            &TensorVector::basis(lp.clone(), lpp.clone(), l, a - l),
        );
        for (&(i, _), c) in &image.coeffs {
            rows[i as usize][l as usize] = c.clone();
        }
    }
    linalg::kernel_basis(&rows, n)
        .into_iter()
        .map(|v| {
            let mut tv = TensorVector::zero(lp.clone(), lpp.clone());
            for (l, c) in v.into_iter().enumerate() {
                tv.insert((l as u32, a - l as u32), c);
            }
            tv
        })
        .collect()
}

/// Closed-form singular-vector coefficients
/// `kappa_l = (-1)^{a+l} C(lpp + a - 1, l) C(lp + a - 1, a - l)`,
/// the solution of the lowering recurrence normalized so that the induced
/// symbol `sum_l kappa_l x^l y^{a-l}` equals the `a`-th Rankin-Cohen symbol.
///
/// Errors out when `(lpp)_a = 0`: there the normalization degenerates and
/// the caller must fall back to [`singular_vectors`].
pub fn kappa_closed_form(lp: &Rat, lpp: &Rat, a: u32) -> Result<BTreeMap<u32, Rat>, Sl2Error> {
    if pochhammer(lpp, a).is_zero() {
        return Err(Sl2Error::DegenerateNormalization);
    }
    let mut kappa = BTreeMap::new();
    for l in 0..=a {
        let c = sign_pow((a + l) as i64)
            * gen_binomial(&(lpp + rint(a as i64 - 1)), l)
            * gen_binomial(&(lp + rint(a as i64 - 1)), a - l);
        kappa.insert(l, c);
    }
    Ok(kappa)
}

/// Check the lowering recurrence
/// `(l+1)(lp + l) kappa_{l+1} + (a-l)(lpp + a - l - 1) kappa_l = 0`
/// for `0 <= l <= a-1`; coefficients missing from the map count as zero.
pub fn verify_recurrence(lp: &Rat, lpp: &Rat, a: u32, kappa: &BTreeMap<u32, Rat>) -> bool {
    let get = |l: u32| kappa.get(&l).cloned().unwrap_or_else(Rat::zero);
    for l in 0..a {
        let lhs = rint(l as i64 + 1) * (lp + rint(l as i64)) * get(l + 1)
            + rint((a - l) as i64) * (lpp + rint((a - l) as i64 - 1)) * get(l);
        if !lhs.is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rq;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn action_formulas() {
        for n in 1..=6u32 {
            let zn = Poly::monomial(rint(1), "z", n);
            let expect = Poly::monomial(rint(-(n as i64)), "z", n - 1);
            assert_eq!(dpi(&rq(5, 3), Sl2Element::EPlus, &zn), expect);
        }
        assert_eq!(dpi(&rint(3), Sl2Element::H, &Poly::one()), Poly::constant(rint(-3)));
        let f = p("1 + z");
        let lam = rq(-2, 7);
        let expect = f.scale(&(&lam * &lam - &lam * rint(2)));
        assert_eq!(dpi(&lam, Sl2Element::Casimir, &f), expect);
    }

    #[test]
    fn commutation_relations() {
        // [h, e+-] = +-2 e+-  and  [e+, e-] = h, on monomials z^n.
        use Sl2Element::{EMinus, EPlus, H};
        for lam in [rint(-3), rint(0), rint(2), rq(1, 2), rq(-7, 3)] {
            for n in 0..=10u32 {
                let f = Poly::monomial(rint(1), "z", n);
                for (e, sign) in [(EPlus, 1i64), (EMinus, -1)] {
                    let lhs = &dpi(&lam, H, &dpi(&lam, e, &f)) - &dpi(&lam, e, &dpi(&lam, H, &f));
                    let rhs = dpi(&lam, e, &f).scale(&rint(2 * sign));
                    assert_eq!(lhs, rhs, "lambda={lam} n={n} {e:?}");
                }
                let lhs = &dpi(&lam, EPlus, &dpi(&lam, EMinus, &f))
                    - &dpi(&lam, EMinus, &dpi(&lam, EPlus, &f));
                assert_eq!(lhs, dpi(&lam, H, &f), "lambda={lam} n={n}");
            }
        }
    }

    #[test]
    fn casimir_from_generators() {
        // h^2 + 2h + 4 e- e+ acts by lambda^2 - 2 lambda.
        use Sl2Element::{EMinus, EPlus, H};
        for lam in [rint(4), rq(1, 3), rint(-2)] {
            for n in 0..=10u32 {
                let f = Poly::monomial(rint(1), "z", n);
                let h1 = dpi(&lam, H, &f);
                let composite = &(&dpi(&lam, H, &h1) + &h1.scale(&rint(2)))
                    + &dpi(&lam, EMinus, &dpi(&lam, EPlus, &f)).scale(&rint(4));
                assert_eq!(composite, dpi(&lam, Sl2Element::Casimir, &f), "lambda={lam} n={n}");
            }
        }
    }

    #[test]
    fn lowest_weight_action() {
        let v0 = LwVector::basis(rint(2), 0);
        assert!(lw_action(Sl2Element::EMinus, &v0).is_zero());
        let v1 = LwVector::basis(rint(2), 1);
        let down = lw_action(Sl2Element::EMinus, &v1);
        assert_eq!(down.coeffs, BTreeMap::from([(0, rint(-2))]));
        let v2 = LwVector::basis(rint(1), 2);
        let h = lw_action(Sl2Element::H, &v2);
        assert_eq!(h.coeffs, BTreeMap::from([(2, rint(5))]));
    }

    #[test]
    fn raising_adds_two_to_the_weight() {
        // h e+ = e+ h + 2 e+ on every basis vector.
        for lam in [rint(3), rq(-1, 2)] {
            for l in 0..=6u32 {
                let v = LwVector::basis(lam.clone(), l);
                let raised = lw_action(Sl2Element::EPlus, &v);
                let h_raised = lw_action(Sl2Element::H, &raised);
                let mut rhs = lw_action(Sl2Element::EPlus, &lw_action(Sl2Element::H, &v));
                for (&i, c) in &raised.coeffs {
                    rhs.insert(i, c * rint(2));
                }
                assert_eq!(h_raised, rhs, "lambda={lam} l={l}");
            }
        }
    }

    #[test]
    fn tensor_diagonals_are_h_eigenvectors() {
        // Support on l + m = const gives eigenvalue lp + lpp + 2(l + m).
        let (lp, lpp) = (rq(1, 2), rint(-3));
        for (l, m) in [(0u32, 0u32), (1, 2), (3, 0)] {
            let v = TensorVector::basis(lp.clone(), lpp.clone(), l, m);
            let hv = diagonal_action(Sl2Element::H, &v);
            let eigen = &lp + &lpp + rint(2 * (l + m) as i64);
            assert_eq!(hv.coeffs, BTreeMap::from([((l, m), eigen)]));
        }
    }

    #[test]
    fn singular_vector_basics() {
        let sv = singular_vectors(&rint(7), &rint(5), 0);
        assert_eq!(sv.len(), 1);
        assert_eq!(sv[0].coeffs, BTreeMap::from([((0, 0), rint(1))]));

        // lp = lpp = 2, a = 1: kappa_1 = -kappa_0.
        let sv = singular_vectors(&rint(2), &rint(2), 1);
        assert_eq!(sv.len(), 1);
        assert_eq!(sv[0].coeffs, BTreeMap::from([((0, 1), rint(1)), ((1, 0), rint(-1))]));

        // Degenerate point: the whole weight space is singular.
        let sv = singular_vectors(&rint(0), &rint(0), 1);
        assert_eq!(sv.len(), 2);
    }

    #[test]
    fn singular_vectors_are_killed_by_lowering() {
        for lp in -3i64..=3 {
            for lpp in -3i64..=3 {
                for a in 0..=4u32 {
                    for sv in singular_vectors(&rint(lp), &rint(lpp), a) {
                        assert!(!sv.is_zero());
                        assert!(
                            diagonal_action(Sl2Element::EMinus, &sv).is_zero(),
                            "lp={lp} lpp={lpp} a={a}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let k = kappa_closed_form(&rint(2), &rint(2), 1).unwrap();
        assert_eq!(&k[&0] / &k[&1], rint(-1));

        let k = kappa_closed_form(&rint(4), &rint(6), 0).unwrap();
        assert_eq!(k, BTreeMap::from([(0, rint(1))]));

        assert_eq!(kappa_closed_form(&rint(0), &rint(0), 1), Err(Sl2Error::DegenerateNormalization));
    }

    #[test]
    fn closed_form_satisfies_the_recurrence() {
        let k = kappa_closed_form(&rint(3), &rint(5), 4).unwrap();
        assert!(verify_recurrence(&rint(3), &rint(5), 4, &k));

        let ones = BTreeMap::from([(0, rint(1)), (1, rint(1))]);
        assert!(!verify_recurrence(&rint(2), &rint(2), 1, &ones));

        assert!(verify_recurrence(&rint(9), &rint(9), 0, &BTreeMap::from([(0, rint(7))])));
    }

    #[test]
    fn closed_form_matches_the_kernel_line() {
        for lp in -4i64..=6 {
            for lpp in -4i64..=6 {
                for a in 0..=5u32 {
                    let Ok(kappa) = kappa_closed_form(&rint(lp), &rint(lpp), a) else {
                        continue;
                    };
                    assert!(
                        verify_recurrence(&rint(lp), &rint(lpp), a, &kappa),
                        "lp={lp} lpp={lpp} a={a}"
                    );
                    let sv = singular_vectors(&rint(lp), &rint(lpp), a);
                    assert_eq!(sv.len(), 1, "lp={lp} lpp={lpp} a={a}");
                    let kv: Vec<Rat> = (0..=a).map(|l| kappa[&l].clone()).collect();
                    let sv0: Vec<Rat> = (0..=a)
                        .map(|l| sv[0].coeffs.get(&(l, a - l)).cloned().unwrap_or_else(Rat::zero))
                        .collect();
                    assert!(
                        linalg::proportionality_constant(&kv, &sv0).is_some(),
                        "lp={lp} lpp={lpp} a={a}: {kv:?} vs {sv0:?}"
                    );
                }
            }
        }
    }
}
