//! Exact q-expansion arithmetic for level-one modular forms, used to check
//! that Rankin-Cohen brackets of modular forms are modular.
//!
//! Forms are truncated power series in `q` with rational coefficients. The
//! bracket is computed with `theta = q d/dq` in place of the holomorphic
//! derivative: each derivative contributes a uniform `2 pi i` factor, so the
//! theta-bracket equals the true bracket up to the global constant
//! `(2 pi i)^a`, which is irrelevant to membership questions in the rational
//! basis `{E4^i E6^j}` and keeps all arithmetic in Q.
//!
//! Membership in `M_k` is decided by an exact overdetermined linear solve
//! against the monomial basis in `E4` and `E6`; that `M_* = C[E4, E6]` is
//! classical input, not something this module proves.

use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg;
use crate::rational::{gen_binomial, rint, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QExpError {
    #[error("unsupported Eisenstein weight {0}; only 4 and 6 are built in")]
    UnsupportedWeight(u32),
    #[error("weight {0} must be even")]
    OddWeight(u32),
    #[error("insufficient truncation: need at least {needed}, got {got}")]
    InsufficientTruncation { needed: u32, got: u32 },
    #[error("the input is not a modular form of the claimed weight")]
    NotModular,
    #[error("output weight must be 2*lambda + 4 = {expected}, got {got}")]
    WeightMismatch { expected: u32, got: u32 },
}

/// Truncated q-expansion: coefficients of `q^0 .. q^truncation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rat>,
}

impl QSeries {
    pub fn zero(truncation: u32) -> QSeries {
        QSeries { coeffs: vec![Rat::zero(); truncation as usize + 1] }
    }

    pub fn one(truncation: u32) -> QSeries {
        let mut s = QSeries::zero(truncation);
        s.coeffs[0] = Rat::one();
        s
    }

    pub fn truncation(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeff(&self, n: u32) -> Rat {
        self.coeffs.get(n as usize).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set_coeff(&mut self, n: u32, c: Rat) {
        self.coeffs[n as usize] = c;
    }

    pub fn constant_term(&self) -> Rat {
        self.coeffs[0].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    /// Nonzero coefficients in ascending order of the exponent.
    pub fn entries(&self) -> impl Iterator<Item = (u32, &Rat)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (n as u32, c))
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let t = self.truncation().min(other.truncation());
        let mut out = QSeries::zero(t);
        for n in 0..=t {
            out.coeffs[n as usize] = self.coeff(n) + other.coeff(n);
        }
        out
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        self.add(&other.scale(&rint(-1)))
    }

    pub fn mul(&self, other: &QSeries) -> QSeries {
        let t = self.truncation().min(other.truncation());
        let mut out = QSeries::zero(t);
        for i in 0..=t {
            if self.coeffs[i as usize].is_zero() {
                continue;
            }
            for j in 0..=(t - i) {
                if other.coeffs[j as usize].is_zero() {
                    continue;
                }
                let prod = &self.coeffs[i as usize] * &other.coeffs[j as usize];
                out.coeffs[(i + j) as usize] += prod;
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// `theta = q d/dq`.
    pub fn theta(&self) -> QSeries {
        let mut out = self.clone();
        for (n, c) in out.coeffs.iter_mut().enumerate() {
            *c *= rint(n as i64);
        }
        out
    }

    pub fn theta_n(&self, n: u32) -> QSeries {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.theta();
        }
        out
    }

    pub fn pow(&self, n: u32) -> QSeries {
        let mut acc = QSeries::one(self.truncation());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Truncate to a smaller order.
    pub fn truncated(&self, truncation: u32) -> QSeries {
        debug_assert!(truncation <= self.truncation());
        QSeries { coeffs: self.coeffs[..=truncation as usize].to_vec() }
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use num_traits::Signed;
        let mut first = true;
        for (n, c) in self.entries() {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            match n {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if n == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{n}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Bernoulli number `B_n` (with `B_1 = -1/2`) via the standard recurrence
/// `sum_k C(n+1, k) B_k = 0`.
pub fn bernoulli(n: u32) -> Rat {
    let mut b: Vec<Rat> = Vec::with_capacity(n as usize + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Rat::one());
            continue;
        }
        let mut acc = Rat::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += gen_binomial(&rint(m as i64 + 1), k as u32) * bk;
        }
        b.push(-acc / rint(m as i64 + 1));
    }
    b[n as usize].clone()
}

/// Normalized Eisenstein series `E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n`
/// for `k` in `{4, 6}`, truncated at `q^truncation`.
pub fn eisenstein_q(k: u32, truncation: u32) -> Result<QSeries, QExpError> {
    if k != 4 && k != 6 {
        return Err(QExpError::UnsupportedWeight(k));
    }
    debug_assert!(truncation >= 1);
    let mut sigma = vec![BigInt::zero(); truncation as usize + 1];
    for d in 1..=truncation as usize {
        let dk = BigInt::from(d).pow(k - 1);
        for m in (d..=truncation as usize).step_by(d) {
            sigma[m] += &dk;
        }
    }
    let factor = -rint(2 * k as i64) / bernoulli(k);
    let mut out = QSeries::one(truncation);
    for (n, s) in sigma.iter().enumerate().skip(1) {
        out.coeffs[n] = &factor * Rat::from_integer(s.clone());
    }
    Ok(out)
}

/// Ramanujan's delta: `q prod_{n=1}^{N} (1 - q^n)^24` truncated at `q^N`.
pub fn delta_q(truncation: u32) -> QSeries {
    debug_assert!(truncation >= 1);
    let mut acc = QSeries::zero(truncation);
    acc.set_coeff(1, Rat::one());
    for n in 1..=truncation {
        // (1 - q^n)^24 expanded binomially; exponents beyond the truncation
        // cannot contribute.
        let mut factor = QSeries::zero(truncation);
        let mut k = 0u32;
        while n * k <= truncation && k <= 24 {
            let c = gen_binomial(&rint(24), k) * crate::rational::sign_pow(k as i64);
            factor.set_coeff(n * k, c);
            k += 1;
        }
        acc = acc.mul(&factor);
    }
    acc
}

/// The theta-model Rankin-Cohen bracket
/// `sum_l (-1)^l C(lp+a-1, l) C(lpp+a-1, a-l) theta^{a-l} f1 * theta^l f2`.
pub fn rc_q(f1: &QSeries, lp: i64, f2: &QSeries, lpp: i64, a: u32) -> Result<QSeries, QExpError> {
    let t = f1.truncation().min(f2.truncation());
    if t < a + 2 {
        return Err(QExpError::InsufficientTruncation { needed: a + 2, got: t });
    }
    let mut acc = QSeries::zero(t);
    for l in 0..=a {
        let c = crate::rational::sign_pow(l as i64)
            * gen_binomial(&rint(lp + a as i64 - 1), l)
            * gen_binomial(&rint(lpp + a as i64 - 1), a - l);
        if c.is_zero() {
            continue;
        }
        let term = f1.theta_n(a - l).truncated(t).mul(&f2.theta_n(l).truncated(t));
        acc = acc.add(&term.scale(&c));
    }
    Ok(acc)
}

/// A monomial `E4^i E6^j` of the weight-`k` basis.
#[derive(Clone, Debug)]
pub struct MkBasisElement {
    pub e4_power: u32,
    pub e6_power: u32,
    pub series: QSeries,
}

impl MkBasisElement {
    pub fn label(&self) -> String {
        match (self.e4_power, self.e6_power) {
            (0, 0) => "1".to_string(),
            (i, 0) => format!("E4^{i}"),
            (0, j) => format!("E6^{j}"),
            (i, j) => format!("E4^{i}*E6^{j}"),
        }
    }
}

/// The monomial basis `{E4^i E6^j : 4i + 6j = k}` of `M_k`, ordered by
/// descending `E4`-power, truncated at `q^truncation`.
pub fn basis_mk(k: u32, truncation: u32) -> Result<Vec<MkBasisElement>, QExpError> {
    if !k.is_multiple_of(2) {
        return Err(QExpError::OddWeight(k));
    }
    let e4 = eisenstein_q(4, truncation)?;
    let e6 = eisenstein_q(6, truncation)?;
    let mut out = Vec::new();
    for i in (0..=(k / 4)).rev() {
        let rem = k - 4 * i;
        if !rem.is_multiple_of(6) {
            continue;
        }
        let j = rem / 6;
        out.push(MkBasisElement { e4_power: i, e6_power: j, series: e4.pow(i).mul(&e6.pow(j)) });
    }
    Ok(out)
}

/// Decide membership of `f` in `M_k` by an exact overdetermined solve
/// against [`basis_mk`]; returns the coefficient vector if `f` is a member.
pub fn membership(f: &QSeries, k: u32) -> Result<Option<Vec<Rat>>, QExpError> {
    let basis = basis_mk(k, f.truncation())?;
    let needed = basis.len() as u32 + 2;
    if f.truncation() < needed {
        return Err(QExpError::InsufficientTruncation { needed, got: f.truncation() });
    }
    let rows: Vec<Vec<Rat>> = (0..=f.truncation())
        .map(|n| basis.iter().map(|b| b.series.coeff(n)).collect())
        .collect();
    let rhs: Vec<Rat> = (0..=f.truncation()).map(|n| f.coeff(n)).collect();
    Ok(linalg::solve(&rows, &rhs))
}

/// Check that `lambda f theta^2 f - (lambda + 1) (theta f)^2` lands in
/// `M_{2 lambda + 4}`, given `f` in `M_lambda`. Returns the membership
/// coefficients of the quadratic expression.
///
/// The output weight is forced by the polarization identity: `(lambda + 1)`
/// times the quadratic expression is the second bracket of `(f, f)`, which
/// has weight `lambda + lambda + 4`. Each term carries two derivatives, and
/// every derivative raises the weight by two.
pub fn rc2q_check(f: &QSeries, lambda: u32, k_out: u32) -> Result<Option<Vec<Rat>>, QExpError> {
    if k_out != 2 * lambda + 4 {
        return Err(QExpError::WeightMismatch { expected: 2 * lambda + 4, got: k_out });
    }
    if membership(f, lambda)?.is_none() {
        return Err(QExpError::NotModular);
    }
    let quad = quadratic_expression(f, lambda);
    membership(&quad, k_out)
}

/// `lambda f theta^2 f - (lambda + 1) (theta f)^2`.
pub fn quadratic_expression(f: &QSeries, lambda: u32) -> QSeries {
    let theta_f = f.theta();
    let lhs = f.mul(&f.theta_n(2)).scale(&rint(lambda as i64));
    lhs.sub(&theta_f.mul(&theta_f).scale(&rint(lambda as i64 + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rq;

    const N: u32 = 20;

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), rint(1));
        assert_eq!(bernoulli(1), rq(-1, 2));
        assert_eq!(bernoulli(2), rq(1, 6));
        assert_eq!(bernoulli(4), rq(-1, 30));
        assert_eq!(bernoulli(6), rq(1, 42));
        assert_eq!(bernoulli(12), rq(-691, 2730));
    }

    #[test]
    fn eisenstein_coefficients() {
        let e4 = eisenstein_q(4, N).unwrap();
        assert_eq!(
            (0..=3).map(|n| e4.coeff(n)).collect::<Vec<_>>(),
            vec![rint(1), rint(240), rint(2160), rint(6720)]
        );
        let e6 = eisenstein_q(6, N).unwrap();
        assert_eq!(
            (0..=2).map(|n| e6.coeff(n)).collect::<Vec<_>>(),
            vec![rint(1), rint(-504), rint(-16632)]
        );
        assert_eq!(eisenstein_q(8, N), Err(QExpError::UnsupportedWeight(8)));
    }

    #[test]
    fn delta_coefficients() {
        let d = delta_q(N);
        assert_eq!(d.coeff(0), rint(0)); // cuspidal
        assert_eq!(d.coeff(1), rint(1));
        assert_eq!(d.coeff(2), rint(-24));
        assert_eq!(d.coeff(3), rint(252));
        assert_eq!(d.coeff(4), rint(-1472));
        assert_eq!(d.coeff(5), rint(4830));
    }

    #[test]
    fn delta_is_the_discriminant_combination() {
        // (E4^3 - E6^2) / 1728 = Delta.
        let e4 = eisenstein_q(4, N).unwrap();
        let e6 = eisenstein_q(6, N).unwrap();
        let comb = e4.pow(3).sub(&e6.pow(2)).scale(&rq(1, 1728));
        assert_eq!(comb, delta_q(N));
    }

    #[test]
    fn bracket_basics() {
        let e4 = eisenstein_q(4, N).unwrap();
        let e6 = eisenstein_q(6, N).unwrap();
        assert_eq!(rc_q(&e4, 4, &e6, 6, 0).unwrap(), e4.mul(&e6));
        assert!(rc_q(&e4, 4, &e4, 4, 1).unwrap().is_zero());
        let small = QSeries::one(2);
        assert!(matches!(
            rc_q(&small, 4, &small, 4, 1),
            Err(QExpError::InsufficientTruncation { .. })
        ));
    }

    #[test]
    fn first_bracket_of_e4_e6_is_a_multiple_of_delta() {
        let e4 = eisenstein_q(4, N).unwrap();
        let e6 = eisenstein_q(6, N).unwrap();
        let br = rc_q(&e4, 4, &e6, 6, 1).unwrap();
        assert_eq!(br.constant_term(), rint(0));
        assert_eq!(br, delta_q(N).scale(&rint(3456)));
        let coeffs = membership(&br, 12).unwrap().unwrap();
        assert_eq!(coeffs, vec![rint(2), rint(-2)]); // 2 E4^3 - 2 E6^2
    }

    #[test]
    fn basis_enumeration() {
        let b = basis_mk(0, N).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].label(), "1");

        let b = basis_mk(10, N).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!((b[0].e4_power, b[0].e6_power), (1, 1));

        let b = basis_mk(12, N).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!((b[0].e4_power, b[0].e6_power), (3, 0));
        assert_eq!((b[1].e4_power, b[1].e6_power), (0, 2));

        assert_eq!(basis_mk(2, N).unwrap().len(), 0);
        assert!(matches!(basis_mk(7, N), Err(QExpError::OddWeight(7))));
    }

    #[test]
    fn membership_examples() {
        let e4 = eisenstein_q(4, N).unwrap();
        assert_eq!(membership(&e4.pow(2), 8).unwrap(), Some(vec![rint(1)]));

        // E4 plus junk in a higher coefficient is not modular of weight 4.
        let mut junk = e4.clone();
        junk.set_coeff(7, junk.coeff(7) + rint(1));
        assert_eq!(membership(&junk, 4).unwrap(), None);

        assert_eq!(membership(&QSeries::zero(N), 2).unwrap(), Some(vec![]));
        let one = QSeries::one(N);
        assert_eq!(membership(&one, 2).unwrap(), None); // dim M_2 = 0
    }

    #[test]
    fn quadratic_membership_checks() {
        let e4 = eisenstein_q(4, N).unwrap();
        let e6 = eisenstein_q(6, N).unwrap();
        let d = delta_q(30);
        // quad(E4) = 960 Delta, a weight-12 cusp form.
        let coeffs = rc2q_check(&e4, 4, 12).unwrap().unwrap();
        assert_eq!(coeffs, vec![rq(960, 1728), rq(-960, 1728)]);
        assert!(rc2q_check(&e6, 6, 16).unwrap().is_some());
        let delta_out = rc2q_check(&d, 12, 28).unwrap().unwrap();
        assert!(!delta_out.is_empty());
        let quad = quadratic_expression(&d, 12);
        assert_eq!(quad.constant_term(), rint(0));

        assert!(matches!(rc2q_check(&e4, 4, 10), Err(QExpError::WeightMismatch { .. })));
        assert!(matches!(rc2q_check(&d.truncated(N), 4, 12), Err(QExpError::NotModular)));
    }

    #[test]
    fn quadratic_is_the_polarized_second_bracket() {
        // (lambda + 1) * quadratic = RC_2(f, f) in the theta model too.
        let e4 = eisenstein_q(4, N).unwrap();
        let lhs = quadratic_expression(&e4, 4).scale(&rint(5));
        let rhs = rc_q(&e4, 4, &e4, 4, 2).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_matches_expected_layout() {
        assert_eq!(delta_q(5).to_string(), "q - 24q^2 + 252q^3 - 1472q^4 + 4830q^5");
        assert_eq!(eisenstein_q(4, 2).unwrap().to_string(), "1 + 240q + 2160q^2");
        assert_eq!(QSeries::zero(3).to_string(), "0");
    }
}
