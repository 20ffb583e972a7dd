//! Exact rational scalars and the combinatorial coefficients built on them.
//!
//! Every coefficient in this crate is a [`Rat`] (an arbitrary-precision
//! reduced fraction with positive denominator, courtesy of `num-rational`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational scalar: reduced `p/q` with `q > 0`.
pub type Rat = BigRational;

/// The integer `n` as a [`Rat`].
pub fn rint(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// The fraction `p/q` as a [`Rat`]. Panics if `q == 0`.
pub fn rq(p: i64, q: i64) -> Rat {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `n!` as a [`Rat`].
pub fn factorial(n: u32) -> Rat {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rat::from_integer(acc)
}

/// Rising Pochhammer symbol `x (x+1) ... (x+n-1)`, with the empty product 1
/// for `n = 0`.
pub fn pochhammer(x: &Rat, n: u32) -> Rat {
    let mut acc = Rat::one();
    for j in 0..n {
        acc *= x + rint(j as i64);
    }
    acc
}

/// Generalized binomial coefficient `x (x-1) ... (x-k+1) / k!`.
///
/// This is a polynomial in `x` evaluated exactly; it agrees with the
/// ordinary binomial coefficient when `x` is a natural number `>= k` and is
/// meaningful (possibly zero or negative) for every rational `x`.
pub fn gen_binomial(x: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for j in 0..k {
        acc *= x - rint(j as i64);
    }
    acc / factorial(k)
}

/// True iff `x` is an integer.
pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

/// `x` as an `i64`, if it is an integer fitting the range.
pub fn to_i64(x: &Rat) -> Option<i64> {
    if !is_integer(x) {
        return None;
    }
    i64::try_from(x.numer().clone()).ok()
}

/// `(-1)^n` for a (possibly negative) integer exponent.
pub fn sign_pow(n: i64) -> Rat {
    if n.rem_euclid(2) == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

/// True iff `x` is zero.
pub fn is_zero(x: &Rat) -> bool {
    x.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pochhammer_basics() {
        assert_eq!(pochhammer(&rint(3), 2), rint(12));
        assert_eq!(pochhammer(&rq(7, 3), 0), rint(1));
        assert_eq!(pochhammer(&rint(-2), 4), rint(0)); // (-2)(-1)(0)(1)
    }

    #[test]
    fn pochhammer_additivity() {
        // (x)_{m+n} = (x)_m (x+m)_n on a rational grid
        for p in [-7i64, -2, 0, 1, 5] {
            for q in [1i64, 2, 3] {
                let x = rq(p, q);
                for m in 0..=10u32 {
                    for n in 0..=10u32 {
                        let lhs = pochhammer(&x, m + n);
                        let rhs = pochhammer(&x, m) * pochhammer(&(&x + rint(m as i64)), n);
                        assert_eq!(lhs, rhs, "x={x} m={m} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn gen_binomial_basics() {
        assert_eq!(gen_binomial(&rint(5), 2), rint(10));
        assert_eq!(gen_binomial(&rint(0), 1), rint(0));
        assert_eq!(gen_binomial(&rint(-1), 2), rint(1)); // (-1)(-2)/2
    }

    #[test]
    fn gen_binomial_matches_factorials() {
        for n in 0..=20u32 {
            for k in 0..=n {
                let expected = factorial(n) / (factorial(k) * factorial(n - k));
                assert_eq!(gen_binomial(&rint(n as i64), k), expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn integer_helpers() {
        assert!(is_integer(&rint(-9)));
        assert!(!is_integer(&rq(1, 2)));
        assert_eq!(to_i64(&rint(-9)), Some(-9));
        assert_eq!(to_i64(&rq(3, 2)), None);
        assert_eq!(sign_pow(-1), rint(-1));
        assert_eq!(sign_pow(-2), rint(1));
    }
}
