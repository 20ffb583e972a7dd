//! Constant-coefficient bidifferential operators represented by symbols.
//!
//! An operator is stored as its symbol `Q(x, y)`: it acts on a function
//! `f(z1, z2)` as `Rest_{z1=z2=z} Q(d/dz1, d/dz2) f`, i.e. each symbol
//! monomial `c x^i y^j` contributes `c (d/dz1)^i (d/dz2)^j f` restricted to
//! the diagonal. The symbol determines the operator uniquely, so all symbol
//! manipulations below are honest operator identities.

use crate::poly::Poly;
use crate::rational::Rat;

/// Symbol variable names: `x` stands for `d/dz1`, `y` for `d/dz2`.
pub const SYM_X: &str = "x";
pub const SYM_Y: &str = "y";
/// Source variables of the functions being acted on, and the diagonal variable.
pub const Z1: &str = "z1";
pub const Z2: &str = "z2";
pub const Z: &str = "z";

/// A bidifferential operator `Rest ∘ Q(d/dz1, d/dz2)` with weight metadata
/// `(lp, lpp, lppp)` recording the intended source and target weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiDiffOp {
    pub symbol: Poly,
    pub weights: (Rat, Rat, Rat),
}

impl BiDiffOp {
    pub fn new(symbol: Poly, lp: Rat, lpp: Rat, lppp: Rat) -> BiDiffOp {
        debug_assert!(
            symbol.vars().iter().all(|v| v == SYM_X || v == SYM_Y),
            "symbol must be a polynomial in x, y"
        );
        BiDiffOp { symbol, weights: (lp, lpp, lppp) }
    }

    pub fn is_zero(&self) -> bool {
        self.symbol.is_zero()
    }

    /// Apply to `f(z1, z2)`: differentiate per symbol monomial, then restrict
    /// to the diagonal `z1 = z2 = z`.
    pub fn apply(&self, f: &Poly) -> Poly {
        debug_assert!(
            f.vars().iter().all(|v| v == Z1 || v == Z2),
            "operand must be a polynomial in z1, z2"
        );
        let mut acc = Poly::zero();
        for (exps, c) in self.symbol.terms() {
            let (i, j) = split_xy(&self.symbol, exps);
            let g = f.diff_n(Z1, i).diff_n(Z2, j);
            let restricted = g.substitute(Z1, &Poly::var(Z)).substitute(Z2, &Poly::var(Z));
            acc = &acc + &restricted.scale(c);
        }
        acc
    }

    /// Pre-compose with `(d/dz1)^k1 ⊗ (d/dz2)^k2` and post-compose with
    /// `(d/dz)^m`.
    ///
    /// At the symbol level the pre-compositions multiply by `x^k1 y^k2`; the
    /// post-restriction derivative acts as `d/dz1 + d/dz2` before restriction,
    /// i.e. multiplies the symbol by `(x + y)^m`. Weights shift accordingly:
    /// a `k`-th derivative moves weight `l` to `l + 2k`.
    pub fn compose(&self, pre_left: u32, pre_right: u32, post: u32) -> BiDiffOp {
        let x = Poly::var(SYM_X);
        let y = Poly::var(SYM_Y);
        let mut symbol = &self.symbol * &x.pow(pre_left);
        symbol = &symbol * &y.pow(pre_right);
        symbol = &symbol * &(&x + &y).pow(post);
        let (lp, lpp, lppp) = &self.weights;
        BiDiffOp {
            symbol,
            weights: (
                lp - crate::rational::rint(2 * pre_left as i64),
                lpp - crate::rational::rint(2 * pre_right as i64),
                lppp + crate::rational::rint(2 * post as i64),
            ),
        }
    }

    /// Coefficient vector of a homogeneous degree-`d` symbol, indexed by the
    /// exponent of `x` (so `[y^d, x y^(d-1), ..., x^d]`).
    pub fn homogeneous_coeffs(&self, d: u32) -> Vec<Rat> {
        (0..=d).map(|i| self.symbol.coeff(&[(SYM_X, i), (SYM_Y, d - i)])).collect()
    }
}

/// Read the `(x, y)` exponents of one symbol term.
fn split_xy(symbol: &Poly, exps: &[u32]) -> (u32, u32) {
    let mut i = 0;
    let mut j = 0;
    for (idx, v) in symbol.vars().iter().enumerate() {
        if v == SYM_X {
            i = exps[idx];
        } else if v == SYM_Y {
            j = exps[idx];
        }
    }
    (i, j)
}
