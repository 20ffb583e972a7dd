//! Sparse multivariate polynomials over exact rationals.
//!
//! A [`Poly`] stores an ordered list of indeterminate names together with a
//! map from exponent vectors to nonzero rational coefficients. Binary
//! operations align variable sets automatically, and every constructor and
//! operation keeps the representation canonical: no zero coefficients are
//! stored and no variable is kept once it no longer occurs. Structural
//! equality therefore coincides with mathematical equality.
//!
//! The canonical text form lists terms in descending graded-lex order with
//! coefficients printed as reduced fractions, e.g. `3/2*x^2*y - x + 1/3`.
//! [`Poly::parse`] reads that form back (and a little more: implicit
//! multiplication and parentheses are accepted).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable `{0}` has no assigned value")]
    UnknownVariable(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Exact multivariate polynomial with named indeterminates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    /// Sorted, deduplicated variable names; empty for constants.
    vars: Vec<String>,
    /// Exponent vector (aligned with `vars`) -> nonzero coefficient.
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { vars: Vec::new(), terms: BTreeMap::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly { vars: Vec::new(), terms }
    }

    pub fn var(name: &str) -> Poly {
        let mut terms = BTreeMap::new();
        terms.insert(vec![1], Rat::one());
        Poly { vars: vec![name.to_string()], terms }
    }

    /// `c * name^exp`.
    pub fn monomial(c: Rat, name: &str, exp: u32) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if exp == 0 {
            return Poly::constant(c);
        }
        let mut terms = BTreeMap::new();
        terms.insert(vec![exp], c);
        Poly { vars: vec![name.to_string()], terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Iterate over `(exponent vector, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, name: &str) -> Option<u32> {
        let idx = self.vars.iter().position(|v| v == name)?;
        self.terms.keys().map(|e| e[idx]).max()
    }

    /// Coefficient of the monomial given as `(name, exponent)` pairs;
    /// variables not listed must have exponent zero.
    pub fn coeff(&self, monomial: &[(&str, u32)]) -> Rat {
        let mut exps = vec![0u32; self.vars.len()];
        for (name, e) in monomial {
            if *e == 0 {
                continue;
            }
            match self.vars.iter().position(|v| v == name) {
                Some(idx) => exps[idx] = *e,
                None => return Rat::zero(),
            }
        }
        self.terms.get(&exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rat {
        let exps = vec![0u32; self.vars.len()];
        self.terms.get(&exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// Drop zero coefficients and prune variables that no longer occur.
    fn normalize(mut self) -> Poly {
        self.terms.retain(|_, c| !c.is_zero());
        let keep: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.keys().any(|e| e[i] > 0))
            .collect();
        if keep.iter().all(|&k| k) {
            return self;
        }
        let vars: Vec<String> = self
            .vars
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(v, _)| v.clone())
            .collect();
        let terms = self
            .terms
            .into_iter()
            .map(|(e, c)| {
                let e2: Vec<u32> = e.iter().zip(&keep).filter(|(_, &k)| k).map(|(&x, _)| x).collect();
                (e2, c)
            })
            .collect();
        Poly { vars, terms }
    }

    /// Re-express `self` over the variable superset `vars` (sorted, containing
    /// all of `self.vars`).
    fn embed(&self, vars: &[String]) -> BTreeMap<Vec<u32>, Rat> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("superset"))
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = vec![0u32; vars.len()];
                for (i, &x) in e.iter().enumerate() {
                    e2[map[i]] = x;
                }
                (e2, c.clone())
            })
            .collect()
    }

    fn union_vars(a: &Poly, b: &Poly) -> Vec<String> {
        let mut vars: Vec<String> = a.vars.iter().chain(b.vars.iter()).cloned().collect();
        vars.sort();
        vars.dedup();
        vars
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect();
        Poly { vars: self.vars.clone(), terms }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative. Differentiating in a variable that does not
    /// occur yields zero.
    pub fn diff(&self, name: &str) -> Poly {
        let Some(idx) = self.vars.iter().position(|v| v == name) else {
            return Poly::zero();
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[idx] -= 1;
            let c2 = c * Rat::from_integer(e[idx].into());
            terms.insert(e2, c2);
        }
        Poly { vars: self.vars.clone(), terms }.normalize()
    }

    /// `d^n/d name^n`.
    pub fn diff_n(&self, name: &str, n: u32) -> Poly {
        let mut acc = self.clone();
        for _ in 0..n {
            acc = acc.diff(name);
        }
        acc
    }

    /// Substitute a polynomial for a variable. Substituting for a variable
    /// that does not occur is the identity.
    pub fn substitute(&self, name: &str, replacement: &Poly) -> Poly {
        let Some(idx) = self.vars.iter().position(|v| v == name) else {
            return self.clone();
        };
        let mut acc = Poly::zero();
        // Group by the exponent of `name`, reusing powers of the replacement.
        let mut by_exp: BTreeMap<u32, Poly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[idx];
            let mut e2 = e.clone();
            e2[idx] = 0;
            let mut terms = BTreeMap::new();
            terms.insert(e2, c.clone());
            let rest = Poly { vars: self.vars.clone(), terms }.normalize();
            let slot = by_exp.entry(k).or_insert_with(Poly::zero);
            *slot = &*slot + &rest;
        }
        let mut power = Poly::one();
        let mut prev = 0u32;
        for (k, part) in by_exp {
            for _ in prev..k {
                power = &power * replacement;
            }
            prev = k;
            acc = &acc + &(&part * &power);
        }
        acc
    }

    /// Evaluate at a full assignment of the variables.
    pub fn eval(&self, assignment: &BTreeMap<String, Rat>) -> Result<Rat, PolyError> {
        for v in &self.vars {
            if !assignment.contains_key(v) {
                return Err(PolyError::UnknownVariable(v.clone()));
            }
        }
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &x) in e.iter().enumerate() {
                let val = &assignment[&self.vars[i]];
                for _ in 0..x {
                    t *= val;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Rename a variable (the new name must not already occur).
    pub fn rename(&self, from: &str, to: &str) -> Poly {
        self.substitute(from, &Poly::var(to))
    }

    /// Build from explicit terms; zero coefficients are dropped.
    pub fn from_terms(vars: &[&str], terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Poly {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]), "vars must be sorted");
        let mut map: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (e, c) in terms {
            debug_assert_eq!(e.len(), vars.len());
            let entry = map.entry(e).or_insert_with(Rat::zero);
            *entry += c;
        }
        Poly { vars, terms: map }.normalize()
    }

    /// Terms in descending graded-lex order.
    fn sorted_terms(&self) -> Vec<(&Vec<u32>, &Rat)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|(ea, _), (eb, _)| grlex(eb, ea));
        ts
    }

    /// Canonical text form: descending graded-lex, `*` between factors,
    /// rational coefficients as `p/q`.
    pub fn canonical_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const_term = e.iter().all(|&x| x == 0);
            if !mag.is_one() || is_const_term {
                factors.push(mag.to_string());
            }
            for (idx, &x) in e.iter().enumerate() {
                if x == 1 {
                    factors.push(self.vars[idx].clone());
                } else if x > 1 {
                    factors.push(format!("{}^{}", self.vars[idx], x));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parse a polynomial expression: `+ - * ^`, parentheses, rational
    /// literals (`p/q`), identifiers, and implicit multiplication by
    /// juxtaposition (`6x`, `2 x y^2`).
    pub fn parse(input: &str) -> Result<Poly, PolyError> {
        let mut p = Parser { input: input.as_bytes(), pos: 0 };
        let poly = p.expr()?;
        p.skip_ws();
        if p.pos != p.input.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(poly)
    }
}

/// Graded-lex order: compare total degree first, then the exponent vector
/// lexicographically. Vectors must have equal length.
fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let vars = Poly::union_vars(self, rhs);
        let mut terms = self.embed(&vars);
        for (e, c) in rhs.embed(&vars) {
            let entry = terms.entry(e).or_insert_with(Rat::zero);
            *entry += c;
        }
        Poly { vars, terms }.normalize()
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        Poly { vars: self.vars.clone(), terms }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let vars = Poly::union_vars(self, rhs);
        let a = self.embed(&vars);
        let b = rhs.embed(&vars);
        let mut terms: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let entry = terms.entry(e).or_insert_with(Rat::zero);
                *entry += ca * cb;
            }
        }
        Poly { vars, terms }.normalize()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, PolyError> {
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                negate = true;
            }
            Some(b'+') => {
                self.pos += 1;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        while let Some(op) = self.peek() {
            if op != b'+' && op != b'-' {
                break;
            }
            self.pos += 1;
            let t = self.term()?;
            acc = if op == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                // Implicit multiplication: a factor can start right away.
                Some(c) if c == b'(' || c.is_ascii_alphabetic() || c.is_ascii_digit() => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, PolyError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.uint()?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Poly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let p = self.uint()? as i64;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let q = self.uint()? as i64;
                    if q == 0 {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(Poly::constant(crate::rational::rq(p, q)))
                } else {
                    Ok(Poly::constant(crate::rational::rint(p)))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.input.len()
                    && (self.input[self.pos].is_ascii_alphanumeric() || self.input[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
                Ok(Poly::var(name))
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }

    fn uint(&mut self) -> Result<u32, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.input[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rint, rq};

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn arithmetic_basics() {
        assert_eq!(&p("x+y") * &p("x-y"), p("x^2 - y^2"));
        assert_eq!(p("z^2").diff("z"), p("2z"));
        let sub = p("t^2").substitute("t", &p("1-2z"));
        assert_eq!(sub, p("1 - 4z + 4z^2"));
    }

    #[test]
    fn variables_prune_to_canonical_form() {
        let a = &p("x + y") - &p("y");
        assert_eq!(a, Poly::var("x"));
        assert_eq!(a.vars(), &["x".to_string()]);
        assert!((&p("x") - &p("x")).is_zero());
    }

    #[test]
    fn degree_and_coeff() {
        let f = p("3/2 x^2 y - x + 1/3");
        assert_eq!(f.total_degree(), Some(3));
        assert_eq!(f.degree_in("x"), Some(2));
        assert_eq!(f.coeff(&[("x", 2), ("y", 1)]), rq(3, 2));
        assert_eq!(f.coeff(&[("x", 1)]), rint(-1));
        assert_eq!(f.constant_term(), rq(1, 3));
        assert_eq!(f.coeff(&[("q", 5)]), rint(0));
    }

    #[test]
    fn diff_absent_variable_is_zero() {
        assert!(p("x^2").diff("y").is_zero());
        assert!(Poly::one().diff("x").is_zero());
    }

    #[test]
    fn substitute_groups_powers() {
        let f = p("t^3 + 2t + 5");
        let g = f.substitute("t", &p("z + 1"));
        assert_eq!(g, p("z^3 + 3z^2 + 5z + 8"));
    }

    #[test]
    fn eval_requires_full_assignment() {
        let f = p("x*y + 2");
        let mut asn = std::collections::BTreeMap::new();
        asn.insert("x".to_string(), rint(3));
        assert!(matches!(f.eval(&asn), Err(PolyError::UnknownVariable(_))));
        asn.insert("y".to_string(), rq(1, 3));
        assert_eq!(f.eval(&asn).unwrap(), rint(3));
    }

    #[test]
    fn canonical_text_ordering() {
        assert_eq!(p("y^2 + x^2 + x*y + y + x + 1").canonical_text(), "x^2 + x*y + y^2 + x + y + 1");
        assert_eq!(p("6x - 4y").canonical_text(), "6*x - 4*y");
        assert_eq!(Poly::zero().canonical_text(), "0");
        assert_eq!(p("-x - 1/2").canonical_text(), "-x - 1/2");
    }

    #[test]
    fn parse_errors_carry_positions() {
        match Poly::parse("x +") {
            Err(PolyError::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(Poly::parse("x ^ y").is_err());
        assert!(Poly::parse("(x").is_err());
        assert!(Poly::parse("1/0").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly() -> impl Strategy<Value = Poly> {
            let term = (
                prop::sample::select(vec!["x", "y", "z"]),
                0u32..4,
                -20i64..=20,
            );
            prop::collection::vec(term, 0..6).prop_map(|ts| {
                let mut acc = Poly::zero();
                for (v, e, c) in ts {
                    let m = Poly::monomial(crate::rational::rint(c), v, e);
                    acc = &acc + &m;
                }
                acc
            })
        }

        proptest! {
            #[test]
            fn distributive(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
                let lhs = &(&f + &g) * &h;
                let rhs = &(&f * &h) + &(&g * &h);
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn product_rule(f in arb_poly(), g in arb_poly()) {
                let lhs = (&f * &g).diff("x");
                let rhs = &(&f.diff("x") * &g) + &(&f * &g.diff("x"));
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn canonical_round_trip(f in arb_poly()) {
                let text = f.canonical_text();
                let back = Poly::parse(&text).unwrap();
                prop_assert_eq!(back, f);
            }
        }
    }
}
