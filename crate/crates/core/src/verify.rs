//! Grid-sweep verification suites.
//!
//! Each suite runs the identities of one subsystem over exhaustive parameter
//! grids and reports counterexamples (the offending parameter tuple plus the
//! two conflicting values) instead of panicking. The CLI drives these; the
//! acceptance tests run the same grids at their documented depths.
//!
//! `depth` scales the grids; 6 is the default and corresponds to the
//! documented bounds (weights in `[-4, 8]`, orders up to 6, and so on).
//! Sweeps are embarrassingly parallel and run on the rayon pool; results are
//! collected in input order, so reports are deterministic.

use std::collections::BTreeMap;
use std::fmt::Display;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::classify::{self, case2_triples, classify, factorization_check, l2_condition, Case};
use crate::jacobi::{
    self, g_renormalized, jacobi_inflate, jacobi_ode_residual, jacobi_poly, jacobi_vanishes,
    lambda_set, ode_polynomial_kernel, JacobiParams,
};
use crate::linalg;
use crate::poly::Poly;
use crate::qexp::{self, delta_q, eisenstein_q, membership, quadratic_expression, rc_q, QSeries};
use crate::rankin_cohen::{
    covariance_check, rc_apply, rc_symbol, rc_symbol_via_jacobi, sbo_dimension_oracle, RcParams,
};
use crate::rational::{factorial, rint, rq, sign_pow, Rat};
use crate::sl2::{
    diagonal_action, dpi, kappa_closed_form, lw_action, singular_vectors, verify_recurrence,
    LwVector, Sl2Element,
};
use crate::un1::{un1_symbol, un1_vanishes, Un1Params};

/// Cap on serialized counterexamples per check; the total count is always
/// reported.
const MAX_COUNTEREXAMPLES: usize = 16;

/// A failed identity: the parameter tuple and the two conflicting values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub check: String,
    pub params: BTreeMap<String, String>,
    pub left: String,
    pub right: String,
}

/// Outcome of one named check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Outcome of a suite run.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub depth: u32,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }
}

/// The available suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Jacobi,
    Sl2,
    Rc,
    Classifier,
    Un1,
    Qexp,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Jacobi, Suite::Sl2, Suite::Rc, Suite::Classifier, Suite::Un1, Suite::Qexp];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Jacobi => "jacobi",
            Suite::Sl2 => "sl2",
            Suite::Rc => "rc",
            Suite::Classifier => "classifier",
            Suite::Un1 => "un1",
            Suite::Qexp => "qexp",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Suite, String> {
        match s {
            "jacobi" => Ok(Suite::Jacobi),
            "sl2" => Ok(Suite::Sl2),
            "rc" => Ok(Suite::Rc),
            "classifier" => Ok(Suite::Classifier),
            "un1" => Ok(Suite::Un1),
            "qexp" => Ok(Suite::Qexp),
            other => Err(format!("unknown suite `{other}`")),
        }
    }
}

/// Deliberate fault injections for exercising the counterexample path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Drop the alternating sign from the closed-form recurrence solution.
    RecurrenceSign,
}

impl std::str::FromStr for Fault {
    type Err = String;
    fn from_str(s: &str) -> Result<Fault, String> {
        match s {
            "recurrence-sign" => Ok(Fault::RecurrenceSign),
            other => Err(format!("unknown fault `{other}`")),
        }
    }
}

/// Run one suite at the given depth.
pub fn run_suite(suite: Suite, depth: u32) -> SuiteReport {
    run_suite_with_fault(suite, depth, None)
}

/// Run every suite at the given depth.
pub fn run_all(depth: u32) -> Vec<SuiteReport> {
    Suite::ALL.iter().map(|s| run_suite(*s, depth)).collect()
}

/// [`run_suite`] with an optional injected fault (self-test instrumentation:
/// a faulty build must surface as a counterexample report, not a pass).
pub fn run_suite_with_fault(suite: Suite, depth: u32, fault: Option<Fault>) -> SuiteReport {
    let depth = depth.max(2);
    let checks = match suite {
        Suite::Jacobi => jacobi_suite(depth),
        Suite::Sl2 => sl2_suite(depth, fault),
        Suite::Rc => rc_suite(depth),
        Suite::Classifier => classifier_suite(depth),
        Suite::Un1 => un1_suite(depth),
        Suite::Qexp => qexp_suite(depth),
    };
    SuiteReport { suite: suite.name().to_string(), depth, checks }
}

fn ce(check: &str, params: &[(&str, String)], left: impl Display, right: impl Display) -> Counterexample {
    Counterexample {
        check: check.to_string(),
        params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        left: left.to_string(),
        right: right.to_string(),
    }
}

/// Run `body` over `inputs` in parallel and collect the check result.
fn sweep<I, F>(name: &str, inputs: Vec<I>, body: F) -> CheckResult
where
    I: Send + Sync,
    F: Fn(&I) -> Option<Counterexample> + Sync + Send,
{
    let cases = inputs.len() as u64;
    let mut counterexamples: Vec<Counterexample> = inputs.par_iter().filter_map(&body).collect();
    let failures = counterexamples.len() as u64;
    counterexamples.truncate(MAX_COUNTEREXAMPLES);
    CheckResult { name: name.to_string(), cases, failures, counterexamples }
}

fn rational_parameter_grid() -> Vec<Rat> {
    vec![rint(-3), rint(-2), rint(-1), rint(0), rq(1, 2), rint(1), rq(7, 3)]
}

// ---------------------------------------------------------------------------
// jacobi
// ---------------------------------------------------------------------------

fn jacobi_suite(depth: u32) -> Vec<CheckResult> {
    let mut checks = Vec::new();

    // ODE annihilation over the rational parameter grid.
    let grid = rational_parameter_grid();
    let mut inputs = Vec::new();
    for a in 0..=(depth - 1) {
        for alpha in &grid {
            for beta in &grid {
                inputs.push((a, alpha.clone(), beta.clone()));
            }
        }
    }
    checks.push(sweep("ode-annihilation", inputs, |(a, alpha, beta)| {
        let p = JacobiParams::new(*a, alpha.clone(), beta.clone());
        let res = jacobi_ode_residual(&p, &jacobi_poly(&p));
        if res.is_zero() {
            None
        } else {
            let params =
                [("a", a.to_string()), ("alpha", alpha.to_string()), ("beta", beta.to_string())];
            Some(ce("ode-annihilation", &params, res, "0"))
        }
    }));

    // Rodrigues formula against the binomial sum, nonnegative integer
    // parameters.
    let mut inputs = Vec::new();
    for a in 0..=4u32.min(depth) {
        for alpha in 0..=3u32 {
            for beta in 0..=3u32 {
                inputs.push((a, alpha, beta));
            }
        }
    }
    checks.push(sweep("rodrigues-consistency", inputs, |&(a, alpha, beta)| {
        let direct = jacobi_poly(&JacobiParams::new(a, rint(alpha as i64), rint(beta as i64)));
        let rodrigues = rodrigues_route(a, alpha, beta)?;
        if rodrigues == direct {
            None
        } else {
            let params =
                [("a", a.to_string()), ("alpha", alpha.to_string()), ("beta", beta.to_string())];
            Some(ce("rodrigues-consistency", &params, rodrigues, direct))
        }
    }));

    // Identical vanishing on the exceptional set.
    let b = (depth + 2) as i64;
    let mut inputs = Vec::new();
    for ell in 0..=depth {
        for alpha in -b..=b {
            for beta in -b..=b {
                inputs.push((ell, alpha, beta));
            }
        }
    }
    checks.push(sweep("vanishing-equivalence", inputs, |&(ell, alpha, beta)| {
        let vanishes = jacobi_vanishes(&JacobiParams::new(ell, rint(alpha), rint(beta)));
        let exceptional = lambda_set(ell).contains(alpha, beta);
        if vanishes == exceptional {
            None
        } else {
            let params = [
                ("ell", ell.to_string()),
                ("alpha", alpha.to_string()),
                ("beta", beta.to_string()),
            ];
            Some(ce(
                "vanishing-equivalence",
                &params,
                format!("vanishes={vanishes}"),
                format!("exceptional={exceptional}"),
            ))
        }
    }));

    // Cardinality of the exceptional set.
    let inputs: Vec<u32> = (0..=(2 * depth - 2)).collect();
    checks.push(sweep("exceptional-cardinality", inputs, |&ell| {
        let got = lambda_set(ell).len() as u32;
        let expect = ell * (ell + 1) / 2;
        if got == expect {
            None
        } else {
            Some(ce("exceptional-cardinality", &[("ell", ell.to_string())], got, expect))
        }
    }));

    // Kernel dimension two exactly on the exceptional set; degree bound ell.
    let kd = depth.saturating_sub(2).max(1);
    let mut inputs = Vec::new();
    for ell in 1..=kd {
        for alpha in -(ell as i64 + 1)..=1 {
            for beta in -(ell as i64 + 1)..=1 {
                inputs.push((ell, alpha, beta));
            }
        }
    }
    checks.push(sweep("ode-kernel-dimension", inputs, |&(ell, alpha, beta)| {
        let kernel = ode_polynomial_kernel(ell, &rint(alpha), &rint(beta));
        let expect = if lambda_set(ell).contains(alpha, beta) { 2 } else { 1 };
        let params =
            [("ell", ell.to_string()), ("alpha", alpha.to_string()), ("beta", beta.to_string())];
        if kernel.len() != expect {
            return Some(ce("ode-kernel-dimension", &params, kernel.len(), expect));
        }
        for f in &kernel {
            if f.total_degree().unwrap_or(0) > ell {
                return Some(ce("ode-kernel-dimension", &params, f.clone(), "degree <= ell"));
            }
        }
        None
    }));

    // Renormalized solutions: linear dependence and degrees.
    let mut inputs = Vec::new();
    for ell in 1..=kd {
        for &(alpha, beta) in &lambda_set(ell).pairs {
            inputs.push((ell, alpha, beta));
        }
    }
    checks.push(sweep("kummer-relation", inputs, |&(ell, alpha, beta)| {
        let (g1, g2, g3) = g_renormalized(ell, alpha, beta).expect("exceptional parameters");
        let params =
            [("ell", ell.to_string()), ("alpha", alpha.to_string()), ("beta", beta.to_string())];
        let lhs = g3.scale(&sign_pow(alpha));
        let rhs = &g1 - &g2;
        if lhs != rhs {
            return Some(ce("kummer-relation", &params, lhs, rhs));
        }
        let degrees = (
            g1.total_degree().unwrap_or(0),
            g2.total_degree().unwrap_or(0),
            g3.total_degree().unwrap_or(0),
        );
        let expect = (ell, (-(alpha + beta + ell as i64 + 1)) as u32, ell);
        if degrees != expect {
            return Some(ce(
                "kummer-relation",
                &params,
                format!("{degrees:?}"),
                format!("{expect:?}"),
            ));
        }
        None
    }));

    // Inflation round trip.
    let grid = rational_parameter_grid();
    let mut inputs = Vec::new();
    for a in 0..=(depth - 1) {
        for alpha in &grid {
            for beta in &grid {
                inputs.push((a, alpha.clone(), beta.clone()));
            }
        }
    }
    checks.push(sweep("inflation-round-trip", inputs, |(a, alpha, beta)| {
        let p = JacobiParams::new(*a, alpha.clone(), beta.clone());
        let half_tm1 = (&Poly::var("t") - &Poly::one()).scale(&rq(1, 2));
        let back =
            jacobi_inflate(&p).substitute("y", &Poly::one()).substitute("x", &half_tm1);
        let direct = jacobi_poly(&p);
        if back == direct {
            None
        } else {
            let params =
                [("a", a.to_string()), ("alpha", alpha.to_string()), ("beta", beta.to_string())];
            Some(ce("inflation-round-trip", &params, back, direct))
        }
    }));

    checks
}

/// Rodrigues route: `((-1)^a / (2^a a!)) (1-t)^{-alpha} (1+t)^{-beta}
/// D^a [(1-t)^{a+alpha} (1+t)^{a+beta}]`, with the prefactors divided out
/// exactly. Independent of the binomial-sum construction.
fn rodrigues_route(a: u32, alpha: u32, beta: u32) -> Option<Poly> {
    let t = Poly::var(jacobi::T);
    let one_minus_t = &Poly::one() - &t;
    let one_plus_t = &Poly::one() + &t;
    let inner = (&one_minus_t.pow(a + alpha) * &one_plus_t.pow(a + beta)).diff_n(jacobi::T, a);
    let stripped = div_exact(&inner, &one_minus_t.pow(alpha), jacobi::T)
        .and_then(|q| div_exact(&q, &one_plus_t.pow(beta), jacobi::T))?;
    let mut two_pow = Rat::one();
    for _ in 0..a {
        two_pow *= rint(2);
    }
    Some(stripped.scale(&(sign_pow(a as i64) / (two_pow * factorial(a)))))
}

/// Exact univariate polynomial division; `None` if the division leaves a
/// remainder.
fn div_exact(num: &Poly, den: &Poly, var: &str) -> Option<Poly> {
    let mut rem = num.clone();
    let mut quot = Poly::zero();
    let dd = den.degree_in(var).unwrap_or(0);
    let lead = den.coeff(&[(var, dd)]);
    if lead.is_zero() {
        return None;
    }
    while !rem.is_zero() {
        let rd = rem.degree_in(var).unwrap_or(0);
        if rd < dd {
            return None;
        }
        let c = rem.coeff(&[(var, rd)]) / lead.clone();
        let m = Poly::monomial(c, var, rd - dd);
        quot = &quot + &m;
        rem = &rem - &(&m * den);
    }
    Some(quot)
}

// ---------------------------------------------------------------------------
// sl2
// ---------------------------------------------------------------------------

fn sl2_suite(depth: u32, fault: Option<Fault>) -> Vec<CheckResult> {
    use Sl2Element::{Casimir, EMinus, EPlus, H};
    let mut checks = Vec::new();

    // Commutation relations on monomials.
    let lambdas = vec![rint(-3), rint(-1), rint(0), rq(1, 2), rint(2), rq(-7, 3)];
    let mut inputs = Vec::new();
    for lam in &lambdas {
        for n in 0..=(depth + 4) {
            inputs.push((lam.clone(), n));
        }
    }
    checks.push(sweep("commutation-relations", inputs, |(lam, n)| {
        let f = Poly::monomial(Rat::one(), "z", *n);
        let params = [("lambda", lam.to_string()), ("n", n.to_string())];
        for (e, sign) in [(EPlus, 1i64), (EMinus, -1)] {
            let lhs = &dpi(lam, H, &dpi(lam, e, &f)) - &dpi(lam, e, &dpi(lam, H, &f));
            let rhs = dpi(lam, e, &f).scale(&rint(2 * sign));
            if lhs != rhs {
                return Some(ce("commutation-relations", &params, lhs, rhs));
            }
        }
        let lhs = &dpi(lam, EPlus, &dpi(lam, EMinus, &f)) - &dpi(lam, EMinus, &dpi(lam, EPlus, &f));
        let rhs = dpi(lam, H, &f);
        (lhs != rhs).then(|| ce("commutation-relations", &params, lhs, rhs))
    }));

    // Casimir from the generators.
    let mut inputs = Vec::new();
    for lam in &lambdas {
        for n in 0..=(depth + 4) {
            inputs.push((lam.clone(), n));
        }
    }
    checks.push(sweep("casimir-consistency", inputs, |(lam, n)| {
        let f = Poly::monomial(Rat::one(), "z", *n);
        let h1 = dpi(lam, H, &f);
        let composite = &(&dpi(lam, H, &h1) + &h1.scale(&rint(2)))
            + &dpi(lam, EMinus, &dpi(lam, EPlus, &f)).scale(&rint(4));
        let scalar = dpi(lam, Casimir, &f);
        if composite == scalar {
            None
        } else {
            let params = [("lambda", lam.to_string()), ("n", n.to_string())];
            Some(ce("casimir-consistency", &params, composite, scalar))
        }
    }));

    // Raising adds two to the h-eigenvalue.
    let mut inputs = Vec::new();
    for lam in &lambdas {
        for l in 0..=8u32 {
            inputs.push((lam.clone(), l));
        }
    }
    checks.push(sweep("weight-grading", inputs, |(lam, l)| {
        let v = LwVector::basis(lam.clone(), *l);
        let raised = lw_action(EPlus, &v);
        let lhs = lw_action(H, &raised);
        // h e+ = e+ h + 2 e+
        let he = lw_action(EPlus, &lw_action(H, &v));
        let rhs_coeffs: BTreeMap<u32, Rat> = raised
            .coeffs
            .iter()
            .map(|(&i, c)| {
                let base = he.coeffs.get(&i).cloned().unwrap_or_else(Rat::zero);
                (i, base + c * rint(2))
            })
            .collect();
        if lhs.coeffs == rhs_coeffs {
            None
        } else {
            let params = [("lambda", lam.to_string()), ("l", l.to_string())];
            Some(ce("weight-grading", &params, format!("{:?}", lhs.coeffs), format!("{rhs_coeffs:?}")))
        }
    }));

    // Closed form against the kernel solver.
    let lo = -(depth as i64 - 2);
    let hi = depth as i64 + 2;
    let mut inputs = Vec::new();
    for lp in lo..=hi {
        for lpp in lo..=hi {
            for a in 0..=depth {
                inputs.push((lp, lpp, a));
            }
        }
    }
    let kappa_fn = move |lp: &Rat, lpp: &Rat, a: u32| -> Result<BTreeMap<u32, Rat>, crate::sl2::Sl2Error> {
        let mut kappa = kappa_closed_form(lp, lpp, a)?;
        if fault == Some(Fault::RecurrenceSign) {
            // Drop the alternating sign: every recurrence step flips.
            for (l, c) in kappa.iter_mut() {
                *c = c.clone() * sign_pow(*l as i64);
            }
        }
        Ok(kappa)
    };
    checks.push(sweep("duality-closed-form", inputs, move |&(lp, lpp, a)| {
        let (lp, lpp) = (rint(lp), rint(lpp));
        let params = [
            ("lp", lp.to_string()),
            ("lpp", lpp.to_string()),
            ("a", a.to_string()),
        ];
        let Ok(kappa) = kappa_fn(&lp, &lpp, a) else {
            return None; // degenerate normalization: nothing to compare
        };
        if !verify_recurrence(&lp, &lpp, a, &kappa) {
            return Some(ce("duality-closed-form", &params, "recurrence violated", "recurrence"));
        }
        let sv = singular_vectors(&lp, &lpp, a);
        if sv.len() != 1 {
            return Some(ce("duality-closed-form", &params, format!("kernel dim {}", sv.len()), 1));
        }
        let kv: Vec<Rat> = (0..=a).map(|l| kappa[&l].clone()).collect();
        let sv0: Vec<Rat> = (0..=a)
            .map(|l| sv[0].coeffs.get(&(l, a - l)).cloned().unwrap_or_else(Rat::zero))
            .collect();
        if linalg::proportionality_constant(&kv, &sv0).is_none() {
            return Some(ce("duality-closed-form", &params, format!("{kv:?}"), format!("{sv0:?}")));
        }
        None
    }));

    // Kernel dimension dichotomy.
    let b = depth as i64;
    let mut inputs = Vec::new();
    for lp in -b..=b {
        for lpp in -b..=b {
            for a in 0..=depth {
                inputs.push((lp, lpp, a));
            }
        }
    }
    checks.push(sweep("kernel-dichotomy", inputs, |&(lp, lpp, a)| {
        let dim = singular_vectors(&rint(lp), &rint(lpp), a).len();
        let lppp = lp + lpp + 2 * a as i64;
        let expect = if l2_condition(lp, lpp, lppp) { 2 } else { 1 };
        if dim == expect {
            None
        } else {
            let params =
                [("lp", lp.to_string()), ("lpp", lpp.to_string()), ("a", a.to_string())];
            Some(ce("kernel-dichotomy", &params, dim, expect))
        }
    }));

    // Lowering kills every reported singular vector.
    let mut inputs = Vec::new();
    for lp in -3i64..=3 {
        for lpp in -3i64..=3 {
            for a in 0..=depth.min(4) {
                inputs.push((lp, lpp, a));
            }
        }
    }
    checks.push(sweep("singular-vectors-lowered", inputs, |&(lp, lpp, a)| {
        for sv in singular_vectors(&rint(lp), &rint(lpp), a) {
            let image = diagonal_action(EMinus, &sv);
            if !image.is_zero() {
                let params =
                    [("lp", lp.to_string()), ("lpp", lpp.to_string()), ("a", a.to_string())];
                return Some(ce("singular-vectors-lowered", &params, format!("{:?}", image.coeffs), "0"));
            }
        }
        None
    }));

    checks
}

// ---------------------------------------------------------------------------
// rc
// ---------------------------------------------------------------------------

fn weight_grid(depth: u32) -> Vec<(i64, i64, u32)> {
    let lo = -(depth as i64 - 2);
    let hi = depth as i64 + 2;
    let mut out = Vec::new();
    for lp in lo..=hi {
        for lpp in lo..=hi {
            for a in 0..=depth {
                out.push((lp, lpp, a));
            }
        }
    }
    out
}

fn rc_suite(depth: u32) -> Vec<CheckResult> {
    let mut checks = Vec::new();

    checks.push(sweep("covariance", weight_grid(depth), |&(lp, lpp, a)| {
        let p = RcParams::new(rint(lp), rint(lpp), a);
        let d = rc_symbol(&p);
        if covariance_check(&p.lp, &p.lpp, &p.lppp(), &d, 8) {
            None
        } else {
            let params = [("lp", lp.to_string()), ("lpp", lpp.to_string()), ("a", a.to_string())];
            Some(ce("covariance", &params, d.symbol, "covariant"))
        }
    }));

    checks.push(sweep("jacobi-identification", weight_grid(depth), |&(lp, lpp, a)| {
        let p = RcParams::new(rint(lp), rint(lpp), a);
        let lhs = rc_symbol(&p).symbol;
        let rhs = rc_symbol_via_jacobi(&p);
        if lhs == rhs {
            None
        } else {
            let params = [("lp", lp.to_string()), ("lpp", lpp.to_string()), ("a", a.to_string())];
            Some(ce("jacobi-identification", &params, lhs, rhs))
        }
    }));

    // Bracket vanishes exactly on the degenerate locus.
    let b = depth as i64;
    let mut inputs = Vec::new();
    for lp in -b..=b {
        for lpp in -b..=b {
            for a in 0..=(depth - 1) {
                inputs.push((lp, lpp, a));
            }
        }
    }
    checks.push(sweep("vanishing-locus", inputs, |&(lp, lpp, a)| {
        let p = RcParams::new(rint(lp), rint(lpp), a);
        let vanishes = rc_symbol(&p).is_zero();
        let lppp = lp + lpp + 2 * a as i64;
        let expect = l2_condition(lp, lpp, lppp);
        if vanishes == expect {
            None
        } else {
            let params = [("lp", lp.to_string()), ("lpp", lpp.to_string()), ("a", a.to_string())];
            Some(ce(
                "vanishing-locus",
                &params,
                format!("vanishes={vanishes}"),
                format!("degenerate={expect}"),
            ))
        }
    }));

    // Symbol coefficients are the closed-form singular vector.
    checks.push(sweep("singular-vector-duality", weight_grid(depth), |&(lp, lpp, a)| {
        let Ok(kappa) = kappa_closed_form(&rint(lp), &rint(lpp), a) else {
            return None;
        };
        let s = rc_symbol(&RcParams::new(rint(lp), rint(lpp), a)).symbol;
        for l in 0..=a {
            let coeff = s.coeff(&[("x", l), ("y", a - l)]);
            if kappa[&l] != coeff {
                let params =
                    [("lp", lp.to_string()), ("lpp", lpp.to_string()), ("a", a.to_string()), ("l", l.to_string())];
                return Some(ce("singular-vector-duality", &params, kappa[&l].clone(), coeff));
            }
        }
        None
    }));

    // Polarized quadratic identity.
    let fs = ["1 + z + z^2", "z^3", "2 - z + z^4", "5"];
    let mut inputs = Vec::new();
    for lam in -3i64..=4 {
        for f in fs {
            inputs.push((lam, f));
        }
    }
    checks.push(sweep("polarized-quadratic", inputs, |&(lam, ftext)| {
        let f = Poly::parse(ftext).expect("fixture");
        let lam = rint(lam);
        let lhs = crate::rankin_cohen::polarized_quadratic(&lam, &f).scale(&(&lam + Rat::one()));
        let rhs = rc_apply(&RcParams::new(lam.clone(), lam.clone(), 2), &f, &f);
        if lhs == rhs {
            None
        } else {
            let params = [("lambda", lam.to_string()), ("f", ftext.to_string())];
            Some(ce("polarized-quadratic", &params, lhs, rhs))
        }
    }));

    checks
}

// ---------------------------------------------------------------------------
// classifier
// ---------------------------------------------------------------------------

fn classifier_suite(depth: u32) -> Vec<CheckResult> {
    let mut checks = Vec::new();

    // Trichotomy over a cube.
    let b = depth as i64 + 4;
    let mut inputs = Vec::new();
    for lp in -b..=b {
        for lpp in -b..=b {
            for lppp in -b..=b {
                inputs.push((lp, lpp, lppp));
            }
        }
    }
    checks.push(sweep("trichotomy", inputs, |&(lp, lpp, lppp)| {
        let c = classify(lp, lpp, lppp);
        let even = lppp - lp - lpp >= 0 && (lppp - lp - lpp) % 2 == 0;
        let expect = if !even {
            Case::Case0
        } else if l2_condition(lp, lpp, lppp) {
            Case::Case2
        } else {
            Case::Case1
        };
        let dim_ok = c.dimension == match c.case {
            Case::Case0 => 0,
            Case::Case1 => 1,
            Case::Case2 => 2,
        };
        if c.case == expect && dim_ok && c.basis.len() == c.dimension {
            None
        } else {
            let params =
                [("lp", lp.to_string()), ("lpp", lpp.to_string()), ("lppp", lppp.to_string())];
            Some(ce("trichotomy", &params, format!("{:?}/dim {}", c.case, c.dimension), format!("{expect:?}")))
        }
    }));

    // Closed form against the brute-force oracle.
    let b = depth as i64;
    let mut inputs = Vec::new();
    for lp in -b..=b {
        for lpp in -b..=b {
            for a in 0..=(depth - 1) {
                inputs.push((lp, lpp, a));
            }
        }
    }
    checks.push(sweep("oracle-agreement", inputs, |&(lp, lpp, a)| {
        let lppp = lp + lpp + 2 * a as i64;
        let (dim, _) = sbo_dimension_oracle(&rint(lp), &rint(lpp), &rint(lppp), 6);
        let expect = classify(lp, lpp, lppp).dimension;
        if dim == expect {
            None
        } else {
            let params =
                [("lp", lp.to_string()), ("lpp", lpp.to_string()), ("lppp", lppp.to_string())];
            Some(ce("oracle-agreement", &params, dim, expect))
        }
    }));

    // Full battery on the degenerate locus.
    checks.push(sweep("case2-battery", case2_triples(depth as i64 - 1), |&(lp, lpp, lppp)| {
        let params =
            [("lp", lp.to_string()), ("lpp", lpp.to_string()), ("lppp", lppp.to_string())];
        let fail = |what: &str, left: String, right: String| {
            let mut all = params.to_vec();
            all.push(("aspect", what.to_string()));
            Some(ce("case2-battery", &all, left, right))
        };
        let [d1, d2, d3] = match classify::dj_symbols(lp, lpp, lppp) {
            Ok(d) => d,
            Err(e) => return fail("construction", e.to_string(), "Case 2".into()),
        };
        // Nonzero, covariant, and not multiples of the (vanishing) bracket.
        for (j, d) in [&d1, &d2, &d3].into_iter().enumerate() {
            if d.is_zero() {
                return fail("nonzero", format!("D{} = 0", j + 1), "nonzero".into());
            }
            if !covariance_check(&rint(lp), &rint(lpp), &rint(lppp), d, 8) {
                return fail("covariance", format!("D{}", j + 1), "covariant".into());
            }
        }
        match classify::rc_vanishes(lp, lpp, lppp) {
            Ok(true) => {}
            other => return fail("bracket-vanishes", format!("{other:?}"), "Ok(true)".into()),
        }
        // Factorizations with nonzero recorded constants.
        let report = match factorization_check(lp, lpp, lppp) {
            Ok(r) => r,
            Err(e) => return fail("factorization", e.to_string(), "holds".into()),
        };
        if !report.all_hold() || report.constants.iter().any(|c| c.is_zero()) {
            return fail("factorization", format!("{report:?}"), "holds".into());
        }
        // Any two of the three span the oracle kernel.
        let ell = report.ell;
        let (dim, kernel) = sbo_dimension_oracle(&rint(lp), &rint(lpp), &rint(lppp), ell.max(1) + 1);
        if dim != 2 {
            return fail("oracle-dim", dim.to_string(), "2".into());
        }
        let kv: Vec<Vec<Rat>> = kernel.iter().map(|d| d.homogeneous_coeffs(ell)).collect();
        for (pair, (u, v)) in [("D1,D2", (&d1, &d2)), ("D1,D3", (&d1, &d3)), ("D2,D3", (&d2, &d3))] {
            let rows =
                vec![u.homogeneous_coeffs(ell), v.homogeneous_coeffs(ell), kv[0].clone(), kv[1].clone()];
            if linalg::rank(&rows[..2], ell as usize + 1) != 2 {
                return fail("independent-pair", pair.to_string(), "rank 2".into());
            }
            if linalg::rank(&rows, ell as usize + 1) != 2 {
                return fail("span-matches-oracle", pair.to_string(), "rank 2".into());
            }
        }
        // Linear relation, exactly.
        let relation = &(&d1.symbol - &d2.symbol) + &d3.symbol.scale(&sign_pow(lp));
        if !relation.is_zero() {
            return fail("linear-relation", relation.to_string(), "0".into());
        }
        None
    }));

    checks
}

// ---------------------------------------------------------------------------
// un1
// ---------------------------------------------------------------------------

fn un1_suite(depth: u32) -> Vec<CheckResult> {
    let mut checks = Vec::new();

    checks.push(sweep("n1-reduction", weight_grid(depth), |&(lp, lpp, a)| {
        let s = un1_symbol(&Un1Params::reduced(1, rint(lp), rint(lpp), a));
        let reduced = s.poly.substitute("v1", &Poly::one()).rename("x1", "x").rename("y1", "y");
        let classical =
            rc_symbol(&RcParams::new(rint(lp), rint(lpp), a)).symbol.scale(&sign_pow(a as i64));
        if reduced == classical {
            None
        } else {
            let params = [("lp", lp.to_string()), ("lpp", lpp.to_string()), ("a", a.to_string())];
            Some(ce("n1-reduction", &params, reduced, classical))
        }
    }));

    let b = depth as i64 - 1;
    let mut inputs = Vec::new();
    for n in 1..=3u32 {
        for lp in -b..=b {
            for lpp in -b..=b {
                for a in 0..=(depth - 1) {
                    inputs.push((n, lp, lpp, a));
                }
            }
        }
    }
    checks.push(sweep("vanishing-equivalence", inputs, |&(n, lp, lpp, a)| {
        let s = un1_symbol(&Un1Params::reduced(n, rint(lp), rint(lpp), a));
        let predicted = un1_vanishes(&rint(lp), &rint(lpp), a);
        if s.is_zero() == predicted {
            None
        } else {
            let params = [
                ("n", n.to_string()),
                ("lp", lp.to_string()),
                ("lpp", lpp.to_string()),
                ("a", a.to_string()),
            ];
            Some(ce(
                "vanishing-equivalence",
                &params,
                format!("symbol zero = {}", s.is_zero()),
                format!("predicted = {predicted}"),
            ))
        }
    }));

    // GL-invariance of the contraction structure, spot-checked.
    let samples = vec![(2u32, -2i64, 3i64, 2u32), (2, 4, 4, 3), (3, -1, 0, 2)];
    checks.push(sweep("contraction-invariance", samples, |&(n, lp, lpp, a)| {
        let s = un1_symbol(&Un1Params::reduced(n, rint(lp), rint(lpp), a)).poly;
        let transformed = gl_transform(&s, n);
        if transformed == s {
            None
        } else {
            let params = [
                ("n", n.to_string()),
                ("lp", lp.to_string()),
                ("lpp", lpp.to_string()),
                ("a", a.to_string()),
            ];
            Some(ce("contraction-invariance", &params, transformed, s))
        }
    }));

    // Equivariance for the translation part of the action.
    let fixtures = vec![
        (2u32, 3i64, 5i64, 1u32, "zp1^2*zpp2 + zp2^3"),
        (2, -1, -2, 2, "zp1^3*zpp1 + zp2*zpp2^2"),
        (3, 4, 2, 2, "zp1*zp3*zpp2^2"),
        (3, -2, 0, 1, "zp2^2*zpp1*zpp3"),
    ];
    checks.push(sweep("translation-covariance", fixtures, |&(n, lp, lpp, a, ftext)| {
        let f = Poly::parse(ftext).expect("fixture");
        let params = Un1Params::reduced(n, rint(lp), rint(lpp), a);
        if crate::un1::translation_covariance(&params, &f) {
            None
        } else {
            let params = [
                ("n", n.to_string()),
                ("lp", lp.to_string()),
                ("lpp", lpp.to_string()),
                ("a", a.to_string()),
                ("f", ftext.to_string()),
            ];
            Some(ce("translation-covariance", &params, "does not commute", "commutes"))
        }
    }));

    // Applying an order-a operator lowers homogeneous degree by exactly a.
    let fixtures = vec![
        (2u32, 3i64, 5i64, 1u32, "zp1^2*zpp2 + zp2^3"),
        (2, 5, 4, 2, "zp1^2*zpp1^2"),
        (2, -1, 2, 2, "zp1*zp2*zpp1^2 + zp2^2*zpp2^2"),
    ];
    checks.push(sweep("degree-bookkeeping", fixtures, |&(n, lp, lpp, a, ftext)| {
        let f = Poly::parse(ftext).expect("fixture");
        let d = f.total_degree().unwrap();
        let out = crate::un1::un1_apply(&Un1Params::reduced(n, rint(lp), rint(lpp), a), &f);
        let params = [
            ("n", n.to_string()),
            ("lp", lp.to_string()),
            ("lpp", lpp.to_string()),
            ("a", a.to_string()),
            ("f", ftext.to_string()),
        ];
        if out.is_empty() {
            return Some(ce("degree-bookkeeping", &params, "empty output", "nonzero"));
        }
        for (ve, g) in &out {
            if g.total_degree() != Some(d - a) {
                return Some(ce(
                    "degree-bookkeeping",
                    &params,
                    format!("component {ve:?} degree {:?}", g.total_degree()),
                    format!("{}", d - a),
                ));
            }
        }
        None
    }));

    checks
}

/// Substitute `x -> A x`, `y -> A y`, `v -> A^{-T} v` for a fixed invertible
/// rational matrix; the contractions `<v, x>`, `<v, y>` are invariant.
fn gl_transform(s: &Poly, n: u32) -> Poly {
    // Unimodular A with integer inverse, padded to size n by the identity.
    let a_rows: Vec<Vec<i64>> = match n {
        2 => vec![vec![1, 2], vec![1, 3]],
        3 => vec![vec![1, 2, 0], vec![1, 3, 0], vec![0, 1, 1]],
        _ => return s.clone(),
    };
    let a_inv_t: Vec<Vec<i64>> = match n {
        // A^{-1} = [[3, -2], [-1, 1]]
        2 => vec![vec![3, -1], vec![-2, 1]],
        // A^{-1} = [[3, -2, 0], [-1, 1, 0], [1, -1, 1]]
        3 => vec![vec![3, -1, 1], vec![-2, 1, -1], vec![0, 0, 1]],
        _ => unreachable!(),
    };
    let apply_block = |f: &Poly, prefix: &str, rows: &[Vec<i64>]| -> Poly {
        let mut g = f.clone();
        for (i, row) in rows.iter().enumerate() {
            let mut repl = Poly::zero();
            for (j, &c) in row.iter().enumerate() {
                let tv = Poly::var(&format!("tmp_{prefix}{}", j + 1));
                repl = &repl + &tv.scale(&rint(c));
            }
            g = g.substitute(&format!("{prefix}{}", i + 1), &repl);
        }
        for j in 1..=rows.len() {
            g = g.rename(&format!("tmp_{prefix}{j}"), &format!("{prefix}{j}"));
        }
        g
    };
    let s = apply_block(s, "x", &a_rows);
    let s = apply_block(&s, "y", &a_rows);
    apply_block(&s, "v", &a_inv_t)
}

// ---------------------------------------------------------------------------
// qexp
// ---------------------------------------------------------------------------

fn qexp_suite(_depth: u32) -> Vec<CheckResult> {
    const N: u32 = 20;
    let mut checks = Vec::new();

    let forms: Vec<(&str, i64, QSeries)> = vec![
        ("E4", 4, eisenstein_q(4, 30).unwrap()),
        ("E6", 6, eisenstein_q(6, 30).unwrap()),
        ("Delta", 12, delta_q(30)),
    ];

    // Bracket lands in the predicted weight; constant term vanishes for a >= 1.
    let mut inputs = Vec::new();
    for (n1, k1, f1) in &forms {
        for (n2, k2, f2) in &forms {
            for a in 0..=4u32 {
                inputs.push((*n1, *k1, f1.clone(), *n2, *k2, f2.clone(), a));
            }
        }
    }
    let membership_inputs = inputs.clone();
    checks.push(sweep("bracket-membership", membership_inputs, |(n1, k1, f1, n2, k2, f2, a)| {
        let params =
            [("f1", n1.to_string()), ("f2", n2.to_string()), ("a", a.to_string())];
        let br = match rc_q(&f1.truncated(N), *k1, &f2.truncated(N), *k2, *a) {
            Ok(b) => b,
            Err(e) => return Some(ce("bracket-membership", &params, e, "bracket")),
        };
        let k_out = (*k1 + *k2) as u32 + 2 * a;
        match membership(&br, k_out) {
            Ok(Some(_)) => None,
            other => Some(ce("bracket-membership", &params, format!("{other:?}"), "member")),
        }
    }));

    checks.push(sweep("cuspidality-propagation", inputs, |(n1, k1, f1, n2, k2, f2, a)| {
        if *a == 0 {
            return None;
        }
        let br = rc_q(&f1.truncated(N), *k1, &f2.truncated(N), *k2, *a).expect("truncation");
        if br.constant_term().is_zero() {
            None
        } else {
            let params = [("f1", n1.to_string()), ("f2", n2.to_string()), ("a", a.to_string())];
            Some(ce("cuspidality-propagation", &params, br.constant_term(), "0"))
        }
    }));

    // (lambda + 1) quadratic = second bracket, in the theta model.
    let quad_forms = forms.clone();
    checks.push(sweep("quadratic-polarization", quad_forms, |(name, k, f)| {
        let f = f.truncated(N);
        let lhs = quadratic_expression(&f, *k as u32).scale(&rint(*k + 1));
        let rhs = rc_q(&f, *k, &f, *k, 2).expect("truncation");
        if lhs == rhs {
            None
        } else {
            Some(ce("quadratic-polarization", &[("f", name.to_string())], lhs, rhs))
        }
    }));

    // Quadratic expression is modular of weight 2 lambda + 4.
    let rc2q_forms = forms.clone();
    checks.push(sweep("rc2q-membership", rc2q_forms, |(name, k, f)| {
        let lam = *k as u32;
        match qexp::rc2q_check(&f.truncated(N), lam, 2 * lam + 4) {
            Ok(Some(_)) => None,
            other => Some(ce(
                "rc2q-membership",
                &[("f", name.to_string()), ("lambda", lam.to_string())],
                format!("{other:?}"),
                "member",
            )),
        }
    }));

    // Membership verdicts are stable under enlarging the truncation.
    let mut inputs = Vec::new();
    for (n1, k1, f1) in &forms {
        for (n2, k2, f2) in &forms {
            for a in 0..=4u32 {
                inputs.push((*n1, *k1, f1.clone(), *n2, *k2, f2.clone(), a));
            }
        }
    }
    checks.push(sweep("truncation-stability", inputs, |(n1, k1, f1, n2, k2, f2, a)| {
        let k_out = (*k1 + *k2) as u32 + 2 * a;
        let at = |trunc: u32| {
            let br = rc_q(&f1.truncated(trunc), *k1, &f2.truncated(trunc), *k2, *a).expect("truncation");
            membership(&br, k_out).expect("weights are even")
        };
        let v20 = at(20);
        let v30 = at(30);
        if v20 == v30 {
            None
        } else {
            let params = [("f1", n1.to_string()), ("f2", n2.to_string()), ("a", a.to_string())];
            Some(ce("truncation-stability", &params, format!("{v20:?}"), format!("{v30:?}")))
        }
    }));

    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_at_depth_three() {
        for suite in Suite::ALL {
            let report = run_suite(suite, 3);
            for check in &report.checks {
                assert!(
                    check.passed(),
                    "{}/{} failed: {:?}",
                    report.suite,
                    check.name,
                    check.counterexamples.first()
                );
                assert!(check.cases > 0, "{}/{} ran nothing", report.suite, check.name);
            }
        }
    }

    #[test]
    fn injected_fault_surfaces_as_counterexample() {
        let report = run_suite_with_fault(Suite::Sl2, 3, Some(Fault::RecurrenceSign));
        assert!(!report.passed());
        let failing: Vec<&CheckResult> =
            report.checks.iter().filter(|c| !c.passed()).collect();
        assert_eq!(failing.len(), 1);
        assert_eq!(failing[0].name, "duality-closed-form");
        let first = &failing[0].counterexamples[0];
        // The report names the offending parameter tuple and both values.
        assert!(first.params.contains_key("lp"));
        assert!(first.params.contains_key("lpp"));
        assert!(first.params.contains_key("a"));
        assert!(!first.left.is_empty() && !first.right.is_empty());
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            let parsed: Suite = suite.name().parse().unwrap();
            assert_eq!(parsed, suite);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
