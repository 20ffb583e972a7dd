//! `sbo-forge`: exact computations with Rankin-Cohen brackets and
//! differential symmetry breaking operators.
//!
//! Subcommands construct bracket symbols, classify weight triples (with a
//! brute-force oracle cross-check), run the verification suites, and do
//! q-expansion sanity checks on modular forms. All output is an exact JSON
//! report on stdout; see `report.rs` for the format and determinism rules.
//! Exit codes: 0 ok, 1 counterexample found, 2 usage or input error.

mod report;

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sbo_core::classify::{classify, Case};
use sbo_core::qexp::{self, QSeries};
use sbo_core::rankin_cohen::{rc_apply, rc_symbol, sbo_dimension_oracle, RcParams};
use sbo_core::rational::Rat;
use sbo_core::verify::{run_suite_with_fault, Fault, Suite, SuiteReport};
use sbo_core::Poly;

use report::{Report, Status};

#[derive(Parser)]
#[command(name = "sbo-forge", version, about = "Exact Rankin-Cohen bracket and SBO toolkit")]
struct Cli {
    /// Embed elapsed milliseconds in the JSON report (off by default, so
    /// reports are byte-identical across runs).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct the a-th Rankin-Cohen bracket symbol, optionally applying
    /// it to two polynomials in z.
    Bracket {
        /// First source weight (rational, e.g. 4 or -3/2)
        #[arg(long, allow_hyphen_values = true)]
        lp: String,
        /// Second source weight
        #[arg(long, allow_hyphen_values = true)]
        lpp: String,
        /// Bracket order
        #[arg(long)]
        a: u32,
        /// Optional first argument, as polynomial text in z
        #[arg(long)]
        f1: Option<String>,
        /// Optional second argument, as polynomial text in z
        #[arg(long)]
        f2: Option<String>,
    },
    /// Classify a weight triple, or sweep a grid of triples with an oracle
    /// cross-check.
    Classify {
        /// Weight triple lp lpp lppp
        #[arg(num_args = 0..=3, conflicts_with = "grid", allow_negative_numbers = true)]
        triple: Vec<i64>,
        /// Sweep all |lp|, |lpp| <= GRID with lppp = lp + lpp + 2a
        #[arg(long)]
        grid: Option<i64>,
        /// Largest bracket order in the grid sweep
        #[arg(long, default_value_t = 5)]
        amax: u32,
        /// Output format for grid sweeps
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a verification suite (or all of them).
    Verify {
        /// Suite name: jacobi, sl2, rc, classifier, un1, qexp, or all
        suite: String,
        /// Grid depth; 6 reproduces the documented bounds
        #[arg(long, default_value_t = 6)]
        depth: u32,
        /// Self-test instrumentation: inject a known fault and expect the
        /// suites to catch it.
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
    /// Print the q-expansion of a built-in modular form.
    Qexp {
        #[arg(ignore_case = true)]
        form: FormName,
        /// Truncation order
        #[arg(long = "N", default_value_t = 10)]
        n: u32,
    },
    /// Bracket two built-in forms and check membership in the target weight.
    Rcq {
        #[arg(long, ignore_case = true)]
        f1: FormName,
        #[arg(long, ignore_case = true)]
        f2: FormName,
        /// Bracket order
        #[arg(long)]
        a: u32,
        /// Truncation order
        #[arg(long = "N", default_value_t = 20)]
        n: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum, Debug)]
enum FormName {
    E4,
    E6,
    Delta,
}

impl FormName {
    fn weight(self) -> i64 {
        match self {
            FormName::E4 => 4,
            FormName::E6 => 6,
            FormName::Delta => 12,
        }
    }

    fn series(self, truncation: u32) -> QSeries {
        match self {
            FormName::E4 => qexp::eisenstein_q(4, truncation).expect("built-in weight"),
            FormName::E6 => qexp::eisenstein_q(6, truncation).expect("built-in weight"),
            FormName::Delta => qexp::delta_q(truncation),
        }
    }

    fn name(self) -> &'static str {
        match self {
            FormName::E4 => "E4",
            FormName::E6 => "E6",
            FormName::Delta => "Delta",
        }
    }
}

fn main() {
    let cli = Cli::parse();
    configure_threads();
    let start = Instant::now();
    let mut exit = run(&cli);
    // Re-emission with timing embedded happens inside run(); here we only
    // report to stderr for the human.
    let elapsed = start.elapsed().as_millis();
    eprintln!("elapsed: {elapsed} ms");
    if exit < 0 {
        exit = 2;
    }
    std::process::exit(exit);
}

/// Worker-pool size from SBO_FORGE_THREADS (grid sweeps share nothing
/// mutable, so any count is safe).
fn configure_threads() {
    if let Ok(v) = std::env::var("SBO_FORGE_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn run(cli: &Cli) -> i32 {
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Bracket { lp, lpp, a, f1, f2 } => cmd_bracket(lp, lpp, *a, f1.as_deref(), f2.as_deref()),
        Command::Classify { triple, grid, amax, format } => {
            match (triple.len(), grid) {
                (3, None) => cmd_classify_one(triple[0], triple[1], triple[2]),
                (0, Some(bound)) => {
                    return cmd_classify_grid(*bound, *amax, *format, cli.timing, start);
                }
                _ => usage_error("classify", "provide either three weights or --grid <bound>"),
            }
        }
        Command::Verify { suite, depth, inject_fault } => cmd_verify(suite, *depth, inject_fault.as_deref()),
        Command::Qexp { form, n } => cmd_qexp(*form, *n),
        Command::Rcq { f1, f2, a, n } => cmd_rcq(*f1, *f2, *a, *n),
    };
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    report.emit()
}

fn usage_error(command: &str, message: &str) -> Report {
    let mut r = Report::new(command);
    r.results = json!({ "error": message });
    r.status = Status::Error;
    r
}

fn parse_weight(s: &str) -> Result<Rat, String> {
    Rat::from_str(s.trim()).map_err(|e| format!("invalid rational `{s}`: {e}"))
}

fn cmd_bracket(lp: &str, lpp: &str, a: u32, f1: Option<&str>, f2: Option<&str>) -> Report {
    let report = Report::new("bracket").param("lp", lp).param("lpp", lpp).param("a", a);
    let (lp, lpp) = match (parse_weight(lp), parse_weight(lpp)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            let mut r = report;
            r.results = json!({ "error": e });
            r.status = Status::Error;
            return r;
        }
    };
    let params = RcParams::new(lp, lpp, a);
    let op = rc_symbol(&params);
    let mut results = serde_json::Map::new();
    results.insert("symbol".into(), json!(op.symbol.canonical_text()));
    results.insert("lppp".into(), json!(params.lppp().to_string()));
    if op.is_zero() {
        results.insert("warning".into(), json!("RC vanishes (Case 2 parameters)"));
    }
    let mut report = report;
    match (f1, f2) {
        (Some(t1), Some(t2)) => {
            let parsed = Poly::parse(t1).and_then(|p1| Poly::parse(t2).map(|p2| (p1, p2)));
            match parsed {
                Ok((p1, p2)) => {
                    let applied = rc_apply(&params, &p1, &p2);
                    results.insert("applied".into(), json!(applied.canonical_text()));
                }
                Err(e) => {
                    results.insert("error".into(), json!(e.to_string()));
                    report.status = Status::Error;
                }
            }
        }
        (None, None) => {}
        _ => {
            results.insert("error".into(), json!("provide both --f1 and --f2 or neither"));
            report.status = Status::Error;
        }
    }
    report.results = Value::Object(results);
    report
}

fn classification_json(lp: i64, lpp: i64, lppp: i64) -> Value {
    let c = classify(lp, lpp, lppp);
    let mut map = serde_json::Map::new();
    map.insert("case".into(), json!(c.case.to_string()));
    map.insert("dimension".into(), json!(c.dimension));
    map.insert(
        "basis".into(),
        json!(c.basis.iter().map(|d| d.symbol.canonical_text()).collect::<Vec<_>>()),
    );
    if let Some(a) = c.bracket_order {
        map.insert("bracket_order".into(), json!(a));
    }
    if let Some(d) = c.derived {
        map.insert(
            "derived".into(),
            json!({ "alpha": d.alpha, "beta": d.beta, "ell": d.ell }),
        );
    }
    Value::Object(map)
}

fn cmd_classify_one(lp: i64, lpp: i64, lppp: i64) -> Report {
    let mut report = Report::new("classify")
        .param("lp", lp)
        .param("lpp", lpp)
        .param("lppp", lppp);
    report.results = classification_json(lp, lpp, lppp);
    report
}

struct GridRow {
    lp: i64,
    lpp: i64,
    lppp: i64,
    case: Case,
    dimension: usize,
    oracle_dimension: usize,
}

fn cmd_classify_grid(bound: i64, amax: u32, format: Format, timing: bool, start: Instant) -> i32 {
    use sbo_core::rational::rint;
    let mut rows = Vec::new();
    let mut mismatches = 0usize;
    for lp in -bound..=bound {
        for lpp in -bound..=bound {
            for a in 0..=amax {
                let lppp = lp + lpp + 2 * a as i64;
                let c = classify(lp, lpp, lppp);
                let (oracle_dim, _) =
                    sbo_dimension_oracle(&rint(lp), &rint(lpp), &rint(lppp), amax + 1);
                if oracle_dim != c.dimension {
                    mismatches += 1;
                }
                rows.push(GridRow {
                    lp,
                    lpp,
                    lppp,
                    case: c.case,
                    dimension: c.dimension,
                    oracle_dimension: oracle_dim,
                });
            }
        }
    }
    let status = if mismatches == 0 { Status::Ok } else { Status::Counterexample };
    match format {
        Format::Csv => {
            println!("lp,lpp,lppp,case,dimension,oracle_dimension,oracle_match");
            for r in &rows {
                println!(
                    "{},{},{},{},{},{},{}",
                    r.lp,
                    r.lpp,
                    r.lppp,
                    r.case,
                    r.dimension,
                    r.oracle_dimension,
                    r.dimension == r.oracle_dimension
                );
            }
            status.exit_code()
        }
        Format::Json => {
            let mut report = Report::new("classify")
                .param("grid", bound)
                .param("amax", amax);
            report.status = status;
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "lp": r.lp,
                        "lpp": r.lpp,
                        "lppp": r.lppp,
                        "case": r.case.to_string(),
                        "dimension": r.dimension,
                        "oracle_dimension": r.oracle_dimension,
                        "oracle_match": r.dimension == r.oracle_dimension,
                    })
                })
                .collect();
            report.results = json!({ "mismatches": mismatches, "rows": rows });
            if timing {
                report.timing_ms = Some(start.elapsed().as_millis());
            }
            report.emit()
        }
    }
}

fn suite_report_json(r: &SuiteReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            let counterexamples: Vec<Value> = c
                .counterexamples
                .iter()
                .map(|x| {
                    json!({
                        "check": x.check,
                        "params": x.params,
                        "left": x.left,
                        "right": x.right,
                    })
                })
                .collect();
            json!({
                "name": c.name,
                "cases": c.cases,
                "failures": c.failures,
                "counterexamples": counterexamples,
            })
        })
        .collect();
    json!({
        "suite": r.suite,
        "depth": r.depth,
        "passed": r.passed(),
        "checks": checks,
    })
}

fn cmd_verify(suite: &str, depth: u32, inject_fault: Option<&str>) -> Report {
    let mut report = Report::new("verify").param("suite", suite).param("depth", depth);
    let fault = match inject_fault.map(Fault::from_str).transpose() {
        Ok(f) => f,
        Err(e) => {
            report.results = json!({ "error": e });
            report.status = Status::Error;
            return report;
        }
    };
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        match Suite::from_str(suite) {
            Ok(s) => vec![s],
            Err(e) => {
                report.results = json!({ "error": e });
                report.status = Status::Error;
                return report;
            }
        }
    };
    let reports: Vec<SuiteReport> =
        suites.into_iter().map(|s| run_suite_with_fault(s, depth, fault)).collect();
    let passed = reports.iter().all(SuiteReport::passed);
    report.results = json!({
        "passed": passed,
        "suites": reports.iter().map(suite_report_json).collect::<Vec<_>>(),
    });
    report.status = if passed { Status::Ok } else { Status::Counterexample };
    report
}

fn qseries_json(series: &QSeries) -> Value {
    let coeffs: BTreeMap<String, String> =
        series.entries().map(|(n, c)| (n.to_string(), c.to_string())).collect();
    json!({
        "truncation": series.truncation(),
        "coeffs": coeffs,
    })
}

fn cmd_qexp(form: FormName, n: u32) -> Report {
    let mut report = Report::new("qexp").param("form", form.name()).param("N", n);
    if n < 1 {
        report.results = json!({ "error": "N must be at least 1" });
        report.status = Status::Error;
        return report;
    }
    let series = form.series(n);
    report.results = json!({
        "series": qseries_json(&series),
        "text": series.to_string(),
        "weight": form.weight(),
    });
    report
}

fn cmd_rcq(f1: FormName, f2: FormName, a: u32, n: u32) -> Report {
    let mut report = Report::new("rcq")
        .param("f1", f1.name())
        .param("f2", f2.name())
        .param("a", a)
        .param("N", n);
    let s1 = f1.series(n);
    let s2 = f2.series(n);
    let bracket = match qexp::rc_q(&s1, f1.weight(), &s2, f2.weight(), a) {
        Ok(b) => b,
        Err(e) => {
            report.results = json!({ "error": e.to_string() });
            report.status = Status::Error;
            return report;
        }
    };
    let weight = (f1.weight() + f2.weight()) as u32 + 2 * a;
    let membership = match qexp::membership(&bracket, weight) {
        Ok(m) => m,
        Err(e) => {
            report.results = json!({ "error": e.to_string() });
            report.status = Status::Error;
            return report;
        }
    };
    let cuspidal = bracket.constant_term() == Rat::from_integer(0.into());
    let mut results = serde_json::Map::new();
    results.insert("bracket".into(), qseries_json(&bracket));
    results.insert("text".into(), json!(bracket.to_string()));
    results.insert("weight".into(), json!(weight));
    results.insert("cuspidal".into(), json!(cuspidal));
    match membership {
        Some(coeffs) => {
            let basis = qexp::basis_mk(weight, bracket.truncation()).expect("even weight");
            let combination: BTreeMap<String, String> = basis
                .iter()
                .zip(&coeffs)
                .map(|(b, c)| (b.label(), c.to_string()))
                .collect();
            results.insert("member".into(), json!(true));
            results.insert("combination".into(), json!(combination));
            // A cuspidal member of the one-dimensional cusp space at weight
            // 12 is a multiple of Delta; record the constant.
            if weight == 12 && cuspidal {
                results.insert("delta_multiple".into(), json!(bracket.coeff(1).to_string()));
            }
        }
        None => {
            results.insert("member".into(), json!(false));
            report.status = Status::Counterexample;
        }
    }
    report.results = Value::Object(results);
    report
}
