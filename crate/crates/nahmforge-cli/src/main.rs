//! Batch driver for the q-series verification suites: identity sweeps,
//! Bailey-pair audits, modularity analyses, and numeric transform checks,
//! with text/JSON reports and stable exit codes (0 = pass, 1 = mathematical
//! failure, 2 = usage or configuration error).

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rayon::prelude::*;

use nahmforge_core::{
    analyze_proof_quotient, build_capparelli, build_family, check_dual_transform,
    check_group_composites, check_translations, component_vs_nahm_residual,
    crosscheck_quotient_vs_nahm, eval_nahm, half_period_vs_nahm_residual, identity_catalogue,
    involution_defect, replay_descending, theta_inversion_residual, theta_quarter_residual,
    verify_identity, verify_lemma_sum, verify_limit_identity, BaileyPair, FracExponent,
    NahmFamily, NahmSpec, PairTag, ProofQuotient, PuiseuxSeries, QuotientFamily, ReplayTarget,
    TransformFamily,
};

#[derive(Parser)]
#[command(
    name = "nahmforge",
    version,
    about = "Exact q-series identity verification and modular transform checks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites over a rank range; exit 0 iff all checks pass.
    Verify(VerifyArgs),
    /// Evaluate a built-in or user-supplied sum and print its series.
    Eval(EvalArgs),
    /// Analyze the catalogued eta-quotient families and print their levels.
    Modularity(ModularityArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Suites to run (comma-separated subset of
    /// identities,bailey,modularity,transforms); default: all.
    #[arg(long, value_delimiter = ',')]
    suite: Vec<String>,
    /// Rank range as A..B (inclusive).
    #[arg(long, value_name = "A..B")]
    r: Option<String>,
    /// Truncation order in q-units.
    #[arg(long)]
    order: Option<i64>,
    /// Numeric tolerance for the transform suite.
    #[arg(long)]
    tol: Option<f64>,
    /// Product factors for numeric infinite products.
    #[arg(long)]
    terms: Option<usize>,
    /// Write the JSON report to this path.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Read a flat JSON config file; explicit flags override its values.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    /// Built-in name: "capparelli" or "FAMILY:r=N[:j=M]" with FAMILY one of
    /// T1.1-1, T1.1-2, T1.2, T1.3.
    #[arg(long, conflicts_with = "spec")]
    builtin: Option<String>,
    /// JSON file describing the sum (schema of the `eval` JSON output).
    #[arg(long, value_name = "PATH")]
    spec: Option<PathBuf>,
    /// Print coefficients up to and including q^N.
    #[arg(long, default_value_t = 20)]
    order: i64,
    /// Include the catalogued constant prefactor exponent.
    #[arg(long)]
    with_constant: bool,
    /// Also write the series as JSON to this path.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct ModularityArgs {
    /// Family selector: 4.1, 4.2, 4.3 or 4.4.
    #[arg(long)]
    theorem: String,
    /// Rank range as A..B (inclusive); default 2..5.
    #[arg(long, value_name = "A..B")]
    r: Option<String>,
}

#[derive(Debug, Clone, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    #[serde(default = "d_rmin")]
    r_min: usize,
    #[serde(default = "d_rmax")]
    r_max: usize,
    #[serde(default = "d_order")]
    order: i64,
    #[serde(default = "d_tol")]
    tolerance: f64,
    #[serde(default = "d_terms")]
    terms: usize,
    #[serde(default = "d_suites")]
    suites: Vec<String>,
    #[serde(default)]
    output: Option<String>,
    #[serde(default = "d_format")]
    format: String,
}

fn d_rmin() -> usize {
    2
}
fn d_rmax() -> usize {
    4
}
fn d_order() -> i64 {
    20
}
fn d_tol() -> f64 {
    1e-8
}
fn d_terms() -> usize {
    400
}
fn d_suites() -> Vec<String> {
    ALL_SUITES.iter().map(|s| s.to_string()).collect()
}
fn d_format() -> String {
    "text".into()
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_value(serde_json::json!({})).expect("defaults")
    }
}

const ALL_SUITES: [&str; 4] = ["identities", "bailey", "modularity", "transforms"];

impl RunConfig {
    fn validate(&self) -> Result<(), String> {
        if !(2 <= self.r_min && self.r_min <= self.r_max && self.r_max <= 8) {
            return Err(format!(
                "rank range must satisfy 2 <= r_min <= r_max <= 8, got {}..{}",
                self.r_min, self.r_max
            ));
        }
        if self.order < 10 {
            return Err(format!("order must be at least 10, got {}", self.order));
        }
        if !(self.tolerance > 0.0 && self.tolerance <= 1e-4) {
            return Err(format!(
                "tolerance must lie in (0, 1e-4], got {}",
                self.tolerance
            ));
        }
        for s in &self.suites {
            if !ALL_SUITES.contains(&s.as_str()) {
                return Err(format!("unknown suite {s:?}"));
            }
        }
        if self.format != "text" && self.format != "json" {
            return Err(format!("format must be text or json, got {:?}", self.format));
        }
        Ok(())
    }
}

/// One check outcome; `detail` is the human-readable result or error.
struct Line {
    suite: &'static str,
    id: String,
    pass: bool,
    detail: String,
}

impl Line {
    fn of(suite: &'static str, id: impl Into<String>, pass: bool, detail: impl Into<String>) -> Line {
        Line { suite, id: id.into(), pass, detail: detail.into() }
    }

    fn from_unit(suite: &'static str, id: impl Into<String>, r: nahmforge_core::Result<()>) -> Line {
        match r {
            Ok(()) => Line::of(suite, id, true, "ok"),
            Err(e) => Line::of(suite, id, false, e.to_string()),
        }
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("range must look like A..B, got {s:?}"))?;
    let lo = a.trim().parse::<usize>().map_err(|e| format!("bad lower bound {a:?}: {e}"))?;
    let hi = b.trim().parse::<usize>().map_err(|e| format!("bad upper bound {b:?}: {e}"))?;
    Ok((lo, hi))
}

fn main() {
    if let Ok(n) = std::env::var("NAHMFORGE_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
        }
    }
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Eval(args) => cmd_eval(args),
        Cmd::Modularity(args) => cmd_modularity(args),
    };
    std::process::exit(code);
}

fn usage_error(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    2
}

// ---------------------------------------------------------------- verify ---

fn cmd_verify(args: VerifyArgs) -> i32 {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return usage_error(&format!("cannot read {}: {e}", path.display())),
            };
            match serde_json::from_str::<RunConfig>(&text) {
                Ok(c) => c,
                Err(e) => return usage_error(&format!("bad config {}: {e}", path.display())),
            }
        }
        None => RunConfig::default(),
    };
    if let Some(r) = &args.r {
        match parse_range(r) {
            Ok((lo, hi)) => {
                cfg.r_min = lo;
                cfg.r_max = hi;
            }
            Err(e) => return usage_error(&e),
        }
    }
    if let Some(o) = args.order {
        cfg.order = o;
    }
    if let Some(t) = args.tol {
        cfg.tolerance = t;
    }
    if let Some(t) = args.terms {
        cfg.terms = t;
    }
    if !args.suite.is_empty() {
        cfg.suites = args.suite.clone();
    }
    if let Err(e) = cfg.validate() {
        return usage_error(&e);
    }

    let mut lines = Vec::new();
    for suite in ALL_SUITES {
        if !cfg.suites.iter().any(|s| s == suite) {
            continue;
        }
        let chunk = match suite {
            "identities" => run_identities(&cfg),
            "bailey" => run_bailey(&cfg),
            "modularity" => run_modularity_suite(&cfg),
            _ => run_transforms(&cfg),
        };
        lines.extend(chunk);
    }

    let mut failed = 0usize;
    for line in &lines {
        if !line.pass {
            failed += 1;
        }
        if cfg.format == "text" {
            println!(
                "[{}] {:<40} {} {}",
                line.suite,
                line.id,
                if line.pass { "pass" } else { "FAIL" },
                line.detail
            );
        }
    }
    let report = serde_json::json!({
        "config": {
            "r_min": cfg.r_min,
            "r_max": cfg.r_max,
            "order": cfg.order,
            "tolerance": cfg.tolerance,
            "terms": cfg.terms,
            "suites": cfg.suites,
        },
        "results": lines.iter().map(|l| serde_json::json!({
            "suite": l.suite,
            "id": l.id,
            "pass": l.pass,
            "detail": l.detail,
        })).collect::<Vec<_>>(),
        "failed": failed,
        "total": lines.len(),
    });
    if cfg.format == "json" {
        println!("{}", serde_json::to_string_pretty(&report).expect("report"));
    } else {
        println!(
            "{} checks, {} failed ({})",
            lines.len(),
            failed,
            if failed == 0 { "PASS" } else { "FAIL" }
        );
    }
    let sink = args.json.or_else(|| cfg.output.as_ref().map(PathBuf::from));
    if let Some(path) = sink {
        let text = serde_json::to_string_pretty(&report).expect("report");
        if let Err(e) = std::fs::write(&path, text) {
            return usage_error(&format!("cannot write {}: {e}", path.display()));
        }
    }
    if failed == 0 {
        0
    } else {
        1
    }
}

fn run_identities(cfg: &RunConfig) -> Vec<Line> {
    let order = FracExponent::int(cfg.order);
    identity_catalogue(cfg.r_min, cfg.r_max)
        .par_iter()
        .map(|eq| match verify_identity(eq, order) {
            Ok(cmp) => Line::of("identities", eq.to_string(), cmp.is_equal(), cmp.to_string()),
            Err(e) => Line::of("identities", eq.to_string(), false, e.to_string()),
        })
        .collect()
}

fn run_bailey(cfg: &RunConfig) -> Vec<Line> {
    let order = FracExponent::int(cfg.order.min(30));
    let mut lines: Vec<Line> = PairTag::all()
        .par_iter()
        .flat_map_iter(|tag| {
            let pair = BaileyPair::seed(*tag);
            let mut out = vec![
                Line::from_unit("bailey", format!("pair {tag}"), pair.verify(6, order)),
                Line::from_unit("bailey", format!("S1({tag})"), pair.s1().verify(6, order)),
                Line::from_unit("bailey", format!("limit({tag})"), verify_limit_identity(&pair, order)),
                Line::from_unit("bailey", format!("lemma({tag})"), verify_lemma_sum(&pair, order)),
            ];
            out.push(match pair.shift() {
                Ok(shifted) => {
                    Line::from_unit("bailey", format!("shift({tag})"), shifted.verify(6, order))
                }
                Err(_) => Line::of("bailey", format!("shift({tag})"), true, "not defined (a = 1)"),
            });
            out
        })
        .collect();
    let mut replays = Vec::new();
    for r in 2..=3usize {
        replays.push((format!("replay 2.1a (r={r})"), ReplayTarget::D2_1a { r }));
        for j in 1..=r {
            replays.push((
                format!("replay 2.1b (r={r}, j={j})"),
                ReplayTarget::D2_1b { r, j },
            ));
            replays.push((
                format!("replay 2.2b (r={r}, j={j})"),
                ReplayTarget::D2_2b { r, j },
            ));
        }
    }
    for r in 3..=4usize {
        replays.push((format!("replay 2.3a (r={r})"), ReplayTarget::D2_3a { r }));
    }
    lines.extend(
        replays
            .into_par_iter()
            .map(|(id, target)| Line::from_unit("bailey", id, replay_descending(target, order)))
            .collect::<Vec<_>>(),
    );
    lines
}

fn run_modularity_suite(cfg: &RunConfig) -> Vec<Line> {
    let mut lines = Vec::new();
    for which in ProofQuotient::all() {
        let family = which.family();
        for r in cfg.r_min..=cfg.r_max.min(5) {
            for j in 0..=r {
                let id = format!("{which} r={r} j={j}");
                match analyze_proof_quotient(which, r, j) {
                    Ok(report) => {
                        let level = family.printed_t(r) * family.printed_n0(r) * report.n;
                        let ok = report.modular
                            && report.w == nahmforge_core::rat_int(0)
                            && family.printed_t(r) % report.t == 0
                            && family.printed_n0(r) % report.n0 == 0
                            && level == family.published_level(r);
                        lines.push(Line::of(
                            "modularity",
                            id,
                            ok,
                            format!("level {level} (t={}, N0={}, N={})", report.t, report.n0, report.n),
                        ));
                    }
                    Err(e) => lines.push(Line::of("modularity", id, false, e.to_string())),
                }
            }
        }
    }
    let order = FracExponent::int(cfg.order.min(20));
    for family in [
        QuotientFamily::T4_1,
        QuotientFamily::T4_2,
        QuotientFamily::T4_3,
        QuotientFamily::T4_4,
    ] {
        let id = format!("crosscheck {family} r={} j=0", cfg.r_min);
        lines.push(Line::from_unit(
            "modularity",
            id,
            crosscheck_quotient_vs_nahm(family, cfg.r_min, 0, order),
        ));
    }
    lines
}

fn run_transforms(cfg: &RunConfig) -> Vec<Line> {
    let mut lines = Vec::new();
    let tol = cfg.tolerance;
    let c = Complex64::new;

    let mut defect: f64 = 0.0;
    for r in 2..=12usize {
        defect = defect
            .max(involution_defect(&nahmforge_core::build_s(r)))
            .max(involution_defect(&nahmforge_core::build_s_tilde(r)));
    }
    lines.push(Line::of(
        "transforms",
        "involutions r<=12",
        defect < 1e-12,
        format!("max defect {defect:.3e}"),
    ));

    let dual_taus = [
        c(0.0, 1.0),
        c(0.3, 1.1),
        c(-0.4, 0.8),
        c(0.0, std::f64::consts::FRAC_1_SQRT_2),
        c(0.1, 1.3),
    ];
    let report_line = |id: String, rep: nahmforge_core::Result<nahmforge_core::TransformReport>| {
        match rep {
            Ok(rep) => {
                let worst = rep.residuals.values().cloned().fold(0.0f64, f64::max);
                Line::of("transforms", id, rep.pass, format!("max residual {worst:.3e}"))
            }
            Err(e) => Line::of("transforms", id, false, e.to_string()),
        }
    };
    for family in [TransformFamily::G, TransformFamily::H] {
        for r in cfg.r_min..=cfg.r_max.min(4) {
            for (i, tau) in dual_taus.iter().enumerate() {
                lines.push(report_line(
                    format!("dual {family} r={r} tau#{i}"),
                    check_dual_transform(family, r, *tau, cfg.terms, tol),
                ));
            }
            lines.push(report_line(
                format!("translations {family} r={r}"),
                check_translations(family, r, c(0.3, 1.1), cfg.terms, tol),
            ));
        }
        for r in cfg.r_min..=cfg.r_max.min(3) {
            // the composite lower generator pushes tau toward the real axis,
            // so the H family needs more product factors at tau = 2i
            let terms = match family {
                TransformFamily::G => cfg.terms,
                TransformFamily::H => cfg.terms.max(1600),
            };
            lines.push(report_line(
                format!("composites {family} r={r}"),
                check_group_composites(family, r, c(0.0, 2.0), terms, tol),
            ));
        }
    }

    let residual_line = |id: String, res: nahmforge_core::Result<f64>| match res {
        Ok(v) => Line::of("transforms", id, v < tol, format!("residual {v:.3e}")),
        Err(e) => Line::of("transforms", id, false, e.to_string()),
    };
    for (j, m, tau) in [(1i64, 3.5, c(0.0, 0.8)), (2, 3.0, c(0.3, 1.0)), (3, 2.5, c(-0.2, 0.9))] {
        lines.push(residual_line(
            format!("theta inversion j={j} m={m}"),
            theta_inversion_residual(j, m, tau, cfg.terms),
        ));
    }
    for j in [1i64, 3, 5, 7] {
        lines.push(residual_line(
            format!("theta quarter-period j={j} m=7"),
            theta_quarter_residual(j, 7, 2, c(0.0, 0.9), cfg.terms),
        ));
    }

    for family in [TransformFamily::G, TransformFamily::H] {
        for r in 2..=3usize {
            let dim = family.dimension(r);
            lines.push(residual_line(
                format!("component {family} r={r} j=1 vs sum"),
                component_vs_nahm_residual(family, r, 1, c(0.0, 1.0), cfg.terms, 60),
            ));
            lines.push(residual_line(
                format!("half-period {family} r={r} j={dim} vs sum"),
                half_period_vs_nahm_residual(family, r, dim, c(0.0, 2.0), cfg.terms, 60),
            ));
        }
    }
    lines
}

// ------------------------------------------------------------------ eval ---

fn parse_builtin(name: &str) -> Result<NahmSpec, String> {
    if name.eq_ignore_ascii_case("capparelli") {
        return Ok(build_capparelli());
    }
    let mut parts = name.split(':');
    let head = parts.next().unwrap_or_default();
    let family = match head {
        "T1.1-1" => NahmFamily::T1_1_1,
        "T1.1-2" => NahmFamily::T1_1_2,
        "T1.2" => NahmFamily::T1_2,
        "T1.3" => NahmFamily::T1_3,
        other => return Err(format!("unknown builtin {other:?}")),
    };
    let mut r = None;
    let mut j = 0usize;
    for part in parts {
        let (key, val) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got {part:?}"))?;
        let n = val.parse::<usize>().map_err(|e| format!("bad value {val:?}: {e}"))?;
        match key {
            "r" => r = Some(n),
            "j" => j = n,
            other => return Err(format!("unknown key {other:?}")),
        }
    }
    let r = r.ok_or_else(|| format!("builtin {head:?} needs :r=N"))?;
    build_family(family, r, j).map_err(|e| e.to_string())
}

fn cmd_eval(args: EvalArgs) -> i32 {
    if args.order < 0 {
        return usage_error("order must be nonnegative");
    }
    let spec = match (&args.builtin, &args.spec) {
        (Some(name), None) => match parse_builtin(name) {
            Ok(s) => s,
            Err(e) => return usage_error(&e),
        },
        (None, Some(path)) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return usage_error(&format!("cannot read {}: {e}", path.display())),
            };
            let value: serde_json::Value = match serde_json::from_str(&text) {
                Ok(v) => v,
                Err(e) => return usage_error(&format!("bad JSON in {}: {e}", path.display())),
            };
            match NahmSpec::from_json(&value) {
                Ok(s) if s.validate_symmetrizable() => s,
                Ok(_) => {
                    return usage_error(&format!(
                        "bad spec {}: AD must be symmetric positive definite",
                        path.display()
                    ))
                }
                Err(e) => return usage_error(&format!("bad spec {}: {e}", path.display())),
            }
        }
        _ => return usage_error("exactly one of --builtin or --spec is required"),
    };
    // evaluate one unit past the requested exponent so that coefficients up
    // to and including q^order are certain, then cut back
    let work = FracExponent::int(args.order + 1);
    let series = match eval_nahm(&spec, work, args.with_constant) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let series = clip_inclusive(&series, args.order);
    println!("{series}");
    if let Some(path) = &args.json {
        let text = serde_json::to_string_pretty(&series.to_json()).expect("series json");
        if let Err(e) = std::fs::write(path, text) {
            return usage_error(&format!("cannot write {}: {e}", path.display()));
        }
    }
    0
}

/// Keep terms with exponent <= n (series truncation orders are exclusive).
fn clip_inclusive(s: &PuiseuxSeries, n: i64) -> PuiseuxSeries {
    let d = s.exponent_denominator();
    s.truncate(FracExponent::new(n * d + 1, d))
}

// ------------------------------------------------------------ modularity ---

fn cmd_modularity(args: ModularityArgs) -> i32 {
    let family = match args.theorem.as_str() {
        "4.1" => QuotientFamily::T4_1,
        "4.2" => QuotientFamily::T4_2,
        "4.3" => QuotientFamily::T4_3,
        "4.4" => QuotientFamily::T4_4,
        other => return usage_error(&format!("unknown selector {other:?} (use 4.1..4.4)")),
    };
    let (lo, hi) = match args.r.as_deref().map(parse_range).unwrap_or(Ok((2, 5))) {
        Ok(range) => range,
        Err(e) => return usage_error(&e),
    };
    if !(2 <= lo && lo <= hi && hi <= 8) {
        return usage_error("rank range must satisfy 2 <= A <= B <= 8");
    }
    let quotients: &[ProofQuotient] = match family {
        QuotientFamily::T4_1 => &[ProofQuotient::T4_1F1, ProofQuotient::T4_1F2],
        QuotientFamily::T4_2 => &[ProofQuotient::T4_2G1, ProofQuotient::T4_2G2],
        QuotientFamily::T4_3 => &[ProofQuotient::T4_3],
        QuotientFamily::T4_4 => &[ProofQuotient::T4_4],
    };
    let mut all_ok = true;
    for r in lo..=hi {
        let expected = family.published_level(r);
        let mut level = None;
        let mut detail = String::new();
        let mut ok = true;
        for which in quotients {
            for j in 0..=r {
                match analyze_proof_quotient(*which, r, j) {
                    Ok(report) => {
                        let this = family.printed_t(r) * family.printed_n0(r) * report.n;
                        if level.get_or_insert(this) != &this
                            || !report.modular
                            || this != expected
                        {
                            ok = false;
                        }
                        if j == 0 && detail.is_empty() {
                            let _ = write!(
                                detail,
                                "w={} t={} N0={} N={}",
                                nahmforge_core::series::rat_to_string(&report.w),
                                family.printed_t(r),
                                family.printed_n0(r),
                                report.n
                            );
                        }
                    }
                    Err(e) => {
                        ok = false;
                        detail = e.to_string();
                    }
                }
            }
        }
        println!(
            "{} r={r}: level {} ({detail}) {}",
            args.theorem,
            level.map_or_else(|| "?".into(), |l| l.to_string()),
            if ok { "pass" } else { "FAIL" }
        );
        all_ok &= ok;
    }
    if all_ok {
        0
    } else {
        1
    }
}
