use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use defectwb::checks::{
    parse_rational, AnnulusParams, BfParams, Check, ConventionName, DglaParams, DyonicParams, FactLineParams,
    FlavorName, HbarParams, LocalityParams, MonodromyParams, MonopoleParams, ParityName, ProfileParams, Rational,
    ScalarParams, TheoryName, WilsonParams, YmParams,
};
use defectwb::{load_file, run_scenario, run_scenarios, run_suite, Expect, Report, Scenario, SuiteReport, UsageError};
use defectwb_algebra::{format_q, Q};
use defectwb_core::collapse::{make_profile, profile_table};
use defectwb_core::fact_line::weyl::monomials_up_to;
use defectwb_core::fact_line::{weyl_mul, SymplecticVS, WeylElement};
use defectwb_core::scalar_defect::JetOperator;
use serde::Deserialize;

const LONG_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (report schema 1)");

#[derive(Parser)]
#[command(name = "defectwb", version = LONG_VERSION, about = "Defect workbench: checks, scenarios and suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Profile table as CSV, or the locality report as JSON.
    Collapse(CollapseArgs),
    /// Annulus restriction quasi-isomorphism checks.
    Annulus(AnnulusArgs),
    /// Prefactorization axioms of the Weyl/Fock defect line.
    FactLine(FactLineArgs),
    /// Truncated jet operator, kernels and boundary Lagrangians.
    ScalarDefect(ScalarArgs),
    /// Holonomy of a piecewise-constant loop read from JSON.
    Monodromy(MonodromyArgs),
    /// BF boundary Lagrangian families.
    BfLagrangians(BfArgs),
    /// U(1) Wilson loop characters.
    Wilson(WilsonArgs),
    /// Bulk-defect coupled dg Lie algebra.
    Dgla(DglaArgs),
    /// First-order Yang-Mills complex on a Fourier-truncated torus.
    Ym(YmArgs),
    /// Dirac monopole charge by quadrature.
    Monopole(MonopoleArgs),
    /// Monopole background with a Wilson line.
    Dyonic(DyonicArgs),
    /// Runs the scenarios of one file.
    Run(RunArgs),
    /// Runs every scenario file in a directory.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct CollapseArgs {
    #[arg(long, default_value_t = 0.25)]
    t: f64,
    #[arg(long, default_value_t = 0.5)]
    family: f64,
    #[arg(long, default_value_t = 31)]
    rows: usize,
    #[arg(long)]
    check_locality: bool,
    #[arg(long, default_value_t = 50)]
    cases: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Args)]
struct AnnulusArgs {
    #[arg(long, value_enum, default_value = "chern-simons")]
    theory: TheoryArg,
    #[arg(long, default_value_t = 1)]
    lie_dim: usize,
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum TheoryArg {
    ChernSimons,
    Bf,
    Massive,
}

#[derive(Args)]
struct FactLineArgs {
    #[arg(long, default_value_t = 2)]
    v_dim: usize,
    /// Comma-separated generator labels spanning L₋.
    #[arg(long, default_value = "q")]
    lminus: String,
    #[arg(long, default_value = "p")]
    lplus: String,
    #[arg(long, default_value_t = 3)]
    depth: usize,
    #[arg(long, default_value_t = 6)]
    cap: u32,
    #[arg(long)]
    classical: bool,
    #[arg(long)]
    flipped: bool,
    /// Also check the ħ-expansion up to this total degree.
    #[arg(long)]
    hbar_degree: Option<u32>,
    /// Print the Weyl multiplication table of low monomials as CSV instead.
    #[arg(long)]
    emit_tables: bool,
}

#[derive(Args)]
struct ScalarArgs {
    #[arg(long, default_value = "1")]
    radius: String,
    #[arg(long, default_value_t = 5)]
    modes: i64,
    #[arg(long, default_value_t = 8)]
    order: usize,
    #[arg(long, default_value_t = 4)]
    spectral_kmax: i64,
    /// Print the mode blocks of the operator as CSV instead.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct MonodromyArgs {
    #[arg(long, default_value = "sl2")]
    algebra: String,
    #[arg(long, default_value = "standard")]
    rep: String,
    /// JSON: `[[coeffs, length], ...]` or `{"segments": [...]}`.
    #[arg(long)]
    segments: PathBuf,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct BfArgs {
    #[arg(long, default_value = "sl2")]
    algebra: String,
    /// Rational range `a..b:step` for the graph family.
    #[arg(long, allow_hyphen_values = true, default_value = "-2..2:1")]
    sweep_s: String,
    /// Comma-separated sl2 subalgebras (zero, cartan, borel, full).
    #[arg(long)]
    subalgebras: Option<String>,
}

#[derive(Args)]
struct WilsonArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    weight: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.7)]
    flux: f64,
}

#[derive(Args)]
struct DglaArgs {
    #[arg(long, default_value = "u1")]
    algebra: String,
    #[arg(long, default_value = "charge:1")]
    rep: String,
    #[arg(long, value_enum, default_value = "even")]
    parity: ParityArg,
    #[arg(long, default_value_t = 4)]
    bulk_dim: usize,
    #[arg(long, default_value_t = 1)]
    cap: u32,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ParityArg {
    Odd,
    Even,
}

#[derive(Args)]
struct YmArgs {
    #[arg(long, default_value_t = 1)]
    cutoff: i64,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    coupling: String,
    /// Also check the B = 0 boundary condition.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct MonopoleArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    charge: i64,
    #[arg(long, default_value_t = 64)]
    grid: usize,
}

#[derive(Args)]
struct DyonicArgs {
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    m: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    n: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.7)]
    flux: f64,
}

#[derive(Args)]
struct RunArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct SuiteArgs {
    dir: PathBuf,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    json: Option<PathBuf>,
}

/// Global tolerance, overridable through `DEFECTWB_EPS`.
fn global_eps() -> Result<f64, UsageError> {
    match std::env::var("DEFECTWB_EPS") {
        Err(_) => Ok(defectwb_algebra::DEFAULT_EPS),
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|e| e.is_finite() && *e > 0.0)
            .ok_or_else(|| UsageError(format!("DEFECTWB_EPS={s:?} is not a positive number"))),
    }
}

fn rational(s: &str) -> Result<Rational, UsageError> {
    parse_rational(s).map(Rational).map_err(UsageError)
}

/// `a..b:step` over the rationals, endpoints included.
fn sweep(spec: &str) -> Result<Vec<Rational>, UsageError> {
    let bad = || UsageError(format!("bad sweep {spec:?}, expected a..b:step"));
    let (range, step) = spec.split_once(':').unwrap_or((spec, "1"));
    let (a, b) = range.split_once("..").ok_or_else(bad)?;
    let (a, b, step) = (rational(a)?.0, rational(b)?.0, rational(step)?.0);
    if step <= Q::from_integer(0.into()) || a > b {
        return Err(bad());
    }
    let mut out = Vec::new();
    let mut x = a;
    while x <= b {
        out.push(Rational(x.clone()));
        x += step.clone();
    }
    Ok(out)
}

fn single(name: &str, check: Check, eps: f64) -> Report {
    let s = Scenario { name: name.into(), check, expect: Expect::Pass, golden: Vec::new(), source: PathBuf::new() };
    run_scenario(&s, eps)
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn print_json(v: &impl serde::Serialize) {
    emit(&format!("{}\n", serde_json::to_string_pretty(v).expect("reports serialize")));
}

fn report_exit(r: &Report) -> ExitCode {
    print_json(r);
    ExitCode::from(if r.passed { 0 } else { 1 })
}

fn suite_exit(r: &SuiteReport, out: Option<&Path>) -> Result<ExitCode, UsageError> {
    let json = r.to_json();
    match out {
        Some(p) => std::fs::write(p, &json).map_err(|e| UsageError(format!("{}: {e}", p.display())))?,
        None => emit(&json),
    }
    for s in &r.scenarios {
        eprintln!("{:<6} {:<40} {:>9.3}s", if s.passed { "ok" } else { "FAILED" }, s.scenario, s.duration.as_secs_f64());
    }
    eprintln!("{} passed, {} failed", r.summary.passed, r.summary.failed);
    Ok(ExitCode::from(r.exit_code() as u8))
}

fn csv_err(e: impl std::fmt::Display) -> UsageError {
    UsageError(format!("writing CSV: {e}"))
}

fn collapse(a: CollapseArgs, eps: f64) -> Result<ExitCode, UsageError> {
    if a.check_locality {
        let profile = single("collapse-profile", Check::CollapseProfile(ProfileParams { t: a.t, family: a.family, samples: 1000 }), eps);
        let locality = single(
            "collapse-locality",
            Check::CollapseLocality(LocalityParams { t: a.t, family: a.family, cases: a.cases, seed: a.seed }),
            eps,
        );
        let ok = profile.passed && locality.passed;
        print_json(&serde_json::json!({ "passed": ok, "profile": profile, "locality": locality }));
        return Ok(ExitCode::from(if ok { 0 } else { 1 }));
    }
    let profile = make_profile(a.t, a.family).map_err(|e| UsageError(e.to_string()))?;
    let mut w = csv::Writer::from_writer(std::io::stdout());
    w.write_record(["s", "f"]).map_err(csv_err)?;
    for (s, f) in profile_table(&profile, a.rows) {
        w.write_record([s.to_string(), f.to_string()]).map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)?;
    Ok(ExitCode::SUCCESS)
}

fn labels(s: &str) -> Vec<String> {
    s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
}

fn fact_line(a: FactLineArgs, eps: f64) -> Result<ExitCode, UsageError> {
    if a.emit_tables {
        if a.v_dim == 0 || !a.v_dim.is_multiple_of(2) {
            return Err(UsageError("--v-dim must be positive and even".into()));
        }
        let v = SymplecticVS::darboux(a.v_dim / 2);
        let names = v.labels().to_vec();
        let monos = monomials_up_to(v.dim(), 2);
        let mut w = csv::Writer::from_writer(std::io::stdout());
        w.write_record(["a", "b", "product"]).map_err(csv_err)?;
        for x in &monos {
            for y in &monos {
                let (wx, wy) = (WeylElement::monomial(x.clone()), WeylElement::monomial(y.clone()));
                let p = weyl_mul(&v, &wx, &wy, a.cap);
                w.write_record([wx.poly.display(&names), wy.poly.display(&names), p.poly.display(&names)]).map_err(csv_err)?;
            }
        }
        w.flush().map_err(csv_err)?;
        return Ok(ExitCode::SUCCESS);
    }
    let params = FactLineParams {
        v_dim: a.v_dim,
        lminus: labels(&a.lminus),
        lplus: labels(&a.lplus),
        depth: a.depth,
        cap: a.cap,
        convention: if a.flipped { ConventionName::Flipped } else { ConventionName::Geometric },
        flavor: if a.classical { FlavorName::Classical } else { FlavorName::Quantum },
        ..FactLineParams::default()
    };
    let axioms = single("fact-line", Check::FactLine(params), eps);
    let Some(degree) = a.hbar_degree else {
        return Ok(report_exit(&axioms));
    };
    let hbar = single("hbar-identity", Check::HbarIdentity(HbarParams { v_dim: a.v_dim, max_degree: degree }), eps);
    let ok = axioms.passed && hbar.passed;
    print_json(&serde_json::json!({ "passed": ok, "axioms": axioms, "hbar_identity": hbar }));
    Ok(ExitCode::from(if ok { 0 } else { 1 }))
}

fn scalar_defect(a: ScalarArgs, eps: f64) -> Result<ExitCode, UsageError> {
    let radius = rational(&a.radius)?;
    if a.csv {
        let op = JetOperator::new(radius.0, a.order, a.modes).map_err(|e| UsageError(e.to_string()))?;
        let mut w = csv::Writer::from_writer(std::io::stdout());
        w.write_record(["k", "row", "col", "value"]).map_err(csv_err)?;
        for (k, m) in &op.blocks {
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    w.write_record([k.to_string(), r.to_string(), c.to_string(), format_q(&m[(r, c)])]).map_err(csv_err)?;
                }
            }
        }
        w.flush().map_err(csv_err)?;
        return Ok(ExitCode::SUCCESS);
    }
    let params = ScalarParams { radius, modes: a.modes, order: a.order, spectral_kmax: a.spectral_kmax };
    Ok(report_exit(&single("scalar-defect", Check::ScalarDefect(params), eps)))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SegmentFile {
    List(Vec<(Vec<f64>, f64)>),
    Object {
        segments: Vec<(Vec<f64>, f64)>,
    },
}

fn monodromy(a: MonodromyArgs, eps: f64) -> Result<ExitCode, UsageError> {
    let text = std::fs::read_to_string(&a.segments).map_err(|e| UsageError(format!("{}: {e}", a.segments.display())))?;
    let file: SegmentFile =
        serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", a.segments.display())))?;
    let segments = match file {
        SegmentFile::List(s) | SegmentFile::Object { segments: s } => s,
    };
    let params = MonodromyParams { algebra: a.algebra, rep: a.rep, segments, trials: a.trials, seed: a.seed };
    Ok(report_exit(&single("monodromy", Check::Monodromy(params), eps)))
}

fn bf(a: BfArgs, eps: f64) -> Result<ExitCode, UsageError> {
    let subalgebras = match a.subalgebras {
        Some(s) => labels(&s),
        None if a.algebra == "sl2" => BfParams::default().subalgebras,
        None => Vec::new(),
    };
    let params = BfParams { algebra: a.algebra, s: sweep(&a.sweep_s)?, subalgebras };
    Ok(report_exit(&single("bf-lagrangians", Check::BfLagrangians(params), eps)))
}

fn run() -> Result<ExitCode, UsageError> {
    let cli = Cli::parse();
    let eps = global_eps()?;
    match cli.command {
        Command::Collapse(a) => collapse(a, eps),
        Command::Annulus(a) => {
            let theory = match a.theory {
                TheoryArg::ChernSimons => TheoryName::ChernSimons,
                TheoryArg::Bf => TheoryName::Bf,
                TheoryArg::Massive => TheoryName::Massive,
            };
            let params = AnnulusParams { theory, lie_dim: a.lie_dim, samples: a.samples, seed: a.seed, ..AnnulusParams::default() };
            Ok(report_exit(&single("annulus", Check::Annulus(params), eps)))
        }
        Command::FactLine(a) => fact_line(a, eps),
        Command::ScalarDefect(a) => scalar_defect(a, eps),
        Command::Monodromy(a) => monodromy(a, eps),
        Command::BfLagrangians(a) => bf(a, eps),
        Command::Wilson(a) => {
            Ok(report_exit(&single("wilson", Check::Wilson(WilsonParams { weight: a.weight, flux: a.flux }), eps)))
        }
        Command::Dgla(a) => {
            let parity = match a.parity {
                ParityArg::Odd => ParityName::Odd,
                ParityArg::Even => ParityName::Even,
            };
            let params = DglaParams { algebra: a.algebra, rep: a.rep, parity, bulk_dim: a.bulk_dim, cap: a.cap };
            Ok(report_exit(&single("dgla", Check::CoupledDgla(params), eps)))
        }
        Command::Ym(a) => {
            let params = YmParams { cutoff: a.cutoff, coupling: rational(&a.coupling)?, boundary: a.check };
            Ok(report_exit(&single("ym", Check::Ym(params), eps)))
        }
        Command::Monopole(a) => {
            let params = MonopoleParams { charge: a.charge, grid: a.grid, ..MonopoleParams::default() };
            Ok(report_exit(&single("monopole", Check::Monopole(params), eps)))
        }
        Command::Dyonic(a) => {
            Ok(report_exit(&single("dyonic", Check::Dyonic(DyonicParams { m: a.m, n: a.n, flux: a.flux }), eps)))
        }
        Command::Run(a) => {
            let scenarios = load_file(&a.file)?;
            suite_exit(&run_scenarios(&scenarios, a.jobs, eps), None)
        }
        Command::Suite(a) => suite_exit(&run_suite(&a.dir, a.jobs, eps)?, a.json.as_deref()),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => {
            let _ = std::io::stdout().flush();
            code
        }
        Err(e) => {
            eprintln!("defectwb: {e}");
            ExitCode::from(2)
        }
    }
}
