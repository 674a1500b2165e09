//! Typed parameters for every module entry operation and their evaluation
//! into a pass/fail outcome with a JSON payload.

use std::collections::BTreeMap;

use defectwb_algebra::{parse_q, q_to_f64, Scalar, Q};
use defectwb_core::collapse::{
    annulus_equivalence, make_profile, profile_contract, AnnulusSet, AnnulusTheory,
};
use defectwb_core::fact_line::{
    build_defect_prefact, check_hbar_identity, check_locality, check_prefact_axioms, classical_defect_prefact,
    sample_locality_cases, ActionConvention, Flavor, LagrangianSubspace, PrefactLine, SymplecticVS,
};
use defectwb_core::gauge::{
    bf_lagrangian_graph, bf_lagrangian_subalgebra, conjugation_study, coupled_dgla, monodromy, refinement_study,
    sl2_subalgebra, trig_connection, wilson_loop, LieAlgebra, LoopConnection, Parity, Representation,
};
use defectwb_core::scalar_defect::{
    boundary_pairing_report, harmonic_lagrangian, kernel_report, spectral_lagrangian_check, surjectivity_report,
    SpectralSet,
};
use defectwb_core::ym::{
    boundary_condition_b0, build_ym_complex, charge_convergence, dyonic_label, magnetic_charge, BoundaryYm,
    MonopoleField,
};
use defectwb_core::DefectError;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer};
use serde_json::{json, Value};

/// Abelian holonomy tolerance.
pub const ABELIAN_TOL: f64 = 1e-10;
/// Conjugation-invariance tolerance.
pub const CONJUGATION_TOL: f64 = 1e-8;
/// Wilson character tolerance.
pub const WILSON_TOL: f64 = 1e-10;
/// Monopole charge tolerance.
pub const CHARGE_TOL: f64 = 1e-6;

/// Result of one check before expectations are applied.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub payload: Value,
    pub diagnostics: Vec<String>,
    /// The check could not be evaluated (module error or panic).
    pub errored: bool,
}

impl Outcome {
    fn new(passed: bool, payload: Value) -> Self {
        Outcome { passed, payload, diagnostics: Vec::new(), errored: false }
    }

    fn note(mut self, cond: bool, msg: impl Into<String>) -> Self {
        if !cond {
            self.diagnostics.push(msg.into());
        }
        self
    }

    /// A failed outcome carrying the error text.
    pub fn error(msg: impl Into<String>) -> Self {
        Outcome { passed: false, payload: Value::Null, diagnostics: vec![msg.into()], errored: true }
    }
}

/// Exact rational read from an integer, a decimal or a `p/q` string.
#[derive(Debug, Clone, PartialEq)]
pub struct Rational(pub Q);

/// Parses `"3"`, `"-1/2"` or `"0.25"` exactly.
pub fn parse_rational(s: &str) -> Result<Q, String> {
    let s = s.trim();
    let Some((int, frac)) = s.split_once('.') else {
        return parse_q(s).map_err(|e| e.to_string());
    };
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("not a rational: {s:?}"));
    }
    let negative = int.trim_start().starts_with('-');
    let whole = parse_q(if int.is_empty() || int == "-" { "0" } else { int }).map_err(|e| e.to_string())?;
    let part = parse_q(&format!("{frac}/1{}", "0".repeat(frac.len()))).map_err(|e| e.to_string())?;
    Ok(if negative { whole - part } else { whole + part })
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Float(f64),
            Text(String),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Int(n) => n.to_string(),
            Raw::Float(x) => x.to_string(),
            Raw::Text(s) => s,
        };
        parse_rational(&text).map(Rational).map_err(D::Error::custom)
    }
}

impl Rational {
    fn int(n: i64) -> Self {
        Rational(Q::from_i64(n))
    }
}

fn q_json(x: &Q) -> Value {
    Value::String(defectwb_algebra::format_q(x))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "check", content = "params", rename_all = "snake_case")]
pub enum Check {
    CollapseProfile(ProfileParams),
    CollapseLocality(LocalityParams),
    Annulus(AnnulusParams),
    FactLine(FactLineParams),
    HbarIdentity(HbarParams),
    ScalarDefect(ScalarParams),
    BfLagrangians(BfParams),
    Monodromy(MonodromyParams),
    Refinement(RefinementParams),
    Wilson(WilsonParams),
    CoupledDgla(DglaParams),
    Ym(YmParams),
    Monopole(MonopoleParams),
    Dyonic(DyonicParams),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProfileParams {
    pub t: f64,
    pub family: f64,
    pub samples: usize,
}

impl Default for ProfileParams {
    fn default() -> Self {
        ProfileParams { t: 0.25, family: 0.5, samples: 1000 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LocalityParams {
    pub t: f64,
    pub family: f64,
    pub cases: usize,
    pub seed: u64,
}

impl Default for LocalityParams {
    fn default() -> Self {
        LocalityParams { t: 0.25, family: 0.5, cases: 50, seed: 7 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoryName {
    ChernSimons,
    Bf,
    Massive,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnnulusParams {
    pub theory: TheoryName,
    pub lie_dim: usize,
    /// Explicit `(r, R, r', R')` with `r ≤ r' < R' ≤ R`; sampled when empty.
    pub quadruples: Vec<[f64; 4]>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for AnnulusParams {
    fn default() -> Self {
        AnnulusParams { theory: TheoryName::ChernSimons, lie_dim: 1, quadruples: Vec::new(), samples: 10, seed: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConventionName {
    Geometric,
    Flipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlavorName {
    Quantum,
    Classical,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FactLineParams {
    pub v_dim: usize,
    pub lminus: Vec<String>,
    pub lplus: Vec<String>,
    pub depth: usize,
    pub cap: u32,
    pub convention: ConventionName,
    pub flavor: FlavorName,
    pub root: [f64; 2],
}

impl Default for FactLineParams {
    fn default() -> Self {
        FactLineParams {
            v_dim: 2,
            lminus: vec!["q".into()],
            lplus: vec!["p".into()],
            depth: 3,
            cap: 6,
            convention: ConventionName::Geometric,
            flavor: FlavorName::Quantum,
            root: [-4.0, 5.0],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HbarParams {
    pub v_dim: usize,
    pub max_degree: u32,
}

impl Default for HbarParams {
    fn default() -> Self {
        HbarParams { v_dim: 2, max_degree: 4 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScalarParams {
    pub radius: Rational,
    pub modes: i64,
    pub order: usize,
    /// Spectral sets are enumerated for every cutoff up to this one.
    pub spectral_kmax: i64,
}

impl Default for ScalarParams {
    fn default() -> Self {
        ScalarParams { radius: Rational::int(1), modes: 5, order: 8, spectral_kmax: 4 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BfParams {
    pub algebra: String,
    pub s: Vec<Rational>,
    pub subalgebras: Vec<String>,
}

impl Default for BfParams {
    fn default() -> Self {
        BfParams {
            algebra: "sl2".into(),
            s: (-2..=2).map(Rational::int).collect(),
            subalgebras: ["zero", "cartan", "borel", "full"].map(String::from).to_vec(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MonodromyParams {
    pub algebra: String,
    pub rep: String,
    /// `(coefficients, length)` per segment.
    pub segments: Vec<(Vec<f64>, f64)>,
    pub trials: usize,
    pub seed: u64,
}

impl Default for MonodromyParams {
    fn default() -> Self {
        MonodromyParams {
            algebra: "sl2".into(),
            rep: "standard".into(),
            segments: vec![(vec![0.2, 0.5, -0.3], 1.0), (vec![1.0, 0.0, 0.4], 0.5)],
            trials: 20,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RefinementParams {
    pub algebra: String,
    pub rep: String,
    /// Per generator: constant, `cos 2πs`, `sin 4πs` and `s` coefficients.
    pub coeffs: Vec<[f64; 4]>,
    pub levels: [u32; 2],
    pub reference: u32,
    pub min_order: f64,
}

impl Default for RefinementParams {
    fn default() -> Self {
        RefinementParams {
            algebra: "sl2".into(),
            rep: "standard".into(),
            coeffs: vec![[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 0.3]],
            levels: [1, 6],
            reference: 12,
            min_order: 1.9,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WilsonParams {
    pub weight: i64,
    pub flux: f64,
}

impl Default for WilsonParams {
    fn default() -> Self {
        WilsonParams { weight: 3, flux: 0.7 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityName {
    Odd,
    Even,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DglaParams {
    pub algebra: String,
    pub rep: String,
    pub parity: ParityName,
    pub bulk_dim: usize,
    pub cap: u32,
}

impl Default for DglaParams {
    fn default() -> Self {
        DglaParams { algebra: "u1".into(), rep: "charge:1".into(), parity: ParityName::Even, bulk_dim: 4, cap: 1 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct YmParams {
    pub cutoff: i64,
    pub coupling: Rational,
    /// Also check the `B = 0` boundary condition on `T³`.
    pub boundary: bool,
}

impl Default for YmParams {
    fn default() -> Self {
        YmParams { cutoff: 1, coupling: Rational::int(1), boundary: true }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MonopoleParams {
    pub charge: i64,
    pub grid: usize,
    pub grids: Vec<usize>,
    pub max_order: f64,
}

impl Default for MonopoleParams {
    fn default() -> Self {
        MonopoleParams { charge: 1, grid: 64, grids: vec![8, 16, 32, 64], max_order: -1.9 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DyonicParams {
    pub m: i64,
    pub n: i64,
    pub flux: f64,
}

impl Default for DyonicParams {
    fn default() -> Self {
        DyonicParams { m: 1, n: 1, flux: 0.7 }
    }
}

/// Errors while evaluating a check; they become failed outcomes.
type CheckResult = Result<Outcome, DefectError>;

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize to JSON")
}

fn bad(msg: impl Into<String>) -> DefectError {
    DefectError::Domain(msg.into())
}

/// Parses `standard`, `trivial[:n]`, `charge:n` or `weight:n`.
pub fn representation(alg: &LieAlgebra, spec: &str) -> Result<Representation, DefectError> {
    let (kind, arg) = spec.split_once(':').map_or((spec, None), |(k, a)| (k, Some(a)));
    let num = |default: i64| -> Result<i64, DefectError> {
        arg.map_or(Ok(default), |a| a.trim().parse().map_err(|_| bad(format!("bad representation argument in {spec:?}"))))
    };
    let rep = match kind {
        "standard" if alg.name() == "sl2" => Representation::sl2_standard(),
        "trivial" => Representation::trivial(alg, num(1)?.max(0) as usize),
        "charge" if alg.dim() == 1 => Representation::u1_charge(num(1)?),
        "weight" if alg.dim() == 1 => Representation::u1_weight(num(1)?),
        _ => return Err(bad(format!("representation {spec:?} is not available for {}", alg.name()))),
    };
    if let Some(f) = rep.module_failure(alg) {
        return Err(bad(format!("{spec:?} is not a module: generators {} and {}", f.i, f.j)));
    }
    Ok(rep)
}

impl Check {
    pub fn name(&self) -> &'static str {
        match self {
            Check::CollapseProfile(_) => "collapse_profile",
            Check::CollapseLocality(_) => "collapse_locality",
            Check::Annulus(_) => "annulus",
            Check::FactLine(_) => "fact_line",
            Check::HbarIdentity(_) => "hbar_identity",
            Check::ScalarDefect(_) => "scalar_defect",
            Check::BfLagrangians(_) => "bf_lagrangians",
            Check::Monodromy(_) => "monodromy",
            Check::Refinement(_) => "refinement",
            Check::Wilson(_) => "wilson",
            Check::CoupledDgla(_) => "coupled_dgla",
            Check::Ym(_) => "ym",
            Check::Monopole(_) => "monopole",
            Check::Dyonic(_) => "dyonic",
        }
    }

    /// Evaluates the check; module errors become failed outcomes.
    pub fn run(&self, eps: f64) -> Outcome {
        let result = match self {
            Check::CollapseProfile(p) => run_profile(p, eps),
            Check::CollapseLocality(p) => run_locality(p),
            Check::Annulus(p) => run_annulus(p),
            Check::FactLine(p) => run_fact_line(p),
            Check::HbarIdentity(p) => run_hbar(p),
            Check::ScalarDefect(p) => run_scalar(p),
            Check::BfLagrangians(p) => run_bf(p),
            Check::Monodromy(p) => run_monodromy(p),
            Check::Refinement(p) => run_refinement(p),
            Check::Wilson(p) => run_wilson(p),
            Check::CoupledDgla(p) => run_dgla(p),
            Check::Ym(p) => run_ym(p),
            Check::Monopole(p) => run_monopole(p),
            Check::Dyonic(p) => run_dyonic(p),
        };
        result.unwrap_or_else(|e| Outcome::error(format!("error: {e}")))
    }
}

fn run_profile(p: &ProfileParams, eps: f64) -> CheckResult {
    let r = profile_contract(&make_profile(p.t, p.family)?, p.samples, eps)?;
    Ok(Outcome::new(r.passed, to_value(&r)).note(r.passed, "profile contract violated"))
}

fn plane_line(t: f64) -> Result<(PrefactLine, PrefactLine, SymplecticVS), DefectError> {
    let v = SymplecticVS::darboux(1);
    let lm = LagrangianSubspace::from_labels(&v, &["q"])?;
    let lp = LagrangianSubspace::from_labels(&v, &["p"])?;
    Ok((build_defect_prefact(&v, &lm, &lp, t)?, PrefactLine::bulk(&v, Flavor::Quantum), v))
}

fn run_locality(p: &LocalityParams) -> CheckResult {
    let (line, free, v) = plane_line(p.t)?;
    let cases = sample_locality_cases(&v, p.t, p.cases, p.seed);
    let r = check_locality(&line, &free, make_profile(p.t, p.family)?, &cases)?;
    let ok = r.passed && r.maps_equal == p.cases && r.spaces_equal == p.cases;
    Ok(Outcome::new(ok, to_value(&r)).note(ok, r.first_failure.clone().unwrap_or_default()))
}

fn annulus_quadruples(p: &AnnulusParams) -> Vec<[f64; 4]> {
    if !p.quadruples.is_empty() {
        return p.quadruples.clone();
    }
    // Radii on a 1/64 grid keep the cellular models small and reproducible.
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut out = Vec::new();
    while out.len() < p.samples {
        let r = rng.gen_range(3..64) as f64 / 64.0;
        let big = rng.gen_range(100..189) as f64 / 64.0;
        let r1 = r + rng.gen_range(3..38) as f64 / 64.0;
        let r2 = big - rng.gen_range(3..38) as f64 / 64.0;
        if r1 < r2 {
            out.push([r, big, r1, r2]);
        }
    }
    out
}

fn run_annulus(p: &AnnulusParams) -> CheckResult {
    let theory = match p.theory {
        TheoryName::ChernSimons => AnnulusTheory::ChernSimons { lie_dim: p.lie_dim },
        TheoryName::Bf => AnnulusTheory::Bf { lie_dim: p.lie_dim },
        TheoryName::Massive => AnnulusTheory::Massive,
    };
    let mut rows = Vec::new();
    let mut all = true;
    for q in annulus_quadruples(p) {
        let r = annulus_equivalence(theory, AnnulusSet::new(q[0], q[1])?, AnnulusSet::new(q[2], q[3])?)?;
        all &= r.quasi_iso;
        rows.push(json!({ "radii": q, "report": to_value(&r) }));
    }
    Ok(Outcome::new(all, json!({ "theory": to_value(&theory), "cases": rows })).note(all, "restriction is not a quasi-isomorphism"))
}

fn run_fact_line(p: &FactLineParams) -> CheckResult {
    if p.v_dim == 0 || !p.v_dim.is_multiple_of(2) {
        return Err(bad(format!("v_dim {} must be positive and even", p.v_dim)));
    }
    let v = SymplecticVS::darboux(p.v_dim / 2);
    let lm = LagrangianSubspace::from_labels(&v, &p.lminus.iter().map(String::as_str).collect::<Vec<_>>())?;
    let lp = LagrangianSubspace::from_labels(&v, &p.lplus.iter().map(String::as_str).collect::<Vec<_>>())?;
    let line = match p.flavor {
        FlavorName::Quantum => build_defect_prefact(&v, &lm, &lp, 0.25)?,
        FlavorName::Classical => classical_defect_prefact(&v, &lm, &lp)?,
    };
    let convention = match p.convention {
        ConventionName::Geometric => ActionConvention::Geometric,
        ConventionName::Flipped => ActionConvention::Flipped,
    };
    let line = line.with_cap(p.cap).with_convention(convention);
    let r = check_prefact_axioms(&line, (p.root[0], p.root[1]), p.depth)?;
    let diag = r.first_failure.as_ref().map(|f| format!("{}: {} vs {}", f.configuration, f.nested, f.flat));
    Ok(Outcome::new(r.passed, to_value(&r)).note(r.passed, diag.unwrap_or_else(|| "truncated".into())))
}

fn run_hbar(p: &HbarParams) -> CheckResult {
    if p.v_dim == 0 || !p.v_dim.is_multiple_of(2) {
        return Err(bad(format!("v_dim {} must be positive and even", p.v_dim)));
    }
    let r = check_hbar_identity(&SymplecticVS::darboux(p.v_dim / 2), p.max_degree);
    Ok(Outcome::new(r.passed, to_value(&r)).note(r.passed, r.first_failure.clone().unwrap_or_default()))
}

/// Payload and verdict of the scalar-defect checks, shared with the subcommand.
pub fn scalar_report(p: &ScalarParams) -> CheckResult {
    let radius = p.radius.0.clone();
    let surj = surjectivity_report(radius.clone(), p.modes, p.order)?;
    let kernel = kernel_report(radius.clone(), p.modes, p.order)?;
    let harmonic = harmonic_lagrangian(p.modes, p.order, radius.clone())?;
    let pairing = boundary_pairing_report(p.modes)?;
    let radical_ok = pairing.skew && pairing.radical_dims == BTreeMap::from([(0, 1)]);
    let mut spectral = Vec::new();
    let mut spectral_ok = true;
    for kmax in 1..=p.spectral_kmax {
        let sets = SpectralSet::all(kmax);
        let reports = sets.iter().map(spectral_lagrangian_check).collect::<Result<Vec<_>, _>>()?;
        let isotropic = reports.iter().filter(|r| r.isotropic).count();
        let lagrangian = reports.iter().filter(|r| r.lagrangian.strict_self_perp).count();
        spectral_ok &= isotropic == reports.len();
        spectral.push(json!({ "kmax": kmax, "sets": reports.len(), "isotropic": isotropic, "strict_self_perp": lagrangian }));
    }
    let kernel_dims: BTreeMap<String, usize> = kernel.modes.iter().map(|m| (m.k.to_string(), m.dimension)).collect();
    let payload = json!({
        "radius": q_json(&radius),
        "modes": p.modes,
        "order": p.order,
        "surjectivity": to_value(&surj),
        "kernel": {
            "per_mode_dims": kernel_dims,
            "claimed_dimension": kernel.claimed_dimension,
            "matches_claim": kernel.matches_claim,
        },
        "harmonic": to_value(&harmonic.report),
        "pairing": to_value(&pairing),
        "spectral": spectral,
    });
    let ok = surj.surjective && harmonic.report.in_kernel && radical_ok && spectral_ok;
    Ok(Outcome::new(ok, payload)
        .note(surj.surjective, "truncated operator is not surjective")
        .note(harmonic.report.in_kernel, "harmonic jets are not annihilated")
        .note(radical_ok, "boundary pairing radical is not the constant mode")
        .note(spectral_ok, "a spectral set is not isotropic"))
}

fn run_scalar(p: &ScalarParams) -> CheckResult {
    scalar_report(p)
}

fn run_bf(p: &BfParams) -> CheckResult {
    let alg = LieAlgebra::by_name(&p.algebra)?;
    let mut rows = Vec::new();
    let mut ok = true;
    if !p.s.is_empty() {
        let kappa = alg.kappa().ok_or_else(|| bad(format!("{} has no invariant form", alg.name())))?;
        for s in &p.s {
            let l = bf_lagrangian_graph(&alg, &s.0, kappa)?;
            ok &= l.report.strict_self_perp && l.dim == alg.dim();
            rows.push(to_value(&l.summary(&format!("s={}", defectwb_algebra::format_q(&s.0)))));
        }
    }
    for name in &p.subalgebras {
        if alg.name() != "sl2" {
            return Err(bad("named subalgebras are only defined for sl2"));
        }
        let l = bf_lagrangian_subalgebra(&alg, &sl2_subalgebra(name)?)?;
        ok &= l.report.strict_self_perp && l.dim == alg.dim();
        rows.push(to_value(&l.summary(name)));
    }
    Ok(Outcome::new(ok, json!({ "algebra": alg.name(), "lagrangians": rows })).note(ok, "a family member is not Lagrangian"))
}

fn run_monodromy(p: &MonodromyParams) -> CheckResult {
    let alg = LieAlgebra::by_name(&p.algebra)?;
    let rep = representation(&alg, &p.rep)?;
    let c = LoopConnection::from_coefficients(&rep, &p.segments)?;
    let hol = monodromy(&c);
    let study = conjugation_study(&c, p.trials, p.seed)?;
    let mut ok = study.holonomy_residual < CONJUGATION_TOL && study.invariant_residual < CONJUGATION_TOL;
    let mut payload = json!({
        "holonomy": hol.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        "size": c.size(),
        "length": c.length(),
        "conjugation": to_value(&study),
    });
    if rep.dim == 1 {
        // Commuting segments: the holonomy is the exponential of the integral.
        let integral: Complex64 = c.segments().iter().map(|(a, l)| a[(0, 0)] * *l).sum();
        let residual = (hol[(0, 0)] - integral.exp()).norm();
        ok &= residual < ABELIAN_TOL;
        payload["abelian_residual"] = json!(residual);
    }
    Ok(Outcome::new(ok, payload).note(ok, "holonomy tolerance exceeded"))
}

fn run_refinement(p: &RefinementParams) -> CheckResult {
    let alg = LieAlgebra::by_name(&p.algebra)?;
    let rep = representation(&alg, &p.rep)?;
    let a = trig_connection(&rep, &p.coeffs)?;
    if p.levels[0] > p.levels[1] || p.levels[1] >= p.reference {
        return Err(bad("levels must be increasing and below the reference level"));
    }
    let r = refinement_study(&a, 1.0, p.levels[0]..=p.levels[1], p.reference)?;
    let ok = r.order >= p.min_order;
    Ok(Outcome::new(ok, to_value(&r)).note(ok, format!("order {} below {}", r.order, p.min_order)))
}

fn run_wilson(p: &WilsonParams) -> CheckResult {
    let segs = [(vec![p.flux], 1.0)];
    let wn = wilson_loop(&Representation::u1_weight(p.weight), &segs)?;
    let w1 = wilson_loop(&Representation::u1_weight(1), &segs)?;
    let power = w1.powi(p.weight as i32);
    let residual = (wn - power).norm();
    let ok = residual < WILSON_TOL;
    let payload = json!({
        "weight": p.weight,
        "flux": p.flux,
        "value": [wn.re, wn.im],
        "power_of_weight_one": [power.re, power.im],
        "residual": residual,
    });
    Ok(Outcome::new(ok, payload).note(ok, "weight-n value differs from the n-th power"))
}

fn run_dgla(p: &DglaParams) -> CheckResult {
    let alg = LieAlgebra::by_name(&p.algebra)?;
    let rep = representation(&alg, &p.rep)?;
    let parity = match p.parity {
        ParityName::Odd => Parity::Odd,
        ParityName::Even => Parity::Even,
    };
    let (dg, desc) = coupled_dgla(&alg, &rep, parity, p.bulk_dim, p.cap)?;
    let ok = desc.jacobi.passed;
    let payload = json!({ "dim": dg.dim(), "defect_len": dg.defect_len(), "descriptor": to_value(&desc) });
    Ok(Outcome::new(ok, payload).note(ok, format!("Jacobi fails at {:?}", desc.jacobi.first_failure)))
}

fn run_ym(p: &YmParams) -> CheckResult {
    let ym = build_ym_complex(p.cutoff, p.coupling.0.clone(), None)?;
    let r = ym.report()?;
    let zero = p.coupling.0.is_exact_zero();
    let mut ok = r.d_squared && (!zero || r.splits) && r.projector.idempotent;
    let mut out = Outcome::new(false, json!({ "complex": to_value(&r) }))
        .note(r.d_squared, "d² does not vanish")
        .note(!zero || r.splits, "c = 0 does not split");
    if p.boundary {
        let (_, b) = boundary_condition_b0(&BoundaryYm::new(p.cutoff)?)?;
        ok &= b.chain_map && b.isotropic;
        out = out.note(b.chain_map && b.isotropic, "B = 0 is not an isotropic subcomplex");
        out.payload["boundary_b0"] = to_value(&b);
    }
    out.payload["coupling"] = json!(q_to_f64(&p.coupling.0));
    out.passed = ok;
    Ok(out)
}

fn run_monopole(p: &MonopoleParams) -> CheckResult {
    let f = MonopoleField { charge: p.charge };
    let r = magnetic_charge(&f, p.grid)?;
    let err = (r.estimate - p.charge as f64).abs();
    let mut ok = err < CHARGE_TOL;
    let mut out = Outcome::new(false, json!({ "charge": to_value(&r), "error": err }))
        .note(err < CHARGE_TOL, format!("estimate off by {err:e}"));
    if p.charge != 0 && !p.grids.is_empty() {
        let conv = charge_convergence(&f, &p.grids)?;
        let order_ok = conv.extrapolated_order <= p.max_order && conv.midpoint_order <= p.max_order;
        ok &= order_ok;
        out = out.note(order_ok, "convergence order above the bound");
        out.payload["convergence"] = to_value(&conv);
    }
    out.passed = ok;
    Ok(out)
}

fn run_dyonic(p: &DyonicParams) -> CheckResult {
    let d = dyonic_label(p.m, p.n, p.flux)?;
    Ok(Outcome::new(d.passed, to_value(&d)).note(d.passed, "dyonic label failed"))
}
