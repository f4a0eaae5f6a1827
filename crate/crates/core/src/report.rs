//! Command reports. Every report embeds its scenario, serializes
//! deterministically, and carries enough data for [`recheck`] to confirm
//! its verdict without trusting the solver.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classify::{classify_scenario, Classification, Evidence};
use crate::cocycle::{big_k, big_l, Cochain2, Cocycle};
use crate::decomposition::{attempt_lk, split, LkOutcome, SplitResult};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::functional::{
    brute_force_welldefinedness_oracle_with, check_certificate, solve_generating_functional,
    verify_schurmann_triple_with, Certificate, Disagreement, FunctionalData, Identity, RelatorResidual,
    SolveReport,
};
use crate::linalg::{Matrix, Vector};
use crate::presentation::{Kind, Letter, Presentation, Word};
use crate::scalar::{Rational, Scalar};
use crate::scenario::{element_terms, FormFile, Scenario, ScenarioFile, TermFile};
use crate::wordproblem::NormalFormSpec;

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub max_word_length: Option<usize>,
    pub exec: Execution,
}

impl RunOptions {
    fn max_len(&self, s: &Scenario) -> usize {
        self.max_word_length.unwrap_or(s.max_word_length)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixViolation {
    pub name: String,
    pub residual: Matrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorViolation {
    pub relator: String,
    pub residual: Vector,
}

/// `μ(t)` and `K(η)(t)` for a supplied tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelMuEntry {
    pub name: String,
    pub legs_in_kernel: bool,
    pub mu: Vec<TermFile>,
    /// `None` when `μ(t)` is not visibly zero and no normal form decides it.
    pub mu_zero: Option<bool>,
    #[serde(rename = "K")]
    pub k: Option<Scalar>,
}

pub fn kernel_mu_entries(s: &Scenario, c: &Cocycle) -> Result<Vec<KernelMuEntry>> {
    let p = &s.presentation;
    let nf = s.normal_form().ok();
    s.cycles
        .iter()
        .map(|(name, t)| {
            if !p.legs_in_kernel(t) {
                return Ok(KernelMuEntry {
                    name: name.clone(),
                    legs_in_kernel: false,
                    mu: Vec::new(),
                    mu_zero: None,
                    k: None,
                });
            }
            let mu = p.mu(t)?;
            let mu_zero = if mu.is_zero() {
                Some(true)
            } else {
                nf.as_ref().map(|nf| nf.element_is_zero(&mu))
            };
            Ok(KernelMuEntry {
                name: name.clone(),
                legs_in_kernel: true,
                mu: element_terms(p, &mu),
                mu_zero,
                k: Some(big_k(c, t)?),
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feasibility {
    Feasible,
    Infeasible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LkVerdict {
    Decomposed,
    NoLk,
    /// The cocycle itself has no generating functional.
    Infeasible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PassFail {
    Pass,
    Fail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleVerdict {
    Pass,
    Counterexample,
}

/// Where the functional under test came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiSource {
    Scenario,
    Solver,
    /// `Re ψ(g) = −½⟨η(g),η(g)⟩`, `Im ψ(g) = 0`: the candidate used when no
    /// functional exists.
    ForcedRealParts,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub name: String,
    pub scenario: ScenarioFile,
    pub valid: bool,
    pub star_violations: Vec<MatrixViolation>,
    pub relation_violations: Vec<MatrixViolation>,
    pub cocycle_obstructions: Vec<VectorViolation>,
    pub kernel_mu: Vec<KernelMuEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveCore {
    pub verdict: Feasibility,
    pub psi: Option<BTreeMap<String, Scalar>>,
    pub real_parts: BTreeMap<String, Scalar>,
    pub ambiguity_dim: usize,
    pub ambiguity: Vec<Vector>,
    pub obstructions: Vec<RelatorResidual>,
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveJson {
    pub name: String,
    pub scenario: ScenarioFile,
    #[serde(flatten)]
    pub core: SolveCore,
    pub kernel_mu: Vec<KernelMuEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartJson {
    /// The part as a scenario of its own, in subspace coordinates.
    pub scenario: ScenarioFile,
    #[serde(flatten)]
    pub core: SolveCore,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Parts {
    pub gaussian: PartJson,
    pub remainder: PartJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitJson {
    pub gaussian_dim: usize,
    pub remainder_dim: usize,
    pub gaussian_basis: Vec<Vector>,
    pub remainder_basis: Vec<Vector>,
    pub p_g: Matrix,
    pub p_r: Matrix,
    pub eta_g: BTreeMap<String, Vector>,
    pub eta_r: BTreeMap<String, Vector>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecomposeJson {
    pub name: String,
    pub scenario: ScenarioFile,
    pub verdict: LkVerdict,
    pub psi_source: PsiSource,
    pub psi: BTreeMap<String, Scalar>,
    pub sum: SolveCore,
    pub split: SplitJson,
    pub parts: Option<Parts>,
    pub derivation_correction: Option<BTreeMap<String, Scalar>>,
    pub psi_g: Option<BTreeMap<String, Scalar>>,
    pub psi_r: Option<BTreeMap<String, Scalar>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureJson {
    pub identity: Identity,
    pub witnesses: Vec<Vec<String>>,
    pub residual: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyJson {
    pub name: String,
    pub scenario: ScenarioFile,
    pub verdict: PassFail,
    pub psi_source: PsiSource,
    pub psi: Option<BTreeMap<String, Scalar>>,
    pub max_len: usize,
    pub pairs_checked: usize,
    pub failure: Option<FailureJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleJson {
    pub kind: Disagreement,
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub left_psi: Scalar,
    pub right_psi: Scalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleJson {
    pub name: String,
    pub scenario: ScenarioFile,
    pub verdict: OracleVerdict,
    pub psi_source: PsiSource,
    pub psi: BTreeMap<String, Scalar>,
    pub normal_form: NormalFormSpec,
    pub max_len: usize,
    pub words: usize,
    pub pairs_checked: usize,
    pub counterexample: Option<CounterexampleJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyJson {
    pub name: String,
    pub scenario: ScenarioFile,
    #[serde(flatten)]
    pub classification: Classification,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Report {
    Validate(ValidateReport),
    Solve(SolveJson),
    Decompose(DecomposeJson),
    Verify(VerifyJson),
    Oracle(OracleJson),
    Classify(ClassifyJson),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Validate,
    Solve,
    Decompose,
    Verify,
    Oracle,
    Classify,
}

fn by_generator<T: Clone>(p: &Presentation, xs: &[T]) -> BTreeMap<String, T> {
    p.generators().iter().cloned().zip(xs.iter().cloned()).collect()
}

fn solve_core(p: &Presentation, r: &SolveReport) -> SolveCore {
    let real: Vec<Scalar> = r.real_parts.iter().cloned().map(Scalar::from_real).collect();
    let (ambiguity, psi) = match &r.outcome {
        crate::functional::SolveOutcome::Feasible { psi, ambiguity } => (
            ambiguity.clone(),
            Some(by_generator(p, psi.generator_values().expect("group functional"))),
        ),
        crate::functional::SolveOutcome::Infeasible { .. } => (Vec::new(), None),
    };
    SolveCore {
        verdict: if r.is_feasible() {
            Feasibility::Feasible
        } else {
            Feasibility::Infeasible
        },
        psi,
        real_parts: by_generator(p, &real),
        ambiguity_dim: ambiguity.len(),
        ambiguity,
        obstructions: r.residuals.clone(),
        certificate: r.certificate().cloned(),
    }
}

/// `−½⟨η(g),η(g)⟩` on every generator.
pub fn forced_real_parts(c: &Cocycle) -> Vec<Scalar> {
    let half = Rational::new(1.into(), 2.into());
    c.generator_values()
        .iter()
        .map(|v| Scalar::from_real(-(c.inner(v, v).re() * &half)))
        .collect()
}

/// The functional to test for a group scenario: the supplied one, else the
/// solver's, else the forced real parts.
fn group_functional(s: &Scenario, c: &Cocycle) -> Result<(FunctionalData, PsiSource)> {
    if let Some(f) = &s.functional {
        return Ok((f.clone(), PsiSource::Scenario));
    }
    if let Ok(valid) = s.cocycle() {
        if valid.representation().is_definite() {
            if let Some(psi) = solve_generating_functional(&valid)?.psi() {
                return Ok((psi.clone(), PsiSource::Solver));
            }
        }
    }
    Ok((
        FunctionalData::group(s.presentation.clone(), forced_real_parts(c))?,
        PsiSource::ForcedRealParts,
    ))
}

/// The scenario for a cocycle that shares `base`'s presentation.
pub fn scenario_for(base: &ScenarioFile, name: String, c: &Cocycle) -> ScenarioFile {
    let p = c.presentation();
    let rep = c.representation();
    let mut cocycle = by_generator(p, &c.generator_values());
    for (g, v) in c.starred_values() {
        cocycle.insert(format!("{}*", p.generators()[g]), v);
    }
    ScenarioFile {
        name: Some(name),
        presentation: base.presentation.clone(),
        form: Some(FormFile {
            gram: rep.form().gram().clone(),
        }),
        representation: Some(by_generator(p, &rep.generator_images())),
        cocycle: Some(cocycle),
        functional: None,
        options: crate::scenario::OptionsFile {
            normal_form: base.options.normal_form.clone(),
            ..Default::default()
        },
    }
}

pub fn run(command: Command, s: &Scenario, opts: RunOptions) -> Result<Report> {
    Ok(match command {
        Command::Validate => Report::Validate(validate(s)?),
        Command::Solve => Report::Solve(solve(s)?),
        Command::Decompose => Report::Decompose(decompose(s)?),
        Command::Verify => Report::Verify(verify(s, opts)?),
        Command::Oracle => Report::Oracle(oracle(s, opts)?),
        Command::Classify => Report::Classify(classify(s)?),
    })
}

pub fn validate(s: &Scenario) -> Result<ValidateReport> {
    let c = s.unchecked_cocycle()?;
    let rep = c.representation();
    let mv = |v: Vec<(String, Matrix)>| {
        v.into_iter()
            .map(|(name, residual)| MatrixViolation { name, residual })
            .collect::<Vec<_>>()
    };
    let star_violations = mv(rep.star_violations());
    let relation_violations = mv(rep.relation_violations());
    let cocycle_obstructions: Vec<VectorViolation> = c
        .obstructions()
        .into_iter()
        .map(|(relator, residual)| VectorViolation { relator, residual })
        .collect();
    let valid = star_violations.is_empty() && relation_violations.is_empty() && cocycle_obstructions.is_empty();
    let kernel_mu = if valid { kernel_mu_entries(s, &c)? } else { Vec::new() };
    Ok(ValidateReport {
        name: s.name().to_string(),
        scenario: s.file.clone(),
        valid,
        star_violations,
        relation_violations,
        cocycle_obstructions,
        kernel_mu,
    })
}

pub fn solve(s: &Scenario) -> Result<SolveJson> {
    let c = s.cocycle()?;
    let r = solve_generating_functional(&c)?;
    Ok(SolveJson {
        name: s.name().to_string(),
        scenario: s.file.clone(),
        core: solve_core(&s.presentation, &r),
        kernel_mu: kernel_mu_entries(s, &c)?,
    })
}

fn split_json(p: &Presentation, sp: &SplitResult) -> SplitJson {
    SplitJson {
        gaussian_dim: sp.gaussian_basis.len(),
        remainder_dim: sp.remainder_basis.len(),
        gaussian_basis: sp.gaussian_basis.clone(),
        remainder_basis: sp.remainder_basis.clone(),
        p_g: sp.p_g.clone(),
        p_r: sp.p_r.clone(),
        eta_g: by_generator(p, &sp.eta_g_full),
        eta_r: by_generator(p, &sp.eta_r_full),
    }
}

fn parts_json(s: &Scenario, sp: &SplitResult, g: &SolveReport, r: &SolveReport) -> Parts {
    let p = &s.presentation;
    Parts {
        gaussian: PartJson {
            scenario: scenario_for(&s.file, format!("{} (gaussian part)", s.name()), &sp.gaussian),
            core: solve_core(p, g),
        },
        remainder: PartJson {
            scenario: scenario_for(&s.file, format!("{} (remainder part)", s.name()), &sp.remainder),
            core: solve_core(p, r),
        },
    }
}

pub fn decompose(s: &Scenario) -> Result<DecomposeJson> {
    let p = &s.presentation;
    let c = s.cocycle()?;
    let sum = solve_generating_functional(&c)?;
    let sp = split(&c)?;
    let base = |verdict, psi_source, psi: &FunctionalData| DecomposeJson {
        name: s.name().to_string(),
        scenario: s.file.clone(),
        verdict,
        psi_source,
        psi: by_generator(p, psi.generator_values().expect("group functional")),
        sum: solve_core(p, &sum),
        split: split_json(p, &sp),
        parts: None,
        derivation_correction: None,
        psi_g: None,
        psi_r: None,
    };
    let (f, source) = group_functional(s, &c)?;
    if !sum.is_feasible() {
        let g = solve_generating_functional(&sp.gaussian)?;
        let r = solve_generating_functional(&sp.remainder)?;
        let mut out = base(LkVerdict::Infeasible, source, &f);
        out.parts = Some(parts_json(s, &sp, &g, &r));
        return Ok(out);
    }
    Ok(match attempt_lk(&c, &f)? {
        LkOutcome::Decomposed(d) => {
            let g = solve_generating_functional(&d.split.gaussian)?;
            let r = solve_generating_functional(&d.split.remainder)?;
            let mut out = base(LkVerdict::Decomposed, source, &f);
            out.parts = Some(parts_json(s, &d.split, &g, &r));
            out.derivation_correction = Some(by_generator(p, &d.derivation));
            out.psi_g = Some(by_generator(p, d.psi_g.generator_values().expect("group")));
            out.psi_r = Some(by_generator(p, d.psi_r.generator_values().expect("group")));
            out
        }
        LkOutcome::NoLk {
            split: sp2,
            gaussian,
            remainder,
        } => {
            let mut out = base(LkVerdict::NoLk, source, &f);
            out.parts = Some(parts_json(s, &sp2, &gaussian, &remainder));
            out
        }
    })
}

fn functional_for_any(s: &Scenario, c: &Cocycle) -> Result<(FunctionalData, PsiSource)> {
    match s.presentation.kind() {
        Kind::Group => group_functional(s, c),
        Kind::StarAlgebra => s
            .functional
            .clone()
            .map(|f| (f, PsiSource::Scenario))
            .ok_or_else(|| Error::Invalid("star-algebra scenarios need a functional table to verify".into())),
    }
}

pub fn verify(s: &Scenario, opts: RunOptions) -> Result<VerifyJson> {
    let p = &s.presentation;
    let c = s.unchecked_cocycle()?;
    let (f, source) = functional_for_any(s, &c)?;
    let max_len = opts.max_len(s);
    let r = verify_schurmann_triple_with(&c, &f, max_len, opts.exec)?;
    Ok(VerifyJson {
        name: s.name().to_string(),
        scenario: s.file.clone(),
        verdict: if r.passed() { PassFail::Pass } else { PassFail::Fail },
        psi_source: source,
        psi: f.generator_values().map(|v| by_generator(p, v)),
        max_len,
        pairs_checked: r.pairs_checked,
        failure: r.failure.map(|x| FailureJson {
            identity: x.identity,
            witnesses: x.witnesses.iter().map(|w| p.word_tokens(w)).collect(),
            residual: x.residual,
        }),
    })
}

pub fn oracle(s: &Scenario, opts: RunOptions) -> Result<OracleJson> {
    let p = &s.presentation;
    p.require_group()?;
    let nf = s.normal_form()?;
    let c = s.unchecked_cocycle()?;
    let (f, source) = group_functional(s, &c)?;
    let max_len = opts.max_len(s);
    let r = brute_force_welldefinedness_oracle_with(&c, &f, &nf, max_len, opts.exec)?;
    Ok(OracleJson {
        name: s.name().to_string(),
        scenario: s.file.clone(),
        verdict: if r.passed() {
            OracleVerdict::Pass
        } else {
            OracleVerdict::Counterexample
        },
        psi_source: source,
        psi: by_generator(p, f.generator_values().expect("group functional")),
        normal_form: s.normal_form_spec.clone().expect("normal form configured"),
        max_len,
        words: r.words,
        pairs_checked: r.pairs_checked,
        counterexample: r.counterexample.map(|x| CounterexampleJson {
            kind: x.kind,
            left: p.word_tokens(&x.left),
            right: p.word_tokens(&x.right),
            left_psi: x.left_psi,
            right_psi: x.right_psi,
        }),
    })
}

pub fn classify(s: &Scenario) -> Result<ClassifyJson> {
    let mut classification = classify_scenario(s, s.name())?;
    classification.sort();
    Ok(ClassifyJson {
        name: s.name().to_string(),
        scenario: s.file.clone(),
        classification,
    })
}

impl Report {
    pub fn command(&self) -> Command {
        match self {
            Report::Validate(_) => Command::Validate,
            Report::Solve(_) => Command::Solve,
            Report::Decompose(_) => Command::Decompose,
            Report::Verify(_) => Command::Verify,
            Report::Oracle(_) => Command::Oracle,
            Report::Classify(_) => Command::Classify,
        }
    }

    pub fn scenario(&self) -> &ScenarioFile {
        match self {
            Report::Validate(r) => &r.scenario,
            Report::Solve(r) => &r.scenario,
            Report::Decompose(r) => &r.scenario,
            Report::Verify(r) => &r.scenario,
            Report::Oracle(r) => &r.scenario,
            Report::Classify(r) => &r.scenario,
        }
    }

    /// `0`: ran and passed or feasible. `2`: ran and found an obstruction or
    /// counterexample, which the report certifies.
    pub fn exit_code(&self) -> i32 {
        let negative = match self {
            Report::Validate(r) => !r.valid,
            Report::Solve(r) => r.core.verdict == Feasibility::Infeasible,
            Report::Decompose(r) => r.verdict != LkVerdict::Decomposed,
            Report::Verify(r) => r.verdict == PassFail::Fail,
            Report::Oracle(r) => r.verdict == OracleVerdict::Counterexample,
            Report::Classify(_) => false,
        };
        if negative {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Validate(r) => {
                let _ = writeln!(out, "validate {}: {}", r.name, if r.valid { "valid" } else { "invalid" });
                for v in &r.star_violations {
                    let _ = writeln!(out, "  not *-compatible: {} residual {:?}", v.name, v.residual);
                }
                for v in &r.relation_violations {
                    let _ = writeln!(out, "  relation violated by π: {} residual {:?}", v.name, v.residual);
                }
                for v in &r.cocycle_obstructions {
                    let _ = writeln!(out, "  cocycle obstructed: η({}) = {}", v.relator, v.residual);
                }
                text_kernel_mu(&mut out, &r.kernel_mu);
            }
            Report::Solve(r) => {
                let _ = writeln!(out, "solve {}: {}", r.name, verdict_word(r.core.verdict));
                text_core(&mut out, &r.core, "  ");
                text_kernel_mu(&mut out, &r.kernel_mu);
            }
            Report::Decompose(r) => {
                let v = match r.verdict {
                    LkVerdict::Decomposed => "decomposed",
                    LkVerdict::NoLk => "NO_LK",
                    LkVerdict::Infeasible => "infeasible",
                };
                let _ = writeln!(out, "decompose {}: {v}", r.name);
                let _ = writeln!(
                    out,
                    "  split: dim D_G = {}, dim H_R = {}",
                    r.split.gaussian_dim, r.split.remainder_dim
                );
                let _ = writeln!(out, "  sum: {}", verdict_word(r.sum.verdict));
                text_core(&mut out, &r.sum, "    ");
                if let Some(parts) = &r.parts {
                    let _ = writeln!(out, "  gaussian part: {}", verdict_word(parts.gaussian.core.verdict));
                    text_core(&mut out, &parts.gaussian.core, "    ");
                    let _ = writeln!(out, "  remainder part: {}", verdict_word(parts.remainder.core.verdict));
                    text_core(&mut out, &parts.remainder.core, "    ");
                }
                if let Some(d) = &r.derivation_correction {
                    let _ = writeln!(out, "  derivation correction: {}", fmt_map(d));
                }
                if let (Some(g), Some(rr)) = (&r.psi_g, &r.psi_r) {
                    let _ = writeln!(out, "  ψ_G = {}", fmt_map(g));
                    let _ = writeln!(out, "  ψ_R = {}", fmt_map(rr));
                }
            }
            Report::Verify(r) => {
                let v = if r.verdict == PassFail::Pass { "pass" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "verify {}: {v} (max length {}, {} pairs, ψ from {:?})",
                    r.name, r.max_len, r.pairs_checked, r.psi_source
                );
                if let Some(f) = &r.failure {
                    let ws: Vec<String> = f.witnesses.iter().map(|w| fmt_tokens(w)).collect();
                    let _ = writeln!(out, "  {:?} identity fails at [{}], residual {}", f.identity, ws.join(", "), f.residual);
                }
            }
            Report::Oracle(r) => {
                let v = if r.verdict == OracleVerdict::Pass { "pass" } else { "COUNTEREXAMPLE" };
                let _ = writeln!(
                    out,
                    "oracle {}: {v} ({} words up to length {}, {} pairs, ψ from {:?})",
                    r.name, r.words, r.max_len, r.pairs_checked, r.psi_source
                );
                if let Some(x) = &r.counterexample {
                    let _ = writeln!(
                        out,
                        "  {:?} differs on {} = {}: ψ {} vs {}",
                        x.kind,
                        fmt_tokens(&x.left),
                        fmt_tokens(&x.right),
                        x.left_psi,
                        x.right_psi
                    );
                }
            }
            Report::Classify(r) => {
                let _ = writeln!(out, "classify {}:", r.name);
                for p in &r.classification.properties {
                    let _ = writeln!(out, "  {}: {} ({})", p.property, p.verdict, evidence_word(&p.evidence));
                }
                for f in &r.classification.facts {
                    let _ = writeln!(out, "  fact: {}", serde_json::to_string(f).expect("facts serialize"));
                }
            }
        }
        out
    }
}

pub(crate) fn evidence_word(e: &Evidence) -> String {
    match e {
        Evidence::InfeasibleCocycle {
            scenario,
            gaussian_dim,
            remainder_dim,
            ..
        } => format!("no functional for {scenario}, dim D_G = {gaussian_dim}, dim H_R = {remainder_dim}"),
        Evidence::NoLk { scenario, .. } => format!("{scenario} has a functional without a decomposition"),
        Evidence::NoDerivations { dims } => format!("derivation spaces {dims:?}"),
        Evidence::KernelMu { scenario, cycle, value } => format!("K(η)({cycle}) = {value} on {scenario}"),
        Evidence::PaperClaim { note, .. } => note.clone(),
    }
}

fn verdict_word(v: Feasibility) -> &'static str {
    match v {
        Feasibility::Feasible => "feasible",
        Feasibility::Infeasible => "INFEASIBLE",
    }
}

fn fmt_tokens(w: &[String]) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.join(" ")
    }
}

fn fmt_map<T: std::fmt::Display>(m: &BTreeMap<String, T>) -> String {
    let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn text_core(out: &mut String, c: &SolveCore, indent: &str) {
    for r in &c.obstructions {
        let _ = writeln!(
            out,
            "{indent}relator {}: K_r = {}{}",
            fmt_tokens(&r.relator),
            r.k,
            if r.re_violation { " (real part nonzero)" } else { "" }
        );
    }
    match &c.certificate {
        Some(Certificate::RealPart { relator }) => {
            let _ = writeln!(out, "{indent}certificate: Re K_r ≠ 0 for relator {relator}");
        }
        Some(Certificate::Farkas { multipliers }) => {
            let _ = writeln!(
                out,
                "{indent}certificate: y = {multipliers} annihilates the exponent sums but not Im K"
            );
        }
        None => {}
    }
    if let Some(psi) = &c.psi {
        let _ = writeln!(out, "{indent}ψ = {}", fmt_map(psi));
        let _ = writeln!(out, "{indent}ambiguity dimension {}", c.ambiguity_dim);
    }
}

fn text_kernel_mu(out: &mut String, entries: &[KernelMuEntry]) {
    for e in entries {
        let mu = match e.mu_zero {
            Some(true) => "μ = 0",
            Some(false) => "μ ≠ 0",
            None => "μ undecided",
        };
        match &e.k {
            Some(k) => {
                let _ = writeln!(out, "  cycle {}: K(η) = {k}, {mu}", e.name);
            }
            None => {
                let _ = writeln!(out, "  cycle {}: a leg is not in ker ε, {mu}", e.name);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Independent rechecking.

/// `ψ(w)` folded from the right: `ψ(l·u) = ψ(l) + ψ(u) + ⟨η(l⁻¹), η(u)⟩`.
/// The solver folds from the left, so agreement is a genuine cross-check.
pub fn right_fold(gen_psi: &[Scalar], c: &Cocycle, w: &Word) -> Scalar {
    let rep = c.representation();
    let mut psi = Scalar::zero();
    let mut eta = Vector::zeros(c.dim());
    for &l in w.letters().iter().rev() {
        let g = &gen_psi[l.gen as usize];
        let psi_l = if l.inv { g.conj() } else { g.clone() };
        let li: Letter = l.flipped();
        psi = &(&psi + &psi_l) + &c.inner(c.letter_value(li), &eta);
        eta = &rep.letter_image(l).mul_vec(&eta) + c.letter_value(l);
    }
    psi
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecheckItem {
    pub check: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecheckReport {
    pub of: Command,
    pub name: String,
    pub confirmed: bool,
    pub checks: Vec<RecheckItem>,
}

impl RecheckReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "recheck {:?} report {}: {}\n",
            self.of,
            self.name,
            if self.confirmed { "confirmed" } else { "REJECTED" }
        );
        for c in &self.checks {
            let _ = writeln!(out, "  [{}] {}", if c.ok { "ok" } else { "FAIL" }, c.check);
        }
        out
    }
}

struct Checks(Vec<RecheckItem>);

impl Checks {
    fn add(&mut self, check: impl Into<String>, ok: bool) {
        self.0.push(RecheckItem { check: check.into(), ok });
    }
}

fn gen_values(p: &Presentation, m: &BTreeMap<String, Scalar>) -> Option<Vec<Scalar>> {
    p.generators().iter().map(|g| m.get(g).cloned()).collect()
}

/// Recompute `K_r` by the right fold and validate the stored verdict.
fn recheck_core(checks: &mut Checks, label: &str, file: &ScenarioFile, core: &SolveCore) -> Result<()> {
    let s = Scenario::from_file(file.clone())?;
    let p = &s.presentation;
    let c = s.cocycle()?;
    let real = forced_real_parts(&c);
    let stored_real = gen_values(p, &core.real_parts);
    checks.add(format!("{label}: forced real parts"), stored_real.as_deref() == Some(&real[..]));
    let recomputed: Vec<Scalar> = p.relators().iter().map(|r| right_fold(&real, &c, r)).collect();
    let same = core.obstructions.len() == recomputed.len()
        && core
            .obstructions
            .iter()
            .zip(&recomputed)
            .zip(p.relators())
            .all(|((o, k), r)| &o.k == k && o.exponent_sums == p.exponent_sums(r) && o.re_violation == !k.real_part().is_zero());
    checks.add(format!("{label}: relator residuals by the right fold"), same);
    match core.verdict {
        Feasibility::Infeasible => {
            let ok = core
                .certificate
                .as_ref()
                .is_some_and(|cert| check_certificate(&core.obstructions, cert));
            checks.add(format!("{label}: infeasibility certificate"), ok);
        }
        Feasibility::Feasible => {
            let psi = core.psi.as_ref().and_then(|m| gen_values(p, m));
            let ok = psi.is_some_and(|psi| {
                psi.iter().zip(&real).all(|(x, r)| x.real_part() == *r)
                    && p.relators().iter().all(|r| right_fold(&psi, &c, r).is_zero())
            });
            checks.add(format!("{label}: ψ vanishes on every relator"), ok);
        }
    }
    Ok(())
}

/// Confirm a report from its embedded data, then confirm that re-running
/// the command reproduces it exactly.
pub fn recheck(report: &Report, opts: RunOptions) -> Result<RecheckReport> {
    let mut checks = Checks(Vec::new());
    let s = Scenario::from_file(report.scenario().clone())?;
    let p = s.presentation.clone();
    let name = s.name().to_string();
    match report {
        Report::Validate(r) => {
            let c = s.unchecked_cocycle()?;
            let obstructions = c.obstructions();
            let same = obstructions.len() == r.cocycle_obstructions.len()
                && obstructions
                    .iter()
                    .zip(&r.cocycle_obstructions)
                    .all(|((name, v), o)| name == &o.relator && v == &o.residual);
            checks.add("cocycle residuals", same);
        }
        Report::Solve(r) => {
            recheck_core(&mut checks, "cocycle", &r.scenario, &r.core)?;
            if let Ok(c) = s.cocycle() {
                for e in &r.kernel_mu {
                    if let Some((_, t)) = s.cycles.iter().find(|(n, _)| n == &e.name) {
                        let k = big_l(&c).eval(t)?;
                        checks.add(format!("K(η)({}) by direct pairing", e.name), e.k.as_ref().is_none_or(|x| x == &k));
                    }
                }
            }
        }
        Report::Decompose(r) => {
            recheck_core(&mut checks, "sum", &r.scenario, &r.sum)?;
            if let Some(parts) = &r.parts {
                recheck_core(&mut checks, "gaussian part", &parts.gaussian.scenario, &parts.gaussian.core)?;
                recheck_core(&mut checks, "remainder part", &parts.remainder.scenario, &parts.remainder.core)?;
                let g = parts.gaussian.core.verdict;
                let rem = parts.remainder.core.verdict;
                let expected = match r.verdict {
                    LkVerdict::NoLk => {
                        r.sum.verdict == Feasibility::Feasible
                            && (g == Feasibility::Infeasible || rem == Feasibility::Infeasible)
                    }
                    LkVerdict::Decomposed => g == Feasibility::Feasible && rem == Feasibility::Feasible,
                    LkVerdict::Infeasible => r.sum.verdict == Feasibility::Infeasible,
                };
                checks.add("verdict follows from the part verdicts", expected);
            }
            if let (Some(pg), Some(pr)) = (&r.psi_g, &r.psi_r) {
                let psi = gen_values(&p, &r.psi);
                let g = gen_values(&p, pg);
                let rr = gen_values(&p, pr);
                let ok = match (psi, g, rr) {
                    (Some(psi), Some(g), Some(rr)) => psi.iter().zip(g.iter().zip(&rr)).all(|(x, (a, b))| *x == a + b),
                    _ => false,
                };
                checks.add("ψ = ψ_G + ψ_R on generators", ok);
                if let Some(parts) = &r.parts {
                    let gs = Scenario::from_file(parts.gaussian.scenario.clone())?;
                    let gc = gs.cocycle()?;
                    let ok = gen_values(&p, pg)
                        .is_some_and(|g| gs.presentation.relators().iter().all(|w| right_fold(&g, &gc, w).is_zero()));
                    checks.add("shifted ψ_G vanishes on every relator", ok);
                }
            }
        }
        Report::Verify(r) => {
            if let Some(f) = &r.failure {
                let c = s.unchecked_cocycle()?;
                let (func, _) = functional_for_any(&s, &c)?;
                let ws = f
                    .witnesses
                    .iter()
                    .map(|w| p.parse_word(w))
                    .collect::<Result<Vec<_>>>()?;
                let residual = identity_residual(&p, &c, &func, f.identity, &ws)?;
                checks.add(format!("{:?} residual at the witnesses", f.identity), residual == f.residual && !residual.is_zero());
            }
        }
        Report::Oracle(r) => {
            if let Some(x) = &r.counterexample {
                let c = s.unchecked_cocycle()?;
                let nf = s.normal_form()?;
                let left = p.parse_word(&x.left)?;
                let right = p.parse_word(&x.right)?;
                checks.add("the two words are equal in the group", nf.equal(&left, &right));
                let psi = gen_values(&p, &r.psi).ok_or_else(|| Error::Invalid("incomplete ψ".into()))?;
                let differs = match x.kind {
                    Disagreement::Eta => c.eval(&left) != c.eval(&right),
                    Disagreement::Psi => {
                        let (a, b) = (right_fold(&psi, &c, &left), right_fold(&psi, &c, &right));
                        a != b && a == x.left_psi && b == x.right_psi
                    }
                };
                checks.add(format!("{:?} values differ", x.kind), differs);
            }
        }
        Report::Classify(r) => {
            for pr in &r.classification.properties {
                match &pr.evidence {
                    Evidence::InfeasibleCocycle {
                        residuals, certificate, ..
                    } => checks.add(
                        format!("{} certificate", pr.property),
                        check_certificate(residuals, certificate),
                    ),
                    Evidence::NoLk { gaussian, remainder, .. } => {
                        let ok = [gaussian, remainder]
                            .iter()
                            .filter_map(|x| x.as_ref())
                            .map(|(res, cert)| check_certificate(res, cert))
                            .collect::<Vec<_>>();
                        checks.add(format!("{} part certificates", pr.property), !ok.is_empty() && ok.iter().all(|&b| b));
                    }
                    Evidence::KernelMu { cycle, value, .. } => {
                        let c = s.cocycle()?;
                        let ok = s
                            .cycles
                            .iter()
                            .find(|(n, _)| n == cycle)
                            .map(|(_, t)| big_l(&c).eval(t))
                            .transpose()?
                            .is_some_and(|k| &k == value && !k.is_zero());
                        checks.add(format!("{} K(η)({cycle})", pr.property), ok);
                    }
                    Evidence::NoDerivations { .. } | Evidence::PaperClaim { .. } => {}
                }
            }
        }
    }
    let rerun = run(report.command(), &s, opts)?;
    checks.add("re-running reproduces the report", &rerun == report);
    let confirmed = checks.0.iter().all(|c| c.ok);
    Ok(RecheckReport {
        of: report.command(),
        name,
        confirmed,
        checks: checks.0,
    })
}

/// The residual of one verification identity, evaluated from scratch.
fn identity_residual(
    p: &Presentation,
    c: &Cocycle,
    f: &FunctionalData,
    identity: Identity,
    ws: &[Word],
) -> Result<Scalar> {
    let psi_word = |w: &Word| -> Result<Scalar> {
        match f.generator_values() {
            Some(v) => Ok(right_fold(v, c, w)),
            None => f.eval(c, w),
        }
    };
    let psi_elem = |e: &crate::presentation::AlgebraElement| -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (w, x) in e.terms() {
            acc += &(x * &psi_word(w)?);
        }
        Ok(acc)
    };
    let arg = |i: usize| ws.get(i).cloned().ok_or_else(|| Error::Invalid("missing witness".into()));
    Ok(match identity {
        Identity::Unit => psi_word(&Word::empty())?,
        Identity::Relator => psi_word(&arg(0)?)?,
        Identity::Coboundary => {
            let (a, b) = (arg(0)?, arg(1)?);
            let ea = p.character_word(&a);
            let eb = p.character_word(&b);
            let ab = p.word_element(&a.concat(&b))?;
            let lhs = &(&(&ea * &psi_word(&b)?) - &psi_elem(&ab)?) + &(&psi_word(&a)? * &eb);
            let star = c.eval_element(&p.involve(&p.word_element(&a)?)?);
            &lhs + &c.inner(&star, &c.eval(&b))
        }
        Identity::Hermitian => {
            let a = arg(0)?;
            let star = p.involve(&p.word_element(&a)?)?;
            &psi_elem(&star)? - &psi_word(&a)?.conj()
        }
        Identity::Positivity => {
            let a = p.augmentation(&arg(0)?)?;
            let psi = psi_elem(&p.multiply(&p.involve(&a)?, &a)?)?;
            let eta = c.eval_element(&a);
            &psi - &c.inner(&eta, &eta)
        }
    })
}

/// Parse any command report.
pub fn parse_report(text: &str) -> Result<Report> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        match inner.classify() {
            serde_json::error::Category::Syntax | serde_json::error::Category::Eof => Error::Parse {
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            },
            _ => Error::schema(e.path().to_string(), inner.to_string()),
        }
    })
}
