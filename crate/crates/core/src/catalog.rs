//! The built-in catalog of worked examples. Each entry bundles scenarios,
//! the verdicts they must reproduce and the properties they certify.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classify::{classify_scenario, diagram_check, Classification, DiagramCheck, Evidence, Fact, Property, Verdict};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::functional::{is_gaussian_functional, Certificate};
use crate::presentation::Kind;
use crate::report::{self, Feasibility, KernelMuEntry, LkVerdict, OracleVerdict, PassFail, RunOptions};
use crate::scalar::Scalar;
use crate::scenario::{FormFile, OptionsFile, PresentationFile, Scenario, ScenarioFile};
use crate::cocycle::derivation_space;
use crate::classify::DERIVATION_DIMS;

pub const SOURCES: &[(&str, &str)] = &[
    ("surface.gamma2.gaussian", include_str!("../catalog/surface.gamma2.gaussian.json")),
    ("surface.gamma2.nongaussian", include_str!("../catalog/surface.gamma2.nongaussian.json")),
    ("surface.gamma2.no_lk", include_str!("../catalog/surface.gamma2.no_lk.json")),
    ("zk.z2.gaussian", include_str!("../catalog/zk.z2.gaussian.json")),
    ("p2.derivations", include_str!("../catalog/p2.derivations.json")),
    ("p2.nongaussian", include_str!("../catalog/p2.nongaussian.json")),
    ("freeproduct.p2_z2", include_str!("../catalog/freeproduct.p2_z2.json")),
    ("ac_not_h2z.star_algebra", include_str!("../catalog/ac_not_h2z.star_algebra.json")),
    ("ac_not_h2z.definite", include_str!("../catalog/ac_not_h2z.definite.json")),
];

/// Factor length for the `K₃` test; the spanning set grows fast with it.
pub const GAUSSIAN_CHECK_LEN: usize = 2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelMuExpect {
    #[serde(rename = "K")]
    pub k: Scalar,
    pub mu_zero: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    RealPart,
    Farkas,
}

/// Verdicts a scenario must reproduce. Absent fields are not checked.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valid: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solve: Option<Feasibility>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambiguity_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateKind>,
    /// Relator (space-separated letters) to `K_r`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals: Option<BTreeMap<String, Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaussian_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub remainder_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decompose: Option<LkVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaussian_part: Option<Feasibility>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub remainder_part: Option<Feasibility>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<PassFail>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaussian_functional: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_mu: Option<BTreeMap<String, KernelMuExpect>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivation_dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forced_vanishing: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Slot {
    pub role: String,
    /// Components only feed free-product unions and are not classified.
    #[serde(default)]
    pub component: bool,
    pub scenario: ScenarioFile,
    #[serde(default)]
    pub expect: Expect,
}

/// A free product of component scenarios sharing one space. The union is
/// determined by the components, and has a functional iff each does.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FreeProduct {
    pub name: String,
    pub parts: Vec<String>,
    /// Options for the union scenario.
    #[serde(default)]
    pub options: OptionsFile,
    #[serde(default)]
    pub expect: Expect,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Claim {
    pub property: Property,
    pub verdict: Verdict,
    pub note: String,
    /// Roles whose finite facts back the claim.
    #[serde(default)]
    pub checked_by: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub id: String,
    pub algebra: String,
    pub summary: String,
    pub anchors: Vec<String>,
    pub scenarios: Vec<Slot>,
    #[serde(default)]
    pub free_products: Vec<FreeProduct>,
    #[serde(default)]
    pub claims: Vec<Claim>,
    /// Verdicts the entry must produce, merged over its scenarios and claims.
    pub properties: BTreeMap<Property, Verdict>,
}

pub fn entries() -> Result<Vec<CatalogEntry>> {
    SOURCES
        .iter()
        .map(|(id, text)| {
            let e: CatalogEntry = serde_json::from_str(text)
                .map_err(|err| Error::Invalid(format!("catalog entry {id}: {err}")))?;
            if e.id != *id {
                return Err(Error::Invalid(format!("catalog entry {id} declares id {}", e.id)));
            }
            Ok(e)
        })
        .collect()
}

pub fn entry(id: &str) -> Result<CatalogEntry> {
    entries()?
        .into_iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::Invalid(format!("no catalog entry `{id}`")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub scenario: String,
    pub check: String,
    pub expected: String,
    pub actual: String,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryReport {
    pub id: String,
    pub algebra: String,
    pub checks: Vec<CheckResult>,
    pub kernel_mu: Vec<(String, KernelMuEntry)>,
    pub classification: Classification,
    pub mismatches: Vec<CheckResult>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} [{}]: {}\n",
            self.id,
            self.algebra,
            if self.passed() { "ok" } else { "MISMATCH" }
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {} {}.{}: {}{}",
                if c.matched { "ok  " } else { "MISMATCH" },
                c.scenario,
                c.check,
                c.actual,
                if c.matched { String::new() } else { format!(" (expected {})", c.expected) }
            );
        }
        for (role, k) in &self.kernel_mu {
            let mu = match k.mu_zero {
                Some(true) => "μ = 0",
                Some(false) => "μ ≠ 0",
                None => "μ undecided",
            };
            let val = k.k.as_ref().map_or("undefined".to_string(), |x| x.to_string());
            let _ = writeln!(out, "  {role}: K(η)({}) = {val} with {mu}", k.name);
        }
        for p in &self.classification.properties {
            let _ = writeln!(out, "  {}: {} ({})", p.property, p.verdict, report::evidence_word(&p.evidence));
        }
        out
    }
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("expectations serialize")
}

struct Recorder<'a> {
    role: &'a str,
    checks: Vec<CheckResult>,
}

impl Recorder<'_> {
    fn check<T: Serialize + PartialEq>(&mut self, name: &str, expected: &Option<T>, actual: impl FnOnce() -> Result<T>) -> Result<()> {
        if let Some(e) = expected {
            let (actual, matched) = match actual() {
                Ok(a) => (compact(&a), &a == e),
                Err(err) => (format!("error: {err}"), false),
            };
            self.checks.push(CheckResult {
                scenario: self.role.to_string(),
                check: name.to_string(),
                expected: compact(e),
                actual,
                matched,
            });
        }
        Ok(())
    }
}

fn cert_kind(c: &Certificate) -> CertificateKind {
    match c {
        Certificate::RealPart { .. } => CertificateKind::RealPart,
        Certificate::Farkas { .. } => CertificateKind::Farkas,
    }
}

/// Evaluate every expectation on one scenario.
fn check_scenario(role: &str, s: &Scenario, e: &Expect, opts: RunOptions) -> Result<Vec<CheckResult>> {
    let mut r = Recorder {
        role,
        checks: Vec::new(),
    };
    r.check("valid", &e.valid, || Ok(report::validate(s)?.valid))?;
    let needs_solve = e.solve.is_some() || e.ambiguity_dim.is_some() || e.certificate.is_some() || e.residuals.is_some();
    if needs_solve {
        let core = report::solve(s).map(|x| x.core).map_err(|x| x.to_string());
        let core = || core.clone().map_err(Error::Invalid);
        r.check("solve", &e.solve, || Ok(core()?.verdict))?;
        r.check("ambiguity_dim", &e.ambiguity_dim, || Ok(core()?.ambiguity_dim))?;
        r.check("certificate", &e.certificate, || {
            core()?
                .certificate
                .as_ref()
                .map(cert_kind)
                .ok_or_else(|| Error::Invalid("no certificate".into()))
        })?;
        r.check("residuals", &e.residuals, || {
            Ok(core()?
                .obstructions
                .iter()
                .map(|o| (o.relator.join(" "), o.k.clone()))
                .collect::<BTreeMap<_, _>>())
        })?;
    }
    if e.gaussian_dim.is_some() || e.remainder_dim.is_some() || e.decompose.is_some() || e.gaussian_part.is_some() || e.remainder_part.is_some() {
        let d = report::decompose(s).map_err(|x| x.to_string());
        let get = || d.clone().map_err(Error::Invalid);
        r.check("gaussian_dim", &e.gaussian_dim, || Ok(get()?.split.gaussian_dim))?;
        r.check("remainder_dim", &e.remainder_dim, || Ok(get()?.split.remainder_dim))?;
        r.check("decompose", &e.decompose, || Ok(get()?.verdict))?;
        r.check("gaussian_part", &e.gaussian_part, || {
            get()?.parts.map(|p| p.gaussian.core.verdict).ok_or_else(|| Error::Invalid("no parts".into()))
        })?;
        r.check("remainder_part", &e.remainder_part, || {
            get()?.parts.map(|p| p.remainder.core.verdict).ok_or_else(|| Error::Invalid("no parts".into()))
        })?;
    }
    r.check("verify", &e.verify, || Ok(report::verify(s, opts)?.verdict))?;
    r.check("oracle", &e.oracle, || Ok(report::oracle(s, opts)?.verdict))?;
    r.check("gaussian_functional", &e.gaussian_functional, || {
        let c = s.cocycle()?;
        let f = match &s.functional {
            Some(f) => f.clone(),
            None => crate::functional::solve_generating_functional(&c)?
                .psi()
                .cloned()
                .ok_or_else(|| Error::Invalid("no functional".into()))?,
        };
        is_gaussian_functional(&f, &c, GAUSSIAN_CHECK_LEN)
    })?;
    r.check("kernel_mu", &e.kernel_mu, || {
        let c = s.cocycle()?;
        report::kernel_mu_entries(s, &c)?
            .into_iter()
            .map(|k| {
                let value = k.k.ok_or_else(|| Error::Invalid(format!("{}: a leg is not in ker ε", k.name)))?;
                let mu_zero = k.mu_zero.ok_or_else(|| Error::Invalid(format!("{}: μ undecided", k.name)))?;
                Ok((k.name, KernelMuExpect { k: value, mu_zero }))
            })
            .collect::<Result<BTreeMap<_, _>>>()
    })?;
    r.check("derivation_dims", &e.derivation_dims, || {
        DERIVATION_DIMS
            .map(|d| derivation_space(&s.presentation, d).map(|b| b.len()))
            .collect::<Result<Vec<_>>>()
    })?;
    r.check("forced_vanishing", &e.forced_vanishing, || {
        classify_scenario(s, role)?
            .facts
            .into_iter()
            .find_map(|f| match f {
                Fact::ForcedVanishing { generators, .. } => Some(generators),
                _ => None,
            })
            .ok_or_else(|| Error::Invalid("no forced-vanishing fact".into()))
    })?;
    Ok(r.checks)
}

/// The union of component scenarios over a common space: generators,
/// relators, images and cocycle values side by side.
pub fn free_product_union(name: &str, parts: &[&ScenarioFile], options: OptionsFile) -> Result<ScenarioFile> {
    let mut generators = Vec::new();
    let mut relators = Vec::new();
    let mut representation = BTreeMap::new();
    let mut cocycle = BTreeMap::new();
    let mut gram = None;
    for file in parts {
        let s = Scenario::from_file((*file).clone())?;
        if s.presentation.kind() != Kind::Group {
            return Err(Error::Invalid("free products are formed from group scenarios".into()));
        }
        match &gram {
            None => gram = Some(s.form.gram().clone()),
            Some(g) if g == s.form.gram() => {}
            Some(_) => return Err(Error::Invalid("components must share the form".into())),
        }
        for (g, name) in s.presentation.generators().iter().enumerate() {
            if generators.contains(name) {
                return Err(Error::Invalid(format!("generator `{name}` appears in two components")));
            }
            generators.push(name.clone());
            representation.insert(name.clone(), s.images[g].clone());
            cocycle.insert(name.clone(), s.values[g].clone());
        }
        relators.extend(file.presentation.relators.iter().cloned());
    }
    Ok(ScenarioFile {
        name: Some(name.to_string()),
        presentation: PresentationFile {
            kind: Kind::Group,
            generators,
            relators,
            involution: None,
            character: None,
            rules: Vec::new(),
        },
        form: gram.map(|gram| FormFile { gram }),
        representation: Some(representation),
        cocycle: Some(cocycle),
        functional: None,
        options,
    })
}

pub fn run_entry(e: &CatalogEntry, opts: RunOptions) -> Result<EntryReport> {
    let mut checks = Vec::new();
    let mut kernel_mu = Vec::new();
    let mut classification = Classification::default();
    let mut facts_by_role: BTreeMap<String, Vec<Fact>> = BTreeMap::new();

    for slot in &e.scenarios {
        let s = Scenario::from_file(slot.scenario.clone())
            .map_err(|err| Error::Invalid(format!("{}/{}: {err}", e.id, slot.role)))?;
        checks.extend(check_scenario(&slot.role, &s, &slot.expect, opts)?);
        if let Ok(c) = s.cocycle() {
            for k in report::kernel_mu_entries(&s, &c)? {
                kernel_mu.push((slot.role.clone(), k));
            }
        }
        if !slot.component {
            let cl = classify_scenario(&s, &slot.role)?;
            facts_by_role.insert(slot.role.clone(), cl.facts.clone());
            classification.extend(cl);
        }
    }

    for fp in &e.free_products {
        let parts = fp
            .parts
            .iter()
            .map(|role| {
                e.scenarios
                    .iter()
                    .find(|s| &s.role == role)
                    .map(|s| &s.scenario)
                    .ok_or_else(|| Error::Invalid(format!("{}: no scenario `{role}`", e.id)))
            })
            .collect::<Result<Vec<_>>>()?;
        let union = Scenario::from_file(free_product_union(&fp.name, &parts, fp.options.clone())?)?;
        let role = format!("free_product:{}", fp.name);
        checks.extend(check_scenario(&role, &union, &fp.expect, opts)?);

        let mut all_feasible = true;
        for part in &parts {
            let s = Scenario::from_file((*part).clone())?;
            all_feasible &= report::solve(&s)?.core.verdict == Feasibility::Feasible;
        }
        let union_feasible = report::solve(&union)?.core.verdict == Feasibility::Feasible;
        checks.push(CheckResult {
            scenario: role.clone(),
            check: "combination_rule".into(),
            expected: compact(&all_feasible),
            actual: compact(&union_feasible),
            matched: all_feasible == union_feasible,
        });
        let cl = classify_scenario(&union, &role)?;
        facts_by_role.insert(role, cl.facts.clone());
        classification.extend(cl);
    }

    for claim in &e.claims {
        let missing: Vec<&String> = claim.checked_by.iter().filter(|r| !facts_by_role.contains_key(*r)).collect();
        checks.push(CheckResult {
            scenario: "claims".into(),
            check: format!("{}.checked_by", claim.property),
            expected: "[]".into(),
            actual: format!("{missing:?}"),
            matched: missing.is_empty(),
        });
        let finite_checks: Vec<Fact> = claim
            .checked_by
            .iter()
            .flat_map(|r| facts_by_role.get(r).cloned().unwrap_or_default())
            .collect();
        classification.extend(Classification {
            properties: vec![crate::classify::PropertyReport {
                property: claim.property,
                verdict: claim.verdict,
                evidence: Evidence::PaperClaim {
                    note: claim.note.clone(),
                    finite_checks,
                },
            }],
            facts: Vec::new(),
        });
    }
    classification.sort();

    let actual = classification.verdicts();
    for prop in Property::ALL {
        let (exp, act) = (e.properties.get(&prop), actual.get(&prop));
        if exp.is_none() && act.is_none() {
            continue;
        }
        let show = |v: Option<&Verdict>| v.map_or("none".to_string(), |v| v.to_string());
        checks.push(CheckResult {
            scenario: "classification".into(),
            check: prop.to_string(),
            expected: show(exp),
            actual: show(act),
            matched: exp == act,
        });
    }

    let mismatches = checks.iter().filter(|c| !c.matched).cloned().collect();
    Ok(EntryReport {
        id: e.id.clone(),
        algebra: e.algebra.clone(),
        checks,
        kernel_mu,
        classification,
        mismatches,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogSummary {
    pub entries: Vec<EntryReport>,
    pub algebras: BTreeMap<String, Classification>,
    pub diagram: DiagramCheck,
    pub mismatches: usize,
}

impl CatalogSummary {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.diagram.passed()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{:<28} {} ({} checks)",
                e.id,
                if e.passed() { "ok" } else { "MISMATCH" },
                e.checks.len()
            );
            for m in &e.mismatches {
                let _ = writeln!(out, "  MISMATCH {}.{}: expected {}, got {}", m.scenario, m.check, m.expected, m.actual);
            }
        }
        let _ = writeln!(out, "\nproperties by algebra:");
        for (name, cl) in &self.algebras {
            let vs: Vec<String> = cl.verdicts().iter().map(|(p, v)| format!("{p}={v}")).collect();
            let _ = writeln!(out, "  {name:<12} {}", vs.join(" "));
        }
        let _ = writeln!(out, "\ndiagram consistency: {}", if self.diagram.violations.is_empty() { "ok" } else { "VIOLATED" });
        for v in &self.diagram.violations {
            let _ = writeln!(out, "  {v}");
        }
        for s in &self.diagram.separations {
            let fails: Vec<String> = s.separation.fails.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(
                out,
                "  {} does not imply {} ({}): {}",
                s.separation.holds,
                fails.join(" or "),
                s.separation.algebra,
                if s.realised { "realised" } else { "NOT REALISED" }
            );
        }
        let _ = writeln!(out, "\n{} mismatches", self.mismatches);
        out
    }
}

/// Run every entry (concurrently when `opts.exec` allows), merging results
/// by entry id.
pub fn run_all(opts: RunOptions) -> Result<CatalogSummary> {
    let all = entries()?;
    let inner = RunOptions {
        exec: Execution::Sequential,
        ..opts
    };
    let results = opts.exec.map(&all, |e| run_entry(e, inner));
    let mut reports = results.into_iter().collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    let mut algebras: BTreeMap<String, Classification> = BTreeMap::new();
    for r in &reports {
        algebras.entry(r.algebra.clone()).or_default().extend(r.classification.clone());
    }
    for cl in algebras.values_mut() {
        cl.sort();
    }
    let diagram = diagram_check(&algebras);
    let mismatches = reports.iter().map(|r| r.mismatches.len()).sum();
    Ok(CatalogSummary {
        entries: reports,
        algebras,
        diagram,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::{commutator_cycle, surface_cycle_gamma2};

    fn slot<'a>(e: &'a CatalogEntry, role: &str) -> &'a Slot {
        e.scenarios.iter().find(|s| s.role == role).unwrap()
    }

    #[test]
    fn entries_load_with_unique_ids() {
        let all = entries().unwrap();
        assert_eq!(all.len(), SOURCES.len());
        let ids: std::collections::BTreeSet<_> = all.iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids.len(), all.len());
        for e in &all {
            for s in &e.scenarios {
                Scenario::from_file(s.scenario.clone()).unwrap();
            }
        }
    }

    #[test]
    fn cycle_literals_match_the_built_tensors() {
        let e = entry("surface.gamma2.gaussian").unwrap();
        let s = Scenario::from_file(slot(&e, "real_pairing").scenario.clone()).unwrap();
        assert_eq!(s.cycles[0].1, surface_cycle_gamma2(&s.presentation).unwrap());

        let e = entry("zk.z2.gaussian").unwrap();
        let s = Scenario::from_file(slot(&e, "gaussian_real").scenario.clone()).unwrap();
        assert_eq!(s.cycles[0].1, commutator_cycle(&s.presentation, "a", "b").unwrap());
    }

    #[test]
    fn union_rejects_shared_generators() {
        let e = entry("freeproduct.p2_z2").unwrap();
        let p = &slot(&e, "p2_trivial").scenario;
        assert!(free_product_union("twice", &[p, p], OptionsFile::default()).is_err());
    }

    #[test]
    fn union_concatenates_components() {
        let e = entry("freeproduct.p2_z2").unwrap();
        let parts = [&slot(&e, "p2_real").scenario, &slot(&e, "z2_real").scenario];
        let u = Scenario::from_file(free_product_union("u", &parts, OptionsFile::default()).unwrap()).unwrap();
        assert_eq!(u.presentation.generators(), ["a", "b", "r", "c", "d"]);
        assert_eq!(u.presentation.relators().len(), 5);
        assert!(u.cocycle().is_ok());
    }

    #[test]
    fn a_wrong_expectation_is_a_mismatch() {
        let mut e = entry("p2.derivations").unwrap();
        e.scenarios[0].expect.solve = Some(Feasibility::Infeasible);
        e.properties.insert(Property::NC, Verdict::WitnessedFalse);
        let r = run_entry(&e, RunOptions::default()).unwrap();
        let failed: Vec<_> = r.mismatches.iter().map(|m| m.check.as_str()).collect();
        assert_eq!(failed, ["solve", "NC"]);
    }
}
