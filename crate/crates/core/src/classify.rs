//! Witness-level classification of the properties (LK), (GC), (NC), (AC)
//! and (H²Z), and the consistency checks against the implication diagram.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cocycle::{cocycle_space, derivation_space};
use crate::decomposition::{attempt_lk, split, LkOutcome};
use crate::error::Result;
use crate::functional::{solve_generating_functional, Certificate, RelatorResidual};
use crate::presentation::Kind;
use crate::report::kernel_mu_entries;
use crate::scalar::Scalar;
use crate::scenario::Scenario;

/// Derivation spaces are computed for these target dimensions.
pub const DERIVATION_DIMS: std::ops::RangeInclusive<usize> = 1..=4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Property {
    LK,
    GC,
    NC,
    AC,
    H2Z,
}

impl Property {
    pub const ALL: [Property; 5] = [Property::LK, Property::GC, Property::NC, Property::AC, Property::H2Z];
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Property::LK => "LK",
            Property::GC => "GC",
            Property::NC => "NC",
            Property::AC => "AC",
            Property::H2Z => "H2Z",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    WitnessedFalse,
    CheckedTrueFinite,
    PaperClaimTrue,
    PaperClaimFalse,
}

impl Verdict {
    pub fn is_true(self) -> bool {
        matches!(self, Verdict::CheckedTrueFinite | Verdict::PaperClaimTrue)
    }

    pub fn is_false(self) -> bool {
        matches!(self, Verdict::WitnessedFalse | Verdict::PaperClaimFalse)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::WitnessedFalse => "WITNESSED_FALSE",
            Verdict::CheckedTrueFinite => "CHECKED_TRUE_FINITE",
            Verdict::PaperClaimTrue => "PAPER_CLAIM_TRUE",
            Verdict::PaperClaimFalse => "PAPER_CLAIM_FALSE",
        };
        f.write_str(s)
    }
}

/// Finite facts that support a verdict without deciding it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Fact {
    /// `dims[i]` is the dimension of the derivation space into `C^(i+1)`.
    DerivationSpace { dims: Vec<usize> },
    /// For the scenario's representation on a definite form, every cocycle
    /// vanishes on these generators and their adjoints, and so does `π`.
    ForcedVanishing {
        scenario: String,
        generators: Vec<String>,
        cocycle_space_dim: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// A cocycle without a generating functional. `gaussian_dim` and
    /// `remainder_dim` locate it: a zero remainder means it is Gaussian, a
    /// zero Gaussian part means it is purely non-Gaussian.
    InfeasibleCocycle {
        scenario: String,
        gaussian_dim: usize,
        remainder_dim: usize,
        residuals: Vec<RelatorResidual>,
        certificate: Certificate,
    },
    /// A generating functional whose Gaussian or remainder part has none.
    NoLk {
        scenario: String,
        gaussian: Option<(Vec<RelatorResidual>, Certificate)>,
        remainder: Option<(Vec<RelatorResidual>, Certificate)>,
    },
    /// No nonzero derivations: every cocycle is its own remainder part.
    NoDerivations { dims: Vec<usize> },
    /// `K(η)` is nonzero on a tensor with `μ = 0`, so `L(η)` is not a
    /// coboundary.
    KernelMu {
        scenario: String,
        cycle: String,
        value: Scalar,
    },
    PaperClaim { note: String, finite_checks: Vec<Fact> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub properties: Vec<PropertyReport>,
    pub facts: Vec<Fact>,
}

impl Classification {
    fn push(&mut self, property: Property, verdict: Verdict, evidence: Evidence) {
        if !self.properties.iter().any(|r| r.property == property && r.verdict == verdict) {
            self.properties.push(PropertyReport {
                property,
                verdict,
                evidence,
            });
        }
    }

    pub fn extend(&mut self, other: Classification) {
        for r in other.properties {
            self.push(r.property, r.verdict, r.evidence);
        }
        for f in other.facts {
            if !self.facts.contains(&f) {
                self.facts.push(f);
            }
        }
    }

    /// The first verdict per property, in `Property::ALL` order.
    pub fn verdicts(&self) -> BTreeMap<Property, Verdict> {
        let mut out = BTreeMap::new();
        for r in &self.properties {
            out.entry(r.property).or_insert(r.verdict);
        }
        out
    }

    pub fn sort(&mut self) {
        self.properties.sort_by_key(|r| r.property);
    }
}

/// Everything a single scenario certifies about its algebra.
pub fn classify_scenario(s: &Scenario, label: &str) -> Result<Classification> {
    let p = s.presentation.clone();
    let mut out = Classification::default();

    if p.kind() == Kind::Group {
        let dims = DERIVATION_DIMS
            .map(|d| derivation_space(&p, d).map(|b| b.len()))
            .collect::<Result<Vec<_>>>()?;
        out.facts.push(Fact::DerivationSpace { dims: dims.clone() });
        if dims.iter().all(|&d| d == 0) {
            out.push(Property::GC, Verdict::CheckedTrueFinite, Evidence::NoDerivations { dims: dims.clone() });
            out.push(Property::LK, Verdict::CheckedTrueFinite, Evidence::NoDerivations { dims });
        }
    }

    let Ok(c) = s.cocycle() else {
        return Ok(out);
    };
    let definite = s.form.is_definite();

    if p.kind() == Kind::Group && definite {
        let solved = solve_generating_functional(&c)?;
        match solved.certificate() {
            Some(cert) => {
                let sp = split(&c)?;
                let evidence = Evidence::InfeasibleCocycle {
                    scenario: label.to_string(),
                    gaussian_dim: sp.gaussian_basis.len(),
                    remainder_dim: sp.remainder_basis.len(),
                    residuals: solved.residuals.clone(),
                    certificate: cert.clone(),
                };
                if sp.is_gaussian() {
                    out.push(Property::GC, Verdict::WitnessedFalse, evidence.clone());
                }
                if sp.is_purely_non_gaussian() {
                    out.push(Property::NC, Verdict::WitnessedFalse, evidence.clone());
                }
                out.push(Property::AC, Verdict::WitnessedFalse, evidence.clone());
                out.push(Property::H2Z, Verdict::WitnessedFalse, evidence);
            }
            None => {
                let psi = match s.functional.as_ref().filter(|f| f.generator_values().is_some()) {
                    Some(f) => f.clone(),
                    None => solved.psi().expect("feasible").clone(),
                };
                if let LkOutcome::NoLk {
                    gaussian, remainder, ..
                } = attempt_lk(&c, &psi)?
                {
                    let part = |r: &crate::functional::SolveReport| {
                        r.certificate().map(|cert| (r.residuals.clone(), cert.clone()))
                    };
                    out.push(
                        Property::LK,
                        Verdict::WitnessedFalse,
                        Evidence::NoLk {
                            scenario: label.to_string(),
                            gaussian: part(&gaussian),
                            remainder: part(&remainder),
                        },
                    );
                }
            }
        }
    }

    for entry in kernel_mu_entries(s, &c)? {
        if let (Some(true), Some(k)) = (entry.mu_zero, &entry.k) {
            if !k.is_zero() {
                out.push(
                    Property::H2Z,
                    Verdict::WitnessedFalse,
                    Evidence::KernelMu {
                        scenario: label.to_string(),
                        cycle: entry.name.clone(),
                        value: k.clone(),
                    },
                );
            }
        }
    }

    if p.kind() == Kind::StarAlgebra && definite {
        let rep = c.representation();
        let basis = cocycle_space(rep)?;
        let generators = (0..p.num_generators())
            .filter(|&g| {
                rep.generator_image(g).is_zero()
                    && basis.iter().all(|b| {
                        b.values[g].is_zero() && b.starred.get(&g).is_none_or(|v| v.is_zero())
                    })
            })
            .map(|g| p.generators()[g].clone())
            .collect();
        out.facts.push(Fact::ForcedVanishing {
            scenario: label.to_string(),
            generators,
            cocycle_space_dim: basis.len(),
        });
    }
    Ok(out)
}

/// `X ⇒ Y` edges of the implication diagram.
pub const IMPLICATIONS: [(Property, Property); 5] = [
    (Property::H2Z, Property::AC),
    (Property::AC, Property::NC),
    (Property::AC, Property::GC),
    (Property::NC, Property::LK),
    (Property::GC, Property::LK),
];

/// A non-implication `X ⇏ Y` and the algebra expected to realise it. For
/// `LK ⇏ GC ∨ NC` both right-hand properties must fail.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Separation {
    pub holds: Property,
    pub fails: Vec<Property>,
    pub algebra: String,
}

pub fn separations() -> Vec<Separation> {
    let sep = |holds, fails: &[Property], algebra: &str| Separation {
        holds,
        fails: fails.to_vec(),
        algebra: algebra.to_string(),
    };
    vec![
        sep(Property::AC, &[Property::H2Z], "ac_not_h2z"),
        sep(Property::NC, &[Property::AC], "z2"),
        sep(Property::GC, &[Property::AC], "p2"),
        sep(Property::GC, &[Property::NC], "p2"),
        sep(Property::NC, &[Property::GC], "z2"),
        sep(Property::LK, &[Property::GC, Property::NC], "p2_free_z2"),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationResult {
    #[serde(flatten)]
    pub separation: Separation,
    pub realised: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagramCheck {
    /// Contradictions: an implication with a true antecedent and a false
    /// consequent, or a property both true and false.
    pub violations: Vec<String>,
    pub separations: Vec<SeparationResult>,
}

impl DiagramCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.separations.iter().all(|s| s.realised)
    }
}

/// Check every algebra's classification against the diagram and the table
/// of separating examples.
pub fn diagram_check(algebras: &BTreeMap<String, Classification>) -> DiagramCheck {
    let mut check = DiagramCheck::default();
    for (name, cl) in algebras {
        for prop in Property::ALL {
            let vs: Vec<Verdict> = cl.properties.iter().filter(|r| r.property == prop).map(|r| r.verdict).collect();
            if vs.iter().any(|v| v.is_true()) && vs.iter().any(|v| v.is_false()) {
                check.violations.push(format!("{name}: {prop} is both true and false"));
            }
        }
        let v = cl.verdicts();
        let is = |p: Property, f: fn(Verdict) -> bool| v.get(&p).copied().is_some_and(f);
        for (x, y) in IMPLICATIONS {
            if is(x, Verdict::is_true) && is(y, Verdict::is_false) {
                check.violations.push(format!("{name}: {x} holds but {y} fails, yet {x} implies {y}"));
            }
        }
    }
    for s in separations() {
        let realised = algebras.get(&s.algebra).is_some_and(|cl| {
            let v = cl.verdicts();
            v.get(&s.holds).is_some_and(|x| x.is_true())
                && s.fails.iter().all(|p| v.get(p).is_some_and(|x| x.is_false()))
        });
        check.separations.push(SeparationResult { separation: s, realised });
    }
    check
}
