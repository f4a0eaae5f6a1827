//! Scenario files: JSON documents describing a presentation, a form, a
//! representation, a cocycle, an optional functional and run options.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cocycle::Cocycle;
use crate::error::{Error, Result};
use crate::functional::FunctionalData;
use crate::linalg::{HermitianForm, Matrix, Vector};
use crate::presentation::{AlgebraElement, Kind, Letter, Presentation, Rule, Tensor2, Word};
use crate::representation::Representation;
use crate::scalar::Scalar;
use crate::wordproblem::{NormalForm, NormalFormSpec};

pub const DEFAULT_MAX_WORD_LENGTH: usize = 4;
pub const STEP_BUDGET_VAR: &str = "NLK_STEP_BUDGET";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub presentation: PresentationFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<FormFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<BTreeMap<String, Matrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<BTreeMap<String, Vector>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functional: Option<FunctionalFile>,
    #[serde(default, skip_serializing_if = "OptionsFile::is_default")]
    pub options: OptionsFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub kind: Kind,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relators: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub involution: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub character: Option<BTreeMap<String, Scalar>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rules: Vec<RuleFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleFile {
    pub lhs: Vec<String>,
    pub rhs: TermFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub coeff: Scalar,
    pub word: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormFile {
    pub gram: Matrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<BTreeMap<String, Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<TableEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub word: Vec<String>,
    pub value: Scalar,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_word_length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<NormalFormSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ker_mu_cycles: Vec<CycleFile>,
}

impl OptionsFile {
    fn is_default(&self) -> bool {
        *self == OptionsFile::default()
    }
}

/// `Σ coeff · (Σ left) ⊗ (Σ right)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleFile {
    pub name: String,
    pub terms: Vec<CycleTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleTerm {
    pub coeff: Scalar,
    pub left: Vec<TermFile>,
    pub right: Vec<TermFile>,
}

/// A schema-valid scenario. Relations are not checked here; see
/// [`Scenario::representation`] and [`Scenario::cocycle`].
#[derive(Clone, Debug)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub presentation: Arc<Presentation>,
    pub form: HermitianForm,
    pub images: Vec<Matrix>,
    pub values: Vec<Vector>,
    pub starred: BTreeMap<usize, Vector>,
    pub functional: Option<FunctionalData>,
    pub normal_form_spec: Option<NormalFormSpec>,
    pub cycles: Vec<(String, Tensor2)>,
    pub max_word_length: usize,
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn ptr(parts: &[&str]) -> String {
    parts.iter().map(|p| format!("/{}", escape(p))).collect()
}

fn schema_from(e: Error, pointer: String) -> Error {
    match e {
        Error::Schema { .. } | Error::Parse { .. } => e,
        other => Error::schema(pointer, other.to_string()),
    }
}

/// Parse a scenario document, reporting syntax errors with line and column
/// and shape errors with a JSON pointer.
pub fn parse_scenario_file(text: &str) -> Result<ScenarioFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let parsed: std::result::Result<ScenarioFile, _> = serde_path_to_error::deserialize(de);
    parsed.map_err(|e| {
        let inner = e.inner();
        match inner.classify() {
            serde_json::error::Category::Syntax | serde_json::error::Category::Eof => Error::Parse {
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            },
            _ => Error::schema(path_pointer(e.path()), inner.to_string()),
        }
    })
}

fn path_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", escape(key))),
            Segment::Enum { variant } => out.push_str(&format!("/{}", escape(variant))),
            Segment::Unknown => {}
        }
    }
    out
}

fn step_budget() -> Result<Option<usize>> {
    match std::env::var(STEP_BUDGET_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Invalid(format!("{STEP_BUDGET_VAR} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn build_presentation(pf: &PresentationFile) -> Result<Presentation> {
    let gens = pf.generators.clone();
    let p = match pf.kind {
        Kind::Group => {
            if pf.involution.is_some() || pf.character.is_some() || !pf.rules.is_empty() {
                return Err(Error::schema(
                    "/presentation",
                    "group presentations take only generators and relators",
                ));
            }
            let bare = Presentation::group_from_words(gens.clone(), Vec::new())
                .map_err(|e| schema_from(e, "/presentation/generators".into()))?;
            let mut words = Vec::new();
            for (i, r) in pf.relators.iter().enumerate() {
                let mut w = Vec::new();
                for (j, t) in r.iter().enumerate() {
                    let l = bare.parse_letter(t).map_err(|e| {
                        schema_from(e, ptr(&["presentation", "relators", &i.to_string(), &j.to_string()]))
                    })?;
                    w.push(l);
                }
                words.push(Word(w));
            }
            Presentation::group_from_words(gens, words)
                .map_err(|e| schema_from(e, "/presentation/relators".into()))?
        }
        Kind::StarAlgebra => {
            if !pf.relators.is_empty() {
                return Err(Error::schema(
                    "/presentation/relators",
                    "star algebras are presented by rules",
                ));
            }
            let inv = pf
                .involution
                .as_ref()
                .ok_or_else(|| Error::schema("/presentation", "missing `involution`"))?;
            let chi = pf
                .character
                .as_ref()
                .ok_or_else(|| Error::schema("/presentation", "missing `character`"))?;
            for key in inv.keys().chain(chi.keys()) {
                if !gens.contains(key) {
                    return Err(Error::schema(
                        ptr(&["presentation", "involution"]),
                        format!("unknown generator `{key}`"),
                    ));
                }
            }
            let idx = |name: &str| gens.iter().position(|g| g == name);
            let mut involution = Vec::new();
            let mut character = Vec::new();
            for g in &gens {
                let at = ptr(&["presentation", "involution", g]);
                let img = inv
                    .get(g)
                    .ok_or_else(|| Error::schema(ptr(&["presentation", "involution"]), format!("missing `{g}`")))?;
                let letter = match img.strip_suffix('*') {
                    Some(h) if h == g => Letter::new(idx(g).expect("declared"), true),
                    Some(_) => return Err(Error::schema(at, format!("`{img}` is not `{g}*` or a generator"))),
                    None => Letter::new(
                        idx(img).ok_or_else(|| Error::schema(at, format!("unknown generator `{img}`")))?,
                        false,
                    ),
                };
                involution.push(letter);
                character.push(
                    chi.get(g)
                        .cloned()
                        .ok_or_else(|| Error::schema(ptr(&["presentation", "character"]), format!("missing `{g}`")))?,
                );
            }
            let scratch = Presentation::star_algebra(gens.clone(), involution.clone(), character.clone(), Vec::new())
                .map_err(|e| schema_from(e, "/presentation".into()))?;
            let mut rules = Vec::new();
            for (i, r) in pf.rules.iter().enumerate() {
                let lhs = scratch
                    .parse_word(&r.lhs)
                    .map_err(|e| schema_from(e, ptr(&["presentation", "rules", &i.to_string(), "lhs"])))?;
                let rhs = scratch
                    .parse_word(&r.rhs.word)
                    .map_err(|e| schema_from(e, ptr(&["presentation", "rules", &i.to_string(), "rhs", "word"])))?;
                rules.push(Rule {
                    lhs,
                    coeff: r.rhs.coeff.clone(),
                    rhs,
                });
            }
            Presentation::star_algebra(gens, involution, character, rules)
                .map_err(|e| schema_from(e, "/presentation/rules".into()))?
        }
    };
    Ok(match step_budget()? {
        Some(b) => p.with_step_budget(b),
        None => p,
    })
}

fn build_element(p: &Presentation, terms: &[TermFile], at: &[&str]) -> Result<AlgebraElement> {
    let mut e = AlgebraElement::zero();
    for (i, t) in terms.iter().enumerate() {
        let idx = i.to_string();
        let mut path = at.to_vec();
        path.extend([idx.as_str(), "word"]);
        let w = p.parse_word(&t.word).map_err(|err| schema_from(err, ptr(&path)))?;
        e = e.add(&p.element(t.coeff.clone(), &w)?);
    }
    Ok(e)
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        Scenario::from_file(parse_scenario_file(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Scenario::from_json(&text)
    }

    pub fn from_file(file: ScenarioFile) -> Result<Self> {
        let p = Arc::new(build_presentation(&file.presentation)?);
        let gens = p.generators().to_vec();

        let dim = if let Some(f) = &file.form {
            f.gram.rows()
        } else if let Some(m) = file.representation.as_ref().and_then(|r| r.values().next()) {
            m.rows()
        } else if let Some(v) = file.cocycle.as_ref().and_then(|c| c.values().next()) {
            v.dim()
        } else {
            1
        };
        let form = match &file.form {
            Some(f) => HermitianForm::new(f.gram.clone()).map_err(|e| schema_from(e, "/form/gram".into()))?,
            None => HermitianForm::standard(dim),
        };

        let images = match &file.representation {
            None => (0..gens.len())
                .map(|g| Matrix::scalar(dim, p.generator_character(g)))
                .collect(),
            Some(map) => {
                for key in map.keys() {
                    if !gens.contains(key) {
                        return Err(Error::schema(ptr(&["representation", key]), "unknown generator"));
                    }
                }
                let mut out = Vec::new();
                for g in &gens {
                    let m = map
                        .get(g)
                        .ok_or_else(|| Error::schema("/representation", format!("missing `{g}`")))?;
                    if m.rows() != dim || m.cols() != dim {
                        return Err(Error::schema(
                            ptr(&["representation", g]),
                            format!("expected a {dim}x{dim} matrix, got {}x{}", m.rows(), m.cols()),
                        ));
                    }
                    out.push(m.clone());
                }
                out
            }
        };

        let mut values = vec![Vector::zeros(dim); gens.len()];
        let mut starred = BTreeMap::new();
        if let Some(map) = &file.cocycle {
            for (key, v) in map {
                let at = ptr(&["cocycle", key]);
                let l = p.parse_letter(key).map_err(|e| schema_from(e, at.clone()))?;
                let plain = !key.ends_with('*') && !key.ends_with("^-1");
                if !plain && !(p.kind() == Kind::StarAlgebra && l.inv) {
                    return Err(Error::schema(at, "values are given on generators (and on `g*` for star algebras)"));
                }
                if v.dim() != dim {
                    return Err(Error::schema(at, format!("expected a vector of length {dim}, got {}", v.dim())));
                }
                if l.inv {
                    starred.insert(l.gen as usize, v.clone());
                } else {
                    values[l.gen as usize] = v.clone();
                }
            }
        }

        let functional = match &file.functional {
            None => None,
            Some(ff) => Some(match (&ff.generators, &ff.table) {
                (Some(map), None) => {
                    if p.kind() != Kind::Group {
                        return Err(Error::schema("/functional/generators", "star algebras take a `table`"));
                    }
                    let mut vals = Vec::new();
                    for key in map.keys() {
                        if !gens.contains(key) {
                            return Err(Error::schema(ptr(&["functional", "generators", key]), "unknown generator"));
                        }
                    }
                    for g in &gens {
                        vals.push(map.get(g).cloned().ok_or_else(|| {
                            Error::schema("/functional/generators", format!("missing `{g}`"))
                        })?);
                    }
                    FunctionalData::group(p.clone(), vals)?
                }
                (None, Some(entries)) => {
                    if p.kind() != Kind::StarAlgebra {
                        return Err(Error::schema("/functional/table", "groups take `generators`"));
                    }
                    let mut table = BTreeMap::new();
                    for (i, e) in entries.iter().enumerate() {
                        let at = ptr(&["functional", "table", &i.to_string(), "word"]);
                        let w = p.parse_word(&e.word).map_err(|err| schema_from(err, at.clone()))?;
                        if table.insert(w, e.value.clone()).is_some() {
                            return Err(Error::schema(at, "duplicate table entry"));
                        }
                    }
                    FunctionalData::table(p.clone(), table).map_err(|e| schema_from(e, "/functional/table".into()))?
                }
                _ => {
                    return Err(Error::schema(
                        "/functional",
                        "exactly one of `generators` or `table` is required",
                    ))
                }
            }),
        };

        let mut cycles = Vec::new();
        for (i, cf) in file.options.ker_mu_cycles.iter().enumerate() {
            let idx = i.to_string();
            let mut t = Tensor2::zero();
            for (j, term) in cf.terms.iter().enumerate() {
                let jdx = j.to_string();
                let base = ["options", "ker_mu_cycles", idx.as_str(), "terms", jdx.as_str()];
                let mut lp = base.to_vec();
                lp.push("left");
                let mut rp = base.to_vec();
                rp.push("right");
                let left = build_element(&p, &term.left, &lp)?;
                let right = build_element(&p, &term.right, &rp)?;
                let piece = Tensor2::from_pairs([(term.coeff.clone(), &left, &right)]);
                for (u, v, c) in piece.terms() {
                    t.add_term(c.clone(), u.clone(), v.clone());
                }
            }
            cycles.push((cf.name.clone(), t));
        }

        if let Some(spec) = &file.options.normal_form {
            NormalForm::new(spec, &p).map_err(|e| schema_from(e, "/options/normal_form".into()))?;
        }

        Ok(Scenario {
            max_word_length: file.options.max_word_length.unwrap_or(DEFAULT_MAX_WORD_LENGTH),
            normal_form_spec: file.options.normal_form.clone(),
            file,
            presentation: p,
            form,
            images,
            values,
            starred,
            functional,
            cycles,
        })
    }

    pub fn name(&self) -> &str {
        self.file.name.as_deref().unwrap_or("scenario")
    }

    pub fn representation(&self) -> Result<Arc<Representation>> {
        Ok(Arc::new(Representation::new(
            self.presentation.clone(),
            self.form.clone(),
            self.images.clone(),
        )?))
    }

    pub fn cocycle(&self) -> Result<Cocycle> {
        Cocycle::new(self.representation()?, self.values.clone(), self.starred.clone())
    }

    /// The extension of the given values, even when they violate relators.
    pub fn unchecked_cocycle(&self) -> Result<Cocycle> {
        let rep = Representation::new_unchecked(self.presentation.clone(), self.form.clone(), self.images.clone())?;
        Cocycle::new_unchecked(Arc::new(rep), self.values.clone(), self.starred.clone())
    }

    pub fn normal_form(&self) -> Result<NormalForm> {
        let spec = self.normal_form_spec.as_ref().ok_or(Error::NoNormalForm)?;
        NormalForm::new(spec, &self.presentation)
    }
}

/// Serialize a word as letter tokens.
pub fn word_tokens(p: &Presentation, w: &Word) -> Vec<String> {
    p.word_tokens(w)
}

/// Serialize an element as `[{coeff, word}]`, terms in shortlex order.
pub fn element_terms(p: &Presentation, e: &AlgebraElement) -> Vec<TermFile> {
    e.terms()
        .map(|(w, c)| TermFile {
            coeff: c.clone(),
            word: p.word_tokens(w),
        })
        .collect()
}

/// Build a [`CycleFile`] from a tensor.
pub fn cycle_file(p: &Presentation, name: &str, t: &Tensor2) -> CycleFile {
    CycleFile {
        name: name.to_string(),
        terms: t
            .terms()
            .map(|(u, v, c)| CycleTerm {
                coeff: c.clone(),
                left: vec![TermFile {
                    coeff: Scalar::one(),
                    word: p.word_tokens(u),
                }],
                right: vec![TermFile {
                    coeff: Scalar::one(),
                    word: p.word_tokens(v),
                }],
            })
            .collect(),
    }
}
