//! Generating functionals: relator folding, the existence solver for group
//! presentations, Schürmann-triple verification, Gaussianity, a truncated
//! GNS construction and a brute-force well-definedness oracle.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cocycle::{big_l, Cochain2, Cocycle};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::linalg::{psd_check, Matrix, PsdVerdict, Solution, Vector};
use crate::presentation::{AlgebraElement, Kind, Presentation, Word};
use crate::scalar::{Rational, Scalar};
use crate::wordproblem::{GroupKey, NormalForm};

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionalValues {
    /// `ψ(g)` per generator; the rest follows by folding.
    Generators(Vec<Scalar>),
    /// `ψ` on reduced monomials; missing monomials are zero.
    Table(BTreeMap<Word, Scalar>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalData {
    presentation: Arc<Presentation>,
    values: FunctionalValues,
}

impl FunctionalData {
    pub fn group(p: Arc<Presentation>, values: Vec<Scalar>) -> Result<Self> {
        p.require_group()?;
        if values.len() != p.num_generators() {
            return Err(Error::dims(format!(
                "{} functional values for {} generators",
                values.len(),
                p.num_generators()
            )));
        }
        Ok(FunctionalData {
            presentation: p,
            values: FunctionalValues::Generators(values),
        })
    }

    /// Table keys must already be in normal form.
    pub fn table(p: Arc<Presentation>, table: BTreeMap<Word, Scalar>) -> Result<Self> {
        if p.kind() != Kind::StarAlgebra {
            return Err(Error::Invalid(
                "monomial tables are only used for star algebras".into(),
            ));
        }
        for w in table.keys() {
            if p.reduce(w)? != Some((Scalar::one(), w.clone())) {
                return Err(Error::Invalid(format!(
                    "table key `{}` is not a normal form",
                    p.fmt_word(w)
                )));
            }
        }
        Ok(FunctionalData {
            presentation: p,
            values: FunctionalValues::Table(table),
        })
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn values(&self) -> &FunctionalValues {
        &self.values
    }

    pub fn generator_values(&self) -> Option<&[Scalar]> {
        match &self.values {
            FunctionalValues::Generators(v) => Some(v),
            FunctionalValues::Table(_) => None,
        }
    }

    /// `ψ(w)`. Group functionals fold along `w` with `c` supplying the cross
    /// terms; tables reduce `w` and look it up.
    pub fn eval(&self, c: &Cocycle, w: &Word) -> Result<Scalar> {
        match &self.values {
            FunctionalValues::Generators(v) => Ok(psi_fold_values(v, c, w)),
            FunctionalValues::Table(t) => Ok(match self.presentation.reduce(w)? {
                Some((k, r)) => t.get(&r).map(|x| &k * x).unwrap_or_default(),
                None => Scalar::zero(),
            }),
        }
    }

    pub fn eval_element(&self, c: &Cocycle, e: &AlgebraElement) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (w, x) in e.terms() {
            acc += &(x * &self.eval(c, w)?);
        }
        Ok(acc)
    }

    /// `ψ + d` for generator values `d`.
    pub fn shifted(&self, d: &[Scalar]) -> Result<FunctionalData> {
        let v = self
            .generator_values()
            .ok_or(Error::NotAGroup)?
            .iter()
            .zip(d)
            .map(|(a, b)| a + b)
            .collect();
        FunctionalData::group(self.presentation.clone(), v)
    }
}

/// `ψ(ug) = ψ(u) + ψ(g) + ⟨η(u⁻¹), η(g)⟩`, folded left to right, with
/// `ψ(g⁻¹) = conj ψ(g)`.
pub fn psi_fold(f: &FunctionalData, c: &Cocycle, w: &Word) -> Result<Scalar> {
    let v = f.generator_values().ok_or(Error::NotAGroup)?;
    Ok(psi_fold_values(v, c, w))
}

pub(crate) fn psi_fold_values(gen_psi: &[Scalar], c: &Cocycle, w: &Word) -> Scalar {
    let rep = c.representation();
    let mut psi = Scalar::zero();
    // η(u⁻¹) for the prefix u read so far.
    let mut eta_inv = Vector::zeros(c.dim());
    for &l in w.letters() {
        let g = &gen_psi[l.gen as usize];
        let psi_l = if l.inv { g.conj() } else { g.clone() };
        psi = &(&psi + &psi_l) + &c.inner(&eta_inv, c.letter_value(l));
        // (u l)⁻¹ = l⁻¹ u⁻¹
        let li = l.flipped();
        eta_inv = &rep.letter_image(li).mul_vec(&eta_inv) + c.letter_value(li);
    }
    psi
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelatorResidual {
    pub relator: Vec<String>,
    /// Fold of `r` with `ψ(g) = Re ψ(g)`.
    #[serde(rename = "K_r")]
    pub k: Scalar,
    pub re_violation: bool,
    pub exponent_sums: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `Re K_r ≠ 0`: no choice of imaginary parts can help.
    RealPart { relator: usize },
    /// `yᵀN = 0` and `yᵀb ≠ 0` for `N t = b`, `b = −Im K`.
    Farkas { multipliers: Vector },
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome {
    Feasible {
        psi: FunctionalData,
        /// Directions `t` with `N t = 0`: imaginary derivation shifts.
        ambiguity: Vec<Vector>,
    },
    Infeasible { certificate: Certificate },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    /// `Re ψ(g) = −½⟨η(g), η(g)⟩`.
    pub real_parts: Vec<Rational>,
    pub residuals: Vec<RelatorResidual>,
    pub outcome: SolveOutcome,
}

impl SolveReport {
    pub fn is_feasible(&self) -> bool {
        matches!(self.outcome, SolveOutcome::Feasible { .. })
    }

    pub fn psi(&self) -> Option<&FunctionalData> {
        match &self.outcome {
            SolveOutcome::Feasible { psi, .. } => Some(psi),
            SolveOutcome::Infeasible { .. } => None,
        }
    }

    pub fn ambiguity_dim(&self) -> usize {
        match &self.outcome {
            SolveOutcome::Feasible { ambiguity, .. } => ambiguity.len(),
            SolveOutcome::Infeasible { .. } => 0,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match &self.outcome {
            SolveOutcome::Infeasible { certificate } => Some(certificate),
            SolveOutcome::Feasible { .. } => None,
        }
    }
}

/// Check an infeasibility certificate against the stored residuals alone.
pub fn check_certificate(residuals: &[RelatorResidual], cert: &Certificate) -> bool {
    match cert {
        Certificate::RealPart { relator } => residuals
            .get(*relator)
            .is_some_and(|r| !r.k.re().is_zero()),
        Certificate::Farkas { multipliers } => {
            if multipliers.dim() != residuals.len() {
                return false;
            }
            let gens = residuals.first().map_or(0, |r| r.exponent_sums.len());
            let annihilates = (0..gens).all(|g| {
                residuals
                    .iter()
                    .zip(multipliers.iter())
                    .map(|(r, y)| y * &Scalar::from_int(r.exponent_sums[g]))
                    .sum::<Scalar>()
                    .is_zero()
            });
            let separates = !residuals
                .iter()
                .zip(multipliers.iter())
                .map(|(r, y)| y * &-r.k.imag_part())
                .sum::<Scalar>()
                .is_zero();
            annihilates && separates
        }
    }
}

/// Decide whether `c` admits a generating functional, by folding each
/// relator and solving for the imaginary parts on generators.
pub fn solve_generating_functional(c: &Cocycle) -> Result<SolveReport> {
    let p = c.presentation().clone();
    p.require_group()?;
    c.representation().form().require_definite()?;

    let half = Rational::new(1.into(), 2.into());
    let real_parts: Vec<Rational> = c
        .generator_values()
        .iter()
        .map(|v| -(c.inner(v, v).re() * &half))
        .collect();
    let base: Vec<Scalar> = real_parts.iter().cloned().map(Scalar::from_real).collect();

    let residuals: Vec<RelatorResidual> = p
        .relators()
        .iter()
        .map(|r| {
            let k = psi_fold_values(&base, c, r);
            RelatorResidual {
                relator: p.word_tokens(r),
                re_violation: !k.re().is_zero(),
                k,
                exponent_sums: p.exponent_sums(r),
            }
        })
        .collect();

    let outcome = if let Some(i) = residuals.iter().position(|r| r.re_violation) {
        SolveOutcome::Infeasible {
            certificate: Certificate::RealPart { relator: i },
        }
    } else {
        let n = p.exponent_matrix();
        let b = Vector(residuals.iter().map(|r| -r.k.imag_part()).collect());
        match n.solve(&b)? {
            Solution::Feasible { particular, kernel } => {
                let values = base
                    .iter()
                    .zip(particular.iter())
                    .map(|(re, t)| re + &(t * &Scalar::i()))
                    .collect();
                SolveOutcome::Feasible {
                    psi: FunctionalData::group(p.clone(), values)?,
                    ambiguity: kernel,
                }
            }
            Solution::Infeasible { certificate } => SolveOutcome::Infeasible {
                certificate: Certificate::Farkas {
                    multipliers: certificate,
                },
            },
        }
    };
    Ok(SolveReport {
        real_parts,
        residuals,
        outcome,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    Unit,
    Relator,
    Coboundary,
    Hermitian,
    Positivity,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyFailure {
    pub identity: Identity,
    pub witnesses: Vec<Word>,
    pub residual: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub max_len: usize,
    pub pairs_checked: usize,
    pub failure: Option<VerifyFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn verify_schurmann_triple(
    c: &Cocycle,
    f: &FunctionalData,
    max_len: usize,
) -> Result<VerifyReport> {
    verify_schurmann_triple_with(c, f, max_len, Execution::default())
}

/// Check ψ(1) = 0, relators, the coboundary relation on all word pairs with
/// `|a| + |b| ≤ max_len`, hermitianity, and `ψ(a*a) = ⟨η(a), η(a)⟩` on
/// `a = w − ε(w)`.
pub fn verify_schurmann_triple_with(
    c: &Cocycle,
    f: &FunctionalData,
    max_len: usize,
    exec: Execution,
) -> Result<VerifyReport> {
    let p = c.presentation().clone();
    let fail = |identity, witnesses, residual| {
        Ok(VerifyReport {
            max_len,
            pairs_checked: 0,
            failure: Some(VerifyFailure {
                identity,
                witnesses,
                residual,
            }),
        })
    };

    let unit = f.eval(c, &Word::empty())?;
    if !unit.is_zero() {
        return fail(Identity::Unit, vec![Word::empty()], unit);
    }
    if p.is_group() {
        for r in p.relators() {
            let v = f.eval(c, r)?;
            if !v.is_zero() {
                return fail(Identity::Relator, vec![r.clone()], v);
            }
        }
    }

    let words = p.enumerate_words(max_len)?;
    let l = big_l(c);
    let by_len = |n: usize| words.iter().filter(move |w| w.len() <= n);

    let pair_failure = exec.find_first(&words, |a| -> Option<Result<VerifyFailure>> {
        let run = || -> Result<Option<VerifyFailure>> {
            let ea = p.character_word(a);
            let psi_a = f.eval(c, a)?;
            for b in by_len(max_len - a.len()) {
                let eb = p.character_word(b);
                let ab = p.word_element(&a.concat(b))?;
                let lhs = &(&(&ea * &f.eval(c, b)?) - &f.eval_element(c, &ab)?) + &(&psi_a * &eb);
                let residual = &lhs + &l.eval_words(a, b)?;
                if !residual.is_zero() {
                    return Ok(Some(VerifyFailure {
                        identity: Identity::Coboundary,
                        witnesses: vec![a.clone(), b.clone()],
                        residual,
                    }));
                }
            }
            Ok(None)
        };
        run().transpose()
    });
    if let Some(r) = pair_failure {
        let failure = r?;
        return Ok(VerifyReport {
            max_len,
            pairs_checked: 0,
            failure: Some(failure),
        });
    }
    let pairs_checked = words.iter().map(|a| by_len(max_len - a.len()).count()).sum();

    for a in &words {
        let star = p.involve(&p.word_element(a)?)?;
        let residual = &f.eval_element(c, &star)? - &f.eval(c, a)?.conj();
        if !residual.is_zero() {
            return fail(Identity::Hermitian, vec![a.clone()], residual);
        }
    }

    let definite = c.representation().is_definite();
    for w in by_len(max_len / 2).filter(|w| !w.is_empty()) {
        let a = p.augmentation(w)?;
        let psi = f.eval_element(c, &p.multiply(&p.involve(&a)?, &a)?)?;
        let eta = c.eval_element(&a);
        let norm = c.inner(&eta, &eta);
        let residual = &psi - &norm;
        if !residual.is_zero() || (definite && psi.real_sign() == Some(-1)) {
            return fail(Identity::Positivity, vec![w.clone()], residual);
        }
    }

    Ok(VerifyReport {
        max_len,
        pairs_checked,
        failure: None,
    })
}

/// `ψ` vanishes on the truncated spanning set of `K₃`.
pub fn is_gaussian_functional(f: &FunctionalData, c: &Cocycle, max_len: usize) -> Result<bool> {
    for k in c.presentation().kn_spanning_set(3, max_len)? {
        if !f.eval_element(c, &k)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GnsReport {
    pub words: Vec<Word>,
    /// `ψ((u − ε(u))*(v − ε(v)))`.
    pub gram: Matrix,
    pub rank: usize,
    pub verdict: PsdVerdict,
    /// Indices of `words` spanning the quotient by the radical.
    pub pivots: Vec<usize>,
    /// `η(u)` as coordinates against `pivots`, in the form `coordinate_form`.
    pub coordinates: Vec<Vector>,
    pub coordinate_form: Matrix,
}

/// Pre-Hilbert space from ψ on `{w − ε(w) : 1 ≤ |w| ≤ max_len}`.
pub fn gns_truncated(f: &FunctionalData, c: &Cocycle, max_len: usize) -> Result<GnsReport> {
    let p = c.presentation().clone();
    let words: Vec<Word> = p
        .enumerate_words(max_len)?
        .into_iter()
        .filter(|w| !w.is_empty())
        .collect();
    let elems: Vec<AlgebraElement> = words
        .iter()
        .map(|w| p.augmentation(w))
        .collect::<Result<_>>()?;
    let stars: Vec<AlgebraElement> = elems.iter().map(|e| p.involve(e)).collect::<Result<_>>()?;
    let n = words.len();
    let mut gram = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            gram[(i, j)] = f.eval_element(c, &p.multiply(&stars[i], &elems[j])?)?;
        }
    }
    let verdict = psd_check(&gram)?;
    let (_, pivots) = gram.rref();
    let rank = pivots.len();
    let mut block = Matrix::zeros(rank, rank);
    for (a, &i) in pivots.iter().enumerate() {
        for (b, &j) in pivots.iter().enumerate() {
            block[(a, b)] = gram[(i, j)].clone();
        }
    }
    let coordinate_form = block.inverse()?;
    let coordinates = (0..n)
        .map(|j| Vector(pivots.iter().map(|&i| gram[(i, j)].clone()).collect()))
        .collect();
    Ok(GnsReport {
        words,
        gram,
        rank,
        verdict,
        pivots,
        coordinates,
        coordinate_form,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Disagreement {
    Psi,
    Eta,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleCounterexample {
    pub kind: Disagreement,
    pub left: Word,
    pub right: Word,
    pub left_psi: Scalar,
    pub right_psi: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub max_len: usize,
    pub words: usize,
    pub pairs_checked: usize,
    pub counterexample: Option<OracleCounterexample>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

pub fn brute_force_welldefinedness_oracle(
    c: &Cocycle,
    f: &FunctionalData,
    nf: &NormalForm,
    max_len: usize,
) -> Result<OracleReport> {
    brute_force_welldefinedness_oracle_with(c, f, nf, max_len, Execution::default())
}

/// Every pair of freely reduced words of length `≤ max_len` that are equal
/// in the group must get the same `η` and `ψ`. Each word is compared with
/// the shortlex-first word of its class.
pub fn brute_force_welldefinedness_oracle_with(
    c: &Cocycle,
    f: &FunctionalData,
    nf: &NormalForm,
    max_len: usize,
    exec: Execution,
) -> Result<OracleReport> {
    let p = c.presentation().clone();
    p.require_group()?;
    let gen_psi = f.generator_values().ok_or(Error::NotAGroup)?;
    let words = p.enumerate_words(max_len)?;
    let k = p.num_generators();
    if nf.key(&Word::empty(), k).is_none() {
        return Err(Error::NoNormalForm);
    }
    let evaluated: Vec<(GroupKey, Vector, Scalar)> = exec.map(&words, |w| {
        (
            nf.key(w, k).expect("keyed normal form"),
            c.eval(w),
            psi_fold_values(gen_psi, c, w),
        )
    });
    let mut first: BTreeMap<&GroupKey, usize> = BTreeMap::new();
    let mut pairs_checked = 0;
    for (i, (key, eta, psi)) in evaluated.iter().enumerate() {
        let Some(&j) = first.get(key) else {
            first.insert(key, i);
            continue;
        };
        pairs_checked += 1;
        let (_, eta0, psi0) = &evaluated[j];
        let kind = if eta != eta0 {
            Some(Disagreement::Eta)
        } else if psi != psi0 {
            Some(Disagreement::Psi)
        } else {
            None
        };
        if let Some(kind) = kind {
            return Ok(OracleReport {
                max_len,
                words: words.len(),
                pairs_checked,
                counterexample: Some(OracleCounterexample {
                    kind,
                    left: words[j].clone(),
                    right: words[i].clone(),
                    left_psi: psi0.clone(),
                    right_psi: psi.clone(),
                }),
            });
        }
    }
    Ok(OracleReport {
        max_len,
        words: words.len(),
        pairs_checked,
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::HermitianForm;
    use crate::presentation::standard::*;
    use crate::representation::Representation;
    use crate::wordproblem::NormalFormSpec;

    fn s(x: i64) -> Scalar {
        Scalar::from_int(x)
    }

    fn v1(x: Scalar) -> Vector {
        Vector(vec![x])
    }

    fn gaussian(p: Presentation, vals: Vec<Scalar>) -> Cocycle {
        let rep = Arc::new(Representation::trivial(Arc::new(p), HermitianForm::standard(1)));
        Cocycle::new(rep, vals.into_iter().map(v1).collect(), BTreeMap::new()).unwrap()
    }

    #[test]
    fn fold_basics() {
        let c = gaussian(free_abelian(2), vec![s(1), Scalar::i()]);
        let p = c.presentation().clone();
        let f = FunctionalData::group(p.clone(), vec![Scalar::from_ratio(-1, 2), Scalar::gauss(0, 3)]).unwrap();
        assert!(psi_fold(&f, &c, &Word::empty()).unwrap().is_zero());
        // Re ψ(b) = 0 ≠ −½: ψ(b b⁻¹) picks up 2·Re ψ(b) + ⟨η(b),η(b)⟩ = 1.
        assert!(psi_fold(&f, &c, &p.word("a a^-1").unwrap()).unwrap().is_zero());
        assert_eq!(psi_fold(&f, &c, &p.word("b b^-1").unwrap()).unwrap(), s(1));
    }

    #[test]
    fn z2_solver() {
        let bad = solve_generating_functional(&gaussian(free_abelian(2), vec![s(1), Scalar::i()])).unwrap();
        assert!(!bad.is_feasible());
        assert_eq!(bad.residuals[0].k, Scalar::gauss(0, -2));
        assert!(check_certificate(&bad.residuals, bad.certificate().unwrap()));

        let good = solve_generating_functional(&gaussian(free_abelian(2), vec![s(1), s(1)])).unwrap();
        assert!(good.is_feasible());
        assert_eq!(good.ambiguity_dim(), 2);
    }

    #[test]
    fn solver_rejects_indefinite_and_star() {
        let p = Arc::new(free_abelian(1));
        let form = HermitianForm::new(Matrix::diag(&[s(1), s(-1)])).unwrap();
        let rep = Arc::new(Representation::trivial(p, form));
        assert_eq!(
            solve_generating_functional(&Cocycle::zero(rep)).unwrap_err(),
            Error::IndefiniteForm
        );
    }

    #[test]
    fn zero_cocycle_has_full_ambiguity() {
        let c = gaussian(surface_group(2), vec![s(0); 4]);
        let r = solve_generating_functional(&c).unwrap();
        assert!(r.is_feasible());
        assert_eq!(r.ambiguity_dim(), 4);
        assert!(r.psi().unwrap().generator_values().unwrap().iter().all(Scalar::is_zero));
    }

    #[test]
    fn verify_trivial_and_shifted() {
        let c = gaussian(free_abelian(2), vec![s(1), s(2)]);
        let r = solve_generating_functional(&c).unwrap();
        let psi = r.psi().unwrap();
        assert!(verify_schurmann_triple(&c, psi, 4).unwrap().passed());
        let shifted = psi.shifted(&[Scalar::gauss(0, 5), Scalar::gauss(0, -1)]).unwrap();
        assert!(verify_schurmann_triple(&c, &shifted, 4).unwrap().passed());
        // A real shift breaks ψ(g g⁻¹) = 0 and hence the coboundary relation.
        let broken = psi.shifted(&[s(1), s(0)]).unwrap();
        assert!(!verify_schurmann_triple(&c, &broken, 3).unwrap().passed());

        let zero = gaussian(free_abelian(2), vec![s(0), s(0)]);
        let f0 = FunctionalData::group(zero.presentation().clone(), vec![s(0), s(0)]).unwrap();
        assert!(verify_schurmann_triple(&zero, &f0, 4).unwrap().passed());
    }

    #[test]
    fn gaussianity() {
        let c = gaussian(free_abelian(2), vec![s(1), s(2)]);
        let psi = solve_generating_functional(&c).unwrap().psi().unwrap().clone();
        assert!(is_gaussian_functional(&psi, &c, 1).unwrap());
        let p = c.presentation().clone();
        let zero = FunctionalData::group(p, vec![s(0), s(0)]).unwrap();
        assert!(is_gaussian_functional(&zero, &Cocycle::zero(c.representation().clone()), 2).unwrap());
    }

    #[test]
    fn gns_z1() {
        let c = gaussian(free_abelian(1), vec![s(1)]);
        let f = FunctionalData::group(c.presentation().clone(), vec![Scalar::from_ratio(-1, 2)]).unwrap();
        let g = gns_truncated(&f, &c, 1).unwrap();
        assert_eq!(g.gram, Matrix::from_int_rows(&[&[1, -1], &[-1, 1]]));
        assert_eq!(g.rank, 1);
        assert!(g.verdict.is_psd());
        for i in 0..2 {
            for j in 0..2 {
                let x = &g.coordinates[i];
                let y = &g.coordinates[j];
                let ip = x.conj().dot(&g.coordinate_form.mul_vec(y));
                assert_eq!(ip, g.gram[(i, j)]);
            }
        }
        let zero = FunctionalData::group(c.presentation().clone(), vec![s(0)]).unwrap();
        let z = gns_truncated(&zero, &Cocycle::zero(c.representation().clone()), 2).unwrap();
        assert_eq!(z.rank, 0);
        assert!(z.gram.is_zero());
    }

    #[test]
    fn gns_detects_corruption() {
        let c = gaussian(free_abelian(1), vec![s(1)]);
        // ψ(g) = +½ flips the sign of the real part.
        let f = FunctionalData::group(c.presentation().clone(), vec![Scalar::from_ratio(1, 2)]).unwrap();
        let g = gns_truncated(&f, &c, 1).unwrap();
        assert!(matches!(g.verdict, PsdVerdict::NotPsd { .. }));
    }

    #[test]
    fn oracle_finds_commutator_violation() {
        let c = gaussian(free_abelian(2), vec![s(1), Scalar::i()]);
        let p = c.presentation().clone();
        let nf = NormalForm::new(&NormalFormSpec::Abelian, &p).unwrap();
        let f = FunctionalData::group(p.clone(), vec![Scalar::from_ratio(-1, 2), Scalar::from_ratio(-1, 2)]).unwrap();
        let r = brute_force_welldefinedness_oracle(&c, &f, &nf, 2).unwrap();
        let ce = r.counterexample.unwrap();
        assert_eq!(ce.kind, Disagreement::Psi);
        assert_eq!((ce.left, ce.right), (p.word("a b").unwrap(), p.word("b a").unwrap()));

        let good = gaussian(free_abelian(2), vec![s(1), s(3)]);
        let psi = solve_generating_functional(&good).unwrap().psi().unwrap().clone();
        assert!(brute_force_welldefinedness_oracle(&good, &psi, &nf, 4).unwrap().passed());
    }

    #[test]
    fn oracle_finds_invalid_cocycle() {
        let p = Arc::new(p2());
        let nf = NormalForm::new(
            &NormalFormSpec::P2 {
                a: "a".into(),
                b: "b".into(),
                r: "r".into(),
            },
            &p,
        )
        .unwrap();
        // Trivial π with η(r) ≠ 0 breaks r² = 1.
        let rep = Arc::new(Representation::trivial(p.clone(), HermitianForm::standard(1)));
        let c = Cocycle::new_unchecked(rep, vec![v1(s(0)), v1(s(0)), v1(s(1))], BTreeMap::new()).unwrap();
        let f = FunctionalData::group(p, vec![s(0), s(0), Scalar::from_ratio(-1, 2)]).unwrap();
        let r = brute_force_welldefinedness_oracle(&c, &f, &nf, 2).unwrap();
        assert_eq!(r.counterexample.unwrap().kind, Disagreement::Eta);
    }

    #[test]
    fn oracle_requires_keyed_normal_form() {
        let g = surface_group(2);
        let nf = NormalForm::new(&NormalFormSpec::Dehn, &g).unwrap();
        let c = gaussian(g.clone(), vec![s(0); 4]);
        let f = FunctionalData::group(c.presentation().clone(), vec![s(0); 4]).unwrap();
        assert_eq!(
            brute_force_welldefinedness_oracle(&c, &f, &nf, 2).unwrap_err(),
            Error::NoNormalForm
        );
    }
}
