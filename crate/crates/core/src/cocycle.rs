//! π-ε-cocycles, derivation spaces, the 2-cochain `L(η)` and its restriction
//! `K(η)`, and low-degree Hochschild checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::presentation::{AlgebraElement, Kind, Letter, Presentation, Tensor2, Word};
use crate::representation::{rule_name, Representation};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct Cocycle {
    rep: Arc<Representation>,
    /// Indexed by `Letter::slot`.
    values: Vec<Vector>,
}

impl Cocycle {
    /// Values on generators. For star algebras, `starred` supplies `η(g*)`
    /// for generators whose adjoint is a separate letter; missing entries
    /// are zero.
    pub fn new(
        rep: Arc<Representation>,
        values: Vec<Vector>,
        starred: BTreeMap<usize, Vector>,
    ) -> Result<Self> {
        let c = Cocycle::new_unchecked(rep, values, starred)?;
        if let Some((relator, residual)) = c.obstructions().into_iter().next() {
            return Err(Error::CocycleObstructed {
                relator,
                residual: residual.to_string(),
            });
        }
        Ok(c)
    }

    /// Build the extension without checking relators or rules.
    pub fn new_unchecked(
        rep: Arc<Representation>,
        values: Vec<Vector>,
        starred: BTreeMap<usize, Vector>,
    ) -> Result<Self> {
        let p = rep.presentation().clone();
        let n = rep.dim();
        if values.len() != p.num_generators() {
            return Err(Error::dims(format!(
                "{} cocycle values for {} generators",
                values.len(),
                p.num_generators()
            )));
        }
        for (g, v) in values.iter().chain(starred.values()).enumerate() {
            if v.dim() != n {
                return Err(Error::dims(format!(
                    "cocycle value {g} has dimension {}, expected {n}",
                    v.dim()
                )));
            }
        }
        let mut slots = Vec::with_capacity(2 * values.len());
        for (g, v) in values.iter().enumerate() {
            let second = match p.kind() {
                // η(g⁻¹) = −π(g)⁻¹η(g)
                Kind::Group => -&rep.letter_image(Letter::new(g, true)).mul_vec(v),
                Kind::StarAlgebra => {
                    let img = p.involution_image(g);
                    if img.inv {
                        starred.get(&g).cloned().unwrap_or_else(|| Vector::zeros(n))
                    } else {
                        Vector::zeros(n)
                    }
                }
            };
            slots.push(v.clone());
            slots.push(second);
        }
        if p.kind() == Kind::StarAlgebra {
            for g in 0..values.len() {
                let img = p.involution_image(g);
                if !img.inv {
                    slots[2 * g + 1] = values[img.gen as usize].clone();
                }
            }
        }
        Ok(Cocycle { rep, values: slots })
    }

    pub fn zero(rep: Arc<Representation>) -> Self {
        let n = rep.dim();
        let k = rep.presentation().num_generators();
        Cocycle::new(rep, vec![Vector::zeros(n); k], BTreeMap::new()).expect("zero cocycle")
    }

    pub fn representation(&self) -> &Arc<Representation> {
        &self.rep
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        self.rep.presentation()
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn generator_value(&self, g: usize) -> &Vector {
        &self.values[2 * g]
    }

    pub fn generator_values(&self) -> Vec<Vector> {
        (0..self.presentation().num_generators())
            .map(|g| self.values[2 * g].clone())
            .collect()
    }

    /// `η(g*)` for generators whose adjoint is a separate letter.
    pub fn starred_values(&self) -> BTreeMap<usize, Vector> {
        let p = self.presentation();
        (0..p.num_generators())
            .filter(|&g| p.kind() == Kind::StarAlgebra && p.involution_image(g).inv)
            .map(|g| (g, self.values[2 * g + 1].clone()))
            .collect()
    }

    pub fn letter_value(&self, l: Letter) -> &Vector {
        &self.values[self.presentation().canonical_letter(l).slot()]
    }

    /// `η(w)` via `η(l·u) = π(l)η(u) + η(l)ε(u)`, consuming letters from the
    /// right so only matrix-vector products are needed.
    pub fn eval(&self, w: &Word) -> Vector {
        let p = self.presentation();
        let mut eta = Vector::zeros(self.dim());
        let mut eps = Scalar::one();
        for &l in w.letters().iter().rev() {
            let head = self.rep.letter_image(l).mul_vec(&eta);
            eta = &head + &self.letter_value(l).scale(&eps);
            eps = &eps * &p.letter_character(l);
        }
        eta
    }

    pub fn eval_element(&self, e: &AlgebraElement) -> Vector {
        let mut acc = Vector::zeros(self.dim());
        for (w, c) in e.terms() {
            acc = &acc + &self.eval(w).scale(c);
        }
        acc
    }

    /// Relators with `η(r) ≠ 0`, or rules with `η(lhs) ≠ c·η(rhs)`.
    pub fn obstructions(&self) -> Vec<(String, Vector)> {
        let p = self.presentation();
        let mut out = Vec::new();
        match p.kind() {
            Kind::Group => {
                for r in p.relators() {
                    let v = self.eval(r);
                    if !v.is_zero() {
                        out.push((p.fmt_word(r), v));
                    }
                }
            }
            Kind::StarAlgebra => {
                for rule in p.rules() {
                    let v = &self.eval(&rule.lhs) - &self.eval(&rule.rhs).scale(&rule.coeff);
                    if !v.is_zero() {
                        out.push((rule_name(p, &rule.lhs, &rule.coeff, &rule.rhs), v));
                    }
                }
            }
        }
        out
    }

    /// All relator or rule residuals, concatenated, zeros included.
    fn residual_vector(&self) -> Vector {
        let p = self.presentation();
        let parts: Vec<Vector> = match p.kind() {
            Kind::Group => p.relators().iter().map(|r| self.eval(r)).collect(),
            Kind::StarAlgebra => p
                .rules()
                .iter()
                .map(|rule| &self.eval(&rule.lhs) - &self.eval(&rule.rhs).scale(&rule.coeff))
                .collect(),
        };
        Vector(parts.into_iter().flat_map(|v| v.0).collect())
    }

    /// `⟨η(a), η(b)⟩` in the representation form.
    pub fn inner(&self, a: &Vector, b: &Vector) -> Scalar {
        self.rep.form().inner_unchecked(a, b)
    }

    /// Conjugate by a form-unitary `u`: `π' = uπu⁻¹`, `η' = uη`.
    pub fn conjugated(&self, u: &Matrix) -> Result<Cocycle> {
        let rep = Arc::new(self.rep.conjugated(u)?);
        let values = self.generator_values().iter().map(|v| u.mul_vec(v)).collect();
        let starred = self
            .starred_values()
            .into_iter()
            .map(|(g, v)| (g, u.mul_vec(&v)))
            .collect();
        Cocycle::new(rep, values, starred)
    }
}

/// Basis of derivation assignments `g ↦ η(g) ∈ C^dim` with
/// `Σ_g n_g(r)·η(g) = 0` for every relator.
pub fn derivation_space(p: &Presentation, dim: usize) -> Result<Vec<Vec<Vector>>> {
    p.require_group()?;
    let kernel = p.exponent_matrix().kernel();
    let mut basis = Vec::with_capacity(kernel.len() * dim);
    for k in &kernel {
        for i in 0..dim {
            let unit = Vector::unit(dim, i);
            basis.push(k.iter().map(|c| unit.scale(c)).collect());
        }
    }
    Ok(basis)
}

/// One basis element of [`cocycle_space`].
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleBasisElement {
    pub values: Vec<Vector>,
    pub starred: BTreeMap<usize, Vector>,
}

/// Basis of all cocycles for a fixed representation. The unknowns are
/// `η(g)` for every generator and `η(g*)` for generators whose adjoint is a
/// separate letter.
pub fn cocycle_space(rep: &Arc<Representation>) -> Result<Vec<CocycleBasisElement>> {
    let p = rep.presentation().clone();
    let n = rep.dim();
    let k = p.num_generators();
    let starred_gens: Vec<usize> = (0..k)
        .filter(|&g| p.kind() == Kind::StarAlgebra && p.involution_image(g).inv)
        .collect();
    let unknowns = (k + starred_gens.len()) * n;
    let assemble = |x: &Vector| -> CocycleBasisElement {
        let chunk = |j: usize| Vector(x.0[j * n..(j + 1) * n].to_vec());
        CocycleBasisElement {
            values: (0..k).map(chunk).collect(),
            starred: starred_gens.iter().enumerate().map(|(j, &g)| (g, chunk(k + j))).collect(),
        }
    };
    let mut columns = Vec::with_capacity(unknowns);
    for u in 0..unknowns {
        let e = assemble(&Vector::unit(unknowns, u));
        columns.push(Cocycle::new_unchecked(rep.clone(), e.values, e.starred)?.residual_vector());
    }
    let rows = columns.first().map_or(0, |c| c.dim());
    let m = Matrix::from_columns(rows, &columns);
    Ok(m.kernel().iter().map(assemble).collect())
}

/// A bilinear functional on `A⊗A`, given on pairs of words.
pub trait Cochain2: Sync {
    fn presentation(&self) -> &Presentation;

    fn eval_words(&self, u: &Word, v: &Word) -> Result<Scalar>;

    fn eval(&self, t: &Tensor2) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (u, v, c) in t.terms() {
            acc += &(c * &self.eval_words(u, v)?);
        }
        Ok(acc)
    }

    fn eval_pair(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<Scalar> {
        self.eval(&Tensor2::elementary(a, b))
    }
}

/// `L(η)(a⊗b) = ⟨η(a*), η(b)⟩`.
pub struct BigL<'a> {
    cocycle: &'a Cocycle,
}

pub fn big_l(c: &Cocycle) -> BigL<'_> {
    BigL { cocycle: c }
}

impl Cochain2 for BigL<'_> {
    fn presentation(&self) -> &Presentation {
        self.cocycle.presentation()
    }

    fn eval_words(&self, u: &Word, v: &Word) -> Result<Scalar> {
        let p = self.cocycle.presentation();
        let a_star = p.involve(&p.word_element(u)?)?;
        let left = self.cocycle.eval_element(&a_star);
        let right = self.cocycle.eval(v);
        Ok(self.cocycle.inner(&left, &right))
    }
}

/// `K(η)(t)` for `t` with both legs in `ker ε`.
pub fn big_k(c: &Cocycle, t: &Tensor2) -> Result<Scalar> {
    if !c.presentation().legs_in_kernel(t) {
        return Err(Error::LegNotInKernel);
    }
    big_l(c).eval(t)
}

/// Any closure on word pairs, as a cochain.
pub struct FnCochain<'a, F> {
    presentation: &'a Presentation,
    f: F,
}

impl<'a, F> FnCochain<'a, F>
where
    F: Fn(&Word, &Word) -> Scalar + Sync,
{
    pub fn new(presentation: &'a Presentation, f: F) -> Self {
        FnCochain { presentation, f }
    }
}

impl<F> Cochain2 for FnCochain<'_, F>
where
    F: Fn(&Word, &Word) -> Scalar + Sync,
{
    fn presentation(&self) -> &Presentation {
        self.presentation
    }

    fn eval_words(&self, u: &Word, v: &Word) -> Result<Scalar> {
        Ok((self.f)(u, v))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HochschildViolation {
    pub index: usize,
    pub triple: [AlgebraElement; 3],
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HochschildReport {
    pub checked: usize,
    pub violation: Option<HochschildViolation>,
}

impl HochschildReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// `(∂φ)(a,b,c) = ε(a)φ(b⊗c) − φ(ab⊗c) + φ(a⊗bc) − φ(a⊗b)ε(c)`.
pub fn hochschild_coboundary(
    phi: &dyn Cochain2,
    a: &AlgebraElement,
    b: &AlgebraElement,
    c: &AlgebraElement,
) -> Result<Scalar> {
    let p = phi.presentation();
    let ab = p.multiply(a, b)?;
    let bc = p.multiply(b, c)?;
    Ok(&(&(&p.character(a) * &phi.eval_pair(b, c)?) - &phi.eval_pair(&ab, c)?)
        + &(&phi.eval_pair(a, &bc)? - &(&phi.eval_pair(a, b)? * &p.character(c))))
}

/// Check `∂φ = 0` on each triple; stops at the first violation.
pub fn hochschild_check_2cocycle(
    phi: &dyn Cochain2,
    triples: &[[AlgebraElement; 3]],
) -> Result<HochschildReport> {
    for (index, [a, b, c]) in triples.iter().enumerate() {
        let value = hochschild_coboundary(phi, a, b, c)?;
        if !value.is_zero() {
            return Ok(HochschildReport {
                checked: index + 1,
                violation: Some(HochschildViolation {
                    index,
                    triple: [a.clone(), b.clone(), c.clone()],
                    value,
                }),
            });
        }
    }
    Ok(HochschildReport {
        checked: triples.len(),
        violation: None,
    })
}

/// `φ_v(a) = ⟨v, (π(a) − ε(a))v⟩`, the functional paired with the
/// coboundary cocycle `η(a) = (π(a) − ε(a))v`.
#[derive(Clone, Debug)]
pub struct CoboundaryFunctional {
    rep: Arc<Representation>,
    v: Vector,
}

impl CoboundaryFunctional {
    pub fn vector(&self) -> &Vector {
        &self.v
    }

    pub fn eval(&self, w: &Word) -> Scalar {
        let p = self.rep.presentation();
        let shifted = &self.rep.word_image(w).mul_vec(&self.v) - &self.v.scale(&p.character_word(w));
        self.rep.form().inner_unchecked(&self.v, &shifted)
    }

    pub fn eval_element(&self, e: &AlgebraElement) -> Scalar {
        e.terms().map(|(w, c)| c * &self.eval(w)).sum()
    }
}

/// Coboundary cocycle of `v` with its functional. `L(η) = −∂φ_v`, so `φ_v`
/// itself completes the triple.
pub fn coboundary_cocycle(
    rep: Arc<Representation>,
    v: &Vector,
) -> Result<(Cocycle, CoboundaryFunctional)> {
    if v.dim() != rep.dim() {
        return Err(Error::dims(format!(
            "vector of dimension {} for a representation of dimension {}",
            v.dim(),
            rep.dim()
        )));
    }
    let p = rep.presentation().clone();
    let shift = |l: Letter| {
        &rep.letter_image(l).mul_vec(v) - &v.scale(&p.letter_character(l))
    };
    let values = (0..p.num_generators())
        .map(|g| shift(Letter::new(g, false)))
        .collect();
    let starred = (0..p.num_generators())
        .filter(|&g| p.kind() == Kind::StarAlgebra && p.involution_image(g).inv)
        .map(|g| (g, shift(Letter::new(g, true))))
        .collect();
    let c = Cocycle::new(rep.clone(), values, starred)?;
    Ok((
        c,
        CoboundaryFunctional {
            rep,
            v: v.clone(),
        },
    ))
}
