use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{HermitianForm, Matrix};
use crate::presentation::{AlgebraElement, Kind, Letter, Presentation, Word};
use crate::scalar::Scalar;

/// A unital *-representation on `(C^n, form)`, given on generators.
#[derive(Clone, Debug)]
pub struct Representation {
    presentation: Arc<Presentation>,
    form: HermitianForm,
    /// Indexed by `Letter::slot`.
    images: Vec<Matrix>,
}

impl Representation {
    /// Validate generator images: shape, *-compatibility, and every relator
    /// (groups) or rule (star algebras).
    pub fn new(p: Arc<Presentation>, form: HermitianForm, images: Vec<Matrix>) -> Result<Self> {
        let rep = Representation::build(p, form, images)?;
        if let Some((name, _)) = rep.star_violations().into_iter().next() {
            return Err(Error::NotStarCompatible(name));
        }
        if let Some((relator, residual)) = rep.relation_violations().into_iter().next() {
            return Err(Error::RelationViolated {
                relator,
                residual: format!("{residual:?}"),
            });
        }
        Ok(rep)
    }

    /// Build without checking *-compatibility or relations.
    pub fn new_unchecked(
        p: Arc<Presentation>,
        form: HermitianForm,
        images: Vec<Matrix>,
    ) -> Result<Self> {
        Representation::build(p, form, images)
    }

    fn build(p: Arc<Presentation>, form: HermitianForm, images: Vec<Matrix>) -> Result<Self> {
        let n = form.dim();
        if images.len() != p.num_generators() {
            return Err(Error::dims(format!(
                "{} generator images for {} generators",
                images.len(),
                p.num_generators()
            )));
        }
        let mut slots = Vec::with_capacity(2 * images.len());
        for (g, m) in images.into_iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(Error::dims(format!(
                    "image of `{}` is {}x{}, form has dimension {n}",
                    p.generators()[g],
                    m.rows(),
                    m.cols()
                )));
            }
            let second = match p.kind() {
                Kind::Group => m.inverse().map_err(|_| Error::NotStarCompatible(p.generators()[g].clone()))?,
                Kind::StarAlgebra => form.adjoint(&m)?,
            };
            slots.push(m);
            slots.push(second);
        }
        Ok(Representation {
            presentation: p,
            form,
            images: slots,
        })
    }

    /// The trivial representation `g ↦ ε(g)·I`.
    pub fn trivial(p: Arc<Presentation>, form: HermitianForm) -> Self {
        let n = form.dim();
        let images = (0..p.num_generators())
            .map(|g| Matrix::scalar(n, p.generator_character(g)))
            .collect();
        Representation::new(p, form, images).expect("trivial representation is valid")
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn form(&self) -> &HermitianForm {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn is_definite(&self) -> bool {
        self.form.is_definite()
    }

    pub fn generator_image(&self, g: usize) -> &Matrix {
        &self.images[2 * g]
    }

    pub fn generator_images(&self) -> Vec<Matrix> {
        (0..self.presentation.num_generators())
            .map(|g| self.images[2 * g].clone())
            .collect()
    }

    pub fn letter_image(&self, l: Letter) -> &Matrix {
        &self.images[self.presentation.canonical_letter(l).slot()]
    }

    pub fn word_image(&self, w: &Word) -> Matrix {
        let mut acc = Matrix::identity(self.dim());
        for &l in w.letters() {
            acc = &acc * self.letter_image(l);
        }
        acc
    }

    pub fn element_image(&self, e: &AlgebraElement) -> Matrix {
        let mut acc = Matrix::zeros(self.dim(), self.dim());
        for (w, c) in e.terms() {
            acc = &acc + &self.word_image(w).scale(c);
        }
        acc
    }

    /// Generators whose images break `π(g*) = π(g)†`.
    pub fn star_violations(&self) -> Vec<(String, Matrix)> {
        let p = &self.presentation;
        let mut out = Vec::new();
        for g in 0..p.num_generators() {
            let m = &self.images[2 * g];
            let bad = match p.kind() {
                Kind::Group => {
                    let adj = self.form.adjoint(m).expect("square");
                    (!(&adj * m).is_identity()).then(|| &adj - &self.images[2 * g + 1])
                }
                Kind::StarAlgebra => {
                    let img = p.involution_image(g);
                    if img.inv {
                        None
                    } else {
                        let want = &self.images[2 * g + 1];
                        let have = &self.images[img.slot()];
                        (want != have).then(|| have - want)
                    }
                }
            };
            if let Some(residual) = bad {
                out.push((p.generators()[g].clone(), residual));
            }
        }
        out
    }

    /// Relators with `π(r) ≠ I`, or rules with `π(lhs) ≠ c·π(rhs)`, with the
    /// residual matrix of each.
    pub fn relation_violations(&self) -> Vec<(String, Matrix)> {
        let p = &self.presentation;
        let mut out = Vec::new();
        match p.kind() {
            Kind::Group => {
                let id = Matrix::identity(self.dim());
                for r in p.relators() {
                    let res = &self.word_image(r) - &id;
                    if !res.is_zero() {
                        out.push((p.fmt_word(r), res));
                    }
                }
            }
            Kind::StarAlgebra => {
                for rule in p.rules() {
                    let res = &self.word_image(&rule.lhs) - &self.word_image(&rule.rhs).scale(&rule.coeff);
                    if !res.is_zero() {
                        out.push((rule_name(p, &rule.lhs, &rule.coeff, &rule.rhs), res));
                    }
                }
            }
        }
        out
    }

    /// A representation with every image conjugated by `u`, `π'(g) = u π(g) u⁻¹`.
    pub fn conjugated(&self, u: &Matrix) -> Result<Representation> {
        if !self.form.is_unitary(u) {
            return Err(Error::Invalid("conjugating matrix is not unitary".into()));
        }
        let uinv = u.inverse()?;
        let images = self
            .generator_images()
            .iter()
            .map(|m| &(u * m) * &uinv)
            .collect();
        Representation::new(self.presentation.clone(), self.form.clone(), images)
    }
}

pub(crate) fn rule_name(p: &Presentation, lhs: &Word, c: &Scalar, rhs: &Word) -> String {
    format!("{} -> ({c})·{}", p.fmt_word(lhs), p.fmt_word(rhs))
}
