//! Gaussian/remainder splitting of a cocycle and Lévy–Khintchine attempts.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cocycle::Cocycle;
use crate::error::{Error, Result};
use crate::functional::{solve_generating_functional, FunctionalData, SolveReport};
use crate::linalg::{HermitianForm, Matrix, Solution, Vector};
use crate::representation::Representation;
use crate::scalar::Scalar;

/// Smallest π-invariant subspace containing `(π(g) − ε(g))D` for every
/// letter `g` (generators and their inverses or adjoints). Returned as an
/// echelon basis.
pub fn invariant_closure(rep: &Representation) -> Vec<Vector> {
    let p = rep.presentation();
    let n = rep.dim();
    let letters = p.letters();
    let mut gens = Vec::new();
    for &l in &letters {
        let shifted = rep.letter_image(l) - &Matrix::scalar(n, &p.letter_character(l));
        gens.extend(shifted.columns());
    }
    let mut basis = echelon_basis(n, &gens);
    loop {
        let mut grown = basis.clone();
        for v in &basis {
            for &l in &letters {
                grown.push(rep.letter_image(l).mul_vec(v));
            }
        }
        let next = echelon_basis(n, &grown);
        if next.len() == basis.len() {
            return basis;
        }
        basis = next;
    }
}

/// Row-reduced basis of the span of `vs`.
fn echelon_basis(n: usize, vs: &[Vector]) -> Vec<Vector> {
    if vs.is_empty() {
        return Vec::new();
    }
    let rows = Matrix::from_rows(vs.iter().map(|v| v.0.clone()).collect()).expect("rectangular");
    let (r, pivots) = rows.rref();
    (0..pivots.len()).map(|i| r.row(i)).filter(|v| v.dim() == n).collect()
}

/// Coordinates `y` with `B y = v`; `None` when `v ∉ span B`.
fn coordinates(basis: &[Vector], n: usize, v: &Vector) -> Result<Option<Vector>> {
    if basis.is_empty() {
        return Ok(v.is_zero().then(|| Vector::zeros(0)));
    }
    let b = Matrix::from_columns(n, basis);
    Ok(match b.solve(v)? {
        Solution::Feasible { particular, .. } => Some(particular),
        Solution::Infeasible { .. } => None,
    })
}

/// The restriction of `rep` to the invariant subspace spanned by `basis`.
fn restrict(rep: &Representation, basis: &[Vector]) -> Result<Representation> {
    let n = rep.dim();
    let form = rep.form().restrict(basis)?;
    let k = basis.len();
    let images = rep
        .generator_images()
        .iter()
        .map(|m| {
            let mut x = Matrix::zeros(k, k);
            for (j, b) in basis.iter().enumerate() {
                let y = coordinates(basis, n, &m.mul_vec(b))?
                    .ok_or_else(|| Error::Invalid("subspace is not invariant".into()))?;
                for i in 0..k {
                    x[(i, j)] = y[i].clone();
                }
            }
            Ok(x)
        })
        .collect::<Result<Vec<_>>>()?;
    Representation::new(rep.presentation().clone(), form, images)
}

#[derive(Clone, Debug)]
pub struct SplitResult {
    /// Basis of `H_R`.
    pub remainder_basis: Vec<Vector>,
    /// Basis of `D_G = H_R^⊥`.
    pub gaussian_basis: Vec<Vector>,
    pub p_g: Matrix,
    pub p_r: Matrix,
    /// `η_G = P_G∘η` on generators, in the coordinates of `D`.
    pub eta_g_full: Vec<Vector>,
    /// `η_R = P_R∘η` on generators, in the coordinates of `D`.
    pub eta_r_full: Vec<Vector>,
    /// `(ε·I, η_G)` on `D_G`, in `gaussian_basis` coordinates.
    pub gaussian: Cocycle,
    /// `(π|H_R, η_R)` on `H_R`, in `remainder_basis` coordinates.
    pub remainder: Cocycle,
}

impl SplitResult {
    pub fn is_purely_non_gaussian(&self) -> bool {
        self.gaussian_basis.is_empty()
    }

    pub fn is_gaussian(&self) -> bool {
        self.remainder_basis.is_empty()
    }
}

/// Split `η = η_G + η_R` along `D = D_G ⊕ H_R`. Every structural identity
/// is checked before returning.
pub fn split(c: &Cocycle) -> Result<SplitResult> {
    let rep = c.representation();
    let form = rep.form();
    form.require_definite()?;
    let p = c.presentation().clone();
    let n = rep.dim();

    let h_r = invariant_closure(rep);
    let d_g = form.orthogonal_complement(&h_r);
    let p_r = form.orthogonal_projection(&h_r)?;
    let p_g = &Matrix::identity(n) - &p_r;

    let check = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("split invariant failed: {what}")))
        }
    };
    check((&p_g * &p_r).is_zero(), "P_G·P_R = 0")?;
    check(&p_g * &p_g == p_g && &p_r * &p_r == p_r, "idempotent projections")?;
    check(form.is_self_adjoint(&p_g) && form.is_self_adjoint(&p_r), "self-adjoint projections")?;

    let eta_g_full: Vec<Vector> = c.generator_values().iter().map(|v| p_g.mul_vec(v)).collect();
    let eta_r_full: Vec<Vector> = c.generator_values().iter().map(|v| p_r.mul_vec(v)).collect();

    let to_coords = |basis: &[Vector], vs: &[Vector]| -> Result<Vec<Vector>> {
        vs.iter()
            .map(|v| {
                coordinates(basis, n, v)?
                    .ok_or_else(|| Error::Invalid("projected value outside its subspace".into()))
            })
            .collect()
    };

    let star_values = |basis: &[Vector], proj: &Matrix| -> Result<BTreeMap<usize, Vector>> {
        c.starred_values()
            .into_iter()
            .map(|(g, v)| {
                let y = coordinates(basis, n, &proj.mul_vec(&v))?
                    .ok_or_else(|| Error::Invalid("projected value outside its subspace".into()))?;
                Ok((g, y))
            })
            .collect()
    };

    let g_rep = Arc::new(Representation::trivial(p.clone(), form.restrict(&d_g)?));
    let gaussian = Cocycle::new(g_rep, to_coords(&d_g, &eta_g_full)?, star_values(&d_g, &p_g)?)?;

    let r_rep = Arc::new(restrict(rep, &h_r)?);
    let remainder = Cocycle::new(r_rep.clone(), to_coords(&h_r, &eta_r_full)?, star_values(&h_r, &p_r)?)?;

    // On H_R the projected formula π_R(a)P_Rη(b) = (π(a)−ε(a))η(b) + ε(a)P_Rη(b)
    // must agree with restriction.
    for (g, m) in rep.generator_images().iter().enumerate() {
        let e = p.generator_character(g);
        for v in c.generator_values() {
            let lhs = m.mul_vec(&p_r.mul_vec(&v));
            let rhs = &(&m.mul_vec(&v) - &v.scale(e)) + &p_r.mul_vec(&v).scale(e);
            check(lhs == rhs, "restricted action matches the projected formula")?;
        }
    }
    check(invariant_closure(&r_rep).len() == h_r.len(), "remainder has no Gaussian part")?;

    Ok(SplitResult {
        remainder_basis: h_r,
        gaussian_basis: d_g,
        p_g,
        p_r,
        eta_g_full,
        eta_r_full,
        gaussian,
        remainder,
    })
}

#[derive(Clone, Debug)]
pub struct LkDecomposition {
    pub split: SplitResult,
    /// Gaussian part, already shifted by `derivation`.
    pub psi_g: FunctionalData,
    pub psi_r: FunctionalData,
    /// `ψ − ψ_G − ψ_R` before the shift, on generators.
    pub derivation: Vec<Scalar>,
}

#[derive(Clone, Debug)]
pub enum LkOutcome {
    Decomposed(Box<LkDecomposition>),
    NoLk {
        split: Box<SplitResult>,
        gaussian: SolveReport,
        remainder: SolveReport,
    },
}

impl LkOutcome {
    pub fn is_decomposed(&self) -> bool {
        matches!(self, LkOutcome::Decomposed(_))
    }
}

/// Try to write `ψ = ψ_G + ψ_R` with Schürmann triples on both parts.
pub fn attempt_lk(c: &Cocycle, f: &FunctionalData) -> Result<LkOutcome> {
    let psi = f.generator_values().ok_or(Error::NotAGroup)?;
    let split = split(c)?;
    let gaussian = solve_generating_functional(&split.gaussian)?;
    let remainder = solve_generating_functional(&split.remainder)?;
    let (Some(psi_g), Some(psi_r)) = (gaussian.psi(), remainder.psi()) else {
        return Ok(LkOutcome::NoLk {
            split: Box::new(split),
            gaussian,
            remainder,
        });
    };
    let gv = psi_g.generator_values().expect("group functional");
    let rv = psi_r.generator_values().expect("group functional");
    let derivation: Vec<Scalar> = psi
        .iter()
        .zip(gv.iter().zip(rv))
        .map(|(x, (a, b))| &(x - a) - b)
        .collect();
    let psi_g = psi_g.shifted(&derivation)?;
    let psi_r = psi_r.clone();
    Ok(LkOutcome::Decomposed(Box::new(LkDecomposition {
        split,
        psi_g,
        psi_r,
        derivation,
    })))
}

/// Direct sum of two cocycles over the same presentation.
pub fn direct_sum(c1: &Cocycle, c2: &Cocycle) -> Result<Cocycle> {
    let p = c1.presentation().clone();
    let r1 = c1.representation();
    let r2 = c2.representation();
    let form = HermitianForm::new(r1.form().gram().direct_sum(r2.form().gram()))?;
    let images = r1
        .generator_images()
        .iter()
        .zip(r2.generator_images())
        .map(|(a, b)| a.direct_sum(&b))
        .collect();
    let rep = Arc::new(Representation::new(p, form, images)?);
    let values = c1
        .generator_values()
        .iter()
        .zip(c2.generator_values())
        .map(|(a, b)| a.concat(&b))
        .collect();
    let (s1, s2) = (c1.starred_values(), c2.starred_values());
    let starred = s1
        .keys()
        .chain(s2.keys())
        .map(|&g| {
            let a = s1.get(&g).cloned().unwrap_or_else(|| Vector::zeros(c1.dim()));
            let b = s2.get(&g).cloned().unwrap_or_else(|| Vector::zeros(c2.dim()));
            (g, a.concat(&b))
        })
        .collect();
    Cocycle::new(rep, values, starred)
}
