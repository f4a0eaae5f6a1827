//! Representative tensors for the known `ker μ` generators.

use crate::error::Result;
use crate::presentation::{AlgebraElement, Presentation, Tensor2};
use crate::scalar::Scalar;

/// `Σ c·w` from space-separated words; the empty string is `1`.
pub fn element(p: &Presentation, terms: &[(i64, &str)]) -> Result<AlgebraElement> {
    let mut e = AlgebraElement::zero();
    for &(c, w) in terms {
        e = e.add(&p.element(Scalar::from_int(c), &p.word(w)?)?);
    }
    Ok(e)
}

/// `(a⁻¹−1)⊗(b⁻¹−1) − (b⁻¹−1)⊗(a⁻¹−1)` for commuting generators `a`, `b`.
pub fn commutator_cycle(p: &Presentation, a: &str, b: &str) -> Result<Tensor2> {
    let ai = element(p, &[(1, &format!("{a}^-1")), (-1, "")])?;
    let bi = element(p, &[(1, &format!("{b}^-1")), (-1, "")])?;
    Ok(Tensor2::from_pairs([
        (Scalar::one(), &ai, &bi),
        (Scalar::from_int(-1), &bi, &ai),
    ]))
}

/// The generator of `ker μ` for `Γ₂` with relator `[a1,b1][a2,b2]`:
///
/// `(a1⁻¹−1)⊗(b1⁻¹−1)b2a2 − (b1⁻¹−1)⊗(a1⁻¹−1)b2a2
///  + a1⁻¹b1⁻¹(a2−1)⊗(b2−1) − a1⁻¹b1⁻¹(b2−1)⊗(a2−1)`
pub fn surface_cycle_gamma2(p: &Presentation) -> Result<Tensor2> {
    let a1i = element(p, &[(1, "a1^-1"), (-1, "")])?;
    let b1i = element(p, &[(1, "b1^-1"), (-1, "")])?;
    let b2a2 = element(p, &[(1, "b2 a2")])?;
    let pre = element(p, &[(1, "a1^-1 b1^-1")])?;
    let a2 = element(p, &[(1, "a2"), (-1, "")])?;
    let b2 = element(p, &[(1, "b2"), (-1, "")])?;

    let r1 = p.multiply(&b1i, &b2a2)?;
    let r2 = p.multiply(&a1i, &b2a2)?;
    let l3 = p.multiply(&pre, &a2)?;
    let l4 = p.multiply(&pre, &b2)?;
    let one = Scalar::one();
    let neg = Scalar::from_int(-1);
    Ok(Tensor2::from_pairs([
        (one.clone(), &a1i, &r1),
        (neg.clone(), &b1i, &r2),
        (one, &l3, &b2),
        (neg, &l4, &a2),
    ]))
}
