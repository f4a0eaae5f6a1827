//! Word-problem deciders for the group presentations in the catalog.
//!
//! Free reduction alone never applies relators, so identities such as
//! `μ(c) = 0` for a relator cycle `c` need one of these to be checked.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::{AlgebraElement, Letter, Presentation, Word};
use crate::scalar::Scalar;

/// How a scenario asks for group elements to be compared.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormalFormSpec {
    /// Free abelian group on the generators.
    Abelian,
    /// `p2` with the named translation and rotation generators.
    P2 { a: String, b: String, r: String },
    /// Dehn's algorithm; needs a C'(1/6) presentation.
    Dehn,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupKey {
    Abelian(Vec<i64>),
    /// `r^s a^m b^n`
    P2(u8, i64, i64),
}

#[derive(Clone, Debug)]
pub enum NormalForm {
    Abelian,
    P2 { a: u16, b: u16, r: u16 },
    Dehn(Dehn),
}

impl NormalForm {
    /// Build and check that every relator evaluates to the identity.
    pub fn new(spec: &NormalFormSpec, p: &Presentation) -> Result<Self> {
        p.require_group()?;
        let nf = match spec {
            NormalFormSpec::Abelian => NormalForm::Abelian,
            NormalFormSpec::P2 { a, b, r } => {
                let idx = |name: &str| {
                    p.gen_index(name)
                        .map(|g| g as u16)
                        .ok_or_else(|| Error::UnknownLetter(name.to_string()))
                };
                if p.num_generators() != 3 {
                    return Err(Error::NormalFormMismatch(
                        "p2 normal form needs exactly three generators".into(),
                    ));
                }
                NormalForm::P2 {
                    a: idx(a)?,
                    b: idx(b)?,
                    r: idx(r)?,
                }
            }
            NormalFormSpec::Dehn => NormalForm::Dehn(Dehn::new(p)?),
        };
        for rel in p.relators() {
            if !nf.is_trivial(rel) {
                return Err(Error::NormalFormMismatch(format!(
                    "relator {} is not trivial",
                    p.fmt_word(rel)
                )));
            }
        }
        Ok(nf)
    }

    /// Canonical key, when the decider has one.
    pub fn key(&self, w: &Word, num_generators: usize) -> Option<GroupKey> {
        match self {
            NormalForm::Abelian => {
                let mut n = vec![0i64; num_generators];
                for l in w.letters() {
                    n[l.gen as usize] += if l.inv { -1 } else { 1 };
                }
                Some(GroupKey::Abelian(n))
            }
            NormalForm::P2 { a, b, r } => {
                let mut acc = (0u8, 0i64, 0i64);
                for l in w.letters() {
                    let step = p2_letter(*l, *a, *b, *r);
                    acc = p2_mul(acc, step);
                }
                Some(GroupKey::P2(acc.0, acc.1, acc.2))
            }
            NormalForm::Dehn(_) => None,
        }
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        match self {
            NormalForm::Abelian => {
                let mut n: HashMap<u16, i64> = HashMap::new();
                for l in w.letters() {
                    *n.entry(l.gen).or_default() += if l.inv { -1 } else { 1 };
                }
                n.values().all(|&k| k == 0)
            }
            NormalForm::P2 { .. } => self.key(w, 3) == Some(GroupKey::P2(0, 0, 0)),
            NormalForm::Dehn(d) => d.reduce(w).is_empty(),
        }
    }

    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        self.is_trivial(&u.concat(&v.inverse()))
    }

    /// Collect the terms of `e` by group element; true when every class sums
    /// to zero, i.e. `e = 0` in `C[G]`.
    pub fn element_is_zero(&self, e: &AlgebraElement) -> bool {
        let mut classes: Vec<(Word, Scalar)> = Vec::new();
        'terms: for (w, c) in e.terms() {
            for (rep, sum) in classes.iter_mut() {
                if self.equal(rep, w) {
                    *sum += c;
                    continue 'terms;
                }
            }
            classes.push((w.clone(), c.clone()));
        }
        classes.iter().all(|(_, c)| c.is_zero())
    }
}

fn p2_letter(l: Letter, a: u16, b: u16, r: u16) -> (u8, i64, i64) {
    let s = if l.inv { -1 } else { 1 };
    if l.gen == a {
        (0, s, 0)
    } else if l.gen == b {
        (0, 0, s)
    } else {
        debug_assert_eq!(l.gen, r);
        (1, 0, 0)
    }
}

/// `(s1,m1,n1)(s2,m2,n2)` in the `r^s a^m b^n` form, with `r a r⁻¹ = a⁻¹`.
fn p2_mul(x: (u8, i64, i64), y: (u8, i64, i64)) -> (u8, i64, i64) {
    let sign = if y.0 == 1 { -1 } else { 1 };
    ((x.0 + y.0) % 2, sign * x.1 + y.1, sign * x.2 + y.2)
}

/// Dehn's algorithm over the symmetrized relator set.
#[derive(Clone, Debug)]
pub struct Dehn {
    symmetrized: Vec<Vec<Letter>>,
}

impl Dehn {
    pub fn new(p: &Presentation) -> Result<Self> {
        let mut sym: Vec<Vec<Letter>> = Vec::new();
        for r in p.relators() {
            let first = r.letters().first();
            let last = r.letters().last();
            if first.is_some() && first.map(|l| l.flipped()) == last.copied() {
                return Err(Error::NormalFormMismatch(format!(
                    "relator {} is not cyclically reduced",
                    p.fmt_word(r)
                )));
            }
            for base in [r.clone(), r.inverse()] {
                let n = base.len();
                for k in 0..n {
                    let mut rot = base.letters()[k..].to_vec();
                    rot.extend_from_slice(&base.letters()[..k]);
                    if !sym.contains(&rot) {
                        sym.push(rot);
                    }
                }
            }
        }
        let d = Dehn { symmetrized: sym };
        let piece = d.longest_piece();
        for s in &d.symmetrized {
            if 6 * piece >= s.len() {
                return Err(Error::NormalFormMismatch(format!(
                    "presentation is not C'(1/6): piece of length {piece} in a relator of length {}",
                    s.len()
                )));
            }
        }
        Ok(d)
    }

    fn longest_piece(&self) -> usize {
        let mut best = 0;
        for (i, s) in self.symmetrized.iter().enumerate() {
            for t in &self.symmetrized[i + 1..] {
                let common = s.iter().zip(t).take_while(|(x, y)| x == y).count();
                best = best.max(common);
            }
        }
        best
    }

    /// Free reduction plus replacement of any subword that is more than half
    /// of a relator by the inverse of the complement. Empty iff trivial.
    pub fn reduce(&self, w: &Word) -> Word {
        let mut cur = w.free_reduced();
        'outer: loop {
            for s in &self.symmetrized {
                let n = s.len();
                for k in (n / 2 + 1..=n).rev() {
                    if k > cur.len() {
                        continue;
                    }
                    let prefix = &s[..k];
                    if let Some(pos) = cur.letters().windows(k).position(|win| win == prefix) {
                        let tail: Word = s[k..].iter().copied().collect();
                        let mut next = cur.letters()[..pos].to_vec();
                        next.extend_from_slice(tail.inverse().letters());
                        next.extend_from_slice(&cur.letters()[pos + k..]);
                        cur = Word(next).free_reduced();
                        continue 'outer;
                    }
                }
            }
            return cur;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::standard::*;

    #[test]
    fn abelian_key() {
        let z = free_abelian(2);
        let nf = NormalForm::new(&NormalFormSpec::Abelian, &z).unwrap();
        assert!(nf.equal(&z.word("a b").unwrap(), &z.word("b a").unwrap()));
        assert!(!nf.equal(&z.word("a b").unwrap(), &z.word("a").unwrap()));
    }

    #[test]
    fn p2_key() {
        let p = p2();
        let spec = NormalFormSpec::P2 {
            a: "a".into(),
            b: "b".into(),
            r: "r".into(),
        };
        let nf = NormalForm::new(&spec, &p).unwrap();
        assert!(nf.equal(&p.word("r a").unwrap(), &p.word("a^-1 r").unwrap()));
        assert!(nf.equal(&p.word("r").unwrap(), &p.word("r^-1").unwrap()));
        assert!(!nf.equal(&p.word("r a").unwrap(), &p.word("a r").unwrap()));
    }

    #[test]
    fn p2_rejects_abelian_decider() {
        assert!(NormalForm::new(&NormalFormSpec::Abelian, &p2()).is_err());
    }

    #[test]
    fn dehn_surface() {
        let g = surface_group(2);
        let nf = NormalForm::new(&NormalFormSpec::Dehn, &g).unwrap();
        let r = g.relators()[0].clone();
        let conj = g.word("a2 b1").unwrap();
        let w = conj.concat(&r).concat(&conj.inverse());
        assert!(nf.is_trivial(&w));
        assert!(!nf.is_trivial(&g.word("a1 b1 a1^-1 b1^-1").unwrap()));
        assert!(!nf.equal(&g.word("a1 b1").unwrap(), &g.word("b1 a1").unwrap()));
    }

    #[test]
    fn dehn_rejects_torus() {
        // Z² = Γ₁ has pieces of length 1 in a relator of length 4.
        assert!(matches!(
            NormalForm::new(&NormalFormSpec::Dehn, &surface_group(1)),
            Err(Error::NormalFormMismatch(_))
        ));
    }
}
