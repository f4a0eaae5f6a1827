//! Presentations of `(A, ε)`: letters and words, free reduction for group
//! algebras, rule-based rewriting for small free *-algebras, the involution,
//! the character, truncated spanning sets of `K_n`, and the multiplication map
//! on elementary tensors.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub const DEFAULT_STEP_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Group,
    StarAlgebra,
}

/// A generator together with a flag: the formal inverse for groups, the star
/// for *-algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u16,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Self {
        Letter {
            gen: gen as u16,
            inv,
        }
    }

    pub fn flipped(self) -> Self {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }

    /// Dense slot index `2·gen + inv`.
    pub fn slot(self) -> usize {
        2 * self.gen as usize + self.inv as usize
    }
}

/// Finite letter sequence, ordered shortlex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Group inverse: reverse and flip every letter.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.flipped()).collect())
    }

    /// Cancel adjacent `g g⁻¹` pairs.
    pub fn free_reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.flipped()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].flipped())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Oriented rule `lhs → coeff·rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub coeff: Scalar,
    pub rhs: Word,
}

/// Finite linear combination of reduced words, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    terms: BTreeMap<Word, Scalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn one() -> Self {
        AlgebraElement::monomial(Scalar::one(), Word::empty())
    }

    /// `c·w` with `w` assumed reduced.
    pub fn monomial(c: Scalar, w: Word) -> Self {
        let mut e = AlgebraElement::zero();
        e.add_term(c, w);
        e
    }

    pub fn add_term(&mut self, c: Scalar, w: Word) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.add_term(c.clone(), w.clone());
        }
        out
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (w, x) in self.terms() {
            out.add_term(x * c, w.clone());
        }
        out
    }
}

/// Element of `A⊗A` expanded over pairs of reduced words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tensor2 {
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl Tensor2 {
    pub fn zero() -> Self {
        Tensor2::default()
    }

    /// `Σ c·(left ⊗ right)` expanded bilinearly.
    pub fn from_pairs<'a, I>(pairs: I) -> Tensor2
    where
        I: IntoIterator<Item = (Scalar, &'a AlgebraElement, &'a AlgebraElement)>,
    {
        let mut t = Tensor2::zero();
        for (c, left, right) in pairs {
            for (u, a) in left.terms() {
                for (v, b) in right.terms() {
                    t.add_term(&(&c * a) * b, u.clone(), v.clone());
                }
            }
        }
        t
    }

    pub fn elementary(left: &AlgebraElement, right: &AlgebraElement) -> Tensor2 {
        Tensor2::from_pairs([(Scalar::one(), left, right)])
    }

    pub fn add_term(&mut self, c: Scalar, u: Word, v: Word) {
        if c.is_zero() {
            return;
        }
        let key = (u, v);
        let updated = match self.terms.get(&key) {
            Some(old) => old + &c,
            None => c,
        };
        if updated.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, updated);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Word, &Scalar)> {
        self.terms.iter().map(|((u, v), c)| (u, v, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    kind: Kind,
    generators: Vec<String>,
    relators: Vec<Word>,
    /// Image of each generator under `*` (star algebras only).
    involution: Vec<Letter>,
    character: Vec<Scalar>,
    rules: Vec<Rule>,
    step_budget: usize,
}

impl Presentation {
    /// Group presentation; relators are written as space-separated letters,
    /// e.g. `"a b a^-1 b^-1"`.
    pub fn group(generators: &[&str], relators: &[&str]) -> Result<Self> {
        let gens: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let mut p = Presentation::group_from_words(gens, Vec::new())?;
        let mut words = Vec::new();
        for r in relators {
            let toks: Vec<String> = r.split_whitespace().map(str::to_string).collect();
            words.push(p.parse_word(&toks)?);
        }
        p = Presentation::group_from_words(p.generators, words)?;
        Ok(p)
    }

    pub fn group_from_words(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        check_generators(&generators)?;
        for (k, r) in relators.iter().enumerate() {
            if r.is_empty() {
                return Err(Error::InvalidPresentation(format!("relator {k} is empty")));
            }
            if !r.is_freely_reduced() {
                return Err(Error::InvalidPresentation(format!(
                    "relator {k} is not freely reduced"
                )));
            }
            if r.0.iter().any(|l| l.gen as usize >= generators.len()) {
                return Err(Error::InvalidPresentation(format!(
                    "relator {k} uses an undeclared generator"
                )));
            }
        }
        let n = generators.len();
        Ok(Presentation {
            kind: Kind::Group,
            generators,
            relators,
            involution: Vec::new(),
            character: vec![Scalar::one(); n],
            rules: Vec::new(),
            step_budget: DEFAULT_STEP_BUDGET,
        })
    }

    /// Star algebra. `involution[g]` is the image of generator `g` under `*`:
    /// either another plain generator or `g` starred.
    pub fn star_algebra(
        generators: Vec<String>,
        involution: Vec<Letter>,
        character: Vec<Scalar>,
        rules: Vec<Rule>,
    ) -> Result<Self> {
        check_generators(&generators)?;
        let n = generators.len();
        if involution.len() != n || character.len() != n {
            return Err(Error::InvalidPresentation(
                "involution and character must cover every generator".into(),
            ));
        }
        for (g, &img) in involution.iter().enumerate() {
            if img.gen as usize >= n {
                return Err(Error::InvalidPresentation(format!(
                    "involution of `{}` names an undeclared generator",
                    generators[g]
                )));
            }
            if img.inv {
                if img.gen as usize != g {
                    return Err(Error::InvalidPresentation(format!(
                        "`{}*` may only be the image of `{}`",
                        generators[img.gen as usize], generators[img.gen as usize]
                    )));
                }
            } else if involution[img.gen as usize] != Letter::new(g, false) {
                return Err(Error::InvalidPresentation(format!(
                    "involution is not an involution at `{}`",
                    generators[g]
                )));
            }
        }
        let mut p = Presentation {
            kind: Kind::StarAlgebra,
            generators,
            relators: Vec::new(),
            involution,
            character,
            rules: Vec::new(),
            step_budget: DEFAULT_STEP_BUDGET,
        };
        for g in 0..n {
            let img = p.involution[g];
            if !img.inv && p.character[img.gen as usize] != p.character[g].conj() {
                return Err(Error::InvalidPresentation(format!(
                    "character is not hermitian at `{}`",
                    p.generators[g]
                )));
            }
        }
        let mut canon = Vec::with_capacity(rules.len());
        for (k, rule) in rules.into_iter().enumerate() {
            let lhs = p.canonical_word(&rule.lhs);
            let rhs = p.canonical_word(&rule.rhs);
            if lhs.is_empty() {
                return Err(Error::InvalidPresentation(format!("rule {k} has an empty lhs")));
            }
            let lhs_eps = p.character_word(&lhs);
            let rhs_eps = &rule.coeff * &p.character_word(&rhs);
            if lhs_eps != rhs_eps {
                return Err(Error::InvalidPresentation(format!(
                    "character does not respect rule {k}: {lhs_eps} vs {rhs_eps}"
                )));
            }
            canon.push(Rule {
                lhs,
                coeff: rule.coeff,
                rhs,
            });
        }
        // The relations generate a *-ideal, so the starred rules hold too.
        let starred: Vec<Rule> = canon
            .iter()
            .map(|r| Rule {
                lhs: p.involve_word(&r.lhs),
                coeff: r.coeff.conj(),
                rhs: p.involve_word(&r.rhs),
            })
            .collect();
        for r in starred {
            if !canon.iter().any(|c| c.lhs == r.lhs) {
                canon.push(r);
            }
        }
        p.rules = canon;
        Ok(p)
    }

    pub fn with_step_budget(mut self, budget: usize) -> Self {
        self.step_budget = budget;
        self
    }

    pub fn step_budget(&self) -> usize {
        self.step_budget
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn is_group(&self) -> bool {
        self.kind == Kind::Group
    }

    pub fn require_group(&self) -> Result<()> {
        if self.is_group() {
            Ok(())
        } else {
            Err(Error::NotAGroup)
        }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn involution_image(&self, g: usize) -> Letter {
        self.involution[g]
    }

    pub fn generator_character(&self, g: usize) -> &Scalar {
        &self.character[g]
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Letters that can appear in reduced words.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for g in 0..self.num_generators() {
            out.push(Letter::new(g, false));
            let has_star = match self.kind {
                Kind::Group => true,
                Kind::StarAlgebra => self.involution[g].inv,
            };
            if has_star {
                out.push(Letter::new(g, true));
            }
        }
        out
    }

    pub fn parse_letter(&self, token: &str) -> Result<Letter> {
        let unknown = || Error::UnknownLetter(token.to_string());
        let (name, flag) = match self.kind {
            Kind::Group => match token.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (token.strip_suffix("^1").unwrap_or(token), false),
            },
            Kind::StarAlgebra => match token.strip_suffix('*') {
                Some(n) => (n, true),
                None => (token, false),
            },
        };
        let g = self.gen_index(name).ok_or_else(unknown)?;
        Ok(self.canonical_letter(Letter::new(g, flag)))
    }

    pub fn parse_word<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Word> {
        tokens.iter().map(|t| self.parse_letter(t.as_ref())).collect()
    }

    /// Parse a space-separated word such as `"a b^-1"`.
    pub fn word(&self, text: &str) -> Result<Word> {
        let toks: Vec<&str> = text.split_whitespace().collect();
        self.parse_word(&toks)
    }

    pub fn letter_name(&self, l: Letter) -> String {
        let g = &self.generators[l.gen as usize];
        match (self.kind, l.inv) {
            (_, false) => g.clone(),
            (Kind::Group, true) => format!("{g}^-1"),
            (Kind::StarAlgebra, true) => format!("{g}*"),
        }
    }

    pub fn word_tokens(&self, w: &Word) -> Vec<String> {
        w.0.iter().map(|&l| self.letter_name(l)).collect()
    }

    pub fn fmt_word(&self, w: &Word) -> String {
        if w.is_empty() {
            "1".to_string()
        } else {
            self.word_tokens(w).join(" ")
        }
    }

    pub fn fmt_element(&self, e: &AlgebraElement) -> String {
        if e.is_zero() {
            return "0".to_string();
        }
        e.terms()
            .map(|(w, c)| format!("({c})·{}", self.fmt_word(w)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Star algebras: rewrite `g*` to its plain image when `g* = h`.
    pub fn canonical_letter(&self, l: Letter) -> Letter {
        match self.kind {
            Kind::Group => l,
            Kind::StarAlgebra => {
                if l.inv && !self.involution[l.gen as usize].inv {
                    self.involution[l.gen as usize]
                } else {
                    l
                }
            }
        }
    }

    fn canonical_word(&self, w: &Word) -> Word {
        w.0.iter().map(|&l| self.canonical_letter(l)).collect()
    }

    /// The letter `l*`.
    pub fn star_letter(&self, l: Letter) -> Letter {
        match self.kind {
            Kind::Group => l.flipped(),
            Kind::StarAlgebra => {
                let l = self.canonical_letter(l);
                if l.inv {
                    Letter::new(l.gen as usize, false)
                } else {
                    self.involution[l.gen as usize]
                }
            }
        }
    }

    /// Reduce `coeff·w`. Groups: free reduction only (relators are never
    /// applied). Star algebras: involution elimination, then leftmost rule
    /// application until a fixpoint. `None` means the monomial vanished.
    pub fn reduce_monomial(&self, coeff: Scalar, w: &Word) -> Result<Option<(Scalar, Word)>> {
        if coeff.is_zero() {
            return Ok(None);
        }
        match self.kind {
            Kind::Group => Ok(Some((coeff, w.free_reduced()))),
            Kind::StarAlgebra => self.rewrite(coeff, self.canonical_word(w)),
        }
    }

    pub fn reduce(&self, w: &Word) -> Result<Option<(Scalar, Word)>> {
        self.reduce_monomial(Scalar::one(), w)
    }

    fn rewrite(&self, mut coeff: Scalar, mut w: Word) -> Result<Option<(Scalar, Word)>> {
        let mut steps = 0usize;
        loop {
            let hit = (0..w.len()).find_map(|pos| {
                self.rules
                    .iter()
                    .find(|r| w.0[pos..].starts_with(&r.lhs.0))
                    .map(|r| (pos, r))
            });
            let Some((pos, rule)) = hit else {
                return Ok(Some((coeff, w)));
            };
            steps += 1;
            if steps > self.step_budget {
                return Err(Error::ReductionBudgetExceeded(self.step_budget));
            }
            if rule.coeff.is_zero() {
                return Ok(None);
            }
            coeff *= &rule.coeff;
            let mut next = w.0[..pos].to_vec();
            next.extend_from_slice(&rule.rhs.0);
            next.extend_from_slice(&w.0[pos + rule.lhs.len()..]);
            w = Word(next);
        }
    }

    /// The reduced element `coeff·w`.
    pub fn element(&self, coeff: Scalar, w: &Word) -> Result<AlgebraElement> {
        Ok(match self.reduce_monomial(coeff, w)? {
            Some((c, r)) => AlgebraElement::monomial(c, r),
            None => AlgebraElement::zero(),
        })
    }

    pub fn word_element(&self, w: &Word) -> Result<AlgebraElement> {
        self.element(Scalar::one(), w)
    }

    /// Reduce every term again (idempotent on canonical input).
    pub fn reduce_element(&self, e: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (w, c) in e.terms() {
            if let Some((c2, r)) = self.reduce_monomial(c.clone(), w)? {
                out.add_term(c2, r);
            }
        }
        Ok(out)
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (u, x) in a.terms() {
            for (v, y) in b.terms() {
                if let Some((c, r)) = self.reduce_monomial(x * y, &u.concat(v))? {
                    out.add_term(c, r);
                }
            }
        }
        Ok(out)
    }

    pub fn product(&self, factors: &[&AlgebraElement]) -> Result<AlgebraElement> {
        let mut acc = AlgebraElement::one();
        for f in factors {
            acc = self.multiply(&acc, f)?;
        }
        Ok(acc)
    }

    /// The raw word `w*` (reversed, starred letters), before reduction.
    pub fn involve_word(&self, w: &Word) -> Word {
        w.0.iter().rev().map(|&l| self.star_letter(l)).collect()
    }

    /// Antilinear anti-multiplicative involution.
    pub fn involve(&self, e: &AlgebraElement) -> Result<AlgebraElement> {
        let mut out = AlgebraElement::zero();
        for (w, c) in e.terms() {
            if let Some((c2, r)) = self.reduce_monomial(c.conj(), &self.involve_word(w))? {
                out.add_term(c2, r);
            }
        }
        Ok(out)
    }

    pub fn letter_character(&self, l: Letter) -> Scalar {
        match self.kind {
            Kind::Group => Scalar::one(),
            Kind::StarAlgebra => {
                let l = self.canonical_letter(l);
                let e = &self.character[l.gen as usize];
                if l.inv {
                    e.conj()
                } else {
                    e.clone()
                }
            }
        }
    }

    pub fn character_word(&self, w: &Word) -> Scalar {
        match self.kind {
            Kind::Group => Scalar::one(),
            Kind::StarAlgebra => w.0.iter().map(|&l| self.letter_character(l)).product(),
        }
    }

    pub fn character(&self, e: &AlgebraElement) -> Scalar {
        e.terms().map(|(w, c)| c * &self.character_word(w)).sum()
    }

    /// `w − ε(w)·1`.
    pub fn augmentation(&self, w: &Word) -> Result<AlgebraElement> {
        let e = self.word_element(w)?;
        Ok(e.sub(&AlgebraElement::monomial(self.character_word(w), Word::empty())))
    }

    /// Signed occurrence count of each generator.
    pub fn exponent_sums(&self, w: &Word) -> Vec<i64> {
        let mut n = vec![0i64; self.num_generators()];
        for l in &w.0 {
            n[l.gen as usize] += if l.inv { -1 } else { 1 };
        }
        n
    }

    /// Relators × generators matrix of exponent sums.
    pub fn exponent_matrix(&self) -> Matrix {
        let rows: Vec<Vec<Scalar>> = self
            .relators
            .iter()
            .map(|r| self.exponent_sums(r).into_iter().map(Scalar::from_int).collect())
            .collect();
        if rows.is_empty() {
            return Matrix::zeros(0, self.num_generators());
        }
        Matrix::from_rows(rows).expect("rectangular")
    }

    /// Distinct reduced, nonzero words of length at most `max_len`, shortlex.
    /// For star algebras these are the normal forms reached from letter
    /// sequences of that length.
    pub fn enumerate_words(&self, max_len: usize) -> Result<Vec<Word>> {
        let letters = self.letters();
        let mut layer = vec![Word::empty()];
        let mut all = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for &l in &letters {
                    if self.is_group() && w.0.last() == Some(&l.flipped()) {
                        continue;
                    }
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        if self.is_group() {
            return Ok(all);
        }
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for w in all {
            if let Some((_, r)) = self.reduce(&w)? {
                if seen.insert(r.clone()) {
                    out.push(r);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Products of `n` elements of `{w − ε(w) : w reduced, |w| ≤ max_len}`;
    /// spans the length-truncated `K_n`. Zero and repeated products dropped.
    pub fn kn_spanning_set(&self, n: usize, max_len: usize) -> Result<Vec<AlgebraElement>> {
        if !(1..=3).contains(&n) {
            return Err(Error::Invalid(format!("K_n spanning sets need n in 1..=3, got {n}")));
        }
        let mut base = Vec::new();
        for w in self.enumerate_words(max_len)? {
            let e = self.augmentation(&w)?;
            if !e.is_zero() {
                base.push(e);
            }
        }
        let mut current = base.clone();
        for _ in 1..n {
            let mut next = Vec::with_capacity(current.len() * base.len());
            for a in &current {
                for b in &base {
                    next.push(self.multiply(a, b)?);
                }
            }
            current = next;
        }
        let mut seen = HashSet::new();
        Ok(current
            .into_iter()
            .filter(|e| !e.is_zero() && seen.insert(e.clone()))
            .collect())
    }

    /// Both legs of `t` lie in `ker ε`: `(ε⊗id)t = 0 = (id⊗ε)t`.
    pub fn legs_in_kernel(&self, t: &Tensor2) -> bool {
        let mut left = AlgebraElement::zero();
        let mut right = AlgebraElement::zero();
        for (u, v, c) in t.terms() {
            right.add_term(c * &self.character_word(u), v.clone());
            left.add_term(c * &self.character_word(v), u.clone());
        }
        left.is_zero() && right.is_zero()
    }

    /// Multiplication `K₁⊗K₁ → K₁`, `a⊗b ↦ ab`, reduced.
    pub fn mu(&self, t: &Tensor2) -> Result<AlgebraElement> {
        if !self.legs_in_kernel(t) {
            return Err(Error::LegNotInKernel);
        }
        let mut out = AlgebraElement::zero();
        for (u, v, c) in t.terms() {
            if let Some((c2, r)) = self.reduce_monomial(c.clone(), &u.concat(v))? {
                out.add_term(c2, r);
            }
        }
        Ok(out)
    }

    /// `Σ c·a⊗b ↦ Σ conj(c)·b*⊗a*`.
    pub fn involve_swap(&self, t: &Tensor2) -> Result<Tensor2> {
        let mut out = Tensor2::zero();
        for (u, v, c) in t.terms() {
            let a = self.involve(&AlgebraElement::monomial(c.conj(), u.clone()))?;
            let b = self.involve(&AlgebraElement::monomial(Scalar::one(), v.clone()))?;
            let piece = Tensor2::elementary(&b, &a);
            for (x, y, k) in piece.terms() {
                out.add_term(k.clone(), x.clone(), y.clone());
            }
        }
        Ok(out)
    }
}

fn check_generators(gens: &[String]) -> Result<()> {
    if gens.is_empty() {
        return Err(Error::InvalidPresentation("no generators".into()));
    }
    let mut seen = HashSet::new();
    for g in gens {
        let ok = !g.is_empty()
            && g.chars().all(|c| c.is_alphanumeric() || c == '_')
            && !g.starts_with(|c: char| c.is_ascii_digit());
        if !ok {
            return Err(Error::InvalidPresentation(format!("bad generator name `{g}`")));
        }
        if !seen.insert(g.as_str()) {
            return Err(Error::InvalidPresentation(format!("duplicate generator `{g}`")));
        }
    }
    Ok(())
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Group => "group",
            Kind::StarAlgebra => "star_algebra",
        })
    }
}

/// Presentations used across the crate and its tests.
pub mod standard {
    use super::*;

    /// `Γ_k`: generators `a1, b1, .., ak, bk`, one relator `Π [a_l, b_l]`.
    pub fn surface_group(k: usize) -> Presentation {
        let gens: Vec<String> = (1..=k)
            .flat_map(|l| [format!("a{l}"), format!("b{l}")])
            .collect();
        let rel: Vec<String> = (1..=k)
            .map(|l| format!("a{l} b{l} a{l}^-1 b{l}^-1"))
            .collect();
        let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
        Presentation::group(&refs, &[rel.join(" ").as_str()]).expect("surface group")
    }

    /// `Z^k` with generators `g1..gk` (or `a, b` for `k = 2`) and all commutators.
    pub fn free_abelian(k: usize) -> Presentation {
        let gens: Vec<String> = if k == 2 {
            vec!["a".into(), "b".into()]
        } else {
            (1..=k).map(|l| format!("g{l}")).collect()
        };
        let mut rels = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                let (x, y) = (&gens[i], &gens[j]);
                rels.push(format!("{x} {y} {x}^-1 {y}^-1"));
            }
        }
        let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
        let rrefs: Vec<&str> = rels.iter().map(String::as_str).collect();
        Presentation::group(&refs, &rrefs).expect("free abelian group")
    }

    /// Wallpaper group `p2 = ⟨a,b,r | aba⁻¹b⁻¹, r², (ra)², (rb)²⟩`.
    pub fn p2() -> Presentation {
        Presentation::group(
            &["a", "b", "r"],
            &["a b a^-1 b^-1", "r r", "r a r a", "r b r b"],
        )
        .expect("p2")
    }

    /// `C⟨x, y | x* = x, x²y = −y, y*y = 0⟩` with `ε(x) = ε(y) = 0`.
    pub fn ac_not_h2z() -> Presentation {
        let x = Letter::new(0, false);
        let y = Letter::new(1, false);
        let ys = Letter::new(1, true);
        Presentation::star_algebra(
            vec!["x".into(), "y".into()],
            vec![x, ys],
            vec![Scalar::zero(), Scalar::zero()],
            vec![
                Rule {
                    lhs: Word(vec![x, x, y]),
                    coeff: Scalar::from_int(-1),
                    rhs: Word(vec![y]),
                },
                Rule {
                    lhs: Word(vec![ys, y]),
                    coeff: Scalar::zero(),
                    rhs: Word::empty(),
                },
            ],
        )
        .expect("star algebra")
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;

    #[test]
    fn free_reduction() {
        let p = free_abelian(2);
        let w = p.word("a b b^-1 a").unwrap();
        assert_eq!(p.reduce(&w).unwrap().unwrap().1, p.word("a a").unwrap());
    }

    #[test]
    fn star_rewriting() {
        let p = ac_not_h2z();
        let (c, w) = p.reduce(&p.word("x x y").unwrap()).unwrap().unwrap();
        assert_eq!(c, Scalar::from_int(-1));
        assert_eq!(w, p.word("y").unwrap());
        assert_eq!(p.reduce(&p.word("y* y").unwrap()).unwrap(), None);
        // x* is rewritten to x.
        assert_eq!(p.reduce(&p.word("x* x").unwrap()).unwrap().unwrap().1, p.word("x x").unwrap());
        let (c, w) = p.reduce(&p.word("x x x x y").unwrap()).unwrap().unwrap();
        assert_eq!((c, w), (Scalar::one(), p.word("y").unwrap()));
    }

    #[test]
    fn step_budget_guards_loops() {
        let a = Letter::new(0, false);
        let p = Presentation::star_algebra(
            vec!["a".into()],
            vec![a],
            vec![Scalar::one()],
            vec![Rule {
                lhs: Word(vec![a]),
                coeff: Scalar::one(),
                rhs: Word(vec![a]),
            }],
        )
        .unwrap()
        .with_step_budget(50);
        assert_eq!(
            p.reduce(&Word(vec![a])),
            Err(Error::ReductionBudgetExceeded(50))
        );
    }

    #[test]
    fn involution_examples() {
        let p = surface_group(2);
        let w = p.word("a1 b2").unwrap();
        let e = p.involve(&p.word_element(&w).unwrap()).unwrap();
        assert_eq!(e, p.word_element(&p.word("b2^-1 a1^-1").unwrap()).unwrap());

        let z = free_abelian(2);
        let ainv_minus_one = z.augmentation(&z.word("a^-1").unwrap()).unwrap();
        let a_minus_one = z.augmentation(&z.word("a").unwrap()).unwrap();
        assert_eq!(z.involve(&ainv_minus_one).unwrap(), a_minus_one);

        let s = ac_not_h2z();
        let xy = s.word_element(&s.word("x y").unwrap()).unwrap();
        assert_eq!(
            s.involve(&xy).unwrap(),
            s.word_element(&s.word("y* x").unwrap()).unwrap()
        );
    }

    #[test]
    fn involution_is_antilinear() {
        let s = ac_not_h2z();
        let e = s.element(Scalar::gauss(1, 2), &s.word("y x").unwrap()).unwrap();
        let back = s.involve(&s.involve(&e).unwrap()).unwrap();
        assert_eq!(back, e);
        assert_eq!(
            s.involve(&e).unwrap().coefficient(&s.word("x y*").unwrap()),
            Scalar::gauss(1, -2)
        );
    }

    #[test]
    fn character_examples() {
        let p = surface_group(1);
        let w = p.word_element(&p.word("a1 b1 a1^-1").unwrap()).unwrap();
        assert_eq!(p.character(&w), Scalar::one());
        let a = p.augmentation(&p.word("a1").unwrap()).unwrap();
        assert!(p.character(&a).is_zero());
        let s = ac_not_h2z();
        let e = s
            .word_element(&s.word("x x y").unwrap())
            .unwrap()
            .add(&s.word_element(&s.word("y").unwrap()).unwrap());
        assert!(e.is_zero());
        assert!(s.character(&e).is_zero());
    }

    #[test]
    fn kn_examples() {
        let z = free_abelian(2);
        let k1 = z.kn_spanning_set(1, 1).unwrap();
        let expect: Vec<AlgebraElement> = ["a", "a^-1", "b", "b^-1"]
            .iter()
            .map(|t| z.augmentation(&z.word(t).unwrap()).unwrap())
            .collect();
        assert_eq!(k1, expect);

        let k2 = z.kn_spanning_set(2, 1).unwrap();
        let am1 = z.augmentation(&z.word("a").unwrap()).unwrap();
        let bm1 = z.augmentation(&z.word("b").unwrap()).unwrap();
        let prod = z.multiply(&am1, &bm1).unwrap();
        assert!(k2.contains(&prod));
        let mut manual = AlgebraElement::zero();
        manual.add_term(Scalar::one(), z.word("a b").unwrap());
        manual.add_term(Scalar::from_int(-1), z.word("a").unwrap());
        manual.add_term(Scalar::from_int(-1), z.word("b").unwrap());
        manual.add_term(Scalar::one(), Word::empty());
        assert_eq!(prod, manual);

        let z1 = free_abelian(1);
        let k3 = z1.kn_spanning_set(3, 1).unwrap();
        let g = z1.augmentation(&z1.word("g1").unwrap()).unwrap();
        let cube = z1.product(&[&g, &g, &g]).unwrap();
        // (a−1)³ = a³ − 3a² + 3a − 1
        let mut binom = AlgebraElement::zero();
        for (k, c) in [(3usize, 1i64), (2, -3), (1, 3), (0, -1)] {
            binom.add_term(Scalar::from_int(c), Word(vec![Letter::new(0, false); k]));
        }
        assert_eq!(cube, binom);
        assert!(k3.contains(&cube));
        assert!(z.kn_spanning_set(4, 1).is_err());
    }

    #[test]
    fn mu_examples() {
        let z = free_abelian(2);
        let am1 = z.augmentation(&z.word("a").unwrap()).unwrap();
        let bm1 = z.augmentation(&z.word("b").unwrap()).unwrap();
        let t = Tensor2::elementary(&am1, &bm1);
        assert_eq!(z.mu(&t).unwrap(), z.multiply(&am1, &bm1).unwrap());
        let a = z.word_element(&z.word("a").unwrap()).unwrap();
        assert_eq!(z.mu(&Tensor2::elementary(&a, &bm1)), Err(Error::LegNotInKernel));

        let s = ac_not_h2z();
        let ys = s.word_element(&s.word("y*").unwrap()).unwrap();
        let y = s.word_element(&s.word("y").unwrap()).unwrap();
        assert!(s.mu(&Tensor2::elementary(&ys, &y)).unwrap().is_zero());
    }

    #[test]
    fn enumerate_counts() {
        // 1 + 4 + 12 + 36 freely reduced words on two generators.
        assert_eq!(free_abelian(2).enumerate_words(3).unwrap().len(), 53);
        let s = ac_not_h2z();
        let words = s.enumerate_words(3).unwrap();
        assert!(!words.contains(&s.word("y* y").unwrap()));
        assert!(!words.contains(&s.word("x x y").unwrap()));
        assert!(words.contains(&s.word("y y*").unwrap()));
    }

    #[test]
    fn presentation_validation() {
        assert!(Presentation::group(&["a"], &["a a^-1"]).is_err());
        assert!(Presentation::group(&["a", "a"], &[]).is_err());
        assert!(matches!(
            Presentation::group(&["a"], &["b"]),
            Err(Error::UnknownLetter(_))
        ));
        let x = Letter::new(0, false);
        // ε(x) = 1 does not respect x·x → 0.
        let bad = Presentation::star_algebra(
            vec!["x".into()],
            vec![x],
            vec![Scalar::one()],
            vec![Rule {
                lhs: Word(vec![x, x]),
                coeff: Scalar::zero(),
                rhs: Word::empty(),
            }],
        );
        assert!(bad.is_err());
        // x self-adjoint needs a real character value.
        let bad = Presentation::star_algebra(vec!["x".into()], vec![x], vec![Scalar::i()], vec![]);
        assert!(bad.is_err());
    }
}
