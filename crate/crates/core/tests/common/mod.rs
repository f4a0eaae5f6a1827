#![allow(dead_code)]

use nlk::catalog;
use nlk::presentation::{AlgebraElement, Presentation, Word};
use nlk::scenario::Scenario;
use nlk::Scalar;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn scenario(v: Value) -> Scenario {
    Scenario::from_json(&v.to_string()).expect("test scenario")
}

/// Every scenario in the catalog, labelled `id/role`.
pub fn catalog_scenarios() -> Vec<(String, Scenario)> {
    let mut out = Vec::new();
    for e in catalog::entries().unwrap() {
        for s in e.scenarios {
            out.push((format!("{}/{}", e.id, s.role), Scenario::from_file(s.scenario).unwrap()));
        }
    }
    out
}

pub fn catalog_slot(id: &str, role: &str) -> Scenario {
    let e = catalog::entry(id).unwrap();
    let s = e.scenarios.into_iter().find(|s| s.role == role).unwrap();
    Scenario::from_file(s.scenario).unwrap()
}

pub fn random_word(p: &Presentation, rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let letters = p.letters();
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| *letters.choose(rng).unwrap()).collect()
}

pub fn small_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::gauss(rng.gen_range(-2..=2), rng.gen_range(-2..=2))
}

/// `w₁ + c·w₂` for random words.
pub fn random_element(p: &Presentation, rng: &mut ChaCha8Rng, max_len: usize) -> AlgebraElement {
    let a = p.word_element(&random_word(p, rng, max_len)).unwrap();
    let b = p.word_element(&random_word(p, rng, max_len)).unwrap();
    a.add(&b.scale(&small_scalar(rng)))
}

pub fn inner(x: &Scalar, y: &Scalar) -> Scalar {
    &x.conj() * y
}

pub const GAMMA2: &str = "a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1";

fn tokens(w: &str) -> Vec<&str> {
    w.split_whitespace().collect()
}

/// A one-dimensional `Γ₂` scenario with `π(b₂) = ±1`.
pub fn gamma2(pi_b2: i64, [x1, y1, x2, y2]: [&str; 4]) -> Scenario {
    scenario(json!({
        "presentation": {"kind": "group", "generators": ["a1", "b1", "a2", "b2"], "relators": [tokens(GAMMA2)]},
        "representation": {"a1": [["1"]], "b1": [["1"]], "a2": [["1"]], "b2": [[pi_b2.to_string()]]},
        "cocycle": {"a1": [x1], "b1": [y1], "a2": [x2], "b2": [y2]},
    }))
}

pub fn z2(pi_a: &str, x: &str, y: &str) -> Scenario {
    scenario(json!({
        "presentation": {"kind": "group", "generators": ["a", "b"], "relators": [["a", "b", "a^-1", "b^-1"]]},
        "representation": {"a": [[pi_a]], "b": [["1"]]},
        "cocycle": {"a": [x], "b": [y]},
        "options": {
            "normal_form": {"kind": "abelian"},
            "ker_mu_cycles": [{"name": "c1", "terms": [
                {"coeff": "1", "left": [{"coeff": "1", "word": ["a^-1"]}, {"coeff": "-1", "word": []}],
                               "right": [{"coeff": "1", "word": ["b^-1"]}, {"coeff": "-1", "word": []}]},
                {"coeff": "-1", "left": [{"coeff": "1", "word": ["b^-1"]}, {"coeff": "-1", "word": []}],
                                "right": [{"coeff": "1", "word": ["a^-1"]}, {"coeff": "-1", "word": []}]}]}]
        }
    }))
}

/// `p2` on `C²` with `π(a) = π(b) = I` and `π(r) = ±I`.
pub fn p2(pi_r: i64, x: [&str; 2], y: [&str; 2], z: [&str; 2]) -> Scenario {
    let r = pi_r.to_string();
    scenario(json!({
        "presentation": {"kind": "group", "generators": ["a", "b", "r"],
            "relators": [["a", "b", "a^-1", "b^-1"], ["r", "r"], ["r", "a", "r", "a"], ["r", "b", "r", "b"]]},
        "representation": {"a": [["1", "0"], ["0", "1"]], "b": [["1", "0"], ["0", "1"]], "r": [[r, "0"], ["0", r]]},
        "cocycle": {"a": x, "b": y, "r": z},
        "options": {"normal_form": {"kind": "p2", "a": "a", "b": "b", "r": "r"}}
    }))
}
