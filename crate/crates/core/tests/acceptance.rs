//! One line per acceptance criterion. Criteria listed in `UNATTAINABLE`
//! must fail in exactly the analysed way; everything else must pass.

mod common;

use std::process::ExitCode;

use common::*;
use nlk::catalog;
use nlk::classify::{classify_scenario, Property, Verdict};
use nlk::cocycle::{big_l, derivation_space, hochschild_check_2cocycle};
use nlk::decomposition::split;
use nlk::functional::{check_certificate, psi_fold, solve_generating_functional, Identity};
use nlk::presentation::Word;
use nlk::report::{self, Feasibility, LkVerdict, OracleVerdict, PassFail, RunOptions};
use nlk::scenario::Scenario;
use nlk::{Error, Matrix, Scalar};
use rand::seq::SliceRandom;
use rand::Rng;

/// A criterion whose literal statement cannot hold, and the failure that
/// the analysis predicts.
struct Unattainable {
    criterion: usize,
    analysis: &'static str,
}

const UNATTAINABLE: [Unattainable; 2] = [
    Unattainable {
        criterion: 2,
        analysis: "x1 = x2 = 1 is not a cocycle: with π(b2) = -1 the relator evaluates to 2·x2",
    },
    Unattainable {
        criterion: 6,
        analysis: "ψ(x^(k+2)) = -⟨v, A^k v⟩ breaks the coboundary identity; the + sign passes",
    },
];

struct Outcome {
    pass: bool,
    detail: String,
    /// For criteria expected to fail: whether the failure matches the analysis.
    as_analysed: bool,
}

impl Outcome {
    fn pass(detail: impl Into<String>) -> Self {
        Outcome { pass: true, detail: detail.into(), as_analysed: false }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Outcome { pass: false, detail: detail.into(), as_analysed: false }
    }

    fn check(ok: bool, detail: impl Into<String>) -> Self {
        if ok { Self::pass(detail) } else { Self::fail(detail) }
    }
}

fn r(x: i64) -> Scalar {
    Scalar::from_int(x)
}

fn s(text: &str) -> Scalar {
    text.parse().unwrap()
}

fn verdict(sc: &Scenario) -> Feasibility {
    report::solve(sc).unwrap().core.verdict
}

fn criterion_1() -> Outcome {
    let complex = gamma2(1, ["1", "i", "0", "0"]);
    let real = gamma2(1, ["1", "1", "0", "0"]);
    let (vc, vr) = (verdict(&complex), verdict(&real));
    Outcome::check(
        vc == Feasibility::Infeasible && vr == Feasibility::Feasible,
        format!("η(b1) = i: {vc:?}; η(b1) = 1: {vr:?}"),
    )
}

fn criterion_2() -> Outcome {
    // Literal input.
    let literal = gamma2(-1, ["1", "0", "1", "0"]);
    let literal_result = report::solve(&literal);
    let literal_obstructed = matches!(
        &literal_result,
        Err(Error::CocycleObstructed { residual, .. }) if residual == "(2)"
    );

    // Grid: the relator residual is 2·x2, and on genuine cocycles the
    // printed condition must match the solver exactly.
    let xs1 = ["0", "1", "i", "1+i"];
    let ys1 = ["0", "1", "i", "2-i"];
    let xs2 = ["0", "1"];
    let ys2 = ["0", "1", "i"];
    let (mut cocycles, mut agree, mut residual_ok) = (0, true, true);
    for x1 in xs1 {
        for y1 in ys1 {
            for x2 in xs2 {
                for y2 in ys2 {
                    let sc = gamma2(-1, [x1, y1, x2, y2]);
                    let valid = report::validate(&sc).unwrap().valid;
                    residual_ok &= valid == s(x2).is_zero();
                    if !valid {
                        continue;
                    }
                    cocycles += 1;
                    let (x1, y1, x2, y2) = (s(x1), s(y1), s(x2), s(y2));
                    let lhs = &inner(&x1, &y1) - &inner(&y1, &x1);
                    let shifted = &(&y2 - &(&r(2) * &y1)) - &(&r(2) * &x1);
                    let rhs = &inner(&x2, &y2) - &inner(&shifted, &x2);
                    let printed = lhs == rhs;
                    agree &= printed == (verdict(&sc) == Feasibility::Feasible);
                }
            }
        }
    }
    let grid = residual_ok && agree && cocycles > 0;
    let detail = format!(
        "literal x1 = x2 = 1: {}; grid: cocycle iff x2 = 0 {}, printed condition matches solver on {cocycles} cocycles {}",
        match &literal_result {
            Ok(r) => format!("{:?}", r.core.verdict),
            Err(e) => e.to_string(),
        },
        if residual_ok { "holds" } else { "FAILS" },
        if agree { "holds" } else { "FAILS" },
    );
    let literal_infeasible = matches!(&literal_result, Ok(r) if r.core.verdict == Feasibility::Infeasible);
    Outcome {
        pass: literal_infeasible && grid,
        detail,
        as_analysed: literal_obstructed && grid,
    }
}

fn criterion_3() -> Outcome {
    let sc = catalog_slot("surface.gamma2.no_lk", "direct_sum");
    let sum = verdict(&sc);
    let d = report::decompose(&sc).unwrap();
    let parts_certified = d.parts.as_ref().is_some_and(|p| {
        [&p.gaussian, &p.remainder].iter().all(|part| {
            part.core.verdict == Feasibility::Infeasible
                && part
                    .core
                    .certificate
                    .as_ref()
                    .is_some_and(|c| check_certificate(&part.core.obstructions, c))
        })
    });
    let rechecked = report::recheck(&report::Report::Decompose(d.clone()), RunOptions::default())
        .unwrap()
        .confirmed;
    Outcome::check(
        sum == Feasibility::Feasible && d.verdict == LkVerdict::NoLk && parts_certified && rechecked,
        format!(
            "sum {sum:?}, decompose {:?}, part certificates {}, recheck {}",
            d.verdict,
            if parts_certified { "valid" } else { "INVALID" },
            if rechecked { "confirmed" } else { "REFUTED" }
        ),
    )
}

fn criterion_4() -> Outcome {
    let values = ["0", "1", "i", "1+i", "2-i"];
    let (mut n, mut ok) = (0, true);
    for x in values {
        for y in values {
            n += 1;
            let sc = z2("1", x, y);
            let c = sc.cocycle().unwrap();
            let feasible = verdict(&sc) == Feasibility::Feasible;
            let (xv, yv) = (s(x), s(y));
            let real = inner(&xv, &yv).is_real();
            let k = report::kernel_mu_entries(&sc, &c).unwrap()[0].k.clone().unwrap();
            let closed = &inner(&yv, &xv) - &inner(&xv, &yv);
            ok &= feasible == real && k == closed && k.is_zero() == feasible;
        }
    }
    Outcome::check(ok, format!("{n} grid pairs: feasible iff ⟨η(a),η(b)⟩ real, K(c1) = ⟨y,x⟩ - ⟨x,y⟩"))
}

fn criterion_5() -> Outcome {
    let p = catalog_slot("p2.derivations", "trivial").presentation;
    let dims: Vec<usize> = (1..=4).map(|d| derivation_space(&p, d).unwrap().len()).collect();
    let complex = verdict(&p2(-1, ["1", "1"], ["i", "0"], ["0", "1"]));
    let real = verdict(&p2(-1, ["1", "1"], ["1", "0"], ["0", "1"]));
    Outcome::check(
        dims == [0, 0, 0, 0] && complex == Feasibility::Infeasible && real == Feasibility::Feasible,
        format!("derivation dims {dims:?}; ⟨x,y⟩ = i: {complex:?}; ⟨x,y⟩ = 1: {real:?}"),
    )
}

fn criterion_6() -> Outcome {
    let opts = RunOptions { max_word_length: Some(8), ..Default::default() };
    let literal = report::verify(&catalog_slot("ac_not_h2z.definite", "opposite_sign"), opts).unwrap();
    let corrected = report::verify(&catalog_slot("ac_not_h2z.definite", "definite"), opts).unwrap();
    let literal_as_analysed = literal.verdict == PassFail::Fail
        && literal.failure.as_ref().is_some_and(|f| {
            f.identity == Identity::Coboundary && f.witnesses == [["x"], ["x"]] && f.residual == r(2)
        });

    let indefinite = catalog_slot("ac_not_h2z.star_algebra", "indefinite");
    let c = indefinite.cocycle().unwrap();
    let k = &report::kernel_mu_entries(&indefinite, &c).unwrap()[0];
    let h2z = classify_scenario(&indefinite, "indefinite").unwrap().verdicts().get(&Property::H2Z).copied();
    let class_ok = k.k == Some(r(1)) && k.mu_zero == Some(true) && h2z == Some(Verdict::WitnessedFalse);

    Outcome {
        pass: literal.verdict == PassFail::Pass && class_ok,
        detail: format!(
            "minus sign: verify {:?}{}; plus sign: verify {:?}; K(y*⊗y) = {}, μ = 0: {}, H2Z {}",
            literal.verdict,
            literal
                .failure
                .as_ref()
                .map(|f| format!(" ({:?} at {:?}, residual {})", f.identity, f.witnesses, f.residual))
                .unwrap_or_default(),
            corrected.verdict,
            k.k.as_ref().map_or("undefined".into(), |k| k.to_string()),
            k.mu_zero == Some(true),
            h2z.map_or("none".into(), |v| v.to_string()),
        ),
        as_analysed: literal_as_analysed && corrected.verdict == PassFail::Pass && class_ok,
    }
}

fn criterion_7() -> Outcome {
    let opts = RunOptions { max_word_length: Some(6), ..Default::default() };
    let mut checked = Vec::new();
    let mut ok = true;
    for id in ["zk.z2.gaussian", "p2.derivations", "p2.nongaussian"] {
        for slot in catalog::entry(id).unwrap().scenarios {
            let sc = Scenario::from_file(slot.scenario).unwrap();
            let o = report::oracle(&sc, opts).unwrap().verdict;
            let agree = (o == OracleVerdict::Pass) == (verdict(&sc) == Feasibility::Feasible);
            ok &= agree;
            checked.push(format!("{}/{}", id, slot.role));
        }
    }
    // Random Gaussian and rotation cocycles beyond the catalog.
    let mut g = rng(7);
    let vals = ["0", "1", "-1", "i", "1+i", "2"];
    for _ in 0..6 {
        let (x, y) = (*vals.choose(&mut g).unwrap(), *vals.choose(&mut g).unwrap());
        for sc in [z2("1", x, y), p2(-1, [x, "0"], [y, "1"], ["1", x])] {
            let o = report::oracle(&sc, RunOptions { max_word_length: Some(4), ..opts }).unwrap().verdict;
            ok &= (o == OracleVerdict::Pass) == (verdict(&sc) == Feasibility::Feasible);
        }
    }
    Outcome::check(ok, format!("oracle to length 6 agrees with the solver on {} catalog scenarios and 12 random ones", checked.len()))
}

fn criterion_8() -> Outcome {
    let mut g = rng(8);
    let mut failures = Vec::new();
    let mut entries = 0;
    for (label, sc) in catalog_scenarios() {
        let Ok(c) = sc.cocycle() else { continue };
        entries += 1;
        let p = c.presentation().clone();
        let rep = c.representation().clone();
        let eta = |w: &Word| c.eval_element(&p.word_element(w).unwrap());

        for _ in 0..1000 {
            let (u, v) = (random_word(&p, &mut g, 5), random_word(&p, &mut g, 5));
            let lhs = eta(&u.concat(&v));
            let rhs = &rep.word_image(&u).mul_vec(&eta(&v)) + &eta(&u).scale(&p.character_word(&v));
            if lhs != rhs {
                failures.push(format!("{label}: cocycle identity at {} ⊗ {}", p.fmt_word(&u), p.fmt_word(&v)));
                break;
            }
        }

        let triples: Vec<_> = (0..1000)
            .map(|_| [0, 1, 2].map(|_| random_element(&p, &mut g, 3)))
            .collect();
        if !hochschild_check_2cocycle(&big_l(&c), &triples).unwrap().passed() {
            failures.push(format!("{label}: ∂L(η) ≠ 0"));
        }

        if rep.is_definite() {
            let sp = split(&c).unwrap();
            let n = rep.dim();
            let id = Matrix::identity(n);
            let mul = |a: &Matrix, b: &Matrix| a.checked_mul(b).unwrap();
            let form = rep.form();
            let invariant = rep
                .generator_images()
                .iter()
                .all(|m| mul(&sp.p_r, m) == mul(m, &sp.p_r));
            let proj = mul(&sp.p_g, &sp.p_g) == sp.p_g
                && mul(&sp.p_r, &sp.p_r) == sp.p_r
                && mul(&sp.p_g, &sp.p_r).is_zero()
                && &sp.p_g + &sp.p_r == id
                && form.is_self_adjoint(&sp.p_g)
                && form.is_self_adjoint(&sp.p_r)
                && invariant;
            if !proj {
                failures.push(format!("{label}: projector identities"));
            }
            for _ in 0..1000 {
                let (u, v) = (random_word(&p, &mut g, 4), random_word(&p, &mut g, 4));
                let pg = |w: &Word| sp.p_g.mul_vec(&eta(w));
                let lhs = pg(&u.concat(&v));
                let rhs = &pg(&v).scale(&p.character_word(&u)) + &pg(&u).scale(&p.character_word(&v));
                if lhs != rhs {
                    failures.push(format!("{label}: η_G is not a derivation"));
                    break;
                }
            }
        }

        if p.is_group() && rep.is_definite() {
            if let Some(f) = solve_generating_functional(&c).unwrap().psi().cloned() {
                for _ in 0..200 {
                    let (x, y) = (random_word(&p, &mut g, 4), random_word(&p, &mut g, 4));
                    let mut rel = p.relators().choose(&mut g).unwrap().clone();
                    if g.gen_bool(0.5) {
                        rel = rel.inverse();
                    }
                    let with = x.concat(&rel).concat(&y);
                    let without = x.concat(&y);
                    if psi_fold(&f, &c, &with).unwrap() != psi_fold(&f, &c, &without).unwrap()
                        || c.eval(&with) != c.eval(&without)
                    {
                        failures.push(format!("{label}: fold insertion"));
                        break;
                    }
                }
            }
        }
    }
    Outcome::check(
        failures.is_empty(),
        if failures.is_empty() {
            format!("all invariant suites hold on {entries} catalog scenarios")
        } else {
            failures.join("; ")
        },
    )
}

fn criterion_9() -> Outcome {
    let summary = catalog::run_all(RunOptions::default()).unwrap();
    Outcome::check(
        summary.passed(),
        format!(
            "{} entries, {} mismatches, diagram {}",
            summary.entries.len(),
            summary.mismatches,
            if summary.diagram.passed() { "consistent" } else { "INCONSISTENT" }
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(usize, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut unexpected = Vec::new();
    for (n, run) in criteria {
        let o = run();
        let expected_red = UNATTAINABLE.iter().find(|u| u.criterion == n);
        println!("criterion {n}: {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        match expected_red {
            None if !o.pass => unexpected.push(format!("criterion {n} failed")),
            Some(_) if o.pass => unexpected.push(format!("criterion {n} passed but is listed as unattainable")),
            Some(u) if !o.as_analysed => {
                unexpected.push(format!("criterion {n} failed differently than analysed ({})", u.analysis))
            }
            Some(u) => println!("  unattainable as stated: {}", u.analysis),
            None => {}
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        for u in unexpected {
            eprintln!("{u}");
        }
        ExitCode::FAILURE
    }
}
