//! Randomised invariants over small exact inputs.

mod common;

use common::*;
use nlk::classify::{classify_scenario, diagram_check};
use nlk::decomposition::{attempt_lk, direct_sum, split, LkOutcome};
use nlk::functional::{check_certificate, solve_generating_functional};
use nlk::report::{self, Command, Feasibility, OracleVerdict, RunOptions};
use nlk::scenario::{parse_scenario_file, Scenario};
use nlk::{big_k, Scalar};
use proptest::prelude::*;
use serde_json::json;

fn gauss() -> impl Strategy<Value = Scalar> {
    (-2i64..=2, -2i64..=2).prop_map(|(a, b)| Scalar::gauss(a, b))
}

fn txt(x: &Scalar) -> String {
    x.to_string()
}

/// A `Z²` cocycle on `C²` with `π(a) = diag(1, σ)` and `π(b) = I`. For
/// `σ = -1` the second coordinate of `η(b)` must vanish.
fn z2_c2(sigma: i64, x: [Scalar; 2], y: [Scalar; 2]) -> Scenario {
    let y1 = if sigma == -1 { Scalar::zero() } else { y[1].clone() };
    scenario(json!({
        "presentation": {"kind": "group", "generators": ["a", "b"], "relators": [["a", "b", "a^-1", "b^-1"]]},
        "representation": {"a": [["1", "0"], ["0", sigma.to_string()]], "b": [["1", "0"], ["0", "1"]]},
        "cocycle": {"a": [txt(&x[0]), txt(&x[1])], "b": [txt(&y[0]), txt(&y1)]},
        "options": {"normal_form": {"kind": "abelian"}}
    }))
}

fn arb_z2() -> impl Strategy<Value = Scenario> {
    (prop_oneof![Just(1i64), Just(-1)], [gauss(), gauss()], [gauss(), gauss()])
        .prop_map(|(s, x, y)| z2_c2(s, x, y))
}

fn arb_p2() -> impl Strategy<Value = Scenario> {
    ([gauss(), gauss()], [gauss(), gauss()], [gauss(), gauss()]).prop_map(|(x, y, z)| {
        let t = |v: &[Scalar; 2]| [txt(&v[0]), txt(&v[1])];
        let (x, y, z) = (t(&x), t(&y), t(&z));
        p2(-1, [&x[0], &x[1]], [&y[0], &y[1]], [&z[0], &z[1]])
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn scenario_files_round_trip(sc in arb_z2()) {
        let text = serde_json::to_string_pretty(&sc.file).unwrap();
        prop_assert_eq!(parse_scenario_file(&text).unwrap(), sc.file);
    }

    #[test]
    fn infeasible_verdicts_carry_valid_certificates(sc in prop_oneof![arb_z2(), arb_p2()]) {
        let r = solve_generating_functional(&sc.cocycle().unwrap()).unwrap();
        match r.certificate() {
            Some(cert) => prop_assert!(check_certificate(&r.residuals, cert)),
            None => prop_assert!(r.psi().is_some()),
        }
    }

    /// On `Z²` a Gaussian cocycle has a functional iff `K(c1) = 0`.
    #[test]
    fn gaussian_z2_routes_agree(x in gauss(), y in gauss()) {
        let sc = z2("1", &txt(&x), &txt(&y));
        let c = sc.cocycle().unwrap();
        let k = big_k(&c, &sc.cycles[0].1).unwrap();
        let feasible = solve_generating_functional(&c).unwrap().is_feasible();
        prop_assert_eq!(k.is_zero(), feasible);
        prop_assert_eq!(k, &inner(&y, &x) - &inner(&x, &y));
    }

    #[test]
    fn oracle_agrees_with_solver(sc in prop_oneof![arb_z2(), arb_p2()]) {
        let opts = RunOptions { max_word_length: Some(4), ..Default::default() };
        let o = report::oracle(&sc, opts).unwrap().verdict;
        let s = report::solve(&sc).unwrap().core.verdict;
        prop_assert_eq!(o == OracleVerdict::Pass, s == Feasibility::Feasible);
    }

    #[test]
    fn split_parts_sum_to_the_cocycle(sc in prop_oneof![arb_z2(), arb_p2()]) {
        let c = sc.cocycle().unwrap();
        let sp = split(&c).unwrap();
        for (g, v) in c.generator_values().iter().enumerate() {
            prop_assert_eq!(&(&sp.eta_g_full[g] + &sp.eta_r_full[g]), v);
        }
        prop_assert_eq!(sp.gaussian_basis.len() + sp.remainder_basis.len(), c.dim());
    }

    /// A decomposition reassembles the functional it started from.
    #[test]
    fn lk_parts_sum_to_psi(sc in arb_z2()) {
        let c = sc.cocycle().unwrap();
        let Some(psi) = solve_generating_functional(&c).unwrap().psi().cloned() else {
            return Ok(());
        };
        if let LkOutcome::Decomposed(d) = attempt_lk(&c, &psi).unwrap() {
            let (g, r) = (d.psi_g.generator_values().unwrap(), d.psi_r.generator_values().unwrap());
            for (i, x) in psi.generator_values().unwrap().iter().enumerate() {
                prop_assert_eq!(&(&g[i] + &r[i]), x);
            }
        }
    }

    /// Relator residuals add under direct sums, so two feasible summands
    /// give a feasible sum.
    #[test]
    fn direct_sums_of_feasible_cocycles_are_feasible(a in arb_z2(), b in arb_z2()) {
        let (ca, cb) = (a.cocycle().unwrap(), b.cocycle().unwrap());
        let (ra, rb) = (solve_generating_functional(&ca).unwrap(), solve_generating_functional(&cb).unwrap());
        let sum = solve_generating_functional(&direct_sum(&ca, &cb).unwrap()).unwrap();
        prop_assert_eq!(&sum.residuals[0].k, &(&ra.residuals[0].k + &rb.residuals[0].k));
        if ra.is_feasible() && rb.is_feasible() {
            prop_assert!(sum.is_feasible());
        }
    }

    #[test]
    fn reports_are_deterministic_and_recheck(sc in prop_oneof![arb_z2(), arb_p2()]) {
        let opts = RunOptions { max_word_length: Some(3), ..Default::default() };
        for cmd in [Command::Validate, Command::Solve, Command::Decompose, Command::Verify, Command::Classify] {
            let r = report::run(cmd, &sc, opts).unwrap();
            let again = report::run(cmd, &sc, opts).unwrap();
            prop_assert_eq!(r.to_json(), again.to_json());
            prop_assert_eq!(report::parse_report(&r.to_json()).unwrap(), r.clone());
            prop_assert!(report::recheck(&r, opts).unwrap().confirmed);
        }
    }

    #[test]
    fn single_scenarios_never_break_the_diagram(sc in prop_oneof![arb_z2(), arb_p2()]) {
        let cl = classify_scenario(&sc, "random").unwrap();
        let check = diagram_check(&[("random".to_string(), cl)].into_iter().collect());
        prop_assert!(check.violations.is_empty());
    }
}
