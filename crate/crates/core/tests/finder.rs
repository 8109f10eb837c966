mod common;

use std::collections::BTreeMap;

use common::NaiveModel;
use ddl_core::finder::{all_models, find_model, SearchSpec, SearchStatus};
use ddl_core::semantics::{truth_set, EvalRule};
use ddl_core::{parse, Formula, RelationProperty as P};

fn f(text: &str) -> Formula {
    parse(text).unwrap()
}

fn dex_targets() -> Vec<Formula> {
    vec![f("O(p / T)"), f("O(~p / T)"), f("<>T"), f("~O(q / T)")]
}

#[test]
fn dex_has_no_max_model_up_to_four() {
    let spec = SearchSpec::satisfy(dex_targets(), EvalRule::Max, &[], 4).with_iso_reject(true);
    let res = find_model(&spec).unwrap();
    assert_eq!(res.status, SearchStatus::UnsatUpToBound);
    assert_eq!(res.exhausted_up_to, 4);
    assert!(res.witness.is_none());
}

#[test]
fn dex_has_a_small_lewis_model() {
    let spec = SearchSpec::satisfy(dex_targets(), EvalRule::Lewis, &[], 3);
    let res = find_model(&spec).unwrap();
    let m = res.witness.expect("lewis model");
    let naive = NaiveModel::from_model(&m);
    for t in dex_targets() {
        assert!(naive.eval(&t, EvalRule::Lewis).iter().all(|&x| x), "{t}");
    }
}

#[test]
fn iso_rejection_does_not_change_verdicts() {
    let cases: Vec<(Vec<Formula>, EvalRule, Vec<P>)> = vec![
        (vec![f("P(A / A | B)"), f("O(~B / A | B)")], EvalRule::Max, vec![]),
        (vec![f("(A > B)"), f("(B > Ap)"), f("(Ap >= A)")], EvalRule::Max, vec![P::Transitive]),
        (vec![f("(A > B)"), f("(B > Ap)"), f("(Ap >= A)")], EvalRule::Opt, vec![]),
        (dex_targets(), EvalRule::Opt, vec![P::Reflexive]),
    ];
    for (targets, rule, props) in cases {
        let plain = find_model(&SearchSpec::satisfy(targets.clone(), rule, &props, 3)).unwrap();
        let iso = find_model(&SearchSpec::satisfy(targets.clone(), rule, &props, 3).with_iso_reject(true)).unwrap();
        assert_eq!(plain.status, iso.status);
        assert_eq!(plain.witness.map(|m| m.world_count()), iso.witness.map(|m| m.world_count()));
    }
}

/// Every model `all_models` returns satisfies the targets per the oracle, and
/// the count matches a brute-force enumeration.
#[test]
fn all_models_is_sound_and_complete_at_two_worlds() {
    let targets = vec![f("P(p / p | q)"), f("O(~q / p | q)")];
    let atoms = ["p", "q"];
    let spec = SearchSpec::satisfy(targets.clone(), EvalRule::Max, &[], 2)
        .with_sizes(2, 2)
        .with_atoms(atoms.iter().map(|a| a.to_string()).collect());
    let found = all_models(&spec).unwrap();
    for m in &found {
        let naive = NaiveModel::from_model(m);
        assert!(targets.iter().all(|t| naive.eval(t, EvalRule::Max).iter().all(|&x| x)));
    }
    let mut brute = 0;
    for code in 0u32..16 {
        for val in 0u32..16 {
            let geq = (0..2).map(|a| (0..2).map(|b| code >> (a * 2 + b) & 1 == 1).collect()).collect();
            let mut m = NaiveModel::frame(2, geq);
            m.val.insert("p".into(), vec![val & 1 != 0, val & 2 != 0]);
            m.val.insert("q".into(), vec![val & 4 != 0, val & 8 != 0]);
            if targets.iter().all(|t| m.eval(t, EvalRule::Max).iter().all(|&x| x)) {
                brute += 1;
            }
        }
    }
    assert_eq!(found.len(), brute);
}

#[test]
fn refutation_finds_a_falsifying_world() {
    let target = f("O(p / q) -> O(p / q & r)");
    let spec = SearchSpec::refute(vec![target.clone()], EvalRule::Max, &[], 3);
    let res = find_model(&spec).unwrap();
    let m = res.witness.expect("monotonicity fails");
    let set = truth_set(&target, &m, &BTreeMap::new(), EvalRule::Max).unwrap();
    assert_ne!(set, m.universe());
}

#[test]
fn forbidden_properties_are_respected() {
    let targets = vec![f("P(Ap / A | Ap)"), f("O(~Ap / Ap | B)"), f("O(~B / A | B)")];
    let spec = SearchSpec::satisfy(targets, EvalRule::Max, &[], 4).with_forbidden(&[P::Acyclic]).with_iso_reject(true);
    let m = find_model(&spec).unwrap().witness.expect("cyclic model");
    assert!(!NaiveModel::from_model(&m).acyclic());
}

#[test]
fn conditionals_are_absolute() {
    let mut rng = <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(7);
    for _ in 0..200 {
        let n = rand::Rng::random_range(&mut rng, 1..=3);
        let naive = NaiveModel::random(&mut rng, n, &["p", "q"]);
        let m = ddl_core::parse_model(&naive.to_text()).unwrap();
        for rule in EvalRule::ALL {
            for src in ["O(p / q)", "P(q / p | q)", "[]p", "(p > q)"] {
                let set = truth_set(&f(src), &m, &BTreeMap::new(), rule).unwrap();
                assert!(set.is_empty() || set == m.universe(), "{src}");
            }
        }
    }
}
