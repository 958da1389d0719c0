//! Randomized agreement between the engine and a naive recursive
//! evaluator, plus algebraic laws of the operators on random models.

mod common;

use std::collections::BTreeSet;

use eskmc_core::{
    holds, truth_set, truth_set_with, AgentId, EvalOptions, Formula, Group, Model, SkillId, Skills,
    WorldId,
};

use common::{naive_truth_set, random_formula, random_model, rng, Vocab};

#[test]
fn engine_matches_the_naive_evaluator_without_quantifiers() {
    let vocab = Vocab::small();
    let mut r = rng(0xABC0);
    for case in 0..400 {
        let m = random_model(&mut r, &vocab, 4);
        let f = random_formula(&mut r, &vocab, 5, &mut 0);
        let fast: BTreeSet<WorldId> = truth_set(&m, &f).into_worlds();
        let slow = naive_truth_set(&m, &f);
        assert_eq!(fast, slow, "case {case}: {f} on\n{}", m.to_json());
    }
}

#[test]
fn engine_matches_the_naive_evaluator_with_one_quantifier() {
    let vocab = Vocab::small();
    let mut r = rng(0xABC1);
    for case in 0..150 {
        let m = random_model(&mut r, &vocab, 4);
        let f = random_formula(&mut r, &vocab, 4, &mut 1);
        let fast: BTreeSet<WorldId> = truth_set(&m, &f).into_worlds();
        let slow = naive_truth_set(&m, &f);
        assert_eq!(fast, slow, "case {case}: {f} on\n{}", m.to_json());
    }
}

#[test]
fn engine_matches_the_naive_evaluator_with_nested_quantifiers() {
    let vocab = Vocab::small();
    let mut r = rng(0xABC2);
    for case in 0..40 {
        let m = random_model(&mut r, &vocab, 3);
        let f = random_formula(&mut r, &vocab, 4, &mut 2);
        let fast: BTreeSet<WorldId> = truth_set(&m, &f).into_worlds();
        let slow = naive_truth_set(&m, &f);
        assert_eq!(fast, slow, "case {case}: {f} on\n{}", m.to_json());
    }
}

#[test]
fn mutual_knowledge_is_the_intersection_of_individual_knowledge() {
    let vocab = Vocab::small();
    let mut r = rng(0xABC3);
    for _ in 0..200 {
        let m = random_model(&mut r, &vocab, 4);
        let f = random_formula(&mut r, &vocab, 3, &mut 0);
        let group = Group::new(vocab.agents.clone()).unwrap();
        let everyone: BTreeSet<WorldId> =
            truth_set(&m, &Formula::mutual(group.clone(), f.clone())).into_worlds();
        let mut crossed: Option<BTreeSet<WorldId>> = None;
        for a in group.iter() {
            let one = truth_set(&m, &Formula::knows(a.clone(), f.clone())).into_worlds();
            crossed = Some(match crossed {
                None => one,
                Some(acc) => acc.intersection(&one).cloned().collect(),
            });
        }
        assert_eq!(everyone, crossed.unwrap(), "{f}");
    }
}

#[test]
fn singleton_groups_collapse_to_individual_knowledge() {
    let vocab = Vocab::small();
    let mut r = rng(0xABC4);
    for _ in 0..200 {
        let m = random_model(&mut r, &vocab, 4);
        let f = random_formula(&mut r, &vocab, 3, &mut 0);
        let a = vocab.agents[0].clone();
        let solo = Group::new([a.clone()]).unwrap();
        let plain = truth_set(&m, &Formula::knows(a, f.clone()));
        for wrap in [
            Formula::mutual(solo.clone(), f.clone()),
            Formula::distributed(solo.clone(), f.clone()),
            Formula::field(solo.clone(), f.clone()),
        ] {
            assert_eq!(truth_set(&m, &wrap), plain, "{wrap}");
        }
    }
}

#[test]
fn knowledge_strength_orders_the_group_operators() {
    // Common implies mutual; field implies mutual implies distributed
    // (pooled skills narrow accessibility, shared skills widen it).
    let vocab = Vocab::small();
    let mut r = rng(0xABC5);
    for _ in 0..200 {
        let m = random_model(&mut r, &vocab, 4);
        let f = random_formula(&mut r, &vocab, 3, &mut 0);
        let g = || Group::new(vocab.agents.clone()).unwrap();
        let commonly: BTreeSet<WorldId> =
            truth_set(&m, &Formula::common(g(), f.clone())).into_worlds();
        let mutually: BTreeSet<WorldId> =
            truth_set(&m, &Formula::mutual(g(), f.clone())).into_worlds();
        let pooled: BTreeSet<WorldId> =
            truth_set(&m, &Formula::distributed(g(), f.clone())).into_worlds();
        let shared: BTreeSet<WorldId> =
            truth_set(&m, &Formula::field(g(), f.clone())).into_worlds();
        assert!(commonly.is_subset(&mutually), "{f}");
        assert!(shared.is_subset(&mutually), "{f}");
        assert!(mutually.is_subset(&pooled), "{f}");
    }
}

#[test]
fn capability_updates_are_idempotent() {
    let vocab = Vocab::small();
    let mut r = rng(0xABC6);
    for _ in 0..150 {
        let m = random_model(&mut r, &vocab, 4);
        let f = random_formula(&mut r, &vocab, 3, &mut 0);
        let parsed_pairs = [
            ("(+{s1,s2})_a", "(+{s1,s2})_a (+{s1,s2})_a"),
            ("(-{s2})_b", "(-{s2})_b (-{s2})_b"),
            ("(={s1,s3})_c", "(={s1,s3})_c (={s1,s3})_c"),
            ("(==b)_a", "(==b)_a (==b)_a"),
        ];
        for (once, twice) in parsed_pairs {
            let apply_once: Formula = format!("{once} ({f})").parse().unwrap();
            let apply_twice: Formula = format!("{twice} ({f})").parse().unwrap();
            assert_eq!(
                truth_set(&m, &apply_once),
                truth_set(&m, &apply_twice),
                "{once}"
            );
        }
    }
}

#[test]
fn spectator_capabilities_do_not_matter() {
    // Skills of agents the formula never mentions cannot change its truth
    // set, whether present, absent, or bizarre.
    let vocab = Vocab::small();
    let spectator = AgentId::new("zz").unwrap();
    let mut r = rng(0xABC7);
    for _ in 0..150 {
        let m = random_model(&mut r, &vocab, 4);
        let f = random_formula(&mut r, &vocab, 4, &mut 1);
        assert!(!f.agents().contains(&spectator));

        let mut loud = Skills::new();
        loud.insert(SkillId::new("s1").unwrap());
        loud.insert(SkillId::new("odd_one").unwrap());
        let with_spectator = Model::new(
            m.worlds().iter().cloned(),
            m.edges()
                .map(|((w, u), s)| (w.clone(), u.clone(), s.clone())),
            m.capable_agents()
                .map(|(a, s)| (a.clone(), s.clone()))
                .chain([(spectator.clone(), loud.clone())]),
            m.worlds()
                .iter()
                .map(|w| (w.clone(), m.atoms_at(w).unwrap().clone())),
        )
        .unwrap();

        assert_eq!(truth_set(&m, &f), truth_set(&with_spectator, &f), "{f}");
    }
}

#[test]
fn widening_the_quantifier_pool_changes_nothing() {
    let vocab = Vocab::small();
    let mut r = rng(0xABC8);
    for _ in 0..100 {
        let m = random_model(&mut r, &vocab, 3);
        let f = random_formula(&mut r, &vocab, 4, &mut 2);
        let baseline = truth_set(&m, &f);
        for extra in [1, 2] {
            let widened = truth_set_with(&m, &f, &EvalOptions { extra_fresh: extra });
            assert_eq!(baseline, widened, "{f} with {extra} extra fresh skills");
        }
    }
}

#[test]
fn demo_fixture_matches_the_generated_model_byte_for_byte() {
    let golden = include_str!("fixtures/demo_model.json");
    assert_eq!(golden, Model::demo().to_json());
    let reloaded = Model::from_json(golden).unwrap();
    assert_eq!(reloaded, Model::demo());
}

#[test]
fn holds_agrees_with_truth_set_membership() {
    let vocab = Vocab::small();
    let mut r = rng(0xABC9);
    for _ in 0..100 {
        let m = random_model(&mut r, &vocab, 4);
        let f = random_formula(&mut r, &vocab, 4, &mut 0);
        let set = truth_set(&m, &f);
        for w in m.worlds() {
            assert_eq!(holds(&m, w, &f).unwrap(), set.contains(w), "{f} at {w}");
        }
    }
}
