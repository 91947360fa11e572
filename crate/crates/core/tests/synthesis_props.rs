mod common;

use std::collections::BTreeSet;

use common::{random_formula, random_model, rng_from};
use ctrlsynth::formula::parse_formula;
use ctrlsynth::lts::parse_model;
use ctrlsynth::oracle::{
    check_maximality, slow_expand, slow_synthesize, Maximality, SlowArc, DEFAULT_SWEEP_BOUND,
};
use ctrlsynth::relations::{greatest_partial_bisimulation, greatest_simulation};
use ctrlsynth::semantics::satisfies;
use ctrlsynth::synthesis::{Engine, ProductRelation};
use ctrlsynth::KripkeLTS;
use proptest::prelude::*;

fn slow_arcs(engine: &Engine, r: &ProductRelation) -> BTreeSet<SlowArc> {
    r.arcs()
        .iter()
        .map(|a| {
            let (s, t) = (r.node(a.source), r.node(a.target));
            (
                (s.plant, engine.formula(s.obligation)),
                a.event,
                (t.plant, engine.formula(t.obligation)),
            )
        })
        .collect()
}

fn printer() -> KripkeLTS {
    parse_model(common::PRINTER).unwrap()
}

#[test]
fn printer_unfolding_has_six_nodes() {
    let m = printer();
    let f = parse_formula("inv([refill] green)").unwrap();
    let (nodes, arcs) = slow_expand(&m, &f);
    assert_eq!(nodes.len(), 6);
    assert_eq!(arcs.len(), 10);
    let mut engine = Engine::new(&m);
    let root = engine.intern(&f);
    let r = engine.expand_zero(root);
    assert_eq!(r.nodes().len(), 6);
    assert_eq!(slow_arcs(&engine, &r), arcs);
}

#[test]
fn printer_first_pass_removes_refill_self_loops() {
    let m = printer();
    let f = parse_formula("inv([refill] green)").unwrap();
    let mut engine = Engine::new(&m);
    let root = engine.intern(&f);
    let r0 = engine.expand_zero(root);
    let r1 = engine.prune_once(&r0);
    let removed: Vec<_> = r0.arcs().difference(r1.arcs()).copied().collect();
    assert_eq!(removed.len(), 4);
    let p0 = m.state_by_name("p0").unwrap();
    let refill = m.event_by_name("refill").unwrap();
    let green = parse_formula("green").unwrap();
    for a in &removed {
        let (s, t) = (r0.node(a.source), r0.node(a.target));
        assert_eq!((s.plant, a.event, t.plant), (p0, refill, p0));
        // every removed arc leads to a node obliged to be green at a red state
        assert!(ctrlsynth::formula::is_sub_formula(
            &green,
            &engine.formula(t.obligation)
        ));
    }
    let r2 = engine.prune_once(&r1);
    assert_eq!(r2.arcs(), r1.arcs());
    let result = engine.synthesize(&f);
    assert_eq!(result.stats.iterations, 1);
    assert_eq!(
        (
            result.stats.arcs_initial,
            result.stats.arcs_final,
            result.stats.nodes
        ),
        (10, 6, 6)
    );
}

#[test]
fn printer_result_passes_every_oracle() {
    let m = printer();
    let f = parse_formula("inv([refill] green)").unwrap();
    let res = ctrlsynth::synthesize(&m, &f);
    let s = res.controlled().unwrap().model();
    assert!(satisfies(s, s.initial(), &f).unwrap());
    assert!(greatest_simulation(s, &m).is_some());
    assert!(greatest_partial_bisimulation(s, &m).unwrap().is_some());
    assert!(matches!(
        check_maximality(&m, &f, s, DEFAULT_SWEEP_BOUND).unwrap(),
        Maximality::Pass { .. }
    ));
}

#[test]
fn over_pruned_result_is_caught_by_maximality() {
    let m = printer();
    let f = parse_formula("inv([refill] green)").unwrap();
    let res = ctrlsynth::synthesize(&m, &f);
    let s = res.controlled().unwrap().model().clone();
    let refill_arc = *s
        .transitions()
        .iter()
        .find(|t| s.event_name(t.event) == "refill" && t.source == s.initial())
        .unwrap();
    let pruned = s.without_transition(&refill_arc);
    assert!(matches!(
        check_maximality(&m, &f, &pruned, DEFAULT_SWEEP_BOUND).unwrap(),
        Maximality::Counterexample(_)
    ));
}

#[test]
fn single_loop_with_true_is_maximal() {
    let m = parse_model("state s0\ninit s0\nevent a controllable\ntrans s0 a s0\n").unwrap();
    let res = ctrlsynth::synthesize(&m, &parse_formula("true").unwrap());
    let s = res.controlled().unwrap().model();
    assert_eq!(
        check_maximality(&m, &parse_formula("true").unwrap(), s, DEFAULT_SWEEP_BOUND).unwrap(),
        Maximality::Pass { admissible: 2 }
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engine_matches_slow_construction(seed in any::<u64>()) {
        let mut rng = rng_from(seed);
        let m = random_model(&mut rng, 4, 6);
        let f = random_formula(&mut rng, 3);
        let mut engine = Engine::new(&m);
        let root = engine.intern(&f);
        let r0 = engine.expand_zero(root);
        let fix = engine.fixpoint(root);
        let slow = slow_synthesize(&m, &f);
        prop_assert_eq!(slow_arcs(&engine, &r0), slow.initial_arcs.clone());
        prop_assert_eq!(slow_arcs(&engine, &fix.relation), slow.final_arcs.clone());
        prop_assert_eq!(fix.relation.iteration(), slow.passes);
        let verdict = engine.incomplete_at(&fix.relation).is_none();
        prop_assert_eq!(verdict, slow.complete);
    }

    #[test]
    fn pruning_is_monotone_and_terminates(seed in any::<u64>()) {
        let mut rng = rng_from(seed);
        let m = random_model(&mut rng, 4, 6);
        let f = random_formula(&mut rng, 3);
        let mut engine = Engine::new(&m);
        let root = engine.intern(&f);
        let mut r = engine.expand_zero(root);
        let initial = r.arcs().len();
        let mut passes = 0;
        loop {
            let next = engine.prune_once(&r);
            prop_assert!(next.arcs().is_subset(r.arcs()));
            for a in r.arcs().difference(next.arcs()) {
                prop_assert!(!m.is_uncontrollable(a.event));
            }
            if next.arcs() == r.arcs() {
                break;
            }
            passes += 1;
            prop_assert!(passes <= initial);
            r = next;
        }
    }

    #[test]
    fn successful_results_satisfy_the_four_properties(seed in any::<u64>()) {
        let mut rng = rng_from(seed);
        let m = random_model(&mut rng, 4, 6);
        let f = random_formula(&mut rng, 3);
        let res = ctrlsynth::synthesize(&m, &f);
        prop_assert!(res.stats.iterations <= res.stats.arcs_initial);
        if let Some(c) = res.controlled() {
            let s = c.model();
            prop_assert!(satisfies(s, s.initial(), &f).unwrap());
            prop_assert!(greatest_simulation(s, &m).is_some());
            prop_assert!(greatest_partial_bisimulation(s, &m).unwrap().is_some());
            let max = check_maximality(&m, &f, s, DEFAULT_SWEEP_BOUND).unwrap();
            prop_assert!(matches!(max, Maximality::Pass { .. }), "maximality counterexample");
            let back = parse_model(&c.to_text()).unwrap();
            prop_assert_eq!(&back, s);
        }
    }
}
