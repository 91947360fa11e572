#![allow(dead_code)]

use std::collections::BTreeSet;

use ctrlsynth::formula::{format_formula, parse_formula, BasicFormula, Formula};
use ctrlsynth::lts::{Controllability, KripkeLTS, StateId};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const PRINTER: &str = include_str!("../../fixtures/printer.klts");
pub const UNCONTROLLABLE: &str = include_str!("../../fixtures/uncontrollable.klts");
pub const DEADLOCK: &str = include_str!("../../fixtures/deadlock.klts");

pub const PROPS: [&str; 2] = ["p", "q"];
pub const CONTROLLABLE: [&str; 2] = ["a", "b"];
pub const UNCONTROLLABLE_EVENTS: [&str; 2] = ["u", "v"];
/// Formula events; `c` never occurs in generated models.
pub const FORMULA_EVENTS: [&str; 4] = ["a", "b", "u", "c"];

pub struct Corpus {
    pub seed: u64,
    pub models: usize,
    pub formulas_per_model: usize,
    pub max_states: usize,
    pub max_transitions: usize,
    pub max_depth: usize,
}

impl Corpus {
    pub fn standard() -> Self {
        Corpus {
            seed: 0x5eed_c0de,
            models: 500,
            formulas_per_model: 2,
            max_states: 4,
            max_transitions: 6,
            max_depth: 3,
        }
    }

    pub fn instances(&self) -> Vec<(KripkeLTS, Vec<Formula>)> {
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.models)
            .map(|_| {
                let m = random_model(&mut rng, self.max_states, self.max_transitions);
                let fs = (0..self.formulas_per_model)
                    .map(|_| random_formula(&mut rng, self.max_depth))
                    .collect();
                (m, fs)
            })
            .collect()
    }
}

pub fn random_model(rng: &mut ChaCha8Rng, max_states: usize, max_transitions: usize) -> KripkeLTS {
    let mut b = KripkeLTS::builder();
    let n = rng.gen_range(1..=max_states);
    let states: Vec<StateId> = (0..n)
        .map(|i| {
            let props: Vec<&str> = PROPS
                .iter()
                .copied()
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            b.state(&format!("s{i}"), props).unwrap()
        })
        .collect();
    let mut events = Vec::new();
    for e in CONTROLLABLE {
        events.push(b.event(e, Controllability::Controllable).unwrap());
    }
    for e in UNCONTROLLABLE_EVENTS.iter().take(rng.gen_range(0..=2)) {
        events.push(b.event(e, Controllability::Uncontrollable).unwrap());
    }
    for _ in 0..rng.gen_range(0..=max_transitions) {
        let s = *states.choose(rng).unwrap();
        let e = *events.choose(rng).unwrap();
        let t = *states.choose(rng).unwrap();
        b.transition(s, e, t).unwrap();
    }
    b.initial(states[0]).unwrap();
    b.build().unwrap()
}

pub fn random_basic(rng: &mut ChaCha8Rng, depth: usize) -> BasicFormula {
    let leaf = depth == 0 || rng.gen_bool(0.5);
    if leaf {
        return match rng.gen_range(0..6) {
            0 => BasicFormula::True,
            1 => BasicFormula::False,
            _ => BasicFormula::prop(*PROPS.choose(rng).unwrap()),
        };
    }
    match rng.gen_range(0..3) {
        0 => BasicFormula::not(random_basic(rng, depth - 1)),
        1 => BasicFormula::and(random_basic(rng, depth - 1), random_basic(rng, depth - 1)),
        _ => BasicFormula::or(random_basic(rng, depth - 1), random_basic(rng, depth - 1)),
    }
}

/// A random formula in parsed form of depth at most `depth`.
pub fn random_formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    let f = raw_formula(rng, depth);
    let f = parse_formula(&format_formula(&f)).expect("printed formulas parse");
    assert!(f.depth() <= depth);
    f
}

fn raw_formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..5) {
            0 => Formula::Reach(random_basic(rng, 1)),
            1 => Formula::Dlf,
            _ => Formula::Basic(random_basic(rng, 1)),
        };
    }
    let e = *FORMULA_EVENTS.choose(rng).unwrap();
    match rng.gen_range(0..5) {
        0 => Formula::and(raw_formula(rng, depth - 1), raw_formula(rng, depth - 1)),
        1 => Formula::or(random_basic(rng, 1), raw_formula(rng, depth - 1)),
        2 => Formula::always(e, raw_formula(rng, depth - 1)),
        3 => Formula::eventually(e, raw_formula(rng, depth - 1)),
        _ => Formula::inv(raw_formula(rng, depth - 1)),
    }
}

/// Generator for a seed drawn by proptest.
pub fn rng_from(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn arb_basic() -> impl Strategy<Value = BasicFormula> {
    let leaf = prop_oneof![
        Just(BasicFormula::True),
        Just(BasicFormula::False),
        prop::sample::select(&PROPS[..]).prop_map(BasicFormula::prop),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(BasicFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| BasicFormula::and(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| BasicFormula::or(l, r)),
        ]
    })
}

/// Arbitrary formulas, not necessarily in parsed form.
pub fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        arb_basic().prop_map(Formula::Basic),
        arb_basic().prop_map(Formula::Reach),
        Just(Formula::Dlf),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        let event = prop::sample::select(&FORMULA_EVENTS[..]);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (arb_basic(), inner.clone()).prop_map(|(b, f)| Formula::or(b, f)),
            (event.clone(), inner.clone()).prop_map(|(e, f)| Formula::always(e, f)),
            (event, inner.clone()).prop_map(|(e, f)| Formula::eventually(e, f)),
            inner.prop_map(Formula::inv),
        ]
    })
}

/// Transitions of `m` as name triples, for comparing models across files.
pub fn named_transitions(m: &KripkeLTS) -> BTreeSet<(String, String, String)> {
    m.transitions()
        .iter()
        .map(|t| {
            (
                m.state_name(t.source).to_string(),
                m.event_name(t.event).to_string(),
                m.state_name(t.target).to_string(),
            )
        })
        .collect()
}
