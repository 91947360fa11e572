mod common;

use common::{random_model, rng_from};
use ctrlsynth::relations::{greatest_partial_bisimulation, greatest_simulation};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reflexive(seed in any::<u64>()) {
        let m = random_model(&mut rng_from(seed), 4, 6);
        let sim = greatest_simulation(&m, &m).unwrap();
        prop_assert!(sim.is_simulation());
        for s in m.reachable(m.initial()).unwrap() {
            prop_assert!(sim.contains(s, s));
        }
        let pb = greatest_partial_bisimulation(&m, &m).unwrap().unwrap();
        prop_assert!(pb.is_partial_bisimulation());
    }

    #[test]
    fn submodels_partial_bisimulation_implies_simulation(seed in any::<u64>(), mask in any::<u64>()) {
        let m = random_model(&mut rng_from(seed), 4, 6);
        let keep = m.transitions().iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, t)| *t);
        let k = m.with_transitions(keep);
        let sim = greatest_simulation(&k, &m);
        prop_assert!(sim.as_ref().is_some_and(|r| r.is_simulation()));
        if let Some(pb) = greatest_partial_bisimulation(&k, &m).unwrap() {
            prop_assert!(pb.is_partial_bisimulation());
            prop_assert!(pb.is_simulation());
            prop_assert!(sim.is_some());
        }
    }

    #[test]
    fn unrelated_pairs_across_random_models(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_model(&mut rng_from(s1), 3, 5);
        let b = random_model(&mut rng_from(s2), 3, 5);
        if let Some(r) = greatest_simulation(&a, &b) {
            prop_assert!(r.is_simulation());
        }
        if let Ok(Some(r)) = greatest_partial_bisimulation(&a, &b) {
            prop_assert!(r.is_partial_bisimulation());
            prop_assert!(greatest_simulation(&a, &b).is_some());
        }
    }

    #[test]
    fn composition_is_transitive(seed in any::<u64>(), m1 in any::<u64>(), m2 in any::<u64>()) {
        let top = random_model(&mut rng_from(seed), 4, 6);
        let all: Vec<_> = top.transitions().iter().copied().collect();
        let mid = top.with_transitions(all.iter().enumerate().filter(|(i, _)| m1 & (1 << i) != 0).map(|(_, t)| *t));
        let low = mid.with_transitions(all.iter().enumerate().filter(|(i, _)| m1 & m2 & (1 << i) != 0).map(|(_, t)| *t));
        let r1 = greatest_simulation(&low, &mid).unwrap();
        let r2 = greatest_simulation(&mid, &top).unwrap();
        prop_assert!(r1.compose(&r2).is_simulation());
        if let (Some(p1), Some(p2)) = (
            greatest_partial_bisimulation(&low, &mid).unwrap(),
            greatest_partial_bisimulation(&mid, &top).unwrap(),
        ) {
            prop_assert!(p1.compose(&p2).is_partial_bisimulation());
        }
    }
}
