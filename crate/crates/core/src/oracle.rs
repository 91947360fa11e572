//! Brute-force reference implementations.
//!
//! Everything here works directly on formula trees and plain collections,
//! without interning or memo tables, so it can serve as an independent check
//! of the engine in [`crate::synthesis`] and the checker in
//! [`crate::semantics`].

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::{eval_basic, is_part_of, is_sub_formula, Formula};
use crate::lts::{EventId, KripkeLTS, StateId, Transition};
use crate::relations::{greatest_partial_bisimulation, greatest_simulation};
use crate::semantics::satisfies;
use crate::synthesis::{Engine, SynthesisStats};

pub const DEFAULT_SWEEP_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("model has {transitions} transitions, sweep bound is {bound}")]
    BoundExceeded { transitions: usize, bound: usize },
}

fn check_bound(m: &KripkeLTS, bound: usize) -> Result<(), OracleError> {
    let transitions = m.num_transitions();
    if transitions > bound || transitions >= 64 {
        return Err(OracleError::BoundExceeded { transitions, bound });
    }
    Ok(())
}

/// Yields every model obtained by keeping a subset of the base model's
/// transitions, ordered by the bitmask of kept transitions.
pub struct SubModelIterator<'a> {
    base: &'a KripkeLTS,
    transitions: Vec<Transition>,
    next: u64,
    end: u64,
}

impl Iterator for SubModelIterator<'_> {
    type Item = KripkeLTS;

    fn next(&mut self) -> Option<KripkeLTS> {
        if self.next >= self.end {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        let keep = self
            .transitions
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, t)| *t);
        Some(self.base.with_transitions(keep))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

pub fn enumerate_submodels(
    m: &KripkeLTS,
    bound: usize,
) -> Result<SubModelIterator<'_>, OracleError> {
    check_bound(m, bound)?;
    Ok(SubModelIterator {
        base: m,
        transitions: m.transitions().iter().copied().collect(),
        next: 0,
        end: 1u64 << m.num_transitions(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Maximality {
    /// Every sub-model satisfying the formula is simulated; carries the
    /// number of such sub-models.
    Pass {
        admissible: usize,
    },
    Counterexample(Box<KripkeLTS>),
}

/// Sweeps the transition-subset sub-models of `m`: every one that is
/// simulated by `m` and satisfies `f` must also be simulated by `s`.
pub fn check_maximality(
    m: &KripkeLTS,
    f: &Formula,
    s: &KripkeLTS,
    bound: usize,
) -> Result<Maximality, OracleError> {
    let mut admissible = 0;
    for k in enumerate_submodels(m, bound)? {
        if greatest_simulation(&k, m).is_none()
            || !satisfies(&k, k.initial(), f).expect("initial state")
        {
            continue;
        }
        admissible += 1;
        if greatest_simulation(&k, s).is_none() {
            return Ok(Maximality::Counterexample(Box::new(k)));
        }
    }
    Ok(Maximality::Pass { admissible })
}

/// Sub-models that satisfy `f` and keep every uncontrollable behavior of
/// `m` (partial bisimulation). Used as evidence when synthesis fails.
pub fn admissible_submodels(
    m: &KripkeLTS,
    f: &Formula,
    bound: usize,
) -> Result<Vec<KripkeLTS>, OracleError> {
    let mut out = Vec::new();
    for k in enumerate_submodels(m, bound)? {
        let related = greatest_partial_bisimulation(&k, m)
            .expect("sub-models share the alphabet")
            .is_some();
        if related && satisfies(&k, k.initial(), f).expect("initial state") {
            out.push(k);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// slow satisfaction

/// Every state on some path from `s`, found by enumerating simple paths.
fn states_on_paths(m: &KripkeLTS, s: StateId) -> BTreeSet<StateId> {
    fn walk(m: &KripkeLTS, path: &mut Vec<StateId>, found: &mut BTreeSet<StateId>) {
        let here = *path.last().expect("non-empty path");
        found.insert(here);
        for t in m.transitions() {
            if t.source == here && !path.contains(&t.target) {
                path.push(t.target);
                walk(m, path, found);
                path.pop();
            }
        }
    }
    let mut found = BTreeSet::new();
    walk(m, &mut vec![s], &mut found);
    found
}

/// Direct recursive reading of the satisfaction rules.
pub fn slow_satisfies(m: &KripkeLTS, s: StateId, f: &Formula) -> bool {
    let steps = |e: &crate::formula::Event| {
        m.transitions()
            .iter()
            .filter(move |t| t.source == s && m.event_name(t.event) == e.name())
            .map(|t| t.target)
            .collect::<Vec<_>>()
    };
    match f {
        Formula::Basic(b) => eval_basic(b, m.labels(s)),
        Formula::And(l, r) => slow_satisfies(m, s, l) && slow_satisfies(m, s, r),
        Formula::OrBF(b, g) => eval_basic(b, m.labels(s)) || slow_satisfies(m, s, g),
        Formula::Box(e, g) => steps(e).into_iter().all(|t| slow_satisfies(m, t, g)),
        Formula::Diamond(e, g) => steps(e).into_iter().any(|t| slow_satisfies(m, t, g)),
        Formula::Invariant(g) => states_on_paths(m, s)
            .into_iter()
            .all(|t| slow_satisfies(m, t, g)),
        Formula::Reach(b) => states_on_paths(m, s)
            .into_iter()
            .any(|t| eval_basic(b, m.labels(t))),
        Formula::Dlf => m.transitions().iter().any(|t| t.source == s),
    }
}

// ---------------------------------------------------------------------------
// slow synthesis

pub type SlowNode = (StateId, Formula);
pub type SlowArc = (SlowNode, EventId, SlowNode);

/// Reducts of `f` along a step of event `e` leaving `src`.
pub fn slow_reductions(f: &Formula, src: StateId, e: EventId, m: &KripkeLTS) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    let mut add = |g: Formula| {
        if !out.contains(&g) {
            out.push(g);
        }
    };
    let event = m.event_name(e);
    match f {
        Formula::Basic(_) | Formula::Dlf => add(Formula::tt()),
        Formula::And(l, r) => {
            for lr in slow_reductions(l, src, e, m) {
                for rr in slow_reductions(r, src, e, m) {
                    if is_sub_formula(&rr, &lr) {
                        add(lr.clone());
                    } else {
                        add(Formula::and(lr.clone(), rr));
                    }
                }
            }
        }
        Formula::OrBF(b, g) => {
            if eval_basic(b, m.labels(src)) {
                add(Formula::tt());
            }
            for gr in slow_reductions(g, src, e, m) {
                add(gr);
            }
        }
        Formula::Box(ev, g) => {
            if ev.name() == event {
                add((**g).clone());
            } else {
                add(Formula::tt());
            }
        }
        Formula::Diamond(ev, g) => {
            if ev.name() == event {
                add((**g).clone());
            }
            add(Formula::tt());
        }
        Formula::Invariant(g) => {
            for gr in slow_reductions(g, src, e, m) {
                if is_sub_formula(&gr, f) {
                    add(f.clone());
                } else {
                    add(Formula::and(f.clone(), gr));
                }
            }
        }
        Formula::Reach(_) => {
            add(Formula::tt());
            add(f.clone());
        }
    }
    out
}

/// Starting product relation, computed as a plain closure: keep sweeping
/// all known nodes until no new arc appears.
pub fn slow_expand(m: &KripkeLTS, f: &Formula) -> (BTreeSet<SlowNode>, BTreeSet<SlowArc>) {
    let mut nodes: BTreeSet<SlowNode> = BTreeSet::from([(m.initial(), f.clone())]);
    let mut arcs: BTreeSet<SlowArc> = BTreeSet::new();
    loop {
        let mut grew = false;
        for (x, g) in nodes.clone() {
            for t in m.transitions().iter().filter(|t| t.source == x) {
                for gr in slow_reductions(&g, x, t.event, m) {
                    let target = (t.target, gr);
                    grew |= nodes.insert(target.clone());
                    grew |= arcs.insert(((x, g.clone()), t.event, target));
                }
            }
        }
        if !grew {
            return (nodes, arcs);
        }
    }
}

fn slow_reachable(arcs: &BTreeSet<SlowArc>, from: &SlowNode) -> BTreeSet<SlowNode> {
    let mut seen = BTreeSet::from([from.clone()]);
    loop {
        let before = seen.len();
        for (src, _, dst) in arcs {
            if seen.contains(src) {
                seen.insert(dst.clone());
            }
        }
        if seen.len() == before {
            return seen;
        }
    }
}

/// Synthesizability of `f` at node `p`, recomputed from the arc set.
pub fn slow_synthesizable(
    m: &KripkeLTS,
    arcs: &BTreeSet<SlowArc>,
    p: &SlowNode,
    f: &Formula,
) -> bool {
    let x = p.0;
    match f {
        Formula::Basic(b) => eval_basic(b, m.labels(x)),
        Formula::And(l, r) => {
            slow_synthesizable(m, arcs, p, l) && slow_synthesizable(m, arcs, p, r)
        }
        Formula::OrBF(b, g) => eval_basic(b, m.labels(x)) || slow_synthesizable(m, arcs, p, g),
        Formula::Box(..) => true,
        Formula::Diamond(ev, g) => arcs.iter().any(|(src, e, dst)| {
            src == p
                && m.event_name(*e) == ev.name()
                && slow_synthesizable(m, arcs, dst, g)
                && is_part_of(g, &dst.1, m, dst.0)
        }),
        Formula::Invariant(g) => slow_synthesizable(m, arcs, p, g),
        Formula::Reach(b) => slow_reachable(arcs, p)
            .iter()
            .any(|(y, _)| eval_basic(b, m.labels(*y))),
        Formula::Dlf => arcs.iter().any(|(src, _, _)| src == p),
    }
}

/// Outcome of the reference construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlowSynthesis {
    pub initial_arcs: BTreeSet<SlowArc>,
    pub final_arcs: BTreeSet<SlowArc>,
    pub passes: usize,
    pub complete: bool,
}

/// Expand, then prune round by round with no caching, then test
/// completeness over root-reachable nodes.
pub fn slow_synthesize(m: &KripkeLTS, f: &Formula) -> SlowSynthesis {
    let (_, initial_arcs) = slow_expand(m, f);
    let mut arcs = initial_arcs.clone();
    let mut passes = 0;
    loop {
        let next: BTreeSet<SlowArc> = arcs
            .iter()
            .filter(|(_, e, dst)| {
                m.is_uncontrollable(*e) || slow_synthesizable(m, &arcs, dst, &dst.1)
            })
            .cloned()
            .collect();
        if next == arcs {
            break;
        }
        arcs = next;
        passes += 1;
    }
    let root = (m.initial(), f.clone());
    let complete = slow_reachable(&arcs, &root)
        .iter()
        .all(|n| slow_synthesizable(m, &arcs, n, &n.1));
    SlowSynthesis {
        initial_arcs,
        final_arcs: arcs,
        passes,
        complete,
    }
}

// ---------------------------------------------------------------------------
// verification report

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
}

impl CheckStatus {
    fn of(ok: bool) -> Self {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }

    fn word(self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub name: &'static str,
    pub status: CheckStatus,
    /// Informational lines do not count towards [`VerifyReport::all_passed`].
    pub informational: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub synthesized: bool,
    pub stats: SynthesisStats,
    pub checks: Vec<CheckLine>,
    pub submodels_swept: usize,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| c.informational || c.status == CheckStatus::Pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckLine> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = if self.synthesized {
            "SUCCESS"
        } else {
            "FAILURE"
        };
        let _ = writeln!(out, "{:<24}{}", "verdict", verdict);
        for c in &self.checks {
            let status = if c.informational {
                format!("{} (informational)", c.status.word())
            } else {
                c.status.word().to_string()
            };
            if c.detail.is_empty() {
                let _ = writeln!(out, "{:<24}{}", c.name, status);
            } else {
                let _ = writeln!(out, "{:<24}{:<24}{}", c.name, status, c.detail);
            }
        }
        let _ = writeln!(out, "{:<24}{}", "submodels_swept", self.submodels_swept);
        let _ = writeln!(
            out,
            "note: maximality and admissibility are checked over transition-subset sub-models only"
        );
        out
    }

    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let verdict = if self.synthesized {
            "success"
        } else {
            "failure"
        };
        let _ = writeln!(out, "verdict={verdict}");
        let s = &self.stats;
        let _ = writeln!(out, "iterations={}", s.iterations);
        let _ = writeln!(out, "arcs_initial={}", s.arcs_initial);
        let _ = writeln!(out, "arcs_final={}", s.arcs_final);
        let _ = writeln!(out, "nodes={}", s.nodes);
        for c in &self.checks {
            let _ = writeln!(out, "{}={}", c.name, c.status.word().to_ascii_lowercase());
        }
        let _ = writeln!(out, "submodels_swept={}", self.submodels_swept);
        let _ = writeln!(out, "all_passed={}", self.all_passed());
        out
    }
}

fn line(name: &'static str, ok: bool, detail: impl Into<String>) -> CheckLine {
    CheckLine {
        name,
        status: CheckStatus::of(ok),
        informational: false,
        detail: detail.into(),
    }
}

/// Synthesizes and then checks the result against the four synthesis
/// properties (validity, simulation, controllability, maximality). On
/// failure, sweeps for admissible sub-models instead.
pub fn verify_all(m: &KripkeLTS, f: &Formula, bound: usize) -> Result<VerifyReport, OracleError> {
    check_bound(m, bound)?;
    let swept = 1usize << m.num_transitions();
    let mut engine = Engine::new(m);
    let result = engine.synthesize(f);
    let mut checks = Vec::new();
    match result.controlled() {
        Some(c) => {
            let s = c.model();
            checks.push(line(
                "validity",
                satisfies(s, s.initial(), f).expect("root"),
                "",
            ));
            checks.push(line("simulation", greatest_simulation(s, m).is_some(), ""));
            let pbis = greatest_partial_bisimulation(s, m).expect("same alphabet");
            checks.push(line("controllability", pbis.is_some(), ""));
            let max = check_maximality(m, f, s, bound)?;
            let detail = match &max {
                Maximality::Pass { admissible } => {
                    format!("{admissible} satisfying sub-models simulated")
                }
                Maximality::Counterexample(k) => format!(
                    "sub-model with {} transitions not simulated",
                    k.num_transitions()
                ),
            };
            checks.push(line(
                "maximality",
                matches!(max, Maximality::Pass { .. }),
                detail,
            ));
        }
        None => {
            let admissible = admissible_submodels(m, f, bound)?;
            checks.push(line(
                "no_admissible_submodel",
                admissible.is_empty(),
                format!("{} admissible sub-models found", admissible.len()),
            ));
            // informational: maximality of the incomplete final relation
            let root = engine.intern(f);
            let fix = engine.fixpoint(root);
            let s = engine.extract(&fix.relation);
            let max = check_maximality(m, f, s.model(), bound)?;
            checks.push(CheckLine {
                name: "maximality_final_relation",
                status: CheckStatus::of(matches!(max, Maximality::Pass { .. })),
                informational: true,
                detail: String::new(),
            });
        }
    }
    Ok(VerifyReport {
        synthesized: result.is_success(),
        stats: result.stats,
        checks,
        submodels_swept: swept,
    })
}
