//! Greatest simulation and partial bisimulation between two models.
//!
//! Both are computed by deletion: start from every label-equal pair and
//! remove pairs violating a transfer clause until nothing changes.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::lts::{EventId, KripkeLTS, StateId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("models declare different uncontrollable events: {left:?} vs {right:?}")]
    UncontrollableMismatch {
        left: BTreeSet<String>,
        right: BTreeSet<String>,
    },
}

/// A witness relation between the states of `left` and `right`.
#[derive(Clone, Debug)]
pub struct PairRelation<'a> {
    left: &'a KripkeLTS,
    right: &'a KripkeLTS,
    pairs: BTreeSet<(StateId, StateId)>,
}

impl<'a> PairRelation<'a> {
    pub fn new(
        left: &'a KripkeLTS,
        right: &'a KripkeLTS,
        pairs: BTreeSet<(StateId, StateId)>,
    ) -> Self {
        for &(l, r) in &pairs {
            assert!(
                left.contains_state(l) && right.contains_state(r),
                "pair outside the models"
            );
        }
        PairRelation { left, right, pairs }
    }

    pub fn left(&self) -> &'a KripkeLTS {
        self.left
    }

    pub fn right(&self) -> &'a KripkeLTS {
        self.right
    }

    pub fn pairs(&self) -> &BTreeSet<(StateId, StateId)> {
        &self.pairs
    }

    pub fn contains(&self, l: StateId, r: StateId) -> bool {
        self.pairs.contains(&(l, r))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Re-checks the simulation clauses on every pair, and that the initial
    /// pair is present.
    pub fn is_simulation(&self) -> bool {
        let map = EventMap::new(self.left, self.right);
        self.contains(self.left.initial(), self.right.initial())
            && self.pairs.iter().all(|&(l, r)| {
                self.left.labels(l) == self.right.labels(r)
                    && forward_ok(self.left, self.right, &map, &self.pairs, l, r)
            })
    }

    /// Like [`is_simulation`](Self::is_simulation), plus back-transfer of
    /// uncontrollable steps of the right model.
    pub fn is_partial_bisimulation(&self) -> bool {
        let map = EventMap::new(self.left, self.right);
        self.is_simulation()
            && self
                .pairs
                .iter()
                .all(|&(l, r)| backward_ok(self.left, self.right, &map, &self.pairs, l, r))
    }

    /// Relational composition: `(x, z)` whenever `(x, y)` is in `self` and
    /// `(y, z)` in `other`.
    pub fn compose<'b>(&self, other: &PairRelation<'b>) -> PairRelation<'b>
    where
        'a: 'b,
    {
        let pairs = self
            .pairs
            .iter()
            .flat_map(|&(x, y)| {
                other
                    .pairs
                    .range((y, StateId(0))..=(y, StateId(usize::MAX)))
                    .map(move |&(_, z)| (x, z))
            })
            .collect();
        PairRelation {
            left: self.left,
            right: other.right,
            pairs,
        }
    }
}

impl fmt::Display for PairRelation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(l, r) in &self.pairs {
            writeln!(
                f,
                "{} {}",
                self.left.state_name(l),
                self.right.state_name(r)
            )?;
        }
        Ok(())
    }
}

/// Translates event ids of the left model to the right model by name.
struct EventMap {
    to_right: Vec<Option<EventId>>,
    to_left: Vec<Option<EventId>>,
}

impl EventMap {
    fn new(left: &KripkeLTS, right: &KripkeLTS) -> Self {
        EventMap {
            to_right: left
                .events()
                .map(|e| right.event_by_name(left.event_name(e)))
                .collect(),
            to_left: right
                .events()
                .map(|e| left.event_by_name(right.event_name(e)))
                .collect(),
        }
    }
}

fn forward_ok(
    left: &KripkeLTS,
    right: &KripkeLTS,
    map: &EventMap,
    rel: &BTreeSet<(StateId, StateId)>,
    l: StateId,
    r: StateId,
) -> bool {
    left.successors(l)
        .iter()
        .all(|&(e, lt)| match map.to_right[e.0] {
            None => false,
            Some(re) => right
                .successors(r)
                .iter()
                .any(|&(f, rt)| f == re && rel.contains(&(lt, rt))),
        })
}

fn backward_ok(
    left: &KripkeLTS,
    right: &KripkeLTS,
    map: &EventMap,
    rel: &BTreeSet<(StateId, StateId)>,
    l: StateId,
    r: StateId,
) -> bool {
    right
        .successors(r)
        .iter()
        .filter(|(e, _)| right.is_uncontrollable(*e))
        .all(|&(e, rt)| match map.to_left[e.0] {
            None => false,
            Some(le) => left
                .successors(l)
                .iter()
                .any(|&(f, lt)| f == le && rel.contains(&(lt, rt))),
        })
}

fn greatest<'a>(
    left: &'a KripkeLTS,
    right: &'a KripkeLTS,
    back_transfer: bool,
) -> Option<PairRelation<'a>> {
    let map = EventMap::new(left, right);
    let mut rel: BTreeSet<(StateId, StateId)> = left
        .states()
        .flat_map(|l| right.states().map(move |r| (l, r)))
        .filter(|&(l, r)| left.labels(l) == right.labels(r))
        .collect();
    loop {
        let doomed: Vec<_> = rel
            .iter()
            .copied()
            .filter(|&(l, r)| {
                !forward_ok(left, right, &map, &rel, l, r)
                    || (back_transfer && !backward_ok(left, right, &map, &rel, l, r))
            })
            .collect();
        if doomed.is_empty() {
            break;
        }
        for p in doomed {
            rel.remove(&p);
        }
    }

    let root = (left.initial(), right.initial());
    if !rel.contains(&root) {
        return None;
    }
    // keep only pairs reachable from the initial pair through matched steps
    let mut kept = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some((l, r)) = queue.pop_front() {
        for &(e, lt) in left.successors(l) {
            let Some(re) = map.to_right[e.0] else {
                continue;
            };
            for &(f, rt) in right.successors(r) {
                if f == re && rel.contains(&(lt, rt)) && kept.insert((lt, rt)) {
                    queue.push_back((lt, rt));
                }
            }
        }
        if back_transfer {
            for &(e, rt) in right.successors(r) {
                if !right.is_uncontrollable(e) {
                    continue;
                }
                let Some(le) = map.to_left[e.0] else { continue };
                for &(f, lt) in left.successors(l) {
                    if f == le && rel.contains(&(lt, rt)) && kept.insert((lt, rt)) {
                        queue.push_back((lt, rt));
                    }
                }
            }
        }
    }
    Some(PairRelation {
        left,
        right,
        pairs: kept,
    })
}

/// The greatest simulation of `a` by `b`, or `None` when `a` is not
/// simulated by `b`.
pub fn greatest_simulation<'a>(a: &'a KripkeLTS, b: &'a KripkeLTS) -> Option<PairRelation<'a>> {
    greatest(a, b, false)
}

/// The greatest partial bisimulation of `a` by `b` (uncontrollable steps of
/// `b` must be matched by `a`). Both models must declare the same
/// uncontrollable events.
pub fn greatest_partial_bisimulation<'a>(
    a: &'a KripkeLTS,
    b: &'a KripkeLTS,
) -> Result<Option<PairRelation<'a>>, RelationError> {
    let (ua, ub) = (a.uncontrollable_names(), b.uncontrollable_names());
    if ua != ub {
        return Err(RelationError::UncontrollableMismatch {
            left: ua.into_iter().map(str::to_string).collect(),
            right: ub.into_iter().map(str::to_string).collect(),
        });
    }
    Ok(greatest(a, b, true))
}
