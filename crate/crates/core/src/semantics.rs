//! Satisfaction of requirement formulas on finite models.

use std::collections::HashMap;

use crate::formula::{eval_basic, Formula, FormulaArena, FormulaId, Node};
use crate::lts::{KripkeLTS, ModelError, StateId};

/// Evaluates formulas against one model. Satisfaction sets are cached per
/// interned sub-formula, so repeated queries share work.
pub struct Checker<'m> {
    model: &'m KripkeLTS,
    arena: FormulaArena,
    reach: Vec<Vec<StateId>>,
    sat: HashMap<FormulaId, Vec<bool>>,
}

impl<'m> Checker<'m> {
    pub fn new(model: &'m KripkeLTS) -> Self {
        let reach = model
            .states()
            .map(|s| {
                model
                    .reachable(s)
                    .expect("state of this model")
                    .into_iter()
                    .collect()
            })
            .collect();
        Checker {
            model,
            arena: FormulaArena::new(),
            reach,
            sat: HashMap::new(),
        }
    }

    pub fn model(&self) -> &'m KripkeLTS {
        self.model
    }

    pub fn holds(&mut self, s: StateId, f: &Formula) -> Result<bool, ModelError> {
        if !self.model.contains_state(s) {
            return Err(ModelError::NoSuchState(s.0));
        }
        let id = self.arena.intern(f);
        Ok(self.sat_set(id)[s.0])
    }

    /// All states satisfying `f`, as a membership vector indexed by state.
    pub fn satisfying(&mut self, f: &Formula) -> Vec<bool> {
        let id = self.arena.intern(f);
        self.sat_set(id).to_vec()
    }

    /// For `inv(g)` failing at `s`, the first reachable state (in state
    /// order) where `g` does not hold.
    pub fn invariant_violation(&mut self, s: StateId, g: &Formula) -> Option<StateId> {
        let id = self.arena.intern(g);
        let sat = self.sat_set(id).to_vec();
        self.reach[s.0].iter().copied().find(|t| !sat[t.0])
    }

    fn sat_set(&mut self, id: FormulaId) -> &[bool] {
        if !self.sat.contains_key(&id) {
            let computed = self.compute(id);
            self.sat.insert(id, computed);
        }
        &self.sat[&id]
    }

    fn compute(&mut self, id: FormulaId) -> Vec<bool> {
        let m = self.model;
        let states = m.states();
        match self.arena.node(id).clone() {
            Node::Basic(b) => states.map(|s| eval_basic(&b, m.labels(s))).collect(),
            Node::And(l, r) => {
                let l = self.sat_set(l).to_vec();
                let r = self.sat_set(r);
                l.iter().zip(r).map(|(a, b)| *a && *b).collect()
            }
            Node::OrBF(b, g) => {
                let g = self.sat_set(g);
                m.states()
                    .map(|s| eval_basic(&b, m.labels(s)) || g[s.0])
                    .collect()
            }
            Node::Box(ev, g) => {
                let g = self.sat_set(g);
                m.states()
                    .map(|s| {
                        m.successors(s)
                            .iter()
                            .filter(|(e, _)| m.event_name(*e) == ev.name())
                            .all(|(_, t)| g[t.0])
                    })
                    .collect()
            }
            Node::Diamond(ev, g) => {
                let g = self.sat_set(g);
                m.states()
                    .map(|s| {
                        m.successors(s)
                            .iter()
                            .any(|(e, t)| m.event_name(*e) == ev.name() && g[t.0])
                    })
                    .collect()
            }
            Node::Invariant(g) => {
                let g = self.sat_set(g).to_vec();
                self.reach
                    .iter()
                    .map(|r| r.iter().all(|t| g[t.0]))
                    .collect()
            }
            Node::Reach(b) => self
                .reach
                .iter()
                .map(|r| r.iter().any(|t| eval_basic(&b, m.labels(*t))))
                .collect(),
            Node::Dlf => states.map(|s| !m.successors(s).is_empty()).collect(),
        }
    }
}

/// Decides whether state `s` of `m` satisfies `f`.
pub fn satisfies(m: &KripkeLTS, s: StateId, f: &Formula) -> Result<bool, ModelError> {
    Checker::new(m).holds(s, f)
}
