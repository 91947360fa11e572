//! Kripke structures with labeled transitions, plus the line-oriented
//! model file format.
//!
//! ```text
//! state <name> [<prop> <prop> ...]
//! init <name>
//! event <name> controllable|uncontrollable
//! trans <src> <event> <dst>
//! ```

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::{is_identifier, is_keyword};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Controllability {
    Controllable,
    Uncontrollable,
}

impl Controllability {
    fn keyword(self) -> &'static str {
        match self {
            Controllability::Controllable => "controllable",
            Controllability::Uncontrollable => "uncontrollable",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub source: StateId,
    pub event: EventId,
    pub target: StateId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown state `{name}`")]
    UnknownState { line: usize, name: String },
    #[error("line {line}: unknown event `{name}`")]
    UnknownEvent { line: usize, name: String },
    #[error("line {line}: event `{name}` declared both controllable and uncontrollable")]
    ConflictingEvent { line: usize, name: String },
    #[error("line {line}: state `{name}` declared twice")]
    DuplicateState { line: usize, name: String },
    #[error("line {line}: `init` given more than once")]
    DuplicateInit { line: usize },
    #[error("missing `init` declaration")]
    MissingInit,
    #[error("line {line}: invalid {what} name `{name}`")]
    InvalidName {
        line: usize,
        what: &'static str,
        name: String,
    },
    #[error("no state with index {0}")]
    NoSuchState(usize),
    #[error("no event with index {0}")]
    NoSuchEvent(usize),
}

/// A validated Kripke-LTS. States and events keep their declaration order;
/// the transition relation is a set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeLTS {
    states: Vec<String>,
    labels: Vec<BTreeSet<String>>,
    events: Vec<(String, Controllability)>,
    transitions: BTreeSet<Transition>,
    initial: StateId,
    state_index: HashMap<String, StateId>,
    event_index: HashMap<String, EventId>,
    outgoing: Vec<Vec<(EventId, StateId)>>,
}

impl KripkeLTS {
    pub fn builder() -> ModelBuilder {
        ModelBuilder::default()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len()).map(StateId)
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s.0]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn contains_state(&self, s: StateId) -> bool {
        s.0 < self.states.len()
    }

    pub fn labels(&self, s: StateId) -> &BTreeSet<String> {
        &self.labels[s.0]
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn events(&self) -> impl Iterator<Item = EventId> + '_ {
        (0..self.events.len()).map(EventId)
    }

    pub fn event_name(&self, e: EventId) -> &str {
        &self.events[e.0].0
    }

    pub fn event_by_name(&self, name: &str) -> Option<EventId> {
        self.event_index.get(name).copied()
    }

    pub fn controllability(&self, e: EventId) -> Controllability {
        self.events[e.0].1
    }

    pub fn is_uncontrollable(&self, e: EventId) -> bool {
        self.events[e.0].1 == Controllability::Uncontrollable
    }

    pub fn uncontrollable_names(&self) -> BTreeSet<&str> {
        self.events
            .iter()
            .filter(|(_, c)| *c == Controllability::Uncontrollable)
            .map(|(n, _)| n.as_str())
            .collect()
    }

    pub fn transitions(&self) -> &BTreeSet<Transition> {
        &self.transitions
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.len()
    }

    /// Outgoing `(event, target)` pairs of `s`, ordered.
    pub fn successors(&self, s: StateId) -> &[(EventId, StateId)] {
        &self.outgoing[s.0]
    }

    /// The same model with its transition relation replaced by `keep`.
    /// Every transition in `keep` must belong to this model's alphabet and
    /// state space.
    pub fn with_transitions(&self, keep: impl IntoIterator<Item = Transition>) -> KripkeLTS {
        let transitions: BTreeSet<Transition> = keep.into_iter().collect();
        for t in &transitions {
            assert!(
                self.contains_state(t.source)
                    && self.contains_state(t.target)
                    && t.event.0 < self.events.len(),
                "transition outside the model"
            );
        }
        let outgoing = index_outgoing(self.states.len(), &transitions);
        KripkeLTS {
            transitions,
            outgoing,
            ..self.clone()
        }
    }

    pub fn without_transition(&self, t: &Transition) -> KripkeLTS {
        self.with_transitions(self.transitions.iter().copied().filter(|u| u != t))
    }

    /// States reachable from `from` (including `from` itself).
    pub fn reachable(&self, from: StateId) -> Result<BTreeSet<StateId>, ModelError> {
        if !self.contains_state(from) {
            return Err(ModelError::NoSuchState(from.0));
        }
        let mut seen = BTreeSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(s) = queue.pop_front() {
            for &(_, t) in self.successors(s) {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        Ok(seen)
    }

    /// Renders the model in the file format read by [`parse_model`].
    pub fn serialize(&self) -> String {
        serialize_model(self)
    }
}

fn index_outgoing(n: usize, transitions: &BTreeSet<Transition>) -> Vec<Vec<(EventId, StateId)>> {
    let mut outgoing = vec![Vec::new(); n];
    for t in transitions {
        outgoing[t.source.0].push((t.event, t.target));
    }
    outgoing
}

/// Incremental construction of a [`KripkeLTS`].
#[derive(Debug, Default, Clone)]
pub struct ModelBuilder {
    states: Vec<String>,
    labels: Vec<BTreeSet<String>>,
    events: Vec<(String, Controllability)>,
    transitions: BTreeSet<Transition>,
    initial: Option<StateId>,
    state_index: HashMap<String, StateId>,
    event_index: HashMap<String, EventId>,
}

fn check_state_name(name: &str, line: usize) -> Result<(), ModelError> {
    let bad = name.is_empty()
        || name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '[' | ']' | '#'));
    if bad {
        return Err(ModelError::InvalidName {
            line,
            what: "state",
            name: name.to_string(),
        });
    }
    Ok(())
}

fn check_ident(name: &str, what: &'static str, line: usize) -> Result<(), ModelError> {
    if !is_identifier(name) || is_keyword(name) {
        return Err(ModelError::InvalidName {
            line,
            what,
            name: name.to_string(),
        });
    }
    Ok(())
}

impl ModelBuilder {
    pub fn state<I, S>(&mut self, name: &str, props: I) -> Result<StateId, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.state_at(name, props, 0)
    }

    fn state_at<I, S>(&mut self, name: &str, props: I, line: usize) -> Result<StateId, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        check_state_name(name, line)?;
        if self.state_index.contains_key(name) {
            return Err(ModelError::DuplicateState {
                line,
                name: name.to_string(),
            });
        }
        let mut set = BTreeSet::new();
        for p in props {
            let p = p.into();
            check_ident(&p, "property", line)?;
            set.insert(p);
        }
        let id = StateId(self.states.len());
        self.states.push(name.to_string());
        self.labels.push(set);
        self.state_index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Declares an event. Re-declaring with the same controllability is a
    /// no-op.
    pub fn event(&mut self, name: &str, kind: Controllability) -> Result<EventId, ModelError> {
        self.event_at(name, kind, 0)
    }

    fn event_at(
        &mut self,
        name: &str,
        kind: Controllability,
        line: usize,
    ) -> Result<EventId, ModelError> {
        check_ident(name, "event", line)?;
        if let Some(&id) = self.event_index.get(name) {
            if self.events[id.0].1 != kind {
                return Err(ModelError::ConflictingEvent {
                    line,
                    name: name.to_string(),
                });
            }
            return Ok(id);
        }
        let id = EventId(self.events.len());
        self.events.push((name.to_string(), kind));
        self.event_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn initial(&mut self, s: StateId) -> Result<&mut Self, ModelError> {
        if s.0 >= self.states.len() {
            return Err(ModelError::NoSuchState(s.0));
        }
        self.initial = Some(s);
        Ok(self)
    }

    pub fn transition(
        &mut self,
        source: StateId,
        event: EventId,
        target: StateId,
    ) -> Result<&mut Self, ModelError> {
        for s in [source, target] {
            if s.0 >= self.states.len() {
                return Err(ModelError::NoSuchState(s.0));
            }
        }
        if event.0 >= self.events.len() {
            return Err(ModelError::NoSuchEvent(event.0));
        }
        self.transitions.insert(Transition {
            source,
            event,
            target,
        });
        Ok(self)
    }

    pub fn build(self) -> Result<KripkeLTS, ModelError> {
        let initial = self.initial.ok_or(ModelError::MissingInit)?;
        let outgoing = index_outgoing(self.states.len(), &self.transitions);
        Ok(KripkeLTS {
            states: self.states,
            labels: self.labels,
            events: self.events,
            transitions: self.transitions,
            initial,
            state_index: self.state_index,
            event_index: self.event_index,
            outgoing,
        })
    }
}

fn parse_labels(rest: &str, line: usize) -> Result<Vec<String>, ModelError> {
    let rest = rest.trim();
    if rest.is_empty() {
        return Ok(Vec::new());
    }
    let inner = rest
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| ModelError::Syntax {
            line,
            message: "expected a label list `[prop ...]`".into(),
        })?;
    if inner.contains(['[', ']']) {
        return Err(ModelError::Syntax {
            line,
            message: "nested brackets in label list".into(),
        });
    }
    Ok(inner.split_whitespace().map(str::to_string).collect())
}

pub fn parse_model(text: &str) -> Result<KripkeLTS, ModelError> {
    let mut b = ModelBuilder::default();
    let mut init: Option<(usize, String)> = None;
    let mut pending: Vec<(usize, String, String, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content, ""));
        let rest = rest.trim();
        match keyword {
            "state" => {
                let (name, labels) = match rest.find(|c: char| c.is_whitespace() || c == '[') {
                    Some(i) => (&rest[..i], &rest[i..]),
                    None => (rest, ""),
                };
                if name.is_empty() {
                    return Err(ModelError::Syntax {
                        line,
                        message: "`state` needs a name".into(),
                    });
                }
                let props = parse_labels(labels, line)?;
                b.state_at(name, props, line)?;
            }
            "init" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                if words.len() != 1 {
                    return Err(ModelError::Syntax {
                        line,
                        message: "expected `init <state>`".into(),
                    });
                }
                if init.is_some() {
                    return Err(ModelError::DuplicateInit { line });
                }
                init = Some((line, words[0].to_string()));
            }
            "event" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                let kind = match words.as_slice() {
                    [_, "controllable"] => Controllability::Controllable,
                    [_, "uncontrollable"] => Controllability::Uncontrollable,
                    _ => {
                        return Err(ModelError::Syntax {
                            line,
                            message: "expected `event <name> controllable|uncontrollable`".into(),
                        })
                    }
                };
                b.event_at(words[0], kind, line)?;
            }
            "trans" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                let [src, ev, dst] = words.as_slice() else {
                    return Err(ModelError::Syntax {
                        line,
                        message: "expected `trans <src> <event> <dst>`".into(),
                    });
                };
                pending.push((line, src.to_string(), ev.to_string(), dst.to_string()));
            }
            other => {
                return Err(ModelError::Syntax {
                    line,
                    message: format!("unknown declaration `{other}`"),
                })
            }
        }
    }

    let state = |b: &ModelBuilder, line: usize, name: &str| {
        b.state_index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownState {
                line,
                name: name.to_string(),
            })
    };
    for (line, src, ev, dst) in pending {
        let s = state(&b, line, &src)?;
        let t = state(&b, line, &dst)?;
        let e = b
            .event_index
            .get(ev.as_str())
            .copied()
            .ok_or(ModelError::UnknownEvent { line, name: ev })?;
        b.transition(s, e, t)?;
    }
    let (line, name) = init.ok_or(ModelError::MissingInit)?;
    let s = state(&b, line, &name)?;
    b.initial(s)?;
    b.build()
}

pub fn serialize_model(m: &KripkeLTS) -> String {
    let mut out = String::new();
    for s in m.states() {
        let props: Vec<&str> = m.labels(s).iter().map(String::as_str).collect();
        let _ = writeln!(out, "state {} [{}]", m.state_name(s), props.join(" "));
    }
    let _ = writeln!(out, "init {}", m.state_name(m.initial()));
    for e in m.events() {
        let _ = writeln!(
            out,
            "event {} {}",
            m.event_name(e),
            m.controllability(e).keyword()
        );
    }
    for t in m.transitions() {
        let _ = writeln!(
            out,
            "trans {} {} {}",
            m.state_name(t.source),
            m.event_name(t.event),
            m.state_name(t.target)
        );
    }
    out
}

impl std::str::FromStr for KripkeLTS {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_model(s)
    }
}
