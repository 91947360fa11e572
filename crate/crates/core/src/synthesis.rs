//! Controlled system synthesis over state/obligation pairs.
//!
//! The plant is unfolded into a product relation whose nodes pair a plant
//! state with the formula that still has to hold there. Arcs into nodes
//! whose obligation is not locally synthesizable are removed (controllable
//! arcs only) until nothing changes. Synthesis succeeds when every node
//! reachable from the root is synthesizable for its own obligation.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::formula::{eval_basic, format_formula, Formula, FormulaArena, FormulaId, Node};
use crate::lts::{EventId, KripkeLTS, ModelBuilder, StateId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductState {
    pub plant: StateId,
    pub obligation: FormulaId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductArc {
    pub source: NodeId,
    pub event: EventId,
    pub target: NodeId,
}

/// The product transition relation at some pruning iteration. Formula ids
/// refer to the arena of the [`Engine`] that built it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductRelation {
    nodes: Vec<ProductState>,
    arcs: BTreeSet<ProductArc>,
    root: NodeId,
    iteration: usize,
}

impl ProductRelation {
    pub fn nodes(&self) -> &[ProductState] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> ProductState {
        self.nodes[id.0]
    }

    pub fn arcs(&self) -> &BTreeSet<ProductArc> {
        &self.arcs
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn find(&self, plant: StateId, obligation: FormulaId) -> Option<NodeId> {
        self.nodes
            .iter()
            .position(|n| n.plant == plant && n.obligation == obligation)
            .map(NodeId)
    }

    fn outgoing(&self) -> Vec<Vec<(EventId, NodeId)>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for a in &self.arcs {
            out[a.source.0].push((a.event, a.target));
        }
        out
    }

    /// Nodes reachable from the root through current arcs, in breadth-first
    /// order starting with the root.
    pub fn reachable_from_root(&self) -> Vec<NodeId> {
        bfs(&self.outgoing(), self.root)
    }
}

fn bfs(out: &[Vec<(EventId, NodeId)>], from: NodeId) -> Vec<NodeId> {
    let mut seen = vec![false; out.len()];
    seen[from.0] = true;
    let mut order = vec![from];
    let mut queue = VecDeque::from([from]);
    while let Some(n) = queue.pop_front() {
        for &(_, t) in &out[n.0] {
            if !seen[t.0] {
                seen[t.0] = true;
                order.push(t);
                queue.push_back(t);
            }
        }
    }
    order
}

/// Read-only snapshot of a relation used while evaluating synthesizability.
struct View<'r> {
    rel: &'r ProductRelation,
    out: Vec<Vec<(EventId, NodeId)>>,
    syn: HashMap<(NodeId, FormulaId), bool>,
    reach: HashMap<NodeId, Vec<NodeId>>,
}

impl<'r> View<'r> {
    fn new(rel: &'r ProductRelation) -> Self {
        View {
            rel,
            out: rel.outgoing(),
            syn: HashMap::new(),
            reach: HashMap::new(),
        }
    }

    fn reachable(&mut self, from: NodeId) -> &[NodeId] {
        if !self.reach.contains_key(&from) {
            let r = bfs(&self.out, from);
            self.reach.insert(from, r);
        }
        &self.reach[&from]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthesisStats {
    /// Pruning passes that removed at least one arc.
    pub iterations: usize,
    pub arcs_initial: usize,
    pub arcs_final: usize,
    /// Nodes of the unfolded product relation.
    pub nodes: usize,
}

impl SynthesisStats {
    pub fn arcs_removed(&self) -> usize {
        self.arcs_initial - self.arcs_final
    }
}

/// A root-reachable product node that is not synthesizable for its own
/// obligation after pruning stabilized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailureWitness {
    pub plant: StateId,
    pub plant_name: String,
    pub obligation: Formula,
}

/// The synthesized model: root-reachable product nodes with plant labels
/// and the arcs that survived pruning. State 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlledSystem {
    model: KripkeLTS,
    plant_states: Vec<StateId>,
    obligations: Vec<Formula>,
}

impl ControlledSystem {
    pub fn model(&self) -> &KripkeLTS {
        &self.model
    }

    pub fn plant_state(&self, s: StateId) -> StateId {
        self.plant_states[s.0]
    }

    pub fn obligation(&self, s: StateId) -> &Formula {
        &self.obligations[s.0]
    }

    /// Model file text with one comment line per state giving its
    /// obligation.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut states = self.model.states();
        for line in self.model.serialize().lines() {
            if line.starts_with("state ") {
                let s = states.next().expect("one line per state");
                let _ = writeln!(
                    out,
                    "# obligation: {}",
                    format_formula(&self.obligations[s.0])
                );
            }
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success(ControlledSystem),
    Failure(FailureWitness),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisResult {
    pub outcome: Outcome,
    pub stats: SynthesisStats,
}

impl SynthesisResult {
    pub fn is_success(&self) -> bool {
        matches!(self.outcome, Outcome::Success(_))
    }

    pub fn controlled(&self) -> Option<&ControlledSystem> {
        match &self.outcome {
            Outcome::Success(c) => Some(c),
            Outcome::Failure(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&FailureWitness> {
        match &self.outcome {
            Outcome::Success(_) => None,
            Outcome::Failure(w) => Some(w),
        }
    }
}

/// Result of running pruning to its fixpoint.
#[derive(Clone, Debug)]
pub struct Fixpoint {
    pub arcs_initial: usize,
    pub relation: ProductRelation,
}

/// Synthesis state for one plant: the formula arena plus memo tables for
/// the structural relations and reductions.
pub struct Engine<'m> {
    model: &'m KripkeLTS,
    arena: FormulaArena,
    sub: HashMap<(FormulaId, FormulaId), bool>,
    part: HashMap<(FormulaId, FormulaId, StateId), bool>,
    reductions: HashMap<(FormulaId, StateId, EventId), Vec<FormulaId>>,
}

impl<'m> Engine<'m> {
    pub fn new(model: &'m KripkeLTS) -> Self {
        Engine {
            model,
            arena: FormulaArena::new(),
            sub: HashMap::new(),
            part: HashMap::new(),
            reductions: HashMap::new(),
        }
    }

    pub fn model(&self) -> &'m KripkeLTS {
        self.model
    }

    pub fn arena(&self) -> &FormulaArena {
        &self.arena
    }

    pub fn intern(&mut self, f: &Formula) -> FormulaId {
        self.arena.intern(f)
    }

    pub fn formula(&self, id: FormulaId) -> Formula {
        self.arena.to_formula(id)
    }

    fn holds_at(&self, b: &crate::formula::BasicFormula, x: StateId) -> bool {
        eval_basic(b, self.model.labels(x))
    }

    /// `f` is a sub-formula of `g`.
    pub fn is_sub(&mut self, f: FormulaId, g: FormulaId) -> bool {
        if f == g {
            return true;
        }
        if let Some(&v) = self.sub.get(&(f, g)) {
            return v;
        }
        let v = match *self.arena.node(g) {
            Node::And(l, r) => self.is_sub(f, l) || self.is_sub(f, r),
            Node::Invariant(h) => self.is_sub(f, h),
            _ => false,
        };
        self.sub.insert((f, g), v);
        v
    }

    /// `f` is a part of `g` in plant state `x`.
    pub fn is_part(&mut self, f: FormulaId, g: FormulaId, x: StateId) -> bool {
        if f == g {
            return true;
        }
        if let Some(&v) = self.part.get(&(f, g, x)) {
            return v;
        }
        let v = match self.arena.node(g).clone() {
            Node::And(l, r) => self.is_part(f, l, x) || self.is_part(f, r, x),
            Node::OrBF(b, h) => !self.holds_at(&b, x) && self.is_part(f, h, x),
            Node::Invariant(h) => self.is_part(f, h, x),
            _ => false,
        };
        self.part.insert((f, g, x), v);
        v
    }

    /// Obligations `f'` such that `(src, f) --e-->0 (dst, f')` for any
    /// plant step `src --e--> dst`. The result does not depend on `dst`.
    pub fn reduction_targets(&mut self, f: FormulaId, src: StateId, e: EventId) -> Vec<FormulaId> {
        if let Some(v) = self.reductions.get(&(f, src, e)) {
            return v.clone();
        }
        let tt = self.arena.tt();
        let mut out: Vec<FormulaId> = Vec::new();
        let push = |out: &mut Vec<FormulaId>, id: FormulaId| {
            if !out.contains(&id) {
                out.push(id);
            }
        };
        match self.arena.node(f).clone() {
            Node::Basic(_) | Node::Dlf => push(&mut out, tt),
            Node::And(l, r) => {
                let ls = self.reduction_targets(l, src, e);
                let rs = self.reduction_targets(r, src, e);
                for &lf in &ls {
                    for &rf in &rs {
                        let id = if self.is_sub(rf, lf) {
                            lf
                        } else {
                            self.arena.mk(Node::And(lf, rf))
                        };
                        push(&mut out, id);
                    }
                }
            }
            Node::OrBF(b, g) => {
                if self.holds_at(&b, src) {
                    push(&mut out, tt);
                }
                for id in self.reduction_targets(g, src, e) {
                    push(&mut out, id);
                }
            }
            Node::Box(ev, g) => {
                if ev.name() == self.model.event_name(e) {
                    push(&mut out, g);
                } else {
                    push(&mut out, tt);
                }
            }
            Node::Diamond(ev, g) => {
                if ev.name() == self.model.event_name(e) {
                    push(&mut out, g);
                }
                push(&mut out, tt);
            }
            Node::Invariant(g) => {
                for gr in self.reduction_targets(g, src, e) {
                    let id = if self.is_sub(gr, f) {
                        f
                    } else {
                        self.arena.mk(Node::And(f, gr))
                    };
                    push(&mut out, id);
                }
            }
            Node::Reach(_) => {
                push(&mut out, tt);
                push(&mut out, f);
            }
        }
        self.reductions.insert((f, src, e), out.clone());
        out
    }

    /// Unfolds the plant from `(initial, f)` into the starting product
    /// relation.
    pub fn expand_zero(&mut self, f: FormulaId) -> ProductRelation {
        let m = self.model;
        let root = ProductState {
            plant: m.initial(),
            obligation: f,
        };
        let mut nodes = vec![root];
        let mut index = HashMap::from([(root, NodeId(0))]);
        let mut arcs = BTreeSet::new();
        let mut queue = VecDeque::from([NodeId(0)]);
        while let Some(n) = queue.pop_front() {
            let ProductState { plant, obligation } = nodes[n.0];
            for &(e, target) in m.successors(plant) {
                for g in self.reduction_targets(obligation, plant, e) {
                    let next = ProductState {
                        plant: target,
                        obligation: g,
                    };
                    let id = *index.entry(next).or_insert_with(|| {
                        nodes.push(next);
                        queue.push_back(NodeId(nodes.len() - 1));
                        NodeId(nodes.len() - 1)
                    });
                    arcs.insert(ProductArc {
                        source: n,
                        event: e,
                        target: id,
                    });
                }
            }
        }
        ProductRelation {
            nodes,
            arcs,
            root: NodeId(0),
            iteration: 0,
        }
    }

    /// Whether `f` is synthesizable in node `p` with respect to the arcs of
    /// `r`.
    pub fn synthesizable(&mut self, r: &ProductRelation, p: NodeId, f: FormulaId) -> bool {
        let mut view = View::new(r);
        self.syn(&mut view, p, f)
    }

    fn syn(&mut self, view: &mut View<'_>, p: NodeId, f: FormulaId) -> bool {
        if let Some(&v) = view.syn.get(&(p, f)) {
            return v;
        }
        let x = view.rel.nodes[p.0].plant;
        let v = match self.arena.node(f).clone() {
            Node::Basic(b) => self.holds_at(&b, x),
            Node::And(l, r) => self.syn(view, p, l) && self.syn(view, p, r),
            Node::OrBF(b, g) => self.holds_at(&b, x) || self.syn(view, p, g),
            Node::Box(..) => true,
            Node::Diamond(ev, g) => {
                let steps: Vec<NodeId> = view.out[p.0]
                    .iter()
                    .filter(|(e, _)| self.model.event_name(*e) == ev.name())
                    .map(|&(_, t)| t)
                    .collect();
                steps.into_iter().any(|q| {
                    let target = view.rel.nodes[q.0];
                    self.syn(view, q, g) && self.is_part(g, target.obligation, target.plant)
                })
            }
            Node::Invariant(g) => self.syn(view, p, g),
            Node::Reach(b) => {
                let nodes = &view.rel.nodes;
                let plants: Vec<StateId> =
                    view.reachable(p).iter().map(|n| nodes[n.0].plant).collect();
                plants.into_iter().any(|y| self.holds_at(&b, y))
            }
            Node::Dlf => !view.out[p.0].is_empty(),
        };
        view.syn.insert((p, f), v);
        v
    }

    /// One pruning pass: keeps uncontrollable arcs, and controllable arcs
    /// whose target is synthesizable for its own obligation.
    pub fn prune_once(&mut self, r: &ProductRelation) -> ProductRelation {
        let mut view = View::new(r);
        let mut arcs = BTreeSet::new();
        for a in &r.arcs {
            let keep = self.model.is_uncontrollable(a.event) || {
                let target = r.nodes[a.target.0];
                self.syn(&mut view, a.target, target.obligation)
            };
            if keep {
                arcs.insert(*a);
            }
        }
        ProductRelation {
            nodes: r.nodes.clone(),
            arcs,
            root: r.root,
            iteration: r.iteration + 1,
        }
    }

    /// Unfolds and prunes until stable. The returned relation's iteration
    /// count is the number of passes that removed something.
    pub fn fixpoint(&mut self, f: FormulaId) -> Fixpoint {
        let mut rel = self.expand_zero(f);
        let arcs_initial = rel.arcs.len();
        loop {
            let next = self.prune_once(&rel);
            if next.arcs == rel.arcs {
                break;
            }
            rel = next;
        }
        Fixpoint {
            arcs_initial,
            relation: rel,
        }
    }

    /// First root-reachable node (breadth-first) not synthesizable for its
    /// own obligation, or `None` when the relation is complete.
    pub fn incomplete_at(&mut self, r: &ProductRelation) -> Option<NodeId> {
        let mut view = View::new(r);
        bfs(&view.out.clone(), r.root)
            .into_iter()
            .find(|&n| !self.syn(&mut view, n, r.nodes[n.0].obligation))
    }

    pub fn synthesize(&mut self, f: &Formula) -> SynthesisResult {
        let root = self.intern(f);
        let Fixpoint {
            arcs_initial,
            relation,
        } = self.fixpoint(root);
        let stats = SynthesisStats {
            iterations: relation.iteration,
            arcs_initial,
            arcs_final: relation.arcs.len(),
            nodes: relation.nodes.len(),
        };
        let outcome = match self.incomplete_at(&relation) {
            Some(n) => {
                let node = relation.node(n);
                Outcome::Failure(FailureWitness {
                    plant: node.plant,
                    plant_name: self.model.state_name(node.plant).to_string(),
                    obligation: self.formula(node.obligation),
                })
            }
            None => Outcome::Success(self.extract(&relation)),
        };
        SynthesisResult { outcome, stats }
    }

    /// The controlled system restricted to root-reachable nodes.
    pub fn extract(&self, r: &ProductRelation) -> ControlledSystem {
        let m = self.model;
        let order = r.reachable_from_root();
        let mut b = ModelBuilder::default();
        for e in m.events() {
            b.event(m.event_name(e), m.controllability(e))
                .expect("plant alphabet is valid");
        }
        let mut position = vec![None; r.nodes.len()];
        let mut plant_states = Vec::with_capacity(order.len());
        let mut obligations = Vec::with_capacity(order.len());
        for &n in &order {
            let node = r.nodes[n.0];
            let obligation = self.formula(node.obligation);
            let name = format!(
                "{}@{}",
                m.state_name(node.plant),
                obligation_hash(&obligation)
            );
            let id = b
                .state(&name, m.labels(node.plant).iter().cloned())
                .expect("product state names are unique");
            position[n.0] = Some(id);
            plant_states.push(node.plant);
            obligations.push(obligation);
        }
        for a in &r.arcs {
            if let (Some(s), Some(t)) = (position[a.source.0], position[a.target.0]) {
                b.transition(s, a.event, t).expect("arc inside the product");
            }
        }
        b.initial(StateId(0)).expect("root is the first state");
        ControlledSystem {
            model: b.build().expect("initial state set"),
            plant_states,
            obligations,
        }
    }
}

/// Stable short digest of an obligation's structure.
pub fn obligation_hash(f: &Formula) -> String {
    let digest = Sha256::digest(format!("{f:?}").as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs the full construction on plant `m` for requirement `f`.
pub fn synthesize(m: &KripkeLTS, f: &Formula) -> SynthesisResult {
    Engine::new(m).synthesize(f)
}

/// Reducts of `f` along the plant step `src --e--> dst`.
pub fn reduction_targets(
    f: &Formula,
    src: StateId,
    e: EventId,
    _dst: StateId,
    m: &KripkeLTS,
) -> BTreeSet<Formula> {
    let mut engine = Engine::new(m);
    let id = engine.intern(f);
    engine
        .reduction_targets(id, src, e)
        .into_iter()
        .map(|g| engine.formula(g))
        .collect()
}
