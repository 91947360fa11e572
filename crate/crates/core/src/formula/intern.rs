use std::collections::HashMap;

use super::{BasicFormula, Event, Formula};

/// Handle to a hash-consed formula inside a [`FormulaArena`]. Two handles
/// from the same arena are equal iff the formulas are structurally equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormulaId(u32);

impl FormulaId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One layer of a formula, with children referenced by id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Basic(BasicFormula),
    And(FormulaId, FormulaId),
    OrBF(BasicFormula, FormulaId),
    Box(Event, FormulaId),
    Diamond(Event, FormulaId),
    Invariant(FormulaId),
    Reach(BasicFormula),
    Dlf,
}

#[derive(Clone, Debug)]
pub struct FormulaArena {
    nodes: Vec<Node>,
    lookup: HashMap<Node, FormulaId>,
    tt: FormulaId,
}

impl Default for FormulaArena {
    fn default() -> Self {
        Self::new()
    }
}

impl FormulaArena {
    pub fn new() -> Self {
        let mut arena = FormulaArena {
            nodes: Vec::new(),
            lookup: HashMap::new(),
            tt: FormulaId(0),
        };
        arena.tt = arena.mk(Node::Basic(BasicFormula::True));
        arena
    }

    pub fn mk(&mut self, node: Node) -> FormulaId {
        if let Some(&id) = self.lookup.get(&node) {
            return id;
        }
        let id = FormulaId(u32::try_from(self.nodes.len()).expect("formula arena overflow"));
        self.nodes.push(node.clone());
        self.lookup.insert(node, id);
        id
    }

    pub fn intern(&mut self, f: &Formula) -> FormulaId {
        let node = match f {
            Formula::Basic(b) => Node::Basic(b.clone()),
            Formula::And(l, r) => {
                let (l, r) = (self.intern(l), self.intern(r));
                Node::And(l, r)
            }
            Formula::OrBF(b, g) => Node::OrBF(b.clone(), self.intern(g)),
            Formula::Box(e, g) => Node::Box(e.clone(), self.intern(g)),
            Formula::Diamond(e, g) => Node::Diamond(e.clone(), self.intern(g)),
            Formula::Invariant(g) => Node::Invariant(self.intern(g)),
            Formula::Reach(b) => Node::Reach(b.clone()),
            Formula::Dlf => Node::Dlf,
        };
        self.mk(node)
    }

    pub fn node(&self, id: FormulaId) -> &Node {
        &self.nodes[id.index()]
    }

    /// The formula `true`.
    pub fn tt(&self) -> FormulaId {
        self.tt
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn to_formula(&self, id: FormulaId) -> Formula {
        match self.node(id) {
            Node::Basic(b) => Formula::Basic(b.clone()),
            Node::And(l, r) => Formula::and(self.to_formula(*l), self.to_formula(*r)),
            Node::OrBF(b, g) => Formula::OrBF(b.clone(), Box::new(self.to_formula(*g))),
            Node::Box(e, g) => Formula::Box(e.clone(), Box::new(self.to_formula(*g))),
            Node::Diamond(e, g) => Formula::Diamond(e.clone(), Box::new(self.to_formula(*g))),
            Node::Invariant(g) => Formula::inv(self.to_formula(*g)),
            Node::Reach(b) => Formula::Reach(b.clone()),
            Node::Dlf => Formula::Dlf,
        }
    }
}
