//! The requirement logic: state-based formulas, modal requirement formulas,
//! their concrete syntax, and the structural relations (sub-formula, part)
//! the synthesis construction is built on.

mod intern;
mod parse;
mod print;

use std::collections::BTreeSet;
use std::fmt;

pub use intern::{FormulaArena, FormulaId, Node};
pub use parse::{parse_basic, parse_formula, FormulaError};
pub use print::format_formula;

use crate::lts::{KripkeLTS, StateId};

/// Words that can never be used as property or event names.
pub const KEYWORDS: [&str; 5] = ["true", "false", "dlf", "inv", "reach"];

pub fn is_keyword(name: &str) -> bool {
    KEYWORDS.contains(&name)
}

/// Returns true when `name` matches `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An event name as it appears inside a modality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event(String);

impl Event {
    pub fn new(name: impl Into<String>) -> Self {
        Event(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Propositional formulas over state properties.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasicFormula {
    True,
    False,
    Prop(String),
    Not(Box<BasicFormula>),
    And(Box<BasicFormula>, Box<BasicFormula>),
    Or(Box<BasicFormula>, Box<BasicFormula>),
}

impl BasicFormula {
    pub fn prop(name: impl Into<String>) -> Self {
        BasicFormula::Prop(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(b: BasicFormula) -> Self {
        BasicFormula::Not(Box::new(b))
    }

    pub fn and(l: BasicFormula, r: BasicFormula) -> Self {
        BasicFormula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: BasicFormula, r: BasicFormula) -> Self {
        BasicFormula::Or(Box::new(l), Box::new(r))
    }

    /// Collects every property name mentioned in the formula.
    pub fn props(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            BasicFormula::True | BasicFormula::False => {}
            BasicFormula::Prop(p) => {
                out.insert(p);
            }
            BasicFormula::Not(b) => b.collect_props(out),
            BasicFormula::And(l, r) | BasicFormula::Or(l, r) => {
                l.collect_props(out);
                r.collect_props(out);
            }
        }
    }
}

/// Requirement formulas. Disjunction keeps a state-based formula on the
/// left and reachability only takes a state-based argument; both
/// restrictions are enforced by the shape of this type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Basic(BasicFormula),
    And(Box<Formula>, Box<Formula>),
    OrBF(BasicFormula, Box<Formula>),
    /// `[e] f`: after every `e` step, `f` holds.
    Box(Event, Box<Formula>),
    /// `<e> f`: some `e` step leads to a state where `f` holds.
    Diamond(Event, Box<Formula>),
    Invariant(Box<Formula>),
    Reach(BasicFormula),
    Dlf,
}

impl Formula {
    pub fn tt() -> Self {
        Formula::Basic(BasicFormula::True)
    }

    pub fn ff() -> Self {
        Formula::Basic(BasicFormula::False)
    }

    pub fn prop(name: impl Into<String>) -> Self {
        Formula::Basic(BasicFormula::prop(name))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(b: BasicFormula, f: Formula) -> Self {
        Formula::OrBF(b, Box::new(f))
    }

    pub fn always(e: impl Into<String>, f: Formula) -> Self {
        Formula::Box(Event::new(e), Box::new(f))
    }

    pub fn eventually(e: impl Into<String>, f: Formula) -> Self {
        Formula::Diamond(Event::new(e), Box::new(f))
    }

    pub fn inv(f: Formula) -> Self {
        Formula::Invariant(Box::new(f))
    }

    pub fn reach(b: BasicFormula) -> Self {
        Formula::Reach(b)
    }

    pub fn as_basic(&self) -> Option<&BasicFormula> {
        match self {
            Formula::Basic(b) => Some(b),
            _ => None,
        }
    }

    /// Nesting depth of the formula; state-based formulas count as depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Basic(_) | Formula::Reach(_) | Formula::Dlf => 0,
            Formula::And(l, r) => 1 + l.depth().max(r.depth()),
            Formula::OrBF(_, f)
            | Formula::Box(_, f)
            | Formula::Diamond(_, f)
            | Formula::Invariant(f) => 1 + f.depth(),
        }
    }

    /// True when this formula is in the form produced by [`parse_formula`]:
    /// no requirement-level conjunction or disjunction has only state-based
    /// operands (those are parsed as a single state-based formula).
    pub fn is_parsed_form(&self) -> bool {
        match self {
            Formula::Basic(_) | Formula::Reach(_) | Formula::Dlf => true,
            Formula::And(l, r) => {
                !(l.as_basic().is_some() && r.as_basic().is_some())
                    && l.is_parsed_form()
                    && r.is_parsed_form()
            }
            Formula::OrBF(_, f) => f.as_basic().is_none() && f.is_parsed_form(),
            Formula::Box(_, f) | Formula::Diamond(_, f) | Formula::Invariant(f) => {
                f.is_parsed_form()
            }
        }
    }

    /// Event names mentioned in modalities.
    pub fn events(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_events(&mut out);
        out
    }

    fn collect_events<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Basic(_) | Formula::Reach(_) | Formula::Dlf => {}
            Formula::And(l, r) => {
                l.collect_events(out);
                r.collect_events(out);
            }
            Formula::Box(e, f) | Formula::Diamond(e, f) => {
                out.insert(e.name());
                f.collect_events(out);
            }
            Formula::OrBF(_, f) | Formula::Invariant(f) => f.collect_events(out),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_formula(self))
    }
}

impl fmt::Display for BasicFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::format_basic(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

pub fn eval_basic(b: &BasicFormula, labels: &BTreeSet<String>) -> bool {
    match b {
        BasicFormula::True => true,
        BasicFormula::False => false,
        BasicFormula::Prop(p) => labels.contains(p),
        BasicFormula::Not(b) => !eval_basic(b, labels),
        BasicFormula::And(l, r) => eval_basic(l, labels) && eval_basic(r, labels),
        BasicFormula::Or(l, r) => eval_basic(l, labels) || eval_basic(r, labels),
    }
}

/// Syntactic containment through conjunction and invariant only.
pub fn is_sub_formula(f: &Formula, g: &Formula) -> bool {
    if f == g {
        return true;
    }
    match g {
        Formula::And(l, r) => is_sub_formula(f, l) || is_sub_formula(f, r),
        Formula::Invariant(h) => is_sub_formula(f, h),
        _ => false,
    }
}

/// Like [`is_sub_formula`], but also descends into the right disjunct of
/// `b || h` when `b` does not hold in state `s` of `m`.
pub fn is_part_of(f: &Formula, g: &Formula, m: &KripkeLTS, s: StateId) -> bool {
    is_part_at(f, g, m.labels(s))
}

pub(crate) fn is_part_at(f: &Formula, g: &Formula, labels: &BTreeSet<String>) -> bool {
    if f == g {
        return true;
    }
    match g {
        Formula::And(l, r) => is_part_at(f, l, labels) || is_part_at(f, r, labels),
        Formula::OrBF(b, h) => !eval_basic(b, labels) && is_part_at(f, h, labels),
        Formula::Invariant(h) => is_part_at(f, h, labels),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(props: &[&str]) -> BTreeSet<String> {
        props.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn eval_basic_examples() {
        assert!(eval_basic(
            &BasicFormula::prop("green"),
            &labels(&["green"])
        ));
        assert!(eval_basic(
            &BasicFormula::not(BasicFormula::False),
            &labels(&[])
        ));
        let b = BasicFormula::and(
            BasicFormula::prop("p"),
            BasicFormula::or(
                BasicFormula::prop("q"),
                BasicFormula::not(BasicFormula::prop("q")),
            ),
        );
        assert!(eval_basic(&b, &labels(&["p"])));
        assert!(!eval_basic(&b, &labels(&[])));
    }

    #[test]
    fn sub_formula_rules() {
        let p = Formula::prop("p");
        let g = Formula::always("a", Formula::prop("q"));
        assert!(is_sub_formula(&p, &p));
        assert!(is_sub_formula(&g, &Formula::inv(g.clone())));
        assert!(is_sub_formula(&p, &Formula::and(g.clone(), p.clone())));
        assert!(!is_sub_formula(&p, &Formula::always("a", p.clone())));
        assert!(!is_sub_formula(&p, &Formula::eventually("a", p.clone())));
        assert!(!is_sub_formula(
            &Formula::always("a", Formula::prop("q")),
            &Formula::or(BasicFormula::prop("r"), g.clone())
        ));
    }

    #[test]
    fn part_descends_into_disjunct_only_when_left_fails() {
        let f = Formula::eventually("lock", Formula::prop("access"));
        let g = Formula::or(BasicFormula::prop("access"), f.clone());
        assert!(is_part_at(&f, &g, &labels(&[])));
        assert!(!is_part_at(&f, &g, &labels(&["access"])));
        assert!(is_part_at(&g, &g, &labels(&["access"])));
    }

    #[test]
    fn part_through_invariant_and_conjunction() {
        let f = Formula::prop("p");
        let g = Formula::always("a", Formula::prop("q"));
        let whole = Formula::inv(Formula::and(f.clone(), g.clone()));
        assert!(is_part_at(&f, &whole, &labels(&[])));
        assert!(is_part_at(&g, &whole, &labels(&[])));
        assert!(!is_part_at(&Formula::prop("q"), &whole, &labels(&[])));
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("refill"));
        assert!(is_identifier("_x9"));
        assert!(!is_identifier("9x"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("a-b"));
        assert!(is_keyword("dlf"));
    }

    #[test]
    fn depth_and_parsed_form() {
        let f = Formula::inv(Formula::always("a", Formula::prop("p")));
        assert_eq!(f.depth(), 2);
        assert!(f.is_parsed_form());
        assert!(!Formula::and(Formula::prop("p"), Formula::prop("q")).is_parsed_form());
        assert!(!Formula::or(BasicFormula::prop("p"), Formula::prop("q")).is_parsed_form());
    }
}
