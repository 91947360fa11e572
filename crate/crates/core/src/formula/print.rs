use super::{BasicFormula, Formula};

// Binding strength of the printed forms, loosest first.
const OR: u8 = 1;
const AND: u8 = 2;
const PREFIX: u8 = 3;
const ATOM: u8 = 4;

fn basic_level(b: &BasicFormula) -> u8 {
    match b {
        BasicFormula::Or(..) => OR,
        BasicFormula::And(..) => AND,
        BasicFormula::Not(_) => PREFIX,
        _ => ATOM,
    }
}

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Basic(b) => basic_level(b),
        Formula::OrBF(..) => OR,
        Formula::And(..) => AND,
        Formula::Box(..) | Formula::Diamond(..) => PREFIX,
        Formula::Invariant(_) | Formula::Reach(_) | Formula::Dlf => ATOM,
    }
}

fn write_basic(out: &mut String, b: &BasicFormula, min: u8) {
    let wrap = basic_level(b) < min;
    if wrap {
        out.push('(');
    }
    match b {
        BasicFormula::True => out.push_str("true"),
        BasicFormula::False => out.push_str("false"),
        BasicFormula::Prop(p) => out.push_str(p),
        BasicFormula::Not(inner) => {
            out.push('!');
            write_basic(out, inner, PREFIX);
        }
        BasicFormula::And(l, r) => {
            write_basic(out, l, PREFIX);
            out.push_str(" && ");
            write_basic(out, r, AND);
        }
        BasicFormula::Or(l, r) => {
            write_basic(out, l, AND);
            out.push_str(" || ");
            write_basic(out, r, OR);
        }
    }
    if wrap {
        out.push(')');
    }
}

fn write(out: &mut String, f: &Formula, min: u8) {
    let wrap = level(f) < min;
    if wrap {
        out.push('(');
    }
    match f {
        Formula::Basic(b) => write_basic(out, b, OR),
        Formula::And(l, r) => {
            write(out, l, PREFIX);
            out.push_str(" && ");
            write(out, r, AND);
        }
        Formula::OrBF(b, r) => {
            write_basic(out, b, AND);
            out.push_str(" || ");
            write(out, r, OR);
        }
        Formula::Box(e, inner) => {
            out.push('[');
            out.push_str(e.name());
            out.push_str("] ");
            write(out, inner, PREFIX);
        }
        Formula::Diamond(e, inner) => {
            out.push('<');
            out.push_str(e.name());
            out.push_str("> ");
            write(out, inner, PREFIX);
        }
        Formula::Invariant(inner) => {
            out.push_str("inv(");
            write(out, inner, OR);
            out.push(')');
        }
        Formula::Reach(b) => {
            out.push_str("reach(");
            write_basic(out, b, OR);
            out.push(')');
        }
        Formula::Dlf => out.push_str("dlf"),
    }
    if wrap {
        out.push(')');
    }
}

/// Renders a formula in the concrete syntax accepted by
/// [`parse_formula`](super::parse_formula), with the minimum number of
/// parentheses. Parsing the output yields the same formula for every
/// formula in parsed form (see [`Formula::is_parsed_form`]).
pub fn format_formula(f: &Formula) -> String {
    let mut out = String::new();
    write(&mut out, f, OR);
    out
}

pub(crate) fn format_basic(b: &BasicFormula) -> String {
    let mut out = String::new();
    write_basic(&mut out, b, OR);
    out
}
