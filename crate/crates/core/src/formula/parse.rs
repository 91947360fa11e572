use thiserror::Error;

use super::{is_keyword, BasicFormula, Event, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// A requirement formula where only a state-based formula is allowed:
    /// left of `||`, under `!`, or inside `reach(...)`.
    #[error("{line}:{column}: {message}")]
    Placement {
        line: usize,
        column: usize,
        message: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBrack,
    RBrack,
    Lt,
    Gt,
    LParen,
    RParen,
    Bang,
    AndAnd,
    OrOr,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Bang => "`!`".into(),
            Tok::AndAnd => "`&&`".into(),
            Tok::OrOr => "`||`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn syntax(pos: Pos, message: impl Into<String>) -> FormulaError {
    FormulaError::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn placement(pos: Pos, message: impl Into<String>) -> FormulaError {
    FormulaError::Placement {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, FormulaError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let single = match c {
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '<' => Some(Tok::Lt),
            '>' => Some(Tok::Gt),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '!' => Some(Tok::Bang),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, pos));
            i += 1;
            column += 1;
            continue;
        }
        if c == '&' || c == '|' {
            if chars.get(i + 1) != Some(&c) {
                return Err(syntax(pos, format!("expected `{c}{c}`")));
            }
            out.push((if c == '&' { Tok::AndAnd } else { Tok::OrOr }, pos));
            i += 2;
            column += 2;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            column += i - start;
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        return Err(syntax(pos, format!("unexpected character `{c}`")));
    }
    out.push((Tok::Eof, Pos { line, column }));
    Ok(out)
}

/// Untyped syntax tree; classification into state-based and requirement
/// formulas happens after parsing.
#[derive(Debug)]
enum Expr {
    True,
    False,
    Prop(String),
    Dlf,
    Not(Box<Spanned>),
    And(Box<Spanned>, Box<Spanned>),
    Or(Box<Spanned>, Box<Spanned>),
    Box(String, Box<Spanned>),
    Diamond(String, Box<Spanned>),
    Inv(Box<Spanned>),
    Reach(Box<Spanned>),
}

#[derive(Debug)]
struct Spanned {
    expr: Expr,
    pos: Pos,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), FormulaError> {
        let (tok, pos) = self.bump();
        if tok == want {
            Ok(())
        } else {
            Err(syntax(
                pos,
                format!("expected {}, found {}", want.describe(), tok.describe()),
            ))
        }
    }

    fn name(&mut self, what: &str) -> Result<String, FormulaError> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Ident(s) if is_keyword(&s) => Err(syntax(
                pos,
                format!("`{s}` is a reserved keyword and cannot be used as {what}"),
            )),
            Tok::Ident(s) => Ok(s),
            other => Err(syntax(
                pos,
                format!("expected {what}, found {}", other.describe()),
            )),
        }
    }

    fn or_expr(&mut self) -> Result<Spanned, FormulaError> {
        let lhs = self.and_expr()?;
        if *self.peek() == Tok::OrOr {
            let pos = self.pos();
            self.bump();
            let rhs = self.or_expr()?;
            return Ok(Spanned {
                expr: Expr::Or(Box::new(lhs), Box::new(rhs)),
                pos,
            });
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Spanned, FormulaError> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::AndAnd {
            let pos = self.pos();
            self.bump();
            let rhs = self.and_expr()?;
            return Ok(Spanned {
                expr: Expr::And(Box::new(lhs), Box::new(rhs)),
                pos,
            });
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Spanned, FormulaError> {
        let pos = self.pos();
        match self.peek() {
            Tok::Bang => {
                self.bump();
                let operand = self.unary()?;
                Ok(Spanned {
                    expr: Expr::Not(Box::new(operand)),
                    pos,
                })
            }
            Tok::LBrack => {
                self.bump();
                let event = self.name("an event name")?;
                self.expect(Tok::RBrack)?;
                let operand = self.unary()?;
                Ok(Spanned {
                    expr: Expr::Box(event, Box::new(operand)),
                    pos,
                })
            }
            Tok::Lt => {
                self.bump();
                let event = self.name("an event name")?;
                self.expect(Tok::Gt)?;
                let operand = self.unary()?;
                Ok(Spanned {
                    expr: Expr::Diamond(event, Box::new(operand)),
                    pos,
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Spanned, FormulaError> {
        let (tok, pos) = self.bump();
        let expr = match tok {
            Tok::LParen => {
                let inner = self.or_expr()?;
                self.expect(Tok::RParen)?;
                return Ok(inner);
            }
            Tok::Ident(s) => match s.as_str() {
                "true" => Expr::True,
                "false" => Expr::False,
                "dlf" => Expr::Dlf,
                "inv" | "reach" => {
                    self.expect(Tok::LParen)?;
                    let inner = self.or_expr()?;
                    self.expect(Tok::RParen)?;
                    if s == "inv" {
                        Expr::Inv(Box::new(inner))
                    } else {
                        Expr::Reach(Box::new(inner))
                    }
                }
                _ => Expr::Prop(s),
            },
            other => {
                return Err(syntax(
                    pos,
                    format!("expected a formula, found {}", other.describe()),
                ))
            }
        };
        Ok(Spanned { expr, pos })
    }
}

fn to_basic(e: &Spanned) -> Option<BasicFormula> {
    Some(match &e.expr {
        Expr::True => BasicFormula::True,
        Expr::False => BasicFormula::False,
        Expr::Prop(p) => BasicFormula::Prop(p.clone()),
        Expr::Not(b) => BasicFormula::not(to_basic(b)?),
        Expr::And(l, r) => BasicFormula::and(to_basic(l)?, to_basic(r)?),
        Expr::Or(l, r) => BasicFormula::or(to_basic(l)?, to_basic(r)?),
        _ => return None,
    })
}

fn require_basic(e: &Spanned, context: &str) -> Result<BasicFormula, FormulaError> {
    match to_basic(e) {
        Some(b) => Ok(b),
        None => Err(placement(
            first_modal_pos(e),
            format!("only a state-based formula is allowed {context}"),
        )),
    }
}

/// Position of the first sub-expression that is not state-based.
fn first_modal_pos(e: &Spanned) -> Pos {
    match &e.expr {
        Expr::Not(b) => first_modal_pos(b),
        Expr::And(l, r) | Expr::Or(l, r) => {
            if to_basic(l).is_none() {
                first_modal_pos(l)
            } else {
                first_modal_pos(r)
            }
        }
        _ => e.pos,
    }
}

fn to_formula(e: &Spanned) -> Result<Formula, FormulaError> {
    if let Some(b) = to_basic(e) {
        return Ok(Formula::Basic(b));
    }
    Ok(match &e.expr {
        Expr::And(l, r) => Formula::and(to_formula(l)?, to_formula(r)?),
        Expr::Or(l, r) => Formula::or(require_basic(l, "on the left of `||`")?, to_formula(r)?),
        Expr::Not(b) => {
            require_basic(b, "under `!`")?;
            unreachable!("a state-based operand would have made the negation state-based")
        }
        Expr::Box(ev, f) => Formula::Box(Event::new(ev.clone()), Box::new(to_formula(f)?)),
        Expr::Diamond(ev, f) => Formula::Diamond(Event::new(ev.clone()), Box::new(to_formula(f)?)),
        Expr::Inv(f) => Formula::inv(to_formula(f)?),
        Expr::Reach(b) => Formula::Reach(require_basic(b, "inside `reach(...)`")?),
        Expr::Dlf => Formula::Dlf,
        Expr::True | Expr::False | Expr::Prop(_) => unreachable!("state-based"),
    })
}

fn parse_expr(text: &str) -> Result<Spanned, FormulaError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let e = p.or_expr()?;
    let (tok, pos) = p.bump();
    if tok != Tok::Eof {
        return Err(syntax(
            pos,
            format!("unexpected {} after formula", tok.describe()),
        ));
    }
    Ok(e)
}

pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    to_formula(&parse_expr(text)?)
}

/// Parses text that must denote a state-based formula.
pub fn parse_basic(text: &str) -> Result<BasicFormula, FormulaError> {
    require_basic(&parse_expr(text)?, "here")
}
