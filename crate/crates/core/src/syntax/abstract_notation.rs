//! Constructor syntax: `Imp (Pre ''p'' []) Falsity`, `Uni (Pre ''P'' [Var 0])`.

use super::lexer::{tokenize, Cursor, Lexeme, ParseError, Token};
use super::{Formula, Name, Term};

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut cur = Cursor::new(&toks, text.len());
    let p = formula(&mut cur)?;
    cur.finish()?;
    Ok(p)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let toks = tokenize(text)?;
    let mut cur = Cursor::new(&toks, text.len());
    let t = term(&mut cur)?;
    cur.finish()?;
    Ok(t)
}

/// Parses one formula from the front of `toks`, returning it with the
/// number of tokens consumed.
pub(crate) fn parse_formula_prefix(toks: &[Lexeme], end: usize) -> Result<(Formula, usize), ParseError> {
    let mut cur = Cursor::new(toks, end);
    let p = formula(&mut cur)?;
    Ok((p, cur.idx))
}

pub(crate) fn parse_term_prefix(toks: &[Lexeme], end: usize) -> Result<(Term, usize), ParseError> {
    let mut cur = Cursor::new(toks, end);
    let t = term(&mut cur)?;
    Ok((t, cur.idx))
}

const FORMULA_START: &[&str] = &[
    "`Falsity`", "`Truth`", "`Pre`", "`Imp`", "`Dis`", "`Con`", "`Exi`", "`Uni`", "`Neg`", "`(`",
];

fn formula(cur: &mut Cursor<'_>) -> Result<Formula, ParseError> {
    let kw = match cur.peek() {
        Some(Token::Ident(s)) => s.as_str(),
        Some(Token::LParen) => {
            cur.next();
            let p = formula(cur)?;
            cur.expect(&Token::RParen, "`)`")?;
            return Ok(p);
        }
        _ => return Err(cur.error(FORMULA_START)),
    };
    let p = match kw {
        "Falsity" => {
            cur.next();
            Formula::Falsity
        }
        "Truth" => {
            cur.next();
            Formula::truth()
        }
        "Pre" => {
            cur.next();
            let n = name(cur)?;
            Formula::Pre(n, term_list(cur)?)
        }
        "Imp" | "Dis" | "Con" => {
            cur.next();
            let a = argument(cur)?;
            let b = argument(cur)?;
            match kw {
                "Imp" => Formula::imp(a, b),
                "Dis" => Formula::dis(a, b),
                _ => Formula::con(a, b),
            }
        }
        "Exi" | "Uni" | "Neg" => {
            cur.next();
            let a = argument(cur)?;
            match kw {
                "Exi" => Formula::exi(a),
                "Uni" => Formula::uni(a),
                _ => Formula::neg(a),
            }
        }
        _ => return Err(cur.error(FORMULA_START)),
    };
    Ok(p)
}

/// Constructor arguments are parenthesized unless they are `Falsity` or `Truth`.
fn argument(cur: &mut Cursor<'_>) -> Result<Formula, ParseError> {
    match cur.peek() {
        Some(Token::LParen) => {
            cur.next();
            let p = formula(cur)?;
            cur.expect(&Token::RParen, "`)`")?;
            Ok(p)
        }
        Some(Token::Ident(s)) if s == "Falsity" || s == "Truth" => formula(cur),
        _ => Err(cur.error(&["`(`", "`Falsity`", "`Truth`"])),
    }
}

fn name(cur: &mut Cursor<'_>) -> Result<Name, ParseError> {
    match cur.peek() {
        Some(Token::Quoted(s)) | Some(Token::Ident(s)) => {
            cur.next();
            Ok(Name::new(s))
        }
        _ => Err(cur.error(&["name"])),
    }
}

fn term_list(cur: &mut Cursor<'_>) -> Result<Vec<Term>, ParseError> {
    cur.expect(&Token::LBracket, "`[`")?;
    let mut out = Vec::new();
    if cur.eat(&Token::RBracket) {
        return Ok(out);
    }
    loop {
        out.push(term(cur)?);
        if cur.eat(&Token::RBracket) {
            return Ok(out);
        }
        cur.expect(&Token::Comma, "`,` or `]`")?;
    }
}

fn term(cur: &mut Cursor<'_>) -> Result<Term, ParseError> {
    match cur.peek() {
        Some(Token::Ident(s)) if s == "Var" => {
            cur.next();
            match cur.peek() {
                Some(Token::Nat(n)) => {
                    cur.next();
                    Ok(Term::Var(*n))
                }
                _ => Err(cur.error(&["natural number"])),
            }
        }
        Some(Token::Ident(s)) if s == "Fun" => {
            cur.next();
            let n = name(cur)?;
            Ok(Term::Fun(n, term_list(cur)?))
        }
        Some(Token::LParen) => {
            cur.next();
            let t = term(cur)?;
            cur.expect(&Token::RParen, "`)`")?;
            Ok(t)
        }
        _ => Err(cur.error(&["`Var`", "`Fun`"])),
    }
}

pub fn render_formula(p: &Formula) -> String {
    let mut out = String::new();
    write_formula(p, &mut out);
    out
}

pub fn render_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_formula(p: &Formula, out: &mut String) {
    match p {
        Formula::Falsity => out.push_str("Falsity"),
        Formula::Pre(n, args) => {
            out.push_str("Pre ''");
            out.push_str(n.as_str());
            out.push_str("'' ");
            write_terms(args, out);
        }
        Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => {
            out.push_str(match p {
                Formula::Imp(..) => "Imp ",
                Formula::Dis(..) => "Dis ",
                _ => "Con ",
            });
            write_argument(a, out);
            out.push(' ');
            write_argument(b, out);
        }
        Formula::Exi(a) | Formula::Uni(a) => {
            out.push_str(if matches!(p, Formula::Exi(_)) { "Exi " } else { "Uni " });
            write_argument(a, out);
        }
    }
}

fn write_argument(p: &Formula, out: &mut String) {
    if *p == Formula::Falsity {
        out.push_str("Falsity");
    } else {
        out.push('(');
        write_formula(p, out);
        out.push(')');
    }
}

fn write_terms(ts: &[Term], out: &mut String) {
    out.push('[');
    for (i, t) in ts.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_term(t, out);
    }
    out.push(']');
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(i) => {
            out.push_str("Var ");
            out.push_str(&i.to_string());
        }
        Term::Fun(f, args) => {
            out.push_str("Fun ''");
            out.push_str(f.as_str());
            out.push_str("'' ");
            write_terms(args, out);
        }
    }
}
