//! Infix syntax: `forall x1. ~r(x1) --> r(f(x1))`.
//!
//! Precedence from loosest to tightest: `-->`, `\/`, `/\`, `~`. Binary
//! connectives associate to the right and quantifier bodies extend as far
//! right as possible. Bound variables are named by the parser and resolved to
//! de Bruijn indices; free variables are written `#k`.

use super::lexer::{tokenize, Cursor, ParseError, Token};
use super::{Formula, Name, Term};

const KEYWORDS: &[&str] = &["forall", "exists", "False", "True"];

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut cur = Cursor::new(&toks, text.len());
    let mut scope = Vec::new();
    let p = implication(&mut cur, &mut scope)?;
    cur.finish()?;
    Ok(p)
}

type Scope = Vec<String>;

fn implication(cur: &mut Cursor<'_>, scope: &mut Scope) -> Result<Formula, ParseError> {
    let lhs = disjunction(cur, scope)?;
    if cur.eat(&Token::Arrow) {
        Ok(Formula::imp(lhs, implication(cur, scope)?))
    } else {
        Ok(lhs)
    }
}

fn disjunction(cur: &mut Cursor<'_>, scope: &mut Scope) -> Result<Formula, ParseError> {
    let lhs = conjunction(cur, scope)?;
    if cur.eat(&Token::Or) {
        Ok(Formula::dis(lhs, disjunction(cur, scope)?))
    } else {
        Ok(lhs)
    }
}

fn conjunction(cur: &mut Cursor<'_>, scope: &mut Scope) -> Result<Formula, ParseError> {
    let lhs = unary(cur, scope)?;
    if cur.eat(&Token::And) {
        Ok(Formula::con(lhs, conjunction(cur, scope)?))
    } else {
        Ok(lhs)
    }
}

fn unary(cur: &mut Cursor<'_>, scope: &mut Scope) -> Result<Formula, ParseError> {
    if cur.eat(&Token::Tilde) {
        return Ok(Formula::neg(unary(cur, scope)?));
    }
    let quantifier = match cur.peek() {
        Some(Token::Ident(s)) if s == "forall" || s == "exists" => s.clone(),
        _ => return primary(cur, scope),
    };
    cur.next();
    let binder = match cur.peek() {
        Some(Token::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => s.clone(),
        _ => return Err(cur.error(&["bound variable name"])),
    };
    cur.next();
    cur.expect(&Token::Dot, "`.`")?;
    scope.push(binder);
    let body = implication(cur, scope);
    scope.pop();
    let body = body?;
    Ok(if quantifier == "forall" { Formula::uni(body) } else { Formula::exi(body) })
}

fn primary(cur: &mut Cursor<'_>, scope: &mut Scope) -> Result<Formula, ParseError> {
    match cur.peek() {
        Some(Token::Ident(s)) if s == "False" => {
            cur.next();
            Ok(Formula::Falsity)
        }
        Some(Token::Ident(s)) if s == "True" => {
            cur.next();
            Ok(Formula::truth())
        }
        Some(Token::LParen) => {
            cur.next();
            let p = implication(cur, scope)?;
            cur.expect(&Token::RParen, "`)`")?;
            Ok(p)
        }
        Some(Token::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
            let n = Name::new(s);
            cur.next();
            Ok(Formula::Pre(n, arguments(cur, scope)?.unwrap_or_default()))
        }
        Some(Token::Quoted(s)) => {
            let n = Name::new(s);
            cur.next();
            Ok(Formula::Pre(n, arguments(cur, scope)?.unwrap_or_default()))
        }
        _ => Err(cur.error(&["formula"])),
    }
}

/// A parenthesized argument list, if one follows.
fn arguments(cur: &mut Cursor<'_>, scope: &Scope) -> Result<Option<Vec<Term>>, ParseError> {
    if !cur.eat(&Token::LParen) {
        return Ok(None);
    }
    let mut out = Vec::new();
    if cur.eat(&Token::RParen) {
        return Ok(Some(out));
    }
    loop {
        out.push(term(cur, scope)?);
        if cur.eat(&Token::RParen) {
            return Ok(Some(out));
        }
        cur.expect(&Token::Comma, "`,` or `)`")?;
    }
}

fn term(cur: &mut Cursor<'_>, scope: &Scope) -> Result<Term, ParseError> {
    match cur.peek() {
        Some(Token::Hash) => {
            cur.next();
            match cur.peek() {
                Some(Token::Nat(k)) => {
                    cur.next();
                    Ok(Term::Var(k + scope.len()))
                }
                _ => Err(cur.error(&["natural number"])),
            }
        }
        Some(Token::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
            let n = Name::new(s);
            cur.next();
            match arguments(cur, scope)? {
                Some(args) => Ok(Term::Fun(n, args)),
                None => match scope.iter().rposition(|b| b == s) {
                    Some(at) => Ok(Term::Var(scope.len() - 1 - at)),
                    None => Ok(Term::Fun(n, Vec::new())),
                },
            }
        }
        Some(Token::Quoted(s)) => {
            let n = Name::new(s);
            cur.next();
            Ok(Term::Fun(n, arguments(cur, scope)?.unwrap_or_default()))
        }
        _ => Err(cur.error(&["term"])),
    }
}

// Binding strength used to decide parenthesization.
const QUANT: u8 = 0;
const IMP: u8 = 1;
const DIS: u8 = 2;
const CON: u8 = 3;
const NEG: u8 = 4;
const ATOM: u8 = 5;

pub fn render_formula(p: &Formula) -> String {
    let mut out = String::new();
    write(p, 0, QUANT, &mut out);
    out
}

fn level(p: &Formula) -> u8 {
    match p {
        Formula::Falsity | Formula::Pre(..) => ATOM,
        Formula::Imp(a, b) if **b == Formula::Falsity && **a != Formula::Falsity => NEG,
        Formula::Imp(..) => IMP,
        Formula::Dis(..) => DIS,
        Formula::Con(..) => CON,
        Formula::Exi(_) | Formula::Uni(_) => QUANT,
    }
}

fn write(p: &Formula, depth: usize, min: u8, out: &mut String) {
    let lvl = level(p);
    // Quantifiers are always parenthesized as operands.
    let wrap = lvl < min || (lvl == QUANT && min > QUANT);
    if wrap {
        out.push('(');
    }
    match p {
        Formula::Falsity => out.push_str("False"),
        Formula::Pre(n, args) => {
            write_name(n, out);
            if !args.is_empty() {
                write_args(args, depth, out);
            }
        }
        Formula::Imp(a, _) if lvl == NEG => {
            out.push('~');
            write(a, depth, NEG, out);
        }
        Formula::Imp(a, b) => binary(a, " --> ", b, IMP, depth, out),
        Formula::Dis(a, b) => binary(a, " \\/ ", b, DIS, depth, out),
        Formula::Con(a, b) => binary(a, " /\\ ", b, CON, depth, out),
        Formula::Exi(a) | Formula::Uni(a) => {
            out.push_str(if matches!(p, Formula::Uni(_)) { "forall x" } else { "exists x" });
            out.push_str(&(depth + 1).to_string());
            out.push_str(". ");
            write(a, depth + 1, QUANT, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

fn binary(a: &Formula, op: &str, b: &Formula, lvl: u8, depth: usize, out: &mut String) {
    write(a, depth, lvl + 1, out);
    out.push_str(op);
    write(b, depth, lvl, out);
}

fn write_name(n: &Name, out: &mut String) {
    if KEYWORDS.contains(&n.as_str()) {
        out.push_str("''");
        out.push_str(n.as_str());
        out.push_str("''");
    } else {
        out.push_str(n.as_str());
    }
}

fn write_args(args: &[Term], depth: usize, out: &mut String) {
    out.push('(');
    for (i, t) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_term(t, depth, out);
    }
    out.push(')');
}

/// Whether a bare constant named `name` would be read as a binder in scope.
fn shadows_binder(name: &str, depth: usize) -> bool {
    name.strip_prefix('x')
        .and_then(|k| if k.starts_with('0') { None } else { k.parse::<usize>().ok() })
        .is_some_and(|k| k >= 1 && k <= depth)
}

fn write_term(t: &Term, depth: usize, out: &mut String) {
    match t {
        Term::Var(i) if *i < depth => {
            out.push('x');
            out.push_str(&(depth - i).to_string());
        }
        Term::Var(i) => {
            out.push('#');
            out.push_str(&(i - depth).to_string());
        }
        Term::Fun(f, args) => {
            write_name(f, out);
            if !args.is_empty() {
                write_args(args, depth, out);
            } else if shadows_binder(f.as_str(), depth) {
                out.push_str("()");
            }
        }
    }
}
