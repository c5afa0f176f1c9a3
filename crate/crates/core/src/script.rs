//! Line-oriented proof scripts for the sequent calculus and natural deduction.
//!
//! ```text
//! goal: Imp (Pre ''p'' []) (Pre ''p'' [])
//! by: AlphaImp
//!   sequent:
//!     Imp (Pre ''p'' []) Falsity
//!     Pre ''p'' []
//!   by: Ext to: [Pre ''p'' [], Imp (Pre ''p'' []) Falsity]
//!     sequent:
//!       Pre ''p'' []
//!       Imp (Pre ''p'' []) Falsity
//!     qed: Basic
//! ```
//!
//! Extra root formulas follow the `goal:` line at indent 2. Each premise
//! restates its sequent (formulas at +4) and continues with its own block
//! at +2. Formulas are written in abstract notation. Blank lines and lines
//! starting with `#` are ignored.

use thiserror::Error;

use crate::derivation::{Derivation, RuleName};
use crate::natded::{NdJudgment, NdProof, NdRule, ND_RULE_NAMES};
use crate::sequent::{canonical_rule_name, ScProof, ScRule, Sequent};
use crate::syntax::{
    parse_formula_prefix, parse_term_prefix, render_formula, render_term, tokenize, Cursor, Formula, Lexeme, Name,
    Notation, ParseError, Token,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("line {line}, column {}: {source}", source.position + 1)]
    Parse { line: usize, source: ParseError },
    #[error("line {line}: {message}")]
    Layout { line: usize, message: String },
}

impl ScriptError {
    pub fn line(&self) -> usize {
        match self {
            ScriptError::Parse { line, .. } | ScriptError::Layout { line, .. } => *line,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScriptKind {
    Sequent,
    NaturalDeduction,
    Hilbert,
}

/// Guesses the format from the first significant line.
pub fn detect_kind(text: &str) -> Option<ScriptKind> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'))?;
    if first.starts_with("goal:") {
        Some(ScriptKind::Sequent)
    } else if first.starts_with("judgment:") {
        Some(ScriptKind::NaturalDeduction)
    } else {
        let digits = first.bytes().take_while(u8::is_ascii_digit).count();
        (digits > 0 && first[digits..].starts_with('.')).then_some(ScriptKind::Hilbert)
    }
}

struct Line<'a> {
    no: usize,
    indent: usize,
    text: &'a str,
}

fn significant_lines(src: &str) -> Result<Vec<Line<'_>>, ScriptError> {
    let mut out = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let trimmed = raw.trim_start_matches(' ');
        let text = trimmed.trim_end();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        if text.starts_with('\t') {
            return Err(ScriptError::Layout { line: i + 1, message: "tabs are not allowed in indentation".into() });
        }
        out.push(Line { no: i + 1, indent: raw.len() - trimmed.len(), text });
    }
    Ok(out)
}

/// A tokenized fragment of one line, with byte offsets relative to the line.
struct Fragment {
    line: usize,
    toks: Vec<Lexeme>,
    end: usize,
}

impl Fragment {
    fn new(line: &Line<'_>, skip: usize) -> Result<Fragment, ScriptError> {
        let col = line.indent + skip;
        let src = &line.text[skip..];
        let toks = tokenize(src).map_err(|e| ScriptError::Parse { line: line.no, source: e.offset(col) })?;
        let toks = toks.into_iter().map(|l| Lexeme { token: l.token, pos: l.pos + col }).collect();
        Ok(Fragment { line: line.no, toks, end: col + src.len() })
    }

    fn cursor(&self) -> Cursor<'_> {
        Cursor::new(&self.toks, self.end)
    }

    fn err(&self, e: ParseError) -> ScriptError {
        ScriptError::Parse { line: self.line, source: e }
    }
}

struct Args<'a> {
    frag: &'a Fragment,
    cur: Cursor<'a>,
}

impl<'a> Args<'a> {
    fn new(frag: &'a Fragment) -> Args<'a> {
        Args { frag, cur: frag.cursor() }
    }

    fn fail(&self, expected: &[&str]) -> ScriptError {
        self.frag.err(self.cur.error(expected))
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ScriptError> {
        if self.cur.eat_keyword(kw) && self.cur.eat(&Token::Colon) {
            Ok(())
        } else {
            Err(self.fail(&[&format!("`{kw}:`")]))
        }
    }

    fn rule_name(&mut self) -> Result<String, ScriptError> {
        match self.cur.next() {
            Some(Token::Ident(s)) => Ok(s.clone()),
            _ => {
                self.cur.idx = self.cur.idx.saturating_sub(1);
                Err(self.fail(&["rule name"]))
            }
        }
    }

    fn formula(&mut self) -> Result<Formula, ScriptError> {
        let rest = &self.frag.toks[self.cur.idx..];
        let (p, used) = parse_formula_prefix(rest, self.frag.end).map_err(|e| self.frag.err(e))?;
        self.cur.idx += used;
        Ok(p)
    }

    fn term(&mut self) -> Result<crate::syntax::Term, ScriptError> {
        let rest = &self.frag.toks[self.cur.idx..];
        let (t, used) = parse_term_prefix(rest, self.frag.end).map_err(|e| self.frag.err(e))?;
        self.cur.idx += used;
        Ok(t)
    }

    fn name(&mut self) -> Result<Name, ScriptError> {
        match self.cur.peek() {
            Some(Token::Ident(s)) | Some(Token::Quoted(s)) if Name::is_valid(s) => {
                self.cur.next();
                Ok(Name::new(s))
            }
            _ => Err(self.fail(&["constant name"])),
        }
    }

    /// `[f, f, ...]`
    fn formula_list(&mut self) -> Result<Vec<Formula>, ScriptError> {
        if !self.cur.eat(&Token::LBracket) {
            return Err(self.fail(&["`[`"]));
        }
        let mut out = Vec::new();
        if self.cur.eat(&Token::RBracket) {
            return Ok(out);
        }
        loop {
            out.push(self.formula()?);
            if self.cur.eat(&Token::RBracket) {
                return Ok(out);
            }
            if !self.cur.eat(&Token::Comma) {
                return Err(self.fail(&["`,`", "`]`"]));
            }
        }
    }

    fn finish(&self) -> Result<(), ScriptError> {
        self.cur.finish().map_err(|e| self.frag.err(e))
    }
}

fn quote(n: &Name) -> String {
    format!("''{}''", n.as_str())
}

fn abs(p: &Formula) -> String {
    render_formula(p, Notation::Abstract)
}

/// Line cursor shared by both script parsers.
struct Lines<'a> {
    lines: Vec<Line<'a>>,
    idx: usize,
    last_line: usize,
}

impl<'a> Lines<'a> {
    fn new(src: &'a str) -> Result<Lines<'a>, ScriptError> {
        let lines = significant_lines(src)?;
        Ok(Lines { lines, idx: 0, last_line: src.lines().count().max(1) })
    }

    fn peek(&self) -> Option<&Line<'a>> {
        self.lines.get(self.idx)
    }

    fn peek_at(&self, indent: usize) -> Option<&Line<'a>> {
        self.peek().filter(|l| l.indent == indent)
    }

    fn take(&mut self, indent: usize, what: &str) -> Result<&Line<'a>, ScriptError> {
        match self.lines.get(self.idx) {
            Some(l) if l.indent == indent => {
                self.idx += 1;
                Ok(&self.lines[self.idx - 1])
            }
            Some(l) => Err(ScriptError::Layout {
                line: l.no,
                message: format!("expected {what} at indentation {indent}, found indentation {}", l.indent),
            }),
            None => Err(ScriptError::Layout { line: self.last_line, message: format!("expected {what}, found end of input") }),
        }
    }

    fn finish(&self) -> Result<(), ScriptError> {
        match self.peek() {
            None => Ok(()),
            Some(l) => Err(ScriptError::Layout { line: l.no, message: "unexpected line after the end of the proof".into() }),
        }
    }
}

fn is_keyword_line(text: &str) -> bool {
    ["by:", "qed:", "sequent:", "judgment:", "goal:"].iter().any(|k| text.starts_with(k)) || text == "open"
}

fn formula_line(line: &Line<'_>, skip: usize) -> Result<Formula, ScriptError> {
    let frag = Fragment::new(line, skip)?;
    let mut args = Args::new(&frag);
    let p = args.formula()?;
    args.finish()?;
    Ok(p)
}

// ---------------------------------------------------------------- sequents

pub fn parse_sc_script(src: &str) -> Result<ScProof, ScriptError> {
    let mut lines = Lines::new(src)?;
    let first = lines.take(0, "`goal:`")?;
    if !first.text.starts_with("goal:") {
        return Err(ScriptError::Layout { line: first.no, message: "expected `goal:`".into() });
    }
    let mut root = vec![formula_line(first, "goal:".len())?];
    while let Some(l) = lines.peek_at(2) {
        if is_keyword_line(l.text) {
            break;
        }
        root.push(formula_line(l, 0)?);
        lines.idx += 1;
    }
    let pf = sc_block(&mut lines, 0, root)?;
    lines.finish()?;
    Ok(pf)
}

fn sc_block(lines: &mut Lines<'_>, k: usize, conclusion: Sequent) -> Result<ScProof, ScriptError> {
    let line = lines.take(k, "`by:`, `qed:` or `open`")?;
    if line.text == "open" {
        return Ok(Derivation::open(conclusion));
    }
    let (is_qed, skip) = if line.text.starts_with("qed:") {
        (true, "qed:".len())
    } else if line.text.starts_with("by:") {
        (false, "by:".len())
    } else {
        return Err(ScriptError::Layout { line: line.no, message: "expected `by:`, `qed:` or `open`".into() });
    };
    let frag = Fragment::new(line, skip)?;
    let rule = sc_rule(&frag)?;
    let mut premises = Vec::new();
    if !is_qed {
        while let Some(l) = lines.peek_at(k + 2) {
            if l.text != "sequent:" {
                break;
            }
            lines.idx += 1;
            let mut seq = Vec::new();
            while let Some(f) = lines.peek_at(k + 4) {
                seq.push(formula_line(f, 0)?);
                lines.idx += 1;
            }
            premises.push(sc_block(lines, k + 2, seq)?);
        }
    }
    Ok(Derivation::by(conclusion, rule, premises))
}

fn sc_rule(frag: &Fragment) -> Result<ScRule, ScriptError> {
    let mut args = Args::new(frag);
    let start = args.cur.pos();
    let name = args.rule_name()?;
    let canonical = canonical_rule_name(&name).ok_or_else(|| {
        frag.err(ParseError::new(start, &["rule name"], format!("`{name}`")))
    })?;
    let rule = match canonical {
        "Basic" => ScRule::Basic,
        "AlphaDis" => ScRule::AlphaDis,
        "AlphaImp" => ScRule::AlphaImp,
        "AlphaCon" => ScRule::AlphaCon,
        "BetaCon" => ScRule::BetaCon,
        "BetaImp" => ScRule::BetaImp,
        "BetaDis" => ScRule::BetaDis,
        "GammaExi" | "GammaUni" => {
            args.keyword("term")?;
            let t = args.term()?;
            if canonical == "GammaExi" {
                ScRule::GammaExi(t)
            } else {
                ScRule::GammaUni(t)
            }
        }
        "DeltaUni" | "DeltaExi" => {
            args.keyword("const")?;
            let c = args.name()?;
            if canonical == "DeltaUni" {
                ScRule::DeltaUni(c)
            } else {
                ScRule::DeltaExi(c)
            }
        }
        "Extra" => ScRule::Extra,
        "Ext" => {
            args.keyword("to")?;
            ScRule::Ext(args.formula_list()?)
        }
        "NegNeg" => ScRule::NegNeg,
        _ => unreachable!(),
    };
    args.finish()?;
    Ok(rule)
}

fn sc_rule_text(r: &ScRule) -> String {
    match r {
        ScRule::GammaExi(t) | ScRule::GammaUni(t) => format!("{} term: {}", r.name(), render_term(t)),
        ScRule::DeltaUni(c) | ScRule::DeltaExi(c) => format!("{} const: {}", r.name(), quote(c)),
        ScRule::Ext(target) => {
            let items: Vec<String> = target.iter().map(abs).collect();
            format!("Ext to: [{}]", items.join(", "))
        }
        _ => r.name().to_string(),
    }
}

pub fn render_sc_script(pf: &ScProof) -> String {
    let mut out = String::new();
    let mut formulas = pf.conclusion.iter();
    out.push_str("goal:");
    if let Some(p) = formulas.next() {
        out.push(' ');
        out.push_str(&abs(p));
    }
    out.push('\n');
    for p in formulas {
        out.push_str("  ");
        out.push_str(&abs(p));
        out.push('\n');
    }
    write_sc_block(pf, 0, &mut out);
    out
}

fn write_sc_block(pf: &ScProof, k: usize, out: &mut String) {
    let pad = " ".repeat(k);
    match &pf.step {
        None => {
            out.push_str(&pad);
            out.push_str("open\n");
        }
        Some(step) if step.premises.is_empty() && step.rule == ScRule::Basic => {
            out.push_str(&pad);
            out.push_str("qed: Basic\n");
        }
        Some(step) => {
            out.push_str(&format!("{pad}by: {}\n", sc_rule_text(&step.rule)));
            for p in &step.premises {
                out.push_str(&format!("{pad}  sequent:\n"));
                for f in &p.conclusion {
                    out.push_str(&format!("{pad}    {}\n", abs(f)));
                }
                write_sc_block(p, k + 2, out);
            }
        }
    }
}

/// Parses a rule as written after `by:`, e.g. `GammaExi term: Fun ''a'' []`.
pub fn parse_sc_rule(text: &str) -> Result<ScRule, ScriptError> {
    let frag = Fragment::new(&Line { no: 1, indent: 0, text: text.trim() }, 0)?;
    sc_rule(&frag)
}

pub fn render_sc_rule(r: &ScRule) -> String {
    sc_rule_text(r)
}

// -------------------------------------------------------- natural deduction

pub fn parse_nd_script(src: &str) -> Result<NdProof, ScriptError> {
    let mut lines = Lines::new(src)?;
    let first = lines.take(0, "`judgment:`")?;
    let root = judgment_line(first)?;
    let pf = nd_block(&mut lines, 0, root)?;
    lines.finish()?;
    Ok(pf)
}

fn judgment_line(line: &Line<'_>) -> Result<NdJudgment, ScriptError> {
    if !line.text.starts_with("judgment:") {
        return Err(ScriptError::Layout { line: line.no, message: "expected `judgment:`".into() });
    }
    let frag = Fragment::new(line, "judgment:".len())?;
    let mut args = Args::new(&frag);
    let goal = args.formula()?;
    if !args.cur.eat(&Token::Turnstile) {
        return Err(args.fail(&["`|-`"]));
    }
    args.keyword("from")?;
    let mut assumptions = Vec::new();
    if !args.cur.at_end() {
        loop {
            assumptions.push(args.formula()?);
            if args.cur.at_end() {
                break;
            }
            if !args.cur.eat(&Token::Semicolon) {
                return Err(args.fail(&["`;`", "end of line"]));
            }
        }
    }
    Ok(NdJudgment::new(goal, assumptions))
}

fn nd_block(lines: &mut Lines<'_>, k: usize, conclusion: NdJudgment) -> Result<NdProof, ScriptError> {
    let line = lines.take(k, "`by:`, `qed:` or `open`")?;
    if line.text == "open" {
        return Ok(Derivation::open(conclusion));
    }
    let (is_qed, skip) = if line.text.starts_with("qed:") {
        (true, "qed:".len())
    } else if line.text.starts_with("by:") {
        (false, "by:".len())
    } else {
        return Err(ScriptError::Layout { line: line.no, message: "expected `by:`, `qed:` or `open`".into() });
    };
    let frag = Fragment::new(line, skip)?;
    let rule = nd_rule(&frag)?;
    let mut premises = Vec::new();
    if !is_qed {
        while let Some(l) = lines.peek_at(k + 2) {
            if !l.text.starts_with("judgment:") {
                break;
            }
            let j = judgment_line(l)?;
            lines.idx += 1;
            premises.push(nd_block(lines, k + 2, j)?);
        }
    }
    Ok(Derivation::by(conclusion, rule, premises))
}

fn nd_rule(frag: &Fragment) -> Result<NdRule, ScriptError> {
    let mut args = Args::new(frag);
    let start = args.cur.pos();
    let name = args.rule_name()?;
    if !ND_RULE_NAMES.contains(&name.as_str()) {
        return Err(frag.err(ParseError::new(start, &["rule name"], format!("`{name}`"))));
    }
    let rule = match name.as_str() {
        "Assume" => NdRule::Assume,
        "Boole" => NdRule::Boole,
        "ImpE" => {
            args.keyword("witness")?;
            NdRule::ImpE(args.formula()?)
        }
        "ImpI" => NdRule::ImpI,
        "DisE" => {
            args.keyword("left")?;
            let p = args.formula()?;
            args.keyword("right")?;
            NdRule::DisE(p, args.formula()?)
        }
        "DisI1" => NdRule::DisI1,
        "DisI2" => NdRule::DisI2,
        "ConE1" => {
            args.keyword("other")?;
            NdRule::ConE1(args.formula()?)
        }
        "ConE2" => {
            args.keyword("other")?;
            NdRule::ConE2(args.formula()?)
        }
        "ConI" => NdRule::ConI,
        "ExiE" => {
            args.keyword("body")?;
            let p = args.formula()?;
            args.keyword("const")?;
            NdRule::ExiE(p, args.name()?)
        }
        "ExiI" => {
            args.keyword("term")?;
            NdRule::ExiI(args.term()?)
        }
        "UniE" => {
            args.keyword("body")?;
            let p = args.formula()?;
            args.keyword("term")?;
            NdRule::UniE(p, args.term()?)
        }
        "UniI" => {
            args.keyword("const")?;
            NdRule::UniI(args.name()?)
        }
        _ => unreachable!(),
    };
    args.finish()?;
    Ok(rule)
}

fn nd_rule_text(r: &NdRule) -> String {
    let name = r.name();
    match r {
        NdRule::ImpE(p) => format!("{name} witness: {}", abs(p)),
        NdRule::DisE(p, q) => format!("{name} left: {} right: {}", abs(p), abs(q)),
        NdRule::ConE1(q) | NdRule::ConE2(q) => format!("{name} other: {}", abs(q)),
        NdRule::ExiE(p, c) => format!("{name} body: {} const: {}", abs(p), quote(c)),
        NdRule::ExiI(t) => format!("{name} term: {}", render_term(t)),
        NdRule::UniE(p, t) => format!("{name} body: {} term: {}", abs(p), render_term(t)),
        NdRule::UniI(c) => format!("{name} const: {}", quote(c)),
        _ => name.to_string(),
    }
}

/// Parses a natural deduction rule as written after `by:`.
pub fn parse_nd_rule(text: &str) -> Result<NdRule, ScriptError> {
    let frag = Fragment::new(&Line { no: 1, indent: 0, text: text.trim() }, 0)?;
    nd_rule(&frag)
}

pub fn render_nd_rule(r: &NdRule) -> String {
    nd_rule_text(r)
}

pub fn render_judgment(j: &NdJudgment) -> String {
    let mut s = format!("{} |- from:", abs(&j.goal));
    for (i, a) in j.assumptions.iter().enumerate() {
        s.push_str(if i == 0 { " " } else { "; " });
        s.push_str(&abs(a));
    }
    s
}

pub fn render_nd_script(pf: &NdProof) -> String {
    let mut out = format!("judgment: {}\n", render_judgment(&pf.conclusion));
    write_nd_block(pf, 0, &mut out);
    out
}

fn write_nd_block(pf: &NdProof, k: usize, out: &mut String) {
    let pad = " ".repeat(k);
    match &pf.step {
        None => out.push_str(&format!("{pad}open\n")),
        Some(step) if step.premises.is_empty() && step.rule == NdRule::Assume => {
            out.push_str(&format!("{pad}qed: Assume\n"));
        }
        Some(step) => {
            out.push_str(&format!("{pad}by: {}\n", nd_rule_text(&step.rule)));
            for p in &step.premises {
                out.push_str(&format!("{pad}  judgment: {}\n", render_judgment(&p.conclusion)));
                write_nd_block(p, k + 2, out);
            }
        }
    }
}
