use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    Ident(String),
    /// Isabelle-style quoted name, `''p''`.
    Quoted(String),
    Nat(usize),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Semicolon,
    Colon,
    Dot,
    Hash,
    Tilde,
    Arrow,
    Or,
    And,
    Turnstile,
    Assign,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(s) => write!(f, "`{s}`"),
            Token::Quoted(s) => write!(f, "`''{s}''`"),
            Token::Nat(n) => write!(f, "`{n}`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::LBracket => f.write_str("`[`"),
            Token::RBracket => f.write_str("`]`"),
            Token::LBrace => f.write_str("`{`"),
            Token::RBrace => f.write_str("`}`"),
            Token::Comma => f.write_str("`,`"),
            Token::Semicolon => f.write_str("`;`"),
            Token::Colon => f.write_str("`:`"),
            Token::Dot => f.write_str("`.`"),
            Token::Hash => f.write_str("`#`"),
            Token::Tilde => f.write_str("`~`"),
            Token::Arrow => f.write_str("`-->`"),
            Token::Or => f.write_str("`\\/`"),
            Token::And => f.write_str("`/\\`"),
            Token::Turnstile => f.write_str("`|-`"),
            Token::Assign => f.write_str("`:=`"),
        }
    }
}

/// A token with its byte offset in the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lexeme {
    pub token: Token,
    pub pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub position: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl ParseError {
    pub fn new(position: usize, expected: &[&str], found: impl Into<String>) -> ParseError {
        ParseError {
            position,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: found.into(),
        }
    }

    /// Shifts the reported offset, for errors raised on a substring.
    pub fn offset(mut self, by: usize) -> ParseError {
        self.position += by;
        self
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Lexeme>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let token = match c {
            b'(' => single(&mut i, Token::LParen),
            b')' => single(&mut i, Token::RParen),
            b'[' => single(&mut i, Token::LBracket),
            b']' => single(&mut i, Token::RBracket),
            b'{' => single(&mut i, Token::LBrace),
            b'}' => single(&mut i, Token::RBrace),
            b',' => single(&mut i, Token::Comma),
            b';' => single(&mut i, Token::Semicolon),
            b'.' => single(&mut i, Token::Dot),
            b'#' => single(&mut i, Token::Hash),
            b'~' => single(&mut i, Token::Tilde),
            b':' if bytes.get(i + 1) == Some(&b'=') => {
                i += 2;
                Token::Assign
            }
            b':' => single(&mut i, Token::Colon),
            b'-' if src[i..].starts_with("-->") => {
                i += 3;
                Token::Arrow
            }
            b'\\' if bytes.get(i + 1) == Some(&b'/') => {
                i += 2;
                Token::Or
            }
            b'/' if bytes.get(i + 1) == Some(&b'\\') => {
                i += 2;
                Token::And
            }
            b'|' if bytes.get(i + 1) == Some(&b'-') => {
                i += 2;
                Token::Turnstile
            }
            b'\'' if bytes.get(i + 1) == Some(&b'\'') => {
                let body = i + 2;
                let end = src[body..]
                    .find("''")
                    .ok_or_else(|| ParseError::new(start, &["closing `''`"], "end of input"))?;
                let name = &src[body..body + end];
                if !super::Name::is_valid(name) {
                    return Err(ParseError::new(body, &["identifier"], format!("`{name}`")));
                }
                i = body + end + 2;
                Token::Quoted(name.to_string())
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = src[start..i]
                    .parse()
                    .map_err(|_| ParseError::new(start, &["natural number"], &src[start..i]))?;
                Token::Nat(n)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                Token::Ident(src[start..i].to_string())
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError::new(start, &["token"], format!("`{ch}`")));
            }
        };
        out.push(Lexeme { token, pos: start });
    }
    Ok(out)
}

fn single(i: &mut usize, t: Token) -> Token {
    *i += 1;
    t
}

/// Cursor over a token slice shared by the notation and script parsers.
pub(crate) struct Cursor<'a> {
    toks: &'a [Lexeme],
    pub idx: usize,
    end: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Lexeme], end: usize) -> Cursor<'a> {
        Cursor { toks, idx: 0, end }
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.idx).map(|l| &l.token)
    }

    pub fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |l| l.pos)
    }

    pub fn next(&mut self) -> Option<&'a Token> {
        let t = self.peek();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.idx >= self.toks.len()
    }

    pub fn found(&self) -> String {
        self.peek().map_or_else(|| "end of input".to_string(), |t| t.to_string())
    }

    pub fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::new(self.pos(), expected, self.found())
    }

    pub fn expect(&mut self, t: &Token, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(t) {
            self.idx += 1;
            Ok(())
        } else {
            Err(self.error(&[what]))
        }
    }

    pub fn eat(&mut self, t: &Token) -> bool {
        if self.peek() == Some(t) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Token::Ident(s)) if s == kw) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Token> {
        tokenize(s).unwrap().into_iter().map(|l| l.token).collect()
    }

    #[test]
    fn operators_and_names() {
        assert_eq!(
            toks("~p --> q \\/ r /\\ s"),
            vec![
                Token::Tilde,
                Token::Ident("p".into()),
                Token::Arrow,
                Token::Ident("q".into()),
                Token::Or,
                Token::Ident("r".into()),
                Token::And,
                Token::Ident("s".into()),
            ]
        );
        assert_eq!(
            toks("Pre ''p'' [Var 12]"),
            vec![
                Token::Ident("Pre".into()),
                Token::Quoted("p".into()),
                Token::LBracket,
                Token::Ident("Var".into()),
                Token::Nat(12),
                Token::RBracket,
            ]
        );
        assert_eq!(toks("A:=p; x|-"), vec![
            Token::Ident("A".into()),
            Token::Assign,
            Token::Ident("p".into()),
            Token::Semicolon,
            Token::Ident("x".into()),
            Token::Turnstile,
        ]);
    }

    #[test]
    fn errors_carry_offsets() {
        let e = tokenize("p --> $").unwrap_err();
        assert_eq!(e.position, 6);
        let e = tokenize("Pre ''p []").unwrap_err();
        assert_eq!(e.position, 4);
    }
}
