//! Lexer and recursive-descent parser shared by every text format.

use std::fmt;

use super::formula::{Formula, EQ};
use super::signature::Signature;
use super::term::{FoTerm, PLUS, TIMES, ZERO};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u64),
    Punct(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownIdentifier,
    Arity,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

const PUNCTS: &[&str] =
    &["->", "=>", "|-", "(", ")", "[", "]", "{", "}", ",", ".", ";", ":", "&", "|", "=", "+", "*", ">", "#", "$", "/"];

const KEYWORDS: &[&str] = &["forall", "exists", "bot"];

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, message: String| ParseError { kind: ParseErrorKind::Syntax, line, col, message };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (tline, tcol) = (line, col);
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let word = match word.as_str() {
                "∀" => "forall".to_string(),
                "∃" => "exists".to_string(),
                _ => word,
            };
            out.push(Token { tok: Tok::Ident(word), line: tline, col: tcol });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let n = text.parse::<u64>().map_err(|_| err(tline, tcol, format!("numeral `{text}` too large")))?;
            out.push(Token { tok: Tok::Num(n), line: tline, col: tcol });
            continue;
        }
        let unicode = match c {
            '∧' => Some(Tok::Punct("&")),
            '∨' => Some(Tok::Punct("|")),
            '→' => Some(Tok::Punct("->")),
            '⊢' => Some(Tok::Punct("|-")),
            '▷' => Some(Tok::Punct(">")),
            '·' => Some(Tok::Punct("*")),
            '⊥' => Some(Tok::Ident("bot".into())),
            '∀' => Some(Tok::Ident("forall".into())),
            '∃' => Some(Tok::Ident("exists".into())),
            _ => None,
        };
        if let Some(tok) = unicode {
            out.push(Token { tok, line: tline, col: tcol });
            i += 1;
            col += 1;
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match PUNCTS.iter().find(|p| rest.starts_with(**p)) {
            Some(p) => {
                out.push(Token { tok: Tok::Punct(p), line: tline, col: tcol });
                i += p.len();
                col += p.len();
            }
            None => return Err(err(tline, tcol, format!("unexpected character `{c}`"))),
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

pub struct Parser<'s> {
    toks: Vec<Token>,
    pos: usize,
    pub sig: &'s Signature,
}

impl<'s> Parser<'s> {
    pub fn new(src: &str, sig: &'s Signature) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0, sig })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    pub fn mark(&self) -> usize {
        self.pos
    }

    pub fn reset(&mut self, mark: usize) {
        self.pos = mark;
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    pub fn is_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == word)
    }

    pub fn eat_punct(&mut self, p: &str) -> bool {
        if self.is_punct(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn error(&self, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError { kind, line: t.line, col: t.col, message: message.into() }
    }

    pub fn syntax(&self, message: impl Into<String>) -> ParseError {
        self.error(ParseErrorKind::Syntax, message)
    }

    pub fn expect_punct(&mut self, p: &str) -> Result<(), ParseError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{p}`, found {}", self.peek())))
        }
    }

    pub fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.syntax(format!("expected identifier, found {other}"))),
        }
    }

    pub fn expect_keyword(&mut self, word: &str) -> Result<(), ParseError> {
        if self.is_ident(word) {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{word}`, found {}", self.peek())))
        }
    }

    pub fn expect_num(&mut self) -> Result<u64, ParseError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            other => Err(self.syntax(format!("expected number, found {other}"))),
        }
    }

    pub fn expect_eof(&self) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.syntax(format!("unexpected {}", self.peek())))
        }
    }

    /// `->` is right associative and binds loosest, then `|`, then `&`.
    pub fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat_punct("->") {
            let rhs = self.formula()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conjunction()?;
        while self.eat_punct("|") {
            let g = self.conjunction()?;
            f = Formula::or(f, g);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while self.eat_punct("&") {
            let g = self.unary()?;
            f = Formula::and(f, g);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(w) if w == "forall" || w == "exists" => {
                self.bump();
                let x = self.variable_name()?;
                self.expect_punct(".")?;
                let body = self.formula()?;
                Ok(if w == "forall" { Formula::forall(&x, body) } else { Formula::exists(&x, body) })
            }
            Tok::Ident(w) if w == "bot" => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Punct("(") => {
                let mark = self.mark();
                if let Ok(f) = self.equation() {
                    return Ok(f);
                }
                self.reset(mark);
                self.bump();
                let f = self.formula()?;
                self.expect_punct(")")?;
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    fn variable_name(&mut self) -> Result<String, ParseError> {
        let x = self.expect_ident()?;
        if KEYWORDS.contains(&x.as_str()) || self.sig.constants.contains(&x) {
            return Err(self.syntax(format!("`{x}` cannot be used as a variable")));
        }
        Ok(x)
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        if let Tok::Ident(r) = self.peek().clone() {
            if let Some(&arity) = self.sig.relations.get(&r) {
                self.bump();
                let args = if self.is_punct("(") { self.term_args()? } else { Vec::new() };
                if args.len() != arity {
                    return Err(self.error(
                        ParseErrorKind::Arity,
                        format!("relation `{r}` expects {arity} arguments, got {}", args.len()),
                    ));
                }
                return Ok(Formula::Atom(r, args));
            }
            let is_term_start = self.sig.constants.contains(&r)
                || self.sig.functions.contains_key(&r)
                || !matches!(self.peek_at(1), Tok::Punct("(") | Tok::Eof);
            if !is_term_start {
                return Err(self.error(ParseErrorKind::UnknownIdentifier, format!("unknown identifier `{r}`")));
            }
        }
        self.equation()
    }

    fn equation(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.term()?;
        if !self.is_punct("=") {
            if let FoTerm::Var(v) = &lhs {
                return Err(self.error(ParseErrorKind::UnknownIdentifier, format!("unknown identifier `{v}`")));
            }
            return Err(self.syntax(format!("expected `=`, found {}", self.peek())));
        }
        if self.sig.relations.get(EQ) != Some(&2) {
            return Err(self.error(ParseErrorKind::UnknownIdentifier, "unknown identifier `=`"));
        }
        self.bump();
        let rhs = self.term()?;
        Ok(Formula::eq(lhs, rhs))
    }

    fn term_args(&mut self) -> Result<Vec<FoTerm>, ParseError> {
        self.expect_punct("(")?;
        let mut args = vec![self.term()?];
        while self.eat_punct(",") {
            args.push(self.term()?);
        }
        self.expect_punct(")")?;
        Ok(args)
    }

    pub fn term(&mut self) -> Result<FoTerm, ParseError> {
        let mut t = self.product()?;
        while self.is_punct("+") {
            self.binary_declared(PLUS)?;
            self.bump();
            let u = self.product()?;
            t = FoTerm::plus(t, u);
        }
        Ok(t)
    }

    fn product(&mut self) -> Result<FoTerm, ParseError> {
        let mut t = self.term_atom()?;
        while self.is_punct("*") {
            self.binary_declared(TIMES)?;
            self.bump();
            let u = self.term_atom()?;
            t = FoTerm::times(t, u);
        }
        Ok(t)
    }

    fn binary_declared(&self, op: &str) -> Result<(), ParseError> {
        if self.sig.functions.get(op) == Some(&2) {
            Ok(())
        } else {
            Err(self.error(ParseErrorKind::UnknownIdentifier, format!("unknown identifier `{op}`")))
        }
    }

    fn term_atom(&mut self) -> Result<FoTerm, ParseError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                if self.sig.has_numerals() {
                    self.bump();
                    Ok(FoTerm::numeral(n))
                } else if n == 0 && self.sig.constants.contains(ZERO) {
                    self.bump();
                    Ok(FoTerm::zero())
                } else {
                    Err(self.error(ParseErrorKind::UnknownIdentifier, format!("unknown identifier `{n}`")))
                }
            }
            Tok::Punct("(") => {
                self.bump();
                let t = self.term()?;
                self.expect_punct(")")?;
                Ok(t)
            }
            Tok::Ident(name) => {
                if KEYWORDS.contains(&name.as_str()) {
                    return Err(self.syntax(format!("expected a term, found `{name}`")));
                }
                if self.is_punct_at(1, "(") {
                    let Some(&arity) = self.sig.functions.get(&name) else {
                        return Err(
                            self.error(ParseErrorKind::UnknownIdentifier, format!("unknown identifier `{name}`"))
                        );
                    };
                    self.bump();
                    let args = self.term_args()?;
                    if args.len() != arity {
                        return Err(self.error(
                            ParseErrorKind::Arity,
                            format!("function `{name}` expects {arity} arguments, got {}", args.len()),
                        ));
                    }
                    return Ok(FoTerm::App(name, args));
                }
                if self.sig.constants.contains(&name) {
                    self.bump();
                    return Ok(FoTerm::Const(name));
                }
                if let Some(arity) = self.sig.functions.get(&name) {
                    return Err(
                        self.error(ParseErrorKind::Arity, format!("function `{name}` expects {arity} arguments"))
                    );
                }
                if self.sig.relations.contains_key(&name) {
                    return Err(self.syntax(format!("relation `{name}` used as a term")));
                }
                self.bump();
                Ok(FoTerm::Var(name))
            }
            other => Err(self.syntax(format!("expected a term, found {other}"))),
        }
    }

    fn is_punct_at(&self, k: usize, p: &str) -> bool {
        matches!(self.peek_at(k), Tok::Punct(q) if *q == p)
    }
}

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let f = p.formula()?;
    p.expect_eof()?;
    Ok(f)
}

pub fn parse_term(text: &str, sig: &Signature) -> Result<FoTerm, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}
