use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::ast::{Classical, Coefficient, Formula, Term};
use super::lexer::{lex, Tok};
use super::ParseError;
use crate::register::QubitSet;

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

type PResult<T> = Result<T, ParseError>;

fn deeper(a: ParseError, b: ParseError) -> ParseError {
    if b.position > a.position {
        b
    } else {
        a
    }
}

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Self { toks: lex(src)?, pos: 0, end: src.len() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.offset(), msg)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.err(format!("expected {wanted}, found {}", t.describe())),
            None => self.err(format!("expected {wanted}, found end of input")),
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, wanted: &str) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == w)
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn finish(&self) -> PResult<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    // classical

    fn cform(&mut self) -> PResult<Classical> {
        let mut lhs = self.cimp()?;
        while self.eat(&Tok::DArrow) {
            let rhs = self.cimp()?;
            lhs = Classical::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn cimp(&mut self) -> PResult<Classical> {
        let lhs = self.cor()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.cimp()?;
            return Ok(Classical::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn cor(&mut self) -> PResult<Classical> {
        let mut lhs = self.cand()?;
        while self.eat(&Tok::Pipe) {
            let rhs = self.cand()?;
            lhs = Classical::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn cand(&mut self) -> PResult<Classical> {
        let mut lhs = self.cunary()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.cunary()?;
            lhs = Classical::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn cunary(&mut self) -> PResult<Classical> {
        if self.eat(&Tok::Tilde) {
            return Ok(Classical::not(self.cunary()?));
        }
        if self.eat(&Tok::LParen) {
            let inner = self.cform()?;
            self.expect(&Tok::RParen, "`)`")?;
            return Ok(inner);
        }
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let out = match s.as_str() {
                    "false" => Classical::False,
                    "true" => Classical::True,
                    _ => Classical::Atom(s.clone()),
                };
                self.pos += 1;
                Ok(out)
            }
            _ => Err(self.unexpected("a classical formula")),
        }
    }

    // terms

    fn qset(&mut self) -> PResult<QubitSet> {
        self.expect(&Tok::LBrace, "`{`")?;
        let mut s = QubitSet::new();
        if self.eat(&Tok::RBrace) {
            return Ok(s);
        }
        loop {
            let at = self.offset();
            let name = self.ident()?;
            if !s.insert(name.clone()) {
                return Err(ParseError::new(at, format!("qubit `{name}` listed twice")));
            }
            if self.eat(&Tok::RBrace) {
                return Ok(s);
            }
            self.expect(&Tok::Comma, "`,` or `}`")?;
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let mut lhs = self.tensor()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.tensor()?;
            lhs = Term::add(lhs, rhs);
        }
        Ok(lhs)
    }

    fn tensor(&mut self) -> PResult<Term> {
        let mut lhs = self.compose()?;
        while self.is_word("ox") {
            self.pos += 1;
            let rhs = self.compose()?;
            lhs = Term::tensor(lhs, rhs);
        }
        Ok(lhs)
    }

    fn compose(&mut self) -> PResult<Term> {
        let mut lhs = self.scaled()?;
        while self.eat(&Tok::Star) {
            let rhs = self.scaled()?;
            lhs = Term::compose(lhs, rhs);
        }
        Ok(lhs)
    }

    fn scaled(&mut self) -> PResult<Term> {
        if let Some(Tok::Int(num)) = self.peek() {
            let at = self.offset();
            let num = *num;
            self.pos += 1;
            let den = if self.eat(&Tok::Slash) {
                match self.peek() {
                    Some(Tok::Int(d)) => {
                        let d = *d;
                        self.pos += 1;
                        d
                    }
                    _ => return Err(self.unexpected("a denominator")),
                }
            } else {
                1
            };
            let r = Coefficient::new(num, den).map_err(|e| ParseError::new(at, format!("{e}")))?;
            self.expect(&Tok::Dot, "`.` after a scale factor")?;
            let t = self.scaled()?;
            return Ok(Term::scale(r, t));
        }
        self.tprimary()
    }

    fn tprimary(&mut self) -> PResult<Term> {
        if self.eat(&Tok::LParen) {
            let t = self.term()?;
            self.expect(&Tok::RParen, "`)`")?;
            return Ok(t);
        }
        if self.eat(&Tok::Dollar) {
            return Ok(Term::Var(self.ident()?));
        }
        let word = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return Err(self.unexpected("an operator term")),
        };
        match word.as_str() {
            "O" => {
                self.pos += 1;
                Ok(Term::Null)
            }
            "Id" => {
                self.pos += 1;
                Ok(Term::Ident)
            }
            "int" if self.peek_at(1) == Some(&Tok::LParen) => {
                self.pos += 2;
                let a = self.cform()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Term::Integral(a))
            }
            "T" if self.peek_at(1) == Some(&Tok::LBracket) => {
                self.pos += 2;
                let at = self.offset();
                let ones = self.qset()?;
                self.expect(&Tok::Semi, "`;`")?;
                let scope = self.qset()?;
                self.expect(&Tok::RBracket, "`]`")?;
                if !ones.is_subset(&scope) {
                    return Err(ParseError::new(at, "in T[A;G], A must be a subset of G"));
                }
                Ok(Term::TOp { ones, scope })
            }
            _ => Err(self.unexpected("an operator term")),
        }
    }

    // quantum

    fn qform(&mut self) -> PResult<Formula> {
        let mut lhs = self.qimp()?;
        while self.eat(&Tok::QIff) {
            let rhs = self.qimp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn qimp(&mut self) -> PResult<Formula> {
        let lhs = self.qor()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.qimp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn qor(&mut self) -> PResult<Formula> {
        let mut lhs = self.qand()?;
        while self.eat(&Tok::QOr) {
            let rhs = self.qand()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn qand(&mut self) -> PResult<Formula> {
        let mut lhs = self.qnot()?;
        while self.eat(&Tok::QAnd) {
            let rhs = self.qnot()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn qnot(&mut self) -> PResult<Formula> {
        if self.eat(&Tok::Bang) {
            return Ok(Formula::not(self.qnot()?));
        }
        self.qatom()
    }

    fn qatom(&mut self) -> PResult<Formula> {
        if self.is_word("QF") {
            self.pos += 1;
            return Ok(Formula::Falsum);
        }
        if self.peek() == Some(&Tok::LBracket) {
            self.pos += 1;
            let g = self.qset()?;
            self.expect(&Tok::RBracket, "`]`")?;
            return Ok(Formula::SubSys(g));
        }
        let start = self.pos;
        let term_err = match self.comparison() {
            Ok(f) => return Ok(f),
            Err(e) => e,
        };
        self.pos = start;
        if self.eat(&Tok::LParen) {
            let inner = self.qform().and_then(|f| {
                self.expect(&Tok::RParen, "`)`")?;
                Ok(f)
            });
            return inner.map_err(|e| deeper(term_err, e));
        }
        Err(term_err)
    }

    fn comparison(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        let ctor: fn(Term, Term) -> Formula = match self.peek() {
            Some(Tok::Le) => Formula::Leq,
            Some(Tok::Eq) => Formula::Eq,
            Some(Tok::Lt) => Formula::Lt,
            // a bare term stands for `t = Id`
            _ => return Ok(Formula::Eq(lhs, Term::Ident)),
        };
        self.pos += 1;
        let rhs = self.term()?;
        Ok(ctor(lhs, rhs))
    }
}

pub fn parse_classical(src: &str) -> Result<Classical, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.cform()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(src)?;
    let f = p.qform()?;
    p.finish()?;
    Ok(f)
}

/// A set literal such as `{qb1,qb2}`.
pub fn parse_qubit_set(src: &str) -> Result<QubitSet, ParseError> {
    let mut p = Parser::new(src)?;
    let s = p.qset()?;
    p.finish()?;
    Ok(s)
}
