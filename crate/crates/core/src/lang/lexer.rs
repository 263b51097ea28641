use alloc::string::String;
use alloc::vec::Vec;

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(u64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Dollar,
    Dot,
    Slash,
    Tilde,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    Le,
    Lt,
    Eq,
    Imp,
    QIff,
    Bang,
    QAnd,
    QOr,
    Plus,
    Star,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        use alloc::format;
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            other => {
                let s = match other {
                    Tok::LParen => "(",
                    Tok::RParen => ")",
                    Tok::LBrace => "{",
                    Tok::RBrace => "}",
                    Tok::LBracket => "[",
                    Tok::RBracket => "]",
                    Tok::Comma => ",",
                    Tok::Semi => ";",
                    Tok::Dollar => "$",
                    Tok::Dot => ".",
                    Tok::Slash => "/",
                    Tok::Tilde => "~",
                    Tok::Amp => "&",
                    Tok::Pipe => "|",
                    Tok::Arrow => "->",
                    Tok::DArrow => "<->",
                    Tok::Le => "<=",
                    Tok::Lt => "<",
                    Tok::Eq => "=",
                    Tok::Imp => "=>",
                    Tok::QIff => "<=>",
                    Tok::Bang => "!",
                    Tok::QAnd => "/\\",
                    Tok::QOr => "\\/",
                    Tok::Plus => "+",
                    Tok::Star => "*",
                    Tok::Ident(_) | Tok::Int(_) => unreachable!(),
                };
                format!("`{s}`")
            }
        }
    }
}

const SYMBOLS: &[(&str, Tok)] = &[
    ("<=>", Tok::QIff),
    ("<->", Tok::DArrow),
    ("<=", Tok::Le),
    ("<", Tok::Lt),
    ("=>", Tok::Imp),
    ("=", Tok::Eq),
    ("->", Tok::Arrow),
    ("/\\", Tok::QAnd),
    ("\\/", Tok::QOr),
    ("/", Tok::Slash),
    ("(", Tok::LParen),
    (")", Tok::RParen),
    ("{", Tok::LBrace),
    ("}", Tok::RBrace),
    ("[", Tok::LBracket),
    ("]", Tok::RBracket),
    (",", Tok::Comma),
    (";", Tok::Semi),
    ("$", Tok::Dollar),
    (".", Tok::Dot),
    ("~", Tok::Tilde),
    ("&", Tok::Amp),
    ("|", Tok::Pipe),
    ("!", Tok::Bang),
    ("+", Tok::Plus),
    ("*", Tok::Star),
];

/// Tokens paired with their byte offsets.
pub(crate) fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < bytes.len() {
        let ch = bytes[i];
        if ch.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if ch.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].into()), start));
            continue;
        }
        if ch.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i]
                .parse::<u64>()
                .map_err(|_| ParseError::new(start, "integer literal too large"))?;
            out.push((Tok::Int(n), start));
            continue;
        }
        for (sym, tok) in SYMBOLS {
            if src[i..].starts_with(sym) {
                out.push((tok.clone(), i));
                i += sym.len();
                continue 'outer;
            }
        }
        let bad = src[i..].chars().next().unwrap_or('?');
        return Err(ParseError::new(i, alloc::format!("unexpected character `{bad}`")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn longest_match() {
        let toks: Vec<Tok> = lex("<=> <-> <= < => = -> /\\ \\/ /").unwrap().into_iter().map(|t| t.0).collect();
        assert_eq!(
            toks,
            vec![Tok::QIff, Tok::DArrow, Tok::Le, Tok::Lt, Tok::Imp, Tok::Eq, Tok::Arrow, Tok::QAnd, Tok::QOr, Tok::Slash]
        );
    }

    #[test]
    fn rational_scale() {
        let toks: Vec<Tok> = lex("1/2.Id").unwrap().into_iter().map(|t| t.0).collect();
        assert_eq!(toks, vec![Tok::Int(1), Tok::Slash, Tok::Int(2), Tok::Dot, Tok::Ident("Id".into())]);
    }

    #[test]
    fn reports_position() {
        let e = lex("qb1 # qb2").unwrap_err();
        assert_eq!(e.position, 4);
    }
}
