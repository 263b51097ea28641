use alloc::string::String;
use core::fmt::{self, Write};

use super::ast::{Classical, Formula, Term};
use crate::register::QubitSet;

fn write_set(out: &mut String, s: &QubitSet) {
    out.push('{');
    for (i, q) in s.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(q);
    }
    out.push('}');
}

fn paren_if(out: &mut String, cond: bool, body: impl FnOnce(&mut String)) {
    if cond {
        out.push('(');
    }
    body(out);
    if cond {
        out.push(')');
    }
}

fn classical_prec(a: &Classical) -> u8 {
    match a {
        Classical::Iff(..) => 1,
        Classical::Implies(..) => 2,
        Classical::Or(..) => 3,
        Classical::And(..) => 4,
        Classical::Not(_) => 5,
        Classical::False | Classical::True | Classical::Atom(_) => 6,
    }
}

fn write_classical(out: &mut String, a: &Classical, min: u8) {
    let p = classical_prec(a);
    paren_if(out, p < min, |out| match a {
        Classical::False => out.push_str("false"),
        Classical::True => out.push_str("true"),
        Classical::Atom(x) => out.push_str(x),
        Classical::Not(x) => {
            out.push('~');
            write_classical(out, x, 5);
        }
        Classical::Iff(x, y) | Classical::Or(x, y) | Classical::And(x, y) => {
            let op = match a {
                Classical::Iff(..) => " <-> ",
                Classical::Or(..) => " | ",
                _ => " & ",
            };
            write_classical(out, x, p);
            out.push_str(op);
            write_classical(out, y, p + 1);
        }
        Classical::Implies(x, y) => {
            write_classical(out, x, p + 1);
            out.push_str(" -> ");
            write_classical(out, y, p);
        }
    });
}

fn term_prec(t: &Term) -> u8 {
    match t {
        Term::Add(..) => 1,
        Term::Tensor(..) => 2,
        Term::Compose(..) => 3,
        Term::Scale(..) => 4,
        _ => 5,
    }
}

fn write_term(out: &mut String, t: &Term, min: u8) {
    let p = term_prec(t);
    paren_if(out, p < min, |out| match t {
        Term::Null => out.push('O'),
        Term::Ident => out.push_str("Id"),
        Term::Var(x) => {
            out.push('$');
            out.push_str(x);
        }
        Term::Integral(a) => {
            out.push_str("int(");
            write_classical(out, a, 0);
            out.push(')');
        }
        Term::TOp { ones, scope } => {
            out.push_str("T[");
            write_set(out, ones);
            out.push(';');
            write_set(out, scope);
            out.push(']');
        }
        Term::Scale(r, x) => {
            let _ = write!(out, "{r}.");
            write_term(out, x, 4);
        }
        Term::Add(x, y) | Term::Tensor(x, y) | Term::Compose(x, y) => {
            let op = match t {
                Term::Add(..) => " + ",
                Term::Tensor(..) => " ox ",
                _ => " * ",
            };
            write_term(out, x, p);
            out.push_str(op);
            write_term(out, y, p + 1);
        }
    });
}

fn formula_prec(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        Formula::Not(_) => 5,
        _ => 6,
    }
}

fn write_formula(out: &mut String, f: &Formula, min: u8) {
    let p = formula_prec(f);
    paren_if(out, p < min, |out| match f {
        Formula::Falsum => out.push_str("QF"),
        Formula::SubSys(g) => {
            out.push('[');
            write_set(out, g);
            out.push(']');
        }
        Formula::Leq(a, b) | Formula::Eq(a, b) | Formula::Lt(a, b) => {
            let op = match f {
                Formula::Leq(..) => " <= ",
                Formula::Eq(..) => " = ",
                _ => " < ",
            };
            write_term(out, a, 0);
            out.push_str(op);
            write_term(out, b, 0);
        }
        Formula::Not(x) => {
            out.push('!');
            write_formula(out, x, 5);
        }
        Formula::Iff(x, y) | Formula::Or(x, y) | Formula::And(x, y) => {
            let op = match f {
                Formula::Iff(..) => " <=> ",
                Formula::Or(..) => " \\/ ",
                _ => " /\\ ",
            };
            write_formula(out, x, p);
            out.push_str(op);
            write_formula(out, y, p + 1);
        }
        Formula::Implies(x, y) => {
            write_formula(out, x, p + 1);
            out.push_str(" => ");
            write_formula(out, y, p);
        }
    });
}

pub fn print_classical(a: &Classical) -> String {
    let mut s = String::new();
    write_classical(&mut s, a, 0);
    s
}

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t, 0);
    s
}

pub fn print_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, 0);
    s
}

pub fn print_qubit_set(g: &QubitSet) -> String {
    let mut s = String::new();
    write_set(&mut s, g);
    s
}

impl fmt::Display for Classical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_classical(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}
