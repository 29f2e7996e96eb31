//! Recursive-descent parser for the four formula languages.
//!
//! ```text
//! formula    := disj ['=>' formula]
//! disj       := conj ('|' conj)*
//! conj       := lit ('&' lit)*
//! lit        := '!' lit | '(' formula ')' | atom
//! atom       := terms REL ['-'] rat
//! terms      := ['+'|'-'] sterm (('+'|'-') sterm)*
//! sterm      := [rat '*'] base
//! base       := 'E' '(' gamble ')'   (E)
//!             | 'L' '(' prop ')'     (QU)
//!             | prop                 (G)
//!             | ident                (F)
//! gamble     := ['+'|'-'] gterm (('+'|'-') gterm)*
//! gterm      := [rat '*'] prop
//! prop       := pdisj ['=>' prop]
//! pdisj      := pconj ('|' pconj)* ;  pconj := plit ('&' plit)*
//! plit       := '!' plit | '(' prop ')' | ident | 'true' | 'false'
//! REL        := '>=' | '>' | '<=' | '<' | '='
//! rat        := digits ['/' digits]
//! ```
//!
//! In `G` the operators `!`, `&`, `|` and parentheses serve both the
//! propositional and the formula level; a literal is read as a gamble
//! inequality whenever that parse succeeds.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{AnyFormula, ExpFormula, Formula, FuncIneqFormula, FuncVar, GambleIneqFormula, Indicator, Ineq, Language, LikelihoodFormula, Rel};
use crate::atoms::{is_identifier, PropFormula, SyntacticGamble};
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(Rational),
    E,
    L,
    True,
    False,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Rel(Rel),
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(r) => format!("`{r}`"),
        Tok::End => "end of input".into(),
        Tok::E => "`E`".into(),
        Tok::L => "`L`".into(),
        Tok::True => "`true`".into(),
        Tok::False => "`false`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Bang => "`!`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Pipe => "`|`".into(),
        Tok::Arrow => "`=>`".into(),
        Tok::Rel(r) => format!("`{}`", r.symbol()),
    }
}

fn syntax(pos: usize, message: impl Into<String>) -> Error {
    Error::Syntax { pos, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let two = |s: &[u8]| bytes[i..].starts_with(s);
        let tok = if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let num: BigInt = text[start..i].parse().expect("digits");
            let mut den = BigInt::one();
            if i + 1 < bytes.len() && bytes[i] == b'/' && bytes[i + 1].is_ascii_digit() {
                let ds = i + 1;
                i = ds;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                den = text[ds..i].parse().expect("digits");
                if den.is_zero() {
                    return Err(syntax(start, "zero denominator"));
                }
            }
            out.push((Tok::Num(Rational::new(num, den)), start));
            continue;
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let tok = match word {
                "E" => Tok::E,
                "L" => Tok::L,
                "true" => Tok::True,
                "false" => Tok::False,
                w if is_identifier(w) => Tok::Ident(w.to_string()),
                w => return Err(syntax(start, format!("`{w}` is not an identifier (identifiers start with a lowercase letter)"))),
            };
            out.push((tok, start));
            continue;
        } else if two(b"=>") {
            i += 2;
            Tok::Arrow
        } else if two(b">=") {
            i += 2;
            Tok::Rel(Rel::Ge)
        } else if two(b"<=") {
            i += 2;
            Tok::Rel(Rel::Le)
        } else {
            i += 1;
            match c {
                b'>' => Tok::Rel(Rel::Gt),
                b'<' => Tok::Rel(Rel::Lt),
                b'=' => Tok::Rel(Rel::Eq),
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'*' => Tok::Star,
                b'!' => Tok::Bang,
                b'&' => Tok::Amp,
                b'|' => Tok::Pipe,
                _ => {
                    let ch = text[start..].chars().next().expect("nonempty");
                    return Err(syntax(start, format!("unexpected character `{ch}`")));
                }
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

enum RawAtom {
    E(Ineq<SyntacticGamble>),
    QU(Ineq<PropFormula>),
    G(Ineq<Indicator>),
    F(Ineq<FuncVar>),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    lang: Language,
}

fn error_pos(e: &Error) -> usize {
    match e {
        Error::Syntax { pos, .. } | Error::WrongLanguage { pos, .. } => *pos,
        _ => 0,
    }
}

impl Parser {
    fn new(text: &str, lang: Language) -> Result<Self> {
        Ok(Parser { toks: lex(text)?, i: 0, lang })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if t != Tok::End {
            self.i += 1;
        }
        t
    }

    /// Undoes the last `bump` that returned `t`.
    fn unbump(&mut self, t: &Tok) {
        if *t != Tok::End {
            self.i -= 1;
        }
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {}", describe(t))))
        }
    }

    fn unexpected(&self, what: &str) -> Error {
        syntax(self.pos(), format!("{what}, found {}", describe(self.peek())))
    }

    fn wrong_language(&self, message: impl Into<String>) -> Error {
        Error::WrongLanguage { pos: self.pos(), message: message.into() }
    }

    fn finish(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("expected end of input"))
        }
    }

    fn formula(&mut self) -> Result<Formula<RawAtom>> {
        let lhs = self.disj()?;
        if self.eat(&Tok::Arrow) {
            Ok(Formula::implies(lhs, self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn disj(&mut self) -> Result<Formula<RawAtom>> {
        let mut f = self.conj()?;
        while self.eat(&Tok::Pipe) {
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula<RawAtom>> {
        let mut f = self.lit()?;
        while self.eat(&Tok::Amp) {
            f = Formula::and(f, self.lit()?);
        }
        Ok(f)
    }

    fn lit(&mut self) -> Result<Formula<RawAtom>> {
        if self.lang == Language::G && matches!(self.peek(), Tok::Bang | Tok::LParen) {
            let save = self.i;
            let first = match self.atom() {
                Ok(a) => return Ok(Formula::Atom(a)),
                Err(e) => e,
            };
            self.i = save;
            return self.connective_lit().map_err(|second| {
                if error_pos(&first) > error_pos(&second) {
                    first
                } else {
                    second
                }
            });
        }
        self.connective_lit()
    }

    fn connective_lit(&mut self) -> Result<Formula<RawAtom>> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.lit()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            _ => Ok(Formula::Atom(self.atom()?)),
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        match self.bump() {
            Tok::Num(r) => Ok(r),
            t => {
                self.unbump(&t);
                Err(self.unexpected("expected a rational number"))
            }
        }
    }

    fn signed_rational(&mut self) -> Result<Rational> {
        if self.eat(&Tok::Minus) {
            Ok(-self.rational()?)
        } else {
            self.eat(&Tok::Plus);
            self.rational()
        }
    }

    /// `['+'|'-'] sterm (('+'|'-') sterm)*` with a per-term base parser.
    fn sum<T>(&mut self, base: fn(&mut Self) -> Result<T>) -> Result<Vec<(Rational, T)>> {
        let mut terms = Vec::new();
        let mut sign = if self.eat(&Tok::Minus) {
            -Rational::one()
        } else {
            self.eat(&Tok::Plus);
            Rational::one()
        };
        loop {
            let coeff = if let Tok::Num(r) = self.peek().clone() {
                self.bump();
                self.expect(&Tok::Star)?;
                r
            } else {
                Rational::one()
            };
            terms.push((sign * coeff, base(self)?));
            sign = match self.peek() {
                Tok::Plus => Rational::one(),
                Tok::Minus => -Rational::one(),
                _ => return Ok(terms),
            };
            self.bump();
        }
    }

    fn atom(&mut self) -> Result<RawAtom> {
        let atom = match self.lang {
            Language::E => RawAtom::E(self.ineq(Parser::exp_base)?),
            Language::QU => RawAtom::QU(self.ineq(Parser::likelihood_base)?),
            Language::G => RawAtom::G(self.ineq(|p| p.prop().map(Indicator))?),
            Language::F => RawAtom::F(self.ineq(Parser::func_base)?),
        };
        Ok(atom)
    }

    fn ineq<T>(&mut self, base: fn(&mut Self) -> Result<T>) -> Result<Ineq<T>> {
        let terms = self.sum(base)?;
        let rel = match self.bump() {
            Tok::Rel(r) => r,
            t => {
                self.unbump(&t);
                return Err(self.unexpected("expected `+`, `-` or a relation (>=, >, <=, <, =)"));
            }
        };
        let rhs = self.signed_rational()?;
        Ok(Ineq { terms, rel, rhs })
    }

    fn exp_base(&mut self) -> Result<SyntacticGamble> {
        match self.peek() {
            Tok::E => {
                self.bump();
                self.expect(&Tok::LParen)?;
                let g = self.gamble()?;
                self.expect(&Tok::RParen)?;
                Ok(g)
            }
            Tok::L => Err(self.wrong_language("likelihood terms L(…) belong to QU; use E(…)")),
            Tok::Ident(_) | Tok::True | Tok::False | Tok::Bang | Tok::LParen => {
                Err(self.wrong_language("bare gamble; expectation terms are written E(…)"))
            }
            _ => Err(self.unexpected("expected an expectation term E(…)")),
        }
    }

    fn likelihood_base(&mut self) -> Result<PropFormula> {
        match self.peek() {
            Tok::L => {
                self.bump();
                self.expect(&Tok::LParen)?;
                let p = self.prop()?;
                self.expect(&Tok::RParen)?;
                Ok(p)
            }
            Tok::E => Err(self.wrong_language("expectation terms E(…) belong to E; use L(…)")),
            Tok::Ident(_) | Tok::True | Tok::False | Tok::Bang | Tok::LParen => {
                Err(self.wrong_language("bare formula; likelihood terms are written L(…)"))
            }
            _ => Err(self.unexpected("expected a likelihood term L(…)")),
        }
    }

    fn func_base(&mut self) -> Result<FuncVar> {
        match self.bump() {
            Tok::Ident(v) => Ok(FuncVar(v)),
            t @ (Tok::E | Tok::L) => {
                self.unbump(&t);
                Err(self.wrong_language("function inequalities have no expectation or likelihood terms"))
            }
            t @ (Tok::True | Tok::False) => {
                self.unbump(&t);
                Err(self.wrong_language("function inequalities range over variables, not propositions"))
            }
            t => {
                self.unbump(&t);
                Err(self.unexpected("expected a function variable"))
            }
        }
    }

    fn gamble(&mut self) -> Result<SyntacticGamble> {
        Ok(SyntacticGamble::new(self.sum(Parser::prop)?))
    }

    fn prop(&mut self) -> Result<PropFormula> {
        let lhs = self.pdisj()?;
        if self.eat(&Tok::Arrow) {
            Ok(PropFormula::implies(lhs, self.prop()?))
        } else {
            Ok(lhs)
        }
    }

    fn pdisj(&mut self) -> Result<PropFormula> {
        let mut f = self.pconj()?;
        while self.eat(&Tok::Pipe) {
            f = PropFormula::or(f, self.pconj()?);
        }
        Ok(f)
    }

    fn pconj(&mut self) -> Result<PropFormula> {
        let mut f = self.plit()?;
        while self.eat(&Tok::Amp) {
            f = PropFormula::and(f, self.plit()?);
        }
        Ok(f)
    }

    fn plit(&mut self) -> Result<PropFormula> {
        match self.bump() {
            Tok::Bang => Ok(PropFormula::not(self.plit()?)),
            Tok::LParen => {
                let p = self.prop()?;
                self.expect(&Tok::RParen)?;
                Ok(p)
            }
            Tok::Ident(x) => Ok(PropFormula::Prop(x)),
            Tok::True => Ok(PropFormula::True),
            Tok::False => Ok(PropFormula::False),
            t @ (Tok::E | Tok::L) => {
                self.unbump(&t);
                Err(self.wrong_language("expectation and likelihood terms cannot be nested"))
            }
            t => {
                self.unbump(&t);
                Err(self.unexpected("expected a propositional formula"))
            }
        }
    }
}

fn parse_raw(text: &str, lang: Language) -> Result<Formula<RawAtom>> {
    let mut p = Parser::new(text, lang)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

fn mismatch() -> Error {
    Error::Internal("parser produced an atom of another language".into())
}

/// Parses a formula of the given language.
pub fn parse(text: &str, lang: Language) -> Result<AnyFormula> {
    Ok(match lang {
        Language::E => AnyFormula::E(parse_exp(text)?),
        Language::QU => AnyFormula::QU(parse_likelihood(text)?),
        Language::G => AnyFormula::G(parse_gamble_formula(text)?),
        Language::F => AnyFormula::F(parse_func(text)?),
    })
}

pub fn parse_exp(text: &str) -> Result<ExpFormula> {
    parse_raw(text, Language::E)?.try_map_atoms(&mut |a| match a {
        RawAtom::E(x) => Ok(x.clone()),
        _ => Err(mismatch()),
    })
}

pub fn parse_likelihood(text: &str) -> Result<LikelihoodFormula> {
    parse_raw(text, Language::QU)?.try_map_atoms(&mut |a| match a {
        RawAtom::QU(x) => Ok(x.clone()),
        _ => Err(mismatch()),
    })
}

pub fn parse_gamble_formula(text: &str) -> Result<GambleIneqFormula> {
    parse_raw(text, Language::G)?.try_map_atoms(&mut |a| match a {
        RawAtom::G(x) => Ok(x.clone()),
        _ => Err(mismatch()),
    })
}

pub fn parse_func(text: &str) -> Result<FuncIneqFormula> {
    parse_raw(text, Language::F)?.try_map_atoms(&mut |a| match a {
        RawAtom::F(x) => Ok(x.clone()),
        _ => Err(mismatch()),
    })
}

/// Parses a propositional formula.
pub fn parse_prop(text: &str) -> Result<PropFormula> {
    let mut p = Parser::new(text, Language::G)?;
    let f = p.prop()?;
    p.finish()?;
    Ok(f)
}

/// Parses a syntactic gamble `c₁*φ₁ + c₂*φ₂ - …`.
pub fn parse_syntactic_gamble(text: &str) -> Result<SyntacticGamble> {
    let mut p = Parser::new(text, Language::G)?;
    let g = p.gamble()?;
    p.finish()?;
    Ok(g)
}
