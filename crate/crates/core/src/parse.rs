//! Text grammars for polynomials, derivations, nonassociative words and
//! associative polynomials.
//!
//! ```text
//! polynomial   3/2 x1^2 x3 - l12 l23 + x1^-1
//! derivation   3/2 x1^2 x2 d1 - x3 d2
//! word         ((y1*y2)*y3)
//! element      1 (y2*(y1*y3)) + 1 ((y1*y2)*y3) - 1 ((y2*y1)*y3)
//! associative  z1 z2 - z2 z1
//! ```
//!
//! All grammars are ASCII. Factors may be separated by whitespace or `*`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::freelsa::{Word, WordCombination};
use crate::opid::AssocPoly;
use crate::poly::{Monomial, Polynomial, VarSet};
use crate::rational::Rational;
use crate::witt::Derivation;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Slash,
    Caret,
    Star,
    Comma,
    LParen,
    RParen,
    Eof,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Lexer {
    fn new(src: &str) -> Result<Self> {
        let chars: Vec<(usize, char)> = src.char_indices().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let (at, c) = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let single = match c {
                '+' => Some(Tok::Plus),
                '-' => Some(Tok::Minus),
                '/' => Some(Tok::Slash),
                '^' => Some(Tok::Caret),
                '*' => Some(Tok::Star),
                ',' => Some(Tok::Comma),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                _ => None,
            };
            if let Some(t) = single {
                toks.push((t, at));
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                toks.push((Tok::Num(s.parse().unwrap()), at));
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                toks.push((
                    Tok::Ident(chars[start..i].iter().map(|&(_, c)| c).collect()),
                    at,
                ));
            } else {
                return Err(Error::Parse {
                    pos: at,
                    msg: format!("unexpected character {c:?}"),
                });
            }
        }
        toks.push((Tok::Eof, src.len()));
        Ok(Lexer { toks, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.at(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expect_eof(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    /// `int ['/' int]` if the next token is a number.
    fn rational(&mut self) -> Result<Option<Rational>> {
        let Tok::Num(n) = self.peek().clone() else {
            return Ok(None);
        };
        self.next();
        if *self.peek() == Tok::Slash {
            self.next();
            let Tok::Num(d) = self.peek().clone() else {
                return self.err("expected denominator");
            };
            if d == BigInt::from(0) {
                return self.err("zero denominator");
            }
            self.next();
            let r = Rational::from_bigint(n) / Rational::from_bigint(d);
            return Ok(Some(r));
        }
        Ok(Some(Rational::from_bigint(n)))
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = if *self.peek() == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        let Tok::Num(n) = self.peek().clone() else {
            return self.err("expected integer");
        };
        let v: i64 = i64::try_from(n).or_else(|_| self.err("integer out of range"))?;
        self.next();
        Ok(if neg { -v } else { v })
    }

    /// A signed sum of terms, each an optional rational coefficient followed by
    /// whatever `item` parses. `item` returns `None` when nothing is there.
    fn signed_sum<T>(
        &mut self,
        mut item: impl FnMut(&mut Lexer) -> Result<Option<T>>,
    ) -> Result<Vec<(Rational, Option<T>)>> {
        let mut out = Vec::new();
        let mut first = true;
        loop {
            let mut sign = Rational::one();
            match self.peek() {
                Tok::Plus | Tok::Minus => {
                    if self.next() == Tok::Minus {
                        sign = -sign;
                    }
                }
                _ if !first => break,
                _ => {}
            }
            first = false;
            let start = self.at();
            let coeff = self.rational()?;
            if coeff.is_some() && *self.peek() == Tok::Star {
                self.next();
            }
            let body = item(self)?;
            if coeff.is_none() && body.is_none() {
                return Err(Error::Parse {
                    pos: start,
                    msg: "expected a term".into(),
                });
            }
            out.push((sign * coeff.unwrap_or_else(Rational::one), body));
        }
        Ok(out)
    }
}

/// `name[^int]` factors, optionally separated by `*`.
fn factors(lex: &mut Lexer) -> Result<Option<Vec<(String, i64, usize)>>> {
    let mut out = Vec::new();
    loop {
        if *lex.peek() == Tok::Star && !out.is_empty() {
            lex.next();
        }
        let at = lex.at();
        let Tok::Ident(name) = lex.peek().clone() else {
            break;
        };
        lex.next();
        let mut e = 1;
        if *lex.peek() == Tok::Caret {
            lex.next();
            e = lex.signed_int()?;
        }
        out.push((name, e, at));
    }
    Ok((!out.is_empty()).then_some(out))
}

fn var_table(vars: VarSet) -> HashMap<String, usize> {
    let mut t: HashMap<String, usize> = (0..vars.len()).map(|i| (vars.var_name(i), i)).collect();
    if vars.kind() == crate::poly::VarKind::Lambda {
        // accept both l12 and l1_2
        for idx in 0..vars.len() {
            let (i, j) = vars.lambda_pair(idx);
            t.insert(format!("l{i}_{j}"), idx);
        }
    }
    t
}

fn monomial_from(
    vars: VarSet,
    table: &HashMap<String, usize>,
    fs: &[(String, i64, usize)],
) -> Result<Monomial> {
    let mut exps = vec![0i32; vars.len()];
    for (name, e, at) in fs {
        let idx = *table.get(name).ok_or_else(|| Error::Parse {
            pos: *at,
            msg: format!("unknown variable {name} for {vars}"),
        })?;
        exps[idx] += i32::try_from(*e).map_err(|_| Error::Parse {
            pos: *at,
            msg: "exponent out of range".into(),
        })?;
    }
    Ok(Monomial::from_exponents(&exps))
}

pub fn parse_polynomial(src: &str, vars: VarSet) -> Result<Polynomial> {
    let mut lex = Lexer::new(src)?;
    let table = var_table(vars);
    let terms = lex.signed_sum(factors)?;
    lex.expect_eof()?;
    let mut out = Vec::new();
    for (c, fs) in terms {
        out.push((
            monomial_from(vars, &table, fs.as_deref().unwrap_or(&[]))?,
            c,
        ));
    }
    Polynomial::from_terms(vars, out)
}

fn direction(name: &str) -> Option<usize> {
    name.strip_prefix('d').and_then(|s| s.parse::<usize>().ok())
}

/// Parses `c x^a d_i` sums. Exponents may be negative only if `laurent`.
pub fn parse_derivation(src: &str, n: usize, laurent: bool) -> Result<Derivation> {
    let vars = VarSet::x(n).with_laurent(laurent);
    let table = var_table(vars);
    let mut lex = Lexer::new(src)?;
    let terms = lex.signed_sum(factors)?;
    lex.expect_eof()?;
    let mut coeffs = vec![Polynomial::zero(vars); n];
    for (c, fs) in terms {
        if fs.is_none() && c.is_zero() {
            continue;
        }
        let fs = fs.unwrap_or_default();
        let mut dir = None;
        let mut rest = Vec::new();
        for f in fs {
            match direction(&f.0) {
                Some(i) => {
                    if dir.is_some() || f.1 != 1 {
                        return Err(Error::Parse {
                            pos: f.2,
                            msg: "each term needs exactly one d<i>".into(),
                        });
                    }
                    if i == 0 || i > n {
                        return Err(Error::IndexOutOfRange { index: i, max: n });
                    }
                    dir = Some(i - 1);
                }
                None => rest.push(f),
            }
        }
        let Some(dir) = dir else {
            return Err(Error::Parse {
                pos: 0,
                msg: "term without a direction d<i>".into(),
            });
        };
        let m = monomial_from(vars, &table, &rest)?;
        let t = Polynomial::term(vars, m, c)?;
        coeffs[dir] = &coeffs[dir] + &t;
    }
    Derivation::from_coeffs(coeffs)
}

fn word_item(lex: &mut Lexer) -> Result<Option<Word>> {
    match lex.peek().clone() {
        Tok::Ident(name) => {
            let at = lex.at();
            let idx = name
                .strip_prefix('y')
                .and_then(|s| s.parse::<u32>().ok())
                .filter(|&i| i > 0)
                .ok_or_else(|| Error::Parse {
                    pos: at,
                    msg: format!("expected generator y<i>, found {name}"),
                })?;
            lex.next();
            Ok(Some(Word::leaf(idx)))
        }
        Tok::LParen => {
            lex.next();
            let Some(left) = word_item(lex)? else {
                return lex.err("expected word");
            };
            if *lex.peek() == Tok::Star {
                lex.next();
            }
            let Some(right) = word_item(lex)? else {
                return lex.err("expected word");
            };
            lex.expect(Tok::RParen, "')'")?;
            Ok(Some(Word::pair(left, right)))
        }
        _ => Ok(None),
    }
}

pub fn parse_word(src: &str) -> Result<Word> {
    let mut lex = Lexer::new(src)?;
    let Some(w) = word_item(&mut lex)? else {
        return lex.err("expected word");
    };
    lex.expect_eof()?;
    Ok(w)
}

/// A rational-weighted sum of words; the words need not be reduced. `0` is the empty sum.
pub fn parse_element(src: &str) -> Result<WordCombination> {
    let mut lex = Lexer::new(src)?;
    let terms = lex.signed_sum(word_item)?;
    lex.expect_eof()?;
    let mut out = WordCombination::zero();
    for (c, w) in terms {
        match w {
            Some(w) => out.add_term(w, &c),
            None if c.is_zero() => {}
            None => {
                return Err(Error::Parse {
                    pos: 0,
                    msg: "constant term in a word combination".into(),
                })
            }
        }
    }
    Ok(out)
}

pub fn parse_assoc(src: &str) -> Result<AssocPoly> {
    let mut lex = Lexer::new(src)?;
    let terms = lex.signed_sum(factors)?;
    lex.expect_eof()?;
    let mut out = AssocPoly::zero();
    for (c, fs) in terms {
        let mut word = Vec::new();
        for (name, e, at) in fs.unwrap_or_default() {
            let idx = name
                .strip_prefix('z')
                .and_then(|s| s.parse::<u32>().ok())
                .filter(|&i| i > 0)
                .ok_or_else(|| Error::Parse {
                    pos: at,
                    msg: format!("expected variable z<i>, found {name}"),
                })?;
            if e < 0 {
                return Err(Error::Parse {
                    pos: at,
                    msg: "negative power in an associative polynomial".into(),
                });
            }
            word.extend(std::iter::repeat_n(idx, e as usize));
        }
        out.add_term(word, &c);
    }
    Ok(out)
}

fn lambda_point(src: &str, n: usize) -> Result<Vec<i64>> {
    let vars = VarSet::lambda(n);
    let table = var_table(vars);
    let mut point: BTreeMap<usize, i64> = BTreeMap::new();
    let mut lex = Lexer::new(src)?;
    while *lex.peek() != Tok::Eof {
        let at = lex.at();
        let Tok::Ident(name) = lex.next() else {
            return Err(Error::Parse {
                pos: at,
                msg: "expected l<ij>".into(),
            });
        };
        let idx = *table.get(&name).ok_or(Error::Parse {
            pos: at,
            msg: format!("unknown parameter {name}"),
        })?;
        let v = lex.signed_int()?;
        point.insert(idx, v);
        if *lex.peek() == Tok::Comma {
            lex.next();
        }
    }
    (0..vars.len())
        .map(|i| {
            point
                .get(&i)
                .copied()
                .ok_or_else(|| Error::MissingVariable(vars.var_name(i)))
        })
        .collect()
}

/// `l12=1, l13=0, l23=2` (or `l1_2=...`) into a full integer point for dimension `n`.
pub fn parse_lambda_assignment(src: &str, n: usize) -> Result<Vec<i64>> {
    lambda_point(&src.replace('=', " "), n)
}

/// A squarefree-or-not monomial in the exponent parameters, e.g. `l12 l13`.
pub fn parse_lambda_monomial(src: &str, n: usize) -> Result<Monomial> {
    let vars = VarSet::lambda(n);
    let table = var_table(vars);
    let mut lex = Lexer::new(src)?;
    let fs = factors(&mut lex)?.unwrap_or_default();
    if let Some(c) = lex.rational()? {
        if !c.is_one() {
            return lex.err("expected a monomial");
        }
    }
    lex.expect_eof()?;
    monomial_from(vars, &table, &fs)
}
