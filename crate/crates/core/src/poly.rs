//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`VarSet`] fixes the variable universe of a polynomial: the coordinates
//! `x1..xn` of the polynomial ring, the exponent parameters `l12, l13, ...`
//! (one per pair `i < j`), or anonymous indeterminates `t1, t2, ...` used for
//! generic matrices. Exponents are signed so that Laurent polynomials fit the
//! same type; a varset only admits negative exponents when its Laurent flag is
//! set.
//!
//! Monomials compare lexicographically on their exponent vectors. For the
//! exponent parameters the variables are listed as `l12, l13, .., l1n, l23,
//! .., l(n-1)n`, so the derived order is the lex order used for leading
//! monomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    /// `x1..xn`
    X,
    /// `l_ij` for `1 <= i < j <= n`
    Lambda,
    /// `t1..tn`
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarSet {
    kind: VarKind,
    n: usize,
    laurent: bool,
}

impl VarSet {
    pub const fn x(n: usize) -> Self {
        VarSet {
            kind: VarKind::X,
            n,
            laurent: false,
        }
    }

    pub const fn x_laurent(n: usize) -> Self {
        VarSet {
            kind: VarKind::X,
            n,
            laurent: true,
        }
    }

    /// The `n(n-1)/2` exponent parameters attached to dimension `n`.
    pub const fn lambda(n: usize) -> Self {
        VarSet {
            kind: VarKind::Lambda,
            n,
            laurent: false,
        }
    }

    pub const fn generic(count: usize) -> Self {
        VarSet {
            kind: VarKind::Generic,
            n: count,
            laurent: false,
        }
    }

    pub fn with_laurent(self, laurent: bool) -> Self {
        VarSet { laurent, ..self }
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    /// The dimension parameter (`n` for `x` and `l` sets, the count for `t`).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_laurent(&self) -> bool {
        self.laurent
    }

    /// Number of variables.
    pub fn len(&self) -> usize {
        match self.kind {
            VarKind::Lambda => self.n * self.n.saturating_sub(1) / 2,
            _ => self.n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position of `l_ij` (1-based, `i < j <= n`) in the listing order.
    pub fn lambda_index(n: usize, i: usize, j: usize) -> Option<usize> {
        if i == 0 || i >= j || j > n {
            return None;
        }
        // rows 1..i-1 contribute (n-1) + (n-2) + .. + (n-i+1) entries
        let before: usize = (1..i).map(|k| n - k).sum();
        Some(before + (j - i - 1))
    }

    /// Inverse of [`VarSet::lambda_index`].
    pub fn lambda_pair(&self, idx: usize) -> (usize, usize) {
        debug_assert_eq!(self.kind, VarKind::Lambda);
        let mut rest = idx;
        for i in 1..self.n {
            let row = self.n - i;
            if rest < row {
                return (i, i + 1 + rest);
            }
            rest -= row;
        }
        panic!("lambda index {idx} out of range for n = {}", self.n)
    }

    pub fn var_name(&self, idx: usize) -> String {
        match self.kind {
            VarKind::X => format!("x{}", idx + 1),
            VarKind::Generic => format!("t{}", idx + 1),
            VarKind::Lambda => {
                let (i, j) = self.lambda_pair(idx);
                if i < 10 && j < 10 {
                    format!("l{i}{j}")
                } else {
                    format!("l{i}_{j}")
                }
            }
        }
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            VarKind::X => "x",
            VarKind::Lambda => "l",
            VarKind::Generic => "t",
        };
        write!(
            f,
            "{kind}[n={}{}]",
            self.n,
            if self.laurent { ", laurent" } else { "" }
        )
    }
}

/// Dense exponent vector; its length is the size of the owning varset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(SmallVec<[i32; 6]>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(SmallVec::from_elem(0, len))
    }

    pub fn var(len: usize, idx: usize) -> Self {
        let mut m = Self::one(len);
        m.0[idx] = 1;
        m
    }

    pub fn from_exponents(exps: &[i32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn exponent(&self, idx: usize) -> i32 {
        self.0[idx]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|&e| e < 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.len(), other.len());
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Indices of the variables with nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, _)| i)
    }

    pub(crate) fn with_exponent(&self, idx: usize, e: i32) -> Monomial {
        let mut m = self.clone();
        m.0[idx] = e;
        m
    }

    pub fn fmt_with(&self, vars: &VarSet) -> String {
        let parts: Vec<String> = self
            .support()
            .map(|i| match self.0[i] {
                1 => vars.var_name(i),
                e => format!("{}^{}", vars.var_name(i), e),
            })
            .collect();
        parts.join(" ")
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Polynomial {
    vars: VarSet,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(vars: VarSet) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: VarSet) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn constant(vars: VarSet, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    /// The single variable with index `idx` (0-based).
    pub fn var(vars: VarSet, idx: usize) -> Self {
        assert!(idx < vars.len(), "variable index out of range");
        let mut p = Self::zero(vars);
        p.terms
            .insert(Monomial::var(vars.len(), idx), Rational::one());
        p
    }

    pub fn term(vars: VarSet, mono: Monomial, c: Rational) -> Result<Self> {
        Self::from_terms(vars, std::iter::once((mono, c)))
    }

    /// Builds a polynomial from (monomial, coefficient) pairs, merging repeats.
    pub fn from_terms(
        vars: VarSet,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            if m.len() != vars.len() {
                return Err(Error::Invalid(format!(
                    "monomial has {} exponents, varset {} has {} variables",
                    m.len(),
                    vars,
                    vars.len()
                )));
            }
            if !vars.laurent && m.has_negative() {
                return Err(Error::NegativeExponent);
            }
            p.add_term(m, &c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Reinterpret in another varset of the same size (e.g. toggle the Laurent flag).
    pub fn with_vars(&self, vars: VarSet) -> Result<Self> {
        if vars.len() != self.vars.len() {
            return Err(mismatch(&self.vars, &vars));
        }
        if !vars.laurent && self.terms.keys().any(Monomial::has_negative) {
            return Err(Error::NegativeExponent);
        }
        Ok(Polynomial {
            vars,
            terms: self.terms.clone(),
        })
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if self.vars != other.vars {
            Err(mismatch(&self.vars, &other.vars))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let mut out = Polynomial::zero(self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.vars);
        }
        Polynomial {
            vars: self.vars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiply by a single monomial term.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.vars);
        }
        Polynomial {
            vars: self.vars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.vars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative in variable `idx` (0-based): `s x^(s-1)` termwise.
    pub fn partial(&self, idx: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.vars);
        for (m, c) in &self.terms {
            let e = m.exponent(idx);
            if e != 0 {
                out.add_term(m.with_exponent(idx, e - 1), &(c * &Rational::from(e)));
            }
        }
        out
    }

    /// Lex-maximal monomial.
    pub fn leading_monomial(&self) -> Result<&Monomial> {
        self.terms.keys().next_back().ok_or(Error::ZeroPolynomial)
    }

    pub fn leading_coefficient(&self) -> Result<&Rational> {
        self.terms.values().next_back().ok_or(Error::ZeroPolynomial)
    }

    /// Largest exponent of variable `idx` (0 for the zero polynomial).
    pub fn degree_in(&self, idx: usize) -> i32 {
        self.terms
            .keys()
            .map(|m| m.exponent(idx))
            .max()
            .unwrap_or(0)
            .max(0)
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Variables that occur with a nonzero exponent.
    pub fn used_vars(&self) -> Vec<usize> {
        let mut used = vec![false; self.vars.len()];
        for m in self.terms.keys() {
            for i in m.support() {
                used[i] = true;
            }
        }
        used.iter()
            .enumerate()
            .filter(|(_, &u)| u)
            .map(|(i, _)| i)
            .collect()
    }

    /// Evaluates at a full assignment; `values[i]` is the value of variable `i`.
    pub fn eval(&self, values: &[Rational]) -> Result<Rational> {
        let map: BTreeMap<usize, Rational> = values.iter().cloned().enumerate().collect();
        self.eval_map(&map)
    }

    /// Evaluates with a partial assignment that must cover every variable in use.
    pub fn eval_map(&self, values: &BTreeMap<usize, Rational>) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in m.support() {
                let v = values
                    .get(&i)
                    .ok_or_else(|| Error::MissingVariable(self.vars.var_name(i)))?;
                let e = m.exponent(i);
                if e < 0 && v.is_zero() {
                    return Err(Error::DivisionByZero(self.vars.var_name(i)));
                }
                t = &t * &v.pow(e as i64);
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Replaces variable `idx` by a constant, keeping the varset.
    pub fn substitute(&self, idx: usize, value: &Rational) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.vars);
        for (m, c) in &self.terms {
            let e = m.exponent(idx);
            if e < 0 && value.is_zero() {
                return Err(Error::DivisionByZero(self.vars.var_name(idx)));
            }
            out.add_term(m.with_exponent(idx, 0), &(c * &value.pow(e as i64)));
        }
        Ok(out)
    }

    /// Splits into homogeneous components keyed by total degree.
    pub fn homogeneous_components(&self) -> BTreeMap<i64, Polynomial> {
        let mut out: BTreeMap<i64, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_insert_with(|| Polynomial::zero(self.vars))
                .add_term(m.clone(), c);
        }
        out
    }
}

fn mismatch(a: &VarSet, b: &VarSet) -> Error {
    Error::VarSetMismatch(a.to_string(), b.to_string())
}

pub(crate) fn fmt_term(c: &Rational, body: &str) -> String {
    if body.is_empty() {
        c.to_string()
    } else if c.is_one() {
        body.to_string()
    } else if *c == Rational::from_int(-1) {
        format!("-{body}")
    } else {
        format!("{c} {body}")
    }
}

/// Joins signed terms as `a + b - c`; empty input renders as `0`.
pub(crate) fn join_terms(terms: impl IntoIterator<Item = String>) -> String {
    let mut out = String::new();
    for t in terms {
        if out.is_empty() {
            out.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| fmt_term(c, &m.fmt_with(&self.vars)));
        f.write_str(&join_terms(terms))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({}; {})", self.vars, self)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    /// Panics on varset mismatch; see [`Polynomial::checked_add`].
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial addition")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial subtraction")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&Rational::from_int(-1))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use proptest::prelude::*;

    fn px(n: usize, s: &str) -> Polynomial {
        parse_polynomial(s, VarSet::x(n)).unwrap()
    }

    fn pl(n: usize, s: &str) -> Polynomial {
        parse_polynomial(s, VarSet::lambda(n)).unwrap()
    }

    #[test]
    fn lambda_listing_order() {
        let v = VarSet::lambda(4);
        let names: Vec<String> = (0..v.len()).map(|i| v.var_name(i)).collect();
        assert_eq!(names, ["l12", "l13", "l14", "l23", "l24", "l34"]);
        for idx in 0..v.len() {
            let (i, j) = v.lambda_pair(idx);
            assert_eq!(VarSet::lambda_index(4, i, j), Some(idx));
        }
        assert_eq!(VarSet::lambda_index(4, 2, 2), None);
        assert_eq!(
            VarSet::lambda(12).var_name(VarSet::lambda_index(12, 3, 11).unwrap()),
            "l3_11"
        );
    }

    #[test]
    fn ring_examples() {
        let a = px(2, "x1 + x2");
        let b = px(2, "x1 - x2");
        assert_eq!(&a * &b, px(2, "x1^2 - x2^2"));
        assert!((&a * &Polynomial::zero(VarSet::x(2))).is_zero());
        let l = pl(3, "l12 + l23");
        assert_eq!(l.pow(2), pl(3, "l12^2 + 2 l12 l23 + l23^2"));
    }

    #[test]
    fn varset_mismatch_is_an_error() {
        let a = px(2, "x1");
        let b = px(3, "x1");
        assert!(matches!(a.checked_add(&b), Err(Error::VarSetMismatch(..))));
        assert!(a.checked_mul(&pl(2, "l12")).is_err());
    }

    #[test]
    fn partial_derivatives() {
        assert_eq!(px(2, "x1^2 x2").partial(0), px(2, "2 x1 x2"));
        assert!(px(2, "x1").partial(1).is_zero());
        let inv = parse_polynomial("x1^-1", VarSet::x_laurent(1)).unwrap();
        assert_eq!(
            inv.partial(0),
            parse_polynomial("-x1^-2", VarSet::x_laurent(1)).unwrap()
        );
        assert!(matches!(
            parse_polynomial("x1^-1", VarSet::x(1)),
            Err(Error::NegativeExponent)
        ));
    }

    #[test]
    fn leading_monomials() {
        let v = VarSet::lambda(3);
        let lead = |s: &str| pl(3, s).leading_monomial().unwrap().fmt_with(&v);
        assert_eq!(lead("l12 + l23"), "l12");
        assert_eq!(lead("l13 l23 + l12"), "l12");
        assert_eq!(lead("5"), "");
        assert!(matches!(
            Polynomial::zero(v).leading_monomial(),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn evaluation() {
        let s = [
            Rational::from_int(1),
            Rational::zero(),
            Rational::from_int(2),
        ];
        assert_eq!(pl(3, "l12 l13").eval(&s).unwrap(), Rational::zero());
        assert_eq!(pl(3, "l12 + l23").eval(&s).unwrap(), Rational::from_int(3));
        let xs = [Rational::from_int(2), Rational::from_int(3)];
        assert_eq!(px(2, "x1^2 x2").eval(&xs).unwrap(), Rational::from_int(12));
        let partial: BTreeMap<usize, Rational> = [(0, Rational::one())].into_iter().collect();
        assert!(
            matches!(px(2, "x1 x2").eval_map(&partial), Err(Error::MissingVariable(v)) if v == "x2")
        );
    }

    #[test]
    fn display_examples() {
        assert_eq!(px(3, "3/2 x1^2 x3").to_string(), "3/2 x1^2 x3");
        assert_eq!(pl(3, "-l12 l23").to_string(), "-l12 l23");
        assert_eq!(px(2, "x2 - 1 + x1").to_string(), "x1 + x2 - 1");
        assert_eq!(Polynomial::zero(VarSet::x(1)).to_string(), "0");
    }

    pub(crate) fn arb_poly(vars: VarSet, max_exp: i32) -> impl Strategy<Value = Polynomial> {
        let len = vars.len();
        let lo = if vars.is_laurent() { -max_exp } else { 0 };
        prop::collection::vec(
            (
                prop::collection::vec(lo..=max_exp, len),
                -5i64..=5,
                1i64..=3,
            ),
            0..5,
        )
        .prop_map(move |terms| {
            Polynomial::from_terms(
                vars,
                terms
                    .into_iter()
                    .map(|(e, n, d)| (Monomial::from_exponents(&e), Rational::new(n, d))),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(a in arb_poly(VarSet::x(3), 3), b in arb_poly(VarSet::x(3), 3), c in arb_poly(VarSet::x(3), 3)) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn eval_is_multiplicative(a in arb_poly(VarSet::x(3), 3), b in arb_poly(VarSet::x(3), 3),
                                  v in prop::collection::vec(-4i64..=4, 3)) {
            let v: Vec<Rational> = v.into_iter().map(Rational::from_int).collect();
            prop_assert_eq!((&a * &b).eval(&v).unwrap(), &a.eval(&v).unwrap() * &b.eval(&v).unwrap());
        }

        #[test]
        fn leibniz_rule(a in arb_poly(VarSet::x_laurent(2), 3), b in arb_poly(VarSet::x_laurent(2), 3), i in 0usize..2) {
            prop_assert_eq!((&a * &b).partial(i), &(&a.partial(i) * &b) + &(&a * &b.partial(i)));
        }

        #[test]
        fn lex_leading_is_multiplicative(a in arb_poly(VarSet::lambda(3), 3), b in arb_poly(VarSet::lambda(3), 3)) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let lead = (&a * &b).leading_monomial().unwrap().clone();
            prop_assert_eq!(lead, a.leading_monomial().unwrap().mul(b.leading_monomial().unwrap()));
        }

        #[test]
        fn print_parse_round_trip(a in arb_poly(VarSet::x_laurent(3), 3)) {
            prop_assert_eq!(parse_polynomial(&a.to_string(), a.vars()).unwrap(), a);
        }
    }
}
