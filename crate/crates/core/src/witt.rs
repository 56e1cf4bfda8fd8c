//! The left-symmetric Witt algebra of derivations of `k[x1..xn]`.
//!
//! A derivation `f1 d1 + .. + fn dn` is stored as its coefficient column. The
//! product is `a di . b dj = (a di(b)) dj`, extended bilinearly; its
//! commutator is the usual Witt bracket. The same type holds derivations of
//! the Laurent ring when the Laurent flag is set.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::ControlFlow;

use rand::Rng;

use crate::error::{Error, Result};
use crate::freelsa::{evaluate, LeftSymmetricAlgebra, WordCombination};
use crate::matrix::PolyMatrix;
use crate::poly::{fmt_term, join_terms, Monomial, Polynomial, VarKind, VarSet};
use crate::rational::Rational;

/// Triangularity classes, ordered from weakest to strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    Full,
    /// `fi` depends only on `xi..xn`
    Triangular,
    /// `fi` depends only on `x(i+1)..xn`
    StronglyTriangular,
}

impl Class {
    pub fn name(&self) -> &'static str {
        match self {
            Class::Full => "full",
            Class::Triangular => "triangular",
            Class::StronglyTriangular => "strongly_triangular",
        }
    }

    pub fn parse(s: &str) -> Option<Class> {
        match s {
            "full" => Some(Class::Full),
            "triangular" => Some(Class::Triangular),
            "strongly_triangular"
            | "strictly_triangular"
            | "strongly-triangular"
            | "strictly-triangular" => Some(Class::StronglyTriangular),
            _ => None,
        }
    }

    /// Whether coefficient `i` may involve variable `k` (both 0-based).
    pub fn allows(&self, i: usize, k: usize) -> bool {
        match self {
            Class::Full => true,
            Class::Triangular => k >= i,
            Class::StronglyTriangular => k > i,
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Derivation {
    vars: VarSet,
    coeffs: Vec<Polynomial>,
}

impl Derivation {
    pub fn zero(n: usize, laurent: bool) -> Self {
        let vars = VarSet::x(n).with_laurent(laurent);
        Derivation {
            vars,
            coeffs: vec![Polynomial::zero(vars); n],
        }
    }

    /// `d_i` (0-based `i`).
    pub fn partial(n: usize, i: usize) -> Self {
        let mut d = Self::zero(n, false);
        d.coeffs[i] = Polynomial::one(d.vars);
        d
    }

    /// `x1 d1 + .. + xn dn`, the right identity.
    pub fn euler(n: usize) -> Self {
        let vars = VarSet::x(n);
        Derivation {
            vars,
            coeffs: (0..n).map(|i| Polynomial::var(vars, i)).collect(),
        }
    }

    /// `c x^exps d_dir` (0-based `dir`).
    pub fn monomial(
        n: usize,
        laurent: bool,
        exps: &[i32],
        dir: usize,
        c: Rational,
    ) -> Result<Self> {
        let mut d = Self::zero(n, laurent);
        if dir >= n {
            return Err(Error::IndexOutOfRange {
                index: dir + 1,
                max: n,
            });
        }
        d.coeffs[dir] = Polynomial::term(d.vars, Monomial::from_exponents(exps), c)?;
        Ok(d)
    }

    /// The derivation with the given coefficient column.
    pub fn from_coeffs(coeffs: Vec<Polynomial>) -> Result<Self> {
        let n = coeffs.len();
        if n == 0 {
            return Err(Error::Invalid("a derivation needs n >= 1".into()));
        }
        let vars = coeffs[0].vars();
        if vars.kind() != VarKind::X || vars.n() != n {
            return Err(Error::Invalid(format!(
                "coefficients must live in x1..x{n}, found {vars}"
            )));
        }
        if let Some(bad) = coeffs.iter().find(|p| p.vars() != vars) {
            return Err(Error::VarSetMismatch(
                vars.to_string(),
                bad.vars().to_string(),
            ));
        }
        Ok(Derivation { vars, coeffs })
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_laurent(&self) -> bool {
        self.vars.is_laurent()
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Polynomial {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }

    /// `(monomial, direction, coefficient)` for every term.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, usize, &Rational)> {
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.terms().map(move |(m, c)| (m, i, c)))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().map(Polynomial::num_terms).sum()
    }

    /// Reinterprets in the Laurent (or polynomial) setting. Going to the
    /// polynomial setting fails if a negative exponent is present.
    pub fn with_laurent(&self, laurent: bool) -> Result<Self> {
        let vars = self.vars.with_laurent(laurent);
        let coeffs = self
            .coeffs
            .iter()
            .map(|p| p.with_vars(vars))
            .collect::<Result<_>>()?;
        Ok(Derivation { vars, coeffs })
    }

    fn check(&self, other: &Derivation) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        if self.vars != other.vars {
            return Err(Error::VarSetMismatch(
                self.vars.to_string(),
                other.vars.to_string(),
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Derivation) -> Result<Derivation> {
        self.check(other)?;
        Ok(Derivation {
            vars: self.vars,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Derivation) -> Result<Derivation> {
        self.check(other)?;
        Ok(Derivation {
            vars: self.vars,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Derivation {
        Derivation {
            vars: self.vars,
            coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// The product `self . other`: coefficient `j` is `sum_i self_i * d_i(other_j)`.
    pub fn ls_mul(&self, other: &Derivation) -> Result<Derivation> {
        self.check(other)?;
        let n = self.n();
        let mut out = Vec::with_capacity(n);
        for bj in &other.coeffs {
            let mut acc = Polynomial::zero(self.vars);
            for (mb, cb) in bj.terms() {
                for i in mb.support() {
                    let ai = &self.coeffs[i];
                    if ai.is_zero() {
                        continue;
                    }
                    let e = mb.exponent(i);
                    let dm = mb.with_exponent(i, e - 1);
                    let dc = cb * &Rational::from(e);
                    for (ma, ca) in ai.terms() {
                        acc.add_term(ma.mul(&dm), &(ca * &dc));
                    }
                }
            }
            out.push(acc);
        }
        Ok(Derivation {
            vars: self.vars,
            coeffs: out,
        })
    }

    /// `[a, b] = a.b - b.a`
    pub fn commutator(&self, other: &Derivation) -> Result<Derivation> {
        self.ls_mul(other)?.checked_sub(&other.ls_mul(self)?)
    }

    /// Applies the derivation to a polynomial: `sum_i fi * di(p)`.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if p.vars() != self.vars {
            return Err(Error::VarSetMismatch(
                self.vars.to_string(),
                p.vars().to_string(),
            ));
        }
        let mut acc = Polynomial::zero(self.vars);
        for (i, fi) in self.coeffs.iter().enumerate() {
            if !fi.is_zero() {
                acc = &acc + &(fi * &p.partial(i));
            }
        }
        Ok(acc)
    }

    /// `J(D)` with entry `(i, j) = dj(fi)`.
    pub fn jacobian(&self) -> PolyMatrix {
        PolyMatrix::from_fn(self.n(), self.vars, |i, j| self.coeffs[i].partial(j))
    }

    /// Splits into homogeneous components: degree `s` collects the terms whose
    /// monomial has total degree `s + 1`.
    pub fn degree_decompose(&self) -> BTreeMap<i64, Derivation> {
        let mut out: BTreeMap<i64, Derivation> = BTreeMap::new();
        for (i, p) in self.coeffs.iter().enumerate() {
            for (deg, comp) in p.homogeneous_components() {
                let d = out
                    .entry(deg - 1)
                    .or_insert_with(|| Derivation::zero(self.n(), self.is_laurent()));
                d.coeffs[i] = comp;
            }
        }
        out
    }

    /// The homogeneous degree, if the derivation is nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let parts = self.degree_decompose();
        if parts.len() == 1 {
            parts.keys().next().copied()
        } else {
            None
        }
    }

    /// Strongest class containing `self`, read off the monomial supports.
    pub fn membership(&self) -> Class {
        let mut best = Class::StronglyTriangular;
        for (m, i, _) in self.terms() {
            for k in m.support() {
                if !Class::StronglyTriangular.allows(i, k) {
                    best = best.min(if Class::Triangular.allows(i, k) {
                        Class::Triangular
                    } else {
                        Class::Full
                    });
                }
            }
        }
        best
    }

    /// The same classification via the shape of the Jacobian matrix.
    pub fn membership_by_jacobian(&self) -> Class {
        let j = self.jacobian();
        if j.is_upper_triangular(true) {
            Class::StronglyTriangular
        } else if j.is_upper_triangular(false) {
            Class::Triangular
        } else {
            Class::Full
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.coeffs.iter().enumerate().flat_map(|(i, p)| {
            p.terms().rev().map(move |(m, c)| {
                let mono = m.fmt_with(&self.vars);
                let body = if mono.is_empty() {
                    format!("d{}", i + 1)
                } else {
                    format!("{mono} d{}", i + 1)
                };
                fmt_term(c, &body)
            })
        });
        f.write_str(&join_terms(terms))
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Derivation[n={}]({})", self.n(), self)
    }
}

/// Exponent vectors of total degree `d` in `n` variables, lex-descending
/// (`x1^d` first).
pub fn monomials_of_degree(n: usize, d: usize) -> Vec<Vec<i32>> {
    fn go(n: usize, d: usize, prefix: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if prefix.len() + 1 == n {
            prefix.push(d as i32);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e as i32);
            go(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, d, &mut Vec::new(), &mut out);
    }
    out
}

/// All `u d_i` with `u` a monomial of degree `s + 1`: monomials lex-descending,
/// then direction.
pub fn basis_of_l(n: usize, s: i64) -> Result<Vec<Derivation>> {
    if s < -1 {
        return Err(Error::DegreeTooLow(s));
    }
    let mut out = Vec::new();
    for exps in monomials_of_degree(n, (s + 1) as usize) {
        for dir in 0..n {
            out.push(Derivation::monomial(n, false, &exps, dir, Rational::one())?);
        }
    }
    Ok(out)
}

/// `dim L_s = n * C(n + s, n - 1)`.
pub fn dim_l(n: usize, s: i64) -> u128 {
    if s < -1 || n == 0 {
        return 0;
    }
    let top = (n as i64 + s) as u128;
    let k = (n - 1) as u128;
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (top - i) / (i + 1);
    }
    n as u128 * c
}

/// Basis derivations of degree `-1..=max_degree` lying in `class`.
pub fn basis_up_to(n: usize, max_degree: i64, class: Class) -> Vec<Derivation> {
    (-1..=max_degree)
        .flat_map(|s| basis_of_l(n, s).unwrap())
        .filter(|d| d.membership() >= class)
        .collect()
}

/// Applies the operator word `R_{a_{i1}} .. R_{a_{im}}` to `c`, rightmost
/// letter first: `((c . a_{im}) .. ) . a_{i1}`. Indices are 1-based.
pub fn operator_word_apply(
    word: &[usize],
    args: &[Derivation],
    c: &Derivation,
) -> Result<Derivation> {
    let mut acc = c.clone();
    for &k in word.iter().rev() {
        let a = args.get(k.wrapping_sub(1)).ok_or(Error::IndexOutOfRange {
            index: k,
            max: args.len(),
        })?;
        if acc.is_zero() {
            acc.check(a)?;
            continue;
        }
        acc = acc.ls_mul(a)?;
    }
    Ok(acc)
}

/// `J(a_{i1}) .. J(a_{im})`, the matrix of the operator word.
pub fn theta_matrix(word: &[usize], args: &[Derivation]) -> Result<PolyMatrix> {
    let n = args
        .first()
        .map(Derivation::n)
        .ok_or(Error::Invalid("no arguments".into()))?;
    let vars = args[0].vars();
    let mut acc = PolyMatrix::identity(n, vars);
    for &k in word {
        let a = args.get(k.wrapping_sub(1)).ok_or(Error::IndexOutOfRange {
            index: k,
            max: args.len(),
        })?;
        if a.vars() != vars {
            return Err(Error::VarSetMismatch(
                vars.to_string(),
                a.vars().to_string(),
            ));
        }
        acc = acc.mul(&a.jacobian());
    }
    Ok(acc)
}

/// `L_n` (or its Laurent version) as a target for evaluating free left-symmetric elements.
#[derive(Debug, Clone, Copy)]
pub struct WittAlgebra {
    pub n: usize,
    pub laurent: bool,
}

impl WittAlgebra {
    pub fn new(n: usize) -> Self {
        WittAlgebra { n, laurent: false }
    }
}

impl LeftSymmetricAlgebra for WittAlgebra {
    type Elem = Derivation;

    fn zero(&self) -> Derivation {
        Derivation::zero(self.n, self.laurent)
    }

    fn product(&self, a: &Derivation, b: &Derivation) -> Derivation {
        a.ls_mul(b).expect("operands checked on entry")
    }

    fn add(&self, a: &Derivation, b: &Derivation) -> Derivation {
        a.checked_add(b).expect("operands checked on entry")
    }

    fn scale(&self, a: &Derivation, c: &Rational) -> Derivation {
        a.scale(c)
    }

    fn is_zero(&self, a: &Derivation) -> bool {
        a.is_zero()
    }

    fn check(&self, a: &Derivation) -> Result<()> {
        a.check(&self.zero())
    }
}

/// Visits `k`-tuples of indices into `degrees` ordered by increasing total
/// degree (lexicographic within a level). Stops early on `Break`.
pub fn for_each_tuple_by_degree<B>(
    degrees: &[i64],
    k: usize,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<B>,
) -> Option<B> {
    if degrees.is_empty() {
        return None;
    }
    let lo = *degrees.iter().min().unwrap();
    let hi = *degrees.iter().max().unwrap();
    fn rec<B>(
        degrees: &[i64],
        lo: i64,
        hi: i64,
        k: usize,
        remaining: i64,
        tuple: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]) -> ControlFlow<B>,
    ) -> Option<B> {
        if tuple.len() == k {
            if remaining == 0 {
                if let ControlFlow::Break(b) = visit(tuple) {
                    return Some(b);
                }
            }
            return None;
        }
        let left = (k - tuple.len() - 1) as i64;
        for (i, &d) in degrees.iter().enumerate() {
            let rest = remaining - d;
            if rest < left * lo || rest > left * hi {
                continue;
            }
            tuple.push(i);
            let r = rec(degrees, lo, hi, k, rest, tuple, visit);
            tuple.pop();
            if r.is_some() {
                return r;
            }
        }
        None
    }
    let k_i = k as i64;
    for total in k_i * lo..=k_i * hi {
        if let Some(b) = rec(
            degrees,
            lo,
            hi,
            k,
            total,
            &mut Vec::with_capacity(k),
            &mut visit,
        ) {
            return Some(b);
        }
    }
    None
}

/// Letters of an element, the derivations substituted for them, and the
/// nonzero value.
pub type Counterexample = (Vec<u32>, Vec<Derivation>, Derivation);

/// Searches basis tuples of `class` with degree `<= degree_bound` (by increasing
/// total degree) for an assignment where `g` does not vanish in `L_n`.
/// Returns the assignment in order of the generators used by `g`.
pub fn find_counterexample(
    g: &WordCombination,
    n: usize,
    class: Class,
    degree_bound: i64,
) -> Result<Option<Counterexample>> {
    let letters = g.letters();
    let basis = basis_up_to(n, degree_bound, class);
    let degrees: Vec<i64> = basis
        .iter()
        .map(|d| d.homogeneous_degree().unwrap())
        .collect();
    let alg = WittAlgebra::new(n);
    let mut err = None;
    let found = for_each_tuple_by_degree(&degrees, letters.len(), |t| {
        let assignment: BTreeMap<u32, Derivation> = letters
            .iter()
            .zip(t)
            .map(|(&l, &i)| (l, basis[i].clone()))
            .collect();
        match evaluate(g, &alg, &assignment) {
            Ok(v) if !v.is_zero() => {
                ControlFlow::Break((t.iter().map(|&i| basis[i].clone()).collect(), v))
            }
            Ok(_) => ControlFlow::Continue(()),
            Err(e) => {
                err = Some(e);
                ControlFlow::Break((Vec::new(), Derivation::zero(n, false)))
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(found.map(|(args, v)| (letters, args, v)))
}

/// A random element of `class`: a combination of up to `max_terms` basis
/// derivations of degree `<= degree_bound` with small integer coefficients.
pub fn random_derivation(
    rng: &mut impl Rng,
    n: usize,
    degree_bound: i64,
    class: Class,
    max_terms: usize,
) -> Derivation {
    let basis = basis_up_to(n, degree_bound, class);
    let mut d = Derivation::zero(n, false);
    let terms = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..terms {
        let b = &basis[rng.gen_range(0..basis.len())];
        let mut c = rng.gen_range(-3i64..=3);
        if c == 0 {
            c = 1;
        }
        d = d.checked_add(&b.scale(&Rational::from_int(c))).unwrap();
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_derivation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d(n: usize, s: &str) -> Derivation {
        parse_derivation(s, n, false).unwrap()
    }

    #[test]
    fn products() {
        assert_eq!(d(2, "x2 d1").ls_mul(&d(2, "x1 d2")).unwrap(), d(2, "x2 d2"));
        let x = d(3, "x1 x2 d1 - 2 x3^2 d3 + d2");
        for j in 0..3 {
            assert!(x.ls_mul(&Derivation::partial(3, j)).unwrap().is_zero());
        }
        let e = d(2, "x1 x2 d1");
        assert_eq!(e.ls_mul(&Derivation::euler(2)).unwrap(), e);
        assert!(matches!(
            e.ls_mul(&Derivation::euler(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn commutators() {
        assert_eq!(d(1, "d1").commutator(&d(1, "x1 d1")).unwrap(), d(1, "d1"));
        let a = d(2, "x1^2 x2 d1 + d2");
        assert!(a.commutator(&a).unwrap().is_zero());
        assert_eq!(
            d(2, "x1 d2").commutator(&d(2, "x2 d1")).unwrap(),
            d(2, "x1 d1 - x2 d2")
        );
    }

    #[test]
    fn application() {
        let p = |s: &str| crate::parse::parse_polynomial(s, VarSet::x(2)).unwrap();
        assert_eq!(d(2, "d1").apply(&p("x1^2")).unwrap(), p("2 x1"));
        assert_eq!(
            Derivation::euler(2).apply(&p("x1 x2")).unwrap(),
            p("2 x1 x2")
        );
        assert_eq!(d(2, "x2 d1").apply(&p("x1 x2")).unwrap(), p("x2^2"));
    }

    #[test]
    fn jacobians() {
        let j = d(2, "x1 x2 d1 + x2^2 d2").jacobian();
        assert_eq!(j.to_string(), "[[x2, x1], [0, 2 x2]]");
        assert_eq!(
            Derivation::euler(3).jacobian(),
            PolyMatrix::identity(3, VarSet::x(3))
        );
        assert!(d(2, "d1").jacobian().is_zero());
    }

    #[test]
    fn grading() {
        let g = d(2, "x1 x2 d1").degree_decompose();
        assert_eq!(g.keys().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(
            d(2, "d2")
                .degree_decompose()
                .keys()
                .copied()
                .collect::<Vec<_>>(),
            vec![-1]
        );
        let g = d(1, "d1 + x1 d1").degree_decompose();
        assert_eq!(g[&-1], d(1, "d1"));
        assert_eq!(g[&0], d(1, "x1 d1"));
    }

    #[test]
    fn basis_counts() {
        let b = basis_of_l(2, -1).unwrap();
        assert_eq!(b, vec![d(2, "d1"), d(2, "d2")]);
        let b0: Vec<String> = basis_of_l(2, 0)
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect();
        assert_eq!(b0, ["x1 d1", "x1 d2", "x2 d1", "x2 d2"]);
        assert_eq!(basis_of_l(2, 1).unwrap().len(), 6);
        for n in 1..=4 {
            for s in -1..=4 {
                assert_eq!(basis_of_l(n, s).unwrap().len() as u128, dim_l(n, s));
            }
        }
        assert!(matches!(basis_of_l(2, -2), Err(Error::DegreeTooLow(-2))));
    }

    #[test]
    fn membership_examples() {
        assert_eq!(d(2, "x2 d1").membership(), Class::StronglyTriangular);
        assert_eq!(d(2, "x1 d1").membership(), Class::Triangular);
        assert_eq!(d(2, "x2 d2 + x2 d1").membership(), Class::Triangular);
        assert_eq!(d(2, "x1 d2").membership(), Class::Full);
    }

    #[test]
    fn membership_agrees_with_jacobian_on_basis() {
        for n in 1..=3 {
            for b in basis_up_to(n, 2, Class::Full) {
                assert_eq!(b.membership(), b.membership_by_jacobian(), "{b}");
            }
        }
    }

    #[test]
    fn operator_words() {
        let a1 = d(2, "x1 d2");
        assert_eq!(
            operator_word_apply(&[1], std::slice::from_ref(&a1), &d(2, "d1")).unwrap(),
            d(2, "d2")
        );
        let c = d(2, "x1^2 d1 + x2 d2");
        assert_eq!(operator_word_apply(&[], std::slice::from_ref(&a1), &c).unwrap(), c);
        assert!(matches!(
            operator_word_apply(&[2], &[a1], &c),
            Err(Error::IndexOutOfRange { index: 2, max: 1 })
        ));

        // z1 z2 and z2 z1 differ on some random pair
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let differ = (0..50).any(|_| {
            let args = [0, 1].map(|_| random_derivation(&mut rng, 2, 2, Class::Full, 3));
            let c = random_derivation(&mut rng, 2, 2, Class::Full, 3);
            operator_word_apply(&[1, 2], &args, &c).unwrap()
                != operator_word_apply(&[2, 1], &args, &c).unwrap()
        });
        assert!(differ);
    }

    #[test]
    fn theta_examples() {
        let id = theta_matrix(&[1], &[Derivation::euler(3)]).unwrap();
        assert_eq!(id, PolyMatrix::identity(3, VarSet::x(3)));
        assert!(theta_matrix(&[1, 1], &[d(2, "x2 d1")]).unwrap().is_zero());
    }

    #[test]
    fn theta_matches_operator_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=3);
            let args: Vec<Derivation> = (0..m)
                .map(|_| random_derivation(&mut rng, n, 2, Class::Full, 3))
                .collect();
            let len = rng.gen_range(0..=3);
            let word: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=m)).collect();
            let c = random_derivation(&mut rng, n, 2, Class::Full, 3);
            let direct = operator_word_apply(&word, &args, &c).unwrap();
            let via_theta = theta_matrix(&word, &args).unwrap().mul_column(c.coeffs());
            assert_eq!(direct.coeffs(), &via_theta[..]);
        }
    }

    #[test]
    fn tuple_enumeration_is_degree_ordered_and_complete() {
        let degrees = [-1, 0, 0, 1];
        let mut seen = Vec::new();
        for_each_tuple_by_degree::<()>(&degrees, 3, |t| {
            seen.push(t.to_vec());
            ControlFlow::Continue(())
        });
        assert_eq!(seen.len(), 64);
        let totals: Vec<i64> = seen
            .iter()
            .map(|t| t.iter().map(|&i| degrees[i]).sum())
            .collect();
        assert!(totals.windows(2).all(|w| w[0] <= w[1]));
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 64);
    }
}
