//! Monomial derivations whose exponents are polynomials in parameters
//! `l_ij` (`i < j`), the generators `z_i`, the homomorphism from the free
//! algebra into them, and integer specializations landing in strongly
//! triangular derivations. Together these certify that a nonzero multilinear
//! element is not an identity of `ST(L_n)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freelsa::{
    evaluate, is_in_w, is_multilinear, l_form, normal_form, LsElement, Word, WordCombination,
};
use crate::matrix::{determinant, nullspace, rank_and_pivots};
use crate::parse::{parse_derivation, parse_element};
use crate::poly::{Monomial, Polynomial, VarSet};
use crate::rational::Rational;
use crate::witt::{Class, Derivation, WittAlgebra};

/// `l_ij` as a polynomial, zero unless `i < j` (1-based).
pub fn lambda_var(n: usize, i: usize, j: usize) -> Polynomial {
    let vars = VarSet::lambda(n);
    match VarSet::lambda_index(n, i, j) {
        Some(idx) => Polynomial::var(vars, idx),
        None => Polynomial::zero(vars),
    }
}

/// A finite sum of `c x1^f1 .. xn^fn d_i` with `c, f1, .., fn` polynomials in
/// the parameters.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LambdaDerivation {
    n: usize,
    /// `(exponents, direction)` to coefficient; direction is 0-based
    terms: BTreeMap<(Vec<Polynomial>, usize), Polynomial>,
}

impl LambdaDerivation {
    pub fn zero(n: usize) -> Self {
        LambdaDerivation {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// A single term; `dir` is 0-based.
    pub fn term(coeff: Polynomial, exps: Vec<Polynomial>, dir: usize) -> Result<Self> {
        let n = exps.len();
        let vars = VarSet::lambda(n);
        if coeff.vars() != vars || exps.iter().any(|e| e.vars() != vars) {
            return Err(Error::VarSetMismatch(
                vars.to_string(),
                coeff.vars().to_string(),
            ));
        }
        if dir >= n {
            return Err(Error::IndexOutOfRange {
                index: dir + 1,
                max: n,
            });
        }
        let mut out = Self::zero(n);
        out.add_term(exps, dir, &coeff);
        Ok(out)
    }

    fn add_term(&mut self, exps: Vec<Polynomial>, dir: usize, c: &Polynomial) {
        if c.is_zero() {
            return;
        }
        let key = (exps, dir);
        let sum = match self.terms.get(&key) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `(coefficient, exponents, 0-based direction)`
    pub fn terms(&self) -> impl Iterator<Item = (&Polynomial, &[Polynomial], usize)> {
        self.terms.iter().map(|((e, d), c)| (c, e.as_slice(), *d))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut out = self.clone();
        for ((e, d), c) in &other.terms {
            out.add_term(e.clone(), *d, c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Polynomial) -> Self {
        let mut out = Self::zero(self.n);
        for ((e, d), a) in &self.terms {
            out.add_term(e.clone(), *d, &(a * c));
        }
        out
    }

    /// `u d_i o v d_j = deg_{x_i}(v) (u v / x_i) d_j`
    pub fn lambda_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let vars = VarSet::lambda(self.n);
        let one = Polynomial::one(vars);
        let mut out = Self::zero(self.n);
        for ((eu, i), cu) in &self.terms {
            for ((ev, j), cv) in &other.terms {
                let c = &(cu * cv) * &ev[*i];
                if c.is_zero() {
                    continue;
                }
                let mut e: Vec<Polynomial> = eu.iter().zip(ev).map(|(a, b)| a + b).collect();
                e[*i] = &e[*i] - &one;
                out.add_term(e, *j, &c);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for LambdaDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, ((exps, dir), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let mut parts = Vec::new();
            match c.as_constant() {
                Some(q) if q.is_one() => {}
                Some(q) => parts.push(q.to_string()),
                None if c.num_terms() == 1 => parts.push(c.to_string()),
                None => parts.push(format!("({c})")),
            }
            for (i, e) in exps.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                match e.as_constant() {
                    Some(q) if q.is_one() => parts.push(format!("x{}", i + 1)),
                    Some(q) if !q.is_negative() => parts.push(format!("x{}^{q}", i + 1)),
                    _ if e.num_terms() == 1 && !e.to_string().starts_with('-') => {
                        parts.push(format!("x{}^{e}", i + 1))
                    }
                    _ => parts.push(format!("x{}^({e})", i + 1)),
                }
            }
            parts.push(format!("d{}", dir + 1));
            f.write_str(&parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LambdaDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `z_i = x_(i+1)^l_(i,i+1) .. x_n^l_(i,n) d_i` for `i = 1..n`.
pub fn generators_z(n: usize) -> Vec<LambdaDerivation> {
    (1..=n)
        .map(|i| z_exponents(n, i))
        .map(|(e, d)| LambdaDerivation::term(Polynomial::one(VarSet::lambda(n)), e, d).unwrap())
        .collect()
}

fn z_exponents(n: usize, i: usize) -> (Vec<Polynomial>, usize) {
    ((1..=n).map(|k| lambda_var(n, i, k)).collect(), i - 1)
}

/// The single term `f^w x^(f_1^w) .. x^(f_n^w) d_r(w)` that a word maps to.
#[derive(Clone, PartialEq, Eq)]
pub struct ChiData {
    pub f_w: Polynomial,
    pub exps: Vec<Polynomial>,
    /// 1-based
    pub r: usize,
}

impl ChiData {
    pub fn to_lambda_derivation(&self) -> LambdaDerivation {
        let mut out = LambdaDerivation::zero(self.exps.len());
        out.add_term(self.exps.clone(), self.r - 1, &self.f_w);
        out
    }
}

impl fmt::Debug for ChiData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ChiData {{ f_w: {}, exps: {:?}, r: {} }}",
            self.f_w, self.exps, self.r
        )
    }
}

/// `f^(uv) = f^u f^v f^v_r(u)`; exponents add, less one at `r(u)`; `r(uv) = r(v)`.
pub fn chi(w: &Word, n: usize) -> Result<ChiData> {
    match w.split() {
        None => {
            let i = w.as_leaf().unwrap() as usize;
            if i == 0 || i > n {
                return Err(Error::IndexOutOfRange { index: i, max: n });
            }
            let (exps, _) = z_exponents(n, i);
            Ok(ChiData {
                f_w: Polynomial::one(VarSet::lambda(n)),
                exps,
                r: i,
            })
        }
        Some((u, v)) => {
            let cu = chi(u, n)?;
            let cv = chi(v, n)?;
            let ru = cu.r - 1;
            let f_w = &(&cu.f_w * &cv.f_w) * &cv.exps[ru];
            let mut exps: Vec<Polynomial> =
                cu.exps.iter().zip(&cv.exps).map(|(a, b)| a + b).collect();
            exps[ru] = &exps[ru] - &Polynomial::one(VarSet::lambda(n));
            Ok(ChiData { f_w, exps, r: cv.r })
        }
    }
}

/// Linear extension of [`chi`].
pub fn chi_element(g: &WordCombination, n: usize) -> Result<LambdaDerivation> {
    let vars = VarSet::lambda(n);
    let mut out = LambdaDerivation::zero(n);
    for (w, c) in g.terms() {
        let d = chi(w, n)?;
        out.add_term(d.exps, d.r - 1, &d.f_w.scale(c));
    }
    debug_assert!(out.terms.values().all(|p| p.vars() == vars));
    Ok(out)
}

/// The leading monomial of `f^w` for `w` multilinear, special and reduced,
/// computed from the L-form: `l_(i,r(w_1)) .. l_(i,r(w_m))` times the leading
/// monomials of the factors.
pub fn leading_f(w: &Word, n: usize) -> Result<Monomial> {
    if !is_in_w(w) {
        return Err(Error::NotInW(w.to_string()));
    }
    let vars = VarSet::lambda(n);
    let mut exps = vec![0i32; vars.len()];
    fn go(w: &Word, n: usize, exps: &mut [i32]) -> Result<()> {
        let (factors, i) = l_form(w)?;
        for wj in &factors {
            let r = wj.last_letter() as usize;
            let idx = VarSet::lambda_index(n, i as usize, r)
                .ok_or(Error::IndexOutOfRange { index: r, max: n })?;
            exps[idx] += 1;
            go(wj, n, exps)?;
        }
        Ok(())
    }
    if let Some(&big) = w.letters().iter().max() {
        if big as usize > n {
            return Err(Error::IndexOutOfRange {
                index: big as usize,
                max: n,
            });
        }
    }
    go(w, n, &mut exps)?;
    Ok(Monomial::from_exponents(&exps))
}

/// `(i, j)` for every `l_ij` dividing `m`, with multiplicity.
pub fn divisors(m: &Monomial, n: usize) -> Vec<(usize, usize)> {
    let vars = VarSet::lambda(n);
    let mut out = Vec::new();
    for idx in m.support() {
        for _ in 0..m.exponent(idx) {
            out.push(vars.lambda_pair(idx));
        }
    }
    out
}

/// Recovers the unique multilinear special reduced word of degree `>= 2` with
/// the given leading monomial. Each `l_pq` dividing `m` makes `p` the parent of
/// `q`; the least first index is the rightmost letter, and the children of a
/// node are the rightmost letters of its L-form factors.
///
/// The empty monomial is rejected: it is the leading monomial of every single
/// letter, so it determines no word. [`reconstruct_word_rooted`] accepts it
/// when the letter is known.
pub fn reconstruct_word(m: &Monomial, n: usize) -> Result<Word> {
    let ds = divisors(m, n);
    let bad = |why: &str| {
        Error::BadLeadingMonomial(format!("{} ({why})", m.fmt_with(&VarSet::lambda(n))))
    };
    if ds.is_empty() {
        return Err(bad("the empty monomial belongs to every single letter"));
    }
    let root = ds.iter().map(|&(p, _)| p).min().unwrap();
    reconstruct_word_rooted(m, n, root as u32)
}

/// As [`reconstruct_word`], with the rightmost letter given.
pub fn reconstruct_word_rooted(m: &Monomial, n: usize, root: u32) -> Result<Word> {
    let vars = VarSet::lambda(n);
    let bad = |why: &str| Error::BadLeadingMonomial(format!("{} ({why})", m.fmt_with(&vars)));
    if m.len() != vars.len() || m.has_negative() {
        return Err(bad("not a monomial in the parameters"));
    }
    let ds = divisors(m, n);
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    for &(p, q) in &ds {
        if parent.insert(q, p).is_some() {
            return Err(bad("a second index repeats"));
        }
    }
    let root = root as usize;
    if root == 0 || root > n {
        return Err(Error::IndexOutOfRange {
            index: root,
            max: n,
        });
    }
    if parent.contains_key(&root) {
        return Err(bad("the least first index is also a second index"));
    }
    // every first index must hang below the root
    for &(p, _) in &ds {
        let mut cur = p;
        while cur != root {
            cur = *parent
                .get(&cur)
                .ok_or_else(|| bad("divisors do not form a single tree"))?;
        }
    }
    let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&q, &p) in &parent {
        children.entry(p).or_default().push(q);
    }
    fn build(node: usize, children: &BTreeMap<usize, Vec<usize>>) -> Word {
        let mut factors: Vec<Word> = children
            .get(&node)
            .map(|cs| cs.iter().map(|&c| build(c, children)).collect())
            .unwrap_or_default();
        factors.sort_by(|a, b| b.cmp(a));
        Word::from_l_form(&factors, node as u32)
    }
    let w = build(root, &children);
    if !is_in_w(&w) || leading_f(&w, n)? != *m {
        return Err(bad(
            "not the leading monomial of a multilinear special reduced word",
        ));
    }
    Ok(w)
}

/// Evaluates coefficients and exponents at the integer point `s` (one entry
/// per parameter, in listing order). The result is a Laurent derivation.
pub fn specialize(a: &LambdaDerivation, s: &[i64]) -> Result<Derivation> {
    let n = a.n;
    let vars = VarSet::lambda(n);
    if s.len() != vars.len() {
        return Err(Error::DimensionMismatch {
            expected: vars.len(),
            found: s.len(),
        });
    }
    let point: Vec<Rational> = s.iter().map(|&v| Rational::from_int(v)).collect();
    let mut out = Derivation::zero(n, true);
    for (c, exps, dir) in a.terms() {
        let cv = c.eval(&point)?;
        if cv.is_zero() {
            continue;
        }
        let mut e = Vec::with_capacity(n);
        for p in exps {
            let v = p.eval(&point)?;
            let k = v
                .to_i64()
                .filter(|_| v.is_integer())
                .ok_or_else(|| Error::NonIntegralExponent(p.to_string()))?;
            e.push(i32::try_from(k).map_err(|_| Error::NonIntegralExponent(p.to_string()))?);
        }
        out = out.checked_add(&Derivation::monomial(n, true, &e, dir, cv)?)?;
    }
    Ok(out)
}

/// [`specialize`] followed by the move to polynomial derivations, which must
/// succeed for images of the `z_i` at nonnegative points.
pub fn specialize_polynomial(a: &LambdaDerivation, s: &[i64]) -> Result<Derivation> {
    specialize(a, s)?.with_laurent(false)
}

/// A machine-checkable witness that an element is not an identity of `ST(L_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub input_element: String,
    pub n: usize,
    /// letter `i` of the input becomes letter `sigma[i]`
    pub sigma: BTreeMap<u32, u32>,
    /// the integer point, keyed `l12`, `l13`, ..
    pub s: BTreeMap<String, i64>,
    /// images of `y1..yn` after relabeling
    pub substitutions: Vec<String>,
    /// the relabeled element evaluated at the substitutions
    pub value: String,
    pub validated: bool,
    #[serde(skip)]
    pub point: Vec<i64>,
    #[serde(skip)]
    pub substitution_derivations: Vec<Derivation>,
}

impl Certificate {
    /// Values for the letters of the original (unrelabeled) element.
    pub fn assignment(&self) -> BTreeMap<u32, Derivation> {
        self.sigma
            .iter()
            .map(|(&i, &j)| (i, self.substitution_derivations[j as usize - 1].clone()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certification {
    /// The element is zero modulo left-symmetry.
    TrivialIdentity,
    Certificate(Box<Certificate>),
}

/// Runs the certification pipeline for a multilinear element of degree `d <= n`:
/// relabel so the lowest word reads `y_d .. y_1`, keep the special part, sum its
/// parameter polynomials and search the grid `{0..deg}^r` in lex order for a
/// point where the sum does not vanish.
pub fn certify_nonidentity(g: &WordCombination, n: usize) -> Result<Certification> {
    let nf = normal_form(g);
    if nf.is_zero() {
        return Ok(Certification::TrivialIdentity);
    }
    if !nf.is_multilinear() {
        return Err(Error::NotMultilinear(g.to_string()));
    }
    nf.multidegree()
        .map_err(|_| Error::NotMultilinear(g.to_string()))?;
    let w1 = nf.lowest_word()?.clone();
    let order = w1.letters();
    let d = order.len();
    if d > n {
        return Err(Error::DegreeExceedsDimension { degree: d, n });
    }
    // the prescribed relabeling makes the lowest word read y_d .. y_1; when it
    // leaves no special part, fall back to the other relabelings in lex order
    let mut letters = order.clone();
    letters.sort_unstable();
    let mut images: Vec<u32> = (1..=d as u32).collect();
    let prescribed: BTreeMap<u32, u32> = order
        .iter()
        .enumerate()
        .map(|(j, &i)| (i, (d - j) as u32))
        .collect();
    let mut tried = 0;
    let vars = VarSet::lambda(n);
    let (sigma, relabeled, f_g) = loop {
        let sigma = match tried {
            0 => prescribed.clone(),
            _ if tried == 1 || next_permutation(&mut images) => letters
                .iter()
                .copied()
                .zip(images.iter().copied())
                .collect(),
            _ => {
                return Err(Error::Invalid(format!(
                    "no relabeling of {g} has a special part"
                )))
            }
        };
        tried += 1;
        let relabeled = crate::freelsa::relabel(&nf, &|i| sigma[&i]);
        let mut f_g = Polynomial::zero(vars);
        let mut leading = BTreeSet::new();
        for (v, beta) in relabeled.terms() {
            if !is_in_w(v) {
                continue;
            }
            let data = chi(v, n)?;
            // distinct special words have distinct leading monomials, so no cancellation
            assert!(
                leading.insert(data.f_w.leading_monomial()?.clone()),
                "leading monomials collide at {v}"
            );
            f_g = &f_g + &data.f_w.scale(beta);
        }
        if !f_g.is_zero() {
            break (sigma, relabeled, f_g);
        }
    };

    let point = grid_search(&f_g)?;
    let zs = generators_z(n);
    let subs: Vec<Derivation> = zs
        .iter()
        .map(|z| specialize_polynomial(z, &point))
        .collect::<Result<_>>()?;
    for sub in &subs {
        assert_eq!(
            sub.membership(),
            Class::StronglyTriangular,
            "specialized generator {sub} must be strongly triangular"
        );
    }

    // the relabeled element, unreduced, evaluated directly
    let raw = g.relabel_raw(&|i| sigma[&i]);
    let assignment: BTreeMap<u32, Derivation> = (1..=n as u32)
        .map(|i| (i, subs[i as usize - 1].clone()))
        .collect();
    let value = evaluate(&raw, &WittAlgebra::new(n), &assignment)?;
    if value.is_zero() {
        return Err(Error::Invalid("certificate value vanished".into()));
    }
    let via_chi = specialize_polynomial(&chi_element(&relabeled, n)?, &point)?;
    assert_eq!(
        value, via_chi,
        "direct evaluation must agree with the parameter computation"
    );

    let mut cert = Certificate {
        input_element: g.to_string(),
        n,
        sigma,
        s: point
            .iter()
            .enumerate()
            .map(|(k, &v)| (vars.var_name(k), v))
            .collect(),
        substitutions: subs.iter().map(|d| d.to_string()).collect(),
        value: value.to_string(),
        validated: false,
        point,
        substitution_derivations: subs,
    };
    cert.validated = validate(&cert)?;
    Ok(Certification::Certificate(Box::new(cert)))
}

/// Steps to the next permutation in lex order; false after the last one.
fn next_permutation(p: &mut [u32]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// First point of `{0..deg}^r` in lex order where `f` is nonzero. Each
/// variable has degree at most `deg`, so a nonzero polynomial never vanishes on
/// the whole grid; fixing coordinates one at a time to the least value that
/// keeps the rest nonzero therefore lands on the lex-first point.
fn grid_search(f: &Polynomial) -> Result<Vec<i64>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let top = f.total_degree().max(0);
    let mut rest = f.clone();
    let mut s = Vec::with_capacity(f.vars().len());
    for k in 0..f.vars().len() {
        let (v, next) = (0..=top)
            .map(|v| rest.substitute(k, &Rational::from_int(v)).map(|p| (v, p)))
            .find(|r| r.as_ref().map_or(true, |(_, p)| !p.is_zero()))
            .expect("a nonzero polynomial survives some grid value")?;
        s.push(v);
        rest = next;
    }
    Ok(s)
}

/// Re-checks a certificate from its text fields alone: parses the element and
/// the substitutions, relabels, evaluates, and compares with the stated value.
pub fn validate(cert: &Certificate) -> Result<bool> {
    let n = cert.n;
    let g = parse_element(&cert.input_element)?;
    let subs: Vec<Derivation> = cert
        .substitutions
        .iter()
        .map(|s| parse_derivation(s, n, false))
        .collect::<Result<_>>()?;
    if subs.len() != n
        || subs
            .iter()
            .any(|d| d.membership() != Class::StronglyTriangular)
    {
        return Ok(false);
    }
    let stated = parse_derivation(&cert.value, n, false)?;
    let sigma = &cert.sigma;
    if g.letters().iter().any(|l| !sigma.contains_key(l)) {
        return Ok(false);
    }
    let raw = g.relabel_raw(&|i| sigma[&i]);
    let assignment: BTreeMap<u32, Derivation> = (1..=n as u32)
        .map(|i| (i, subs[i as usize - 1].clone()))
        .collect();
    let value = evaluate(&raw, &WittAlgebra::new(n), &assignment)?;
    Ok(!value.is_zero() && value == stated)
}

/// Rows indexed by `words`, columns by every coordinate of every evaluation:
/// entry is the coefficient of a fixed `x^a d_i` in `word(assignment)`.
pub fn evaluation_matrix(
    words: &[Word],
    assignments: &[BTreeMap<u32, Derivation>],
    n: usize,
) -> Result<Vec<Vec<Rational>>> {
    let alg = WittAlgebra::new(n);
    let mut rows = vec![Vec::new(); words.len()];
    for a in assignments {
        let values: Vec<Derivation> = words
            .iter()
            .map(|w| evaluate(&WordCombination::from_word(w.clone()), &alg, a))
            .collect::<Result<_>>()?;
        let coords: BTreeSet<(Monomial, usize)> = values
            .iter()
            .flat_map(|v| v.terms().map(|(m, i, _)| (m.clone(), i)))
            .collect();
        for (row, v) in rows.iter_mut().zip(&values) {
            for (m, i) in &coords {
                row.push(v.coeff(*i).coefficient(m));
            }
        }
    }
    Ok(rows)
}

/// The square submatrix on the pivot columns of the evaluation matrix, and its
/// determinant. A nonzero determinant shows the words evaluate to linearly
/// independent functions.
pub fn square_evaluation_matrix(
    words: &[Word],
    assignments: &[BTreeMap<u32, Derivation>],
    n: usize,
) -> Result<(Vec<Vec<Rational>>, Rational)> {
    let full = evaluation_matrix(words, assignments, n)?;
    let (rank, cols) = rank_and_pivots(&full);
    let square: Vec<Vec<Rational>> = full
        .iter()
        .map(|r| cols.iter().map(|&c| r[c].clone()).collect())
        .collect();
    let det = if rank == words.len() {
        determinant(&square)
    } else {
        Rational::zero()
    };
    Ok((square, det))
}

/// Shows that `words` are linearly independent modulo identities of `ST(L_n)`:
/// starting from their single-word certificates, repeatedly certifies a
/// combination that vanishes on every assignment so far, until the evaluation
/// matrix has full rank. Returns the certificates used, the square pivot
/// submatrix and its determinant.
pub fn independence_certificates(
    words: &[Word],
    n: usize,
) -> Result<(Vec<Certificate>, Vec<Vec<Rational>>, Rational)> {
    let mut certs = Vec::new();
    let take = |g: &WordCombination, certs: &mut Vec<Certificate>| -> Result<()> {
        match certify_nonidentity(g, n)? {
            Certification::Certificate(c) => {
                certs.push(*c);
                Ok(())
            }
            Certification::TrivialIdentity => Err(Error::Invalid(format!("{g} is zero"))),
        }
    };
    for x in words {
        take(&WordCombination::from_word(x.clone()), &mut certs)?;
    }
    loop {
        let assignments: Vec<_> = certs.iter().map(Certificate::assignment).collect();
        let full = evaluation_matrix(words, &assignments, n)?;
        let (rank, _) = rank_and_pivots(&full);
        if rank == words.len() {
            let (square, det) = square_evaluation_matrix(words, &assignments, n)?;
            return Ok((certs, square, det));
        }
        let cols = full.first().map_or(0, Vec::len);
        let transposed: Vec<Vec<Rational>> = (0..cols)
            .map(|c| full.iter().map(|r| r[c].clone()).collect())
            .collect();
        let kernel = nullspace(&transposed, words.len());
        let mut g = WordCombination::zero();
        for (x, c) in words.iter().zip(&kernel[0]) {
            g.add_term(x.clone(), c);
        }
        take(&g, &mut certs)?;
    }
}

/// The special part of a reduced element: its terms on multilinear special reduced words.
pub fn special_part(g: &LsElement) -> WordCombination {
    let mut out = WordCombination::zero();
    for (w, c) in g.terms() {
        if is_in_w(w) && is_multilinear(w) {
            out.add_term(w.clone(), c);
        }
    }
    out
}
