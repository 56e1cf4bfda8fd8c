//! Associative polynomials in `z1, z2, ..`, identities of matrix algebras, and
//! right operator identities of the Witt algebra and its triangular subalgebras.
//!
//! Right multiplication `R_a` acts on coefficient columns as `J(a)`, so an
//! operator polynomial vanishes on a class of derivations exactly when it is an
//! identity of the matching matrix algebra. Both sides of that equivalence are
//! computed here independently.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freelsa::{Word, WordCombination};
use crate::matrix::PolyMatrix;
use crate::poly::{fmt_term, join_terms, Polynomial, VarSet};
use crate::rational::Rational;
use crate::witt::{basis_up_to, for_each_tuple_by_degree, random_derivation, Class, Derivation};

/// An element of the free associative algebra: words in the letters `z_i`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AssocPoly {
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl AssocPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(letters: &[u32]) -> Self {
        let mut p = Self::zero();
        p.add_term(letters.to_vec(), &Rational::one());
        p
    }

    pub fn add_term(&mut self, word: Vec<u32>, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(word).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Sorted distinct letters.
    pub fn letters(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.terms.keys().flatten().copied().collect();
        set.into_iter().collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (w, a) in &self.terms {
            out.add_term(w.clone(), &(a * c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, &(a * b));
            }
        }
        out
    }

    /// `[a, b] = ab - ba`
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// The involution fixing each `z_i`: every word reversed.
    pub fn involution(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.iter().rev().copied().collect(), c);
        }
        out
    }

    /// Replaces each letter by `sigma(letter)`.
    pub fn relabel(&self, sigma: impl Fn(u32) -> u32) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.iter().map(|&l| sigma(l)).collect(), c);
        }
        out
    }

    /// `s_m = sum over permutations of sgn(p) z_p(1) .. z_p(m)`.
    pub fn standard(m: usize) -> Self {
        let mut out = Self::zero();
        let mut perm: Vec<u32> = (1..=m as u32).collect();
        heap_permutations(&mut perm, m, 1, &mut |p, sign| {
            out.add_term(p.to_vec(), &Rational::from_int(sign))
        });
        out
    }

    /// `[z1, z2][z3, z4] .. [z(2m-1), z(2m)]`
    pub fn commutator_product(m: usize) -> Self {
        let z = |i: u32| AssocPoly::word(&[i]);
        (0..m as u32).fold(AssocPoly::word(&[]), |acc, k| {
            acc.mul(&z(2 * k + 1).commutator(&z(2 * k + 2)))
        })
    }

    /// Evaluates on matrices, one per letter (`args[i - 1]` for `z_i`).
    pub fn eval_matrices(&self, args: &[PolyMatrix]) -> Result<PolyMatrix> {
        let first = args.first().ok_or(Error::Invalid("no matrices".into()))?;
        let (n, vars) = (first.n(), first.vars());
        let mut acc = PolyMatrix::zero(n, vars);
        for (w, c) in &self.terms {
            let mut prod = PolyMatrix::identity(n, vars);
            for &l in w {
                let m = args.get(l as usize - 1).ok_or(Error::IndexOutOfRange {
                    index: l as usize,
                    max: args.len(),
                })?;
                prod = prod.mul(m);
            }
            acc = acc.add(&prod.scale(c));
        }
        Ok(acc)
    }
}

/// Heap's algorithm, reporting each permutation with its sign.
fn heap_permutations(
    a: &mut [u32],
    k: usize,
    sign: i64,
    visit: &mut impl FnMut(&[u32], i64),
) -> i64 {
    if k <= 1 {
        visit(a, sign);
        return sign;
    }
    let mut sign = heap_permutations(a, k - 1, sign, visit);
    for i in 0..k - 1 {
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
        sign = -sign;
        sign = heap_permutations(a, k - 1, sign, visit);
    }
    sign
}

impl fmt::Display for AssocPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms.iter().map(|(w, c)| {
            let body: Vec<String> = w.iter().map(|l| format!("z{l}")).collect();
            if body.is_empty() {
                c.to_string()
            } else {
                fmt_term(c, &body.join(" "))
            }
        });
        f.write_str(&join_terms(terms))
    }
}

impl fmt::Debug for AssocPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Outcome of deciding whether `f` is an identity of a matrix algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixVerdict {
    pub identity: bool,
    /// For a non-identity: one rational matrix per letter `z1..zm` (row-major).
    pub witness: Option<Vec<Vec<Vec<Rational>>>>,
    /// `f` evaluated at the witness.
    pub value: Option<Vec<Vec<Rational>>>,
}

/// Matrix units `E_ij` allowed by the class, as `(row, col)`.
fn allowed_positions(n: usize, cls: Class) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let ok = match cls {
                Class::Full => true,
                Class::Triangular => j >= i,
                Class::StronglyTriangular => j > i,
            };
            if ok {
                out.push((i, j));
            }
        }
    }
    out
}

/// Decides `f = 0` on `M_n(k)`, upper triangular `T_n(k)` or strictly upper
/// triangular `ST_n(k)` by evaluating on generic matrices whose entries are
/// independent commuting variables. Over an infinite field this is exact.
pub fn matrix_identity_decide(f: &AssocPoly, n: usize, cls: Class) -> Result<MatrixVerdict> {
    if n == 0 {
        return Err(Error::Invalid("matrix size must be positive".into()));
    }
    let m = f.letters().last().copied().unwrap_or(0) as usize;
    let pos = allowed_positions(n, cls);
    let vars = VarSet::generic(m * pos.len());
    let generic: Vec<PolyMatrix> = (0..m)
        .map(|k| {
            let mut g = PolyMatrix::zero(n, vars);
            for (p, &(i, j)) in pos.iter().enumerate() {
                g.set(i, j, Polynomial::var(vars, k * pos.len() + p));
            }
            g
        })
        .collect();
    let value = if m == 0 {
        // constants only
        PolyMatrix::identity(n, vars).scale(&f.terms.get(&Vec::new()).cloned().unwrap_or_default())
    } else {
        f.eval_matrices(&generic)?
    };
    let Some((i, j)) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !value.get(i, j).is_zero())
    else {
        return Ok(MatrixVerdict {
            identity: true,
            witness: None,
            value: None,
        });
    };

    // fix the variables one at a time to the smallest value in 0..=deg
    // keeping the chosen entry nonzero
    let mut p = value.get(i, j).clone();
    let mut point = vec![Rational::zero(); vars.len()];
    for (v, slot) in point.iter_mut().enumerate() {
        let deg = p.degree_in(v).max(0);
        let mut fixed = false;
        for t in 0..=deg as i64 {
            let q = p.substitute(v, &Rational::from_int(t))?;
            if !q.is_zero() {
                *slot = Rational::from_int(t);
                p = q;
                fixed = true;
                break;
            }
        }
        assert!(fixed, "a nonzero polynomial survives some value in 0..=deg");
    }
    let witness: Vec<Vec<Vec<Rational>>> = (0..m)
        .map(|k| {
            let mut rows = vec![vec![Rational::zero(); n]; n];
            for (p, &(i, j)) in pos.iter().enumerate() {
                rows[i][j] = point[k * pos.len() + p].clone();
            }
            rows
        })
        .collect();
    let concrete: Vec<PolyMatrix> = witness
        .iter()
        .map(|r| PolyMatrix::from_rationals(r))
        .collect();
    let at = f.eval_matrices(&concrete)?;
    assert!(!at.is_zero(), "witness must validate");
    Ok(MatrixVerdict {
        identity: false,
        witness: Some(witness),
        value: at.to_rationals(),
    })
}

/// How the right operator check is carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Mode {
    /// Through the matrix algebra, exactly.
    Decide,
    /// Basis tuples by increasing total degree (at most `exhaustive_limit`),
    /// then `samples` seeded random tuples.
    Sample {
        degree_bound: i64,
        samples: usize,
        seed: u64,
        exhaustive_limit: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpWitness {
    /// `a_1..a_m` for the letters `z_1..z_m`
    pub args: Vec<Derivation>,
    pub c: Derivation,
    pub value: Derivation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpVerdict {
    /// In sample mode: no counterexample was found.
    pub identity: bool,
    pub witness: Option<OpWitness>,
    pub mode: Mode,
    pub tuples_checked: u64,
}

/// `f(R_{a_1}, .., R_{a_m}) c`, sharing common suffixes of the words of `f`.
pub struct OperatorTrie {
    coeff: Rational,
    children: BTreeMap<u32, OperatorTrie>,
}

impl OperatorTrie {
    pub fn new(f: &AssocPoly) -> Self {
        let mut root = OperatorTrie {
            coeff: Rational::zero(),
            children: BTreeMap::new(),
        };
        for (w, c) in f.terms() {
            let mut node = &mut root;
            for &l in w.iter().rev() {
                node = node.children.entry(l).or_insert_with(|| OperatorTrie {
                    coeff: Rational::zero(),
                    children: BTreeMap::new(),
                });
            }
            node.coeff = c.clone();
        }
        root
    }

    pub fn apply(&self, args: &[Derivation], c: &Derivation) -> Result<Derivation> {
        let mut acc = Derivation::zero(c.n(), c.is_laurent());
        self.accumulate(args, c, &mut acc)?;
        Ok(acc)
    }

    fn accumulate(
        &self,
        args: &[Derivation],
        cur: &Derivation,
        acc: &mut Derivation,
    ) -> Result<()> {
        if !self.coeff.is_zero() {
            *acc = acc.checked_add(&cur.scale(&self.coeff))?;
        }
        for (&l, child) in &self.children {
            let a = args.get(l as usize - 1).ok_or(Error::IndexOutOfRange {
                index: l as usize,
                max: args.len(),
            })?;
            let next = cur.ls_mul(a)?;
            if !next.is_zero() {
                child.accumulate(args, &next, acc)?;
            }
        }
        Ok(())
    }
}

/// `f(R_{a_1}, .., R_{a_m}) c` evaluated directly in the Witt algebra.
pub fn apply_operator(f: &AssocPoly, args: &[Derivation], c: &Derivation) -> Result<Derivation> {
    OperatorTrie::new(f).apply(args, c)
}

/// A derivation whose Jacobian is the constant matrix `b`:
/// coefficient `r` is `sum_t b[r][t] x_t`.
pub fn derivation_with_jacobian(b: &[Vec<Rational>]) -> Derivation {
    let n = b.len();
    let vars = VarSet::x(n);
    let coeffs = b
        .iter()
        .map(|row| {
            let mut p = Polynomial::zero(vars);
            for (t, c) in row.iter().enumerate() {
                p = &p + &Polynomial::var(vars, t).scale(c);
            }
            p
        })
        .collect();
    Derivation::from_coeffs(coeffs).expect("well formed")
}

/// Checks whether `f(R_{y_1}, .., R_{y_m}) y = 0` holds on the class of
/// derivations of `k[x1..xn]`.
pub fn right_operator_check(f: &AssocPoly, n: usize, cls: Class, mode: Mode) -> Result<OpVerdict> {
    let m = f.letters().last().copied().unwrap_or(0) as usize;
    match mode {
        Mode::Decide => {
            let mv = matrix_identity_decide(f, n, cls)?;
            let Some(ws) = mv.witness else {
                return Ok(OpVerdict {
                    identity: true,
                    witness: None,
                    mode,
                    tuples_checked: 0,
                });
            };
            let value = mv.value.expect("witness comes with its value");
            let args: Vec<Derivation> = ws.iter().map(|b| derivation_with_jacobian(b)).collect();
            // a column of f(B) that is nonzero picks c = d_s
            let s = (0..n)
                .find(|&s| (0..n).any(|r| !value[r][s].is_zero()))
                .expect("nonzero value");
            let c = Derivation::partial(n, s);
            let out = apply_operator(f, &args, &c)?;
            assert!(!out.is_zero(), "operator witness must validate");
            Ok(OpVerdict {
                identity: false,
                witness: Some(OpWitness {
                    args,
                    c,
                    value: out,
                }),
                mode,
                tuples_checked: 1,
            })
        }
        Mode::Sample {
            degree_bound,
            samples,
            seed,
            exhaustive_limit,
        } => {
            let trie = OperatorTrie::new(f);
            let basis = basis_up_to(n, degree_bound, cls);
            let degrees: Vec<i64> = basis
                .iter()
                .map(|d| d.homogeneous_degree().unwrap())
                .collect();
            let mut checked = 0u64;
            let mut err = None;
            let found = if exhaustive_limit > 0 {
                for_each_tuple_by_degree(&degrees, m + 1, |t| {
                    if checked as usize >= exhaustive_limit {
                        return ControlFlow::Break(None);
                    }
                    checked += 1;
                    let args: Vec<Derivation> = t[..m].iter().map(|&i| basis[i].clone()).collect();
                    let c = basis[t[m]].clone();
                    match trie.apply(&args, &c) {
                        Ok(v) if v.is_zero() => ControlFlow::Continue(()),
                        Ok(value) => ControlFlow::Break(Some(OpWitness { args, c, value })),
                        Err(e) => {
                            err = Some(e);
                            ControlFlow::Break(None)
                        }
                    }
                })
                .flatten()
            } else {
                None
            };
            if let Some(e) = err {
                return Err(e);
            }
            if let Some(w) = found {
                return Ok(OpVerdict {
                    identity: false,
                    witness: Some(w),
                    mode,
                    tuples_checked: checked,
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let args: Vec<Derivation> = (0..m)
                    .map(|_| random_derivation(&mut rng, n, degree_bound, cls, 3))
                    .collect();
                let c = random_derivation(&mut rng, n, degree_bound, cls, 3);
                checked += 1;
                let value = trie.apply(&args, &c)?;
                if !value.is_zero() {
                    return Ok(OpVerdict {
                        identity: false,
                        witness: Some(OpWitness { args, c, value }),
                        mode,
                        tuples_checked: checked,
                    });
                }
            }
            Ok(OpVerdict {
                identity: true,
                witness: None,
                mode,
                tuples_checked: checked,
            })
        }
    }
}

/// Evaluates `f(R..)c` on every tuple of basis derivations of the class with
/// degree `<= degree_bound` (arguments and `c` alike). Returns the first
/// nonzero case in enumeration order, or `None` if all vanish.
pub fn exhaustive_operator_check(
    f: &AssocPoly,
    n: usize,
    cls: Class,
    degree_bound: i64,
) -> Result<Option<OpWitness>> {
    let m = f.letters().last().copied().unwrap_or(0) as usize;
    let basis = basis_up_to(n, degree_bound, cls);
    let b = basis.len();
    let total = (b as u64)
        .checked_pow(m as u32)
        .ok_or(Error::Invalid("too many tuples".into()))?;
    let trie = OperatorTrie::new(f);
    let found = (0..total).into_par_iter().map(|mut idx| {
        let mut args = Vec::with_capacity(m);
        for _ in 0..m {
            args.push(basis[(idx % b as u64) as usize].clone());
            idx /= b as u64;
        }
        for c in &basis {
            let v = trie.apply(&args, c)?;
            if !v.is_zero() {
                return Ok(Some(OpWitness {
                    args,
                    c: c.clone(),
                    value: v,
                }));
            }
        }
        Ok(None)
    });
    let found: Option<Result<OpWitness>> = found
        .filter_map(|r: Result<Option<OpWitness>>| r.transpose())
        .find_first(|_| true);
    found.transpose()
}

/// The free left-symmetric element `f(R_{y_1}, .., R_{y_m}) y_c`, rightmost
/// letter applied first.
pub fn right_operator_element(f: &AssocPoly, c_letter: u32) -> WordCombination {
    let mut out = WordCombination::zero();
    for (w, coeff) in f.terms() {
        let word = w.iter().rev().fold(Word::leaf(c_letter), |acc, &l| {
            Word::pair(acc, Word::leaf(l))
        });
        out.add_term(word, coeff);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freelsa::{normal_form, novikov_element};
    use crate::parse::parse_assoc;
    use crate::witt::theta_matrix;
    use proptest::prelude::*;
    use rand::Rng;

    fn a(s: &str) -> AssocPoly {
        parse_assoc(s).unwrap()
    }

    fn random_assoc(rng: &mut impl Rng, letters: u32, max_len: usize, terms: usize) -> AssocPoly {
        let mut f = AssocPoly::zero();
        for _ in 0..terms {
            let len = rng.gen_range(1..=max_len);
            let w: Vec<u32> = (0..len).map(|_| rng.gen_range(1..=letters)).collect();
            f.add_term(w, &Rational::from_int(rng.gen_range(-2..=2)));
        }
        f
    }

    #[test]
    fn involution_examples() {
        assert_eq!(a("z1 z2 z3").involution(), a("z3 z2 z1"));
        assert_eq!(a("z1").involution(), a("z1"));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let f = random_assoc(&mut rng, 3, 4, 4);
            assert_eq!(f.involution().involution(), f);
        }
    }

    #[test]
    fn standard_polynomials() {
        assert_eq!(AssocPoly::standard(2), a("z1 z2 - z2 z1"));
        assert_eq!(AssocPoly::standard(4).num_terms(), 24);
        assert_eq!(
            AssocPoly::standard(3).to_string(),
            "z1 z2 z3 - z1 z3 z2 - z2 z1 z3 + z2 z3 z1 + z3 z1 z2 - z3 z2 z1"
        );
        for m in 2..=4u32 {
            let s = AssocPoly::standard(m as usize);
            for i in 1..m {
                let swapped = s.relabel(|l| {
                    if l == i {
                        i + 1
                    } else if l == i + 1 {
                        i
                    } else {
                        l
                    }
                });
                assert_eq!(swapped, s.scale(&Rational::from_int(-1)));
            }
        }
    }

    #[test]
    fn matrix_decisions() {
        assert!(
            matrix_identity_decide(&AssocPoly::standard(4), 2, Class::Full)
                .unwrap()
                .identity
        );
        let v = matrix_identity_decide(&AssocPoly::standard(2), 2, Class::Full).unwrap();
        assert!(!v.identity);
        let w = v.witness.unwrap();
        let prod = |x: &Vec<Vec<Rational>>, y: &Vec<Vec<Rational>>| {
            PolyMatrix::from_rationals(x).mul(&PolyMatrix::from_rationals(y))
        };
        assert_ne!(prod(&w[0], &w[1]), prod(&w[1], &w[0]));

        assert!(
            matrix_identity_decide(&AssocPoly::commutator_product(2), 2, Class::Triangular)
                .unwrap()
                .identity
        );
        assert!(
            !matrix_identity_decide(&AssocPoly::standard(2), 2, Class::Triangular)
                .unwrap()
                .identity
        );
        assert!(
            matrix_identity_decide(&a("z1 z2"), 2, Class::StronglyTriangular)
                .unwrap()
                .identity
        );
        assert!(
            !matrix_identity_decide(&a("z1"), 2, Class::StronglyTriangular)
                .unwrap()
                .identity
        );
        assert!(
            !matrix_identity_decide(&a("z1 z2"), 3, Class::StronglyTriangular)
                .unwrap()
                .identity
        );
        assert!(
            matrix_identity_decide(&a("z1 z2 z3"), 3, Class::StronglyTriangular)
                .unwrap()
                .identity
        );
        assert!(
            !matrix_identity_decide(&AssocPoly::standard(4), 3, Class::Full)
                .unwrap()
                .identity
        );
    }

    #[test]
    fn matrix_unit_oracle_for_s2() {
        // [E11, E12] = E12
        let e = |i: usize, j: usize| {
            let mut r = vec![vec![Rational::zero(); 2]; 2];
            r[i][j] = Rational::one();
            PolyMatrix::from_rationals(&r)
        };
        let v = AssocPoly::standard(2)
            .eval_matrices(&[e(0, 0), e(0, 1)])
            .unwrap();
        assert_eq!(v, e(0, 1));
    }

    #[test]
    fn involution_does_not_change_the_verdict() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let f = random_assoc(&mut rng, 3, 4, 3);
            for cls in [Class::Full, Class::Triangular] {
                assert_eq!(
                    matrix_identity_decide(&f, 2, cls).unwrap().identity,
                    matrix_identity_decide(&f.involution(), 2, cls)
                        .unwrap()
                        .identity
                );
            }
        }
    }

    #[test]
    fn operator_witnesses() {
        let v =
            right_operator_check(&AssocPoly::standard(2), 2, Class::Full, Mode::Decide).unwrap();
        assert!(!v.identity);
        let w = v.witness.unwrap();
        assert_eq!(
            apply_operator(&AssocPoly::standard(2), &w.args, &w.c).unwrap(),
            w.value
        );

        let mode = Mode::Sample {
            degree_bound: 1,
            samples: 0,
            seed: 0,
            exhaustive_limit: 10_000,
        };
        let v = right_operator_check(&AssocPoly::standard(2), 2, Class::Full, mode).unwrap();
        assert!(!v.identity && v.witness.is_some());

        let v =
            right_operator_check(&a("z1 z2"), 2, Class::StronglyTriangular, Mode::Decide).unwrap();
        assert!(v.identity);
    }

    #[test]
    fn operator_matches_theta() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let f = random_assoc(&mut rng, 2, 3, 3);
            let args: Vec<Derivation> = (0..2)
                .map(|_| random_derivation(&mut rng, 2, 2, Class::Full, 2))
                .collect();
            let c = random_derivation(&mut rng, 2, 2, Class::Full, 2);
            let direct = apply_operator(&f, &args, &c).unwrap();
            let mut col = vec![Polynomial::zero(VarSet::x(2)); 2];
            for (w, k) in f.terms() {
                let word: Vec<usize> = w.iter().map(|&l| l as usize).collect();
                let part = theta_matrix(&word, &args)
                    .unwrap()
                    .scale(k)
                    .mul_column(c.coeffs());
                col = col.iter().zip(&part).map(|(x, y)| x + y).collect();
            }
            assert_eq!(direct.coeffs(), &col[..]);
        }
    }

    #[test]
    fn novikov_from_s2() {
        let g = right_operator_element(&AssocPoly::standard(2), 3);
        assert_eq!(normal_form(&g), normal_form(&novikov_element(3, 2, 1)));
    }

    #[test]
    fn no_multilinear_degree_three_operator_identity_in_l2() {
        // the six words z_p(1) z_p(2) z_p(3) evaluated on degree-0 tuples
        let words: Vec<AssocPoly> = {
            let mut v = Vec::new();
            heap_permutations(&mut [1, 2, 3], 3, 1, &mut |p, _| v.push(AssocPoly::word(p)));
            v
        };
        let basis = basis_up_to(2, 0, Class::Full);
        let mut rows: Vec<Vec<Rational>> = vec![Vec::new(); words.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..40 {
            let args: Vec<Derivation> = (0..3)
                .map(|_| basis[rng.gen_range(0..basis.len())].clone())
                .collect();
            let c = random_derivation(&mut rng, 2, 1, Class::Full, 2);
            let values: Vec<Derivation> = words
                .iter()
                .map(|w| apply_operator(w, &args, &c).unwrap())
                .collect();
            let keys: BTreeSet<(crate::poly::Monomial, usize)> = values
                .iter()
                .flat_map(|v| v.terms().map(|(m, i, _)| (m.clone(), i)))
                .collect();
            for (k, v) in values.iter().enumerate() {
                for (m, i) in &keys {
                    rows[k].push(v.coeff(*i).coefficient(m));
                }
            }
        }
        assert_eq!(crate::matrix::rank_and_pivots(&rows).0, 6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn display_parse_round_trip(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_assoc(&mut rng, 4, 4, 4);
            prop_assert_eq!(parse_assoc(&f.to_string()).unwrap(), f);
        }
    }
}
