//! The free left-symmetric algebra on `y1, y2, ..`: nonassociative words, the
//! word order, reduced words and the rewriting that brings any combination of
//! words to its reduced normal form.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A nonassociative word. Cloning is cheap; subtrees are shared.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word(Arc<Node>);

#[derive(PartialEq, Eq, Hash)]
enum Node {
    Leaf(u32),
    Pair { len: usize, left: Word, right: Word },
}

impl Word {
    pub fn leaf(i: u32) -> Word {
        Word(Arc::new(Node::Leaf(i)))
    }

    pub fn pair(left: Word, right: Word) -> Word {
        let len = left.len() + right.len();
        Word(Arc::new(Node::Pair { len, left, right }))
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        match &*self.0 {
            Node::Leaf(_) => 1,
            Node::Pair { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_leaf(&self) -> Option<u32> {
        match &*self.0 {
            Node::Leaf(i) => Some(*i),
            Node::Pair { .. } => None,
        }
    }

    pub fn split(&self) -> Option<(&Word, &Word)> {
        match &*self.0 {
            Node::Leaf(_) => None,
            Node::Pair { left, right, .. } => Some((left, right)),
        }
    }

    /// The letters read left to right.
    pub fn letters(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.len());
        self.push_letters(&mut out);
        out
    }

    fn push_letters(&self, out: &mut Vec<u32>) {
        match &*self.0 {
            Node::Leaf(i) => out.push(*i),
            Node::Pair { left, right, .. } => {
                left.push_letters(out);
                right.push_letters(out);
            }
        }
    }

    /// The rightmost letter.
    pub fn last_letter(&self) -> u32 {
        let mut w = self;
        while let Some((_, r)) = w.split() {
            w = r;
        }
        w.as_leaf().unwrap()
    }

    /// `((y_a y_b) y_c) ..`
    pub fn left_normed(letters: &[u32]) -> Word {
        let mut it = letters.iter();
        let mut w = Word::leaf(*it.next().expect("nonempty"));
        for &l in it {
            w = Word::pair(w, Word::leaf(l));
        }
        w
    }

    /// Balanced bracketing of the letters, left half heavier.
    pub fn balanced(letters: &[u32]) -> Word {
        assert!(!letters.is_empty());
        if letters.len() == 1 {
            return Word::leaf(letters[0]);
        }
        let mid = letters.len().div_ceil(2);
        Word::pair(
            Word::balanced(&letters[..mid]),
            Word::balanced(&letters[mid..]),
        )
    }

    /// `w1 (w2 ( .. (wm y_i)))`
    pub fn from_l_form(factors: &[Word], tail: u32) -> Word {
        factors
            .iter()
            .rev()
            .fold(Word::leaf(tail), |acc, f| Word::pair(f.clone(), acc))
    }

    /// All subtrees, including `self`, in post-order.
    pub fn subwords(&self) -> Vec<&Word> {
        let mut out = Vec::new();
        fn go<'a>(w: &'a Word, out: &mut Vec<&'a Word>) {
            if let Some((l, r)) = w.split() {
                go(l, out);
                go(r, out);
            }
            out.push(w);
        }
        go(self, &mut out);
        out
    }

    /// Replaces every letter `i` by `sigma(i)`.
    pub fn relabel(&self, sigma: &impl Fn(u32) -> u32) -> Word {
        match &*self.0 {
            Node::Leaf(i) => Word::leaf(sigma(*i)),
            Node::Pair { left, right, .. } => Word::pair(left.relabel(sigma), right.relabel(sigma)),
        }
    }
}

/// The word order: shorter words are smaller; leaves compare by index; pairs
/// compare left factors, then right factors.
pub fn compare_words(u: &Word, v: &Word) -> Ordering {
    if Arc::ptr_eq(&u.0, &v.0) {
        return Ordering::Equal;
    }
    match u.len().cmp(&v.len()) {
        Ordering::Equal => {}
        o => return o,
    }
    match (&*u.0, &*v.0) {
        (Node::Leaf(a), Node::Leaf(b)) => a.cmp(b),
        (
            Node::Pair {
                left: ul,
                right: ur,
                ..
            },
            Node::Pair {
                left: vl,
                right: vr,
                ..
            },
        ) => compare_words(ul, vl).then_with(|| compare_words(ur, vr)),
        _ => unreachable!("equal lengths force equal shapes at the root"),
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_words(self, other)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Leaf(i) => write!(f, "y{i}"),
            Node::Pair { left, right, .. } => write!(f, "({left}*{right})"),
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// No subtree `r(st)` with `r < s`.
pub fn is_reduced(w: &Word) -> bool {
    match w.split() {
        None => true,
        Some((r, st)) => {
            if let Some((s, _)) = st.split() {
                if r < s {
                    return false;
                }
            }
            is_reduced(r) && is_reduced(st)
        }
    }
}

/// Each letter occurs at most once.
pub fn is_multilinear(w: &Word) -> bool {
    let letters = w.letters();
    let set: BTreeSet<u32> = letters.iter().copied().collect();
    set.len() == letters.len()
}

/// The last letter is strictly smaller than every other letter.
pub fn is_s_word(w: &Word) -> bool {
    let letters = w.letters();
    let (last, rest) = letters.split_last().unwrap();
    rest.iter().all(|l| l > last)
}

/// Every subword is an s-word.
pub fn is_special(w: &Word) -> bool {
    w.subwords().into_iter().all(is_s_word)
}

/// Multilinear, special and reduced.
pub fn is_in_w(w: &Word) -> bool {
    is_multilinear(w) && is_reduced(w) && is_special(w)
}

/// `w = w1 (w2 ( .. (wm y_i)))` with `w1 >= .. >= wm`, for reduced `w`.
pub fn l_form(w: &Word) -> Result<(Vec<Word>, u32)> {
    if !is_reduced(w) {
        return Err(Error::NotReduced(w.to_string()));
    }
    let mut factors = Vec::new();
    let mut cur = w;
    while let Some((l, r)) = cur.split() {
        factors.push(l.clone());
        cur = r;
    }
    debug_assert!(factors.windows(2).all(|p| p[0] >= p[1]));
    Ok((factors, cur.as_leaf().unwrap()))
}

fn add_into(terms: &mut BTreeMap<Word, Rational>, w: Word, c: &Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(w) {
        Entry::Vacant(e) => {
            e.insert(c.clone());
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// A finite rational combination of words, not necessarily reduced.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct WordCombination {
    terms: BTreeMap<Word, Rational>,
}

impl WordCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_word(w: Word) -> Self {
        let mut g = Self::zero();
        g.add_term(w, &Rational::one());
        g
    }

    pub fn add_term(&mut self, w: Word, c: &Rational) {
        add_into(&mut self.terms, w, c);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing word order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_default()
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
        if c.is_zero() {
            return Self::zero();
        }
        WordCombination {
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    /// Bilinear extension of `(u, v) -> uv`, without reduction.
    pub fn product(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(Word::pair(u.clone(), v.clone()), &(a * b));
            }
        }
        out
    }

    /// Sorted distinct generator indices.
    pub fn letters(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.terms.keys().flat_map(|w| w.letters()).collect();
        set.into_iter().collect()
    }

    pub fn is_reduced(&self) -> bool {
        self.terms.keys().all(is_reduced)
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(is_multilinear)
    }

    /// Leafwise relabeling, without reduction.
    pub fn relabel_raw(&self, sigma: &impl Fn(u32) -> u32) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.relabel(sigma), c);
        }
        out
    }

    /// Occurrence count of every letter, if all terms agree on it.
    pub fn multidegree(&self) -> Result<BTreeMap<u32, usize>> {
        let mut common: Option<BTreeMap<u32, usize>> = None;
        for w in self.terms.keys() {
            let mut deg = BTreeMap::new();
            for l in w.letters() {
                *deg.entry(l).or_insert(0) += 1;
            }
            match &common {
                None => common = Some(deg),
                Some(c) if *c != deg => return Err(Error::NotHomogeneous(self.to_string())),
                Some(_) => {}
            }
        }
        Ok(common.unwrap_or_default())
    }
}

impl fmt::Display for WordCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() {
                ("-", c.abs())
            } else {
                ("+", c.clone())
            };
            match (k, sign) {
                (0, "+") => write!(f, "{mag} {w}")?,
                (0, _) => write!(f, "-{mag} {w}")?,
                _ => write!(f, " {sign} {mag} {w}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WordCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A combination supported on reduced words: an element of the free algebra
/// in canonical form.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LsElement(WordCombination);

impl LsElement {
    pub fn into_inner(self) -> WordCombination {
        self.0
    }

    pub fn lowest_word(&self) -> Result<&Word> {
        lowest_word(&self.0)
    }
}

impl Deref for LsElement {
    type Target = WordCombination;
    fn deref(&self) -> &WordCombination {
        &self.0
    }
}

impl fmt::Display for LsElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for LsElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// The smallest word with nonzero coefficient.
pub fn lowest_word(g: &WordCombination) -> Result<&Word> {
    g.terms.keys().next().ok_or(Error::ZeroElement)
}

/// Which violating node to rewrite first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteStrategy {
    LeftmostInnermost,
    RightmostOutermost,
}

/// One rewrite step `u(v1 v2) -> v1(u v2) + (u v1) v2 - (v1 u) v2` at the node
/// picked by `strategy`; `None` if `w` is reduced.
pub fn rewrite_step(w: &Word, strategy: RewriteStrategy) -> Option<[(Word, i32); 3]> {
    let (u, rest) = w.split()?;
    let here = || {
        let (v1, v2) = rest.split()?;
        (u < v1).then(|| {
            [
                (Word::pair(v1.clone(), Word::pair(u.clone(), v2.clone())), 1),
                (Word::pair(Word::pair(u.clone(), v1.clone()), v2.clone()), 1),
                (
                    Word::pair(Word::pair(v1.clone(), u.clone()), v2.clone()),
                    -1,
                ),
            ]
        })
    };
    let in_left =
        || rewrite_step(u, strategy).map(|ts| ts.map(|(x, c)| (Word::pair(x, rest.clone()), c)));
    let in_right =
        || rewrite_step(rest, strategy).map(|ts| ts.map(|(x, c)| (Word::pair(u.clone(), x), c)));
    match strategy {
        RewriteStrategy::LeftmostInnermost => in_left().or_else(in_right).or_else(here),
        RewriteStrategy::RightmostOutermost => here().or_else(in_right).or_else(in_left),
    }
}

/// Normal form with the default strategy.
pub fn normal_form(g: &WordCombination) -> LsElement {
    normal_form_with(g, RewriteStrategy::LeftmostInnermost).0
}

/// Normal form and the number of rewrite steps taken.
///
/// Words are processed smallest first. Every rewrite produces strictly larger
/// words of the same multidegree, so each word is settled once all smaller
/// words are.
pub fn normal_form_with(g: &WordCombination, strategy: RewriteStrategy) -> (LsElement, usize) {
    let mut pending = g.terms.clone();
    let mut done = WordCombination::zero();
    let mut steps = 0;
    while let Some((w, c)) = pending.pop_first() {
        match rewrite_step(&w, strategy) {
            None => done.add_term(w, &c),
            Some(produced) => {
                steps += 1;
                for (x, sign) in produced {
                    assert!(x > w, "rewrite must increase words: {w} -> {x}");
                    add_into(&mut pending, x, &(&c * &Rational::from(sign)));
                }
            }
        }
    }
    (LsElement(done), steps)
}

/// `sigma` applied leafwise, then reduced.
pub fn relabel(g: &WordCombination, sigma: &impl Fn(u32) -> u32) -> LsElement {
    normal_form(&g.relabel_raw(sigma))
}

/// All reduced words whose letters are a permutation of `y1..yd`, in
/// increasing order.
pub fn enumerate_multilinear_reduced(d: usize) -> Vec<Word> {
    assert!((1..=20).contains(&d), "degree out of range");
    let mut memo: HashMap<u32, Vec<Word>> = HashMap::new();
    fn go(set: u32, memo: &mut HashMap<u32, Vec<Word>>) -> Vec<Word> {
        if let Some(v) = memo.get(&set) {
            return v.clone();
        }
        let out = if set.count_ones() == 1 {
            vec![Word::leaf(set.trailing_zeros() + 1)]
        } else {
            let mut out = Vec::new();
            // proper nonempty subsets for the left factor
            let mut a = (set - 1) & set;
            while a != 0 {
                let b = set & !a;
                let lefts = go(a, memo);
                let rights = go(b, memo);
                for l in &lefts {
                    for r in &rights {
                        let ok = match r.split() {
                            None => true,
                            Some((s, _)) => l >= s,
                        };
                        if ok {
                            out.push(Word::pair(l.clone(), r.clone()));
                        }
                    }
                }
                a = (a - 1) & set;
            }
            out.sort();
            out
        };
        memo.insert(set, out.clone());
        out
    }
    go((1u32 << d) - 1, &mut memo)
}

/// Multilinear special reduced words on `y1..yd`.
pub fn enumerate_w(d: usize) -> Vec<Word> {
    enumerate_multilinear_reduced(d)
        .into_iter()
        .filter(is_special)
        .collect()
}

/// Full linearization of a homogeneous element. Each letter of degree `k` is
/// replaced by `k` fresh letters summed over all ways of distributing them;
/// returns the result and, for every fresh letter, the letter it replaces.
pub fn multilinearize(g: &WordCombination) -> Result<(LsElement, BTreeMap<u32, u32>)> {
    let deg = g.multidegree()?;
    let mut fresh: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut origin = BTreeMap::new();
    let mut next = 1;
    for (&l, &k) in &deg {
        let ids: Vec<u32> = (next..next + k as u32).collect();
        for &i in &ids {
            origin.insert(i, l);
        }
        next += k as u32;
        fresh.insert(l, ids);
    }
    let mut out = WordCombination::zero();
    for (w, c) in g.terms() {
        // positions of each letter, then every bijection onto its fresh letters
        let letters = w.letters();
        let mut assignments: Vec<Vec<u32>> = vec![Vec::new()];
        let mut slots: Vec<u32> = Vec::new();
        for (&l, ids) in &fresh {
            let count = letters.iter().filter(|&&x| x == l).count();
            debug_assert_eq!(count, ids.len());
            let perms = permutations(ids);
            assignments = assignments
                .into_iter()
                .flat_map(|a| {
                    perms.iter().map(move |p| {
                        let mut a = a.clone();
                        a.extend_from_slice(p);
                        a
                    })
                })
                .collect();
            slots.push(l);
        }
        for a in assignments {
            // a lists fresh letters grouped by original letter in `slots` order
            let mut queues: BTreeMap<u32, VecDeque<u32>> = BTreeMap::new();
            let mut offset = 0;
            for &l in &slots {
                let k = fresh[&l].len();
                queues.insert(l, a[offset..offset + k].iter().copied().collect());
                offset += k;
            }
            out.add_term(replace_letters(w, &mut queues), c);
        }
    }
    Ok((normal_form(&out), origin))
}

fn replace_letters(w: &Word, queues: &mut BTreeMap<u32, VecDeque<u32>>) -> Word {
    match w.split() {
        None => Word::leaf(
            queues
                .get_mut(&w.as_leaf().unwrap())
                .unwrap()
                .pop_front()
                .unwrap(),
        ),
        Some((l, r)) => {
            let l = replace_letters(l, queues);
            Word::pair(l, replace_letters(r, queues))
        }
    }
}

fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// A target for evaluation: anything with a bilinear product.
pub trait LeftSymmetricAlgebra {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, c: &Rational) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Rejects values that do not belong to this algebra.
    fn check(&self, _a: &Self::Elem) -> Result<()> {
        Ok(())
    }
}

/// Evaluates a word, sharing work across repeated subwords.
pub fn evaluate_word<A: LeftSymmetricAlgebra>(
    w: &Word,
    alg: &A,
    assignment: &BTreeMap<u32, A::Elem>,
    cache: &mut HashMap<Word, A::Elem>,
) -> Result<A::Elem> {
    if let Some(v) = cache.get(w) {
        return Ok(v.clone());
    }
    let v = match w.split() {
        None => {
            let i = w.as_leaf().unwrap();
            assignment
                .get(&i)
                .cloned()
                .ok_or(Error::UnassignedGenerator(i))?
        }
        Some((l, r)) => {
            let a = evaluate_word(l, alg, assignment, cache)?;
            if alg.is_zero(&a) {
                // still make sure the right factor is assigned
                for i in r.letters() {
                    assignment.get(&i).ok_or(Error::UnassignedGenerator(i))?;
                }
                alg.zero()
            } else {
                let b = evaluate_word(r, alg, assignment, cache)?;
                alg.product(&a, &b)
            }
        }
    };
    cache.insert(w.clone(), v.clone());
    Ok(v)
}

/// The substitution homomorphism `y_i -> assignment[i]`.
pub fn evaluate<A: LeftSymmetricAlgebra>(
    g: &WordCombination,
    alg: &A,
    assignment: &BTreeMap<u32, A::Elem>,
) -> Result<A::Elem> {
    for v in assignment.values() {
        alg.check(v)?;
    }
    let mut cache = HashMap::new();
    let mut acc = alg.zero();
    for (w, c) in g.terms() {
        let v = evaluate_word(w, alg, assignment, &mut cache)?;
        acc = alg.add(&acc, &alg.scale(&v, c));
    }
    Ok(acc)
}

/// The free algebra itself, on unreduced combinations.
#[derive(Debug, Clone, Copy, Default)]
pub struct FreeLsa;

impl LeftSymmetricAlgebra for FreeLsa {
    type Elem = WordCombination;

    fn zero(&self) -> WordCombination {
        WordCombination::zero()
    }

    fn product(&self, a: &WordCombination, b: &WordCombination) -> WordCombination {
        a.product(b)
    }

    fn add(&self, a: &WordCombination, b: &WordCombination) -> WordCombination {
        a.add(b)
    }

    fn scale(&self, a: &WordCombination, c: &Rational) -> WordCombination {
        a.scale(c)
    }

    fn is_zero(&self, a: &WordCombination) -> bool {
        a.is_zero()
    }
}

/// `(a, b, c) - (b, a, c)` with `(x, y, z) = (xy)z - x(yz)`, on three letters.
pub fn associator_difference(a: u32, b: u32, c: u32) -> WordCombination {
    let y = Word::leaf;
    let mut g = WordCombination::zero();
    let one = Rational::one();
    let neg = -Rational::one();
    g.add_term(Word::pair(Word::pair(y(a), y(b)), y(c)), &one);
    g.add_term(Word::pair(y(a), Word::pair(y(b), y(c))), &neg);
    g.add_term(Word::pair(Word::pair(y(b), y(a)), y(c)), &neg);
    g.add_term(Word::pair(y(b), Word::pair(y(a), y(c))), &one);
    g
}

/// `(ab)c - (ac)b`
pub fn novikov_element(a: u32, b: u32, c: u32) -> WordCombination {
    let y = Word::leaf;
    let mut g = WordCombination::zero();
    g.add_term(Word::pair(Word::pair(y(a), y(b)), y(c)), &Rational::one());
    g.add_term(Word::pair(Word::pair(y(a), y(c)), y(b)), &-Rational::one());
    g
}
