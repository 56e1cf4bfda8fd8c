//! Skew-symmetric identities from the grading: the degree-ordered basis
//! `e_1, e_2, ..`, the partial sums `e(N)`, and alternating sums `S_N^w`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::freelsa::Word;
use crate::witt::{basis_of_l, dim_l, Derivation};

/// Walks the homogeneous basis of `L_n` by degree: `d1 .. dn`, then `L_0`,
/// and so on. Within a degree, monomials come in graded-lex order (higher
/// powers of earlier variables first), then by direction.
pub struct GradedBasisCursor {
    n: usize,
    degree: i64,
    block: Vec<Derivation>,
    pos: usize,
}

impl GradedBasisCursor {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one variable");
        GradedBasisCursor {
            n,
            degree: -1,
            block: basis_of_l(n, -1).unwrap(),
            pos: 0,
        }
    }
}

impl Iterator for GradedBasisCursor {
    type Item = (i64, Derivation);

    fn next(&mut self) -> Option<Self::Item> {
        if self.pos == self.block.len() {
            self.degree += 1;
            self.block = basis_of_l(self.n, self.degree).unwrap();
            self.pos = 0;
        }
        self.pos += 1;
        Some((self.degree, self.block[self.pos - 1].clone()))
    }
}

/// `|e_1| + .. + |e_N|`, from the block sizes `dim L_s = n C(n+s, n-1)`.
pub fn e_of_n(n: usize, big_n: u128) -> i128 {
    let mut left = big_n;
    let mut sum = 0i128;
    let mut s = -1i64;
    while left > 0 {
        let take = dim_l(n, s).min(left);
        sum += s as i128 * take as i128;
        left -= take;
        s += 1;
    }
    sum
}

/// Least `N` with `e(N) >= t`.
pub fn minimal_skew_n(n: usize, t: u64) -> u128 {
    assert!(n >= 1, "need at least one variable");
    let t = t as i128;
    // e(N) falls through L_{-1}, is flat on L_0 at -n, then rises by s per element of L_s
    let (mut big_n, mut sum, mut s) = (0u128, 0i128, -1i64);
    loop {
        let dim = dim_l(n, s);
        if s > 0 && sum + s as i128 * dim as i128 >= t {
            let k = (t - sum + s as i128 - 1) / s as i128;
            return big_n + k as u128;
        }
        big_n += dim;
        sum += s as i128 * dim as i128;
        s += 1;
    }
}

/// True when the degree count forces every multilinear polynomial skew in `N`
/// arguments, with `t` further arguments, to vanish on `L_n`.
pub fn prop2_applies(n: usize, big_n: u128, t: u64) -> bool {
    e_of_n(n, big_n) >= t as i128
}

/// A word with letters `1..=N` (the alternating block, each once) and
/// `N+1..=N+t` (the extra arguments, each once), laid out for evaluation.
struct Plan {
    /// letter at each leaf, in post-order
    leaf_letters: Vec<u32>,
    /// internal nodes in post-order: (left slot, right slot)
    nodes: Vec<(usize, usize)>,
    /// for each leaf position, the internal nodes completed right after it
    completes: Vec<Vec<usize>>,
}

impl Plan {
    fn new(w: &Word, big_n: usize, t: usize) -> Result<Plan> {
        let letters = w.letters();
        let mut sorted = letters.clone();
        sorted.sort_unstable();
        if sorted != (1..=(big_n + t) as u32).collect::<Vec<_>>() {
            return Err(Error::NotMultilinear(format!(
                "{w} must use y1..y{} once each",
                big_n + t
            )));
        }
        let mut plan = Plan {
            leaf_letters: Vec::new(),
            nodes: Vec::new(),
            completes: Vec::new(),
        };
        // slots 0..L are leaves, L.. are internal nodes
        fn go(w: &Word, plan: &mut Plan, leaves: usize) -> usize {
            match w.split() {
                None => {
                    plan.leaf_letters.push(w.as_leaf().unwrap());
                    plan.completes.push(Vec::new());
                    plan.leaf_letters.len() - 1
                }
                Some((l, r)) => {
                    let a = go(l, plan, leaves);
                    let b = go(r, plan, leaves);
                    plan.nodes.push((a, b));
                    let id = plan.nodes.len() - 1;
                    plan.completes.last_mut().unwrap().push(id);
                    leaves + id
                }
            }
        }
        go(w, &mut plan, letters.len());
        Ok(plan)
    }
}

/// `sum over sigma in S_N of sgn(sigma) w(a_sigma(1), .., a_sigma(N), extra)`.
///
/// Permutations are streamed depth first in leaf order. A subtree is multiplied
/// out as soon as its last leaf is placed, and the branch is dropped when that
/// value is zero. Equal arguments give zero at once.
pub fn skew_symmetrized_eval(
    w: &Word,
    args: &[Derivation],
    extra: &[Derivation],
) -> Result<Derivation> {
    let (n, zero) = check_args(args, extra)?;
    let plan = Plan::new(w, args.len(), extra.len())?;
    if has_repeat(args) {
        return Ok(zero);
    }
    if args.is_empty() {
        return evaluate_fixed(&plan, &[], extra, n);
    }
    // split on the argument at the first block leaf so the branches can run in parallel
    let first = plan
        .leaf_letters
        .iter()
        .position(|&l| (l as usize) <= args.len())
        .unwrap();
    let partials: Vec<Result<Derivation>> = (0..args.len())
        .into_par_iter()
        .map(|j| {
            let mut state = Dfs::new(&plan, args, extra, n);
            state.used[j] = true;
            state.fixed_first = Some((first, j));
            state.run(0)?;
            Ok(state.total)
        })
        .collect();
    partials
        .into_iter()
        .try_fold(zero, |acc, p| acc.checked_add(&p?))
}

fn check_args(args: &[Derivation], extra: &[Derivation]) -> Result<(usize, Derivation)> {
    let first = args
        .first()
        .or(extra.first())
        .ok_or(Error::Invalid("no arguments".into()))?;
    let n = first.n();
    for a in args.iter().chain(extra) {
        if a.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.n(),
            });
        }
    }
    Ok((n, Derivation::zero(n, first.is_laurent())))
}

fn has_repeat(args: &[Derivation]) -> bool {
    (0..args.len()).any(|i| (i + 1..args.len()).any(|j| args[i] == args[j]))
}

fn evaluate_fixed(
    plan: &Plan,
    args: &[Derivation],
    extra: &[Derivation],
    n: usize,
) -> Result<Derivation> {
    let mut dfs = Dfs::new(plan, args, extra, n);
    dfs.run(0)?;
    Ok(dfs.total)
}

struct Dfs<'a> {
    plan: &'a Plan,
    args: &'a [Derivation],
    extra: &'a [Derivation],
    used: Vec<bool>,
    /// argument index at each leaf (for block letters)
    chosen: Vec<usize>,
    slots: Vec<Option<Derivation>>,
    fixed_first: Option<(usize, usize)>,
    total: Derivation,
}

impl<'a> Dfs<'a> {
    fn new(plan: &'a Plan, args: &'a [Derivation], extra: &'a [Derivation], n: usize) -> Self {
        let laurent = args
            .first()
            .or(extra.first())
            .is_some_and(Derivation::is_laurent);
        Dfs {
            plan,
            args,
            extra,
            used: vec![false; args.len()],
            chosen: vec![usize::MAX; plan.leaf_letters.len()],
            slots: vec![None; plan.leaf_letters.len() + plan.nodes.len()],
            fixed_first: None,
            total: Derivation::zero(n, laurent),
        }
    }

    fn run(&mut self, leaf: usize) -> Result<()> {
        let plan = self.plan;
        if leaf == plan.leaf_letters.len() {
            let root = self.slots.last().unwrap().as_ref().unwrap();
            let term = if self.sign_is_negative() {
                root.scale(&-crate::rational::Rational::one())
            } else {
                root.clone()
            };
            self.total = self.total.checked_add(&term)?;
            return Ok(());
        }
        let letter = plan.leaf_letters[leaf] as usize;
        if letter > self.args.len() {
            self.slots[leaf] = Some(self.extra[letter - self.args.len() - 1].clone());
            return self.descend(leaf);
        }
        let choices: Vec<usize> = match self.fixed_first {
            Some((l, j)) if l == leaf => vec![j],
            _ => (0..self.args.len()).filter(|&j| !self.used[j]).collect(),
        };
        for j in choices {
            self.used[j] = true;
            self.chosen[leaf] = j;
            self.slots[leaf] = Some(self.args[j].clone());
            self.descend(leaf)?;
            self.used[j] = false;
        }
        if let Some((l, j)) = self.fixed_first {
            if l == leaf {
                self.used[j] = true;
            }
        }
        Ok(())
    }

    /// Multiplies out the nodes finished by this leaf, then recurses.
    fn descend(&mut self, leaf: usize) -> Result<()> {
        let base = self.plan.leaf_letters.len();
        for &id in &self.plan.completes[leaf] {
            let (a, b) = self.plan.nodes[id];
            let v = self.slots[a]
                .as_ref()
                .unwrap()
                .ls_mul(self.slots[b].as_ref().unwrap())?;
            if v.is_zero() {
                return Ok(());
            }
            self.slots[base + id] = Some(v);
        }
        self.run(leaf + 1)
    }

    /// Parity of the permutation letter -> argument over the block letters.
    fn sign_is_negative(&self) -> bool {
        let mut by_letter = vec![0usize; self.args.len()];
        for (leaf, &l) in self.plan.leaf_letters.iter().enumerate() {
            if (l as usize) <= self.args.len() {
                by_letter[l as usize - 1] = self.chosen[leaf];
            }
        }
        permutation_is_odd(&by_letter)
    }
}

fn permutation_is_odd(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut odd = false;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        odd ^= len % 2 == 0;
    }
    odd
}

/// The same alternating sum by dynamic programming over argument subsets: a
/// subtree with `k` block letters gets, for every `k`-subset of the arguments,
/// its own alternating sum over bijections onto that subset.
pub fn skew_symmetrized_eval_by_subsets(
    w: &Word,
    args: &[Derivation],
    extra: &[Derivation],
) -> Result<Derivation> {
    let (_, zero) = check_args(args, extra)?;
    Plan::new(w, args.len(), extra.len())?;
    if args.len() > 20 {
        return Err(Error::Invalid(
            "too many arguments for the subset table".into(),
        ));
    }
    let big_n = args.len();
    // returns (bitmask of block letters, table subset -> value)
    fn go(
        w: &Word,
        args: &[Derivation],
        extra: &[Derivation],
        zero: &Derivation,
    ) -> Result<(u32, HashMap<u32, Derivation>)> {
        let big_n = args.len();
        match w.split() {
            None => {
                let l = w.as_leaf().unwrap() as usize;
                if l > big_n {
                    return Ok((0, HashMap::from([(0, extra[l - big_n - 1].clone())])));
                }
                let table = (0..big_n).map(|j| (1u32 << j, args[j].clone())).collect();
                Ok((1 << (l - 1), table))
            }
            Some((l, r)) => {
                let (la, lt) = go(l, args, extra, zero)?;
                let (ra, rt) = go(r, args, extra, zero)?;
                let letter_sign = crossing_parity(la, ra);
                let mut out: HashMap<u32, Derivation> = HashMap::new();
                for (&s1, v1) in &lt {
                    for (&s2, v2) in &rt {
                        if s1 & s2 != 0 {
                            continue;
                        }
                        let mut v = v1.ls_mul(v2)?;
                        if v.is_zero() {
                            continue;
                        }
                        if letter_sign ^ crossing_parity(s1, s2) {
                            v = v.scale(&-crate::rational::Rational::one());
                        }
                        let slot = out.entry(s1 | s2).or_insert_with(|| zero.clone());
                        *slot = slot.checked_add(&v)?;
                    }
                }
                Ok((la | ra, out))
            }
        }
    }
    let (_, table) = go(w, args, extra, &zero)?;
    let full = if big_n == 0 {
        0
    } else {
        u32::MAX >> (32 - big_n)
    };
    Ok(table.get(&full).cloned().unwrap_or(zero))
}

/// Parity of the pairs `(a, b)` with `a` in `x`, `b` in `y` and `a > b`.
fn crossing_parity(x: u32, y: u32) -> bool {
    let mut count = 0;
    for b in 0..32 {
        if y >> b & 1 == 1 {
            count += (x >> (b + 1)).count_ones();
        }
    }
    count % 2 == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_derivation, parse_word};
    use crate::rational::Rational;
    use crate::witt::basis_up_to;
    use crate::witt::Class;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn d(s: &str, n: usize) -> Derivation {
        parse_derivation(s, n, false).unwrap()
    }

    #[test]
    fn cursor_order() {
        let first: Vec<(i64, String)> = GradedBasisCursor::new(2)
            .take(8)
            .map(|(s, e)| (s, e.to_string()))
            .collect();
        let expected = [
            (-1, "d1"),
            (-1, "d2"),
            (0, "x1 d1"),
            (0, "x1 d2"),
            (0, "x2 d1"),
            (0, "x2 d2"),
            (1, "x1^2 d1"),
            (1, "x1^2 d2"),
        ];
        assert_eq!(first, expected.map(|(s, e)| (s, e.to_string())));
        // block sizes agree with the dimension formula
        for n in 1..=3 {
            let mut counts: HashMap<i64, u128> = HashMap::new();
            for (s, e) in GradedBasisCursor::new(n).take(200) {
                assert_eq!(e.homogeneous_degree(), Some(s));
                *counts.entry(s).or_default() += 1;
            }
            let top = *counts.keys().max().unwrap();
            for s in -1..top {
                assert_eq!(counts[&s], dim_l(n, s), "n={n} s={s}");
            }
        }
    }

    #[test]
    fn partial_sums() {
        assert_eq!([1, 2, 3].map(|k| e_of_n(1, k)), [-1, -1, 0]);
        assert_eq!(e_of_n(2, 8), 0);
        assert_eq!(e_of_n(2, 7), -1);
        // against the cursor
        for n in 1..=3 {
            let mut sum = 0i128;
            for (k, (s, _)) in GradedBasisCursor::new(n).take(60).enumerate() {
                sum += s as i128;
                assert_eq!(e_of_n(n, k as u128 + 1), sum);
            }
        }
    }

    #[test]
    fn minimal_n() {
        for n in 1..=6 {
            assert_eq!(minimal_skew_n(n, 0), (n * n + 2 * n) as u128);
        }
        // brute force for positive thresholds
        for n in 1..=3 {
            for t in 0..12u64 {
                let brute = (1u128..).find(|&k| e_of_n(n, k) >= t as i128).unwrap();
                assert_eq!(minimal_skew_n(n, t), brute, "n={n} t={t}");
            }
        }
        assert!(prop2_applies(1, 3, 0));
        assert!(!prop2_applies(2, 7, 0));
        assert!(prop2_applies(2, 8, 0));
    }

    #[test]
    fn two_letters() {
        let (a, b) = (d("x1^2 d1", 1), d("d1", 1));
        let got = skew_symmetrized_eval(
            &parse_word("(y1*y2)").unwrap(),
            &[a.clone(), b.clone()],
            &[],
        )
        .unwrap();
        assert_eq!(
            got,
            a.ls_mul(&b)
                .unwrap()
                .checked_sub(&b.ls_mul(&a).unwrap())
                .unwrap()
        );
        assert_eq!(got.to_string(), "-2 x1 d1");
        let same = skew_symmetrized_eval(
            &parse_word("(y1*y2)").unwrap(),
            &[a.clone(), a.clone()],
            &[],
        )
        .unwrap();
        assert!(same.is_zero());
    }

    #[test]
    fn three_letters_in_one_variable() {
        let args = [d("d1", 1), d("x1 d1", 1), d("x1^2 d1", 1)];
        let w = parse_word("((y1*y2)*y3)").unwrap();
        assert!(skew_symmetrized_eval(&w, &args, &[]).unwrap().is_zero());
        // by hand: the six signed terms
        let mut by_hand = Derivation::zero(1, false);
        let perms: [([usize; 3], i64); 6] = [
            ([0, 1, 2], 1),
            ([0, 2, 1], -1),
            ([1, 0, 2], -1),
            ([1, 2, 0], 1),
            ([2, 0, 1], 1),
            ([2, 1, 0], -1),
        ];
        for (p, s) in perms {
            let v = args[p[0]]
                .ls_mul(&args[p[1]])
                .unwrap()
                .ls_mul(&args[p[2]])
                .unwrap();
            by_hand = by_hand
                .checked_add(&v.scale(&Rational::from_int(s)))
                .unwrap();
        }
        assert!(by_hand.is_zero());
    }

    #[test]
    fn exhaustive_in_one_variable() {
        let basis = basis_up_to(1, 3, Class::Full);
        for shape in ["((y1*y2)*y3)", "(y1*(y2*y3))"] {
            let w = parse_word(shape).unwrap();
            for i in 0..basis.len() {
                for j in i + 1..basis.len() {
                    for k in j + 1..basis.len() {
                        let args = [basis[i].clone(), basis[j].clone(), basis[k].clone()];
                        assert!(skew_symmetrized_eval(&w, &args, &[]).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn below_the_threshold_it_fails() {
        // two arguments in one variable: e(2) = -1 and the commutator survives
        let w = parse_word("(y1*y2)").unwrap();
        assert!(
            !skew_symmetrized_eval(&w, &[d("d1", 1), d("x1 d1", 1)], &[])
                .unwrap()
                .is_zero()
        );
        // with one extra argument the threshold moves up
        assert_eq!(minimal_skew_n(1, 1), 4);
        assert!(!prop2_applies(1, 3, 1));
    }

    #[test]
    fn streaming_and_subsets_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let basis = basis_up_to(2, 2, Class::Full);
        for shape in [
            "((y1*y2)*(y3*y4))",
            "(y4*((y1*y3)*y2))",
            "(((y2*y1)*y5)*(y3*y4))",
            "(y1*(y2*(y3*y4)))",
        ] {
            let w = parse_word(shape).unwrap();
            let t = w.len() - 4;
            for _ in 0..15 {
                let picked: Vec<Derivation> =
                    basis.choose_multiple(&mut rng, 4 + t).cloned().collect();
                let (args, extra) = picked.split_at(4);
                let a = skew_symmetrized_eval(&w, args, extra).unwrap();
                let b = skew_symmetrized_eval_by_subsets(&w, args, extra).unwrap();
                assert_eq!(a, b, "{shape}");
            }
        }
    }

    #[test]
    fn swapping_two_arguments_negates() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let basis = basis_up_to(2, 2, Class::Full);
        let w = parse_word("((y1*y2)*(y3*y4))").unwrap();
        let mut nonzero = 0;
        for _ in 0..20 {
            let mut args: Vec<Derivation> = basis.choose_multiple(&mut rng, 4).cloned().collect();
            let before = skew_symmetrized_eval(&w, &args, &[]).unwrap();
            args.swap(0, 3);
            let after = skew_symmetrized_eval(&w, &args, &[]).unwrap();
            assert_eq!(after, before.scale(&-Rational::one()));
            nonzero += usize::from(!before.is_zero());
        }
        assert!(nonzero > 0);
    }

    #[test]
    fn malformed_words_rejected() {
        let args = [d("d1", 1), d("x1 d1", 1)];
        assert!(matches!(
            skew_symmetrized_eval(&parse_word("(y1*y1)").unwrap(), &args, &[]),
            Err(Error::NotMultilinear(_))
        ));
        assert!(matches!(
            skew_symmetrized_eval(&parse_word("(y1*y3)").unwrap(), &args, &[]),
            Err(Error::NotMultilinear(_))
        ));
    }

    #[test]
    fn parity() {
        assert!(!permutation_is_odd(&[0, 1, 2]));
        assert!(permutation_is_odd(&[1, 0, 2]));
        assert!(!permutation_is_odd(&[1, 2, 0]));
        assert!(crossing_parity(0b010, 0b001));
        assert!(!crossing_parity(0b001, 0b010));
    }
}
