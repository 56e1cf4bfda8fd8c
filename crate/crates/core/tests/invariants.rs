//! Structural invariants exercised through the public API on random inputs.

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lswitt::freelsa::{evaluate, normal_form, normal_form_with, RewriteStrategy};
use lswitt::parse::{parse_derivation, parse_element, parse_word};
use lswitt::skew::{skew_symmetrized_eval, skew_symmetrized_eval_by_subsets};
use lswitt::witt::{basis_of_l, dim_l, random_derivation, WittAlgebra};
use lswitt::{Class, Derivation, Rational, Word, WordCombination};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_word(rng: &mut impl Rng, len: usize, letters: u32) -> Word {
    if len == 1 {
        return Word::leaf(rng.gen_range(1..=letters));
    }
    let k = rng.gen_range(1..len);
    Word::pair(
        random_word(rng, k, letters),
        random_word(rng, len - k, letters),
    )
}

fn random_element(rng: &mut impl Rng, max_len: usize) -> WordCombination {
    let mut g = WordCombination::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let len = rng.gen_range(1..=max_len);
        g.add_term(
            random_word(rng, len, 3),
            &Rational::from_int(rng.gen_range(-3..=3)),
        );
    }
    g
}

fn class_strategy() -> impl Strategy<Value = Class> {
    prop_oneof![
        Just(Class::Full),
        Just(Class::Triangular),
        Just(Class::StronglyTriangular)
    ]
}

fn assoc(a: &Derivation, b: &Derivation, c: &Derivation) -> Derivation {
    let ab_c = a.ls_mul(b).unwrap().ls_mul(c).unwrap();
    let a_bc = a.ls_mul(&b.ls_mul(c).unwrap()).unwrap();
    ab_c.checked_sub(&a_bc).unwrap()
}

#[test]
fn basis_sizes_match_dimension_formula() {
    for n in 1..=4 {
        for s in -1..=3 {
            assert_eq!(
                basis_of_l(n, s).unwrap().len() as u128,
                dim_l(n, s),
                "n = {n}, s = {s}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn left_symmetric_identity(seed in any::<u64>(), n in 1usize..=3, cls in class_strategy()) {
        let mut r = rng(seed);
        let [a, b, c] = [(); 3].map(|_| random_derivation(&mut r, n, 2, cls, 3));
        prop_assert_eq!(assoc(&a, &b, &c), assoc(&b, &a, &c));
    }

    #[test]
    fn commutator_satisfies_jacobi(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let [a, b, c] = [(); 3].map(|_| random_derivation(&mut r, n, 2, Class::Full, 3));
        let j = a.commutator(&b.commutator(&c).unwrap()).unwrap()
            .checked_add(&b.commutator(&c.commutator(&a).unwrap()).unwrap()).unwrap()
            .checked_add(&c.commutator(&a.commutator(&b).unwrap()).unwrap()).unwrap();
        prop_assert!(j.is_zero());
    }

    #[test]
    fn product_respects_grading(n in 1usize..=3, s in -1i64..=2, t in -1i64..=2, i in 0usize..64, j in 0usize..64) {
        let bs = basis_of_l(n, s).unwrap();
        let bt = basis_of_l(n, t).unwrap();
        let p = bs[i % bs.len()].ls_mul(&bt[j % bt.len()]).unwrap();
        prop_assert!(p.is_zero() || p.homogeneous_degree() == Some(s + t));
    }

    #[test]
    fn classes_are_subalgebras(seed in any::<u64>(), n in 1usize..=3, cls in class_strategy()) {
        let mut r = rng(seed);
        let a = random_derivation(&mut r, n, 2, cls, 3);
        let b = random_derivation(&mut r, n, 2, cls, 3);
        let p = a.ls_mul(&b).unwrap();
        prop_assert!(p.membership() >= cls);
        prop_assert_eq!(p.membership(), p.membership_by_jacobian());
    }

    #[test]
    fn derivations_print_and_parse_back(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        let d = random_derivation(&mut r, n, 3, Class::Full, 4)
            .scale(&Rational::new(r.gen_range(-5..=5), r.gen_range(1..=4)));
        prop_assert_eq!(parse_derivation(&d.to_string(), n, false).unwrap(), d);
    }

    #[test]
    fn words_and_elements_print_and_parse_back(seed in any::<u64>()) {
        let mut r = rng(seed);
        let w = random_word(&mut r, 6, 4);
        prop_assert_eq!(parse_word(&w.to_string()).unwrap(), w);
        let g = random_element(&mut r, 5);
        prop_assert_eq!(parse_element(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn normal_form_is_canonical(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_element(&mut r, 6);
        let (a, _) = normal_form_with(&g, RewriteStrategy::LeftmostInnermost);
        let (b, _) = normal_form_with(&g, RewriteStrategy::RightmostOutermost);
        prop_assert_eq!(&*a, &*b);
        prop_assert!(a.is_reduced());
        prop_assert_eq!(&*normal_form(&a), &*a);
    }

    #[test]
    fn normal_form_preserves_values(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_element(&mut r, 5);
        let asg: BTreeMap<u32, Derivation> =
            (1..=3).map(|i| (i, random_derivation(&mut r, 2, 1, Class::Full, 3))).collect();
        let alg = WittAlgebra::new(2);
        prop_assert_eq!(evaluate(&g, &alg, &asg).unwrap(), evaluate(&normal_form(&g), &alg, &asg).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn skew_sum_agrees_with_subset_sum(seed in any::<u64>(), len in 2usize..=5, t in 0usize..=1) {
        let mut r = rng(seed);
        let letters: Vec<u32> = (1..=(len + t) as u32).collect();
        let mut shuffled = letters.clone();
        rand::seq::SliceRandom::shuffle(&mut shuffled[..], &mut r);
        let w = random_shape(&mut r, &shuffled);
        let args: Vec<Derivation> = (0..len).map(|_| random_derivation(&mut r, 2, 1, Class::Full, 2)).collect();
        let extra: Vec<Derivation> = (0..t).map(|_| random_derivation(&mut r, 2, 1, Class::Full, 2)).collect();
        prop_assert_eq!(
            skew_symmetrized_eval(&w, &args, &extra).unwrap(),
            skew_symmetrized_eval_by_subsets(&w, &args, &extra).unwrap()
        );
    }
}

/// A random bracketing of the given letters, in the given order.
fn random_shape(rng: &mut impl Rng, letters: &[u32]) -> Word {
    if letters.len() == 1 {
        return Word::leaf(letters[0]);
    }
    let k = rng.gen_range(1..letters.len());
    Word::pair(
        random_shape(rng, &letters[..k]),
        random_shape(rng, &letters[k..]),
    )
}
