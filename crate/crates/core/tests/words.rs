mod common;

use common::*;
use ctest_core::{Rank, Word};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

/// Smallest `r` with `core = r^e`, by trying every divisor of the length.
fn brute_root(core: &[i32]) -> (Vec<i32>, u64) {
    let n = core.len();
    for d in 1..=n {
        if n % d == 0 && (0..n).all(|i| core[i] == core[i % d]) {
            return (core[..d].to_vec(), (n / d) as u64);
        }
    }
    unreachable!()
}

/// Split `w = g c g^-1` by peeling inverse end letters.
fn brute_cyclic(w: &[i32]) -> (Vec<i32>, Vec<i32>) {
    let mut k = 0;
    while 2 * k + 1 < w.len() && w[k] == -w[w.len() - 1 - k] {
        k += 1;
    }
    (w[k..w.len() - k].to_vec(), w[..k].to_vec())
}

#[test]
fn primitive_root_matches_brute_force_up_to_length_12() {
    for w in all_reduced_upto(2, 12).into_iter().skip(1) {
        let word = from_ints(&w);
        let (core, g) = brute_cyclic(&w);
        let (root, e) = brute_root(&core);
        let mut expected = g.clone();
        expected.extend(&root);
        expected.extend(naive_inv(&g));
        let (r, k) = word.primitive_root().unwrap();
        assert_eq!(to_ints(&r), naive_reduce(expected), "{word}");
        assert_eq!(k, e, "{word}");
        assert_eq!(word.is_proper_power(), e > 1);
        assert_eq!(r.power(k as i64), word);
    }
}

#[test]
fn commutators_of_random_noncommuting_pairs_are_not_proper_powers() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 1000 {
        let a: Vec<i32> = (0..rng.gen_range(1..=10)).map(|_| rng.gen_range(1..=3) * if rng.gen() { 1 } else { -1 }).collect();
        let b: Vec<i32> = (0..rng.gen_range(1..=10)).map(|_| rng.gen_range(1..=3) * if rng.gen() { 1 } else { -1 }).collect();
        let (a, b) = (from_ints(&a), from_ints(&b));
        let c = Word::commutator(&a, &b);
        if c.is_empty() {
            continue;
        }
        assert!(!c.is_proper_power(), "[{a}, {b}]");
        checked += 1;
    }
}

#[test]
fn parse_rejects_bad_input() {
    let r = Rank::new(2).unwrap();
    for bad in ["", "x", "x0", "x3", "x1^0", "y1", "x1^", "1 x1", "x1^-"] {
        assert!(Word::parse(bad, r).is_err(), "{bad:?}");
    }
    assert_eq!(Word::parse("1", r).unwrap(), Word::empty());
    assert_eq!(Word::parse("  x1^2   x2^-1 ", r).unwrap().len(), 3);
}

proptest! {
    #[test]
    fn reduction_matches_stack_oracle(raw in raw_letters(3, 40)) {
        let w = from_ints(&raw);
        prop_assert_eq!(to_ints(&w), naive_reduce(raw.iter().copied()));
        for pair in w.letters().windows(2) {
            prop_assert!(!pair[0].is_inverse_of(pair[1]));
        }
    }

    #[test]
    fn group_laws(a in word(3, 20), b in word(3, 20), c in word(3, 20)) {
        prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        prop_assert!(a.concat(&a.inverse()).is_empty());
        prop_assert_eq!(a.concat(&b).inverse(), b.inverse().concat(&a.inverse()));
        prop_assert_eq!(a.inverse().inverse(), a.clone());
    }

    #[test]
    fn power_matches_repeated_concat(a in word(3, 12), k in -9i64..=9) {
        prop_assert_eq!(to_ints(&a.power(k)), naive_pow(&to_ints(&a), k));
        prop_assert_eq!(a.power(k).inverse(), a.power(-k));
    }

    #[test]
    fn cyclic_reduce_decomposes(a in word(3, 30)) {
        let (core, g) = a.cyclic_reduce();
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(g.concat(&core).concat(&g.inverse()), a.clone());
        prop_assert_eq!(core.len() + 2 * g.len(), a.len());
        prop_assert_eq!(a.cyclic_cancellation(), g.len());
    }

    #[test]
    fn root_of_power(a in word(2, 10), k in 1i64..=6) {
        prop_assume!(!a.is_empty());
        let (r, e) = a.primitive_root().unwrap();
        let (r2, e2) = a.power(k).primitive_root().unwrap();
        prop_assert_eq!(r2, r);
        prop_assert_eq!(e2, e * k as u64);
    }

    #[test]
    fn display_round_trips(a in word(4, 25)) {
        let r = Rank::new(4).unwrap();
        prop_assert_eq!(Word::parse(&a.to_string(), r).unwrap(), a);
    }
}
