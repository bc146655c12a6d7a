//! Random reduced words and tuples by uniform non-backtracking walks.

use ctest_core::endo::Endo;
use ctest_core::group::is_cyclic_tuple;
use ctest_core::{Letter, Rank, Word};
use rand::Rng;

/// Uniform reduced word of exactly `len` letters.
pub fn word<R: Rng>(rng: &mut R, rank: Rank, len: usize) -> Word {
    let m = rank.get();
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::new(rng.gen_range(1..=m), rng.gen());
        if letters.last().map_or(true, |p| !p.is_inverse_of(l)) {
            letters.push(l);
        }
    }
    Word::reduce(letters)
}

/// Reduced word with length uniform in `lo..=hi`.
pub fn word_between<R: Rng>(rng: &mut R, rank: Rank, lo: usize, hi: usize) -> Word {
    let len = rng.gen_range(lo..=hi);
    word(rng, rank, len)
}

/// `n` entries of length `0..=max_len` generating a non-cyclic subgroup.
pub fn noncyclic_tuple<R: Rng>(rng: &mut R, rank: Rank, n: usize, max_len: usize) -> Vec<Word> {
    assert!(n >= 2 && max_len >= 1);
    loop {
        let t: Vec<Word> = (0..n).map(|_| word_between(rng, rank, 0, max_len)).collect();
        if is_cyclic_tuple(&t).is_none() {
            return t;
        }
    }
}

/// Non-cyclic tuple with all entries non-empty.
pub fn noncyclic_nonempty<R: Rng>(rng: &mut R, rank: Rank, n: usize, max_len: usize) -> Vec<Word> {
    loop {
        let t: Vec<Word> = (0..n).map(|_| word_between(rng, rank, 1, max_len)).collect();
        if is_cyclic_tuple(&t).is_none() {
            return t;
        }
    }
}

/// Powers `W^e` of one random non-empty `W`, exponents in `-3..=3` (zero gives an empty entry).
pub fn cyclic_tuple<R: Rng>(rng: &mut R, rank: Rank, n: usize, max_base: usize) -> (Word, Vec<i64>, Vec<Word>) {
    let base = word_between(rng, rank, 1, max_base);
    let exps: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
    let words = exps.iter().map(|&e| base.power(e)).collect();
    (base, exps, words)
}

/// Endomorphism with non-empty images of length at most `max_len` and non-cyclic image.
pub fn noncyclic_endo<R: Rng>(rng: &mut R, rank: Rank, max_len: usize) -> Endo {
    let images = noncyclic_nonempty(rng, rank, rank.get() as usize, max_len);
    Endo::new(images).expect("images fit the rank")
}
