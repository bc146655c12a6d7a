#![allow(dead_code)]

use ctest_core::{Letter, Word};
use proptest::prelude::*;

/// Letters as signed generator indices, reduced with a plain stack.
pub fn naive_reduce(letters: impl IntoIterator<Item = i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn naive_inv(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|l| -l).collect()
}

pub fn naive_pow(w: &[i32], k: i64) -> Vec<i32> {
    let base = if k < 0 { naive_inv(w) } else { w.to_vec() };
    naive_reduce((0..k.unsigned_abs()).flat_map(|_| base.iter().copied()))
}

pub fn to_ints(w: &Word) -> Vec<i32> {
    w.letters().iter().map(|l| l.sign() * l.generator() as i32).collect()
}

pub fn from_ints(v: &[i32]) -> Word {
    Word::reduce(v.iter().map(|&l| Letter::new(l.unsigned_abs(), l > 0)))
}

/// Every reduced word over `m` generators of length exactly `len`.
pub fn all_reduced(m: i32, len: usize) -> Vec<Vec<i32>> {
    let letters: Vec<i32> = (1..=m).flat_map(|g| [g, -g]).collect();
    let mut level: Vec<Vec<i32>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &level {
            for &l in &letters {
                if w.last() != Some(&-l) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        level = next;
    }
    level
}

pub fn all_reduced_upto(m: i32, len: usize) -> Vec<Vec<i32>> {
    (0..=len).flat_map(|l| all_reduced(m, l)).collect()
}

/// Raw (possibly unreduced) letter sequences over `m` generators.
pub fn raw_letters(m: u32, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec((1..=m as i32, any::<bool>()).prop_map(|(g, s)| if s { g } else { -g }), 0..=max_len)
}

pub fn word(m: u32, max_len: usize) -> impl Strategy<Value = Word> {
    raw_letters(m, max_len).prop_map(|v| from_ints(&v))
}
