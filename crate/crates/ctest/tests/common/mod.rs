#![allow(dead_code)]

use ctest_core::{Letter, Word};
use rand::Rng;

/// Free reduction on signed integers, independent of `Word::reduce`.
pub fn naive_reduce(v: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(v.len());
    for &x in v {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn naive_inv(v: &[i32]) -> Vec<i32> {
    v.iter().rev().map(|x| -x).collect()
}

pub fn naive_pow(v: &[i32], k: i64) -> Vec<i32> {
    let base = if k < 0 { naive_inv(v) } else { v.to_vec() };
    let mut out = Vec::new();
    for _ in 0..k.unsigned_abs() {
        out.extend_from_slice(&base);
    }
    naive_reduce(&out)
}

pub fn naive_cat(parts: &[&[i32]]) -> Vec<i32> {
    naive_reduce(&parts.concat())
}

pub fn naive_comm(a: &[i32], b: &[i32]) -> Vec<i32> {
    naive_cat(&[a, b, &naive_inv(a), &naive_inv(b)])
}

/// Length after stripping matching ends of a reduced word.
pub fn naive_cyclic_len(v: &[i32]) -> usize {
    let v = naive_reduce(v);
    let (mut i, mut j) = (0, v.len());
    while j - i >= 2 && v[i] == -v[j - 1] {
        i += 1;
        j -= 1;
    }
    j - i
}

pub fn to_ints(w: &Word) -> Vec<i32> {
    w.letters().iter().map(|l| l.sign() * l.generator() as i32).collect()
}

pub fn from_ints(v: &[i32]) -> Word {
    Word::reduce(v.iter().map(|&x| Letter::new(x.unsigned_abs(), x > 0)))
}

pub fn random_raw<R: Rng>(rng: &mut R, m: i32, len: usize) -> Vec<i32> {
    (0..len)
        .map(|_| {
            let g = rng.gen_range(1..=m);
            if rng.gen() {
                g
            } else {
                -g
            }
        })
        .collect()
}

/// All reduced words over `m` generators of length at most `n`.
pub fn all_reduced_upto(m: i32, n: usize) -> Vec<Vec<i32>> {
    let mut all = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for g in (1..=m).flat_map(|g| [g, -g]) {
                if w.last() != Some(&-g) {
                    let mut v: Vec<i32> = w.clone();
                    v.push(g);
                    next.push(v);
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}
