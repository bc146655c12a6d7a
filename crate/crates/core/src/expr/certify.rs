//! Exact equality of compressed words.
//!
//! `x[i..i + len] == y[j..j + len]` is decided by splitting the longer node into
//! its children. A window over `base^k` is one period of `base` plus the claim
//! that the other side repeats with period `|base|`, which is again a window
//! comparison (of that side against itself, shifted). Results are memoized on
//! node identities and local offsets, so repeated sub-structures are compared once.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::min;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{Expr, Kind};

type Key = (usize, bool, BigUint, usize, bool, BigUint, BigUint);

pub(super) struct OutOfSteps;

pub(super) struct Certifier {
    memo: BTreeMap<Key, bool>,
    steps: u64,
    budget: u64,
}

impl Certifier {
    pub(super) fn new(budget: u64) -> Self {
        Certifier { memo: BTreeMap::new(), steps: 0, budget }
    }

    /// Does `x[i..i + len]` equal `y[j..j + len]`? Both windows must lie inside.
    pub(super) fn eq(&mut self, x: &Expr, i: &BigUint, y: &Expr, j: &BigUint, len: &BigUint) -> Result<bool, OutOfSteps> {
        if len.is_zero() {
            return Ok(true);
        }
        if x.same_as(y) {
            if i == j {
                return Ok(true);
            }
            // two windows of one power node, a whole number of periods apart
            if let Kind::Pow(base, _) = &x.node.kind {
                let shift = if i > j { i - j } else { j - i };
                if (shift % base.len()).is_zero() {
                    return Ok(true);
                }
            }
        }
        let (x, i, y, j) = if x.len() >= y.len() { (x, i, y, j) } else { (y, j, x, i) };
        if x.inverted {
            // x^-1[i..i+l] = y[j..j+l]  iff  x[n-i-l..n-i] = y^-1[m-j-l..m-j]
            let i2 = x.len() - i - len;
            let j2 = y.len() - j - len;
            return self.forward(&x.inv(), &i2, &y.inv(), &j2, len);
        }
        self.forward(x, i, y, j, len)
    }

    /// `eq` with `x` not inverted and at least as long as `y`.
    fn forward(&mut self, x: &Expr, i: &BigUint, y: &Expr, j: &BigUint, len: &BigUint) -> Result<bool, OutOfSteps> {
        let key = (x.node_id(), false, i.clone(), y.node_id(), y.inverted, j.clone(), len.clone());
        if let Some(&known) = self.memo.get(&key) {
            return Ok(known);
        }
        self.steps += 1;
        if self.steps > self.budget {
            return Err(OutOfSteps);
        }
        let result = match &x.node.kind {
            Kind::Lit(w) => {
                let (i, l) = (i.to_usize().unwrap(), len.to_usize().unwrap());
                let ys: Vec<_> = y.letters().skip(j.to_usize().unwrap()).take(l).collect();
                w.letters()[i..i + l] == ys[..]
            }
            Kind::Cat(children) => {
                let offsets = &x.node.cat.as_ref().expect("cat index").offsets;
                let mut k = offsets.partition_point(|o| o <= i) - 1;
                let (mut at_x, mut at_y, mut left) = (i.clone(), j.clone(), len.clone());
                let mut ok = true;
                while ok && !left.is_zero() {
                    let local = &at_x - &offsets[k];
                    let piece = min(left.clone(), children[k].len() - &local);
                    ok = self.eq(&children[k], &local, y, &at_y, &piece)?;
                    at_x += &piece;
                    at_y += &piece;
                    left -= &piece;
                    k += 1;
                }
                ok
            }
            Kind::Pow(base, _) => self.power(base, i, y, j, len)?,
        };
        self.memo.insert(key, result);
        Ok(result)
    }

    /// Window `[i, i + len)` of `base^k` against `y` from `j`.
    fn power(&mut self, base: &Expr, i: &BigUint, y: &Expr, j: &BigUint, len: &BigUint) -> Result<bool, OutOfSteps> {
        let p = base.len();
        let zero = BigUint::zero();
        let r = i % p;
        let mut at_y = j.clone();
        let mut left = len.clone();
        if !r.is_zero() {
            let head = min(left.clone(), p - &r);
            if !self.eq(base, &r, y, &at_y, &head)? {
                return Ok(false);
            }
            at_y += &head;
            left -= &head;
        }
        let (q, tail) = left.div_rem(p);
        if !q.is_zero() {
            if !self.eq(base, &zero, y, &at_y, p)? {
                return Ok(false);
            }
            if q > BigUint::from(1u32) {
                // y repeats with period p over the q copies
                let next = &at_y + p;
                if !self.eq(y, &next, y, &at_y, &((&q - 1u32) * p))? {
                    return Ok(false);
                }
            }
            at_y += q * p;
        }
        self.eq(base, &zero, y, &at_y, &tail)
    }
}
