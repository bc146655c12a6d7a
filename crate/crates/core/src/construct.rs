//! Ivanov's word `w_2`, the auxiliary word `u` and the recursive C-test words `v_n`,
//! built as [`Expr`] values over arbitrary argument expressions.

use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::{Error, Expr, Rank, Result};

/// Exponents that appear when arguments of `u`, `v_3` and `v_n` degenerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentTable;

impl ExponentTable {
    /// `u(X, 1) = X^24`
    pub const U_LEFT: u64 = 24;
    /// `u(1, X) = X^20`
    pub const U_RIGHT: u64 = 20;
    /// `u(X, X) = X^44`
    pub const U_BOTH: u64 = 44;
    pub const A1: u64 = 960;
    pub const A2: u64 = 400;
    pub const A3: u64 = 576;
    pub const B4: u64 = 1936;

    fn scaled(factor: u64, n: u32, shift: u32) -> BigUint {
        assert!(n >= 3, "forms B1-B3 need n >= 3");
        BigUint::from(factor) * BigUint::from(400u32).pow(n - shift)
    }

    /// `960 * 400^(n-3)`
    pub fn b1(n: u32) -> BigUint {
        Self::scaled(960, n, 3)
    }

    /// `400^(n-2)`
    pub fn b2(n: u32) -> BigUint {
        Self::scaled(1, n, 2)
    }

    /// `576 * 400^(n-3)`
    pub fn b3(n: u32) -> BigUint {
        Self::scaled(576, n, 3)
    }
}

/// `[a^p, b^q]^k` factor blocks separated by `a`/`b` letters: the shared shape of
/// `w_2` and `u`.
fn blocks(comm: &Expr, separators: [&Expr; 8]) -> Expr {
    let mut acc = Expr::empty();
    for (i, sep) in separators.into_iter().enumerate() {
        acc = acc.cat(&comm.pow(100 * (i as i64 + 1))).cat(sep);
    }
    acc
}

/// `w_2(a, b) = C^100 a C^200 a C^300 a^-1 C^400 a^-1 C^500 b C^600 b C^700 b^-1 C^800 b^-1`
/// with `C = [a^8, b^8]`.
pub fn build_w2(a: &Expr, b: &Expr) -> Expr {
    let c = Expr::comm(&a.pow(8), &b.pow(8));
    let (ai, bi) = (a.inv(), b.inv());
    blocks(&c, [a, a, &ai, &ai, b, b, &bi, &bi])
}

/// `u(a, b) = D^100 a^6 D^200 a^6 D^300 a^6 D^400 a^6 D^500 b^5 D^600 b^5 D^700 b^5 D^800 b^5`
/// with `D = [a^48, b^40]`.
pub fn build_u(a: &Expr, b: &Expr) -> Expr {
    let d = Expr::comm(&a.pow(48), &b.pow(40));
    let (a6, b5) = (a.pow(6), b.pow(5));
    blocks(&d, [&a6, &a6, &a6, &a6, &b5, &b5, &b5, &b5])
}

/// `v_n(args)`, `n = args.len() >= 2`.
pub fn build_v(n: usize, args: &[Expr]) -> Result<Expr> {
    if n < 2 || args.len() != n {
        return Err(Error::Arity { expected: n.max(2), got: args.len() });
    }
    let mut memo = Memo::default();
    Ok(v_rec(args, &mut memo))
}

/// Calls with identical argument references share one result node.
#[derive(Default)]
struct Memo(Vec<(Vec<(usize, bool)>, Expr)>);

impl Memo {
    fn key(args: &[Expr]) -> Vec<(usize, bool)> {
        args.iter().map(|e| (e.node_id(), e.is_inverted())).collect()
    }

    fn get(&self, args: &[Expr]) -> Option<Expr> {
        let k = Self::key(args);
        self.0.iter().find(|(key, _)| *key == k).map(|(_, e)| e.clone())
    }
}

fn v_rec(x: &[Expr], memo: &mut Memo) -> Expr {
    if let Some(e) = memo.get(x) {
        return e;
    }
    let n = x.len();
    let value = if n == 2 {
        build_w2(&x[0], &x[1])
    } else if n == 3 {
        let p = v_rec(&[x[0].clone(), x[1].clone()], memo);
        let q = v_rec(&[x[1].clone(), x[2].clone()], memo);
        let r = v_rec(&[x[2].clone(), x[0].clone()], memo);
        build_u(&build_u(&p, &q), &build_u(&q, &r))
    } else {
        // v_{n-1}(x_1..x_{n-1}), v_{n-1}(x_{n-1}, x_2..x_{n-2}, x_n), v_{n-1}(x_n, x_2..x_{n-2}, x_1)
        let middle = &x[1..n - 2];
        let first: Vec<Expr> = x[..n - 1].to_vec();
        let second: Vec<Expr> =
            core::iter::once(x[n - 2].clone()).chain(middle.iter().cloned()).chain([x[n - 1].clone()]).collect();
        let third: Vec<Expr> =
            core::iter::once(x[n - 1].clone()).chain(middle.iter().cloned()).chain([x[0].clone()]).collect();
        let p = v_rec(&first, memo);
        let q = v_rec(&second, memo);
        let r = v_rec(&third, memo);
        build_u(&build_u(&p, &q), &build_u(&q, &r))
    };
    memo.0.push((Memo::key(x), value.clone()));
    value
}

/// `v_n(x_1, ..., x_n)` over the free generators.
pub fn build_v_generators(n: usize) -> Result<Expr> {
    let args: Vec<Expr> = (1..=n as u32).map(Expr::generator).collect();
    build_v(n, &args)
}

/// `u_1 = v_m(x_1, ..., x_m)` and `u_2 = v_{m+1}(x_{m-1}, x_{m-2}, ..., x_1, x_m, x_1)`.
pub fn corollary_words(rank: Rank) -> (Expr, Expr) {
    let m = rank.get();
    let gens: Vec<Expr> = (1..=m).map(Expr::generator).collect();
    let u1 = build_v(m as usize, &gens).expect("arity matches");
    let mut args: Vec<Expr> = (1..m).rev().map(|i| gens[i as usize - 1].clone()).collect();
    args.push(gens[m as usize - 1].clone());
    args.push(gens[0].clone());
    let u2 = build_v(m as usize + 1, &args).expect("arity matches");
    (u1, u2)
}

/// Argument order of `u_2` as generator indices (for reporting).
pub fn corollary_u2_indices(rank: Rank) -> Vec<u32> {
    let m = rank.get();
    let mut idx: Vec<u32> = (1..m).rev().collect();
    idx.push(m);
    idx.push(1);
    idx
}
