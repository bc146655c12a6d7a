//! Monte Carlo word equality via a faithful matrix representation of `F_m`.
//!
//! For `m = 2` the generators go to the Sanov matrices `A = [[1,2],[0,1]]` and
//! `B = [[1,0],[2,1]]`, which generate a free subgroup of `SL(2, Z)`. For `m > 2`
//! generator `x_i` goes to `A^(i-1) B A^(1-i)`; these conjugates of `B` freely
//! generate the normal closure of `B` in `<A, B>`.
//!
//! Images are evaluated modulo random primes. Power nodes of an [`Expr`] are
//! handled with square-and-multiply, so the cost depends on the DAG size and the
//! exponents' bit lengths, never on the denotation length.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::expr::{Expr, Kind};
use crate::{Error, Letter, Rank, Result, Word};

const LN_2: f64 = core::f64::consts::LN_2;

// ---------------------------------------------------------------------------
// modular arithmetic

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

fn reduce_i128(x: i128, p: u64) -> u64 {
    x.rem_euclid(p as i128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// matrices

/// 2x2 matrix over `Z/pZ`, row-major `[a, b, c, d]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MatMod {
    pub entries: [u64; 4],
    pub modulus: u64,
}

impl MatMod {
    pub fn identity(p: u64) -> Self {
        MatMod { entries: [1, 0, 0, 1], modulus: p }
    }

    pub fn from_i128(e: [i128; 4], p: u64) -> Self {
        MatMod { entries: e.map(|x| reduce_i128(x, p)), modulus: p }
    }

    pub fn mul(&self, o: &MatMod) -> MatMod {
        debug_assert_eq!(self.modulus, o.modulus);
        let p = self.modulus;
        let [a, b, c, d] = self.entries;
        let [e, f, g, h] = o.entries;
        MatMod {
            entries: [
                add_mod(mul_mod(a, e, p), mul_mod(b, g, p), p),
                add_mod(mul_mod(a, f, p), mul_mod(b, h, p), p),
                add_mod(mul_mod(c, e, p), mul_mod(d, g, p), p),
                add_mod(mul_mod(c, f, p), mul_mod(d, h, p), p),
            ],
            modulus: p,
        }
    }

    /// Inverse of a determinant-one matrix (the adjugate).
    pub fn inverse(&self) -> MatMod {
        let p = self.modulus;
        let [a, b, c, d] = self.entries;
        MatMod { entries: [d, (p - b) % p, (p - c) % p, a], modulus: p }
    }

    pub fn pow(&self, mut k: u64) -> MatMod {
        let mut acc = MatMod::identity(self.modulus);
        let mut base = *self;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, k: &BigUint) -> MatMod {
        let mut acc = MatMod::identity(self.modulus);
        for bit in (0..k.bits()).rev() {
            acc = acc.mul(&acc);
            if k.bit(bit) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    pub fn det(&self) -> u64 {
        let p = self.modulus;
        let [a, b, c, d] = self.entries;
        (mul_mod(a, d, p) + p - mul_mod(b, c, p)) % p
    }

    pub fn is_identity(&self) -> bool {
        *self == MatMod::identity(self.modulus)
    }
}

/// Exact 2x2 integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    pub entries: [BigInt; 4],
}

impl IntMatrix {
    pub fn identity() -> Self {
        IntMatrix { entries: [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()] }
    }

    fn from_i128(e: [i128; 4]) -> Self {
        IntMatrix { entries: e.map(BigInt::from) }
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        let [a, b, c, d] = &self.entries;
        let [e, f, g, h] = &o.entries;
        IntMatrix { entries: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h] }
    }

    pub fn inverse(&self) -> IntMatrix {
        let [a, b, c, d] = &self.entries;
        IntMatrix { entries: [d.clone(), -b, -c, a.clone()] }
    }

    pub fn det(&self) -> BigInt {
        let [a, b, c, d] = &self.entries;
        a * d - b * c
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity()
    }
}

/// Integer entries of the image of `x_i` in the conjugate family `A^j B A^-j`, `j = i - 1`.
fn conjugate_family(i: u32) -> [i128; 4] {
    let j = (i - 1) as i128;
    [1 + 4 * j, -8 * j * j, 2, 1 - 4 * j]
}

fn generator_entries(i: u32, rank: Rank) -> [i128; 4] {
    if rank.get() == 2 {
        if i == 1 {
            [1, 2, 0, 1]
        } else {
            [1, 0, 2, 1]
        }
    } else {
        conjugate_family(i)
    }
}

fn check_index(i: u32, rank: Rank) -> Result<()> {
    if i == 0 || i > rank.get() {
        return Err(Error::GeneratorOutOfRange { index: i, rank: rank.get() });
    }
    Ok(())
}

/// Exact image of generator `x_i`.
pub fn gen_matrix(i: u32, rank: Rank) -> Result<IntMatrix> {
    check_index(i, rank)?;
    Ok(IntMatrix::from_i128(generator_entries(i, rank)))
}

pub fn gen_matrix_mod(i: u32, rank: Rank, p: u64) -> Result<MatMod> {
    check_index(i, rank)?;
    Ok(MatMod::from_i128(generator_entries(i, rank), p))
}

fn letter_mod(l: Letter, rank: Rank, p: u64) -> MatMod {
    let g = MatMod::from_i128(generator_entries(l.generator(), rank), p);
    if l.is_positive() {
        g
    } else {
        g.inverse()
    }
}

/// Rank-independent letter image used for expression fingerprints.
pub(crate) fn fingerprint_letter(l: Letter, p: u64) -> MatMod {
    let g = MatMod::from_i128(conjugate_family(l.generator()), p);
    if l.is_positive() {
        g
    } else {
        g.inverse()
    }
}

pub fn eval_int_word(w: &Word, rank: Rank) -> Result<IntMatrix> {
    w.check_rank(rank)?;
    let mut acc = IntMatrix::identity();
    for &l in w.letters() {
        let g = IntMatrix::from_i128(generator_entries(l.generator(), rank));
        acc = acc.mul(&if l.is_positive() { g } else { g.inverse() });
    }
    Ok(acc)
}

pub fn eval_mod_word(w: &Word, rank: Rank, p: u64) -> Result<MatMod> {
    w.check_rank(rank)?;
    Ok(w.letters().iter().fold(MatMod::identity(p), |acc, &l| acc.mul(&letter_mod(l, rank, p))))
}

/// Homomorphic image of `expr` modulo `p`, memoized over shared DAG nodes.
pub fn eval_mod(expr: &Expr, rank: Rank, p: u64) -> Result<MatMod> {
    if expr.max_generator() > rank.get() {
        return Err(Error::GeneratorOutOfRange { index: expr.max_generator(), rank: rank.get() });
    }
    let mut memo = BTreeMap::new();
    Ok(eval_rec(expr, rank, p, &mut memo))
}

fn eval_rec(e: &Expr, rank: Rank, p: u64, memo: &mut BTreeMap<usize, MatMod>) -> MatMod {
    let key = e.node_id();
    let m = match memo.get(&key) {
        Some(m) => *m,
        None => {
            let m = match e.kind() {
                Kind::Lit(w) => w
                    .letters()
                    .iter()
                    .fold(MatMod::identity(p), |acc, &l| acc.mul(&letter_mod(l, rank, p))),
                Kind::Cat(children) => children
                    .iter()
                    .fold(MatMod::identity(p), |acc, c| acc.mul(&eval_rec(c, rank, p, memo))),
                Kind::Pow(base, k) => eval_rec(base, rank, p, memo).pow(*k),
            };
            memo.insert(key, m);
            m
        }
    };
    if e.is_inverted() {
        m.inverse()
    } else {
        m
    }
}

// ---------------------------------------------------------------------------
// randomized equality

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub prime_count: usize,
    pub prime_bits: u32,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { prime_count: 5, prime_bits: 62, seed: 0 }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.prime_count == 0 {
            return Err(Error::Config("prime_count must be at least 1"));
        }
        if !(30..=63).contains(&self.prime_bits) {
            return Err(Error::Config("prime_bits must lie in 30..=63"));
        }
        Ok(())
    }

    /// Lower bound on the number of primes with exactly `prime_bits` bits,
    /// from `x / ln x < pi(x) < 1.25506 x / ln x`.
    pub fn candidate_pool(&self) -> f64 {
        let b = self.prime_bits as f64;
        let hi = (1u128 << self.prime_bits) as f64;
        let lo = (1u128 << (self.prime_bits - 1)) as f64;
        hi / (b * LN_2) - 1.25506 * lo / ((b - 1.0) * LN_2)
    }

    /// Upper bound on the chance that `prime_count` random primes all fail to
    /// separate two distinct words of length at most `max_len`.
    ///
    /// Entries of a length-`L` image are bounded by `rho^L`, so an entry difference
    /// has at most `(L log2(rho) + 1) / (b - 1)` prime divisors with `b` bits.
    pub fn error_bound(&self, max_len: &BigUint, rank: Rank) -> f64 {
        let l = max_len.to_f64().unwrap_or(f64::INFINITY);
        let bad = (bits_per_letter(rank) as f64 * l + 1.0) / (self.prime_bits as f64 - 1.0);
        let per_prime = (bad / self.candidate_pool()).min(1.0);
        let mut bound = 1.0;
        for _ in 0..self.prime_count {
            bound *= per_prime;
        }
        bound
    }
}

/// `ceil(log2(rho))` for the largest row sum `rho` over generator images and their inverses.
pub fn bits_per_letter(rank: Rank) -> u32 {
    let mut rho: u128 = 0;
    for i in 1..=rank.get() {
        let [a, b, c, d] = generator_entries(i, rank);
        // the inverse [[d,-b],[-c,a]] has the same multiset of absolute row/column sums
        for s in [a.abs() + b.abs(), c.abs() + d.abs(), d.abs() + b.abs(), c.abs() + a.abs()] {
            rho = rho.max(s as u128);
        }
    }
    128 - (rho - 1).leading_zeros()
}

/// `prime_count` distinct primes of `prime_bits` bits, drawn deterministically from `seed`.
/// Each prime index uses its own ChaCha stream.
pub fn sample_primes(cfg: &OracleConfig) -> Result<Vec<u64>> {
    cfg.validate()?;
    let mut primes: Vec<u64> = Vec::with_capacity(cfg.prime_count);
    let top = 1u64 << (cfg.prime_bits - 1);
    let mask = if cfg.prime_bits == 64 { u64::MAX } else { (1u64 << cfg.prime_bits) - 1 };
    for idx in 0..cfg.prime_count {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(idx as u64);
        loop {
            let cand = (rng.next_u64() & mask) | top | 1;
            if is_prime(cand) && !primes.contains(&cand) {
                primes.push(cand);
                break;
            }
        }
    }
    Ok(primes)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EqualityVerdict {
    /// The two images differ modulo `prime`, so the words differ.
    DefinitelyUnequal { prime: u64 },
    /// All sampled primes agree; `error_bound` bounds the chance the words still differ.
    ProbablyEqual { error_bound: f64 },
}

impl EqualityVerdict {
    pub fn is_probably_equal(&self) -> bool {
        matches!(self, EqualityVerdict::ProbablyEqual { .. })
    }

    pub fn is_definitely_unequal(&self) -> bool {
        matches!(self, EqualityVerdict::DefinitelyUnequal { .. })
    }
}

pub fn equal_mc(a: &Expr, b: &Expr, rank: Rank, cfg: &OracleConfig) -> Result<EqualityVerdict> {
    let primes = sample_primes(cfg)?;
    for p in primes {
        if eval_mod(a, rank, p)? != eval_mod(b, rank, p)? {
            return Ok(EqualityVerdict::DefinitelyUnequal { prime: p });
        }
    }
    let max_len = core::cmp::max(a.len(), b.len());
    Ok(EqualityVerdict::ProbablyEqual { error_bound: cfg.error_bound(max_len, rank) })
}

pub fn is_identity_mc(a: &Expr, rank: Rank, cfg: &OracleConfig) -> Result<EqualityVerdict> {
    equal_mc(a, &Expr::empty(), rank, cfg)
}
