//! Compressed power-expression DAGs.
//!
//! An [`Expr`] denotes a freely reduced word that may be far too long to expand
//! (the value of `v_5` on short words has more than `10^39` letters). Nodes are
//! immutable and shared through `Arc`, and an `Expr` is a *signed* reference to a
//! node, so inversion is free and preserves sharing.
//!
//! Node kinds:
//!
//! - `Lit(w)`: an explicit reduced word of at most [`LIT_CHUNK`] letters;
//! - `Cat(children)`: juxtaposition of non-empty children whose seams are already
//!   reduced (cancellation is resolved when the node is built);
//! - `Pow(base, k)`: `k >= 2` copies of a non-empty, cyclically reduced base.
//!
//! Each node carries its exact length and a fingerprint, the image of its
//! denotation in `SL(2)` modulo two fixed primes. Seam cancellation in
//! [`Expr::cat`] walks both sides together, skipping sub-expressions with equal
//! length and fingerprint and comparing literals letter by letter; after the seam
//! cap is spent the end of the common prefix is found by galloping search over
//! prefix fingerprints.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::min;
use core::fmt;
use core::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::oracle::{fingerprint_letter, MatMod};
use crate::{Error, Letter, Result, Word};

mod certify;

/// Longest explicit literal stored in a single node.
pub const LIT_CHUNK: usize = 256;
/// Longest child list produced by flattening nested concatenations.
const FLATTEN_LIMIT: usize = 64;
const FAN_OUT: usize = 16;

pub const DEFAULT_SEAM_CAP: u64 = 1_000_000;
pub const DEFAULT_EQUAL_BUDGET: u64 = 10_000_000;

static SEAM_CAP: AtomicU64 = AtomicU64::new(DEFAULT_SEAM_CAP);

/// Cursor steps spent at a seam before switching to fingerprint search.
pub fn seam_cap() -> u64 {
    SEAM_CAP.load(Ordering::Relaxed)
}

pub fn set_seam_cap(cap: u64) {
    SEAM_CAP.store(cap, Ordering::Relaxed);
}

const FP_PRIMES: [u64; 2] = [(1 << 61) - 1, (1 << 62) - 57];

#[derive(Clone, Copy, PartialEq, Eq)]
struct Fingerprint([MatMod; 2]);

impl Fingerprint {
    fn identity() -> Self {
        Fingerprint(FP_PRIMES.map(MatMod::identity))
    }

    fn letter(l: Letter) -> Self {
        Fingerprint(FP_PRIMES.map(|p| fingerprint_letter(l, p)))
    }

    fn word(letters: &[Letter]) -> Self {
        letters.iter().fold(Self::identity(), |acc, &l| acc.mul(&Self::letter(l)))
    }

    fn mul(&self, o: &Self) -> Self {
        Fingerprint([self.0[0].mul(&o.0[0]), self.0[1].mul(&o.0[1])])
    }

    fn inverse(&self) -> Self {
        Fingerprint([self.0[0].inverse(), self.0[1].inverse()])
    }

    fn pow(&self, k: u64) -> Self {
        Fingerprint([self.0[0].pow(k), self.0[1].pow(k)])
    }

    fn pow_big(&self, k: &BigUint) -> Self {
        Fingerprint([self.0[0].pow_big(k), self.0[1].pow_big(k)])
    }
}

/// Node payload, exposed read-only for evaluators and serializers.
pub enum Kind {
    Lit(Word),
    Cat(Vec<Expr>),
    Pow(Expr, u64),
}

struct CatIndex {
    offsets: Vec<BigUint>,
    prefix_fp: Vec<Fingerprint>,
}

struct Node {
    kind: Kind,
    len: BigUint,
    fp: Fingerprint,
    max_gen: u32,
    depth: u32,
    cat: Option<CatIndex>,
}

/// Signed reference to a shared node: `inverted` selects the group inverse.
#[derive(Clone)]
pub struct Expr {
    node: Arc<Node>,
    inverted: bool,
}

/// Outcome of [`Expr::equal_exact`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactEquality {
    Equal,
    Unequal,
    BudgetExceeded,
}

/// Returned by [`Expr::expand`] when the denotation is longer than allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TooLarge {
    pub length: BigUint,
}

impl Expr {
    fn from_node(node: Node) -> Self {
        Expr { node: Arc::new(node), inverted: false }
    }

    fn lit_node(word: Word) -> Self {
        debug_assert!(word.len() <= LIT_CHUNK);
        Expr::from_node(Node {
            len: BigUint::from(word.len()),
            fp: Fingerprint::word(word.letters()),
            max_gen: word.max_generator(),
            depth: 0,
            cat: None,
            kind: Kind::Lit(word),
        })
    }

    /// Concatenation node over children whose juxtaposition is already reduced.
    fn cat_node(children: Vec<Expr>) -> Self {
        debug_assert!(children.len() >= 2);
        let mut offsets = Vec::with_capacity(children.len());
        let mut prefix_fp = Vec::with_capacity(children.len());
        let mut len = BigUint::zero();
        let mut fp = Fingerprint::identity();
        for c in &children {
            debug_assert!(!c.is_empty());
            offsets.push(len.clone());
            prefix_fp.push(fp);
            len += c.len();
            fp = fp.mul(&c.fingerprint());
        }
        let max_gen = children.iter().map(|c| c.node.max_gen).max().unwrap_or(0);
        let depth = 1 + children.iter().map(|c| c.node.depth).max().unwrap_or(0);
        Expr::from_node(Node {
            kind: Kind::Cat(children),
            len,
            fp,
            max_gen,
            depth,
            cat: Some(CatIndex { offsets, prefix_fp }),
        })
    }

    /// `base^k` for a non-empty cyclically reduced base and `k >= 2`.
    fn pow_node(base: Expr, k: u64) -> Self {
        debug_assert!(k >= 2 && !base.is_empty());
        if let Some((inner, j)) = base.as_pow() {
            if let Some(kk) = j.checked_mul(k) {
                return Expr::pow_node(inner, kk);
            }
        }
        Expr::from_node(Node {
            len: base.len() * k,
            fp: base.fingerprint().pow(k),
            max_gen: base.node.max_gen,
            depth: base.node.depth + 1,
            cat: None,
            kind: Kind::Pow(base, k),
        })
    }

    pub fn empty() -> Self {
        Expr::lit_node(Word::empty())
    }

    pub fn generator(i: u32) -> Self {
        Expr::lit_node(Word::generator(i))
    }

    /// Literal node(s) for an explicit word; long words become a balanced tree of chunks.
    pub fn lit(word: &Word) -> Self {
        if word.len() <= LIT_CHUNK {
            return Expr::lit_node(word.clone());
        }
        let mut level: Vec<Expr> = word
            .letters()
            .chunks(LIT_CHUNK)
            .map(|c| Expr::lit_node(Word::from_reduced(c.to_vec())))
            .collect();
        while level.len() > 1 {
            level = level
                .chunks(FAN_OUT)
                .map(|grp| if grp.len() == 1 { grp[0].clone() } else { Expr::cat_node(grp.to_vec()) })
                .collect();
        }
        level.pop().unwrap()
    }

    pub fn len(&self) -> &BigUint {
        &self.node.len
    }

    pub fn is_empty(&self) -> bool {
        self.node.len.is_zero()
    }

    pub fn kind(&self) -> &Kind {
        &self.node.kind
    }

    pub fn is_inverted(&self) -> bool {
        self.inverted
    }

    /// Address of the shared node; stable while any reference is alive.
    pub fn node_id(&self) -> usize {
        Arc::as_ptr(&self.node) as usize
    }

    pub fn max_generator(&self) -> u32 {
        self.node.max_gen
    }

    pub fn depth(&self) -> u32 {
        self.node.depth
    }

    /// Number of distinct nodes reachable from this expression.
    pub fn node_count(&self) -> usize {
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![self.clone()];
        while let Some(e) = stack.pop() {
            if !seen.insert(e.node_id()) {
                continue;
            }
            match e.kind() {
                Kind::Lit(_) => {}
                Kind::Cat(ch) => stack.extend(ch.iter().cloned()),
                Kind::Pow(b, _) => stack.push(b.clone()),
            }
        }
        seen.len()
    }

    /// Same node with the same orientation.
    pub fn same_as(&self, other: &Expr) -> bool {
        Arc::ptr_eq(&self.node, &other.node) && self.inverted == other.inverted
    }

    fn fingerprint(&self) -> Fingerprint {
        if self.inverted {
            self.node.fp.inverse()
        } else {
            self.node.fp
        }
    }

    fn with_flag(&self, flip: bool) -> Expr {
        Expr { node: self.node.clone(), inverted: self.inverted ^ flip }
    }

    /// Effective `(base, k)` when this is a power node.
    fn as_pow(&self) -> Option<(Expr, u64)> {
        match &self.node.kind {
            Kind::Pow(b, k) => Some((b.with_flag(self.inverted), *k)),
            _ => None,
        }
    }

    pub(crate) fn as_small_lit(&self) -> Option<Word> {
        match &self.node.kind {
            Kind::Lit(w) if self.inverted => Some(w.inverse()),
            Kind::Lit(w) => Some(w.clone()),
            _ => None,
        }
    }

    pub fn inv(&self) -> Expr {
        self.with_flag(true)
    }

    /// Letters of the denotation, front to back.
    pub fn letters(&self) -> Letters<'_> {
        let mut it = Letters { stack: Vec::new() };
        it.push(&self.node, self.inverted);
        it
    }

    pub fn letter_at(&self, i: &BigUint) -> Result<Letter> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange(alloc::format!("{i}")));
        }
        Ok(letter_at_rec(self, i.clone()))
    }

    pub fn expand(&self, max_len: u64) -> core::result::Result<Word, TooLarge> {
        match self.len().to_u64() {
            Some(n) if n <= max_len => Ok(Word::from_reduced(self.letters().collect())),
            _ => Err(TooLarge { length: self.len().clone() }),
        }
    }

    /// Sufficient test for equality: the two DAGs have identical shape with equal
    /// literals and exponents. Deterministic; `false` proves nothing.
    pub fn structurally_equal(&self, other: &Expr) -> bool {
        let mut proven = BTreeSet::new();
        structural_rec(self, other, &mut proven)
    }

    /// Exact equality by memoized comparison of windows over the two DAGs,
    /// splitting nodes into children and powers into one period plus a
    /// periodicity check. `None` when `steps` run out first.
    pub fn certify_equal(&self, other: &Expr, steps: u64) -> Option<bool> {
        if self.len() != other.len() {
            return Some(false);
        }
        let zero = BigUint::zero();
        certify::Certifier::new(steps).eq(self, &zero, other, &zero, self.len()).ok()
    }

    /// Exact comparison streaming at most `budget` letters.
    pub fn equal_exact(&self, other: &Expr, budget: u64) -> ExactEquality {
        if self.len() != other.len() {
            return ExactEquality::Unequal;
        }
        if self.same_as(other) {
            return ExactEquality::Equal;
        }
        let total = self.len().to_u64();
        let steps = total.map_or(budget, |t| min(t, budget));
        let mut a = self.letters();
        let mut b = other.letters();
        for _ in 0..steps {
            if a.next() != b.next() {
                return ExactEquality::Unequal;
            }
        }
        match total {
            Some(t) if t <= budget => ExactEquality::Equal,
            _ => ExactEquality::BudgetExceeded,
        }
    }

    /// Sub-word `[start, end)` of the denotation.
    pub fn slice(&self, start: &BigUint, end: &BigUint) -> Expr {
        assert!(start <= end && end <= self.len(), "slice out of range");
        if start == end {
            return Expr::empty();
        }
        if start.is_zero() && end == self.len() {
            return self.clone();
        }
        if self.inverted {
            let n = self.len();
            let upright = self.with_flag(true);
            return upright.slice(&(n - end), &(n - start)).inv();
        }
        match &self.node.kind {
            Kind::Lit(w) => {
                let (s, e) = (start.to_usize().unwrap(), end.to_usize().unwrap());
                Expr::lit_node(Word::from_reduced(w.letters()[s..e].to_vec()))
            }
            Kind::Cat(children) => {
                let idx = self.node.cat.as_ref().unwrap();
                let first = idx.offsets.partition_point(|o| o <= start) - 1;
                let last = idx.offsets.partition_point(|o| o < end) - 1;
                if first == last {
                    let off = &idx.offsets[first];
                    return children[first].slice(&(start - off), &(end - off));
                }
                let mut pieces = Pieces::default();
                let off = &idx.offsets[first];
                pieces.push(children[first].slice(&(start - off), children[first].len()));
                for c in &children[first + 1..last] {
                    pieces.push(c.clone());
                }
                pieces.push(children[last].slice(&BigUint::zero(), &(end - &idx.offsets[last])));
                pieces.finish()
            }
            Kind::Pow(base, _) => {
                let period = base.len();
                let (mut q1, r1) = start.div_rem(period);
                let (q2, r2) = end.div_rem(period);
                if q1 == q2 {
                    return base.slice(&r1, &r2);
                }
                let mut pieces = Pieces::default();
                if !r1.is_zero() {
                    pieces.push(base.slice(&r1, period));
                    q1 += 1u32;
                }
                let full = (q2 - q1).to_u64().unwrap();
                match full {
                    0 => {}
                    1 => pieces.push(base.clone()),
                    k => pieces.push(Expr::pow_node(base.clone(), k)),
                }
                if !r2.is_zero() {
                    pieces.push(base.slice(&BigUint::zero(), &r2));
                }
                pieces.finish()
            }
        }
    }

    /// Reduced product `self * other`.
    pub fn cat(&self, other: &Expr) -> Expr {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let cancel = common_prefix(&self.inv(), other, seam_cap());
        let left = self.slice(&BigUint::zero(), &(self.len() - &cancel));
        let right = other.slice(&cancel, other.len());
        let mut pieces = Pieces::default();
        pieces.push(left);
        pieces.push(right);
        pieces.finish()
    }

    /// Left-to-right reduced product of several expressions.
    pub fn product<'a, I: IntoIterator<Item = &'a Expr>>(items: I) -> Expr {
        items.into_iter().fold(Expr::empty(), |acc, e| acc.cat(e))
    }

    /// Length `c` of the conjugator in `self = g core g^-1`.
    pub fn cyclic_cancellation(&self) -> BigUint {
        if self.is_empty() {
            return BigUint::zero();
        }
        let c = common_prefix(&self.inv(), self, seam_cap());
        // a reduced non-empty word keeps a non-empty core
        let max = (self.len() - 1u32) >> 1;
        min(c, max)
    }

    /// `(core, g)` with `self = g core g^-1` and `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Expr, Expr) {
        let c = self.cyclic_cancellation();
        let n = self.len();
        (self.slice(&c, &(n - &c)), self.slice(&BigUint::zero(), &c))
    }

    /// `self^k`; negative exponents power the inverse.
    pub fn pow(&self, k: i64) -> Expr {
        if k < 0 {
            return self.inv().pow_u64(k.unsigned_abs());
        }
        self.pow_u64(k as u64)
    }

    pub fn pow_u64(&self, k: u64) -> Expr {
        if k == 0 || self.is_empty() {
            return Expr::empty();
        }
        if k == 1 {
            return self.clone();
        }
        let c = self.cyclic_cancellation();
        let n = self.len();
        let core = self.slice(&c, &(n - &c));
        let mut pieces = Pieces::default();
        pieces.push(self.slice(&BigUint::zero(), &c));
        pieces.push(Expr::pow_node(core, k));
        pieces.push(self.slice(&(n - &c), n));
        pieces.finish()
    }

    /// Commutator `a b a^-1 b^-1`.
    pub fn comm(a: &Expr, b: &Expr) -> Expr {
        a.cat(b).cat(&a.inv()).cat(&b.inv())
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr(len={}, depth={}, inverted={})", self.len(), self.depth(), self.inverted)
    }
}

/// Builder for concatenations of contiguous, seam-reduced pieces.
#[derive(Default)]
struct Pieces(Vec<Expr>);

impl Pieces {
    fn push(&mut self, e: Expr) {
        if e.is_empty() {
            return;
        }
        if let Kind::Cat(children) = &e.node.kind {
            if self.0.len() + children.len() <= FLATTEN_LIMIT {
                if e.inverted {
                    for c in children.iter().rev() {
                        self.push_one(c.inv());
                    }
                } else {
                    for c in children {
                        self.push_one(c.clone());
                    }
                }
                return;
            }
        }
        self.push_one(e);
    }

    fn push_one(&mut self, e: Expr) {
        if let Some(last) = self.0.last() {
            if let (Some((b1, k1)), Some((b2, k2))) = (last.as_pow(), e.as_pow()) {
                if b1.same_as(&b2) || (b1.fingerprint() == b2.fingerprint() && b1.structurally_equal(&b2)) {
                    if let Some(k) = k1.checked_add(k2) {
                        *self.0.last_mut().unwrap() = Expr::pow_node(b1, k);
                        return;
                    }
                }
            }
            if let (Some(w1), Some(w2)) = (last.as_small_lit(), e.as_small_lit()) {
                if w1.len() + w2.len() <= LIT_CHUNK {
                    let mut letters = w1.letters().to_vec();
                    letters.extend_from_slice(w2.letters());
                    *self.0.last_mut().unwrap() = Expr::lit_node(Word::from_reduced(letters));
                    return;
                }
            }
        }
        self.0.push(e);
    }

    fn finish(mut self) -> Expr {
        match self.0.len() {
            0 => Expr::empty(),
            1 => self.0.pop().unwrap(),
            _ => Expr::cat_node(self.0),
        }
    }
}

fn structural_rec(a: &Expr, b: &Expr, proven: &mut BTreeSet<(usize, usize)>) -> bool {
    if a.same_as(b) {
        return true;
    }
    if a.len() != b.len() || a.inverted != b.inverted {
        return match (a.as_small_lit(), b.as_small_lit()) {
            (Some(x), Some(y)) => a.len() == b.len() && x == y,
            _ => false,
        };
    }
    // equal orientation: compare the underlying nodes
    let key = (a.node_id(), b.node_id());
    if proven.contains(&key) {
        return true;
    }
    let equal = match (&a.node.kind, &b.node.kind) {
        (Kind::Lit(x), Kind::Lit(y)) => x == y,
        (Kind::Pow(x, k), Kind::Pow(y, l)) => k == l && structural_rec(x, y, proven),
        (Kind::Cat(xs), Kind::Cat(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| structural_rec(x, y, proven))
        }
        _ => false,
    };
    if equal {
        proven.insert(key);
    }
    equal
}

fn letter_at_rec(e: &Expr, i: BigUint) -> Letter {
    if e.inverted {
        let j = e.len() - 1u32 - i;
        return letter_at_rec(&e.with_flag(true), j).inverse();
    }
    match &e.node.kind {
        Kind::Lit(w) => w.letters()[i.to_usize().unwrap()],
        Kind::Cat(children) => {
            let idx = e.node.cat.as_ref().unwrap();
            let k = idx.offsets.partition_point(|o| *o <= i) - 1;
            letter_at_rec(&children[k], i - &idx.offsets[k])
        }
        Kind::Pow(base, _) => letter_at_rec(base, i % base.len()),
    }
}

/// Fingerprint of the first `l` letters.
fn prefix_fp(e: &Expr, l: &BigUint) -> Fingerprint {
    if l.is_zero() {
        return Fingerprint::identity();
    }
    if l == e.len() {
        return e.fingerprint();
    }
    if e.inverted {
        // prefix of N^-1 = (suffix of N)^-1 and fp(N) = prefix(N, n - l) * suffix(N, l)
        let rest = e.len() - l;
        return e.node.fp.inverse().mul(&node_prefix_fp(&e.node, &rest));
    }
    node_prefix_fp(&e.node, l)
}

fn node_prefix_fp(node: &Node, l: &BigUint) -> Fingerprint {
    match &node.kind {
        Kind::Lit(w) => Fingerprint::word(&w.letters()[..l.to_usize().unwrap()]),
        Kind::Cat(children) => {
            let idx = node.cat.as_ref().unwrap();
            let k = idx.offsets.partition_point(|o| o <= l) - 1;
            idx.prefix_fp[k].mul(&prefix_fp(&children[k], &(l - &idx.offsets[k])))
        }
        Kind::Pow(base, _) => {
            let (q, r) = l.div_rem(base.len());
            base.fingerprint().pow_big(&q).mul(&prefix_fp(base, &r))
        }
    }
}

fn prefixes_agree(a: &Expr, b: &Expr, l: &BigUint) -> bool {
    prefix_fp(a, l) == prefix_fp(b, l)
}

/// Length of the longest common prefix of two denotations.
///
/// Two cursors walk the DAGs in step, skipping sub-expressions (and runs of a
/// power) that agree in length and fingerprint and descending into the longer
/// piece otherwise. After `cap` steps the rest of the boundary is located by
/// galloping over prefix fingerprints.
pub(crate) fn common_prefix(a: &Expr, b: &Expr, cap: u64) -> BigUint {
    if a.same_as(b) {
        return min(a.len(), b.len()).clone();
    }
    match walk_prefix(a, b, cap, equivalent) {
        Walk::Done(l) => l,
        Walk::OutOfSteps(matched) => {
            let rest_a = a.slice(&matched, a.len());
            let rest_b = b.slice(&matched, b.len());
            matched + gallop_prefix(&rest_a, &rest_b)
        }
    }
}

enum Walk {
    Done(BigUint),
    OutOfSteps(BigUint),
}

/// Cursor walk over the common prefix; `same` decides when two pieces may be
/// skipped together.
fn walk_prefix(a: &Expr, b: &Expr, budget: u64, same: impl Fn(&Expr, &Expr) -> bool) -> Walk {
    let (mut ca, mut cb) = (Cursor::new(a), Cursor::new(b));
    let mut steps = 0u64;
    loop {
        let (Some(pa), Some(pb)) = (ca.peek(), cb.peek()) else {
            return Walk::Done(ca.pos);
        };
        if steps >= budget {
            return Walk::OutOfSteps(ca.pos);
        }
        steps += 1;
        if let Some(n) = periodic_run(&ca, &cb) {
            ca.skip(n.clone());
            cb.skip(n);
            continue;
        }
        match (pa, pb) {
            (Piece::Letter(x), Piece::Letter(y)) => {
                if x != y {
                    return Walk::Done(ca.pos);
                }
                ca.advance(1);
                cb.advance(1);
            }
            (Piece::Letter(_), Piece::Sub(y, _)) => cb.descend(y),
            (Piece::Sub(x, _), Piece::Letter(_)) => ca.descend(x),
            (Piece::Sub(x, rx), Piece::Sub(y, ry)) => {
                if same(&x, &y) {
                    let run = min(rx, ry);
                    ca.advance(run);
                    cb.advance(run);
                } else if x.len() >= y.len() {
                    ca.descend(x);
                } else {
                    cb.descend(y);
                }
            }
        }
    }
}

/// Both cursors sit inside power regions of one period `p` that already cover
/// the last `p` matched letters: the words then agree up to the nearer region end.
fn periodic_run(ca: &Cursor, cb: &Cursor) -> Option<BigUint> {
    let pos = &ca.pos;
    let mut best: Option<BigUint> = None;
    for (pa, sa, ea) in ca.regions() {
        if &(sa + pa) > pos || ea <= pos {
            continue;
        }
        for (pb, sb, eb) in cb.regions() {
            if pa == pb && &(sb + pb) <= pos && eb > pos {
                let run = min(ea, eb) - pos;
                if best.as_ref().map_or(true, |b| run > *b) {
                    best = Some(run);
                }
            }
        }
    }
    best
}

fn equivalent(a: &Expr, b: &Expr) -> bool {
    a.same_as(b) || (a.len() == b.len() && a.fingerprint() == b.fingerprint())
}

/// Next item under a [`Cursor`]: a letter inside a literal, or a whole
/// sub-expression repeated `run` times in a row.
enum Piece {
    Letter(Letter),
    Sub(Expr, u64),
}

enum CursorFrame {
    Lit { e: Expr, pos: usize },
    Cat { e: Expr, pos: usize },
    /// `left` copies of `base` remain of the region `[start, end)`.
    Pow { base: Expr, left: u64, start: BigUint, end: BigUint },
}

/// Position inside a denotation as a stack of partially consumed nodes; the
/// remaining word is the concatenation of the frames from the top down.
struct Cursor {
    stack: Vec<CursorFrame>,
    /// Letters consumed so far.
    pos: BigUint,
}

impl Cursor {
    fn new(e: &Expr) -> Self {
        let mut c = Cursor { stack: Vec::new(), pos: BigUint::zero() };
        if !e.is_empty() {
            c.push(e.clone());
        }
        c
    }

    fn push(&mut self, e: Expr) {
        let frame = match &e.node.kind {
            Kind::Lit(_) => CursorFrame::Lit { e, pos: 0 },
            Kind::Cat(_) => CursorFrame::Cat { e, pos: 0 },
            Kind::Pow(base, k) => {
                let base = if e.inverted { base.inv() } else { base.clone() };
                CursorFrame::Pow { base, left: *k, start: self.pos.clone(), end: &self.pos + e.len() }
            }
        };
        self.stack.push(frame);
    }

    fn peek(&self) -> Option<Piece> {
        Some(match self.stack.last()? {
            CursorFrame::Lit { e, pos } => {
                let Kind::Lit(w) = &e.node.kind else { unreachable!() };
                let l = w.letters();
                Piece::Letter(if e.inverted { l[l.len() - 1 - pos].inverse() } else { l[*pos] })
            }
            CursorFrame::Cat { e, pos } => {
                let Kind::Cat(children) = &e.node.kind else { unreachable!() };
                let child = if e.inverted { children[children.len() - 1 - pos].inv() } else { children[*pos].clone() };
                Piece::Sub(child, 1)
            }
            CursorFrame::Pow { base, left, .. } => Piece::Sub(base.clone(), *left),
        })
    }

    /// `(period, start, end)` of every power region the cursor is inside.
    fn regions(&self) -> impl Iterator<Item = (&BigUint, &BigUint, &BigUint)> {
        self.stack.iter().filter_map(|f| match f {
            CursorFrame::Pow { base, start, end, .. } => Some((base.len(), start, end)),
            _ => None,
        })
    }

    /// Consumes `n` pieces of the top frame; `n` never exceeds the current run.
    fn advance(&mut self, n: u64) {
        let done = match self.stack.last_mut().expect("advance past the end") {
            CursorFrame::Lit { e, pos } => {
                *pos += n as usize;
                self.pos += n;
                *pos == e.node.len.to_usize().unwrap()
            }
            CursorFrame::Cat { e, pos } => {
                let Kind::Cat(children) = &e.node.kind else { unreachable!() };
                for _ in 0..n {
                    let i = if e.inverted { children.len() - 1 - *pos } else { *pos };
                    self.pos += children[i].len();
                    *pos += 1;
                }
                *pos == children.len()
            }
            CursorFrame::Pow { base, left, .. } => {
                *left -= n;
                self.pos += base.len() * n;
                *left == 0
            }
        };
        if done {
            self.stack.pop();
        }
    }

    /// Replaces the top piece `sub` by its own frame.
    fn descend(&mut self, sub: Expr) {
        let at = self.pos.clone();
        self.advance(1);
        self.pos = at;
        self.push(sub);
    }

    /// Consumes `n` letters.
    fn skip(&mut self, mut n: BigUint) {
        while !n.is_zero() {
            match self.peek().expect("skip past the end") {
                Piece::Letter(_) => {
                    self.advance(1);
                    n -= 1u32;
                }
                Piece::Sub(x, run) => {
                    let (q, r) = n.div_rem(x.len());
                    if q.is_zero() {
                        self.descend(x);
                        continue;
                    }
                    let k = q.to_u64().map_or(run, |q| min(q, run));
                    self.advance(k);
                    n -= x.len() * k;
                    if k == run {
                        continue;
                    }
                    n = r;
                }
            }
        }
    }
}

/// Common prefix length by galloping and binary search over prefix fingerprints.
fn gallop_prefix(a: &Expr, b: &Expr) -> BigUint {
    let limit = min(a.len(), b.len()).clone();
    if prefixes_agree(a, b, &limit) {
        return limit;
    }
    let mut lo = BigUint::zero();
    let mut step = BigUint::one();
    let mut hi;
    loop {
        hi = &lo + &step;
        if hi >= limit {
            hi = limit.clone();
            break;
        }
        if !prefixes_agree(a, b, &hi) {
            break;
        }
        lo = hi;
        step <<= 1u32;
    }
    // invariant: prefixes of length lo agree, of length hi differ
    while &hi - &lo > BigUint::one() {
        let mid = (&lo + &hi) >> 1u32;
        if prefixes_agree(a, b, &mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Streaming iterator over the letters of an [`Expr`].
pub struct Letters<'a> {
    stack: Vec<Frame<'a>>,
}

enum Frame<'a> {
    Lit { letters: &'a [Letter], pos: usize, inv: bool },
    Cat { children: &'a [Expr], pos: usize, inv: bool },
    Pow { base: &'a Expr, left: u64, inv: bool },
}

impl<'a> Letters<'a> {
    fn push(&mut self, node: &'a Node, inv: bool) {
        let frame = match &node.kind {
            Kind::Lit(w) => Frame::Lit { letters: w.letters(), pos: 0, inv },
            Kind::Cat(children) => Frame::Cat { children, pos: 0, inv },
            Kind::Pow(base, k) => Frame::Pow { base, left: *k, inv },
        };
        self.stack.push(frame);
    }
}

impl Iterator for Letters<'_> {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        loop {
            let next_child = match self.stack.last_mut()? {
                Frame::Lit { letters, pos, inv } => {
                    if *pos < letters.len() {
                        let l = if *inv {
                            letters[letters.len() - 1 - *pos].inverse()
                        } else {
                            letters[*pos]
                        };
                        *pos += 1;
                        return Some(l);
                    }
                    None
                }
                Frame::Cat { children, pos, inv } => {
                    if *pos < children.len() {
                        let c = if *inv { &children[children.len() - 1 - *pos] } else { &children[*pos] };
                        *pos += 1;
                        Some((c, *inv))
                    } else {
                        None
                    }
                }
                Frame::Pow { base, left, inv } => {
                    if *left > 0 {
                        *left -= 1;
                        Some((*base, *inv))
                    } else {
                        None
                    }
                }
            };
            match next_child {
                Some((child, inv)) => self.push(&child.node, inv ^ child.inverted),
                None => {
                    self.stack.pop();
                }
            }
        }
    }
}
