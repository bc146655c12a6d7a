//! Freely reduced words over the free group `F_m = <x_1, ..., x_m>`.
//!
//! A [`Word`] is always freely reduced; every constructor goes through
//! [`Word::reduce`]. The text format is a whitespace-separated list of tokens
//! `x<i>` or `x<i>^<e>`, with the single token `1` denoting the empty word.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// A generator or its inverse. Stored as a non-zero signed index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    /// `generator` is 1-based and must be non-zero.
    pub fn new(generator: u32, positive: bool) -> Self {
        assert!(generator >= 1 && generator <= i32::MAX as u32, "generator index out of range");
        let g = generator as i32;
        Letter(if positive { g } else { -g })
    }

    pub fn generator(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i32 {
        self.0.signum()
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.0 == -other.0
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "x{}", self.generator())
        } else {
            write!(f, "x{}^-1", self.generator())
        }
    }
}

/// Rank `m >= 2` of the ambient free group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rank(u32);

impl Rank {
    pub fn new(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidRank(m));
        }
        Ok(Rank(m))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn check(self, letter: Letter) -> Result<()> {
        if letter.generator() > self.0 {
            return Err(Error::GeneratorOutOfRange { index: letter.generator(), rank: self.0 });
        }
        Ok(())
    }
}

/// A freely reduced word.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn generator(i: u32) -> Self {
        Word { letters: alloc::vec![Letter::new(i, true)] }
    }

    pub fn letter(l: Letter) -> Self {
        Word { letters: alloc::vec![l] }
    }

    /// Free reduction with a stack; cancels adjacent inverse pairs to a fixed point.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            match out.last() {
                Some(&last) if last.is_inverse_of(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word { letters: out }
    }

    /// Wraps letters that are already known to be freely reduced.
    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|p| !p[0].is_inverse_of(p[1])));
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Largest generator index occurring in the word (0 for the empty word).
    pub fn max_generator(&self) -> u32 {
        self.letters.iter().map(|l| l.generator()).max().unwrap_or(0)
    }

    pub fn check_rank(&self, rank: Rank) -> Result<()> {
        self.letters.iter().try_for_each(|&l| rank.check(l))
    }

    pub fn inverse(&self) -> Self {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn concat(&self, other: &Word) -> Self {
        let cancel = self
            .letters
            .iter()
            .rev()
            .zip(other.letters.iter())
            .take_while(|(a, b)| a.is_inverse_of(**b))
            .count();
        let mut letters = Vec::with_capacity(self.len() + other.len() - 2 * cancel);
        letters.extend_from_slice(&self.letters[..self.len() - cancel]);
        letters.extend_from_slice(&other.letters[cancel..]);
        Word { letters }
    }

    /// `w^k`; negative `k` powers the inverse.
    pub fn power(&self, k: i64) -> Self {
        if k < 0 {
            return self.inverse().power(-k);
        }
        if k == 0 || self.is_empty() {
            return Word::empty();
        }
        let (core, conj) = self.cyclic_reduce();
        let k = k as usize;
        let mut letters = Vec::with_capacity(2 * conj.len() + k * core.len());
        letters.extend_from_slice(&conj.letters);
        for _ in 0..k {
            letters.extend_from_slice(&core.letters);
        }
        letters.extend(conj.letters.iter().rev().map(|l| l.inverse()));
        Word::from_reduced(letters)
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(a: &Word, b: &Word) -> Self {
        Word::reduce(
            a.letters
                .iter()
                .chain(b.letters.iter())
                .copied()
                .chain(a.letters.iter().rev().map(|l| l.inverse()))
                .chain(b.letters.iter().rev().map(|l| l.inverse())),
        )
    }

    /// Number of letters `c` with `w = g core g^-1`, `|g| = c`.
    pub fn cyclic_cancellation(&self) -> usize {
        let n = self.len();
        let mut c = 0;
        while 2 * c + 1 < n && self.letters[c].is_inverse_of(self.letters[n - 1 - c]) {
            c += 1;
        }
        c
    }

    /// Returns `(core, g)` with `self = g core g^-1` and `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let c = self.cyclic_cancellation();
        let n = self.len();
        (
            Word::from_reduced(self.letters[c..n - c].to_vec()),
            Word::from_reduced(self.letters[..c].to_vec()),
        )
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) => self.len() == 1 || !a.is_inverse_of(b),
            _ => true,
        }
    }

    /// The unique `(root, exponent)` with `root^exponent = self` and `root` not a proper power.
    ///
    /// The cyclic core is a proper power iff it is literally periodic with a period
    /// dividing its length; the smallest period comes from the failure function.
    pub fn primitive_root(&self) -> Result<(Word, u64)> {
        if self.is_empty() {
            return Err(Error::EmptyRoot);
        }
        let (core, conj) = self.cyclic_reduce();
        let n = core.len();
        let fail = failure_function(&core.letters);
        let period = n - fail[n - 1];
        if period == n || n % period != 0 {
            return Ok((self.clone(), 1));
        }
        let mut letters = Vec::with_capacity(2 * conj.len() + period);
        letters.extend_from_slice(&conj.letters);
        letters.extend_from_slice(&core.letters[..period]);
        letters.extend(conj.letters.iter().rev().map(|l| l.inverse()));
        Ok((Word::from_reduced(letters), (n / period) as u64))
    }

    /// False for the empty word.
    pub fn is_proper_power(&self) -> bool {
        match self.primitive_root() {
            Ok((_, e)) => e >= 2,
            Err(_) => false,
        }
    }

    /// Parses the text format, checking generator indices against `rank`.
    pub fn parse(text: &str, rank: Rank) -> Result<Word> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() == 1 && tokens[0] == "1" {
            return Ok(Word::empty());
        }
        if tokens.is_empty() {
            return Err(Error::MalformedToken(String::new()));
        }
        let mut letters = Vec::new();
        for tok in tokens {
            let (gen, exp) = parse_token(tok)?;
            let letter = Letter::new(gen, exp > 0);
            rank.check(letter)?;
            for _ in 0..exp.unsigned_abs() {
                letters.push(letter);
            }
        }
        Ok(Word::reduce(letters))
    }
}

fn parse_token(tok: &str) -> Result<(u32, i64)> {
    let malformed = || Error::MalformedToken(tok.to_string());
    let body = tok.strip_prefix('x').ok_or_else(malformed)?;
    let (idx, exp) = match body.split_once('^') {
        Some((i, e)) => (i, e.parse::<i64>().map_err(|_| malformed())?),
        None => (body, 1),
    };
    if idx.is_empty() || !idx.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed());
    }
    let gen: u32 = idx.parse().map_err(|_| malformed())?;
    if gen == 0 || gen > i32::MAX as u32 {
        return Err(malformed());
    }
    if exp == 0 {
        return Err(Error::ZeroExponent(tok.to_string()));
    }
    Ok((gen, exp))
}

/// KMP failure function: `fail[i]` is the length of the longest proper border of `s[..=i]`.
pub(crate) fn failure_function<T: PartialEq>(s: &[T]) -> Vec<usize> {
    let mut fail = alloc::vec![0usize; s.len()];
    let mut k = 0;
    for i in 1..s.len() {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail
}

/// Start positions of `pattern` in `text` (KMP).
pub(crate) fn find_occurrence<T: PartialEq>(text: &[T], pattern: &[T]) -> Option<usize> {
    if pattern.is_empty() {
        return Some(0);
    }
    let fail = failure_function(pattern);
    let mut k = 0;
    for (i, c) in text.iter().enumerate() {
        while k > 0 && *c != pattern[k] {
            k = fail[k - 1];
        }
        if *c == pattern[k] {
            k += 1;
        }
        if k == pattern.len() {
            return Some(i + 1 - k);
        }
    }
    None
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let run = self.letters[i..].iter().take_while(|&&m| m == l).count();
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let e = run as i64 * l.sign() as i64;
            if e == 1 {
                write!(f, "x{}", l.generator())?;
            } else {
                write!(f, "x{}^{}", l.generator(), e)?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn r2() -> Rank {
        Rank::new(2).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s, Rank::new(4).unwrap()).unwrap()
    }

    fn x(i: u32) -> Letter {
        Letter::new(i, true)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(Word::parse("x1 x2^-1", r2()).unwrap().len(), 2);
        assert!(Word::parse("x1^2 x1^-2", r2()).unwrap().is_empty());
        assert!(Word::parse("1", r2()).unwrap().is_empty());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Word::parse("y1", r2()), Err(Error::MalformedToken(_))));
        assert!(matches!(Word::parse("x1^", r2()), Err(Error::MalformedToken(_))));
        assert!(matches!(Word::parse("x0", r2()), Err(Error::MalformedToken(_))));
        assert!(matches!(Word::parse("", r2()), Err(Error::MalformedToken(_))));
        assert!(matches!(Word::parse("x1 1", r2()), Err(Error::MalformedToken(_))));
        assert!(matches!(
            Word::parse("x3", r2()),
            Err(Error::GeneratorOutOfRange { index: 3, rank: 2 })
        ));
        assert!(matches!(Word::parse("x1^0", r2()), Err(Error::ZeroExponent(_))));
        assert!(Rank::new(1).is_err());
    }

    #[test]
    fn format_examples() {
        assert_eq!(Word::empty().to_string(), "1");
        let word = Word::reduce(vec![x(1), x(1), x(2).inverse()]);
        assert_eq!(word.to_string(), "x1^2 x2^-1");
        assert_eq!(w("x2^-1 x1").to_string(), "x2^-1 x1");
    }

    #[test]
    fn reduce_examples() {
        assert!(Word::reduce(vec![x(1), x(1).inverse()]).is_empty());
        assert_eq!(Word::reduce(vec![x(1), x(2), x(2).inverse(), x(1)]), w("x1^2"));
    }

    #[test]
    fn invert_and_concat() {
        assert_eq!(w("x1 x2").inverse(), w("x2^-1 x1^-1"));
        assert!(Word::empty().inverse().is_empty());
        assert!(w("x1").concat(&w("x1^-1")).is_empty());
        assert_eq!(w("x1 x2").concat(&w("x2^-1 x1")), w("x1^2"));
        assert_eq!(w("x1 x2").concat(&Word::empty()), w("x1 x2"));
    }

    #[test]
    fn power_examples() {
        assert_eq!(w("x1").power(6), w("x1^6"));
        assert!(w("x1 x2").power(0).is_empty());
        assert_eq!(w("x1 x2^3").power(-1), w("x1 x2^3").inverse());
        assert_eq!(w("x1 x2 x1^-1").power(3), w("x1 x2^3 x1^-1"));
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(Word::commutator(&w("x1"), &w("x2")), w("x1 x2 x1^-1 x2^-1"));
        assert_eq!(Word::commutator(&w("x1^8"), &w("x2^8")).len(), 32);
        let a = w("x1 x2^-1 x3");
        assert!(Word::commutator(&a, &a).is_empty());
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (core, g) = w("x1 x2 x1^-1").cyclic_reduce();
        assert_eq!(core, w("x2"));
        assert_eq!(g, w("x1"));
        let (core, g) = w("x1 x2").cyclic_reduce();
        assert_eq!(core, w("x1 x2"));
        assert!(g.is_empty());
        let (core, g) = Word::empty().cyclic_reduce();
        assert!(core.is_empty() && g.is_empty());
        // odd palindromic-inverse shapes keep a non-empty core
        let (core, g) = w("x1 x2 x3 x2^-1 x1^-1").cyclic_reduce();
        assert_eq!(core, w("x3"));
        assert_eq!(g, w("x1 x2"));
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(w("x1^6").primitive_root().unwrap(), (w("x1"), 6));
        assert_eq!(w("x1 x2 x1 x2 x1 x2").primitive_root().unwrap(), (w("x1 x2"), 3));
        let c = Word::commutator(&w("x1"), &w("x2"));
        assert_eq!(c.primitive_root().unwrap(), (c.clone(), 1));
        assert_eq!(w("x3 x1 x2 x1 x2 x3^-1").primitive_root().unwrap(), (w("x3 x1 x2 x3^-1"), 2));
        assert_eq!(Word::empty().primitive_root(), Err(Error::EmptyRoot));
    }

    #[test]
    fn proper_power_examples() {
        assert!(w("x1^2").is_proper_power());
        assert!(!w("x1").is_proper_power());
        assert!(!Word::empty().is_proper_power());
        assert!(!w("x1 x2 x1").is_proper_power());
    }

    #[test]
    fn kmp_helpers() {
        assert_eq!(failure_function(&[1, 2, 1, 2, 1]), vec![0, 0, 1, 2, 3]);
        assert_eq!(find_occurrence(&[1, 2, 3, 1, 2, 3], &[3, 1]), Some(2));
        assert_eq!(find_occurrence(&[1, 2, 3], &[2, 2]), None);
    }
}
