//! Decision procedures on explicit words: commutation, cyclicity of a generated
//! subgroup, conjugacy of single words and simultaneous conjugacy of tuples.

use alloc::vec::Vec;

use crate::word::find_occurrence;
use crate::{Error, Result, Word};

/// `words[i] = root^exponents[i]`. The root is empty only for an all-empty tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicWitness {
    pub root: Word,
    pub exponents: Vec<i64>,
}

impl CyclicWitness {
    /// Re-checks the witness with [`Word::power`].
    pub fn verify(&self, words: &[Word]) -> bool {
        words.len() == self.exponents.len()
            && words.iter().zip(&self.exponents).all(|(w, &e)| self.root.power(e) == *w)
    }
}

/// Two elements of a free group commute iff their commutator is trivial.
pub fn commutes(a: &Word, b: &Word) -> bool {
    Word::commutator(a, b).is_empty()
}

/// Witness that all entries are powers of one primitive root, or `None`.
///
/// The root is oriented so that the first non-empty entry has a positive exponent.
pub fn is_cyclic_tuple(words: &[Word]) -> Option<CyclicWitness> {
    let Some(first) = words.iter().find(|w| !w.is_empty()) else {
        return Some(CyclicWitness { root: Word::empty(), exponents: alloc::vec![0; words.len()] });
    };
    let (root, _) = first.primitive_root().ok()?;
    let root_inv = root.inverse();
    let mut exponents = Vec::with_capacity(words.len());
    for w in words {
        if w.is_empty() {
            exponents.push(0);
            continue;
        }
        let (r, e) = w.primitive_root().ok()?;
        if r == root {
            exponents.push(e as i64);
        } else if r == root_inv {
            exponents.push(-(e as i64));
        } else {
            return None;
        }
    }
    Some(CyclicWitness { root, exponents })
}

/// Some `Z` with `Z x Z^-1 = y`, found by locating one cyclic core inside the
/// doubled other core.
pub fn conjugator_word(x: &Word, y: &Word) -> Option<Word> {
    let (cx, gx) = x.cyclic_reduce();
    let (cy, gy) = y.cyclic_reduce();
    if cx.len() != cy.len() {
        return None;
    }
    if cx.is_empty() {
        return Some(Word::empty());
    }
    let doubled: Vec<_> = cx.letters().iter().chain(cx.letters()).copied().collect();
    let r = find_occurrence(&doubled, cy.letters())?;
    // cy = P^-1 cx P with P = cx[..r]
    let p = Word::reduce(cx.letters()[..r].iter().copied());
    let z = gy.concat(&p.inverse()).concat(&gx.inverse());
    debug_assert_eq!(conjugate(&z, x), *y);
    Some(z)
}

/// `s w s^-1`.
pub fn conjugate(s: &Word, w: &Word) -> Word {
    s.concat(w).concat(&s.inverse())
}

/// Generator of the (cyclic) centralizer of a non-empty word: its primitive root.
pub fn centralizer_gen(w: &Word) -> Result<Word> {
    Ok(w.primitive_root()?.0)
}

/// One `S` with `S xs[i] S^-1 = ys[i]` for every `i`, or `None`.
///
/// The first non-empty coordinate fixes `S = Z0 r^t` with `r` the primitive root of
/// that coordinate. A coordinate not commuting with `r` admits at most one `t`,
/// searched in a range outside of which conjugation by `r^t` only grows length.
pub fn conjugator_tuple(xs: &[Word], ys: &[Word]) -> Result<Option<Word>> {
    if xs.len() != ys.len() {
        return Err(Error::Arity { expected: xs.len(), got: ys.len() });
    }
    let Some(i) = xs.iter().position(|w| !w.is_empty()) else {
        return Ok(ys.iter().all(Word::is_empty).then(Word::empty));
    };
    let Some(z0) = conjugator_word(&xs[i], &ys[i]) else {
        return Ok(None);
    };
    let r = centralizer_gen(&xs[i])?;
    let (_, g) = r.cyclic_reduce();
    let z0_inv = z0.inverse();
    let mut t: Option<i64> = None;
    for (x, y) in xs.iter().zip(ys) {
        // need r^t x r^-t = Z0^-1 y Z0
        let target = conjugate(&z0_inv, y);
        if commutes(&r, x) {
            if *x != target {
                return Ok(None);
            }
            continue;
        }
        if let Some(t0) = t {
            if conjugate(&r.power(t0), x) != target {
                return Ok(None);
            }
            continue;
        }
        let bound = (x.len() + target.len() + 3 * g.len() + 2) as i64;
        match (-bound..=bound).find(|&s| conjugate(&r.power(s), x) == target) {
            Some(s) => t = Some(s),
            None => return Ok(None),
        }
    }
    let s = z0.concat(&r.power(t.unwrap_or(0)));
    debug_assert!(xs.iter().zip(ys).all(|(x, y)| conjugate(&s, x) == *y));
    Ok(Some(s))
}
