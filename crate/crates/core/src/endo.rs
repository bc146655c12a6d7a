//! Endomorphisms of `F_m` given by generator images.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::expr::{Kind, LIT_CHUNK};
use crate::word::Letter;
use crate::group::{conjugate, is_cyclic_tuple};
use crate::{Error, Expr, Rank, Result, Word};

/// `images[i]` is the image of `x_{i+1}`. Two endomorphisms are equal iff all images are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Endo {
    images: Vec<Word>,
}

impl Endo {
    pub fn new(images: Vec<Word>) -> Result<Self> {
        let rank = Rank::new(images.len() as u32)?;
        for w in &images {
            w.check_rank(rank)?;
        }
        Ok(Endo { images })
    }

    pub fn identity(rank: Rank) -> Self {
        Endo { images: (1..=rank.get()).map(Word::generator).collect() }
    }

    pub fn rank(&self) -> Rank {
        Rank::new(self.images.len() as u32).expect("validated on construction")
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Image of `x_i`, 1-based.
    pub fn image(&self, i: u32) -> &Word {
        &self.images[i as usize - 1]
    }

    fn check(&self, max_gen: u32) -> Result<()> {
        let m = self.images.len() as u32;
        if max_gen > m {
            return Err(Error::GeneratorOutOfRange { index: max_gen, rank: m });
        }
        Ok(())
    }

    pub fn apply_word(&self, w: &Word) -> Result<Word> {
        self.check(w.max_generator())?;
        let mut letters = Vec::new();
        for &l in w.letters() {
            let img = self.image(l.generator());
            if l.is_positive() {
                letters.extend_from_slice(img.letters());
            } else {
                letters.extend(img.letters().iter().rev().map(|x| x.inverse()));
            }
        }
        Ok(Word::reduce(letters))
    }

    /// Substitutes at literal leaves; concatenations, powers and inversions are kept,
    /// and shared nodes are mapped once.
    pub fn apply(&self, e: &Expr) -> Result<Expr> {
        let gens: Vec<Expr> = self.images.iter().map(Expr::lit).collect();
        substitute(e, &gens)
    }

    /// Is the image subgroup `<images>` cyclic?
    pub fn image_is_cyclic(&self) -> bool {
        is_cyclic_tuple(&self.images).is_some()
    }

    /// `f ∘ g`: apply `g` first.
    pub fn compose(f: &Endo, g: &Endo) -> Result<Endo> {
        if f.images.len() != g.images.len() {
            return Err(Error::Arity { expected: f.images.len(), got: g.images.len() });
        }
        let images = g.images.iter().map(|w| f.apply_word(w)).collect::<Result<_>>()?;
        Ok(Endo { images })
    }

    /// `"x2; x1 x2 x1^-1"`, one image per generator.
    pub fn parse(text: &str, rank: Rank) -> Result<Endo> {
        let parts: Vec<&str> = text.split(';').collect();
        if parts.len() != rank.get() as usize {
            return Err(Error::Arity { expected: rank.get() as usize, got: parts.len() });
        }
        let images = parts.iter().map(|p| Word::parse(p.trim(), rank)).collect::<Result<_>>()?;
        Ok(Endo { images })
    }
}

impl fmt::Display for Endo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// `e(images[0], images[1], ...)`: the endomorphism `x_i -> images[i-1]` applied to
/// `e`, with the images given as expressions. Shared nodes are mapped once.
pub fn substitute(e: &Expr, images: &[Expr]) -> Result<Expr> {
    let m = images.len() as u32;
    if e.max_generator() > m {
        return Err(Error::GeneratorOutOfRange { index: e.max_generator(), rank: m });
    }
    let mut memo = BTreeMap::new();
    Ok(substitute_rec(e, images, &mut memo))
}

fn substitute_rec(e: &Expr, images: &[Expr], memo: &mut BTreeMap<usize, Expr>) -> Expr {
    let image = match memo.get(&e.node_id()) {
        Some(img) => img.clone(),
        None => {
            let img = match e.kind() {
                Kind::Lit(w) => substitute_lit(w, images),
                Kind::Cat(children) => {
                    let parts: Vec<Expr> = children.iter().map(|c| substitute_rec(c, images, memo)).collect();
                    Expr::product(&parts)
                }
                Kind::Pow(base, k) => substitute_rec(base, images, memo).pow_u64(*k),
            };
            memo.insert(e.node_id(), img.clone());
            img
        }
    };
    if e.is_inverted() {
        image.inv()
    } else {
        image
    }
}

/// Short images are multiplied out letter by letter, long ones enter as powers,
/// one per run of equal letters.
fn substitute_lit(w: &Word, images: &[Expr]) -> Expr {
    let image = |l: Letter| &images[l.generator() as usize - 1];
    let small: Option<Vec<Word>> = w.letters().iter().map(|&l| image(l).as_small_lit()).collect();
    if let Some(words) = small {
        if words.iter().map(|x| x.len()).sum::<usize>() <= LIT_CHUNK {
            let mut letters = Vec::new();
            for (&l, x) in w.letters().iter().zip(words) {
                if l.is_positive() {
                    letters.extend_from_slice(x.letters());
                } else {
                    letters.extend(x.letters().iter().rev().map(|y| y.inverse()));
                }
            }
            return Expr::lit(&Word::reduce(letters));
        }
    }
    let parts: Vec<Expr> = w
        .letters()
        .chunk_by(|x, y| x == y)
        .map(|run| {
            let k = run.len() as i64;
            if run[0].is_positive() { image(run[0]).pow(k) } else { image(run[0]).pow(-k) }
        })
        .collect();
    Expr::product(&parts)
}

/// `tau_S: w -> S w S^-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InnerAuto {
    pub conjugator: Word,
}

impl InnerAuto {
    pub fn new(conjugator: Word) -> Self {
        InnerAuto { conjugator }
    }

    pub fn apply_word(&self, w: &Word) -> Word {
        conjugate(&self.conjugator, w)
    }

    pub fn apply(&self, e: &Expr) -> Expr {
        let s = Expr::lit(&self.conjugator);
        Expr::product([&s, e, &s.inv()])
    }

    pub fn to_endo(&self, rank: Rank) -> Endo {
        inner(&self.conjugator, rank)
    }
}

/// The inner automorphism by `s` as an [`Endo`] of rank `m`.
pub fn inner(s: &Word, rank: Rank) -> Endo {
    Endo { images: (1..=rank.get()).map(|i| conjugate(s, &Word::generator(i))).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn r(m: u32) -> Rank {
        Rank::new(m).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(s, r(3)).unwrap()
    }

    #[test]
    fn identity_and_swap() {
        let id = Endo::identity(r(2));
        let c = Word::commutator(&Word::generator(1), &Word::generator(2));
        assert_eq!(id.apply_word(&c).unwrap(), c);
        let swap = Endo::parse("x2; x1", r(2)).unwrap();
        let expected = Word::commutator(&Word::generator(2), &Word::generator(1));
        assert_eq!(swap.apply_word(&c).unwrap(), expected);
        let e = swap.apply(&Expr::comm(&Expr::generator(1), &Expr::generator(2))).unwrap();
        assert_eq!(e.expand(100).unwrap(), expected);
    }

    #[test]
    fn compose_examples() {
        let g = Endo::parse("x2 x1; x1^2; x3^-1", r(3)).unwrap();
        assert_eq!(Endo::compose(&Endo::identity(r(3)), &g).unwrap(), g);
        let s = w("x1 x3");
        let tg = Endo::compose(&inner(&s, r(3)), &g).unwrap();
        for i in 1..=3 {
            assert_eq!(*tg.image(i), conjugate(&s, g.image(i)));
        }
        assert!(Endo::compose(&g, &Endo::identity(r(2))).is_err());
    }

    #[test]
    fn inner_examples() {
        assert_eq!(inner(&Word::empty(), r(3)), Endo::identity(r(3)));
        assert_eq!(*inner(&w("x1"), r(3)).image(2), w("x1 x2 x1^-1"));
        let s = w("x2 x3^-1 x1");
        let back = Endo::compose(&inner(&s.inverse(), r(3)), &inner(&s, r(3))).unwrap();
        assert_eq!(back, Endo::identity(r(3)));
        let tau = InnerAuto::new(s.clone());
        assert_eq!(tau.to_endo(r(3)), inner(&s, r(3)));
        assert_eq!(tau.apply(&Expr::generator(2)).expand(100).unwrap(), tau.apply_word(&w("x2")));
    }

    #[test]
    fn image_cyclic_examples() {
        assert!(!Endo::identity(r(2)).image_is_cyclic());
        assert!(Endo::parse("x1^2; x1^-1", r(2)).unwrap().image_is_cyclic());
        assert!(Endo::parse("1; 1", r(2)).unwrap().image_is_cyclic());
    }

    #[test]
    fn parse_and_display() {
        let e = Endo::parse("x2; x1 x2 x1^-1", r(2)).unwrap();
        assert_eq!(e.to_string(), "x2; x1 x2 x1^-1");
        assert_eq!(Endo::parse(&e.to_string(), r(2)).unwrap(), e);
        assert!(Endo::parse("x1", r(2)).is_err());
        assert!(Endo::parse("x3; x1", r(2)).is_err());
        assert!(Endo::new(vec![Word::generator(1)]).is_err());
    }

    #[test]
    fn rank_mismatch() {
        let e = Endo::identity(r(2));
        assert!(e.apply_word(&Word::generator(3)).is_err());
        assert!(e.apply(&Expr::generator(3)).is_err());
    }

    #[test]
    fn apply_preserves_structure_and_value() {
        let e = Endo::parse("x2 x1; x1^-1 x2", r(2)).unwrap();
        let base = Expr::comm(&Expr::generator(1), &Expr::generator(2).pow(3));
        let p = base.pow(7).cat(&Expr::generator(1)).cat(&base.pow(-2));
        let expected = e.apply_word(&p.expand(10_000).unwrap()).unwrap();
        assert_eq!(e.apply(&p).unwrap().expand(100_000).unwrap(), expected);
    }
}
