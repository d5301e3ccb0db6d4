//! Reduced words in the free group on two generators `y1`, `y2`, the
//! Fibonacci automorphism `y1 → y2, y2 → y1 y2`, the commutator
//! `K = y1 y2 y1⁻¹ y2⁻¹`, and evaluation of words into symplectic matrices.
//!
//! Words are evaluated left to right: `y1 y2` becomes `g1 · g2`.
//!
//! Fibonacci words are indexed from zero: `fibonacci_word(0) = y1`,
//! `fibonacci_word(1) = y2`, `fibonacci_word(2) = y1 y2`, ...

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::symplectic::SymplecticMatrix;

/// Maximum conjugator length tried by [`nielsen_image_form`].
pub const NIELSEN_SEARCH_BOUND: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Y1,
    Y2,
}

impl Generator {
    /// 1 for `y1`, 2 for `y2`.
    pub fn index(self) -> u8 {
        match self {
            Generator::Y1 => 1,
            Generator::Y2 => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: Generator,
    pub inverted: bool,
}

impl Letter {
    pub const Y1: Letter = Letter::new(Generator::Y1, false);
    pub const Y2: Letter = Letter::new(Generator::Y2, false);
    pub const Y1_INV: Letter = Letter::new(Generator::Y1, true);
    pub const Y2_INV: Letter = Letter::new(Generator::Y2, true);

    pub const fn new(generator: Generator, inverted: bool) -> Self {
        Self {
            generator,
            inverted,
        }
    }

    /// +1 or -1.
    pub fn exponent(self) -> i8 {
        if self.inverted {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Self {
            generator: self.generator,
            inverted: !self.inverted,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverted != other.inverted
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y{}", self.generator.index())?;
        if self.inverted {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

/// A freely reduced word. The empty word is the identity `e`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(g: Generator) -> Self {
        Self {
            letters: vec![Letter::new(g, false)],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Word length after reduction.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// First `n` letters (clamped to the word length).
    pub fn prefix(&self, n: usize) -> Self {
        Self {
            letters: self.letters[..n.min(self.len())].to_vec(),
        }
    }

    /// Appends one letter, cancelling against the tail.
    pub fn push(&mut self, letter: Letter) {
        match self.letters.last() {
            Some(&last) if last.cancels(letter) => {
                self.letters.pop();
            }
            _ => self.letters.push(letter),
        }
    }

    /// Appends a word, cancelling across the junction.
    pub fn extend_reduced(&mut self, other: &Word) {
        let mut rest = other.letters.as_slice();
        while let (Some(&last), Some((&first, tail))) = (self.letters.last(), rest.split_first()) {
            if !last.cancels(first) {
                break;
            }
            self.letters.pop();
            rest = tail;
        }
        self.letters.extend_from_slice(rest);
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }
}

impl Mul<&Word> for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        let mut out = self.clone();
        out.extend_reduced(rhs);
        out
    }
}

impl fmt::Display for Word {
    /// Letters separated by single spaces; the identity prints as `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse word token `{0}` (expected y1, y2, y1^-1 or y2^-1)")]
pub struct ParseWordError(pub String);

impl FromStr for Word {
    type Err = ParseWordError;

    /// Parses the [`Display`](fmt::Display) format; `e` or an empty string
    /// is the identity.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            let letter = match token {
                "e" => continue,
                "y1" => Letter::Y1,
                "y2" => Letter::Y2,
                "y1^-1" => Letter::Y1_INV,
                "y2^-1" => Letter::Y2_INV,
                other => return Err(ParseWordError(other.to_string())),
            };
            letters.push(letter);
        }
        Ok(reduce(letters))
    }
}

/// Free reduction by a single left-to-right stack pass.
pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
    let mut word = Word::identity();
    for l in letters {
        word.push(l);
    }
    word
}

impl FromIterator<Letter> for Word {
    /// Collects with free reduction, like [`reduce`].
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        reduce(iter)
    }
}

/// An endomorphism of F2 given by the images of the generators.
///
/// Invertibility is checked for the built-in maps only; a user-supplied pair
/// of images is taken on trust.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    image_y1: Word,
    image_y2: Word,
}

impl Automorphism {
    pub fn new(image_y1: Word, image_y2: Word) -> Self {
        Self { image_y1, image_y2 }
    }

    pub fn identity() -> Self {
        Self::new(
            Word::generator(Generator::Y1),
            Word::generator(Generator::Y2),
        )
    }

    /// `y1 → y2, y2 → y1 y2`.
    pub fn fibonacci() -> Self {
        Self::new(
            Word::generator(Generator::Y2),
            reduce([Letter::Y1, Letter::Y2]),
        )
    }

    /// `y1 → y2 y1⁻¹, y2 → y1`.
    pub fn fibonacci_inverse() -> Self {
        Self::new(
            reduce([Letter::Y2, Letter::Y1_INV]),
            Word::generator(Generator::Y1),
        )
    }

    pub fn image(&self, g: Generator) -> &Word {
        match g {
            Generator::Y1 => &self.image_y1,
            Generator::Y2 => &self.image_y2,
        }
    }

    pub fn apply(&self, w: &Word) -> Word {
        apply_with_images([&self.image_y1, &self.image_y2], w)
    }

    pub fn power(&self, n: usize) -> IteratedAutomorphism {
        IteratedAutomorphism {
            base: self.clone(),
            power: n,
        }
    }
}

fn apply_with_images(images: [&Word; 2], w: &Word) -> Word {
    let inverses = [images[0].inverse(), images[1].inverse()];
    let mut out = Word::identity();
    for l in w.letters() {
        let idx = (l.generator.index() - 1) as usize;
        if l.inverted {
            out.extend_reduced(&inverses[idx]);
        } else {
            out.extend_reduced(images[idx]);
        }
    }
    out
}

/// `φⁿ` kept as (base, n). Generator images are built one power at a time
/// and the word is then mapped homomorphically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IteratedAutomorphism {
    base: Automorphism,
    power: usize,
}

impl IteratedAutomorphism {
    pub fn base(&self) -> &Automorphism {
        &self.base
    }

    pub fn power(&self) -> usize {
        self.power
    }

    /// `(φⁿ(y1), φⁿ(y2))`, using `φᵏ(y) = φᵏ⁻¹(φ(y))`.
    pub fn generator_images(&self) -> (Word, Word) {
        let mut y1 = Word::generator(Generator::Y1);
        let mut y2 = Word::generator(Generator::Y2);
        for _ in 0..self.power {
            let next1 = apply_with_images([&y1, &y2], &self.base.image_y1);
            let next2 = apply_with_images([&y1, &y2], &self.base.image_y2);
            y1 = next1;
            y2 = next2;
        }
        (y1, y2)
    }

    pub fn apply(&self, w: &Word) -> Word {
        let (y1, y2) = self.generator_images();
        apply_with_images([&y1, &y2], w)
    }
}

/// Types that map words of F2 to words of F2.
pub trait WordMap {
    fn map_word(&self, w: &Word) -> Word;
}

impl WordMap for Automorphism {
    fn map_word(&self, w: &Word) -> Word {
        self.apply(w)
    }
}

impl WordMap for IteratedAutomorphism {
    fn map_word(&self, w: &Word) -> Word {
        self.apply(w)
    }
}

pub fn apply_automorphism<M: WordMap + ?Sized>(phi: &M, w: &Word) -> Word {
    phi.map_word(w)
}

/// `(φ_fibo)ⁿ(y1)`. Lengths run 1, 1, 2, 3, 5, 8, ...
pub fn fibonacci_word(n: usize) -> Word {
    // φⁿ(y1) = w2, φⁿ(y2) = w1 w2 with (w1, w2) the images at step n-1
    let mut w1 = Word::generator(Generator::Y1);
    let mut w2 = Word::generator(Generator::Y2);
    for _ in 0..n {
        let next2 = &w1 * &w2;
        w1 = std::mem::replace(&mut w2, next2);
    }
    w1
}

/// Reduced `u v u⁻¹ v⁻¹`.
pub fn commutator(u: &Word, v: &Word) -> Word {
    let mut out = u * v;
    out.extend_reduced(&u.inverse());
    out.extend_reduced(&v.inverse());
    out
}

/// `K = y1 y2 y1⁻¹ y2⁻¹`.
pub fn nielsen_commutator() -> Word {
    commutator(
        &Word::generator(Generator::Y1),
        &Word::generator(Generator::Y2),
    )
}

/// Finds `(w, s)` with `φ(K) = w K^s w⁻¹`, `s = ±1`.
///
/// Any such image reduces to `u c u⁻¹` with `c` a cyclic rotation of
/// `K^s`; a rotation is `r⁻¹ K^s r` for a proper prefix `r` of `K^s`, so the
/// conjugators tried are `u r⁻¹` over prefixes `u` of the image of length
/// at most [`NIELSEN_SEARCH_BOUND`]. The shortest hit is returned.
pub fn nielsen_image_form<M: WordMap + ?Sized>(phi: &M) -> Result<(Word, i8)> {
    let k = nielsen_commutator();
    let image = phi.map_word(&k);
    let max_prefix = image.len().min(NIELSEN_SEARCH_BOUND);

    let mut best: Option<(Word, i8)> = None;
    for sign in [1i8, -1] {
        let core = if sign == 1 { k.clone() } else { k.inverse() };
        for u_len in 0..=max_prefix {
            let u = image.prefix(u_len);
            for r_len in 0..core.len() {
                let w = &u * &core.prefix(r_len).inverse();
                if w.len() > NIELSEN_SEARCH_BOUND {
                    continue;
                }
                let candidate = &(&w * &core) * &w.inverse();
                if candidate == image && best.as_ref().is_none_or(|(b, _)| w.len() < b.len()) {
                    best = Some((w, sign));
                }
            }
        }
    }
    best.ok_or(Error::NielsenFormNotFound {
        bound: NIELSEN_SEARCH_BOUND,
    })
}

/// Image of `w` under `y1 → g1, y2 → g2`, multiplied left to right.
pub fn evaluate(w: &Word, g1: &SymplecticMatrix, g2: &SymplecticMatrix) -> SymplecticMatrix {
    let table = [*g1, g1.inverse(), *g2, g2.inverse()];
    w.letters()
        .iter()
        .fold(SymplecticMatrix::identity(), |acc, l| {
            let idx = 2 * (l.generator.index() - 1) as usize + usize::from(l.inverted);
            acc * table[idx]
        })
}
