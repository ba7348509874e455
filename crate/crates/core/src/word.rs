//! Words in the free group over a finite generator alphabet.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write as _;

/// One generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub const fn positive(generator: usize) -> Self {
        Self::new(generator, false)
    }

    pub const fn negative(generator: usize) -> Self {
        Self::new(generator, true)
    }

    pub const fn inverted(self) -> Self {
        Self::new(self.generator, !self.inverse)
    }

    /// +1 or −1.
    pub const fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Position in the alphabet `g₀, g₀⁻¹, g₁, g₁⁻¹, …`.
    pub const fn rank_key(self) -> usize {
        2 * self.generator + self.inverse as usize
    }

    pub fn from_rank_key(key: usize) -> Self {
        Self::new(key / 2, key % 2 == 1)
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank_key().cmp(&other.rank_key())
    }
}

/// A freely reduced word. Letters are read left to right as a composition,
/// so `[a, b]` denotes `a ∘ b`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a word and freely reduces it.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for letter in letters {
            if out.last() == Some(&letter.inverted()) {
                out.pop();
            } else {
                out.push(letter);
            }
        }
        Self { letters: out }
    }

    /// Builds a word from `(generator, sign)` pairs, sign being ±1.
    pub fn from_signed(pairs: &[(usize, i8)]) -> Self {
        Self::new(pairs.iter().map(|&(g, s)| Letter::new(g, s < 0)))
    }

    pub fn single(letter: Letter) -> Self {
        Self { letters: alloc::vec![letter] }
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

    /// Free reduction. A no-op on values built through the constructors.
    pub fn reduced(&self) -> Self {
        Self::new(self.letters.iter().copied())
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inverted())
    }

    pub fn inverse(&self) -> Self {
        Self { letters: self.letters.iter().rev().map(|l| l.inverted()).collect() }
    }

    /// Reduced concatenation `self · other`.
    pub fn concat(&self, other: &Self) -> Self {
        Self::new(self.letters.iter().chain(&other.letters).copied())
    }

    /// Reduced `selfⁿ`, with negative `n` meaning powers of the inverse.
    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `self · letter`, reduced.
    pub fn push(&self, letter: Letter) -> Self {
        let mut letters = self.letters.clone();
        if letters.last() == Some(&letter.inverted()) {
            letters.pop();
        } else {
            letters.push(letter);
        }
        Self { letters }
    }

    /// `letter · self`, reduced.
    pub fn prepend(&self, letter: Letter) -> Self {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        if self.letters.first() == Some(&letter.inverted()) {
            letters.extend_from_slice(&self.letters[1..]);
        } else {
            letters.push(letter);
            letters.extend_from_slice(&self.letters);
        }
        Self { letters }
    }

    /// Largest generator index referenced, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }

    /// Dotted rendering such as `a.b^-1`; the empty word renders as `""`.
    pub fn render(&self, names: &[impl AsRef<str>]) -> String {
        let mut out = String::new();
        for (i, letter) in self.letters.iter().enumerate() {
            if i > 0 {
                out.push('.');
            }
            match names.get(letter.generator) {
                Some(name) => out.push_str(name.as_ref()),
                None => {
                    let _ = write!(out, "g{}", letter.generator);
                }
            }
            if letter.inverse {
                out.push_str("^-1");
            }
        }
        out
    }

    /// Parses the [`render`](Self::render) format back into a reduced word.
    pub fn parse(text: &str, names: &[impl AsRef<str>]) -> Option<Self> {
        if text.is_empty() {
            return Some(Self::empty());
        }
        let mut letters = Vec::new();
        for token in text.split('.') {
            let (name, inverse) = match token.strip_suffix("^-1") {
                Some(stem) => (stem, true),
                None => (token, false),
            };
            let generator = names.iter().position(|n| n.as_ref() == name)?;
            letters.push(Letter::new(generator, inverse));
        }
        Some(Self::new(letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex: shorter words first, then lexicographic in letter order.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.letters.cmp(&other.letters))
    }
}
