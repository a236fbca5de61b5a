//! Words in the free monoid on the generators.

use std::cmp::Ordering;
use std::fmt;

/// Index of a generator. Generator index order is the precedence order used
/// by the monomial order: index 0 is the smallest letter.
pub type Letter = u16;

/// A word together with its weighted degree.
///
/// Words are ordered degree-lexicographically: first by degree, then
/// left-lexicographically by letter index. For words of equal degree this is
/// plain left-lexicographic comparison.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
    degree: u32,
}

impl Word {
    pub fn empty() -> Word {
        Word::default()
    }

    pub fn new(letters: Vec<Letter>, weights: &[u32]) -> Word {
        let degree = letters.iter().map(|&l| weights[l as usize]).sum();
        Word { letters, degree }
    }

    pub fn letter(l: Letter, weights: &[u32]) -> Word {
        Word::new(vec![l], weights)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word {
            letters,
            degree: self.degree + other.degree,
        }
    }

    /// `left * self * right`.
    pub fn sandwich(&self, left: &Word, right: &Word) -> Word {
        let mut letters = Vec::with_capacity(left.len() + self.len() + right.len());
        letters.extend_from_slice(&left.letters);
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&right.letters);
        Word {
            letters,
            degree: left.degree + self.degree + right.degree,
        }
    }

    /// The factor `letters[start..end]`.
    pub fn factor(&self, start: usize, end: usize, weights: &[u32]) -> Word {
        Word::new(self.letters[start..end].to_vec(), weights)
    }

    /// Position of the first occurrence of `pattern` as a factor.
    pub fn find_factor(&self, pattern: &[Letter]) -> Option<usize> {
        if pattern.is_empty() {
            return Some(0);
        }
        if pattern.len() > self.len() {
            return None;
        }
        self.letters.windows(pattern.len()).position(|w| w == pattern)
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Renders the word with generator names, using `^` for runs of a letter.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.letters)
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.word.letters();
        if letters.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < letters.len() {
            let mut j = i;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let name = &self.names[letters[i] as usize];
            if j - i > 1 {
                write!(f, "{}^{}", name, j - i)?;
            } else {
                write!(f, "{name}")?;
            }
            i = j;
        }
        Ok(())
    }
}
