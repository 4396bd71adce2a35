//! Words over surface-group generators `a1, b1, ..., ag, bg`.
//!
//! Letters are generator indices with a sign; words freely reduce by
//! cancelling adjacent inverse pairs. Group-level identities (the surface
//! relation) are handled by the amalgam normal form, not here.

use crate::error::{Error, Result};
use std::fmt;

/// One generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    /// Generator index: `0..g` are `a1..ag`, `g..2g` are `b1..bg`.
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Self {
        Letter { gen, inv }
    }

    pub fn inverse(&self) -> Self {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }

    pub fn cancels(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.inv != other.inv
    }
}

/// Freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut w = Word::empty();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Push with free cancellation.
    pub fn push(&mut self, l: Letter) {
        if self.0.last().is_some_and(|last| last.cancels(&l)) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k >= 0 { self.clone() } else { self.inverse() };
        let mut w = Word::empty();
        for _ in 0..k.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    /// Commutator `[x, y] = x y x^-1 y^-1` of single generators.
    pub fn commutator(x: usize, y: usize) -> Word {
        Word(vec![
            Letter::new(x, false),
            Letter::new(y, false),
            Letter::new(x, true),
            Letter::new(y, true),
        ])
    }
}

/// Naming scheme for a genus-g surface group: generators `a1..ag, b1..bg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alphabet {
    pub genus: usize,
}

impl Alphabet {
    pub fn new(genus: usize) -> Self {
        Alphabet { genus }
    }

    pub fn gen_count(&self) -> usize {
        2 * self.genus
    }

    pub fn name(&self, gen: usize) -> String {
        if gen < self.genus {
            format!("a{}", gen + 1)
        } else {
            format!("b{}", gen - self.genus + 1)
        }
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        let (kind, num) = name.split_at(1);
        let k: usize = num
            .parse()
            .map_err(|_| Error::UnknownGenerator(name.to_string()))?;
        if k == 0 || k > self.genus {
            return Err(Error::UnknownGenerator(name.to_string()));
        }
        match kind {
            "a" => Ok(k - 1),
            "b" => Ok(self.genus + k - 1),
            _ => Err(Error::UnknownGenerator(name.to_string())),
        }
    }

    /// Parse whitespace-separated letters with optional `^-1` exponents,
    /// e.g. `"a1 b1 a1^-1 b1^-1"`.
    pub fn parse(&self, text: &str) -> Result<Word> {
        let mut w = Word::empty();
        for tok in text.split_whitespace() {
            let (name, inv) = match tok.split_once('^') {
                None => (tok, false),
                Some((n, "-1")) => (n, true),
                Some((n, "1")) => (n, false),
                Some((_, e)) => {
                    return Err(Error::WordParse(format!(
                        "unsupported exponent `{e}` in `{tok}`"
                    )))
                }
            };
            w.push(Letter::new(self.index(name)?, inv));
        }
        Ok(w)
    }

    pub fn format(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.0.iter()
            .map(|l| {
                if l.inv {
                    format!("{}^-1", self.name(l.gen))
                } else {
                    self.name(l.gen)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Full surface relator `prod_i [a_i, b_i]`.
    pub fn surface_relator(&self) -> Word {
        let mut w = Word::empty();
        for i in 0..self.genus {
            w = w.concat(&Word::commutator(i, self.genus + i));
        }
        w
    }
}

/// Depth-first enumeration of freely reduced words over a subset of
/// generators, calling `visit(word)` for every nonempty word with
/// `1 <= len <= max_len`. The visitor sees words in prefix order, so callers
/// can maintain incremental data (e.g. matrix products) cheaply via the
/// returned depth deltas; here we simply rebuild from the word.
pub fn for_each_reduced_word<F: FnMut(&Word)>(gens: &[usize], max_len: usize, mut visit: F) {
    let letters: Vec<Letter> = gens
        .iter()
        .flat_map(|&g| [Letter::new(g, false), Letter::new(g, true)])
        .collect();
    let mut stack: Vec<Letter> = Vec::with_capacity(max_len);
    fn rec<F: FnMut(&Word)>(
        letters: &[Letter],
        stack: &mut Vec<Letter>,
        max_len: usize,
        visit: &mut F,
    ) {
        if stack.len() == max_len {
            return;
        }
        for &l in letters {
            if stack.last().is_some_and(|last| last.cancels(&l)) {
                continue;
            }
            stack.push(l);
            visit(&Word(stack.clone()));
            rec(letters, stack, max_len, visit);
            stack.pop();
        }
    }
    rec(&letters, &mut stack, max_len, &mut visit);
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "g{}{}", l.gen, if l.inv { "'" } else { "" })?;
        }
        Ok(())
    }
}
