//! Group words: space-separated generator names, uppercase for inverses.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub name: String,
    pub inverse: bool,
}

impl Letter {
    pub fn new(name: &str, inverse: bool) -> Self {
        Letter { name: name.to_string(), inverse }
    }

    pub fn inverted(&self) -> Letter {
        Letter { name: self.name.clone(), inverse: !self.inverse }
    }

    /// Parses `a1` (generator) or `A1` (its inverse).
    pub fn parse(token: &str) -> Result<Letter> {
        let first = token
            .chars()
            .next()
            .ok_or_else(|| Error::Parse("empty letter".into()))?;
        if !first.is_ascii_alphabetic() || !token.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::Parse(format!("bad letter `{token}`")));
        }
        Ok(Letter { name: token.to_ascii_lowercase(), inverse: first.is_ascii_uppercase() })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            let mut chars = self.name.chars();
            if let Some(c) = chars.next() {
                write!(f, "{}{}", c.to_ascii_uppercase(), chars.as_str())?;
            }
            Ok(())
        } else {
            f.write_str(&self.name)
        }
    }
}

/// Product `w1 w2 … wn`, acting as `w1 ∘ w2 ∘ … ∘ wn`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn parse(text: &str) -> Result<Word> {
        let letters = text.split_whitespace().map(Letter::parse).collect::<Result<Vec<_>>>()?;
        Ok(Word { letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(Letter::inverted).collect() }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { letters }.reduced()
    }

    /// `self other self⁻¹ other⁻¹`.
    pub fn commutator(&self, other: &Word) -> Word {
        self.concat(other).concat(&self.inverse()).concat(&other.inverse())
    }

    /// Free reduction: cancels adjacent `x X` pairs.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            if out.last().is_some_and(|last| last.name == l.name && last.inverse != l.inverse) {
                out.pop();
            } else {
                out.push(l.clone());
            }
        }
        Word { letters: out }
    }

    pub fn is_reduced(&self) -> bool {
        self.letters
            .windows(2)
            .all(|w| !(w[0].name == w[1].name && w[0].inverse != w[1].inverse))
    }

    /// Reduced and with first letter not cancelling the last.
    pub fn is_cyclically_reduced(&self) -> bool {
        self.is_reduced()
            && match (self.letters.first(), self.letters.last()) {
                (Some(a), Some(b)) if self.letters.len() > 1 => !(a.name == b.name && a.inverse != b.inverse),
                _ => true,
            }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Alphabet of generators and their inverses, in a fixed order.
pub fn alphabet(generators: &[String]) -> Vec<Letter> {
    let mut out = Vec::with_capacity(2 * generators.len());
    for g in generators {
        out.push(Letter::new(g, false));
    }
    for g in generators {
        out.push(Letter::new(g, true));
    }
    out
}

/// All freely reduced words of length `1..=max_len`, shortlex ordered by alphabet index.
pub fn reduced_words(generators: &[String], max_len: usize) -> Vec<Word> {
    let alpha = alphabet(generators);
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in &alpha {
                if w.letters.last().is_some_and(|last| last.name == l.name && last.inverse != l.inverse) {
                    continue;
                }
                let mut letters = w.letters.clone();
                letters.push(l.clone());
                next.push(Word { letters });
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
