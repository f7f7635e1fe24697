//! Representations of finitely presented groups into lifted circle maps.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::word::{alphabet, Letter, Word};
use super::{canonical_equal, LiftedCircleMap};
use crate::error::{Error, Result};

/// Tolerance for relators to evaluate to a power of `Z`.
pub const RELATOR_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct GroupRepresentation {
    generators: BTreeMap<String, LiftedCircleMap>,
    inverses: BTreeMap<String, LiftedCircleMap>,
    relators: Vec<Word>,
}

impl GroupRepresentation {
    pub fn new(generators: BTreeMap<String, LiftedCircleMap>, relators: Vec<Word>) -> Result<Self> {
        for name in generators.keys() {
            if name.is_empty() || name.chars().any(|c| c.is_ascii_uppercase()) {
                return Err(Error::Parse(format!("generator name `{name}` must be lowercase")));
            }
        }
        let inverses = generators.iter().map(|(k, v)| (k.clone(), v.inverse())).collect();
        let rep = GroupRepresentation { generators, inverses, relators };
        for r in &rep.relators {
            let f = rep.evaluate(r)?;
            let k = f.eval(0.0).round() as i64;
            if !canonical_equal(&f, &LiftedCircleMap::translation(k), RELATOR_TOL) {
                return Err(Error::InvalidMap(format!("relator `{r}` is not a power of Z")));
            }
        }
        Ok(rep)
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.keys().cloned().collect()
    }

    pub fn generators(&self) -> &BTreeMap<String, LiftedCircleMap> {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn letter(&self, l: &Letter) -> Result<&LiftedCircleMap> {
        let table = if l.inverse { &self.inverses } else { &self.generators };
        table.get(&l.name).ok_or_else(|| Error::UnknownGenerator(l.name.clone()))
    }

    /// The maps of the letters of `w`, left to right.
    pub fn chain(&self, w: &Word) -> Result<Vec<LiftedCircleMap>> {
        w.letters.iter().map(|l| self.letter(l).cloned()).collect()
    }

    /// The composite map `w1 ∘ w2 ∘ … ∘ wn`.
    pub fn evaluate(&self, w: &Word) -> Result<LiftedCircleMap> {
        let mut acc = LiftedCircleMap::identity();
        for l in &w.letters {
            acc = acc.compose(self.letter(l)?);
        }
        Ok(acc)
    }

    /// `n ×` rescaling of every generator.
    pub fn rescale(&self, n: u32) -> Result<GroupRepresentation> {
        let gens = self.generators.iter().map(|(k, v)| (k.clone(), v.rescale(n))).collect();
        // relators map to powers of Z^(1/n), so they are not carried over
        GroupRepresentation::new(gens, Vec::new())
    }

    /// Visits every freely reduced word of length `1..=max_len` with its map.
    ///
    /// Words sharing a prefix share the composition work. Results are returned
    /// in shortlex order of the alphabet regardless of scheduling.
    pub fn map_reduced_words<T, F>(&self, max_len: usize, visit: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&Word, &LiftedCircleMap) -> Option<T> + Sync,
    {
        let alpha = alphabet(&self.generator_names());
        let per_first: Vec<Vec<(Word, T)>> = alpha
            .par_iter()
            .map(|first| {
                let mut out = Vec::new();
                if max_len == 0 {
                    return out;
                }
                let map = self.letter(first).expect("alphabet letters resolve").clone();
                let word = Word { letters: vec![first.clone()] };
                self.descend(&alpha, word, map, max_len, &visit, &mut out);
                out
            })
            .collect();
        let mut all: Vec<(Word, T)> = per_first.into_iter().flatten().collect();
        let index = |l: &Letter| alpha.iter().position(|a| a == l).expect("known letter");
        all.sort_by(|(a, _), (b, _)| {
            a.len().cmp(&b.len()).then_with(|| {
                a.letters.iter().map(index).cmp(b.letters.iter().map(index))
            })
        });
        all.into_iter().map(|(_, t)| t).collect()
    }

    fn descend<T, F>(
        &self,
        alpha: &[Letter],
        word: Word,
        map: LiftedCircleMap,
        max_len: usize,
        visit: &F,
        out: &mut Vec<(Word, T)>,
    ) where
        F: Fn(&Word, &LiftedCircleMap) -> Option<T>,
    {
        if let Some(t) = visit(&word, &map) {
            out.push((word.clone(), t));
        }
        if word.len() == max_len {
            return;
        }
        let last = word.letters.last().expect("nonempty").clone();
        for l in alpha {
            if l.name == last.name && l.inverse != last.inverse {
                continue;
            }
            let next = map.compose(self.letter(l).expect("alphabet letters resolve"));
            let mut w = word.clone();
            w.letters.push(l.clone());
            self.descend(alpha, w, next, max_len, visit, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotations() -> GroupRepresentation {
        let mut g = BTreeMap::new();
        g.insert("a".to_string(), LiftedCircleMap::rotation_rational(1, 3));
        g.insert("b".to_string(), LiftedCircleMap::rotation(0.123));
        GroupRepresentation::new(g, vec![Word::parse("a b A B").unwrap()]).unwrap()
    }

    #[test]
    fn inverse_pair_is_identity() {
        let rep = rotations();
        let f = rep.evaluate(&Word::parse("a A").unwrap()).unwrap();
        assert!(canonical_equal(&f, &LiftedCircleMap::identity(), 0.0));
    }

    #[test]
    fn commutator_of_rotations_is_identity() {
        let rep = rotations();
        let f = rep.evaluate(&Word::parse("a b A B").unwrap()).unwrap();
        assert!(canonical_equal(&f, &LiftedCircleMap::identity(), 1e-15));
    }

    #[test]
    fn unknown_generator_is_reported() {
        let rep = rotations();
        match rep.evaluate(&Word::parse("a c").unwrap()) {
            Err(Error::UnknownGenerator(name)) => assert_eq!(name, "c"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_relator_is_rejected() {
        let mut g = BTreeMap::new();
        g.insert("a".to_string(), LiftedCircleMap::rotation_rational(1, 3));
        assert!(GroupRepresentation::new(g, vec![Word::parse("a").unwrap()]).is_err());
    }

    #[test]
    fn word_enumeration_is_ordered_and_complete() {
        let rep = rotations();
        let seen = rep.map_reduced_words(3, |w, f| Some((w.to_string(), f.eval(0.0))));
        assert_eq!(seen.len(), 52);
        assert_eq!(seen[0].0, "a");
        assert_eq!(seen[4].0, "a a");
        for (w, v) in &seen {
            let f = rep.evaluate(&Word::parse(w).unwrap()).unwrap();
            assert!((f.eval(0.0) - v).abs() < 1e-12);
        }
    }
}
