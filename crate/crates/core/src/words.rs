//! Bounded word rewriting for finitely presented categories.
//!
//! A [`WordSystem`] is a quiver (objects and letters) with relations between
//! paths. [`WordSystem::saturate`] enumerates every composable word up to a
//! length budget and merges words related by a single relation move. When
//! the resulting partition stops changing at the budget, the classes form a
//! finite category.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, MorId, Morphism, ObjId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub name: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

/// A path in diagrammatic order: `letters[0]` is applied first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub src: ObjId,
    pub tgt: ObjId,
    pub letters: Vec<usize>,
}

impl Word {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// `lhs ~ rhs` as paths starting at `src`; stored with `lhs` the longer side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub src: ObjId,
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
}

impl Relation {
    pub fn new(src: ObjId, a: Vec<usize>, b: Vec<usize>) -> Self {
        if a.len() >= b.len() {
            Relation { src, lhs: a, rhs: b }
        } else {
            Relation { src, lhs: b, rhs: a }
        }
    }
}

#[derive(Clone, Debug)]
pub struct WordSystem {
    pub objects: Vec<String>,
    pub letters: Vec<Letter>,
    pub relations: Vec<Relation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SaturationStatus {
    Stabilized,
    Inconclusive(String),
}

#[derive(Clone, Debug)]
pub struct Saturation {
    pub system: WordSystem,
    pub budget: usize,
    /// All composable words of length `<= budget`, ordered by length, then
    /// source, then letters. The first word of a class is its root.
    pub words: Vec<Word>,
    /// Root word index of each word.
    pub root: Vec<usize>,
    /// Class roots in increasing order; position = morphism id.
    pub classes: Vec<usize>,
    pub status: SaturationStatus,
    index: HashMap<(ObjId, Vec<usize>), usize>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Keeps the smaller index as root.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

impl WordSystem {
    /// `id_x` for the empty word, otherwise letter names joined by `*` in
    /// composition order (last letter first).
    pub fn render(&self, w: &Word) -> String {
        if w.is_empty() {
            return format!("id_{}", self.objects[w.src]);
        }
        w.letters.iter().rev().map(|&l| self.letters[l].name.as_str()).collect::<Vec<_>>().join("*")
    }

    fn enumerate(&self, budget: usize) -> Vec<Word> {
        let mut words: Vec<Word> = (0..self.objects.len()).map(|o| Word { src: o, tgt: o, letters: vec![] }).collect();
        let mut frontier = words.clone();
        for _ in 0..budget {
            let mut next = Vec::new();
            for w in &frontier {
                for (l, letter) in self.letters.iter().enumerate() {
                    if letter.src == w.tgt {
                        let mut letters = w.letters.clone();
                        letters.push(l);
                        next.push(Word { src: w.src, tgt: letter.tgt, letters });
                    }
                }
            }
            next.sort_by(|a, b| (a.src, &a.letters).cmp(&(b.src, &b.letters)));
            words.extend(next.iter().cloned());
            frontier = next;
        }
        words
    }

    /// Partition of the first `n` words (those of length `<= limit`) under
    /// relation moves staying within that set.
    fn partition(&self, words: &[Word], index: &HashMap<(ObjId, Vec<usize>), usize>, n: usize) -> Vec<usize> {
        let mut uf = UnionFind::new(n);
        for (wi, w) in words[..n].iter().enumerate() {
            for rel in &self.relations {
                let k = rel.lhs.len();
                if k == 0 || k > w.len() {
                    continue;
                }
                for start in 0..=w.len() - k {
                    if w.letters[start..start + k] != rel.lhs[..] {
                        continue;
                    }
                    let at = if start == 0 { w.src } else { self.letters[w.letters[start - 1]].tgt };
                    if at != rel.src {
                        continue;
                    }
                    let mut letters = w.letters[..start].to_vec();
                    letters.extend_from_slice(&rel.rhs);
                    letters.extend_from_slice(&w.letters[start + k..]);
                    let other = index[&(w.src, letters)];
                    uf.union(wi, other);
                }
            }
        }
        (0..n).map(|i| uf.find(i)).collect()
    }

    /// Saturates the congruence on words of length `<= budget`.
    ///
    /// The result is `Stabilized` when every class has a representative of
    /// length `< budget` and allowing words of length `budget` merged no
    /// classes of shorter words.
    pub fn saturate(&self, budget: usize) -> Saturation {
        let words = self.enumerate(budget);
        let index: HashMap<(ObjId, Vec<usize>), usize> =
            words.iter().enumerate().map(|(i, w)| ((w.src, w.letters.clone()), i)).collect();
        let root = self.partition(&words, &index, words.len());
        let shorter = words.iter().take_while(|w| w.len() < budget).count();
        let mut status = SaturationStatus::Stabilized;
        if budget == 0 {
            status = SaturationStatus::Inconclusive("budget 0 admits no words".into());
        } else if let Some(long) = (shorter..words.len()).find(|&i| words[root[i]].len() >= budget) {
            status = SaturationStatus::Inconclusive(format!(
                "class of {} has no representative shorter than {budget}",
                self.render(&words[long])
            ));
        } else {
            let previous = self.partition(&words, &index, shorter);
            if let Some(i) = (0..shorter).find(|&i| previous[i] != root[i]) {
                status = SaturationStatus::Inconclusive(format!(
                    "words of length {budget} identify {} with {}",
                    self.render(&words[i]),
                    self.render(&words[root[i]])
                ));
            }
        }
        let classes = (0..words.len()).filter(|&i| root[i] == i).collect();
        Saturation { system: self.clone(), budget, words, root, classes, status, index }
    }
}

impl Saturation {
    pub fn is_stabilized(&self) -> bool {
        self.status == SaturationStatus::Stabilized
    }

    pub fn word_index(&self, src: ObjId, letters: &[usize]) -> Option<usize> {
        self.index.get(&(src, letters.to_vec())).copied()
    }

    /// Class roots of words from `a` to `b`.
    pub fn classes_between(&self, a: ObjId, b: ObjId) -> Vec<usize> {
        self.classes.iter().copied().filter(|&r| self.words[r].src == a && self.words[r].tgt == b).collect()
    }

    /// Morphism id (position in [`Saturation::classes`]) of the class of a
    /// word, if the word is short enough to be enumerated.
    pub fn class_index(&self, src: ObjId, letters: &[usize]) -> Option<MorId> {
        let w = self.word_index(src, letters)?;
        self.classes.binary_search(&self.root[w]).ok()
    }

    /// Rewrites an arbitrary composable word to an enumerated one by replacing
    /// windows of length `budget` with their (strictly shorter) roots.
    pub fn reduce(&self, src: ObjId, letters: &[usize]) -> Result<MorId> {
        let mut cur = letters.to_vec();
        while cur.len() > self.budget {
            let mut progressed = false;
            for start in 0..=cur.len() - self.budget {
                let at = if start == 0 { src } else { self.system.letters[cur[start - 1]].tgt };
                let window = &cur[start..start + self.budget];
                let w = self.word_index(at, window).expect("windows of composable words are composable");
                let r = &self.words[self.root[w]];
                if r.len() < self.budget {
                    let mut next = cur[..start].to_vec();
                    next.extend_from_slice(&r.letters);
                    next.extend_from_slice(&cur[start + self.budget..]);
                    cur = next;
                    progressed = true;
                    break;
                }
            }
            if !progressed {
                return Err(Error::Inconclusive(format!("word of length {} cannot be shortened", cur.len())));
            }
        }
        Ok(self.class_index(src, &cur).expect("short words are enumerated"))
    }

    /// The category of classes, composed by concatenating roots.
    pub fn to_category(&self) -> Result<FinCategory> {
        if let SaturationStatus::Inconclusive(r) = &self.status {
            return Err(Error::Inconclusive(r.clone()));
        }
        let morphisms: Vec<Morphism> = self
            .classes
            .iter()
            .map(|&r| {
                let w = &self.words[r];
                Morphism { name: self.system.render(w), src: w.src, tgt: w.tgt }
            })
            .collect();
        let identities: Vec<MorId> = (0..self.system.objects.len())
            .map(|o| self.class_index(o, &[]).expect("empty words are enumerated"))
            .collect();
        let mut compose = HashMap::new();
        for (f, &rf) in self.classes.iter().enumerate() {
            for (g, &rg) in self.classes.iter().enumerate() {
                let (wf, wg) = (&self.words[rf], &self.words[rg]);
                if wf.tgt != wg.src {
                    continue;
                }
                let mut letters = wf.letters.clone();
                letters.extend_from_slice(&wg.letters);
                compose.insert((g, f), self.reduce(wf.src, &letters)?);
            }
        }
        Ok(FinCategory::from_parts(self.system.objects.clone(), morphisms, identities, compose))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::validate_category;

    fn loop_system(order: usize) -> WordSystem {
        // One object, one letter x with x^order = id.
        WordSystem {
            objects: vec!["o".into()],
            letters: vec![Letter { name: "x".into(), src: 0, tgt: 0 }],
            relations: vec![Relation::new(0, vec![0; order], vec![])],
        }
    }

    #[test]
    fn cyclic_group_presentation() {
        let sat = loop_system(3).saturate(4);
        assert!(sat.is_stabilized());
        let c = sat.to_category().unwrap();
        assert_eq!(c.num_morphisms(), 3);
        assert!(validate_category(&c).passed());
    }

    #[test]
    fn free_loop_is_inconclusive() {
        let sys = WordSystem { relations: vec![], ..loop_system(1) };
        let sat = sys.saturate(5);
        assert!(matches!(sat.status, SaturationStatus::Inconclusive(_)));
        assert!(sat.to_category().is_err());
    }

    #[test]
    fn rendering() {
        let sys = WordSystem {
            objects: vec!["a".into(), "b".into(), "c".into()],
            letters: vec![Letter { name: "f".into(), src: 0, tgt: 1 }, Letter { name: "g".into(), src: 1, tgt: 2 }],
            relations: vec![],
        };
        assert_eq!(sys.render(&Word { src: 0, tgt: 2, letters: vec![0, 1] }), "g*f");
        assert_eq!(sys.render(&Word { src: 1, tgt: 1, letters: vec![] }), "id_b");
    }

    #[test]
    fn relation_orientation() {
        let r = Relation::new(0, vec![], vec![1, 2]);
        assert_eq!((r.lhs, r.rhs), (vec![1, 2], vec![]));
    }
}
