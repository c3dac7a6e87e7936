//! Equivalence relations on finite sets and permutability of quotients.

use serde::Serialize;

use crate::deciders::{decide, ExactTheory};
use crate::error::{Error, Result};
use crate::word::{Identity, Word};

/// An equivalence on `0..n` given by class labels in first-occurrence order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equivalence {
    labels: Vec<usize>,
}

impl Equivalence {
    /// Normalises arbitrary labels.
    pub fn from_labels(raw: &[usize]) -> Equivalence {
        let mut seen: Vec<usize> = Vec::new();
        let labels = raw
            .iter()
            .map(|r| match seen.iter().position(|s| s == r) {
                Some(i) => i,
                None => {
                    seen.push(*r);
                    seen.len() - 1
                }
            })
            .collect();
        Equivalence { labels }
    }

    /// The equivalence generated by `related` on `0..n`.
    pub fn from_fn(n: usize, related: impl Fn(usize, usize) -> bool) -> Result<Equivalence> {
        let mut labels = vec![usize::MAX; n];
        let mut next = 0;
        for i in 0..n {
            if labels[i] != usize::MAX {
                continue;
            }
            for j in i..n {
                if related(i, j) {
                    if labels[j] != usize::MAX {
                        return Err(Error::Parameter(format!("relation is not transitive at {i}, {j}")));
                    }
                    labels[j] = next;
                }
            }
            next += 1;
        }
        let e = Equivalence { labels };
        for i in 0..n {
            for j in 0..n {
                if related(i, j) != e.related(i, j) {
                    return Err(Error::Parameter(format!("relation is not an equivalence at {i}, {j}")));
                }
            }
        }
        Ok(e)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn classes(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }

    pub fn class(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn related(&self, i: usize, j: usize) -> bool {
        self.labels[i] == self.labels[j]
    }

    /// `self ⊆ other`.
    pub fn refines(&self, other: &Equivalence) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| !self.related(i, j) || other.related(i, j)))
    }

    /// `self ∘ other` as a boolean matrix.
    pub fn compose(&self, other: &Equivalence) -> Vec<Vec<bool>> {
        let n = self.size();
        let mut out = vec![vec![false; n]; n];
        for (a, row) in out.iter_mut().enumerate() {
            for b in (0..n).filter(|&b| self.related(a, b)) {
                for (c, cell) in row.iter_mut().enumerate() {
                    if other.related(b, c) {
                        *cell = true;
                    }
                }
            }
        }
        out
    }

    pub fn permutes_with(&self, other: &Equivalence) -> bool {
        self.compose(other) == other.compose(self)
    }

    /// `self / nu` on the classes of `nu`, which must refine `self`.
    pub fn quotient(&self, nu: &Equivalence) -> Result<Equivalence> {
        if !nu.refines(self) {
            return Err(Error::Parameter("quotient by a non-refining equivalence".into()));
        }
        let mut rep = vec![0; nu.classes()];
        for i in (0..nu.size()).rev() {
            rep[nu.class(i)] = i;
        }
        Ok(Equivalence::from_labels(&rep.iter().map(|&r| self.class(r)).collect::<Vec<_>>()))
    }
}

/// All equivalences on `0..n`.
pub fn all_equivalences(n: usize) -> Vec<Equivalence> {
    fn rec(n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Equivalence>) {
        if cur.len() == n {
            out.push(Equivalence { labels: cur.clone() });
            return;
        }
        for l in 0..=max {
            cur.push(l);
            rec(n, cur, max.max(l + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), 0, &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LiftingSummary {
    pub triples: usize,
    pub permuting: usize,
    pub mismatches: usize,
}

/// Over all `α, β ⊇ ν` on `0..n`, counts the triples where permutability of
/// `α, β` differs from that of `α/ν, β/ν`.
pub fn lifting_exhaustive(n: usize) -> LiftingSummary {
    let all = all_equivalences(n);
    let mut s = LiftingSummary { triples: 0, permuting: 0, mismatches: 0 };
    for nu in &all {
        let above: Vec<&Equivalence> = all.iter().filter(|e| nu.refines(e)).collect();
        let quot: Vec<Equivalence> = above.iter().map(|e| e.quotient(nu).expect("refines")).collect();
        for i in 0..above.len() {
            for j in 0..above.len() {
                let on_set = above[i].permutes_with(above[j]);
                let on_quot = quot[i].permutes_with(&quot[j]);
                s.triples += 1;
                s.permuting += on_set as usize;
                s.mismatches += (on_set != on_quot) as usize;
            }
        }
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WordLifting {
    pub classes: usize,
    pub permute_on_set: bool,
    pub permute_on_quotient: bool,
    pub agree: bool,
}

/// The traces of `θ_α, θ_β, θ_ν` on a finite set of words.
pub fn lifting_on_words(words: &[Word], alpha: ExactTheory, beta: ExactTheory, nu: ExactTheory) -> WordLifting {
    let rel = |th: ExactTheory| {
        Equivalence::from_fn(words.len(), |i, j| decide(th, &Identity::new(words[i].clone(), words[j].clone())))
            .expect("fully invariant congruences are equivalences")
    };
    let (a, b, n) = (rel(alpha), rel(beta), rel(nu));
    let on_set = a.permutes_with(&b);
    let on_quot = match (a.quotient(&n), b.quotient(&n)) {
        (Ok(qa), Ok(qb)) => qa.permutes_with(&qb),
        _ => !on_set,
    };
    WordLifting { classes: n.classes(), permute_on_set: on_set, permute_on_quotient: on_quot, agree: on_set == on_quot }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..6).map(|n| all_equivalences(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn permuting_pairs_on_three() {
        let a = Equivalence::from_labels(&[0, 0, 1]);
        let b = Equivalence::from_labels(&[0, 1, 1]);
        assert!(!a.permutes_with(&b));
        let c = Equivalence::from_labels(&[0, 1, 2]);
        assert!(a.permutes_with(&c));
    }

    #[test]
    fn quotient_counts() {
        let s = lifting_exhaustive(4);
        assert_eq!(s.mismatches, 0);
        assert!(s.permuting < s.triples);
    }
}
