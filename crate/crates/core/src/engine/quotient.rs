//! Rees quotients of relatively free monoids: factors of `W` modulo the
//! congruence generated by an identity system.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::rewrite::Rewriter;
use crate::catalog::IdentitySystem;
use crate::error::{Error, Result};
use crate::monoid::{satisfies, FiniteMonoid, Label};
use crate::word::{Letter, Word};

/// Connected components of the rewriting graph on words of length at most
/// `bound`, explored on demand.
struct Components<'a> {
    rw: &'a Rewriter,
    bound: usize,
    max_nodes: usize,
    comp: HashMap<Vec<u8>, usize>,
    members: Vec<Vec<Vec<u8>>>,
}

impl<'a> Components<'a> {
    fn new(rw: &'a Rewriter, bound: usize, max_nodes: usize) -> Self {
        Components { rw, bound, max_nodes, comp: HashMap::new(), members: Vec::new() }
    }

    fn of(&mut self, w: &[u8]) -> Result<usize> {
        if let Some(&c) = self.comp.get(w) {
            return Ok(c);
        }
        let id = self.members.len();
        let mut seen = vec![w.to_vec()];
        self.comp.insert(w.to_vec(), id);
        let mut i = 0;
        while i < seen.len() {
            let cur = std::mem::take(&mut seen[i]);
            let mut next = Vec::new();
            self.rw.successors(&cur, self.bound, &mut |nw, _| {
                if !self.comp.contains_key(nw) {
                    next.push(nw.to_vec());
                }
            });
            seen[i] = cur;
            for nw in next {
                if let std::collections::hash_map::Entry::Vacant(e) = self.comp.entry(nw) {
                    seen.push(e.key().clone());
                    e.insert(id);
                }
            }
            if self.comp.len() > self.max_nodes {
                return Err(Error::Monoid(format!("class of {} exceeds the node cap", self.rw.decode(w))));
            }
            i += 1;
        }
        self.members.push(seen);
        Ok(id)
    }
}

/// Every identity has the same content and the same simple letters on both
/// sides, so these are invariant under rewriting.
fn keeps_simple_content(sys: &IdentitySystem) -> bool {
    sys.identities.iter().all(|id| id.lhs.content() == id.rhs.content() && id.lhs.simple() == id.rhs.simple())
}

/// Content and simple letters as bit sets over letter codes.
fn simple_content(w: &[u8]) -> (u64, u64) {
    let mut counts = [0u8; 64];
    for &c in w {
        counts[c as usize] = counts[c as usize].saturating_add(1);
    }
    let mut con = 0u64;
    let mut sim = 0u64;
    for (i, &k) in counts.iter().enumerate() {
        if k > 0 {
            con |= 1 << i;
        }
        if k == 1 {
            sim |= 1 << i;
        }
    }
    (con, sim)
}

/// Builds the monoid whose nonzero elements are the classes of factors of
/// words equivalent to members of `words` under `sys`, with the product of
/// two classes being the class of the concatenation when that class contains
/// a factor, and zero otherwise.
///
/// Classes are computed by rewriting within `bound` letters (at least the
/// longest word of `words`). The result is checked: associativity, and every
/// identity of `sys` must hold. A monoid passing these checks lies in the
/// variety defined by `sys` regardless of how the classes were found.
pub fn sw_modulo(words: &[Word], sys: &IdentitySystem, bound: usize) -> Result<FiniteMonoid> {
    let mut alphabet: BTreeSet<Letter> = BTreeSet::new();
    for w in words {
        alphabet.extend(w.content());
    }
    let rw = Rewriter::new(sys, alphabet.into_iter().collect());
    let bound = words.iter().map(|w| w.len()).max().unwrap_or(0).max(bound);
    let mut comps = Components::new(&rw, bound, 2_000_000);
    let mut factors: BTreeSet<Vec<u8>> = BTreeSet::new();
    for w in words {
        let c = comps.of(&rw.encode(w).expect("letters of W"))?;
        for v in &comps.members[c] {
            for i in 0..=v.len() {
                for j in i..=v.len() {
                    factors.insert(v[i..j].to_vec());
                }
            }
        }
    }
    let mut factors: Vec<Vec<u8>> = factors.into_iter().collect();
    factors.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    let mut class_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut reps: Vec<Vec<u8>> = Vec::new();
    for f in &factors {
        let c = comps.of(f)?;
        class_of.entry(c).or_insert_with(|| {
            reps.push(f.clone());
            reps.len() - 1
        });
    }
    let n = reps.len() + 1;
    let zero = reps.len();
    let mut table = vec![zero as u32; n * n];
    let mut longer: BTreeMap<usize, Components> = BTreeMap::new();
    let invariant =
        (rw.alphabet.len() <= 64 && keeps_simple_content(sys)).then_some(simple_content as fn(&[u8]) -> (u64, u64));
    let factor_keys: BTreeSet<(u64, u64)> = factors.iter().map(|f| simple_content(f)).collect();
    for a in 0..reps.len() {
        for b in 0..reps.len() {
            let mut prod = reps[a].clone();
            prod.extend_from_slice(&reps[b]);
            let c = if prod.len() <= bound {
                class_of.get(&comps.of(&prod)?).copied()
            } else if invariant.is_some_and(|f| !factor_keys.contains(&f(&prod))) {
                None
            } else {
                let wide = longer.entry(prod.len()).or_insert_with(|| Components::new(&rw, prod.len(), 2_000_000));
                let c = wide.of(&prod)?;
                wide.members[c].iter().find_map(|g| comps.comp.get(g).and_then(|k| class_of.get(k)).copied())
            };
            table[a * n + b] = c.unwrap_or(zero) as u32;
        }
    }
    let mut labels: Vec<Label> = reps.iter().map(|r| Label::Word(rw.decode(r))).collect();
    labels.push(Label::Zero);
    let identity = class_of[&comps.of(&[])?];
    let m = FiniteMonoid::from_table(n, identity, table, Some(labels))?;
    if let Some(t) = m.audit_associativity() {
        return Err(Error::Monoid(format!("quotient is not associative at {t:?}")));
    }
    if let Some(id) = sys.identities.iter().find(|id| !satisfies(&m, id).holds()) {
        return Err(Error::Monoid(format!("quotient fails {id}")));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{variety_basis, Variety, DEFAULT_CAP};
    use crate::monoid::build_sw;
    use crate::word::{ident, w};

    #[test]
    fn trivial_system_gives_sw() {
        let sys = IdentitySystem::new("none", vec![]);
        let m = sw_modulo(&[w("xtx")], &sys, 3).unwrap();
        assert_eq!(m, build_sw(&[w("xtx")]));
    }

    #[test]
    fn n_model_separates() {
        let n = variety_basis(&Variety::N, DEFAULT_CAP).unwrap();
        let m = sw_modulo(&[w("xytxy")], &n, 7).unwrap_or_else(|e| panic!("{e}"));
        assert!(!satisfies(&m, &ident("xytxy = yxtxy")).holds());
        assert!(!satisfies(&m, &ident("xytyx = yxtxy")).holds());
        assert!(satisfies(&m, &ident("xytxy = xytyx")).holds());
    }
}
