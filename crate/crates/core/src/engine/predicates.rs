//! Structural predicates on identities.

use std::collections::HashMap;

use crate::word::{Identity, Letter, Word};

/// Both sides have the same simple letters in the same order.
fn aligned(id: &Identity) -> Option<(Vec<Word>, Vec<Word>)> {
    let a = id.lhs.decompose();
    let b = id.rhs.decompose();
    (a.separators == b.separators).then_some((a.blocks, b.blocks))
}

/// Both sides decompose with the same separators and every multiple letter
/// occurs equally often, at most once, in corresponding blocks.
pub fn is_linear_balanced(id: &Identity) -> bool {
    let Some((ub, vb)) = aligned(id) else { return false };
    let mut multiple = id.lhs.multiple();
    multiple.extend(id.rhs.multiple());
    ub.iter().zip(&vb).all(|(u, v)| {
        multiple.iter().all(|x| {
            let (a, b) = (u.occ(x), v.occ(x));
            a == b && a <= 1
        })
    })
}

/// No pair of corresponding blocks is empty on both sides. Sides whose
/// simple letters differ in order are read as a single block each.
pub fn is_efficient(id: &Identity) -> bool {
    match aligned(id) {
        Some((ub, vb)) => ub.iter().zip(&vb).all(|(u, v)| !(u.is_empty() && v.is_empty())),
        None => !(id.lhs.is_empty() && id.rhs.is_empty()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Invertibility {
    Degree(usize),
    NotInvertible,
    UnknownWithinCap,
}

/// Least number of swaps of adjacent occurrences of two distinct multiple
/// letters turning the left side into the right side.
///
/// Simple letters never move, so the swaps act inside blocks, where the
/// least count is the inversion number of the occurrence-preserving matching.
pub fn invertibility_degree(id: &Identity, cap: usize) -> Invertibility {
    if id.is_trivial() {
        return Invertibility::Degree(0);
    }
    let Some((ub, vb)) = aligned(id) else { return Invertibility::NotInvertible };
    let mut total = 0usize;
    for (u, v) in ub.iter().zip(&vb) {
        match block_inversions(u, v) {
            Some(n) => total += n,
            None => return Invertibility::NotInvertible,
        }
    }
    if total > cap {
        Invertibility::UnknownWithinCap
    } else {
        Invertibility::Degree(total)
    }
}

fn block_inversions(u: &Word, v: &Word) -> Option<usize> {
    if u.len() != v.len() {
        return None;
    }
    let mut positions: HashMap<&Letter, Vec<usize>> = HashMap::new();
    for (i, l) in v.letters().iter().enumerate() {
        positions.entry(l).or_default().push(i);
    }
    let mut used: HashMap<&Letter, usize> = HashMap::new();
    let mut perm = Vec::with_capacity(u.len());
    for l in u.letters() {
        let k = used.entry(l).or_insert(0);
        let p = *positions.get(l)?.get(*k)?;
        *k += 1;
        perm.push(p);
    }
    let mut inv = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    Some(inv)
}
