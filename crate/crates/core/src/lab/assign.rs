//! Necessary conditions for `M ⊨ a ≈ w` from assignments under which `a`
//! is nonzero, checkable on prefixes of `w`.

use std::collections::HashMap;

use crate::monoid::{Assignment, FiniteMonoid};
use crate::word::{Letter, Word};

/// Assignments `φ` into a monoid with zero such that `φ(a) ≠ 0`. A word
/// `w` with `M ⊨ a ≈ w` has `φ(w) = φ(a)` for each, so every prefix of `w`
/// evaluates to a left divisor of `φ(a)`.
pub(crate) struct AssignmentCheck<'a> {
    m: &'a FiniteMonoid,
    /// `divides[p * n + e]`: some `s` has `p s = e`.
    divides: Vec<bool>,
    pub targets: Vec<u32>,
    /// Per alphabet code: `(assignment, value)` for non-identity values.
    pub by_letter: Vec<Vec<(u32, u32)>>,
}

impl<'a> AssignmentCheck<'a> {
    /// Collects assignments by increasing support until `cap` is reached.
    pub fn new(m: &'a FiniteMonoid, a: &Word, alphabet: &[Letter], cap: usize) -> Option<AssignmentCheck<'a>> {
        let zero = m.zero()?;
        let code: HashMap<&Letter, usize> = alphabet.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut distinct: Vec<usize> = Vec::new();
        let mut pos: Vec<usize> = Vec::with_capacity(a.len());
        for l in a.letters() {
            let c = *code.get(l)?;
            let k = match distinct.iter().position(|&d| d == c) {
                Some(k) => k,
                None => {
                    distinct.push(c);
                    distinct.len() - 1
                }
            };
            pos.push(k);
        }
        let divides = divides_table(m);
        let mut found: Vec<(Vec<u32>, u32)> = Vec::new();
        let mut values = vec![u32::MAX; distinct.len()];
        for support in 1..=distinct.len() {
            let mut e = Enum { m, zero, pos: &pos, support, cap, found: &mut found };
            e.go(0, m.identity(), 0, &mut values);
            if found.len() >= cap {
                break;
            }
        }
        let mut by_letter = vec![Vec::new(); alphabet.len()];
        let mut targets = Vec::with_capacity(found.len());
        for (i, (vals, target)) in found.iter().enumerate() {
            targets.push(*target);
            for (k, &v) in vals.iter().enumerate() {
                if v as usize != m.identity() {
                    by_letter[distinct[k]].push((i as u32, v));
                }
            }
        }
        Some(AssignmentCheck { m, divides, targets, by_letter })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn identity(&self) -> u32 {
        self.m.identity() as u32
    }

    /// Extends the state of assignment `i` by `value`; `None` when the
    /// target is no longer reachable.
    #[inline]
    pub fn step(&self, i: u32, state: u32, value: u32) -> Option<u32> {
        let next = self.m.mul(state as usize, value as usize);
        let n = self.m.size();
        self.divides[next * n + self.targets[i as usize] as usize].then_some(next as u32)
    }
}

/// `t[p * n + e]`: some `s` has `p s = e`.
pub(crate) fn divides_table(m: &FiniteMonoid) -> Vec<bool> {
    let n = m.size();
    let mut t = vec![false; n * n];
    for p in 0..n {
        for s in 0..n {
            t[p * n + m.mul(p, s)] = true;
        }
    }
    t
}

/// A single assignment learned from a refuted candidate: words related to
/// `a` take the nonzero value `target`, so their prefixes divide it.
#[derive(Clone, Debug)]
pub(crate) struct Clause {
    pub model: usize,
    /// Value per alphabet code.
    pub values: Vec<u32>,
    pub target: u32,
}

impl Clause {
    pub fn new(model: usize, m: &FiniteMonoid, asg: &Assignment, a: &Word, alphabet: &[Letter]) -> Option<Clause> {
        let one = m.identity();
        let values: Vec<u32> = alphabet.iter().map(|l| *asg.get(l).unwrap_or(&one) as u32).collect();
        let mut target = one;
        for l in a.letters() {
            let c = alphabet.iter().position(|x| x == l)?;
            target = m.mul(target, values[c] as usize);
        }
        (m.zero() != Some(target)).then_some(Clause { model, values, target: target as u32 })
    }
}

struct Enum<'e, 'a> {
    m: &'a FiniteMonoid,
    zero: usize,
    pos: &'e [usize],
    support: usize,
    cap: usize,
    found: &'e mut Vec<(Vec<u32>, u32)>,
}

impl Enum<'_, '_> {
    fn go(&mut self, i: usize, prod: usize, used: usize, values: &mut Vec<u32>) {
        if self.found.len() >= self.cap {
            return;
        }
        if i == self.pos.len() {
            if used == self.support {
                let vals = values.iter().map(|&v| if v == u32::MAX { self.m.identity() as u32 } else { v }).collect();
                self.found.push((vals, prod as u32));
            }
            return;
        }
        let k = self.pos[i];
        if values[k] != u32::MAX {
            let next = self.m.mul(prod, values[k] as usize);
            if next != self.zero {
                self.go(i + 1, next, used, values);
            }
            return;
        }
        let one = self.m.identity();
        values[k] = one as u32;
        self.go(i + 1, prod, used, values);
        if used < self.support {
            let zero = self.zero;
            for v in (0..self.m.size()).filter(|&v| v != one && v != zero) {
                let next = self.m.mul(prod, v);
                if next != self.zero {
                    values[k] = v as u32;
                    self.go(i + 1, next, used + 1, values);
                }
            }
        }
        values[k] = u32::MAX;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::build_sw;
    use crate::word::w;

    #[test]
    fn single_letter_assignments() {
        let m = build_sw(&[w("xy")]);
        let alphabet = vec![Letter::plain("x")];
        let c = AssignmentCheck::new(&m, &w("x"), &alphabet, 100).unwrap();
        assert_eq!(c.len(), m.size() - 2);
    }

    #[test]
    fn clause_target_is_nonzero() {
        let m = build_sw(&[w("xy")]);
        let alphabet = vec![Letter::plain("x"), Letter::plain("y")];
        let e = |v: usize| -> Assignment { [(Letter::plain("x"), v)].into() };
        let x = (0..m.size()).find(|&v| m.zero() != Some(v) && v != m.identity()).unwrap();
        let c = Clause::new(0, &m, &e(x), &w("x"), &alphabet).unwrap();
        assert_eq!(c.target as usize, x);
        assert!(Clause::new(0, &m, &e(x), &w("xx"), &alphabet).is_none());
    }

    #[test]
    fn targets_are_values() {
        let m = build_sw(&[w("xyx")]);
        let alphabet = vec![Letter::plain("a"), Letter::plain("b")];
        let c = AssignmentCheck::new(&m, &w("ab"), &alphabet, 1000).unwrap();
        for (i, &t) in c.targets.iter().enumerate() {
            let mut s = c.identity();
            for l in 0..2 {
                if let Some(&(_, v)) = c.by_letter[l].iter().find(|(j, _)| *j as usize == i) {
                    s = m.mul(s as usize, v as usize) as u32;
                }
            }
            assert_eq!(s, t);
            assert_ne!(Some(t as usize), m.zero());
        }
    }
}
