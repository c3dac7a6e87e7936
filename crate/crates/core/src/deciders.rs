//! Exact word-problem deciders for small commutative-like and band varieties.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monoid::{satisfies, FiniteMonoid};
use crate::word::{Identity, Letter, Word};

/// A variety whose equational theory is decided by a normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExactTheory {
    /// Semilattice monoids: equal content.
    Sl,
    /// Abelian groups of exponent n: occurrences agree mod n.
    Abelian(u32),
    /// Join of abelian groups of exponent n with semilattices.
    AbelianSl(u32),
    /// Commutative monoids with x^n = x^(n+1).
    Commutative(u32),
    /// Commutative monoids with x^k = x^l, k < l.
    Com(u32, u32),
    /// Left regular band monoids: xy = xyx.
    Lrb,
    /// The trivial variety: every identity holds.
    Trivial,
    /// The variety of all monoids: only trivial identities hold.
    Full,
}

impl ExactTheory {
    pub fn validate(self) -> Result<Self> {
        match self {
            ExactTheory::Abelian(0) | ExactTheory::AbelianSl(0) | ExactTheory::Commutative(0) => {
                Err(Error::Parameter(format!("{self}: parameter must be positive")))
            }
            ExactTheory::Com(k, l) if l <= k => Err(Error::Parameter(format!("{self}: need k < l"))),
            t => Ok(t),
        }
    }
}

impl fmt::Display for ExactTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactTheory::Sl => write!(f, "SL"),
            ExactTheory::Abelian(n) => write!(f, "A:{n}"),
            ExactTheory::AbelianSl(n) => write!(f, "A{n}vSL"),
            ExactTheory::Commutative(n) => write!(f, "C:{n}"),
            ExactTheory::Com(k, l) => write!(f, "COM:{k},{l}"),
            ExactTheory::Lrb => write!(f, "LRB"),
            ExactTheory::Trivial => write!(f, "TRIVIAL"),
            ExactTheory::Full => write!(f, "FULL"),
        }
    }
}

impl Serialize for ExactTheory {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn num(s: &str, name: &str) -> Result<u32> {
    s.trim().parse().map_err(|_| Error::Parameter(format!("bad number {s:?} in {name}")))
}

impl FromStr for ExactTheory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let t = match s {
            "SL" => ExactTheory::Sl,
            "LRB" => ExactTheory::Lrb,
            "T" | "TRIVIAL" => ExactTheory::Trivial,
            "FULL" => ExactTheory::Full,
            _ => {
                if let Some(rest) = s.strip_prefix("COM:") {
                    let (k, l) = rest.split_once(',').ok_or_else(|| Error::UnknownName(s.into()))?;
                    ExactTheory::Com(num(k, s)?, num(l, s)?)
                } else if let Some(rest) = s.strip_prefix("C:") {
                    ExactTheory::Commutative(num(rest, s)?)
                } else if let Some(rest) = s.strip_suffix("vSL") {
                    let n = rest.strip_prefix("A:").or_else(|| rest.strip_prefix('A'));
                    ExactTheory::AbelianSl(num(n.ok_or_else(|| Error::UnknownName(s.into()))?, s)?)
                } else if let Some(rest) = s.strip_prefix("A:") {
                    ExactTheory::Abelian(num(rest, s)?)
                } else {
                    return Err(Error::UnknownName(s.into()));
                }
            }
        };
        t.validate()
    }
}

fn counts(w: &Word) -> BTreeMap<&Letter, u32> {
    let mut m = BTreeMap::new();
    for l in w.letters() {
        *m.entry(l).or_insert(0) += 1;
    }
    m
}

fn per_letter(id: &Identity, ok: impl Fn(u32, u32) -> bool) -> bool {
    let a = counts(&id.lhs);
    let b = counts(&id.rhs);
    let letters: BTreeSet<&Letter> = a.keys().chain(b.keys()).copied().collect();
    letters.into_iter().all(|l| ok(*a.get(l).unwrap_or(&0), *b.get(l).unwrap_or(&0)))
}

/// Does the identity hold in the variety?
pub fn decide(th: ExactTheory, id: &Identity) -> bool {
    match th {
        ExactTheory::Sl => id.lhs.content() == id.rhs.content(),
        ExactTheory::Abelian(n) => per_letter(id, |a, b| a % n == b % n),
        ExactTheory::AbelianSl(n) => per_letter(id, |a, b| a % n == b % n && (a == 0) == (b == 0)),
        ExactTheory::Commutative(n) => per_letter(id, |a, b| a == b || (a >= n && b >= n)),
        ExactTheory::Com(k, l) => per_letter(id, |a, b| a == b || (a >= k && b >= k && a % (l - k) == b % (l - k))),
        ExactTheory::Lrb => id.lhs.ini() == id.rhs.ini(),
        ExactTheory::Trivial => true,
        ExactTheory::Full => id.lhs == id.rhs,
    }
}

/// All words of length at most `max_len` over `con(w) ∪ extra` that the
/// theory identifies with `w`, in shortlex order.
pub fn theta_class(th: ExactTheory, w: &Word, max_len: usize, extra: &BTreeSet<Letter>) -> Vec<Word> {
    let mut alphabet: BTreeSet<Letter> = w.content();
    alphabet.extend(extra.iter().cloned());
    let alphabet: Vec<Letter> = alphabet.into_iter().collect();
    let mut out = Vec::new();
    match th {
        ExactTheory::Full => {
            if w.len() <= max_len {
                out.push(w.clone());
            }
        }
        ExactTheory::Lrb => {
            let target = w.ini();
            let mut cur = Vec::new();
            lrb_words(&alphabet, target.letters(), max_len, &mut cur, &mut out);
        }
        _ => {
            let mut vec = vec![0u32; alphabet.len()];
            count_vectors(th, w, &alphabet, 0, max_len as u32, &mut vec, &mut out);
        }
    }
    out.sort();
    out
}

fn lrb_words(alphabet: &[Letter], target: &[Letter], max_len: usize, cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
    let seen: BTreeSet<Letter> = cur.iter().cloned().collect();
    if seen.len() == target.len() {
        out.push(Word::new(cur.clone()));
    }
    if cur.len() == max_len {
        return;
    }
    for l in alphabet {
        let fresh = !seen.contains(l);
        if fresh && (seen.len() >= target.len() || target[seen.len()] != *l) {
            continue;
        }
        cur.push(l.clone());
        lrb_words(alphabet, target, max_len, cur, out);
        cur.pop();
    }
}

fn count_vectors(
    th: ExactTheory,
    w: &Word,
    alphabet: &[Letter],
    i: usize,
    budget: u32,
    vec: &mut Vec<u32>,
    out: &mut Vec<Word>,
) {
    if i == alphabet.len() {
        let mut letters = Vec::new();
        for (l, &c) in alphabet.iter().zip(vec.iter()) {
            letters.extend(std::iter::repeat_n(l.clone(), c as usize));
        }
        let candidate = Word::new(letters);
        if decide(th, &Identity::new(w.clone(), candidate.clone())) {
            arrangements(alphabet, vec, &mut Vec::new(), out);
        }
        return;
    }
    let target = w.occ(&alphabet[i]) as u32;
    for c in 0..=budget {
        let ok = decide(
            th,
            &Identity::new(
                Word::new(vec![alphabet[i].clone(); target as usize]),
                Word::new(vec![alphabet[i].clone(); c as usize]),
            ),
        );
        if ok {
            vec[i] = c;
            count_vectors(th, w, alphabet, i + 1, budget - c, vec, out);
        }
    }
    vec[i] = 0;
}

fn arrangements(alphabet: &[Letter], remaining: &mut Vec<u32>, cur: &mut Vec<Letter>, out: &mut Vec<Word>) {
    if remaining.iter().all(|&c| c == 0) {
        out.push(Word::new(cur.clone()));
        return;
    }
    for i in 0..alphabet.len() {
        if remaining[i] > 0 {
            remaining[i] -= 1;
            cur.push(alphabet[i].clone());
            arrangements(alphabet, remaining, cur, out);
            cur.pop();
            remaining[i] += 1;
        }
    }
}

/// A disagreement between a decider and an oracle monoid.
#[derive(Clone, Debug, Serialize)]
pub struct Disagreement {
    pub identity: Identity,
    pub decider: bool,
    pub oracle: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub theory: ExactTheory,
    pub oracle_size: usize,
    pub max_len: usize,
    pub checked: usize,
    pub disagreements: Vec<Disagreement>,
}

/// All words over `letters` of length at most `max_len`, in shortlex order.
pub fn all_words(letters: &[Letter], max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Vec::<Letter>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in letters {
                let mut v = w.clone();
                v.push(l.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Word::new));
        layer = next;
    }
    out
}

/// Compares `decide` with satisfaction in `oracle` on every identity in the
/// letters x, y with both sides of length at most `max_len`.
pub fn audit(th: ExactTheory, oracle: &FiniteMonoid, max_len: usize) -> AuditReport {
    use rayon::prelude::*;
    let letters = [Letter::plain("x"), Letter::plain("y")];
    let words = all_words(&letters, max_len);
    let pairs: Vec<(usize, usize)> = (0..words.len()).flat_map(|i| (i..words.len()).map(move |j| (i, j))).collect();
    let disagreements: Vec<Disagreement> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let id = Identity::new(words[i].clone(), words[j].clone());
            let d = decide(th, &id);
            let o = satisfies(oracle, &id).holds();
            (d != o).then_some(Disagreement { identity: id, decider: d, oracle: o })
        })
        .collect();
    AuditReport { theory: th, oracle_size: oracle.size(), max_len, checked: pairs.len(), disagreements }
}
