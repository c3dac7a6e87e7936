//! Finite monoids given by Cayley tables, the Rees quotient monoids S(W),
//! and identity checking.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Identity, Letter, Word};

/// Element label of a Rees quotient monoid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Word(Word),
    Zero,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Zero => write!(f, "0"),
            Label::Word(w) if w.is_empty() => write!(f, "1"),
            Label::Word(w) => write!(f, "{w}"),
        }
    }
}

impl std::str::FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Label> {
        match s.trim() {
            "0" => Ok(Label::Zero),
            "1" => Ok(Label::Word(Word::empty())),
            other => Ok(Label::Word(other.parse()?)),
        }
    }
}

/// A finite monoid on `0..size` with a row-major Cayley table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    size: usize,
    identity: usize,
    zero: Option<usize>,
    table: Vec<u32>,
    labels: Option<Vec<Label>>,
}

pub type Assignment = BTreeMap<Letter, usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Satisfaction {
    Holds,
    Fails(Assignment),
}

impl Satisfaction {
    pub fn holds(&self) -> bool {
        matches!(self, Satisfaction::Holds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsotermResult {
    IsIsoterm,
    CounterIdentity(Word),
    UnknownWithinBound,
}

impl FiniteMonoid {
    /// Builds a monoid from a table, checking bounds and the identity law.
    /// The zero is detected from the table.
    pub fn from_table(size: usize, identity: usize, table: Vec<u32>, labels: Option<Vec<Label>>) -> Result<Self> {
        if size == 0 {
            return Err(Error::Monoid("empty carrier".into()));
        }
        if table.len() != size * size {
            return Err(Error::Monoid(format!("table has {} entries, expected {}", table.len(), size * size)));
        }
        if identity >= size {
            return Err(Error::Monoid("identity out of range".into()));
        }
        if table.iter().any(|&v| v as usize >= size) {
            return Err(Error::Monoid("table entry out of range".into()));
        }
        if let Some(l) = &labels {
            if l.len() != size {
                return Err(Error::Monoid("label count differs from size".into()));
            }
        }
        let mut m = FiniteMonoid { size, identity, zero: None, table, labels };
        if let Some(a) = m.audit_identity() {
            return Err(Error::Monoid(format!("{identity} is not an identity (fails at {a})")));
        }
        m.zero = (0..size).find(|&z| (0..size).all(|a| m.mul(z, a) == z && m.mul(a, z) == z));
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b] as usize
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn index_of(&self, label: &Label) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    /// Index of the element labelled by a word, if present.
    pub fn element(&self, w: &Word) -> Option<usize> {
        self.index_of(&Label::Word(w.clone()))
    }

    /// First triple violating associativity.
    pub fn audit_associativity(&self) -> Option<(usize, usize, usize)> {
        for a in 0..self.size {
            for b in 0..self.size {
                let ab = self.mul(a, b);
                for c in 0..self.size {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// First element for which the identity law fails.
    pub fn audit_identity(&self) -> Option<usize> {
        (0..self.size).find(|&a| self.mul(self.identity, a) != a || self.mul(a, self.identity) != a)
    }

    /// Checks that the recorded zero (if any) is absorbing.
    pub fn audit_zero(&self) -> bool {
        match self.zero {
            None => true,
            Some(z) => (0..self.size).all(|a| self.mul(z, a) == z && self.mul(a, z) == z),
        }
    }

    pub fn semilattice() -> FiniteMonoid {
        FiniteMonoid::from_table(2, 0, vec![0, 1, 1, 1], None).expect("valid table")
    }

    /// {1, a, ..., a^(index+period-1)} with a^index = a^(index+period).
    pub fn monogenic(index: usize, period: usize) -> FiniteMonoid {
        assert!(period >= 1, "period must be positive");
        let s = index + period;
        let reduce = |e: usize| if e < s { e } else { index + (e - index) % period };
        let table = (0..s * s).map(|k| reduce(k / s + k % s) as u32).collect();
        FiniteMonoid::from_table(s, 0, table, None).expect("valid table")
    }

    /// The cyclic group of order n.
    pub fn cyclic_group(n: usize) -> FiniteMonoid {
        FiniteMonoid::monogenic(0, n)
    }

    /// {1, a, ..., a^n} with a^n = a^(n+1).
    pub fn cyclic_aperiodic(n: usize) -> FiniteMonoid {
        FiniteMonoid::monogenic(n, 1)
    }

    /// True when the labels are words and products of labels are the labels
    /// of concatenations, or zero when the concatenation is not a label.
    pub fn is_rees_labelled(&self) -> bool {
        let Some(labels) = &self.labels else { return false };
        let Some(z) = self.zero else { return false };
        if labels[z] != Label::Zero || labels[self.identity] != Label::Word(Word::empty()) {
            return false;
        }
        let index: HashMap<&Label, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        for a in 0..self.size {
            for b in 0..self.size {
                let expected = match (&labels[a], &labels[b]) {
                    (Label::Word(u), Label::Word(v)) => *index.get(&Label::Word(u.concat(v))).unwrap_or(&z),
                    _ => z,
                };
                if self.mul(a, b) != expected {
                    return false;
                }
            }
        }
        true
    }
}

/// The Rees quotient of the free monoid by the ideal of non-factors of `words`.
/// Elements are ordered shortlex, identity first, zero last.
pub fn build_sw(words: &[Word]) -> FiniteMonoid {
    let mut factors: BTreeSet<Word> = BTreeSet::new();
    for w in words {
        factors.extend(w.factors());
    }
    if factors.is_empty() {
        factors.insert(Word::empty());
    }
    let elems: Vec<Word> = factors.into_iter().collect();
    let n = elems.len() + 1;
    let zero = elems.len();
    let index: HashMap<&Word, usize> = elems.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut table = vec![zero as u32; n * n];
    for (i, a) in elems.iter().enumerate() {
        for (j, b) in elems.iter().enumerate() {
            if let Some(&k) = index.get(&a.concat(b)) {
                table[i * n + j] = k as u32;
            }
        }
    }
    let mut labels: Vec<Label> = elems.iter().cloned().map(Label::Word).collect();
    labels.push(Label::Zero);
    FiniteMonoid::from_table(n, 0, table, Some(labels)).expect("Rees quotient is a monoid")
}

/// Value of `w` under `assignment`.
pub fn evaluate(m: &FiniteMonoid, w: &Word, assignment: &Assignment) -> Result<usize> {
    let mut v = m.identity;
    for l in w.letters() {
        let a = *assignment.get(l).ok_or_else(|| Error::UncoveredLetter(l.clone()))?;
        if a >= m.size {
            return Err(Error::Monoid(format!("element {a} out of range")));
        }
        v = m.mul(v, a);
    }
    Ok(v)
}

struct Compiled {
    letters: Vec<Letter>,
    lhs: Vec<usize>,
    rhs: Vec<usize>,
}

fn compile(id: &Identity) -> Compiled {
    let letters: Vec<Letter> = id.content().into_iter().collect();
    let pos: HashMap<&Letter, usize> = letters.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let lhs = id.lhs.letters().iter().map(|l| pos[l]).collect();
    let rhs = id.rhs.letters().iter().map(|l| pos[l]).collect();
    Compiled { letters, lhs, rhs }
}

const UNSET: usize = usize::MAX;

#[inline]
fn eval_ids(m: &FiniteMonoid, side: &[usize], asg: &[usize]) -> usize {
    side.iter().fold(m.identity, |v, &l| m.mul(v, asg[l]))
}

/// Does `m` satisfy `id`? A failing assignment is returned as witness.
///
/// With a zero, only assignments making one side nonzero can fail, so each
/// side is matched left to right and branches are cut as soon as the prefix
/// value vanishes. The witness is the first failure in this search order.
pub fn satisfies(m: &FiniteMonoid, id: &Identity) -> Satisfaction {
    if id.is_trivial() {
        return Satisfaction::Holds;
    }
    let c = compile(id);
    let found = match m.zero {
        Some(z) => side_search(m, z, &c.lhs, &c.rhs, c.letters.len())
            .or_else(|| side_search(m, z, &c.rhs, &c.lhs, c.letters.len())),
        None => exhaustive(m, &c),
    };
    match found {
        None => Satisfaction::Holds,
        Some(asg) => Satisfaction::Fails(c.letters.iter().cloned().zip(asg).collect()),
    }
}

fn exhaustive(m: &FiniteMonoid, c: &Compiled) -> Option<Vec<usize>> {
    let k = c.letters.len();
    let mut asg = vec![0usize; k];
    loop {
        if eval_ids(m, &c.lhs, &asg) != eval_ids(m, &c.rhs, &asg) {
            return Some(asg);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            asg[i] += 1;
            if asg[i] < m.size {
                break;
            }
            asg[i] = 0;
        }
    }
}

fn side_search(m: &FiniteMonoid, zero: usize, side: &[usize], other: &[usize], nvars: usize) -> Option<Vec<usize>> {
    let in_side: BTreeSet<usize> = side.iter().copied().collect();
    let free: Vec<usize> = (0..nvars).filter(|v| !in_side.contains(v)).collect();
    let mut asg = vec![UNSET; nvars];
    let mut st = SideSearch { m, zero, side, other, free: &free, found: None };
    st.dfs(0, m.identity, &mut asg);
    st.found
}

struct SideSearch<'a> {
    m: &'a FiniteMonoid,
    zero: usize,
    side: &'a [usize],
    other: &'a [usize],
    free: &'a [usize],
    found: Option<Vec<usize>>,
}

impl SideSearch<'_> {
    fn dfs(&mut self, p: usize, val: usize, asg: &mut Vec<usize>) -> bool {
        if p == self.side.len() {
            return self.close(0, val, asg);
        }
        let var = self.side[p];
        if asg[var] != UNSET {
            let next = self.m.mul(val, asg[var]);
            return next != self.zero && self.dfs(p + 1, next, asg);
        }
        for e in 0..self.m.size {
            let next = self.m.mul(val, e);
            if next == self.zero {
                continue;
            }
            asg[var] = e;
            if self.dfs(p + 1, next, asg) {
                return true;
            }
        }
        asg[var] = UNSET;
        false
    }

    fn close(&mut self, i: usize, val: usize, asg: &mut Vec<usize>) -> bool {
        if i == self.free.len() {
            if eval_ids(self.m, self.other, asg) != val {
                self.found = Some(asg.clone());
                return true;
            }
            return false;
        }
        let var = self.free[i];
        for e in 0..self.m.size {
            asg[var] = e;
            if self.close(i + 1, val, asg) {
                return true;
            }
        }
        asg[var] = UNSET;
        false
    }
}

/// Checks whether `w` is an isoterm for `m`.
///
/// `IsIsoterm` needs a certificate: `m` is a labelled Rees quotient and an
/// injective renaming of `w` is a nonzero element, so any identity `w ≈ w'`
/// evaluated at that renaming forces `w' = w`. Otherwise candidates `w'` with
/// the same content, `|w'| ≤ |w| + slack` and every letter occurring at most
/// `max(occ, 2) + slack` times are tried in shortlex order.
pub fn isoterm_check(m: &FiniteMonoid, w: &Word, slack: usize) -> IsotermResult {
    if has_isoterm_certificate(m, w) {
        return IsotermResult::IsIsoterm;
    }
    let letters: Vec<Letter> = w.content().into_iter().collect();
    let caps: Vec<usize> = letters.iter().map(|l| w.occ(l).max(2) + slack).collect();
    let max_len = w.len() + slack;
    for len in letters.len()..=max_len {
        let mut cur = Vec::new();
        let mut counts = vec![0usize; letters.len()];
        if let Some(found) = candidates(m, w, &letters, &caps, len, &mut cur, &mut counts) {
            return IsotermResult::CounterIdentity(found);
        }
    }
    IsotermResult::UnknownWithinBound
}

fn candidates(
    m: &FiniteMonoid,
    w: &Word,
    letters: &[Letter],
    caps: &[usize],
    len: usize,
    cur: &mut Vec<Letter>,
    counts: &mut Vec<usize>,
) -> Option<Word> {
    if cur.len() == len {
        if counts.contains(&0) {
            return None;
        }
        let cand = Word::new(cur.clone());
        if cand != *w && satisfies(m, &Identity::new(w.clone(), cand.clone())).holds() {
            return Some(cand);
        }
        return None;
    }
    let missing = counts.iter().filter(|&&c| c == 0).count();
    if len - cur.len() < missing {
        return None;
    }
    for (i, l) in letters.iter().enumerate() {
        if counts[i] < caps[i] {
            counts[i] += 1;
            cur.push(l.clone());
            let r = candidates(m, w, letters, caps, len, cur, counts);
            cur.pop();
            counts[i] -= 1;
            if r.is_some() {
                return r;
            }
        }
    }
    None
}

fn has_isoterm_certificate(m: &FiniteMonoid, w: &Word) -> bool {
    if !m.is_rees_labelled() {
        return false;
    }
    let Some(labels) = m.labels() else { return false };
    labels.iter().any(|l| match l {
        Label::Word(f) if f.len() == w.len() => injective_renaming(w, f),
        _ => false,
    })
}

fn injective_renaming(w: &Word, f: &Word) -> bool {
    let mut fwd: HashMap<&Letter, &Letter> = HashMap::new();
    let mut back: HashMap<&Letter, &Letter> = HashMap::new();
    for (a, b) in w.letters().iter().zip(f.letters()) {
        if *fwd.entry(a).or_insert(b) != b || *back.entry(b).or_insert(a) != a {
            return false;
        }
    }
    true
}

/// The direct product; element `(i, j)` has index `i * |m2| + j`.
pub fn direct_product(m1: &FiniteMonoid, m2: &FiniteMonoid) -> FiniteMonoid {
    let (n1, n2) = (m1.size, m2.size);
    let n = n1 * n2;
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            let (a1, a2) = (a / n2, a % n2);
            let (b1, b2) = (b / n2, b % n2);
            table[a * n + b] = (m1.mul(a1, b1) * n2 + m2.mul(a2, b2)) as u32;
        }
    }
    FiniteMonoid::from_table(n, m1.identity * n2 + m2.identity, table, None).expect("product of monoids")
}

/// The dual monoid `a ∘ b = b · a`; word labels are reversed.
pub fn dual_monoid(m: &FiniteMonoid) -> FiniteMonoid {
    let n = m.size;
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = m.mul(b, a) as u32;
        }
    }
    let labels = m.labels.as_ref().map(|ls| {
        ls.iter()
            .map(|l| match l {
                Label::Word(w) => Label::Word(w.reverse()),
                Label::Zero => Label::Zero,
            })
            .collect()
    });
    FiniteMonoid::from_table(n, m.identity, table, labels).expect("dual of a monoid")
}

/// Renumbers `m` along `perm` (new index of old element `i` is `perm[i]`).
pub fn relabel(m: &FiniteMonoid, perm: &[usize]) -> Result<FiniteMonoid> {
    let n = m.size;
    if perm.len() != n || perm.iter().collect::<BTreeSet<_>>().len() != n || perm.iter().any(|&p| p >= n) {
        return Err(Error::Monoid("not a permutation of the carrier".into()));
    }
    let mut table = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            table[perm[a] * n + perm[b]] = perm[m.mul(a, b)] as u32;
        }
    }
    let labels = m.labels.as_ref().map(|ls| {
        let mut out = ls.clone();
        for (i, l) in ls.iter().enumerate() {
            out[perm[i]] = l.clone();
        }
        out
    });
    FiniteMonoid::from_table(n, perm[m.identity], table, labels)
}

/// Serialized form of a monoid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonoidJson {
    pub size: usize,
    pub identity: usize,
    pub zero: Option<usize>,
    pub table: Vec<Vec<u32>>,
    pub labels: Option<Vec<String>>,
}

impl FiniteMonoid {
    pub fn to_json(&self) -> MonoidJson {
        MonoidJson {
            size: self.size,
            identity: self.identity,
            zero: self.zero,
            table: self.table.chunks(self.size).map(|r| r.to_vec()).collect(),
            labels: self.labels.as_ref().map(|ls| ls.iter().map(|l| l.to_string()).collect()),
        }
    }

    pub fn from_json(j: &MonoidJson) -> Result<FiniteMonoid> {
        if j.table.len() != j.size || j.table.iter().any(|r| r.len() != j.size) {
            return Err(Error::Monoid("table is not size x size".into()));
        }
        let labels = match &j.labels {
            Some(ls) => Some(ls.iter().map(|s| s.parse()).collect::<Result<Vec<Label>>>()?),
            None => None,
        };
        let m = FiniteMonoid::from_table(j.size, j.identity, j.table.concat(), labels)?;
        if m.zero != j.zero {
            return Err(Error::Monoid(format!("declared zero {:?} but table gives {:?}", j.zero, m.zero)));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{ident, w};

    fn asg(pairs: &[(&str, usize)]) -> Assignment {
        pairs.iter().map(|(l, e)| (Letter::plain(l), *e)).collect()
    }

    #[test]
    fn sw_sizes() {
        let m = build_sw(&[w("xy")]);
        assert_eq!(m.size(), 5);
        let labels: Vec<String> = m.labels().unwrap().iter().map(|l| l.to_string()).collect();
        assert_eq!(labels, ["1", "x", "y", "xy", "0"]);
        assert_eq!(build_sw(&[w("xtx")]).size(), 7);
        assert!(m.is_rees_labelled());
        assert_eq!(m.audit_associativity(), None);
    }

    #[test]
    fn evaluate_examples() {
        let m = build_sw(&[w("xy")]);
        let a = asg(&[("x", 1), ("y", 2)]);
        assert_eq!(evaluate(&m, &w("xy"), &a).unwrap(), 3);
        assert_eq!(evaluate(&m, &w("yx"), &a).unwrap(), 4);
        assert_eq!(evaluate(&m, &Word::empty(), &Assignment::new()).unwrap(), 0);
        assert!(matches!(evaluate(&m, &w("xt"), &a), Err(Error::UncoveredLetter(_))));
    }

    #[test]
    fn satisfies_examples() {
        let m = build_sw(&[w("xy")]);
        assert_eq!(satisfies(&m, &ident("xy = yx")), Satisfaction::Fails(asg(&[("x", 1), ("y", 2)])));
        assert!(satisfies(&m, &ident("xysxty = yxsxty")).holds());
        let w1 = w("z1 t1 x z1 z2 x t2 z2");
        let w1p = w("z1 t1 x x z1 z2 t2 z2");
        assert!(!satisfies(&build_sw(std::slice::from_ref(&w1)), &Identity::new(w1, w1p)).holds());
        assert!(satisfies(&FiniteMonoid::cyclic_group(2), &ident("x = xxx")).holds());
    }

    #[test]
    fn isoterm_examples() {
        assert_eq!(isoterm_check(&build_sw(&[w("xtx")]), &w("xyx"), 1), IsotermResult::IsIsoterm);
        assert_eq!(isoterm_check(&build_sw(&[w("xy")]), &w("xx"), 1), IsotermResult::CounterIdentity(w("xxx")));
        let sl = FiniteMonoid::semilattice();
        assert_eq!(isoterm_check(&sl, &w("x"), 0), IsotermResult::UnknownWithinBound);
        assert_eq!(isoterm_check(&sl, &w("x"), 1), IsotermResult::CounterIdentity(w("xx")));
    }

    #[test]
    fn dual_and_product() {
        let m = build_sw(&[w("xy")]);
        assert_eq!(dual_monoid(&m), build_sw(&[w("yx")]));
        assert_eq!(dual_monoid(&dual_monoid(&m)), m);
        let p = direct_product(&m, &FiniteMonoid::semilattice());
        assert_eq!(p.size(), 10);
        assert_eq!(p.audit_associativity(), None);
        assert_eq!(p.zero(), Some(9));
    }

    #[test]
    fn json_round_trip() {
        let m = build_sw(&[w("xtx")]);
        let j = serde_json::to_string(&m.to_json()).unwrap();
        let back: MonoidJson = serde_json::from_str(&j).unwrap();
        assert_eq!(FiniteMonoid::from_json(&back).unwrap(), m);
    }

    #[test]
    fn oracle_monoids() {
        for n in 1..5 {
            assert_eq!(FiniteMonoid::cyclic_group(n).audit_associativity(), None);
            assert_eq!(FiniteMonoid::cyclic_aperiodic(n).audit_associativity(), None);
        }
        assert_eq!(FiniteMonoid::cyclic_aperiodic(2).zero(), Some(2));
        assert_eq!(FiniteMonoid::cyclic_group(3).zero(), None);
    }
}
