//! Relational products of `θ` restrictions: bounded search for intermediate
//! words.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use super::assign::{divides_table, AssignmentCheck, Clause};
use super::handle::{Answer, VarietyHandle};
use crate::monoid::FiniteMonoid;
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductResult {
    /// Intermediate words `w1 .. w_{k-1}` of a chain from `u` to `v`.
    Found(Vec<Word>),
    NotFoundWithinBounds,
    UnknownLinks,
}

/// Words `w` related to every `a` by the paired handle, found by a bounded
/// search.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Candidates {
    pub words: Vec<Word>,
    /// Words that passed every cheap test but got an unknown answer.
    pub unknown: Vec<Word>,
}

/// Words projected to one or two letters must stay related; pair sets larger
/// than this are not materialized.
const PAIR_LIMIT: usize = 200_000;

/// Assignments kept per constraint and model.
const ASSIGNMENT_LIMIT: usize = 20_000;

/// Assignments learned from refuted candidates, shared by all branches.
const LEARNED_LIMIT: usize = 20_000;

type Pool = Mutex<Vec<Arc<Clause>>>;

struct Pruner<'a> {
    /// Allowed occurrence counts per letter.
    counts: Vec<Vec<bool>>,
    /// Per unordered letter pair `(c, d)` with `c < d`: allowed projections
    /// and their prefixes, keyed by `(length, bits)` with `d` as a set bit.
    pairs: BTreeMap<(usize, usize), PairSets>,
    assignments: Vec<AssignmentCheck<'a>>,
    /// Models of the constraint handles with their divisibility tables.
    models: Vec<(&'a FiniteMonoid, Vec<bool>)>,
}

struct PairSets {
    full: HashSet<(u8, u64)>,
    prefixes: HashSet<(u8, u64)>,
}

fn project_key(w: &[u8], c: u8, d: u8) -> (u8, u64) {
    let mut len = 0u8;
    let mut bits = 0u64;
    for &x in w {
        if x == c || x == d {
            if x == d {
                bits |= 1 << len;
            }
            len += 1;
        }
    }
    (len, bits)
}

fn decode(alphabet: &[Letter], w: &[u8]) -> Word {
    Word::new(w.iter().map(|&c| alphabet[c as usize].clone()).collect())
}

fn binom(n: usize, k: usize) -> usize {
    let mut r: usize = 1;
    for i in 0..k.min(n - k) {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

impl<'a> Pruner<'a> {
    fn new(constraints: &[(&'a VarietyHandle, &Word)], alphabet: &[Letter], max_len: usize) -> Option<Pruner<'a>> {
        let k = alphabet.len();
        let mut counts = vec![vec![false; max_len + 1]; k];
        let mut min = vec![0; k];
        for c in 0..k {
            let keep: BTreeSet<Letter> = [alphabet[c].clone()].into();
            let proj: Vec<Word> = constraints.iter().map(|(_, a)| a.restrict(&keep)).collect();
            for n in 0..=max_len {
                let cand = Word::letter(alphabet[c].clone()).pow(n);
                counts[c][n] = constraints.iter().zip(&proj).all(|((h, _), p)| h.may_relate(p, &cand));
            }
            min[c] = counts[c].iter().position(|&b| b)?;
        }
        let floor: usize = min.iter().sum();
        if floor > max_len {
            return None;
        }
        let mut pairs = BTreeMap::new();
        if max_len <= 63 {
            for c in 0..k {
                for d in c + 1..k {
                    let budget = max_len - (floor - min[c] - min[d]);
                    let total: usize = (0..=budget)
                        .flat_map(|i| (0..=budget - i).map(move |j| (i, j)))
                        .filter(|&(i, j)| counts[c][i] && counts[d][j])
                        .map(|(i, j)| binom(i + j, i))
                        .fold(0usize, |a, b| a.saturating_add(b));
                    if total > PAIR_LIMIT {
                        continue;
                    }
                    let keep: BTreeSet<Letter> = [alphabet[c].clone(), alphabet[d].clone()].into();
                    let proj: Vec<Word> = constraints.iter().map(|(_, a)| a.restrict(&keep)).collect();
                    let mut full = HashSet::new();
                    let mut prefixes = HashSet::new();
                    for i in 0..=budget {
                        for j in 0..=budget - i {
                            if !(counts[c][i] && counts[d][j]) {
                                continue;
                            }
                            arrangements(i, j, &mut |bits| {
                                let len = i + j;
                                let word =
                                    Word::new(
                                        (0..len)
                                            .map(|p| {
                                                if bits >> p & 1 == 1 {
                                                    alphabet[d].clone()
                                                } else {
                                                    alphabet[c].clone()
                                                }
                                            })
                                            .collect(),
                                    );
                                if constraints.iter().zip(&proj).all(|((h, _), p)| h.may_relate(p, &word)) {
                                    full.insert((len as u8, bits));
                                    for l in 0..=len {
                                        let mask = if l == 64 { u64::MAX } else { (1u64 << l) - 1 };
                                        prefixes.insert((l as u8, bits & mask));
                                    }
                                }
                            });
                        }
                    }
                    if full.is_empty() {
                        return None;
                    }
                    pairs.insert((c, d), PairSets { full, prefixes });
                }
            }
        }
        let assignments = constraints
            .iter()
            .flat_map(|(h, a)| h.models().into_iter().map(move |m| (m, *a)))
            .filter_map(|(m, a)| AssignmentCheck::new(m, a, alphabet, ASSIGNMENT_LIMIT))
            .collect();
        let mut models: Vec<(&FiniteMonoid, Vec<bool>)> = Vec::new();
        for m in constraints.iter().flat_map(|(h, _)| h.models()) {
            if !models.iter().any(|(x, _)| std::ptr::eq(*x, m)) {
                models.push((m, divides_table(m)));
            }
        }
        Some(Pruner { counts, pairs, assignments, models })
    }

    /// Least number of letters still needed, or `None` when some count is
    /// already out of range.
    fn needed(&self, cnt: &[usize]) -> Option<usize> {
        let mut need = 0;
        for (c, &n) in cnt.iter().enumerate() {
            let next = (n..self.counts[c].len()).find(|&m| self.counts[c][m])?;
            need += next - n;
        }
        Some(need)
    }

    #[inline]
    fn divides(&self, cl: &Clause, p: u32) -> bool {
        let (m, t) = &self.models[cl.model];
        t[p as usize * m.size() + cl.target as usize]
    }

    fn prefix_ok(&self, w: &[u8], last: u8) -> bool {
        self.pairs
            .iter()
            .filter(|((c, d), _)| *c == last as usize || *d == last as usize)
            .all(|((c, d), s)| s.prefixes.contains(&project_key(w, *c as u8, *d as u8)))
    }

    fn complete(&self, w: &[u8], cnt: &[usize]) -> bool {
        cnt.iter().enumerate().all(|(c, &n)| self.counts[c][n])
            && self.pairs.iter().all(|((c, d), s)| s.full.contains(&project_key(w, *c as u8, *d as u8)))
    }
}

/// Calls `f` with each bit pattern of length `i + j` having `j` set bits.
fn arrangements(i: usize, j: usize, f: &mut dyn FnMut(u64)) {
    fn go(pos: usize, zeros: usize, ones: usize, bits: u64, f: &mut dyn FnMut(u64)) {
        if zeros == 0 && ones == 0 {
            f(bits);
            return;
        }
        if zeros > 0 {
            go(pos + 1, zeros - 1, ones, bits, f);
        }
        if ones > 0 {
            go(pos + 1, zeros, ones - 1, bits | 1 << pos, f);
        }
    }
    go(0, i, j, 0, f)
}

struct Dfs<'a> {
    constraints: &'a [(&'a VarietyHandle, &'a Word)],
    alphabet: &'a [Letter],
    pruner: &'a Pruner<'a>,
    /// Per assignment check, the value of each assignment on the prefix.
    states: Vec<Vec<u32>>,
    undo: Vec<(u32, u32, u32)>,
    pool: &'a Pool,
    learned: Vec<Arc<Clause>>,
    /// Per prefix length, the value of each learned clause.
    path: Vec<Vec<u32>>,
    /// Prefixes at least this long are refuted by a learned clause.
    cut: usize,
    max_len: usize,
    /// Only words of length `max_len` are leaves.
    exact: bool,
    first_only: bool,
    out: Candidates,
}

impl<'a> Dfs<'a> {
    fn new(
        constraints: &'a [(&'a VarietyHandle, &'a Word)],
        alphabet: &'a [Letter],
        pruner: &'a Pruner<'a>,
        pool: &'a Pool,
        max_len: usize,
        exact: bool,
        first_only: bool,
    ) -> Dfs<'a> {
        let states = pruner.assignments.iter().map(|a| vec![a.identity(); a.len()]).collect();
        let mut dfs = Dfs {
            constraints,
            alphabet,
            pruner,
            states,
            undo: Vec::new(),
            pool,
            learned: Vec::new(),
            path: vec![Vec::new()],
            cut: usize::MAX,
            max_len,
            exact,
            first_only,
            out: Candidates::default(),
        };
        dfs.adopt(&[]);
        dfs
    }

    /// Takes clauses learned since the last call, evaluated on the prefix `w`.
    fn adopt(&mut self, w: &[u8]) {
        let fresh: Vec<Arc<Clause>> = {
            let pool = self.pool.lock().expect("pool");
            pool[self.learned.len()..].to_vec()
        };
        for cl in fresh {
            let (m, _) = &self.pruner.models[cl.model];
            let mut s = m.identity() as u32;
            self.path[0].push(s);
            for (d, &c) in w.iter().enumerate() {
                s = m.mul(s as usize, cl.values[c as usize] as usize) as u32;
                self.path[d + 1].push(s);
                if !self.pruner.divides(&cl, s) {
                    self.cut = self.cut.min(d + 1);
                }
            }
            self.learned.push(cl);
        }
    }

    /// Shares an assignment refuting `a θ_h word` for later pruning.
    fn learn(&mut self, h: &VarietyHandle, a: &Word, word: &Word) {
        let Some((m, asg)) = h.refute(a, word) else { return };
        let Some(model) = self.pruner.models.iter().position(|(x, _)| std::ptr::eq(*x, m)) else { return };
        if let Some(cl) = Clause::new(model, m, &asg, a, self.alphabet) {
            let mut pool = self.pool.lock().expect("pool");
            if pool.len() < LEARNED_LIMIT {
                pool.push(Arc::new(cl));
            }
        }
    }

    /// Records `w` if it passes every constraint; `true` stops the search.
    fn leaf(&mut self, w: &[u8], cnt: &[usize]) -> bool {
        if (self.exact && w.len() != self.max_len) || !self.pruner.complete(w, cnt) {
            return false;
        }
        let reached = self.pruner.assignments.iter().zip(&self.states).all(|(a, st)| st[..] == a.targets[..])
            && self.learned.iter().zip(&self.path[w.len()]).all(|(cl, &s)| s == cl.target);
        if !reached {
            return false;
        }
        let word = decode(self.alphabet, w);
        let mut unknown = false;
        for &(h, a) in self.constraints {
            match h.relate(a, &word) {
                Answer::Yes => {}
                Answer::No => {
                    self.learn(h, a, &word);
                    self.adopt(w);
                    return false;
                }
                Answer::Unknown => unknown = true,
            }
        }
        if unknown {
            self.out.unknown.push(word);
            false
        } else {
            self.out.words.push(word);
            self.first_only
        }
    }

    /// Appends letter `c` to every assignment state; on failure the states
    /// are left unchanged.
    fn advance(&mut self, c: u8) -> bool {
        let mark = self.undo.len();
        for (k, a) in self.pruner.assignments.iter().enumerate() {
            let st = &mut self.states[k];
            for &(i, v) in &a.by_letter[c as usize] {
                let old = st[i as usize];
                match a.step(i, old, v) {
                    Some(next) => {
                        st[i as usize] = next;
                        self.undo.push((k as u32, i, old));
                    }
                    None => {
                        self.rewind(mark);
                        return false;
                    }
                }
            }
        }
        let last = self.path.last().expect("root");
        let mut next = Vec::with_capacity(last.len());
        for (cl, &s) in self.learned.iter().zip(last) {
            let (m, _) = &self.pruner.models[cl.model];
            let t = m.mul(s as usize, cl.values[c as usize] as usize) as u32;
            if !self.pruner.divides(cl, t) {
                self.rewind(mark);
                return false;
            }
            next.push(t);
        }
        self.path.push(next);
        true
    }

    fn rewind(&mut self, mark: usize) {
        while self.undo.len() > mark {
            let (k, i, old) = self.undo.pop().expect("nonempty");
            self.states[k as usize][i as usize] = old;
        }
    }

    /// Undoes a successful `advance`.
    fn retreat(&mut self, mark: usize) {
        self.rewind(mark);
        self.path.pop();
    }

    fn run(&mut self, w: &mut Vec<u8>, cnt: &mut Vec<usize>) -> bool {
        if self.leaf(w, cnt) {
            return true;
        }
        if self.cut <= w.len() || w.len() == self.max_len {
            return false;
        }
        for c in 0..self.alphabet.len() as u8 {
            w.push(c);
            cnt[c as usize] += 1;
            let fits = self.pruner.needed(cnt).is_some_and(|n| n + w.len() <= self.max_len);
            if fits && self.pruner.prefix_ok(w, c) {
                let mark = self.undo.len();
                if self.advance(c) {
                    if self.run(w, cnt) {
                        return true;
                    }
                    self.retreat(mark);
                }
            }
            cnt[c as usize] -= 1;
            w.pop();
            if self.cut <= w.len() {
                return false;
            }
            if self.cut == w.len() + 1 {
                self.cut = usize::MAX;
            }
        }
        false
    }
}

/// All words `w` over `alphabet` with `|w| ≤ max_len` such that every
/// constraint `(h, a)` has `a θ_h w`, in shortlex order. With `first_only`
/// the search stops at the shortlex-least such word.
pub fn meet_candidates(
    constraints: &[(&VarietyHandle, &Word)],
    alphabet: &[Letter],
    max_len: usize,
    first_only: bool,
) -> Candidates {
    let Some(pruner) = Pruner::new(constraints, alphabet, max_len) else { return Candidates::default() };
    let pool = Pool::default();
    if !first_only {
        return search(constraints, alphabet, &pruner, &pool, max_len, false, false);
    }
    let mut out = Candidates::default();
    for len in 0..=max_len {
        let c = search(constraints, alphabet, &pruner, &pool, len, true, true);
        out.unknown.extend(c.unknown);
        if let Some(first) = c.words.into_iter().next() {
            out.words.push(first);
            break;
        }
    }
    out.unknown.sort();
    out
}

fn search(
    constraints: &[(&VarietyHandle, &Word)],
    alphabet: &[Letter],
    pruner: &Pruner<'_>,
    pool: &Pool,
    max_len: usize,
    exact: bool,
    first_only: bool,
) -> Candidates {
    let k = alphabet.len();
    let mut branches: Vec<Option<u8>> = vec![None];
    branches.extend((0..k as u8).map(Some));
    let results: Vec<Candidates> = branches
        .par_iter()
        .map(|b| {
            let mut dfs = Dfs::new(constraints, alphabet, pruner, pool, max_len, exact, first_only);
            let mut w = Vec::new();
            let mut cnt = vec![0; k];
            match b {
                None => {
                    dfs.leaf(&w, &cnt);
                }
                Some(_) if max_len == 0 => {}
                Some(c) => {
                    w.push(*c);
                    cnt[*c as usize] += 1;
                    let fits = pruner.needed(&cnt).is_some_and(|n| n < max_len);
                    if fits && pruner.prefix_ok(&w, *c) && dfs.advance(*c) {
                        dfs.run(&mut w, &mut cnt);
                    }
                }
            }
            dfs.out
        })
        .collect();
    let mut out = Candidates::default();
    for r in results {
        out.words.extend(r.words);
        out.unknown.extend(r.unknown);
    }
    out.words.sort();
    out.words.dedup();
    out.unknown.sort();
    out.unknown.dedup();
    out
}

/// Letters of `u` and `v` plus `extra`, sorted.
pub fn default_alphabet(u: &Word, v: &Word, extra: &BTreeSet<Letter>) -> Vec<Letter> {
    let mut s = u.content();
    s.extend(v.content());
    s.extend(extra.iter().cloned());
    s.into_iter().collect()
}

/// Is `(u, v)` in the product `θ_{h1} θ_{h2} ⋯ θ_{hk}` restricted to words of
/// length at most `max_len` over the letters of `u` and `v`?
pub fn product_member(hs: &[&VarietyHandle], u: &Word, v: &Word, max_len: usize) -> ProductResult {
    product_member_over(hs, u, v, max_len, &default_alphabet(u, v, &BTreeSet::new()))
}

pub fn product_member_over(
    hs: &[&VarietyHandle],
    u: &Word,
    v: &Word,
    max_len: usize,
    alphabet: &[Letter],
) -> ProductResult {
    match hs.len() {
        0 => {
            if u == v {
                ProductResult::Found(Vec::new())
            } else {
                ProductResult::NotFoundWithinBounds
            }
        }
        1 => match hs[0].relate(u, v) {
            Answer::Yes => ProductResult::Found(Vec::new()),
            Answer::No => ProductResult::NotFoundWithinBounds,
            Answer::Unknown => ProductResult::UnknownLinks,
        },
        k => {
            // Frontier of words reachable from `u` in the first k-2 links,
            // with the chain that reached each.
            let mut frontier: BTreeMap<Word, Vec<Word>> = BTreeMap::from([(u.clone(), Vec::new())]);
            let mut unknown = false;
            for h in &hs[..k - 2] {
                let mut next: BTreeMap<Word, Vec<Word>> = BTreeMap::new();
                for (a, chain) in &frontier {
                    let c = meet_candidates(&[(h, a)], alphabet, max_len, false);
                    unknown |= !c.unknown.is_empty();
                    for wd in c.words {
                        next.entry(wd.clone()).or_insert_with(|| {
                            let mut ch = chain.clone();
                            ch.push(wd);
                            ch
                        });
                    }
                }
                frontier = next;
            }
            let (h1, h2) = (hs[k - 2], hs[k - 1]);
            for (a, chain) in &frontier {
                let c = meet_candidates(&[(h1, a), (h2, v)], alphabet, max_len, true);
                if let Some(m) = c.words.first() {
                    let mut ch = chain.clone();
                    ch.push(m.clone());
                    return ProductResult::Found(ch);
                }
                unknown |= !c.unknown.is_empty();
            }
            if unknown {
                ProductResult::UnknownLinks
            } else {
                ProductResult::NotFoundWithinBounds
            }
        }
    }
}

/// `X, Y, X, ...` with `n` entries.
pub fn alternating<'a>(x: &'a VarietyHandle, y: &'a VarietyHandle, n: usize) -> Vec<&'a VarietyHandle> {
    (0..n).map(|i| if i % 2 == 0 { x } else { y }).collect()
}
