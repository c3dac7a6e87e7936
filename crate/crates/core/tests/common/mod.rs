//! Naive reference implementations used as test oracles.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use monoidlab::monoid::FiniteMonoid;
use monoidlab::{Identity, Letter, Word};
use rand::Rng;

/// All factors of the words in `ws`, the empty word included, by slicing.
pub fn naive_factors(ws: &[Word]) -> BTreeSet<Vec<Letter>> {
    let mut out = BTreeSet::new();
    out.insert(Vec::new());
    for w in ws {
        let l = w.letters();
        for i in 0..l.len() {
            for j in i + 1..=l.len() {
                out.insert(l[i..j].to_vec());
            }
        }
    }
    out
}

/// Does `m` satisfy `id`, by trying every assignment?
pub fn naive_satisfies(m: &FiniteMonoid, id: &Identity) -> bool {
    let letters: Vec<Letter> = id.content().into_iter().collect();
    let k = letters.len();
    let pos: HashMap<&Letter, usize> = letters.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let eval = |w: &Word, asg: &[usize]| w.letters().iter().fold(m.identity(), |v, l| m.mul(v, asg[pos[l]]));
    let mut asg = vec![0; k];
    loop {
        if eval(&id.lhs, &asg) != eval(&id.rhs, &asg) {
            return false;
        }
        let mut i = 0;
        loop {
            if i == k {
                return true;
            }
            asg[i] += 1;
            if asg[i] < m.size() {
                break;
            }
            asg[i] = 0;
            i += 1;
        }
    }
}

/// Every word over `letters` of length at most `max_len`.
pub fn naive_words(letters: &[Letter], max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in letters {
                let mut v = w.clone();
                v.push(l.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out.into_iter().map(Word::new).collect()
}

fn split_blocks(w: &Word) -> (Vec<Letter>, Vec<Vec<Letter>>) {
    let count = |x: &Letter| w.letters().iter().filter(|y| *y == x).count();
    let mut skeleton = Vec::new();
    let mut blocks = vec![Vec::new()];
    for l in w.letters() {
        if count(l) == 1 {
            skeleton.push(l.clone());
            blocks.push(Vec::new());
        } else {
            blocks.last_mut().expect("block").push(l.clone());
        }
    }
    (skeleton, blocks)
}

/// Block-by-block comparison of the two sides.
pub fn naive_linear_balanced(id: &Identity) -> bool {
    let (s1, b1) = split_blocks(&id.lhs);
    let (s2, b2) = split_blocks(&id.rhs);
    if s1 != s2 {
        return false;
    }
    for (x, y) in b1.iter().zip(&b2) {
        let mut xs = x.clone();
        let mut ys = y.clone();
        xs.sort();
        ys.sort();
        if xs != ys {
            return false;
        }
        let mut seen = HashSet::new();
        if !xs.iter().all(|l| seen.insert(l)) {
            return false;
        }
    }
    true
}

/// Least number of swaps of adjacent distinct multiple letters turning the
/// left side into the right side, by breadth-first search.
pub fn bfs_invertibility(id: &Identity) -> Option<usize> {
    let start: Vec<Letter> = id.lhs.letters().to_vec();
    let goal: Vec<Letter> = id.rhs.letters().to_vec();
    let simple: BTreeSet<Letter> = id.lhs.simple();
    let mut seen: HashSet<Vec<Letter>> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((cur, d)) = queue.pop_front() {
        if cur == goal {
            return Some(d);
        }
        for i in 0..cur.len().saturating_sub(1) {
            let (a, b) = (&cur[i], &cur[i + 1]);
            if a == b || simple.contains(a) || simple.contains(b) {
                continue;
            }
            let mut next = cur.clone();
            next.swap(i, i + 1);
            if seen.insert(next.clone()) {
                queue.push_back((next, d + 1));
            }
        }
    }
    None
}

pub fn letters(names: &[&str]) -> Vec<Letter> {
    names.iter().map(|s| Letter::plain(s)).collect()
}

pub fn random_word(rng: &mut impl Rng, alphabet: &[Letter], max_len: usize) -> Word {
    let n = rng.gen_range(0..=max_len);
    Word::new((0..n).map(|_| alphabet[rng.gen_range(0..alphabet.len())].clone()).collect())
}

/// A random linear-balanced identity: blocks of distinct multiple letters
/// separated by simple letters, with each block permuted on the right.
pub fn random_linear_balanced(rng: &mut impl Rng, max_len: usize) -> Identity {
    let multiple = letters(&["x", "y", "z", "u", "v"]);
    let simple = letters(&["s", "t", "h"]);
    let seps = rng.gen_range(0..=simple.len());
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for (b, sep) in simple.iter().take(seps).map(Some).chain([None]).enumerate() {
        let mut block: Vec<Letter> = multiple.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        while lhs.len() + block.len() + seps - b > max_len && !block.is_empty() {
            block.pop();
        }
        let mut perm = block.clone();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        lhs.extend(block);
        rhs.extend(perm);
        if let Some(t) = sep {
            lhs.push(t.clone());
            rhs.push(t.clone());
        }
    }
    let mut id = Identity::new(Word::new(lhs), Word::new(rhs));
    // Letters used once would be simple; repair by dropping them.
    let once: BTreeSet<Letter> = id.lhs.simple().into_iter().filter(|l| !simple.contains(l)).collect();
    if !once.is_empty() {
        id = id.delete(&once);
    }
    id
}

/// A random identity close to linear-balanced: either a random pair or a
/// linear-balanced identity with one letter moved.
pub fn random_identity(rng: &mut impl Rng, max_len: usize) -> Identity {
    match rng.gen_range(0..3) {
        0 => {
            let a = letters(&["x", "y", "t", "s"]);
            Identity::new(random_word(rng, &a, max_len / 2), random_word(rng, &a, max_len / 2))
        }
        1 => random_linear_balanced(rng, max_len),
        _ => {
            let id = random_linear_balanced(rng, max_len.saturating_sub(1));
            let mut r = id.rhs.letters().to_vec();
            if !r.is_empty() {
                let l = r.remove(rng.gen_range(0..r.len()));
                r.insert(rng.gen_range(0..=r.len()), l);
            }
            Identity::new(id.lhs, Word::new(r))
        }
    }
}

/// A lattice of subsets of `0..bits` closed under intersection and
/// containing the full set, with its meet and join.
pub struct SetLattice {
    pub sets: Vec<u32>,
}

impl SetLattice {
    pub fn random(rng: &mut impl Rng, bits: u32, gens: usize) -> SetLattice {
        let full = (1u32 << bits) - 1;
        let mut sets: BTreeSet<u32> = BTreeSet::from([full]);
        for _ in 0..gens {
            sets.insert(rng.gen_range(0..=full));
        }
        loop {
            let v: Vec<u32> = sets.iter().copied().collect();
            let before = sets.len();
            for &a in &v {
                for &b in &v {
                    sets.insert(a & b);
                }
            }
            if sets.len() == before {
                break;
            }
        }
        SetLattice { sets: sets.into_iter().collect() }
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        let m = self.sets[a] & self.sets[b];
        self.sets.iter().position(|&s| s == m).expect("closed")
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        let u = self.sets[a] | self.sets[b];
        let closure = self.sets.iter().filter(|&&s| s & u == u).fold(u32::MAX, |acc, &s| acc & s);
        self.sets.iter().position(|&s| s == closure).expect("closed")
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.sets[a] & self.sets[b] == self.sets[a]
    }

    pub fn name(i: usize) -> String {
        format!("e{i}")
    }
}

/// Some five elements closed under `meet` and `join` form a copy of M3 or N5.
pub fn has_m3_or_n5(
    n: usize,
    leq: &dyn Fn(usize, usize) -> bool,
    meet: &dyn Fn(usize, usize) -> usize,
    join: &dyn Fn(usize, usize) -> usize,
) -> bool {
    for bot in 0..n {
        for top in 0..n {
            if bot == top || !leq(bot, top) {
                continue;
            }
            let mid: Vec<usize> = (0..n).filter(|&e| e != bot && e != top && leq(bot, e) && leq(e, top)).collect();
            for (i, &a) in mid.iter().enumerate() {
                for (j, &b) in mid.iter().enumerate().skip(i + 1) {
                    for &c in mid.iter().skip(j + 1) {
                        let three = [a, b, c];
                        let pairs = [(a, b), (a, c), (b, c)];
                        // M3: pairwise meets bot, joins top.
                        if pairs.iter().all(|&(p, q)| meet(p, q) == bot && join(p, q) == top) {
                            return true;
                        }
                        // N5: one chain of two, the third complementing both.
                        for k in 0..3 {
                            let x = three[k];
                            let (p, q) = (three[(k + 1) % 3], three[(k + 2) % 3]);
                            let (lo, hi) = if leq(p, q) {
                                (p, q)
                            } else if leq(q, p) {
                                (q, p)
                            } else {
                                continue;
                            };
                            if lo != hi
                                && meet(x, lo) == bot
                                && meet(x, hi) == bot
                                && join(x, lo) == top
                                && join(x, hi) == top
                            {
                                return true;
                            }
                        }
                    }
                }
            }
        }
    }
    false
}
