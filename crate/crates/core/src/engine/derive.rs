//! Bounded derivations of identities from identity systems.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::rewrite::{Application, Rewriter};
use crate::catalog::IdentitySystem;
use crate::monoid::{satisfies, Assignment, FiniteMonoid, Satisfaction};
use crate::word::{Identity, Letter, Word};

/// One rewrite `before → after` by rule `rule` (0-based index in the system)
/// used left-to-right when `forward`, at letter position `position`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteStep {
    pub before: Word,
    pub after: Word,
    pub rule: usize,
    pub forward: bool,
    pub position: usize,
    pub substitution: BTreeMap<Letter, Word>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum UnknownReason {
    StepBudget,
    MemoryBudget,
    /// Every word within the length bound reachable from one side was seen.
    ExhaustedWithinLength,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivationResult {
    Proved(Vec<RewriteStep>),
    /// Model `model` satisfies the system but fails the goal at `witness`.
    RefutedByModel {
        model: usize,
        witness: Assignment,
    },
    Unknown(UnknownReason),
}

impl DerivationResult {
    pub fn is_proved(&self) -> bool {
        matches!(self, DerivationResult::Proved(_))
    }
}

/// Bounds for a derivation search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_len: usize,
    /// Maximum number of word expansions.
    pub max_steps: usize,
    pub max_mem_bytes: Option<usize>,
}

impl Limits {
    pub fn new(max_len: usize, max_steps: usize) -> Limits {
        Limits { max_len, max_steps, max_mem_bytes: None }
    }
}

/// Models that have been checked against a system.
#[derive(Clone, Debug)]
pub struct AuditedModels {
    models: Vec<FiniteMonoid>,
    valid: Vec<bool>,
}

impl AuditedModels {
    pub fn new(sys: &IdentitySystem, models: Vec<FiniteMonoid>) -> AuditedModels {
        let valid = models
            .iter()
            .map(|m| m.audit_associativity().is_none() && sys.identities.iter().all(|id| satisfies(m, id).holds()))
            .collect();
        AuditedModels { models, valid }
    }

    pub fn empty() -> AuditedModels {
        AuditedModels { models: Vec::new(), valid: Vec::new() }
    }

    pub fn models(&self) -> &[FiniteMonoid] {
        &self.models
    }

    /// Models that passed the audit.
    pub fn valid(&self) -> impl Iterator<Item = &FiniteMonoid> {
        self.models.iter().zip(&self.valid).filter(|(_, v)| **v).map(|(m, _)| m)
    }

    /// Indices of models that failed the audit.
    pub fn rejected(&self) -> Vec<usize> {
        (0..self.valid.len()).filter(|&i| !self.valid[i]).collect()
    }

    /// First audited model failing `goal`.
    pub fn refute(&self, goal: &Identity) -> Option<(usize, Assignment)> {
        for (i, m) in self.models.iter().enumerate() {
            if !self.valid[i] {
                continue;
            }
            if let Satisfaction::Fails(a) = satisfies(m, goal) {
                return Some((i, a));
            }
        }
        None
    }
}

/// Tries to derive `goal` from `sys` by rewriting within `max_len` letters
/// and `max_steps` expansions. Models are first audited against `sys`;
/// a model that satisfies `sys` but not `goal` refutes it.
pub fn derive(
    sys: &IdentitySystem,
    goal: &Identity,
    max_len: usize,
    max_steps: usize,
    models: &[FiniteMonoid],
) -> DerivationResult {
    let audited = AuditedModels::new(sys, models.to_vec());
    derive_with(sys, goal, Limits::new(max_len, max_steps), &audited)
}

pub fn derive_with(sys: &IdentitySystem, goal: &Identity, limits: Limits, models: &AuditedModels) -> DerivationResult {
    if goal.is_trivial() {
        return DerivationResult::Proved(Vec::new());
    }
    if let Some((model, witness)) = models.refute(goal) {
        return DerivationResult::RefutedByModel { model, witness };
    }
    search(sys, goal, limits)
}

/// Letters of the goal plus one fresh letter for rule variables that occur
/// on one side only.
fn local_alphabet(sys: &IdentitySystem, goal: &Identity) -> Vec<Letter> {
    let mut alphabet: BTreeSet<Letter> = goal.content();
    let one_sided = sys.identities.iter().any(|id| id.lhs.content() != id.rhs.content());
    if one_sided {
        let mut i = 0;
        loop {
            let fresh = Letter::indexed("f", i);
            if !alphabet.contains(&fresh) {
                alphabet.insert(fresh);
                break;
            }
            i += 1;
        }
    }
    alphabet.into_iter().collect()
}

struct Node {
    word: Vec<u8>,
    parent: Option<u32>,
}

struct Side {
    nodes: Vec<Node>,
    index: HashMap<Vec<u8>, u32>,
    frontier: Vec<u32>,
}

impl Side {
    fn new(start: Vec<u8>) -> Side {
        let mut index = HashMap::new();
        index.insert(start.clone(), 0);
        Side { nodes: vec![Node { word: start, parent: None }], index, frontier: vec![0] }
    }

    /// Steps from the root to node `i`.
    fn path(&self, rw: &Rewriter, mut i: u32) -> Vec<(Vec<u8>, Vec<u8>, Application)> {
        let mut out = Vec::new();
        while let Some(p) = self.nodes[i as usize].parent {
            let (before, after) = (&self.nodes[p as usize].word, &self.nodes[i as usize].word);
            let app = rw.find(before, after).expect("recorded edge");
            out.push((before.clone(), after.clone(), app));
            i = p;
        }
        out.reverse();
        out
    }

    fn depth(&self, mut i: u32) -> usize {
        let mut d = 0;
        while let Some(p) = self.nodes[i as usize].parent {
            d += 1;
            i = p;
        }
        d
    }
}

/// Bidirectional breadth-first search, run for each length bound from the
/// goal length up to `max_len`. Steps are shared across rounds, so raising
/// either bound never loses a proof found under the smaller bounds.
fn search(sys: &IdentitySystem, goal: &Identity, limits: Limits) -> DerivationResult {
    let alphabet = local_alphabet(sys, goal);
    let rw = Rewriter::new(sys, alphabet);
    let lhs = rw.encode(&goal.lhs).expect("goal letters are in the alphabet");
    let rhs = rw.encode(&goal.rhs).expect("goal letters are in the alphabet");
    let start = lhs.len().max(rhs.len());
    let mut steps = 0usize;
    let mut last = UnknownReason::ExhaustedWithinLength;
    for bound in start..=limits.max_len.max(start) {
        match search_bounded(&rw, &lhs, &rhs, bound, limits, &mut steps) {
            Ok(chain) => return DerivationResult::Proved(to_steps(&rw, chain)),
            Err(UnknownReason::ExhaustedWithinLength) => last = UnknownReason::ExhaustedWithinLength,
            Err(r) => return DerivationResult::Unknown(r),
        }
        if bound >= limits.max_len {
            break;
        }
    }
    DerivationResult::Unknown(last)
}

fn to_steps(rw: &Rewriter, chain: Vec<(Vec<u8>, Vec<u8>, Application)>) -> Vec<RewriteStep> {
    chain
        .into_iter()
        .map(|(b, a, app)| RewriteStep {
            before: rw.decode(&b),
            after: rw.decode(&a),
            rule: app.rule,
            forward: app.from == 0,
            position: app.pos,
            substitution: rw.substitution(app.rule, &app.sub),
        })
        .collect()
}

type Chain = Vec<(Vec<u8>, Vec<u8>, Application)>;

fn search_bounded(
    rw: &Rewriter,
    lhs: &[u8],
    rhs: &[u8],
    bound: usize,
    limits: Limits,
    steps: &mut usize,
) -> Result<Chain, UnknownReason> {
    let mut sides = [Side::new(lhs.to_vec()), Side::new(rhs.to_vec())];
    let mut bytes = 0usize;
    loop {
        if sides[0].frontier.is_empty() || sides[1].frontier.is_empty() {
            return Err(UnknownReason::ExhaustedWithinLength);
        }
        let s = if sides[1].frontier.len() < sides[0].frontier.len() { 1 } else { 0 };
        let mut frontier = std::mem::take(&mut sides[s].frontier);
        frontier.sort_by(|a, b| {
            let (wa, wb) = (&sides[s].nodes[*a as usize].word, &sides[s].nodes[*b as usize].word);
            wa.len().cmp(&wb.len()).then(wa.cmp(wb))
        });
        let mut next = Vec::new();
        let mut meets: Vec<(u32, u32)> = Vec::new();
        for &i in &frontier {
            *steps += 1;
            if *steps > limits.max_steps {
                return Err(UnknownReason::StepBudget);
            }
            let cur = sides[s].nodes[i as usize].word.clone();
            let mut found: Vec<Vec<u8>> = Vec::new();
            rw.successors(&cur, bound, &mut |nw, _| {
                if !sides[s].index.contains_key(nw) {
                    found.push(nw.to_vec())
                }
            });
            let (mine, other) = if s == 0 {
                let (a, b) = sides.split_at_mut(1);
                (&mut a[0], &b[0])
            } else {
                let (a, b) = sides.split_at_mut(1);
                (&mut b[0], &a[0])
            };
            for nw in found {
                if mine.index.contains_key(&nw) {
                    continue;
                }
                let id = mine.nodes.len() as u32;
                bytes += 2 * nw.len() + 96;
                mine.index.insert(nw.clone(), id);
                if let Some(&o) = other.index.get(&nw) {
                    meets.push((id, o));
                }
                mine.nodes.push(Node { word: nw, parent: Some(i) });
                next.push(id);
            }
            if limits.max_mem_bytes.is_some_and(|m| bytes > m) {
                return Err(UnknownReason::MemoryBudget);
            }
        }
        if !meets.is_empty() {
            let best = meets
                .into_iter()
                .min_by_key(|&(a, b)| {
                    let (fa, fb) = if s == 0 { (a, b) } else { (b, a) };
                    (sides[0].depth(fa) + sides[1].depth(fb), sides[0].nodes[fa as usize].word.clone())
                })
                .expect("nonempty");
            let (fa, fb) = if s == 0 { best } else { (best.1, best.0) };
            return Ok(join(rw, &sides[0], fa, &sides[1], fb));
        }
        sides[s].frontier = next;
    }
}

/// Forward path to the meeting word, then the backward path reversed.
fn join(rw: &Rewriter, fwd: &Side, fa: u32, bwd: &Side, fb: u32) -> Chain {
    let mut chain = fwd.path(rw, fa);
    for (b, a, app) in bwd.path(rw, fb).into_iter().rev() {
        let inverse = Application { rule: app.rule, from: 1 - app.from, pos: app.pos, sub: app.sub };
        chain.push((a, b, inverse));
    }
    chain
}

/// Checks a chain step by step against the system and the goal.
pub fn replay(sys: &IdentitySystem, goal: &Identity, chain: &[RewriteStep]) -> bool {
    if chain.is_empty() {
        return goal.is_trivial();
    }
    if chain[0].before != goal.lhs || chain[chain.len() - 1].after != goal.rhs {
        return false;
    }
    if chain.windows(2).any(|p| p[0].after != p[1].before) {
        return false;
    }
    chain.iter().all(|st| replay_step(sys, st))
}

fn replay_step(sys: &IdentitySystem, st: &RewriteStep) -> bool {
    let Some(id) = sys.identities.get(st.rule) else { return false };
    let (pat, rep) = if st.forward { (&id.lhs, &id.rhs) } else { (&id.rhs, &id.lhs) };
    let vars = id.content();
    if st.substitution.keys().any(|k| !vars.contains(k)) {
        return false;
    }
    let img = |w: &Word| {
        let mut out = Vec::new();
        for l in w.letters() {
            match st.substitution.get(l) {
                Some(x) => out.extend(x.letters().iter().cloned()),
                None => return None,
            }
        }
        Some(out)
    };
    let (Some(p), Some(r)) = (img(pat), img(rep)) else { return false };
    let before = st.before.letters();
    if st.position + p.len() > before.len() || before[st.position..st.position + p.len()] != p[..] {
        return false;
    }
    let mut out = before[..st.position].to_vec();
    out.extend(r);
    out.extend_from_slice(&before[st.position + p.len()..]);
    Word::new(out) == st.after
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{variety_basis, Variety, DEFAULT_CAP};
    use crate::monoid::build_sw;
    use crate::word::{ident, w};

    fn sys(ids: &[&str]) -> IdentitySystem {
        IdentitySystem::new("t", ids.iter().map(|s| ident(s)).collect())
    }

    #[test]
    fn powers() {
        let s = sys(&["xx = xxx"]);
        let goal = ident("xx = xxxxx");
        match derive(&s, &goal, 5, 10_000, &[]) {
            DerivationResult::Proved(chain) => {
                assert_eq!(chain.len(), 3);
                assert!(replay(&s, &goal, &chain));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn w1_from_sigma3() {
        let s = sys(&["xsxyty = xsyxty", "xxy = yxx"]);
        let goal = Identity::new(w("z1 t1 x z1 z2 x t2 z2"), w("z1 t1 x x z1 z2 t2 z2"));
        let r = derive(&s, &goal, 12, 1_000_000, &[]);
        let DerivationResult::Proved(chain) = r else { panic!("{r:?}") };
        assert!(replay(&s, &goal, &chain));
    }

    #[test]
    fn refuted_by_isoterm_model() {
        let d2 = variety_basis(&Variety::D(Some(2)), DEFAULT_CAP).unwrap();
        let r = derive(&d2, &ident("xyx = xxy"), 8, 100_000, &[build_sw(&[w("xtx")])]);
        assert!(matches!(r, DerivationResult::RefutedByModel { model: 0, .. }));
    }

    #[test]
    fn models_failing_the_system_are_ignored() {
        let s = sys(&["xy = yx"]);
        let m = build_sw(&[w("xy")]);
        let audited = AuditedModels::new(&s, vec![m]);
        assert_eq!(audited.rejected(), vec![0]);
        let r = derive_with(&s, &ident("xyx = xxy"), Limits::new(3, 1000), &audited);
        assert!(r.is_proved());
    }

    #[test]
    fn unknown_on_budget() {
        let s = sys(&["xx = xxx"]);
        assert_eq!(
            derive(&s, &ident("x = xx"), 6, 1000, &[]),
            DerivationResult::Unknown(UnknownReason::ExhaustedWithinLength)
        );
        let s = sys(&["xsxyty = xsyxty", "xxy = yxx"]);
        let goal = Identity::new(w("z1 t1 x z1 z2 x t2 z2"), w("z1 t1 x x z1 z2 t2 z2"));
        assert_eq!(derive(&s, &goal, 12, 2, &[]), DerivationResult::Unknown(UnknownReason::StepBudget));
    }

    #[test]
    fn replay_rejects_tampering() {
        let s = sys(&["xx = xxx"]);
        let goal = ident("xx = xxxx");
        let DerivationResult::Proved(mut chain) = derive(&s, &goal, 4, 1000, &[]) else { panic!() };
        assert!(replay(&s, &goal, &chain));
        chain[0].position += 5;
        assert!(!replay(&s, &goal, &chain));
    }
}
