//! The verification suite: registered cases, decider audits and invariants.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::catalog::{
    c_word, d_generator, named_identity, variety_basis, w_word, IdentitySystem, Permutation, Variety,
};
use crate::deciders::{audit, ExactTheory};
use crate::engine::{derive, replay, DerivationResult};
use crate::error::{Error, Result};
use crate::lab::{named_poset, run_case, CaseReport, FinitePoset, Params, RunOptions, Verdict};
use crate::monoid::{build_sw, satisfies, FiniteMonoid};
use crate::word::{ident, w, Identity};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Profile> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(Error::Parameter(format!("unknown profile {s:?}"))),
        }
    }
}

/// A case run with parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseRun {
    pub id: String,
    pub params: Params,
}

impl CaseRun {
    pub fn new(id: &str, params: &[(&str, &str)]) -> CaseRun {
        CaseRun { id: id.into(), params: params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect() }
    }
}

/// What a suite run executes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuitePlan {
    pub profile: Profile,
    pub cases: Vec<CaseRun>,
    pub audits: bool,
    pub invariants: bool,
}

impl SuitePlan {
    pub fn empty(profile: Profile) -> SuitePlan {
        SuitePlan { profile, cases: Vec::new(), audits: false, invariants: false }
    }

    pub fn of(profile: Profile) -> SuitePlan {
        let mut cases: Vec<CaseRun> = ["nonperm-i", "nonperm-ii", "nonperm-iii", "nonperm-iv", "nonperm-v"]
            .iter()
            .map(|id| CaseRun::new(id, &[]))
            .collect();
        cases.push(CaseRun::new("remark-4perm", &[("p", "2")]));
        cases.push(CaseRun::new("remark-4perm", &[("p", "3")]));
        cases.push(CaseRun::new("lifting-sanity", &[]));
        if profile == Profile::Full {
            for id in ["nonperm-vi", "nonperm-vii", "nonperm-viii", "cnm-pair", "wn-pair"] {
                cases.push(CaseRun::new(id, &[]));
            }
        }
        SuitePlan { profile, cases, audits: true, invariants: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditSummary {
    pub theory: ExactTheory,
    pub oracle_size: usize,
    pub max_len: usize,
    pub checked: usize,
    pub disagreements: usize,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub name: String,
    pub detail: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub profile: Profile,
    pub cases: Vec<CaseReport>,
    pub audits: Vec<AuditSummary>,
    pub invariants: Vec<InvariantReport>,
    /// Seconds per case run, audit block and invariant block.
    pub timings: BTreeMap<String, f64>,
    pub verdict: Verdict,
}

impl SuiteReport {
    pub fn counts(&self) -> BTreeMap<&'static str, usize> {
        let mut c = BTreeMap::from([("pass", 0), ("fail", 0), ("unknown", 0)]);
        let verdicts = self
            .cases
            .iter()
            .map(|r| r.verdict)
            .chain(self.audits.iter().map(|a| a.verdict))
            .chain(self.invariants.iter().map(|i| i.verdict));
        for v in verdicts {
            *c.get_mut(verdict_name(v)).expect("key") += 1;
        }
        c
    }
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Unknown => "unknown",
    }
}

fn combine(a: Verdict, b: Verdict) -> Verdict {
    match (a, b) {
        (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
        (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
        _ => Verdict::Pass,
    }
}

fn pass_if(b: bool) -> Verdict {
    if b {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Decider audits against generating monoids over two-letter identities
/// with sides of at most `max_len` letters.
pub fn decider_audits(max_len: usize) -> Vec<AuditSummary> {
    let mut pairs: Vec<(ExactTheory, FiniteMonoid)> = vec![(ExactTheory::Sl, FiniteMonoid::semilattice())];
    for n in 1..=4 {
        pairs.push((ExactTheory::Abelian(n), FiniteMonoid::cyclic_group(n as usize)));
    }
    for n in 1..=3 {
        pairs.push((ExactTheory::Commutative(n), FiniteMonoid::cyclic_aperiodic(n as usize)));
    }
    for (k, l) in [(1, 3), (2, 4), (2, 5)] {
        pairs.push((ExactTheory::Com(k, l), FiniteMonoid::monogenic(k as usize, (l - k) as usize)));
    }
    pairs
        .into_iter()
        .map(|(th, m)| {
            let r = audit(th, &m, max_len);
            AuditSummary {
                theory: th,
                oracle_size: r.oracle_size,
                max_len,
                checked: r.checked,
                disagreements: r.disagreements.len(),
                verdict: pass_if(r.disagreements.is_empty()),
            }
        })
        .collect()
}

/// Derives `goal` from `sys` within `max_len` letters and replays the chain.
pub fn derivation_check(name: &str, sys: &IdentitySystem, goal: &Identity, max_len: usize) -> InvariantReport {
    let (verdict, detail) = match derive(sys, goal, max_len, 1_000_000, &[]) {
        DerivationResult::Proved(chain) => {
            let ok = replay(sys, goal, &chain);
            (pass_if(ok), format!("{} steps, replay {}", chain.len(), if ok { "ok" } else { "failed" }))
        }
        DerivationResult::RefutedByModel { .. } => (Verdict::Fail, "refuted".into()),
        DerivationResult::Unknown(r) => (Verdict::Unknown, format!("{r:?}")),
    };
    InvariantReport { name: name.into(), detail, verdict }
}

/// `σ3, xxy ≈ yxx ⊢ w_n[ε,ε] ≈ w'_n[ε,ε]`.
pub fn wn_derivation(n: usize) -> Result<InvariantReport> {
    let sys = IdentitySystem::new("sigma3, xxy = yxx", vec![named_identity("sigma3")?, ident("xxy = yxx")]);
    let e = Permutation::identity(n);
    let goal = Identity::new(w_word(n, &e, &e, false)?, w_word(n, &e, &e, true)?);
    let len = goal.lhs.len();
    Ok(derivation_check(&format!("derive w{n} from sigma3 and xxy = yxx"), &sys, &goal, len))
}

/// `σ3, xytxy ≈ yxtxy ⊢ c_{0,0,1} ≈ c'_{0,0,1}`.
pub fn c001_derivation() -> Result<InvariantReport> {
    let sys = IdentitySystem::new("sigma3, xytxy = yxtxy", vec![named_identity("sigma3")?, ident("xytxy = yxtxy")]);
    let e = Permutation::identity(1);
    let goal = Identity::new(c_word(0, 0, 1, &e, false)?, c_word(0, 0, 1, &e, true)?);
    let len = goal.lhs.len();
    Ok(derivation_check("derive c001 from sigma3 and xytxy = yxtxy", &sys, &goal, len))
}

/// `S(W)` sizes, `D_k` bases in their generators, derivations, and the
/// distributivity of the figure lattices.
pub fn invariant_checks(profile: Profile) -> Result<Vec<InvariantReport>> {
    let mut out = Vec::new();
    for (word, size) in [("xy", 5), ("xtx", 7)] {
        let m = build_sw(&[w(word)]);
        let ok =
            m.size() == size && m.audit_associativity().is_none() && m.audit_identity().is_none() && m.audit_zero();
        out.push(InvariantReport {
            name: format!("S({word}) has {size} elements"),
            detail: format!("{} elements", m.size()),
            verdict: pass_if(ok),
        });
    }
    for k in 1..=3 {
        let sys = variety_basis(&Variety::D(Some(k)), 1)?;
        let m = build_sw(&[d_generator(k)]);
        let failing: Vec<String> =
            sys.identities.iter().filter(|id| !satisfies(&m, id).holds()).map(|id| id.to_string()).collect();
        out.push(InvariantReport {
            name: format!("S({}) satisfies the D{k} basis", d_generator(k)),
            detail: if failing.is_empty() {
                format!("{} identities", sys.identities.len())
            } else {
                failing.join("; ")
            },
            verdict: pass_if(failing.is_empty()),
        });
    }
    out.push(wn_derivation(1)?);
    if profile == Profile::Full {
        out.push(wn_derivation(2)?);
    }
    out.push(c001_derivation()?);
    for (name, distributive) in [("fig1", true), ("fig2", true), ("m3", false), ("n5", false)] {
        let p = FinitePoset::new(&named_poset(name)?)?;
        let (verdict, detail) = match p.check_distributive() {
            Ok(None) => (pass_if(distributive), "distributive".to_string()),
            Ok(Some((a, b, c))) => (pass_if(!distributive), format!("fails at ({a}, {b}, {c})")),
            Err(e) => (Verdict::Fail, e.to_string()),
        };
        let expect = if distributive { "is" } else { "is not" };
        out.push(InvariantReport { name: format!("{name} {expect} a distributive lattice"), detail, verdict });
    }
    Ok(out)
}

pub fn run_suite(profile: Profile, opts: &RunOptions) -> Result<SuiteReport> {
    run_plan(&SuitePlan::of(profile), opts)
}

pub fn run_plan(plan: &SuitePlan, opts: &RunOptions) -> Result<SuiteReport> {
    let mut timings = BTreeMap::new();
    let mut verdict = Verdict::Pass;
    let mut cases = Vec::new();
    for run in &plan.cases {
        let t = Instant::now();
        let r = run_case(&run.id, &run.params, opts)?;
        let key = if run.params.is_empty() {
            run.id.clone()
        } else {
            let ps: Vec<String> = run.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{}[{}]", run.id, ps.join(","))
        };
        timings.insert(key, t.elapsed().as_secs_f64());
        verdict = combine(verdict, r.verdict);
        cases.push(r);
    }
    let mut audits = Vec::new();
    if plan.audits {
        let t = Instant::now();
        audits = decider_audits(6);
        timings.insert("audits".into(), t.elapsed().as_secs_f64());
        verdict = audits.iter().fold(verdict, |v, a| combine(v, a.verdict));
    }
    let mut invariants = Vec::new();
    if plan.invariants {
        let t = Instant::now();
        invariants = invariant_checks(plan.profile)?;
        timings.insert("invariants".into(), t.elapsed().as_secs_f64());
        verdict = invariants.iter().fold(verdict, |v, i| combine(v, i.verdict));
    }
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        profile: plan.profile,
        cases,
        audits,
        invariants,
        timings,
        verdict,
    })
}
