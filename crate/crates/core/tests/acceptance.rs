//! Acceptance criteria 1-9: one PASS/FAIL line each, with pinned limits.

mod common;

use std::time::{Duration, Instant};

use common::*;
use monoidlab::catalog::{d_generator, variety_basis, w_word, word_family, Permutation, Variety, DEFAULT_CAP};
use monoidlab::deciders::ExactTheory;
use monoidlab::engine::{invertibility_degree, is_linear_balanced, Invertibility};
use monoidlab::lab::{
    named_poset, run_case, witness_case, Answer, Backend, BasisBounds, FinitePoset, Params, RunOptions, VarietyHandle,
    Verdict,
};
use monoidlab::monoid::{build_sw, satisfies};
use monoidlab::suite::{c001_derivation, decider_audits, wn_derivation};
use monoidlab::word::w;
use monoidlab::{Identity, Word};
use rand::rngs::StdRng;
use rand::SeedableRng;

/// Case ids with the chains printed for them.
type Printed<'a> = &'a [(&'a str, &'a [&'a str])];

type Criterion = (&'static str, Duration, Box<dyn Fn() -> Outcome>);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

/// Words defining catalog monoids with at most 20 letters.
fn catalog_words() -> Vec<Word> {
    let mut out: Vec<Word> = (1..=10).map(d_generator).collect();
    for name in ["L", "M", "Z:1", "Z:2", "Z:3", "dual(L)", "dual(M)", "dual(Z:1)"] {
        let v: Variety = name.parse().expect("catalog name");
        out.extend(v.generators().expect("generated"));
    }
    for addr in ["w:1", "w':1", "c:0,0", "c:1,0", "c:0,1", "c:1,1", "ck:0,0,1", "d:0,0", "d:1,0"] {
        out.push(word_family(addr).expect("family address"));
    }
    out.retain(|w| w.len() <= 20);
    out
}

fn criterion_1() -> Outcome {
    let sizes = [(w("xy"), 5), (w("xtx"), 7)];
    for (word, size) in &sizes {
        let m = build_sw(std::slice::from_ref(word));
        if m.size() != *size {
            return outcome(false, format!("|S({word})| = {}", m.size()));
        }
    }
    let words = catalog_words();
    for word in &words {
        let m = build_sw(std::slice::from_ref(word));
        let naive = naive_factors(std::slice::from_ref(word)).len() + 1;
        if m.size() != naive {
            return outcome(false, format!("S({word}): {} elements, {naive} by enumeration", m.size()));
        }
        if m.audit_associativity().is_some() || m.audit_identity().is_some() || !m.audit_zero() {
            return outcome(false, format!("S({word}) fails an audit"));
        }
    }
    outcome(true, format!("|S(xy)| = 5, |S(xtx)| = 7, {} catalog monoids audited", words.len()))
}

fn criterion_2() -> Outcome {
    let mut parts = Vec::new();
    for k in 1..=3 {
        let sys = variety_basis(&Variety::D(Some(k)), DEFAULT_CAP).expect("basis");
        let m = build_sw(&[d_generator(k)]);
        if let Some(id) = sys.identities.iter().find(|id| !satisfies(&m, id).holds()) {
            return outcome(false, format!("S({}) violates {id}", d_generator(k)));
        }
        parts.push(format!("D{k}: {} identities", sys.identities.len()));
    }
    outcome(true, parts.join(", "))
}

fn criterion_3() -> Outcome {
    let perms = Permutation::all(2);
    let (xi, eta) = (perms.iter().find(|p| p.apply(1) == 2).expect("swap"), Permutation::identity(2));
    let gen = build_sw(&[w_word(2, xi, &eta, false).expect("word")]);
    let mut good = 0;
    let mut considered = 0;
    for pi in &perms {
        for tau in &perms {
            if pi == xi && *tau == eta {
                continue;
            }
            considered += 1;
            let lhs = w_word(2, pi, tau, false).expect("word");
            let id = Identity::new(lhs.clone(), w_word(2, pi, tau, true).expect("word"));
            let holds_in_y = satisfies(&gen, &id).holds();
            let fails_in_own = !satisfies(&build_sw(&[lhs]), &id).holds();
            good += (holds_in_y && fails_in_own) as usize;
        }
    }
    outcome(good >= 3, format!("{good} of {considered} pairs (pi, tau) at n = 2"))
}

fn case_chain(id: &str) -> Vec<Word> {
    witness_case(id, &Params::new()).expect("registered").chain
}

fn criterion_4(ids: Printed<'_>, exact_links: &[&str]) -> Outcome {
    let mut parts = Vec::new();
    for (id, printed) in ids {
        let printed: Vec<Word> = printed.iter().map(|s| w(s)).collect();
        if case_chain(id) != printed {
            return outcome(false, format!("{id}: chain differs from the printed one"));
        }
        let r = run_case(id, &Params::new(), &RunOptions::default()).expect("runs");
        if r.links.iter().any(|l| l.verdict != Answer::Yes) {
            return outcome(false, format!("{id}: a forward link does not hold"));
        }
        let rs = r.reverse_search.as_ref().expect("witness case");
        if rs.found.is_some() || !rs.exhausted || rs.bound < 10 {
            return outcome(false, format!("{id}: reverse search found {:?}, exhausted {}", rs.found, rs.exhausted));
        }
        if exact_links.contains(id) {
            for l in &r.links {
                let h = VarietyHandle::parse(&l.theory, DEFAULT_CAP, BasisBounds::default()).expect("handle");
                if !matches!(h.backend, Backend::Exact(_)) {
                    return outcome(false, format!("{id}: {} is not decided exactly", l.theory));
                }
            }
        }
        if r.verdict != Verdict::Pass {
            return outcome(false, format!("{id}: verdict {:?}", r.verdict));
        }
        parts.push(format!("{id} (bound {})", rs.bound));
    }
    outcome(true, parts.join(", "))
}

/// Each group of cases within its own limit.
fn criterion_4_timed(groups: &[(Printed<'_>, Duration)], exact_links: &[&str]) -> Outcome {
    let mut parts = Vec::new();
    for (ids, limit) in groups {
        let t = Instant::now();
        let o = criterion_4(ids, exact_links);
        let elapsed = t.elapsed();
        if !o.ok || elapsed > *limit {
            return outcome(false, format!("{} [{:.2}s, limit {}s]", o.detail, elapsed.as_secs_f64(), limit.as_secs()));
        }
        parts.push(format!("{} [{:.2}s]", o.detail, elapsed.as_secs_f64()));
    }
    outcome(true, parts.join(", "))
}

fn criterion_5() -> Outcome {
    let mut parts = Vec::new();
    for p in ["2", "3"] {
        let params: Params = [("p".to_string(), p.to_string())].into();
        let r = run_case("remark-4perm", &params, &RunOptions::default()).expect("runs");
        let same = r.checks.iter().find(|c| c.name.contains("A2vSL") || c.name.contains("A3vSL"));
        if r.verdict != Verdict::Pass || same.is_none() {
            return outcome(false, format!("p = {p}: verdict {:?}", r.verdict));
        }
        parts.push(format!("p = {p}: {}", r.checks.iter().map(|c| c.detail.as_str()).collect::<Vec<_>>().join("; ")));
    }
    outcome(true, parts.join(" | "))
}

fn criterion_6() -> Outcome {
    let reports = [wn_derivation(1), wn_derivation(2), c001_derivation()];
    let mut parts = Vec::new();
    for r in reports {
        let r = r.expect("derivation setup");
        if r.verdict != Verdict::Pass {
            return outcome(false, format!("{}: {}", r.name, r.detail));
        }
        parts.push(format!("{} ({})", r.name, r.detail));
    }
    let mut models = 0;
    for name in ["E", "dual(E)", "N", "dual(N)"] {
        let h = VarietyHandle::parse(name, DEFAULT_CAP, BasisBounds::default()).expect("handle");
        if let Backend::Basis { models: m, .. } = &h.backend {
            if !m.rejected().is_empty() {
                return outcome(false, format!("{name}: a refutation model violates the basis"));
            }
            models += m.models().len();
        }
    }
    parts.push(format!("{models} refutation models sound"));
    outcome(true, parts.join(", "))
}

fn criterion_7() -> Outcome {
    let audits = decider_audits(6);
    let bad: Vec<String> = audits.iter().filter(|a| a.disagreements > 0).map(|a| a.theory.to_string()).collect();
    let checked: usize = audits.iter().map(|a| a.checked).sum();
    let mut required = vec![ExactTheory::Sl];
    required.extend((1..=4).map(ExactTheory::Abelian));
    required.extend((1..=3).map(ExactTheory::Commutative));
    let covered = required.iter().all(|th| audits.iter().any(|a| a.theory == *th && a.max_len == 6));
    outcome(bad.is_empty() && covered, format!("{} audits, {checked} identities, disagreeing: {bad:?}", audits.len()))
}

fn criterion_8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut lb_agree = 0;
    for _ in 0..1000 {
        let id = random_identity(&mut rng, 12);
        lb_agree += (is_linear_balanced(&id) == naive_linear_balanced(&id)) as usize;
    }
    let mut inv_agree = 0;
    for _ in 0..200 {
        let id = random_linear_balanced(&mut rng, 12);
        let expect = bfs_invertibility(&id).map(Invertibility::Degree);
        inv_agree += (Some(invertibility_degree(&id, 64)) == expect) as usize;
    }
    outcome(
        lb_agree == 1000 && inv_agree == 200,
        format!("linear-balanced {lb_agree}/1000, invertibility {inv_agree}/200"),
    )
}

fn criterion_9() -> Outcome {
    let mut parts = Vec::new();
    for (name, distributive) in [("fig1", true), ("fig2", true), ("m3", false), ("n5", false)] {
        let p = FinitePoset::new(&named_poset(name).expect("poset")).expect("acyclic");
        let n = p.len();
        let forbidden = p.is_lattice()
            && has_m3_or_n5(n, &|a, b| p.leq(a, b), &|a, b| p.meet(a, b).expect("meet"), &|a, b| {
                p.join(a, b).expect("join")
            });
        let dist = matches!(p.check_distributive(), Ok(None));
        if !p.is_lattice() || dist != distributive || forbidden == distributive {
            return outcome(false, format!("{name}: lattice {}, distributive {dist}", p.is_lattice()));
        }
        parts.push(format!("{name} ({n} nodes): {}", if dist { "distributive" } else { "not distributive" }));
    }
    outcome(true, parts.join(", "))
}

fn main() {
    const QUICK: Printed<'static> = &[
        ("nonperm-i", &["x", "xyy", "xy"]),
        ("nonperm-ii", &["x", "xxx", "xx"]),
        ("nonperm-iii", &["xyx", "xxy", "xxxy"]),
        ("nonperm-iv", &["xyx", "xxy", "yxx"]),
        ("nonperm-v", &["xxy", "xyx", "yxx"]),
    ];
    const FULL: Printed<'static> = &[
        ("nonperm-vi", &["xsxyztyhz", "xsxzytyhz", "xszxytyhz"]),
        ("nonperm-vii", &["yxzsyztxhx", "xyzsyztxhx", "xzysyztxhx"]),
        ("nonperm-viii", &["x y z t1 x t2 y t3 x t4 z", "y x z t1 x t2 y t3 x t4 z", "y z x t1 x t2 y t3 x t4 z"]),
    ];
    let exact = ["nonperm-i", "nonperm-ii"];
    let criteria: Vec<Criterion> = vec![
        ("1 S(W) construction", secs(5), Box::new(criterion_1)),
        ("2 D_k bases", secs(60), Box::new(criterion_2)),
        ("3 w_n isoterm pairs", secs(600), Box::new(criterion_3)),
        (
            "4 non-permuting pairs",
            secs(120 + 1800),
            Box::new(move || criterion_4_timed(&[(QUICK, secs(120)), (FULL, secs(1800))], &exact)),
        ),
        ("5 four-permutability chain", secs(30), Box::new(criterion_5)),
        ("6 derivations and model soundness", secs(600), Box::new(criterion_6)),
        ("7 decider audits", secs(60), Box::new(criterion_7)),
        ("8 structural predicates", secs(60), Box::new(criterion_8)),
        ("9 lattice figures", secs(1), Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (name, limit, run) in &criteria {
        let t = Instant::now();
        let o = run();
        let elapsed = t.elapsed();
        let ok = o.ok && elapsed <= *limit;
        failed += !ok as usize;
        println!(
            "{} criterion {name}: {} [{:.2}s, limit {}s]",
            if ok { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} of {} passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
