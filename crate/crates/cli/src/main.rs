//! Command-line frontend: words, monoids, identity checking, derivations,
//! deciders, relational products, lattices and the verification suite.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use monoidlab::catalog::{variety_basis, IdentitySystem, Variety, DEFAULT_CAP};
use monoidlab::deciders::{decide, theta_class, ExactTheory};
use monoidlab::engine::{derive_with, replay, AuditedModels, DerivationResult, Limits};
use monoidlab::lab::{
    default_alphabet, named_poset, product_member_over, run_case, run_witness, BasisBounds, CaseReport, FinitePoset,
    Params, PosetSpec, ProductResult, RunOptions, VarietyHandle, Verdict, WitnessCase,
};
use monoidlab::monoid::{build_sw, isoterm_check, satisfies, FiniteMonoid, IsotermResult, MonoidJson, Satisfaction};
use monoidlab::suite::{run_plan, verdict_name, CaseRun, Profile, SuitePlan};
use monoidlab::{Identity, Word};

const PASS: u8 = 0;
const FAIL: u8 = 1;
const UNKNOWN: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "monoidlab", version, about = "Monoid varieties, identities and fully invariant congruences")]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report to standard output instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct Bounds {
    /// Length cap for instantiating infinite bases.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Extra letters allowed in derivations beyond the longer goal side.
    #[arg(long, default_value_t = 2)]
    len_slack: usize,
    /// Word expansions per derivation.
    #[arg(long, default_value_t = 200_000)]
    max_steps: usize,
}

impl Bounds {
    fn basis_bounds(&self) -> BasisBounds {
        BasisBounds { len_slack: self.len_slack, max_steps: self.max_steps, max_mem_bytes: max_mem_bytes() }
    }

    fn run_options(&self, max_len: Option<usize>) -> RunOptions {
        RunOptions { max_len, cap: self.cap, bounds: self.basis_bounds() }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a word and print its content, simple letters and blocks.
    Word { word: String },
    /// Build S(W) and print its multiplication table.
    Sw {
        /// Defining words.
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Does a monoid satisfy an identity?
    Check {
        /// `sw:<word>[,<word>...]`, a generated variety name, or a monoid JSON file.
        #[arg(long)]
        monoid: String,
        #[arg(long)]
        identity: String,
    },
    /// Is a word an isoterm for a monoid?
    Isoterm {
        #[arg(long)]
        monoid: String,
        #[arg(long)]
        word: String,
        /// Extra length allowed for candidate partner words.
        #[arg(long, default_value_t = 0)]
        slack: usize,
    },
    /// Derive an identity from a basis by bounded rewriting.
    Derive {
        /// Variety name (`basis:Q:1,2:cap=18`, `D:2`, `E`) or a file with one identity per line.
        #[arg(long)]
        basis: String,
        #[arg(long)]
        goal: String,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long, default_value_t = 1_000_000)]
        max_steps: usize,
        /// Refutation models, checked against the basis first.
        #[arg(long)]
        model: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Decide an identity in an exact theory, or list a θ-class.
    Decide {
        #[arg(long)]
        theory: String,
        #[arg(long, required_unless_present = "class")]
        identity: Option<String>,
        /// List the words identified with this word.
        #[arg(long, conflicts_with = "identity")]
        class: Option<String>,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Relational products of fully invariant congruences.
    Perm(PermArgs),
    /// Is a poset a distributive lattice?
    Lattice {
        /// `fig1`, `fig2`, `m3`, `n5`, or a JSON file `{nodes, covers}`.
        #[arg(long)]
        poset: String,
    },
    /// Run the verification suite.
    Suite {
        #[arg(long, default_value = "quick")]
        profile: String,
        /// Run only these cases (comma separated), without audits and invariants.
        #[arg(long)]
        only: Option<String>,
        #[command(flatten)]
        bounds: Bounds,
    },
}

#[derive(Args)]
struct PermArgs {
    /// A registered case id.
    #[arg(long, conflicts_with_all = ["case_file", "theories"])]
    case: Option<String>,
    /// Case parameter `key=value`; repeatable.
    #[arg(long = "param")]
    params: Vec<String>,
    /// A JSON witness case.
    #[arg(long, conflicts_with = "theories")]
    case_file: Option<PathBuf>,
    /// Varieties of the product, split at top-level commas.
    #[arg(long, requires = "pair")]
    theories: Option<String>,
    /// The pair `u | v`.
    #[arg(long)]
    pair: Option<String>,
    /// `forward`, `reverse` or `both`.
    #[arg(long, default_value = "forward")]
    order: String,
    /// Length bound for intermediate words.
    #[arg(long)]
    max_len: Option<usize>,
    #[command(flatten)]
    bounds: Bounds,
}

fn max_mem_bytes() -> Option<usize> {
    std::env::var("MONOIDLAB_MAX_MEM_MB").ok()?.trim().parse::<usize>().ok().map(|mb| mb << 20)
}

fn parse_word(s: &str) -> Result<Word> {
    s.parse().with_context(|| format!("in word {s:?}"))
}

fn parse_identity(s: &str) -> Result<Identity> {
    s.parse().with_context(|| format!("in identity {s:?}"))
}

fn load_monoid(spec: &str) -> Result<FiniteMonoid> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let j: MonoidJson = serde_json::from_str(&text).with_context(|| format!("in monoid file {spec}"))?;
        return Ok(FiniteMonoid::from_json(&j)?);
    }
    let v: Variety = spec.parse().with_context(|| format!("in monoid {spec:?}"))?;
    match v.generators() {
        Some(g) => Ok(build_sw(&g)),
        None => bail!("{spec} is not given by a generating monoid"),
    }
}

fn load_system(spec: &str, cap: usize) -> Result<IdentitySystem> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        return Ok(IdentitySystem::parse_text(spec, &text)?);
    }
    let mut name = spec.strip_prefix("basis:").unwrap_or(spec);
    let mut cap = cap;
    if let Some((head, c)) = name.rsplit_once(":cap=") {
        cap = c.parse().with_context(|| format!("bad cap in {spec:?}"))?;
        name = head;
    }
    let v: Variety = name.parse().with_context(|| format!("in basis {spec:?}"))?;
    Ok(variety_basis(&v, cap)?)
}

/// Splits at commas outside parentheses.
fn split_names(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let (mut depth, mut cur) = (0i32, String::new());
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur).trim().to_string());
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur.trim().to_string());
    out
}

fn parse_params(items: &[String]) -> Result<Params> {
    items
        .iter()
        .map(|kv| match kv.split_once('=') {
            Some((k, v)) => Ok((k.trim().to_string(), v.trim().to_string())),
            None => bail!("parameter {kv:?} is not key=value"),
        })
        .collect()
}

/// A finished command: exit code, human summary and JSON report.
struct Outcome {
    code: u8,
    summary: String,
    json: serde_json::Value,
}

impl Outcome {
    fn new(code: u8, summary: String, report: &impl Serialize) -> Result<Outcome> {
        Ok(Outcome { code, summary, json: serde_json::to_value(report)? })
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Pass => PASS,
        Verdict::Fail => FAIL,
        Verdict::Unknown => UNKNOWN,
    }
}

fn case_summary(r: &CaseReport) -> String {
    let mut s = format!("case {} {}\n", r.case, verdict_name(r.verdict));
    for l in &r.links {
        s.push_str(&format!("  {} θ[{}] {}: {}\n", l.from, l.theory, l.to, l.verdict));
    }
    if let Some(rs) = &r.reverse_search {
        let what = match &rs.found {
            Some(ws) => format!("found via {}", ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" ; ")),
            None if rs.exhausted => "empty".to_string(),
            None => "unknown".to_string(),
        };
        s.push_str(&format!("  reverse product [{}] up to length {}: {what}\n", rs.theories.join(", "), rs.bound));
    }
    for c in &r.checks {
        s.push_str(&format!("  {}: {} ({})\n", c.name, verdict_name(c.verdict), c.detail));
    }
    s
}

#[derive(Serialize)]
struct WordReport {
    word: Word,
    length: usize,
    content: Vec<String>,
    simple: Vec<String>,
    multiple: Vec<String>,
    linear: bool,
    blocks: Vec<Word>,
    separators: Vec<String>,
}

fn cmd_word(s: &str) -> Result<Outcome> {
    let w = parse_word(s)?;
    let names =
        |set: std::collections::BTreeSet<monoidlab::Letter>| set.iter().map(|l| l.to_string()).collect::<Vec<_>>();
    let d = w.decompose();
    let r = WordReport {
        length: w.len(),
        content: names(w.content()),
        simple: names(w.simple()),
        multiple: names(w.multiple()),
        linear: w.is_linear(),
        blocks: d.blocks.clone(),
        separators: d.separators.iter().map(|l| l.to_string()).collect(),
        word: w.clone(),
    };
    let summary = format!(
        "{}\nlength {}, content {{{}}}, simple {{{}}}\nblocks: {}",
        r.word,
        r.length,
        r.content.join(", "),
        r.simple.join(", "),
        r.blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" | ")
    );
    Outcome::new(PASS, summary, &r)
}

fn cmd_sw(words: &[String]) -> Result<Outcome> {
    let ws = words.iter().map(|s| parse_word(s)).collect::<Result<Vec<_>>>()?;
    let m = build_sw(&ws);
    let ok = m.audit_associativity().is_none() && m.audit_identity().is_none() && m.audit_zero();
    let labels: Vec<String> = m.labels().map(|ls| ls.iter().map(|l| l.to_string()).collect()).unwrap_or_default();
    let summary = format!("S({}) has {} elements: {}", words.join(", "), m.size(), labels.join(" "));
    Outcome::new(if ok { PASS } else { FAIL }, summary, &m.to_json())
}

#[derive(Serialize)]
struct CheckReport {
    identity: Identity,
    holds: bool,
    witness: Option<std::collections::BTreeMap<String, String>>,
}

fn cmd_check(monoid: &str, identity: &str) -> Result<Outcome> {
    let m = load_monoid(monoid)?;
    let id = parse_identity(identity)?;
    let (holds, witness) = match satisfies(&m, &id) {
        Satisfaction::Holds => (true, None),
        Satisfaction::Fails(a) => {
            let show = |e: usize| m.labels().map(|ls| ls[e].to_string()).unwrap_or_else(|| e.to_string());
            (
                false,
                Some(a.iter().map(|(l, &e)| (l.to_string(), show(e))).collect::<std::collections::BTreeMap<_, _>>()),
            )
        }
    };
    let summary = match &witness {
        None => format!("{id}: holds"),
        Some(a) => {
            let parts: Vec<String> = a.iter().map(|(k, v)| format!("{k}={v}")).collect();
            format!("{id}: fails at {}", parts.join(", "))
        }
    };
    Outcome::new(if holds { PASS } else { FAIL }, summary, &CheckReport { identity: id, holds, witness })
}

fn cmd_isoterm(monoid: &str, word: &str, slack: usize) -> Result<Outcome> {
    let m = load_monoid(monoid)?;
    let w = parse_word(word)?;
    let (code, result, partner) = match isoterm_check(&m, &w, slack) {
        IsotermResult::IsIsoterm => (PASS, "isoterm", None),
        IsotermResult::CounterIdentity(v) => (FAIL, "not an isoterm", Some(v)),
        IsotermResult::UnknownWithinBound => (UNKNOWN, "unknown within bound", None),
    };
    let summary = match &partner {
        Some(v) => format!("{w}: {result}, {w} = {v} holds"),
        None => format!("{w}: {result}"),
    };
    let report = serde_json::json!({ "word": w, "result": result, "partner": partner });
    Outcome::new(code, summary, &report)
}

fn cmd_derive(
    basis: &str,
    goal: &str,
    max_len: Option<usize>,
    max_steps: usize,
    models: &[String],
    cap: usize,
) -> Result<Outcome> {
    let sys = load_system(basis, cap)?;
    let goal = parse_identity(goal)?;
    let ms = models.iter().map(|s| load_monoid(s)).collect::<Result<Vec<_>>>()?;
    let audited = AuditedModels::new(&sys, ms);
    let rejected = audited.rejected();
    let max_len = max_len.unwrap_or(goal.lhs.len().max(goal.rhs.len()) + 2);
    let limits = Limits { max_len, max_steps, max_mem_bytes: max_mem_bytes() };
    let mut summary = String::new();
    for i in &rejected {
        summary.push_str(&format!("model {} fails the basis and is ignored\n", models[*i]));
    }
    let (code, report) = match derive_with(&sys, &goal, limits, &audited) {
        DerivationResult::Proved(chain) => {
            let ok = replay(&sys, &goal, &chain);
            summary.push_str(&format!(
                "{goal}: proved in {} steps{}\n",
                chain.len(),
                if ok { "" } else { " (replay failed)" }
            ));
            for (i, st) in chain.iter().enumerate() {
                let rule = &sys.identities[st.rule];
                let dir = if st.forward { "->" } else { "<-" };
                summary.push_str(&format!(
                    "{:>3}. {} => {}   [{rule} {dir} at {}]\n",
                    i + 1,
                    st.before,
                    st.after,
                    st.position
                ));
            }
            let code = if ok { PASS } else { FAIL };
            (code, serde_json::json!({ "goal": goal, "result": "proved", "replayed": ok, "chain": chain }))
        }
        DerivationResult::RefutedByModel { model, witness } => {
            summary.push_str(&format!("{goal}: refuted by {}\n", models[model]));
            let w: std::collections::BTreeMap<String, usize> =
                witness.iter().map(|(l, &e)| (l.to_string(), e)).collect();
            (FAIL, serde_json::json!({ "goal": goal, "result": "refuted", "model": models[model], "witness": w }))
        }
        DerivationResult::Unknown(r) => {
            summary.push_str(&format!("{goal}: unknown ({r:?}) within length {max_len}\n"));
            (UNKNOWN, serde_json::json!({ "goal": goal, "result": "unknown", "reason": r }))
        }
    };
    Ok(Outcome { code, summary: summary.trim_end().to_string(), json: report })
}

fn cmd_decide(theory: &str, identity: Option<&str>, class: Option<&str>, max_len: usize) -> Result<Outcome> {
    let th: ExactTheory = theory.parse::<ExactTheory>()?.validate()?;
    if let Some(c) = class {
        let w = parse_word(c)?;
        let words = theta_class(th, &w, max_len, &Default::default());
        let summary =
            format!("{} words: {}", words.len(), words.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" "));
        return Outcome::new(PASS, summary, &serde_json::json!({ "theory": th, "word": w, "class": words }));
    }
    let id = parse_identity(identity.expect("clap requires identity or class"))?;
    let holds = decide(th, &id);
    let summary = format!("{th} ⊢ {id}: {holds}");
    Outcome::new(
        if holds { PASS } else { FAIL },
        summary,
        &serde_json::json!({ "theory": th, "identity": id, "holds": holds }),
    )
}

#[derive(Serialize)]
struct OrderReport {
    order: &'static str,
    theories: Vec<String>,
    bound: usize,
    result: ProductResult,
}

fn cmd_perm(a: &PermArgs) -> Result<Outcome> {
    let opts = a.bounds.run_options(a.max_len);
    if let Some(id) = &a.case {
        let r = run_case(id, &parse_params(&a.params)?, &opts)?;
        return Outcome::new(verdict_code(r.verdict), case_summary(&r).trim_end().to_string(), &r);
    }
    if let Some(path) = &a.case_file {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let case: WitnessCase =
            serde_json::from_str(&text).with_context(|| format!("in case file {}", path.display()))?;
        let r = run_witness(&case, &opts)?;
        return Outcome::new(verdict_code(r.verdict), case_summary(&r).trim_end().to_string(), &r);
    }
    let (Some(theories), Some(pair)) = (&a.theories, &a.pair) else {
        bail!("perm needs --case, --case-file, or --theories with --pair");
    };
    let Some((u, v)) = pair.split_once('|') else { bail!("--pair must look like \"u | v\"") };
    let (u, v) = (parse_word(u.trim())?, parse_word(v.trim())?);
    let names = split_names(theories);
    let hs = names
        .iter()
        .map(|n| {
            VarietyHandle::parse(n, a.bounds.cap, a.bounds.basis_bounds()).with_context(|| format!("in variety {n:?}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let orders: &[&'static str] = match a.order.as_str() {
        "forward" => &["forward"],
        "reverse" => &["reverse"],
        "both" => &["forward", "reverse"],
        o => bail!("unknown order {o:?}"),
    };
    let bound = a.max_len.unwrap_or(10).max(u.len()).max(v.len());
    let alphabet = default_alphabet(&u, &v, &Default::default());
    let mut reports = Vec::new();
    let mut summary = String::new();
    for &order in orders {
        let mut refs: Vec<&VarietyHandle> = hs.iter().collect();
        let mut ns = names.clone();
        if order == "reverse" {
            refs.reverse();
            ns.reverse();
        }
        let result = product_member_over(&refs, &u, &v, bound, &alphabet);
        let line = match &result {
            ProductResult::Found(ws) => {
                let mut chain = vec![u.to_string()];
                chain.extend(ws.iter().map(|w| w.to_string()));
                chain.push(v.to_string());
                format!("related: {}", chain.join(" ~ "))
            }
            ProductResult::NotFoundWithinBounds => format!("not related within length {bound}"),
            ProductResult::UnknownLinks => "unknown".to_string(),
        };
        summary.push_str(&format!("{order} [{}]: {line}\n", ns.join(" ∘ ")));
        reports.push(OrderReport { order, theories: ns, bound, result });
    }
    let code = if reports.iter().any(|r| r.result == ProductResult::NotFoundWithinBounds) {
        FAIL
    } else if reports.iter().all(|r| matches!(r.result, ProductResult::Found(_))) {
        PASS
    } else {
        UNKNOWN
    };
    let report = serde_json::json!({ "pair": [u, v], "orders": reports });
    Ok(Outcome { code, summary: summary.trim_end().to_string(), json: report })
}

fn cmd_lattice(poset: &str) -> Result<Outcome> {
    let spec: PosetSpec = if Path::new(poset).is_file() {
        serde_json::from_str(&std::fs::read_to_string(poset)?).with_context(|| format!("in poset file {poset}"))?
    } else {
        named_poset(poset)?
    };
    let p = FinitePoset::new(&spec)?;
    let res = p.check_distributive()?;
    let (code, summary) = match &res {
        None => (PASS, format!("{poset}: distributive lattice with {} elements", p.len())),
        Some((a, b, c)) => (FAIL, format!("{poset}: not distributive at ({a}, {b}, {c})")),
    };
    let report = serde_json::json!({ "poset": poset, "distributive": res.is_none(), "counterexample": res });
    Outcome::new(code, summary, &report)
}

fn cmd_suite(profile: &str, only: Option<&str>, bounds: &Bounds) -> Result<Outcome> {
    let profile: Profile = profile.parse()?;
    let plan = match only {
        None => SuitePlan::of(profile),
        Some(ids) => {
            let mut plan = SuitePlan::empty(profile);
            plan.cases =
                ids.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|id| CaseRun::new(id, &[])).collect();
            plan
        }
    };
    let r = run_plan(&plan, &bounds.run_options(None))?;
    let mut summary = String::new();
    for c in &r.cases {
        summary.push_str(&format!("{:<16} {}\n", c.case, verdict_name(c.verdict)));
    }
    for a in &r.audits {
        summary.push_str(&format!(
            "audit {:<10} {} ({} identities, {} disagreements)\n",
            a.theory.to_string(),
            verdict_name(a.verdict),
            a.checked,
            a.disagreements
        ));
    }
    for i in &r.invariants {
        summary.push_str(&format!("{}: {} ({})\n", i.name, verdict_name(i.verdict), i.detail));
    }
    let counts = r.counts();
    summary.push_str(&format!(
        "suite {}: {} ({} pass, {} fail, {} unknown)",
        match profile {
            Profile::Quick => "quick",
            Profile::Full => "full",
        },
        verdict_name(r.verdict),
        counts["pass"],
        counts["fail"],
        counts["unknown"]
    ));
    Outcome::new(verdict_code(r.verdict), summary, &r)
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.cmd {
        Cmd::Word { word } => cmd_word(word),
        Cmd::Sw { words } => cmd_sw(words),
        Cmd::Check { monoid, identity } => cmd_check(monoid, identity),
        Cmd::Isoterm { monoid, word, slack } => cmd_isoterm(monoid, word, *slack),
        Cmd::Derive { basis, goal, max_len, max_steps, model, cap } => {
            cmd_derive(basis, goal, *max_len, *max_steps, model, *cap)
        }
        Cmd::Decide { theory, identity, class, max_len } => {
            cmd_decide(theory, identity.as_deref(), class.as_deref(), *max_len)
        }
        Cmd::Perm(a) => cmd_perm(a),
        Cmd::Lattice { poset } => cmd_lattice(poset),
        Cmd::Suite { profile, only, bounds } => cmd_suite(profile, only.as_deref(), bounds),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { PASS });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE);
        }
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(USAGE);
        }
    };
    let text = serde_json::to_string_pretty(&outcome.json).expect("reports serialize");
    if cli.json {
        println!("{text}");
    } else {
        println!("{}", outcome.summary);
    }
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(USAGE);
        }
    }
    ExitCode::from(outcome.code)
}
