//! Registry of witness cases for non-permuting congruences and their runner.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::handle::{Answer, Backend, BasisBounds, VarietyHandle};
use super::lifting::{lifting_exhaustive, lifting_on_words};
use super::product::{product_member, ProductResult};
use crate::catalog::{c_word, w_word, Permutation, DEFAULT_CAP};
use crate::deciders::{decide, ExactTheory};
use crate::error::{Error, Result};
use crate::monoid::{isoterm_check, IsotermResult};
use crate::word::{w, Identity, Letter, Word};

pub const CASE_IDS: [&str; 12] = [
    "nonperm-i",
    "nonperm-ii",
    "nonperm-iii",
    "nonperm-iv",
    "nonperm-v",
    "nonperm-vi",
    "nonperm-vii",
    "nonperm-viii",
    "wn-pair",
    "cnm-pair",
    "remark-4perm",
    "lifting-sanity",
];

pub type Params = BTreeMap<String, String>;

/// A word the case requires to be an isoterm for a generated variety.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotermClaim {
    pub variety: String,
    pub word: Word,
}

/// A chain `chain[0] θ_{links[0]} chain[1] ⋯ chain[k]` together with the
/// claim that `(chain[0], chain[k])` is not in the product `reverse`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCase {
    pub id: String,
    #[serde(default)]
    pub params: Params,
    pub chain: Vec<Word>,
    pub links: Vec<String>,
    /// Defaults to `links` reversed.
    #[serde(default)]
    pub reverse: Option<Vec<String>>,
    pub bound: usize,
    #[serde(default)]
    pub isoterms: Vec<IsotermClaim>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

impl Verdict {
    fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Unknown, _) | (_, Verdict::Unknown) => Verdict::Unknown,
            _ => Verdict::Pass,
        }
    }

    fn of(a: Answer) -> Verdict {
        match a {
            Answer::Yes => Verdict::Pass,
            Answer::No => Verdict::Fail,
            Answer::Unknown => Verdict::Unknown,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkReport {
    pub from: Word,
    pub to: Word,
    pub theory: String,
    pub verdict: Answer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReverseSearch {
    pub bound: usize,
    pub theories: Vec<String>,
    pub alphabet: Vec<Letter>,
    /// Intermediates of a chain in the reversed product, if one was found.
    pub found: Option<Vec<Word>>,
    pub exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub detail: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub params: Params,
    pub links: Vec<LinkReport>,
    pub reverse_search: Option<ReverseSearch>,
    pub checks: Vec<CheckReport>,
    pub verdict: Verdict,
}

/// Options shared by case runs.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Overrides the case's own bound for the reversed-product search.
    pub max_len: Option<usize>,
    pub cap: usize,
    pub bounds: BasisBounds,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { max_len: None, cap: DEFAULT_CAP, bounds: BasisBounds::default() }
    }
}

fn param<T: std::str::FromStr>(params: &Params, key: &str, default: T) -> Result<T> {
    match params.get(key) {
        None => Ok(default),
        Some(s) => s.parse().map_err(|_| Error::Parameter(format!("bad value {s:?} for {key}"))),
    }
}

fn perm_param(params: &Params, key: &str, n: usize, default: Permutation) -> Result<Permutation> {
    let p = match params.get(key) {
        None => default,
        Some(s) => s.parse()?,
    };
    if p.degree() != n {
        return Err(Error::Parameter(format!("{key} must have degree {n}")));
    }
    Ok(p)
}

fn check_keys(id: &str, params: &Params, allowed: &[&str]) -> Result<()> {
    match params.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::Parameter(format!("{id} takes no parameter {k:?}"))),
        None => Ok(()),
    }
}

fn z(i: usize) -> Letter {
    Letter::indexed("z", i as u32)
}
fn t(i: usize) -> Letter {
    Letter::indexed("t", i as u32)
}
fn zp(i: usize) -> Letter {
    Letter::indexed("z'", i as u32)
}
fn tp(i: usize) -> Letter {
    Letter::indexed("t'", i as u32)
}
fn plain(s: &str) -> Letter {
    Letter::plain(s)
}

fn cat(parts: &[&Word]) -> Word {
    Word::new(parts.iter().flat_map(|p| p.letters().iter().cloned()).collect())
}

fn sw_name(words: &[&Word]) -> String {
    let parts: Vec<String> = words.iter().map(|w| w.to_string()).collect();
    format!("sw:{}", parts.join(","))
}

fn simple_case(
    id: &str,
    params: Params,
    chain: &[&str],
    links: &[&str],
    bound: usize,
    isoterms: &[(&str, &str)],
) -> WitnessCase {
    WitnessCase {
        id: id.into(),
        params,
        chain: chain.iter().map(|s| w(s)).collect(),
        links: links.iter().map(|s| s.to_string()).collect(),
        reverse: None,
        bound,
        isoterms: isoterms.iter().map(|(v, s)| IsotermClaim { variety: v.to_string(), word: w(s) }).collect(),
    }
}

/// The pair of words used for `var S(w_n[π,τ])` against `var S(w_n[ξ,η])`:
/// `(u, p1 q1 x x q2 p2, v)`.
pub fn wn_chain(n: usize, pi: &Permutation, tau: &Permutation, xi: &Permutation, eta: &Permutation) -> [Word; 3] {
    let mut p1 = Vec::new();
    for i in 1..pi.apply(n) {
        p1.extend([z(i), t(i)]);
    }
    for i in 1..=n {
        p1.extend([zp(i), tp(i)]);
    }
    for i in pi.apply(n)..=n {
        p1.extend([z(i), t(i)]);
    }
    let q1: Vec<Letter> = (1..=n).flat_map(|i| [z(pi.apply(i)), z(n + tau.apply(i))]).collect();
    let mut p2 = Vec::new();
    for i in n + 1..n + tau.apply(n) {
        p2.extend([t(i), z(i)]);
    }
    for i in n + 1..=2 * n {
        p2.extend([tp(i), zp(i)]);
    }
    for i in n + tau.apply(n)..=2 * n {
        p2.extend([t(i), z(i)]);
    }
    let q2: Vec<Letter> = (1..=n).flat_map(|i| [zp(xi.apply(i)), zp(n + eta.apply(i))]).collect();
    let (p1, q1, p2, q2) = (Word::new(p1), Word::new(q1), Word::new(p2), Word::new(q2));
    let x = Word::letter(plain("x"));
    [cat(&[&p1, &x, &q1, &x, &q2, &p2]), cat(&[&p1, &q1, &x, &x, &q2, &p2]), cat(&[&p1, &q1, &x, &q2, &x, &p2])]
}

/// Words and generators for `var S(c_{n+1,m}[ρ])` against
/// `var S(c_{n,m+1}[τ])`: `([u, pxyzq, v], ρ-word, τ-word)`.
pub fn cnm_chain(n: usize, m: usize, pi: &Permutation) -> Result<([Word; 3], Word, Word)> {
    let d = n + m;
    let mut rho: Vec<usize> = (1..=d).map(|i| pi.apply(i)).collect();
    rho.push(d + 1);
    let mut tau = vec![1];
    tau.extend((1..=d).map(|i| pi.apply(i) + 1));
    let (rho, tau) = (Permutation::new(rho)?, Permutation::new(tau)?);
    let mut p = Vec::new();
    for i in 1..=n {
        p.extend([z(i), t(i)]);
    }
    for i in 1..=n + 1 {
        p.extend([zp(i), tp(i)]);
    }
    let mut q = vec![plain("t")];
    for i in n + 1..=d + 1 {
        q.extend([z(i), t(i)]);
    }
    for i in n + 2..=d + 1 {
        q.extend([zp(i), tp(i)]);
    }
    q.push(plain("x"));
    q.extend((1..=d + 1).map(|i| z(tau.apply(i))));
    q.push(plain("y"));
    q.extend((1..=d + 1).map(|i| zp(rho.apply(i))));
    q.push(plain("z"));
    let (p, q) = (Word::new(p), Word::new(q));
    let mid = |s: &str| cat(&[&p, &w(s), &q]);
    let gx = c_word(n + 1, m, 0, &rho, false)?;
    let gy = c_word(n, m + 1, 0, &tau, false)?;
    Ok(([mid("yxz"), mid("xyz"), mid("xzy")], gx, gy))
}

/// The registered chain case `id` with `params`.
pub fn witness_case(id: &str, params: &Params) -> Result<WitnessCase> {
    let p = params.clone();
    Ok(match id {
        "nonperm-i" => {
            check_keys(id, params, &["n"])?;
            let n: usize = param(params, "n", 2)?;
            if n < 2 {
                return Err(Error::Parameter("n must be at least 2".into()));
            }
            ExactTheory::Abelian(n as u32).validate()?;
            let mid = format!("x{}", "y".repeat(n));
            let a = format!("A:{n}");
            simple_case(id, p, &["x", &mid, "xy"], &[&a, "SL"], 10, &[])
        }
        "nonperm-ii" => {
            check_keys(id, params, &["n"])?;
            let n: usize = param(params, "n", 2)?;
            if n < 2 {
                return Err(Error::Parameter("n must be at least 2".into()));
            }
            ExactTheory::AbelianSl(n as u32).validate()?;
            let mid = "x".repeat(n + 1);
            let a = format!("A{n}vSL");
            simple_case(id, p, &["x", &mid, "xx"], &[&a, "C:2"], 10, &[])
        }
        "nonperm-iii" => {
            check_keys(id, params, &[])?;
            simple_case(id, p, &["xyx", "xxy", "xxxy"], &["C:3", "D:2"], 10, &[("D:2", "xyx")])
        }
        "nonperm-iv" => {
            check_keys(id, params, &[])?;
            simple_case(id, p, &["xyx", "xxy", "yxx"], &["E", "D:2"], 10, &[("D:2", "xyx")])
        }
        "nonperm-v" => {
            check_keys(id, params, &[])?;
            simple_case(id, p, &["xxy", "xyx", "yxx"], &["E", "dual(E)"], 10, &[])
        }
        "nonperm-vi" => {
            check_keys(id, params, &[])?;
            simple_case(
                id,
                p,
                &["xsxyztyhz", "xsxzytyhz", "xszxytyhz"],
                &["L", "M"],
                10,
                &[("L", "xsxyty"), ("M", "yztyhz")],
            )
        }
        "nonperm-vii" => {
            check_keys(id, params, &["i"])?;
            if param(params, "i", 3usize)? != 3 {
                return Err(Error::Parameter("nonperm-vii is registered for i=3 only".into()));
            }
            simple_case(id, p, &["yxzsyztxhx", "xyzsyztxhx", "xzysyztxhx"], &["N", "Z:3"], 10, &[])
        }
        "nonperm-viii" => {
            check_keys(id, params, &["i", "j"])?;
            if param(params, "i", 1usize)? != 1 || param(params, "j", 2usize)? != 2 {
                return Err(Error::Parameter("nonperm-viii is registered for i=1, j=2 only".into()));
            }
            let pw = "t1 x t2 y t3 x t4 z";
            simple_case(
                id,
                p,
                &[&format!("x y z {pw}"), &format!("y x z {pw}"), &format!("y z x {pw}")],
                &["Z:1", "Z:2"],
                11,
                &[("Z:2", "x y t1 x t2 y t3 x"), ("Z:1", "x z t1 x t3 x t4 z")],
            )
        }
        "wn-pair" => {
            check_keys(id, params, &["n", "pi", "tau", "xi", "eta"])?;
            let n: usize = param(params, "n", 2)?;
            if n == 0 {
                return Err(Error::Parameter("n must be positive".into()));
            }
            let id_n = Permutation::identity(n);
            let pi = perm_param(params, "pi", n, id_n.clone())?;
            let tau = perm_param(params, "tau", n, id_n.clone())?;
            let swapped = if n >= 2 {
                let mut v: Vec<usize> = (1..=n).collect();
                v.swap(0, 1);
                Permutation::new(v)?
            } else {
                id_n.clone()
            };
            let xi = perm_param(params, "xi", n, swapped)?;
            let eta = perm_param(params, "eta", n, id_n)?;
            let gx = w_word(n, &pi, &tau, false)?;
            let gy = w_word(n, &xi, &eta, false)?;
            if gx == gy {
                return Err(Error::Parameter("w_n[pi,tau] and w_n[xi,eta] must differ".into()));
            }
            let [u, mid, v] = wn_chain(n, &pi, &tau, &xi, &eta);
            let (nx, ny) = (sw_name(&[&gx]), sw_name(&[&gy]));
            let bound = u.len();
            WitnessCase {
                id: id.into(),
                params: p,
                chain: vec![u, mid, v],
                links: vec![ny, nx.clone()],
                reverse: None,
                bound,
                isoterms: vec![IsotermClaim { variety: nx, word: gx }],
            }
        }
        "cnm-pair" => {
            check_keys(id, params, &["n", "m", "pi"])?;
            let n: usize = param(params, "n", 1)?;
            let m: usize = param(params, "m", 0)?;
            if n + m == 0 {
                return Err(Error::Parameter("need n + m > 0".into()));
            }
            let pi = perm_param(params, "pi", n + m, Permutation::identity(n + m))?;
            let ([u, mid, v], gx, gy) = cnm_chain(n, m, &pi)?;
            let bound = u.len();
            WitnessCase {
                id: id.into(),
                params: p,
                chain: vec![u, mid, v],
                links: vec![sw_name(&[&gx]), sw_name(&[&gy])],
                reverse: None,
                bound,
                isoterms: Vec::new(),
            }
        }
        _ => return Err(Error::UnknownCase(id.into())),
    })
}

/// Handles built once per run.
struct Handles {
    opts: RunOptions,
    cache: HashMap<String, VarietyHandle>,
}

impl Handles {
    fn get(&mut self, name: &str) -> Result<&VarietyHandle> {
        if !self.cache.contains_key(name) {
            let h = VarietyHandle::parse(name, self.opts.cap, self.opts.bounds)?;
            self.cache.insert(name.to_string(), h);
        }
        Ok(&self.cache[name])
    }
}

/// Replays the chain, runs the reversed-product search, and checks the
/// isoterm claims.
pub fn run_witness(case: &WitnessCase, opts: &RunOptions) -> Result<CaseReport> {
    if case.chain.len() != case.links.len() + 1 || case.links.is_empty() {
        return Err(Error::Parameter(format!("{}: a chain of k links needs k+1 words", case.id)));
    }
    let mut handles = Handles { opts: *opts, cache: HashMap::new() };
    let mut verdict = Verdict::Pass;
    let mut links = Vec::new();
    for (i, name) in case.links.iter().enumerate() {
        let (a, b) = (&case.chain[i], &case.chain[i + 1]);
        let ans = handles.get(name)?.relate(a, b);
        verdict = verdict.and(Verdict::of(ans));
        links.push(LinkReport { from: a.clone(), to: b.clone(), theory: name.clone(), verdict: ans });
    }
    let reverse: Vec<String> = case.reverse.clone().unwrap_or_else(|| case.links.iter().rev().cloned().collect());
    let (u, v) = (&case.chain[0], &case.chain[case.chain.len() - 1]);
    let bound = opts.max_len.unwrap_or(case.bound).max(u.len()).max(v.len());
    for name in &reverse {
        handles.get(name)?;
    }
    let hs: Vec<&VarietyHandle> = reverse.iter().map(|n| &handles.cache[n]).collect();
    let result = product_member(&hs, u, v, bound);
    let (found, exhausted) = match &result {
        ProductResult::Found(ws) => (Some(ws.clone()), false),
        ProductResult::NotFoundWithinBounds => (None, true),
        ProductResult::UnknownLinks => (None, false),
    };
    verdict = verdict.and(match result {
        ProductResult::Found(_) => Verdict::Fail,
        ProductResult::NotFoundWithinBounds => Verdict::Pass,
        ProductResult::UnknownLinks => Verdict::Unknown,
    });
    let mut alphabet = u.content();
    alphabet.extend(v.content());
    let reverse_search =
        Some(ReverseSearch { bound, theories: reverse, alphabet: alphabet.into_iter().collect(), found, exhausted });
    let mut checks = Vec::new();
    for claim in &case.isoterms {
        let h = handles.get(&claim.variety)?;
        let (v, detail) = match &h.backend {
            Backend::Generator(m) => match isoterm_check(m, &claim.word, 0) {
                IsotermResult::IsIsoterm => (Verdict::Pass, "isoterm".to_string()),
                IsotermResult::CounterIdentity(c) => (Verdict::Fail, format!("fails: {} = {c}", claim.word)),
                IsotermResult::UnknownWithinBound => (Verdict::Unknown, "no certificate".to_string()),
            },
            _ => (Verdict::Unknown, "not a generated variety".to_string()),
        };
        verdict = verdict.and(v);
        checks.push(CheckReport { name: format!("isoterm {} for {}", claim.word, claim.variety), detail, verdict: v });
    }
    Ok(CaseReport { case: case.id.clone(), params: case.params.clone(), links, reverse_search, checks, verdict })
}

/// Runs a registered case.
pub fn run_case(id: &str, params: &Params, opts: &RunOptions) -> Result<CaseReport> {
    match id {
        "remark-4perm" => remark_4perm(params),
        "lifting-sanity" => lifting_sanity(params),
        _ => run_witness(&witness_case(id, params)?, opts),
    }
}

/// Checks `u θ_X u^{p+1}v^p θ_Y u^p v^{p+1} θ_X v` for all pairs of words of
/// length at most `len` over `{x, y}`.
fn remark_4perm(params: &Params) -> Result<CaseReport> {
    check_keys("remark-4perm", params, &["p", "len"])?;
    let p: usize = param(params, "p", 2)?;
    let len: usize = param(params, "len", 3)?;
    ExactTheory::Abelian(p as u32).validate()?;
    let words = crate::deciders::all_words(&[plain("x"), plain("y")], len);
    let ap = ExactTheory::Abelian(p as u32);
    let apsl = ExactTheory::AbelianSl(p as u32);
    let c2 = ExactTheory::Commutative(2);
    let chain =
        |u: &Word, v: &Word| [u.clone(), u.pow(p + 1).concat(&v.pow(p)), u.pow(p).concat(&v.pow(p + 1)), v.clone()];
    let holds = |th: ExactTheory, a: &Word, b: &Word| decide(th, &Identity::new(a.clone(), b.clone()));
    let mut checks = Vec::new();
    let mut verdict = Verdict::Pass;
    let families: [(ExactTheory, ExactTheory, bool); 3] =
        [(ap, ExactTheory::Sl, false), (ap, c2, false), (apsl, c2, true)];
    for (x, y, same_content) in families {
        let mut pairs = 0;
        let mut failures = Vec::new();
        for u in &words {
            for v in &words {
                if same_content && u.content() != v.content() {
                    continue;
                }
                pairs += 1;
                let c = chain(u, v);
                if !(holds(x, &c[0], &c[1]) && holds(y, &c[1], &c[2]) && holds(x, &c[2], &c[3])) {
                    failures.push(format!("({u}, {v})"));
                }
            }
        }
        let v = if failures.is_empty() { Verdict::Pass } else { Verdict::Fail };
        verdict = verdict.and(v);
        let scope = if same_content { "pairs with equal content" } else { "all pairs" };
        let mut detail = format!("{pairs} {scope} of length <= {len}");
        if !failures.is_empty() {
            detail.push_str(&format!("; failing: {}", failures.join(" ")));
        }
        checks.push(CheckReport { name: format!("X={x} Y={y}"), detail, verdict: v });
    }
    let (u, v) = (w("x"), w("y"));
    let c = chain(&u, &v);
    let names = [ap.to_string(), c2.to_string(), ap.to_string()];
    let ths = [ap, c2, ap];
    let mut links = Vec::new();
    for i in 0..3 {
        let ans = Answer::from_bool(holds(ths[i], &c[i], &c[i + 1]));
        verdict = verdict.and(Verdict::of(ans));
        links.push(LinkReport { from: c[i].clone(), to: c[i + 1].clone(), theory: names[i].clone(), verdict: ans });
    }
    Ok(CaseReport { case: "remark-4perm".into(), params: params.clone(), links, reverse_search: None, checks, verdict })
}

/// Equivalences `α, β ⊇ ν` permute exactly when `α/ν` and `β/ν` do:
/// exhaustively on a small set, and on a set of words.
fn lifting_sanity(params: &Params) -> Result<CaseReport> {
    check_keys("lifting-sanity", params, &["size"])?;
    let size: usize = param(params, "size", 4)?;
    if size > 6 {
        return Err(Error::Parameter("size must be at most 6".into()));
    }
    let mut checks = Vec::new();
    let ex = lifting_exhaustive(size);
    let v1 = if ex.mismatches == 0 { Verdict::Pass } else { Verdict::Fail };
    checks.push(CheckReport {
        name: format!("all equivalences on {size} points"),
        detail: format!("{} triples, {} permuting, {} mismatches", ex.triples, ex.permuting, ex.mismatches),
        verdict: v1,
    });
    let words = crate::deciders::all_words(&[plain("x"), plain("y")], 3);
    let inst = lifting_on_words(&words, ExactTheory::Abelian(2), ExactTheory::Sl, ExactTheory::AbelianSl(2));
    let v2 = if inst.agree { Verdict::Pass } else { Verdict::Fail };
    checks.push(CheckReport {
        name: "A:2 and SL over A2vSL on words of length <= 3".into(),
        detail: format!(
            "{} words, {} classes; permute on words: {}, on classes: {}",
            words.len(),
            inst.classes,
            inst.permute_on_set,
            inst.permute_on_quotient
        ),
        verdict: v2,
    });
    Ok(CaseReport {
        case: "lifting-sanity".into(),
        params: params.clone(),
        links: Vec::new(),
        reverse_search: None,
        checks,
        verdict: v1.and(v2),
    })
}
