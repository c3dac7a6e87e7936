//! Named identities, parametrised word families and variety bases.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::deciders::ExactTheory;
use crate::error::{Error, Result};
use crate::word::{ident, Identity, Letter, Word};

/// Default cap on the length of words in truncated infinite bases.
pub const DEFAULT_CAP: usize = 20;

/// A permutation of `1..=n`, stored as the images `1π, ..., nπ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let set: BTreeSet<usize> = images.iter().copied().collect();
        if set.len() != n || images.iter().any(|&i| i == 0 || i > n) {
            return Err(Error::Parameter(format!("{images:?} is not a permutation")));
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation((1..=n).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Image of `i` (1-based).
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    /// `i(self·other) = (iσ)τ`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.apply(i)).collect())
    }

    /// All permutations of degree n in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let mut used = vec![false; n + 1];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation(cur.clone()));
                return;
            }
            for i in 1..=n {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Permutation> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        if inner.trim().is_empty() {
            return Ok(Permutation(Vec::new()));
        }
        let images = inner
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parameter(format!("bad permutation {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(images)
    }
}

fn x() -> Letter {
    Letter::plain("x")
}
fn y() -> Letter {
    Letter::plain("y")
}
fn t() -> Letter {
    Letter::plain("t")
}
fn zi(i: usize) -> Letter {
    Letter::indexed("z", i as u32)
}
fn ti(i: usize) -> Letter {
    Letter::indexed("t", i as u32)
}

/// `x t1 x t2 x ... tk x ≈ x x t1 ... tk`.
pub fn delta(k: usize) -> Identity {
    let mut lhs = vec![x()];
    let mut rhs = vec![x(), x()];
    for i in 1..=k {
        lhs.push(ti(i));
        lhs.push(x());
        rhs.push(ti(i));
    }
    Identity::new(Word::new(lhs), Word::new(rhs))
}

/// `(∏_{i≤k} x ti) xy (∏_{k<i≤k+l} ti y) ≈ (∏ x ti) yx (∏ ti y)`.
pub fn gamma(k: usize, l: usize) -> Identity {
    let mut pre = Vec::new();
    for i in 1..=k {
        pre.push(x());
        pre.push(ti(i));
    }
    let mut post = Vec::new();
    for i in k + 1..=k + l {
        post.push(ti(i));
        post.push(y());
    }
    let side = |mid: [Letter; 2]| {
        let mut v = pre.clone();
        v.extend(mid);
        v.extend(post.iter().cloned());
        Word::new(v)
    };
    Identity::new(side([x(), y()]), side([y(), x()]))
}

/// A named identity: `sigma1..3`, `alpha1..3`, `beta1..3`, `delta:k`,
/// `gamma:k,l`, or a word-family identity such as `c:1,1:rho=[2,1]`.
pub fn named_identity(name: &str) -> Result<Identity> {
    let name = name.trim();
    let fixed = match name {
        "sigma1" => Some("xysxty = yxsxty"),
        "sigma2" => Some("xsytxy = xsytyx"),
        "sigma3" => Some("xsxyty = xsyxty"),
        "alpha1" => Some("xysxtxhy = yxsxtxhy"),
        "alpha2" => Some("xysxtyhx = yxsxtyhx"),
        "alpha3" => Some("xysytxhx = yxsytxhx"),
        _ => None,
    };
    if let Some(s) = fixed {
        return Ok(ident(s));
    }
    if let Some(i) = name.strip_prefix("beta") {
        return Ok(named_identity(&format!("alpha{i}"))?.reverse());
    }
    let (head, rest) = name.split_once(':').unwrap_or((name, ""));
    match head {
        "delta" => Ok(delta(parse_nums(rest, 1, name)?[0])),
        "gamma" => {
            let v = parse_nums(rest, 2, name)?;
            Ok(gamma(v[0], v[1]))
        }
        _ => {
            let fam: FamilyAddress = name.parse()?;
            let (lhs, rhs) = fam.pair()?;
            Ok(Identity::new(lhs, rhs))
        }
    }
}

fn parse_nums(s: &str, count: usize, ctx: &str) -> Result<Vec<usize>> {
    let v = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parameter(format!("bad numbers in {ctx:?}"))))
        .collect::<Result<Vec<_>>>()?;
    if v.len() != count {
        return Err(Error::Parameter(format!("{ctx:?} needs {count} numbers")));
    }
    Ok(v)
}

/// Word families with their primed companions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `c_{n,m}[ρ]`
    C,
    /// `c_{n,m,k}[ρ]`
    Ck,
    /// `d_{n,m}[ρ]`, the reverse of `c_{n,m}[ρ]`
    D,
    /// `d_{n,m,k}[ρ]`
    Dk,
    /// `w_n[π,τ]`
    W,
    /// `w_n^{k,l}[π,τ]`; its companion is `w'_n`
    Wkl,
}

/// `c_{n,m,k}[ρ]` (or `c'` when `swap`).
pub fn c_word(n: usize, m: usize, k: usize, rho: &Permutation, swap: bool) -> Result<Word> {
    if rho.degree() != n + m + k {
        return Err(Error::Parameter(format!("rho must have degree {}", n + m + k)));
    }
    let mut v = Vec::new();
    for i in 1..=n {
        v.push(zi(i));
        v.push(ti(i));
    }
    if swap {
        v.extend([y(), x()]);
    } else {
        v.extend([x(), y()]);
    }
    v.push(t());
    for i in n + 1..=n + m {
        v.push(zi(i));
        v.push(ti(i));
    }
    v.push(x());
    for i in 1..=n + m + k {
        v.push(zi(rho.apply(i)));
    }
    v.push(y());
    for i in n + m + 1..=n + m + k {
        v.push(ti(i));
        v.push(zi(i));
    }
    Ok(Word::new(v))
}

/// `w_n^{k,l}[π,τ]`; `w_n = w_n^{0,n}` and `w'_n = w_n^{0,0}`.
pub fn w_word_kl(n: usize, k: usize, l: usize, pi: &Permutation, tau: &Permutation) -> Result<Word> {
    if pi.degree() != n || tau.degree() != n {
        return Err(Error::Parameter(format!("pi and tau must have degree {n}")));
    }
    if k > l || l > n {
        return Err(Error::Parameter("need k <= l <= n".into()));
    }
    let mut v = Vec::new();
    for i in 1..=n {
        v.push(zi(i));
        v.push(ti(i));
    }
    let pair = |v: &mut Vec<Letter>, i: usize| {
        v.push(zi(pi.apply(i)));
        v.push(zi(n + tau.apply(i)));
    };
    for i in 1..=k {
        pair(&mut v, i);
    }
    v.push(x());
    for i in k + 1..=l {
        pair(&mut v, i);
    }
    v.push(x());
    for i in l + 1..=n {
        pair(&mut v, i);
    }
    for i in n + 1..=2 * n {
        v.push(ti(i));
        v.push(zi(i));
    }
    Ok(Word::new(v))
}

pub fn w_word(n: usize, pi: &Permutation, tau: &Permutation, primed: bool) -> Result<Word> {
    if primed {
        w_word_kl(n, 0, 0, pi, tau)
    } else {
        w_word_kl(n, 0, n, pi, tau)
    }
}

/// A catalog address of a family member, e.g. `c:1,1:rho=[2,1]`,
/// `c':0,0`, `ck:0,0,1`, `w:2:pi=[2,1]:tau=[1,2]`, `wkl:2,1,2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyAddress {
    pub family: Family,
    pub primed: bool,
    pub nums: Vec<usize>,
    pub rho: Option<Permutation>,
    pub pi: Option<Permutation>,
    pub tau: Option<Permutation>,
}

impl FromStr for FamilyAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<FamilyAddress> {
        let mut parts = s.trim().split(':');
        let head = parts.next().unwrap_or("");
        let (head, primed) = match head.strip_suffix('\'') {
            Some(h) => (h, true),
            None => (head, false),
        };
        let (family, count) = match head {
            "c" => (Family::C, 2),
            "ck" => (Family::Ck, 3),
            "d" => (Family::D, 2),
            "dk" => (Family::Dk, 3),
            "w" => (Family::W, 1),
            "wkl" => (Family::Wkl, 3),
            _ => return Err(Error::UnknownName(s.into())),
        };
        let nums =
            parse_nums(parts.next().ok_or_else(|| Error::Parameter(format!("{s:?} needs parameters")))?, count, s)?;
        let mut addr = FamilyAddress { family, primed, nums, rho: None, pi: None, tau: None };
        for p in parts {
            let (k, v) = p.split_once('=').ok_or_else(|| Error::Parameter(format!("bad field {p:?}")))?;
            let perm: Permutation = v.parse()?;
            match k.trim() {
                "rho" => addr.rho = Some(perm),
                "pi" => addr.pi = Some(perm),
                "tau" => addr.tau = Some(perm),
                other => return Err(Error::Parameter(format!("unknown field {other:?}"))),
            }
        }
        Ok(addr)
    }
}

impl FamilyAddress {
    fn word(&self, primed: bool) -> Result<Word> {
        let n = &self.nums;
        match self.family {
            Family::C | Family::Ck | Family::D | Family::Dk => {
                let k = if matches!(self.family, Family::Ck | Family::Dk) { n[2] } else { 0 };
                let deg = n[0] + n[1] + k;
                let rho = self.rho.clone().unwrap_or_else(|| Permutation::identity(deg));
                let w = c_word(n[0], n[1], k, &rho, primed)?;
                Ok(if matches!(self.family, Family::D | Family::Dk) { w.reverse() } else { w })
            }
            Family::W | Family::Wkl => {
                let deg = n[0];
                let pi = self.pi.clone().unwrap_or_else(|| Permutation::identity(deg));
                let tau = self.tau.clone().unwrap_or_else(|| Permutation::identity(deg));
                if primed {
                    w_word(deg, &pi, &tau, true)
                } else if self.family == Family::Wkl {
                    w_word_kl(deg, n[1], n[2], &pi, &tau)
                } else {
                    w_word(deg, &pi, &tau, false)
                }
            }
        }
    }

    /// The addressed word.
    pub fn member(&self) -> Result<Word> {
        self.word(self.primed)
    }

    /// The family identity: unprimed member ≈ primed member.
    pub fn pair(&self) -> Result<(Word, Word)> {
        Ok((self.word(false)?, self.word(true)?))
    }
}

pub fn word_family(address: &str) -> Result<Word> {
    address.parse::<FamilyAddress>()?.member()
}

/// A named finite set of identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentitySystem {
    pub name: String,
    pub identities: Vec<Identity>,
}

impl IdentitySystem {
    pub fn new(name: impl Into<String>, identities: Vec<Identity>) -> IdentitySystem {
        IdentitySystem { name: name.into(), identities }
    }

    pub fn dual(&self) -> IdentitySystem {
        IdentitySystem::new(format!("dual({})", self.name), self.identities.iter().map(Identity::reverse).collect())
    }

    /// One identity `lhs = rhs` per line; `#` starts a comment; a line may
    /// also be a catalog identity name.
    pub fn parse_text(name: &str, text: &str) -> Result<IdentitySystem> {
        let mut ids = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let id = if line.contains('=') { line.parse() } else { named_identity(line) };
            ids.push(id.map_err(|e| match e {
                Error::Parse { position, message } => {
                    Error::Parse { position, message: format!("line {}: {message}", lineno + 1) }
                }
                other => other,
            })?);
        }
        Ok(IdentitySystem::new(name, ids))
    }
}

/// Monoid varieties known to the catalog.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Variety {
    Exact(ExactTheory),
    /// `D_k`; `None` is `D_∞`.
    D(Option<usize>),
    E,
    O,
    A,
    AStar,
    APrime,
    K,
    N,
    P(usize),
    Q(usize, usize),
    R,
    L,
    M,
    Z(usize),
    /// The variety generated by `S(W)`.
    Sw(Vec<Word>),
    Dual(Box<Variety>),
    Join(Box<Variety>, Box<Variety>),
}

impl fmt::Display for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variety::Exact(t) => write!(f, "{t}"),
            Variety::D(Some(k)) => write!(f, "D:{k}"),
            Variety::D(None) => write!(f, "D:inf"),
            Variety::E => write!(f, "E"),
            Variety::O => write!(f, "O"),
            Variety::A => write!(f, "A"),
            Variety::AStar => write!(f, "A*"),
            Variety::APrime => write!(f, "A'"),
            Variety::K => write!(f, "K"),
            Variety::N => write!(f, "N"),
            Variety::P(n) => write!(f, "P:{n}"),
            Variety::Q(r, s) => write!(f, "Q:{r},{s}"),
            Variety::R => write!(f, "R"),
            Variety::L => write!(f, "L"),
            Variety::M => write!(f, "M"),
            Variety::Z(i) => write!(f, "Z:{i}"),
            Variety::Sw(ws) => {
                let parts: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
                write!(f, "sw:{}", parts.join(","))
            }
            Variety::Dual(v) => write!(f, "dual({v})"),
            Variety::Join(a, b) => write!(f, "join({a},{b})"),
        }
    }
}

fn split_top_comma(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

impl FromStr for Variety {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variety> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("dual(").and_then(|r| r.strip_suffix(')')) {
            return Ok(Variety::Dual(Box::new(inner.parse()?)));
        }
        if let Some(inner) = s.strip_prefix("join(").and_then(|r| r.strip_suffix(')')) {
            let (a, b) = split_top_comma(inner).ok_or_else(|| Error::UnknownName(s.into()))?;
            return Ok(Variety::Join(Box::new(a.parse()?), Box::new(b.parse()?)));
        }
        if let Some(rest) = s.strip_prefix("sw:") {
            let words = rest.split(',').map(|w| w.parse()).collect::<Result<Vec<Word>>>()?;
            return Ok(Variety::Sw(words));
        }
        let v = match s {
            "E" => Variety::E,
            "O" => Variety::O,
            "A" => Variety::A,
            "A*" => Variety::AStar,
            "A'" => Variety::APrime,
            "K" => Variety::K,
            "N" => Variety::N,
            "R" => Variety::R,
            "L" => Variety::L,
            "M" => Variety::M,
            "D:inf" => Variety::D(None),
            _ => {
                let (head, rest) = s.split_once(':').unwrap_or((s, ""));
                match head {
                    "D" => Variety::D(Some(positive(rest, s)?)),
                    "P" => Variety::P(positive(rest, s)?),
                    "Z" => {
                        let i = positive(rest, s)?;
                        if i > 3 {
                            return Err(Error::Parameter("Z:i needs i in 1..=3".into()));
                        }
                        Variety::Z(i)
                    }
                    "Q" => {
                        let v = parse_nums(rest, 2, s)?;
                        if !(1..=3).contains(&v[0]) || !(1..=3).contains(&v[1]) {
                            return Err(Error::Parameter("Q:r,s needs r,s in 1..=3".into()));
                        }
                        Variety::Q(v[0], v[1])
                    }
                    _ => Variety::Exact(s.parse()?),
                }
            }
        };
        Ok(v)
    }
}

fn positive(s: &str, ctx: &str) -> Result<usize> {
    match s.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(Error::Parameter(format!("{ctx:?} needs a positive integer"))),
    }
}

/// `x t1 x ... t_{k-1} x` for k ≥ 2 and `xy` for k = 1.
pub fn d_generator(k: usize) -> Word {
    if k == 1 {
        return Word::new(vec![x(), y()]);
    }
    let mut v = vec![x()];
    for i in 1..k {
        v.push(ti(i));
        v.push(x());
    }
    Word::new(v)
}

/// How a variety is represented for computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representation {
    Exact(ExactTheory),
    /// Generated by the Rees quotient monoid of these words.
    Generator(Vec<Word>),
    Basis(IdentitySystem),
}

impl Variety {
    /// Generating words, when the variety is generated by some `S(W)`.
    pub fn generators(&self) -> Option<Vec<Word>> {
        let ws = |ss: &[&str]| Some(ss.iter().map(|s| crate::word::w(s)).collect());
        match self {
            Variety::D(Some(k)) => Some(vec![d_generator(*k)]),
            Variety::L => ws(&["xtxysy"]),
            Variety::M => ws(&["xytxsy"]),
            Variety::Z(1) => ws(&["xysxtxhy"]),
            Variety::Z(2) => ws(&["xysxtyhx"]),
            Variety::Z(3) => ws(&["xysytxhx"]),
            Variety::Sw(words) => Some(words.clone()),
            Variety::Dual(v) => v.generators().map(|g| g.iter().map(Word::reverse).collect()),
            Variety::Join(a, b) => {
                let mut g = a.generators()?;
                g.extend(b.generators()?);
                Some(g)
            }
            _ => None,
        }
    }

    /// Preferred computational representation: exact decider, then
    /// generating monoid, then equational basis.
    pub fn representation(&self, cap: usize) -> Result<Representation> {
        if let Variety::Exact(t) = self {
            return Ok(Representation::Exact(*t));
        }
        if let Variety::Join(a, b) = self {
            if let (Variety::Exact(ExactTheory::Abelian(n)), Variety::Exact(ExactTheory::Sl))
            | (Variety::Exact(ExactTheory::Sl), Variety::Exact(ExactTheory::Abelian(n))) = (a.as_ref(), b.as_ref())
            {
                return Ok(Representation::Exact(ExactTheory::AbelianSl(*n)));
            }
        }
        if let Some(g) = self.generators() {
            return Ok(Representation::Generator(g));
        }
        Ok(Representation::Basis(variety_basis(self, cap)?))
    }
}

fn ids(ss: &[&str]) -> Vec<Identity> {
    ss.iter().map(|s| ident(s)).collect()
}

fn pow_identity(a: usize, b: usize) -> Identity {
    Identity::new(Word::new(vec![x(); a]), Word::new(vec![x(); b]))
}

fn central(n: usize) -> Identity {
    let mut l = vec![x(); n];
    l.push(y());
    let mut r = vec![y()];
    r.extend(vec![x(); n]);
    Identity::new(Word::new(l), Word::new(r))
}

/// `w_n[π,τ] ≈ w'_n[π,τ]` for all n, π, τ with `|w_n| ≤ cap`.
pub fn w_identities(cap: usize) -> Vec<Identity> {
    let mut out = Vec::new();
    let mut n = 1;
    while 6 * n + 2 <= cap {
        for pi in Permutation::all(n) {
            for tau in Permutation::all(n) {
                let a = w_word(n, &pi, &tau, false).expect("degrees match");
                let b = w_word(n, &pi, &tau, true).expect("degrees match");
                out.push(Identity::new(a, b));
            }
        }
        n += 1;
    }
    out
}

/// `c_{n,m,k}[ρ] ≈ c'_{n,m,k}[ρ]` with `|c| ≤ cap`, and their duals when
/// `with_duals`; `k` is fixed to 0 unless `with_k`.
pub fn c_identities(cap: usize, with_k: bool, with_duals: bool) -> Vec<Identity> {
    let mut out = Vec::new();
    for total in 0.. {
        if 3 * total + 5 > cap {
            break;
        }
        for n in 0..=total {
            for m in 0..=total - n {
                let k = total - n - m;
                if k > 0 && !with_k {
                    continue;
                }
                for rho in Permutation::all(total) {
                    let a = c_word(n, m, k, &rho, false).expect("degrees match");
                    let b = c_word(n, m, k, &rho, true).expect("degrees match");
                    let id = Identity::new(a, b);
                    if with_duals {
                        out.push(id.reverse());
                    }
                    out.push(id);
                }
            }
        }
    }
    out.sort();
    out
}

/// A finite identity basis. Infinite bases are truncated to identities whose
/// sides have at most `cap` letters.
pub fn variety_basis(v: &Variety, cap: usize) -> Result<IdentitySystem> {
    let aper = || ids(&["xx = xxx", "xxy = yxx"]);
    let sig = |i: usize| named_identity(&format!("sigma{i}")).expect("catalog");
    let name = v.to_string();
    let list = match v {
        Variety::Exact(ExactTheory::Trivial) => ids(&["x = @"]),
        Variety::Exact(ExactTheory::Sl) => ids(&["xy = yx", "x = xx"]),
        Variety::Exact(ExactTheory::Commutative(n)) => {
            vec![ident("xy = yx"), pow_identity(*n as usize, *n as usize + 1)]
        }
        Variety::Exact(ExactTheory::Com(k, l)) => vec![ident("xy = yx"), pow_identity(*k as usize, *l as usize)],
        Variety::Exact(ExactTheory::Lrb) => ids(&["xy = xyx"]),
        Variety::Exact(ExactTheory::Full) => Vec::new(),
        Variety::Exact(_) => return Err(Error::NoWordBasis(name)),
        Variety::D(k) => {
            let mut b = aper();
            b.extend([sig(1), sig(2), sig(3)]);
            if let Some(k) = k {
                b.push(delta(*k));
            }
            b
        }
        Variety::E => ids(&["xx = xxx", "xxyy = yyxx", "xtx = xxt"]),
        Variety::O => vec![sig(2), sig(3)],
        Variety::A => aper(),
        Variety::AStar => {
            let mut b = aper();
            b.extend(w_identities(cap));
            b
        }
        Variety::APrime => {
            let mut b = aper();
            b.extend(w_identities(cap));
            b.extend(c_identities(cap, true, true));
            b
        }
        Variety::K => ids(&["xxy = xxyx", "xyx = xyxx", "xxyy = yyxx"]),
        Variety::N => {
            let mut b = aper();
            b.push(ident("xyxzx = xxyz"));
            b.extend([sig(2), sig(3)]);
            b
        }
        Variety::P(n) => vec![pow_identity(*n, n + 1), central(*n), ident("xxy = xyx")],
        Variety::Q(r, s) => {
            let mut b = aper();
            b.push(sig(3));
            for i in 1..=3 {
                if i != *r {
                    b.push(named_identity(&format!("alpha{i}"))?);
                }
            }
            for j in 1..=3 {
                if j != *s {
                    b.push(named_identity(&format!("beta{j}"))?);
                }
            }
            b.extend(c_identities(cap, false, true));
            b
        }
        Variety::R => {
            let mut b = aper();
            b.extend([sig(1), sig(2)]);
            b.extend(w_identities(cap));
            b
        }
        Variety::Dual(inner) => return Ok(variety_basis(inner, cap)?.dual()),
        Variety::L | Variety::M | Variety::Z(_) | Variety::Sw(_) | Variety::Join(..) => {
            return Err(Error::NoWordBasis(name))
        }
    };
    Ok(IdentitySystem::new(name, list))
}
