//! Words over an indexed alphabet and identities between them.
//!
//! Text format: a word is a sequence of letters, each an ASCII letter with
//! optional primes and an optional decimal index (`x`, `z1`, `t'2`).
//! Letters may be written back to back (`xysxty`, `z1t1x`) or separated by
//! whitespace. `@` denotes the empty word. An identity is `lhs = rhs`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A letter `base` or `base_index`. Ordered by base, then index, with the
/// unindexed letter first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    base: String,
    index: Option<u32>,
}

impl Letter {
    /// Panics if `base` is not an ASCII letter followed by primes.
    pub fn new(base: &str, index: Option<u32>) -> Letter {
        Letter::try_new(base, index).expect("invalid letter base")
    }

    pub fn try_new(base: &str, index: Option<u32>) -> Result<Letter> {
        let mut chars = base.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return Err(Error::parse(0, format!("invalid letter base {base:?}"))),
        }
        if !chars.all(|c| c == '\'') {
            return Err(Error::parse(0, format!("invalid letter base {base:?}")));
        }
        Ok(Letter { base: base.to_string(), index })
    }

    pub fn plain(base: &str) -> Letter {
        Letter::new(base, None)
    }

    pub fn indexed(base: &str, index: u32) -> Letter {
        Letter::new(base, Some(index))
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn index(&self) -> Option<u32> {
        self.index
    }

    fn is_single_char(&self) -> bool {
        self.index.is_none() && self.base.len() == 1
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}{}", self.base, i),
            None => write!(f, "{}", self.base),
        }
    }
}

/// A finite word. Words compare in shortlex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Decomposition `w = w0 t1 w1 ... tm wm` where the `ti` are the simple
/// letters of `w` in order of appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub blocks: Vec<Word>,
    pub separators: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn content(&self) -> BTreeSet<Letter> {
        self.0.iter().cloned().collect()
    }

    pub fn occ(&self, x: &Letter) -> usize {
        self.0.iter().filter(|l| *l == x).count()
    }

    pub fn occurrences(&self) -> BTreeMap<Letter, usize> {
        let mut m = BTreeMap::new();
        for l in &self.0 {
            *m.entry(l.clone()).or_insert(0) += 1;
        }
        m
    }

    pub fn simple(&self) -> BTreeSet<Letter> {
        self.occurrences().into_iter().filter(|(_, c)| *c == 1).map(|(l, _)| l).collect()
    }

    pub fn multiple(&self) -> BTreeSet<Letter> {
        self.occurrences().into_iter().filter(|(_, c)| *c >= 2).map(|(l, _)| l).collect()
    }

    pub fn is_linear(&self) -> bool {
        self.occurrences().values().all(|&c| c == 1)
    }

    pub fn decompose(&self) -> Decomposition {
        let sim = self.simple();
        let mut blocks = Vec::new();
        let mut separators = Vec::new();
        let mut current = Vec::new();
        for l in &self.0 {
            if sim.contains(l) {
                blocks.push(Word(std::mem::take(&mut current)));
                separators.push(l.clone());
            } else {
                current.push(l.clone());
            }
        }
        blocks.push(Word(current));
        Decomposition { blocks, separators }
    }

    /// Keeps only the letters in `keep`.
    pub fn restrict(&self, keep: &BTreeSet<Letter>) -> Word {
        Word(self.0.iter().filter(|l| keep.contains(*l)).cloned().collect())
    }

    /// Removes the letters in `drop`.
    pub fn delete(&self, drop: &BTreeSet<Letter>) -> Word {
        Word(self.0.iter().filter(|l| !drop.contains(*l)).cloned().collect())
    }

    /// First occurrences of letters, in order.
    pub fn ini(&self) -> Word {
        let mut seen = BTreeSet::new();
        Word(self.0.iter().filter(|l| seen.insert((*l).clone())).cloned().collect())
    }

    pub fn reverse(&self) -> Word {
        Word(self.0.iter().rev().cloned().collect())
    }

    /// Letters missing from `map` stay fixed.
    pub fn substitute(&self, map: &BTreeMap<Letter, Word>) -> Word {
        let mut out = Vec::new();
        for l in &self.0 {
            match map.get(l) {
                Some(w) => out.extend(w.0.iter().cloned()),
                None => out.push(l.clone()),
            }
        }
        Word(out)
    }

    /// True if `self` occurs as a contiguous subword of `w`.
    pub fn is_factor(&self, w: &Word) -> bool {
        if self.0.is_empty() {
            return true;
        }
        w.0.windows(self.0.len()).any(|win| win == self.0.as_slice())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.iter().cloned().cycle().take(self.0.len() * n).collect())
    }

    /// All distinct factors, including the empty word, in shortlex order.
    pub fn factors(&self) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        out.insert(Word::empty());
        for i in 0..self.0.len() {
            for j in i + 1..=self.0.len() {
                out.insert(Word(self.0[i..j].to_vec()));
            }
        }
        out
    }

    pub fn parse(s: &str) -> Result<Word> {
        s.parse()
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "@");
        }
        if self.0.iter().all(Letter::is_single_char) {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
            return Ok(());
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

fn parse_letters(s: &str, offset: usize, out: &mut Vec<Letter>) -> Result<()> {
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if !c.is_ascii_alphabetic() {
            return Err(Error::parse(offset + i, format!("expected a letter, found {:?}", c as char)));
        }
        let start = i;
        i += 1;
        while i < bytes.len() && bytes[i] == b'\'' {
            i += 1;
        }
        let base = &s[start..i];
        let dstart = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let index = if i > dstart {
            Some(s[dstart..i].parse::<u32>().map_err(|_| Error::parse(offset + dstart, "index out of range"))?)
        } else {
            None
        };
        out.push(Letter { base: base.to_string(), index });
    }
    Ok(())
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let mut letters = Vec::new();
        let mut saw_token = false;
        let mut pos = 0;
        for token in s.split_whitespace() {
            let offset = s[pos..].find(token).map(|o| o + pos).unwrap_or(pos);
            pos = offset + token.len();
            saw_token = true;
            if token == "@" {
                continue;
            }
            parse_letters(token, offset, &mut letters)?;
        }
        if !saw_token {
            return Err(Error::parse(0, "empty input; write @ for the empty word"));
        }
        Ok(Word(letters))
    }
}

/// An identity `lhs ≈ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Identity {
    pub lhs: Word,
    pub rhs: Word,
}

impl Identity {
    pub fn new(lhs: Word, rhs: Word) -> Identity {
        Identity { lhs, rhs }
    }

    pub fn parse(s: &str) -> Result<Identity> {
        s.parse()
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn content(&self) -> BTreeSet<Letter> {
        let mut c = self.lhs.content();
        c.extend(self.rhs.content());
        c
    }

    pub fn reverse(&self) -> Identity {
        Identity { lhs: self.lhs.reverse(), rhs: self.rhs.reverse() }
    }

    pub fn swap(&self) -> Identity {
        Identity { lhs: self.rhs.clone(), rhs: self.lhs.clone() }
    }

    pub fn delete(&self, drop: &BTreeSet<Letter>) -> Identity {
        Identity { lhs: self.lhs.delete(drop), rhs: self.rhs.delete(drop) }
    }

    pub fn restrict(&self, keep: &BTreeSet<Letter>) -> Identity {
        Identity { lhs: self.lhs.restrict(keep), rhs: self.rhs.restrict(keep) }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Identity> {
        let mut parts = s.splitn(2, '=');
        let lhs_s = parts.next().unwrap_or("");
        let rhs_s = parts.next().ok_or_else(|| Error::parse(s.len(), "expected '='"))?;
        let lhs = lhs_s.parse::<Word>()?;
        let offset = lhs_s.len() + 1;
        let rhs = rhs_s.parse::<Word>().map_err(|e| match e {
            Error::Parse { position, message } => Error::Parse { position: position + offset, message },
            other => other,
        })?;
        Ok(Identity { lhs, rhs })
    }
}

macro_rules! string_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(&self.to_string())
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Letter> {
        let w: Word = s.parse()?;
        match w.0.as_slice() {
            [l] => Ok(l.clone()),
            _ => Err(Error::parse(0, format!("expected a single letter, found {s:?}"))),
        }
    }
}

string_serde!(Letter);
string_serde!(Word);
string_serde!(Identity);

/// Shorthand for tests and catalogs: parses or panics.
pub fn w(s: &str) -> Word {
    s.parse().unwrap_or_else(|e| panic!("bad word {s:?}: {e}"))
}

pub fn ident(s: &str) -> Identity {
    s.parse().unwrap_or_else(|e| panic!("bad identity {s:?}: {e}"))
}
