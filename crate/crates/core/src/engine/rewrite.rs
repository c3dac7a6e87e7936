//! One-step rewriting of words by the rules of an identity system.

use std::collections::{BTreeMap, HashMap};

use crate::catalog::IdentitySystem;
use crate::word::{Letter, Word};

/// A rule side over variables `0..nvars`.
#[derive(Clone, Debug)]
pub(crate) struct Rule {
    pub sides: [Vec<u8>; 2],
    pub vars: Vec<Letter>,
    /// Variables of side `1 - d` missing from side `d`.
    extras: [Vec<u8>; 2],
    /// Occurrences of each extra variable in side `1 - d`.
    mult: [Vec<usize>; 2],
}

impl Rule {
    fn compile(lhs: &Word, rhs: &Word) -> Rule {
        let mut vars: Vec<Letter> = lhs.content().union(&rhs.content()).cloned().collect();
        vars.sort();
        let idx: HashMap<&Letter, u8> = vars.iter().enumerate().map(|(i, l)| (l, i as u8)).collect();
        let enc = |w: &Word| w.letters().iter().map(|l| idx[l]).collect::<Vec<u8>>();
        let sides = [enc(lhs), enc(rhs)];
        let extras = [0, 1].map(|d| {
            let mut e: Vec<u8> = sides[1 - d].iter().copied().filter(|v| !sides[d].contains(v)).collect();
            e.sort();
            e.dedup();
            e
        });
        let mult = [0, 1].map(|d| extras[d].iter().map(|v| sides[1 - d].iter().filter(|r| *r == v).count()).collect());
        Rule { sides, vars, extras, mult }
    }
}

/// Where and how a rule was applied: the factor at `pos` equal to the image
/// of side `from` was replaced by the image of the other side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Application {
    pub rule: usize,
    pub from: usize,
    pub pos: usize,
    pub sub: Vec<Vec<u8>>,
}

/// Receives a rewritten word and a constructor for its application.
pub(crate) type Emit<'a> = dyn FnMut(&[u8], &dyn Fn() -> Application) + 'a;

/// Rules compiled against a fixed local alphabet of letter codes.
pub(crate) struct Rewriter {
    pub rules: Vec<Rule>,
    pub alphabet: Vec<Letter>,
    codes: HashMap<Letter, u8>,
}

impl Rewriter {
    pub fn new(sys: &IdentitySystem, alphabet: Vec<Letter>) -> Rewriter {
        let rules = sys.identities.iter().map(|id| Rule::compile(&id.lhs, &id.rhs)).collect();
        let codes = alphabet.iter().enumerate().map(|(i, l)| (l.clone(), i as u8)).collect();
        Rewriter { rules, alphabet, codes }
    }

    pub fn encode(&self, w: &Word) -> Option<Vec<u8>> {
        w.letters().iter().map(|l| self.codes.get(l).copied()).collect()
    }

    pub fn decode(&self, w: &[u8]) -> Word {
        Word::new(w.iter().map(|&c| self.alphabet[c as usize].clone()).collect())
    }

    pub fn substitution(&self, rule: usize, sub: &[Vec<u8>]) -> BTreeMap<Letter, Word> {
        self.rules[rule].vars.iter().cloned().zip(sub.iter().map(|s| self.decode(s))).collect()
    }

    /// Calls `emit` for every word obtained from `cur` by one rule
    /// application, with length at most `max_len`, excluding `cur` itself.
    /// The application is built on demand by the second argument.
    pub fn successors(&self, cur: &[u8], max_len: usize, emit: &mut Emit<'_>) {
        let mut out = Vec::with_capacity(max_len);
        for (ri, rule) in self.rules.iter().enumerate() {
            for from in 0..2 {
                let pat = &rule.sides[from];
                let rep = &rule.sides[1 - from];
                let extras = &rule.extras[from];
                let mult = &rule.mult[from];
                let mut sub: Vec<Option<(usize, usize)>> = vec![None; rule.vars.len()];
                let mut images: Vec<Vec<u8>> = vec![Vec::new(); rule.vars.len()];
                for start in 0..=cur.len() {
                    let mut on_match = |end: usize, sub: &[Option<(usize, usize)>]| {
                        let fixed: usize = rep.iter().filter_map(|&v| sub[v as usize].map(|(_, l)| l)).sum();
                        let base = cur.len() - (end - start) + fixed;
                        if base > max_len {
                            return;
                        }
                        if extras.is_empty() {
                            out.clear();
                            out.extend_from_slice(&cur[..start]);
                            for &v in rep {
                                let (a, l) = sub[v as usize].expect("bound");
                                out.extend_from_slice(&cur[a..a + l]);
                            }
                            out.extend_from_slice(&cur[end..]);
                            if out.as_slice() != cur {
                                let app = || Application { rule: ri, from, pos: start, sub: images_of(cur, sub) };
                                emit(&out, &app);
                            }
                            return;
                        }
                        for (v, s) in sub.iter().enumerate() {
                            images[v].clear();
                            if let Some((a, l)) = *s {
                                images[v].extend_from_slice(&cur[a..a + l]);
                            }
                        }
                        self.fill_extras(extras, mult, 0, max_len - base, &mut images, &mut |images| {
                            out.clear();
                            out.extend_from_slice(&cur[..start]);
                            for &v in rep {
                                out.extend_from_slice(&images[v as usize]);
                            }
                            out.extend_from_slice(&cur[end..]);
                            if out.as_slice() != cur {
                                let app = || Application { rule: ri, from, pos: start, sub: images.to_vec() };
                                emit(&out, &app);
                            }
                        });
                    };
                    match_at(pat, cur, 0, start, &mut sub, &mut on_match);
                }
            }
        }
    }

    /// The first application turning `before` into `after`.
    pub fn find(&self, before: &[u8], after: &[u8]) -> Option<Application> {
        let mut found = None;
        self.successors(before, after.len().max(before.len()), &mut |nw, app| {
            if found.is_none() && nw == after {
                found = Some(app());
            }
        });
        found
    }

    fn fill_extras(
        &self,
        extras: &[u8],
        mult: &[usize],
        i: usize,
        slack: usize,
        images: &mut Vec<Vec<u8>>,
        done: &mut dyn FnMut(&[Vec<u8>]),
    ) {
        if i == extras.len() {
            done(images);
            return;
        }
        let v = extras[i] as usize;
        let max = slack / mult[i];
        let mut buf = Vec::new();
        self.words_upto(max, &mut buf, &mut |word: &[u8]| {
            images[v] = word.to_vec();
            self.fill_extras(extras, mult, i + 1, slack - word.len() * mult[i], images, done);
        });
        images[v].clear();
    }

    fn words_upto(&self, max: usize, buf: &mut Vec<u8>, f: &mut dyn FnMut(&[u8])) {
        f(buf);
        if buf.len() < max {
            for c in 0..self.alphabet.len() as u8 {
                buf.push(c);
                self.words_upto(max, buf, f);
                buf.pop();
            }
        }
    }

    /// Checks that `after` is `before` rewritten by `app`.
    #[cfg(test)]
    pub fn check(&self, before: &[u8], after: &[u8], app: &Application) -> bool {
        let Some(rule) = self.rules.get(app.rule) else { return false };
        if app.from > 1 || app.sub.len() != rule.vars.len() {
            return false;
        }
        let image = |side: &[u8]| side.iter().flat_map(|&v| app.sub[v as usize].iter().copied()).collect::<Vec<u8>>();
        let pat = image(&rule.sides[app.from]);
        let rep = image(&rule.sides[1 - app.from]);
        if app.pos + pat.len() > before.len() || before[app.pos..app.pos + pat.len()] != pat[..] {
            return false;
        }
        let mut out = before[..app.pos].to_vec();
        out.extend(rep);
        out.extend_from_slice(&before[app.pos + pat.len()..]);
        out == after
    }
}

fn images_of(cur: &[u8], sub: &[Option<(usize, usize)>]) -> Vec<Vec<u8>> {
    sub.iter().map(|s| s.map(|(a, l)| cur[a..a + l].to_vec()).unwrap_or_default()).collect()
}

/// Matches `pat[j..]` against `w` from `pos`, extending `sub`, and reports
/// each end position of a complete match.
/// Receives the end position and the variable spans of a match.
type OnMatch<'a> = dyn FnMut(usize, &[Option<(usize, usize)>]) + 'a;

fn match_at(
    pat: &[u8],
    w: &[u8],
    j: usize,
    pos: usize,
    sub: &mut Vec<Option<(usize, usize)>>,
    on_match: &mut OnMatch<'_>,
) {
    if j == pat.len() {
        on_match(pos, sub);
        return;
    }
    let v = pat[j] as usize;
    match sub[v] {
        Some((a, l)) => {
            if pos + l <= w.len() && w[a..a + l] == w[pos..pos + l] {
                match_at(pat, w, j + 1, pos + l, sub, on_match);
            }
        }
        None => {
            for l in 0..=w.len() - pos {
                sub[v] = Some((pos, l));
                match_at(pat, w, j + 1, pos + l, sub, on_match);
            }
            sub[v] = None;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{ident, w, Identity};

    fn succ(sys: &[Identity], word: &str, max_len: usize, alphabet: &[&str]) -> Vec<Word> {
        let sys = IdentitySystem::new("t", sys.to_vec());
        let rw = Rewriter::new(&sys, alphabet.iter().map(|s| Letter::plain(s)).collect());
        let cur = rw.encode(&w(word)).unwrap();
        let mut out = Vec::new();
        rw.successors(&cur, max_len, &mut |nw, app| {
            assert!(rw.check(&cur, nw, &app()));
            out.push(rw.decode(nw));
        });
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn one_step() {
        assert_eq!(succ(&[ident("xx = xxx")], "xx", 4, &["x"]), vec![w("xxx")]);
        assert_eq!(succ(&[ident("xx = xxx")], "xxx", 4, &["x"]), vec![w("xx"), w("xxxx")]);
        assert_eq!(succ(&[ident("xy = yx")], "ab", 2, &["a", "b"]), vec![w("ba")]);
    }

    #[test]
    fn extra_variables() {
        let out = succ(&[ident("x = @")], "a", 2, &["a", "b"]);
        assert_eq!(out, vec![w("@"), w("aa"), w("ab"), w("ba")]);
    }
}
