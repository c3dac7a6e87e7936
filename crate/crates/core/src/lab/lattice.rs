//! Finite posets given by cover relations, and a distributivity check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nodes and cover pairs `(lower, upper)` by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetSpec {
    pub nodes: Vec<String>,
    pub covers: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct FinitePoset {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FinitePoset {
    pub fn new(spec: &PosetSpec) -> Result<FinitePoset> {
        let n = spec.nodes.len();
        let index =
            |s: &str| spec.nodes.iter().position(|x| x == s).ok_or_else(|| Error::UnknownName(format!("node {s}")));
        for (i, a) in spec.nodes.iter().enumerate() {
            if spec.nodes[..i].contains(a) {
                return Err(Error::Parameter(format!("duplicate node {a}")));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in &spec.covers {
            leq[index(a)?][index(b)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::Parameter(format!("cycle through {} and {}", spec.nodes[i], spec.nodes[j])));
                }
            }
        }
        Ok(FinitePoset { names: spec.nodes.clone(), leq })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    fn bound(&self, a: usize, b: usize, below: bool) -> Option<usize> {
        let r = |x: usize, y: usize| if below { self.leq[x][y] } else { self.leq[y][x] };
        let common: Vec<usize> = (0..self.len()).filter(|&c| r(c, a) && r(c, b)).collect();
        common.iter().copied().find(|&c| common.iter().all(|&d| r(d, c)))
    }

    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        self.bound(a, b, true)
    }

    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        self.bound(a, b, false)
    }

    /// The first pair without a meet or a join, if any.
    pub fn lattice_defect(&self) -> Option<(usize, usize)> {
        if self.is_empty() {
            return Some((0, 0));
        }
        (0..self.len())
            .flat_map(|a| (0..self.len()).map(move |b| (a, b)))
            .find(|&(a, b)| self.meet(a, b).is_none() || self.join(a, b).is_none())
    }

    pub fn is_lattice(&self) -> bool {
        self.lattice_defect().is_none()
    }

    /// The first `(a, b, c)` with `a ∧ (b ∨ c) ≠ (a ∧ b) ∨ (a ∧ c)`.
    pub fn check_distributive(&self) -> Result<Option<(String, String, String)>> {
        if let Some((a, b)) = self.lattice_defect() {
            let msg = if self.is_empty() {
                "empty poset".to_string()
            } else {
                format!("{} and {} lack a meet or join", self.names[a], self.names[b])
            };
            return Err(Error::NotALattice(msg));
        }
        let (m, j) = (|a, b| self.meet(a, b).expect("lattice"), |a, b| self.join(a, b).expect("lattice"));
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if m(a, j(b, c)) != j(m(a, b), m(a, c)) {
                        return Ok(Some((self.names[a].clone(), self.names[b].clone(), self.names[c].clone())));
                    }
                }
            }
        }
        Ok(None)
    }
}

fn poset_spec(nodes: &[&str], covers: &[(&str, &str)]) -> PosetSpec {
    PosetSpec {
        nodes: nodes.iter().map(|s| s.to_string()).collect(),
        covers: covers.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
    }
}

/// Varieties between the trivial variety and `D4 ∨ N`.
pub fn fig1() -> PosetSpec {
    poset_spec(
        &["T", "SL", "C2", "D1", "D2", "D3", "D4", "M", "N", "D3vM", "D3vN", "D4vM", "D4vN"],
        &[
            ("T", "SL"),
            ("SL", "C2"),
            ("C2", "D1"),
            ("D1", "D2"),
            ("D2", "D3"),
            ("D3", "D4"),
            ("D2", "M"),
            ("M", "N"),
            ("D3", "D3vM"),
            ("D3vM", "D3vN"),
            ("D4", "D4vM"),
            ("D4vM", "D4vN"),
            ("M", "D3vM"),
            ("D3vM", "D4vM"),
            ("N", "D3vN"),
            ("D3vN", "D4vN"),
        ],
    )
}

/// Varieties generated by abelian groups of exponent `p`, semilattices and `C2`.
pub fn fig2() -> PosetSpec {
    poset_spec(
        &["T", "Ap", "SL", "ApvSL", "C2", "ApvC2"],
        &[
            ("T", "Ap"),
            ("T", "SL"),
            ("Ap", "ApvSL"),
            ("SL", "ApvSL"),
            ("SL", "C2"),
            ("ApvSL", "ApvC2"),
            ("C2", "ApvC2"),
        ],
    )
}

pub fn m3() -> PosetSpec {
    poset_spec(&["0", "a", "b", "c", "1"], &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")])
}

pub fn n5() -> PosetSpec {
    poset_spec(&["0", "a", "b", "c", "1"], &[("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")])
}

/// A built-in poset by name: `fig1`, `fig2`, `m3`, `n5`.
pub fn named_poset(name: &str) -> Result<PosetSpec> {
    match name {
        "fig1" => Ok(fig1()),
        "fig2" => Ok(fig2()),
        "m3" | "M3" => Ok(m3()),
        "n5" | "N5" => Ok(n5()),
        _ => Err(Error::UnknownName(format!("poset {name}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(s: PosetSpec) -> Result<Option<(String, String, String)>> {
        FinitePoset::new(&s)?.check_distributive()
    }

    #[test]
    fn figures_are_distributive() {
        assert_eq!(dist(fig1()).unwrap(), None);
        assert_eq!(dist(fig2()).unwrap(), None);
    }

    #[test]
    fn controls_are_not() {
        assert!(dist(m3()).unwrap().is_some());
        assert!(dist(n5()).unwrap().is_some());
    }

    #[test]
    fn not_a_lattice() {
        let s = poset_spec(&["a", "b"], &[]);
        assert!(matches!(dist(s), Err(Error::NotALattice(_))));
        let cyc = poset_spec(&["a", "b"], &[("a", "b"), ("b", "a")]);
        assert!(FinitePoset::new(&cyc).is_err());
    }

    #[test]
    fn fig1_joins() {
        let p = FinitePoset::new(&fig1()).unwrap();
        let i = |s| p.index(s).unwrap();
        assert_eq!(p.join(i("D3"), i("N")), Some(i("D3vN")));
        assert_eq!(p.meet(i("D4"), i("N")), Some(i("D2")));
    }
}
