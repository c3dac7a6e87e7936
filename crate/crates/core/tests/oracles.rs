mod common;

use common::*;
use monoidlab::catalog::DEFAULT_CAP;
use monoidlab::deciders::{decide, ExactTheory};
use monoidlab::engine::{invertibility_degree, is_linear_balanced, Invertibility};
use monoidlab::lab::{product_member, BasisBounds, FinitePoset, PosetSpec, ProductResult, VarietyHandle};
use monoidlab::monoid::{build_sw, evaluate, satisfies, FiniteMonoid, Label, Satisfaction};
use monoidlab::word::w;
use monoidlab::{Identity, Word};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn small_monoids() -> Vec<(String, FiniteMonoid)> {
    let mut out: Vec<(String, FiniteMonoid)> =
        ["xy", "xx", "xtx", "xyx"].iter().map(|s| (format!("S({s})"), build_sw(&[w(s)]))).collect();
    out.push(("SL".into(), FiniteMonoid::semilattice()));
    for n in 1..=4 {
        out.push((format!("Z{n}"), FiniteMonoid::cyclic_group(n)));
    }
    for n in 1..=3 {
        out.push((format!("C{n}"), FiniteMonoid::cyclic_aperiodic(n)));
    }
    out.retain(|(_, m)| m.size() <= 8);
    out
}

#[test]
fn sw_matches_factor_enumeration() {
    let mut rng = StdRng::seed_from_u64(11);
    let alphabet = letters(&["x", "y", "t"]);
    for _ in 0..200 {
        let ws: Vec<Word> =
            (0..rand::Rng::gen_range(&mut rng, 1..=2)).map(|_| random_word(&mut rng, &alphabet, 7)).collect();
        let m = build_sw(&ws);
        let factors = naive_factors(&ws);
        assert_eq!(m.size(), factors.len() + 1, "{ws:?}");
        let labels = m.labels().expect("labelled");
        for a in 0..m.size() {
            for b in 0..m.size() {
                let expect = match (&labels[a], &labels[b]) {
                    (Label::Word(u), Label::Word(v)) => {
                        let uv = u.concat(v);
                        if factors.contains(uv.letters()) {
                            Label::Word(uv)
                        } else {
                            Label::Zero
                        }
                    }
                    _ => Label::Zero,
                };
                assert_eq!(labels[m.mul(a, b)], expect);
            }
        }
    }
}

#[test]
fn pruned_satisfaction_matches_exhaustive() {
    let mut rng = StdRng::seed_from_u64(12);
    let alphabet = letters(&["x", "y", "t"]);
    let monoids = small_monoids();
    for _ in 0..400 {
        let id = Identity::new(random_word(&mut rng, &alphabet, 5), random_word(&mut rng, &alphabet, 5));
        for (name, m) in &monoids {
            let fast = satisfies(m, &id);
            assert_eq!(fast.holds(), naive_satisfies(m, &id), "{name} {id}");
            if let Satisfaction::Fails(asg) = fast {
                let mut full = asg.clone();
                for l in id.content() {
                    full.entry(l).or_insert(m.identity());
                }
                assert_ne!(evaluate(m, &id.lhs, &full).unwrap(), evaluate(m, &id.rhs, &full).unwrap());
            }
        }
    }
}

#[test]
fn exact_deciders_match_generating_monoids() {
    let mut rng = StdRng::seed_from_u64(13);
    let alphabet = letters(&["x", "y"]);
    let pairs = [
        (ExactTheory::Sl, FiniteMonoid::semilattice()),
        (ExactTheory::Abelian(3), FiniteMonoid::cyclic_group(3)),
        (ExactTheory::Commutative(2), FiniteMonoid::cyclic_aperiodic(2)),
    ];
    for _ in 0..300 {
        let id = Identity::new(random_word(&mut rng, &alphabet, 6), random_word(&mut rng, &alphabet, 6));
        for (th, m) in &pairs {
            assert_eq!(decide(*th, &id), naive_satisfies(m, &id), "{th} {id}");
        }
    }
}

/// `{1, a, ..., a^(k+p-1)}` with `a^k = a^(k+p)`, multiplied by exponent arithmetic.
fn naive_monogenic(k: usize, p: usize) -> FiniteMonoid {
    let s = k + p;
    let mut table = Vec::new();
    for i in 0..s {
        for j in 0..s {
            let mut e = i + j;
            while e >= s {
                e -= p;
            }
            table.push(e as u32);
        }
    }
    FiniteMonoid::from_table(s, 0, table, None).unwrap()
}

#[test]
fn com_deciders_match_monogenic_monoids() {
    let words = naive_words(&letters(&["x", "y"]), 6);
    for (k, l) in [(0, 2), (1, 2), (1, 3), (2, 4), (2, 5), (3, 4)] {
        let m = naive_monogenic(k, l - k);
        for u in &words {
            for v in &words {
                let id = Identity::new(u.clone(), v.clone());
                assert_eq!(
                    decide(ExactTheory::Com(k as u32, l as u32), &id),
                    naive_satisfies(&m, &id),
                    "COM {k},{l} {id}"
                );
            }
        }
    }
}

#[test]
fn com_with_unit_period_agrees_with_c() {
    let words = naive_words(&letters(&["x", "y"]), 8);
    for n in 1..=4u32 {
        for u in &words {
            for v in &words {
                let id = Identity::new(u.clone(), v.clone());
                assert_eq!(
                    decide(ExactTheory::Com(n, n + 1), &id),
                    decide(ExactTheory::Commutative(n), &id),
                    "{n} {id}"
                );
            }
        }
    }
}

fn naive_product(x: ExactTheory, y: ExactTheory, u: &Word, v: &Word, max_len: usize) -> bool {
    let mut con = u.content();
    con.extend(v.content());
    let alphabet: Vec<_> = con.into_iter().collect();
    naive_words(&alphabet, max_len)
        .iter()
        .any(|c| decide(x, &Identity::new(u.clone(), c.clone())) && decide(y, &Identity::new(c.clone(), v.clone())))
}

#[test]
fn product_search_matches_enumeration() {
    let theories = [ExactTheory::Sl, ExactTheory::Abelian(2), ExactTheory::Commutative(2), ExactTheory::AbelianSl(2)];
    let words: Vec<Word> = naive_words(&letters(&["x", "y"]), 2).into_iter().filter(|w| !w.is_empty()).collect();
    for &x in &theories {
        for &y in &theories {
            let (hx, hy) = (VarietyHandle::exact(x), VarietyHandle::exact(y));
            for u in &words {
                for v in &words {
                    for max_len in [4, 6] {
                        let got = product_member(&[&hx, &hy], u, v, max_len);
                        let expect = naive_product(x, y, u, v, max_len);
                        match got {
                            ProductResult::Found(ref ch) => {
                                assert!(expect, "{x} {y} {u} {v}");
                                assert!(decide(x, &Identity::new(u.clone(), ch[0].clone())));
                                assert!(decide(y, &Identity::new(ch[0].clone(), v.clone())));
                            }
                            ProductResult::NotFoundWithinBounds => assert!(!expect, "{x} {y} {u} {v} {max_len}"),
                            ProductResult::UnknownLinks => panic!("exact links are never unknown"),
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn generator_product_matches_enumeration() {
    let hx = VarietyHandle::parse("sw:xy", DEFAULT_CAP, BasisBounds::default()).unwrap();
    let hy = VarietyHandle::exact(ExactTheory::Sl);
    let m = build_sw(&[w("xy")]);
    let words: Vec<Word> = naive_words(&letters(&["x", "y"]), 3).into_iter().filter(|w| !w.is_empty()).collect();
    for u in &words {
        for v in &words {
            let mut con = u.content();
            con.extend(v.content());
            let alphabet: Vec<_> = con.into_iter().collect();
            let expect = naive_words(&alphabet, 5).into_iter().any(|c| {
                naive_satisfies(&m, &Identity::new(u.clone(), c.clone()))
                    && decide(ExactTheory::Sl, &Identity::new(c, v.clone()))
            });
            let got = product_member(&[&hx, &hy], u, v, 5);
            assert_eq!(matches!(got, ProductResult::Found(_)), expect, "{u} {v}");
        }
    }
}

#[test]
fn linear_balanced_matches_block_comparison() {
    let mut rng = StdRng::seed_from_u64(14);
    let mut positive = 0;
    for _ in 0..1000 {
        let id = random_identity(&mut rng, 12);
        let expect = naive_linear_balanced(&id);
        positive += expect as usize;
        assert_eq!(is_linear_balanced(&id), expect, "{id}");
    }
    assert!(positive > 100 && positive < 900);
}

#[test]
fn invertibility_matches_bfs() {
    let mut rng = StdRng::seed_from_u64(15);
    for _ in 0..200 {
        let id = random_linear_balanced(&mut rng, 12);
        let expect = bfs_invertibility(&id).expect("reachable");
        assert_eq!(invertibility_degree(&id, 64), Invertibility::Degree(expect), "{id}");
    }
}

fn set_lattice_spec(l: &SetLattice) -> PosetSpec {
    let n = l.sets.len();
    PosetSpec {
        nodes: (0..n).map(SetLattice::name).collect(),
        covers: (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && l.leq(a, b))
            .map(|(a, b)| (SetLattice::name(a), SetLattice::name(b)))
            .collect(),
    }
}

#[test]
fn distributivity_matches_forbidden_sublattices() {
    let mut rng = StdRng::seed_from_u64(16);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..150 {
        let l = SetLattice::random(&mut rng, 4, 4);
        let p = FinitePoset::new(&set_lattice_spec(&l)).unwrap();
        assert!(p.is_lattice());
        let n = l.sets.len();
        for a in 0..n {
            for b in 0..n {
                assert_eq!(p.meet(a, b), Some(l.meet(a, b)));
                assert_eq!(p.join(a, b), Some(l.join(a, b)));
            }
        }
        let forbidden = has_m3_or_n5(n, &|a, b| l.leq(a, b), &|a, b| l.meet(a, b), &|a, b| l.join(a, b));
        let distributive = p.check_distributive().unwrap().is_none();
        assert_eq!(distributive, !forbidden);
        if distributive {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes > 0 && no > 0);
}
