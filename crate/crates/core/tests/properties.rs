use std::collections::BTreeMap;

use monoidlab::catalog::IdentitySystem;
use monoidlab::deciders::{decide, theta_class, ExactTheory};
use monoidlab::engine::{derive, replay, DerivationResult};
use monoidlab::lab::{product_member, Equivalence, ProductResult, VarietyHandle};
use monoidlab::monoid::{build_sw, dual_monoid, satisfies, FiniteMonoid};
use monoidlab::word::ident;
use monoidlab::{Identity, Letter, Word};
use proptest::prelude::*;

fn letter() -> impl Strategy<Value = Letter> {
    (prop::sample::select(vec!["x", "y", "z", "t", "s"]), any::<bool>(), prop::option::of(1u32..12)).prop_map(
        |(b, prime, i)| {
            let base = if prime { format!("{b}'") } else { b.to_string() };
            Letter::new(&base, i)
        },
    )
}

fn word_over(names: &'static [&'static str], max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(names), 0..=max)
        .prop_map(|v| Word::new(v.into_iter().map(Letter::plain).collect()))
}

fn theory() -> impl Strategy<Value = ExactTheory> {
    prop_oneof![
        Just(ExactTheory::Sl),
        (1u32..5).prop_map(ExactTheory::Abelian),
        (1u32..4).prop_map(ExactTheory::AbelianSl),
        (1u32..4).prop_map(ExactTheory::Commutative),
        Just(ExactTheory::Lrb),
    ]
}

fn small_monoid() -> impl Strategy<Value = FiniteMonoid> {
    prop_oneof![
        Just(FiniteMonoid::semilattice()),
        (1usize..5).prop_map(FiniteMonoid::cyclic_group),
        (1usize..4).prop_map(FiniteMonoid::cyclic_aperiodic),
        word_over(&["x", "y", "t"], 4).prop_map(|w| build_sw(&[w])),
    ]
}

proptest! {
    #[test]
    fn words_round_trip(ls in prop::collection::vec(letter(), 0..10)) {
        let w = Word::new(ls);
        let back: Word = w.to_string().parse().unwrap();
        prop_assert_eq!(back, w);
    }

    #[test]
    fn identities_round_trip(a in prop::collection::vec(letter(), 0..6), b in prop::collection::vec(letter(), 0..6)) {
        let id = Identity::new(Word::new(a), Word::new(b));
        let back: Identity = id.to_string().parse().unwrap();
        prop_assert_eq!(back, id);
    }

    #[test]
    fn reverse_is_an_anti_morphism(u in word_over(&["x", "y", "z"], 6), v in word_over(&["x", "y", "z"], 6)) {
        prop_assert_eq!(u.reverse().reverse(), u.clone());
        prop_assert_eq!(u.concat(&v).reverse(), v.reverse().concat(&u.reverse()));
    }

    #[test]
    fn rees_quotients_are_monoids_with_zero(ws in prop::collection::vec(word_over(&["x", "y", "t"], 6), 1..3)) {
        let m = build_sw(&ws);
        prop_assert!(m.audit_associativity().is_none());
        prop_assert!(m.audit_identity().is_none());
        prop_assert!(m.audit_zero());
        for w in &ws {
            prop_assert!(m.element(w).is_some());
            prop_assert!(satisfies(&m, &Identity::new(w.clone(), w.clone())).holds());
        }
    }

    #[test]
    fn duality_reverses_identities(m in small_monoid(), u in word_over(&["x", "y"], 4), v in word_over(&["x", "y"], 4)) {
        let id = Identity::new(u, v);
        prop_assert_eq!(satisfies(&m, &id).holds(), satisfies(&dual_monoid(&m), &id.reverse()).holds());
    }

    #[test]
    fn theories_are_fully_invariant_congruences(
        th in theory(),
        u in word_over(&["x", "y"], 5),
        v in word_over(&["x", "y"], 5),
        c in word_over(&["x", "y"], 3),
        sx in word_over(&["x", "y", "z"], 3),
        sy in word_over(&["x", "y", "z"], 3),
    ) {
        let id = Identity::new(u.clone(), v.clone());
        prop_assert!(decide(th, &Identity::new(u.clone(), u.clone())));
        prop_assert_eq!(decide(th, &id), decide(th, &id.swap()));
        if decide(th, &id) {
            prop_assert!(decide(th, &Identity::new(u.concat(&c), v.concat(&c))));
            prop_assert!(decide(th, &Identity::new(c.concat(&u), c.concat(&v))));
            let sub: BTreeMap<Letter, Word> = [(Letter::plain("x"), sx), (Letter::plain("y"), sy)].into();
            prop_assert!(decide(th, &Identity::new(u.substitute(&sub), v.substitute(&sub))));
        }
    }

    #[test]
    fn theories_are_transitive(th in theory(), a in word_over(&["x", "y"], 5), b in word_over(&["x", "y"], 5), c in word_over(&["x", "y"], 5)) {
        if decide(th, &Identity::new(a.clone(), b.clone())) && decide(th, &Identity::new(b, c.clone())) {
            prop_assert!(decide(th, &Identity::new(a, c)));
        }
    }

    #[test]
    fn joins_with_sl_refine_both_parts(n in 2u32..5, u in word_over(&["x", "y", "z"], 6), v in word_over(&["x", "y", "z"], 6)) {
        let id = Identity::new(u, v);
        if decide(ExactTheory::AbelianSl(n), &id) {
            prop_assert!(decide(ExactTheory::Sl, &id));
            prop_assert!(decide(ExactTheory::Abelian(n), &id));
        }
    }

    #[test]
    fn theta_classes_are_classes(th in theory(), u in word_over(&["x", "y"], 3)) {
        let class = theta_class(th, &u, 5, &Default::default());
        prop_assert!(class.contains(&u));
        for a in &class {
            prop_assert!(decide(th, &Identity::new(u.clone(), a.clone())));
        }
    }

    #[test]
    fn proved_derivations_replay_and_hold_in_models(u in word_over(&["x", "y"], 4), v in word_over(&["x", "y"], 4)) {
        let sys = IdentitySystem::new("SL", vec![ident("xy = yx"), ident("x = xx")]);
        let goal = Identity::new(u, v);
        let len = goal.lhs.len().max(goal.rhs.len()) + 2;
        match derive(&sys, &goal, len, 20_000, &[FiniteMonoid::semilattice()]) {
            DerivationResult::Proved(chain) => {
                prop_assert!(replay(&sys, &goal, &chain));
                prop_assert!(decide(ExactTheory::Sl, &goal));
            }
            DerivationResult::RefutedByModel { .. } => prop_assert!(!decide(ExactTheory::Sl, &goal)),
            DerivationResult::Unknown(_) => {}
        }
    }

    #[test]
    fn quotients_preserve_permutability(a in prop::collection::vec(0usize..3, 5), b in prop::collection::vec(0usize..3, 5), n in prop::collection::vec(0usize..5, 5)) {
        let (a, b, n) = (Equivalence::from_labels(&a), Equivalence::from_labels(&b), Equivalence::from_labels(&n));
        // Meet with `a` and `b` to obtain a common refinement.
        let nu = Equivalence::from_labels(&(0..5).map(|i| n.class(i) * 100 + a.class(i) * 10 + b.class(i)).collect::<Vec<_>>());
        let (qa, qb) = (a.quotient(&nu).unwrap(), b.quotient(&nu).unwrap());
        prop_assert_eq!(a.permutes_with(&b), qa.permutes_with(&qb));
    }

    #[test]
    fn found_chains_are_chains(x in theory(), y in theory(), u in word_over(&["x", "y"], 3), v in word_over(&["x", "y"], 3)) {
        let (hx, hy) = (VarietyHandle::exact(x), VarietyHandle::exact(y));
        if let ProductResult::Found(ch) = product_member(&[&hx, &hy], &u, &v, 5) {
            prop_assert!(decide(x, &Identity::new(u, ch[0].clone())));
            prop_assert!(decide(y, &Identity::new(ch[0].clone(), v)));
        }
    }
}
