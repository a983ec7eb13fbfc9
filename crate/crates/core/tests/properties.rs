use std::sync::{Arc, OnceLock};

use forge_core::limits::{enumerate_extensions, CatalogParams};
use forge_core::lifting::{lift, verify_functoriality, ElementRef, Star};
use forge_core::morphism::{is_homomorphism, HomSearchLimit};
use forge_core::oracle::verify_universal_property;
use forge_core::presets::{all_structures, all_structures_up_to};
use forge_core::pushout::{amalgamated_sum, pushout_1phep, Span};
use forge_core::suites::one_point_spans;
use forge_core::{FiniteStructure, Morphism, Rational, StructureClass};
use proptest::prelude::*;

const CLASSES: [StructureClass; 4] =
    [StructureClass::Graph, StructureClass::Poset, StructureClass::Metric, StructureClass::Semilattice];

fn grid() -> Vec<Rational> {
    vec![Rational::integer(1), Rational::integer(2)]
}

fn structures(class: StructureClass, n: usize) -> &'static [FiniteStructure] {
    static CACHE: OnceLock<Vec<Vec<Vec<FiniteStructure>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        CLASSES.iter().map(|&c| (0..=3).map(|k| all_structures(c, k, &grid())).collect()).collect()
    });
    &cache[CLASSES.iter().position(|&c| c == class).unwrap()][n]
}

fn spans(class: StructureClass) -> &'static [Span] {
    static CACHE: OnceLock<Vec<Vec<Span>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| CLASSES.iter().map(|&c| one_point_spans(c, 3, &grid()).unwrap()).collect());
    &cache[CLASSES.iter().position(|&c| c == class).unwrap()]
}

fn star_for(a: &Arc<FiniteStructure>) -> Star {
    let params = if a.class() == StructureClass::Metric {
        CatalogParams::with_grid(2, grid())
    } else {
        CatalogParams::new(2)
    };
    Star::new(enumerate_extensions(a.clone(), &params).unwrap(), 5000).unwrap()
}

fn class_strategy() -> impl Strategy<Value = StructureClass> {
    prop::sample::select(CLASSES.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lifts_compose(
        class in class_strategy(),
        n in 1usize..=3,
        pick in any::<prop::sample::Index>(),
        f in prop::collection::vec(any::<prop::sample::Index>(), 3),
        g in prop::collection::vec(any::<prop::sample::Index>(), 3),
    ) {
        let all = structures(class, n);
        let a = Arc::new(pick.get(all).clone());
        let phi: Vec<usize> = f[..n].iter().map(|i| i.index(n)).collect();
        let psi: Vec<usize> = g[..n].iter().map(|i| i.index(n)).collect();
        prop_assume!(is_homomorphism(&a, &a, &phi) && is_homomorphism(&a, &a, &psi));
        let phi = Morphism::new(a.clone(), a.clone(), phi).unwrap();
        let psi = Morphism::new(a.clone(), a.clone(), psi).unwrap();
        let star = star_for(&a);

        let report = verify_functoriality(&phi, &psi, &star).unwrap();
        prop_assert!(report.passed(), "{:?}", report.difference);

        let lifted = lift(&phi, &star).unwrap();
        for x in 0..n {
            prop_assert_eq!(lifted.apply(ElementRef::Root(x)), ElementRef::Root(phi.apply(x)));
        }
        if let Some(m) = lifted.lifted() {
            prop_assert!(is_homomorphism(m.source(), m.target(), m.map()));
        }
    }

    #[test]
    fn identity_lifts_to_identity(class in class_strategy(), n in 0usize..=3, pick in any::<prop::sample::Index>()) {
        let all = structures(class, n);
        prop_assume!(!all.is_empty());
        let a = Arc::new(pick.get(all).clone());
        let star = star_for(&a);
        let lifted = lift(&Morphism::identity(a), &star).unwrap();
        prop_assert!(lifted.is_identity(&star));
    }

    #[test]
    fn one_point_pushouts_are_universal(class in class_strategy(), pick in any::<prop::sample::Index>()) {
        let span = pick.get(spans(class)).clone();
        let sq = pushout_1phep(span).unwrap();
        prop_assert!(sq.commutes());
        prop_assert!(sq.left_leg().kind().is_hom() && sq.right_leg().kind().is_hom());
        let objects = all_structures_up_to(class, 2, &grid());
        let report = verify_universal_property(&sq, &objects, HomSearchLimit::default()).unwrap();
        prop_assert!(report.passed(), "{:?}", report.failure);
    }

    #[test]
    fn amalgam_legs_are_embeddings(class in class_strategy(), pick in any::<prop::sample::Index>()) {
        let span = pick.get(spans(class)).clone();
        prop_assume!(span.left().kind().is_embedding() && span.right().kind().is_embedding());
        let sq = amalgamated_sum(span).unwrap();
        prop_assert!(sq.commutes());
        prop_assert!(sq.left_leg().kind().is_embedding());
        prop_assert!(sq.right_leg().kind().is_embedding());
    }
}
