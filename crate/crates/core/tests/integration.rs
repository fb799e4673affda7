use proptest::prelude::*;
use rootsum_core::builders::{self, BUILTINS};
use rootsum_core::relations::{
    perturbed_weight, verify_lemma1_with, verify_matrix_relations_with, verify_pachner_with, MatrixRelation,
    PachnerKind,
};
use rootsum_core::statesum::{glue, invariant, Backend, EvalConfig, ExpSumBackend, WeightModel};
use rootsum_core::{DeltaComplex, RootSpec, Scalar, Slot};

fn value(x: &DeltaComplex, spec: &RootSpec, backend: Backend) -> Scalar {
    invariant(x, &WeightModel::new(spec.clone()), true, backend, &EvalConfig::default()).unwrap()
}

#[test]
fn json_round_trip_keeps_the_invariant() {
    for name in BUILTINS.iter().filter(|n| **n != "t2") {
        let x = builders::builtin(name).unwrap().oriented().unwrap();
        let y = DeltaComplex::from_json(&x.to_json()).unwrap();
        assert_eq!(x.gluings(), y.gluings(), "{name}");
        assert_eq!(x.signs(), y.signs(), "{name}");
        let spec = RootSpec::principal(3);
        assert_eq!(value(&x, &spec, Backend::default()), value(&y, &spec, Backend::default()), "{name}");
    }
}

#[test]
fn reversed_projective_plane_is_conjugate() {
    let x = builders::builtin("cp2").unwrap().oriented().unwrap();
    for n in 3..=5 {
        for a in RootSpec::primitive_powers(n) {
            let spec = RootSpec::new(n, a as i64).unwrap();
            let v = value(&x, &spec, Backend::default());
            assert_eq!(value(&x.flipped(), &spec, Backend::default()), v.conj(), "N={n} a={a}");
        }
    }
}

#[test]
fn perturbed_weights_break_the_identities() {
    let spec = RootSpec::principal(3);
    let w = perturbed_weight(&spec, [1, 1, 0, 1, 1]);
    assert!(!verify_lemma1_with(&spec, &w).all_hold());
    assert!(PachnerKind::ALL.iter().any(|&k| !verify_pachner_with(k, &spec, &w)));
    assert!(MatrixRelation::ALL.iter().any(|&k| !verify_matrix_relations_with(k, &spec, &w)));
}

#[test]
fn glued_sphere_matches_builtin() {
    let p = |s: i8| DeltaComplex::new(4, 1, &[]).unwrap().with_signs(vec![s]).unwrap();
    let matching: Vec<_> = (0..5).map(|i| (Slot::new(0, i), Slot::new(0, i))).collect();
    let g = glue(&p(1), &p(-1), &matching).unwrap();
    for n in 1..=6 {
        let spec = RootSpec::principal(n);
        assert_eq!(
            value(&g, &spec, Backend::Brute),
            value(&builders::builtin("s4").unwrap().oriented().unwrap(), &spec, Backend::default())
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn small_manifolds_match_closed_forms(n in 1u64..=8, pick in 0usize..8) {
        let powers = RootSpec::primitive_powers(n);
        let spec = RootSpec::new(n, powers[pick % powers.len()] as i64).unwrap();
        let ring = spec.ring();
        for (name, expected) in [("s4", 1), ("s3xs1", 1), ("s2xs2", if n % 2 == 0 { 2 } else { 1 })] {
            let x = builders::builtin(name).unwrap().oriented().unwrap();
            let v = value(&x, &spec, Backend::Eliminate(ExpSumBackend::Reduce));
            prop_assert_eq!(v, Scalar::from_int(ring, expected, 0), "{} at N={}", name, n);
        }
    }
}
