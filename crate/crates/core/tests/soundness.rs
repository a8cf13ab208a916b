use lgks_core::criteria::{audit, AuditConfig, Criterion};
use lgks_core::operator::matrix_unit;
use lgks_core::{random, superop, zoo, Channel, ComplexMatrix, LgksModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_models_never_contradict_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..40 {
        let d = rng.random_range(2..=4);
        let n = rng.random_range(1..=3);
        let m = random::model(&mut rng, d, n, (0.1, 10.0)).unwrap();
        let r = audit(&m, &AuditConfig::default()).unwrap();
        assert_eq!(r.consistent, Some(true), "trial {trial}: {:?}", r.inconsistencies);
        assert_eq!(r.multiplicity(), Some(1), "trial {trial}");
        assert!(r.verdict(Criterion::Evans).certifies(), "trial {trial}");
    }
}

#[test]
fn zoo_audits_are_consistent() {
    for (name, m) in zoo::catalog() {
        let r = audit(&m, &AuditConfig::default()).unwrap();
        assert_eq!(r.consistent, Some(true), "{name}: {:?}", r.inconsistencies);
        assert!(r.failures.is_empty(), "{name}: {:?}", r.failures);
        let expected = if name == "dephasing" { 2 } else { 1 };
        assert_eq!(r.multiplicity(), Some(expected), "{name}");
    }
}

/// Two jump operators feeding two different ground states from one excited
/// level. Nothing but multiples of the identity commutes with
/// `{E13, E23, E31, E32}`, yet every state on `span{|1⟩, |2⟩}` is stationary.
fn two_sink_model() -> LgksModel {
    LgksModel::new(
        ComplexMatrix::zeros(3, 3),
        vec![
            Channel::new(1.0, matrix_unit(1, 3, 3).unwrap()),
            Channel::new(1.0, matrix_unit(2, 3, 3).unwrap()),
        ],
        None,
    )
    .unwrap()
}

#[test]
fn trivial_commutant_does_not_force_uniqueness() {
    let m = two_sink_model();
    let steady = superop::steady_states(&m, 1e-9).unwrap();
    assert_eq!(steady.multiplicity, 4);
    let r = audit(&m, &AuditConfig::default()).unwrap();
    assert!(r.verdict(Criterion::Evans).certifies());
    assert_eq!(r.consistent, Some(false));
    assert!(r.tolerance_review);
    assert!(r
        .inconsistencies
        .iter()
        .any(|s| s.starts_with("evans")));
}

#[test]
fn lattice_with_a_missing_bath_keeps_two_states() {
    let site = zoo::catalog().into_iter().find(|(n, _)| *n == "two-level-t0").unwrap().1;
    for n in [2, 3] {
        let m = lgks_core::model::atom_lattice(n, &site, None)
            .unwrap()
            .without_channel(1)
            .unwrap();
        let steady = superop::steady_states(&m, 1e-9).unwrap();
        assert_eq!(steady.multiplicity, 2, "N={n}");
        let s = superop::spectrum_report(&m, 1e-9).unwrap();
        assert_eq!(s.pure_imaginary, 2, "N={n}");
        assert!(s.max_real <= 1e-10, "N={n}");
    }
}
