//! Named models with default parameters.

use crate::model::{self, Channel, LgksModel, ModelError};
use crate::operator::{c, pauli, real_diagonal};

/// `ω S_z` plus decay through `S⁻`, basis ordered by descending `m`.
pub fn spin_decay(spin: f64, gamma: f64, omega: f64) -> Result<LgksModel, ModelError> {
    let lowering = model::spin_lowering(spin)?;
    let d = lowering.nrows();
    let m: Vec<f64> = (0..d).map(|k| omega * (spin - k as f64)).collect();
    LgksModel::new(real_diagonal(&m), vec![Channel::new(gamma, lowering)], None)
}

/// `ω n` plus photon loss through the truncated annihilation operator.
pub fn fock_decay(n_max: usize, gamma: f64, omega: f64) -> Result<LgksModel, ModelError> {
    let a = model::truncated_annihilation(n_max)?;
    let n: Vec<f64> = (0..=n_max).map(|k| omega * k as f64).collect();
    LgksModel::new(real_diagonal(&n), vec![Channel::new(gamma, a)], None)
}

/// Every zoo family at its default parameters, keyed by CLI name.
pub fn catalog() -> Vec<(&'static str, LgksModel)> {
    let h = pauli::sigma_z() * c(0.5, 0.0);
    let t0 = model::two_level_t0(1.0, h.clone()).expect("valid defaults");
    vec![
        ("two-level-t0", t0.clone()),
        (
            "two-level-finite-t",
            model::two_level_finite_t(1.0, 0.5, h.clone()).expect("valid defaults"),
        ),
        (
            "dephasing",
            model::dephasing_two_level(1.0, h).expect("valid defaults"),
        ),
        (
            "n-level",
            model::n_level_atom(4, &[1.0, 1.0, 1.0], &[0.5, 0.5, 0.5]).expect("valid defaults"),
        ),
        ("spin-decay", spin_decay(1.0, 1.0, 1.0).expect("valid defaults")),
        ("fock-decay", fock_decay(3, 1.0, 1.0).expect("valid defaults")),
        (
            "lattice",
            model::atom_lattice(2, &t0, Some(0.3)).expect("valid defaults"),
        ),
    ]
}
