//! Seeded random operators and models for sweeps and probes.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::model::{Channel, LgksModel, ModelError};
use crate::operator::{c, hermitian_part, ComplexMatrix};

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c(s * re, s * im)
    })
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    hermitian_part(&ginibre(rng, d, d))
}

/// Full-rank random density matrix `G G† / Tr(G G†)`.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ginibre(rng, d, d);
    let rho = &g * g.adjoint();
    let tr = rho.trace().re;
    hermitian_part(&rho.unscale(tr))
}

/// Haar-distributed unitary from the QR decomposition of a Ginibre matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let qr = ginibre(rng, d, d).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let diag = r[(j, j)];
        let phase = if diag.norm() > 0.0 { diag / diag.norm() } else { c(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Random model: Hermitian Gaussian `H`, `n_channels` Gaussian operators with
/// rates drawn uniformly from `rate_range`.
pub fn model<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    n_channels: usize,
    rate_range: (f64, f64),
) -> Result<LgksModel, ModelError> {
    let h = hermitian(rng, d);
    let channels = (0..n_channels)
        .map(|_| {
            let rate = rng.random_range(rate_range.0..=rate_range.1);
            Channel::new(rate, ginibre(rng, d, d))
        })
        .collect();
    LgksModel::new(h, channels, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{hermitian_eigen, identity, is_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_objects_have_their_defining_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in 2..=5 {
            let u = unitary(&mut rng, d);
            assert!(is_unitary(&u, 1e-12));
            let rho = density_matrix(&mut rng, d);
            assert!((rho.trace().re - 1.0).abs() < 1e-14);
            assert!(hermitian_eigen(&rho).unwrap().eigenvalues[0] > 0.0);
            let m = model(&mut rng, d, 2, (0.1, 10.0)).unwrap();
            assert!(m.channels().iter().all(|ch| (0.1..=10.0).contains(&ch.rate)));
        }
        let a = unitary(&mut ChaCha8Rng::seed_from_u64(9), 3);
        let b = unitary(&mut ChaCha8Rng::seed_from_u64(9), 3);
        assert_eq!(a, b);
        assert!((a.adjoint() * &b - identity(3)).norm() < 1e-12);
    }
}
