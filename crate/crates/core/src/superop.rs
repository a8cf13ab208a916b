//! Vectorized generators and the brute-force steady-state oracle.
//!
//! With column stacking, `vec(A X B) = (Bᵀ ⊗ A) vec(X)`. The generator is
//! assembled from that identity and checked against the direct evaluation
//! in [`lindblad_rhs`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::model::{LgksModel, ModelError};
use crate::operator::{
    self, anticommutator, c, commutator, expm, hermitian_eigen, identity, kron, null_space,
    unvec, vec, ComplexMatrix, ComplexVector, LinalgError, C64,
};
use crate::random;

/// Largest Hilbert dimension handled by the dense oracle.
pub const DEFAULT_MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SuperopError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("dimension {dim} exceeds the dense oracle cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("invalid initial state: {0}")]
    InvalidState(String),
    #[error("negative time {0}: the semigroup has no inverse")]
    NegativeTime(f64),
}

pub type Result<T> = std::result::Result<T, SuperopError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Acts on states.
    Schroedinger,
    /// Acts on observables.
    Heisenberg,
}

#[derive(Debug, Clone)]
pub struct LiouvillianMatrix {
    pub dim: usize,
    pub matrix: ComplexMatrix,
    pub kind: GeneratorKind,
}

impl LiouvillianMatrix {
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.shape() != (self.dim, self.dim) {
            return Err(LinalgError::DimensionMismatch {
                left: (self.dim, self.dim),
                right: x.shape(),
            }
            .into());
        }
        Ok(unvec(&(&self.matrix * vec(x)), self.dim)?)
    }
}

fn check_cap(model: &LgksModel, cap: usize) -> Result<()> {
    if model.dim() > cap {
        return Err(SuperopError::DimensionCap {
            dim: model.dim(),
            cap,
        });
    }
    Ok(())
}

/// `−i[H,ρ] + Σ γ (B ρ B† − ½{B†B, ρ})`, evaluated directly.
pub fn lindblad_rhs(model: &LgksModel, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    model.ensure_valid()?;
    let mut out = commutator(model.hamiltonian(), rho)? * c(0.0, -1.0);
    for ch in model.channels() {
        let b = &ch.operator;
        let bd = b.adjoint();
        let jump = b * rho * &bd;
        let decay = anticommutator(&(&bd * b), rho)?.scale(0.5);
        out += (jump - decay).scale(ch.rate);
    }
    Ok(out)
}

/// `+i[H,O] + Σ γ (B† O B − ½{B†B, O})`, evaluated directly.
pub fn adjoint_lindblad_rhs(model: &LgksModel, obs: &ComplexMatrix) -> Result<ComplexMatrix> {
    model.ensure_valid()?;
    let mut out = commutator(model.hamiltonian(), obs)? * c(0.0, 1.0);
    for ch in model.channels() {
        let b = &ch.operator;
        let bd = b.adjoint();
        let jump = &bd * obs * b;
        let decay = anticommutator(&(&bd * b), obs)?.scale(0.5);
        out += (jump - decay).scale(ch.rate);
    }
    Ok(out)
}

pub fn build_liouvillian(model: &LgksModel) -> Result<LiouvillianMatrix> {
    build(model, GeneratorKind::Schroedinger, DEFAULT_MAX_DIM)
}

pub fn build_liouvillian_with_cap(model: &LgksModel, cap: usize) -> Result<LiouvillianMatrix> {
    build(model, GeneratorKind::Schroedinger, cap)
}

pub fn build_adjoint_liouvillian(model: &LgksModel) -> Result<LiouvillianMatrix> {
    build(model, GeneratorKind::Heisenberg, DEFAULT_MAX_DIM)
}

fn build(model: &LgksModel, kind: GeneratorKind, cap: usize) -> Result<LiouvillianMatrix> {
    model.ensure_valid()?;
    check_cap(model, cap)?;
    let d = model.dim();
    let id = identity(d);
    let h = model.hamiltonian();
    // vec(HX − XH) = (I ⊗ H − Hᵀ ⊗ I) vec X
    let h_comm = kron(&id, h) - kron(&h.transpose(), &id);
    let sign = match kind {
        GeneratorKind::Schroedinger => c(0.0, -1.0),
        GeneratorKind::Heisenberg => c(0.0, 1.0),
    };
    let mut matrix = h_comm * sign;
    for ch in model.channels() {
        let b = &ch.operator;
        let bdb = b.adjoint() * b;
        let jump = match kind {
            // B X B†
            GeneratorKind::Schroedinger => kron(&b.conjugate(), b),
            // B† X B
            GeneratorKind::Heisenberg => kron(&b.transpose(), &b.adjoint()),
        };
        let decay = (kron(&id, &bdb) + kron(&bdb.transpose(), &id)).scale(0.5);
        matrix += (jump - decay).scale(ch.rate);
    }
    Ok(LiouvillianMatrix { dim: d, matrix, kind })
}

/// Physical steady-state extraction outcome.
#[derive(Debug, Clone, PartialEq)]
pub enum Extraction {
    Ok,
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct SteadyStateResult {
    pub multiplicity: usize,
    /// Density matrices spanning the stationary set.
    pub states: Vec<ComplexMatrix>,
    /// Hermitian, Frobenius-orthonormal kernel basis.
    pub kernel_basis: Vec<ComplexMatrix>,
    /// `−max Re λ` over nonzero eigenvalues; `None` if every eigenvalue is zero.
    pub gap: Option<f64>,
    pub extraction: Extraction,
    /// Largest Liouvillian singular value counted as zero.
    pub kernel_singular_value: Option<f64>,
    /// Smallest Liouvillian singular value counted as nonzero.
    pub smallest_retained_singular_value: Option<f64>,
}

/// Eigenvalues within this distance (relative to the spectral radius) of an
/// axis count as zero when classifying a spectrum.
fn zero_threshold(eigs: &[C64], tol: f64) -> f64 {
    let radius = eigs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    tol * radius.max(1.0)
}

fn spectral_gap(eigs: &[C64], tol: f64) -> Option<f64> {
    let thr = zero_threshold(eigs, tol);
    eigs.iter()
        .filter(|z| z.norm() > thr)
        .map(|z| -z.re)
        .reduce(f64::min)
}

/// Kernel of the Liouvillian, its Hermitian basis and physical states.
pub fn steady_states(model: &LgksModel, tol: f64) -> Result<SteadyStateResult> {
    steady_states_with_cap(model, tol, DEFAULT_MAX_DIM)
}

pub fn steady_states_with_cap(
    model: &LgksModel,
    tol: f64,
    cap: usize,
) -> Result<SteadyStateResult> {
    let liou = build_liouvillian_with_cap(model, cap)?;
    let d = liou.dim;
    let ns = null_space(&liou.matrix, tol)?;
    let eigs = operator::eigenvalues(&liou.matrix)?;
    let gap = spectral_gap(&eigs, tol);
    let kernel: Vec<ComplexMatrix> = ns
        .basis
        .iter()
        .map(|v| unvec(v, d))
        .collect::<std::result::Result<_, _>>()?;
    let kernel_basis = hermitian_basis(&kernel, ns.nullity);
    let (states, extraction) = match extract_states(&liou, &ns.basis, model, tol) {
        Ok(states) => (states, Extraction::Ok),
        Err(msg) => (Vec::new(), Extraction::Failed(msg)),
    };
    Ok(SteadyStateResult {
        multiplicity: ns.nullity,
        states,
        kernel_basis,
        gap,
        extraction,
        kernel_singular_value: ns.largest_discarded(),
        smallest_retained_singular_value: ns.smallest_retained(),
    })
}

/// Real Gram-Schmidt over `{(K+K†)/2, (K−K†)/2i}` with largest-norm pivoting.
fn hermitian_basis(kernel: &[ComplexMatrix], target: usize) -> Vec<ComplexMatrix> {
    let mut candidates: Vec<ComplexMatrix> = kernel
        .iter()
        .flat_map(|k| {
            let kd = k.adjoint();
            [(k + &kd).scale(0.5), (k - &kd) * c(0.0, -0.5)]
        })
        .collect();
    let mut basis: Vec<ComplexMatrix> = Vec::with_capacity(target);
    while basis.len() < target {
        let Some((idx, norm)) = candidates
            .iter()
            .enumerate()
            .map(|(i, m)| (i, m.norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
        else {
            break;
        };
        if norm < 1e-8 {
            break;
        }
        let pivot = candidates.swap_remove(idx).unscale(norm);
        for cand in candidates.iter_mut() {
            for _ in 0..2 {
                let overlap = operator::frobenius_inner(&pivot, cand).re;
                *cand -= pivot.scale(overlap);
            }
        }
        basis.push(pivot);
    }
    basis
}

/// Images of a spanning set of pure states under the spectral projector onto
/// the kernel, `P = R (Wᴴ R)⁻¹ Wᴴ`, with `R` and `W` the right and left
/// kernels. `P` is the long-time limit of the semigroup, so each image is a
/// density matrix.
fn extract_states(
    liou: &LiouvillianMatrix,
    right: &[ComplexVector],
    model: &LgksModel,
    tol: f64,
) -> std::result::Result<Vec<ComplexMatrix>, String> {
    let d = liou.dim;
    let m = right.len();
    if m == 0 {
        return Err("empty kernel".into());
    }
    if m == 1 {
        let k = unvec(&right[0], d).map_err(|e| e.to_string())?;
        let tr = k.trace();
        if tr.norm() < 1e-12 * k.norm() {
            return Err("kernel element has zero trace".into());
        }
        // Divide out the arbitrary phase and scale of the kernel vector.
        let rho = operator::hermitian_part(&(k / tr));
        let tr = rho.trace().re;
        let rho = rho.unscale(tr);
        check_state(&rho)?;
        return Ok(vec![rho]);
    }

    let n = d * d;
    let adjoint = build_adjoint_liouvillian(model).map_err(|e| e.to_string())?;
    let left = null_space(&adjoint.matrix, tol).map_err(|e| e.to_string())?;
    if left.nullity != m {
        return Err(format!(
            "left kernel dimension {} differs from right kernel dimension {m}",
            left.nullity
        ));
    }
    let r = ComplexMatrix::from_columns(right);
    let w = ComplexMatrix::from_columns(&left.basis);
    let overlap = w.adjoint() * &r;
    let inv = overlap
        .try_inverse()
        .ok_or_else(|| "kernel overlap matrix is singular".to_string())?;
    let projector_tail = inv * w.adjoint();

    let mut probes = Vec::with_capacity(n);
    for i in 0..d {
        let mut psi = ComplexVector::zeros(d);
        psi[i] = c(1.0, 0.0);
        probes.push(psi);
        for j in (i + 1)..d {
            for phase in [c(1.0, 0.0), c(0.0, 1.0)] {
                let mut psi = ComplexVector::zeros(d);
                psi[i] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                psi[j] = phase * std::f64::consts::FRAC_1_SQRT_2;
                probes.push(psi);
            }
        }
    }

    let mut states = Vec::with_capacity(m);
    let mut orthonormal: Vec<ComplexVector> = Vec::with_capacity(m);
    for psi in probes {
        if states.len() == m {
            break;
        }
        let pure = &psi * psi.adjoint();
        let image = &r * (&projector_tail * vec(&pure));
        let mut residual = image.clone();
        for q in &orthonormal {
            let overlap = q.dotc(&residual);
            residual -= q * overlap;
        }
        if residual.norm() > 1e-6 * image.norm().max(1e-300) {
            let q = residual.unscale(residual.norm());
            orthonormal.push(q);
            let rho = operator::hermitian_part(&unvec(&image, d).map_err(|e| e.to_string())?);
            let rho = rho.unscale(rho.trace().re);
            check_state(&rho)?;
            states.push(rho);
        }
    }
    if states.len() < m {
        return Err(format!("only {} independent states found for a {m}-dimensional kernel", states.len()));
    }
    Ok(states)
}

fn check_state(rho: &ComplexMatrix) -> std::result::Result<(), String> {
    let herm = operator::hermitian_residual(rho);
    let trace = (rho.trace() - c(1.0, 0.0)).norm();
    let min_eig = hermitian_eigen(rho)
        .map_err(|e| e.to_string())?
        .eigenvalues[0];
    if herm > 1e-9 || trace > 1e-9 || min_eig < -1e-8 {
        return Err(format!(
            "extracted state violates physicality (hermiticity {herm:e}, trace {trace:e}, min eigenvalue {min_eig:e})"
        ));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    /// Sorted by real part, descending.
    pub eigenvalues: Vec<C64>,
    /// Eigenvalues with `|Re| ≤ threshold`.
    pub near_kernel: usize,
    /// Eigenvalues with `|Re| ≤ threshold` and `|Im| > threshold`.
    pub pure_imaginary: usize,
    pub gap: Option<f64>,
    pub max_real: f64,
    pub threshold: f64,
}

pub fn spectrum_report(model: &LgksModel, tol: f64) -> Result<SpectrumReport> {
    spectrum_report_with_cap(model, tol, DEFAULT_MAX_DIM)
}

pub fn spectrum_report_with_cap(model: &LgksModel, tol: f64, cap: usize) -> Result<SpectrumReport> {
    let liou = build_liouvillian_with_cap(model, cap)?;
    let mut eigs = operator::eigenvalues(&liou.matrix)?;
    eigs.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    let threshold = zero_threshold(&eigs, tol);
    let near_kernel = eigs.iter().filter(|z| z.re.abs() <= threshold).count();
    let pure_imaginary = eigs
        .iter()
        .filter(|z| z.re.abs() <= threshold && z.im.abs() > threshold)
        .count();
    let max_real = eigs.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(SpectrumReport {
        gap: spectral_gap(&eigs, tol),
        eigenvalues: eigs,
        near_kernel,
        pure_imaginary,
        max_real,
        threshold,
    })
}

/// Validates a density matrix: Hermitian, unit trace, PSD within 1e-9.
pub fn check_density_matrix(rho: &ComplexMatrix, d: usize) -> Result<()> {
    if rho.shape() != (d, d) {
        return Err(SuperopError::InvalidState(format!(
            "expected {d}x{d}, got {}x{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let herm = operator::hermitian_residual(rho);
    if herm > 1e-9 {
        return Err(SuperopError::InvalidState(format!("not Hermitian ({herm:e})")));
    }
    let trace = (rho.trace() - c(1.0, 0.0)).norm();
    if trace > 1e-9 {
        return Err(SuperopError::InvalidState(format!("trace differs from 1 by {trace:e}")));
    }
    let min_eig = hermitian_eigen(&operator::hermitian_part(rho))?.eigenvalues[0];
    if min_eig < -1e-9 {
        return Err(SuperopError::InvalidState(format!(
            "negative eigenvalue {min_eig:e}"
        )));
    }
    Ok(())
}

/// `ρ(t) = exp(tL) ρ₀` through a cached Liouvillian.
#[derive(Debug, Clone)]
pub struct Propagator {
    liouvillian: LiouvillianMatrix,
}

impl Propagator {
    pub fn new(model: &LgksModel) -> Result<Self> {
        Ok(Self {
            liouvillian: build_liouvillian(model)?,
        })
    }

    pub fn with_cap(model: &LgksModel, cap: usize) -> Result<Self> {
        Ok(Self {
            liouvillian: build_liouvillian_with_cap(model, cap)?,
        })
    }

    pub fn liouvillian(&self) -> &LiouvillianMatrix {
        &self.liouvillian
    }

    pub fn evolve(&self, rho0: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
        check_density_matrix(rho0, self.liouvillian.dim)?;
        if t < 0.0 || t.is_nan() {
            return Err(SuperopError::NegativeTime(t));
        }
        if t == 0.0 {
            return Ok(rho0.clone());
        }
        let step = expm(&(&self.liouvillian.matrix * c(t, 0.0)))?;
        Ok(unvec(&(step * vec(rho0)), self.liouvillian.dim)?)
    }
}

pub fn evolve(model: &LgksModel, rho0: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    Propagator::new(model)?.evolve(rho0, t)
}

#[derive(Debug, Clone)]
pub enum RelaxationProbe {
    /// The oracle found more than one (or no) stationary state.
    NotApplicable { multiplicity: usize },
    Table(RelaxationTable),
}

#[derive(Debug, Clone)]
pub struct RelaxationTable {
    pub times: Vec<f64>,
    /// `distances[sample][time]` in trace norm.
    pub distances: Vec<Vec<f64>>,
    pub gap: Option<f64>,
    /// Every sample's distance is non-increasing over the second half of the
    /// grid and ends no larger than it started.
    pub decay_consistent: bool,
    pub seed: u64,
}

impl RelaxationTable {
    pub fn max_distance_at(&self, time_index: usize) -> f64 {
        self.distances
            .iter()
            .map(|row| row[time_index])
            .fold(0.0, f64::max)
    }
}

/// Trace-norm distance to the steady state from `n_samples` random states.
/// Sample `k` draws from a generator seeded with `seed + k`, so the table
/// does not depend on evaluation order.
pub fn relaxation_probe(
    model: &LgksModel,
    n_samples: usize,
    t_grid: &[f64],
    seed: u64,
    tol: f64,
) -> Result<RelaxationProbe> {
    if let Some(&t) = t_grid.iter().find(|&&t| t < 0.0 || t.is_nan()) {
        return Err(SuperopError::NegativeTime(t));
    }
    let steady = steady_states(model, tol)?;
    if steady.multiplicity != 1 || steady.states.len() != 1 {
        return Ok(RelaxationProbe::NotApplicable {
            multiplicity: steady.multiplicity,
        });
    }
    let rho_ss = &steady.states[0];
    let prop = Propagator::new(model)?;
    let d = model.dim();
    let steps: Vec<ComplexMatrix> = t_grid
        .iter()
        .map(|&t| expm(&(&prop.liouvillian.matrix * c(t, 0.0))))
        .collect::<std::result::Result<_, _>>()?;
    let distances: Vec<Vec<f64>> = (0..n_samples)
        .into_par_iter()
        .map(|k| -> Result<Vec<f64>> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let rho0 = random::density_matrix(&mut rng, d);
            let v0 = vec(&rho0);
            steps
                .iter()
                .map(|step| {
                    let rho = unvec(&(step * &v0), d)?;
                    Ok(operator::trace_norm(&(rho - rho_ss))?)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let half = t_grid.len() / 2;
    let decay_consistent = distances.iter().all(|row| {
        let tail_monotone = row[half..].windows(2).all(|w| w[1] <= w[0] + 1e-12);
        let ends_lower = match (row.first(), row.last()) {
            (Some(a), Some(b)) => *b <= *a + 1e-12,
            _ => true,
        };
        tail_monotone && ends_lower
    });
    Ok(RelaxationProbe::Table(RelaxationTable {
        times: t_grid.to_vec(),
        distances,
        gap: steady.gap,
        decay_consistent,
        seed,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;
    use crate::operator::{matrix_unit, pauli::*, real_diagonal, zeros};

    fn half_sz() -> ComplexMatrix {
        sigma_z().scale(0.5)
    }

    #[test]
    fn decay_of_excited_population() {
        let m = two_level_t0(1.0, zeros(2)).unwrap();
        let l = build_liouvillian(&m).unwrap();
        let out = l.apply(&matrix_unit(1, 1, 2).unwrap()).unwrap();
        let expected = real_diagonal(&[-1.0, 1.0]);
        assert!((out - expected).norm() < 1e-15);
    }

    #[test]
    fn matrix_matches_direct_evaluation() {
        let m = two_level_finite_t(0.7, 0.4, sigma_x().scale(0.3) + half_sz()).unwrap();
        let l = build_liouvillian(&m).unwrap();
        let rho = from_seed(3);
        let direct = lindblad_rhs(&m, &rho).unwrap();
        assert!((l.apply(&rho).unwrap() - &direct).norm() <= 1e-12 * direct.norm().max(1.0));
        let la = build_adjoint_liouvillian(&m).unwrap();
        let direct = adjoint_lindblad_rhs(&m, &rho).unwrap();
        assert!((la.apply(&rho).unwrap() - &direct).norm() <= 1e-12 * direct.norm().max(1.0));
    }

    fn from_seed(seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random::density_matrix(&mut rng, 2)
    }

    #[test]
    fn adjoint_examples() {
        let m = two_level_t0(1.0, zeros(2)).unwrap();
        let la = build_adjoint_liouvillian(&m).unwrap();
        assert!(la.apply(&identity(2)).unwrap().norm() < 1e-15);
        let n = sigma_plus() * sigma_minus();
        let out = la.apply(&n).unwrap();
        assert!((out + &n).norm() < 1e-15);
    }

    #[test]
    fn steady_state_examples() {
        let ss = steady_states(&two_level_t0(1.0, half_sz()).unwrap(), 1e-9).unwrap();
        assert_eq!(ss.multiplicity, 1);
        assert!((&ss.states[0] - real_diagonal(&[0.0, 1.0])).norm() < 1e-12);
        assert!((ss.gap.unwrap() - 0.5).abs() < 1e-12);

        let ss = steady_states(&two_level_finite_t(1.0, 1.0, half_sz()).unwrap(), 1e-9).unwrap();
        assert_eq!(ss.multiplicity, 1);
        assert!((&ss.states[0] - real_diagonal(&[1.0 / 3.0, 2.0 / 3.0])).norm() < 1e-12);

        let ss = steady_states(&dephasing_two_level(1.0, half_sz()).unwrap(), 1e-9).unwrap();
        assert_eq!(ss.multiplicity, 2);
        assert_eq!(ss.extraction, Extraction::Ok);
        assert_eq!(ss.states.len(), 2);
        for rho in &ss.states {
            assert!(rho[(0, 1)].norm() < 1e-12);
        }
        assert_eq!(ss.kernel_basis.len(), 2);
        for k in &ss.kernel_basis {
            assert!(operator::hermitian_residual(k) < 1e-12);
        }
    }

    #[test]
    fn two_level_spectrum() {
        let s = spectrum_report(&two_level_t0(1.0, half_sz().scale(2.0)).unwrap(), 1e-9).unwrap();
        // σz/2 with ω = 1.
        let s_half = spectrum_report(&two_level_t0(1.0, half_sz()).unwrap(), 1e-9).unwrap();
        let expected = [c(0.0, 0.0), c(-0.5, 1.0), c(-0.5, -1.0), c(-1.0, 0.0)];
        for z in expected {
            assert!(s_half.eigenvalues.iter().any(|w| (w - z).norm() < 1e-9), "{z}");
        }
        assert_eq!(s_half.near_kernel, 1);
        assert_eq!(s_half.pure_imaginary, 0);
        assert!(s_half.max_real <= 1e-10);
        assert!((s_half.gap.unwrap() - 0.5).abs() < 1e-12);
        assert!(s.eigenvalues.iter().any(|w| (w - c(-0.5, 2.0)).norm() < 1e-9));
    }

    #[test]
    fn evolution_examples() {
        let m = two_level_t0(1.0, zeros(2)).unwrap();
        let excited = matrix_unit(1, 1, 2).unwrap();
        assert_eq!(evolve(&m, &excited, 0.0).unwrap(), excited);
        for t in [0.5, 1.0, 3.0] {
            let rho = evolve(&m, &excited, t).unwrap();
            assert!((rho[(0, 0)].re - (-t).exp()).abs() < 1e-12);
        }
        assert!(matches!(evolve(&m, &excited, -1.0), Err(SuperopError::NegativeTime(_))));
        assert!(matches!(
            evolve(&m, &sigma_x(), 1.0),
            Err(SuperopError::InvalidState(_))
        ));
    }

    #[test]
    fn relaxation_probe_examples() {
        let m = two_level_t0(1.0, half_sz()).unwrap();
        let grid = [0.0, 2.0, 5.0, 10.0];
        match relaxation_probe(&m, 20, &grid, 0, 1e-9).unwrap() {
            RelaxationProbe::Table(t) => {
                // Coherences decay at γ/2 and start at most 1/2, so the
                // trace distance is bounded by 2·½·e^{−5} plus e^{−10} terms.
                assert!(t.max_distance_at(3) <= (-5.0f64).exp() * 1.001);
                assert!(t.max_distance_at(0) <= 2.0);
                assert!(t.decay_consistent);
            }
            other => panic!("{other:?}"),
        }
        let deph = dephasing_two_level(1.0, half_sz()).unwrap();
        assert!(matches!(
            relaxation_probe(&deph, 5, &grid, 0, 1e-9).unwrap(),
            RelaxationProbe::NotApplicable { multiplicity: 2 }
        ));
    }

    #[test]
    fn relaxation_probe_is_order_independent() {
        let m = two_level_finite_t(1.0, 0.5, half_sz()).unwrap();
        let grid = [0.0, 1.0, 4.0];
        let a = relaxation_probe(&m, 8, &grid, 7, 1e-9).unwrap();
        let b = relaxation_probe(&m, 8, &grid, 7, 1e-9).unwrap();
        match (a, b) {
            (RelaxationProbe::Table(a), RelaxationProbe::Table(b)) => {
                assert_eq!(a.distances, b.distances)
            }
            _ => panic!("expected tables"),
        }
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let big = LgksModel::from_parts(zeros(65), vec![], None);
        assert!(matches!(build_liouvillian(&big), Err(SuperopError::DimensionCap { .. })));
    }
}
