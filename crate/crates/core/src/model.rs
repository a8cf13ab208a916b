//! LGKS model records and the model zoo.
//!
//! A model is a Hamiltonian plus a list of `(rate, Lindblad operator)`
//! channels, optionally tagged with the tensor-factor layout of a composite
//! Hilbert space. Basis conventions follow the computational basis
//! `|1⟩ … |d⟩`: for the spin-1/2 models `|1⟩` is the excited state and
//! `σ⁻ = |2⟩⟨1|`, spin bases are ordered by descending `m`, Fock bases by
//! ascending `n`.

use std::fmt;

use thiserror::Error;

use crate::operator::{
    self, c, identity, kron, pauli, real_diagonal, ComplexMatrix, LinalgError,
};

/// Largest Hilbert dimension a lattice constructor will produce by default.
pub const DEFAULT_LATTICE_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid model: {0}")]
    Invalid(ValidationReport),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub rate: f64,
    pub operator: ComplexMatrix,
}

impl Channel {
    pub fn new(rate: f64, operator: ComplexMatrix) -> Self {
        Self { rate, operator }
    }
}

/// Factor dimensions `[d₁ … d_N]` of a tensor-product Hilbert space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeLayout {
    factor_dims: Vec<usize>,
}

impl CompositeLayout {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self, ModelError> {
        if factor_dims.is_empty() {
            return Err(ModelError::Parameter("layout needs at least one factor".into()));
        }
        if let Some(bad) = factor_dims.iter().find(|&&d| d < 2) {
            return Err(ModelError::Parameter(format!(
                "layout factor dimension {bad} is below 2"
            )));
        }
        Ok(Self { factor_dims })
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn sites(&self) -> usize {
        self.factor_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    /// Product of the factor dimensions before and after `site` (0-based).
    pub(crate) fn split(&self, site: usize) -> (usize, usize) {
        let left = self.factor_dims[..site].iter().product();
        let right = self.factor_dims[site + 1..].iter().product();
        (left, right)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    HamiltonianNotSquare { rows: usize, cols: usize },
    NonHermitianHamiltonian { residual: f64 },
    NonPositiveRate { channel: usize, rate: f64 },
    ChannelShape { channel: usize, rows: usize, cols: usize },
    NonFinite { location: String },
    LayoutMismatch { product: usize, dim: usize },
    LayoutFactor { factor: usize, dim: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::HamiltonianNotSquare { rows, cols } => {
                write!(f, "hamiltonian is {rows}x{cols}, not square")
            }
            Violation::NonHermitianHamiltonian { residual } => {
                write!(f, "hamiltonian not Hermitian, residual {residual:e}")
            }
            Violation::NonPositiveRate { channel, rate } => {
                write!(f, "non-positive rate, channel {channel} (rate {rate})")
            }
            Violation::ChannelShape {
                channel,
                rows,
                cols,
            } => write!(f, "channel {channel} operator is {rows}x{cols}, wrong shape"),
            Violation::NonFinite { location } => write!(f, "non-finite entries in {location}"),
            Violation::LayoutMismatch { product, dim } => {
                write!(f, "layout product {product} differs from dimension {dim}")
            }
            Violation::LayoutFactor { factor, dim } => {
                write!(f, "layout factor {factor} has dimension {dim} < 2")
            }
        }
    }
}

/// Every violated model invariant, with measured residuals. Channel and
/// factor numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Hamiltonian, decay channels and optional composite layout.
#[derive(Debug, Clone, PartialEq)]
pub struct LgksModel {
    hamiltonian: ComplexMatrix,
    channels: Vec<Channel>,
    layout: Option<Vec<usize>>,
}

impl LgksModel {
    /// Validated constructor.
    pub fn new(
        hamiltonian: ComplexMatrix,
        channels: Vec<Channel>,
        layout: Option<CompositeLayout>,
    ) -> Result<Self, ModelError> {
        let model = Self::from_parts(hamiltonian, channels, layout.map(|l| l.factor_dims));
        model.ensure_valid()?;
        Ok(model)
    }

    /// Assemble without checking; pair with [`LgksModel::validate`].
    pub fn from_parts(
        hamiltonian: ComplexMatrix,
        channels: Vec<Channel>,
        layout: Option<Vec<usize>>,
    ) -> Self {
        Self {
            hamiltonian,
            channels,
            layout,
        }
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn layout(&self) -> Option<CompositeLayout> {
        self.layout.as_ref().map(|dims| CompositeLayout {
            factor_dims: dims.clone(),
        })
    }

    pub fn operators(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.channels.iter().map(|ch| &ch.operator)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let h = &self.hamiltonian;
        let d = h.nrows();
        if !h.is_square() {
            violations.push(Violation::HamiltonianNotSquare {
                rows: h.nrows(),
                cols: h.ncols(),
            });
        } else if !operator::is_finite(h) {
            violations.push(Violation::NonFinite {
                location: "hamiltonian".into(),
            });
        } else {
            let residual = operator::hermitian_residual(h);
            if residual > 1e-10 * h.norm().max(1.0) {
                violations.push(Violation::NonHermitianHamiltonian { residual });
            }
        }
        for (k, ch) in self.channels.iter().enumerate() {
            let channel = k + 1;
            if !(ch.rate > 0.0 && ch.rate.is_finite()) {
                violations.push(Violation::NonPositiveRate {
                    channel,
                    rate: ch.rate,
                });
            }
            if ch.operator.shape() != (d, d) {
                violations.push(Violation::ChannelShape {
                    channel,
                    rows: ch.operator.nrows(),
                    cols: ch.operator.ncols(),
                });
            } else if !operator::is_finite(&ch.operator) {
                violations.push(Violation::NonFinite {
                    location: format!("channel {channel}"),
                });
            }
        }
        if let Some(dims) = &self.layout {
            for (k, &f) in dims.iter().enumerate() {
                if f < 2 {
                    violations.push(Violation::LayoutFactor {
                        factor: k + 1,
                        dim: f,
                    });
                }
            }
            let product: usize = dims.iter().product();
            if product != d || dims.is_empty() {
                violations.push(Violation::LayoutMismatch { product, dim: d });
            }
        }
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<(), ModelError> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(ModelError::Invalid(report))
        }
    }

    pub fn with_hamiltonian(&self, hamiltonian: ComplexMatrix) -> Result<Self, ModelError> {
        Self::new(hamiltonian, self.channels.clone(), self.layout())
    }

    /// Copy with channel `index` (0-based) removed.
    pub fn without_channel(&self, index: usize) -> Result<Self, ModelError> {
        if index >= self.channels.len() {
            return Err(ModelError::Parameter(format!(
                "channel index {index} out of range"
            )));
        }
        let mut channels = self.channels.clone();
        channels.remove(index);
        Self::new(self.hamiltonian.clone(), channels, self.layout())
    }

    /// `H → U H U†`, `B_i → U B_i U†`. The layout is kept as metadata.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Result<Self, ModelError> {
        if u.shape() != (self.dim(), self.dim()) || !operator::is_unitary(u, 1e-10) {
            return Err(ModelError::Parameter("conjugation matrix is not unitary".into()));
        }
        let ud = u.adjoint();
        let h = hermitian_clean(&(u * &self.hamiltonian * &ud));
        let channels = self
            .channels
            .iter()
            .map(|ch| Channel::new(ch.rate, u * &ch.operator * &ud))
            .collect();
        Ok(Self::from_parts(h, channels, self.layout.clone()))
    }
}

fn hermitian_clean(h: &ComplexMatrix) -> ComplexMatrix {
    operator::hermitian_part(h)
}

fn check_rate(name: &str, rate: f64) -> Result<(), ModelError> {
    if rate > 0.0 && rate.is_finite() {
        Ok(())
    } else {
        Err(ModelError::Parameter(format!("{name} must be positive, got {rate}")))
    }
}

fn check_two_level_hamiltonian(h: &ComplexMatrix) -> Result<(), ModelError> {
    if h.shape() != (2, 2) {
        return Err(ModelError::Parameter("two-level Hamiltonian must be 2x2".into()));
    }
    Ok(())
}

/// Spontaneous emission at zero temperature: one channel `(γ, σ⁻)`.
pub fn two_level_t0(gamma: f64, hamiltonian: ComplexMatrix) -> Result<LgksModel, ModelError> {
    check_rate("gamma", gamma)?;
    check_two_level_hamiltonian(&hamiltonian)?;
    LgksModel::new(hamiltonian, vec![Channel::new(gamma, pauli::sigma_minus())], None)
}

/// Thermal bath with mean occupation `nbar`: `(γ(1+n̄), σ⁻)` and `(γn̄, σ⁺)`.
/// The absorption channel is dropped when `nbar == 0`.
pub fn two_level_finite_t(
    gamma: f64,
    nbar: f64,
    hamiltonian: ComplexMatrix,
) -> Result<LgksModel, ModelError> {
    check_rate("gamma", gamma)?;
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(ModelError::Parameter(format!(
            "mean occupation must be non-negative, got {nbar}"
        )));
    }
    check_two_level_hamiltonian(&hamiltonian)?;
    let mut channels = vec![Channel::new(gamma * (1.0 + nbar), pauli::sigma_minus())];
    if nbar > 0.0 {
        channels.push(Channel::new(gamma * nbar, pauli::sigma_plus()));
    }
    LgksModel::new(hamiltonian, channels, None)
}

/// Pure dephasing: one channel `(γ, σ_z)`.
pub fn dephasing_two_level(
    gamma: f64,
    hamiltonian: ComplexMatrix,
) -> Result<LgksModel, ModelError> {
    check_rate("gamma", gamma)?;
    check_two_level_hamiltonian(&hamiltonian)?;
    LgksModel::new(hamiltonian, vec![Channel::new(gamma, pauli::sigma_z())], None)
}

/// Default N-level Hamiltonian `diag(1, 2, …, d)`.
pub fn n_level_default_hamiltonian(d: usize) -> ComplexMatrix {
    let energies: Vec<f64> = (1..=d).map(|k| k as f64).collect();
    real_diagonal(&energies)
}

/// Ladder of `d` levels exchanging quanta with a bath: emission channels
/// `(down_i, |i⟩⟨i+1|)` followed by absorption channels `(up_i, |i+1⟩⟨i|)`.
/// Zero absorption rates drop the channel.
pub fn n_level_atom(d: usize, down_rates: &[f64], up_rates: &[f64]) -> Result<LgksModel, ModelError> {
    n_level_atom_with_hamiltonian(d, down_rates, up_rates, n_level_default_hamiltonian(d))
}

pub fn n_level_atom_with_hamiltonian(
    d: usize,
    down_rates: &[f64],
    up_rates: &[f64],
    hamiltonian: ComplexMatrix,
) -> Result<LgksModel, ModelError> {
    if d < 2 {
        return Err(ModelError::Parameter(format!("need at least 2 levels, got {d}")));
    }
    if down_rates.len() != d - 1 || up_rates.len() != d - 1 {
        return Err(ModelError::Parameter(format!(
            "expected {} down and up rates, got {} and {}",
            d - 1,
            down_rates.len(),
            up_rates.len()
        )));
    }
    let mut channels = Vec::new();
    for (i, &rate) in down_rates.iter().enumerate() {
        check_rate("down rate", rate)?;
        channels.push(Channel::new(rate, operator::matrix_unit(i + 1, i + 2, d)?));
    }
    for (i, &rate) in up_rates.iter().enumerate() {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(ModelError::Parameter(format!(
                "up rate must be non-negative, got {rate}"
            )));
        }
        if rate > 0.0 {
            channels.push(Channel::new(rate, operator::matrix_unit(i + 2, i + 1, d)?));
        }
    }
    LgksModel::new(hamiltonian, channels, None)
}

/// Spin lowering operator `S⁻` in the basis `m = S, S−1, …, −S`.
pub fn spin_lowering(spin: f64) -> Result<ComplexMatrix, ModelError> {
    let two_s = 2.0 * spin;
    if !(spin > 0.0 && two_s.fract() == 0.0 && two_s <= 1e6) {
        return Err(ModelError::Parameter(format!(
            "spin must be a positive half-integer, got {spin}"
        )));
    }
    let d = two_s as usize + 1;
    let mut m = operator::zeros(d);
    for k in 0..d - 1 {
        // Column k holds |m⟩ with m = S − k; S⁻|m⟩ lands one row down.
        let mz = spin - k as f64;
        m[(k + 1, k)] = c(((spin + mz) * (spin - mz + 1.0)).sqrt(), 0.0);
    }
    Ok(m)
}

/// Annihilation operator on the Fock space truncated at `n_max` quanta.
pub fn truncated_annihilation(n_max: usize) -> Result<ComplexMatrix, ModelError> {
    if n_max < 1 {
        return Err(ModelError::Parameter("n_max must be at least 1".into()));
    }
    let mut a = operator::zeros(n_max + 1);
    for n in 1..=n_max {
        a[(n - 1, n)] = c((n as f64).sqrt(), 0.0);
    }
    Ok(a)
}

/// `1 ⊗ … ⊗ op ⊗ … ⊗ 1` with `op` at `site` (1-based).
pub fn embed_local(
    op: &ComplexMatrix,
    site: usize,
    layout: &CompositeLayout,
) -> Result<ComplexMatrix, ModelError> {
    if site == 0 || site > layout.sites() {
        return Err(ModelError::Parameter(format!(
            "site {site} out of range 1..={}",
            layout.sites()
        )));
    }
    let local = layout.factor_dims()[site - 1];
    if op.shape() != (local, local) {
        return Err(ModelError::Parameter(format!(
            "operator is {}x{}, site {site} has dimension {local}",
            op.nrows(),
            op.ncols()
        )));
    }
    let (left, right) = layout.split(site - 1);
    Ok(kron(&kron(&identity(left), op), &identity(right)))
}

/// `n_sites` copies of `local`, each with its own bath.
///
/// The Hamiltonian is the sum of embedded local Hamiltonians plus, when
/// `coupling` is given, the open-chain exchange `J Σ_j (B_j† B_{j+1} + h.c.)`
/// built from the local model's first channel operator `B`.
pub fn atom_lattice(
    n_sites: usize,
    local: &LgksModel,
    coupling: Option<f64>,
) -> Result<LgksModel, ModelError> {
    atom_lattice_with_cap(n_sites, local, coupling, DEFAULT_LATTICE_CAP)
}

pub fn atom_lattice_with_cap(
    n_sites: usize,
    local: &LgksModel,
    coupling: Option<f64>,
    cap: usize,
) -> Result<LgksModel, ModelError> {
    local.ensure_valid()?;
    if n_sites == 0 {
        return Err(ModelError::Parameter("lattice needs at least one site".into()));
    }
    let d_local = local.dim();
    let dim = (0..n_sites).try_fold(1usize, |acc, _| acc.checked_mul(d_local));
    let dim = match dim {
        Some(dim) if dim <= cap => dim,
        other => {
            return Err(ModelError::DimensionCap {
                dim: other.unwrap_or(usize::MAX),
                cap,
            })
        }
    };
    let layout = CompositeLayout::new(vec![d_local; n_sites])?;
    let mut h = operator::zeros(dim);
    let mut channels = Vec::new();
    for site in 1..=n_sites {
        h += embed_local(local.hamiltonian(), site, &layout)?;
        for ch in local.channels() {
            channels.push(Channel::new(ch.rate, embed_local(&ch.operator, site, &layout)?));
        }
    }
    if let Some(j) = coupling {
        let b = &local
            .channels()
            .first()
            .ok_or_else(|| ModelError::Parameter("exchange coupling needs a local channel".into()))?
            .operator;
        for site in 1..n_sites {
            let here = embed_local(b, site, &layout)?;
            let next = embed_local(b, site + 1, &layout)?;
            let hop = here.adjoint() * &next;
            h += (&hop + hop.adjoint()).scale(j);
        }
    }
    LgksModel::new(h, channels, Some(layout))
}
