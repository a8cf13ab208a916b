//! GKS coefficient matrix and the rank criterion.

use crate::model::LgksModel;
use crate::operator::{
    c, frobenius_inner, hermitian_eigen, identity, traceless_orthonormal_basis, ComplexMatrix,
    C64,
};

use super::{Criterion, CriterionVerdict, CriteriaError, Result};

/// `B = α₀ 1 + Σ_j α_j G_j` over a traceless orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct GksCoefficients {
    pub identity: C64,
    pub traceless: Vec<C64>,
}

impl GksCoefficients {
    pub fn reconstruct(&self, basis: &[ComplexMatrix]) -> ComplexMatrix {
        let d = basis.first().map_or(1, ComplexMatrix::nrows);
        let mut out = identity(d) * self.identity;
        for (a, g) in self.traceless.iter().zip(basis) {
            out += g * *a;
        }
        out
    }
}

fn check_basis(d: usize, basis: &[ComplexMatrix]) -> Result<()> {
    if basis.len() + 1 != d * d || basis.iter().any(|g| g.shape() != (d, d)) {
        return Err(CriteriaError::Numerical(format!(
            "basis of {} elements does not fit dimension {d}",
            basis.len()
        )));
    }
    Ok(())
}

pub fn gks_decompose(b: &ComplexMatrix, basis: &[ComplexMatrix]) -> Result<GksCoefficients> {
    let d = crate::operator::ensure_square(b)?;
    check_basis(d, basis)?;
    Ok(GksCoefficients {
        identity: b.trace() / c(d as f64, 0.0),
        traceless: basis.iter().map(|g| frobenius_inner(g, b)).collect(),
    })
}

/// `c_ij = Σ_k γ_k α_i^(k) conj(α_j^(k))`, positive semidefinite by construction.
#[derive(Debug, Clone)]
pub struct CMatrix {
    pub matrix: ComplexMatrix,
    pub basis: Vec<ComplexMatrix>,
}

impl CMatrix {
    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if self.matrix.nrows() == 0 {
            return Ok(Vec::new());
        }
        Ok(hermitian_eigen(&self.matrix)?.eigenvalues)
    }
}

pub fn build_c_matrix(model: &LgksModel) -> Result<CMatrix> {
    let d = model.dim();
    let basis = if d < 2 {
        Vec::new()
    } else {
        traceless_orthonormal_basis(d)?
    };
    build_c_matrix_in(model, basis)
}

pub fn build_c_matrix_in(model: &LgksModel, basis: Vec<ComplexMatrix>) -> Result<CMatrix> {
    let d = model.dim();
    check_basis(d, &basis)?;
    let n = basis.len();
    let mut matrix = ComplexMatrix::zeros(n, n);
    for ch in model.channels() {
        let alpha = gks_decompose(&ch.operator, &basis)?.traceless;
        for i in 0..n {
            for j in 0..n {
                matrix[(i, j)] += alpha[i] * alpha[j].conj() * ch.rate;
            }
        }
    }
    Ok(CMatrix { matrix, basis })
}

/// Passes when the c-matrix has fewer than `d/2` zero eigenvalues.
pub fn spohn_rank_criterion(model: &LgksModel, tol: f64) -> Result<CriterionVerdict> {
    let d = model.dim();
    let cm = build_c_matrix(model)?;
    let eigs = cm.eigenvalues()?;
    let lambda_max = eigs.last().copied().unwrap_or(0.0);
    let threshold = tol * lambda_max.max(0.0);
    let p = if lambda_max <= 0.0 {
        eigs.len()
    } else {
        eigs.iter().filter(|&&l| l <= threshold).count()
    };
    let borderline = threshold > 0.0
        && eigs
            .iter()
            .any(|&l| l.abs() > threshold / 10.0 && l.abs() <= threshold * 10.0);
    let passed = 2 * p < d;
    let mut v = CriterionVerdict::decided(Criterion::SpohnRank, passed)
        .with("zero_eigenvalues", p)
        .with("dimension", d)
        .with("threshold", threshold)
        .with("strictly_positive", p == 0 && !eigs.is_empty())
        .with("borderline", borderline)
        .with("eigenvalues", eigs);
    if borderline {
        v = v.note("an eigenvalue lies within a factor 10 of the zero threshold");
    }
    Ok(v)
}
