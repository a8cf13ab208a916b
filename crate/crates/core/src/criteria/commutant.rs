//! Commutants and the criteria built on them.

use crate::model::LgksModel;
use crate::operator::{
    dagger, ensure_square, identity, kron, range_basis, stacked_null_space, unvec, vec,
    ComplexMatrix,
};
use crate::superop::{self, SteadyStateResult};

use super::{to_dense_rows, Criterion, CriterionVerdict, CriteriaError, Evidence, Result};

/// Commutant bases are attached to verdicts only up to this dimension.
const EVIDENCE_BASIS_MAX_DIM: usize = 8;

#[derive(Debug, Clone)]
pub struct CommutantResult {
    pub dimension: usize,
    /// Frobenius-orthonormal basis of the commutant.
    pub basis: Vec<ComplexMatrix>,
    pub smallest_retained: Option<f64>,
    pub largest_discarded: Option<f64>,
    pub borderline: bool,
}

impl CommutantResult {
    pub fn is_trivial(&self) -> bool {
        self.dimension == 1
    }
}

/// `{X : [X, A] = 0 for every A in ops}`.
pub fn commutant(ops: &[ComplexMatrix], tol: f64) -> Result<CommutantResult> {
    let first = ops.first().ok_or(CriteriaError::EmptyOperatorSet)?;
    let d = ensure_square(first)?;
    let id = identity(d);
    let mut blocks = Vec::with_capacity(ops.len());
    for a in ops {
        if ensure_square(a)? != d {
            return Err(crate::operator::LinalgError::DimensionMismatch {
                left: first.shape(),
                right: a.shape(),
            }
            .into());
        }
        blocks.push(kron(&a.transpose(), &id) - kron(&id, a));
    }
    // `X ↦ [X, A]` has norm at most `2‖A‖`; that sets the rounding floor.
    let scale = ops.iter().map(|a| 2.0 * a.norm()).fold(0.0, f64::max);
    let ns = stacked_null_space(&blocks, tol, scale)?;
    if ns.nullity == 0 {
        return Err(CriteriaError::Numerical(
            "commutant lost the identity; tolerance too tight".into(),
        ));
    }
    let basis = ns
        .basis
        .iter()
        .map(|v| unvec(v, d))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(CommutantResult {
        dimension: ns.nullity,
        basis,
        smallest_retained: ns.smallest_retained(),
        largest_discarded: ns.largest_discarded(),
        borderline: ns.is_borderline(),
    })
}

pub fn bicommutant(ops: &[ComplexMatrix], tol: f64) -> Result<CommutantResult> {
    let first = commutant(ops, tol)?;
    commutant(&first.basis, tol)
}

#[derive(Debug, Clone)]
pub struct SpanCheck {
    pub self_adjoint: bool,
    /// `‖B_i† − P B_i†‖ / ‖B_i‖` with `P` the projector onto `span{B_j}`.
    pub residuals: Vec<f64>,
}

/// Whether `span{B_i}` is closed under the adjoint.
pub fn is_self_adjoint_span(ops: &[ComplexMatrix], tol: f64) -> Result<SpanCheck> {
    let Some(first) = ops.first() else {
        return Ok(SpanCheck {
            self_adjoint: true,
            residuals: Vec::new(),
        });
    };
    let d = ensure_square(first)?;
    let mut cols = ComplexMatrix::zeros(d * d, ops.len());
    for (j, b) in ops.iter().enumerate() {
        if b.shape() != (d, d) {
            return Err(crate::operator::LinalgError::DimensionMismatch {
                left: first.shape(),
                right: b.shape(),
            }
            .into());
        }
        cols.set_column(j, &vec(b));
    }
    let q = range_basis(&cols, tol)?;
    let mut residuals = Vec::with_capacity(ops.len());
    for b in ops {
        let norm = b.norm();
        if norm == 0.0 {
            residuals.push(0.0);
            continue;
        }
        let target = vec(&dagger(b)?);
        let mut rest = target.clone();
        for qk in &q {
            rest -= qk * qk.dotc(&target);
        }
        residuals.push(rest.norm() / norm);
    }
    let self_adjoint = residuals.iter().all(|&r| r <= tol);
    Ok(SpanCheck {
        self_adjoint,
        residuals,
    })
}

fn channel_operators(model: &LgksModel) -> Vec<ComplexMatrix> {
    model.operators().cloned().collect()
}

fn commutant_evidence(mut v: CriterionVerdict, res: &CommutantResult, d: usize) -> CriterionVerdict {
    v = v
        .with("commutant_dimension", res.dimension)
        .with("borderline", res.borderline);
    if let Some(s) = res.smallest_retained {
        v = v.with("smallest_retained_singular_value", s);
    }
    if let Some(s) = res.largest_discarded {
        v = v.with("largest_discarded_singular_value", s);
    }
    if !res.is_trivial() && d <= EVIDENCE_BASIS_MAX_DIM {
        v = v.with(
            "commutant_basis",
            Evidence::Matrices(res.basis.iter().map(to_dense_rows).collect()),
        );
    }
    if res.borderline {
        v = v.note("a singular value lies within a factor 10 of the kernel threshold");
    }
    v
}

/// Self-adjoint span of the jump operators and a full bicommutant.
pub fn spohn_span_criterion(model: &LgksModel, tol: f64) -> Result<CriterionVerdict> {
    let ops = channel_operators(model);
    if ops.is_empty() {
        return Ok(CriterionVerdict::not_applicable(
            Criterion::SpohnSpan,
            "model has no dissipative channels",
        ));
    }
    let span = is_self_adjoint_span(&ops, tol)?;
    if !span.self_adjoint {
        return Ok(CriterionVerdict::not_applicable(
            Criterion::SpohnSpan,
            "span of the jump operators is not closed under the adjoint",
        )
        .with("adjoint_residuals", span.residuals));
    }
    let d = model.dim();
    let bic = bicommutant(&ops, tol)?;
    let v = CriterionVerdict::decided(Criterion::SpohnSpan, bic.dimension == d * d)
        .with("bicommutant_dimension", bic.dimension)
        .with("full_dimension", d * d)
        .with("adjoint_residuals", span.residuals);
    Ok(if bic.borderline {
        v.with("borderline", true)
            .note("a singular value lies within a factor 10 of the kernel threshold")
    } else {
        v.with("borderline", false)
    })
}

/// Support projector rank of the stationary set, read off the oracle.
fn stationary_support(steady: &SteadyStateResult, tol: f64) -> Result<Option<(usize, f64)>> {
    if steady.states.is_empty() {
        return Ok(None);
    }
    let d = steady.states[0].nrows();
    let mut mixture = ComplexMatrix::zeros(d, d);
    for s in &steady.states {
        mixture += s;
    }
    mixture /= crate::operator::c(steady.states.len() as f64, 0.0);
    let eig = crate::operator::hermitian_eigen(&mixture)?;
    let top = eig.eigenvalues.last().copied().unwrap_or(0.0);
    let min = eig.eigenvalues[0];
    let rank = eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > tol * top)
        .count();
    Ok(Some((rank, min)))
}

/// Self-adjoint span, a faithful stationary state and a trivial commutant
/// of the jump operators.
///
/// `steady` may carry a precomputed oracle result; otherwise the oracle is
/// run here when the dimension allows. Without an oracle answer the
/// faithfulness premise is reported as unchecked.
pub fn frigerio_criterion(
    model: &LgksModel,
    tol: f64,
    steady: Option<&SteadyStateResult>,
) -> Result<CriterionVerdict> {
    let ops = channel_operators(model);
    if ops.is_empty() {
        return Ok(CriterionVerdict::not_applicable(
            Criterion::Frigerio,
            "model has no dissipative channels",
        ));
    }
    let span = is_self_adjoint_span(&ops, tol)?;
    if !span.self_adjoint {
        return Ok(CriterionVerdict::not_applicable(
            Criterion::Frigerio,
            "span of the jump operators is not closed under the adjoint",
        )
        .with("adjoint_residuals", span.residuals));
    }
    let d = model.dim();
    let owned;
    let steady = match steady {
        Some(s) => Some(s),
        None if d <= superop::DEFAULT_MAX_DIM => match superop::steady_states(model, tol) {
            Ok(s) => {
                owned = s;
                Some(&owned)
            }
            Err(_) => None,
        },
        None => None,
    };
    let support = match steady {
        Some(s) => stationary_support(s, tol)?,
        None => None,
    };
    let mut notes = Vec::new();
    let faithful = match support {
        Some((rank, min_eig)) => {
            if rank < d {
                return Ok(CriterionVerdict::not_applicable(
                    Criterion::Frigerio,
                    "no faithful stationary state",
                )
                .with("stationary_support_rank", rank)
                .with("adjoint_residuals", span.residuals));
            }
            Some(min_eig)
        }
        None => {
            notes.push("faithfulness of a stationary state was not checked".to_owned());
            None
        }
    };
    let com = commutant(&ops, tol)?;
    let mut v = CriterionVerdict::decided(Criterion::Frigerio, com.is_trivial())
        .with("adjoint_residuals", span.residuals)
        .with("faithful_checked", faithful.is_some());
    if let Some(m) = faithful {
        v = v.with("stationary_min_eigenvalue", m);
    }
    v = commutant_evidence(v, &com, d);
    v.notes.extend(notes);
    Ok(v)
}

/// Trivial commutant of `{H, B_i, B_i†}`.
///
/// A trivial commutant rules out a nontrivial conserved projection, but it
/// does not by itself force a one-dimensional stationary set: with
/// `B₁ = |1⟩⟨3|`, `B₂ = |2⟩⟨3|` and `H = 0` the commutant is trivial while
/// every state on `span{|1⟩, |2⟩}` is stationary. A passing verdict is
/// therefore reported as the criterion's claim; the audit compares it with
/// the oracle.
pub fn evans_criterion(model: &LgksModel, tol: f64) -> Result<CriterionVerdict> {
    let mut ops = vec![model.hamiltonian().clone()];
    for b in model.operators() {
        ops.push(b.clone());
        ops.push(dagger(b)?);
    }
    let com = commutant(&ops, tol)?;
    let v = CriterionVerdict::decided(Criterion::Evans, com.is_trivial());
    Ok(commutant_evidence(v, &com, model.dim()))
}
