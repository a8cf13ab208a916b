//! Sufficient conditions for a unique stationary state.
//!
//! Each checker returns a [`CriterionVerdict`]. A verdict that is not
//! `applicable` says nothing; an applicable verdict that did not pass is only
//! a refutation for the criteria whose [`Criterion::is_equivalence`] is true.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::ModelError;
use crate::operator::{ComplexMatrix, LinalgError};
use crate::superop::SuperopError;

mod audit;
mod commutant;
mod gks;
mod ladder;

pub use audit::{audit, AuditConfig, AuditReport, OracleSummary};
pub use commutant::{
    bicommutant, commutant, evans_criterion, frigerio_criterion, is_self_adjoint_span,
    spohn_span_criterion, CommutantResult, SpanCheck,
};
pub use gks::{
    build_c_matrix, build_c_matrix_in, gks_decompose, spohn_rank_criterion, CMatrix,
    GksCoefficients,
};
pub use ladder::{
    composite_channels_check, composite_combination_check, is_ladder_form,
    ladder_channel_check, ladder_combination_check, local_support, Combination, LadderForm,
    SearchPolicy,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CriteriaError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Superop(#[from] SuperopError),
    #[error("commutant of an empty operator set")]
    EmptyOperatorSet,
    #[error("layout describes dimension {layout}, model has dimension {model}")]
    LayoutMismatch { layout: usize, model: usize },
    #[error("basis change is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("combination list has {got} entries, layout has {sites} sites")]
    CombinationCount { got: usize, sites: usize },
    #[error("combination has {got} coefficients, model has {channels} channels")]
    CoefficientCount { got: usize, channels: usize },
    #[error("numerical defect: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, CriteriaError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// Rank of the GKS coefficient matrix.
    SpohnRank,
    /// Self-adjoint span with a full bicommutant.
    SpohnSpan,
    /// Self-adjoint span with a trivial commutant.
    Frigerio,
    /// Trivial commutant of the Hamiltonian and all jump operators.
    Evans,
    /// A combination of `H`, `B_i`, `B_i†` with trivial commutant.
    LadderCombination,
    /// A jump operator that is a ladder after a basis change.
    LadderChannel,
    /// One combination per tensor factor, jointly with trivial commutant.
    CompositeLadderCombination,
    /// A local ladder jump operator on every tensor factor.
    CompositeLadderChannels,
}

impl Criterion {
    pub const ALL: [Criterion; 8] = [
        Criterion::SpohnRank,
        Criterion::SpohnSpan,
        Criterion::Frigerio,
        Criterion::Evans,
        Criterion::LadderCombination,
        Criterion::LadderChannel,
        Criterion::CompositeLadderCombination,
        Criterion::CompositeLadderChannels,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::SpohnRank => "spohn-rank",
            Criterion::SpohnSpan => "spohn-span",
            Criterion::Frigerio => "frigerio",
            Criterion::Evans => "evans",
            Criterion::LadderCombination => "ladder-combination",
            Criterion::LadderChannel => "ladder-channel",
            Criterion::CompositeLadderCombination => "composite-ladder-combination",
            Criterion::CompositeLadderChannels => "composite-ladder-channels",
        }
    }

    /// Whether an applicable failure is meant to refute uniqueness.
    ///
    /// Only the commutant test is stated as an equivalence, and that
    /// statement needs care, see [`evans_criterion`].
    pub fn is_equivalence(self) -> bool {
        matches!(self, Criterion::Evans)
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Row-major `[re, im]` pairs.
pub type DenseRows = Vec<Vec<[f64; 2]>>;

pub fn to_dense_rows(m: &ComplexMatrix) -> DenseRows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Evidence {
    Flag(bool),
    Count(u64),
    Number(f64),
    Text(String),
    Numbers(Vec<f64>),
    Matrices(Vec<DenseRows>),
}

impl From<bool> for Evidence {
    fn from(v: bool) -> Self {
        Evidence::Flag(v)
    }
}

impl From<usize> for Evidence {
    fn from(v: usize) -> Self {
        Evidence::Count(v as u64)
    }
}

impl From<f64> for Evidence {
    fn from(v: f64) -> Self {
        Evidence::Number(v)
    }
}

impl From<&str> for Evidence {
    fn from(v: &str) -> Self {
        Evidence::Text(v.to_owned())
    }
}

impl From<String> for Evidence {
    fn from(v: String) -> Self {
        Evidence::Text(v)
    }
}

impl From<Vec<f64>> for Evidence {
    fn from(v: Vec<f64>) -> Self {
        Evidence::Numbers(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub criterion: Criterion,
    pub applicable: bool,
    /// Never true unless `applicable`.
    pub passed: bool,
    pub evidence: BTreeMap<String, Evidence>,
    pub notes: Vec<String>,
}

impl CriterionVerdict {
    pub fn not_applicable(criterion: Criterion, note: impl Into<String>) -> Self {
        Self {
            criterion,
            applicable: false,
            passed: false,
            evidence: BTreeMap::new(),
            notes: vec![note.into()],
        }
    }

    pub fn decided(criterion: Criterion, passed: bool) -> Self {
        Self {
            criterion,
            applicable: true,
            passed,
            evidence: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Evidence>) -> Self {
        self.evidence.insert(key.to_owned(), value.into());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Applicable and passed.
    pub fn certifies(&self) -> bool {
        self.applicable && self.passed
    }

    /// Numeric evidence lookup.
    pub fn count(&self, key: &str) -> Option<u64> {
        match self.evidence.get(key)? {
            Evidence::Count(n) => Some(*n),
            _ => None,
        }
    }

    pub fn flag(&self, key: &str) -> Option<bool> {
        match self.evidence.get(key)? {
            Evidence::Flag(b) => Some(*b),
            _ => None,
        }
    }
}
