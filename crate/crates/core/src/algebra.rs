//! Numerical checks of the ladder-pair commutant results and of the block
//! bookkeeping used to extend them to tensor products.

use thiserror::Error;

use crate::criteria::{commutant, CriteriaError};
use crate::model::{embed_local, CompositeLayout};
use crate::operator::{dagger, ensure_square, kron, matrix_unit, ComplexMatrix, C64};

/// Entries smaller than this multiple of `f64::EPSILON`, relative to the
/// largest entry, are treated as zero.
pub const ENTRY_GUARD: f64 = 1e3 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("a ladder on dimension d needs d-1 >= 1 entries")]
    EmptySpec,
    #[error("subdiagonal entry {index} is not finite")]
    NonFinite { index: usize },
    #[error("subdiagonal entry {index} is zero")]
    ZeroEntry { index: usize },
    #[error("subdiagonal entry {index} is numerically zero (ratio {ratio:.3e} to the largest)")]
    NumericallyZero { index: usize, ratio: f64 },
    #[error("side {side} is not a multiple of {head}")]
    NotDivisible { side: usize, head: usize },
    #[error("need at least one factor")]
    NoFactors,
    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;

/// First-subdiagonal entries of a lowering ladder on `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderSpec {
    subdiagonal: Vec<C64>,
}

impl LadderSpec {
    pub fn new(subdiagonal: Vec<C64>) -> Result<Self> {
        if subdiagonal.is_empty() {
            return Err(AlgebraError::EmptySpec);
        }
        let mut largest = 0.0f64;
        for (index, z) in subdiagonal.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(AlgebraError::NonFinite { index });
            }
            if z.norm() == 0.0 {
                return Err(AlgebraError::ZeroEntry { index });
            }
            largest = largest.max(z.norm());
        }
        for (index, z) in subdiagonal.iter().enumerate() {
            let ratio = z.norm() / largest;
            if ratio < ENTRY_GUARD {
                return Err(AlgebraError::NumericallyZero { index, ratio });
            }
        }
        Ok(Self { subdiagonal })
    }

    pub fn dim(&self) -> usize {
        self.subdiagonal.len() + 1
    }

    pub fn subdiagonal(&self) -> &[C64] {
        &self.subdiagonal
    }
}

/// `Σ_k b_k E_{k+1,k}`.
pub fn build_ladder(spec: &LadderSpec) -> ComplexMatrix {
    let d = spec.dim();
    let mut m = ComplexMatrix::zeros(d, d);
    for (k, b) in spec.subdiagonal.iter().enumerate() {
        m[(k + 1, k)] = *b;
    }
    m
}

/// Result of a commutant-triviality oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    pub holds: bool,
    pub commutant_dimension: usize,
    /// A singular value near the kernel cut, or a failure that can only be
    /// a tolerance defect.
    pub borderline: bool,
    pub smallest_retained: Option<f64>,
    pub largest_discarded: Option<f64>,
}

impl OracleOutcome {
    /// Message for a failure the proof excludes.
    pub fn defect(&self) -> Option<String> {
        (!self.holds).then(|| {
            format!(
                "commutant dimension {} where 1 is guaranteed; tolerance defect",
                self.commutant_dimension
            )
        })
    }
}

fn pair_oracle(ops: &[ComplexMatrix], tol: f64) -> Result<OracleOutcome> {
    let mut all = Vec::with_capacity(2 * ops.len());
    for b in ops {
        all.push(b.clone());
        all.push(dagger(b).map_err(CriteriaError::from)?);
    }
    let res = commutant(&all, tol)?;
    Ok(OracleOutcome {
        holds: res.dimension == 1,
        commutant_dimension: res.dimension,
        borderline: res.borderline || res.dimension != 1,
        smallest_retained: res.smallest_retained,
        largest_discarded: res.largest_discarded,
    })
}

/// Commutant of `{B, B†}` for a single ladder.
pub fn prop1_oracle(spec: &LadderSpec, tol: f64) -> Result<OracleOutcome> {
    pair_oracle(&[build_ladder(spec)], tol)
}

/// Commutant of all embedded ladders `1 ⊗ … ⊗ B_j ⊗ … ⊗ 1` and their
/// adjoints.
pub fn prop2_oracle(specs: &[LadderSpec], tol: f64, cap: usize) -> Result<OracleOutcome> {
    if specs.is_empty() {
        return Err(AlgebraError::NoFactors);
    }
    if specs.len() == 1 {
        return prop1_oracle(&specs[0], tol);
    }
    let dims: Vec<usize> = specs.iter().map(LadderSpec::dim).collect();
    let dim = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
    match dim {
        Some(dim) if dim <= cap => {}
        _ => {
            return Err(AlgebraError::DimensionCap {
                dim: dim.unwrap_or(usize::MAX),
                cap,
            })
        }
    }
    let layout = CompositeLayout::new(dims).map_err(CriteriaError::from)?;
    let ops = specs
        .iter()
        .enumerate()
        .map(|(j, s)| embed_local(&build_ladder(s), j + 1, &layout))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(CriteriaError::from)?;
    pair_oracle(&ops, tol)
}

/// `X = Σ_{i,j} E_{ij} ⊗ X_{ij}` with `E_{ij}` on the leading factor.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockGrid {
    pub head: usize,
    pub rest: usize,
    /// `blocks[i][j]` is `X_{ij}`, 0-based.
    pub blocks: Vec<Vec<ComplexMatrix>>,
}

impl BlockGrid {
    pub fn reassemble(&self) -> ComplexMatrix {
        let n = self.head * self.rest;
        let mut x = ComplexMatrix::zeros(n, n);
        for i in 0..self.head {
            for j in 0..self.head {
                let e = matrix_unit(i + 1, j + 1, self.head).expect("indices in range");
                x += kron(&e, &self.blocks[i][j]);
            }
        }
        x
    }
}

/// `(X_{ij})_{lm} = X[i·rest + l, j·rest + m]`.
pub fn block_decompose(x: &ComplexMatrix, head: usize) -> Result<BlockGrid> {
    let side = ensure_square(x).map_err(CriteriaError::from)?;
    if head == 0 || side % head != 0 {
        return Err(AlgebraError::NotDivisible { side, head });
    }
    let rest = side / head;
    let blocks = (0..head)
        .map(|i| {
            (0..head)
                .map(|j| x.view((i * rest, j * rest), (rest, rest)).into_owned())
                .collect()
        })
        .collect();
    Ok(BlockGrid { head, rest, blocks })
}
