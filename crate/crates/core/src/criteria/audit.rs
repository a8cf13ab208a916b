//! Every criterion plus the oracle, with an agreement check.

use serde::{Deserialize, Serialize};

use crate::model::LgksModel;
use crate::operator::DEFAULT_TOL;
use crate::superop::{self, Extraction, SteadyStateResult};

use super::commutant::{evans_criterion, frigerio_criterion, spohn_span_criterion};
use super::gks::spohn_rank_criterion;
use super::ladder::{
    composite_channels_check, composite_combination_check, ladder_channel_check,
    ladder_combination_check, SearchPolicy,
};
use super::{to_dense_rows, Criterion, CriterionVerdict, DenseRows, Evidence, Result};

/// Stationary states are copied into the report up to this dimension.
const REPORT_STATES_MAX_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditConfig {
    pub tol: f64,
    pub search: SearchPolicy,
    /// Largest dimension handed to the dense oracle.
    pub max_dim: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            search: SearchPolicy::default(),
            max_dim: superop::DEFAULT_MAX_DIM,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub multiplicity: usize,
    pub gap: Option<f64>,
    pub kernel_singular_value: Option<f64>,
    pub smallest_retained_singular_value: Option<f64>,
    pub extraction_ok: bool,
    pub extraction_message: Option<String>,
    /// Empty above the report size limit.
    pub states: Vec<DenseRows>,
}

impl OracleSummary {
    pub fn from_result(r: &SteadyStateResult, dim: usize) -> Self {
        let (extraction_ok, extraction_message) = match &r.extraction {
            Extraction::Ok => (true, None),
            Extraction::Failed(msg) => (false, Some(msg.clone())),
        };
        Self {
            multiplicity: r.multiplicity,
            gap: r.gap,
            kernel_singular_value: r.kernel_singular_value,
            smallest_retained_singular_value: r.smallest_retained_singular_value,
            extraction_ok,
            extraction_message,
            states: if dim <= REPORT_STATES_MAX_DIM {
                r.states.iter().map(to_dense_rows).collect()
            } else {
                Vec::new()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub dim: usize,
    pub channels: usize,
    pub layout: Option<Vec<usize>>,
    pub tol: f64,
    pub seed: u64,
    pub draws: usize,
    /// One verdict per criterion, in [`Criterion::ALL`] order.
    pub verdicts: Vec<CriterionVerdict>,
    pub oracle: Option<OracleSummary>,
    pub oracle_failure: Option<String>,
    /// Checkers that stopped on a numerical error.
    pub failures: Vec<String>,
    /// `None` when there is no oracle answer to compare with.
    pub consistent: Option<bool>,
    pub inconsistencies: Vec<String>,
    /// Set on disagreement or when any decision sat near its threshold.
    pub tolerance_review: bool,
}

impl AuditReport {
    pub fn verdict(&self, criterion: Criterion) -> &CriterionVerdict {
        self.verdicts
            .iter()
            .find(|v| v.criterion == criterion)
            .expect("audit reports carry every criterion")
    }

    pub fn certified_by(&self) -> Vec<Criterion> {
        self.verdicts
            .iter()
            .filter(|v| v.certifies())
            .map(|v| v.criterion)
            .collect()
    }

    pub fn multiplicity(&self) -> Option<usize> {
        self.oracle.as_ref().map(|o| o.multiplicity)
    }
}

/// Runs the oracle and every checker. Only an invalid model is an error;
/// numerical trouble inside a checker or the oracle is recorded in the
/// report.
pub fn audit(model: &LgksModel, config: &AuditConfig) -> Result<AuditReport> {
    model.ensure_valid()?;
    let tol = config.tol;
    let d = model.dim();

    let (steady, oracle_failure) = match superop::steady_states_with_cap(model, tol, config.max_dim)
    {
        Ok(s) => (Some(s), None),
        Err(e) => (None, Some(e.to_string())),
    };

    let layout = model.layout();
    let mut failures = Vec::new();
    let mut verdicts = Vec::with_capacity(Criterion::ALL.len());
    for criterion in Criterion::ALL {
        let run = || -> Result<CriterionVerdict> {
            match criterion {
                Criterion::SpohnRank => spohn_rank_criterion(model, tol),
                Criterion::SpohnSpan => spohn_span_criterion(model, tol),
                Criterion::Frigerio => frigerio_criterion(model, tol, steady.as_ref()),
                Criterion::Evans => evans_criterion(model, tol),
                Criterion::LadderCombination => {
                    ladder_combination_check(model, None, &config.search, tol)
                }
                Criterion::LadderChannel => ladder_channel_check(model, None, tol),
                Criterion::CompositeLadderCombination => match &layout {
                    Some(l) => composite_combination_check(model, l, None, &config.search, tol),
                    None => Ok(no_layout(criterion)),
                },
                Criterion::CompositeLadderChannels => match &layout {
                    Some(l) => composite_channels_check(model, l, tol),
                    None => Ok(no_layout(criterion)),
                },
            }
        };
        match run() {
            Ok(v) => verdicts.push(v),
            Err(e) => {
                failures.push(format!("{criterion}: {e}"));
                verdicts.push(CriterionVerdict::not_applicable(
                    criterion,
                    format!("numerical failure: {e}"),
                ));
            }
        }
    }
    debug_assert!(verdicts.iter().all(|v| v.applicable || !v.passed));

    let multiplicity = steady.as_ref().map(|s| s.multiplicity);
    let mut inconsistencies = Vec::new();
    if let Some(m) = multiplicity {
        for v in &verdicts {
            if m > 1 && v.certifies() {
                inconsistencies.push(format!(
                    "{} passed but the oracle finds multiplicity {m}",
                    v.criterion
                ));
            }
            if m == 1 && v.criterion.is_equivalence() && v.applicable && !v.passed {
                inconsistencies.push(format!(
                    "{} failed but the oracle finds a unique stationary state",
                    v.criterion
                ));
            }
        }
    }
    let borderline = verdicts
        .iter()
        .any(|v| v.evidence.get("borderline") == Some(&Evidence::Flag(true)));
    let consistent = multiplicity.map(|_| inconsistencies.is_empty());
    Ok(AuditReport {
        dim: d,
        channels: model.channels().len(),
        layout: layout.map(|l| l.factor_dims().to_vec()),
        tol,
        seed: config.search.seed,
        draws: config.search.draws,
        verdicts,
        oracle: steady.as_ref().map(|s| OracleSummary::from_result(s, d)),
        oracle_failure,
        failures,
        tolerance_review: borderline || !inconsistencies.is_empty(),
        consistent,
        inconsistencies,
    })
}

fn no_layout(criterion: Criterion) -> CriterionVerdict {
    CriterionVerdict::not_applicable(criterion, "model has no composite layout")
}
