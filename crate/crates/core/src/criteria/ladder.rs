//! Ladder-operator criteria for single and composite systems.
//!
//! The combination checks look for operators `M` built from `H`, `B_i` and
//! `B_i†` whose joint commutant with their adjoints is trivial. The channel
//! checks are the structural special case in which a jump operator is
//! itself a ladder.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{CompositeLayout, LgksModel};
use crate::operator::{c, dagger, ensure_square, identity, ComplexMatrix, C64};

use super::commutant::commutant;
use super::{Criterion, CriterionVerdict, CriteriaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderForm {
    /// Nonzero exactly on the first subdiagonal.
    Lower,
    /// Nonzero exactly on the first superdiagonal.
    Upper,
    Neither,
}

impl LadderForm {
    pub fn name(self) -> &'static str {
        match self {
            LadderForm::Lower => "lower",
            LadderForm::Upper => "upper",
            LadderForm::Neither => "neither",
        }
    }
}

/// Entries below `tol·‖M‖_F` count as zero.
pub fn is_ladder_form(m: &ComplexMatrix, tol: f64) -> LadderForm {
    let Ok(d) = ensure_square(m) else {
        return LadderForm::Neither;
    };
    let norm = m.norm();
    if d < 2 || norm == 0.0 {
        return LadderForm::Neither;
    }
    let cut = tol * norm;
    let band = |offset: isize| {
        (0..d).all(|i| {
            (0..d).all(|j| {
                let on = i as isize - j as isize == offset;
                let big = m[(i, j)].norm() > cut;
                on == big
            })
        })
    };
    if band(1) {
        LadderForm::Lower
    } else if band(-1) {
        LadderForm::Upper
    } else {
        LadderForm::Neither
    }
}

/// `h·H + Σ_i (a_i B_i + b_i B_i†)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Combination {
    pub hamiltonian: C64,
    pub direct: Vec<C64>,
    pub adjoint: Vec<C64>,
}

impl Combination {
    /// Just `B_k` (0-based).
    pub fn channel(n_channels: usize, k: usize) -> Self {
        let mut direct = vec![C64::new(0.0, 0.0); n_channels];
        direct[k] = C64::new(1.0, 0.0);
        Self {
            hamiltonian: C64::new(0.0, 0.0),
            direct,
            adjoint: vec![C64::new(0.0, 0.0); n_channels],
        }
    }

    pub fn build(&self, model: &LgksModel) -> Result<ComplexMatrix> {
        let n = model.channels().len();
        for got in [self.direct.len(), self.adjoint.len()] {
            if got != n {
                return Err(CriteriaError::CoefficientCount { got, channels: n });
            }
        }
        let mut m = model.hamiltonian() * self.hamiltonian;
        for ((ch, a), b) in model.channels().iter().zip(&self.direct).zip(&self.adjoint) {
            if *a != C64::new(0.0, 0.0) {
                m += &ch.operator * *a;
            }
            if *b != C64::new(0.0, 0.0) {
                m += dagger(&ch.operator)? * *b;
            }
        }
        Ok(m)
    }

    fn random(rng: &mut ChaCha8Rng, n_channels: usize) -> Self {
        let mut draw = || {
            let r = rng.random::<f64>().sqrt();
            let theta = rng.random::<f64>() * std::f64::consts::TAU;
            C64::from_polar(r, theta)
        };
        let hamiltonian = draw();
        let direct = (0..n_channels).map(|_| draw()).collect();
        let adjoint = (0..n_channels).map(|_| draw()).collect();
        Self {
            hamiltonian,
            direct,
            adjoint,
        }
    }
}

/// Random draws appended to the deterministic candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchPolicy {
    pub draws: usize,
    pub seed: u64,
}

impl Default for SearchPolicy {
    fn default() -> Self {
        Self { draws: 32, seed: 0 }
    }
}

struct Probe {
    dimension: usize,
    borderline: bool,
}

fn probe(ms: &[ComplexMatrix], tol: f64) -> Result<Probe> {
    let mut ops = Vec::with_capacity(2 * ms.len());
    for m in ms {
        ops.push(m.clone());
        ops.push(dagger(m)?);
    }
    let res = commutant(&ops, tol)?;
    Ok(Probe {
        dimension: res.dimension,
        borderline: res.borderline,
    })
}

/// Tries candidates in order until one has a trivial commutant.
fn search<I>(criterion: Criterion, candidates: I, tol: f64) -> Result<CriterionVerdict>
where
    I: IntoIterator<Item = Result<(String, Vec<ComplexMatrix>)>>,
{
    let mut tried = 0usize;
    let mut smallest = usize::MAX;
    let mut borderline = false;
    for cand in candidates {
        let (label, ms) = cand?;
        tried += 1;
        let p = probe(&ms, tol)?;
        borderline |= p.borderline;
        smallest = smallest.min(p.dimension);
        if p.dimension == 1 {
            return Ok(CriterionVerdict::decided(criterion, true)
                .with("witness", label)
                .with("commutant_dimension", 1usize)
                .with("candidates_tried", tried)
                .with("borderline", borderline));
        }
    }
    let mut v = CriterionVerdict::decided(criterion, false)
        .with("candidates_tried", tried)
        .with("borderline", borderline)
        .note("no candidate with a trivial commutant was found; the search is not exhaustive");
    if tried > 0 {
        v = v.with("smallest_commutant_dimension", smallest);
    }
    Ok(v)
}

/// Some combination `M` of `H`, `B_i`, `B_i†` with a trivial commutant of
/// `{M, M†}`.
///
/// With `combo` only that combination is tested. Otherwise the candidates
/// are each `B_i`, then `Σ B_i`, then `search.draws` random combinations
/// with coefficients in the unit disc.
pub fn ladder_combination_check(
    model: &LgksModel,
    combo: Option<&Combination>,
    search_policy: &SearchPolicy,
    tol: f64,
) -> Result<CriterionVerdict> {
    let criterion = Criterion::LadderCombination;
    let n = model.channels().len();
    if let Some(combo) = combo {
        let m = combo.build(model)?;
        return search(criterion, [Ok(("given combination".to_owned(), vec![m]))], tol);
    }
    let singles = (0..n).map(|k| {
        Ok((
            format!("channel {}", k + 1),
            vec![model.channels()[k].operator.clone()],
        ))
    });
    let sum = (n > 1).then(|| {
        let mut s = ComplexMatrix::zeros(model.dim(), model.dim());
        for b in model.operators() {
            s += b;
        }
        Ok(("sum of channels".to_owned(), vec![s]))
    });
    let mut rng = ChaCha8Rng::seed_from_u64(search_policy.seed);
    let draws = (0..search_policy.draws).map(move |r| {
        let m = Combination::random(&mut rng, n).build(model)?;
        Ok((format!("random draw {}", r + 1), vec![m]))
    });
    Ok(search(criterion, singles.chain(sum).chain(draws), tol)?
        .with("seed", search_policy.seed as usize)
        .with("draws", search_policy.draws))
}

fn unitary_residual(u: &ComplexMatrix) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - identity(n)).norm()
}

/// A jump operator that is a ladder in the basis given by the columns of
/// `basis_change` (the computational basis by default).
pub fn ladder_channel_check(
    model: &LgksModel,
    basis_change: Option<&ComplexMatrix>,
    tol: f64,
) -> Result<CriterionVerdict> {
    let d = model.dim();
    if let Some(u) = basis_change {
        if u.shape() != (d, d) {
            return Err(crate::operator::LinalgError::DimensionMismatch {
                left: (d, d),
                right: u.shape(),
            }
            .into());
        }
        let residual = unitary_residual(u);
        if residual > 1e-10 * (d as f64).sqrt() {
            return Err(CriteriaError::NotUnitary { residual });
        }
    }
    for (k, b) in model.operators().enumerate() {
        let b = match basis_change {
            Some(u) => u.adjoint() * b * u,
            None => b.clone(),
        };
        let form = is_ladder_form(&b, tol);
        if form != LadderForm::Neither {
            return Ok(CriterionVerdict::decided(Criterion::LadderChannel, true)
                .with("witness_channel", k + 1)
                .with("form", form.name()));
        }
    }
    Ok(CriterionVerdict::decided(Criterion::LadderChannel, false)
        .note("no jump operator is a ladder in the tested basis"))
}

/// The site (1-based) and local factor of an operator of the form
/// `1 ⊗ … ⊗ b ⊗ … ⊗ 1` with `b` not proportional to the identity.
pub fn local_support(
    op: &ComplexMatrix,
    layout: &CompositeLayout,
    tol: f64,
) -> Option<(usize, ComplexMatrix)> {
    let total = layout.total_dim();
    let norm = op.norm();
    if op.shape() != (total, total) || norm == 0.0 {
        return None;
    }
    for site in 0..layout.sites() {
        let dj = layout.factor_dims()[site];
        let (left, right) = layout.split(site);
        let mut b = ComplexMatrix::zeros(dj, dj);
        for l in 0..left {
            for r in 0..right {
                for a in 0..dj {
                    for a2 in 0..dj {
                        b[(a, a2)] +=
                            op[((l * dj + a) * right + r, (l * dj + a2) * right + r)];
                    }
                }
            }
        }
        b /= c((left * right) as f64, 0.0);
        let scalar = b.trace() / c(dj as f64, 0.0);
        if (&b - identity(dj) * scalar).norm() <= tol * b.norm() {
            continue;
        }
        let Ok(embedded) = crate::model::embed_local(&b, site + 1, layout) else {
            continue;
        };
        if (embedded - op).norm() <= tol * norm {
            return Some((site + 1, b));
        }
    }
    None
}

fn check_layout(model: &LgksModel, layout: &CompositeLayout) -> Result<()> {
    if layout.total_dim() != model.dim() {
        return Err(CriteriaError::LayoutMismatch {
            layout: layout.total_dim(),
            model: model.dim(),
        });
    }
    Ok(())
}

/// Local channels grouped by site: `(channel index, local factor)`.
fn local_channels(
    model: &LgksModel,
    layout: &CompositeLayout,
    tol: f64,
) -> Vec<Vec<(usize, ComplexMatrix)>> {
    let mut by_site = vec![Vec::new(); layout.sites()];
    for (k, b) in model.operators().enumerate() {
        if let Some((site, local)) = local_support(b, layout, tol) {
            by_site[site - 1].push((k, local));
        }
    }
    by_site
}

fn site_list(sites: &[usize]) -> String {
    sites
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn relabel(mut v: CriterionVerdict, criterion: Criterion) -> CriterionVerdict {
    v.criterion = criterion;
    v.note("single-site layout: reduces to the single-system check")
}

/// One combination per tensor factor with a trivial joint commutant of
/// `∪_j {M_j, M_j†}`.
///
/// Without explicit `combos` the strategies are, in order: per site the sum
/// of its local jump operators; per site its first local jump operator;
/// random combinations of all operators, one per site.
pub fn composite_combination_check(
    model: &LgksModel,
    layout: &CompositeLayout,
    combos: Option<&[Combination]>,
    search_policy: &SearchPolicy,
    tol: f64,
) -> Result<CriterionVerdict> {
    check_layout(model, layout)?;
    let criterion = Criterion::CompositeLadderCombination;
    let sites = layout.sites();
    if let Some(cs) = combos {
        if cs.len() != sites {
            return Err(CriteriaError::CombinationCount {
                got: cs.len(),
                sites,
            });
        }
    }
    if sites == 1 {
        let v = ladder_combination_check(model, combos.map(|c| &c[0]), search_policy, tol)?;
        return Ok(relabel(v, criterion));
    }
    if let Some(cs) = combos {
        let ms = cs
            .iter()
            .map(|c| c.build(model))
            .collect::<Result<Vec<_>>>()?;
        return Ok(
            search(criterion, [Ok(("given combinations".to_owned(), ms))], tol)?
                .with("sites", sites),
        );
    }

    let by_site = local_channels(model, layout, tol);
    let missing: Vec<usize> = (0..sites).filter(|&j| by_site[j].is_empty()).collect();
    let mut structured: Vec<Result<(String, Vec<ComplexMatrix>)>> = Vec::new();
    if missing.is_empty() {
        let ops: Vec<&ComplexMatrix> = model.operators().collect();
        let sums = by_site
            .iter()
            .map(|chs| {
                let mut s = ComplexMatrix::zeros(model.dim(), model.dim());
                for (k, _) in chs {
                    s += ops[*k];
                }
                s
            })
            .collect();
        structured.push(Ok(("local sums".to_owned(), sums)));
        if by_site.iter().any(|chs| chs.len() > 1) {
            let firsts = by_site.iter().map(|chs| ops[chs[0].0].clone()).collect();
            structured.push(Ok(("first local channels".to_owned(), firsts)));
        }
    }
    let n = model.channels().len();
    let mut rng = ChaCha8Rng::seed_from_u64(search_policy.seed);
    let draws = (0..search_policy.draws).map(move |r| {
        let ms = (0..sites)
            .map(|_| Combination::random(&mut rng, n).build(model))
            .collect::<Result<Vec<_>>>()?;
        Ok((format!("random draw {}", r + 1), ms))
    });
    let mut v = search(criterion, structured.into_iter().chain(draws), tol)?
        .with("sites", sites)
        .with("seed", search_policy.seed as usize)
        .with("draws", search_policy.draws);
    if !missing.is_empty() {
        let shown: Vec<usize> = missing.iter().map(|j| j + 1).collect();
        v = v.with("sites_without_local_channels", site_list(&shown));
    }
    Ok(v)
}

/// Every tensor factor carries a local jump operator that is a ladder on
/// that factor.
pub fn composite_channels_check(
    model: &LgksModel,
    layout: &CompositeLayout,
    tol: f64,
) -> Result<CriterionVerdict> {
    check_layout(model, layout)?;
    let criterion = Criterion::CompositeLadderChannels;
    if layout.sites() == 1 {
        return Ok(relabel(ladder_channel_check(model, None, tol)?, criterion));
    }
    let by_site = local_channels(model, layout, tol);
    let mut witnesses = Vec::new();
    let mut missing = Vec::new();
    for (j, chs) in by_site.iter().enumerate() {
        let hit = chs.iter().find_map(|(k, local)| {
            let form = is_ladder_form(local, tol);
            (form != LadderForm::Neither).then(|| format!("site {}: channel {} ({})", j + 1, k + 1, form.name()))
        });
        match hit {
            Some(w) => witnesses.push(w),
            None => missing.push(j + 1),
        }
    }
    let mut v = CriterionVerdict::decided(criterion, missing.is_empty())
        .with("sites", layout.sites())
        .with("witnesses", witnesses.join("; "));
    if !missing.is_empty() {
        v = v
            .with("sites_without_ladder", site_list(&missing))
            .note("some factor has no local ladder jump operator");
    }
    Ok(v)
}
