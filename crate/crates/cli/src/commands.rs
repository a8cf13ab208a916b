use lgks_core::criteria::{audit, AuditConfig, SearchPolicy};
use lgks_core::operator::{self, c, hermitian_eigen, identity, ComplexMatrix};
use lgks_core::superop::{self, Extraction, Propagator, SteadyStateResult};
use lgks_core::random;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::args::{Command, Common, Format};
use crate::modelfile::{self, rows, ModelFile};
use crate::report::{
    self, EvolveFile, EvolveRow, ReportFile, SpectrumFile, SpectrumSummary, SteadyFile, TOOL,
};
use crate::{zoo, CliError, Outcome, EXIT_MULTIPLE, EXIT_NUMERICAL, EXIT_UNIQUE};

const VERSION: &str = env!("CARGO_PKG_VERSION");

fn load(common: &Common) -> Result<ModelFile, CliError> {
    if !(common.tol > 0.0 && common.tol < 1.0) {
        return Err(CliError::Input(format!(
            "--tol must lie in (0, 1), got {}",
            common.tol
        )));
    }
    let text = std::fs::read_to_string(&common.path)
        .map_err(|e| CliError::Input(format!("{}: {e}", common.path.display())))?;
    modelfile::parse(&text, common.max_dim)
        .map_err(|e| CliError::Input(format!("{}: {e}", common.path.display())))
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

fn multiplicity_exit(m: usize) -> i32 {
    if m == 1 {
        EXIT_UNIQUE
    } else {
        EXIT_MULTIPLE
    }
}

fn render<T: serde::Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Machine => report::machine(value),
        Format::Text => text(value),
    }
}

pub fn dispatch(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Audit {
            common,
            seed,
            search_draws,
        } => cmd_audit(common, *seed, *search_draws),
        Command::Zoo(z) => {
            let file = zoo::build(z)?;
            Ok(Outcome {
                text: modelfile::emit(&file),
                exit_code: EXIT_UNIQUE,
                warnings: Vec::new(),
            })
        }
        Command::Steady { common } => cmd_steady(common),
        Command::Evolve {
            common,
            times,
            rho0,
            samples,
        } => cmd_evolve(common, times, rho0, *samples),
        Command::Spectrum { common } => cmd_spectrum(common),
    }
}

fn cmd_audit(common: &Common, seed: u64, draws: usize) -> Result<Outcome, CliError> {
    let file = load(common)?;
    let config = AuditConfig {
        tol: common.tol,
        search: SearchPolicy { draws, seed },
        max_dim: common.max_dim,
    };
    let a = audit(&file.model, &config).map_err(numerical)?;
    let (spectrum, spectrum_failure) =
        match superop::spectrum_report_with_cap(&file.model, common.tol, common.max_dim) {
            Ok(s) => (Some(SpectrumSummary::from(&s)), None),
            Err(e) => (None, Some(e.to_string())),
        };
    let exit_code = match (&a.oracle, &a.oracle_failure) {
        (Some(o), _) if o.extraction_ok => multiplicity_exit(o.multiplicity),
        _ => EXIT_NUMERICAL,
    };
    let mut warnings: Vec<String> = a.failures.clone();
    if let Some(msg) = &a.oracle_failure {
        warnings.push(format!("oracle: {msg}"));
    }
    warnings.extend(a.inconsistencies.iter().cloned());
    let r = ReportFile {
        tool: TOOL.into(),
        version: VERSION.into(),
        model_name: file.metadata.name.clone(),
        audit: a,
        spectrum,
        spectrum_failure,
    };
    Ok(Outcome {
        text: render(common.format, &r, report::audit_text),
        exit_code,
        warnings,
    })
}

fn oracle(file: &ModelFile, common: &Common) -> Result<SteadyStateResult, CliError> {
    superop::steady_states_with_cap(&file.model, common.tol, common.max_dim).map_err(numerical)
}

fn cmd_steady(common: &Common) -> Result<Outcome, CliError> {
    let file = load(common)?;
    let s = oracle(&file, common)?;
    let extraction_failure = match &s.extraction {
        Extraction::Ok => None,
        Extraction::Failed(msg) => Some(msg.clone()),
    };
    let exit_code = if extraction_failure.is_some() {
        EXIT_NUMERICAL
    } else {
        multiplicity_exit(s.multiplicity)
    };
    let out = SteadyFile {
        tool: TOOL.into(),
        version: VERSION.into(),
        tol: common.tol,
        multiplicity: s.multiplicity,
        gap: s.gap,
        kernel_singular_value: s.kernel_singular_value,
        smallest_retained_singular_value: s.smallest_retained_singular_value,
        extraction_failure,
        states: s.states.iter().map(rows).collect(),
    };
    Ok(Outcome {
        text: render(common.format, &out, report::steady_text),
        exit_code,
        warnings: Vec::new(),
    })
}

/// Initial states named on the command line.
pub fn initial_states(spec: &str, h: &ComplexMatrix, samples: usize) -> Result<Vec<ComplexMatrix>, CliError> {
    let d = h.nrows();
    let pure = |v: &operator::ComplexVector| v * v.adjoint();
    let fixed = |m: ComplexMatrix| -> Result<Vec<ComplexMatrix>, CliError> {
        if samples != 1 {
            return Err(CliError::Input(
                "--samples applies only to --rho0 random:SEED".into(),
            ));
        }
        Ok(vec![m])
    };
    match spec {
        "maximally-mixed" => fixed(identity(d) * c(1.0 / d as f64, 0.0)),
        "ground" | "excited" => {
            let eig = hermitian_eigen(h).map_err(numerical)?;
            let k = if spec == "ground" { 0 } else { d - 1 };
            fixed(pure(&eig.eigenvectors.column(k).into_owned()))
        }
        _ => {
            if let Some(k) = spec.strip_prefix("basis:") {
                let k: usize = k
                    .parse()
                    .ok()
                    .filter(|&k| (1..=d).contains(&k))
                    .ok_or_else(|| CliError::Input(format!("--rho0 basis:K needs 1 <= K <= {d}")))?;
                return fixed(operator::matrix_unit(k, k, d).map_err(numerical)?);
            }
            if let Some(seed) = spec.strip_prefix("random:") {
                let seed: u64 = seed
                    .parse()
                    .map_err(|_| CliError::Input(format!("--rho0 random:SEED, bad seed \"{seed}\"")))?;
                if samples == 0 {
                    return Err(CliError::Input("--samples must be at least 1".into()));
                }
                return Ok((0..samples as u64)
                    .map(|k| {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k));
                        random::density_matrix(&mut rng, d)
                    })
                    .collect());
            }
            Err(CliError::Input(format!(
                "unknown --rho0 \"{spec}\"; use ground, excited, maximally-mixed, basis:K or random:SEED"
            )))
        }
    }
}

fn cmd_evolve(common: &Common, times: &[f64], rho0: &str, samples: usize) -> Result<Outcome, CliError> {
    let file = load(common)?;
    if let Some(t) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
        return Err(CliError::Input(format!(
            "time {t} rejected: the semigroup runs forward only (t >= 0)"
        )));
    }
    let starts = initial_states(rho0, file.model.hamiltonian(), samples)?;
    let steady = oracle(&file, common)?;
    let target = (steady.multiplicity == 1 && steady.extraction == Extraction::Ok)
        .then(|| steady.states[0].clone());
    let prop = Propagator::with_cap(&file.model, common.max_dim).map_err(numerical)?;
    let mut table = Vec::with_capacity(starts.len() * times.len());
    for (k, r0) in starts.iter().enumerate() {
        for &t in times {
            let rho = prop.evolve(r0, t).map_err(numerical)?;
            let distance = match &target {
                Some(ss) => Some(operator::trace_norm(&(&rho - ss)).map_err(numerical)?),
                None => None,
            };
            let herm = operator::hermitian_part(&rho);
            let min_eigenvalue = hermitian_eigen(&herm).map_err(numerical)?.eigenvalues[0];
            table.push(EvolveRow {
                sample: k + 1,
                t,
                distance,
                trace_residual: (rho.trace() - c(1.0, 0.0)).norm(),
                min_eigenvalue,
                populations: (0..rho.nrows()).map(|i| rho[(i, i)].re).collect(),
            });
        }
    }
    let out = EvolveFile {
        tool: TOOL.into(),
        version: VERSION.into(),
        rho0: rho0.to_owned(),
        multiplicity: steady.multiplicity,
        rows: table,
    };
    let mut warnings = Vec::new();
    if target.is_none() {
        warnings.push(format!(
            "stationary state is not unique (multiplicity {}); distances omitted",
            steady.multiplicity
        ));
    }
    Ok(Outcome {
        text: render(common.format, &out, report::evolve_text),
        exit_code: EXIT_UNIQUE,
        warnings,
    })
}

fn cmd_spectrum(common: &Common) -> Result<Outcome, CliError> {
    let file = load(common)?;
    let s = superop::spectrum_report_with_cap(&file.model, common.tol, common.max_dim)
        .map_err(numerical)?;
    let out = SpectrumFile {
        tool: TOOL.into(),
        version: VERSION.into(),
        tol: common.tol,
        spectrum: SpectrumSummary::from(&s),
    };
    Ok(Outcome {
        text: render(common.format, &out, report::spectrum_file_text),
        exit_code: EXIT_UNIQUE,
        warnings: Vec::new(),
    })
}
