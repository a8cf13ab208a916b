//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use lgks_core::algebra::{build_ladder, prop1_oracle, prop2_oracle, LadderSpec};
use lgks_core::criteria::{
    audit, build_c_matrix, commutant, is_self_adjoint_span, AuditConfig, AuditReport, Criterion,
};
use lgks_core::model::{self, atom_lattice};
use lgks_core::operator::{c, from_rows, hermitian_eigen, pauli};
use lgks_core::superop::{
    adjoint_lindblad_rhs, build_liouvillian, evolve, lindblad_rhs, spectrum_report, steady_states,
};
use lgks_core::{random, zoo, Channel, ComplexMatrix, LgksModel, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

/// Number, title, runtime limit in seconds, check.
type Entry = (u32, &'static str, Option<f64>, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fail(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn max_entry(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn min_eigenvalue(rho: &ComplexMatrix) -> Result<f64, String> {
    let h = (rho + rho.adjoint()) * c(0.5, 0.0);
    Ok(hermitian_eigen(&h).map_err(fail)?.eigenvalues[0])
}

fn audit_at(m: &LgksModel, tol: f64) -> Result<AuditReport, String> {
    let config = AuditConfig {
        tol,
        ..AuditConfig::default()
    };
    audit(m, &config).map_err(fail)
}

fn two_level(gamma: f64, omega: f64) -> LgksModel {
    model::two_level_t0(gamma, pauli::sigma_z() * c(omega / 2.0, 0.0)).unwrap()
}

fn zero_temperature_narrative() -> Outcome {
    for gamma in [1.0, 0.37, 4.2] {
        let m = two_level(gamma, 1.0);
        let g = gamma / 2.0;
        let z = c(0.0, 0.0);
        let expected = from_rows(&[
            vec![c(g, 0.0), c(0.0, g), z],
            vec![c(0.0, -g), c(g, 0.0), z],
            vec![z, z, z],
        ]);
        let cm = build_c_matrix(&m).map_err(fail)?;
        let dev = max_entry(&(&cm.matrix - &expected));
        ensure(dev <= 1e-12, || format!("gamma {gamma}: c-matrix deviates by {dev:e}"))?;
    }
    let m = two_level(1.0, 1.0);
    let r = audit_at(&m, lgks_core::DEFAULT_TOL)?;
    let rank = r.verdict(Criterion::SpohnRank);
    ensure(rank.applicable && !rank.passed, || "spohn-rank should fail".into())?;
    let p = rank.count("zero_eigenvalues");
    ensure(p == Some(2), || format!("zero eigenvalue count {p:?}, want 2"))?;
    let span = is_self_adjoint_span(&[pauli::sigma_minus()], 1e-9).map_err(fail)?;
    ensure(!span.self_adjoint, || "span of sigma- reported self-adjoint".into())?;
    for crit in [Criterion::SpohnSpan, Criterion::Frigerio] {
        ensure(!r.verdict(crit).applicable, || format!("{crit} should be inapplicable"))?;
    }
    let evans = r.verdict(Criterion::Evans);
    let dim = evans.count("commutant_dimension");
    ensure(evans.certifies() && dim == Some(1), || {
        format!("evans passed={} commutant dimension {dim:?}", evans.passed)
    })?;
    ensure(r.multiplicity() == Some(1), || {
        format!("multiplicity {:?}", r.multiplicity())
    })?;
    Ok("c-matrix matches for 3 rates, p=2, span not self-adjoint, evans commutant 1, multiplicity 1".into())
}

/// Classical populations from detailed rate balance: with `W_ij` the rate
/// `j → i`, the two-level stationary populations are `W_01, W_10` normalized.
fn rate_balance(m: &LgksModel) -> [f64; 2] {
    let mut w = [[0.0; 2]; 2];
    for ch in m.channels() {
        for (i, row) in w.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                if i != j {
                    *entry += ch.rate * ch.operator[(i, j)].norm_sqr();
                }
            }
        }
    }
    let total = w[0][1] + w[1][0];
    [w[0][1] / total, w[1][0] / total]
}

fn finite_temperature() -> Outcome {
    let mut worst = 0.0f64;
    let mut min_eig = f64::INFINITY;
    for (gamma, nbar) in [(1.0, 0.5), (0.3, 0.1), (2.5, 2.0), (1.0, 1e-3)] {
        let m = model::two_level_finite_t(gamma, nbar, pauli::sigma_z() * c(0.5, 0.0)).map_err(fail)?;
        let r = audit_at(&m, lgks_core::DEFAULT_TOL)?;
        for crit in [Criterion::SpohnSpan, Criterion::Frigerio] {
            ensure(r.verdict(crit).certifies(), || format!("nbar {nbar}: {crit} did not pass"))?;
        }
        ensure(r.multiplicity() == Some(1), || format!("nbar {nbar}: multiplicity {:?}", r.multiplicity()))?;
        let closed = [nbar / (1.0 + 2.0 * nbar), (1.0 + nbar) / (1.0 + 2.0 * nbar)];
        let balance = rate_balance(&m);
        for k in 0..2 {
            let gap = (balance[k] - closed[k]).abs();
            ensure(gap <= 1e-12, || format!("rate balance disagrees with closed form by {gap:e}"))?;
        }
        let s = steady_states(&m, lgks_core::DEFAULT_TOL).map_err(fail)?;
        let rho = &s.states[0];
        let expected = lgks_core::operator::real_diagonal(&balance);
        let dev = max_entry(&(rho - &expected));
        worst = worst.max(dev);
        ensure(dev <= 1e-9, || format!("nbar {nbar}: steady state off by {dev:e}"))?;
        let e = min_eigenvalue(rho)?;
        ensure(e > 0.0, || format!("nbar {nbar}: state not faithful, min eigenvalue {e:e}"))?;
        let frig = r.verdict(Criterion::Frigerio);
        ensure(frig.flag("faithful_checked") == Some(true), || "faithfulness not checked".into())?;
        min_eig = min_eig.min(e);
    }
    Ok(format!(
        "4 baths, spohn-span and frigerio pass, state error {worst:.1e}, min eigenvalue {min_eig:.2e}"
    ))
}

/// Two random models placed on complementary blocks.
fn block_model(rng: &mut ChaCha8Rng, d1: usize, d2: usize, n: usize) -> LgksModel {
    let d = d1 + d2;
    let embed = |a: &ComplexMatrix, b: &ComplexMatrix| {
        let mut m = ComplexMatrix::zeros(d, d);
        m.view_mut((0, 0), (d1, d1)).copy_from(a);
        m.view_mut((d1, d1), (d2, d2)).copy_from(b);
        m
    };
    let h = embed(&random::hermitian(rng, d1), &random::hermitian(rng, d2));
    let channels = (0..n)
        .map(|_| {
            let rate = rng.random_range(0.1..=10.0);
            let a = random::ginibre(rng, d1, d1);
            let b = random::ginibre(rng, d2, d2);
            Channel::new(rate, embed(&a, &b))
        })
        .collect();
    LgksModel::new(h, channels, None).unwrap()
}

fn soundness_sweep() -> Outcome {
    let tol = 1e-7;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut models = Vec::new();
    for _ in 0..120 {
        let d = rng.random_range(2..=4);
        let n = rng.random_range(1..=3);
        models.push(random::model(&mut rng, d, n, (0.1, 10.0)).map_err(fail)?);
    }
    for _ in 0..30 {
        let d1 = rng.random_range(1..=2);
        let d2 = rng.random_range(1..=2);
        let n = rng.random_range(1..=3);
        models.push(block_model(&mut rng, d1, d2, n));
    }
    let mut reducible = 0;
    for (k, m) in models.iter().enumerate() {
        let r = audit_at(m, tol)?;
        let mult = r.multiplicity().ok_or_else(|| format!("model {k}: oracle failed"))?;
        if mult > 1 {
            reducible += 1;
        }
        let certified = r.certified_by();
        ensure(mult == 1 || certified.is_empty(), || {
            format!("model {k}: {certified:?} certified with multiplicity {mult}")
        })?;
        let evans = r.verdict(Criterion::Evans).certifies();
        ensure(evans == (mult == 1), || {
            format!("model {k}: evans passed={evans} but multiplicity {mult}")
        })?;
    }
    Ok(format!(
        "{} models ({reducible} with multiplicity > 1), evans agreed on all",
        models.len()
    ))
}

fn random_spec(rng: &mut ChaCha8Rng, d: usize) -> LadderSpec {
    let entries = (0..d - 1)
        .map(|_| {
            let modulus = 10f64.powf(rng.random_range(-3.0..=3.0));
            let phase = rng.random_range(0.0..std::f64::consts::TAU);
            C64::from_polar(modulus, phase)
        })
        .collect();
    LadderSpec::new(entries).unwrap()
}

fn ladder_oracles() -> Outcome {
    let tol = lgks_core::DEFAULT_TOL;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for k in 0..200 {
        let d = rng.random_range(2..=8);
        let spec = random_spec(&mut rng, d);
        let out = prop1_oracle(&spec, tol).map_err(fail)?;
        ensure(out.holds, || format!("spec {k} (d={d}): commutant dimension {}", out.commutant_dimension))?;
        let alone = commutant(&[build_ladder(&spec)], tol).map_err(fail)?;
        ensure(alone.dimension >= 2, || {
            format!("spec {k}: commutant of the ladder alone has dimension {}", alone.dimension)
        })?;
    }
    let mut composites = 0;
    for n in 1..=3u32 {
        for mask in 0..(1u32 << n) {
            let dims: Vec<usize> = (0..n).map(|b| if mask >> b & 1 == 1 { 3 } else { 2 }).collect();
            let specs: Vec<LadderSpec> = dims.iter().map(|&d| random_spec(&mut rng, d)).collect();
            let out = prop2_oracle(&specs, tol, 27).map_err(fail)?;
            ensure(out.holds, || format!("factors {dims:?}: commutant dimension {}", out.commutant_dimension))?;
            composites += 1;
        }
    }
    Ok(format!("200 single ladders, {composites} composite layouts up to d=27, negative controls hold"))
}

fn rhs_scale(m: &LgksModel, x: &ComplexMatrix) -> f64 {
    let mut s = 2.0 * m.hamiltonian().norm();
    for ch in m.channels() {
        s += 2.0 * ch.rate * ch.operator.norm().powi(2);
    }
    s * x.norm()
}

fn generator_contracts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut applicative = 0.0f64;
    for _ in 0..100 {
        let d = rng.random_range(2..=4);
        let n = rng.random_range(1..=3);
        let m = random::model(&mut rng, d, n, (0.1, 10.0)).map_err(fail)?;
        let rho = random::density_matrix(&mut rng, d);
        let l = build_liouvillian(&m).map_err(fail)?;
        let direct = lindblad_rhs(&m, &rho).map_err(fail)?;
        let res = (l.apply(&rho).map_err(fail)? - &direct).norm() / rhs_scale(&m, &rho);
        applicative = applicative.max(res);
        let tr = direct.trace().norm();
        ensure(tr <= 1e-12 * rhs_scale(&m, &rho).max(1.0), || format!("Tr L(rho) = {tr:e}"))?;
    }
    ensure(applicative <= 1e-12, || format!("applicative residual {applicative:e}"))?;

    let mut duality = 0.0f64;
    for _ in 0..50 {
        let d = rng.random_range(2..=4);
        let n = rng.random_range(1..=3);
        let m = random::model(&mut rng, d, n, (0.1, 10.0)).map_err(fail)?;
        let rho = random::density_matrix(&mut rng, d);
        let obs = random::hermitian(&mut rng, d);
        let lhs = (&obs * lindblad_rhs(&m, &rho).map_err(fail)?).trace();
        let rhs = (adjoint_lindblad_rhs(&m, &obs).map_err(fail)? * &rho).trace();
        duality = duality.max((lhs - rhs).norm() / rhs_scale(&m, &obs).max(1.0));
    }
    ensure(duality <= 1e-11, || format!("duality residual {duality:e}"))?;

    let (mut trace, mut herm, mut semigroup, mut positivity) = (0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
    for _ in 0..30 {
        let d = rng.random_range(2..=4);
        let n = rng.random_range(1..=3);
        let m = random::model(&mut rng, d, n, (0.1, 10.0)).map_err(fail)?;
        let rho = random::density_matrix(&mut rng, d);
        let s = rng.random_range(0.0..2.0);
        let t = rng.random_range(0.0..2.0);
        let both = evolve(&m, &rho, s + t).map_err(fail)?;
        let stepped = evolve(&m, &evolve(&m, &rho, s).map_err(fail)?, t).map_err(fail)?;
        semigroup = semigroup.max((&both - &stepped).norm());
        for tau in [0.0, 0.1 * s, s, s + t, 5.0] {
            let r = evolve(&m, &rho, tau).map_err(fail)?;
            trace = trace.max((r.trace() - c(1.0, 0.0)).norm());
            herm = herm.max((&r - r.adjoint()).norm());
            positivity = positivity.min(min_eigenvalue(&r)?);
        }
    }
    ensure(trace <= 1e-9, || format!("trace drift {trace:e}"))?;
    ensure(herm <= 1e-9, || format!("Hermiticity drift {herm:e}"))?;
    ensure(semigroup <= 1e-9, || format!("semigroup residual {semigroup:e}"))?;
    ensure(positivity >= -1e-8, || format!("min eigenvalue {positivity:e}"))?;
    Ok(format!(
        "applicative {applicative:.1e}, duality {duality:.1e}, trace {trace:.1e}, hermiticity {herm:.1e}, semigroup {semigroup:.1e}, min eigenvalue {positivity:.1e}"
    ))
}

fn spectral_facts() -> Outcome {
    let tol = lgks_core::DEFAULT_TOL;
    let mut top = f64::NEG_INFINITY;
    for (name, m) in zoo::catalog() {
        let s = spectrum_report(&m, tol).map_err(fail)?;
        ensure(s.max_real <= 1e-10, || format!("{name}: max real part {:e}", s.max_real))?;
        ensure(s.pure_imaginary == 0, || format!("{name}: {} pure-imaginary eigenvalues", s.pure_imaginary))?;
        top = top.max(s.max_real);
    }
    let mut worst = 0.0f64;
    for (gamma, omega) in [(1.0, 1.0), (0.7, 1.3), (2.0, 0.25)] {
        let s = spectrum_report(&two_level(gamma, omega), tol).map_err(fail)?;
        let mut expected = vec![
            c(0.0, 0.0),
            c(-gamma, 0.0),
            c(-gamma / 2.0, omega),
            c(-gamma / 2.0, -omega),
        ];
        ensure(s.eigenvalues.len() == 4, || "expected four eigenvalues".into())?;
        for z in &s.eigenvalues {
            let (k, dist) = expected
                .iter()
                .enumerate()
                .map(|(k, e)| (k, (z - e).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            worst = worst.max(dist);
            expected.swap_remove(k);
        }
        ensure(worst <= 1e-9, || format!("gamma {gamma}, omega {omega}: spectrum off by {worst:e}"))?;
    }
    Ok(format!("{} zoo models stable (max real part {top:.1e}), closed-form spectrum error {worst:.1e}", zoo::catalog().len()))
}

fn composite_criteria() -> Outcome {
    let site = two_level(1.0, 1.0);
    let mut lines = Vec::new();
    for n in [2usize, 3] {
        for coupling in [None, Some(0.3)] {
            let lat = atom_lattice(n, &site, coupling).map_err(fail)?;
            let r = audit_at(&lat, lgks_core::DEFAULT_TOL)?;
            for crit in [Criterion::CompositeLadderChannels, Criterion::CompositeLadderCombination] {
                ensure(r.verdict(crit).certifies(), || format!("N={n}, coupling {coupling:?}: {crit} did not pass"))?;
            }
            ensure(r.multiplicity() == Some(1), || {
                format!("N={n}, coupling {coupling:?}: multiplicity {:?}", r.multiplicity())
            })?;
        }
        let broken = atom_lattice(n, &site, None)
            .map_err(fail)?
            .without_channel(1)
            .map_err(fail)?;
        let r = audit_at(&broken, lgks_core::DEFAULT_TOL)?;
        let v = r.verdict(Criterion::CompositeLadderChannels);
        ensure(v.applicable && !v.passed, || format!("N={n} without a bath: composite-ladder-channels passed"))?;
        let mult = r.multiplicity().unwrap_or(0);
        ensure(mult > 1, || format!("N={n} without a bath: multiplicity {mult}"))?;
        lines.push(format!("N={n} without a bath has multiplicity {mult}"));
    }
    Ok(format!("N=2,3 certified with multiplicity 1; {}", lines.join(", ")))
}

const INVARIANT: [Criterion; 5] = [
    Criterion::SpohnRank,
    Criterion::SpohnSpan,
    Criterion::Frigerio,
    Criterion::Evans,
    Criterion::LadderCombination,
];

fn signature(r: &AuditReport) -> (Vec<(bool, bool)>, Option<usize>) {
    let v = INVARIANT
        .iter()
        .map(|&c| {
            let v = r.verdict(c);
            (v.applicable, v.passed)
        })
        .collect();
    (v, r.multiplicity())
}

fn basis_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut audits = 0;
    for (name, m) in zoo::catalog() {
        let base = signature(&audit_at(&m, lgks_core::DEFAULT_TOL)?);
        for k in 0..20 {
            let u = random::unitary(&mut rng, m.dim());
            let rotated = m.conjugated(&u).map_err(fail)?;
            let sig = signature(&audit_at(&rotated, lgks_core::DEFAULT_TOL)?);
            ensure(sig == base, || format!("{name}, unitary {k}: {sig:?} vs {base:?}"))?;
            audits += 1;
        }
    }
    Ok(format!(
        "{audits} conjugated audits match on {} and the multiplicity",
        INVARIANT.iter().map(|c| c.name()).collect::<Vec<_>>().join(", ")
    ))
}

fn lgks(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_lgks"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_model(dir: &Path, name: &str, m: &LgksModel) -> PathBuf {
    let file = lgks_cli::modelfile::ModelFile {
        model: m.clone(),
        metadata: lgks_cli::modelfile::Metadata {
            name: Some(name.into()),
            description: None,
        },
    };
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, lgks_cli::modelfile::emit(&file)).unwrap();
    path
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::TempDir::new().map_err(fail)?;
    let mut models = zoo::catalog();
    models.push((
        "two-sink",
        LgksModel::new(
            ComplexMatrix::zeros(3, 3),
            vec![
                Channel::new(1.0, lgks_core::operator::matrix_unit(1, 3, 3).unwrap()),
                Channel::new(1.0, lgks_core::operator::matrix_unit(2, 3, 3).unwrap()),
            ],
            None,
        )
        .unwrap(),
    ));
    let mut runs = 0;
    for (name, m) in &models {
        let path = write_model(dir.path(), name, m);
        let p = path.to_str().unwrap();
        let commands: [&[&str]; 4] = [
            &["audit", p, "--format", "machine", "--seed", "7"],
            &["steady", p, "--format", "machine"],
            &["spectrum", p, "--format", "machine"],
            &["evolve", p, "--format", "machine", "--t", "0,0.5,2", "--rho0", "random:3", "--samples", "2"],
        ];
        for args in commands {
            let a = lgks(args);
            let b = lgks(args);
            ensure(a.stdout == b.stdout && !a.stdout.is_empty(), || format!("{name}: {} output differs", args[0]))?;
            ensure(a.status.code() == b.status.code(), || format!("{name}: {} exit differs", args[0]))?;
            runs += 2;
        }
        let out = lgks(commands[0]);
        let report: Value = serde_json::from_slice(&out.stdout).map_err(fail)?;
        let mult = report["audit"]["oracle"]["multiplicity"].as_u64();
        let oracle = steady_states(m, lgks_core::DEFAULT_TOL).map_err(fail)?.multiplicity as u64;
        ensure(mult == Some(oracle), || format!("{name}: report multiplicity {mult:?}, oracle {oracle}"))?;
        let want = if oracle == 1 { 0 } else { 1 };
        ensure(out.status.code() == Some(want), || {
            format!("{name}: exit {:?} with multiplicity {oracle}", out.status.code())
        })?;
    }
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"dim": 2, "hamiltonian": [[[0,0],[0,0]],[[0,0],[0,0]]], "channels": [{"rate": 0, "matrix": [[[0,0],[0,0]],[[1,0],[0,0]]]}]}"#)
        .map_err(fail)?;
    let code = lgks(&["audit", bad.to_str().unwrap()]).status.code();
    ensure(code == Some(2), || format!("invalid model exit {code:?}"))?;
    Ok(format!("{runs} runs byte-identical in pairs, exit codes match the oracle on {} models", models.len()))
}

fn main() {
    let criteria: [Entry; 9] = [
        (1, "two-level decay at zero temperature", Some(1.0), zero_temperature_narrative),
        (2, "two-level decay at finite temperature", Some(1.0), finite_temperature),
        (3, "soundness sweep", Some(120.0), soundness_sweep),
        (4, "ladder oracles", Some(120.0), ladder_oracles),
        (5, "generator contracts", None, generator_contracts),
        (6, "spectral facts", None, spectral_facts),
        (7, "composite criteria", Some(60.0), composite_criteria),
        (8, "basis invariance", None, basis_invariance),
        (9, "cli determinism and exit codes", None, cli_determinism),
    ];
    let mut failed = 0;
    for (n, title, limit, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if secs > l => Err(format!("took {secs:.2}s, limit {l}s")),
            (r, _) => r,
        };
        let (status, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if result.is_err() {
            failed += 1;
        }
        println!("criterion {n} ({title}): {status} [{secs:.2}s] {detail}");
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
