//! `lgks zoo`: catalog models with command-line parameters.

use lgks_core::model::{self, LgksModel};
use lgks_core::operator::{c, pauli};
use lgks_core::zoo::{fock_decay, spin_decay};

use crate::args::ZooArgs;
use crate::modelfile::{Metadata, ModelFile};
use crate::CliError;

pub const NAMES: [&str; 7] = [
    "two-level-t0",
    "two-level-finite-t",
    "dephasing",
    "n-level",
    "spin-decay",
    "fock-decay",
    "lattice",
];

fn allowed(family: &str) -> &'static [&'static str] {
    match family {
        "two-level-t0" | "dephasing" => &["gamma", "omega"],
        "two-level-finite-t" => &["gamma", "omega", "nbar"],
        "n-level" => &["d", "down", "up", "omega"],
        "spin-decay" => &["spin", "gamma", "omega"],
        "fock-decay" => &["n-max", "gamma", "omega"],
        _ => &[],
    }
}

fn given(a: &ZooArgs) -> Vec<&'static str> {
    let mut v = Vec::new();
    let flags: [(&'static str, bool); 11] = [
        ("gamma", a.gamma.is_some()),
        ("omega", a.omega.is_some()),
        ("nbar", a.nbar.is_some()),
        ("d", a.d.is_some()),
        ("down", a.down.is_some()),
        ("up", a.up.is_some()),
        ("spin", a.spin.is_some()),
        ("n-max", a.n_max.is_some()),
        ("sites", a.sites.is_some()),
        ("local", a.local.is_some()),
        ("coupling", a.coupling.is_some()),
    ];
    for (name, set) in flags {
        if set {
            v.push(name);
        }
    }
    v
}

fn param(e: model::ModelError) -> CliError {
    CliError::Input(e.to_string())
}

fn family(name: &str, a: &ZooArgs) -> Result<LgksModel, CliError> {
    let gamma = a.gamma.unwrap_or(1.0);
    let omega = a.omega.unwrap_or(1.0);
    let h2 = pauli::sigma_z() * c(omega / 2.0, 0.0);
    match name {
        "two-level-t0" => model::two_level_t0(gamma, h2).map_err(param),
        "two-level-finite-t" => {
            model::two_level_finite_t(gamma, a.nbar.unwrap_or(0.5), h2).map_err(param)
        }
        "dephasing" => model::dephasing_two_level(gamma, h2).map_err(param),
        "n-level" => {
            let d = a.d.unwrap_or(3);
            if d < 2 {
                return Err(CliError::Input(format!("--d must be at least 2, got {d}")));
            }
            let down = a.down.clone().unwrap_or_else(|| vec![1.0; d - 1]);
            let up = a.up.clone().unwrap_or_else(|| vec![0.0; d - 1]);
            let h = model::n_level_default_hamiltonian(d) * c(omega, 0.0);
            model::n_level_atom_with_hamiltonian(d, &down, &up, h).map_err(param)
        }
        "spin-decay" => spin_decay(a.spin.unwrap_or(1.0), gamma, omega).map_err(param),
        "fock-decay" => fock_decay(a.n_max.unwrap_or(3), gamma, omega).map_err(param),
        other => Err(CliError::Input(format!(
            "unknown zoo model \"{other}\"; known: {}",
            NAMES.join(", ")
        ))),
    }
}

pub fn build(a: &ZooArgs) -> Result<ModelFile, CliError> {
    let name = a.name.to_lowercase();
    let flags = given(a);
    let model = if name == "lattice" {
        let local = a
            .local
            .as_deref()
            .unwrap_or("two-level-t0")
            .to_lowercase();
        if local == "lattice" || !NAMES.contains(&local.as_str()) {
            return Err(CliError::Input(format!(
                "--local must name a single-site model, got \"{local}\""
            )));
        }
        let ok = allowed(&local);
        if let Some(bad) = flags
            .iter()
            .find(|f| !ok.contains(f) && !["sites", "local", "coupling"].contains(f))
        {
            return Err(CliError::Input(format!(
                "--{bad} does not apply to lattice with local model {local}"
            )));
        }
        let site = family(&local, a)?;
        let sites = a.sites.unwrap_or(2);
        model::atom_lattice(sites, &site, a.coupling).map_err(param)?
    } else {
        if NAMES.contains(&name.as_str()) {
            let ok = allowed(&name);
            if let Some(bad) = flags.iter().find(|f| !ok.contains(f)) {
                return Err(CliError::Input(format!("--{bad} does not apply to {name}")));
            }
        }
        family(&name, a)?
    };
    let mut parts = Vec::new();
    for f in &flags {
        let v = match *f {
            "gamma" => a.gamma.map(|x| x.to_string()),
            "omega" => a.omega.map(|x| x.to_string()),
            "nbar" => a.nbar.map(|x| x.to_string()),
            "d" => a.d.map(|x| x.to_string()),
            "down" => a.down.as_ref().map(|v| join(v)),
            "up" => a.up.as_ref().map(|v| join(v)),
            "spin" => a.spin.map(|x| x.to_string()),
            "n-max" => a.n_max.map(|x| x.to_string()),
            "sites" => a.sites.map(|x| x.to_string()),
            "local" => a.local.clone(),
            "coupling" => a.coupling.map(|x| x.to_string()),
            _ => None,
        };
        if let Some(v) = v {
            parts.push(format!("{f}={v}"));
        }
    }
    Ok(ModelFile {
        model,
        metadata: Metadata {
            name: Some(name),
            description: (!parts.is_empty()).then(|| parts.join(" ")),
        },
    })
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}
