use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::eid::{eid_timescale, eid_timescale_quoted};
use super::localization::{csl_localization, localization_timescale, qg_localization};
use super::penrose::{penrose_timescale, MassDistributionModel};
use crate::devices::{derive, DerivedParams, DeviceParams};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Mechanism {
    Penrose(MassDistributionModel),
    Csl,
    QuantumGravity,
}

impl Mechanism {
    /// Every mechanism, with the default homogeneous-sphere parameters.
    pub fn all() -> Vec<Mechanism> {
        let mut v: Vec<_> = MassDistributionModel::all().into_iter().map(Mechanism::Penrose).collect();
        v.push(Mechanism::Csl);
        v.push(Mechanism::QuantumGravity);
        v
    }

    pub fn label(&self) -> &'static str {
        match self {
            Mechanism::Penrose(m) => m.label(),
            Mechanism::Csl => "csl",
            Mechanism::QuantumGravity => "quantum-gravity",
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Mechanism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let m = match s.trim().to_ascii_lowercase().as_str() {
            "zero-point" | "zp" | "penrose-zero-point" => Mechanism::Penrose(MassDistributionModel::ResonatorZeroPoint),
            "nuclear" | "nuclear-radius" | "penrose-nuclear-radius" => {
                Mechanism::Penrose(MassDistributionModel::NuclearRadius)
            }
            "debye" | "penrose-debye" => Mechanism::Penrose(MassDistributionModel::NuclearZeroPointDebye),
            "homogeneous" | "penrose-homogeneous" => Mechanism::Penrose(MassDistributionModel::homogeneous()),
            "csl" => Mechanism::Csl,
            "qg" | "quantum-gravity" => Mechanism::QuantumGravity,
            other => return Err(Error::Config(format!("unknown mechanism `{other}`"))),
        };
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MechanismTimescale {
    pub mechanism: Mechanism,
    /// Decoherence time, s; `None` if the computation failed.
    pub tau: Option<f64>,
    pub error: Option<String>,
    pub warning: Option<String>,
    /// τ < τ_EID.
    pub testable: bool,
}

impl MechanismTimescale {
    fn new(mechanism: Mechanism, outcome: Result<(f64, Option<String>)>, tau_eid: f64) -> Self {
        match outcome {
            Ok((tau, warning)) => Self { mechanism, tau: Some(tau), error: None, warning, testable: tau < tau_eid },
            Err(e) => Self { mechanism, tau: None, error: Some(e.to_string()), warning: None, testable: false },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimescaleReport {
    pub device: String,
    /// Environment temperature, K.
    pub t_env: f64,
    /// ħQ_m/(2k_BT_env).
    pub tau_eid: f64,
    /// ħQ_m/(k_BT_env), the variant matching the commonly quoted values.
    pub tau_eid_quoted: f64,
    pub derived: DerivedParams,
    pub entries: Vec<MechanismTimescale>,
}

fn mechanism_tau(device: &DeviceParams, mechanism: &Mechanism) -> Result<(f64, Option<String>)> {
    let x0 = device.x0();
    match mechanism {
        Mechanism::Penrose(model) => Ok((penrose_timescale(device, model, &device.material()?)?, None)),
        Mechanism::Csl => {
            let (r, b) = device.geometry()?;
            let p = csl_localization(device.mass, r, b)?;
            let t = localization_timescale(p.lambda, x0, p.a_loc);
            Ok((t.tau, t.warning))
        }
        Mechanism::QuantumGravity => {
            let (r, b) = device.geometry()?;
            let p = qg_localization(device.mass, r, b);
            let t = localization_timescale(p.lambda, x0, p.a_loc);
            Ok((t.tau, t.warning))
        }
    }
}

/// τ_EID plus every requested mechanism at environment temperature `t_env`.
/// A failing mechanism is recorded in its entry instead of aborting.
pub fn full_report(device: &DeviceParams, t_env: f64, mechanisms: &[Mechanism]) -> Result<TimescaleReport> {
    if !(t_env > 0.0) {
        return Err(Error::param("t_env", format!("must be positive, got {t_env}")));
    }
    let tau_eid = eid_timescale(device.q_m, t_env);
    let entries =
        mechanisms.par_iter().map(|m| MechanismTimescale::new(*m, mechanism_tau(device, m), tau_eid)).collect();
    Ok(TimescaleReport {
        device: device.name.clone(),
        t_env,
        tau_eid,
        tau_eid_quoted: eid_timescale_quoted(device.q_m, t_env),
        derived: derive(device),
        entries,
    })
}

impl TimescaleReport {
    pub fn entry(&self, mechanism: &Mechanism) -> Option<&MechanismTimescale> {
        self.entries.iter().find(|e| e.mechanism == *mechanism)
    }
}
