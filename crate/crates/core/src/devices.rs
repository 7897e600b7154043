//! Resonator registry, material data, and the device file format.
//!
//! Device files are UTF-8, one `key = value` per line, `#` starts a comment.
//! Units are carried in the key names:
//!
//! ```text
//! name          = proposed1
//! mass_ng       = 1
//! f_m_khz       = 300
//! L_cm          = 0.5
//! finesse       = 300000
//! Q_m           = 20000
//! radius_um     = 4        # optional, needed for CSL / QG
//! thickness_um  = 5        # optional, needed for CSL / QG
//! wavelength_nm = 1064     # optional, default 1064
//! material      = tantalum # optional, default tantalum
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::physconst::{AMU, C, HBAR, K_B};
use crate::{Error, Result};

pub const DEFAULT_WAVELENGTH: f64 = 1.064e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Material {
    pub name: String,
    /// Atomic mass number A.
    pub mass_number: u32,
    /// Atomic mass, kg.
    pub atomic_mass: f64,
    /// Debye temperature, K.
    pub debye_temperature: Option<f64>,
    /// Nuclear radius constant r₀, m.
    pub r0: f64,
}

impl Material {
    pub fn tantalum() -> Self {
        Self {
            name: "tantalum".into(),
            mass_number: 181,
            atomic_mass: 180.947_88 * AMU,
            debye_temperature: Some(240.0),
            r0: 1.25e-15,
        }
    }

    /// Mass of one nucleus taken as A × amu.
    pub fn nuclear_mass(&self) -> f64 {
        f64::from(self.mass_number) * AMU
    }
}

pub fn material_by_name(name: &str) -> Option<Material> {
    match name.trim().to_ascii_lowercase().as_str() {
        "tantalum" | "ta" => Some(Material::tantalum()),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeviceParams {
    pub name: String,
    /// Effective mass, kg.
    pub mass: f64,
    /// Mechanical frequency, Hz.
    pub f_m: f64,
    /// Cavity length, m.
    pub cavity_length: f64,
    pub finesse: f64,
    pub q_m: f64,
    /// Mirror radius R, m.
    pub radius: Option<f64>,
    /// Mirror thickness b, m.
    pub thickness: Option<f64>,
    /// Optical wavelength, m.
    pub wavelength: f64,
    pub material: String,
}

impl DeviceParams {
    pub fn omega_m(&self) -> f64 {
        2.0 * PI * self.f_m
    }

    /// Zero-point motion sqrt(ħ/(2mω_m)).
    pub fn x0(&self) -> f64 {
        (HBAR / (2.0 * self.mass * self.omega_m())).sqrt()
    }

    /// Disk geometry (R, b), required by the localization models.
    pub fn geometry(&self) -> Result<(f64, f64)> {
        match (self.radius, self.thickness) {
            (Some(r), Some(b)) => Ok((r, b)),
            _ => {
                Err(Error::Config(format!("device `{}` has no disk geometry (radius_um and thickness_um)", self.name)))
            }
        }
    }

    pub fn material(&self) -> Result<Material> {
        material_by_name(&self.material).ok_or_else(|| Error::Config(format!("unknown material `{}`", self.material)))
    }

    pub fn with_wavelength(mut self, wavelength: f64) -> Self {
        self.wavelength = wavelength;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivedParams {
    pub omega_m: f64,
    pub x0: f64,
    pub kappa: f64,
    /// Γ_c = πc/(LF), angular.
    pub cavity_linewidth: f64,
    /// ω_m/Γ_c.
    pub sideband_ratio: f64,
    pub t_eid: f64,
}

pub fn derive(device: &DeviceParams) -> DerivedParams {
    let omega_m = device.omega_m();
    let x0 = device.x0();
    let omega_o = 2.0 * PI * C / device.wavelength;
    let coupling = omega_o * x0 / device.cavity_length;
    let cavity_linewidth = PI * C / (device.cavity_length * device.finesse);
    DerivedParams {
        omega_m,
        x0,
        kappa: coupling / omega_m,
        cavity_linewidth,
        sideband_ratio: omega_m / cavity_linewidth,
        t_eid: HBAR * omega_m * device.q_m / K_B,
    }
}

#[allow(clippy::too_many_arguments)]
fn table_row(
    name: &str,
    mass_ng: f64,
    f_m_khz: f64,
    l_cm: f64,
    finesse: f64,
    q_m: f64,
    radius_um: Option<f64>,
    thickness_um: Option<f64>,
) -> DeviceParams {
    DeviceParams {
        name: name.into(),
        mass: mass_ng * 1e-12,
        f_m: f_m_khz * 1e3,
        cavity_length: l_cm * 1e-2,
        finesse,
        q_m,
        radius: radius_um.map(|r| r * 1e-6),
        thickness: thickness_um.map(|b| b * 1e-6),
        wavelength: DEFAULT_WAVELENGTH,
        material: "tantalum".into(),
    }
}

/// The two measured trampolines and the two proposed devices.
pub fn builtin_devices() -> Vec<DeviceParams> {
    vec![
        table_row("tramp1", 60.0, 158.0, 5.0, 38_000.0, 43_000.0, None, None),
        table_row("tramp2", 110.0, 9.71, 5.0, 29_000.0, 940_000.0, None, None),
        table_row("proposed1", 1.0, 300.0, 0.5, 300_000.0, 20_000.0, Some(4.0), Some(5.0)),
        table_row("proposed2", 100.0, 4.5, 5.0, 2e6, 2e6, Some(40.0), Some(5.0)),
    ]
}

fn normalize_name(name: &str) -> String {
    name.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase()
}

/// Look up a builtin by name; punctuation and case are ignored
/// (`"Proposed #2"` finds `proposed2`, `"tramp.1"` finds `tramp1`).
pub fn builtin(name: &str) -> Option<DeviceParams> {
    let key = normalize_name(name);
    builtin_devices().into_iter().find(|d| d.name == key)
}

const KEYS: [&str; 10] =
    ["name", "mass_ng", "f_m_khz", "L_cm", "finesse", "Q_m", "radius_um", "thickness_um", "wavelength_nm", "material"];

fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::Validation { field: field.into(), reason: reason.into() }
}

fn positive(map: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>> {
    let Some(raw) = map.get(key) else { return Ok(None) };
    let v: f64 = raw.parse().map_err(|_| invalid(key, format!("`{raw}` is not a number")))?;
    if !(v > 0.0) || !v.is_finite() {
        return Err(invalid(key, format!("must be positive, got {v}")));
    }
    Ok(Some(v))
}

fn required(map: &BTreeMap<String, String>, key: &str) -> Result<f64> {
    positive(map, key)?.ok_or_else(|| invalid(key, "missing"))
}

/// Parse the device file format. `default_name` is used when the file has no
/// `name` key.
pub fn parse_device(text: &str, default_name: &str) -> Result<DeviceParams> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(invalid(&format!("line {}", lineno + 1), "expected `key = value`"));
        };
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(invalid(key, "unknown key"));
        }
        if map.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(invalid(key, "given more than once"));
        }
    }

    let material = map.get("material").cloned().unwrap_or_else(|| "tantalum".into());
    if material_by_name(&material).is_none() {
        return Err(invalid("material", format!("unknown material `{material}`")));
    }
    Ok(DeviceParams {
        name: map.get("name").cloned().unwrap_or_else(|| default_name.to_string()),
        mass: required(&map, "mass_ng")? * 1e-12,
        f_m: required(&map, "f_m_khz")? * 1e3,
        cavity_length: required(&map, "L_cm")? * 1e-2,
        finesse: required(&map, "finesse")?,
        q_m: required(&map, "Q_m")?,
        radius: positive(&map, "radius_um")?.map(|r| r * 1e-6),
        thickness: positive(&map, "thickness_um")?.map(|b| b * 1e-6),
        wavelength: positive(&map, "wavelength_nm")?.map_or(DEFAULT_WAVELENGTH, |w| w * 1e-9),
        material: material.to_ascii_lowercase(),
    })
}

pub fn load_device(path: &Path) -> Result<DeviceParams> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("device");
    parse_device(&text, stem)
}

/// Render a device in the file format accepted by [`parse_device`].
pub fn to_device_file(device: &DeviceParams) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name = {}", device.name);
    let _ = writeln!(out, "mass_ng = {}", device.mass * 1e12);
    let _ = writeln!(out, "f_m_khz = {}", device.f_m / 1e3);
    let _ = writeln!(out, "L_cm = {}", device.cavity_length * 1e2);
    let _ = writeln!(out, "finesse = {}", device.finesse);
    let _ = writeln!(out, "Q_m = {}", device.q_m);
    if let Some(r) = device.radius {
        let _ = writeln!(out, "radius_um = {}", r * 1e6);
    }
    if let Some(b) = device.thickness {
        let _ = writeln!(out, "thickness_um = {}", b * 1e6);
    }
    let _ = writeln!(out, "wavelength_nm = {}", device.wavelength * 1e9);
    let _ = writeln!(out, "material = {}", device.material);
    out
}
