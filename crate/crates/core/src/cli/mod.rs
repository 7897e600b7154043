//! Command-line front end. The `optomech` binary only parses arguments and
//! calls [`run`].
//!
//! Exit codes: 0 success, 1 a reproduction criterion failed, 2 usage or
//! configuration error, 3 numerical failure.

pub mod reproduce;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::decoherence::{csl_localization, eid_timescale, full_report, qg_localization, Mechanism, TimescaleReport};
use crate::devices::{builtin, builtin_devices, derive, load_device, to_device_file, DeviceParams};
use crate::dynamics::{visibility_curve, Channel, VisibilityTable, DEFAULT_DIM};
use crate::interferometer::{
    adequate_dim, postselect_probability_lowest_order, postselected_state_exact, thermal_monte_carlo,
    thermal_postselect_probability, thermal_snr, Estimator, InteractionParams, DEFAULT_SAMPLES,
};
use crate::{Error, Result, C64};
use reproduce::{reproduce, CriteriaFile, ReproduceOptions, ReproduceReport};

/// Directory for output files when `--out` is not given.
pub const OUT_DIR_ENV: &str = "OPTOMECH_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CRITERIA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "optomech",
    version,
    about = "Decoherence timescales and postselected interferometry for optomechanical resonators"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the built-in devices with derived parameters.
    Devices(DevicesArgs),
    /// Decoherence times of every mechanism for one device.
    Timescales(TimescalesArgs),
    /// Postselection probabilities, thermal average and signal-to-noise ratio.
    Postselect(PostselectArgs),
    /// Integrate the master equation and write visibility curves as CSV.
    Visibility(VisibilityArgs),
    /// Compare computed values with the published ones in the criteria file.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Table,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct DevicesArgs {
    #[arg(long, value_enum, default_value = "table")]
    pub format: TableFormat,
    /// Laser wavelength used for κ, nm.
    #[arg(long, default_value_t = 1064.0)]
    pub wavelength_nm: f64,
    /// Also write each device as `<name>.device` into this directory.
    #[arg(long)]
    pub export: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TimescalesArgs {
    /// Built-in device name or path to a device file.
    #[arg(long)]
    pub device: String,
    /// Environment temperature, mK.
    #[arg(long, default_value_t = 1.0)]
    pub t_env_mk: f64,
    /// Comma-separated mechanisms: zero-point, nuclear, debye, homogeneous, csl, qg.
    #[arg(long, value_delimiter = ',', value_parser = parse_mechanism)]
    pub models: Option<Vec<Mechanism>>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: ReportFormat,
    /// Shorthand for `--format json`.
    #[arg(long)]
    pub json: bool,
}

fn parse_mechanism(s: &str) -> std::result::Result<Mechanism, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct PostselectArgs {
    /// Single-photon coupling κ = g/ω_m.
    #[arg(long, default_value_t = 0.01)]
    pub kappa: f64,
    /// Interaction phase θ = ω_m t, rad.
    #[arg(long, default_value_t = std::f64::consts::PI)]
    pub theta: f64,
    /// Mean thermal phonon number.
    #[arg(long, default_value_t = 0.0)]
    pub nbar: f64,
    /// Monte Carlo samples.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VisibilityMechanism {
    None,
    Eid,
    Csl,
    Qg,
}

#[derive(Debug, Args)]
pub struct VisibilityArgs {
    /// Built-in device name or path to a device file.
    #[arg(long)]
    pub device: String,
    /// Comma-separated channels.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "eid")]
    pub mechanisms: Vec<VisibilityMechanism>,
    /// Final time, s. Defaults to 5 τ_EID.
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of time points after t = 0.
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Output CSV. Defaults to `visibility_<device>.csv` in $OPTOMECH_OUT_DIR or the working directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Environment temperature for the thermal channel, mK.
    #[arg(long, default_value_t = 1.0)]
    pub t_env_mk: f64,
    /// Fock-space truncation.
    #[arg(long, default_value_t = DEFAULT_DIM)]
    pub dim: usize,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Compare the printed ħQ/(2k_BT) with the quoted EID times; the factor-2
    /// gap is reported as a known discrepancy.
    #[arg(long)]
    pub strict_eid_printed_formula: bool,
    #[arg(long)]
    pub json: bool,
}

/// Scientific notation with nine significant digits, as used in every CSV.
pub fn sci(x: f64) -> String {
    format!("{x:.8e}")
}

/// Human-readable duration such as `28.3 us` or `1.88e6 s`.
pub fn human_time(t: f64) -> String {
    if !t.is_finite() {
        return "inf".into();
    }
    let units = [(1e-6, "us"), (1e-3, "ms"), (1.0, "s")];
    for (scale, unit) in units {
        if t < scale * 1e3 && t >= scale {
            return format!("{:.3} {unit}", t / scale);
        }
    }
    if t < 1e-6 {
        return format!("{:.3} ns", t * 1e9);
    }
    format!("{t:.3e} s")
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(io_err(Path::new("<stdout>")))
}

/// Resolve a builtin name or a device file path.
pub fn resolve_device(selector: &str) -> Result<DeviceParams> {
    if let Some(d) = builtin(selector) {
        return Ok(d);
    }
    let path = Path::new(selector);
    if path.exists() {
        return load_device(path);
    }
    let names: Vec<_> = builtin_devices().into_iter().map(|d| d.name).collect();
    Err(Error::Config(format!("unknown device `{selector}`: not a builtin ({}) and no such file", names.join(", "))))
}

fn positive_arg(name: &'static str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::param(name, format!("must be positive, got {v}")))
    }
}

pub fn cmd_devices(args: &DevicesArgs) -> Result<String> {
    let wavelength = positive_arg("wavelength-nm", args.wavelength_nm)? * 1e-9;
    let devices: Vec<_> = builtin_devices().into_iter().map(|d| d.with_wavelength(wavelength)).collect();
    if let Some(dir) = &args.export {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        for d in &devices {
            let path = dir.join(format!("{}.device", d.name));
            std::fs::write(&path, to_device_file(d)).map_err(io_err(&path))?;
        }
    }
    let mut s = String::new();
    match args.format {
        TableFormat::Csv => {
            s.push_str("device,mass_ng,f_m_khz,L_cm,finesse,Q_m,T_EID_K,kappa,omega_m_over_Gamma_c\n");
            for d in &devices {
                let p = derive(d);
                let cols = [
                    d.mass * 1e12,
                    d.f_m / 1e3,
                    d.cavity_length * 1e2,
                    d.finesse,
                    d.q_m,
                    p.t_eid,
                    p.kappa,
                    p.sideband_ratio,
                ];
                let cols: Vec<_> = cols.iter().map(|v| sci(*v)).collect();
                let _ = writeln!(s, "{},{}", d.name, cols.join(","));
            }
        }
        TableFormat::Table => {
            let _ = writeln!(
                s,
                "{:<10} {:>8} {:>9} {:>6} {:>10} {:>10} {:>9} {:>10} {:>9}",
                "device", "m (ng)", "f_m (kHz)", "L (cm)", "F", "Q_m", "T_EID (K)", "kappa", "w_m/G_c"
            );
            for d in &devices {
                let p = derive(d);
                let _ = writeln!(
                    s,
                    "{:<10} {:>8} {:>9} {:>6} {:>10} {:>10} {:>9.3} {:>10.3e} {:>9.3}",
                    d.name,
                    d.mass * 1e12,
                    d.f_m / 1e3,
                    d.cavity_length * 1e2,
                    d.finesse,
                    d.q_m,
                    p.t_eid,
                    p.kappa,
                    p.sideband_ratio
                );
            }
        }
    }
    Ok(s)
}

fn render_timescales(r: &TimescaleReport, format: ReportFormat) -> Result<String> {
    let mut s = String::new();
    match format {
        ReportFormat::Json => {
            s = serde_json::to_string_pretty(r).map_err(|e| Error::Config(e.to_string()))?;
            s.push('\n');
        }
        ReportFormat::Csv => {
            s.push_str("mechanism,tau_s,testable,note\n");
            let _ = writeln!(s, "eid,{},,printed formula", sci(r.tau_eid));
            let _ = writeln!(s, "eid-quoted,{},,twice the printed formula", sci(r.tau_eid_quoted));
            for e in &r.entries {
                let tau = e.tau.map(sci).unwrap_or_default();
                let note = e.error.as_deref().or(e.warning.as_deref()).unwrap_or("").replace(',', ";");
                let _ = writeln!(s, "{},{tau},{},{note}", e.mechanism, e.testable);
            }
        }
        ReportFormat::Table => {
            let _ = writeln!(s, "device {}  T_env = {} mK", r.device, r.t_env * 1e3);
            let _ = writeln!(
                s,
                "tau_EID = {} (hbar Q/2 k_B T), {} (hbar Q/k_B T)\n",
                human_time(r.tau_eid),
                human_time(r.tau_eid_quoted)
            );
            let _ = writeln!(s, "{:<26} {:>12} {:>14} {:>9}  note", "mechanism", "tau (s)", "tau", "testable");
            for e in &r.entries {
                let (tau, human) = match e.tau {
                    Some(t) => (format!("{t:.3e}"), human_time(t)),
                    None => ("-".into(), "-".into()),
                };
                let note = e.error.as_deref().or(e.warning.as_deref()).unwrap_or("");
                let testable = if e.testable { "yes" } else { "no" };
                let line = format!("{:<26} {tau:>12} {human:>14} {testable:>9}  {note}", e.mechanism.label());
                let _ = writeln!(s, "{}", line.trim_end());
            }
        }
    }
    Ok(s)
}

pub fn cmd_timescales(args: &TimescalesArgs) -> Result<String> {
    let device = resolve_device(&args.device)?;
    let t_env = positive_arg("t-env-mk", args.t_env_mk)? * 1e-3;
    let models = args.models.clone().unwrap_or_else(Mechanism::all);
    let report = full_report(&device, t_env, &models)?;
    let format = if args.json { ReportFormat::Json } else { args.format };
    render_timescales(&report, format)
}

pub fn cmd_postselect(args: &PostselectArgs) -> Result<String> {
    let PostselectArgs { kappa, theta, nbar, samples, seed } = *args;
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::param("nbar", format!("must be non-negative, got {nbar}")));
    }
    let ground = InteractionParams::new(kappa, theta, C64::new(0.0, 0.0))?;
    let mut s = String::new();
    let _ = writeln!(s, "kappa = {kappa}, theta = {theta}, nbar = {nbar}");
    if let Some(w) = ground.warning() {
        let _ = writeln!(s, "warning: {w}");
    }

    let (sig0, noise0) = postselect_probability_lowest_order(&ground);
    let _ = writeln!(s, "\nlowest order, ground state");
    let _ = writeln!(s, "  signal       {}", sci(sig0));
    let _ = writeln!(s, "  noise        {}", sci(noise0));

    let exact = postselected_state_exact(&ground, adequate_dim(&ground))?;
    let _ = writeln!(s, "exact conditional state, ground state");
    let _ = writeln!(s, "  probability  {}", sci(exact.probability));
    let _ = writeln!(s, "  signal       {}", sci(exact.signal));
    let _ = writeln!(s, "  noise        {}", sci(exact.noise));

    let (sig, noise) = thermal_postselect_probability(nbar, kappa, theta);
    let total = sig + noise;
    let _ = writeln!(s, "thermal average, lowest order");
    let _ = writeln!(s, "  signal       {}", sci(sig));
    let _ = writeln!(s, "  noise        {}", sci(noise));
    let _ = writeln!(s, "  total        {}", sci(total));

    let _ = writeln!(s, "monte carlo, {samples} samples, seed {seed}");
    for (label, est) in [("lowest order", Estimator::LowestOrder), ("exact", Estimator::Exact)] {
        let mc = thermal_monte_carlo(nbar, kappa, theta, samples, seed, est)?;
        let z = if mc.std_error > 0.0 {
            format!("{:+.2} standard errors from the thermal average", (mc.mean - total) / mc.std_error)
        } else {
            "no spread: every sample is identical".into()
        };
        let _ = writeln!(s, "  {label:<13}{} +- {}  ({z})", sci(mc.mean), sci(mc.std_error));
    }
    let _ = writeln!(s, "SNR sec^2(theta/2)/nbar = {}", sci(thermal_snr(nbar, theta)));
    Ok(s)
}

/// CSV with a `t_s` column and one `V_<label>` column per channel.
pub fn visibility_csv(table: &VisibilityTable) -> String {
    let mut s = String::from("t_s");
    for c in &table.columns {
        let _ = write!(s, ",V_{}", c.label);
    }
    s.push('\n');
    for (k, t) in table.times.iter().enumerate() {
        s.push_str(&sci(*t));
        for c in &table.columns {
            s.push(',');
            s.push_str(&sci(c.values[k]));
        }
        s.push('\n');
    }
    s
}

fn default_out_path(device: &DeviceParams) -> PathBuf {
    let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
    dir.join(format!("visibility_{}.csv", device.name))
}

pub fn cmd_visibility(args: &VisibilityArgs) -> Result<String> {
    let device = resolve_device(&args.device)?;
    let t_env = positive_arg("t-env-mk", args.t_env_mk)? * 1e-3;
    let t_max = match args.t_max {
        Some(t) => positive_arg("t-max", t)?,
        None => 5.0 * eid_timescale(device.q_m, t_env),
    };
    if args.points == 0 {
        return Err(Error::param("points", "need at least one point"));
    }
    let mut channels = Vec::new();
    for m in &args.mechanisms {
        let channel = match m {
            VisibilityMechanism::None => Channel::None,
            VisibilityMechanism::Eid => Channel::Eid { t_env },
            VisibilityMechanism::Csl => {
                let (r, b) = device.geometry()?;
                Channel::Localized { label: "csl".into(), lambda: csl_localization(device.mass, r, b)?.lambda }
            }
            VisibilityMechanism::Qg => {
                let (r, b) = device.geometry()?;
                Channel::Localized { label: "qg".into(), lambda: qg_localization(device.mass, r, b).lambda }
            }
        };
        if !channels.contains(&channel) {
            channels.push(channel);
        }
    }
    let times: Vec<f64> = (1..=args.points).map(|k| t_max * k as f64 / args.points as f64).collect();
    let table = visibility_curve(&device, &channels, &times, args.dim)?;

    let path = args.out.clone().unwrap_or_else(|| default_out_path(&device));
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    std::fs::write(&path, visibility_csv(&table)).map_err(io_err(&path))?;

    let mut s = format!("wrote {} ({} rows)\n", path.display(), times.len());
    for c in &table.columns {
        let last = c.values.last().copied().unwrap_or(1.0);
        let _ = writeln!(
            s,
            "  {:<6} final V = {last:.6}  steps {}  max trace drift/step {:.1e}  top-level population {:.1e}",
            c.label, c.stats.steps, c.stats.max_step_trace_drift, c.stats.max_top_population
        );
    }
    Ok(s)
}

fn render_reproduce(r: &ReproduceReport, json: bool) -> Result<String> {
    if json {
        let mut s = serde_json::to_string_pretty(r).map_err(|e| Error::Config(e.to_string()))?;
        s.push('\n');
        return Ok(s);
    }
    let mut s = String::new();
    let _ = writeln!(s, "criteria version {}, T_env = {} mK\n", r.criteria_version, r.t_env * 1e3);
    let _ = writeln!(
        s,
        "{:<36} {:>12} {:>12} {:>10} {:>14}  status",
        "criterion", "published", "computed", "deviation", "tolerance"
    );
    for row in &r.rows {
        let computed = row.computed.map_or("-".into(), |c| format!("{c:.4e}"));
        let dev = row.deviation.map_or("-".into(), |d| format!("{:+.1}%", d * 100.0));
        let _ = write!(
            s,
            "{:<36} {:>12.4e} {computed:>12} {dev:>10} {:>14}  {}",
            row.id,
            row.published,
            row.tolerance,
            row.status.label()
        );
        if let Some(n) = &row.note {
            let _ = write!(s, "  ({n})");
        }
        s.push('\n');
    }
    let failed = r.rows.iter().filter(|x| x.status == reproduce::Status::Fail).count();
    let _ = writeln!(s, "\n{} rows, {failed} failed", r.rows.len());
    Ok(s)
}

pub fn cmd_reproduce(args: &ReproduceArgs) -> Result<(String, bool)> {
    let criteria = CriteriaFile::builtin();
    let opts = ReproduceOptions { strict_eid_printed_formula: args.strict_eid_printed_formula };
    let report = reproduce(&criteria, opts);
    Ok((render_reproduce(&report, args.json)?, report.all_passed()))
}

/// Run a parsed command, writing results to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let outcome = match &cli.command {
        Command::Devices(a) => cmd_devices(a).map(|s| (s, true)),
        Command::Timescales(a) => cmd_timescales(a).map(|s| (s, true)),
        Command::Postselect(a) => cmd_postselect(a).map(|s| (s, true)),
        Command::Visibility(a) => cmd_visibility(a).map(|s| (s, true)),
        Command::Reproduce(a) => cmd_reproduce(a),
    };
    match outcome.and_then(|(text, ok)| emit(out, &text).map(|_| ok)) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CRITERIA,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_USAGE
            }
        }
    }
}

/// Parse `args` (including the program name) and run.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(rendered.as_bytes());
            if code == 0 {
                EXIT_OK
            } else {
                EXIT_USAGE
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with_args(std::iter::once("optomech").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn sci_has_nine_digits() {
        assert_eq!(sci(1.0), "1.00000000e0");
        assert_eq!(sci(-3.356e-5), "-3.35600000e-5");
    }

    #[test]
    fn human_times() {
        assert_eq!(human_time(28.3e-6), "28.300 us");
        assert_eq!(human_time(1.1e-3), "1.100 ms");
        assert_eq!(human_time(7.1), "7.100 s");
        assert_eq!(human_time(1.8e6), "1.800e6 s");
        assert_eq!(human_time(f64::INFINITY), "inf");
    }

    #[test]
    fn devices_csv_shape() {
        let (code, out, _) = run_args(&["devices", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 5);
        assert!(!out.contains('\r'));
    }

    #[test]
    fn unknown_device_is_usage_error() {
        let (code, _, err) = run_args(&["timescales", "--device", "no-such-device"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("unknown device"));
    }

    #[test]
    fn unknown_flag_rejected() {
        let (code, _, err) = run_args(&["devices", "--colour"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("--colour"));
    }

    #[test]
    fn help_exits_cleanly() {
        let (code, out, _) = run_args(&["postselect", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("--kappa"));
    }
}
