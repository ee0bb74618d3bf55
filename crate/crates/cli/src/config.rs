//! Run configuration: a TOML file merged with command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use cvent::ring::{g0_from_physical, optimum_sigma, optimum_tau, RingParams, SPEED_OF_LIGHT};
use cvent::{CventError, PumpModel};
use serde::Deserialize;

/// Field-level configuration problem. Maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error in `{}`: {}", self.field, self.reason)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_err(field: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError { field: field.to_string(), reason: reason.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Gaussian channel pulse filtered by the ring
    Ring,
    /// Gaussian pump acting directly on the cavity
    Gaussian,
    /// Continuous wave of strength `g0`
    Constant,
}

/// A number, or `"optimal"` to derive it from the other parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Choice {
    Optimal,
    Value(f64),
}

impl std::str::FromStr for Choice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("optimal") {
            return Ok(Choice::Optimal);
        }
        s.parse::<f64>().map(Choice::Value).map_err(|_| format!("expected a number or `optimal`, got `{s}`"))
    }
}

impl<'de> Deserialize<'de> for Choice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Choice::Value(x)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub zeta: Option<f64>,
    pub offset_mrad: Option<f64>,
    #[serde(default)]
    pub pump: PumpSection,
    #[serde(default)]
    pub ring: RingSection,
    #[serde(default)]
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub initial: InitialSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub oracle: OracleSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpSection {
    pub variant: Option<Variant>,
    pub g0: Option<f64>,
    pub tau: Option<Choice>,
    pub physical: Option<PhysicalInputs>,
}

/// SI inputs for the pump amplitude.
///
/// Signal and idler frequencies are taken from `freq_1`/`freq_2` when given,
/// otherwise from the vacuum wavelengths, otherwise from degenerate
/// down-conversion of `lambda_p`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalInputs {
    /// Effective second-order susceptibility [m/V]
    pub chi2: f64,
    /// Channel field amplitude [V/m]
    pub e0: f64,
    /// Ring radius [m]
    pub radius: f64,
    #[serde(default = "default_n_eff")]
    pub n_eff: f64,
    /// Signal and idler frequencies `ω/2π` [Hz]
    pub freq_1: Option<f64>,
    pub freq_2: Option<f64>,
    /// Vacuum wavelengths [m]
    pub lambda_1: Option<f64>,
    pub lambda_2: Option<f64>,
    pub lambda_p: Option<f64>,
}

fn default_n_eff() -> f64 {
    3.0
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSection {
    pub a_p: Option<f64>,
    pub sigma_p: Option<Choice>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    pub step: Option<f64>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub n1: Option<f64>,
    pub n2: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub n_tau: Option<usize>,
    pub n_zeta: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    pub n_max: Option<usize>,
    pub rows: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

/// Flags shared by every subcommand. Anything given here beats the file.
#[derive(Debug, Default, Clone, Args)]
pub struct Overrides {
    /// TOML configuration file
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Pump model
    #[arg(long, value_enum)]
    pub pump: Option<Variant>,
    /// Dimensionless pump amplitude g0
    #[arg(long)]
    pub g0: Option<f64>,
    /// Pulse duration τ̃ = Γ₊τ, or `optimal`
    #[arg(long, value_name = "TAU|optimal")]
    pub tau: Option<Choice>,
    /// Loss asymmetry ζ = Γ₋/Γ₊
    #[arg(long, allow_negative_numbers = true)]
    pub zeta: Option<f64>,
    /// Ring round-trip amplitude transmission
    #[arg(long)]
    pub ap: Option<f64>,
    /// Ring self-coupling, or `optimal`
    #[arg(long = "sigma-p", value_name = "SIGMA|optimal")]
    pub sigma_p: Option<Choice>,
    /// Homodyne angle offset [mrad]
    #[arg(long, allow_negative_numbers = true)]
    pub offset_mrad: Option<f64>,
    /// Integration step in t̃
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub t_end: Option<f64>,
    /// Initial thermal occupation of mode 1
    #[arg(long)]
    pub n1: Option<f64>,
    /// Initial thermal occupation of mode 2
    #[arg(long)]
    pub n2: Option<f64>,
    /// Fock cutoff per mode for the oracle
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Sweep grid points along τ̃
    #[arg(long)]
    pub n_tau: Option<usize>,
    /// Sweep grid points along ζ
    #[arg(long)]
    pub n_zeta: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; stdout when absent
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

pub const DEFAULT_G0: f64 = 4.0;
pub const DEFAULT_A_P: f64 = 0.99;
pub const DEFAULT_SIGMA_P: f64 = 0.868;
pub const DEFAULT_GRID: usize = 81;
pub const DEFAULT_ROWS: usize = 20;

/// Where the pump amplitude came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Amplitude {
    Given,
    /// Derived from SI inputs, with the `Γ₊` used [1/s].
    Physical { gamma_plus: f64 },
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub variant: Variant,
    pub g0: f64,
    pub amplitude: Amplitude,
    pub tau_tilde: f64,
    pub ring: RingParams,
    pub zeta: f64,
    /// Homodyne offset [rad]
    pub delta_theta: f64,
    pub step: Option<f64>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    pub n1: f64,
    pub n2: f64,
    pub n_tau: usize,
    pub n_zeta: usize,
    pub n_max: usize,
    pub rows: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn pump(&self) -> Result<PumpModel, CventError> {
        match self.variant {
            Variant::Ring => PumpModel::ring(self.g0, self.tau_tilde, self.ring),
            Variant::Gaussian => PumpModel::gaussian(self.g0, self.tau_tilde),
            Variant::Constant => PumpModel::constant(self.g0),
        }
    }

    pub fn offset_mrad(&self) -> f64 {
        self.delta_theta * 1e3
    }
}

pub fn load_file(path: &Path) -> anyhow::Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err("config", format!("cannot read {}: {e}", path.display())))?;
    let cfg = toml::from_str(&text).map_err(|e| config_err("config", format!("{}: {e}", path.display())))?;
    Ok(cfg)
}

fn finite(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(config_err(field, format!("must be finite, got {v}")))
    }
}

/// `g0` and `Γ₊ = Γ_P` from SI inputs, with `T_R = 2πR·n_eff/c`.
pub fn physical_g0(p: &PhysicalInputs, ring: &RingParams) -> Result<(f64, f64), ConfigError> {
    let positive = |field: &str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(config_err(field, format!("must be positive, got {v}")))
        }
    };
    positive("pump.physical.chi2", p.chi2)?;
    positive("pump.physical.e0", p.e0)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let omega = |freq: Option<f64>, lambda: Option<f64>, name: &str| -> Result<f64, ConfigError> {
        match (freq, lambda, p.lambda_p) {
            (Some(f), _, _) => Ok(two_pi * positive(&format!("pump.physical.freq_{name}"), f)?),
            (None, Some(l), _) => Ok(two_pi * SPEED_OF_LIGHT / positive(&format!("pump.physical.lambda_{name}"), l)?),
            (None, None, Some(lp)) => Ok(two_pi * SPEED_OF_LIGHT / (2.0 * positive("pump.physical.lambda_p", lp)?)),
            (None, None, None) => Err(config_err(
                "pump.physical",
                format!("mode {name} needs `freq_{name}`, `lambda_{name}` or `lambda_p`"),
            )),
        }
    };
    let (w1, w2) = (omega(p.freq_1, p.lambda_1, "1")?, omega(p.freq_2, p.lambda_2, "2")?);
    let geo = ring
        .with_geometry(positive("pump.physical.radius", p.radius)?, positive("pump.physical.n_eff", p.n_eff)?)
        .map_err(|e| config_err("pump.physical", e.to_string()))?;
    let gamma_plus = geo.pump_decay_rate();
    let g0 = g0_from_physical(p.chi2, p.e0, w1, w2, gamma_plus)
        .map_err(|e| config_err("pump.physical", e.to_string()))?;
    Ok((g0, gamma_plus))
}

/// Merges file values and flags, flags first, and resolves derived values.
pub fn resolve(flags: &Overrides) -> anyhow::Result<RunConfig> {
    let file = match &flags.config {
        Some(p) => load_file(p)?,
        None => FileConfig::default(),
    };

    let a_p = finite("ring.a_p", flags.ap.or(file.ring.a_p).unwrap_or(DEFAULT_A_P))?;
    let sigma_p = match flags.sigma_p.or(file.ring.sigma_p).unwrap_or(Choice::Value(DEFAULT_SIGMA_P)) {
        Choice::Optimal => optimum_sigma(a_p).map_err(|e| config_err("ring.a_p", e.to_string()))?,
        Choice::Value(s) => finite("ring.sigma_p", s)?,
    };
    let ring = RingParams::from_sigma(sigma_p, a_p).map_err(|e| config_err("ring", e.to_string()))?;

    let (g0, amplitude) = match (flags.g0, file.pump.g0, &file.pump.physical) {
        (Some(g), _, _) => (g, Amplitude::Given),
        (None, Some(_), Some(_)) => {
            return Err(config_err("pump", "give either `g0` or a `physical` section, not both").into())
        }
        (None, Some(g), None) => (g, Amplitude::Given),
        (None, None, Some(p)) => {
            let (g, gamma_plus) = physical_g0(p, &ring)?;
            (g, Amplitude::Physical { gamma_plus })
        }
        (None, None, None) => (DEFAULT_G0, Amplitude::Given),
    };
    if !(g0 >= 0.0 && g0.is_finite()) {
        return Err(config_err("pump.g0", format!("must be finite and >= 0, got {g0}")).into());
    }

    let tau_tilde = match flags.tau.or(file.pump.tau).unwrap_or(Choice::Optimal) {
        Choice::Optimal => optimum_tau(),
        Choice::Value(t) if t > 0.0 && t.is_finite() => t,
        Choice::Value(t) => return Err(config_err("pump.tau", format!("must be positive, got {t}")).into()),
    };
    let zeta = finite("zeta", flags.zeta.or(file.zeta).unwrap_or(0.0))?;
    if zeta.abs() >= 1.0 {
        return Err(config_err("zeta", format!("must lie in (-1, 1), got {zeta}")).into());
    }
    let offset = finite("offset_mrad", flags.offset_mrad.or(file.offset_mrad).unwrap_or(0.0))?;

    let step = flags.step.or(file.integrator.step);
    if let Some(h) = step {
        if !(h > 0.0 && h.is_finite()) {
            return Err(config_err("integrator.step", format!("must be positive, got {h}")).into());
        }
    }
    let t_start = flags.t_start.or(file.integrator.t_start).map(|t| finite("integrator.t_start", t)).transpose()?;
    let t_end = flags.t_end.or(file.integrator.t_end).map(|t| finite("integrator.t_end", t)).transpose()?;
    if let (Some(a), Some(b)) = (t_start, t_end) {
        if b <= a {
            return Err(config_err("integrator.t_end", format!("must exceed t_start ({a}), got {b}")).into());
        }
    }

    let occupation = |field: &str, v: Option<f64>| -> Result<f64, ConfigError> {
        let v = v.unwrap_or(0.0);
        if v >= 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(config_err(field, format!("must be finite and >= 0, got {v}")))
        }
    };
    let n1 = occupation("initial.n1", flags.n1.or(file.initial.n1))?;
    let n2 = occupation("initial.n2", flags.n2.or(file.initial.n2))?;

    let count = |field: &str, v: Option<usize>, default: usize, min: usize| -> Result<usize, ConfigError> {
        let v = v.unwrap_or(default);
        if v >= min {
            Ok(v)
        } else {
            Err(config_err(field, format!("must be at least {min}, got {v}")))
        }
    };

    Ok(RunConfig {
        variant: flags.pump.or(file.pump.variant).unwrap_or(Variant::Ring),
        g0,
        amplitude,
        tau_tilde,
        ring,
        zeta,
        delta_theta: offset * 1e-3,
        step,
        t_start,
        t_end,
        n1,
        n2,
        n_tau: count("sweep.n_tau", flags.n_tau.or(file.sweep.n_tau), DEFAULT_GRID, 1)?,
        n_zeta: count("sweep.n_zeta", flags.n_zeta.or(file.sweep.n_zeta), DEFAULT_GRID, 1)?,
        n_max: count("oracle.n_max", flags.nmax.or(file.oracle.n_max), cvent::oracle::DEFAULT_N_MAX, 2)?,
        rows: count("oracle.rows", file.oracle.rows, DEFAULT_ROWS, 2)?,
        format: flags.format.or(file.output.format).unwrap_or(Format::Csv),
        out: flags.out.clone().or(file.output.path),
    })
}
