//! Scenario files: sectioned TOML with the unit in every key name.
//!
//! ```toml
//! [fiber]
//! gamma_per_W_m = 11.3e-3
//! delta_beta_per_m = 4.53e-11
//! length_m = 300.0
//!
//! [config]
//! kind = "A"
//!
//! [pumps]
//! P1_W = 0.2
//! P3_W = 0.2
//!
//! [signal]
//! re = 0.8
//! im = 0.1
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use psa_core::fwm::{FiberParams, PhaseConvention, PumpConfigA, PumpConfigB, PumpSpec};
use psa_core::loss::{LinkLayout, LinkLoss, LinkOrder, LossChannel};
use psa_core::optimum::{optimal_idler_b, optimal_signal_phase_a};
use psa_core::{Configuration, FieldAmplitude, MuNu};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    fiber: RawFiber,
    config: RawConfig,
    pumps: RawPumps,
    signal: Option<RawField>,
    idler: Option<RawField>,
    loss: Option<RawLoss>,
    detection: Option<RawDetection>,
    scan: Option<RawScan>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFiber {
    #[serde(rename = "gamma_per_W_m")]
    gamma: f64,
    #[serde(rename = "delta_beta_per_m")]
    delta_beta: f64,
    #[serde(rename = "length_m")]
    length: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
enum ConfigTag {
    A,
    B,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ConventionTag {
    #[default]
    Propagated,
    MismatchOnly,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    kind: ConfigTag,
    #[serde(default)]
    phase_convention: ConventionTag,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPumps {
    #[serde(rename = "P1_W")]
    p1: Option<f64>,
    #[serde(rename = "P3_W")]
    p3: Option<f64>,
    theta10_rad: Option<f64>,
    theta30_rad: Option<f64>,
    #[serde(rename = "P2_W")]
    p2: Option<f64>,
    theta20_rad: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    re: Option<f64>,
    im: Option<f64>,
    #[serde(rename = "amplitude_sqrt_W")]
    amplitude: Option<f64>,
    phase_rad: Option<f64>,
    #[serde(default)]
    optimal: bool,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
enum LayoutTag {
    AmpThenLoss,
    LossThenAmp,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLoss {
    tau: f64,
    tau_idler: Option<f64>,
    layout: LayoutTag,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDetection {
    phi_rad: Option<f64>,
    #[serde(default)]
    align_with_mean: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScan {
    variable: String,
    start: f64,
    stop: f64,
    steps: usize,
    phi_start: Option<f64>,
    phi_stop: Option<f64>,
    phi_steps: Option<usize>,
}

/// How an input amplitude is fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InputField {
    Given(FieldAmplitude),
    /// Amplitude magnitude given, phase chosen for noiseless gain.
    Optimal(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Detection {
    Phase(f64),
    /// Read out along the classical output mean.
    AlignWithMean,
}

/// Linear grid with both end points, `steps` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    pub fn value(&self, k: usize) -> f64 {
        if self.steps == 1 {
            self.start
        } else {
            self.start + (self.stop - self.start) * k as f64 / (self.steps - 1) as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub variable: String,
    pub axis: Axis,
    pub phi_axis: Option<Axis>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossSpec {
    pub loss: LinkLoss,
    pub order: LinkOrder,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub fiber: FiberParams,
    pub pumps: PumpSpec,
    pub convention: PhaseConvention,
    pub signal: Option<InputField>,
    pub idler: Option<InputField>,
    pub loss: Option<LossSpec>,
    pub detection: Option<Detection>,
    pub scan: Option<ScanSpec>,
}

fn validation(what: impl Into<String>) -> CliError {
    CliError::Validation(what.into())
}

fn field(raw: &RawField, name: &str) -> Result<InputField, CliError> {
    let cartesian = raw.re.is_some() || raw.im.is_some();
    let polar = raw.amplitude.is_some() || raw.phase_rad.is_some();
    if cartesian && polar {
        return Err(validation(format!("[{name}] mixes re/im with amplitude_sqrt_W/phase_rad")));
    }
    let value = if polar {
        let a = raw
            .amplitude
            .ok_or_else(|| validation(format!("[{name}] amplitude_sqrt_W is required with phase_rad")))?;
        if a < 0.0 {
            return Err(validation(format!("[{name}] amplitude_sqrt_W must be >= 0")));
        }
        Complex64::from_polar(a, raw.phase_rad.unwrap_or(0.0))
    } else {
        Complex64::new(raw.re.unwrap_or(0.0), raw.im.unwrap_or(0.0))
    };
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(validation(format!("[{name}] amplitude is not finite")));
    }
    Ok(if raw.optimal {
        if raw.phase_rad.is_some() {
            return Err(validation(format!("[{name}] optimal = true fixes the phase; drop phase_rad")));
        }
        InputField::Optimal(value.norm())
    } else {
        InputField::Given(value)
    })
}

fn require(value: Option<f64>, key: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| validation(format!("[pumps] {key} is required for this configuration")))
}

fn pumps(raw: &RawPumps, config: ConfigTag) -> Result<PumpSpec, CliError> {
    let spec = match config {
        ConfigTag::A => {
            if raw.p2.is_some() || raw.theta20_rad.is_some() {
                return Err(validation("[pumps] P2_W/theta20_rad belong to configuration B"));
            }
            PumpSpec::A(PumpConfigA {
                p1: require(raw.p1, "P1_W")?,
                p3: require(raw.p3, "P3_W")?,
                theta10: raw.theta10_rad.unwrap_or(0.0),
                theta30: raw.theta30_rad.unwrap_or(0.0),
            })
        }
        ConfigTag::B => {
            if raw.p1.is_some() || raw.p3.is_some() || raw.theta10_rad.is_some() || raw.theta30_rad.is_some() {
                return Err(validation("[pumps] P1_W/P3_W/theta10_rad/theta30_rad belong to configuration A"));
            }
            PumpSpec::B(PumpConfigB {
                p2: require(raw.p2, "P2_W")?,
                theta20: raw.theta20_rad.unwrap_or(0.0),
            })
        }
    };
    match spec {
        PumpSpec::A(p) => p.validate()?,
        PumpSpec::B(p) => p.validate()?,
    }
    Ok(spec)
}

fn axis(start: f64, stop: f64, steps: usize, what: &str) -> Result<Axis, CliError> {
    if !(start.is_finite() && stop.is_finite()) {
        return Err(validation(format!("[scan] {what} range is not finite")));
    }
    if steps == 0 {
        return Err(validation(format!("[scan] {what} needs at least one step")));
    }
    Ok(Axis { start, stop, steps })
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        let fiber = FiberParams::new(raw.fiber.gamma, raw.fiber.delta_beta, raw.fiber.length)?;
        let pumps = pumps(&raw.pumps, raw.config.kind)?;
        let convention = match raw.config.phase_convention {
            ConventionTag::Propagated => PhaseConvention::Propagated,
            ConventionTag::MismatchOnly => PhaseConvention::MismatchOnly,
        };
        let signal = raw.signal.as_ref().map(|f| field(f, "signal")).transpose()?;
        let idler = raw.idler.as_ref().map(|f| field(f, "idler")).transpose()?;
        match pumps.configuration() {
            Configuration::A => {
                if idler.is_some() {
                    return Err(validation("[idler] has no meaning in configuration A"));
                }
            }
            Configuration::B => {
                if matches!(signal, Some(InputField::Optimal(_))) {
                    return Err(validation(
                        "[signal] optimal = true is configuration A only; set [idler] optimal = true instead",
                    ));
                }
            }
        }
        let loss = raw
            .loss
            .map(|l| -> Result<LossSpec, CliError> {
                let signal = LossChannel::new(l.tau)?;
                let idler = LossChannel::new(l.tau_idler.unwrap_or(l.tau))?;
                let order = match l.layout {
                    LayoutTag::AmpThenLoss => LinkOrder::AmpThenLoss,
                    LayoutTag::LossThenAmp => LinkOrder::LossThenAmp,
                };
                Ok(LossSpec {
                    loss: LinkLoss { signal, idler },
                    order,
                })
            })
            .transpose()?;
        let detection = raw
            .detection
            .map(|d| match (d.phi_rad, d.align_with_mean) {
                (Some(_), true) => Err(validation("[detection] phi_rad and align_with_mean are exclusive")),
                (Some(phi), false) if phi.is_finite() => Ok(Detection::Phase(phi)),
                (Some(_), false) => Err(validation("[detection] phi_rad is not finite")),
                (None, true) => Ok(Detection::AlignWithMean),
                (None, false) => Err(validation("[detection] needs phi_rad or align_with_mean = true")),
            })
            .transpose()?;
        let scan = raw
            .scan
            .map(|s| -> Result<ScanSpec, CliError> {
                let main = axis(s.start, s.stop, s.steps, &s.variable)?;
                let phi_axis = match (s.phi_start, s.phi_stop, s.phi_steps) {
                    (None, None, None) => None,
                    (start, stop, steps) => Some(axis(
                        start.unwrap_or(-PI),
                        stop.unwrap_or(PI),
                        steps.unwrap_or(s.steps),
                        "phi",
                    )?),
                };
                Ok(ScanSpec {
                    variable: s.variable,
                    axis: main,
                    phi_axis,
                })
            })
            .transpose()?;
        Ok(Self {
            fiber,
            pumps,
            convention,
            signal,
            idler,
            loss,
            detection,
            scan,
        })
    }

    pub fn configuration(&self) -> Configuration {
        self.pumps.configuration()
    }

    pub fn layout(&self) -> Option<(LinkLayout, LinkLoss)> {
        self.loss.map(|l| {
            (
                LinkLayout {
                    order: l.order,
                    config: self.configuration(),
                },
                l.loss,
            )
        })
    }

    /// Signal input with `optimal` resolved against `coeffs`.
    pub fn signal_amplitude(&self, coeffs: &MuNu) -> Result<Option<FieldAmplitude>, CliError> {
        Ok(match self.signal {
            None => None,
            Some(InputField::Given(a)) => Some(a),
            Some(InputField::Optimal(r)) => {
                Some(Complex64::from_polar(r, optimal_signal_phase_a(coeffs)?.theta_s0))
            }
        })
    }

    /// Idler input (configuration B) for a resolved signal. `optimal` keeps
    /// the magnitude of the signal, as the noiseless condition requires.
    pub fn idler_amplitude(&self, coeffs: &MuNu, signal: FieldAmplitude) -> Result<FieldAmplitude, CliError> {
        Ok(match self.idler {
            None => Complex64::new(0.0, 0.0),
            Some(InputField::Given(a)) => a,
            Some(InputField::Optimal(_)) => optimal_idler_b(coeffs, signal)?.idler.unwrap_or_default(),
        })
    }
}
