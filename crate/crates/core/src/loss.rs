//! Lumped loss before or after the amplifier. Loss is a beamsplitter of
//! amplitude transmissivity `tau` coupling in a vacuum mode.
//!
//! Layouts are named by physical order: `AmpThenLoss` (AL) and
//! `LossThenAmp` (LA).

use crate::error::{finite, invalid, Result};
use crate::fwm::{Configuration, FieldAmplitude, MuNu};
use crate::noise::{lambda_phi, mean_a, mean_b, SnrReport, VACUUM_VARIANCE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossChannel {
    /// Amplitude transmissivity in `(0, 1]`.
    pub tau: f64,
    /// `sqrt(1 - tau^2)`.
    pub rho: f64,
}

impl LossChannel {
    pub fn new(tau: f64) -> Result<Self> {
        finite("tau", tau)?;
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(invalid("tau", format!("{tau} is outside (0, 1]")));
        }
        Ok(Self {
            tau,
            rho: (1.0 - tau * tau).sqrt(),
        })
    }

    pub fn lossless() -> Self {
        Self { tau: 1.0, rho: 0.0 }
    }

    /// Power transmission `tau^2`.
    pub fn transmission(&self) -> f64 {
        self.tau * self.tau
    }
}

/// Loss seen by each mode. Configuration A only uses `signal`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkLoss {
    pub signal: LossChannel,
    pub idler: LossChannel,
}

impl LinkLoss {
    pub fn symmetric(tau: f64) -> Result<Self> {
        let ch = LossChannel::new(tau)?;
        Ok(Self { signal: ch, idler: ch })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkOrder {
    AmpThenLoss,
    LossThenAmp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkLayout {
    pub order: LinkOrder,
    pub config: Configuration,
}

/// Coherent inputs. `alpha_i0` is ignored in configuration A.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LinkInputs {
    pub alpha_s0: FieldAmplitude,
    pub alpha_i0: FieldAmplitude,
}

/// Homodyne `(mean, variance)` of the signal at the end of the link.
pub fn lossy_homodyne_stats(
    coeffs: &MuNu,
    layout: LinkLayout,
    loss: &LinkLoss,
    inputs: &LinkInputs,
    phi: f64,
) -> Result<(f64, f64)> {
    coeffs.expect(layout.config)?;
    finite("phi", phi)?;
    for ch in [loss.signal, loss.idler] {
        LossChannel::new(ch.tau)?;
    }
    let ts = loss.signal.tau;
    let t2 = ts * ts;
    let vac = VACUUM_VARIANCE;
    // unit transmission takes the lossless expressions verbatim so that the
    // result is bit-identical to the bare amplifier
    let lossless = ts == 1.0 && (layout.config == Configuration::A || loss.idler.tau == 1.0);
    if lossless {
        return Ok(match layout.config {
            Configuration::A => (mean_a(coeffs, inputs.alpha_s0, phi), lambda_phi(coeffs, phi) * vac),
            Configuration::B => (
                mean_b(coeffs, inputs.alpha_s0, inputs.alpha_i0, phi),
                coeffs.mean_gain() * vac,
            ),
        });
    }
    Ok(match (layout.config, layout.order) {
        (Configuration::A, LinkOrder::AmpThenLoss) => (
            ts * mean_a(coeffs, inputs.alpha_s0, phi),
            (t2 * (lambda_phi(coeffs, phi) - 1.0) + 1.0) * vac,
        ),
        (Configuration::A, LinkOrder::LossThenAmp) => (
            ts * mean_a(coeffs, inputs.alpha_s0, phi),
            lambda_phi(coeffs, phi) * vac,
        ),
        (Configuration::B, LinkOrder::AmpThenLoss) => (
            ts * mean_b(coeffs, inputs.alpha_s0, inputs.alpha_i0, phi),
            (2.0 * t2 * coeffs.nu.norm_sqr() + 1.0) * vac,
        ),
        (Configuration::B, LinkOrder::LossThenAmp) => (
            mean_b(
                coeffs,
                inputs.alpha_s0 * ts,
                inputs.alpha_i0 * loss.idler.tau,
                phi,
            ),
            coeffs.mean_gain() * vac,
        ),
    })
}

/// Noise figure of the link, input SNR `4 |alpha_s0|^2`.
pub fn nf_with_loss(
    coeffs: &MuNu,
    layout: LinkLayout,
    loss: &LinkLoss,
    inputs: &LinkInputs,
    phi: f64,
) -> Result<SnrReport> {
    let a = inputs.alpha_s0.norm();
    if a == 0.0 || !a.is_finite() {
        return Err(invalid("alpha_s0", "signal amplitude must be nonzero and finite"));
    }
    let (mean, var) = lossy_homodyne_stats(coeffs, layout, loss, inputs, phi)?;
    Ok(SnrReport::new(a * a / VACUUM_VARIANCE, mean * mean / var))
}

/// Reference gain of the AL optimum: `G_max` in configuration A,
/// `|mu|^2 + |nu|^2` in configuration B.
pub fn reference_gain(coeffs: &MuNu) -> f64 {
    match coeffs.config {
        Configuration::A => coeffs.amplitude_gain().powi(2),
        Configuration::B => coeffs.mean_gain(),
    }
}

/// Optimum noise figure of the link.
///
/// AL: `1 - 1/G + 1/(G tau^2)`; LA: `1/tau^2`. In configuration B the value
/// is relative to the lossless optimum at the same inputs, since the
/// signal-referred lossless figure is not 1 there.
pub fn nf_optimum(coeffs: &MuNu, layout: LinkLayout, loss: &LinkLoss) -> Result<f64> {
    coeffs.expect(layout.config)?;
    LossChannel::new(loss.signal.tau)?;
    LossChannel::new(loss.idler.tau)?;
    let t2 = loss.signal.transmission();
    Ok(match (layout.order, layout.config) {
        (LinkOrder::AmpThenLoss, _) => {
            let g = reference_gain(coeffs);
            1.0 - 1.0 / g + 1.0 / (g * t2)
        }
        (LinkOrder::LossThenAmp, Configuration::A) => 1.0 / t2,
        (LinkOrder::LossThenAmp, Configuration::B) => {
            let (m, n) = (coeffs.mu_abs(), coeffs.nu_abs());
            ((m + n) / (loss.signal.tau * m + loss.idler.tau * n)).powi(2)
        }
    })
}

/// `NF_opt(AL) / NF_opt(LA) = (G tau^2 - tau^2 + 1) / G`.
pub fn layout_ratio(coeffs: &MuNu, loss: &LossChannel) -> Result<f64> {
    LossChannel::new(loss.tau)?;
    let g = reference_gain(coeffs);
    let t2 = loss.transmission();
    Ok((g * t2 - t2 + 1.0) / g)
}
