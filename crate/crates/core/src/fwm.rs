//! Undepleted-pump solutions of the three-wave four-wave-mixing system.
//!
//! Both pump layouts reduce to `A(z) = mu A(0) + nu A*(0)` (configuration A,
//! degenerate signal) or `A_s(z) = mu A_s0 + nu A_i0*` (configuration B,
//! signal/idler pair). The pair always satisfies `|mu|^2 - |nu|^2 = 1`.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{finite, invalid, PsaError, Result};

/// Complex field amplitude in sqrt(W), `A = |A| e^{i theta}`.
pub type FieldAmplitude = Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Below this value of `|g^2| z^2` the growth kernel switches to its Taylor
/// series, which removes the division by `g` at the branch point.
const SERIES_THRESHOLD: f64 = 1e-8;

/// Fiber parameters shared by both configurations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberParams {
    /// Nonlinear coefficient, W^-1 m^-1.
    pub gamma: f64,
    /// Linear phase mismatch `2 beta_2 - beta_1 - beta_3`, m^-1.
    pub delta_beta: f64,
    /// Propagation distance, m.
    pub length: f64,
}

impl FiberParams {
    pub fn new(gamma: f64, delta_beta: f64, length: f64) -> Result<Self> {
        let fiber = Self {
            gamma,
            delta_beta,
            length,
        };
        fiber.validate()?;
        Ok(fiber)
    }

    pub fn validate(&self) -> Result<()> {
        finite("gamma", self.gamma)?;
        finite("delta_beta", self.delta_beta)?;
        finite("length", self.length)?;
        if self.gamma <= 0.0 {
            return Err(invalid("gamma", "must be > 0"));
        }
        if self.length < 0.0 {
            return Err(invalid("length", "must be >= 0"));
        }
        Ok(())
    }

    pub fn with_length(&self, length: f64) -> Self {
        Self { length, ..*self }
    }
}

/// Two non-degenerate pumps (configuration A).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpConfigA {
    pub p1: f64,
    pub p3: f64,
    pub theta10: f64,
    pub theta30: f64,
}

impl PumpConfigA {
    /// Equal-power pumps with the phase reference `theta10 = theta30 = 0`.
    pub fn symmetric(power: f64) -> Self {
        Self {
            p1: power,
            p3: power,
            theta10: 0.0,
            theta30: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        finite("p1", self.p1)?;
        finite("p3", self.p3)?;
        finite("theta10", self.theta10)?;
        finite("theta30", self.theta30)?;
        if self.p1 < 0.0 {
            return Err(invalid("p1", "must be >= 0"));
        }
        if self.p3 < 0.0 {
            return Err(invalid("p3", "must be >= 0"));
        }
        Ok(())
    }

    pub fn a1(&self) -> FieldAmplitude {
        Complex64::from_polar(self.p1.sqrt(), self.theta10)
    }

    pub fn a3(&self) -> FieldAmplitude {
        Complex64::from_polar(self.p3.sqrt(), self.theta30)
    }
}

/// Degenerate pump (configuration B).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpConfigB {
    pub p2: f64,
    pub theta20: f64,
}

impl PumpConfigB {
    pub fn new(p2: f64) -> Self {
        Self { p2, theta20: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        finite("p2", self.p2)?;
        finite("theta20", self.theta20)?;
        if self.p2 < 0.0 {
            return Err(invalid("p2", "must be >= 0"));
        }
        Ok(())
    }

    pub fn a2(&self) -> FieldAmplitude {
        Complex64::from_polar(self.p2.sqrt(), self.theta20)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PumpSpec {
    A(PumpConfigA),
    B(PumpConfigB),
}

impl PumpSpec {
    pub fn configuration(&self) -> Configuration {
        match self {
            PumpSpec::A(_) => Configuration::A,
            PumpSpec::B(_) => Configuration::B,
        }
    }

    /// Total pump power, W.
    pub fn pump_power(&self) -> f64 {
        match self {
            PumpSpec::A(p) => p.p1 + p.p3,
            PumpSpec::B(p) => p.p2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Configuration {
    A,
    B,
}

/// Overall phase factor carried by configuration-B coefficients.
///
/// `Propagated` is `exp(i (gamma P2 + delta_beta / 2) z)`, the phase of the
/// raw signal field obtained by integrating the three-wave equations.
/// `MismatchOnly` is the bare `exp(i delta_beta z / 2)` factor without the pump
/// self-phase term. Magnitudes are identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseConvention {
    #[default]
    Propagated,
    MismatchOnly,
}

/// Intermediate quantities of the closed-form solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainParams {
    /// Nonlinear phase mismatch, m^-1.
    pub kappa: f64,
    /// Squared parametric gain coefficient, m^-2. Negative in the
    /// oscillatory regime.
    pub g_squared: f64,
    /// Rate of the overall phase factor (`delta` for A), m^-1.
    pub phase_rate: f64,
}

/// Bogoliubov pair of a one-mode amplifier, `a -> mu a + nu a^dagger`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuNu {
    pub mu: Complex64,
    pub nu: Complex64,
    pub config: Configuration,
    /// Present for closed-form coefficients, absent for extracted ones.
    pub params: Option<GainParams>,
}

impl MuNu {
    pub fn identity(config: Configuration) -> Self {
        Self {
            mu: Complex64::new(1.0, 0.0),
            nu: Complex64::new(0.0, 0.0),
            config,
            params: None,
        }
    }

    /// Builds a pair from raw values, checking `|mu|^2 - |nu|^2 = 1` to a
    /// relative tolerance of `1e-10 |mu|^2`.
    pub fn from_pair(mu: Complex64, nu: Complex64, config: Configuration) -> Result<Self> {
        finite("mu", mu.re)?;
        finite("mu", mu.im)?;
        finite("nu", nu.re)?;
        finite("nu", nu.im)?;
        let pair = Self {
            mu,
            nu,
            config,
            params: None,
        };
        let defect = pair.symplectic_defect();
        if defect > 1e-10 * mu.norm_sqr().max(1.0) {
            return Err(invalid(
                "mu/nu",
                format!("|mu|^2 - |nu|^2 - 1 = {defect:e}, pair is not symplectic"),
            ));
        }
        Ok(pair)
    }

    /// `| |mu|^2 - |nu|^2 - 1 |`.
    pub fn symplectic_defect(&self) -> f64 {
        (self.mu.norm_sqr() - self.nu.norm_sqr() - 1.0).abs()
    }

    pub fn mu_abs(&self) -> f64 {
        self.mu.norm()
    }

    pub fn nu_abs(&self) -> f64 {
        self.nu.norm()
    }

    /// `arg mu` in `(-pi, pi]`.
    pub fn theta_mu(&self) -> f64 {
        self.mu.arg()
    }

    /// `arg nu` in `(-pi, pi]`; 0 when `nu = 0`.
    pub fn theta_nu(&self) -> f64 {
        self.nu.arg()
    }

    /// `|mu| + |nu|`, the largest amplitude gain.
    pub fn amplitude_gain(&self) -> f64 {
        self.mu_abs() + self.nu_abs()
    }

    /// `|mu|^2 + |nu|^2`, the gain of an isotropic (quadrature-averaged)
    /// input.
    pub fn mean_gain(&self) -> f64 {
        self.mu.norm_sqr() + self.nu.norm_sqr()
    }

    pub(crate) fn expect(&self, config: Configuration) -> Result<()> {
        if self.config == config {
            Ok(())
        } else {
            Err(PsaError::ConfigMismatch {
                expected: config,
                found: self.config,
            })
        }
    }
}

/// `(cosh(g z), sinh(g z) / g)` as functions of `g^2`, continued to the
/// trigonometric branch for `g^2 < 0`.
pub fn growth_kernel(g_squared: f64, z: f64) -> (f64, f64) {
    let x = g_squared * z * z;
    if x.abs() < SERIES_THRESHOLD {
        let c = 1.0 + x / 2.0 + x * x / 24.0;
        let s = z * (1.0 + x / 6.0 + x * x / 120.0);
        (c, s)
    } else if g_squared > 0.0 {
        let g = g_squared.sqrt();
        ((g * z).cosh(), (g * z).sinh() / g)
    } else {
        let k = (-g_squared).sqrt();
        ((k * z).cos(), (k * z).sin() / k)
    }
}

/// Shared closed form: `mu = (c + i kappa/2 s) e^{i rate z}`,
/// `nu = i coupling s e^{i rate z}`.
fn assemble(
    kappa: f64,
    coupling: Complex64,
    phase_rate: f64,
    z: f64,
    config: Configuration,
) -> MuNu {
    let g_squared = coupling.norm_sqr() - kappa * kappa / 4.0;
    let (c, s) = growth_kernel(g_squared, z);
    let phase = Complex64::from_polar(1.0, phase_rate * z);
    MuNu {
        mu: Complex64::new(c, kappa / 2.0 * s) * phase,
        nu: I * coupling * s * phase,
        config,
        params: Some(GainParams {
            kappa,
            g_squared,
            phase_rate,
        }),
    }
}

/// Configuration A coefficients: `kappa = dbeta + gamma (P1 + P3)`,
/// `g^2 = 4 gamma^2 P1 P3 - kappa^2 / 4`,
/// `delta = (3 gamma (P1 + P3) - dbeta) / 2`.
pub fn coeffs_a(fiber: &FiberParams, pumps: &PumpConfigA) -> Result<MuNu> {
    fiber.validate()?;
    pumps.validate()?;
    let gamma = fiber.gamma;
    let sum = pumps.p1 + pumps.p3;
    let kappa = fiber.delta_beta + gamma * sum;
    let delta = (3.0 * gamma * sum - fiber.delta_beta) / 2.0;
    let coupling = 2.0 * gamma * pumps.a1() * pumps.a3();
    Ok(assemble(kappa, coupling, delta, fiber.length, Configuration::A))
}

/// Configuration B coefficients with the propagated phase convention.
pub fn coeffs_b(fiber: &FiberParams, pump: &PumpConfigB) -> Result<MuNu> {
    coeffs_b_with(fiber, pump, PhaseConvention::Propagated)
}

/// Configuration B coefficients: `kappa = 2 gamma P2 - dbeta`,
/// `g^2 = gamma^2 P2^2 - kappa^2 / 4`, coupling `gamma A2(0)^2`.
pub fn coeffs_b_with(
    fiber: &FiberParams,
    pump: &PumpConfigB,
    convention: PhaseConvention,
) -> Result<MuNu> {
    fiber.validate()?;
    pump.validate()?;
    let gamma = fiber.gamma;
    let kappa = 2.0 * gamma * pump.p2 - fiber.delta_beta;
    let rate = phase_rate_b(fiber, pump, convention);
    let a2 = pump.a2();
    let coupling = gamma * a2 * a2;
    Ok(assemble(kappa, coupling, rate, fiber.length, Configuration::B))
}

pub(crate) fn phase_rate_b(fiber: &FiberParams, pump: &PumpConfigB, convention: PhaseConvention) -> f64 {
    match convention {
        PhaseConvention::Propagated => fiber.gamma * pump.p2 + fiber.delta_beta / 2.0,
        PhaseConvention::MismatchOnly => fiber.delta_beta / 2.0,
    }
}

/// Classical power gain of the degenerate signal (configuration A).
pub fn power_gain_a(coeffs: &MuNu, theta_s0: f64) -> f64 {
    let (m, n) = (coeffs.mu_abs(), coeffs.nu_abs());
    let g = m * m + n * n + 2.0 * m * n * (coeffs.theta_mu() - coeffs.theta_nu() + 2.0 * theta_s0).cos();
    g.max(0.0)
}

/// Power gain written through the relative phase
/// `xi = 2 theta_s0 - theta10 - theta30`, from the experimental parameters.
pub fn power_gain_a_from_params(fiber: &FiberParams, pumps: &PumpConfigA, theta_s0: f64) -> Result<f64> {
    fiber.validate()?;
    pumps.validate()?;
    let gamma = fiber.gamma;
    let kappa = fiber.delta_beta + gamma * (pumps.p1 + pumps.p3);
    let root = (pumps.p1 * pumps.p3).sqrt();
    let g_squared = 4.0 * gamma * gamma * pumps.p1 * pumps.p3 - kappa * kappa / 4.0;
    let xi = 2.0 * theta_s0 - pumps.theta10 - pumps.theta30;
    let (c, s) = growth_kernel(g_squared, fiber.length);
    // sinh^2(gz) = (s g)^2 and sinh(2gz) = 2 c s g, so the 1/g^2 and 1/g
    // prefactors cancel against the kernel.
    let sinh2 = s * s * g_squared;
    let bracket_over_g2 = kappa * kappa + 16.0 * gamma * gamma * pumps.p1 * pumps.p3
        + 8.0 * kappa * gamma * root * xi.cos();
    Ok(1.0 + sinh2 + bracket_over_g2 / 4.0 * s * s + 2.0 * gamma * root * xi.sin() * 2.0 * c * s)
}

/// Signal power gain of configuration B with `eta = sqrt(P_i0 / P_s0)`.
pub fn power_gain_b(coeffs: &MuNu, theta_s0: f64, theta_i0: f64, eta: f64) -> Result<f64> {
    finite("eta", eta)?;
    if eta < 0.0 {
        return Err(invalid("eta", "must be >= 0"));
    }
    let (m, n) = (coeffs.mu_abs(), coeffs.nu_abs());
    let cos = (coeffs.theta_mu() - coeffs.theta_nu() + theta_s0 + theta_i0).cos();
    Ok((m * m + eta * eta * n * n + 2.0 * eta * m * n * cos).max(0.0))
}

/// Idler power gain of configuration B: the signal formula with `eta -> 1/eta`.
pub fn idler_gain_b(coeffs: &MuNu, theta_s0: f64, theta_i0: f64, eta: f64) -> Result<f64> {
    finite("eta", eta)?;
    if eta <= 0.0 {
        return Err(invalid("eta", "must be > 0 for the idler gain"));
    }
    power_gain_b(coeffs, theta_s0, theta_i0, 1.0 / eta)
}

/// `((|mu| + |nu|)^2, (|mu| - |nu|)^2)`.
pub fn gain_extrema(coeffs: &MuNu) -> (f64, f64) {
    let (m, n) = (coeffs.mu_abs(), coeffs.nu_abs());
    ((m + n).powi(2), (m - n).powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadBasis {
    Signal,
    Plus,
    Minus,
}

/// Real 2x2 transfer acting on `(X, Y)` with `A = X + iY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTransfer {
    pub m: Matrix2<f64>,
    pub basis: QuadBasis,
}

impl QuadTransfer {
    pub fn det(&self) -> f64 {
        self.m.determinant()
    }

    pub fn apply(&self, field: FieldAmplitude) -> FieldAmplitude {
        let v = self.m * nalgebra::Vector2::new(field.re, field.im);
        Complex64::new(v[0], v[1])
    }
}

/// Quadrature form of `A -> mu A +/- nu A*`; the minus basis flips `nu`.
pub fn quad_transfer(coeffs: &MuNu, basis: QuadBasis) -> QuadTransfer {
    let nu = match basis {
        QuadBasis::Signal | QuadBasis::Plus => coeffs.nu,
        QuadBasis::Minus => -coeffs.nu,
    };
    let sum = coeffs.mu + nu;
    let diff = coeffs.mu - nu;
    QuadTransfer {
        m: Matrix2::new(sum.re, -diff.im, sum.im, diff.re),
        basis,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmDirection {
    /// `(A_s, A_i) -> (A_+, A_-)`
    ToPm,
    /// `(A_+, A_-) -> (A_s, A_i)`
    FromPm,
}

/// Sum/difference change of basis `A_+- = (A_s +- A_i) / sqrt 2`. The map is
/// its own inverse, so both directions share the same formula.
pub fn pm_basis(
    first: FieldAmplitude,
    second: FieldAmplitude,
    _direction: PmDirection,
) -> (FieldAmplitude, FieldAmplitude) {
    (
        (first + second) * FRAC_1_SQRT_2,
        (first - second) * FRAC_1_SQRT_2,
    )
}

/// Configuration-B parameters that reproduce a configuration-A amplifier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappedParams {
    /// `2 sqrt(P1 P3)`.
    pub pump: PumpConfigB,
    /// Linear mismatch giving the same `kappa` in configuration B.
    pub delta_beta: f64,
    /// Overall phase rate of configuration A (`delta`).
    pub phase_rate_a: f64,
    /// The `dbeta / 2` rate that replaces `delta`.
    pub phase_rate_b: f64,
}

/// Maps `2 sqrt(P1 P3) -> P2`, `theta10 + theta30 -> 2 theta20` and records
/// the `delta -> dbeta / 2` phase substitution. The linear mismatch is
/// chosen so that both configurations share the same `kappa` and `g^2`.
pub fn map_a_to_b_params(fiber: &FiberParams, pumps: &PumpConfigA) -> Result<MappedParams> {
    fiber.validate()?;
    pumps.validate()?;
    let gamma = fiber.gamma;
    let p2 = 2.0 * (pumps.p1 * pumps.p3).sqrt();
    let kappa_a = fiber.delta_beta + gamma * (pumps.p1 + pumps.p3);
    let delta_beta = 2.0 * gamma * p2 - kappa_a;
    Ok(MappedParams {
        pump: PumpConfigB {
            p2,
            theta20: (pumps.theta10 + pumps.theta30) / 2.0,
        },
        delta_beta,
        phase_rate_a: (3.0 * gamma * (pumps.p1 + pumps.p3) - fiber.delta_beta) / 2.0,
        phase_rate_b: delta_beta / 2.0,
    })
}
