//! Brute-force integration of the full three-wave mixing equations,
//! including self/cross phase modulation and pump depletion.
//!
//! The integrator is classic RK4 with step-doubling error control: each step
//! is taken once with `h` and twice with `h/2`, the difference estimates the
//! local error, and the step is halved or doubled accordingly.

use num_complex::Complex64;

use crate::error::{invalid, PsaError, Result};
use crate::fwm::{FiberParams, FieldAmplitude, MuNu, PumpSpec};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Fields `A1, A2, A3` at position `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldState3 {
    pub a1: FieldAmplitude,
    pub a2: FieldAmplitude,
    pub a3: FieldAmplitude,
    pub z: f64,
}

impl FieldState3 {
    pub fn new(a1: FieldAmplitude, a2: FieldAmplitude, a3: FieldAmplitude) -> Self {
        Self { a1, a2, a3, z: 0.0 }
    }

    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self::new(z, z, z)
    }

    fn fields(&self) -> [Complex64; 3] {
        [self.a1, self.a2, self.a3]
    }

    fn from_fields(f: [Complex64; 3], z: f64) -> Self {
        Self {
            a1: f[0],
            a2: f[1],
            a3: f[2],
            z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    /// Initial step, m.
    pub step: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            step: 1.0,
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            max_steps: 2_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(invalid("step", "must be a finite value > 0"));
        }
        if self.rel_tol.is_nan() || self.rel_tol <= 0.0 {
            return Err(invalid("rel_tol", "must be > 0"));
        }
        if self.abs_tol.is_nan() || self.abs_tol <= 0.0 {
            return Err(invalid("abs_tol", "must be > 0"));
        }
        if self.max_steps == 0 {
            return Err(invalid("max_steps", "must be > 0"));
        }
        Ok(())
    }
}

/// `|A1|^2 + |A2|^2 + |A3|^2`, conserved by the lossless equations.
pub fn total_power(state: &FieldState3) -> f64 {
    state.a1.norm_sqr() + state.a2.norm_sqr() + state.a3.norm_sqr()
}

fn derivative(f: &[Complex64; 3], z: f64, fiber: &FiberParams) -> [Complex64; 3] {
    let [a1, a2, a3] = *f;
    let (p1, p2, p3) = (a1.norm_sqr(), a2.norm_sqr(), a3.norm_sqr());
    let forward = Complex64::from_polar(1.0, fiber.delta_beta * z);
    let ig = I * fiber.gamma;
    [
        ig * ((p1 + 2.0 * p2 + 2.0 * p3) * a1 + a2 * a2 * a3.conj() * forward),
        ig * ((2.0 * p1 + p2 + 2.0 * p3) * a2 + 2.0 * a1 * a3 * a2.conj() * forward.conj()),
        ig * ((2.0 * p1 + 2.0 * p2 + p3) * a3 + a1.conj() * a2 * a2 * forward),
    ]
}

/// Right-hand side of the three coupled mixing equations at `state.z`.
/// The returned state holds `dA/dz` and the same `z`.
pub fn rhs(state: &FieldState3, fiber: &FiberParams) -> FieldState3 {
    FieldState3::from_fields(derivative(&state.fields(), state.z, fiber), state.z)
}

fn axpy(y: &[Complex64; 3], h: f64, k: &[Complex64; 3]) -> [Complex64; 3] {
    [y[0] + k[0] * h, y[1] + k[1] * h, y[2] + k[2] * h]
}

fn rk4_step(y: &[Complex64; 3], z: f64, h: f64, fiber: &FiberParams) -> [Complex64; 3] {
    let k1 = derivative(y, z, fiber);
    let k2 = derivative(&axpy(y, h / 2.0, &k1), z + h / 2.0, fiber);
    let k3 = derivative(&axpy(y, h / 2.0, &k2), z + h / 2.0, fiber);
    let k4 = derivative(&axpy(y, h, &k3), z + h, fiber);
    let mut out = *y;
    for i in 0..3 {
        out[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
    }
    out
}

/// Integrates from `initial.z` to `fiber.length`.
pub fn integrate(initial: &FieldState3, fiber: &FiberParams, cfg: &IntegratorConfig) -> Result<FieldState3> {
    fiber.validate()?;
    cfg.validate()?;
    let end = fiber.length;
    let mut z = initial.z;
    let mut y = initial.fields();
    if z >= end {
        return Ok(*initial);
    }
    let mut h = cfg.step.min(end - z);
    let mut steps = 0usize;
    while z < end {
        if steps >= cfg.max_steps {
            return Err(PsaError::MaxStepsExceeded { steps, z });
        }
        steps += 1;
        let last = z + h >= end;
        let h_try = if last { end - z } else { h };

        let full = rk4_step(&y, z, h_try, fiber);
        let mid = rk4_step(&y, z, h_try / 2.0, fiber);
        let half = rk4_step(&mid, z + h_try / 2.0, h_try / 2.0, fiber);

        let mut err: f64 = 0.0;
        for i in 0..3 {
            let scale = cfg.abs_tol + cfg.rel_tol * half[i].norm().max(y[i].norm());
            err = err.max((half[i] - full[i]).norm() / 15.0 / scale);
        }
        if err <= 1.0 {
            for i in 0..3 {
                y[i] = half[i] + (half[i] - full[i]) / 15.0;
            }
            z = if last { end } else { z + h_try };
            if err < 1.0 / 32.0 && !last {
                h = h_try * 2.0;
            }
        } else {
            h = h_try / 2.0;
            if h < f64::EPSILON * end.max(1.0) {
                return Err(PsaError::MaxStepsExceeded { steps, z });
            }
        }
    }
    Ok(FieldState3::from_fields(y, end))
}

/// Largest `|probe|^2 / P_pump` accepted by [`extract_mu_nu`].
pub const MAX_PROBE_RATIO: f64 = 1e-8;
/// Relative pump power change that flags depletion.
pub const DEPLETION_THRESHOLD: f64 = 1e-6;

/// Recovers `(mu, nu)` of the linearized signal map from two weak-probe
/// integrations of the full equations.
///
/// Configuration A probes the degenerate signal with `eps` and `i eps`.
/// Configuration B probes the signal with `eps` and the idler with `eps`
/// then `i eps`. No closed-form quantity is used.
pub fn extract_mu_nu(
    fiber: &FiberParams,
    pumps: &PumpSpec,
    probe_eps: f64,
    cfg: &IntegratorConfig,
) -> Result<MuNu> {
    fiber.validate()?;
    let pump_power = pumps.pump_power();
    if !(probe_eps > 0.0 && probe_eps.is_finite()) {
        return Err(invalid("probe_eps", "must be a finite value > 0"));
    }
    if pump_power > 0.0 && probe_eps * probe_eps / pump_power > MAX_PROBE_RATIO {
        return Err(PsaError::ProbeTooLarge {
            relative_change: probe_eps * probe_eps / pump_power,
        });
    }
    // The signal starts at |eps|; its absolute tolerance must scale with it.
    let cfg = IntegratorConfig {
        abs_tol: cfg.abs_tol.min(cfg.rel_tol * probe_eps),
        ..*cfg
    };
    let eps = Complex64::new(probe_eps, 0.0);

    let check = |out: &FieldState3, pump_in: f64| -> Result<()> {
        let pump_out = match pumps {
            PumpSpec::A(_) => out.a1.norm_sqr() + out.a3.norm_sqr(),
            PumpSpec::B(_) => out.a2.norm_sqr(),
        };
        if pump_in > 0.0 {
            let change = (pump_out - pump_in).abs() / pump_in;
            if change > DEPLETION_THRESHOLD {
                return Err(PsaError::ProbeTooLarge {
                    relative_change: change,
                });
            }
        }
        Ok(())
    };

    let (mu, nu) = match pumps {
        PumpSpec::A(p) => {
            p.validate()?;
            let run = |probe: Complex64| -> Result<Complex64> {
                let out = integrate(&FieldState3::new(p.a1(), probe, p.a3()), fiber, &cfg)?;
                check(&out, pump_power)?;
                Ok(out.a2)
            };
            // out1 = (mu + nu) eps, out2 = i (mu - nu) eps
            let sum = run(eps)? / eps;
            let diff = run(I * eps)? / (I * eps);
            ((sum + diff) / 2.0, (sum - diff) / 2.0)
        }
        PumpSpec::B(p) => {
            p.validate()?;
            let run = |idler: Complex64| -> Result<Complex64> {
                let out = integrate(&FieldState3::new(eps, p.a2(), idler), fiber, &cfg)?;
                check(&out, pump_power)?;
                Ok(out.a1)
            };
            // out1 = (mu + nu) eps, out2 = (mu - i nu) eps
            let o1 = run(eps)? / eps;
            let o2 = run(I * eps)? / eps;
            let nu = (o1 - o2) / Complex64::new(1.0, 1.0);
            (o1 - nu, nu)
        }
    };
    Ok(MuNu {
        mu,
        nu,
        config: pumps.configuration(),
        params: None,
    })
}

/// Target ceiling on `|signal out|^2 / P_pump` for [`extract_mu_nu_auto`].
pub const AUTO_OUTPUT_RATIO: f64 = 1e-14;

/// [`extract_mu_nu`] with the probe shrunk until the amplified probe stays
/// below `AUTO_OUTPUT_RATIO` of the pump power, so that the residual
/// nonlinearity sits well under the integration tolerance.
pub fn extract_mu_nu_auto(fiber: &FiberParams, pumps: &PumpSpec, cfg: &IntegratorConfig) -> Result<MuNu> {
    let pump_power = pumps.pump_power();
    if pump_power <= 0.0 {
        return extract_mu_nu(fiber, pumps, 1e-6, cfg);
    }
    let mut probe = 1e-7 * pump_power.sqrt();
    for _ in 0..40 {
        let coeffs = match extract_mu_nu(fiber, pumps, probe, cfg) {
            Ok(c) => c,
            Err(PsaError::ProbeTooLarge { .. }) => {
                probe *= 1e-3;
                continue;
            }
            Err(e) => return Err(e),
        };
        let out = (coeffs.mu.norm() + coeffs.nu.norm()) * probe;
        if out * out / pump_power <= AUTO_OUTPUT_RATIO {
            return Ok(coeffs);
        }
        let shrink = (out * out / pump_power / AUTO_OUTPUT_RATIO).sqrt() * 2.0;
        probe /= shrink;
    }
    Err(PsaError::ProbeTooLarge {
        relative_change: f64::NAN,
    })
}
