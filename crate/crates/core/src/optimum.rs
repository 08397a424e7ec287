//! Input conditions for noiseless amplification, plus the phase-insensitive
//! (vacuum idler) fallback of configuration B.

use num_complex::Complex64;

use crate::error::Result;
use crate::fwm::{Configuration, FieldAmplitude, MuNu};

/// Input that realizes the largest gain `(|mu| + |nu|)^2`. Returned as data;
/// nothing is applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalInput {
    /// Signal input phase, rad.
    pub theta_s0: f64,
    /// Matching idler amplitude (configuration B only).
    pub idler: Option<FieldAmplitude>,
    pub predicted_gain: f64,
}

/// `theta_s0 = (theta_nu - theta_mu) / 2`. The output then has modulus
/// `|A_s0| (|mu| + |nu|)`.
pub fn optimal_signal_phase_a(coeffs: &MuNu) -> Result<OptimalInput> {
    coeffs.expect(Configuration::A)?;
    Ok(OptimalInput {
        theta_s0: (coeffs.theta_nu() - coeffs.theta_mu()) / 2.0,
        idler: None,
        predicted_gain: coeffs.amplitude_gain().powi(2),
    })
}

/// `A_i0 = A_s0^* exp(-i (theta_mu - theta_nu))`, same power as the signal,
/// so `theta_mu - theta_nu + theta_s0 + theta_i0 = 0 (mod 2 pi)`.
pub fn optimal_idler_b(coeffs: &MuNu, a_s0: FieldAmplitude) -> Result<OptimalInput> {
    coeffs.expect(Configuration::B)?;
    let rel = coeffs.theta_mu() - coeffs.theta_nu();
    Ok(OptimalInput {
        theta_s0: a_s0.arg(),
        idler: Some(a_s0.conj() * Complex64::from_polar(1.0, -rel)),
        predicted_gain: coeffs.amplitude_gain().powi(2),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiaStats {
    pub gain: f64,
    pub description: &'static str,
}

/// Signal gain with vacuum idler input, `|mu|^2`, independent of the input
/// phase.
pub fn pia_stats(coeffs: &MuNu) -> Result<PiaStats> {
    coeffs.expect(Configuration::B)?;
    Ok(PiaStats {
        gain: coeffs.mu.norm_sqr(),
        description: "phase-insensitive gain |mu|^2 (idler input in vacuum)",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fwm::tests::{two_pump, degenerate_pump};
    use crate::fwm::{coeffs_a, coeffs_b, power_gain_a, power_gain_b, PumpConfigB};
    use crate::PsaError;
    use approx::assert_relative_eq;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn trivial_phase() {
        let c = MuNu::from_pair(Complex64::new(1.25, 0.0), Complex64::new(0.75, 0.0), Configuration::A).unwrap();
        assert_eq!(optimal_signal_phase_a(&c).unwrap().theta_s0, 0.0);
    }

    #[test]
    fn two_pump_optimal_gain() {
        let (fiber, pumps) = two_pump();
        let c = coeffs_a(&fiber, &pumps).unwrap();
        let opt = optimal_signal_phase_a(&c).unwrap();
        let g = power_gain_a(&c, opt.theta_s0);
        assert!((g - 13.3).abs() / 13.3 < 0.01);
        assert_relative_eq!(g, opt.predicted_gain, max_relative = 1e-12);
        // output modulus is |A_s0| (|mu| + |nu|)
        let a0 = Complex64::from_polar(0.8, opt.theta_s0);
        let out = c.mu * a0 + c.nu * a0.conj();
        assert_relative_eq!(out.norm(), 0.8 * c.amplitude_gain(), max_relative = 1e-12);
    }

    #[test]
    fn grid_argmax_matches() {
        let (fiber, pumps) = two_pump();
        let c = coeffs_a(&fiber, &pumps).unwrap();
        let opt = optimal_signal_phase_a(&c).unwrap();
        let n = 10_000;
        let step = TAU / n as f64;
        let (best, gbest) = (0..n)
            .map(|k| {
                let t = -PI + k as f64 * step;
                (t, power_gain_a(&c, t))
            })
            .fold((0.0, f64::MIN), |acc, x| if x.1 > acc.1 { x } else { acc });
        assert!(crate::angle_diff_mod(best, opt.theta_s0, PI).abs() <= step);
        assert!(gbest <= opt.predicted_gain * (1.0 + 1e-12));
    }

    #[test]
    fn trivial_idler() {
        let c = MuNu::from_pair(Complex64::new(1.25, 0.0), Complex64::new(0.75, 0.0), Configuration::B).unwrap();
        let opt = optimal_idler_b(&c, Complex64::new(0.3, 0.0)).unwrap();
        assert_eq!(opt.idler, Some(Complex64::new(0.3, 0.0)));
    }

    #[test]
    fn seeded_inputs_gain_both_modes() {
        let (fiber, pump) = degenerate_pump();
        let c = coeffs_b(&fiber, &pump).unwrap();
        let a_s0 = Complex64::from_polar(0.4, PI / 5.0);
        let opt = optimal_idler_b(&c, a_s0).unwrap();
        let a_i0 = opt.idler.unwrap();
        let out_s = c.mu * a_s0 + c.nu * a_i0.conj();
        let out_i = c.mu * a_i0 + c.nu * a_s0.conj();
        assert!((out_s.norm() / 0.4 - 2.05).abs() / 2.05 < 0.01);
        assert_relative_eq!(out_s.norm() / 0.4, c.amplitude_gain(), max_relative = 1e-12);
        assert_relative_eq!(out_i.norm() / 0.4, c.amplitude_gain(), max_relative = 1e-12);
        // output phases are theta_mu + theta_s0 and theta_mu + theta_i0
        assert!(crate::angle_diff_mod(out_s.arg(), c.theta_mu() + a_s0.arg(), TAU).abs() < 1e-12);
        assert!(crate::angle_diff_mod(out_i.arg(), c.theta_mu() + a_i0.arg(), TAU).abs() < 1e-12);
        let sum = c.theta_mu() - c.theta_nu() + a_s0.arg() + a_i0.arg();
        assert!(crate::angle_diff_mod(sum, 0.0, TAU).abs() < 1e-12);
    }

    #[test]
    fn grid_scan_two_phases() {
        let (fiber, pump) = degenerate_pump();
        let c = coeffs_b(&fiber, &pump).unwrap();
        let n = 200;
        let step = TAU / n as f64;
        let mut best = (0.0, 0.0, f64::MIN);
        for i in 0..n {
            for j in 0..n {
                let (ts, ti) = (i as f64 * step, j as f64 * step);
                let g = power_gain_b(&c, ts, ti, 1.0).unwrap();
                if g > best.2 {
                    best = (ts, ti, g);
                }
            }
        }
        let rel = c.theta_mu() - c.theta_nu() + best.0 + best.1;
        assert!(crate::angle_diff_mod(rel, 0.0, TAU).abs() <= 2.0 * step);
    }

    #[test]
    fn pia_gain() {
        assert_eq!(pia_stats(&MuNu::identity(Configuration::B)).unwrap().gain, 1.0);
        let (fiber, pump) = degenerate_pump();
        let c = coeffs_b(&fiber, &pump).unwrap();
        let g = pia_stats(&c).unwrap().gain;
        assert!((g - 1.608).abs() < 2e-3, "{g}");
        // eta = 0 is the vacuum idler; the signal phase drops out
        for k in 0..1000 {
            let t = k as f64 * TAU / 1000.0;
            assert_relative_eq!(power_gain_b(&c, t, 0.3, 0.0).unwrap(), c.mu.norm_sqr(), max_relative = 1e-15);
        }
    }

    #[test]
    fn config_checks() {
        let a = MuNu::identity(Configuration::A);
        assert!(matches!(pia_stats(&a), Err(PsaError::ConfigMismatch { .. })));
        assert!(optimal_idler_b(&a, Complex64::new(1.0, 0.0)).is_err());
        let b = coeffs_b(&degenerate_pump().0, &PumpConfigB::new(0.1)).unwrap();
        assert!(optimal_signal_phase_a(&b).is_err());
    }
}
