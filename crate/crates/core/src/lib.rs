//! Analytic machinery for phase-sensitive parametric amplification in a
//! third-order nonlinear fiber.
//!
//! Two pump layouts are covered:
//!
//! - configuration **A**: two non-degenerate pumps `A1`, `A3` amplify a
//!   frequency-degenerate signal/idler `A2`;
//! - configuration **B**: a degenerate pump `A2` amplifies a signal `A1` and
//!   an idler `A3`.
//!
//! In both cases the undepleted-pump solution is a one-mode Bogoliubov map
//! `A -> mu A + nu A*` ([`MuNu`]). Everything else in the crate is built on
//! that pair:
//!
//! - [`fwm`]: closed-form `(mu, nu)`, classical gains, quadrature transfers;
//! - [`ode`]: an adaptive RK4 integrator of the full nonlinear three-wave
//!   equations, used as an independent oracle for `(mu, nu)`;
//! - [`bloch_messiah`]: rotation / squeeze / rotation factorization of the
//!   2x2 quadrature transfer, closed form and numeric;
//! - [`optimum`]: input phases and idler amplitudes giving noiseless gain;
//! - [`noise`]: homodyne statistics, noise figures, 4x4 covariance
//!   propagation and the Duan inseparability witness;
//! - [`loss`]: lumped-loss links (amplifier then loss, loss then amplifier);
//! - [`montecarlo`]: seeded Gaussian phase-space sampling used to check the
//!   closed-form variances.
//!
//! Units are SI throughout (W, m, rad). Quadratures follow `A = X + iY` and
//! the vacuum variance is 1/4.

pub mod bloch_messiah;
pub mod error;
pub mod fwm;
pub mod loss;
pub mod montecarlo;
pub mod noise;
pub mod ode;
pub mod optimum;

pub use error::{PsaError, Result};
pub use fwm::{
    coeffs_a, coeffs_b, coeffs_b_with, Configuration, FiberParams, FieldAmplitude, MuNu,
    PhaseConvention, PumpConfigA, PumpConfigB, PumpSpec, QuadBasis, QuadTransfer,
};

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_pi(angle: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut a = angle.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    a
}

/// Signed distance between two angles modulo `period`, in `(-period/2, period/2]`.
pub fn angle_diff_mod(a: f64, b: f64, period: f64) -> f64 {
    let mut d = (a - b).rem_euclid(period);
    if d > period / 2.0 {
        d -= period;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wrap_pi_range() {
        assert_eq!(wrap_pi(PI), PI);
        assert!((wrap_pi(-PI) - PI).abs() < 1e-15);
        assert!((wrap_pi(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(wrap_pi(0.25), 0.25);
    }

    #[test]
    fn angle_diff_wraps() {
        assert!((angle_diff_mod(0.1, 2.0 * PI - 0.1, 2.0 * PI) - 0.2).abs() < 1e-14);
        assert!((angle_diff_mod(PI / 2.0 + 0.01, -PI / 2.0, PI) - 0.01).abs() < 1e-14);
    }
}
