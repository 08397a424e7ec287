//! Bloch-Messiah (Euler) factorization of a 2x2 symplectic quadrature
//! transfer: `M = c R(theta) diag(g_x, g_y) R(phi)^T`.
//!
//! [`decompose`] reads the factors directly off `(mu, nu)`; [`numeric_oracle`]
//! recovers them from the matrix alone through the eigenvectors of `M^T M`.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::Matrix2;

use crate::error::{PsaError, Result};
use crate::fwm::{
    phase_rate_b, quad_transfer, growth_kernel, FiberParams, MuNu, PhaseConvention, PumpSpec, QuadBasis,
    QuadTransfer,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Rotation / squeeze / rotation factors.
///
/// `s_plus >= 1 >= s_minus` always. When `swapped` is set the amplified
/// gain sits on the `Y` quadrature (`diag(s_minus, s_plus)`), which is how
/// the `-` mode of configuration B is written with the same angles as the
/// `+` mode. [`BmFactors::canonical`] removes the swap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BmFactors {
    /// Output rotation, rad, in `(-pi/2, pi/2]`.
    pub theta: f64,
    /// Input rotation, rad, in `(-pi/2, pi/2]`.
    pub phi: f64,
    pub s_plus: f64,
    pub s_minus: f64,
    pub swapped: bool,
    pub c_sign: Sign,
}

pub fn rotation(angle: f64) -> Matrix2<f64> {
    let (s, c) = angle.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Folds `angle` into `(-pi/2, pi/2]`; returns the folded angle and whether
/// an odd number of `pi` shifts was applied.
fn fold_half_turn(angle: f64) -> (f64, bool) {
    let k = ((angle - FRAC_PI_2) / PI).ceil();
    let folded = angle - k * PI;
    // ceil puts exact multiples on the upper edge already; guard rounding
    let (folded, k) = if folded <= -FRAC_PI_2 {
        (folded + PI, k - 1.0)
    } else {
        (folded, k)
    };
    (folded, (k as i64).rem_euclid(2) == 1)
}

impl BmFactors {
    pub fn diagonal(&self) -> (f64, f64) {
        if self.swapped {
            (self.s_minus, self.s_plus)
        } else {
            (self.s_plus, self.s_minus)
        }
    }

    /// Folds both angles into `(-pi/2, pi/2]`, moving each odd half-turn
    /// into the sign factor.
    pub fn normalized(&self) -> Self {
        let (theta, t_odd) = fold_half_turn(self.theta);
        let (phi, p_odd) = fold_half_turn(self.phi);
        let mut c_sign = self.c_sign;
        if t_odd != p_odd {
            c_sign = c_sign.flip();
        }
        Self {
            theta,
            phi,
            c_sign,
            ..*self
        }
    }

    /// Unswapped form, `diag(s_plus, s_minus)`, using
    /// `R(t) diag(b, a) R(p)^T = R(t + pi/2) diag(a, b) R(p + pi/2)^T`.
    pub fn canonical(&self) -> Self {
        let unswapped = if self.swapped {
            Self {
                theta: self.theta + FRAC_PI_2,
                phi: self.phi + FRAC_PI_2,
                swapped: false,
                ..*self
            }
        } else {
            *self
        };
        unswapped.normalized()
    }
}

/// `c R(theta) diag(...) R(phi)^T`.
pub fn reconstruct(factors: &BmFactors) -> Matrix2<f64> {
    let (gx, gy) = factors.diagonal();
    rotation(factors.theta) * Matrix2::new(gx, 0.0, 0.0, gy) * rotation(factors.phi).transpose()
        * factors.c_sign.value()
}

fn max_abs(m: &Matrix2<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Picks the sign that makes the reconstruction match `target`.
fn fix_sign(mut factors: BmFactors, target: &Matrix2<f64>) -> BmFactors {
    factors.c_sign = Sign::Plus;
    let plus = max_abs(&(reconstruct(&factors) - target));
    factors.c_sign = Sign::Minus;
    let minus = max_abs(&(reconstruct(&factors) - target));
    if plus <= minus {
        factors.c_sign = Sign::Plus;
    }
    factors
}

/// Closed-form factors: `theta = (theta_mu + theta_nu) / 2`,
/// `phi = -(theta_mu - theta_nu) / 2`, gains `|mu| +- |nu|`. The minus basis
/// keeps both angles and swaps the gains. With `nu = 0` the rotations
/// collapse to `theta = theta_mu`, `phi = 0`.
pub fn decompose(coeffs: &MuNu, basis: QuadBasis) -> BmFactors {
    let (m, n) = (coeffs.mu_abs(), coeffs.nu_abs());
    let (theta, phi) = if n == 0.0 {
        (coeffs.theta_mu(), 0.0)
    } else {
        let (tm, tn) = (coeffs.theta_mu(), coeffs.theta_nu());
        ((tm + tn) / 2.0, -(tm - tn) / 2.0)
    };
    let raw = BmFactors {
        theta,
        phi,
        s_plus: m + n,
        s_minus: m - n,
        swapped: basis == QuadBasis::Minus,
        c_sign: Sign::Plus,
    };
    let target = quad_transfer(coeffs, basis).m;
    fix_sign(raw.normalized(), &target)
}

/// Factorization from the matrix alone: right singular vectors from the
/// symmetric 2x2 eigenproblem of `M^T M`, then `U = M W Sigma^-1`.
pub fn numeric_oracle(transfer: &QuadTransfer) -> Result<BmFactors> {
    let m = transfer.m;
    let det = m.determinant();
    if !det.is_finite() || (det - 1.0).abs() > 1e-8 {
        return Err(PsaError::InvalidParameter {
            name: "transfer",
            reason: format!("determinant {det} is not 1"),
        });
    }
    let mtm = m.transpose() * m;
    let (a, b, d) = (mtm[(0, 0)], mtm[(0, 1)], mtm[(1, 1)]);
    let half_trace = (a + d) / 2.0;
    let radius = ((a - d) / 2.0).hypot(b);
    let lambda_max = half_trace + radius;
    let s_plus = lambda_max.sqrt();
    let s_minus = det / s_plus;
    // eigenvector of the larger eigenvalue sits at angle phi
    let phi = 0.5 * (2.0 * b).atan2(a - d);
    let w = rotation(phi);
    let u = m * w * Matrix2::new(1.0 / s_plus, 0.0, 0.0, 1.0 / s_minus);
    let theta = u[(1, 0)].atan2(u[(0, 0)]);
    let raw = BmFactors {
        theta,
        phi,
        s_plus,
        s_minus,
        swapped: false,
        c_sign: Sign::Plus,
    };
    Ok(fix_sign(raw.normalized(), &m))
}

/// `(tan 2 theta, tan 2 phi)` evaluated from the experimental parameters.
///
/// `theta_g = theta10 + theta30 + 2 delta z` (A) or
/// `2 theta20 + 2 rate z` (B, with the rate of the chosen phase convention).
pub fn angles_from_params(
    fiber: &FiberParams,
    pumps: &PumpSpec,
    convention: PhaseConvention,
) -> Result<(f64, f64)> {
    fiber.validate()?;
    let z = fiber.length;
    let gamma = fiber.gamma;
    let (kappa, coupling_sq, pump_phase, rate) = match pumps {
        PumpSpec::A(p) => {
            p.validate()?;
            let sum = p.p1 + p.p3;
            (
                fiber.delta_beta + gamma * sum,
                4.0 * gamma * gamma * p.p1 * p.p3,
                p.theta10 + p.theta30,
                (3.0 * gamma * sum - fiber.delta_beta) / 2.0,
            )
        }
        PumpSpec::B(p) => {
            p.validate()?;
            (
                2.0 * gamma * p.p2 - fiber.delta_beta,
                gamma * gamma * p.p2 * p.p2,
                2.0 * p.theta20,
                phase_rate_b(fiber, p, convention),
            )
        }
    };
    let g_squared = coupling_sq - kappa * kappa / 4.0;
    let (c, s) = growth_kernel(g_squared, z);
    // (kappa / 2g) tanh(gz), real on both branches
    let t = kappa / 2.0 * s / c;
    let theta_g = pump_phase + 2.0 * rate * z;
    let tg = theta_g.tan();
    let t0 = pump_phase.tan();

    let den_sum = t + tg;
    if den_sum.abs() < 1e-14 {
        return Err(PsaError::PoleDetected {
            which: "tan 2theta",
            value: den_sum,
        });
    }
    let den_diff = -t + t0;
    if den_diff.abs() < 1e-14 {
        return Err(PsaError::PoleDetected {
            which: "tan 2phi",
            value: den_diff,
        });
    }
    let tan_2theta = (t * tg - 1.0) / den_sum;
    let tan_2phi = -(t * t0 + 1.0) / den_diff;
    Ok((tan_2theta, tan_2phi))
}
