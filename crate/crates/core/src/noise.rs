//! Gaussian quantum layer: homodyne statistics, noise figures and the
//! two-mode covariance of configuration B.
//!
//! Quadratures are `x = Re A`, `y = Im A`, homodyne at phase `phi` reads
//! `x cos(phi) + y sin(phi)`. Two-mode vectors are ordered
//! `(x_s, x_i, y_s, y_i)`. Vacuum variance is [`VACUUM_VARIANCE`].

use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64;

use crate::error::{finite, invalid, Result};
use crate::fwm::{Configuration, FieldAmplitude, MuNu};
use crate::optimum::optimal_idler_b;

pub const VACUUM_VARIANCE: f64 = 0.25;

/// Gaussian state with quadratures ordered `(x_1..x_n, y_1..y_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HomodyneMode {
    Signal,
    Idler,
    /// `(x_{s,phase} + x_{i,idler_phase}) / sqrt 2`.
    JointSum { idler_phase: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneSetting {
    pub phase: f64,
    pub mode: HomodyneMode,
}

impl HomodyneSetting {
    pub fn signal(phase: f64) -> Self {
        Self {
            phase,
            mode: HomodyneMode::Signal,
        }
    }
}

/// `J = [[0, I], [-I, 0]]` for `modes` modes.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        j[(k, modes + k)] = 1.0;
        j[(modes + k, k)] = -1.0;
    }
    j
}

/// Symplectic eigenvalues of a covariance matrix, ascending: the moduli of
/// the eigenvalues of `J cov`, which come in `+- i nu` pairs.
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = cov.nrows();
    if n != cov.ncols() || !n.is_multiple_of(2) || n == 0 {
        return Err(invalid("cov", format!("{}x{} is not an even square matrix", n, cov.ncols())));
    }
    let jc = symplectic_form(n / 2) * cov;
    let mut nus: Vec<f64> = jc
        .complex_eigenvalues()
        .iter()
        .filter(|e| e.im > 0.0)
        .map(|e| e.im)
        .collect();
    if nus.len() != n / 2 {
        return Err(invalid("cov", "spectrum of J cov is not purely imaginary"));
    }
    nus.sort_by(f64::total_cmp);
    Ok(nus)
}

impl GaussianState {
    pub fn vacuum(modes: usize) -> Self {
        Self {
            mean: DVector::zeros(2 * modes),
            cov: DMatrix::identity(2 * modes, 2 * modes) * VACUUM_VARIANCE,
        }
    }

    pub fn coherent(amplitudes: &[FieldAmplitude]) -> Self {
        let n = amplitudes.len();
        let mut state = Self::vacuum(n);
        for (k, a) in amplitudes.iter().enumerate() {
            state.mean[k] = a.re;
            state.mean[n + k] = a.im;
        }
        state
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    /// Symmetric within `1e-12` (relative to the largest entry) and
    /// physical: every symplectic eigenvalue `>= 1/4 - 1e-10`.
    pub fn validate(&self) -> Result<()> {
        let n = self.mean.len();
        if n == 0 || !n.is_multiple_of(2) || self.cov.nrows() != n || self.cov.ncols() != n {
            return Err(invalid("state", "mean and covariance dimensions disagree"));
        }
        for v in self.mean.iter().chain(self.cov.iter()) {
            finite("state", *v)?;
        }
        let scale = self.cov.amax().max(1.0);
        if (&self.cov - self.cov.transpose()).amax() > 1e-12 * scale {
            return Err(invalid("cov", "not symmetric"));
        }
        let floor = symplectic_eigenvalues(&self.cov)?[0];
        if floor < VACUUM_VARIANCE - 1e-10 * scale {
            return Err(invalid(
                "cov",
                format!("symplectic eigenvalue {floor} below the vacuum level"),
            ));
        }
        Ok(())
    }

    /// `mean -> S mean`, `cov -> S cov S^T`.
    pub fn transform(&self, s: &DMatrix<f64>) -> Self {
        Self {
            mean: s * &self.mean,
            cov: s * &self.cov * s.transpose(),
        }
    }

    fn readout(&self, setting: HomodyneSetting) -> Result<DVector<f64>> {
        let n = self.modes();
        let mut r = DVector::zeros(2 * n);
        let (c, s) = (setting.phase.cos(), setting.phase.sin());
        match setting.mode {
            HomodyneMode::Signal => {
                r[0] = c;
                r[n] = s;
            }
            HomodyneMode::Idler | HomodyneMode::JointSum { .. } if n < 2 => {
                return Err(invalid("setting", "idler readout on a single-mode state"));
            }
            HomodyneMode::Idler => {
                r[1] = c;
                r[n + 1] = s;
            }
            HomodyneMode::JointSum { idler_phase } => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                r[0] = c * h;
                r[n] = s * h;
                r[1] = idler_phase.cos() * h;
                r[n + 1] = idler_phase.sin() * h;
            }
        }
        Ok(r)
    }

    /// `(mean, variance)` of the selected homodyne quadrature.
    pub fn homodyne(&self, setting: HomodyneSetting) -> Result<(f64, f64)> {
        let r = self.readout(setting)?;
        Ok((r.dot(&self.mean), (&self.cov * &r).dot(&r)))
    }
}

/// Input and output SNR with `noise_figure = snr_in / snr_out` (linear).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrReport {
    pub snr_in: f64,
    pub snr_out: f64,
    pub noise_figure: f64,
}

impl SnrReport {
    /// `snr_out = 0` gives an infinite noise figure.
    pub fn new(snr_in: f64, snr_out: f64) -> Self {
        let noise_figure = if snr_out == 0.0 { f64::INFINITY } else { snr_in / snr_out };
        Self {
            snr_in,
            snr_out,
            noise_figure,
        }
    }

    pub(crate) fn from_stats(snr_in: f64, mean: f64, variance: f64) -> Self {
        Self::new(snr_in, mean * mean / variance)
    }
}

fn require_signal(alpha: FieldAmplitude) -> Result<f64> {
    finite("alpha_s0", alpha.re)?;
    finite("alpha_s0", alpha.im)?;
    let a = alpha.norm();
    if a == 0.0 {
        return Err(invalid("alpha_s0", "signal amplitude must be nonzero"));
    }
    Ok(a)
}

/// `2 |mu||nu| cos(theta_mu + theta_nu - 2 phi) + |mu|^2 + |nu|^2`, four
/// times the output variance of the configuration-A signal.
pub fn lambda_phi(coeffs: &MuNu, phi: f64) -> f64 {
    let (m, n) = (coeffs.mu_abs(), coeffs.nu_abs());
    2.0 * m * n * (coeffs.theta_mu() + coeffs.theta_nu() - 2.0 * phi).cos() + m * m + n * n
}

/// Output mean of `x_phi` for a configuration-A input `alpha_s0`.
pub(crate) fn mean_a(coeffs: &MuNu, alpha_s0: FieldAmplitude, phi: f64) -> f64 {
    let ts0 = alpha_s0.arg();
    alpha_s0.norm()
        * (coeffs.mu_abs() * (coeffs.theta_mu() + ts0 - phi).cos()
            + coeffs.nu_abs() * (coeffs.theta_nu() - ts0 - phi).cos())
}

/// Output mean of the signal `x_phi` in configuration B.
pub(crate) fn mean_b(coeffs: &MuNu, alpha_s0: FieldAmplitude, alpha_i0: FieldAmplitude, phi: f64) -> f64 {
    coeffs.mu_abs() * alpha_s0.norm() * (coeffs.theta_mu() + alpha_s0.arg() - phi).cos()
        + coeffs.nu_abs() * alpha_i0.norm() * (coeffs.theta_nu() - alpha_i0.arg() - phi).cos()
}

/// Homodyne `(mean, variance)` of the configuration-A output.
pub fn homodyne_stats_a(coeffs: &MuNu, alpha_s0: FieldAmplitude, phi: f64) -> Result<(f64, f64)> {
    coeffs.expect(Configuration::A)?;
    finite("phi", phi)?;
    Ok((mean_a(coeffs, alpha_s0, phi), lambda_phi(coeffs, phi) * VACUUM_VARIANCE))
}

/// Configuration-A noise figure for input `alpha_s0` (its phase is
/// `theta_s0`) and detection phase `phi`. Independent of `|alpha_s0|`.
pub fn noise_figure_a(coeffs: &MuNu, alpha_s0: FieldAmplitude, phi: f64) -> Result<SnrReport> {
    let a = require_signal(alpha_s0)?;
    let (mean, var) = homodyne_stats_a(coeffs, alpha_s0, phi)?;
    Ok(SnrReport::from_stats(a * a / VACUUM_VARIANCE, mean, var))
}

/// `S_tot` acting on `(x_s, x_i, y_s, y_i)`.
pub fn build_s_tot(coeffs: &MuNu) -> Result<Matrix4<f64>> {
    coeffs.expect(Configuration::B)?;
    let (mu, nu) = (coeffs.mu, coeffs.nu);
    #[rustfmt::skip]
    let s = Matrix4::new(
        mu.re, nu.re, -mu.im, nu.im,
        nu.re, mu.re, nu.im, -mu.im,
        mu.im, nu.im, mu.re, -nu.re,
        nu.im, mu.im, -nu.re, mu.re,
    );
    Ok(s)
}

/// Rotation by `theta_s`, `theta_i` followed by the sum/difference of the
/// rotated modes. Row 0 is the joint homodyne quadrature.
pub fn s_transf(theta_s: f64, theta_i: f64) -> Matrix4<f64> {
    let (ss, cs) = theta_s.sin_cos();
    let (si, ci) = theta_i.sin_cos();
    #[rustfmt::skip]
    let m = Matrix4::new(
        cs, ci, ss, si,
        cs, -ci, ss, -si,
        -ss, -si, cs, ci,
        -ss, si, cs, -ci,
    );
    m * std::f64::consts::FRAC_1_SQRT_2
}

fn dyn4(m: &Matrix4<f64>) -> DMatrix<f64> {
    DMatrix::from_iterator(4, 4, m.iter().copied())
}

/// Joint-mode noise figure of configuration B at the optimal idler input
/// (same power as the signal). The output side is read through
/// [`s_transf`] at `theta_s = theta_mu + theta_s0`,
/// `theta_i = theta_mu + theta_i0`.
pub fn joint_mode_nf_b(coeffs: &MuNu, alpha_s0: FieldAmplitude) -> Result<SnrReport> {
    require_signal(alpha_s0)?;
    let opt = optimal_idler_b(coeffs, alpha_s0)?;
    let alpha_i0 = opt.idler.unwrap_or_default();
    let input = GaussianState::coherent(&[alpha_s0, alpha_i0]);
    let (m_in, v_in) = input.homodyne(HomodyneSetting {
        phase: alpha_s0.arg(),
        mode: HomodyneMode::JointSum {
            idler_phase: alpha_i0.arg(),
        },
    })?;
    let output = input.transform(&dyn4(&build_s_tot(coeffs)?));
    let rotated = output.transform(&dyn4(&s_transf(
        coeffs.theta_mu() + alpha_s0.arg(),
        coeffs.theta_mu() + alpha_i0.arg(),
    )));
    Ok(SnrReport::new(
        m_in * m_in / v_in,
        rotated.mean[0] * rotated.mean[0] / rotated.cov[(0, 0)],
    ))
}

/// Signal-only detection in configuration B under both input-SNR
/// conventions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalOnlyNf {
    /// Input SNR of the joint quadrature, `2 (|alpha_s0| + |alpha_i0|)^2`.
    pub idler_counted: SnrReport,
    /// Input SNR of the signal alone, `4 |alpha_s0|^2`.
    pub signal_counted: SnrReport,
}

/// Noise figure of the output signal quadrature `x_phi` alone. The output
/// variance is `(|mu|^2 + |nu|^2) / 4` for any `phi`.
pub fn signal_only_nf_b(
    coeffs: &MuNu,
    alpha_s0: FieldAmplitude,
    alpha_i0: FieldAmplitude,
    phi: f64,
) -> Result<SignalOnlyNf> {
    coeffs.expect(Configuration::B)?;
    let a = require_signal(alpha_s0)?;
    finite("alpha_i0", alpha_i0.re)?;
    finite("alpha_i0", alpha_i0.im)?;
    finite("phi", phi)?;
    let mean = mean_b(coeffs, alpha_s0, alpha_i0, phi);
    let var = coeffs.mean_gain() * VACUUM_VARIANCE;
    let joint = (a + alpha_i0.norm()).powi(2) / 2.0 / VACUUM_VARIANCE;
    Ok(SignalOnlyNf {
        idler_counted: SnrReport::from_stats(joint, mean, var),
        signal_counted: SnrReport::from_stats(a * a / VACUUM_VARIANCE, mean, var),
    })
}

/// Vacuum idler input, detection at `theta_mu + theta_s0`:
/// `NF = (|mu|^2 + |nu|^2) / |mu|^2`.
pub fn vacuum_idler_nf_b(coeffs: &MuNu, alpha_s0: FieldAmplitude) -> Result<SnrReport> {
    let phi = coeffs.theta_mu() + alpha_s0.arg();
    Ok(signal_only_nf_b(coeffs, alpha_s0, Complex64::new(0.0, 0.0), phi)?.signal_counted)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovBasis {
    SignalIdler,
    /// `(x_+, x_-, y_+, y_-)` after rotating both `+-` modes by `-theta`.
    RotatedPm,
}

/// `(x_s, x_i, y_s, y_i) -> (x_+, x_-, y_+, y_-)`.
pub fn pm_change_of_basis() -> Matrix4<f64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    #[rustfmt::skip]
    let m = Matrix4::new(
        h, h, 0.0, 0.0,
        h, -h, 0.0, 0.0,
        0.0, 0.0, h, h,
        0.0, 0.0, h, -h,
    );
    m
}

/// Rotation of both modes by `-theta` in `(x_1, x_2, y_1, y_2)` ordering.
pub fn counter_rotation(theta: f64) -> Matrix4<f64> {
    let (s, c) = theta.sin_cos();
    #[rustfmt::skip]
    let m = Matrix4::new(
        c, 0.0, s, 0.0,
        0.0, c, 0.0, s,
        -s, 0.0, c, 0.0,
        0.0, -s, 0.0, c,
    );
    m
}

/// Output covariance for a coherent (or vacuum) two-mode input.
pub fn output_covariance(coeffs: &MuNu, basis: CovBasis) -> Result<Matrix4<f64>> {
    let s = build_s_tot(coeffs)?;
    let sigma = s * s.transpose() * VACUUM_VARIANCE;
    Ok(match basis {
        CovBasis::SignalIdler => sigma,
        CovBasis::RotatedPm => {
            let theta = (coeffs.theta_mu() + coeffs.theta_nu()) / 2.0;
            let t = counter_rotation(theta) * pm_change_of_basis();
            t * sigma * t.transpose()
        }
    })
}

/// Left-hand side of the Duan inseparability test on the rotated `+-`
/// modes, `Var(x_-) + Var(y_+) = (|mu| - |nu|)^2 / 2`. Below 1/2 means
/// signal and idler are entangled.
pub fn duan_lhs(coeffs: &MuNu) -> Result<f64> {
    coeffs.expect(Configuration::B)?;
    // (|mu| - |nu|)(|mu| + |nu|) = 1; the reciprocal form avoids cancellation
    Ok(0.5 / coeffs.amplitude_gain().powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fwm::tests::{two_pump, degenerate_pump};
    use crate::fwm::{coeffs_a, coeffs_b, PumpConfigB};
    use crate::optimum::optimal_signal_phase_a;
    use approx::assert_relative_eq;
    use std::f64::consts::{PI, TAU};

    fn two_pump_coeffs() -> MuNu {
        let (f, p) = two_pump();
        coeffs_a(&f, &p).unwrap()
    }

    fn degenerate_pump_coeffs() -> MuNu {
        let (f, p) = degenerate_pump();
        coeffs_b(&f, &p).unwrap()
    }

    fn with_mu_sq(mu_sq: f64, config: Configuration) -> MuNu {
        let mu = Complex64::from_polar(mu_sq.sqrt(), 0.3);
        let nu = Complex64::from_polar((mu_sq - 1.0).sqrt(), -1.1);
        MuNu::from_pair(mu, nu, config).unwrap()
    }

    #[test]
    fn vacuum_preserved() {
        let c = MuNu::identity(Configuration::A);
        for k in 0..16 {
            let phi = k as f64 * 0.4;
            assert_eq!(homodyne_stats_a(&c, Complex64::new(0.0, 0.0), phi).unwrap().1, 0.25);
        }
    }

    #[test]
    fn optimal_detection_stats() {
        let c = two_pump_coeffs();
        let opt = optimal_signal_phase_a(&c).unwrap();
        let a = Complex64::from_polar(0.7, opt.theta_s0);
        let theta = (c.theta_mu() + c.theta_nu()) / 2.0;
        let (mean, var) = homodyne_stats_a(&c, a, theta).unwrap();
        assert_relative_eq!(var, c.amplitude_gain().powi(2) / 4.0, max_relative = 1e-12);
        assert_relative_eq!(mean, 0.7 * c.amplitude_gain(), max_relative = 1e-12);
        let nf = noise_figure_a(&c, a, theta).unwrap();
        assert!((nf.noise_figure - 1.0).abs() < 1e-10);
    }

    #[test]
    fn closed_form_matches_state_propagation() {
        let c = two_pump_coeffs();
        let a = Complex64::new(0.8, 0.1);
        let m = crate::fwm::quad_transfer(&c, crate::QuadBasis::Signal).m;
        let s = DMatrix::from_iterator(2, 2, m.iter().copied());
        let out = GaussianState::coherent(&[a]).transform(&s);
        out.validate().unwrap();
        for k in 0..24 {
            let phi = k as f64 * TAU / 24.0;
            let (m1, v1) = homodyne_stats_a(&c, a, phi).unwrap();
            let (m2, v2) = out.homodyne(HomodyneSetting::signal(phi)).unwrap();
            assert_relative_eq!(m1, m2, epsilon = 1e-12);
            assert_relative_eq!(v1, v2, max_relative = 1e-12);
        }
    }

    #[test]
    fn nf_independent_of_amplitude() {
        let c = two_pump_coeffs();
        let a = noise_figure_a(&c, Complex64::from_polar(0.1, 0.4), 0.9).unwrap();
        let b = noise_figure_a(&c, Complex64::from_polar(7.0, 0.4), 0.9).unwrap();
        assert_relative_eq!(a.noise_figure, b.noise_figure, max_relative = 1e-12);
    }

    #[test]
    fn nf_without_squeezing() {
        let c = MuNu::from_pair(Complex64::from_polar(1.0, 0.5), Complex64::new(0.0, 0.0), Configuration::A).unwrap();
        let (ts0, phi) = (0.2, 1.0);
        let nf = noise_figure_a(&c, Complex64::from_polar(1.0, ts0), phi).unwrap().noise_figure;
        assert_relative_eq!(nf, 1.0 / (0.5f64 + ts0 - phi).cos().powi(2), max_relative = 1e-12);
    }

    #[test]
    fn rejects_zero_signal() {
        assert!(noise_figure_a(&two_pump_coeffs(), Complex64::new(0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn joint_mode_unit_nf() {
        let c = degenerate_pump_coeffs();
        let r = joint_mode_nf_b(&c, Complex64::from_polar(0.4, PI / 5.0)).unwrap();
        assert_relative_eq!(r.snr_in, 8.0 * 0.16, max_relative = 1e-12);
        assert!((r.noise_figure - 1.0).abs() < 1e-10);
        let r = joint_mode_nf_b(&MuNu::identity(Configuration::B), Complex64::new(0.3, 0.2)).unwrap();
        assert!((r.noise_figure - 1.0).abs() < 1e-12);
    }

    #[test]
    fn s_transf_first_variance() {
        let c = degenerate_pump_coeffs();
        let sigma = output_covariance(&c, CovBasis::SignalIdler).unwrap();
        let ts0 = 0.3;
        let ti0 = -(c.theta_mu() - c.theta_nu()) - ts0;
        let t = s_transf(c.theta_mu() + ts0, c.theta_mu() + ti0);
        let out = t * sigma * t.transpose();
        assert_relative_eq!(out[(0, 0)], c.amplitude_gain().powi(2) / 4.0, max_relative = 1e-12);
    }

    #[test]
    fn signal_only_limits() {
        let id = MuNu::identity(Configuration::B);
        let a = Complex64::new(0.5, 0.0);
        let r = signal_only_nf_b(&id, a, a, 0.0).unwrap();
        assert_relative_eq!(r.idler_counted.noise_figure, 2.0, max_relative = 1e-12);
        let c = degenerate_pump_coeffs();
        let a = Complex64::from_polar(0.4, PI / 5.0);
        let ai = optimal_idler_b(&c, a).unwrap().idler.unwrap();
        let r = signal_only_nf_b(&c, a, ai, c.theta_mu() + a.arg()).unwrap();
        let closed = 2.0 * c.mean_gain() / c.amplitude_gain().powi(2);
        assert_relative_eq!(r.idler_counted.noise_figure, closed, max_relative = 1e-12);
        assert_relative_eq!(r.signal_counted.noise_figure, closed / 2.0, max_relative = 1e-12);
        // moderate gain: about half, i.e. roughly -3 dB
        assert!((r.signal_counted.noise_figure - 0.5).abs() < 0.15);
        let big = with_mu_sq(1e4, Configuration::B);
        let ai = optimal_idler_b(&big, a).unwrap().idler.unwrap();
        let r = signal_only_nf_b(&big, a, ai, big.theta_mu() + a.arg()).unwrap();
        assert!((r.idler_counted.noise_figure - 1.0).abs() < 1e-3);
    }

    #[test]
    fn vacuum_idler_values() {
        let a = Complex64::new(0.2, 0.1);
        let r = vacuum_idler_nf_b(&MuNu::identity(Configuration::B), a).unwrap();
        assert_relative_eq!(r.noise_figure, 1.0, max_relative = 1e-12);
        let c = with_mu_sq(100.0, Configuration::B);
        assert_relative_eq!(vacuum_idler_nf_b(&c, a).unwrap().noise_figure, 1.99, max_relative = 1e-12);
    }

    #[test]
    fn s_tot_identity_and_symplectic() {
        assert_eq!(build_s_tot(&MuNu::identity(Configuration::B)).unwrap(), Matrix4::identity());
        let s = build_s_tot(&degenerate_pump_coeffs()).unwrap();
        let j = Matrix4::from_iterator(symplectic_form(2).iter().copied());
        assert!((s * j * s.transpose() - j).amax() < 1e-12);
    }

    #[test]
    fn covariance_forms() {
        let c = degenerate_pump_coeffs();
        let sigma = output_covariance(&c, CovBasis::SignalIdler).unwrap();
        let d = c.mean_gain() / 4.0;
        for k in 0..4 {
            assert_relative_eq!(sigma[(k, k)], d, max_relative = 1e-12);
        }
        let prod = c.mu * c.nu;
        assert_relative_eq!(sigma[(0, 1)], prod.re / 2.0, epsilon = 1e-12);
        assert_relative_eq!(sigma[(0, 3)], prod.im / 2.0, epsilon = 1e-12);
        assert_relative_eq!(sigma[(2, 3)], -prod.re / 2.0, epsilon = 1e-12);
        assert!(sigma[(0, 2)].abs() < 1e-12);

        let rot = output_covariance(&c, CovBasis::RotatedPm).unwrap();
        let (p, m) = (c.mu_abs() + c.nu_abs(), c.mu_abs() - c.nu_abs());
        let want = Matrix4::from_diagonal(&nalgebra::Vector4::new(p * p, m * m, m * m, p * p)) / 4.0;
        assert!((rot - want).amax() < 1e-12);

        let nus = symplectic_eigenvalues(&DMatrix::from_iterator(4, 4, sigma.iter().copied())).unwrap();
        for nu in nus {
            assert!((nu - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn state_validation() {
        GaussianState::vacuum(2).validate().unwrap();
        let mut bad = GaussianState::vacuum(1);
        bad.cov[(0, 0)] = 0.1;
        bad.cov[(1, 1)] = 0.1;
        assert!(bad.validate().is_err());
        let mut skew = GaussianState::vacuum(1);
        skew.cov[(0, 1)] = 0.01;
        assert!(skew.validate().is_err());
        assert!(GaussianState::vacuum(1)
            .homodyne(HomodyneSetting {
                phase: 0.0,
                mode: HomodyneMode::Idler
            })
            .is_err());
    }

    #[test]
    fn duan_values() {
        let zero = coeffs_b(&degenerate_pump().0, &PumpConfigB::new(0.0)).unwrap();
        assert_eq!(duan_lhs(&zero).unwrap(), 0.5);
        let c = degenerate_pump_coeffs();
        let lhs = duan_lhs(&c).unwrap();
        assert!((lhs - 0.119).abs() < 1e-3, "{lhs}");
        assert_relative_eq!(lhs, (c.mu_abs() - c.nu_abs()).powi(2) / 2.0, max_relative = 1e-10);
        let rot = output_covariance(&c, CovBasis::RotatedPm).unwrap();
        assert_relative_eq!(lhs, rot[(1, 1)] + rot[(2, 2)], max_relative = 1e-10);
    }
}
