//! Seeded phase-space sampling of linear Gaussian maps.
//!
//! Input quadratures are drawn independently from `N(offset_k, 1/4)` (a
//! coherent state per mode, plus vacuum for any loss modes), pushed through
//! a real matrix and read out along a fixed direction.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid, Result};
use crate::fwm::{quad_transfer, Configuration, MuNu, QuadBasis};
use crate::loss::{LinkInputs, LinkLoss, LinkOrder, LossChannel};
use crate::noise::{build_s_tot, VACUUM_VARIANCE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub std_error_mean: f64,
    /// `variance * sqrt(2 / (n - 1))`, exact for Gaussian samples.
    pub std_error_var: f64,
    pub samples: usize,
}

impl MonteCarloEstimate {
    /// Whether `variance` lies within `k` standard errors of this estimate.
    pub fn variance_agrees(&self, variance: f64, k: f64) -> bool {
        (self.variance - variance).abs() <= k * self.std_error_var
    }

    pub fn mean_agrees(&self, mean: f64, k: f64) -> bool {
        (self.mean - mean).abs() <= k * self.std_error_mean
    }
}

/// Samples `readout . (map * xi)` with `xi_k ~ N(input_mean_k, 1/4)`.
pub fn sample_homodyne(
    map: &DMatrix<f64>,
    input_mean: &DVector<f64>,
    readout: &DVector<f64>,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if samples < 2 {
        return Err(invalid("samples", "need at least two samples"));
    }
    if map.ncols() != input_mean.len() || map.nrows() != readout.len() {
        return Err(invalid(
            "map",
            format!(
                "{}x{} map does not fit {} inputs and {} outputs",
                map.nrows(),
                map.ncols(),
                input_mean.len(),
                readout.len()
            ),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, VACUUM_VARIANCE.sqrt()).expect("fixed positive width");
    let mut xi = DVector::zeros(input_mean.len());
    let mut out = DVector::zeros(readout.len());
    // Welford
    let (mut mean, mut m2) = (0.0, 0.0);
    for k in 0..samples {
        for (x, m) in xi.iter_mut().zip(input_mean.iter()) {
            *x = m + noise.sample(&mut rng);
        }
        map.mul_to(&xi, &mut out);
        let v = readout.dot(&out);
        let delta = v - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (v - mean);
    }
    let n = samples as f64;
    let variance = m2 / (n - 1.0);
    Ok(MonteCarloEstimate {
        mean,
        variance,
        std_error_mean: (variance / n).sqrt(),
        std_error_var: variance * (2.0 / (n - 1.0)).sqrt(),
        samples,
    })
}

/// Linear phase-space model of a link: inputs ordered
/// `(x_1..x_n, y_1..y_n)` over signal, idler (configuration B) and one
/// vacuum loss mode per lossy arm.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceModel {
    pub map: DMatrix<f64>,
    pub input_mean: DVector<f64>,
    pub readout: DVector<f64>,
}

impl PhaseSpaceModel {
    pub fn sample(&self, samples: usize, seed: u64) -> Result<MonteCarloEstimate> {
        sample_homodyne(&self.map, &self.input_mean, &self.readout, samples, seed)
    }

    /// Exact `(mean, variance)` of the readout, for checking the model itself.
    pub fn moments(&self) -> (f64, f64) {
        let w = self.map.transpose() * &self.readout;
        (w.dot(&self.input_mean), w.norm_squared() * VACUUM_VARIANCE)
    }
}

/// Places a 2x2 quadrature block acting on mode `k` of an `n`-mode space.
fn embed_single(n: usize, k: usize, m: &nalgebra::Matrix2<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::identity(2 * n, 2 * n);
    let idx = [k, n + k];
    for r in 0..2 {
        for c in 0..2 {
            out[(idx[r], idx[c])] = m[(r, c)];
        }
    }
    out
}

/// Beamsplitter mixing mode `a` with vacuum mode `l`: `a -> tau a + rho l`,
/// `l -> -rho a + tau l`, applied to both quadratures.
fn beamsplitter(n: usize, a: usize, l: usize, ch: &LossChannel) -> DMatrix<f64> {
    let mut out = DMatrix::identity(2 * n, 2 * n);
    for off in [0, n] {
        let (i, j) = (a + off, l + off);
        out[(i, i)] = ch.tau;
        out[(i, j)] = ch.rho;
        out[(j, i)] = -ch.rho;
        out[(j, j)] = ch.tau;
    }
    out
}

/// Builds the link with explicit transfer and beamsplitter matrices,
/// reading out the output signal at phase `phi`. `loss = None` is the bare
/// amplifier.
pub fn link_model(
    coeffs: &MuNu,
    order: LinkOrder,
    loss: Option<&LinkLoss>,
    inputs: &LinkInputs,
    phi: f64,
) -> Result<PhaseSpaceModel> {
    let amp_modes = match coeffs.config {
        Configuration::A => 1,
        Configuration::B => 2,
    };
    let n = if loss.is_some() { 2 * amp_modes } else { amp_modes };
    let amp = match coeffs.config {
        Configuration::A => embed_single(n, 0, &quad_transfer(coeffs, QuadBasis::Signal).m),
        Configuration::B => {
            let s = build_s_tot(coeffs)?;
            let mut out = DMatrix::identity(2 * n, 2 * n);
            let idx = [0, 1, n, n + 1];
            for r in 0..4 {
                for c in 0..4 {
                    out[(idx[r], idx[c])] = s[(r, c)];
                }
            }
            out
        }
    };
    let map = match loss {
        None => amp,
        Some(loss) => {
            for ch in [loss.signal, loss.idler] {
                LossChannel::new(ch.tau)?;
            }
            let mut bs = beamsplitter(n, 0, amp_modes, &loss.signal);
            if amp_modes == 2 {
                bs = beamsplitter(n, 1, 3, &loss.idler) * bs;
            }
            match order {
                LinkOrder::AmpThenLoss => bs * amp,
                LinkOrder::LossThenAmp => amp * bs,
            }
        }
    };
    let mut input_mean = DVector::zeros(2 * n);
    input_mean[0] = inputs.alpha_s0.re;
    input_mean[n] = inputs.alpha_s0.im;
    if amp_modes == 2 {
        input_mean[1] = inputs.alpha_i0.re;
        input_mean[n + 1] = inputs.alpha_i0.im;
    }
    let mut readout = DVector::zeros(2 * n);
    readout[0] = phi.cos();
    readout[n] = phi.sin();
    Ok(PhaseSpaceModel {
        map,
        input_mean,
        readout,
    })
}
