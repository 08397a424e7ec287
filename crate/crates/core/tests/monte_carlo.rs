use nalgebra::DVector;
use num_complex::Complex64;
use psa_core::loss::{lossy_homodyne_stats, LinkInputs, LinkLayout, LinkLoss, LinkOrder, LossChannel};
use psa_core::montecarlo::link_model;
use psa_core::noise::{homodyne_stats_a, s_transf, VACUUM_VARIANCE};
use psa_core::optimum::optimal_idler_b;
use psa_core::{coeffs_a, coeffs_b, Configuration, FiberParams, MuNu, PumpConfigA, PumpConfigB};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SAMPLES: usize = 1_000_000;

fn random_coeffs(rng: &mut ChaCha8Rng, config: Configuration) -> MuNu {
    let gamma = rng.random_range(5e-3..15e-3);
    let fiber = FiberParams::new(gamma, rng.random_range(-0.01..0.005), rng.random_range(50.0..400.0)).unwrap();
    match config {
        Configuration::A => {
            let p = PumpConfigA {
                p1: rng.random_range(0.05..0.4),
                p3: rng.random_range(0.05..0.4),
                theta10: rng.random_range(-3.0..3.0),
                theta30: rng.random_range(-3.0..3.0),
            };
            coeffs_a(&fiber, &p).unwrap()
        }
        Configuration::B => {
            let p = PumpConfigB {
                p2: rng.random_range(0.05..0.5),
                theta20: rng.random_range(-3.0..3.0),
            };
            coeffs_b(&fiber, &p).unwrap()
        }
    }
}

fn random_amplitude(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.random_range(0.1..2.0), rng.random_range(-3.1..3.1))
}

#[test]
fn lossless_config_a_variance() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for seed in 0..4 {
        let c = random_coeffs(&mut rng, Configuration::A);
        let alpha = random_amplitude(&mut rng);
        let phi = rng.random_range(-3.1..3.1);
        let inputs = LinkInputs {
            alpha_s0: alpha,
            ..Default::default()
        };
        let model = link_model(&c, LinkOrder::AmpThenLoss, None, &inputs, phi).unwrap();
        let est = model.sample(SAMPLES, 100 + seed).unwrap();
        let (mean, var) = homodyne_stats_a(&c, alpha, phi).unwrap();
        assert!(est.variance_agrees(var, 3.0), "{est:?} vs {var}");
        assert!(est.mean_agrees(mean, 3.0), "{est:?} vs {mean}");
    }
}

#[test]
fn lossless_config_b_signal_and_joint_variances() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let c = random_coeffs(&mut rng, Configuration::B);
    let a = random_amplitude(&mut rng);
    let inputs = LinkInputs {
        alpha_s0: a,
        alpha_i0: optimal_idler_b(&c, a).unwrap().idler.unwrap(),
    };
    let phi = rng.random_range(-3.1..3.1);
    let mut model = link_model(&c, LinkOrder::AmpThenLoss, None, &inputs, phi).unwrap();
    let est = model.sample(SAMPLES, 7).unwrap();
    assert!(est.variance_agrees(c.mean_gain() * VACUUM_VARIANCE, 3.0), "{est:?}");

    // joint quadrature: first row of the sum/difference transformation
    let t = s_transf(c.theta_mu() + a.arg(), c.theta_mu() + inputs.alpha_i0.arg());
    model.readout = DVector::from_iterator(4, t.row(0).iter().copied());
    let est = model.sample(SAMPLES, 8).unwrap();
    let want = c.amplitude_gain().powi(2) * VACUUM_VARIANCE;
    assert!(est.variance_agrees(want, 3.0), "{est:?} vs {want}");
    assert!(est.mean_agrees(std::f64::consts::SQRT_2 * c.amplitude_gain() * a.norm(), 3.0));
}

#[test]
fn lossy_variances_all_layouts() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut seed = 1000;
    for config in [Configuration::A, Configuration::B] {
        for order in [LinkOrder::AmpThenLoss, LinkOrder::LossThenAmp] {
            let c = random_coeffs(&mut rng, config);
            let loss = LinkLoss {
                signal: LossChannel::new(rng.random_range(0.3..0.95)).unwrap(),
                idler: LossChannel::new(rng.random_range(0.3..0.95)).unwrap(),
            };
            let inputs = LinkInputs {
                alpha_s0: random_amplitude(&mut rng),
                alpha_i0: random_amplitude(&mut rng),
            };
            let phi = rng.random_range(-3.1..3.1);
            let layout = LinkLayout { order, config };
            let (mean, var) = lossy_homodyne_stats(&c, layout, &loss, &inputs, phi).unwrap();
            let est = link_model(&c, order, Some(&loss), &inputs, phi).unwrap().sample(SAMPLES, seed).unwrap();
            seed += 1;
            assert!(est.variance_agrees(var, 3.0), "{layout:?}: {est:?} vs {var}");
            assert!(est.mean_agrees(mean, 3.0), "{layout:?}: {est:?} vs {mean}");
        }
    }
}
