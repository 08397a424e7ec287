use num_complex::Complex64;
use psa_core::loss::{layout_ratio, nf_optimum, nf_with_loss, LinkInputs, LinkLayout, LinkLoss, LinkOrder, LossChannel};
use psa_core::noise::{noise_figure_a, signal_only_nf_b};
use psa_core::optimum::optimal_idler_b;
use psa_core::{coeffs_a, coeffs_b, Configuration, FiberParams, MuNu, PumpConfigA, PumpConfigB};
use std::f64::consts::{PI, TAU};

const N: usize = 200;

fn two_pump_coeffs() -> MuNu {
    let fiber = FiberParams::new(11.3e-3, 4.53e-11, 300.0).unwrap();
    coeffs_a(&fiber, &PumpConfigA::symmetric(0.2)).unwrap()
}

fn degenerate_pump_coeffs() -> MuNu {
    let fiber = FiberParams::new(11.3e-3, -4.54e-11, 300.0).unwrap();
    coeffs_b(&fiber, &PumpConfigB::new(0.23)).unwrap()
}

fn grid(k: usize) -> f64 {
    -PI + k as f64 * TAU / N as f64
}

#[test]
fn lossless_nf_bounded_below_by_one() {
    let c = two_pump_coeffs();
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..N {
        for j in 0..N {
            let (ts0, phi) = (grid(i), grid(j));
            let nf = noise_figure_a(&c, Complex64::from_polar(1.0, ts0), phi).unwrap().noise_figure;
            assert!(nf >= 1.0 - 1e-12, "NF {nf} at ({ts0}, {phi})");
            if nf < best.0 {
                best = (nf, ts0, phi);
            }
        }
    }
    // the valley is shallow along phi (NF = 1 + tan^2(theta - phi) / G_max^2
    // at the optimal input), so compare values rather than positions
    assert!(best.0 - 1.0 < 1e-3, "{best:?}");
    let ts_opt = (c.theta_nu() - c.theta_mu()) / 2.0;
    let phi_opt = (c.theta_mu() + c.theta_nu()) / 2.0;
    let exact = noise_figure_a(&c, Complex64::from_polar(1.0, ts_opt), phi_opt).unwrap().noise_figure;
    assert!((exact - 1.0).abs() < 1e-10);
    assert!(exact <= best.0 + 1e-12);
}

#[test]
fn minimum_over_detection_phase_is_at_theta() {
    let c = two_pump_coeffs();
    let theta = (c.theta_mu() + c.theta_nu()) / 2.0;
    let a = Complex64::from_polar(1.0, (c.theta_nu() - c.theta_mu()) / 2.0);
    let at_theta = noise_figure_a(&c, a, theta).unwrap().noise_figure;
    for j in 0..2000 {
        let phi = j as f64 * TAU / 2000.0;
        assert!(noise_figure_a(&c, a, phi).unwrap().noise_figure >= at_theta - 1e-12);
    }
}

fn grid_min_a(c: &MuNu, layout: LinkLayout, loss: &LinkLoss) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..N {
        for j in 0..N {
            let inputs = LinkInputs {
                alpha_s0: Complex64::from_polar(1.0, grid(i)),
                ..Default::default()
            };
            best = best.min(nf_with_loss(c, layout, loss, &inputs, grid(j)).unwrap().noise_figure);
        }
    }
    best
}

#[test]
fn config_a_lossy_optimum_matches_grid() {
    let c = two_pump_coeffs();
    let loss = LinkLoss::symmetric(0.5f64.sqrt()).unwrap();
    for order in [LinkOrder::AmpThenLoss, LinkOrder::LossThenAmp] {
        let layout = LinkLayout {
            order,
            config: Configuration::A,
        };
        let min = grid_min_a(&c, layout, &loss);
        let opt = nf_optimum(&c, layout, &loss).unwrap();
        assert!(min >= opt - 1e-12, "{order:?}: grid {min} below optimum {opt}");
        assert!((min - opt) / opt < 5e-3, "{order:?}: grid {min} vs optimum {opt}");
    }
}

/// Configuration B: grid over the signal phase and the detection phase with
/// the optimal-power idler at a fixed phase.
fn grid_min_b(c: &MuNu, layout: Option<(LinkLayout, LinkLoss)>) -> f64 {
    let ai = optimal_idler_b(c, Complex64::new(1.0, 0.0)).unwrap().idler.unwrap();
    let mut best = f64::INFINITY;
    for i in 0..N {
        for j in 0..N {
            let inputs = LinkInputs {
                alpha_s0: Complex64::from_polar(1.0, grid(i)),
                alpha_i0: ai,
            };
            let nf = match layout {
                Some((layout, loss)) => nf_with_loss(c, layout, &loss, &inputs, grid(j)).unwrap(),
                None => signal_only_nf_b(c, inputs.alpha_s0, inputs.alpha_i0, grid(j)).unwrap().signal_counted,
            };
            best = best.min(nf.noise_figure);
        }
    }
    best
}

#[test]
fn config_b_lossy_optimum_matches_grid() {
    let c = degenerate_pump_coeffs();
    let bare = grid_min_b(&c, None);
    let loss = LinkLoss::symmetric(0.5f64.sqrt()).unwrap();
    for order in [LinkOrder::AmpThenLoss, LinkOrder::LossThenAmp] {
        let layout = LinkLayout {
            order,
            config: Configuration::B,
        };
        let ratio = grid_min_b(&c, Some((layout, loss))) / bare;
        let opt = nf_optimum(&c, layout, &loss).unwrap();
        assert!((ratio - opt).abs() / opt < 5e-3, "{order:?}: {ratio} vs {opt}");
    }
}

#[test]
fn layout_ratio_below_one() {
    for gi in 1..=100 {
        let g = 1.0 + gi as f64 * 0.99;
        for ti in 0..=95 {
            let t2 = 0.05 + ti as f64 * 0.01;
            if t2 >= 1.0 {
                continue;
            }
            let mu = (g.sqrt() + 1.0 / g.sqrt()) / 2.0;
            let nu = (g.sqrt() - 1.0 / g.sqrt()) / 2.0;
            let c = MuNu::from_pair(Complex64::new(mu, 0.0), Complex64::new(nu, 0.0), Configuration::A).unwrap();
            let r = layout_ratio(&c, &LossChannel::new(t2.sqrt()).unwrap()).unwrap();
            assert!(r < 1.0, "G {g}, tau^2 {t2}: {r}");
        }
    }
}

#[test]
fn optimum_monotonicity() {
    let al = LinkLayout {
        order: LinkOrder::AmpThenLoss,
        config: Configuration::A,
    };
    let la = LinkLayout {
        order: LinkOrder::LossThenAmp,
        config: Configuration::A,
    };
    let with_gain = |r: f64| {
        MuNu::from_pair(Complex64::new(r.cosh(), 0.0), Complex64::new(r.sinh(), 0.0), Configuration::A).unwrap()
    };
    let mut prev_tau = f64::INFINITY;
    for k in 1..=20 {
        let loss = LinkLoss::symmetric(k as f64 / 20.0).unwrap();
        let nf = nf_optimum(&with_gain(1.0), al, &loss).unwrap();
        assert!(nf < prev_tau);
        prev_tau = nf;
    }
    let loss = LinkLoss::symmetric(0.6).unwrap();
    let mut prev_gain = f64::INFINITY;
    for k in 1..=20 {
        let c = with_gain(k as f64 * 0.2);
        let nf = nf_optimum(&c, al, &loss).unwrap();
        assert!(nf < prev_gain);
        prev_gain = nf;
        assert_eq!(nf_optimum(&c, la, &loss).unwrap(), 1.0 / 0.36);
    }
}

#[test]
fn lossy_variance_floor() {
    use psa_core::loss::lossy_homodyne_stats;
    let c = two_pump_coeffs();
    let floor_sq = (c.mu_abs() - c.nu_abs()).powi(2);
    let layout = LinkLayout {
        order: LinkOrder::AmpThenLoss,
        config: Configuration::A,
    };
    for ti in 1..=20 {
        let tau = ti as f64 / 20.0;
        let loss = LinkLoss::symmetric(tau).unwrap();
        for j in 0..N {
            let (_, v) = lossy_homodyne_stats(&c, layout, &loss, &LinkInputs::default(), grid(j)).unwrap();
            let floor = (1.0 - tau * tau) / 4.0 + tau * tau * floor_sq / 4.0;
            assert!(v >= floor - 1e-12);
        }
    }
}
