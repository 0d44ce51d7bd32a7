//! Production kernels against slow, independent evaluations, plus Monte Carlo
//! checks of the fitted uncertainties.

use std::f64::consts::PI;

use num_complex::Complex64;
use qtd_core::fit::adapters;
use qtd_core::fit::{lm_fit, propagate_error, DataPoint, FitProblem, LmOptions};
use qtd_core::presets;
use qtd_core::qdm::stark_shift;
use qtd_core::specfun::reference::{bessel_integral, bessel_series, elliptic_k_agm, elliptic_k_series};
use qtd_core::specfun::{bessel_j, elliptic_k, BesselOrder};
use qtd_core::spectroscopy::{
    converted_photon_lineshape, dispersive_lorentzian, normalize_by_etalon, DispersiveLorentzianParams, Spectrum,
};
use qtd_core::transduction::{gain_sweep, internal_gain, multiphoton_cooperativity};
use qtd_core::units::{AngularFrequency, ConversionBranch, DriveState, PLANCK};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

#[test]
fn bessel_matches_integral_representation() {
    for n in 0..=30u32 {
        for i in 0..=200 {
            let x = 0.25 * i as f64;
            let got = bessel_j(BesselOrder::new(n).unwrap(), x).unwrap();
            let want = bessel_integral(n, x);
            assert!((got - want).abs() < 1e-12, "J_{n}({x}): {got} vs {want}");
        }
    }
}

#[test]
fn bessel_matches_series_for_small_arguments() {
    for n in 0..=20u32 {
        for i in 0..=80 {
            let x = 0.1 * i as f64;
            let got = bessel_j(BesselOrder::new(n).unwrap(), x).unwrap();
            assert!((got - bessel_series(n, x)).abs() < 1e-14);
        }
    }
}

#[test]
fn bessel_large_argument_against_integral() {
    for n in [0u32, 1, 5, 40, 64] {
        for x in [75.0, 200.0, 640.0, 999.0] {
            let got = bessel_j(BesselOrder::new(n).unwrap(), x).unwrap();
            let want = bessel_integral(n, x);
            assert!((got - want).abs() < 1e-10, "J_{n}({x}): {got} vs {want}");
        }
    }
}

#[test]
fn elliptic_against_series_and_agm() {
    for i in 0..1000 {
        let k = 0.999 * i as f64 / 1000.0;
        let got = elliptic_k(k).unwrap();
        assert!((got / elliptic_k_series(k) - 1.0).abs() < 1e-12, "k = {k}");
        assert!((got / elliptic_k_agm(k) - 1.0).abs() < 1e-14, "k = {k}");
    }
}

/// G from the complex sideband response: α_out/α_L = 1 + √Γ·σ_ge/α_L with
/// σ_ge from the two-level system dressed by the resonator, the laser sitting
/// on the blue (ω − ω_QD = +ω_m, n_m + 1 quanta) or red (−ω_m, n_m quanta)
/// sideband.
fn gain_from_response(n_m: f64, g0: f64, gamma: f64, kappa: f64, omega_m: f64, blue: bool) -> f64 {
    let (quanta, detuning) = if blue { (n_m + 1.0, omega_m) } else { (n_m, -omega_m) };
    let dressing = 4.0 * quanta * g0 * g0 / (gamma + kappa);
    let sigma = -2.0 * gamma.sqrt() / (dressing + Complex64::new(gamma, -2.0 * detuning));
    let ratio = 1.0 + gamma.sqrt() * sigma;
    1.0 - ratio.norm_sqr()
}

#[test]
fn closed_form_gain_matches_complex_response() {
    let gamma = 2.0 * PI * 300e6;
    let kappa = 2.0 * PI * 138e6;
    let omega_m = 2.0 * PI * 9.7e9;
    for &g0_hz in &[1e5, 1.6e6, 3e7, 3e8] {
        let g0 = 2.0 * PI * g0_hz;
        let c0 = 4.0 * g0 * g0 / ((gamma + kappa) * gamma);
        for &n in &[0.0, 1.0, 1e3, 1.2e7] {
            for (blue, branch) in [
                (false, ConversionBranch::MicrowaveToOptical),
                (true, ConversionBranch::OpticalToMicrowave),
            ] {
                let drive = DriveState::new(n, 1.0, branch).unwrap();
                let closed = internal_gain(
                    multiphoton_cooperativity(c0, &drive).unwrap(),
                    AngularFrequency::from_rad_per_s(gamma),
                    AngularFrequency::from_rad_per_s(omega_m),
                )
                .unwrap();
                let oracle = gain_from_response(n, g0, gamma, kappa, omega_m, blue);
                assert!((closed - oracle).abs() <= 1e-10 * closed + 1e-15, "{closed} {oracle}");
            }
        }
    }
}

#[test]
fn gain_linearity_window() {
    let gamma = AngularFrequency::from_hz(300e6);
    let wm = AngularFrequency::from_hz(9.7e9);
    let c0 = 1e-6;
    let limit = 0.1 * (wm / gamma);
    let drives: Vec<DriveState> = (0..80)
        .map(|i| DriveState::new(10f64.powf(0.1 * i as f64), 1.0, ConversionBranch::MicrowaveToOptical).unwrap())
        .collect();
    let sweep = gain_sweep(&drives, c0, gamma, wm).unwrap();
    for &(n, g) in &sweep.points {
        if 1.0 + 2.0 * n * c0 >= limit {
            continue;
        }
        let g2 = internal_gain(2.0 * n * c0, gamma, wm).unwrap();
        assert!((g2 / g - 2.0).abs() < 0.02, "n = {n}");
    }
    let red = gain_sweep(&[DriveState::new(1e6, 1.0, ConversionBranch::MicrowaveToOptical).unwrap()], c0, gamma, wm)
        .unwrap()
        .points[0]
        .1;
    let blue = gain_sweep(&[DriveState::new(1e6, 1.0, ConversionBranch::OpticalToMicrowave).unwrap()], c0, gamma, wm)
        .unwrap()
        .points[0]
        .1;
    assert!((red - blue).abs() / red < 1e-5);
}

#[test]
fn stark_shift_in_frequency_units() {
    let e = presets::LOCKIN_BIAS_AMPLITUDE / presets::H_QD;
    assert!((e - 8.0e4).abs() < 1e-9);
    let f = stark_shift(0.9e-9, e) / PLANCK;
    assert!((f / 17.4e9 - 1.0).abs() < 2e-3, "{f}");
}

fn normal(sigma: f64) -> Normal<f64> {
    Normal::new(0.0, sigma).unwrap()
}

#[test]
fn dispersive_round_trip_with_noise() {
    let truth = DispersiveLorentzianParams {
        amplitude_a: 720e6,
        center: 0.0,
        fwhm: 720e6,
        phase_theta: 0.8,
        offset: 0.05,
    };
    let xs: Vec<f64> = (0..=400).map(|i| -4e9 + 2e7 * i as f64).collect();
    let clean: Vec<(f64, f64, Option<f64>)> =
        xs.iter().map(|&x| (x, dispersive_lorentzian(x, &truth), None)).collect();
    let fit = adapters::fit_dispersive_multistart(&clean, &LmOptions::default()).unwrap();
    assert!((fit.params[2] / 720e6 - 1.0).abs() < 0.01, "{:?}", fit.params);

    let peak = clean.iter().map(|d| (d.1 - truth.offset).abs()).fold(0.0, f64::max);
    let noise = normal(0.02 * peak);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let noisy: Vec<_> = clean.iter().map(|&(x, y, _)| (x, y + noise.sample(&mut rng), None)).collect();
    let fit = adapters::fit_dispersive_multistart(&noisy, &LmOptions::default()).unwrap();
    let err = fit.std_errors[2];
    assert!((fit.params[2] - 720e6).abs() < 3.0 * err, "{} +- {}", fit.params[2], err);
    assert!(err < 30e6);
}

#[test]
fn converted_photon_round_trip_with_noise() {
    let xs: Vec<f64> = (0..=200).map(|i| -3e9 + 3e7 * i as f64).collect();
    let noise = normal(0.1);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ys: Vec<f64> = xs
        .iter()
        .map(|&x| converted_photon_lineshape(x, 858e6, 1.0) + noise.sample(&mut rng))
        .collect();
    let guess = adapters::guess_lorentzian(&xs, &ys);
    let problem = adapters::lorentzian(xs.iter().zip(&ys).map(|(&x, &y)| (x, y, None)), guess).unwrap();
    let fit = lm_fit(&problem, &LmOptions::default()).unwrap();
    assert!((fit.params[2] - 858e6).abs() < 90e6, "{}", fit.params[2]);
    assert!((fit.params[2] - 858e6).abs() < 3.0 * fit.std_errors[2]);
}

#[test]
fn etalon_pipeline_recovers_width() {
    let etalon = presets::etalon();
    let points: Vec<(f64, f64)> = (0..=600)
        .map(|i| {
            let f = -3e9 + 1e7 * i as f64;
            (f, converted_photon_lineshape(f - 1e8, 858e6, 50.0) * etalon.transmission(f))
        })
        .collect();
    let raw = Spectrum::new(points, "frequency_hz", "counts").unwrap();
    let n = normalize_by_etalon(&raw, &etalon).unwrap();
    let (xs, ys): (Vec<f64>, Vec<f64>) = n.spectrum.points().iter().copied().unzip();
    let problem =
        adapters::lorentzian(xs.iter().zip(&ys).map(|(&x, &y)| (x, y, None)), adapters::guess_lorentzian(&xs, &ys))
            .unwrap();
    let fit = lm_fit(&problem, &LmOptions::default()).unwrap();
    assert!((fit.params[2] / 858e6 - 1.0).abs() < 0.03);
}

/// Spread of fitted slopes over many noisy realisations against the
/// reported standard error, weighted and unweighted.
#[test]
fn standard_errors_match_monte_carlo_spread() {
    let xs: Vec<f64> = (0..30).map(|i| i as f64 / 29.0).collect();
    let sigma = 0.05;
    let noise = normal(sigma);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let trials = 400;
    for weighted in [false, true] {
        let mut slopes = Vec::with_capacity(trials);
        let mut reported = 0.0;
        for _ in 0..trials {
            let data = xs
                .iter()
                .map(|&x| {
                    let y = 1.5 * (-2.0 * x).exp() + noise.sample(&mut rng);
                    if weighted {
                        DataPoint::with_sigma(x, y, sigma)
                    } else {
                        DataPoint::new(x, y)
                    }
                })
                .collect();
            let problem = FitProblem::new(
                &["a", "k"],
                vec![1.0, 1.0],
                |p: &[f64], x: &f64| p[0] * (-p[1] * x).exp(),
                data,
            )
            .unwrap();
            let fit = lm_fit(&problem, &LmOptions::default()).unwrap();
            slopes.push(fit.params[1]);
            reported += fit.std_errors[1] / trials as f64;
        }
        let mean = slopes.iter().sum::<f64>() / trials as f64;
        let spread = (slopes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (trials - 1) as f64).sqrt();
        assert!((reported / spread - 1.0).abs() < 0.15, "weighted {weighted}: {reported} vs {spread}");
        assert!((mean - 2.0).abs() < 4.0 * spread / (trials as f64).sqrt() + 0.01);
    }
}

#[test]
fn propagated_error_matches_monte_carlo() {
    // f = a/k for a Gaussian (a, k) with correlation
    let params = [3.0, 2.0];
    let cov = nalgebra::DMatrix::from_row_slice(2, 2, &[0.01, 0.002, 0.002, 0.0025]);
    let f = |p: &[f64]| p[0] / p[1];
    let sigma = propagate_error(f, &params, &cov).unwrap();
    let chol = cov.clone().cholesky().unwrap();
    let l = chol.l();
    let n01 = normal(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let samples: Vec<f64> = (0..20000)
        .map(|_| {
            let z = nalgebra::DVector::from_vec(vec![n01.sample(&mut rng), n01.sample(&mut rng)]);
            let d = &l * z;
            f(&[params[0] + d[0], params[1] + d[1]])
        })
        .collect();
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let sd = (samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (samples.len() - 1) as f64).sqrt();
    assert!((sigma / sd - 1.0).abs() < 0.05, "{sigma} vs {sd}");
}
