use std::f64::consts::PI;

use proptest::prelude::*;
use qtd_core::circuit::{cpw_geometry_to_electrical, LossCircuit};
use qtd_core::fit::{lm_fit, Bounds, DataPoint, FitProblem, LmOptions};
use qtd_core::qdm::{anticrossing_energies, effective_dipole_on, min_splitting_bias, Branch};
use qtd_core::specfun::{bessel_j, bessel_j_signed, elliptic_k, BesselOrder};
use qtd_core::spectroscopy::{
    converted_photon_lineshape, dispersive_lorentzian, normalize_by_etalon, sideband_amplitudes,
    synth_sideband_spectrum, DispersiveLorentzianParams, EtalonParams, SidebandMode, Spectrum,
    ETALON_THRESHOLD,
};
use qtd_core::transduction::{
    eta_far_detuned, eta_linear_approx, eta_near_resonance, g0_for_cooperativity, internal_gain,
    multiphoton_cooperativity, optimal_cooperativity, CooperativityInputs,
};
use qtd_core::units::{AngularFrequency, AnticrossingParams, ConversionBranch, DriveState, EPSILON_0, MU_0};
use qtd_core::presets;

fn hz(f: f64) -> AngularFrequency {
    AngularFrequency::from_hz(f)
}

prop_compose! {
    fn anticrossing_params()(
        eps_qd in 1.2f64..1.4,
        eps_diff in -0.05f64..0.05,
        d_ind in 5e-9f64..20e-9,
        dir_frac in 0.0f64..0.5,
        t in 0.2e-3f64..3e-3,
        h_qd in 80e-9f64..400e-9,
    ) -> AnticrossingParams {
        AnticrossingParams::new(eps_qd, eps_diff, dir_frac * d_ind, d_ind, t, h_qd).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn hz_round_trip(f in -1e15f64..1e15) {
        let back = hz(f).hz();
        prop_assert!((back - f).abs() <= 1e-15 * f.abs());
    }

    #[test]
    fn branches_never_cross(p in anticrossing_params(), v in -3.0f64..3.0) {
        let b = anticrossing_energies(v, &p).unwrap();
        prop_assert!(b.upper - b.lower >= 2.0 * p.t * (1.0 - 1e-12));
    }

    #[test]
    fn gap_minimum_is_two_t(p in anticrossing_params(), dv in 1e-3f64..1.0) {
        let v = min_splitting_bias(&p).unwrap();
        let at = anticrossing_energies(v, &p).unwrap().splitting();
        prop_assert!((at / (2.0 * p.t) - 1.0).abs() < 1e-12);
        prop_assert!(anticrossing_energies(v + dv, &p).unwrap().splitting() > at);
        prop_assert!(anticrossing_energies(v - dv, &p).unwrap().splitting() > at);
    }

    #[test]
    fn dipole_is_bounded(p in anticrossing_params(), v in -5.0f64..5.0) {
        let bound = (p.d_dir + p.d_ind) / 2.0 + p.d_ind / 2.0;
        for branch in [Branch::Lower, Branch::Upper] {
            let d = effective_dipole_on(v, &p, branch).unwrap();
            prop_assert!(d >= 0.0 && d <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn dipole_matches_central_differences(p in anticrossing_params(), v in -1.0f64..1.0) {
        let h = 1e-7;
        for branch in [Branch::Lower, Branch::Upper] {
            let up = anticrossing_energies(v + h, &p).unwrap().get(branch);
            let dn = anticrossing_energies(v - h, &p).unwrap().get(branch);
            let fd = ((up - dn) / (2.0 * h) * p.h_qd).abs();
            let an = effective_dipole_on(v, &p, branch).unwrap();
            // rounding of ~1.3 eV energies over a 2e-7 V step sets the floor
            prop_assert!((fd - an).abs() <= 1e-6 * p.d_ind, "{fd} {an}");
        }
    }

    #[test]
    fn dipole_is_continuous(p in anticrossing_params(), v in -1.0f64..1.0) {
        let a = effective_dipole_on(v, &p, Branch::Lower).unwrap();
        let b = effective_dipole_on(v + 1e-9, &p, Branch::Lower).unwrap();
        prop_assert!((a - b).abs() < 1e-6 * p.d_ind);
    }

    #[test]
    fn efficiencies_are_bounded(
        g0 in 0.0f64..1e10,
        gamma in 1e6f64..1e10,
        kappa in 0.0f64..1e10,
        wm in 0.0f64..1e11,
        delta in -1e11f64..1e11,
    ) {
        let inputs = CooperativityInputs { g0: hz(g0), gamma: hz(gamma), kappa: hz(kappa) };
        let near = eta_near_resonance(&inputs, hz(delta), None).unwrap();
        prop_assert!((0.0..=1.0).contains(&near.eta_int));
        let far = eta_far_detuned(near.c0, hz(gamma), hz(wm)).unwrap();
        prop_assert!((0.0..=1.0).contains(&far.eta_int));
        let g = internal_gain(near.c0 * 1e3, hz(gamma), hz(wm)).unwrap();
        prop_assert!((0.0..=1.0).contains(&g));
    }

    #[test]
    fn near_resonance_is_even_in_detuning(
        c0 in 1e-6f64..1e3,
        gamma in 1e7f64..1e10,
        kappa in 0.0f64..1e9,
        delta in 0.0f64..1e11,
    ) {
        let g0 = g0_for_cooperativity(c0, hz(gamma), hz(kappa)).unwrap();
        let inputs = CooperativityInputs { g0, gamma: hz(gamma), kappa: hz(kappa) };
        let plus = eta_near_resonance(&inputs, hz(delta), None).unwrap().eta_int;
        let minus = eta_near_resonance(&inputs, hz(-delta), None).unwrap().eta_int;
        let zero = eta_near_resonance(&inputs, AngularFrequency::ZERO, None).unwrap().eta_int;
        prop_assert!((plus - minus).abs() < 1e-12);
        prop_assert!(zero >= plus);
        prop_assert!((zero / (4.0 * c0 / (1.0 + c0).powi(2)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_approx_error_bound(c0 in 0.0f64..10.0, ratio in 10.0f64..1e3) {
        let gamma = hz(1e8);
        let wm = gamma * ratio;
        let eta = eta_far_detuned(c0, gamma, wm).unwrap().eta_int;
        prop_assume!(eta > 0.0);
        let approx = eta_linear_approx(c0, gamma, wm);
        let bound = (1.0 + c0).powi(2) / (4.0 * ratio * ratio);
        prop_assert!(((approx - eta) / eta).abs() <= bound * (1.0 + 1e-9));
        let report = eta_far_detuned(c0, gamma, wm).unwrap();
        if report.approx_eq3_valid {
            prop_assert!(((approx - eta) / eta).abs() < 0.01);
        }
    }

    #[test]
    fn branch_symmetry(c0 in 0.0f64..1.0, n_o in 0.0f64..10.0) {
        let red = DriveState::new(1.0, n_o, ConversionBranch::MicrowaveToOptical).unwrap();
        let blue = DriveState::new(0.0, n_o, ConversionBranch::OpticalToMicrowave).unwrap();
        let g = |d: &DriveState| internal_gain(multiphoton_cooperativity(c0, d).unwrap(), hz(3e8), hz(9.7e9)).unwrap();
        prop_assert_eq!(g(&red), g(&blue));
    }

    #[test]
    fn bessel_parity_and_bound(n in 0u32..=64, x in -1e3f64..1e3) {
        let order = BesselOrder::new(n).unwrap();
        let a = bessel_j(order, x).unwrap();
        let b = bessel_j(order, -x).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert_eq!(a, sign * b);
        prop_assert!(a.abs() <= 1.0);
        let l = n as i32;
        prop_assert_eq!(bessel_j_signed(-l, x).unwrap(), sign * a);
    }

    #[test]
    fn elliptic_is_increasing(k in 0.0f64..0.998) {
        prop_assert!(elliptic_k(k + 1e-3).unwrap() > elliptic_k(k).unwrap());
    }

    #[test]
    fn cpw_product_is_vacuum_wave_speed(w in 1e-6f64..50e-6, s in 1e-6f64..50e-6, eps in 1.0f64..15.0) {
        let e = cpw_geometry_to_electrical(w, s, eps).unwrap();
        let expect = MU_0 * EPSILON_0 * e.eps_eff;
        prop_assert!((e.c_per_len * e.l_geo_per_len / expect - 1.0).abs() < 1e-12);
    }

    #[test]
    fn transmission_is_passive(log_rs in -2.0f64..6.0, df in -1.5e9f64..1.5e9) {
        let c: LossCircuit = presets::loss_circuit();
        let s = c.s21(10f64.powf(log_rs), 9.7e9 + df).unwrap();
        prop_assert!(s.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn sideband_weights_are_symmetric(beta in 0.0f64..20.0, l_max in 0u32..=40) {
        let a = sideband_amplitudes(beta, l_max, SidebandMode::Abs).unwrap();
        let n = a.len();
        for i in 0..n {
            prop_assert_eq!(a[i].1, a[n - 1 - i].1);
        }
    }

    #[test]
    fn synth_is_linear_in_amplitude(scale in 0.1f64..10.0, n_m in 0.0f64..1e8) {
        let qdm = presets::qdm1();
        let wm = hz(9.717e9);
        let g0 = hz(1.56e6);
        let base = DispersiveLorentzianParams { amplitude_a: 1e9, center: 0.0, fwhm: 720e6, phase_theta: 0.3, offset: 0.0 };
        let scaled = DispersiveLorentzianParams { amplitude_a: scale * 1e9, ..base };
        let f0 = qdm.omega_qd.hz();
        let grid: Vec<f64> = (0..21).map(|i| f0 - 2e10 + 2e9 * i as f64).collect();
        let a = synth_sideband_spectrum(&qdm, g0, n_m, wm, &base, 8, SidebandMode::Abs, &grid).unwrap();
        let b = synth_sideband_spectrum(&qdm, g0, n_m, wm, &scaled, 8, SidebandMode::Abs, &grid).unwrap();
        for (p, q) in a.points().iter().zip(b.points()) {
            prop_assert!((q.1 - scale * p.1).abs() <= 1e-12 * (q.1.abs() + 1.0));
        }
    }

    #[test]
    fn lineshapes_decay_to_offset(
        amp in -10.0f64..10.0,
        fwhm in 1e6f64..1e10,
        theta in -PI..PI,
        offset in -1.0f64..1.0,
    ) {
        let p = DispersiveLorentzianParams { amplitude_a: amp * fwhm, center: 0.0, fwhm, phase_theta: theta, offset };
        for x in [-1e6 * fwhm, 1e6 * fwhm] {
            let v = dispersive_lorentzian(x, &p);
            prop_assert!(v.is_finite() && (v - offset).abs() < 1e-4 * (amp.abs() + 1.0));
            prop_assert!(converted_photon_lineshape(x, fwhm, amp).abs() < 1e-10 * (amp.abs() + 1.0));
        }
    }

    #[test]
    fn etalon_normalisation_never_divides_below_threshold(
        center in -5e9f64..5e9,
        fwhm in 0.5e9f64..5e9,
        values in proptest::collection::vec(0.0f64..100.0, 200),
    ) {
        let e = EtalonParams { center, fwhm, fsr: 34e9 };
        let pts: Vec<(f64, f64)> = values.iter().enumerate().map(|(i, &v)| (-40e9 + 4e8 * i as f64, v)).collect();
        let raw = Spectrum::new(pts.clone(), "frequency_hz", "counts").unwrap();
        let n = normalize_by_etalon(&raw, &e).unwrap();
        let mut raw_iter = pts.iter().filter(|p| e.transmission(p.0) >= ETALON_THRESHOLD);
        for &(f, v) in n.spectrum.points() {
            let &(rf, rv) = raw_iter.next().unwrap();
            prop_assert_eq!(f, rf);
            prop_assert!(v <= rv / ETALON_THRESHOLD * (1.0 + 1e-12));
        }
        prop_assert_eq!(n.spectrum.len() + n.dropped.len(), pts.len());
    }

    #[test]
    fn bounded_fits_stay_inside(a in -3.0f64..3.0, b in -2.0f64..2.0, hi in 0.5f64..2.0) {
        let data = (0..12).map(|i| {
            let x = i as f64 / 11.0;
            DataPoint::new(x, a * x + b + 0.01 * (i as f64).sin())
        }).collect();
        let problem = FitProblem::new(&["a", "b"], vec![0.0, 0.0], |p: &[f64], x: &f64| p[0] * x + p[1], data)
            .unwrap()
            .with_bounds("a", Bounds::Range(-hi, hi))
            .unwrap();
        let fit = lm_fit(&problem, &LmOptions::default()).unwrap();
        prop_assert!(fit.params[0] >= -hi && fit.params[0] <= hi);
        if a.abs() < 0.9 * hi {
            prop_assert!((fit.params[0] - a).abs() < 0.05);
        }
    }
}

#[test]
fn far_detuned_rises_then_falls() {
    let gamma = hz(300e6);
    let wm = hz(9.7e9);
    let c_star = optimal_cooperativity(gamma, wm);
    let eta = |c: f64| eta_far_detuned(c, gamma, wm).unwrap().eta_int;
    let mut prev = eta(0.0);
    for i in 1..=2000 {
        let c = c_star * i as f64 / 2000.0;
        let e = eta(c);
        assert!(e > prev, "not increasing at C0 = {c}");
        prev = e;
    }
    for i in 1..=2000 {
        let c = c_star * (1.0 + i as f64 / 100.0);
        let e = eta(c);
        assert!(e < prev, "not decreasing at C0 = {c}");
        prev = e;
    }
}
