//! End-to-end checks of the model against the device numbers: twelve
//! criteria, each timed against its budget. Data-facing checks run as
//! synthesize, fit, recover, with seeded noise so every run is identical.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::circuit::{
    characteristic_impedance, coupling_strength_theory, cpw_geometry_to_electrical, kinetic_inductance_from_f0,
    q_ext, simulate_loaded_q,
};
use crate::fit::adapters;
use crate::fit::{lm_fit, FitResult, LmOptions};
use crate::presets;
use crate::qdm::{anticrossing_energies, min_splitting_bias, Branch};
use crate::specfun::reference::elliptic_k_series;
use crate::specfun::{bessel_j, elliptic_k, BesselOrder};
use crate::spectroscopy::{converted_photon_lineshape, modulation_index, normalize_by_etalon, Spectrum};
use crate::transduction::{
    bandwidth, c0_for_eta, dipole_for_cooperativity, eta_far_detuned, eta_near_resonance, gain_sweep,
    g0_for_cooperativity, internal_gain, multiphoton_cooperativity, single_photon_cooperativity, CooperativityInputs,
};
use crate::units::{AngularFrequency, AnticrossingParams, ConversionBranch, DriveState};
use crate::Result;

/// Seed for every noisy dataset generated here.
pub const SEED: u64 = 20_240_917;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl CriterionReport {
    /// One line: `PASS  3  name  detail  (elapsed / limit)`.
    pub fn line(&self) -> String {
        format!(
            "{} {:>2}  {:<28} {}  ({:.3} ms / {:.0} ms)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64() * 1e3,
            self.limit.as_secs_f64() * 1e3
        )
    }
}

/// Runs `check`, re-timing it up to twice more (best of three) when the first
/// run overshoots the budget, so a scheduler hiccup does not fail a
/// sub-millisecond check.
fn run(id: u8, name: &'static str, limit: Duration, check: impl Fn() -> Result<(bool, String)>) -> CriterionReport {
    let start = Instant::now();
    let outcome = check();
    let mut elapsed = start.elapsed();
    for _ in 0..2 {
        if elapsed <= limit {
            break;
        }
        let start = Instant::now();
        let _ = check();
        elapsed = elapsed.min(start.elapsed());
    }
    let (ok, detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    let within = elapsed <= limit;
    let detail = if within {
        detail
    } else {
        format!("{detail}; over time budget")
    };
    CriterionReport {
        id,
        name,
        passed: ok && within,
        detail,
        elapsed,
        limit,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

const MS: Duration = Duration::from_millis(1);

pub fn cpw_derivation() -> CriterionReport {
    run(1, "CPW derivation", MS, || {
        let e = cpw_geometry_to_electrical(presets::CPW_WIDTH, presets::CPW_GAP, presets::EPS_GAAS)?;
        let ok = (e.eps_eff - 5.8).abs() < 1e-12 && rel(e.c_per_len, 0.13e-9) < 0.08 && rel(e.l_geo_per_len, 0.49e-6) < 0.08;
        Ok((
            ok,
            format!(
                "eps_eff = {:.4}, C' = {:.4} nF/m, L' = {:.4} uH/m",
                e.eps_eff,
                e.c_per_len * 1e9,
                e.l_geo_per_len * 1e6
            ),
        ))
    })
}

pub fn kinetic_inductance() -> CriterionReport {
    run(2, "kinetic inductance", MS, || {
        let e = cpw_geometry_to_electrical(presets::CPW_WIDTH, presets::CPW_GAP, presets::EPS_GAAS)?;
        let l_kin = kinetic_inductance_from_f0(presets::F0_MEASURED, presets::CPW_LENGTH, &e)?;
        let z = characteristic_impedance(e.l_geo_per_len + l_kin, e.c_per_len)?;
        let ok = rel(l_kin, 1.8e-6) < 0.15 && rel(z, 130.0) < 0.05;
        Ok((ok, format!("L_k = {:.4} uH/m, Z_c = {:.2} ohm", l_kin * 1e6, z)))
    })
}

pub fn external_coupling() -> CriterionReport {
    run(3, "external coupling", MS, || {
        let e = cpw_geometry_to_electrical(presets::CPW_WIDTH, presets::CPW_GAP, presets::EPS_GAAS)?;
        let c_total = e.c_per_len * presets::CPW_LENGTH;
        let w = AngularFrequency::from_hz(presets::F0_MEASURED);
        let q = q_ext(c_total, w, presets::R_LOAD, presets::C_K)?;
        let kappa_ext = w.hz() / q;
        Ok((
            rel(kappa_ext, 8.3e6) < 0.10,
            format!("Q_ext = {:.0}, kappa_ext/2pi = {:.3} MHz", q, kappa_ext * 1e-6),
        ))
    })
}

/// Sheet-resistance grid of the loaded-Q check: 50 points, 10⁻²…10^4.125
/// Ω/sq in eighth decades (10³ is point 40).
pub fn sheet_resistance_grid() -> Vec<f64> {
    (0..50).map(|i| 10f64.powf(-2.0 + 0.125 * i as f64)).collect()
}

pub fn loaded_q() -> CriterionReport {
    run(4, "loaded-Q simulation", Duration::from_secs(1), || {
        let q = simulate_loaded_q(&presets::loss_circuit(), &sheet_resistance_grid())?;
        let plateau = q[0].1;
        let at_1k = q[40].1;
        let ok = rel(plateau, 600.0) < 0.2 && at_1k < 0.5 * plateau;
        Ok((ok, format!("plateau Q_L = {plateau:.1}, Q_L(1e3 ohm/sq) = {at_1k:.1}")))
    })
}

fn g0_hz(d: f64, z_c: f64, h_qd: f64) -> Result<f64> {
    let mut res = presets::paper_device();
    res.omega_m = AngularFrequency::from_hz(presets::F0_MEASURED);
    res.z_c = z_c;
    let eps_eff = cpw_geometry_to_electrical(res.width_w, res.gap_s, res.eps_substrate)?.eps_eff;
    Ok(coupling_strength_theory(d, &res, h_qd, res.eps_substrate, eps_eff)?.hz())
}

pub fn g0_theory() -> CriterionReport {
    run(5, "g0 theory line", MS, || {
        let g = g0_hz(0.9e-9, 130.0, presets::H_QD)?;
        let g2 = g0_hz(1.8e-9, 130.0, presets::H_QD)?;
        let factor = g0_hz(0.9e-9, 5000.0, 80e-9)? / g;
        let ok = g > 1.56e6 / 2.0 && g < 2.0 * 1.56e6 && rel(g2, 2.0 * g) < 1e-15 && (factor - 19.4).abs() <= 0.1;
        Ok((ok, format!("g0/2pi(0.9 nm) = {:.3} MHz, scaling x{factor:.2}", g * 1e-6)))
    })
}

pub fn c0_projection() -> CriterionReport {
    run(6, "C0 = 1 projection", MS, || {
        let gamma = AngularFrequency::from_hz(presets::GAMMA_TRANSFORM_LIMITED_HZ);
        let kappa = gamma * 1e-6;
        let per_metre = AngularFrequency::from_hz(g0_hz(1.0, 5000.0, 80e-9)?).rad_per_s();
        let d = dipole_for_cooperativity(1.0, per_metre, gamma, kappa)?;
        Ok((rel(d, 2.6e-9) < 0.2, format!("|d| = {:.3} nm", d * 1e9)))
    })
}

pub fn efficiency_formulas() -> CriterionReport {
    run(7, "efficiency formulas", MS, || {
        let gamma = AngularFrequency::from_hz(300e6);
        let kappa = AngularFrequency::from_hz(138e6);
        let far = eta_far_detuned(1.0, gamma, AngularFrequency::from_hz(9.7e9))?.eta_int;
        let near_at = |c0: f64| -> Result<f64> {
            let g0 = g0_for_cooperativity(c0, gamma, kappa)?;
            Ok(eta_near_resonance(&CooperativityInputs { g0, gamma, kappa }, AngularFrequency::ZERO, None)?.eta_int)
        };
        let at_one = near_at(1.0)?;
        let mut worst: f64 = 0.0;
        for i in 0..=900 {
            let c0 = 10f64.powf(-6.0 + 0.01 * i as f64);
            worst = worst.max(rel(near_at(c0)?, 4.0 * c0 / (1.0 + c0).powi(2)));
        }
        let ok = (far - 9.6e-4).abs() < 1e-5 && (at_one - 1.0).abs() < 1e-12 && worst < 1e-12;
        Ok((
            ok,
            format!("eta_far = {far:.4e}, eta_near(0) = {at_one:.15}, max rel dev {worst:.1e}"),
        ))
    })
}

pub fn gain_linearity() -> CriterionReport {
    run(8, "gain linearity", Duration::from_millis(10), || {
        let gamma = AngularFrequency::from_hz(presets::GAMMA_INH_HZ);
        let kappa = AngularFrequency::from_hz(138e6);
        let wm = AngularFrequency::from_hz(presets::F0_MEASURED);
        let target = 3e-8;
        let c0 = c0_for_eta(target, gamma, wm)?;
        let drives = (0..60)
            .map(|i| DriveState::new(10f64.powf(2.0 + 0.1 * i as f64), 1.0, ConversionBranch::MicrowaveToOptical))
            .collect::<Result<Vec<_>>>()?;
        let sweep = gain_sweep(&drives, c0, gamma, wm)?;
        let red = DriveState::new(1.0, 1.0, ConversionBranch::MicrowaveToOptical)?;
        let blue = DriveState::new(0.0, 1.0, ConversionBranch::OpticalToMicrowave)?;
        let g_red = internal_gain(multiphoton_cooperativity(c0, &red)?, gamma, wm)?;
        let g_blue = internal_gain(multiphoton_cooperativity(c0, &blue)?, gamma, wm)?;
        let g0 = AngularFrequency::from_hz(1.6e6);
        let measured = eta_far_detuned(
            single_photon_cooperativity(&CooperativityInputs { g0, gamma, kappa })?,
            gamma,
            wm,
        )?
        .eta_int;
        let ok = rel(sweep.eta_int, target) < 0.02 && g_red == g_blue && (1e-8..=1e-6).contains(&measured);
        Ok((
            ok,
            format!(
                "extracted eta = {:.4e}, branches equal: {}, eta(g0 = 1.6 MHz) = {measured:.2e}",
                sweep.eta_int,
                g_red == g_blue
            ),
        ))
    })
}

/// Carrier and first-sideband amplitudes scale·|J_l(2g₀√n_m/ω_m)| on
/// `n_values`, with optional multiplicative Gaussian noise of relative size
/// `noise`.
pub fn synth_bessel_amplitudes(
    g0_hz: f64,
    omega_m: AngularFrequency,
    n_values: &[f64],
    noise: f64,
    seed: u64,
) -> Result<Vec<(u32, f64, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, noise.max(0.0)).map_err(|e| crate::Error::InvalidParameter {
        field: "noise",
        reason: e.to_string(),
    })?;
    let g0 = AngularFrequency::from_hz(g0_hz);
    let mut out = Vec::with_capacity(2 * n_values.len());
    for &n in n_values {
        let beta = modulation_index(g0, n, omega_m)?;
        for l in 0..2u32 {
            let a = bessel_j(BesselOrder::new(l)?, beta)?.abs();
            out.push((l, n, a * (1.0 + normal.sample(&mut rng))));
        }
    }
    Ok(out)
}

/// Photon numbers of the sideband fit: 0 to 3·10⁷ in 21 steps.
pub fn bessel_photon_grid() -> Vec<f64> {
    (0..=20).map(|i| 1.5e6 * i as f64).collect()
}

/// Grid scan then Levenberg–Marquardt on sideband amplitudes. `scale` as in
/// [`adapters::bessel_amplitudes`].
pub fn fit_bessel(data: &[(u32, f64, f64)], omega_m: AngularFrequency, scale: Option<f64>) -> Result<FitResult> {
    adapters::fit_bessel_amplitudes(
        data.iter().map(|&(l, n, a)| (l, n, a, None)),
        omega_m,
        scale,
        10e6,
        &LmOptions::default(),
    )
}

pub fn sideband_pipeline() -> CriterionReport {
    run(9, "sideband/Bessel pipeline", Duration::from_secs(1), || {
        let wm = AngularFrequency::from_hz(9717e6);
        let g0 = 1.56e6;
        let beta = modulation_index(AngularFrequency::from_hz(g0), 3e6, wm)?;
        let grid = bessel_photon_grid();
        let clean = fit_bessel(&synth_bessel_amplitudes(g0, wm, &grid, 0.0, SEED)?, wm, None)?;
        let noisy = fit_bessel(&synth_bessel_amplitudes(g0, wm, &grid, 0.03, SEED)?, wm, Some(1.0))?;
        let g_clean = clean.params[0];
        let (g_noisy, err) = (noisy.params[0], noisy.std_errors[0]);
        let ok = (beta - 0.556).abs() <= 1e-3
            && rel(g_clean, g0) < 1e-3
            && clean.converged
            && noisy.converged
            && (0.005e6..=0.08e6).contains(&err)
            && (g_noisy - g0).abs() < 4.0 * err;
        Ok((
            ok,
            format!(
                "beta = {beta:.4}, g0 = {:.4} MHz (noiseless), {:.3} +- {:.3} MHz (3% noise)",
                g_clean * 1e-6,
                g_noisy * 1e-6,
                err * 1e-6
            ),
        ))
    })
}

/// Both branches on `biases` with Gaussian noise `noise_ev` (eV).
pub fn synth_anticrossing(
    p: &AnticrossingParams,
    biases: &[f64],
    noise_ev: f64,
    seed: u64,
) -> Result<Vec<(f64, Branch, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, noise_ev.max(0.0)).map_err(|e| crate::Error::InvalidParameter {
        field: "noise",
        reason: e.to_string(),
    })?;
    let mut out = Vec::with_capacity(2 * biases.len());
    for &v in biases {
        let e = anticrossing_energies(v, p)?;
        out.push((v, Branch::Upper, e.upper + normal.sample(&mut rng)));
        out.push((v, Branch::Lower, e.lower + normal.sample(&mut rng)));
    }
    Ok(out)
}

/// 81 biases spanning ±0.4 V around the minimum-splitting bias.
pub fn anticrossing_bias_grid(p: &AnticrossingParams) -> Result<Vec<f64>> {
    let v_star = min_splitting_bias(p)?;
    Ok((0..81).map(|i| v_star - 0.4 + 0.01 * i as f64).collect())
}

/// Anticrossing fit with d_dir held at zero, started away from `start`.
pub fn fit_anticrossing(data: &[(f64, Branch, f64)], start: &AnticrossingParams) -> Result<FitResult> {
    let problem = adapters::anticrossing(data.iter().map(|&(v, b, e)| (v, b, e, None)), start, false)?;
    Ok(lm_fit(&problem, &LmOptions::default())?)
}

pub fn anticrossing_round_trip() -> CriterionReport {
    run(10, "anticrossing round trip", Duration::from_secs(1), || {
        let mut ok = true;
        let mut parts = Vec::new();
        for (name, truth, seed) in [
            ("QDM1", presets::qdm1_anticrossing(), SEED),
            ("QDM2", presets::qdm2_anticrossing(), SEED + 1),
        ] {
            let v_star = min_splitting_bias(&truth)?;
            let b = anticrossing_energies(v_star, &truth)?;
            ok &= rel(b.splitting(), 2.0 * truth.t) < 1e-12;
            let data = synth_anticrossing(&truth, &anticrossing_bias_grid(&truth)?, 0.02e-3, seed)?;
            let start = AnticrossingParams {
                eps_qd: truth.eps_qd + 0.5e-3,
                eps_diff: truth.eps_diff * 0.9,
                d_ind: truth.d_ind * 1.1,
                t: truth.t * 1.2,
                ..truth
            };
            let fit = fit_anticrossing(&data, &start)?;
            let want = [truth.eps_qd, truth.eps_diff, truth.d_dir * 1e9, truth.d_ind * 1e9, truth.t];
            let mut worst: f64 = 0.0;
            for i in [0, 1, 3, 4] {
                let z = (fit.params[i] - want[i]).abs() / fit.std_errors[i];
                worst = worst.max(z);
            }
            ok &= fit.converged && worst < 3.0;
            parts.push(format!("{name}: worst {worst:.2} sigma"));
        }
        Ok((ok, parts.join(", ")))
    })
}

/// Converted-photon Lorentzian seen through the filter etalon, normalised
/// and refitted. Returns the fitted FWHM (Hz).
pub fn etalon_pipeline(fwhm: f64) -> Result<f64> {
    let etalon = presets::etalon();
    let points: Vec<(f64, f64)> = (0..=800)
        .map(|i| {
            let f = -4e9 + 1e7 * i as f64;
            (f, converted_photon_lineshape(f, fwhm, 1.0) * etalon.transmission(f))
        })
        .collect();
    let raw = Spectrum::new(points, "frequency_hz", "counts")?;
    let normalized = normalize_by_etalon(&raw, &etalon)?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = normalized.spectrum.points().iter().copied().unzip();
    let guess = adapters::guess_lorentzian(&xs, &ys);
    let problem = adapters::lorentzian(xs.iter().zip(&ys).map(|(&x, &y)| (x, y, None)), guess)?;
    let fit = lm_fit(&problem, &LmOptions::default())?;
    Ok(fit.params[2].abs())
}

pub fn bandwidth_check() -> CriterionReport {
    run(11, "bandwidth", Duration::from_secs(1), || {
        let b = bandwidth(
            AngularFrequency::from_hz(presets::GAMMA_INH_HZ),
            AngularFrequency::from_hz(138e6),
        )?
        .hz();
        let fitted = etalon_pipeline(b)?;
        let ok = (b - 858e6).abs() < 1.0 && (830e6..=890e6).contains(&b) && rel(fitted, b) < 0.03;
        Ok((ok, format!("B/2pi = {:.1} MHz, etalon pipeline FWHM = {:.1} MHz", b * 1e-6, fitted * 1e-6)))
    })
}

/// Worst |J_{n−1} + J_{n+1} − (2n/x)J_n| over n = 1..40, x ∈ (0, 60].
pub fn bessel_recurrence_residual() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 1..=600 {
        let x = 0.1 * i as f64;
        let mut j: Vec<f64> = Vec::with_capacity(42);
        for n in 0..=41 {
            j.push(bessel_j(BesselOrder::new(n)?, x)?);
        }
        for n in 1..=40 {
            let r = j[n - 1] + j[n + 1] - 2.0 * n as f64 / x * j[n];
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}

/// Worst |J₀ + 2ΣJ_{2k} − 1| for x ∈ [0, 25], orders up to 64.
pub fn bessel_normalization_residual() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..=250 {
        let x = 0.1 * i as f64;
        let mut sum = bessel_j(BesselOrder::new(0)?, x)?;
        for k in 1..=32 {
            sum += 2.0 * bessel_j(BesselOrder::new(2 * k)?, x)?;
        }
        worst = worst.max((sum - 1.0).abs());
    }
    Ok(worst)
}

/// Worst relative AGM-vs-series difference for K on k ∈ [0, 0.999).
pub fn elliptic_agreement() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let k = 0.999 * i as f64 / 1000.0;
        worst = worst.max(rel(elliptic_k(k)?, elliptic_k_series(k)));
    }
    Ok(worst)
}

pub fn special_functions() -> CriterionReport {
    run(12, "special-function oracles", Duration::from_secs(1), || {
        let rec = bessel_recurrence_residual()?;
        let norm = bessel_normalization_residual()?;
        let ell = elliptic_agreement()?;
        let ok = rec < 1e-9 && norm < 1e-10 && ell < 1e-12;
        Ok((
            ok,
            format!("recurrence {rec:.1e}, normalization {norm:.1e}, K agreement {ell:.1e}"),
        ))
    })
}

pub fn run_all() -> Vec<CriterionReport> {
    vec![
        cpw_derivation(),
        kinetic_inductance(),
        external_coupling(),
        loaded_q(),
        g0_theory(),
        c0_projection(),
        efficiency_formulas(),
        gain_linearity(),
        sideband_pipeline(),
        anticrossing_round_trip(),
        bandwidth_check(),
        special_functions(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criteria_report() {
        for r in run_all() {
            println!("{}", r.line());
        }
    }
}
