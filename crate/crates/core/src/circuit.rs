//! Superconducting coplanar-waveguide resonator: geometry to line constants,
//! kinetic inductance, Q factors, the lumped loss model of the doped back
//! contact, drive-power calibration and the theoretical single-photon
//! coupling g₀.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{non_negative, positive, Error, Result};
use crate::fit::{self, adapters, FitError, LmOptions};
use crate::specfun::elliptic_k;
use crate::units::{AngularFrequency, ResonatorParams, ELEMENTARY_CHARGE, EPSILON_0, HBAR, MU_0};

/// Quasi-static line constants of a CPW on a half-space substrate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpwElectrical {
    pub eps_eff: f64,
    /// F/m
    pub c_per_len: f64,
    /// H/m
    pub l_geo_per_len: f64,
}

/// Conformal-mapping line constants for centre width `w`, gap `s` (m).
///
/// With k = w/(w+2s) and k' = √(1−k²):
/// C' = 4ε₀ε_eff·K(k)/K(k'), L' = (μ₀/4)·K(k')/K(k), ε_eff = (ε_r+1)/2.
pub fn cpw_geometry_to_electrical(w: f64, s: f64, eps_substrate: f64) -> Result<CpwElectrical> {
    positive("width_w", w)?;
    positive("gap_s", s)?;
    if !(eps_substrate >= 1.0 && eps_substrate.is_finite()) {
        return Err(Error::InvalidParameter {
            field: "eps_substrate",
            reason: format!("must be >= 1, got {eps_substrate}"),
        });
    }
    let k = w / (w + 2.0 * s);
    let k_prime = ((1.0 - k) * (1.0 + k)).sqrt();
    let ratio = elliptic_k(k)? / elliptic_k(k_prime)?;
    let eps_eff = 0.5 * (eps_substrate + 1.0);
    Ok(CpwElectrical {
        eps_eff,
        c_per_len: 4.0 * EPSILON_0 * eps_eff * ratio,
        l_geo_per_len: 0.25 * MU_0 / ratio,
    })
}

/// Fundamental λ/2 resonance f₀ = 1/(2l√(L'C')) in Hz.
pub fn resonance_frequency(length_l: f64, l_total_per_len: f64, c_per_len: f64) -> Result<f64> {
    positive("length_l", length_l)?;
    positive("l_total_per_len", l_total_per_len)?;
    positive("c_per_len", c_per_len)?;
    Ok(1.0 / (2.0 * length_l * (l_total_per_len * c_per_len).sqrt()))
}

/// Kinetic inductance per length that places the λ/2 resonance at `f0_meas`.
pub fn kinetic_inductance_from_f0(f0_meas: f64, length_l: f64, elec: &CpwElectrical) -> Result<f64> {
    positive("f0_meas", f0_meas)?;
    positive("length_l", length_l)?;
    positive("c_per_len", elec.c_per_len)?;
    let two_l_f = 2.0 * length_l * f0_meas;
    let l_total = 1.0 / (two_l_f * two_l_f * elec.c_per_len);
    let l_kin = l_total - elec.l_geo_per_len;
    // rounding at an exact match is neither negative nor a real contribution
    if l_kin.abs() <= 1e-12 * l_total {
        return Ok(0.0);
    }
    if l_kin < 0.0 {
        return Err(Error::NegativeKineticInductance {
            l_geo: elec.l_geo_per_len,
            l_total,
        });
    }
    Ok(l_kin)
}

/// Z = √(L'/C') in Ω.
pub fn characteristic_impedance(l_total_per_len: f64, c_per_len: f64) -> Result<f64> {
    positive("l_total_per_len", l_total_per_len)?;
    positive("c_per_len", c_per_len)?;
    Ok((l_total_per_len / c_per_len).sqrt())
}

/// External quality factor Q_ext = C/(4ω_m R_L C_k²) of a resonator with two
/// identical finger capacitors. `c_total` is the whole resonator
/// capacitance C'·l, not the per-length value.
pub fn q_ext(c_total: f64, omega_m: AngularFrequency, r_l: f64, c_k: f64) -> Result<f64> {
    positive("c_total", c_total)?;
    AngularFrequency::positive_rate("omega_m", omega_m)?;
    positive("r_l", r_l)?;
    positive("c_k", c_k)?;
    Ok(c_total / (4.0 * omega_m.rad_per_s() * r_l * c_k * c_k))
}

/// κ = ω/Q.
pub fn decay_rate(omega: AngularFrequency, q: f64) -> Result<AngularFrequency> {
    positive("q", q)?;
    Ok(AngularFrequency::from_rad_per_s(omega.rad_per_s() / q))
}

/// Lumped description of the device used for the loaded-Q simulation.
///
/// Source (R_L) - C_k - resonator node - C_k - load (R_L). The λ/2 line near
/// its fundamental is a parallel RLC with C_eq = C'l/2, L_eq = 1/(ω₀²C_eq),
/// R_eq = Q_int·ω₀·L_eq. The doped layer is a series C_QD–R branch from the
/// resonator node to ground, R = R_s·n_squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossCircuit {
    /// Bare resonance (Hz).
    pub f0_bare: f64,
    /// Ω
    pub z_c: f64,
    /// F
    pub c_k: f64,
    /// F; zero disconnects the loss branch.
    pub c_qd: f64,
    pub q_int_bare: f64,
    /// Port load (Ω).
    pub r_l: f64,
    /// Sheet resistance (Ω/sq) used by [`LossCircuit::s21`] callers that do
    /// not sweep.
    pub r_s: f64,
    /// Squares of doped layer in series with C_QD.
    pub n_squares: f64,
}

/// Parallel RLC equivalent of the bare λ/2 line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LumpedResonator {
    pub c_eq: f64,
    pub l_eq: f64,
    pub r_eq: f64,
}

const CAP_RANGE: (f64, f64) = (1e-16, 1e-12);

impl LossCircuit {
    pub fn validate(&self) -> Result<()> {
        positive("f0_bare", self.f0_bare)?;
        positive("z_c", self.z_c)?;
        positive("r_l", self.r_l)?;
        positive("n_squares", self.n_squares)?;
        non_negative("r_s", self.r_s)?;
        for (field, c, allow_zero) in [("c_k", self.c_k, false), ("c_qd", self.c_qd, true)] {
            if allow_zero && c == 0.0 {
                continue;
            }
            if !(CAP_RANGE.0..=CAP_RANGE.1).contains(&c) {
                return Err(Error::OutOfRange {
                    field,
                    value: c,
                    range: "[1e-16, 1e-12] F",
                });
            }
        }
        if !(self.q_int_bare > 1.0 && self.q_int_bare.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "q_int_bare",
                reason: format!("must be > 1, got {}", self.q_int_bare),
            });
        }
        Ok(())
    }

    /// Total line capacitance C'l = 1/(2f₀Z_c) of a λ/2 resonator.
    pub fn c_total(&self) -> f64 {
        1.0 / (2.0 * self.f0_bare * self.z_c)
    }

    pub fn lumped(&self) -> LumpedResonator {
        let w0 = 2.0 * PI * self.f0_bare;
        let c_eq = 0.5 * self.c_total();
        let l_eq = 1.0 / (w0 * w0 * c_eq);
        LumpedResonator {
            c_eq,
            l_eq,
            r_eq: self.q_int_bare * w0 * l_eq,
        }
    }

    /// Transmission S₂₁ at `freq` (Hz) for sheet resistance `r_s` (Ω/sq).
    pub fn s21(&self, r_s: f64, freq: f64) -> Result<Complex64> {
        let lumped = self.lumped();
        self.s21_with(&lumped, r_s, freq)
    }

    fn s21_with(&self, lumped: &LumpedResonator, r_s: f64, freq: f64) -> Result<Complex64> {
        let w = 2.0 * PI * freq;
        let j = Complex64::i();
        let g_load = Complex64::new(1.0 / self.r_l, 0.0);
        let y_k = j * w * self.c_k;
        let y_res = Complex64::new(1.0 / lumped.r_eq, 0.0) + j * w * lumped.c_eq
            - j / (w * lumped.l_eq);
        let y_qd = if self.c_qd == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            let z = Complex64::new(r_s * self.n_squares, -1.0 / (w * self.c_qd));
            z.inv()
        };
        let zero = Complex64::new(0.0, 0.0);
        let a = [
            [g_load + y_k, -y_k, zero],
            [-y_k, 2.0 * y_k + y_res + y_qd, -y_k],
            [zero, -y_k, g_load + y_k],
        ];
        // unit source voltage behind R_L, Norton form
        let b = [g_load, zero, zero];
        let v = solve_complex(a, b).ok_or(Error::SingularNodalMatrix { frequency_hz: freq })?;
        Ok(2.0 * v[2])
    }

    /// Loaded Q = f_peak/FWHM from a Lorentzian fit to |S₂₁|².
    pub fn loaded_q(&self, r_s: f64) -> Result<f64> {
        self.validate()?;
        positive("r_s", r_s)?;
        let lumped = self.lumped();
        let w0 = 2.0 * PI * self.f0_bare;

        // Starting window from a rough estimate of the loaded resonance.
        let c_load = lumped.c_eq + 2.0 * self.c_k + self.c_qd;
        let mut center = 1.0 / (2.0 * PI * (lumped.l_eq * c_load).sqrt());
        let q_ext_est = lumped.c_eq / (2.0 * w0 * self.r_l * self.c_k * self.c_k);
        let mut q_guess = 1.0 / (1.0 / self.q_int_bare + 1.0 / q_ext_est);
        let mut half = 5.0 * center / q_guess;

        const POINTS: usize = 2001;
        for _ in 0..16 {
            let lo = center - half;
            let step = 2.0 * half / (POINTS - 1) as f64;
            let mut xs = Vec::with_capacity(POINTS);
            let mut ys = Vec::with_capacity(POINTS);
            for i in 0..POINTS {
                let f = lo + step * i as f64;
                xs.push(f);
                ys.push(self.s21_with(&lumped, r_s, f)?.norm_sqr());
            }
            let (peak_idx, &peak) = ys
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .expect("non-empty window");
            if peak_idx < POINTS / 20 || peak_idx > POINTS - POINTS / 20 {
                center = xs[peak_idx];
                half *= 2.0;
                continue;
            }
            let fwhm_guess = half_max_width(&xs, &ys, peak_idx).unwrap_or(half / 5.0);
            if fwhm_guess < 0.05 * 2.0 * half {
                // Window far too wide to resolve the line; zoom in.
                center = xs[peak_idx];
                q_guess = center / fwhm_guess;
                half = 5.0 * center / q_guess;
                continue;
            }
            let problem = adapters::lorentzian(
                xs.iter().zip(&ys).map(|(&x, &y)| (x, y, None)),
                [peak, xs[peak_idx], fwhm_guess, 0.0],
            )?;
            let result = fit::lm_fit(&problem, &LmOptions::default())?;
            if !result.converged {
                return Err(FitError::NotConverged {
                    iterations: result.iterations,
                    chi2: result.chi2,
                }
                .into());
            }
            let f_peak = result.params[1];
            let fwhm = result.params[2].abs();
            if fwhm > 0.4 * 2.0 * half {
                center = f_peak;
                half *= 2.0;
                continue;
            }
            return Ok(f_peak / fwhm);
        }
        Err(FitError::NotConverged {
            iterations: 0,
            chi2: f64::NAN,
        }
        .into())
    }
}

/// Full width at half maximum by linear interpolation around `peak`.
fn half_max_width(xs: &[f64], ys: &[f64], peak: usize) -> Option<f64> {
    let half = 0.5 * ys[peak];
    let cross = |range: &mut dyn Iterator<Item = usize>| -> Option<f64> {
        let mut prev = peak;
        for i in range {
            if ys[i] <= half {
                let t = (half - ys[prev]) / (ys[i] - ys[prev]);
                return Some(xs[prev] + t * (xs[i] - xs[prev]));
            }
            prev = i;
        }
        None
    };
    let right = cross(&mut (peak + 1..xs.len()))?;
    let left = cross(&mut (0..peak).rev())?;
    Some(right - left)
}

/// Gaussian elimination with partial pivoting. `None` when a pivot vanishes.
fn solve_complex<const N: usize>(
    mut a: [[Complex64; N]; N],
    mut b: [Complex64; N],
) -> Option<[Complex64; N]> {
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if !(scale > 0.0 && scale.is_finite()) {
        return None;
    }
    for col in 0..N {
        let pivot = (col..N).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[pivot][col].norm() <= 1e-14 * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..N {
            let factor = a[row][col] / a[col][col];
            for k in col..N {
                let sub = factor * a[col][k];
                a[row][k] -= sub;
            }
            let sub = factor * b[col];
            b[row] -= sub;
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); N];
    for row in (0..N).rev() {
        let mut acc = b[row];
        for k in row + 1..N {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Loaded Q for each sheet resistance, in input order. Points are evaluated
/// in parallel.
pub fn simulate_loaded_q(circuit: &LossCircuit, r_s_values: &[f64]) -> Result<Vec<(f64, f64)>> {
    circuit.validate()?;
    if r_s_values.is_empty() {
        return Err(Error::EmptyGrid { field: "r_s_values" });
    }
    for &r in r_s_values {
        positive("r_s", r)?;
    }
    if r_s_values.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter {
            field: "r_s_values",
            reason: "must be sorted ascending".into(),
        });
    }
    r_s_values
        .par_iter()
        .map(|&r| circuit.loaded_q(r).map(|q| (r, q)))
        .collect()
}

/// Power after a line loss of `loss_db` dB.
pub fn apply_line_loss(power_w: f64, loss_db: f64) -> Result<f64> {
    non_negative("power_w", power_w)?;
    crate::error::finite("loss_db", loss_db)?;
    Ok(power_w * 10f64.powf(-loss_db / 10.0))
}

/// Mean intracavity photon number for drive power `p_m` (W) at the device
/// port, detuned by `delta_m` from the resonance:
/// n_m = (P/ħω_m)·κ_ext/((κ/2)² + Δ_m²).
pub fn photon_number(
    p_m: f64,
    omega_m: AngularFrequency,
    kappa: AngularFrequency,
    kappa_ext: AngularFrequency,
    delta_m: AngularFrequency,
) -> Result<f64> {
    non_negative("p_m", p_m)?;
    AngularFrequency::positive_rate("omega_m", omega_m)?;
    AngularFrequency::positive_rate("kappa_ext", kappa_ext)?;
    AngularFrequency::positive_rate("kappa", kappa)?;
    crate::error::finite("delta_m", delta_m.rad_per_s())?;
    if kappa < kappa_ext {
        return Err(Error::InvalidParameter {
            field: "kappa",
            reason: "total decay rate is smaller than the external one".into(),
        });
    }
    let half_kappa = 0.5 * kappa.rad_per_s();
    let lorentz = half_kappa * half_kappa + delta_m.rad_per_s().powi(2);
    Ok(p_m / (HBAR * omega_m.rad_per_s()) * kappa_ext.rad_per_s() / lorentz)
}

/// RMS vacuum electric field E = √(Z_c ħ ω_m²/π)/h_res in V/m.
pub fn vacuum_field(z_c: f64, omega_m: AngularFrequency, h_res: f64) -> Result<f64> {
    positive("z_c", z_c)?;
    AngularFrequency::positive_rate("omega_m", omega_m)?;
    positive("h_res", h_res)?;
    let w = omega_m.rad_per_s();
    Ok((z_c * HBAR * w * w / PI).sqrt() / h_res)
}

/// Single-photon coupling g₀ = (e d/ħ)·√(ε_eff/ε_sub)·(h_res/h_QD)·E_rms.
///
/// The square root carries the dielectric screening, h_res/h_QD the field
/// concentration between gate and back contact.
pub fn coupling_strength_theory(
    dipole_d: f64,
    res: &ResonatorParams,
    h_qd: f64,
    eps_substrate: f64,
    eps_eff: f64,
) -> Result<AngularFrequency> {
    non_negative("dipole_d", dipole_d)?;
    positive("h_qd", h_qd)?;
    positive("eps_substrate", eps_substrate)?;
    positive("eps_eff", eps_eff)?;
    let e_rms = vacuum_field(res.z_c, res.omega_m, res.h_res)?;
    let screening = (eps_eff / eps_substrate).sqrt();
    let g0 = ELEMENTARY_CHARGE * dipole_d / HBAR * screening * (res.h_res / h_qd) * e_rms;
    Ok(AngularFrequency::from_rad_per_s(g0))
}
