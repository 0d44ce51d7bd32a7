//! Ready-made [`FitProblem`]s for the lineshapes and models that get fitted:
//! Lorentzian and dispersive Lorentzian lines, Bessel sideband amplitudes,
//! the anticrossing of the two molecular branches and the exponential
//! tunnel-splitting law.

use std::f64::consts::PI;

use super::{lm_fit, Bounds, DataPoint, FitError, FitProblem, FitResult, LmOptions, REL_STEP};
use crate::qdm::{anticrossing_energies, Branch};
use crate::specfun::{bessel_j, BesselOrder};
use crate::spectroscopy::{dispersive_lorentzian as dispersive, DispersiveLorentzianParams};
use crate::units::{AngularFrequency, AnticrossingParams};

fn points<I>(data: I) -> Vec<DataPoint<f64>>
where
    I: IntoIterator<Item = (f64, f64, Option<f64>)>,
{
    data.into_iter()
        .map(|(x, y, sigma)| DataPoint { x, y, sigma })
        .collect()
}

/// A·(Γ/2)²/((x−x₀)² + (Γ/2)²) + offset.
///
/// Parameters: `amplitude`, `center`, `fwhm`, `offset`.
pub fn lorentzian<I>(data: I, initial: [f64; 4]) -> Result<FitProblem<f64>, FitError>
where
    I: IntoIterator<Item = (f64, f64, Option<f64>)>,
{
    let fwhm = initial[2].abs();
    FitProblem::new(
        &["amplitude", "center", "fwhm", "offset"],
        vec![initial[0], initial[1], fwhm, initial[3]],
        |p: &[f64], x: &f64| {
            let hw = 0.5 * p[2];
            let d = x - p[1];
            p[0] * hw * hw / (d * d + hw * hw) + p[3]
        },
        points(data),
    )?
    .with_bounds("fwhm", Bounds::Lower(0.0))?
    .with_step("center", REL_STEP * fwhm)
}

/// Starting values for [`lorentzian`]: peak height above the minimum, its
/// position, the half-maximum width and the minimum as offset.
pub fn guess_lorentzian(xs: &[f64], ys: &[f64]) -> [f64; 4] {
    let (imax, &ymax) = ys
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap_or((0, &0.0));
    let ymin = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let half = ymin + 0.5 * (ymax - ymin);
    let left = (0..imax).rev().find(|&i| ys[i] <= half).map_or(xs[0], |i| xs[i]);
    let right = (imax..ys.len()).find(|&i| ys[i] <= half).map_or(xs[xs.len() - 1], |i| xs[i]);
    let mut width = right - left;
    if !(width > 0.0) {
        width = (xs[xs.len() - 1] - xs[0]) / 10.0;
    }
    [ymax - ymin, xs[imax], width, ymin]
}

/// Dispersive Lorentzian with mixing angle θ.
///
/// Parameters: `amplitude`, `center`, `fwhm`, `theta`, `offset`.
pub fn dispersive_lorentzian<I>(data: I, initial: [f64; 5]) -> Result<FitProblem<f64>, FitError>
where
    I: IntoIterator<Item = (f64, f64, Option<f64>)>,
{
    let fwhm = initial[2].abs();
    FitProblem::new(
        &["amplitude", "center", "fwhm", "theta", "offset"],
        vec![initial[0], initial[1], fwhm, initial[3], initial[4]],
        |p: &[f64], x: &f64| {
            let params = DispersiveLorentzianParams {
                amplitude_a: p[0],
                center: p[1],
                fwhm: p[2],
                phase_theta: p[3],
                offset: p[4],
            };
            dispersive(*x, &params)
        },
        points(data),
    )?
    .with_bounds("fwhm", Bounds::Lower(0.0))?
    .with_step("center", REL_STEP * fwhm)
}

/// Fits a dispersive Lorentzian from four starting phases and keeps the
/// lowest χ². Width and centre start from the spread of the extrema.
pub fn fit_dispersive_multistart(
    data: &[(f64, f64, Option<f64>)],
    opts: &LmOptions,
) -> Result<FitResult, FitError> {
    if data.len() < 6 {
        return Err(FitError::TooFewPoints {
            points: data.len(),
            required: 6,
        });
    }
    let xs: Vec<f64> = data.iter().map(|d| d.0).collect();
    let ys: Vec<f64> = data.iter().map(|d| d.1).collect();
    let mut sorted = ys.clone();
    sorted.sort_by(f64::total_cmp);
    let offset = sorted[sorted.len() / 2];
    let (imax, ymax) = argmax(&ys);
    let (imin, ymin) = argmin(&ys);
    let span = (xs[xs.len() - 1] - xs[0]).abs();
    let swing = (ymax - offset).abs().max((offset - ymin).abs());
    let mut width = (xs[imax] - xs[imin]).abs();
    let center_guess = if width > 0.0 && width < 0.5 * span {
        0.5 * (xs[imax] + xs[imin])
    } else {
        width = span / 20.0;
        if (ymax - offset).abs() >= (offset - ymin).abs() {
            xs[imax]
        } else {
            xs[imin]
        }
    };
    let mut best: Option<FitResult> = None;
    for k in 0..4 {
        let theta = k as f64 * 0.5 * PI;
        // peak of either quadrature is ~A/Γ, so A ~ swing·Γ
        let initial = [swing * width, center_guess, width, theta, offset];
        let problem = dispersive_lorentzian(data.iter().copied(), initial)?;
        let Ok(fit) = lm_fit(&problem, opts) else {
            continue;
        };
        let better = match &best {
            None => true,
            Some(b) => (fit.converged && !b.converged) || (fit.converged == b.converged && fit.chi2 < b.chi2),
        };
        if better {
            best = Some(fit);
        }
    }
    best.ok_or(FitError::NotConverged {
        iterations: 0,
        chi2: f64::NAN,
    })
}

fn argmax(v: &[f64]) -> (usize, f64) {
    v.iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, f64::NAN))
}

fn argmin(v: &[f64]) -> (usize, f64) {
    v.iter()
        .copied()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, f64::NAN))
}

/// One sideband-amplitude sample: order `l` measured at photon number `n_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SidebandSample {
    pub l: u32,
    pub n_m: f64,
}

/// scale·|J_l(2g₀√n_m/ω_m)| for the carrier (l = 0) and first sideband
/// (l = 1) sharing one coupling.
///
/// Parameters: `g0_hz` (g₀/2π) and `scale`. The scale is held fixed, at
/// `scale` when given and otherwise at the carrier amplitude measured at
/// n_m = 0, which leaves g₀ as the only free parameter.
pub fn bessel_amplitudes<I>(
    data: I,
    omega_m: AngularFrequency,
    g0_guess_hz: f64,
    scale: Option<f64>,
) -> Result<FitProblem<SidebandSample>, crate::Error>
where
    I: IntoIterator<Item = (u32, f64, f64, Option<f64>)>,
{
    AngularFrequency::positive_rate("omega_m", omega_m)?;
    let data: Vec<DataPoint<SidebandSample>> = data
        .into_iter()
        .map(|(l, n_m, y, sigma)| DataPoint {
            x: SidebandSample { l, n_m },
            y,
            sigma,
        })
        .collect();
    for d in &data {
        BesselOrder::new(d.x.l)?;
        crate::error::non_negative("n_m", d.x.n_m)?;
    }
    let scale = match scale {
        Some(s) => Some(crate::error::positive("scale", s)?),
        None => data.iter().find(|d| d.x.l == 0 && d.x.n_m == 0.0).map(|d| d.y),
    }
    .ok_or_else(|| crate::Error::InvalidParameter {
            field: "data",
            reason: "need a carrier (l = 0) amplitude at n_m = 0 for the normalisation".into(),
        })?;
    let w = omega_m.rad_per_s();
    let problem = FitProblem::new(
        &["g0_hz", "scale"],
        vec![g0_guess_hz, scale],
        move |p: &[f64], x: &SidebandSample| {
            let beta = 2.0 * AngularFrequency::from_hz(p[0]).rad_per_s() * x.n_m.sqrt() / w;
            match BesselOrder::new(x.l).and_then(|n| bessel_j(n, beta)) {
                Ok(j) => p[1] * j.abs(),
                Err(_) => f64::NAN,
            }
        },
        data,
    )?
    .fix("scale")?;
    Ok(problem)
}

/// Coarse scan of the Bessel χ² over `g0_max_hz·[1e-3, 1]` (log grid) to seed
/// [`bessel_amplitudes`]; avoids locking onto a neighbouring oscillation.
pub fn bessel_initial_guess(problem: &FitProblem<SidebandSample>, g0_max_hz: f64) -> f64 {
    const STEPS: usize = 400;
    let mut best = (f64::INFINITY, problem.initial()[0]);
    let mut params = problem.initial().to_vec();
    for i in 0..STEPS {
        let g = g0_max_hz * 10f64.powf(-3.0 + 3.0 * i as f64 / (STEPS - 1) as f64);
        params[0] = g;
        let chi2: f64 = problem
            .data()
            .iter()
            .map(|d| {
                let w = d.sigma.map_or(1.0, |s| 1.0 / s);
                ((d.y - problem.eval(&params, &d.x)) * w).powi(2)
            })
            .sum();
        if chi2 < best.0 {
            best = (chi2, g);
        }
    }
    best.1
}

/// Grid scan over `g0_max_hz·[1e-3, 1]`, then Levenberg–Marquardt, on
/// `(l, n_m, amplitude, σ)` samples. `scale` as in [`bessel_amplitudes`].
pub fn fit_bessel_amplitudes<I>(
    data: I,
    omega_m: AngularFrequency,
    scale: Option<f64>,
    g0_max_hz: f64,
    opts: &LmOptions,
) -> Result<FitResult, crate::Error>
where
    I: IntoIterator<Item = (u32, f64, f64, Option<f64>)>,
{
    crate::error::positive("g0_max_hz", g0_max_hz)?;
    let problem = bessel_amplitudes(data, omega_m, 1e6, scale)?;
    let mut initial = problem.initial().to_vec();
    initial[0] = bessel_initial_guess(&problem, g0_max_hz);
    let problem = problem.with_initial(initial)?;
    Ok(lm_fit(&problem, opts)?)
}

/// Peak energy of one anticrossing branch at a bias.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchSample {
    pub bias_v: f64,
    pub branch: Branch,
}

/// Anticrossing branches versus bias.
///
/// Parameters: `eps_qd_ev`, `eps_diff_ev`, `d_dir_nm`, `d_ind_nm`, `t_ev`.
/// `d_dir_nm` is held at its initial value; `fix_d_ind` also holds `d_ind_nm`
/// (for instance at a value taken from photoluminescence).
pub fn anticrossing<I>(
    data: I,
    initial: &AnticrossingParams,
    fix_d_ind: bool,
) -> Result<FitProblem<BranchSample>, crate::Error>
where
    I: IntoIterator<Item = (f64, Branch, f64, Option<f64>)>,
{
    initial.validate()?;
    let h_qd = initial.h_qd;
    let data = data
        .into_iter()
        .map(|(bias_v, branch, y, sigma)| DataPoint {
            x: BranchSample { bias_v, branch },
            y,
            sigma,
        })
        .collect();
    let mut problem = FitProblem::new(
        &["eps_qd_ev", "eps_diff_ev", "d_dir_nm", "d_ind_nm", "t_ev"],
        vec![
            initial.eps_qd,
            initial.eps_diff,
            initial.d_dir * 1e9,
            initial.d_ind * 1e9,
            initial.t,
        ],
        move |p: &[f64], x: &BranchSample| {
            let params = AnticrossingParams {
                eps_qd: p[0],
                eps_diff: p[1],
                d_dir: p[2] * 1e-9,
                d_ind: p[3] * 1e-9,
                t: p[4],
                h_qd,
            };
            let e = crate::qdm::anticrossing_unchecked(x.bias_v, &params);
            match x.branch {
                Branch::Upper => e.upper,
                Branch::Lower => e.lower,
            }
        },
        data,
    )?
    .fix("d_dir_nm")?
    .with_bounds("t_ev", Bounds::Lower(0.0))?;
    if fix_d_ind {
        problem = problem.fix("d_ind_nm")?;
    }
    Ok(problem)
}

/// Rebuilds [`AnticrossingParams`] from an [`anticrossing`] fit vector.
pub fn anticrossing_params(params: &[f64], h_qd: f64) -> AnticrossingParams {
    AnticrossingParams {
        eps_qd: params[0],
        eps_diff: params[1],
        d_dir: params[2] * 1e-9,
        d_ind: params[3] * 1e-9,
        t: params[4],
        h_qd,
    }
}

/// Sanity check that the model used by [`anticrossing`] matches the checked
/// public function.
#[doc(hidden)]
pub fn anticrossing_model_agrees(bias_v: f64, p: &AnticrossingParams) -> bool {
    anticrossing_energies(bias_v, p).is_ok_and(|e| e == crate::qdm::anticrossing_unchecked(bias_v, p))
}

/// A·exp(−x/x₀) with `amplitude` in the units of the data.
///
/// Parameters: `amplitude`, `decay_x0`. The start comes from a straight-line
/// fit of ln y against x, which is already exact for noiseless data.
pub fn exponential<I>(data: I) -> Result<FitProblem<f64>, crate::Error>
where
    I: IntoIterator<Item = (f64, f64, Option<f64>)>,
{
    let data = points(data);
    for d in &data {
        crate::error::positive("y", d.y)?;
    }
    let n = data.len() as f64;
    let (sx, sy) = data.iter().fold((0.0, 0.0), |(sx, sy), d| (sx + d.x, sy + d.y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (sxx, sxy) = data.iter().fold((0.0, 0.0), |(sxx, sxy), d| {
        let dx = d.x - mx;
        (sxx + dx * dx, sxy + dx * (d.y.ln() - my))
    });
    let slope = if sxx > 0.0 { sxy / sxx } else { -1.0 };
    let decay = if slope < 0.0 { -1.0 / slope } else { 1.0 };
    let amplitude = (my - slope * mx).exp();
    Ok(FitProblem::new(
        &["amplitude", "decay_x0"],
        vec![amplitude, decay],
        |p: &[f64], x: &f64| p[0] * (-x / p[1]).exp(),
        data,
    )?)
}
