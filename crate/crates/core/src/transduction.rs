//! Cooperativity, internal efficiency and gain of the QDM transducer, the
//! detuning dependence near the double resonance and the conversion
//! bandwidth.

use num_complex::Complex64;

use crate::error::{non_negative, Error, Result};
use crate::units::{AngularFrequency, DriveState};

/// Inputs of C₀ = 4g₀²/((Γ + κ)Γ). Γ may be the radiative or the
/// inhomogeneous linewidth; the choice is the caller's and is carried into
/// the reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CooperativityInputs {
    pub g0: AngularFrequency,
    pub gamma: AngularFrequency,
    pub kappa: AngularFrequency,
}

impl CooperativityInputs {
    pub fn validate(&self) -> Result<()> {
        AngularFrequency::rate("g0", self.g0)?;
        AngularFrequency::positive_rate("gamma", self.gamma)?;
        AngularFrequency::rate("kappa", self.kappa)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    FarDetuned,
    NearResonance,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Self::FarDetuned => "far-detuned",
            Self::NearResonance => "near-resonance",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyReport {
    pub eta_int: f64,
    pub regime: Regime,
    pub c0: f64,
    pub gamma: AngularFrequency,
    /// Far-detuned only: whether ω_m/Γ > 10(1 + C₀), so that η ≈ C₀(Γ/ω_m)².
    pub approx_eq3_valid: bool,
    pub warnings: Vec<String>,
}

pub fn single_photon_cooperativity(inputs: &CooperativityInputs) -> Result<f64> {
    inputs.validate()?;
    let g = inputs.g0.rad_per_s();
    let gamma = inputs.gamma.rad_per_s();
    Ok(4.0 * g * g / ((gamma + inputs.kappa.rad_per_s()) * gamma))
}

/// g₀ giving cooperativity `c0` for the given linewidths.
pub fn g0_for_cooperativity(c0: f64, gamma: AngularFrequency, kappa: AngularFrequency) -> Result<AngularFrequency> {
    non_negative("c0", c0)?;
    AngularFrequency::positive_rate("gamma", gamma)?;
    AngularFrequency::rate("kappa", kappa)?;
    let g = gamma.rad_per_s();
    Ok(AngularFrequency::from_rad_per_s(
        0.5 * (c0 * (g + kappa.rad_per_s()) * g).sqrt(),
    ))
}

/// Dipole (m) reaching cooperativity `c0` when g₀ grows linearly with the
/// dipole at `g0_per_metre` (rad/s per m).
pub fn dipole_for_cooperativity(
    c0: f64,
    g0_per_metre: f64,
    gamma: AngularFrequency,
    kappa: AngularFrequency,
) -> Result<f64> {
    crate::error::positive("g0_per_metre", g0_per_metre)?;
    Ok(g0_for_cooperativity(c0, gamma, kappa)?.rad_per_s() / g0_per_metre)
}

fn far_detuned_value(c0: f64, ratio: f64) -> f64 {
    4.0 * c0 / ((1.0 + c0).powi(2) + 4.0 * ratio * ratio)
}

/// η = 4C₀/((1 + C₀)² + 4(ω_m/Γ)²).
pub fn eta_far_detuned(c0: f64, gamma: AngularFrequency, omega_m: AngularFrequency) -> Result<EfficiencyReport> {
    non_negative("c0", c0)?;
    AngularFrequency::positive_rate("gamma", gamma)?;
    AngularFrequency::rate("omega_m", omega_m)?;
    let ratio = omega_m / gamma;
    Ok(EfficiencyReport {
        eta_int: far_detuned_value(c0, ratio),
        regime: Regime::FarDetuned,
        c0,
        gamma,
        approx_eq3_valid: ratio > 10.0 * (1.0 + c0),
        warnings: Vec::new(),
    })
}

/// The linear-regime approximation η ≈ C₀(Γ/ω_m)².
pub fn eta_linear_approx(c0: f64, gamma: AngularFrequency, omega_m: AngularFrequency) -> f64 {
    let r = gamma / omega_m;
    c0 * r * r
}

/// Where the rotating-wave treatment of the double resonance is trusted:
/// |Δ_ef − ω_m| < 0.1·(Δ_ef + ω_m).
pub fn rwa_valid(delta_ef: AngularFrequency, omega_m: AngularFrequency) -> bool {
    let d = delta_ef.rad_per_s();
    let w = omega_m.rad_per_s();
    (d - w).abs() < 0.1 * (d + w)
}

fn near_resonance_value(inputs: &CooperativityInputs, delta: AngularFrequency) -> f64 {
    let g = inputs.g0.rad_per_s();
    let gamma = inputs.gamma.rad_per_s();
    // With a = 4g₀² and z = Γ(Γ + κ − 2iδ) the bracket is (a − z)/(a + z), so
    // η = 4a·Re z/|a + z|², which avoids the cancellation in 1 − |·|².
    let a = 4.0 * g * g;
    let z = gamma * Complex64::new(gamma + inputs.kappa.rad_per_s(), -2.0 * delta.rad_per_s());
    4.0 * a * z.re / (a + z).norm_sqr()
}

fn rwa_warning(delta_ef: AngularFrequency, omega_m: AngularFrequency) -> String {
    format!(
        "rotating-wave approximation not valid: |Δ_ef − ω_m| ≥ 0.1·(Δ_ef + ω_m) for Δ_ef/2π = {:e} Hz, ω_m/2π = {:e} Hz",
        delta_ef.hz(),
        omega_m.hz()
    )
}

/// η(δ) = 1 − |1 − 2Γ(Γ + κ − 2iδ)/(4g₀² + Γ(Γ + κ − 2iδ))|² with
/// δ = ω_m − Δ_ef. `rwa` = (Δ_ef, ω_m) adds a warning when outside the
/// rotating-wave window.
pub fn eta_near_resonance(
    inputs: &CooperativityInputs,
    delta: AngularFrequency,
    rwa: Option<(AngularFrequency, AngularFrequency)>,
) -> Result<EfficiencyReport> {
    let c0 = single_photon_cooperativity(inputs)?;
    crate::error::finite("delta", delta.rad_per_s())?;
    let mut warnings = Vec::new();
    if let Some((delta_ef, omega_m)) = rwa {
        if !rwa_valid(delta_ef, omega_m) {
            warnings.push(rwa_warning(delta_ef, omega_m));
        }
    }
    Ok(EfficiencyReport {
        eta_int: near_resonance_value(inputs, delta).clamp(0.0, 1.0),
        regime: Regime::NearResonance,
        c0,
        gamma: inputs.gamma,
        approx_eq3_valid: false,
        warnings,
    })
}

/// C = (n_m + k)·n_o·C₀.
pub fn multiphoton_cooperativity(c0: f64, drive: &DriveState) -> Result<f64> {
    non_negative("c0", c0)?;
    drive.validate()?;
    Ok(drive.photon_multiplier() * c0)
}

/// G = 4C/((1 + C)² + 4(ω_m/Γ)²).
pub fn internal_gain(c: f64, gamma: AngularFrequency, omega_m: AngularFrequency) -> Result<f64> {
    non_negative("c", c)?;
    AngularFrequency::positive_rate("gamma", gamma)?;
    AngularFrequency::rate("omega_m", omega_m)?;
    Ok(far_detuned_value(c, omega_m / gamma))
}

/// C maximising the gain, √(1 + 4(ω_m/Γ)²).
pub fn optimal_cooperativity(gamma: AngularFrequency, omega_m: AngularFrequency) -> f64 {
    let r = omega_m / gamma;
    (1.0 + 4.0 * r * r).sqrt()
}

/// C₀ on the rising side of the far-detuned curve that gives efficiency
/// `eta`.
pub fn c0_for_eta(eta: f64, gamma: AngularFrequency, omega_m: AngularFrequency) -> Result<f64> {
    non_negative("eta", eta)?;
    AngularFrequency::positive_rate("gamma", gamma)?;
    let r = omega_m / gamma;
    if eta == 0.0 {
        return Ok(0.0);
    }
    // η C² + (2η − 4) C + η(1 + 4r²) = 0, smaller root
    let b = 4.0 - 2.0 * eta;
    let c = eta * (1.0 + 4.0 * r * r);
    let disc = b * b - 4.0 * eta * c;
    if disc < 0.0 {
        return Err(Error::InvalidParameter {
            field: "eta",
            reason: format!(
                "{eta} exceeds the largest reachable efficiency {}",
                far_detuned_value(optimal_cooperativity(gamma, omega_m), r)
            ),
        });
    }
    Ok(2.0 * c / (b + disc.sqrt()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GainSweep {
    /// (n_m, G) in grid order.
    pub points: Vec<(f64, f64)>,
    /// Through-origin slope of G against (n_m + k)·n_o over the lowest
    /// decade of the grid.
    pub eta_int: f64,
}

pub fn gain_sweep(
    drives: &[DriveState],
    c0: f64,
    gamma: AngularFrequency,
    omega_m: AngularFrequency,
) -> Result<GainSweep> {
    if drives.is_empty() {
        return Err(Error::EmptyGrid { field: "drive grid" });
    }
    if drives.windows(2).any(|w| w[1].n_m < w[0].n_m) {
        return Err(Error::InvalidParameter {
            field: "drive grid",
            reason: "n_m must be sorted ascending".into(),
        });
    }
    let mut points = Vec::with_capacity(drives.len());
    let mut samples = Vec::with_capacity(drives.len());
    for d in drives {
        let c = multiphoton_cooperativity(c0, d)?;
        let g = internal_gain(c, gamma, omega_m)?;
        points.push((d.n_m, g));
        samples.push((d.photon_multiplier(), g));
    }
    let m_min = samples
        .iter()
        .map(|s| s.0)
        .filter(|&m| m > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !m_min.is_finite() {
        return Err(Error::InvalidParameter {
            field: "drive grid",
            reason: "no point with a non-zero photon multiplier".into(),
        });
    }
    let (sxy, sxx) = samples
        .iter()
        .filter(|s| s.0 > 0.0 && s.0 <= 10.0 * m_min)
        .fold((0.0, 0.0), |(sxy, sxx), &(m, g)| (sxy + m * g, sxx + m * m));
    Ok(GainSweep {
        points,
        eta_int: sxy / sxx,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetuningSweep {
    /// (δ, η) in grid order.
    pub points: Vec<(AngularFrequency, f64)>,
    /// Far-detuned efficiency for the same C₀, Γ and ω_m.
    pub far_detuned_reference: f64,
    pub warnings: Vec<String>,
}

/// η over a grid of δ = ω_m − Δ_ef. Each grid point implies
/// Δ_ef = ω_m − δ, which is checked against the rotating-wave window.
pub fn detuning_sweep(
    deltas: &[AngularFrequency],
    inputs: &CooperativityInputs,
    omega_m: AngularFrequency,
) -> Result<DetuningSweep> {
    if deltas.is_empty() {
        return Err(Error::EmptyGrid { field: "detuning grid" });
    }
    if deltas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter {
            field: "detuning grid",
            reason: "detunings must be sorted ascending".into(),
        });
    }
    let c0 = single_photon_cooperativity(inputs)?;
    let far = eta_far_detuned(c0, inputs.gamma, omega_m)?;
    let mut points = Vec::with_capacity(deltas.len());
    let mut outside = 0usize;
    for &d in deltas {
        crate::error::finite("delta", d.rad_per_s())?;
        if !rwa_valid(omega_m - d, omega_m) {
            outside += 1;
        }
        points.push((d, near_resonance_value(inputs, d).clamp(0.0, 1.0)));
    }
    let mut warnings = Vec::new();
    if outside > 0 {
        warnings.push(format!(
            "rotating-wave approximation not valid at {outside} of {} detunings (|Δ_ef − ω_m| ≥ 0.1·(Δ_ef + ω_m))",
            deltas.len()
        ));
    }
    Ok(DetuningSweep {
        points,
        far_detuned_reference: far.eta_int,
        warnings,
    })
}

/// B = Γ + κ.
pub fn bandwidth(gamma_eff: AngularFrequency, kappa: AngularFrequency) -> Result<AngularFrequency> {
    AngularFrequency::positive_rate("gamma_eff", gamma_eff)?;
    AngularFrequency::rate("kappa", kappa)?;
    Ok(gamma_eff + kappa)
}

/// End-to-end efficiency η_o·η_int.
pub fn end_to_end(eta_int: f64, eta_outcoupling: f64) -> Result<f64> {
    non_negative("eta_int", eta_int)?;
    non_negative("eta_outcoupling", eta_outcoupling)?;
    Ok(eta_int * eta_outcoupling)
}
