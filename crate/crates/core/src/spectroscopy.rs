//! Lineshapes and synthetic spectra: the dispersive Lorentzian seen in
//! differential reflectance, frequency-modulation sidebands with Bessel
//! weights, the converted-photon Lorentzian and the filter etalon.
//!
//! Frequencies here are ordinary frequencies in Hz.

use std::f64::consts::PI;

use crate::error::{finite, non_negative, positive, Error, Result};
use crate::specfun::{bessel_j_signed, MAX_BESSEL_ORDER};
use crate::units::{AngularFrequency, QdmParams};

/// Transmission below which [`normalize_by_etalon`] drops a point.
pub const ETALON_THRESHOLD: f64 = 0.05;

/// A sampled trace with strictly increasing abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    points: Vec<(f64, f64)>,
    pub axis_label: String,
    pub value_label: String,
}

impl Spectrum {
    pub fn new(points: Vec<(f64, f64)>, axis_label: impl Into<String>, value_label: impl Into<String>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyGrid { field: "spectrum" });
        }
        for (i, &(x, y)) in points.iter().enumerate() {
            finite("frequency", x)?;
            if !y.is_finite() {
                return Err(Error::InvalidParameter {
                    field: "value",
                    reason: format!("point {i} has non-finite value {y}"),
                });
            }
        }
        if let Some(i) = points.windows(2).position(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidParameter {
                field: "frequency",
                reason: format!("abscissa must be strictly increasing (points {i} and {})", i + 1),
            });
        }
        Ok(Self {
            points,
            axis_label: axis_label.into(),
            value_label: value_label.into(),
        })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.0).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.1).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<(f64, f64)> {
        self.points
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersiveLorentzianParams {
    pub amplitude_a: f64,
    /// Hz
    pub center: f64,
    /// Hz
    pub fwhm: f64,
    /// rad
    pub phase_theta: f64,
    pub offset: f64,
}

impl DispersiveLorentzianParams {
    pub fn validate(&self) -> Result<()> {
        finite("amplitude_a", self.amplitude_a)?;
        finite("center", self.center)?;
        positive("fwhm", self.fwhm)?;
        finite("phase_theta", self.phase_theta)?;
        finite("offset", self.offset)?;
        Ok(())
    }
}

/// A·[(Γ/2)cos θ − δ sin θ]/(δ² + (Γ/2)²) + offset with δ = `freq` − centre.
pub fn dispersive_lorentzian(freq: f64, p: &DispersiveLorentzianParams) -> f64 {
    let hw = 0.5 * p.fwhm;
    let d = freq - p.center;
    p.amplitude_a * (hw * p.phase_theta.cos() - d * p.phase_theta.sin()) / (d * d + hw * hw) + p.offset
}

/// β = 2g₀√n_m/ω_m.
pub fn modulation_index(g0: AngularFrequency, n_m: f64, omega_m: AngularFrequency) -> Result<f64> {
    non_negative("n_m", n_m)?;
    AngularFrequency::positive_rate("omega_m", omega_m)?;
    AngularFrequency::rate("g0", g0)?;
    Ok(2.0 * (g0 / omega_m) * n_m.sqrt())
}

/// How sideband weights follow from the Bessel functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SidebandMode {
    /// |J_l(β)|
    #[default]
    Abs,
    /// J_l(β)², the power weights.
    Squared,
}

impl SidebandMode {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "abs" => Some(Self::Abs),
            "squared" => Some(Self::Squared),
            _ => None,
        }
    }
}

/// Weights of orders −l_max..=l_max. With all orders included ΣJ_l² = 1, so
/// no extra normalisation is applied.
pub fn sideband_amplitudes(beta: f64, l_max: u32, mode: SidebandMode) -> Result<Vec<(i32, f64)>> {
    finite("beta", beta)?;
    if l_max > MAX_BESSEL_ORDER {
        return Err(Error::OutOfRange {
            field: "l_max",
            value: l_max as f64,
            range: "[0, 64]",
        });
    }
    let l_max = l_max as i32;
    (-l_max..=l_max)
        .map(|l| {
            let j = bessel_j_signed(l, beta)?;
            Ok((
                l,
                match mode {
                    SidebandMode::Abs => j.abs(),
                    SidebandMode::Squared => j * j,
                },
            ))
        })
        .collect()
}

/// Sum of dispersive lines at f_QD + l·f_m weighted by the sideband
/// amplitudes, sampled on `grid` (Hz). The line centre is taken from `qdm`;
/// `lineshape` supplies amplitude, width, phase and offset.
#[allow(clippy::too_many_arguments)]
pub fn synth_sideband_spectrum(
    qdm: &QdmParams,
    g0: AngularFrequency,
    n_m: f64,
    omega_m: AngularFrequency,
    lineshape: &DispersiveLorentzianParams,
    l_max: u32,
    mode: SidebandMode,
    grid: &[f64],
) -> Result<Spectrum> {
    qdm.validate()?;
    lineshape.validate()?;
    let beta = modulation_index(g0, n_m, omega_m)?;
    let weights = sideband_amplitudes(beta, l_max, mode)?;
    let f_qd = qdm.omega_qd.hz();
    let f_m = omega_m.hz();
    let line = |f: f64, center: f64| {
        dispersive_lorentzian(
            f,
            &DispersiveLorentzianParams {
                center,
                offset: 0.0,
                ..*lineshape
            },
        )
    };
    let points = grid
        .iter()
        .map(|&f| {
            let v: f64 = weights
                .iter()
                .map(|&(l, w)| w * line(f, f_qd + l as f64 * f_m))
                .sum();
            (f, v + lineshape.offset)
        })
        .collect();
    Spectrum::new(points, "frequency_hz", "signal")
}

/// A·(Γ/2)²/(δ² + (Γ/2)²).
pub fn converted_photon_lineshape(delta: f64, fwhm: f64, amplitude: f64) -> f64 {
    let hw = 0.5 * fwhm;
    amplitude * hw * hw / (delta * delta + hw * hw)
}

/// Airy etalon, all in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtalonParams {
    pub center: f64,
    pub fwhm: f64,
    pub fsr: f64,
}

impl EtalonParams {
    pub fn validate(&self) -> Result<()> {
        finite("center", self.center)?;
        positive("fwhm", self.fwhm)?;
        positive("fsr", self.fsr)?;
        if self.fwhm >= self.fsr {
            return Err(Error::InvalidParameter {
                field: "fwhm",
                reason: format!("etalon linewidth {:e} Hz must be below the FSR {:e} Hz", self.fwhm, self.fsr),
            });
        }
        Ok(())
    }

    pub fn finesse(&self) -> f64 {
        self.fsr / self.fwhm
    }

    /// T = 1/(1 + (2F/π)²·sin²(π(f − centre)/FSR)).
    pub fn transmission(&self, freq: f64) -> f64 {
        let c = 2.0 * self.finesse() / PI;
        let s = (PI * (freq - self.center) / self.fsr).sin();
        1.0 / (1.0 + c * c * s * s)
    }
}

pub fn etalon_transmission(freq: f64, center: f64, fwhm: f64, fsr: f64) -> Result<f64> {
    let e = EtalonParams { center, fwhm, fsr };
    e.validate()?;
    finite("frequency", freq)?;
    Ok(e.transmission(freq))
}

/// Output of [`normalize_by_etalon`].
#[derive(Debug, Clone, PartialEq)]
pub struct EtalonNormalized {
    pub spectrum: Spectrum,
    /// Raw points left out because T < [`ETALON_THRESHOLD`].
    pub dropped: Vec<(f64, f64)>,
}

/// Divides `raw` by the etalon transmission, skipping points where it is
/// below [`ETALON_THRESHOLD`].
pub fn normalize_by_etalon(raw: &Spectrum, etalon: &EtalonParams) -> Result<EtalonNormalized> {
    etalon.validate()?;
    let mut kept = Vec::with_capacity(raw.len());
    let mut dropped = Vec::new();
    for &(f, y) in raw.points() {
        let t = etalon.transmission(f);
        if t < ETALON_THRESHOLD {
            dropped.push((f, y));
        } else {
            kept.push((f, y / t));
        }
    }
    if kept.is_empty() {
        return Err(Error::AllBelowThreshold {
            threshold: ETALON_THRESHOLD,
        });
    }
    Ok(EtalonNormalized {
        spectrum: Spectrum::new(kept, raw.axis_label.clone(), raw.value_label.clone())?,
        dropped,
    })
}
