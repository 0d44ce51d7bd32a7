//! Electrostatics of the quantum-dot molecule: the two exciton branches
//! versus gate bias, the effective dipole taken from their slope, the
//! DC-Stark shift and the tunnel splitting as a function of barrier
//! composition.
//!
//! Bias terms are written as V·d/h_QD, which is an energy in eV when V is in
//! volts and d, h_QD share a length unit.

use crate::error::{finite, non_negative, positive, Error, Result};
use crate::units::{AngularFrequency, AnticrossingParams, ELEMENTARY_CHARGE};

/// Energies (eV) of the two branches at one bias.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnticrossingBranch {
    pub upper: f64,
    pub lower: f64,
}

impl AnticrossingBranch {
    pub fn splitting(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn get(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Upper => self.upper,
            Branch::Lower => self.lower,
        }
    }
}

/// Which branch a resonance scan follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    Upper,
    #[default]
    Lower,
}

impl Branch {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "upper" | "+" | "+1" | "1" => Some(Self::Upper),
            "lower" | "-" | "-1" => Some(Self::Lower),
            _ => None,
        }
    }

    /// +1 for the upper branch, −1 for the lower one.
    pub fn sign(self) -> f64 {
        match self {
            Self::Upper => 1.0,
            Self::Lower => -1.0,
        }
    }

    pub fn from_sign(s: f64) -> Option<Self> {
        if s == 1.0 {
            Some(Self::Upper)
        } else if s == -1.0 {
            Some(Self::Lower)
        } else {
            None
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Upper => "upper",
            Self::Lower => "lower",
        }
    }
}

fn detuning_term(v_bias: f64, p: &AnticrossingParams) -> f64 {
    p.eps_diff + v_bias / p.h_qd * (p.d_dir - p.d_ind)
}

/// Branch energies without validating `p`. Used by fits, where the
/// optimiser may wander through unphysical parameter sets.
pub fn anticrossing_unchecked(v_bias: f64, p: &AnticrossingParams) -> AnticrossingBranch {
    let mean = p.eps_qd + 0.5 * (p.eps_diff + v_bias / p.h_qd * (p.d_dir + p.d_ind));
    let u = detuning_term(v_bias, p);
    let root = 0.5 * u.hypot(2.0 * p.t);
    AnticrossingBranch {
        upper: mean + root,
        lower: mean - root,
    }
}

/// ε± = ε_QD + ½(ε_diff + V(d_dir + d_ind)/h_QD) ± ½√((ε_diff + V(d_dir − d_ind)/h_QD)² + 4t²).
pub fn anticrossing_energies(v_bias: f64, p: &AnticrossingParams) -> Result<AnticrossingBranch> {
    finite("v_bias", v_bias)?;
    p.validate()?;
    Ok(anticrossing_unchecked(v_bias, p))
}

/// Bias at which the branches come closest (splitting 2t).
pub fn min_splitting_bias(p: &AnticrossingParams) -> Result<f64> {
    p.validate()?;
    Ok(p.eps_diff * p.h_qd / (p.d_ind - p.d_dir))
}

/// Effective dipole |d| = h_QD·|dε/dV| of the chosen branch (m).
pub fn effective_dipole_on(v_bias: f64, p: &AnticrossingParams, branch: Branch) -> Result<f64> {
    finite("v_bias", v_bias)?;
    p.validate()?;
    let u = detuning_term(v_bias, p);
    let s = u / u.hypot(2.0 * p.t);
    let d = 0.5 * (p.d_dir + p.d_ind) + branch.sign() * 0.5 * (p.d_dir - p.d_ind) * s;
    Ok(d.abs())
}

/// Effective dipole on the lower branch.
pub fn effective_dipole(v_bias: f64, p: &AnticrossingParams) -> Result<f64> {
    effective_dipole_on(v_bias, p, Branch::Lower)
}

/// Optional charge-stability window for the gate bias.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasLimits {
    pub lo: f64,
    pub hi: f64,
}

impl BiasLimits {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        finite("lo", lo)?;
        finite("hi", hi)?;
        if lo >= hi {
            return Err(Error::InvalidParameter {
                field: "lo",
                reason: format!("lower bias limit {lo} V must be below the upper one {hi} V"),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn clamp(&self, v: f64) -> f64 {
        v.clamp(self.lo, self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        (self.lo..=self.hi).contains(&v)
    }
}

/// Bias at which the chosen branch has effective dipole `d_target` (m).
///
/// The slope varies monotonically between d_dir and d_ind, so the inverse is
/// unique. Targets outside that open interval, or solutions outside `limits`,
/// are rejected.
pub fn bias_for_dipole(
    d_target: f64,
    p: &AnticrossingParams,
    branch: Branch,
    limits: Option<BiasLimits>,
) -> Result<f64> {
    non_negative("d_target", d_target)?;
    p.validate()?;
    let (lo, hi) = limits.map_or((f64::NEG_INFINITY, f64::INFINITY), |l| (l.lo, l.hi));
    let diff = p.d_dir - p.d_ind;
    let s = branch.sign() * (2.0 * d_target - (p.d_dir + p.d_ind)) / diff;
    if !(s > -1.0 && s < 1.0) {
        return Err(Error::NoSolution { lo, hi });
    }
    let u = 2.0 * p.t * s / (1.0 - s * s).sqrt();
    let v = (u - p.eps_diff) * p.h_qd / diff;
    if !(lo..=hi).contains(&v) {
        return Err(Error::NoSolution { lo, hi });
    }
    Ok(v)
}

/// DC-Stark shift δε = e·d·E (J).
pub fn stark_shift(dipole_d: f64, e_field: f64) -> f64 {
    ELEMENTARY_CHARGE * dipole_d * e_field
}

/// Instantaneous exciton frequency ω_QD + 2g₀√n_m·sin(ω_m t).
pub fn exciton_modulation(
    omega_qd: AngularFrequency,
    g0: AngularFrequency,
    n_m: f64,
    omega_m: AngularFrequency,
    t: f64,
) -> AngularFrequency {
    let excursion = 2.0 * g0.rad_per_s() * n_m.max(0.0).sqrt();
    omega_qd + AngularFrequency::from_rad_per_s(excursion * (omega_m.rad_per_s() * t).sin())
}

/// Δ_ef(x)/2π = A·exp(−x/x₀) with A in GHz and x the barrier Al fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TunnelBarrierModel {
    pub amplitude_a: f64,
    pub decay_x0: f64,
}

/// Largest Al fraction the exponential law is applied to.
pub const MAX_AL_FRACTION: f64 = 0.45;

impl TunnelBarrierModel {
    pub fn new(amplitude_a: f64, decay_x0: f64) -> Result<Self> {
        positive("amplitude_a", amplitude_a)?;
        positive("decay_x0", decay_x0)?;
        Ok(Self {
            amplitude_a,
            decay_x0,
        })
    }

    /// Exponential through two (x, GHz) points.
    pub fn through_points(a: (f64, f64), b: (f64, f64)) -> Result<Self> {
        positive("splitting", a.1)?;
        positive("splitting", b.1)?;
        finite("x", a.0)?;
        finite("x", b.0)?;
        if a.0 == b.0 {
            return Err(Error::InvalidParameter {
                field: "x",
                reason: "the two points need different compositions".into(),
            });
        }
        let x0 = (b.0 - a.0) / (a.1 / b.1).ln();
        let amplitude = a.1 * (a.0 / x0).exp();
        Self::new(amplitude, x0)
    }

    pub fn splitting_ghz(&self, x_al: f64) -> f64 {
        self.amplitude_a * (-x_al / self.decay_x0).exp()
    }
}

/// Tunnel splitting Δ_ef for Al fraction `x_al` ∈ [0, 0.45].
pub fn tunnel_splitting(x_al: f64, m: &TunnelBarrierModel) -> Result<AngularFrequency> {
    if !(0.0..=MAX_AL_FRACTION).contains(&x_al) {
        return Err(Error::OutOfRange {
            field: "x_al",
            value: x_al,
            range: "[0, 0.45]",
        });
    }
    Ok(AngularFrequency::from_hz(m.splitting_ghz(x_al) * 1e9))
}

/// Measured inhomogeneous linewidth against |d|, interpolated linearly and
/// held constant beyond the table ends.
#[derive(Debug, Clone, PartialEq)]
pub struct LinewidthTable {
    points: Vec<(f64, AngularFrequency)>,
}

impl LinewidthTable {
    pub fn new(points: Vec<(f64, AngularFrequency)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyGrid { field: "linewidth table" });
        }
        for w in points.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidParameter {
                    field: "linewidth table",
                    reason: "dipole values must be strictly increasing".into(),
                });
            }
        }
        for &(d, g) in &points {
            non_negative("dipole", d)?;
            AngularFrequency::positive_rate("gamma_inh", g)?;
        }
        Ok(Self { points })
    }

    pub fn gamma_inh(&self, dipole: f64) -> AngularFrequency {
        let pts = &self.points;
        if dipole <= pts[0].0 {
            return pts[0].1;
        }
        let last = pts[pts.len() - 1];
        if dipole >= last.0 {
            return last.1;
        }
        let i = pts.partition_point(|p| p.0 <= dipole);
        let (d0, g0) = pts[i - 1];
        let (d1, g1) = pts[i];
        let f = (dipole - d0) / (d1 - d0);
        AngularFrequency::from_rad_per_s(g0.rad_per_s() + f * (g1.rad_per_s() - g0.rad_per_s()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::{qdm1_anticrossing, qdm2_anticrossing};
    use crate::units::PLANCK;

    #[test]
    fn splitting_at_minimum_is_two_t() {
        for p in [qdm1_anticrossing(), qdm2_anticrossing()] {
            let v = min_splitting_bias(&p).unwrap();
            let b = anticrossing_energies(v, &p).unwrap();
            assert!((b.splitting() / (2.0 * p.t) - 1.0).abs() < 1e-12);
        }
        let p = qdm1_anticrossing();
        let v = min_splitting_bias(&p).unwrap();
        let b = anticrossing_energies(v, &p).unwrap();
        assert!((b.splitting() - 2.90e-3).abs() < 1e-12);
    }

    #[test]
    fn branch_sum_is_linear() {
        let p = qdm1_anticrossing();
        for i in 0..50 {
            let v = -1.0 + 0.04 * i as f64;
            let b = anticrossing_energies(v, &p).unwrap();
            let expect = 2.0 * p.eps_qd + p.eps_diff + v / p.h_qd * (p.d_dir + p.d_ind);
            assert!((b.upper + b.lower - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn dipole_limits() {
        let p = qdm1_anticrossing();
        let v_star = min_splitting_bias(&p).unwrap();
        assert!((effective_dipole(v_star, &p).unwrap() - p.d_ind / 2.0).abs() < 1e-24);
        // indirect side of the lower branch lies below v*
        let far = v_star - 100.0 * v_star;
        let d = effective_dipole(far, &p).unwrap();
        assert!((d - p.d_ind).abs() < 0.01 * p.d_ind);
    }

    #[test]
    fn dipole_matches_finite_difference() {
        let p = qdm2_anticrossing();
        let h = 1e-7;
        for i in 0..40 {
            let v = 0.02 * i as f64;
            for branch in [Branch::Lower, Branch::Upper] {
                let up = anticrossing_energies(v + h, &p).unwrap().get(branch);
                let dn = anticrossing_energies(v - h, &p).unwrap().get(branch);
                let fd = ((up - dn) / (2.0 * h) * p.h_qd).abs();
                let an = effective_dipole_on(v, &p, branch).unwrap();
                assert!((fd - an).abs() <= 1e-6 * p.d_ind, "{v} {fd} {an}");
            }
        }
    }

    #[test]
    fn point_b_bias() {
        let p = qdm1_anticrossing();
        let v = bias_for_dipole(0.9e-9, &p, Branch::Lower, None).unwrap();
        assert!((effective_dipole(v, &p).unwrap() - 0.9e-9).abs() < 1e-18);
        let v_star = min_splitting_bias(&p).unwrap();
        assert!(v > v_star);
        assert!(bias_for_dipole(20e-9, &p, Branch::Lower, None).is_err());
        let limits = BiasLimits::new(0.0, v_star).unwrap();
        assert!(bias_for_dipole(0.9e-9, &p, Branch::Lower, Some(limits)).is_err());
    }

    #[test]
    fn stark_examples() {
        assert_eq!(stark_shift(0.0, 1e6), 0.0);
        let e = 0.02 / 250e-9;
        let shift = stark_shift(0.9e-9, e);
        assert!((shift / 1.153e-23 - 1.0).abs() < 1e-3);
        assert!((shift / PLANCK / 17.4e9 - 1.0).abs() < 1e-2);
        assert_eq!(stark_shift(1.8e-9, e), 2.0 * shift);
    }

    #[test]
    fn modulation_examples() {
        let w_qd = AngularFrequency::from_hz(3.1e14);
        let g0 = AngularFrequency::from_hz(1.56e6);
        let w_m = AngularFrequency::from_hz(9.717e9);
        assert_eq!(exciton_modulation(w_qd, g0, 0.0, w_m, 1.234e-9), w_qd);
        let t = std::f64::consts::FRAC_PI_2 / w_m.rad_per_s();
        let peak = exciton_modulation(w_qd, g0, 4e6, w_m, t) - w_qd;
        assert!((peak.rad_per_s() / (2.0 * g0.rad_per_s() * 2e3) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn tunnel_barrier_examples() {
        let m = TunnelBarrierModel::through_points((0.20, 30.0), (0.30, 10.0)).unwrap();
        assert!((m.decay_x0 - 0.1 / 3f64.ln()).abs() < 1e-15);
        assert!((m.amplitude_a - 270.0).abs() < 1.0);
        assert_eq!(tunnel_splitting(0.0, &m).unwrap().hz(), m.amplitude_a * 1e9);
        assert!(tunnel_splitting(0.5, &m).is_err());
        assert!(tunnel_splitting(-0.1, &m).is_err());
        let a = tunnel_splitting(0.1, &m).unwrap();
        let b = tunnel_splitting(0.11, &m).unwrap();
        assert!(b < a);
    }

    #[test]
    fn linewidth_table_interpolates() {
        let t = LinewidthTable::new(vec![
            (0.0, AngularFrequency::from_hz(300e6)),
            (1e-9, AngularFrequency::from_hz(700e6)),
        ])
        .unwrap();
        assert!((t.gamma_inh(0.5e-9).hz() - 500e6).abs() < 1e-3);
        assert_eq!(t.gamma_inh(5e-9).hz(), AngularFrequency::from_hz(700e6).hz());
        assert!(LinewidthTable::new(vec![]).is_err());
    }
}
