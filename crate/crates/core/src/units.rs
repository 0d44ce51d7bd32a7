//! Physical constants, the angular-frequency newtype and the parameter records
//! shared by every other module.
//!
//! Frequencies are stored as angular frequency (rad/s). A value quoted as
//! "X/2π" is an ordinary frequency in Hz and enters through
//! [`AngularFrequency::from_hz`] or [`to_angular`].

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{finite, non_negative, positive, Error, Result};

/// Fundamental constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysConstants {
    /// C
    pub elementary_charge: f64,
    /// J·s
    pub reduced_planck: f64,
    /// J·s
    pub planck: f64,
    /// F/m
    pub vacuum_permittivity: f64,
    /// H/m
    pub vacuum_permeability: f64,
}

/// CODATA 2018 recommended values.
pub const CODATA_2018: PhysConstants = PhysConstants {
    elementary_charge: 1.602_176_634e-19,
    reduced_planck: 6.626_070_15e-34 / TAU,
    planck: 6.626_070_15e-34,
    vacuum_permittivity: 8.854_187_812_8e-12,
    vacuum_permeability: 1.256_637_062_12e-6,
};

pub const ELEMENTARY_CHARGE: f64 = CODATA_2018.elementary_charge;
pub const HBAR: f64 = CODATA_2018.reduced_planck;
pub const PLANCK: f64 = CODATA_2018.planck;
pub const EPSILON_0: f64 = CODATA_2018.vacuum_permittivity;
pub const MU_0: f64 = CODATA_2018.vacuum_permeability;

/// Angular frequency in rad/s.
///
/// Signed, so it can also carry detunings. Parameter records that use it as a
/// resonance or decay rate reject negative values at construction.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct AngularFrequency(f64);

impl AngularFrequency {
    pub const ZERO: Self = Self(0.0);

    pub const fn from_rad_per_s(omega: f64) -> Self {
        Self(omega)
    }

    pub fn from_hz(f: f64) -> Self {
        Self(TAU * f)
    }

    pub const fn rad_per_s(self) -> f64 {
        self.0
    }

    pub fn hz(self) -> f64 {
        self.0 / TAU
    }

    pub fn abs(self) -> Self {
        Self(self.0.abs())
    }

    /// Validates a resonance or decay rate: finite and `>= 0`.
    pub fn rate(field: &'static str, value: Self) -> Result<Self> {
        non_negative(field, value.0).map(Self)
    }

    /// Validates a strictly positive rate.
    pub fn positive_rate(field: &'static str, value: Self) -> Result<Self> {
        positive(field, value.0).map(Self)
    }
}

impl fmt::Display for AngularFrequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2π × {:e} Hz", self.hz())
    }
}

impl Add for AngularFrequency {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for AngularFrequency {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Neg for AngularFrequency {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Mul<f64> for AngularFrequency {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self(self.0 * rhs)
    }
}

impl Div for AngularFrequency {
    type Output = f64;
    fn div(self, rhs: Self) -> f64 {
        self.0 / rhs.0
    }
}

/// ω = 2πf.
pub fn to_angular(f_hz: f64) -> AngularFrequency {
    AngularFrequency::from_hz(f_hz)
}

/// f = ω/2π.
pub fn from_angular(omega: AngularFrequency) -> f64 {
    omega.hz()
}

/// Parameters of the bias-dependent anticrossing of the two molecular exciton
/// branches.
///
/// Energies are in eV, lengths in m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnticrossingParams {
    /// Bare exciton energy of the optically addressed dot (eV).
    pub eps_qd: f64,
    /// Electron level offset between the two dots at zero bias (eV).
    pub eps_diff: f64,
    /// Direct-exciton dipole (m).
    pub d_dir: f64,
    /// Indirect-exciton dipole (m).
    pub d_ind: f64,
    /// Tunnel coupling (eV).
    pub t: f64,
    /// Gate to back-contact distance (m).
    pub h_qd: f64,
}

impl AnticrossingParams {
    pub fn new(eps_qd: f64, eps_diff: f64, d_dir: f64, d_ind: f64, t: f64, h_qd: f64) -> Result<Self> {
        let p = Self {
            eps_qd,
            eps_diff,
            d_dir,
            d_ind,
            t,
            h_qd,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        finite("eps_qd", self.eps_qd)?;
        finite("eps_diff", self.eps_diff)?;
        non_negative("d_dir", self.d_dir)?;
        positive("d_ind", self.d_ind)?;
        positive("t", self.t)?;
        positive("h_qd", self.h_qd)?;
        if self.d_ind <= self.d_dir {
            return Err(Error::InvalidParameter {
                field: "d_ind",
                reason: format!("must exceed d_dir ({:e} m), got {:e} m", self.d_dir, self.d_ind),
            });
        }
        Ok(())
    }
}

/// Optical and electrostatic parameters of one quantum-dot molecule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QdmParams {
    pub omega_qd: AngularFrequency,
    /// Transform-limited (radiative) decay rate.
    pub gamma_rad: AngularFrequency,
    /// Inhomogeneously broadened linewidth.
    pub gamma_inh: AngularFrequency,
    /// Splitting between the two molecular excited states.
    pub delta_ef: AngularFrequency,
    /// Gate to back-contact distance (m).
    pub h_qd: f64,
    pub dipole_model: AnticrossingParams,
}

impl QdmParams {
    pub fn new(
        omega_qd: AngularFrequency,
        gamma_rad: AngularFrequency,
        gamma_inh: AngularFrequency,
        delta_ef: AngularFrequency,
        h_qd: f64,
        dipole_model: AnticrossingParams,
    ) -> Result<Self> {
        let p = Self {
            omega_qd,
            gamma_rad,
            gamma_inh,
            delta_ef,
            h_qd,
            dipole_model,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        AngularFrequency::rate("omega_qd", self.omega_qd)?;
        AngularFrequency::positive_rate("gamma_rad", self.gamma_rad)?;
        AngularFrequency::positive_rate("gamma_inh", self.gamma_inh)?;
        AngularFrequency::positive_rate("delta_ef", self.delta_ef)?;
        positive("h_qd", self.h_qd)?;
        if self.gamma_inh < self.gamma_rad {
            return Err(Error::InvalidParameter {
                field: "gamma_inh",
                reason: format!(
                    "inhomogeneous linewidth ({}) is narrower than the radiative one ({})",
                    self.gamma_inh, self.gamma_rad
                ),
            });
        }
        self.dipole_model.validate()
    }
}

/// Per-length line constants of a CPW (F/m and H/m).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineConstants {
    pub c_per_len: f64,
    pub l_geo_per_len: f64,
    pub l_kin_per_len: f64,
}

impl LineConstants {
    pub fn l_total_per_len(&self) -> f64 {
        self.l_geo_per_len + self.l_kin_per_len
    }
}

/// Superconducting λ/2 CPW resonator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorParams {
    pub omega_m: AngularFrequency,
    /// Total decay rate.
    pub kappa: AngularFrequency,
    /// Decay rate into the ports.
    pub kappa_ext: AngularFrequency,
    /// Characteristic impedance (Ω).
    pub z_c: f64,
    /// Centre-conductor width (m).
    pub width_w: f64,
    /// Centre-conductor to ground gap (m).
    pub gap_s: f64,
    /// Resonator length (m).
    pub length_l: f64,
    pub eps_substrate: f64,
    /// Distance between centre line and ground plane used for the vacuum
    /// field (m).
    pub h_res: f64,
    /// Populated when the line constants are known; `z_c` must then agree
    /// with them.
    pub line: Option<LineConstants>,
}

impl ResonatorParams {
    pub fn validate(&self) -> Result<()> {
        AngularFrequency::positive_rate("omega_m", self.omega_m)?;
        AngularFrequency::positive_rate("kappa", self.kappa)?;
        AngularFrequency::positive_rate("kappa_ext", self.kappa_ext)?;
        if self.kappa < self.kappa_ext {
            return Err(Error::InvalidParameter {
                field: "kappa",
                reason: format!(
                    "total decay rate ({}) is smaller than the external one ({})",
                    self.kappa, self.kappa_ext
                ),
            });
        }
        positive("z_c", self.z_c)?;
        positive("width_w", self.width_w)?;
        positive("gap_s", self.gap_s)?;
        positive("length_l", self.length_l)?;
        positive("h_res", self.h_res)?;
        finite("eps_substrate", self.eps_substrate)?;
        if self.eps_substrate < 1.0 {
            return Err(Error::InvalidParameter {
                field: "eps_substrate",
                reason: format!("must be >= 1, got {}", self.eps_substrate),
            });
        }
        if let Some(line) = self.line {
            positive("c_per_len", line.c_per_len)?;
            positive("l_geo_per_len", line.l_geo_per_len)?;
            non_negative("l_kin_per_len", line.l_kin_per_len)?;
            let z = (line.l_total_per_len() / line.c_per_len).sqrt();
            if ((z - self.z_c) / z).abs() > 1e-9 {
                return Err(Error::InvalidParameter {
                    field: "z_c",
                    reason: format!("{} Ω disagrees with √(L/C) = {z} Ω", self.z_c),
                });
            }
        }
        Ok(())
    }

    pub fn q_loaded(&self) -> f64 {
        self.omega_m / self.kappa
    }
}

/// Which conversion direction a drive configuration describes.
///
/// The discriminant is the `k` in C = (n_m + k)·n_o·C₀.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ConversionBranch {
    #[default]
    MicrowaveToOptical = 0,
    OpticalToMicrowave = 1,
}

impl ConversionBranch {
    pub fn k(self) -> f64 {
        self as u8 as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveState {
    /// Mean microwave photon number in the resonator.
    pub n_m: f64,
    /// Optical photons coupled to the QDM.
    pub n_o: f64,
    pub branch_k: ConversionBranch,
    /// Laser detuning from the addressed sideband.
    pub laser_detuning: AngularFrequency,
}

impl DriveState {
    pub fn new(n_m: f64, n_o: f64, branch_k: ConversionBranch) -> Result<Self> {
        let d = Self {
            n_m,
            n_o,
            branch_k,
            laser_detuning: AngularFrequency::ZERO,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("n_m", self.n_m)?;
        non_negative("n_o", self.n_o)?;
        finite("laser_detuning", self.laser_detuning.rad_per_s())?;
        Ok(())
    }

    /// (n_m + k)·n_o
    pub fn photon_multiplier(&self) -> f64 {
        (self.n_m + self.branch_k.k()) * self.n_o
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn to_angular_examples() {
        let w = to_angular(9.717e9).rad_per_s();
        assert!((w / 6.1054e10 - 1.0).abs() < 1e-3);
        assert_eq!(to_angular(0.0).rad_per_s(), 0.0);
        for x in [1.0, 1e6, 1e12] {
            let back = from_angular(to_angular(x));
            assert!(((back - x) / x).abs() <= 1e-15);
        }
    }

    #[test]
    fn elementary_charge_is_exact() {
        assert_eq!(ELEMENTARY_CHARGE, 1.602176634e-19);
        assert!((HBAR / 1.054_571_817e-34 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn qdm_rejects_narrow_inhomogeneous_line() {
        let dipole = crate::presets::qdm1_anticrossing();
        let err = QdmParams::new(
            AngularFrequency::from_hz(3.1e14),
            AngularFrequency::from_hz(300e6),
            AngularFrequency::from_hz(200e6),
            AngularFrequency::from_hz(30e9),
            250e-9,
            dipole,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { field: "gamma_inh", .. }));
    }

    #[test]
    fn constructors_reject_nan() {
        let err = AnticrossingParams::new(f64::NAN, 0.0, 0.0, 13e-9, 1e-3, 250e-9).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { field: "eps_qd", .. }));
        let err = AnticrossingParams::new(1.2, 0.0, 0.0, 13e-9, 0.0, 250e-9).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { field: "t", .. }));
        let err = AnticrossingParams::new(1.2, 0.0, 14e-9, 13e-9, 1e-3, 250e-9).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { field: "d_ind", .. }));
        assert!(DriveState::new(-1.0, 1.0, ConversionBranch::MicrowaveToOptical).is_err());
        assert!(DriveState::new(1.0, f64::INFINITY, ConversionBranch::MicrowaveToOptical).is_err());
    }

    #[test]
    fn resonator_checks_impedance_consistency() {
        let mut res = crate::presets::paper_device();
        res.validate().unwrap();
        res.line = Some(LineConstants {
            c_per_len: 1.0e-10,
            l_geo_per_len: 2.5e-7,
            l_kin_per_len: 0.0,
        });
        res.z_c = 50.0;
        res.validate().unwrap();
        res.z_c = 50.001;
        assert!(matches!(
            res.validate(),
            Err(Error::InvalidParameter { field: "z_c", .. })
        ));
        res.line = None;
        res.kappa_ext = res.kappa * 2.0;
        assert!(matches!(
            res.validate(),
            Err(Error::InvalidParameter { field: "kappa", .. })
        ));
    }

    #[test]
    fn branch_multiplier() {
        let up = DriveState::new(1.0, 1.0, ConversionBranch::MicrowaveToOptical).unwrap();
        let down = DriveState::new(0.0, 1.0, ConversionBranch::OpticalToMicrowave).unwrap();
        assert_eq!(up.photon_multiplier(), down.photon_multiplier());
    }
}
