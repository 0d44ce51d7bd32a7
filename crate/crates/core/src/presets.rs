//! Named parameter sets for the measured device and the two characterised
//! molecules.

use crate::circuit::LossCircuit;
use crate::qdm::TunnelBarrierModel;
use crate::spectroscopy::EtalonParams;
use crate::units::{AngularFrequency, AnticrossingParams, QdmParams, ResonatorParams};

/// Centre-conductor width (m).
pub const CPW_WIDTH: f64 = 8.0e-6;
/// Centre-conductor to ground gap (m).
pub const CPW_GAP: f64 = 7.0e-6;
/// Resonator length (m).
pub const CPW_LENGTH: f64 = 3.0e-3;
/// GaAs at 10 GHz.
pub const EPS_GAAS: f64 = 10.6;
/// Centre line to ground plane distance (m).
pub const H_RES: f64 = 7.0e-6;
/// Top gate to doped layer distance (m).
pub const H_QD: f64 = 250e-9;
/// Measured resonance at 4.2 K (Hz).
pub const F0_MEASURED: f64 = 9.717e9;
/// Finger coupling capacitance (F).
pub const C_K: f64 = 5.2e-15;
/// Gate to doped-layer capacitance (F).
pub const C_QD: f64 = 3.5e-15;
/// Port load (Ω).
pub const R_LOAD: f64 = 50.0;
/// Internal Q without the mesa.
pub const Q_INT_BARE: f64 = 1300.0;
/// Source to device-port loss at 9.717 GHz (dB).
pub const INPUT_LINE_LOSS_DB: f64 = 10.7;

/// Transform-limited exciton linewidth /2π (Hz).
pub const GAMMA_TRANSFORM_LIMITED_HZ: f64 = 300e6;
/// Inhomogeneous linewidth /2π at the QDM1 working point (Hz).
pub const GAMMA_INH_HZ: f64 = 720e6;
/// Optical outcoupling efficiency of the measured setup.
pub const ETA_OUTCOUPLING: f64 = 2e-3;
/// Lock-in bias modulation amplitude (V).
pub const LOCKIN_BIAS_AMPLITUDE: f64 = 0.02;

/// Named resonator parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResonatorPreset {
    /// Rounded device values: ω_m/2π = 9.7 GHz, κ/2π = 138 MHz.
    PaperDevice,
    /// First measurement epoch, Q_L = 86.
    EpochA,
    /// Second measurement epoch, Q_L = 70.
    EpochB,
}

impl ResonatorPreset {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "paper-device" => Some(Self::PaperDevice),
            "epoch-A" | "epoch-a" => Some(Self::EpochA),
            "epoch-B" | "epoch-b" => Some(Self::EpochB),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::PaperDevice => "paper-device",
            Self::EpochA => "epoch-A",
            Self::EpochB => "epoch-B",
        }
    }

    pub fn params(self) -> ResonatorParams {
        let (f0, kappa) = match self {
            Self::PaperDevice => (9.7e9, 138e6),
            Self::EpochA => (9.717e9, 113e6),
            Self::EpochB => (9.676e9, 138e6),
        };
        ResonatorParams {
            omega_m: AngularFrequency::from_hz(f0),
            kappa: AngularFrequency::from_hz(kappa),
            kappa_ext: AngularFrequency::from_hz(8.3e6),
            z_c: 130.0,
            width_w: CPW_WIDTH,
            gap_s: CPW_GAP,
            length_l: CPW_LENGTH,
            eps_substrate: EPS_GAAS,
            h_res: H_RES,
            line: None,
        }
    }
}

pub fn paper_device() -> ResonatorParams {
    ResonatorPreset::PaperDevice.params()
}

/// QDM1 anticrossing fit values (d_dir neglected).
pub fn qdm1_anticrossing() -> AnticrossingParams {
    AnticrossingParams {
        eps_qd: 1.2587,
        eps_diff: 24.0e-3,
        d_dir: 0.0,
        d_ind: 13.0e-9,
        t: 1.45e-3,
        h_qd: H_QD,
    }
}

/// QDM2 anticrossing fit values (d_dir neglected).
pub fn qdm2_anticrossing() -> AnticrossingParams {
    AnticrossingParams {
        eps_qd: 1.26378,
        eps_diff: 20.89e-3,
        d_dir: 0.0,
        d_ind: 14.3e-9,
        t: 1.01e-3,
        h_qd: H_QD,
    }
}

/// QDM1 as an optical emitter at its 966.13 nm working point.
pub fn qdm1() -> QdmParams {
    const C_LIGHT: f64 = 299_792_458.0;
    QdmParams {
        omega_qd: AngularFrequency::from_hz(C_LIGHT / 966.13e-9),
        gamma_rad: AngularFrequency::from_hz(GAMMA_TRANSFORM_LIMITED_HZ),
        gamma_inh: AngularFrequency::from_hz(GAMMA_INH_HZ),
        delta_ef: AngularFrequency::from_hz(30e9),
        h_qd: H_QD,
        dipole_model: qdm1_anticrossing(),
    }
}

/// Exponential tunnel-splitting model anchored at Δ_ef/2π = 30 GHz for
/// x = 0.20 and 10 GHz for x = 0.30.
pub fn tunnel_barrier() -> TunnelBarrierModel {
    TunnelBarrierModel::through_points((0.20, 30.0), (0.30, 10.0))
        .expect("anchor points are valid")
}

/// Lumped loss circuit of the measured device with the given sheet
/// resistance left for the sweep.
pub fn loss_circuit() -> LossCircuit {
    LossCircuit {
        f0_bare: 10e9,
        z_c: 130.0,
        c_k: C_K,
        c_qd: C_QD,
        q_int_bare: Q_INT_BARE,
        r_l: R_LOAD,
        r_s: 1.0,
        n_squares: 1.0,
    }
}

/// Filter etalon in front of the detector, centred on zero detuning.
pub fn etalon() -> EtalonParams {
    EtalonParams {
        center: 0.0,
        fwhm: 1.7e9,
        fsr: 34e9,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for p in [
            ResonatorPreset::PaperDevice,
            ResonatorPreset::EpochA,
            ResonatorPreset::EpochB,
        ] {
            p.params().validate().unwrap();
            assert_eq!(ResonatorPreset::parse(p.name()), Some(p));
        }
        qdm1_anticrossing().validate().unwrap();
        qdm2_anticrossing().validate().unwrap();
        qdm1().validate().unwrap();
        loss_circuit().validate().unwrap();
        etalon().validate().unwrap();
    }

    #[test]
    fn epoch_quality_factors() {
        assert!((ResonatorPreset::EpochA.params().q_loaded() - 86.0).abs() < 1.0);
        assert!((ResonatorPreset::EpochB.params().q_loaded() - 70.0).abs() < 1.0);
    }
}
