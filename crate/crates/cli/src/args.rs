//! Argument groups shared by several subcommands, and the preset logic:
//! a preset fills every value, explicit flags replace single values and
//! each replacement is announced on stderr.

use clap::Args;
use qtd_core::presets::{self, ResonatorPreset};
use qtd_core::{AngularFrequency, AnticrossingParams, ResonatorParams};

use crate::error::CliError;
use crate::report::Report;

fn notice(flag: &str, value: f64, preset: &str, preset_value: f64) {
    eprintln!("note: --{flag} {value:e} overrides the {preset} value {preset_value:e}");
}

/// Takes `explicit` over `preset_value`, announcing the replacement.
pub fn pick(flag: &str, explicit: Option<f64>, preset: &str, preset_value: f64) -> f64 {
    match explicit {
        Some(v) => {
            if v != preset_value {
                notice(flag, v, preset, preset_value);
            }
            v
        }
        None => preset_value,
    }
}

#[derive(Debug, Clone, Args)]
pub struct ResonatorArgs {
    /// Resonator parameter set: paper-device, epoch-A or epoch-B.
    #[arg(long, default_value = "paper-device")]
    pub preset: String,
    /// Resonance frequency ω_m/2π (Hz).
    #[arg(long)]
    pub f_m: Option<f64>,
    /// Total decay rate κ/2π (Hz).
    #[arg(long)]
    pub kappa: Option<f64>,
    /// External decay rate κ_ext/2π (Hz).
    #[arg(long)]
    pub kappa_ext: Option<f64>,
    /// Characteristic impedance (Ω).
    #[arg(long)]
    pub z_c: Option<f64>,
}

impl ResonatorArgs {
    pub fn resolve(&self, report: &mut Report) -> Result<ResonatorParams, CliError> {
        let preset = ResonatorPreset::parse(&self.preset).ok_or_else(|| {
            CliError::Usage(format!(
                "--preset: unknown resonator preset `{}` (expected paper-device, epoch-A or epoch-B)",
                self.preset
            ))
        })?;
        let name = preset.name();
        let mut p = preset.params();
        p.omega_m = AngularFrequency::from_hz(pick("f-m", self.f_m, name, p.omega_m.hz()));
        p.kappa = AngularFrequency::from_hz(pick("kappa", self.kappa, name, p.kappa.hz()));
        p.kappa_ext = AngularFrequency::from_hz(pick("kappa-ext", self.kappa_ext, name, p.kappa_ext.hz()));
        p.z_c = pick("z-c", self.z_c, name, p.z_c);
        p.validate().map_err(CliError::model("resonator (--preset/--f-m/--kappa/--kappa-ext/--z-c)"))?;
        report
            .input("preset", name)
            .input("f_m_hz", p.omega_m.hz())
            .input("kappa_hz", p.kappa.hz())
            .input("kappa_ext_hz", p.kappa_ext.hz())
            .input("z_c_ohm", p.z_c);
        Ok(p)
    }
}

#[derive(Debug, Clone, Args)]
pub struct QdmArgs {
    /// Anticrossing parameter set: qdm1 or qdm2.
    #[arg(long, default_value = "qdm1")]
    pub qdm: String,
    /// Bare exciton energy (eV).
    #[arg(long)]
    pub eps_qd: Option<f64>,
    /// Electron level offset at zero bias (eV).
    #[arg(long, allow_hyphen_values = true)]
    pub eps_diff: Option<f64>,
    /// Direct-exciton dipole (m).
    #[arg(long)]
    pub d_dir: Option<f64>,
    /// Indirect-exciton dipole (m).
    #[arg(long)]
    pub d_ind: Option<f64>,
    /// Tunnel coupling (eV).
    #[arg(long)]
    pub t: Option<f64>,
    /// Gate to back-contact distance (m).
    #[arg(long)]
    pub h_qd: Option<f64>,
}

impl QdmArgs {
    pub fn resolve(&self, report: &mut Report) -> Result<AnticrossingParams, CliError> {
        let base = match self.qdm.as_str() {
            "qdm1" => presets::qdm1_anticrossing(),
            "qdm2" => presets::qdm2_anticrossing(),
            other => {
                return Err(CliError::Usage(format!(
                    "--qdm: unknown molecule `{other}` (expected qdm1 or qdm2)"
                )))
            }
        };
        let name = self.qdm.as_str();
        let p = AnticrossingParams {
            eps_qd: pick("eps-qd", self.eps_qd, name, base.eps_qd),
            eps_diff: pick("eps-diff", self.eps_diff, name, base.eps_diff),
            d_dir: pick("d-dir", self.d_dir, name, base.d_dir),
            d_ind: pick("d-ind", self.d_ind, name, base.d_ind),
            t: pick("t", self.t, name, base.t),
            h_qd: pick("h-qd", self.h_qd, name, base.h_qd),
        };
        p.validate().map_err(CliError::model("molecule (--qdm/--eps-qd/--eps-diff/--d-dir/--d-ind/--t/--h-qd)"))?;
        report
            .input("qdm", name)
            .input("eps_qd_ev", p.eps_qd)
            .input("eps_diff_ev", p.eps_diff)
            .input("d_dir_m", p.d_dir)
            .input("d_ind_m", p.d_ind)
            .input("t_ev", p.t)
            .input("h_qd_m", p.h_qd);
        Ok(p)
    }
}

#[derive(Debug, Clone, Args)]
pub struct GeometryArgs {
    /// Centre-conductor width (m).
    #[arg(long, default_value_t = presets::CPW_WIDTH)]
    pub width: f64,
    /// Gap to ground (m).
    #[arg(long, default_value_t = presets::CPW_GAP)]
    pub gap: f64,
    /// Substrate relative permittivity.
    #[arg(long, default_value_t = presets::EPS_GAAS)]
    pub eps: f64,
    /// Resonator length (m).
    #[arg(long, default_value_t = presets::CPW_LENGTH)]
    pub length: f64,
}

impl GeometryArgs {
    pub fn record(&self, report: &mut Report) {
        report
            .input("width_m", self.width)
            .input("gap_m", self.gap)
            .input("eps_substrate", self.eps)
            .input("length_m", self.length);
    }
}

fn check_grid(flag: &str, lo: f64, hi: f64, n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Usage(format!("--{flag}: need at least one point")));
    }
    if !(lo.is_finite() && hi.is_finite()) || (n > 1 && hi <= lo) {
        return Err(CliError::Usage(format!(
            "--{flag}: grid needs finite bounds with max > min, got [{lo}, {hi}]"
        )));
    }
    Ok(())
}

/// `n` evenly spaced values from `lo` to `hi` inclusive.
pub fn linear_grid(flag: &str, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, CliError> {
    check_grid(flag, lo, hi, n)?;
    if n == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|i| if i + 1 == n { hi } else { lo + step * i as f64 }).collect())
}

/// `n` log-spaced values from `lo` to `hi` inclusive.
pub fn log_grid(flag: &str, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, CliError> {
    check_grid(flag, lo, hi, n)?;
    if lo <= 0.0 {
        return Err(CliError::Usage(format!("--{flag}: a log grid needs min > 0, got {lo}")));
    }
    let (a, b) = (lo.log10(), hi.log10());
    Ok(linear_grid(flag, a, b.max(a), n)?
        .into_iter()
        .enumerate()
        .map(|(i, e)| match i {
            0 => lo,
            _ if i + 1 == n => hi,
            _ => 10f64.powf(e),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_hit_their_ends() {
        let g = linear_grid("x", -1.0, 1.0, 5).unwrap();
        assert_eq!(g, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        let g = log_grid("x", 1e-2, 1e4, 7).unwrap();
        assert_eq!(g[0], 1e-2);
        assert_eq!(g[6], 1e4);
        assert!((g[3] / 10.0 - 1.0).abs() < 1e-14);
        assert!(log_grid("x", 0.0, 1.0, 3).is_err());
        assert!(linear_grid("x", 1.0, 0.0, 3).is_err());
        assert_eq!(linear_grid("x", 2.0, 2.0, 1).unwrap(), vec![2.0]);
    }
}
