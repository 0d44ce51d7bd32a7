use std::path::PathBuf;

use clap::Args;
use qtd_core::presets;
use qtd_core::transduction::{
    bandwidth, detuning_sweep, end_to_end, eta_far_detuned, eta_linear_approx, eta_near_resonance, g0_for_cooperativity,
    gain_sweep, optimal_cooperativity, single_photon_cooperativity, CooperativityInputs,
};
use qtd_core::{AngularFrequency, ConversionBranch, DriveState, ResonatorParams};

use crate::args::{linear_grid, log_grid, ResonatorArgs};
use crate::error::CliError;
use crate::report::Report;
use crate::table;

#[derive(Debug, Clone, Args)]
pub struct CouplingArgs {
    /// Single-photon coupling g₀/2π (Hz).
    #[arg(long, conflicts_with = "c0", required_unless_present = "c0")]
    pub g0: Option<f64>,
    /// Single-photon cooperativity, in place of --g0.
    #[arg(long)]
    pub c0: Option<f64>,
    /// Emitter linewidth Γ/2π (Hz); the transform limit by default.
    #[arg(long, default_value_t = presets::GAMMA_TRANSFORM_LIMITED_HZ)]
    pub gamma: f64,
}

impl CouplingArgs {
    /// Cooperativity inputs and C₀. A given --c0 is passed through untouched.
    fn resolve(&self, res: &ResonatorParams, r: &mut Report) -> Result<(CooperativityInputs, f64), CliError> {
        let gamma = AngularFrequency::from_hz(self.gamma);
        r.input("gamma_hz", self.gamma);
        let (g0, c0) = match (self.g0, self.c0) {
            (Some(g), _) => {
                r.input("g0_hz", g);
                let inputs = CooperativityInputs {
                    g0: AngularFrequency::from_hz(g),
                    gamma,
                    kappa: res.kappa,
                };
                let c0 = single_photon_cooperativity(&inputs).map_err(CliError::model("--g0/--gamma"))?;
                (inputs.g0, c0)
            }
            (None, Some(c0)) => {
                r.input("c0", c0);
                let g0 = g0_for_cooperativity(c0, gamma, res.kappa).map_err(CliError::model("--c0/--gamma"))?;
                (g0, c0)
            }
            (None, None) => return Err(CliError::Usage("give --g0 or --c0".into())),
        };
        Ok((
            CooperativityInputs {
                g0,
                gamma,
                kappa: res.kappa,
            },
            c0,
        ))
    }
}

#[derive(Debug, Args)]
pub struct Eta {
    #[command(flatten)]
    pub resonator: ResonatorArgs,
    #[command(flatten)]
    pub coupling: CouplingArgs,
    /// far (ω_m ≫ Δ_ef) or near (ω_m ≈ Δ_ef).
    #[arg(long, default_value = "far")]
    pub regime: String,
    /// Near regime: δ/2π = (ω_m − Δ_ef)/2π (Hz).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub detuning: f64,
    /// Optical outcoupling efficiency; adds the end-to-end value.
    #[arg(long)]
    pub eta_o: Option<f64>,
}

impl Eta {
    pub fn run(&self) -> Result<Report, CliError> {
        let mut r = Report::new("eta");
        let res = self.resonator.resolve(&mut r)?;
        let (inputs, c0) = self.coupling.resolve(&res, &mut r)?;
        r.input("regime", self.regime.as_str());
        let report = match self.regime.as_str() {
            "far" => eta_far_detuned(c0, inputs.gamma, res.omega_m)?,
            "near" => {
                r.input("detuning_hz", self.detuning);
                let delta = AngularFrequency::from_hz(self.detuning);
                eta_near_resonance(&inputs, delta, Some((res.omega_m - delta, res.omega_m)))
                    .map_err(CliError::model("--detuning"))?
            }
            other => {
                return Err(CliError::Usage(format!("--regime: expected `far` or `near`, got `{other}`")))
            }
        };
        r.output("c0", report.c0)
            .output("eta_int", report.eta_int)
            .output("regime", report.regime.name())
            .output("g0_hz", inputs.g0.hz())
            .output("optimal_cooperativity", optimal_cooperativity(inputs.gamma, res.omega_m))
            .output("linear_approx", eta_linear_approx(c0, inputs.gamma, res.omega_m))
            .output("linear_approx_valid", report.approx_eq3_valid);
        if let Some(eta_o) = self.eta_o {
            r.input("eta_o", eta_o);
            r.output("eta_end_to_end", end_to_end(report.eta_int, eta_o).map_err(CliError::model("--eta-o"))?);
        }
        for w in report.warnings {
            r.warn(w);
        }
        Ok(r)
    }
}

#[derive(Debug, Args)]
pub struct GainSweep {
    #[command(flatten)]
    pub resonator: ResonatorArgs,
    #[command(flatten)]
    pub coupling: CouplingArgs,
    /// Smallest microwave photon number.
    #[arg(long, default_value_t = 1e3)]
    pub n_min: f64,
    /// Largest microwave photon number.
    #[arg(long, default_value_t = 1e9)]
    pub n_max: f64,
    /// Log-spaced grid points.
    #[arg(long, default_value_t = 61)]
    pub points: usize,
    /// Optical photons coupled to the molecule.
    #[arg(long, default_value_t = 1.0)]
    pub n_o: f64,
    /// m2o (microwave to optical) or o2m.
    #[arg(long, default_value = "m2o")]
    pub direction: String,
    /// Write the (n_m, G) curve here.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl GainSweep {
    pub fn run(&self) -> Result<Report, CliError> {
        let mut r = Report::new("gain-sweep");
        let res = self.resonator.resolve(&mut r)?;
        let (inputs, c0) = self.coupling.resolve(&res, &mut r)?;
        let branch = match self.direction.as_str() {
            "m2o" => ConversionBranch::MicrowaveToOptical,
            "o2m" => ConversionBranch::OpticalToMicrowave,
            other => {
                return Err(CliError::Usage(format!("--direction: expected `m2o` or `o2m`, got `{other}`")))
            }
        };
        r.input("direction", self.direction.as_str())
            .input("n_o", self.n_o)
            .input("n_min", self.n_min)
            .input("n_max", self.n_max)
            .input("points", self.points);
        let grid = log_grid("n-min/--n-max", self.n_min, self.n_max, self.points)?;
        let drives = grid
            .iter()
            .map(|&n| DriveState::new(n, self.n_o, branch))
            .collect::<Result<Vec<_>, _>>()
            .map_err(CliError::model("--n-min/--n-max/--n-o"))?;
        let sweep = gain_sweep(&drives, c0, inputs.gamma, res.omega_m)?;
        let gain: Vec<f64> = sweep.points.iter().map(|p| p.1).collect();
        r.output("c0", c0)
            .output("eta_int", sweep.eta_int)
            .output("optimal_cooperativity", optimal_cooperativity(inputs.gamma, res.omega_m));
        let columns: [(&str, &[f64]); 2] = [("n_m", &grid), ("gain", &gain)];
        r.table(&columns);
        if let Some(path) = &self.output {
            table::write(path, &columns)?;
        }
        Ok(r)
    }
}

#[derive(Debug, Args)]
pub struct DetuningSweep {
    #[command(flatten)]
    pub resonator: ResonatorArgs,
    #[command(flatten)]
    pub coupling: CouplingArgs,
    /// Smallest δ/2π (Hz).
    #[arg(long, default_value_t = -1.5e9, allow_hyphen_values = true)]
    pub delta_min: f64,
    /// Largest δ/2π (Hz).
    #[arg(long, default_value_t = 1.5e9, allow_hyphen_values = true)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Write the (δ, η) curve here.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl DetuningSweep {
    pub fn run(&self) -> Result<Report, CliError> {
        let mut r = Report::new("detuning-sweep");
        let res = self.resonator.resolve(&mut r)?;
        let (inputs, c0) = self.coupling.resolve(&res, &mut r)?;
        r.input("delta_min_hz", self.delta_min)
            .input("delta_max_hz", self.delta_max)
            .input("points", self.points);
        let grid = linear_grid("delta-min/--delta-max", self.delta_min, self.delta_max, self.points)?;
        let deltas: Vec<AngularFrequency> = grid.iter().map(|&d| AngularFrequency::from_hz(d)).collect();
        let sweep = detuning_sweep(&deltas, &inputs, res.omega_m)?;
        let eta: Vec<f64> = sweep.points.iter().map(|p| p.1).collect();
        r.output("c0", c0)
            .output("far_detuned_reference", sweep.far_detuned_reference)
            .output("eta_peak", eta.iter().copied().fold(0.0, f64::max));
        for w in sweep.warnings {
            r.warn(w);
        }
        let columns: [(&str, &[f64]); 2] = [("detuning_hz", &grid), ("eta", &eta)];
        r.table(&columns);
        if let Some(path) = &self.output {
            table::write(path, &columns)?;
        }
        Ok(r)
    }
}

#[derive(Debug, Args)]
pub struct Bandwidth {
    #[command(flatten)]
    pub resonator: ResonatorArgs,
    /// Effective emitter linewidth Γ/2π (Hz); the measured inhomogeneous
    /// width by default.
    #[arg(long, default_value_t = presets::GAMMA_INH_HZ)]
    pub gamma: f64,
}

impl Bandwidth {
    pub fn run(&self) -> Result<Report, CliError> {
        let mut r = Report::new("bandwidth");
        let res = self.resonator.resolve(&mut r)?;
        r.input("gamma_hz", self.gamma);
        let b = bandwidth(AngularFrequency::from_hz(self.gamma), res.kappa).map_err(CliError::model("--gamma"))?;
        r.output("bandwidth_hz", b.hz());
        Ok(r)
    }
}
