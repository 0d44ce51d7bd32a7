use std::path::PathBuf;

use clap::Args;
use qtd_core::presets;
use qtd_core::qdm::{
    anticrossing_energies, bias_for_dipole, effective_dipole_on, min_splitting_bias, tunnel_splitting, BiasLimits,
    Branch, TunnelBarrierModel,
};
use rayon::prelude::*;

use crate::args::{linear_grid, pick, QdmArgs};
use crate::error::CliError;
use crate::report::Report;
use crate::table;

fn branch(s: &str) -> Result<Branch, CliError> {
    Branch::parse(s).ok_or_else(|| CliError::Usage(format!("--branch: expected `lower` or `upper`, got `{s}`")))
}

#[derive(Debug, Args)]
pub struct AnticrossingSweep {
    #[command(flatten)]
    pub qdm: QdmArgs,
    /// First bias (V); defaults to 0.4 V below the minimum splitting.
    #[arg(long, allow_hyphen_values = true)]
    pub v_min: Option<f64>,
    /// Last bias (V); defaults to 0.4 V above the minimum splitting.
    #[arg(long, allow_hyphen_values = true)]
    pub v_max: Option<f64>,
    #[arg(long, default_value_t = 81)]
    pub points: usize,
    /// Write the branch table here.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl AnticrossingSweep {
    pub fn run(&self) -> Result<Report, CliError> {
        let mut r = Report::new("anticrossing-sweep");
        let p = self.qdm.resolve(&mut r)?;
        let v_star = min_splitting_bias(&p)?;
        let lo = self.v_min.unwrap_or(v_star - 0.4);
        let hi = self.v_max.unwrap_or(v_star + 0.4);
        r.input("v_min", lo).input("v_max", hi).input("points", self.points);
        let grid = linear_grid("v-min/--v-max", lo, hi, self.points)?;
        let rows = grid
            .par_iter()
            .map(|&v| {
                let e = anticrossing_energies(v, &p)?;
                let d_lo = effective_dipole_on(v, &p, Branch::Lower)?;
                let d_hi = effective_dipole_on(v, &p, Branch::Upper)?;
                Ok([e.lower, e.upper, d_lo, d_hi])
            })
            .collect::<Result<Vec<_>, qtd_core::Error>>()?;
        let col = |i: usize| rows.iter().map(|row| row[i]).collect::<Vec<f64>>();
        let (lower, upper, d_lower, d_upper) = (col(0), col(1), col(2), col(3));
        r.output("min_splitting_bias_v", v_star)
            .output("min_splitting_ev", anticrossing_energies(v_star, &p)?.splitting());
        let columns: [(&str, &[f64]); 5] = [
            ("bias_v", &grid),
            ("lower_ev", &lower),
            ("upper_ev", &upper),
            ("dipole_lower_m", &d_lower),
            ("dipole_upper_m", &d_upper),
        ];
        r.table(&columns);
        if let Some(path) = &self.output {
            table::write(path, &columns)?;
        }
        Ok(r)
    }
}

#[derive(Debug, Args)]
pub struct Dipole {
    #[command(flatten)]
    pub qdm: QdmArgs,
    /// Bias at which to evaluate the effective dipole (V).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "target", required_unless_present = "target")]
    pub bias: Option<f64>,
    /// Dipole to reach (m); prints the bias that gives it.
    #[arg(long)]
    pub target: Option<f64>,
    /// lower or upper.
    #[arg(long, default_value = "lower")]
    pub branch: String,
    /// Lowest admissible bias for --target (V).
    #[arg(long, allow_hyphen_values = true)]
    pub v_lo: Option<f64>,
    /// Highest admissible bias for --target (V).
    #[arg(long, allow_hyphen_values = true)]
    pub v_hi: Option<f64>,
}

impl Dipole {
    pub fn run(&self) -> Result<Report, CliError> {
        let mut r = Report::new("dipole");
        let p = self.qdm.resolve(&mut r)?;
        let b = branch(&self.branch)?;
        r.input("branch", b.name());
        let bias = match (self.bias, self.target) {
            (Some(v), _) => {
                r.input("bias_v", v);
                v
            }
            (None, Some(d)) => {
                r.input("target_dipole_m", d);
                let limits = match (self.v_lo, self.v_hi) {
                    (None, None) => None,
                    (lo, hi) => {
                        let l = lo.unwrap_or(f64::NEG_INFINITY);
                        let h = hi.unwrap_or(f64::INFINITY);
                        r.input("v_lo", l).input("v_hi", h);
                        Some(BiasLimits::new(l, h).map_err(CliError::model("--v-lo/--v-hi"))?)
                    }
                };
                let v = bias_for_dipole(d, &p, b, limits).map_err(CliError::model("--target"))?;
                r.output("bias_v", v);
                v
            }
            (None, None) => return Err(CliError::Usage("give --bias or --target".into())),
        };
        let e = anticrossing_energies(bias, &p).map_err(CliError::model("--bias"))?;
        r.output("dipole_m", effective_dipole_on(bias, &p, b)?)
            .output("energy_ev", e.get(b))
            .output("splitting_ev", e.splitting());
        Ok(r)
    }
}

#[derive(Debug, Args)]
pub struct TunnelSplitting {
    /// Al fraction of the tunnel barrier.
    #[arg(long)]
    pub x: f64,
    /// Prefactor A of Δ_ef/2π = A·exp(−x/x₀) (GHz).
    #[arg(long)]
    pub amplitude_ghz: Option<f64>,
    /// Decay constant x₀.
    #[arg(long)]
    pub decay_x0: Option<f64>,
}

impl TunnelSplitting {
    pub fn run(&self) -> Result<Report, CliError> {
        let mut r = Report::new("tunnel-splitting");
        let base = presets::tunnel_barrier();
        let a = pick("amplitude-ghz", self.amplitude_ghz, "tunnel-barrier", base.amplitude_a);
        let x0 = pick("decay-x0", self.decay_x0, "tunnel-barrier", base.decay_x0);
        let m = TunnelBarrierModel::new(a, x0).map_err(CliError::model("--amplitude-ghz/--decay-x0"))?;
        r.input("x_al", self.x).input("amplitude_ghz", a).input("decay_x0", x0);
        let d = tunnel_splitting(self.x, &m).map_err(CliError::model("--x"))?;
        r.output("delta_ef_hz", d.hz());
        Ok(r)
    }
}
