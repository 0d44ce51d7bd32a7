use std::path::PathBuf;

use clap::Args;
use qtd_core::circuit::{
    apply_line_loss, characteristic_impedance, coupling_strength_theory, cpw_geometry_to_electrical, decay_rate,
    kinetic_inductance_from_f0, photon_number, q_ext, resonance_frequency, simulate_loaded_q, vacuum_field,
};
use qtd_core::presets;
use qtd_core::AngularFrequency;

use crate::args::{log_grid, GeometryArgs, ResonatorArgs};
use crate::error::CliError;
use crate::report::Report;
use crate::table;

#[derive(Debug, Args)]
pub struct Cpw {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    /// Measured resonance (Hz); adds the kinetic inductance that places it.
    #[arg(long)]
    pub f0: Option<f64>,
}

impl Cpw {
    pub fn run(&self) -> Result<Report, CliError> {
        let g = &self.geometry;
        let mut r = Report::new("cpw");
        g.record(&mut r);
        let e = cpw_geometry_to_electrical(g.width, g.gap, g.eps).map_err(CliError::model("--width/--gap/--eps"))?;
        r.output("eps_eff", e.eps_eff)
            .output("c_per_len", e.c_per_len)
            .output("l_geo_per_len", e.l_geo_per_len)
            .output("c_total", e.c_per_len * g.length);
        let f_geo = resonance_frequency(g.length, e.l_geo_per_len, e.c_per_len).map_err(CliError::model("--length"))?;
        r.output("f0_geometric_hz", f_geo);
        let l_kin = match self.f0 {
            Some(f0) => {
                r.input("f0_hz", f0);
                kinetic_inductance_from_f0(f0, g.length, &e).map_err(CliError::model("--f0"))?
            }
            None => 0.0,
        };
        r.output("l_kin_per_len", l_kin)
            .output("l_total_per_len", e.l_geo_per_len + l_kin)
            .output("z_c", characteristic_impedance(e.l_geo_per_len + l_kin, e.c_per_len)?);
        Ok(r)
    }
}

#[derive(Debug, Args)]
pub struct Qext {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    /// Total line capacitance (F); replaces C'·length from the geometry.
    #[arg(long)]
    pub c_total: Option<f64>,
    /// Coupling capacitance (F).
    #[arg(long, default_value_t = presets::C_K)]
    pub c_k: f64,
    /// Port load (Ω).
    #[arg(long, default_value_t = presets::R_LOAD)]
    pub r_load: f64,
    /// Resonance frequency (Hz).
    #[arg(long, default_value_t = presets::F0_MEASURED)]
    pub f0: f64,
}

impl Qext {
    pub fn run(&self) -> Result<Report, CliError> {
        let mut r = Report::new("qext");
        let c_total = match self.c_total {
            Some(c) => {
                r.input("c_total_f", c);
                c
            }
            None => {
                let g = &self.geometry;
                g.record(&mut r);
                let e = cpw_geometry_to_electrical(g.width, g.gap, g.eps).map_err(CliError::model("--width/--gap/--eps"))?;
                e.c_per_len * g.length
            }
        };
        r.input("c_k_f", self.c_k).input("r_load_ohm", self.r_load).input("f0_hz", self.f0);
        let w = AngularFrequency::from_hz(self.f0);
        let q = q_ext(c_total, w, self.r_load, self.c_k).map_err(CliError::model("--c-total/--c-k/--r-load/--f0"))?;
        r.output("c_total", c_total)
            .output("q_ext", q)
            .output("kappa_ext_hz", decay_rate(w, q)?.hz());
        Ok(r)
    }
}

#[derive(Debug, Args)]
pub struct QloadSweep {
    /// Smallest sheet resistance (Ω/sq).
    #[arg(long, default_value_t = 1e-2)]
    pub r_min: f64,
    /// Largest sheet resistance (Ω/sq).
    #[arg(long, default_value_t = 1e4)]
    pub r_max: f64,
    /// Log-spaced grid points.
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Doped-layer capacitance (F).
    #[arg(long)]
    pub c_qd: Option<f64>,
    /// Intrinsic Q of the bare line.
    #[arg(long)]
    pub q_int: Option<f64>,
    /// Squares of doped layer in series with the capacitance.
    #[arg(long)]
    pub n_squares: Option<f64>,
    /// Write the (R_s, Q_L) curve here.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl QloadSweep {
    pub fn run(&self) -> Result<Report, CliError> {
        let mut r = Report::new("qload-sweep");
        let mut c = presets::loss_circuit();
        c.c_qd = self.c_qd.unwrap_or(c.c_qd);
        c.q_int_bare = self.q_int.unwrap_or(c.q_int_bare);
        c.n_squares = self.n_squares.unwrap_or(c.n_squares);
        r.input("f0_bare_hz", c.f0_bare)
            .input("z_c_ohm", c.z_c)
            .input("c_k_f", c.c_k)
            .input("c_qd_f", c.c_qd)
            .input("q_int_bare", c.q_int_bare)
            .input("r_load_ohm", c.r_l)
            .input("n_squares", c.n_squares)
            .input("r_min_ohm_sq", self.r_min)
            .input("r_max_ohm_sq", self.r_max)
            .input("points", self.points);
        let grid = log_grid("r-min/--r-max", self.r_min, self.r_max, self.points)?;
        let curve = simulate_loaded_q(&c, &grid).map_err(CliError::model("--c-qd/--q-int/--n-squares"))?;
        let q: Vec<f64> = curve.iter().map(|p| p.1).collect();
        r.output("q_loaded_first", q[0])
            .output("q_loaded_last", q[q.len() - 1]);
        let columns: [(&str, &[f64]); 2] = [("sheet_resistance_ohm", &grid), ("q_loaded", &q)];
        r.table(&columns);
        if let Some(path) = &self.output {
            table::write(path, &columns)?;
        }
        Ok(r)
    }
}

#[derive(Debug, Args)]
pub struct CalibrateNm {
    #[command(flatten)]
    pub resonator: ResonatorArgs,
    /// Source power (W).
    #[arg(long)]
    pub power_w: f64,
    /// Line loss between source and device (dB).
    #[arg(long, default_value_t = 0.0)]
    pub line_loss_db: f64,
    /// Drive detuning from the resonance (Hz).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub detuning: f64,
}

impl CalibrateNm {
    pub fn run(&self) -> Result<Report, CliError> {
        let mut r = Report::new("calibrate-nm");
        let res = self.resonator.resolve(&mut r)?;
        r.input("power_w", self.power_w)
            .input("line_loss_db", self.line_loss_db)
            .input("detuning_hz", self.detuning);
        let p = apply_line_loss(self.power_w, self.line_loss_db).map_err(CliError::model("--power-w/--line-loss-db"))?;
        let n = photon_number(
            p,
            res.omega_m,
            res.kappa,
            res.kappa_ext,
            AngularFrequency::from_hz(self.detuning),
        )
        .map_err(CliError::model("--detuning"))?;
        r.output("power_at_device_w", p).output("n_m", n);
        Ok(r)
    }
}

#[derive(Debug, Args)]
pub struct G0Theory {
    #[command(flatten)]
    pub resonator: ResonatorArgs,
    /// Static dipole d (m).
    #[arg(long)]
    pub dipole: f64,
    /// Gate to back-contact distance (m).
    #[arg(long, default_value_t = presets::H_QD)]
    pub h_qd: f64,
    /// Centre line to ground distance used for the vacuum field (m).
    #[arg(long, default_value_t = presets::H_RES)]
    pub h_res: f64,
    /// Substrate relative permittivity.
    #[arg(long, default_value_t = presets::EPS_GAAS)]
    pub eps: f64,
}

impl G0Theory {
    pub fn run(&self) -> Result<Report, CliError> {
        let mut r = Report::new("g0-theory");
        let mut res = self.resonator.resolve(&mut r)?;
        res.h_res = self.h_res;
        res.eps_substrate = self.eps;
        r.input("dipole_m", self.dipole)
            .input("h_qd_m", self.h_qd)
            .input("h_res_m", self.h_res)
            .input("eps_substrate", self.eps)
            .input("width_m", res.width_w)
            .input("gap_m", res.gap_s);
        let eps_eff = cpw_geometry_to_electrical(res.width_w, res.gap_s, self.eps)
            .map_err(CliError::model("--eps"))?
            .eps_eff;
        let e_rms = vacuum_field(res.z_c, res.omega_m, res.h_res).map_err(CliError::model("--h-res"))?;
        let g0 = coupling_strength_theory(self.dipole, &res, self.h_qd, self.eps, eps_eff)
            .map_err(CliError::model("--dipole/--h-qd"))?;
        r.output("eps_eff", eps_eff)
            .output("e_rms_v_per_m", e_rms)
            .output("g0_hz", g0.hz());
        Ok(r)
    }
}
