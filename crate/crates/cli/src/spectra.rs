use std::path::PathBuf;

use clap::{Args, ValueEnum};
use qtd_core::fit::{adapters, lm_fit, FitResult, LmOptions};
use qtd_core::presets;
use qtd_core::qdm::{min_splitting_bias, Branch};
use qtd_core::reproduce::{synth_bessel_amplitudes, SEED};
use qtd_core::spectroscopy::{
    modulation_index, normalize_by_etalon, sideband_amplitudes, synth_sideband_spectrum, DispersiveLorentzianParams,
    EtalonParams, SidebandMode,
};
use qtd_core::{AngularFrequency, Spectrum};

use crate::args::{linear_grid, pick, QdmArgs, ResonatorArgs};
use crate::error::CliError;
use crate::report::Report;
use crate::table::{self, Table};

#[derive(Debug, Args)]
pub struct SidebandSim {
    #[command(flatten)]
    pub resonator: ResonatorArgs,
    /// Coupling g₀/2π (Hz).
    #[arg(long)]
    pub g0: f64,
    /// Microwave photon number of the simulated spectrum.
    #[arg(long, default_value_t = 3e6)]
    pub n_m: f64,
    /// Line FWHM (Hz).
    #[arg(long, default_value_t = presets::GAMMA_INH_HZ)]
    pub fwhm: f64,
    /// Dispersive mixing angle (rad).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    /// Line amplitude A; FWHM/2 (unit peak height) by default.
    #[arg(long, allow_hyphen_values = true)]
    pub amplitude: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub offset: f64,
    /// Highest sideband order kept.
    #[arg(long, default_value_t = 8)]
    pub l_max: u32,
    /// Sideband weights: abs (|J_l|) or squared (J_l²).
    #[arg(long, default_value = "abs")]
    pub mode: String,
    /// Full width of the detuning grid around the exciton line (Hz).
    #[arg(long, default_value_t = 6e10)]
    pub span: f64,
    #[arg(long, default_value_t = 1201)]
    pub points: usize,
    /// Write the spectrum here.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Also write carrier and first-sideband amplitudes versus n_m here.
    #[arg(long)]
    pub amplitudes_out: Option<PathBuf>,
    /// Largest n_m of the amplitude table.
    #[arg(long, default_value_t = 3e7)]
    pub n_max: f64,
    /// Photon numbers in the amplitude table, from 0 to --n-max.
    #[arg(long, default_value_t = 21)]
    pub n_points: usize,
    /// Relative Gaussian noise on the amplitudes.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = SEED)]
    pub seed: u64,
}

impl SidebandSim {
    pub fn run(&self) -> Result<Report, CliError> {
        let mut r = Report::new("sideband-sim");
        let res = self.resonator.resolve(&mut r)?;
        let mode = SidebandMode::parse(&self.mode)
            .ok_or_else(|| CliError::Usage(format!("--mode: expected `abs` or `squared`, got `{}`", self.mode)))?;
        let g0 = AngularFrequency::from_hz(self.g0);
        let amplitude = self.amplitude.unwrap_or(0.5 * self.fwhm);
        r.input("g0_hz", self.g0)
            .input("n_m", self.n_m)
            .input("fwhm_hz", self.fwhm)
            .input("theta", self.theta)
            .input("amplitude", amplitude)
            .input("offset", self.offset)
            .input("l_max", self.l_max)
            .input("mode", self.mode.as_str())
            .input("span_hz", self.span)
            .input("points", self.points);
        let beta = modulation_index(g0, self.n_m, res.omega_m).map_err(CliError::model("--g0/--n-m"))?;
        let weights = sideband_amplitudes(beta, self.l_max, mode).map_err(CliError::model("--l-max"))?;
        let qdm = presets::qdm1();
        let f_qd = qdm.omega_qd.hz();
        let detuning = linear_grid("span", -0.5 * self.span, 0.5 * self.span, self.points)?;
        let grid: Vec<f64> = detuning.iter().map(|d| f_qd + d).collect();
        let line = DispersiveLorentzianParams {
            amplitude_a: amplitude,
            center: 0.0,
            fwhm: self.fwhm,
            phase_theta: self.theta,
            offset: self.offset,
        };
        let spectrum = synth_sideband_spectrum(&qdm, g0, self.n_m, res.omega_m, &line, self.l_max, mode, &grid)
            .map_err(CliError::model("--fwhm/--theta/--amplitude/--offset"))?;
        let signal = spectrum.values();
        r.output("beta", beta)
            .output("line_frequency_hz", f_qd)
            .output("sideband_order", weights.iter().map(|w| w.0).collect::<Vec<i32>>())
            .output("sideband_weight", weights.iter().map(|w| w.1).collect::<Vec<f64>>());
        let columns: [(&str, &[f64]); 2] = [("detuning_hz", &detuning), ("signal", &signal)];
        r.table(&columns);
        if let Some(path) = &self.output {
            table::write(path, &columns)?;
        }
        if let Some(path) = &self.amplitudes_out {
            r.input("n_max", self.n_max)
                .input("n_points", self.n_points)
                .input("noise", self.noise)
                .input("seed", self.seed);
            let n_grid = linear_grid("n-max", 0.0, self.n_max, self.n_points)?;
            let amps = synth_bessel_amplitudes(self.g0, res.omega_m, &n_grid, self.noise, self.seed)
                .map_err(CliError::model("--noise"))?;
            let rows: Vec<Vec<String>> = amps
                .iter()
                .map(|&(l, n, a)| vec![table::format_number(n), l.to_string(), table::format_number(a)])
                .collect();
            table::write_rows(path, &["n_m", "order", "amplitude"], &rows)?;
            r.output("amplitude_rows", rows.len());
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Adapter {
    Lorentzian,
    Dispersive,
    Bessel,
    Anticrossing,
    Exponential,
}

impl Adapter {
    fn name(self) -> &'static str {
        match self {
            Self::Lorentzian => "fit lorentzian",
            Self::Dispersive => "fit dispersive",
            Self::Bessel => "fit bessel",
            Self::Anticrossing => "fit anticrossing",
            Self::Exponential => "fit exponential",
        }
    }

    /// Expected first column, and the columns before the optional σ.
    fn layout(self) -> (&'static str, usize) {
        match self {
            Self::Lorentzian | Self::Dispersive => ("frequency_hz", 2),
            Self::Bessel => ("n_m", 3),
            Self::Anticrossing => ("bias_v", 3),
            Self::Exponential => ("al_fraction", 2),
        }
    }
}

#[derive(Debug, Args)]
pub struct Fit {
    #[arg(value_enum)]
    pub adapter: Adapter,
    /// Data table; a trailing σ column is used with --weighted.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Weight residuals by the σ column.
    #[arg(long)]
    pub weighted: bool,
    #[arg(long, default_value_t = LmOptions::default().max_iterations)]
    pub max_iterations: usize,
    #[command(flatten, next_help_heading = "Bessel fit")]
    pub resonator: ResonatorArgs,
    /// bessel: amplitude normalisation; the carrier at n_m = 0 by default.
    #[arg(long)]
    pub scale: Option<f64>,
    /// bessel: upper end of the starting-value scan (Hz).
    #[arg(long, default_value_t = 10e6)]
    pub g0_max: f64,
    #[command(flatten, next_help_heading = "Anticrossing fit")]
    pub qdm: QdmArgs,
    /// anticrossing: hold d_ind at its starting value.
    #[arg(long)]
    pub fix_d_ind: bool,
}

type Sigma = Option<f64>;

impl Fit {
    fn sigma(&self, t: &Table, n_cols: usize) -> Result<Vec<Sigma>, CliError> {
        if !self.weighted {
            return Ok(vec![None; t.rows.len()]);
        }
        if t.headers.len() <= n_cols {
            return Err(CliError::Usage(format!(
                "--weighted: {} has no σ column (expected column {})",
                t.path.display(),
                n_cols + 1
            )));
        }
        Ok(t.f64_column(n_cols)?.into_iter().map(Some).collect())
    }

    fn xy(&self, t: &Table) -> Result<Vec<(f64, f64, Sigma)>, CliError> {
        let xs = t.f64_column(0)?;
        let ys = t.f64_column(1)?;
        let s = self.sigma(t, 2)?;
        Ok(xs.into_iter().zip(ys).zip(s).map(|((x, y), s)| (x, y, s)).collect())
    }

    pub fn run(&self) -> Result<Report, CliError> {
        let mut r = Report::new(self.adapter.name());
        let (abscissa, n_cols) = self.adapter.layout();
        let t = table::read(&self.input, n_cols)?;
        t.expect_abscissa(self.adapter.name(), abscissa)?;
        r.input("input", self.input.display().to_string())
            .input("weighted", self.weighted)
            .input("max_iterations", self.max_iterations)
            .output("points", t.rows.len());
        let opts = LmOptions {
            max_iterations: self.max_iterations,
            ..LmOptions::default()
        };
        let file = self.input.display().to_string();
        let fit: FitResult = match self.adapter {
            Adapter::Lorentzian => {
                let data = self.xy(&t)?;
                let xs: Vec<f64> = data.iter().map(|d| d.0).collect();
                let ys: Vec<f64> = data.iter().map(|d| d.1).collect();
                let problem = adapters::lorentzian(data, adapters::guess_lorentzian(&xs, &ys))?;
                lm_fit(&problem, &opts)?
            }
            Adapter::Dispersive => adapters::fit_dispersive_multistart(&self.xy(&t)?, &opts)?,
            Adapter::Exponential => {
                let problem = adapters::exponential(self.xy(&t)?).map_err(CliError::model(file))?;
                lm_fit(&problem, &opts)?
            }
            Adapter::Bessel => {
                let res = self.resonator.resolve(&mut r)?;
                let sigma = self.sigma(&t, 3)?;
                let mut data = Vec::with_capacity(t.rows.len());
                for (row, s) in t.rows.iter().zip(sigma) {
                    let n = t.f64_at(row, 0)?;
                    let l = t.f64_at(row, 1)?;
                    if !(l >= 0.0 && l.fract() == 0.0 && l <= u32::MAX as f64) {
                        return Err(CliError::Malformed {
                            path: t.path.clone(),
                            line: row.line,
                            message: format!("order `{}` is not a non-negative integer", row.fields[1]),
                        });
                    }
                    data.push((l as u32, n, t.f64_at(row, 2)?, s));
                }
                r.input("scale", self.scale).input("g0_max_hz", self.g0_max);
                adapters::fit_bessel_amplitudes(data, res.omega_m, self.scale, self.g0_max, &opts)
                    .map_err(CliError::model(file))?
            }
            Adapter::Anticrossing => {
                let start = self.qdm.resolve(&mut r)?;
                r.input("fix_d_ind", self.fix_d_ind);
                let sigma = self.sigma(&t, 3)?;
                let mut data = Vec::with_capacity(t.rows.len());
                for (row, s) in t.rows.iter().zip(sigma) {
                    let branch = Branch::parse(&row.fields[1]).ok_or_else(|| CliError::Malformed {
                        path: t.path.clone(),
                        line: row.line,
                        message: format!("branch `{}` is neither `lower` nor `upper`", row.fields[1]),
                    })?;
                    data.push((t.f64_at(row, 0)?, branch, t.f64_at(row, 2)?, s));
                }
                let problem = adapters::anticrossing(data, &start, self.fix_d_ind).map_err(CliError::model(file))?;
                let fit = lm_fit(&problem, &opts)?;
                let p = adapters::anticrossing_params(&fit.params, start.h_qd);
                if let Ok(v) = min_splitting_bias(&p) {
                    r.output("min_splitting_bias_v", v);
                }
                fit
            }
        };
        r.output("reduced_chi2", fit.reduced_chi2());
        r.set_fit(&fit);
        Ok(r)
    }
}

#[derive(Debug, Args)]
pub struct EtalonNormalize {
    /// Raw spectrum: frequency_hz, value.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Etalon centre (Hz, same axis as the spectrum).
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<f64>,
    /// Etalon FWHM (Hz).
    #[arg(long)]
    pub fwhm: Option<f64>,
    /// Free spectral range (Hz).
    #[arg(long)]
    pub fsr: Option<f64>,
    /// Write the normalised spectrum here.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl EtalonNormalize {
    pub fn run(&self) -> Result<Report, CliError> {
        let mut r = Report::new("etalon-normalize");
        let base = presets::etalon();
        let e = EtalonParams {
            center: pick("center", self.center, "etalon", base.center),
            fwhm: pick("fwhm", self.fwhm, "etalon", base.fwhm),
            fsr: pick("fsr", self.fsr, "etalon", base.fsr),
        };
        e.validate().map_err(CliError::model("--center/--fwhm/--fsr"))?;
        r.input("input", self.input.display().to_string())
            .input("center_hz", e.center)
            .input("fwhm_hz", e.fwhm)
            .input("fsr_hz", e.fsr);
        let t = table::read(&self.input, 2)?;
        t.expect_abscissa("etalon-normalize", "frequency_hz")?;
        let points: Vec<(f64, f64)> = t.f64_column(0)?.into_iter().zip(t.f64_column(1)?).collect();
        let file = self.input.display().to_string();
        let raw = Spectrum::new(points, t.headers[0].clone(), t.headers[1].clone()).map_err(CliError::model(file.clone()))?;
        let n = normalize_by_etalon(&raw, &e).map_err(CliError::model(file))?;
        r.output("finesse", e.finesse())
            .output("kept", n.spectrum.len())
            .output("dropped", n.dropped.len());
        if !n.dropped.is_empty() {
            r.warn(format!(
                "{} points with etalon transmission below the threshold were left out",
                n.dropped.len()
            ));
        }
        let (f, v): (Vec<f64>, Vec<f64>) = n.spectrum.points().iter().copied().unzip();
        let columns: [(&str, &[f64]); 2] = [(t.headers[0].as_str(), &f), (t.headers[1].as_str(), &v)];
        r.table(&columns);
        if let Some(path) = &self.output {
            table::write(path, &columns)?;
        }
        Ok(r)
    }
}
