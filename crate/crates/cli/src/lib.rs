//! The `cebeam` command-line front end.
//!
//! Every subcommand builds one beam and one grid from a layered
//! configuration: figure preset, then `--config` file, then flags.
//! Exit codes: 0 success, 2 invalid configuration or usage, 3 numerical or
//! I/O failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use cebeam_core::coherence::coherence_density_of;
use cebeam_core::config::DEFAULT_GRID;
use cebeam_core::output::{analyze, dump_field_csv, render_intensity_pgm, render_stokes_csv, write_field_csv};
use cebeam_core::{
    covariance_matrix, degree_of_polarization, factorize_tripartite, inner_product_sampled, make_grid,
    overlap_gaussian_analytic, position_covariance, reduced_party_matrix, sample_beam, sample_mode, BeamConfig,
    BeamFamily, Error, Family, Party, Result, ScalarMode,
};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable that replaces the default samples per axis.
pub const GRID_ENV: &str = "CEBEAM_GRID_DEFAULT";

#[derive(Parser, Debug)]
#[command(name = "cebeam", version, about = "Classically entangled vector beams: synthesis and analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a beam and write its field as CSV.
    Make {
        #[command(flatten)]
        beam: BeamArgs,
        /// Output path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Schmidt decomposition report (JSON).
    Schmidt {
        #[command(flatten)]
        beam: BeamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Polarization covariance matrix and degree of polarization (JSON).
    Coherence {
        #[command(flatten)]
        beam: BeamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Overlap of two fundamental Gaussians displaced by ±a along y.
    Overlap {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        w0: f64,
        #[arg(long)]
        nx: Option<usize>,
        #[arg(long)]
        ny: Option<usize>,
        /// Half-width of the grid (default `|a| + 8 w0`).
        #[arg(long)]
        extent: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        z: f64,
    },
    /// Render intensity (PGM), Stokes parameters and/or the field (CSV).
    Render {
        #[command(flatten)]
        beam: BeamArgs,
        /// 16-bit PGM intensity image.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Stokes parameter CSV.
        #[arg(long)]
        stokes: Option<PathBuf>,
        /// Field CSV (real and imaginary parts).
        #[arg(long)]
        field: Option<PathBuf>,
    },
    /// Three-qubit tensor of a polarization/x/y beam and its reduced matrices (JSON).
    Tripartite {
        #[command(flatten)]
        beam: BeamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Default)]
struct BeamArgs {
    /// Beam family: pp, fourfold, ps, radial, ghz, w, noon.
    #[arg(long)]
    beam: Option<String>,
    /// Catalog figure preset (1 to 6).
    #[arg(long)]
    figure: Option<u32>,
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    w0: Option<f64>,
    /// NOON photon number.
    #[arg(long = "N", visible_alias = "n")]
    n: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// A00,A01,A10,A11 as 4 reals or 8 interleaved re,im values.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    coeffs: Option<Vec<f64>>,
    /// Permit overlapping fourfold spots (b ≥ 2a).
    #[arg(long)]
    allow_overlap: bool,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long)]
    extent: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    z: Option<f64>,
}

impl BeamArgs {
    fn overrides(&self) -> Result<BeamConfig> {
        let family = self.beam.as_deref().map(Family::parse).transpose()?;
        let coeffs = match &self.coeffs {
            None => None,
            Some(v) if v.len() == 4 => Some(v.iter().map(|&r| [r, 0.0]).collect()),
            Some(v) if v.len() == 8 => Some(v.chunks_exact(2).map(|c| [c[0], c[1]]).collect()),
            Some(v) => return Err(Error::InvalidParameter(format!("--coeffs takes 4 or 8 numbers, got {}", v.len()))),
        };
        Ok(BeamConfig {
            family,
            a: self.a,
            b: self.b,
            w0: self.w0,
            n: self.n,
            theta: self.theta,
            coeffs,
            allow_overlap: self.allow_overlap.then_some(true),
            nx: self.nx,
            ny: self.ny,
            extent: self.extent,
            z: self.z,
        })
    }

    fn resolve(&self) -> Result<BeamConfig> {
        let mut cfg = match self.figure {
            None => BeamConfig::default(),
            Some(n) => BeamConfig::figure(n)
                .ok_or_else(|| Error::InvalidParameter(format!("no figure preset {n} (expected 1 to 6)")))?,
        };
        if let Some(path) = &self.config {
            let file = BeamConfig::from_path(path).map_err(|e| match e {
                Error::Io(io) => Error::Parse(format!("{}: {io}", path.display())),
                other => other,
            })?;
            cfg = cfg.merged_with(file);
        }
        Ok(cfg.merged_with(self.overrides()?))
    }
}

/// Default samples per axis, honouring [`GRID_ENV`].
pub fn default_grid_size() -> Result<usize> {
    match std::env::var(GRID_ENV) {
        Err(_) => Ok(DEFAULT_GRID),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 2 => Ok(n),
            _ => Err(Error::InvalidParameter(format!("{GRID_ENV}={s:?} is not a grid size ≥ 2"))),
        },
    }
}

/// Parse `argv` (program name first), run the subcommand and return the
/// process exit code.
pub fn run<I>(argv: I) -> i32
where
    I: IntoIterator<Item = OsString>,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("cebeam: {e}");
            if e.is_configuration() {
                EXIT_CONFIG
            } else {
                EXIT_NUMERICAL
            }
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Make { beam, out } => {
            let cfg = beam.resolve()?;
            let field = sample_beam(&cfg.build_beam()?, &cfg.build_grid(default_grid_size()?)?);
            match out {
                Some(p) => dump_field_csv(&field, &p),
                None => write_field_csv(&field, std::io::stdout().lock()),
            }
        }
        Command::Schmidt { beam, out } => {
            let cfg = beam.resolve()?;
            let report = analyze(&cfg.build_beam()?, &cfg.build_grid(default_grid_size()?)?)?;
            emit(&report.to_json(), out.as_deref())
        }
        Command::Coherence { beam, out } => {
            let cfg = beam.resolve()?;
            let b = cfg.build_beam()?;
            let field = sample_beam(&b, &cfg.build_grid(default_grid_size()?)?);
            let density = coherence_density_of(&field);
            let j = covariance_matrix(&density);
            let mut v = json!({
                "family": b.family().to_string(),
                "covariance": j.j.to_reals(),
                "eigenvalues": j.eigenvalues(),
                "trace": j.trace(),
                "dop": degree_of_polarization(&j)?,
                "offdiagonal_fraction": density.offdiagonal_fraction(),
            });
            if b.family() == BeamFamily::Fourfold {
                if let Ok(p) = position_covariance(&b) {
                    v["position_covariance"] = json!(p.j.to_reals());
                    v["position_dop"] = json!(degree_of_polarization(&p)?);
                }
            }
            emit(&pretty(&v), out.as_deref())
        }
        Command::Overlap { a, w0, nx, ny, extent, z } => {
            let analytic = overlap_gaussian_analytic(a, w0)?;
            let n = default_grid_size()?;
            let grid = make_grid(nx.unwrap_or(n), ny.unwrap_or(n), extent.unwrap_or(a.abs() + 8.0 * w0), z)?;
            let g = ScalarMode::gaussian(w0)?;
            let up = sample_mode(&g.clone().shifted(0.0, a), &grid);
            let down = sample_mode(&g.shifted(0.0, -a), &grid);
            let q = inner_product_sampled(&up, &down)?;
            let text = format!(
                "analytic   {analytic:.7}  {analytic:.16e}\nquadrature {:.7}  {:.16e}\nimag       {:.16e}\nabs_error  {:.3e}\n",
                q.re,
                q.re,
                q.im,
                (q - analytic).norm()
            );
            emit(&text, None)
        }
        Command::Render { beam, out, stokes, field } => {
            if out.is_none() && stokes.is_none() && field.is_none() {
                return Err(Error::InvalidParameter("render needs --out, --stokes or --field".into()));
            }
            let cfg = beam.resolve()?;
            let sampled = sample_beam(&cfg.build_beam()?, &cfg.build_grid(default_grid_size()?)?);
            if let Some(p) = out {
                render_intensity_pgm(&sampled, &p)?;
            }
            if let Some(p) = stokes {
                render_stokes_csv(&sampled, &p)?;
            }
            if let Some(p) = field {
                dump_field_csv(&sampled, &p)?;
            }
            Ok(())
        }
        Command::Tripartite { beam, out } => {
            let cfg = beam.resolve()?;
            let b = cfg.build_beam()?;
            let t = factorize_tripartite(&b)?;
            let mut entries = Vec::new();
            for p in 0..2 {
                for x in 0..2 {
                    for y in 0..2 {
                        let c = t.get(p, x, y);
                        entries.push(json!({ "p": p, "nx": x, "ny": y, "re": c.re, "im": c.im }));
                    }
                }
            }
            let v = json!({
                "family": b.family().to_string(),
                "w0": t.w0,
                "entries": entries,
                "reduced": {
                    "polarization": reduced_party_matrix(&t, Party::Polarization).to_reals(),
                    "x": reduced_party_matrix(&t, Party::X).to_reals(),
                    "y": reduced_party_matrix(&t, Party::Y).to_reals(),
                },
            });
            emit(&pretty(&v), out.as_deref())
        }
    }
}
