//! The `moyal` command line.
//!
//! Exit codes: 0 success, 1 failed check, 2 usage error, 3 I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::basis::{analyze, f_grid, h_grid, synthesize};
use crate::coeff::{star_coeff, CoefficientMatrix, WeightPair};
use crate::error::{Error, Result};
use crate::filtration::{
    classify, gst_norm_model, moyal_membership, trace_factorize, CoefficientModel, MembershipReport,
    MoyalVerdict, NormOutcome, SpaceTag,
};
use crate::grid::{GridFunction2, GridSpec1, GridSpec2};
use crate::io::{read_file, write_file, Data, Format};
use crate::transforms::{grid_star, wigner_bar, wigner_bar_inverse, wigner_forward, wigner_inverse};
use crate::verify::{run_suite, Suite, VerifyOptions};
use crate::weyl::weyl_apply;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Residual below which `factorize` accepts a certificate.
pub const FACTORIZE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "moyal", version, about = "Moyal star-product engine on two-dimensional phase space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StarMode {
    Coeff,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Forward,
    Inverse,
    Bar,
    BarInverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Bin,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Bin => Format::Bin,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct Output {
    /// Output file.
    #[arg(long)]
    pub out: PathBuf,
    /// Output format; defaults to the extension of `--out`, else JSON.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

impl Output {
    fn write(&self, data: &Data) -> Result<()> {
        let format =
            self.format.map(Format::from).or_else(|| Format::from_path(&self.out)).unwrap_or(Format::Json);
        write_file(&self.out, data, format)?;
        println!("wrote {} ({})", self.out.display(), describe(data));
        Ok(())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample f_mn on a phase-space grid, or h_m on a line with `--line`.
    Basis {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long)]
        line: bool,
        /// Axis as `n=256,step=0.0625`; defaults to MOYAL_GRID, then the
        /// built-in grid.
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Star product of two files.
    Star {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "coeff")]
        mode: StarMode,
        /// Order used when analyzing grid inputs in coefficient mode.
        #[arg(long, default_value_t = 8)]
        order: usize,
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Apply W, W⁻¹, W̄ or W̄⁻¹ to a phase-space grid.
    Wigner {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "forward")]
        direction: Direction,
        #[arg(long)]
        grid: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Apply the Weyl operator of a symbol to a wavefunction.
    Weyl {
        symbol: PathBuf,
        phi: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Classify a coefficient model, e.g. `sep(exp(1.0), one)`.
    Classify {
        model: Option<String>,
        /// Classify the finite matrix in this file instead.
        #[arg(long, conflicts_with = "model")]
        matrix: Option<PathBuf>,
        /// Weight pair `s,t` at which to evaluate ‖·‖_{st}; repeatable.
        #[arg(long = "weights", allow_hyphen_values = true)]
        weights: Vec<String>,
        /// Space such as `G(0,-2)`, `B(1,1)`, `ML` or `S2`; repeatable.
        #[arg(long = "space", allow_hyphen_values = true)]
        spaces: Vec<String>,
    },
    /// Trace-class factorization C = g ★ h with a certified bound.
    Factorize {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        /// Where to write g.
        #[arg(long)]
        g: Option<PathBuf>,
        /// Where to write h.
        #[arg(long)]
        h: Option<PathBuf>,
    },
    /// Run the verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Tolerance override `ID=VALUE`; repeatable.
        #[arg(long = "tol", allow_hyphen_values = true)]
        tol: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        grid: Option<String>,
    },
}

fn describe(data: &Data) -> String {
    match data {
        Data::Grid2(g) => format!("grid2 {}×{}", g.spec().q.n(), g.spec().p.n()),
        Data::Grid1(g) => format!("grid1 {}", g.spec().n()),
        Data::Coeff(c) => format!("coeff order {}", c.order()),
    }
}

fn grid_axis(flag: &Option<String>) -> Result<GridSpec1> {
    match flag {
        Some(text) => text.parse(),
        None => GridSpec1::from_env_or_default(),
    }
}

fn as_grid(data: Data, spec: GridSpec2) -> Result<GridFunction2> {
    match data {
        Data::Grid2(g) => Ok(g),
        Data::Coeff(c) => Ok(synthesize(&c, spec)),
        Data::Grid1(_) => Err(Error::WrongVariant("phase-space grid or coefficient matrix required")),
    }
}

fn as_coeff(data: Data, order: usize) -> Result<CoefficientMatrix> {
    match data {
        Data::Coeff(c) => Ok(c),
        Data::Grid2(g) => analyze(&g, order),
        Data::Grid1(_) => Err(Error::WrongVariant("phase-space grid or coefficient matrix required")),
    }
}

fn print_json(value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Format(e.to_string()))?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}")?;
    Ok(())
}

#[derive(Serialize)]
struct NormRow {
    s: f64,
    t: f64,
    #[serde(flatten)]
    outcome: NormOutcome,
}

#[derive(Serialize)]
struct ClassifyReportJson {
    model: String,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    moyal: Option<MoyalVerdict>,
    norms: Vec<NormRow>,
    spaces: Vec<MembershipReport>,
}

fn parse_weights(text: &str) -> Result<WeightPair> {
    let (s, t) =
        text.split_once(',').ok_or_else(|| Error::Parse(format!("expected weights `s,t`, got `{text}`")))?;
    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad weight `{v}`")));
    Ok(WeightPair::new(num(s)?, num(t)?))
}

#[derive(Serialize)]
struct CertificateJson {
    order: usize,
    r: f64,
    bound: f64,
    residual: f64,
    trace_norm: f64,
    h_norm_sq: f64,
    odd_zeta: f64,
    holds: bool,
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Basis { m, n, line, grid, output } => {
            let axis = grid_axis(&grid)?;
            let data = if line {
                Data::Grid1(h_grid(m, axis))
            } else {
                Data::Grid2(f_grid(m, n, GridSpec2::square(axis)))
            };
            output.write(&data)?;
        }
        Command::Star { a, b, mode, order, grid, output } => {
            let (a, b) = (read_file(&a)?, read_file(&b)?);
            let data = match mode {
                StarMode::Coeff => Data::Coeff(star_coeff(&as_coeff(a, order)?, &as_coeff(b, order)?)),
                StarMode::Grid => {
                    let spec = match (&a, &b, &grid) {
                        (_, _, Some(_)) => GridSpec2::square(grid_axis(&grid)?),
                        (Data::Grid2(g), _, None) | (_, Data::Grid2(g), None) => g.spec(),
                        _ => GridSpec2::square(grid_axis(&None)?),
                    };
                    Data::Grid2(grid_star(&as_grid(a, spec)?, &as_grid(b, spec)?)?)
                }
            };
            output.write(&data)?;
        }
        Command::Wigner { input, direction, grid, output } => {
            let f = as_grid(read_file(&input)?, GridSpec2::square(grid_axis(&grid)?))?;
            let g = match direction {
                Direction::Forward => wigner_forward(&f)?,
                Direction::Inverse => wigner_inverse(&f)?,
                Direction::Bar => wigner_bar(&f)?,
                Direction::BarInverse => wigner_bar_inverse(&f)?,
            };
            output.write(&Data::Grid2(g))?;
        }
        Command::Weyl { symbol, phi, output } => {
            let Data::Grid1(phi) = read_file(&phi)? else {
                return Err(Error::WrongVariant("wavefunction must be a line grid"));
            };
            let symbol = as_grid(read_file(&symbol)?, GridSpec2::square(phi.spec()))?;
            output.write(&Data::Grid1(weyl_apply(&symbol, &phi)?))?;
        }
        Command::Classify { model, matrix, weights, spaces } => {
            let model = match (model, matrix) {
                (Some(text), None) => text.parse::<CoefficientModel>()?,
                (None, Some(path)) => CoefficientModel::Truncated { matrix: as_coeff(read_file(&path)?, 8)? },
                _ => return Err(Error::Parse("give a model or --matrix".into())),
            };
            let symbolic = !matches!(model, CoefficientModel::Truncated { .. });
            let weights: Vec<WeightPair> = weights.iter().map(|w| parse_weights(w)).collect::<Result<_>>()?;
            let mut tags: Vec<SpaceTag> = spaces.iter().map(|s| s.parse()).collect::<Result<_>>()?;
            let mut norms = Vec::new();
            for w in weights {
                if symbolic {
                    norms.push(NormRow { s: w.s, t: w.t, outcome: gst_norm_model(&model, w.s, w.t)? });
                } else if !tags.contains(&SpaceTag::g(w.s, w.t)) {
                    // Finite matrices report weighted norms as memberships.
                    tags.push(SpaceTag::g(w.s, w.t));
                }
            }
            let spaces = tags.into_iter().map(|tag| classify(&model, tag)).collect::<Result<_>>()?;
            let moyal = if symbolic { Some(moyal_membership(&model)?) } else { None };
            print_json(&ClassifyReportJson { model: model.to_string(), moyal, norms, spaces })?;
        }
        Command::Factorize { input, r, g, h } => {
            let c = as_coeff(read_file(&input)?, 8)?;
            let cert = trace_factorize(&c, r)?;
            let holds = cert.residual <= FACTORIZE_TOLERANCE && cert.bounds_hold();
            if let Some(path) = g {
                write_factor(&path, &cert.g)?;
            }
            if let Some(path) = h {
                write_factor(&path, &cert.h)?;
            }
            print_json(&CertificateJson {
                order: c.order(),
                r,
                bound: cert.bound,
                residual: cert.residual,
                trace_norm: cert.trace_norm,
                h_norm_sq: cert.h_norm_sq,
                odd_zeta: cert.odd_zeta,
                holds,
            })?;
            return Ok(if holds { EXIT_OK } else { EXIT_CHECK });
        }
        Command::Verify { suite, tol, seed, json, grid } => {
            let suite: Suite = suite.parse()?;
            let mut options =
                VerifyOptions { grid: GridSpec2::square(grid_axis(&grid)?), seed, ..Default::default() };
            for t in &tol {
                options.parse_tolerance(t)?;
            }
            let report = run_suite(suite, &options);
            if json {
                print_json(&report)?;
            } else {
                println!("{report}");
            }
            return Ok(if report.pass { EXIT_OK } else { EXIT_CHECK });
        }
    }
    Ok(EXIT_OK)
}

fn write_factor(path: &Path, c: &CoefficientMatrix) -> Result<()> {
    let format = Format::from_path(path).unwrap_or(Format::Json);
    write_file(path, &Data::Coeff(c.clone()), format)
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Format(_) => EXIT_IO,
        Error::Parse(_)
        | Error::WrongVariant(_)
        | Error::BadExponent { .. }
        | Error::InvalidGrid(_)
        | Error::GridMismatch(_) => EXIT_USAGE,
        Error::DivergentSeries { .. } | Error::GridTooSmall { .. } => EXIT_CHECK,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("moyal: {e}");
            exit_code(&e)
        }
    }
}
