//! Command-line front end: tabulate Gaussian families, run the centered
//! DFT over grids read from files, tabulate discrete Wigner functions, and
//! run the identity verification suite.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid parameters or malformed
//! input (the message names the violated invariant), 3 verification
//! failure.

pub mod export;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use pgauss::gaussians::{
    discrete_gaussian_1d, discrete_gaussian_2d, discrete_gaussian_shifted_1d, tabulate_gaussian_1d,
    tabulate_gaussian_2d,
};
use pgauss::grid::Rank;
use pgauss::identities::{all_passed, run_suite, SweepSpec};
use pgauss::transforms::{dft_1d, dft_2d};
use pgauss::wigner::{wigner_discrete_1d, wigner_discrete_2d};
use pgauss::{Dimension, GridFunction, HalfShift, Kappa, SigmaMatrix, TruncationPolicy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pgauss",
    about = "Periodized Gaussians, the centered DFT, and discrete Wigner functions on odd grids",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = ExportFormat::Csv)]
    pub format: ExportFormat,

    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Override the relative tail target of the series truncation policy.
    #[arg(long, global = true, value_name = "EPS")]
    pub tail: Option<f64>,

    /// Seed for sampled verification points (overrides the sweep file).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Periodic Gaussian of one discrete variable.
    G1d,
    /// Half-period translate of the one-variable Gaussian.
    Gplus1d,
    /// Periodic Gaussian family of two discrete variables.
    G2d,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a Gaussian family on the centered grid.
    Eval {
        #[arg(long, value_enum)]
        family: Family,
        /// Width parameter; accepts rationals like 4/3.
        #[arg(long)]
        kappa: Option<String>,
        /// Matrix entries a,b,c of sigma = \[\[a,b\],\[b,c\]\].
        #[arg(long)]
        sigma: Option<String>,
        /// Odd grid size.
        #[arg(long)]
        d: i64,
        /// Half-shift family for g2d: one of 00, +0, 0+, ++.
        #[arg(long, default_value = "00")]
        shift: String,
    },
    /// Apply the centered DFT to a grid read from a file.
    Dft {
        /// Input grid file (same formats the exporter writes).
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long)]
        rank: u8,
    },
    /// Tabulate the discrete Wigner function of a periodic Gaussian.
    Wigner {
        #[arg(long)]
        rank: u8,
        #[arg(long)]
        kappa: Option<String>,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        d: i64,
    },
    /// Run the identity verification suite.
    Verify {
        /// JSON sweep file overriding the default parameter sweep.
        #[arg(long, value_name = "PATH")]
        sweep: Option<PathBuf>,
        /// Emit one JSON object per check instead of text lines.
        #[arg(long)]
        json: bool,
    },
}

enum CliError {
    Io(String),
    Validation(String),
    VerifyFailed,
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Io(_) => EXIT_IO,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::VerifyFailed => EXIT_VERIFY,
        }
    }
}

impl From<pgauss::Error> for CliError {
    fn from(e: pgauss::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Parse arguments from the process environment and run.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_VALIDATION,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            match &e {
                CliError::Io(msg) | CliError::Validation(msg) => eprintln!("error: {msg}"),
                CliError::VerifyFailed => {}
            }
            e.code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let policy = match cli.tail {
        Some(eps) => TruncationPolicy::default().with_relative_tail(eps)?,
        None => TruncationPolicy::default(),
    };
    match cli.command {
        Command::Eval {
            family,
            kappa,
            sigma,
            d,
            shift,
        } => cmd_eval(
            family, kappa, sigma, d, &shift, cli.format, &cli.out, &policy,
        ),
        Command::Dft { input, rank } => cmd_dft(&input, rank, cli.format, &cli.out),
        Command::Wigner {
            rank,
            kappa,
            sigma,
            d,
        } => cmd_wigner(rank, kappa, sigma, d, cli.format, &cli.out, &policy),
        Command::Verify { sweep, json } => {
            cmd_verify(sweep.as_deref(), json, cli.tail, cli.seed, &cli.out)
        }
    }
}

/// Accepts decimals and exact rationals like 4/3.
pub fn parse_kappa(text: &str) -> Result<f64, String> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let p: i64 = num
            .trim()
            .parse()
            .map_err(|e| format!("bad rational numerator {num:?}: {e}"))?;
        let q: i64 = den
            .trim()
            .parse()
            .map_err(|e| format!("bad rational denominator {den:?}: {e}"))?;
        if q == 0 {
            return Err("rational denominator must be nonzero".into());
        }
        Ok(p as f64 / q as f64)
    } else {
        text.parse::<f64>()
            .map_err(|e| format!("bad kappa {text:?}: {e}"))
    }
}

/// Comma triple a,b,c.
pub fn parse_sigma(text: &str) -> Result<SigmaMatrix, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("sigma must be a,b,c (got {text:?})"));
    }
    let mut vals = [0.0; 3];
    for (slot, part) in vals.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("bad sigma entry {part:?}: {e}"))?;
    }
    SigmaMatrix::new(vals[0], vals[1], vals[2]).map_err(|e| e.to_string())
}

pub fn parse_shift(text: &str) -> Result<HalfShift, String> {
    match text {
        "00" => Ok(HalfShift::None),
        "+0" => Ok(HalfShift::FirstAxis),
        "0+" => Ok(HalfShift::SecondAxis),
        "++" => Ok(HalfShift::Both),
        _ => Err(format!(
            "shift must be one of 00, +0, 0+, ++ (got {text:?})"
        )),
    }
}

fn required_kappa(kappa: Option<String>) -> Result<Kappa, CliError> {
    let text = kappa.ok_or_else(|| CliError::Validation("--kappa is required".into()))?;
    let value = parse_kappa(&text).map_err(CliError::Validation)?;
    Ok(Kappa::new(value)?)
}

fn required_sigma(sigma: Option<String>) -> Result<SigmaMatrix, CliError> {
    let text = sigma.ok_or_else(|| CliError::Validation("--sigma is required".into()))?;
    parse_sigma(&text).map_err(CliError::Validation)
}

fn write_output(
    out: &Option<PathBuf>,
    emit: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), CliError> {
    let result = match out {
        Some(path) => fs::File::create(path)
            .and_then(|f| {
                let mut w = io::BufWriter::new(f);
                emit(&mut w)?;
                w.flush()
            })
            .map_err(|e| format!("{}: {e}", out.as_ref().unwrap().display())),
        None => {
            let stdout = io::stdout();
            let mut w = io::BufWriter::new(stdout.lock());
            emit(&mut w)
                .and_then(|()| w.flush())
                .map_err(|e| e.to_string())
        }
    };
    result.map_err(CliError::Io)
}

#[allow(clippy::too_many_arguments)]
fn cmd_eval(
    family: Family,
    kappa: Option<String>,
    sigma: Option<String>,
    d: i64,
    shift: &str,
    format: ExportFormat,
    out: &Option<PathBuf>,
    policy: &TruncationPolicy,
) -> Result<(), CliError> {
    let dim = Dimension::new(d)?;
    match family {
        Family::G1d | Family::Gplus1d => {
            let kappa = required_kappa(kappa)?;
            let mut values = Vec::with_capacity(dim.size());
            for n in dim.centered_indices() {
                let v = match family {
                    Family::G1d => discrete_gaussian_1d(kappa, dim, n, policy)?,
                    _ => discrete_gaussian_shifted_1d(kappa, dim, n, policy)?,
                };
                values.push(v);
            }
            let name = if matches!(family, Family::G1d) {
                "g1d"
            } else {
                "gplus1d"
            };
            match format {
                ExportFormat::Csv => {
                    write_output(out, |w| export::write_real_1d_csv(w, dim, &values))
                }
                ExportFormat::Json => {
                    let doc = export::envelope(
                        "eval",
                        d,
                        json!({"family": name, "kappa": kappa.value()}),
                        export::real_1d_json(dim, &values),
                    );
                    write_output(out, |w| writeln!(w, "{doc}"))
                }
            }
        }
        Family::G2d => {
            let sigma = required_sigma(sigma)?;
            let half_shift = parse_shift(shift).map_err(CliError::Validation)?;
            let mut values = Vec::with_capacity(dim.size() * dim.size());
            for n1 in dim.centered_indices() {
                for n2 in dim.centered_indices() {
                    values.push(discrete_gaussian_2d(
                        &sigma, dim, half_shift, n1, n2, policy,
                    )?);
                }
            }
            match format {
                ExportFormat::Csv => {
                    write_output(out, |w| export::write_real_2d_csv(w, dim, &values))
                }
                ExportFormat::Json => {
                    let doc = export::envelope(
                        "eval",
                        d,
                        json!({
                            "family": "g2d",
                            "sigma": [sigma.a(), sigma.b(), sigma.c()],
                            "shift": half_shift.label(),
                        }),
                        export::real_2d_json(dim, &values),
                    );
                    write_output(out, |w| writeln!(w, "{doc}"))
                }
            }
        }
    }
}

fn cmd_dft(
    input: &PathBuf,
    rank: u8,
    format: ExportFormat,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    let rank = match rank {
        1 => Rank::One,
        2 => Rank::Two,
        other => {
            return Err(CliError::Validation(format!(
                "rank must be 1 or 2, got {other}"
            )))
        }
    };
    let text =
        fs::read_to_string(input).map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
    let grid: GridFunction = match format {
        ExportFormat::Csv => export::parse_grid_csv(&text, rank),
        ExportFormat::Json => export::parse_grid_json(&text, rank),
    }
    .map_err(CliError::Validation)?;
    match rank {
        Rank::One => {
            let t = dft_1d(&grid)?;
            match format {
                ExportFormat::Csv => write_output(out, |w| export::write_complex_1d_csv(w, &t)),
                ExportFormat::Json => {
                    let doc = export::envelope(
                        "dft",
                        t.dim().d(),
                        json!({"rank": 1}),
                        export::complex_1d_json(&t),
                    );
                    write_output(out, |w| writeln!(w, "{doc}"))
                }
            }
        }
        Rank::Two => {
            let t = dft_2d(&grid)?;
            match format {
                ExportFormat::Csv => write_output(out, |w| export::write_complex_2d_csv(w, &t)),
                ExportFormat::Json => {
                    let doc = export::envelope(
                        "dft",
                        t.dim().d(),
                        json!({"rank": 2}),
                        export::complex_2d_json(&t),
                    );
                    write_output(out, |w| writeln!(w, "{doc}"))
                }
            }
        }
    }
}

fn cmd_wigner(
    rank: u8,
    kappa: Option<String>,
    sigma: Option<String>,
    d: i64,
    format: ExportFormat,
    out: &Option<PathBuf>,
    policy: &TruncationPolicy,
) -> Result<(), CliError> {
    let dim = Dimension::new(d)?;
    match rank {
        1 => {
            let kappa = required_kappa(kappa)?;
            let psi = tabulate_gaussian_1d(kappa, dim, policy)?;
            let w = wigner_discrete_1d(&psi)?;
            match format {
                ExportFormat::Csv => write_output(out, |o| export::write_wigner_1d_csv(o, &w)),
                ExportFormat::Json => {
                    let doc = export::envelope(
                        "wigner",
                        d,
                        json!({"rank": 1, "kappa": kappa.value()}),
                        export::wigner_1d_json(&w),
                    );
                    write_output(out, |o| writeln!(o, "{doc}"))
                }
            }
        }
        2 => {
            let sigma = required_sigma(sigma)?;
            let psi = tabulate_gaussian_2d(&sigma, dim, HalfShift::None, policy)?;
            let w = wigner_discrete_2d(&psi)?;
            match format {
                ExportFormat::Csv => write_output(out, |o| export::write_wigner_2d_csv(o, &w)),
                ExportFormat::Json => {
                    let doc = export::envelope(
                        "wigner",
                        d,
                        json!({"rank": 2, "sigma": [sigma.a(), sigma.b(), sigma.c()]}),
                        export::wigner_2d_json(&w),
                    );
                    write_output(out, |o| writeln!(o, "{doc}"))
                }
            }
        }
        other => Err(CliError::Validation(format!(
            "rank must be 1 or 2, got {other}"
        ))),
    }
}

fn cmd_verify(
    sweep_path: Option<&std::path::Path>,
    json: bool,
    tail: Option<f64>,
    seed: Option<u64>,
    out: &Option<PathBuf>,
) -> Result<(), CliError> {
    let mut sweep = match sweep_path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<SweepSpec>(&text)
                .map_err(|e| CliError::Validation(format!("malformed sweep file: {e}")))?
        }
        None => SweepSpec::default(),
    };
    if let Some(eps) = tail {
        sweep.relative_tail = eps;
    }
    if let Some(seed) = seed {
        sweep.seed = seed;
    }

    let checks = run_suite(&sweep);
    write_output(out, |w| {
        for check in &checks {
            if json {
                let line = serde_json::to_string(check).expect("checks serialize");
                writeln!(w, "{line}")?;
            } else {
                let status = if check.passed { "PASS" } else { "FAIL" };
                let detail = match &check.error {
                    Some(e) => format!(" error={e}"),
                    None => String::new(),
                };
                writeln!(
                    w,
                    "{status} {name} [{params}] residual={residual:.3e} tolerance={tol:.1e}{detail}",
                    name = check.name,
                    params = check.params,
                    residual = check.residual,
                    tol = check.tolerance,
                )?;
            }
        }
        Ok(())
    })?;
    if all_passed(&checks) {
        Ok(())
    } else {
        Err(CliError::VerifyFailed)
    }
}
