//! `massjump`: point-interaction boundary matrices, scattering, ring spectra
//! and regularization studies from the command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure.

mod output;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use massjump::circle::{circle_spectrum, degeneracy_report, zeeman_levels, CircleSpec, DegeneracyReport};
use massjump::extensions::{
    boundary_matrix, flux_to_x3, mass_ratio_to_x2, x2_to_mass_ratio, x3_to_flux, Branch, ExtensionKind, FluxParam,
    MassRatio,
};
use massjump::regularized::convergence_study;
use massjump::scattering::{
    analyze_transmission, filter_chain, k_grid, transmission_curve, DefectChain, FilterPairing, TransmissionPoint,
};
use num_complex::Complex64;
use serde::Serialize;

use output::Table;

#[derive(Parser, Debug)]
#[command(name = "massjump", version, about = "Singular point interactions: matrices, scattering, ring spectra")]
struct RunConfig {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Output file (written atomically); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; curves default to csv, reports to json.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    X1,
    X2,
    X3,
    X4,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PairingArg {
    Equal,
    Inverse,
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s} is not a finite number"))
    }
}

/// Selects one extension by its parameter or by a physical parameter.
#[derive(Args, Debug)]
struct KindArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Extension parameter X1..X4.
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    param: Option<f64>,
    /// Mass ratio (x2 only).
    #[arg(long, value_parser = finite)]
    mu: Option<f64>,
    /// Flux in flux quanta (x3 only).
    #[arg(long, value_parser = finite, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Sign branch of X2 for a given mass ratio.
    #[arg(long, value_enum, default_value = "plus")]
    branch: BranchArg,
}

impl KindArgs {
    fn resolve(&self) -> massjump::Result<ExtensionKind> {
        let invalid = |msg: &str| Err(massjump::Error::InvalidInput(msg.to_string()));
        let kind = match (self.kind, self.param, self.mu, self.gamma) {
            (KindArg::X1, Some(p), None, None) => ExtensionKind::X1(p),
            (KindArg::X4, Some(p), None, None) => ExtensionKind::X4(p),
            (KindArg::X2, Some(p), None, None) => ExtensionKind::X2(p),
            (KindArg::X2, None, Some(mu), None) => {
                let branch = match self.branch {
                    BranchArg::Plus => Branch::Plus,
                    BranchArg::Minus => Branch::Minus,
                };
                ExtensionKind::X2(mass_ratio_to_x2(MassRatio::new(mu)?, branch))
            }
            (KindArg::X3, Some(p), None, None) => ExtensionKind::X3(p),
            (KindArg::X3, None, None, Some(g)) => ExtensionKind::X3(flux_to_x3(FluxParam::new(g)?)?),
            (KindArg::X1 | KindArg::X4, ..) => return invalid("x1 and x4 take --param only"),
            (KindArg::X2, ..) => return invalid("x2 takes exactly one of --param or --mu"),
            (KindArg::X3, ..) => return invalid("x3 takes exactly one of --param or --gamma"),
        };
        kind.validate()?;
        Ok(kind)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Boundary matrix of one extension.
    #[command(allow_negative_numbers = true)]
    Bc {
        #[command(flatten)]
        kind: KindArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Transmission curve of a defect chain read from a JSON file.
    #[command(allow_negative_numbers = true)]
    Scatter {
        /// JSON array of {position, kind, param} or {position, kind: "x2", mu}.
        #[arg(long)]
        chain: PathBuf,
        #[arg(long, value_parser = finite)]
        kmin: f64,
        #[arg(long, value_parser = finite)]
        kmax: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Two mass-jump defects forming a resonant filter.
    Filter {
        #[arg(long, value_parser = finite)]
        mu: f64,
        #[arg(long, value_parser = finite, default_value_t = 5.0)]
        spacing: f64,
        #[arg(long, value_parser = finite, default_value_t = 0.1)]
        kmin: f64,
        #[arg(long, value_parser = finite, default_value_t = 5.0)]
        kmax: f64,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// Second defect with the same mass ratio, or its inverse.
        #[arg(long, value_enum, default_value = "equal")]
        pairing: PairingArg,
        #[command(flatten)]
        common: Common,
    },
    /// Positive-energy spectrum of a ring with one defect.
    #[command(allow_negative_numbers = true)]
    Circle {
        #[command(flatten)]
        kind: KindArgs,
        /// Ring circumference.
        #[arg(long = "L", alias = "circumference", value_parser = finite, default_value_t = 2.0)]
        circumference: f64,
        #[arg(long, value_parser = finite)]
        kmax: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Boundary matrix of the width-ε operator as ε shrinks.
    #[command(allow_negative_numbers = true)]
    Regularize {
        #[arg(long, value_parser = finite, default_value_t = 0.0)]
        x2: f64,
        #[arg(long, value_parser = finite, default_value_t = 0.0)]
        x4: f64,
        /// Descending, comma-separated widths.
        #[arg(long, value_parser = finite, value_delimiter = ',', default_value = "0.2,0.1,0.05,0.025")]
        eps: Vec<f64>,
        #[arg(long, value_parser = finite, default_value_t = 1.0)]
        k: f64,
        /// Half-width of the propagation window.
        #[arg(long = "half-width", value_parser = finite, default_value_t = 2.0)]
        half_width: f64,
        #[arg(long, value_parser = finite, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Flux splitting of ring levels ±m.
    #[command(allow_negative_numbers = true)]
    Splitting {
        #[arg(long, value_parser = finite)]
        gamma: f64,
        #[arg(long, default_value_t = 10)]
        mmax: i64,
        #[arg(long = "L", alias = "circumference", value_parser = finite, default_value_t = 2.0 * PI)]
        circumference: f64,
        #[command(flatten)]
        common: Common,
    },
}

enum CliError {
    Lib(massjump::Error),
    Io(std::io::Error),
    Json(serde_json::Error),
}

impl From<massjump::Error> for CliError {
    fn from(e: massjump::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_input_error() => 2,
            CliError::Lib(_) => 3,
            // Unreadable chain files and unwritable output paths are bad input.
            CliError::Io(_) => 2,
            CliError::Json(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Io(e) => format!("i/o: {e}"),
            CliError::Json(e) => format!("serialization: {e}"),
        }
    }
}

#[derive(Serialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

impl From<Complex64> for ComplexJson {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
struct BcReport {
    kind: &'static str,
    param: f64,
    /// Row-major real and imaginary parts.
    re: [[f64; 2]; 2],
    im: [[f64; 2]; 2],
    det: ComplexJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
}

fn cmd_bc(kind: &KindArgs, format: Format) -> Result<String, CliError> {
    let ext = kind.resolve()?;
    let bc = boundary_matrix(ext)?;
    let m = bc.matrix();
    let (mu, gamma) = match ext {
        // Beyond |X2| = 2 the matrix carries an extra π-phase and has no mass ratio.
        ExtensionKind::X2(x2) => (x2_to_mass_ratio(x2).ok().map(|m| m.value()), None),
        ExtensionKind::X3(x3) => (None, Some(x3_to_flux(x3)?.value())),
        _ => (None, None),
    };
    let report = BcReport {
        kind: ext.label(),
        param: ext.param(),
        re: [[m.a11.re, m.a12.re], [m.a21.re, m.a22.re]],
        im: [[m.a11.im, m.a12.im], [m.a21.im, m.a22.im]],
        det: bc.det().into(),
        mu,
        gamma,
    };
    Ok(match format {
        Format::Json => output::json(&report)?,
        Format::Csv => {
            let mut t = Table::new(&["entry", "re", "im"]);
            for (name, z) in [("m11", m.a11), ("m12", m.a12), ("m21", m.a21), ("m22", m.a22), ("det", bc.det())] {
                t.push(vec![name.into(), z.re.into(), z.im.into()]);
            }
            t.footer(&report)?;
            t.render()
        }
    })
}

#[derive(Serialize)]
struct CurveJson<'a, R: Serialize> {
    rows: &'a [TransmissionPoint],
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<R>,
}

fn transmission_table<R: Serialize>(
    rows: &[TransmissionPoint],
    report: Option<R>,
    format: Format,
) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => output::json(&CurveJson { rows, report })?,
        Format::Csv => {
            let mut t = Table::new(&["k", "T", "R", "phase_t"]);
            for p in rows {
                t.push(vec![p.k.into(), p.transmission.into(), p.reflection.into(), p.phase_t.into()]);
            }
            if let Some(r) = &report {
                t.footer(r)?;
            }
            t.render()
        }
    })
}

fn cmd_scatter(chain: &PathBuf, kmin: f64, kmax: f64, samples: usize, format: Format) -> Result<String, CliError> {
    let text = std::fs::read_to_string(chain)?;
    let chain = DefectChain::from_json(&text)?;
    let rows = transmission_curve(&chain, &k_grid(kmin, kmax, samples)?)?;
    transmission_table::<()>(&rows, None, format)
}

fn cmd_filter(
    mu: f64,
    spacing: f64,
    (kmin, kmax, samples): (f64, f64, usize),
    pairing: PairingArg,
    format: Format,
) -> Result<String, CliError> {
    let pairing = match pairing {
        PairingArg::Equal => FilterPairing::Equal,
        PairingArg::Inverse => FilterPairing::Inverse,
    };
    let chain = filter_chain(MassRatio::new(mu)?, spacing, pairing)?;
    let grid = k_grid(kmin, kmax, samples)?;
    let rows = transmission_curve(&chain, &grid)?;
    let report = analyze_transmission(&chain, &grid)?;
    transmission_table(&rows, Some(report), format)
}

#[derive(Serialize)]
struct CircleJson {
    spectrum: massjump::circle::SpectrumResult,
    degeneracy: DegeneracyReport,
}

fn cmd_circle(kind: &KindArgs, circumference: f64, kmax: f64, format: Format) -> Result<String, CliError> {
    let spec = CircleSpec::new(circumference, boundary_matrix(kind.resolve()?)?)?;
    let spectrum = circle_spectrum(&spec, kmax)?;
    let degeneracy = degeneracy_report(&spectrum, DegeneracyReport::default_tol(circumference))?;
    Ok(match format {
        Format::Json => output::json(&CircleJson { spectrum, degeneracy })?,
        Format::Csv => {
            let mut t = Table::new(&["k", "E", "multiplicity", "branch"]);
            for r in &spectrum.roots {
                t.push(vec![r.k.into(), r.energy.into(), i64::from(r.multiplicity).into(), r.branch.as_str().into()]);
            }
            t.footer(&degeneracy)?;
            t.render()
        }
    })
}

fn cmd_regularize(
    (x2, x4): (f64, f64),
    eps: &[f64],
    k: f64,
    half_width: f64,
    tol: f64,
    format: Format,
) -> Result<String, CliError> {
    let report = convergence_study(x2, x4, eps, k, half_width, tol)?;
    Ok(match format {
        Format::Json => output::json(&report)?,
        Format::Csv => {
            let mut t = Table::new(&["eps", "error", "det", "m11", "m12", "m21", "m22"]);
            for i in 0..report.eps_values.len() {
                let m = report.matrices[i];
                t.push(vec![
                    report.eps_values[i].into(),
                    report.errors[i].into(),
                    report.determinants[i].into(),
                    m[0][0].into(),
                    m[0][1].into(),
                    m[1][0].into(),
                    m[1][1].into(),
                ]);
            }
            t.footer(&report)?;
            t.render()
        }
    })
}

fn cmd_splitting(gamma: f64, mmax: i64, circumference: f64, format: Format) -> Result<String, CliError> {
    let levels = zeeman_levels(FluxParam::new(gamma)?, mmax, circumference)?;
    Ok(match format {
        Format::Json => output::json(&levels)?,
        Format::Csv => {
            let mut t = Table::new(&["m", "E_minus", "E_plus", "splitting"]);
            for l in &levels {
                t.push(vec![l.m.into(), l.e_minus.into(), l.e_plus.into(), l.splitting.into()]);
            }
            t.render()
        }
    })
}

fn run(command: Command) -> Result<(), CliError> {
    let (content, out) = match command {
        Command::Bc { kind, common } => (cmd_bc(&kind, common.format.unwrap_or(Format::Json))?, common.out),
        Command::Scatter { chain, kmin, kmax, samples, common } => {
            (cmd_scatter(&chain, kmin, kmax, samples, common.format.unwrap_or(Format::Csv))?, common.out)
        }
        Command::Filter { mu, spacing, kmin, kmax, samples, pairing, common } => {
            (cmd_filter(mu, spacing, (kmin, kmax, samples), pairing, common.format.unwrap_or(Format::Csv))?, common.out)
        }
        Command::Circle { kind, circumference, kmax, common } => {
            (cmd_circle(&kind, circumference, kmax, common.format.unwrap_or(Format::Csv))?, common.out)
        }
        Command::Regularize { x2, x4, eps, k, half_width, tol, common } => {
            (cmd_regularize((x2, x4), &eps, k, half_width, tol, common.format.unwrap_or(Format::Json))?, common.out)
        }
        Command::Splitting { gamma, mmax, circumference, common } => {
            (cmd_splitting(gamma, mmax, circumference, common.format.unwrap_or(Format::Csv))?, common.out)
        }
    };
    output::emit(&content, out.as_deref())?;
    Ok(())
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match run(config.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
