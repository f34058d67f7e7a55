use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use logpair::numerics::cone::{gauss_bonnet_defect, solve_radial_cone, ConeError};
use logpair::numerics::model::{default_radii, lelong_estimate_at, LelongPoint, ModelMetricSpec};
use logpair::positivity::Property;
use logpair::rational::{parse_rational, Rational};
use logpair_cli::pairfile::load;
use logpair_cli::report::{self, Report};
use logpair_cli::bundled;
use rayon::prelude::*;

/// Positivity, classification and edge-cone invariants of logarithmic
/// surface pairs given as lattice data.
#[derive(Parser)]
#[command(name = "logpair", version)]
struct Cli {
    /// Emit the canonical JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full classification: D-minimality, semi-stability, log-general type,
    /// nef/ample near one, thresholds and obstructions.
    Classify {
        /// Pair files (or names of bundled examples).
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Classify every input in parallel, one JSON report per input.
        #[arg(long, requires = "out_dir")]
        batch: bool,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Nef and/or ample threshold of K + αD.
    Threshold {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::Both)]
        property: Which,
    },
    /// Log Chern numbers, the BMY inequality and the edge-invariant table.
    Bmy { input: PathBuf },
    /// χ_α, σ_α and 𝓛_α² at the given α (default 1/2, 3/4, 9/10, 1).
    EdgeInvariants {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = rational_arg)]
        alpha: Vec<Rational>,
    },
    /// Least admissible adjoint K + (n−2)𝓛 and its Reider obstructions.
    Reider {
        input: PathBuf,
        #[arg(long, default_value_t = logpair::classifier::DEFAULT_N_MAX)]
        n_max: u32,
    },
    /// Radial curvature −1 cone metric solve against the closed form.
    ConeSolve {
        #[arg(long, value_parser = open_unit)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5, value_parser = open_unit)]
        radius: f64,
        #[arg(long, default_value_t = 2000)]
        grid: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Write rho,phi,K rows to this CSV file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Lelong-number densities ν(r) of the model edge form and their decay rate.
    Lelong {
        #[arg(long, value_parser = open_unit)]
        alpha: f64,
        /// Decreasing radii in (0, 1), comma separated (default 10⁻¹ … 10⁻⁴).
        #[arg(long, value_delimiter = ',')]
        radii: Vec<f64>,
        /// Evaluate at distance δ from the divisor instead of on it.
        #[arg(long)]
        off_divisor: Option<f64>,
        #[arg(long, default_value_t = 64)]
        quadrature_points: usize,
        /// Write r,nu rows to this CSV file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// List bundled example pairs, print one, or write them all to a directory.
    Examples {
        name: Option<String>,
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Nef,
    Ample,
    Both,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn open_unit(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x < 1.0 {
        Ok(x)
    } else {
        Err(format!("{x} is not in (0, 1)"))
    }
}

/// Exit codes: 2 for bad input (schema, validation, inconsistent catalog),
/// 3 for numerical failure.
enum Failure {
    Input(anyhow::Error),
    Numerics(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Numerics(_) => 3,
        }
    }
}

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

fn emit(report: &Report, json: bool) {
    if json {
        print!("{}", report.canonical_json());
    } else {
        print!("{}", report.text);
    }
}

fn classify_one(path: &Path) -> Result<Report, Failure> {
    let (pair, validation) = load(path).map_err(input)?;
    report::classify_report(&pair, &validation).map_err(input)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let json = cli.json;
    match cli.command {
        Command::Classify { inputs, batch, out_dir } => {
            if !batch {
                if inputs.len() != 1 {
                    return Err(input(anyhow!("several inputs need --batch --out-dir DIR")));
                }
                emit(&classify_one(&inputs[0])?, json);
                return Ok(());
            }
            let dir = out_dir.expect("clap enforces --out-dir");
            std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display())).map_err(input)?;
            let outcomes: Vec<(PathBuf, Result<(), Failure>)> = inputs
                .par_iter()
                .map(|p| {
                    let result = classify_one(p).and_then(|r| {
                        let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                        let target = dir.join(format!("{stem}.json"));
                        std::fs::write(&target, r.canonical_json())
                            .with_context(|| format!("writing {}", target.display()))
                            .map_err(input)
                    });
                    (p.clone(), result)
                })
                .collect();
            let mut worst: Option<Failure> = None;
            for (p, r) in outcomes {
                match r {
                    Ok(()) => println!("{}: ok", p.display()),
                    Err(f) => {
                        let msg = match &f {
                            Failure::Input(e) | Failure::Numerics(e) => format!("{e:#}"),
                        };
                        println!("{}: error: {msg}", p.display());
                        if worst.as_ref().is_none_or(|w| f.code() > w.code()) {
                            worst = Some(f);
                        }
                    }
                }
            }
            worst.map_or(Ok(()), Err)
        }
        Command::Threshold { input: path, property } => {
            let (pair, _) = load(&path).map_err(input)?;
            let props = match property {
                Which::Nef => vec![Property::Nef],
                Which::Ample => vec![Property::Ample],
                Which::Both => vec![Property::Nef, Property::Ample],
            };
            emit(&report::threshold_report(&pair, &props), json);
            Ok(())
        }
        Command::Bmy { input: path } => {
            let (pair, _) = load(&path).map_err(input)?;
            emit(&report::bmy_report(&pair).map_err(input)?, json);
            Ok(())
        }
        Command::EdgeInvariants { input: path, alpha } => {
            let (pair, _) = load(&path).map_err(input)?;
            let alphas = if alpha.is_empty() { report::default_alpha_grid() } else { alpha };
            emit(&report::edge_report(&pair, &alphas).map_err(input)?, json);
            Ok(())
        }
        Command::Reider { input: path, n_max } => {
            let (pair, _) = load(&path).map_err(input)?;
            emit(&report::reider_report(&pair, n_max).map_err(input)?, json);
            Ok(())
        }
        Command::ConeSolve { alpha, radius, grid, tol, dump } => {
            let (result, failure) = match solve_radial_cone(alpha, radius, grid, tol) {
                Ok(r) => (r, None),
                Err(ConeError::ResidualAboveTolerance { result, tol }) => {
                    let msg = anyhow!("curvature residual {:e} exceeds tolerance {tol:e}", result.curvature_residual);
                    (*result, Some(Failure::Numerics(msg)))
                }
                Err(e @ ConeError::NotConverged { .. }) => return Err(Failure::Numerics(e.into())),
                Err(e) => return Err(input(e)),
            };
            // ε = 0 snaps to the first grid point, the discrete ε → 0 limit
            let gb: Vec<_> = [1e-2, 1e-3, 1e-4, 0.0].iter().map(|&eps| gauss_bonnet_defect(&result, eps)).collect();
            emit(&report::cone_report(&result, &gb), json);
            if let Some(path) = dump {
                std::fs::write(&path, result.to_csv())
                    .with_context(|| format!("writing {}", path.display()))
                    .map_err(input)?;
            }
            failure.map_or(Ok(()), Err)
        }
        Command::Lelong { alpha, radii, off_divisor, quadrature_points, dump } => {
            let radii = if radii.is_empty() { default_radii() } else { radii };
            let spec = ModelMetricSpec { alpha, dimension: 2, quadrature_points };
            let point = off_divisor.map_or(LelongPoint::OnDivisor, |distance| LelongPoint::OffDivisor { distance });
            let est = lelong_estimate_at(&spec, &radii, point).map_err(input)?;
            emit(&report::lelong_report(&est), json);
            if let Some(path) = dump {
                std::fs::write(&path, report::lelong_csv(&est))
                    .with_context(|| format!("writing {}", path.display()))
                    .map_err(input)?;
            }
            Ok(())
        }
        Command::Examples { name, write } => {
            if let Some(dir) = write {
                std::fs::create_dir_all(&dir).map_err(input)?;
                for (n, text) in bundled::BUNDLED {
                    std::fs::write(dir.join(format!("{n}.json")), text).map_err(input)?;
                }
                return Ok(());
            }
            match name {
                None => bundled::names().for_each(|n| println!("{n}")),
                Some(n) => print!("{}", bundled::get(&n).ok_or_else(|| input(anyhow!("no bundled example {n:?}")))?),
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let code = f.code();
            let (Failure::Input(e) | Failure::Numerics(e)) = f;
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
