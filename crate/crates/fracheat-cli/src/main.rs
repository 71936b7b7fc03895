//! `fracheat` — command-line surface for the fractional heat operator
//! toolkit.
//!
//! Subcommands: `apply` (pointwise or spectral operator application to CSV
//! point lists), `verify` (machine-check suites writing JSON reports), and
//! `solve` (Picard solver for the forced integral equation).
//!
//! Exit codes: 0 success; 1 verification failure (report still written);
//! 2 configuration or parse error; 3 quadrature non-convergence or
//! iteration limit; 4 contraction precheck failure. Every failure prints a
//! machine-readable JSON diagnostic to stderr.

mod config;
mod suites;

use clap::{Parser, Subcommand, ValueEnum};
use config::RunConfig;
use fracheat::equivalence::{solve_integral_equation, Lattice, NonlinearSource, SourceKind};
use fracheat::field::parse_field;
use fracheat::greens::{ConvolveControls, GreensKernel};
use fracheat::grid::{SampledField, SpaceTimeGrid};
use fracheat::quadrature::apply_batch;
use fracheat::report::write_point_csv;
use fracheat::symbol::Side;
use fracheat::{Error, Result};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "fracheat", version, about = "Fully fractional heat operator toolkit")]
struct Cli {
    /// worker threads (overrides FRACHEAT_THREADS; default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Quad,
    Spectral,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Pure,
    Contraction,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the operator on a field at points from a CSV file
    Apply {
        #[arg(long, value_enum)]
        method: Method,
        /// field spec, e.g. 'coswave(xi=1,rho=0)'
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// CSV with columns x1..xn,t (header optional)
        #[arg(long)]
        points: PathBuf,
        #[arg(long, value_enum, default_value = "left")]
        side: SideArg,
        /// output CSV path (columns x1..xn,t,value)
        #[arg(long)]
        out: PathBuf,
        /// periodic box extent for the spectral method
        #[arg(long, default_value_t = 20.0)]
        grid_l: f64,
        /// grid points per axis for the spectral method
        #[arg(long, default_value_t = 128)]
        grid_n: usize,
    },
    /// Run a verification suite and write its JSON report
    Verify {
        #[arg(long)]
        suite: String,
        /// JSON run configuration (schema-checked; unknown keys rejected)
        #[arg(long)]
        config: Option<PathBuf>,
        /// report output path
        #[arg(long)]
        report: PathBuf,
    },
    /// Solve the forced integral equation by Picard iteration
    Solve {
        /// forcing spec, e.g. 'bump(r1=1,r2=2,t1=1,t2=4,scale=-1)'
        #[arg(long)]
        rhs: String,
        #[arg(long, value_enum, default_value = "pure")]
        kind: KindArg,
        #[arg(long, default_value_t = 0.2)]
        kappa: f64,
        /// truncation radius R (support in B_R x (-R^2, R^2))
        #[arg(long, default_value_t = 2.0)]
        radius: f64,
        #[arg(long, default_value_t = 0.5)]
        s: f64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 17)]
        nx: usize,
        #[arg(long, default_value_t = 25)]
        nt: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
        /// solution CSV path
        #[arg(long)]
        out: PathBuf,
        /// iteration-trace JSON path
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    init_threads(cli.threads);
    let code = match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            let kind = match &e {
                Error::DidNotConverge { .. } => "did_not_converge",
                Error::MaxIterExceeded { .. } => "max_iter_exceeded",
                Error::NotContracting { .. } => "not_contracting",
                Error::FieldParse { .. } => "field_parse",
                Error::IncommensurateFrequency(_) => "incommensurate_frequency",
                Error::InsufficientDynamicRange(_) => "insufficient_dynamic_range",
                _ => "config",
            };
            eprintln!(
                "{}",
                serde_json::json!({ "error": kind, "detail": e.to_string() })
            );
            match e {
                Error::DidNotConverge { .. } | Error::MaxIterExceeded { .. } => 3,
                Error::NotContracting { .. } => 4,
                _ => 2,
            }
        }
    };
    std::process::exit(code);
}

fn init_threads(flag: Option<usize>) {
    let count = flag.or_else(|| {
        std::env::var("FRACHEAT_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(c) = count {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(c).build_global();
    }
}

fn run(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Apply { method, field, s, n, points, side, out, grid_l, grid_n } => {
            let field = parse_field::<f64>(&field)?;
            let order = fracheat::FracOrder64::new(s)?;
            let pts = read_points(&points, n)?;
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let values: Vec<f64> = match method {
                Method::Quad => {
                    let params = fracheat::OperatorParams64::new(n, order);
                    let results = apply_batch(&field, &pts, &params, side);
                    results
                        .into_iter()
                        .collect::<Result<Vec<_>>>()?
                        .into_iter()
                        .map(|r| r.value)
                        .collect()
                }
                Method::Spectral => {
                    let grid = SpaceTimeGrid::new(n, grid_l, grid_l, grid_n, grid_n)?;
                    let sampled = SampledField::sample(grid, &field);
                    let mut hat = fracheat::spectral::forward(&sampled);
                    fracheat::spectral::multiply(&mut hat, order, side);
                    pts.iter()
                        .map(|(x, t)| fracheat::spectral::eval_series(&hat, x, *t).re)
                        .collect()
                }
            };
            let rows: Vec<(Vec<f64>, f64, f64)> = pts
                .into_iter()
                .zip(values)
                .map(|((x, t), v)| (x, t, v))
                .collect();
            let mut file = std::fs::File::create(&out)?;
            write_point_csv(&mut file, n, &rows)?;
            Ok(0)
        }
        Cmd::Verify { suite, config, report } => {
            let cfg = match config {
                Some(path) => RunConfig::from_path(&path)?,
                None => RunConfig::default(),
            };
            let rep = suites::run_suite(&suite, &cfg)?;
            std::fs::write(&report, rep.to_json())?;
            if rep.pass {
                Ok(0)
            } else {
                eprintln!(
                    "{}",
                    serde_json::json!({
                        "error": "verification_failed",
                        "detail": format!("suite `{}` has failing checks", rep.suite),
                    })
                );
                Ok(1)
            }
        }
        Cmd::Solve { rhs, kind, kappa, radius, s, n, nx, nt, tol, max_iter, out, trace } => {
            let forcing = parse_field::<f64>(&rhs)?;
            let order = fracheat::FracOrder64::new(s)?;
            let kernel = GreensKernel::new(n, order)?;
            let kind = match kind {
                KindArg::Pure => SourceKind::PureForcing,
                KindArg::Contraction => SourceKind::Contraction { kappa },
            };
            let src = NonlinearSource::new(forcing, kind, radius)?;
            let lattice = Lattice::new(n, radius, radius * radius, nx, nt)?;
            let state = solve_integral_equation(
                &src,
                &kernel,
                lattice,
                tol,
                max_iter,
                &ConvolveControls::default(),
            )?;
            let rows: Vec<(Vec<f64>, f64, f64)> = (0..lattice.len())
                .map(|i| {
                    let (x, t) = lattice.position(i);
                    (x, t, state.values[i])
                })
                .collect();
            let mut file = std::fs::File::create(&out)?;
            write_point_csv(&mut file, n, &rows)?;
            if let Some(tpath) = trace {
                let trace_json = serde_json::json!({
                    "iterations": state.iterations,
                    "diff_norms": state.diff_norms,
                    "contraction_constant": state.contraction_constant,
                });
                std::fs::write(&tpath, serde_json::to_string_pretty(&trace_json).unwrap())?;
            }
            Ok(0)
        }
    }
}

/// Read `x1..xn,t` rows; a non-numeric first line is treated as a header.
fn read_points(path: &PathBuf, n: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read points {}: {e}", path.display())))?;
    let mut pts = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> =
            cols.iter().map(|c| c.parse::<f64>()).collect();
        match parsed {
            Err(_) if idx == 0 => continue, // header
            Err(_) => {
                return Err(Error::FieldParse {
                    token: line.to_string(),
                    reason: format!("line {} is not numeric", idx + 1),
                })
            }
            Ok(nums) => {
                if nums.len() != n + 1 {
                    return Err(Error::InvalidParameter(format!(
                        "line {} has {} columns, expected {} (x1..x{n},t)",
                        idx + 1,
                        nums.len(),
                        n + 1
                    )));
                }
                let (x, t) = nums.split_at(n);
                pts.push((x.to_vec(), t[0]));
            }
        }
    }
    if pts.is_empty() {
        return Err(Error::InvalidParameter("points file contains no rows".into()));
    }
    Ok(pts)
}
