//! Command-line front end: `run`, `sweep`, `oracle` and `check`.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::config::{parse_config, RunConfig};
use crate::error::{Error, Result};
use crate::grid::{make_grid, Preset};
use crate::io;
use crate::oracle::{integrate_interface, limit_profile, residual_self_test, SpheroidParams};
use crate::solver::run;
use crate::sweep::run_sweep_keeping;

#[derive(Debug, Parser)]
#[command(name = "hele-shaw", about = "Two-species pressure-driven tissue model in 1D")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one simulation and write snapshots plus diagnostics.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the epsilon ladder given by the config's `epsilons` key.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the limiting spheroid interface and sample its profile.
    Oracle {
        #[arg(long)]
        g1: f64,
        #[arg(long)]
        g2: f64,
        #[arg(long)]
        p1: f64,
        #[arg(long)]
        p2: f64,
        #[arg(long = "L")]
        half_length: f64,
        #[arg(long)]
        r0: f64,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Cells of the grid the profiles are sampled on.
        #[arg(long, default_value_t = 400)]
        cells: usize,
        #[arg(long, default_value = "oracle_out")]
        out: PathBuf,
    },
    /// Validate the hypotheses of a config and self-test the oracle.
    Check {
        /// Defaults to the two-block preset with GRfig growth at epsilon = 1.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Entry point shared by the binary and the tests. `argv[0]` is the program
/// name. Returns the process exit status.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Run { config, out } => cmd_run(&config, out.as_deref()),
        Command::Sweep { config, out } => cmd_sweep(&config, out.as_deref()),
        Command::Oracle {
            g1,
            g2,
            p1,
            p2,
            half_length,
            r0,
            tmax,
            dt,
            cells,
            out,
        } => SpheroidParams::new(g1, g2, p1, p2, half_length, r0)
            .and_then(|params| cmd_oracle(&params, tmax, dt, cells, &out)),
        Command::Check { config } => cmd_check(config.as_deref()),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            1
        }
    }
}

fn load(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path)?;
    parse_config(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn cmd_run(config_path: &Path, out: Option<&Path>) -> Result<i32> {
    let config = load(config_path)?;
    let dir = out.map(Path::to_path_buf).unwrap_or(config.output_dir.clone());
    let traj = run(&config.sim_config())
        .map_err(|e| Error::Config(format!("run at epsilon = {} failed: {e}", config.epsilon)))?;
    let written = io::write_trajectory(&traj, &dir)?;
    println!(
        "{} steps, {} snapshots in {}",
        traj.report.steps,
        written.snapshots.len(),
        dir.display()
    );
    Ok(0)
}

fn cmd_sweep(config_path: &Path, out: Option<&Path>) -> Result<i32> {
    let config = load(config_path)?;
    let dir = out.map(Path::to_path_buf).unwrap_or(config.output_dir.clone());
    fs::create_dir_all(&dir)?;
    let (result, trajectories) = run_sweep_keeping(&config.sweep_config());
    for traj in &trajectories {
        io::write_trajectory(traj, &dir.join(io::rung_dir_name(traj.epsilon)))?;
    }
    let result = match result {
        Ok(r) => r,
        Err(Error::SweepAborted {
            epsilon,
            source,
            partial,
        }) => {
            write_sweep_files(&partial, &dir)?;
            return Err(Error::SweepAborted {
                epsilon,
                source,
                partial,
            });
        }
        Err(e) => return Err(e),
    };
    write_sweep_files(&result, &dir)?;
    for row in crate::sweep::convergence_table(&result) {
        println!(
            "eps = {:<8} M = {:<5} comp L1 = {}",
            row.epsilon,
            row.num_cells,
            row.complementary_residual_l1
                .map_or_else(|| "-".to_string(), |v| format!("{v:.4e}"))
        );
    }
    Ok(0)
}

fn write_sweep_files(result: &crate::sweep::SweepResult, dir: &Path) -> Result<()> {
    fs::write(dir.join("sweep_report.csv"), io::format_sweep_report(result))?;
    fs::write(dir.join("sweep_timing.csv"), io::format_sweep_timing(result))?;
    for (i, rec) in result.records.iter().enumerate() {
        let sub = dir.join(io::rung_dir_name(rec.epsilon));
        fs::create_dir_all(&sub)?;
        fs::write(sub.join("probes.csv"), io::format_probes(result, i))?;
    }
    Ok(())
}

fn cmd_oracle(params: &SpheroidParams, tmax: f64, dt: f64, cells: usize, dir: &Path) -> Result<i32> {
    let traj = integrate_interface(params, tmax, dt)?;
    fs::create_dir_all(dir)?;
    fs::write(dir.join("interface.csv"), io::format_interface_series(&traj))?;
    let grid = make_grid(params.half_length, cells)?;
    let first = limit_profile(params, &grid)?;
    fs::write(
        dir.join("profile_initial.csv"),
        io::format_limit_profile(grid.centers(), &first),
    )?;
    let last = limit_profile(&params.with_radius(traj.final_radius()), &grid)?;
    fs::write(
        dir.join("profile_final.csv"),
        io::format_limit_profile(grid.centers(), &last),
    )?;
    let (t_end, _) = traj.samples.last().copied().unwrap_or((0.0, params.radius));
    println!("R1(0) = {}, R1({t_end}) = {}", params.radius, traj.final_radius());
    if let Some(reason) = traj.halted {
        println!("stopped early: {reason:?}");
    }
    Ok(0)
}

fn cmd_check(config_path: Option<&Path>) -> Result<i32> {
    let config = match config_path {
        Some(path) => load(path)?,
        None => parse_config("preset = twoblock\nepsilon = 1\ngrowth = GRfig\n")?,
    };
    let report = config.hypotheses()?;
    println!("{report}");
    let g = &config.growth;
    let radius = match config.preset {
        Preset::Spheroid => config.oracle_radius,
        Preset::TwoBlock => Preset::SPHEROID_RADIUS,
    };
    let params = SpheroidParams::new(
        g.species1.gain,
        g.species2.gain,
        g.species1.homeostatic_pressure,
        g.species2.homeostatic_pressure,
        config.half_length,
        radius,
    )?;
    let check = residual_self_test(&params, 1e-2)?;
    let residual_ok = (3.5..=4.5).contains(&check.ratio)
        && check.continuity_gap <= 1e-12
        && check.slope_gap <= 1e-12;
    println!(
        "oracle residual: h = 1e-2 -> {:.3e}, h/2 -> {:.3e}, ratio {:.3}, gaps {:.1e} / {:.1e} [{}]",
        check.coarse,
        check.fine,
        check.ratio,
        check.continuity_gap,
        check.slope_gap,
        if residual_ok { "ok" } else { "FAIL" }
    );
    Ok(if report.has_failures() || !residual_ok { 1 } else { 0 })
}
