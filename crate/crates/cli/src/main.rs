use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lfmaxwell::physics::{run_two_step, DerivedFields, Method};
use lfmaxwell::system::FrequencyPoint;
use lfmaxwell_cli::check::run_checks;
use lfmaxwell_cli::config::parse_methods;
use lfmaxwell_cli::converge::{convergence_study, write_converge_csv};
use lfmaxwell_cli::freqs::parse_frequencies;
use lfmaxwell_cli::sweep::{frequency_sweep, write_sweep_csv, Outcome, Quantity, SweepSpec};
use lfmaxwell_cli::vtk::{field_arrays, sample_grid, write_vtk};
use lfmaxwell_cli::{build_problem, load_config, CliError};

#[derive(Parser)]
#[command(name = "solver", version, about = "Low-frequency stable A-phi Maxwell solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Condition number, gauge residual and solve residual over frequency.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated Hz values; items may be `logspace:a:b:n`.
        #[arg(long, allow_hyphen_values = true)]
        freqs: String,
        /// Overrides the methods listed in the config.
        #[arg(long)]
        methods: Option<String>,
        /// Any of condition, delta_D, hcurl_error, solve_residual.
        #[arg(long)]
        quantities: Option<String>,
        /// Output CSV (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fill the wall_ms column (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// H(curl) error against the manufactured solution over mesh refinement.
    Converge {
        #[arg(long)]
        config: PathBuf,
        /// Cells per axis, comma-separated.
        #[arg(long)]
        subdivs: String,
        #[arg(long)]
        freq: f64,
        #[arg(long)]
        methods: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Single solve with diagnostics and optional VTK export.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        freq: f64,
        #[arg(long, default_value = "tree-cotree")]
        method: String,
        #[arg(long)]
        vtk: Option<PathBuf>,
        /// Sample cells per mesh cell and axis in the VTK grid.
        #[arg(long, default_value_t = 1)]
        samples: usize,
    },
    /// Structural and gauge invariants of a scenario.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn methods_arg(arg: Option<&str>, fallback: &[Method]) -> Result<Vec<Method>, CliError> {
    match arg {
        Some(s) => parse_methods(s).map_err(CliError::Config),
        None => Ok(fallback.to_vec()),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep {
            config,
            freqs,
            methods,
            quantities,
            out,
            timing,
        } => {
            let cfg = load_config(&config)?;
            let quantities = match quantities {
                Some(q) => q
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(str::parse)
                    .collect::<Result<Vec<Quantity>, _>>()
                    .map_err(CliError::Config)?,
                None => Quantity::DEFAULT.to_vec(),
            };
            let spec = SweepSpec {
                frequencies: parse_frequencies(&freqs).map_err(CliError::Config)?,
                methods: methods_arg(methods.as_deref(), &cfg.methods)?,
                quantities,
                timing,
            };
            let problem = build_problem(&cfg.scenario)?;
            let rows = frequency_sweep(&problem, &spec).map_err(|e| CliError::Config(e.to_string()))?;
            let mut w = output(out.as_deref())?;
            write_sweep_csv(&rows, &spec, &mut w)?;
            w.flush()?;
            if let Some(r) = rows
                .iter()
                .find(|r| r.outcome == Outcome::Singular && cfg.required.contains(&r.method))
            {
                return Err(CliError::Singular(format!("required method {} at {} Hz", r.method, r.f_hz)));
            }
            Ok(())
        }
        Command::Converge {
            config,
            subdivs,
            freq,
            methods,
            out,
        } => {
            let cfg = load_config(&config)?;
            let subdivs: Vec<usize> = subdivs
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| CliError::Config(format!("bad subdivision `{s}`"))))
                .collect::<Result<_, _>>()?;
            let methods = methods_arg(methods.as_deref(), &cfg.methods)?;
            let rows = convergence_study(&cfg, &subdivs, freq, &methods)?;
            let mut w = output(out.as_deref())?;
            write_converge_csv(&rows, &mut w)?;
            w.flush()?;
            if let Some(r) = rows
                .iter()
                .find(|r| r.hcurl_error.is_none() && cfg.required.contains(&r.method))
            {
                return Err(CliError::Singular(format!("required method {} at s_h = {}", r.method, r.s_h)));
            }
            Ok(())
        }
        Command::Solve {
            config,
            freq,
            method,
            vtk,
            samples,
        } => {
            let cfg = load_config(&config)?;
            let method: Method = method.parse().map_err(|e: lfmaxwell::Error| CliError::Config(e.to_string()))?;
            let freq = FrequencyPoint::new(freq).map_err(|e| CliError::Config(e.to_string()))?;
            let problem = build_problem(&cfg.scenario)?;
            let sol = match run_two_step(&problem, freq, method) {
                Ok(s) => s,
                Err(e) if e.is_singular() => {
                    let msg = format!("{method} at {} Hz: {e}", freq.f);
                    if cfg.required.contains(&method) {
                        return Err(CliError::Singular(msg));
                    }
                    println!("singular: {msg}");
                    return Ok(());
                }
                Err(e) => return Err(CliError::Config(e.to_string())),
            };
            let d = &sol.diagnostics;
            println!("method        {method}");
            println!("f_hz          {}", freq.f);
            println!("n_dofs        {}", d.n_dofs);
            println!("delta_D       {:e}", d.delta_d);
            println!("eqs_residual  {:e}", d.eqs_residual);
            println!("rel_residual  {:e}", d.rel_residual);
            println!("curl_residual {:e}", d.curl_residual);
            if let Some(path) = vtk {
                let fields = DerivedFields::new(&problem, &sol).map_err(|e| CliError::Config(e.to_string()))?;
                let grid = sample_grid(&problem.mesh, samples);
                let arrays = field_arrays(&grid, &fields).map_err(|e| CliError::Config(e.to_string()))?;
                let mut w = output(Some(&path))?;
                write_vtk(&grid, &arrays, &format!("{method} f={} Hz", freq.f), &mut w)?;
                w.flush()?;
                println!("vtk           {}", path.display());
            }
            Ok(())
        }
        Command::Check { config } => {
            let cfg = load_config(&config)?;
            let problem = build_problem(&cfg.scenario)?;
            let results = run_checks(&problem);
            for r in &results {
                println!("{}", r.line());
            }
            match results.iter().filter(|r| r.pass == Some(false)).count() {
                0 => Ok(()),
                n => Err(CliError::CheckFailed(n)),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
