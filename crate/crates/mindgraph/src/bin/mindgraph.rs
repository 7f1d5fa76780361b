//! Command-line front end: run scenarios, sweep parameter grids,
//! validate scenario files and query journeys on TVG files.
//!
//! Exit codes: 0 success, 2 validation error, 3 runtime error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mindgraph::scenario::{apply_override, ScenarioError};
use mindgraph::{
    emit_results, emit_scenario, parse_scenario, run_with_echo, EmitOptions, OutputFormat,
    ScenarioConfig, TimeVaryingGraph, TrajectoryRecord,
};

#[derive(Parser)]
#[command(name = "mindgraph", about = "Opinion dynamics over time-varying networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write trajectory outputs.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: CliFormat,
        #[arg(long)]
        metrics_every: Option<u64>,
        /// Omit the wall-clock timestamp from JSON output.
        #[arg(long)]
        no_timestamp: bool,
        /// Scenario override, `key=value`; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Emit per-agent opinion columns regardless of population size.
        #[arg(long)]
        force_opinion_columns: bool,
    },
    /// Run every combination of a parameter grid, in parallel.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Grid axis, `key=v1,v2,v3`; repeatable.
        #[arg(long = "grid", value_name = "KEY=V1,V2,...", required = true)]
        grid: Vec<String>,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Parse and validate a scenario file without running it.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Compute a foremost journey on a TVG file.
    Journeys {
        #[arg(long)]
        tvg: PathBuf,
        #[arg(long)]
        src: usize,
        #[arg(long)]
        dst: usize,
        #[arg(long, default_value = "0")]
        t_start: u64,
    },
}

enum CliError {
    Validation(String),
    Runtime(String),
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<mindgraph::Error> for CliError {
    fn from(e: mindgraph::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn load_scenario(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_scenario(&text)?)
}

fn split_kv(spec: &str) -> Result<(&str, &str), CliError> {
    spec.split_once('=')
        .ok_or_else(|| CliError::Validation(format!("expected key=value, got `{spec}`")))
}

fn execute(config: &ScenarioConfig) -> Result<TrajectoryRecord, CliError> {
    config.validate().map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(run_with_echo(config, emit_scenario(config))?)
}

fn write_record(
    tr: &TrajectoryRecord,
    path: &Path,
    format: OutputFormat,
    opts: &EmitOptions,
) -> Result<(), CliError> {
    let mut file = fs::File::create(path)?;
    emit_results(tr, format, opts, &mut file).map_err(|e| CliError::Runtime(e.to_string()))?;
    file.flush()?;
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            scenario,
            out,
            seed,
            format,
            metrics_every,
            no_timestamp,
            set,
            force_opinion_columns,
        } => {
            let mut config = load_scenario(&scenario)?;
            for spec in &set {
                let (k, v) = split_kv(spec)?;
                apply_override(&mut config, k, v)?;
            }
            if let Some(seed) = seed {
                config.seed = seed;
            }
            if let Some(every) = metrics_every {
                apply_override(&mut config, "metrics_every", &every.to_string())?;
            }
            let tr = execute(&config)?;
            fs::create_dir_all(&out)?;
            let opts = EmitOptions {
                timestamp: !no_timestamp,
                force_opinion_columns,
            };
            let (fmt, ext) = match format {
                CliFormat::Csv => (OutputFormat::Csv, "csv"),
                CliFormat::Json => (OutputFormat::Json, "json"),
            };
            let path = out.join(format!("trajectory.{ext}"));
            write_record(&tr, &path, fmt, &opts)?;
            let last = tr.final_sample();
            println!(
                "wrote {} (final tick {}, {} clusters, mean {:.6})",
                path.display(),
                last.tick,
                last.clusters,
                last.mean
            );
            Ok(())
        }
        Command::Sweep { scenario, out, grid, no_timestamp } => {
            let base = load_scenario(&scenario)?;
            let mut axes: Vec<(String, Vec<String>)> = Vec::new();
            for spec in &grid {
                let (k, vs) = split_kv(spec)?;
                let values: Vec<String> = vs.split(',').map(str::to_string).collect();
                if values.is_empty() {
                    return Err(CliError::Validation(format!("empty grid axis `{k}`")));
                }
                axes.push((k.to_string(), values));
            }
            let mut combos: Vec<Vec<(String, String)>> = vec![Vec::new()];
            for (key, values) in &axes {
                combos = combos
                    .iter()
                    .flat_map(|c| {
                        values.iter().map(move |v| {
                            let mut c = c.clone();
                            c.push((key.clone(), v.clone()));
                            c
                        })
                    })
                    .collect();
            }
            // validate all combos up front so a bad grid fails fast
            let mut jobs: Vec<(String, ScenarioConfig)> = Vec::new();
            for combo in combos {
                let mut config = base.clone();
                for (k, v) in &combo {
                    apply_override(&mut config, k, v)?;
                }
                config.validate().map_err(|e| CliError::Validation(e.to_string()))?;
                let tag: Vec<String> =
                    combo.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let tag = if tag.is_empty() { "base".to_string() } else { tag.join("_") };
                jobs.push((tag.replace([' ', '/'], "-"), config));
            }
            fs::create_dir_all(&out)?;
            let pool = build_pool()?;
            let opts = EmitOptions { timestamp: !no_timestamp, force_opinion_columns: false };
            let results: Vec<Result<String, String>> = pool.install(|| {
                use rayon::prelude::*;
                jobs.par_iter()
                    .map(|(tag, config)| {
                        let tr = run_with_echo(config, emit_scenario(config))
                            .map_err(|e| e.to_string())?;
                        let path = out.join(format!("run_{tag}.json"));
                        let mut file = fs::File::create(&path).map_err(|e| e.to_string())?;
                        emit_results(&tr, OutputFormat::Json, &opts, &mut file)
                            .map_err(|e| e.to_string())?;
                        let last = tr.final_sample();
                        Ok(format!(
                            "{tag},{},{},{},{}",
                            last.tick, last.mean, last.variance, last.clusters
                        ))
                    })
                    .collect()
            });
            let mut summary = String::from("combo,final_tick,mean,variance,clusters\n");
            for r in results {
                match r {
                    Ok(row) => {
                        summary.push_str(&row);
                        summary.push('\n');
                    }
                    Err(e) => return Err(CliError::Runtime(e)),
                }
            }
            let summary_path = out.join("sweep_summary.csv");
            fs::write(&summary_path, summary)?;
            println!("wrote {}", summary_path.display());
            Ok(())
        }
        Command::Validate { scenario } => {
            let config = load_scenario(&scenario)?;
            config.validate().map_err(|e| CliError::Validation(e.to_string()))?;
            // resolve referenced files as well
            mindgraph::sim::build_population(&config)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            println!("ok: {} agents, horizon {}", config.n_agents, config.horizon);
            Ok(())
        }
        Command::Journeys { tvg, src, dst, t_start } => {
            let text = fs::read_to_string(&tvg)
                .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", tvg.display())))?;
            let graph = TimeVaryingGraph::from_text(&text)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            match graph.foremost_journey(src, dst, t_start)? {
                Some(j) => {
                    println!("arrival {}", j.arrival);
                    for step in &j.steps {
                        println!("{} -> {} depart {}", step.from, step.to, step.departure);
                    }
                }
                None => println!("no journey"),
            }
            Ok(())
        }
    }
}

/// Sweep parallelism is capped by MINDGRAPH_THREADS when set.
fn build_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(cap) = std::env::var("MINDGRAPH_THREADS") {
        let n: usize = cap
            .parse()
            .map_err(|_| CliError::Validation(format!("bad MINDGRAPH_THREADS `{cap}`")))?;
        builder = builder.num_threads(n.max(1));
    }
    builder
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))
}
