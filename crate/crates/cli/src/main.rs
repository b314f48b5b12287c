use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::Context;
use clap::{Parser, Subcommand};
use grandlab::experiments::{list_experiments, run_suite, Config};
use grandlab::Error;

mod oneoff;

#[derive(Parser)]
#[command(name = "grandlab", version, about = "Orlicz and grand Lebesgue norm experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiments listed in a JSON manifest.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the manifest seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List experiment ids.
    List,
    /// Print the function catalog as JSON.
    Catalog,
    /// Evaluate one norm of one catalog function.
    Norm {
        /// torus | torus-graded | line | line-nu | line-uniform
        #[arg(long, default_value = "torus-graded")]
        space: String,
        #[arg(long)]
        resolution: Option<usize>,
        #[arg(long, default_value_t = 1e4)]
        x_max: f64,
        /// e.g. `g_m:m=1`
        #[arg(long)]
        function: String,
        /// e.g. `orlicz:N_1`, `lp:p=4`, `g:m=1,alpha=2`
        #[arg(long)]
        norm: String,
    },
}

/// Exit 2 for manifest problems, 1 for everything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Config(_) | Error::UnknownExperiment(_) | Error::Json(_)) => 2,
        _ => 1,
    }
}

fn run(config: PathBuf, out: PathBuf, seed: Option<u64>, threads: Option<usize>) -> anyhow::Result<bool> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("thread pool")?;
    }
    let mut cfg = Config::load(&config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let t0 = Instant::now();
    let report = run_suite(&cfg)?;
    report.write(&out)?;
    let runtime = serde_json::json!({
        "timestamp_unix": SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        "elapsed_ms": t0.elapsed().as_millis() as u64,
        "threads": rayon::current_num_threads(),
        "version": env!("CARGO_PKG_VERSION"),
    });
    std::fs::write(out.join("runtime.json"), serde_json::to_string_pretty(&runtime)? + "\n")?;
    for e in &report.experiments {
        let failed: Vec<&str> = e.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        if failed.is_empty() {
            eprintln!("{:<18} ok", e.id);
        } else {
            eprintln!("{:<18} FAILED: {}", e.id, failed.join(", "));
        }
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            out,
            seed,
            threads,
        } => run(config, out, seed, threads),
        Command::List => {
            print!("{}", list_experiments());
            Ok(true)
        }
        Command::Catalog => serde_json::to_string_pretty(&grandlab::catalog::listing())
            .map(|s| println!("{s}"))
            .map(|_| true)
            .map_err(Into::into),
        Command::Norm {
            space,
            resolution,
            x_max,
            function,
            norm,
        } => oneoff::norm(&space, resolution, x_max, &function, &norm).map(|s| {
            println!("{s}");
            true
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
