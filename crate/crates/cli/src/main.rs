use std::path::PathBuf;
use std::process::ExitCode;

use akucb_core::harness::{preset, run_checks, run_experiment, ExperimentConfig, PRESET_NAMES};
use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

/// Simulate link scheduling policies on multi-hop wireless networks.
#[derive(Debug, Parser)]
#[command(name = "akucb", version)]
struct Cli {
    /// Directory for CSV output. Defaults to $AKUCB_OUT_DIR, then out/<experiment name>.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Master seed, replacing the configured one.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of runs per policy and load, replacing the configured one.
    #[arg(long, global = true)]
    runs: Option<u32>,
    /// Worker threads; 0 uses every CPU.
    #[arg(long, global = true, default_value_t = 0)]
    parallel: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config file.
    Run {
        config: PathBuf,
        /// Dotted `key=value` override, repeatable.
        #[arg(long = "override", value_name = "KEY=VAL")]
        overrides: Vec<String>,
    },
    /// Run a named preset.
    Preset {
        name: String,
        #[arg(long = "override", value_name = "KEY=VAL")]
        overrides: Vec<String>,
    },
    /// Print the preset names.
    ListPresets,
    /// Run the invariant and oracle self-checks on small graphs.
    Check,
}

fn execute(cli: &Cli, cfg: ExperimentConfig, overrides: &[String]) -> Result<()> {
    let mut cfg = cfg.with_overrides(overrides)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(runs) = cli.runs {
        cfg.runs = runs;
    }
    let out_dir = cli
        .out_dir
        .clone()
        .or_else(|| std::env::var_os("AKUCB_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out").join(&cfg.name));
    let report = run_experiment(&cfg, &out_dir, cli.parallel)?;
    print!("{}", report.summary);
    println!();
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config, overrides } => std::fs::read_to_string(config)
            .with_context(|| format!("reading {}", config.display()))
            .and_then(|text| Ok(ExperimentConfig::from_toml_str(&text)?))
            .and_then(|cfg| execute(&cli, cfg, overrides)),
        Command::Preset { name, overrides } => match preset(name) {
            Some(cfg) => execute(&cli, cfg, overrides),
            None => {
                eprintln!("unknown preset `{name}`; valid presets: {}", PRESET_NAMES.join(", "));
                return ExitCode::from(2);
            }
        },
        Command::ListPresets => {
            for name in PRESET_NAMES {
                println!("{name}");
            }
            Ok(())
        }
        Command::Check => {
            let outcomes = run_checks();
            let mut ok = true;
            for o in &outcomes {
                println!("{} {} ({})", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
                ok &= o.passed;
            }
            if ok {
                Ok(())
            } else {
                Err(anyhow::anyhow!("self-check failed"))
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
