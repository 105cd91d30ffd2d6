use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qw_cli::{commands, CliError, Options};

/// Momentum-space quantum walk simulator.
#[derive(Debug, Parser)]
#[command(name = "qwalk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a walk or ensemble and write distribution and moment tables.
    Run(RunArgs),
    /// Run one ensemble per point of the configured parameter grid.
    Sweep(RunArgs),
    /// Run forward, then undo the walk, and report the return fidelity.
    Reverse(RunArgs),
    /// Check a configuration file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "qwalk-out")]
    out_dir: PathBuf,
    /// Overrides the seed given in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

impl From<RunArgs> for Options {
    fn from(a: RunArgs) -> Self {
        Options {
            config: a.config,
            out_dir: a.out_dir,
            seed: a.seed,
            threads: a.threads,
        }
    }
}

fn report(files: &[String], options: &Options) {
    for f in files {
        println!("wrote {}", options.out_dir.join(f).display());
    }
    println!("wrote {}", options.out_dir.join("manifest.json").display());
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run(args) => {
            let options = args.into();
            report(&commands::run(&options)?, &options);
        }
        Command::Sweep(args) => {
            let options = args.into();
            report(&commands::sweep(&options)?, &options);
        }
        Command::Reverse(args) => {
            let options = args.into();
            let (files, fidelity) = commands::reverse(&options)?;
            report(&files, &options);
            println!("mean fidelity {fidelity:.12}");
        }
        Command::Validate { config } => {
            commands::validate(&config)?;
            println!("{}: ok", config.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
