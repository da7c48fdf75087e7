use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twalex::presentation::RelationMode;
use twalex_cli::{run, Command, JobSpec, Options, OutputMode};

#[derive(Parser)]
#[command(name = "twalex", version, about = "Twisted Alexander invariants of finitely presented groups")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Δ⁰, Δ¹, Δ², the Wada invariant and the torsion of a twisted presentation.
    Compute {
        #[command(flatten)]
        common: Common,
        /// Evaluate the Wada invariant for every admissible generator and compare.
        #[arg(long)]
        cross_check: bool,
        /// Refuse Wada computations needing more minors than this.
        #[arg(long, default_value_t = twalex::alexander::DEFAULT_MAX_MINORS)]
        max_minors: u64,
    },
    /// Print the closure presentation of a braid as an input document.
    Braid2pres {
        #[command(flatten)]
        common: Common,
    },
    /// Print the Zariski-van Kampen presentation compiled from braid monodromy.
    Zvk {
        #[command(flatten)]
        common: Common,
    },
    /// Scan rank-1 characters of the given order for (t - 1) | Δ¹.
    ScanCv {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        scan_order: u32,
    },
    /// Global/local divisibility check for the document's twist.
    CheckTheorem {
        #[command(flatten)]
        common: Common,
    },
    /// Classical divisibility check with trivial ρ.
    CheckCorollary {
        #[command(flatten)]
        common: Common,
    },
    /// Check that ε and ρ kill every relator and the curve data is consistent.
    Validate {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Input document (TOML).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Monodromy relations per singular point for zvk documents.
    #[arg(long, value_enum, default_value_t = Relations::Reduced)]
    relations: Relations,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum Relations {
    Full,
    Reduced,
}

fn job(cli: Cli) -> JobSpec {
    let mut options = Options::default();
    let (command, common) = match cli.command {
        Cmd::Compute { common, cross_check, max_minors } => {
            options.cross_check = cross_check;
            options.max_minors = max_minors;
            (Command::Compute, common)
        }
        Cmd::Braid2pres { common } => (Command::Braid2pres, common),
        Cmd::Zvk { common } => (Command::Zvk, common),
        Cmd::ScanCv { common, scan_order } => {
            options.scan_order = scan_order;
            (Command::ScanCv, common)
        }
        Cmd::CheckTheorem { common } => (Command::CheckTheorem, common),
        Cmd::CheckCorollary { common } => (Command::CheckCorollary, common),
        Cmd::Validate { common } => (Command::Validate, common),
    };
    options.relations = match common.relations {
        Relations::Full => RelationMode::Full,
        Relations::Reduced => RelationMode::Reduced,
    };
    let output = match common.format {
        Format::Text => OutputMode::Text,
        Format::Structured => OutputMode::Structured,
    };
    JobSpec { command, input: common.input, output, options }
}

fn main() -> ExitCode {
    env_logger::Builder::from_default_env().target(env_logger::Target::Stderr).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(status);
        }
    };
    let outcome = run(&job(cli));
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.status as u8)
}
