//! `cubic-jordan`: emit catalog objects, verify triples and algebras, and
//! run the constructions in both directions.
//!
//! Exit status is 0 when every check passes, 1 when a check fails, and 2
//! for usage, I/O and schema errors.

mod certificate;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cubic_jordan::SampleConfig;

use certificate::Certificate;
use commands::CliResult;

#[derive(Parser)]
#[command(name = "cubic-jordan", version, about = "Cubic eiconal triples and cubic Jordan algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog of known triples and algebras.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Run the full check suite on a file.
    Verify {
        kind: VerifyKind,
        input: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Construct an algebra from a triple (beta) or a triple from an algebra (alpha).
    Build {
        direction: Direction,
        input: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Apply both constructions and compare with the input.
    Roundtrip {
        input: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Write a catalog object as JSON.
    Emit {
        /// cartan:1|2|4|8, spin:n, diagonal, herm3:1|2|4, spinfactor[:n]
        family: String,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Eiconal,
    Jordan,
    Lemma,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Beta,
    Alpha,
}

#[derive(Args)]
struct Sampling {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Largest dimension at which identities are also expanded into coefficients.
    #[arg(long, default_value_t = SampleConfig::default().max_expand_dim)]
    max_expand_dim: usize,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Sampling {
    fn config(&self) -> SampleConfig {
        SampleConfig {
            seed: self.seed,
            samples: self.samples,
            max_expand_dim: self.max_expand_dim,
        }
    }
}

fn run(cli: Cli) -> (CliResult<Certificate>, Option<PathBuf>) {
    match cli.command {
        Command::Catalog {
            action: CatalogAction::Emit { family, output, sampling },
        } => (
            commands::catalog_emit(&family, &output, sampling.config()),
            sampling.out,
        ),
        Command::Verify { kind, input, sampling } => {
            let cfg = sampling.config();
            let result = match kind {
                VerifyKind::Eiconal => commands::verify_eiconal_file(&input, cfg),
                VerifyKind::Jordan => commands::verify_jordan_file(&input, cfg),
                VerifyKind::Lemma => commands::verify_lemma_file(&input, cfg),
            };
            (result, sampling.out)
        }
        Command::Build { direction, input, output, sampling } => {
            let cfg = sampling.config();
            let result = match direction {
                Direction::Beta => commands::build_beta(&input, &output, cfg),
                Direction::Alpha => commands::build_alpha(&input, &output, cfg),
            };
            (result, sampling.out)
        }
        Command::Roundtrip { input, sampling } => {
            (commands::roundtrip(&input, sampling.config()), sampling.out)
        }
    }
}

fn main() -> ExitCode {
    let (result, out) = run(Cli::parse());
    let cert = match result {
        Ok(cert) => cert,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &out {
        Some(path) => {
            if let Err(e) = commands::write_json(path, &cert) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
        None => {
            let text = serde_json::to_string_pretty(&cert).expect("certificates serialize to JSON");
            println!("{text}");
        }
    }
    eprintln!("{}", cert.summary());
    if cert.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
