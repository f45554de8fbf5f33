use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::json;
use xmodcat_cli::{run, Command, Options, EXIT_INTERNAL, EXIT_PARSE};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Validate,
    Irr,
    Modular,
    Fusion,
    Vacuum,
    Verify,
    Report,
}

/// Character theory and premodular data of finite crossed modules.
#[derive(Debug, Parser)]
#[command(name = "xmodcat", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// XMOD-JSON document
    file: PathBuf,
    /// Machine-readable JSON on standard output
    #[arg(long)]
    json: bool,
    /// Report destination (report)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Write the fusion tensor as p,q,r,N rows (fusion)
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Skip the explicit-object checks (verify, report)
    #[arg(long)]
    fast: bool,
    /// Worker threads; defaults to the available parallelism
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command = match args.command {
        Cmd::Validate => Command::Validate,
        Cmd::Irr => Command::Irr,
        Cmd::Modular => Command::Modular,
        Cmd::Fusion => Command::Fusion,
        Cmd::Vacuum => Command::Vacuum,
        Cmd::Verify => Command::Verify,
        Cmd::Report => Command::Report,
    };
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}", json!({"error": "io", "path": args.file.display().to_string(), "message": e.to_string()}));
            return ExitCode::from(EXIT_PARSE as u8);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.jobs {
        pool = pool.num_threads(n.max(1));
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}", json!({"error": "internal", "message": e.to_string()}));
            return ExitCode::from(EXIT_INTERNAL as u8);
        }
    };
    std::panic::set_hook(Box::new(|_| {}));
    let opts = Options { json: args.json, out: args.out, csv: args.csv, fast: args.fast };
    let outcome = pool.install(|| run(command, &text, &opts));
    print!("{}", outcome.stdout);
    for line in &outcome.stderr {
        eprintln!("{line}");
    }
    ExitCode::from(outcome.code as u8)
}
