use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, ValueEnum};

use bv_hodge::report::{emit, fixture, parse_config, run, Format, RunOptions, FIXTURES};

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

/// Hodge numbers of Borcea–Voisin type threefolds of order 2, 3, 4 or 6.
#[derive(Parser)]
#[command(name = "bv-hodge", version)]
struct Cli {
    /// Configuration document; read from stdin when absent.
    #[arg(long, conflicts_with = "fixture")]
    input: Option<PathBuf>,

    /// Run a bundled fixture instead of reading a document.
    #[arg(long)]
    fixture: Option<String>,

    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,

    /// Skip the Euler and closed-form cross-checks.
    #[arg(long)]
    no_checks: bool,

    /// Print the names of the bundled fixtures and exit.
    #[arg(long)]
    list_fixtures: bool,
}

fn read_document(cli: &Cli) -> anyhow::Result<String> {
    if let Some(name) = &cli.fixture {
        return fixture(name)
            .map(str::to_string)
            .with_context(|| format!("no fixture named `{name}` (see --list-fixtures)"));
    }
    match &cli.input {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list_fixtures {
        for (name, _) in FIXTURES {
            println!("{name}");
        }
        return ExitCode::SUCCESS;
    }
    let text = match read_document(&cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let report = run(&cfg, RunOptions { checks: !cli.no_checks });
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    print!("{}", emit(&report, format));
    ExitCode::from(report.status.exit_code() as u8)
}
