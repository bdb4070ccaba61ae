use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cubik", about = "Checker and normalizer for De Morgan cubical type theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check every declaration of a file.
    Check { file: PathBuf },
    /// Print the normal form of a declaration's body.
    Normalize {
        file: PathBuf,
        #[arg(long = "def")]
        def: String,
    },
    /// Interactive session.
    Repl,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let code = match cli.command {
        Command::Check { file } => cubik_cli::cmd_check(&file, &mut out, &mut io::stderr()),
        Command::Normalize { file, def } => cubik_cli::cmd_normalize(&file, &def, &mut out, &mut io::stderr()),
        Command::Repl => cubik_cli::cmd_repl(&mut io::stdin().lock(), &mut out),
    };
    ExitCode::from(code as u8)
}
