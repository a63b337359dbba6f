use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use torusnoise_cli::{run, Cli, CliError, OUT_ENV};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(CliError::Config(e.to_string())),
    };
    let env_out = std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    match run(cli, env_out) {
        Ok(manifest) => {
            let text = serde_json::to_string_pretty(&manifest.summary).expect("serializable");
            // a closed pipe on stdout is not an error for the run itself
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}
