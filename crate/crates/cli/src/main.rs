use clap::Parser;
use ldspec_cli::commands::{self, Cli, Format};
use ldspec_cli::{CliError, Context, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};
use std::process::ExitCode;

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let ctx = Context {
        tol_scale: Context::tol_scale_from_env()?,
        timings: cli.output.timings,
        ..Context::default()
    };
    let report = commands::run(&cli.command, &ctx)?;
    let text = match cli.output.format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    match &cli.output.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = execute(&cli).unwrap_or_else(|e| {
        eprintln!("ldspec: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
