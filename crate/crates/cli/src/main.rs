mod args;
mod commands;
mod error;
mod output;
mod plot;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use monsterlab::zoo::FunctionSpec;

use args::Cli;
use commands::Ctx;
use error::CliError;
use output::OutDir;

fn configure_threads(threads: Option<usize>) -> Result<(), CliError> {
    let Some(n) = threads else {
        return Ok(());
    };
    if n == 0 {
        return error::usage("--threads must be at least 1");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let start = Instant::now();
    configure_threads(cli.opts.threads)?;
    let spec = cli.opts.spec.as_deref().map(FunctionSpec::load).transpose()?;
    let spec_json = spec
        .as_ref()
        .map(|s| serde_json::from_str::<serde_json::Value>(&s.to_json()).expect("spec JSON is valid"));
    let mut out = OutDir::create(&cli.opts.out)?;
    let mut ctx = Ctx {
        opts: &cli.opts,
        spec,
        out: &mut out,
    };
    let result = commands::run(cli.command, &mut ctx);
    let status = match &result {
        Ok(()) => "ok".to_string(),
        Err(e) => format!("error: {e}"),
    };
    out.manifest(cli.command, &cli.opts, spec_json.as_ref(), &status, start.elapsed())?;
    result
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("monsterlab {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
