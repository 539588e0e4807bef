use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use nhep_cli::{resolve, run, Cli, CliError, Command, Overrides, RunOutput};

fn execute(cli: &Cli) -> Result<RunOutput, CliError> {
    if let Some(k) = cli.common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    }
    let config_text = cli
        .common
        .config
        .as_ref()
        .map(std::fs::read_to_string)
        .transpose()?;
    let input = match &cli.command {
        Command::IngestClassify { path } => path.clone(),
        _ => None,
    };
    let overrides = Overrides {
        grid: cli.common.grid,
        tolerance: cli.common.tolerance,
        input,
    };
    let cfg = resolve(cli.common.preset.as_deref(), config_text.as_deref(), &overrides)?;
    let out = run(&cli.command, &cfg)?;

    if let Some(dir) = &cli.common.out {
        std::fs::create_dir_all(dir)?;
        for a in &out.artifacts {
            std::fs::write(dir.join(&a.name), &a.bytes)?;
        }
        let mut report = serde_json::to_vec_pretty(&out.report).expect("report serializes");
        report.push(b'\n');
        std::fs::write(dir.join(format!("{}.json", cli.command.name())), report)?;
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = serde_json::to_writer_pretty(&mut stdout, &out.report);
            let _ = writeln!(stdout);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::FAILURE
        }
    }
}
