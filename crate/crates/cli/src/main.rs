use std::io::{Read, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use gmacwt_cli::{execute, Cli, CliError};

fn read_input(path: &str) -> Result<String, CliError> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::File::open(path).and_then(|mut f| f.read_to_string(&mut text).map(|_| ()))
    };
    res.map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })?;
    Ok(text)
}

fn write_output(cli: &Cli, body: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(body.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let outcome = read_input(&cli.input)
        .and_then(|text| execute(&cli.command, &text))
        .and_then(|report| write_output(&cli, &report.body).map(|()| report));
    match outcome {
        Ok(report) => {
            if let Some(msg) = &report.mismatch {
                eprintln!("error: {msg}");
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
