use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use semimarkov::commands::{self, McReport, MeasuresReport};
use semimarkov::config::{Cli, Command, Format, RunConfig};
use semimarkov::parallel::Rayon;
use semimarkov::table::Table;
use semimarkov::CliError;

enum Output {
    Table(Table),
    Measures(MeasuresReport),
    Mc(McReport),
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let cfg = RunConfig::from_options(&cli.options)?;
    Ok(match &cli.command {
        Command::Trajectories { count, w0 } => Output::Table(commands::trajectories(&cfg, *count, w0)?),
        Command::Rates => Output::Table(commands::rates(&cfg)?),
        Command::Measures { search, search_grid } => {
            Output::Measures(commands::measures(&cfg, search.then_some(*search_grid), &Rayon)?)
        }
        Command::McVerify { sigma, detect_sigma, parity_points } => {
            Output::Mc(commands::mc_verify(&cfg, *sigma, *detect_sigma, *parity_points, &Rayon)?)
        }
    })
}

fn write(output: &Output, format: Option<Format>, sink: &mut dyn Write) -> Result<(), CliError> {
    match (output, format) {
        (Output::Table(t), None | Some(Format::Csv)) => t.write_csv(sink),
        (Output::Table(t), Some(Format::Json)) => t.write_json(sink),
        (_, Some(Format::Csv)) => Err(CliError::Config("this command only writes json reports".into())),
        (Output::Measures(r), _) => write_json(r, sink),
        (Output::Mc(r), _) => write_json(r, sink),
    }
}

fn write_json<T: serde::Serialize>(report: &T, sink: &mut dyn Write) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *sink, report)?;
    writeln!(sink)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|output| {
        let mut sink: Box<dyn Write> = match &cli.options.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        write(&output, cli.options.format, sink.as_mut())?;
        sink.flush()?;
        // A completed mc-verify run that found disagreements still writes its report.
        if let Output::Mc(mc) = &output {
            if !mc.passed {
                return Err(CliError::Statistical(mc.failures().join("; ")));
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("semimarkov: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
