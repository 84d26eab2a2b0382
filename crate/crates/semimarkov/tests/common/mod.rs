#![allow(dead_code)]

use std::path::PathBuf;

use clap::Parser;
use semimarkov::commands;
use semimarkov::config::{Cli, Command, RunConfig};
use semimarkov::table::Table;

/// Argument lists reproducing the figure datasets; the name is the golden file stem.
pub fn figures() -> Vec<(&'static str, Vec<&'static str>)> {
    vec![
        ("fig1_q", vec!["--dist", "erlang2", "--pi", "1", "trajectories"]),
        ("fig1_g", vec!["--dist", "erlang2", "--pi", "0.5", "trajectories"]),
        ("fig2_q", vec!["--dist", "hypoexp", "--p-over-s2", "0.12", "--pi", "1", "trajectories"]),
        ("fig2_g", vec!["--dist", "hypoexp", "--p-over-s2", "0.12", "--pi", "0.5", "trajectories"]),
        (
            "fig3_q",
            vec!["--dist", "mix", "--lambda1", "0.1", "--lambda2", "0.2", "--mu", "0.3", "--pi", "1", "trajectories"],
        ),
        (
            "fig3_g",
            vec!["--dist", "mix", "--lambda1", "0.1", "--lambda2", "0.2", "--mu", "0.3", "--pi", "0.5", "trajectories"],
        ),
        ("fig4_rates", vec!["--dist", "erlang2", "rates"]),
        ("fig5_rates", vec!["--dist", "hypoexp", "--p-over-s2", "0.12", "rates"]),
        ("fig6_rates", vec!["--dist", "mix", "--lambda1", "1", "--lambda2", "6", "--mu", "0.6", "rates"]),
    ]
}

pub fn parse(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("semimarkov").chain(args.iter().copied())).expect("valid arguments")
}

/// The table a figure command emits.
pub fn figure_table(args: &[&str]) -> Table {
    let cli = parse(args);
    let cfg = RunConfig::from_options(&cli.options).unwrap();
    match &cli.command {
        Command::Trajectories { count, w0 } => commands::trajectories(&cfg, *count, w0).unwrap(),
        Command::Rates => commands::rates(&cfg).unwrap(),
        other => panic!("not a table command: {other:?}"),
    }
}

pub fn figure_csv(args: &[&str]) -> String {
    let mut buf = Vec::new();
    figure_table(args).write_csv(&mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.csv"))
}
