use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use tcc_cli::{
    run_bounds, run_centrality, run_fig5, run_fig6, run_fig6_fig7, run_fig8, run_synth,
    ExperimentSpec, InputSource, Selection,
};

#[derive(Parser)]
#[command(
    name = "tcc",
    version,
    about = "Controlling centrality of temporal networks, with analytic bounds",
    after_help = "Exactly one of --input and --synth picks the network. \
                  Every report lands in the output directory as CSV."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// contact-list file, one "t u v" event per line
    #[arg(long, global = true, value_name = "PATH")]
    input: Option<PathBuf>,

    /// random network instead of a file, as N,p,T
    #[arg(long, global = true, value_name = "N,p,T")]
    synth: Option<String>,

    /// control a single node, by label
    #[arg(long, global = true, value_name = "ID", conflicts_with = "all")]
    node: Option<String>,

    /// control every node in turn (the default)
    #[arg(long, global = true)]
    all: bool,

    /// prime modulus for rank evaluation
    #[arg(long, global = true, value_name = "P")]
    prime: Option<u64>,

    /// random evaluations per node, aggregated by maximum
    #[arg(long, global = true, value_name = "K", default_value_t = 3)]
    trials: usize,

    /// master seed behind every random choice
    #[arg(long, global = true, value_name = "S", default_value_t = 1)]
    seed: u64,

    /// output directory for the CSV reports
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// worker threads; defaults to all cores
    #[arg(long, global = true, value_name = "W")]
    workers: Option<usize>,

    /// timestamp window width when parsing a contact file
    #[arg(long, global = true, value_name = "WIDTH", default_value_t = 1)]
    window: u64,
}

#[derive(Subcommand)]
enum Command {
    /// write the input network itself as a contact list
    Synth,
    /// centrality, bounds and degree per selected node
    Centrality,
    /// analytic bounds only, no rank computation
    Bounds,
    /// computed centrality against its bounds, flagging violations
    Fig5,
    /// bound gap per node
    Fig6,
    /// bound gaps plus mean centrality per degree class
    Fig7,
    /// centrality histogram
    Fig8,
}

fn parse_synth_arg(text: &str) -> anyhow::Result<InputSource> {
    let parts: Vec<&str> = text.split(',').collect();
    let [n, p, horizon] = parts[..] else {
        anyhow::bail!("--synth wants N,p,T, got `{text}`");
    };
    let n = n.trim().parse().map_err(|_| anyhow::anyhow!("bad node count `{n}`"))?;
    let p = p.trim().parse().map_err(|_| anyhow::anyhow!("bad probability `{p}`"))?;
    let horizon = horizon
        .trim()
        .parse()
        .map_err(|_| anyhow::anyhow!("bad horizon `{horizon}`"))?;
    Ok(InputSource::Synth { n, p, horizon })
}

fn build_spec(cli: &Cli) -> anyhow::Result<ExperimentSpec> {
    let source = match (&cli.input, &cli.synth) {
        (Some(path), None) => InputSource::File {
            path: path.clone(),
            window: cli.window,
        },
        (None, Some(text)) => parse_synth_arg(text)?,
        (Some(_), Some(_)) => anyhow::bail!("--input and --synth are mutually exclusive"),
        (None, None) => anyhow::bail!("pick an input with --input PATH or --synth N,p,T"),
    };
    let selection = match &cli.node {
        Some(label) => Selection::Node(label.clone()),
        None => Selection::All,
    };
    Ok(ExperimentSpec {
        source,
        selection,
        prime: cli.prime.unwrap_or(tcc_core::field::DEFAULT_PRIME),
        trials: cli.trials,
        seed: cli.seed,
        out_dir: cli.out.clone(),
    })
}

fn dispatch(cli: &Cli) -> anyhow::Result<ExitCode> {
    if let Some(workers) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| anyhow::anyhow!("cannot size the worker pool: {e}"))?;
    }
    let spec = build_spec(cli)?;
    match cli.command {
        Command::Synth => {
            run_synth(&spec)?;
        }
        Command::Centrality => {
            run_centrality(&spec)?;
        }
        Command::Bounds => {
            run_bounds(&spec)?;
        }
        Command::Fig5 => {
            let outcome = run_fig5(&spec)?;
            if !outcome.violations.is_empty() {
                for v in &outcome.violations {
                    eprintln!("bound violation: {v}");
                    eprint!("{}", v.taxonomy);
                }
                eprintln!(
                    "{} of the computed centralities escaped their bounds",
                    outcome.violations.len()
                );
                return Ok(ExitCode::from(2));
            }
        }
        Command::Fig6 => {
            run_fig6(&spec)?;
        }
        Command::Fig7 => {
            run_fig6_fig7(&spec)?;
        }
        Command::Fig8 => {
            run_fig8(&spec)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors by default, but 2 is reserved for
    // bound violations here, so usage problems get remapped to 1
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::FAILURE;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
