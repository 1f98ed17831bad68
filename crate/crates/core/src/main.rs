use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, ValueEnum};

use sfc_backup::harness::emit::{write_csv, write_jsonl};
use sfc_backup::harness::{emit, parse_seeds, run, ExperimentConfig, Format, Overrides, Summary};
use sfc_backup::policy::PolicyKind;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyArg {
    Rtsd,
    Bandit,
    Random,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

/// Simulate SFC backup selection on an edge network.
///
/// Without --out the per-slot trace goes to stdout and a per-policy summary
/// to stderr.
#[derive(Debug, Parser)]
#[command(name = "sfc-backup", version)]
struct Cli {
    /// Experiment config (JSON). Defaults to the bundled six-server instance.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    slots: Option<u64>,
    /// A seed `N` or an inclusive range `A..B`.
    #[arg(long)]
    seed: Option<String>,
    #[arg(long, value_enum)]
    policy: Option<PolicyArg>,
    /// Fill the oracle_value and regret columns (small instances only).
    #[arg(long)]
    regret: bool,
    /// Multiply every server capacity by this factor, then floor.
    #[arg(long)]
    capacity_scale: Option<f64>,
    /// Number of users K.
    #[arg(long)]
    users: Option<usize>,
    /// Output directory for trace.<csv|jsonl> and summary.json.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Also dump learner state per slot to learners.jsonl (needs --out).
    #[arg(long, requires = "out")]
    learners: bool,
    /// Print the config document (bundled or --config) and exit.
    #[arg(long)]
    print_config: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if matches!(e.kind(), ErrorKind::InvalidValue | ErrorKind::ValueValidation) {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> sfc_backup::Result<()> {
    let cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::canonical(),
    };
    if cli.print_config {
        println!("{}", cfg.to_json_pretty());
        return Ok(());
    }
    let overrides = Overrides {
        slots: cli.slots,
        seeds: cli.seed.as_deref().map(parse_seeds).transpose()?,
        policies: cli.policy.map(|p| match p {
            PolicyArg::Rtsd => vec![PolicyKind::Rtsd],
            PolicyArg::Bandit => vec![PolicyKind::Bandit],
            PolicyArg::Random => vec![PolicyKind::Random],
            PolicyArg::All => PolicyKind::ALL.to_vec(),
        }),
        regret: cli.regret.then_some(true),
        capacity_scale: cli.capacity_scale,
        users: cli.users,
    };
    let mut exp = cfg.resolve(&overrides)?;
    exp.record_learners = cli.learners;
    let format = match cli.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Jsonl => Format::JsonLines,
    };

    let traces = run(&exp)?;
    let summary = Summary::of(&traces);

    match &cli.out {
        Some(dir) => {
            let written = emit(&traces, dir, format)?;
            eprintln!("wrote {} and {}", written.trace.display(), written.summary.display());
        }
        None => {
            let stdout = io::stdout().lock();
            let res = match format {
                Format::Csv => write_csv(&traces, stdout).map_err(io::Error::other),
                Format::JsonLines => write_jsonl(traces.iter().flat_map(|t| &t.rows), stdout),
            };
            if let Err(e) = res {
                // a closed pipe is not worth a failure exit
                if e.kind() != io::ErrorKind::BrokenPipe {
                    return Err(sfc_backup::Error::Io {
                        path: "<stdout>".into(),
                        source: e,
                    });
                }
            }
        }
    }

    let mut err = io::stderr().lock();
    for p in &summary.policies {
        let _ = writeln!(
            err,
            "{:<7} runs={:<3} reward={:.4}±{:.4} remaining={:.3} deployed={:.3}{}",
            p.policy.name(),
            p.runs,
            p.time_avg_reward.mean,
            p.time_avg_reward.se,
            p.remaining_resource.mean,
            p.num_deployed.mean,
            p.regret.map(|r| format!(" regret={:.4}", r.mean)).unwrap_or_default(),
        );
    }
    Ok(())
}
