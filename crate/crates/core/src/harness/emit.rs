//! Trace output. Rows go to `trace.csv` (or `trace.jsonl`) with columns
//!
//! ```text
//! t,policy,seed,realized_reward,expected_reward,remaining_resource,num_deployed,oracle_value,regret
//! ```
//!
//! and the aggregates to a `summary.json` sidecar. Floats are written in
//! shortest round-trip form.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::statistics::Statistics;

use crate::error::{Error, Result};
use crate::harness::run::{LearnerSnapshot, RunSummary, RunTrace, TraceRow};
use crate::policy::PolicyKind;

pub const CSV_COLUMNS: [&str; 9] = [
    "t",
    "policy",
    "seed",
    "realized_reward",
    "expected_reward",
    "remaining_resource",
    "num_deployed",
    "oracle_value",
    "regret",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::JsonLines => "jsonl",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" | "json-lines" => Ok(Format::JsonLines),
            other => Err(Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

/// Mean and sample standard deviation of one metric across seeds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub mean: f64,
    pub std: f64,
    /// Standard error of the mean.
    pub se: f64,
}

impl Spread {
    pub fn of(values: &[f64]) -> Self {
        let mean = values.mean();
        let std = if values.len() > 1 { values.std_dev() } else { 0.0 };
        Spread {
            mean,
            std,
            se: std / (values.len() as f64).sqrt(),
        }
    }
}

/// Cross-seed aggregates for one policy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolicySummary {
    pub policy: PolicyKind,
    pub runs: usize,
    pub time_avg_reward: Spread,
    pub time_avg_expected_reward: Spread,
    pub remaining_resource: Spread,
    pub remaining_fraction: Spread,
    pub num_deployed: Spread,
    pub regret: Option<Spread>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub runs: Vec<RunSummary>,
    pub policies: Vec<PolicySummary>,
}

impl Summary {
    pub fn from_runs(runs: Vec<RunSummary>) -> Self {
        let mut order: Vec<PolicyKind> = Vec::new();
        for r in &runs {
            if !order.contains(&r.policy) {
                order.push(r.policy);
            }
        }
        let policies = order
            .into_iter()
            .map(|p| {
                let mine: Vec<&RunSummary> = runs.iter().filter(|r| r.policy == p).collect();
                let col = |f: &dyn Fn(&RunSummary) -> f64| Spread::of(&mine.iter().map(|r| f(r)).collect::<Vec<_>>());
                let regret = mine
                    .iter()
                    .map(|r| r.mean_regret)
                    .collect::<Option<Vec<f64>>>()
                    .map(|v| Spread::of(&v));
                PolicySummary {
                    policy: p,
                    runs: mine.len(),
                    time_avg_reward: col(&|r| r.time_avg_reward),
                    time_avg_expected_reward: col(&|r| r.time_avg_expected_reward),
                    remaining_resource: col(&|r| r.mean_remaining_resource),
                    remaining_fraction: col(&|r| r.mean_remaining_fraction),
                    num_deployed: col(&|r| r.mean_num_deployed),
                    regret,
                }
            })
            .collect();
        Summary { runs, policies }
    }

    pub fn of(traces: &[RunTrace]) -> Self {
        Self::from_runs(traces.iter().map(|t| t.summary.clone()).collect())
    }

    pub fn policy(&self, p: PolicyKind) -> Option<&PolicySummary> {
        self.policies.iter().find(|s| s.policy == p)
    }
}

/// Writes the CSV trace. An empty trace set yields the header line only.
pub fn write_csv<W: Write>(traces: &[RunTrace], out: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for row in traces.iter().flat_map(|t| &t.rows) {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_jsonl<W: Write, T: Serialize>(items: impl IntoIterator<Item = T>, mut out: W) -> std::io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut out, &item)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

pub fn read_csv(path: &Path) -> Result<Vec<TraceRow>> {
    let wrap = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(wrap)?;
    r.deserialize().collect::<std::result::Result<_, _>>().map_err(wrap)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Emitted {
    pub trace: PathBuf,
    pub summary: PathBuf,
    pub learners: Option<PathBuf>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `trace.<ext>` and `summary.json` (and `learners.jsonl` when any
/// learner snapshots were recorded) into directory `dir`.
pub fn emit(traces: &[RunTrace], dir: &Path, format: Format) -> Result<Emitted> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let trace = dir.join(format!("trace.{}", format.extension()));
    let file = BufWriter::new(File::create(&trace).map_err(io_err(&trace))?);
    match format {
        Format::Csv => write_csv(traces, file).map_err(|source| Error::Csv {
            path: trace.clone(),
            source,
        })?,
        Format::JsonLines => {
            write_jsonl(traces.iter().flat_map(|t| &t.rows), file).map_err(io_err(&trace))?
        }
    }

    let summary = dir.join("summary.json");
    let text = serde_json::to_string_pretty(&Summary::of(traces)).expect("summary serializes");
    fs::write(&summary, text + "\n").map_err(io_err(&summary))?;

    let snapshots: Vec<&LearnerSnapshot> = traces.iter().flat_map(|t| &t.learners).collect();
    let learners = if snapshots.is_empty() {
        None
    } else {
        let path = dir.join("learners.jsonl");
        let file = BufWriter::new(File::create(&path).map_err(io_err(&path))?);
        write_jsonl(snapshots, file).map_err(io_err(&path))?;
        Some(path)
    };
    Ok(Emitted {
        trace,
        summary,
        learners,
    })
}
