//! The JSON envelope, CSV tables and the two failure classes.

use std::fs;
use std::io::Write as _;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use syzkit::report::SCHEMA_VERSION;
use syzkit::syzygy::StepInfo;

use crate::Global;

/// Exit 1 for `Input`, 2 for `Budget`.
#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    Budget(String),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure::Input(e.into())
    }
}

pub type CmdResult = Result<(), Failure>;

/// A header and rows, written by `--csv`.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// What a command produced; `refusal` turns a written result into exit 2.
pub struct Outcome {
    pub command: &'static str,
    pub config: Value,
    pub result: Value,
    pub text: String,
    pub table: Option<Table>,
    pub peak: Option<(u64, u64)>,
    pub refusal: Option<String>,
}

impl Outcome {
    pub fn new(
        command: &'static str,
        config: Value,
        result: impl Serialize,
        text: String,
    ) -> Outcome {
        Outcome {
            command,
            config,
            result: serde_json::to_value(result).expect("payloads serialize"),
            text,
            table: None,
            peak: None,
            refusal: None,
        }
    }

    pub fn with_table(mut self, table: Table) -> Outcome {
        self.table = Some(table);
        self
    }
}

/// Largest `rows × cols` among the kernel steps.
pub fn peak_shape(steps: &[StepInfo]) -> Option<(u64, u64)> {
    steps
        .iter()
        .map(|s| (s.rows, s.cols))
        .max_by_key(|&(r, c)| r.saturating_mul(c))
}

/// Measures wall time from construction to [`Clock::emit`].
pub struct Clock(Instant);

impl Clock {
    pub fn start() -> Clock {
        Clock(Instant::now())
    }

    pub fn emit(&self, g: &Global, out: Outcome) -> CmdResult {
        let body = if g.json {
            let env = json!({
                "schema_version": SCHEMA_VERSION,
                "command": out.command,
                "config": out.config,
                "seed": g.seed,
                "wall_seconds": self.0.elapsed().as_secs_f64(),
                "peak_shape": out.peak.map(|(rows, cols)| json!({"rows": rows, "cols": cols})),
                "result": out.result,
            });
            let mut s = serde_json::to_string_pretty(&env)?;
            s.push('\n');
            s
        } else if g.csv {
            let table = out.table.ok_or_else(|| {
                Failure::Input(anyhow::anyhow!(
                    "`{}` has no tabular output; use --json",
                    out.command
                ))
            })?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.header)?;
            for row in &table.rows {
                w.write_record(row)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?)?
        } else {
            out.text
        };
        write_output(g, &body)?;
        match out.refusal {
            Some(msg) => Err(Failure::Budget(msg)),
            None => Ok(()),
        }
    }
}

/// Writes to `--out` when given, else stdout.
pub fn write_output(g: &Global, body: &str) -> anyhow::Result<()> {
    match &g.out {
        Some(path) => fs::write(path, body).map_err(|e| anyhow::anyhow!("{}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            Ok(())
        }
    }
}
