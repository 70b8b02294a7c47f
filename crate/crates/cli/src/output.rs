use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use gridlab::report::{Report, Status};
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Outcome {
    #[default]
    Passed,
    Failed,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Passed => 0,
            Outcome::Failed => 1,
        }
    }
}

/// JSON-lines writer. Every record carries the echoed config and an
/// instance key, so merged parallel output can be re-sorted.
pub struct Sink {
    writer: Box<dyn Write>,
    config: Value,
    outcome: Outcome,
}

impl Sink {
    pub fn open(out: Option<&Path>, config: Value) -> Result<Self> {
        let writer: Box<dyn Write> = match out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Sink {
            writer,
            config,
            outcome: Outcome::Passed,
        })
    }

    /// Writes a bare document (generated instances and transduction output).
    pub fn document(&mut self, value: &impl Serialize) -> Result<()> {
        serde_json::to_writer(&mut self.writer, value)?;
        writeln!(self.writer)?;
        Ok(())
    }

    pub fn record(&mut self, key: Value, body: &impl Serialize) -> Result<()> {
        let mut map = Map::new();
        map.insert("key".into(), key);
        map.insert("config".into(), self.config.clone());
        match serde_json::to_value(body)? {
            Value::Object(fields) => map.extend(fields),
            other => {
                map.insert("value".into(), other);
            }
        }
        self.document(&Value::Object(map))
    }

    pub fn report(&mut self, key: Value, report: &Report) -> Result<()> {
        if report.status == Status::Fail {
            self.outcome = Outcome::Failed;
        }
        self.record(key, report)
    }

    pub fn finish(mut self) -> Result<Outcome> {
        self.writer.flush()?;
        Ok(self.outcome)
    }
}
