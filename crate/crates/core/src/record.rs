//! Time series of evaluation checkpoints emitted by solver runs.

use std::fmt;

/// A metric a run can report at a checkpoint.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Metric {
    Exploitability,
    SquaredError,
    DominatedError,
    EvPlayerOne,
    Exploitation,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Exploitability => "exploitability",
            Metric::SquaredError => "sqre",
            Metric::DominatedError => "dom_e",
            Metric::EvPlayerOne => "ev_p1",
            Metric::Exploitation => "exploitation",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One checkpoint row.
#[derive(Clone, Debug)]
pub struct RunRow {
    pub iteration: u64,
    pub metric: Metric,
    pub value: f64,
    pub elapsed_ms: u64,
    pub nodes_visited: u64,
}

/// A run's checkpoint series. Iterations are strictly increasing within one
/// metric series.
#[derive(Clone, Debug, Default)]
pub struct RunRecord {
    pub rows: Vec<RunRow>,
}

impl RunRecord {
    pub fn new() -> RunRecord {
        RunRecord::default()
    }

    pub fn push(&mut self, row: RunRow) {
        debug_assert!(
            self.rows
                .iter()
                .rev()
                .find(|r| r.metric == row.metric)
                .is_none_or(|last| last.iteration < row.iteration),
            "iterations must increase within a metric series"
        );
        self.rows.push(row);
    }

    /// Rows of one metric, in insertion order.
    pub fn series(&self, metric: Metric) -> Vec<&RunRow> {
        self.rows.iter().filter(|r| r.metric == metric).collect()
    }
}
