//! CSV and file-path plumbing shared by the subcommands.

use crate::CliError;
use std::io::Write;
use std::path::{Path, PathBuf};
use zerosum_core::record::RunRecord;

pub const RUN_CSV_HEADER: &str = "iteration,metric,value,elapsed_ms,nodes_visited,seed,game,algo";

/// Directory for derived output names: --out-dir, else ZEROSUM_OUT_DIR,
/// else the working directory.
pub fn out_dir(flag: &Option<PathBuf>) -> PathBuf {
    flag.clone()
        .or_else(|| std::env::var_os("ZEROSUM_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// `kuhn_mccfr_seed7` style stem with filesystem-safe punctuation.
pub fn run_stem(game: &str, algo: &str, seed: u64) -> String {
    format!("{}_{algo}_seed{seed}", game.replace([':', 'x'], "-"))
}

pub fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Renders a checkpoint record in the long CSV schema.
pub fn render_run_csv(record: &RunRecord, seed: u64, game: &str, algo: &str) -> Vec<u8> {
    let mut out = Vec::new();
    writeln!(out, "{RUN_CSV_HEADER}").unwrap();
    for row in &record.rows {
        writeln!(
            out,
            "{},{},{:.9e},{},{},{},{},{}",
            row.iteration, row.metric, row.value, row.elapsed_ms, row.nodes_visited, seed, game, algo
        )
        .unwrap();
    }
    out
}

pub fn save_strategy(
    path: &Path,
    profile: &zerosum_core::strategy::StrategyProfile,
) -> Result<(), CliError> {
    let mut buf = Vec::new();
    zerosum_core::strategy::write_profile(&mut buf, profile)
        .map_err(|e| CliError::Io(e.to_string()))?;
    write_file(path, &buf)
}
