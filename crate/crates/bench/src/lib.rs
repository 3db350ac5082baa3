//! Shared inputs for the benchmarks.

use std::path::PathBuf;

use pgf_core::pc::{parse_pc_file, PcRecord};

/// The repository's dataset of the given order.
pub fn dataset(order: u32) -> Vec<PcRecord> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../data/order{order}.pc"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_pc_file(&text).expect("dataset parses")
}
