//! Fixture loading shared by the benches.

use std::fs::File;
use std::path::PathBuf;

use crosscap_core::census::{ingest_csv, CensusRecord};

/// Records from `data/census/<file>` with at most `max_crossings` crossings.
pub fn census(file: &str, max_crossings: usize) -> Vec<CensusRecord> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/census")
        .join(file);
    let f = File::open(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    ingest_csv(f)
        .expect("census fixture parses")
        .records
        .into_iter()
        .filter(|r| r.gauss.crossing_count() <= max_crossings)
        .collect()
}
