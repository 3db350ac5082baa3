//! Acceptance criteria, one printed line per criterion.
//!
//! Datasets are read from the repository's `data/` directory. Set
//! `PGF_LONG=1` to include the order 128 and 729 censuses.

use std::path::PathBuf;

use pgf_core::claims::{all_ok, run_claims, Status, VerifyOptions};

#[test]
fn acceptance_criteria() {
    let opts = VerifyOptions {
        data_dir: Some(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")),
        long: std::env::var_os("PGF_LONG").is_some(),
        ..VerifyOptions::default()
    };
    let results = run_claims(&opts);
    for r in &results {
        println!("{r}");
    }
    let numbers: Vec<u8> = results.iter().map(|r| r.number).collect();
    assert_eq!(numbers, (1..=8).collect::<Vec<_>>());
    // the repository ships every dataset the default gate needs
    for r in results.iter().filter(|r| r.number <= 7) {
        assert_ne!(r.status, Status::Skipped, "{r}");
    }
    assert!(all_ok(&results), "a criterion failed");
}
