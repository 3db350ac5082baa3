//! Classifying every group of a dataset.
//!
//! Each group is classified independently on a worker pool. Finished records
//! are appended, one JSON object per line, to a cache file so an interrupted
//! run picks up where it stopped; reports sort records by group id, so the
//! output does not depend on scheduling.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GroupError, Result};
use crate::family::{self, Screen};
use crate::ops;
use crate::pc::{GroupId, PcRecord};
use crate::Limits;

/// Environment variable naming the cache directory when no flag is given.
pub const CACHE_ENV: &str = "PGF_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub order: u64,
    pub index: u32,
    pub provenance: String,
    pub rank: u32,
    pub dl: u32,
    pub semiabelian: bool,
    pub screen: Screen,
    pub elapsed_ms: u64,
}

impl CensusRecord {
    pub fn group_id(&self) -> GroupId {
        GroupId {
            order: self.order as u128,
            index: self.index,
        }
    }

    /// The record-level invariants: semiabelian groups have `dl ≤ rank`, and
    /// a negative screen means not semiabelian.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        if self.semiabelian && self.dl > self.rank {
            return Err(format!("{}: semiabelian but dl {} > rank {}", self.group_id(), self.dl, self.rank));
        }
        if self.screen == Screen::DefinitelyNotMember && self.semiabelian {
            return Err(format!("{}: screened out but judged semiabelian", self.group_id()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub order: u64,
    pub index: u32,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusSummary {
    pub order: u64,
    pub prime: u32,
    pub total: usize,
    pub non_semiabelian: usize,
    pub wall_time_ms: u64,
    pub failures: Vec<Failure>,
    /// Records taken from the cache rather than computed in this run.
    #[serde(skip)]
    pub resumed: usize,
}

#[derive(Clone, Debug)]
pub struct CensusOutcome {
    pub summary: CensusSummary,
    pub records: Vec<CensusRecord>,
}

impl CensusOutcome {
    pub fn is_clean(&self) -> bool {
        self.summary.failures.is_empty()
    }
}

#[derive(Clone, Debug, Default)]
pub struct CensusOptions {
    pub limits: Limits,
    /// Worker count; `None` uses the available parallelism.
    pub jobs: Option<usize>,
    /// Directory holding the append-only cache.
    pub cache_dir: Option<PathBuf>,
}

/// Classifies one group. Errors are reported per group by the caller.
pub fn classify(rec: &PcRecord, limits: &Limits) -> Result<CensusRecord> {
    let start = Instant::now();
    let p = &rec.presentation;
    let prime = p.prime() as u64;
    let g = p.to_perm_group(limits)?;
    if Some(g.order()) != p.order() {
        return Err(GroupError::Census(format!(
            "presentation order {:?} but permutation order {}",
            p.order(),
            g.order()
        )));
    }
    let rank = ops::rank(&g, prime)?;
    let dl = ops::derived_length(&g)?.ok_or_else(|| GroupError::Census("derived series does not terminate".into()))?;
    let screen = family::dl_rank_screen(&g, prime)?;
    let verdict = family::is_semiabelian(&g, limits)?;
    if verdict.flag {
        family::validate_witness(&g, &verdict.witness, limits)
            .map_err(|e| GroupError::Census(format!("witness failed validation: {e}")))?;
    }
    let out = CensusRecord {
        order: u64::try_from(rec.id.order).map_err(|_| GroupError::Census("order too large".into()))?,
        index: rec.id.index,
        provenance: rec.provenance.clone().unwrap_or_default(),
        rank,
        dl: dl as u32,
        semiabelian: verdict.flag,
        screen,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    out.check_invariants().map_err(GroupError::Census)?;
    Ok(out)
}

pub fn cache_path(dir: &Path, order: u64) -> PathBuf {
    dir.join(format!("census-{order}.jsonl"))
}

/// Records already in the cache. Torn lines left by interrupted writes are
/// skipped; anything else unparseable is an error.
pub fn load_cache(path: &Path) -> Result<Vec<CensusRecord>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let lines: Vec<String> = BufReader::new(File::open(path)?).lines().collect::<std::io::Result<_>>()?;
    let mut out = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<CensusRecord>(line) {
            Ok(r) => out.push(r),
            Err(e) if e.is_eof() => {}
            Err(e) => {
                return Err(GroupError::Census(format!("{}:{}: bad cache line: {e}", path.display(), i + 1)));
            }
        }
    }
    Ok(out)
}

/// Runs the census over one dataset. Parse errors are the caller's; every
/// per-group problem ends up in `summary.failures`.
pub fn run_census(dataset: &[PcRecord], opts: &CensusOptions) -> Result<CensusOutcome> {
    let start = Instant::now();
    let first = dataset
        .first()
        .ok_or_else(|| GroupError::Census("empty dataset".into()))?;
    let (order, prime) = (first.id.order, first.presentation.prime());
    if let Some(r) = dataset.iter().find(|r| r.id.order != order || r.presentation.prime() != prime) {
        return Err(GroupError::Census(format!("{} does not match order {order} and prime {prime}", r.id)));
    }
    let order = u64::try_from(order).map_err(|_| GroupError::Census("order too large".into()))?;

    let mut done: Vec<CensusRecord> = Vec::new();
    let mut writer = None;
    if let Some(dir) = &opts.cache_dir {
        fs::create_dir_all(dir)?;
        let path = cache_path(dir, order);
        let cached = load_cache(&path)?;
        // keep only entries matching this dataset's ids and provenance
        for r in cached {
            let matches = dataset.iter().any(|d| {
                d.id == r.group_id() && d.provenance.clone().unwrap_or_default() == r.provenance
            });
            if matches && !done.iter().any(|x| x.index == r.index) {
                done.push(r);
            }
        }
        let mut file = OpenOptions::new().create(true).append(true).open(&path)?;
        // a torn line from an interrupted run must not swallow the next record
        if fs::read(&path)?.last().is_some_and(|&b| b != b'\n') {
            file.write_all(b"\n")?;
        }
        writer = Some(Mutex::new(file));
    }
    let resumed = done.len();
    let todo: Vec<&PcRecord> = dataset
        .iter()
        .filter(|d| !done.iter().any(|r| r.index == d.id.index))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.unwrap_or(0))
        .build()
        .map_err(|e| GroupError::Census(e.to_string()))?;
    let results: Vec<std::result::Result<CensusRecord, Failure>> = pool.install(|| {
        todo.par_iter()
            .map(|d| {
                let r = classify(d, &opts.limits).map_err(|e| Failure {
                    order,
                    index: d.id.index,
                    error: e.to_string(),
                })?;
                if let Some(w) = &writer {
                    let line = serde_json::to_string(&r).expect("records serialize") + "\n";
                    let mut f = w.lock().expect("cache writer lock");
                    f.write_all(line.as_bytes())
                        .and_then(|_| f.flush())
                        .map_err(|e| Failure {
                            order,
                            index: d.id.index,
                            error: format!("cache write: {e}"),
                        })?;
                }
                Ok(r)
            })
            .collect()
    });

    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(rec) => done.push(rec),
            Err(f) => failures.push(f),
        }
    }
    // cached records are re-checked too
    for r in &done {
        if let Err(e) = r.check_invariants() {
            failures.push(Failure {
                order,
                index: r.index,
                error: e,
            });
        }
    }
    done.sort_by_key(|r| r.index);
    failures.sort_by_key(|f| f.index);
    failures.dedup();
    let summary = CensusSummary {
        order,
        prime,
        total: done.len(),
        non_semiabelian: done.iter().filter(|r| !r.semiabelian).count(),
        wall_time_ms: start.elapsed().as_millis() as u64,
        failures,
        resumed,
    };
    Ok(CensusOutcome { summary, records: done })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Serializes a census. With `timings` off, elapsed and wall times are
/// written as 0, so reruns over the same dataset give identical bytes.
pub fn emit_report(outcome: &CensusOutcome, format: ReportFormat, timings: bool) -> Vec<u8> {
    let mut records = outcome.records.clone();
    records.sort_by_key(|r| (r.order, r.index));
    let mut summary = outcome.summary.clone();
    if !timings {
        summary.wall_time_ms = 0;
        for r in &mut records {
            r.elapsed_ms = 0;
        }
    }
    match format {
        ReportFormat::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                summary: &'a CensusSummary,
                records: &'a [CensusRecord],
            }
            let mut out = serde_json::to_vec_pretty(&Report {
                summary: &summary,
                records: &records,
            })
            .expect("report serializes");
            out.push(b'\n');
            out
        }
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(["order", "index", "provenance", "rank", "dl", "semiabelian", "screen", "elapsed_ms"])
                .expect("writing to memory");
            for r in &records {
                w.serialize(r).expect("writing to memory");
            }
            w.into_inner().expect("writing to memory")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::SMALL_GROUPS_PC;
    use crate::pc::parse_pc_file;

    fn order8() -> Vec<PcRecord> {
        parse_pc_file(SMALL_GROUPS_PC)
            .unwrap()
            .into_iter()
            .filter(|r| r.id.order == 8)
            .collect()
    }

    #[test]
    fn fixtures_of_order_8() {
        let out = run_census(&order8(), &CensusOptions::default()).unwrap();
        assert!(out.is_clean());
        assert_eq!((out.summary.total, out.summary.non_semiabelian), (5, 0));
        let ranks: Vec<u32> = out.records.iter().map(|r| r.rank).collect();
        assert_eq!(ranks, vec![1, 2, 2, 2, 3]);
        let csv = emit_report(&out, ReportFormat::Csv, true);
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 6);
    }

    #[test]
    fn empty_csv_is_header_only() {
        let out = CensusOutcome {
            summary: CensusSummary {
                order: 8,
                prime: 2,
                total: 0,
                non_semiabelian: 0,
                wall_time_ms: 0,
                failures: Vec::new(),
                resumed: 0,
            },
            records: Vec::new(),
        };
        let csv = String::from_utf8(emit_report(&out, ReportFormat::Csv, false)).unwrap();
        assert_eq!(csv, "order,index,provenance,rank,dl,semiabelian,screen,elapsed_ms\n");
    }

    #[test]
    fn mixed_orders_are_rejected() {
        let all = parse_pc_file(SMALL_GROUPS_PC).unwrap();
        assert!(run_census(&all, &CensusOptions::default()).is_err());
    }

    #[test]
    fn resume_gives_identical_reports() {
        let data = order8();
        let plain = run_census(&data, &CensusOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let opts = CensusOptions {
            cache_dir: Some(dir.path().to_path_buf()),
            jobs: Some(2),
            ..Default::default()
        };
        // "interrupt" after two groups, with a torn line at the end
        run_census(&data[..2], &opts).unwrap();
        let path = cache_path(dir.path(), 8);
        let mut f = OpenOptions::new().append(true).open(&path).unwrap();
        f.write_all(b"{\"order\":8,\"ind").unwrap();
        drop(f);
        let resumed = run_census(&data, &opts).unwrap();
        assert_eq!(resumed.summary.resumed, 2);
        for fmt in [ReportFormat::Json, ReportFormat::Csv] {
            assert_eq!(emit_report(&plain, fmt, false), emit_report(&resumed, fmt, false));
        }
        // a third run computes nothing
        assert_eq!(run_census(&data, &opts).unwrap().summary.resumed, 5);
    }

    #[test]
    fn json_summary_block() {
        let out = run_census(&order8(), &CensusOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&emit_report(&out, ReportFormat::Json, false)).unwrap();
        assert_eq!(v["summary"]["total"], 5);
        assert_eq!(v["summary"]["non_semiabelian"], 0);
        assert_eq!(v["records"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn invariant_violations_are_caught() {
        let bad = CensusRecord {
            order: 8,
            index: 1,
            provenance: String::new(),
            rank: 1,
            dl: 2,
            semiabelian: true,
            screen: Screen::DefinitelyNotMember,
            elapsed_ms: 0,
        };
        assert!(bad.check_invariants().is_err());
    }
}
