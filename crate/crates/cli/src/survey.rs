//! Survey over a range of `ell` with an append-only JSON-lines cache.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use iwalambda::pipeline::{iterate_n, verify_report, LambdaTrace, Verdict};
use iwalambda::quadring::primitive_root;
use iwalambda::{arith, Error};
use serde::{Deserialize, Serialize};

use crate::{exit_code, SurveyArgs, EXIT_INTERNAL, EXIT_PRECONDITION};

pub const CACHE_ENV: &str = "IWALAMBDA_CACHE";
const DEFAULT_CACHE: &str = "iwalambda-survey.jsonl";

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurveyKey {
    #[serde(rename = "D")]
    pub d: i64,
    pub p: u64,
    pub n_max: u32,
    pub version: String,
    pub g: u64,
    pub fast_inert: bool,
    pub half_k: bool,
    pub half_i: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub key: SurveyKey,
    pub ell: i64,
    /// `computed`, `skipped:<reason>` or `error:<message>`.
    pub status: String,
    pub trace: Option<LambdaTrace>,
    pub elapsed_ms: u64,
}

impl SurveyRecord {
    fn verdict(&self) -> Option<Verdict> {
        self.trace.as_ref().map(|t| t.verdict)
    }

    fn split(&self) -> Option<(u64, u64)> {
        self.trace.as_ref()?.last()?.split.as_ref()?.values
    }
}

fn cache_path(args: &SurveyArgs) -> PathBuf {
    args.out
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE))
}

fn load(path: &Path) -> Result<Vec<SurveyRecord>, Error> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => {
            return Err(Error::OutOfDomain(format!(
                "cannot read {}: {e}",
                path.display()
            )))
        }
    };
    let mut out = Vec::new();
    for (no, line) in BufReader::new(file).lines().enumerate() {
        let line =
            line.map_err(|e| Error::OutOfDomain(format!("cannot read {}: {e}", path.display())))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| {
            Error::OutOfDomain(format!(
                "{}:{}: not a survey record: {e}",
                path.display(),
                no + 1
            ))
        })?;
        out.push(record);
    }
    Ok(out)
}

fn key_for(ell: i64, args: &SurveyArgs) -> SurveyKey {
    SurveyKey {
        d: 4 * ell,
        p: args.p,
        n_max: args.n_max,
        version: iwalambda::VERSION.to_string(),
        g: args.pipeline.g.unwrap_or_else(|| primitive_root(args.p)),
        fast_inert: args.pipeline.fast_inert,
        half_k: args.pipeline.half_k,
        half_i: args.pipeline.half_i,
    }
}

fn compute(ell: i64, key: SurveyKey, args: &SurveyArgs) -> SurveyRecord {
    let start = Instant::now();
    let outcome = if ell <= 0 || ell % 4 != 3 {
        Err(iwalambda::Precondition::NotEllThreeModFour(ell).into())
    } else {
        iterate_n(4 * ell, args.p, args.n_max, &args.pipeline.options()).and_then(|t| {
            if args.verify {
                t.trace
                    .iter()
                    .try_for_each(|r| verify_report(r).map(drop))?;
            }
            Ok(t)
        })
    };
    let (status, trace) = match outcome {
        Ok(t) => ("computed".to_string(), Some(t)),
        Err(e) if exit_code(&e) == EXIT_PRECONDITION => (format!("skipped:{e}"), None),
        Err(e) => (format!("error:{e}"), None),
    };
    SurveyRecord {
        key,
        ell,
        status,
        trace,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

pub fn run(args: &SurveyArgs) -> Result<ExitCode, Error> {
    if args.p == 2 || !arith::is_prime(args.p) {
        return Err(iwalambda::Precondition::NotOddPrime(args.p).into());
    }
    let path = cache_path(args);
    let cached = load(&path)?;
    let known: HashSet<&SurveyKey> = cached.iter().map(|r| &r.key).collect();
    let io_err =
        |e: std::io::Error| Error::OutOfDomain(format!("cannot write {}: {e}", path.display()));
    let mut writer = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&path)
        .map_err(io_err)?;
    let mut fresh = Vec::new();
    for ell in args.from..=args.to {
        let key = key_for(ell, args);
        if known.contains(&key) {
            continue;
        }
        let record = compute(ell, key, args);
        let line = serde_json::to_string(&record).expect("records serialize");
        writeln!(writer, "{line}").map_err(io_err)?;
        fresh.push(record);
    }
    writer.flush().map_err(io_err)?;

    // every record for this range and configuration, cached or new
    let wanted: HashSet<SurveyKey> = (args.from..=args.to)
        .map(|ell| key_for(ell, args))
        .collect();
    let mut records: Vec<&SurveyRecord> = cached
        .iter()
        .chain(&fresh)
        .filter(|r| wanted.contains(&r.key))
        .collect();
    records.sort_by_key(|r| r.ell);
    print!("{}", summary(&records, fresh.len(), &path));
    if let Some(csv_path) = &args.csv {
        write_csv(csv_path, &records)?;
    }
    let errors = records.iter().any(|r| r.status.starts_with("error:"));
    Ok(if errors {
        ExitCode::from(EXIT_INTERNAL)
    } else {
        ExitCode::SUCCESS
    })
}

fn verdict_text(v: Option<Verdict>) -> String {
    match v {
        Some(Verdict::Exact(x)) => format!("exact {x}"),
        Some(Verdict::LowerBound(x)) => format!(">= {x}"),
        Some(Verdict::Inconclusive) => "inconclusive".to_string(),
        None => String::new(),
    }
}

fn summary(records: &[&SurveyRecord], fresh: usize, path: &Path) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let computed: Vec<_> = records.iter().filter(|r| r.status == "computed").collect();
    writeln!(
        out,
        "{} records ({} new, {} computed, {} skipped) in {}",
        records.len(),
        fresh,
        computed.len(),
        records.len() - computed.len(),
        path.display()
    )
    .unwrap();
    if computed.is_empty() {
        return out;
    }
    writeln!(out, "{:>6}  {:<12}  {:<10}", "ell", "sum", "split").unwrap();
    for r in computed {
        let split = r
            .split()
            .map(|(a, b)| format!("({a}, {b})"))
            .unwrap_or_default();
        writeln!(
            out,
            "{:>6}  {:<12}  {:<10}",
            r.ell,
            verdict_text(r.verdict()),
            split
        )
        .unwrap();
    }
    for r in records.iter().filter(|r| r.status.starts_with("error:")) {
        writeln!(out, "ell = {}: {}", r.ell, r.status).unwrap();
    }
    out
}

#[derive(Serialize)]
struct CsvRow<'a> {
    ell: i64,
    #[serde(rename = "D")]
    d: i64,
    p: u64,
    n_max: u32,
    status: &'a str,
    levels: usize,
    valuation: String,
    verdict: String,
    lambda_1: Option<u64>,
    lambda_2: Option<u64>,
}

fn write_csv(path: &Path, records: &[&SurveyRecord]) -> Result<(), Error> {
    let err = |e: csv::Error| Error::OutOfDomain(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    for r in records {
        let last = r.trace.as_ref().and_then(|t| t.last());
        let split = r.split();
        w.serialize(CsvRow {
            ell: r.ell,
            d: r.key.d,
            p: r.key.p,
            n_max: r.key.n_max,
            status: &r.status,
            levels: r.trace.as_ref().map_or(0, |t| t.trace.len()),
            valuation: last.map(|l| l.valuation.to_string()).unwrap_or_default(),
            verdict: verdict_text(r.verdict()),
            lambda_1: split.map(|s| s.0),
            lambda_2: split.map(|s| s.1),
        })
        .map_err(err)?;
    }
    w.flush()
        .map_err(|e| Error::OutOfDomain(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_cache_is_empty() {
        let dir = std::env::temp_dir().join("iwalambda-no-such-dir");
        assert_eq!(load(&dir.join("none.jsonl")), Ok(Vec::new()));
    }

    #[test]
    fn record_round_trip() {
        let record = SurveyRecord {
            key: SurveyKey {
                d: 20,
                p: 3,
                n_max: 2,
                version: iwalambda::VERSION.to_string(),
                g: 2,
                fast_inert: false,
                half_k: false,
                half_i: false,
            },
            ell: 5,
            status: "skipped:5 is not a prime congruent to 3 mod 4".into(),
            trace: None,
            elapsed_ms: 0,
        };
        let line = serde_json::to_string(&record).unwrap();
        assert_eq!(serde_json::from_str::<SurveyRecord>(&line).unwrap(), record);
        assert_eq!(verdict_text(Some(Verdict::LowerBound(6))), ">= 6");
    }
}
