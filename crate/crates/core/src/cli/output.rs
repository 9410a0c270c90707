//! CSV and JSON writers for experiment results.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::montecarlo::{ExperimentConfig, ExperimentRun, SummaryStats};

pub const RECORD_HEADER: &str = "algorithm,n,p,alpha,beta,replicate,seed,rounds,completed,lower_bound";
pub const SUMMARY_HEADER: &str =
    "algorithm,n,p,alpha,beta,count,censored,min,q1,median,q3,max,mean";

/// One per-replicate row. Empty `rounds` means censored; empty `beta` means
/// a relay algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub algorithm: String,
    pub n: usize,
    pub p: f64,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub replicate: usize,
    pub seed: u64,
    pub rounds: Option<u32>,
    pub completed: u8,
    pub lower_bound: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub algorithm: String,
    pub n: usize,
    pub p: f64,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub count: usize,
    pub censored: usize,
    pub min: Option<f64>,
    pub q1: Option<f64>,
    pub median: Option<f64>,
    pub q3: Option<f64>,
    pub max: Option<f64>,
    pub mean: Option<f64>,
}

fn beta_of(cfg: &ExperimentConfig) -> Option<f64> {
    cfg.algorithm.is_rlnc().then_some(cfg.beta)
}

pub fn output_records(run: &ExperimentRun) -> Vec<OutputRecord> {
    let cfg = &run.config;
    run.records
        .iter()
        .enumerate()
        .map(|(i, r)| OutputRecord {
            algorithm: cfg.algorithm.name().to_string(),
            n: cfg.n,
            p: cfg.p,
            alpha: cfg.alpha,
            beta: beta_of(cfg),
            replicate: i,
            seed: r.seed,
            rounds: r.rounds_to_allcast,
            completed: u8::from(r.completed),
            lower_bound: r.lower_bound,
        })
        .collect()
}

pub fn summary_record(run: &ExperimentRun) -> SummaryRecord {
    let cfg = &run.config;
    let s: Option<&SummaryStats> = run.summary.as_ref();
    let censored = run.records.iter().filter(|r| !r.completed).count();
    SummaryRecord {
        algorithm: cfg.algorithm.name().to_string(),
        n: cfg.n,
        p: cfg.p,
        alpha: cfg.alpha,
        beta: beta_of(cfg),
        count: s.map_or(0, |s| s.count),
        censored,
        min: s.map(|s| s.min),
        q1: s.map(|s| s.q1),
        median: s.map(|s| s.median),
        q3: s.map(|s| s.q3),
        max: s.map(|s| s.max),
        mean: s.map(|s| s.mean),
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(true).from_writer(out)
}

pub fn write_records_csv<W: Write>(out: W, run: &ExperimentRun) -> Result<(), csv::Error> {
    let records = output_records(run);
    let mut w = csv_writer(out);
    if records.is_empty() {
        w.write_record(RECORD_HEADER.split(','))?;
    }
    for r in &records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv<W: Write>(out: W, runs: &[ExperimentRun]) -> Result<(), csv::Error> {
    let mut w = csv_writer(out);
    if runs.is_empty() {
        w.write_record(SUMMARY_HEADER.split(','))?;
    }
    for run in runs {
        w.serialize(summary_record(run))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonOutput<'a> {
    records: Vec<OutputRecord>,
    summary: SummaryRecord,
    config: &'a ExperimentConfig,
}

pub fn write_json<W: Write>(mut out: W, run: &ExperimentRun) -> std::io::Result<()> {
    let doc = JsonOutput {
        records: output_records(run),
        summary: summary_record(run),
        config: &run.config,
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    Ok(())
}
