//! Aggregation of sweep outputs into CSV tables: final-metric five-number
//! summaries, per-iteration quartile curves, and the fraction of runs that
//! end with the optimum as the most probable feasible solution.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::Result;
use crate::metrics::EvaluationRecord;

use super::run::RunResult;
use super::spec::Algorithm;
use super::sweep::{load_manifest, load_result, RunStatus};

/// Fields a report can group on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupField {
    Problem,
    Algorithm,
    Method,
    N,
    Depth,
}

impl GroupField {
    pub const ALL: [GroupField; 5] = [
        GroupField::Problem,
        GroupField::Algorithm,
        GroupField::Method,
        GroupField::N,
        GroupField::Depth,
    ];

    fn header(self) -> &'static str {
        match self {
            GroupField::Problem => "problem",
            GroupField::Algorithm => "algorithm",
            GroupField::Method => "method",
            GroupField::N => "n",
            GroupField::Depth => "depth",
        }
    }

    fn value(self, result: &RunResult) -> String {
        let spec = &result.spec;
        match self {
            GroupField::Problem => spec.problem_class.name().to_string(),
            GroupField::Algorithm => spec.algorithm.name().to_string(),
            GroupField::Method => spec.method.name().to_string(),
            GroupField::N => spec.n_vars.to_string(),
            GroupField::Depth => match spec.algorithm {
                Algorithm::Qaoa => spec.qaoa_depth.to_string(),
                Algorithm::Vqe => "-".to_string(),
            },
        }
    }
}

impl std::str::FromStr for GroupField {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "problem" => Ok(GroupField::Problem),
            "algorithm" => Ok(GroupField::Algorithm),
            "method" => Ok(GroupField::Method),
            "n" => Ok(GroupField::N),
            "depth" => Ok(GroupField::Depth),
            other => Err(crate::error::Error::InvalidParameter(format!(
                "unknown group field '{other}'"
            ))),
        }
    }
}

/// Linear-interpolation quantile of a sorted slice.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
    }
}

fn five_number(values: &mut Vec<f64>) -> Option<[f64; 5]> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    Some([
        values[0],
        quantile(values, 0.25),
        quantile(values, 0.5),
        quantile(values, 0.75),
        values[values.len() - 1],
    ])
}

fn metric_value(record: &EvaluationRecord, metric: &str) -> Option<f64> {
    match metric {
        "approximation_ratio" => record.approximation_ratio,
        "optimal_mass_fraction" => record.optimal_mass_fraction,
        "in_constraint_probability" => Some(record.in_constraint_probability),
        "energy" => Some(record.energy),
        "in_constraint_energy" => Some(record.in_constraint_energy),
        _ => None,
    }
}

const SUMMARY_METRICS: [&str; 4] = [
    "approximation_ratio",
    "in_constraint_probability",
    "optimal_mass_fraction",
    "energy",
];
const QUARTILE_METRICS: [&str; 3] = [
    "approximation_ratio",
    "optimal_mass_fraction",
    "in_constraint_probability",
];

/// Generate `summary.csv`, `quartiles.csv`, and `modal.csv` under
/// `out_dir` from the sweep results in `dir`. Returns warnings for groups
/// that produced no usable data.
pub fn report(dir: &Path, out_dir: &Path, group_by: &[GroupField]) -> Result<Vec<String>> {
    std::fs::create_dir_all(out_dir)?;
    let manifest = load_manifest(dir)?;
    let mut warnings = Vec::new();

    let mut groups: BTreeMap<Vec<String>, Vec<RunResult>> = BTreeMap::new();
    for entry in &manifest.entries {
        match entry.status {
            RunStatus::Completed | RunStatus::Cached => {
                let result = load_result(dir, &entry.hash)?;
                let key: Vec<String> = group_by.iter().map(|f| f.value(&result)).collect();
                groups.entry(key).or_default().push(result);
            }
            RunStatus::Failed => {
                warnings.push(format!(
                    "run {} failed and is omitted: {}",
                    entry.hash,
                    entry.error.as_deref().unwrap_or("unknown error")
                ));
            }
        }
    }
    if groups.is_empty() {
        warnings.push("no completed runs found; reports are empty".to_string());
    }

    let header_prefix: Vec<&str> = group_by.iter().map(|f| f.header()).collect();

    // (a) five-number summaries of the final metrics
    {
        let mut w = csv::Writer::from_path(out_dir.join("summary.csv"))?;
        let mut header = header_prefix.clone();
        header.extend(["metric", "count", "min", "q1", "median", "q3", "max"]);
        w.write_record(&header)?;
        for (key, results) in &groups {
            for metric in SUMMARY_METRICS {
                let mut values: Vec<f64> = results
                    .iter()
                    .filter_map(|r| metric_value(&r.final_record, metric))
                    .collect();
                let count = values.len();
                match five_number(&mut values) {
                    Some(summary) => {
                        let mut row = key.clone();
                        row.push(metric.to_string());
                        row.push(count.to_string());
                        row.extend(summary.iter().map(|v| format!("{v}")));
                        w.write_record(&row)?;
                    }
                    None => warnings.push(format!(
                        "group {key:?} has no defined {metric}; row omitted"
                    )),
                }
            }
        }
        w.flush()?;
    }

    // (b) per-iteration quartile curves, padding shorter traces with their
    // final (best) record
    {
        let mut w = csv::Writer::from_path(out_dir.join("quartiles.csv"))?;
        let mut header = header_prefix.clone();
        header.extend(["metric", "iteration", "q1", "median", "q3"]);
        w.write_record(&header)?;
        for (key, results) in &groups {
            let max_len = results.iter().map(|r| r.records.len()).max().unwrap_or(0);
            for metric in QUARTILE_METRICS {
                for it in 1..=max_len {
                    let mut values: Vec<f64> = results
                        .iter()
                        .filter_map(|r| {
                            let record = r
                                .records
                                .get(it - 1)
                                .unwrap_or(&r.final_record);
                            metric_value(record, metric)
                        })
                        .collect();
                    if let Some(summary) = five_number(&mut values) {
                        let mut row = key.clone();
                        row.push(metric.to_string());
                        row.push(it.to_string());
                        row.push(format!("{}", summary[1]));
                        row.push(format!("{}", summary[2]));
                        row.push(format!("{}", summary[3]));
                        w.write_record(&row)?;
                    }
                }
            }
        }
        w.flush()?;
    }

    // (c) fraction of runs whose final state is modal on the optimum
    {
        let mut w = csv::Writer::from_path(out_dir.join("modal.csv"))?;
        let mut header = header_prefix.clone();
        header.extend(["count", "optimum_modal_fraction"]);
        w.write_record(&header)?;
        for (key, results) in &groups {
            let modal = results.iter().filter(|r| r.final_optimum_modal).count();
            let mut row = key.clone();
            row.push(results.len().to_string());
            row.push(format!("{}", modal as f64 / results.len() as f64));
            w.write_record(&row)?;
        }
        w.flush()?;
    }

    Ok(warnings)
}
