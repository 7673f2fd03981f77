//! Parallel, resumable execution of run lists. Each run lands in
//! `runs/<hash>.json` under the output directory; a manifest records the
//! run set and per-run status. Timings go to a separate file so result and
//! manifest bytes stay identical across reruns.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::run::{run_single, RunResult};
use super::spec::RunSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    Cached,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub hash: String,
    pub spec: RunSpec,
    pub status: RunStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOutcome {
    pub total: usize,
    pub completed: usize,
    pub cached: usize,
    pub failed: usize,
}

impl SweepOutcome {
    pub fn all_succeeded(&self) -> bool {
        self.failed == 0
    }
}

pub fn runs_dir(out_dir: &Path) -> PathBuf {
    out_dir.join("runs")
}

pub fn run_path(out_dir: &Path, hash: &str) -> PathBuf {
    runs_dir(out_dir).join(format!("{hash}.json"))
}

pub fn manifest_path(out_dir: &Path) -> PathBuf {
    out_dir.join("manifest.json")
}

/// Execute every spec, up to `parallelism` at a time. Completed runs
/// (identified by spec content hash) are skipped; per-run failures are
/// recorded in the manifest and never abort the sweep.
pub fn sweep(specs: &[RunSpec], parallelism: usize, out_dir: &Path) -> Result<SweepOutcome> {
    fs::create_dir_all(runs_dir(out_dir))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| crate::error::Error::InvalidParameter(e.to_string()))?;

    let results: Vec<(ManifestEntry, f64)> = pool.install(|| {
        specs
            .par_iter()
            .map(|spec| {
                let hash = spec.content_hash();
                let path = run_path(out_dir, &hash);
                if path.exists() {
                    return (
                        ManifestEntry {
                            hash,
                            spec: spec.clone(),
                            status: RunStatus::Cached,
                            error: None,
                        },
                        0.0,
                    );
                }
                match run_single(spec).and_then(|result| {
                    write_result(&path, &result)?;
                    Ok(result.wall_time)
                }) {
                    Ok(wall) => (
                        ManifestEntry {
                            hash,
                            spec: spec.clone(),
                            status: RunStatus::Completed,
                            error: None,
                        },
                        wall,
                    ),
                    Err(e) => (
                        ManifestEntry {
                            hash,
                            spec: spec.clone(),
                            status: RunStatus::Failed,
                            error: Some(e.to_string()),
                        },
                        0.0,
                    ),
                }
            })
            .collect()
    });

    let mut entries: Vec<ManifestEntry> = results.iter().map(|(e, _)| e.clone()).collect();
    entries.sort_by(|a, b| a.hash.cmp(&b.hash));
    let manifest = Manifest { entries };
    fs::write(
        manifest_path(out_dir),
        serde_json::to_string_pretty(&manifest)?,
    )?;

    // timings are informational only and excluded from determinism checks
    let mut timing_rows: Vec<(String, f64)> = results
        .iter()
        .filter(|(e, _)| e.status == RunStatus::Completed)
        .map(|(e, w)| (e.hash.clone(), *w))
        .collect();
    timing_rows.sort_by(|a, b| a.0.cmp(&b.0));
    let mut timings = String::from("hash,wall_time_s\n");
    for (hash, wall) in timing_rows {
        timings.push_str(&format!("{hash},{wall:.6}\n"));
    }
    fs::write(out_dir.join("timings.csv"), timings)?;

    let outcome = SweepOutcome {
        total: manifest.entries.len(),
        completed: manifest
            .entries
            .iter()
            .filter(|e| e.status == RunStatus::Completed)
            .count(),
        cached: manifest
            .entries
            .iter()
            .filter(|e| e.status == RunStatus::Cached)
            .count(),
        failed: manifest
            .entries
            .iter()
            .filter(|e| e.status == RunStatus::Failed)
            .count(),
    };
    Ok(outcome)
}

fn write_result(path: &Path, result: &RunResult) -> Result<()> {
    // write-then-rename so interrupted sweeps never leave half files that
    // resumption would mistake for completed runs
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_string(result)?)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_manifest(out_dir: &Path) -> Result<Manifest> {
    Ok(serde_json::from_str(&fs::read_to_string(manifest_path(
        out_dir,
    ))?)?)
}

pub fn load_result(out_dir: &Path, hash: &str) -> Result<RunResult> {
    Ok(serde_json::from_str(&fs::read_to_string(run_path(
        out_dir, hash,
    ))?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::spec::{Algorithm, Method};
    use crate::instances::ProblemClass;

    fn tiny_specs() -> Vec<RunSpec> {
        [Method::PenaltyEnergy, Method::IcEnergyBounded]
            .into_iter()
            .flat_map(|method| {
                (0..2u64).map(move |seed| {
                    let mut s = RunSpec::new(
                        ProblemClass::MaxBisection,
                        4,
                        Algorithm::Vqe,
                        method,
                        seed,
                    );
                    s.max_evals = 30;
                    s
                })
            })
            .collect()
    }

    #[test]
    fn sweep_writes_results_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let specs = tiny_specs();
        let outcome = sweep(&specs, 2, dir.path()).unwrap();
        assert_eq!(outcome.total, 4);
        assert_eq!(outcome.completed, 4);
        assert_eq!(outcome.failed, 0);
        let manifest = load_manifest(dir.path()).unwrap();
        assert_eq!(manifest.entries.len(), 4);
        for entry in &manifest.entries {
            assert!(run_path(dir.path(), &entry.hash).exists());
            let result = load_result(dir.path(), &entry.hash).unwrap();
            assert_eq!(result.spec, entry.spec);
        }
    }

    #[test]
    fn rerun_skips_completed_runs() {
        let dir = tempfile::tempdir().unwrap();
        let specs = tiny_specs();
        sweep(&specs, 2, dir.path()).unwrap();
        let second = sweep(&specs, 2, dir.path()).unwrap();
        assert_eq!(second.cached, 4);
        assert_eq!(second.completed, 0);
    }

    #[test]
    fn reruns_are_byte_identical() {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let specs = tiny_specs();
        sweep(&specs, 2, dir_a.path()).unwrap();
        sweep(&specs, 1, dir_b.path()).unwrap();
        let manifest = load_manifest(dir_a.path()).unwrap();
        for entry in &manifest.entries {
            let a = std::fs::read(run_path(dir_a.path(), &entry.hash)).unwrap();
            let b = std::fs::read(run_path(dir_b.path(), &entry.hash)).unwrap();
            assert_eq!(a, b, "run {} differs between sweeps", entry.hash);
        }
        assert_eq!(
            std::fs::read(manifest_path(dir_a.path())).unwrap(),
            std::fs::read(manifest_path(dir_b.path())).unwrap()
        );
    }

    #[test]
    fn failures_are_recorded_not_fatal() {
        let dir = tempfile::tempdir().unwrap();
        let mut specs = tiny_specs();
        // odd n cannot be bisected: this run fails at generation
        specs[0].n_vars = 5;
        let outcome = sweep(&specs, 2, dir.path()).unwrap();
        assert_eq!(outcome.failed, 1);
        assert_eq!(outcome.completed, 3);
        let manifest = load_manifest(dir.path()).unwrap();
        let failed: Vec<_> = manifest
            .entries
            .iter()
            .filter(|e| e.status == RunStatus::Failed)
            .collect();
        assert_eq!(failed.len(), 1);
        assert!(failed[0].error.is_some());
    }
}
