//! End-to-end experiment runner: single runs, depth-1 QAOA grid scans,
//! parallel sweeps over run lists, and CSV report generation.

mod report;
mod run;
mod spec;
mod sweep;

pub use report::{report, GroupField};
pub use run::{build_ansatz, grid_search_qaoa_p1, initial_params, run_single, GridPoint, RunResult};
pub use spec::{profile_specs, Algorithm, Method, PhaseDiagonal, Profile, RunSpec};
pub use sweep::{
    load_manifest, load_result, manifest_path, run_path, runs_dir, sweep, Manifest, ManifestEntry,
    RunStatus, SweepOutcome,
};
