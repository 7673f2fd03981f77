//! Run specifications: everything that determines a single experiment,
//! plus the named sweep profiles.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::instances::{GraphObjective, ProblemClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Vqe,
    Qaoa,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Vqe => "vqe",
            Algorithm::Qaoa => "qaoa",
        }
    }
}

/// What the classical optimizer sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Minimize the energy of the penalized Hamiltonian.
    PenaltyEnergy,
    /// Minimize the in-constraint energy, no feasibility pressure.
    IcEnergy,
    /// Minimize the in-constraint energy with an optimizer-level lower
    /// bound on the in-constraint probability.
    IcEnergyBounded,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::PenaltyEnergy => "penalty_energy",
            Method::IcEnergy => "ic_energy",
            Method::IcEnergyBounded => "ic_energy_bounded",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "penalty_energy" => Ok(Method::PenaltyEnergy),
            "ic_energy" => Ok(Method::IcEnergy),
            "ic_energy_bounded" => Ok(Method::IcEnergyBounded),
            other => Err(Error::InvalidParameter(format!("unknown method '{other}'"))),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vqe" => Ok(Algorithm::Vqe),
            "qaoa" => Ok(Algorithm::Qaoa),
            other => Err(Error::InvalidParameter(format!(
                "unknown algorithm '{other}'"
            ))),
        }
    }
}

/// Which diagonal drives the QAOA phase separator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PhaseDiagonal {
    /// The penalized landscape (keeps the QAOA landscape consistent across
    /// methods).
    #[default]
    Penalized,
    /// The bare objective, available for ablation.
    Plain,
}

fn default_depth() -> usize {
    1
}
fn default_pic_bound() -> f64 {
    0.05
}
fn default_max_evals() -> usize {
    300
}
fn default_reps() -> usize {
    1
}
fn default_rho_begin() -> f64 {
    0.5
}
fn default_rho_end() -> f64 {
    1e-4
}

/// Full description of one experiment run. Two specs with equal content
/// hash produce byte-identical results (up to wall time).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub problem_class: ProblemClass,
    pub n_vars: usize,
    pub algorithm: Algorithm,
    /// QAOA layer count; ignored for VQE.
    #[serde(default = "default_depth")]
    pub qaoa_depth: usize,
    pub method: Method,
    /// Lower bound on the in-constraint probability (ic_energy_bounded).
    #[serde(default = "default_pic_bound")]
    pub pic_bound: f64,
    /// None selects the automatic penalty weight.
    #[serde(default)]
    pub penalty_lambda: Option<f64>,
    #[serde(default = "default_max_evals")]
    pub max_evals: usize,
    pub instance_seed: u64,
    pub param_seed: u64,
    /// None evaluates exact probability masses; Some(n) draws n samples
    /// per evaluation instead.
    #[serde(default)]
    pub shots: Option<u64>,
    /// Two-Local entangling layers; ignored for QAOA.
    #[serde(default = "default_reps")]
    pub twolocal_reps: usize,
    #[serde(default)]
    pub qaoa_phase: PhaseDiagonal,
    #[serde(default)]
    pub graph_objective: GraphObjective,
    #[serde(default = "default_rho_begin")]
    pub rho_begin: f64,
    #[serde(default = "default_rho_end")]
    pub rho_end: f64,
}

impl RunSpec {
    /// A spec with conventional defaults for the given run coordinates.
    pub fn new(
        problem_class: ProblemClass,
        n_vars: usize,
        algorithm: Algorithm,
        method: Method,
        instance_seed: u64,
    ) -> Self {
        Self {
            problem_class,
            n_vars,
            algorithm,
            qaoa_depth: default_depth(),
            method,
            pic_bound: default_pic_bound(),
            penalty_lambda: None,
            max_evals: default_max_evals(),
            instance_seed,
            param_seed: instance_seed,
            shots: None,
            twolocal_reps: default_reps(),
            qaoa_phase: PhaseDiagonal::default(),
            graph_objective: GraphObjective::default(),
            rho_begin: default_rho_begin(),
            rho_end: default_rho_end(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_vars == 0 || self.n_vars > crate::statevector::MAX_QUBITS {
            return Err(Error::QubitCount(self.n_vars));
        }
        if self.algorithm == Algorithm::Qaoa && self.qaoa_depth == 0 {
            return Err(Error::InvalidParameter("qaoa_depth must be >= 1".into()));
        }
        if self.method == Method::IcEnergyBounded
            && !(0.0 < self.pic_bound && self.pic_bound < 1.0)
        {
            return Err(Error::InvalidParameter(format!(
                "pic_bound must lie in (0, 1), got {}",
                self.pic_bound
            )));
        }
        if let Some(l) = self.penalty_lambda {
            if l < 0.0 {
                return Err(Error::InvalidParameter(
                    "penalty_lambda must be >= 0".into(),
                ));
            }
        }
        Ok(())
    }

    /// Content hash identifying the run; the sweep uses it as the file stem.
    pub fn content_hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("spec serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        hex::encode(&digest[..8])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Desk scale: n in {6, 8, 10}, 10 VQE / 5 QAOA instances per setting,
    /// QAOA depths {1, 3}. Minutes of CPU time.
    Desk,
    /// Paper scale: n in {6..16 even}, 20 VQE / 10 QAOA instances, QAOA
    /// depths 1..=5. Hours of CPU time.
    Paper,
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Profile::Desk),
            "paper" => Ok(Profile::Paper),
            other => Err(Error::InvalidParameter(format!(
                "unknown profile '{other}' (expected desk or paper)"
            ))),
        }
    }
}

/// Expand a named profile into its run list. Runs differing only in method
/// share instance and parameter seeds.
pub fn profile_specs(profile: Profile, base_seed: u64) -> Vec<RunSpec> {
    let (sizes, vqe_instances, qaoa_instances, depths): (&[usize], u64, u64, &[usize]) =
        match profile {
            Profile::Desk => (&[6, 8, 10], 10, 5, &[1, 3]),
            Profile::Paper => (&[6, 8, 10, 12, 14, 16], 20, 10, &[1, 2, 3, 4, 5]),
        };
    let methods = [Method::PenaltyEnergy, Method::IcEnergyBounded];
    let mut specs = Vec::new();
    for &class in &ProblemClass::ALL {
        for &n in sizes {
            for &method in &methods {
                for i in 0..vqe_instances {
                    specs.push(RunSpec::new(
                        class,
                        n,
                        Algorithm::Vqe,
                        method,
                        base_seed + i,
                    ));
                }
                for &depth in depths {
                    for i in 0..qaoa_instances {
                        let mut spec =
                            RunSpec::new(class, n, Algorithm::Qaoa, method, base_seed + i);
                        spec.qaoa_depth = depth;
                        specs.push(spec);
                    }
                }
            }
        }
    }
    specs
}
