//! The in-constraint metrics, computed exactly from amplitudes: energy,
//! in-constraint probability and energy, approximation ratio, and the
//! optimal-mass fraction of the feasible distribution.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::OracleResult;
use crate::statevector::StateVector;

/// Probability mass below which the feasible support counts as empty.
pub const ZERO_MASS_TOL: f64 = 1e-12;

fn check_mask(state: &StateVector, mask: &[bool]) -> Result<()> {
    if mask.len() != state.dim() {
        return Err(Error::LengthMismatch {
            expected: state.dim(),
            actual: mask.len(),
        });
    }
    Ok(())
}

/// Total probability mass on feasible basis states: Σ_{mask} |c_s|^2.
pub fn in_constraint_probability(state: &StateVector, mask: &[bool]) -> Result<f64> {
    check_mask(state, mask)?;
    Ok(state
        .amplitudes()
        .iter()
        .zip(mask)
        .filter(|(_, &m)| m)
        .map(|(a, _)| a.norm_sqr())
        .sum())
}

/// Expectation of `diag` in the state projected onto the feasible set and
/// renormalized: (Σ_F |c_s|^2 diag[s]) / (Σ_F |c_s|^2).
pub fn in_constraint_energy(state: &StateVector, diag: &[f64], mask: &[bool]) -> Result<f64> {
    check_mask(state, mask)?;
    if diag.len() != state.dim() {
        return Err(Error::LengthMismatch {
            expected: state.dim(),
            actual: diag.len(),
        });
    }
    let mut mass = 0.0;
    let mut weighted = 0.0;
    for ((a, &d), &m) in state.amplitudes().iter().zip(diag).zip(mask) {
        if m {
            let p = a.norm_sqr();
            mass += p;
            weighted += p * d;
        }
    }
    if mass <= ZERO_MASS_TOL {
        return Err(Error::EmptyFeasibleSupport);
    }
    Ok(weighted / mass)
}

/// Normalized feasible-solution quality: 1 when the in-constraint state sits
/// on the optimum, 0 on the worst feasible solution. Uses the unpenalized
/// objective diagonal and the oracle's feasible extremes.
pub fn approximation_ratio(
    state: &StateVector,
    objective_diag: &[f64],
    mask: &[bool],
    oracle: &OracleResult,
) -> Result<f64> {
    let worst = oracle.canonical_worst();
    let best = oracle.canonical_best();
    if worst - best <= 0.0 {
        return Err(Error::DegenerateInstance);
    }
    let e_ic = in_constraint_energy(state, objective_diag, mask)?;
    Ok((worst - e_ic) / (worst - best))
}

/// Share of the feasible probability mass sitting on optimal states.
pub fn optimal_mass_fraction(
    state: &StateVector,
    mask: &[bool],
    optimal_states: &[usize],
) -> Result<f64> {
    let p_ic = in_constraint_probability(state, mask)?;
    if p_ic <= ZERO_MASS_TOL {
        return Err(Error::EmptyFeasibleSupport);
    }
    let optimal_mass: f64 = optimal_states.iter().map(|&s| state.probability(s)).sum();
    Ok(optimal_mass / p_ic)
}

/// True iff the most probable feasible basis state is optimal. Ties break
/// toward the lowest index, and a tie that includes an optimal state counts
/// as true.
pub fn is_optimum_modal(
    state: &StateVector,
    mask: &[bool],
    optimal_states: &[usize],
) -> Result<bool> {
    check_mask(state, mask)?;
    let mut max_p = f64::NEG_INFINITY;
    let mut any_feasible = false;
    let mut mass = 0.0;
    for (s, &m) in mask.iter().enumerate() {
        if m {
            any_feasible = true;
            let p = state.probability(s);
            mass += p;
            if p > max_p {
                max_p = p;
            }
        }
    }
    if !any_feasible || mass <= ZERO_MASS_TOL {
        return Err(Error::EmptyFeasibleSupport);
    }
    Ok(optimal_states
        .iter()
        .any(|&s| mask[s] && state.probability(s) == max_p))
}

/// One row of an optimization trace: the parameters tried at an iteration
/// and every metric of the resulting state. Serializes to one JSON line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub iteration: usize,
    pub params: Vec<f64>,
    /// ⟨penalized diagonal⟩ over the full state.
    pub energy: f64,
    /// In-constraint energy of the penalized diagonal; the sentinel value
    /// when the feasible support is empty.
    pub in_constraint_energy: f64,
    pub in_constraint_probability: f64,
    /// None when the feasible support is empty.
    pub approximation_ratio: Option<f64>,
    /// None when the feasible support is empty.
    pub optimal_mass_fraction: Option<f64>,
}
