//! Constrained binary quadratic problems and their penalized diagonal
//! landscapes.
//!
//! A [`ConstrainedProblem`] is the single source of truth for the objective
//! f and the feasible set F. [`DiagonalLandscape`] is its simulator-facing
//! form: f(s), the feasibility flag, and the penalized value for every basis
//! state, built by exhaustive enumeration rather than Pauli-term algebra.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::MAX_QUBITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// x_i + x_j <= 1 over two variables.
    PairAtMostOne,
    /// x_i + x_j >= 1 over two variables.
    PairAtLeastOne,
    /// sum of the listed variables equals `bound`.
    CardinalityEq,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSpec {
    pub kind: ConstraintKind,
    pub vars: Vec<usize>,
    #[serde(default)]
    pub bound: usize,
}

impl ConstraintSpec {
    pub fn pair_at_most_one(i: usize, j: usize) -> Self {
        Self {
            kind: ConstraintKind::PairAtMostOne,
            vars: vec![i, j],
            bound: 0,
        }
    }

    pub fn pair_at_least_one(i: usize, j: usize) -> Self {
        Self {
            kind: ConstraintKind::PairAtLeastOne,
            vars: vec![i, j],
            bound: 0,
        }
    }

    pub fn cardinality_eq(vars: Vec<usize>, bound: usize) -> Self {
        Self {
            kind: ConstraintKind::CardinalityEq,
            vars,
            bound,
        }
    }

    fn validate(&self, n_vars: usize) -> Result<()> {
        if self.vars.iter().any(|&v| v >= n_vars) {
            return Err(Error::InvalidParameter(format!(
                "constraint references a variable >= n_vars ({n_vars})"
            )));
        }
        match self.kind {
            ConstraintKind::PairAtMostOne | ConstraintKind::PairAtLeastOne => {
                if self.vars.len() != 2 || self.vars[0] == self.vars[1] {
                    return Err(Error::InvalidParameter(
                        "pair constraints need exactly two distinct variables".into(),
                    ));
                }
            }
            ConstraintKind::CardinalityEq => {
                if self.bound > self.vars.len() {
                    return Err(Error::InvalidParameter(format!(
                        "cardinality bound {} exceeds variable count {}",
                        self.bound,
                        self.vars.len()
                    )));
                }
            }
        }
        Ok(())
    }

    fn satisfied(&self, bit: impl Fn(usize) -> bool) -> bool {
        match self.kind {
            ConstraintKind::PairAtMostOne => {
                !(bit(self.vars[0]) && bit(self.vars[1]))
            }
            ConstraintKind::PairAtLeastOne => bit(self.vars[0]) || bit(self.vars[1]),
            ConstraintKind::CardinalityEq => {
                self.vars.iter().filter(|&&v| bit(v)).count() == self.bound
            }
        }
    }

    /// Exact quadratic penalty term: zero iff the constraint is satisfied.
    fn violation(&self, bit: impl Fn(usize) -> bool) -> f64 {
        match self.kind {
            // x_i * x_j
            ConstraintKind::PairAtMostOne => {
                if bit(self.vars[0]) && bit(self.vars[1]) {
                    1.0
                } else {
                    0.0
                }
            }
            // (1 - x_i)(1 - x_j)
            ConstraintKind::PairAtLeastOne => {
                if !bit(self.vars[0]) && !bit(self.vars[1]) {
                    1.0
                } else {
                    0.0
                }
            }
            // (sum x_i - bound)^2
            ConstraintKind::CardinalityEq => {
                let count = self.vars.iter().filter(|&&v| bit(v)).count() as i64;
                let diff = count - self.bound as i64;
                (diff * diff) as f64
            }
        }
    }
}

/// Quadratic objective plus pairwise/cardinality constraints over binary
/// variables.
///
/// The stated objective is `offset + sum linear_i x_i + sum Q_ij x_i x_j`
/// under `sense`; evaluation is canonicalized to minimization (maximization
/// problems are negated internally).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedProblem {
    pub n_vars: usize,
    pub sense: Sense,
    pub linear: Vec<f64>,
    /// Upper-triangle coefficients as (i, j, Q_ij) with i <= j, sorted.
    pub quadratic: Vec<(usize, usize, f64)>,
    pub offset: f64,
    pub constraints: Vec<ConstraintSpec>,
    pub label: String,
}

impl ConstrainedProblem {
    pub fn new(
        n_vars: usize,
        sense: Sense,
        linear: Vec<f64>,
        mut quadratic: Vec<(usize, usize, f64)>,
        offset: f64,
        constraints: Vec<ConstraintSpec>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if linear.len() != n_vars {
            return Err(Error::LengthMismatch {
                expected: n_vars,
                actual: linear.len(),
            });
        }
        for &(i, j, _) in &quadratic {
            if i > j || j >= n_vars {
                return Err(Error::InvalidParameter(format!(
                    "quadratic term ({i}, {j}) must satisfy i <= j < n_vars"
                )));
            }
        }
        quadratic.sort_by_key(|&(i, j, _)| (i, j));
        for c in &constraints {
            c.validate(n_vars)?;
        }
        Ok(Self {
            n_vars,
            sense,
            linear,
            quadratic,
            offset,
            constraints,
            label: label.into(),
        })
    }

    fn check_bits(&self, bits: &[bool]) -> Result<()> {
        if bits.len() != self.n_vars {
            return Err(Error::LengthMismatch {
                expected: self.n_vars,
                actual: bits.len(),
            });
        }
        Ok(())
    }

    fn raw_objective(&self, bit: impl Fn(usize) -> bool + Copy) -> f64 {
        let mut value = self.offset;
        for (i, &c) in self.linear.iter().enumerate() {
            if bit(i) {
                value += c;
            }
        }
        for &(i, j, q) in &self.quadratic {
            if bit(i) && bit(j) {
                value += q;
            }
        }
        value
    }

    fn canonicalize(&self, raw: f64) -> f64 {
        match self.sense {
            Sense::Minimize => raw,
            Sense::Maximize => -raw,
        }
    }

    /// Objective value in canonical minimization sense.
    pub fn evaluate_objective(&self, bits: &[bool]) -> Result<f64> {
        self.check_bits(bits)?;
        Ok(self.canonicalize(self.raw_objective(|i| bits[i])))
    }

    /// Canonical objective at a basis index (bit i of `s` is variable i).
    pub fn objective_at_index(&self, s: usize) -> f64 {
        self.canonicalize(self.raw_objective(|i| (s >> i) & 1 == 1))
    }

    pub fn is_feasible(&self, bits: &[bool]) -> Result<bool> {
        self.check_bits(bits)?;
        Ok(self.constraints.iter().all(|c| c.satisfied(|i| bits[i])))
    }

    pub fn feasible_at_index(&self, s: usize) -> bool {
        self.constraints
            .iter()
            .all(|c| c.satisfied(|i| (s >> i) & 1 == 1))
    }

    /// Total quadratic penalty at a basis index; zero iff feasible.
    pub fn violation_at_index(&self, s: usize) -> f64 {
        self.constraints
            .iter()
            .map(|c| c.violation(|i| (s >> i) & 1 == 1))
            .sum()
    }

    /// Default penalty weight: 1 + sum |linear| + sum |Q|, so one unit of
    /// violation outweighs the whole objective range.
    pub fn default_penalty(&self) -> f64 {
        1.0 + self.linear.iter().map(|c| c.abs()).sum::<f64>()
            + self.quadratic.iter().map(|&(_, _, q)| q.abs()).sum::<f64>()
    }

    /// Enumerate all 2^n states into a [`DiagonalLandscape`].
    ///
    /// `lambda = None` uses [`Self::default_penalty`].
    pub fn build_landscape(&self, lambda: Option<f64>) -> Result<DiagonalLandscape> {
        if self.n_vars == 0 || self.n_vars > MAX_QUBITS {
            return Err(Error::QubitCount(self.n_vars));
        }
        let lambda = match lambda {
            Some(l) if l < 0.0 => {
                return Err(Error::InvalidParameter(format!(
                    "penalty lambda must be >= 0, got {l}"
                )))
            }
            Some(l) => l,
            None => self.default_penalty(),
        };
        let dim = 1usize << self.n_vars;
        let rows: Vec<(f64, f64, bool)> = (0..dim)
            .into_par_iter()
            .map(|s| {
                let obj = self.objective_at_index(s);
                let viol = self.violation_at_index(s);
                (obj, obj + lambda * viol, viol == 0.0)
            })
            .collect();
        let mut objective_diag = Vec::with_capacity(dim);
        let mut penalized_diag = Vec::with_capacity(dim);
        let mut feasible_mask = Vec::with_capacity(dim);
        for (obj, pen, feas) in rows {
            objective_diag.push(obj);
            penalized_diag.push(pen);
            feasible_mask.push(feas);
        }
        Ok(DiagonalLandscape {
            n_vars: self.n_vars,
            objective_diag,
            penalized_diag,
            feasible_mask,
            penalty_lambda: lambda,
        })
    }
}

/// Per-basis-state objective, penalized objective, and feasibility flag.
///
/// Invariants: `penalized_diag[s] == objective_diag[s]` exactly on feasible
/// states, and `penalized_diag[s] >= objective_diag[s]` everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalLandscape {
    pub n_vars: usize,
    pub objective_diag: Vec<f64>,
    pub penalized_diag: Vec<f64>,
    pub feasible_mask: Vec<bool>,
    pub penalty_lambda: f64,
}

impl DiagonalLandscape {
    pub fn dim(&self) -> usize {
        self.objective_diag.len()
    }

    pub fn feasible_count(&self) -> usize {
        self.feasible_mask.iter().filter(|&&m| m).count()
    }

    /// Largest penalized value plus one; the optimizer-facing sentinel for
    /// states with no feasible support.
    pub fn sentinel_objective(&self) -> f64 {
        self.penalized_diag.iter().cloned().fold(f64::MIN, f64::max) + 1.0
    }
}
