//! Parameterized circuit families: QAOA layers and the hardware-efficient
//! Two-Local layout. Both map a parameter vector to a [`StateVector`].

use crate::error::{Error, Result};
use crate::statevector::StateVector;

/// QAOA of depth p over a fixed phase diagonal:
/// |+⟩^⊗n, then for each layer j: exp(-i γ_j diag) followed by the X mixer
/// exp(-i β_j Σ X). Parameter layout is (γ_1..γ_p, β_1..β_p).
#[derive(Debug, Clone, PartialEq)]
pub struct QaoaAnsatz {
    n_qubits: usize,
    depth: usize,
    phase_diag: Vec<f64>,
}

impl QaoaAnsatz {
    pub fn new(n_qubits: usize, depth: usize, phase_diag: Vec<f64>) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParameter("QAOA depth must be >= 1".into()));
        }
        if phase_diag.len() != 1 << n_qubits {
            return Err(Error::LengthMismatch {
                expected: 1 << n_qubits,
                actual: phase_diag.len(),
            });
        }
        Ok(Self {
            n_qubits,
            depth,
            phase_diag,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn param_count(&self) -> usize {
        2 * self.depth
    }

    pub fn state(&self, params: &[f64]) -> Result<StateVector> {
        if params.len() != self.param_count() {
            return Err(Error::LengthMismatch {
                expected: self.param_count(),
                actual: params.len(),
            });
        }
        let (gammas, betas) = params.split_at(self.depth);
        let mut state = StateVector::plus(self.n_qubits)?;
        for (&gamma, &beta) in gammas.iter().zip(betas) {
            state.apply_diagonal_phase(&self.phase_diag, gamma)?;
            state.apply_mixer(beta);
        }
        Ok(state)
    }
}

/// Two-Local circuit: Ry rotation layers separated by linear CZ entangling
/// chains, starting from |0...0⟩. `reps` entangling layers give reps+1
/// rotation layers and n*(reps+1) parameters, one angle per rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoLocalAnsatz {
    n_qubits: usize,
    reps: usize,
}

impl TwoLocalAnsatz {
    pub fn new(n_qubits: usize, reps: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::QubitCount(0));
        }
        Ok(Self { n_qubits, reps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn reps(&self) -> usize {
        self.reps
    }

    pub fn param_count(&self) -> usize {
        self.n_qubits * (self.reps + 1)
    }

    pub fn state(&self, params: &[f64]) -> Result<StateVector> {
        if params.len() != self.param_count() {
            return Err(Error::LengthMismatch {
                expected: self.param_count(),
                actual: params.len(),
            });
        }
        let n = self.n_qubits;
        let mut state = StateVector::zero(n)?;
        for (layer, angles) in params.chunks_exact(n).enumerate() {
            if layer > 0 {
                for q in 0..n.saturating_sub(1) {
                    state.apply_cz(q, q + 1)?;
                }
            }
            for (q, &angle) in angles.iter().enumerate() {
                state.apply_ry(q, angle)?;
            }
        }
        Ok(state)
    }
}

/// Either circuit family behind one interface.
#[derive(Debug, Clone, PartialEq)]
pub enum Ansatz {
    Qaoa(QaoaAnsatz),
    TwoLocal(TwoLocalAnsatz),
}

impl Ansatz {
    pub fn param_count(&self) -> usize {
        match self {
            Ansatz::Qaoa(a) => a.param_count(),
            Ansatz::TwoLocal(a) => a.param_count(),
        }
    }

    pub fn state(&self, params: &[f64]) -> Result<StateVector> {
        match self {
            Ansatz::Qaoa(a) => a.state(params),
            Ansatz::TwoLocal(a) => a.state(params),
        }
    }
}
