//! Exact complex-amplitude simulation of the small gate set the two
//! ansätze need, plus diagonal-operator expectations.
//!
//! Basis convention: bit `i` of a basis index holds binary variable `x_i`,
//! with variable 0 in the least significant bit. All modules share it.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest supported register; 2^24 amplitudes is already 256 MiB.
pub const MAX_QUBITS: usize = 24;

const NORM_TOL: f64 = 1e-10;

/// A pure quantum state over `n_qubits`, stored as 2^n complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCount(n));
    }
    Ok(())
}

impl StateVector {
    /// |0...0⟩ on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        check_qubit_count(n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits: n, amps })
    }

    /// Uniform superposition |+⟩^⊗n; every amplitude is 2^(-n/2).
    pub fn plus(n: usize) -> Result<Self> {
        check_qubit_count(n)?;
        let amp = Complex64::new((1u64 << n) as f64, 0.0).re.sqrt().recip();
        Ok(Self {
            n_qubits: n,
            amps: vec![Complex64::new(amp, 0.0); 1 << n],
        })
    }

    /// Build directly from amplitudes; length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.len() != 1 << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                actual: amps.len(),
            });
        }
        check_qubit_count(n)?;
        Ok(Self { n_qubits: n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Euclidean norm; 1 within 1e-10 for any state built by this module.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOL
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitIndex {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// Ry(angle) = [[cos(a/2), -sin(a/2)], [sin(a/2), cos(a/2)]] on `qubit`.
    pub fn apply_ry(&mut self, qubit: usize, angle: f64) -> Result<()> {
        self.check_qubit(qubit)?;
        let c = (angle / 2.0).cos();
        let s = (angle / 2.0).sin();
        let step = 1usize << qubit;
        for base in (0..self.amps.len()).step_by(2 * step) {
            for off in 0..step {
                let i = base + off;
                let j = i + step;
                let a = self.amps[i];
                let b = self.amps[j];
                self.amps[i] = a * c - b * s;
                self.amps[j] = a * s + b * c;
            }
        }
        Ok(())
    }

    /// Controlled-Z: negates every amplitude whose `a` and `b` bits are both 1.
    /// Symmetric in its arguments.
    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::DuplicateQubit(a));
        }
        let mask = (1usize << a) | (1usize << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *amp = -*amp;
            }
        }
        Ok(())
    }

    /// Multiplies amplitude `s` by exp(-i * gamma * diag[s]); the phase
    /// evolution of a diagonal operator.
    pub fn apply_diagonal_phase(&mut self, diag: &[f64], gamma: f64) -> Result<()> {
        if diag.len() != self.amps.len() {
            return Err(Error::LengthMismatch {
                expected: self.amps.len(),
                actual: diag.len(),
            });
        }
        for (amp, &d) in self.amps.iter_mut().zip(diag) {
            *amp *= Complex64::from_polar(1.0, -gamma * d);
        }
        Ok(())
    }

    /// exp(-i * beta * sum_j X_j), applied as Rx(2*beta) on every qubit.
    /// Exact because the single-qubit X terms commute.
    pub fn apply_mixer(&mut self, beta: f64) {
        let c = beta.cos();
        let ms = Complex64::new(0.0, -beta.sin());
        for qubit in 0..self.n_qubits {
            let step = 1usize << qubit;
            for base in (0..self.amps.len()).step_by(2 * step) {
                for off in 0..step {
                    let i = base + off;
                    let j = i + step;
                    let a = self.amps[i];
                    let b = self.amps[j];
                    self.amps[i] = a * c + b * ms;
                    self.amps[j] = a * ms + b * c;
                }
            }
        }
    }

    /// ⟨Ψ| diag |Ψ⟩ = Σ_s |c_s|^2 diag[s]. Summation is sequential so the
    /// result is bitwise-deterministic.
    pub fn expectation_diagonal(&self, diag: &[f64]) -> Result<f64> {
        if diag.len() != self.amps.len() {
            return Err(Error::LengthMismatch {
                expected: self.amps.len(),
                actual: diag.len(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(diag)
            .map(|(a, &d)| a.norm_sqr() * d)
            .sum())
    }

    /// |c_s|^2 for every basis index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// |c_s|^2 for one basis index.
    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }
}
