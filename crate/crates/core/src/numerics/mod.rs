//! Complex linear algebra for the state-based analyses: statevectors,
//! singular values, Schmidt decompositions and reduced-state purity.

mod schmidt;
mod svd;

pub use schmidt::{purity, rank_threshold, schmidt, single_qubit_probabilities, SchmidtDecomposition};
pub use svd::{singular_values, CMatrix};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("bipartition subset must be non-empty")]
    EmptySubset,
    #[error("bipartition subset must leave at least one qubit outside")]
    FullSubset,
    #[error("qubit {qubit} out of range for a {n}-qubit state")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("qubit {0} listed twice in the subset")]
    DuplicateQubit(usize),
    #[error("amplitude vector of length {0} is not a power of two")]
    BadLength(usize),
    #[error("state norm {0} differs from 1")]
    NotNormalized(f64),
}

/// Norm tolerance for a valid state.
pub const NORM_TOL: f64 = 1e-10;

/// Pure state of `n` qubits. Basis index bit `i` is qubit `i`, so qubit 0 is
/// the least significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0...0>.
    pub fn zero(n: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    /// Computational basis state `index`.
    pub fn basis(n: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, NumericsError> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(NumericsError::BadLength(len));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(NumericsError::NonFinite);
        }
        let state = StateVector {
            n: len.trailing_zeros() as usize,
            amps,
        };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(NumericsError::NotNormalized(norm));
        }
        Ok(state)
    }

    /// Normalised vector of independent standard complex Gaussians.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut amps {
            *z /= norm;
        }
        StateVector { n, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// |<self|other>|.
    pub fn overlap(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    /// Largest amplitude-wise distance.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Tensor product with `self` on the low qubits.
    pub fn tensor(&self, high: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.amps.len() * high.amps.len());
        for h in &high.amps {
            for l in &self.amps {
                amps.push(l * h);
            }
        }
        StateVector {
            n: self.n + high.n,
            amps,
        }
    }
}
