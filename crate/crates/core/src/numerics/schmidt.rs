use num_complex::Complex64;

use super::svd::{singular_values, CMatrix};
use super::{NumericsError, StateVector};

/// Schmidt coefficients of a state across the cut `subset | complement`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    /// Non-increasing.
    pub coefficients: Vec<f64>,
    /// Number of coefficients above the rank threshold.
    pub rank: usize,
    /// Qubits on side A, ascending.
    pub subset: Vec<usize>,
}

impl SchmidtDecomposition {
    pub fn is_entangled(&self) -> bool {
        self.rank > 1
    }
}

/// Rank threshold relative to the largest coefficient, with an absolute floor.
pub fn rank_threshold(largest: f64) -> f64 {
    (1e-10 * largest).max(1e-12)
}

fn validate(n: usize, subset: &[usize]) -> Result<(Vec<usize>, Vec<usize>), NumericsError> {
    if subset.is_empty() {
        return Err(NumericsError::EmptySubset);
    }
    let mut in_a = vec![false; n];
    for &q in subset {
        if q >= n {
            return Err(NumericsError::QubitOutOfRange { qubit: q, n });
        }
        if in_a[q] {
            return Err(NumericsError::DuplicateQubit(q));
        }
        in_a[q] = true;
    }
    if subset.len() == n {
        return Err(NumericsError::FullSubset);
    }
    let a: Vec<usize> = (0..n).filter(|&q| in_a[q]).collect();
    let b: Vec<usize> = (0..n).filter(|&q| !in_a[q]).collect();
    Ok((a, b))
}

/// Scatter table: for each local index over `qubits`, the global basis bits.
fn scatter(qubits: &[usize]) -> Vec<usize> {
    (0..1usize << qubits.len())
        .map(|local| {
            qubits
                .iter()
                .enumerate()
                .filter(|(k, _)| local >> k & 1 == 1)
                .fold(0, |acc, (_, &q)| acc | 1 << q)
        })
        .collect()
}

/// Amplitudes reshaped with the A-qubits as row index and the rest as column
/// index. Within each side, the lowest-numbered qubit is the least
/// significant bit.
fn reshape(state: &StateVector, a: &[usize], b: &[usize]) -> CMatrix {
    let rows = scatter(a);
    let cols = scatter(b);
    let amps = state.amplitudes();
    let mut data = Vec::with_capacity(rows.len() * cols.len());
    for r in &rows {
        for c in &cols {
            data.push(amps[r | c]);
        }
    }
    CMatrix::from_row_major(rows.len(), cols.len(), data)
}

pub fn schmidt(state: &StateVector, subset: &[usize]) -> Result<SchmidtDecomposition, NumericsError> {
    let (a, b) = validate(state.n_qubits(), subset)?;
    let coefficients = singular_values(&reshape(state, &a, &b))?;
    let eps = rank_threshold(coefficients[0]);
    let rank = coefficients.iter().filter(|&&s| s > eps).count();
    Ok(SchmidtDecomposition {
        coefficients,
        rank,
        subset: a,
    })
}

/// Tr(rho_A^2) of the reduced state on `subset`, from the Gram matrix of the
/// reshaped amplitudes (no singular values involved).
pub fn purity(state: &StateVector, subset: &[usize]) -> Result<f64, NumericsError> {
    let (a, b) = validate(state.n_qubits(), subset)?;
    let m = reshape(state, &a, &b);
    // rho_A and rho_B share their non-zero spectrum; use the smaller one.
    let m = if m.rows() <= m.cols() { m } else { m.adjoint() };
    let (rows, cols) = (m.rows(), m.cols());
    let data = m.data();
    let mut total = 0.0;
    for i in 0..rows {
        for j in 0..rows {
            let mut g = Complex64::new(0.0, 0.0);
            for k in 0..cols {
                g += data[i * cols + k] * data[j * cols + k].conj();
            }
            total += g.norm_sqr();
        }
    }
    Ok(total)
}

/// Probabilities of reading qubit `q` as 0 and as 1.
pub fn single_qubit_probabilities(state: &StateVector, q: usize) -> (f64, f64) {
    let mut p = [0.0; 2];
    for (i, z) in state.amplitudes().iter().enumerate() {
        p[i >> q & 1] += z.norm_sqr();
    }
    (p[0], p[1])
}
