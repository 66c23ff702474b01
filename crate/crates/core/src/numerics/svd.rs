//! Singular values of a dense complex matrix by one-sided Jacobi rotations.
//!
//! Columns are orthogonalised pairwise until every pair is numerically
//! orthogonal; the singular values are then the column norms. Only values
//! are produced, no singular vectors.

use num_complex::Complex64;

use super::NumericsError;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        CMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.data[k * other.cols + c];
                }
            }
        }
        out
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

const MAX_SWEEPS: usize = 80;
const ORTHO_TOL: f64 = 1e-15;

/// Singular values in non-increasing order.
pub fn singular_values(matrix: &CMatrix) -> Result<Vec<f64>, NumericsError> {
    if matrix.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(NumericsError::NonFinite);
    }
    // Work on columns of the orientation with fewer columns.
    let (len, columns) = if matrix.cols <= matrix.rows {
        let cols = (0..matrix.cols)
            .map(|c| (0..matrix.rows).map(|r| matrix[(r, c)]).collect::<Vec<_>>())
            .collect::<Vec<_>>();
        (matrix.rows, cols)
    } else {
        let cols = (0..matrix.rows)
            .map(|r| matrix.data[r * matrix.cols..(r + 1) * matrix.cols].to_vec())
            .collect::<Vec<_>>();
        (matrix.cols, cols)
    };
    Ok(jacobi_column_norms(columns, len))
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn jacobi_column_norms(mut cols: Vec<Vec<Complex64>>, len: usize) -> Vec<f64> {
    let n = cols.len();
    let mut norms: Vec<f64> = cols.iter().map(|c| norm_sqr(c)).collect();
    let total: f64 = norms.iter().sum();
    // Columns below this squared norm cannot change any singular value that
    // matters at double precision.
    let negligible = total * 1e-32;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let (alpha, beta) = (norms[i], norms[j]);
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let (left, right) = cols.split_at_mut(j);
                let (ci, cj) = (&mut left[i], &mut right[0]);
                let gamma: Complex64 = ci.iter().zip(cj.iter()).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g <= ORTHO_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Remove the phase of gamma from column j, then apply a real rotation.
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..len {
                    let a = ci[k];
                    let b = cj[k] * phase;
                    ci[k] = a * c - b * s;
                    cj[k] = a * s + b * c;
                }
                norms[i] = norm_sqr(ci);
                norms[j] = norm_sqr(cj);
            }
        }
        if !rotated {
            break;
        }
    }
    let mut values: Vec<f64> = norms.iter().map(|x| x.sqrt()).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}
