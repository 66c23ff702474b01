//! Dense matrices of the base gate set.
//!
//! Local index convention: operand `j` of an instruction is bit `j` of the
//! matrix row/column index. For controlled gates the controls are the low
//! bits and the target is the highest bit.

use num_complex::Complex64;

use crate::circuit::Gate;
use crate::numerics::CMatrix;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn expi(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, phi)
}

fn m2(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> CMatrix {
    CMatrix::from_row_major(2, 2, vec![a, b, cc, d])
}

/// u(theta, phi, lambda) with the OpenQASM 2.0 phase convention.
pub fn u_matrix(theta: f64, phi: f64, lambda: f64) -> CMatrix {
    let (s, co) = (theta / 2.0).sin_cos();
    m2(c(co, 0.0), -expi(lambda) * s, expi(phi) * s, expi(phi + lambda) * co)
}

/// Embeds a single-qubit matrix as the target of `controls` control bits.
fn controlled(u: &CMatrix, controls: usize) -> CMatrix {
    let dim = 1usize << (controls + 1);
    let mask = (1usize << controls) - 1;
    let tbit = 1usize << controls;
    let mut m = CMatrix::identity(dim);
    for r in 0..dim {
        for col in 0..dim {
            if r & mask == mask && col & mask == mask {
                m[(r, col)] = u[((r & tbit) >> controls, (col & tbit) >> controls)];
            }
        }
    }
    m
}

/// Unitary of `gate(params)` in the local index convention.
pub fn gate_matrix(gate: Gate, params: &[f64]) -> CMatrix {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    match gate {
        Gate::U => u_matrix(params[0], params[1], params[2]),
        Gate::Id => CMatrix::identity(2),
        Gate::H => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            m2(h, h, h, -h)
        }
        Gate::X => m2(z, one, one, z),
        Gate::Y => m2(z, c(0.0, -1.0), c(0.0, 1.0), z),
        Gate::Z => m2(one, z, z, -one),
        Gate::S => m2(one, z, z, c(0.0, 1.0)),
        Gate::Sdg => m2(one, z, z, c(0.0, -1.0)),
        Gate::T => m2(one, z, z, expi(FRAC_PI_4)),
        Gate::Tdg => m2(one, z, z, expi(-FRAC_PI_4)),
        Gate::RX => {
            let (s, co) = (params[0] / 2.0).sin_cos();
            m2(c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0))
        }
        Gate::RY => {
            let (s, co) = (params[0] / 2.0).sin_cos();
            m2(c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0))
        }
        Gate::RZ => m2(expi(-params[0] / 2.0), z, z, expi(params[0] / 2.0)),
        Gate::CX => controlled(&gate_matrix(Gate::X, &[]), 1),
        Gate::CZ => controlled(&gate_matrix(Gate::Z, &[]), 1),
        Gate::CY => controlled(&gate_matrix(Gate::Y, &[]), 1),
        Gate::CH => controlled(&gate_matrix(Gate::H, &[]), 1),
        Gate::CP => controlled(&m2(one, z, z, expi(params[0])), 1),
        Gate::CRZ => controlled(&gate_matrix(Gate::RZ, params), 1),
        Gate::CU3 => controlled(&u_matrix(params[0], params[1], params[2]), 1),
        Gate::CCX => controlled(&gate_matrix(Gate::X, &[]), 2),
        Gate::Swap => {
            let mut m = CMatrix::zeros(4, 4);
            m[(0, 0)] = one;
            m[(1, 2)] = one;
            m[(2, 1)] = one;
            m[(3, 3)] = one;
            m
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_params(gate: Gate) -> Vec<f64> {
        [0.37, -1.2, 2.9][..gate.num_params()].to_vec()
    }

    #[test]
    fn all_gates_unitary() {
        for gate in Gate::ALL {
            let u = gate_matrix(gate, &sample_params(gate));
            assert_eq!(u.rows(), 1 << gate.num_qubits());
            let prod = u.mul(&u.adjoint());
            assert!(prod.max_abs_diff(&CMatrix::identity(u.rows())) <= 1e-12, "{gate}");
        }
    }

    #[test]
    fn inverse_table_is_adjoint() {
        for gate in Gate::ALL {
            let p = sample_params(gate);
            let (g, q) = gate.inverse(&p);
            let prod = gate_matrix(g, &q).mul(&gate_matrix(gate, &p));
            assert!(prod.max_abs_diff(&CMatrix::identity(prod.rows())) <= 1e-12, "{gate}");
        }
    }

    #[test]
    fn cx_flips_target_when_control_set() {
        let m = gate_matrix(Gate::CX, &[]);
        // local index = control + 2 * target
        assert_eq!(m[(3, 1)], c(1.0, 0.0));
        assert_eq!(m[(1, 3)], c(1.0, 0.0));
        assert_eq!(m[(0, 0)], c(1.0, 0.0));
        assert_eq!(m[(2, 2)], c(1.0, 0.0));
    }
}
