//! Cyclic Jacobi eigensolver for real symmetric matrices.

use crate::error::{Error, Result};

use super::{tolerance_floor, SquareMatrix};

const MAX_SWEEPS: usize = 100;
const CONVERGENCE: f64 = 1e-13;
const SYMMETRY_TOL: f64 = 1e-12;

/// Eigen-decomposition `S = Q·diag(values)·Qᵀ` with ascending eigenvalues.
/// Column `j` of `vectors` is the eigenvector for `values[j]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: SquareMatrix,
}

impl SymmetricEigen {
    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }
}

fn off_diagonal_norm(a: &SquareMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

pub fn sym_eig(s: &SquareMatrix) -> Result<SymmetricEigen> {
    let n = s.dim();
    let scale = s.norm_frobenius();
    let asym = s.max_asymmetry();
    if asym > tolerance_floor(SYMMETRY_TOL * scale) {
        return Err(Error::Precondition(format!(
            "matrix is not symmetric (max |S_ij - S_ji| = {asym:e})"
        )));
    }
    let mut a = s.symmetric_part();
    let mut v = SquareMatrix::identity(n);
    let target = tolerance_floor(CONVERGENCE * scale);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                rotate(&mut a, &mut v, p, q, c, sn, t);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(Error::NumericalFailure {
            message: format!("Jacobi iteration did not converge in {MAX_SWEEPS} sweeps"),
            partial: Box::new(a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = SquareMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

/// Applies the rotation annihilating `a[(p, q)]`, i.e. `a ← Jᵀ a J`, `v ← v J`.
fn rotate(a: &mut SquareMatrix, v: &mut SquareMatrix, p: usize, q: usize, c: f64, s: f64, t: f64) {
    let n = a.dim();
    let apq = a[(p, q)];
    a[(p, p)] -= t * apq;
    a[(q, q)] += t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for r in 0..n {
        if r != p && r != q {
            let arp = a[(r, p)];
            let arq = a[(r, q)];
            let new_rp = c * arp - s * arq;
            let new_rq = s * arp + c * arq;
            a[(r, p)] = new_rp;
            a[(p, r)] = new_rp;
            a[(r, q)] = new_rq;
            a[(q, r)] = new_rq;
        }
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = c * vrp - s * vrq;
        v[(r, q)] = s * vrp + c * vrq;
    }
}
