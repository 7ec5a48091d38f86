use crate::error::{Error, Result};

use super::SquareMatrix;

/// Lower-triangular `L` with positive diagonal such that `L·Lᵀ = M`.
///
/// Only the lower triangle of `m` is read.
pub fn cholesky(m: &SquareMatrix) -> Result<SquareMatrix> {
    let n = m.dim();
    let mut l = SquareMatrix::zeros(n);
    for j in 0..n {
        let mut d = m[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if d.is_nan() || d <= 0.0 {
            return Err(Error::NotPositiveDefinite { pivot: j, value: d });
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Solves `L·X = B` for lower-triangular `L`.
pub fn solve_lower(l: &SquareMatrix, b: &SquareMatrix) -> SquareMatrix {
    let n = l.dim();
    let mut x = SquareMatrix::zeros(n);
    for col in 0..n {
        for i in 0..n {
            let mut s = b[(i, col)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, col)];
            }
            x[(i, col)] = s / l[(i, i)];
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(
            cholesky(&SquareMatrix::identity(3)).unwrap(),
            SquareMatrix::identity(3)
        );
        let l = cholesky(&SquareMatrix::from_diagonal(&[4.0, 9.0])).unwrap();
        assert_eq!(l, SquareMatrix::from_diagonal(&[2.0, 3.0]));
    }

    #[test]
    fn inverse_control_matrix() {
        // Qᵀ D⁻¹ Q with Q = I, D = diag(0.5, 0.25)
        let l = cholesky(&SquareMatrix::from_diagonal(&[2.0, 4.0])).unwrap();
        assert!((l[(0, 0)] - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(l[(1, 1)], 2.0);
    }

    #[test]
    fn reconstructs_dense_spd() {
        let m = SquareMatrix::from_rows(&[[4.0, 2.0, -2.0], [2.0, 10.0, 2.0], [-2.0, 2.0, 5.0]])
            .unwrap();
        let l = cholesky(&m).unwrap();
        for i in 0..3 {
            assert!(l[(i, i)] > 0.0);
            for j in (i + 1)..3 {
                assert_eq!(l[(i, j)], 0.0);
            }
        }
        assert!((&l * &l.transpose()).sub(&m).norm_max() < 1e-13);
    }

    #[test]
    fn indefinite_fails() {
        let m = SquareMatrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap();
        assert!(matches!(
            cholesky(&m),
            Err(Error::NotPositiveDefinite { pivot: 1, .. })
        ));
    }

    #[test]
    fn lower_solve() {
        let l = SquareMatrix::from_rows(&[[2.0, 0.0], [1.0, 4.0]]).unwrap();
        let x = solve_lower(&l, &SquareMatrix::identity(2));
        assert!((&l * &x).sub(&SquareMatrix::identity(2)).norm_max() < 1e-15);
    }
}
