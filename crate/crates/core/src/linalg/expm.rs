//! Matrix exponential by scaling and squaring.
//!
//! The argument `tA` is scaled by `2^-s` so that its 1-norm is at most 0.5,
//! the diagonal Padé approximant of degree 8 is evaluated, and the result is
//! squared `s` times. At that norm the truncation error of the approximant is
//! below 1e-23, so rounding in the squaring phase dominates.

use crate::error::{Error, Result};

use super::SquareMatrix;

const PADE_DEGREE: usize = 8;
const SCALED_NORM_LIMIT: f64 = 0.5;

fn pade_coefficients() -> [f64; PADE_DEGREE + 1] {
    let q = PADE_DEGREE as f64;
    let mut c = [0.0; PADE_DEGREE + 1];
    c[0] = 1.0;
    for k in 1..=PADE_DEGREE {
        let kf = k as f64;
        c[k] = c[k - 1] * (q - kf + 1.0) / (kf * (2.0 * q - kf + 1.0));
    }
    c
}

/// Returns `e^{tA}`.
///
/// `t = 0` yields the identity exactly. An error is returned when `t` is not
/// finite or the result overflows.
pub fn mat_exp(a: &SquareMatrix, t: f64) -> Result<SquareMatrix> {
    if !t.is_finite() {
        return Err(Error::InvalidInput(format!(
            "time scalar {t} is not finite"
        )));
    }
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let n = a.dim();
    if t == 0.0 {
        return Ok(SquareMatrix::identity(n));
    }
    let x = a.scaled(t);
    let norm = x.norm_one();
    if norm == 0.0 {
        return Ok(SquareMatrix::identity(n));
    }

    let mut squarings = 0u32;
    if norm > SCALED_NORM_LIMIT {
        squarings = (norm / SCALED_NORM_LIMIT).log2().ceil().max(0.0) as u32;
        // log2 rounding can leave the scaled norm a hair above the limit
        while norm / 2f64.powi(squarings as i32) > SCALED_NORM_LIMIT {
            squarings += 1;
        }
    }
    let x = x.scaled(2f64.powi(-(squarings as i32)));

    let c = pade_coefficients();
    let mut power = SquareMatrix::identity(n);
    let mut numer = SquareMatrix::identity(n).scaled(c[0]);
    let mut denom = numer.clone();
    for (k, &ck) in c.iter().enumerate().skip(1) {
        power = &power * &x;
        let term = power.scaled(ck);
        numer = numer.add(&term);
        denom = if k % 2 == 0 {
            denom.add(&term)
        } else {
            denom.sub(&term)
        };
    }
    let mut result = denom.solve(&numer)?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    if !result.is_finite() {
        return Err(Error::NumericalFailure {
            message: format!("matrix exponential overflowed at t = {t:e}"),
            partial: Box::new(a.clone()),
        });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &SquareMatrix, b: &SquareMatrix, tol: f64) -> bool {
        a.sub(b).norm_max() <= tol
    }

    #[test]
    fn zero_time_is_exact_identity() {
        let a = SquareMatrix::from_rows(&[[1.0, 2.0], [-3.0, 4.0]]).unwrap();
        assert_eq!(mat_exp(&a, 0.0).unwrap(), SquareMatrix::identity(2));
    }

    #[test]
    fn diagonal_matrix() {
        let a = SquareMatrix::from_diagonal(&[-1.0, 0.5, 2.0]);
        let e = mat_exp(&a, 1.5).unwrap();
        let want = SquareMatrix::from_diagonal(&[(-1.5f64).exp(), 0.75f64.exp(), 3.0f64.exp()]);
        for i in 0..3 {
            assert!((e[(i, i)] - want[(i, i)]).abs() <= 1e-14 * want[(i, i)]);
        }
        assert!(close(&e, &want, 1e-13));
    }

    #[test]
    fn rotation_generator() {
        let a = SquareMatrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        for &tau in &[0.1, 1.0, std::f64::consts::FRAC_PI_2, 3.0, 7.5] {
            let (s, c) = f64::sin_cos(tau);
            let want = SquareMatrix::from_rows(&[[c, -s], [s, c]]).unwrap();
            assert!(
                close(&mat_exp(&a, tau).unwrap(), &want, 1e-13),
                "tau = {tau}"
            );
        }
    }

    #[test]
    fn nilpotent_is_polynomial() {
        let a =
            SquareMatrix::from_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]]).unwrap();
        let e = mat_exp(&a, 2.0).unwrap();
        let want =
            SquareMatrix::from_rows(&[[1.0, 2.0, 2.0], [0.0, 1.0, 2.0], [0.0, 0.0, 1.0]]).unwrap();
        assert!(close(&e, &want, 1e-14));
    }

    #[test]
    fn semigroup_identity() {
        let a = SquareMatrix::from_rows(&[[-0.3, 1.2, 0.4], [0.7, -2.0, 0.1], [-1.1, 0.2, 0.5]])
            .unwrap();
        let (t, s) = (1.7, -0.9);
        let lhs = &mat_exp(&a, t).unwrap() * &mat_exp(&a, s).unwrap();
        let rhs = mat_exp(&a, t + s).unwrap();
        assert!(close(&lhs, &rhs, 1e-10));
    }

    #[test]
    fn non_finite_time_is_rejected() {
        let a = SquareMatrix::identity(2);
        assert!(matches!(mat_exp(&a, f64::NAN), Err(Error::InvalidInput(_))));
        assert!(matches!(
            mat_exp(&a, f64::INFINITY),
            Err(Error::InvalidInput(_))
        ));
    }
}
