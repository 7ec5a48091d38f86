//! Eigenvalues of a general real matrix.
//!
//! Pipeline: diagonal balancing by powers of two, Householder reduction to
//! upper Hessenberg form, then Francis double-shift QR with deflation of
//! 1×1 and 2×2 blocks. Only eigenvalues are computed.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::SquareMatrix;

/// Eigenvalues of a real matrix; complex values come in conjugate pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexEigenvalues {
    pub values: Vec<Complex64>,
}

impl ComplexEigenvalues {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest real part (the spectral abscissa).
    pub fn max_real_part(&self) -> f64 {
        self.values
            .iter()
            .fold(f64::NEG_INFINITY, |m, z| m.max(z.re))
    }

    pub fn all_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }

    /// Values sorted by (re, im), convenient for comparisons in tests.
    pub fn sorted(&self) -> Vec<Complex64> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }
}

const RADIX: f64 = 2.0;

fn balance(a: &mut SquareMatrix) {
    let n = a.dim();
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let ginv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= ginv;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

fn to_hessenberg(a: &mut SquareMatrix) {
    let n = a.dim();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let norm: f64 = ((k + 1)..n)
            .map(|i| a[(i, k)] * a[(i, k)])
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = ((k + 1)..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // rows: A ← (I − 2vvᵀ/vᵀv) A
        for j in 0..n {
            let dot: f64 = v
                .iter()
                .enumerate()
                .map(|(r, vr)| vr * a[(k + 1 + r, j)])
                .sum();
            let f = 2.0 * dot / vnorm2;
            for (r, vr) in v.iter().enumerate() {
                a[(k + 1 + r, j)] -= f * vr;
            }
        }
        // columns: A ← A (I − 2vvᵀ/vᵀv)
        for i in 0..n {
            let dot: f64 = v
                .iter()
                .enumerate()
                .map(|(c, vc)| vc * a[(i, k + 1 + c)])
                .sum();
            let f = 2.0 * dot / vnorm2;
            for (c, vc) in v.iter().enumerate() {
                a[(i, k + 1 + c)] -= f * vc;
            }
        }
        a[(k + 1, k)] = alpha;
        for i in (k + 2)..n {
            a[(i, k)] = 0.0;
        }
    }
}

#[inline]
fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix (destroyed).
fn hessenberg_qr(h: &mut SquareMatrix) -> Result<Vec<Complex64>> {
    let n = h.dim() as isize;
    let mut wr = vec![0.0; n as usize];
    let mut wi = vec![0.0; n as usize];
    let max_iterations = 100 * n as usize;
    let mut total_iterations = 0usize;

    macro_rules! a {
        ($i:expr, $j:expr) => {
            h[(($i) as usize, ($j) as usize)]
        };
    }

    let mut anorm = 0.0;
    for i in 0..n {
        for j in (i - 1).max(0)..n {
            anorm += a!(i, j).abs();
        }
    }

    let mut nn = n - 1;
    let mut t = 0.0;
    let (mut p, mut q, mut r) = (0.0f64, 0.0f64, 0.0f64);
    let (mut x, mut y, mut z, mut w);
    while nn >= 0 {
        let mut its = 0;
        let mut l;
        loop {
            l = nn;
            while l >= 1 {
                let mut s = a!(l - 1, l - 1).abs() + a!(l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a!(l, l - 1).abs() + s == s {
                    a!(l, l - 1) = 0.0;
                    break;
                }
                l -= 1;
            }
            x = a!(nn, nn);
            if l == nn {
                wr[nn as usize] = x + t;
                wi[nn as usize] = 0.0;
                nn -= 1;
            } else {
                y = a!(nn - 1, nn - 1);
                w = a!(nn, nn - 1) * a!(nn - 1, nn);
                if l == nn - 1 {
                    p = 0.5 * (y - x);
                    q = p * p + w;
                    z = q.abs().sqrt();
                    x += t;
                    let (i1, i2) = ((nn - 1) as usize, nn as usize);
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        wr[i1] = x + z;
                        wr[i2] = x + z;
                        if z != 0.0 {
                            wr[i2] = x - w / z;
                        }
                        wi[i1] = 0.0;
                        wi[i2] = 0.0;
                    } else {
                        wr[i1] = x + p;
                        wr[i2] = x + p;
                        wi[i1] = -z;
                        wi[i2] = z;
                    }
                    nn -= 2;
                } else {
                    total_iterations += 1;
                    if total_iterations > max_iterations {
                        return Err(Error::NumericalFailure {
                            message: format!(
                                "Francis QR did not converge within {max_iterations} iterations"
                            ),
                            partial: Box::new(h.clone()),
                        });
                    }
                    if its > 0 && its % 10 == 0 {
                        // exceptional shift
                        t += x;
                        for i in 0..=nn {
                            a!(i, i) -= x;
                        }
                        let s = a!(nn, nn - 1).abs() + a!(nn - 1, nn - 2).abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    while m >= l {
                        z = a!(m, m);
                        r = x - z;
                        let s = y - z;
                        p = (r * s - w) / a!(m + 1, m) + a!(m, m + 1);
                        q = a!(m + 1, m + 1) - z - r - s;
                        r = a!(m + 2, m + 1);
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a!(m, m - 1).abs() * (q.abs() + r.abs());
                        let v =
                            p.abs() * (a!(m - 1, m - 1).abs() + z.abs() + a!(m + 1, m + 1).abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nn {
                        a!(i, i - 2) = 0.0;
                        if i != m + 2 {
                            a!(i, i - 3) = 0.0;
                        }
                    }
                    let mut k = m;
                    while k < nn {
                        if k != m {
                            p = a!(k, k - 1);
                            q = a!(k + 1, k - 1);
                            r = 0.0;
                            if k != nn - 1 {
                                r = a!(k + 2, k - 1);
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a!(k, k - 1) = -a!(k, k - 1);
                                }
                            } else {
                                a!(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                p = a!(k, j) + q * a!(k + 1, j);
                                if k != nn - 1 {
                                    p += r * a!(k + 2, j);
                                    a!(k + 2, j) -= p * z;
                                }
                                a!(k + 1, j) -= p * y;
                                a!(k, j) -= p * x;
                            }
                            let mmin = nn.min(k + 3);
                            for i in l..=mmin {
                                p = x * a!(i, k) + y * a!(i, k + 1);
                                if k != nn - 1 {
                                    p += z * a!(i, k + 2);
                                    a!(i, k + 2) -= p * r;
                                }
                                a!(i, k + 1) -= p * q;
                                a!(i, k) -= p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if l >= nn - 1 {
                break;
            }
        }
    }
    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}

pub fn general_eigenvalues(m: &SquareMatrix) -> Result<ComplexEigenvalues> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let mut h = m.clone();
    balance(&mut h);
    to_hessenberg(&mut h);
    let values = hessenberg_qr(&mut h)?;
    Ok(ComplexEigenvalues { values })
}

/// Largest eigenvalue modulus.
pub fn spectral_radius_general(m: &SquareMatrix) -> Result<f64> {
    Ok(general_eigenvalues(m)?.spectral_radius())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_spectrum(m: &SquareMatrix, expected: &[Complex64], tol: f64) {
        let got = general_eigenvalues(m).unwrap().sorted();
        let mut want = expected.to_vec();
        want.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert!(
                (g - w).norm() <= tol * (1.0 + w.norm()),
                "got {got:?}, want {want:?}"
            );
        }
    }

    #[test]
    fn upper_triangular_gives_diagonal() {
        let m = SquareMatrix::from_rows(&[
            [1.0, 5.0, -2.0, 0.3],
            [0.0, -3.0, 4.0, 1.0],
            [0.0, 0.0, 0.5, 7.0],
            [0.0, 0.0, 0.0, 2.0],
        ])
        .unwrap();
        let want: Vec<Complex64> = [1.0, -3.0, 0.5, 2.0]
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        assert_spectrum(&m, &want, 1e-12);
    }

    #[test]
    fn companion_matrix() {
        // x² − 5x + 6
        let m = SquareMatrix::from_rows(&[[5.0, -6.0], [1.0, 0.0]]).unwrap();
        assert_spectrum(
            &m,
            &[Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0)],
            1e-13,
        );
    }

    #[test]
    fn rotation_control_at_quarter_turn() {
        // D e^{τA} at τ = π/2, d = 0.25: [[0, -1], [0.25, 0]], eigenvalues ±0.5i
        let tau = std::f64::consts::FRAC_PI_2;
        let d = 0.25;
        let (s, c) = tau.sin_cos();
        let m = SquareMatrix::from_rows(&[[c, -s], [d * s, d * c]]).unwrap();
        let ev = general_eigenvalues(&m).unwrap();
        assert_spectrum(
            &m,
            &[Complex64::new(0.0, 0.5), Complex64::new(0.0, -0.5)],
            1e-12,
        );
        assert!((ev.spectral_radius() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn larger_companion_with_complex_roots() {
        // (x² + 1)(x − 2)(x + 3) = x⁴ + x³ − 5x² + x − 6
        let m = SquareMatrix::from_rows(&[
            [-1.0, 5.0, -1.0, 6.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let want = [
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(-3.0, 0.0),
        ];
        assert_spectrum(&m, &want, 1e-10);
    }

    #[test]
    fn scalar_and_radius() {
        let m = SquareMatrix::from_rows(&[[-4.5]]).unwrap();
        assert_eq!(spectral_radius_general(&m).unwrap(), 4.5);
        let d = SquareMatrix::from_diagonal(&[0.5, 0.25]);
        assert_eq!(spectral_radius_general(&d).unwrap(), 0.5);
    }

    #[test]
    fn conjugate_closed() {
        let m = SquareMatrix::from_rows(&[[0.0, -2.0, 1.0], [3.0, 0.5, 0.0], [-1.0, 1.0, 0.2]])
            .unwrap();
        let ev = general_eigenvalues(&m).unwrap();
        for z in &ev.values {
            if z.im != 0.0 {
                assert!(ev.values.iter().any(|w| w.re == z.re && w.im == -z.im));
            }
        }
    }
}
