#![allow(dead_code)]

use pulsekit_core::{ControlSystem, DiagonalControl, SquareMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, n: usize, bound: f64) -> SquareMatrix {
    let data = (0..n * n)
        .map(|_| rng.random_range(-bound..=bound))
        .collect();
    SquareMatrix::new(n, data).unwrap()
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize, bound: f64) -> SquareMatrix {
    let m = random_matrix(rng, n, bound);
    m.symmetric_part()
}

/// `T S T⁻¹` with `S` symmetric, redrawn until every entry lies in `[-bound, bound]`.
pub fn random_symmetrizable(rng: &mut impl Rng, n: usize, bound: f64) -> SquareMatrix {
    loop {
        let s = random_symmetric(rng, n, bound);
        let t: Vec<f64> = (0..n).map(|_| rng.random_range(0.6..1.6)).collect();
        let inv: Vec<f64> = t.iter().map(|v| 1.0 / v).collect();
        let a = s.scale_rows(&t).scale_cols(&inv);
        if a.norm_max() <= bound {
            return a;
        }
    }
}

pub fn random_control(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> DiagonalControl {
    DiagonalControl::new((0..n).map(|_| rng.random_range(lo..=hi)).collect()).unwrap()
}

/// Control whose largest entry beats the runner-up by at least `gap`.
pub fn random_control_with_gap(rng: &mut impl Rng, n: usize, gap: f64) -> DiagonalControl {
    loop {
        let d = random_control(rng, n, 0.05, 1.0);
        let mut sorted = d.entries().to_vec();
        sorted.sort_by(|a, b| b.total_cmp(a));
        if n == 1 || sorted[0] - sorted[1] >= gap {
            return d;
        }
    }
}

pub fn system(a: SquareMatrix, d: DiagonalControl) -> ControlSystem {
    ControlSystem::new(a, d, "time").unwrap()
}

pub fn system_from(a: &[&[f64]], d: &[f64]) -> ControlSystem {
    system(
        SquareMatrix::from_rows(a).unwrap(),
        DiagonalControl::new(d.to_vec()).unwrap(),
    )
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

#[derive(Debug, Clone, Copy)]
pub enum Plant {
    /// `T S T⁻¹` with `S` symmetric.
    Symmetrizable,
    /// Symmetrizable, then one off-diagonal entry rescaled.
    Perturbed,
    /// Independent magnitudes with matching signs.
    Raw,
}

/// Sign-symmetric matrix with a random symmetric zero pattern.
pub fn random_sign_symmetric(rng: &mut impl Rng, n: usize, plant: Plant) -> SquareMatrix {
    let t: Vec<f64> = (0..n).map(|_| rng.random_range(0.3..3.0)).collect();
    let mut a = SquareMatrix::zeros(n);
    for i in 0..n {
        a[(i, i)] = rng.random_range(-3.0..3.0);
        for j in i + 1..n {
            if rng.random_bool(0.3) {
                continue;
            }
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let s = sign * rng.random_range(0.1..3.0);
            match plant {
                Plant::Raw => {
                    a[(i, j)] = s;
                    a[(j, i)] = sign * rng.random_range(0.1..3.0);
                }
                _ => {
                    a[(i, j)] = s * t[i] / t[j];
                    a[(j, i)] = s * t[j] / t[i];
                }
            }
        }
    }
    if let Plant::Perturbed = plant {
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && a[(i, j)] != 0.0)
            .collect();
        if !edges.is_empty() {
            let e = edges[rng.random_range(0..edges.len())];
            a[e] *= 1.0 + rng.random_range(0.05..1.0);
        }
    }
    a
}
