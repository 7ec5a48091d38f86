//! The map `τ ↦ r(D e^{τA})`.
//!
//! For symmetrizable `A` with `Ã = T⁻¹AT`, the matrix `D e^{τA}` is similar
//! to the symmetric positive-definite `D^{1/2} e^{τÃ} D^{1/2}`, so the
//! spectral radius is its largest eigenvalue. Writing `Ã = QΛQᵀ` gives
//!
//! ```text
//! r(τ) = max { Σ e^{λ_i τ} y_i²  :  yᵀ (QᵀD⁻¹Q) y = 1 },
//! ```
//!
//! a pointwise maximum of convex functions of `τ`. [`SpectralFactor`]
//! evaluates this form from a single eigendecomposition; [`r_tau`]
//! recomputes the exponential at every call and [`r_tau_general`] uses the
//! non-symmetric eigensolver. The three are cross-checked in tests.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    cholesky, mat_exp, solve_lower, spectral_radius_general, sym_eig, SquareMatrix,
};
use crate::system::ControlSystem;

/// `A` counts as singular when `min |λ_i| ≤ NONSINGULAR_TOL · max(1, ‖A‖₁)`.
pub const NONSINGULAR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Symmetrized,
    General,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Symmetrized => "symmetrized",
            Method::General => "general",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCurve {
    pub taus: Vec<f64>,
    pub radii: Vec<f64>,
    pub methods: Vec<Method>,
}

impl SpectralCurve {
    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() && tau >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "tau must be finite and nonnegative, got {tau}"
        )))
    }
}

fn max_eigenvalue(m: &SquareMatrix) -> Result<f64> {
    Ok(sym_eig(&m.symmetric_part())?.max())
}

/// `D^{1/2} E D^{1/2}` as `E_ij √(d_i d_j)`, exact on the diagonal.
fn sqrt_congruence(e: &SquareMatrix, d: &[f64]) -> SquareMatrix {
    let n = e.dim();
    let mut m = e.clone();
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] *= if i == j { d[i] } else { (d[i] * d[j]).sqrt() };
        }
    }
    m
}

/// `λ_max(D^{1/2} e^{τÃ} D^{1/2})`; requires a symmetrizable system.
pub fn r_tau(sys: &ControlSystem, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    let sym = sys.symmetric_generator().ok_or(Error::WrongPath)?;
    let m = sqrt_congruence(&mat_exp(&sym, tau)?, sys.d().entries());
    max_eigenvalue(&m)
}

/// `ρ(D e^{τA})` from the general eigensolver; valid for any system.
pub fn r_tau_general(sys: &ControlSystem, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    let m = mat_exp(sys.a(), tau)?.scale_rows(sys.d().entries());
    spectral_radius_general(&m)
}

/// Evaluates `r(τ)` by the symmetrized path when the system allows it.
pub fn radius(sys: &ControlSystem, tau: f64) -> Result<(f64, Method)> {
    if sys.is_symmetrizable() {
        Ok((r_tau(sys, tau)?, Method::Symmetrized))
    } else {
        Ok((r_tau_general(sys, tau)?, Method::General))
    }
}

/// Uniform grid of `n_samples` points on `[0, tau_max]`.
pub fn sample_curve(sys: &ControlSystem, tau_max: f64, n_samples: usize) -> Result<SpectralCurve> {
    if !(tau_max.is_finite() && tau_max > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tau_max must be positive, got {tau_max}"
        )));
    }
    if n_samples < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 samples, got {n_samples}"
        )));
    }
    let last = (n_samples - 1) as f64;
    let taus: Vec<f64> = (0..n_samples)
        .map(|i| {
            if i == n_samples - 1 {
                tau_max
            } else {
                tau_max * i as f64 / last
            }
        })
        .collect();
    let mut radii = Vec::with_capacity(n_samples);
    let mut methods = Vec::with_capacity(n_samples);
    for &tau in &taus {
        let (r, method) = radius(sys, tau)?;
        radii.push(r);
        methods.push(method);
    }
    Ok(SpectralCurve {
        taus,
        radii,
        methods,
    })
}

/// `r'(0) = D_kk A_kk`, where `k` is the unique index of the largest `D_ii`.
pub fn derivative_at_zero(sys: &ControlSystem) -> Result<f64> {
    let k = sys.d().unique_argmax().ok_or_else(|| {
        Error::NotApplicable("the largest diagonal entry of D is not unique".into())
    })?;
    Ok(sys.d().entries()[k] * sys.a()[(k, k)])
}

/// Eigendecomposition `Ã = QΛQᵀ` together with `D`, reused across `τ`.
#[derive(Debug, Clone)]
pub struct SpectralFactor {
    eigenvalues: Vec<f64>,
    q: SquareMatrix,
    d: Vec<f64>,
    a_norm: f64,
}

impl SpectralFactor {
    pub fn new(sys: &ControlSystem) -> Result<Self> {
        let sym = sys.symmetric_generator().ok_or(Error::WrongPath)?;
        let eig = sym_eig(&sym)?;
        Ok(Self {
            eigenvalues: eig.values,
            q: eig.vectors,
            d: sys.d().entries().to_vec(),
            a_norm: sys.a().norm_one(),
        })
    }

    /// Eigenvalues of `A` (equivalently of `Ã`), ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn q(&self) -> &SquareMatrix {
        &self.q
    }

    pub fn is_nonsingular(&self) -> bool {
        let smallest = self
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |m, v| m.min(v.abs()));
        smallest > NONSINGULAR_TOL * self.a_norm.max(1.0)
    }

    /// `QᵀD⁻¹Q`, the matrix of the ellipsoidal constraint.
    pub fn constraint_form(&self) -> SquareMatrix {
        let inv_d: Vec<f64> = self.d.iter().map(|v| 1.0 / v).collect();
        let form = &self.q.transpose() * &self.q.scale_rows(&inv_d);
        form.symmetric_part()
    }

    /// `D^{1/2} Q e^{τΛ} Qᵀ D^{1/2}`.
    pub fn similar_matrix(&self, tau: f64) -> SquareMatrix {
        let sqrt_d: Vec<f64> = self.d.iter().map(|v| v.sqrt()).collect();
        let exp_l: Vec<f64> = self.eigenvalues.iter().map(|l| (l * tau).exp()).collect();
        let left = self.q.scale_rows(&sqrt_d);
        (&left.scale_cols(&exp_l) * &left.transpose()).symmetric_part()
    }

    /// `r(τ)`. Accepts any finite `τ`, including negative values, where it
    /// is the analytic continuation of the same formula.
    pub fn radius(&self, tau: f64) -> Result<f64> {
        if !tau.is_finite() {
            return Err(Error::InvalidInput(format!(
                "tau must be finite, got {tau}"
            )));
        }
        if tau == 0.0 {
            return Ok(self.d.iter().copied().fold(f64::NEG_INFINITY, f64::max));
        }
        max_eigenvalue(&self.similar_matrix(tau))
    }

    /// `f_y(τ) = Σ e^{λ_i τ} y_i²`.
    pub fn quadratic_value(&self, y: &[f64], tau: f64) -> f64 {
        self.eigenvalues
            .iter()
            .zip(y)
            .map(|(l, yi)| (l * tau).exp() * yi * yi)
            .sum()
    }

    /// Lower bound `m_p` on `r''` over `[0, p]`: the minimum of
    /// `Σ b_i² y_i²` on the constraint ellipsoid, with `b_i² = λ_i² e^{λ_i p}`
    /// for negative and `λ_i²` for positive eigenvalues.
    pub fn strong_convexity_parameter(&self, p: f64) -> Result<f64> {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidInput(format!("p must be positive, got {p}")));
        }
        if !self.is_nonsingular() {
            return Err(Error::NotApplicable("A is singular".into()));
        }
        let b: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|&l| {
                if l < 0.0 {
                    l.abs() * (0.5 * l * p).exp()
                } else {
                    l
                }
            })
            .collect();
        // min of yᵀ diag(b²) y subject to yᵀ B y = 1, with B = L Lᵀ:
        // smallest eigenvalue of L⁻¹ diag(b²) L⁻ᵀ
        let l = cholesky(&self.constraint_form())?;
        let x = solve_lower(&l, &SquareMatrix::from_diagonal(&b));
        let pencil = &x * &x.transpose();
        Ok(sym_eig(&pencil.symmetric_part())?.min())
    }
}

pub fn strong_convexity_parameter(sys: &ControlSystem, p: f64) -> Result<f64> {
    SpectralFactor::new(sys)?.strong_convexity_parameter(p)
}
