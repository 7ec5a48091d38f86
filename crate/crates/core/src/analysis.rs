//! Regime classification, stability threshold `τ_s` and optimal period `τ_m`.
//!
//! For a symmetrizable `A` and control `D` with entries in (0, 1], let `k`
//! be the unique index of the largest `D_ii`. Then
//!
//! * `λ_max(A) < 0`: `r` decreases on `[0, ∞)`; pulsing never pays off.
//! * `λ_max(A) > 0`, `A_kk > 0`: `r` increases from `r(0) = D_kk`; pulse as
//!   often as possible, and `τ_s` exists when `D_kk < 1`.
//! * `λ_max(A) > 0`, `A_kk < 0`, `A` nonsingular: `r` dips below `r(0)`,
//!   reaches its unique minimum at `τ_m`, and crosses 1 once at `τ_s > τ_m`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::general_eigenvalues;
use crate::spectral_map::{SpectralFactor, NONSINGULAR_TOL};
use crate::system::ControlSystem;

/// Relative width at which the `τ_s` bisection stops.
pub const TAU_S_REL_WIDTH: f64 = 1e-12;
/// Relative bracket width at which the golden-section search stops.
pub const TAU_M_REL_WIDTH: f64 = 1e-9;
/// The bracket for `τ_s` grows by doubling at most this many times.
pub const MAX_DOUBLINGS: i32 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    StableNeverControl,
    UnstableSelfPromotingWeakClass,
    UnstableInteriorOptimum,
    OutOfTheoryScope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Limit {
    DivergesToInfinity,
    DecaysToZero,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisCheck {
    pub check: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl HypothesisCheck {
    fn new(check: &str, holds: bool, detail: Option<String>) -> Self {
        Self {
            check: check.to_owned(),
            holds,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub regime: Regime,
    /// Largest eigenvalue of `A`; for non-symmetrizable `A`, the largest
    /// real part of its eigenvalues.
    pub lambda_max: Option<f64>,
    /// 0-based index of the unique largest `D_ii`.
    pub k: Option<usize>,
    pub tau_s: Option<f64>,
    pub tau_m: Option<f64>,
    pub r_at_tau_m: Option<f64>,
    pub diagnostics: Vec<HypothesisCheck>,
}

impl AnalysisReport {
    pub fn check(&self, name: &str) -> Option<&HypothesisCheck> {
        self.diagnostics.iter().find(|c| c.check == name)
    }
}

fn zero_threshold(sys: &ControlSystem) -> f64 {
    NONSINGULAR_TOL * sys.a().norm_one().max(1.0)
}

fn sign_label(v: f64, thr: f64) -> &'static str {
    if v > thr {
        "positive"
    } else if v < -thr {
        "negative"
    } else {
        "zero"
    }
}

pub fn classify(sys: &ControlSystem) -> AnalysisReport {
    let mut report = AnalysisReport {
        regime: Regime::OutOfTheoryScope,
        lambda_max: None,
        k: sys.d().unique_argmax(),
        tau_s: None,
        tau_m: None,
        r_at_tau_m: None,
        diagnostics: Vec::new(),
    };
    let thr = zero_threshold(sys);
    let diag = &mut report.diagnostics;

    let symmetrizable = sys.is_symmetrizable();
    diag.push(HypothesisCheck::new(
        "symmetrizable",
        symmetrizable,
        Some(format!("{:?}", sys.certificate().verdict)),
    ));
    let factor = match SpectralFactor::new(sys) {
        Ok(f) => f,
        Err(e) => {
            report.lambda_max = general_eigenvalues(sys.a())
                .ok()
                .map(|ev| ev.max_real_part());
            if symmetrizable {
                diag.push(HypothesisCheck::new(
                    "eigendecomposition",
                    false,
                    Some(e.to_string()),
                ));
            }
            return report;
        }
    };
    let lambda = factor.lambda_max();
    report.lambda_max = Some(lambda);
    let nonsingular = factor.is_nonsingular();
    diag.push(HypothesisCheck::new("nonsingular", nonsingular, None));

    let Some(k) = report.k else {
        diag.push(HypothesisCheck::new(
            "unique_k",
            false,
            Some("largest entry of D is tied".into()),
        ));
        return report;
    };
    diag.push(HypothesisCheck::new(
        "unique_k",
        true,
        Some(format!("k = {}", k + 1)),
    ));

    let d_kk = sys.d().entries()[k];
    let constrained = sys.d().is_constrained();
    diag.push(HypothesisCheck::new(
        "control_constrained",
        constrained,
        None,
    ));
    let a_kk = sys.a()[(k, k)];
    diag.push(HypothesisCheck::new(
        "a_kk_sign",
        a_kk.abs() > thr,
        Some(sign_label(a_kk, thr).to_owned()),
    ));
    if let Ok(holds) = stable_diagonal_check(sys) {
        diag.push(HypothesisCheck::new("stable_diagonal", holds, None));
    }
    if !constrained {
        return report;
    }

    if lambda < -thr {
        report.regime = Regime::StableNeverControl;
        return report;
    }
    if lambda <= thr {
        diag.push(HypothesisCheck::new("lambda_max_nonzero", false, None));
        return report;
    }

    if a_kk > thr {
        report.regime = Regime::UnstableSelfPromotingWeakClass;
        report.tau_m = Some(0.0);
        report.r_at_tau_m = Some(d_kk);
        if d_kk < 1.0 {
            match find_tau_s(sys) {
                Ok(ts) => report.tau_s = Some(ts),
                Err(e) => {
                    report.regime = Regime::OutOfTheoryScope;
                    report.tau_m = None;
                    report.r_at_tau_m = None;
                    report.diagnostics.push(HypothesisCheck::new(
                        "tau_s",
                        false,
                        Some(e.to_string()),
                    ));
                }
            }
        } else {
            report.diagnostics.push(HypothesisCheck::new(
                "tau_s",
                false,
                Some(
                    "D_kk = 1 with A_kk > 0: r(tau) >= 1 for all tau, no stabilizing period".into(),
                ),
            ));
        }
        return report;
    }

    if a_kk < -thr && nonsingular {
        match interior_optimum(sys, &factor) {
            Ok((ts, tm, rm)) => {
                report.regime = Regime::UnstableInteriorOptimum;
                report.tau_s = Some(ts);
                report.tau_m = Some(tm);
                report.r_at_tau_m = Some(rm);
            }
            Err(e) => {
                report.diagnostics.push(HypothesisCheck::new(
                    "interior_optimum",
                    false,
                    Some(e.to_string()),
                ));
            }
        }
    }
    report
}

fn interior_optimum(sys: &ControlSystem, factor: &SpectralFactor) -> Result<(f64, f64, f64)> {
    let tau_s = tau_s_with(factor, sys)?;
    let (tau_m, r_min) = golden_section(|t| factor.radius(t), 0.0, tau_s, TAU_M_REL_WIDTH * tau_s)?;
    Ok((tau_s, tau_m, r_min))
}

/// The unique `τ_s > 0` with `r(τ_s) = 1` in the two unstable regimes.
pub fn find_tau_s(sys: &ControlSystem) -> Result<f64> {
    let factor = SpectralFactor::new(sys)?;
    tau_s_with(&factor, sys)
}

fn tau_s_with(factor: &SpectralFactor, sys: &ControlSystem) -> Result<f64> {
    let lambda = factor.lambda_max();
    if lambda <= zero_threshold(sys) {
        return Err(Error::Precondition(format!(
            "tau_s requires lambda_max(A) > 0, got {lambda:e}"
        )));
    }
    if factor.radius(0.0)? > 1.0 {
        return Err(Error::Precondition("r(0) = max D_ii exceeds 1".into()));
    }
    let r = |t: f64| factor.radius(t);

    let tau0 = 0.1 / lambda;
    let limit = tau0 * 2f64.powi(MAX_DOUBLINGS);
    let mut lo = 0.0;
    let mut hi = tau0;
    while r(hi)? <= 1.0 {
        lo = hi;
        hi *= 2.0;
        if hi > limit {
            return Err(Error::NoCrossing { limit });
        }
    }
    while hi - lo > TAU_S_REL_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if r(mid)? > 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (r_lo, r_hi) = (r(lo)?, r(hi)?);
    Ok(if (r_lo - 1.0).abs() <= (r_hi - 1.0).abs() {
        lo
    } else {
        hi
    })
}

/// Minimizer of `r` and the minimum value.
///
/// Interior regime: golden-section search on `[0, τ_s]`. Self-promoting
/// regime: `(0, D_kk)`.
pub fn find_tau_m(sys: &ControlSystem) -> Result<(f64, f64)> {
    let factor = SpectralFactor::new(sys)?;
    let thr = zero_threshold(sys);
    let lambda = factor.lambda_max();
    if lambda < -thr {
        return Err(Error::NoMinimizer(
            "lambda_max(A) < 0: r decreases for all tau, infimum approached as tau -> infinity"
                .into(),
        ));
    }
    let k = sys.d().unique_argmax().ok_or_else(|| {
        Error::NotApplicable("the largest diagonal entry of D is not unique".into())
    })?;
    let a_kk = sys.a()[(k, k)];
    if lambda > thr && a_kk > thr {
        return Ok((0.0, sys.d().entries()[k]));
    }
    if lambda > thr && a_kk < -thr && factor.is_nonsingular() {
        let (_, tm, rm) = interior_optimum(sys, &factor)?;
        return Ok((tm, rm));
    }
    Err(Error::NotApplicable(
        "system is outside the classified regimes".into(),
    ))
}

/// Golden-section search for the minimum of a unimodal `f` on `[a, b]`,
/// stopping once the bracket is narrower than `width`.
pub fn golden_section<F>(f: F, mut a: f64, mut b: f64, width: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > width {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2)?;
        }
        if x1 >= x2 {
            break;
        }
    }
    let mid = 0.5 * (a + b);
    Ok((mid, f(mid)?))
}

pub fn limit_at_infinity(sys: &ControlSystem) -> Result<Limit> {
    let lambda = SpectralFactor::new(sys)?.lambda_max();
    let thr = zero_threshold(sys);
    if lambda.abs() <= thr {
        return Err(Error::Indeterminate(format!(
            "lambda_max(A) = {lambda:e} is zero to working precision"
        )));
    }
    Ok(if lambda > 0.0 {
        Limit::DivergesToInfinity
    } else {
        Limit::DecaysToZero
    })
}

/// If `λ_max(A) < 0`, every diagonal entry of `A` is negative. Returns
/// whether that conclusion holds (vacuously true when `λ_max(A) ≥ 0`).
pub fn stable_diagonal_check(sys: &ControlSystem) -> Result<bool> {
    let lambda = SpectralFactor::new(sys)?.lambda_max();
    if lambda >= 0.0 {
        return Ok(true);
    }
    Ok(sys.a().diagonal().iter().all(|&v| v < 0.0))
}
