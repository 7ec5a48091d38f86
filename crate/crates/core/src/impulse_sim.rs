//! Closed-form simulation of the pulsed system and an independent check of
//! its monodromy matrix.
//!
//! A pulse is applied at `t = 0` (`x(0⁺) = D x0`) and then at every
//! multiple of `τ`, so the pre-pulse states obey
//! `x((n+1)τ⁻) = e^{τA} D x(nτ⁻)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{mat_exp, SquareMatrix};
use crate::system::ControlSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tag {
    PreJump,
    PostJump,
    Interior,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::PreJump => "pre",
            Tag::PostJump => "post",
            Tag::Interior => "interior",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub x: Vec<f64>,
    pub tag: Tag,
}

#[derive(Debug, Clone)]
pub struct ImpulseTrajectory {
    pub samples: Vec<Sample>,
    pub period: f64,
    pub n_periods: usize,
}

impl ImpulseTrajectory {
    /// `x(nτ⁻)` for `n = 0..=n_periods`.
    pub fn pre_jump_states(&self) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(|s| s.tag == Tag::PreJump)
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn jump(d: &[f64], x: &[f64]) -> Vec<f64> {
    d.iter().zip(x).map(|(di, xi)| di * xi).collect()
}

/// Simulates `n_periods` periods, recording pre- and post-pulse states at
/// every `nτ` and `interior_samples_per_period` evenly spaced states
/// between pulses.
pub fn propagate(
    sys: &ControlSystem,
    x0: &[f64],
    tau: f64,
    n_periods: usize,
    interior_samples_per_period: usize,
) -> Result<ImpulseTrajectory> {
    if x0.len() != sys.dim() {
        return Err(Error::InvalidInput(format!(
            "initial state has {} entries, system dimension is {}",
            x0.len(),
            sys.dim()
        )));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("initial state is not finite".into()));
    }
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tau must be positive, got {tau}"
        )));
    }
    let d = sys.d().entries();
    let flow = mat_exp(sys.a(), tau)?;
    let m = interior_samples_per_period;
    let partial_flows = (1..=m)
        .map(|j| {
            let dt = tau * j as f64 / (m + 1) as f64;
            mat_exp(sys.a(), dt).map(|e| (dt, e))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut samples = Vec::with_capacity((n_periods + 1) * (m + 2));
    let mut pre = x0.to_vec();
    for n in 0..=n_periods {
        let t = n as f64 * tau;
        let post = jump(d, &pre);
        let pre_sample = Sample {
            t,
            x: pre,
            tag: Tag::PreJump,
        };
        if post.iter().any(|v| !v.is_finite()) {
            return Err(overflow(&samples, pre_sample));
        }
        samples.push(pre_sample);
        samples.push(Sample {
            t,
            x: post.clone(),
            tag: Tag::PostJump,
        });
        if n == n_periods {
            break;
        }
        for (dt, e) in &partial_flows {
            let x = e.mul_vec(&post);
            if x.iter().any(|v| !v.is_finite()) {
                return Err(overflow(
                    &samples,
                    samples.last().cloned().expect("non-empty"),
                ));
            }
            samples.push(Sample {
                t: t + dt,
                x,
                tag: Tag::Interior,
            });
        }
        pre = flow.mul_vec(&post);
        if pre.iter().any(|v| !v.is_finite()) {
            return Err(overflow(
                &samples,
                samples.last().cloned().expect("non-empty"),
            ));
        }
    }
    Ok(ImpulseTrajectory {
        samples,
        period: tau,
        n_periods,
    })
}

fn overflow(samples: &[Sample], candidate: Sample) -> Error {
    let last = if candidate.x.iter().all(|v| v.is_finite()) {
        candidate
    } else {
        samples.last().cloned().unwrap_or(candidate)
    };
    Error::Overflow {
        last: Box::new(last),
    }
}

/// `e^{τA} D`, the state transition over one period starting just before a
/// pulse.
pub fn monodromy(sys: &ControlSystem, tau: f64) -> Result<SquareMatrix> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tau must be positive, got {tau}"
        )));
    }
    Ok(mat_exp(sys.a(), tau)?.scale_cols(sys.d().entries()))
}

/// `|ln d_i|` above this triggers a ten-fold finer step on the pulse segment.
pub const STIFF_LOG_CONTROL: f64 = 50.0;

#[derive(Debug, Clone, PartialEq)]
pub struct FloquetCheck {
    /// `‖Y(τ+1) − e^{τA}D‖_max`
    pub residual: f64,
    /// `1e-6 · (1 + ‖e^{τA}D‖_max)`
    pub tolerance: f64,
    /// Steps on the `ln D` segment and on the `A` segment.
    pub steps: (usize, usize),
    pub stiff: bool,
}

impl FloquetCheck {
    pub fn passes(&self) -> bool {
        self.residual <= self.tolerance
    }
}

fn rk4(b: &SquareMatrix, mut y: SquareMatrix, h: f64, steps: usize) -> SquareMatrix {
    for _ in 0..steps {
        let k1 = b * &y;
        let k2 = b * &y.add(&k1.scaled(0.5 * h));
        let k3 = b * &y.add(&k2.scaled(0.5 * h));
        let k4 = b * &y.add(&k3.scaled(h));
        let incr = k1.add(&k2.scaled(2.0)).add(&k3.scaled(2.0)).add(&k4);
        y = y.add(&incr.scaled(h / 6.0));
    }
    y
}

/// Integrates the periodic system `y' = B(t) y` with `B = ln D` on `[0, 1)`
/// and `B = A` on `[1, τ+1)` by classical fourth-order Runge–Kutta, and
/// compares its state transition over `[0, τ+1]` with `e^{τA} D`.
///
/// The base step is at most `1e-3·(τ+1)`; `refinement` divides it further
/// (a refinement of 2 halves every step exactly).
pub fn floquet_residual(sys: &ControlSystem, tau: f64, refinement: usize) -> Result<FloquetCheck> {
    if refinement == 0 {
        return Err(Error::InvalidInput("refinement must be at least 1".into()));
    }
    let target = monodromy(sys, tau)?;
    let log_d: Vec<f64> = sys.d().entries().iter().map(|v| v.ln()).collect();
    let stiff = log_d.iter().any(|v| v.abs() > STIFF_LOG_CONTROL);

    let h = 1e-3 * (tau + 1.0);
    let mut n_pulse = (1.0 / h).ceil() as usize * refinement;
    if stiff {
        n_pulse *= 10;
    }
    let n_flow = (tau / h).ceil() as usize * refinement;

    let n = sys.dim();
    let y = rk4(
        &SquareMatrix::from_diagonal(&log_d),
        SquareMatrix::identity(n),
        1.0 / n_pulse as f64,
        n_pulse,
    );
    let y = rk4(sys.a(), y, tau / n_flow as f64, n_flow);

    Ok(FloquetCheck {
        residual: y.sub(&target).norm_max(),
        tolerance: 1e-6 * (1.0 + target.norm_max()),
        steps: (n_pulse, n_flow),
        stiff,
    })
}

pub fn verify_floquet_equivalence(sys: &ControlSystem, tau: f64) -> Result<FloquetCheck> {
    floquet_residual(sys, tau, 1)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFactor {
    pub factor: f64,
    /// The state underflowed to exactly zero.
    pub extinct: bool,
}

/// Geometric mean of `‖x((n+1)τ⁻)‖ / ‖x(nτ⁻)‖` over the second half of
/// the trajectory (Euclidean norm).
pub fn empirical_growth_factor(traj: &ImpulseTrajectory) -> Result<GrowthFactor> {
    let norms: Vec<f64> = traj.pre_jump_states().map(|s| norm(&s.x)).collect();
    let periods = norms.len().saturating_sub(1);
    if periods < 10 {
        return Err(Error::InvalidInput(format!(
            "need at least 10 periods to estimate growth, got {periods}"
        )));
    }
    if norms[0] == 0.0 {
        return Err(Error::InvalidInput("initial state is zero".into()));
    }
    let start = periods / 2;
    if norms[start..].contains(&0.0) {
        return Ok(GrowthFactor {
            factor: 0.0,
            extinct: true,
        });
    }
    let log_sum: f64 = norms[start..].windows(2).map(|w| (w[1] / w[0]).ln()).sum();
    let factor = (log_sum / (periods - start) as f64).exp();
    Ok(GrowthFactor {
        factor,
        extinct: false,
    })
}
