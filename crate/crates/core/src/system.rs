use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::symmetrize::{symmetrize, SymmetrizationCertificate};

/// Positive diagonal of the pulse matrix `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalControl {
    d: Vec<f64>,
}

impl DiagonalControl {
    pub fn new(d: Vec<f64>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::InvalidInput("control diagonal is empty".into()));
        }
        if let Some((i, v)) = d
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::InvalidInput(format!(
                "control entry {i} must be positive and finite, got {v}"
            )));
        }
        Ok(Self { d })
    }

    pub fn entries(&self) -> &[f64] {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// All entries lie in (0, 1], i.e. every pulse removes a fraction.
    pub fn is_constrained(&self) -> bool {
        self.d.iter().all(|&v| v <= 1.0)
    }

    pub fn max(&self) -> f64 {
        self.d.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the strictly largest entry, if it is unique.
    pub fn unique_argmax(&self) -> Option<usize> {
        let max = self.max();
        let mut hits = self.d.iter().enumerate().filter(|(_, &v)| v == max);
        let (k, _) = hits.next()?;
        hits.next().is_none().then_some(k)
    }

    pub fn as_matrix(&self) -> SquareMatrix {
        SquareMatrix::from_diagonal(&self.d)
    }
}

/// `x' = A x` between pulses and `x(nτ⁺) = D x(nτ⁻)` at pulses.
#[derive(Debug, Clone)]
pub struct ControlSystem {
    a: SquareMatrix,
    d: DiagonalControl,
    time_unit: String,
    certificate: SymmetrizationCertificate,
}

impl ControlSystem {
    pub fn new(a: SquareMatrix, d: DiagonalControl, time_unit: impl Into<String>) -> Result<Self> {
        if a.dim() != d.len() {
            return Err(Error::InvalidInput(format!(
                "A is {n}x{n} but D has {} entries",
                d.len(),
                n = a.dim()
            )));
        }
        let certificate = symmetrize(&a);
        Ok(Self {
            a,
            d,
            time_unit: time_unit.into(),
            certificate,
        })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn a(&self) -> &SquareMatrix {
        &self.a
    }

    pub fn d(&self) -> &DiagonalControl {
        &self.d
    }

    pub fn time_unit(&self) -> &str {
        &self.time_unit
    }

    pub fn certificate(&self) -> &SymmetrizationCertificate {
        &self.certificate
    }

    pub fn is_symmetrizable(&self) -> bool {
        self.certificate.is_symmetrizable()
    }

    /// `Ã` with any residual asymmetry averaged out.
    pub fn symmetric_generator(&self) -> Option<SquareMatrix> {
        self.certificate
            .symmetrized
            .as_ref()
            .map(SquareMatrix::symmetric_part)
    }
}
