//! Loss functions, their negative gradients, and the loss-minimal offset.
//!
//! Squared error: rho(y, f) = (y - f)^2 / 2, so u = y - f.
//! Logistic (binomial log-likelihood with y in {0, 1} and f the log-odds):
//! rho(y, f) = log(1 + e^f) - y * f, so u = y - sigma(f).

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    /// Real-valued response.
    SquaredError,
    /// Response in {0, 1}; the fitted value is the log-odds.
    Logistic,
}

impl LossKind {
    /// Checks that the response values are admissible for this loss.
    pub fn validate_response<F: Scalar>(&self, y: &[F]) -> Result<()> {
        match self {
            LossKind::SquaredError => Ok(()),
            LossKind::Logistic => {
                if y.iter().all(|&v| v == F::zero() || v == F::one()) {
                    Ok(())
                } else {
                    Err(Error::InvalidResponse(
                        "logistic loss requires response values in {0, 1}".into(),
                    ))
                }
            }
        }
    }
}

/// Negative gradient of the loss at the current fit, one entry per observation.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientVector<F>(Vec<F>);

impl<F: Scalar> GradientVector<F> {
    pub fn as_slice(&self) -> &[F] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<F> {
        self.0
    }
}

/// Numerically stable logistic function, exact in both tails.
pub fn sigmoid<F: Scalar>(f: F) -> F {
    if f >= F::zero() {
        let z = (-f).exp();
        F::one() / (F::one() + z)
    } else {
        let z = f.exp();
        z / (F::one() + z)
    }
}

/// log(1 + e^f) without overflow for large |f|.
fn log1p_exp<F: Scalar>(f: F) -> F {
    if f > F::zero() {
        f + (-f).exp().ln_1p()
    } else {
        f.exp().ln_1p()
    }
}

/// Loss-minimal constant fit: the mean for squared error, the logit of the
/// mean for logistic loss.
pub fn init_offset<F: Scalar>(y: &[F], loss: LossKind) -> Result<F> {
    if y.is_empty() {
        return Err(Error::ShapeMismatch("empty response".into()));
    }
    let mean = y.iter().copied().sum::<F>() / F::from_usize(y.len());
    match loss {
        LossKind::SquaredError => Ok(mean),
        LossKind::Logistic => {
            if mean <= F::zero() || mean >= F::one() {
                return Err(Error::DegenerateResponse(
                    "logistic offset is infinite for an all-0 or all-1 response".into(),
                ));
            }
            Ok((mean / (F::one() - mean)).ln())
        }
    }
}

/// Negative gradient u(i) = -d rho / d f evaluated at f(i).
pub fn negative_gradient<F: Scalar>(loss: LossKind, y: &[F], f: &[F]) -> GradientVector<F> {
    assert_eq!(y.len(), f.len(), "response and fit must have equal length");
    let u = match loss {
        LossKind::SquaredError => y.iter().zip(f).map(|(&yi, &fi)| yi - fi).collect(),
        LossKind::Logistic => y.iter().zip(f).map(|(&yi, &fi)| yi - sigmoid(fi)).collect(),
    };
    GradientVector(u)
}

/// Mean loss over all observations.
pub fn empirical_risk<F: Scalar>(loss: LossKind, y: &[F], f: &[F]) -> F {
    assert_eq!(y.len(), f.len(), "response and fit must have equal length");
    let half = F::from_f64(0.5);
    let total: F = match loss {
        LossKind::SquaredError => y
            .iter()
            .zip(f)
            .map(|(&yi, &fi)| {
                let r = yi - fi;
                half * r * r
            })
            .sum(),
        LossKind::Logistic => y
            .iter()
            .zip(f)
            .map(|(&yi, &fi)| log1p_exp(fi) - yi * fi)
            .sum(),
    };
    total / F::from_usize(y.len())
}
