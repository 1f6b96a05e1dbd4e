use serde::{Deserialize, Serialize};

use crate::error::{param, LabError, Result};

/// `g(x) = sum_i a_i exp(beta_i x)` with distinct nonzero rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpLikeSpec {
    /// `(a_i, beta_i)` pairs.
    pub terms: Vec<(f64, f64)>,
}

impl ExpLikeSpec {
    pub fn new(terms: Vec<(f64, f64)>) -> Result<Self> {
        let s = ExpLikeSpec { terms };
        s.validate()?;
        Ok(s)
    }

    pub fn exp(rate: f64) -> Result<Self> {
        Self::new(vec![(1.0, rate)])
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return param("explike: at least one term is required");
        }
        for (i, &(a, b)) in self.terms.iter().enumerate() {
            if a == 0.0 || !a.is_finite() {
                return param(format!("explike: coefficient a_{i} = {a} must be finite and nonzero"));
            }
            if b == 0.0 || !b.is_finite() {
                return param(format!("explike: rate beta_{i} = {b} must be finite and nonzero"));
            }
            if self.terms[..i].iter().any(|&(_, c)| c == b) {
                return param(format!("explike: rate {b} appears twice"));
            }
        }
        Ok(())
    }

    /// Number of terms; bounds the size of every level set.
    pub fn range(&self) -> usize {
        self.terms.len()
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.eval_derivative(x, 0)
    }

    /// `d^order g / dx^order` at `x`.
    pub fn eval_derivative(&self, x: f64, order: i32) -> Result<f64> {
        let mut sum = 0.0;
        for &(a, b) in &self.terms {
            let e = (b * x).exp();
            let t = a * b.powi(order) * e;
            if !t.is_finite() {
                return Err(LabError::Range(format!("exp({b} * {x}) overflows")));
            }
            sum += t;
        }
        if !sum.is_finite() {
            return Err(LabError::Range(format!("explike sum overflows at x = {x}")));
        }
        Ok(sum)
    }

    /// `g'` as another exponential-like function (same rates, so the same
    /// structure and a range of `m`).
    pub fn derivative(&self) -> ExpLikeSpec {
        ExpLikeSpec {
            terms: self.terms.iter().map(|&(a, b)| (a * b, b)).collect(),
        }
    }
}
