use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

pub const DEFAULT_EPS: f64 = 1e-12;

/// `W(x) = sum_k a^k cos(2 pi b^k x)`, truncated with a certified tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassSpec {
    pub a: f64,
    pub b: u32,
    #[serde(default = "default_eps")]
    pub eps: f64,
}

fn default_eps() -> f64 {
    DEFAULT_EPS
}

impl WeierstrassSpec {
    pub fn new(a: f64, b: u32) -> Result<Self> {
        Self::with_eps(a, b, DEFAULT_EPS)
    }

    pub fn with_eps(a: f64, b: u32, eps: f64) -> Result<Self> {
        let s = WeierstrassSpec { a, b, eps };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a < 1.0) {
            return param(format!("weierstrass: a = {} must lie in (0, 1)", self.a));
        }
        if self.b < 2 {
            return param(format!("weierstrass: b = {} must be an integer >= 2", self.b));
        }
        if self.a * f64::from(self.b) < 1.0 {
            return param(format!(
                "weierstrass: a*b = {} must be >= 1",
                self.a * f64::from(self.b)
            ));
        }
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            return param(format!("weierstrass: eps = {} must be finite and >= 0", self.eps));
        }
        Ok(())
    }

    /// Hölder exponent `-ln a / ln b`.
    pub fn alpha(&self) -> f64 {
        -self.a.ln() / f64::from(self.b).ln()
    }

    /// Box (and Hausdorff) dimension of the graph, `2 - alpha`.
    pub fn graph_dimension(&self) -> f64 {
        2.0 - self.alpha()
    }

    /// Smallest `K` with `a^(K+1) / (1-a) <= eps`. With `eps = 0` the series
    /// is summed until the tail drops below half an ulp of the sum's bound.
    pub fn truncation_index(&self) -> usize {
        let eps = if self.eps > 0.0 {
            self.eps
        } else {
            0.5 * f64::EPSILON / (1.0 - self.a)
        };
        let mut k = 0usize;
        let mut tail = self.a / (1.0 - self.a);
        while tail > eps {
            tail *= self.a;
            k += 1;
        }
        k
    }

    /// Upper bound on `|W - W_K|` for the truncation actually used.
    pub fn tail_bound(&self) -> f64 {
        self.a.powi(self.truncation_index() as i32 + 1) / (1.0 - self.a)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.partial_sum(x, 0, self.truncation_index() + 1)
    }

    /// `sum_{k = from}^{to - 1} a^k cos(2 pi b^k x)`.
    ///
    /// The phase `b^k x mod 1` is advanced by repeated multiplication and
    /// reduction, which is exact when `b` is a power of two.
    pub fn partial_sum(&self, x: f64, from: usize, to: usize) -> f64 {
        let b = f64::from(self.b);
        let mut phase = x.rem_euclid(1.0);
        let mut amp = 1.0;
        let mut sum = 0.0;
        for k in 0..to {
            if k >= from {
                sum += amp * if phase == 0.0 { 1.0 } else { (TAU * phase).cos() };
            }
            phase = (b * phase).fract();
            amp *= self.a;
        }
        sum
    }
}
