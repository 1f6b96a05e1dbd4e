//! Riemann–Liouville fractional derivatives of `f - f(a)` and the local
//! fractional differentiability probe.
//!
//! The order-`q` quantity at `x = a + s` is evaluated in Marchaud form,
//!
//! ```text
//! (1 / Gamma(1-q)) * s^-q * [ g(x) + q * int_0^1 (g(x) - g(x - s v)) v^(-q-1) dv ],
//! g = f - f(a),
//! ```
//!
//! which equals the Riemann–Liouville derivative for Hölder `f` and needs
//! no derivative of `f`. The substitution `v = u^(1/(1-q))` removes the
//! kernel singularity; the integrand becomes a difference quotient
//! `m s (f(x) - f(y)) / (x - y)` with `m = 1/(1-q)`.

mod gamma;
mod probe;
mod quadrature;

pub use gamma::gamma;
pub use probe::{
    classify_frac_differentiability, local_frac_derivative_probe, Classification, FracProbeReport,
    FracRow, FracTable, ProbeLadder,
};
pub use quadrature::{gauss_legendre_unit, graded_mesh, integrate, GL_ORDER};

use serde::Serialize;

use crate::error::{param, LabError, Result};
use crate::zoo::FunctionSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureConfig {
    /// Initial number of uniform panels.
    pub panels: usize,
    /// Kernel singularity power, `-q`.
    pub endpoint_exponent: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    /// Differences at distances below `s * 2^-resolution_octaves` are not
    /// sampled; that stretch of the integral is extrapolated linearly.
    pub resolution_octaves: f64,
    /// Geometric refinement steps toward the base point.
    pub grading: usize,
}

impl QuadratureConfig {
    pub fn for_order(q: f64) -> Self {
        QuadratureConfig {
            panels: 16,
            endpoint_exponent: -q,
            rel_tol: 1e-10,
            max_panels: 4096,
            resolution_octaves: 20.0,
            grading: 16,
        }
    }

    fn validate(&self, q: f64) -> Result<()> {
        if self.panels < 8 {
            return param(format!("quadrature: panels = {} must be >= 8", self.panels));
        }
        if !(self.rel_tol > 0.0) {
            return param("quadrature: rel_tol must be positive");
        }
        if (self.endpoint_exponent + q).abs() > 1e-12 {
            return param(format!(
                "quadrature: endpoint exponent {} does not match order {q}",
                self.endpoint_exponent
            ));
        }
        if !(self.resolution_octaves > 0.0 && self.resolution_octaves <= 50.0) {
            return param("quadrature: resolution_octaves must lie in (0, 50]");
        }
        Ok(())
    }
}

fn check_order(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        param(format!("order q = {q} must lie in (0, 1)"))
    }
}

/// One pass of the quadrature with a fixed mesh. `x < a` uses the mirrored
/// (right-sided) kernel.
pub fn rl_fixed(
    f: &FunctionSpec,
    q: f64,
    a: f64,
    x: f64,
    panels: usize,
    resolution_octaves: f64,
    grading: usize,
) -> Result<f64> {
    rl_fixed_fn(|y| f.eval(y), q, a, x, panels, resolution_octaves, grading)
}

/// [`rl_fixed`] for an arbitrary function of one variable.
pub fn rl_fixed_fn(
    f: impl Fn(f64) -> Result<f64>,
    q: f64,
    a: f64,
    x: f64,
    panels: usize,
    resolution_octaves: f64,
    grading: usize,
) -> Result<f64> {
    check_order(q)?;
    let s = (x - a).abs();
    if s == 0.0 || !s.is_finite() {
        return param(format!("probe point x = {x} must differ from a = {a}"));
    }
    let dir = (x - a).signum();
    let m = 1.0 / (1.0 - q);
    let u_c = (-resolution_octaves / m).exp2();
    let fa = f(a)?;
    let fx = f(x)?;
    let quotient = |u: f64| -> Result<f64> {
        let y = x - dir * s * u.powf(m);
        // The rounded distance, so that the quotient stays consistent.
        let d = dir * (x - y);
        if d <= 0.0 {
            return Ok(0.0);
        }
        Ok(m * s * (fx - f(y)?) / d)
    };
    let body = integrate(&graded_mesh(u_c, 1.0, panels, grading), quotient)?;
    let tail = quotient(u_c)? * u_c;
    let v = ((fx - fa) + q * (body + tail)) * s.powf(-q) / gamma(1.0 - q);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(LabError::Range(format!("fractional quantity overflows at x = {x}")))
    }
}

/// Order-`q` Riemann–Liouville derivative of `f - f(a)` at `x`, with panel
/// doubling until two successive values agree to `rel_tol`.
pub fn rl_fractional_quantity(
    f: &FunctionSpec,
    q: f64,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    rl_quantity_fn(|y| f.eval(y), q, a, x, cfg)
}

/// [`rl_fractional_quantity`] for an arbitrary function of one variable.
pub fn rl_quantity_fn(
    f: impl Fn(f64) -> Result<f64>,
    q: f64,
    a: f64,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    check_order(q)?;
    cfg.validate(q)?;
    let run = |p| rl_fixed_fn(&f, q, a, x, p, cfg.resolution_octaves, cfg.grading);
    let mut panels = cfg.panels;
    let mut prev = run(panels)?;
    while panels < cfg.max_panels {
        panels *= 2;
        let cur = run(panels)?;
        if (cur - prev).abs() <= cfg.rel_tol * cur.abs() {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(LabError::Accuracy(format!(
        "no agreement to {} within {} panels (last value {prev})",
        cfg.rel_tol, cfg.max_panels
    )))
}

/// `Gamma(p+1) / Gamma(p+1-q) * s^(p-q)`, the order-`q` derivative of
/// `(y - a)^p` at distance `s`.
pub fn power_rule(p: f64, q: f64, s: f64) -> f64 {
    gamma(p + 1.0) / gamma(p + 1.0 - q) * s.powf(p - q)
}
