//! Hölder exponents from Schauder coefficient decay.
//!
//! `f` is in `C^alpha` exactly when `sup_{j,k} |c_{j,k}| 2^(alpha j)` is
//! finite, so the exponent is read off the upper envelope of
//! `log2 max_k |c_{j,k}|` against `j`. A least-squares line through the same
//! points is biased whenever the per-level maxima oscillate below the
//! envelope (Weierstrass coefficients are log-periodic in `j`), so the
//! estimate uses the upper convex hull and keeps the least-squares fit as a
//! diagnostic.

use serde::{Serialize, Serializer};

use super::SchauderCoefficients;
use crate::error::{param, LabError, Result};
use crate::fit::{least_squares, upper_hull_slope};

pub const DEFAULT_LEVEL_MIN: usize = 4;
pub const DEFAULT_WINDOW_A: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderEstimate {
    pub alpha_hat: f64,
    /// Negated least-squares slope over the same levels.
    pub alpha_lsq: f64,
    pub fit_r2: f64,
    pub levels_used: (usize, usize),
    pub seminorm_hat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointwiseEstimate {
    pub x0: f64,
    /// `f64::INFINITY` when every localized coefficient vanishes.
    #[serde(serialize_with = "finite_or_inf")]
    pub h_hat: f64,
    pub window_a: usize,
    pub fit_r2: f64,
}

impl PointwiseEstimate {
    pub fn is_infinite(&self) -> bool {
        self.h_hat.is_infinite()
    }
}

fn finite_or_inf<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str("inf")
    }
}

/// Coefficients at or below this size are rounding noise from an affine part.
fn zero_tolerance(c: &SchauderCoefficients) -> f64 {
    1e-14 * (1.0 + c.f0().abs() + c.slope().abs())
}

fn check_depth(c: &SchauderCoefficients, level_min: usize) -> Result<usize> {
    match c.max_level() {
        Some(j) if j >= level_min + 3 => Ok(j),
        other => param(format!(
            "need at least level {} for level_min = {level_min}, have {:?}",
            level_min + 3,
            other
        )),
    }
}

pub fn estimate_global_holder(c: &SchauderCoefficients, level_min: usize) -> Result<HolderEstimate> {
    let top = check_depth(c, level_min)?;
    let tol = zero_tolerance(c);
    let (mut js, mut ys, mut maxima) = (Vec::new(), Vec::new(), Vec::new());
    for j in level_min..=top {
        let m = c.levels()[j].iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if m > tol {
            js.push(j as f64);
            ys.push(m.log2());
            maxima.push((j, m));
        }
    }
    if js.len() < 3 {
        return Err(LabError::EstimateUnavailable(format!(
            "only {} nonzero levels in [{level_min}, {top}]",
            js.len()
        )));
    }
    let lsq = least_squares(&js, &ys).expect("three distinct levels");
    let alpha_hat = (-upper_hull_slope(&js, &ys).expect("three distinct levels")).clamp(0.0, 1.0);
    let seminorm_hat = maxima
        .iter()
        .map(|&(j, m)| m * (alpha_hat * j as f64).exp2())
        .fold(0.0, f64::max);
    Ok(HolderEstimate {
        alpha_hat,
        alpha_lsq: -lsq.slope,
        fit_r2: lsq.r2,
        levels_used: (level_min, top),
        seminorm_hat,
    })
}

pub fn estimate_pointwise_holder(
    c: &SchauderCoefficients,
    x0: f64,
    window_a: usize,
    level_min: usize,
) -> Result<PointwiseEstimate> {
    if !(0.0..=1.0).contains(&x0) {
        return param(format!("x0 = {x0} must lie in [0, 1]"));
    }
    let top = check_depth(c, level_min)?;
    let tol = zero_tolerance(c);
    let a = window_a as f64;
    let (mut js, mut ys) = (Vec::new(), Vec::new());
    for j in level_min..=top {
        let row = &c.levels()[j];
        let centre = x0 * (j as f64).exp2();
        let lo = (centre - a).ceil().max(0.0) as usize;
        let hi = ((centre + a).floor() as usize).min(row.len() - 1);
        let d = row
            .get(lo..=hi)
            .map_or(0.0, |w| w.iter().fold(0.0f64, |m, x| m.max(x.abs())));
        if d > tol {
            js.push(j as f64);
            ys.push(d.log2());
        }
    }
    if js.is_empty() {
        return Ok(PointwiseEstimate {
            x0,
            h_hat: f64::INFINITY,
            window_a,
            fit_r2: 0.0,
        });
    }
    if js.len() < 3 {
        return Err(LabError::EstimateUnavailable(format!(
            "only {} nonzero localized levels near x0 = {x0}",
            js.len()
        )));
    }
    let lsq = least_squares(&js, &ys).expect("three distinct levels");
    let cap = top as f64;
    let h_hat = (-upper_hull_slope(&js, &ys).expect("three distinct levels")).clamp(0.0, cap);
    Ok(PointwiseEstimate {
        x0,
        h_hat,
        window_a,
        fit_r2: lsq.r2,
    })
}
