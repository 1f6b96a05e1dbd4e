//! Function families: Weierstrass series, the lacunary strongly monoHölder
//! series, exponential-like functions, and the composite [`FunctionSpec`].

mod explike;
mod monoholder;
mod spec;
mod weierstrass;

pub use explike::ExpLikeSpec;
pub use monoholder::{
    build_j_sequence, growth_conditions, r_rule, MonoHolderSpec, MAX_REPRESENTABLE_LEVEL,
};
pub use spec::{FunctionSpec, SchauderRef};
pub use weierstrass::{WeierstrassSpec, DEFAULT_EPS};

use crate::error::{param, Result};
use crate::schauder::SchauderCoefficients;

/// `min(x, 1 - x)` on `[0, 1]`, zero elsewhere.
pub fn eval_hat(x: f64) -> f64 {
    if (0.0..=1.0).contains(&x) {
        x.min(1.0 - x)
    } else {
        0.0
    }
}

/// Damp level `j` by `(j + 1)^(-a)`. For `a > 0` these members span an
/// infinite-dimensional family sharing the base function's exponent.
pub fn make_lineable_member(base: &SchauderCoefficients, a: f64) -> Result<SchauderCoefficients> {
    if !(a > 0.0 && a.is_finite()) {
        return param(format!("lineable member: a = {a} must be positive"));
    }
    let levels = base
        .levels()
        .iter()
        .enumerate()
        .map(|(j, row)| {
            let s = (j as f64 + 1.0).powf(-a);
            row.iter().map(|c| c * s).collect()
        })
        .collect();
    Ok(SchauderCoefficients::from_levels(levels, base.f0(), base.slope()))
}
