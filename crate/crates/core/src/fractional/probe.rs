use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::rl_fixed;
use crate::error::{param, Result};
use crate::fit::least_squares;
use crate::zoo::FunctionSpec;

/// Geometric ladder `x_i = a + 2^-i h0`, `i = 1..=n_probes`, and the
/// quadrature resolution used at every rung.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeLadder {
    pub h0: f64,
    pub n_probes: usize,
    pub panels: usize,
    pub resolution_octaves: f64,
    pub grading: usize,
    /// A tail counts as Cauchy when its spread is below
    /// `cauchy_tol * (1 + |last|)`.
    pub cauchy_tol: f64,
}

impl Default for ProbeLadder {
    fn default() -> Self {
        ProbeLadder {
            h0: 1.0 / 16.0,
            n_probes: 24,
            panels: 16,
            resolution_octaves: 20.0,
            grading: 16,
            cauchy_tol: 0.5,
        }
    }
}

const TAIL: usize = 5;
const CONVERGE_SLOPE: f64 = -0.05;
const DIVERGE_SLOPE: f64 = -0.1;
/// Values decaying at least this fast have limit zero.
const VANISHING_SLOPE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", content = "limit")]
pub enum Classification {
    Converges(f64),
    Diverges,
    Inconclusive,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::Converges(_) => "Converges",
            Classification::Diverges => "Diverges",
            Classification::Inconclusive => "Inconclusive",
        }
    }

    pub fn limit(&self) -> Option<f64> {
        match self {
            Classification::Converges(l) => Some(*l),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FracProbeReport {
    pub q: f64,
    pub a: f64,
    pub xs: Vec<f64>,
    pub quotient_values: Vec<f64>,
    pub classification: Classification,
    pub slope_hat: f64,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn classify(dists: &[f64], values: &[f64], cauchy_tol: f64) -> (Classification, f64) {
    let lx: Vec<f64> = dists.iter().map(|d| d.ln()).collect();
    let ly: Vec<f64> = values.iter().map(|v| (v.abs() + f64::MIN_POSITIVE).ln()).collect();
    let slope = if values.iter().all(|&v| v == 0.0) {
        0.0
    } else {
        least_squares(&lx, &ly).map_or(0.0, |f| f.slope)
    };
    let n = values.len();
    let tail = &values[n - TAIL..];
    let last = values[n - 1];
    let (lo, hi) = tail
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi - lo < cauchy_tol * (1.0 + last.abs()) && slope >= CONVERGE_SLOPE {
        let limit = if slope >= VANISHING_SLOPE { 0.0 } else { last };
        return (Classification::Converges(limit), slope);
    }
    // The envelope must grow: oscillating blow-ups dip often, so compare
    // the largest magnitudes of the two halves rather than neighbouring values.
    let growing = max_abs(&values[n / 2..]) > max_abs(&values[..n / 2]);
    if slope <= DIVERGE_SLOPE && growing {
        return (Classification::Diverges, slope);
    }
    (Classification::Inconclusive, slope)
}

/// Evaluate the order-`q` quantity along the ladder toward `a` and classify
/// the sequence.
pub fn local_frac_derivative_probe(
    f: &FunctionSpec,
    q: f64,
    a: f64,
    ladder: &ProbeLadder,
) -> Result<FracProbeReport> {
    if ladder.n_probes < 2 * TAIL {
        return param(format!("n_probes = {} must be >= {}", ladder.n_probes, 2 * TAIL));
    }
    if !(ladder.h0 > 0.0) || !(0.0..=1.0).contains(&a) || a + ladder.h0 / 2.0 > 1.0 {
        return param(format!("probe ladder from a = {a} with h0 = {} leaves [0, 1]", ladder.h0));
    }
    let dists: Vec<f64> = (1..=ladder.n_probes)
        .map(|i| ladder.h0 * (-(i as f64)).exp2())
        .collect();
    let xs: Vec<f64> = dists.iter().map(|d| a + d).collect();
    let values = xs
        .iter()
        .map(|&x| rl_fixed(f, q, a, x, ladder.panels, ladder.resolution_octaves, ladder.grading))
        .collect::<Result<Vec<_>>>()?;
    let (classification, slope_hat) = classify(&dists, &values, ladder.cauchy_tol);
    Ok(FracProbeReport {
        q,
        a,
        xs,
        quotient_values: values,
        classification,
        slope_hat,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FracRow {
    pub q: f64,
    pub a: f64,
    pub classification: Classification,
    pub slope_hat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FracTable {
    pub alpha: f64,
    pub rows: Vec<FracRow>,
    /// Every probe with `q < alpha` converges.
    pub all_below_converge: bool,
    /// Every probe with `q > alpha` diverges.
    pub all_above_diverge: bool,
}

impl FracTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("q,a,classification,limit_or_nan,slope_hat\n");
        for r in &self.rows {
            let limit = r.classification.limit().unwrap_or(f64::NAN);
            writeln!(
                s,
                "{},{},{},{},{:.6}",
                r.q,
                r.a,
                r.classification.label(),
                limit,
                r.slope_hat
            )
            .unwrap();
        }
        s
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "alpha": self.alpha,
            "all_below_converge": self.all_below_converge,
            "all_above_diverge": self.all_above_diverge,
        })
    }

    /// Fraction of rows on the given side of `alpha` with the given verdict.
    pub fn fraction(&self, below: bool, verdict: &str) -> f64 {
        let side: Vec<&FracRow> = self
            .rows
            .iter()
            .filter(|r| if below { r.q < self.alpha } else { r.q > self.alpha })
            .collect();
        if side.is_empty() {
            return f64::NAN;
        }
        side.iter().filter(|r| r.classification.label() == verdict).count() as f64 / side.len() as f64
    }
}

/// Probe every `(q, a)` pair. Orders equal to `alpha` are reported but do
/// not enter either verdict.
pub fn classify_frac_differentiability(
    f: &FunctionSpec,
    alpha: f64,
    q_list: &[f64],
    a_list: &[f64],
    ladder: &ProbeLadder,
) -> Result<FracTable> {
    if let Some(q) = q_list.iter().find(|&&q| !(q > 0.0 && q < 1.0)) {
        return param(format!("order {q} must lie in (0, 1)"));
    }
    if let Some(a) = a_list.iter().find(|&&a| !(a > 0.0 && a < 1.0)) {
        return param(format!("base point {a} must lie in (0, 1)"));
    }
    let pairs: Vec<(f64, f64)> = q_list
        .iter()
        .flat_map(|&q| a_list.iter().map(move |&a| (q, a)))
        .collect();
    let rows = pairs
        .par_iter()
        .map(|&(q, a)| {
            let r = local_frac_derivative_probe(f, q, a, ladder)?;
            Ok(FracRow {
                q,
                a,
                classification: r.classification,
                slope_hat: r.slope_hat,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_below_converge = rows
        .iter()
        .filter(|r| r.q < alpha)
        .all(|r| matches!(r.classification, Classification::Converges(_)));
    let all_above_diverge = rows
        .iter()
        .filter(|r| r.q > alpha)
        .all(|r| r.classification == Classification::Diverges);
    Ok(FracTable {
        alpha,
        rows,
        all_below_converge,
        all_above_diverge,
    })
}
