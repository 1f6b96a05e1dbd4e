use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GeneratorSet;
use crate::error::{param, Result};

pub const INDEPENDENCE_THRESHOLD: f64 = 1e-8;
const MAX_MONOMIALS: usize = 500;

/// Which exponent tuples count as "degree at most d".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeMode {
    /// `k_1 + .. + k_n <= d`.
    #[default]
    Total,
    /// `max k_i <= d`.
    MaxPerVariable,
}

/// Exponent tuples with `sum k_i >= 1` under the given degree bound, in
/// lexicographic order.
pub fn monomials(n: usize, degree: u32, mode: DegreeMode) -> Vec<Vec<u32>> {
    fn rec(n: usize, degree: u32, mode: DegreeMode, used: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            if used > 0 {
                out.push(cur.clone());
            }
            return;
        }
        let cap = match mode {
            DegreeMode::Total => degree - used,
            DegreeMode::MaxPerVariable => degree,
        };
        for k in 0..=cap {
            cur.push(k);
            rec(n, degree, mode, used + k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, degree, mode, 0, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndependenceReport {
    pub degree_bound: u32,
    pub degree_mode: DegreeMode,
    pub monomial_count: usize,
    pub grid_size: usize,
    pub min_singular_value: f64,
    pub threshold: f64,
    /// Generators that do not vary on the grid.
    pub constant_generators: Vec<usize>,
    pub independent: bool,
}

/// Smallest singular value of the column-normalized matrix of monomials
/// `prod g_i^k_i` sampled at `x_k = k / (grid_size - 1)`.
///
/// A generator that is constant on the grid makes the verdict negative even
/// when the matrix happens to be well conditioned (one generator, degree 1).
pub fn check_free_independence(
    gens: &GeneratorSet,
    degree_bound: u32,
    grid_size: usize,
    mode: DegreeMode,
) -> Result<IndependenceReport> {
    if degree_bound == 0 {
        return param("degree bound must be >= 1");
    }
    let monos = monomials(gens.len(), degree_bound, mode);
    if monos.len() > MAX_MONOMIALS {
        return param(format!("{} monomials exceed the limit of {MAX_MONOMIALS}", monos.len()));
    }
    if grid_size < monos.len() || grid_size < 2 {
        return param(format!("grid of {grid_size} points is smaller than {} monomials", monos.len()));
    }
    let xs: Vec<f64> = (0..grid_size).map(|k| k as f64 / (grid_size - 1) as f64).collect();
    let values = gens
        .generators
        .par_iter()
        .map(|g| xs.iter().map(|&x| g.eval(x)).collect::<Result<Vec<f64>>>())
        .collect::<Result<Vec<_>>>()?;
    let constant_generators = values
        .iter()
        .enumerate()
        .filter(|(_, v)| {
            let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
            hi - lo <= 1e-12 * hi.abs().max(lo.abs())
        })
        .map(|(i, _)| i)
        .collect::<Vec<_>>();
    let columns: Vec<Vec<f64>> = monos
        .par_iter()
        .map(|e| {
            let mut col: Vec<f64> = (0..grid_size)
                .map(|k| e.iter().zip(&values).map(|(&p, v)| v[k].powi(p as i32)).product())
                .collect();
            let norm = col.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                col.iter_mut().for_each(|x| *x /= norm);
            }
            col
        })
        .collect();
    let m = DMatrix::from_fn(grid_size, monos.len(), |r, c| columns[c][r]);
    let min_singular_value = m
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let independent = min_singular_value > INDEPENDENCE_THRESHOLD && constant_generators.is_empty();
    Ok(IndependenceReport {
        degree_bound,
        degree_mode: mode,
        monomial_count: monos.len(),
        grid_size,
        min_singular_value,
        threshold: INDEPENDENCE_THRESHOLD,
        constant_generators,
        independent,
    })
}
