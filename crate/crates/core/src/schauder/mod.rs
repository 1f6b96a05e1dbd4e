//! Faber–Schauder decomposition on `[0, 1]`:
//! `f(x) = f(0) + (f(1) - f(0)) x + sum_j sum_k c_{j,k} hat(2^j x - k)`
//! with `c_{j,k} = 2 f((2k+1)/2^(j+1)) - f(k/2^j) - f((k+1)/2^j)`.

mod holder;

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

pub use holder::{
    estimate_global_holder, estimate_pointwise_holder, HolderEstimate, PointwiseEstimate,
    DEFAULT_LEVEL_MIN, DEFAULT_WINDOW_A,
};

use crate::dimension::SampledGraph;
use crate::error::{param, LabError, Result};
use crate::zoo::eval_hat;

#[derive(Debug, Clone, PartialEq)]
pub struct SchauderCoefficients {
    levels: Vec<Vec<f64>>,
    f0: f64,
    slope: f64,
}

impl SchauderCoefficients {
    /// Checked constructor: level `j` must hold `2^j` finite entries.
    pub fn new(levels: Vec<Vec<f64>>, f0: f64, slope: f64) -> Result<Self> {
        let c = Self::from_levels(levels, f0, slope);
        c.validate()?;
        Ok(c)
    }

    pub(crate) fn from_levels(levels: Vec<Vec<f64>>, f0: f64, slope: f64) -> Self {
        SchauderCoefficients { levels, f0, slope }
    }

    pub fn zeros(max_level: usize, f0: f64, slope: f64) -> Self {
        let levels = (0..=max_level).map(|j| vec![0.0; 1 << j]).collect();
        Self::from_levels(levels, f0, slope)
    }

    pub fn validate(&self) -> Result<()> {
        for (j, row) in self.levels.iter().enumerate() {
            if row.len() != 1 << j {
                return param(format!("schauder: level {j} has {} entries, expected {}", row.len(), 1usize << j));
            }
            if row.iter().any(|c| !c.is_finite()) {
                return param(format!("schauder: non-finite coefficient on level {j}"));
            }
        }
        if !(self.f0.is_finite() && self.slope.is_finite()) {
            return param("schauder: boundary terms must be finite");
        }
        Ok(())
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn levels_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.levels
    }

    /// `J`, or `None` when only the affine part is present.
    pub fn max_level(&self) -> Option<usize> {
        self.levels.len().checked_sub(1)
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    /// `f(1) - f(0)`.
    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn reconstruct(&self, x: f64) -> f64 {
        let mut s = self.f0 + self.slope * x;
        if !(0.0..=1.0).contains(&x) {
            return s;
        }
        for (j, row) in self.levels.iter().enumerate() {
            let y = x * (j as f64).exp2();
            let k = (y.floor() as usize).min(row.len() - 1);
            s += row[k] * eval_hat(y - k as f64);
        }
        s
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        let j = self.max_level().map_or(-1, |j| j as i64);
        writeln!(out, "#J={j}").unwrap();
        writeln!(out, "#f0={:.16e}", self.f0).unwrap();
        writeln!(out, "#slope={:.16e}", self.slope).unwrap();
        out.push_str("j,k,c\n");
        for (j, row) in self.levels.iter().enumerate() {
            for (k, &c) in row.iter().enumerate() {
                if c != 0.0 {
                    writeln!(out, "{j},{k},{c:.16e}").unwrap();
                }
            }
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let bad = |line: usize, what: &str| LabError::Parse(format!("coefficient csv line {line}: {what}"));
        let (mut max_level, mut f0, mut slope) = (None, None, None);
        let mut rows = Vec::new();
        let mut seen_header = false;
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                let (key, val) = meta.split_once('=').ok_or_else(|| bad(n, "metadata needs key=value"))?;
                match key.trim() {
                    "J" => max_level = Some(val.trim().parse::<i64>().map_err(|_| bad(n, "bad J"))?),
                    "f0" => f0 = Some(val.trim().parse::<f64>().map_err(|_| bad(n, "bad f0"))?),
                    "slope" => slope = Some(val.trim().parse::<f64>().map_err(|_| bad(n, "bad slope"))?),
                    _ => {}
                }
                continue;
            }
            if !seen_header {
                if line.replace(' ', "") != "j,k,c" {
                    return Err(bad(n, "expected header j,k,c"));
                }
                seen_header = true;
                continue;
            }
            let mut it = line.split(',').map(str::trim);
            let (Some(j), Some(k), Some(c), None) = (it.next(), it.next(), it.next(), it.next()) else {
                return Err(bad(n, "expected three fields"));
            };
            let j: usize = j.parse().map_err(|_| bad(n, "bad level"))?;
            let k: usize = k.parse().map_err(|_| bad(n, "bad index"))?;
            let c: f64 = c.parse().map_err(|_| bad(n, "bad coefficient"))?;
            rows.push((n, j, k, c));
        }
        let max_level = max_level.ok_or_else(|| LabError::Parse("coefficient csv: missing #J".into()))?;
        let f0 = f0.ok_or_else(|| LabError::Parse("coefficient csv: missing #f0".into()))?;
        let slope = slope.ok_or_else(|| LabError::Parse("coefficient csv: missing #slope".into()))?;
        if max_level > 40 {
            return Err(LabError::Parse(format!("coefficient csv: J = {max_level} is too large")));
        }
        let mut coeffs = if max_level < 0 {
            Self::from_levels(Vec::new(), f0, slope)
        } else {
            Self::zeros(max_level as usize, f0, slope)
        };
        for (n, j, k, c) in rows {
            let slot = coeffs
                .levels
                .get_mut(j)
                .and_then(|row| row.get_mut(k))
                .ok_or_else(|| bad(n, "index outside the declared levels"))?;
            *slot = c;
        }
        coeffs.validate()?;
        Ok(coeffs)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::parse_csv(&text)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|e| LabError::io(path, e))
    }
}

/// Exact Schauder coefficients of the sampled function up to level `L - 1`.
pub fn decompose(graph: &SampledGraph) -> SchauderCoefficients {
    let v = graph.values();
    let depth = graph.depth();
    let f0 = v[0];
    let slope = v[v.len() - 1] - v[0];
    let levels = (0..depth)
        .into_par_iter()
        .map(|j| {
            let half = 1usize << (depth - j - 1);
            (0..1usize << j)
                .map(|k| {
                    let left = 2 * k * half;
                    2.0 * v[left + half] - v[left] - v[left + 2 * half]
                })
                .collect()
        })
        .collect();
    SchauderCoefficients::from_levels(levels, f0, slope)
}
