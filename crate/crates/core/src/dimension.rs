//! Sampled graphs, column-oscillation box counting and the two-sided
//! (strong monoHölder) oscillation test.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{param, LabError, Result};
use crate::fit::least_squares;
use crate::zoo::FunctionSpec;

pub const MAX_DEPTH: usize = 28;

/// Values on the dyadic grid `lo + (hi - lo) k / 2^L`, `k = 0..=2^L`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledGraph {
    depth: usize,
    values: Vec<f64>,
    spec_id: String,
    domain: (f64, f64),
}

impl SampledGraph {
    pub fn new(depth: usize, values: Vec<f64>, spec_id: impl Into<String>) -> Result<Self> {
        Self::on_window(depth, values, spec_id, (0.0, 1.0))
    }

    pub fn on_window(
        depth: usize,
        values: Vec<f64>,
        spec_id: impl Into<String>,
        domain: (f64, f64),
    ) -> Result<Self> {
        if depth > MAX_DEPTH {
            return param(format!("depth {depth} exceeds {MAX_DEPTH}"));
        }
        if values.len() != (1usize << depth) + 1 {
            return param(format!(
                "depth {depth} needs {} samples, got {}",
                (1usize << depth) + 1,
                values.len()
            ));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(LabError::Range(format!("sample {k} is not finite")));
        }
        if !(domain.0 < domain.1 && domain.0.is_finite() && domain.1.is_finite()) {
            return param(format!("bad sampling window {domain:?}"));
        }
        Ok(SampledGraph {
            depth,
            values,
            spec_id: spec_id.into(),
            domain,
        })
    }

    /// Sample an arbitrary closure on `[0, 1]`.
    pub fn from_fn(depth: usize, spec_id: impl Into<String>, f: impl Fn(f64) -> f64 + Sync) -> Self {
        let n = 1usize << depth;
        let values = (0..=n)
            .into_par_iter()
            .map(|k| f(k as f64 / n as f64))
            .collect();
        Self::new(depth, values, spec_id).expect("closure samples must be finite")
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spec_id(&self) -> &str {
        &self.spec_id
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn width(&self) -> f64 {
        self.domain.1 - self.domain.0
    }

    /// Grid spacing.
    pub fn step(&self) -> f64 {
        self.width() / (1u64 << self.depth) as f64
    }

    pub fn x(&self, k: usize) -> f64 {
        self.domain.0 + self.width() * (k as f64 / (1u64 << self.depth) as f64)
    }

    /// Pointwise sum of two graphs on the same grid.
    pub fn add(&self, other: &SampledGraph) -> Result<SampledGraph> {
        if self.depth != other.depth || self.domain != other.domain {
            return param("graphs live on different grids");
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Self::on_window(
            self.depth,
            values,
            format!("{}+{}", self.spec_id, other.spec_id),
            self.domain,
        )
    }
}

pub fn sample(spec: &FunctionSpec, depth: usize) -> Result<SampledGraph> {
    sample_window(spec, (0.0, 1.0), depth)
}

pub fn sample_window(spec: &FunctionSpec, domain: (f64, f64), depth: usize) -> Result<SampledGraph> {
    if depth > MAX_DEPTH {
        return param(format!("depth {depth} exceeds {MAX_DEPTH}"));
    }
    let n = 1usize << depth;
    let (lo, hi) = domain;
    let values = (0..=n)
        .into_par_iter()
        .map(|k| spec.eval(lo + (hi - lo) * (k as f64 / n as f64)))
        .collect::<Result<Vec<_>>>()?;
    SampledGraph::on_window(depth, values, spec.to_json(), domain)
}

/// `sum over 2^j columns of (1 + floor(oscillation / delta))`, with
/// `delta = width * 2^-j`.
pub fn box_count(graph: &SampledGraph, j: usize) -> Result<u64> {
    if j + 2 > graph.depth {
        return Err(LabError::Resolution(format!(
            "scale 2^-{j} needs depth >= {}, graph has {}",
            j + 2,
            graph.depth
        )));
    }
    let per = 1usize << (graph.depth - j);
    let delta = graph.width() * (-(j as f64)).exp2();
    let v = &graph.values;
    Ok((0..1usize << j)
        .into_par_iter()
        .map(|c| {
            let col = &v[c * per..=(c + 1) * per];
            let (lo, hi) = col
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
            1 + ((hi - lo) / delta).floor() as u64
        })
        .sum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxCountRow {
    pub j: usize,
    pub delta: f64,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxCountReport {
    pub rows: Vec<BoxCountRow>,
    pub dim_hat: f64,
    pub fit_r2: f64,
    pub scale_range: (usize, usize),
}

impl BoxCountReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("j,delta,N,log2N\n");
        for r in &self.rows {
            writeln!(s, "{},{:.17e},{},{:.17e}", r.j, r.delta, r.n, (r.n as f64).log2()).unwrap();
        }
        s
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim_hat": self.dim_hat,
            "r2": self.fit_r2,
            "scales": [self.scale_range.0, self.scale_range.1],
        })
    }

    /// `(j, log2 N)` pairs, the points of the regression.
    pub fn log_points(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.j as f64, (r.n as f64).log2())).collect()
    }
}

pub fn default_scales(depth: usize) -> (usize, usize) {
    (6, depth.saturating_sub(4))
}

pub fn estimate_box_dimension(graph: &SampledGraph, j_lo: usize, j_hi: usize) -> Result<BoxCountReport> {
    if j_hi < j_lo || j_hi - j_lo + 1 < 4 {
        return param(format!("scales {j_lo}..{j_hi} give fewer than 4 points"));
    }
    if j_hi + 2 > graph.depth {
        return param(format!("finest scale {j_hi} needs depth >= {}", j_hi + 2));
    }
    let rows = (j_lo..=j_hi)
        .into_par_iter()
        .map(|j| {
            Ok(BoxCountRow {
                j,
                delta: graph.width() * (-(j as f64)).exp2(),
                n: box_count(graph, j)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = rows.iter().map(|r| r.j as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| (r.n as f64).log2()).collect();
    let fit = least_squares(&xs, &ys).expect("at least four scales");
    Ok(BoxCountReport {
        rows,
        dim_hat: fit.slope.clamp(1.0, 2.0),
        fit_r2: fit.r2,
        scale_range: (j_lo, j_hi),
    })
}

/// `max |f(x) - f(y)| / |x - y|^alpha` over all grid pairs at dyadic
/// distances (every multiple-of-two step `2^p h`).
pub fn holder_seminorm(graph: &SampledGraph, alpha: f64) -> f64 {
    let v = &graph.values;
    let h = graph.step();
    (0..=graph.depth)
        .into_par_iter()
        .map(|p| {
            let s = 1usize << p;
            let m = v
                .windows(s + 1)
                .map(|w| (w[s] - w[0]).abs())
                .fold(0.0, f64::max);
            m / (s as f64 * h).powf(alpha)
        })
        .reduce(|| 0.0, f64::max)
}

/// Largest `|f(x_{k+1}) - f(x_k)| / h`.
pub fn lipschitz_constant(graph: &SampledGraph) -> f64 {
    let h = graph.step();
    graph
        .values
        .windows(2)
        .map(|w| (w[1] - w[0]).abs() / h)
        .fold(0.0, f64::max)
}

/// For every index, `max |v[k] - v[i]|` over `|i - k| <= w`.
fn windowed_oscillation(v: &[f64], w: usize) -> Vec<f64> {
    let n = v.len();
    let mut out = vec![0.0; n];
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut next = 0usize;
    for (k, slot) in out.iter_mut().enumerate() {
        let right = (k + w).min(n - 1);
        while next <= right {
            while maxq.back().is_some_and(|&i| v[i] <= v[next]) {
                maxq.pop_back();
            }
            maxq.push_back(next);
            while minq.back().is_some_and(|&i| v[i] >= v[next]) {
                minq.pop_back();
            }
            minq.push_back(next);
            next += 1;
        }
        let left = k.saturating_sub(w);
        while maxq.front().is_some_and(|&i| i < left) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&i| i < left) {
            minq.pop_front();
        }
        let (hi, lo) = (v[maxq[0]], v[minq[0]]);
        *slot = (hi - v[k]).max(v[k] - lo);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonoHolderReport {
    pub alpha: f64,
    pub c_lower_hat: f64,
    pub seminorm_upper_hat: f64,
    pub delta_grid: Vec<f64>,
    /// Lower constant at each delta of the grid.
    pub c_lower_by_delta: Vec<f64>,
    /// Least-squares slope of `log2 c(delta)` against `log2 delta`; a
    /// positive value means the lower constant shrinks with the scale.
    pub lower_decay_exponent: Option<f64>,
    pub pass: bool,
}

/// Largest slope of `log2 c(delta)` vs `log2 delta` still accepted as a
/// scale-independent lower constant.
pub const MAX_LOWER_DECAY: f64 = 0.25;

/// Check `|f(x) - f(y)| >= c delta^alpha` for some grid `y` within `delta`
/// of every grid `x`, at each `delta = 2^-j` (absolute units), and the
/// matching upper Hölder bound.
pub fn check_monoholder(graph: &SampledGraph, alpha: f64, delta_js: &[u32]) -> Result<MonoHolderReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return param(format!("alpha = {alpha} must lie in (0, 1)"));
    }
    if delta_js.is_empty() {
        return param("no scales requested");
    }
    let h = graph.step();
    let n = graph.values.len() - 1;
    let mut deltas = Vec::with_capacity(delta_js.len());
    let mut lower = Vec::with_capacity(delta_js.len());
    for &j in delta_js {
        let delta = (-(j as f64)).exp2();
        let ratio = delta / h;
        if ratio < 1.0 || ratio.fract() != 0.0 || ratio as usize > n {
            return Err(LabError::Resolution(format!(
                "delta = 2^-{j} is not a whole number of grid steps ({ratio}) within the window"
            )));
        }
        let osc = windowed_oscillation(&graph.values, ratio as usize);
        let c = osc.par_iter().copied().reduce(|| f64::INFINITY, f64::min) / delta.powf(alpha);
        deltas.push(delta);
        lower.push(c);
    }
    let c_lower_hat = lower.iter().copied().fold(f64::INFINITY, f64::min);
    let seminorm_upper_hat = holder_seminorm(graph, alpha);
    let lower_decay_exponent = if c_lower_hat > 0.0 && delta_js.len() >= 2 {
        let xs: Vec<f64> = deltas.iter().map(|d| d.log2()).collect();
        let ys: Vec<f64> = lower.iter().map(|c| c.log2()).collect();
        least_squares(&xs, &ys).map(|f| f.slope)
    } else {
        None
    };
    let pass = c_lower_hat > 0.0
        && seminorm_upper_hat.is_finite()
        && lower_decay_exponent.is_none_or(|s| s <= MAX_LOWER_DECAY);
    Ok(MonoHolderReport {
        alpha,
        c_lower_hat,
        seminorm_upper_hat,
        delta_grid: deltas,
        c_lower_by_delta: lower,
        lower_decay_exponent,
        pass,
    })
}

/// Box dimension of `f` and of `f + g` with identical scales; `g` is meant
/// to be Lipschitz.
pub fn lipschitz_perturbation_test(
    graph_f: &SampledGraph,
    graph_g: &SampledGraph,
    j_lo: usize,
    j_hi: usize,
) -> Result<(BoxCountReport, BoxCountReport)> {
    let lip = lipschitz_constant(graph_g);
    if !lip.is_finite() {
        return Err(LabError::Range("perturbation is not Lipschitz on the grid".into()));
    }
    let sum = graph_f.add(graph_g)?;
    Ok((
        estimate_box_dimension(graph_f, j_lo, j_hi)?,
        estimate_box_dimension(&sum, j_lo, j_hi)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_examples() {
        let g = sample(&FunctionSpec::affine(1.0, 0.0), 2).unwrap();
        assert_eq!(g.values(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = sample(&FunctionSpec::hat(), 1).unwrap();
        assert_eq!(g.values(), &[0.0, 0.5, 0.0]);
        let w = crate::zoo::WeierstrassSpec::new(0.5, 4).unwrap();
        let g = sample(&FunctionSpec::Weierstrass(w), 2).unwrap();
        assert_eq!(g.values()[1], w.eval(0.25));
        assert!((g.values()[0] - 2.0).abs() < 1e-11);
    }

    #[test]
    fn counts_for_simple_graphs() {
        let c = sample(&FunctionSpec::constant(3.0), 10).unwrap();
        let l = sample(&FunctionSpec::affine(1.0, 0.0), 10).unwrap();
        for j in 0..=8 {
            assert_eq!(box_count(&c, j).unwrap(), 1 << j);
            assert_eq!(box_count(&l, j).unwrap(), 2 << j);
        }
        let hat = sample(&FunctionSpec::hat(), 4).unwrap();
        assert_eq!(box_count(&hat, 1).unwrap(), 4);
        assert!(matches!(box_count(&l, 9), Err(LabError::Resolution(_))));
    }

    #[test]
    fn affine_dimension_is_one() {
        let l = sample(&FunctionSpec::affine(1.0, 0.0), 14).unwrap();
        let r = estimate_box_dimension(&l, 6, 10).unwrap();
        assert_eq!(r.dim_hat, 1.0);
        assert!(estimate_box_dimension(&l, 6, 8).is_err());
        let csv = r.to_csv();
        assert!(csv.starts_with("j,delta,N,log2N\n6,"));
    }

    #[test]
    fn oscillation_window() {
        let v = [0.0, 3.0, 1.0, -2.0, 0.5];
        assert_eq!(windowed_oscillation(&v, 1), vec![3.0, 3.0, 3.0, 3.0, 2.5]);
        assert_eq!(windowed_oscillation(&v, 0), vec![0.0; 5]);
    }

    #[test]
    fn monoholder_controls() {
        let c = sample(&FunctionSpec::constant(1.0), 12).unwrap();
        let r = check_monoholder(&c, 0.5, &[2, 6, 10]).unwrap();
        assert_eq!(r.c_lower_hat, 0.0);
        assert!(!r.pass);
        let l = sample(&FunctionSpec::affine(1.0, 0.0), 16).unwrap();
        let r = check_monoholder(&l, 0.5, &[2, 6, 10, 14]).unwrap();
        assert!(r.c_lower_by_delta.windows(2).all(|w| w[1] < w[0]));
        assert!(!r.pass);
        assert!(check_monoholder(&l, 0.5, &[17]).is_err());
    }
}
