use serde::Serialize;

use crate::dimension::{estimate_box_dimension, sample, BoxCountReport, SampledGraph};
use crate::error::{param, Result};
use crate::zoo::{ExpLikeSpec, FunctionSpec, MonoHolderSpec};

const BISECTION_TOL: f64 = 1e-12;

/// Roots of `g - c` on `[lo, hi]`, located by sign changes on a uniform grid
/// of `resolution` cells and refined by bisection.
pub fn level_hits(g: &ExpLikeSpec, c: f64, bracket: (f64, f64), resolution: usize) -> Result<Vec<f64>> {
    if resolution < 1024 {
        return param(format!("resolution {resolution} must be >= 1024"));
    }
    let (lo, hi) = bracket;
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return param(format!("bad bracket [{lo}, {hi}]"));
    }
    let h = |x: f64| g.eval(x).map(|v| v - c);
    let x_at = |i: usize| lo + (hi - lo) * (i as f64 / resolution as f64);
    let mut roots = Vec::new();
    let mut prev = h(lo)?;
    if prev == 0.0 {
        roots.push(lo);
    }
    for i in 1..=resolution {
        let x = x_at(i);
        let cur = h(x)?;
        if cur == 0.0 {
            roots.push(x);
        } else if prev != 0.0 && (prev < 0.0) != (cur < 0.0) {
            let (mut a, mut b, mut fa) = (x_at(i - 1), x, prev);
            while b - a > BISECTION_TOL {
                let m = 0.5 * (a + b);
                let fm = h(m)?;
                if fm == 0.0 {
                    a = m;
                    b = m;
                    break;
                }
                if (fm < 0.0) == (fa < 0.0) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev = cur;
    }
    Ok(roots)
}

pub fn count_level_hits(g: &ExpLikeSpec, c: f64, bracket: (f64, f64), resolution: usize) -> Result<usize> {
    level_hits(g, c, bracket, resolution).map(|r| r.len())
}

/// `sup |g'|` on `[lo, hi]`: the maximum of `|g'|` over the endpoints and the
/// zeros of `g''`.
pub fn sup_abs_derivative(g: &ExpLikeSpec, lo: f64, hi: f64) -> Result<f64> {
    let d1 = g.derivative();
    let mut best = d1.eval(lo)?.abs().max(d1.eval(hi)?.abs());
    if hi > lo {
        for x in level_hits(&d1.derivative(), 0.0, (lo, hi), 4096)? {
            best = best.max(d1.eval(x)?.abs());
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelWidth {
    pub n: usize,
    /// Dyadic level `j_n + 1` of the cells the level set is cut into.
    pub cell_level: u64,
    pub max_component_width: f64,
    /// `8 * 2^(-alpha j_{n+1} + (alpha - 1) j_n)` plus one grid step.
    pub bound: f64,
    pub within_bound: bool,
}

/// Level set `{F = y}` of the piecewise-linear interpolant, as sorted
/// intervals (points are degenerate intervals).
fn level_set_intervals(graph: &SampledGraph, y: f64) -> Vec<(f64, f64)> {
    let v = graph.values();
    let mut out: Vec<(f64, f64)> = Vec::new();
    for i in 0..v.len() - 1 {
        let (a, b) = (v[i] - y, v[i + 1] - y);
        if a * b > 0.0 {
            continue;
        }
        let (x0, x1) = (graph.x(i), graph.x(i + 1));
        let piece = if a == 0.0 && b == 0.0 {
            (x0, x1)
        } else {
            let t = a / (a - b);
            let x = x0 + (x1 - x0) * t;
            (x, x)
        };
        match out.last_mut() {
            Some(last) if piece.0 <= last.1 => last.1 = last.1.max(piece.1),
            _ => out.push(piece),
        }
    }
    out
}

/// Largest diameter of the level set inside a single dyadic cell of level
/// `c`.
fn max_width_in_cells(intervals: &[(f64, f64)], c: u64) -> f64 {
    let scale = (c as f64).exp2();
    let cell_w = 1.0 / scale;
    let mut best = 0.0f64;
    let mut current: Option<(f64, f64, f64)> = None;
    let mut visit = |cell: f64, lo: f64, hi: f64, best: &mut f64| match &mut current {
        Some((k, a, b)) if *k == cell => {
            *a = a.min(lo);
            *b = b.max(hi);
            *best = best.max(*b - *a);
        }
        _ => {
            current = Some((cell, lo, hi));
            *best = best.max(hi - lo);
        }
    };
    for &(lo, hi) in intervals {
        let (k_lo, k_hi) = ((lo * scale).floor(), (hi * scale).floor());
        if k_lo == k_hi {
            visit(k_lo, lo, hi, &mut best);
        } else {
            visit(k_lo, lo, (k_lo + 1.0) * cell_w, &mut best);
            if k_hi - k_lo >= 2.0 {
                best = best.max(cell_w);
            }
            visit(k_hi, k_hi * cell_w, hi, &mut best);
        }
    }
    best
}

/// For each `n`, the largest piece of `{F = y}` within one dyadic cell of
/// level `j_n + 1`, compared with `8 * 2^(-alpha j_{n+1} + (alpha-1) j_n)`.
/// Empty when `y` is outside the sampled range.
pub fn level_set_width_probe(graph: &SampledGraph, y: f64, spec: &MonoHolderSpec) -> Vec<LevelWidth> {
    let v = graph.values();
    let (lo, hi) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    if !(lo..=hi).contains(&y) {
        return Vec::new();
    }
    let intervals = level_set_intervals(graph, y);
    let alpha = spec.alpha();
    let js = spec.j_seq();
    (0..js.len() - 1)
        .take_while(|&n| js[n] + 1 <= 1000)
        .map(|n| {
            let (jn, jn1) = (js[n] as f64, js[n + 1] as f64);
            let bound = 8.0 * (-alpha * jn1 + (alpha - 1.0) * jn).exp2() + graph.step();
            let w = max_width_in_cells(&intervals, js[n] + 1);
            LevelWidth {
                n,
                cell_level: js[n] + 1,
                max_component_width: w,
                bound,
                within_bound: w <= bound,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExceptionalSet {
    /// Zeros of `g'` inside the sampled range of the base.
    pub critical_values: Vec<f64>,
    /// Grid columns whose value range contains a critical value.
    pub columns: Vec<usize>,
}

/// Where `g'(F(x)) = 0`: the finitely many critical values of `g` (at most
/// `m - 1` of them) and the grid columns on which `F` reaches one.
pub fn exceptional_columns(g: &ExpLikeSpec, graph: &SampledGraph) -> Result<ExceptionalSet> {
    let v = graph.values();
    let (lo, hi) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    let critical_values = if hi > lo {
        level_hits(&g.derivative(), 0.0, (lo, hi), 4096)?
    } else {
        Vec::new()
    };
    let columns = (0..v.len() - 1)
        .filter(|&i| {
            let (a, b) = (v[i].min(v[i + 1]), v[i].max(v[i + 1]));
            critical_values.iter().any(|&c| a <= c && c <= b)
        })
        .collect();
    Ok(ExceptionalSet {
        critical_values,
        columns,
    })
}

/// Box dimension of `base` and of `g o base` with identical settings.
pub fn verify_dimension_invariance(
    g: &ExpLikeSpec,
    base: &FunctionSpec,
    depth: usize,
    scales: (usize, usize),
) -> Result<(BoxCountReport, BoxCountReport)> {
    let composed = FunctionSpec::compose(FunctionSpec::ExpLike(g.clone()), base.clone())?;
    let gb = sample(base, depth)?;
    let gc = sample(&composed, depth)?;
    Ok((
        estimate_box_dimension(&gb, scales.0, scales.1)?,
        estimate_box_dimension(&gc, scales.0, scales.1)?,
    ))
}
