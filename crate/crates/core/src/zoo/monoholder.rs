use serde::{Deserialize, Serialize};

use super::eval_hat;
use crate::error::{param, LabError, Result};

/// Largest level whose dyadic scale `2^j` is a finite double.
pub const MAX_REPRESENTABLE_LEVEL: u64 = 1023;

/// The lacunary Schauder series `F = sum_n 2^(-alpha j_n) sum_k hat(2^j_n x - k)`
/// whose levels `j_n` are chosen greedily so that three growth conditions
/// hold. `F` is strongly monoHölder of exponent `alpha` and has level sets of
/// dimension zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MonoHolderDoc", into = "MonoHolderDoc")]
pub struct MonoHolderSpec {
    alpha: f64,
    n_max: usize,
    r_power: f64,
    depth_cap: Option<u64>,
    /// `j_0 .. j_{n_max + 1}`; the last entry only feeds the tail bound.
    j_seq: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct MonoHolderDoc {
    alpha: f64,
    n_max: usize,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    r_power: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    depth_cap: Option<u64>,
}

fn one() -> f64 {
    1.0
}

fn is_one(x: &f64) -> bool {
    *x == 1.0
}

impl TryFrom<MonoHolderDoc> for MonoHolderSpec {
    type Error = LabError;
    fn try_from(d: MonoHolderDoc) -> Result<Self> {
        MonoHolderSpec::new(d.alpha, d.n_max, d.r_power, d.depth_cap)
    }
}

impl From<MonoHolderSpec> for MonoHolderDoc {
    fn from(s: MonoHolderSpec) -> Self {
        MonoHolderDoc {
            alpha: s.alpha,
            n_max: s.n_max,
            r_power: s.r_power,
            depth_cap: s.depth_cap,
        }
    }
}

/// `r_n = (n + 1)^(-power)`; `power = 1` is the harmonic rule.
pub fn r_rule(power: f64) -> impl Fn(usize) -> f64 {
    move |n| (n as f64 + 1.0).powf(-power)
}

fn log2_sum_pow2(exps: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = exps.collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|e| (e - m).exp2()).sum::<f64>().log2()
}

/// Which of the three growth conditions hold for a candidate `j_n`, given
/// the earlier levels `prev = [j_0, .., j_{n-1}]`.
pub fn growth_conditions(alpha: f64, r_prev: f64, prev: &[u64], j: u64) -> [bool; 3] {
    let n = prev.len() as f64;
    let last = *prev.last().expect("j_0 is always present") as f64;
    let j = j as f64;
    let lhs = log2_sum_pow2(prev.iter().map(|&l| (1.0 - alpha) * l as f64));
    let sum_cond = lhs < (1.0 - alpha) * j - 1.0;
    let gap_cond = alpha * j >= alpha * last + 5.0;
    let ratio_cond = alpha * r_prev * j > (1.0 - r_prev * (1.0 - alpha)) * last + n;
    [sum_cond, gap_cond, ratio_cond]
}

/// Greedy-minimal level sequence `j_0 = 0 < j_1 < .. < j_{n_max}`.
pub fn build_j_sequence(alpha: f64, r: impl Fn(usize) -> f64, n_max: usize) -> Result<Vec<u64>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return param(format!("alpha = {alpha} must lie in (0, 1)"));
    }
    let mut js = vec![0u64];
    for n in 1..=n_max {
        let rp = r(n - 1);
        if !(rp > 0.0 && rp.is_finite()) {
            return param(format!("r_{} = {rp} must be positive", n - 1));
        }
        let last = js[n - 1] as f64;
        let lhs = log2_sum_pow2(js.iter().map(|&l| (1.0 - alpha) * l as f64));
        let bounds = [
            (1.0 + lhs) / (1.0 - alpha),
            last + 5.0 / alpha,
            ((1.0 - rp * (1.0 - alpha)) * last + n as f64) / (alpha * rp),
        ];
        let lower = bounds.iter().copied().fold(last + 1.0, f64::max);
        if lower > 1e15 {
            return Err(LabError::Range(format!("j_{n} exceeds 1e15")));
        }
        let mut j = (lower.floor() as u64).saturating_sub(2).max(js[n - 1] + 1);
        while !growth_conditions(alpha, rp, &js, j).iter().all(|&c| c) {
            j += 1;
        }
        js.push(j);
    }
    Ok(js)
}

impl MonoHolderSpec {
    pub fn new(alpha: f64, n_max: usize, r_power: f64, depth_cap: Option<u64>) -> Result<Self> {
        if n_max < 1 {
            return param("monoholder: n_max must be >= 1");
        }
        if !(r_power > 0.0 && r_power.is_finite()) {
            return param(format!("monoholder: r_power = {r_power} must be positive"));
        }
        let j_seq = build_j_sequence(alpha, r_rule(r_power), n_max + 1)?;
        Ok(MonoHolderSpec {
            alpha,
            n_max,
            r_power,
            depth_cap,
            j_seq,
        })
    }

    /// Harmonic `r_n`, no explicit cap.
    pub fn standard(alpha: f64, n_max: usize) -> Result<Self> {
        Self::new(alpha, n_max, 1.0, None)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn r_power(&self) -> f64 {
        self.r_power
    }

    pub fn depth_cap(&self) -> Option<u64> {
        self.depth_cap
    }

    pub fn with_depth_cap(mut self, cap: Option<u64>) -> Self {
        self.depth_cap = cap;
        self
    }

    /// `[j_0, .., j_{n_max}]`.
    pub fn j_seq(&self) -> &[u64] {
        &self.j_seq[..=self.n_max]
    }

    /// Levels that enter evaluation: capped by `depth_cap` (default: every
    /// level with a finite scale `2^j`).
    pub fn active_levels(&self) -> impl Iterator<Item = u64> + '_ {
        let cap = self
            .depth_cap
            .unwrap_or(MAX_REPRESENTABLE_LEVEL)
            .min(MAX_REPRESENTABLE_LEVEL);
        self.j_seq().iter().copied().filter(move |&j| j <= cap)
    }

    /// Only level 0 survives the cap.
    pub fn is_degenerate(&self) -> bool {
        self.active_levels().count() < 2
    }

    /// Bound on the contribution of every omitted level (including those
    /// past `n_max`), `2^(-alpha j) * 32/31` for the first omitted `j`.
    pub fn truncation_bound(&self) -> f64 {
        let used = self.active_levels().count();
        let first_omitted = self.j_seq[used];
        (-self.alpha * first_omitted as f64).exp2() * 32.0 / 31.0
    }

    /// Re-check every growth condition on the stored sequence.
    pub fn conditions_hold(&self) -> bool {
        let r = r_rule(self.r_power);
        (1..self.j_seq.len()).all(|n| {
            growth_conditions(self.alpha, r(n - 1), &self.j_seq[..n], self.j_seq[n])
                .iter()
                .all(|&c| c)
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        if !(0.0..1.0).contains(&x) {
            return 0.0;
        }
        self.active_levels()
            .map(|j| {
                let jf = j as f64;
                let y = x * jf.exp2();
                (-self.alpha * jf).exp2() * eval_hat(y - y.floor())
            })
            .sum()
    }
}
