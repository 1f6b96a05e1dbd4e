//! Exponential-like generator families over a base function, the numerical
//! free-independence check, level-set probes and the dimension invariance of
//! compositions.

mod independence;
mod levelset;

pub use independence::{check_free_independence, monomials, DegreeMode, IndependenceReport, INDEPENDENCE_THRESHOLD};
pub use levelset::{
    count_level_hits, exceptional_columns, level_hits, level_set_width_probe, sup_abs_derivative,
    verify_dimension_invariance, ExceptionalSet, LevelWidth,
};

use serde::Serialize;

use crate::dimension::sample;
use crate::error::{param, LabError, Result};
use crate::zoo::{ExpLikeSpec, FunctionSpec};

pub const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Depth of the grid used to locate the maximum of the base function.
const SHIFT_DEPTH: usize = 14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorSet {
    pub base: FunctionSpec,
    pub rates: Vec<f64>,
    /// Sampled maximum of the base; generator `i` is `exp(r_i (base - shift))`.
    pub shift: f64,
    pub generators: Vec<FunctionSpec>,
}

impl GeneratorSet {
    /// Generators `exp(r (base - max base))` for arbitrary nonzero rates. No
    /// relation check is made; see [`find_integer_relation`].
    pub fn with_rates(base: FunctionSpec, rates: Vec<f64>) -> Result<Self> {
        if rates.is_empty() {
            return param("generator set needs at least one rate");
        }
        let graph = sample(&base, SHIFT_DEPTH)?;
        let shift = graph.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let generators = rates
            .iter()
            .map(|&r| {
                let scale = (-r * shift).exp();
                if scale == 0.0 || !scale.is_finite() {
                    return Err(LabError::Range(format!("exp(-{r} * {shift}) is out of range")));
                }
                FunctionSpec::compose(
                    FunctionSpec::ExpLike(ExpLikeSpec::new(vec![(scale, r)])?),
                    base.clone(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorSet {
            base,
            rates,
            shift,
            generators,
        })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generators as a JSON array of function specs.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.generators).expect("function specs always serialize")
    }
}

/// `sqrt` of the first `n` primes.
pub fn prime_root_rates(n: usize) -> Vec<f64> {
    PRIMES[..n].iter().map(|&p| f64::from(p).sqrt()).collect()
}

/// Generators over `base` with rates `sqrt(2), sqrt(3), sqrt(5), ..`.
pub fn make_generators(base: &FunctionSpec, n: usize) -> Result<GeneratorSet> {
    if !(1..=PRIMES.len()).contains(&n) {
        return param(format!("number of generators {n} must lie in [1, {}]", PRIMES.len()));
    }
    let rates = prime_root_rates(n);
    debug_assert!(find_integer_relation(&rates, 10, 4).is_none());
    GeneratorSet::with_rates(base.clone(), rates)
}

/// Search for `sum c_i r_i = 0` with at most `max_terms` nonzero integers
/// `|c_i| <= max_coeff`. The last coefficient of each subset is solved for,
/// so the search is `O(C(n, k) (2B)^(k-1))`.
pub fn find_integer_relation(rates: &[f64], max_coeff: i64, max_terms: usize) -> Option<Vec<(usize, i64)>> {
    fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            subsets(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let n = rates.len();
    let coeff_values: Vec<i64> = (-max_coeff..=max_coeff).filter(|&c| c != 0).collect();
    for k in 1..=max_terms.min(n) {
        let mut idx = Vec::new();
        subsets(n, k, 0, &mut Vec::new(), &mut idx);
        for set in idx {
            let free = k - 1;
            let mut digits = vec![0usize; free];
            loop {
                let cs: Vec<i64> = digits.iter().map(|&d| coeff_values[d]).collect();
                // Fix the sign of the first coefficient.
                if cs.first().is_none_or(|&c| c > 0) {
                    let partial: f64 = cs.iter().zip(&set).map(|(&c, &i)| c as f64 * rates[i]).sum();
                    let r_last = rates[set[k - 1]];
                    let c_last = -partial / r_last;
                    let rounded = c_last.round();
                    if rounded != 0.0 && rounded.abs() <= max_coeff as f64 {
                        let scale: f64 = cs.iter().zip(&set).map(|(&c, &i)| (c as f64 * rates[i]).abs()).sum::<f64>()
                            + (rounded * r_last).abs();
                        if (partial + rounded * r_last).abs() <= 1e-9 * scale {
                            let mut rel: Vec<(usize, i64)> = cs.iter().zip(&set).map(|(&c, &i)| (i, c)).collect();
                            rel.push((set[k - 1], rounded as i64));
                            return Some(rel);
                        }
                    }
                }
                let mut pos = 0;
                while pos < free {
                    digits[pos] += 1;
                    if digits[pos] < coeff_values.len() {
                        break;
                    }
                    digits[pos] = 0;
                    pos += 1;
                }
                if pos == free {
                    break;
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rates_are_prime_roots() {
        assert_eq!(prime_root_rates(1), vec![2f64.sqrt()]);
        let r = prime_root_rates(3);
        assert_eq!(r, vec![2f64.sqrt(), 3f64.sqrt(), 5f64.sqrt()]);
        assert!(find_integer_relation(&r, 10, 4).is_none());
    }

    #[test]
    fn relation_search_finds_planted_relations() {
        let s2 = 2f64.sqrt();
        let rel = find_integer_relation(&[s2, 3f64.sqrt(), 8f64.sqrt()], 10, 4).unwrap();
        // sqrt(8) = 2 sqrt(2)
        assert_eq!(rel.len(), 2);
        assert!(find_integer_relation(&[s2, s2], 10, 2).is_some());
        assert!(find_integer_relation(&[1.5, 2.5, 0.5], 10, 3).is_some());
    }

    #[test]
    fn generators_are_rescaled_exponentials() {
        let w = FunctionSpec::weierstrass(0.5, 4).unwrap();
        let g = make_generators(&w, 2).unwrap();
        assert!((g.shift - 2.0).abs() < 1e-9);
        let v = g.generators[0].eval(0.0).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
        assert!(make_generators(&w, 0).is_err());
        assert!(make_generators(&w, 17).is_err());
    }

    #[test]
    fn constant_base_gives_unit_generators() {
        let g = make_generators(&FunctionSpec::constant(0.0), 3).unwrap();
        for s in &g.generators {
            assert_eq!(s.eval(0.37).unwrap(), 1.0);
        }
    }
}
