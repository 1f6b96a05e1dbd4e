use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ExpLikeSpec, MonoHolderSpec, WeierstrassSpec};
use crate::error::{param, LabError, Result};
use crate::schauder::SchauderCoefficients;

/// A Schauder series stored in a coefficient CSV file. The coefficients are
/// loaded by [`FunctionSpec::resolve_files`] (done automatically by the JSON
/// loaders) or attached directly with [`SchauderRef::inline`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchauderRef {
    pub file: PathBuf,
    #[serde(skip)]
    pub coeffs: Option<Arc<SchauderCoefficients>>,
}

impl SchauderRef {
    pub fn inline(coeffs: SchauderCoefficients) -> Self {
        SchauderRef {
            file: PathBuf::new(),
            coeffs: Some(Arc::new(coeffs)),
        }
    }
}

/// Serializable description of every function the laboratory can build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FunctionSpec {
    Weierstrass(WeierstrassSpec),
    Schauder(SchauderRef),
    #[serde(rename = "monoholder")]
    MonoHolder(MonoHolderSpec),
    #[serde(rename = "explike")]
    ExpLike(ExpLikeSpec),
    Affine {
        slope: f64,
        intercept: f64,
    },
    Compose {
        outer: Box<FunctionSpec>,
        inner: Box<FunctionSpec>,
    },
    #[serde(rename = "lincomb")]
    LinComb { terms: Vec<(f64, FunctionSpec)> },
    /// Polynomial without constant term in the generators' values.
    #[serde(rename = "polycomb")]
    PolyComb {
        monomials: Vec<(f64, Vec<u32>)>,
        generators: Vec<FunctionSpec>,
    },
}

impl FunctionSpec {
    pub fn affine(slope: f64, intercept: f64) -> Self {
        FunctionSpec::Affine { slope, intercept }
    }

    pub fn constant(c: f64) -> Self {
        Self::affine(0.0, c)
    }

    pub fn weierstrass(a: f64, b: u32) -> Result<Self> {
        Ok(FunctionSpec::Weierstrass(WeierstrassSpec::new(a, b)?))
    }

    /// The hat function `min(x, 1 - x)` as a one-coefficient Schauder series.
    pub fn hat() -> Self {
        FunctionSpec::Schauder(SchauderRef::inline(SchauderCoefficients::from_levels(
            vec![vec![1.0]],
            0.0,
            0.0,
        )))
    }

    pub fn compose(outer: FunctionSpec, inner: FunctionSpec) -> Result<Self> {
        let s = FunctionSpec::Compose {
            outer: Box::new(outer),
            inner: Box::new(inner),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn from_json_str(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut spec: FunctionSpec =
            serde_json::from_str(text).map_err(|e| LabError::Parse(format!("function spec: {e}")))?;
        spec.resolve_files(base_dir.unwrap_or_else(|| Path::new(".")))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Read a spec document; Schauder coefficient files are looked up
    /// relative to the document's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::from_json_str(&text, path.parent())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("function specs always serialize")
    }

    pub fn resolve_files(&mut self, base_dir: &Path) -> Result<()> {
        match self {
            FunctionSpec::Schauder(r) if r.coeffs.is_none() => {
                let path = base_dir.join(&r.file);
                r.coeffs = Some(Arc::new(SchauderCoefficients::read_csv(&path)?));
                Ok(())
            }
            FunctionSpec::Compose { outer, inner } => {
                outer.resolve_files(base_dir)?;
                inner.resolve_files(base_dir)
            }
            FunctionSpec::LinComb { terms } => terms
                .iter_mut()
                .try_for_each(|(_, s)| s.resolve_files(base_dir)),
            FunctionSpec::PolyComb { generators, .. } => generators
                .iter_mut()
                .try_for_each(|s| s.resolve_files(base_dir)),
            _ => Ok(()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            FunctionSpec::Weierstrass(w) => w.validate(),
            FunctionSpec::Schauder(r) => match &r.coeffs {
                Some(c) => c.validate(),
                None => param(format!("schauder: coefficients of {:?} not loaded", r.file)),
            },
            FunctionSpec::MonoHolder(f) => {
                if f.conditions_hold() {
                    Ok(())
                } else {
                    param("monoholder: level sequence violates the growth conditions")
                }
            }
            FunctionSpec::ExpLike(g) => g.validate(),
            FunctionSpec::Affine { slope, intercept } => {
                if slope.is_finite() && intercept.is_finite() {
                    Ok(())
                } else {
                    param("affine: slope and intercept must be finite")
                }
            }
            FunctionSpec::Compose { outer, inner } => {
                if !matches!(**outer, FunctionSpec::ExpLike(_) | FunctionSpec::Affine { .. }) {
                    return param("compose: outer function must be explike or affine");
                }
                outer.validate()?;
                inner.validate()
            }
            FunctionSpec::LinComb { terms } => {
                for (c, s) in terms {
                    if !c.is_finite() {
                        return param("lincomb: coefficients must be finite");
                    }
                    s.validate()?;
                }
                Ok(())
            }
            FunctionSpec::PolyComb {
                monomials,
                generators,
            } => {
                if generators.is_empty() {
                    return param("polycomb: at least one generator is required");
                }
                for (c, e) in monomials {
                    if !c.is_finite() {
                        return param("polycomb: coefficients must be finite");
                    }
                    if e.len() != generators.len() {
                        return param(format!(
                            "polycomb: exponent vector {e:?} has {} entries for {} generators",
                            e.len(),
                            generators.len()
                        ));
                    }
                    if e.iter().all(|&k| k == 0) {
                        return param("polycomb: constant monomials are not allowed");
                    }
                }
                generators.iter().try_for_each(FunctionSpec::validate)
            }
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let v = match self {
            FunctionSpec::Weierstrass(w) => w.eval(x),
            FunctionSpec::Schauder(r) => match &r.coeffs {
                Some(c) => c.reconstruct(x),
                None => return param(format!("schauder: coefficients of {:?} not loaded", r.file)),
            },
            FunctionSpec::MonoHolder(f) => f.eval(x),
            FunctionSpec::ExpLike(g) => g.eval(x)?,
            FunctionSpec::Affine { slope, intercept } => slope * x + intercept,
            FunctionSpec::Compose { outer, inner } => outer.eval(inner.eval(x)?)?,
            FunctionSpec::LinComb { terms } => {
                let mut s = 0.0;
                for (c, f) in terms {
                    s += c * f.eval(x)?;
                }
                s
            }
            FunctionSpec::PolyComb {
                monomials,
                generators,
            } => {
                let g = generators
                    .iter()
                    .map(|f| f.eval(x))
                    .collect::<Result<Vec<_>>>()?;
                monomials
                    .iter()
                    .map(|(c, e)| {
                        c * e
                            .iter()
                            .zip(&g)
                            .map(|(&k, &v)| v.powi(k as i32))
                            .product::<f64>()
                    })
                    .sum()
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(LabError::Range(format!("non-finite value at x = {x}")))
        }
    }

    /// Known Hölder exponent of the function, when the construction fixes one.
    pub fn holder_exponent(&self) -> Option<f64> {
        match self {
            FunctionSpec::Weierstrass(w) => Some(w.alpha()),
            FunctionSpec::MonoHolder(f) => Some(f.alpha()),
            FunctionSpec::Affine { .. } | FunctionSpec::ExpLike(_) => Some(1.0),
            FunctionSpec::Compose { inner, .. } => inner.holder_exponent(),
            FunctionSpec::LinComb { terms } => terms
                .iter()
                .map(|(_, f)| f.holder_exponent())
                .try_fold(1.0f64, |m, a| a.map(|a| m.min(a))),
            FunctionSpec::PolyComb { generators, .. } => generators
                .iter()
                .map(FunctionSpec::holder_exponent)
                .try_fold(1.0f64, |m, a| a.map(|a| m.min(a))),
            FunctionSpec::Schauder(_) => None,
        }
    }
}
