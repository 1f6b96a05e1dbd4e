use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "monsterlab", version, about = "Numerical laboratory for pathological continuous functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Evaluate the function at --points.
    Eval,
    /// Sample on the dyadic grid of --depth.
    Sample,
    /// Box-counting dimension of the graph.
    Boxdim,
    /// Global Hölder exponent from Schauder coefficient decay.
    HolderGlobal,
    /// Pointwise Hölder exponents at --points (or seeded random points).
    HolderPoint,
    /// Schauder coefficients as CSV.
    Schauder,
    /// Two-sided strong monoHölder check.
    Monoholder,
    /// Fractional difference-quotient ladders at the base points.
    Fracderiv,
    /// Converge/diverge table over orders and base points.
    FracClassify,
    /// Numerical free-independence check of exponential generators.
    AlgebraIndep,
    /// Box dimension of g o base for exponential-like g.
    AlgebraInvariance,
    /// Level-set widths of the lacunary function.
    Levelset,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Sample => "sample",
            Command::Boxdim => "boxdim",
            Command::HolderGlobal => "holder-global",
            Command::HolderPoint => "holder-point",
            Command::Schauder => "schauder",
            Command::Monoholder => "monoholder",
            Command::Fracderiv => "fracderiv",
            Command::FracClassify => "frac-classify",
            Command::AlgebraIndep => "algebra-indep",
            Command::AlgebraInvariance => "algebra-invariance",
            Command::Levelset => "levelset",
        }
    }
}

/// Scale range `LO:HI`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Scales {
    pub lo: usize,
    pub hi: usize,
}

impl FromStr for Scales {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
        Ok(Scales {
            lo: parse(lo)?,
            hi: parse(hi)?,
        })
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Options {
    /// FunctionSpec JSON document.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "monsterlab-out")]
    pub out: PathBuf,
    /// Dyadic grid depth L (2^L + 1 samples), 4..=24.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Box-counting scale range.
    #[arg(long, global = true, value_name = "LO:HI")]
    pub scales: Option<Scales>,
    /// Hölder exponent; defaults to the one fixed by the spec.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Comma-separated fractional orders.
    #[arg(long, global = true, value_delimiter = ',', num_args = 1..)]
    pub q: Option<Vec<f64>>,
    /// Comma-separated points (abscissae, base points or levels, by command).
    #[arg(long, global = true, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub points: Option<Vec<f64>>,
    /// Degree bound for monomials.
    #[arg(long, global = true, default_value_t = 2)]
    pub degree: u32,
    /// Grid size for the independence matrix.
    #[arg(long, global = true, default_value_t = 512)]
    pub grid: usize,
    /// Seed for random probe points.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of seeded random points when --points is absent.
    #[arg(long, global = true)]
    pub count: Option<usize>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "MONSTERLAB_THREADS")]
    pub threads: Option<usize>,
    /// Number of generators for algebra-indep when the spec is a base function.
    #[arg(long, global = true)]
    pub generators: Option<usize>,
    /// Levels j of the scales delta = 2^-j for monoholder.
    #[arg(long, global = true, value_delimiter = ',', num_args = 1..)]
    pub deltas: Option<Vec<u32>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn scales_parse() {
        assert_eq!("6:16".parse::<Scales>().unwrap(), Scales { lo: 6, hi: 16 });
        assert!("6-16".parse::<Scales>().is_err());
        assert!("a:3".parse::<Scales>().is_err());
    }

    #[test]
    fn lists_and_globals() {
        let c = Cli::try_parse_from(["monsterlab", "eval", "--points", "0.1,-0.5", "--q", "0.2,0.7"]).unwrap();
        assert_eq!(c.command, Command::Eval);
        assert_eq!(c.opts.points, Some(vec![0.1, -0.5]));
        assert_eq!(c.opts.q, Some(vec![0.2, 0.7]));
        let c = Cli::try_parse_from(["monsterlab", "--depth", "9", "boxdim", "--scales", "4:7"]).unwrap();
        assert_eq!(c.opts.depth, Some(9));
        assert_eq!(c.opts.scales, Some(Scales { lo: 4, hi: 7 }));
    }
}
