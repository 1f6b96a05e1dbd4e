use std::fmt::Write as _;

use monsterlab::algebra::{
    check_free_independence, level_set_width_probe, make_generators, verify_dimension_invariance, DegreeMode,
    GeneratorSet,
};
use monsterlab::dimension::{check_monoholder, default_scales, estimate_box_dimension, sample};
use monsterlab::fractional::{classify_frac_differentiability, local_frac_derivative_probe, ProbeLadder};
use monsterlab::schauder::{
    decompose, estimate_global_holder, estimate_pointwise_holder, DEFAULT_LEVEL_MIN, DEFAULT_WINDOW_A,
};
use monsterlab::zoo::{ExpLikeSpec, FunctionSpec, MonoHolderSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::args::{Command, Options};
use crate::error::{usage, CliError};
use crate::output::OutDir;
use crate::plot::PlotLabels;

const DEPTH_RANGE: std::ops::RangeInclusive<usize> = 4..=24;
const DEFAULT_ORDERS: [f64; 4] = [0.2, 0.3, 0.7, 0.8];

pub struct Ctx<'a> {
    pub opts: &'a Options,
    pub spec: Option<FunctionSpec>,
    pub out: &'a mut OutDir,
}

impl Ctx<'_> {
    fn spec(&self) -> Result<&FunctionSpec, CliError> {
        self.spec.as_ref().ok_or_else(|| CliError::Usage("this command needs --spec".into()))
    }

    fn depth(&self, default: usize) -> Result<usize, CliError> {
        let d = self.opts.depth.unwrap_or(default);
        if DEPTH_RANGE.contains(&d) {
            Ok(d)
        } else {
            usage(format!("--depth {d} must lie in {}..={}", DEPTH_RANGE.start(), DEPTH_RANGE.end()))
        }
    }

    fn alpha(&self) -> Result<f64, CliError> {
        match self.opts.alpha {
            Some(a) => Ok(a),
            None => self
                .spec()?
                .holder_exponent()
                .ok_or_else(|| CliError::Usage("the spec fixes no exponent; pass --alpha".into())),
        }
    }

    /// `--points`, or `--count` seeded uniform draws from `[lo, hi)`.
    fn points_or_random(&self, default_count: usize, lo: f64, hi: f64) -> Vec<f64> {
        if let Some(p) = &self.opts.points {
            return p.clone();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
        (0..self.opts.count.unwrap_or(default_count))
            .map(|_| rng.gen_range(lo..hi))
            .collect()
    }
}

pub fn run(command: Command, ctx: &mut Ctx) -> Result<(), CliError> {
    match command {
        Command::Eval => eval(ctx),
        Command::Sample => sample_cmd(ctx),
        Command::Boxdim => boxdim(ctx),
        Command::HolderGlobal => holder_global(ctx),
        Command::HolderPoint => holder_point(ctx),
        Command::Schauder => schauder(ctx),
        Command::Monoholder => monoholder(ctx),
        Command::Fracderiv => fracderiv(ctx),
        Command::FracClassify => frac_classify(ctx),
        Command::AlgebraIndep => algebra_indep(ctx),
        Command::AlgebraInvariance => algebra_invariance(ctx),
        Command::Levelset => levelset(ctx),
    }
}

fn eval(ctx: &mut Ctx) -> Result<(), CliError> {
    let spec = ctx.spec()?;
    let Some(points) = &ctx.opts.points else {
        return usage("eval needs --points");
    };
    let mut csv = String::from("x,value\n");
    for &x in points {
        let v = spec.eval(x)?;
        println!("{v}");
        writeln!(csv, "{x},{v:.17e}").unwrap();
    }
    ctx.out.text("eval.csv", &csv)
}

fn sample_cmd(ctx: &mut Ctx) -> Result<(), CliError> {
    let g = sample(ctx.spec()?, ctx.depth(12)?)?;
    let mut csv = String::from("k,x,value\n");
    for (k, v) in g.values().iter().enumerate() {
        writeln!(csv, "{k},{:.17e},{v:.17e}", g.x(k)).unwrap();
    }
    ctx.out.text("samples.csv", &csv)
}

fn boxdim(ctx: &mut Ctx) -> Result<(), CliError> {
    let depth = ctx.depth(20)?;
    let (lo, hi) = ctx.opts.scales.map_or(default_scales(depth), |s| (s.lo, s.hi));
    let r = estimate_box_dimension(&sample(ctx.spec()?, depth)?, lo, hi)?;
    println!("dim_hat = {:.4} (r2 = {:.4}, scales {lo}..{hi})", r.dim_hat, r.fit_r2);
    ctx.out.text("boxcount.csv", &r.to_csv())?;
    ctx.out.json("boxdim.json", &r.summary_json())?;
    let labels = PlotLabels {
        title: "box counting",
        x: "j (delta = 2^-j)",
        y: "log2 N",
    };
    ctx.out.plot("boxdim.svg", &r.log_points(), &labels)?;
    Ok(())
}

fn holder_global(ctx: &mut Ctx) -> Result<(), CliError> {
    let c = decompose(&sample(ctx.spec()?, ctx.depth(16)?)?);
    let e = estimate_global_holder(&c, DEFAULT_LEVEL_MIN)?;
    println!("alpha_hat = {:.4} (least squares {:.4})", e.alpha_hat, e.alpha_lsq);
    let mut csv = String::from("j,log2_max_abs_c\n");
    let mut rows = Vec::new();
    for (j, row) in c.levels().iter().enumerate().skip(DEFAULT_LEVEL_MIN) {
        let m = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if m > 0.0 {
            writeln!(csv, "{j},{:.17e}", m.log2()).unwrap();
            rows.push((j as f64, m.log2()));
        }
    }
    ctx.out.text("decay.csv", &csv)?;
    ctx.out.json("holder_global.json", &e)?;
    let labels = PlotLabels {
        title: "Schauder coefficient decay",
        x: "level j",
        y: "log2 max |c_jk|",
    };
    ctx.out.plot("decay.svg", &rows, &labels)?;
    Ok(())
}

fn holder_point(ctx: &mut Ctx) -> Result<(), CliError> {
    let c = decompose(&sample(ctx.spec()?, ctx.depth(16)?)?);
    let points = ctx.points_or_random(50, 0.0, 1.0);
    let estimates = points
        .iter()
        .map(|&x0| estimate_pointwise_holder(&c, x0, DEFAULT_WINDOW_A, DEFAULT_LEVEL_MIN))
        .collect::<Result<Vec<_>, _>>()?;
    let mut csv = String::from("x0,h_hat,fit_r2\n");
    for e in &estimates {
        writeln!(csv, "{:.17e},{},{:.6}", e.x0, e.h_hat, e.fit_r2).unwrap();
    }
    let finite: Vec<f64> = estimates.iter().map(|e| e.h_hat).filter(|h| h.is_finite()).collect();
    let n = finite.len() as f64;
    let mean = finite.iter().sum::<f64>() / n;
    let sd = if finite.len() > 1 {
        (finite.iter().map(|h| (h - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    println!("{} points: mean h = {mean:.4}, sd = {sd:.4}", estimates.len());
    ctx.out.text("holder_point.csv", &csv)?;
    ctx.out.json(
        "holder_point.json",
        &json!({ "points": estimates.len(), "finite": finite.len(), "mean": mean, "sd": sd }),
    )
}

fn schauder(ctx: &mut Ctx) -> Result<(), CliError> {
    let g = sample(ctx.spec()?, ctx.depth(14)?)?;
    let c = decompose(&g);
    let max_f = g.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let err = g
        .values()
        .iter()
        .enumerate()
        .map(|(k, v)| (c.reconstruct(g.x(k)) - v).abs())
        .fold(0.0, f64::max);
    let nonzero = c.levels().iter().flatten().filter(|&&v| v != 0.0).count();
    println!("{nonzero} nonzero coefficients, roundtrip error {err:.2e}");
    ctx.out.text("coeffs.csv", &c.to_csv_string())?;
    ctx.out.json(
        "schauder.json",
        &json!({
            "J": c.max_level(),
            "nonzero": nonzero,
            "roundtrip_max_error": err,
            "relative_error": err / (1.0 + max_f),
        }),
    )
}

fn monoholder(ctx: &mut Ctx) -> Result<(), CliError> {
    let depth = ctx.depth(20)?;
    let alpha = ctx.alpha()?;
    let spec = ctx.spec()?;
    let deltas: Vec<u32> = match (&ctx.opts.deltas, spec) {
        (Some(d), _) => d.clone(),
        (None, FunctionSpec::MonoHolder(f)) => f
            .j_seq()
            .iter()
            .map(|&j| j + 1)
            .take_while(|&j| j as usize <= depth)
            .map(|j| j as u32)
            .collect(),
        (None, _) => (4..=depth.saturating_sub(4) as u32).step_by(2).collect(),
    };
    let r = check_monoholder(&sample(spec, depth)?, alpha, &deltas)?;
    println!(
        "c_lower = {:.4}, seminorm = {:.4}, pass = {}",
        r.c_lower_hat, r.seminorm_upper_hat, r.pass
    );
    ctx.out.json("monoholder.json", &r)
}

fn fracderiv(ctx: &mut Ctx) -> Result<(), CliError> {
    let spec = ctx.spec()?.clone();
    let orders = ctx.opts.q.clone().unwrap_or_else(|| vec![0.3, 0.7]);
    let bases = ctx.points_or_random(1, 0.05, 0.9);
    let ladder = ProbeLadder::default();
    let mut csv = String::from("q,a,i,x,value\n");
    let mut reports = Vec::new();
    for &q in &orders {
        for &a in &bases {
            let r = local_frac_derivative_probe(&spec, q, a, &ladder)?;
            for (i, (x, v)) in r.xs.iter().zip(&r.quotient_values).enumerate() {
                writeln!(csv, "{q},{a},{},{x:.17e},{v:.17e}", i + 1).unwrap();
            }
            println!("q = {q}, a = {a}: {} (slope {:.3})", r.classification.label(), r.slope_hat);
            reports.push(json!({
                "q": q,
                "a": a,
                "classification": r.classification,
                "slope_hat": r.slope_hat,
            }));
        }
    }
    ctx.out.text("fracderiv.csv", &csv)?;
    ctx.out.json("fracderiv.json", &json!({ "ladder": ladder, "probes": reports }))
}

fn frac_classify(ctx: &mut Ctx) -> Result<(), CliError> {
    let alpha = ctx.alpha()?;
    let orders = ctx.opts.q.clone().unwrap_or_else(|| DEFAULT_ORDERS.to_vec());
    let bases = ctx.points_or_random(20, 0.05, 0.9);
    let t = classify_frac_differentiability(ctx.spec()?, alpha, &orders, &bases, &ProbeLadder::default())?;
    println!(
        "all q < alpha converge: {}; all q > alpha diverge: {}",
        t.all_below_converge, t.all_above_diverge
    );
    ctx.out.text("frac_classify.csv", &t.to_csv())?;
    let mut summary = t.summary_json();
    summary["converge_fraction_below"] = json!(t.fraction(true, "Converges"));
    summary["diverge_fraction_above"] = json!(t.fraction(false, "Diverges"));
    ctx.out.json("frac_classify.json", &summary)
}

/// Generators carried by a polynomial spec, or built over a base function.
fn generator_set(spec: &FunctionSpec, n: Option<usize>) -> Result<GeneratorSet, CliError> {
    let FunctionSpec::PolyComb { generators, .. } = spec else {
        return Ok(make_generators(spec, n.unwrap_or(3))?);
    };
    let mut base = None;
    let mut rates = Vec::new();
    let mut shift = 0.0;
    for g in generators {
        let FunctionSpec::Compose { outer, inner } = g else {
            return usage("polycomb generators must be exponentials composed with a base");
        };
        let FunctionSpec::ExpLike(e) = outer.as_ref() else {
            return usage("polycomb generators must be exponentials composed with a base");
        };
        let &[(scale, rate)] = e.terms.as_slice() else {
            return usage("each generator must be a single exponential c e^(r y)");
        };
        if base.get_or_insert_with(|| inner.as_ref().clone()) != inner.as_ref() {
            return usage("polycomb generators must share one base function");
        }
        shift = -scale.ln() / rate;
        rates.push(rate);
    }
    let Some(base) = base else {
        return usage("polycomb spec has no generators");
    };
    if n.is_some_and(|n| n != generators.len()) {
        return usage("--generators conflicts with the generators listed in the spec");
    }
    Ok(GeneratorSet {
        base,
        rates,
        shift,
        generators: generators.clone(),
    })
}

fn algebra_indep(ctx: &mut Ctx) -> Result<(), CliError> {
    let gens = generator_set(ctx.spec()?, ctx.opts.generators)?;
    let r = check_free_independence(&gens, ctx.opts.degree, ctx.opts.grid, DegreeMode::Total)?;
    println!(
        "{} monomials, sigma_min = {:.3e}, independent = {}",
        r.monomial_count, r.min_singular_value, r.independent
    );
    ctx.out.json("independence.json", &r)?;
    ctx.out.text("generators.json", &format!("{}\n", gens.to_json()))
}

fn composition_base(spec: &FunctionSpec) -> FunctionSpec {
    match spec {
        FunctionSpec::PolyComb { generators, .. } => match generators.first() {
            Some(FunctionSpec::Compose { inner, .. }) => inner.as_ref().clone(),
            _ => spec.clone(),
        },
        _ => spec.clone(),
    }
}

fn algebra_invariance(ctx: &mut Ctx) -> Result<(), CliError> {
    let depth = ctx.depth(20)?;
    let scales = ctx.opts.scales.map_or(default_scales(depth), |s| (s.lo, s.hi));
    let base = composition_base(ctx.spec()?);
    let outers = [
        ("exp(y)", ExpLikeSpec::exp(1.0)?),
        ("exp(y) - exp(2y)", ExpLikeSpec::new(vec![(1.0, 1.0), (-1.0, 2.0)])?),
        ("2exp(y) + 3exp(-y)", ExpLikeSpec::new(vec![(2.0, 1.0), (3.0, -1.0)])?),
    ];
    let mut csv = String::from("g,dim_base,dim_composed\n");
    let mut rows = Vec::new();
    for (name, g) in &outers {
        let (b, c) = verify_dimension_invariance(g, &base, depth, scales)?;
        println!("{name}: base {:.4}, composed {:.4}", b.dim_hat, c.dim_hat);
        writeln!(csv, "{name},{:.6},{:.6}", b.dim_hat, c.dim_hat).unwrap();
        rows.push(json!({ "g": name, "dim_base": b.dim_hat, "dim_composed": c.dim_hat }));
    }
    ctx.out.text("invariance.csv", &csv)?;
    ctx.out.json(
        "invariance.json",
        &json!({ "depth": depth, "scales": [scales.0, scales.1], "rows": rows }),
    )
}

fn levelset(ctx: &mut Ctx) -> Result<(), CliError> {
    let depth = ctx.depth(20)?;
    let FunctionSpec::MonoHolder(f) = ctx.spec()? else {
        return usage("levelset needs a monoholder spec");
    };
    let f: MonoHolderSpec = f.clone();
    let graph = sample(&FunctionSpec::MonoHolder(f.clone()), depth)?;
    let levels = ctx.opts.points.clone().unwrap_or_else(|| vec![f.eval(0.5)]);
    let mut csv = String::from("y,n,cell_level,max_width,bound,within_bound\n");
    let mut all_within = true;
    for &y in &levels {
        let widths = level_set_width_probe(&graph, y, &f);
        if widths.is_empty() {
            println!("y = {y}: outside the range of F (empty level set)");
        }
        for w in widths {
            all_within &= w.within_bound;
            writeln!(
                csv,
                "{y},{},{},{:.6e},{:.6e},{}",
                w.n, w.cell_level, w.max_component_width, w.bound, w.within_bound
            )
            .unwrap();
        }
    }
    println!("all widths within bound: {all_within}");
    ctx.out.text("levelset.csv", &csv)?;
    ctx.out.json("levelset.json", &json!({ "levels": levels, "all_within_bound": all_within }))
}
