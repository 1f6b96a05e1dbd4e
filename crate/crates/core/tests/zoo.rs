use monsterlab::dimension::{holder_seminorm, sample};
use monsterlab::algebra::sup_abs_derivative;
use monsterlab::schauder::{decompose, SchauderCoefficients};
use monsterlab::zoo::{
    build_j_sequence, eval_hat, make_lineable_member, r_rule, ExpLikeSpec, FunctionSpec, MonoHolderSpec,
    WeierstrassSpec,
};
use monsterlab::LabError;
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn weierstrass_examples() {
    let w = WeierstrassSpec::new(0.5, 4).unwrap();
    assert!(close(w.eval(0.0), 2.0, 1e-12));
    assert!(close(w.eval(0.5), 0.0, 1e-12));
    let w = WeierstrassSpec::new(0.7, 2).unwrap();
    assert!(close(w.eval(0.0), 1.0 / 0.3, 1e-11));
}

#[test]
fn weierstrass_rejects_bad_parameters() {
    for (a, b) in [(0.0, 4), (1.0, 4), (0.3, 2), (0.5, 1)] {
        assert!(matches!(WeierstrassSpec::new(a, b), Err(LabError::Parameter(_))), "a={a} b={b}");
    }
}

#[test]
fn lacunary_sequence_is_greedy_minimal() {
    let js = build_j_sequence(0.5, r_rule(1.0), 4).unwrap();
    assert_eq!(js, vec![0, 10, 39, 214, 1531]);
    // Brute-force oracle for j_1: the three inequalities scanned directly.
    let alpha = 0.5f64;
    let j1 = (1..=64u64)
        .find(|&j| {
            let j = j as f64;
            1.0 < 0.5 * ((1.0 - alpha) * j).exp2() && alpha * j >= 5.0 && alpha * 1.0 * j > 1.0
        })
        .unwrap();
    assert_eq!(j1, js[1]);
}

#[test]
fn lacunary_examples() {
    let f = MonoHolderSpec::standard(0.5, 4).unwrap();
    assert_eq!(f.eval(0.0), 0.0);
    // Level 0 gives 1/2, level 10 vanishes at 1/2, deeper levels vanish too.
    assert_eq!(f.eval(0.5), 0.5);
    let x = 0.3;
    let direct: f64 = [0u32, 10, 39]
        .iter()
        .map(|&j| (-0.5 * j as f64).exp2() * eval_hat((x * f64::from(j).exp2()).fract()))
        .sum();
    assert!(close(f.eval(x), direct, 1e-15));
    let cap: f64 = 0.5 * f.j_seq().iter().map(|&j| (-0.5 * j as f64).exp2()).sum::<f64>();
    for k in 0..1000 {
        assert!(f.eval(k as f64 / 1000.0).abs() <= cap);
    }
}

#[test]
fn shallow_cap_is_degenerate() {
    let f = MonoHolderSpec::standard(0.5, 4).unwrap().with_depth_cap(Some(5));
    assert!(f.is_degenerate());
    assert_eq!(f.eval(0.25), 0.25);
}

#[test]
fn hat_examples() {
    assert_eq!(eval_hat(0.5), 0.5);
    assert_eq!(eval_hat(0.25), 0.25);
    assert_eq!(eval_hat(-1.0), 0.0);
}

#[test]
fn explike_examples() {
    let e = ExpLikeSpec::exp(1.0).unwrap();
    assert_eq!(e.eval(0.0).unwrap(), 1.0);
    let g = ExpLikeSpec::new(vec![(1.0, 1.0), (-1.0, 2.0)]).unwrap();
    assert_eq!(g.eval(0.0).unwrap(), 0.0);
    let g = ExpLikeSpec::new(vec![(2.0, 1.0), (3.0, -1.0)]).unwrap();
    assert!(close(g.eval(2f64.ln()).unwrap(), 5.5, 1e-14));
    assert!(matches!(e.eval(1000.0), Err(LabError::Range(_))));
    assert!(ExpLikeSpec::new(vec![(1.0, 1.0), (2.0, 1.0)]).is_err());
    assert!(ExpLikeSpec::new(vec![(0.0, 1.0)]).is_err());
    assert!(ExpLikeSpec::new(vec![]).is_err());
}

#[test]
fn spec_dispatch_examples() {
    let c = FunctionSpec::compose(FunctionSpec::ExpLike(ExpLikeSpec::exp(1.0).unwrap()), FunctionSpec::weierstrass(0.5, 4).unwrap())
        .unwrap();
    assert!(close(c.eval(0.0).unwrap(), 2f64.exp(), 1e-11));
    let l = FunctionSpec::LinComb {
        terms: vec![(2.0, FunctionSpec::affine(1.0, 0.0)), (-1.0, FunctionSpec::affine(2.0, 0.0))],
    };
    for x in [0.0, 0.3, 0.9] {
        assert_eq!(l.eval(x).unwrap(), 0.0);
    }
    let p = FunctionSpec::PolyComb {
        monomials: vec![(1.0, vec![2])],
        generators: vec![FunctionSpec::affine(1.0, 0.0)],
    };
    assert_eq!(p.eval(0.5).unwrap(), 0.25);
}

#[test]
fn spec_invariants_are_enforced() {
    let bad_outer = FunctionSpec::compose(FunctionSpec::weierstrass(0.5, 4).unwrap(), FunctionSpec::affine(1.0, 0.0));
    assert!(bad_outer.is_err());
    let constant_term = FunctionSpec::PolyComb {
        monomials: vec![(1.0, vec![0])],
        generators: vec![FunctionSpec::affine(1.0, 0.0)],
    };
    assert!(constant_term.validate().is_err());
}

#[test]
fn json_documents() {
    let w = FunctionSpec::from_json_str(r#"{"type":"weierstrass","a":0.5,"b":4,"eps":1e-12}"#, None).unwrap();
    assert_eq!(w, FunctionSpec::weierstrass(0.5, 4).unwrap());
    let docs = [
        r#"{"type":"monoholder","alpha":0.5,"n_max":6}"#,
        r#"{"type":"explike","terms":[[1.0,1.0]]}"#,
        r#"{"type":"affine","slope":1.0,"intercept":0.0}"#,
        r#"{"type":"compose","outer":{"type":"explike","terms":[[1.0,1.0]]},"inner":{"type":"weierstrass","a":0.5,"b":4}}"#,
        r#"{"type":"lincomb","terms":[[2.0,{"type":"affine","slope":1.0,"intercept":0.0}]]}"#,
        r#"{"type":"polycomb","monomials":[[1.0,[2]]],"generators":[{"type":"affine","slope":1.0,"intercept":0.0}]}"#,
    ];
    for d in docs {
        let s = FunctionSpec::from_json_str(d, None).unwrap();
        let again = FunctionSpec::from_json_str(&s.to_json(), None).unwrap();
        assert_eq!(s, again);
    }
    assert!(FunctionSpec::from_json_str(r#"{"type":"nope"}"#, None).is_err());
    assert!(FunctionSpec::from_json_str(r#"{"type":"weierstrass","a":0.2,"b":4}"#, None).is_err());
}

#[test]
fn schauder_spec_reads_coefficients_relative_to_the_document() {
    let dir = std::env::temp_dir().join(format!("zoo-schauder-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let c = SchauderCoefficients::new(vec![vec![1.0], vec![0.0, 0.5]], 0.25, 1.0).unwrap();
    c.write_csv(&dir.join("coeffs.csv")).unwrap();
    let path = dir.join("spec.json");
    std::fs::write(&path, r#"{"type":"schauder","file":"coeffs.csv"}"#).unwrap();
    let s = FunctionSpec::load(&path).unwrap();
    for x in [0.0, 0.3, 0.75, 1.0] {
        assert!(close(s.eval(x).unwrap(), c.reconstruct(x), 1e-15));
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn lineable_examples() {
    let mut levels: Vec<Vec<f64>> = (0..10).map(|j| vec![(-0.5 * j as f64).exp2(); 1 << j]).collect();
    levels[0][0] = 0.7;
    let base = SchauderCoefficients::new(levels, 1.0, -2.0).unwrap();
    let m = make_lineable_member(&base, 1.0).unwrap();
    assert_eq!(m.levels()[0], base.levels()[0]);
    assert!(close(m.levels()[9][3], (-4.5f64).exp2() / 10.0, 1e-17));
    assert_eq!((m.f0(), m.slope()), (1.0, -2.0));
    let z = make_lineable_member(&SchauderCoefficients::zeros(6, 0.0, 0.0), 2.0).unwrap();
    assert!(z.levels().iter().flatten().all(|&c| c == 0.0));
    assert!(make_lineable_member(&base, 0.0).is_err());
}

#[test]
fn weierstrass_seminorm_is_stable_under_refinement() {
    for (a, b) in [(0.5, 4), (0.7, 2), (0.3, 8)] {
        let w = WeierstrassSpec::new(a, b).unwrap();
        let s = FunctionSpec::Weierstrass(w);
        let h16 = holder_seminorm(&sample(&s, 16).unwrap(), w.alpha());
        let h20 = holder_seminorm(&sample(&s, 20).unwrap(), w.alpha());
        assert!(h16.is_finite() && h20 < 1.05 * h16, "W({a},{b}): {h16} -> {h20}");
    }
}

#[test]
fn composition_seminorm_bound() {
    let w = FunctionSpec::weierstrass(0.5, 4).unwrap();
    let graph = sample(&w, 14).unwrap();
    let (lo, hi) = graph
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let sw = holder_seminorm(&graph, 0.5);
    for g in [
        ExpLikeSpec::exp(1.0).unwrap(),
        ExpLikeSpec::new(vec![(1.0, 1.0), (-1.0, 2.0)]).unwrap(),
        ExpLikeSpec::new(vec![(2.0, 1.0), (3.0, -1.0)]).unwrap(),
    ] {
        let c = FunctionSpec::compose(FunctionSpec::ExpLike(g.clone()), w.clone()).unwrap();
        let sc = holder_seminorm(&sample(&c, 14).unwrap(), 0.5);
        let lip = sup_abs_derivative(&g, lo, hi).unwrap();
        assert!(sc <= lip * sw * (1.0 + 1e-9), "{sc} > {lip} * {sw}");
    }
}

#[test]
fn coefficients_of_lacunary_function_sit_on_its_levels() {
    let f = MonoHolderSpec::standard(0.5, 3).unwrap();
    let c = decompose(&sample(&FunctionSpec::MonoHolder(f), 12).unwrap());
    for (j, row) in c.levels().iter().enumerate() {
        let want = match j {
            0 => 1.0,
            10 => (-5.0f64).exp2(),
            _ => 0.0,
        };
        assert!(row.iter().all(|&v| close(v, want, 1e-15)), "level {j}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn truncation_certificate(a in 0.3f64..0.95, b in 2u32..9, eps_exp in 2i32..12, x in 0.0f64..1.0) {
        prop_assume!(a * f64::from(b) >= 1.0);
        let w = WeierstrassSpec::with_eps(a, b, 10f64.powi(-eps_exp)).unwrap();
        let k = w.truncation_index();
        let longer = w.partial_sum(x, 0, k + 10);
        prop_assert!((w.eval(x) - longer).abs() <= w.tail_bound() + 1e-13);
        prop_assert!(w.tail_bound() <= 10f64.powi(-eps_exp));
    }

    #[test]
    fn growth_conditions_hold(alpha in 0.05f64..0.95, power in 0.5f64..2.0, n_max in 1usize..6) {
        let f = MonoHolderSpec::new(alpha, n_max, power, None).unwrap();
        prop_assert!(f.conditions_hold());
        let js = f.j_seq();
        prop_assert_eq!(js[0], 0);
        let r = r_rule(power);
        for n in 1..js.len() {
            let (jn, prev) = (js[n] as f64, js[n - 1] as f64);
            let sum: f64 = js[..n].iter().map(|&l| ((1.0 - alpha) * l as f64).exp2()).sum();
            if jn < 900.0 {
                prop_assert!(sum < 0.5 * ((1.0 - alpha) * jn).exp2());
            }
            prop_assert!(alpha * jn >= alpha * prev + 5.0 - 1e-9);
            let rp = r(n - 1);
            prop_assert!(alpha * rp * jn > (1.0 - rp * (1.0 - alpha)) * prev + n as f64);
        }
    }

    #[test]
    fn lacunary_truncation_bound(x in 0.0f64..1.0, cap in 0u64..60) {
        let full = MonoHolderSpec::standard(0.5, 4).unwrap();
        let cut = full.clone().with_depth_cap(Some(cap));
        prop_assert!((full.eval(x) - cut.eval(x)).abs() <= cut.truncation_bound());
    }

    #[test]
    fn explike_derivative_matches_difference(a in -3.0f64..3.0, b in 0.1f64..2.0, x in -1.0f64..1.0) {
        let g = ExpLikeSpec::new(vec![(a.max(0.1), b), (1.0, -b * 0.5)]).unwrap();
        let h = 1e-6;
        let fd = (g.eval(x + h).unwrap() - g.eval(x - h).unwrap()) / (2.0 * h);
        prop_assert!((g.derivative().eval(x).unwrap() - fd).abs() <= 1e-6 * (1.0 + fd.abs()));
    }
}
