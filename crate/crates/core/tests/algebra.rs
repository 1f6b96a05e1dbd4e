use monsterlab::algebra::{
    check_free_independence, count_level_hits, exceptional_columns, find_integer_relation, level_hits,
    level_set_width_probe, make_generators, monomials, prime_root_rates, verify_dimension_invariance, DegreeMode,
    GeneratorSet, INDEPENDENCE_THRESHOLD,
};
use monsterlab::dimension::{sample, SampledGraph};
use monsterlab::zoo::{ExpLikeSpec, FunctionSpec, MonoHolderSpec};
use proptest::prelude::*;

fn w() -> FunctionSpec {
    FunctionSpec::weierstrass(0.5, 4).unwrap()
}

#[test]
fn generator_examples() {
    assert_eq!(make_generators(&w(), 1).unwrap().rates, vec![2f64.sqrt()]);
    let g = make_generators(&w(), 3).unwrap();
    assert_eq!(g.rates, vec![2f64.sqrt(), 3f64.sqrt(), 5f64.sqrt()]);
    assert!(find_integer_relation(&g.rates, 10, 4).is_none());
    assert!(find_integer_relation(&prime_root_rates(16), 10, 3).is_none());
    // Rescaling by exp(-r max W) keeps the generator proportional to exp(r W).
    for x in [0.1, 0.37, 0.8] {
        let want = (g.rates[1] * (w().eval(x).unwrap() - g.shift)).exp();
        assert!((g.generators[1].eval(x).unwrap() - want).abs() <= 1e-14);
    }
    let json: serde_json::Value = serde_json::from_str(&g.to_json()).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 3);
    assert_eq!(json[0]["type"], "compose");
}

#[test]
fn independence_examples() {
    let r = check_free_independence(&make_generators(&w(), 3).unwrap(), 2, 512, DegreeMode::Total).unwrap();
    assert!(r.independent, "{r:?}");
    assert_eq!(r.monomial_count, 9);
    assert_eq!(r.threshold, INDEPENDENCE_THRESHOLD);

    let constant = make_generators(&FunctionSpec::constant(0.0), 3).unwrap();
    let r = check_free_independence(&constant, 2, 512, DegreeMode::Total).unwrap();
    assert!(!r.independent);
    assert_eq!(r.min_singular_value, 0.0);

    let one = check_free_independence(&make_generators(&w(), 1).unwrap(), 1, 64, DegreeMode::Total).unwrap();
    assert!(one.independent);
    let one_constant = check_free_independence(&make_generators(&FunctionSpec::constant(2.0), 1).unwrap(), 1, 64, DegreeMode::Total).unwrap();
    assert!(!one_constant.independent);

    assert!(check_free_independence(&make_generators(&w(), 3).unwrap(), 2, 8, DegreeMode::Total).is_err());
}

#[test]
fn independence_soundness_with_repeated_rates() {
    let rates = vec![2f64.sqrt(), 3f64.sqrt(), 2f64.sqrt()];
    assert!(find_integer_relation(&rates, 10, 4).is_some());
    let g = GeneratorSet::with_rates(w(), rates).unwrap();
    let r = check_free_independence(&g, 2, 512, DegreeMode::Total).unwrap();
    assert!(!r.independent);
    assert!(r.min_singular_value < 1e-12);
    // An integer relation r_3 = r_1 + r_2 makes g_3 = g_1 g_2 (up to scale).
    let s = vec![2f64.sqrt(), 3f64.sqrt(), 2f64.sqrt() + 3f64.sqrt()];
    let r = check_free_independence(&GeneratorSet::with_rates(w(), s).unwrap(), 2, 512, DegreeMode::Total).unwrap();
    assert!(!r.independent);
}

#[test]
fn degree_modes() {
    assert_eq!(monomials(3, 2, DegreeMode::Total).len(), 9);
    assert_eq!(monomials(3, 2, DegreeMode::MaxPerVariable).len(), 26);
    let many = make_generators(&w(), 6).unwrap();
    assert!(check_free_independence(&many, 6, 4096, DegreeMode::MaxPerVariable).is_err());
}

#[test]
fn level_hit_examples() {
    let g = ExpLikeSpec::new(vec![(1.0, 1.0), (-1.0, 2.0)]).unwrap();
    let roots = level_hits(&g, 0.0, (-5.0, 5.0), 1024).unwrap();
    assert_eq!(roots.len(), 1);
    assert!(roots[0].abs() <= 1e-12);
    assert_eq!(count_level_hits(&ExpLikeSpec::exp(1.0).unwrap(), 0.0, (-5.0, 5.0), 1024).unwrap(), 0);
}

#[test]
fn invariance_examples() {
    for g in [ExpLikeSpec::exp(1.0).unwrap(), ExpLikeSpec::new(vec![(1.0, 1.0), (-1.0, 2.0)]).unwrap()] {
        let (base, composed) = verify_dimension_invariance(&g, &w(), 20, (6, 16)).unwrap();
        assert!((1.45..=1.55).contains(&base.dim_hat));
        assert!((1.45..=1.55).contains(&composed.dim_hat), "{}", composed.dim_hat);
    }
    let (base, composed) =
        verify_dimension_invariance(&ExpLikeSpec::exp(1.0).unwrap(), &FunctionSpec::affine(1.0, 0.0), 16, (6, 12)).unwrap();
    assert_eq!((base.dim_hat, composed.dim_hat), (1.0, 1.0));
}

#[test]
fn level_set_width_examples() {
    let f = MonoHolderSpec::standard(0.5, 4).unwrap();
    let graph = sample(&FunctionSpec::MonoHolder(f.clone()), 18).unwrap();
    assert!(level_set_width_probe(&graph, 5.0, &f).is_empty());

    let widths = level_set_width_probe(&graph, f.eval(0.5), &f);
    assert!(widths.len() >= 4);
    for lw in widths.iter().filter(|lw| lw.n <= 3) {
        assert!(lw.within_bound, "{lw:?}");
        assert_eq!(lw.cell_level, f.j_seq()[lw.n] + 1);
    }
    // The bound collapses superexponentially in n, and the measured widths follow.
    assert!(widths[1].bound < 1e-3 * widths[0].bound);
    assert!(widths[1].max_component_width <= widths[0].max_component_width);

    // A constant function has the whole interval as a level set.
    let flat = SampledGraph::from_fn(18, "flat", |_| 0.25);
    let w = level_set_width_probe(&flat, 0.25, &f);
    assert!(w.iter().any(|lw| !lw.within_bound));
}

#[test]
fn exceptional_set_of_composition() {
    // g = e^x + e^-x has g' = 0 only at 0, which W(0.5, 4) crosses.
    let g = ExpLikeSpec::new(vec![(1.0, 1.0), (1.0, -1.0)]).unwrap();
    let graph = sample(&w(), 12).unwrap();
    let e = exceptional_columns(&g, &graph).unwrap();
    assert_eq!(e.critical_values.len(), 1);
    assert!(e.critical_values[0].abs() < 1e-12);
    assert!(!e.columns.is_empty());
    let none = exceptional_columns(&ExpLikeSpec::exp(1.0).unwrap(), &graph).unwrap();
    assert!(none.critical_values.is_empty() && none.columns.is_empty());
}

fn explike(m: usize) -> impl Strategy<Value = ExpLikeSpec> {
    prop::collection::vec((0.1f64..3.0, prop::bool::ANY, 0.1f64..3.0, prop::bool::ANY), m)
        .prop_filter_map("distinct rates", |terms| {
            let terms: Vec<(f64, f64)> = terms
                .into_iter()
                .map(|(a, sa, b, sb)| (if sa { a } else { -a }, if sb { b } else { -b }))
                .collect();
            let distinct = terms
                .iter()
                .enumerate()
                .all(|(i, t)| terms[..i].iter().all(|u| (u.1 - t.1).abs() > 1e-3));
            if distinct {
                ExpLikeSpec::new(terms).ok()
            } else {
                None
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn level_count_bound(g in (1usize..=4).prop_flat_map(explike), x in -2.0f64..2.0, shift in -0.5f64..0.5) {
        let c = g.eval(x).unwrap() + shift;
        prop_assert!(count_level_hits(&g, c, (-3.0, 3.0), 4096).unwrap() <= g.range());
    }

    #[test]
    fn monotone_pieces(g in (1usize..=4).prop_flat_map(explike), lo in -3.0f64..0.0, len in 0.5f64..3.0) {
        let d = g.derivative();
        let sign_changes = level_hits(&d, 0.0, (lo, lo + len), 4096).unwrap().len();
        prop_assert!(sign_changes < g.range());
    }
}
