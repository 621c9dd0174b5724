mod common;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use svq::config::Configuration;
use svq::exactnum::{beta_j, binomial, incomplete_beta_ratio, int, multinomial, rat};
use svq::families::{
    c_area_hyperelliptic, c_area_principal_config, ekz_corrections, enumerate_principal, lsum_minus_hyperelliptic,
};
use svq::geometry::{
    partitions, qmax_dim_ratio, qmax_dim_ratio_exhaustive, ratio_area_gt_p, ratio_single_cyl_gt_p, QmaxInput,
};
use svq::strata::{HypComponentSpec, HypKind, QuadStratum};
use svq::svcore::{is_carea_shaped, sv_constants};
use svq::volumes::{vol_disconnected, VolumeDb};
use svq::{PiValue, Rational};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..30).prop_map(|(n, d)| rat(n, d))
}

fn pi_value() -> impl Strategy<Value = PiValue> {
    prop::collection::vec((small_rational(), -6i32..8), 0..4)
        .prop_map(|terms| terms.into_iter().map(|(c, e)| PiValue::monomial(c, e)).sum())
}

fn nonzero_monomial() -> impl Strategy<Value = PiValue> {
    ((1i64..40), (1i64..30), any::<bool>(), -6i32..8)
        .prop_map(|(n, d, neg, e)| PiValue::monomial(rat(if neg { -n } else { n }, d), e))
}

fn hyp_spec() -> impl Strategy<Value = HypComponentSpec> {
    let odd = (-1i32..5).prop_map(|j| if j < 0 { -1 } else { 2 * j + 1 });
    let even = (0i32..5).prop_map(|j| 2 * j);
    prop_oneof![
        (odd.clone(), odd.clone())
            .prop_filter_map("(-1,-1)", |(a, b)| HypComponentSpec::new(HypKind::Type1, a, b).ok()),
        (odd, even.clone()).prop_map(|(a, b)| HypComponentSpec::new(HypKind::Type2, a, b).unwrap()),
        (even.clone(), even).prop_map(|(a, b)| HypComponentSpec::new(HypKind::Type3, a, b).unwrap()),
    ]
}

fn admissible_principal() -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for k in 0..=8 {
        for l in 0..=k {
            if enumerate_principal(k, l).is_ok() {
                out.push((k, l));
            }
        }
    }
    out
}

/// Partition numbers by Euler's pentagonal recurrence.
fn partition_numbers(n_max: usize) -> Vec<u64> {
    let mut p = vec![0i64; n_max + 1];
    p[0] = 1;
    for n in 1..=n_max {
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > n {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            p[n] += sign * p[n - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= n {
                p[n] += sign * p[n - g2];
            }
            k += 1;
        }
    }
    p.into_iter().map(|x| x as u64).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pi_values_form_a_commutative_ring(a in pi_value(), b in pi_value(), c in pi_value()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &PiValue::one(), a.clone());
    }

    #[test]
    fn monomial_division_undoes_multiplication(a in pi_value(), m in nonzero_monomial()) {
        prop_assert_eq!((&a * &m).checked_div(&m).unwrap(), a);
    }

    #[test]
    fn division_by_a_polynomial_is_rejected(a in pi_value(), m in nonzero_monomial(), n in nonzero_monomial()) {
        let sum = &m + &n;
        prop_assume!(sum.len() == 2);
        prop_assert!(a.checked_div(&sum).is_err());
    }

    #[test]
    fn pi_value_text_round_trips(a in pi_value()) {
        let back: PiValue = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn pi_value_float_matches_terms(a in pi_value()) {
        let direct: f64 = a.terms().map(|(e, c)| svq::exactnum::rational_to_f64(c) * std::f64::consts::PI.powi(e)).sum();
        prop_assert!((a.to_f64() - direct).abs() <= 1e-9 * direct.abs().max(1.0));
    }

    #[test]
    fn beta_j_recurrence(a in 0u32..20, q in 1u32..20) {
        prop_assert_eq!(beta_j(a, q), rat(q as i64, a as i64 + 1) * beta_j(a + 1, q - 1));
    }

    #[test]
    fn beta_j_base_case(a in 0u32..30) {
        prop_assert_eq!(beta_j(a, 0), rat(1, 2 * (a as i64 + 1)));
    }

    #[test]
    fn incomplete_beta_ratio_decreases(n in 1u32..8, q in 1u32..8, a in 0i64..50, b in 0i64..50) {
        prop_assume!(a != b);
        let (lo, hi) = (rat(a.min(b), 50), rat(a.max(b), 50));
        let r_lo = incomplete_beta_ratio(&lo, n, q).unwrap();
        let r_hi = incomplete_beta_ratio(&hi, n, q).unwrap();
        prop_assert!(r_lo > r_hi);
        prop_assert!(r_hi >= Rational::zero() && r_lo <= Rational::one());
    }

    #[test]
    fn incomplete_beta_rejects_outside_unit_interval(n in 1u32..8, q in 1u32..8, a in 1i64..20) {
        prop_assert!(incomplete_beta_ratio(&rat(-a, 7), n, q).is_err());
        prop_assert!(incomplete_beta_ratio(&rat(a + 7, 7), n, q).is_err());
    }

    #[test]
    fn multinomial_is_a_product_of_binomials(parts in prop::collection::vec(0u32..6, 1..5)) {
        let top: u32 = parts.iter().sum();
        let mut remaining = top;
        let mut prod = BigInt::one();
        for &p in &parts {
            prod *= binomial(remaining, p);
            remaining -= p;
        }
        prop_assert_eq!(multinomial(top, &parts).unwrap(), prod);
        prop_assert!(multinomial(top + 1, &parts).is_err());
    }

    #[test]
    fn order_sum_is_four_g_minus_four(orders in prop::collection::vec(-1i32..9, 1..9)) {
        if let Ok(s) = QuadStratum::new(orders.clone()) {
            prop_assert_eq!(s.order_sum(), 4 * s.genus() as i64 - 4);
            prop_assert_eq!(s.dim_c() as i64, 2 * s.genus() as i64 - 2 + s.n() as i64);
            let mut shuffled = orders;
            shuffled.reverse();
            prop_assert_eq!(QuadStratum::new(shuffled).unwrap(), s);
        } else {
            let sum: i32 = orders.iter().sum();
            prop_assert!(sum % 4 != 0 || sum < -4 || orders.contains(&0));
        }
    }

    #[test]
    fn principal_dimension(k in 0u32..=12, l in 0u32..=16) {
        if let Ok(s) = QuadStratum::principal(k, l) {
            if !s.is_empty() {
                prop_assert_eq!(2 * s.dim_c(), 3 * k + l);
            }
        }
    }

    #[test]
    fn hyperelliptic_classification_round_trips(spec in hyp_spec(), rot in 0usize..4) {
        let s = spec.signature();
        prop_assert_eq!(s.dim_c(), spec.dim());
        prop_assert_eq!(spec.dim() as i32, spec.k1 + spec.k2 + 4);
        let mut orders = s.orders().to_vec();
        let len = orders.len();
        orders.rotate_left(rot % len);
        let class = QuadStratum::new(orders).unwrap().classify_hyperelliptic().unwrap();
        prop_assert_eq!(class.spec, spec);
    }

    #[test]
    fn hyperelliptic_spec_is_canonical(spec in hyp_spec()) {
        let swapped = HypComponentSpec::new(spec.kind, spec.k2, spec.k1);
        if spec.kind != HypKind::Type2 {
            prop_assert_eq!(swapped.unwrap(), spec);
        }
    }

    #[test]
    fn hyperelliptic_c_area_shape(spec in hyp_spec()) {
        let c = c_area_hyperelliptic(&spec).expect_degree(-2).unwrap();
        let (k1, k2) = (spec.k1 as i64, spec.k2 as i64);
        prop_assert_eq!(c * rat(4, k1 + k2 + 4), int(2) + rat(1, (k1 + 2) * (k2 + 2)));
    }

    #[test]
    fn disconnected_volume_is_symmetric(
        comps in prop::collection::vec((nonzero_monomial(), 1u32..7), 1..4),
        rot in 0usize..4,
    ) {
        let mut rotated = comps.clone();
        rotated.rotate_left(rot % comps.len());
        prop_assert_eq!(vol_disconnected(&comps).unwrap(), vol_disconnected(&rotated).unwrap());
    }

    #[test]
    fn disconnected_volume_of_one_component_is_itself(v in nonzero_monomial(), d in 1u32..10) {
        prop_assert_eq!(vol_disconnected(&[(v.clone(), d)]).unwrap(), v);
    }

    #[test]
    fn greedy_matches_subset_search(
        l in prop::collection::vec(0u32..4, 0..5),
        kv in prop::collection::vec(0u32..4, 0..5),
        odd in prop::collection::vec(prop::sample::select(vec![1u32, 3, 5, 7]), 0..4),
        k in 0u32..24,
    ) {
        let input = QmaxInput { l_values: l, k_values: kv, odd_orders: odd, k };
        prop_assert_eq!(input.greedy(), input.subset_search());
    }

    #[test]
    fn single_cylinder_ratio_decreases(d in 3u32..12, a in 0i64..40, b in 0i64..40) {
        prop_assume!(a < b);
        let lo = ratio_single_cyl_gt_p(d, &rat(a, 40)).unwrap();
        let hi = ratio_single_cyl_gt_p(d, &rat(b, 40)).unwrap();
        prop_assert!(lo > hi);
    }

    #[test]
    fn area_ratio_decreases(n_s in 1u32..8, q in 1u32..8, a in 0i64..40, b in 0i64..40) {
        prop_assume!(a < b);
        let lo = ratio_area_gt_p(n_s, q, &rat(a, 40)).unwrap();
        let hi = ratio_area_gt_p(n_s, q, &rat(b, 40)).unwrap();
        prop_assert!(lo > hi);
    }

    #[test]
    fn constants_scale_with_surgery_factor(seed in 0u64..1000, pick in 0usize..64, factor in 1i64..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let strata = common::principal_strata(8);
        let db = common::synthetic_db(&mut rng, &strata);
        let pairs = admissible_principal();
        let (k, l) = pairs[pick % pairs.len()];
        let configs = enumerate_principal(k, l).unwrap();
        let cfg = configs[pick % configs.len()].to_configuration().unwrap();
        let base = sv_constants(&cfg, &db).unwrap();
        let scaled = rebuild_with_m_s(&cfg, base.m_s.clone() * int(factor));
        let r = sv_constants(&scaled, &db).unwrap();
        prop_assert_eq!(r.c, base.c.scale(&int(factor)));
        prop_assert_eq!(&r.m, &(&r.m_s * Rational::from_integer(r.m_c.clone()) / Rational::from_integer(r.m_t.clone())));
    }

    #[test]
    fn route_equivalence_on_random_volumes(seed in 0u64..1000, pick in 0usize..64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let strata = common::principal_strata(10);
        let db = common::synthetic_db(&mut rng, &strata);
        let pairs = admissible_principal();
        let (k, l) = pairs[pick % pairs.len()];
        for cfg in enumerate_principal(k, l).unwrap() {
            let closed = c_area_principal_config(&cfg, &db).unwrap();
            let generic = sv_constants(&cfg.to_configuration().unwrap(), &db).unwrap();
            prop_assert_eq!(generic.c_area, closed);
        }
    }

    #[test]
    fn generic_ratios_hold(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let strata = common::principal_strata(6);
        let db = common::synthetic_db(&mut rng, &strata);
        let cfg = common::random_configuration(&mut rng, &strata);
        let r = sv_constants(&cfg, &db).unwrap();
        let d = cfg.ambient().dim_c() as i64;
        prop_assert_eq!(r.c_area.scale(&int(d - 1)), r.c_cyl.clone());
        prop_assert_eq!(r.c_cyl.scale(&int(4)), r.c.scale(&int(4 * cfg.q1() as i64 + cfg.q2() as i64)));
    }

    #[test]
    fn configuration_json_round_trips(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let strata = common::principal_strata(6);
        let cfg = common::random_configuration(&mut rng, &strata);
        prop_assert_eq!(Configuration::from_json(&cfg.to_json()).unwrap(), cfg);
    }
}

fn rebuild_with_m_s(cfg: &Configuration, m_s: Rational) -> Configuration {
    let mut raw: serde_json::Value = serde_json::from_str(&cfg.to_json()).unwrap();
    raw["M_s"] = serde_json::Value::String(svq::exactnum::format_rational(&m_s));
    Configuration::from_json(&raw.to_string()).unwrap()
}

#[test]
fn labeling_counts_are_half_integers() {
    for (k, l) in admissible_principal() {
        for cfg in enumerate_principal(k, l).unwrap() {
            let n = cfg.to_configuration().unwrap().count_labelings().unwrap();
            let twice = n * int(2);
            assert!(twice.is_integer() && twice > Rational::zero(), "{} in Q(1^{k},-1^{l})", cfg.family);
        }
    }
}

#[test]
fn principal_constants_have_pi_degree_minus_two() {
    let db = VolumeDb::builtin();
    for (k, l) in admissible_principal() {
        for cfg in enumerate_principal(k, l).unwrap() {
            if let Ok(c) = c_area_principal_config(&cfg, db) {
                assert!(is_carea_shaped(&c), "{} in Q(1^{k},-1^{l}): {c}", cfg.family);
            }
        }
    }
}

#[test]
fn partition_counts_match_pentagonal_recurrence() {
    let p = partition_numbers(30);
    for n in 0..=30u32 {
        let parts = partitions(n).unwrap();
        assert_eq!(parts.len() as u64, p[n as usize], "p({n})");
        assert!(parts.iter().all(|x| x.iter().sum::<u32>() == n && x.windows(2).all(|w| w[0] >= w[1])));
    }
    assert!(partitions(41).is_err());
}

#[test]
fn dim_ratio_family_attains_the_exhaustive_maximum() {
    for g in 1..=5 {
        for k in 0..=10 {
            if g == 1 && k == 0 {
                continue;
            }
            let family = qmax_dim_ratio(g, k).unwrap();
            let exhaustive = qmax_dim_ratio_exhaustive(g, k).unwrap();
            assert!(family <= exhaustive, "g={g}, k={k}");
        }
    }
}

fn bridge_holds(spec: &HypComponentSpec) -> (Rational, Rational) {
    let s = spec.signature();
    let (i, k) = ekz_corrections(&s);
    let c = c_area_hyperelliptic(spec).expect_degree(-2).unwrap();
    (lsum_minus_hyperelliptic(spec), c / int(3) + i + k)
}

fn bridge_specs(kind: HypKind) -> Vec<HypComponentSpec> {
    let mut out = Vec::new();
    for k1 in -1..=9 {
        for k2 in -1..=k1.max(9) {
            if let Ok(s) = HypComponentSpec::new(kind, k1, k2) {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
    }
    out
}

#[test]
fn lyapunov_bridge_type1() {
    for spec in bridge_specs(HypKind::Type1) {
        let (closed, bridge) = bridge_holds(&spec);
        assert_eq!(closed, bridge, "{:?}", spec);
    }
}

#[test]
fn lyapunov_bridge_type3() {
    for spec in bridge_specs(HypKind::Type3) {
        let (closed, bridge) = bridge_holds(&spec);
        assert_eq!(closed, bridge, "{:?}", spec);
    }
}

#[test]
fn lyapunov_bridge_type2() {
    let mut bad = Vec::new();
    for spec in bridge_specs(HypKind::Type2) {
        let (closed, bridge) = bridge_holds(&spec);
        if closed != bridge {
            bad.push(format!("{}: closed {closed}, bridge {bridge}", spec.signature()));
        }
    }
    assert!(bad.is_empty(), "{} of {} disagree, e.g. {}", bad.len(), bridge_specs(HypKind::Type2).len(), bad[0]);
}

#[test]
fn lyapunov_sum_bounded_by_effective_genus() {
    for kind in [HypKind::Type1, HypKind::Type2, HypKind::Type3] {
        for spec in bridge_specs(kind) {
            let s = spec.signature();
            let l = lsum_minus_hyperelliptic(&spec);
            assert!(l <= int(s.effective_genus() as i64), "{s}: {l} > g_eff {}", s.effective_genus());
        }
    }
}
