use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use forest_kernel::corpus::random_case;
use forest_kernel::count::{closed_form_count, CountQuery};
use forest_kernel::enumerate::{enumerate_forests, verify_identity};
use forest_kernel::kernel::{q_count, q_eval, q_eval_by_enumeration, PivotRule, QOptions};
use forest_kernel::model::{
    forest_weight, is_valid_forest, Configuration, EdgeKernel, ExplicitTable, Forest, KernelValue, Point,
    DEFAULT_REL_TOL,
};

/// Every self-loop-free parent map, checked with `is_valid_forest` rather than
/// the enumerator's internal filter.
fn census(m: usize, n: usize) -> u64 {
    let c = Configuration::anonymous(m, n);
    let total = m + n;
    if n == 0 {
        return u64::from(is_valid_forest(&Forest::empty(), &c).unwrap());
    }
    let mut parents = vec![0usize; n];
    let mut accepted = 0;
    'outer: loop {
        let self_loop = parents.iter().enumerate().any(|(i, &p)| p == m + i);
        if !self_loop && is_valid_forest(&Forest::from_parents(&parents).unwrap(), &c).unwrap() {
            accepted += 1;
        }
        for i in (0..n).rev() {
            parents[i] += 1;
            if parents[i] < total {
                continue 'outer;
            }
            parents[i] = 0;
        }
        return accepted;
    }
}

#[test]
fn validity_census_matches_closed_form() {
    for total in 1..=7 {
        for m in 1..=total {
            let n = total - m;
            let expected: u64 = closed_form_count(CountQuery::new(m, n)).try_into().unwrap();
            assert_eq!(census(m, n), expected, "m={m} n={n}");
        }
    }
}

#[test]
fn q_count_matches_closed_form_to_sixty() {
    for total in 0usize..=60 {
        for m in 1..=total.max(1) {
            let n = total.saturating_sub(m);
            assert_eq!(q_count(m, n), closed_form_count(CountQuery::new(m, n)), "m={m} n={n}");
        }
    }
    assert_eq!(q_count(0, 0), BigUint::from(1u8));
}

#[test]
fn exponential_line_float_mode() {
    // weights of the three forests on x1@0, y1@1, y2@2 with ν = e^{-dist}:
    // y1->x1, y2->x1: e^{-1} e^{-2};  y1->x1, y2->y1: e^{-1} e^{-1};  y2->x1, y1->y2: e^{-2} e^{-1}
    let c = Configuration::new(
        vec![Point::at("x1", vec![0.0])],
        vec![Point::at("y1", vec![1.0]), Point::at("y2", vec![2.0])],
    )
    .unwrap();
    let nu = EdgeKernel::Exponential { alpha: 1.0 };
    let e = std::f64::consts::E;
    let expected = e.powi(-3) + e.powi(-2) + e.powi(-3);
    let by_enum = q_eval_by_enumeration(&c, &KernelValue::one(), &nu).unwrap();
    let rec = q_eval(&c, &KernelValue::one(), &nu, &QOptions::default()).unwrap().value;
    assert!(by_enum.approx_eq(&KernelValue::Float(expected), DEFAULT_REL_TOL));
    assert!(rec.approx_eq(&KernelValue::Float(expected), DEFAULT_REL_TOL));
    assert!((rec.to_f64() - 0.234909).abs() < 1e-6);
}

fn seeded(seed: u64, max_total: usize) -> forest_kernel::corpus::RandomCase {
    random_case(&mut ChaCha8Rng::seed_from_u64(seed), max_total)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unit_weights_are_one(m in 1usize..4, n in 0usize..4) {
        let c = Configuration::anonymous(m, n);
        for f in enumerate_forests(&c).unwrap().iter() {
            prop_assert_eq!(forest_weight(f, &c, &KernelValue::one(), &EdgeKernel::unit()).unwrap(), KernelValue::one());
        }
    }

    #[test]
    fn weight_is_invariant_under_relabeling(seed in any::<u64>(), shift in 1usize..50) {
        let case = seeded(seed, 6);
        let c = &case.configuration;
        let rename = |l: &str| format!("q{}", l.trim_start_matches('p').parse::<usize>().unwrap() + shift);
        let relabel = |ps: &[Point]| ps.iter().map(|p| Point::new(rename(&p.label))).collect::<Vec<_>>();
        let c2 = Configuration::new(relabel(c.roots()), relabel(c.vertices())).unwrap();
        let EdgeKernel::Explicit(table) = &case.kernel else { unreachable!() };
        let k2 = EdgeKernel::Explicit(table.relabeled(rename));
        for f in enumerate_forests(c).unwrap().iter() {
            let map: BTreeMap<String, String> = f
                .to_parent_map(c)
                .into_iter()
                .map(|(a, b)| (rename(&a), rename(&b)))
                .collect();
            let f2 = Forest::from_parent_map(&c2, &map).unwrap();
            prop_assert_eq!(
                forest_weight(f, c, &case.h, &case.kernel).unwrap(),
                forest_weight(&f2, &c2, &case.h, &k2).unwrap()
            );
        }
    }

    #[test]
    fn recursion_matches_enumeration(seed in any::<u64>()) {
        let case = seeded(seed, 7);
        let rec = q_eval(&case.configuration, &case.h, &case.kernel, &QOptions::default()).unwrap();
        let enu = q_eval_by_enumeration(&case.configuration, &case.h, &case.kernel).unwrap();
        prop_assert_eq!(rec.value, enu);
        prop_assert!(rec.states <= 3usize.pow(case.configuration.len() as u32));
    }

    #[test]
    fn memo_rederivation_agrees(seed in any::<u64>()) {
        let case = seeded(seed, 7);
        for root in case.configuration.roots() {
            let opts = QOptions { pivot: PivotRule::Given(root.label.clone()), verify: true, ..QOptions::default() };
            prop_assert!(q_eval(&case.configuration, &case.h, &case.kernel, &opts).is_ok());
        }
    }

    #[test]
    fn identity_for_every_pivot(seed in any::<u64>()) {
        let case = seeded(seed, 6);
        for root in case.configuration.roots() {
            let r = verify_identity(&case.configuration, &root.label, &case.kernel).unwrap();
            prop_assert!(r.holds, "{} vs {}", r.lhs, r.rhs);
        }
    }

    #[test]
    fn float_mode_tracks_exact(seed in any::<u64>()) {
        let case = seeded(seed, 6);
        let exact = q_eval(&case.configuration, &case.h, &case.kernel, &QOptions::default()).unwrap().value;
        let opts = QOptions { mode: Some(forest_kernel::model::NumericMode::Float), ..QOptions::default() };
        let float = q_eval(&case.configuration, &case.h, &case.kernel, &opts).unwrap().value;
        prop_assert!(!float.is_exact());
        let (a, b) = (exact.to_f64(), float.to_f64());
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn scaling_in_h(seed in any::<u64>(), p in -5i64..6, q in 1i64..5) {
        let case = seeded(seed, 6);
        let h = KernelValue::Exact(BigRational::new(BigInt::from(p), BigInt::from(q)));
        let c = &case.configuration;
        let scaled = q_eval(c, &h, &case.kernel, &QOptions::default()).unwrap().value;
        let unit = q_eval(c, &KernelValue::one(), &case.kernel, &QOptions::default()).unwrap().value;
        prop_assert_eq!(scaled, h.pow(c.len() as u32).mul(&unit));
    }
}

#[test]
fn negative_kernel_values_are_allowed() {
    let c = Configuration::from_labels(&["a"], &["b", "c"]).unwrap();
    let t = ExplicitTable::new()
        .with("a", "b", KernelValue::integer(-1))
        .unwrap()
        .with("a", "c", KernelValue::integer(2))
        .unwrap()
        .with("b", "c", KernelValue::ratio(-1, 3))
        .unwrap();
    let nu = EdgeKernel::Explicit(t);
    // forests: {b->a, c->a} = -2, {b->a, c->b} = 1/3, {c->a, b->c} = -2/3
    let expected = KernelValue::ratio(-7, 3);
    assert_eq!(q_eval_by_enumeration(&c, &KernelValue::one(), &nu).unwrap(), expected);
    assert_eq!(
        q_eval(&c, &KernelValue::one(), &nu, &QOptions::default()).unwrap().value,
        expected
    );
}
