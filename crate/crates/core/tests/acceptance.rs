//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line and
//! asserts the criterion at its stated tolerance (all exact) and time budget.
//!
//! Run with `cargo test -p forest-kernel --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use forest_kernel::corpus::{corpus, RandomCase};
use forest_kernel::count::{
    closed_form_count, count_recursion_table, induction_step_check, CountQuery,
};
use forest_kernel::enumerate::{brute_force_count_with, verify_identity_with};
use forest_kernel::kernel::{q_count, q_eval, q_eval_by_enumeration_with, PivotRule, QOptions};
use forest_kernel::model::{Configuration, EdgeKernel, ExplicitTable, KernelValue};

const ENUM_LIMIT: usize = 9;
const KERNEL_LIMIT: usize = 14;
const CORPUS_SEED: u64 = 20_240_601;
const CORPUS_SIZE: usize = 240;
const CORPUS_MAX_TOTAL: usize = 7;

fn report(id: u32, name: &str, ok: bool, detail: &str, elapsed: Duration) {
    println!(
        "[{}] criterion {id}: {name} ({detail}; {:.2}s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
}

fn opts(pivot: PivotRule) -> QOptions {
    QOptions {
        pivot,
        limit: KERNEL_LIMIT,
        ..QOptions::default()
    }
}

fn the_corpus() -> Vec<RandomCase> {
    corpus(CORPUS_SEED, CORPUS_SIZE, CORPUS_MAX_TOTAL)
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn brute(m: usize, n: usize) -> BigUint {
    brute_force_count_with(&Configuration::anonymous(m, n), ENUM_LIMIT).unwrap()
}

#[test]
fn criterion_1_counting_formula() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut cases = 0;
    for total in 1..=8 {
        for m in 1..=total {
            let n = total - m;
            cases += 1;
            // m (n+m)^{n-1}, written out independently of closed_form_count
            let expected = if n == 0 {
                big(1)
            } else {
                big(m as u64) * num_traits::pow(big((n + m) as u64), n - 1)
            };
            let got = brute(m, n);
            if got != expected || closed_form_count(CountQuery::new(m, n)) != expected {
                failures.push(format!("N({m}|{n}): brute {got} vs {expected}"));
            }
        }
    }
    let spots = [((1, 3), 16u64), ((2, 2), 8), ((2, 4), 432), ((3, 3), 108)];
    for ((m, n), v) in spots {
        if brute(m, n) != big(v) {
            failures.push(format!("spot N({m}|{n}) != {v}"));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(60);
    report(1, "brute force count equals m(n+m)^(n-1), m+n <= 8", ok, &format!("{cases} sizes, {failures:?}"), elapsed);
    assert!(ok, "{failures:?} in {elapsed:?}");
}

#[test]
fn criterion_2_cayley() {
    let start = Instant::now();
    let expected = [1u64, 3, 16, 125, 1296, 16807];
    let mut failures = Vec::new();
    for (i, &want) in expected.iter().enumerate() {
        let vertices = i + 2;
        let formula = num_traits::pow(big(vertices as u64), vertices - 2);
        let got = brute(1, vertices - 1);
        if got != big(want) || formula != big(want) {
            failures.push(format!("N={vertices}: {got} vs {want}"));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(60);
    report(2, "labeled trees N^(N-2) for N = 2..7", ok, &format!("{failures:?}"), elapsed);
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_3_recursion_equals_forest_sum() {
    let start = Instant::now();
    let cases = the_corpus();
    assert!(cases.len() >= 200);
    let mut failures = Vec::new();
    for (i, case) in cases.iter().enumerate() {
        assert!(case.configuration.len() <= 7);
        let rec = q_eval(&case.configuration, &case.h, &case.kernel, &opts(PivotRule::First)).unwrap();
        let enu = q_eval_by_enumeration_with(&case.configuration, &case.h, &case.kernel, ENUM_LIMIT).unwrap();
        assert!(rec.value.is_exact() && enu.is_exact());
        if rec.value != enu {
            failures.push(format!("case {i}: {} vs {}", rec.value, enu));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(120);
    report(3, "q_eval == sum of forest weights", ok, &format!("{} cases, {failures:?}", cases.len()), elapsed);
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_4_peeling_identity() {
    let start = Instant::now();
    let cases = the_corpus();
    let mut checks = 0;
    let mut failures = Vec::new();
    for (i, case) in cases.iter().enumerate() {
        for root in case.configuration.roots() {
            checks += 1;
            let r = verify_identity_with(&case.configuration, &root.label, &case.kernel, ENUM_LIMIT).unwrap();
            if !r.holds || r.lhs != r.rhs {
                failures.push(format!("case {i} pivot {}: {} vs {}", root.label, r.lhs, r.rhs));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty();
    report(4, "identity holds for every pivot", ok, &format!("{checks} pivots, {failures:?}"), elapsed);
    assert!(ok, "{failures:?}");
}

#[test]
#[allow(clippy::needless_range_loop)]
fn criterion_5_count_recursion() {
    let start = Instant::now();
    let table = count_recursion_table(30, 30);
    let mut failures = Vec::new();
    for m in 1..=30 {
        for n in 0..=30 {
            let closed = closed_form_count(CountQuery::new(m, n));
            if table[n][m] != closed || q_count(m, n) != closed {
                failures.push((m, n));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(10);
    report(5, "recursion == closed form == q_count, 1<=m<=30, 0<=n<=30", ok, &format!("{failures:?}"), elapsed);
    assert!(ok, "{failures:?} in {elapsed:?}");
}

#[test]
fn criterion_6_induction_algebra() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for m in 1..=20usize {
        for n in 1..=20usize {
            let s = induction_step_check(m, n).unwrap();
            // m (m+n)^{n-1} as an integer, independent of the rational path
            let target = BigUint::from(m) * num_traits::pow(BigUint::from(m + n), n - 1);
            let sum: BigRational = s.sum.parse().unwrap();
            let m1: BigRational = s.m1.parse().unwrap();
            let m2: BigRational = s.m2.parse().unwrap();
            let target = BigRational::from_integer(BigInt::from(target));
            if !s.holds || sum != target || &m1 + &m2 != target {
                failures.push((m, n));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(5);
    report(6, "S = M1 + M2 = m(m+n)^(n-1), 1<=m,n<=20", ok, &format!("{failures:?}"), elapsed);
    assert!(ok, "{failures:?} in {elapsed:?}");
}

#[test]
fn criterion_7_boundary_conditions() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checks = 0;
    for (i, case) in the_corpus().iter().enumerate() {
        let c = &case.configuration;
        let q = |cfg: &Configuration| q_eval(cfg, &case.h, &case.kernel, &opts(PivotRule::First)).unwrap().value;
        let all: Vec<usize> = (0..c.len()).collect();
        let mut overlapping = c.vertices().to_vec();
        overlapping.push(c.roots()[c.m() - 1].clone());
        let overlap = Configuration::new(c.roots().to_vec(), overlapping).unwrap();
        checks += 3;
        if q(&c.restrict(&[], &[])) != KernelValue::one() {
            failures.push(format!("case {i}: Q(empty|empty)"));
        }
        if q(&c.restrict(&[], &all)) != KernelValue::zero() {
            failures.push(format!("case {i}: Q(empty|gamma)"));
        }
        if q(&overlap) != KernelValue::zero() {
            failures.push(format!("case {i}: overlap"));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty();
    report(7, "boundary conditions", ok, &format!("{checks} checks, {failures:?}"), elapsed);
    assert!(ok, "{failures:?}");
}

#[test]
fn criterion_8_pivot_independence_and_scaling() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (i, case) in the_corpus().iter().enumerate() {
        let c = &case.configuration;
        let base = q_eval(c, &case.h, &case.kernel, &opts(PivotRule::First)).unwrap().value;
        for root in c.roots() {
            let v = q_eval(c, &case.h, &case.kernel, &opts(PivotRule::Given(root.label.clone())))
                .unwrap()
                .value;
            if v != base {
                failures.push(format!("case {i}: pivot {}", root.label));
            }
        }
        let unit = q_eval(c, &KernelValue::one(), &case.kernel, &opts(PivotRule::First)).unwrap().value;
        if base != case.h.pow(c.len() as u32).mul(&unit) {
            failures.push(format!("case {i}: h-scaling"));
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty();
    report(8, "pivot independence and h^(m+n) scaling", ok, &format!("{failures:?}"), elapsed);
    assert!(ok, "{failures:?}");
}

fn dense_rational_kernel(c: &Configuration) -> EdgeKernel {
    let mut t = ExplicitTable::new();
    let points: Vec<_> = c.ground_points().collect();
    for (i, a) in points.iter().enumerate() {
        for (j, b) in points.iter().enumerate().skip(i + 1) {
            let num = ((i * 7 + j * 3) % 11) as i64 - 5;
            let den = (i + j) % 4 + 1;
            t.insert(&a.label, &b.label, BigRational::new(BigInt::from(num), BigInt::from(den as i64)))
                .unwrap();
        }
    }
    EdgeKernel::Explicit(t)
}

#[test]
fn criterion_9_performance_envelope() {
    let mut lines = Vec::new();
    let mut ok = true;
    // the single-root split has the largest subset sums per state
    for (m, n) in [(1usize, 13usize), (7, 7)] {
        let c = Configuration::anonymous(m, n);
        let kernel = dense_rational_kernel(&c);
        let h = KernelValue::ratio(3, 2);
        let start = Instant::now();
        let e = q_eval(&c, &h, &kernel, &opts(PivotRule::First)).unwrap();
        let elapsed = start.elapsed();
        let bound = 3usize.pow(14);
        let pass = e.value.is_exact() && e.states <= bound && elapsed < Duration::from_secs(30);
        ok &= pass;
        lines.push(format!("q_eval m={m} n={n}: {} states, {:.2}s", e.states, elapsed.as_secs_f64()));
    }
    let start = Instant::now();
    let mut count_ok = true;
    for m in 1..60 {
        let n = 60 - m;
        count_ok &= q_count(m, n) == closed_form_count(CountQuery::new(m, n));
    }
    let elapsed = start.elapsed();
    // one sweep over every split of m + n = 60; each split must fit in 1 s
    count_ok &= elapsed < Duration::from_secs(1);
    ok &= count_ok;
    lines.push(format!("q_count m+n=60 sweep {:.3}s", elapsed.as_secs_f64()));
    report(9, "performance envelope", ok, &lines.join("; "), Duration::ZERO);
    assert!(ok, "{lines:?}");
}
