//! The verification battery behind `forest-kernel verify`.

use std::thread;

use num_bigint::BigUint;

use super::report::{Family, RunReport};
use crate::corpus::{corpus, RandomCase};
use crate::count::{closed_form_count, count_recursion_table, induction_step_check, cayley_check_with, CountQuery};
use crate::enumerate::{brute_force_count_with, verify_identity_with};
use crate::error::{Error, Result};
use crate::kernel::{q_eval, q_eval_by_enumeration_with, PivotRule, QOptions};
use crate::model::{Configuration, EdgeKernel, KernelValue, NumericMode};
use crate::Limits;

pub const INDUCTION_GRID: usize = 20;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub max_total: usize,
    pub seed: u64,
    pub trials: usize,
    /// Cases appended to the random corpus (from `--config`).
    pub extra: Vec<RandomCase>,
    pub limits: Limits,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_total: 6,
            seed: 1,
            trials: 50,
            extra: Vec::new(),
            limits: Limits::from_env(),
        }
    }
}

struct Tally {
    name: &'static str,
    mode: String,
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str, mode: &str) -> Self {
        Tally {
            name,
            mode: mode.to_string(),
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, outcome: Result<bool>, dump: impl FnOnce() -> String) {
        self.checks += 1;
        match outcome {
            Ok(true) => {}
            Ok(false) => self.failures.push(dump()),
            Err(e) => self.failures.push(format!("{e}; {}", dump())),
        }
    }

    fn finish(self) -> Family {
        Family {
            name: self.name.to_string(),
            mode: self.mode,
            checks: self.checks,
            passed: self.failures.is_empty(),
            failures: self.failures,
        }
    }
}

pub fn describe_case(case: &RandomCase) -> String {
    let c = &case.configuration;
    let labels = |ps: &[crate::model::Point]| ps.iter().map(|p| p.label.clone()).collect::<Vec<_>>().join(",");
    let kernel = match &case.kernel {
        EdgeKernel::Explicit(t) => t
            .iter()
            .map(|(a, b, v)| format!("{a}-{b}:{v}"))
            .collect::<Vec<_>>()
            .join(" "),
        other => format!("{other:?}"),
    };
    format!(
        "roots=[{}] vertices=[{}] h={} kernel={{{}}}",
        labels(c.roots()),
        labels(c.vertices()),
        case.h,
        kernel
    )
}

fn qopts(limits: &Limits, pivot: PivotRule) -> QOptions {
    QOptions {
        pivot,
        limit: limits.kernel,
        ..QOptions::default()
    }
}

fn q(case: &RandomCase, h: &KernelValue, limits: &Limits, pivot: PivotRule) -> Result<KernelValue> {
    q_eval(&case.configuration, h, &case.kernel, &qopts(limits, pivot)).map(|e| e.value)
}

fn identity_family(cases: &[RandomCase], limits: &Limits) -> Family {
    let mut t = Tally::new("root-peeling identity (all pivots)", "exact");
    for case in cases {
        for root in case.configuration.roots() {
            let outcome = verify_identity_with(&case.configuration, &root.label, &case.kernel, limits.enumeration);
            let shown = outcome
                .as_ref()
                .map(|r| format!("pivot {}: lhs {} vs rhs {}", r.pivot, r.lhs, r.rhs))
                .unwrap_or_default();
            t.record(outcome.map(|r| r.holds), || format!("{shown} {}", describe_case(case)));
        }
    }
    t.finish()
}

fn forest_sum_family(cases: &[RandomCase], limits: &Limits) -> Family {
    let mut t = Tally::new("recursion equals forest sum", "exact");
    for case in cases {
        let rec = q(case, &case.h, limits, PivotRule::First);
        let enu = q_eval_by_enumeration_with(&case.configuration, &case.h, &case.kernel, limits.enumeration);
        let shown = match (&rec, &enu) {
            (Ok(a), Ok(b)) => format!("recursion {a} vs enumeration {b}"),
            _ => String::new(),
        };
        let outcome = rec.and_then(|a| enu.map(|b| a == b));
        t.record(outcome, || format!("{shown} {}", describe_case(case)));
    }
    t.finish()
}

fn pivot_scaling_family(cases: &[RandomCase], limits: &Limits) -> (Family, Family) {
    let mut pivots = Tally::new("pivot independence", "exact");
    let mut scaling = Tally::new("h-scaling", "exact");
    for case in cases {
        let base = q(case, &case.h, limits, PivotRule::First);
        for root in case.configuration.roots() {
            let other = q(case, &case.h, limits, PivotRule::Given(root.label.clone()));
            let outcome = match (&base, other) {
                (Ok(a), Ok(b)) => Ok(*a == b),
                (Err(e), _) => Err(e.clone()),
                (_, Err(e)) => Err(e),
            };
            pivots.record(outcome, || format!("pivot {} {}", root.label, describe_case(case)));
        }
        let unit = q(case, &KernelValue::one(), limits, PivotRule::First);
        let outcome = match (&base, unit) {
            (Ok(a), Ok(u)) => Ok(*a == case.h.pow(case.configuration.len() as u32).mul(&u)),
            (Err(e), _) => Err(e.clone()),
            (_, Err(e)) => Err(e),
        };
        scaling.record(outcome, || describe_case(case));
    }
    (pivots.finish(), scaling.finish())
}

fn boundary_family(cases: &[RandomCase], limits: &Limits) -> Family {
    let mut t = Tally::new("boundary conditions", "exact");
    for case in cases {
        let c = &case.configuration;
        let all: Vec<usize> = (0..c.len()).collect();
        let empty = c.restrict(&[], &[]);
        let no_roots = c.restrict(&[], &all);
        let overlap = c.roots().first().map(|r0| {
            let mut vertices = c.vertices().to_vec();
            vertices.push(r0.clone());
            Configuration::new(c.roots().to_vec(), vertices)
        });
        let eval = |cfg: &Configuration| {
            q_eval(cfg, &case.h, &case.kernel, &qopts(limits, PivotRule::First)).map(|e| e.value)
        };
        t.record(eval(&empty).map(|v| v == KernelValue::one()), || {
            format!("Q(empty|empty) != 1 {}", describe_case(case))
        });
        t.record(eval(&no_roots).map(|v| v.is_zero()), || {
            format!("Q(empty|gamma) != 0 {}", describe_case(case))
        });
        if let Some(overlap) = overlap {
            t.record(overlap.and_then(|o| eval(&o)).map(|v| v.is_zero()), || {
                format!("Q on overlapping labels != 0 {}", describe_case(case))
            });
        }
    }
    t.finish()
}

#[allow(clippy::needless_range_loop)]
fn closed_form_family(max_total: usize, limits: &Limits) -> Family {
    let mut t = Tally::new("closed form vs recursion vs q_count vs brute force", "exact");
    let table = count_recursion_table(max_total, max_total);
    for total in 1..=max_total {
        for m in 1..=total {
            let n = total - m;
            let closed = closed_form_count(CountQuery::new(m, n));
            let recursion = table[n][m].clone();
            let collapsed = crate::kernel::q_count(m, n);
            let brute = brute_force_count_with(&Configuration::anonymous(m, n), limits.enumeration);
            let shown = format!(
                "N({m}|{n}): closed {closed}, recursion {recursion}, q_count {collapsed}, brute {}",
                brute.as_ref().map(BigUint::to_string).unwrap_or_default()
            );
            let outcome = brute.map(|b| b == closed && recursion == closed && collapsed == closed);
            t.record(outcome, || shown);
        }
    }
    t.finish()
}

fn induction_family() -> Family {
    let mut t = Tally::new("induction step algebra", "exact");
    for m in 1..=INDUCTION_GRID {
        for n in 1..=INDUCTION_GRID {
            let step = induction_step_check(m, n);
            let shown = step
                .as_ref()
                .map(|s| format!("m={m} n={n}: S={} M1={} M2={} target={}", s.sum, s.m1, s.m2, s.target))
                .unwrap_or_default();
            t.record(step.map(|s| s.holds), || shown);
        }
    }
    t.finish()
}

fn cayley_family(max_total: usize, limits: &Limits) -> Family {
    let mut t = Tally::new("Cayley specialization", "exact");
    for vertices in 1..=max_total {
        let r = cayley_check_with(vertices, limits.enumeration);
        let shown = r
            .as_ref()
            .map(|r| format!("N={vertices}: count {} vs {}", r.count, r.formula))
            .unwrap_or_default();
        t.record(r.map(|r| r.holds), || shown);
    }
    t.finish()
}

pub fn run_verify(opts: &VerifyOptions) -> Result<RunReport> {
    if opts.max_total > opts.limits.enumeration {
        return Err(Error::ResourceLimit {
            what: "verify --max-total",
            size: opts.max_total,
            limit: opts.limits.enumeration,
        });
    }
    if opts.max_total == 0 {
        return Err(Error::Domain("--max-total must be at least 1".into()));
    }
    let mut report = RunReport::new("verify");
    report.input("max-total", opts.max_total);
    report.input("seed", opts.seed);
    report.input("trials", opts.trials);

    let mut cases = corpus(opts.seed, opts.trials, opts.max_total);
    for extra in &opts.extra {
        if extra.kernel.mode() == NumericMode::Exact && extra.h.is_exact() {
            cases.push(extra.clone());
        } else {
            report
                .notes
                .push(format!("skipped float-valued config case {}", describe_case(extra)));
        }
    }
    report.input("cases", cases.len());
    let limits = opts.limits;

    let families = thread::scope(|s| {
        let cases = &cases;
        let handles = vec![
            s.spawn(move || vec![identity_family(cases, &limits)]),
            s.spawn(move || vec![forest_sum_family(cases, &limits)]),
            s.spawn(move || {
                let (p, h) = pivot_scaling_family(cases, &limits);
                vec![p, h]
            }),
            s.spawn(move || vec![boundary_family(cases, &limits)]),
            s.spawn(move || vec![closed_form_family(opts.max_total, &limits)]),
            s.spawn(|| vec![induction_family()]),
            s.spawn(move || vec![cayley_family(opts.max_total, &limits)]),
        ];
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("verification thread panicked"))
            .collect::<Vec<_>>()
    });
    for f in families {
        report.family(f);
    }
    report.output("families", report.families.len());
    report.output(
        "failures",
        report.families.iter().map(|f| f.failures.len()).sum::<usize>(),
    );
    Ok(report)
}
