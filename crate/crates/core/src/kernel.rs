//! The forest-sum kernel `Q_{h,ν}(η | γ)`, evaluated by root peeling:
//!
//! ```text
//! Q(η | γ) = h · Σ_{ξ ⊆ γ} K(x; ξ) · Q(η∖x ∪ ξ | γ∖ξ),   x ∈ η
//! K(x; ξ)  = ∏_{y ∈ ξ} ν(x − y)                         (1 for ξ = ∅)
//! Q(∅ | ∅) = 1,  Q(∅ | γ) = 0 for γ ≠ ∅,  Q(η | γ) = 0 when η ∩ γ ≠ ∅
//! ```
//!
//! States are `(root mask, vertex mask)` pairs over the ground index and are
//! memoized. In exact mode all rationals are scaled to integers first: every
//! state `(R, V)` carries exactly `|R| + |V|` factors of `h` and `|V|` factors
//! of `ν`, so multiplying `h` by its denominator and `ν` by the common
//! denominator of the table turns the recursion into one over `BigInt`, and a
//! single division at the end recovers the rational value.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::count::pascal_row;
use crate::enumerate::enumerate_forests_with;
use crate::error::{Error, Result};
use crate::model::value::Scalar;
use crate::model::{forest_weight, Configuration, EdgeKernel, KernelValue, NumericMode, Point};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// Lowest-index root.
    #[default]
    First,
    /// The named root at the top level; sub-states use the default rule.
    Given(String),
}

#[derive(Debug, Clone)]
pub struct QOptions {
    pub pivot: PivotRule,
    /// `None` picks exact when both `h` and `ν` are exact.
    pub mode: Option<NumericMode>,
    /// Re-derive every memo hit with a different pivot and compare all
    /// top-level pivots. Slow; meant for debugging.
    pub verify: bool,
    pub limit: usize,
}

impl Default for QOptions {
    fn default() -> Self {
        QOptions {
            pivot: PivotRule::First,
            mode: None,
            verify: false,
            limit: Limits::from_env().kernel,
        }
    }
}

/// Which boundary condition, if any, decided the value without recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// `Q(∅ | ∅) = 1`
    Empty,
    /// `Q(∅ | γ) = 0`
    NoRoots,
    /// `Q(η | γ) = 0` on shared labels.
    Overlap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QEvaluation {
    pub value: KernelValue,
    pub mode: NumericMode,
    /// Distinct memoized states, including the top-level one.
    pub states: usize,
    pub boundary: Option<Boundary>,
}

/// `∏_{y ∈ ξ} ν(x − y)`; 1 for empty `ξ`.
pub fn k_factor(x: &Point, xi: &[Point], kernel: &EdgeKernel) -> Result<KernelValue> {
    if let Some(y) = xi.iter().find(|y| y.label == x.label) {
        return Err(Error::Precondition(format!("pivot `{}` is in ξ", y.label)));
    }
    xi.iter()
        .try_fold(KernelValue::one(), |acc, y| Ok(acc.mul(&kernel.eval(x, y)?)))
}

pub fn q_value(c: &Configuration, h: &KernelValue, kernel: &EdgeKernel) -> Result<KernelValue> {
    q_eval(c, h, kernel, &QOptions::default()).map(|e| e.value)
}

pub fn q_eval(c: &Configuration, h: &KernelValue, kernel: &EdgeKernel, opts: &QOptions) -> Result<QEvaluation> {
    c.ensure_size("kernel evaluation", opts.limit)?;
    let natural = if h.is_exact() && kernel.mode() == NumericMode::Exact {
        NumericMode::Exact
    } else {
        NumericMode::Float
    };
    let mode = match opts.mode {
        Some(NumericMode::Exact) if natural == NumericMode::Float => {
            return Err(Error::Mode("exact mode needs a rational h and a rational-valued kernel".into()))
        }
        Some(m) => m,
        None => natural,
    };
    let boundary = |value: i64, b: Boundary| QEvaluation {
        value: match mode {
            NumericMode::Exact => KernelValue::integer(value),
            NumericMode::Float => KernelValue::Float(value as f64),
        },
        mode,
        states: 0,
        boundary: Some(b),
    };

    if !c.overlap().is_empty() {
        return Ok(boundary(0, Boundary::Overlap));
    }
    let pivot = match &opts.pivot {
        PivotRule::First => 0,
        PivotRule::Given(label) => c.root_index(label).ok_or_else(|| Error::NotARoot(label.clone()))?,
    };
    let (m, n) = (c.m(), c.n());
    if m == 0 {
        return Ok(if n == 0 {
            boundary(1, Boundary::Empty)
        } else {
            boundary(0, Boundary::NoRoots)
        });
    }

    let nu = edge_table(c, kernel)?;
    let (value, states) = match mode {
        NumericMode::Exact => {
            let (value, states) = run_exact(m, n, h, &nu, pivot, opts.verify)?;
            (KernelValue::Exact(value), states)
        }
        NumericMode::Float => {
            let table: Vec<Vec<f64>> = nu.iter().map(|row| row.iter().map(KernelValue::to_f64).collect()).collect();
            let mut engine = Engine::new(m, n, h.to_f64(), &table, opts.verify);
            let value = engine.top(pivot)?;
            (KernelValue::Float(value), engine.states())
        }
    };
    Ok(QEvaluation {
        value,
        mode,
        states,
        boundary: None,
    })
}

/// `ν(x, y)` for every ground `x` and vertex `y ≠ x`, indexed `[x][y − m]`.
/// The diagonal entries are zero placeholders and never read.
fn edge_table(c: &Configuration, kernel: &EdgeKernel) -> Result<Vec<Vec<KernelValue>>> {
    let m = c.m();
    c.ground_points()
        .enumerate()
        .map(|(gx, x)| {
            c.vertices()
                .iter()
                .enumerate()
                .map(|(j, y)| {
                    if gx == m + j {
                        Ok(KernelValue::zero())
                    } else {
                        kernel.eval(x, y)
                    }
                })
                .collect()
        })
        .collect()
}

fn run_exact(
    m: usize,
    n: usize,
    h: &KernelValue,
    nu: &[Vec<KernelValue>],
    pivot: usize,
    verify: bool,
) -> Result<(BigRational, usize)> {
    let h = h.as_exact().expect("exact mode").clone();
    let rationals: Vec<Vec<BigRational>> = nu
        .iter()
        .map(|row| row.iter().map(|v| v.as_exact().expect("exact mode").clone()).collect())
        .collect();
    let common = rationals
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let table: Vec<Vec<BigInt>> = rationals
        .iter()
        .map(|row| row.iter().map(|r| (r * &common).to_integer()).collect())
        .collect();
    let h_den = h.denom().clone();
    let h_int = h.numer().clone();

    let mut engine = Engine::new(m, n, h_int, &table, verify);
    let scaled = engine.top(pivot)?;
    let scale = num_traits::pow(h_den, m + n) * num_traits::pow(common, n);
    Ok((BigRational::new(scaled, scale), engine.states()))
}

struct Engine<T> {
    m: usize,
    h: T,
    /// `k[x][ξ]` with `ξ` a vertex-local mask.
    k: Vec<Vec<T>>,
    memo: HashMap<u64, T>,
    verify: bool,
    mismatch: Option<(u32, u32)>,
}

impl<T: Scalar> Engine<T> {
    fn new(m: usize, n: usize, h: T, nu: &[Vec<T>], verify: bool) -> Self {
        let k = nu
            .iter()
            .map(|row| {
                let mut prod = Vec::with_capacity(1 << n);
                prod.push(T::one());
                for s in 1usize..(1 << n) {
                    let low = s.trailing_zeros() as usize;
                    let v = prod[s & (s - 1)].mul_ref(&row[low]);
                    prod.push(v);
                }
                prod
            })
            .collect();
        Engine {
            m,
            h,
            k,
            memo: HashMap::new(),
            verify,
            mismatch: None,
        }
    }

    fn states(&self) -> usize {
        self.memo.len()
    }

    fn top(&mut self, pivot: usize) -> Result<T> {
        let n = self.k[0].len().trailing_zeros();
        let roots = low_mask(self.m);
        let vertices = low_mask(n as usize);
        let value = self.step(pivot as u32, roots, vertices);
        if self.verify {
            for x in 0..self.m as u32 {
                if x != pivot as u32 && !self.step(x, roots, vertices).close_to(&value) {
                    return Err(Error::Domain(format!("pivot dependence: root #{x} disagrees with #{pivot}")));
                }
            }
            if let Some((r, v)) = self.mismatch {
                return Err(Error::Domain(format!(
                    "memo state (roots {r:#b}, vertices {v:#b}) disagrees with its re-derivation"
                )));
            }
        }
        self.memo.entry(key(roots, vertices)).or_insert_with(|| value.clone());
        Ok(value)
    }

    fn q(&mut self, roots: u32, vertices: u32) -> T {
        if roots == 0 {
            return if vertices == 0 { T::one() } else { T::zero() };
        }
        if let Some(hit) = self.memo.get(&key(roots, vertices)) {
            let hit = hit.clone();
            if self.verify {
                let alt = 31 - roots.leading_zeros();
                if !self.step(alt, roots, vertices).close_to(&hit) {
                    self.mismatch.get_or_insert((roots, vertices));
                }
            }
            return hit;
        }
        let value = self.step(roots.trailing_zeros(), roots, vertices);
        self.memo.insert(key(roots, vertices), value.clone());
        value
    }

    fn step(&mut self, x: u32, roots: u32, vertices: u32) -> T {
        let rest = roots & !(1 << x);
        let mut acc = T::zero();
        let mut xi = vertices;
        loop {
            let sub = self.q(rest | (xi << self.m), vertices & !xi);
            if !sub.is_zero() {
                acc.add_ref(&self.k[x as usize][xi as usize].mul_ref(&sub));
            }
            if xi == 0 {
                break;
            }
            xi = (xi - 1) & vertices;
        }
        self.h.mul_ref(&acc)
    }
}

fn key(roots: u32, vertices: u32) -> u64 {
    (u64::from(roots) << 32) | u64::from(vertices)
}

fn low_mask(k: usize) -> u32 {
    if k >= 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

/// `Σ_{f ∈ 𝔉(η;γ)} G(f)` by explicit enumeration.
pub fn q_eval_by_enumeration(c: &Configuration, h: &KernelValue, kernel: &EdgeKernel) -> Result<KernelValue> {
    q_eval_by_enumeration_with(c, h, kernel, Limits::from_env().enumeration)
}

pub fn q_eval_by_enumeration_with(
    c: &Configuration,
    h: &KernelValue,
    kernel: &EdgeKernel,
    limit: usize,
) -> Result<KernelValue> {
    enumerate_forests_with(c, limit)?
        .iter()
        .try_fold(KernelValue::zero(), |acc, f| Ok(acc.add(&forest_weight(f, c, h, kernel)?)))
}

/// The recursion at `h = ν = 1`, collapsed onto `(|η|, |γ|)`:
/// `Q(m, n) = Σ_k C(n, k) · Q(m + k − 1, n − k)`.
pub fn q_count(m: usize, n: usize) -> BigUint {
    let mut memo = HashMap::new();
    let mut rows = HashMap::new();
    q_count_memo(m, n, &mut memo, &mut rows)
}

fn q_count_memo(
    m: usize,
    n: usize,
    memo: &mut HashMap<(usize, usize), BigUint>,
    rows: &mut HashMap<usize, Vec<BigUint>>,
) -> BigUint {
    if m == 0 {
        return if n == 0 { BigUint::one() } else { BigUint::zero() };
    }
    if let Some(v) = memo.get(&(m, n)) {
        return v.clone();
    }
    let row = rows.entry(n).or_insert_with(|| pascal_row(n)).clone();
    let mut total = BigUint::zero();
    for (k, binom) in row.iter().enumerate() {
        let sub = q_count_memo(m + k - 1, n - k, memo, rows);
        total += binom * sub;
    }
    memo.insert((m, n), total.clone());
    total
}
