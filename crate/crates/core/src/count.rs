//! Exact forest counts `N(m|n)`: closed form, the binomial recursion, the
//! algebra of the induction step, and the single-root (Cayley) case.
//!
//! Degenerate sizes follow the kernel's boundary conditions: `N(0|0) = 1`,
//! `N(0|n) = 0` for `n ≥ 1`, and `N(m|0) = 1` (the edgeless forest).

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::enumerate::brute_force_count_with;
use crate::error::{Error, Result};
use crate::model::Configuration;
use crate::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountQuery {
    pub m: usize,
    pub n: usize,
}

impl CountQuery {
    pub fn new(m: usize, n: usize) -> Self {
        CountQuery { m, n }
    }
}

/// Row `n` of Pascal's triangle.
pub fn pascal_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(BigUint::one());
        for w in row.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigUint::one());
        row = next;
    }
    row
}

/// `m · (n + m)^{n − 1}`.
pub fn closed_form_count(q: CountQuery) -> BigUint {
    let CountQuery { m, n } = q;
    match (m, n) {
        (0, 0) => BigUint::one(),
        (0, _) => BigUint::zero(),
        (_, 0) => BigUint::one(),
        _ => BigUint::from(m) * num_traits::pow(BigUint::from(m + n), n - 1),
    }
}

/// `N(a|b)` for all `a ≤ max_m + max_n`, `b ≤ max_n`, filled bottom-up from
/// `N(m|n) = Σ_k C(n, k) · N(m + k − 1 | n − k)`. Indexed `[b][a]`.
pub fn count_recursion_table(max_m: usize, max_n: usize) -> Vec<Vec<BigUint>> {
    let width = max_m + max_n + 1;
    let mut table: Vec<Vec<BigUint>> = Vec::with_capacity(max_n + 1);
    for b in 0..=max_n {
        let row = pascal_row(b);
        // entries with a > max_m + (max_n - b) are never read
        let reach = (max_m + max_n - b).min(width - 1);
        let mut level = vec![BigUint::zero(); width];
        for a in 0..=reach {
            level[a] = if a == 0 {
                if b == 0 {
                    BigUint::one()
                } else {
                    BigUint::zero()
                }
            } else if b == 0 {
                BigUint::one()
            } else {
                // k = 0 stays on this level: N(a − 1 | b)
                let mut total = level[a - 1].clone();
                for (k, binom) in row.iter().enumerate().skip(1) {
                    total += binom * &table[b - k][a + k - 1];
                }
                total
            };
        }
        table.push(level);
    }
    table
}

pub fn count_recursion(q: CountQuery) -> BigUint {
    let table = count_recursion_table(q.m, q.n);
    table[q.n][q.m].clone()
}

fn rpow(base: i64, exp: i64) -> BigRational {
    let b = BigRational::from_integer(BigInt::from(base));
    if exp >= 0 {
        num_traits::pow(b, exp as usize)
    } else {
        num_traits::pow(b.recip(), (-exp) as usize)
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Values produced by substituting the closed form into the recursion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InductionStep {
    pub m: usize,
    pub n: usize,
    /// `Σ_k C(n,k)(m+k−1)(m+n−1)^{n−k−1}`
    pub sum: String,
    /// `m Σ_k C(n,k)(m+n−1)^{n−k−1}`
    pub m1_sum: String,
    /// `m (m+n−1)^{−1} (m+n)^n`
    pub m1: String,
    /// `Σ_k C(n,k)(k−1)(m+n−1)^{n−k−1}`
    pub m2_sum: String,
    /// `n (m+n−1)^{−1} (m+n)^{n−1} − (m+n−1)^{−1} (m+n)^n`
    pub m2_split: String,
    /// `−m (m+n−1)^{−1} (m+n)^{n−1}`
    pub m2: String,
    /// `m (m+n)^{n−1}`
    pub target: String,
    pub holds: bool,
}

pub fn induction_step_check(m: usize, n: usize) -> Result<InductionStep> {
    if m + n < 2 {
        return Err(Error::Domain(format!(
            "m + n = {} makes (m + n − 1) vanish",
            m + n
        )));
    }
    let (mi, ni) = (m as i64, n as i64);
    let d = mi + ni - 1;
    let row = pascal_row(n);
    let binom = |k: usize| BigRational::from_integer(BigInt::from(row[k].clone()));

    let mut sum = BigRational::zero();
    let mut m1_sum = BigRational::zero();
    let mut m2_sum = BigRational::zero();
    for k in 0..=n {
        let ki = k as i64;
        let base = binom(k) * rpow(d, ni - ki - 1);
        sum += &base * int(mi + ki - 1);
        m1_sum += &base;
        m2_sum += &base * int(ki - 1);
    }
    m1_sum *= int(mi);

    let inv = rpow(d, -1);
    let m1 = int(mi) * &inv * rpow(mi + ni, ni);
    let m2_split = int(ni) * &inv * rpow(mi + ni, ni - 1) - &inv * rpow(mi + ni, ni);
    let m2 = -int(mi) * &inv * rpow(mi + ni, ni - 1);
    let target = int(mi) * rpow(mi + ni, ni - 1);

    let holds = sum == &m1 + &m2 && sum == target && m1 == m1_sum && m2 == m2_sum && m2 == m2_split;
    Ok(InductionStep {
        m,
        n,
        sum: sum.to_string(),
        m1_sum: m1_sum.to_string(),
        m1: m1.to_string(),
        m2_sum: m2_sum.to_string(),
        m2_split: m2_split.to_string(),
        m2: m2.to_string(),
        target: target.to_string(),
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyReport {
    pub vertices: usize,
    pub count: String,
    pub formula: String,
    pub holds: bool,
}

/// Forests on one root and `N − 1` vertices against `N^{N−2}`.
pub fn cayley_check(vertices: usize) -> Result<CayleyReport> {
    cayley_check_with(vertices, Limits::from_env().enumeration)
}

pub fn cayley_check_with(vertices: usize, limit: usize) -> Result<CayleyReport> {
    if vertices == 0 {
        return Err(Error::Domain("Cayley's formula needs at least one vertex".into()));
    }
    let count = brute_force_count_with(&Configuration::anonymous(1, vertices - 1), limit)?;
    let formula = if vertices == 1 {
        BigUint::one()
    } else {
        num_traits::pow(BigUint::from(vertices), vertices - 2)
    };
    Ok(CayleyReport {
        vertices,
        holds: count == formula,
        count: count.to_string(),
        formula: formula.to_string(),
    })
}
