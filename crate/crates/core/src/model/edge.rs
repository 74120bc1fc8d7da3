use std::collections::BTreeMap;

use num_rational::BigRational;

use super::value::{KernelValue, NumericMode};
use super::Point;
use crate::error::{Error, Result};

/// Pairwise rational values keyed by unordered label pair.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExplicitTable {
    values: BTreeMap<(String, String), BigRational>,
}

fn unordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl ExplicitTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a value for the unordered pair `{a, b}`. Re-inserting the same
    /// pair with a different value (in either orientation) is rejected.
    pub fn insert(&mut self, a: &str, b: &str, value: BigRational) -> Result<()> {
        let key = unordered(a, b);
        if let Some(old) = self.values.get(&key) {
            if *old != value {
                return Err(Error::AsymmetricKernel(a.to_string(), b.to_string()));
            }
            return Ok(());
        }
        self.values.insert(key, value);
        Ok(())
    }

    pub fn with(mut self, a: &str, b: &str, value: KernelValue) -> Result<Self> {
        match value {
            KernelValue::Exact(r) => self.insert(a, b, r)?,
            KernelValue::Float(_) => {
                return Err(Error::Mode("explicit kernel tables hold rationals only".into()))
            }
        }
        Ok(self)
    }

    pub fn get(&self, a: &str, b: &str) -> Option<&BigRational> {
        self.values.get(&unordered(a, b))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, &BigRational)> {
        self.values.iter().map(|((a, b), v)| (a.as_str(), b.as_str(), v))
    }

    /// Renames every label through `f`.
    pub fn relabeled(&self, f: impl Fn(&str) -> String) -> Self {
        let values = self
            .values
            .iter()
            .map(|((a, b), v)| (unordered(&f(a), &f(b)), v.clone()))
            .collect();
        ExplicitTable { values }
    }
}

/// The edge weight ν, evaluated on point pairs.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeKernel {
    Constant(KernelValue),
    /// `exp(-alpha * dist)`
    Exponential { alpha: f64 },
    /// `exp(-alpha * dist^2)`
    Gaussian { alpha: f64 },
    /// 1 if `dist < radius`, else 0.
    Hardcore { radius: f64 },
    Explicit(ExplicitTable),
}

impl EdgeKernel {
    pub fn unit() -> Self {
        EdgeKernel::Constant(KernelValue::one())
    }

    /// Whether every value this kernel can produce is an exact rational.
    pub fn mode(&self) -> NumericMode {
        match self {
            EdgeKernel::Constant(c) => c.mode(),
            EdgeKernel::Hardcore { .. } | EdgeKernel::Explicit(_) => NumericMode::Exact,
            EdgeKernel::Exponential { .. } | EdgeKernel::Gaussian { .. } => NumericMode::Float,
        }
    }

    pub fn needs_positions(&self) -> bool {
        matches!(
            self,
            EdgeKernel::Exponential { .. } | EdgeKernel::Gaussian { .. } | EdgeKernel::Hardcore { .. }
        )
    }

    /// Evaluates ν on the pair. Symmetric in its arguments.
    pub fn eval(&self, a: &Point, b: &Point) -> Result<KernelValue> {
        match self {
            EdgeKernel::Constant(c) => Ok(c.clone()),
            EdgeKernel::Explicit(table) => table
                .get(&a.label, &b.label)
                .cloned()
                .map(KernelValue::Exact)
                .ok_or_else(|| Error::KernelDomain(a.label.clone(), b.label.clone())),
            EdgeKernel::Exponential { alpha } => Ok(KernelValue::Float((-alpha * distance(a, b)?).exp())),
            EdgeKernel::Gaussian { alpha } => {
                let d = distance(a, b)?;
                Ok(KernelValue::Float((-alpha * d * d).exp()))
            }
            EdgeKernel::Hardcore { radius } => Ok(if distance(a, b)? < *radius {
                KernelValue::one()
            } else {
                KernelValue::zero()
            }),
        }
    }
}

fn distance(a: &Point, b: &Point) -> Result<f64> {
    let pa = a.position.as_ref().ok_or_else(|| Error::MissingPosition(a.label.clone()))?;
    let pb = b.position.as_ref().ok_or_else(|| Error::MissingPosition(b.label.clone()))?;
    if pa.len() != pb.len() {
        return Err(Error::DimensionMismatch {
            label: b.label.clone(),
            expected: pa.len(),
            found: pb.len(),
        });
    }
    Ok(pa.iter().zip(pb).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
}
