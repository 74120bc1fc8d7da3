//! JSON configuration files.
//!
//! ```json
//! {
//!   "dimension": 1,
//!   "roots":    [{ "id": "x1", "pos": [0.0] }],
//!   "vertices": [{ "id": "y1", "pos": [1.0] }, { "id": "y2", "pos": [2.0] }],
//!   "kernel":   { "type": "exponential", "alpha": 1.0 },
//!   "h": "1"
//! }
//! ```
//!
//! Rationals are strings (`"3/7"`, `"-2"`, `"0.25"`); JSON numbers are
//! floats. Kernel types: `constant {c}`, `exponential {alpha}`,
//! `gaussian {alpha}`, `hardcore {radius}`, and
//! `explicit {values: [{a, b, value}]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Configuration, EdgeKernel, ExplicitTable, KernelValue, Point};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Rational(String),
    Float(f64),
}

impl Literal {
    pub fn to_value(&self) -> Result<KernelValue> {
        match self {
            Literal::Rational(s) => KernelValue::parse_rational(s),
            Literal::Float(x) => Ok(KernelValue::Float(*x)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairValue {
    pub a: String,
    pub b: String,
    pub value: Literal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum KernelSpec {
    Constant { c: Literal },
    Exponential { alpha: f64 },
    Gaussian { alpha: f64 },
    Hardcore { radius: f64 },
    Explicit { values: Vec<PairValue> },
}

impl Default for KernelSpec {
    fn default() -> Self {
        KernelSpec::Constant {
            c: Literal::Rational("1".into()),
        }
    }
}

impl KernelSpec {
    pub fn build(&self) -> Result<EdgeKernel> {
        Ok(match self {
            KernelSpec::Constant { c } => EdgeKernel::Constant(c.to_value()?),
            KernelSpec::Exponential { alpha } => EdgeKernel::Exponential { alpha: *alpha },
            KernelSpec::Gaussian { alpha } => EdgeKernel::Gaussian { alpha: *alpha },
            KernelSpec::Hardcore { radius } => EdgeKernel::Hardcore { radius: *radius },
            KernelSpec::Explicit { values } => {
                let mut table = ExplicitTable::new();
                for pv in values {
                    match pv.value.to_value()? {
                        KernelValue::Exact(r) => table.insert(&pv.a, &pv.b, r)?,
                        KernelValue::Float(_) => {
                            return Err(Error::Parse(format!(
                                "explicit value for ({}, {}) must be a rational string such as \"3/7\"",
                                pv.a, pv.b
                            )))
                        }
                    }
                }
                EdgeKernel::Explicit(table)
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    pub roots: Vec<PointSpec>,
    #[serde(default)]
    pub vertices: Vec<PointSpec>,
    #[serde(default)]
    pub kernel: KernelSpec,
    #[serde(default = "default_h")]
    pub h: Literal,
}

fn default_h() -> Literal {
    Literal::Rational("1".into())
}

/// Parsed and validated contents of a [`ConfigFile`].
#[derive(Debug, Clone)]
pub struct Loaded {
    pub configuration: Configuration,
    pub kernel: EdgeKernel,
    pub h: KernelValue,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn load(&self) -> Result<Loaded> {
        let to_point = |p: &PointSpec| -> Result<Point> {
            if let (Some(d), Some(pos)) = (self.dimension, &p.pos) {
                if pos.len() != d {
                    return Err(Error::DimensionMismatch {
                        label: p.id.clone(),
                        expected: d,
                        found: pos.len(),
                    });
                }
            }
            Ok(Point {
                label: p.id.clone(),
                position: p.pos.clone(),
            })
        };
        let roots = self.roots.iter().map(to_point).collect::<Result<Vec<_>>>()?;
        let vertices = self.vertices.iter().map(to_point).collect::<Result<Vec<_>>>()?;
        Ok(Loaded {
            configuration: Configuration::new(roots, vertices)?,
            kernel: self.kernel.build()?,
            h: self.h.to_value()?,
        })
    }
}
