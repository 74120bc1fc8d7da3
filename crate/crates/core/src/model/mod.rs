//! Points, configurations, forests and their weights.
//!
//! A [`Configuration`] lays its points out on a single *ground* index:
//! roots occupy `0..m`, vertices `m..m + n`. A [`Forest`] stores, for every
//! vertex, the ground index of its parent.

pub mod edge;
pub mod value;

use std::collections::{BTreeMap, HashMap, HashSet};

pub use edge::{EdgeKernel, ExplicitTable};
pub use value::{KernelValue, NumericMode, DEFAULT_REL_TOL};

use crate::error::{Error, Result};

/// Hard cap on `m + n`: subset states are `u32` bitmasks over the ground.
pub const MAX_GROUND: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub label: String,
    pub position: Option<Vec<f64>>,
}

impl Point {
    pub fn new(label: impl Into<String>) -> Self {
        Point {
            label: label.into(),
            position: None,
        }
    }

    pub fn at(label: impl Into<String>, position: Vec<f64>) -> Self {
        Point {
            label: label.into(),
            position: Some(position),
        }
    }
}

/// Roots η and vertices γ.
///
/// Labels are unique within each side. A label shared between the two sides
/// is representable (the forest kernel is zero there) but every forest-level
/// operation rejects it; see [`Configuration::overlap`].
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    roots: Vec<Point>,
    vertices: Vec<Point>,
}

impl Configuration {
    pub fn new(roots: Vec<Point>, vertices: Vec<Point>) -> Result<Self> {
        for side in [&roots, &vertices] {
            let mut seen = HashSet::new();
            for p in side.iter() {
                if !seen.insert(p.label.as_str()) {
                    return Err(Error::DuplicateLabel(p.label.clone()));
                }
            }
        }
        let mut dim: Option<Option<usize>> = None;
        for p in roots.iter().chain(&vertices) {
            let d = p.position.as_ref().map(Vec::len);
            match dim {
                None => {
                    if d == Some(0) {
                        return Err(Error::DimensionMismatch {
                            label: p.label.clone(),
                            expected: 1,
                            found: 0,
                        });
                    }
                    dim = Some(d);
                }
                Some(expected) if expected != d => {
                    return Err(match (expected, d) {
                        (Some(e), Some(f)) => Error::DimensionMismatch {
                            label: p.label.clone(),
                            expected: e,
                            found: f,
                        },
                        _ => Error::MixedPositions(p.label.clone()),
                    });
                }
                _ => {}
            }
        }
        Ok(Configuration { roots, vertices })
    }

    /// Position-less configuration from label lists.
    pub fn from_labels<S: AsRef<str>>(roots: &[S], vertices: &[S]) -> Result<Self> {
        Self::new(
            roots.iter().map(|s| Point::new(s.as_ref())).collect(),
            vertices.iter().map(|s| Point::new(s.as_ref())).collect(),
        )
    }

    /// `m` roots labelled `x1..xm`, `n` vertices labelled `y1..yn`.
    pub fn anonymous(m: usize, n: usize) -> Self {
        Configuration {
            roots: (1..=m).map(|i| Point::new(format!("x{i}"))).collect(),
            vertices: (1..=n).map(|i| Point::new(format!("y{i}"))).collect(),
        }
    }

    pub fn roots(&self) -> &[Point] {
        &self.roots
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn m(&self) -> usize {
        self.roots.len()
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn len(&self) -> usize {
        self.roots.len() + self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dimension(&self) -> Option<usize> {
        self.roots
            .iter()
            .chain(&self.vertices)
            .next()
            .and_then(|p| p.position.as_ref().map(Vec::len))
    }

    /// Point at a ground index (roots first, then vertices).
    pub fn ground(&self, index: usize) -> &Point {
        if index < self.roots.len() {
            &self.roots[index]
        } else {
            &self.vertices[index - self.roots.len()]
        }
    }

    pub fn ground_points(&self) -> impl Iterator<Item = &Point> {
        self.roots.iter().chain(&self.vertices)
    }

    pub fn ground_index(&self, label: &str) -> Option<usize> {
        self.ground_points().position(|p| p.label == label)
    }

    pub fn root_index(&self, label: &str) -> Option<usize> {
        self.roots.iter().position(|p| p.label == label)
    }

    /// Labels present on both sides, in root order.
    pub fn overlap(&self) -> Vec<String> {
        let vs: HashSet<&str> = self.vertices.iter().map(|p| p.label.as_str()).collect();
        self.roots
            .iter()
            .filter(|p| vs.contains(p.label.as_str()))
            .map(|p| p.label.clone())
            .collect()
    }

    pub fn ensure_disjoint(&self) -> Result<()> {
        let shared = self.overlap();
        if shared.is_empty() {
            Ok(())
        } else {
            Err(Error::Overlap(shared))
        }
    }

    pub(crate) fn ensure_size(&self, what: &'static str, limit: usize) -> Result<()> {
        let limit = limit.min(MAX_GROUND);
        if self.len() > limit {
            return Err(Error::ResourceLimit {
                what,
                size: self.len(),
                limit,
            });
        }
        Ok(())
    }

    /// A configuration with roots and vertices drawn from this one's ground
    /// indices.
    pub fn restrict(&self, roots: &[usize], vertices: &[usize]) -> Configuration {
        Configuration {
            roots: roots.iter().map(|&i| self.ground(i).clone()).collect(),
            vertices: vertices.iter().map(|&i| self.ground(i).clone()).collect(),
        }
    }
}

/// A rooted forest on a configuration: one parent per vertex.
///
/// `parent[i]` is the ground index of the parent of vertex `i` (ground index
/// `m + i`). Ordering is lexicographic over the parent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Forest {
    parent: Box<[u8]>,
}

impl Forest {
    pub fn from_parents(parents: &[usize]) -> Result<Self> {
        let parent = parents
            .iter()
            .map(|&p| u8::try_from(p).map_err(|_| Error::InvalidReference(format!("#{p}"))))
            .collect::<Result<Vec<u8>>>()?;
        Ok(Forest {
            parent: parent.into_boxed_slice(),
        })
    }

    pub(crate) fn from_raw(parent: Box<[u8]>) -> Self {
        Forest { parent }
    }

    pub fn empty() -> Self {
        Forest {
            parent: Box::new([]),
        }
    }

    /// Builds a forest from a label map `vertex -> parent`. The keys must be
    /// exactly the configuration's vertices.
    pub fn from_parent_map(c: &Configuration, map: &BTreeMap<String, String>) -> Result<Self> {
        let index: HashMap<&str, usize> = c
            .ground_points()
            .enumerate()
            .map(|(i, p)| (p.label.as_str(), i))
            .collect();
        for key in map.keys() {
            if !c.vertices.iter().any(|v| &v.label == key) {
                return Err(Error::InvalidReference(key.clone()));
            }
        }
        let mut parents = Vec::with_capacity(c.n());
        for v in &c.vertices {
            let p = map.get(&v.label).ok_or_else(|| Error::MissingParent(v.label.clone()))?;
            let idx = index.get(p.as_str()).ok_or_else(|| Error::InvalidReference(p.clone()))?;
            parents.push(*idx);
        }
        Forest::from_parents(&parents)
    }

    pub fn to_parent_map(&self, c: &Configuration) -> BTreeMap<String, String> {
        self.parent
            .iter()
            .enumerate()
            .map(|(i, &p)| (c.vertices[i].label.clone(), c.ground(p as usize).label.clone()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent_of(&self, vertex: usize) -> usize {
        self.parent[vertex] as usize
    }

    pub fn parents(&self) -> impl Iterator<Item = usize> + '_ {
        self.parent.iter().map(|&p| p as usize)
    }

    /// `(parent, child)` ground-index pairs; `|E(f)| = |γ|`.
    pub fn edges(&self, m: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent.iter().enumerate().map(move |(i, &p)| (p as usize, m + i))
    }
}

/// Checks totality, parents within η ∪ γ, and acyclicity.
///
/// A parent index outside the ground is an error, not `false`.
pub fn is_valid_forest(f: &Forest, c: &Configuration) -> Result<bool> {
    c.ensure_disjoint()?;
    if f.len() != c.n() {
        return Err(Error::Precondition(format!(
            "parent map covers {} vertices, configuration has {}",
            f.len(),
            c.n()
        )));
    }
    let (m, total) = (c.m(), c.len());
    if let Some(bad) = f.parents().find(|&p| p >= total) {
        return Err(Error::InvalidReference(format!("#{bad}")));
    }
    Ok((0..c.n()).all(|start| reaches_root(f, m, start)))
}

/// Label-level form of [`is_valid_forest`].
pub fn is_valid_parent_map(map: &BTreeMap<String, String>, c: &Configuration) -> Result<bool> {
    c.ensure_disjoint()?;
    is_valid_forest(&Forest::from_parent_map(c, map)?, c)
}

fn reaches_root(f: &Forest, m: usize, start: usize) -> bool {
    let mut cur = m + start;
    for _ in 0..=f.len() {
        if cur < m {
            return true;
        }
        cur = f.parent_of(cur - m);
    }
    false
}

/// ∏ ν over the forest's edges; 1 for the empty forest.
pub fn edge_product(f: &Forest, c: &Configuration, kernel: &EdgeKernel) -> Result<KernelValue> {
    let mut acc = KernelValue::one();
    for (p, child) in f.edges(c.m()) {
        acc = acc.mul(&kernel.eval(c.ground(p), c.ground(child))?);
    }
    Ok(acc)
}

/// `G(f) = h^{m+n} · ∏_{(x,y) ∈ E(f)} ν(x − y)`.
pub fn forest_weight(f: &Forest, c: &Configuration, h: &KernelValue, kernel: &EdgeKernel) -> Result<KernelValue> {
    if !is_valid_forest(f, c)? {
        return Err(Error::Precondition("not a valid rooted forest".into()));
    }
    Ok(h.pow(c.len() as u32).mul(&edge_product(f, c, kernel)?))
}
