//! Brute-force generation of all rooted forests on a configuration.
//!
//! Two generators live here. [`enumerate_by_parent_filter`] scans every
//! parent map with no self-loops and keeps the acyclic ones; it is the
//! oracle. [`enumerate_by_peeling`] detaches the lowest root, chooses the set
//! of its children, promotes them to roots and recurses; it backs
//! [`enumerate_forests`].

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{edge_product, Configuration, EdgeKernel, Forest, KernelValue, NumericMode};
use crate::Limits;

/// All forests of a configuration, in lexicographic order of parent vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestSet {
    pub configuration: Configuration,
    pub forests: Vec<Forest>,
}

impl ForestSet {
    pub fn len(&self) -> usize {
        self.forests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forests.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Forest> {
        self.forests.iter()
    }
}

fn check(c: &Configuration, limit: usize) -> Result<()> {
    c.ensure_disjoint()?;
    c.ensure_size("enumeration", limit)
}

pub fn enumerate_forests(c: &Configuration) -> Result<ForestSet> {
    enumerate_forests_with(c, Limits::from_env().enumeration)
}

pub fn enumerate_forests_with(c: &Configuration, limit: usize) -> Result<ForestSet> {
    let mut forests = enumerate_by_peeling(c, limit)?;
    forests.sort_unstable();
    Ok(ForestSet {
        configuration: c.clone(),
        forests,
    })
}

/// Subsets of `mask` by increasing cardinality, then lexicographically by
/// their sorted element lists. The empty set comes first.
pub(crate) fn ordered_submasks(mask: u32) -> Vec<u32> {
    let mut subs = Vec::with_capacity(1 << mask.count_ones());
    let mut s = mask;
    loop {
        subs.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & mask;
    }
    subs.sort_by_key(|&s| (s.count_ones(), bits(s)));
    subs
}

fn bits(mut s: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(s.count_ones() as usize);
    while s != 0 {
        out.push(s.trailing_zeros());
        s &= s - 1;
    }
    out
}

/// Forests in generation order of the root-peeling recursion.
pub fn enumerate_by_peeling(c: &Configuration, limit: usize) -> Result<Vec<Forest>> {
    check(c, limit)?;
    let m = c.m();
    let roots = low_mask(m);
    let vertices = low_mask(c.len()) & !roots;
    let mut parent = vec![0u8; c.n()];
    let mut out = Vec::new();
    peel(m, roots, vertices, &mut parent, &mut out);
    Ok(out)
}

fn low_mask(k: usize) -> u32 {
    if k >= 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

fn peel(m: usize, roots: u32, vertices: u32, parent: &mut [u8], out: &mut Vec<Forest>) {
    if roots == 0 {
        if vertices == 0 {
            out.push(Forest::from_raw(parent.to_vec().into_boxed_slice()));
        }
        return;
    }
    let x = roots.trailing_zeros();
    let rest = roots & !(1 << x);
    for xi in ordered_submasks(vertices) {
        for y in bits(xi) {
            parent[y as usize - m] = x as u8;
        }
        peel(m, rest | xi, vertices & !xi, parent, out);
    }
}

/// Every self-loop-free parent map, filtered by path-to-root reachability.
/// Output is already in lexicographic order.
pub fn enumerate_by_parent_filter(c: &Configuration, limit: usize) -> Result<Vec<Forest>> {
    check(c, limit)?;
    let mut out = Vec::new();
    for_each_parent_map(c.m(), c.n(), |parents| {
        out.push(Forest::from_raw(parents.to_vec().into_boxed_slice()));
    });
    Ok(out)
}

/// `|𝔉_{η;γ}|` by exhaustive parent-map filtering.
pub fn brute_force_count(c: &Configuration) -> Result<BigUint> {
    brute_force_count_with(c, Limits::from_env().enumeration)
}

pub fn brute_force_count_with(c: &Configuration, limit: usize) -> Result<BigUint> {
    check(c, limit)?;
    let mut count: u64 = 0;
    for_each_parent_map(c.m(), c.n(), |_| count += 1);
    Ok(BigUint::from(count))
}

/// Odometer over the `(m + n − 1)^n` candidate maps, calling `visit` on the
/// acyclic ones. Vertex 0 is the most significant digit.
fn for_each_parent_map(m: usize, n: usize, mut visit: impl FnMut(&[u8])) {
    let total = m + n;
    if n == 0 {
        visit(&[]);
        return;
    }
    if total < 2 {
        return;
    }
    let choices: Vec<Vec<u8>> = (0..n)
        .map(|i| (0..total).filter(|&g| g != m + i).map(|g| g as u8).collect())
        .collect();
    let mut digit = vec![0usize; n];
    let mut parent: Vec<u8> = choices.iter().map(|c| c[0]).collect();
    loop {
        if acyclic(&parent, m) {
            visit(&parent);
        }
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            digit[i] += 1;
            if digit[i] < choices[i].len() {
                parent[i] = choices[i][digit[i]];
                break;
            }
            digit[i] = 0;
            parent[i] = choices[i][0];
        }
    }
}

fn acyclic(parent: &[u8], m: usize) -> bool {
    let n = parent.len();
    (0..n).all(|v| {
        let mut cur = m + v;
        for _ in 0..=n {
            if cur < m {
                return true;
            }
            cur = parent[cur - m] as usize;
        }
        false
    })
}

/// Both sides of the root-peeling identity for a given pivot.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub pivot: String,
    pub lhs: KernelValue,
    pub rhs: KernelValue,
    pub holds: bool,
}

/// Checks
/// `Σ_{f ∈ 𝔉(η;γ)} ∏ν = Σ_{ξ ⊆ γ} ∏_{y ∈ ξ} ν(x − y) · Σ_{f ∈ 𝔉(η∖x ∪ ξ; γ∖ξ)} ∏ν`
/// with both sides computed by enumeration.
pub fn verify_identity(c: &Configuration, pivot: &str, kernel: &EdgeKernel) -> Result<IdentityReport> {
    verify_identity_with(c, pivot, kernel, Limits::from_env().enumeration)
}

pub fn verify_identity_with(c: &Configuration, pivot: &str, kernel: &EdgeKernel, limit: usize) -> Result<IdentityReport> {
    let x = c.root_index(pivot).ok_or_else(|| Error::NotARoot(pivot.to_string()))?;
    if kernel.mode() != NumericMode::Exact {
        return Err(Error::Mode("the identity check needs an exact-valued kernel".into()));
    }
    let lhs = enumerated_sum(c, kernel, limit)?;

    let (m, n) = (c.m(), c.n());
    let others: Vec<usize> = (0..m).filter(|&i| i != x).collect();
    let mut rhs = exact_zero();
    for xi in ordered_submasks(low_mask(n)) {
        let chosen: Vec<usize> = bits(xi).into_iter().map(|b| m + b as usize).collect();
        let mut factor = KernelValue::one();
        for &y in &chosen {
            factor = factor.mul(&kernel.eval(c.ground(x), c.ground(y))?);
        }
        let mut roots = others.clone();
        roots.extend(&chosen);
        let vertices: Vec<usize> = (0..n).filter(|b| xi & (1 << b) == 0).map(|b| m + b).collect();
        let reduced = c.restrict(&roots, &vertices);
        rhs = rhs.add(&factor.mul(&enumerated_sum(&reduced, kernel, limit)?));
    }
    Ok(IdentityReport {
        pivot: pivot.to_string(),
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

fn exact_zero() -> KernelValue {
    KernelValue::Exact(BigRational::zero())
}

fn enumerated_sum(c: &Configuration, kernel: &EdgeKernel, limit: usize) -> Result<KernelValue> {
    enumerate_by_parent_filter(c, limit)?
        .iter()
        .try_fold(exact_zero(), |acc, f| Ok(acc.add(&edge_product(f, c, kernel)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ExplicitTable;
    use std::collections::BTreeSet;

    fn labels(c: &Configuration, fs: &[Forest]) -> Vec<Vec<(String, String)>> {
        fs.iter().map(|f| f.to_parent_map(c).into_iter().collect()).collect()
    }

    #[test]
    fn isolated_roots() {
        let c = Configuration::from_labels(&["a", "b"], &[]).unwrap();
        let set = enumerate_forests(&c).unwrap();
        assert_eq!(set.forests, vec![Forest::empty()]);
    }

    #[test]
    fn two_roots_one_vertex() {
        let c = Configuration::from_labels(&["a", "b"], &["c"]).unwrap();
        let set = enumerate_forests(&c).unwrap();
        let expected = vec![
            vec![("c".to_string(), "a".to_string())],
            vec![("c".to_string(), "b".to_string())],
        ];
        assert_eq!(labels(&c, &set.forests), expected);
    }

    #[test]
    fn two_roots_two_vertices() {
        let c = Configuration::from_labels(&["a", "b"], &["c", "d"]).unwrap();
        let set = enumerate_forests(&c).unwrap();
        assert_eq!(set.len(), 8);
        // 3 x 3 candidate maps minus the 2-cycle c <-> d
        let cyc = Forest::from_parents(&[3, 2]).unwrap();
        assert!(!set.forests.contains(&cyc));
        assert_eq!(brute_force_count(&c).unwrap(), BigUint::from(8u32));
    }

    #[test]
    fn no_roots() {
        let empty = Configuration::from_labels::<&str>(&[], &[]).unwrap();
        assert_eq!(enumerate_forests(&empty).unwrap().len(), 1);
        let c = Configuration::from_labels(&[], &["c", "d"]).unwrap();
        assert_eq!(enumerate_forests(&c).unwrap().len(), 0);
        assert_eq!(brute_force_count(&c).unwrap(), BigUint::zero());
        let one = Configuration::from_labels(&[], &["c"]).unwrap();
        assert_eq!(brute_force_count(&one).unwrap(), BigUint::zero());
    }

    #[test]
    fn brute_force_examples() {
        let count = |m, n| brute_force_count(&Configuration::anonymous(m, n)).unwrap();
        assert_eq!(count(1, 3), BigUint::from(16u32));
        assert_eq!(count(3, 0), BigUint::from(1u32));
        assert_eq!(count(2, 2), BigUint::from(8u32));
    }

    #[test]
    fn limit_enforced() {
        let c = Configuration::anonymous(5, 5);
        assert!(matches!(
            enumerate_forests_with(&c, 9),
            Err(Error::ResourceLimit { limit: 9, size: 10, .. })
        ));
        assert!(brute_force_count_with(&c, 9).is_err());
    }

    #[test]
    fn submask_order() {
        assert_eq!(ordered_submasks(0b111), vec![0, 1, 2, 4, 3, 5, 6, 7]);
        assert_eq!(ordered_submasks(0b1010), vec![0, 2, 8, 10]);
    }

    #[test]
    fn generators_agree_as_sets() {
        for total in 1..=7 {
            for m in 1..=total {
                let c = Configuration::anonymous(m, total - m);
                let oracle = enumerate_by_parent_filter(&c, 9).unwrap();
                let peeled = enumerate_by_peeling(&c, 9).unwrap();
                let a: BTreeSet<_> = oracle.iter().cloned().collect();
                let b: BTreeSet<_> = peeled.iter().cloned().collect();
                assert_eq!(a.len(), oracle.len(), "oracle duplicates at m={m}");
                assert_eq!(b.len(), peeled.len(), "peeling duplicates at m={m}");
                assert_eq!(a, b, "m={m} n={}", total - m);
                assert_eq!(enumerate_forests(&c).unwrap().forests, oracle);
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let c = Configuration::anonymous(2, 4);
        assert_eq!(enumerate_forests(&c).unwrap(), enumerate_forests(&c).unwrap());
    }

    #[test]
    fn identity_examples() {
        let c = Configuration::from_labels(&["a"], &[]).unwrap();
        let r = verify_identity(&c, "a", &EdgeKernel::unit()).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, KernelValue::one());

        let c = Configuration::from_labels(&["a"], &["c"]).unwrap();
        let nu = EdgeKernel::Explicit(ExplicitTable::new().with("a", "c", KernelValue::integer(2)).unwrap());
        let r = verify_identity(&c, "a", &nu).unwrap();
        assert!(r.holds);
        assert_eq!(r.rhs, KernelValue::integer(2));

        let c = Configuration::from_labels(&["a", "b"], &["c", "d"]).unwrap();
        let r = verify_identity(&c, "a", &EdgeKernel::unit()).unwrap();
        assert_eq!((r.lhs.clone(), r.holds), (KernelValue::integer(8), true));
    }

    #[test]
    fn identity_rejects_non_root_pivot() {
        let c = Configuration::from_labels(&["a"], &["c"]).unwrap();
        assert_eq!(
            verify_identity(&c, "c", &EdgeKernel::unit()).unwrap_err(),
            Error::NotARoot("c".into())
        );
    }
}
