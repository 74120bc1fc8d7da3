//! Seeded random configurations with explicit rational kernels.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Configuration, EdgeKernel, ExplicitTable, KernelValue, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct RandomCase {
    pub configuration: Configuration,
    pub kernel: EdgeKernel,
    pub h: KernelValue,
}

fn rational(rng: &mut impl Rng, span: i64, max_den: i64) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-span..=span)), BigInt::from(rng.gen_range(1..=max_den)))
}

/// One case with `1 ≤ m`, `m + n ≤ max_total`. Labels are shuffled so the
/// ground order does not follow label order.
pub fn random_case(rng: &mut impl Rng, max_total: usize) -> RandomCase {
    let total = rng.gen_range(1..=max_total.max(1));
    let m = rng.gen_range(1..=total);
    let mut labels: Vec<String> = (0..total).map(|i| format!("p{i}")).collect();
    labels.shuffle(rng);
    let points: Vec<Point> = labels.iter().map(Point::new).collect();
    let mut table = ExplicitTable::new();
    for i in 0..total {
        for j in i + 1..total {
            table
                .insert(&labels[i], &labels[j], rational(rng, 6, 5))
                .expect("fresh pair");
        }
    }
    let configuration = Configuration::new(points[..m].to_vec(), points[m..].to_vec()).expect("distinct labels");
    RandomCase {
        configuration,
        kernel: EdgeKernel::Explicit(table),
        h: KernelValue::Exact(rational(rng, 4, 4)),
    }
}

pub fn corpus(seed: u64, trials: usize, max_total: usize) -> Vec<RandomCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| random_case(&mut rng, max_total)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_seeded() {
        assert_eq!(corpus(7, 20, 6), corpus(7, 20, 6));
        assert_ne!(corpus(7, 20, 6), corpus(8, 20, 6));
        for case in corpus(3, 50, 5) {
            assert!(case.configuration.m() >= 1 && case.configuration.len() <= 5);
        }
    }
}
