use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thors_core::classifiers::Dataset;
use thors_core::seed;

use crate::error::{HarnessError, Result};

/// Redraws allowed before a split that keeps losing a class is an error.
pub const MAX_SPLIT_ATTEMPTS: u64 = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct Split {
    pub train: Dataset,
    pub valid: Dataset,
    pub test: Dataset,
    /// Source row indices of each part.
    pub indices: [Vec<usize>; 3],
}

/// Part sizes for `n` rows: validation and test sizes are rounded, the
/// training set takes the remainder.
pub fn split_sizes(n: usize, fractions: [f64; 3]) -> [usize; 3] {
    let n_te = (n as f64 * fractions[2]).round() as usize;
    let n_v = ((n as f64 * fractions[1]).round() as usize).min(n - n_te);
    [n - n_v - n_te, n_v, n_te]
}

/// Shuffles rows with a seeded permutation and cuts it into
/// train/validation/test. Draws that leave a part without both classes
/// are repeated with derived seeds.
pub fn split(ds: &Dataset, fractions: [f64; 3], rng_seed: u64) -> Result<Split> {
    let sizes = split_sizes(ds.n_rows(), fractions);
    if sizes.iter().any(|&s| s < 2) {
        return Err(HarnessError::Split(format!(
            "{} rows give part sizes {sizes:?}",
            ds.n_rows()
        )));
    }
    let mut order: Vec<usize> = (0..ds.n_rows()).collect();
    for attempt in 0..MAX_SPLIT_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(rng_seed, attempt));
        order.sort_unstable();
        order.shuffle(&mut rng);
        let (tr, rest) = order.split_at(sizes[0]);
        let (va, te) = rest.split_at(sizes[1]);
        let parts = [tr, va, te].map(|ix| ds.subset(ix));
        if parts.iter().all(|p| {
            let (a, b) = p.class_counts();
            a > 0 && b > 0
        }) {
            let [train, valid, test] = parts;
            return Ok(Split {
                train,
                valid,
                test,
                indices: [tr.to_vec(), va.to_vec(), te.to_vec()],
            });
        }
    }
    Err(HarnessError::Split(format!(
        "no split with both classes in every part after {MAX_SPLIT_ATTEMPTS} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use thors_core::Class;

    #[test]
    fn benchmark_sizes() {
        let f = [0.4, 0.4, 0.2];
        assert_eq!(split_sizes(19_020, f), [7_608, 7_608, 3_804]);
        assert_eq!(split_sizes(60_000, f), [24_000, 24_000, 12_000]);
        assert_eq!(split_sizes(32_561, f), [13_025, 13_024, 6_512]);
    }

    fn toy(n: usize) -> Dataset {
        let labels = (0..n)
            .map(|i| {
                if i % 3 == 0 {
                    Class::Positive
                } else {
                    Class::Negative
                }
            })
            .collect();
        Dataset::unnamed((0..n).map(|i| i as f64).collect(), 1, labels).unwrap()
    }

    #[test]
    fn seeded_and_disjoint() {
        let ds = toy(100);
        let a = split(&ds, [0.4, 0.4, 0.2], 3).unwrap();
        assert_eq!(a, split(&ds, [0.4, 0.4, 0.2], 3).unwrap());
        let mut all: Vec<usize> = a.indices.concat();
        all.sort_unstable();
        assert_eq!(all, (0..100).collect::<Vec<_>>());
        assert_eq!(a.test.n_rows(), 20);
    }

    #[test]
    fn degenerate_inputs_fail() {
        assert!(split(&toy(3), [0.4, 0.4, 0.2], 0).is_err());
        // Two positives cannot cover three parts.
        let labels = (0..30)
            .map(|i| {
                if i < 2 {
                    Class::Positive
                } else {
                    Class::Negative
                }
            })
            .collect();
        let ds = Dataset::unnamed(vec![0.0; 30], 1, labels).unwrap();
        assert!(matches!(
            split(&ds, [0.4, 0.4, 0.2], 0),
            Err(HarnessError::Split(_))
        ));
    }
}
