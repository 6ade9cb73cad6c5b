//! Cost model and order-statistic threshold search.
//!
//! Classification rule: predict [`Class::Positive`] iff `score > threshold`.
//! Candidate thresholds are the distinct validation scores. For a candidate
//! `t`, `k0`/`k1` count the class-0/class-1 scores `<= t`, so the validation
//! cost is `(n0 - k0) * fp_cost + k1 * fn_cost`.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Class, CostMatrix, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LabeledScore {
    pub score: f64,
    pub label: Class,
}

impl LabeledScore {
    pub fn new(score: f64, label: Class) -> Self {
        LabeledScore { score, label }
    }
}

/// Validation scores sorted ascending (stable), with class counts.
#[derive(Clone, Debug)]
pub struct ValidationScores {
    sorted: Vec<LabeledScore>,
    /// `positives_upto[i]` = number of class-1 entries among `sorted[..i]`.
    positives_upto: Vec<usize>,
    n0: usize,
    n1: usize,
}

/// Below this length a comparison sort beats the radix passes.
const RADIX_MIN_LEN: usize = 1 << 16;
const RADIX_BITS: u32 = 16;

/// Maps a float to an integer with the same `total_cmp` order.
fn order_key(x: f64) -> u64 {
    let bits = x.to_bits();
    if bits >> 63 == 1 {
        !bits
    } else {
        bits | (1 << 63)
    }
}

/// Stable ascending sort in `total_cmp` order. Scores are finite, so this
/// agrees with numeric order (up to -0.0 < 0.0, which value comparisons
/// treat as equal). Large inputs use an LSD radix sort on `order_key`.
fn stable_sort_by_score(scores: &[LabeledScore]) -> Vec<LabeledScore> {
    if scores.len() < RADIX_MIN_LEN {
        let mut sorted = scores.to_vec();
        sorted.sort_by(|a, b| a.score.total_cmp(&b.score));
        return sorted;
    }
    const DIGITS: usize = 64_usize.div_ceil(RADIX_BITS as usize);
    let mask = (1u64 << RADIX_BITS) - 1;
    let mut counts = vec![0usize; DIGITS << RADIX_BITS];
    for s in scores {
        let key = order_key(s.score);
        for (d, hist) in counts.chunks_exact_mut(1 << RADIX_BITS).enumerate() {
            hist[((key >> (d as u32 * RADIX_BITS)) & mask) as usize] += 1;
        }
    }
    let mut cur = scores.to_vec();
    let mut next = cur.clone();
    for (d, hist) in counts.chunks_exact_mut(1 << RADIX_BITS).enumerate() {
        if hist.contains(&cur.len()) {
            continue;
        }
        let mut offset = 0;
        for c in hist.iter_mut() {
            let here = *c;
            *c = offset;
            offset += here;
        }
        let shift = d as u32 * RADIX_BITS;
        for s in &cur {
            let digit = ((order_key(s.score) >> shift) & mask) as usize;
            next[hist[digit]] = *s;
            hist[digit] += 1;
        }
        core::mem::swap(&mut cur, &mut next);
    }
    cur
}

/// Sorts the scores and counts classes. Both classes must be present and
/// every score finite.
pub fn build_validation(scores: &[LabeledScore]) -> Result<ValidationScores> {
    if let Some(index) = scores.iter().position(|s| !s.score.is_finite()) {
        return Err(Error::NonFiniteScore { index });
    }
    let sorted = stable_sort_by_score(scores);

    let mut positives_upto = Vec::with_capacity(sorted.len() + 1);
    let mut acc = 0usize;
    positives_upto.push(0);
    for s in &sorted {
        acc += usize::from(s.label.is_positive());
        positives_upto.push(acc);
    }
    let n1 = acc;
    let n0 = sorted.len() - n1;
    if n0 == 0 {
        return Err(Error::MissingClass(Class::Negative));
    }
    if n1 == 0 {
        return Err(Error::MissingClass(Class::Positive));
    }
    Ok(ValidationScores {
        sorted,
        positives_upto,
        n0,
        n1,
    })
}

impl ValidationScores {
    pub fn from_parts(scores: &[f64], labels: &[Class]) -> Result<Self> {
        if scores.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: scores.len(),
                found: labels.len(),
            });
        }
        let joined: Vec<LabeledScore> = scores
            .iter()
            .zip(labels)
            .map(|(&s, &l)| LabeledScore::new(s, l))
            .collect();
        build_validation(&joined)
    }

    pub fn sorted(&self) -> &[LabeledScore] {
        &self.sorted
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n_v(&self) -> usize {
        self.sorted.len()
    }

    pub fn pi0_hat(&self) -> f64 {
        self.n0 as f64 / self.n_v() as f64
    }

    pub fn pi1_hat(&self) -> f64 {
        self.n1 as f64 / self.n_v() as f64
    }

    pub fn min_score(&self) -> f64 {
        self.sorted[0].score
    }

    pub fn max_score(&self) -> f64 {
        self.sorted[self.sorted.len() - 1].score
    }

    /// `(k0, k1)`: class-0 and class-1 scores `<= threshold`, by value.
    pub fn counts_at(&self, threshold: f64) -> (usize, usize) {
        let below = self.sorted.partition_point(|s| s.score <= threshold);
        let k1 = self.positives_upto[below];
        (below - k1, k1)
    }

    /// Score of the `k`-th order statistic, 1-based.
    pub fn order_statistic(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.n_v() {
            return Err(Error::RankOutOfRange {
                rank: k,
                len: self.n_v(),
            });
        }
        Ok(self.sorted[k - 1].score)
    }

    fn cost_from_counts(&self, k0: usize, k1: usize, cm: &CostMatrix) -> f64 {
        (self.n0 - k0) as f64 * cm.fp_cost() + k1 as f64 * cm.fn_cost()
    }
}

/// Options for [`select_threshold_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SelectOptions {
    /// Also consider the rule that classifies everything positive
    /// (threshold `-inf`, rank 0). Off by default.
    pub allow_all_positive: bool,
}

/// Outcome of the threshold search.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThresholdSelection {
    pub c_star: f64,
    /// Number of validation scores `<= c_star`; 0 only for the all-positive rule.
    pub k_star: usize,
    pub k0: usize,
    pub k1: usize,
    pub n0: usize,
    pub n1: usize,
    /// `pi1_hat * k1 / n1 - beta * pi0_hat * k0 / n0`.
    pub objective: f64,
    pub empirical_fpr: f64,
    pub empirical_fnr: f64,
    /// Total validation cost, `(n0 - k0) * fp_cost + k1 * fn_cost`.
    pub validation_cost: f64,
    pub empirical_cost_per_sample: f64,
}

impl ThresholdSelection {
    fn from_counts(
        vs: &ValidationScores,
        cm: &CostMatrix,
        c_star: f64,
        k0: usize,
        k1: usize,
    ) -> Self {
        let n_v = vs.n_v() as f64;
        let cost = vs.cost_from_counts(k0, k1, cm);
        ThresholdSelection {
            c_star,
            k_star: k0 + k1,
            k0,
            k1,
            n0: vs.n0,
            n1: vs.n1,
            objective: eq5(vs, cm.beta(), k0, k1),
            empirical_fpr: (vs.n0 - k0) as f64 / vs.n0 as f64,
            empirical_fnr: k1 as f64 / vs.n1 as f64,
            validation_cost: cost,
            empirical_cost_per_sample: cost / n_v,
        }
    }
}

fn eq5(vs: &ValidationScores, beta: f64, k0: usize, k1: usize) -> f64 {
    vs.pi1_hat() * k1 as f64 / vs.n1 as f64 - beta * vs.pi0_hat() * k0 as f64 / vs.n0 as f64
}

/// Picks the validation order statistic minimizing the estimated cost.
pub fn select_threshold(vs: &ValidationScores, cm: &CostMatrix) -> ThresholdSelection {
    select_threshold_with(vs, cm, SelectOptions::default())
}

/// Single left-to-right scan over the sorted scores. Runs of equal scores
/// are one candidate, evaluated at the end of the run. The scan key is the
/// validation cost, which is `n_v * fn_cost * (beta * pi0_hat + objective)`,
/// so ranking by it ranks by the objective. Ties keep the smallest rank.
pub fn select_threshold_with(
    vs: &ValidationScores,
    cm: &CostMatrix,
    opts: SelectOptions,
) -> ThresholdSelection {
    let sorted = &vs.sorted;
    let mut best_cost = f64::INFINITY;
    let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
    if opts.allow_all_positive {
        best_cost = vs.cost_from_counts(0, 0, cm);
    }

    let (mut l0, mut l1) = (0usize, 0usize);
    for (i, s) in sorted.iter().enumerate() {
        if s.label.is_positive() {
            l1 += 1;
        } else {
            l0 += 1;
        }
        let run_ends = sorted.get(i + 1).is_none_or(|next| next.score != s.score);
        if !run_ends {
            continue;
        }
        let cost = vs.cost_from_counts(l0, l1, cm);
        if cost < best_cost {
            best_cost = cost;
            best = (s.score, l0, l1);
        }
    }
    let (c_star, k0, k1) = best;
    ThresholdSelection::from_counts(vs, cm, c_star, k0, k1)
}

/// Objective value at rank `k` (1-based), with `k0`/`k1` taken by value at
/// the `k`-th order statistic.
pub fn objective(k: usize, vs: &ValidationScores, cm: &CostMatrix) -> Result<f64> {
    let t = vs.order_statistic(k)?;
    let (k0, k1) = vs.counts_at(t);
    Ok(eq5(vs, cm.beta(), k0, k1))
}

/// Validation cost of classifying with `threshold`, counted directly.
pub fn empirical_cost(vs: &ValidationScores, threshold: f64, cm: &CostMatrix) -> Result<f64> {
    if threshold.is_nan() {
        return Err(Error::Domain("threshold is NaN"));
    }
    let (k0, k1) = vs.counts_at(threshold);
    Ok(vs.cost_from_counts(k0, k1, cm))
}

/// `Positive` iff `score > threshold`.
#[inline]
pub fn classify(score: f64, threshold: f64) -> Class {
    if score > threshold {
        Class::Positive
    } else {
        Class::Negative
    }
}

/// Realized cost of thresholding `test`.
pub fn test_cost(test: &[LabeledScore], threshold: f64, cm: &CostMatrix) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    let (mut fp, mut fnc) = (0usize, 0usize);
    for s in test {
        match (s.label, classify(s.score, threshold)) {
            (Class::Negative, Class::Positive) => fp += 1,
            (Class::Positive, Class::Negative) => fnc += 1,
            _ => {}
        }
    }
    Ok(fp as f64 * cm.fp_cost() + fnc as f64 * cm.fn_cost())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn ls(score: f64, bit: u8) -> LabeledScore {
        LabeledScore::new(score, Class::from_bit(bit).unwrap())
    }

    fn separated() -> ValidationScores {
        build_validation(&[ls(0.1, 0), ls(0.2, 0), ls(0.8, 1), ls(0.9, 1)]).unwrap()
    }

    /// Direct confusion-matrix costing at every distinct score, from the raw
    /// unsorted input.
    fn brute_force_min(scores: &[LabeledScore], cm: &CostMatrix) -> f64 {
        let mut best = f64::INFINITY;
        for cand in scores {
            let t = cand.score;
            let (mut fp, mut fnc) = (0usize, 0usize);
            for s in scores {
                if s.label == Class::Negative && s.score > t {
                    fp += 1;
                }
                if s.label == Class::Positive && s.score <= t {
                    fnc += 1;
                }
            }
            let c = fp as f64 * cm.fp_cost() + fnc as f64 * cm.fn_cost();
            if c < best {
                best = c;
            }
        }
        best
    }

    #[test]
    fn two_point_case() {
        let vs = build_validation(&[ls(0.1, 0), ls(0.9, 1)]).unwrap();
        assert_eq!((vs.n0(), vs.n1()), (1, 1));
        assert_eq!(vs.pi0_hat(), 0.5);
    }

    #[test]
    fn sorts_ascending() {
        let vs = build_validation(&[ls(0.9, 1), ls(0.1, 0), ls(0.5, 0)]).unwrap();
        let order: Vec<f64> = vs.sorted().iter().map(|s| s.score).collect();
        assert_eq!(order, vec![0.1, 0.5, 0.9]);
        assert_eq!((vs.n0(), vs.n1()), (2, 1));
    }

    #[test]
    fn sort_is_stable() {
        let vs = build_validation(&[ls(0.5, 1), ls(0.5, 0), ls(0.1, 0)]).unwrap();
        assert_eq!(vs.sorted()[1].label, Class::Positive);
        assert_eq!(vs.sorted()[2].label, Class::Negative);
    }

    #[test]
    fn truck_sized_priors() {
        let mut v = Vec::with_capacity(60_000);
        for i in 0..60_000 {
            v.push(ls(i as f64, u8::from(i % 60 == 0)));
        }
        let vs = build_validation(&v).unwrap();
        assert_eq!(vs.n1(), 1_000);
        assert!((vs.pi1_hat() - 1.0 / 60.0).abs() < 1e-15);
        assert_eq!(vs.pi0_hat() + vs.pi1_hat(), 1.0);
    }

    #[test]
    fn rejects_missing_class_and_nan() {
        assert_eq!(
            build_validation(&[ls(0.1, 0), ls(0.2, 0)]).unwrap_err(),
            Error::MissingClass(Class::Positive)
        );
        assert_eq!(
            build_validation(&[ls(0.1, 1)]).unwrap_err(),
            Error::MissingClass(Class::Negative)
        );
        assert_eq!(
            build_validation(&[ls(0.1, 0), ls(f64::NAN, 1)]).unwrap_err(),
            Error::NonFiniteScore { index: 1 }
        );
        assert!(build_validation(&[ls(0.1, 0), ls(f64::INFINITY, 1)]).is_err());
    }

    #[test]
    fn separated_selection() {
        let vs = separated();
        let cm = CostMatrix::new(2.0, 1.0).unwrap();
        let sel = select_threshold(&vs, &cm);
        assert_eq!(sel.k_star, 2);
        assert_eq!(sel.c_star, 0.2);
        assert_eq!((sel.k0, sel.k1), (2, 0));
        assert_eq!(sel.objective, -0.25);
        assert_eq!(sel.validation_cost, 0.0);
        assert_eq!(empirical_cost(&vs, sel.c_star, &cm).unwrap(), 0.0);
    }

    #[test]
    fn truck_costs_beta() {
        let cm = CostMatrix::new(500.0, 1.0).unwrap();
        assert_eq!(cm.beta(), 1.0 / 500.0);
    }

    #[test]
    fn objective_hand_values() {
        let vs = separated();
        let cm = CostMatrix::new(2.0, 1.0).unwrap();
        assert_eq!(objective(1, &vs, &cm).unwrap(), -0.125);
        assert_eq!(objective(2, &vs, &cm).unwrap(), -0.25);
        assert_eq!(objective(3, &vs, &cm).unwrap(), 0.0);
        // k = n_v: (n1 - beta n0) / n_v
        assert_eq!(objective(4, &vs, &cm).unwrap(), (2.0 - 0.5 * 2.0) / 4.0);
        assert_eq!(
            objective(0, &vs, &cm).unwrap_err(),
            Error::RankOutOfRange { rank: 0, len: 4 }
        );
        assert!(objective(5, &vs, &cm).is_err());
    }

    #[test]
    fn objective_without_misses_is_non_positive() {
        let vs = separated();
        let cm = CostMatrix::new(3.0, 1.0).unwrap();
        for k in 1..=2 {
            let o = objective(k, &vs, &cm).unwrap();
            let (k0, _) = vs.counts_at(vs.order_statistic(k).unwrap());
            assert_eq!(o, -cm.beta() * k0 as f64 / vs.n_v() as f64);
            assert!(o <= 0.0);
        }
    }

    #[test]
    fn empirical_cost_corners() {
        let vs = separated();
        let cm = CostMatrix::new(7.0, 3.0).unwrap();
        assert_eq!(empirical_cost(&vs, 0.5, &cm).unwrap(), 0.0);
        assert_eq!(empirical_cost(&vs, 10.0, &cm).unwrap(), 2.0 * 7.0);
        assert_eq!(
            empirical_cost(&vs, f64::NEG_INFINITY, &cm).unwrap(),
            2.0 * 3.0
        );
        assert!(empirical_cost(&vs, f64::NAN, &cm).is_err());
    }

    #[test]
    fn classify_boundary() {
        assert_eq!(classify(0.5, 0.5), Class::Negative);
        assert_eq!(classify(0.5 + f64::EPSILON, 0.5), Class::Positive);
        assert_eq!(classify(-1e300, f64::NEG_INFINITY), Class::Positive);
    }

    #[test]
    fn test_cost_examples() {
        let cm = CostMatrix::new(100.0, 10.0).unwrap();
        let perfect = [ls(0.1, 0), ls(0.9, 1)];
        assert_eq!(test_cost(&perfect, 0.5, &cm).unwrap(), 0.0);
        // one FN (0.3, 1) and two FP (0.6, 0), (0.7, 0)
        let mixed = [ls(0.3, 1), ls(0.6, 0), ls(0.7, 0), ls(0.9, 1), ls(0.1, 0)];
        assert_eq!(test_cost(&mixed, 0.5, &cm).unwrap(), 120.0);
        assert_eq!(
            test_cost(&mixed, f64::NEG_INFINITY, &cm).unwrap(),
            3.0 * 10.0
        );
        assert_eq!(test_cost(&[], 0.5, &cm).unwrap_err(), Error::EmptyTestSet);
    }

    #[test]
    fn all_positive_sentinel_is_opt_in() {
        // Cheap false positives: flagging everything beats any order statistic.
        let vs = build_validation(&[ls(0.1, 1), ls(0.2, 0), ls(0.3, 1)]).unwrap();
        let cm = CostMatrix::new(10.0, 1.0).unwrap();
        let default = select_threshold(&vs, &cm);
        assert_eq!(default.k_star, 2);
        assert_eq!(default.validation_cost, 10.0);
        let opted = select_threshold_with(
            &vs,
            &cm,
            SelectOptions {
                allow_all_positive: true,
            },
        );
        assert_eq!(opted.k_star, 0);
        assert_eq!(opted.c_star, f64::NEG_INFINITY);
        assert_eq!(opted.validation_cost, 1.0);
    }

    #[test]
    fn ties_collapse_to_value_counts() {
        let vs = build_validation(&[ls(0.5, 0), ls(0.5, 1), ls(0.5, 0), ls(0.9, 1)]).unwrap();
        let cm = CostMatrix::new(1.0, 0.9).unwrap();
        let sel = select_threshold(&vs, &cm);
        assert_eq!((sel.k0, sel.k1), vs.counts_at(sel.c_star));
        assert_eq!(sel.k_star, 3);
    }

    #[test]
    fn objective_ties_prefer_lowest_threshold() {
        let vs = build_validation(&[ls(0.1, 0), ls(0.15, 0), ls(0.2, 1), ls(0.3, 1)]).unwrap();
        let cm = CostMatrix::new(1.0, 1.0).unwrap();
        let sel = select_threshold(&vs, &cm);
        assert_eq!(sel.c_star, 0.15);
        let flat = build_validation(&[ls(0.1, 1), ls(0.2, 0), ls(0.3, 1), ls(0.4, 0)]).unwrap();
        let sel = select_threshold(&flat, &cm);
        // costs at 0.1, 0.2, 0.3, 0.4 are 3, 2, 3, 2; the lower threshold wins.
        assert_eq!(sel.c_star, 0.2);
        assert_eq!(sel.validation_cost, 2.0);
    }

    fn instance() -> impl Strategy<Value = (Vec<LabeledScore>, CostMatrix)> {
        (2usize..60, 0.01f64..0.99).prop_flat_map(|(n, beta)| {
            (
                proptest::collection::vec((0u8..20, any::<bool>()), n),
                Just(beta),
            )
                .prop_filter_map("both classes", move |(raw, beta)| {
                    let v: Vec<LabeledScore> = raw
                        .into_iter()
                        .map(|(s, p)| ls(f64::from(s) / 4.0, u8::from(p)))
                        .collect();
                    let has0 = v.iter().any(|s| s.label == Class::Negative);
                    let has1 = v.iter().any(|s| s.label == Class::Positive);
                    (has0 && has1).then(|| (v, CostMatrix::new(1.0, beta).unwrap()))
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn radix_sort_matches_comparison_sort(
            raw in proptest::collection::vec((-4i32..4, any::<f64>(), any::<bool>()), 0..140_000)
        ) {
            // Mix of heavy ties, signed zeros and arbitrary finite values.
            let scores: Vec<LabeledScore> = raw
                .iter()
                .map(|&(t, x, y)| {
                    let v = if t == 3 && x.is_finite() { x } else if t == 2 { -0.0 } else { f64::from(t) };
                    LabeledScore::new(v, if y { Class::Positive } else { Class::Negative })
                })
                .collect();
            let mut expected = scores.clone();
            expected.sort_by(|a, b| a.score.total_cmp(&b.score));
            let got = stable_sort_by_score(&scores);
            prop_assert_eq!(got.len(), expected.len());
            for (g, e) in got.iter().zip(&expected) {
                prop_assert_eq!(g.score.to_bits(), e.score.to_bits());
                prop_assert_eq!(g.label, e.label);
            }
        }
    }

    proptest! {
        #[test]
        fn matches_exhaustive_argmin((scores, cm) in instance()) {
            let vs = build_validation(&scores).unwrap();
            let sel = select_threshold(&vs, &cm);
            prop_assert_eq!(sel.validation_cost, brute_force_min(&scores, &cm));
            prop_assert_eq!(empirical_cost(&vs, sel.c_star, &cm).unwrap(), sel.validation_cost);
            prop_assert_eq!((sel.k0, sel.k1), vs.counts_at(sel.c_star));
            prop_assert_eq!(sel.k0 + sel.k1, sel.k_star);
            prop_assert!((0.0..=1.0).contains(&sel.empirical_fpr));
            prop_assert!((0.0..=1.0).contains(&sel.empirical_fnr));
        }

        #[test]
        fn monotone_transform_invariance((scores, cm) in instance()) {
            let g = |x: f64| libm::exp(3.0 * x) - 2.0;
            let mapped: Vec<LabeledScore> =
                scores.iter().map(|s| LabeledScore::new(g(s.score), s.label)).collect();
            let a = select_threshold(&build_validation(&scores).unwrap(), &cm);
            let b = select_threshold(&build_validation(&mapped).unwrap(), &cm);
            prop_assert_eq!((a.k_star, a.k0, a.k1), (b.k_star, b.k0, b.k1));
            prop_assert_eq!(a.objective, b.objective);
            prop_assert_eq!(a.validation_cost, b.validation_cost);
            prop_assert_eq!(b.c_star, g(a.c_star));
        }

        #[test]
        fn objective_identity((scores, cm) in instance()) {
            let vs = build_validation(&scores).unwrap();
            for k in 1..=vs.n_v() {
                let o = objective(k, &vs, &cm).unwrap();
                let (k0, k1) = vs.counts_at(vs.order_statistic(k).unwrap());
                let direct = (k1 as f64 - cm.beta() * k0 as f64) / vs.n_v() as f64;
                prop_assert!((o - direct).abs() <= 1e-12 * (1.0 + cm.beta()));
                // cost = n_v * A * (beta * pi0_hat + objective)
                let via_eq = vs.n_v() as f64 * cm.fn_cost() * (cm.beta() * vs.pi0_hat() + o);
                let counted = empirical_cost(&vs, vs.order_statistic(k).unwrap(), &cm).unwrap();
                prop_assert!((via_eq - counted).abs() <= 1e-9 * counted.abs().max(1.0));
            }
        }

        #[test]
        fn duplicating_a_score_keeps_optimum((scores, cm) in instance(), pick in any::<prop::sample::Index>()) {
            let mut dup = scores.clone();
            let extra = scores[pick.index(scores.len())];
            dup.push(extra);
            let vs = build_validation(&dup).unwrap();
            let sel = select_threshold(&vs, &cm);
            prop_assert_eq!(sel.validation_cost, brute_force_min(&dup, &cm));
        }
    }
}
