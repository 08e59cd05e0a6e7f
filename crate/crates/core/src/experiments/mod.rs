//! Experiment harnesses: semi-supervised labelling on point clouds and the
//! averaged-versus-last-iterate resolvent benchmark.

pub mod bench;
pub mod generators;
pub mod manifold;

use crate::error::{Error, Result};

pub use bench::{bench_resolvent, BenchConfig, BenchReport, BenchRow, BenchTiming};
pub use generators::{manifold_points, planted_clusters, random_hypergraph, trial_rng, ManifoldKind};
pub use manifold::{bench_manifold, LabelRun, ManifoldConfig, ManifoldReport, ManifoldRow, Method};

/// Affine map sending the smallest entry to 0 and the largest to 1. A
/// constant vector maps to all zeros.
pub fn min_max_rescale(x: &[f64]) -> Vec<f64> {
    let (lo, hi) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if !(hi > lo) {
        return vec![0.0; x.len()];
    }
    x.iter().map(|v| (v - lo) / (hi - lo)).collect()
}

/// Area under the ROC curve: the probability that a random positive
/// outscores a random negative, ties counting one half.
pub fn auc(scores: &[f64], positive: &[bool]) -> Result<f64> {
    if scores.len() != positive.len() {
        return Err(Error::LengthMismatch {
            expected: scores.len(),
            got: positive.len(),
        });
    }
    if let Some(index) = scores.iter().position(|s| !s.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let n_pos = positive.iter().filter(|&&p| p).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::InvalidParameter("AUC needs both classes".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // sum over tie groups of positives x (negatives below + half the tied ones)
    let mut wins = 0.0;
    let mut neg_below = 0usize;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        let (mut pos, mut neg) = (0usize, 0usize);
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            if positive[order[j]] {
                pos += 1;
            } else {
                neg += 1;
            }
            j += 1;
        }
        wins += pos as f64 * (neg_below as f64 + 0.5 * neg as f64);
        neg_below += neg;
        i = j;
    }
    Ok(wins / (n_pos as f64 * n_neg as f64))
}

fn median(values: &mut [f64]) -> f64 {
    let finite: Vec<f64> = {
        values.sort_by(f64::total_cmp);
        values.iter().copied().filter(|v| !v.is_nan()).collect()
    };
    match finite.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => finite[n / 2],
        n => 0.5 * (finite[n / 2 - 1] + finite[n / 2]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_scores() {
        assert_eq!(auc(&[0.1, 0.2, 0.8, 0.9], &[false, false, true, true]).unwrap(), 1.0);
        assert_eq!(auc(&[0.1, 0.2, 0.8, 0.9], &[true, true, false, false]).unwrap(), 0.0);
    }

    #[test]
    fn ties_count_half() {
        assert_eq!(auc(&[0.5, 0.5], &[true, false]).unwrap(), 0.5);
        assert_eq!(auc(&[0.0, 0.5, 0.5, 1.0], &[false, true, false, true]).unwrap(), 0.875);
    }

    #[test]
    fn needs_both_classes() {
        assert!(auc(&[1.0, 2.0], &[true, true]).is_err());
    }

    #[test]
    fn rescale() {
        assert_eq!(min_max_rescale(&[-1.0, 0.0, 3.0]), vec![0.0, 0.25, 1.0]);
        assert_eq!(min_max_rescale(&[2.0, 2.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn medians() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&mut []).is_nan());
    }
}
