//! Scoring decompositions against ground truth and describing indicator
//! gap distributions.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use crate::bench::GroupingTruth;
use crate::error::Error;
use crate::grouping::DecompositionResult;
use crate::Result;

/// Counts of correctly placed variables plus the all-or-nothing flag.
///
/// A truly separable variable counts as captured only if it was reported
/// separable; a truly nonseparable variable only if it was reported inside
/// some group. `exact` demands the reported groups equal the truth groups as
/// sets of sets and the separable sets match.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccuracyReport {
    /// Truly separable variables reported separable.
    pub captured_sep_vars: usize,
    /// Truly nonseparable variables reported inside some group.
    pub captured_nonsep_vars: usize,
    /// Number of groups the decomposition formed.
    pub formed_nonsep_groups: usize,
    /// Whether the partition matches the truth exactly.
    pub exact: bool,
}

/// Scores a decomposition against the generator's ground truth.
pub fn score(result: &DecompositionResult, truth: &GroupingTruth) -> Result<AccuracyReport> {
    if result.n != truth.n {
        return Err(Error::DimensionMismatch {
            expected: truth.n,
            got: result.n,
        });
    }
    let reported_grouped: BTreeSet<usize> = result
        .nonsep_groups
        .iter()
        .flat_map(|g| g.iter().copied())
        .collect();
    let truth_grouped: BTreeSet<usize> = truth
        .nonsep_groups
        .iter()
        .flat_map(|g| g.iter().copied())
        .collect();

    let captured_sep_vars = truth.sep_vars.intersection(&result.sep_vars).count();
    let captured_nonsep_vars = truth_grouped.intersection(&reported_grouped).count();

    let result_sets: BTreeSet<&BTreeSet<usize>> = result.nonsep_groups.iter().collect();
    let truth_sets: BTreeSet<&BTreeSet<usize>> = truth.nonsep_groups.iter().collect();
    let exact = result_sets == truth_sets && result.sep_vars == truth.sep_vars;

    Ok(AccuracyReport {
        captured_sep_vars,
        captured_nonsep_vars,
        formed_nonsep_groups: result.nonsep_groups.len(),
        exact,
    })
}

/// Description of the sorted indicator array and its dominant gap.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionDump {
    /// Sorted indicators, ascending.
    pub z: Vec<f64>,
    /// Adjacent quotient differences (`z[k+1]/z[k]`, zero-masked).
    pub v: Vec<f64>,
    /// Slot index of the gap: the gap lies between `z[gap_index]` and
    /// `z[gap_index + 1]`.
    pub gap_index: usize,
    /// Dominance of the gap: its quotient over the largest remaining
    /// quotient. Infinite when the gap sits at the zero-to-nonzero
    /// transition or no other quotient is defined.
    pub gap_ratio: f64,
}

/// Locates the threshold gap in a sorted indicator array.
///
/// `z` and `v` must come from the adaptive threshold build, and `eps` is the
/// scalar threshold it selected; the gap is the slot where `z` passes `eps`.
/// With a zero threshold that is the zero-to-nonzero transition, whose
/// quotient is taken as infinite.
pub fn dump_distribution(z: &[f64], v: &[f64], eps: f64) -> Result<DistributionDump> {
    if z.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "distribution needs at least two indicators, got {}",
            z.len()
        )));
    }
    if v.len() != z.len() - 1 {
        return Err(Error::DimensionMismatch {
            expected: z.len() - 1,
            got: v.len(),
        });
    }
    if z.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter(
            "indicator array must be ascending".into(),
        ));
    }
    if eps.is_nan() {
        return Err(Error::InvalidParameter("threshold is NaN".into()));
    }
    let gap_index = match z.iter().rposition(|&value| value <= eps) {
        Some(k) if k + 1 < z.len() => k,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "threshold {eps} does not split the indicator array"
            )))
        }
    };
    let gap_quotient = if z[gap_index] > 0.0 {
        v[gap_index]
    } else {
        f64::INFINITY
    };
    let runner_up = v
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != gap_index && z[k] > 0.0)
        .map(|(_, &q)| q)
        .fold(0.0_f64, f64::max);
    let gap_ratio = if runner_up > 0.0 {
        gap_quotient / runner_up
    } else {
        f64::INFINITY
    };
    Ok(DistributionDump {
        z: z.to_vec(),
        v: v.to_vec(),
        gap_index,
        gap_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::example1;
    use crate::grouping::{DecompositionResult, ThresholdRecord};
    use crate::thresholds::Strategy;

    fn result_from(n: usize, groups: &[&[usize]], seps: &[usize]) -> DecompositionResult {
        DecompositionResult {
            n,
            nonsep_groups: groups.iter().map(|g| g.iter().copied().collect()).collect(),
            sep_vars: seps.iter().copied().collect(),
            strategy: Strategy::Giat,
            eps_used: ThresholdRecord::Scalar(0.0),
        }
    }

    #[test]
    fn perfect_match_on_two_pairs() {
        let truth = example1(1.0, 1.0).unwrap().ground_truth();
        let result = result_from(4, &[&[0, 1], &[2, 3]], &[]);
        let report = score(&result, &truth).unwrap();
        assert_eq!(report.captured_sep_vars, 0);
        assert_eq!(report.captured_nonsep_vars, 4);
        assert_eq!(report.formed_nonsep_groups, 2);
        assert!(report.exact);
    }

    #[test]
    fn all_singletons_capture_nothing() {
        let truth = example1(1.0, 1.0).unwrap().ground_truth();
        let result = result_from(4, &[], &[0, 1, 2, 3]);
        let report = score(&result, &truth).unwrap();
        assert_eq!(report.captured_sep_vars, 0);
        assert_eq!(report.captured_nonsep_vars, 0);
        assert_eq!(report.formed_nonsep_groups, 0);
        assert!(!report.exact);
    }

    #[test]
    fn merged_group_captures_vars_but_not_exact() {
        let truth = example1(1.0, 1.0).unwrap().ground_truth();
        let result = result_from(4, &[&[0, 1, 2, 3]], &[]);
        let report = score(&result, &truth).unwrap();
        assert_eq!(report.captured_sep_vars, 0);
        assert_eq!(report.captured_nonsep_vars, 4);
        assert_eq!(report.formed_nonsep_groups, 1);
        assert!(!report.exact);
    }

    #[test]
    fn score_ignores_group_listing_order() {
        let truth = example1(1.0, 1.0).unwrap().ground_truth();
        let a = result_from(4, &[&[0, 1], &[2, 3]], &[]);
        let b = result_from(4, &[&[2, 3], &[0, 1]], &[]);
        assert_eq!(score(&a, &truth).unwrap(), score(&b, &truth).unwrap());
    }

    #[test]
    fn truth_scored_as_result_is_exact() {
        let truth = example1(2.0, 0.5).unwrap().ground_truth();
        let result = DecompositionResult {
            n: truth.n,
            nonsep_groups: truth.nonsep_groups.clone(),
            sep_vars: truth.sep_vars.clone(),
            strategy: Strategy::Giat,
            eps_used: ThresholdRecord::Scalar(0.0),
        };
        let report = score(&result, &truth).unwrap();
        assert!(report.exact);
        assert_eq!(report.captured_nonsep_vars, truth.nonsep_var_count());
        assert_eq!(report.captured_sep_vars, truth.sep_vars.len());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let truth = example1(1.0, 1.0).unwrap().ground_truth();
        let result = result_from(5, &[], &[0, 1, 2, 3, 4]);
        assert!(score(&result, &truth).is_err());
    }

    #[test]
    fn zero_rule_gap_at_transition() {
        let z = [0.0, 0.0, 2.0, 2.0];
        let v = [0.0, 0.0, 1.0];
        let dump = dump_distribution(&z, &v, 0.0).unwrap();
        assert_eq!(dump.gap_index, 1);
        assert!(dump.gap_ratio.is_infinite());
    }

    #[test]
    fn quotient_gap_and_ratio() {
        let z = [1e-9, 2e-9, 0.8, 1.0];
        let v = [2.0, 4e8, 1.25];
        let dump = dump_distribution(&z, &v, 2e-9).unwrap();
        assert_eq!(dump.gap_index, 1);
        assert_eq!(dump.gap_ratio, 4e8 / 2.0);
    }

    #[test]
    fn degenerate_arrays_rejected() {
        assert!(dump_distribution(&[], &[], 0.0).is_err());
        assert!(dump_distribution(&[1.0], &[], 0.0).is_err());
        assert!(dump_distribution(&[1.0, 2.0], &[], 0.0).is_err());
        assert!(dump_distribution(&[2.0, 1.0], &[0.5], 1.0).is_err());
        // threshold above every indicator cannot split
        assert!(dump_distribution(&[1.0, 2.0], &[2.0], 5.0).is_err());
        // threshold below every indicator cannot split
        assert!(dump_distribution(&[1.0, 2.0], &[2.0], 0.5).is_err());
    }

    #[test]
    fn exact_flag_implies_full_capture() {
        let truth = example1(1.0, 1e6).unwrap().ground_truth();
        let result = result_from(4, &[&[0, 1], &[2, 3]], &[]);
        let report = score(&result, &truth).unwrap();
        if report.exact {
            assert_eq!(report.captured_sep_vars, truth.sep_vars.len());
            assert_eq!(report.captured_nonsep_vars, truth.nonsep_var_count());
            assert_eq!(report.formed_nonsep_groups, truth.nonsep_groups.len());
        }
    }
}
