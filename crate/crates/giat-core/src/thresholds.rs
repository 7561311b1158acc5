//! Threshold strategies for deciding which `tau` values mean interaction.
//!
//! Four strategies are implemented:
//!
//! * [`ft_threshold`]: one fixed scalar compared against raw `tau`.
//! * [`fst_threshold`]: scalar scaled to the objective's magnitude, from
//!   `alpha * min|f|` over random samples.
//! * [`cret_thresholds`]: one threshold per pair from its roundoff bounds.
//! * [`giat_threshold`]: converts every pair to a roundoff-corrected,
//!   magnitude-normalized indicator, sorts the indicators, and places the
//!   threshold at the largest adjacent quotient gap.
//!
//! The first three compare raw `tau`; the adaptive strategy compares the
//! indicator, so its decision carries `Basis::Indicator`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::bench::ProblemInstance;
use crate::error::Error;
use crate::interaction::InteractionData;
use crate::matrix::{pair_indices, SymMatrix};
use crate::rng;
use crate::Result;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Default fixed threshold.
pub const DEFAULT_FT_EPS: f64 = 1e-3;
/// Default control parameter for the function-space threshold.
pub const DEFAULT_FST_ALPHA: f64 = 1e-10;
/// Default sample count for the function-space threshold.
pub const DEFAULT_FST_K: usize = 10;

/// The four threshold-setting strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "UPPERCASE"))]
pub enum Strategy {
    /// Fixed threshold.
    Ft,
    /// Function-space-based threshold.
    Fst,
    /// Computational-roundoff-error-based per-pair thresholds.
    Cret,
    /// Global-information adaptive threshold over sorted indicators.
    Giat,
}

impl Strategy {
    /// All strategies in canonical order.
    pub const ALL: [Strategy; 4] = [Strategy::Ft, Strategy::Fst, Strategy::Cret, Strategy::Giat];

    /// Canonical uppercase name.
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Ft => "FT",
            Strategy::Fst => "FST",
            Strategy::Cret => "CRET",
            Strategy::Giat => "GIAT",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "FT" => Ok(Strategy::Ft),
            "FST" => Ok(Strategy::Fst),
            "CRET" => Ok(Strategy::Cret),
            "GIAT" => Ok(Strategy::Giat),
            other => Err(Error::InvalidParameter(format!(
                "unknown strategy {other:?} (expected FT, FST, CRET, or GIAT)"
            ))),
        }
    }
}

/// Which matrix the threshold applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// Raw `tau` values.
    RawTau,
    /// Interaction indicators.
    Indicator,
}

/// Outcome of the fully-separable / fully-nonseparable pre-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Mixed structure; the threshold is meaningful.
    Partial,
    /// Every pair decisively below its lower roundoff bound.
    FullySeparable,
    /// Every pair decisively above its upper roundoff bound.
    FullyNonseparable,
}

/// Scalar or per-pair threshold payload.
#[derive(Debug, Clone, PartialEq)]
pub enum ThresholdValue {
    /// One threshold for every pair (may be `+inf`).
    Scalar(f64),
    /// Individual threshold per pair.
    PerPair(SymMatrix),
}

/// A strategy's resolved threshold, ready for pair classification.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdDecision {
    /// Strategy that produced the decision.
    pub strategy: Strategy,
    /// Matrix the threshold compares against.
    pub basis: Basis,
    /// Scalar or per-pair threshold.
    pub value: ThresholdValue,
    /// Pre-check outcome (always `Partial` for FT/FST/CRET).
    pub verdict: Verdict,
}

impl ThresholdDecision {
    /// Threshold applied to the pair `(p, q)`.
    pub fn eps_for(&self, p: usize, q: usize) -> f64 {
        match &self.value {
            ThresholdValue::Scalar(eps) => *eps,
            ThresholdValue::PerPair(m) => m.get(p, q),
        }
    }

    /// Scalar threshold, if the decision carries one.
    pub fn scalar_eps(&self) -> Option<f64> {
        match &self.value {
            ThresholdValue::Scalar(eps) => Some(*eps),
            ThresholdValue::PerPair(_) => None,
        }
    }
}

/// Fixed threshold on raw `tau`.
pub fn ft_threshold(eps: f64) -> Result<ThresholdDecision> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "fixed threshold {eps} must be finite and positive"
        )));
    }
    Ok(ThresholdDecision {
        strategy: Strategy::Ft,
        basis: Basis::RawTau,
        value: ThresholdValue::Scalar(eps),
        verdict: Verdict::Partial,
    })
}

/// The function-space rule applied to already-sampled objective values.
pub fn fst_eps_from_samples(samples: &[f64], alpha: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter(
            "function-space threshold needs at least one sample".into(),
        ));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} must be finite and positive"
        )));
    }
    let min_abs = samples
        .iter()
        .map(|f| f.abs())
        .fold(f64::INFINITY, f64::min);
    Ok(alpha * min_abs)
}

/// Function-space threshold `alpha * min|f|` over `k` uniform samples
/// inside the bounds; consumes exactly `k` objective evaluations.
pub fn fst_threshold(
    instance: &ProblemInstance,
    k: usize,
    alpha: f64,
    seed: u64,
) -> Result<ThresholdDecision> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "sample count k must be at least 1".into(),
        ));
    }
    let n = instance.dimension();
    let (lb, ub) = instance.bounds();
    let mut sample_rng = rng::stream(seed);
    let mut point = alloc::vec![0.0; n];
    let mut samples = Vec::with_capacity(k);
    for _ in 0..k {
        for coord in point.iter_mut() {
            *coord = rng::uniform_in(&mut sample_rng, lb, ub);
        }
        samples.push(instance.evaluate(&point)?);
    }
    let eps = fst_eps_from_samples(&samples, alpha)?;
    Ok(ThresholdDecision {
        strategy: Strategy::Fst,
        basis: Basis::RawTau,
        value: ThresholdValue::Scalar(eps),
        verdict: Verdict::Partial,
    })
}

/// Per-pair thresholds from the roundoff bounds.
///
/// Decisive pairs keep their own bound as the threshold (`e_inf` when
/// `tau < e_inf`, `e_sup` when `tau > e_sup`). Gray-zone pairs get the blend
/// `w * e_sup + (1 - w) * e_inf` with `w = eta0 / (eta0 + eta1)`, where
/// `eta0` and `eta1` count decisively separable and decisively nonseparable
/// pairs over the whole matrix (`w = 1/2` if there are none).
pub fn cret_thresholds(data: &InteractionData) -> ThresholdDecision {
    let n = data.n();
    let mut eta0 = 0u64;
    let mut eta1 = 0u64;
    for (p, q) in pair_indices(n) {
        let tau = data.tau(p, q);
        if tau < data.e_inf(p, q) {
            eta0 += 1;
        } else if tau > data.e_sup(p, q) {
            eta1 += 1;
        }
    }
    let w = if eta0 + eta1 == 0 {
        0.5
    } else {
        eta0 as f64 / (eta0 + eta1) as f64
    };
    let mut eps = SymMatrix::zeros(n);
    for (p, q) in pair_indices(n) {
        let tau = data.tau(p, q);
        let (e_inf, e_sup) = (data.e_inf(p, q), data.e_sup(p, q));
        let pair_eps = if tau < e_inf {
            e_inf
        } else if tau > e_sup {
            e_sup
        } else {
            w * e_sup + (1.0 - w) * e_inf
        };
        eps.set_pair(p, q, pair_eps);
    }
    ThresholdDecision {
        strategy: Strategy::Cret,
        basis: Basis::RawTau,
        value: ThresholdValue::PerPair(eps),
        verdict: Verdict::Partial,
    }
}

/// Symmetric matrix of interaction indicators.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaMatrix {
    matrix: SymMatrix,
}

impl ZetaMatrix {
    /// Problem dimension.
    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// Indicator for the pair.
    pub fn get(&self, p: usize, q: usize) -> f64 {
        self.matrix.get(p, q)
    }

    /// The underlying symmetric matrix.
    pub fn matrix(&self) -> &SymMatrix {
        &self.matrix
    }
}

/// Interaction indicator for every pair:
/// `zeta = max(tau - e_inf, 0) / max(|delta1|, |delta2|)`, and zero when the
/// normalizer is zero.
///
/// Subtracting `e_inf` flattens roundoff-only `tau` values to zero; dividing
/// by the difference magnitude cancels the block's contribution weight.
pub fn compute_zeta(data: &InteractionData) -> ZetaMatrix {
    let n = data.n();
    let mut matrix = SymMatrix::zeros(n);
    for (p, q) in pair_indices(n) {
        let d = data.d(p, q);
        let corrected = data.tau(p, q) - data.e_inf(p, q);
        let zeta = if d == 0.0 || corrected <= 0.0 {
            0.0
        } else {
            corrected / d
        };
        matrix.set_pair(p, q, zeta);
    }
    ZetaMatrix { matrix }
}

/// Quotient differences between adjacent entries of an ascending array:
/// entry `k` is `z[k+1] / z[k]`, or `0` when `z[k]` is zero (the difference
/// against a zero indicator does not count as a gap).
pub fn quotient_differences(z: &[f64]) -> Vec<f64> {
    z.windows(2)
        .map(|w| if w[0] == 0.0 { 0.0 } else { w[1] / w[0] })
        .collect()
}

/// Largest-quotient selection: returns `(slot, eps)` where `slot` is the
/// index of the maximal entry of `v` (smallest index on ties) and
/// `eps = z[slot]`, or `None` when every quotient is masked to zero.
pub fn select_gap(z: &[f64], v: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (k, &quotient) in v.iter().enumerate() {
        if quotient > 0.0 {
            match best {
                Some((_, b)) if quotient <= b => {}
                _ => best = Some((k, quotient)),
            }
        }
    }
    best.map(|(k, _)| (k, z[k]))
}

/// Everything the adaptive threshold produces: the decision plus the
/// indicator matrix and the sorted / difference arrays behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct GiatOutcome {
    /// The resolved threshold decision (basis is always the indicator).
    pub decision: ThresholdDecision,
    /// Indicator matrix used for classification.
    pub zeta: ZetaMatrix,
    /// All pair indicators sorted ascending.
    pub z: Vec<f64>,
    /// Quotient differences between adjacent entries of `z`.
    pub v: Vec<f64>,
}

/// Global adaptive threshold over the sorted interaction indicators.
///
/// Pre-checks first: if every pair sits below its `e_inf` the problem is
/// fully separable (`eps = +inf`); if every pair sits above its `e_sup` it
/// is fully nonseparable (`eps = 0`). Otherwise the indicators are sorted
/// ascending and the threshold is the lower neighbor of the largest
/// adjacent quotient. When no pair falls strictly between its roundoff
/// bounds every indicator is decisive and the threshold is simply zero.
pub fn giat_threshold(data: &InteractionData) -> Result<GiatOutcome> {
    let n = data.n();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "adaptive threshold needs n >= 2, got {n}"
        )));
    }
    let mut all_below = true;
    let mut all_above = true;
    let mut any_gray = false;
    for (p, q) in pair_indices(n) {
        let tau = data.tau(p, q);
        let (e_inf, e_sup) = (data.e_inf(p, q), data.e_sup(p, q));
        all_below &= tau < e_inf;
        all_above &= tau > e_sup;
        any_gray |= tau > e_inf && tau < e_sup;
    }

    let zeta = compute_zeta(data);
    let mut z: Vec<f64> = zeta.matrix().upper_triangle().map(|(_, _, v)| v).collect();
    z.sort_unstable_by(f64::total_cmp);
    let v = quotient_differences(&z);

    let (eps, verdict) = if all_below {
        (f64::INFINITY, Verdict::FullySeparable)
    } else if all_above {
        (0.0, Verdict::FullyNonseparable)
    } else if !any_gray {
        // Every pair is decisive; zero separates the exact-zero indicators
        // from the genuine ones.
        (0.0, Verdict::Partial)
    } else {
        match select_gap(&z, &v) {
            Some((_, eps)) => (eps, Verdict::Partial),
            None => (0.0, Verdict::Partial),
        }
    };

    Ok(GiatOutcome {
        decision: ThresholdDecision {
            strategy: Strategy::Giat,
            basis: Basis::Indicator,
            value: ThresholdValue::Scalar(eps),
            verdict,
        },
        zeta,
        z,
        v,
    })
}
