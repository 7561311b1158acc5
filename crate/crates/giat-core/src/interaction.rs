//! Raw pairwise interaction structure from finite differences.
//!
//! For variables `p`, `q` the detector compares two forward differences of
//! the objective along `p`, taken at two settings of `q`:
//!
//! ```text
//! x1 = base            x2 = base with x_p perturbed
//! x3 = base, x_q pert. x4 = base with both perturbed
//! delta1 = f(x2) - f(x1)      delta2 = f(x4) - f(x3)
//! tau = |delta1 - delta2|
//! ```
//!
//! For an additively separable pair, `tau` is zero in exact arithmetic and
//! pure roundoff in floating point. `e_inf` and `e_sup` bound that roundoff
//! from below and above using the magnitudes of the four function values.
//!
//! The base point and all single-coordinate perturbations are evaluated once
//! and shared, so a full `n x n` build costs exactly
//! `1 + n + n(n-1)/2` objective evaluations.

use alloc::format;
use alloc::vec::Vec;

use crate::bench::ProblemInstance;
use crate::error::Error;
use crate::math;
use crate::matrix::{pair_count, pair_indices, SymMatrix};
use crate::Result;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Half the unit roundoff of `f64` (2^-53).
pub const HALF_UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Where the shared base point sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BasePointRule {
    /// All coordinates start at the lower bound.
    #[default]
    LowerBounds,
}

/// Size of the per-coordinate perturbation step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DeltaRule {
    /// Step to the opposite bound: `delta = ub - lb`.
    #[default]
    FullRange,
    /// Step to the box midpoint: `delta = (ub - lb) / 2`, for objectives
    /// that misbehave at corners.
    HalfRange,
}

/// Base point and step choice for the difference scheme. Perturbed
/// coordinates stay inside the bounds under both rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct PerturbationScheme {
    /// Base point placement.
    pub base_point_rule: BasePointRule,
    /// Step size rule.
    pub delta_rule: DeltaRule,
}

/// Everything measured for one variable pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairQuantities {
    /// `|delta1 - delta2|`.
    pub tau: f64,
    /// Forward difference along `p` with `q` at its base value.
    pub delta1: f64,
    /// Forward difference along `p` with `q` perturbed.
    pub delta2: f64,
    /// Greatest lower bound on the roundoff error in `tau`.
    pub e_inf: f64,
    /// Least upper bound on the roundoff error in `tau`.
    pub e_sup: f64,
    /// `max(|delta1|, |delta2|)`, the magnitude normalizer.
    pub d: f64,
}

/// Roundoff-bound constant `k*u / (1 - k*u)` with `u` half the unit
/// roundoff of `f64`.
pub fn gamma_constant(k: f64) -> Result<f64> {
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma constant k = {k} must be finite and nonnegative"
        )));
    }
    let ku = k * HALF_UNIT_ROUNDOFF;
    if ku >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "k*u = {ku} must be below 1"
        )));
    }
    Ok(ku / (1.0 - ku))
}

/// Shared evaluations for one instance and scheme: the base point, its
/// objective value, and the value with each single coordinate perturbed.
#[derive(Debug, Clone)]
pub struct EvalCache {
    scheme: PerturbationScheme,
    base: Vec<f64>,
    delta: Vec<f64>,
    f_base: f64,
    f_single: Vec<f64>,
    gamma_lower: f64,
    gamma_upper: f64,
}

impl EvalCache {
    /// The scheme the cache was built with.
    pub fn scheme(&self) -> PerturbationScheme {
        self.scheme
    }

    /// Objective value at the base point.
    pub fn f_base(&self) -> f64 {
        self.f_base
    }

    /// Objective value with only coordinate `i` perturbed.
    pub fn f_single(&self, i: usize) -> f64 {
        self.f_single[i]
    }
}

/// Evaluates and caches the base point and all single perturbations,
/// consuming exactly `1 + n` objective evaluations.
pub fn warm_cache(instance: &ProblemInstance, scheme: PerturbationScheme) -> Result<EvalCache> {
    let n = instance.dimension();
    let (lb, ub) = instance.bounds();
    let base = match scheme.base_point_rule {
        BasePointRule::LowerBounds => alloc::vec![lb; n],
    };
    let step = match scheme.delta_rule {
        DeltaRule::FullRange => ub - lb,
        DeltaRule::HalfRange => (ub - lb) / 2.0,
    };
    let delta = alloc::vec![step; n];
    let f_base = instance.evaluate(&base)?;
    let mut f_single = Vec::with_capacity(n);
    let mut point = base.clone();
    for i in 0..n {
        point[i] = base[i] + delta[i];
        f_single.push(instance.evaluate(&point)?);
        point[i] = base[i];
    }
    Ok(EvalCache {
        scheme,
        base,
        delta,
        f_base,
        f_single,
        gamma_lower: gamma_constant(2.0)?,
        gamma_upper: gamma_constant(math::sqrt(n as f64))?,
    })
}

/// Computes all quantities for the pair `(p, q)` against a warm cache,
/// consuming exactly one fresh evaluation (the doubly perturbed point).
pub fn pair_quantities(
    instance: &ProblemInstance,
    p: usize,
    q: usize,
    cache: &EvalCache,
) -> Result<PairQuantities> {
    let n = instance.dimension();
    for &index in &[p, q] {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, n });
        }
    }
    if p == q {
        return Err(Error::InvalidParameter(format!(
            "pair requires two distinct variables, got ({p}, {q})"
        )));
    }
    let mut point = cache.base.clone();
    point[p] = cache.base[p] + cache.delta[p];
    point[q] = cache.base[q] + cache.delta[q];
    let f4 = instance.evaluate(&point)?;

    let f1 = cache.f_base;
    let f2 = cache.f_single[p];
    let f3 = cache.f_single[q];

    let delta1 = f2 - f1;
    let delta2 = f4 - f3;
    let tau = (delta1 - delta2).abs();
    let e_inf = cache.gamma_lower * (f1 + f4).abs().max((f2 + f3).abs());
    // Eq-form upper bound uses the signed max of the four values; if the
    // objective goes negative that raw bound can undercut e_inf, so it is
    // clamped to keep e_inf <= e_sup.
    let e_sup_raw = cache.gamma_upper * f1.max(f2).max(f3).max(f4);
    let e_sup = e_sup_raw.max(e_inf);
    let d = delta1.abs().max(delta2.abs());
    Ok(PairQuantities {
        tau,
        delta1,
        delta2,
        e_inf,
        e_sup,
        d,
    })
}

/// Symmetric interaction structure over all variable pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionData {
    n: usize,
    gamma: SymMatrix,
    e_inf: SymMatrix,
    e_sup: SymMatrix,
    d: SymMatrix,
    fe_used: u64,
}

impl InteractionData {
    /// Assembles interaction data from prebuilt matrices.
    pub fn from_parts(
        gamma: SymMatrix,
        e_inf: SymMatrix,
        e_sup: SymMatrix,
        d: SymMatrix,
        fe_used: u64,
    ) -> Result<Self> {
        let n = gamma.n();
        for m in [&e_inf, &e_sup, &d] {
            if m.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: m.n(),
                });
            }
        }
        Ok(Self {
            n,
            gamma,
            e_inf,
            e_sup,
            d,
            fe_used,
        })
    }

    /// Problem dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `tau` for the pair.
    pub fn tau(&self, p: usize, q: usize) -> f64 {
        self.gamma.get(p, q)
    }

    /// Lower roundoff bound for the pair.
    pub fn e_inf(&self, p: usize, q: usize) -> f64 {
        self.e_inf.get(p, q)
    }

    /// Upper roundoff bound for the pair.
    pub fn e_sup(&self, p: usize, q: usize) -> f64 {
        self.e_sup.get(p, q)
    }

    /// `max(|delta1|, |delta2|)` for the pair.
    pub fn d(&self, p: usize, q: usize) -> f64 {
        self.d.get(p, q)
    }

    /// The full `tau` matrix.
    pub fn gamma_matrix(&self) -> &SymMatrix {
        &self.gamma
    }

    /// The full lower-bound matrix.
    pub fn e_inf_matrix(&self) -> &SymMatrix {
        &self.e_inf
    }

    /// The full upper-bound matrix.
    pub fn e_sup_matrix(&self) -> &SymMatrix {
        &self.e_sup
    }

    /// The full normalizer matrix.
    pub fn d_matrix(&self) -> &SymMatrix {
        &self.d
    }

    /// Objective evaluations consumed building this structure.
    pub fn fe_used(&self) -> u64 {
        self.fe_used
    }
}

/// Builds the full interaction structure for every variable pair.
///
/// Costs exactly `1 + n + n(n-1)/2` evaluations: one base point, `n` single
/// perturbations, one doubly perturbed point per pair.
pub fn build_interaction_data(
    instance: &ProblemInstance,
    scheme: PerturbationScheme,
) -> Result<InteractionData> {
    let n = instance.dimension();
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "interaction structure needs n >= 2, got {n}"
        )));
    }
    let fe_before = instance.fe_count();
    let cache = warm_cache(instance, scheme)?;
    let mut gamma = SymMatrix::zeros(n);
    let mut e_inf = SymMatrix::zeros(n);
    let mut e_sup = SymMatrix::zeros(n);
    let mut d = SymMatrix::zeros(n);
    for (p, q) in pair_indices(n) {
        let pq = pair_quantities(instance, p, q, &cache)?;
        gamma.set_pair(p, q, pq.tau);
        e_inf.set_pair(p, q, pq.e_inf);
        e_sup.set_pair(p, q, pq.e_sup);
        d.set_pair(p, q, pq.d);
    }
    let fe_used = instance.fe_count() - fe_before;
    debug_assert_eq!(fe_used as usize, 1 + n + pair_count(n));
    Ok(InteractionData {
        n,
        gamma,
        e_inf,
        e_sup,
        d,
        fe_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{build_problem, example1, BaseFunctionKind, ProblemSpec, WeightMode};
    use alloc::vec;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn gamma_constant_reference_values() {
        let g2 = gamma_constant(2.0).unwrap();
        assert!(rel_close(g2, 2.220446049250313e-16, 1e-12), "{g2}");
        assert_eq!(gamma_constant(0.0).unwrap(), 0.0);
        let g100 = gamma_constant(100.0).unwrap();
        assert!(rel_close(g100, 1.110e-14, 1e-3), "{g100}");
        assert!(gamma_constant(1e17).is_err());
        assert!(gamma_constant(-1.0).is_err());
    }

    #[test]
    fn example1_pair_values() {
        for (w1, w2) in [(1.0, 1.0), (0.5, 3.0), (1e-6, 1e6)] {
            let instance = example1(w1, w2).unwrap();
            let cache = warm_cache(&instance, PerturbationScheme::default()).unwrap();
            let pq = pair_quantities(&instance, 0, 1, &cache).unwrap();
            assert!(rel_close(pq.tau, 8.0 * w1, 1e-12), "tau {}", pq.tau);
            assert!(rel_close(pq.delta1, 4.0 * w1, 1e-12));
            assert!(rel_close(pq.delta2, -4.0 * w1, 1e-12));
            assert!(rel_close(pq.d, 4.0 * w1, 1e-12));
            let pq = pair_quantities(&instance, 2, 3, &cache).unwrap();
            assert!(rel_close(pq.tau, 8.0 * w2, 1e-12));
        }
    }

    #[test]
    fn example1_cross_pair_is_exactly_zero() {
        // The four corner evaluations are exactly representable, so the
        // separable pair difference cancels exactly.
        let instance = example1(1.0, 1.0).unwrap();
        let cache = warm_cache(&instance, PerturbationScheme::default()).unwrap();
        let pq = pair_quantities(&instance, 0, 2, &cache).unwrap();
        assert_eq!(pq.delta1, 4.0);
        assert_eq!(pq.delta2, 4.0);
        assert_eq!(pq.tau, 0.0);
        assert!(pq.e_inf > 0.0);
    }

    #[test]
    fn pair_index_errors() {
        let instance = example1(1.0, 1.0).unwrap();
        let cache = warm_cache(&instance, PerturbationScheme::default()).unwrap();
        assert!(pair_quantities(&instance, 0, 4, &cache).is_err());
        assert!(pair_quantities(&instance, 2, 2, &cache).is_err());
    }

    #[test]
    fn warm_cache_consumes_one_plus_n() {
        let instance = example1(1.0, 1.0).unwrap();
        warm_cache(&instance, PerturbationScheme::default()).unwrap();
        assert_eq!(instance.fe_count(), 5);
    }

    #[test]
    fn full_build_costs_and_values() {
        let instance = example1(1.0, 1.0).unwrap();
        let data = build_interaction_data(&instance, PerturbationScheme::default()).unwrap();
        assert_eq!(data.fe_used(), 11);
        assert_eq!(instance.fe_count(), 11);
        assert_eq!(data.tau(0, 1), 8.0);
        assert_eq!(data.tau(2, 3), 8.0);
        for (p, q) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert!(data.tau(p, q) < data.e_inf(p, q), "pair ({p},{q})");
        }
    }

    #[test]
    fn matrices_are_symmetric_bit_exact() {
        let spec = ProblemSpec {
            separable_dims: 3,
            separable_base: BaseFunctionKind::Elliptic,
            subcomponents: vec![crate::bench::SubcomponentSpec {
                size: 4,
                base: BaseFunctionKind::Rastrigin,
                rotated: true,
                weight: 2.0,
            }],
            lower_bound: -100.0,
            upper_bound: 100.0,
            weight_mode: WeightMode::Balanced,
        };
        let instance = build_problem(&spec, 13).unwrap();
        let data = build_interaction_data(&instance, PerturbationScheme::default()).unwrap();
        let n = data.n();
        for m in [
            data.gamma_matrix(),
            data.e_inf_matrix(),
            data.e_sup_matrix(),
            data.d_matrix(),
        ] {
            for p in 0..n {
                for q in 0..n {
                    assert_eq!(m.get(p, q).to_bits(), m.get(q, p).to_bits());
                }
            }
        }
    }

    #[test]
    fn separable_sphere_every_tau_below_e_inf() {
        let spec = ProblemSpec {
            separable_dims: 10,
            separable_base: BaseFunctionKind::Sphere,
            subcomponents: vec![],
            lower_bound: -100.0,
            upper_bound: 100.0,
            weight_mode: WeightMode::Balanced,
        };
        let instance = build_problem(&spec, 4).unwrap();
        let data = build_interaction_data(&instance, PerturbationScheme::default()).unwrap();
        for (p, q, tau) in data.gamma_matrix().upper_triangle() {
            assert!(
                tau < data.e_inf(p, q),
                "pair ({p},{q}): tau {} vs e_inf {}",
                tau,
                data.e_inf(p, q)
            );
        }
    }

    #[test]
    fn e_bounds_are_ordered() {
        let instance = example1(2.0, 0.5).unwrap();
        let data = build_interaction_data(&instance, PerturbationScheme::default()).unwrap();
        for (p, q, _) in data.gamma_matrix().upper_triangle() {
            assert!(data.e_inf(p, q) <= data.e_sup(p, q));
        }
    }

    #[test]
    fn minimal_dimension_builds() {
        let spec = ProblemSpec {
            separable_dims: 2,
            separable_base: BaseFunctionKind::Sphere,
            subcomponents: vec![],
            lower_bound: 0.0,
            upper_bound: 1.0,
            weight_mode: WeightMode::Balanced,
        };
        let instance = build_problem(&spec, 1).unwrap();
        let data = build_interaction_data(&instance, PerturbationScheme::default()).unwrap();
        assert_eq!(data.fe_used(), 4); // 1 + 2 + 1
    }

    #[test]
    fn half_range_stays_in_bounds() {
        let instance = example1(1.0, 1.0).unwrap();
        let scheme = PerturbationScheme {
            delta_rule: DeltaRule::HalfRange,
            ..PerturbationScheme::default()
        };
        let cache = warm_cache(&instance, scheme).unwrap();
        // perturbed coordinate is lb + (ub-lb)/2 = 0 for [-1, 1]
        let pq = pair_quantities(&instance, 0, 1, &cache).unwrap();
        // (0 - (-1))^2 - (-1 - (-1))^2 = 1, then delta2 = (0-0)^2 - (-1-0)^2 = -1
        assert_eq!(pq.delta1, 1.0);
        assert_eq!(pq.delta2, -1.0);
        assert_eq!(pq.tau, 2.0);
    }
}
