//! Scalable partially separable test problems with known ground truth.
//!
//! A [`ProblemSpec`] describes an additive objective built from weighted
//! subcomponent blocks (optionally rotated) plus one trailing separable
//! block. [`build_problem`] realizes the spec deterministically for a seed:
//! shift vector, rotation matrices, and contribution weights all come from
//! independent ChaCha streams derived from the seed.
//!
//! Index layout: subcomponents occupy the leading variable indices in
//! declaration order; the separable block occupies the trailing indices.
//! All indices are 0-based in memory; reports add 1 at the boundary.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicU64, Ordering};

use alloc::collections::BTreeSet;

use crate::error::Error;
use crate::math;
use crate::rng;
use crate::Result;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Base objective shapes for blocks, with the usual benchmark constants
/// (elliptic condition number 1e6, Ackley constants 20 / 0.2 / 2pi,
/// Schwefel 1.2 nested sums, chained Rosenbrock).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BaseFunctionKind {
    /// Sum of squares.
    Sphere,
    /// Ill-conditioned sum of squares, condition number 1e6.
    Elliptic,
    /// Multimodal cosine-modulated sum of squares.
    Rastrigin,
    /// Exponential well; not additively separable even without rotation.
    Ackley,
    /// Nested prefix-sum squares; intrinsically nonseparable.
    Schwefel12,
    /// Chained valley; intrinsically nonseparable.
    Rosenbrock,
}

impl BaseFunctionKind {
    /// Smallest block dimension the function is defined on.
    pub fn min_dimension(self) -> usize {
        match self {
            BaseFunctionKind::Schwefel12 | BaseFunctionKind::Rosenbrock => 2,
            _ => 1,
        }
    }

    /// Whether every pair of variables inside an unrotated block of this
    /// kind interacts regardless of rotation.
    pub fn intrinsically_nonseparable(self) -> bool {
        matches!(
            self,
            BaseFunctionKind::Schwefel12 | BaseFunctionKind::Rosenbrock
        )
    }

    /// Whether the function is a plain sum of per-coordinate terms.
    ///
    /// Ackley is the deliberate odd one out: it is treated as a separable
    /// kind for grouping truth, but its coordinates genuinely interact, so
    /// difference-based detection is expected to disagree with the label.
    pub fn additively_separable(self) -> bool {
        matches!(
            self,
            BaseFunctionKind::Sphere | BaseFunctionKind::Elliptic | BaseFunctionKind::Rastrigin
        )
    }

    /// Evaluates the base on `z`, destroying it as term scratch.
    ///
    /// Term sums use pairwise (tree) summation: a single changed coordinate
    /// then re-rounds only its log-depth path, so finite differences of
    /// additively separable sums cancel down to the roundoff bounds the
    /// detector assumes.
    fn evaluate(self, z: &mut [f64]) -> f64 {
        match self {
            BaseFunctionKind::Sphere => {
                for v in z.iter_mut() {
                    *v *= *v;
                }
                pairwise_sum(z)
            }
            BaseFunctionKind::Elliptic => elliptic(z),
            BaseFunctionKind::Rastrigin => {
                for v in z.iter_mut() {
                    *v = *v * *v - 10.0 * math::cos(core::f64::consts::TAU * *v) + 10.0;
                }
                pairwise_sum(z)
            }
            BaseFunctionKind::Ackley => ackley(z),
            BaseFunctionKind::Schwefel12 => {
                let mut prefix = 0.0;
                for v in z.iter_mut() {
                    prefix += *v;
                    *v = prefix * prefix;
                }
                pairwise_sum(z)
            }
            BaseFunctionKind::Rosenbrock => {
                let last = z.len() - 1;
                for i in 0..last {
                    let t = z[i] * z[i] - z[i + 1];
                    let u = z[i] - 1.0;
                    z[i] = 100.0 * t * t + u * u;
                }
                pairwise_sum(&mut z[..last])
            }
        }
    }
}

impl fmt::Display for BaseFunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BaseFunctionKind::Sphere => "sphere",
            BaseFunctionKind::Elliptic => "elliptic",
            BaseFunctionKind::Rastrigin => "rastrigin",
            BaseFunctionKind::Ackley => "ackley",
            BaseFunctionKind::Schwefel12 => "schwefel12",
            BaseFunctionKind::Rosenbrock => "rosenbrock",
        };
        f.write_str(name)
    }
}

/// Adjacent-pair tree summation, destructive over the scratch slice.
fn pairwise_sum(t: &mut [f64]) -> f64 {
    let mut len = t.len();
    if len == 0 {
        return 0.0;
    }
    while len > 1 {
        let half = len / 2;
        for i in 0..half {
            t[i] = t[2 * i] + t[2 * i + 1];
        }
        if len % 2 == 1 {
            t[half] = t[len - 1];
            len = half + 1;
        } else {
            len = half;
        }
    }
    t[0]
}

fn elliptic(z: &mut [f64]) -> f64 {
    let n = z.len();
    if n == 1 {
        return z[0] * z[0];
    }
    let denom = (n - 1) as f64;
    for (i, v) in z.iter_mut().enumerate() {
        *v = math::powf(1e6, i as f64 / denom) * *v * *v;
    }
    pairwise_sum(z)
}

fn ackley(z: &mut [f64]) -> f64 {
    let n = z.len() as f64;
    let mut sum_cos = 0.0;
    for v in z.iter_mut() {
        sum_cos += math::cos(core::f64::consts::TAU * *v);
        *v *= *v;
    }
    let sum_sq = pairwise_sum(z);
    -20.0 * math::exp(-0.2 * math::sqrt(sum_sq / n)) - math::exp(sum_cos / n)
        + 20.0
        + core::f64::consts::E
}

/// How realized contribution weights are drawn at build time.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum WeightMode {
    /// Realized weight equals the declared subcomponent weight.
    #[default]
    Balanced,
    /// Declared weight is multiplied by `10^(sigma * N(0,1))` per block.
    Imbalanced {
        /// Log10 spread of the random weight factor.
        sigma: f64,
    },
}

/// One nonseparable (or deliberately separable) block of the objective.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SubcomponentSpec {
    /// Number of variables in the block.
    pub size: usize,
    /// Base objective applied to the (shifted, optionally rotated) block.
    pub base: BaseFunctionKind,
    /// Apply a random orthogonal rotation to the shifted block.
    pub rotated: bool,
    /// Declared contribution weight, scaled further by the weight mode.
    pub weight: f64,
}

/// Declarative description of a partially separable test problem.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ProblemSpec {
    /// Number of trailing separable variables.
    pub separable_dims: usize,
    /// Base function applied to the separable block as a whole.
    pub separable_base: BaseFunctionKind,
    /// Leading blocks, in index order.
    pub subcomponents: Vec<SubcomponentSpec>,
    /// Uniform lower bound for every variable.
    pub lower_bound: f64,
    /// Uniform upper bound for every variable.
    pub upper_bound: f64,
    /// Weight realization mode.
    #[cfg_attr(feature = "serde", serde(default))]
    pub weight_mode: WeightMode,
}

impl ProblemSpec {
    /// Total problem dimension.
    pub fn dimension(&self) -> usize {
        self.separable_dims + self.subcomponents.iter().map(|s| s.size).sum::<usize>()
    }

    /// Checks every spec invariant, naming the first violation.
    pub fn validate(&self) -> Result<()> {
        if !(self.lower_bound.is_finite() && self.upper_bound.is_finite()) {
            return Err(Error::InvalidSpec(String::from("bounds must be finite")));
        }
        if self.lower_bound >= self.upper_bound {
            return Err(Error::InvalidSpec(format!(
                "lower_bound {} must be below upper_bound {}",
                self.lower_bound, self.upper_bound
            )));
        }
        if self.dimension() < 2 {
            return Err(Error::InvalidSpec(format!(
                "total dimension {} must be at least 2",
                self.dimension()
            )));
        }
        if self.separable_dims > 0 && self.separable_base.intrinsically_nonseparable() {
            return Err(Error::InvalidSpec(format!(
                "separable_base {} is intrinsically nonseparable",
                self.separable_base
            )));
        }
        if let WeightMode::Imbalanced { sigma } = self.weight_mode {
            if !(sigma.is_finite() && sigma >= 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "imbalanced sigma {sigma} must be finite and nonnegative"
                )));
            }
        }
        for (k, sub) in self.subcomponents.iter().enumerate() {
            if sub.size < sub.base.min_dimension() {
                return Err(Error::InvalidSpec(format!(
                    "subcomponent {k}: {} requires size >= {}, got {}",
                    sub.base,
                    sub.base.min_dimension(),
                    sub.size
                )));
            }
            let nonseparable = sub.rotated || sub.base.intrinsically_nonseparable();
            if nonseparable && sub.size < 2 {
                return Err(Error::InvalidSpec(format!(
                    "subcomponent {k}: nonseparable blocks need size >= 2, got {}",
                    sub.size
                )));
            }
            if sub.rotated && sub.base == BaseFunctionKind::Sphere {
                return Err(Error::InvalidSpec(format!(
                    "subcomponent {k}: sphere is rotation-invariant, rotation induces no interaction"
                )));
            }
            if !(sub.weight.is_finite() && sub.weight > 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "subcomponent {k}: weight {} must be finite and positive",
                    sub.weight
                )));
            }
        }
        Ok(())
    }
}

/// Ground-truth grouping: disjoint nonseparable groups plus separable rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupingTruth {
    /// Problem dimension the partition covers.
    pub n: usize,
    /// Disjoint nonseparable groups, each with at least two members.
    pub nonsep_groups: Vec<BTreeSet<usize>>,
    /// Variables outside every group.
    pub sep_vars: BTreeSet<usize>,
}

impl GroupingTruth {
    /// Total number of variables inside groups.
    pub fn nonsep_var_count(&self) -> usize {
        self.nonsep_groups.iter().map(|g| g.len()).sum()
    }

    /// Verifies the partition invariants (disjoint, total, groups >= 2).
    pub fn check_partition(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for group in &self.nonsep_groups {
            if group.len() < 2 {
                return Err(Error::InvalidSpec(String::from(
                    "truth group with fewer than 2 members",
                )));
            }
            for &v in group {
                if v >= self.n || !seen.insert(v) {
                    return Err(Error::InvalidSpec(format!(
                        "variable {v} repeated or out of range in truth groups"
                    )));
                }
            }
        }
        for &v in &self.sep_vars {
            if v >= self.n || !seen.insert(v) {
                return Err(Error::InvalidSpec(format!(
                    "variable {v} repeated or out of range in truth sep vars"
                )));
            }
        }
        if seen.len() != self.n {
            return Err(Error::InvalidSpec(format!(
                "truth covers {} of {} variables",
                seen.len(),
                self.n
            )));
        }
        Ok(())
    }
}

/// Block objective: a standard base function or the pair-coupled quadratic
/// `(z_0 - z_1)^2` used by the canonical two-pair example.
#[derive(Debug, Clone, Copy, PartialEq)]
enum ComponentFunction {
    Base(BaseFunctionKind),
    PairDiffSquare,
}

impl ComponentFunction {
    fn evaluate(self, z: &mut [f64]) -> f64 {
        match self {
            ComponentFunction::Base(kind) => kind.evaluate(z),
            ComponentFunction::PairDiffSquare => {
                let d = z[0] - z[1];
                d * d
            }
        }
    }

    fn nonseparable(self) -> bool {
        match self {
            ComponentFunction::Base(kind) => kind.intrinsically_nonseparable(),
            ComponentFunction::PairDiffSquare => true,
        }
    }
}

#[derive(Debug, Clone)]
struct Component {
    start: usize,
    size: usize,
    weight: f64,
    /// Row-major `size x size` orthogonal matrix, if rotated.
    rotation: Option<Vec<f64>>,
    kind: ComponentFunction,
}

impl Component {
    fn indices(&self) -> core::ops::Range<usize> {
        self.start..self.start + self.size
    }

    fn value(&self, x: &[f64], shift: &[f64], scratch: &mut Vec<f64>) -> f64 {
        scratch.clear();
        scratch.extend(self.indices().map(|i| x[i] - shift[i]));
        if let Some(rot) = &self.rotation {
            let s = self.size;
            let mut rotated = vec![0.0; s];
            for (i, out) in rotated.iter_mut().enumerate() {
                let mut acc = 0.0;
                for j in 0..s {
                    acc += rot[i * s + j] * scratch[j];
                }
                *out = acc;
            }
            self.weight * self.kind.evaluate(&mut rotated)
        } else {
            self.weight * self.kind.evaluate(scratch)
        }
    }
}

// Stream tags for deriving purpose-specific seeds from the instance seed.
const SHIFT_STREAM: u64 = 1;
const WEIGHT_STREAM: u64 = 2;
const ROTATION_STREAM_BASE: u64 = 16;

/// A realized, evaluatable test problem.
///
/// Evaluation is pure apart from the call counter, which is atomic, so a
/// shared instance can be evaluated from many threads.
#[derive(Debug)]
pub struct ProblemInstance {
    spec: ProblemSpec,
    n: usize,
    shift: Vec<f64>,
    components: Vec<Component>,
    sep_start: usize,
    scale: f64,
    seed: u64,
    fe_count: AtomicU64,
}

impl ProblemInstance {
    /// Problem dimension.
    pub fn dimension(&self) -> usize {
        self.n
    }

    /// The spec the instance was built from.
    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    /// Build seed.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform box bounds `(lower, upper)`.
    pub fn bounds(&self) -> (f64, f64) {
        (self.spec.lower_bound, self.spec.upper_bound)
    }

    /// Shift vector (the optimum location of each block).
    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    /// Realized contribution weight of each subcomponent, in index order.
    pub fn realized_weights(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.weight).collect()
    }

    /// Rotation matrix of subcomponent `k` (row-major), if any.
    pub fn rotation(&self, k: usize) -> Option<&[f64]> {
        self.components.get(k).and_then(|c| c.rotation.as_deref())
    }

    /// Objective evaluations consumed so far.
    pub fn fe_count(&self) -> u64 {
        self.fe_count.load(Ordering::Relaxed)
    }

    /// Multiplies the objective by `c > 0`; used for scale-invariance checks.
    pub fn with_scale(mut self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scale {c} must be finite and positive"
            )));
        }
        self.scale *= c;
        Ok(self)
    }

    /// Replaces the shift vector; it must lie strictly inside the bounds.
    pub fn set_shift(&mut self, shift: Vec<f64>) -> Result<()> {
        if shift.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: shift.len(),
            });
        }
        let (lb, ub) = self.bounds();
        if shift.iter().any(|&s| !(s > lb && s < ub)) {
            return Err(Error::InvalidSpec(String::from(
                "shift must lie strictly inside the bounds",
            )));
        }
        self.shift = shift;
        Ok(())
    }

    /// Evaluates the objective at `point`, counting one evaluation.
    pub fn evaluate(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: point.len(),
            });
        }
        self.fe_count.fetch_add(1, Ordering::Relaxed);
        Ok(self.objective(point))
    }

    fn objective(&self, x: &[f64]) -> f64 {
        let mut scratch = Vec::with_capacity(self.n);
        let mut total = 0.0;
        for component in &self.components {
            total += component.value(x, &self.shift, &mut scratch);
        }
        total += self.separable_term(x, &mut scratch);
        self.scale * total
    }

    fn separable_term(&self, x: &[f64], scratch: &mut Vec<f64>) -> f64 {
        if self.sep_start == self.n {
            return 0.0;
        }
        scratch.clear();
        scratch.extend((self.sep_start..self.n).map(|i| x[i] - self.shift[i]));
        self.spec.separable_base.evaluate(scratch)
    }

    /// Value contributed by subcomponent `k` alone (no counter bump).
    pub fn component_value(&self, k: usize, point: &[f64]) -> Result<f64> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: point.len(),
            });
        }
        let component = self.components.get(k).ok_or(Error::IndexOutOfRange {
            index: k,
            n: self.components.len(),
        })?;
        let mut scratch = Vec::with_capacity(component.size);
        Ok(self.scale * component.value(point, &self.shift, &mut scratch))
    }

    /// Value contributed by the separable block alone (no counter bump).
    pub fn separable_value(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: point.len(),
            });
        }
        let mut scratch = Vec::with_capacity(self.n - self.sep_start);
        Ok(self.scale * self.separable_term(point, &mut scratch))
    }

    /// Whether the objective is additively non-separable with respect to
    /// the pair `(p, q)`, i.e. whether a difference-based detector should
    /// see the pair directly.
    ///
    /// This is finer-grained than [`ProblemInstance::ground_truth`]: inside
    /// an unrotated Rosenbrock chain only neighboring variables share a
    /// term, and inside an Ackley block every pair interacts even though
    /// the truth labels the block separable.
    pub fn pair_interacts(&self, p: usize, q: usize) -> bool {
        if p == q || p >= self.n || q >= self.n {
            return false;
        }
        let find = |v: usize| self.components.iter().find(|c| c.indices().contains(&v));
        match (find(p), find(q)) {
            (Some(a), Some(b)) => {
                if !core::ptr::eq(a, b) {
                    return false;
                }
                if a.rotation.is_some() {
                    return true;
                }
                match a.kind {
                    ComponentFunction::PairDiffSquare => true,
                    ComponentFunction::Base(base) => match base {
                        BaseFunctionKind::Sphere
                        | BaseFunctionKind::Elliptic
                        | BaseFunctionKind::Rastrigin => false,
                        BaseFunctionKind::Ackley | BaseFunctionKind::Schwefel12 => true,
                        BaseFunctionKind::Rosenbrock => p.abs_diff(q) == 1,
                    },
                }
            }
            (None, None) => {
                // both in the separable block
                self.spec.separable_base == BaseFunctionKind::Ackley
            }
            _ => false,
        }
    }

    /// Ground-truth grouping, read off the construction.
    ///
    /// Rotated or intrinsically nonseparable blocks form groups; unrotated
    /// blocks of a separable kind dissolve into separable variables. Note
    /// that unrotated Ackley blocks dissolve even though their coordinates
    /// interact; that mismatch is the documented hard case.
    pub fn ground_truth(&self) -> GroupingTruth {
        let mut nonsep_groups = Vec::new();
        let mut sep_vars = BTreeSet::new();
        for component in &self.components {
            if component.rotation.is_some() || component.kind.nonseparable() {
                nonsep_groups.push(component.indices().collect());
            } else {
                sep_vars.extend(component.indices());
            }
        }
        sep_vars.extend(self.sep_start..self.n);
        GroupingTruth {
            n: self.n,
            nonsep_groups,
            sep_vars,
        }
    }
}

/// Builds a [`ProblemInstance`] from a spec, deterministically for the seed.
pub fn build_problem(spec: &ProblemSpec, seed: u64) -> Result<ProblemInstance> {
    spec.validate()?;
    let n = spec.dimension();
    let (lb, ub) = (spec.lower_bound, spec.upper_bound);
    let range = ub - lb;

    // Shift drawn from the middle 80% of the box so that full-range
    // perturbation points stay representable and the shift is interior.
    let mut shift_rng = rng::stream(rng::mix_seeds(seed, SHIFT_STREAM));
    let shift: Vec<f64> = (0..n)
        .map(|_| rng::uniform_in(&mut shift_rng, lb + 0.1 * range, ub - 0.1 * range))
        .collect();

    let mut weight_rng = rng::stream(rng::mix_seeds(seed, WEIGHT_STREAM));
    let mut components = Vec::with_capacity(spec.subcomponents.len());
    let mut start = 0;
    for (k, sub) in spec.subcomponents.iter().enumerate() {
        let weight = match spec.weight_mode {
            WeightMode::Balanced => sub.weight,
            WeightMode::Imbalanced { sigma } => {
                sub.weight * math::powf(10.0, sigma * rng::standard_normal(&mut weight_rng))
            }
        };
        let rotation = if sub.rotated {
            let mut rot_rng = rng::stream(rng::mix_seeds(seed, ROTATION_STREAM_BASE + k as u64));
            Some(random_orthogonal(&mut rot_rng, sub.size)?)
        } else {
            None
        };
        components.push(Component {
            start,
            size: sub.size,
            weight,
            rotation,
            kind: ComponentFunction::Base(sub.base),
        });
        start += sub.size;
    }

    Ok(ProblemInstance {
        spec: spec.clone(),
        n,
        shift,
        components,
        sep_start: start,
        scale: 1.0,
        seed,
        fe_count: AtomicU64::new(0),
    })
}

/// The canonical two-pair quadratic `w1*(x1-x2)^2 + w2*(x3-x4)^2` on
/// `[-1, 1]^4` with zero shift.
///
/// Its pair differences are exactly representable, which makes it the
/// reference case for interaction quantities and weight-imbalance behavior.
pub fn example1(w1: f64, w2: f64) -> Result<ProblemInstance> {
    for (name, w) in [("w1", w1), ("w2", w2)] {
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "{name} = {w} must be finite and positive"
            )));
        }
    }
    let spec = ProblemSpec {
        separable_dims: 0,
        separable_base: BaseFunctionKind::Sphere,
        subcomponents: vec![
            SubcomponentSpec {
                size: 2,
                base: BaseFunctionKind::Sphere,
                rotated: false,
                weight: w1,
            },
            SubcomponentSpec {
                size: 2,
                base: BaseFunctionKind::Sphere,
                rotated: false,
                weight: w2,
            },
        ],
        lower_bound: -1.0,
        upper_bound: 1.0,
        weight_mode: WeightMode::Balanced,
    };
    let components = vec![
        Component {
            start: 0,
            size: 2,
            weight: w1,
            rotation: None,
            kind: ComponentFunction::PairDiffSquare,
        },
        Component {
            start: 2,
            size: 2,
            weight: w2,
            rotation: None,
            kind: ComponentFunction::PairDiffSquare,
        },
    ];
    Ok(ProblemInstance {
        spec,
        n: 4,
        shift: vec![0.0; 4],
        components,
        sep_start: 4,
        scale: 1.0,
        seed: 0,
        fe_count: AtomicU64::new(0),
    })
}

/// Random orthogonal matrix: Gaussian fill, then Gram-Schmidt with a
/// second orthogonalization pass. Row-major `s x s`.
fn random_orthogonal(rng: &mut rand_chacha::ChaCha8Rng, s: usize) -> Result<Vec<f64>> {
    let mut a: Vec<f64> = (0..s * s).map(|_| rng::standard_normal(rng)).collect();
    for j in 0..s {
        for _pass in 0..2 {
            for i in 0..j {
                let mut dot = 0.0;
                for r in 0..s {
                    dot += a[r * s + i] * a[r * s + j];
                }
                for r in 0..s {
                    a[r * s + j] -= dot * a[r * s + i];
                }
            }
        }
        let mut norm_sq = 0.0;
        for r in 0..s {
            norm_sq += a[r * s + j] * a[r * s + j];
        }
        let norm = math::sqrt(norm_sq);
        if norm < 1e-12 {
            return Err(Error::InvalidParameter(String::from(
                "degenerate random matrix during orthogonalization",
            )));
        }
        for r in 0..s {
            a[r * s + j] /= norm;
        }
    }
    let err = orthogonality_error(&a, s);
    if err >= 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "rotation orthogonality error {err} exceeds 1e-10"
        )));
    }
    Ok(a)
}

/// Max-norm of `R^T R - I`.
pub(crate) fn orthogonality_error(r: &[f64], s: usize) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..s {
        for j in 0..s {
            let mut dot = 0.0;
            for k in 0..s {
                dot += r[k * s + i] * r[k * s + j];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).abs());
        }
    }
    worst
}
