//! From threshold decision to variable partition.
//!
//! [`classify_pairs`] turns the interaction structure plus a threshold into
//! a boolean adjacency matrix; [`connected_components`] extracts groups from
//! it with a union-find. Variables sharing a neighbor merge transitively
//! even if their own pair was classified separable; that is the intended
//! behavior of component-based grouping.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::interaction::InteractionData;
use crate::matrix::pair_indices;
use crate::thresholds::{Basis, Strategy, ThresholdDecision, ThresholdValue, Verdict, ZetaMatrix};
use crate::Result;

/// Symmetric boolean adjacency matrix over variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    n: usize,
    data: Vec<bool>,
}

impl Adjacency {
    /// Edge-free adjacency over `n` variables.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            data: vec![false; n * n],
        }
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Whether `p` and `q` are connected.
    pub fn get(&self, p: usize, q: usize) -> bool {
        self.data[p * self.n + q]
    }

    /// Sets both `(p, q)` and `(q, p)`.
    pub fn set_pair(&mut self, p: usize, q: usize, connected: bool) {
        self.data[p * self.n + q] = connected;
        self.data[q * self.n + p] = connected;
    }

    /// Number of edges (upper triangle).
    pub fn edge_count(&self) -> usize {
        pair_indices(self.n)
            .filter(|&(p, q)| self.get(p, q))
            .count()
    }
}

/// Record of the threshold a decomposition was produced with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdRecord {
    /// One scalar for all pairs.
    Scalar(f64),
    /// Thresholds were per-pair.
    PerPair,
}

/// A variable partition: nonseparable groups plus separable rest.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionResult {
    /// Problem dimension.
    pub n: usize,
    /// Disjoint groups, each with at least two members, ordered by their
    /// smallest member.
    pub nonsep_groups: Vec<BTreeSet<usize>>,
    /// Variables outside every group.
    pub sep_vars: BTreeSet<usize>,
    /// Strategy that produced the threshold.
    pub strategy: Strategy,
    /// The applied threshold.
    pub eps_used: ThresholdRecord,
}

impl DecompositionResult {
    /// Total number of grouped variables.
    pub fn nonsep_var_count(&self) -> usize {
        self.nonsep_groups.iter().map(|g| g.len()).sum()
    }

    /// Verifies the partition invariants (disjoint, total, groups >= 2).
    pub fn check_partition(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for group in &self.nonsep_groups {
            if group.len() < 2 {
                return Err(Error::InvalidSpec("group with fewer than 2 members".into()));
            }
            for &v in group {
                if v >= self.n || !seen.insert(v) {
                    return Err(Error::InvalidSpec(alloc::format!(
                        "variable {v} repeated or out of range"
                    )));
                }
            }
        }
        for &v in &self.sep_vars {
            if v >= self.n || !seen.insert(v) {
                return Err(Error::InvalidSpec(alloc::format!(
                    "variable {v} repeated or out of range"
                )));
            }
        }
        if seen.len() != self.n {
            return Err(Error::InvalidSpec(alloc::format!(
                "partition covers {} of {} variables",
                seen.len(),
                self.n
            )));
        }
        Ok(())
    }
}

/// Classifies every pair against the decision's threshold.
///
/// The compared value is `tau` for a raw-basis decision and the indicator
/// for an indicator-basis decision (`zeta` must be supplied exactly in that
/// case). A pair is connected iff its value strictly exceeds its threshold.
/// Pre-check verdicts short-circuit to the empty or the complete graph.
pub fn classify_pairs(
    data: &InteractionData,
    zeta: Option<&ZetaMatrix>,
    decision: &ThresholdDecision,
) -> Result<Adjacency> {
    match (decision.basis, zeta) {
        (Basis::Indicator, Some(z)) if z.n() == data.n() => {}
        (Basis::RawTau, None) => {}
        (Basis::Indicator, Some(z)) => {
            return Err(Error::DimensionMismatch {
                expected: data.n(),
                got: z.n(),
            })
        }
        _ => return Err(Error::BasisMismatch),
    }
    let n = data.n();
    let mut adjacency = Adjacency::new(n);
    match decision.verdict {
        Verdict::FullySeparable => {}
        Verdict::FullyNonseparable => {
            for (p, q) in pair_indices(n) {
                adjacency.set_pair(p, q, true);
            }
        }
        Verdict::Partial => {
            for (p, q) in pair_indices(n) {
                let value = match decision.basis {
                    Basis::RawTau => data.tau(p, q),
                    Basis::Indicator => zeta.unwrap().get(p, q),
                };
                adjacency.set_pair(p, q, value > decision.eps_for(p, q));
            }
        }
    }
    Ok(adjacency)
}

/// Union-find with path compression and union by size.
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cursor = x;
        while self.parent[cursor] != root {
            let next = self.parent[cursor];
            self.parent[cursor] = root;
            cursor = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// Extracts connected components of size >= 2 as groups; singletons become
/// separable variables. Groups come out ordered by their smallest member.
pub fn connected_components(
    adjacency: &Adjacency,
    decision: &ThresholdDecision,
) -> DecompositionResult {
    let n = adjacency.n();
    let mut uf = UnionFind::new(n);
    for (p, q) in pair_indices(n) {
        if adjacency.get(p, q) {
            uf.union(p, q);
        }
    }
    let mut members: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for v in 0..n {
        let root = uf.find(v);
        members[root].insert(v);
    }
    let mut nonsep_groups = Vec::new();
    let mut sep_vars = BTreeSet::new();
    for set in members {
        match set.len() {
            0 => {}
            1 => {
                sep_vars.extend(set);
            }
            _ => nonsep_groups.push(set),
        }
    }
    nonsep_groups.sort_by_key(|g| *g.first().expect("groups are nonempty"));
    DecompositionResult {
        n,
        nonsep_groups,
        sep_vars,
        strategy: decision.strategy,
        eps_used: match &decision.value {
            ThresholdValue::Scalar(eps) => ThresholdRecord::Scalar(*eps),
            ThresholdValue::PerPair(_) => ThresholdRecord::PerPair,
        },
    }
}

/// Classifies pairs and extracts components in one step.
pub fn decompose(
    data: &InteractionData,
    zeta: Option<&ZetaMatrix>,
    decision: &ThresholdDecision,
) -> Result<DecompositionResult> {
    let adjacency = classify_pairs(data, zeta, decision)?;
    Ok(connected_components(&adjacency, decision))
}
