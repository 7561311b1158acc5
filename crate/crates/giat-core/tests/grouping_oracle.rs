//! Union-find grouping checked against an independent breadth-first
//! component search, plus partition properties on arbitrary graphs.

use std::collections::{BTreeSet, VecDeque};

use giat_core::{
    connected_components, Adjacency, Basis, Strategy, ThresholdDecision, ThresholdValue, Verdict,
};
use proptest::prelude::*;

fn decision() -> ThresholdDecision {
    ThresholdDecision {
        strategy: Strategy::Giat,
        basis: Basis::Indicator,
        value: ThresholdValue::Scalar(0.0),
        verdict: Verdict::Partial,
    }
}

/// Breadth-first component search; the independent oracle.
fn bfs_components(adjacency: &Adjacency) -> (Vec<BTreeSet<usize>>, BTreeSet<usize>) {
    let n = adjacency.n();
    let mut visited = vec![false; n];
    let mut groups = Vec::new();
    let mut seps = BTreeSet::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut component = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        while let Some(v) = queue.pop_front() {
            component.insert(v);
            for (w, seen) in visited.iter_mut().enumerate() {
                if w != v && adjacency.get(v, w) && !*seen {
                    *seen = true;
                    queue.push_back(w);
                }
            }
        }
        if component.len() >= 2 {
            groups.push(component);
        } else {
            seps.extend(component);
        }
    }
    groups.sort_by_key(|g| *g.first().unwrap());
    (groups, seps)
}

/// Small deterministic generator for random graphs.
fn seeded_graph(seed: u64) -> Adjacency {
    let mut state = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xD1B5_4A32_D192_ED03;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let n = 2 + (next() % 11) as usize; // 2..=12
    let density = (next() % 100) as f64 / 100.0;
    let mut adjacency = Adjacency::new(n);
    for p in 0..n {
        for q in p + 1..n {
            let coin = (next() % 1000) as f64 / 1000.0;
            adjacency.set_pair(p, q, coin < density);
        }
    }
    adjacency
}

#[test]
fn union_find_matches_bfs_on_200_random_graphs() {
    for seed in 0..200u64 {
        let adjacency = seeded_graph(seed);
        let result = connected_components(&adjacency, &decision());
        let (groups, seps) = bfs_components(&adjacency);
        assert_eq!(result.nonsep_groups, groups, "seed {seed}");
        assert_eq!(result.sep_vars, seps, "seed {seed}");
        result.check_partition().unwrap();
    }
}

proptest! {
    #[test]
    fn partition_is_total_and_disjoint(edges in prop::collection::vec(any::<bool>(), 0..191), n in 2usize..20) {
        let mut adjacency = Adjacency::new(n);
        let mut bit = 0;
        for p in 0..n {
            for q in p + 1..n {
                let connected = edges.get(bit).copied().unwrap_or(false);
                adjacency.set_pair(p, q, connected);
                bit += 1;
            }
        }
        let result = connected_components(&adjacency, &decision());
        prop_assert!(result.check_partition().is_ok());
        // idempotence: grouping the induced subgraph of any group returns it whole
        for group in &result.nonsep_groups {
            let vars: Vec<usize> = group.iter().copied().collect();
            let mut induced = Adjacency::new(vars.len());
            for (a, &va) in vars.iter().enumerate() {
                for (b, &vb) in vars.iter().enumerate().skip(a + 1) {
                    induced.set_pair(a, b, adjacency.get(va, vb));
                }
            }
            let sub = connected_components(&induced, &decision());
            prop_assert_eq!(sub.nonsep_groups.len(), 1);
            prop_assert_eq!(sub.nonsep_groups[0].len(), vars.len());
        }
    }
}
