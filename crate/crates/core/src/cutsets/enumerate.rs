use super::{exposed_boundary_given_reach, is_minimal_cutset, Cutset};
use crate::error::{Error, Result};
use crate::graph_core::{for_each_connected_set, EdgeSet, Graph, VertexId, VertexSet};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

/// Default edge cap for the brute-force enumeration.
pub const EDGE_CAP: usize = 20;
/// Default cap on connected sets visited by the component enumeration.
pub const COMPONENT_CAP: usize = 1 << 22;

/// Counts `|Q_n(v)|` of minimal cutsets from one vertex, by size, for
/// `n = 1..=n_max`, together with the cutsets themselves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QnTable {
    pub vertex: VertexId,
    pub n_max: usize,
    pub counts: BTreeMap<usize, u64>,
    pub cutsets: BTreeSet<EdgeSet>,
}

impl QnTable {
    fn from_cutsets(vertex: VertexId, n_max: usize, cutsets: BTreeSet<EdgeSet>) -> Self {
        let mut counts: BTreeMap<usize, u64> = (1..=n_max).map(|n| (n, 0)).collect();
        for c in &cutsets {
            *counts.entry(c.len()).or_default() += 1;
        }
        QnTable {
            vertex,
            n_max,
            counts,
            cutsets,
        }
    }

    pub fn count(&self, n: usize) -> u64 {
        self.counts.get(&n).copied().unwrap_or(0)
    }

    /// `max_n q_n^{1/n}` over the recorded sizes; 0 when nothing was found.
    pub fn kappa_estimate(&self) -> f64 {
        self.counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&n, &c)| (c as f64).powf(1.0 / n as f64))
            .fold(0.0, f64::max)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Cutsets of one size, as validated [`Cutset`] values.
    pub fn cutsets_of_size(&self, n: usize) -> Vec<Cutset> {
        self.cutsets
            .iter()
            .filter(|c| c.len() == n)
            .map(|c| Cutset::new_unchecked(c.clone(), self.vertex))
            .collect()
    }

    pub fn all_cutsets(&self) -> Vec<Cutset> {
        self.cutsets
            .iter()
            .map(|c| Cutset::new_unchecked(c.clone(), self.vertex))
            .collect()
    }
}

fn check_source(graph: &Graph, v: VertexId) -> Result<()> {
    if v >= graph.n_vertices() {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n_vertices: graph.n_vertices(),
        });
    }
    if graph.is_horizon(v) {
        return Err(Error::precondition(format!(
            "vertex {v} lies in the horizon"
        )));
    }
    Ok(())
}

/// Tests every edge subset of size at most `n_max` for minimality.
pub fn enumerate_minimal_cutsets_bruteforce(
    graph: &Graph,
    v: VertexId,
    n_max: usize,
    edge_cap: usize,
) -> Result<QnTable> {
    check_source(graph, v)?;
    let m = graph.n_edges();
    if m > edge_cap || m >= 64 {
        return Err(Error::CapExceeded {
            what: "brute-force cutset enumeration (edges)",
            cap: edge_cap.min(63),
            actual: m,
        });
    }
    let mut found = BTreeSet::new();
    for mask in 1u64..(1u64 << m) {
        if mask.count_ones() as usize > n_max {
            continue;
        }
        let f = EdgeSet::new((0..m).filter(|&e| mask >> e & 1 == 1).collect());
        if is_minimal_cutset(graph, &f, v) {
            found.insert(f);
        }
    }
    Ok(QnTable::from_cutsets(v, n_max, found))
}

/// Enumerates connected sets `S ∋ v` avoiding the horizon and collects their
/// exposed boundaries. Every minimal cutset `Π` is `∂_∞A` for the component
/// `A` of `v` in `(V, E \ Π)`, so nothing is missed; duplicates from
/// different `S` collapse on the sorted edge list.
pub fn enumerate_minimal_cutsets_by_components(
    graph: &Graph,
    v: VertexId,
    n_max: usize,
    set_cap: usize,
) -> Result<QnTable> {
    check_source(graph, v)?;
    let allowed = VertexSet::from_iter(graph.n_vertices(), graph.interior());
    let mut found = BTreeSet::new();
    for_each_connected_set(graph, v, &allowed, set_cap, |s| {
        let outside = graph.reaches_horizon_avoiding(s);
        let boundary = exposed_boundary_given_reach(graph, s, &outside);
        if !boundary.is_empty() && boundary.len() <= n_max {
            found.insert(boundary);
        }
    })?;
    Ok(QnTable::from_cutsets(v, n_max, found))
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn path_five_from_the_middle() {
        let g = p5();
        let brute = enumerate_minimal_cutsets_bruteforce(&g, 2, 4, EDGE_CAP).unwrap();
        assert_eq!(brute.count(1), 0);
        assert_eq!(brute.count(2), 4);
        assert_eq!(brute.count(3), 0);
        assert_eq!(brute.count(4), 0);
        let comp = enumerate_minimal_cutsets_by_components(&g, 2, 4, COMPONENT_CAP).unwrap();
        assert_eq!(brute, comp);
        assert!((brute.kappa_estimate() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn star_has_one_cutset() {
        let g = star3();
        for table in [
            enumerate_minimal_cutsets_bruteforce(&g, 0, 3, EDGE_CAP).unwrap(),
            enumerate_minimal_cutsets_by_components(&g, 0, 3, COMPONENT_CAP).unwrap(),
        ] {
            assert_eq!(table.count(3), 1);
            assert_eq!(table.total(), 1);
        }
    }

    #[test]
    fn grid_centre_has_one_size_four_cutset() {
        let g = grid3();
        let brute = enumerate_minimal_cutsets_bruteforce(&g, 4, 4, EDGE_CAP).unwrap();
        assert_eq!(brute.count(4), 1);
        assert_eq!(brute.total(), 1);
        assert_eq!(
            brute,
            enumerate_minimal_cutsets_by_components(&g, 4, 4, COMPONENT_CAP).unwrap()
        );
    }

    #[test]
    fn four_cycle_with_one_horizon_vertex() {
        let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)], [0]).unwrap();
        let brute = enumerate_minimal_cutsets_bruteforce(&g, 2, 4, EDGE_CAP).unwrap();
        let comp = enumerate_minimal_cutsets_by_components(&g, 2, 4, COMPONENT_CAP).unwrap();
        assert_eq!(brute, comp);
        // pairs separating 2 from 0: one edge on each side of the cycle
        assert_eq!(brute.count(2), 4);
    }

    #[test]
    fn long_path_has_quadratic_q2() {
        for l in 1..6usize {
            let n = 2 * l + 1;
            let g = Graph::new(n, (0..n - 1).map(|i| (i, i + 1)).collect(), [0, n - 1]).unwrap();
            let t = enumerate_minimal_cutsets_by_components(&g, l, 2, COMPONENT_CAP).unwrap();
            assert_eq!(t.count(2), (l * l) as u64);
        }
    }

    #[test]
    fn caps_and_sources_are_checked() {
        let g = p5();
        assert!(matches!(
            enumerate_minimal_cutsets_bruteforce(&g, 2, 4, 3),
            Err(Error::CapExceeded { .. })
        ));
        assert!(enumerate_minimal_cutsets_bruteforce(&g, 0, 4, EDGE_CAP).is_err());
    }
}
