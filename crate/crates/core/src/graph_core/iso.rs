use super::connected::all_connected_sets;
use super::graph::Graph;
use super::sets::VertexSet;
use crate::error::{Error, Result};

/// Default cap on the number of non-horizon vertices for exhaustive subset
/// loops.
pub const SUBSET_CAP: usize = 20;

/// Which vertex sets the isoperimetric minimum ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoMode {
    /// Every non-empty subset of the non-horizon vertices (proper subsets of
    /// `V` when the horizon is empty). Limited to `cap` candidate vertices.
    AllSubsets { cap: usize },
    /// Connected subsets only, limited to `cap` sets.
    ConnectedOnly { cap: usize },
}

impl Default for IsoMode {
    fn default() -> Self {
        IsoMode::AllSubsets { cap: SUBSET_CAP }
    }
}

/// Weight `Σ_{u∈S} d_u`.
pub fn weight(graph: &Graph, s: &VertexSet) -> usize {
    s.iter().map(|v| graph.degree(v)).sum()
}

/// Isoperimetric profile: the least edge-boundary size over candidate sets
/// of weight at least `threshold`. `None` when no candidate is heavy enough.
pub fn iso_profile(graph: &Graph, threshold: usize, mode: IsoMode) -> Result<Option<usize>> {
    let candidates = graph.interior();
    let n = graph.n_vertices();
    let no_horizon = graph.horizon().is_empty();
    match mode {
        IsoMode::AllSubsets { cap } => {
            if candidates.len() > cap {
                return Err(Error::CapExceeded {
                    what: "isoperimetric subset enumeration (vertices)",
                    cap,
                    actual: candidates.len(),
                });
            }
            let k = candidates.len();
            let mut best: Option<usize> = None;
            let mut inside = vec![false; n];
            for mask in 1u64..(1u64 << k) {
                if no_horizon && mask == (1u64 << k) - 1 {
                    continue;
                }
                let mut w = 0;
                for (i, &v) in candidates.iter().enumerate() {
                    inside[v] = mask >> i & 1 == 1;
                    if inside[v] {
                        w += graph.degree(v);
                    }
                }
                if w < threshold {
                    continue;
                }
                let boundary = graph
                    .edges()
                    .iter()
                    .filter(|&&(u, v)| inside[u] != inside[v])
                    .count();
                best = Some(best.map_or(boundary, |b| b.min(boundary)));
            }
            Ok(best)
        }
        IsoMode::ConnectedOnly { cap } => {
            let allowed = VertexSet::from_iter(n, candidates.iter().copied());
            let sets = all_connected_sets(graph, &allowed, cap)?;
            Ok(sets
                .iter()
                .filter(|s| !(no_horizon && s.len() == n))
                .filter(|s| weight(graph, s) >= threshold)
                .map(|s| graph.boundary(s).len())
                .min())
        }
    }
}
