use super::open_reach;
use crate::cutsets::exposed_boundary;
use crate::graph_core::{EdgeSet, Graph, VertexId, VertexSet};
use rand::Rng;
use serde::Serialize;

/// Open/closed state of every edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PercConfig {
    n_edges: usize,
    words: Vec<u64>,
}

impl PercConfig {
    pub fn all_closed(n_edges: usize) -> Self {
        PercConfig {
            n_edges,
            words: vec![0; n_edges.div_ceil(64)],
        }
    }

    /// Bit `e` of `mask` is the state of edge `e`.
    pub fn from_mask(n_edges: usize, mask: u64) -> Self {
        assert!(n_edges <= 64);
        let mut c = Self::all_closed(n_edges);
        if n_edges > 0 {
            let keep = if n_edges == 64 {
                u64::MAX
            } else {
                (1u64 << n_edges) - 1
            };
            c.words[0] = mask & keep;
        }
        c
    }

    pub fn from_open(n_edges: usize, open: impl IntoIterator<Item = usize>) -> Self {
        let mut c = Self::all_closed(n_edges);
        for e in open {
            c.set(e, true);
        }
        c
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn is_open(&self, e: usize) -> bool {
        self.words[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn set(&mut self, e: usize, open: bool) {
        assert!(e < self.n_edges, "edge {e} out of range");
        if open {
            self.words[e / 64] |= 1 << (e % 64);
        } else {
            self.words[e / 64] &= !(1 << (e % 64));
        }
    }

    pub fn open_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn open_edges(&self) -> Vec<usize> {
        (0..self.n_edges).filter(|&e| self.is_open(e)).collect()
    }
}

/// Each edge open independently with probability `p`.
pub fn sample_config(graph: &Graph, p: f64, rng: &mut impl Rng) -> PercConfig {
    let mut c = PercConfig::all_closed(graph.n_edges());
    for e in 0..graph.n_edges() {
        if rng.random::<f64>() < p {
            c.set(e, true);
        }
    }
    c
}

/// The open cluster of a vertex. For a finite cluster `exposed` holds its
/// exposed boundary, which is always a minimal cutset from the source.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterReport {
    pub source: VertexId,
    pub cluster: VertexSet,
    pub finite: bool,
    pub exposed: Option<EdgeSet>,
}

pub fn cluster_report(graph: &Graph, config: &PercConfig, v: VertexId) -> ClusterReport {
    let cluster = open_reach(graph, config, v, None);
    let finite = !cluster.intersects(graph.horizon());
    let exposed = if finite {
        Some(exposed_boundary(graph, &cluster).expect("finite cluster avoids the horizon"))
    } else {
        None
    };
    ClusterReport {
        source: v,
        cluster,
        finite,
        exposed,
    }
}
