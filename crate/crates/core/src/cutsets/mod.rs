//! Exposed boundaries, minimal cutsets from a vertex to the horizon, their
//! enumeration, and randomized minimum-cut counting.
//!
//! A set of edges `F` is a cutset from `v` when `v`'s component in
//! `(V, E \ F)` avoids the horizon; it is minimal when no proper subset is a
//! cutset. The exposed boundary of a set `S` consists of the boundary edges
//! whose outer endpoint still reaches the horizon in `V \ S`.

mod enumerate;
mod karger;

pub use enumerate::{
    enumerate_minimal_cutsets_bruteforce, enumerate_minimal_cutsets_by_components, QnTable,
    COMPONENT_CAP, EDGE_CAP,
};
pub use karger::{default_karger_trials, karger_count_min_cuts, KargerReport};

use crate::error::{Error, Result};
use crate::graph_core::{EdgeSet, Graph, VertexId, VertexSet};
use serde::Serialize;

/// A minimal cutset from `source` to the horizon.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cutset {
    edges: EdgeSet,
    source: VertexId,
}

impl Cutset {
    /// Validates minimality before wrapping.
    pub fn new(graph: &Graph, edges: EdgeSet, source: VertexId) -> Result<Self> {
        if graph.is_horizon(source) {
            return Err(Error::precondition(format!(
                "source {source} lies in the horizon"
            )));
        }
        if let Some(&e) = edges.ids().iter().find(|&&e| e >= graph.n_edges()) {
            return Err(Error::EdgeOutOfRange {
                edge: e,
                n_edges: graph.n_edges(),
            });
        }
        if !is_minimal_cutset(graph, &edges, source) {
            return Err(Error::precondition(format!(
                "{:?} is not a minimal cutset from {source}",
                edges.ids()
            )));
        }
        Ok(Cutset { edges, source })
    }

    pub(crate) fn new_unchecked(edges: EdgeSet, source: VertexId) -> Self {
        Cutset { edges, source }
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn edge_ids(&self) -> &[usize] {
        self.edges.ids()
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

/// A minimal cutset with the component `A` of its source in `(V, E \ Π)` and
/// the inner vertices `B = {e ∩ A : e ∈ Π}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CutsetDecomposition {
    pub cutset: Cutset,
    pub component: VertexSet,
    pub inner: VertexSet,
}

fn edge_mask(graph: &Graph, f: &EdgeSet) -> Vec<bool> {
    let mut mask = vec![false; graph.n_edges()];
    for &e in f.ids() {
        mask[e] = true;
    }
    mask
}

/// Component of `v` once the edges flagged in `removed` are deleted.
pub(crate) fn component_without(graph: &Graph, v: VertexId, removed: &[bool]) -> VertexSet {
    graph.reach_from([v], |_| true, |e| !removed[e])
}

/// Whether deleting `f` leaves `v` in a component that avoids the horizon.
pub fn is_cutset(graph: &Graph, f: &EdgeSet, v: VertexId) -> bool {
    let removed = edge_mask(graph, f);
    !component_without(graph, v, &removed).intersects(graph.horizon())
}

/// Checks both conditions directly: `f` is a cutset from `v`, and `f \ {e}`
/// is not, for every `e ∈ f`.
pub fn is_minimal_cutset(graph: &Graph, f: &EdgeSet, v: VertexId) -> bool {
    if graph.is_horizon(v) {
        return false;
    }
    let mut removed = edge_mask(graph, f);
    if component_without(graph, v, &removed).intersects(graph.horizon()) {
        return false;
    }
    for &e in f.ids() {
        removed[e] = false;
        let still_cut = !component_without(graph, v, &removed).intersects(graph.horizon());
        removed[e] = true;
        if still_cut {
            return false;
        }
    }
    true
}

/// Boundary edges `{u, w}` with `u ∈ s` and `w` connected to the horizon in
/// `V \ s`.
pub fn exposed_boundary(graph: &Graph, s: &VertexSet) -> Result<EdgeSet> {
    if let Some(z) = s.iter().find(|&v| graph.is_horizon(v)) {
        return Err(Error::precondition(format!(
            "set contains horizon vertex {z}"
        )));
    }
    let outside = graph.reaches_horizon_avoiding(s);
    Ok(exposed_boundary_given_reach(graph, s, &outside))
}

pub(crate) fn exposed_boundary_given_reach(
    graph: &Graph,
    s: &VertexSet,
    outside_reach: &VertexSet,
) -> EdgeSet {
    let mut ids = Vec::new();
    for u in s.iter() {
        for &(e, w) in graph.incident(u) {
            if outside_reach.contains(w) {
                ids.push(e);
            }
        }
    }
    EdgeSet::new(ids)
}

/// Computes `(A, B)` for a minimal cutset and checks `∂A = ∂_∞A = Π`.
pub fn decompose(graph: &Graph, cutset: &Cutset) -> Result<CutsetDecomposition> {
    let removed = edge_mask(graph, cutset.edges());
    let component = component_without(graph, cutset.source(), &removed);
    let mut inner = VertexSet::empty(graph.n_vertices());
    for &e in cutset.edge_ids() {
        let (u, v) = graph.edge(e);
        for w in [u, v] {
            if component.contains(w) {
                inner.insert(w);
            }
        }
    }
    let boundary = EdgeSet::new(graph.boundary(&component));
    if &boundary != cutset.edges() {
        return Err(Error::invariant(format!(
            "boundary of the component {:?} differs from the cutset {:?}",
            boundary.ids(),
            cutset.edge_ids()
        )));
    }
    let exposed = exposed_boundary(graph, &component)?;
    if &exposed != cutset.edges() {
        return Err(Error::invariant(format!(
            "exposed boundary of the component {:?} differs from the cutset {:?}",
            exposed.ids(),
            cutset.edge_ids()
        )));
    }
    Ok(CutsetDecomposition {
        cutset: cutset.clone(),
        component,
        inner,
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::graph_core::Graph;

    pub fn p5() -> Graph {
        Graph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4)], [0, 4]).unwrap()
    }

    /// K_{1,3} with centre 0 and leaves in the horizon.
    pub fn star3() -> Graph {
        Graph::new(4, vec![(0, 1), (0, 2), (0, 3)], [1, 2, 3]).unwrap()
    }

    pub fn grid3() -> Graph {
        crate::graph_core::Family::Grid {
            width: 3,
            height: 3,
            torus: false,
        }
        .build(&crate::graph_core::HorizonSpec::Boundary)
        .unwrap()
    }
}
