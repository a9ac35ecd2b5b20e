use super::sets::VertexSet;
use crate::error::{Error, Result};
use std::collections::{HashSet, VecDeque};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Target of a connectivity query: a single vertex or the horizon set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Vertex(VertexId),
    Horizon,
}

/// Finite simple connected graph with a distinguished horizon set.
///
/// The horizon plays the role of "infinity": a vertex is connected to
/// infinity inside a set `S` when a path inside `S` reaches a horizon vertex.
/// Edge ids are assigned in insertion order and never change.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n_vertices: usize,
    edges: Vec<(VertexId, VertexId)>,
    horizon: VertexSet,
    adjacency: Vec<Vec<(EdgeId, VertexId)>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges, out-of-range
    /// endpoints and disconnected inputs.
    pub fn new(
        n_vertices: usize,
        edges: Vec<(VertexId, VertexId)>,
        horizon: impl IntoIterator<Item = VertexId>,
    ) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n_vertices];
        for (id, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n_vertices {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        n_vertices,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { vertex: u });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge { u, v });
            }
            adjacency[u].push((id, v));
            adjacency[v].push((id, u));
        }
        let mut hz = VertexSet::empty(n_vertices);
        for z in horizon {
            if z >= n_vertices {
                return Err(Error::VertexOutOfRange {
                    vertex: z,
                    n_vertices,
                });
            }
            hz.insert(z);
        }
        let g = Graph {
            n_vertices,
            edges,
            horizon: hz,
            adjacency,
        };
        if n_vertices > 0 {
            let seen = g.reach_from([0], |_| true, |_| true);
            if let Some(v) = (0..n_vertices).find(|&v| !seen.contains(v)) {
                return Err(Error::Disconnected { vertex: v });
            }
        }
        Ok(g)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// Endpoint of `e` other than `v`.
    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn horizon(&self) -> &VertexSet {
        &self.horizon
    }

    pub fn is_horizon(&self, v: VertexId) -> bool {
        self.horizon.contains(v)
    }

    /// Non-horizon vertices in increasing order.
    pub fn interior(&self) -> Vec<VertexId> {
        (0..self.n_vertices)
            .filter(|&v| !self.is_horizon(v))
            .collect()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    /// Incident `(edge id, neighbour)` pairs of `v`, in edge-id order.
    pub fn incident(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        &self.adjacency[v]
    }

    pub fn neighbours(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency[v].iter().map(|&(_, w)| w)
    }

    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.adjacency[u]
            .iter()
            .find(|&&(_, w)| w == v)
            .map(|&(e, _)| e)
    }

    /// Same vertices and edges with a different horizon.
    pub fn with_horizon(&self, horizon: impl IntoIterator<Item = VertexId>) -> Result<Graph> {
        Graph::new(self.n_vertices, self.edges.clone(), horizon)
    }

    /// Induced subgraph on `vertices` (relabelled `0..k` in increasing id
    /// order) together with the local-to-global vertex map and the global id
    /// of every local edge. The horizon of the result is `local_horizon`.
    pub fn induced(
        &self,
        vertices: &VertexSet,
        local_horizon: impl IntoIterator<Item = VertexId>,
    ) -> Result<(Graph, Vec<VertexId>, Vec<EdgeId>)> {
        let map: Vec<VertexId> = vertices.iter().collect();
        let mut local = vec![usize::MAX; self.n_vertices];
        for (i, &v) in map.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        let mut edge_map = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if vertices.contains(u) && vertices.contains(v) {
                edges.push((local[u], local[v]));
                edge_map.push(e);
            }
        }
        let g = Graph::new(map.len(), edges, local_horizon)?;
        Ok((g, map, edge_map))
    }

    /// Breadth-first closure from `sources`, entering a vertex only if
    /// `enter(v)` holds and crossing an edge only if `cross(e)` holds. Sources
    /// are always included.
    pub fn reach_from(
        &self,
        sources: impl IntoIterator<Item = VertexId>,
        enter: impl Fn(VertexId) -> bool,
        cross: impl Fn(EdgeId) -> bool,
    ) -> VertexSet {
        let mut seen = VertexSet::empty(self.n_vertices);
        let mut queue = VecDeque::new();
        for s in sources {
            if seen.insert(s) {
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &(e, w) in &self.adjacency[u] {
                if !seen.contains(w) && cross(e) && enter(w) {
                    seen.insert(w);
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Vertices outside `removed` that are connected to the horizon within
    /// `V \ removed` (horizon vertices outside `removed` included).
    pub fn reaches_horizon_avoiding(&self, removed: &VertexSet) -> VertexSet {
        self.reach_from(
            self.horizon.iter().filter(|&z| !removed.contains(z)),
            |w| !removed.contains(w),
            |_| true,
        )
    }

    /// Whether `a` is joined to `b` by a path inside `within`.
    ///
    /// For `Target::Horizon` the path stays in `within` until its final
    /// vertex, which must be a horizon vertex; `a` itself counts when it
    /// lies in the horizon. A vertex target outside `within` yields `false`.
    pub fn connected_in(&self, within: &VertexSet, a: VertexId, b: Target) -> bool {
        if !within.contains(a) {
            return false;
        }
        match b {
            Target::Vertex(b) => {
                within.contains(b)
                    && self
                        .reach_from([a], |w| within.contains(w), |_| true)
                        .contains(b)
            }
            Target::Horizon => {
                if self.is_horizon(a) {
                    return true;
                }
                let reach = self.reach_from([a], |w| within.contains(w), |_| true);
                let hit = reach
                    .iter()
                    .any(|u| self.is_horizon(u) || self.neighbours(u).any(|w| self.is_horizon(w)));
                hit
            }
        }
    }

    /// Edge boundary of `s`: edges with exactly one endpoint in `s`.
    pub fn boundary(&self, s: &VertexSet) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| s.contains(u) != s.contains(v))
            .map(|(e, _)| e)
            .collect()
    }

    /// Whether `s` induces a connected subgraph (the empty set is not).
    pub fn is_connected_set(&self, s: &VertexSet) -> bool {
        match s.iter().next() {
            None => false,
            Some(start) => self.reach_from([start], |w| s.contains(w), |_| true).len() == s.len(),
        }
    }

    /// Serialises to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("v {}\n", self.n_vertices);
        if !self.horizon.is_empty() {
            out.push('z');
            for z in self.horizon.iter() {
                out.push_str(&format!(" {z}"));
            }
            out.push('\n');
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!("e {u} {v}\n"));
        }
        out
    }
}
