use super::graph::{EdgeId, Graph, VertexId};
use super::sets::VertexSet;
use crate::error::{Error, Result};

/// A base graph together with the graph obtained by replacing every edge
/// with a path of length `order`.
///
/// Layout of the derived graph: base vertices keep their ids; base edge `e`
/// with endpoints `(u, v)` contributes midpoints numbered
/// `n + (order - 1) * e + j` for `j = 0..order-1`, listed from `u` towards
/// `v`, and derived edges `order * e + j` along that path.
#[derive(Clone, Debug)]
pub struct SubdivisionMap {
    base: Graph,
    derived: Graph,
    order: usize,
}

impl SubdivisionMap {
    pub fn new(base: &Graph, order: usize) -> Result<Self> {
        if !(2..=3).contains(&order) {
            return Err(Error::precondition(format!(
                "subdivision order must be 2 or 3, got {order}"
            )));
        }
        let n = base.n_vertices();
        let per_edge = order - 1;
        let mut edges = Vec::with_capacity(order * base.n_edges());
        for (e, &(u, v)) in base.edges().iter().enumerate() {
            let mut path = vec![u];
            path.extend((0..per_edge).map(|j| n + per_edge * e + j));
            path.push(v);
            edges.extend(path.windows(2).map(|w| (w[0], w[1])));
        }
        let derived = Graph::new(n + per_edge * base.n_edges(), edges, base.horizon().iter())?;
        Ok(SubdivisionMap {
            base: base.clone(),
            derived,
            order,
        })
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn derived(&self) -> &Graph {
        &self.derived
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Midpoint vertices of base edge `e`, ordered from its first endpoint.
    pub fn midpoints(&self, e: EdgeId) -> Vec<VertexId> {
        let per_edge = self.order - 1;
        let start = self.base.n_vertices() + per_edge * e;
        (start..start + per_edge).collect()
    }

    /// The single midpoint of `e` in an order-2 subdivision.
    pub fn midpoint(&self, e: EdgeId) -> VertexId {
        debug_assert_eq!(self.order, 2);
        self.base.n_vertices() + e
    }

    /// Derived-graph edge joining the two midpoints of `e` (order 3 only).
    pub fn mid_edge(&self, e: EdgeId) -> EdgeId {
        debug_assert_eq!(self.order, 3);
        3 * e + 1
    }

    pub fn is_original(&self, v: VertexId) -> bool {
        v < self.base.n_vertices()
    }

    /// Base edge carrying derived vertex `v`, or `None` for original vertices.
    pub fn edge_of(&self, v: VertexId) -> Option<EdgeId> {
        let n = self.base.n_vertices();
        (v >= n).then(|| (v - n) / (self.order - 1))
    }

    /// Base edge that derived edge `e` subdivides.
    pub fn base_edge_of(&self, e: EdgeId) -> EdgeId {
        e / self.order
    }

    /// Image of a base vertex set: the vertices plus all midpoints of edges
    /// with both endpoints inside.
    pub fn lift_closed(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::empty(self.derived.n_vertices());
        for v in s.iter() {
            out.insert(v);
        }
        for (e, &(u, v)) in self.base.edges().iter().enumerate() {
            if s.contains(u) && s.contains(v) {
                for m in self.midpoints(e) {
                    out.insert(m);
                }
            }
        }
        out
    }

    /// Contracts every midpoint path back to a single edge. Returns the
    /// recovered edge list in base edge-id order.
    pub fn contract(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.base.n_edges());
        for e in 0..self.base.n_edges() {
            let mids = self.midpoints(e);
            let first = mids[0];
            let last = *mids.last().unwrap();
            let end_a = self
                .derived
                .neighbours(first)
                .find(|&w| self.is_original(w))
                .expect("first midpoint touches an original vertex");
            let end_b = self
                .derived
                .neighbours(last)
                .filter(|&w| self.is_original(w))
                .find(|&w| w != end_a || mids.len() > 1)
                .expect("last midpoint touches an original vertex");
            out.push((end_a, end_b));
        }
        out
    }
}

/// Convenience wrapper matching the operation name.
pub fn subdivide(graph: &Graph, order: usize) -> Result<SubdivisionMap> {
    SubdivisionMap::new(graph, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_order_two() {
        let g = Graph::new(2, vec![(0, 1)], []).unwrap();
        let sd = subdivide(&g, 2).unwrap();
        assert_eq!(sd.derived().n_vertices(), 3);
        assert_eq!(sd.midpoint(0), 2);
        assert_eq!(sd.derived().degree(2), 2);
        assert_eq!(sd.derived().edges(), &[(0, 2), (2, 1)]);
    }

    #[test]
    fn path_five_order_two() {
        let g = Graph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4)], [0, 4]).unwrap();
        let sd = subdivide(&g, 2).unwrap();
        let d = sd.derived();
        assert_eq!(d.n_vertices(), 9);
        assert!((5..9).all(|m| d.degree(m) == 2));
        assert!((0..5).all(|v| d.degree(v) == g.degree(v)));
        assert_eq!(d.horizon().to_vec(), vec![0, 4]);
    }

    #[test]
    fn triangle_order_three() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (2, 0)], []).unwrap();
        let sd = subdivide(&g, 3).unwrap();
        assert_eq!(sd.derived().n_vertices(), 9);
        assert_eq!(sd.derived().n_edges(), 9);
        assert_eq!(sd.midpoints(1), vec![5, 6]);
        assert_eq!(sd.derived().edge(sd.mid_edge(1)), (5, 6));
        assert_eq!(sd.edge_of(6), Some(1));
        assert_eq!(sd.edge_of(2), None);
    }

    #[test]
    fn rejects_other_orders() {
        let g = Graph::new(2, vec![(0, 1)], []).unwrap();
        assert!(subdivide(&g, 4).is_err());
    }

    #[test]
    fn contraction_recovers_base() {
        let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], [3]).unwrap();
        for order in [2, 3] {
            let sd = subdivide(&g, order).unwrap();
            let back = sd.contract();
            for (e, &(u, v)) in g.edges().iter().enumerate() {
                let (a, b) = back[e];
                assert_eq!((a.min(b), a.max(b)), (u.min(v), u.max(v)));
            }
        }
    }
}
