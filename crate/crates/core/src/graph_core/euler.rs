use super::graph::{EdgeId, VertexId};
use super::sets::UnionFind;
use crate::error::{Error, Result};
use std::collections::{BTreeSet, VecDeque};

/// Undirected multigraph; loops and parallel edges allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n_vertices: usize,
    edges: Vec<(VertexId, VertexId)>,
}

impl Multigraph {
    pub fn new(n_vertices: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        if let Some(&(u, v)) = edges
            .iter()
            .find(|&&(u, v)| u >= n_vertices || v >= n_vertices)
        {
            return Err(Error::VertexOutOfRange {
                vertex: u.max(v),
                n_vertices,
            });
        }
        Ok(Multigraph { n_vertices, edges })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    fn check_ids(&self, ids: &[EdgeId]) -> Result<()> {
        match ids.iter().find(|&&e| e >= self.edges.len()) {
            Some(&e) => Err(Error::EdgeOutOfRange {
                edge: e,
                n_edges: self.edges.len(),
            }),
            None => Ok(()),
        }
    }

    /// Degree sequence of the sub-multigraph on `ids` (a loop adds 2).
    pub fn degrees(&self, ids: &[EdgeId]) -> Vec<usize> {
        let mut deg = vec![0; self.n_vertices];
        for &e in ids {
            let (u, v) = self.edges[e];
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Whether `ids` touches every vertex and forms one component. A single
    /// vertex with no edges counts as spanning and connected.
    pub fn spans_connected(&self, ids: &[EdgeId]) -> bool {
        let mut uf = UnionFind::new(self.n_vertices);
        for &e in ids {
            let (u, v) = self.edges[e];
            uf.union(u, v);
        }
        uf.components() <= 1
    }

    pub fn is_spanning_tree(&self, ids: &[EdgeId]) -> bool {
        self.n_vertices > 0 && ids.len() + 1 == self.n_vertices && self.spans_connected(ids)
    }
}

/// Connected, spanning, all-even edge set inside `t1 ∪ t2`.
///
/// Pairs up the odd-degree vertices of `t1` and adds, over GF(2), the `t2`
/// path between each pair. Since the paths only use `t2` edges, every `t1`
/// edge survives and the result stays spanning and connected.
pub fn eulerian_from_two_trees(
    mg: &Multigraph,
    t1: &[EdgeId],
    t2: &[EdgeId],
) -> Result<Vec<EdgeId>> {
    mg.check_ids(t1)?;
    mg.check_ids(t2)?;
    let s1: BTreeSet<_> = t1.iter().copied().collect();
    if t2.iter().any(|e| s1.contains(e)) {
        return Err(Error::precondition("trees share an edge"));
    }
    for (name, t) in [("T1", t1), ("T2", t2)] {
        if !mg.is_spanning_tree(t) {
            return Err(Error::precondition(format!(
                "{name} is not a spanning tree"
            )));
        }
    }

    let odd: Vec<VertexId> = mg
        .degrees(t1)
        .iter()
        .enumerate()
        .filter(|(_, &d)| d % 2 == 1)
        .map(|(v, _)| v)
        .collect();

    let mut adj = vec![Vec::new(); mg.n_vertices];
    for &e in t2 {
        let (u, v) = mg.edges[e];
        adj[u].push((e, v));
        adj[v].push((e, u));
    }

    let mut chosen = vec![false; mg.edges.len()];
    for &e in t1 {
        chosen[e] = true;
    }
    for pair in odd.chunks(2) {
        for e in tree_path(&adj, pair[0], pair[1]) {
            chosen[e] ^= true;
        }
    }
    Ok((0..mg.edges.len()).filter(|&e| chosen[e]).collect())
}

/// Edge ids on the unique path from `from` to `to` in a tree.
fn tree_path(adj: &[Vec<(EdgeId, VertexId)>], from: VertexId, to: VertexId) -> Vec<EdgeId> {
    let mut parent: Vec<Option<(EdgeId, VertexId)>> = vec![None; adj.len()];
    let mut seen = vec![false; adj.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &(e, w) in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((e, u));
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = to;
    while let Some((e, p)) = parent[cur] {
        path.push(e);
        cur = p;
    }
    path
}

/// Closed walk from `root` using every edge of `ids` exactly once
/// (Hierholzer). Returns the vertex sequence, first and last entries equal
/// to `root`.
pub fn euler_circuit(mg: &Multigraph, ids: &[EdgeId], root: VertexId) -> Result<Vec<VertexId>> {
    let (vertices, _) = euler_circuit_with_edges(mg, ids, root)?;
    Ok(vertices)
}

/// As [`euler_circuit`], also returning the edge id used by each step.
pub fn euler_circuit_with_edges(
    mg: &Multigraph,
    ids: &[EdgeId],
    root: VertexId,
) -> Result<(Vec<VertexId>, Vec<EdgeId>)> {
    mg.check_ids(ids)?;
    if root >= mg.n_vertices {
        return Err(Error::VertexOutOfRange {
            vertex: root,
            n_vertices: mg.n_vertices,
        });
    }
    if mg.degrees(ids).iter().any(|d| d % 2 == 1) {
        return Err(Error::precondition("edge set has an odd-degree vertex"));
    }
    if !mg.spans_connected(ids) {
        return Err(Error::precondition(
            "edge set is not connected and spanning",
        ));
    }

    let mut adj = vec![Vec::new(); mg.n_vertices];
    for &e in ids {
        let (u, v) = mg.edges[e];
        adj[u].push((e, v));
        if u != v {
            adj[v].push((e, u));
        }
    }
    let mut used = vec![false; mg.edges.len()];
    let mut cursor = vec![0usize; mg.n_vertices];
    // stack of (vertex, edge used to arrive)
    let mut stack: Vec<(VertexId, Option<EdgeId>)> = vec![(root, None)];
    let mut circuit = Vec::with_capacity(ids.len() + 1);
    while let Some(&(u, _)) = stack.last() {
        let mut advanced = false;
        while cursor[u] < adj[u].len() {
            let (e, w) = adj[u][cursor[u]];
            cursor[u] += 1;
            if !used[e] {
                used[e] = true;
                stack.push((w, Some(e)));
                advanced = true;
                break;
            }
        }
        if !advanced {
            circuit.push(stack.pop().unwrap());
        }
    }
    circuit.reverse();
    let vertices = circuit.iter().map(|&(v, _)| v).collect();
    let edges = circuit.iter().filter_map(|&(_, e)| e).collect();
    Ok((vertices, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_eulerian(mg: &Multigraph, ids: &[EdgeId]) {
        assert!(mg.spans_connected(ids));
        assert!(mg.degrees(ids).iter().all(|d| d % 2 == 0));
    }

    #[test]
    fn two_parallel_edges() {
        let mg = Multigraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let out = eulerian_from_two_trees(&mg, &[0], &[1]).unwrap();
        assert_eq!(out, vec![0, 1]);
        assert_eq!(mg.degrees(&out), vec![2, 2]);
    }

    #[test]
    fn doubled_path_uses_all_four_edges() {
        // vertices 1,2,3 of the worked example are 0,1,2 here
        let mg = Multigraph::new(3, vec![(0, 1), (1, 2), (0, 1), (1, 2)]).unwrap();
        let out = eulerian_from_two_trees(&mg, &[0, 1], &[2, 3]).unwrap();
        assert_eq!(out, vec![0, 1, 2, 3]);
        assert_eq!(mg.degrees(&out), vec![2, 4, 2]);
    }

    #[test]
    fn star_tree_pairs_its_leaves() {
        // T1 = star at 0; T2 = path 1-0-2 on distinct edges
        let mg = Multigraph::new(3, vec![(0, 1), (0, 2), (1, 0), (0, 2)]).unwrap();
        let out = eulerian_from_two_trees(&mg, &[0, 1], &[2, 3]).unwrap();
        check_eulerian(&mg, &out);
        assert_eq!(out, vec![0, 1, 2, 3]);
    }

    #[test]
    fn rejects_bad_trees() {
        let mg = Multigraph::new(3, vec![(0, 1), (1, 2), (0, 1), (1, 2)]).unwrap();
        assert!(eulerian_from_two_trees(&mg, &[0, 1], &[1, 3]).is_err());
        assert!(eulerian_from_two_trees(&mg, &[0, 2], &[1, 3]).is_err());
    }

    #[test]
    fn circuit_on_triangle_and_parallel_pair() {
        let tri = Multigraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let walk = euler_circuit(&tri, &[0, 1, 2], 0).unwrap();
        assert_eq!(walk.len(), 4);
        assert_eq!(walk.first(), walk.last());
        let pair = Multigraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(euler_circuit(&pair, &[0, 1], 0).unwrap(), vec![0, 1, 0]);
    }

    #[test]
    fn figure_eight_uses_each_edge_once() {
        let mg = Multigraph::new(5, vec![(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap();
        let ids: Vec<_> = (0..6).collect();
        let (walk, used) = euler_circuit_with_edges(&mg, &ids, 0).unwrap();
        assert_eq!(walk.len(), 7);
        assert_eq!(walk[0], 0);
        assert_eq!(walk[6], 0);
        let mut sorted = used.clone();
        sorted.sort();
        assert_eq!(sorted, ids);
        for (i, &e) in used.iter().enumerate() {
            let (a, b) = mg.edges()[e];
            assert!((a, b) == (walk[i], walk[i + 1]) || (b, a) == (walk[i], walk[i + 1]));
        }
    }

    #[test]
    fn circuit_rejects_odd_degrees() {
        let mg = Multigraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(euler_circuit(&mg, &[0, 1], 0).is_err());
    }

    #[test]
    fn loops_are_traversed() {
        let mg = Multigraph::new(2, vec![(0, 1), (1, 1), (1, 0)]).unwrap();
        let walk = euler_circuit(&mg, &[0, 1, 2], 0).unwrap();
        assert_eq!(walk.len(), 4);
    }
}
