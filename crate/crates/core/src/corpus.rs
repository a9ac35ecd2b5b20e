//! Desk-scale test instances: small graphs with at most 16 edges and a
//! non-empty horizon, plus random matrices, connected sets and tree pairs.

use crate::cover_lemma::{min_cut, SubStochasticMatrix};
use crate::error::Result;
use crate::graph_core::{
    EdgeId, Family, Graph, HorizonSpec, Multigraph, UnionFind, VertexId, VertexSet,
};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

pub const CORPUS_EDGE_CAP: usize = 16;

#[derive(Clone, Debug)]
pub struct CorpusGraph {
    pub name: &'static str,
    pub graph: Graph,
    /// A default interior vertex.
    pub origin: VertexId,
}

fn family(f: Family, h: HorizonSpec) -> Graph {
    f.build(&h).expect("corpus family")
}

fn raw(n: usize, edges: &[(usize, usize)], horizon: &[usize]) -> Graph {
    Graph::new(n, edges.to_vec(), horizon.iter().copied()).expect("corpus graph")
}

/// The fixed corpus, in a stable order.
pub fn graphs() -> Vec<CorpusGraph> {
    use Family::*;
    use HorizonSpec::{Boundary, List};
    let grid = |w, h| Grid {
        width: w,
        height: h,
        torus: false,
    };
    let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let petersen = [
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 0),
        (0, 5),
        (1, 6),
        (2, 7),
        (3, 8),
        (4, 9),
        (5, 7),
        (7, 9),
        (9, 6),
        (6, 8),
        (8, 5),
    ];
    let cube = [
        (0, 1),
        (1, 3),
        (3, 2),
        (2, 0),
        (4, 5),
        (5, 7),
        (7, 6),
        (6, 4),
        (0, 4),
        (1, 5),
        (2, 6),
        (3, 7),
    ];
    let items = vec![
        ("path3", family(Path(3), Boundary), 1),
        ("path5", family(Path(5), Boundary), 2),
        ("path7", family(Path(7), Boundary), 3),
        ("path4-end", family(Path(4), List(vec![3])), 0),
        ("star3", family(Star(3), Boundary), 0),
        ("star4", family(Star(4), Boundary), 0),
        ("star5", family(Star(5), Boundary), 0),
        ("cycle4", family(Cycle(4), List(vec![0])), 2),
        ("cycle5", family(Cycle(5), List(vec![0])), 2),
        ("cycle6", family(Cycle(6), List(vec![0, 3])), 1),
        ("grid3x3", family(grid(3, 3), Boundary), 4),
        ("grid3x3-corner", family(grid(3, 3), List(vec![0])), 8),
        (
            "grid3x3-corners",
            family(grid(3, 3), List(vec![0, 2, 6, 8])),
            4,
        ),
        ("grid2x3", family(grid(2, 3), List(vec![0])), 5),
        ("grid2x4", family(grid(2, 4), List(vec![6, 7])), 0),
        ("k4", raw(4, &k4, &[3]), 0),
        ("k4-minus-edge", raw(4, &k4[1..], &[3]), 0),
        (
            "k23",
            raw(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)], &[1]),
            0,
        ),
        (
            "theta",
            raw(
                6,
                &[(0, 1), (1, 5), (0, 2), (2, 5), (0, 3), (3, 4), (4, 5)],
                &[5],
            ),
            0,
        ),
        (
            "binary-tree",
            raw(
                7,
                &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)],
                &[3, 4, 5, 6],
            ),
            0,
        ),
        (
            "lollipop",
            raw(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)], &[4]),
            0,
        ),
        (
            "wheel5",
            raw(
                6,
                &[
                    (0, 1),
                    (0, 2),
                    (0, 3),
                    (0, 4),
                    (0, 5),
                    (1, 2),
                    (2, 3),
                    (3, 4),
                    (4, 5),
                    (5, 1),
                ],
                &[3],
            ),
            0,
        ),
        ("cube", raw(8, &cube, &[7]), 0),
        ("petersen", raw(10, &petersen, &[0]), 7),
    ];
    items
        .into_iter()
        .map(|(name, graph, origin)| {
            debug_assert!(graph.n_edges() <= CORPUS_EDGE_CAP && !graph.is_horizon(origin));
            CorpusGraph {
                name,
                graph,
                origin,
            }
        })
        .collect()
}

pub fn by_name(name: &str) -> Option<CorpusGraph> {
    graphs().into_iter().find(|c| c.name == name)
}

/// Connected set of interior vertices grown from a uniform interior
/// vertex by adding uniform frontier vertices, with target size uniform in
/// `1..=max_size`.
pub fn random_connected_set(graph: &Graph, max_size: usize, rng: &mut impl Rng) -> VertexSet {
    let interior = graph.interior();
    let mut set = VertexSet::empty(graph.n_vertices());
    let Some(&start) = interior.choose(rng) else {
        return set;
    };
    set.insert(start);
    let target = rng.random_range(1..=max_size.max(1));
    while set.len() < target {
        let mut frontier: Vec<VertexId> = set
            .iter()
            .flat_map(|u| graph.neighbours(u))
            .filter(|&w| !graph.is_horizon(w) && !set.contains(w))
            .collect();
        frontier.sort_unstable();
        frontier.dedup();
        match frontier.choose(rng) {
            Some(&w) => set.insert(w),
            None => break,
        };
    }
    set
}

/// Random symmetric sub-stochastic matrix on `2..=max_n` states with a
/// positive minimum cut, retried until one is found.
pub fn random_cover_matrix(max_n: usize, rng: &mut impl Rng) -> Result<SubStochasticMatrix> {
    loop {
        let n = rng.random_range(2..=max_n.max(2));
        let density = rng.random_range(0.3..1.0);
        let max_row = rng.random_range(0.3..1.0);
        let m = SubStochasticMatrix::random(n, density, max_row, rng)?;
        if min_cut(&m)? > 0.0 {
            return Ok(m);
        }
    }
}

/// Random multigraph holding two edge-disjoint spanning trees, each grown
/// by a random-order Kruskal over the complete graph, plus a few extra
/// edges. Returns the multigraph and the two trees.
pub fn random_two_trees(
    max_n: usize,
    rng: &mut impl Rng,
) -> Result<(Multigraph, Vec<EdgeId>, Vec<EdgeId>)> {
    let n = rng.random_range(2..=max_n.max(2));
    let mut edges = Vec::new();
    let mut trees = [Vec::new(), Vec::new()];
    for tree in &mut trees {
        let mut pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        pairs.shuffle(rng);
        let mut uf = UnionFind::new(n);
        for (u, v) in pairs {
            if uf.union(u, v) {
                tree.push(edges.len());
                edges.push((u, v));
            }
        }
    }
    for _ in 0..rng.random_range(0..=n) {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            edges.push((u, v));
        }
    }
    let [t1, t2] = trees;
    Ok((Multigraph::new(n, edges)?, t1, t2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::trial_rng;

    #[test]
    fn corpus_shape() {
        let gs = graphs();
        assert!(gs.len() >= 20);
        for c in &gs {
            assert!(c.graph.n_edges() <= CORPUS_EDGE_CAP, "{}", c.name);
            assert!(!c.graph.horizon().is_empty(), "{}", c.name);
            assert!(!c.graph.is_horizon(c.origin), "{}", c.name);
        }
        assert_eq!(by_name("petersen").unwrap().graph.n_edges(), 15);
    }

    #[test]
    fn random_instances() {
        let mut rng = trial_rng(1, 0);
        let g = by_name("grid3x3-corner").unwrap().graph;
        for _ in 0..50 {
            let s = random_connected_set(&g, 5, &mut rng);
            assert!(!s.is_empty() && s.len() <= 5 && g.is_connected_set(&s));
        }
        let (mg, t1, t2) = random_two_trees(6, &mut rng).unwrap();
        assert!(mg.is_spanning_tree(&t1) && mg.is_spanning_tree(&t2));
        assert!(min_cut(&random_cover_matrix(5, &mut rng).unwrap()).unwrap() > 0.0);
    }
}
