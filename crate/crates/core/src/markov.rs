//! Simple random walk killed on leaving a vertex set: Dirichlet problems,
//! expected visit counts and trajectory simulation.

use crate::error::{Error, Result};
use crate::graph_core::{Graph, VertexId};
use crate::linalg::{inverse, solve_many};
use nalgebra::DMatrix;
use rand::Rng;

/// Position of every vertex in `domain`, `usize::MAX` outside.
pub fn index_of(graph: &Graph, domain: &[VertexId]) -> Vec<usize> {
    let mut idx = vec![usize::MAX; graph.n_vertices()];
    for (i, &v) in domain.iter().enumerate() {
        idx[v] = i;
    }
    idx
}

/// `I - P_D`, the identity minus the walk's transition matrix restricted to
/// `domain`.
pub fn killed_generator(graph: &Graph, domain: &[VertexId]) -> DMatrix<f64> {
    let idx = index_of(graph, domain);
    let k = domain.len();
    let mut a = DMatrix::identity(k, k);
    for (i, &x) in domain.iter().enumerate() {
        let d = graph.degree(x) as f64;
        for w in graph.neighbours(x) {
            if idx[w] != usize::MAX {
                a[(i, idx[w])] -= 1.0 / d;
            }
        }
    }
    a
}

/// Harmonic extensions on `domain`: column `c` of the result solves
/// `h(x) = (1/d_x) Σ_{y ~ x} h(y)` on the domain with `h(y) = cols(y, c)`
/// at every vertex outside it.
pub fn solve_dirichlet(
    graph: &Graph,
    domain: &[VertexId],
    n_cols: usize,
    cols: impl Fn(VertexId, usize) -> f64,
) -> Result<DMatrix<f64>> {
    let idx = index_of(graph, domain);
    let a = killed_generator(graph, domain);
    let mut b = DMatrix::zeros(domain.len(), n_cols);
    for (i, &x) in domain.iter().enumerate() {
        let d = graph.degree(x) as f64;
        for w in graph.neighbours(x) {
            if idx[w] == usize::MAX {
                for c in 0..n_cols {
                    b[(i, c)] += cols(w, c) / d;
                }
            }
        }
    }
    solve_many(&a, &b)
}

/// `N(x,y)`: expected visits to `y` (time 0 included) before the walk from
/// `x` leaves `domain`.
pub fn fundamental_matrix(graph: &Graph, domain: &[VertexId]) -> Result<DMatrix<f64>> {
    inverse(&killed_generator(graph, domain))
}

/// Walk from `start` until `stop` holds (the stopping vertex is recorded).
/// `None` when `cap` steps pass first.
pub fn simulate_walk(
    graph: &Graph,
    start: VertexId,
    stop: impl Fn(VertexId) -> bool,
    cap: u64,
    rng: &mut impl Rng,
) -> Option<Vec<VertexId>> {
    let mut path = vec![start];
    let mut cur = start;
    let mut steps = 0;
    while !stop(cur) {
        if steps == cap {
            return None;
        }
        let inc = graph.incident(cur);
        cur = inc[rng.random_range(0..inc.len())].1;
        path.push(cur);
        steps += 1;
    }
    Some(path)
}

/// Interior vertices, erroring when the horizon is empty (the killed walk
/// would then never stop).
pub fn interior_checked(graph: &Graph) -> Result<Vec<VertexId>> {
    if graph.horizon().is_empty() {
        return Err(Error::precondition("the horizon must be non-empty"));
    }
    Ok(graph.interior())
}
