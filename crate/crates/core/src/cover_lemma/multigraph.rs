use super::{gamma_weight, in_gamma, GammaPath, SubStochasticMatrix};
use crate::error::{Error, Result};
use crate::graph_core::{euler_circuit_with_edges, eulerian_from_two_trees, Multigraph};
use rand::Rng;
use serde::Serialize;

/// One draw of `e_1, …, e_{2n-2}`, each equal to `(u,v)` with probability
/// `p(u,v)/n` and empty otherwise; `H1` holds the first `n-1` draws, `H2`
/// the rest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HSample {
    pub edges: Vec<Option<(usize, usize)>>,
    pub h1_connected: bool,
    pub h2_connected: bool,
    /// A `Γ` path read off an Euler circuit when both halves are spanning
    /// trees.
    pub gamma: Option<GammaPath>,
    /// `sigma[i]` is the draw used by step `i + 1` of `gamma`.
    pub sigma: Option<Vec<usize>>,
}

fn draw_edge(m: &SubStochasticMatrix, rng: &mut impl Rng) -> Option<(usize, usize)> {
    let n = m.n();
    let mut r = rng.random::<f64>() * n as f64;
    for u in 0..n {
        for v in 0..n {
            r -= m.get(u, v);
            if r < 0.0 {
                return Some((u, v));
            }
        }
    }
    None
}

fn spans(n: usize, edges: &[Option<(usize, usize)>]) -> bool {
    let mut uf = crate::graph_core::UnionFind::new(n);
    for &(u, v) in edges.iter().flatten() {
        uf.union(u, v);
    }
    uf.components() == 1
}

pub fn sample_h_graphs(m: &SubStochasticMatrix, rng: &mut impl Rng) -> Result<HSample> {
    let n = m.n();
    let edges: Vec<Option<(usize, usize)>> = (0..2 * n - 2).map(|_| draw_edge(m, rng)).collect();
    let h1_connected = spans(n, &edges[..n - 1]);
    let h2_connected = spans(n, &edges[n - 1..]);
    let mut out = HSample {
        edges,
        h1_connected,
        h2_connected,
        gamma: None,
        sigma: None,
    };
    if n == 1 || !(h1_connected && h2_connected) {
        return Ok(out);
    }
    // both halves have n - 1 draws and span, so every draw is present
    let pairs: Vec<(usize, usize)> = out
        .edges
        .iter()
        .map(|e| e.expect("spanning tree draw"))
        .collect();
    let mg = Multigraph::new(n, pairs.clone())?;
    let t1: Vec<usize> = (0..n - 1).collect();
    let t2: Vec<usize> = (n - 1..2 * n - 2).collect();
    let euler = eulerian_from_two_trees(&mg, &t1, &t2)?;
    let (walk, used) = euler_circuit_with_edges(&mg, &euler, 0)?;
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut count = 1;
    let mut end = None;
    for (i, &s) in walk.iter().enumerate().skip(1) {
        if !seen[s] {
            seen[s] = true;
            count += 1;
        }
        if count == n && s == 0 {
            end = Some(i);
            break;
        }
    }
    let end = end.ok_or_else(|| Error::invariant("Euler circuit failed to cover every state"))?;
    let vertices = walk[..=end].to_vec();
    let sigma = used[..end].to_vec();
    if !in_gamma(n, &vertices) {
        return Err(Error::invariant("extracted sequence is not in Γ"));
    }
    let mut taken = vec![false; 2 * n - 2];
    for (i, &d) in sigma.iter().enumerate() {
        let (a, b) = pairs[d];
        let (x, y) = (vertices[i], vertices[i + 1]);
        if taken[d] || !((a, b) == (x, y) || (a, b) == (y, x)) {
            return Err(Error::invariant(
                "extracted sequence lacks an edge-injective σ",
            ));
        }
        taken[d] = true;
    }
    out.gamma = Some(GammaPath {
        weight: gamma_weight(m, &vertices),
        vertices,
    });
    out.sigma = Some(sigma);
    Ok(out)
}

/// Whether an injection `σ` from the steps of `seq` into the draws exists
/// with `e_{σ(i)}` equal to step `i` in either orientation (bipartite
/// matching by augmenting paths).
pub fn is_present(seq: &[usize], edges: &[Option<(usize, usize)>]) -> bool {
    let k = seq.len().saturating_sub(1);
    if k > edges.len() {
        return false;
    }
    let fits = |i: usize, d: usize| match edges[d] {
        Some((a, b)) => (a, b) == (seq[i], seq[i + 1]) || (b, a) == (seq[i], seq[i + 1]),
        None => false,
    };
    let mut owner: Vec<Option<usize>> = vec![None; edges.len()];
    fn augment(
        i: usize,
        fits: &dyn Fn(usize, usize) -> bool,
        owner: &mut [Option<usize>],
        visited: &mut [bool],
    ) -> bool {
        for d in 0..owner.len() {
            if fits(i, d) && !visited[d] {
                visited[d] = true;
                if owner[d].is_none_or(|j| augment(j, fits, owner, visited)) {
                    owner[d] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    (0..k).all(|i| {
        let mut visited = vec![false; edges.len()];
        augment(i, &fits, &mut owner, &mut visited)
    })
}
