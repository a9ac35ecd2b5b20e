//! Chained sequences and the full-connectivity lower bound for positively
//! associated percolation.
//!
//! A sequence `o = x_1, …, x_k` in `A` is chained when
//! `pθ/2 ≤ P(x_i ↔ {x_1, …, x_{i-1}}) ≤ θ/2` for `i ≥ 2`. A maximal chain
//! leaves every vertex connected to it with probability at least `θ/2`,
//! which forces `k ≤ 2|B|/θ` and gives
//! `P(∩_{b ∈ B} o ↔ b) ≥ c^{|B|}` with `c = (pθ/2)^{3/θ}`.

mod oracle;

pub use oracle::{ConnectivityOracle, OracleMode};

use crate::cutsets::{decompose, Cutset};
use crate::error::{Error, Result};
use crate::graph_core::{Graph, UnionFind, VertexId, VertexSet};
use crate::percolation::{cluster_report, exact_expectation, sample_config};
use crate::stats::trial_rng;
use serde::Serialize;

const TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainedSequence {
    pub vertices: Vec<VertexId>,
    /// `probs[i] = P(x_i ↔ {x_1, …, x_{i-1}})`; `probs[0] = 1`.
    pub probs: Vec<f64>,
    pub theta: f64,
    pub p: f64,
    /// `2|B|/θ`.
    pub k_bound: f64,
    /// `(pθ/2)^{3/θ}`.
    pub c: f64,
    /// Non-fatal P1/P3 violations seen with a Monte Carlo oracle.
    pub warnings: Vec<String>,
}

impl ChainedSequence {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `Π_{i ≥ 2} probs[i]`.
    pub fn product_of_probs(&self) -> f64 {
        self.probs.iter().skip(1).product()
    }
}

/// `c^n` with `c = (pθ/2)^{3/θ}`.
pub fn fkg_lower_bound(theta: f64, p: f64, n: usize) -> f64 {
    fkg_constant(theta, p).powi(n as i32)
}

pub fn fkg_constant(theta: f64, p: f64) -> f64 {
    (p * theta / 2.0).powf(3.0 / theta)
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(Error::precondition(format!("{name} = {x} outside (0, 1]")))
    }
}

/// `min_{u ∈ A} P(u ↔^A B)`.
pub fn min_connection_to(oracle: &ConnectivityOracle, b: &VertexSet) -> Result<f64> {
    Ok(oracle.connection_probs(b)?.into_iter().fold(1.0, f64::min))
}

/// Greedy maximal chain: while some vertex has `P(v ↔ X) < θ/2`, append the
/// `v` of the edge `{u, v}` with `P(u ↔ X) ≥ θ/2 > P(v ↔ X)` whose pair
/// `(v, u)` is lexicographically smallest.
pub fn build_chain(
    oracle: &ConnectivityOracle,
    b: &VertexSet,
    o: VertexId,
    theta: f64,
) -> Result<ChainedSequence> {
    let p = oracle.p();
    check_unit("theta", theta)?;
    check_unit("p", p)?;
    if !oracle.contains(o) {
        return Err(Error::precondition(format!("origin {o} lies outside A")));
    }
    if b.is_empty() {
        return Err(Error::precondition("B must be non-empty"));
    }
    let verts = oracle.vertices().to_vec();
    let exact = oracle.is_exact();
    let mut warnings = Vec::new();

    for (&u, q) in verts.iter().zip(oracle.connection_probs(b)?) {
        if q < theta - oracle.half_width(q) - TOL {
            return Err(Error::precondition(format!(
                "hypothesis fails: P({u} ↔ B) = {q} < θ = {theta}"
            )));
        }
    }

    let (lg, map) = oracle.local_graph();
    let n_global = b.universe();
    let mut x = VertexSet::from_iter(n_global, [o]);
    let mut vertices = vec![o];
    let mut probs = vec![1.0];
    let lower = p * theta / 2.0;
    loop {
        let q = oracle.connection_probs(&x)?;
        let half = theta / 2.0;
        let mut best: Option<(VertexId, VertexId, f64)> = None;
        for &(lu, lv) in lg.edges() {
            for (a, b_) in [(lu, lv), (lv, lu)] {
                if q[a] >= half && q[b_] < half {
                    let cand = (map[b_], map[a], q[b_]);
                    if best.is_none_or(|(bv, bu, _)| (cand.0, cand.1) < (bv, bu)) {
                        best = Some(cand);
                    }
                }
            }
        }
        let Some((v, _, qv)) = best else {
            if let Some(i) = q.iter().position(|&qi| qi < half) {
                return Err(Error::invariant(format!(
                    "vertex {} has P(v ↔ X) < θ/2 but no extension edge exists",
                    verts[i]
                )));
            }
            break;
        };
        if qv < lower - oracle.half_width(qv) - TOL {
            let msg = format!("P1 fails at {v}: P(v ↔ X) = {qv} < pθ/2 = {lower}");
            if exact {
                return Err(Error::invariant(msg));
            }
            log::warn!("{msg}");
            warnings.push(msg);
        }
        x.insert(v);
        vertices.push(v);
        probs.push(qv);
        if vertices.len() > verts.len() {
            return Err(Error::invariant("chain longer than A"));
        }
    }
    let k_bound = 2.0 * b.len() as f64 / theta;
    if vertices.len() as f64 > k_bound + TOL {
        let msg = format!("P3 fails: k = {} > 2|B|/θ = {k_bound}", vertices.len());
        if exact {
            return Err(Error::invariant(msg));
        }
        log::warn!("{msg}");
        warnings.push(msg);
    }
    Ok(ChainedSequence {
        vertices,
        probs,
        theta,
        p,
        k_bound,
        c: fkg_constant(theta, p),
        warnings,
    })
}

/// Checks that the stored chain satisfies P1, P2 and P3 against the oracle.
pub fn verify_chain(
    oracle: &ConnectivityOracle,
    chain: &ChainedSequence,
    b: &VertexSet,
) -> Result<()> {
    let theta = chain.theta;
    let lower = chain.p * theta / 2.0;
    let n = b.universe();
    let mut prefix = VertexSet::empty(n);
    for (i, &x) in chain.vertices.iter().enumerate() {
        if i > 0 {
            let q = oracle.connection_prob(x, &prefix)?;
            let hw = oracle.half_width(q);
            if q < lower - hw - TOL || q > theta / 2.0 + hw + TOL {
                return Err(Error::invariant(format!("P1 fails at index {i}: {q}")));
            }
        }
        prefix.insert(x);
    }
    for (&v, q) in oracle
        .vertices()
        .iter()
        .zip(oracle.connection_probs(&prefix)?)
    {
        if q < theta / 2.0 - oracle.half_width(q) - TOL {
            return Err(Error::invariant(format!("P2 fails at {v}: {q}")));
        }
    }
    if chain.len() as f64 > 2.0 * b.len() as f64 / theta + TOL {
        return Err(Error::invariant("P3 fails"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FullConnectivity {
    /// `P(∩_{b ∈ B} o ↔ b)`.
    pub exact: f64,
    /// `c^{|B|}`.
    pub bound: f64,
    pub theta: f64,
    /// `P(∩_{u ∈ X} o ↔ u)` for the chain `X`.
    pub chain_connected: f64,
    pub chain: ChainedSequence,
}

/// Exact full-connectivity probability on the subgraph induced by `A`,
/// with `θ = min_u P(u ↔^A B)`, against `c^{|B|}`.
pub fn verify_full_connectivity(
    graph: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    o: VertexId,
    p: f64,
) -> Result<FullConnectivity> {
    check_unit("p", p)?;
    if !b.is_subset(a) {
        return Err(Error::precondition("B must be a subset of A"));
    }
    let oracle = ConnectivityOracle::exact(graph, a, p)?;
    let theta = min_connection_to(&oracle, b)?;
    check_unit("theta", theta)?;
    let chain = build_chain(&oracle, b, o, theta)?;
    let exact = oracle.prob_all_connected(o, b)?;
    let bound = fkg_lower_bound(theta, p, b.len());
    if exact < bound - TOL {
        return Err(Error::invariant(format!(
            "full connectivity {exact} below the bound {bound}"
        )));
    }
    let xs = VertexSet::from_iter(a.universe(), chain.vertices.iter().copied());
    let chain_connected = oracle.prob_all_connected(o, &xs)?;
    if chain_connected < chain.product_of_probs() - TOL {
        return Err(Error::invariant(format!(
            "chain connectivity {chain_connected} below the product of its steps {}",
            chain.product_of_probs()
        )));
    }
    Ok(FullConnectivity {
        exact,
        bound,
        theta,
        chain_connected,
        chain,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectivityBoundCheck {
    /// `P(∂_∞C = Π)`.
    pub exact: f64,
    /// `P(E ∩ F)`: `v` joined to every inner vertex inside `A`, and `Π` closed.
    pub joint: f64,
    /// `(c(1-p))^n`.
    pub bound: f64,
    pub theta: f64,
    /// `min_u P(u ↔^A B)`.
    pub theta_max: f64,
}

/// Exact `P(∂_∞C = Π)` against `(c(1-p))^n`, checking
/// `E ∩ F ⇒ {∂_∞C = Π}` on every configuration along the way.
pub fn connectivity_lower_bound_check(
    graph: &Graph,
    p: f64,
    theta: Option<f64>,
    cutset: &Cutset,
) -> Result<ConnectivityBoundCheck> {
    check_unit("p", p)?;
    let d = decompose(graph, cutset)?;
    let oracle = ConnectivityOracle::exact(graph, &d.component, p)?;
    let theta_max = min_connection_to(&oracle, &d.inner)?;
    let theta = theta.unwrap_or(theta_max);
    check_unit("theta", theta)?;
    if theta > theta_max + TOL {
        return Err(Error::precondition(format!(
            "θ = {theta} exceeds min_u P(u ↔ B) = {theta_max}"
        )));
    }
    let v = cutset.source();
    let pi = cutset.edges().clone();
    let inner: Vec<VertexId> = d.inner.iter().collect();
    let internal: Vec<usize> = (0..graph.n_edges())
        .filter(|&e| {
            let (x, y) = graph.edge(e);
            d.component.contains(x) && d.component.contains(y)
        })
        .collect();
    let violation = std::sync::atomic::AtomicBool::new(false);
    let joint = exact_expectation(graph, p, |cfg| {
        if pi.ids().iter().any(|&e| cfg.is_open(e)) {
            return 0.0;
        }
        let mut uf = UnionFind::new(graph.n_vertices());
        for &e in &internal {
            if cfg.is_open(e) {
                let (x, y) = graph.edge(e);
                uf.union(x, y);
            }
        }
        if !inner.iter().all(|&b| uf.same(b, v)) {
            return 0.0;
        }
        if cluster_report(graph, cfg, v).exposed.as_ref() != Some(&pi) {
            violation.store(true, std::sync::atomic::Ordering::Relaxed);
        }
        1.0
    })?;
    if violation.into_inner() {
        return Err(Error::invariant("E ∩ F holds but ∂_∞C differs from Π"));
    }
    let exact = exact_expectation(graph, p, |cfg| {
        if cluster_report(graph, cfg, v).exposed.as_ref() == Some(&pi) {
            1.0
        } else {
            0.0
        }
    })?;
    let bound = (fkg_constant(theta, p) * (1.0 - p)).powi(pi.len() as i32);
    if exact < joint - TOL || joint < bound - TOL {
        return Err(Error::invariant(format!(
            "ordering P(∂C = Π) = {exact} ≥ P(E∩F) = {joint} ≥ {bound} fails"
        )));
    }
    Ok(ConnectivityBoundCheck {
        exact,
        joint,
        bound,
        theta,
        theta_max,
    })
}

/// Samples configurations on `A` and checks, for every prefix of the chain,
/// `N_i − N_{i−1} ≥ 1{x_i ↔ B} − 1{x_i ↔ X_{i−1}}` where `N_i` counts the
/// clusters meeting both `X_i` and `B`. Returns the number of checks.
pub fn check_cluster_bookkeeping(
    graph: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    chain: &ChainedSequence,
    trials: u64,
    seed: u64,
) -> Result<u64> {
    let (lg, map, _) = graph.induced(a, std::iter::empty())?;
    let mut local = vec![usize::MAX; graph.n_vertices()];
    for (i, &v) in map.iter().enumerate() {
        local[v] = i;
    }
    let xs: Vec<usize> = chain.vertices.iter().map(|&v| local[v]).collect();
    let bs: Vec<usize> = b.iter().map(|v| local[v]).collect();
    if xs.iter().chain(&bs).any(|&i| i == usize::MAX) {
        return Err(Error::precondition("chain and B must lie in A"));
    }
    let mut checks = 0;
    for t in 0..trials {
        let cfg = sample_config(&lg, chain.p, &mut trial_rng(seed, t));
        let mut uf = UnionFind::new(lg.n_vertices());
        for (e, &(u, v)) in lg.edges().iter().enumerate() {
            if cfg.is_open(e) {
                uf.union(u, v);
            }
        }
        let b_roots: std::collections::BTreeSet<usize> = bs.iter().map(|&x| uf.find(x)).collect();
        let mut prefix_roots = std::collections::BTreeSet::new();
        let mut prev = 0i64;
        for &x in &xs {
            let r = uf.find(x);
            let to_b = b_roots.contains(&r) as i64;
            let to_prefix = prefix_roots.contains(&r) as i64;
            prefix_roots.insert(r);
            let n_i = prefix_roots.intersection(&b_roots).count() as i64;
            if n_i - prev < to_b - to_prefix {
                return Err(Error::invariant("cluster bookkeeping increment fails"));
            }
            prev = n_i;
            checks += 1;
        }
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutsets::fixtures::*;
    use crate::graph_core::EdgeSet;

    fn set(n: usize, xs: &[usize]) -> VertexSet {
        VertexSet::from_iter(n, xs.iter().copied())
    }

    #[test]
    fn closed_form_bound() {
        assert!((fkg_lower_bound(1.0, 1.0, 1) - 0.125).abs() < 1e-15);
        assert!((fkg_lower_bound(1.0, 1.0, 2) - 1.0 / 64.0).abs() < 1e-15);
        assert_eq!(fkg_lower_bound(0.3, 0.2, 0), 1.0);
    }

    #[test]
    fn singleton_chain() {
        let g = p5();
        let o = ConnectivityOracle::exact(&g, &set(5, &[2]), 0.5).unwrap();
        let c = build_chain(&o, &set(5, &[2]), 2, 0.7).unwrap();
        assert_eq!(c.vertices, vec![2]);
    }

    #[test]
    fn two_vertex_path_at_p_one() {
        let g = p5();
        let a = set(5, &[2, 3]);
        let o = ConnectivityOracle::exact(&g, &a, 1.0).unwrap();
        let b = set(5, &[3]);
        let theta = min_connection_to(&o, &b).unwrap();
        assert_eq!(theta, 1.0);
        let c = build_chain(&o, &b, 2, theta).unwrap();
        assert_eq!(c.vertices, vec![2]);
    }

    #[test]
    fn path_segment_full_connectivity() {
        let g = p5();
        let r =
            verify_full_connectivity(&g, &set(5, &[1, 2, 3]), &set(5, &[1, 3]), 2, 0.9).unwrap();
        assert!((r.exact - 0.81).abs() < 1e-12);
        assert!((r.theta - 0.99).abs() < 1e-12);
        assert!(r.exact >= r.bound);
        let r = verify_full_connectivity(&g, &set(5, &[1, 2, 3]), &set(5, &[2]), 2, 0.4).unwrap();
        assert_eq!(r.exact, 1.0);
    }

    #[test]
    fn chain_on_grid_satisfies_properties() {
        let g = grid3();
        let a = set(9, &[0, 1, 2, 3, 4, 5, 6, 7, 8]);
        let b = set(9, &[0, 2, 6, 8]);
        for p in [0.3, 0.6, 0.9] {
            let o = ConnectivityOracle::exact(&g, &a, p).unwrap();
            let theta = min_connection_to(&o, &b).unwrap();
            let c = build_chain(&o, &b, 4, theta).unwrap();
            verify_chain(&o, &c, &b).unwrap();
            assert!(check_cluster_bookkeeping(&g, &a, &b, &c, 200, 5).unwrap() > 0);
            let mut x = VertexSet::from_iter(9, [4]);
            let mut before = o.connection_probs(&x).unwrap();
            for &v in &c.vertices[1..] {
                x.insert(v);
                let after = o.connection_probs(&x).unwrap();
                assert!(before.iter().zip(&after).all(|(a, b)| b >= &(a - 1e-12)));
                before = after;
            }
        }
    }

    #[test]
    fn hypothesis_violation_is_reported() {
        let g = p5();
        let o = ConnectivityOracle::exact(&g, &set(5, &[1, 2, 3]), 0.5).unwrap();
        assert!(build_chain(&o, &set(5, &[1]), 2, 0.9).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        let g = p5();
        let c = Cutset::new(&g, EdgeSet::new(vec![1, 2]), 2).unwrap();
        let r = connectivity_lower_bound_check(&g, 0.5, None, &c).unwrap();
        assert!((r.exact - 0.25).abs() < 1e-12);
        assert!(r.exact >= r.bound);
        let r = connectivity_lower_bound_check(&g, 0.999, None, &c).unwrap();
        assert!(r.exact < 1e-5 && r.bound < 1e-5);

        let s = star3();
        let c = Cutset::new(&s, EdgeSet::new(vec![0, 1, 2]), 0).unwrap();
        let r = connectivity_lower_bound_check(&s, 0.5, None, &c).unwrap();
        assert!((r.exact - 0.125).abs() < 1e-12);

        let c = Cutset::new(&g, EdgeSet::new(vec![0, 3]), 2).unwrap();
        let r = connectivity_lower_bound_check(&g, 0.5, None, &c).unwrap();
        // A = {1,2,3}, B = {1,3}: E needs both internal edges open
        assert!((r.joint - 0.25 * 0.25).abs() < 1e-12);
        assert!(connectivity_lower_bound_check(&g, 0.5, Some(1.0), &c).is_err());
    }
}
