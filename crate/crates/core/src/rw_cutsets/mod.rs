//! Random walks killed at the horizon: uniform transience, the length-2
//! subdivision, crossing matrices between cutset midpoints, and the
//! walk-range cutset sampler.

mod crossing;
mod sampler;

pub use crossing::{
    check_crossing, crossing_matrix, origin_midpoint, CrossingCheck, CrossingMatrix,
};
pub use sampler::{
    qn_census_rw, sample_cluster_boundary, walk_constant_k, RwCensus, SampleOutcome, WalkTrace,
};

use crate::error::{Error, Result};
use crate::graph_core::{Graph, SubdivisionMap, VertexId};
use crate::markov::{
    fundamental_matrix, index_of, interior_checked, simulate_walk, solve_dirichlet,
};
use crate::percolation::EventProbability;
use crate::stats::count_trials;
use serde::Serialize;

/// Steps after which a simulated walk is abandoned.
pub const WALK_STEP_CAP: u64 = 10_000_000;
const IDENTITY_TOL: f64 = 1e-9;
const TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EscapeMethod {
    /// One Dirichlet solve per vertex: the probability of reaching the
    /// horizon before returning, averaged over the first step.
    Hitting,
    /// One inverse: `P_v(no return) = 1 / N(v,v)`.
    Green,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EscapeRow {
    pub vertex: VertexId,
    pub degree: usize,
    /// `P_v(X_t ≠ v for all t ≥ 1 before absorption)`.
    pub no_return: f64,
    pub scaled: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EscapeReport {
    /// `min_v d_v P_v(no return)` over interior vertices.
    pub epsilon: f64,
    pub argmin: VertexId,
    pub rows: Vec<EscapeRow>,
}

pub fn escape_probabilities(graph: &Graph, method: EscapeMethod) -> Result<Vec<(VertexId, f64)>> {
    let interior = interior_checked(graph)?;
    if interior.is_empty() {
        return Err(Error::precondition("no interior vertices"));
    }
    match method {
        EscapeMethod::Green => {
            let n = fundamental_matrix(graph, &interior)?;
            Ok(interior
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, 1.0 / n[(i, i)]))
                .collect())
        }
        EscapeMethod::Hitting => interior
            .iter()
            .map(|&v| {
                let dom: Vec<VertexId> = interior.iter().copied().filter(|&w| w != v).collect();
                let idx = index_of(graph, &dom);
                let h =
                    solve_dirichlet(
                        graph,
                        &dom,
                        1,
                        |y, _| if graph.is_horizon(y) { 1.0 } else { 0.0 },
                    )?;
                let d = graph.degree(v) as f64;
                let s: f64 = graph
                    .neighbours(v)
                    .map(|w| {
                        if graph.is_horizon(w) {
                            1.0
                        } else if idx[w] != usize::MAX {
                            h[(idx[w], 0)]
                        } else {
                            0.0
                        }
                    })
                    .sum();
                Ok((v, s / d))
            })
            .collect(),
    }
}

pub fn escape_constant(graph: &Graph, method: EscapeMethod) -> Result<EscapeReport> {
    let probs = escape_probabilities(graph, method)?;
    let rows: Vec<EscapeRow> = probs
        .into_iter()
        .map(|(v, q)| EscapeRow {
            vertex: v,
            degree: graph.degree(v),
            no_return: q,
            scaled: graph.degree(v) as f64 * q,
        })
        .collect();
    let best = rows
        .iter()
        .min_by(|a, b| a.scaled.total_cmp(&b.scaled))
        .expect("non-empty interior");
    Ok(EscapeReport {
        epsilon: best.scaled,
        argmin: best.vertex,
        rows,
    })
}

/// Monte Carlo estimate of `P_v(no return before absorption)`.
pub fn escape_probability_mc(
    graph: &Graph,
    v: VertexId,
    trials: u64,
    seed: u64,
) -> Result<EventProbability> {
    if graph.is_horizon(v) {
        return Err(Error::precondition(format!(
            "vertex {v} lies in the horizon"
        )));
    }
    interior_checked(graph)?;
    let hits = count_trials(trials, seed, |_, rng| {
        let inc = graph.incident(v);
        let first = inc[rand::Rng::random_range(rng, 0..inc.len())].1;
        match simulate_walk(
            graph,
            first,
            |w| w == v || graph.is_horizon(w),
            WALK_STEP_CAP,
            rng,
        ) {
            Some(path) => graph.is_horizon(*path.last().unwrap()),
            None => false,
        }
    });
    Ok(EventProbability::from_counts(hits, trials))
}

/// `ε₁ = 2ε/(4+ε)`, tending to 2 as `ε` grows.
pub fn epsilon1(epsilon: f64) -> f64 {
    if epsilon.is_infinite() {
        2.0
    } else {
        2.0 * epsilon / (4.0 + epsilon)
    }
}

/// `ε₂ = ε₁²/64`.
pub fn epsilon2(epsilon: f64) -> f64 {
    epsilon1(epsilon).powi(2) / 64.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubdivisionRow {
    pub vertex: VertexId,
    pub midpoint: bool,
    pub scaled: f64,
    /// `E_z[ℓ_z] - 1 - E_z[ℓ_u]/d_u - E_z[ℓ_v]/d_v` for midpoints.
    pub identity_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubdivisionEscapeReport {
    pub base_epsilon: f64,
    pub epsilon1: f64,
    pub min_original: f64,
    pub min_midpoint: f64,
    pub max_identity_residual: f64,
    pub rows: Vec<SubdivisionRow>,
}

/// Escape bounds on the length-2 subdivision: every vertex has
/// `d_z P'_z(τ = 0) ≥ ε₁`, original vertices at least `ε/2`, and the visit
/// identity at midpoints holds to 1e-9.
pub fn subdivision_escape_check(sd: &SubdivisionMap) -> Result<SubdivisionEscapeReport> {
    if sd.order() != 2 {
        return Err(Error::precondition(
            "escape check needs the length-2 subdivision",
        ));
    }
    // a base graph without interior vertices imposes no constraint
    let base_epsilon = if sd.base().interior().is_empty() {
        f64::INFINITY
    } else {
        escape_constant(sd.base(), EscapeMethod::Green)?.epsilon
    };
    let eps1 = epsilon1(base_epsilon);
    let g = sd.derived();
    let interior = interior_checked(g)?;
    let idx = index_of(g, &interior);
    let n = fundamental_matrix(g, &interior)?;
    let mut rows = Vec::with_capacity(interior.len());
    let (mut min_original, mut min_midpoint, mut max_res) = (f64::INFINITY, f64::INFINITY, 0.0f64);
    for (i, &z) in interior.iter().enumerate() {
        let scaled = g.degree(z) as f64 / n[(i, i)];
        let mut residual = 0.0;
        let midpoint = !sd.is_original(z);
        if midpoint {
            let (u, v) = sd.base().edge(sd.edge_of(z).unwrap());
            let term = |x: VertexId| match idx[x] {
                usize::MAX => 0.0,
                j => n[(i, j)] / g.degree(x) as f64,
            };
            residual = n[(i, i)] - 1.0 - term(u) - term(v);
            max_res = max_res.max(residual.abs());
            min_midpoint = min_midpoint.min(scaled);
        } else {
            min_original = min_original.min(scaled);
        }
        rows.push(SubdivisionRow {
            vertex: z,
            midpoint,
            scaled,
            identity_residual: residual,
        });
    }
    if max_res > IDENTITY_TOL {
        return Err(Error::invariant(format!(
            "visit identity residual {max_res:e}"
        )));
    }
    if min_original.min(min_midpoint) < eps1 - TOL || min_original < base_epsilon / 2.0 - TOL {
        return Err(Error::invariant(format!(
            "subdivided escape {} below ε₁ = {eps1} (originals {min_original}, ε/2 = {})",
            min_original.min(min_midpoint),
            base_epsilon / 2.0
        )));
    }
    Ok(SubdivisionEscapeReport {
        base_epsilon,
        epsilon1: eps1,
        min_original,
        min_midpoint,
        max_identity_residual: max_res,
        rows,
    })
}
