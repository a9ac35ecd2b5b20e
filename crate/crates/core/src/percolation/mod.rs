//! Bernoulli bond percolation on graphs with a horizon.
//!
//! A cluster is "finite" when it avoids the horizon. Exact probabilities sum
//! over all `2^|E|` configurations and serve as the oracle for every Monte
//! Carlo estimate.

mod config;
mod exact;

pub use config::{cluster_report, sample_config, ClusterReport, PercConfig};
pub use exact::{boundary_distribution_exact, exact_expectation, exact_prob, EXACT_EDGE_CAP};

use crate::cutsets::{Cutset, QnTable};
use crate::error::{Error, Result};
use crate::graph_core::{
    iso_profile, weight, EdgeSet, Graph, IsoMode, Target, VertexId, VertexSet,
};
use crate::stats::{count_trials, run_trials, wilson, Interval, Z99};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    Exact,
    MonteCarlo {
        trials: u64,
        hits: u64,
        ci: Interval,
    },
}

/// A probability with the way it was obtained. Monte Carlo values carry a
/// 99% Wilson score interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EventProbability {
    pub value: f64,
    #[serde(flatten)]
    pub method: Method,
}

impl EventProbability {
    pub fn exact(value: f64) -> Self {
        EventProbability {
            value,
            method: Method::Exact,
        }
    }

    pub fn from_counts(hits: u64, trials: u64) -> Self {
        EventProbability {
            value: if trials == 0 {
                0.0
            } else {
                hits as f64 / trials as f64
            },
            method: Method::MonteCarlo {
                trials,
                hits,
                ci: wilson(hits, trials, Z99),
            },
        }
    }

    pub fn interval(&self) -> Interval {
        match &self.method {
            Method::Exact => Interval {
                lo: self.value,
                hi: self.value,
            },
            Method::MonteCarlo { ci, .. } => *ci,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.method, Method::Exact)
    }

    /// Number of successful trials; `None` for exact values.
    pub fn hits(&self) -> Option<u64> {
        match self.method {
            Method::Exact => None,
            Method::MonteCarlo { hits, .. } => Some(hits),
        }
    }
}

/// How a probability should be computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Estimator {
    Exact,
    MonteCarlo {
        trials: u64,
        seed: u64,
    },
    /// Exact when `|E| ≤ EXACT_EDGE_CAP`, otherwise Monte Carlo.
    Auto {
        trials: u64,
        seed: u64,
    },
}

impl Estimator {
    fn resolve(self, graph: &Graph) -> Estimator {
        match self {
            Estimator::Auto { trials, seed } if graph.n_edges() > EXACT_EDGE_CAP => {
                Estimator::MonteCarlo { trials, seed }
            }
            Estimator::Auto { .. } => Estimator::Exact,
            other => other,
        }
    }
}

/// Increasing connection event evaluated on open edges.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    pub from: VertexId,
    pub to: Target,
    /// Restricts the open path to these vertices when set.
    pub within: Option<VertexSet>,
}

impl Connection {
    pub fn pair(u: VertexId, v: VertexId) -> Self {
        Connection {
            from: u,
            to: Target::Vertex(v),
            within: None,
        }
    }

    pub fn to_horizon(u: VertexId) -> Self {
        Connection {
            from: u,
            to: Target::Horizon,
            within: None,
        }
    }

    pub fn holds(&self, graph: &Graph, config: &PercConfig) -> bool {
        let within = self.within.as_ref();
        let ok = |w: VertexId| within.is_none_or(|s| s.contains(w));
        if !ok(self.from) {
            return false;
        }
        match self.to {
            Target::Vertex(b) => {
                ok(b)
                    && graph
                        .reach_from([self.from], ok, |e| config.is_open(e))
                        .contains(b)
            }
            Target::Horizon => {
                open_reach(graph, config, self.from, within).intersects(graph.horizon())
            }
        }
    }
}

/// Vertices reachable from `v` over open edges, not expanding past horizon
/// vertices. With `within`, paths stay inside it except that a final horizon
/// vertex may lie outside.
pub(crate) fn open_reach(
    graph: &Graph,
    config: &PercConfig,
    v: VertexId,
    within: Option<&VertexSet>,
) -> VertexSet {
    let mut seen = VertexSet::empty(graph.n_vertices());
    seen.insert(v);
    let mut stack = vec![v];
    while let Some(u) = stack.pop() {
        if graph.is_horizon(u) {
            continue;
        }
        for &(e, w) in graph.incident(u) {
            if config.is_open(e)
                && !seen.contains(w)
                && (graph.is_horizon(w) || within.is_none_or(|s| s.contains(w)))
            {
                seen.insert(w);
                stack.push(w);
            }
        }
    }
    seen
}

/// Monte Carlo estimate of an arbitrary event with per-trial derived seeds.
pub fn monte_carlo_prob<F>(
    graph: &Graph,
    p: f64,
    event: F,
    trials: u64,
    seed: u64,
) -> EventProbability
where
    F: Fn(&PercConfig) -> bool + Sync,
{
    let hits = count_trials(trials, seed, |_, rng| event(&sample_config(graph, p, rng)));
    EventProbability::from_counts(hits, trials)
}

fn estimate<F>(graph: &Graph, p: f64, event: F, estimator: Estimator) -> Result<EventProbability>
where
    F: Fn(&PercConfig) -> bool + Sync,
{
    match estimator.resolve(graph) {
        Estimator::Exact => exact_prob(graph, p, event),
        Estimator::MonteCarlo { trials, seed } | Estimator::Auto { trials, seed } => {
            Ok(monte_carlo_prob(graph, p, event, trials, seed))
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::precondition(format!("p = {p} outside [0, 1]")))
    }
}

/// `θ_v(p) = P_p(v ↔ horizon)`.
pub fn theta(graph: &Graph, p: f64, v: VertexId, estimator: Estimator) -> Result<EventProbability> {
    check_p(p)?;
    let conn = Connection::to_horizon(v);
    estimate(graph, p, |c| conn.holds(graph, c), estimator)
}

/// Peierls union bound `Σ_n q_n (1-p)^n` over the recorded sizes.
pub fn peierls_bound(table: &QnTable, p: f64) -> f64 {
    table
        .counts
        .iter()
        .map(|(&n, &q)| q as f64 * (1.0 - p).powi(n as i32))
        .sum()
}

/// Probability that the cluster of the cutset's source is finite with
/// exposed boundary exactly `Π`.
pub fn boundary_hit_probability(
    graph: &Graph,
    p: f64,
    cutset: &Cutset,
    estimator: Estimator,
) -> Result<EventProbability> {
    check_p(p)?;
    let v = cutset.source();
    let target = cutset.edges().clone();
    estimate(
        graph,
        p,
        |c| cluster_report(graph, c, v).exposed.as_ref() == Some(&target),
        estimator,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FkgPair {
    pub joint: f64,
    pub product: f64,
}

/// Exact `(P(A∩B), P(A)P(B))` for each pair of connection events; fails if
/// any pair violates Harris' inequality beyond 1e-12.
pub fn fkg_spot_check(
    graph: &Graph,
    p: f64,
    pairs: &[(Connection, Connection)],
) -> Result<Vec<FkgPair>> {
    check_p(p)?;
    let mut out = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let pa = exact_prob(graph, p, |c| a.holds(graph, c))?.value;
        let pb = exact_prob(graph, p, |c| b.holds(graph, c))?.value;
        let joint = exact_prob(graph, p, |c| a.holds(graph, c) && b.holds(graph, c))?.value;
        let product = pa * pb;
        if joint < product - 1e-12 {
            return Err(Error::invariant(format!(
                "positive association fails: P(A∩B) = {joint} < P(A)P(B) = {product}"
            )));
        }
        out.push(FkgPair { joint, product });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrongRow {
    pub set: Vec<VertexId>,
    pub weight: usize,
    pub prob_isolated: f64,
    pub neg_log_prob: f64,
    pub psi: usize,
    pub satisfied: bool,
}

/// For each set `S`, pairs `-ln P_p(S ↮ horizon)` with `ψ(|S|_G)` and checks
/// `-ln P ≥ c_fit · ψ`. Sets whose isolation probability is zero are
/// omitted.
pub fn strong_percolation_experiment(
    graph: &Graph,
    p: f64,
    sets: &[VertexSet],
    c_fit: f64,
    mode: IsoMode,
) -> Result<Vec<StrongRow>> {
    check_p(p)?;
    let mut rows = Vec::new();
    let mut psi_cache: BTreeMap<usize, Option<usize>> = BTreeMap::new();
    for s in sets {
        let isolated = exact_prob(graph, p, |c| {
            s.iter()
                .all(|u| !open_reach(graph, c, u, None).intersects(graph.horizon()))
        })?
        .value;
        if isolated <= 0.0 {
            continue;
        }
        let w = weight(graph, s);
        let psi = match psi_cache.get(&w) {
            Some(&v) => v,
            None => {
                let v = iso_profile(graph, w, mode)?;
                psi_cache.insert(w, v);
                v
            }
        };
        let Some(psi) = psi else { continue };
        let neg_log = -isolated.ln();
        rows.push(StrongRow {
            set: s.to_vec(),
            weight: w,
            prob_isolated: isolated,
            neg_log_prob: neg_log,
            psi,
            satisfied: neg_log >= c_fit * psi as f64,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub trials: u64,
    /// Trials whose cluster reached the horizon.
    pub infinite: u64,
    pub hits: BTreeMap<EdgeSet, u64>,
}

/// Samples configurations and tallies the exposed boundary of each finite
/// cluster of `v`.
pub fn boundary_census(
    graph: &Graph,
    p: f64,
    v: VertexId,
    trials: u64,
    seed: u64,
) -> Result<CensusReport> {
    check_p(p)?;
    if graph.is_horizon(v) {
        return Err(Error::precondition(format!(
            "vertex {v} lies in the horizon"
        )));
    }
    let outcomes = run_trials(trials, seed, |_, rng| {
        let cfg = sample_config(graph, p, rng);
        cluster_report(graph, &cfg, v).exposed
    });
    let mut hits = BTreeMap::new();
    let mut infinite = 0;
    for o in outcomes {
        match o {
            Some(pi) => *hits.entry(pi).or_default() += 1,
            None => infinite += 1,
        }
    }
    Ok(CensusReport {
        trials,
        infinite,
        hits,
    })
}
