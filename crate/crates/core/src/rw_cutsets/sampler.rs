use super::{origin_midpoint, WALK_STEP_CAP};
use crate::cutsets::{exposed_boundary, is_minimal_cutset, Cutset};
use crate::error::{Error, Result};
use crate::graph_core::{EdgeSet, SubdivisionMap, VertexId, VertexSet};
use crate::markov::simulate_walk;
use crate::stats::{run_trials, TrialRng};
use serde::Serialize;
use std::collections::BTreeMap;

/// A walk on the subdivided graph from `o'` until absorption.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkTrace {
    pub start: VertexId,
    pub steps: Vec<VertexId>,
    /// Last index `t` with `X_t = X_0`.
    pub tau: usize,
    /// `C = {X_t : t ≤ τ}`.
    pub range: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "edges", rename_all = "snake_case")]
pub enum SampleOutcome {
    /// `∂ = m(Π)` with `Π` a minimal cutset from the origin.
    Decoded(EdgeSet),
    /// Every point of `∂` is a midpoint, but the edges do not form a minimal
    /// cutset from the origin (only possible when `C` misses the origin).
    NotMinimalFromOrigin(EdgeSet),
    /// `∂` contains an original vertex.
    NonMidpoint,
    /// The walk exceeded the step cap.
    Aborted,
}

/// `K = 2^20 / ε^5`.
pub fn walk_constant_k(epsilon: f64) -> f64 {
    2f64.powi(20) / epsilon.powi(5)
}

fn check_sampler(sd: &SubdivisionMap, o: VertexId) -> Result<VertexId> {
    if sd.order() != 2 {
        return Err(Error::precondition(
            "the sampler runs on the length-2 subdivision",
        ));
    }
    if sd.base().horizon().is_empty() {
        return Err(Error::precondition("the horizon must be non-empty"));
    }
    if sd.base().is_horizon(o) {
        return Err(Error::precondition(format!(
            "origin {o} lies in the horizon"
        )));
    }
    origin_midpoint(sd, o)
}

fn decode(
    sd: &SubdivisionMap,
    o: VertexId,
    range: &VertexSet,
) -> Result<(VertexSet, SampleOutcome)> {
    let g = sd.derived();
    let exposed = exposed_boundary(g, range)?;
    let mut inner = VertexSet::empty(g.n_vertices());
    for &e in exposed.ids() {
        let (a, b) = g.edge(e);
        inner.insert(if range.contains(a) { a } else { b });
    }
    if inner.iter().any(|v| sd.is_original(v)) {
        return Ok((inner, SampleOutcome::NonMidpoint));
    }
    let pi = EdgeSet::new(inner.iter().map(|v| sd.edge_of(v).unwrap()).collect());
    if is_minimal_cutset(sd.base(), &pi, o) {
        return Ok((inner, SampleOutcome::Decoded(pi)));
    }
    if range.contains(o) {
        // C connected through o with midpoint-only ∂ projects to a connected
        // S ∋ o with ∂_∞S = Π, which is minimal
        return Err(Error::invariant(format!(
            "walk range contains the origin but {:?} is not minimal",
            pi.ids()
        )));
    }
    Ok((inner, SampleOutcome::NotMinimalFromOrigin(pi)))
}

fn run_once(
    sd: &SubdivisionMap,
    o: VertexId,
    start: VertexId,
    rng: &mut TrialRng,
) -> Result<Option<(WalkTrace, VertexSet, SampleOutcome)>> {
    let g = sd.derived();
    let Some(steps) = simulate_walk(g, start, |v| g.is_horizon(v), WALK_STEP_CAP, rng) else {
        return Ok(None);
    };
    let tau = steps.iter().rposition(|&v| v == start).unwrap();
    let range = VertexSet::from_iter(g.n_vertices(), steps[..=tau].iter().copied());
    let (inner, outcome) = decode(sd, o, &range)?;
    Ok(Some((
        WalkTrace {
            start,
            steps,
            tau,
            range,
        },
        inner,
        outcome,
    )))
}

/// One walk from `o'`, its inner boundary points `∂`, and the decoded
/// outcome. `None` when the step cap is hit.
pub fn sample_cluster_boundary(
    sd: &SubdivisionMap,
    o: VertexId,
    rng: &mut TrialRng,
) -> Result<Option<(WalkTrace, VertexSet, SampleOutcome)>> {
    let start = check_sampler(sd, o)?;
    run_once(sd, o, start, rng)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RwCensus {
    pub origin: VertexId,
    pub trials: u64,
    /// Hit counts of each decoded minimal cutset.
    pub decoded: BTreeMap<EdgeSet, u64>,
    pub not_minimal: u64,
    pub non_midpoint: u64,
    pub aborted: u64,
    /// Distinct decoded cutsets by size: a lower bound on `|Q_n(o)|`.
    pub distinct_by_size: BTreeMap<usize, u64>,
}

impl RwCensus {
    pub fn frequency(&self, pi: &EdgeSet) -> f64 {
        self.decoded.get(pi).copied().unwrap_or(0) as f64 / self.trials as f64
    }

    pub fn cutsets(&self) -> Vec<Cutset> {
        self.decoded
            .keys()
            .map(|e| Cutset::new_unchecked(e.clone(), self.origin))
            .collect()
    }
}

pub fn qn_census_rw(sd: &SubdivisionMap, o: VertexId, trials: u64, seed: u64) -> Result<RwCensus> {
    let start = check_sampler(sd, o)?;
    let outcomes = run_trials(trials, seed, |_, rng| {
        run_once(sd, o, start, rng).map(|r| r.map_or(SampleOutcome::Aborted, |(_, _, out)| out))
    });
    let mut census = RwCensus {
        origin: o,
        trials,
        decoded: BTreeMap::new(),
        not_minimal: 0,
        non_midpoint: 0,
        aborted: 0,
        distinct_by_size: BTreeMap::new(),
    };
    for out in outcomes {
        match out? {
            SampleOutcome::Decoded(pi) => *census.decoded.entry(pi).or_default() += 1,
            SampleOutcome::NotMinimalFromOrigin(_) => census.not_minimal += 1,
            SampleOutcome::NonMidpoint => census.non_midpoint += 1,
            SampleOutcome::Aborted => census.aborted += 1,
        }
    }
    for pi in census.decoded.keys() {
        *census.distinct_by_size.entry(pi.len()).or_default() += 1;
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutsets::fixtures::*;
    use crate::cutsets::{enumerate_minimal_cutsets_by_components, COMPONENT_CAP};
    use crate::stats::trial_rng;

    #[test]
    fn traces_are_walks() {
        let g = p5();
        let sd = SubdivisionMap::new(&g, 2).unwrap();
        for t in 0..50 {
            let (trace, _, _) = sample_cluster_boundary(&sd, 2, &mut trial_rng(7, t))
                .unwrap()
                .unwrap();
            let d = sd.derived();
            assert!(trace
                .steps
                .windows(2)
                .all(|w| d.find_edge(w[0], w[1]).is_some()));
            assert!(d.is_horizon(*trace.steps.last().unwrap()));
            assert_eq!(trace.steps[trace.tau], trace.start);
            assert!(trace.steps[trace.tau + 1..]
                .iter()
                .all(|&v| v != trace.start));
        }
    }

    #[test]
    fn census_on_small_graphs() {
        for (g, o, trials) in [(p5(), 2, 20_000), (star3(), 0, 5_000), (grid3(), 4, 20_000)] {
            let sd = SubdivisionMap::new(&g, 2).unwrap();
            let census = qn_census_rw(&sd, o, trials, 1).unwrap();
            let exact =
                enumerate_minimal_cutsets_by_components(&g, o, g.n_edges(), COMPONENT_CAP).unwrap();
            for c in census.decoded.keys() {
                assert!(exact.cutsets.contains(c));
            }
            for (&n, &k) in &census.distinct_by_size {
                assert!(k <= exact.count(n));
            }
            let smallest = exact
                .counts
                .iter()
                .find(|(_, &q)| q > 0)
                .map(|(&n, _)| n)
                .unwrap();
            assert_eq!(
                census.distinct_by_size.get(&smallest),
                Some(&exact.count(smallest))
            );
            let total: u64 = census.decoded.values().sum::<u64>()
                + census.not_minimal
                + census.non_midpoint
                + census.aborted;
            assert_eq!(total, trials);
        }
    }

    #[test]
    fn constant_k() {
        assert_eq!(walk_constant_k(2.0), 2f64.powi(15));
    }
}
