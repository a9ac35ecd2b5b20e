use super::{check_p, cluster_report, EventProbability, PercConfig};
use crate::error::{Error, Result};
use crate::graph_core::{EdgeSet, Graph, VertexId};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Largest edge count for exact enumeration over all configurations.
pub const EXACT_EDGE_CAP: usize = 20;

const CHUNK_BITS: usize = 10;

fn check_cap(graph: &Graph) -> Result<usize> {
    let m = graph.n_edges();
    if m > EXACT_EDGE_CAP {
        return Err(Error::CapExceeded {
            what: "exact percolation enumeration (edges)",
            cap: EXACT_EDGE_CAP,
            actual: m,
        });
    }
    Ok(m)
}

fn weights(m: usize, p: f64) -> Vec<f64> {
    (0..=m)
        .map(|k| p.powi(k as i32) * (1.0 - p).powi((m - k) as i32))
        .collect()
}

/// `E_p[f]` summed over every configuration. Chunks are reduced in a fixed
/// order, so the result does not depend on the thread count.
pub fn exact_expectation<F>(graph: &Graph, p: f64, f: F) -> Result<f64>
where
    F: Fn(&PercConfig) -> f64 + Sync,
{
    check_p(p)?;
    let m = check_cap(graph)?;
    let w = weights(m, p);
    let total = 1u64 << m;
    let chunk = 1u64 << CHUNK_BITS.min(m);
    let partial: Vec<f64> = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut s = 0.0;
            for mask in c * chunk..(c + 1) * chunk {
                let wt = w[mask.count_ones() as usize];
                if wt > 0.0 {
                    s += wt * f(&PercConfig::from_mask(m, mask));
                }
            }
            s
        })
        .collect();
    Ok(partial.iter().sum())
}

pub fn exact_prob<F>(graph: &Graph, p: f64, event: F) -> Result<EventProbability>
where
    F: Fn(&PercConfig) -> bool + Sync,
{
    let v = exact_expectation(graph, p, |c| if event(c) { 1.0 } else { 0.0 })?;
    Ok(EventProbability::exact(v))
}

/// Exact law of the exposed boundary of `v`'s cluster: the probability of
/// each minimal cutset, plus the probability that the cluster reaches the
/// horizon.
pub fn boundary_distribution_exact(
    graph: &Graph,
    p: f64,
    v: VertexId,
) -> Result<(BTreeMap<EdgeSet, f64>, f64)> {
    check_p(p)?;
    let m = check_cap(graph)?;
    if graph.is_horizon(v) {
        return Err(Error::precondition(format!(
            "vertex {v} lies in the horizon"
        )));
    }
    let w = weights(m, p);
    let mut law = BTreeMap::new();
    let mut infinite = 0.0;
    for mask in 0..1u64 << m {
        let wt = w[mask.count_ones() as usize];
        if wt == 0.0 {
            continue;
        }
        match cluster_report(graph, &PercConfig::from_mask(m, mask), v).exposed {
            Some(pi) => *law.entry(pi).or_insert(0.0) += wt,
            None => infinite += wt,
        }
    }
    Ok((law, infinite))
}
