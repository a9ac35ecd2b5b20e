use crate::error::{Error, Result};
use crate::graph_core::{EdgeSet, Graph, UnionFind};
use crate::stats::run_trials;
use rand::seq::SliceRandom;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KargerReport {
    pub min_cut_size: usize,
    /// Distinct cuts of size `min_cut_size` seen across all trials.
    pub cuts: BTreeSet<EdgeSet>,
    pub trials: u64,
}

impl KargerReport {
    pub fn distinct(&self) -> usize {
        self.cuts.len()
    }
}

fn pairs(n: usize) -> u64 {
    (n as u64) * (n as u64).saturating_sub(1) / 2
}

/// `10 · C(n,2) · ln C(n,2)`, rounded up, at least 10.
pub fn default_karger_trials(n_vertices: usize) -> u64 {
    let c = pairs(n_vertices) as f64;
    ((10.0 * c * c.ln()).ceil() as u64).max(10)
}

/// One contraction run: processing edges in uniformly random order and
/// merging endpoints until two super-vertices remain is the same as
/// contracting a uniformly random surviving edge at every step.
fn contract_once(graph: &Graph, rng: &mut impl rand::Rng) -> EdgeSet {
    let mut order: Vec<usize> = (0..graph.n_edges()).collect();
    order.shuffle(rng);
    let mut uf = UnionFind::new(graph.n_vertices());
    for e in order {
        if uf.components() <= 2 {
            break;
        }
        let (u, v) = graph.edge(e);
        uf.union(u, v);
    }
    graph
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| !uf.same(u, v))
        .map(|(e, _)| e)
        .collect()
}

/// Repeated random contraction; records every distinct cut that attains the
/// smallest size seen. The horizon is ignored.
pub fn karger_count_min_cuts(
    graph: &Graph,
    trials: Option<u64>,
    seed: u64,
) -> Result<KargerReport> {
    let n = graph.n_vertices();
    if n < 2 {
        return Err(Error::precondition(
            "minimum cuts need at least two vertices",
        ));
    }
    let trials = trials.unwrap_or_else(|| default_karger_trials(n));
    let outcomes = run_trials(trials, seed, |_, rng| contract_once(graph, rng));
    let mut best = usize::MAX;
    let mut cuts = BTreeSet::new();
    for cut in outcomes {
        match cut.len().cmp(&best) {
            std::cmp::Ordering::Less => {
                best = cut.len();
                cuts.clear();
                cuts.insert(cut);
            }
            std::cmp::Ordering::Equal => {
                cuts.insert(cut);
            }
            std::cmp::Ordering::Greater => {}
        }
    }
    if cuts.len() as u64 > pairs(n) {
        return Err(Error::invariant(format!(
            "{} distinct minimum cuts exceed C({n},2)",
            cuts.len()
        )));
    }
    Ok(KargerReport {
        min_cut_size: best,
        cuts,
        trials,
    })
}
