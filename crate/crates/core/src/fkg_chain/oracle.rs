use crate::error::{Error, Result};
use crate::graph_core::{Graph, UnionFind, VertexId, VertexSet};
use crate::percolation::{sample_config, PercConfig, EXACT_EDGE_CAP};
use crate::stats::{trial_rng, wilson, Z99};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum OracleMode {
    Exact,
    MonteCarlo { trials: u64, seed: u64 },
}

/// Connection probabilities for Bernoulli(p) percolation restricted to the
/// subgraph induced by a vertex set `A`.
///
/// Every configuration with positive weight (or every sampled one) is stored
/// as a vector of cluster labels, so all queries share the same sample and
/// Monte Carlo answers are monotone in the target set.
#[derive(Clone, Debug)]
pub struct ConnectivityOracle {
    mode: OracleMode,
    p: f64,
    local_graph: Graph,
    vertices: Vec<VertexId>,
    local: Vec<usize>,
    labels: Vec<u16>,
    weights: Vec<f64>,
}

fn labels_of(graph: &Graph, config: &PercConfig, out: &mut [u16]) {
    let mut uf = UnionFind::new(graph.n_vertices());
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        if config.is_open(e) {
            uf.union(u, v);
        }
    }
    for (v, slot) in out.iter_mut().enumerate() {
        *slot = uf.find(v) as u16;
    }
}

impl ConnectivityOracle {
    pub fn exact(graph: &Graph, a: &VertexSet, p: f64) -> Result<Self> {
        Self::build(graph, a, p, OracleMode::Exact)
    }

    pub fn monte_carlo(
        graph: &Graph,
        a: &VertexSet,
        p: f64,
        trials: u64,
        seed: u64,
    ) -> Result<Self> {
        Self::build(graph, a, p, OracleMode::MonteCarlo { trials, seed })
    }

    pub fn build(graph: &Graph, a: &VertexSet, p: f64, mode: OracleMode) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::precondition(format!("p = {p} outside [0, 1]")));
        }
        if a.is_empty() {
            return Err(Error::precondition("empty vertex set"));
        }
        if !graph.is_connected_set(a) {
            return Err(Error::precondition(
                "oracle vertex set must induce a connected subgraph",
            ));
        }
        let (local_graph, vertices, _) = graph.induced(a, std::iter::empty())?;
        let n = local_graph.n_vertices();
        if n > u16::MAX as usize {
            return Err(Error::CapExceeded {
                what: "connectivity oracle (vertices)",
                cap: u16::MAX as usize,
                actual: n,
            });
        }
        let mut local = vec![usize::MAX; graph.n_vertices()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let (labels, weights) = match mode {
            OracleMode::Exact => {
                let m = local_graph.n_edges();
                if m > EXACT_EDGE_CAP {
                    return Err(Error::CapExceeded {
                        what: "exact connectivity oracle (edges)",
                        cap: EXACT_EDGE_CAP,
                        actual: m,
                    });
                }
                let masks: Vec<(u64, f64)> = (0..1u64 << m)
                    .map(|mask| {
                        let k = mask.count_ones() as i32;
                        (mask, p.powi(k) * (1.0 - p).powi(m as i32 - k))
                    })
                    .filter(|&(_, w)| w > 0.0)
                    .collect();
                let labels = masks
                    .par_iter()
                    .flat_map_iter(|&(mask, _)| {
                        let mut out = vec![0u16; n];
                        labels_of(&local_graph, &PercConfig::from_mask(m, mask), &mut out);
                        out
                    })
                    .collect();
                (labels, masks.into_iter().map(|(_, w)| w).collect())
            }
            OracleMode::MonteCarlo { trials, seed } => {
                if trials == 0 {
                    return Err(Error::precondition(
                        "Monte Carlo oracle needs at least one trial",
                    ));
                }
                let labels = (0..trials)
                    .into_par_iter()
                    .flat_map_iter(|i| {
                        let mut rng = trial_rng(seed, i);
                        let cfg = sample_config(&local_graph, p, &mut rng);
                        let mut out = vec![0u16; n];
                        labels_of(&local_graph, &cfg, &mut out);
                        out
                    })
                    .collect();
                (labels, vec![1.0 / trials as f64; trials as usize])
            }
        };
        Ok(ConnectivityOracle {
            mode,
            p,
            local_graph,
            vertices,
            local,
            labels,
            weights,
        })
    }

    pub fn mode(&self) -> OracleMode {
        self.mode
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.mode, OracleMode::Exact)
    }

    /// Vertices of `A` in increasing global id.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.local.get(v).is_some_and(|&i| i != usize::MAX)
    }

    /// The induced graph on `A` in local ids, with the local-to-global map.
    pub fn local_graph(&self) -> (&Graph, &[VertexId]) {
        (&self.local_graph, &self.vertices)
    }

    fn local_of(&self, v: VertexId) -> Result<usize> {
        match self.local.get(v) {
            Some(&i) if i != usize::MAX => Ok(i),
            _ => Err(Error::precondition(format!(
                "vertex {v} lies outside the oracle set"
            ))),
        }
    }

    fn local_set(&self, targets: &VertexSet) -> Result<Vec<usize>> {
        targets.iter().map(|v| self.local_of(v)).collect()
    }

    fn rows(&self) -> impl Iterator<Item = (&[u16], f64)> {
        let n = self.vertices.len();
        self.labels
            .chunks_exact(n.max(1))
            .zip(self.weights.iter().copied())
    }

    /// `P(v ↔^A X)` for every `v ∈ A`, in the order of [`Self::vertices`].
    /// Vertices of `X` get probability 1.
    pub fn connection_probs(&self, targets: &VertexSet) -> Result<Vec<f64>> {
        let x = self.local_set(targets)?;
        let n = self.vertices.len();
        let mut acc = vec![0.0; n];
        let mut hit = vec![false; n];
        for (row, w) in self.rows() {
            hit.iter_mut().for_each(|h| *h = false);
            for &i in &x {
                hit[row[i] as usize] = true;
            }
            for (v, a) in acc.iter_mut().enumerate() {
                if hit[row[v] as usize] {
                    *a += w;
                }
            }
        }
        Ok(acc.into_iter().map(|a| a.clamp(0.0, 1.0)).collect())
    }

    pub fn connection_prob(&self, v: VertexId, targets: &VertexSet) -> Result<f64> {
        let i = self.local_of(v)?;
        Ok(self.connection_probs(targets)?[i])
    }

    /// `P(∩_{u ∈ X} {o ↔^A u})`.
    pub fn prob_all_connected(&self, o: VertexId, targets: &VertexSet) -> Result<f64> {
        let o = self.local_of(o)?;
        let x = self.local_set(targets)?;
        let s: f64 = self
            .rows()
            .filter(|(row, _)| x.iter().all(|&i| row[i] == row[o]))
            .map(|(_, w)| w)
            .sum();
        Ok(s.clamp(0.0, 1.0))
    }

    /// Half-width of the 99% interval around an estimate; zero when exact.
    pub fn half_width(&self, prob: f64) -> f64 {
        match self.mode {
            OracleMode::Exact => 0.0,
            OracleMode::MonteCarlo { trials, .. } => {
                let hits = (prob * trials as f64).round() as u64;
                wilson(hits, trials, Z99).half_width()
            }
        }
    }

    /// Cluster labels of each stored configuration, in local ids.
    pub fn label_rows(&self) -> impl Iterator<Item = &[u16]> {
        self.rows().map(|(r, _)| r)
    }
}
