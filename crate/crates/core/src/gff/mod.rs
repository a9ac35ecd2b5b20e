//! Gaussian free field with zero boundary values on the horizon.
//!
//! The covariance is the degree-normalised Green function of the walk killed
//! at the horizon, `G(x,y) = E_x[visits to y] / d_y`.

mod pipeline;

pub use pipeline::{excursion_pipeline, PipelineReport, SignRow};

use crate::error::{Error, Result};
use crate::graph_core::{Graph, VertexId, VertexSet};
use crate::markov::{fundamental_matrix, index_of, interior_checked};
use crate::rw_cutsets::{escape_probabilities, EscapeMethod};
use crate::stats::{run_trials, TrialRng};
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

const SYM_TOL: f64 = 1e-9;
const JITTER: f64 = 1e-12;

/// Green function on the interior vertices with its Cholesky factor.
#[derive(Clone, Debug)]
pub struct GreenMatrix {
    n_vertices: usize,
    interior: Vec<VertexId>,
    index: Vec<usize>,
    g: DMatrix<f64>,
    lower: DMatrix<f64>,
}

fn cholesky(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if let Some(c) = Cholesky::<f64, Dyn>::new(g.clone()) {
        return Ok(c.l());
    }
    log::warn!("Cholesky failed, retrying with jitter {JITTER:e}");
    let n = g.nrows();
    Cholesky::<f64, Dyn>::new(g + DMatrix::identity(n, n) * JITTER)
        .map(|c| c.l())
        .ok_or_else(|| Error::Solve("Green matrix is not positive definite".into()))
}

impl GreenMatrix {
    pub fn new(graph: &Graph) -> Result<Self> {
        let interior = interior_checked(graph)?;
        if interior.is_empty() {
            return Err(Error::precondition("no interior vertices"));
        }
        let n = fundamental_matrix(graph, &interior)?;
        let k = interior.len();
        let g = DMatrix::from_fn(k, k, |i, j| n[(i, j)] / graph.degree(interior[j]) as f64);
        let asym = (&g - g.transpose()).amax();
        if asym > SYM_TOL {
            return Err(Error::invariant(format!(
                "Green matrix asymmetric by {asym:e}"
            )));
        }
        let g = (&g + g.transpose()) * 0.5;
        let lower = cholesky(&g)?;
        Ok(GreenMatrix {
            n_vertices: graph.n_vertices(),
            index: index_of(graph, &interior),
            interior,
            g,
            lower,
        })
    }

    pub fn interior(&self) -> &[VertexId] {
        &self.interior
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.g
    }

    /// `G(x,y)`, zero when either vertex lies on the horizon.
    pub fn get(&self, x: VertexId, y: VertexId) -> f64 {
        match (self.index[x], self.index[y]) {
            (usize::MAX, _) | (_, usize::MAX) => 0.0,
            (i, j) => self.g[(i, j)],
        }
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        (self.index[v] != usize::MAX).then_some(self.index[v])
    }
}

/// Green matrix of the walk killed at the horizon.
pub fn green(graph: &Graph) -> Result<GreenMatrix> {
    GreenMatrix::new(graph)
}

/// Largest `|G(x,x) d_x P_x(no return) - 1|`, with the escape probabilities
/// from separate per-vertex hitting solves.
pub fn diagonal_identity_residual(graph: &Graph, green: &GreenMatrix) -> Result<f64> {
    let esc = escape_probabilities(graph, EscapeMethod::Hitting)?;
    Ok(esc
        .iter()
        .map(|&(v, q)| (green.get(v, v) * graph.degree(v) as f64 * q - 1.0).abs())
        .fold(0.0, f64::max))
}

/// One field sample: a value for every vertex, zero on the horizon.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaussianField {
    pub values: Vec<f64>,
}

impl GaussianField {
    pub fn get(&self, v: VertexId) -> f64 {
        self.values[v]
    }
}

pub fn sample_field(green: &GreenMatrix, rng: &mut TrialRng) -> GaussianField {
    let k = green.interior.len();
    let z = DVector::from_fn(k, |_, _| StandardNormal.sample(rng));
    let x = &green.lower * z;
    let mut values = vec![0.0; green.n_vertices];
    for (i, &v) in green.interior.iter().enumerate() {
        values[v] = x[i];
    }
    GaussianField { values }
}

/// Independent fields with per-sample derived seeds.
pub fn sample_fields(green: &GreenMatrix, samples: u64, seed: u64) -> Vec<GaussianField> {
    run_trials(samples, seed, |_, rng| sample_field(green, rng))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExcursionCluster {
    /// Component of `o` among interior vertices with `φ ≥ level`; empty
    /// when `φ(o) < level`.
    pub vertices: VertexSet,
    /// Whether the cluster is adjacent to a horizon vertex.
    pub touches_horizon: bool,
}

pub fn excursion_cluster(
    graph: &Graph,
    field: &GaussianField,
    o: VertexId,
    level: f64,
) -> Result<ExcursionCluster> {
    if graph.is_horizon(o) {
        return Err(Error::precondition(format!(
            "vertex {o} lies in the horizon"
        )));
    }
    if field.get(o) < level {
        return Ok(ExcursionCluster {
            vertices: VertexSet::empty(graph.n_vertices()),
            touches_horizon: false,
        });
    }
    let vertices = graph.reach_from(
        [o],
        |w| !graph.is_horizon(w) && field.get(w) >= level,
        |_| true,
    );
    let touches_horizon = vertices
        .iter()
        .any(|u| graph.neighbours(u).any(|w| graph.is_horizon(w)));
    Ok(ExcursionCluster {
        vertices,
        touches_horizon,
    })
}

/// Largest entry of `|Σ_RR - Σ_RK Σ_KK⁻¹ Σ_KR - G'|` where `R` is the
/// interior minus `k` and `G'` is the Green matrix with `k` added to the
/// horizon. Fails above 1e-9.
pub fn markov_check(graph: &Graph, green: &GreenMatrix, k: &VertexSet) -> Result<f64> {
    if k.iter().any(|v| green.position(v).is_none()) {
        return Err(Error::precondition(
            "conditioning set must lie in the interior",
        ));
    }
    let rest: Vec<VertexId> = green
        .interior
        .iter()
        .copied()
        .filter(|&v| !k.contains(v))
        .collect();
    if rest.is_empty() {
        return Ok(0.0);
    }
    let ks: Vec<VertexId> = k.iter().collect();
    let pick = |a: &[VertexId], b: &[VertexId]| {
        DMatrix::from_fn(a.len(), b.len(), |i, j| green.get(a[i], b[j]))
    };
    let s_rr = pick(&rest, &rest);
    let cond = if ks.is_empty() {
        s_rr
    } else {
        let s_rk = pick(&rest, &ks);
        let s_kk = pick(&ks, &ks);
        let x = crate::linalg::solve_many(&s_kk, &s_rk.transpose())?;
        s_rr - s_rk * x
    };
    let slit = graph.with_horizon(graph.horizon().iter().chain(ks.iter().copied()))?;
    let g2 = GreenMatrix::new(&slit)?;
    let target = DMatrix::from_fn(rest.len(), rest.len(), |i, j| g2.get(rest[i], rest[j]));
    let res = (cond - target).amax();
    if res > SYM_TOL {
        return Err(Error::invariant(format!(
            "Markov property residual {res:e}"
        )));
    }
    Ok(res)
}

/// For every entry, `(empirical covariance - G) / SE` over the samples.
/// Returns the largest absolute z-score.
pub fn covariance_zscore(green: &GreenMatrix, fields: &[GaussianField]) -> f64 {
    let k = green.interior.len();
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in i..k {
            let (a, b) = (green.interior[i], green.interior[j]);
            let prods: Vec<f64> = fields.iter().map(|f| f.get(a) * f.get(b)).collect();
            let (mean, se) = crate::stats::mean_and_se(&prods);
            // centred field: the product mean estimates the covariance
            worst = worst.max(((mean - green.g[(i, j)]) / se).abs());
        }
    }
    worst
}

/// Empirical `Cov(1{φ(a) ≥ s}, 1{φ(b) ≥ t})` and its standard error.
pub fn threshold_covariance(
    fields: &[GaussianField],
    a: VertexId,
    s: f64,
    b: VertexId,
    t: f64,
) -> (f64, f64) {
    let n = fields.len() as f64;
    let fa: Vec<f64> = fields
        .iter()
        .map(|f| (f.get(a) >= s) as u8 as f64)
        .collect();
    let fb: Vec<f64> = fields
        .iter()
        .map(|f| (f.get(b) >= t) as u8 as f64)
        .collect();
    let ma = fa.iter().sum::<f64>() / n;
    let mb = fb.iter().sum::<f64>() / n;
    let prods: Vec<f64> = fa
        .iter()
        .zip(&fb)
        .map(|(x, y)| (x - ma) * (y - mb))
        .collect();
    crate::stats::mean_and_se(&prods)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutsets::fixtures::*;
    use crate::stats::trial_rng;

    #[test]
    fn positive_association() {
        let g = crate::graph_core::Family::Grid {
            width: 4,
            height: 4,
            torus: false,
        }
        .build(&crate::graph_core::HorizonSpec::Boundary)
        .unwrap();
        let gr = green(&g).unwrap();
        let fs = sample_fields(&gr, 20_000, 6);
        for (a, b) in [(5, 5), (5, 6), (5, 10), (6, 9)] {
            assert!(gr.get(a, b) >= 0.0);
            for (s, t) in [(0.0, 0.0), (-0.5, 0.7), (1.0, -1.0)] {
                let (cov, se) = threshold_covariance(&fs, a, s, b, t);
                assert!(cov >= -3.0 * se, "{a} {b} {s} {t}: {cov} {se}");
            }
        }
    }

    #[test]
    fn three_path_green() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)], [0, 2]).unwrap();
        let gr = green(&g).unwrap();
        assert!((gr.get(1, 1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn five_path_green() {
        let g = p5();
        let gr = green(&g).unwrap();
        assert!((gr.get(2, 2) - 1.0).abs() < 1e-14);
        assert!(diagonal_identity_residual(&g, &gr).unwrap() < 1e-12);
        assert!(diagonal_identity_residual(&grid3(), &green(&grid3()).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn field_sampling() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)], [0, 2]).unwrap();
        let gr = green(&g).unwrap();
        let fs = sample_fields(&gr, 20_000, 3);
        assert!(covariance_zscore(&gr, &fs) < 5.0);
        assert_eq!(fs[0].get(0), 0.0);
        let again = sample_field(&gr, &mut trial_rng(3, 0));
        assert_eq!(again, fs[0]);

        let g = p5();
        let gr = green(&g).unwrap();
        let fs = sample_fields(&gr, 20_000, 4);
        assert!(covariance_zscore(&gr, &fs) < 5.0);
    }

    #[test]
    fn excursion_levels() {
        let g = p5();
        let gr = green(&g).unwrap();
        let f = sample_field(&gr, &mut trial_rng(5, 0));
        let all = excursion_cluster(&g, &f, 2, f64::NEG_INFINITY).unwrap();
        assert_eq!(all.vertices.to_vec(), vec![1, 2, 3]);
        assert!(all.touches_horizon);
        assert!(excursion_cluster(&g, &f, 2, f64::INFINITY)
            .unwrap()
            .vertices
            .is_empty());
    }

    #[test]
    fn markov_property() {
        let g = p5();
        let gr = green(&g).unwrap();
        assert_eq!(markov_check(&g, &gr, &VertexSet::empty(5)).unwrap(), 0.0);
        markov_check(&g, &gr, &VertexSet::from_iter(5, [2])).unwrap();
        // conditioning on the middle decouples the two sides
        let slit = g.with_horizon([0, 2, 4]).unwrap();
        assert_eq!(green(&slit).unwrap().get(1, 3), 0.0);
        let grid = crate::graph_core::Family::Grid {
            width: 5,
            height: 5,
            torus: false,
        }
        .build(&crate::graph_core::HorizonSpec::Boundary)
        .unwrap();
        let gg = green(&grid).unwrap();
        for k in [vec![12], vec![6, 8, 16], vec![6, 7, 8, 11, 13, 16, 17, 18]] {
            markov_check(&grid, &gg, &VertexSet::from_iter(25, k)).unwrap();
        }
    }
}
