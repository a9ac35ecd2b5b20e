use super::{epsilon2, escape_constant, EscapeMethod};
use crate::cover_lemma::{
    covering_sum_exact, delta_bound, min_cut, SubStochasticMatrix, DP_CAP, MIN_CUT_CAP,
};
use crate::cutsets::{decompose, Cutset};
use crate::error::{Error, Result};
use crate::graph_core::{SubdivisionMap, VertexId, VertexSet};
use crate::markov::{index_of, solve_dirichlet};
use serde::Serialize;

const SYM_TOL: f64 = 1e-9;

/// Midpoint of the lowest-id edge at `o` in the length-2 subdivision.
pub fn origin_midpoint(sd: &SubdivisionMap, o: VertexId) -> Result<VertexId> {
    let e = sd
        .base()
        .incident(o)
        .iter()
        .map(|&(e, _)| e)
        .min()
        .ok_or_else(|| Error::precondition(format!("vertex {o} has no edges")))?;
    Ok(sd.midpoint(e))
}

/// Excursion probabilities between the midpoints of a cutset and `o'`.
///
/// `p(u,v)` is the probability that the walk from `u` first re-enters `U`
/// at `v` after moving only through `I \ U`, where `I` is the component `A`
/// of the origin with the midpoints of edges inside `A`. Leaving `U ∪ I`
/// kills the excursion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossingMatrix {
    /// Derived-graph ids: midpoints of the cutset edges by edge id, then
    /// `o'` unless it is one of them.
    pub u: Vec<VertexId>,
    /// Position of `o'` in `u`.
    pub origin_index: usize,
    pub interior: Vec<VertexId>,
    pub p: Vec<Vec<f64>>,
    pub symmetry_residual: f64,
}

impl CrossingMatrix {
    /// The matrix reordered so that `o'` is state 0, symmetrised.
    pub fn cover_matrix(&self) -> Result<SubStochasticMatrix> {
        let k = self.u.len();
        let mut order = vec![self.origin_index];
        order.extend((0..k).filter(|&i| i != self.origin_index));
        SubStochasticMatrix::from_fn(k, |i, j| {
            let (a, b) = (order[i], order[j]);
            (self.p[a][b] + self.p[b][a]) / 2.0
        })
    }
}

pub fn crossing_matrix(sd: &SubdivisionMap, cutset: &Cutset) -> Result<CrossingMatrix> {
    if sd.order() != 2 {
        return Err(Error::precondition(
            "crossing matrices need the length-2 subdivision",
        ));
    }
    let base = sd.base();
    let g = sd.derived();
    let o = cutset.source();
    let d = decompose(base, cutset)?;
    let o_prime = origin_midpoint(sd, o)?;
    let mut u: Vec<VertexId> = cutset.edge_ids().iter().map(|&e| sd.midpoint(e)).collect();
    let origin_index = match u.iter().position(|&x| x == o_prime) {
        Some(i) => i,
        None => {
            u.push(o_prime);
            u.len() - 1
        }
    };
    let interior_set = sd.lift_closed(&d.component);
    let in_u = VertexSet::from_iter(g.n_vertices(), u.iter().copied());
    let domain: Vec<VertexId> = interior_set.iter().filter(|&x| !in_u.contains(x)).collect();
    let k = u.len();
    let u_idx = index_of(g, &u);
    let h = solve_dirichlet(g, &domain, k, |y, c| if u_idx[y] == c { 1.0 } else { 0.0 })?;
    let dom_idx = index_of(g, &domain);
    let mut p = vec![vec![0.0; k]; k];
    for (a, &x) in u.iter().enumerate() {
        let deg = g.degree(x) as f64;
        for w in g.neighbours(x) {
            if u_idx[w] != usize::MAX {
                p[a][u_idx[w]] += 1.0 / deg;
            } else if dom_idx[w] != usize::MAX {
                for c in 0..k {
                    p[a][c] += h[(dom_idx[w], c)] / deg;
                }
            }
        }
    }
    let mut symmetry_residual = 0.0f64;
    for (a, pa) in p.iter().enumerate() {
        for (b, pab) in pa.iter().enumerate() {
            symmetry_residual = symmetry_residual.max((pab - p[b][a]).abs());
        }
        let row: f64 = pa.iter().sum();
        if row > 1.0 + SYM_TOL {
            return Err(Error::invariant(format!("crossing row {a} sums to {row}")));
        }
    }
    if symmetry_residual > SYM_TOL {
        return Err(Error::invariant(format!(
            "crossing matrix asymmetric by {symmetry_residual:e}"
        )));
    }
    Ok(CrossingMatrix {
        u,
        origin_index,
        interior: interior_set.to_vec(),
        p,
        symmetry_residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossingCheck {
    pub matrix: CrossingMatrix,
    pub base_epsilon: f64,
    pub epsilon2: f64,
    /// Minimum over non-trivial partitions of `U`; infinite when `|U| = 1`.
    pub min_cut: f64,
    /// Covering sum of the matrix started at `o'`, when `|U| ≤ DP_CAP`.
    pub covering_sum: Option<f64>,
    /// `δ^{|U|}` with `δ = ε₂²/(16e²)`.
    pub delta_u: f64,
}

/// Builds the crossing matrix and checks `p(L,R) ≥ ε₂` on every partition
/// and, when small enough, the covering sum against `δ^{|U|}`.
pub fn check_crossing(sd: &SubdivisionMap, cutset: &Cutset) -> Result<CrossingCheck> {
    let matrix = crossing_matrix(sd, cutset)?;
    let base_epsilon = escape_constant(sd.base(), EscapeMethod::Green)?.epsilon;
    let eps2 = epsilon2(base_epsilon);
    let cm = matrix.cover_matrix()?;
    if cm.n() > MIN_CUT_CAP {
        return Err(Error::CapExceeded {
            what: "crossing partitions (|U|)",
            cap: MIN_CUT_CAP,
            actual: cm.n(),
        });
    }
    let cut = min_cut(&cm)?;
    if cut < eps2 - 1e-12 {
        return Err(Error::invariant(format!(
            "crossing cut {cut} below ε₂ = {eps2}"
        )));
    }
    let delta_u = delta_bound(eps2, cm.n());
    let covering_sum = if cm.n() <= DP_CAP {
        let s = covering_sum_exact(&cm)?;
        if cm.n() >= 2 && s < delta_u {
            return Err(Error::invariant(format!(
                "covering sum {s} below δ^|U| = {delta_u}"
            )));
        }
        Some(s)
    } else {
        None
    };
    Ok(CrossingCheck {
        matrix,
        base_epsilon,
        epsilon2: eps2,
        min_cut: cut,
        covering_sum,
        delta_u,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutsets::fixtures::*;
    use crate::cutsets::{enumerate_minimal_cutsets_by_components, COMPONENT_CAP};
    use crate::graph_core::EdgeSet;

    #[test]
    fn path_cutset_matrix() {
        let g = p5();
        let sd = SubdivisionMap::new(&g, 2).unwrap();
        let c = Cutset::new(&g, EdgeSet::new(vec![1, 2]), 2).unwrap();
        let m = crossing_matrix(&sd, &c).unwrap();
        // o' = m(12) is itself a cutset midpoint; I = {2}
        assert_eq!(m.u, vec![sd.midpoint(1), sd.midpoint(2)]);
        assert_eq!(m.origin_index, 0);
        assert_eq!(m.interior, vec![2]);
        // each midpoint steps to 2 w.p. 1/2, then splits evenly
        for a in 0..2 {
            for b in 0..2 {
                assert!((m.p[a][b] - 0.25).abs() < 1e-14);
            }
        }
        let chk = check_crossing(&sd, &c).unwrap();
        assert!(chk.min_cut >= chk.epsilon2);

        let c = Cutset::new(&g, EdgeSet::new(vec![0, 3]), 2).unwrap();
        let m = crossing_matrix(&sd, &c).unwrap();
        assert_eq!(m.u.len(), 3);
        assert!(m.p.iter().all(|r| r.iter().sum::<f64>() <= 1.0 + 1e-12));
    }

    #[test]
    fn grid_cutsets_cross_well() {
        let g = grid3();
        let sd = SubdivisionMap::new(&g, 2).unwrap();
        let q = enumerate_minimal_cutsets_by_components(&g, 4, 8, COMPONENT_CAP).unwrap();
        for c in q.all_cutsets() {
            let chk = check_crossing(&sd, &c).unwrap();
            assert!(chk.matrix.symmetry_residual < 1e-12);
            assert!(chk.min_cut >= chk.epsilon2);
        }
    }
}
