use super::{excursion_cluster, green, sample_field, GaussianField};
use crate::cutsets::{decompose, exposed_boundary, Cutset};
use crate::error::{Error, Result};
use crate::graph_core::{EdgeSet, Graph, SubdivisionMap, VertexId, VertexSet};
use crate::percolation::EventProbability;
use crate::stats::{mean_and_se, run_trials, Z99};
use serde::Serialize;

/// Sign bound at one vertex `u` of `Ã`: `P(u ↔ ∂Ã in {φ_A ≥ -1})` against
/// `E sgn(φ_A(u) + 1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignRow {
    pub vertex: VertexId,
    pub connect: f64,
    pub mean_sign: f64,
    /// Mean and standard error of `1{u ↔ ∂Ã} - sgn(φ_A(u) + 1)`.
    pub diff_mean: f64,
    pub diff_se: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub trials: u64,
    pub n: usize,
    /// Inner (`x_i`) and outer (`y_i`) endpoints of each mid-edge.
    pub inner: Vec<VertexId>,
    pub outer: Vec<VertexId>,
    /// `φ(y_i) ∈ [-2,-1]` and `φ(x_i) ∈ [1,2]` for all `i`.
    pub f: EventProbability,
    /// `o` joined to every `x_i` inside `Ã ∩ {φ ≥ 0}`.
    pub e: EventProbability,
    pub fe: EventProbability,
    /// `∂_∞C̃ = Π̃`.
    pub hit: EventProbability,
    /// Samples whose endpoint values, clamped into the `F` windows, satisfy
    /// `E`; each one is an extra check of the implication.
    pub clamped_checks: u64,
    pub sign_rows: Vec<SignRow>,
}

/// Samples the field on the length-3 subdivision and tracks the events
/// behind the excursion-set cutset bound, asserting on every sample that
/// `F ∩ E` forces `∂_∞C̃ = Π̃`.
pub fn excursion_pipeline(
    base: &Graph,
    cutset: &Cutset,
    trials: u64,
    seed: u64,
) -> Result<PipelineReport> {
    if trials == 0 {
        return Err(Error::precondition("at least one trial is required"));
    }
    let sd = SubdivisionMap::new(base, 3)?;
    let g = sd.derived();
    let o = cutset.source();
    let d = decompose(base, cutset)?;
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    for &e in cutset.edge_ids() {
        let (a, _) = base.edge(e);
        let mids = sd.midpoints(e);
        if d.component.contains(a) {
            inner.push(mids[0]);
            outer.push(mids[1]);
        } else {
            inner.push(mids[1]);
            outer.push(mids[0]);
        }
    }
    let pi_tilde = EdgeSet::new(cutset.edge_ids().iter().map(|&e| sd.mid_edge(e)).collect());
    let a_tilde = g.reach_from([o], |_| true, |e| !pi_tilde.contains(e));
    if a_tilde.intersects(g.horizon()) {
        return Err(Error::invariant(
            "component of the origin reaches the horizon",
        ));
    }
    let inner_set = VertexSet::from_iter(g.n_vertices(), inner.iter().copied());
    let gr = green(g)?;

    #[derive(Clone, Copy, Default)]
    struct Flags {
        f: bool,
        e: bool,
        hit: bool,
        clamped: bool,
    }
    let event_e = |phi: &GaussianField| {
        phi.get(o) >= 0.0 && {
            let reach = g.reach_from([o], |w| a_tilde.contains(w) && phi.get(w) >= 0.0, |_| true);
            inner_set.is_subset(&reach)
        }
    };
    let event_hit = |phi: &GaussianField| -> Result<bool> {
        let cluster = excursion_cluster(g, phi, o, 0.0)?;
        Ok(!cluster.vertices.is_empty()
            && !cluster.touches_horizon
            && exposed_boundary(g, &cluster.vertices)? == pi_tilde)
    };
    let violation = || Error::invariant("F ∩ E holds but the exposed boundary differs from Π̃");
    let eval = |phi: GaussianField| -> Result<Flags> {
        let f = outer.iter().all(|&y| (-2.0..=-1.0).contains(&phi.get(y)))
            && inner.iter().all(|&x| (1.0..=2.0).contains(&phi.get(x)));
        let e = event_e(&phi);
        let hit = event_hit(&phi)?;
        if f && e && !hit {
            return Err(violation());
        }
        let mut forced = phi;
        for &y in &outer {
            forced.values[y] = forced.values[y].clamp(-2.0, -1.0);
        }
        for &x in &inner {
            forced.values[x] = forced.values[x].clamp(1.0, 2.0);
        }
        let clamped = event_e(&forced);
        if clamped && !event_hit(&forced)? {
            return Err(violation());
        }
        Ok(Flags { f, e, hit, clamped })
    };
    let flags = run_trials(trials, seed, |_, rng| eval(sample_field(&gr, rng)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let count = |pred: &dyn Fn(&Flags) -> bool| flags.iter().filter(|x| pred(x)).count() as u64;
    let f = EventProbability::from_counts(count(&|x| x.f), trials);
    let e = EventProbability::from_counts(count(&|x| x.e), trials);
    let fe = EventProbability::from_counts(count(&|x| x.f && x.e), trials);
    let hit = EventProbability::from_counts(count(&|x| x.hit), trials);
    let clamped_checks = count(&|x| x.clamped);

    let sign_rows = sign_bound(&sd, &a_tilde, &inner, trials, seed ^ 0x5167_6e00)?;
    Ok(PipelineReport {
        trials,
        n: inner.len(),
        inner,
        outer,
        f,
        e,
        fe,
        hit,
        clamped_checks,
        sign_rows,
    })
}

/// Field on `Ã` killed at the inner endpoints; for each interior `u`
/// compares the connection indicator with the sign of `φ_A(u) + 1`.
fn sign_bound(
    sd: &SubdivisionMap,
    a_tilde: &VertexSet,
    inner: &[VertexId],
    trials: u64,
    seed: u64,
) -> Result<Vec<SignRow>> {
    let g = sd.derived();
    let locals: Vec<VertexId> = a_tilde.iter().collect();
    let local_of = |v: VertexId| locals.binary_search(&v).expect("vertex of Ã");
    let (ga, map, _) = g.induced(a_tilde, inner.iter().map(|&x| local_of(x)))?;
    if ga.interior().is_empty() {
        return Ok(Vec::new());
    }
    let gra = green(&ga)?;
    let interior = ga.interior();
    let samples = run_trials(trials, seed, |_, rng| {
        let phi = sample_field(&gra, rng);
        let open = |w: usize| ga.is_horizon(w) || phi.get(w) >= -1.0;
        interior
            .iter()
            .map(|&u| {
                let sign = (phi.get(u) + 1.0).signum();
                let conn = phi.get(u) >= -1.0 && {
                    let reach = ga.reach_from([u], |w| !ga.is_horizon(w) && open(w), |_| true);
                    let touches = reach
                        .iter()
                        .any(|x| ga.neighbours(x).any(|w| ga.is_horizon(w)));
                    touches
                };
                (conn, sign)
            })
            .collect::<Vec<_>>()
    });
    Ok(interior
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let diffs: Vec<f64> = samples
                .iter()
                .map(|s| s[i].0 as u8 as f64 - s[i].1)
                .collect();
            let connect = samples.iter().filter(|s| s[i].0).count() as f64 / trials as f64;
            let mean_sign = samples.iter().map(|s| s[i].1).sum::<f64>() / trials as f64;
            let (diff_mean, diff_se) = mean_and_se(&diffs);
            SignRow {
                vertex: map[u],
                connect,
                mean_sign,
                diff_mean,
                diff_se,
                holds: diff_mean >= -Z99 * diff_se,
            }
        })
        .collect())
}
