use crate::args::*;
use crate::output::Output;
use kappa_core::cover_lemma::{
    covering_sum_exact, covering_sum_mc, delta_bound, min_cut, verify_cover, SubStochasticMatrix,
};
use kappa_core::cutsets::{
    enumerate_minimal_cutsets_bruteforce, enumerate_minimal_cutsets_by_components,
    karger_count_min_cuts, Cutset, COMPONENT_CAP, EDGE_CAP,
};
use kappa_core::fkg_chain::{build_chain, min_connection_to, ConnectivityOracle, OracleMode};
use kappa_core::graph_core::{
    all_connected_sets, load_graph, EdgeSet, Family, Graph, HorizonSpec, IsoMode, SubdivisionMap,
    VertexSet, SUBSET_CAP,
};
use kappa_core::percolation::{
    boundary_census, fkg_spot_check, peierls_bound, strong_percolation_experiment, theta,
    Connection, Estimator, EXACT_EDGE_CAP,
};
use kappa_core::rw_cutsets::{
    check_crossing, escape_constant, escape_probability_mc, qn_census_rw, subdivision_escape_check,
    EscapeMethod,
};
use kappa_core::{corpus, gff, Error};
use serde::Serialize;
use serde_json::json;

pub enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn seeded(s: &Sampling, what: &str) -> CliResult<Option<(u64, u64)>> {
    match (s.trials, s.seed) {
        (None, None) => Ok(None),
        (Some(t), Some(seed)) => Ok(Some((t, seed))),
        (Some(_), None) => usage(format!(
            "{what} is randomized: --seed is required with --trials"
        )),
        (None, Some(_)) => usage(format!("{what}: --seed given without --trials")),
    }
}

fn required(s: &Sampling, what: &str) -> CliResult<(u64, u64)> {
    match seeded(s, what)? {
        Some(ts) => Ok(ts),
        None => usage(format!(
            "{what} is randomized: --trials and --seed are required"
        )),
    }
}

fn parse_list(s: &str, what: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Usage(format!("bad {what} entry {t:?}")))
        })
        .collect()
}

pub fn resolve_graph(g: &GraphArgs) -> CliResult<Graph> {
    let horizon: Option<HorizonSpec> = g.horizon.as_deref().map(str::parse).transpose()?;
    let path = std::path::Path::new(&g.graph);
    let from_list = |graph: Graph, h: Option<HorizonSpec>| -> CliResult<Graph> {
        match h {
            None => Ok(graph),
            Some(HorizonSpec::List(v)) => Ok(graph.with_horizon(v)?),
            Some(HorizonSpec::None) => Ok(graph.with_horizon([])?),
            Some(HorizonSpec::Boundary) => {
                usage("--horizon boundary applies to generated families only")
            }
        }
    };
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", g.graph)))?;
        return from_list(load_graph(&text)?, horizon);
    }
    if horizon.is_none() {
        if let Some(c) = corpus::by_name(&g.graph) {
            return Ok(c.graph);
        }
    }
    let family: Family = g.graph.parse().map_err(|_| {
        CliError::Usage(format!(
            "--graph {:?} is neither a file nor a known family",
            g.graph
        ))
    })?;
    Ok(family.build(&horizon.unwrap_or(HorizonSpec::Boundary))?)
}

fn cutset_arg(graph: &Graph, spec: &str, origin: usize) -> CliResult<Cutset> {
    Ok(Cutset::new(
        graph,
        EdgeSet::new(parse_list(spec, "cutset")?),
        origin,
    )?)
}

fn edges_str(e: &EdgeSet) -> String {
    e.ids()
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn load_matrix(m: &MatrixArgs) -> CliResult<SubStochasticMatrix> {
    let text = std::fs::read_to_string(&m.matrix)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", m.matrix.display())))?;
    Ok(SubStochasticMatrix::parse(&text)?)
}

pub fn run(cmd: &Command) -> CliResult<Output> {
    match cmd {
        Command::Cutsets { cmd } => cutsets(cmd),
        Command::Perc { cmd } => perc(cmd),
        Command::Chain { cmd } => chain(cmd),
        Command::Cover { cmd } => cover(cmd),
        Command::Rw { cmd } => rw(cmd),
        Command::Gff { cmd } => gff_cmd(cmd),
        Command::Graph {
            cmd: GraphCmd::Gen { graph },
        } => Ok(Output::Text(resolve_graph(graph)?.to_edge_list())),
    }
}

fn cutsets(cmd: &CutsetsCmd) -> CliResult<Output> {
    match cmd {
        CutsetsCmd::Enum {
            graph,
            vertex,
            nmax,
            algo,
        } => {
            let g = resolve_graph(graph)?;
            let table = match algo {
                Algo::Brute => enumerate_minimal_cutsets_bruteforce(&g, *vertex, *nmax, EDGE_CAP)?,
                Algo::Components => {
                    enumerate_minimal_cutsets_by_components(&g, *vertex, *nmax, COMPONENT_CAP)?
                }
            };
            let kappa = table.kappa_estimate();
            Ok(Output::Rows(
                (1..=*nmax)
                    .map(|n| json!({"vertex": vertex, "n": n, "count": table.count(n), "kappa_estimate": kappa}))
                    .collect(),
            ))
        }
        CutsetsCmd::Karger { graph, sampling } => {
            let g = resolve_graph(graph)?;
            if sampling.seed.is_none() {
                return usage("cutsets karger is randomized: --seed is required");
            }
            let r = karger_count_min_cuts(&g, sampling.trials, sampling.seed.unwrap())?;
            Ok(Output::Rows(
                r.cuts
                    .iter()
                    .map(|c| json!({"min_cut_size": r.min_cut_size, "trials": r.trials, "distinct": r.distinct(), "edges": edges_str(c)}))
                    .collect(),
            ))
        }
    }
}

#[derive(Serialize)]
struct EstimateRow {
    vertex: usize,
    p: f64,
    theta: f64,
    method: &'static str,
    trials: Option<u64>,
    ci_lo: f64,
    ci_hi: f64,
}

fn perc(cmd: &PercCmd) -> CliResult<Output> {
    match cmd {
        PercCmd::Theta {
            graph,
            p,
            vertex,
            exact: _,
            sampling,
        } => {
            let g = resolve_graph(graph)?;
            let est = match seeded(sampling, "perc theta")? {
                None => Estimator::Exact,
                Some((trials, seed)) => Estimator::MonteCarlo { trials, seed },
            };
            let r = theta(&g, *p, *vertex, est)?;
            let ci = r.interval();
            Ok(Output::rows([EstimateRow {
                vertex: *vertex,
                p: *p,
                theta: r.value,
                method: if r.is_exact() { "exact" } else { "monte_carlo" },
                trials: sampling.trials,
                ci_lo: ci.lo,
                ci_hi: ci.hi,
            }]))
        }
        PercCmd::Peierls {
            graph,
            vertex,
            p,
            nmax,
        } => {
            let g = resolve_graph(graph)?;
            let table = enumerate_minimal_cutsets_by_components(
                &g,
                *vertex,
                nmax.unwrap_or(g.n_edges()),
                COMPONENT_CAP,
            )?;
            let mut rows = Vec::new();
            for &p in p {
                let finite = if g.n_edges() <= EXACT_EDGE_CAP {
                    Some(1.0 - theta(&g, p, *vertex, Estimator::Exact)?.value)
                } else {
                    None
                };
                let bound = peierls_bound(&table, p);
                let holds = finite.map(|f| f <= bound + 1e-12);
                if holds == Some(false) && nmax.is_none() {
                    return Err(Error::invariant(format!(
                        "finite-cluster probability {} exceeds the union bound {bound}",
                        finite.unwrap()
                    ))
                    .into());
                }
                rows.push(json!({"vertex": vertex, "p": p, "finite_exact": finite, "bound": bound, "holds": holds}));
            }
            Ok(Output::Rows(rows))
        }
        PercCmd::Census {
            graph,
            vertex,
            p,
            sampling,
        } => {
            let g = resolve_graph(graph)?;
            let (trials, seed) = required(sampling, "perc census")?;
            let r = boundary_census(&g, *p, *vertex, trials, seed)?;
            let mut rows = vec![
                json!({"edges": "infinite", "size": null, "hits": r.infinite, "frequency": r.infinite as f64 / trials as f64}),
            ];
            for (e, &h) in &r.hits {
                rows.push(json!({"edges": edges_str(e), "size": e.len(), "hits": h, "frequency": h as f64 / trials as f64}));
            }
            Ok(Output::Rows(rows))
        }
        PercCmd::Fkg { graph, p, events } => {
            let g = resolve_graph(graph)?;
            let parse_event = |s: &str| -> CliResult<Connection> {
                let (a, b) = s
                    .split_once('-')
                    .ok_or_else(|| CliError::Usage(format!("bad event {s:?}")))?;
                let a: usize = a
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad event {s:?}")))?;
                Ok(match b.trim() {
                    "h" => Connection::to_horizon(a),
                    v => Connection::pair(
                        a,
                        v.parse()
                            .map_err(|_| CliError::Usage(format!("bad event {s:?}")))?,
                    ),
                })
            };
            let mut pairs = Vec::new();
            let mut labels = Vec::new();
            if events.is_empty() {
                let interior = g.interior();
                for (i, &u) in interior.iter().enumerate() {
                    for &v in &interior[i + 1..] {
                        pairs.push((Connection::to_horizon(u), Connection::to_horizon(v)));
                        labels.push(format!("{u}-h,{v}-h"));
                    }
                }
            } else {
                for s in events {
                    let (a, b) = s
                        .split_once(',')
                        .ok_or_else(|| CliError::Usage(format!("bad event pair {s:?}")))?;
                    pairs.push((parse_event(a)?, parse_event(b)?));
                    labels.push(s.clone());
                }
            }
            let r = fkg_spot_check(&g, *p, &pairs)?;
            Ok(Output::Rows(
                labels
                    .iter()
                    .zip(&r)
                    .map(|(l, x)| json!({"events": l, "p": p, "joint": x.joint, "product": x.product, "excess": x.joint - x.product}))
                    .collect(),
            ))
        }
        PercCmd::Strong {
            graph,
            p,
            c_fit,
            max_size,
            connected_only,
        } => {
            let g = resolve_graph(graph)?;
            let allowed = VertexSet::from_iter(g.n_vertices(), g.interior());
            let sets: Vec<VertexSet> = all_connected_sets(&g, &allowed, COMPONENT_CAP)?
                .into_iter()
                .filter(|s| s.len() <= *max_size)
                .collect();
            let mode = if *connected_only {
                IsoMode::ConnectedOnly { cap: COMPONENT_CAP }
            } else {
                IsoMode::AllSubsets { cap: SUBSET_CAP }
            };
            let rows = strong_percolation_experiment(&g, *p, &sets, *c_fit, mode)?;
            Ok(Output::Rows(
                rows.iter()
                    .map(|r| {
                        json!({"set": r.set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(";"),
                               "weight": r.weight, "prob_isolated": r.prob_isolated,
                               "neg_log_prob": r.neg_log_prob, "psi": r.psi, "satisfied": r.satisfied})
                    })
                    .collect(),
            ))
        }
    }
}

fn chain(cmd: &ChainCmd) -> CliResult<Output> {
    let ChainCmd::Build {
        graph,
        set_a,
        set_b,
        origin,
        p,
        theta,
        exact: _,
        sampling,
    } = cmd;
    let g = resolve_graph(graph)?;
    let a = VertexSet::from_iter(g.n_vertices(), parse_list(set_a, "setA")?);
    let b = VertexSet::from_iter(g.n_vertices(), parse_list(set_b, "setB")?);
    if let Some(v) = a.iter().chain(b.iter()).find(|&v| v >= g.n_vertices()) {
        return usage(format!("vertex {v} out of range"));
    }
    let mode = match seeded(sampling, "chain build")? {
        None => OracleMode::Exact,
        Some((trials, seed)) => OracleMode::MonteCarlo { trials, seed },
    };
    let oracle = ConnectivityOracle::build(&g, &a, *p, mode)?;
    let th = match theta {
        Some(t) => *t,
        None => min_connection_to(&oracle, &b)?,
    };
    let c = build_chain(&oracle, &b, *origin, th)?;
    Ok(Output::Doc(json!({
        "vertices": c.vertices,
        "probs": c.probs,
        "theta": c.theta,
        "k_bound": c.k_bound,
        "c": c.c,
        "exact": oracle.is_exact(),
        "warnings": c.warnings,
    })))
}

fn cover(cmd: &CoverCmd) -> CliResult<Output> {
    let doc = |eps: f64, n: usize, sum: f64, method: &str, lo: f64, hi: f64| {
        let delta_n = if n == 1 { 0.0 } else { delta_bound(eps, n) };
        Output::Doc(
            json!({"n": n, "epsilon": eps, "delta_n": delta_n, "sum": sum, "method": method, "ci": [lo, hi]}),
        )
    };
    match cmd {
        CoverCmd::Exact { matrix } => {
            let m = load_matrix(matrix)?;
            let s = covering_sum_exact(&m)?;
            Ok(doc(min_cut(&m)?, m.n(), s, "exact", s, s))
        }
        CoverCmd::Mc { matrix, sampling } => {
            let m = load_matrix(matrix)?;
            let (trials, seed) = required(sampling, "cover mc")?;
            let r = covering_sum_mc(&m, trials, seed)?;
            let ci = r.estimate.interval();
            Ok(doc(
                min_cut(&m)?,
                m.n(),
                r.estimate.value,
                "monte_carlo",
                ci.lo,
                ci.hi,
            ))
        }
        CoverCmd::Verify { matrix, sampling } => {
            let m = load_matrix(matrix)?;
            let r = verify_cover(&m, seeded(sampling, "cover verify")?)?;
            if !r.holds {
                return Err(Error::invariant(format!(
                    "covering sum {} below δ^n = {}",
                    r.sum, r.delta_n
                ))
                .into());
            }
            Ok(Output::Doc(json!({
                "n": r.n, "epsilon": r.epsilon, "delta_n": r.delta_n, "sum": r.sum,
                "method": if r.exact { "exact" } else { "monte_carlo" },
                "ci": [r.ci_lo, r.ci_hi], "aborted": r.aborted, "holds": r.holds,
            })))
        }
    }
}

fn rw(cmd: &RwCmd) -> CliResult<Output> {
    match cmd {
        RwCmd::Escape {
            graph,
            exact: _,
            method,
            sampling,
        } => {
            let g = resolve_graph(graph)?;
            let method = match method {
                Method::Hitting => EscapeMethod::Hitting,
                Method::Green => EscapeMethod::Green,
            };
            let mc = seeded(sampling, "rw escape")?;
            let r = escape_constant(&g, method)?;
            let mut rows = Vec::new();
            for row in &r.rows {
                let mut v = json!({"vertex": row.vertex, "degree": row.degree, "no_return": row.no_return, "scaled": row.scaled,
                                   "epsilon": r.epsilon});
                if let Some((trials, seed)) = mc {
                    let est = escape_probability_mc(&g, row.vertex, trials, seed)?;
                    let ci = est.interval();
                    v["mc_no_return"] = json!(est.value);
                    v["mc_ci_lo"] = json!(ci.lo);
                    v["mc_ci_hi"] = json!(ci.hi);
                }
                rows.push(v);
            }
            Ok(Output::Rows(rows))
        }
        RwCmd::Census {
            graph,
            origin,
            sampling,
        } => {
            let g = resolve_graph(graph)?;
            let (trials, seed) = required(sampling, "rw census")?;
            let sd = SubdivisionMap::new(&g, 2)?;
            let r = qn_census_rw(&sd, *origin, trials, seed)?;
            let mut rows: Vec<_> = r
                .decoded
                .iter()
                .map(|(e, &h)| json!({"outcome": "decoded", "edges": edges_str(e), "size": e.len(), "hits": h, "frequency": h as f64 / trials as f64}))
                .collect();
            for (name, h) in [
                ("not_minimal", r.not_minimal),
                ("non_midpoint", r.non_midpoint),
                ("aborted", r.aborted),
            ] {
                rows.push(json!({"outcome": name, "edges": null, "size": null, "hits": h, "frequency": h as f64 / trials as f64}));
            }
            Ok(Output::Rows(rows))
        }
        RwCmd::Crossing {
            graph,
            cutset,
            origin,
        } => {
            let g = resolve_graph(graph)?;
            let sd = SubdivisionMap::new(&g, 2)?;
            let c = cutset_arg(&g, cutset, *origin)?;
            Ok(Output::doc(&check_crossing(&sd, &c)?))
        }
        RwCmd::Subdiv { graph } => {
            let g = resolve_graph(graph)?;
            let r = subdivision_escape_check(&SubdivisionMap::new(&g, 2)?)?;
            Ok(Output::Rows(
                r.rows
                    .iter()
                    .map(|row| {
                        json!({"vertex": row.vertex, "midpoint": row.midpoint, "scaled": row.scaled,
                               "identity_residual": row.identity_residual, "epsilon1": r.epsilon1,
                               "base_epsilon": r.base_epsilon})
                    })
                    .collect(),
            ))
        }
    }
}

fn gff_cmd(cmd: &GffCmd) -> CliResult<Output> {
    match cmd {
        GffCmd::Green { graph } => {
            let g = resolve_graph(graph)?;
            let gr = gff::green(&g)?;
            let m = gr.matrix();
            let rows: Vec<Vec<f64>> = (0..m.nrows())
                .map(|i| m.row(i).iter().copied().collect())
                .collect();
            Ok(Output::Doc(json!({
                "interior": gr.interior(),
                "matrix": rows,
                "diagonal_residual": gff::diagonal_identity_residual(&g, &gr)?,
            })))
        }
        GffCmd::Pipeline {
            graph,
            origin,
            cutset,
            sampling,
        } => {
            let g = resolve_graph(graph)?;
            let (trials, seed) = required(sampling, "gff pipeline")?;
            let c = cutset_arg(&g, cutset, *origin)?;
            let r = gff::excursion_pipeline(&g, &c, trials, seed)?;
            let mut rows = Vec::new();
            for (name, e) in [
                ("F", &r.f),
                ("E", &r.e),
                ("F_and_E", &r.fe),
                ("boundary_hit", &r.hit),
            ] {
                let ci = e.interval();
                rows.push(json!({"record": name, "vertex": null, "hits": e.hits(), "frequency": e.value, "ci_lo": ci.lo, "ci_hi": ci.hi}));
            }
            rows.push(
                json!({"record": "clamped_checks", "vertex": null, "hits": r.clamped_checks}),
            );
            for s in &r.sign_rows {
                rows.push(json!({"record": "sign", "vertex": s.vertex, "connect": s.connect, "mean_sign": s.mean_sign,
                                 "diff_mean": s.diff_mean, "diff_se": s.diff_se, "holds": s.holds}));
            }
            Ok(Output::Rows(rows))
        }
    }
}
