//! One test per acceptance criterion. Each prints a single
//! `criterion NN: PASS|FAIL ...` line and fails on FAIL.

use kappa_core::corpus::{
    self, random_connected_set, random_cover_matrix, random_two_trees, CorpusGraph,
};
use kappa_core::cover_lemma::{
    covering_sum_bruteforce, covering_sum_exact, covering_sum_mc, delta_bound, min_cut,
};
use kappa_core::cutsets::{
    decompose, enumerate_minimal_cutsets_bruteforce, enumerate_minimal_cutsets_by_components,
    exposed_boundary, is_minimal_cutset, karger_count_min_cuts, Cutset, QnTable, COMPONENT_CAP,
    EDGE_CAP,
};
use kappa_core::fkg_chain::{
    connectivity_lower_bound_check, fkg_lower_bound, verify_chain, verify_full_connectivity,
    ConnectivityOracle,
};
use kappa_core::gff::{
    covariance_zscore, diagonal_identity_residual, excursion_pipeline, green, markov_check,
    sample_fields,
};
use kappa_core::graph_core::{Family, Graph, HorizonSpec, SubdivisionMap, VertexSet};
use kappa_core::percolation::{boundary_distribution_exact, peierls_bound, theta, Estimator};
use kappa_core::rw_cutsets::{check_crossing, epsilon1, qn_census_rw, subdivision_escape_check};
use kappa_core::stats::trial_rng;
use rand::Rng;
use std::time::{Duration, Instant};

const TOL: f64 = 1e-12;

fn report(id: u32, pass: bool, detail: impl std::fmt::Display) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id:02}: {verdict} {detail}");
    assert!(pass, "criterion {id:02} failed: {detail}");
}

fn full_table(g: &Graph, v: usize) -> QnTable {
    enumerate_minimal_cutsets_by_components(g, v, g.n_edges(), COMPONENT_CAP).unwrap()
}

fn corpus_cutsets() -> Vec<(CorpusGraph, Vec<Cutset>)> {
    corpus::graphs()
        .into_iter()
        .map(|c| {
            let cs = full_table(&c.graph, c.origin).all_cutsets();
            (c, cs)
        })
        .collect()
}

fn grid(w: usize, h: usize) -> Graph {
    Family::Grid {
        width: w,
        height: h,
        torus: false,
    }
    .build(&HorizonSpec::Boundary)
    .unwrap()
}

#[test]
fn criterion_01_exposed_boundary_is_minimal() {
    let start = Instant::now();
    let gs = corpus::graphs();
    let mut rng = trial_rng(101, 0);
    let (mut ok, mut total) = (0, 0);
    for i in 0..1000 {
        let g = &gs[i % gs.len()].graph;
        let s = random_connected_set(g, g.interior().len(), &mut rng);
        let pi = exposed_boundary(g, &s).unwrap();
        total += 1;
        if s.iter().all(|u| is_minimal_cutset(g, &pi, u)) {
            ok += 1;
        }
    }
    let t = start.elapsed();
    report(
        1,
        ok == total && gs.len() >= 20 && t < Duration::from_secs(10),
        format!(
            "{ok}/{total} sets over {} graphs in {:.2}s",
            gs.len(),
            t.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_02_sandwiched_sets_recover_cutset() {
    let mut rng = trial_rng(102, 0);
    let (mut ok, mut total) = (0, 0);
    for (c, cutsets) in corpus_cutsets() {
        let g = &c.graph;
        for pi in &cutsets {
            let d = decompose(g, pi).unwrap();
            let extra: Vec<usize> = d
                .component
                .iter()
                .filter(|&v| !d.inner.contains(v))
                .collect();
            for _ in 0..20 {
                let mut s = d.inner.clone();
                for &v in &extra {
                    if rng.random_bool(0.5) {
                        s.insert(v);
                    }
                }
                total += 1;
                if &exposed_boundary(g, &s).unwrap() == pi.edges() {
                    ok += 1;
                }
            }
        }
    }
    report(2, ok == total, format!("{ok}/{total} sandwiched sets"));
}

#[test]
fn criterion_03_enumeration_oracles_agree() {
    let (mut ok, mut total) = (0, 0);
    for c in corpus::graphs() {
        let g = &c.graph;
        for v in g.interior() {
            let a = enumerate_minimal_cutsets_bruteforce(g, v, g.n_edges(), EDGE_CAP).unwrap();
            let b =
                enumerate_minimal_cutsets_by_components(g, v, g.n_edges(), COMPONENT_CAP).unwrap();
            total += 1;
            if a == b {
                ok += 1;
            }
        }
    }
    report(
        3,
        ok == total,
        format!("{ok}/{total} (graph, vertex) tables identical"),
    );
}

#[test]
fn criterion_04_peierls_bound() {
    let (mut ok, mut total) = (0, 0);
    let mut worst = f64::NEG_INFINITY;
    for c in corpus::graphs() {
        let table = full_table(&c.graph, c.origin);
        for k in 1..=9 {
            let p = k as f64 / 10.0;
            let finite = 1.0
                - theta(&c.graph, p, c.origin, Estimator::Exact)
                    .unwrap()
                    .value;
            let bound = peierls_bound(&table, p);
            worst = worst.max(finite - bound);
            total += 1;
            if finite <= bound + TOL {
                ok += 1;
            }
        }
    }
    let star = corpus::by_name("star3").unwrap();
    let finite = 1.0 - theta(&star.graph, 0.5, 0, Estimator::Exact).unwrap().value;
    let bound = peierls_bound(&full_table(&star.graph, 0), 0.5);
    let star_ok = (finite - 0.125).abs() <= TOL && (bound - 0.125).abs() <= TOL;
    report(
        4,
        ok == total && star_ok,
        format!("{ok}/{total} (graph, p) pairs, max excess {worst:.3e}; star3 p=1/2: {finite} vs {bound}"),
    );
}

#[test]
fn criterion_05_chained_connectivity_bound() {
    let (mut ok, mut total) = (0, 0);
    let mut failures = Vec::new();
    for (c, cutsets) in corpus_cutsets() {
        for pi in &cutsets {
            let d = decompose(&c.graph, pi).unwrap();
            for p in [0.3, 0.6, 0.9] {
                total += 1;
                let res = verify_full_connectivity(&c.graph, &d.component, &d.inner, c.origin, p)
                    .and_then(|r| {
                        let oracle = ConnectivityOracle::exact(&c.graph, &d.component, p)?;
                        verify_chain(&oracle, &r.chain, &d.inner)?;
                        Ok(r)
                    });
                match res {
                    Ok(r) if r.exact >= fkg_lower_bound(r.theta, p, d.inner.len()) - TOL => ok += 1,
                    Ok(r) => failures.push(format!(
                        "{} {:?} p={p}: {} < {}",
                        c.name,
                        pi.edge_ids(),
                        r.exact,
                        r.bound
                    )),
                    Err(e) => failures.push(format!("{} {:?} p={p}: {e}", c.name, pi.edge_ids())),
                }
            }
        }
    }
    report(
        5,
        ok == total,
        format!("{ok}/{total} (A, B, o, p) instances {:?}", failures.first()),
    );
}

#[test]
fn criterion_06_boundary_lower_bound_and_disjointness() {
    let (mut ok, mut total) = (0, 0);
    let mut failures = Vec::new();
    for (c, cutsets) in corpus_cutsets() {
        for p in [0.3, 0.7] {
            for pi in &cutsets {
                total += 1;
                match connectivity_lower_bound_check(&c.graph, p, None, pi) {
                    Ok(r) if r.exact >= r.bound - TOL => ok += 1,
                    Ok(r) => failures.push(format!("{} p={p}: {} < {}", c.name, r.exact, r.bound)),
                    Err(e) => failures.push(format!("{} p={p}: {e}", c.name)),
                }
            }
        }
    }
    let (mut dok, mut dtotal) = (0, 0);
    let mut worst = 0.0f64;
    for c in corpus::graphs() {
        for k in 1..=9 {
            let p = k as f64 / 10.0;
            let (law, _) = boundary_distribution_exact(&c.graph, p, c.origin).unwrap();
            let mut by_size = std::collections::BTreeMap::<usize, f64>::new();
            for (pi, q) in &law {
                *by_size.entry(pi.len()).or_default() += q;
            }
            for s in by_size.values() {
                dtotal += 1;
                worst = worst.max(*s);
                if *s <= 1.0 + TOL {
                    dok += 1;
                }
            }
        }
    }
    report(
        6,
        ok == total && dok == dtotal,
        format!(
            "lower bound {ok}/{total} cutset instances {:?}; disjoint sums {dok}/{dtotal}, max {worst:.6}",
            failures.first()
        ),
    );
}

#[test]
fn criterion_07_covering_sum_bound() {
    let mut rng = trial_rng(107, 0);
    let mats: Vec<_> = (0..200)
        .map(|_| random_cover_matrix(8, &mut rng).unwrap())
        .collect();
    let mut bound_ok = 0;
    let (mut brute_ok, mut brute_total) = (0, 0);
    for m in &mats {
        let eps = min_cut(m).unwrap();
        let exact = covering_sum_exact(m).unwrap();
        if exact >= delta_bound(eps, m.n()) {
            bound_ok += 1;
        }
        if m.n() <= 4 {
            let k = if m.n() == 4 { 10 } else { 12 };
            let partial = covering_sum_bruteforce(m, k).unwrap();
            let tail = (1.0 - m.killing_floor()).powi(k as i32);
            brute_total += 1;
            if partial <= exact + TOL && exact - partial <= tail + TOL {
                brute_ok += 1;
            }
        }
    }
    let mut inside = 0;
    for (i, m) in mats.iter().take(100).enumerate() {
        let exact = covering_sum_exact(m).unwrap();
        let est = covering_sum_mc(m, 100_000, 7_000 + i as u64).unwrap();
        if est.estimate.interval().contains(exact) {
            inside += 1;
        }
    }
    report(
        7,
        bound_ok == mats.len() && brute_ok == brute_total && inside >= 99,
        format!(
            "bound {bound_ok}/{}; brute force {brute_ok}/{brute_total}; MC inside 99% CI {inside}/100",
            mats.len()
        ),
    );
}

#[test]
fn criterion_08_two_trees_give_eulerian_subgraph() {
    let mut rng = trial_rng(108, 0);
    let mut ok = 0;
    for _ in 0..1000 {
        let (mg, t1, t2) = random_two_trees(10, &mut rng).unwrap();
        let ids = kappa_core::graph_core::eulerian_from_two_trees(&mg, &t1, &t2).unwrap();
        let even = mg.degrees(&ids).iter().all(|d| d % 2 == 0);
        let touches_all = mg.degrees(&ids).iter().all(|&d| d > 0) || mg.n_vertices() == 1;
        if even && touches_all && mg.spans_connected(&ids) {
            ok += 1;
        }
    }
    report(
        8,
        ok == 1000,
        format!("{ok}/1000 instances spanning, connected and even"),
    );
}

#[test]
fn criterion_09_subdivision_identities() {
    let (mut sub_ok, mut sub_total) = (0, 0);
    let mut worst_identity = 0.0f64;
    let (mut cross_ok, mut cross_total) = (0, 0);
    let mut failures = Vec::new();
    for (c, cutsets) in corpus_cutsets() {
        let sd = SubdivisionMap::new(&c.graph, 2).unwrap();
        sub_total += 1;
        match subdivision_escape_check(&sd) {
            Ok(r) => {
                worst_identity = worst_identity.max(r.max_identity_residual);
                let floor = epsilon1(r.base_epsilon);
                if r.rows.iter().all(|row| row.scaled >= floor - TOL)
                    && r.max_identity_residual <= 1e-9
                {
                    sub_ok += 1;
                }
            }
            Err(e) => failures.push(format!("{}: {e}", c.name)),
        }
        for pi in &cutsets {
            cross_total += 1;
            match check_crossing(&sd, pi) {
                Ok(r) if r.matrix.symmetry_residual <= 1e-9 && r.min_cut >= r.epsilon2 - TOL => {
                    cross_ok += 1
                }
                Ok(r) => failures.push(format!(
                    "{} {:?}: cut {} vs {}",
                    c.name,
                    pi.edge_ids(),
                    r.min_cut,
                    r.epsilon2
                )),
                Err(e) => failures.push(format!("{} {:?}: {e}", c.name, pi.edge_ids())),
            }
        }
    }
    report(
        9,
        sub_ok == sub_total && cross_ok == cross_total,
        format!(
            "escape/identity {sub_ok}/{sub_total} (max residual {worst_identity:.2e}); crossing {cross_ok}/{cross_total} {:?}",
            failures.first()
        ),
    );
}

#[test]
fn criterion_10_walk_census_recovers_cutsets() {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, expect_n, expect_count) in [("path5", 2, 4), ("star3", 3, 1), ("grid3x3", 4, 1)] {
        let c = corpus::by_name(name).unwrap();
        let exact = full_table(&c.graph, c.origin);
        let sd = SubdivisionMap::new(&c.graph, 2).unwrap();
        let census = qn_census_rw(&sd, c.origin, 100_000, 110).unwrap();
        let found: std::collections::BTreeSet<_> = census.decoded.keys().cloned().collect();
        let all_minimal = found
            .iter()
            .all(|pi| is_minimal_cutset(&c.graph, pi, c.origin));
        let ok = found == exact.cutsets && exact.count(expect_n) == expect_count && all_minimal;
        pass &= ok;
        lines.push(format!("{name} {}/{}", found.len(), exact.cutsets.len()));
    }
    let t = start.elapsed();
    report(
        10,
        pass && t < Duration::from_secs(60),
        format!("{} in {:.2}s", lines.join(", "), t.as_secs_f64()),
    );
}

#[test]
fn criterion_11_free_field() {
    let mut worst_diag = 0.0f64;
    let mut worst_markov = 0.0f64;
    let mut rng = trial_rng(111, 0);
    for c in corpus::graphs() {
        let g = &c.graph;
        let gr = green(g).unwrap();
        worst_diag = worst_diag.max(diagonal_identity_residual(g, &gr).unwrap());
        let interior = g.interior();
        for _ in 0..5 {
            let k = VertexSet::from_iter(
                g.n_vertices(),
                interior.iter().copied().filter(|_| rng.random_bool(0.4)),
            );
            worst_markov = worst_markov.max(markov_check(g, &gr, &k).unwrap_or(f64::INFINITY));
        }
    }
    let mut worst_z = 0.0f64;
    for g in [corpus::by_name("path5").unwrap().graph, grid(4, 4)] {
        let gr = green(&g).unwrap();
        worst_z = worst_z.max(covariance_zscore(&gr, &sample_fields(&gr, 100_000, 211)));
    }
    let (mut qualifying, mut clamped, mut pipelines, mut positive, mut pipeline_errors) =
        (0u64, 0u64, 0, 0, 0);
    for name in ["path5", "star3", "grid3x3", "cycle4", "k4"] {
        let c = corpus::by_name(name).unwrap();
        for pi in full_table(&c.graph, c.origin)
            .all_cutsets()
            .into_iter()
            .filter(|pi| pi.size() <= 3)
        {
            pipelines += 1;
            match excursion_pipeline(&c.graph, &pi, 100_000, 311) {
                Ok(r) => {
                    qualifying += r.fe.hits().unwrap_or(0);
                    clamped += r.clamped_checks;
                    if r.hit.value > 0.0 {
                        positive += 1;
                    }
                }
                Err(_) => pipeline_errors += 1,
            }
        }
    }
    report(
        11,
        worst_diag <= 1e-9 && worst_markov <= 1e-9 && worst_z <= 5.0 && pipeline_errors == 0 && clamped > 0 && positive == pipelines,
        format!(
            "diagonal {worst_diag:.2e}, Markov {worst_markov:.2e}, covariance z {worst_z:.2}, \
             implication held on {qualifying} sampled and {clamped} clamped fields over {pipelines} cutsets ({positive} with positive frequency)"
        ),
    );
}

#[test]
fn criterion_12_karger_counts() {
    let c4 = corpus::by_name("cycle4").unwrap().graph;
    let r = karger_count_min_cuts(&c4, None, 112).unwrap();
    let mut within = 0;
    let gs = corpus::graphs();
    for c in &gs {
        let n = c.graph.n_vertices();
        let k = karger_count_min_cuts(&c.graph, None, 212).unwrap();
        if k.distinct() <= n * (n - 1) / 2 {
            within += 1;
        }
    }
    report(
        12,
        r.distinct() == 6 && r.min_cut_size == 2 && within == gs.len(),
        format!(
            "C4 has {} minimum cuts of size {}; {within}/{} graphs within C(n,2)",
            r.distinct(),
            r.min_cut_size,
            gs.len()
        ),
    );
}
