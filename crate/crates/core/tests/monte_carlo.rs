//! Monte Carlo estimates against exact values with fixed seeds.

use kappa_core::corpus;
use kappa_core::cutsets::{enumerate_minimal_cutsets_by_components, COMPONENT_CAP};
use kappa_core::gff::{green, sample_fields, threshold_covariance};
use kappa_core::percolation::{boundary_hit_probability, theta, Estimator};

#[test]
fn theta_estimates_cover_exact_values() {
    let (mut inside, mut total) = (0, 0);
    for (i, c) in corpus::graphs().iter().enumerate() {
        for p in [0.2, 0.5, 0.8] {
            let exact = theta(&c.graph, p, c.origin, Estimator::Exact)
                .unwrap()
                .value;
            let est = theta(
                &c.graph,
                p,
                c.origin,
                Estimator::MonteCarlo {
                    trials: 20_000,
                    seed: 40 + i as u64,
                },
            )
            .unwrap();
            total += 1;
            if est.interval().contains(exact) {
                inside += 1;
            }
        }
    }
    // 99% intervals; allow a few misses among 72 comparisons
    assert!(inside as f64 >= 0.95 * total as f64, "{inside}/{total}");
}

#[test]
fn boundary_hits_cover_exact_values() {
    let (mut inside, mut total) = (0, 0);
    for name in ["path5", "star3", "grid3x3-corner", "theta", "k23"] {
        let c = corpus::by_name(name).unwrap();
        let q =
            enumerate_minimal_cutsets_by_components(&c.graph, c.origin, 4, COMPONENT_CAP).unwrap();
        for (j, pi) in q.all_cutsets().iter().enumerate() {
            let exact = boundary_hit_probability(&c.graph, 0.4, pi, Estimator::Exact)
                .unwrap()
                .value;
            let est = boundary_hit_probability(
                &c.graph,
                0.4,
                pi,
                Estimator::MonteCarlo {
                    trials: 20_000,
                    seed: j as u64,
                },
            )
            .unwrap();
            total += 1;
            if est.interval().contains(exact) {
                inside += 1;
            }
        }
    }
    assert!(inside as f64 >= 0.95 * total as f64, "{inside}/{total}");
}

#[test]
fn free_field_is_positively_associated() {
    let c = corpus::by_name("grid3x3-corner").unwrap();
    let gr = green(&c.graph).unwrap();
    let fs = sample_fields(&gr, 50_000, 9);
    let interior = c.graph.interior();
    for &a in &interior {
        for &b in &interior {
            if gr.get(a, b) < 0.0 {
                continue;
            }
            for (s, t) in [(0.0, 0.0), (0.5, -0.5)] {
                let (cov, se) = threshold_covariance(&fs, a, s, b, t);
                assert!(cov >= -3.0 * se, "{a} {b}: {cov} {se}");
            }
        }
    }
}
