//! Covering sums for killed symmetric Markov chains.
//!
//! States are `0..n` with `0` the start. `Γ` is the set of sequences from `0`
//! whose first return to `0` after every state has been seen is their last
//! step; returns to `0` before that are allowed. The covering sum
//! `Σ_{γ ∈ Γ} p(γ)` is the probability that the chain killed at `i` with
//! probability `1 - Σ_j p(i,j)` covers all states and then comes back to
//! `0`.

mod dp;
mod multigraph;

pub use dp::{covering_sum_bruteforce, covering_sum_exact, BRUTE_K_CAP, BRUTE_N_CAP, DP_CAP};
pub use multigraph::{is_present, sample_h_graphs, HSample};

use crate::error::{Error, Result};
use crate::percolation::EventProbability;
use crate::stats::{count_trials, TrialRng};
use rand::Rng;
use serde::Serialize;

const SYM_TOL: f64 = 1e-12;

/// Largest `n` for the exhaustive minimum cut.
pub const MIN_CUT_CAP: usize = 16;
/// Steps after which a Monte Carlo trial is abandoned.
pub const MC_STEP_CAP: u64 = 10_000_000;

/// Symmetric non-negative matrix with row sums at most one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubStochasticMatrix {
    n: usize,
    p: Vec<f64>,
}

impl SubStochasticMatrix {
    /// Row-major entries.
    pub fn new(n: usize, p: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::precondition("matrix needs at least one state"));
        }
        if p.len() != n * n {
            return Err(Error::precondition(format!(
                "expected {} entries, got {}",
                n * n,
                p.len()
            )));
        }
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                let x = p[i * n + j];
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::precondition(format!(
                        "entry ({i},{j}) = {x} is negative"
                    )));
                }
                if (x - p[j * n + i]).abs() > SYM_TOL {
                    return Err(Error::precondition(format!(
                        "entry ({i},{j}) breaks symmetry"
                    )));
                }
                row += x;
            }
            if row > 1.0 + SYM_TOL {
                return Err(Error::precondition(format!("row {i} sums to {row} > 1")));
            }
        }
        Ok(SubStochasticMatrix { n, p })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        Self::new(n, (0..n * n).map(|k| f(k / n, k % n)).collect())
    }

    /// Matrix file: first non-comment line `n`, then `n` rows of `n` reals.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, first) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty matrix document".into(),
        })?;
        let n: usize = first.parse().map_err(|_| Error::Parse {
            line: ln,
            message: format!("expected state count, found {first:?}"),
        })?;
        let mut p = Vec::with_capacity(n * n);
        let mut rows = 0;
        for (ln, l) in lines {
            let row: Vec<f64> = l
                .split_whitespace()
                .map(|t| t.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse {
                    line: ln,
                    message: e.to_string(),
                })?;
            if row.len() != n {
                return Err(Error::Parse {
                    line: ln,
                    message: format!("expected {n} entries, found {}", row.len()),
                });
            }
            p.extend(row);
            rows += 1;
        }
        if rows != n {
            return Err(Error::Parse {
                line: ln,
                message: format!("expected {n} rows, found {rows}"),
            });
        }
        Self::new(n, p)
    }

    /// Random symmetric matrix with entries zeroed with probability
    /// `1 - density`, rescaled so the largest row sum is `max_row`.
    pub fn random(n: usize, density: f64, max_row: f64, rng: &mut impl Rng) -> Result<Self> {
        let mut p = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                if rng.random::<f64>() < density {
                    let x = rng.random::<f64>();
                    p[i * n + j] = x;
                    p[j * n + i] = x;
                }
            }
        }
        let top = (0..n)
            .map(|i| p[i * n..(i + 1) * n].iter().sum::<f64>())
            .fold(0.0, f64::max);
        if top > 0.0 {
            let s = max_row.clamp(0.0, 1.0) / top;
            p.iter_mut().for_each(|x| *x *= s);
        }
        Self::new(n, p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.n + j]
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.p[i * self.n..(i + 1) * self.n].iter().sum()
    }

    /// `min_i (1 - Σ_j p(i,j))`.
    pub fn killing_floor(&self) -> f64 {
        (0..self.n)
            .map(|i| 1.0 - self.row_sum(i))
            .fold(1.0, f64::min)
            .max(0.0)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format!("{}", self.get(i, j))).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

/// A sequence of states with its weight `Π p(γ_{i-1}, γ_i)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GammaPath {
    pub vertices: Vec<usize>,
    pub weight: f64,
}

pub fn gamma_weight(m: &SubStochasticMatrix, seq: &[usize]) -> f64 {
    seq.windows(2).map(|w| m.get(w[0], w[1])).product()
}

/// Whether `seq` belongs to `Γ` for `n` states.
pub fn in_gamma(n: usize, seq: &[usize]) -> bool {
    if seq.len() < 2 || seq[0] != 0 || seq.iter().any(|&s| s >= n) {
        return false;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut count = 1;
    for (i, &s) in seq.iter().enumerate().skip(1) {
        if !seen[s] {
            seen[s] = true;
            count += 1;
        }
        if count == n && s == 0 {
            return i == seq.len() - 1;
        }
    }
    false
}

/// `min_{∅ ≠ I ⊊ [n]} Σ_{i ∈ I, j ∉ I} p(i,j)`; infinite when `n = 1`.
pub fn min_cut(m: &SubStochasticMatrix) -> Result<f64> {
    let n = m.n;
    if n > MIN_CUT_CAP {
        return Err(Error::CapExceeded {
            what: "exhaustive minimum cut (states)",
            cap: MIN_CUT_CAP,
            actual: n,
        });
    }
    // cut(I) = cut(complement) by symmetry, so fixing 0 ∈ I suffices
    let full = (1u32 << n) - 1;
    let mut best = f64::INFINITY;
    for mask in (1..full).filter(|s| s & 1 == 1) {
        let mut c = 0.0;
        for i in (0..n).filter(|&i| mask >> i & 1 == 1) {
            for j in (0..n).filter(|&j| mask >> j & 1 == 0) {
                c += m.get(i, j);
            }
        }
        best = best.min(c);
    }
    Ok(best)
}

/// `δ^n` with `δ = ε²/(16e²)`.
pub fn delta_bound(epsilon: f64, n: usize) -> f64 {
    let e = std::f64::consts::E;
    (epsilon * epsilon / (16.0 * e * e)).powi(n as i32)
}

/// Runs the killed chain from `0` until it dies or completes a `Γ` path.
/// `None` marks a trial stopped by the step cap.
pub fn simulate_cover(
    m: &SubStochasticMatrix,
    cum: &[Vec<f64>],
    rng: &mut TrialRng,
) -> Option<bool> {
    let n = m.n;
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut count = 1;
    let mut cur = 0;
    for _ in 0..MC_STEP_CAP {
        let r = rng.random::<f64>();
        let row = &cum[cur];
        let Some(next) = row.iter().position(|&c| r < c) else {
            return Some(false);
        };
        cur = next;
        if !seen[cur] {
            seen[cur] = true;
            count += 1;
        }
        if count == n && cur == 0 {
            return Some(true);
        }
    }
    None
}

fn cumulative_rows(m: &SubStochasticMatrix) -> Vec<Vec<f64>> {
    (0..m.n)
        .map(|i| {
            let mut acc = 0.0;
            (0..m.n)
                .map(|j| {
                    acc += m.get(i, j);
                    acc
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverEstimate {
    pub estimate: EventProbability,
    /// Trials stopped by the step cap; counted as misses.
    pub aborted: u64,
}

pub fn covering_sum_mc(m: &SubStochasticMatrix, trials: u64, seed: u64) -> Result<CoverEstimate> {
    if trials == 0 {
        return Err(Error::precondition("at least one trial is required"));
    }
    let cum = cumulative_rows(m);
    let aborted = std::sync::atomic::AtomicU64::new(0);
    let hits = count_trials(trials, seed, |_, rng| match simulate_cover(m, &cum, rng) {
        Some(hit) => hit,
        None => {
            aborted.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            false
        }
    });
    let aborted = aborted.into_inner();
    if aborted > 0 {
        log::warn!("{aborted} covering trials hit the step cap");
    }
    Ok(CoverEstimate {
        estimate: EventProbability::from_counts(hits, trials),
        aborted,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverReport {
    pub n: usize,
    pub epsilon: f64,
    pub delta_n: f64,
    pub sum: f64,
    pub exact: bool,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub aborted: u64,
    /// `sum ≥ delta_n`, or for Monte Carlo the upper CI end `≥ delta_n`.
    pub holds: bool,
}

/// Minimum cut, `δ^n`, and the covering sum (exact when `n ≤ DP_CAP`,
/// otherwise Monte Carlo) compared against it. The comparison is only
/// meaningful for `n ≥ 2`; with one state `ε` is infinite and `holds`
/// simply reports `sum > 0`.
pub fn verify_cover(m: &SubStochasticMatrix, mc: Option<(u64, u64)>) -> Result<CoverReport> {
    let epsilon = min_cut(m)?;
    let delta_n = if m.n == 1 {
        0.0
    } else {
        delta_bound(epsilon, m.n)
    };
    let (sum, exact, lo, hi, aborted) = match mc {
        None if m.n <= DP_CAP => {
            let s = covering_sum_exact(m)?;
            (s, true, s, s, 0)
        }
        None => {
            return Err(Error::CapExceeded {
                what: "exact covering sum (states)",
                cap: DP_CAP,
                actual: m.n,
            });
        }
        Some((trials, seed)) => {
            let r = covering_sum_mc(m, trials, seed)?;
            let ci = r.estimate.interval();
            (r.estimate.value, false, ci.lo, ci.hi, r.aborted)
        }
    };
    let holds = if m.n == 1 { sum > 0.0 } else { hi >= delta_n };
    Ok(CoverReport {
        n: m.n,
        epsilon,
        delta_n,
        sum,
        exact,
        ci_lo: lo,
        ci_hi: hi,
        aborted,
        holds,
    })
}
