use super::{in_gamma, SubStochasticMatrix};
use crate::error::{Error, Result};
use crate::linalg::solve;
use nalgebra::{DMatrix, DVector};

/// Largest `n` for the exact covering-sum recursion.
pub const DP_CAP: usize = 12;
pub const BRUTE_N_CAP: usize = 4;
pub const BRUTE_K_CAP: usize = 12;

const LEAK_TOL: f64 = 1e-12;

/// Solves `x(u) = Σ_{v ∈ T} p(u,v) x(v) + b(u)` over the states `t`.
///
/// States that cannot reach a leak (mass leaving `T`, or killing) form
/// closed stochastic classes; they never leave `T`, so `x = 0` there and the
/// remaining system is non-singular.
fn solve_restricted(m: &SubStochasticMatrix, t: &[usize], b: &[f64]) -> Result<Vec<f64>> {
    let k = t.len();
    let leaky: Vec<bool> = t
        .iter()
        .map(|&u| 1.0 - t.iter().map(|&v| m.get(u, v)).sum::<f64>() > LEAK_TOL)
        .collect();
    let mut reach = leaky.clone();
    loop {
        let mut changed = false;
        for i in 0..k {
            if !reach[i] && (0..k).any(|j| reach[j] && m.get(t[i], t[j]) > 0.0) {
                reach[i] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let live: Vec<usize> = (0..k).filter(|&i| reach[i]).collect();
    let r = live.len();
    let mut a = DMatrix::<f64>::identity(r, r);
    let mut rhs = DVector::<f64>::zeros(r);
    for (a_i, &i) in live.iter().enumerate() {
        rhs[a_i] = b[i];
        for (a_j, &j) in live.iter().enumerate() {
            a[(a_i, a_j)] -= m.get(t[i], t[j]);
        }
    }
    let sol = solve(&a, &rhs)?;
    let mut x = vec![0.0; k];
    for (a_i, &i) in live.iter().enumerate() {
        x[i] = sol[a_i];
    }
    Ok(x)
}

/// `Σ_{γ ∈ Γ} p(γ)` by recursion over (current state, visited set).
///
/// With everything visited, `y(u) = p(u,0) + Σ_{v ≠ 0} p(u,v) y(v)`. For a
/// visited set `S ∋ 0` short of everything,
/// `x(u,S) = Σ_{v ∈ S} p(u,v) x(v,S) + Σ_{v ∉ S} p(u,v) x(v,S ∪ {v})`, with
/// `y` standing in when `S ∪ {v}` is everything. Sets are processed from
/// largest to smallest; the answer is `x(0,{0})`, or `p(0,0)` when `n = 1`.
pub fn covering_sum_exact(m: &SubStochasticMatrix) -> Result<f64> {
    let n = m.n();
    if n > DP_CAP {
        return Err(Error::CapExceeded {
            what: "exact covering sum (states)",
            cap: DP_CAP,
            actual: n,
        });
    }
    if n == 1 {
        return Ok(m.get(0, 0));
    }
    let full = (1usize << n) - 1;
    let rest: Vec<usize> = (1..n).collect();
    let b: Vec<f64> = rest.iter().map(|&u| m.get(u, 0)).collect();
    let y_rest = solve_restricted(m, &rest, &b)?;
    let mut y = vec![0.0; n];
    for (i, &u) in rest.iter().enumerate() {
        y[u] = y_rest[i];
    }

    let mut x: Vec<Vec<f64>> = vec![Vec::new(); full + 1];
    let mut masks: Vec<usize> = (1..full).filter(|s| s & 1 == 1).collect();
    masks.sort_by_key(|s| std::cmp::Reverse(s.count_ones()));
    for s in masks {
        let t: Vec<usize> = (0..n).filter(|&u| s >> u & 1 == 1).collect();
        let b: Vec<f64> = t
            .iter()
            .map(|&u| {
                (0..n)
                    .filter(|&v| s >> v & 1 == 0)
                    .map(|v| {
                        let next = s | 1 << v;
                        let val = if next == full { y[v] } else { x[next][v] };
                        m.get(u, v) * val
                    })
                    .sum()
            })
            .collect();
        let sol = solve_restricted(m, &t, &b)?;
        let mut row = vec![0.0; n];
        for (i, &u) in t.iter().enumerate() {
            row[u] = sol[i];
        }
        x[s] = row;
    }
    Ok(x[1][0].clamp(0.0, 1.0))
}

/// Sum of `p(γ)` over `γ ∈ Γ` with at most `k_max` steps, by explicit
/// enumeration of sequences and the membership test.
pub fn covering_sum_bruteforce(m: &SubStochasticMatrix, k_max: usize) -> Result<f64> {
    let n = m.n();
    if n > BRUTE_N_CAP {
        return Err(Error::CapExceeded {
            what: "brute-force covering sum (states)",
            cap: BRUTE_N_CAP,
            actual: n,
        });
    }
    if k_max > BRUTE_K_CAP {
        return Err(Error::CapExceeded {
            what: "brute-force covering sum (length)",
            cap: BRUTE_K_CAP,
            actual: k_max,
        });
    }
    let mut total = 0.0;
    let mut seq = vec![0usize];
    fn rec(m: &SubStochasticMatrix, seq: &mut Vec<usize>, w: f64, k_max: usize, total: &mut f64) {
        let n = m.n();
        let cur = *seq.last().unwrap();
        for v in 0..n {
            let pw = m.get(cur, v);
            if pw == 0.0 {
                continue;
            }
            seq.push(v);
            // members of Γ are never extended, so no prefix is ever in Γ
            if in_gamma(n, seq) {
                *total += w * pw;
            } else if seq.len() <= k_max {
                rec(m, seq, w * pw, k_max, total);
            }
            seq.pop();
        }
    }
    rec(m, &mut seq, 1.0, k_max, &mut total);
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::super::tests::uniform;
    use super::super::{delta_bound, min_cut};
    use super::*;
    use crate::stats::trial_rng;

    #[test]
    fn closed_forms() {
        assert!((covering_sum_exact(&uniform(1, 0.3)).unwrap() - 0.3).abs() < 1e-15);
        assert!((covering_sum_exact(&uniform(2, 0.25)).unwrap() - 1.0 / 9.0).abs() < 1e-14);
        assert!((covering_sum_exact(&uniform(2, 0.5)).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(covering_sum_exact(&uniform(3, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn closed_class_without_leak() {
        // state 2 is isolated and never killed; it cannot be covered
        let m =
            SubStochasticMatrix::new(3, vec![0.2, 0.3, 0.0, 0.3, 0.2, 0.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(covering_sum_exact(&m).unwrap(), 0.0);
    }

    #[test]
    fn brute_force_examples() {
        assert!((covering_sum_bruteforce(&uniform(1, 0.3), 3).unwrap() - 0.3).abs() < 1e-15);
        let b = covering_sum_bruteforce(&uniform(2, 0.25), 12).unwrap();
        assert!((0.999 / 9.0..=1.0 / 9.0 + 1e-15).contains(&b));
        assert!(covering_sum_bruteforce(&uniform(5, 0.1), 3).is_err());
    }

    #[test]
    fn dp_matches_brute_force_within_tail() {
        let mut rng = trial_rng(11, 0);
        for n in 2..=4 {
            for _ in 0..10 {
                let m = SubStochasticMatrix::random(n, 0.8, 0.7, &mut rng).unwrap();
                let exact = covering_sum_exact(&m).unwrap();
                let mut last = 0.0;
                for k in [4, 8, 12] {
                    let b = covering_sum_bruteforce(&m, k).unwrap();
                    assert!(b >= last - 1e-15 && b <= exact + 1e-12);
                    last = b;
                }
                let tail = (1.0 - m.killing_floor()).powi(12);
                assert!(exact - last <= tail + 1e-12);
            }
        }
    }

    #[test]
    fn lemma_bound_on_random_matrices() {
        let mut rng = trial_rng(12, 0);
        for n in 2..=8 {
            for _ in 0..5 {
                let m = SubStochasticMatrix::random(n, 0.9, 1.0, &mut rng).unwrap();
                let eps = min_cut(&m).unwrap();
                if eps > 0.0 {
                    assert!(covering_sum_exact(&m).unwrap() >= delta_bound(eps, n));
                }
            }
        }
    }
}
