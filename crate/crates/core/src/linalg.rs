//! Dense linear solves with a residual check.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Relative residual above which a solution is logged as inaccurate.
pub const RESIDUAL_WARN: f64 = 1e-10;
/// Relative residual above which a solution is refused.
pub const RESIDUAL_REFUSE: f64 = 1e-6;

fn relative_residual(a: &DMatrix<f64>, x: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let r = (a * x - b).amax();
    let scale = a.amax() * x.amax() + b.amax();
    if scale == 0.0 {
        r
    } else {
        r / scale
    }
}

/// Solves `a x = b` (several right-hand sides at once) by LU with partial
/// pivoting.
pub fn solve_many(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if a.nrows() != a.ncols() || a.nrows() != b.nrows() {
        return Err(Error::Solve(format!(
            "shape mismatch: {}x{} against {} rows",
            a.nrows(),
            a.ncols(),
            b.nrows()
        )));
    }
    if a.nrows() == 0 {
        return Ok(DMatrix::zeros(0, b.ncols()));
    }
    let x = a
        .clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Solve("singular system".into()))?;
    let res = relative_residual(a, &x, b);
    if !res.is_finite() || res > RESIDUAL_REFUSE {
        return Err(Error::Solve(format!(
            "residual {res:e} exceeds {RESIDUAL_REFUSE:e}"
        )));
    }
    if res > RESIDUAL_WARN {
        log::warn!("linear solve residual {res:e}");
    }
    Ok(x)
}

pub fn solve(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let bm = DMatrix::from_column_slice(b.len(), 1, b.as_slice());
    let x = solve_many(a, &bm)?;
    Ok(DVector::from_column_slice(x.as_slice()))
}

/// `a^{-1}`.
pub fn inverse(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    solve_many(a, &DMatrix::identity(a.nrows(), a.nrows()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let x = solve(&a, &DVector::from_vec(vec![3.0, 5.0])).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
        let inv = inverse(&a).unwrap();
        assert!((&a * inv - DMatrix::identity(2, 2)).amax() < 1e-14);
    }

    #[test]
    fn refuses_singular() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(solve(&a, &DVector::from_vec(vec![1.0, 1.0])).is_err());
        assert_eq!(
            solve(&DMatrix::zeros(0, 0), &DVector::zeros(0))
                .unwrap()
                .len(),
            0
        );
    }
}
