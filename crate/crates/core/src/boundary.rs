//! Radial boundary functions and Poisson convergence diagnostics.
//!
//! The boundary value `b h(z) = lim_(r -> 1) h(rz)` is recovered at each node by
//! Richardson extrapolation of `h(r_k z)` in the variable `t = 1 - r_k = 2^-k`.
//! Each column is extrapolated separately, so the canonical basis plays the part
//! of the dense set of vectors on which the limit is taken.

use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::function::{sample_values, CircleFunction, DiskFunction};
use crate::grid::{CircleGrid, RadiusLadder};
use crate::matrix::MatrixValue;
use crate::norms::{lp_sot_norm_weighted, op_norm, Exponent, WeightedValues};
use crate::transforms::radial_sections;

/// Rungs at the top of the ladder used for the `liminf N(h_r)` proxy.
pub const U_PROXY_RUNGS: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryResult {
    /// Sampled on the extraction grid.
    pub boundary: CircleFunction,
    /// Size of the last Richardson increment at each node (operator norm).
    pub per_node_residual: Vec<f64>,
    pub ladder_used: RadiusLadder,
    /// Number of basis vectors the limit was taken on.
    pub basis_dimension: usize,
    pub tol: f64,
    /// Heuristic stand-in for `liminf_(r -> 1) N(h_r)(z)`: the largest
    /// `||h(r_k z)||` over the top [`U_PROXY_RUNGS`] rungs.
    pub u_proxy: Vec<f64>,
}

impl BoundaryResult {
    pub fn max_residual(&self) -> f64 {
        self.per_node_residual.iter().copied().fold(0.0, f64::max)
    }

    pub fn failed_nodes(&self) -> Vec<usize> {
        self.per_node_residual
            .iter()
            .enumerate()
            .filter(|(_, r)| !(**r <= self.tol))
            .map(|(j, _)| j)
            .collect()
    }

    pub fn converged(&self) -> bool {
        self.failed_nodes().is_empty()
    }

    pub fn boundary_values(&self) -> &[MatrixValue] {
        match &self.boundary {
            CircleFunction::Sampled { values, .. } => values,
            _ => unreachable!("boundary is always sampled"),
        }
    }
}

/// Extrapolates `values[k] ~ v(t_k)` with `t_k = 2^-(k+1)` to `t = 0`.
///
/// Returns the extrapolated value and the last increment of the table.
pub fn richardson_to_zero(values: &[MatrixValue]) -> (MatrixValue, MatrixValue) {
    assert!(values.len() >= 2, "Richardson extrapolation needs two levels");
    let mut prev_row: Vec<MatrixValue> = vec![values[0].clone()];
    for v in &values[1..] {
        let mut row = Vec::with_capacity(prev_row.len() + 1);
        row.push(v.clone());
        for (j, prev) in prev_row.iter().enumerate() {
            let last = &row[j];
            let factor = 1.0 / ((1u64 << (j + 1)) as f64 - 1.0);
            let next = last + &(last - prev).scale_real(factor);
            row.push(next);
        }
        prev_row = row;
    }
    let n = prev_row.len();
    let increment = &prev_row[n - 1] - &prev_row[n - 2];
    (prev_row.pop().expect("nonempty"), increment)
}

pub fn radial_boundary(h: &DiskFunction, grid: &CircleGrid, ladder: &RadiusLadder, tol: f64) -> Result<BoundaryResult> {
    if ladder.levels() < 3 {
        return Err(HardyError::Precondition(format!(
            "boundary extraction needs at least 3 ladder levels, got {}",
            ladder.levels()
        )));
    }
    if !(tol > 0.0) {
        return Err(HardyError::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    let radii = ladder.radii();
    let sections = radial_sections(h, &radii, grid)?;
    let n = grid.n_points();
    let mut values = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    let mut u_proxy = Vec::with_capacity(n);
    for j in 0..n {
        let along: Vec<MatrixValue> = sections.iter().map(|s| s[j].clone()).collect();
        let (limit, increment) = richardson_to_zero(&along);
        let residual = if increment.is_finite() { op_norm(&increment)? } else { f64::INFINITY };
        residuals.push(residual);
        let mut u = 0.0f64;
        for v in along.iter().rev().take(U_PROXY_RUNGS) {
            u = u.max(op_norm(v)?);
        }
        u_proxy.push(u);
        values.push(limit);
    }
    Ok(BoundaryResult {
        boundary: CircleFunction::Sampled {
            grid: grid.clone(),
            values,
        },
        per_node_residual: residuals,
        ladder_used: ladder.clone(),
        basis_dimension: h.shape().1,
        tol,
        u_proxy,
    })
}

/// As [`radial_boundary`], but a residual above `tol` at any node is an error.
pub fn radial_boundary_strict(
    h: &DiskFunction,
    grid: &CircleGrid,
    ladder: &RadiusLadder,
    tol: f64,
) -> Result<BoundaryResult> {
    let result = radial_boundary(h, grid, ladder, tol)?;
    let failed = result.failed_nodes();
    if !failed.is_empty() {
        return Err(HardyError::ConvergenceFailure(format!(
            "{} of {} nodes exceed tolerance {tol} (largest residual {:e})",
            failed.len(),
            grid.n_points(),
            result.max_residual()
        )));
    }
    Ok(result)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub r: f64,
    /// `||(P[f])_r - f||` in `L^p_sot`; absent for `p = inf`.
    pub lp_deviation: Option<f64>,
    pub max_pointwise_deviation: f64,
}

/// Distance between `(P[f])_r` and `f` on `grid` at each ladder radius.
pub fn poisson_convergence_report(
    f: &CircleFunction,
    p: Exponent,
    ladder: &RadiusLadder,
    grid: &CircleGrid,
) -> Result<Vec<ConvergenceRow>> {
    let h = DiskFunction::poisson_extension(f.clone());
    let radii = ladder.radii();
    let sections = radial_sections(&h, &radii, grid)?;
    let target = sample_values(f, grid)?;
    radii
        .iter()
        .zip(sections)
        .map(|(&r, values)| {
            let diff: Vec<MatrixValue> = values.iter().zip(&target).map(|(a, b)| a - b).collect();
            let max_pointwise = diff.iter().map(op_norm).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
            let lp_deviation = match p {
                Exponent::Infinity => None,
                _ => Some(lp_sot_norm_weighted(&WeightedValues::from_samples(grid, diff), p)?),
            };
            Ok(ConvergenceRow {
                r,
                lp_deviation,
                max_pointwise_deviation: max_pointwise,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::Rule;
    use crate::grid::make_grid;
    use crate::matrix::{C64, ONE, ZERO};
    use std::collections::BTreeMap;

    fn scalar(z: f64) -> MatrixValue {
        MatrixValue::diagonal(&[C64::new(z, 0.0)])
    }

    #[test]
    fn richardson_exact_on_polynomials() {
        // v(t) = 3 - 2t + 5t^2 - t^3 on t = 1/2, 1/4, ...
        let v = |t: f64| 3.0 - 2.0 * t + 5.0 * t * t - t * t * t;
        let values: Vec<MatrixValue> = (1..=6).map(|k| scalar(v(2f64.powi(-k)))).collect();
        let (limit, inc) = richardson_to_zero(&values);
        assert!((limit.get(0, 0).re - 3.0).abs() < 1e-12);
        assert!(inc.get(0, 0).norm() < 1e-12);
    }

    #[test]
    fn diagonal_disk_boundary() {
        let h = DiskFunction::taylor(vec![
            MatrixValue::zeros(2, 2),
            MatrixValue::unit(2, 2, 0, 0),
            MatrixValue::unit(2, 2, 1, 1),
        ])
        .unwrap();
        let g = make_grid(32).unwrap();
        let res = radial_boundary(&h, &g, &RadiusLadder::new(12).unwrap(), 1e-8).unwrap();
        assert!(res.converged());
        assert!(res.max_residual() <= 1e-8);
        assert_eq!(res.basis_dimension, 2);
        for (j, v) in res.boundary_values().iter().enumerate() {
            let z = g.node(j);
            assert!(v.max_abs_diff(&MatrixValue::diagonal(&[z, z * z])) < 1e-10);
        }
    }

    #[test]
    fn constant_boundary_has_zero_residual() {
        let a = MatrixValue::from_rows(vec![vec![C64::new(1.0, 2.0), ZERO, ONE]]).unwrap();
        let h = DiskFunction::taylor(vec![a.clone()]).unwrap();
        let g = make_grid(8).unwrap();
        let res = radial_boundary(&h, &g, &RadiusLadder::new(5).unwrap(), 1e-12).unwrap();
        assert!(res.per_node_residual.iter().all(|r| *r == 0.0));
        assert!(res.boundary_values().iter().all(|v| *v == a));
    }

    #[test]
    fn poisson_extension_boundary_recovers_polynomial() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, MatrixValue::from_rows(vec![vec![ONE, C64::new(0.0, 1.0)]]).unwrap());
        coeffs.insert(2, MatrixValue::from_rows(vec![vec![C64::new(0.5, -0.5), ZERO]]).unwrap());
        coeffs.insert(-1, MatrixValue::from_rows(vec![vec![ZERO, C64::new(0.25, 0.0)]]).unwrap());
        let f = CircleFunction::fourier_polynomial(coeffs).unwrap();
        let g = make_grid(64).unwrap();
        let res = radial_boundary(&DiskFunction::poisson_extension(f.clone()), &g, &RadiusLadder::new(10).unwrap(), 1e-6)
            .unwrap();
        let target = sample_values(&f, &g).unwrap();
        for (v, t) in res.boundary_values().iter().zip(&target) {
            assert!(v.max_abs_diff(t) < 1e-6);
        }
    }

    #[test]
    fn short_ladder_rejected() {
        let h = DiskFunction::taylor(vec![MatrixValue::identity(1)]).unwrap();
        let g = make_grid(4).unwrap();
        assert!(matches!(
            radial_boundary(&h, &g, &RadiusLadder::new(2).unwrap(), 1e-6),
            Err(HardyError::Precondition(_))
        ));
    }

    #[test]
    fn discontinuous_boundary_is_reported_not_dropped() {
        let f = CircleFunction::rule(Rule::ArcMultiplier { dim: 2 });
        let g = make_grid(64).unwrap();
        let h = DiskFunction::poisson_extension(f);
        let ladder = RadiusLadder::new(6).unwrap();
        let res = radial_boundary(&h, &g, &ladder, 1e-12).unwrap();
        assert!(!res.converged());
        assert_eq!(res.per_node_residual.len(), 64);
        assert!(matches!(
            radial_boundary_strict(&h, &g, &ladder, 1e-12),
            Err(HardyError::ConvergenceFailure(_))
        ));
    }

    #[test]
    fn constant_has_no_poisson_deviation() {
        let f = CircleFunction::constant(MatrixValue::identity(2));
        let rows = poisson_convergence_report(&f, Exponent::TWO, &RadiusLadder::new(6).unwrap(), &make_grid(32).unwrap())
            .unwrap();
        assert!(rows.iter().all(|r| r.lp_deviation.unwrap() < 1e-13 && r.max_pointwise_deviation < 1e-13));
        let rows = poisson_convergence_report(&f, Exponent::INF, &RadiusLadder::new(3).unwrap(), &make_grid(8).unwrap())
            .unwrap();
        assert!(rows.iter().all(|r| r.lp_deviation.is_none()));
    }
}
