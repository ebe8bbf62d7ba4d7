//! Fourier coefficients, the Poisson kernel and integral, the strong Poisson
//! integral and radial sections `h_r(z) = h(rz)`.

use std::collections::BTreeMap;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::function::{eval_disk, sample_values, CircleFunction, DiskFunction, KernelGrid};
use crate::grid::CircleGrid;
use crate::matrix::{MatrixValue, C64, ZERO};
use crate::norms::op_norm;

/// Kernel quadrature nodes per unit of `1 / (1 - r)`.
///
/// Trapezoidal quadrature of `P_zeta` on `n` nodes has aliasing error of order
/// `|zeta|^n`; with `n >= 32 / (1 - r)` that is below `2 e^-32`.
pub const KERNEL_COUPLING: f64 = 32.0;
pub const MIN_KERNEL_POINTS: usize = 256;
pub const MAX_KERNEL_POINTS: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticityReport {
    pub max_negative_defect: f64,
    pub tested_range: usize,
}

impl AnalyticityReport {
    pub fn is_analytic(&self, tol: f64) -> bool {
        self.max_negative_defect <= tol
    }
}

/// Kernel grid size for the Poisson integral of `f` at radius `r`.
///
/// Sampled functions always use their own grid. Otherwise the size is the
/// smallest power of two covering `KERNEL_COUPLING / (1 - r)`,
/// `MIN_KERNEL_POINTS` and four times the polynomial degree.
pub fn kernel_points(r: f64, f: &CircleFunction) -> Result<usize> {
    if let CircleFunction::Sampled { grid, .. } = f {
        return Ok(grid.n_points());
    }
    check_radius(r)?;
    let coupled = (KERNEL_COUPLING / (1.0 - r)).ceil();
    if coupled > MAX_KERNEL_POINTS as f64 {
        return Err(HardyError::InvalidArgument(format!(
            "radius {r} needs more than {MAX_KERNEL_POINTS} kernel nodes"
        )));
    }
    let degree = f.degree().unwrap_or(0) as usize;
    let n = (coupled as usize).max(MIN_KERNEL_POINTS).max(4 * degree + 4);
    Ok(n.next_power_of_two())
}

fn check_radius(r: f64) -> Result<()> {
    if !(0.0..1.0).contains(&r) {
        return Err(HardyError::Domain(format!("radius {r} is not in [0, 1)")));
    }
    Ok(())
}

fn check_zeta(zeta: C64) -> Result<()> {
    if !(zeta.norm() < 1.0) {
        return Err(HardyError::Domain(format!("|zeta| = {} is not inside the unit disk", zeta.norm())));
    }
    Ok(())
}

/// `f^(n) = integral of conj(z)^n f(z) dm(z)`, by trapezoidal quadrature on `grid`.
pub fn fourier_coefficient(f: &CircleFunction, n: i64, grid: &CircleGrid) -> Result<MatrixValue> {
    if grid.n_points() < 2 {
        return Err(HardyError::InvalidArgument("Fourier coefficients need a grid of at least 2 nodes".into()));
    }
    let values = sample_values(f, grid)?;
    Ok(coefficient_from_samples(&values, n, grid))
}

fn coefficient_from_samples(values: &[MatrixValue], n: i64, grid: &CircleGrid) -> MatrixValue {
    let (rows, cols) = values[0].shape();
    let mut acc = MatrixValue::zeros(rows, cols);
    for (j, v) in values.iter().enumerate() {
        acc.axpy(grid.node_power(j, -n), v);
    }
    acc.scale_real(grid.weight())
}

/// Largest operator norm among the coefficients of modes `-m..=-1`.
pub fn analytic_defect(f: &CircleFunction, m: usize, grid: &CircleGrid) -> Result<AnalyticityReport> {
    if grid.n_points() < 2 {
        return Err(HardyError::InvalidArgument("Fourier coefficients need a grid of at least 2 nodes".into()));
    }
    let values = sample_values(f, grid)?;
    let mut worst = 0.0f64;
    for n in 1..=m as i64 {
        worst = worst.max(op_norm(&coefficient_from_samples(&values, -n, grid))?);
    }
    Ok(AnalyticityReport {
        max_negative_defect: worst,
        tested_range: m,
    })
}

/// `P_zeta(z) = (1 - |zeta|^2) / |z - zeta|^2`.
pub fn poisson_kernel(zeta: C64, z: C64) -> Result<f64> {
    check_zeta(zeta)?;
    Ok(kernel(zeta, z))
}

#[inline]
fn kernel(zeta: C64, z: C64) -> f64 {
    (1.0 - zeta.norm_sqr()) / (z - zeta).norm_sqr()
}

/// `P[f](zeta)` by entrywise quadrature on `grid`.
pub fn poisson_integral_on(f: &CircleFunction, zeta: C64, grid: &CircleGrid) -> Result<MatrixValue> {
    check_zeta(zeta)?;
    let values = sample_values(f, grid)?;
    let (rows, cols) = values[0].shape();
    let w = grid.weight();
    let mut acc = MatrixValue::zeros(rows, cols);
    for (z, v) in grid.nodes().iter().zip(&values) {
        acc.axpy(C64::new(w * kernel(zeta, *z), 0.0), v);
    }
    Ok(acc)
}

/// `P[f](zeta)` on the kernel grid chosen by [`kernel_points`].
pub fn poisson_integral(f: &CircleFunction, zeta: C64) -> Result<MatrixValue> {
    check_zeta(zeta)?;
    let grid = CircleGrid::new(kernel_points(zeta.norm(), f)?)?;
    poisson_integral_on(f, zeta, &grid)
}

/// `P_s[f](zeta)`, assembled column by column: column `c` is the Poisson
/// integral of the vector function `z -> f(z) e_c`.
pub fn strong_poisson_on(f: &CircleFunction, zeta: C64, grid: &CircleGrid) -> Result<MatrixValue> {
    check_zeta(zeta)?;
    let values = sample_values(f, grid)?;
    let (rows, cols) = values[0].shape();
    let w = grid.weight();
    let mut columns = vec![vec![ZERO; rows]; cols];
    for (z, v) in grid.nodes().iter().zip(&values) {
        let weight = w * kernel(zeta, *z);
        for (c, column) in columns.iter_mut().enumerate() {
            for (i, slot) in column.iter_mut().enumerate() {
                *slot += v.get(i, c) * weight;
            }
        }
    }
    Ok(MatrixValue::from_fn(rows, cols, |i, c| columns[c][i]))
}

pub fn strong_poisson(f: &CircleFunction, zeta: C64) -> Result<MatrixValue> {
    check_zeta(zeta)?;
    let grid = CircleGrid::new(kernel_points(zeta.norm(), f)?)?;
    strong_poisson_on(f, zeta, &grid)
}

/// `h_r` sampled on `grid`.
pub fn radial_section(h: &DiskFunction, r: f64, grid: &CircleGrid) -> Result<CircleFunction> {
    let mut sections = radial_sections(h, &[r], grid)?;
    Ok(CircleFunction::Sampled {
        grid: grid.clone(),
        values: sections.pop().expect("one radius"),
    })
}

/// Values of `h_r` on `grid` for each radius in `radii`.
///
/// Poisson extensions are evaluated through the spectrum of the boundary on a
/// single kernel grid sized for the largest radius; the result is the same
/// trapezoidal quadrature as [`strong_poisson_on`] at every node.
pub fn radial_sections(h: &DiskFunction, radii: &[f64], grid: &CircleGrid) -> Result<Vec<Vec<MatrixValue>>> {
    for &r in radii {
        check_radius(r)?;
    }
    match h {
        DiskFunction::TaylorPolynomial { .. } => radii
            .iter()
            .map(|&r| grid.nodes().iter().map(|&z| eval_disk(h, z * r)).collect())
            .collect(),
        DiskFunction::PoissonExtension { boundary, kernel } => {
            let r_max = radii.iter().copied().fold(0.0, f64::max);
            let kernel_grid = match kernel {
                KernelGrid::Fixed(g) => g.clone(),
                KernelGrid::Coupled => {
                    let need = kernel_points(r_max, boundary)?;
                    let ne = grid.n_points();
                    CircleGrid::new(need.div_ceil(ne) * ne)?
                }
            };
            if kernel_grid.n_points() % grid.n_points() != 0 {
                return radii
                    .iter()
                    .map(|&r| {
                        grid.nodes()
                            .iter()
                            .map(|&z| strong_poisson_on(boundary, z * r, &kernel_grid))
                            .collect()
                    })
                    .collect();
            }
            let sampler = PoissonSampler::new(boundary, &kernel_grid)?;
            radii.iter().map(|&r| sampler.section(r, grid)).collect()
        }
    }
}

/// Discrete spectrum of a circle function on a kernel grid, for evaluating its
/// trapezoidal Poisson integral on whole circles `|zeta| = r` at once.
///
/// With `c_q` the DFT coefficients of the samples on `n` kernel nodes, the
/// quadrature at `zeta = r w`, `w` an `m`-th root of unity with `m | n`, is
/// `sum_q c_q a_q(r) w^q` where `a_q(r) = sum_k r^|q + kn|
/// = (r^q + r^(n-q)) / (1 - r^n)`.
#[derive(Clone, Debug)]
pub struct PoissonSampler {
    kernel_points: usize,
    shape: (usize, usize),
    /// Nonzero DFT coefficients, keyed by residue mod `kernel_points`.
    spectrum: BTreeMap<usize, MatrixValue>,
}

impl PoissonSampler {
    pub fn new(f: &CircleFunction, kernel: &CircleGrid) -> Result<Self> {
        let n = kernel.n_points();
        let shape = f.shape();
        let mut spectrum = BTreeMap::new();
        if let Some(modes) = f.fourier_modes() {
            // The samples of a trigonometric polynomial have the folded
            // coefficients as their exact DFT.
            for (m, a) in modes {
                let q = m.rem_euclid(n as i64) as usize;
                spectrum
                    .entry(q)
                    .and_modify(|acc: &mut MatrixValue| *acc = &*acc + &a)
                    .or_insert(a);
            }
        } else {
            let values = sample_values(f, kernel)?;
            let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
            let scale = 1.0 / n as f64;
            let mut dense = vec![MatrixValue::zeros(shape.0, shape.1); n];
            let mut buf = vec![Complex::new(0.0, 0.0); n];
            for i in 0..shape.0 {
                for j in 0..shape.1 {
                    for (slot, v) in buf.iter_mut().zip(&values) {
                        let z = v.get(i, j);
                        *slot = Complex::new(z.re, z.im);
                    }
                    if buf.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
                        continue;
                    }
                    fft.process(&mut buf);
                    for (q, z) in buf.iter().enumerate() {
                        dense[q].set(i, j, C64::new(z.re * scale, z.im * scale));
                    }
                }
            }
            spectrum = dense
                .into_iter()
                .enumerate()
                .filter(|(_, m)| !m.is_zero())
                .collect();
        }
        Ok(PoissonSampler {
            kernel_points: n,
            shape,
            spectrum,
        })
    }

    pub fn kernel_points(&self) -> usize {
        self.kernel_points
    }

    /// Quadrature error of the kernel's normalization at radius `r`:
    /// `sum_j w_j P_(r z)(z_j) - 1 = 2 r^n / (1 - r^n)`.
    pub fn normalization_error(&self, r: f64) -> f64 {
        let big = r.powi(self.kernel_points as i32);
        2.0 * big / (1.0 - big)
    }

    pub fn section(&self, r: f64, grid: &CircleGrid) -> Result<Vec<MatrixValue>> {
        check_radius(r)?;
        let n = self.kernel_points;
        let m = grid.n_points();
        if !n.is_multiple_of(m) {
            return Err(HardyError::InvalidArgument(format!(
                "evaluation grid of {m} nodes does not divide the kernel grid of {n}"
            )));
        }
        let big = r.powi(n as i32);
        let denom = 1.0 - big;
        let (rows, cols) = self.shape;
        let mut folded = vec![MatrixValue::zeros(rows, cols); m];
        for (&q, c) in &self.spectrum {
            let a = (r.powi(q as i32) + r.powi((n - q) as i32)) / denom;
            folded[q % m].axpy(C64::new(a, 0.0), c);
        }
        let ifft = FftPlanner::<f64>::new().plan_fft_inverse(m);
        let mut out = vec![MatrixValue::zeros(rows, cols); m];
        let mut buf = vec![Complex::new(0.0, 0.0); m];
        for i in 0..rows {
            for j in 0..cols {
                for (slot, v) in buf.iter_mut().zip(&folded) {
                    let z = v.get(i, j);
                    *slot = Complex::new(z.re, z.im);
                }
                if buf.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
                    continue;
                }
                ifft.process(&mut buf);
                for (v, z) in out.iter_mut().zip(&buf) {
                    v.set(i, j, C64::new(z.re, z.im));
                }
            }
        }
        Ok(out)
    }
}
