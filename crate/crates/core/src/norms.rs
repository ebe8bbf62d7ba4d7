//! Pointwise operator norms, the `L^p_sot` / `H^p` norm family and the strong
//! (columnwise) norms.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::function::{sample_values, CircleFunction, DiskFunction};
use crate::grid::{CircleGrid, RadiusLadder};
use crate::matrix::{MatrixValue, C64, ZERO};
use crate::transforms::radial_sections;

/// A norm exponent `p` in `[1, inf]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(HardyError::InvalidArgument(format!("exponent p = {p} must be a finite number >= 1")));
        }
        Ok(Exponent::Finite(p))
    }

    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);
    pub const INF: Exponent = Exponent::Infinity;

    pub fn is_finite(&self) -> bool {
        matches!(self, Exponent::Finite(_))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = HardyError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Exponent::Infinity);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| HardyError::InvalidArgument(format!("cannot parse exponent {s:?}")))?;
        Exponent::finite(p)
    }
}

impl Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Largest singular value.
pub fn op_norm(a: &MatrixValue) -> Result<f64> {
    if !a.is_finite() {
        return Err(HardyError::InvalidValue("operator norm of a matrix with non-finite entries".into()));
    }
    if a.rows() == 1 || a.cols() == 1 {
        // Rank one: the Euclidean norm of the single row or column.
        return Ok(a.as_matrix().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
    }
    Ok(a.as_matrix().singular_values().max())
}

/// Operator-valued samples with quadrature weights: a grid, or an exact arc
/// decomposition of a piecewise-constant function.
#[derive(Clone, Debug)]
pub struct WeightedValues {
    pub weights: Vec<f64>,
    pub values: Vec<MatrixValue>,
}

impl WeightedValues {
    pub fn on_grid(f: &CircleFunction, grid: &CircleGrid) -> Result<Self> {
        Ok(WeightedValues {
            weights: grid.weights(),
            values: sample_values(f, grid)?,
        })
    }

    /// Exact integration over the arcs of a piecewise-constant rule.
    pub fn exact_arcs(f: &CircleFunction) -> Result<Self> {
        let pieces = f
            .arc_pieces()
            .ok_or_else(|| HardyError::NotRepresentable("function has no exact arc decomposition".into()))?;
        let (weights, values) = pieces.into_iter().unzip();
        Ok(WeightedValues { weights, values })
    }

    pub fn from_samples(grid: &CircleGrid, values: Vec<MatrixValue>) -> Self {
        WeightedValues {
            weights: grid.weights(),
            values,
        }
    }
}

/// A nonnegative scalar function known through weighted samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarSamples {
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
}

/// `N(f)(z_j) = ||f(z_j)||` at each node of `grid`.
pub fn pointwise_norm(f: &CircleFunction, grid: &CircleGrid) -> Result<ScalarSamples> {
    pointwise_norm_weighted(&WeightedValues::on_grid(f, grid)?)
}

pub fn pointwise_norm_weighted(wv: &WeightedValues) -> Result<ScalarSamples> {
    Ok(ScalarSamples {
        weights: wv.weights.clone(),
        values: wv.values.iter().map(op_norm).collect::<Result<_>>()?,
    })
}

/// `(sum_j w_j g_j^p)^(1/p)`, or the largest sample for `p = inf`.
///
/// For `p = inf` only samples of positive weight count; on a grid this is the
/// maximum over nodes, a discretization of the essential supremum.
pub fn lp_scalar_norm(g: &ScalarSamples, p: Exponent) -> Result<f64> {
    if g.values.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(HardyError::InvalidValue("scalar samples must be finite and nonnegative".into()));
    }
    match p {
        Exponent::Infinity => Ok(g
            .weights
            .iter()
            .zip(&g.values)
            .filter(|(w, _)| **w > 0.0)
            .map(|(_, v)| *v)
            .fold(0.0, f64::max)),
        Exponent::Finite(p) => {
            if !(p >= 1.0) {
                return Err(HardyError::InvalidArgument(format!("exponent p = {p} must be >= 1")));
            }
            let total: f64 = g.weights.iter().zip(&g.values).map(|(w, v)| w * v.powf(p)).sum();
            Ok(total.powf(1.0 / p))
        }
    }
}

/// `||N(f)||_(L^p)`.
pub fn lp_sot_norm(f: &CircleFunction, p: Exponent, grid: &CircleGrid) -> Result<f64> {
    lp_scalar_norm(&pointwise_norm(f, grid)?, p)
}

pub fn lp_sot_norm_weighted(wv: &WeightedValues, p: Exponent) -> Result<f64> {
    lp_scalar_norm(&pointwise_norm_weighted(wv)?, p)
}

/// `||N(f)||_(L^p)` integrated exactly over the arcs of a piecewise-constant rule.
pub fn lp_sot_norm_exact(f: &CircleFunction, p: Exponent) -> Result<f64> {
    lp_sot_norm_weighted(&WeightedValues::exact_arcs(f)?, p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormProfile {
    pub p: Exponent,
    /// `(r, value)` pairs in ladder order.
    pub per_radius: Vec<(f64, f64)>,
    #[serde(rename = "final")]
    pub final_value: f64,
}

impl NormProfile {
    fn from_rows(p: Exponent, per_radius: Vec<(f64, f64)>) -> Self {
        let final_value = per_radius.last().map(|(_, v)| *v).unwrap_or(0.0);
        NormProfile {
            p,
            per_radius,
            final_value,
        }
    }

    pub fn max_value(&self) -> f64 {
        self.per_radius.iter().map(|(_, v)| *v).fold(0.0, f64::max)
    }
}

/// `||N(h_r)||_(L^p)` along the ladder; `final` is the top radius.
pub fn hp_disk_norm(h: &DiskFunction, p: Exponent, ladder: &RadiusLadder, grid: &CircleGrid) -> Result<NormProfile> {
    let radii = ladder.radii();
    let sections = radial_sections(h, &radii, grid)?;
    let rows = radii
        .iter()
        .zip(sections)
        .map(|(&r, values)| Ok((r, lp_sot_norm_weighted(&WeightedValues::from_samples(grid, values), p)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(NormProfile::from_rows(p, rows))
}

/// `G = sum_j w_j f(z_j)^H f(z_j)`.
pub fn gram_operator(wv: &WeightedValues) -> DMatrix<C64> {
    let cols = wv.values[0].cols();
    let mut g = DMatrix::from_element(cols, cols, ZERO);
    for (w, v) in wv.weights.iter().zip(&wv.values) {
        let m = v.as_matrix();
        g += m.adjoint() * m * C64::new(*w, 0.0);
    }
    g
}

/// `sup_(|x| <= 1) ||f(.) x||_(L^2)`: the square root of the top eigenvalue of
/// the Gram operator.
pub fn l2_strong_norm(f: &CircleFunction, grid: &CircleGrid) -> Result<f64> {
    l2_strong_norm_weighted(&WeightedValues::on_grid(f, grid)?)
}

pub fn l2_strong_norm_weighted(wv: &WeightedValues) -> Result<f64> {
    if !wv.values.iter().all(MatrixValue::is_finite) {
        return Err(HardyError::InvalidValue("non-finite samples".into()));
    }
    let g = gram_operator(wv);
    let top = g.symmetric_eigenvalues().max();
    Ok(top.max(0.0).sqrt())
}

pub fn l2_strong_norm_exact(f: &CircleFunction) -> Result<f64> {
    l2_strong_norm_weighted(&WeightedValues::exact_arcs(f)?)
}

/// `sup_r` of the strong `L^2` norm of `h_r` along the ladder.
pub fn l2_strong_disk_norm(h: &DiskFunction, ladder: &RadiusLadder, grid: &CircleGrid) -> Result<NormProfile> {
    let radii = ladder.radii();
    let sections = radial_sections(h, &radii, grid)?;
    let rows = radii
        .iter()
        .zip(sections)
        .map(|(&r, values)| Ok((r, l2_strong_norm_weighted(&WeightedValues::from_samples(grid, values))?)))
        .collect::<Result<Vec<_>>>()?;
    let mut profile = NormProfile::from_rows(Exponent::TWO, rows);
    profile.final_value = profile.max_value();
    Ok(profile)
}

/// `||f(.) x||_(L^p)` for one vector `x`.
pub fn vector_lp_norm(wv: &WeightedValues, x: &[C64], p: Exponent) -> Result<f64> {
    let norms = wv
        .values
        .iter()
        .map(|v| v.mul_vec(x).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    lp_scalar_norm(
        &ScalarSamples {
            weights: wv.weights.clone(),
            values: norms,
        },
        p,
    )
}

/// Largest `||f(.) x||_(L^p) / ||x||` over the given probe vectors.
pub fn lp_strong_norm_with_probes(wv: &WeightedValues, p: Exponent, probes: &[Vec<C64>]) -> Result<f64> {
    let cols = wv.values[0].cols();
    let mut best = 0.0f64;
    for x in probes {
        if x.len() != cols {
            return Err(HardyError::ShapeMismatch {
                expected: (cols, 1),
                found: (x.len(), 1),
            });
        }
        let len = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if len == 0.0 {
            continue;
        }
        best = best.max(vector_lp_norm(wv, x, p)? / len);
    }
    Ok(best)
}

/// Lower bound on the strong `L^p` norm: every canonical basis vector plus
/// `n_probe` random unit vectors drawn from a ChaCha stream seeded with `seed`.
/// Exact when the supremum is attained at one of the probes.
pub fn lp_strong_norm_estimate(
    f: &CircleFunction,
    p: Exponent,
    n_probe: usize,
    seed: u64,
    grid: &CircleGrid,
) -> Result<f64> {
    if n_probe == 0 {
        return Err(HardyError::InvalidArgument("need at least one probe".into()));
    }
    let wv = WeightedValues::on_grid(f, grid)?;
    let cols = wv.values[0].cols();
    lp_strong_norm_with_probes(&wv, p, &probe_vectors(cols, n_probe, seed))
}

pub fn probe_vectors(dim: usize, n_random: usize, seed: u64) -> Vec<Vec<C64>> {
    let mut probes: Vec<Vec<C64>> = (0..dim)
        .map(|k| (0..dim).map(|i| if i == k { C64::new(1.0, 0.0) } else { ZERO }).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..n_random {
        let x: Vec<C64> = (0..dim)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                C64::new(re, im)
            })
            .collect();
        let len = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if len > 0.0 {
            probes.push(x.into_iter().map(|z| z / len).collect());
        }
    }
    probes
}
