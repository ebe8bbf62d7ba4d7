//! Exact constructors for the explicit operator-valued functions the toolkit
//! studies, the Banach transpose, and a separability witness.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::function::{CircleFunction, DiskFunction, Rule};
use crate::matrix::{MatrixValue, C64};
use crate::norms::op_norm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GalleryName {
    DiagonalDisk,
    RotationSymbol,
    EvaluationFunctional,
    ArcMultiplier,
    UnboundedRow,
    MatrixPolynomial,
}

impl GalleryName {
    pub const ALL: [GalleryName; 6] = [
        GalleryName::DiagonalDisk,
        GalleryName::RotationSymbol,
        GalleryName::EvaluationFunctional,
        GalleryName::ArcMultiplier,
        GalleryName::UnboundedRow,
        GalleryName::MatrixPolynomial,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            GalleryName::DiagonalDisk => "diagonal_disk",
            GalleryName::RotationSymbol => "rotation_symbol",
            GalleryName::EvaluationFunctional => "evaluation_functional",
            GalleryName::ArcMultiplier => "arc_multiplier",
            GalleryName::UnboundedRow => "unbounded_row",
            GalleryName::MatrixPolynomial => "matrix_polynomial",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|n| n.as_str() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GallerySpec {
    pub name: GalleryName,
    pub dim: usize,
    /// Explicit coefficients of a matrix polynomial.
    pub coeffs: Option<BTreeMap<i64, MatrixValue>>,
    /// Degree of a random analytic matrix polynomial (used when `coeffs` is absent).
    pub degree: usize,
    pub seed: u64,
}

impl GallerySpec {
    pub fn new(name: GalleryName, dim: usize) -> Self {
        GallerySpec {
            name,
            dim,
            coeffs: None,
            degree: 0,
            seed: 0,
        }
    }

    pub fn random_polynomial(dim: usize, degree: usize, seed: u64) -> Self {
        GallerySpec {
            name: GalleryName::MatrixPolynomial,
            dim,
            coeffs: None,
            degree,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GalleryObject {
    Circle(CircleFunction),
    Disk(DiskFunction),
}

impl GalleryObject {
    /// The circle function itself, or the boundary of a disk function.
    pub fn circle(&self) -> CircleFunction {
        match self {
            GalleryObject::Circle(f) => f.clone(),
            GalleryObject::Disk(h) => h.boundary_function(),
        }
    }

    /// The disk function itself, or the strong Poisson extension of a circle function.
    pub fn disk(&self) -> DiskFunction {
        match self {
            GalleryObject::Circle(f) => DiskFunction::poisson_extension(f.clone()),
            GalleryObject::Disk(h) => h.clone(),
        }
    }
}

pub fn build(spec: &GallerySpec) -> Result<GalleryObject> {
    Ok(match spec.name {
        GalleryName::DiagonalDisk => GalleryObject::Disk(make_diagonal_disk(spec.dim)?),
        GalleryName::RotationSymbol => GalleryObject::Circle(make_rotation_symbol(spec.dim)?),
        GalleryName::EvaluationFunctional => GalleryObject::Disk(make_evaluation_functional(spec.dim)?),
        GalleryName::ArcMultiplier => GalleryObject::Circle(make_arc_multiplier(spec.dim)?),
        GalleryName::UnboundedRow => GalleryObject::Circle(make_unbounded_row(spec.dim)?),
        GalleryName::MatrixPolynomial => GalleryObject::Circle(match &spec.coeffs {
            Some(coeffs) => CircleFunction::fourier_polynomial(coeffs.clone())?,
            None => random_matrix_polynomial(spec.dim, spec.degree, spec.seed)?,
        }),
    })
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(HardyError::InvalidArgument("dimension must be at least 1".into()));
    }
    Ok(())
}

/// `h(zeta) = diag(zeta, zeta^2, ..., zeta^d)`.
pub fn make_diagonal_disk(d: usize) -> Result<DiskFunction> {
    check_dim(d)?;
    let mut coeffs = vec![MatrixValue::zeros(d, d)];
    coeffs.extend((0..d).map(|n| MatrixValue::unit(d, d, n, n)));
    DiskFunction::taylor(coeffs)
}

pub fn make_rotation_symbol(d: usize) -> Result<CircleFunction> {
    check_dim(d)?;
    Ok(CircleFunction::rule(Rule::RotationSymbol { dim: d }))
}

/// `h(zeta) = (1, zeta, ..., zeta^(d-1))`: point evaluation at `zeta` on
/// polynomials of degree `< d`, in the monomial basis of `H^2`.
///
/// `||h(r)|| = sqrt((1 - r^(2d)) / (1 - r^2))` grows to `sqrt(d)` while the
/// strong norm stays 1. Testing against `s -> exp((s + z) / (s - z))` only
/// gives the lower bound `exp((r + 1) / (r - 1)) <= 1/e`, which is bounded;
/// the growth above is what separates the two norms.
pub fn make_evaluation_functional(d: usize) -> Result<DiskFunction> {
    check_dim(d)?;
    DiskFunction::taylor((0..d).map(|n| MatrixValue::unit(1, d, 0, n)).collect())
}

pub fn make_arc_multiplier(d: usize) -> Result<CircleFunction> {
    check_dim(d)?;
    Ok(CircleFunction::rule(Rule::ArcMultiplier { dim: d }))
}

pub fn make_unbounded_row(d: usize) -> Result<CircleFunction> {
    check_dim(d)?;
    Ok(CircleFunction::rule(Rule::UnboundedRow { dim: d }))
}

/// An analytic `d x d` polynomial of degree `degree` with independent complex
/// Gaussian entries scaled by `1 / sqrt(d (degree + 1))`.
pub fn random_matrix_polynomial(d: usize, degree: usize, seed: u64) -> Result<CircleFunction> {
    check_dim(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / ((d * (degree + 1)) as f64).sqrt();
    let mut coeffs = BTreeMap::new();
    for n in 0..=degree {
        let a = MatrixValue::from_fn(d, d, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re * scale, im * scale)
        });
        coeffs.insert(n as i64, a);
    }
    CircleFunction::fourier_polynomial(coeffs)
}

/// `f^*(z) = f(z)^T`: the adjoint for the bilinear pairing, which keeps
/// analytic functions analytic.
pub fn banach_transpose(f: &CircleFunction) -> CircleFunction {
    f.transpose()
}

/// Size of the greedy `epsilon`-net of the sampled values in node order,
/// under operator-norm distance: a value joins the net when it is farther
/// than `epsilon` from every earlier member.
pub fn separability_witness(f: &CircleFunction, epsilon: f64) -> Result<usize> {
    let CircleFunction::Sampled { values, .. } = f else {
        return Err(HardyError::InvalidArgument("separability witness needs a sampled function".into()));
    };
    if !(epsilon > 0.0) {
        return Err(HardyError::InvalidArgument(format!("epsilon = {epsilon} must be positive")));
    }
    let mut net: Vec<&MatrixValue> = Vec::new();
    for v in values {
        let mut far = true;
        for c in &net {
            if op_norm(&(v - *c))? <= epsilon {
                far = false;
                break;
            }
        }
        if far {
            net.push(v);
        }
    }
    Ok(net.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{eval_circle, eval_disk, sample};
    use crate::grid::make_grid;
    use crate::matrix::ONE;
    use crate::transforms::fourier_coefficient;

    #[test]
    fn zero_dimension_rejected() {
        for name in GalleryName::ALL {
            if name == GalleryName::MatrixPolynomial {
                continue;
            }
            assert!(build(&GallerySpec::new(name, 0)).is_err(), "{name:?}");
        }
        assert!(random_matrix_polynomial(0, 3, 1).is_err());
    }

    #[test]
    fn diagonal_disk_one() {
        let h = make_diagonal_disk(1).unwrap();
        let zeta = C64::new(0.3, -0.6);
        assert!(eval_disk(&h, zeta).unwrap().max_abs_diff(&MatrixValue::diagonal(&[zeta])) < 1e-15);
    }

    #[test]
    fn diagonal_disk_two() {
        let h = make_diagonal_disk(2).unwrap();
        let zeta = C64::new(-0.2, 0.5);
        let v = eval_disk(&h, zeta).unwrap();
        assert!(v.max_abs_diff(&MatrixValue::diagonal(&[zeta, zeta * zeta])) < 1e-15);
    }

    #[test]
    fn rotation_coefficients_are_units() {
        let d = 4;
        let f = make_rotation_symbol(d).unwrap();
        let g = make_grid(32).unwrap();
        for n in -3..8i64 {
            let a = fourier_coefficient(&f, n, &g).unwrap();
            let expected = if (0..d as i64).contains(&n) {
                MatrixValue::unit(d, d, n as usize, n as usize)
            } else {
                MatrixValue::zeros(d, d)
            };
            assert!(a.max_abs_diff(&expected) < 1e-14, "n = {n}");
        }
    }

    #[test]
    fn evaluation_functional_row() {
        let h = make_evaluation_functional(3).unwrap();
        let zeta = C64::new(0.5, 0.5);
        let v = eval_disk(&h, zeta).unwrap();
        assert!(v.max_abs_diff(&MatrixValue::row(&[ONE, zeta, zeta * zeta])) < 1e-15);
    }

    #[test]
    fn transpose_of_analytic_monomial_stays_analytic() {
        let a = MatrixValue::from_rows(vec![vec![C64::new(1.0, 2.0), C64::new(0.0, 1.0)], vec![C64::new(3.0, 0.0), ONE]])
            .unwrap();
        let f = CircleFunction::monomial(1, a.clone());
        let ft = banach_transpose(&f);
        let g = make_grid(16).unwrap();
        assert!(fourier_coefficient(&ft, 1, &g).unwrap().max_abs_diff(&a.transpose()) < 1e-14);
        for n in [-2, -1, 0, 2, 3] {
            assert!(fourier_coefficient(&ft, n, &g).unwrap().max_abs_entry() < 1e-14);
        }
        // The Hilbert adjoint would move the mass to mode -1 instead.
        let z = g.node(3);
        let hilbert = eval_circle(&f, z).unwrap().adjoint();
        assert!(hilbert.max_abs_diff(&a.adjoint().scale(z.conj())) < 1e-14);
    }

    #[test]
    fn transpose_involution_and_symmetric_fixed_point() {
        let g = make_grid(8).unwrap();
        let f = make_unbounded_row(3).unwrap();
        assert_eq!(banach_transpose(&banach_transpose(&f)), f);
        let rot = make_rotation_symbol(3).unwrap();
        let a = sample(&rot, &g).unwrap();
        let b = sample(&banach_transpose(&rot), &g).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn witness_of_constant_is_one() {
        let g = make_grid(32).unwrap();
        let f = sample(&CircleFunction::constant(MatrixValue::identity(2)), &g).unwrap();
        for eps in [1e-6, 0.5, 10.0] {
            assert_eq!(separability_witness(&f, eps).unwrap(), 1);
        }
    }

    #[test]
    fn witness_rejects_bad_input() {
        let f = make_rotation_symbol(2).unwrap();
        assert!(separability_witness(&f, 1.0).is_err());
        let s = sample(&f, &make_grid(4).unwrap()).unwrap();
        assert!(separability_witness(&s, 0.0).is_err());
    }

    #[test]
    fn random_polynomial_is_deterministic() {
        assert_eq!(random_matrix_polynomial(3, 5, 42).unwrap(), random_matrix_polynomial(3, 5, 42).unwrap());
        assert_ne!(random_matrix_polynomial(3, 5, 42).unwrap(), random_matrix_polynomial(3, 5, 43).unwrap());
    }
}
