//! Operator-valued functions on the circle and on the disk.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::grid::CircleGrid;
use crate::matrix::{MatrixValue, C64, ONE, ZERO};
use crate::transforms;

/// Tolerance on `|z| = 1` for circle evaluation.
pub const UNIT_TOL: f64 = 1e-12;

/// Closed-form rules for the explicit circle functions of the gallery.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// `diag(1, z, ..., z^(d-1))`: the rotation `x(s) -> x(zs)` on the
    /// degree-`(d-1)` truncation of `H^2`, in the monomial basis.
    RotationSymbol { dim: usize },
    /// The piecewise-constant diagonal multiplier on the arcs
    /// `E_0 = (0, pi)`, `E_n = F_n \ F_(n+1)` with
    /// `F_n = [(2 - 1/n) pi, 2 pi)`, on modes `0..=d`.
    ArcMultiplier { dim: usize },
    /// The `1 x d` row `(z, z^2, ..., z^d)`.
    UnboundedRow { dim: usize },
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::RotationSymbol { .. } => "rotation_symbol",
            Rule::ArcMultiplier { .. } => "arc_multiplier",
            Rule::UnboundedRow { .. } => "unbounded_row",
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Rule::RotationSymbol { dim } | Rule::ArcMultiplier { dim } | Rule::UnboundedRow { dim } => dim,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match *self {
            Rule::RotationSymbol { dim } => (dim, dim),
            Rule::ArcMultiplier { dim } => (dim + 1, dim + 1),
            Rule::UnboundedRow { dim } => (1, dim),
        }
    }

    pub fn eval(&self, z: C64) -> MatrixValue {
        match *self {
            Rule::RotationSymbol { dim } => {
                let mut powers = Vec::with_capacity(dim);
                let mut acc = ONE;
                for _ in 0..dim {
                    powers.push(acc);
                    acc *= z;
                }
                MatrixValue::diagonal(&powers)
            }
            Rule::ArcMultiplier { dim } => arc_multiplier_value(dim, arc_index(z)),
            Rule::UnboundedRow { dim } => {
                let mut powers = Vec::with_capacity(dim);
                let mut acc = z;
                for _ in 0..dim {
                    powers.push(acc);
                    acc *= z;
                }
                MatrixValue::row(&powers)
            }
        }
    }

    /// Fourier coefficients, when the rule is a trigonometric polynomial.
    pub fn fourier_modes(&self) -> Option<BTreeMap<i64, MatrixValue>> {
        match *self {
            Rule::RotationSymbol { dim } => Some(
                (0..dim)
                    .map(|n| (n as i64, MatrixValue::unit(dim, dim, n, n)))
                    .collect(),
            ),
            Rule::UnboundedRow { dim } => Some(
                (0..dim)
                    .map(|n| (n as i64 + 1, MatrixValue::unit(1, dim, 0, n)))
                    .collect(),
            ),
            Rule::ArcMultiplier { .. } => None,
        }
    }

    /// Exact decomposition into `(arc measure, constant value)` pieces, when the
    /// rule is piecewise constant on finitely many arcs.
    pub fn arc_pieces(&self) -> Option<Vec<(f64, MatrixValue)>> {
        match *self {
            Rule::ArcMultiplier { dim } => {
                // E_0 has measure 1/2, E_n has measure 1/(2n(n+1)), and every
                // E_n with n >= d carries the same truncated value, so they
                // merge into F_d of measure 1/(2d).
                let mut pieces = vec![(0.5, arc_multiplier_value(dim, 0))];
                for n in 1..dim {
                    let m = 1.0 / (2.0 * n as f64 * (n as f64 + 1.0));
                    pieces.push((m, arc_multiplier_value(dim, n)));
                }
                pieces.push((1.0 / (2.0 * dim as f64), arc_multiplier_value(dim, dim)));
                Some(pieces)
            }
            _ => None,
        }
    }
}

/// Index `N` of the arc `E_N` containing `z`; the measure-zero point `z = 1`
/// belongs to `E_0`. Angles within a relative `1e-9` below an endpoint
/// `(2 - 1/n) pi` are snapped onto it, so grid nodes that sit on an endpoint
/// land in the half-open arc that starts there.
pub fn arc_index(z: C64) -> usize {
    let mut theta = z.im.atan2(z.re);
    if theta < 0.0 {
        theta += 2.0 * PI;
    }
    if theta < PI * (1.0 - 1e-12) {
        return 0;
    }
    let s = 2.0 - theta / PI;
    if s <= 0.0 {
        return usize::MAX;
    }
    let inv = 1.0 / s;
    let n = (inv * (1.0 + 1e-9)).floor();
    if n >= usize::MAX as f64 {
        usize::MAX
    } else {
        (n as usize).max(1)
    }
}

/// Value of the truncated arc multiplier on `E_arc`: `diag(1, sqrt(2) 1[1 <= arc], ..., sqrt(2d) 1[d <= arc])`.
fn arc_multiplier_value(dim: usize, arc: usize) -> MatrixValue {
    let entries: Vec<C64> = (0..=dim)
        .map(|n| {
            if n == 0 {
                ONE
            } else if n <= arc {
                C64::new((2.0 * n as f64).sqrt(), 0.0)
            } else {
                ZERO
            }
        })
        .collect();
    MatrixValue::diagonal(&entries)
}

/// A gallery rule together with the modifiers the toolkit applies to it.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleFunction {
    pub rule: Rule,
    pub scale: C64,
    /// Banach transpose (no conjugation) applied after the rule.
    pub transposed: bool,
}

impl RuleFunction {
    pub fn new(rule: Rule) -> Self {
        RuleFunction {
            rule,
            scale: ONE,
            transposed: false,
        }
    }

    fn finish(&self, m: MatrixValue) -> MatrixValue {
        let m = if self.scale == ONE { m } else { m.scale(self.scale) };
        if self.transposed {
            m.transpose()
        } else {
            m
        }
    }

    pub fn eval(&self, z: C64) -> MatrixValue {
        self.finish(self.rule.eval(z))
    }

    pub fn shape(&self) -> (usize, usize) {
        let (r, c) = self.rule.shape();
        if self.transposed {
            (c, r)
        } else {
            (r, c)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CircleFunction {
    Sampled {
        grid: CircleGrid,
        values: Vec<MatrixValue>,
    },
    /// `f(z) = sum_n A_n z^n` over finitely many integer modes.
    FourierPolynomial { coeffs: BTreeMap<i64, MatrixValue> },
    RuleBased(RuleFunction),
}

impl CircleFunction {
    pub fn sampled(grid: CircleGrid, values: Vec<MatrixValue>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(HardyError::InvalidArgument(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.n_points()
            )));
        }
        check_uniform_shape(values.iter())?;
        check_finite(values.iter())?;
        Ok(CircleFunction::Sampled { grid, values })
    }

    pub fn fourier_polynomial(coeffs: BTreeMap<i64, MatrixValue>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(HardyError::InvalidArgument("Fourier polynomial needs at least one coefficient".into()));
        }
        check_uniform_shape(coeffs.values())?;
        check_finite(coeffs.values())?;
        Ok(CircleFunction::FourierPolynomial { coeffs })
    }

    pub fn constant(value: MatrixValue) -> Self {
        CircleFunction::FourierPolynomial {
            coeffs: BTreeMap::from([(0, value)]),
        }
    }

    /// `z^n * value`.
    pub fn monomial(n: i64, value: MatrixValue) -> Self {
        CircleFunction::FourierPolynomial {
            coeffs: BTreeMap::from([(n, value)]),
        }
    }

    pub fn rule(rule: Rule) -> Self {
        CircleFunction::RuleBased(RuleFunction::new(rule))
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            CircleFunction::Sampled { values, .. } => values[0].shape(),
            CircleFunction::FourierPolynomial { coeffs } => coeffs.values().next().map(|a| a.shape()).unwrap_or((0, 0)),
            CircleFunction::RuleBased(r) => r.shape(),
        }
    }

    /// Exact Fourier coefficients when the function is a trigonometric
    /// polynomial (FourierPolynomial, or a rule that is one).
    pub fn fourier_modes(&self) -> Option<BTreeMap<i64, MatrixValue>> {
        match self {
            CircleFunction::FourierPolynomial { coeffs } => Some(coeffs.clone()),
            CircleFunction::RuleBased(r) => r
                .rule
                .fourier_modes()
                .map(|modes| modes.into_iter().map(|(n, a)| (n, r.finish(a))).collect()),
            CircleFunction::Sampled { .. } => None,
        }
    }

    /// Largest `|n|` with a stored coefficient, when known.
    pub fn degree(&self) -> Option<u64> {
        self.fourier_modes()
            .map(|m| m.keys().map(|n| n.unsigned_abs()).max().unwrap_or(0))
    }

    /// Exact arc decomposition, for rules that are piecewise constant.
    pub fn arc_pieces(&self) -> Option<Vec<(f64, MatrixValue)>> {
        match self {
            CircleFunction::RuleBased(r) => r
                .rule
                .arc_pieces()
                .map(|p| p.into_iter().map(|(m, a)| (m, r.finish(a))).collect()),
            _ => None,
        }
    }

    /// Rewrites trigonometric-polynomial rules as explicit Fourier polynomials.
    pub fn to_fourier_polynomial(&self) -> Option<CircleFunction> {
        self.fourier_modes()
            .map(|coeffs| CircleFunction::FourierPolynomial { coeffs })
    }

    pub fn scale(&self, c: C64) -> CircleFunction {
        match self {
            CircleFunction::Sampled { grid, values } => CircleFunction::Sampled {
                grid: grid.clone(),
                values: values.iter().map(|v| v.scale(c)).collect(),
            },
            CircleFunction::FourierPolynomial { coeffs } => CircleFunction::FourierPolynomial {
                coeffs: coeffs.iter().map(|(n, a)| (*n, a.scale(c))).collect(),
            },
            CircleFunction::RuleBased(r) => CircleFunction::RuleBased(RuleFunction {
                scale: r.scale * c,
                ..r.clone()
            }),
        }
    }

    /// Pointwise transpose without conjugation.
    pub fn transpose(&self) -> CircleFunction {
        match self {
            CircleFunction::Sampled { grid, values } => CircleFunction::Sampled {
                grid: grid.clone(),
                values: values.iter().map(MatrixValue::transpose).collect(),
            },
            CircleFunction::FourierPolynomial { coeffs } => CircleFunction::FourierPolynomial {
                coeffs: coeffs.iter().map(|(n, a)| (*n, a.transpose())).collect(),
            },
            CircleFunction::RuleBased(r) => CircleFunction::RuleBased(RuleFunction {
                transposed: !r.transposed,
                ..r.clone()
            }),
        }
    }

    /// Sum of two functions; trigonometric polynomials add coefficientwise,
    /// sampled functions on the same grid add pointwise.
    pub fn try_add(&self, other: &CircleFunction) -> Result<CircleFunction> {
        if self.shape() != other.shape() {
            return Err(HardyError::ShapeMismatch {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        if let (Some(a), Some(b)) = (self.fourier_modes(), other.fourier_modes()) {
            let mut coeffs = a;
            for (n, m) in b {
                coeffs
                    .entry(n)
                    .and_modify(|acc| *acc = &*acc + &m)
                    .or_insert(m);
            }
            return CircleFunction::fourier_polynomial(coeffs);
        }
        match (self, other) {
            (CircleFunction::Sampled { grid, values: a }, CircleFunction::Sampled { grid: g2, values: b })
                if grid == g2 =>
            {
                CircleFunction::sampled(grid.clone(), a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => Err(HardyError::NotRepresentable(
                "sum of these function variants has no exact representation".into(),
            )),
        }
    }

    /// `f - g` on a grid, as a sampled function.
    pub fn sampled_difference(&self, other: &CircleFunction, grid: &CircleGrid) -> Result<CircleFunction> {
        let a = sample_values(self, grid)?;
        let b = sample_values(other, grid)?;
        if a[0].shape() != b[0].shape() {
            return Err(HardyError::ShapeMismatch {
                expected: a[0].shape(),
                found: b[0].shape(),
            });
        }
        CircleFunction::sampled(grid.clone(), a.iter().zip(&b).map(|(x, y)| x - y).collect())
    }
}

fn check_uniform_shape<'a>(mut values: impl Iterator<Item = &'a MatrixValue>) -> Result<()> {
    let Some(first) = values.next() else {
        return Err(HardyError::InvalidArgument("no values".into()));
    };
    let shape = first.shape();
    values.try_for_each(|v| v.check_shape(shape))
}

fn check_finite<'a>(mut values: impl Iterator<Item = &'a MatrixValue>) -> Result<()> {
    if values.all(MatrixValue::is_finite) {
        Ok(())
    } else {
        Err(HardyError::InvalidValue("non-finite matrix entry".into()))
    }
}

pub fn eval_circle(f: &CircleFunction, z: C64) -> Result<MatrixValue> {
    if !(z.norm() - 1.0).abs().le(&UNIT_TOL) {
        return Err(HardyError::Domain(format!("|z| = {} is not on the unit circle", z.norm())));
    }
    match f {
        CircleFunction::Sampled { grid, values } => grid
            .index_of(z, UNIT_TOL)
            .map(|j| values[j].clone())
            .ok_or_else(|| {
                HardyError::NotRepresentable(format!(
                    "z = {z} is not a node of the {}-point grid",
                    grid.n_points()
                ))
            }),
        CircleFunction::FourierPolynomial { coeffs } => {
            let (rows, cols) = f.shape();
            let mut acc = MatrixValue::zeros(rows, cols);
            for (&n, a) in coeffs {
                acc.axpy(unit_power(z, n), a);
            }
            Ok(acc)
        }
        CircleFunction::RuleBased(r) => Ok(r.eval(z)),
    }
}

/// `z^n` for unimodular `z`; negative powers use the conjugate.
pub(crate) fn unit_power(z: C64, n: i64) -> C64 {
    let base = if n < 0 { z.conj() } else { z };
    let mut e = n.unsigned_abs();
    let mut b = base;
    let mut acc = ONE;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b *= b;
        e >>= 1;
    }
    acc
}

/// Values of `f` at every node of `grid`.
pub fn sample_values(f: &CircleFunction, grid: &CircleGrid) -> Result<Vec<MatrixValue>> {
    if let CircleFunction::Sampled { grid: own, values } = f {
        if own == grid {
            return Ok(values.clone());
        }
    }
    grid.nodes().iter().map(|&z| eval_circle(f, z)).collect()
}

pub fn sample(f: &CircleFunction, grid: &CircleGrid) -> Result<CircleFunction> {
    let values = sample_values(f, grid)?;
    Ok(CircleFunction::Sampled {
        grid: grid.clone(),
        values,
    })
}

/// How many nodes the Poisson quadrature of an extension uses.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelGrid {
    /// Always the same grid (the boundary's own grid, for sampled data).
    Fixed(CircleGrid),
    /// A grid refined with the radius: see [`transforms::kernel_points`].
    Coupled,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DiskFunction {
    /// `h(zeta) = sum_{n >= 0} C_n zeta^n`.
    TaylorPolynomial { coeffs: Vec<MatrixValue> },
    /// The strong Poisson integral of a circle function.
    PoissonExtension {
        boundary: Box<CircleFunction>,
        kernel: KernelGrid,
    },
}

impl DiskFunction {
    pub fn taylor(coeffs: Vec<MatrixValue>) -> Result<Self> {
        check_uniform_shape(coeffs.iter())?;
        check_finite(coeffs.iter())?;
        Ok(DiskFunction::TaylorPolynomial { coeffs })
    }

    pub fn poisson_extension(boundary: CircleFunction) -> Self {
        let kernel = match &boundary {
            CircleFunction::Sampled { grid, .. } => KernelGrid::Fixed(grid.clone()),
            _ => KernelGrid::Coupled,
        };
        DiskFunction::PoissonExtension {
            boundary: Box::new(boundary),
            kernel,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        match self {
            DiskFunction::TaylorPolynomial { coeffs } => coeffs[0].shape(),
            DiskFunction::PoissonExtension { boundary, .. } => boundary.shape(),
        }
    }

    /// The circle function with the same coefficients: the radial boundary of a
    /// Taylor polynomial, or the stored boundary of an extension.
    pub fn boundary_function(&self) -> CircleFunction {
        match self {
            DiskFunction::TaylorPolynomial { coeffs } => CircleFunction::FourierPolynomial {
                coeffs: coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, c)| (n as i64, c.clone()))
                    .collect(),
            },
            DiskFunction::PoissonExtension { boundary, .. } => (**boundary).clone(),
        }
    }
}

pub fn eval_disk(h: &DiskFunction, zeta: C64) -> Result<MatrixValue> {
    if !(zeta.norm() < 1.0) {
        return Err(HardyError::Domain(format!("|zeta| = {} is not inside the unit disk", zeta.norm())));
    }
    match h {
        DiskFunction::TaylorPolynomial { coeffs } => {
            let mut acc = coeffs.last().expect("nonempty coefficients").clone();
            for c in coeffs.iter().rev().skip(1) {
                acc = &acc.scale(zeta) + c;
            }
            Ok(acc)
        }
        DiskFunction::PoissonExtension { boundary, kernel } => {
            let grid = match kernel {
                KernelGrid::Fixed(g) => g.clone(),
                KernelGrid::Coupled => CircleGrid::new(transforms::kernel_points(zeta.norm(), boundary)?)?,
            };
            transforms::strong_poisson_on(boundary, zeta, &grid)
        }
    }
}
