//! Uniform quadrature on the unit circle and the dyadic radius ladder.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{HardyError, Result};
use crate::matrix::C64;

/// The `n`-th roots of unity with uniform weights `1/n`.
///
/// Trapezoidal quadrature on these nodes integrates every trigonometric
/// polynomial of degree `< n` exactly against normalized arc length.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleGrid {
    nodes: Vec<C64>,
}

impl CircleGrid {
    pub fn new(n_points: usize) -> Result<Self> {
        if n_points == 0 {
            return Err(HardyError::InvalidArgument("grid needs at least one node".into()));
        }
        let nodes = (0..n_points).map(|j| root_of_unity(j, n_points)).collect();
        Ok(CircleGrid { nodes })
    }

    pub fn n_points(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn node(&self, j: usize) -> C64 {
        self.nodes[j % self.nodes.len()]
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.nodes.len() as f64
    }

    pub fn weights(&self) -> Vec<f64> {
        vec![self.weight(); self.nodes.len()]
    }

    /// `z_j^k` for any integer power, computed from the index so that it stays
    /// exactly on the grid.
    pub fn node_power(&self, j: usize, k: i64) -> C64 {
        let n = self.nodes.len() as i128;
        let idx = ((j as i128) * (k as i128)).rem_euclid(n);
        self.nodes[idx as usize]
    }

    /// Index of the node equal to `z` (within `tol`), if any.
    pub fn index_of(&self, z: C64, tol: f64) -> Option<usize> {
        let n = self.nodes.len();
        let turns = z.arg() / (2.0 * PI);
        let j = (turns * n as f64).round().rem_euclid(n as f64) as usize % n;
        ((self.nodes[j] - z).norm() <= tol).then_some(j)
    }
}

pub fn make_grid(n_points: usize) -> Result<CircleGrid> {
    CircleGrid::new(n_points)
}

/// `exp(2 pi i j / n)`, exact at quarter turns.
fn root_of_unity(j: usize, n: usize) -> C64 {
    let j = j % n;
    if (4 * j).is_multiple_of(n) {
        return match 4 * j / n {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    let theta = 2.0 * PI * j as f64 / n as f64;
    C64::new(theta.cos(), theta.sin())
}

/// Radii `r_k = 1 - 2^-k`, `k = 1..=levels`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusLadder {
    levels: usize,
}

impl RadiusLadder {
    pub fn new(levels: usize) -> Result<Self> {
        if levels == 0 {
            return Err(HardyError::InvalidArgument("radius ladder needs at least one level".into()));
        }
        if levels > 52 {
            return Err(HardyError::InvalidArgument(format!(
                "radius ladder with {levels} levels exceeds double precision"
            )));
        }
        Ok(RadiusLadder { levels })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn radius(&self, k: usize) -> f64 {
        1.0 - (-(k as f64)).exp2()
    }

    pub fn radii(&self) -> Vec<f64> {
        (1..=self.levels).map(|k| self.radius(k)).collect()
    }

    pub fn top(&self) -> f64 {
        self.radius(self.levels)
    }
}
