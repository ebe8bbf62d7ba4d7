//! Convergence reports for the isometry, contraction, transpose and roundtrip
//! identities, and the growth series behind the strict inclusions.
//!
//! A report stores its rows and the rule that judges them; the verdict is
//! always recomputed from those two, so a serialized report can be re-judged.

use serde::{Deserialize, Serialize};

use crate::boundary::{poisson_convergence_report, radial_boundary};
use crate::error::{HardyError, Result};
use crate::function::{sample, CircleFunction, DiskFunction};
use crate::gallery::{banach_transpose, make_arc_multiplier, make_evaluation_functional, make_rotation_symbol, separability_witness};
use crate::grid::{make_grid, CircleGrid, RadiusLadder};
use crate::matrix::C64;
use crate::norms::{
    hp_disk_norm, l2_strong_disk_norm, l2_strong_norm_exact, lp_sot_norm, lp_sot_norm_exact, op_norm, Exponent,
};
use crate::transforms::{analytic_defect, strong_poisson};

/// Largest negative-mode coefficient norm accepted as analytic.
pub const ANALYTIC_TOL: f64 = 1e-10;
/// Slack on `||(P f)_r|| <= ||f||` in every row.
pub const CONTRACTION_SLACK: f64 = 1e-8;
/// Deviations this small are treated as equal when checking a trend.
pub const TREND_FLOOR: f64 = 1e-12;
pub const ISOMETRY_TOL: f64 = 1e-3;
pub const ADJOINT_TOL: f64 = 1e-12;
pub const WITNESS_EPSILON: f64 = 1.4;
/// Negative modes checked before an isometry or roundtrip run.
const DEFECT_MODES: usize = 32;

type Column = (&'static str, fn(&ReportRow) -> f64);
type RowKey = dyn Fn(&ReportRow) -> f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub n_points: usize,
    pub ladder_k: usize,
}

impl Resolution {
    pub fn new(n_points: usize, ladder_k: usize) -> Self {
        Resolution { n_points, ladder_k }
    }
}

/// `(512, 11), (1024, 12), (2048, 13), (4096, 14)`.
pub fn default_resolutions() -> Vec<Resolution> {
    (0..4).map(|i| Resolution::new(512 << i, 11 + i)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub n_points: usize,
    pub ladder_k: usize,
    pub dim: usize,
    /// Radius or probe modulus the row refers to, when there is one.
    pub radius: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
}

impl ReportRow {
    fn new(label: impl Into<String>, res: Resolution, dim: usize, radius: Option<f64>, lhs: f64, rhs: f64) -> Self {
        let abs_dev = (lhs - rhs).abs();
        Self::with_dev(label, res, dim, radius, lhs, rhs, abs_dev)
    }

    fn with_dev(
        label: impl Into<String>,
        res: Resolution,
        dim: usize,
        radius: Option<f64>,
        lhs: f64,
        rhs: f64,
        abs_dev: f64,
    ) -> Self {
        let rel_dev = if rhs.abs() > 0.0 { abs_dev / rhs.abs() } else { abs_dev };
        ReportRow {
            label: label.into(),
            n_points: res.n_points,
            ladder_k: res.ladder_k,
            dim,
            radius,
            lhs: finite_or_max(lhs),
            rhs: finite_or_max(rhs),
            abs_dev: finite_or_max(abs_dev),
            rel_dev: finite_or_max(rel_dev),
        }
    }
}

/// Non-finite values are stored as `f64::MAX` so reports stay valid JSON and
/// still fail every tolerance.
fn finite_or_max(x: f64) -> f64 {
    if x.is_finite() {
        x
    } else {
        f64::MAX
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerdictRule {
    /// `lhs <= rhs + slack` in every row, `rel_dev <= tol` in the last row, and
    /// `rel_dev` nonincreasing (up to `trend_floor`) over the last three rows.
    Isometry { tol: f64, trend_floor: f64, slack: f64 },
    /// `lhs <= rhs + slack` in every row.
    Contraction { slack: f64 },
    /// `abs_dev <= tol` in every row.
    MaxAbsDev { tol: f64 },
    /// `abs_dev <= tol` and the extraction residual `lhs` within its tolerance `rhs`.
    Roundtrip { tol: f64 },
    /// Pointwise (`lhs`) and `L^p` (`rhs`) deviations strictly decreasing and `<= tol` at the top rung.
    /// Consecutive values both below `trend_floor` count as converged.
    PoissonConvergence { tol: f64, trend_floor: f64 },
    /// The three growth series of [`verify_containment_gaps`].
    ContainmentGaps { exact_tol: f64, strong_tol: f64, closed_form_tol: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub passed: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    pub rule: VerdictRule,
    pub rows: Vec<ReportRow>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn new(claim: impl Into<String>, rule: VerdictRule, rows: Vec<ReportRow>) -> Self {
        let verdict = judge(&rule, &rows);
        VerificationReport {
            claim: claim.into(),
            rule,
            rows,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed
    }

    /// The verdict implied by the stored rule and rows.
    pub fn recompute_verdict(&self) -> Verdict {
        judge(&self.rule, &self.rows)
    }
}

fn harmonic(d: usize) -> f64 {
    (1..=d).map(|n| 1.0 / n as f64).sum()
}

/// `sqrt((1 - r^(2d)) / (1 - r^2))`: the norm of `(1, r z, ..., (r z)^(d-1))`.
pub fn evaluation_row_norm(r: f64, d: usize) -> f64 {
    (0..d).map(|n| r.powi(2 * n as i32)).sum::<f64>().sqrt()
}

pub fn judge(rule: &VerdictRule, rows: &[ReportRow]) -> Verdict {
    let mut failures = Vec::new();
    if rows.is_empty() {
        failures.push("report has no rows".to_string());
    }
    match *rule {
        VerdictRule::Isometry { tol, trend_floor, slack } => {
            contraction_failures(rows, slack, &mut failures);
            if let Some(last) = rows.last() {
                if !(last.rel_dev <= tol) {
                    failures.push(format!("finest rel_dev {:e} exceeds {tol:e}", last.rel_dev));
                }
            }
            let tail = &rows[rows.len().saturating_sub(3)..];
            for w in tail.windows(2) {
                if !(w[1].rel_dev <= w[0].rel_dev + trend_floor) {
                    failures.push(format!(
                        "rel_dev increased from {:e} to {:e} at n_points = {}",
                        w[0].rel_dev, w[1].rel_dev, w[1].n_points
                    ));
                }
            }
        }
        VerdictRule::Contraction { slack } => contraction_failures(rows, slack, &mut failures),
        VerdictRule::MaxAbsDev { tol } => {
            for row in rows {
                if !(row.abs_dev <= tol) {
                    failures.push(format!("{}: deviation {:e} exceeds {tol:e}", row.label, row.abs_dev));
                }
            }
        }
        VerdictRule::Roundtrip { tol } => {
            for row in rows {
                if !(row.abs_dev <= tol) {
                    failures.push(format!("{}: roundtrip deviation {:e} exceeds {tol:e}", row.label, row.abs_dev));
                }
                if !(row.lhs <= row.rhs) {
                    failures.push(format!(
                        "{}: extraction residual {:e} exceeds {:e}",
                        row.label, row.lhs, row.rhs
                    ));
                }
            }
        }
        VerdictRule::PoissonConvergence { tol, trend_floor } => {
            let columns: [Column; 2] = [("pointwise", |r| r.lhs), ("L^p", |r| r.rhs)];
            for (name, col) in columns {
                for w in rows.windows(2) {
                    let at_floor = col(&w[0]) <= trend_floor && col(&w[1]) <= trend_floor;
                    if !(col(&w[1]) < col(&w[0]) || at_floor) {
                        failures.push(format!(
                            "{name} deviation not decreasing: {:e} -> {:e} at r = {:?}",
                            col(&w[0]),
                            col(&w[1]),
                            w[1].radius
                        ));
                    }
                }
                if let Some(last) = rows.last() {
                    if !(col(last) <= tol) {
                        failures.push(format!("top-rung {name} deviation {:e} exceeds {tol:e}", col(last)));
                    }
                }
            }
        }
        VerdictRule::ContainmentGaps {
            exact_tol,
            strong_tol,
            closed_form_tol,
        } => containment_failures(rows, exact_tol, strong_tol, closed_form_tol, &mut failures),
    }
    Verdict {
        passed: failures.is_empty(),
        failures,
    }
}

fn contraction_failures(rows: &[ReportRow], slack: f64, failures: &mut Vec<String>) {
    for row in rows {
        if !(row.lhs <= row.rhs + slack) {
            failures.push(format!(
                "{}: contraction violated, {:e} > {:e} + {slack:e}",
                row.label, row.lhs, row.rhs
            ));
        }
    }
}

fn containment_failures(
    rows: &[ReportRow],
    exact_tol: f64,
    strong_tol: f64,
    closed_form_tol: f64,
    failures: &mut Vec<String>,
) {
    let series = |label: &str| rows.iter().filter(|r| r.label == label).collect::<Vec<_>>();
    let witness = series("witness");
    let arc = series("arc_multiplier");
    let eval = series("evaluation_functional");
    for (name, s) in [("witness", &witness), ("arc_multiplier", &arc), ("evaluation_functional", &eval)] {
        if s.is_empty() {
            failures.push(format!("series {name} is missing"));
        }
    }
    for row in &witness {
        if row.lhs != row.rhs {
            failures.push(format!("witness at d = {}: net size {} != {}", row.dim, row.lhs, row.rhs));
        }
    }
    for row in &arc {
        let expected = 0.5 + harmonic(row.dim);
        let sot_sq = row.lhs * row.lhs;
        if !((sot_sq - expected).abs() <= exact_tol) {
            failures.push(format!("arc multiplier d = {}: sot norm^2 {sot_sq} != {expected}", row.dim));
        }
        if !((row.rhs - 1.0).abs() <= strong_tol) {
            failures.push(format!("arc multiplier d = {}: strong norm {} != 1", row.dim, row.rhs));
        }
    }
    for row in &eval {
        let r = row.radius.unwrap_or(0.0);
        let expected = evaluation_row_norm(r, row.dim);
        if !((row.lhs - expected).abs() <= closed_form_tol) {
            failures.push(format!("evaluation functional d = {}: disk norm {} != {expected}", row.dim, row.lhs));
        }
        if !((row.rhs - 1.0).abs() <= strong_tol) {
            failures.push(format!("evaluation functional d = {}: strong norm {} != 1", row.dim, row.rhs));
        }
    }
    // The witness gap is the net size itself; the norm gaps are ratios.
    let witness_gap = |r: &ReportRow| r.lhs;
    let norm_gap = |r: &ReportRow| r.lhs / r.rhs;
    let all: [(&str, &Vec<&ReportRow>, &RowKey); 3] = [
        ("witness", &witness, &witness_gap),
        ("arc_multiplier", &arc, &norm_gap),
        ("evaluation_functional", &eval, &norm_gap),
    ];
    for (name, s, gap) in all {
        for w in s.windows(2) {
            if !(gap(w[1]) > gap(w[0])) {
                failures.push(format!("{name}: gap does not grow from d = {} to d = {}", w[0].dim, w[1].dim));
            }
        }
    }
}

fn require_analytic(f: &CircleFunction, n_points: usize) -> Result<()> {
    let grid = make_grid(n_points.max(2 * DEFECT_MODES + 2))?;
    let report = analytic_defect(f, DEFECT_MODES, &grid)?;
    if !report.is_analytic(ANALYTIC_TOL) {
        return Err(HardyError::Precondition(format!(
            "function is not analytic: negative-mode defect {:e} exceeds {ANALYTIC_TOL:e}",
            report.max_negative_defect
        )));
    }
    Ok(())
}

/// `||P_s f||_(H^p(D))` against `||f||_(L^p_sot)` across resolutions.
pub fn verify_isometry(f: &CircleFunction, p: Exponent, resolutions: &[Resolution]) -> Result<VerificationReport> {
    if resolutions.is_empty() {
        return Err(HardyError::InvalidArgument("no resolutions given".into()));
    }
    let finest = resolutions.iter().map(|r| r.n_points).max().unwrap_or(2);
    require_analytic(f, finest)?;
    let h = DiskFunction::poisson_extension(f.clone());
    let dim = f.shape().1;
    let rows = resolutions
        .iter()
        .map(|&res| {
            let grid = make_grid(res.n_points)?;
            let ladder = RadiusLadder::new(res.ladder_k)?;
            let rhs = lp_sot_norm(f, p, &grid)?;
            let lhs = hp_disk_norm(&h, p, &ladder, &grid)?.final_value;
            Ok(ReportRow::new(
                format!("n={} K={}", res.n_points, res.ladder_k),
                res,
                dim,
                Some(ladder.top()),
                lhs,
                rhs,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::new(
        "isometry",
        VerdictRule::Isometry {
            tol: ISOMETRY_TOL,
            trend_floor: TREND_FLOOR,
            slack: CONTRACTION_SLACK,
        },
        rows,
    ))
}

/// `||(P f)_r||_(L^p_sot) <= ||f||_(L^p_sot)` at every ladder radius, for any `f`.
pub fn verify_contraction_nonanalytic(
    f: &CircleFunction,
    p: Exponent,
    grid: &CircleGrid,
    ladder: &RadiusLadder,
) -> Result<VerificationReport> {
    let h = DiskFunction::poisson_extension(f.clone());
    let rhs = lp_sot_norm(f, p, grid)?;
    let profile = hp_disk_norm(&h, p, ladder, grid)?;
    let res = Resolution::new(grid.n_points(), ladder.levels());
    let dim = f.shape().1;
    let rows = profile
        .per_radius
        .iter()
        .map(|&(r, lhs)| ReportRow::new(format!("r={r}"), res, dim, Some(r), lhs, rhs))
        .collect();
    Ok(VerificationReport::new(
        "contraction",
        VerdictRule::Contraction {
            slack: CONTRACTION_SLACK,
        },
        rows,
    ))
}

/// Five probes spread over the disk, including the origin.
pub fn default_probes() -> Vec<C64> {
    vec![
        C64::new(0.0, 0.0),
        C64::new(0.5, 0.0),
        C64::new(0.3, 0.4),
        C64::new(0.0, -0.7),
        C64::from_polar(0.9, 2.0),
    ]
}

/// `P_s[f^T](zeta)` against `P_s[f](zeta)^T`.
pub fn verify_adjoint_identity(f: &CircleFunction, probe_points: &[C64]) -> Result<VerificationReport> {
    if probe_points.is_empty() {
        return Err(HardyError::InvalidArgument("no probe points".into()));
    }
    let ft = banach_transpose(f);
    let dim = f.shape().1;
    let rows = probe_points
        .iter()
        .map(|&zeta| {
            let lhs_m = strong_poisson(&ft, zeta)?;
            let rhs_m = strong_poisson(f, zeta)?.transpose();
            let dev = op_norm(&(&lhs_m - &rhs_m))?;
            let n = crate::transforms::kernel_points(zeta.norm(), f)?;
            Ok(ReportRow::with_dev(
                format!("zeta=({}, {})", zeta.re, zeta.im),
                Resolution::new(n, 0),
                dim,
                Some(zeta.norm()),
                op_norm(&lhs_m)?,
                op_norm(&rhs_m)?,
                dev,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::new(
        "adjoint",
        VerdictRule::MaxAbsDev { tol: ADJOINT_TOL },
        rows,
    ))
}

/// `f -> P_s f -> radial boundary`, compared with `f` in `L^2_sot`.
pub fn verify_boundary_roundtrip(
    f: &CircleFunction,
    grid: &CircleGrid,
    ladder: &RadiusLadder,
    tol: f64,
) -> Result<VerificationReport> {
    require_analytic(f, grid.n_points())?;
    let h = DiskFunction::poisson_extension(f.clone());
    let result = radial_boundary(&h, grid, ladder, tol)?;
    let diff = result.boundary.sampled_difference(f, grid)?;
    let dev = lp_sot_norm(&diff, Exponent::TWO, grid)?;
    let row = ReportRow::with_dev(
        "roundtrip",
        Resolution::new(grid.n_points(), ladder.levels()),
        result.basis_dimension,
        Some(ladder.top()),
        result.max_residual(),
        tol,
        dev,
    );
    Ok(VerificationReport::new("roundtrip", VerdictRule::Roundtrip { tol }, vec![row]))
}

/// Deviation of `(P f)_r` from `f` along the ladder.
pub fn verify_poisson_convergence(
    f: &CircleFunction,
    p: Exponent,
    grid: &CircleGrid,
    ladder: &RadiusLadder,
    tol: f64,
) -> Result<VerificationReport> {
    let table = poisson_convergence_report(f, p, ladder, grid)?;
    let res = Resolution::new(grid.n_points(), ladder.levels());
    let dim = f.shape().1;
    let rows = table
        .iter()
        .map(|row| {
            let lp = row.lp_deviation.unwrap_or(row.max_pointwise_deviation);
            ReportRow::with_dev(
                format!("r={}", row.r),
                res,
                dim,
                Some(row.r),
                row.max_pointwise_deviation,
                lp,
                row.max_pointwise_deviation,
            )
        })
        .collect();
    Ok(VerificationReport::new(
        "poisson_convergence",
        VerdictRule::PoissonConvergence {
            tol,
            trend_floor: TREND_FLOOR,
        },
        rows,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContainmentConfig {
    pub ladder_k: usize,
    pub epsilon: f64,
}

impl Default for ContainmentConfig {
    fn default() -> Self {
        ContainmentConfig {
            ladder_k: 14,
            epsilon: WITNESS_EPSILON,
        }
    }
}

/// Growth series for the three strict inclusions, one row per series per `d`:
///
/// * `witness`: greedy net size of the rotation symbol on `d` nodes (`lhs`)
///   against `d` (`rhs`);
/// * `arc_multiplier`: exact `L^2_sot` norm (`lhs`) against the exact strong
///   `L^2` norm (`rhs`);
/// * `evaluation_functional`: `H^2(D)` disk norm at the top rung (`lhs`)
///   against the strong disk norm (`rhs`).
pub fn verify_containment_gaps(dims: &[usize], config: ContainmentConfig) -> Result<VerificationReport> {
    if dims.is_empty() {
        return Err(HardyError::InvalidArgument("no dimensions given".into()));
    }
    if dims.windows(2).any(|w| w[1] <= w[0]) || dims[0] == 0 {
        return Err(HardyError::InvalidArgument("dimensions must be positive and strictly increasing".into()));
    }
    let ladder = RadiusLadder::new(config.ladder_k)?;
    let mut rows = Vec::new();
    for &d in dims {
        let grid = make_grid(d)?;
        let sampled = sample(&make_rotation_symbol(d)?, &grid)?;
        let net = separability_witness(&sampled, config.epsilon)?;
        rows.push(ReportRow::new("witness", Resolution::new(d, 0), d, None, net as f64, d as f64));
    }
    for &d in dims {
        let f = make_arc_multiplier(d)?;
        let sot = lp_sot_norm_exact(&f, Exponent::TWO)?;
        let strong = l2_strong_norm_exact(&f)?;
        rows.push(ReportRow::new("arc_multiplier", Resolution::new(0, 0), d, None, sot, strong));
    }
    for &d in dims {
        let h = make_evaluation_functional(d)?;
        let grid = make_grid((4 * d).next_power_of_two().max(16))?;
        let disk = hp_disk_norm(&h, Exponent::TWO, &ladder, &grid)?.final_value;
        let strong = l2_strong_disk_norm(&h, &ladder, &grid)?.final_value;
        rows.push(ReportRow::new(
            "evaluation_functional",
            Resolution::new(grid.n_points(), ladder.levels()),
            d,
            Some(ladder.top()),
            disk,
            strong,
        ));
    }
    Ok(VerificationReport::new(
        "containment",
        VerdictRule::ContainmentGaps {
            exact_tol: 1e-8,
            strong_tol: 1e-8,
            closed_form_tol: 1e-10,
        },
        rows,
    ))
}
