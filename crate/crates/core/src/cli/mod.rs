//! Command-line front end: reads a spec, dispatches one command, renders the
//! artifact and decides the exit status.

pub mod output;
pub mod spec;

use std::fmt;
use std::path::PathBuf;

use serde_json::{json, Value};

use crate::boundary::{radial_boundary, U_PROXY_RUNGS};
use crate::error::{HardyError, Result};
use crate::function::{eval_disk, sample_values, CircleFunction};
use crate::gallery::{separability_witness, GalleryObject};
use crate::grid::{make_grid, CircleGrid, RadiusLadder};
use crate::matrix::{MatrixValue, C64};
use crate::norms::{
    hp_disk_norm, l2_strong_disk_norm, l2_strong_norm, l2_strong_norm_exact, lp_sot_norm, lp_sot_norm_exact,
    lp_strong_norm_estimate, op_norm, pointwise_norm, Exponent,
};
use crate::transforms::{analytic_defect, fourier_coefficient, strong_poisson};
use crate::verify::{
    default_probes, default_resolutions, verify_adjoint_identity, verify_boundary_roundtrip,
    verify_containment_gaps, verify_contraction_nonanalytic, verify_isometry, verify_poisson_convergence,
    ContainmentConfig, Resolution, VerificationReport, WITNESS_EPSILON,
};

pub use output::{write_atomic, Artifact, Format, Table};
pub use spec::{circle_json, disk_json, parse_spec, ParsedSpec};

use output::{num, opt_num};

pub const DEFAULT_GRID: usize = 256;
pub const DEFAULT_LADDER: usize = 12;
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-6;
pub const DEFAULT_CONVERGENCE_TOL: f64 = 1e-3;
pub const DEFAULT_CONVERGENCE_LADDER: usize = 14;
pub const VERIFY_GRID: usize = 1024;
/// Random probes added to the canonical basis for strong `L^p` estimates.
pub const STRONG_PROBES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Fourier,
    Poisson,
    Norm,
    Boundary,
    Gallery,
    Verify,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Fourier => "fourier",
            Command::Poisson => "poisson",
            Command::Norm => "norm",
            Command::Boundary => "boundary",
            Command::Gallery => "gallery",
            Command::Verify => "verify",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    Isometry,
    Contraction,
    Adjoint,
    Roundtrip,
    Containment,
    PoissonConvergence,
}

impl Claim {
    pub fn as_str(&self) -> &'static str {
        match self {
            Claim::Isometry => "isometry",
            Claim::Contraction => "contraction",
            Claim::Adjoint => "adjoint",
            Claim::Roundtrip => "roundtrip",
            Claim::Containment => "containment",
            Claim::PoissonConvergence => "poisson_convergence",
        }
    }

    /// Roles of the `lhs` and `rhs` report columns.
    fn roles(&self) -> (&'static str, &'static str) {
        match self {
            Claim::Isometry => ("H^p(D) norm at top radius", "L^p_sot norm"),
            Claim::Contraction => ("L^p_sot norm of radial section", "L^p_sot norm"),
            Claim::Adjoint => ("norm of P_s[f^T]", "norm of P_s[f]^T"),
            Claim::Roundtrip => ("max extraction residual", "extraction tolerance"),
            Claim::Containment => ("larger norm or net size", "smaller norm or dimension"),
            Claim::PoissonConvergence => ("max pointwise deviation", "L^p_sot deviation"),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Everything one invocation needs. Unset options take per-command defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub spec_path: PathBuf,
    pub grid_n: Option<usize>,
    pub ladder_k: Option<usize>,
    pub p: Exponent,
    pub out_path: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub tol: Option<f64>,
    pub claim: Option<Claim>,
    pub zeta: Option<C64>,
}

impl RunConfig {
    pub fn new(command: Command, spec_path: impl Into<PathBuf>) -> Self {
        RunConfig {
            command,
            spec_path: spec_path.into(),
            grid_n: None,
            ladder_k: None,
            p: Exponent::TWO,
            out_path: None,
            format: Format::Json,
            seed: 0,
            tol: None,
            claim: None,
            zeta: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(n) = self.grid_n {
            if n < 2 {
                return Err(HardyError::Validation(format!("--grid must be at least 2, got {n}")));
            }
        }
        if self.ladder_k == Some(0) {
            return Err(HardyError::Validation("--ladder must be at least 1".into()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(HardyError::Validation(format!("--tol must be positive, got {t}")));
            }
        }
        if let Some(z) = self.zeta {
            if !(z.norm() < 1.0) {
                return Err(HardyError::Validation(format!(
                    "--zeta must lie in the open unit disk, |zeta| = {}",
                    z.norm()
                )));
            }
        }
        match self.command {
            Command::Poisson if self.zeta.is_none() => {
                Err(HardyError::Validation("poisson needs --zeta RE IM".into()))
            }
            Command::Verify if self.claim.is_none() => Err(HardyError::Validation("verify needs --claim".into())),
            _ => Ok(()),
        }
    }

    fn grid_or(&self, default: usize) -> Result<CircleGrid> {
        make_grid(self.grid_n.unwrap_or(default))
    }

    fn ladder_or(&self, default: usize) -> Result<RadiusLadder> {
        RadiusLadder::new(self.ladder_k.unwrap_or(default))
    }
}

/// Result of a run before anything is written.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub artifact: Artifact,
    pub summary: String,
    /// False when a verification (or a boundary extraction) failed.
    pub passed: bool,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Reads the spec and runs the command; no output is written.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    config.validate()?;
    let bytes = std::fs::read(&config.spec_path)
        .map_err(|e| HardyError::Io(format!("{}: {e}", config.spec_path.display())))?;
    run_spec(config, &parse_spec(&bytes, config.seed)?)
}

pub fn run_spec(config: &RunConfig, spec: &ParsedSpec) -> Result<RunOutcome> {
    config.validate()?;
    match config.command {
        Command::Fourier => run_fourier(config, spec),
        Command::Poisson => run_poisson(config, spec),
        Command::Norm => run_norm(config, spec),
        Command::Boundary => run_boundary(config, spec),
        Command::Gallery => run_gallery(config, spec),
        Command::Verify => run_verify(config, spec),
    }
}

/// Runs, writes the artifact and prints the summary; returns the exit status.
pub fn execute(config: &RunConfig) -> i32 {
    let outcome = match run(config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let bytes = match outcome.artifact.render(config.format) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match &config.out_path {
        Some(path) => {
            if let Err(e) = write_atomic(path, &bytes) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_USAGE;
            }
            println!("{} -> {}", outcome.summary, path.display());
        }
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout.write_all(&bytes).and_then(|_| stdout.flush()) {
                eprintln!("error: writing artifact: {e}");
                return EXIT_USAGE;
            }
            eprintln!("{}", outcome.summary);
        }
    }
    if outcome.passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

/// Sampled functions default to their own grid; everything else to `default`.
fn grid_for(config: &RunConfig, f: &CircleFunction, default: usize) -> Result<CircleGrid> {
    match (config.grid_n, f) {
        (None, CircleFunction::Sampled { grid, .. }) => Ok(grid.clone()),
        _ => config.grid_or(default),
    }
}

fn circle_of(spec: &ParsedSpec) -> Result<CircleFunction> {
    Ok(spec.build()?.circle())
}

fn theta(z: C64) -> f64 {
    z.arg().rem_euclid(std::f64::consts::TAU)
}

fn push_matrix_rows(table: &mut Table, prefix: &[String], m: &MatrixValue) {
    for (i, row) in m.to_rows().into_iter().enumerate() {
        for (j, c) in row.into_iter().enumerate() {
            let mut r = prefix.to_vec();
            r.extend([i.to_string(), j.to_string(), num(c.re), num(c.im)]);
            table.push(r);
        }
    }
}

fn run_fourier(config: &RunConfig, spec: &ParsedSpec) -> Result<RunOutcome> {
    let f = circle_of(spec)?;
    let grid = grid_for(config, &f, DEFAULT_GRID)?;
    let n = grid.n_points();
    let max_mode = match f.degree() {
        Some(m) => {
            if 4 * m as usize + 4 > n {
                return Err(HardyError::Validation(format!(
                    "grid of {n} nodes is too small for degree {m}; need at least {}",
                    4 * m + 4
                )));
            }
            m as i64
        }
        None => (n.saturating_sub(4) / 4) as i64,
    };
    let defect = analytic_defect(&f, max_mode as usize, &grid)?;
    let mut table = Table::new(&[("n", "mode"), ("row", "index"), ("col", "index"), ("re", "real part"), ("im", "imaginary part")]);
    let mut coefficients = Vec::new();
    let mut largest = 0.0f64;
    for mode in -max_mode..=max_mode {
        let a = fourier_coefficient(&f, mode, &grid)?;
        let norm = op_norm(&a)?;
        largest = largest.max(norm);
        push_matrix_rows(&mut table, &[mode.to_string()], &a);
        coefficients.push(json!({ "n": mode, "op_norm": norm, "value": spec::matrix_json(&a) }));
    }
    let json = json!({
        "command": "fourier",
        "grid": n,
        "shape": f.shape(),
        "max_mode": max_mode,
        "analytic_defect": defect,
        "coefficients": coefficients,
    });
    Ok(RunOutcome {
        artifact: Artifact { json, table },
        summary: format!(
            "fourier: {} modes on {n} nodes, largest coefficient norm {largest:e}, negative-mode defect {:e}",
            2 * max_mode + 1,
            defect.max_negative_defect
        ),
        passed: true,
    })
}

fn run_poisson(config: &RunConfig, spec: &ParsedSpec) -> Result<RunOutcome> {
    let zeta = config.zeta.expect("validated");
    let value = match spec.build()? {
        GalleryObject::Circle(f) => strong_poisson(&f, zeta)?,
        GalleryObject::Disk(h) => eval_disk(&h, zeta)?,
    };
    let norm = op_norm(&value)?;
    let mut table = Table::new(&[("row", "index"), ("col", "index"), ("re", "real part"), ("im", "imaginary part")]);
    push_matrix_rows(&mut table, &[], &value);
    let json = json!({
        "command": "poisson",
        "zeta": spec::complex_json(zeta),
        "shape": value.shape(),
        "op_norm": norm,
        "value": spec::matrix_json(&value),
    });
    Ok(RunOutcome {
        artifact: Artifact { json, table },
        summary: format!("poisson: value at ({}, {}) with operator norm {norm}", zeta.re, zeta.im),
        passed: true,
    })
}

struct Quantity {
    name: &'static str,
    radius: Option<f64>,
    value: f64,
}

fn run_norm(config: &RunConfig, spec: &ParsedSpec) -> Result<RunOutcome> {
    let p = config.p;
    let object = spec.build()?;
    let grid = grid_for(config, &object.circle(), DEFAULT_GRID)?;
    let mut quantities = Vec::new();
    let exact;
    match object {
        GalleryObject::Circle(f) => {
            exact = f.arc_pieces().is_some();
            let (sot, strong) = if exact {
                (lp_sot_norm_exact(&f, p)?, l2_strong_norm_exact(&f)?)
            } else {
                (lp_sot_norm(&f, p, &grid)?, l2_strong_norm(&f, &grid)?)
            };
            quantities.push(Quantity { name: "sot_norm", radius: None, value: sot });
            if let Exponent::Finite(q) = p {
                quantities.push(Quantity { name: "sot_norm_pow_p", radius: None, value: sot.powf(q) });
            }
            quantities.push(Quantity { name: "strong_l2_norm", radius: None, value: strong });
            if p != Exponent::TWO {
                let est = lp_strong_norm_estimate(&f, p, STRONG_PROBES, config.seed, &grid)?;
                quantities.push(Quantity { name: "strong_lp_lower_bound", radius: None, value: est });
            }
            let pointwise = pointwise_norm(&f, &grid)?;
            let sup = pointwise.values.iter().copied().fold(0.0, f64::max);
            quantities.push(Quantity { name: "sup_pointwise_norm", radius: None, value: sup });
        }
        GalleryObject::Disk(h) => {
            exact = false;
            let ladder = config.ladder_or(DEFAULT_LADDER)?;
            let profile = hp_disk_norm(&h, p, &ladder, &grid)?;
            for &(r, v) in &profile.per_radius {
                quantities.push(Quantity { name: "hp_disk_norm", radius: Some(r), value: v });
            }
            quantities.push(Quantity { name: "hp_disk_norm_final", radius: None, value: profile.final_value });
            if p == Exponent::TWO {
                let strong = l2_strong_disk_norm(&h, &ladder, &grid)?;
                for &(r, v) in &strong.per_radius {
                    quantities.push(Quantity { name: "strong_disk_norm", radius: Some(r), value: v });
                }
                quantities.push(Quantity { name: "strong_disk_norm_final", radius: None, value: strong.final_value });
            }
        }
    }
    let mut table = Table::new(&[("quantity", "name"), ("radius", "r (blank on the circle)"), ("value", "norm")]);
    for q in &quantities {
        table.push(vec![q.name.to_string(), opt_num(q.radius), num(q.value)]);
    }
    let json = json!({
        "command": "norm",
        "p": p,
        "grid": grid.n_points(),
        "exact_arcs": exact,
        "quantities": quantities
            .iter()
            .map(|q| json!({ "name": q.name, "radius": q.radius, "value": q.value }))
            .collect::<Vec<_>>(),
    });
    let headline = quantities
        .iter()
        .find(|q| q.name == "sot_norm" || q.name == "hp_disk_norm_final")
        .expect("one headline quantity");
    Ok(RunOutcome {
        artifact: Artifact { json, table },
        summary: format!("norm: {} (p = {p}) = {}", headline.name, headline.value),
        passed: true,
    })
}

fn run_boundary(config: &RunConfig, spec: &ParsedSpec) -> Result<RunOutcome> {
    let h = spec.build()?.disk();
    let grid = config.grid_or(DEFAULT_GRID)?;
    let ladder = config.ladder_or(DEFAULT_LADDER)?;
    let tol = config.tol.unwrap_or(DEFAULT_BOUNDARY_TOL);
    let result = radial_boundary(&h, &grid, &ladder, tol)?;
    let mut table = Table::new(&[
        ("j", "node index"),
        ("theta", "angle in [0, 2pi)"),
        ("residual", "last Richardson increment"),
        ("u_proxy", "largest norm over top rungs"),
        ("norm", "operator norm of boundary value"),
    ]);
    let mut nodes = Vec::new();
    for (j, v) in result.boundary_values().iter().enumerate() {
        let t = theta(grid.node(j));
        let norm = op_norm(v)?;
        table.push(vec![
            j.to_string(),
            num(t),
            num(result.per_node_residual[j]),
            num(result.u_proxy[j]),
            num(norm),
        ]);
        nodes.push(json!({
            "j": j,
            "theta": t,
            "residual": result.per_node_residual[j],
            "u_proxy": result.u_proxy[j],
            "value": spec::matrix_json(v),
        }));
    }
    let failed = result.failed_nodes();
    let json = json!({
        "command": "boundary",
        "grid": grid.n_points(),
        "ladder_k": ladder.levels(),
        "tol": tol,
        "basis_dimension": result.basis_dimension,
        "converged": result.converged(),
        "max_residual": result.max_residual(),
        "failed_nodes": failed,
        "u_proxy_rule": format!("heuristic: largest norm over the top {U_PROXY_RUNGS} rungs"),
        "nodes": nodes,
    });
    Ok(RunOutcome {
        artifact: Artifact { json, table },
        summary: format!(
            "boundary: {} ({} of {} nodes above tol {tol:e}, max residual {:e})",
            if result.converged() { "converged" } else { "NOT converged" },
            failed.len(),
            grid.n_points(),
            result.max_residual()
        ),
        passed: result.converged(),
    })
}

fn run_gallery(config: &RunConfig, spec: &ParsedSpec) -> Result<RunOutcome> {
    let object = spec.build()?;
    let boundary = object.circle();
    let grid = grid_for(config, &boundary, DEFAULT_GRID)?;
    let epsilon = config.tol.unwrap_or(WITNESS_EPSILON);
    let (kind, function, shape) = match &object {
        GalleryObject::Circle(f) => ("circle", circle_json(f), f.shape()),
        GalleryObject::Disk(h) => ("disk", disk_json(h), h.shape()),
    };
    let values = sample_values(&boundary, &grid)?;
    let witness = separability_witness(&CircleFunction::sampled(grid.clone(), values.clone())?, epsilon)?;
    let mut table = Table::new(&[("j", "node index"), ("theta", "angle in [0, 2pi)"), ("norm", "operator norm of boundary value")]);
    let mut samples = Vec::new();
    for (j, v) in values.iter().enumerate() {
        let t = theta(grid.node(j));
        let norm = op_norm(v)?;
        table.push(vec![j.to_string(), num(t), num(norm)]);
        samples.push(json!({ "j": j, "theta": t, "op_norm": norm }));
    }
    let json = json!({
        "command": "gallery",
        "kind": kind,
        "shape": shape,
        "degree": boundary.degree(),
        "function": function,
        "grid": grid.n_points(),
        "witness": { "epsilon": epsilon, "net_size": witness },
        "samples": samples,
    });
    Ok(RunOutcome {
        artifact: Artifact { json, table },
        summary: format!(
            "gallery: {kind} function of shape {}x{}, witness net {witness} at eps {epsilon} on {} nodes",
            shape.0,
            shape.1,
            grid.n_points()
        ),
        passed: true,
    })
}

/// Four resolutions halving down from `(grid, ladder)`, or the defaults.
fn isometry_resolutions(config: &RunConfig) -> Result<Vec<Resolution>> {
    if config.grid_n.is_none() && config.ladder_k.is_none() {
        return Ok(default_resolutions());
    }
    let top = *default_resolutions().last().expect("nonempty");
    let n = config.grid_n.unwrap_or(top.n_points);
    let k = config.ladder_k.unwrap_or(top.ladder_k);
    if n < 16 || k < 6 {
        return Err(HardyError::Validation(format!(
            "isometry needs --grid >= 16 and --ladder >= 6 to form four resolutions, got {n} and {k}"
        )));
    }
    Ok((0..4).rev().map(|i| Resolution::new(n >> i, k - i)).collect())
}

/// Dimensions `1, 2, 4, ...` below `d`, then `d`.
fn containment_dims(d: usize) -> Vec<usize> {
    let mut dims: Vec<usize> = std::iter::successors(Some(1usize), |x| x.checked_mul(2))
        .take_while(|&x| x < d)
        .collect();
    dims.push(d);
    dims
}

fn run_verify(config: &RunConfig, spec: &ParsedSpec) -> Result<RunOutcome> {
    let claim = config.claim.expect("validated");
    let report = match claim {
        Claim::Isometry => verify_isometry(&circle_of(spec)?, config.p, &isometry_resolutions(config)?)?,
        Claim::Contraction => verify_contraction_nonanalytic(
            &circle_of(spec)?,
            config.p,
            &config.grid_or(VERIFY_GRID)?,
            &config.ladder_or(DEFAULT_LADDER)?,
        )?,
        Claim::Adjoint => {
            let probes = match config.zeta {
                Some(z) => vec![z],
                None => default_probes(),
            };
            verify_adjoint_identity(&circle_of(spec)?, &probes)?
        }
        Claim::Roundtrip => verify_boundary_roundtrip(
            &circle_of(spec)?,
            &config.grid_or(VERIFY_GRID)?,
            &config.ladder_or(DEFAULT_LADDER)?,
            config.tol.unwrap_or(DEFAULT_BOUNDARY_TOL),
        )?,
        Claim::Containment => verify_containment_gaps(
            &containment_dims(spec.dim()),
            ContainmentConfig {
                ladder_k: config.ladder_k.unwrap_or(DEFAULT_CONVERGENCE_LADDER),
                ..ContainmentConfig::default()
            },
        )?,
        Claim::PoissonConvergence => verify_poisson_convergence(
            &circle_of(spec)?,
            config.p,
            &config.grid_or(DEFAULT_GRID)?,
            &config.ladder_or(DEFAULT_CONVERGENCE_LADDER)?,
            config.tol.unwrap_or(DEFAULT_CONVERGENCE_TOL),
        )?,
    };
    Ok(verify_outcome(claim, report))
}

fn verify_outcome(claim: Claim, report: VerificationReport) -> RunOutcome {
    let (lhs_role, rhs_role) = claim.roles();
    let mut table = Table::new(&[
        ("label", "row"),
        ("n_points", "grid nodes"),
        ("ladder_k", "ladder levels"),
        ("dim", "dimension"),
        ("radius", "r or |zeta| (blank if none)"),
        ("lhs", lhs_role),
        ("rhs", rhs_role),
        ("abs_dev", "absolute deviation"),
        ("rel_dev", "relative deviation"),
    ]);
    for row in &report.rows {
        table.push(vec![
            row.label.clone(),
            row.n_points.to_string(),
            row.ladder_k.to_string(),
            row.dim.to_string(),
            opt_num(row.radius),
            num(row.lhs),
            num(row.rhs),
            num(row.abs_dev),
            num(row.rel_dev),
        ]);
    }
    let passed = report.passed();
    let worst = report.rows.iter().map(|r| r.rel_dev).fold(0.0, f64::max);
    let summary = match report.verdict.failures.first() {
        None => format!("verify {claim}: PASS ({} rows, max rel_dev {worst:e})", report.rows.len()),
        Some(first) => format!(
            "verify {claim}: FAIL ({} failed checks over {} rows; first: {first})",
            report.verdict.failures.len(),
            report.rows.len()
        ),
    };
    let json: Value = serde_json::to_value(&report).expect("reports serialize");
    RunOutcome {
        artifact: Artifact { json, table },
        summary,
        passed,
    }
}
