//! Evaluates the reciprocal-eigenvalue inequality
//! `(1/lambda_1 + 1/mu_1 + 1/mu_2) / A >= 3 / (4 pi d)` and its consequence
//! `lambda_1 mu_1 A <= d (4 pi / 3) (2 lambda_1 + mu_1)` on one surface with
//! a map to the disc, together with the transplanted trial functions that
//! prove it.

use std::f64::consts::PI;
use std::io;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::balance::{balance_field, BalanceResult, GravityField, BALANCE_TOLERANCE};
use crate::error::{Error, Result};
use crate::fem::{solve_dirichlet, solve_neumann, FemOperators, MassKind, SolverSettings};
use crate::json::format_f64;
use crate::mesh::SurfaceMesh;
use crate::transplant::{transplant_coords, MapSample};

/// Relative roundoff allowance when checking that the second inequality
/// follows from the first.
pub const IMPLICATION_ROUNDOFF: f64 = 1e-12;

/// Energy of each hemisphere coordinate, `int_H |grad x_i|^2`.
pub const HEMISPHERE_ENERGY: f64 = 4.0 * PI / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshResolution {
    pub vertices: usize,
    pub triangles: usize,
    pub max_edge_length: f64,
}

impl MeshResolution {
    pub fn of(mesh: &SurfaceMesh) -> Self {
        MeshResolution {
            vertices: mesh.vertex_count(),
            triangles: mesh.triangles().len(),
            max_edge_length: mesh.edges().map(|(_, l)| l).fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SolverResiduals {
    pub dirichlet: Vec<f64>,
    pub neumann: Vec<f64>,
    pub zero_mode_gap: f64,
}

/// Transplanted trial functions `x3, x1, x2` (in that order) and their
/// Rayleigh quotients. `x1, x2` are projected to zero mean first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialQuotients {
    pub energies: [f64; 3],
    pub masses: [f64; 3],
    pub quotients: [f64; 3],
    pub sum: f64,
    /// `max_v |x1^2 + x2^2 + x3^2 - 1|` before projection.
    pub norm_defect: f64,
}

/// Discretization budget: for each quantity `|q(h) - q(h/2)|`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FemBudget {
    pub lambda1: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub area: f64,
    pub lhs2: f64,
    pub slack2: f64,
    pub lhs3: f64,
    pub rhs3: f64,
    pub slack3: f64,
    pub trial_sum: f64,
    pub trial_lower: f64,
    pub trial_upper: f64,
    pub coarse: Option<MeshResolution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFailure {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub lambda1: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub area: f64,
    pub degree: u32,
    pub lhs2: f64,
    pub rhs2: f64,
    pub slack2: f64,
    pub lhs3: f64,
    pub rhs3: f64,
    pub slack3: f64,
    /// Sum of reciprocal Rayleigh quotients of the balanced transplants; NaN
    /// if balancing failed.
    pub trial_sum: f64,
    /// `A / (d 4 pi / 3)`.
    pub trial_lower: f64,
    /// `1/lambda_1 + 1/mu_1 + 1/mu_2`.
    pub trial_upper: f64,
    pub balance: Option<BalanceResult>,
    pub trial: Option<TrialQuotients>,
    pub residuals: SolverResiduals,
    pub mesh_resolution: MeshResolution,
    pub mesh_id: String,
    pub epsilon_fem: Option<FemBudget>,
    pub failure: Option<ReportFailure>,
}

/// `(lhs3, rhs3, slack3)` from the report's eigenvalues, area and degree.
pub fn product_bound(report: &VerificationReport) -> (f64, f64, f64) {
    product_terms(report.lambda1, report.mu1, report.area, report.degree)
}

fn product_terms(lambda1: f64, mu1: f64, area: f64, degree: u32) -> (f64, f64, f64) {
    let lhs = lambda1 * mu1 * area;
    let rhs = degree as f64 * HEMISPHERE_ENERGY * (2.0 * lambda1 + mu1);
    (lhs, rhs, rhs - lhs)
}

fn reciprocal_terms(lambda1: f64, mu1: f64, mu2: f64, area: f64, degree: u32) -> (f64, f64, f64) {
    let lhs = (1.0 / lambda1 + 1.0 / mu1 + 1.0 / mu2) / area;
    let rhs = 3.0 / (4.0 * PI * degree as f64);
    (lhs, rhs, lhs - rhs)
}

/// `slack2 >= 0` and `mu_1 <= mu_2` imply `slack3 >= 0`, up to roundoff.
pub fn product_bound_follows(report: &VerificationReport) -> bool {
    let premise = report.slack2 >= 0.0 && report.mu1 <= report.mu2;
    !premise || report.slack3 >= -IMPLICATION_ROUNDOFF * report.rhs3.abs()
}

/// Rayleigh quotients of `x3 o T_a o f` (Dirichlet) and the mean-free parts
/// of `x1 o T_a o f`, `x2 o T_a o f` (Neumann).
pub fn trial_quotients(mesh: &SurfaceMesh, f: &MapSample, a: Complex64) -> Result<TrialQuotients> {
    let residual = GravityField::new(mesh, f)?.residual(a);
    if residual > BALANCE_TOLERANCE * mesh.total_area() {
        return Err(Error::Unbalanced { re: a.re, im: a.im, residual });
    }
    let coords = transplant_coords(mesh, f, a)?;
    let ops = FemOperators::assemble(mesh, MassKind::Consistent)?;
    let weights = ops.mass.row_sums();
    let total: f64 = weights.iter().sum();
    let mean_free = |u: &[f64]| -> Vec<f64> {
        let mean = weights.iter().zip(u).map(|(w, x)| w * x).sum::<f64>() / total;
        u.iter().map(|x| x - mean).collect()
    };
    let trials = [coords.x3.clone(), mean_free(&coords.x1), mean_free(&coords.x2)];
    let mut out = TrialQuotients {
        energies: [0.0; 3],
        masses: [0.0; 3],
        quotients: [0.0; 3],
        sum: 0.0,
        norm_defect: coords.norm_defect(),
    };
    for (i, u) in trials.iter().enumerate() {
        out.energies[i] = ops.energy(u);
        out.masses[i] = ops.mass_norm_sqr(u);
        out.quotients[i] = ops.rayleigh_quotient(u)?;
        out.sum += 1.0 / out.quotients[i];
    }
    Ok(out)
}

/// `R[x3]^-1 + R[x1]^-1 + R[x2]^-1` for the transplants through `T_a`.
pub fn trial_bound_sum(mesh: &SurfaceMesh, f: &MapSample, a: Complex64) -> Result<f64> {
    Ok(trial_quotients(mesh, f, a)?.sum)
}

/// Solves both spectra, balances `f`, and fills a report. Solver errors
/// propagate; a balancing failure yields a report with `failure` set and
/// NaN trial fields.
pub fn verify_inequality(mesh: &SurfaceMesh, f: &MapSample, settings: &SolverSettings) -> Result<VerificationReport> {
    if f.values().len() != mesh.vertex_count() {
        return Err(Error::MapSizeMismatch { expected: mesh.vertex_count(), got: f.values().len() });
    }
    let dirichlet = solve_dirichlet(mesh, 1, settings)?;
    let neumann = solve_neumann(mesh, 2, settings)?;
    let (lambda1, mu1, mu2) = (dirichlet.eigenvalues[0], neumann.eigenvalues[0], neumann.eigenvalues[1]);
    let area = mesh.total_area();
    let degree = f.degree();
    let (lhs2, rhs2, slack2) = reciprocal_terms(lambda1, mu1, mu2, area, degree);
    let (lhs3, rhs3, slack3) = product_terms(lambda1, mu1, area, degree);

    let mut report = VerificationReport {
        lambda1,
        mu1,
        mu2,
        area,
        degree,
        lhs2,
        rhs2,
        slack2,
        lhs3,
        rhs3,
        slack3,
        trial_sum: f64::NAN,
        trial_lower: area / (degree as f64 * HEMISPHERE_ENERGY),
        trial_upper: 1.0 / lambda1 + 1.0 / mu1 + 1.0 / mu2,
        balance: None,
        trial: None,
        residuals: SolverResiduals {
            dirichlet: dirichlet.residuals,
            neumann: neumann.residuals,
            zero_mode_gap: neumann.zero_mode_gap.unwrap_or(f64::NAN),
        },
        mesh_resolution: MeshResolution::of(mesh),
        mesh_id: mesh.fingerprint(),
        epsilon_fem: None,
        failure: None,
    };

    let trial = GravityField::new(mesh, f).and_then(|field| balance_field(&field)).and_then(|balance| {
        report.balance = Some(balance);
        trial_quotients(mesh, f, balance.a)
    });
    match trial {
        Ok(t) => {
            report.trial_sum = t.sum;
            report.trial = Some(t);
        }
        Err(e) => report.failure = Some(ReportFailure { kind: e.kind().to_string(), message: e.to_string() }),
    }
    Ok(report)
}

/// Attaches the budget `|q(h) - q(h/2)|` to the finer report.
pub fn with_budget(coarse: &VerificationReport, mut fine: VerificationReport) -> VerificationReport {
    let d = |a: f64, b: f64| (a - b).abs();
    fine.epsilon_fem = Some(FemBudget {
        lambda1: d(coarse.lambda1, fine.lambda1),
        mu1: d(coarse.mu1, fine.mu1),
        mu2: d(coarse.mu2, fine.mu2),
        area: d(coarse.area, fine.area),
        lhs2: d(coarse.lhs2, fine.lhs2),
        slack2: d(coarse.slack2, fine.slack2),
        lhs3: d(coarse.lhs3, fine.lhs3),
        rhs3: d(coarse.rhs3, fine.rhs3),
        slack3: d(coarse.slack3, fine.slack3),
        trial_sum: d(coarse.trial_sum, fine.trial_sum),
        trial_lower: d(coarse.trial_lower, fine.trial_lower),
        trial_upper: d(coarse.trial_upper, fine.trial_upper),
        coarse: Some(coarse.mesh_resolution),
    });
    fine
}

/// Verdicts of a budgeted report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub reciprocal_holds: bool,
    pub product_holds: bool,
    pub implication_holds: bool,
    /// `None` when no trial sum is available.
    pub sandwich_holds: Option<bool>,
}

impl VerificationReport {
    /// Checks against `epsilon_fem`, or exactly if no budget is attached.
    pub fn verdict(&self) -> Verdict {
        let eps = self.epsilon_fem.unwrap_or_default();
        let sandwich = self.trial_sum.is_finite().then(|| {
            self.trial_sum >= self.trial_lower - eps.trial_sum - eps.trial_lower
                && self.trial_sum <= self.trial_upper + eps.trial_sum + eps.trial_upper
        });
        Verdict {
            reciprocal_holds: self.slack2 >= -eps.slack2,
            product_holds: self.slack3 >= -eps.slack3,
            implication_holds: product_bound_follows(self),
            sandwich_holds: sandwich,
        }
    }
}

/// Column names of [`csv_record`].
pub const CSV_HEADER: [&str; 20] = [
    "fixture",
    "level",
    "vertices",
    "degree",
    "area",
    "lambda1",
    "mu1",
    "mu2",
    "lhs2",
    "rhs2",
    "slack2",
    "eps_slack2",
    "lhs3",
    "rhs3",
    "slack3",
    "eps_slack3",
    "trial_sum",
    "trial_lower",
    "trial_upper",
    "balance_residual",
];

pub fn csv_record(fixture: &str, level: usize, report: &VerificationReport) -> Vec<String> {
    let eps = report.epsilon_fem;
    let opt = |x: Option<f64>| x.map(format_f64).unwrap_or_default();
    vec![
        fixture.to_string(),
        level.to_string(),
        report.mesh_resolution.vertices.to_string(),
        report.degree.to_string(),
        format_f64(report.area),
        format_f64(report.lambda1),
        format_f64(report.mu1),
        format_f64(report.mu2),
        format_f64(report.lhs2),
        format_f64(report.rhs2),
        format_f64(report.slack2),
        opt(eps.map(|e| e.slack2)),
        format_f64(report.lhs3),
        format_f64(report.rhs3),
        format_f64(report.slack3),
        opt(eps.map(|e| e.slack3)),
        format_f64(report.trial_sum),
        format_f64(report.trial_lower),
        format_f64(report.trial_upper),
        opt(report.balance.map(|b| b.residual)),
    ]
}

/// Writes a header and one row per `(fixture, level, report)`.
pub fn write_csv<W: io::Write>(writer: W, rows: &[(String, usize, VerificationReport)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for (name, level, report) in rows {
        w.write_record(csv_record(name, *level, report))?;
    }
    w.flush()?;
    Ok(())
}
