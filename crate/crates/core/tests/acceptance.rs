//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness and exits non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use membrane_spectra::balance::BALANCE_TOLERANCE;
use membrane_spectra::fem::{local_mass, local_stiffness, solve_dirichlet, solve_neumann, EigenMethod, SolverSettings};
use membrane_spectra::fixtures::{fixture_suite, verify_suite, Fixture, FixtureKind};
use membrane_spectra::mesh::{generate_disc, generate_spherical_cap};
use membrane_spectra::transplant::{dirichlet_energy, transplant_coords};
use membrane_spectra::verify::{product_bound_follows, verify_inequality, VerificationReport};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::*;

/// Rings of the finest disc-like meshes (about 10^4 vertices).
const FINEST: usize = 57;
const SUITE_BASE: usize = 8;
const SUITE_LEVELS: usize = 3;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

struct Suite {
    fixtures: Vec<Fixture>,
    reports: Vec<Vec<VerificationReport>>,
}

impl Suite {
    fn run() -> Self {
        let fixtures = fixture_suite();
        let reports = verify_suite(&fixtures, SUITE_BASE, SUITE_LEVELS, &SolverSettings::default())
            .into_iter()
            .map(|(fx, r)| r.unwrap_or_else(|e| panic!("fixture {} failed: {e}", fx.name)))
            .collect();
        Suite { fixtures, reports }
    }

    fn finest(&self) -> impl Iterator<Item = (&Fixture, &VerificationReport)> {
        self.fixtures.iter().zip(self.reports.iter().map(|r| r.last().unwrap()))
    }
}

fn disc_dirichlet() -> Outcome {
    let start = Instant::now();
    let mesh = generate_disc(FINEST).map_err(|e| e.to_string())?;
    let res = solve_dirichlet(&mesh, 1, &SolverSettings::default()).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let target = J0_FIRST_ZERO.powi(2) * PI;
    let err = rel(res.eigenvalues[0] * mesh.total_area(), target);
    check(
        err <= 5e-3 && secs < 60.0,
        format!("V={} lambda1*A={:.6} vs j^2 pi={target:.6}, rel err {err:.2e}, {secs:.2}s", mesh.vertex_count(), res.eigenvalues[0] * mesh.total_area()),
    )
}

fn disc_neumann() -> Outcome {
    let mesh = generate_disc(FINEST).map_err(|e| e.to_string())?;
    let res = solve_neumann(&mesh, 2, &SolverSettings::default()).map_err(|e| e.to_string())?;
    let target = J1_PRIME_FIRST_ZERO.powi(2) * PI;
    let err = rel(res.eigenvalues[0] * mesh.total_area(), target);
    let ratio = res.eigenvalues[1] / res.eigenvalues[0];
    check(
        err <= 5e-3 && (ratio - 1.0).abs() <= 1e-2,
        format!("mu1*A={:.6} vs p^2 pi={target:.6}, rel err {err:.2e}; mu2/mu1={ratio:.12}", res.eigenvalues[0] * mesh.total_area()),
    )
}

fn hemisphere_spectrum() -> Outcome {
    let mesh = generate_spherical_cap(PI / 2.0, FINEST).map_err(|e| e.to_string())?;
    let s = SolverSettings::default();
    let l = solve_dirichlet(&mesh, 1, &s).map_err(|e| e.to_string())?.eigenvalues[0];
    let m = solve_neumann(&mesh, 2, &s).map_err(|e| e.to_string())?.eigenvalues;
    let worst = [l, m[0], m[1]].iter().map(|&v| rel(v, 2.0)).fold(0.0, f64::max);
    let la = rel(l * mesh.total_area(), 4.0 * PI);
    check(
        worst <= 5e-3 && la <= 1e-2,
        format!("lambda1={l:.6} mu1={:.6} mu2={:.6} (worst rel {worst:.2e}); lambda1*A rel err vs 4 pi {la:.2e}", m[0], m[1]),
    )
}

fn hemisphere_equality() -> Outcome {
    let fx = Fixture::new("hemisphere", FixtureKind::Cap { colatitude: PI / 2.0 });
    let mut slacks = Vec::new();
    for rings in [8, 16, 32, 64] {
        let (mesh, f) = fx.build(rings).map_err(|e| e.to_string())?;
        let r = verify_inequality(&mesh, &f, &SolverSettings::default()).map_err(|e| e.to_string())?;
        slacks.push((r.slack2, r.rhs2));
    }
    let (s, rhs) = *slacks.last().unwrap();
    let decreasing = slacks.windows(2).all(|w| w[1].0.abs() < w[0].0.abs());
    check(
        (s.abs() / rhs) <= 1e-2 && decreasing,
        format!(
            "|slack2|/rhs2 = {:.2e} at 64 rings; |slack2| by level {:?}",
            s.abs() / rhs,
            slacks.iter().map(|p| format!("{:.2e}", p.0.abs())).collect::<Vec<_>>()
        ),
    )
}

fn inequality2(suite: &Suite) -> Outcome {
    let mut worst = (f64::INFINITY, String::new());
    let mut bad = Vec::new();
    for (fx, r) in suite.finest() {
        let eps = r.epsilon_fem.expect("finest level has a budget").slack2;
        let margin = r.slack2 + eps;
        if margin < worst.0 {
            worst = (margin, fx.name.clone());
        }
        if !(r.slack2 >= -eps) {
            bad.push(format!("{} slack2={:.3e} eps={eps:.3e}", fx.name, r.slack2));
        }
    }
    check(bad.is_empty(), format!("{} fixtures; tightest slack2+eps = {:.3e} ({}) {}", suite.fixtures.len(), worst.0, worst.1, bad.join("; ")))
}

fn inequality3(suite: &Suite) -> Outcome {
    let mut bad = Vec::new();
    let mut implications = 0;
    for (fx, reports) in suite.fixtures.iter().zip(&suite.reports) {
        for r in reports {
            implications += 1;
            if !product_bound_follows(r) {
                bad.push(format!("{} implication broken", fx.name));
            }
        }
        let r = reports.last().unwrap();
        let eps = r.epsilon_fem.unwrap().slack3;
        if !(r.slack3 >= -eps) {
            bad.push(format!("{} slack3={:.3e} eps={eps:.3e}", fx.name, r.slack3));
        }
    }
    let min = suite.finest().map(|(_, r)| r.slack3 + r.epsilon_fem.unwrap().slack3).fold(f64::INFINITY, f64::min);
    check(bad.is_empty(), format!("{implications} implications asserted; min slack3+eps = {min:.3e} {}", bad.join("; ")))
}

fn conformal_invariance() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for fx in [Fixture::new("disc", FixtureKind::Disc), Fixture::new("branched", FixtureKind::BranchedDisc)] {
        let target = fx.degree() as f64 * HEMISPHERE_ENERGY;
        let mut tols = Vec::new();
        for rings in [8, 16, 32, 64] {
            let (mesh, f) = fx.build(rings).map_err(|e| e.to_string())?;
            let x = transplant_coords(&mesh, &f, Complex64::new(0.0, 0.0)).map_err(|e| e.to_string())?;
            let tol = x
                .components()
                .iter()
                .map(|u| (dirichlet_energy(&mesh, u).unwrap() - target).abs())
                .fold(0.0, f64::max);
            tols.push(tol);
        }
        ok &= tols.windows(2).all(|w| w[1] <= 0.5 * w[0]);
        lines.push(format!("{} tol(h) {:?}", fx.name, tols.iter().map(|t| format!("{t:.2e}")).collect::<Vec<_>>()));
    }
    check(ok, lines.join("; "))
}

fn sphere_identity(suite: &Suite) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let params: Vec<Complex64> = (0..32).map(|_| Complex64::from_polar(rng.random_range(0.0..0.95), rng.random_range(0.0..2.0 * PI))).collect();
    let mut worst: f64 = 0.0;
    let mut tested = 0;
    for (fx, reports) in suite.fixtures.iter().zip(&suite.reports) {
        let (mesh, f) = fx.build(SUITE_BASE).map_err(|e| e.to_string())?;
        let balanced = reports[0].balance.map(|b| b.a).unwrap_or_default();
        for &a in params.iter().chain(std::iter::once(&balanced)) {
            let x = transplant_coords(&mesh, &f, a).map_err(|e| e.to_string())?;
            worst = worst.max(x.norm_defect());
            tested += 1;
        }
        for r in reports {
            worst = worst.max(r.trial.as_ref().unwrap().norm_defect);
        }
    }
    check(worst <= 1e-14, format!("{tested} (fixture, a) pairs; max |sum x_i^2 - 1| = {worst:.2e}"))
}

fn balancing(suite: &Suite) -> Outcome {
    let results: Vec<(String, f64, f64, f64, bool)> = suite
        .fixtures
        .par_iter()
        .zip(&suite.reports)
        .map(|(fx, reports)| {
            let (mesh, f) = fx.build(SUITE_BASE).unwrap();
            let b = reports[0].balance.expect("balanced");
            let grid = grid_search_balance(&mesh, &f);
            let symmetric = !matches!(fx.kind, FixtureKind::ConformalDisc { .. });
            let worst_residual = reports.iter().map(|r| r.balance.unwrap().residual / r.area).fold(0.0, f64::max);
            (fx.name.clone(), worst_residual, (b.a - grid).norm(), b.a.norm(), symmetric)
        })
        .collect();
    let mut bad = Vec::new();
    for (name, residual, dist, norm, symmetric) in &results {
        if *residual > BALANCE_TOLERANCE {
            bad.push(format!("{name} residual/A {residual:.2e}"));
        }
        if *dist > 2.0 * GRID_SPACING {
            bad.push(format!("{name} grid distance {dist:.3e}"));
        }
        if *symmetric && *norm > 1e-8 {
            bad.push(format!("{name} |a| = {norm:.2e}"));
        }
    }
    let max_res = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let max_dist = results.iter().map(|r| r.2).fold(0.0, f64::max);
    check(bad.is_empty(), format!("max residual/A {max_res:.2e}; max |a - a_grid| {max_dist:.3e} {}", bad.join("; ")))
}

fn sandwich(suite: &Suite) -> Outcome {
    let mut bad = Vec::new();
    let mut lower_gap = f64::INFINITY;
    let mut upper_gap = f64::INFINITY;
    for (fx, r) in suite.finest() {
        let eps = r.epsilon_fem.unwrap();
        let lo = r.trial_lower - eps.trial_lower - eps.trial_sum;
        let hi = r.trial_upper + eps.trial_upper + eps.trial_sum;
        lower_gap = lower_gap.min(r.trial_sum - lo);
        upper_gap = upper_gap.min(hi - r.trial_sum);
        if !(lo <= r.trial_sum && r.trial_sum <= hi) || r.verdict().sandwich_holds != Some(true) {
            bad.push(format!("{} {lo:.6} <= {:.6} <= {hi:.6}", fx.name, r.trial_sum));
        }
    }
    check(bad.is_empty(), format!("min margins: lower {lower_gap:.3e}, upper {upper_gap:.3e} {}", bad.join("; ")))
}

/// `int_T grad phi_a . grad phi_b` from a planar embedding.
fn stiffness_oracle(p: [[f64; 2]; 3]) -> [[f64; 3]; 3] {
    let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]);
    let g: Vec<[f64; 2]> = (0..3)
        .map(|i| {
            let (a, b) = (p[(i + 1) % 3], p[(i + 2) % 3]);
            [(a[1] - b[1]) / det, (b[0] - a[0]) / det]
        })
        .collect();
    let area = 0.5 * det.abs();
    let mut k = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            k[a][b] = area * (g[a][0] * g[b][0] + g[a][1] * g[b][1]);
        }
    }
    k
}

/// Edge-midpoint quadrature, exact for the quadratic `phi_a phi_b`.
fn mass_oracle(area: f64) -> [[f64; 3]; 3] {
    let mids = [[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]];
    let mut m = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            m[a][b] = area / 3.0 * mids.iter().map(|l| l[a] * l[b]).sum::<f64>();
        }
    }
    m
}

fn oracle_equivalence() -> Outcome {
    // Unit-scale triangles with every angle at least 5 degrees; the relative
    // error is also tracked for arbitrary ones.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut block_err: f64 = 0.0;
    let mut rel_err: f64 = 0.0;
    let mut tested = 0;
    while tested < 500 {
        let p: [[f64; 2]; 3] = std::array::from_fn(|_| [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]);
        let d = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).hypot(a[1] - b[1]);
        let lengths = [d(p[1], p[2]), d(p[2], p[0]), d(p[0], p[1])];
        let det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]);
        let min_sin = (0..3).map(|i| det.abs() / (lengths[(i + 1) % 3] * lengths[(i + 2) % 3])).fold(f64::INFINITY, f64::min);
        if det.abs() < 1e-3 {
            continue;
        }
        let well_shaped = min_sin >= 5f64.to_radians().sin();
        let k = local_stiffness(lengths).map_err(|e| e.to_string())?;
        let ko = stiffness_oracle(p);
        let (m, mo) = (local_mass(0.5 * det.abs()), mass_oracle(0.5 * det.abs()));
        let k_scale = ko.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs()));
        let m_scale = mo.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs()));
        for a in 0..3 {
            for b in 0..3 {
                let (ek, em) = ((k[a][b] - ko[a][b]).abs(), (m[a][b] - mo[a][b]).abs());
                rel_err = rel_err.max(ek / k_scale).max(em / m_scale);
                if well_shaped {
                    block_err = block_err.max(ek).max(em);
                }
            }
        }
        tested += well_shaped as usize;
    }
    let mesh = generate_disc(18).map_err(|e| e.to_string())?;
    let dense = SolverSettings { method: EigenMethod::Dense, ..SolverSettings::default() };
    let iterative = SolverSettings { method: EigenMethod::ShiftInvert, ..SolverSettings::default() };
    let mut eig_err: f64 = 0.0;
    let (a, b) = (solve_dirichlet(&mesh, 3, &dense).unwrap(), solve_dirichlet(&mesh, 3, &iterative).unwrap());
    let (c, e) = (solve_neumann(&mesh, 3, &dense).unwrap(), solve_neumann(&mesh, 3, &iterative).unwrap());
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues).chain(c.eigenvalues.iter().zip(&e.eigenvalues)) {
        eig_err = eig_err.max(rel(*y, *x));
    }
    check(
        block_err <= 1e-12 && eig_err <= 1e-7,
        format!("max block error {block_err:.2e} on well-shaped triangles (near-degenerate ones, relative to block scale: {rel_err:.2e}); dense vs shift-invert on V={} rel {eig_err:.2e}", mesh.vertex_count()),
    )
}

fn scale_invariance() -> Outcome {
    let mut worst: f64 = 0.0;
    for fx in fixture_suite().iter().filter(|f| ["disc", "hemisphere", "conformal_00", "branched"].contains(&f.name.as_str())) {
        let (mesh, f) = fx.build(SUITE_BASE).map_err(|e| e.to_string())?;
        let base = verify_inequality(&mesh, &f, &SolverSettings::default()).map_err(|e| e.to_string())?;
        for c in [0.1, 3.0] {
            let scaled = mesh.scaled(c).map_err(|e| e.to_string())?;
            let r = verify_inequality(&scaled, &f, &SolverSettings::default()).map_err(|e| e.to_string())?;
            worst = worst.max(rel(r.lhs2, base.lhs2)).max(rel(r.slack2, base.slack2));
        }
    }
    check(worst <= 1e-9, format!("max relative change of lhs2, slack2 under c in {{0.1, 3}}: {worst:.2e}"))
}

fn main() {
    let start = Instant::now();
    let suite = Suite::run();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("disc dirichlet", Box::new(disc_dirichlet)),
        ("disc neumann", Box::new(disc_neumann)),
        ("hemisphere spectrum", Box::new(hemisphere_spectrum)),
        ("hemisphere equality", Box::new(hemisphere_equality)),
        ("reciprocal bound on fixtures", Box::new(|| inequality2(&suite))),
        ("product bound on fixtures", Box::new(|| inequality3(&suite))),
        ("conformal invariance of energies", Box::new(conformal_invariance)),
        ("sum of squares identity", Box::new(|| sphere_identity(&suite))),
        ("balancing", Box::new(|| balancing(&suite))),
        ("trial-function sandwich", Box::new(|| sandwich(&suite))),
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("scale invariance", Box::new(scale_invariance)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
