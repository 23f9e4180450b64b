//! The built-in fixture suite: surfaces with a known map to the unit disc.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::SolverSettings;
use crate::mesh::{generate_branched_double_disc, generate_conformal_disc, generate_disc, generate_spherical_cap, SurfaceMesh};
use crate::transplant::MapSample;
use crate::verify::{verify_inequality, with_budget, VerificationReport};

/// Number of random conformal discs in the suite.
pub const RANDOM_DISCS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixtureKind {
    /// Flat unit disc, `f = id`.
    Disc,
    /// Spherical cap with stereographic projection rescaled onto the unit disc.
    Cap { colatitude: f64 },
    /// Unit disc with a random smooth log conformal factor, `|phi| <= 1`.
    ConformalDisc { seed: u64 },
    /// Metric pulled back through `z^2`, `f = z^2`.
    BranchedDisc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub kind: FixtureKind,
}

impl Fixture {
    pub fn new(name: impl Into<String>, kind: FixtureKind) -> Self {
        Fixture { name: name.into(), kind }
    }

    pub fn degree(&self) -> u32 {
        match self.kind {
            FixtureKind::BranchedDisc => 2,
            _ => 1,
        }
    }

    /// Mesh and map with `resolution` rings.
    pub fn build(&self, resolution: usize) -> Result<(SurfaceMesh, MapSample)> {
        match self.kind {
            FixtureKind::Disc => {
                let mesh = generate_disc(resolution)?;
                let f = MapSample::identity(&mesh)?;
                Ok((mesh, f))
            }
            FixtureKind::Cap { colatitude } => {
                let mesh = generate_spherical_cap(colatitude, resolution)?;
                let f = cap_map(&mesh, colatitude)?;
                Ok((mesh, f))
            }
            FixtureKind::ConformalDisc { seed } => {
                let phi = RandomFactor::new(seed);
                generate_conformal_disc(resolution, |z| phi.eval(z))
            }
            FixtureKind::BranchedDisc => generate_branched_double_disc(resolution),
        }
    }
}

/// `(x1 + i x2) / ((1 + x3) tan(colatitude / 2))`: conformal, boundary to the unit circle.
pub fn cap_map(mesh: &SurfaceMesh, colatitude: f64) -> Result<MapSample> {
    if !(colatitude > 0.0 && colatitude < PI) {
        return Err(Error::param("colatitude", "must lie in (0, pi)"));
    }
    let f = MapSample::stereographic(mesh)?;
    let s = (0.5 * colatitude).tan();
    MapSample::new(f.values().iter().map(|z| z / s).collect(), 1)
}

/// `phi(z) = sum_k a_k cos(w_k . z + b_k)` with `sum |a_k| = amplitude <= 1`.
#[derive(Debug, Clone)]
pub struct RandomFactor {
    terms: Vec<(f64, [f64; 2], f64)>,
}

impl RandomFactor {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amplitude = rng.random_range(0.3..1.0);
        let raw: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let total: f64 = raw.iter().map(|a: &f64| a.abs()).sum();
        let terms = raw
            .iter()
            .map(|a| {
                let w = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
                (amplitude * a / total, w, rng.random_range(0.0..2.0 * PI))
            })
            .collect();
        RandomFactor { terms }
    }

    pub fn eval(&self, z: Complex64) -> f64 {
        self.terms.iter().map(|(a, w, b)| a * (w[0] * z.re + w[1] * z.im + b).cos()).sum()
    }

    /// Upper bound on `|phi|`.
    pub fn bound(&self) -> f64 {
        self.terms.iter().map(|t| t.0.abs()).sum()
    }
}

/// Disc, hemisphere, caps at colatitude pi/6 and pi/3, the random conformal
/// discs, and the branched double disc. The hemisphere is the pi/2 cap.
pub fn fixture_suite() -> Vec<Fixture> {
    let mut out = vec![
        Fixture::new("disc", FixtureKind::Disc),
        Fixture::new("hemisphere", FixtureKind::Cap { colatitude: PI / 2.0 }),
        Fixture::new("cap_pi_6", FixtureKind::Cap { colatitude: PI / 6.0 }),
        Fixture::new("cap_pi_3", FixtureKind::Cap { colatitude: PI / 3.0 }),
    ];
    out.extend((0..RANDOM_DISCS as u64).map(|i| Fixture::new(format!("conformal_{i:02}"), FixtureKind::ConformalDisc { seed: 1000 + i })));
    out.push(Fixture::new("branched", FixtureKind::BranchedDisc));
    out
}

/// Reports at resolutions `base * 2^l` for `l < levels`; each level after
/// the first carries the budget against the level before it.
pub fn verify_levels(fixture: &Fixture, base: usize, levels: usize, settings: &SolverSettings) -> Result<Vec<VerificationReport>> {
    if levels < 1 {
        return Err(Error::param("refine_levels", "must be at least 1"));
    }
    let mut out: Vec<VerificationReport> = Vec::with_capacity(levels);
    for level in 0..levels {
        let (mesh, f) = fixture.build(base << level)?;
        let report = verify_inequality(&mesh, &f, settings)?;
        let report = match out.last() {
            Some(prev) => with_budget(prev, report),
            None => report,
        };
        out.push(report);
    }
    Ok(out)
}

/// Runs [`verify_levels`] on every fixture in parallel; output order follows `fixtures`.
pub fn verify_suite(
    fixtures: &[Fixture],
    base: usize,
    levels: usize,
    settings: &SolverSettings,
) -> Vec<(Fixture, Result<Vec<VerificationReport>>)> {
    fixtures.par_iter().map(|fx| (fx.clone(), verify_levels(fx, base, levels, settings))).collect()
}
