//! Conformal transplantation: lifting the disc to the northern hemisphere,
//! disc automorphisms, pulled-back sphere coordinates and map degree.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fem::assemble_stiffness;
use crate::mesh::{boundary_loops, SurfaceMesh};

/// Slack allowed on `|f| <= 1` and on `|f| = 1` at boundary vertices.
pub const BOUNDARY_TOLERANCE: f64 = 1e-6;
/// Slack allowed by [`lift_to_hemisphere`] before rejecting a point.
pub const LIFT_TOLERANCE: f64 = 1e-9;
/// Largest admissible distance of a degree estimate from an integer.
pub const DEGREE_ROUNDING_LIMIT: f64 = 0.05;

/// Per-vertex samples of a holomorphic map `f: Sigma -> closed unit disc` and its degree.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSample {
    values: Vec<Complex64>,
    degree: u32,
}

impl MapSample {
    pub fn new(values: Vec<Complex64>, degree: u32) -> Result<Self> {
        if degree < 1 {
            return Err(Error::param("degree", "must be a positive integer"));
        }
        for (v, z) in values.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > 1.0 + BOUNDARY_TOLERANCE {
                return Err(Error::param("map", format!("value {z} at vertex {v} lies outside the closed unit disc")));
            }
        }
        Ok(MapSample { values, degree })
    }

    /// Builds the sample and fills in the degree with [`compute_degree`].
    pub fn with_computed_degree(mesh: &SurfaceMesh, values: Vec<Complex64>) -> Result<Self> {
        let degree = compute_degree(mesh, &values)?;
        MapSample::new(values, degree)
    }

    /// `f(x, y, z) = x + i y` for a planar embedded mesh, degree 1.
    pub fn identity(mesh: &SurfaceMesh) -> Result<Self> {
        let pos = mesh.positions().ok_or_else(|| Error::param("map", "identity map needs vertex positions"))?;
        MapSample::new(pos.iter().map(|p| Complex64::new(p[0], p[1])).collect(), 1)
    }

    /// Stereographic projection from the south pole, `(x1 + i x2) / (1 + x3)`,
    /// for meshes on the unit sphere; inverse of [`lift_to_hemisphere`].
    pub fn stereographic(mesh: &SurfaceMesh) -> Result<Self> {
        let pos = mesh.positions().ok_or_else(|| Error::param("map", "stereographic map needs vertex positions"))?;
        MapSample::new(pos.iter().map(|p| Complex64::new(p[0], p[1]) / (1.0 + p[2])).collect(), 1)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn with_degree(mut self, degree: u32) -> Result<Self> {
        if degree < 1 {
            return Err(Error::param("degree", "must be a positive integer"));
        }
        self.degree = degree;
        Ok(self)
    }

    /// Post-composes with a rotation of the disc, `f -> e^{i theta} f`.
    pub fn rotated(&self, theta: f64) -> Self {
        let r = Complex64::from_polar(1.0, theta);
        MapSample { values: self.values.iter().map(|z| r * z).collect(), degree: self.degree }
    }

    pub(crate) fn check_against(&self, mesh: &SurfaceMesh) -> Result<()> {
        check_proper(mesh, &self.values)
    }
}

/// Samples of the transplanted coordinate functions `x_i o T_a o f`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereFunctions {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub x3: Vec<f64>,
}

impl SphereFunctions {
    pub fn components(&self) -> [&[f64]; 3] {
        [&self.x1, &self.x2, &self.x3]
    }

    /// `max_v |x1^2 + x2^2 + x3^2 - 1|`.
    pub fn norm_defect(&self) -> f64 {
        self.x1
            .iter()
            .zip(&self.x2)
            .zip(&self.x3)
            .map(|((a, b), c)| (a * a + b * b + c * c - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Inverse stereographic projection from the south pole: the unit disc goes
/// to the northern hemisphere and the unit circle to the equator.
pub fn lift_to_hemisphere(z: Complex64) -> Result<[f64; 3]> {
    let r2 = z.norm_sqr();
    if r2.sqrt() > 1.0 + LIFT_TOLERANCE || !r2.is_finite() {
        return Err(Error::param("z", format!("|z| = {} exceeds the closed unit disc", r2.sqrt())));
    }
    let z = if r2 > 1.0 { z / r2.sqrt() } else { z };
    Ok(lift_unchecked(z))
}

fn lift_unchecked(z: Complex64) -> [f64; 3] {
    let r2 = z.norm_sqr();
    let d = 1.0 + r2;
    [2.0 * z.re / d, 2.0 * z.im / d, (1.0 - r2) / d]
}

/// The disc automorphism `T_a(z) = (z - a) / (1 - conj(a) z)`.
pub fn mobius(a: Complex64, z: Complex64) -> Result<Complex64> {
    if !(a.norm() < 1.0) {
        return Err(Error::param("a", format!("|a| = {} must be < 1", a.norm())));
    }
    Ok(mobius_unchecked(a, z))
}

#[inline]
pub(crate) fn mobius_unchecked(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (1.0 - a.conj() * z)
}

/// Samples `(x1, x2, x3) o T_a o f` at every vertex. Boundary vertices are
/// placed exactly on the equator, so `x3` vanishes there.
pub fn transplant_coords(mesh: &SurfaceMesh, f: &MapSample, a: Complex64) -> Result<SphereFunctions> {
    if f.values.len() != mesh.vertex_count() {
        return Err(Error::MapSizeMismatch { expected: mesh.vertex_count(), got: f.values.len() });
    }
    if !(a.norm() < 1.0) {
        return Err(Error::param("a", format!("|a| = {} must be < 1", a.norm())));
    }
    let boundary = mesh.boundary_vertices();
    let n = mesh.vertex_count();
    let mut out = SphereFunctions { x1: Vec::with_capacity(n), x2: Vec::with_capacity(n), x3: Vec::with_capacity(n) };
    for (v, &z) in f.values.iter().enumerate() {
        let x = if boundary[v] {
            if z.norm() == 0.0 {
                return Err(Error::NonProperMap { vertex: v, modulus: 0.0 });
            }
            let w = mobius_unchecked(a, z / z.norm());
            let w = w / w.norm();
            [w.re, w.im, 0.0]
        } else {
            let z = if z.norm() > 1.0 { z / z.norm() } else { z };
            lift_unchecked(mobius_unchecked(a, z))
        };
        out.x1.push(x[0]);
        out.x2.push(x[1]);
        out.x3.push(x[2]);
    }
    Ok(out)
}

/// `u^T K u`: Dirichlet energy of the P1 interpolant of `u`.
pub fn dirichlet_energy(mesh: &SurfaceMesh, u: &[f64]) -> Result<f64> {
    if u.len() != mesh.vertex_count() {
        return Err(Error::param("u", format!("expected {} samples, got {}", mesh.vertex_count(), u.len())));
    }
    Ok(assemble_stiffness(mesh)?.quad_form(u))
}

fn check_proper(mesh: &SurfaceMesh, values: &[Complex64]) -> Result<()> {
    if values.len() != mesh.vertex_count() {
        return Err(Error::MapSizeMismatch { expected: mesh.vertex_count(), got: values.len() });
    }
    for (v, on_boundary) in mesh.boundary_vertices().into_iter().enumerate() {
        let modulus = values[v].norm();
        if on_boundary && (1.0 - modulus).abs() > BOUNDARY_TOLERANCE {
            return Err(Error::NonProperMap { vertex: v, modulus });
        }
    }
    Ok(())
}

fn signed_area(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    0.5 * ((b - a).conj() * (c - a)).im
}

/// Signed angle from `p` to `q` seen from the origin, in `(-pi, pi]`.
fn turn(p: Complex64, q: Complex64) -> f64 {
    (q * p.conj()).arg()
}

/// `(1/pi) * integral of Jac(f)` for the piecewise-linear map: the summed
/// signed areas of the image triangles.
pub fn degree_estimate(mesh: &SurfaceMesh, values: &[Complex64]) -> Result<f64> {
    check_proper(mesh, values)?;
    let area: f64 = mesh.triangles().iter().map(|&[a, b, c]| signed_area(values[a], values[b], values[c])).sum();
    Ok(area / PI)
}

/// Total winding of the boundary image around the origin, in turns.
pub fn winding_degree(mesh: &SurfaceMesh, values: &[Complex64]) -> Result<f64> {
    check_proper(mesh, values)?;
    let mut total = 0.0;
    for cycle in boundary_loops(mesh)? {
        for i in 0..cycle.len() {
            total += turn(values[cycle[i]], values[cycle[(i + 1) % cycle.len()]]);
        }
    }
    Ok(total / (2.0 * PI))
}

/// Degree of a proper map, from [`degree_estimate`] rounded to the nearest integer.
pub fn compute_degree(mesh: &SurfaceMesh, values: &[Complex64]) -> Result<u32> {
    let estimate = degree_estimate(mesh, values)?;
    let rounded = estimate.round();
    if (estimate - rounded).abs() >= DEGREE_ROUNDING_LIMIT || rounded < 1.0 {
        return Err(Error::NonIntegralDegree { estimate });
    }
    Ok(rounded as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_annulus, generate_branched_double_disc, generate_disc, generate_spherical_cap};

    #[test]
    fn lift_reference_points() {
        assert_eq!(lift_to_hemisphere(Complex64::new(0.0, 0.0)).unwrap(), [0.0, 0.0, 1.0]);
        assert_eq!(lift_to_hemisphere(Complex64::new(1.0, 0.0)).unwrap(), [1.0, 0.0, 0.0]);
        let x = lift_to_hemisphere(Complex64::new(0.0, 1.0 / 3f64.sqrt())).unwrap();
        assert!(x[0].abs() < 1e-16);
        assert!((x[1] - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((x[2] - 0.5).abs() < 1e-15);
        assert!((x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 1.0).abs() < 1e-15);
        assert!(lift_to_hemisphere(Complex64::new(1.0 + 1e-10, 0.0)).is_ok());
        assert!(lift_to_hemisphere(Complex64::new(1.0 + 1e-8, 0.0)).is_err());
    }

    #[test]
    fn mobius_properties() {
        let z = Complex64::new(0.2, -0.7);
        assert_eq!(mobius(Complex64::new(0.0, 0.0), z).unwrap(), z);
        let a = Complex64::new(0.3, 0.4);
        assert!(mobius(a, a).unwrap().norm() < 1e-16);
        let a = Complex64::new(0.5, 0.0);
        for k in 0..100 {
            let w = mobius(a, Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 100.0)).unwrap();
            assert!((w.norm() - 1.0).abs() < 1e-14);
        }
        assert!(mobius(Complex64::new(1.0, 0.0), z).is_err());
    }

    #[test]
    fn transplant_recovers_hemisphere_coordinates() {
        let mesh = generate_spherical_cap(PI / 2.0, 8).unwrap();
        let f = MapSample::stereographic(&mesh).unwrap();
        let x = transplant_coords(&mesh, &f, Complex64::new(0.0, 0.0)).unwrap();
        for (v, p) in mesh.positions().unwrap().iter().enumerate() {
            assert!((x.x1[v] - p[0]).abs() < 1e-14);
            assert!((x.x2[v] - p[1]).abs() < 1e-14);
            assert!((x.x3[v] - p[2]).abs() < 1e-14);
        }
        assert!(x.norm_defect() < 1e-15);
    }

    #[test]
    fn transplant_on_disc() {
        let mesh = generate_disc(4).unwrap();
        let f = MapSample::identity(&mesh).unwrap();
        let x = transplant_coords(&mesh, &f, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(x.x3[0], 1.0);
        let boundary = mesh.boundary_vertices();
        let shifted = transplant_coords(&mesh, &f, Complex64::new(0.4, -0.3)).unwrap();
        for v in 0..mesh.vertex_count() {
            if boundary[v] {
                assert_eq!(shifted.x3[v], 0.0);
            } else {
                assert!(shifted.x3[v] > 0.0);
            }
        }
        assert!(shifted.norm_defect() < 1e-15);
        assert!(transplant_coords(&mesh, &f, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn degrees_of_fixture_maps() {
        let mesh = generate_disc(8).unwrap();
        let id = MapSample::identity(&mesh).unwrap();
        assert_eq!(compute_degree(&mesh, id.values()).unwrap(), 1);
        assert!((winding_degree(&mesh, id.values()).unwrap() - 1.0).abs() < 1e-12);

        let (branched, f) = generate_branched_double_disc(8).unwrap();
        // Image polygon: the regular 48-gon traversed twice.
        let n = 48.0;
        let oracle = 2.0 * 0.5 * (n / 2.0) * (4.0 * PI / n).sin() / PI;
        assert!((degree_estimate(&branched, f.values()).unwrap() - oracle).abs() < 1e-12);
        assert_eq!(compute_degree(&branched, f.values()).unwrap(), 2);
        assert!((winding_degree(&branched, f.values()).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn coarse_boundary_gives_non_integral_estimate() {
        // Inscribed hexagon: 3 sqrt(3) / (2 pi) = 0.83.
        let mesh = generate_disc(1).unwrap();
        let id = MapSample::identity(&mesh).unwrap();
        assert!(matches!(compute_degree(&mesh, id.values()), Err(Error::NonIntegralDegree { .. })));
        assert!((winding_degree(&mesh, id.values()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn annulus_identity_is_not_proper() {
        let mesh = generate_annulus(0.5, 3).unwrap();
        let id = MapSample::identity(&mesh).unwrap();
        assert!(matches!(compute_degree(&mesh, id.values()), Err(Error::NonProperMap { .. })));
    }

    #[test]
    fn energy_of_constant_is_zero() {
        let mesh = generate_disc(3).unwrap();
        assert!(dirichlet_energy(&mesh, &vec![2.5; mesh.vertex_count()]).unwrap().abs() < 1e-13);
    }
}
