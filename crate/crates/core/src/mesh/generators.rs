//! Built-in test bodies: flat disc, spherical caps, annulus, conformally
//! rescaled discs and the branched double cover of the disc.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::SurfaceMesh;
use crate::error::{Error, Result};
use crate::transplant::MapSample;

/// Concentric-ring layout: vertex 0 is the center, ring `k` (1-based) holds
/// `6k` vertices starting at index `1 + 3k(k-1)`.
struct RingLayout {
    rings: usize,
    triangles: Vec<[usize; 3]>,
}

impl RingLayout {
    fn new(rings: usize) -> Self {
        let mut triangles = Vec::with_capacity(6 * rings * rings);
        for k in 1..=rings {
            let outer: Vec<usize> = (0..6 * k).map(|j| ring_start(k) + j).collect();
            if k == 1 {
                for j in 0..6 {
                    triangles.push([0, outer[j], outer[(j + 1) % 6]]);
                }
            } else {
                let inner: Vec<usize> = (0..6 * (k - 1)).map(|j| ring_start(k - 1) + j).collect();
                stitch_rings(&inner, &outer, &mut triangles);
            }
        }
        RingLayout { rings, triangles }
    }

    /// `(ring, fraction of a full turn)` for every vertex, center first.
    fn polar_grid(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        std::iter::once((0, 0.0))
            .chain((1..=self.rings).flat_map(|k| (0..6 * k).map(move |j| (k, j as f64 / (6 * k) as f64))))
    }
}

fn ring_start(k: usize) -> usize {
    1 + 3 * k * (k - 1)
}

/// Triangulates the strip between two concentric rings that both start at
/// angle zero, walking by angle. Angles are compared in exact integer
/// arithmetic so the strip is combinatorially symmetric.
fn stitch_rings(inner: &[usize], outer: &[usize], triangles: &mut Vec<[usize; 3]>) {
    let (ni, no) = (inner.len(), outer.len());
    let (mut i, mut j) = (0, 0);
    while i < ni || j < no {
        let advance_outer = j < no && (i == ni || (j + 1) * ni <= (i + 1) * no);
        if advance_outer {
            triangles.push([inner[i % ni], outer[j], outer[(j + 1) % no]]);
            j += 1;
        } else {
            triangles.push([inner[i], outer[j % no], inner[(i + 1) % ni]]);
            i += 1;
        }
    }
}

fn disc_points(layout: &RingLayout) -> Vec<Complex64> {
    layout
        .polar_grid()
        .map(|(k, turn)| Complex64::from_polar(k as f64 / layout.rings as f64, 2.0 * PI * turn))
        .collect()
}

fn planar(points: &[Complex64]) -> Vec<[f64; 3]> {
    points.iter().map(|z| [z.re, z.im, 0.0]).collect()
}

/// Flat triangulation of the closed unit disc with `rings` concentric rings.
pub fn generate_disc(rings: usize) -> Result<SurfaceMesh> {
    if rings < 1 {
        return Err(Error::param("rings", "must be at least 1"));
    }
    let layout = RingLayout::new(rings);
    let points = disc_points(&layout);
    SurfaceMesh::from_positions(planar(&points), layout.triangles)
}

/// The cap `{x in S^2 : polar angle <= colatitude}` with vertices on the unit sphere.
/// `colatitude = pi/2` is the northern hemisphere.
pub fn generate_spherical_cap(colatitude: f64, resolution: usize) -> Result<SurfaceMesh> {
    if !(colatitude > 0.0 && colatitude < PI) {
        return Err(Error::param("colatitude", format!("must lie in (0, pi), got {colatitude}")));
    }
    if resolution < 1 {
        return Err(Error::param("resolution", "must be at least 1"));
    }
    let layout = RingLayout::new(resolution);
    let positions = layout
        .polar_grid()
        .map(|(k, turn)| {
            let theta = colatitude * k as f64 / resolution as f64;
            let phi = 2.0 * PI * turn;
            [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
        })
        .collect();
    SurfaceMesh::from_positions(positions, layout.triangles)
}

/// Flat annulus `{inner_radius <= |z| <= 1}`: `resolution` radial layers, and
/// the same number of vertices on every ring.
pub fn generate_annulus(inner_radius: f64, resolution: usize) -> Result<SurfaceMesh> {
    if !(inner_radius > 0.0 && inner_radius < 1.0) {
        return Err(Error::param("inner_radius", format!("must lie in (0, 1), got {inner_radius}")));
    }
    if resolution < 1 {
        return Err(Error::param("resolution", "must be at least 1"));
    }
    // Angular count per radial layer, chosen so cells are roughly square at
    // the mid radius and exactly doubling with the resolution.
    let per_layer = ((PI * (1.0 + inner_radius) / (1.0 - inner_radius)).round() as usize).max(3);
    let around = per_layer * resolution;
    let id = |k: usize, j: usize| k * around + j % around;
    let mut positions = Vec::with_capacity((resolution + 1) * around);
    for k in 0..=resolution {
        let r = inner_radius + (1.0 - inner_radius) * k as f64 / resolution as f64;
        for j in 0..around {
            let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / around as f64);
            positions.push([z.re, z.im, 0.0]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * resolution * around);
    for k in 0..resolution {
        for j in 0..around {
            triangles.push([id(k, j), id(k + 1, j), id(k + 1, j + 1)]);
            triangles.push([id(k, j), id(k + 1, j + 1), id(k, j + 1)]);
        }
    }
    SurfaceMesh::from_positions(positions, triangles)
}

/// Unit disc carrying the metric pulled back through `w = z^2` (length
/// element `2|z||dz|`, cone angle `4 pi` at the origin), with the map itself.
pub fn generate_branched_double_disc(rings: usize) -> Result<(SurfaceMesh, MapSample)> {
    if rings < 2 {
        return Err(Error::param("rings", "must be at least 2"));
    }
    let layout = RingLayout::new(rings);
    let points = disc_points(&layout);
    let lengths = edges_of(&layout.triangles)
        .into_iter()
        .map(|(a, b)| (a, b, branched_length(points[a], points[b])));
    let mesh = SurfaceMesh::from_edge_lengths(points.len(), layout.triangles, lengths)?;
    let map = MapSample::new(points.iter().map(|z| z * z).collect(), 2)?;
    Ok((mesh, map))
}

/// Unit disc with metric `e^{2 phi} |dz|^2`, sampled at the vertices. Each
/// flat edge length is scaled by `exp((phi(u) + phi(v)) / 2)`. The returned
/// map is the identity (degree 1).
pub fn generate_conformal_disc<F>(rings: usize, log_factor: F) -> Result<(SurfaceMesh, MapSample)>
where
    F: Fn(Complex64) -> f64,
{
    if rings < 1 {
        return Err(Error::param("rings", "must be at least 1"));
    }
    let layout = RingLayout::new(rings);
    let points = disc_points(&layout);
    let phi: Vec<f64> = points.iter().map(|&z| log_factor(z)).collect();
    if let Some(v) = phi.iter().position(|p| !p.is_finite()) {
        return Err(Error::param("log_factor", format!("non-finite sample at vertex {v}")));
    }
    let lengths = edges_of(&layout.triangles)
        .into_iter()
        .map(|(a, b)| (a, b, (points[a] - points[b]).norm() * (0.5 * (phi[a] + phi[b])).exp()));
    let mesh = SurfaceMesh::from_edge_lengths(points.len(), layout.triangles, lengths)?;
    let map = MapSample::new(points, 1)?;
    Ok((mesh, map))
}

/// Flat `[0,1]^2` split into `2 n^2` right triangles.
pub fn unit_square(n: usize) -> Result<SurfaceMesh> {
    if n < 1 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut positions = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            positions.push([i as f64 / n as f64, j as f64 / n as f64, 0.0]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    SurfaceMesh::from_positions(positions, triangles)
}

fn edges_of(triangles: &[[usize; 3]]) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> =
        triangles.iter().flat_map(|t| (0..3).map(move |k| super::edge_key(t[k], t[(k + 1) % 3]))).collect();
    edges.sort_unstable();
    edges.dedup();
    edges
}

/// Length of the straight segment `p -> q` under the length element `2|z||dz|`.
fn branched_length(p: Complex64, q: Complex64) -> f64 {
    // 2 |q - p| * int_0^1 |p + t (q - p)| dt, with |p + t d|^2 = A t^2 + B t + C.
    let d = q - p;
    let a = d.norm_sqr();
    let b = 2.0 * (p.re * d.re + p.im * d.im);
    let c = p.norm_sqr();
    // Complete the square: s = t + B/2A, offset q0 = C/A - (B/2A)^2 >= 0.
    let shift = b / (2.0 * a);
    let q0 = (c / a - shift * shift).max(0.0);
    let antiderivative = |s: f64| {
        let root = (s * s + q0).sqrt();
        let log_term = if q0 > 0.0 { q0 * (s / q0.sqrt()).asinh() } else { 0.0 };
        0.5 * (s * root + log_term)
    };
    let integral = a.sqrt() * (antiderivative(1.0 + shift) - antiderivative(shift));
    2.0 * a.sqrt() * integral
}
