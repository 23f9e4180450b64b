//! Center-of-gravity balancing over the disc automorphisms `T_a`.
//!
//! For a map `f` the moments `G(a) = (int x1 o T_a o f, int x2 o T_a o f)`
//! are smooth in `a`; a zero exists for every admissible `f`, and we find one
//! by damped Newton iteration from `a = 0`, with a gradient-descent fallback.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::assemble_mass;
use crate::mesh::SurfaceMesh;
use crate::transplant::{mobius_unchecked, MapSample};

/// Moments must vanish to this fraction of the total area.
pub const BALANCE_TOLERANCE: f64 = 1e-10;
/// Largest `|a|` the iteration may visit.
pub const MAX_PARAMETER_NORM: f64 = 0.999_999;
const FD_STEP: f64 = 1e-6;
const MAX_NEWTON_STEPS: usize = 60;
const DESCENT_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalanceResult {
    #[serde(with = "complex_pair")]
    pub a: Complex64,
    /// `|G(a)|`, in area units.
    pub residual: f64,
    pub iterations: usize,
}

pub(crate) mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Evaluates `G(a)` with the vertex weights `1^T M` precomputed.
#[derive(Debug, Clone)]
pub struct GravityField<'a> {
    weights: Vec<f64>,
    boundary: Vec<bool>,
    values: &'a [Complex64],
    area: f64,
}

impl<'a> GravityField<'a> {
    pub fn new(mesh: &SurfaceMesh, f: &'a MapSample) -> Result<Self> {
        if f.values().len() != mesh.vertex_count() {
            return Err(Error::MapSizeMismatch { expected: mesh.vertex_count(), got: f.values().len() });
        }
        f.check_against(mesh)?;
        Ok(GravityField {
            weights: assemble_mass(mesh)?.row_sums(),
            boundary: mesh.boundary_vertices(),
            values: f.values(),
            area: mesh.total_area(),
        })
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    /// `(1^T M x1, 1^T M x2)` for the transplant through `T_a`.
    pub fn moments(&self, a: Complex64) -> [f64; 2] {
        let mut g = [0.0, 0.0];
        for ((&z, &w), &on_boundary) in self.values.iter().zip(&self.weights).zip(&self.boundary) {
            let (x1, x2) = if on_boundary {
                let t = mobius_unchecked(a, z / z.norm());
                let t = t / t.norm();
                (t.re, t.im)
            } else {
                let z = if z.norm() > 1.0 { z / z.norm() } else { z };
                let t = mobius_unchecked(a, z);
                let d = 1.0 + t.norm_sqr();
                (2.0 * t.re / d, 2.0 * t.im / d)
            };
            g[0] += w * x1;
            g[1] += w * x2;
        }
        g
    }

    pub fn residual(&self, a: Complex64) -> f64 {
        let [g1, g2] = self.moments(a);
        g1.hypot(g2)
    }

    /// Central-difference Jacobian `d(g1, g2) / d(re a, im a)`.
    fn jacobian(&self, a: Complex64) -> [[f64; 2]; 2] {
        let dirs = [Complex64::new(FD_STEP, 0.0), Complex64::new(0.0, FD_STEP)];
        let mut j = [[0.0; 2]; 2];
        for (col, d) in dirs.iter().enumerate() {
            let (p, m) = (self.moments(a + d), self.moments(a - d));
            for row in 0..2 {
                j[row][col] = (p[row] - m[row]) / (2.0 * FD_STEP);
            }
        }
        j
    }
}

/// `(g1, g2)`: consistent-mass first moments of the transplanted `x1, x2`.
pub fn center_of_gravity(mesh: &SurfaceMesh, f: &MapSample, a: Complex64) -> Result<[f64; 2]> {
    if !(a.norm() < 1.0) {
        return Err(Error::param("a", format!("|a| = {} must be < 1", a.norm())));
    }
    Ok(GravityField::new(mesh, f)?.moments(a))
}

/// Finds `a` with `|G(a)| <= 1e-10 * A`.
pub fn balance_center_of_mass(mesh: &SurfaceMesh, f: &MapSample) -> Result<BalanceResult> {
    let field = GravityField::new(mesh, f)?;
    balance_field(&field)
}

pub fn balance_field(field: &GravityField<'_>) -> Result<BalanceResult> {
    let tol = BALANCE_TOLERANCE * field.area();
    let origin = Complex64::new(0.0, 0.0);
    let mut iterations = 0;

    let (a, r) = newton(field, origin, tol, &mut iterations);
    if r <= tol {
        return Ok(BalanceResult { a, residual: r, iterations });
    }
    let mut best = (a, r);

    let (a, r) = descent(field, origin, &mut iterations);
    if r < best.1 {
        best = (a, r);
    }
    let (a, r) = newton(field, a, tol, &mut iterations);
    if r < best.1 {
        best = (a, r);
    }
    if best.1 <= tol {
        return Ok(BalanceResult { a: best.0, residual: best.1, iterations });
    }
    Err(Error::BalanceFailed { best_residual: best.1, re: best.0.re, im: best.0.im })
}

fn newton(field: &GravityField<'_>, start: Complex64, tol: f64, iterations: &mut usize) -> (Complex64, f64) {
    let mut a = start;
    let mut g = field.moments(a);
    let mut r = g[0].hypot(g[1]);
    for _ in 0..MAX_NEWTON_STEPS {
        if r <= tol {
            break;
        }
        *iterations += 1;
        let j = field.jacobian(a);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let step = Complex64::new(
            -(j[1][1] * g[0] - j[0][1] * g[1]) / det,
            -(-j[1][0] * g[0] + j[0][0] * g[1]) / det,
        );
        let mut t = 1.0;
        let mut accepted = false;
        while t > 1e-12 {
            let candidate = a + step * t;
            if candidate.norm() <= MAX_PARAMETER_NORM {
                let gc = field.moments(candidate);
                let rc = gc[0].hypot(gc[1]);
                if rc < r {
                    a = candidate;
                    g = gc;
                    r = rc;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (a, r)
}

/// Gradient descent on `|G|^2` with backtracking.
fn descent(field: &GravityField<'_>, start: Complex64, iterations: &mut usize) -> (Complex64, f64) {
    let mut a = start;
    let mut g = field.moments(a);
    let mut r = g[0].hypot(g[1]);
    let mut step = 1.0;
    for _ in 0..DESCENT_STEPS {
        *iterations += 1;
        let j = field.jacobian(a);
        let grad = Complex64::new(2.0 * (j[0][0] * g[0] + j[1][0] * g[1]), 2.0 * (j[0][1] * g[0] + j[1][1] * g[1]));
        if grad.norm() == 0.0 {
            break;
        }
        let mut improved = false;
        while step > 1e-14 {
            let candidate = a - grad * step;
            if candidate.norm() <= MAX_PARAMETER_NORM {
                let gc = field.moments(candidate);
                let rc = gc[0].hypot(gc[1]);
                if rc < r {
                    a = candidate;
                    g = gc;
                    r = rc;
                    improved = true;
                    step *= 2.0;
                    break;
                }
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (a, r)
}
