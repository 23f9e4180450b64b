//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use membrane_spectra::fem::assemble_mass;
use membrane_spectra::mesh::SurfaceMesh;
use membrane_spectra::transplant::{transplant_coords, MapSample};
use num_complex::Complex64;

/// First zero of `J_0`.
pub const J0_FIRST_ZERO: f64 = 2.404_825_557_695_772_4;
/// First zero of `J_1'`.
pub const J1_PRIME_FIRST_ZERO: f64 = 1.841_183_781_340_659_5;

pub const HEMISPHERE_ENERGY: f64 = 4.0 * PI / 3.0;

/// Spacing of the grid-search balancing oracle.
pub const GRID_SPACING: f64 = 0.02;

/// `|G(a)|` computed from scratch: transplant, then weight by `1^T M`.
pub fn gravity_norm(weights: &[f64], mesh: &SurfaceMesh, f: &MapSample, a: Complex64) -> f64 {
    let x = transplant_coords(mesh, f, a).unwrap();
    let g1: f64 = weights.iter().zip(&x.x1).map(|(w, v)| w * v).sum();
    let g2: f64 = weights.iter().zip(&x.x2).map(|(w, v)| w * v).sum();
    g1.hypot(g2)
}

/// Minimizer of `|G|` over the 101 x 101 grid on `[-1, 1]^2` restricted to the open disc.
pub fn grid_search_balance(mesh: &SurfaceMesh, f: &MapSample) -> Complex64 {
    let weights = assemble_mass(mesh).unwrap().row_sums();
    let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
    for i in 0..101 {
        for j in 0..101 {
            let a = Complex64::new(-1.0 + GRID_SPACING * i as f64, -1.0 + GRID_SPACING * j as f64);
            if a.norm() >= 1.0 {
                continue;
            }
            let r = gravity_norm(&weights, mesh, f, a);
            if r < best.0 {
                best = (r, a);
            }
        }
    }
    best.1
}
