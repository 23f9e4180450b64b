//! Piecewise-linear Laplace-Beltrami discretization and the Dirichlet and
//! Neumann eigenproblems `K u = lambda M u`.

mod eigen;
mod spectrum;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::SurfaceMesh;
use crate::sparse::CsrMatrix;

pub use eigen::{dense_generalized, shift_invert, EigenPairs};
pub use spectrum::{
    solve_dirichlet, solve_neumann, BoundaryCondition, EigenMethod, SolverSettings, SpectralResult,
    SpectralResultFile,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MassKind {
    /// Exact P1 mass matrix.
    #[default]
    Consistent,
    /// Row-sum (diagonal) mass matrix.
    Lumped,
}

/// Cotangent weights of one triangle: `cot` of the angle at each corner,
/// from side lengths via the law of cosines.
pub fn corner_cotangents(lengths: [f64; 3], area: f64) -> [f64; 3] {
    let sq = lengths.map(|l| l * l);
    [
        (sq[1] + sq[2] - sq[0]) / (4.0 * area),
        (sq[2] + sq[0] - sq[1]) / (4.0 * area),
        (sq[0] + sq[1] - sq[2]) / (4.0 * area),
    ]
}

/// Local 3x3 stiffness block of a triangle with the given side lengths
/// (side `i` opposite corner `i`).
pub fn local_stiffness(lengths: [f64; 3]) -> Result<[[f64; 3]; 3]> {
    let area = crate::mesh::heron_area(lengths);
    if !(area > 0.0) {
        return Err(Error::DegenerateTriangle { triangle: 0, lengths });
    }
    let cot = corner_cotangents(lengths, area);
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        let (a, b) = ((i + 1) % 3, (i + 2) % 3);
        let w = 0.5 * cot[i];
        k[a][b] -= w;
        k[b][a] -= w;
        k[a][a] += w;
        k[b][b] += w;
    }
    Ok(k)
}

/// Local consistent mass block `(T/12) [[2,1,1],[1,2,1],[1,1,2]]`.
pub fn local_mass(area: f64) -> [[f64; 3]; 3] {
    let (d, o) = (area / 6.0, area / 12.0);
    [[d, o, o], [o, d, o], [o, o, d]]
}

/// Cotangent stiffness matrix built from intrinsic edge lengths.
pub fn assemble_stiffness(mesh: &SurfaceMesh) -> Result<CsrMatrix> {
    let mut triplets = Vec::with_capacity(9 * mesh.triangles().len());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let lengths = mesh.triangle_lengths(t);
        let local = local_stiffness(lengths).map_err(|_| Error::DegenerateTriangle { triangle: t, lengths })?;
        for a in 0..3 {
            for b in 0..3 {
                triplets.push((tri[a], tri[b], local[a][b]));
            }
        }
    }
    Ok(CsrMatrix::from_triplets(mesh.vertex_count(), triplets))
}

pub fn assemble_mass(mesh: &SurfaceMesh) -> Result<CsrMatrix> {
    assemble_mass_with(mesh, MassKind::Consistent)
}

pub fn assemble_mass_with(mesh: &SurfaceMesh, kind: MassKind) -> Result<CsrMatrix> {
    let mut triplets = Vec::with_capacity(9 * mesh.triangles().len());
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let area = mesh.triangle_area(t);
        if !(area > 0.0) {
            return Err(Error::DegenerateTriangle { triangle: t, lengths: mesh.triangle_lengths(t) });
        }
        match kind {
            MassKind::Consistent => {
                let local = local_mass(area);
                for a in 0..3 {
                    for b in 0..3 {
                        triplets.push((tri[a], tri[b], local[a][b]));
                    }
                }
            }
            MassKind::Lumped => triplets.extend(tri.iter().map(|&v| (v, v, area / 3.0))),
        }
    }
    Ok(CsrMatrix::from_triplets(mesh.vertex_count(), triplets))
}

/// Stiffness and mass of one mesh, assembled once.
#[derive(Debug, Clone)]
pub struct FemOperators {
    pub stiffness: CsrMatrix,
    pub mass: CsrMatrix,
}

impl FemOperators {
    pub fn assemble(mesh: &SurfaceMesh, mass: MassKind) -> Result<Self> {
        Ok(FemOperators { stiffness: assemble_stiffness(mesh)?, mass: assemble_mass_with(mesh, mass)? })
    }

    /// `u^T K u`, the Dirichlet energy of the P1 interpolant.
    pub fn energy(&self, u: &[f64]) -> f64 {
        self.stiffness.quad_form(u)
    }

    /// `u^T M u`.
    pub fn mass_norm_sqr(&self, u: &[f64]) -> f64 {
        self.mass.quad_form(u)
    }

    /// `1^T M u`, the integral of `u`.
    pub fn integral(&self, u: &[f64]) -> f64 {
        self.mass.row_sums().iter().zip(u).map(|(m, x)| m * x).sum()
    }

    pub fn rayleigh_quotient(&self, u: &[f64]) -> Result<f64> {
        let denom = self.mass_norm_sqr(u);
        if !(denom > 0.0) {
            return Err(Error::ZeroFunction);
        }
        Ok(self.energy(u) / denom)
    }
}

/// `R[u] = u^T K u / u^T M u` with consistent mass.
pub fn rayleigh_quotient(mesh: &SurfaceMesh, u: &[f64]) -> Result<f64> {
    if u.len() != mesh.vertex_count() {
        return Err(Error::param("u", format!("expected {} samples, got {}", mesh.vertex_count(), u.len())));
    }
    FemOperators::assemble(mesh, MassKind::Consistent)?.rayleigh_quotient(u)
}
