use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::eigen::{dense_generalized, shift_invert, EigenPairs};
use super::{FemOperators, MassKind};
use crate::error::{Error, Result};
use crate::mesh::SurfaceMesh;
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenMethod {
    /// Dense up to `dense_max_dofs`, shift-invert above.
    #[default]
    Auto,
    Dense,
    ShiftInvert,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub method: EigenMethod,
    pub mass: MassKind,
    /// Relative residual target of the iterative solver.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub dense_max_dofs: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            method: EigenMethod::Auto,
            mass: MassKind::Consistent,
            tolerance: 1e-10,
            max_iterations: 1000,
            dense_max_dofs: 400,
        }
    }
}

/// Eigenvalues below this fraction of the largest computed eigenvalue
/// count as the constant Neumann mode.
pub const ZERO_MODE_RATIO: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub boundary_condition: BoundaryCondition,
    /// Ascending; for Neumann the zero mode is excluded, so `eigenvalues[0]` is mu_1.
    pub eigenvalues: Vec<f64>,
    /// Per-vertex samples, `M`-normalized. Dirichlet ones are zero on the boundary.
    pub eigenfunctions: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    /// `mu_1 - |mu_0|` for Neumann solves.
    pub zero_mode_gap: Option<f64>,
    pub mesh_id: String,
    pub iterations: usize,
}

/// External JSON shape of a [`SpectralResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResultFile {
    pub bc: BoundaryCondition,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero_mode_gap: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenfunctions: Option<Vec<Vec<f64>>>,
}

impl SpectralResult {
    pub fn to_file(&self, with_eigenfunctions: bool) -> SpectralResultFile {
        SpectralResultFile {
            bc: self.boundary_condition,
            eigenvalues: self.eigenvalues.clone(),
            residuals: self.residuals.clone(),
            zero_mode_gap: self.zero_mode_gap,
            eigenfunctions: with_eigenfunctions.then(|| self.eigenfunctions.clone()),
        }
    }
}

/// Shift for `K + shift M`: a tenth of the Weyl-type scale `4 pi / A`, so it
/// scales with the metric and sits below the low spectrum.
fn shift_for(area: f64) -> f64 {
    0.1 * 4.0 * PI / area
}

fn solve_pairs(k: &CsrMatrix, m: &CsrMatrix, count: usize, area: f64, settings: &SolverSettings) -> Result<EigenPairs> {
    let dense = match settings.method {
        EigenMethod::Dense => true,
        EigenMethod::ShiftInvert => false,
        EigenMethod::Auto => k.dim() <= settings.dense_max_dofs,
    };
    if dense {
        dense_generalized(k, m, count)
    } else {
        shift_invert(k, m, count, shift_for(area), settings.tolerance, settings.max_iterations)
    }
}

/// The `k` smallest Dirichlet eigenpairs (fixed membrane).
pub fn solve_dirichlet(mesh: &SurfaceMesh, k: usize, settings: &SolverSettings) -> Result<SpectralResult> {
    if k < 1 {
        return Err(Error::param("k", "must be at least 1"));
    }
    let boundary = mesh.boundary_vertices();
    let interior: Vec<usize> = (0..mesh.vertex_count()).filter(|&v| !boundary[v]).collect();
    if interior.len() < k {
        return Err(Error::NotEnoughDofs { requested: k, available: interior.len() });
    }
    let ops = FemOperators::assemble(mesh, settings.mass)?;
    let ki = ops.stiffness.principal_submatrix(&interior);
    let mi = ops.mass.principal_submatrix(&interior);
    let pairs = solve_pairs(&ki, &mi, k, mesh.total_area(), settings)?;
    let residuals = pairs.residuals(&ki, &mi);
    let eigenfunctions = pairs
        .vectors
        .iter()
        .map(|u| {
            let mut full = vec![0.0; mesh.vertex_count()];
            for (&v, &x) in interior.iter().zip(u) {
                full[v] = x;
            }
            full
        })
        .collect();
    Ok(SpectralResult {
        boundary_condition: BoundaryCondition::Dirichlet,
        eigenvalues: pairs.values,
        eigenfunctions,
        residuals,
        zero_mode_gap: None,
        mesh_id: mesh.fingerprint(),
        iterations: pairs.iterations,
    })
}

/// The `k` smallest nonzero Neumann eigenpairs (free membrane). The
/// boundary condition is natural, so the full system is solved and the
/// constant mode removed afterwards.
pub fn solve_neumann(mesh: &SurfaceMesh, k: usize, settings: &SolverSettings) -> Result<SpectralResult> {
    if k < 1 {
        return Err(Error::param("k", "must be at least 1"));
    }
    let n = mesh.vertex_count();
    if n < k + 1 {
        return Err(Error::NotEnoughDofs { requested: k + 1, available: n });
    }
    let ops = FemOperators::assemble(mesh, settings.mass)?;
    // One extra pair so a second zero mode would be visible.
    let count = (k + 2).min(n);
    let pairs = solve_pairs(&ops.stiffness, &ops.mass, count, mesh.total_area(), settings)?;

    // The largest computed eigenvalue is nonzero unless the mesh falls apart.
    let scale = pairs.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let zeros: Vec<usize> = (0..pairs.values.len()).filter(|&i| pairs.values[i].abs() < ZERO_MODE_RATIO * scale).collect();
    match zeros.len() {
        0 => return Err(Error::InvalidMesh("no constant Neumann mode detected".into())),
        1 => {}
        count => return Err(Error::MultipleZeroModes { count }),
    }
    let zero_value = pairs.values[zeros[0]].abs();

    let keep: Vec<usize> = (0..pairs.values.len()).filter(|&i| i != zeros[0]).take(k).collect();
    if keep.len() < k {
        return Err(Error::NotEnoughDofs { requested: k + 1, available: n });
    }
    let eigenvalues: Vec<f64> = keep.iter().map(|&i| pairs.values[i]).collect();
    let gap = eigenvalues[0] - zero_value;
    let eigenfunctions: Vec<Vec<f64>> = keep.iter().map(|&i| pairs.vectors[i].clone()).collect();
    let residuals = keep.iter().map(|&i| super::eigen::residual(&ops.stiffness, &ops.mass, pairs.values[i], &pairs.vectors[i])).collect();
    Ok(SpectralResult {
        boundary_condition: BoundaryCondition::Neumann,
        eigenvalues,
        eigenfunctions,
        residuals,
        zero_mode_gap: Some(gap),
        mesh_id: mesh.fingerprint(),
        iterations: pairs.iterations,
    })
}
