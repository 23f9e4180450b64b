use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SurfaceMesh;
use crate::error::{Error, Result};
use crate::transplant::MapSample;

/// On-disk mesh document.
///
/// Exactly one of `vertices` (3-D positions, metric induced) or
/// `edge_lengths` (`[i, j, length]` triples, intrinsic metric) is present.
/// Map values and degree travel alongside the mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 3]>>,
    pub triangles: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_lengths: Option<Vec<(usize, usize, f64)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
}

impl MeshFile {
    pub fn from_mesh(mesh: &SurfaceMesh, map: Option<&MapSample>) -> Self {
        let (vertices, edge_lengths) = match mesh.positions() {
            Some(p) => (Some(p.to_vec()), None),
            None => (None, Some(mesh.edges().map(|((a, b), l)| (a, b, l)).collect())),
        };
        MeshFile {
            vertices,
            triangles: mesh.triangles().to_vec(),
            edge_lengths,
            map: map.map(|m| m.values().iter().map(|z| [z.re, z.im]).collect()),
            degree: map.map(|m| m.degree()),
        }
    }

    pub fn to_mesh(&self) -> Result<SurfaceMesh> {
        match (&self.vertices, &self.edge_lengths) {
            (Some(v), None) => SurfaceMesh::from_positions(v.clone(), self.triangles.clone()),
            (None, Some(lengths)) => {
                let vertex_count = self.triangles.iter().flatten().map(|&v| v + 1).max().unwrap_or(0);
                SurfaceMesh::from_edge_lengths(vertex_count, self.triangles.clone(), lengths.iter().copied())
            }
            _ => Err(Error::InvalidMesh("exactly one of `vertices` or `edge_lengths` is required".into())),
        }
    }

    pub fn map_values(&self) -> Option<Vec<Complex64>> {
        self.map.as_ref().map(|m| m.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        crate::json::write_file(path, self)
    }
}
