use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{edge_key, SurfaceMesh};
use crate::error::{Error, Result};

/// Genus, number of boundary contours and Euler characteristic of a bordered surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub genus_p: usize,
    pub contours_r: usize,
    pub euler_characteristic: i64,
}

/// The boundary contours as vertex cycles, each traversed with the surface on its left.
///
/// Loops are listed in order of their smallest starting vertex; the first
/// vertex is not repeated at the end.
pub fn boundary_loops(mesh: &SurfaceMesh) -> Result<Vec<Vec<usize>>> {
    let incidence = mesh.edge_incidence();
    let mut outgoing: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for tri in mesh.triangles() {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            if incidence[&edge_key(a, b)] == 1 {
                outgoing.entry(a).or_default().push(b);
            }
        }
    }
    if outgoing.is_empty() {
        return Err(Error::ClosedSurface);
    }
    for targets in outgoing.values_mut() {
        targets.sort_unstable();
        targets.reverse();
    }

    let mut loops = Vec::new();
    while let Some((&start, _)) = outgoing.iter().find(|(_, t)| !t.is_empty()) {
        let mut cycle = vec![start];
        let mut current = start;
        loop {
            let next = outgoing
                .get_mut(&current)
                .and_then(|t| t.pop())
                .ok_or_else(|| Error::InvalidMesh(format!("boundary walk stuck at vertex {current}")))?;
            if next == start {
                break;
            }
            cycle.push(next);
            current = next;
        }
        loops.push(cycle);
    }
    Ok(loops)
}

/// Euler characteristic, contour count and genus. Fails for closed meshes and
/// for counts that do not yield a non-negative integral genus.
pub fn topology(mesh: &SurfaceMesh) -> Result<Topology> {
    let v = mesh.vertex_count() as i64;
    let e = mesh.edge_count() as i64;
    let f = mesh.triangles().len() as i64;
    let euler = v - e + f;
    let contours = boundary_loops(mesh)?.len();
    let twice_genus = 2 - euler - contours as i64;
    if twice_genus < 0 || twice_genus % 2 != 0 {
        return Err(Error::NonIntegralGenus { euler, contours });
    }
    Ok(Topology { genus_p: (twice_genus / 2) as usize, contours_r: contours, euler_characteristic: euler })
}
