use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{edge_key, EdgeKey, SurfaceMesh};
use crate::error::Result;
use crate::transplant::MapSample;

/// Midpoint (1-to-4) subdivision of the piecewise-flat metric.
///
/// New vertices are numbered after the old ones in ascending edge order. All
/// new edge lengths are halves of old edges or midlines, so the metric is
/// reproduced exactly.
pub fn subdivide(mesh: &SurfaceMesh) -> Result<SurfaceMesh> {
    subdivide_inner(mesh).map(|(m, _)| m)
}

/// Subdivides the mesh and carries a map along: interior midpoints take the
/// average of the endpoint values, boundary midpoints are pushed radially to
/// the unit circle.
pub fn subdivide_with_map(mesh: &SurfaceMesh, map: &MapSample) -> Result<(SurfaceMesh, MapSample)> {
    let (fine, midpoints) = subdivide_inner(mesh)?;
    let incidence = mesh.edge_incidence();
    let mut values = map.values().to_vec();
    values.resize(fine.vertex_count(), Complex64::new(0.0, 0.0));
    for (&(a, b), &m) in &midpoints {
        let mid = 0.5 * (map.values()[a] + map.values()[b]);
        values[m] = if incidence[&(a, b)] == 1 && mid.norm() > 0.0 { mid / mid.norm() } else { mid };
    }
    Ok((fine, MapSample::new(values, map.degree())?))
}

fn subdivide_inner(mesh: &SurfaceMesh) -> Result<(SurfaceMesh, BTreeMap<EdgeKey, usize>)> {
    let n = mesh.vertex_count();
    let midpoints: BTreeMap<EdgeKey, usize> = mesh.edges().enumerate().map(|(i, (k, _))| (k, n + i)).collect();
    let mid = |a: usize, b: usize| midpoints[&edge_key(a, b)];

    let mut triangles = Vec::with_capacity(4 * mesh.triangles().len());
    let mut lengths: BTreeMap<EdgeKey, f64> = BTreeMap::new();
    for &[a, b, c] in mesh.triangles() {
        let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
        triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        let (lab, lbc, lca) = (mesh.edge_length(a, b), mesh.edge_length(b, c), mesh.edge_length(c, a));
        lengths.insert(edge_key(a, ab), 0.5 * lab);
        lengths.insert(edge_key(ab, b), 0.5 * lab);
        lengths.insert(edge_key(b, bc), 0.5 * lbc);
        lengths.insert(edge_key(bc, c), 0.5 * lbc);
        lengths.insert(edge_key(c, ca), 0.5 * lca);
        lengths.insert(edge_key(ca, a), 0.5 * lca);
        lengths.insert(edge_key(ab, bc), 0.5 * lca);
        lengths.insert(edge_key(bc, ca), 0.5 * lab);
        lengths.insert(edge_key(ca, ab), 0.5 * lbc);
    }

    let fine = match mesh.positions() {
        Some(pos) => {
            let mut positions = pos.to_vec();
            for &(a, b) in midpoints.keys() {
                let (p, q) = (pos[a], pos[b]);
                positions.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]), 0.5 * (p[2] + q[2])]);
            }
            SurfaceMesh::from_positions(positions, triangles)?
        }
        None => SurfaceMesh::from_edge_lengths(
            n + midpoints.len(),
            triangles,
            lengths.into_iter().map(|((a, b), l)| (a, b, l)),
        )?,
    };
    Ok((fine, midpoints))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{generate_branched_double_disc, generate_disc, topology};

    #[test]
    fn subdivision_preserves_area_and_topology() {
        let mesh = generate_disc(3).unwrap();
        let fine = subdivide(&mesh).unwrap();
        assert_eq!(fine.triangles().len(), 4 * mesh.triangles().len());
        assert_eq!(fine.vertex_count(), mesh.vertex_count() + mesh.edge_count());
        assert!((fine.total_area() - mesh.total_area()).abs() < 1e-13);
        assert_eq!(topology(&fine).unwrap(), topology(&mesh).unwrap());
    }

    #[test]
    fn intrinsic_subdivision_with_map() {
        let (mesh, map) = generate_branched_double_disc(3).unwrap();
        let (fine, fine_map) = subdivide_with_map(&mesh, &map).unwrap();
        assert!((fine.total_area() - mesh.total_area()).abs() < 1e-13);
        assert_eq!(fine_map.values().len(), fine.vertex_count());
        let boundary = fine.boundary_vertices();
        for (v, z) in fine_map.values().iter().enumerate() {
            if boundary[v] {
                assert!((z.norm() - 1.0).abs() < 1e-12);
            }
        }
    }
}
