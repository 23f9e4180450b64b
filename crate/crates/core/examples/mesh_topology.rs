//! Genus and boundary contours from the combinatorics alone.
//!
//! cargo run --example mesh_topology

use membrane_spectra::mesh::{boundary_loops, generate_annulus, generate_disc, topology, unit_square, MeshFile, SurfaceMesh};

fn report(name: &str, mesh: &SurfaceMesh) -> membrane_spectra::Result<()> {
    let t = topology(mesh)?;
    let loops = boundary_loops(mesh)?;
    println!(
        "{name:<8} V={:<4} F={:<4} chi={:<3} genus={} contours={} loop lengths {:?}",
        mesh.vertex_count(),
        mesh.triangles().len(),
        t.euler_characteristic,
        t.genus_p,
        t.contours_r,
        loops.iter().map(Vec::len).collect::<Vec<_>>()
    );
    Ok(())
}

fn main() -> membrane_spectra::Result<()> {
    report("disc", &generate_disc(4)?)?;
    report("annulus", &generate_annulus(0.4, 2)?)?;
    report("square", &unit_square(5)?)?;

    // A 3x3 flat torus with one triangle removed.
    let id = |i: usize, j: usize| (j % 3) * 3 + i % 3;
    let mut triangles = Vec::new();
    for j in 0..3 {
        for i in 0..3 {
            triangles.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            triangles.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    triangles.pop();
    let mut lengths = Vec::new();
    for t in &triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            let diagonal = (a % 3 != b % 3) && (a / 3 != b / 3);
            lengths.push((a, b, if diagonal { 2f64.sqrt() } else { 1.0 }));
        }
    }
    let holed = SurfaceMesh::from_edge_lengths(9, triangles, lengths)?;
    report("torus-1", &holed)?;

    let json = membrane_spectra::json::to_string(&MeshFile::from_mesh(&unit_square(1)?, None))?;
    println!("{json}");
    Ok(())
}
