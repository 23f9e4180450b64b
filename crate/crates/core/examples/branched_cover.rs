//! A degree-2 branched cover of the disc: the metric pulled back by z^2.
//! Energies of the transplanted coordinates double, and the bound becomes
//! 3 / (8 pi).
//!
//! cargo run --release --example branched_cover

use membrane_spectra::fem::SolverSettings;
use membrane_spectra::mesh::generate_branched_double_disc;
use membrane_spectra::transplant::{degree_estimate, winding_degree};
use membrane_spectra::verify::verify_inequality;

fn main() -> membrane_spectra::Result<()> {
    let (mesh, f) = generate_branched_double_disc(24)?;
    println!(
        "area {:.6} (continuum 2 pi), degree by area {:.4}, by winding {:.4}",
        mesh.total_area(),
        degree_estimate(&mesh, f.values())?,
        winding_degree(&mesh, f.values())?
    );
    let r = verify_inequality(&mesh, &f, &SolverSettings::default())?;
    let t = r.trial.as_ref().expect("balanced");
    println!("energies of x3, x1, x2: {:.5?} (continuum 8 pi / 3 = {:.5})", t.energies, 8.0 * std::f64::consts::PI / 3.0);
    println!("lambda1 {:.6}  mu1 {:.6}  mu2 {:.6}", r.lambda1, r.mu1, r.mu2);
    println!("lhs2 {:.6} >= rhs2 {:.6}, slack {:+.4e}", r.lhs2, r.rhs2, r.slack2);
    println!("lhs3 {:.4} <= rhs3 {:.4}, slack {:+.4e}", r.lhs3, r.rhs3, r.slack3);
    Ok(())
}
