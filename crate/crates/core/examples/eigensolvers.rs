//! Dense and shift-invert solvers on the same disc.
//!
//! cargo run --release --example eigensolvers

use std::time::Instant;

use membrane_spectra::fem::{solve_neumann, EigenMethod, SolverSettings};
use membrane_spectra::mesh::generate_disc;

fn main() -> membrane_spectra::Result<()> {
    let mesh = generate_disc(18)?;
    for method in [EigenMethod::Dense, EigenMethod::ShiftInvert] {
        let settings = SolverSettings { method, ..SolverSettings::default() };
        let start = Instant::now();
        let r = solve_neumann(&mesh, 5, &settings)?;
        println!("{method:?} ({} vertices, {:.2?}, {} iterations)", mesh.vertex_count(), start.elapsed(), r.iterations);
        for (mu, res) in r.eigenvalues.iter().zip(&r.residuals) {
            println!("  mu = {mu:.12}  residual {res:.1e}");
        }
        println!("  zero-mode gap {:.6}", r.zero_mode_gap.unwrap_or(f64::NAN));
    }
    Ok(())
}
