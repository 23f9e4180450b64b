//! Fixed and free vibrations of the unit disc, against the Bessel zeros.
//!
//! cargo run --release --example disc_drum

use std::f64::consts::PI;

use membrane_spectra::fem::{solve_dirichlet, solve_neumann, SolverSettings};
use membrane_spectra::mesh::generate_disc;

const J0_1: f64 = 2.404_825_557_695_772_4; // first zero of J0
const J1P_1: f64 = 1.841_183_781_340_659_5; // first zero of J1'

fn main() -> membrane_spectra::Result<()> {
    let settings = SolverSettings::default();
    println!("{:>6} {:>7} {:>14} {:>10} {:>14} {:>10}", "rings", "verts", "lambda1*A", "rel err", "mu1*A", "rel err");
    for rings in [4, 8, 16, 32, 64] {
        let mesh = generate_disc(rings)?;
        let area = mesh.total_area();
        let lambda = solve_dirichlet(&mesh, 1, &settings)?.eigenvalues[0];
        let mu = solve_neumann(&mesh, 2, &settings)?.eigenvalues[0];
        let (lt, mt) = (J0_1 * J0_1 * PI, J1P_1 * J1P_1 * PI);
        println!(
            "{rings:>6} {:>7} {:>14.8} {:>10.2e} {:>14.8} {:>10.2e}",
            mesh.vertex_count(),
            lambda * area,
            (lambda * area - lt) / lt,
            mu * area,
            (mu * area - mt) / mt
        );
    }
    println!("continuum: j^2 pi = {:.8}, p^2 pi = {:.8}", J0_1 * J0_1 * PI, J1P_1 * J1P_1 * PI);
    Ok(())
}
