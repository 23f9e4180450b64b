//! Transplanted coordinate energies do not depend on the conformal factor.
//!
//! cargo run --release --example conformal_invariance

use membrane_spectra::fixtures::RandomFactor;
use membrane_spectra::mesh::generate_conformal_disc;
use membrane_spectra::transplant::{dirichlet_energy, transplant_coords};
use membrane_spectra::verify::HEMISPHERE_ENERGY;
use num_complex::Complex64;

fn main() -> membrane_spectra::Result<()> {
    println!("target 4 pi / 3 = {HEMISPHERE_ENERGY:.6}");
    for seed in 0..5 {
        let phi = RandomFactor::new(seed);
        print!("seed {seed} |phi| <= {:.2}:", phi.bound());
        for rings in [8, 16, 32] {
            let (mesh, f) = generate_conformal_disc(rings, |z| phi.eval(z))?;
            let x = transplant_coords(&mesh, &f, Complex64::new(0.2, -0.1))?;
            let worst = x
                .components()
                .iter()
                .map(|u| dirichlet_energy(&mesh, u).map(|e| (e - HEMISPHERE_ENERGY).abs()))
                .collect::<membrane_spectra::Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            print!("  {rings} rings {worst:.2e}");
        }
        println!();
    }
    Ok(())
}
