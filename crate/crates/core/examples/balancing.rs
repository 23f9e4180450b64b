//! Center-of-gravity balancing for a disc whose metric is concentrated
//! near z = 0.5.
//!
//! cargo run --release --example balancing

use membrane_spectra::balance::{balance_center_of_mass, center_of_gravity};
use membrane_spectra::mesh::generate_conformal_disc;
use num_complex::Complex64;

fn main() -> membrane_spectra::Result<()> {
    let bump = |z: Complex64| (-(z - Complex64::new(0.5, 0.0)).norm_sqr() / 0.05).exp();
    let (mesh, f) = generate_conformal_disc(24, bump)?;
    let g0 = center_of_gravity(&mesh, &f, Complex64::new(0.0, 0.0))?;
    println!("area {:.6}, G(0) = ({:+.6}, {:+.6})", mesh.total_area(), g0[0], g0[1]);

    let b = balance_center_of_mass(&mesh, &f)?;
    let g = center_of_gravity(&mesh, &f, b.a)?;
    println!("a = {:.10} after {} iterations", b.a, b.iterations);
    println!("G(a) = ({:+.3e}, {:+.3e}), residual / area {:.2e}", g[0], g[1], b.residual / mesh.total_area());

    let turned = balance_center_of_mass(&mesh, &f.rotated(std::f64::consts::FRAC_PI_2))?;
    println!("rotating f by i moves a to {:.10} (i a = {:.10})", turned.a, Complex64::i() * b.a);
    println!("{}", membrane_spectra::json::to_string(&b)?);
    Ok(())
}
