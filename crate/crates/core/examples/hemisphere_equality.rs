//! The hemisphere is the equality case: lambda1 = mu1 = mu2 = 2 and the
//! transplanted coordinates are the eigenfunctions themselves.
//!
//! cargo run --release --example hemisphere_equality

use std::f64::consts::PI;

use membrane_spectra::fem::SolverSettings;
use membrane_spectra::fixtures::{Fixture, FixtureKind};
use membrane_spectra::verify::verify_inequality;

fn main() -> membrane_spectra::Result<()> {
    let hemisphere = Fixture::new("hemisphere", FixtureKind::Cap { colatitude: PI / 2.0 });
    for rings in [8, 16, 32, 64] {
        let (mesh, f) = hemisphere.build(rings)?;
        let r = verify_inequality(&mesh, &f, &SolverSettings::default())?;
        println!(
            "rings {rings:>2}: lambda1 {:.6}  mu1 {:.6}  mu2 {:.6}  slack2 {:+.3e}  slack3 {:+.3e}  trial {:.6} / {:.6}",
            r.lambda1, r.mu1, r.mu2, r.slack2, r.slack3, r.trial_sum, r.trial_upper
        );
    }
    Ok(())
}
