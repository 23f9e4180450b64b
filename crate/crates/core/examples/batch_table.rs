//! The built-in fixture suite as a slack table on stdout.
//!
//! cargo run --release --example batch_table

use membrane_spectra::fem::SolverSettings;
use membrane_spectra::fixtures::{fixture_suite, verify_suite};

fn main() -> membrane_spectra::Result<()> {
    let results = verify_suite(&fixture_suite(), 8, 3, &SolverSettings::default());
    println!("{:<14} {:>4} {:>12} {:>10} {:>12} {:>10} {:>9}", "fixture", "d", "slack2", "eps2", "slack3", "eps3", "|a|");
    for (fixture, reports) in results {
        let r = reports?.pop().expect("three levels");
        let eps = r.epsilon_fem.unwrap_or_default();
        let a = r.balance.map_or(f64::NAN, |b| b.a.norm());
        println!(
            "{:<14} {:>4} {:>+12.4e} {:>10.2e} {:>+12.4e} {:>10.2e} {:>9.5}",
            fixture.name, r.degree, r.slack2, eps.slack2, r.slack3, eps.slack3, a
        );
    }
    Ok(())
}
