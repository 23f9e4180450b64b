use std::f64::consts::PI;

use membrane_spectra::fem::{local_stiffness, rayleigh_quotient};
use membrane_spectra::mesh::{generate_disc, heron_area};
use membrane_spectra::transplant::{lift_to_hemisphere, mobius};
use num_complex::Complex64;
use proptest::prelude::*;

fn disc_point() -> impl Strategy<Value = Complex64> {
    (0.0..0.999f64, 0.0..2.0 * PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn triangle() -> impl Strategy<Value = [f64; 3]> {
    (0.1..2.0f64, 0.1..2.0f64, 0.05..0.95f64).prop_map(|(a, b, t)| {
        let lo = (a - b).abs();
        [a, b, lo + t * (a + b - lo)]
    })
}

proptest! {
    #[test]
    fn lift_lands_on_upper_hemisphere(z in disc_point()) {
        let x = lift_to_hemisphere(z).unwrap();
        prop_assert!((x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - 1.0).abs() < 1e-15);
        prop_assert!(x[2] >= 0.0);
    }

    #[test]
    fn mobius_preserves_circle_and_disc(a in disc_point(), t in 0.0..2.0 * PI, z in disc_point()) {
        let w = mobius(a, Complex64::from_polar(1.0, t)).unwrap();
        prop_assert!((w.norm() - 1.0).abs() < 1e-9);
        prop_assert!(mobius(a, z).unwrap().norm() < 1.0 + 1e-12);
        prop_assert!(mobius(a, a).unwrap().norm() < 1e-15);
    }

    #[test]
    fn area_and_stiffness_are_permutation_covariant(l in triangle()) {
        let area = heron_area(l);
        prop_assert!((heron_area([l[1], l[2], l[0]]) - area).abs() <= 1e-14 * area.max(1.0));
        let k = local_stiffness(l).unwrap();
        let kr = local_stiffness([l[1], l[2], l[0]]).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                prop_assert!((k[(a + 1) % 3][(b + 1) % 3] - kr[a][b]).abs() < 1e-9 * (1.0 + k[a][b].abs()));
            }
        }
    }

    #[test]
    fn stiffness_is_scale_invariant(l in triangle(), c in 0.01..100.0f64) {
        let k = local_stiffness(l).unwrap();
        let kc = local_stiffness(l.map(|x| c * x)).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                prop_assert!((k[a][b] - kc[a][b]).abs() < 1e-9 * (1.0 + k[a][b].abs()));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn rayleigh_quotient_scales_inversely_with_area(c in 0.1..10.0f64, seed in 0u64..1000) {
        let mesh = generate_disc(4).unwrap();
        let u: Vec<f64> = (0..mesh.vertex_count()).map(|i| ((i as u64 * 2654435761 + seed) % 1000) as f64 / 1000.0 - 0.5).collect();
        let r = rayleigh_quotient(&mesh, &u).unwrap();
        let rc = rayleigh_quotient(&mesh.scaled(c).unwrap(), &u).unwrap();
        prop_assert!((rc * c * c - r).abs() < 1e-10 * r);
    }
}
