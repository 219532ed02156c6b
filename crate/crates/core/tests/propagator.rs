use std::time::Instant;

use halfspace_qed::greens::{
    contour_kz_integral, contour_kz_integral_weighted, contour_kz_numeric, detour_equivalence_residual,
    detour_pieces, free_limit_residual, static_green_closed, static_green_numeric, wave_equation_residual,
    KernelWeight,
};
use halfspace_qed::kinematics::Polarization;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn residues_agree_with_contour_on_grid() {
    for &rho in &[0.3, 0.7, 1.0, 2.0, 4.0] {
        for &t in &[0.1, 0.3, 0.5, 0.8, 1.0] {
            for &n in &[1.5, 2.0, 5.0] {
                for sigma in Polarization::TRANSVERSE {
                    for weight in [KernelWeight::Unit, KernelWeight::Transverse] {
                        let closed = contour_kz_integral_weighted(sigma, weight, rho, t, -1.5, n).unwrap();
                        let numeric = contour_kz_numeric(sigma, weight, rho, t, -1.5, n, 1e-12).unwrap();
                        assert!(
                            (closed - numeric.value).norm() < 1e-9,
                            "{sigma} {weight:?} rho={rho} t={t} n={n}: {closed} vs {}",
                            numeric.value
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn scalar_modes_follow_the_same_contour() {
    for sigma in [Polarization::C, Polarization::G] {
        let closed = contour_kz_integral(sigma, 1.0, 0.4, -1.0, 2.0).unwrap();
        let numeric = contour_kz_numeric(sigma, KernelWeight::Unit, 1.0, 0.4, -1.0, 2.0, 1e-12).unwrap();
        assert!((closed - numeric.value).norm() < 1e-9);
    }
}

#[test]
fn detour_equivalence_grid() {
    for &n in &[1.5, 2.0, 5.0] {
        for &t in &[0.2, 0.5, 0.9] {
            for &z in &[-0.5, -3.0] {
                for sigma in Polarization::TRANSVERSE {
                    let r = detour_equivalence_residual(sigma, 1.0, t, z, n).unwrap();
                    assert!(r < 1e-10, "{sigma} n={n} t={t} z={z}: {r}");
                }
            }
        }
    }
}

#[test]
fn detour_for_c_mode_and_g_mismatch() {
    let (d, i) = detour_pieces(Polarization::C, KernelWeight::Unit, 1.0, 0.5, -1.0, 2.0).unwrap();
    assert!((d - i).norm() < 1e-10);
    // |T^R_G|^2 = n^2 |T^R_C|^2 while the R^L discontinuity is shared.
    let (dg, ig) = detour_pieces(Polarization::G, KernelWeight::Unit, 1.0, 0.5, -1.0, 2.0).unwrap();
    assert!((dg - d).norm() < 1e-14);
    assert!((ig - i * 4.0).norm() < 1e-10);
}

#[test]
fn conjugate_exponent_equals_sum_exponent_on_cut() {
    // On the cut k_z = -i kappa, so exp(i k_z z - i k_z^* z') = exp(i k_z (z + z')).
    let kz = Complex64::new(0.0, -0.37);
    for (z, zp) in [(-1.0, -2.0), (-0.3, -0.1), (-5.0, -0.5)] {
        let a = (Complex64::i() * kz * z - Complex64::i() * kz.conj() * zp).exp();
        let b = (Complex64::i() * kz * (z + zp)).exp();
        assert!((a - b).norm() < 1e-15);
    }
}

#[test]
fn wave_equation_terms_vanish() {
    for sigma in Polarization::TRANSVERSE {
        let r = wave_equation_residual(sigma, 2.0, 0.02).unwrap();
        assert!(r.reflected.estimate.abs() < 1e-6, "{sigma} reflected {:?}", r.reflected.table);
        assert!(r.mixed.estimate.abs() < 1e-6, "{sigma} mixed {:?}", r.mixed.table);
    }
    let vac = wave_equation_residual(Polarization::TE, 1.0, 0.02).unwrap();
    assert!(vac.reflected.estimate.abs() < 1e-12);
}

#[test]
fn static_green_grid_and_scaling() {
    let start = Instant::now();
    for &n in &[1.5, 2.0, 10.0] {
        for &a in &[0.5, 1.0, 5.0] {
            let c = static_green_closed(n, a).unwrap().value;
            let v = static_green_numeric(n, a).unwrap().value;
            assert!((v / c - 1.0).abs() < 1e-8);
            assert!(v < 0.0);
            let v2 = static_green_numeric(n, 2.0 * a).unwrap().value;
            assert!((v2 - v / 2.0).abs() < 1e-10);
        }
    }
    assert!(static_green_numeric(1.0, 1.0).unwrap().value.abs() < 1e-12);
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn free_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let samples: Vec<(f64, f64, f64)> = (0..100)
        .map(|_| (rng.gen_range(0.1..5.0), rng.gen_range(0.0..1.0), rng.gen_range(-5.0..-0.1)))
        .collect();
    for sigma in Polarization::ALL {
        assert_eq!(free_limit_residual(sigma, 1.0, &samples).unwrap(), 0.0);
        let near = free_limit_residual(sigma, 1.0 + 1e-8, &samples).unwrap();
        assert!(near > 0.0 && near < 1e-6, "{sigma}: {near}");
    }
}
