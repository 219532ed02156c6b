use halfspace_qed::fresnel::{
    conjugation_residual, identity_expected, identity_residuals, left_amplitudes, right_amplitudes,
    IdentityFamily,
};
use halfspace_qed::kinematics::{make_wavevector, CutSide, MediumParams, Polarization, WaveVector};
use num_complex::Complex64;
use proptest::prelude::*;

fn propagating(kx: f64, ky: f64, kz: f64, n: f64) -> WaveVector {
    make_wavevector([kx, ky], Complex64::new(kz, 0.0), &MediumParams::new(n).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn real_identities_hold(kx in -3.0..3.0f64, ky in -3.0..3.0f64, kz in 0.01..3.0f64,
                            neg in any::<bool>(), n in 1.0..20.0f64) {
        let k = propagating(kx, ky, if neg { -kz } else { kz }, n);
        for r in identity_residuals(&k).unwrap() {
            if identity_expected(r.family, r.relation, r.sigma) {
                prop_assert!(r.residual < 1e-12, "{:?}", r);
            }
        }
    }

    #[test]
    fn imaginary_identities_hold(kp in 0.01..5.0f64, frac in 0.001..0.999f64, n in 1.01..20.0f64,
                                 right in any::<bool>()) {
        let kappa = frac * kp * (n * n - 1.0).sqrt() / n;
        let side = if right { CutSide::Right } else { CutSide::Left };
        let k = WaveVector::on_side([kp, 0.0], Complex64::new(0.0, -kappa), side, n).unwrap();
        for r in identity_residuals(&k).unwrap() {
            prop_assert_eq!(r.family, IdentityFamily::Imaginary);
            prop_assert!(r.residual < 1e-12, "{:?}", r);
        }
        for sigma in Polarization::ALL {
            prop_assert!(conjugation_residual(sigma, &k).unwrap() < 1e-12);
        }
    }
}

#[test]
fn g_mode_transmission_is_off_by_index_squared() {
    // Relations 1-4 and 6 balance single transmission amplitudes against
    // reflections. With the tabulated G amplitudes T^L_G = T^L_C / n and
    // T^R_G = n T^R_C they fail; rescaling restores them exactly.
    let k = propagating(0.4, -0.2, 0.7, 2.0);
    let res = identity_residuals(&k).unwrap();
    let g6 = res
        .iter()
        .find(|r| r.sigma == Polarization::G && r.relation == 6)
        .unwrap();
    assert!(g6.residual > 0.1);
    let n = 2.0;
    let (kz, kzd) = (k.k_z(), k.k_z_d());
    let lg = left_amplitudes(Polarization::G, kz, kzd, n);
    let lc = left_amplitudes(Polarization::C, kz, kzd, n);
    let rg = right_amplitudes(Polarization::G, kz, kzd, n);
    let rc = right_amplitudes(Polarization::C, kz, kzd, n);
    assert!((lg.t * n - lc.t).norm() < 1e-15);
    assert!((rg.t - rc.t * n).norm() < 1e-15);
    assert!((lg.t * rg.t - lc.t * rc.t).norm() < 1e-14);
}

#[test]
fn both_readings_of_flipped_arguments_agree() {
    // Negating (k_z, k_z^d) jointly or only inside the coefficient formulas
    // gives the same numbers: all coefficients are ratios of homogeneous
    // linear forms in (k_z, k_z^d).
    let k = propagating(0.5, 0.1, 1.3, 3.0);
    for sigma in Polarization::ALL {
        let a = left_amplitudes(sigma, k.k_z(), k.k_z_d(), 3.0);
        let b = left_amplitudes(sigma, -k.k_z(), -k.k_z_d(), 3.0);
        assert!((a.r - b.r).norm() < 1e-15 && (a.t - b.t).norm() < 1e-15);
    }
}

#[test]
fn evanescent_modes_are_totally_reflected() {
    let k = WaveVector::on_side([1.0, 0.0], Complex64::new(0.0, -0.3), CutSide::Left, 1.5).unwrap();
    for sigma in Polarization::ALL {
        let r = right_amplitudes(sigma, k.k_z(), k.k_z_d(), 1.5).r;
        assert!((r.norm() - 1.0).abs() < 1e-15);
    }
}

#[test]
fn identities_rejected_below_cut() {
    let k = make_wavevector([1.0, 0.0], Complex64::new(0.0, -0.99), &MediumParams::new(2.0).unwrap()).unwrap();
    assert!(identity_residuals(&k).is_err());
}
