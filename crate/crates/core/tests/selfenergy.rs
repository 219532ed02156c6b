use halfspace_qed::quad::{richardson, Tol};
use halfspace_qed::selfenergy::*;

const TOL: Tol = DEFAULT_QUAD_TOL;

#[test]
fn tm_quadrature_reference_values() {
    let q = sigma_tm_quad(100.0, 2.0, TOL).unwrap();
    eprintln!("{:?} err {} evals {}", q.coeffs, q.error, q.evaluations);
    // 40-digit evaluation with the xi integral done in closed form
    assert!((q.coeffs.c_par - 0.47896076407168926).abs() < 1e-9);
    assert!((q.coeffs.c_z - 2.1547985055288663).abs() < 1e-9);
    assert!((q.coeffs.c0 + 0.0077364300518983270).abs() < 1e-12);
}

#[test]
fn split_pieces_sum_to_fused() {
    for &(p0a, n) in &[(100.0, 2.0), (20.0, 1.5), (200.0, 5.0)] {
        let full = sigma_tm_quad(p0a, n, TOL).unwrap().coeffs;
        let sum: SigmaCoefficients = sigma_tm_split_quad(p0a, n, TOL).unwrap().iter().map(|q| q.coeffs).sum();
        assert!(full.max_abs_diff(&sum) < 1e-9, "{p0a} {n}: {full:?} {sum:?}");
    }
}

#[test]
fn next_order_by_extrapolation() {
    let n = 2.0;
    let lead = sigma_leading(n).unwrap();
    let b = sigma_next(n).unwrap();
    let mut samples = [Vec::new(), Vec::new(), Vec::new()];
    for &p0a in &[100.0, 200.0, 400.0, 800.0] {
        let q = sigma_radiative_quad(p0a, n, TOL).unwrap().coeffs;
        let d = (q - lead) * (std::f64::consts::PI * p0a);
        for (k, v) in [d.c0, d.c_par, d.c_z].into_iter().enumerate() {
            samples[k].push((1.0 / p0a, v));
        }
    }
    let want = [b.c0, b.c_par, b.c_z];
    for k in 0..3 {
        let r = richardson(&samples[k], 1).unwrap();
        eprintln!("{k}: {} +- {} want {}", r.estimate, r.error, want[k]);
        assert!((r.estimate - want[k]).abs() < 1e-4 * (1.0 + want[k].abs()));
    }
}
