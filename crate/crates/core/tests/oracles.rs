use opderiv_core::derivation::circle_shift_factor;
use opderiv_core::probes::{fd_higher_check, fd_weak_derivative, lipschitz_check};
use opderiv_core::reflexivity::{alg_of_family, invariance_check};
use opderiv_core::triangular::{
    conjugation_identity_check, homomorphism_check, norm_sandwich_check,
};
use opderiv_core::*;

fn circle(n: i64, k: i64) -> (SelfAdjointGenerator, Operator) {
    let dim = (2 * n + 1) as usize;
    let d: Vec<f64> = (-n..=n).map(|m| m as f64).collect();
    let s = Operator::from_fn(dim, |r, col| {
        real(if r as i64 == col as i64 + k { 1.0 } else { 0.0 })
    });
    (SelfAdjointGenerator::diagonal(&d), s)
}

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

#[test]
fn circle_generator_commutes_shift_to_itself() {
    let (g, s1) = circle(2, 1);
    assert_eq!(s1.dim(), 5);
    let comm = g.base().commutator(&s1).unwrap();
    assert_eq!(comm, s1);
    for k in -3..=3 {
        let (g, sk) = circle(4, k);
        for j in 1..=4 {
            let expected = sk.scale(circle_shift_factor(k, j));
            assert!(iterated_d(&g, &sk, j).unwrap().distance(&expected).unwrap() < 1e-12);
        }
    }
}

#[test]
fn phi_of_circle_shift_has_scaled_diagonals() {
    let (g, s1) = circle(3, 1);
    let p = phi(&g, &s1, 2).unwrap();
    for i in 0..3 {
        assert!(p.block(i, i).distance(&s1).unwrap() < 1e-15);
    }
    assert!(p.block(0, 1).distance(&s1.scale(I)).unwrap() < 1e-15);
    assert!(p.block(1, 2).distance(&s1.scale(I)).unwrap() < 1e-15);
    assert!(p.block(0, 2).distance(&s1.scale(real(-0.5))).unwrap() < 1e-15);
    assert!(p.block(1, 0).norm() == 0.0);
}

#[test]
fn phi_of_product_of_circle_shifts() {
    let (g, s1) = circle(4, 1);
    let (_, s2) = circle(4, 2);
    let (_, s3) = circle(4, 3);
    assert_eq!(&s2 * &s1, s3);
    let cx = derivative_chain(&g, &s2, 2).unwrap();
    let cy = derivative_chain(&g, &s1, 2).unwrap();
    let r = homomorphism_check(&cx, &cy, &tol()).unwrap();
    assert!(r.pass && r.residuals[0] <= 1e-9);
    let p = phi(&g, &s3, 2).unwrap();
    for j in 0..=2usize {
        let expected = s3.scale(circle_shift_factor(3, j) / real(derivation::factorial(j)));
        assert!(p.block(0, j).distance(&expected).unwrap() < 1e-12);
    }
}

#[test]
fn norm_sandwich_on_circle_shift() {
    let (g, s1) = circle(3, 1);
    let chain = derivative_chain(&g, &s1, 2).unwrap();
    assert!((cn_norm(&chain) - 2.5).abs() < 1e-12);
    let r = norm_sandwich_check(&chain, &tol());
    assert!(r.pass);
    assert!(r.metrics["phi_norm"] >= 2.5 / 3.0 && r.metrics["phi_norm"] <= 2.5 + 1e-12);
}

#[test]
fn conjugation_on_circle_n3() {
    let (g, s1) = circle(4, 1);
    assert_eq!(g.dim(), 9);
    let chain = derivative_chain(&g, &s1, 3).unwrap();
    let r = conjugation_identity_check(&g, &chain, &tol()).unwrap();
    assert!(r.pass && r.residuals[0] <= 1e-8);
}

#[test]
fn finite_differences_on_circle_shift() {
    let (g, s1) = circle(3, 1);
    let fd = fd_weak_derivative(&g, &s1, 1e-3).unwrap();
    assert!(fd.distance(&s1.scale(I)).unwrap() < 1e-6);

    let mut e0 = CVector::zeros(7);
    e0[0] = real(1.0);
    let e1 = {
        let mut v = CVector::zeros(7);
        v[1] = real(1.0);
        v
    };
    // ⟨α_t(S₁)e₀, e₁⟩ = e^{it}, second derivative −e^{it}
    let h = probes::default_fd_step(&g);
    let r = fd_higher_check(&g, &s1, 2, &e0, &e1, 0.0, h, 0.05, 1.9, &tol()).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn lipschitz_ratio_on_circle_shift() {
    let (g, s1) = circle(3, 1);
    let r = lipschitz_check(&g, &s1, &[0.1, 1.0, 10.0], &tol()).unwrap();
    assert!(r.pass);
    assert!((r.residuals[0] - 20.0 * 0.05f64.sin()).abs() < 1e-12);
}

#[test]
fn reflexivity_full_c3_first_order() {
    let g = SelfAdjointGenerator::diagonal(&[0.3, 1.1, 2.7]);
    let spec = VonNeumannAlgebraSpec::Full { dim: 3 };
    let r = reflexivity_check(&spec, &g, 1, &ReflexivityOptions::default(), &tol()).unwrap();
    assert_eq!((r.dim_expected, r.dim_computed), (9, 9));
    assert!(r.max_residual <= 1e-8);
    assert!(r.max_membership_residual <= 1e-8);
}

#[test]
fn reflexivity_masa_c3_second_order() {
    let g = SelfAdjointGenerator::diagonal(&[0.3, 1.1, 2.7]);
    let spec = VonNeumannAlgebraSpec::DiagonalMasa { dim: 3 };
    let r = reflexivity_check(&spec, &g, 2, &ReflexivityOptions::default(), &tol()).unwrap();
    assert_eq!((r.dim_expected, r.dim_computed), (3, 3));
    assert!(r.max_residual <= 1e-8);
}

#[test]
fn corner_solve_full_c2_reconstructs_from_leading_block() {
    let g = SelfAdjointGenerator::diagonal(&[0.0, 1.0]);
    let spec = VonNeumannAlgebraSpec::Full { dim: 2 };
    let family = build_ln(&spec, &g, 1, &ReflexivityOptions::default(), &tol()).unwrap();
    let space = alg_of_family(&family, Some(1), &tol());
    assert_eq!(space.dim(), 4);
    for x in space.basis() {
        let m = x.matrix();
        let x00 = Operator::new(m.view((0, 0), (2, 2)).into_owned()).unwrap();
        let rebuilt = phi(&g, &x00, 1).unwrap().pad(3);
        assert!(x.distance(&rebuilt).unwrap() < 1e-10);
    }
}

#[test]
fn ln_is_invariant_under_phi_of_generators() {
    let g = SelfAdjointGenerator::diagonal(&[0.3, 1.1, 2.7]);
    let spec = VonNeumannAlgebraSpec::BlockDiagonal {
        pattern: vec![2, 1],
    };
    for n in 1..=2 {
        let opts = ReflexivityOptions::default();
        let family = build_ln(&spec, &g, n, &opts, &tol()).unwrap();
        let images: Vec<Operator> = spec
            .generators()
            .iter()
            .map(|x| phi(&g, x, n).unwrap().pad(family.ambient_blocks))
            .collect();
        let r = invariance_check(&family, &images, &tol()).unwrap();
        assert!(r.pass);
        assert!(r.max_residual() <= 1e-10);
    }
}
