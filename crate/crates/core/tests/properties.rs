use opderiv_core::c as cplx;
use opderiv_core::checks::{
    alpha_homomorphism_check, band_eq_check, binomial_eq_check, leibniz_check, star_check,
};
use opderiv_core::generator::spectral_band_projections;
use opderiv_core::random::{random_generator, random_operator};
use opderiv_core::reflexivity::graph_injectivity;
use opderiv_core::space::{nullspace, numerical_rank};
use opderiv_core::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

#[derive(Debug)]
struct Case {
    g: SelfAdjointGenerator,
    x: Operator,
    y: Operator,
}

fn case(seed: u64, dim: usize, spread: f64) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_generator(&mut rng, dim, 0.0, spread);
    let x = random_operator(&mut rng, dim);
    let y = random_operator(&mut rng, dim);
    Case { g, x, y }
}

fn cases() -> impl Strategy<Value = Case> {
    (any::<u64>(), 1usize..=5, 0.5f64..4.0).prop_map(|(s, d, w)| case(s, d, w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unitary_group_law(c in cases(), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let lhs = &unitary_group(&c.g, s) * &unitary_group(&c.g, t);
        let rhs = unitary_group(&c.g, s + t);
        prop_assert!(lhs.distance(&rhs).unwrap() < 1e-12);
        let back = alpha(&c.g, &alpha(&c.g, &c.x, t).unwrap(), -t).unwrap();
        prop_assert!(back.distance(&c.x).unwrap() < 1e-12 * (1.0 + c.x.norm()));
    }

    #[test]
    fn band_projections_partition_unity(c in cases()) {
        let projections = spectral_band_projections(&c.g);
        let dim = c.g.dim();
        let mut sum = Operator::zeros(dim);
        for (i, (_, p)) in projections.iter().enumerate() {
            prop_assert!((p * p).distance(p).unwrap() < 1e-12);
            prop_assert!(p.hermitian_defect() < 1e-12);
            for (_, q) in &projections[i + 1..] {
                prop_assert!((p * q).norm() < 1e-12);
            }
            sum = &sum + p;
        }
        prop_assert!(sum.distance(&Operator::identity(dim)).unwrap() < 1e-12);
        let indices: Vec<i64> = projections.iter().map(|(r, _)| *r).collect();
        prop_assert!(indices.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn nullspace_dimension_matches_constructed_rank(
        seed in any::<u64>(),
        rows in 1usize..10,
        cols in 1usize..10,
        rank in 0usize..10,
    ) {
        let rank = rank.min(rows).min(cols);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let left = random_operator(&mut rng, rows.max(rank).max(1)).into_matrix();
        let right = random_operator(&mut rng, cols.max(rank).max(1)).into_matrix();
        let m = left.view((0, 0), (rows, rank)).into_owned()
            * right.view((0, 0), (rank, cols)).into_owned();
        let null = nullspace(&m, 1e-9);
        prop_assert_eq!(null.len(), cols - rank);
        prop_assert_eq!(numerical_rank(&m, 1e-9), rank);
        for v in &null {
            prop_assert!((&m * v).norm() < 1e-10 * (1.0 + m.norm()));
            prop_assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn leibniz_and_star(c in cases()) {
        prop_assert!(leibniz_check(&c.g, &c.x, &c.y, &tol()).unwrap().pass);
        prop_assert!(star_check(&c.g, &c.x, &tol()).unwrap().pass);
    }

    #[test]
    fn alpha_is_multiplicative(c in cases(), t in -5.0f64..5.0) {
        prop_assert!(alpha_homomorphism_check(&c.g, &c.x, &c.y, &[t], &tol()).unwrap().pass);
    }

    #[test]
    fn binomial_and_band_forms_agree_with_iteration(c in cases()) {
        prop_assert!(binomial_eq_check(&c.g, &c.x, 5, &tol()).unwrap().pass);
        prop_assert!(band_eq_check(&c.g, &c.x, 5, &tol()).unwrap().pass);
    }

    #[test]
    fn chain_norm_is_submultiplicative(c in cases(), n in 0usize..=3) {
        let nx = cn_norm(&derivative_chain(&c.g, &c.x, n).unwrap());
        let ny = cn_norm(&derivative_chain(&c.g, &c.y, n).unwrap());
        let nxy = cn_norm(&derivative_chain(&c.g, &(&c.x * &c.y), n).unwrap());
        prop_assert!(nxy <= nx * ny + 1e-9);
    }

    #[test]
    fn phi_is_linear(c in cases(), n in 0usize..=3, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let combo = &c.x.scale(cplx(a, b)) + &c.y;
        let lhs = phi(&c.g, &combo, n).unwrap();
        let px = phi(&c.g, &c.x, n).unwrap();
        let py = phi(&c.g, &c.y, n).unwrap();
        let rhs = &px.operator().scale(cplx(a, b)) + py.operator();
        prop_assert!(lhs.operator().distance(&rhs).unwrap() < 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn phi_restricts_to_lower_orders(c in cases(), n in 1usize..=4) {
        let full = phi(&c.g, &c.x, n).unwrap();
        for j in 0..n {
            let lower = phi(&c.g, &c.x, j).unwrap();
            prop_assert!(full.restrict(j).operator().distance(lower.operator()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn phi_ignores_scalar_shift_of_generator(c in cases(), n in 0usize..=3, shift in -3.0f64..3.0) {
        let a = phi(&c.g, &c.x, n).unwrap();
        let b = phi(&c.g.shifted(shift), &c.x, n).unwrap();
        let scale = (1.0 + 2.0 * (c.g.norm() + shift.abs())).powi(n as i32) * (1.0 + c.x.norm());
        prop_assert!(a.operator().distance(b.operator()).unwrap() < 1e-12 * scale);
    }

    #[test]
    fn q_is_p_of_shifted_generator_and_a_graph(c in cases(), n in 1usize..=3) {
        let blocks = n + 2;
        let q = build_qn(&c.g, n, blocks, &tol()).unwrap();
        let p_shifted = build_pn(&c.g.shifted(1.0), n, blocks, &tol()).unwrap();
        prop_assert!(q.distance(&p_shifted).unwrap() < 1e-12);
        let p = build_pn(&c.g, n, blocks, &tol()).unwrap();
        prop_assert_eq!(p.dim(), c.g.dim());
        prop_assert!(graph_injectivity(&p, c.g.dim(), n) > 1e-6);
        let image = phi(&c.g, &c.x, n).unwrap().pad(blocks);
        prop_assert!(p.invariance_residual(&image).unwrap() < 1e-10 * (1.0 + image.norm()));
    }
}
