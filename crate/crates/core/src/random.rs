//! Seeded random operators for scenarios and property sweeps.

use nalgebra::DVector;
use rand::Rng;

use crate::generator::SelfAdjointGenerator;
use crate::operator::{c, Operator};

/// Entries with real and imaginary parts uniform in [−1, 1].
pub fn random_operator<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Operator {
    Operator::from_fn(dim, |_, _| {
        c(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
    })
}

/// `(A + A*)/2` for a random `A`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Operator {
    let a = random_operator(rng, dim);
    (&a + &a.adjoint()).scale_real(0.5)
}

/// Q factor of a random complex matrix, columns rescaled to unit phase on R's diagonal.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Operator {
    let a = random_operator(rng, dim);
    let qr = a.into_matrix().qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..dim {
        let d = r[(k, k)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            let mut col = q.column_mut(k);
            col *= phase;
        }
    }
    Operator::from_matrix(q)
}

/// A Hermitian generator `U·diag(λ)·U*` with `λ` uniform in `[lo, hi]` and
/// `U` a random unitary.
pub fn random_generator<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    lo: f64,
    hi: f64,
) -> SelfAdjointGenerator {
    let u = random_unitary(rng, dim);
    let eigenvalues: Vec<f64> = (0..dim).map(|_| rng.random_range(lo..=hi)).collect();
    SelfAdjointGenerator::from_spectrum(&u, &eigenvalues).expect("dimensions agree")
}

/// Random unit vector in ℂᴺ.
pub fn random_unit_vector<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
) -> DVector<num_complex::Complex64> {
    loop {
        let v = DVector::from_fn(dim, |_, _| {
            c(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
        });
        let n = v.norm();
        if n > 1e-3 {
            return v / num_complex::Complex64::new(n, 0.0);
        }
    }
}
