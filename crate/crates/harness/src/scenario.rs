//! Scenario generators: the truncated circle and random Hermitian
//! generators.
//!
//! The circle scenario truncates `D = −i d/dθ` on `L²(𝕋)` to the Fourier
//! modes `m = −N..N`, so `D = diag(−N, …, N)` and multiplication by `e^{ikθ}`
//! becomes the shift `S_k e_m = e_{m+k}` (zero when `m + k` leaves the window).

use std::path::PathBuf;

use opderiv_core::generator::eig_hermitian;
use opderiv_core::io::read_operator;
use opderiv_core::random::{random_hermitian, random_operator, random_unitary};
use opderiv_core::{c, real, Operator, SelfAdjointGenerator, TolerancePolicy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// One Fourier coefficient `c_k` of a trigonometric polynomial `Σ c_k e^{ikθ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierCoefficient {
    pub k: i64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// How the operator `x` of a scenario is chosen.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum XKind {
    /// Circle only: the shift `S_k`.
    Shift { k: i64 },
    /// Circle only: the truncated Toeplitz matrix of `Σ c_k e^{ikθ}`.
    TrigPoly { coeffs: Vec<FourierCoefficient> },
    /// Circle only: a trigonometric polynomial of the given degree with
    /// coefficients uniform in the unit square.
    RandomSymbol { seed: u64, degree: usize },
    /// Random only: entries uniform in the unit square.
    #[default]
    Random,
    /// Random only: the Hermitian part of a random operator.
    Hermitian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScenarioKind {
    CircleFourier {
        modes: usize,
        x_kind: XKind,
    },
    Random {
        dim: usize,
        seed: u64,
        #[serde(default)]
        x_kind: XKind,
    },
    /// Matrices read from the shared JSON format; `y` defaults to `x*`.
    Custom {
        generator: PathBuf,
        x: PathBuf,
        #[serde(default)]
        y: Option<PathBuf>,
    },
}

/// A generator with two operators for the single- and two-operator checks.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub id: String,
    pub generator: SelfAdjointGenerator,
    pub x: Operator,
    pub y: Operator,
}

/// `S_k` on the `2N + 1` modes `−N..N`.
pub fn circle_shift(modes: usize, k: i64) -> Operator {
    let dim = 2 * modes + 1;
    Operator::from_fn(dim, |r, col| {
        real(if r as i64 - col as i64 == k { 1.0 } else { 0.0 })
    })
}

pub fn circle_generator(modes: usize) -> SelfAdjointGenerator {
    let n = modes as i64;
    let d: Vec<f64> = (-n..=n).map(|m| m as f64).collect();
    SelfAdjointGenerator::diagonal(&d)
}

fn toeplitz(modes: usize, coeffs: &[FourierCoefficient]) -> Operator {
    let dim = 2 * modes + 1;
    let mut x = Operator::zeros(dim);
    for coeff in coeffs {
        x = &x + &circle_shift(modes, coeff.k).scale(c(coeff.re, coeff.im));
    }
    x
}

pub fn gen_circle_scenario(
    modes: usize,
    x_kind: &XKind,
) -> Result<(SelfAdjointGenerator, Operator)> {
    if modes == 0 {
        return Err(HarnessError::config(
            "circle scenario needs at least one mode",
        ));
    }
    let max_k = 2 * modes as i64;
    let x = match x_kind {
        XKind::Shift { k } => {
            if k.abs() > max_k {
                return Err(HarnessError::config(format!(
                    "shift {k} exceeds 2N = {max_k}"
                )));
            }
            circle_shift(modes, *k)
        }
        XKind::TrigPoly { coeffs } => {
            if let Some(bad) = coeffs.iter().find(|f| f.k.abs() > max_k) {
                return Err(HarnessError::config(format!(
                    "coefficient index {} exceeds 2N = {max_k}",
                    bad.k
                )));
            }
            toeplitz(modes, coeffs)
        }
        XKind::RandomSymbol { seed, degree } => {
            if *degree as i64 > max_k {
                return Err(HarnessError::config(format!(
                    "degree {degree} exceeds 2N = {max_k}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let d = *degree as i64;
            let coeffs: Vec<FourierCoefficient> = (-d..=d)
                .map(|k| FourierCoefficient {
                    k,
                    re: rng.random_range(-1.0..=1.0),
                    im: rng.random_range(-1.0..=1.0),
                })
                .collect();
            toeplitz(modes, &coeffs)
        }
        XKind::Random | XKind::Hermitian => {
            return Err(HarnessError::config(
                "circle scenarios take shift, trig_poly or random_symbol",
            ))
        }
    };
    Ok((circle_generator(modes), x))
}

/// `D = U diag(λ) U*` on ℂᴺ with `U` a random unitary and `λ` stratified over
/// `[0, N]`: `λ_i` is uniform in `[i, i+1]`. A uniformly chosen eigenvalue is
/// uniform on `[0, N]`, the spectrum is simple, and every unit band
/// `]r−1, r]` holds one eigenvalue.
pub fn gen_random_scenario(
    dim: usize,
    seed: u64,
    x_kind: &XKind,
) -> Result<(SelfAdjointGenerator, Operator)> {
    if dim == 0 {
        return Err(HarnessError::config("random scenario needs dim ≥ 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_unitary(&mut rng, dim);
    let eigenvalues: Vec<f64> = (0..dim)
        .map(|i| rng.random_range(i as f64..=(i + 1) as f64))
        .collect();
    let generator = SelfAdjointGenerator::from_spectrum(&u, &eigenvalues)?;
    let x = match x_kind {
        XKind::Random => random_operator(&mut rng, dim),
        XKind::Hermitian => random_hermitian(&mut rng, dim),
        _ => {
            return Err(HarnessError::config(
                "random scenarios take x_kind random or hermitian",
            ))
        }
    };
    Ok((generator, x))
}

impl ScenarioKind {
    pub fn id(&self) -> String {
        match self {
            Self::CircleFourier { modes, x_kind } => format!("circle-{modes}-{}", x_label(x_kind)),
            Self::Random { dim, seed, x_kind } => {
                format!("random-{dim}-s{seed}-{}", x_label(x_kind))
            }
            Self::Custom { x, .. } => format!("custom-{}", x.display()),
        }
    }

    /// Builds the scenario; `seed` drives the second operator `y`.
    pub fn build(&self, seed: u64, tol: &TolerancePolicy) -> Result<Scenario> {
        let (generator, x, y) = match self {
            Self::CircleFourier { modes, x_kind } => {
                let (g, x) = gen_circle_scenario(*modes, x_kind)?;
                let degree = (*modes).min(2);
                let (_, y) = gen_circle_scenario(
                    *modes,
                    &XKind::RandomSymbol {
                        seed: seed ^ 0x9e37_79b9,
                        degree,
                    },
                )?;
                (g, x, y)
            }
            Self::Random {
                dim,
                seed: s,
                x_kind,
            } => {
                let (g, x) = gen_random_scenario(*dim, *s, x_kind)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
                (g, x, random_operator(&mut rng, *dim))
            }
            Self::Custom { generator, x, y } => {
                let d = read_operator(generator)?;
                let g = eig_hermitian(&d, tol)?;
                let x = read_operator(x)?;
                let y = match y {
                    Some(path) => read_operator(path)?,
                    None => x.adjoint(),
                };
                if x.dim() != g.dim() || y.dim() != g.dim() {
                    return Err(HarnessError::config(format!(
                        "custom scenario dimensions differ: D {}, x {}, y {}",
                        g.dim(),
                        x.dim(),
                        y.dim()
                    )));
                }
                (g, x, y)
            }
        };
        Ok(Scenario {
            id: self.id(),
            generator,
            x,
            y,
        })
    }
}

fn x_label(x: &XKind) -> String {
    match x {
        XKind::Shift { k } => format!("shift{k}"),
        XKind::TrigPoly { coeffs } => format!("trig{}", coeffs.len()),
        XKind::RandomSymbol { seed, degree } => format!("symbol{degree}s{seed}"),
        XKind::Random => "random".into(),
        XKind::Hermitian => "hermitian".into(),
    }
}
