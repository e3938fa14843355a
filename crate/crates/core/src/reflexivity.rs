//! Invariant-subspace families and the reflexivity characterization
//! `𝓡ₙ = {X ∈ Alg(𝓛ₙ) : EₙXEₙ = X}`.
//!
//! Subspaces of `H⊗ℂⁿ⁺¹` live in an ambient space of `n + 1 + padding`
//! blocks of size `N`; the padding blocks stand in for the rest of
//! `ℓ²(ℕ₀, H)` so that the corner condition `X = EₙXEₙ` is a real constraint.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::derivation::factorial;
use crate::error::{OpError, Result};
use crate::generator::{eig_hermitian, SelfAdjointGenerator};
use crate::linalg;
use crate::operator::{real, CMatrix, CVector, Operator, I};
use crate::report::CheckReport;
use crate::space::{nullspace, nullspace_of_constraints, Constraint, OperatorSpace};
use crate::subspace::Subspace;
use crate::tolerance::TolerancePolicy;
use crate::triangular::{phi, CornerOperator};

/// A von Neumann algebra 𝓜 on ℂᴺ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VonNeumannAlgebraSpec {
    /// All of B(ℂᴺ).
    Full { dim: usize },
    /// Diagonal matrices.
    DiagonalMasa { dim: usize },
    /// `M_{k₁} ⊕ M_{k₂} ⊕ …` along consecutive coordinate blocks.
    BlockDiagonal { pattern: Vec<usize> },
    /// The von Neumann algebra generated by the given operators, i.e. the
    /// bicommutant of `{g, g*}`.
    #[serde(skip)]
    Generated {
        dim: usize,
        generators: Vec<Operator>,
    },
}

impl fmt::Display for VonNeumannAlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Full { dim } => write!(f, "full({dim})"),
            Self::DiagonalMasa { dim } => write!(f, "diagonal_masa({dim})"),
            Self::BlockDiagonal { pattern } => {
                let parts: Vec<String> = pattern.iter().map(|k| k.to_string()).collect();
                write!(f, "block_diagonal({})", parts.join("+"))
            }
            Self::Generated { dim, generators } => {
                write!(f, "generated({dim}, {} generators)", generators.len())
            }
        }
    }
}

impl VonNeumannAlgebraSpec {
    pub fn dim(&self) -> usize {
        match self {
            Self::Full { dim } | Self::DiagonalMasa { dim } | Self::Generated { dim, .. } => *dim,
            Self::BlockDiagonal { pattern } => pattern.iter().sum(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim() == 0 {
            return Err(OpError::InvalidArgument(
                "algebra dimension must be ≥ 1".into(),
            ));
        }
        match self {
            Self::BlockDiagonal { pattern } if pattern.contains(&0) => Err(
                OpError::InvalidArgument("block sizes must be positive".into()),
            ),
            Self::Generated { dim, generators } => {
                for g in generators {
                    if g.dim() != *dim {
                        return Err(OpError::DimensionMismatch {
                            expected: *dim,
                            found: g.dim(),
                        });
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn block_units(pattern: &[usize]) -> Vec<Operator> {
        let dim: usize = pattern.iter().sum();
        let mut units = Vec::new();
        let mut start = 0;
        for &k in pattern {
            for col in start..start + k {
                for row in start..start + k {
                    units.push(Operator::unit(dim, row, col));
                }
            }
            start += k;
        }
        units
    }

    /// A generating set of 𝓜 as a *-algebra.
    pub fn generators(&self) -> Vec<Operator> {
        match self {
            Self::Full { dim } => Self::block_units(&[*dim]),
            Self::DiagonalMasa { dim } => Self::block_units(&vec![1; *dim]),
            Self::BlockDiagonal { pattern } => Self::block_units(pattern),
            Self::Generated { generators, .. } => generators.clone(),
        }
    }

    /// 𝓜 as a linear space. Presets use their closed forms; generated
    /// algebras are computed as bicommutants.
    pub fn basis(&self, tol: &TolerancePolicy) -> Result<OperatorSpace> {
        self.validate()?;
        match self {
            Self::Generated { dim, .. } => {
                let first = commutant(self, tol)?;
                let commutant_spec = Self::Generated {
                    dim: *dim,
                    generators: first.basis().to_vec(),
                };
                commutant(&commutant_spec, tol)
            }
            _ => OperatorSpace::from_independent(self.dim(), &self.generators(), tol.rank_cutoff),
        }
    }
}

/// `𝓜′ = {Y : [Y, g] = [Y, g*] = 0 for every generator g}`.
pub fn commutant(spec: &VonNeumannAlgebraSpec, tol: &TolerancePolicy) -> Result<OperatorSpace> {
    spec.validate()?;
    let dim = spec.dim();
    let mut targets = Vec::new();
    for g in spec.generators() {
        let adj = g.adjoint();
        if adj != g {
            targets.push(adj);
        }
        targets.push(g);
    }
    let constraints: Vec<Constraint> = targets
        .iter()
        .map(|g| -> Constraint {
            Box::new(move |y: &Operator| y.commutator(g).expect("dims").into_matrix())
        })
        .collect();
    Ok(nullspace_of_constraints(&constraints, dim, tol.rank_cutoff))
}

/// Options for building invariant-subspace families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LatOptions {
    pub seed: u64,
    /// Random Hermitian combinations of commutant elements always included.
    pub initial_combinations: usize,
    /// Extra combinations tried before giving up.
    pub max_extra_combinations: usize,
}

impl Default for LatOptions {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            initial_combinations: 3,
            max_extra_combinations: 20,
        }
    }
}

/// Eigenspaces of a Hermitian operator, eigenvalues grouped within
/// `1e−8 · (1 + ‖h‖)`.
fn eigenspaces(h: &Operator, tol: &TolerancePolicy) -> Result<Vec<Subspace>> {
    let g = eig_hermitian(h, tol)?;
    let gap = 1e-8 * (1.0 + g.norm());
    let vals = g.eigenvalues();
    let u = g.eigenvectors().matrix();
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=vals.len() {
        if k == vals.len() || vals[k] - vals[k - 1] > gap {
            let cols: Vec<usize> = (start..k).collect();
            out.push(Subspace::from_orthonormal(u.select_columns(&cols), 1e-8)?);
            start = k;
        }
    }
    Ok(out)
}

fn push_distinct(family: &mut Vec<Subspace>, candidate: Subspace) {
    if candidate.dim() == 0 {
        return;
    }
    let duplicate = family
        .iter()
        .any(|s| s.dim() == candidate.dim() && s.distance(&candidate).is_ok_and(|d| d < 1e-8));
    if !duplicate {
        family.push(candidate);
    }
}

fn random_combination(rng: &mut ChaCha8Rng, hermitian: &[Operator], dim: usize) -> Operator {
    let mut sum = Operator::zeros(dim);
    for h in hermitian {
        sum = &sum + &h.scale_real(rng.random_range(-1.0..=1.0));
    }
    sum
}

/// A finite family of 𝓜-invariant subspaces with `Alg(family) = 𝓜`.
///
/// Members are the eigenspaces of the Hermitian parts of a commutant basis
/// and of random Hermitian combinations of them. More combinations are added
/// until the self-check `Alg(family) = 𝓜` passes or the cap is reached.
pub fn lat_family(
    spec: &VonNeumannAlgebraSpec,
    opts: &LatOptions,
    tol: &TolerancePolicy,
) -> Result<Vec<Subspace>> {
    let dim = spec.dim();
    let algebra = spec.basis(tol)?;
    let comm = commutant(spec, tol)?;

    let mut hermitian = Vec::new();
    for y in comm.basis() {
        let re = (y + &y.adjoint()).scale_real(0.5);
        let im = (y - &y.adjoint()).scale(real(0.5) / I);
        for h in [re, im] {
            if h.norm() > tol.rank_cutoff {
                hermitian.push(h);
            }
        }
    }

    let mut family = Vec::new();
    for h in &hermitian {
        for s in eigenspaces(h, tol)? {
            push_distinct(&mut family, s);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.initial_combinations {
        for s in eigenspaces(&random_combination(&mut rng, &hermitian, dim), tol)? {
            push_distinct(&mut family, s);
        }
    }

    let mut attempts = 0;
    loop {
        let alg = alg_of_subspaces(dim, &family, None, tol);
        let membership = tol.alg_scaled(&[]);
        if alg.dim() == algebra.dim() && alg.contains_space(&algebra, membership)? {
            return Ok(family);
        }
        if attempts == opts.max_extra_combinations {
            return Err(OpError::LatGenerationFailed {
                attempts,
                expected: algebra.dim(),
                found: alg.dim(),
            });
        }
        attempts += 1;
        for s in eigenspaces(&random_combination(&mut rng, &hermitian, dim), tol)? {
            push_distinct(&mut family, s);
        }
    }
}

/// Which part of `𝓛ₙ` a subspace belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "label", content = "index", rename_all = "snake_case")]
pub enum FamilyLabel {
    /// `F ⊗ e₀` for the k-th member `F` of the 𝓜 lattice family.
    LatM(usize),
    H(usize),
    P(usize),
    Q(usize),
}

/// The family `𝓛ₙ` inside an ambient space of `ambient_blocks` copies of ℂᴺ.
#[derive(Debug, Clone)]
pub struct InvariantFamily {
    pub base_dim: usize,
    pub order: usize,
    pub ambient_blocks: usize,
    pub members: Vec<(FamilyLabel, Subspace)>,
}

impl InvariantFamily {
    pub fn ambient_dim(&self) -> usize {
        self.base_dim * self.ambient_blocks
    }

    pub fn subspaces(&self) -> impl Iterator<Item = &Subspace> {
        self.members.iter().map(|(_, s)| s)
    }

    /// The same family without any `Q_j`.
    pub fn without_q(&self) -> Self {
        Self {
            members: self
                .members
                .iter()
                .filter(|(l, _)| !matches!(l, FamilyLabel::Q(_)))
                .cloned()
                .collect(),
            ..self.clone()
        }
    }
}

/// `Pₙ = {Tₙ(ξ⊗eₙ)}` built from `D + shift·I`, i.e. the vectors
/// `Σ_{j=0}^{n} (1/j!) (i(D+shift))ʲ ξ ⊗ e_{n−j}`, in `ambient_blocks` blocks.
/// `shift = 1` gives `Qₙ`.
pub fn build_graph_subspace(
    generator: &SelfAdjointGenerator,
    n: usize,
    shift: f64,
    ambient_blocks: usize,
    tol: &TolerancePolicy,
) -> Result<Subspace> {
    if n == 0 {
        return Err(OpError::InvalidOrder {
            order: 0,
            min: 1,
            max: usize::MAX,
        });
    }
    if ambient_blocks <= n {
        return Err(OpError::InvalidArgument(format!(
            "ambient must hold at least {} blocks, got {ambient_blocks}",
            n + 1
        )));
    }
    let base = generator.dim();
    let idd = generator.base().add_scalar_identity(real(shift)).scale(I);
    let mut vectors = CMatrix::zeros(base * ambient_blocks, base);
    let mut power = Operator::identity(base);
    for j in 0..=n {
        if j > 0 {
            power = &power * &idd;
        }
        let block = n - j;
        vectors
            .view_mut((block * base, 0), (base, base))
            .copy_from(&(power.matrix() * real(1.0 / factorial(j))));
    }
    Ok(Subspace::from_spanning(&vectors, tol.rank_cutoff))
}

pub fn build_pn(
    generator: &SelfAdjointGenerator,
    n: usize,
    ambient_blocks: usize,
    tol: &TolerancePolicy,
) -> Result<Subspace> {
    build_graph_subspace(generator, n, 0.0, ambient_blocks, tol)
}

pub fn build_qn(
    generator: &SelfAdjointGenerator,
    n: usize,
    ambient_blocks: usize,
    tol: &TolerancePolicy,
) -> Result<Subspace> {
    build_graph_subspace(generator, n, 1.0, ambient_blocks, tol)
}

/// Smallest singular value of the block-`n` rows of an orthonormal basis of
/// `Pₙ`; positive iff the projection onto `H⊗eₙ` is injective on `Pₙ`.
pub fn graph_injectivity(p: &Subspace, base_dim: usize, n: usize) -> f64 {
    let rows = p.basis().rows(n * base_dim, base_dim).into_owned();
    linalg::singular_values(&rows)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// Options for [`build_ln`] and [`reflexivity_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReflexivityOptions {
    /// Zero blocks appended after `H_n`.
    pub padding_blocks: usize,
    pub lat: LatOptions,
    /// Also solve without the `Q_j` members to record whether they matter.
    pub probe_q: bool,
}

impl Default for ReflexivityOptions {
    fn default() -> Self {
        Self {
            padding_blocks: 1,
            lat: LatOptions::default(),
            probe_q: true,
        }
    }
}

/// `𝓛ₙ = {F⊗e₀ : F ∈ lat_family(𝓜)} ∪ {H_j} ∪ {P_j} ∪ {Q_j}`.
pub fn build_ln(
    spec: &VonNeumannAlgebraSpec,
    generator: &SelfAdjointGenerator,
    n: usize,
    opts: &ReflexivityOptions,
    tol: &TolerancePolicy,
) -> Result<InvariantFamily> {
    let base = spec.dim();
    if generator.dim() != base {
        return Err(OpError::DimensionMismatch {
            expected: base,
            found: generator.dim(),
        });
    }
    let blocks = n + 1 + opts.padding_blocks;
    let ambient = base * blocks;
    let mut members = Vec::new();
    for (k, f) in lat_family(spec, &opts.lat, tol)?.into_iter().enumerate() {
        members.push((FamilyLabel::LatM(k), f.embed(ambient, 0)));
    }
    for j in 0..=n {
        members.push((
            FamilyLabel::H(j),
            Subspace::coordinate_block(ambient, 0, base * (j + 1)),
        ));
    }
    for j in 1..=n {
        members.push((FamilyLabel::P(j), build_pn(generator, j, blocks, tol)?));
    }
    for j in 1..=n {
        members.push((FamilyLabel::Q(j), build_qn(generator, j, blocks, tol)?));
    }
    Ok(InvariantFamily {
        base_dim: base,
        order: n,
        ambient_blocks: blocks,
        members,
    })
}

/// `Alg(𝒢)`: operators leaving every subspace invariant, optionally also
/// supported in the leading `corner_len` coordinates.
///
/// Invariance of `W` is `W⊥* X W = 0`, which on column-major `vec(X)` is the
/// block `Wᵀ ⊗ W⊥*`. With a corner the unknowns are only the corner entries.
pub fn alg_of_subspaces(
    ambient_dim: usize,
    subspaces: &[Subspace],
    corner_len: Option<usize>,
    tol: &TolerancePolicy,
) -> OperatorSpace {
    let len = corner_len.unwrap_or(ambient_dim).min(ambient_dim);
    let blocks: Vec<CMatrix> = subspaces
        .iter()
        .filter(|s| s.dim() > 0 && s.dim() < ambient_dim)
        .map(|s| {
            let w = s.basis().rows(0, len).into_owned();
            let comp = s.orthogonal_complement().basis().adjoint();
            let comp = comp.columns(0, len).into_owned();
            w.transpose().kronecker(&comp)
        })
        .collect();
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut stacked = CMatrix::zeros(rows, len * len);
    let mut offset = 0;
    for b in &blocks {
        stacked.view_mut((offset, 0), b.shape()).copy_from(b);
        offset += b.nrows();
    }
    let basis: Vec<Operator> = if rows == 0 {
        OperatorSpace::full(len).basis().to_vec()
    } else {
        nullspace(&stacked, tol.rank_cutoff)
            .iter()
            .map(|v| Operator::from_vectorized(len, v))
            .collect()
    };
    let basis = basis
        .into_iter()
        .map(|x| {
            let mut m = CMatrix::zeros(ambient_dim, ambient_dim);
            m.view_mut((0, 0), (len, len)).copy_from(x.matrix());
            Operator::from_matrix(m)
        })
        .collect();
    OperatorSpace::from_orthonormal_basis(ambient_dim, basis)
}

/// `Alg(𝓛ₙ)`, intersected with `{X : EₙXEₙ = X}` when `corner` is `Some(n)`.
pub fn alg_of_family(
    family: &InvariantFamily,
    corner: Option<usize>,
    tol: &TolerancePolicy,
) -> OperatorSpace {
    let subspaces: Vec<Subspace> = family.subspaces().cloned().collect();
    alg_of_subspaces(
        family.ambient_dim(),
        &subspaces,
        corner.map(|n| family.base_dim * (n + 1)),
        tol,
    )
}

/// Checks that every member of the family is invariant under every operator.
pub fn invariance_check(
    family: &InvariantFamily,
    operators: &[Operator],
    tol: &TolerancePolicy,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("invariance", "", f64::NAN);
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for op in operators {
        let bound = tol.alg_scaled(&[op.norm()]);
        for s in family.subspaces() {
            let r = s.invariance_residual(op)?;
            report.residuals.push(r);
            worst = worst.max(r / bound);
            pass &= r <= bound;
        }
    }
    report.tolerance = tol.tol_alg;
    report.pass = pass;
    report.metric("max_relative_residual", worst * tol.tol_alg);
    Ok(report)
}

/// Per-basis-element diagnostics of a reflexivity solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisDiagnostic {
    pub index: usize,
    /// `‖X − Φₙ(X₀₀)‖`.
    pub reconstruction_residual: f64,
    /// Frobenius distance from `X₀₀` to 𝓜.
    pub algebra_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReflexivityReport {
    pub scenario: String,
    pub n: usize,
    pub dim_expected: usize,
    pub dim_computed: usize,
    /// Largest reconstruction residual over the computed basis.
    pub max_residual: f64,
    /// Largest distance from `Φₙ(g)` to the computed space, `g` in a basis of 𝓜.
    pub max_membership_residual: f64,
    /// Largest `‖(I−P)Φₙ(g)P‖` over the family.
    pub max_invariance_residual: f64,
    /// Dimension of the solution space without the `Q_j`, when probed.
    pub dim_without_q: Option<usize>,
    #[serde(rename = "needed_Q")]
    pub needed_q: bool,
    pub tolerance: f64,
    pub pass: bool,
    pub diagnostics: Vec<BasisDiagnostic>,
}

/// Solves `{X ∈ Alg(𝓛ₙ) : EₙXEₙ = X}` and compares it with `Φₙ(𝓜)`.
///
/// Passes when the solution space has dimension `dim 𝓜`, every basis
/// element `X` satisfies `‖X − Φₙ(X₀₀)‖ ≤ tol_alg · (1 + ‖Φₙ(X₀₀)‖)` with
/// `X₀₀ ∈ 𝓜`, and `Φₙ` of a basis of 𝓜 lies in the solution space and leaves
/// every family member invariant. A failing solve is returned as
/// [`OpError::ReflexivityViolation`].
pub fn reflexivity_check(
    spec: &VonNeumannAlgebraSpec,
    generator: &SelfAdjointGenerator,
    n: usize,
    opts: &ReflexivityOptions,
    tol: &TolerancePolicy,
) -> Result<ReflexivityReport> {
    let base = spec.dim();
    let algebra = spec.basis(tol)?;
    let family = build_ln(spec, generator, n, opts, tol)?;
    let blocks = family.ambient_blocks;
    let corner_len = base * (n + 1);
    let solution = alg_of_family(&family, Some(n), tol);

    let mut pass = solution.dim() == algebra.dim();
    let mut diagnostics = Vec::with_capacity(solution.dim());
    let mut max_residual: f64 = 0.0;
    for (index, x) in solution.basis().iter().enumerate() {
        let corner = CornerOperator::from_operator(
            base,
            n,
            Operator::from_matrix(
                x.matrix()
                    .view((0, 0), (corner_len, corner_len))
                    .into_owned(),
            ),
        )?;
        let x00 = corner.block(0, 0);
        let rebuilt = phi(generator, &x00, n)?;
        let residual = x.distance(&rebuilt.pad(blocks))?;
        let algebra_residual = algebra.membership_residual(&x00)?;
        let bound = tol.alg_scaled(&[rebuilt.norm()]);
        pass &= residual <= bound && algebra_residual <= bound;
        max_residual = max_residual.max(residual);
        diagnostics.push(BasisDiagnostic {
            index,
            reconstruction_residual: residual,
            algebra_residual,
        });
    }

    let mut max_membership: f64 = 0.0;
    let mut max_invariance: f64 = 0.0;
    for g in algebra.basis() {
        let image = phi(generator, g, n)?.pad(blocks);
        let norm = image.frobenius_norm();
        let bound = tol.alg_scaled(&[norm]);
        let membership = solution.membership_residual(&image)?;
        max_membership = max_membership.max(membership);
        pass &= membership <= bound;
        for s in family.subspaces() {
            let r = s.invariance_residual(&image)?;
            max_invariance = max_invariance.max(r);
            pass &= r <= bound;
        }
    }

    let dim_without_q = if opts.probe_q && n > 0 {
        Some(alg_of_family(&family.without_q(), Some(n), tol).dim())
    } else {
        None
    };

    let report = ReflexivityReport {
        scenario: spec.to_string(),
        n,
        dim_expected: algebra.dim(),
        dim_computed: solution.dim(),
        max_residual,
        max_membership_residual: max_membership,
        max_invariance_residual: max_invariance,
        dim_without_q,
        needed_q: dim_without_q.is_some_and(|d| d > solution.dim()),
        tolerance: tol.tol_alg,
        pass,
        diagnostics,
    };
    if report.pass {
        Ok(report)
    } else {
        Err(OpError::ReflexivityViolation(Box::new(report)))
    }
}

/// Column `ξ ⊗ e_j` in an ambient space of `blocks` copies of ℂᴺ.
pub fn tensor_basis_vector(xi: &CVector, j: usize, blocks: usize) -> CVector {
    let base = xi.len();
    let mut v = CVector::zeros(base * blocks);
    v.rows_mut(j * base, base).copy_from(xi);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::c;

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn commutant_presets() {
        let full = commutant(&VonNeumannAlgebraSpec::Full { dim: 3 }, &tol()).unwrap();
        assert_eq!(full.dim(), 1);
        assert!(full.membership_residual(&Operator::identity(3)).unwrap() < 1e-12);

        let masa = commutant(&VonNeumannAlgebraSpec::DiagonalMasa { dim: 3 }, &tol()).unwrap();
        assert_eq!(masa.dim(), 3);
        assert!(
            masa.membership_residual(&Operator::diagonal(&[1.0, -2.0, 5.0]))
                .unwrap()
                < 1e-12
        );

        let id = VonNeumannAlgebraSpec::Generated {
            dim: 3,
            generators: vec![Operator::identity(3)],
        };
        assert_eq!(commutant(&id, &tol()).unwrap().dim(), 9);
    }

    #[test]
    fn lat_family_presets() {
        let opts = LatOptions::default();
        let full = lat_family(&VonNeumannAlgebraSpec::Full { dim: 3 }, &opts, &tol()).unwrap();
        assert_eq!(full.len(), 1);
        assert_eq!(full[0].dim(), 3);

        let masa = lat_family(
            &VonNeumannAlgebraSpec::DiagonalMasa { dim: 2 },
            &opts,
            &tol(),
        )
        .unwrap();
        let alg = alg_of_subspaces(2, &masa, None, &tol());
        assert_eq!(alg.dim(), 2);
        for axis in 0..2 {
            let s = Subspace::coordinate_block(2, axis, 1);
            assert!(masa.iter().any(|m| m.distance(&s).unwrap() < 1e-10));
        }

        let block = VonNeumannAlgebraSpec::BlockDiagonal {
            pattern: vec![2, 1],
        };
        let fam = lat_family(&block, &opts, &tol()).unwrap();
        assert_eq!(alg_of_subspaces(3, &fam, None, &tol()).dim(), 5);
    }

    #[test]
    fn lat_family_for_tensor_factor_algebra() {
        // M = M₂ ⊗ I₂, commutant I₂ ⊗ M₂
        let sx = Operator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let sz = Operator::diagonal(&[1.0, -1.0]);
        let kron = |a: &Operator| {
            Operator::from_fn(4, |r, col| {
                if r % 2 == col % 2 {
                    a.get(r / 2, col / 2)
                } else {
                    real(0.0)
                }
            })
        };
        let spec = VonNeumannAlgebraSpec::Generated {
            dim: 4,
            generators: vec![kron(&sx), kron(&sz)],
        };
        assert_eq!(spec.basis(&tol()).unwrap().dim(), 4);
        let fam = lat_family(&spec, &LatOptions::default(), &tol()).unwrap();
        assert_eq!(alg_of_subspaces(4, &fam, None, &tol()).dim(), 4);
        let starved = LatOptions {
            initial_combinations: 0,
            max_extra_combinations: 0,
            ..LatOptions::default()
        };
        match lat_family(&spec, &starved, &tol()) {
            Ok(f) => assert_eq!(alg_of_subspaces(4, &f, None, &tol()).dim(), 4),
            Err(e) => assert!(matches!(e, OpError::LatGenerationFailed { .. })),
        }
    }

    #[test]
    fn alg_of_small_families() {
        assert_eq!(alg_of_subspaces(2, &[], None, &tol()).dim(), 4);
        let axis = Subspace::coordinate_block(2, 0, 1);
        let upper = alg_of_subspaces(2, &[axis], None, &tol());
        assert_eq!(upper.dim(), 3);
        assert!(upper.membership_residual(&Operator::unit(2, 1, 0)).unwrap() > 0.99);
        assert!(upper.membership_residual(&Operator::unit(2, 0, 1)).unwrap() < 1e-12);
        assert!(upper.product_closure_residual() < 1e-12);
    }

    #[test]
    fn p1_by_hand() {
        // T₁(ξ⊗e₁) = ξ⊗e₁ + iDξ⊗e₀ with D = diag(0, 1)
        let g = SelfAdjointGenerator::diagonal(&[0.0, 1.0]);
        let p = build_pn(&g, 1, 2, &tol()).unwrap();
        assert_eq!(p.dim(), 2);
        let v1 = CVector::from_vec(vec![real(0.0), real(0.0), real(1.0), real(0.0)]);
        let v2 = CVector::from_vec(vec![real(0.0), c(0.0, 1.0), real(0.0), real(1.0)]);
        let mut expected = CMatrix::zeros(4, 2);
        expected.set_column(0, &v1);
        expected.set_column(1, &(v2 / real(2f64.sqrt())));
        let want = Subspace::from_orthonormal(expected, 1e-12).unwrap();
        assert!(p.distance(&want).unwrap() < 1e-12);
    }

    #[test]
    fn pn_for_zero_generator_is_last_block() {
        let g = SelfAdjointGenerator::diagonal(&[0.0, 0.0, 0.0]);
        let p = build_pn(&g, 2, 3, &tol()).unwrap();
        assert!(p.distance(&Subspace::coordinate_block(9, 6, 3)).unwrap() < 1e-12);
    }

    #[test]
    fn qn_is_pn_of_shifted_generator() {
        let g = SelfAdjointGenerator::diagonal(&[0.3, 1.7, 2.2]);
        for n in 1..=3 {
            let q = build_qn(&g, n, n + 2, &tol()).unwrap();
            let p_shift = build_pn(&g.shifted(1.0), n, n + 2, &tol()).unwrap();
            assert!(q.distance(&p_shift).unwrap() < 1e-12);
            let p = build_pn(&g, n, n + 2, &tol()).unwrap();
            assert!(graph_injectivity(&p, 3, n) > 1e-3);
        }
    }

    #[test]
    fn pn_is_invariant_under_phi() {
        let g = SelfAdjointGenerator::diagonal(&[0.3, 1.7, 2.2]);
        let x = Operator::from_fn(3, |r, col| c(r as f64 - col as f64, (r + col) as f64 * 0.3));
        for n in 1..=3 {
            let p = build_pn(&g, n, n + 1, &tol()).unwrap();
            let image = phi(&g, &x, n).unwrap();
            assert!(p.invariance_residual(image.operator()).unwrap() < 1e-10);
        }
    }

    #[test]
    fn graph_subspace_rejects_order_zero() {
        let g = SelfAdjointGenerator::diagonal(&[0.3]);
        assert!(build_pn(&g, 0, 2, &tol()).is_err());
        assert!(build_pn(&g, 2, 2, &tol()).is_err());
    }

    #[test]
    fn ln_enumeration_full_c2() {
        let g = SelfAdjointGenerator::diagonal(&[0.0, 1.0]);
        let spec = VonNeumannAlgebraSpec::Full { dim: 2 };
        let fam = build_ln(&spec, &g, 1, &ReflexivityOptions::default(), &tol()).unwrap();
        let labels: Vec<FamilyLabel> = fam.members.iter().map(|m| m.0).collect();
        assert_eq!(
            labels,
            vec![
                FamilyLabel::LatM(0),
                FamilyLabel::H(0),
                FamilyLabel::H(1),
                FamilyLabel::P(1),
                FamilyLabel::Q(1)
            ]
        );
        let none = ReflexivityOptions {
            padding_blocks: 0,
            ..Default::default()
        };
        let fam0 = build_ln(&spec, &g, 0, &none, &tol()).unwrap();
        assert_eq!(fam0.members.len(), 2);
        assert!(fam0.subspaces().all(|s| s.dim() == 2));
    }

    #[test]
    fn corner_solution_full_c2() {
        let g = SelfAdjointGenerator::diagonal(&[0.0, 1.0]);
        let spec = VonNeumannAlgebraSpec::Full { dim: 2 };
        let report =
            reflexivity_check(&spec, &g, 1, &ReflexivityOptions::default(), &tol()).unwrap();
        assert_eq!(report.dim_computed, 4);
        assert!(report.max_residual < 1e-10);
        assert!(report.needed_q);
    }

    #[test]
    fn order_zero_is_bicommutant() {
        let g = SelfAdjointGenerator::diagonal(&[0.3, 1.1, 2.7]);
        for spec in [
            VonNeumannAlgebraSpec::Full { dim: 3 },
            VonNeumannAlgebraSpec::DiagonalMasa { dim: 3 },
            VonNeumannAlgebraSpec::BlockDiagonal {
                pattern: vec![2, 1],
            },
        ] {
            let r =
                reflexivity_check(&spec, &g, 0, &ReflexivityOptions::default(), &tol()).unwrap();
            assert_eq!(r.dim_computed, r.dim_expected);
            assert_eq!(r.dim_without_q, None);
        }
    }

    #[test]
    fn tensor_basis_vector_places_block() {
        let xi = CVector::from_vec(vec![real(1.0), real(2.0)]);
        let v = tensor_basis_vector(&xi, 1, 3);
        assert_eq!(v.len(), 6);
        assert_eq!(v[2], real(1.0));
        assert_eq!(v[3], real(2.0));
    }

    #[test]
    fn spec_validation() {
        assert!(VonNeumannAlgebraSpec::BlockDiagonal {
            pattern: vec![2, 0]
        }
        .validate()
        .is_err());
        assert!(VonNeumannAlgebraSpec::Generated {
            dim: 2,
            generators: vec![Operator::identity(3)]
        }
        .validate()
        .is_err());
    }
}
