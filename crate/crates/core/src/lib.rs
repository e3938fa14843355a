//! Numerical toolkit for weak derivatives along `e^{itD}`, the triangular
//! representation `Φₙ` and reflexivity of its image, on finite-dimensional
//! Hilbert spaces.
//!
//! Every operator is a dense complex matrix. The derivation
//! `δ(x) = i(Dx − xD)` coincides with the weak derivative of
//! `t ↦ e^{itD} x e^{−itD}` at `t = 0`.

pub mod band;
pub mod checks;
pub mod derivation;
pub mod error;
pub mod generator;
pub mod io;
pub mod linalg;
pub mod operator;
pub mod probes;
pub mod random;
pub mod reflexivity;
pub mod report;
pub mod space;
pub mod subspace;
pub mod tolerance;
pub mod triangular;

pub use band::{band_derivation, band_embed, BandMatrix};
pub use derivation::{
    alpha, binomial_d, cn_norm, commutator_d, derivative_chain, iterated_d, DerivativeChain,
    MAX_ORDER,
};
pub use error::{OpError, Result};
pub use generator::{eig_hermitian, unitary_group, SelfAdjointGenerator, SpectralBand};
pub use io::MatrixFile;
pub use operator::{c, real, CMatrix, CVector, Operator, I};
pub use reflexivity::{
    alg_of_family, build_ln, build_pn, build_qn, commutant, lat_family, reflexivity_check,
    InvariantFamily, ReflexivityOptions, ReflexivityReport, VonNeumannAlgebraSpec,
};
pub use report::CheckReport;
pub use space::OperatorSpace;
pub use subspace::Subspace;
pub use tolerance::TolerancePolicy;
pub use triangular::{build_phi, build_sn, build_tn, nilpotent_shift, phi, CornerOperator};
