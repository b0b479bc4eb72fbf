//! Entanglement entropy of abelian arithmetic Chern-Simons states, with the
//! arithmetic input reduced to linear algebra over `F_p`.
//!
//! An [`Instance`] holds two sides of symplectic local factors and a
//! localization map `F_p^d → F_{S_1} ⊕ F_{S_2}` whose image is Lagrangian.
//! [`build_state`] enumerates the global vectors into an exact
//! [`AmplitudeState`], and the [`entropy`] module computes the entanglement
//! entropy across the cut by a closed formula, by the rank of the amplitude
//! matrix and from the Schmidt spectrum. [`glueing`] enlarges the set of
//! places until localization is injective and contracts back.
//!
//! ```
//! use csent_core::{canonical_case, entropy_formula, Prime};
//!
//! let inst = canonical_case(1, Prime::new(3).unwrap()).unwrap();
//! let e = entropy_formula(&inst).unwrap();
//! assert_eq!(e.exact_k, Some(2));
//! ```

pub mod cyclotomic;
pub mod entropy;
pub mod error;
pub mod format;
pub mod fp;
pub mod glueing;
pub mod instance;
pub mod linalg;
pub mod state;
pub mod symplectic;

pub use cyclotomic::Cyclotomic;
pub use entropy::{
    entropy_formula, entropy_rank, entropy_rank_of_state, entropy_spectral, reduced_density,
    schmidt_spectrum, von_neumann, EntropyResult, Method, RankOutcome, ReducedDensity,
    SchmidtSpectrum, Side, EIGENVALUE_THRESHOLD,
    von_neumann_above,
};
pub use error::{Error, Result};
pub use fp::{FpScalar, Prime};
pub use glueing::{
    contract_state, contract_unramified, inflate, uniform_value, ContractionWeights,
    InflatedInstance,
};
pub use instance::{
    canonical_case, generate_random, Caps, DerivedStats, Instance, PhaseSpec, RandomSpec,
    CANONICAL_CASES,
};
pub use linalg::{image, kernel, FpMatrix, Subspace};
pub use state::{build_state, global_factor_state, AmplitudeState};
pub use symplectic::{LocalFactor, SymplecticSpace};
