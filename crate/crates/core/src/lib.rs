//! Exceptional points of 2x2 non-Hermitian Hamiltonians.
//!
//! The crate covers the full analysis chain for a two-level open system with
//! complex coupling:
//!
//! * [`hamiltonian`] / [`field`]: closed-form spectra of `[[ξ₁, g], [g, ξ₂]]`
//!   and the coalescence observables (overlap, Shannon entropy).
//! * [`toy`]: the parametrized model `ξ₁ = 1 − α/2 + iγ₁`, `ξ₂ = √α + iγ₂`
//!   with the convex-combination coupling `g = g_c[(1−β) + iβ]Λ_α`.
//! * [`ep`]: exceptional-point location, both from the analytic discriminant
//!   of the model and from a black-box 2-D search.
//! * [`crossing`]: branch matching along 1-D scans, Landau–Zener vs. width
//!   bifurcation classification and the transition coefficient `β_c`.
//! * [`surface`] / [`monodromy`] / [`oracle`]: Riemann sheets over a
//!   parameter window, branch cuts, loop monodromy and the analytic
//!   multivalued reference functions.
//! * [`sphere`]: stereographic projection of the extended parameter plane.
//! * [`io`]: CSV ingestion of externally computed spectra and CSV export.

pub mod complex;
pub mod crossing;
pub mod ep;
mod error;
pub mod field;
pub mod hamiltonian;
pub mod io;
pub mod monodromy;
pub mod oracle;
mod par;
pub mod sampler;
pub mod sphere;
pub mod surface;
pub mod toy;

pub use complex::ComplexScalar;
pub use error::{Error, Result};
pub use hamiltonian::{diagonalize, Hamiltonian2, Spectrum2};
pub use sampler::{PairSampler, Window};
