//! Numerical differential geometry of the relativistic-particle phase
//! space: builds the time form τ, the phase 2-form Ω, the phase 2-vector Λ
//! and the dynamical connection γ from a Lorentzian metric and a (possibly
//! non-metric) connection, and verifies pointwise the equivalences
//! classifying contact, Jacobi, almost-cosymplectic-contact and
//! almost-coPoisson-Jacobi structures, including electromagnetic
//! perturbations.

pub mod connection;
pub mod error;
pub mod exterior;
pub mod field;
pub mod jet;
pub mod linalg;
pub mod metric;
pub mod perturb;
pub mod sampling;
pub mod phase;
pub mod structures;
pub mod scale;
pub mod tangent;
pub mod tensor;

pub use error::{CatalogError, GeomError, TensorError};
pub use scale::{Frac, ScaleDim};
