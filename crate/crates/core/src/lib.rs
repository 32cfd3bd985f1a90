//! Deformation quantization of the harmonic oscillator with and without
//! damping: Moyal and damped star products on phase-space polynomials and
//! Gaussian-type functions, their eigenstates and star-exponentials, a
//! Fock-space matrix oracle, and the switch-on/switch-off dissipation model.

pub mod dissipation;
pub mod eigen;
pub mod error;
pub mod fock;
pub mod gauss;
pub mod phase_poly;
pub mod star;
pub mod verify;

pub use error::{Error, Result};
pub use gauss::{ExpPoly, QuadExp};
pub use phase_poly::{PhasePoly, PhysParams, Var};
pub use star::{Kind, ProductKind, Symbol};
