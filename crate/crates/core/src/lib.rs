//! Tensor product structures on finite-dimensional complex spaces.
//!
//! Whether a state is entangled depends on how the space is factored. This
//! crate makes the factorization an explicit value ([`Tps`], a grid basis),
//! relates it to pairs of commuting operator algebras
//! ([`algebra::is_tpp`], [`algebra::tps_to_tpp`], [`algebra::tpp_to_tps`]),
//! builds it from commuting observables ([`observables`]), and constructs
//! factorizations that make a given state a product or entangled
//! ([`refactor`]).
//!
//! ```
//! use tpskit::{Tolerance, Tps};
//! use tpskit::workbench::examples::{bell_states, bell_tps};
//!
//! let tol = Tolerance::default();
//! let psi = &bell_states()[0];
//! assert_eq!(Tps::god_given(2, 2).schmidt(psi, &tol).unwrap().rank, 2);
//! assert_eq!(bell_tps().schmidt(psi, &tol).unwrap().rank, 1);
//! ```

pub mod algebra;
pub mod error;
pub mod linalg;
pub mod observables;
pub mod random;
pub mod refactor;
pub mod tps;
pub mod workbench;

pub use workbench::json;

pub use algebra::{OperatorAlgebra, TppVerdict};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, Tolerance, C64};
pub use observables::{CharacteristicSets, ObservablePair};
pub use tps::{SchmidtReport, Tps};
