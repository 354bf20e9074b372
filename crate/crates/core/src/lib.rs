//! Nonlinear coherent states of the deformed annihilator `f(n̂, m) â` with
//! `f(n̂, m) = 1 - m/(1+n̂)`, in a truncated Fock space.
//!
//! Positive `m` gives the photon-added coherent states `|α,m> ∝ â†^m |α>`,
//! negative `m` the states `|α,-m>` built from inverse ladder operators.
//! The crate constructs both families by several independent routes,
//! checks the operator algebra behind them and computes their quadrature
//! squeezing and photon statistics.
//!
//! ```
//! use nlcs::{moments, StateFamily, Route, TruncationPolicy};
//! use num_complex::Complex64;
//!
//! let policy = TruncationPolicy::default();
//! let (state, _dim) = StateFamily::negative(Complex64::new(1.0, 0.0), 5)
//!     .build_auto(Route::Series, &policy)
//!     .unwrap();
//! let report = moments(&state).unwrap();
//! assert!(report.var_p < 0.5);
//! assert!(report.mandel_q.unwrap() > 0.0);
//! ```
//!
//! Modules, bottom up: [`fock`] (state vectors, ladder and diagonal
//! operators), [`special`], [`truncation`] (picking a dimension from the
//! analytic tail), [`states`], [`operators`], [`observables`], [`verify`] and
//! [`cli`].

pub mod error;
pub mod fock;
pub mod special;
pub mod truncation;
pub mod states;
pub mod operators;
pub mod observables;
pub mod verify;
pub mod cli;

pub use error::{Error, Result};
pub use fock::{fidelity, DiagonalOperator, FockState, RaisingOperator, Truncated};
pub use observables::{moments, AlphaGrid, ObservableReport};
pub use operators::{DeformedAnnihilator, Sector};
pub use states::{FamilyKind, Route, StateFamily};
pub use truncation::{choose_dim, TruncationPolicy};
