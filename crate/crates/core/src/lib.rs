//! Quantum Gaussian states on a countable collection of bosonic modes.
//!
//! A state is stored as a finite momentum-position covariance block `S₀` for the
//! first `n` modes, a complex mean vector supported on those modes, and a
//! closed-form diagonal [`TailModel`] describing every mode beyond the block.
//! The tail family is chosen so that the Hilbert-Schmidt and trace-class
//! admissibility conditions can be decided exactly.
//!
//! Modules:
//!
//! * [`symplectic`] real-block linear algebra: `J₀`, symplectic checks, the
//!   uncertainty test `S₀ − iJ₀ ⪰ 0`, and Williamson normal form.
//! * [`tails`] the parametric tail family and its summability verdicts.
//! * [`state`] the [`GaussianState`] model and its transformations.
//! * [`oracle`] dense truncated Fock-space matrices used as an independent
//!   check of every phase-space formula.
//!
//! Real coordinates follow `z = x + iy ↦ (x, y)`, inner products are
//! anti-linear in the first argument, and `Im⟨z, w⟩ = zᵀ J₀ w`.

pub mod error;
pub mod oracle;
pub mod state;
pub mod symplectic;
pub mod tails;

pub use error::{Error, Result};
pub use state::{ExtremePair, GaussianState, SpectrumEntry, ValidationReport};
pub use symplectic::{RealBlockOperator, Tolerances, WilliamsonDecomposition};
pub use tails::{TailClassification, TailModel};

pub use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;
