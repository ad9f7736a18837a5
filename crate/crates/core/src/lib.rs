//! Witten–Reshetikhin–Turaev invariants of lens spaces at odd levels r ≡ 1 (mod 4).
//!
//! Two evaluation paths are provided: the matrix-product oracle κ^Φ(U) R(U)₁₁ and
//! the closed Gauss-sum formulas. Every computation runs over either `Complex64`
//! or exact [`cyclo::CyclotomicNumber`] values through the [`field::Scalar`] trait.

pub mod cyclo;
pub mod error;
pub mod field;
pub mod lens;
pub mod modgroup;
pub mod numtheory;
pub mod tqftrep;

pub use cyclo::CyclotomicNumber;
pub use error::{Error, Result};
pub use field::{default_tolerance, ComplexApprox, Scalar};
pub use lens::{
    normalize_lens, verify_grid, wrt_closed, wrt_oracle, Backend, InvariantResult, LensSpace,
    Method,
};
pub use modgroup::{cf_expand, cf_for_lens, cf_to_matrix, linking_data, ContinuedFraction, Sl2};
pub use num_complex::Complex64;
pub use tqftrep::{rep_bruteforce, rep_closed_entry, rep_generators, RepMatrix, TheoryParams};
