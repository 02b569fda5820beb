//! Numerical laboratory for the one-level density of low-lying zeros in the
//! family of Hecke L-functions attached to the angular characters
//! `Ξ_k(𝔞) = exp(i 4k θ_𝔞)` on ideals of the Gaussian integers `Z[i]`.
//!
//! The library computes, for a family cutoff `K` (characters `k = 1..=K`,
//! logarithmic scale `M = log K`) and an even test function `f` with compactly
//! supported Fourier transform:
//!
//! * the exact archimedean (digamma) term and every prime-side sum of the
//!   explicit formula, split by ramification type of the rational prime
//!   (`density_terms`),
//! * the asymptotic expansions of those terms, whose coefficients are concrete
//!   constants — `γ₀`, `log |η(i)|`, `L'/L(1, χ₁)`, a lattice-point prime sum
//!   `P₃`, and digamma-integral coefficients (`special_constants`),
//! * the averaged-ratios prediction for the same density: local Euler factors,
//!   the arithmetic factor `A`, moments of Gamma-factor ratios, and the
//!   resulting closed form (`ratios_model`),
//! * the discretized character/coefficient layer feeding both sides
//!   (`gaussian_arith`, `hecke_chars`), and
//! * the test functions themselves plus the random-matrix density integrals
//!   they pair against (`test_functions`).
//!
//! Everything is deterministic: fixed segment widths, fixed reduction trees,
//! and compensated summation make every report bit-identical for a given
//! configuration regardless of thread count.

pub mod density_terms;
pub mod error;
pub mod gaussian_arith;
pub mod hecke_chars;
pub mod numerics;
pub mod ratios_model;
pub mod special;
pub mod special_constants;
pub mod test_functions;
pub mod verification;

pub use error::{Error, Result};
