//! Numerical laboratory for the moduli space of rank-2 wild Higgs bundles
//! over the projective line with an irregular singularity at infinity.
//!
//! The crate is organised around the pipeline
//!
//! * [`moduli`] — exact stratum combinatorics (cyclic partitions, parabolic
//!   weights, Hitchin base dimensions) and closed-form Higgs-field
//!   representatives with their gauges;
//! * [`scalar`] — finite-difference Newton solver for the scalar reduction
//!   `Δψ = 2|q| sinh 2ψ` on a truncated plane with excision discs at the
//!   zeros of `q`;
//! * [`hitchin`] — the full 2×2 Hitchin equation `F_h + [φ, φ^{*h}] = 0`
//!   solved for a det-1 Hermitian metric;
//! * [`regnorm`] — regulated L² norms `μ` on both strata, with quadrature
//!   error budgets.
//!
//! The crate is `no_std` (with `alloc`); all IO, caching and the command
//! line live in the companion `hml-cli` crate.

#![no_std]

extern crate alloc;

pub mod grid;
pub mod hitchin;
pub mod linsolve;
pub mod mat2;
pub mod moduli;
pub mod regnorm;
pub mod scalar;

pub use num_complex::Complex64 as C64;

/// Complex number from real/imaginary parts; terse constructor used all over.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
