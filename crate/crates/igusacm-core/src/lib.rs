//! Computation of genus-2 Igusa class polynomials of primitive quartic CM
//! fields, with certified fixed-point precision bookkeeping.
//!
//! The crate is organized as a pipeline:
//!
//! * [`approx`] — fixed-point complex arithmetic on dyadic Gaussian numbers
//!   with explicit error bounds, plus the transcendental kernel (`E(z) = e^{πiz}`,
//!   real exp, sqrt, π).
//! * [`cmfield`] — exact arithmetic in the quartic CM field
//!   `K = Q(√(−a+b√Δ₀))`: maximal order, fractional ideals in Hermite normal
//!   form, class group, units, embeddings.
//! * [`enumerate`] — one `(Φ, 𝔞, ξ)` triple per isomorphism class of
//!   principally polarized abelian surface with CM by `O_K`, size-reduced.
//! * [`period`] — symplectic bases and period matrices in the Siegel upper
//!   half space.
//! * [`siegel`] — reduction into the fundamental domain `F₂` (or the larger
//!   domain `B`) with exact `Sp₄(Z)` transformations.
//! * [`theta`] — certified evaluation of the ten even theta constants and the
//!   absolute Igusa invariants.
//! * [`classpoly`] — denominator bound, precision budgets, product-tree
//!   polynomial reconstruction, rational rounding, and the main pipeline.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the CLI live
//! in the companion `igusacm` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod approx;
pub mod classpoly;
pub mod cmfield;
pub mod enumerate;
pub mod error;
pub mod executor;
pub mod lattice;
pub mod linalg;
pub mod period;
pub mod siegel;
pub mod theta;

pub use error::{Error, Result};
