//! Dilations of positive and sub-positive contractions on finite weighted
//! `ℓᵖ` spaces, spectral functional calculus for finite submarkovian
//! semigroups, and numerical transference checks.
//!
//! The crate is organised by subsystem:
//!
//! * [`lp`]: weighted `ℓᵖ` spaces, lattice operations, norms of positive
//!   matrices via the `M`-map fixed point, and extremal vectors.
//! * [`dilation`]: the rectangle-partition dilation `(D, S, P)` and its
//!   verification.
//! * [`calculus`]: submarkovian generators, `m(−A)`, imaginary powers,
//!   cone and ergodic maximal functions, von Neumann's inequality.
//! * [`transference`]: time kernels, convolver norms, transferred operators,
//!   Rademacher/Khinchin machinery and maximal/square-function transference.
//! * [`multiplier`]: cone symbols, Mihlin constants and Mellin inversion.
//! * [`scenario`]: named experiment suites producing machine-readable reports.
//!
//! Multi-start searches and Monte-Carlo trials run on rayon when the
//! `parallel` feature is enabled (the default); every reduction is done over
//! a fixed-order list, so results do not depend on scheduling.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod ascent;
pub mod calculus;
pub mod dilation;
pub mod error;
pub mod io;
pub mod lp;
pub mod multiplier;
pub mod par;
pub mod random;
pub mod scenario;
pub mod special;
pub mod transference;

pub use error::{Error, Result};
pub use num_complex::Complex64;
