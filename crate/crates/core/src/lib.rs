//! Classical and quantum dynamics of the generalized kicked Harper model
//!
//! ```text
//! H = L cos(p) + K V(q) Σ_n δ(t - n),    V(q) = cos(q + φ₁) + η sin(2q + φ₂)
//! ```
//!
//! The crate is `no_std` (it needs `alloc`). Enable the `std` feature to route
//! the transcendental functions through the platform libm instead of the
//! pure-Rust `libm` port.
//!
//! Module map:
//!
//! - [`model`]: parameters, the kicking potential, and the reflection-symmetry
//!   predicate that forces the directed current to vanish.
//! - [`classical`]: the area-preserving kick map, ensembles, phase portraits and
//!   the classical current.
//! - [`quantum`]: split Floquet propagation on a truncated momentum lattice.
//! - [`noise`]: kick-amplitude and momentum-phase noise, and realization
//!   averaging.
//! - [`analysis`]: acceleration-rate fits, ħ sweeps, and distribution metrics.
#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod classical;
mod error;
mod math;
pub mod fft;
pub mod model;
pub mod noise;
pub mod quantum;
mod series;
pub mod sum;

pub use error::{Error, Result};
pub use model::ModelParams;
pub use series::{CurrentSeries, SeriesKind};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;
