//! Std companion to `harper-core`: an FFT backend on `rustfft`, rayon drivers
//! for the ensemble workloads, the CSV and config formats, and the `harper`
//! command line.

pub mod backend;
pub mod cli;
pub mod config;
pub mod format;
pub mod parallel;

pub use backend::RustFft;
