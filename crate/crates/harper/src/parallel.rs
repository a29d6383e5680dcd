//! Rayon versions of the ensemble workloads.
//!
//! Work is partitioned the same way as the sequential core routines and
//! reduced in the same fixed order, so results are bit-identical to them and
//! independent of the thread count.

use harper_core::analysis::{fit_rate, sweep_entry, validate_hbars, GridPolicy, SweepResult};
use harper_core::classical::{chunk_count, chunk_momentum_sums, combine_chunks};
use harper_core::noise::{run_realization, NoiseAveragedSeries, NoiseSpec, RealizationAccumulator};
use harper_core::quantum::{evolve_recording, MomentumGrid, QuantumState};
use harper_core::{CurrentSeries, Error, ModelParams, Result};
use rayon::prelude::*;

use crate::RustFft;

pub fn classical_current_series(params: &ModelParams, ensemble_size: usize, n_kicks: usize) -> Result<CurrentSeries> {
    params.validate()?;
    if ensemble_size == 0 {
        return Err(Error::Config("ensemble size must be at least 1"));
    }
    let chunks: Vec<_> = (0..chunk_count(ensemble_size))
        .into_par_iter()
        .map(|c| chunk_momentum_sums(params, ensemble_size, c, n_kicks))
        .collect();
    Ok(combine_chunks(chunks, ensemble_size, n_kicks))
}

/// Quantum current series and the final state, on the rustfft backend.
pub fn quantum_run(params: &ModelParams, grid: &MomentumGrid, n_kicks: usize) -> Result<(CurrentSeries, QuantumState)> {
    evolve_recording::<RustFft>(params, grid, n_kicks)
}

pub fn quantum_current_series(params: &ModelParams, grid: &MomentumGrid, n_kicks: usize) -> Result<CurrentSeries> {
    Ok(quantum_run(params, grid, n_kicks)?.0)
}

pub fn noise_averaged_current(params: &ModelParams, grid: &MomentumGrid, spec: &NoiseSpec, n_kicks: usize) -> Result<NoiseAveragedSeries> {
    let runs: Vec<Result<Vec<f64>>> = (0..spec.realizations())
        .into_par_iter()
        .map(|r| run_realization::<RustFft>(params, grid, spec, r, n_kicks))
        .collect();
    let mut acc = RealizationAccumulator::new(n_kicks);
    for run in runs {
        acc.push(&run?);
    }
    Ok(acc.finish())
}

pub fn hbar_sweep(params: &ModelParams, policy: &GridPolicy, hbars: &[f64], n_kicks: usize, window: (usize, usize)) -> Result<SweepResult> {
    validate_hbars(hbars)?;
    params.validate()?;
    let entries = hbars
        .par_iter()
        .map(|&h| sweep_entry::<RustFft>(params, policy, h, n_kicks, window))
        .collect();
    Ok(SweepResult { entries })
}

/// Fitted rate of a single quantum run.
pub fn quantum_rate(params: &ModelParams, grid: &MomentumGrid, n_kicks: usize, window: (usize, usize)) -> Result<f64> {
    let s = quantum_current_series(params, grid, n_kicks)?;
    Ok(fit_rate(&s, window.0, window.1)?.slope)
}
