//! Acceleration-rate fits, ħ sweeps, and distribution diagnostics.

use alloc::vec::Vec;

use crate::classical::{diagonal_seeds, orbit_extent, DEFAULT_PORTRAIT_KICKS, DEFAULT_PORTRAIT_SEEDS};
use crate::fft::{Radix2, SpectralTransform};
use crate::model::ModelParams;
use crate::quantum::{quantum_current_series_with, MomentumGrid, DEFAULT_GRID_SIZE};
use crate::sum::CompensatedSum;
use crate::{math, CurrentSeries, Error, Result};

/// Default fit window, in kicks (inclusive).
pub const DEFAULT_FIT_WINDOW: (usize, usize) = (100, 1000);
pub const MIN_FIT_POINTS: usize = 10;

/// Least-squares line `⟨p⟩(n) ≈ slope·n + intercept` over a kick window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    /// Acceleration rate: current gained per kick.
    pub slope: f64,
    pub intercept: f64,
    /// Inclusive kick window `(n_min, n_max)`.
    pub fit_window: (usize, usize),
    pub residual_rms: f64,
}

/// Ordinary least squares of the series on the kick number over
/// `n_min..=n_max` (kicks are 1-based).
pub fn fit_rate(series: &CurrentSeries, n_min: usize, n_max: usize) -> Result<RateEstimate> {
    let len = series.len();
    if n_min < 1 || n_min >= n_max || n_max > len || n_max - n_min + 1 < MIN_FIT_POINTS {
        return Err(Error::FitWindow { n_min, n_max, len });
    }
    let ys = &series.values[n_min - 1..n_max];
    let count = ys.len() as f64;
    let x_mean = (n_min + n_max) as f64 / 2.0;
    let y_mean = crate::sum::sum(ys) / count;
    let mut sxy = CompensatedSum::new();
    let mut sxx = CompensatedSum::new();
    for (i, &y) in ys.iter().enumerate() {
        let dx = (n_min + i) as f64 - x_mean;
        sxy.add(dx * (y - y_mean));
        sxx.add(dx * dx);
    }
    let slope = sxy.value() / sxx.value();
    let intercept = y_mean - slope * x_mean;
    let ss: CompensatedSum = ys
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let r = y - (slope * (n_min + i) as f64 + intercept);
            r * r
        })
        .collect();
    Ok(RateEstimate { slope, intercept, fit_window: (n_min, n_max), residual_rms: math::sqrt(ss.value() / count) })
}

/// `Σ_{p>0} P − Σ_{p<0} P` of a momentum distribution.
pub fn asymmetry(dist: &[(f64, f64)]) -> Result<f64> {
    let total = dist.iter().map(|&(_, w)| w).collect::<CompensatedSum>().value();
    if (total - 1.0).abs() > 1e-8 {
        return Err(Error::Unnormalized(total));
    }
    let mut acc = CompensatedSum::new();
    for &(p, w) in dist {
        if p > 0.0 {
            acc.add(w);
        } else if p < 0.0 {
            acc.add(-w);
        }
    }
    Ok(acc.value())
}

/// How the lattice is sized for each ħ of a sweep: start at `initial_size`
/// and double on leakage up to `max_size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridPolicy {
    pub initial_size: usize,
    pub max_size: usize,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self { initial_size: DEFAULT_GRID_SIZE, max_size: DEFAULT_GRID_SIZE << 3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub hbar: f64,
    /// Lattice size of the last attempt.
    pub grid_size: usize,
    pub rate: Result<RateEstimate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub entries: Vec<SweepEntry>,
}

impl SweepResult {
    /// Adjacent ħ pairs whose fitted rates have opposite signs.
    pub fn reversals(&self) -> Vec<(f64, f64)> {
        self.entries
            .windows(2)
            .filter_map(|w| match (&w[0].rate, &w[1].rate) {
                (Ok(a), Ok(b)) if a.slope * b.slope < 0.0 => Some((w[0].hbar, w[1].hbar)),
                _ => None,
            })
            .collect()
    }
}

/// The 40 values `0.9 + j/100` (j = 0..=30) and `1.0 + m/1000` (m = 1..=9),
/// in increasing order.
pub fn standard_hbar_grid() -> Vec<f64> {
    let mut v: Vec<f64> = (0..=30).map(|j| 0.9 + j as f64 / 100.0).collect();
    v.extend((1..=9).map(|m| 1.0 + m as f64 / 1000.0));
    v.sort_by(f64::total_cmp);
    v
}

/// Rate of one sweep point; the grid grows while the leakage guard trips.
pub fn sweep_entry<T: SpectralTransform>(params: &ModelParams, policy: &GridPolicy, hbar: f64, n_kicks: usize, window: (usize, usize)) -> SweepEntry {
    let mut size = policy.initial_size;
    loop {
        let attempt = MomentumGrid::centered(size, hbar)
            .and_then(|g| quantum_current_series_with::<T>(params, &g, n_kicks))
            .and_then(|s| fit_rate(&s, window.0, window.1));
        match attempt {
            Err(e) if e.is_numerical_guard() && size < policy.max_size => size *= 2,
            rate => return SweepEntry { hbar, grid_size: size, rate },
        }
    }
}

pub fn validate_hbars(hbars: &[f64]) -> Result<()> {
    if hbars.is_empty() {
        return Err(Error::Config("hbar list must not be empty"));
    }
    if hbars.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
        return Err(Error::Config("every hbar must be positive and finite"));
    }
    if hbars.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("hbar values must be strictly increasing"));
    }
    Ok(())
}

/// Fits the acceleration rate at every ħ. `params.hbar` is ignored.
/// Per-entry failures are kept in the entry and do not stop the sweep.
pub fn hbar_sweep(params: &ModelParams, policy: &GridPolicy, hbars: &[f64], n_kicks: usize, window: (usize, usize)) -> Result<SweepResult> {
    hbar_sweep_with::<Radix2>(params, policy, hbars, n_kicks, window)
}

pub fn hbar_sweep_with<T: SpectralTransform>(
    params: &ModelParams,
    policy: &GridPolicy,
    hbars: &[f64],
    n_kicks: usize,
    window: (usize, usize),
) -> Result<SweepResult> {
    validate_hbars(hbars)?;
    params.validate()?;
    let entries = hbars.iter().map(|&h| sweep_entry::<T>(params, policy, h, n_kicks, window)).collect();
    Ok(SweepResult { entries })
}

/// Largest of `K` and `L` after rescaling toward the near-integrable regime.
pub const HEURISTIC_SCALE: f64 = 0.4;

/// Outcome of [`extended_curve_heuristic`]. A diagnostic, not a proof.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedCurveReport {
    /// Parameters the orbits were run with (same `K/L` ratio).
    pub scaled: ModelParams,
    pub orbits: usize,
    pub extended_orbits: usize,
}

impl ExtendedCurveReport {
    pub fn has_extended_curves(&self) -> bool {
        self.extended_orbits > 0
    }
}

impl core::fmt::Display for ExtendedCurveReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "heuristic: invariant curves extended in momentum")?;
        writeln!(f, "scaled K = {}, L = {}", self.scaled.kick_strength, self.scaled.kinetic_strength)?;
        writeln!(f, "orbits extended in p: {} of {}", self.extended_orbits, self.orbits)?;
        let verdict = if self.has_extended_curves() { "extended curves found" } else { "no extended curves" };
        writeln!(f, "verdict: {verdict}")
    }
}

/// Looks for orbits that cross the whole cell in `p` while staying within
/// one period in `q`, after scaling `(K, L)` down (ratio kept) so that the
/// larger is at most [`HEURISTIC_SCALE`].
///
/// Quantum acceleration needs such curves, or their remnants, to exist.
pub fn extended_curve_heuristic(params: &ModelParams) -> ExtendedCurveReport {
    let largest = params.kick_strength.max(params.kinetic_strength);
    let factor = if largest > HEURISTIC_SCALE { HEURISTIC_SCALE / largest } else { 1.0 };
    let scaled = params.with_strengths(params.kick_strength * factor, params.kinetic_strength * factor);
    let seeds = diagonal_seeds(DEFAULT_PORTRAIT_SEEDS);
    let extended_orbits = seeds
        .iter()
        .filter(|&&s| orbit_extent(&scaled, s, DEFAULT_PORTRAIT_KICKS).is_extended_in_momentum())
        .count();
    ExtendedCurveReport { scaled, orbits: seeds.len(), extended_orbits }
}
