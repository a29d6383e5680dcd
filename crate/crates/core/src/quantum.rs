//! Split Floquet propagation on a truncated momentum lattice.
//!
//! One period is
//!
//! ```text
//! U = exp(−i L cos(p̂)/ħ) · exp(−i K V(q̂)/ħ)
//! ```
//!
//! The kick is diagonal on the position grid `q_j = 2πj/N`, the kinetic
//! phase on the lattice `p = mħ`, `m ∈ [m_min, m_min + N)`. The Bloch
//! quasimomentum is zero: the `p = 0` initial state sits on the lattice.
//!
//! The DFT identifies `m` with `m + N`, so probability that reaches the edge
//! of the lattice would wrap around silently. Every step therefore checks the
//! probability in the outer bands and fails instead.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::fft::{Radix2, SpectralTransform};
use crate::model::ModelParams;
use crate::sum::CompensatedSum;
use crate::{math, CurrentSeries, Error, Result, SeriesKind, C64};

/// Default lattice size, 2¹⁴.
pub const DEFAULT_GRID_SIZE: usize = 1 << 14;
pub const MIN_GRID_SIZE: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumGrid {
    size: usize,
    m_min: i64,
    hbar: f64,
}

impl MomentumGrid {
    pub fn new(size: usize, m_min: i64, hbar: f64) -> Result<Self> {
        if !size.is_power_of_two() || size < MIN_GRID_SIZE {
            return Err(Error::Config("grid size must be a power of two and at least 32"));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::Config("hbar must be positive and finite"));
        }
        Ok(Self { size, m_min, hbar })
    }

    /// Lattice `m ∈ [−N/2, N/2)`.
    pub fn centered(size: usize, hbar: f64) -> Result<Self> {
        Self::new(size, -((size / 2) as i64), hbar)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn m_min(&self) -> i64 {
        self.m_min
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Lattice index of slot `i`.
    #[inline]
    pub fn m(&self, i: usize) -> i64 {
        self.m_min + i as i64
    }

    /// Momentum eigenvalue `mħ` of slot `i`.
    #[inline]
    pub fn momentum(&self, i: usize) -> f64 {
        self.m(i) as f64 * self.hbar
    }

    /// Slot holding lattice index `m`, if present.
    pub fn index_of(&self, m: i64) -> Option<usize> {
        let i = m.checked_sub(self.m_min)?;
        (0..self.size as i64).contains(&i).then_some(i as usize)
    }

    pub fn position(&self, j: usize) -> f64 {
        TAU * j as f64 / self.size as f64
    }
}

/// Fail-fast threshold on the probability near the lattice edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageGuard {
    /// Fraction of the lattice on each side counted as edge.
    pub band_fraction: f64,
    /// `None` disables the check.
    pub threshold: Option<f64>,
}

impl Default for LeakageGuard {
    fn default() -> Self {
        Self { band_fraction: 0.02, threshold: Some(1e-8) }
    }
}

impl LeakageGuard {
    pub fn disabled() -> Self {
        Self { threshold: None, ..Self::default() }
    }

    /// Number of slots in each edge band (at least one).
    pub fn band(&self, size: usize) -> usize {
        let b = math::ceil(self.band_fraction * size as f64) as usize;
        b.clamp(1, size / 2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    grid: MomentumGrid,
    amplitudes: Vec<C64>,
    kick_count: u64,
}

impl QuantumState {
    /// Builds a state from lattice-ordered amplitudes (slot `i` is
    /// `m = m_min + i`).
    pub fn from_amplitudes(grid: MomentumGrid, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != grid.size {
            return Err(Error::Config("amplitude vector length must equal the grid size"));
        }
        Ok(Self { grid, amplitudes, kick_count: 0 })
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn kick_count(&self) -> u64 {
        self.kick_count
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect::<CompensatedSum>().value()
    }

    /// Probability in the two outer bands of the lattice.
    pub fn edge_leakage(&self, guard: &LeakageGuard) -> f64 {
        let n = self.grid.size;
        let b = guard.band(n);
        let low = self.amplitudes[..b].iter();
        let high = self.amplitudes[n - b..].iter();
        low.chain(high).map(|c| c.norm_sqr()).collect::<CompensatedSum>().value()
    }

    /// `ψ(q_j) = N^{-1/2} Σ_m c_m e^{i m q_j}` on the position grid.
    pub fn position_amplitudes(&self) -> Vec<C64> {
        let n = self.grid.size;
        let mut buf = self.amplitudes.clone();
        Radix2::new(n).to_position(&mut buf);
        // slot i carries m = m_min + i; the DFT assumed m = i
        for (j, v) in buf.iter_mut().enumerate() {
            let theta = (self.grid.m_min as f64) * self.grid.position(j);
            let (s, c) = math::sin_cos(theta);
            *v *= C64::new(c, s);
        }
        buf
    }
}

/// The `p = 0` eigenstate, uniform in `q`.
pub fn initial_state(grid: &MomentumGrid) -> Result<QuantumState> {
    let zero = grid.index_of(0).ok_or(Error::Config("momentum lattice must contain m = 0"))?;
    let mut amplitudes = vec![C64::new(0.0, 0.0); grid.size];
    amplitudes[zero] = C64::new(1.0, 0.0);
    QuantumState::from_amplitudes(*grid, amplitudes)
}

/// `⟨p⟩ = ħ Σ m |c_m|²`.
pub fn current(s: &QuantumState) -> f64 {
    let g = &s.grid;
    let sum: CompensatedSum = s
        .amplitudes
        .iter()
        .enumerate()
        .map(|(i, c)| g.m(i) as f64 * c.norm_sqr())
        .collect();
    g.hbar * sum.value()
}

/// `(mħ, |c_m|²)` over the whole lattice.
pub fn momentum_distribution(s: &QuantumState) -> Vec<(f64, f64)> {
    s.amplitudes.iter().enumerate().map(|(i, c)| (s.grid.momentum(i), c.norm_sqr())).collect()
}

#[inline]
fn cis(theta: f64) -> C64 {
    let (s, c) = math::sin_cos(theta);
    C64::new(c, s)
}

/// Precomputed Floquet operator for one grid and one set of parameters.
///
/// Not shareable across threads while stepping; clone it or build one per
/// propagation.
#[derive(Debug, Clone)]
pub struct FloquetPropagator<T = Radix2> {
    grid: MomentumGrid,
    /// `V(q_j)/ħ`
    scaled_potential: Vec<f64>,
    kick_strength: f64,
    kick_phase: Vec<C64>,
    kinetic_phase: Vec<C64>,
    guard: LeakageGuard,
    transform: T,
}

impl FloquetPropagator<Radix2> {
    pub fn new(params: &ModelParams, grid: &MomentumGrid) -> Result<Self> {
        Self::with_transform(params, grid)
    }
}

impl<T: SpectralTransform> FloquetPropagator<T> {
    /// Uses `grid.hbar()`; `params.hbar` is ignored here.
    pub fn with_transform(params: &ModelParams, grid: &MomentumGrid) -> Result<Self> {
        params.validate()?;
        let hbar = grid.hbar;
        let n = grid.size;
        let scaled_potential: Vec<f64> = (0..n).map(|j| params.potential(grid.position(j)) / hbar).collect();
        // No modular reduction of mħ: for irrational ħ/2π the phase is aperiodic in m.
        let kinetic_phase = (0..n)
            .map(|i| cis(-params.kinetic_strength * math::cos(grid.momentum(i)) / hbar))
            .collect();
        let mut prop = Self {
            grid: *grid,
            scaled_potential,
            kick_strength: f64::NAN,
            kick_phase: vec![C64::new(1.0, 0.0); n],
            kinetic_phase,
            guard: LeakageGuard::default(),
            transform: T::plan(n),
        };
        prop.set_kick_strength(params.kick_strength);
        Ok(prop)
    }

    pub fn with_guard(mut self, guard: LeakageGuard) -> Self {
        self.guard = guard;
        self
    }

    pub fn guard(&self) -> &LeakageGuard {
        &self.guard
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn kick_strength(&self) -> f64 {
        self.kick_strength
    }

    /// Rebuilds the kick phase `exp(−i K V(q_j)/ħ)` for a new `K`.
    pub fn set_kick_strength(&mut self, kick_strength: f64) {
        if kick_strength.to_bits() == self.kick_strength.to_bits() {
            return;
        }
        self.kick_strength = kick_strength;
        for (ph, &v) in self.kick_phase.iter_mut().zip(&self.scaled_potential) {
            *ph = cis(-kick_strength * v);
        }
    }

    /// Applies one period to `s` in place and checks edge leakage.
    pub fn step(&mut self, s: &mut QuantumState) -> Result<()> {
        debug_assert_eq!(s.grid, self.grid, "state and propagator grids differ");
        let amps = &mut s.amplitudes;
        // K = 0 makes the kick the identity
        if self.kick_strength != 0.0 {
            self.kick(amps);
        }
        for (a, k) in amps.iter_mut().zip(&self.kinetic_phase) {
            *a *= k;
        }
        s.kick_count += 1;
        if let Some(threshold) = self.guard.threshold {
            let leakage = s.edge_leakage(&self.guard);
            if leakage > threshold {
                return Err(Error::Leakage { leakage, threshold, kick: s.kick_count });
            }
        }
        Ok(())
    }

    fn kick(&mut self, amps: &mut [C64]) {
        // The e^{i m_min q_j} factor that relates slot order to lattice order
        // commutes with the diagonal kick and cancels between the two
        // transforms, so it is left out.
        self.transform.to_position(amps);
        for (a, k) in amps.iter_mut().zip(&self.kick_phase) {
            *a *= k;
        }
        self.transform.to_momentum(amps);
    }
}

/// One period from `s`, with a freshly planned propagator.
pub fn apply_floquet(params: &ModelParams, s: &QuantumState) -> Result<QuantumState> {
    let mut prop = FloquetPropagator::new(params, &s.grid)?;
    let mut out = s.clone();
    prop.step(&mut out)?;
    Ok(out)
}

/// ⟨p⟩ after each of `n_kicks` periods starting from [`initial_state`].
pub fn quantum_current_series(params: &ModelParams, grid: &MomentumGrid, n_kicks: usize) -> Result<CurrentSeries> {
    quantum_current_series_with::<Radix2>(params, grid, n_kicks)
}

/// [`quantum_current_series`] with a chosen transform backend.
pub fn quantum_current_series_with<T: SpectralTransform>(params: &ModelParams, grid: &MomentumGrid, n_kicks: usize) -> Result<CurrentSeries> {
    let (series, _) = evolve_recording::<T>(params, grid, n_kicks)?;
    Ok(series)
}

/// Runs `n_kicks` periods and returns the current series and the final state.
pub fn evolve_recording<T: SpectralTransform>(params: &ModelParams, grid: &MomentumGrid, n_kicks: usize) -> Result<(CurrentSeries, QuantumState)> {
    if n_kicks == 0 {
        return Err(Error::Config("at least one kick is required"));
    }
    let mut prop = FloquetPropagator::<T>::with_transform(params, grid)?;
    let mut state = initial_state(grid)?;
    let mut values = Vec::with_capacity(n_kicks);
    for _ in 0..n_kicks {
        prop.step(&mut state)?;
        values.push(current(&state));
    }
    Ok((CurrentSeries::new(SeriesKind::Quantum, values), state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::golden_hbar;
    use core::f64::consts::FRAC_PI_2;

    fn grid(n: usize) -> MomentumGrid {
        MomentumGrid::centered(n, golden_hbar()).unwrap()
    }

    const CHAOTIC: ModelParams = ModelParams::new(3.0, 1.5, 0.0, 0.0, 1.0);

    #[test]
    fn grid_validation() {
        assert!(MomentumGrid::new(48, -24, 1.0).is_err());
        assert!(MomentumGrid::new(16, -8, 1.0).is_err());
        assert!(MomentumGrid::new(64, -32, 0.0).is_err());
        assert!(MomentumGrid::new(64, -32, f64::NAN).is_err());
        let g = MomentumGrid::new(64, 5, 0.5).unwrap();
        assert!(initial_state(&g).is_err());
        assert_eq!(g.momentum(3), 8.0 * 0.5);
        assert_eq!(g.index_of(4), None);
        assert_eq!(g.index_of(68), Some(63));
    }

    #[test]
    fn initial_state_properties() {
        let g = grid(64);
        let s = initial_state(&g).unwrap();
        assert_eq!(current(&s), 0.0);
        assert_eq!(s.norm_sqr(), 1.0);
        let psi = s.position_amplitudes();
        for v in &psi {
            assert!((v.norm() - 1.0 / 8.0).abs() < 1e-15);
        }
        let dist = momentum_distribution(&s);
        assert_eq!(dist.iter().filter(|(_, w)| *w != 0.0).count(), 1);
        assert_eq!(dist[32], (0.0, 1.0));
    }

    #[test]
    fn eigenstate_current() {
        let g = MomentumGrid::centered(64, 0.9495).unwrap();
        let mut amps = vec![C64::new(0.0, 0.0); 64];
        amps[g.index_of(5).unwrap()] = C64::new(1.0, 0.0);
        let s = QuantumState::from_amplitudes(g, amps).unwrap();
        assert!((current(&s) - 5.0 * 0.9495).abs() < 1e-14);
    }

    #[test]
    fn zero_kick_keeps_moduli() {
        let g = grid(64);
        let mut amps: Vec<C64> = (0..64).map(|i| if (20..44).contains(&i) { C64::new(1.0 + i as f64 * 0.01, 0.3) } else { C64::new(0.0, 0.0) }).collect();
        let norm: f64 = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|c| *c /= norm);
        let s = QuantumState::from_amplitudes(g, amps).unwrap();
        let out = apply_floquet(&ModelParams::new(0.0, 1.5, 0.0, 0.0, 1.0), &s).unwrap();
        for (a, b) in s.amplitudes().iter().zip(out.amplitudes()) {
            assert!((a.norm() - b.norm()).abs() < 1e-14);
        }
        assert_eq!(out.kick_count(), 1);
    }

    #[test]
    fn first_kick_has_no_current() {
        for params in [CHAOTIC, ModelParams::new(1.0, 0.5, 0.4, 1.3, 0.7)] {
            let s = apply_floquet(&params, &initial_state(&grid(256)).unwrap()).unwrap();
            assert!(current(&s).abs() < 1e-10);
        }
    }

    #[test]
    fn leakage_is_reported() {
        let g = grid(32);
        let mut prop = FloquetPropagator::new(&CHAOTIC, &g).unwrap();
        let mut s = initial_state(&g).unwrap();
        let err = (0..50).find_map(|_| prop.step(&mut s).err()).unwrap();
        assert!(matches!(err, Error::Leakage { kick, .. } if kick >= 1));
        assert!(err.is_numerical_guard());
    }

    #[test]
    fn unitarity_and_symmetric_null() {
        let g = grid(2048);
        let mirror = ModelParams::new(1.0, 0.5, FRAC_PI_2, FRAC_PI_2, 1.0);
        let mut prop = FloquetPropagator::new(&mirror, &g).unwrap();
        let mut s = initial_state(&g).unwrap();
        for _ in 0..200 {
            prop.step(&mut s).unwrap();
            assert!(current(&s).abs() < 1e-9);
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn series_requires_kicks() {
        assert!(quantum_current_series(&CHAOTIC, &grid(64), 0).is_err());
        let s = quantum_current_series(&ModelParams::new(0.0, 1.5, 0.0, 0.0, 1.0), &grid(64), 10).unwrap();
        assert!(s.values.iter().all(|&v| v == 0.0));
    }
}
