//! The classical kick map and its ensembles.
//!
//! One period is a kick followed by free rotation:
//!
//! ```text
//! p′ = p − K V′(q)
//! q′ = q − L sin p′
//! ```

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::model::{is_ratchet_symmetric, ModelParams, SYMMETRY_TOLERANCE};
use crate::sum::CompensatedSum;
use crate::{math, CurrentSeries, Error, Result, SeriesKind};

/// Default ensemble size for classical current runs.
pub const DEFAULT_ENSEMBLE_SIZE: usize = 100_000;
/// Ensemble members per reduction chunk. The chunk partition, not the worker
/// count, fixes the summation order.
pub const CHUNK_SIZE: usize = 4096;
pub const DEFAULT_PORTRAIT_SEEDS: usize = 40;
pub const DEFAULT_PORTRAIT_KICKS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassicalState {
    pub q: f64,
    pub p: f64,
}

impl ClassicalState {
    pub const fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }
}

/// One period of the map.
#[inline]
pub fn kick_map_step(params: &ModelParams, s: ClassicalState) -> ClassicalState {
    let p = s.p - params.kick_strength * params.potential_derivative(s.q);
    let q = s.q - params.kinetic_strength * math::sin(p);
    ClassicalState { q, p }
}

/// Exact inverse of [`kick_map_step`].
#[inline]
pub fn inverse_kick_map_step(params: &ModelParams, s: ClassicalState) -> ClassicalState {
    let q = s.q + params.kinetic_strength * math::sin(s.p);
    let p = s.p + params.kick_strength * params.potential_derivative(q);
    ClassicalState { q, p }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalEnsemble {
    states: Vec<ClassicalState>,
    kick_count: u64,
}

impl ClassicalEnsemble {
    pub fn new(states: Vec<ClassicalState>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Config("classical ensemble must not be empty"));
        }
        if states.iter().any(|s| !(s.q.is_finite() && s.p.is_finite())) {
            return Err(Error::Config("classical states must be finite"));
        }
        Ok(Self { states, kick_count: 0 })
    }

    /// `size` points with `p = 0` and `q = 2πj/size`.
    pub fn equally_spaced(size: usize) -> Result<Self> {
        Self::new((0..size).map(|j| ClassicalState::new(TAU * j as f64 / size as f64, 0.0)).collect())
    }

    pub fn states(&self) -> &[ClassicalState] {
        &self.states
    }

    pub fn kick_count(&self) -> u64 {
        self.kick_count
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn mean_momentum(&self) -> f64 {
        self.states.iter().map(|s| s.p).collect::<CompensatedSum>().value() / self.states.len() as f64
    }

    pub fn into_states(self) -> Vec<ClassicalState> {
        self.states
    }
}

/// Applies the map `n_kicks` times to every member.
pub fn evolve_ensemble(params: &ModelParams, mut e: ClassicalEnsemble, n_kicks: usize) -> ClassicalEnsemble {
    for s in e.states.iter_mut() {
        for _ in 0..n_kicks {
            *s = kick_map_step(params, *s);
        }
    }
    e.kick_count += n_kicks as u64;
    e
}

/// Map in coordinates centered on the reflection axis, `x = q + φ₁`, where
/// `V′(q) = −sin x + 2η cos(2x + φ₂ − 2φ₁)`.
///
/// When the potential is reflection symmetric the force is evaluated through
/// its odd part `(F(x) − F(−x))/2`, so mirror pairs `(x, p)` and `(−x, −p)`
/// stay exact mirrors in floating point and the q-averaged current cancels
/// identically. Otherwise the 1e-16 asymmetries left by rounding grow
/// exponentially under chaotic dynamics.
#[derive(Debug, Clone, Copy)]
struct CenteredMap {
    kick: f64,
    kinetic: f64,
    eta2: f64,
    psi: f64,
    symmetric: bool,
}

#[inline(always)]
fn odd_sin(x: f64) -> f64 {
    if x.is_sign_negative() {
        -math::sin(-x)
    } else {
        math::sin(x)
    }
}

impl CenteredMap {
    fn new(params: &ModelParams) -> Self {
        Self {
            kick: params.kick_strength,
            kinetic: params.kinetic_strength,
            eta2: 2.0 * params.second_harmonic,
            psi: params.phase2 - 2.0 * params.phase1,
            symmetric: is_ratchet_symmetric(params, SYMMETRY_TOLERANCE),
        }
    }

    #[inline(always)]
    fn raw_force(&self, x: f64) -> f64 {
        -odd_sin(x) + self.eta2 * math::cos(2.0 * x + self.psi)
    }

    #[inline(always)]
    fn force(&self, x: f64) -> f64 {
        if self.symmetric {
            0.5 * (self.raw_force(x) - self.raw_force(-x))
        } else {
            self.raw_force(x)
        }
    }

    #[inline(always)]
    fn step(&self, x: &mut f64, p: &mut f64) {
        *p -= self.kick * self.force(*x);
        *x -= self.kinetic * odd_sin(*p);
    }
}

/// Initial position of member `j` of the current-series ensemble, in
/// centered coordinates: `x_j = π(2j + 1 − M)/M`. The set is equally spaced
/// with step `2π/M` and closed under `x → −x` bit for bit.
#[inline]
fn centered_position(j: usize, size: usize) -> f64 {
    PI * (2.0 * j as f64 + 1.0 - size as f64) / size as f64
}

pub fn chunk_count(ensemble_size: usize) -> usize {
    ensemble_size.div_ceil(CHUNK_SIZE)
}

/// Per-kick momentum sums of chunk `chunk` of the current-series ensemble.
/// Chunks are independent; combine them with [`combine_chunks`] in index
/// order.
pub fn chunk_momentum_sums(params: &ModelParams, ensemble_size: usize, chunk: usize, n_kicks: usize) -> Vec<CompensatedSum> {
    let map = CenteredMap::new(params);
    let start = chunk * CHUNK_SIZE;
    let end = (start + CHUNK_SIZE).min(ensemble_size);
    let mut x: Vec<f64> = (start..end).map(|j| centered_position(j, ensemble_size)).collect();
    let mut p = alloc::vec![0.0; x.len()];
    let mut sums = alloc::vec![CompensatedSum::new(); n_kicks];
    for sum in sums.iter_mut() {
        for (xi, pi) in x.iter_mut().zip(p.iter_mut()) {
            map.step(xi, pi);
            sum.add(*pi);
        }
    }
    sums
}

/// Merges chunk sums (in the order given) into the mean-momentum series.
pub fn combine_chunks<I>(chunks: I, ensemble_size: usize, n_kicks: usize) -> CurrentSeries
where
    I: IntoIterator<Item = Vec<CompensatedSum>>,
{
    let mut total = alloc::vec![CompensatedSum::new(); n_kicks];
    for chunk in chunks {
        for (t, c) in total.iter_mut().zip(&chunk) {
            t.merge(c);
        }
    }
    let m = ensemble_size as f64;
    CurrentSeries::new(SeriesKind::Classical, total.iter().map(|s| s.value() / m).collect())
}

/// ⟨p⟩ after kicks `1..=n_kicks` for `ensemble_size` trajectories starting
/// at `p = 0` with equally spaced positions.
pub fn classical_current_series(params: &ModelParams, ensemble_size: usize, n_kicks: usize) -> Result<CurrentSeries> {
    params.validate()?;
    if ensemble_size == 0 {
        return Err(Error::Config("ensemble size must be at least 1"));
    }
    let chunks = (0..chunk_count(ensemble_size)).map(|c| chunk_momentum_sums(params, ensemble_size, c, n_kicks));
    Ok(combine_chunks(chunks, ensemble_size, n_kicks))
}

/// Reduces an angle to `[0, 2π)`.
#[inline]
pub fn wrap_angle(x: f64) -> f64 {
    let r = math::rem_euclid(x, TAU);
    if r >= TAU { 0.0 } else { r }
}

/// `count` seeds at `q = p = 2π(j + ½)/count`.
pub fn diagonal_seeds(count: usize) -> Vec<ClassicalState> {
    (0..count)
        .map(|j| {
            let v = TAU * (j as f64 + 0.5) / count as f64;
            ClassicalState::new(v, v)
        })
        .collect()
}

/// Orbit points of every seed (seed first, then `n_kicks` iterates), reduced
/// to the unit cell `[0, 2π) × [0, 2π)`.
pub fn phase_portrait(params: &ModelParams, seeds: &[ClassicalState], n_kicks: usize) -> Result<Vec<(f64, f64)>> {
    if seeds.is_empty() {
        return Err(Error::Config("phase portrait needs at least one seed"));
    }
    let mut points = Vec::with_capacity(seeds.len() * (n_kicks + 1));
    for &seed in seeds {
        let mut s = seed;
        points.push((wrap_angle(s.q), wrap_angle(s.p)));
        for _ in 0..n_kicks {
            s = kick_map_step(params, s);
            points.push((wrap_angle(s.q), wrap_angle(s.p)));
        }
    }
    Ok(points)
}

/// Unwrapped extent of one orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitExtent {
    pub q_range: f64,
    pub p_range: f64,
}

impl OrbitExtent {
    /// Crosses the whole cell in momentum without winding around in position.
    pub fn is_extended_in_momentum(&self) -> bool {
        self.p_range >= TAU && self.q_range < TAU
    }
}

pub fn orbit_extent(params: &ModelParams, seed: ClassicalState, n_kicks: usize) -> OrbitExtent {
    let (mut qlo, mut qhi, mut plo, mut phi) = (seed.q, seed.q, seed.p, seed.p);
    let mut s = seed;
    for _ in 0..n_kicks {
        s = kick_map_step(params, s);
        qlo = qlo.min(s.q);
        qhi = qhi.max(s.q);
        plo = plo.min(s.p);
        phi = phi.max(s.p);
    }
    OrbitExtent { q_range: qhi - qlo, p_range: phi - plo }
}
