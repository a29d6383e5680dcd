//! Kick-amplitude noise, momentum-phase noise, and realization averaging.
//!
//! Random streams: realization `r` of a run with seed `s` draws from ChaCha8
//! keyed by `seed_from_u64(s)` on stream `r` (see [`realization_rng`]). The
//! realizations are therefore independent of the order they are executed in,
//! and the cross-realization mean is reduced in realization order.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fft::{Radix2, SpectralTransform};
use crate::model::ModelParams;
use crate::quantum::{current, initial_state, FloquetPropagator, MomentumGrid, QuantumState};
use crate::sum::CompensatedSum;
use crate::{math, CurrentSeries, Error, Result, SeriesKind, C64};

pub const DEFAULT_REALIZATIONS: u64 = 1000;
pub const DEFAULT_SEED: u64 = 0x5eed_2007;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    None,
    /// `K → K [1 + A(ξ − ½)]`, one ξ per kick.
    Amplitude,
    /// `c_m → c_m e^{i 2πB ξ_m}` after every kick, one ξ per lattice slot.
    Phase,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    kind: NoiseKind,
    intensity: f64,
    realizations: u64,
    seed: u64,
}

impl NoiseSpec {
    /// `NoiseKind::None` is normalized to intensity 0 and one realization.
    pub fn new(kind: NoiseKind, intensity: f64, realizations: u64, seed: u64) -> Result<Self> {
        if kind == NoiseKind::None {
            return Ok(Self::none());
        }
        if !(intensity.is_finite() && intensity >= 0.0) {
            return Err(Error::Config("noise intensity must be finite and non-negative"));
        }
        if realizations == 0 {
            return Err(Error::Config("at least one noise realization is required"));
        }
        Ok(Self { kind, intensity, realizations, seed })
    }

    pub const fn none() -> Self {
        Self { kind: NoiseKind::None, intensity: 0.0, realizations: 1, seed: 0 }
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn realizations(&self) -> u64 {
        self.realizations
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// `K [1 + A(ξ − ½)]`.
#[inline]
pub fn noisy_kick_strength(kick_strength: f64, amplitude: f64, xi: f64) -> f64 {
    kick_strength * (1.0 + amplitude * (xi - 0.5))
}

/// Independent stream for realization `r`.
pub fn realization_rng(seed: u64, realization: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(realization);
    rng
}

/// Multiplies every momentum amplitude by `exp(i 2πB ξ_m)`, drawing the ξ in
/// slot order. Moduli are untouched.
pub fn apply_phase_noise<R: Rng + ?Sized>(s: &mut QuantumState, intensity: f64, rng: &mut R) {
    if intensity == 0.0 {
        return;
    }
    for c in s.amplitudes_mut() {
        let xi: f64 = rng.random();
        let (sn, cs) = math::sin_cos(TAU * intensity * xi);
        *c *= C64::new(cs, sn);
    }
}

/// Current series of one noise realization.
pub fn run_realization<T: SpectralTransform>(
    params: &ModelParams,
    grid: &MomentumGrid,
    spec: &NoiseSpec,
    realization: u64,
    n_kicks: usize,
) -> Result<Vec<f64>> {
    if n_kicks == 0 {
        return Err(Error::Config("at least one kick is required"));
    }
    let mut rng = realization_rng(spec.seed, realization);
    let mut prop = FloquetPropagator::<T>::with_transform(params, grid)?;
    let mut state = initial_state(grid)?;
    let mut values = Vec::with_capacity(n_kicks);
    let wrap = |e| Error::Realization { realization, source: Box::new(e) };
    for _ in 0..n_kicks {
        match spec.kind {
            NoiseKind::Amplitude => {
                let xi: f64 = rng.random();
                prop.set_kick_strength(noisy_kick_strength(params.kick_strength, spec.intensity, xi));
                prop.step(&mut state).map_err(wrap)?;
            }
            NoiseKind::Phase => {
                prop.step(&mut state).map_err(wrap)?;
                apply_phase_noise(&mut state, spec.intensity, &mut rng);
            }
            NoiseKind::None => prop.step(&mut state).map_err(wrap)?,
        }
        values.push(current(&state));
    }
    Ok(values)
}

/// Realization mean and its standard error, per kick.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseAveragedSeries {
    pub series: CurrentSeries,
    pub stderr: Vec<f64>,
    pub realizations: u64,
}

/// Streaming mean/variance over realizations, fed in realization order.
#[derive(Debug, Clone)]
pub struct RealizationAccumulator {
    sum: Vec<CompensatedSum>,
    sum_sq: Vec<CompensatedSum>,
    count: u64,
}

impl RealizationAccumulator {
    pub fn new(n_kicks: usize) -> Self {
        Self {
            sum: alloc::vec![CompensatedSum::new(); n_kicks],
            sum_sq: alloc::vec![CompensatedSum::new(); n_kicks],
            count: 0,
        }
    }

    pub fn push(&mut self, values: &[f64]) {
        assert_eq!(values.len(), self.sum.len(), "realization length mismatch");
        for ((s, q), &v) in self.sum.iter_mut().zip(self.sum_sq.iter_mut()).zip(values) {
            s.add(v);
            q.add(v * v);
        }
        self.count += 1;
    }

    pub fn finish(self) -> NoiseAveragedSeries {
        let n = self.count as f64;
        let mut mean = Vec::with_capacity(self.sum.len());
        let mut stderr = Vec::with_capacity(self.sum.len());
        for (s, q) in self.sum.iter().zip(&self.sum_sq) {
            let m = s.value() / n;
            mean.push(m);
            let se = if self.count > 1 {
                let var = ((q.value() - n * m * m) / (n - 1.0)).max(0.0);
                math::sqrt(var / n)
            } else {
                0.0
            };
            stderr.push(se);
        }
        NoiseAveragedSeries {
            series: CurrentSeries::new(SeriesKind::NoiseAveraged, mean),
            stderr,
            realizations: self.count,
        }
    }
}

/// Mean current over `spec.realizations()` noise histories.
pub fn noise_averaged_current(params: &ModelParams, grid: &MomentumGrid, spec: &NoiseSpec, n_kicks: usize) -> Result<NoiseAveragedSeries> {
    noise_averaged_current_with::<Radix2>(params, grid, spec, n_kicks)
}

pub fn noise_averaged_current_with<T: SpectralTransform>(
    params: &ModelParams,
    grid: &MomentumGrid,
    spec: &NoiseSpec,
    n_kicks: usize,
) -> Result<NoiseAveragedSeries> {
    let mut acc = RealizationAccumulator::new(n_kicks);
    for r in 0..spec.realizations {
        acc.push(&run_realization::<T>(params, grid, spec, r, n_kicks)?);
    }
    Ok(acc.finish())
}
