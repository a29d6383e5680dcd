//! Dense-matrix reference propagator.
//!
//! Builds `⟨m′|exp(−iKV(q̂)/ħ)|m⟩` from Fourier coefficients of the kick
//! computed by direct quadrature, with no FFT, then propagates by plain
//! matrix-vector products.
#![allow(dead_code)]

use std::f64::consts::TAU;

use harper_core::quantum::MomentumGrid;
use harper_core::{ModelParams, C64};

const QUADRATURE_POINTS: usize = 4096;
const MAX_HARMONIC: i64 = 512;

fn cis(theta: f64) -> C64 {
    C64::new(theta.cos(), theta.sin())
}

fn potential(p: &ModelParams, q: f64) -> f64 {
    (q + p.phase1).cos() + p.second_harmonic * (2.0 * q + p.phase2).sin()
}

/// `a_k = (1/2π) ∫ e^{−ikq} e^{−iKV(q)/ħ} dq` for `|k| < MAX_HARMONIC`, by
/// the periodic trapezoid rule (exponentially convergent for this analytic
/// integrand).
fn kick_fourier_coefficients(params: &ModelParams, hbar: f64) -> Vec<(i64, C64)> {
    let m = QUADRATURE_POINTS;
    let f: Vec<C64> = (0..m)
        .map(|j| {
            let q = TAU * j as f64 / m as f64;
            cis(-params.kick_strength * potential(params, q) / hbar)
        })
        .collect();
    (-MAX_HARMONIC..MAX_HARMONIC)
        .map(|k| {
            let s: C64 = f
                .iter()
                .enumerate()
                .map(|(j, v)| v * cis(-(k as f64) * TAU * j as f64 / m as f64))
                .sum();
            (k, s / m as f64)
        })
        .collect()
}

pub struct DenseFloquet {
    n: usize,
    kick: Vec<C64>,
    kinetic: Vec<C64>,
}

impl DenseFloquet {
    pub fn new(params: &ModelParams, grid: &MomentumGrid) -> Self {
        let n = grid.size();
        let hbar = grid.hbar();
        // An N-point position grid cannot tell m from m + N: fold the
        // coefficients onto residues mod N.
        let mut folded = vec![C64::new(0.0, 0.0); n];
        for (k, a) in kick_fourier_coefficients(params, hbar) {
            folded[k.rem_euclid(n as i64) as usize] += a;
        }
        let mut kick = vec![C64::new(0.0, 0.0); n * n];
        for row in 0..n {
            for col in 0..n {
                let dm = grid.m(row) - grid.m(col);
                kick[row * n + col] = folded[dm.rem_euclid(n as i64) as usize];
            }
        }
        let kinetic = (0..n)
            .map(|i| {
                let p = grid.m(i) as f64 * hbar;
                cis(-params.kinetic_strength * p.cos() / hbar)
            })
            .collect();
        Self { n, kick, kinetic }
    }

    pub fn step(&self, c: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|row| {
                let s: C64 = (0..self.n).map(|col| self.kick[row * self.n + col] * c[col]).sum();
                s * self.kinetic[row]
            })
            .collect()
    }
}

/// Max `|a_i − b_i|`.
pub fn max_amplitude_error(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
