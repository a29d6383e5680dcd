//! Spectral transforms between the momentum lattice and the position grid.
//!
//! Both directions carry a `1/√N` factor so the transform pair is unitary.
//! [`Radix2`] is a self-contained iterative Cooley-Tukey transform for
//! power-of-two lengths; other backends plug in through
//! [`SpectralTransform`].

use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::{math, C64};

/// Unitary DFT pair on a fixed power-of-two length.
///
/// `to_position` computes `x_j = N^{-1/2} Σ_k X_k e^{+2πi jk/N}` and
/// `to_momentum` its inverse `X_k = N^{-1/2} Σ_j x_j e^{−2πi jk/N}`.
pub trait SpectralTransform {
    /// Plans a transform of length `len` (a power of two).
    fn plan(len: usize) -> Self
    where
        Self: Sized;

    fn len(&self) -> usize;

    fn to_position(&mut self, buf: &mut [C64]);

    fn to_momentum(&mut self, buf: &mut [C64]);
}

/// In-place radix-2 decimation-in-time FFT.
#[derive(Debug, Clone)]
pub struct Radix2 {
    len: usize,
    /// `e^{−2πi k/N}` for `k < N/2`.
    twiddles: Vec<C64>,
    scale: f64,
}

impl Radix2 {
    pub fn new(len: usize) -> Self {
        assert!(len.is_power_of_two(), "radix-2 length must be a power of two, got {len}");
        let twiddles = (0..len / 2)
            .map(|k| {
                let (s, c) = math::sin_cos(-TAU * k as f64 / len as f64);
                C64::new(c, s)
            })
            .collect();
        Self { len, twiddles, scale: 1.0 / math::sqrt(len as f64) }
    }

    fn bit_reverse(&self, buf: &mut [C64]) {
        let n = self.len;
        let mut j = 0;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                buf.swap(i, j);
            }
        }
    }

    fn transform(&self, buf: &mut [C64], inverse: bool) {
        assert_eq!(buf.len(), self.len, "buffer length does not match the plan");
        let n = self.len;
        self.bit_reverse(buf);
        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for start in (0..n).step_by(2 * half) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let w = if inverse { w.conj() } else { w };
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
        for x in buf.iter_mut() {
            *x *= self.scale;
        }
    }
}

impl SpectralTransform for Radix2 {
    fn plan(len: usize) -> Self {
        Self::new(len)
    }

    fn len(&self) -> usize {
        self.len
    }

    fn to_position(&mut self, buf: &mut [C64]) {
        self.transform(buf, true);
    }

    fn to_momentum(&mut self, buf: &mut [C64]) {
        self.transform(buf, false);
    }
}
