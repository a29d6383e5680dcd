use std::sync::Arc;

use harper_core::fft::SpectralTransform;
use harper_core::C64;
use rustfft::{Fft, FftPlanner};

/// Unitary transform pair backed by `rustfft`.
pub struct RustFft {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<C64>,
    scale: f64,
}

impl std::fmt::Debug for RustFft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RustFft").field("len", &self.forward.len()).finish()
    }
}

impl SpectralTransform for RustFft {
    fn plan(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Self {
            forward,
            inverse,
            scratch: vec![C64::new(0.0, 0.0); scratch_len],
            scale: 1.0 / (len as f64).sqrt(),
        }
    }

    fn len(&self) -> usize {
        self.forward.len()
    }

    fn to_position(&mut self, buf: &mut [C64]) {
        self.inverse.process_with_scratch(buf, &mut self.scratch);
        buf.iter_mut().for_each(|x| *x *= self.scale);
    }

    fn to_momentum(&mut self, buf: &mut [C64]) {
        self.forward.process_with_scratch(buf, &mut self.scratch);
        buf.iter_mut().for_each(|x| *x *= self.scale);
    }
}
