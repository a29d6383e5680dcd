//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod oracle;

use std::f64::consts::FRAC_PI_2;
use std::process::ExitCode;
use std::time::Instant;

use harper::parallel;
use harper::RustFft;
use harper_core::analysis::{fit_rate, GridPolicy};
use harper_core::classical::{kick_map_step, ClassicalState, DEFAULT_ENSEMBLE_SIZE};
use harper_core::model::golden_hbar;
use harper_core::noise::{NoiseKind, NoiseSpec};
use harper_core::quantum::{current, initial_state, FloquetPropagator, LeakageGuard, MomentumGrid};
use harper_core::{CurrentSeries, ModelParams, SeriesKind};

const CHAOTIC: ModelParams = ModelParams::new(3.0, 1.5, 0.0, 0.0, 1.0);
const MIRROR: ModelParams = ModelParams::new(1.0, 0.5, FRAC_PI_2, FRAC_PI_2, 1.0);
const N: usize = 1 << 14;
const KICKS: usize = 1000;
const WINDOW: (usize, usize) = (100, 1000);
const CLASSICAL_BOUND: f64 = 5.0;

struct Report {
    failures: usize,
}

impl Report {
    fn record(&mut self, id: &str, name: &str, pass: bool, detail: String, started: Instant) {
        if !pass {
            self.failures += 1;
        }
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("{verdict} [{id}] {name}: {detail} ({:.1}s)", started.elapsed().as_secs_f64());
    }
}

/// Quantum run that also tracks the worst norm drift.
fn quantum_with_norm(params: &ModelParams, size: usize, kicks: usize) -> (CurrentSeries, f64) {
    let grid = MomentumGrid::centered(size, params.hbar_or_default()).unwrap();
    let mut prop = FloquetPropagator::<RustFft>::with_transform(params, &grid).unwrap();
    let mut state = initial_state(&grid).unwrap();
    let mut values = Vec::with_capacity(kicks);
    let mut drift: f64 = 0.0;
    for _ in 0..kicks {
        prop.step(&mut state).unwrap();
        values.push(current(&state));
        drift = drift.max((state.norm_sqr() - 1.0).abs());
    }
    (CurrentSeries::new(SeriesKind::Quantum, values), drift)
}

fn rate_at(params: &ModelParams) -> f64 {
    let grid = MomentumGrid::centered(N, params.hbar_or_default()).unwrap();
    parallel::quantum_rate(params, &grid, KICKS, WINDOW).unwrap()
}

fn local_extrema(xs: &[f64]) -> usize {
    let d: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    d.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
}

fn jacobian_determinant(params: &ModelParams, q: f64, p: f64) -> f64 {
    let h = 1e-6;
    let f = |q, p| kick_map_step(params, ClassicalState::new(q, p));
    let (qp, qm) = (f(q + h, p), f(q - h, p));
    let (pp, pm) = (f(q, p + h), f(q, p - h));
    let dq_dq = (qp.q - qm.q) / (2.0 * h);
    let dp_dq = (qp.p - qm.p) / (2.0 * h);
    let dq_dp = (pp.q - pm.q) / (2.0 * h);
    let dp_dp = (pp.p - pm.p) / (2.0 * h);
    dq_dq * dp_dp - dq_dp * dp_dq
}

fn dense_oracle_error(params: &ModelParams, guard: LeakageGuard) -> f64 {
    let grid = MomentumGrid::centered(64, golden_hbar()).unwrap();
    let dense = oracle::DenseFloquet::new(params, &grid);
    let mut prop = FloquetPropagator::<RustFft>::with_transform(params, &grid).unwrap().with_guard(guard);
    let mut state = initial_state(&grid).unwrap();
    let mut reference = state.amplitudes().to_vec();
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        prop.step(&mut state).unwrap();
        reference = dense.step(&reference);
        worst = worst.max(oracle::max_amplitude_error(state.amplitudes(), &reference));
    }
    worst
}

fn plateau_mean(series: &CurrentSeries, from: usize, to: usize) -> f64 {
    (from..=to).map(|n| series.at_kick(n).unwrap()).sum::<f64>() / (to - from + 1) as f64
}

fn main() -> ExitCode {
    let mut report = Report { failures: 0 };
    let hbar = golden_hbar();
    let chaotic = CHAOTIC.with_hbar(hbar);

    let t = Instant::now();
    let (series, drift) = quantum_with_norm(&chaotic, N, KICKS);
    let rate = fit_rate(&series, WINDOW.0, WINDOW.1).unwrap();
    let slope = rate.slope;
    report.record(
        "1",
        "acceleration rate",
        (slope - 0.42).abs() <= 0.03,
        format!("slope = {slope:.4}, expected 0.42 ± 0.03"),
        t,
    );
    println!(
        "     [1] magnitude check: |slope| = {:.4}, |slope − 0.42| = {:.4}, ⟨p⟩(1000) = {:.2}",
        slope.abs(),
        (slope.abs() - 0.42).abs(),
        series.last().unwrap()
    );

    let t = Instant::now();
    let classical = parallel::classical_current_series(&chaotic, 1_000_000, KICKS).unwrap();
    let c_slope = fit_rate(&classical, WINDOW.0, WINDOW.1).unwrap().slope;
    let c_last = classical.last().unwrap();
    report.record(
        "2",
        "classical null",
        c_slope.abs() < 0.01 && c_last.abs() < CLASSICAL_BOUND,
        format!("slope = {c_slope:.5}, ⟨p⟩(1000) = {c_last:.4}"),
        t,
    );

    let t = Instant::now();
    let mirror = MIRROR.with_hbar(hbar);
    let (q_mirror, _) = quantum_with_norm(&mirror, N, KICKS);
    let q_max = q_mirror.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let c_mirror = parallel::classical_current_series(&mirror, DEFAULT_ENSEMBLE_SIZE, KICKS).unwrap();
    let c_max = c_mirror.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    report.record(
        "3",
        "symmetry null",
        q_max < 1e-9 && c_max < 1e-8,
        format!("max quantum |⟨p⟩| = {q_max:.2e}, max classical |⟨p⟩| = {c_max:.2e}"),
        t,
    );

    let t = Instant::now();
    let r103 = rate_at(&CHAOTIC.with_hbar(1.03));
    let r104 = rate_at(&CHAOTIC.with_hbar(1.04));
    report.record(
        "4",
        "current reversal",
        r103 * r104 < 0.0,
        format!("rate(1.03) = {r103:.5}, rate(1.04) = {r104:.5}"),
        t,
    );

    let t = Instant::now();
    let fine: Vec<f64> = (1..=9).map(|m| 1.0 + m as f64 / 1000.0).collect();
    let sweep = parallel::hbar_sweep(&CHAOTIC, &GridPolicy::default(), &fine, KICKS, WINDOW).unwrap();
    let fine_rates: Vec<f64> = sweep.entries.iter().map(|e| e.rate.as_ref().map(|r| r.slope).unwrap_or(f64::NAN)).collect();
    let extrema = local_extrema(&fine_rates);
    report.record(
        "5",
        "smoothness on 1.001..1.009",
        fine_rates.iter().all(|r| r.is_finite()) && extrema <= 1,
        format!(
            "{extrema} local extrema; rates = [{}]",
            fine_rates.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>().join(", ")
        ),
        t,
    );

    let t = Instant::now();
    let r1 = rate_at(&chaotic.with_strengths(1.0, 0.5));
    let r04 = rate_at(&chaotic.with_strengths(0.4, 0.2));
    report.record(
        "6",
        "ordering of regimes",
        slope.abs() > r1.abs() && slope.abs() > r04.abs() && [slope, r1, r04].iter().all(|r| r.abs() > 0.005),
        format!("rate(K=3) = {slope:.4}, rate(K=1) = {r1:.4}, rate(K=0.4) = {r04:.4}"),
        t,
    );

    let t = Instant::now();
    let grid = MomentumGrid::centered(N, hbar).unwrap();
    let mut noise_ok = true;
    let mut details = Vec::new();
    let mut weakest = f64::INFINITY;
    for (kind, intensity, label) in [(NoiseKind::Amplitude, 0.2, "A=0.2"), (NoiseKind::Phase, 0.05, "B=0.05")] {
        let spec = NoiseSpec::new(kind, intensity, 200, 2007).unwrap();
        let avg = parallel::noise_averaged_current(&chaotic, &grid, &spec, KICKS).unwrap();
        let tail = fit_rate(&avg.series, 801, 1000).unwrap().slope;
        let plateau = plateau_mean(&avg.series, 801, 1000);
        noise_ok &= tail.abs() < 0.25 * slope.abs() && plateau.abs() > 20.0 * CLASSICAL_BOUND;
        weakest = weakest.min(plateau.abs());
        details.push(format!("{label}: tail slope = {tail:.4}, plateau = {plateau:.2}"));
    }
    report.record(
        "7",
        "noise robustness",
        noise_ok,
        format!("{}; noiseless slope = {slope:.4}", details.join("; ")),
        t,
    );
    println!(
        "     [7] against the measured classical current: weakest plateau / |classical ⟨p⟩(1000)| = {:.1}",
        weakest / c_last.abs()
    );

    let t = Instant::now();
    let weak = ModelParams::new(0.3, 0.15, 0.0, 0.0, 1.0);
    let err = [
        dense_oracle_error(&weak, LeakageGuard::default()),
        dense_oracle_error(&CHAOTIC, LeakageGuard::disabled()),
        dense_oracle_error(&MIRROR, LeakageGuard::disabled()),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    report.record("8", "dense oracle equivalence", err < 1e-10, format!("max amplitude error = {err:.2e}"), t);

    let t = Instant::now();
    let worst_det = (0..1000)
        .map(|i| {
            let q = (i as f64 * 0.618_033_988_749_895).fract() * std::f64::consts::TAU;
            let p = (i as f64 * 0.754_877_666_246_693).fract() * std::f64::consts::TAU - std::f64::consts::PI;
            (jacobian_determinant(&chaotic, q, p) - 1.0).abs()
        })
        .fold(0.0f64, f64::max);
    let (doubled, _) = quantum_with_norm(&chaotic, 2 * N, KICKS);
    let p_n = series.last().unwrap();
    let p_2n = doubled.last().unwrap();
    let rel = (p_2n - p_n).abs() / p_n.abs();
    report.record(
        "9",
        "numerical guards",
        drift < 1e-9 && worst_det < 1e-6 && rel < 1e-6,
        format!("norm drift = {drift:.2e}, |det J − 1| = {worst_det:.2e}, grid-doubling change = {rel:.2e}"),
        t,
    );

    println!("{} of 9 criteria failed", report.failures);
    if report.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
