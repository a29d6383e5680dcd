//! CSV output.
//!
//! | file                  | header                     | digits |
//! |-----------------------|----------------------------|--------|
//! | phase portrait        | `q,p`                      | 9      |
//! | current series        | `kick,p_mean`              | 12     |
//! | momentum distribution | `p,prob`                   | 12     |
//! | noise-averaged series | `kick,p_mean,stderr`       | 12     |
//! | ħ sweep               | `hbar,rate,residual_rms`   | 12     |
//!
//! Numbers use `%g`-style formatting with the given significant digits.

use std::io::{self, Write};

use harper_core::analysis::SweepResult;
use harper_core::noise::NoiseAveragedSeries;
use harper_core::CurrentSeries;

pub const PORTRAIT_DIGITS: usize = 9;
pub const SERIES_DIGITS: usize = 12;

/// Formats `x` like C's `%.{digits}g`.
pub fn sig(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_portrait<W: Write>(mut w: W, points: &[(f64, f64)]) -> io::Result<()> {
    writeln!(w, "q,p")?;
    for &(q, p) in points {
        writeln!(w, "{},{}", sig(q, PORTRAIT_DIGITS), sig(p, PORTRAIT_DIGITS))?;
    }
    w.flush()
}

pub fn write_series<W: Write>(mut w: W, series: &CurrentSeries) -> io::Result<()> {
    writeln!(w, "kick,p_mean")?;
    for (n, v) in series.iter() {
        writeln!(w, "{n},{}", sig(v, SERIES_DIGITS))?;
    }
    w.flush()
}

pub fn write_distribution<W: Write>(mut w: W, dist: &[(f64, f64)]) -> io::Result<()> {
    writeln!(w, "p,prob")?;
    for &(p, prob) in dist {
        writeln!(w, "{},{}", sig(p, SERIES_DIGITS), sig(prob, SERIES_DIGITS))?;
    }
    w.flush()
}

pub fn write_noise_series<W: Write>(mut w: W, avg: &NoiseAveragedSeries) -> io::Result<()> {
    writeln!(w, "kick,p_mean,stderr")?;
    for ((n, v), se) in avg.series.iter().zip(&avg.stderr) {
        writeln!(w, "{n},{},{}", sig(v, SERIES_DIGITS), sig(*se, SERIES_DIGITS))?;
    }
    w.flush()
}

/// Failed entries are written with `NaN` rate and residual.
pub fn write_sweep<W: Write>(mut w: W, sweep: &SweepResult) -> io::Result<()> {
    writeln!(w, "hbar,rate,residual_rms")?;
    for e in &sweep.entries {
        let (rate, rms) = match &e.rate {
            Ok(r) => (r.slope, r.residual_rms),
            Err(_) => (f64::NAN, f64::NAN),
        };
        writeln!(w, "{},{},{}", sig(e.hbar, SERIES_DIGITS), sig(rate, SERIES_DIGITS), sig(rms, SERIES_DIGITS))?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use harper_core::SeriesKind;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.0, 9), "0");
        assert_eq!(sig(1.0, 9), "1");
        assert_eq!(sig(-6.0, 9), "-6");
        assert_eq!(sig(std::f64::consts::PI, 9), "3.14159265");
        assert_eq!(sig(4.747_580_123_456_7, 12), "4.74758012346");
        assert_eq!(sig(123_456_789_012.0, 9), "1.23456789e+11");
        assert_eq!(sig(0.000_123_456, 3), "0.000123");
        assert_eq!(sig(0.000_012_345_6, 3), "1.23e-05");
        assert_eq!(sig(1e-300, 12), "1e-300");
        assert_eq!(sig(999_999_999.6, 9), "1e+09");
        assert_eq!(sig(f64::NAN, 9), "NaN");
    }

    #[test]
    fn series_csv() {
        let s = CurrentSeries::new(SeriesKind::Quantum, vec![0.0, -0.5, 420.123]);
        let mut out = Vec::new();
        write_series(&mut out, &s).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "kick,p_mean\n1,0\n2,-0.5\n3,420.123\n");
    }
}
