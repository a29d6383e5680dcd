//! Hamiltonian parameters and the two-harmonic kicking potential.

use alloc::format;
use core::f64::consts::{PI, TAU};
use core::fmt;
use core::str::FromStr;

use crate::{math, Error, Result};

/// Effective Planck constant 2π/(6 + σ_g), σ_g = (√5 − 1)/2.
///
/// ħ/2π is then "as irrational as possible", far from quantum resonances.
pub fn golden_hbar() -> f64 {
    let golden = (math::sqrt(5.0) - 1.0) / 2.0;
    TAU / (6.0 + golden)
}

/// Parameters of `H = L cos p + K V(q) Σ δ(t − n)` with
/// `V(q) = cos(q + φ₁) + η sin(2q + φ₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// K, the kick strength.
    pub kick_strength: f64,
    /// L, the kinetic strength.
    pub kinetic_strength: f64,
    /// φ₁, phase of the fundamental harmonic.
    pub phase1: f64,
    /// φ₂, phase of the second harmonic.
    pub phase2: f64,
    /// η, amplitude of the second harmonic.
    pub second_harmonic: f64,
    /// Effective Planck constant; only quantum runs read it.
    pub hbar: Option<f64>,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0, 0.0)
    }
}

impl ModelParams {
    pub const fn new(kick_strength: f64, kinetic_strength: f64, phase1: f64, phase2: f64, second_harmonic: f64) -> Self {
        Self { kick_strength, kinetic_strength, phase1, phase2, second_harmonic, hbar: None }
    }

    /// Plain kicked Harper model, `V(q) = cos q`.
    pub const fn harper(kick_strength: f64, kinetic_strength: f64) -> Self {
        Self::new(kick_strength, kinetic_strength, 0.0, 0.0, 0.0)
    }

    pub const fn with_hbar(mut self, hbar: f64) -> Self {
        self.hbar = Some(hbar);
        self
    }

    pub const fn without_hbar(mut self) -> Self {
        self.hbar = None;
        self
    }

    /// Same potential with both strengths replaced.
    pub const fn with_strengths(mut self, kick_strength: f64, kinetic_strength: f64) -> Self {
        self.kick_strength = kick_strength;
        self.kinetic_strength = kinetic_strength;
        self
    }

    /// ħ if set, otherwise [`golden_hbar`].
    pub fn hbar_or_default(&self) -> f64 {
        self.hbar.unwrap_or_else(golden_hbar)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |key, v: f64, nonneg: bool| {
            if !v.is_finite() {
                Err(Error::Param { key, reason: "must be finite" })
            } else if nonneg && v < 0.0 {
                Err(Error::Param { key, reason: "must be non-negative" })
            } else {
                Ok(())
            }
        };
        check("K", self.kick_strength, true)?;
        check("L", self.kinetic_strength, true)?;
        check("phi1", self.phase1, false)?;
        check("phi2", self.phase2, false)?;
        check("eta", self.second_harmonic, false)?;
        if let Some(h) = self.hbar {
            if !(h.is_finite() && h > 0.0) {
                return Err(Error::Param { key: "hbar", reason: "must be positive and finite" });
            }
        }
        Ok(())
    }

    /// `V(q) = cos(q + φ₁) + η sin(2q + φ₂)`.
    #[inline]
    pub fn potential(&self, q: f64) -> f64 {
        math::cos(q + self.phase1) + self.second_harmonic * math::sin(2.0 * q + self.phase2)
    }

    /// `V′(q) = −sin(q + φ₁) + 2η cos(2q + φ₂)`.
    #[inline]
    pub fn potential_derivative(&self, q: f64) -> f64 {
        -math::sin(q + self.phase1) + 2.0 * self.second_harmonic * math::cos(2.0 * q + self.phase2)
    }

    /// Assigns one field from its key=value name. Returns `Ok(false)` for keys
    /// that are not model parameters.
    pub fn set(&mut self, key: &str, value: &str) -> Result<bool> {
        let slot = match key {
            "K" => &mut self.kick_strength,
            "L" => &mut self.kinetic_strength,
            "phi1" => &mut self.phase1,
            "phi2" => &mut self.phase2,
            "eta" => &mut self.second_harmonic,
            "hbar" => {
                self.hbar = Some(parse_value(key, value)?);
                return Ok(true);
            }
            _ => return Ok(false),
        };
        *slot = parse_value(key, value)?;
        Ok(true)
    }
}

fn parse_value(key: &str, value: &str) -> Result<f64> {
    let v = value.trim();
    v.parse::<f64>()
        .map_err(|_| Error::Parse(format!("`{key}`: `{v}` is not a number")))
}

/// Flat key=value form, one pair per line. `hbar` is omitted when unset.
impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "K={}", self.kick_strength)?;
        writeln!(f, "L={}", self.kinetic_strength)?;
        writeln!(f, "phi1={}", self.phase1)?;
        writeln!(f, "phi2={}", self.phase2)?;
        writeln!(f, "eta={}", self.second_harmonic)?;
        if let Some(h) = self.hbar {
            writeln!(f, "hbar={h}")?;
        }
        Ok(())
    }
}

/// Parses the flat key=value form. Blank lines and `#` comments are skipped;
/// missing keys keep their defaults; unknown keys are rejected.
impl FromStr for ModelParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut params = ModelParams::default();
        for line in s.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{line}`")))?;
            let key = key.trim();
            if !params.set(key, value)? {
                return Err(Error::Parse(format!("unknown key `{key}`")));
            }
        }
        params.validate()?;
        Ok(params)
    }
}

/// Number of q points used by [`is_ratchet_symmetric`].
pub const SYMMETRY_GRID_POINTS: usize = 1024;
/// Default tolerance for [`is_ratchet_symmetric`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// The only reflection `q → c − q` that can leave `cos(q + φ₁)` invariant has
/// `c = −2φ₁ (mod 2π)`. Returned in `[0, 2π)`.
pub fn reflection_center(params: &ModelParams) -> f64 {
    let c = math::rem_euclid(-2.0 * params.phase1, TAU);
    // rem_euclid can round up to exactly 2π
    if c >= TAU { 0.0 } else { c }
}

/// Largest `|V(c − q) − V(q)|` over `points` equally spaced q in `[0, 2π)`.
pub fn reflection_defect(params: &ModelParams, points: usize) -> f64 {
    let c = reflection_center(params);
    (0..points)
        .map(|j| {
            let q = TAU * j as f64 / points as f64;
            (params.potential(c - q) - params.potential(q)).abs()
        })
        .fold(0.0, f64::max)
}

/// True when the dynamics is invariant under `q → c − q, p → −p` for some
/// reflection center `c`, which forces the q-averaged current of a
/// `p = 0` ensemble to vanish.
///
/// The kinetic term is even in `p`, so the map symmetry reduces to
/// `V(c − q) = V(q)`. For `V = sin q + cos 2q` the center is `π`; for the
/// plain cosine it is `0`.
pub fn is_ratchet_symmetric(params: &ModelParams, tol: f64) -> bool {
    is_ratchet_symmetric_on(params, tol, SYMMETRY_GRID_POINTS)
}

pub fn is_ratchet_symmetric_on(params: &ModelParams, tol: f64, points: usize) -> bool {
    reflection_defect(params, points.max(1)) < tol
}

/// Human-readable description of the reflection, e.g. `q→π−q, p→−p`.
pub fn describe_reflection(center: f64) -> alloc::string::String {
    if center.abs() < 1e-12 || (center - TAU).abs() < 1e-12 {
        "q→−q, p→−p".into()
    } else if (center - PI).abs() < 1e-12 {
        "q→π−q, p→−p".into()
    } else {
        format!("q→{center:.6}−q, p→−p")
    }
}
