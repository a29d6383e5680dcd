//! Run configuration: presets, the key=value config file, and flag
//! overrides. Precedence is preset < config file < flags.

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;
use std::str::FromStr;

use harper_core::analysis::{standard_hbar_grid, DEFAULT_FIT_WINDOW};
use harper_core::classical::{DEFAULT_ENSEMBLE_SIZE, DEFAULT_PORTRAIT_KICKS, DEFAULT_PORTRAIT_SEEDS};
use harper_core::model::golden_hbar;
use harper_core::noise::{NoiseKind, DEFAULT_REALIZATIONS, DEFAULT_SEED};
use harper_core::quantum::DEFAULT_GRID_SIZE;
use harper_core::ModelParams;
use thiserror::Error;

pub const DEFAULT_KICKS: usize = 1000;
/// `--quick` divides kicks, ensemble sizes, realizations and the fit window
/// by this factor.
pub const QUICK_FACTOR: usize = 10;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown preset `{0}` (expected fig1a, fig1b, fig1c, fig1d, fig2, fig3, fig4a or fig4b)")]
    UnknownPreset(String),
    #[error("invalid value for `{key}`: {message}")]
    Value { key: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig1a,
    Fig1b,
    Fig1c,
    Fig1d,
    Fig2,
    Fig3,
    Fig4a,
    Fig4b,
}

impl FromStr for Preset {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "fig1a" => Preset::Fig1a,
            "fig1b" => Preset::Fig1b,
            "fig1c" => Preset::Fig1c,
            "fig1d" => Preset::Fig1d,
            "fig2" => Preset::Fig2,
            "fig3" => Preset::Fig3,
            "fig4a" => Preset::Fig4a,
            "fig4b" => Preset::Fig4b,
            other => return Err(ConfigError::UnknownPreset(other.to_string())),
        })
    }
}

/// `V = cos q + sin 2q`, `K = 2L = 3`.
pub const CHAOTIC: ModelParams = ModelParams::new(3.0, 1.5, 0.0, 0.0, 1.0);
pub const AMPLITUDE_LADDER: [f64; 3] = [0.05, 0.1, 0.2];
pub const PHASE_LADDER: [f64; 3] = [0.0125, 0.025, 0.05];

impl Preset {
    pub fn model(self) -> ModelParams {
        let base = match self {
            Preset::Fig1a | Preset::Fig2 | Preset::Fig3 | Preset::Fig4a | Preset::Fig4b => CHAOTIC,
            Preset::Fig1b => CHAOTIC.with_strengths(1.0, 0.5),
            Preset::Fig1c => CHAOTIC.with_strengths(0.4, 0.2),
            // V = sin q + cos 2q
            Preset::Fig1d => ModelParams::new(1.0, 0.5, FRAC_PI_2, FRAC_PI_2, 1.0),
        };
        base.with_hbar(golden_hbar())
    }
}

/// Fully resolved settings of one CLI invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelParams,
    pub grid_size: usize,
    /// `None` means the subcommand's own default.
    pub kicks: Option<usize>,
    pub ensemble_size: usize,
    pub noise_kind: NoiseKind,
    /// A single intensity; `None` runs [`RunConfig::ladder`].
    pub noise_intensity: Option<f64>,
    pub ladder: Vec<f64>,
    pub realizations: u64,
    pub seed: u64,
    pub hbars: Vec<f64>,
    pub fit_window: (usize, usize),
    pub orbits: usize,
    pub output: Option<PathBuf>,
    pub quick: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: CHAOTIC.with_hbar(golden_hbar()),
            grid_size: DEFAULT_GRID_SIZE,
            kicks: None,
            ensemble_size: DEFAULT_ENSEMBLE_SIZE,
            noise_kind: NoiseKind::None,
            noise_intensity: None,
            ladder: Vec::new(),
            realizations: DEFAULT_REALIZATIONS,
            seed: DEFAULT_SEED,
            hbars: Vec::new(),
            fit_window: DEFAULT_FIT_WINDOW,
            orbits: DEFAULT_PORTRAIT_SEEDS,
            output: None,
            quick: false,
        }
    }
}

impl RunConfig {
    pub fn from_preset(preset: Preset) -> Self {
        let mut c = Self { model: preset.model(), ..Self::default() };
        match preset {
            Preset::Fig1a | Preset::Fig1b | Preset::Fig1c | Preset::Fig1d => c.kicks = Some(DEFAULT_PORTRAIT_KICKS),
            Preset::Fig2 => c.kicks = Some(DEFAULT_KICKS),
            Preset::Fig3 => c.hbars = standard_hbar_grid(),
            Preset::Fig4a => {
                c.noise_kind = NoiseKind::Amplitude;
                c.ladder = AMPLITUDE_LADDER.to_vec();
            }
            Preset::Fig4b => {
                c.noise_kind = NoiseKind::Phase;
                c.ladder = PHASE_LADDER.to_vec();
            }
        }
        c
    }

    /// Kicks for a subcommand whose default is `default`, after `--quick`.
    pub fn kicks_or(&self, default: usize) -> usize {
        let k = self.kicks.unwrap_or(default);
        if self.quick { (k / QUICK_FACTOR).max(1) } else { k }
    }

    pub fn effective_ensemble_size(&self) -> usize {
        if self.quick { (self.ensemble_size / QUICK_FACTOR).max(1) } else { self.ensemble_size }
    }

    pub fn effective_realizations(&self) -> u64 {
        if self.quick { (self.realizations / QUICK_FACTOR as u64).max(1) } else { self.realizations }
    }

    pub fn effective_fit_window(&self) -> (usize, usize) {
        let (a, b) = self.fit_window;
        if self.quick { ((a / QUICK_FACTOR).max(1), (b / QUICK_FACTOR).max(1)) } else { (a, b) }
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), ConfigError> {
        for (key, value) in &o.model {
            self.model.set(key, value).map_err(|e| ConfigError::Value { key: key.clone(), message: e.to_string() })?;
        }
        macro_rules! take {
            ($field:ident) => {
                if let Some(v) = o.$field.clone() {
                    self.$field = v;
                }
            };
        }
        take!(grid_size);
        take!(ensemble_size);
        take!(noise_kind);
        take!(realizations);
        take!(seed);
        take!(hbars);
        take!(orbits);
        take!(quick);
        if let Some(k) = o.kicks {
            self.kicks = Some(k);
        }
        if let Some(v) = o.noise_intensity {
            self.noise_intensity = Some(v);
        }
        if let Some(a) = o.fit_min {
            self.fit_window.0 = a;
        }
        if let Some(b) = o.fit_max {
            self.fit_window.1 = b;
        }
        if let Some(p) = &o.output {
            self.output = Some(p.clone());
        }
        Ok(())
    }
}

/// Partial settings from a config file or the command line.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub preset: Option<Preset>,
    /// Model keys (`K`, `L`, `phi1`, `phi2`, `eta`, `hbar`) as raw text.
    pub model: Vec<(String, String)>,
    pub grid_size: Option<usize>,
    pub kicks: Option<usize>,
    pub ensemble_size: Option<usize>,
    pub noise_kind: Option<NoiseKind>,
    pub noise_intensity: Option<f64>,
    pub realizations: Option<u64>,
    pub seed: Option<u64>,
    pub hbars: Option<Vec<f64>>,
    pub fit_min: Option<usize>,
    pub fit_max: Option<usize>,
    pub orbits: Option<usize>,
    pub output: Option<PathBuf>,
    pub quick: Option<bool>,
}

pub fn parse_noise_kind(s: &str) -> Result<NoiseKind, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "none" => Ok(NoiseKind::None),
        "amplitude" => Ok(NoiseKind::Amplitude),
        "phase" => Ok(NoiseKind::Phase),
        other => Err(format!("unknown noise kind `{other}` (expected none, amplitude or phase)")),
    }
}

/// Comma- or whitespace-separated list of numbers.
pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect()
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(format!("`{other}` is not a boolean")),
    }
}

impl FromStr for Overrides {
    type Err = ConfigError;

    /// Flat `key=value` lines (UTF-8); `#` starts a comment. Keys are the
    /// flag names without dashes (`grid-size` and `grid_size` both work).
    fn from_str(text: &str) -> Result<Self, ConfigError> {
        let mut o = Overrides::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| ConfigError::Syntax { line: idx + 1, message };
            let (key, value) = line.split_once('=').ok_or_else(|| syntax(format!("expected key=value, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |m: String| syntax(format!("`{key}`: {m}"));
            match key.replace('_', "-").as_str() {
                "K" | "L" | "phi1" | "phi2" | "eta" | "hbar" => o.model.push((key.to_string(), value.to_string())),
                "preset" => o.preset = Some(value.parse()?),
                "grid-size" => o.grid_size = Some(value.parse().map_err(|e| num(format!("{e}")))?),
                "kicks" => o.kicks = Some(value.parse().map_err(|e| num(format!("{e}")))?),
                "ensemble-size" => o.ensemble_size = Some(value.parse().map_err(|e| num(format!("{e}")))?),
                "noise-kind" => o.noise_kind = Some(parse_noise_kind(value).map_err(num)?),
                "noise-intensity" => o.noise_intensity = Some(value.parse().map_err(|e| num(format!("{e}")))?),
                "realizations" => o.realizations = Some(value.parse().map_err(|e| num(format!("{e}")))?),
                "seed" => o.seed = Some(value.parse().map_err(|e| num(format!("{e}")))?),
                "hbars" => o.hbars = Some(parse_list(value).map_err(num)?),
                "fit-min" => o.fit_min = Some(value.parse().map_err(|e| num(format!("{e}")))?),
                "fit-max" => o.fit_max = Some(value.parse().map_err(|e| num(format!("{e}")))?),
                "orbits" => o.orbits = Some(value.parse().map_err(|e| num(format!("{e}")))?),
                "output" => o.output = Some(PathBuf::from(value)),
                "quick" => o.quick = Some(parse_bool(value).map_err(num)?),
                _ => return Err(syntax(format!("unknown key `{key}`"))),
            }
        }
        Ok(o)
    }
}

/// Resolves preset, config file, then flags.
pub fn resolve(file: Option<&Overrides>, flags: &Overrides) -> Result<RunConfig, ConfigError> {
    let preset = flags.preset.or(file.and_then(|f| f.preset));
    let mut cfg = preset.map(RunConfig::from_preset).unwrap_or_default();
    if let Some(f) = file {
        cfg.apply(f)?;
    }
    cfg.apply(flags)?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_encode_parameter_sets() {
        let m = Preset::Fig1a.model();
        assert_eq!((m.kick_strength, m.kinetic_strength, m.phase1, m.phase2, m.second_harmonic), (3.0, 1.5, 0.0, 0.0, 1.0));
        assert_eq!(Preset::Fig1b.model().kick_strength, 1.0);
        assert_eq!(Preset::Fig1b.model().kinetic_strength, 0.5);
        assert_eq!(Preset::Fig1c.model().kick_strength, 0.4);
        assert_eq!(Preset::Fig1c.model().kinetic_strength, 0.2);
        let d = Preset::Fig1d.model();
        assert_eq!((d.phase1, d.phase2, d.second_harmonic), (FRAC_PI_2, FRAC_PI_2, 1.0));
        assert_eq!(Preset::Fig2.model().hbar, Some(golden_hbar()));
        assert_eq!(RunConfig::from_preset(Preset::Fig3).hbars.len(), 40);
        let a = RunConfig::from_preset(Preset::Fig4a);
        assert_eq!((a.noise_kind, a.ladder.as_slice(), a.realizations), (NoiseKind::Amplitude, &AMPLITUDE_LADDER[..], 1000));
        assert_eq!(RunConfig::from_preset(Preset::Fig4b).noise_kind, NoiseKind::Phase);
        assert!("fig9".parse::<Preset>().is_err());
    }

    #[test]
    fn file_then_flags() {
        let file: Overrides = "# test\npreset = fig1b\nK=2.5\nkicks=50\nhbars = 1.03, 1.04\nnoise_kind=phase\n".parse().unwrap();
        let flags = Overrides { kicks: Some(70), model: vec![("eta".into(), "0.5".into())], ..Default::default() };
        let cfg = resolve(Some(&file), &flags).unwrap();
        assert_eq!(cfg.model.kick_strength, 2.5);
        assert_eq!(cfg.model.kinetic_strength, 0.5);
        assert_eq!(cfg.model.second_harmonic, 0.5);
        assert_eq!(cfg.kicks, Some(70));
        assert_eq!(cfg.hbars, vec![1.03, 1.04]);
        assert_eq!(cfg.noise_kind, NoiseKind::Phase);

        let flags = Overrides { preset: Some(Preset::Fig1c), ..Default::default() };
        assert_eq!(resolve(Some(&file), &flags).unwrap().model.kinetic_strength, 0.2);
    }

    #[test]
    fn bad_files() {
        assert!(matches!("K=1\nbogus=2".parse::<Overrides>(), Err(ConfigError::Syntax { line: 2, .. })));
        assert!("kicks=ten".parse::<Overrides>().is_err());
        assert!("just a line".parse::<Overrides>().is_err());
        let o: Overrides = "K=abc".parse().unwrap();
        assert!(resolve(Some(&o), &Overrides::default()).is_err());
    }

    #[test]
    fn quick_scaling() {
        let cfg = RunConfig { quick: true, ..RunConfig::default() };
        assert_eq!(cfg.kicks_or(1000), 100);
        assert_eq!(cfg.effective_ensemble_size(), 10_000);
        assert_eq!(cfg.effective_realizations(), 100);
        assert_eq!(cfg.effective_fit_window(), (10, 100));
    }
}
