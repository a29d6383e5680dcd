//! The `harper` command line.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical guard (edge leakage),
//! 4 I/O failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use harper_core::analysis::GridPolicy;
use harper_core::classical::{diagonal_seeds, phase_portrait, DEFAULT_PORTRAIT_KICKS};
use harper_core::model::{describe_reflection, is_ratchet_symmetric, reflection_center, SYMMETRY_TOLERANCE};
use harper_core::noise::{NoiseKind, NoiseSpec};
use harper_core::quantum::{momentum_distribution, MomentumGrid};
use thiserror::Error;

use crate::config::{self, parse_noise_kind, ConfigError, Overrides, Preset, RunConfig, DEFAULT_KICKS};
use crate::{format, parallel};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(harper_core::Error),
    #[error("numerical guard: {0}")]
    Numerical(harper_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Model(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

impl From<harper_core::Error> for CliError {
    fn from(e: harper_core::Error) -> Self {
        if e.is_numerical_guard() {
            CliError::Numerical(e)
        } else {
            CliError::Model(e)
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "harper", version, about = "Quantum ratchet transport in the generalized kicked Harper model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical phase portrait in the unit cell (CSV `q,p`).
    Portrait {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of seeds on the q = p diagonal.
        #[arg(long)]
        orbits: Option<usize>,
    },
    /// Quantum and/or classical current series (CSV `kick,p_mean`).
    Current {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = SeriesChoice::Both)]
        series: SeriesChoice,
        /// Also write the final momentum distribution (CSV `p,prob`).
        #[arg(long, value_name = "PATH")]
        distribution: Option<PathBuf>,
    },
    /// Acceleration rate versus ħ (CSV `hbar,rate,residual_rms`).
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated ħ values.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        hbars: Option<Vec<f64>>,
        #[arg(long)]
        fit_min: Option<usize>,
        #[arg(long)]
        fit_max: Option<usize>,
    },
    /// Noise-averaged quantum current (CSV `kick,p_mean,stderr`).
    Noise {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reports whether the potential has the reflection symmetry that forces
    /// the current to vanish.
    Symmetry {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesChoice {
    Quantum,
    Classical,
    Both,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    #[arg(long = "K")]
    pub k: Option<String>,
    #[arg(long = "L")]
    pub l: Option<String>,
    #[arg(long)]
    pub phi1: Option<String>,
    #[arg(long)]
    pub phi2: Option<String>,
    #[arg(long)]
    pub eta: Option<String>,
    #[arg(long)]
    pub hbar: Option<String>,
    #[arg(long)]
    pub grid_size: Option<usize>,
    #[arg(long)]
    pub kicks: Option<usize>,
    #[arg(long)]
    pub ensemble_size: Option<usize>,
    #[arg(long, value_parser = parse_noise_kind)]
    pub noise_kind: Option<NoiseKind>,
    #[arg(long)]
    pub noise_intensity: Option<f64>,
    #[arg(long)]
    pub realizations: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Scale kicks, ensembles and realizations down by 10.
    #[arg(long)]
    pub quick: bool,
    /// key=value config file supplying defaults for the flags.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        let model = [("K", &self.k), ("L", &self.l), ("phi1", &self.phi1), ("phi2", &self.phi2), ("eta", &self.eta), ("hbar", &self.hbar)]
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        Overrides {
            preset: self.preset,
            model,
            grid_size: self.grid_size,
            kicks: self.kicks,
            ensemble_size: self.ensemble_size,
            noise_kind: self.noise_kind,
            noise_intensity: self.noise_intensity,
            realizations: self.realizations,
            seed: self.seed,
            output: self.output.clone(),
            quick: self.quick.then_some(true),
            ..Overrides::default()
        }
    }

    pub fn resolve(&self, extra: Overrides) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                Some(text.parse::<Overrides>()?)
            }
            None => None,
        };
        let mut flags = self.overrides();
        flags.hbars = extra.hbars;
        flags.fit_min = extra.fit_min;
        flags.fit_max = extra.fit_max;
        flags.orbits = extra.orbits;
        let cfg = config::resolve(file.as_ref(), &flags)?;
        cfg.model.validate()?;
        Ok(cfg)
    }
}

/// Where one CSV goes: a file, or stdout when no path was given.
fn with_output<F>(path: Option<&Path>, write: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(p) => {
            let io_err = |source| CliError::Io { path: p.display().to_string(), source };
            let file = File::create(p).map_err(io_err)?;
            let mut w = BufWriter::new(file);
            write(&mut w).map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

/// `out.csv` + `quantum` → `out_quantum.csv`.
pub fn suffixed(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{tag}"),
    };
    path.with_file_name(name)
}

/// Writes one of several tagged outputs: to a suffixed file, or to stdout
/// behind a `# tag` line.
fn write_tagged<F>(base: Option<&Path>, tag: &str, write: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match base {
        Some(p) => with_output(Some(&suffixed(p, tag)), write),
        None => with_output(None, |w| {
            writeln!(w, "# {tag}")?;
            write(w)
        }),
    }
}

fn quantum_grid(cfg: &RunConfig) -> Result<MomentumGrid, CliError> {
    Ok(MomentumGrid::centered(cfg.grid_size, cfg.model.hbar_or_default())?)
}

pub fn cmd_portrait(common: &CommonArgs, orbits: Option<usize>) -> Result<(), CliError> {
    let cfg = common.resolve(Overrides { orbits, ..Default::default() })?;
    if cfg.orbits == 0 {
        return Err(usage("portrait needs at least one seed orbit (--orbits > 0)"));
    }
    let kicks = cfg.kicks_or(DEFAULT_PORTRAIT_KICKS);
    let points = phase_portrait(&cfg.model, &diagonal_seeds(cfg.orbits), kicks)?;
    with_output(cfg.output.as_deref(), |w| format::write_portrait(w, &points))
}

pub fn cmd_current(common: &CommonArgs, series: SeriesChoice, distribution: Option<&Path>) -> Result<(), CliError> {
    let cfg = common.resolve(Overrides::default())?;
    let kicks = cfg.kicks_or(DEFAULT_KICKS);
    if kicks == 0 {
        return Err(usage("--kicks must be at least 1"));
    }
    let both = series == SeriesChoice::Both;
    if series != SeriesChoice::Classical {
        let grid = quantum_grid(&cfg)?;
        let (s, state) = parallel::quantum_run(&cfg.model, &grid, kicks)?;
        if both {
            write_tagged(cfg.output.as_deref(), "quantum", |w| format::write_series(w, &s))?;
        } else {
            with_output(cfg.output.as_deref(), |w| format::write_series(w, &s))?;
        }
        if let Some(path) = distribution {
            let dist = momentum_distribution(&state);
            with_output(Some(path), |w| format::write_distribution(w, &dist))?;
        }
    } else if distribution.is_some() {
        return Err(usage("--distribution needs the quantum series"));
    }
    if series != SeriesChoice::Quantum {
        let s = parallel::classical_current_series(&cfg.model, cfg.effective_ensemble_size(), kicks)?;
        if both {
            write_tagged(cfg.output.as_deref(), "classical", |w| format::write_series(w, &s))?;
        } else {
            with_output(cfg.output.as_deref(), |w| format::write_series(w, &s))?;
        }
    }
    Ok(())
}

pub fn cmd_sweep(common: &CommonArgs, hbars: Option<Vec<f64>>, fit_min: Option<usize>, fit_max: Option<usize>) -> Result<(), CliError> {
    let cfg = common.resolve(Overrides { hbars, fit_min, fit_max, ..Default::default() })?;
    let mut hbars = cfg.hbars.clone();
    if hbars.is_empty() {
        return Err(usage("no hbar values given (use --hbars or --preset fig3)"));
    }
    hbars.sort_by(f64::total_cmp);
    hbars.dedup();
    let kicks = cfg.kicks_or(DEFAULT_KICKS);
    let policy = GridPolicy { initial_size: cfg.grid_size, max_size: cfg.grid_size.max(GridPolicy::default().max_size) };
    let window = cfg.effective_fit_window();
    let params = cfg.model.without_hbar();
    let result = parallel::hbar_sweep(&params, &policy, &hbars, kicks, window)?;
    with_output(cfg.output.as_deref(), |w| format::write_sweep(w, &result))?;
    let mut guard_failure = None;
    for e in &result.entries {
        if let Err(err) = &e.rate {
            eprintln!("hbar = {}: {err}", e.hbar);
            if err.is_numerical_guard() {
                guard_failure.get_or_insert_with(|| err.clone());
            } else {
                return Err(CliError::Model(err.clone()));
            }
        }
    }
    for (a, b) in result.reversals() {
        eprintln!("current reversal between hbar = {a} and hbar = {b}");
    }
    guard_failure.map_or(Ok(()), |e| Err(CliError::Numerical(e)))
}

pub fn cmd_noise(common: &CommonArgs) -> Result<(), CliError> {
    let cfg = common.resolve(Overrides::default())?;
    let kicks = cfg.kicks_or(DEFAULT_KICKS);
    if kicks == 0 {
        return Err(usage("--kicks must be at least 1"));
    }
    if cfg.realizations == 0 {
        return Err(usage("--realizations must be at least 1"));
    }
    let grid = quantum_grid(&cfg)?;
    let realizations = cfg.effective_realizations();
    let run = |intensity: f64| -> Result<_, CliError> {
        let spec = NoiseSpec::new(cfg.noise_kind, intensity, realizations, cfg.seed)?;
        Ok(parallel::noise_averaged_current(&cfg.model, &grid, &spec, kicks)?)
    };
    match (cfg.noise_intensity, cfg.noise_kind) {
        (_, NoiseKind::None) => {
            let avg = run(0.0)?;
            with_output(cfg.output.as_deref(), |w| format::write_noise_series(w, &avg))
        }
        (Some(intensity), _) => {
            let avg = run(intensity)?;
            with_output(cfg.output.as_deref(), |w| format::write_noise_series(w, &avg))
        }
        (None, kind) => {
            if cfg.ladder.is_empty() {
                return Err(usage("no noise intensity given (use --noise-intensity or --preset fig4a/fig4b)"));
            }
            let letter = if kind == NoiseKind::Amplitude { "A" } else { "B" };
            for &intensity in &cfg.ladder {
                let avg = run(intensity)?;
                let tag = format!("{letter}{}", format::sig(intensity, 6));
                write_tagged(cfg.output.as_deref(), &tag, |w| format::write_noise_series(w, &avg))?;
            }
            Ok(())
        }
    }
}

/// Verdict text for `params`.
pub fn symmetry_verdict(params: &harper_core::ModelParams) -> String {
    if is_ratchet_symmetric(params, SYMMETRY_TOLERANCE) {
        format!("symmetric under {}: currents vanish", describe_reflection(reflection_center(params)))
    } else {
        "asymmetric: ratchet transport allowed".to_string()
    }
}

pub fn cmd_symmetry(common: &CommonArgs) -> Result<(), CliError> {
    let cfg = common.resolve(Overrides::default())?;
    let verdict = symmetry_verdict(&cfg.model);
    with_output(cfg.output.as_deref(), |w| writeln!(w, "{verdict}"))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Portrait { common, orbits } => cmd_portrait(&common, orbits),
        Command::Current { common, series, distribution } => cmd_current(&common, series, distribution.as_deref()),
        Command::Sweep { common, hbars, fit_min, fit_max } => cmd_sweep(&common, hbars, fit_min, fit_max),
        Command::Noise { common } => cmd_noise(&common),
        Command::Symmetry { common } => cmd_symmetry(&common),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert_eq!(symmetry_verdict(&Preset::Fig1a.model()), "asymmetric: ratchet transport allowed");
        assert_eq!(symmetry_verdict(&Preset::Fig1d.model()), "symmetric under q→π−q, p→−p: currents vanish");
        assert_eq!(symmetry_verdict(&harper_core::ModelParams::harper(1.0, 1.0)), "symmetric under q→−q, p→−p: currents vanish");
    }

    #[test]
    fn suffixes() {
        assert_eq!(suffixed(Path::new("out/run.csv"), "quantum"), PathBuf::from("out/run_quantum.csv"));
        assert_eq!(suffixed(Path::new("run"), "A0.1"), PathBuf::from("run_A0.1"));
    }

    #[test]
    fn parses_paper_style_flags() {
        let cli = Cli::try_parse_from(["harper", "current", "--K", "3", "--L", "1.5", "--eta", "1", "--kicks", "10", "--series", "quantum"]).unwrap();
        let Command::Current { common, series, .. } = cli.command else { panic!() };
        assert_eq!(series, SeriesChoice::Quantum);
        let cfg = common.resolve(Overrides::default()).unwrap();
        assert_eq!(cfg.model.kick_strength, 3.0);
        assert_eq!(cfg.kicks, Some(10));
    }
}
