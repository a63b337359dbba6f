//! Command-line front end for `torusnoise`: resolves experiment configs,
//! runs jobs and writes CSV/JSON artifacts plus a run manifest.

pub mod config;
pub mod jobs;
pub mod output;
pub mod presets;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use config::Params;
use jobs::Job;
use output::ArtifactSink;
use presets::Preset;

pub const OUT_ENV: &str = "TORUSNOISE_OUT";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Library(#[from] torusnoise::Error),
    #[error("{0}")]
    Numerical(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for configuration problems, 3 for numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Library(e) if e.is_numerical() => 3,
            CliError::Library(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "config",
            3 => "numerical",
            _ => "io",
        }
    }

    /// Machine-readable record printed on stderr.
    pub fn to_json(&self) -> Value {
        json!({ "error": { "kind": self.kind(), "code": self.exit_code(), "message": self.to_string() } })
    }
}

#[derive(Debug, Parser)]
#[command(name = "torusnoise", version, about = "Noise channels and quantized torus maps")]
pub struct Cli {
    /// Plain-text `key = value` file; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory (overrides $TORUSNOISE_OUT and the config file).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum of a noise channel superoperator.
    ChannelSpectrum(ChannelSpectrumArgs),
    /// Spectrum of a channel composed with a map.
    MapSpectrum(MapSpectrumArgs),
    /// Iterate a noisy map from an initial state.
    Evolve(EvolveArgs),
    /// Success probability of a (noisy) Grover search.
    Grover(GroverArgs),
    /// Entropy series for every map and channel combination.
    EntropySweep(EntropySweepArgs),
    /// Certify a qubit circuit against its analytic channel.
    CircuitVerify(CircuitVerifyArgs),
    /// Run a named figure-data parameter set (fig5, fig6, fig8, fig9-11).
    Preset(PresetArgs),
}

#[derive(Debug, Args)]
pub struct ChannelSpectrumArgs {
    /// dc, pdc, pdc-line:n1,n2,n3, pdc-rand[:SEED] or adc
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    n: Option<String>,
    /// Noise probability, or the Gaussian width for adc.
    #[arg(long)]
    eps: Option<String>,
    /// Eigenvalue clustering radius.
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Debug, Args)]
pub struct MapSpectrumArgs {
    /// none, baker, grover:w1[,w2..], cat:a,b, cat-hyp, cat-ell or cat-par
    #[arg(long)]
    map: Option<String>,
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long)]
    map: Option<String>,
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    /// position:n, momentum:k, coherent:q,p or cat:q1,p1,q2,p2
    #[arg(long)]
    init: Option<String>,
    /// Write a Wigner frame every this many iterations (0 disables).
    #[arg(long)]
    wigner_stride: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Debug, Args)]
pub struct GroverArgs {
    /// Comma-separated marked items.
    #[arg(long)]
    marked: Option<String>,
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Debug, Args)]
pub struct EntropySweepArgs {
    /// Semicolon-separated map descriptors.
    #[arg(long)]
    maps: Option<String>,
    /// Semicolon-separated channel descriptors.
    #[arg(long)]
    channels: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    steps: Option<String>,
    #[arg(long)]
    init: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Debug, Args)]
pub struct CircuitVerifyArgs {
    /// dc, pdc or adc
    #[arg(long)]
    which: Option<String>,
    #[arg(long)]
    qubits: Option<String>,
    /// Ignored for adc, whose rotation angles come from the seed.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Debug, Args)]
pub struct PresetArgs {
    /// fig5, fig6, fig8 or fig9-11
    name: String,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::ChannelSpectrum(_) => "channel-spectrum",
            Command::MapSpectrum(_) => "map-spectrum",
            Command::Evolve(_) => "evolve",
            Command::Grover(_) => "grover",
            Command::EntropySweep(_) => "entropy-sweep",
            Command::CircuitVerify(_) => "circuit-verify",
            Command::Preset(_) => "preset",
        }
    }

    fn flags(&self) -> Vec<(&'static str, Option<String>)> {
        match self {
            Command::ChannelSpectrum(a) => vec![
                ("channel", a.channel.clone()),
                ("n", a.n.clone()),
                ("eps", a.eps.clone()),
                ("tol", a.tol.clone()),
                ("seed", a.seed.clone()),
            ],
            Command::MapSpectrum(a) => vec![
                ("map", a.map.clone()),
                ("channel", a.channel.clone()),
                ("n", a.n.clone()),
                ("eps", a.eps.clone()),
                ("tol", a.tol.clone()),
                ("seed", a.seed.clone()),
            ],
            Command::Evolve(a) => vec![
                ("map", a.map.clone()),
                ("channel", a.channel.clone()),
                ("n", a.n.clone()),
                ("eps", a.eps.clone()),
                ("steps", a.steps.clone()),
                ("init", a.init.clone()),
                ("wigner-stride", a.wigner_stride.clone()),
                ("seed", a.seed.clone()),
            ],
            Command::Grover(a) => vec![
                ("marked", a.marked.clone()),
                ("channel", a.channel.clone()),
                ("n", a.n.clone()),
                ("eps", a.eps.clone()),
                ("steps", a.steps.clone()),
                ("seed", a.seed.clone()),
            ],
            Command::EntropySweep(a) => vec![
                ("maps", a.maps.clone()),
                ("channels", a.channels.clone()),
                ("n", a.n.clone()),
                ("eps", a.eps.clone()),
                ("steps", a.steps.clone()),
                ("init", a.init.clone()),
                ("seed", a.seed.clone()),
            ],
            Command::CircuitVerify(a) => vec![
                ("which", a.which.clone()),
                ("qubits", a.qubits.clone()),
                ("eps", a.eps.clone()),
                ("seed", a.seed.clone()),
            ],
            Command::Preset(a) => vec![("n", a.n.clone()), ("seed", a.seed.clone())],
        }
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub params: Params,
    pub output_dir: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub config: ResolvedConfig,
    /// Paths relative to the output directory, in write order.
    pub artifacts: Vec<PathBuf>,
    pub summary: Value,
    pub wall_clock_seconds: f64,
    pub version: String,
}

/// Parses arguments, resolves the config and runs it. `env_out` is the
/// value of the output-directory environment variable, if set.
pub fn run_from_args<I, T>(args: I, env_out: Option<PathBuf>) -> Result<RunManifest, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Config(e.to_string()))?;
    run(cli, env_out)
}

pub fn run(cli: Cli, env_out: Option<PathBuf>) -> Result<RunManifest, CliError> {
    let file = match &cli.config {
        Some(path) => config::read_config_file(path)?,
        None => Params::new(),
    };
    let out = config::resolve_out(cli.out.clone(), env_out, &file);
    let command = cli.command.name();
    let params = config::resolve(command, jobs::defaults(command), &file, &cli.command.flags())?;
    let (preset, jobs) = match &cli.command {
        Command::Preset(a) => {
            let preset: Preset = a.name.parse()?;
            let dim = torusnoise::Dimension::new(config::get(&params, "n")?)?;
            let jobs = preset.jobs(dim, config::get(&params, "seed")?);
            presets::validate(&jobs)?;
            (Some(a.name.clone()), jobs)
        }
        _ => (None, vec![(String::new(), Job::from_params(command, &params)?)]),
    };

    let started = Instant::now();
    let mut sink = ArtifactSink::new(&out)?;
    let summary = run_jobs(&jobs, &out, &mut sink)?;
    let manifest = RunManifest {
        config: ResolvedConfig {
            command: command.to_string(),
            preset,
            params,
            output_dir: out.clone(),
        },
        artifacts: sink.into_artifacts(),
        summary,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    output::write_json(&out.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

/// Single jobs write straight into `out`; preset jobs each get a
/// subdirectory and run concurrently.
fn run_jobs(jobs: &[(String, Job)], out: &Path, sink: &mut ArtifactSink) -> Result<Value, CliError> {
    if let [(name, job)] = jobs {
        if name.is_empty() {
            return job.run(sink);
        }
    }
    let results: Vec<(Vec<PathBuf>, Value)> = jobs
        .par_iter()
        .map(|(name, job)| {
            let mut sub = ArtifactSink::new(&out.join(name))?;
            let summary = job.run(&mut sub)?;
            let files = sub.into_artifacts().into_iter().map(|p| Path::new(name).join(p)).collect();
            Ok((files, summary))
        })
        .collect::<Result<_, CliError>>()?;
    let mut summary = serde_json::Map::new();
    for ((name, _), (files, s)) in jobs.iter().zip(results) {
        for f in files {
            sink.record(f);
        }
        summary.insert(name.clone(), s);
    }
    Ok(Value::Object(summary))
}
