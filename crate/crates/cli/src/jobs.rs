//! Typed jobs built from resolved parameters, and their execution.

use rayon::prelude::*;
use serde_json::{json, Value};
use torusnoise::{
    composed_matrix, entropy_series, evolve, grover_geometry, grover_success_series, spectrum,
    to_matrix, verify_circuit, wigner_series, ChannelSpec, CircuitKind, Dimension,
    EvolutionConfig, GroverInstance, InitialState, MapSpec, SpectrumReport,
};

use crate::config::{get, get_list, Params};
use crate::output::{self, ArtifactSink};
use crate::CliError;

/// Default parameters per command. These also define the accepted keys.
pub fn defaults(command: &str) -> &'static [(&'static str, &'static str)] {
    match command {
        "channel-spectrum" => &[("channel", "dc"), ("n", "32"), ("eps", "0.4"), ("tol", "1e-6"), ("seed", "0")],
        "map-spectrum" => &[
            ("map", "cat-hyp"),
            ("channel", "none"),
            ("n", "32"),
            ("eps", "0.4"),
            ("tol", "1e-6"),
            ("seed", "0"),
        ],
        "evolve" => &[
            ("map", "none"),
            ("channel", "dc"),
            ("n", "32"),
            ("eps", "0.2"),
            ("steps", "20"),
            ("init", "coherent:0.25,0.25"),
            ("wigner-stride", "0"),
            ("seed", "0"),
        ],
        "grover" => &[
            ("marked", "30"),
            ("channel", "none"),
            ("n", "32"),
            ("eps", "0.3"),
            ("steps", "8"),
            ("seed", "0"),
        ],
        "entropy-sweep" => &[
            ("maps", "baker;cat-hyp;cat-ell;cat-par"),
            ("channels", "dc"),
            ("n", "32"),
            ("eps", "0.2"),
            ("steps", "60"),
            ("init", "coherent:0.25,0.25"),
            ("seed", "0"),
        ],
        "circuit-verify" => &[("which", "pdc"), ("qubits", "2"), ("eps", "0.3"), ("seed", "0")],
        "preset" => &[("n", "32"), ("seed", "0")],
        _ => &[],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    ChannelSpectrum {
        channel: ChannelSpec,
        dim: Dimension,
        eps: f64,
        tol: f64,
    },
    MapSpectrum {
        map: MapSpec,
        channel: ChannelSpec,
        dim: Dimension,
        eps: f64,
        tol: f64,
    },
    Evolve {
        config: EvolutionConfig,
        wigner_stride: usize,
    },
    Grover {
        marked: Vec<usize>,
        channel: ChannelSpec,
        dim: Dimension,
        eps: f64,
        steps: usize,
    },
    EntropySweep {
        maps: Vec<MapSpec>,
        channels: Vec<ChannelSpec>,
        dim: Dimension,
        eps: f64,
        steps: usize,
        initial: InitialState,
    },
    CircuitVerify {
        which: CircuitKind,
        qubits: usize,
        eps: f64,
        seed: u64,
    },
}

fn dimension(params: &Params) -> Result<Dimension, CliError> {
    Dimension::new(get(params, "n")?).map_err(CliError::from)
}

/// Bare `pdc-rand` takes its seed from the `seed` key.
fn channel(params: &Params, key: &str) -> Result<ChannelSpec, CliError> {
    let raw = params[key].trim();
    if raw == "pdc-rand" {
        return Ok(ChannelSpec::PdcRand(get(params, "seed")?));
    }
    get(params, key)
}

fn channels(params: &Params, key: &str) -> Result<Vec<ChannelSpec>, CliError> {
    let seed: u64 = get(params, "seed")?;
    let raw: Vec<String> = get_list(params, key)?;
    raw.iter()
        .map(|s| match s.as_str() {
            "pdc-rand" => Ok(ChannelSpec::PdcRand(seed)),
            s => s.parse().map_err(CliError::from),
        })
        .collect()
}

impl Job {
    pub fn from_params(command: &str, params: &Params) -> Result<Job, CliError> {
        Ok(match command {
            "channel-spectrum" => Job::ChannelSpectrum {
                channel: channel(params, "channel")?,
                dim: dimension(params)?,
                eps: get(params, "eps")?,
                tol: get(params, "tol")?,
            },
            "map-spectrum" => Job::MapSpectrum {
                map: get(params, "map")?,
                channel: channel(params, "channel")?,
                dim: dimension(params)?,
                eps: get(params, "eps")?,
                tol: get(params, "tol")?,
            },
            "evolve" => Job::Evolve {
                config: EvolutionConfig {
                    map: get(params, "map")?,
                    channel: channel(params, "channel")?,
                    dim: dimension(params)?,
                    eps: get(params, "eps")?,
                    steps: get(params, "steps")?,
                    initial: get(params, "init")?,
                },
                wigner_stride: get(params, "wigner-stride")?,
            },
            "grover" => Job::Grover {
                marked: params["marked"]
                    .split(',')
                    .map(|w| {
                        w.trim()
                            .parse()
                            .map_err(|e| CliError::Config(format!("invalid marked item {w:?}: {e}")))
                    })
                    .collect::<Result<_, _>>()?,
                channel: channel(params, "channel")?,
                dim: dimension(params)?,
                eps: get(params, "eps")?,
                steps: get(params, "steps")?,
            },
            "entropy-sweep" => Job::EntropySweep {
                maps: get_list(params, "maps")?,
                channels: channels(params, "channels")?,
                dim: dimension(params)?,
                eps: get(params, "eps")?,
                steps: get(params, "steps")?,
                initial: get(params, "init")?,
            },
            "circuit-verify" => Job::CircuitVerify {
                which: get(params, "which")?,
                qubits: get(params, "qubits")?,
                eps: get(params, "eps")?,
                seed: get(params, "seed")?,
            },
            other => return Err(CliError::Config(format!("unknown command {other:?}"))),
        })
    }

    /// Writes this job's artifacts into `sink` and returns a short summary.
    pub fn run(&self, sink: &mut ArtifactSink) -> Result<Value, CliError> {
        match self {
            Job::ChannelSpectrum { channel, dim, eps, tol } => {
                let ch = channel.build(*dim, *eps)?;
                let cptp = ch.validate_cptp()?;
                if !cptp.pass {
                    return Err(CliError::Numerical(format!("{channel} failed the CPTP check: {cptp:?}")));
                }
                let report = spectrum(&to_matrix(&ch), *tol)?;
                write_spectrum(sink, &report)?;
                Ok(json!({ "spectrum": spectrum_summary(&report), "cptp": cptp }))
            }
            Job::MapSpectrum { map, channel, dim, eps, tol } => {
                let ch = channel.build(*dim, *eps)?;
                let u = map.build(*dim)?;
                let report = spectrum(&composed_matrix(&ch, &u)?, *tol)?;
                write_spectrum(sink, &report)?;
                Ok(json!({ "spectrum": spectrum_summary(&report) }))
            }
            Job::Evolve { config, wigner_stride } => {
                let traj = evolve(config)?;
                let entropy = entropy_series(&traj);
                sink.text("entropy.csv", &output::series_csv(&entropy))?;
                let mut frames = Vec::new();
                if *wigner_stride > 0 {
                    for (i, grid) in wigner_series(&traj, *wigner_stride)?.iter().enumerate() {
                        let file = format!("wigner/frame_{i:04}.csv");
                        sink.text(&file, &output::wigner_csv(grid))?;
                        frames.push(json!({
                            "frame": i,
                            "iteration": i * wigner_stride,
                            "file": file,
                            "side": grid.side(),
                            "normalization": grid.normalization(),
                        }));
                    }
                    sink.json("wigner/frames.json", &json!({ "config": config, "frames": frames }))?;
                }
                Ok(json!({
                    "final_entropy": entropy.last(),
                    "wigner_frames": frames.len(),
                }))
            }
            Job::Grover { marked, channel, dim, eps, steps } => {
                let inst = GroverInstance::new(*dim, marked.iter().copied())?;
                let config = EvolutionConfig {
                    map: MapSpec::Grover(inst.marked().to_vec()),
                    channel: *channel,
                    dim: *dim,
                    eps: *eps,
                    steps: *steps,
                    initial: InitialState::Momentum(0),
                };
                let p = grover_success_series(&evolve(&config)?, inst.marked())?;
                sink.text("success.csv", &output::series_csv(&p))?;
                let best = (0..p.len()).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap_or(0);
                Ok(json!({
                    "peak_iteration": best,
                    "peak_probability": p[best],
                    "geometry": grover_geometry(&inst),
                }))
            }
            Job::EntropySweep { maps, channels, dim, eps, steps, initial } => {
                let pairs: Vec<(&MapSpec, &ChannelSpec)> =
                    maps.iter().flat_map(|m| channels.iter().map(move |c| (m, c))).collect();
                let series: Vec<Vec<f64>> = pairs
                    .par_iter()
                    .map(|(map, channel)| {
                        let config = EvolutionConfig {
                            map: (*map).clone(),
                            channel: **channel,
                            dim: *dim,
                            eps: *eps,
                            steps: *steps,
                            initial: *initial,
                        };
                        evolve(&config).map(|t| entropy_series(&t))
                    })
                    .collect::<Result<_, _>>()?;
                let mut finals = serde_json::Map::new();
                for ((map, channel), s) in pairs.iter().zip(&series) {
                    let name = format!("entropy_{}__{}", sweep_slug(map), channel.slug());
                    sink.text(format!("{name}.csv"), &output::series_csv(s))?;
                    finals.insert(name, json!(s.last()));
                }
                Ok(json!({ "final_entropy": finals }))
            }
            Job::CircuitVerify { which, qubits, eps, seed } => {
                let report = verify_circuit(*which, *qubits, *eps, *seed)?;
                sink.json("report.json", &report)?;
                let value = serde_json::to_value(&report).expect("serializable");
                if !report.pass {
                    return Err(CliError::Numerical(format!("circuit certification failed: {value}")));
                }
                Ok(value)
            }
        }
    }
}

/// Grover slugs carry their marked items so sweeps over several stay distinct.
fn sweep_slug(map: &MapSpec) -> String {
    match map {
        MapSpec::Grover(ws) => {
            let ws: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
            format!("grover_{}", ws.join("_"))
        }
        m => m.slug(),
    }
}

fn write_spectrum(sink: &mut ArtifactSink, report: &SpectrumReport) -> Result<(), CliError> {
    sink.text("spectrum.csv", &output::spectrum_csv(report))?;
    sink.text("clusters.csv", &output::clusters_csv(report))
}

fn spectrum_summary(report: &SpectrumReport) -> Value {
    let mut largest: Vec<(usize, usize)> =
        report.clusters.iter().enumerate().map(|(i, c)| (c.multiplicity, i)).collect();
    largest.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let top: Vec<Value> = largest
        .iter()
        .take(8)
        .map(|&(m, i)| {
            let z = report.clusters[i].representative;
            json!({ "re": z.re, "im": z.im, "multiplicity": m })
        })
        .collect();
    json!({
        "eigenvalues": report.eigenvalues.len(),
        "clusters": report.clusters.len(),
        "spectral_radius": report.spectral_radius(),
        "tol": report.tol,
        "largest_clusters": top,
    })
}
