//! Figure-data presets. Each expands to named jobs at the captioned
//! parameters; `n` and `seed` may be overridden.

use std::str::FromStr;

use torusnoise::{ChannelSpec, Dimension, EvolutionConfig, InitialState, LineSpec, MapSpec, PhasePoint};

use crate::jobs::Job;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Channel spectra at ε = 0.4.
    Fig5,
    /// Entropy growth under dc, pdc and adc for the four torus maps.
    Fig6,
    /// Entropy growth under line dephasing.
    Fig8,
    /// Noisy Grover success probabilities and spectra at ε = 0.3.
    Fig9To11,
}

impl FromStr for Preset {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "fig5" => Ok(Preset::Fig5),
            "fig6" => Ok(Preset::Fig6),
            "fig8" => Ok(Preset::Fig8),
            "fig9-11" => Ok(Preset::Fig9To11),
            other => Err(CliError::Config(format!(
                "unknown preset {other:?} (known: fig5, fig6, fig8, fig9-11)"
            ))),
        }
    }
}

const TORUS_MAPS: [&str; 4] = ["baker", "cat-hyp", "cat-ell", "cat-par"];

fn line(n1: i64, n2: i64, n3: i64) -> ChannelSpec {
    ChannelSpec::PdcLine(LineSpec::new(n1, n2, n3))
}

fn parse<T: FromStr<Err = torusnoise::Error>>(s: &str) -> T {
    s.parse().expect("preset descriptors are valid")
}

impl Preset {
    pub fn jobs(self, dim: Dimension, seed: u64) -> Vec<(String, Job)> {
        let n = dim.get();
        let coherent = InitialState::Coherent(PhasePoint::new(0.25, 0.25));
        let sweep = |maps: &[&str], channels: Vec<ChannelSpec>, eps, steps, initial| Job::EntropySweep {
            maps: maps.iter().map(|m| parse(m)).collect(),
            channels,
            dim,
            eps,
            steps,
            initial,
        };
        match self {
            Preset::Fig5 => [
                ChannelSpec::Dc,
                ChannelSpec::Pdc,
                ChannelSpec::PdcRand(seed),
                line(1, 0, 2),
                ChannelSpec::Adc,
            ]
            .into_iter()
            .map(|channel| {
                let name = channel.slug();
                (name, Job::ChannelSpectrum { channel, dim, eps: 0.4, tol: 1e-6 })
            })
            .collect(),
            Preset::Fig6 => [ChannelSpec::Dc, ChannelSpec::Pdc, ChannelSpec::Adc]
                .into_iter()
                .map(|c| (c.slug(), sweep(&TORUS_MAPS, vec![c], 0.2, 60, coherent)))
                .collect(),
            Preset::Fig8 => {
                let momentum = InitialState::Momentum((n as f64 * 0.25).round() as usize % n);
                vec![
                    (
                        "baker".into(),
                        sweep(
                            &["baker"],
                            vec![line(1, 1, 0), line(1, -1, 0), line(1, 0, 0), line(0, 1, 0)],
                            0.2,
                            20,
                            momentum,
                        ),
                    ),
                    (
                        "cat-hyp".into(),
                        sweep(&["cat-hyp"], vec![line(100, 173, 0), line(100, -173, 0)], 0.2, 30, coherent),
                    ),
                    (
                        "cat-par".into(),
                        sweep(&["cat-par"], vec![line(1, 1, 0), line(1, -1, 0)], 0.2, 200, coherent),
                    ),
                ]
            }
            Preset::Fig9To11 => {
                let marked = vec![30.min(n - 1)];
                let noisy = [ChannelSpec::Dc, ChannelSpec::Pdc, ChannelSpec::Adc];
                let mut jobs: Vec<(String, Job)> = std::iter::once(ChannelSpec::None)
                    .chain(noisy)
                    .map(|channel| {
                        (
                            format!("success_{}", channel.slug()),
                            Job::Grover { marked: marked.clone(), channel, dim, eps: 0.3, steps: 8 },
                        )
                    })
                    .collect();
                jobs.extend(noisy.into_iter().map(|channel| {
                    (
                        format!("spectrum_{}", channel.slug()),
                        Job::MapSpectrum { map: MapSpec::Grover(marked.clone()), channel, dim, eps: 0.3, tol: 1e-6 },
                    )
                }));
                jobs
            }
        }
    }
}

/// Checks that every job in a preset is well formed at this size.
pub fn validate(jobs: &[(String, Job)]) -> Result<(), CliError> {
    for (_, job) in jobs {
        match job {
            Job::EntropySweep { maps, dim, .. } => {
                for m in maps {
                    m.build(*dim)?;
                }
            }
            Job::Evolve { config: EvolutionConfig { map, dim, .. }, .. } => {
                map.build(*dim)?;
            }
            _ => {}
        }
    }
    Ok(())
}
