//! Iterated noisy evolution `ρ_{t+1} = $(U ρ_t U†)` and the series derived
//! from it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channels::{ChannelSpec, KrausChannel};
use crate::error::{Error, Result};
use crate::hilbert::{
    cat_state, coherent_state, momentum_state, position_state, DensityMatrix, Dimension,
    PhasePoint, StateVector,
};
use crate::linalg::{self, C64};
use crate::maps::{MapSpec, UnitaryOperator};
use crate::phase_space::{wigner_function, WignerGrid};
use crate::superop::{composed_matrix, SuperoperatorMatrix};

/// Initial pure state of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InitialState {
    Position(usize),
    Momentum(usize),
    Coherent(PhasePoint),
    Cat(PhasePoint, PhasePoint),
}

impl InitialState {
    pub fn build(&self, dim: Dimension) -> Result<StateVector> {
        match self {
            InitialState::Position(n) => position_state(*n, dim),
            InitialState::Momentum(k) => momentum_state(*k, dim),
            InitialState::Coherent(c) => Ok(coherent_state(*c, dim)),
            InitialState::Cat(a, b) => cat_state(*a, *b, dim),
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::Position(n) => write!(f, "position:{n}"),
            InitialState::Momentum(k) => write!(f, "momentum:{k}"),
            InitialState::Coherent(c) => write!(f, "coherent:{},{}", c.q(), c.p()),
            InitialState::Cat(a, b) => write!(f, "cat:{},{},{},{}", a.q(), a.p(), b.q(), b.p()),
        }
    }
}

impl FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, args) = s
            .split_once(':')
            .ok_or_else(|| Error::parse("initial state", s, "expected kind:args"))?;
        let floats = || -> Result<Vec<f64>> {
            args.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::parse("initial state", s, e.to_string()))
                })
                .collect()
        };
        let index = || {
            args.trim()
                .parse::<usize>()
                .map_err(|e| Error::parse("initial state", s, e.to_string()))
        };
        match kind {
            "position" => Ok(InitialState::Position(index()?)),
            "momentum" => Ok(InitialState::Momentum(index()?)),
            "coherent" => match floats()?.as_slice() {
                [q, p] => Ok(InitialState::Coherent(PhasePoint::new(*q, *p))),
                _ => Err(Error::parse("initial state", s, "expected coherent:q,p")),
            },
            "cat" => match floats()?.as_slice() {
                [q1, p1, q2, p2] => Ok(InitialState::Cat(
                    PhasePoint::new(*q1, *p1),
                    PhasePoint::new(*q2, *p2),
                )),
                _ => Err(Error::parse("initial state", s, "expected cat:q1,p1,q2,p2")),
            },
            _ => Err(Error::parse(
                "initial state",
                s,
                "expected position:n, momentum:k, coherent:q,p or cat:q1,p1,q2,p2",
            )),
        }
    }
}

/// Everything needed to reproduce one trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub map: MapSpec,
    pub channel: ChannelSpec,
    pub dim: Dimension,
    /// Noise probability, or the Gaussian width for `adc`.
    pub eps: f64,
    pub steps: usize,
    pub initial: InitialState,
}

/// States `ρ_0 … ρ_steps`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory holds the initial state")
    }
}

/// Superoperator of one full step `$ ∘ U`.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    step: SuperoperatorMatrix,
}

impl Propagator {
    pub fn new(channel: &KrausChannel, u: &UnitaryOperator) -> Result<Self> {
        Ok(Propagator {
            step: composed_matrix(channel, u)?,
        })
    }

    pub fn from_config(config: &EvolutionConfig) -> Result<Self> {
        let u = config.map.build(config.dim)?;
        let channel = config.channel.build(config.dim, config.eps)?;
        Propagator::new(&channel, &u)
    }

    pub fn from_matrix(step: SuperoperatorMatrix) -> Self {
        Propagator { step }
    }

    pub fn matrix(&self) -> &SuperoperatorMatrix {
        &self.step
    }

    pub fn dim(&self) -> Dimension {
        self.step.dim()
    }

    pub fn advance(&self, v: &[C64]) -> Vec<C64> {
        self.step.apply_vec(v)
    }

    /// `vec(ρ_k)` from `vec(ρ_0)` using `O(log k)` matrix products.
    pub fn state_at(&self, v0: &[C64], mut k: u64) -> Vec<C64> {
        let mut v = v0.to_vec();
        let mut base = self.step.clone();
        while k > 0 {
            if k & 1 == 1 {
                v = base.apply_vec(&v);
            }
            k >>= 1;
            if k > 0 {
                base = base.after(&base).expect("same dimension");
            }
        }
        v
    }

    /// Smallest `k` with `S(ρ_k) > threshold`, searching `k < 2^max_doublings`.
    ///
    /// Uses binary lifting over the powers `S^{2^j}` and therefore assumes the
    /// entropy is nondecreasing along the trajectory, which holds for unital
    /// channels composed with unitaries.
    pub fn first_entropy_exceeding(
        &self,
        v0: &[C64],
        threshold: f64,
        max_doublings: u32,
    ) -> Option<u64> {
        if vec_entropy(v0) > threshold {
            return Some(0);
        }
        let mut powers = vec![self.step.clone()];
        loop {
            let top = powers.last().expect("nonempty");
            if vec_entropy(&top.apply_vec(v0)) > threshold {
                break;
            }
            if powers.len() as u32 > max_doublings {
                return None;
            }
            let next = top.after(top).expect("same dimension");
            powers.push(next);
        }
        // invariant: S(ρ_k) ≤ threshold and S(ρ_{k + 2^(j+1)}) > threshold
        let mut k = 0u64;
        let mut v = v0.to_vec();
        for j in (0..powers.len() - 1).rev() {
            let candidate = powers[j].apply_vec(&v);
            if vec_entropy(&candidate) <= threshold {
                v = candidate;
                k += 1 << j;
            }
        }
        Some(k + 1)
    }
}

/// `−ln Σ |v_i|²`, the linear entropy of a vectorized Hermitian operator.
pub fn vec_entropy(v: &[C64]) -> f64 {
    -v.iter().map(|z| z.norm_sqr()).sum::<f64>().ln()
}

fn to_density(v: &[C64], n: usize) -> DensityMatrix {
    DensityMatrix::from_trusted(linalg::unvec_row_major(v, n))
}

/// Iterates `$ ∘ U` from the configured initial state.
pub fn evolve(config: &EvolutionConfig) -> Result<Trajectory> {
    let prop = Propagator::from_config(config)?;
    let psi = config.initial.build(config.dim)?;
    Ok(evolve_with(&prop, &psi.projector(), config.steps))
}

pub fn evolve_with(prop: &Propagator, rho0: &DensityMatrix, steps: usize) -> Trajectory {
    let n = prop.dim().get();
    let mut v = linalg::vec_row_major(rho0.matrix());
    let mut states = Vec::with_capacity(steps + 1);
    states.push(rho0.clone());
    for _ in 0..steps {
        v = prop.advance(&v);
        states.push(to_density(&v, n));
    }
    Trajectory { states }
}

pub fn entropy_series(traj: &Trajectory) -> Vec<f64> {
    traj.states.iter().map(crate::hilbert::linear_entropy).collect()
}

/// `p_s(k) = Σ_w ⟨w|ρ_k|w⟩`.
pub fn grover_success_series(traj: &Trajectory, marked: &[usize]) -> Result<Vec<f64>> {
    let n = traj.states[0].dim().get();
    if let Some(&w) = marked.iter().find(|&&w| w >= n) {
        return Err(Error::IndexOutOfRange { index: w, dim: n });
    }
    Ok(traj
        .states
        .iter()
        .map(|rho| marked.iter().map(|&w| rho.get(w, w).re).sum())
        .collect())
}

/// Wigner grids of states `0, stride, 2·stride, …`.
pub fn wigner_series(traj: &Trajectory, stride: usize) -> Result<Vec<WignerGrid>> {
    if stride == 0 {
        return Err(Error::InvalidState("stride must be at least 1".into()));
    }
    Ok(traj.states.iter().step_by(stride).map(wigner_function).collect())
}

/// Linear entropy after `k` steps of depolarizing noise composed with any
/// unitary, starting from a pure state:
/// `−ln[f² + (2f(1−f) + (1−f)²)/N]` with `f = (1−ε)^k`.
pub fn dc_entropy_closed_form(dim: Dimension, eps: f64, k: usize) -> f64 {
    let n = dim.get() as f64;
    let f = (1.0 - eps).powi(k as i32);
    -(f * f + (2.0 * f * (1.0 - f) + (1.0 - f) * (1.0 - f)) / n).ln()
}
