//! Qubit-circuit realizations of the noise channels and the channels they
//! induce on the principal register.
//!
//! Wires are numbered principal `0..n`, environment `n..n+n_env`, then the
//! ancilla. Wire 0 is the most significant bit of a basis index.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{
    depolarizing, phase_damping, ChannelLabel, CptpReport, DephasingCoefficients, KrausChannel,
    NoiseStrength,
};
use crate::error::{Error, Result};
use crate::hilbert::Dimension;
use crate::linalg::{self, CMat, C64, ONE, ZERO};
use crate::random::rng_from_seed;
use crate::superop::{to_matrix, SuperoperatorMatrix};

/// Largest register simulated by [`induced_channel`].
pub const MAX_CIRCUIT_QUBITS: usize = 12;

const CIRCUIT_TOL: f64 = 1e-10;
const PROBABILITY_TOL: f64 = 1e-12;

/// `R_y(θ) = [[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "kebab-case")]
pub enum Gate {
    Ry { target: usize, theta: f64 },
    ControlledRy { control: usize, target: usize, theta: f64 },
    Cnot { control: usize, target: usize },
    /// Swaps every wire pair when `control` is set.
    ControlledSwap { control: usize, pairs: Vec<(usize, usize)> },
    Not { target: usize },
}

impl Gate {
    fn wires(&self) -> Vec<usize> {
        match self {
            Gate::Ry { target, .. } | Gate::Not { target } => vec![*target],
            Gate::ControlledRy { control, target, .. } | Gate::Cnot { control, target } => {
                vec![*control, *target]
            }
            Gate::ControlledSwap { control, pairs } => std::iter::once(*control)
                .chain(pairs.iter().flat_map(|&(a, b)| [a, b]))
                .collect(),
        }
    }

    fn angle(&self) -> Option<f64> {
        match self {
            Gate::Ry { theta, .. } | Gate::ControlledRy { theta, .. } => Some(*theta),
            _ => None,
        }
    }
}

/// Mixture `Σ_r w_r |e_r⟩⟨e_r|` over the environment and ancilla wires.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvState {
    qubits: usize,
    components: Vec<(f64, Vec<C64>)>,
}

impl EnvState {
    pub fn mixture(qubits: usize, components: Vec<(f64, Vec<C64>)>) -> Result<Self> {
        let len = 1usize << qubits;
        let mut total = 0.0;
        for (w, amps) in &components {
            if amps.len() != len {
                return Err(Error::DimensionMismatch {
                    expected: len,
                    found: amps.len(),
                });
            }
            let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            if w.is_nan() || *w < 0.0 || (norm - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidState("environment component".into()));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("environment weights sum to {total}")));
        }
        Ok(EnvState { qubits, components })
    }

    /// `|0…0⟩`.
    pub fn ground(qubits: usize) -> Self {
        EnvState {
            qubits,
            components: vec![(1.0, basis_vector(1 << qubits, 0))],
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn components(&self) -> &[(f64, Vec<C64>)] {
        &self.components
    }

    pub fn density(&self) -> CMat {
        let len = 1usize << self.qubits;
        let mut rho = linalg::zeros(len, len);
        for (w, a) in &self.components {
            for i in 0..len {
                for j in 0..len {
                    rho[(i, j)] += a[i] * a[j].conj() * *w;
                }
            }
        }
        rho
    }
}

fn basis_vector(len: usize, index: usize) -> Vec<C64> {
    let mut v = vec![ZERO; len];
    v[index] = ONE;
    v
}

/// Gates on principal, environment and optional ancilla wires.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitCircuit {
    n_principal: usize,
    n_env: usize,
    n_ancilla: usize,
    gates: Vec<Gate>,
    env_init: EnvState,
    measure_env: bool,
}

impl QubitCircuit {
    /// Empty circuit with the environment and ancilla in `|0…0⟩`.
    pub fn new(n_principal: usize, n_env: usize, n_ancilla: usize) -> Result<Self> {
        if n_principal == 0 {
            return Err(Error::InvalidCircuit("no principal qubits".into()));
        }
        if n_ancilla > 1 {
            return Err(Error::InvalidCircuit("at most one ancilla".into()));
        }
        let total = n_principal + n_env + n_ancilla;
        if total > MAX_CIRCUIT_QUBITS {
            return Err(Error::CircuitTooLarge(total));
        }
        Ok(QubitCircuit {
            n_principal,
            n_env,
            n_ancilla,
            gates: Vec::new(),
            env_init: EnvState::ground(n_env + n_ancilla),
            measure_env: false,
        })
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let total = self.total_qubits();
        let wires = gate.wires();
        for (i, &w) in wires.iter().enumerate() {
            if w >= total {
                return Err(Error::InvalidCircuit(format!("wire {w} out of range")));
            }
            if wires[..i].contains(&w) {
                return Err(Error::InvalidCircuit(format!("wire {w} used twice in one gate")));
            }
        }
        if gate.angle().is_some_and(|t| !t.is_finite()) {
            return Err(Error::InvalidCircuit("non-finite angle".into()));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn with_env_init(mut self, env: EnvState) -> Result<Self> {
        if env.qubits() != self.n_env + self.n_ancilla {
            return Err(Error::DimensionMismatch {
                expected: self.n_env + self.n_ancilla,
                found: env.qubits(),
            });
        }
        self.env_init = env;
        Ok(self)
    }

    /// Measure the environment in the computational basis at the end.
    pub fn measured(mut self) -> Self {
        self.measure_env = true;
        self
    }

    pub fn n_principal(&self) -> usize {
        self.n_principal
    }

    pub fn n_env(&self) -> usize {
        self.n_env
    }

    pub fn n_ancilla(&self) -> usize {
        self.n_ancilla
    }

    pub fn total_qubits(&self) -> usize {
        self.n_principal + self.n_env + self.n_ancilla
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn env_init(&self) -> &EnvState {
        &self.env_init
    }

    pub fn measures_env(&self) -> bool {
        self.measure_env
    }

    fn mask(&self, wire: usize) -> usize {
        1 << (self.total_qubits() - 1 - wire)
    }

    /// Runs every gate on a state vector of the full register.
    pub fn apply_to_state(&self, psi: &mut [C64]) {
        assert_eq!(psi.len(), 1 << self.total_qubits());
        for gate in &self.gates {
            match gate {
                Gate::Ry { target, theta } => {
                    rotate(psi, 0, self.mask(*target), *theta);
                }
                Gate::ControlledRy { control, target, theta } => {
                    rotate(psi, self.mask(*control), self.mask(*target), *theta);
                }
                Gate::Not { target } => {
                    let t = self.mask(*target);
                    for idx in 0..psi.len() {
                        if idx & t == 0 {
                            psi.swap(idx, idx | t);
                        }
                    }
                }
                Gate::Cnot { control, target } => {
                    let (c, t) = (self.mask(*control), self.mask(*target));
                    for idx in 0..psi.len() {
                        if idx & c != 0 && idx & t == 0 {
                            psi.swap(idx, idx | t);
                        }
                    }
                }
                Gate::ControlledSwap { control, pairs } => {
                    let c = self.mask(*control);
                    let masks: Vec<(usize, usize)> =
                        pairs.iter().map(|&(a, b)| (self.mask(a), self.mask(b))).collect();
                    for idx in 0..psi.len() {
                        if idx & c == 0 {
                            continue;
                        }
                        let mut out = idx;
                        for &(ma, mb) in &masks {
                            let (ba, bb) = (idx & ma != 0, idx & mb != 0);
                            if ba != bb {
                                out ^= ma | mb;
                            }
                        }
                        if idx < out {
                            psi.swap(idx, out);
                        }
                    }
                }
            }
        }
    }
}

/// `R_y(θ)` on `target` wherever every bit of `control` is set.
fn rotate(psi: &mut [C64], control: usize, target: usize, theta: f64) {
    let (s, c) = (theta / 2.0).sin_cos();
    for idx in 0..psi.len() {
        if idx & target == 0 && idx & control == control {
            let (a, b) = (psi[idx], psi[idx | target]);
            psi[idx] = a * c - b * s;
            psi[idx | target] = a * s + b * c;
        }
    }
}

/// Kraus operators of the principal-register channel. One operator per
/// environment component and final environment basis state; the
/// measurement of the environment is absorbed in the same basis.
pub fn induced_kraus(circuit: &QubitCircuit) -> Result<KrausChannel> {
    let total = circuit.total_qubits();
    if total > MAX_CIRCUIT_QUBITS {
        return Err(Error::CircuitTooLarge(total));
    }
    let n = 1usize << circuit.n_principal;
    let e = 1usize << (circuit.n_env + circuit.n_ancilla);
    let mut ops = Vec::new();
    for (w, env) in circuit.env_init.components() {
        if *w == 0.0 {
            continue;
        }
        let amp = w.sqrt();
        // columns[k] is the full output state for principal input |k⟩
        let columns: Vec<Vec<C64>> = (0..n)
            .map(|k| {
                let mut psi = vec![ZERO; n * e];
                psi[k * e..(k + 1) * e].copy_from_slice(env);
                circuit.apply_to_state(&mut psi);
                psi
            })
            .collect();
        for m in 0..e {
            let op = CMat::from_fn(n, n, |i, k| columns[k][i * e + m] * amp);
            if linalg::frobenius_norm(&op) > 0.0 {
                ops.push(op);
            }
        }
    }
    KrausChannel::new(
        ops,
        ChannelLabel::Custom {
            name: "circuit".into(),
        },
    )
}

/// Superoperator of the channel induced on the principal register.
pub fn induced_channel(circuit: &QubitCircuit) -> Result<SuperoperatorMatrix> {
    Ok(to_matrix(&induced_kraus(circuit)?))
}

/// Environment in `I/2ⁿ`, ancilla in `(1−ε)|0⟩⟨0| + ε|1⟩⟨1|` controlling a
/// swap of the principal and environment registers.
pub fn dc_circuit(n: usize, eps: NoiseStrength) -> Result<QubitCircuit> {
    let e = eps.get();
    let mut c = QubitCircuit::new(n, n, 1)?;
    let len = 1usize << (n + 1);
    let mut comps = Vec::new();
    for b in 0..(1usize << n) {
        for (a, wa) in [(0usize, 1.0 - e), (1, e)] {
            comps.push((wa / (1usize << n) as f64, basis_vector(len, (b << 1) | a)));
        }
    }
    c = c.with_env_init(EnvState::mixture(n + 1, comps)?)?;
    c.push(Gate::ControlledSwap {
        control: 2 * n,
        pairs: (0..n).map(|j| (j, n + j)).collect(),
    })?;
    Ok(c)
}

/// Environment in `(1−ε)|+…+⟩⟨+…+| + ε|0…0⟩⟨0…0|`, then a CNOT from each
/// principal qubit onto its environment partner, then measurement. Induces
/// `(1−ε)ρ + ε diag(ρ)`.
pub fn pdc_circuit(n: usize, eps: NoiseStrength) -> Result<QubitCircuit> {
    let e = eps.get();
    let len = 1usize << n;
    let plus = vec![C64::new(1.0 / (len as f64).sqrt(), 0.0); len];
    let env = EnvState::mixture(n, vec![(1.0 - e, plus), (e, basis_vector(len, 0))])?;
    let mut c = QubitCircuit::new(n, n, 0)?.with_env_init(env)?.measured();
    for j in 0..n {
        c.push(Gate::Cnot { control: j, target: n + j })?;
    }
    Ok(c)
}

/// One controlled `R_y(θ)` per qubit with `cos(θ/2) = 1−ε`, environment in
/// `|0…0⟩`, then measurement. Dephases each qubit independently, so a
/// coherence `ρ_ab` is scaled by `(1−ε)^{popcount(a⊕b)}`.
pub fn pdc_circuit_per_qubit(n: usize, eps: NoiseStrength) -> Result<QubitCircuit> {
    let theta = 2.0 * (1.0 - eps.get()).acos();
    let mut c = QubitCircuit::new(n, n, 0)?.measured();
    for j in 0..n {
        c.push(Gate::ControlledRy { control: j, target: n + j, theta })?;
    }
    Ok(c)
}

/// Angle pairs `(θ_j⁰, θ_j¹)`: environment qubit `j` is rotated by
/// `θ_j^{l}` when principal qubit `j` is `|l⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotationSchedule {
    angles: Vec<(f64, f64)>,
}

impl RotationSchedule {
    pub fn new(angles: Vec<(f64, f64)>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidSchedule("no qubits".into()));
        }
        for &(a, b) in &angles {
            for t in [a, b] {
                if !(t.is_finite() && (0.0..2.0 * PI).contains(&t)) {
                    return Err(Error::InvalidSchedule(format!("angle {t} outside [0, 2π)")));
                }
            }
        }
        Ok(RotationSchedule { angles })
    }

    pub fn zero(n: usize) -> Result<Self> {
        RotationSchedule::new(vec![(0.0, 0.0); n])
    }

    pub fn random(n: usize, seed: u64) -> Result<Self> {
        let mut rng = rng_from_seed(seed);
        let angles = (0..n)
            .map(|_| (rng.random_range(0.0..2.0 * PI), rng.random_range(0.0..2.0 * PI)))
            .collect();
        RotationSchedule::new(angles)
    }

    pub fn qubits(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[(f64, f64)] {
        &self.angles
    }

    fn angle(&self, j: usize, bit: usize) -> f64 {
        if bit == 0 {
            self.angles[j].0
        } else {
            self.angles[j].1
        }
    }
}

/// State-dependent rotations (a controlled `R_y` for each principal value,
/// the `|0⟩` branch conjugated by NOT), CNOTs from each environment qubit
/// onto its principal partner, then measurement.
pub fn adc_circuit(schedule: &RotationSchedule) -> Result<QubitCircuit> {
    let n = schedule.qubits();
    let mut c = QubitCircuit::new(n, n, 0)?.measured();
    for j in 0..n {
        let (t0, t1) = schedule.angles[j];
        c.push(Gate::ControlledRy { control: j, target: n + j, theta: t1 })?;
        c.push(Gate::Not { target: j })?;
        c.push(Gate::ControlledRy { control: j, target: n + j, theta: t0 })?;
        c.push(Gate::Not { target: j })?;
    }
    for j in 0..n {
        c.push(Gate::Cnot { control: n + j, target: j })?;
    }
    Ok(c)
}

fn bit(x: usize, j: usize, n: usize) -> usize {
    (x >> (n - 1 - j)) & 1
}

/// Signed amplitude `cos(θ/2)` for `s = 0`, `sin(θ/2)` for `s = 1`.
fn branch_amplitude(s: usize, theta: f64) -> f64 {
    if s == 0 {
        (theta / 2.0).cos()
    } else {
        (theta / 2.0).sin()
    }
}

/// `p(i → i⊕s) = Π_j f(s_j, θ_j^{i_j})` with `f(0,θ) = cos²(θ/2)` and
/// `f(1,θ) = sin²(θ/2)`.
pub fn adc_transition_probability(schedule: &RotationSchedule, i: usize, s: usize) -> f64 {
    let n = schedule.qubits();
    (0..n)
        .map(|j| branch_amplitude(bit(s, j, n), schedule.angle(j, bit(i, j, n))).powi(2))
        .product()
}

/// Kraus operators `K_s = Σ_i a_s(i) |i⊕s⟩⟨i|` of the XOR-displacement
/// channel the ADC circuit realizes.
pub fn adc_xor_channel(schedule: &RotationSchedule) -> Result<KrausChannel> {
    let n = schedule.qubits();
    let dim = Dimension::from_qubits(n as u32)?;
    let size = dim.get();
    let ops = (0..size)
        .map(|s| {
            let mut m = linalg::zeros(size, size);
            for i in 0..size {
                let a: f64 = (0..n)
                    .map(|j| branch_amplitude(bit(s, j, n), schedule.angle(j, bit(i, j, n))))
                    .product();
                m[(i ^ s, i)] = C64::new(a, 0.0);
            }
            m
        })
        .collect();
    KrausChannel::new(
        ops,
        ChannelLabel::Custom {
            name: "adc-xor".into(),
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CircuitKind {
    Dc,
    Pdc,
    Adc,
}

impl fmt::Display for CircuitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CircuitKind::Dc => "dc",
            CircuitKind::Pdc => "pdc",
            CircuitKind::Adc => "adc",
        })
    }
}

impl FromStr for CircuitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "dc" => Ok(CircuitKind::Dc),
            "pdc" => Ok(CircuitKind::Pdc),
            "adc" => Ok(CircuitKind::Adc),
            other => Err(Error::parse("circuit", other, "expected dc, pdc or adc")),
        }
    }
}

/// Certification of a circuit against its analytic channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitReport {
    pub which: CircuitKind,
    pub qubits: usize,
    pub eps: Option<f64>,
    pub seed: Option<u64>,
    /// Largest entrywise superoperator deviation.
    pub max_deviation: f64,
    /// Largest transition-probability deviation (adc only).
    pub max_probability_deviation: Option<f64>,
    pub cptp: CptpReport,
    pub pass: bool,
}

/// Builds the circuit, simulates it and compares with the analytic channel.
/// `eps` is ignored for `adc`, whose angles come from `seed`.
pub fn verify_circuit(which: CircuitKind, n: usize, eps: f64, seed: u64) -> Result<CircuitReport> {
    let dim = Dimension::from_qubits(n as u32)?;
    let (circuit, reference, schedule) = match which {
        CircuitKind::Dc => {
            let e = NoiseStrength::new(eps)?;
            (dc_circuit(n, e)?, depolarizing(dim, e), None)
        }
        CircuitKind::Pdc => {
            let e = NoiseStrength::new(eps)?;
            let pdc = phase_damping(dim, e, &DephasingCoefficients::diagonal(dim))?;
            (pdc_circuit(n, e)?, pdc, None)
        }
        CircuitKind::Adc => {
            let sched = RotationSchedule::random(n, seed)?;
            (adc_circuit(&sched)?, adc_xor_channel(&sched)?, Some(sched))
        }
    };
    let induced = induced_channel(&circuit)?;
    let expected = to_matrix(&reference);
    let max_deviation = linalg::max_abs_diff(induced.matrix(), expected.matrix());
    let cptp = induced.validate_cptp()?;
    let max_probability_deviation = schedule.as_ref().map(|sched| {
        let size = dim.get();
        let mut worst = 0.0f64;
        for i in 0..size {
            for s in 0..size {
                let out = i ^ s;
                let measured = induced.matrix()[(out * size + out, i * size + i)].re;
                worst = worst.max((measured - adc_transition_probability(sched, i, s)).abs());
            }
        }
        worst
    });
    let pass = max_deviation < CIRCUIT_TOL
        && max_probability_deviation.is_none_or(|d| d <= PROBABILITY_TOL)
        && cptp.pass;
    Ok(CircuitReport {
        which,
        qubits: n,
        eps: (which != CircuitKind::Adc).then_some(eps),
        seed: (which == CircuitKind::Adc).then_some(seed),
        max_deviation,
        max_probability_deviation,
        cptp,
        pass,
    })
}
