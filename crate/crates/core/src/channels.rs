//! Generalized noise channels in Kraus form: depolarizing, phase damping
//! (diagonal, random and line variants) and Gaussian amplitude damping.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, Dimension, PSD_FLOOR};
use crate::linalg::{self, CMat, C64, ONE, ZERO};
use crate::phase_space::{line_points, translation_matrix, ChordIndex, LineSpec};
use crate::random::rng_from_seed;

/// Pass threshold for the trace-preservation defect.
pub const CPTP_TOL: f64 = 1e-10;

pub const SINKHORN_TOL: f64 = 1e-12;
pub const SINKHORN_MAX_SWEEPS: usize = 10_000;

/// Noise probability `ε ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct NoiseStrength(f64);

impl NoiseStrength {
    pub fn new(eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::InvalidNoiseStrength(eps));
        }
        Ok(NoiseStrength(eps))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Symmetric balancing of a positive symmetric kernel: returns `D K D`
/// with every row summing to one.
fn symmetric_sinkhorn(k: &[f64], n: usize) -> Result<Vec<f64>> {
    let mut x = vec![1.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..SINKHORN_MAX_SWEEPS {
        let kx: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| k[i * n + j] * x[j]).sum())
            .collect();
        for i in 0..n {
            x[i] = (x[i] / kx[i]).sqrt();
        }
        residual = (0..n)
            .map(|i| {
                let row: f64 = (0..n).map(|j| k[i * n + j] * x[i] * x[j]).sum();
                (row - 1.0).abs()
            })
            .fold(0.0, f64::max);
        if residual < SINKHORN_TOL {
            return Ok((0..n * n)
                .map(|idx| k[idx] * (x[idx / n] * x[idx % n]))
                .collect());
        }
    }
    Err(Error::SinkhornNoConvergence {
        sweeps: SINKHORN_MAX_SWEEPS,
        residual,
    })
}

/// Real symmetric PSD stochastic matrix `C` of the phase damping channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DephasingCoefficients {
    n: usize,
    c: Vec<f64>,
}

impl DephasingCoefficients {
    pub fn new(dim: Dimension, c: Vec<f64>) -> Result<Self> {
        let n = dim.get();
        if c.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: c.len(),
            });
        }
        let coeffs = DephasingCoefficients { n, c };
        coeffs.validate()?;
        Ok(coeffs)
    }

    /// `C_ij = δ_ij`.
    pub fn diagonal(dim: Dimension) -> Self {
        let n = dim.get();
        let c = (0..n * n)
            .map(|idx| if idx / n == idx % n { 1.0 } else { 0.0 })
            .collect();
        DephasingCoefficients { n, c }
    }

    /// `C = D (B Bᵀ) D` for a seeded positive `B`, balanced to be stochastic.
    pub fn random(dim: Dimension, seed: u64) -> Result<Self> {
        use rand::Rng;
        let n = dim.get();
        let mut rng = rng_from_seed(seed);
        let b: Vec<f64> = (0..n * n).map(|_| rng.random::<f64>()).collect();
        let mut k = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                k[i * n + j] = (0..n).map(|t| b[i * n + t] * b[j * n + t]).sum();
            }
        }
        let c = symmetric_sinkhorn(&k, n)?;
        let mut coeffs = DephasingCoefficients { n, c };
        coeffs.symmetrize();
        coeffs.validate()?;
        Ok(coeffs)
    }

    fn symmetrize(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                let m = 0.5 * (self.c[i * n + j] + self.c[j * n + i]);
                self.c[i * n + j] = m;
                self.c[j * n + i] = m;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.c[i * self.n + j]
    }

    /// Symmetric, nonnegative entries, unit row sums, PSD.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let bad = |msg: String| Err(Error::InvalidCoefficients(msg));
        for i in 0..n {
            for j in 0..n {
                let v = self.get(i, j);
                if !v.is_finite() || v < 0.0 {
                    return bad(format!("entry ({i},{j}) = {v} is not a probability"));
                }
                if (v - self.get(j, i)).abs() > 1e-12 {
                    return bad(format!("asymmetric at ({i},{j})"));
                }
            }
            let row: f64 = (0..n).map(|j| self.get(i, j)).sum();
            if (row - 1.0).abs() > 1e-12 {
                return bad(format!("row {i} sums to {row}"));
            }
        }
        let m = CMat::from_fn(n, n, |i, j| C64::new(self.get(i, j), 0.0));
        let min = linalg::hermitian_eigenvalues(&m)?[0];
        if min < PSD_FLOOR {
            return bad(format!("minimum eigenvalue {min}"));
        }
        Ok(())
    }
}

/// Symmetric doubly stochastic transition probabilities of the amplitude
/// damping channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    n: usize,
    width: f64,
    p: Vec<f64>,
}

impl TransitionMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.n + j]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).sum())
            .collect()
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j)).sum())
            .collect()
    }
}

/// Gaussian kernel `exp(−(i−j)²/2w²)` balanced to a symmetric doubly
/// stochastic matrix.
pub fn gaussian_transition(dim: Dimension, width: f64) -> Result<TransitionMatrix> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::InvalidWidth(width));
    }
    let n = dim.get();
    let k: Vec<f64> = (0..n * n)
        .map(|idx| {
            let d = (idx / n) as f64 - (idx % n) as f64;
            (-d * d / (2.0 * width * width)).exp()
        })
        .collect();
    let mut p = symmetric_sinkhorn(&k, n)?;
    for i in 0..n {
        for j in i + 1..n {
            let m = 0.5 * (p[i * n + j] + p[j * n + i]);
            p[i * n + j] = m;
            p[j * n + i] = m;
        }
    }
    Ok(TransitionMatrix { n, width, p })
}

/// Descriptor carried by every channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChannelLabel {
    Identity,
    Depolarizing { eps: f64 },
    PhaseDamping { eps: f64 },
    PhaseDampingRandom { eps: f64, seed: u64 },
    PhaseDampingLine { eps: f64, n1: i64, n2: i64, n3: i64, points: usize },
    /// `width` is the Gaussian width in level units, not a probability.
    AmplitudeDamping { width: f64 },
    AmplitudeDampingQubit { eps: f64 },
    Unitary,
    Composed { channel: Box<ChannelLabel> },
    Custom { name: String },
}

impl fmt::Display for ChannelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelLabel::Identity => write!(f, "identity"),
            ChannelLabel::Depolarizing { eps } => write!(f, "dc(eps={eps})"),
            ChannelLabel::PhaseDamping { eps } => write!(f, "pdc(eps={eps})"),
            ChannelLabel::PhaseDampingRandom { eps, seed } => {
                write!(f, "pdc-rand(eps={eps}, seed={seed})")
            }
            ChannelLabel::PhaseDampingLine { eps, n1, n2, n3, points } => {
                write!(f, "pdc-line({n1},{n2},{n3}; eps={eps}, R={points})")
            }
            ChannelLabel::AmplitudeDamping { width } => write!(f, "adc(width={width})"),
            ChannelLabel::AmplitudeDampingQubit { eps } => write!(f, "adc1(eps={eps})"),
            ChannelLabel::Unitary => write!(f, "unitary"),
            ChannelLabel::Composed { channel } => write!(f, "{channel} o U"),
            ChannelLabel::Custom { name } => write!(f, "{name}"),
        }
    }
}

/// Ordered list of Kraus operators `{M_μ}` acting as `ρ ↦ Σ M_μ ρ M_μ†`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim: Dimension,
    ops: Vec<CMat>,
    label: ChannelLabel,
}

/// Outcome of [`KrausChannel::validate_cptp`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CptpReport {
    pub tp_deviation: f64,
    pub min_choi_eigenvalue: f64,
    pub pass: bool,
}

impl CptpReport {
    pub(crate) fn from_parts(tp_deviation: f64, min_choi_eigenvalue: f64) -> Self {
        CptpReport {
            tp_deviation,
            min_choi_eigenvalue,
            pass: tp_deviation < CPTP_TOL && min_choi_eigenvalue > -CPTP_TOL,
        }
    }
}

impl KrausChannel {
    /// Wraps a list of square operators of equal size. Trace preservation
    /// is not enforced here; see [`KrausChannel::validate_cptp`].
    pub fn new(ops: Vec<CMat>, label: ChannelLabel) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidDensityMatrix("empty Kraus list".into()))?;
        let n = first.nrows();
        let dim = Dimension::new(n)?;
        for m in &ops {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: if m.nrows() != n { m.nrows() } else { m.ncols() },
                });
            }
        }
        Ok(KrausChannel { dim, ops, label })
    }

    pub(crate) fn from_trusted(dim: Dimension, ops: Vec<CMat>, label: ChannelLabel) -> Self {
        KrausChannel { dim, ops, label }
    }

    pub fn identity(dim: Dimension) -> Self {
        KrausChannel {
            dim,
            ops: vec![linalg::identity(dim.get())],
            label: ChannelLabel::Identity,
        }
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn kraus_ops(&self) -> &[CMat] {
        &self.ops
    }

    pub fn label(&self) -> &ChannelLabel {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Same operators in a different order.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.ops.len()];
        if order.len() != self.ops.len() {
            return Err(Error::DimensionMismatch {
                expected: self.ops.len(),
                found: order.len(),
            });
        }
        for &i in order {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidState("not a permutation".into()));
            }
        }
        Ok(KrausChannel {
            dim: self.dim,
            ops: order.iter().map(|&i| self.ops[i].clone()).collect(),
            label: self.label.clone(),
        })
    }

    /// `Σ M_μ X M_μ†` for an arbitrary operator, summed in ascending `μ`.
    pub fn apply_operator(&self, x: &CMat) -> Result<CMat> {
        let n = self.dim.get();
        if x.nrows() != n || x.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.nrows(),
            });
        }
        let mut acc = linalg::zeros(n, n);
        for m in &self.ops {
            let mx = m * x;
            acc += &mx * linalg::adjoint(m);
        }
        Ok(acc)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_trusted(self.apply_operator(rho.matrix())?))
    }

    /// `Σ M_μ† M_μ`.
    pub fn kraus_sum(&self) -> CMat {
        let n = self.dim.get();
        let mut acc = linalg::zeros(n, n);
        for m in &self.ops {
            acc += linalg::adjoint(m) * m;
        }
        acc
    }

    /// Choi matrix `J[(i,k),(j,l)] = Σ_μ M_μ[i,k] conj(M_μ[j,l])`.
    pub fn choi(&self) -> CMat {
        let n = self.dim.get();
        let x = CMat::from_fn(n * n, self.ops.len(), |r, mu| self.ops[mu][(r / n, r % n)]);
        &x * linalg::adjoint(&x)
    }

    pub fn validate_cptp(&self) -> Result<CptpReport> {
        let n = self.dim.get();
        let tp = linalg::max_abs_diff(&self.kraus_sum(), &linalg::identity(n));
        let min = linalg::hermitian_eigenvalues(&self.choi())?[0];
        Ok(CptpReport::from_parts(tp, min))
    }
}

fn scaled_identity(n: usize, s: f64) -> CMat {
    CMat::from_fn(n, n, |i, j| if i == j { C64::new(s, 0.0) } else { ZERO })
}

/// `{√(1−ε) I} ∪ {(√ε/N) T_α}` over all `N²` chords.
pub fn depolarizing(dim: Dimension, eps: NoiseStrength) -> KrausChannel {
    let n = dim.get();
    let e = eps.get();
    let mut ops = Vec::with_capacity(n * n + 1);
    ops.push(scaled_identity(n, (1.0 - e).sqrt()));
    let s = C64::new(e.sqrt() / n as f64, 0.0);
    for alpha in ChordIndex::all(dim) {
        ops.push(linalg::scale(&translation_matrix(alpha, dim), s));
    }
    KrausChannel::from_trusted(dim, ops, ChannelLabel::Depolarizing { eps: e })
}

/// `{√(1−ε) I} ∪ {√(ε C_ij) |i⟩⟨j|}`, zero coefficients dropped.
pub fn phase_damping(
    dim: Dimension,
    eps: NoiseStrength,
    coeffs: &DephasingCoefficients,
) -> Result<KrausChannel> {
    let n = dim.get();
    if coeffs.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: coeffs.dim(),
        });
    }
    let e = eps.get();
    let mut ops = vec![scaled_identity(n, (1.0 - e).sqrt())];
    for i in 0..n {
        for j in 0..n {
            let c = coeffs.get(i, j);
            if c > 0.0 {
                let mut m = linalg::zeros(n, n);
                m[(i, j)] = C64::new((e * c).sqrt(), 0.0);
                ops.push(m);
            }
        }
    }
    Ok(KrausChannel::from_trusted(dim, ops, ChannelLabel::PhaseDamping { eps: e }))
}

/// `{√(1−ε) I} ∪ {√(ε/R) T_α : α on the line}`.
pub fn phase_damping_line(dim: Dimension, eps: NoiseStrength, spec: LineSpec) -> Result<KrausChannel> {
    let points = line_points(spec, dim)?;
    let n = dim.get();
    let e = eps.get();
    let r = points.len();
    let s = C64::new((e / r as f64).sqrt(), 0.0);
    let mut ops = Vec::with_capacity(r + 1);
    ops.push(scaled_identity(n, (1.0 - e).sqrt()));
    for alpha in points {
        ops.push(linalg::scale(&translation_matrix(alpha, dim), s));
    }
    let label = ChannelLabel::PhaseDampingLine {
        eps: e,
        n1: spec.n1,
        n2: spec.n2,
        n3: spec.n3,
        points: r,
    };
    Ok(KrausChannel::from_trusted(dim, ops, label))
}

/// `M_μ = Σ_i √p_{i,i+μ} |i+μ⟩⟨i|` for `μ = −(N−1) … N−1`.
pub fn amplitude_damping_from(p: &TransitionMatrix) -> Result<KrausChannel> {
    let n = p.dim();
    let dim = Dimension::new(n)?;
    let ni = n as i64;
    let ops = (-(ni - 1)..ni)
        .map(|mu| {
            let mut m = linalg::zeros(n, n);
            for i in 0..ni {
                let t = i + mu;
                if (0..ni).contains(&t) {
                    m[(t as usize, i as usize)] =
                        C64::new(p.get(i as usize, t as usize).sqrt(), 0.0);
                }
            }
            m
        })
        .collect();
    Ok(KrausChannel::from_trusted(
        dim,
        ops,
        ChannelLabel::AmplitudeDamping { width: p.width() },
    ))
}

pub fn amplitude_damping(dim: Dimension, width: f64) -> Result<KrausChannel> {
    amplitude_damping_from(&gaussian_transition(dim, width)?)
}

/// One-qubit decay `{diag(1, √(1−ε)), √ε |0⟩⟨1|}`.
pub fn adc_one_qubit(eps: NoiseStrength) -> KrausChannel {
    let e = eps.get();
    let mut m0 = linalg::zeros(2, 2);
    m0[(0, 0)] = ONE;
    m0[(1, 1)] = C64::new((1.0 - e).sqrt(), 0.0);
    let mut m1 = linalg::zeros(2, 2);
    m1[(0, 1)] = C64::new(e.sqrt(), 0.0);
    KrausChannel::from_trusted(
        Dimension::new(2).expect("2 is a valid dimension"),
        vec![m0, m1],
        ChannelLabel::AmplitudeDampingQubit { eps: e },
    )
}

/// Channel descriptor accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChannelSpec {
    None,
    Dc,
    Pdc,
    PdcLine(LineSpec),
    Adc,
    PdcRand(u64),
}

impl ChannelSpec {
    /// For `adc` the parameter is the Gaussian width; otherwise it is the
    /// noise probability.
    pub fn build(&self, dim: Dimension, eps: f64) -> Result<KrausChannel> {
        match self {
            ChannelSpec::None => Ok(KrausChannel::identity(dim)),
            ChannelSpec::Dc => Ok(depolarizing(dim, NoiseStrength::new(eps)?)),
            ChannelSpec::Pdc => phase_damping(
                dim,
                NoiseStrength::new(eps)?,
                &DephasingCoefficients::diagonal(dim),
            ),
            ChannelSpec::PdcLine(spec) => phase_damping_line(dim, NoiseStrength::new(eps)?, *spec),
            ChannelSpec::Adc => amplitude_damping(dim, eps),
            ChannelSpec::PdcRand(seed) => {
                let c = DephasingCoefficients::random(dim, *seed)?;
                let mut ch = phase_damping(dim, NoiseStrength::new(eps)?, &c)?;
                ch.label = ChannelLabel::PhaseDampingRandom { eps, seed: *seed };
                Ok(ch)
            }
        }
    }

    pub fn slug(&self) -> String {
        match self {
            ChannelSpec::None => "none".into(),
            ChannelSpec::Dc => "dc".into(),
            ChannelSpec::Pdc => "pdc".into(),
            ChannelSpec::PdcLine(s) => format!("pdc-line_{}_{}_{}", s.n1, s.n2, s.n3),
            ChannelSpec::Adc => "adc".into(),
            ChannelSpec::PdcRand(seed) => format!("pdc-rand_{seed}"),
        }
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelSpec::None => write!(f, "none"),
            ChannelSpec::Dc => write!(f, "dc"),
            ChannelSpec::Pdc => write!(f, "pdc"),
            ChannelSpec::PdcLine(s) => write!(f, "pdc-line:{s}"),
            ChannelSpec::Adc => write!(f, "adc"),
            ChannelSpec::PdcRand(seed) => write!(f, "pdc-rand:{seed}"),
        }
    }
}

impl FromStr for ChannelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once(':') {
            None => match s {
                "none" => Ok(ChannelSpec::None),
                "dc" => Ok(ChannelSpec::Dc),
                "pdc" => Ok(ChannelSpec::Pdc),
                "adc" => Ok(ChannelSpec::Adc),
                _ => Err(Error::parse(
                    "channel",
                    s,
                    "expected none, dc, pdc, adc, pdc-line:n1,n2,n3 or pdc-rand:SEED",
                )),
            },
            Some(("pdc-line", rest)) => Ok(ChannelSpec::PdcLine(rest.parse()?)),
            Some(("pdc-rand", rest)) => rest
                .trim()
                .parse::<u64>()
                .map(ChannelSpec::PdcRand)
                .map_err(|e| Error::parse("channel", s, e.to_string())),
            Some(_) => Err(Error::parse("channel", s, "unknown channel kind")),
        }
    }
}
