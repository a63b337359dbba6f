//! Quantized torus maps (cat maps, the baker's map) and the Grover
//! iteration as unitary operators.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{dft_matrix, momentum_state, Dimension, PhasePoint, StateVector};
use crate::linalg::{self, CMat, C64, ONE, ZERO};

/// Tolerance used when wrapping caller-supplied unitaries.
pub const UNITARY_TOL: f64 = 1e-10;

/// An `N x N` unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    mat: CMat,
}

impl UnitaryOperator {
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                expected: mat.nrows(),
                found: mat.ncols(),
            });
        }
        Dimension::new(mat.nrows())?;
        let defect = linalg::unitarity_defect(&mat);
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(UnitaryOperator { mat })
    }

    pub(crate) fn from_trusted(mat: CMat) -> Self {
        UnitaryOperator { mat }
    }

    pub fn identity(dim: Dimension) -> Self {
        UnitaryOperator {
            mat: linalg::identity(dim.get()),
        }
    }

    pub fn dim(&self) -> Dimension {
        Dimension::new(self.mat.nrows()).expect("validated at construction")
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn adjoint(&self) -> UnitaryOperator {
        UnitaryOperator {
            mat: linalg::adjoint(&self.mat),
        }
    }

    /// `self · other`.
    pub fn then_after(&self, other: &UnitaryOperator) -> UnitaryOperator {
        UnitaryOperator {
            mat: &self.mat * &other.mat,
        }
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        let n = self.mat.nrows();
        if psi.dim().get() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: psi.dim().get(),
            });
        }
        let out = linalg::matvec(&self.mat, psi.amplitudes());
        StateVector::normalized(out)
    }

    pub fn unitarity_defect(&self) -> f64 {
        linalg::unitarity_defect(&self.mat)
    }
}

/// Integer parameters of the cat map `M = [[2β, −1], [1 − 4αβ, 2α]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CatParams {
    pub alpha: i64,
    pub beta: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatKind {
    Hyperbolic,
    Parabolic,
    Elliptic,
}

impl CatParams {
    pub const HYPERBOLIC: CatParams = CatParams { alpha: 1, beta: 1 };
    pub const ELLIPTIC: CatParams = CatParams { alpha: -1, beta: 1 };
    pub const PARABOLIC: CatParams = CatParams { alpha: 0, beta: 1 };

    pub fn new(alpha: i64, beta: i64) -> Self {
        CatParams { alpha, beta }
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        let (a, b) = (self.alpha, self.beta);
        [[2 * b, -1], [1 - 4 * a * b, 2 * a]]
    }

    pub fn determinant(&self) -> i64 {
        let m = self.matrix();
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> i64 {
        2 * (self.alpha + self.beta)
    }

    pub fn kind(&self) -> CatKind {
        match self.trace().abs() {
            t if t > 2 => CatKind::Hyperbolic,
            2 => CatKind::Parabolic,
            _ => CatKind::Elliptic,
        }
    }

    /// Eigenvalues of `M`, roots of `λ² − tr λ + 1`.
    pub fn classical_eigenvalues(&self) -> (C64, C64) {
        let t = self.trace() as f64;
        let disc = C64::new(t * t - 4.0, 0.0).sqrt();
        ((C64::new(t, 0.0) + disc) / 2.0, (C64::new(t, 0.0) - disc) / 2.0)
    }
}

/// `(q', p') = M (q, p)` without reduction mod 1.
pub fn classical_cat_image(params: CatParams, q: f64, p: f64) -> (f64, f64) {
    let m = params.matrix();
    (
        m[0][0] as f64 * q + m[0][1] as f64 * p,
        m[1][0] as f64 * q + m[1][1] as f64 * p,
    )
}

/// One step of the classical cat map on the torus.
pub fn classical_cat_step(params: CatParams, point: PhasePoint) -> PhasePoint {
    let (q, p) = classical_cat_image(params, point.q(), point.p());
    PhasePoint::new(q, p)
}

/// Position-basis propagator
/// `U(q', q) = N^{-1/2} exp(−2πi (α q'² − q'q + β q²) / N)`.
pub fn cat_propagator(params: CatParams, dim: Dimension) -> UnitaryOperator {
    let n = dim.get() as i64;
    let s = 1.0 / (n as f64).sqrt();
    let (a, b) = (params.alpha, params.beta);
    let mat = CMat::from_fn(n as usize, n as usize, |qp, q| {
        let (qp, q) = (qp as i64, q as i64);
        // reduce the generating function mod N before taking the phase
        let f = (a.rem_euclid(n) * (qp * qp % n) - qp * q + b.rem_euclid(n) * (q * q % n))
            .rem_euclid(n);
        linalg::root_of_unity(-f, n) * s
    });
    UnitaryOperator::from_trusted(mat)
}

/// Balazs–Voros baker propagator `F_N† · diag(F_{N/2}, F_{N/2})`.
pub fn baker_propagator(dim: Dimension) -> Result<UnitaryOperator> {
    let n = dim.get();
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    let half = n / 2;
    let block = if half == 1 {
        linalg::identity(1)
    } else {
        dft_matrix(Dimension::new(half)?)
    };
    let mut b = linalg::zeros(n, n);
    for i in 0..half {
        for j in 0..half {
            b[(i, j)] = block[(i, j)];
            b[(i + half, j + half)] = block[(i, j)];
        }
    }
    let f_dag = linalg::adjoint(&dft_matrix(dim));
    Ok(UnitaryOperator::from_trusted(&f_dag * &b))
}

/// Search problem of size `N` with a set of marked basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct GroverInstance {
    dim: Dimension,
    marked: Vec<usize>,
    psi0: StateVector,
}

impl GroverInstance {
    pub fn new(dim: Dimension, marked: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut marked: Vec<usize> = marked.into_iter().collect();
        marked.sort_unstable();
        marked.dedup();
        if marked.is_empty() {
            return Err(Error::InvalidGrover("no marked items".into()));
        }
        if marked.len() >= dim.get() {
            return Err(Error::InvalidGrover("every item is marked".into()));
        }
        if let Some(&w) = marked.iter().find(|&&w| w >= dim.get()) {
            return Err(Error::IndexOutOfRange {
                index: w,
                dim: dim.get(),
            });
        }
        Ok(GroverInstance {
            dim,
            marked,
            psi0: momentum_state(0, dim)?,
        })
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    /// Uniform superposition `|p = 0⟩`.
    pub fn initial_state(&self) -> &StateVector {
        &self.psi0
    }

    fn is_marked(&self, i: usize) -> bool {
        self.marked.binary_search(&i).is_ok()
    }
}

/// `U_G = U_ψ U_O` with `U_O = I − 2 Σ_w |w⟩⟨w|` and `U_ψ = I − 2|ψ⟩⟨ψ|`.
///
/// `U_ψ` here is minus the textbook diffusion operator; the global sign
/// cancels in every density-matrix quantity.
pub fn grover_operator(inst: &GroverInstance) -> UnitaryOperator {
    let n = inst.dim.get();
    let psi = inst.psi0.amplitudes();
    let mat = CMat::from_fn(n, n, |i, j| {
        let reflect = if i == j { ONE } else { ZERO } - psi[i] * psi[j].conj() * 2.0;
        if inst.is_marked(j) {
            -reflect
        } else {
            reflect
        }
    });
    UnitaryOperator::from_trusted(mat)
}

/// Rotation angle, optimal iteration count and invariant-plane eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroverGeometry {
    pub theta: f64,
    pub t_opt: u64,
    pub lambda_plus: C64,
    pub lambda_minus: C64,
}

pub fn grover_geometry(inst: &GroverInstance) -> GroverGeometry {
    let n = inst.dim.get() as f64;
    let m = inst.marked.len() as f64;
    let s = (2.0 * ((n - m) * m).sqrt() / n).min(1.0);
    let theta = s.asin();
    GroverGeometry {
        theta,
        t_opt: (PI / 4.0 * (n / m).sqrt()).round() as u64,
        lambda_plus: C64::from_polar(1.0, theta),
        lambda_minus: C64::from_polar(1.0, -theta),
    }
}

/// The unmarked/marked uniform superpositions `|α⟩`, `|β⟩`.
pub fn grover_plane(inst: &GroverInstance) -> (StateVector, StateVector) {
    let n = inst.dim.get();
    let m = inst.marked.len();
    let a = 1.0 / ((n - m) as f64).sqrt();
    let b = 1.0 / (m as f64).sqrt();
    let alpha = (0..n)
        .map(|i| if inst.is_marked(i) { ZERO } else { C64::new(a, 0.0) })
        .collect();
    let beta = (0..n)
        .map(|i| if inst.is_marked(i) { C64::new(b, 0.0) } else { ZERO })
        .collect();
    (
        StateVector::normalized(alpha).expect("nonempty"),
        StateVector::normalized(beta).expect("nonempty"),
    )
}

/// Map descriptor accepted on the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapSpec {
    None,
    Grover(Vec<usize>),
    Baker,
    Cat(CatParams),
}

impl MapSpec {
    pub fn build(&self, dim: Dimension) -> Result<UnitaryOperator> {
        match self {
            MapSpec::None => Ok(UnitaryOperator::identity(dim)),
            MapSpec::Grover(marked) => {
                let inst = GroverInstance::new(dim, marked.iter().copied())?;
                Ok(grover_operator(&inst))
            }
            MapSpec::Baker => baker_propagator(dim),
            MapSpec::Cat(p) => Ok(cat_propagator(*p, dim)),
        }
    }

    /// Short name suitable for file names.
    pub fn slug(&self) -> String {
        match self {
            MapSpec::None => "none".into(),
            MapSpec::Grover(_) => "grover".into(),
            MapSpec::Baker => "baker".into(),
            MapSpec::Cat(p) if *p == CatParams::HYPERBOLIC => "cat-hyp".into(),
            MapSpec::Cat(p) if *p == CatParams::ELLIPTIC => "cat-ell".into(),
            MapSpec::Cat(p) if *p == CatParams::PARABOLIC => "cat-par".into(),
            MapSpec::Cat(p) => format!("cat_{}_{}", p.alpha, p.beta),
        }
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::None => write!(f, "none"),
            MapSpec::Grover(w) => {
                let ws: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                write!(f, "grover:{}", ws.join(","))
            }
            MapSpec::Baker => write!(f, "baker"),
            MapSpec::Cat(p) => write!(f, "cat:{},{}", p.alpha, p.beta),
        }
    }
}

impl FromStr for MapSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, tail) = match s.split_once(':') {
            Some((h, t)) => (h, Some(t)),
            None => (s, None),
        };
        let ints = |t: &str| -> Result<Vec<i64>> {
            t.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map_err(|e| Error::parse("map", s, e.to_string()))
                })
                .collect()
        };
        match (head, tail) {
            ("none", None) => Ok(MapSpec::None),
            ("baker", None) => Ok(MapSpec::Baker),
            ("cat-hyp", None) => Ok(MapSpec::Cat(CatParams::HYPERBOLIC)),
            ("cat-ell", None) => Ok(MapSpec::Cat(CatParams::ELLIPTIC)),
            ("cat-par", None) => Ok(MapSpec::Cat(CatParams::PARABOLIC)),
            ("cat", Some(t)) => match ints(t)?.as_slice() {
                [a, b] => Ok(MapSpec::Cat(CatParams::new(*a, *b))),
                _ => Err(Error::parse("map", s, "expected cat:alpha,beta")),
            },
            ("grover", Some(t)) => {
                let ws = ints(t)?;
                if ws.iter().any(|&w| w < 0) {
                    return Err(Error::parse("map", s, "marked items must be nonnegative"));
                }
                Ok(MapSpec::Grover(ws.into_iter().map(|w| w as usize).collect()))
            }
            _ => Err(Error::parse(
                "map",
                s,
                "expected none, baker, grover:w1[,w2..], cat:a,b, cat-hyp, cat-ell or cat-par",
            )),
        }
    }
}
