//! Finite-dimensional Hilbert-space primitives on the discrete torus:
//! position and momentum bases, coherent and cat states, density
//! matrices and the linear entropy.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, C64, ONE, ZERO};

/// Tolerance on the norm of a [`StateVector`].
pub const STATE_NORM_TOL: f64 = 1e-12;
/// Tolerance on hermiticity and trace of a [`DensityMatrix`].
pub const DENSITY_TOL: f64 = 1e-12;
/// Lowest eigenvalue accepted for a [`DensityMatrix`].
pub const PSD_FLOOR: f64 = -1e-10;

/// Number of periodic images summed on each side for coherent states.
const COHERENT_IMAGES: i32 = 3;

/// Hilbert-space dimension `N`, at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dimension(usize);

impl Dimension {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        Ok(Dimension(n))
    }

    /// `N = 2^qubits`.
    pub fn from_qubits(qubits: u32) -> Result<Self> {
        if qubits == 0 || qubits > 30 {
            return Err(Error::InvalidDimension(1usize.checked_shl(qubits).unwrap_or(0)));
        }
        Dimension::new(1 << qubits)
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Qubit count when `N` is a power of two.
    pub fn qubits(self) -> Result<u32> {
        if self.0.is_power_of_two() {
            Ok(self.0.trailing_zeros())
        } else {
            Err(Error::NotPowerOfTwo(self.0))
        }
    }

    fn check_index(self, index: usize) -> Result<()> {
        if index >= self.0 {
            Err(Error::IndexOutOfRange { index, dim: self.0 })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point of the continuum torus `[0,1) x [0,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    q: f64,
    p: f64,
}

impl PhasePoint {
    /// Both coordinates are reduced mod 1.
    pub fn new(q: f64, p: f64) -> Self {
        PhasePoint {
            q: reduce_unit(q),
            p: reduce_unit(p),
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Nearest grid cell `(round(q N) mod N, round(p N) mod N)`.
    pub fn grid(&self, dim: Dimension) -> (usize, usize) {
        let n = dim.get() as f64;
        let g = |x: f64| ((x * n).round() as i64).rem_euclid(dim.get() as i64) as usize;
        (g(self.q), g(self.p))
    }
}

fn reduce_unit(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    // rem_euclid can round up to exactly 1.0 for tiny negative inputs
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Normalized pure state in the position (computational) basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Wraps amplitudes that must already have unit norm.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::InvalidDimension(amps.len()));
        }
        let norm = norm(&amps);
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::InvalidState(format!("norm {norm} differs from 1")));
        }
        Ok(StateVector { amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let norm = norm(&amps);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite vector".into()));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        StateVector::new(amps)
    }

    pub fn dim(&self) -> Dimension {
        Dimension(self.amps.len())
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> DensityMatrix {
        let n = self.amps.len();
        let m = CMat::from_fn(n, n, |i, j| self.amps[i] * self.amps[j].conj());
        DensityMatrix::from_trusted(m)
    }

    /// Multiplies by a global phase so the largest-magnitude amplitude
    /// (first one on ties) is real and positive.
    fn fix_global_phase(&mut self) {
        let mut best = 0;
        let mut best_mag = -1.0;
        for (k, a) in self.amps.iter().enumerate() {
            let m = a.norm();
            if m > best_mag + 1e-14 {
                best = k;
                best_mag = m;
            }
        }
        let a = self.amps[best];
        if a.norm() > 0.0 {
            let phase = a.conj() / a.norm();
            self.amps.iter_mut().for_each(|x| *x *= phase);
        }
    }
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian, unit-trace, positive semidefinite `N x N` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMat,
}

/// Measured deviations of a matrix from the density-matrix invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityCheck {
    pub hermiticity: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl DensityCheck {
    pub fn is_valid(&self) -> bool {
        self.hermiticity <= DENSITY_TOL
            && self.trace_error <= DENSITY_TOL
            && self.min_eigenvalue >= PSD_FLOOR
    }
}

impl DensityMatrix {
    /// Validates every invariant, including the eigenvalue floor.
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::InvalidDensityMatrix("matrix is not square".into()));
        }
        Dimension::new(mat.nrows())?;
        let check = check_density(&mat)?;
        if !check.is_valid() {
            return Err(Error::InvalidDensityMatrix(format!(
                "hermiticity {:e}, trace error {:e}, min eigenvalue {:e}",
                check.hermiticity, check.trace_error, check.min_eigenvalue
            )));
        }
        Ok(DensityMatrix { mat })
    }

    /// For matrices produced by trace-preserving maps of valid states; the
    /// result is re-hermitized to absorb roundoff.
    pub(crate) fn from_trusted(mat: CMat) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        DensityMatrix {
            mat: linalg::hermitian_part(&mat),
        }
    }

    /// `I / N`.
    pub fn maximally_mixed(dim: Dimension) -> Self {
        let n = dim.get();
        let w = C64::new(1.0 / n as f64, 0.0);
        DensityMatrix {
            mat: CMat::from_fn(n, n, |i, j| if i == j { w } else { ZERO }),
        }
    }

    pub fn dim(&self) -> Dimension {
        Dimension(self.mat.nrows())
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn trace(&self) -> C64 {
        linalg::trace(&self.mat)
    }

    /// `Tr ρ²`, computed as the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        let f = linalg::frobenius_norm(&self.mat);
        f * f
    }

    /// Real parts of the diagonal.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.mat.nrows()).map(|i| self.mat[(i, i)].re).collect()
    }

    pub fn check(&self) -> Result<DensityCheck> {
        check_density(&self.mat)
    }
}

fn check_density(mat: &CMat) -> Result<DensityCheck> {
    let hermiticity = linalg::hermiticity_defect(mat);
    let trace_error = (linalg::trace(mat) - ONE).norm();
    let eig = linalg::hermitian_eigenvalues(&linalg::hermitian_part(mat))?;
    Ok(DensityCheck {
        hermiticity,
        trace_error,
        min_eigenvalue: eig.first().copied().unwrap_or(0.0),
    })
}

/// Position eigenstate `|q = n⟩`.
pub fn position_state(n: usize, dim: Dimension) -> Result<StateVector> {
    dim.check_index(n)?;
    let mut amps = vec![ZERO; dim.get()];
    amps[n] = ONE;
    Ok(StateVector { amps })
}

/// Discrete Fourier transform with entries `N^{-1/2} exp(-2πi q'q / N)`.
pub fn dft_matrix(dim: Dimension) -> CMat {
    let n = dim.get();
    let s = 1.0 / (n as f64).sqrt();
    CMat::from_fn(n, n, |r, c| {
        linalg::root_of_unity(-((r * c) as i64), n as i64) * s
    })
}

/// Momentum eigenstate `|p = k⟩`: column `k` of the inverse DFT.
pub fn momentum_state(k: usize, dim: Dimension) -> Result<StateVector> {
    dim.check_index(k)?;
    let n = dim.get();
    let s = 1.0 / (n as f64).sqrt();
    let amps = (0..n)
        .map(|q| linalg::root_of_unity((q * k) as i64, n as i64) * s)
        .collect();
    let mut st = StateVector { amps };
    st.fix_global_phase();
    Ok(st)
}

/// Periodized Gaussian centered at `center`, isotropic in `(q, p)`.
pub fn coherent_state(center: PhasePoint, dim: Dimension) -> StateVector {
    let n = dim.get();
    let nf = n as f64;
    let (q0, p0) = (center.q(), center.p());
    let amps: Vec<C64> = (0..n)
        .map(|k| {
            let x = k as f64 / nf;
            (-COHERENT_IMAGES..=COHERENT_IMAGES)
                .map(|m| {
                    let shift = x - q0 + m as f64;
                    let envelope = (-PI * nf * shift * shift).exp();
                    let phase = 2.0 * PI * nf * p0 * (x + m as f64);
                    C64::from_polar(envelope, phase)
                })
                .sum()
        })
        .collect();
    let mut st = StateVector::normalized(amps).expect("gaussian envelope is nonzero");
    st.fix_global_phase();
    st
}

/// Normalized superposition of two coherent states.
pub fn cat_state(c1: PhasePoint, c2: PhasePoint, dim: Dimension) -> Result<StateVector> {
    if c1 == c2 {
        return Err(Error::IdenticalCatCenters);
    }
    let a = coherent_state(c1, dim);
    let b = coherent_state(c2, dim);
    let sum = a.amps.iter().zip(&b.amps).map(|(x, y)| x + y).collect();
    StateVector::normalized(sum)
}

/// `S = -ln Tr ρ²`.
pub fn linear_entropy(rho: &DensityMatrix) -> f64 {
    -rho.purity().ln()
}
