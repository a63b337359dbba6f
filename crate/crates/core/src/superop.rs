//! Superoperator matrices on row-major vectorized operators, their dense
//! spectra and degeneracy clustering.
//!
//! With `vec(ρ)[i·N + j] = ρ_ij`, the map `ρ ↦ X ρ Y†` has matrix
//! `X ⊗ conj(Y)`.

use serde::Serialize;

use crate::channels::{ChannelLabel, CptpReport, KrausChannel};
use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, Dimension};
use crate::linalg::{self, CMat, C64, ZERO};
use crate::maps::UnitaryOperator;

/// Default clustering radius for exact analytic degeneracies.
pub const ANALYTIC_CLUSTER_TOL: f64 = 1e-8;
/// Default clustering radius for near-degeneracy reports.
pub const REPORT_CLUSTER_TOL: f64 = 1e-6;

/// `N² x N²` matrix of a linear map on `N x N` operators.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperoperatorMatrix {
    dim: Dimension,
    mat: CMat,
}

impl SuperoperatorMatrix {
    pub fn new(dim: Dimension, mat: CMat) -> Result<Self> {
        let n2 = dim.get() * dim.get();
        if mat.nrows() != n2 || mat.ncols() != n2 {
            return Err(Error::DimensionMismatch {
                expected: n2,
                found: mat.nrows(),
            });
        }
        Ok(SuperoperatorMatrix { dim, mat })
    }

    pub fn identity(dim: Dimension) -> Self {
        SuperoperatorMatrix {
            dim,
            mat: linalg::identity(dim.get() * dim.get()),
        }
    }

    /// `U ⊗ conj(U)`.
    pub fn from_unitary(u: &UnitaryOperator) -> Self {
        SuperoperatorMatrix {
            dim: u.dim(),
            mat: linalg::kron(u.matrix(), &linalg::conj(u.matrix())),
        }
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    /// Matrix of `self ∘ other` (apply `other` first).
    pub fn after(&self, other: &SuperoperatorMatrix) -> Result<SuperoperatorMatrix> {
        self.check_dim(other.dim)?;
        Ok(SuperoperatorMatrix {
            dim: self.dim,
            mat: &self.mat * &other.mat,
        })
    }

    /// `self^k` by repeated squaring.
    pub fn power(&self, mut k: u64) -> SuperoperatorMatrix {
        let mut result: Option<CMat> = None;
        let mut base = self.mat.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => &r * &base,
                });
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        SuperoperatorMatrix {
            dim: self.dim,
            mat: result.unwrap_or_else(|| linalg::identity(self.mat.nrows())),
        }
    }

    fn check_dim(&self, other: Dimension) -> Result<()> {
        if other != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim.get(),
                found: other.get(),
            });
        }
        Ok(())
    }

    /// Action on a vectorized operator.
    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        linalg::matvec(&self.mat, v)
    }

    pub fn apply_operator(&self, x: &CMat) -> Result<CMat> {
        let n = self.dim.get();
        if x.nrows() != n || x.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: x.nrows(),
            });
        }
        let v = self.apply_vec(&linalg::vec_row_major(x));
        Ok(linalg::unvec_row_major(&v, n))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_trusted(self.apply_operator(rho.matrix())?))
    }

    /// Adjoint with respect to `⟨A, B⟩ = Tr A†B`, which is the conjugate
    /// transpose under row-major vectorization.
    pub fn hs_adjoint(&self) -> SuperoperatorMatrix {
        SuperoperatorMatrix {
            dim: self.dim,
            mat: linalg::adjoint(&self.mat),
        }
    }

    /// Choi matrix `J[(i,k),(j,l)] = S[(i,j),(k,l)]`.
    pub fn choi(&self) -> CMat {
        let n = self.dim.get();
        CMat::from_fn(n * n, n * n, |r, c| {
            let (i, k) = (r / n, r % n);
            let (j, l) = (c / n, c % n);
            self.mat[(i * n + j, k * n + l)]
        })
    }

    /// Trace-preservation defect `max |Σ_i S[(i,i),(k,l)] − δ_kl|` and the
    /// smallest eigenvalue of the Hermitian part of the Choi matrix.
    pub fn validate_cptp(&self) -> Result<CptpReport> {
        let n = self.dim.get();
        let mut tp = 0.0f64;
        for k in 0..n {
            for l in 0..n {
                let s: C64 = (0..n).map(|i| self.mat[(i * n + i, k * n + l)]).sum();
                let target = if k == l { 1.0 } else { 0.0 };
                tp = tp.max((s - C64::new(target, 0.0)).norm());
            }
        }
        let choi = linalg::hermitian_part(&self.choi());
        let min = linalg::hermitian_eigenvalues(&choi)?[0];
        Ok(CptpReport::from_parts(tp, min))
    }
}

/// `Σ_μ M_μ ⊗ conj(M_μ)`.
///
/// Sparse Kraus lists (chords, matrix units) are accumulated entry by
/// entry; dense lists go through one `X Xᴴ` product.
pub fn to_matrix(channel: &KrausChannel) -> SuperoperatorMatrix {
    let n = channel.dim().get();
    let ops = channel.kraus_ops();
    let nonzeros: Vec<Vec<(usize, usize, C64)>> = ops
        .iter()
        .map(|m| {
            let mut nz = Vec::new();
            for i in 0..n {
                for k in 0..n {
                    let v = m[(i, k)];
                    if v != ZERO {
                        nz.push((i, k, v));
                    }
                }
            }
            nz
        })
        .collect();
    let sparse_cost: usize = nonzeros.iter().map(|nz| nz.len() * nz.len()).sum();
    let dense_cost = n.pow(4) * ops.len();
    let mat = if sparse_cost * 16 <= dense_cost {
        let mut s = linalg::zeros(n * n, n * n);
        for nz in &nonzeros {
            for &(i, k, a) in nz {
                for &(j, l, b) in nz {
                    s[(i * n + j, k * n + l)] += a * b.conj();
                }
            }
        }
        s
    } else {
        // G[(i,k),(j,l)] = Σ_μ M_μ[i,k] conj(M_μ[j,l]) is S with indices regrouped
        let x = CMat::from_fn(n * n, ops.len(), |r, mu| ops[mu][(r / n, r % n)]);
        let g = &x * linalg::adjoint(&x);
        CMat::from_fn(n * n, n * n, |r, c| {
            let (i, j) = (r / n, r % n);
            let (k, l) = (c / n, c % n);
            g[(i * n + k, j * n + l)]
        })
    };
    SuperoperatorMatrix {
        dim: channel.dim(),
        mat,
    }
}

/// Kraus list `{M_μ U}` of `$ ∘ U`.
pub fn compose(channel: &KrausChannel, u: &UnitaryOperator) -> Result<KrausChannel> {
    if channel.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: channel.dim().get(),
            found: u.dim().get(),
        });
    }
    let ops = channel.kraus_ops().iter().map(|m| m * u.matrix()).collect();
    let label = ChannelLabel::Composed {
        channel: Box::new(channel.label().clone()),
    };
    Ok(KrausChannel::from_trusted(channel.dim(), ops, label))
}

/// Superoperator of `$ ∘ U` as `S_$ · (U ⊗ conj U)`, which keeps the sparse
/// path of [`to_matrix`] for the channel factor.
pub fn composed_matrix(channel: &KrausChannel, u: &UnitaryOperator) -> Result<SuperoperatorMatrix> {
    to_matrix(channel).after(&SuperoperatorMatrix::from_unitary(u))
}

/// A group of eigenvalues linked at the clustering radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    /// Mean of the members.
    pub representative: C64,
    pub multiplicity: usize,
    /// Indices into the sorted eigenvalue list.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    /// Sorted by descending modulus, then ascending phase in `(−π, π]`.
    pub eigenvalues: Vec<C64>,
    pub clusters: Vec<Cluster>,
    /// `cluster_of[i]` is the cluster id of `eigenvalues[i]`.
    pub cluster_of: Vec<usize>,
    pub tol: f64,
}

impl SpectrumReport {
    /// Total multiplicity of clusters whose representative lies within `tol`
    /// of `z`.
    pub fn multiplicity_near(&self, z: C64, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|e| (**e - z).norm() <= tol).count()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.first().map_or(0.0, |z| z.norm())
    }

    pub fn max_multiplicity(&self) -> usize {
        self.clusters.iter().map(|c| c.multiplicity).max().unwrap_or(0)
    }
}

/// Descending modulus, then ascending phase.
pub fn sort_eigenvalues(eigs: &mut [C64]) {
    eigs.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then_with(|| a.arg().total_cmp(&b.arg()))
    });
}

/// Single-linkage clustering at radius `tol`. Cluster ids follow the first
/// appearance of a member in `eigs`. Returns the clusters and the cluster
/// id of every input.
pub fn cluster_eigenvalues(eigs: &[C64], tol: f64) -> (Vec<Cluster>, Vec<usize>) {
    let n = eigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    // sweep in order of real part so only a window of neighbours is compared
    let mut by_re: Vec<usize> = (0..n).collect();
    by_re.sort_by(|&a, &b| eigs[a].re.total_cmp(&eigs[b].re).then(a.cmp(&b)));
    for (pos, &a) in by_re.iter().enumerate() {
        for &b in &by_re[pos + 1..] {
            if eigs[b].re - eigs[a].re > tol {
                break;
            }
            if (eigs[a] - eigs[b]).norm() <= tol {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut id_of_root = vec![usize::MAX; n];
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut assignment = vec![0; n];
    for (i, slot) in assignment.iter_mut().enumerate() {
        let r = find(&mut parent, i);
        if id_of_root[r] == usize::MAX {
            id_of_root[r] = clusters.len();
            clusters.push(Cluster {
                representative: ZERO,
                multiplicity: 0,
                members: Vec::new(),
            });
        }
        let id = id_of_root[r];
        *slot = id;
        clusters[id].members.push(i);
    }
    for c in &mut clusters {
        c.multiplicity = c.members.len();
        let sum: C64 = c.members.iter().map(|&i| eigs[i]).sum();
        c.representative = sum / c.multiplicity as f64;
    }
    (clusters, assignment)
}

/// All eigenvalues of `mat`, sorted and clustered at radius `tol`.
pub fn spectrum(mat: &SuperoperatorMatrix, tol: f64) -> Result<SpectrumReport> {
    spectrum_of(&mat.mat, tol)
}

pub fn spectrum_of(mat: &CMat, tol: f64) -> Result<SpectrumReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidState(format!("cluster tolerance {tol} must be positive")));
    }
    let mut eigenvalues = linalg::eigenvalues(mat)?;
    if eigenvalues.iter().any(|z| !z.is_finite()) {
        return Err(Error::EigenSolver);
    }
    sort_eigenvalues(&mut eigenvalues);
    let (clusters, cluster_of) = cluster_eigenvalues(&eigenvalues, tol);
    Ok(SpectrumReport {
        eigenvalues,
        clusters,
        cluster_of,
        tol,
    })
}
