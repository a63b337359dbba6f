//! Seeded random operators for tests, sweeps and the `pdc-rand` channel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hilbert::{Dimension, DensityMatrix};
use crate::linalg::{self, CMat, C64};
use crate::maps::UnitaryOperator;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ginibre<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> CMat {
    CMat::from_fn(n, m, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

/// Haar-distributed unitary from Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(dim: Dimension, rng: &mut R) -> UnitaryOperator {
    let n = dim.get();
    let mut g = ginibre(n, n, rng);
    for j in 0..n {
        // two passes keep the columns orthogonal to roundoff
        for _ in 0..2 {
            for k in 0..j {
                let proj: C64 = (0..n).map(|i| g[(i, k)].conj() * g[(i, j)]).sum();
                for i in 0..n {
                    let v = g[(i, k)];
                    g[(i, j)] -= proj * v;
                }
            }
        }
        let norm = (0..n).map(|i| g[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            g[(i, j)] /= norm;
        }
    }
    UnitaryOperator::from_trusted(g)
}

/// Full-rank mixed state `A A† / Tr(A A†)` with `A` Ginibre.
pub fn random_density<R: Rng + ?Sized>(dim: Dimension, rng: &mut R) -> DensityMatrix {
    let n = dim.get();
    let a = ginibre(n, n, rng);
    let rho = &a * linalg::adjoint(&a);
    let tr = linalg::trace(&rho).re;
    DensityMatrix::from_trusted(linalg::scale(&rho, C64::new(1.0 / tr, 0.0)))
}

/// Random pure state.
pub fn random_pure<R: Rng + ?Sized>(dim: Dimension, rng: &mut R) -> DensityMatrix {
    let g = ginibre(dim.get(), 1, rng);
    let amps: Vec<C64> = (0..dim.get()).map(|i| g[(i, 0)]).collect();
    crate::hilbert::StateVector::normalized(amps)
        .expect("gaussian vector is nonzero")
        .projector()
}

/// Random Hermitian operator with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(dim: Dimension, rng: &mut R) -> CMat {
    linalg::hermitian_part(&ginibre(dim.get(), dim.get(), rng))
}

/// Matrix with independent standard-normal complex entries.
pub fn random_operator<R: Rng + ?Sized>(dim: Dimension, rng: &mut R) -> CMat {
    ginibre(dim.get(), dim.get(), rng)
}
