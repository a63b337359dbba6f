//! Discrete phase space on the `N x N` torus: chord (translation)
//! operators, lines of chord points and the Wigner function on the
//! doubled `2N x 2N` grid.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, Dimension};
use crate::linalg::{self, CMat, C64, ZERO};
use crate::maps::UnitaryOperator;

/// A chord `(q, p)` of the discrete torus, components reduced mod `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChordIndex {
    pub q: usize,
    pub p: usize,
}

impl ChordIndex {
    pub fn new(q: i64, p: i64, dim: Dimension) -> Self {
        let n = dim.get() as i64;
        ChordIndex {
            q: q.rem_euclid(n) as usize,
            p: p.rem_euclid(n) as usize,
        }
    }

    pub fn neg(self, dim: Dimension) -> Self {
        ChordIndex::new(-(self.q as i64), -(self.p as i64), dim)
    }

    pub fn add(self, other: ChordIndex, dim: Dimension) -> Self {
        ChordIndex::new(
            (self.q + other.q) as i64,
            (self.p + other.p) as i64,
            dim,
        )
    }

    /// All `N²` chords in `(q, p)` lexicographic order.
    pub fn all(dim: Dimension) -> impl Iterator<Item = ChordIndex> {
        let n = dim.get();
        (0..n).flat_map(move |q| (0..n).map(move |p| ChordIndex { q, p }))
    }
}

/// Translation operator `T_(q,p) = exp(iπqp/N) U^q V^p` with
/// `U|n⟩ = |n+1⟩` and `V|n⟩ = exp(2πin/N)|n⟩`.
///
/// With components taken in `[0, N)`, `T_α†` equals `T_{-α}` up to the sign
/// `(-1)^{N+q+p}`; the sign drops out of every `T ⊙ T†` superoperator.
pub fn translation_operator(alpha: ChordIndex, dim: Dimension) -> UnitaryOperator {
    UnitaryOperator::from_trusted(translation_matrix(alpha, dim))
}

pub(crate) fn translation_matrix(alpha: ChordIndex, dim: Dimension) -> CMat {
    let n = dim.get();
    let (q, p) = (alpha.q, alpha.p);
    let mut t = linalg::zeros(n, n);
    for col in 0..n {
        // exp(iπqp/N) exp(2πi p col/N) = exp(2πi (qp + 2 p col) / 2N)
        let k = (q * p + 2 * p * col) as i64;
        t[((col + q) % n, col)] = linalg::root_of_unity(k, 2 * n as i64);
    }
    t
}

/// Phase `ω` with `T_α T_β T_α† = ω T_β`, namely
/// `exp(2πi (p_α q_β − q_α p_β) / N)`.
pub fn chord_commutation_phase(alpha: ChordIndex, beta: ChordIndex, dim: Dimension) -> C64 {
    let n = dim.get() as i64;
    let k = alpha.p as i64 * beta.q as i64 - alpha.q as i64 * beta.p as i64;
    linalg::root_of_unity(k, n)
}

/// Direction `(n1, n2)` and offset `n3` of a line of chord points: the
/// solutions of `n2 q − n1 p ≡ n3 (mod N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineSpec {
    pub n1: i64,
    pub n2: i64,
    pub n3: i64,
}

impl LineSpec {
    pub fn new(n1: i64, n2: i64, n3: i64) -> Self {
        LineSpec { n1, n2, n3 }
    }

    fn invalid(&self, dim: Dimension, reason: &'static str) -> Error {
        Error::InvalidLineSpec {
            n1: self.n1,
            n2: self.n2,
            n3: self.n3,
            dim: dim.get(),
            reason,
        }
    }
}

impl fmt::Display for LineSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.n1, self.n2, self.n3)
    }
}

impl FromStr for LineSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::parse("line", s, "expected n1,n2,n3"));
        }
        let num = |x: &str| {
            x.parse::<i64>()
                .map_err(|e| Error::parse("line", s, e.to_string()))
        };
        Ok(LineSpec::new(num(parts[0])?, num(parts[1])?, num(parts[2])?))
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Chord points on the line, ascending in `(q, p)`. The line has
/// `N · gcd(n1, n2, N)` points when it is solvable.
pub fn line_points(spec: LineSpec, dim: Dimension) -> Result<Vec<ChordIndex>> {
    let n = dim.get() as i64;
    let (a, b) = (spec.n1.rem_euclid(n), spec.n2.rem_euclid(n));
    if a == 0 && b == 0 {
        return Err(spec.invalid(dim, "direction vanishes mod N"));
    }
    let g = gcd(gcd(a, b), n);
    if spec.n3.rem_euclid(g) != 0 {
        return Err(spec.invalid(dim, "offset not divisible by gcd(n1, n2, N)"));
    }
    let target = spec.n3.rem_euclid(n);
    let pts: Vec<ChordIndex> = ChordIndex::all(dim)
        .filter(|c| (b * c.q as i64 - a * c.p as i64).rem_euclid(n) == target)
        .collect();
    debug_assert_eq!(pts.len() as i64, n * g);
    Ok(pts)
}

/// Normalization convention of a [`WignerGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WignerNormalization {
    /// `W(a,b) = (1/2N) Tr[ρ A(a,b)]`; the plain sum over all `4N²` grid
    /// points is 1 and `Σ_b W(2n, b) = ρ_nn`.
    UnitSum,
}

/// Discrete Wigner function on the doubled grid, row-major with the
/// position index `a` selecting the row.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    dim: Dimension,
    values: Vec<f64>,
    normalization: WignerNormalization,
}

impl WignerGrid {
    pub fn dim(&self) -> Dimension {
        self.dim
    }

    /// Side of the grid, `2N`.
    pub fn side(&self) -> usize {
        2 * self.dim.get()
    }

    pub fn normalization(&self) -> WignerNormalization {
        self.normalization
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.side() + b]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.side())
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `Σ_b W(2n, b)` for each `n`; equals the populations of ρ.
    pub fn position_marginal(&self) -> Vec<f64> {
        let s = self.side();
        (0..self.dim.get())
            .map(|n| self.values[2 * n * s..(2 * n + 1) * s].iter().sum())
            .collect()
    }

    /// Grid shifted cyclically: `out(a, b) = self(a − da, b − db)`.
    pub fn shifted(&self, da: usize, db: usize) -> WignerGrid {
        let s = self.side();
        let mut values = vec![0.0; s * s];
        for a in 0..s {
            for b in 0..s {
                values[((a + da) % s) * s + (b + db) % s] = self.values[a * s + b];
            }
        }
        WignerGrid {
            values,
            ..self.clone()
        }
    }

    pub fn max_abs_diff(&self, other: &WignerGrid) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    /// Rebuilds a grid from row-major values, checking shape and
    /// normalization.
    pub fn from_values(dim: Dimension, values: Vec<f64>) -> Result<Self> {
        let s = 2 * dim.get();
        if values.len() != s * s {
            return Err(Error::DimensionMismatch {
                expected: s * s,
                found: values.len(),
            });
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDensityMatrix(format!(
                "wigner grid sums to {total}"
            )));
        }
        Ok(WignerGrid {
            dim,
            values,
            normalization: WignerNormalization::UnitSum,
        })
    }
}

/// Complex values of `(1/2N) Tr[ρ U^a R V^{-b}] exp(iπab/N)` on the doubled
/// grid. For Hermitian ρ the imaginary parts vanish up to roundoff.
pub fn wigner_values(rho: &CMat) -> Vec<C64> {
    let n = rho.nrows();
    let s = 2 * n;
    let m2 = s as i64;
    let roots: Vec<C64> = (0..m2).map(|k| linalg::root_of_unity(k, m2)).collect();
    let scale = 1.0 / s as f64;
    let mut out = Vec::with_capacity(s * s);
    for a in 0..s {
        for b in 0..s {
            let mut acc = ZERO;
            for k in 0..n {
                // ⟨k| ρ A(a,b) |k⟩ with A|k⟩ = e^{iπab/N} e^{-2πibk/N} |a−k⟩
                let col = (a + n - k % n) % n;
                let idx = ((a * b) as i64 - 2 * (b * k) as i64).rem_euclid(m2) as usize;
                acc += rho[(k, col)] * roots[idx];
            }
            out.push(acc * scale);
        }
    }
    out
}

pub fn wigner_function(rho: &DensityMatrix) -> WignerGrid {
    let values = wigner_values(rho.matrix()).into_iter().map(|z| z.re).collect();
    WignerGrid {
        dim: rho.dim(),
        values,
        normalization: WignerNormalization::UnitSum,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::position_state;
    use crate::random;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn shift(n: usize) -> CMat {
        CMat::from_fn(n, n, |r, c| if r == (c + 1) % n { linalg::ONE } else { ZERO })
    }

    fn clock(n: usize) -> CMat {
        CMat::from_fn(n, n, |r, c| {
            if r == c {
                linalg::root_of_unity(r as i64, n as i64)
            } else {
                ZERO
            }
        })
    }

    fn power(m: &CMat, k: usize) -> CMat {
        (0..k).fold(linalg::identity(m.nrows()), |acc, _| &acc * m)
    }

    #[test]
    fn translation_matches_shift_clock_product() {
        for n in [2usize, 3, 4, 5] {
            for alpha in ChordIndex::all(dim(n)) {
                let phase = C64::from_polar(
                    1.0,
                    std::f64::consts::PI * (alpha.q * alpha.p) as f64 / n as f64,
                );
                let reference = linalg::scale(&(&power(&shift(n), alpha.q) * &power(&clock(n), alpha.p)), phase);
                let t = translation_matrix(alpha, dim(n));
                assert!(linalg::max_abs_diff(&t, &reference) < 1e-13);
            }
        }
    }

    #[test]
    fn translation_small_cases() {
        let id = translation_matrix(ChordIndex { q: 0, p: 0 }, dim(5));
        assert!(linalg::max_abs_diff(&id, &linalg::identity(5)) < 1e-15);
        let flip = translation_matrix(ChordIndex { q: 1, p: 0 }, dim(2));
        assert_eq!(flip[(0, 1)], linalg::ONE);
        assert_eq!(flip[(1, 0)], linalg::ONE);
        assert_eq!(flip[(0, 0)], ZERO);
    }

    #[test]
    fn chords_are_orthogonal_and_unitary() {
        for n in 2..=8 {
            let d = dim(n);
            let ts: Vec<CMat> = ChordIndex::all(d).map(|a| translation_matrix(a, d)).collect();
            for (i, ta) in ts.iter().enumerate() {
                assert!(linalg::unitarity_defect(ta) < 1e-12);
                let ta_dag = linalg::adjoint(ta);
                for (j, tb) in ts.iter().enumerate() {
                    let ip = linalg::trace(&(&ta_dag * tb));
                    let expected = if i == j { n as f64 } else { 0.0 };
                    assert!((ip - C64::new(expected, 0.0)).norm() < 1e-11, "N={n} {i} {j}");
                }
            }
        }
    }

    #[test]
    fn group_law_up_to_phase() {
        for n in 2..=8 {
            let d = dim(n);
            for a in ChordIndex::all(d) {
                for b in ChordIndex::all(d) {
                    let prod = translation_matrix(a, d) * translation_matrix(b, d);
                    let sum = translation_matrix(a.add(b, d), d);
                    // phase read off from any nonzero entry of T_{α+β}
                    let col = 0;
                    let row = (0..n).find(|&r| sum[(r, col)].norm() > 0.5).unwrap();
                    let phase = prod[(row, col)] / sum[(row, col)];
                    assert!((phase.norm() - 1.0).abs() < 1e-12);
                    assert!(linalg::max_abs_diff(&prod, &linalg::scale(&sum, phase)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn adjoint_is_negated_chord_up_to_sign() {
        let d = dim(6);
        for a in ChordIndex::all(d) {
            let adj = linalg::adjoint(&translation_matrix(a, d));
            let neg = translation_matrix(a.neg(d), d);
            let plus = linalg::max_abs_diff(&adj, &neg);
            let minus = linalg::max_abs_diff(&adj, &linalg::scale(&neg, C64::new(-1.0, 0.0)));
            assert!(plus.min(minus) < 1e-13);
        }
    }

    #[test]
    fn commutation_phase_examples() {
        let d = dim(4);
        let zero = ChordIndex { q: 0, p: 0 };
        for b in ChordIndex::all(d) {
            assert!((chord_commutation_phase(zero, b, d) - linalg::ONE).norm() < 1e-15);
        }
        let a = ChordIndex { q: 1, p: 0 };
        let b = ChordIndex { q: 0, p: 1 };
        let w = chord_commutation_phase(a, b, d);
        // direct matrix check T_α T_β T_α† = ω T_β
        let ta = translation_matrix(a, d);
        let tb = translation_matrix(b, d);
        let lhs = &(&ta * &tb) * linalg::adjoint(&ta);
        assert!(linalg::max_abs_diff(&lhs, &linalg::scale(&tb, w)) < 1e-14);
        assert!((w - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn commutation_phase_matches_conjugation_exhaustively() {
        for n in [3usize, 4, 6] {
            let d = dim(n);
            for a in ChordIndex::all(d) {
                let ta = translation_matrix(a, d);
                let ta_dag = linalg::adjoint(&ta);
                for b in ChordIndex::all(d) {
                    let tb = translation_matrix(b, d);
                    let w = chord_commutation_phase(a, b, d);
                    let lhs = &(&ta * &tb) * &ta_dag;
                    assert!(linalg::max_abs_diff(&lhs, &linalg::scale(&tb, w)) < 1e-12);
                    let back = chord_commutation_phase(b, a, d);
                    assert!((w * back - linalg::ONE).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn named_lines() {
        let d = dim(4);
        let vertical = line_points(LineSpec::new(0, 1, 0), d).unwrap();
        let expected: Vec<ChordIndex> = (0..4).map(|p| ChordIndex { q: 0, p }).collect();
        assert_eq!(vertical, expected);
        let diag = line_points(LineSpec::new(1, 1, 0), d).unwrap();
        assert_eq!(diag, (0..4).map(|t| ChordIndex { q: t, p: t }).collect::<Vec<_>>());
        let anti = line_points(LineSpec::new(1, -1, 0), d).unwrap();
        let mut expected: Vec<ChordIndex> =
            (0..4).map(|t| ChordIndex::new(t, -t, d)).collect();
        expected.sort();
        assert_eq!(anti, expected);
    }

    #[test]
    fn line_cardinality_matches_gcd_rule() {
        for n in 2..=16usize {
            let d = dim(n);
            for n1 in 0..n as i64 {
                for n2 in 0..n as i64 {
                    if n1 == 0 && n2 == 0 {
                        continue;
                    }
                    let g = gcd(gcd(n1, n2), n as i64);
                    for n3 in 0..n as i64 {
                        let brute = ChordIndex::all(d)
                            .filter(|c| {
                                (n2 * c.q as i64 - n1 * c.p as i64 - n3).rem_euclid(n as i64) == 0
                            })
                            .count();
                        match line_points(LineSpec::new(n1, n2, n3), d) {
                            Ok(pts) => {
                                assert_eq!(pts.len(), brute);
                                assert_eq!(pts.len() as i64, n as i64 * g);
                            }
                            Err(_) => assert_eq!(brute, 0),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_lines_are_rejected() {
        let d = dim(4);
        assert!(line_points(LineSpec::new(4, 8, 0), d).is_err());
        // gcd(2, 0, 4) = 2 does not divide 1
        assert!(line_points(LineSpec::new(2, 0, 1), d).is_err());
        assert_eq!(line_points(LineSpec::new(2, 0, 2), d).unwrap().len(), 8);
    }

    #[test]
    fn line_spec_parses() {
        assert_eq!("1,-1,0".parse::<LineSpec>().unwrap(), LineSpec::new(1, -1, 0));
        assert!("1,2".parse::<LineSpec>().is_err());
    }

    #[test]
    fn wigner_of_maximally_mixed_is_sublattice_periodic() {
        for n in [4usize, 8] {
            let w = wigner_function(&DensityMatrix::maximally_mixed(dim(n)));
            assert!((w.total() - 1.0).abs() < 1e-12);
            let s = w.side();
            for a in 0..s {
                for b in 0..s {
                    assert!((w.get(a, b) - w.get((a + 2) % s, b)).abs() < 1e-14);
                    assert!((w.get(a, b) - w.get(a, (b + 2) % s)).abs() < 1e-14);
                }
            }
            assert!(w.get(1, 0).abs() < 1e-15);
        }
    }

    #[test]
    fn wigner_of_position_state_concentrates_on_column() {
        let d = dim(4);
        let n = 1;
        let w = wigner_function(&position_state(n, d).unwrap().projector());
        // brute force from the definition: row a = 2n carries 1/2N everywhere
        for b in 0..8 {
            assert!((w.get(2 * n, b) - 1.0 / 8.0).abs() < 1e-15);
        }
        let marginal = w.position_marginal();
        assert!((marginal[n] - 1.0).abs() < 1e-14);
        for (k, m) in marginal.iter().enumerate() {
            if k != n {
                assert!(m.abs() < 1e-14);
            }
        }
        // odd rows and the interference row a = 2n + N sum to zero
        for a in 0..8 {
            if a != 2 * n {
                let row: f64 = (0..8).map(|b| w.get(a, b)).sum();
                assert!(row.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn wigner_marginals_and_reality_for_random_states() {
        let mut rng = random::rng_from_seed(5);
        for n in [4usize, 8] {
            let rho = random::random_density(dim(n), &mut rng);
            let raw = wigner_values(rho.matrix());
            assert!(raw.iter().all(|z| z.im.abs() < 1e-10));
            let w = wigner_function(&rho);
            assert!((w.total() - 1.0).abs() < 1e-10);
            for (m, p) in w.position_marginal().iter().zip(rho.populations()) {
                assert!((m - p).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn wigner_translation_covariance() {
        let mut rng = random::rng_from_seed(9);
        let d = dim(6);
        let rho = random::random_density(d, &mut rng);
        let w = wigner_function(&rho);
        for alpha in ChordIndex::all(d) {
            let t = translation_matrix(alpha, d);
            let moved = &(&t * rho.matrix()) * linalg::adjoint(&t);
            let wm = wigner_function(&DensityMatrix::from_trusted(moved));
            let expected = w.shifted(2 * alpha.q, 2 * alpha.p);
            assert!(wm.max_abs_diff(&expected) < 1e-10, "alpha={alpha:?}");
        }
    }

    #[test]
    fn wigner_is_linear() {
        let mut rng = random::rng_from_seed(2);
        let d = dim(4);
        let a = random::random_density(d, &mut rng);
        let b = random::random_density(d, &mut rng);
        let mix = CMat::from_fn(4, 4, |i, j| a.get(i, j) * 0.3 + b.get(i, j) * 0.7);
        let wa = wigner_function(&a);
        let wb = wigner_function(&b);
        let wm = wigner_function(&DensityMatrix::from_trusted(mix));
        for k in 0..wm.values().len() {
            assert!((wm.values()[k] - 0.3 * wa.values()[k] - 0.7 * wb.values()[k]).abs() < 1e-14);
        }
    }
}
