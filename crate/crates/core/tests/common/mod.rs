//! Oracles shared by the integration tests. Everything here is computed
//! from first principles (explicit matrices, brute-force enumeration) and
//! does not reuse the library's shortcuts.

#![allow(dead_code)]

use torusnoise::linalg::{self, CMat, C64};
use torusnoise::{translation_operator, ChordIndex, Dimension};

/// Chord points solving `n2 q − n1 p ≡ n3 (mod N)` by enumeration.
pub fn brute_force_line(n1: i64, n2: i64, n3: i64, n: usize) -> Vec<(usize, usize)> {
    let ni = n as i64;
    let mut pts = Vec::new();
    for q in 0..ni {
        for p in 0..ni {
            if (n2 * q - n1 * p - n3).rem_euclid(ni) == 0 {
                pts.push((q as usize, p as usize));
            }
        }
    }
    pts
}

/// `ω` with `T_α T_β T_α† = ω T_β`, read off the matrices.
pub fn conjugation_phase(alpha: (usize, usize), beta: (usize, usize), dim: Dimension) -> C64 {
    let ta = translation_operator(ChordIndex::new(alpha.0 as i64, alpha.1 as i64, dim), dim);
    let tb = translation_operator(ChordIndex::new(beta.0 as i64, beta.1 as i64, dim), dim);
    let conj = ta.matrix() * tb.matrix() * linalg::adjoint(ta.matrix());
    let tbm = tb.matrix();
    for i in 0..tbm.nrows() {
        for j in 0..tbm.ncols() {
            if tbm[(i, j)].norm() > 0.5 {
                return conj[(i, j)] / tbm[(i, j)];
            }
        }
    }
    unreachable!("translation operators are monomial")
}

/// Eigenvalues `(1−ε) + (ε/R) Σ_{α∈L} ω(α, β)`, one per chord `β`, of the
/// channel `(1−ε)ρ + (ε/R) Σ_{α∈L} T_α ρ T_α†`.
pub fn chord_channel_spectrum(points: &[(usize, usize)], eps: f64, dim: Dimension) -> Vec<C64> {
    let n = dim.get();
    let r = points.len() as f64;
    let mut out = Vec::with_capacity(n * n);
    for bq in 0..n {
        for bp in 0..n {
            let s: C64 = points
                .iter()
                .map(|&a| conjugation_phase(a, (bq, bp), dim))
                .sum();
            out.push(C64::new(1.0 - eps, 0.0) + s * (eps / r));
        }
    }
    out
}

/// Greedy nearest matching of two multisets; returns the worst matched
/// distance, or infinity when the sizes differ.
pub fn multiset_distance(expected: &[C64], actual: &[C64]) -> f64 {
    if expected.len() != actual.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; actual.len()];
    let mut worst = 0.0f64;
    for e in expected {
        let mut best = None;
        let mut best_d = f64::INFINITY;
        for (j, a) in actual.iter().enumerate() {
            if !used[j] {
                let d = (a - e).norm();
                if d < best_d {
                    best_d = d;
                    best = Some(j);
                }
            }
        }
        used[best.expect("sizes agree")] = true;
        worst = worst.max(best_d);
    }
    worst
}

/// Textbook Grover iteration on a state vector: phase flip on `marked`,
/// then inversion about the mean. Returns `p_s(0..=steps)`.
pub fn grover_reference(n: usize, marked: usize, steps: usize) -> Vec<f64> {
    let mut psi = vec![1.0 / (n as f64).sqrt(); n];
    let mut out = vec![psi[marked] * psi[marked]];
    for _ in 0..steps {
        psi[marked] = -psi[marked];
        let mean = psi.iter().sum::<f64>() / n as f64;
        for x in psi.iter_mut() {
            *x = 2.0 * mean - *x;
        }
        out.push(psi[marked] * psi[marked]);
    }
    out
}

/// `−ln Tr ρ²` from the matrix entries.
pub fn entropy_of(m: &CMat) -> f64 {
    let mut p = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            p += m[(i, j)].norm_sqr();
        }
    }
    -p.ln()
}

/// Largest resident set size of this process in bytes, from procfs.
pub fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}
