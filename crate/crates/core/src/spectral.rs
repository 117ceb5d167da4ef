//! Second eigenvalue of the normalized Laplacian `I - A/d` and the spectral
//! bounds built on it.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::Seed;
use crate::graph::Graph;

/// Graphs up to this many vertices use the dense solver.
pub const DENSE_MAX_N: usize = 2000;
pub const DENSE_TOLERANCE: f64 = 1e-9;
pub const ITERATIVE_TOLERANCE: f64 = 1e-6;

const LANCZOS_MAX_STEPS: usize = 400;
const LANCZOS_START_SEED: Seed = Seed(0x05ee_d1a2_c705);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralMethod {
    Dense,
    Iterative,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSummary {
    pub lambda2: f64,
    pub method: SpectralMethod,
    /// `||M y - θ y||` of the returned Ritz pair; zero for the dense path.
    pub residual: f64,
    pub tolerance: f64,
    /// Disconnected input: `lambda2` is reported as 0.
    pub disconnected: bool,
}

/// λ₂ of `I - A/d`, choosing the solver by size.
pub fn lambda2(g: &Graph) -> Result<SpectralSummary> {
    let method = if g.n() <= DENSE_MAX_N {
        SpectralMethod::Dense
    } else {
        SpectralMethod::Iterative
    };
    lambda2_with(g, method)
}

pub fn lambda2_with(g: &Graph, method: SpectralMethod) -> Result<SpectralSummary> {
    let d = g.degree().ok_or(Error::NotRegular)? as f64;
    let tolerance = match method {
        SpectralMethod::Dense => DENSE_TOLERANCE,
        SpectralMethod::Iterative => ITERATIVE_TOLERANCE,
    };
    if g.n() < 2 || !g.is_connected() {
        return Ok(SpectralSummary {
            lambda2: 0.0,
            method,
            residual: 0.0,
            tolerance,
            disconnected: true,
        });
    }
    let (mu2, residual) = match method {
        SpectralMethod::Dense => {
            let mut eig = adjacency_over_degree(g, d).symmetric_eigenvalues();
            eig.as_mut_slice().sort_by(|a, b| b.total_cmp(a));
            (eig[1], 0.0)
        }
        SpectralMethod::Iterative => {
            let pair = lanczos_top_nontrivial(g, d)?;
            (pair.value, pair.residual)
        }
    };
    Ok(SpectralSummary {
        lambda2: (1.0 - mu2).clamp(0.0, 2.0),
        method,
        residual,
        tolerance,
        disconnected: false,
    })
}

fn adjacency_over_degree(g: &Graph, d: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(g.n(), g.n());
    for &(u, v) in g.edges() {
        m[(u, v)] = 1.0 / d;
        m[(v, u)] = 1.0 / d;
    }
    m
}

/// λ₂ together with a unit eigenvector orthogonal to the constants.
pub fn fiedler_vector(g: &Graph) -> Result<(f64, Vec<f64>)> {
    let d = g.degree().ok_or(Error::NotRegular)? as f64;
    if g.n() < 2 || !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.n() <= 500 {
        let eig = SymmetricEigen::new(adjacency_over_degree(g, d));
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let i = order[1];
        let mut vec: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
        // The top eigenspace may be degenerate; make the vector orthogonal
        // to the constants explicitly.
        project_out_constant(&mut vec);
        normalize(&mut vec);
        Ok((1.0 - eig.eigenvalues[i], vec))
    } else {
        let pair = lanczos_top_nontrivial(g, d)?;
        Ok((1.0 - pair.value, pair.vector))
    }
}

struct RitzPair {
    value: f64,
    vector: Vec<f64>,
    residual: f64,
}

/// Applies `A/d`.
fn apply(g: &Graph, d: f64, x: &[f64], out: &mut [f64]) {
    out.par_iter_mut().enumerate().for_each(|(v, o)| {
        *o = g.neighbors(v).iter().map(|&w| x[w]).sum::<f64>() / d;
    });
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: &mut [f64]) {
    let n = norm(a);
    if n > 0.0 {
        a.iter_mut().for_each(|x| *x /= n);
    }
}

fn project_out_constant(a: &mut [f64]) {
    let mean = a.iter().sum::<f64>() / a.len() as f64;
    a.iter_mut().for_each(|x| *x -= mean);
}

/// Largest eigenvalue of `A/d` on the complement of the constant vector, by
/// Lanczos with full reorthogonalization. Every iterate is projected off the
/// constants, which removes the trivial eigenvalue 1.
fn lanczos_top_nontrivial(g: &Graph, d: f64) -> Result<RitzPair> {
    let n = g.n();
    let mut rng = LANCZOS_START_SEED.rng();
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    project_out_constant(&mut q);
    normalize(&mut q);

    let steps = LANCZOS_MAX_STEPS.min(n - 1);
    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut best: Option<RitzPair> = None;

    for j in 0..steps {
        apply(g, d, &basis[j], &mut w);
        project_out_constant(&mut w);
        let a = dot(&basis[j], &w);
        alpha.push(a);
        for (x, qj) in w.iter_mut().zip(&basis[j]) {
            *x -= a * qj;
        }
        if j > 0 {
            let b = beta[j - 1];
            for (x, qp) in w.iter_mut().zip(&basis[j - 1]) {
                *x -= b * qp;
            }
        }
        for _ in 0..2 {
            for qi in &basis {
                let c = dot(qi, &w);
                for (x, y) in w.iter_mut().zip(qi) {
                    *x -= c * y;
                }
            }
        }
        let b = norm(&w);

        let exhausted = b < 1e-13 || j + 1 == steps;
        if j % 10 != 9 && !exhausted {
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
            continue;
        }
        let (theta, s) = top_of_tridiagonal(&alpha, &beta);
        let estimate = b * s[s.len() - 1].abs();
        if estimate < ITERATIVE_TOLERANCE * 1e-3 || exhausted {
            let mut y = vec![0.0; n];
            for (qi, si) in basis.iter().zip(s.iter()) {
                for (yk, qk) in y.iter_mut().zip(qi) {
                    *yk += si * qk;
                }
            }
            normalize(&mut y);
            let mut my = vec![0.0; n];
            apply(g, d, &y, &mut my);
            let residual = my
                .iter()
                .zip(&y)
                .map(|(a, b)| (a - theta * b).powi(2))
                .sum::<f64>()
                .sqrt();
            let pair = RitzPair {
                value: theta,
                vector: y,
                residual,
            };
            if residual <= ITERATIVE_TOLERANCE || exhausted {
                best = Some(pair);
                break;
            }
        }
        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }

    let pair = best.expect("loop always produces a Ritz pair on its last step");
    if pair.residual > ITERATIVE_TOLERANCE {
        return Err(Error::NoConvergence {
            residual: pair.residual,
        });
    }
    Ok(pair)
}

fn top_of_tridiagonal(alpha: &[f64], beta: &[f64]) -> (f64, DVector<f64>) {
    let k = alpha.len();
    let mut t = DMatrix::zeros(k, k);
    for i in 0..k {
        t[(i, i)] = alpha[i];
        if i + 1 < k {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let i = eig.eigenvalues.imax();
    (eig.eigenvalues[i], eig.eigenvectors.column(i).into_owned())
}

/// `(d λ₂ / 2, sqrt(2 d λ₂))`.
pub fn cheeger_sandwich(d: usize, lambda2: f64) -> (f64, f64) {
    let d = d as f64;
    (d * lambda2 / 2.0, (2.0 * d * lambda2).sqrt())
}

/// `d^k / n + d^k |1 - λ₂|^k`, the walk-operator bound on cycles of length
/// `k` through a vertex.
pub fn cycle_count_bound(d: usize, n: usize, lambda2: f64, k: usize) -> f64 {
    let dk = (d as f64).powi(k as i32);
    dk / n as f64 + dk * (1.0 - lambda2).abs().powi(k as i32)
}

/// `(A^k)_{vv}` by `k` sparse applications of the adjacency operator.
pub fn closed_walks_through(g: &Graph, v: usize, k: usize) -> u128 {
    let mut x = vec![0u128; g.n()];
    x[v] = 1;
    let mut next = vec![0u128; g.n()];
    for _ in 0..k {
        next.par_iter_mut().enumerate().for_each(|(u, o)| {
            *o = g.neighbors(u).iter().map(|&w| x[w]).sum();
        });
        std::mem::swap(&mut x, &mut next);
    }
    x[v]
}

/// True when `λ₂ >= 1 - 2 sqrt(d-1) / d`.
pub fn is_ramanujan_or_better(d: usize, lambda2: f64) -> bool {
    lambda2 >= ramanujan_threshold(d)
}

pub fn ramanujan_threshold(d: usize) -> f64 {
    1.0 - 2.0 * ((d as f64) - 1.0).sqrt() / d as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{fixture, random_regular, Fixture};

    #[test]
    fn small_spectra() {
        let k4 = lambda2(&fixture(Fixture::Complete(4))).unwrap();
        assert!((k4.lambda2 - 4.0 / 3.0).abs() < 1e-9);
        let c4 = lambda2(&fixture(Fixture::Cycle(4))).unwrap();
        assert!((c4.lambda2 - 1.0).abs() < 1e-9);
        let p = lambda2(&fixture(Fixture::Petersen)).unwrap();
        assert!((p.lambda2 - 2.0 / 3.0).abs() < 1e-9);
        assert_eq!(p.method, SpectralMethod::Dense);
    }

    #[test]
    fn iterative_matches_dense() {
        let g = random_regular(200, 4, Seed(9)).unwrap();
        let a = lambda2_with(&g, SpectralMethod::Dense).unwrap();
        let b = lambda2_with(&g, SpectralMethod::Iterative).unwrap();
        assert!((a.lambda2 - b.lambda2).abs() < 1e-6, "{a:?} {b:?}");
        assert!(b.residual <= ITERATIVE_TOLERANCE);
    }

    #[test]
    fn disconnected_is_flagged() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let s = lambda2(&g).unwrap();
        assert!(s.disconnected);
        assert_eq!(s.lambda2, 0.0);
        assert!(matches!(fiedler_vector(&g), Err(Error::Disconnected)));
    }

    #[test]
    fn non_regular_rejected() {
        let g = fixture(Fixture::Path(4));
        assert!(matches!(lambda2(&g), Err(Error::NotRegular)));
    }

    #[test]
    fn sandwich_values() {
        let (lo, hi) = cheeger_sandwich(3, 2.0 / 3.0);
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 2.0).abs() < 1e-12);
        assert_eq!(cheeger_sandwich(5, 0.0), (0.0, 0.0));
        let (lo, hi) = cheeger_sandwich(4, 1.25);
        assert!((lo - 2.5).abs() < 1e-12 && (hi - 10f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cycle_bound_values() {
        assert!((cycle_count_bound(3, 10, 2.0 / 3.0, 5) - 25.3).abs() < 1e-9);
        assert!((cycle_count_bound(3, 4, 4.0 / 3.0, 3) - 7.75).abs() < 1e-9);
        assert!((cycle_count_bound(4, 8, 1.0, 3) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn closed_walk_counts() {
        assert_eq!(closed_walks_through(&fixture(Fixture::Cycle(4)), 0, 2), 2);
        assert_eq!(
            closed_walks_through(&fixture(Fixture::Complete(4)), 1, 3),
            6
        );
        assert_eq!(closed_walks_through(&fixture(Fixture::Petersen), 3, 1), 0);
    }

    #[test]
    fn ramanujan_flag() {
        // Petersen: 2/3 >= 1 - 2 sqrt(2)/3 ≈ 0.057.
        assert!(is_ramanujan_or_better(3, 2.0 / 3.0));
        assert!(!is_ramanujan_or_better(3, 0.01));
    }
}
