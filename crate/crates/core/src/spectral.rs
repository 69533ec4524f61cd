//! Adjacency spectra of regular graphs and `(n, d, λ)` certification.
//!
//! Up to [`DENSE_LIMIT`] vertices the full spectrum is computed and checked
//! against the trace identities. Above that, the top eigenpair of a
//! connected `d`-regular graph is known (`d`, uniform vector), so Lanczos
//! runs on the orthogonal complement of the uniform vector and reads off
//! both ends of the remaining spectrum.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAX_SPECTRAL_VERTICES: usize = 2100;

/// Largest graph diagonalised densely under [`Method::Auto`].
pub const DENSE_LIMIT: usize = 600;

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    Dense,
    Lanczos,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub n: usize,
    pub d: Option<usize>,
    pub lambda_max: f64,
    pub lambda_second_abs: f64,
    pub tolerance: f64,
}

fn check_input(g: &Graph) -> Result<usize> {
    if g.n() > MAX_SPECTRAL_VERTICES {
        return Err(Error::cap(
            "spectral vertex count",
            MAX_SPECTRAL_VERTICES as u64,
            g.n() as u64,
        ));
    }
    let d = g.regular_degree().ok_or(Error::NotRegular)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(d)
}

/// All adjacency eigenvalues in ascending order.
pub fn adjacency_spectrum(g: &Graph) -> Result<Vec<f64>> {
    let n = g.n();
    if n > DENSE_LIMIT {
        return Err(Error::cap(
            "dense eigensolver vertex count",
            DENSE_LIMIT as u64,
            n as u64,
        ));
    }
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    let mut values: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);

    let trace: f64 = values.iter().sum();
    let frobenius: f64 = values.iter().map(|x| x * x).sum();
    let edges2 = 2.0 * g.edge_count() as f64;
    if trace.abs() > 1e-7 * (n as f64).max(1.0)
        || (frobenius - edges2).abs() > 1e-7 * edges2.max(1.0)
    {
        return Err(Error::NoConvergence(format!(
            "trace identities fail: sum {trace:e}, sum of squares {frobenius} vs {edges2}"
        )));
    }
    Ok(values)
}

/// `λ`: the largest absolute eigenvalue other than one copy of `d`.
pub fn second_largest_abs_eigenvalue(g: &Graph, tol: f64) -> Result<f64> {
    Ok(ndl_certify(g, tol)?.lambda_second_abs)
}

pub fn ndl_certify(g: &Graph, tol: f64) -> Result<SpectralReport> {
    ndl_certify_with(g, tol, Method::Auto)
}

pub fn ndl_certify_with(g: &Graph, tol: f64, method: Method) -> Result<SpectralReport> {
    let d = check_input(g)?;
    let n = g.n();
    let dense = match method {
        Method::Auto => n <= DENSE_LIMIT,
        Method::Dense => true,
        Method::Lanczos => false,
    };
    let (lambda_max, lambda_second_abs) = if n <= 1 {
        (0.0, 0.0)
    } else if dense {
        let values = adjacency_spectrum(g)?;
        let top = values[n - 1];
        let rest = values[0].abs().max(values[n - 2].abs());
        (top, rest)
    } else {
        let (lo, hi) = deflated_extremes(g, d, tol)?;
        (d as f64, lo.abs().max(hi.abs()))
    };
    Ok(SpectralReport {
        n,
        d: Some(d),
        lambda_max,
        lambda_second_abs,
        tolerance: tol,
    })
}

fn project_out_uniform(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Smallest and largest eigenvalue of `A` restricted to `1^⊥`.
fn deflated_extremes(g: &Graph, d: usize, tol: f64) -> Result<(f64, f64)> {
    let n = g.n();
    let max_steps = n - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    project_out_uniform(&mut q);
    let s = norm(&q);
    q.iter_mut().for_each(|x| *x /= s);

    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    // A breakdown below this means the Krylov space is invariant.
    let breakdown = 1e-10 * d.max(1) as f64;

    loop {
        let j = basis.len() - 1;
        let qj = &basis[j];
        let mut w: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|u| g.neighbors(u).iter().map(|&v| qj[v]).sum())
            .collect();
        project_out_uniform(&mut w);
        alphas.push(dot(&w, qj));
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let beta = norm(&w);

        let steps = alphas.len();
        let invariant = beta < breakdown || steps == max_steps;
        if invariant || steps.is_multiple_of(8) {
            let t = DMatrix::from_fn(steps, steps, |r, c| {
                if r == c {
                    alphas[r]
                } else if r + 1 == c {
                    betas[r]
                } else if c + 1 == r {
                    betas[c]
                } else {
                    0.0
                }
            });
            let eig = SymmetricEigen::new(t);
            let (lo_i, hi_i) = extreme_indices(&eig.eigenvalues);
            let residual = |i: usize| beta * eig.eigenvectors[(steps - 1, i)].abs();
            if invariant || (residual(lo_i) <= tol && residual(hi_i) <= tol) {
                return Ok((eig.eigenvalues[lo_i], eig.eigenvalues[hi_i]));
            }
        }
        if steps >= max_steps {
            return Err(Error::NoConvergence(format!("Lanczos after {steps} steps")));
        }
        betas.push(beta);
        w.iter_mut().for_each(|x| *x /= beta);
        basis.push(w);
    }
}

fn extreme_indices(values: &DVector<f64>) -> (usize, usize) {
    let mut lo = 0;
    let mut hi = 0;
    for (i, &v) in values.iter().enumerate() {
        if v < values[lo] {
            lo = i;
        }
        if v > values[hi] {
            hi = i;
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::peeters;

    fn cycle_lambda(n: usize) -> f64 {
        // Eigenvalues 2cos(2πj/n); j = 0 is the top one.
        (1..n)
            .map(|j| (2.0 * (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos()).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn small_examples() {
        assert!(
            (second_largest_abs_eigenvalue(&Graph::cycle(4), 1e-8).unwrap() - 2.0).abs() < 1e-9
        );
        for n in [5, 7, 10] {
            let got = second_largest_abs_eigenvalue(&Graph::cycle(n), 1e-8).unwrap();
            assert!((got - cycle_lambda(n)).abs() < 1e-9);
        }
        for n in 2..8 {
            let r = ndl_certify(&Graph::complete(n), 1e-8).unwrap();
            assert_eq!(r.d, Some(n - 1));
            assert!((r.lambda_max - (n - 1) as f64).abs() < 1e-9);
            assert!((r.lambda_second_abs - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(ndl_certify(&Graph::path(4), 1e-8), Err(Error::NotRegular));
        let g2 = peeters::generate(2).unwrap();
        assert_eq!(ndl_certify(g2.graph(), 1e-8), Err(Error::Disconnected));
    }

    #[test]
    fn peeters_spectra_dense() {
        for k in 3..=5 {
            let pg = peeters::generate(k).unwrap();
            let r = ndl_certify(pg.graph(), 1e-8).unwrap();
            let expected = peeters::second_eigenvalue(k);
            assert_eq!(r.n, peeters::vertex_count(k));
            assert_eq!(r.d, Some(peeters::degree(k)));
            assert!((r.lambda_second_abs - expected).abs() <= 1e-6 * expected);
            assert!(r.lambda_second_abs <= r.lambda_max + r.tolerance);
        }
    }

    #[test]
    fn lanczos_matches_dense() {
        for k in 3..=5 {
            let pg = peeters::generate(k).unwrap();
            let dense = ndl_certify_with(pg.graph(), 1e-8, Method::Dense).unwrap();
            let lanczos = ndl_certify_with(pg.graph(), 1e-8, Method::Lanczos).unwrap();
            assert!((dense.lambda_second_abs - lanczos.lambda_second_abs).abs() < 1e-6);
        }
        for n in [9, 16, 31] {
            let c = Graph::cycle(n);
            let lanczos = ndl_certify_with(&c, 1e-10, Method::Lanczos).unwrap();
            assert!((lanczos.lambda_second_abs - cycle_lambda(n)).abs() < 1e-8);
        }
    }

    #[test]
    fn peeters_six_via_lanczos() {
        let pg = peeters::generate(6).unwrap();
        let r = ndl_certify(pg.graph(), 1e-8).unwrap();
        assert_eq!((r.n, r.d), (2016, Some(496)));
        assert!((r.lambda_second_abs - 64.0).abs() <= 1e-6 * 64.0);
    }

    #[test]
    fn trace_identities_on_dense_spectra() {
        let g = peeters::generate(4).unwrap();
        let values = adjacency_spectrum(g.graph()).unwrap();
        assert!(values.iter().sum::<f64>().abs() < 1e-8 * 120.0);
        let sq: f64 = values.iter().map(|x| x * x).sum();
        assert!((sq - 2.0 * g.graph().edge_count() as f64).abs() < 1e-6);
    }
}
