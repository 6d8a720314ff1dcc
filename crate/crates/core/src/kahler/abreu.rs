//! Abreu's scalar curvature by finite differences of the inverse Hessian, and
//! the Hessian duality with the Legendre-dual potential.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::{GridSpec, SymplecticPotential};
use crate::error::{Error, Result};
use crate::rational::to_f64;

/// `(Hess u)^{-1}`, rejecting matrices whose eigenvalue ratio is below 1e-10.
pub fn inverse_hessian(u: &SymplecticPotential, x: &[f64]) -> Result<DMatrix<f64>> {
    let h = u.hessian(x)?;
    let eig = h.clone().symmetric_eigen();
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    if !(min > 1e-10 * max) {
        return Err(Error::SingularHessian(x.to_vec()));
    }
    h.cholesky()
        .map(|c| c.inverse())
        .ok_or_else(|| Error::SingularHessian(x.to_vec()))
}

fn shifted(x: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    for &(i, d) in moves {
        y[i] += d;
    }
    y
}

/// `−½ Σ_ij ∂_i ∂_j u^{ij}` by central differences with step `h`.
fn abreu_at_step(u: &SymplecticPotential, x: &[f64], h: f64) -> Result<f64> {
    let n = x.len();
    let g = |y: Vec<f64>| inverse_hessian(u, &y);
    let centre = g(x.to_vec())?;
    let mut total = 0.0;
    for i in 0..n {
        let p = g(shifted(x, &[(i, h)]))?;
        let m = g(shifted(x, &[(i, -h)]))?;
        total += (p[(i, i)] - 2.0 * centre[(i, i)] + m[(i, i)]) / (h * h);
    }
    for (i, j) in (0..n).tuple_combinations() {
        let pp = g(shifted(x, &[(i, h), (j, h)]))?;
        let pm = g(shifted(x, &[(i, h), (j, -h)]))?;
        let mp = g(shifted(x, &[(i, -h), (j, h)]))?;
        let mm = g(shifted(x, &[(i, -h), (j, -h)]))?;
        let d = (pp[(i, j)] - pm[(i, j)] - mp[(i, j)] + mm[(i, j)]) / (4.0 * h * h);
        total += 2.0 * d;
    }
    Ok(-0.5 * total)
}

/// Scalar curvature `S(x)` of the potential, with one Richardson step over
/// finite-difference steps `h` and `h/2`, `h = fd_step · dist(x, ∂P)`.
pub fn abreu_scalar(u: &SymplecticPotential, x: &[f64], grid: &GridSpec) -> Result<f64> {
    grid.validate()?;
    if x.len() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: x.len(),
        });
    }
    let dist = u.boundary_distance(x);
    if !(dist >= grid.margin) {
        return Err(Error::TooCloseToBoundary(dist));
    }
    let h = grid.fd_step * dist;
    let s1 = abreu_at_step(u, x, h)?;
    let s2 = abreu_at_step(u, x, h / 2.0)?;
    Ok((4.0 * s2 - s1) / 3.0)
}

/// Points of the grid `spacing · ℤⁿ` at distance at least `margin` from ∂P.
pub fn interior_grid(u: &SymplecticPotential, grid: &GridSpec) -> Result<Vec<Vec<f64>>> {
    grid.validate()?;
    let verts = u.polytope().to_f64_vertices();
    let n = u.dim();
    let mut ranges = Vec::with_capacity(n);
    for i in 0..n {
        let lo = verts.iter().map(|v| v[i]).fold(f64::INFINITY, f64::min);
        let hi = verts.iter().map(|v| v[i]).fold(f64::NEG_INFINITY, f64::max);
        let a = (lo / grid.spacing).ceil() as i64;
        let b = (hi / grid.spacing).floor() as i64;
        ranges.push(a..=b);
    }
    let count: f64 = ranges.iter().map(|r| (r.end() - r.start() + 1) as f64).product();
    if count > 1e7 {
        return Err(Error::InvalidGrid(format!("{count} grid points requested")));
    }
    Ok(ranges
        .into_iter()
        .multi_cartesian_product()
        .map(|idx| idx.iter().map(|&k| k as f64 * grid.spacing).collect::<Vec<f64>>())
        .filter(|x| u.boundary_distance(x) >= grid.margin)
        .collect())
}

/// Summary statistics of sampled scalar curvature against `Ŝ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalSummary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub mean_scalar: f64,
}

/// Sample points paired with their scalar curvature.
pub type ScalarSamples = Vec<(Vec<f64>, f64)>;

/// `S` at every interior grid point, with a summary.
pub fn scalar_samples(u: &SymplecticPotential, grid: &GridSpec) -> Result<(ScalarSamples, ScalSummary)> {
    let pts = interior_grid(u, grid)?;
    let values: Vec<f64> = pts
        .par_iter()
        .map(|x| abreu_scalar(u, x, grid))
        .collect::<Result<_>>()?;
    let count = values.len();
    let summary = ScalSummary {
        count,
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean: values.iter().sum::<f64>() / count.max(1) as f64,
        mean_scalar: to_f64(&u.polytope().mean_scalar()),
    };
    Ok((pts.into_iter().zip(values).collect(), summary))
}

/// Solves `∇u(z) = y` by damped Newton iteration starting from `start`.
pub fn inverse_gradient(u: &SymplecticPotential, y: &[f64], start: &[f64]) -> Result<Vec<f64>> {
    let residual = |z: &[f64]| -> Result<Vec<f64>> {
        Ok(u.gradient(z)?.iter().zip(y).map(|(g, yi)| g - yi).collect())
    };
    let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let mut z = start.to_vec();
    let mut r = residual(&z)?;
    let mut trace = vec![norm(&r)];
    for _ in 0..100 {
        if norm(&r) < 1e-15 * (1.0 + norm(y)) {
            return Ok(z);
        }
        let h = u.hessian(&z)?;
        let step = h
            .cholesky()
            .ok_or_else(|| Error::SingularHessian(z.clone()))?
            .solve(&DVector::from_column_slice(&r));
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = z.iter().zip(step.iter()).map(|(a, s)| a - t * s).collect();
            if u.ell(&cand).iter().all(|&l| l > 0.0) {
                let rc = residual(&cand)?;
                if norm(&rc) < norm(&r) {
                    z = cand;
                    r = rc;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        trace.push(norm(&r));
        if !accepted {
            if norm(&r) < 1e-12 * (1.0 + norm(y)) {
                return Ok(z);
            }
            return Err(Error::NewtonDivergence(format!("residual norms {trace:?}")));
        }
    }
    Err(Error::NewtonDivergence(format!("residual norms {trace:?}")))
}

/// Hessian of the Legendre dual at `y = ∇u(x)`, by Richardson-extrapolated
/// central differences of the inverse gradient map.
pub fn legendre_hessian(u: &SymplecticPotential, x: &[f64]) -> Result<DMatrix<f64>> {
    let n = x.len();
    let y = u.gradient(x)?;
    let hu = u.hessian(x)?;
    let lmin = hu.clone().symmetric_eigen().eigenvalues.min();
    let h = 0.02 * u.boundary_distance(x) * lmin;
    let column = |j: usize, h: f64| -> Result<Vec<f64>> {
        let mut yp = y.clone();
        yp[j] += h;
        let mut ym = y.clone();
        ym[j] -= h;
        let zp = inverse_gradient(u, &yp, x)?;
        let zm = inverse_gradient(u, &ym, x)?;
        Ok(zp.iter().zip(&zm).map(|(a, b)| (a - b) / (2.0 * h)).collect())
    };
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        let c1 = column(j, h)?;
        let c2 = column(j, h / 2.0)?;
        for i in 0..n {
            out[(i, j)] = (4.0 * c2[i] - c1[i]) / 3.0;
        }
    }
    Ok(out)
}

/// `max |Hess ψ(∇u(x)) · Hess u(x) − I|` entrywise.
pub fn duality_residual(u: &SymplecticPotential, x: &[f64]) -> Result<f64> {
    let hpsi = legendre_hessian(u, x)?;
    let hu = u.hessian(x)?;
    let prod = hpsi * hu;
    let n = x.len();
    Ok((prod - DMatrix::<f64>::identity(n, n)).abs().max())
}
