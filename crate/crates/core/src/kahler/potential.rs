//! Symplectic potentials `u = ½ Σ ℓ_k log ℓ_k + polynomial + affine` with
//! closed-form derivatives, and normalisation at the interior minimum.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::plconvex::AffineFunction;
use crate::polytope::DelzantPolytope;
use crate::rational::{from_f64, to_f64, Rational};

/// `coeff · Π x_i^{exponents_i}`
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coeff: Rational,
}

#[derive(Clone, Debug)]
pub struct SymplecticPotential {
    polytope: DelzantPolytope,
    smooth: Vec<Monomial>,
    affine: AffineFunction,
    normals: Vec<Vec<f64>>,
    offsets: Vec<f64>,
    smooth_f64: Vec<(Vec<u32>, f64)>,
    affine_f64: (Vec<f64>, f64),
    /// `det(α_S)²` for every `n`-subset `S` of facets with nonzero determinant.
    facet_minors: Vec<(Vec<usize>, f64)>,
}

impl PartialEq for SymplecticPotential {
    fn eq(&self, other: &Self) -> bool {
        self.polytope == other.polytope && self.smooth == other.smooth && self.affine == other.affine
    }
}

fn det_small(m: &DMatrix<f64>) -> f64 {
    match m.nrows() {
        0 => 1.0,
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => m.determinant(),
    }
}

fn powi(x: f64, e: u32) -> f64 {
    x.powi(e as i32)
}

impl SymplecticPotential {
    pub fn new(polytope: DelzantPolytope, smooth: Vec<Monomial>, affine: AffineFunction) -> Result<Self> {
        let n = polytope.dim();
        if let Some(m) = smooth.iter().find(|m| m.exponents.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.exponents.len(),
            });
        }
        if affine.a.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: affine.a.len(),
            });
        }
        let normals: Vec<Vec<f64>> = polytope
            .facets()
            .iter()
            .map(|f| f.normal.iter().map(|&a| a as f64).collect())
            .collect();
        let offsets = polytope.facets().iter().map(|f| to_f64(&f.offset)).collect();
        let smooth_f64 = smooth
            .iter()
            .filter(|m| !m.coeff.is_zero())
            .map(|m| (m.exponents.clone(), to_f64(&m.coeff)))
            .collect();
        let affine_f64 = (affine.a.iter().map(to_f64).collect(), to_f64(&affine.b));
        let facet_minors = (0..normals.len())
            .combinations(n)
            .filter_map(|s| {
                let m = DMatrix::from_fn(n, n, |i, j| normals[s[i]][j]);
                let d = det_small(&m);
                (d != 0.0).then_some((s, d * d))
            })
            .collect();
        Ok(Self {
            polytope,
            smooth,
            affine,
            normals,
            offsets,
            smooth_f64,
            affine_f64,
            facet_minors,
        })
    }

    /// The canonical potential `½ Σ ℓ_k log ℓ_k`.
    pub fn guillemin(polytope: &DelzantPolytope) -> Self {
        let n = polytope.dim();
        Self::new(polytope.clone(), Vec::new(), AffineFunction::zero(n)).expect("consistent dimensions")
    }

    pub fn polytope(&self) -> &DelzantPolytope {
        &self.polytope
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn smooth_part(&self) -> &[Monomial] {
        &self.smooth
    }

    pub fn affine_part(&self) -> &AffineFunction {
        &self.affine
    }

    pub fn with_affine(&self, affine: AffineFunction) -> Result<Self> {
        Self::new(self.polytope.clone(), self.smooth.clone(), affine)
    }

    pub fn add_affine(&self, l: &AffineFunction) -> Result<Self> {
        self.with_affine(self.affine.add(l))
    }

    /// Adds `scale · q` to the smooth part.
    pub fn add_smooth(&self, q: &[Monomial], scale: &Rational) -> Result<Self> {
        let mut smooth = self.smooth.clone();
        for m in q {
            let c = &m.coeff * scale;
            match smooth.iter_mut().find(|s| s.exponents == m.exponents) {
                Some(s) => s.coeff += c,
                None => smooth.push(Monomial {
                    exponents: m.exponents.clone(),
                    coeff: c,
                }),
            }
        }
        Self::new(self.polytope.clone(), smooth, self.affine.clone())
    }

    pub fn num_facets(&self) -> usize {
        self.normals.len()
    }

    /// `ℓ_k(x)` for every facet.
    pub fn ell(&self, x: &[f64]) -> Vec<f64> {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(a, b)| a.iter().zip(x).map(|(ai, xi)| ai * xi).sum::<f64>() - b)
            .collect()
    }

    /// Distance to the boundary, `min_k ℓ_k(x) / ‖α_k‖`.
    pub fn boundary_distance(&self, x: &[f64]) -> f64 {
        self.ell(x)
            .iter()
            .zip(&self.normals)
            .map(|(l, a)| l / a.iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(f64::INFINITY, f64::min)
    }

    fn smooth_value(&self, x: &[f64]) -> f64 {
        self.smooth_f64
            .iter()
            .map(|(e, c)| c * e.iter().zip(x).map(|(&k, &xi)| powi(xi, k)).product::<f64>())
            .sum()
    }

    fn smooth_gradient(&self, x: &[f64], g: &mut [f64]) {
        for (e, c) in &self.smooth_f64 {
            for i in 0..x.len() {
                if e[i] == 0 {
                    continue;
                }
                let mut t = c * e[i] as f64;
                for (j, (&k, &xj)) in e.iter().zip(x).enumerate() {
                    t *= if j == i { powi(xj, k - 1) } else { powi(xj, k) };
                }
                g[i] += t;
            }
        }
    }

    /// Hessian of the polynomial part.
    pub fn smooth_hessian(&self, x: &[f64]) -> DMatrix<f64> {
        let n = x.len();
        let mut h = DMatrix::zeros(n, n);
        for (e, c) in &self.smooth_f64 {
            for i in 0..n {
                for j in 0..n {
                    let mut ex = e.clone();
                    let mut t = *c;
                    if ex[i] == 0 {
                        continue;
                    }
                    t *= ex[i] as f64;
                    ex[i] -= 1;
                    if ex[j] == 0 {
                        continue;
                    }
                    t *= ex[j] as f64;
                    ex[j] -= 1;
                    t *= ex.iter().zip(x).map(|(&k, &xi)| powi(xi, k)).product::<f64>();
                    h[(i, j)] += t;
                }
            }
        }
        h
    }

    pub fn has_smooth_part(&self) -> bool {
        !self.smooth_f64.is_empty()
    }

    fn affine_value(&self, x: &[f64]) -> f64 {
        self.affine_f64.0.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + self.affine_f64.1
    }

    /// `u(x)` given precomputed facet values; terms with `ℓ_k ≤ 0` contribute 0.
    pub fn value_at(&self, x: &[f64], ell: &[f64]) -> f64 {
        let g: f64 = ell.iter().map(|&l| if l > 0.0 { l * l.ln() } else { 0.0 }).sum();
        0.5 * g + self.smooth_value(x) + self.affine_value(x)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.value_at(x, &self.ell(x))
    }

    /// Trace of `u` on facet `k`: the `ℓ_k log ℓ_k` term is dropped (its limit is 0).
    pub fn boundary_value_at(&self, facet: usize, x: &[f64], ell: &[f64]) -> f64 {
        let g: f64 = ell
            .iter()
            .enumerate()
            .map(|(j, &l)| if j != facet && l > 0.0 { l * l.ln() } else { 0.0 })
            .sum();
        0.5 * g + self.smooth_value(x) + self.affine_value(x)
    }

    /// `∇u = ½ Σ α_k (log ℓ_k + 1) + ∇(polynomial) + a`
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let ell = self.ell(x);
        if ell.iter().any(|&l| l <= 0.0) {
            return Err(Error::TooCloseToBoundary(self.boundary_distance(x)));
        }
        let mut g = self.affine_f64.0.clone();
        for (a, l) in self.normals.iter().zip(&ell) {
            let c = 0.5 * (l.ln() + 1.0);
            for (gi, ai) in g.iter_mut().zip(a) {
                *gi += c * ai;
            }
        }
        self.smooth_gradient(x, &mut g);
        Ok(g)
    }

    /// `Hess u = ½ Σ α_k α_kᵀ / ℓ_k + Hess(polynomial)` given facet values.
    pub fn hessian_at(&self, x: &[f64], ell: &[f64]) -> DMatrix<f64> {
        let n = x.len();
        let mut h = if self.has_smooth_part() {
            self.smooth_hessian(x)
        } else {
            DMatrix::zeros(n, n)
        };
        for (a, l) in self.normals.iter().zip(ell) {
            let c = 0.5 / l;
            for i in 0..n {
                for j in 0..n {
                    h[(i, j)] += c * a[i] * a[j];
                }
            }
        }
        h
    }

    /// Hessian at an interior point.
    pub fn hessian(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let ell = self.ell(x);
        if ell.iter().any(|&l| l <= 0.0) {
            return Err(Error::TooCloseToBoundary(self.boundary_distance(x)));
        }
        Ok(self.hessian_at(x, &ell))
    }

    /// `log det Hess u`, computed as a sum of nonnegative Cauchy–Binet terms
    /// whenever the polynomial Hessian is positive semidefinite, which keeps
    /// full relative accuracy arbitrarily close to the boundary.
    pub fn log_det_hessian_at(&self, x: &[f64], ell: &[f64]) -> Result<f64> {
        let n = x.len();
        if ell.iter().any(|&l| l <= 0.0) {
            return Err(Error::TooCloseToBoundary(self.boundary_distance(x)));
        }
        if !self.has_smooth_part() {
            let det: f64 = self
                .facet_minors
                .iter()
                .map(|(s, m)| m * s.iter().map(|&k| 0.5 / ell[k]).product::<f64>())
                .sum();
            return if det > 0.0 {
                Ok(det.ln())
            } else {
                Err(Error::SingularHessian(x.to_vec()))
            };
        }
        let q = self.smooth_hessian(x);
        let eig = q.clone().symmetric_eigen();
        let scale = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if eig.eigenvalues.iter().all(|&v| v >= -1e-14 * scale) {
            let mut vecs: Vec<(Vec<f64>, f64)> = self
                .normals
                .iter()
                .zip(ell)
                .map(|(a, l)| (a.clone(), 0.5 / l))
                .collect();
            for j in 0..n {
                let mu = eig.eigenvalues[j].max(0.0);
                if mu > 0.0 {
                    vecs.push((eig.eigenvectors.column(j).iter().copied().collect(), mu));
                }
            }
            let det: f64 = (0..vecs.len())
                .combinations(n)
                .map(|s| {
                    let m = DMatrix::from_fn(n, n, |i, j| vecs[s[i]].0[j]);
                    let d = det_small(&m);
                    d * d * s.iter().map(|&k| vecs[k].1).product::<f64>()
                })
                .sum();
            return if det > 0.0 {
                Ok(det.ln())
            } else {
                Err(Error::SingularHessian(x.to_vec()))
            };
        }
        let h = self.hessian_at(x, ell);
        match h.cholesky() {
            Some(c) => Ok(2.0 * c.l().diagonal().iter().map(|d| d.ln()).sum::<f64>()),
            None => Err(Error::SingularHessian(x.to_vec())),
        }
    }

    /// Checks positive definiteness through leading principal minors.
    pub fn is_positive_definite(&self, x: &[f64]) -> Result<bool> {
        let h = self.hessian(x)?;
        let n = h.nrows();
        let scale = h.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        Ok((1..=n).all(|k| det_small(&h.view((0, 0), (k, k)).into_owned()) > 1e-12 * scale.powi(k as i32)))
    }

    /// Interior minimiser of `u` by damped Newton iteration from the barycenter.
    pub fn minimizer(&self) -> Result<Vec<f64>> {
        let mut x: Vec<f64> = self.polytope.barycenter().iter().map(to_f64).collect();
        let mut trace = Vec::new();
        for _ in 0..200 {
            let g = self.gradient(&x)?;
            let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
            trace.push(gnorm);
            if gnorm < 1e-14 {
                return Ok(x);
            }
            let h = self.hessian(&x)?;
            let step = match h.clone().cholesky() {
                Some(c) => c.solve(&DVector::from_vec(g.clone())),
                None => return Err(Error::SingularHessian(x)),
            };
            let decrease: f64 = g.iter().zip(step.iter()).map(|(a, b)| a * b).sum();
            let u0 = self.value(&x);
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..60 {
                let cand: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, si)| xi - t * si).collect();
                if self.ell(&cand).iter().all(|&l| l > 0.0) && self.value(&cand) <= u0 - 1e-4 * t * decrease {
                    x = cand;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                if gnorm < 1e-10 {
                    return Ok(x);
                }
                return Err(Error::NewtonDivergence(format!("line search failed; gradient norms {trace:?}")));
            }
        }
        Err(Error::NewtonDivergence(format!(
            "no convergence in 200 steps; gradient norms {trace:?}"
        )))
    }

    /// Subtracts the tangent plane at the interior minimiser, so that the
    /// result has value 0 and zero gradient there.
    pub fn normalize(&self) -> Result<SymplecticPotential> {
        let x0 = self.minimizer()?;
        let g = self.gradient(&x0)?;
        let u0 = self.value(&x0);
        let a: Vec<Rational> = self
            .affine
            .a
            .iter()
            .zip(&g)
            .map(|(a, gi)| a - from_f64(*gi))
            .collect();
        let shift: f64 = u0 - g.iter().zip(&x0).map(|(gi, xi)| gi * xi).sum::<f64>();
        let b = &self.affine.b - from_f64(shift);
        self.with_affine(AffineFunction::new(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::Facet;
    use crate::rational::int;

    fn interval() -> DelzantPolytope {
        DelzantPolytope::new(1, vec![Facet::new(vec![1], int(0)), Facet::new(vec![-1], int(-1))]).unwrap()
    }

    #[test]
    fn interval_guillemin_values() {
        let u = SymplecticPotential::guillemin(&interval());
        assert!((u.value(&[0.5]) + std::f64::consts::LN_2 / 2.0).abs() < 1e-15);
        let h = u.hessian(&[0.5]).unwrap();
        assert!((h[(0, 0)] - 2.0).abs() < 1e-14);
        assert!(matches!(u.hessian(&[0.0]), Err(Error::TooCloseToBoundary(_))));
        let ld = u.log_det_hessian_at(&[0.25], &u.ell(&[0.25])).unwrap();
        assert!((ld - (1.0f64 / (2.0 * 0.25 * 0.75)).ln()).abs() < 1e-14);
    }

    #[test]
    fn normalization_of_interval() {
        let u = SymplecticPotential::guillemin(&interval());
        let n = u.normalize().unwrap();
        assert!(n.value(&[0.5]).abs() < 1e-15);
        assert!(n.gradient(&[0.5]).unwrap()[0].abs() < 1e-15);
        let constant = u.add_affine(&AffineFunction::constant(1, int(2))).unwrap().normalize().unwrap();
        let again = n.normalize().unwrap();
        for x in [0.1, 0.5, 0.9] {
            assert!((constant.value(&[x]) - n.value(&[x])).abs() < 1e-12);
            assert!((again.value(&[x]) - n.value(&[x])).abs() < 1e-12);
        }
        // A linear term moves the minimiser to where u' = -1/3.
        let tilted = u
            .add_affine(&AffineFunction::new(vec![crate::rational::frac(1, 3)], int(2)))
            .unwrap()
            .normalize()
            .unwrap();
        let x0 = 1.0 / (1.0 + (2.0f64 / 3.0).exp());
        assert!(tilted.value(&[x0]).abs() < 1e-12);
        assert!(tilted.gradient(&[x0]).unwrap()[0].abs() < 1e-12);
    }

    #[test]
    fn smooth_part_derivatives() {
        let p = interval();
        let q = vec![Monomial {
            exponents: vec![3],
            coeff: int(2),
        }];
        let u = SymplecticPotential::guillemin(&p).add_smooth(&q, &int(1)).unwrap();
        let x = 0.3;
        let h = u.hessian(&[x]).unwrap()[(0, 0)];
        assert!((h - (1.0 / (2.0 * x * (1.0 - x)) + 12.0 * x)).abs() < 1e-12);
        let g = u.gradient(&[x]).unwrap()[0];
        let expected = 0.5 * (x.ln() + 1.0) - 0.5 * ((1.0 - x).ln() + 1.0) + 6.0 * x * x;
        assert!((g - expected).abs() < 1e-14);
    }
}
