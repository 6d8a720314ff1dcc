//! Toric energy functionals by graded quadrature: `E`, `M`, the normalised
//! integral used as a J-proxy, the reference functionals `L₀`/`M₀`, and
//! energies along rays `u + t·f̃`.

use super::quadrature::{Node, NodeSet};
use super::{abreu_scalar, Estimate, EnergyReport, GridSpec, SymplecticPotential};
use crate::error::{Error, Result};
use crate::plconvex::{AffineFunction, PlFunction};
use crate::polytope::DelzantPolytope;
use crate::rational::{to_f64, Rational};

/// A function that can be integrated over P and over ∂P at quadrature nodes.
pub trait Integrand: Sync {
    fn interior(&self, node: Node<'_>) -> Result<f64>;
    fn boundary(&self, node: Node<'_>) -> Result<f64>;
}

impl Integrand for SymplecticPotential {
    fn interior(&self, node: Node<'_>) -> Result<f64> {
        Ok(self.value_at(node.x, node.ell))
    }

    fn boundary(&self, node: Node<'_>) -> Result<f64> {
        Ok(self.boundary_value_at(node.facet.expect("boundary node"), node.x, node.ell))
    }
}

impl Integrand for AffineFunction {
    fn interior(&self, node: Node<'_>) -> Result<f64> {
        Ok(self.eval_f64(node.x))
    }

    fn boundary(&self, node: Node<'_>) -> Result<f64> {
        Ok(self.eval_f64(node.x))
    }
}

impl Integrand for PlFunction {
    fn interior(&self, node: Node<'_>) -> Result<f64> {
        Ok(self.eval_f64(node.x))
    }

    fn boundary(&self, node: Node<'_>) -> Result<f64> {
        Ok(self.eval_f64(node.x))
    }
}

/// Quadrature nodes over P and ∂P at grades `m` and `m − 2`.
#[derive(Clone, Debug)]
pub struct EnergyContext {
    polytope: DelzantPolytope,
    grid: GridSpec,
    volume: f64,
    mean_scalar: f64,
    interior: [NodeSet; 2],
    boundary: [NodeSet; 2],
}

fn pair<T, F: Fn(u32) -> Result<T>>(grade: u32, f: F) -> Result<[T; 2]> {
    Ok([f(grade)?, f(grade - 2)?])
}

impl EnergyContext {
    pub fn new(p: &DelzantPolytope, grid: &GridSpec) -> Result<Self> {
        grid.validate()?;
        Ok(Self {
            polytope: p.clone(),
            grid: *grid,
            volume: to_f64(p.volume()),
            mean_scalar: to_f64(&p.mean_scalar()),
            interior: pair(grid.grade, |g| NodeSet::interior(p, g, grid.order))?,
            boundary: pair(grid.grade, |g| NodeSet::boundary(p, g, grid.order))?,
        })
    }

    pub fn polytope(&self) -> &DelzantPolytope {
        &self.polytope
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    fn check(&self, u: &SymplecticPotential) -> Result<()> {
        if u.polytope() != &self.polytope {
            return Err(Error::InvalidInput("potential lives on a different polytope".into()));
        }
        Ok(())
    }

    /// `∫_P f` at both grades, with absolute mass.
    fn interior_levels(&self, f: &dyn Integrand) -> Result<[(f64, f64); 2]> {
        Ok([
            self.interior[0].try_sum(|n| f.interior(n))?,
            self.interior[1].try_sum(|n| f.interior(n))?,
        ])
    }

    fn boundary_levels(&self, f: &dyn Integrand) -> Result<[(f64, f64); 2]> {
        Ok([
            self.boundary[0].try_sum(|n| f.boundary(n))?,
            self.boundary[1].try_sum(|n| f.boundary(n))?,
        ])
    }

    /// `−∫_P log det(u_ij)` at both grades.
    fn nonlinear_levels(&self, u: &SymplecticPotential) -> Result<[(f64, f64); 2]> {
        let f = |n: Node<'_>| Ok(-u.log_det_hessian_at(n.x, n.ell)?);
        Ok([self.interior[0].try_sum(f)?, self.interior[1].try_sum(f)?])
    }

    /// `∫_P f` as an estimate.
    pub fn integral(&self, f: &dyn Integrand) -> Result<Estimate> {
        let [(hi, a), (lo, _)] = self.interior_levels(f)?;
        Ok(Estimate::from_levels(hi, lo, a))
    }

    /// `L(f) = ∫_∂P f dσ − Ŝ ∫_P f` by quadrature.
    pub fn donaldson_l(&self, f: &dyn Integrand) -> Result<Estimate> {
        let [(ih, ia), (il, _)] = self.interior_levels(f)?;
        let [(bh, ba), (bl, _)] = self.boundary_levels(f)?;
        let s = self.mean_scalar;
        Ok(Estimate::from_levels(bh - s * ih, bl - s * il, ba + s * ia))
    }

    /// `E(u) = −(1/V) ∫_P u`
    pub fn energy_e(&self, u: &SymplecticPotential) -> Result<Estimate> {
        self.check(u)?;
        let est = self.integral(u)?;
        Ok(Estimate {
            value: -est.value / self.volume,
            error: est.error / self.volume,
        })
    }

    pub fn energy_m(&self, u: &SymplecticPotential) -> Result<EnergyReport> {
        self.check(u)?;
        let v = self.volume;
        let s = self.mean_scalar;
        let [(nh, na), (nl, _)] = self.nonlinear_levels(u)?;
        let [(ih, ia), (il, _)] = self.interior_levels(u)?;
        let [(bh, ba), (bl, _)] = self.boundary_levels(u)?;
        let nonlinear = Estimate::from_levels(nh / v, nl / v, na / v);
        let linear = Estimate::from_levels((bh - s * ih) / v, (bl - s * il) / v, (ba + s * ia) / v);
        let e = Estimate::from_levels(-ih / v, -il / v, ia / v);
        Ok(EnergyReport {
            e: e.value,
            m: nonlinear.value + linear.value,
            nonlinear_term: nonlinear.value,
            linear_term: linear.value,
            error_estimate: (nonlinear.error + linear.error).max(e.error),
            volume: v,
        })
    }

    /// `(1/V) ∫_P u` for a potential normalised at its interior minimum.
    pub fn j_proxy(&self, u: &SymplecticPotential) -> Result<Estimate> {
        self.check(u)?;
        let x = u.minimizer()?;
        let value = u.value(&x);
        let grad = u.gradient(&x)?;
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if value.abs() > 1e-8 || gnorm > 1e-8 {
            return Err(Error::NotNormalized(format!(
                "at the minimiser u = {value:e} and |∇u| = {gnorm:e}"
            )));
        }
        let est = self.integral(u)?;
        Ok(Estimate {
            value: est.value / self.volume,
            error: est.error / self.volume,
        })
    }
}

/// Energy context together with `A₀ = S(u₀)` tabulated at the interior nodes.
#[derive(Clone, Debug)]
pub struct ReferenceContext {
    ctx: EnergyContext,
    a0: [Vec<f64>; 2],
}

impl ReferenceContext {
    /// Tabulates `A₀` at the interior quadrature nodes. Nodes closer to ∂P than
    /// the grid margin use the value at the point where the segment from the
    /// barycenter to the node reaches distance `margin`.
    pub fn new(p: &DelzantPolytope, u0: &SymplecticPotential, grid: &GridSpec) -> Result<Self> {
        let ctx = EnergyContext::new(p, grid)?;
        ctx.check(u0)?;
        let bary: Vec<f64> = p.barycenter().iter().map(to_f64).collect();
        let bell = u0.ell(&bary);
        let norms: Vec<f64> = p
            .facets()
            .iter()
            .map(|f| (f.norm_squared() as f64).sqrt())
            .collect();
        if bell.iter().zip(&norms).any(|(l, a)| l / a <= grid.margin) {
            return Err(Error::InvalidGrid("margin exceeds the barycenter's distance to ∂P".into()));
        }
        let eval = |n: Node<'_>| -> Result<f64> {
            let mut s = 1.0f64;
            for ((l, bl), a) in n.ell.iter().zip(&bell).zip(&norms) {
                let target = grid.margin * a;
                if *l < target {
                    s = s.min((bl - target) / (bl - l));
                }
            }
            if s >= 1.0 {
                return abreu_scalar(u0, n.x, grid);
            }
            let y: Vec<f64> = bary.iter().zip(n.x).map(|(b, x)| b + s * (x - b)).collect();
            let g = GridSpec {
                margin: grid.margin * (1.0 - 1e-9),
                ..*grid
            };
            abreu_scalar(u0, &y, &g)
        };
        let a0 = [ctx.interior[0].try_map(eval)?, ctx.interior[1].try_map(eval)?];
        Ok(Self { ctx, a0 })
    }

    pub fn context(&self) -> &EnergyContext {
        &self.ctx
    }

    fn l0_levels(&self, f: &dyn Integrand) -> Result<[(f64, f64); 2]> {
        let [(bh, ba), (bl, _)] = self.ctx.boundary_levels(f)?;
        let mut out = [(0.0, 0.0); 2];
        for level in 0..2 {
            let a0 = &self.a0[level];
            let (i, ia) = self.ctx.interior[level].try_sum(|n| {
                Ok(a0[n.index] * f.interior(n)?)
            })?;
            let b = if level == 0 { bh } else { bl };
            out[level] = (b - i, ba + ia);
        }
        Ok(out)
    }

    /// `L₀(f) = ∫_∂P f dσ − ∫_P A₀ f`
    pub fn l0(&self, f: &dyn Integrand) -> Result<Estimate> {
        let [(h, a), (l, _)] = self.l0_levels(f)?;
        Ok(Estimate::from_levels(h, l, a))
    }

    /// `M₀(u) = (1/V)(−∫_P log det(u_ij) + 2 L₀(u))`.
    ///
    /// With the Guillemin coefficient pinned at ½, integration by parts gives
    /// `∫_P u₀^{ij} q_ij = 2 L₀(q)`, so the factor 2 on the linear term is what
    /// makes `u₀` a critical point, and hence the minimiser, of this convex
    /// functional.
    pub fn m0(&self, u: &SymplecticPotential) -> Result<Estimate> {
        self.ctx.check(u)?;
        let v = self.ctx.volume;
        let [(nh, na), (nl, _)] = self.ctx.nonlinear_levels(u)?;
        let [(lh, la), (ll, _)] = self.l0_levels(u)?;
        Ok(Estimate::from_levels(
            (nh + 2.0 * lh) / v,
            (nl + 2.0 * ll) / v,
            (na + 2.0 * la) / v,
        ))
    }
}

/// Energies along `u + t·f̃` with the fitted slope.
#[derive(Clone, Debug, PartialEq)]
pub struct RayReport {
    pub base: EnergyReport,
    /// `(t, M(u + t·f̃))`
    pub rows: Vec<(f64, f64)>,
    /// Least-squares slope of `M` in `t`.
    pub slope: f64,
    /// Exact `L(f)`.
    pub l_f: Rational,
    /// `L(f)/V`, the slope predicted by linearity of `L` along the ray.
    pub expected_slope: f64,
}

/// `M(u + t·f̃)` for each `t`. Since `f̃` is piecewise linear its Hessian
/// vanishes off the creases, so the nonlinear term is that of `u`; the linear
/// term adds `t·L(f̃)` with `L(f̃)` integrated on the crease-aligned mesh of `f`.
pub fn ray_energy(
    ctx: &EnergyContext,
    u: &SymplecticPotential,
    f: &PlFunction,
    ts: &[f64],
) -> Result<RayReport> {
    let p = &ctx.polytope;
    if let Some(t) = ts.iter().find(|t| !(**t >= 0.0)) {
        return Err(Error::InvalidInput(format!("ray parameter {t} must be nonnegative")));
    }
    if ts.is_empty() {
        return Err(Error::InvalidInput("no ray parameters".into()));
    }
    f.require_convex(p)?;
    let base = ctx.energy_m(u)?;
    let mesh = match f.tilde(p)? {
        PlFunction::Mesh(m) => m,
        other => other.to_mesh(p)?,
    };
    let pieces: Vec<(Vec<f64>, f64)> = (0..mesh.subdivision.cells.len())
        .map(|c| {
            let a = mesh.cell_affine(c);
            (a.a.iter().map(to_f64).collect(), to_f64(&a.b))
        })
        .collect();
    let piece_at = |n: Node<'_>| -> f64 {
        let (a, b) = &pieces[n.cell];
        a.iter().zip(n.x).map(|(ai, xi)| ai * xi).sum::<f64>() + b
    };
    // Affine integrands per cell, so a low-order rule is exact.
    let (inner, outer) = NodeSet::on_subdivision(p, &mesh.subdivision, 2, 2)?;
    let (bi, _) = outer.sum(piece_at);
    let (ii, _) = inner.sum(piece_at);
    let l_tilde = bi - ctx.mean_scalar * ii;
    let rows: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| (t, base.m + t * l_tilde / ctx.volume))
        .collect();
    let k = rows.len() as f64;
    let tbar = rows.iter().map(|r| r.0).sum::<f64>() / k;
    let mbar = rows.iter().map(|r| r.1).sum::<f64>() / k;
    let sxx: f64 = rows.iter().map(|r| (r.0 - tbar).powi(2)).sum();
    let sxy: f64 = rows.iter().map(|r| (r.0 - tbar) * (r.1 - mbar)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let l_f = crate::stability::donaldson_l(p, f)?;
    Ok(RayReport {
        base,
        expected_slope: to_f64(&l_f) / ctx.volume,
        rows,
        slope,
        l_f,
    })
}

/// `E(u)` with a fresh context.
pub fn energy_e(p: &DelzantPolytope, u: &SymplecticPotential, grid: &GridSpec) -> Result<Estimate> {
    EnergyContext::new(p, grid)?.energy_e(u)
}

/// `M(u)` with a fresh context.
pub fn energy_m(p: &DelzantPolytope, u: &SymplecticPotential, grid: &GridSpec) -> Result<EnergyReport> {
    EnergyContext::new(p, grid)?.energy_m(u)
}

/// `(1/V) ∫_P u` for normalised `u` with a fresh context.
pub fn j_proxy(p: &DelzantPolytope, u: &SymplecticPotential, grid: &GridSpec) -> Result<Estimate> {
    EnergyContext::new(p, grid)?.j_proxy(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::kahler::Monomial;
    use crate::plconvex::MaxAffinePL;
    use crate::rational::{frac, int};
    use std::f64::consts::LN_2;

    fn unit() -> Rational {
        int(1)
    }

    #[test]
    fn interval_energies_match_closed_forms() {
        let p = catalog::interval(&unit()).unwrap();
        let u = SymplecticPotential::guillemin(&p);
        let ctx = EnergyContext::new(&p, &GridSpec::for_dim(1)).unwrap();
        let e = ctx.energy_e(&u).unwrap();
        assert!((e.value - 0.25).abs() < 1e-6, "{e:?}");
        let m = ctx.energy_m(&u).unwrap();
        assert!((m.m - (LN_2 - 1.5)).abs() < 1e-4, "{m:?}");
        assert!((m.nonlinear_term - (LN_2 - 2.0)).abs() < 1e-4);
        assert!((m.linear_term - 0.5).abs() < 1e-8);
        assert!(m.error_estimate < 1e-4);
    }

    #[test]
    fn square_energy_is_twice_the_interval() {
        let p = catalog::square(&unit()).unwrap();
        let u = SymplecticPotential::guillemin(&p);
        let ctx = EnergyContext::new(&p, &GridSpec::for_dim(2)).unwrap();
        assert!((ctx.energy_e(&u).unwrap().value - 0.5).abs() < 1e-5);
        let m = ctx.energy_m(&u).unwrap();
        assert!((m.m - 2.0 * (LN_2 - 1.5)).abs() < 1e-4, "{m:?}");
    }

    #[test]
    fn constant_shift_moves_e_exactly() {
        let p = catalog::interval(&unit()).unwrap();
        let u = SymplecticPotential::guillemin(&p);
        let v = u.add_affine(&AffineFunction::constant(1, frac(3, 7))).unwrap();
        let ctx = EnergyContext::new(&p, &GridSpec::for_dim(1)).unwrap();
        let d = ctx.energy_e(&u).unwrap().value - ctx.energy_e(&v).unwrap().value;
        assert!((d - 3.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn j_proxy_of_normalized_interval_potential() {
        let p = catalog::interval(&unit()).unwrap();
        let u = SymplecticPotential::guillemin(&p);
        let grid = GridSpec::for_dim(1);
        assert!(matches!(j_proxy(&p, &u, &grid), Err(Error::NotNormalized(_))));
        let j = j_proxy(&p, &u.normalize().unwrap(), &grid).unwrap();
        assert!((j.value - (-0.25 + LN_2 / 2.0)).abs() < 1e-6, "{j:?}");
    }

    #[test]
    fn reference_functionals_agree_for_constant_curvature() {
        let p = catalog::interval(&unit()).unwrap();
        let u0 = SymplecticPotential::guillemin(&p);
        let grid = GridSpec::for_dim(1);
        let r = ReferenceContext::new(&p, &u0, &grid).unwrap();
        let m = r.context().energy_m(&u0).unwrap();
        assert!((r.m0(&u0).unwrap().value - (m.m + m.linear_term)).abs() < 1e-4);
        let l0 = r.l0(&u0).unwrap().value;
        assert!((l0 - m.linear_term).abs() < 1e-4);
        let q = vec![Monomial { exponents: vec![2], coeff: int(1) }];
        for eps in [frac(1, 10), frac(1, 100)] {
            let u = u0.add_smooth(&q, &eps).unwrap();
            assert!(r.m0(&u).unwrap().value >= r.m0(&u0).unwrap().value - 1e-6);
        }
    }

    #[test]
    fn ray_slope_is_l_of_f() {
        let p = catalog::interval(&unit()).unwrap();
        let u = SymplecticPotential::guillemin(&p);
        let ctx = EnergyContext::new(&p, &GridSpec::for_dim(1)).unwrap();
        let f = PlFunction::MaxAffine(MaxAffinePL::simple(vec![int(1)], frac(1, 2)));
        let r = ray_energy(&ctx, &u, &f, &[0.0, 1.0, 2.0, 4.0]).unwrap();
        assert_eq!(r.l_f, frac(1, 4));
        assert!((r.slope - 0.25).abs() < 1e-5);
        assert_eq!(r.rows[0].1, ctx.energy_m(&u).unwrap().m);
        for &(t, m) in &r.rows {
            assert!((m - (LN_2 - 1.5) - t / 4.0).abs() < 1e-4);
        }
        assert!(ray_energy(&ctx, &u, &f, &[-1.0]).is_err());
    }
}
