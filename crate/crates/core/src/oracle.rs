//! Slow reference computations that share no code paths with the solvers.
//! Each works by exhaustive enumeration or by sampling.

use itertools::Itertools;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::Result;
use crate::lp::LinearProgram;
use crate::plconvex::PlFunction;
use crate::polytope::DelzantPolytope;
use crate::rational::{dot, rank, solve, to_f64, Rational};
use crate::stability::j_norm;

/// Classification of an LP by brute force.
#[derive(Clone, Debug, PartialEq)]
pub enum LpClass {
    Infeasible,
    Unbounded,
    Optimal(Rational),
}

/// Vertices of `{A x ≥ b, E x = d}` by solving every square subsystem.
fn basic_feasible_points(
    n: usize,
    ineq: &[(Vec<Rational>, Rational)],
    eq: &[(Vec<Rational>, Rational)],
) -> Vec<Vec<Rational>> {
    let free = n.saturating_sub(eq.len());
    let mut out = Vec::new();
    for tight in (0..ineq.len()).combinations(free) {
        let mut a: Vec<Vec<Rational>> = eq.iter().map(|r| r.0.clone()).collect();
        let mut b: Vec<Rational> = eq.iter().map(|r| r.1.clone()).collect();
        for &i in &tight {
            a.push(ineq[i].0.clone());
            b.push(ineq[i].1.clone());
        }
        if rank(&a) < n {
            continue;
        }
        if let Some(x) = solve(&a, &b) {
            if ineq.iter().all(|(c, r)| &dot(c, &x) >= r) {
                out.push(x);
            }
        }
    }
    out
}

/// Classifies `lp` by enumerating basic solutions of the feasible set and of
/// its recession cone cut by `c·d = −1`. Returns `None` unless the stacked
/// constraint matrix has full column rank, the case in which both sets are
/// pointed and enumeration is complete.
pub fn classify_lp(lp: &LinearProgram) -> Option<LpClass> {
    let n = lp.num_vars();
    let rows: Vec<Vec<Rational>> = lp
        .inequalities
        .iter()
        .chain(&lp.equalities)
        .map(|c| c.coeffs.clone())
        .collect();
    if rank(&rows) < n {
        return None;
    }
    let ineq: Vec<_> = lp.inequalities.iter().map(|c| (c.coeffs.clone(), c.rhs.clone())).collect();
    let eq: Vec<_> = lp.equalities.iter().map(|c| (c.coeffs.clone(), c.rhs.clone())).collect();
    let points = basic_feasible_points(n, &ineq, &eq);
    if points.is_empty() {
        return Some(LpClass::Infeasible);
    }
    let cone_ineq: Vec<_> = ineq.iter().map(|(c, _)| (c.clone(), Rational::zero())).collect();
    let mut cone_eq: Vec<_> = eq.iter().map(|(c, _)| (c.clone(), Rational::zero())).collect();
    cone_eq.push((lp.objective.clone(), -Rational::one()));
    if !basic_feasible_points(n, &cone_ineq, &cone_eq).is_empty() {
        return Some(LpClass::Unbounded);
    }
    let best = points
        .iter()
        .map(|x| dot(&lp.objective, x))
        .min()
        .expect("nonempty");
    Some(LpClass::Optimal(best))
}

/// `‖f‖_J` by minimising `a ↦ ⟨a, b⟩ − min_v (f(v) + ⟨a, v⟩)` over the vertices
/// of its linearity arrangement, where `b` is the barycenter and `v` runs over
/// the mesh points of `f`.
pub fn j_norm_brute_force(p: &DelzantPolytope, f: &PlFunction) -> Result<Rational> {
    let mesh = f.to_mesh(p)?;
    let n = p.dim();
    let mean = p.integrate(&PlFunction::Mesh(mesh.clone()), crate::polytope::Region::Interior)? / p.volume();
    let pts: Vec<(&Vec<Rational>, &Rational)> = mesh
        .subdivision
        .points
        .iter()
        .zip(&mesh.values)
        .unique_by(|(v, _)| (*v).clone())
        .collect();
    let bary = p.barycenter();
    let objective = |a: &[Rational]| -> Rational {
        let low = pts
            .iter()
            .map(|(v, fv)| *fv + dot(a, v))
            .min()
            .expect("mesh has points");
        dot(a, bary) - low
    };
    let mut best: Option<Rational> = None;
    for subset in pts.iter().combinations(n + 1) {
        // unknowns (a, t) with f(v) + ⟨a, v⟩ = t
        let a: Vec<Vec<Rational>> = subset
            .iter()
            .map(|(v, _)| {
                let mut row = (*v).clone();
                row.push(-Rational::one());
                row
            })
            .collect();
        let b: Vec<Rational> = subset.iter().map(|(_, fv)| -(*fv).clone()).collect();
        if let Some(mut x) = solve(&a, &b) {
            x.pop();
            let val = objective(&x);
            if best.as_ref().is_none_or(|b| &val < b) {
                best = Some(val);
            }
        }
    }
    Ok(mean + best.expect("the mesh points affinely span the polytope"))
}

/// Cross-checks the LP-based J-norm against the brute-force one.
pub fn j_norm_agrees(p: &DelzantPolytope, f: &PlFunction) -> Result<bool> {
    Ok(j_norm(p, f)? == j_norm_brute_force(p, f)?)
}

/// Monte Carlo estimate of `(vol P, ∫_P f)` from `samples` uniform draws in
/// the bounding box, with the standard error of the integral.
pub fn monte_carlo_integral<R: Rng>(
    p: &DelzantPolytope,
    f: &dyn Fn(&[f64]) -> f64,
    samples: usize,
    rng: &mut R,
) -> (f64, f64, f64) {
    let verts = p.to_f64_vertices();
    let n = p.dim();
    let lo: Vec<f64> = (0..n).map(|i| verts.iter().map(|v| v[i]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..n).map(|i| verts.iter().map(|v| v[i]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let facets: Vec<(Vec<f64>, f64)> = p
        .facets()
        .iter()
        .map(|fc| (fc.normal.iter().map(|&a| a as f64).collect(), to_f64(&fc.offset)))
        .collect();
    let mut hits = 0usize;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut x = vec![0.0; n];
    for _ in 0..samples {
        for i in 0..n {
            x[i] = rng.gen_range(lo[i]..hi[i]);
        }
        let inside = facets
            .iter()
            .all(|(a, b)| a.iter().zip(&x).map(|(ai, xi)| ai * xi).sum::<f64>() >= *b);
        if inside {
            hits += 1;
            let v = f(&x);
            sum += v;
            sum_sq += v * v;
        }
    }
    let m = samples as f64;
    let mean = sum / m;
    let var = (sum_sq / m - mean * mean).max(0.0);
    (
        box_vol * hits as f64 / m,
        box_vol * mean,
        box_vol * (var / m).sqrt(),
    )
}
