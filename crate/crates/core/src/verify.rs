//! Seeded random instances and the end-to-end invariant suite.

use std::time::Instant;

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog;
use crate::error::Result;
use crate::json::{parse, to_string, PlJson, PolytopeJson};
use crate::kahler::{
    abreu_scalar, duality_residual, ray_energy, EnergyContext, GridSpec, Monomial, ReferenceContext,
    SymplecticPotential,
};
use crate::lp::{self, LinearProgram, LpOutcome};
use crate::oracle::{classify_lp, j_norm_brute_force, monte_carlo_integral, LpClass};
use crate::plconvex::{AffineFunction, MaxAffinePL, MeshPL, PlFunction};
use crate::polytope::{DelzantPolytope, Facet, Region, DEFAULT_MESH_CAP};
use crate::rational::{frac, int, to_f64, Rational};
use crate::stability::{delta_on_subdivision, donaldson_l, futaki_character, j_norm, l_of_affine};
use crate::triangulation::SimplicialSubdivision;

fn small_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    frac(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

/// A random LP with 1–3 variables, small integer data, and a constraint matrix
/// of full column rank.
pub fn random_lp<R: Rng>(rng: &mut R) -> LinearProgram {
    loop {
        let n = rng.gen_range(1..=3);
        let mut lp = LinearProgram::new(n);
        lp.objective = (0..n).map(|_| int(rng.gen_range(-3..=3))).collect();
        for _ in 0..rng.gen_range(n..=n + 3) {
            let c = (0..n).map(|_| int(rng.gen_range(-3..=3))).collect();
            lp.add_ge(c, int(rng.gen_range(-4..=4)));
        }
        if n > 1 && rng.gen_bool(0.3) {
            let c = (0..n).map(|_| int(rng.gen_range(-2..=2))).collect();
            lp.add_eq(c, int(rng.gen_range(-2..=2)));
        }
        if classify_lp(&lp).is_some() {
            return lp;
        }
    }
}

/// A random unimodular integer matrix: a product of elementary shears and
/// signed permutations.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    if n == 1 {
        m[0][0] = if rng.gen_bool(0.5) { 1 } else { -1 };
        return m;
    }
    for _ in 0..rng.gen_range(1..=4) {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let k: i64 = *[-2, -1, 1, 2].choose(rng).expect("nonempty");
        for c in 0..n {
            m[i][c] += k * m[j][c];
        }
    }
    if rng.gen_bool(0.5) {
        m.swap(0, 1);
    }
    m
}

/// A random translation with small rational entries.
pub fn random_translation<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| small_rational(rng, 3, 2)).collect()
}

/// A random Delzant polygon: a rectangle with a few corners cut along the sum
/// of the two incident normals.
pub fn random_delzant_polygon<R: Rng>(rng: &mut R) -> DelzantPolytope {
    loop {
        let w = rng.gen_range(3..=5);
        let h = rng.gen_range(3..=5);
        let mut facets = vec![
            Facet::new(vec![1, 0], int(0)),
            Facet::new(vec![0, 1], int(0)),
            Facet::new(vec![-1, 0], int(-w)),
            Facet::new(vec![0, -1], int(-h)),
        ];
        for _ in 0..rng.gen_range(0..=2) {
            let p = DelzantPolytope::new(2, facets.clone()).expect("valid polygon");
            let report = p.check_delzant();
            let v = report.vertices.choose(rng).expect("polygon has vertices");
            let (i, j) = (v.incident[0], v.incident[1]);
            let normal = vec![
                facets[i].normal[0] + facets[j].normal[0],
                facets[i].normal[1] + facets[j].normal[1],
            ];
            let at_vertex: Rational = normal
                .iter()
                .zip(&v.point)
                .map(|(a, x)| int(*a) * x)
                .sum();
            facets.push(Facet::new(normal, at_vertex + int(1)));
        }
        if let Ok(p) = DelzantPolytope::new_delzant(2, facets) {
            return p;
        }
    }
}

/// A random affine function with small rational coefficients.
pub fn random_affine<R: Rng>(rng: &mut R, n: usize) -> AffineFunction {
    AffineFunction::new((0..n).map(|_| small_rational(rng, 2, 2)).collect(), small_rational(rng, 2, 2))
}

/// A random convex max-affine function with 2–4 pieces.
pub fn random_convex_pl<R: Rng>(rng: &mut R, n: usize) -> PlFunction {
    let k = rng.gen_range(2..=4);
    PlFunction::MaxAffine(MaxAffinePL::new((0..k).map(|_| random_affine(rng, n)).collect()).expect("pieces share a dimension"))
}

/// The image of a subdivision under `x ↦ A x + t`.
pub fn transform_subdivision(sub: &SimplicialSubdivision, a: &[Vec<i64>], t: &[Rational]) -> Result<SimplicialSubdivision> {
    let mesh = MeshPL {
        subdivision: sub.clone(),
        values: vec![Rational::zero(); sub.points.len()],
    };
    match PlFunction::Mesh(mesh).transform(a, t)? {
        PlFunction::Mesh(m) => Ok(m.subdivision),
        _ => unreachable!("meshes transform to meshes"),
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// Parameters of a suite run.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Fewer random instances and shallower depths.
    pub fast: bool,
}

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn check_lp(rng: &mut ChaCha8Rng, count: usize) -> Check {
    for k in 0..count {
        let prog = random_lp(rng);
        let outcome = lp::solve(&prog).map_err(err)?;
        lp::verify_certificate(&prog, &outcome).map_err(|e| format!("instance {k}: {e}"))?;
        let expected = classify_lp(&prog).expect("generator ensures full rank");
        let got = match &outcome {
            LpOutcome::Optimal { value, .. } => LpClass::Optimal(value.clone()),
            LpOutcome::Unbounded { .. } => LpClass::Unbounded,
            LpOutcome::Infeasible { .. } => LpClass::Infeasible,
        };
        ensure(got == expected, || format!("instance {k}: solver {got:?}, enumeration {expected:?}"))?;
    }
    Ok(format!("{count} LPs agree with enumeration; certificates verified"))
}

fn check_measures() -> Check {
    let one = int(1);
    let cases = [
        (catalog::interval(&one).map_err(err)?, int(1), int(2), int(2)),
        (catalog::simplex2(&one).map_err(err)?, frac(1, 2), int(3), int(6)),
        (catalog::hirzebruch_fano(), int(4), int(8), int(2)),
        (catalog::cube(), int(1), int(6), int(6)),
    ];
    for (p, v, a, s) in &cases {
        ensure(p.volume() == v && p.boundary_area() == a && &p.mean_scalar() == s, || {
            format!("measures of {:?} are {}, {}, {}", p.facets(), p.volume(), p.boundary_area(), p.mean_scalar())
        })?;
    }
    Ok("volumes, boundary areas and mean scalars are exact".into())
}

fn check_futaki() -> Check {
    let one = int(1);
    for p in [catalog::interval(&one).map_err(err)?, catalog::square(&one).map_err(err)?, catalog::simplex2(&one).map_err(err)?, catalog::cube()] {
        ensure(futaki_character(&p).zero, || "expected zero Futaki vector".into())?;
    }
    let f1 = catalog::hirzebruch_fano();
    let r = futaki_character(&f1);
    ensure(r.values == vec![frac(1, 3), frac(1, 3)], || format!("F1 Futaki {:?}", r.values))?;
    let l = r.destabilizer().ok_or("no destabilizer")?;
    let value = l_of_affine(&f1, &l);
    ensure(value == frac(-2, 3), || format!("L(destabilizer) = {value}"))?;
    Ok("Futaki vectors exact; F1 destabilizer has L = -2/3".into())
}

fn check_j_norm(rng: &mut ChaCha8Rng, count: usize) -> Check {
    for k in 0..count {
        let p = if k % 2 == 0 { random_delzant_polygon(rng) } else { catalog::interval(&int(rng.gen_range(1..=3))).map_err(err)? };
        let n = p.dim();
        let f = random_convex_pl(rng, n);
        let l = random_affine(rng, n);
        let q = frac(rng.gen_range(0..=5), rng.gen_range(1..=3));
        let j = j_norm(&p, &f).map_err(err)?;
        ensure(!j.is_negative(), || format!("negative J-norm {j}"))?;
        let brute = j_norm_brute_force(&p, &f).map_err(err)?;
        ensure(j == brute, || format!("instance {k}: LP {j}, enumeration {brute}"))?;
        let shifted = j_norm(&p, &f.add_affine(&l)).map_err(err)?;
        ensure(shifted == j, || format!("instance {k}: not affine invariant ({shifted} vs {j})"))?;
        let scaled = j_norm(&p, &f.scale(&q).map_err(err)?).map_err(err)?;
        ensure(scaled == &q * &j, || format!("instance {k}: not homogeneous"))?;
        let affine = j_norm(&p, &PlFunction::Affine(l)).map_err(err)?;
        ensure(affine.is_zero(), || format!("instance {k}: affine J-norm {affine}"))?;
    }
    Ok(format!("{count} instances: brute force agreement, invariance, homogeneity"))
}

fn check_integration(rng: &mut ChaCha8Rng, count: usize) -> Check {
    for k in 0..count {
        let p = random_delzant_polygon(rng);
        let f = random_convex_pl(rng, 2);
        let l = random_affine(rng, 2);
        let lf = donaldson_l(&p, &f).map_err(err)?;
        let sum = donaldson_l(&p, &f.add_affine(&l)).map_err(err)?;
        ensure(sum == &lf + l_of_affine(&p, &l), || format!("instance {k}: L not additive"))?;
        let exact = to_f64(&p.integrate(&f, Region::Interior).map_err(err)?);
        let (vol, est, se) = monte_carlo_integral(&p, &|x| f.eval_f64(x), 100_000, rng);
        ensure((vol - to_f64(p.volume())).abs() < 0.05 * to_f64(p.volume()), || format!("instance {k}: volume {vol}"))?;
        ensure((est - exact).abs() < 6.0 * se + 1e-3 * exact.abs().max(1.0), || {
            format!("instance {k}: ∫f = {exact}, Monte Carlo {est} ± {se}")
        })?;
    }
    Ok(format!("{count} instances: L additive, integrals match Monte Carlo"))
}

fn check_delta(fast: bool) -> Check {
    let one = int(1);
    let cases = [
        (catalog::interval(&one).map_err(err)?, if fast { 2 } else { 3 }),
        (catalog::square(&one).map_err(err)?, if fast { 1 } else { 2 }),
    ];
    let mut summary = Vec::new();
    for (p, depth) in &cases {
        let seq = p.subdivide_sequence(*depth, DEFAULT_MESH_CAP).map_err(err)?;
        let mut prev: Option<Rational> = None;
        for sub in &seq {
            let r = delta_on_subdivision(p, sub).map_err(err)?;
            ensure(r.delta.is_positive(), || format!("δ = {} not positive", r.delta))?;
            if let Some(pv) = &prev {
                ensure(&r.delta <= pv, || format!("δ increased from {pv} to {}", r.delta))?;
            }
            let f = PlFunction::Mesh(r.minimizer.clone());
            ensure(j_norm(p, &f).map_err(err)? == int(1), || "minimiser J-norm is not 1".into())?;
            ensure(donaldson_l(p, &f).map_err(err)? == r.delta, || "L(minimiser) differs from δ".into())?;
            summary.push(r.delta.to_string());
            prev = Some(r.delta);
        }
    }
    Ok(format!("δ sequences nonincreasing: [{}]", summary.join(", ")))
}

fn check_equivariance(rng: &mut ChaCha8Rng, count: usize) -> Check {
    for k in 0..count {
        let p = random_delzant_polygon(rng);
        let f = random_convex_pl(rng, 2);
        let a = random_unimodular(rng, 2);
        let t = random_translation(rng, 2);
        let q = p.transform(&a, &t).map_err(err)?;
        let g = f.transform(&a, &t).map_err(err)?;
        ensure(q.volume() == p.volume() && q.boundary_area() == p.boundary_area(), || format!("instance {k}: measures changed"))?;
        ensure(donaldson_l(&q, &g).map_err(err)? == donaldson_l(&p, &f).map_err(err)?, || format!("instance {k}: L changed"))?;
        ensure(j_norm(&q, &g).map_err(err)? == j_norm(&p, &f).map_err(err)?, || format!("instance {k}: J changed"))?;
        ensure(futaki_character(&q).zero == futaki_character(&p).zero, || format!("instance {k}: Futaki verdict changed"))?;
        if futaki_character(&p).zero && k % 4 == 0 {
            let sub = p.subdivide(0, DEFAULT_MESH_CAP).map_err(err)?;
            let image = transform_subdivision(&sub, &a, &t).map_err(err)?;
            let d1 = delta_on_subdivision(&p, &sub).map_err(err)?.delta;
            let d2 = delta_on_subdivision(&q, &image).map_err(err)?.delta;
            ensure(d1 == d2, || format!("instance {k}: δ changed from {d1} to {d2}"))?;
        }
    }
    Ok(format!("{count} unimodular-affine transforms preserve exact quantities"))
}

fn check_json(rng: &mut ChaCha8Rng, count: usize) -> Check {
    for _ in 0..count {
        let p = random_delzant_polygon(rng);
        let pj = PolytopeJson::from_polytope(&p);
        let back: PolytopeJson = parse(&to_string(&pj)).map_err(err)?;
        ensure(back == pj && back.to_polytope().map_err(err)? == p, || "polytope JSON round trip".into())?;
        let f = random_convex_pl(rng, 2);
        let fj = PlJson::from_pl(&f);
        let back: PlJson = parse(&to_string(&fj)).map_err(err)?;
        ensure(back == fj && back.to_pl().map_err(err)? == f, || "PL JSON round trip".into())?;
    }
    Ok(format!("{count} polytope and PL documents round-trip"))
}

fn check_abreu(rng: &mut ChaCha8Rng, samples: usize) -> Check {
    let one = int(1);
    let cases = [
        (catalog::interval(&one).map_err(err)?, 2.0, 1e-6),
        (catalog::simplex2(&one).map_err(err)?, 6.0, 1e-4),
        (catalog::square(&one).map_err(err)?, 4.0, 1e-4),
    ];
    let mut worst = 0.0f64;
    for (p, s, tol) in &cases {
        let u = SymplecticPotential::guillemin(p);
        let grid = GridSpec::for_dim(p.dim());
        let mut taken = 0;
        while taken < samples {
            let x: Vec<f64> = (0..p.dim()).map(|_| rng.gen_range(0.0..1.0)).collect();
            if u.boundary_distance(&x) < grid.margin {
                continue;
            }
            let v = abreu_scalar(&u, &x, &grid).map_err(err)?;
            worst = worst.max((v - s).abs());
            ensure((v - s).abs() <= *tol, || format!("S({x:?}) = {v}, expected {s}"))?;
            taken += 1;
        }
    }
    Ok(format!("Guillemin curvature constant; worst deviation {worst:.2e}"))
}

fn check_energies(rng: &mut ChaCha8Rng, count: usize) -> Check {
    let ln2 = std::f64::consts::LN_2;
    let one = int(1);
    let interval = catalog::interval(&one).map_err(err)?;
    let square = catalog::square(&one).map_err(err)?;
    let ui = SymplecticPotential::guillemin(&interval);
    let ci = EnergyContext::new(&interval, &GridSpec::for_dim(1)).map_err(err)?;
    let mi = ci.energy_m(&ui).map_err(err)?;
    ensure((mi.m - (ln2 - 1.5)).abs() < 1e-4, || format!("interval M = {}", mi.m))?;
    let cs = EnergyContext::new(&square, &GridSpec::for_dim(2)).map_err(err)?;
    let ms = cs.energy_m(&SymplecticPotential::guillemin(&square)).map_err(err)?;
    ensure((ms.m - 2.0 * (ln2 - 1.5)).abs() < 1e-4, || format!("square M = {}", ms.m))?;
    for _ in 0..count {
        let l = random_affine(rng, 1);
        let m2 = ci.energy_m(&ui.add_affine(&l).map_err(err)?).map_err(err)?;
        let gap = (m2.m - mi.m - to_f64(&l_of_affine(&interval, &l))).abs();
        ensure(gap <= 1e-8, || format!("translation identity gap {gap:e}"))?;
    }
    let f = PlFunction::MaxAffine(MaxAffinePL::simple(vec![int(1)], frac(1, 2)));
    let ray = ray_energy(&ci, &ui, &f, &[0.0, 1.0, 2.0, 4.0]).map_err(err)?;
    ensure((ray.slope - 0.25).abs() <= 1e-5, || format!("ray slope {}", ray.slope))?;
    Ok(format!("M(interval) = {:.6}, M(square) = {:.6}, ray slope {:.8}", mi.m, ms.m, ray.slope))
}

fn check_m0(fast: bool) -> Check {
    let one = int(1);
    let mut worst = f64::INFINITY;
    for p in [catalog::interval(&one).map_err(err)?, catalog::square(&one).map_err(err)?] {
        let u0 = SymplecticPotential::guillemin(&p);
        let r = ReferenceContext::new(&p, &u0, &GridSpec::for_dim(p.dim())).map_err(err)?;
        let base = r.m0(&u0).map_err(err)?.value;
        let perturbations = perturbations(p.dim());
        let take = if fast { 2 } else { perturbations.len() };
        for (q, eps) in perturbations.iter().take(take) {
            let v = r.m0(&u0.add_smooth(q, eps).map_err(err)?).map_err(err)?.value;
            worst = worst.min(v - base);
            ensure(v >= base - 1e-6, || format!("M₀ decreased by {} for {q:?}", base - v))?;
        }
    }
    Ok(format!("minimum slack {worst:.3e}"))
}

/// Ten convex polynomial perturbations with positive-definite leading forms,
/// each polynomial at scales 1/10 and 1/100.
pub fn perturbations(dim: usize) -> Vec<(Vec<Monomial>, Rational)> {
    let mono = |e: &[u32], c: i64| Monomial { exponents: e.to_vec(), coeff: int(c) };
    let base: Vec<Vec<Monomial>> = if dim == 1 {
        vec![
            vec![mono(&[2], 1)],
            vec![mono(&[4], 1)],
            vec![mono(&[2], 1), mono(&[1], -1)],
            vec![mono(&[4], 1), mono(&[2], 1)],
            vec![mono(&[2], 3), mono(&[1], 2)],
        ]
    } else {
        vec![
            vec![mono(&[2, 0], 1), mono(&[0, 2], 1)],
            vec![mono(&[2, 0], 2), mono(&[1, 1], 1), mono(&[0, 2], 1)],
            vec![mono(&[4, 0], 1), mono(&[0, 4], 1)],
            vec![mono(&[2, 0], 1), mono(&[0, 2], 3), mono(&[1, 0], -1)],
            vec![mono(&[4, 0], 1), mono(&[0, 4], 1), mono(&[2, 0], 1), mono(&[0, 2], 1)],
        ]
    };
    base.into_iter()
        .flat_map(|q| [(q.clone(), frac(1, 10)), (q, frac(1, 100))])
        .collect()
}

fn check_duality(rng: &mut ChaCha8Rng, samples: usize) -> Check {
    let one = int(1);
    let mut worst = 0.0f64;
    for p in [catalog::interval(&one).map_err(err)?, catalog::square(&one).map_err(err)?] {
        let u = SymplecticPotential::guillemin(&p);
        let margin = GridSpec::for_dim(p.dim()).margin;
        let mut taken = 0;
        while taken < samples {
            let x: Vec<f64> = (0..p.dim()).map(|_| rng.gen_range(0.0..1.0)).collect();
            if u.boundary_distance(&x) < margin {
                continue;
            }
            let r = duality_residual(&u, &x).map_err(err)?;
            worst = worst.max(r);
            ensure(r <= 1e-6, || format!("duality residual {r:e} at {x:?}"))?;
            taken += 1;
        }
    }
    Ok(format!("worst residual {worst:.2e}"))
}

fn check_determinism() -> Check {
    let p = catalog::square(&int(1)).map_err(err)?;
    let u = SymplecticPotential::guillemin(&p);
    let grid = GridSpec::for_dim(2);
    let run = |threads: usize| -> std::result::Result<u64, String> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(err)?;
        pool.install(|| {
            let ctx = EnergyContext::new(&p, &grid).map_err(err)?;
            Ok(ctx.energy_m(&u).map_err(err)?.m.to_bits())
        })
    };
    let a = run(1)?;
    let b = run(4)?;
    ensure(a == b, || "energy depends on the thread count".into())?;
    Ok("energies bit-identical across thread counts".into())
}

/// Runs every check and reports each outcome.
pub fn run_suite(cfg: SuiteConfig) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = |fast: usize, full: usize| if cfg.fast { fast } else { full };
    let mut out = Vec::new();
    let mut run = |name: &'static str, f: &mut dyn FnMut(&mut ChaCha8Rng) -> Check| {
        let start = Instant::now();
        let result = f(&mut rng);
        out.push(CheckOutcome {
            name,
            passed: result.is_ok(),
            detail: result.unwrap_or_else(|e| e),
            seconds: start.elapsed().as_secs_f64(),
        });
    };
    run("exact_measures", &mut |_| check_measures());
    run("futaki", &mut |_| check_futaki());
    run("lp_certificates", &mut |r| check_lp(r, n(50, 200)));
    run("j_norm", &mut |r| check_j_norm(r, n(12, 50)));
    run("integration", &mut |r| check_integration(r, n(3, 10)));
    run("delta_sequence", &mut |_| check_delta(cfg.fast));
    run("equivariance", &mut |r| check_equivariance(r, n(8, 20)));
    run("json_round_trip", &mut |r| check_json(r, n(5, 20)));
    run("abreu_constancy", &mut |r| check_abreu(r, n(10, 100)));
    run("energies", &mut |r| check_energies(r, n(5, 20)));
    run("m0_minimizer", &mut |_| check_m0(cfg.fast));
    run("hessian_duality", &mut |r| check_duality(r, n(5, 50)));
    run("determinism", &mut |_| check_determinism());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_produce_valid_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let p = random_delzant_polygon(&mut rng);
            assert!(p.check_delzant().valid);
            let a = random_unimodular(&mut rng, 2);
            let q = p.transform(&a, &random_translation(&mut rng, 2)).unwrap();
            assert!(q.check_delzant().valid);
            assert!(random_convex_pl(&mut rng, 2).is_convex(&p).unwrap().convex);
        }
    }

    #[test]
    fn fast_suite_passes() {
        for outcome in run_suite(SuiteConfig { seed: 3, fast: true }) {
            assert!(outcome.passed, "{}: {}", outcome.name, outcome.detail);
        }
    }
}
