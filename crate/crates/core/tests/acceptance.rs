//! Acceptance criteria, each run against its tolerance and time limit.
//! Prints one PASS/FAIL line per criterion and exits nonzero if any fails.

use std::f64::consts::LN_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toricstab::catalog;
use toricstab::kahler::{
    abreu_scalar, duality_residual, ray_energy, scalar_samples, EnergyContext, GridSpec, ReferenceContext,
    SymplecticPotential,
};
use toricstab::lp::{self, LpOutcome};
use toricstab::oracle::{classify_lp, j_norm_brute_force, LpClass};
use toricstab::plconvex::{AffineFunction, MaxAffinePL, PlFunction};
use toricstab::polytope::{DelzantPolytope, DEFAULT_MESH_CAP};
use toricstab::rational::{frac, int, to_f64, Rational};
use toricstab::stability::{delta_on_subdivision, donaldson_l, futaki_character, j_norm, l_of_affine};
use toricstab::triangulation::SimplicialSubdivision;
use toricstab::verify::{
    perturbations, random_affine, random_convex_pl, random_delzant_polygon, random_lp, random_translation,
    random_unimodular, transform_subdivision,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn unit() -> Rational {
    int(1)
}

fn hinge(slope: i64, c: Rational) -> PlFunction {
    PlFunction::MaxAffine(MaxAffinePL::simple(vec![int(slope)], c))
}

fn exact_measures() -> Outcome {
    let cases: [(DelzantPolytope, Rational, Rational, Rational); 3] = [
        (catalog::interval(&unit()).map_err(e)?, int(1), int(2), int(2)),
        (catalog::simplex2(&unit()).map_err(e)?, frac(1, 2), int(3), int(6)),
        (catalog::hirzebruch_fano(), int(4), int(8), int(2)),
    ];
    for (p, v, a, s) in &cases {
        ensure(p.volume() == v, || format!("volume {} != {v}", p.volume()))?;
        ensure(p.boundary_area() == a, || format!("area {} != {a}", p.boundary_area()))?;
        ensure(&p.mean_scalar() == s, || format!("Ŝ {} != {s}", p.mean_scalar()))?;
    }
    Ok("interval 1,2,2; simplex 1/2,3,6; F1 4,8,2".into())
}

fn futaki() -> Outcome {
    for p in [
        catalog::interval(&unit()).map_err(e)?,
        catalog::square(&unit()).map_err(e)?,
        catalog::simplex2(&unit()).map_err(e)?,
    ] {
        let r = futaki_character(&p);
        ensure(r.zero && r.values.iter().all(Zero::is_zero), || format!("nonzero Futaki {:?}", r.values))?;
    }
    let f1 = catalog::hirzebruch_fano();
    let r = futaki_character(&f1);
    ensure(r.values == vec![frac(1, 3), frac(1, 3)], || format!("F1 Futaki {:?}", r.values))?;
    let l = AffineFunction::new(vec![int(-1), int(-1)], int(0));
    ensure(r.destabilizer().as_ref() == Some(&l), || "destabilizer is not -x-y".into())?;
    let value = l_of_affine(&f1, &l);
    ensure(value == frac(-2, 3), || format!("L(-x-y) = {value}"))?;
    Ok("zero on interval/square/simplex; F1 (1/3, 1/3), L(-x-y) = -2/3".into())
}

fn j_norm_criterion() -> Outcome {
    let p = catalog::interval(&unit()).map_err(e)?;
    let a = j_norm(&p, &hinge(1, frac(1, 2))).map_err(e)?;
    ensure(a == frac(1, 8), || format!("‖(x-1/2)+‖ = {a}"))?;
    let b = j_norm(&p, &hinge(2, int(1))).map_err(e)?;
    ensure(b == frac(1, 4), || format!("‖max(0,2x-1)‖ = {b}"))?;
    let aff = j_norm(&p, &PlFunction::Affine(AffineFunction::new(vec![frac(3, 2)], int(-1)))).map_err(e)?;
    ensure(aff.is_zero(), || format!("affine J-norm {aff}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..50 {
        let p = match k % 3 {
            0 => catalog::interval(&int(rng.gen_range(1..=3))).map_err(e)?,
            1 => catalog::hirzebruch_fano(),
            _ => random_delzant_polygon(&mut rng),
        };
        let n = p.dim();
        let f = random_convex_pl(&mut rng, n);
        let l = random_affine(&mut rng, n);
        let q = frac(rng.gen_range(0..=6), rng.gen_range(1..=4));
        let j = j_norm(&p, &f).map_err(e)?;
        ensure(j == j_norm(&p, &f.add_affine(&l)).map_err(e)?, || format!("instance {k}: affine invariance"))?;
        ensure(&q * &j == j_norm(&p, &f.scale(&q).map_err(e)?).map_err(e)?, || format!("instance {k}: homogeneity"))?;
        ensure(j_norm(&p, &PlFunction::Affine(l)).map_err(e)?.is_zero(), || format!("instance {k}: affine not 0"))?;
        let brute = j_norm_brute_force(&p, &f).map_err(e)?;
        ensure(j == brute, || format!("instance {k}: LP {j} vs enumeration {brute}"))?;
    }
    Ok("1/8, 1/4, affine 0; 50 instances invariant, homogeneous, match enumeration".into())
}

fn delta_sequence(p: &DelzantPolytope, depth: u32) -> Result<Vec<Rational>, String> {
    let seq = p.subdivide_sequence(depth, DEFAULT_MESH_CAP).map_err(e)?;
    let mut out: Vec<Rational> = Vec::new();
    for sub in &seq {
        let r = delta_on_subdivision(p, sub).map_err(e)?;
        ensure(r.delta.is_positive(), || format!("δ = {} not positive", r.delta))?;
        if let Some(prev) = out.last() {
            ensure(&r.delta <= prev, || format!("δ increased from {prev} to {}", r.delta))?;
        }
        let f = PlFunction::Mesh(r.minimizer);
        ensure(j_norm(p, &f).map_err(e)? == int(1), || "minimiser J-norm differs from 1".into())?;
        ensure(donaldson_l(p, &f).map_err(e)? == r.delta, || "L(minimiser) differs from δ".into())?;
        out.push(r.delta);
    }
    Ok(out)
}

fn delta_lp() -> Outcome {
    let p = catalog::interval(&unit()).map_err(e)?;
    let sigma = SimplicialSubdivision {
        points: vec![vec![int(0)], vec![frac(1, 2)], vec![int(1)]],
        cells: vec![vec![0, 1], vec![1, 2]],
        depth: None,
    };
    let r = delta_on_subdivision(&p, &sigma).map_err(e)?;
    ensure(r.delta == int(2), || format!("δ_Σ = {}", r.delta))?;
    let interval = delta_sequence(&p, 3)?;
    let square = delta_sequence(&catalog::square(&unit()).map_err(e)?, 2)?;
    let fmt = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    Ok(format!("δ_Σ = 2; interval [{}]; square [{}]", fmt(&interval), fmt(&square)))
}

fn lp_certificates() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut counts = [0usize; 3];
    for k in 0..200 {
        let prog = random_lp(&mut rng);
        let out = lp::solve(&prog).map_err(e)?;
        lp::verify_certificate(&prog, &out).map_err(|m| format!("instance {k}: {m}"))?;
        let got = match &out {
            LpOutcome::Optimal { value, .. } => LpClass::Optimal(value.clone()),
            LpOutcome::Unbounded { .. } => LpClass::Unbounded,
            LpOutcome::Infeasible { .. } => LpClass::Infeasible,
        };
        let expected = classify_lp(&prog).ok_or("generator produced a rank-deficient LP")?;
        ensure(got == expected, || format!("instance {k}: solver {got:?} vs enumeration {expected:?}"))?;
        counts[match got {
            LpClass::Optimal(_) => 0,
            LpClass::Unbounded => 1,
            LpClass::Infeasible => 2,
        }] += 1;
    }
    Ok(format!(
        "200 LPs match enumeration ({} optimal, {} unbounded, {} infeasible)",
        counts[0], counts[1], counts[2]
    ))
}

fn abreu() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cases = [
        (catalog::interval(&unit()).map_err(e)?, 2.0, 1e-6),
        (catalog::simplex2(&unit()).map_err(e)?, 6.0, 1e-4),
        (catalog::square(&unit()).map_err(e)?, 4.0, 1e-4),
    ];
    let mut details = Vec::new();
    for (p, s, tol) in &cases {
        let u = SymplecticPotential::guillemin(p);
        let grid = GridSpec::for_dim(p.dim());
        let mut worst = 0.0f64;
        let mut taken = 0;
        while taken < 100 {
            let x: Vec<f64> = (0..p.dim()).map(|_| rng.gen_range(0.0..1.0)).collect();
            if u.boundary_distance(&x) < grid.margin {
                continue;
            }
            let v = abreu_scalar(&u, &x, &grid).map_err(e)?;
            worst = worst.max((v - s).abs());
            taken += 1;
        }
        ensure(worst <= *tol, || format!("S deviates by {worst:e} from {s}"))?;
        let (_, summary) = scalar_samples(&u, &grid).map_err(e)?;
        ensure((summary.mean - summary.mean_scalar).abs() <= 1e-3, || {
            format!("mean S {} vs Ŝ {}", summary.mean, summary.mean_scalar)
        })?;
        details.push(format!("{s}: {worst:.1e}"));
    }
    Ok(format!("worst deviations {}", details.join(", ")))
}

fn k_energy() -> Outcome {
    let interval = catalog::interval(&unit()).map_err(e)?;
    let square = catalog::square(&unit()).map_err(e)?;
    let mi = EnergyContext::new(&interval, &GridSpec::for_dim(1))
        .and_then(|c| c.energy_m(&SymplecticPotential::guillemin(&interval)))
        .map_err(e)?;
    let ms = EnergyContext::new(&square, &GridSpec::for_dim(2))
        .and_then(|c| c.energy_m(&SymplecticPotential::guillemin(&square)))
        .map_err(e)?;
    let di = (mi.m * mi.volume - (LN_2 - 1.5)).abs();
    let ds = (ms.m * ms.volume - 2.0 * (LN_2 - 1.5)).abs();
    ensure(di <= 1e-4, || format!("interval VM off by {di:e}"))?;
    ensure(ds <= 1e-4, || format!("square VM off by {ds:e}"))?;
    Ok(format!("interval error {di:.1e}, square error {ds:.1e}"))
}

fn translation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for p in [catalog::interval(&unit()).map_err(e)?, catalog::square(&unit()).map_err(e)?] {
        let ctx = EnergyContext::new(&p, &GridSpec::for_dim(p.dim())).map_err(e)?;
        let u = SymplecticPotential::guillemin(&p);
        let base = ctx.energy_m(&u).map_err(e)?;
        for _ in 0..20 {
            let l = AffineFunction::new(
                (0..p.dim()).map(|_| frac(rng.gen_range(-8..=8), 4)).collect(),
                frac(rng.gen_range(-8..=8), 4),
            );
            let m = ctx.energy_m(&u.add_affine(&l).map_err(e)?).map_err(e)?;
            let gap = ((m.m - base.m) * base.volume - to_f64(&l_of_affine(&p, &l))).abs();
            worst = worst.max(gap);
        }
    }
    ensure(worst <= 1e-8, || format!("worst gap {worst:e}"))?;
    Ok(format!("20 affine shifts on interval and square; worst gap {worst:.1e}"))
}

fn ray() -> Outcome {
    let p = catalog::interval(&unit()).map_err(e)?;
    let ctx = EnergyContext::new(&p, &GridSpec::for_dim(1)).map_err(e)?;
    let u = SymplecticPotential::guillemin(&p);
    let r = ray_energy(&ctx, &u, &hinge(1, frac(1, 2)), &[0.0, 1.0, 2.0, 4.0]).map_err(e)?;
    ensure(r.l_f == frac(1, 4), || format!("L(f) = {}", r.l_f))?;
    ensure((r.slope - 0.25).abs() <= 1e-5, || format!("slope {}", r.slope))?;
    let linear = r
        .rows
        .iter()
        .map(|(t, m)| (m - r.base.m - t * to_f64(&r.l_f)).abs())
        .fold(0.0f64, f64::max);
    ensure(linear <= 1e-4, || format!("ray deviates from linear by {linear:e}"))?;
    Ok(format!("slope {:.10}", r.slope))
}

fn m0_minimizer() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut count = 0;
    for p in [catalog::interval(&unit()).map_err(e)?, catalog::square(&unit()).map_err(e)?] {
        let u0 = SymplecticPotential::guillemin(&p);
        let r = ReferenceContext::new(&p, &u0, &GridSpec::for_dim(p.dim())).map_err(e)?;
        let base = r.m0(&u0).map_err(e)?.value;
        for (q, eps) in perturbations(p.dim()) {
            let v = r.m0(&u0.add_smooth(&q, &eps).map_err(e)?).map_err(e)?.value;
            worst = worst.min(v - base);
            count += 1;
        }
    }
    ensure(count == 20, || format!("{count} perturbations instead of 10 per polytope"))?;
    ensure(worst >= -1e-6, || format!("M₀ decreased by {}", -worst))?;
    Ok(format!("10 perturbations each on interval and square; minimum slack {worst:.2e}"))
}

fn duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for p in [catalog::interval(&unit()).map_err(e)?, catalog::square(&unit()).map_err(e)?] {
        let u = SymplecticPotential::guillemin(&p);
        let margin = GridSpec::for_dim(p.dim()).margin;
        let mut taken = 0;
        while taken < 50 {
            let x: Vec<f64> = (0..p.dim()).map(|_| rng.gen_range(0.0..1.0)).collect();
            if u.boundary_distance(&x) < margin {
                continue;
            }
            worst = worst.max(duality_residual(&u, &x).map_err(e)?);
            taken += 1;
        }
    }
    ensure(worst <= 1e-6, || format!("worst residual {worst:e}"))?;
    Ok(format!("100 points; worst residual {worst:.1e}"))
}

fn equivariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut deltas = 0;
    for k in 0..20 {
        let p = match k % 5 {
            0 => catalog::square(&unit()).map_err(e)?,
            1 => catalog::simplex2(&unit()).map_err(e)?,
            2 => catalog::hirzebruch_fano(),
            3 => catalog::interval(&int(2)).map_err(e)?,
            _ => random_delzant_polygon(&mut rng),
        };
        let n = p.dim();
        let a = random_unimodular(&mut rng, n);
        let t = random_translation(&mut rng, n);
        let f = random_convex_pl(&mut rng, n);
        let q = p.transform(&a, &t).map_err(e)?;
        let g = f.transform(&a, &t).map_err(e)?;
        ensure(q.volume() == p.volume(), || format!("instance {k}: volume"))?;
        ensure(q.boundary_area() == p.boundary_area(), || format!("instance {k}: area"))?;
        ensure(donaldson_l(&q, &g).map_err(e)? == donaldson_l(&p, &f).map_err(e)?, || format!("instance {k}: L"))?;
        ensure(j_norm(&q, &g).map_err(e)? == j_norm(&p, &f).map_err(e)?, || format!("instance {k}: J"))?;
        let zero = futaki_character(&p).zero;
        ensure(futaki_character(&q).zero == zero, || format!("instance {k}: Futaki verdict"))?;
        if zero {
            let sub = p.subdivide(1, DEFAULT_MESH_CAP).map_err(e)?;
            let image = transform_subdivision(&sub, &a, &t).map_err(e)?;
            let d1 = delta_on_subdivision(&p, &sub).map_err(e)?.delta;
            let d2 = delta_on_subdivision(&q, &image).map_err(e)?.delta;
            ensure(d1 == d2, || format!("instance {k}: δ_Σ {d1} vs {d2}"))?;
            deltas += 1;
        }
    }
    Ok(format!("20 transforms; δ_Σ compared on {deltas}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("exact measures", 1, exact_measures),
        ("Futaki character", 1, futaki),
        ("J-norm", 10, j_norm_criterion),
        ("δ LP", 60, delta_lp),
        ("LP certificates", 30, lp_certificates),
        ("Abreu operator", 60, abreu),
        ("K-energy value", 60, k_energy),
        ("translation identity", 60, translation),
        ("ray slope", 60, ray),
        ("M₀ minimizer", 120, m0_minimizer),
        ("Hessian-inverse duality", 30, duality),
        ("equivariance", 60, equivariance),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over the {limit} s limit; {d}")),
            (Err(m), _) => ("FAIL", m.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "{status} {:>2} {name:<24} {:>8.3}s / {limit:>3}s  {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
