//! The Donaldson functional, Futaki character, J-norm, the stability threshold
//! on a fixed subdivision, and toric test configurations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram};
use crate::plconvex::{AffineFunction, MaxAffinePL, MeshPL, PlFunction};
use crate::polytope::{DelzantPolytope, Facet, Region};
use crate::rational::{denominator_lcm, dot, format_rational, primitive_direction, Point, Rational};
use crate::triangulation::SimplicialSubdivision;

#[derive(Clone, Debug, PartialEq)]
pub struct FutakiReport {
    /// `L(x_1), …, L(x_n)`
    pub values: Vec<Rational>,
    pub zero: bool,
}

impl FutakiReport {
    /// When nonzero, the affine function `−⟨d, x⟩` with `d` the primitive
    /// integer vector along the Futaki character; `L` is negative on it.
    pub fn destabilizer(&self) -> Option<AffineFunction> {
        let d = primitive_direction(&self.values)?;
        let a = d.into_iter().map(|x| -Rational::from_integer(x)).collect();
        Some(AffineFunction::new(a, Rational::zero()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    UnstableAffine,
    DestabilizerFound,
    NoDestabilizerUpToDepth,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::UnstableAffine => "UnstableAffine",
            Verdict::DestabilizerFound => "DestabilizerFound",
            Verdict::NoDestabilizerUpToDepth => "NoDestabilizerUpToDepth",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub futaki: Vec<Rational>,
    pub futaki_zero: bool,
    pub delta_by_depth: Vec<(u32, Rational)>,
    pub verdict: Verdict,
    pub witness: Option<PlFunction>,
    pub witness_l: Option<Rational>,
    pub witness_j: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaResult {
    pub delta: Rational,
    pub minimizer: MeshPL,
}

/// Best single-crease candidate `max(0, ⟨a, x⟩ − c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimpleScanResult {
    pub normal: Vec<i64>,
    pub offset: Rational,
    pub function: PlFunction,
    pub ratio: Rational,
}

/// Combinatorial data of the big polytope `{(u, λ) : f(u) ≤ λ ≤ max_P f}`:
/// raw facet inequalities in dimension `n + 1` and the maximal linearity
/// cells of `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct TestConfiguration {
    pub dim: usize,
    pub facets: Vec<Facet>,
    pub cells: Vec<LinearityCell>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearityCell {
    pub piece: AffineFunction,
    pub vertices: Vec<Point>,
}

/// Per-point weights of `L` on a subdivision: `L(f) = Σ w_v f(v)`.
pub fn l_weights(p: &DelzantPolytope, sub: &SimplicialSubdivision) -> Result<Vec<Rational>> {
    let s = p.mean_scalar();
    let bw = p.boundary_weights(sub)?;
    let iw = p.interior_weights(sub);
    Ok(bw.into_iter().zip(iw).map(|(b, i)| b - &s * i).collect())
}

/// `L(f) = ∫_∂P f dσ − Ŝ ∫_P f dx`
pub fn donaldson_l(p: &DelzantPolytope, f: &PlFunction) -> Result<Rational> {
    let mesh = f.to_mesh(p)?;
    let w = l_weights(p, &mesh.subdivision)?;
    Ok(w.iter().zip(&mesh.values).map(|(a, b)| a * b).sum())
}

pub fn futaki_character(p: &DelzantPolytope) -> FutakiReport {
    let n = p.dim();
    let sub = p.triangulation();
    let w = l_weights(p, &sub).expect("own triangulation has boundary on facets");
    let values: Vec<Rational> = (0..n)
        .map(|i| w.iter().zip(&sub.points).map(|(wv, x)| wv * &x[i]).sum())
        .collect();
    let zero = values.iter().all(Zero::is_zero);
    FutakiReport { values, zero }
}

/// `‖f‖_J` together with the optimal linear part `a` of `ℓ`.
pub fn j_norm_with_slope(p: &DelzantPolytope, f: &PlFunction) -> Result<(Rational, Vec<Rational>)> {
    f.require_convex(p)?;
    let mesh = f.to_mesh(p)?;
    let n = p.dim();
    let mean = p.integrate(&PlFunction::Mesh(mesh.clone()), Region::Interior)? / p.volume();
    // variables (a, t): minimise ⟨a, bary⟩ − t subject to ⟨a, v⟩ − t ≥ −f(v)
    let mut prog = LinearProgram::new(n + 1);
    let mut obj = p.barycenter().clone();
    obj.push(-Rational::one());
    prog.objective = obj;
    let mut seen = std::collections::BTreeSet::new();
    for (v, fv) in mesh.subdivision.points.iter().zip(&mesh.values) {
        if !seen.insert(v) {
            continue;
        }
        let mut c = v.clone();
        c.push(-Rational::one());
        prog.add_ge(c, -fv.clone());
    }
    let (mut x, value) = lp::solve_optimal(&prog)?;
    x.pop();
    Ok((mean + value, x))
}

/// `‖f‖_J = inf_ℓ (1/V)∫_P (f + ℓ) − min_P (f + ℓ)`
pub fn j_norm(p: &DelzantPolytope, f: &PlFunction) -> Result<Rational> {
    Ok(j_norm_with_slope(p, f)?.0)
}

/// `L(f) / ‖f‖_J`
pub fn stability_ratio(p: &DelzantPolytope, f: &PlFunction) -> Result<Rational> {
    let j = j_norm(p, f)?;
    if j.is_zero() {
        return Err(Error::AffineInput);
    }
    Ok(donaldson_l(p, f)? / j)
}

fn futaki_error(report: &FutakiReport) -> Error {
    let l = report.destabilizer().expect("nonzero character");
    let a: Vec<String> = l.a.iter().map(format_rational).collect();
    Error::FutakiNonzero(format!(
        "futaki = [{}]; L is negative on the affine function with gradient [{}]",
        report.values.iter().map(format_rational).collect::<Vec<_>>().join(", "),
        a.join(", ")
    ))
}

/// Minimum of `L` over convex functions linear on the cells of `sub`,
/// normalised by `f ≥ 0`, `f(barycenter) = 0`, and `(1/V)∫f = 1`.
pub fn delta_on_subdivision(p: &DelzantPolytope, sub: &SimplicialSubdivision) -> Result<DeltaResult> {
    let fut = futaki_character(p);
    if !fut.zero {
        return Err(futaki_error(&fut));
    }
    delta_unchecked(p, sub)
}

fn delta_unchecked(p: &DelzantPolytope, sub: &SimplicialSubdivision) -> Result<DeltaResult> {
    if sub.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: sub.dim(),
        });
    }
    if &sub.total_volume() != p.volume() {
        return Err(Error::InvalidInput("subdivision does not cover the polytope".into()));
    }
    let m = sub.points.len();
    let unit = |i: usize| {
        let mut v = vec![Rational::zero(); m];
        v[i] = Rational::one();
        v
    };
    let mut prog = LinearProgram::new(m);
    prog.objective = l_weights(p, sub)?;
    for i in 0..m {
        prog.add_ge(unit(i), Rational::zero());
    }
    for h in MeshPL::hinges(sub) {
        let mut c = vec![Rational::zero(); m];
        for (v, w) in h.terms {
            c[v] += w;
        }
        prog.add_ge(c, Rational::zero());
    }
    let (cell, lambda) = sub
        .locate(p.barycenter())
        .ok_or_else(|| Error::InvalidInput("barycenter outside subdivision".into()))?;
    let mut gauge = vec![Rational::zero(); m];
    for (&v, l) in sub.cells[cell].iter().zip(lambda) {
        gauge[v] += l;
    }
    prog.add_eq(gauge, Rational::zero());
    prog.add_eq(p.interior_weights(sub), p.volume().clone());
    let (values, delta) = lp::solve_optimal(&prog)?;
    Ok(DeltaResult {
        delta,
        minimizer: MeshPL {
            subdivision: sub.clone(),
            values,
        },
    })
}

/// Futaki check followed by the threshold LP on nested grid subdivisions of
/// depth `0..=max_depth`.
pub fn delta_scan(p: &DelzantPolytope, max_depth: u32, cap: usize) -> Result<StabilityReport> {
    let fut = futaki_character(p);
    if !fut.zero {
        let l = fut.destabilizer().expect("nonzero character");
        let f = PlFunction::Affine(l);
        let lval = donaldson_l(p, &f)?;
        return Ok(StabilityReport {
            futaki: fut.values,
            futaki_zero: false,
            delta_by_depth: Vec::new(),
            verdict: Verdict::UnstableAffine,
            witness: Some(f),
            witness_l: Some(lval),
            witness_j: Some(Rational::zero()),
        });
    }
    let subs = p.subdivide_sequence(max_depth, cap)?;
    let results: Vec<DeltaResult> = subs
        .par_iter()
        .map(|s| delta_unchecked(p, s))
        .collect::<Result<_>>()?;
    let delta_by_depth: Vec<(u32, Rational)> = results
        .iter()
        .enumerate()
        .map(|(k, r)| (k as u32, r.delta.clone()))
        .collect();
    let (verdict, chosen) = match results.iter().position(|r| !r.delta.is_positive()) {
        Some(k) => (Verdict::DestabilizerFound, k),
        None => (Verdict::NoDestabilizerUpToDepth, results.len() - 1),
    };
    let witness = PlFunction::Mesh(results[chosen].minimizer.clone());
    let witness_l = donaldson_l(p, &witness)?;
    let witness_j = j_norm(p, &witness)?;
    Ok(StabilityReport {
        futaki: fut.values,
        futaki_zero: true,
        delta_by_depth,
        verdict,
        witness: Some(witness),
        witness_l: Some(witness_l),
        witness_j: Some(witness_j),
    })
}

/// Smallest stability ratio among `max(0, ⟨a, x⟩ − c)` for the given crease
/// normals `a` and, per normal, offsets `c`. Candidates affine on P are skipped.
pub fn simple_pl_scan(
    p: &DelzantPolytope,
    normals: &[Vec<i64>],
    offsets: &[Vec<Rational>],
) -> Result<Option<SimpleScanResult>> {
    let candidates: Vec<(usize, &Rational)> = normals
        .iter()
        .enumerate()
        .flat_map(|(i, _)| offsets.get(i).into_iter().flatten().map(move |c| (i, c)))
        .collect();
    let scored: Vec<Option<SimpleScanResult>> = candidates
        .par_iter()
        .map(|&(i, c)| {
            let a: Vec<Rational> = normals[i].iter().map(|&x| Rational::from_integer(x.into())).collect();
            let f = PlFunction::MaxAffine(MaxAffinePL::simple(a, c.clone()));
            match stability_ratio(p, &f) {
                Ok(ratio) => Ok(Some(SimpleScanResult {
                    normal: normals[i].clone(),
                    offset: c.clone(),
                    function: f,
                    ratio,
                })),
                Err(Error::AffineInput) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    Ok(scored.into_iter().flatten().fold(None, |best: Option<SimpleScanResult>, r| match best {
        Some(b) if b.ratio <= r.ratio => Some(b),
        _ => Some(r),
    }))
}

/// Scales a rational normal to a primitive integer vector, returning the
/// integer normal and the rescaled offset.
fn primitive_facet(normal: &[Rational], offset: &Rational) -> Result<Facet> {
    let l = denominator_lcm(normal);
    let ints: Vec<BigInt> = normal
        .iter()
        .map(|q| (q * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let scale = Rational::new(l, g.clone());
    let normal = ints
        .into_iter()
        .map(|x| {
            (x / &g)
                .to_i64()
                .ok_or_else(|| Error::InvalidInput("normal entry exceeds 64 bits".into()))
        })
        .collect::<Result<_>>()?;
    Ok(Facet::new(normal, offset * scale))
}

pub fn build_test_config(p: &DelzantPolytope, f: &PlFunction) -> Result<TestConfiguration> {
    let canon = f.canonical_pieces(p)?;
    if canon.pieces.len() == 1 && canon.pieces[0].is_constant() {
        return Err(Error::DegenerateTestConfiguration);
    }
    let n = p.dim();
    let top = p
        .vertices()
        .iter()
        .map(|v| canon.eval(v))
        .max()
        .expect("polytope has vertices");
    let mut facets: Vec<Facet> = p
        .facets()
        .iter()
        .map(|fa| {
            let mut normal = fa.normal.clone();
            normal.push(0);
            Facet::new(normal, fa.offset.clone())
        })
        .collect();
    for piece in &canon.pieces {
        let mut normal: Vec<Rational> = piece.a.iter().map(|x| -x).collect();
        normal.push(Rational::one());
        facets.push(primitive_facet(&normal, &piece.b)?);
    }
    let mut cap = vec![0i64; n + 1];
    cap[n] = -1;
    facets.push(Facet::new(cap, -top));
    let cells = canon
        .linearity_cells(p)
        .into_iter()
        .map(|(i, vertices)| LinearityCell {
            piece: canon.pieces[i].clone(),
            vertices,
        })
        .collect();
    Ok(TestConfiguration {
        dim: n + 1,
        facets,
        cells,
    })
}

/// `L` on an affine function, using `L(1) = 0` so that `L(⟨a,x⟩ + b) = Σ a_i L(x_i)`.
pub fn l_of_affine(p: &DelzantPolytope, l: &AffineFunction) -> Rational {
    dot(&l.a, &futaki_character(p).values)
}
