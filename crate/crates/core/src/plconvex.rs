//! Rational piecewise-linear functions on a polytope, in max-of-affine and
//! mesh form, with exact conversion, evaluation, convexity checks, and
//! minimisation.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram};
use crate::polytope::{enumerate_vertices_general, DelzantPolytope};
use crate::rational::{barycentric, dot, int, inverse, solve, Point, Rational};
use crate::triangulation::{pulling, PolytopeCell, SimplicialSubdivision};

/// `x ↦ ⟨a, x⟩ + b`
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineFunction {
    pub a: Vec<Rational>,
    pub b: Rational,
}

impl AffineFunction {
    pub fn new(a: Vec<Rational>, b: Rational) -> Self {
        Self { a, b }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![Rational::zero(); dim], Rational::zero())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::new(vec![Rational::zero(); dim], c)
    }

    /// The coordinate function `x_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut a = vec![Rational::zero(); dim];
        a[i] = Rational::one();
        Self::new(a, Rational::zero())
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.a, x) + &self.b
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.a
            .iter()
            .zip(x)
            .map(|(a, xi)| crate::rational::to_f64(a) * xi)
            .sum::<f64>()
            + crate::rational::to_f64(&self.b)
    }

    pub fn add(&self, other: &AffineFunction) -> AffineFunction {
        AffineFunction::new(
            self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
            &self.b + &other.b,
        )
    }

    pub fn scale(&self, q: &Rational) -> AffineFunction {
        AffineFunction::new(self.a.iter().map(|x| x * q).collect(), &self.b * q)
    }

    pub fn is_constant(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    /// Pullback along the inverse of `x ↦ A x + t`, i.e. the function
    /// `x' ↦ self(A^{-1}(x' − t))`.
    pub fn transform(&self, a_inv: &[Vec<Rational>], t: &[Rational]) -> AffineFunction {
        let n = self.a.len();
        let a: Vec<Rational> = (0..n)
            .map(|i| (0..n).map(|j| &self.a[j] * &a_inv[j][i]).sum())
            .collect();
        let b = &self.b - dot(&a, t);
        AffineFunction::new(a, b)
    }
}

/// `x ↦ max_i piece_i(x)`
#[derive(Clone, Debug, PartialEq)]
pub struct MaxAffinePL {
    pub pieces: Vec<AffineFunction>,
}

/// Linear interpolation of point values over a simplicial subdivision.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshPL {
    pub subdivision: SimplicialSubdivision,
    pub values: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PlFunction {
    Affine(AffineFunction),
    MaxAffine(MaxAffinePL),
    Mesh(MeshPL),
}

/// A failed hinge: across `face`, the linear piece of `cell` extended to the
/// opposite vertex of the neighbouring cell exceeds the stored value by `excess`.
#[derive(Clone, Debug, PartialEq)]
pub struct HingeViolation {
    pub face: Vec<usize>,
    pub cell: usize,
    pub opposite: usize,
    pub excess: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvexityVerdict {
    pub convex: bool,
    pub violation: Option<HingeViolation>,
}

/// A hinge constraint `Σ coeff_v f(v) ≥ 0` in sparse form.
#[derive(Clone, Debug, PartialEq)]
pub struct Hinge {
    pub face: Vec<usize>,
    pub cell: usize,
    pub opposite: usize,
    pub terms: Vec<(usize, Rational)>,
}

impl MaxAffinePL {
    pub fn new(pieces: Vec<AffineFunction>) -> Result<Self> {
        let Some(first) = pieces.first() else {
            return Err(Error::InvalidInput("max-affine function needs a piece".into()));
        };
        let n = first.a.len();
        if let Some(p) = pieces.iter().find(|p| p.a.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.a.len(),
            });
        }
        Ok(Self { pieces })
    }

    /// `max(0, ⟨a, x⟩ − c)`
    pub fn simple(a: Vec<Rational>, c: Rational) -> Self {
        let n = a.len();
        Self {
            pieces: vec![AffineFunction::zero(n), AffineFunction::new(a, -c)],
        }
    }

    pub fn dim(&self) -> usize {
        self.pieces[0].a.len()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.pieces.iter().map(|p| p.eval(x)).max().unwrap()
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.eval_f64(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Drops duplicate pieces and pieces that are nowhere strictly maximal on P.
    pub fn canonicalize(&self, p: &DelzantPolytope) -> Result<MaxAffinePL> {
        let mut pieces: Vec<AffineFunction> = Vec::new();
        for q in &self.pieces {
            if !pieces.contains(q) {
                pieces.push(q.clone());
            }
        }
        let mut i = 0;
        while i < pieces.len() && pieces.len() > 1 {
            // maximise s subject to s ≤ piece_i − piece_j (j ≠ i), x ∈ P
            let n = p.dim();
            let mut prog = LinearProgram::new(n + 1);
            prog.objective[n] = -Rational::one();
            for f in p.facets() {
                let mut c = f.normal_rational();
                c.push(Rational::zero());
                prog.add_ge(c, f.offset.clone());
            }
            for (j, q) in pieces.iter().enumerate() {
                if j == i {
                    continue;
                }
                let mut c: Vec<Rational> = pieces[i].a.iter().zip(&q.a).map(|(x, y)| x - y).collect();
                c.push(-Rational::one());
                prog.add_ge(c, &q.b - &pieces[i].b);
            }
            let (_, value) = lp::solve_optimal(&prog)?;
            if !(-value).is_positive() {
                pieces.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(MaxAffinePL { pieces })
    }

    /// For each piece, the vertices of its region `{x ∈ P : piece_i(x) ≥ piece_j(x) ∀j}`.
    /// Regions with empty interior are omitted.
    pub fn linearity_cells(&self, p: &DelzantPolytope) -> Vec<(usize, Vec<Point>)> {
        let n = p.dim();
        let base: Vec<(Vec<Rational>, Rational)> = p
            .facets()
            .iter()
            .map(|f| (f.normal_rational(), f.offset.clone()))
            .collect();
        let mut out = Vec::new();
        for (i, pi) in self.pieces.iter().enumerate() {
            let mut cons = base.clone();
            for (j, pj) in self.pieces.iter().enumerate() {
                if j != i {
                    let a: Vec<Rational> = pi.a.iter().zip(&pj.a).map(|(x, y)| x - y).collect();
                    if a.iter().all(Zero::is_zero) {
                        continue;
                    }
                    cons.push((a, &pj.b - &pi.b));
                }
            }
            let verts = enumerate_vertices_general(n, &cons);
            let refs: Vec<&Point> = verts.iter().collect();
            if !verts.is_empty() && crate::rational::affine_dimension(&refs) == n {
                out.push((i, verts));
            }
        }
        out
    }
}

impl MeshPL {
    pub fn new(subdivision: SimplicialSubdivision, values: Vec<Rational>) -> Result<Self> {
        if values.len() != subdivision.points.len() {
            return Err(Error::DimensionMismatch {
                expected: subdivision.points.len(),
                got: values.len(),
            });
        }
        Ok(Self { subdivision, values })
    }

    pub fn eval(&self, x: &[Rational]) -> Option<Rational> {
        let (c, l) = self.subdivision.locate(x)?;
        Some(
            self.subdivision.cells[c]
                .iter()
                .zip(&l)
                .map(|(&v, w)| &self.values[v] * w)
                .sum(),
        )
    }

    /// The affine function agreeing with the mesh on cell `c`.
    pub fn cell_affine(&self, c: usize) -> AffineFunction {
        let cell = &self.subdivision.cells[c];
        let rows: Vec<Vec<Rational>> = cell
            .iter()
            .map(|&v| {
                let mut r = self.subdivision.points[v].clone();
                r.push(Rational::one());
                r
            })
            .collect();
        let rhs: Vec<Rational> = cell.iter().map(|&v| self.values[v].clone()).collect();
        let mut sol = solve(&rows, &rhs).expect("cells are nondegenerate simplices");
        let b = sol.pop().unwrap();
        AffineFunction::new(sol, b)
    }

    /// All hinge constraints of the subdivision, one per interior face.
    pub fn hinges(sub: &SimplicialSubdivision) -> Vec<Hinge> {
        sub.faces()
            .into_par_iter()
            .filter(|f| f.incident.len() == 2)
            .map(|f| {
                let (c1, _) = f.incident[0];
                let (_, q2) = f.incident[1];
                let l = barycentric(&sub.cell_points(c1), &sub.points[q2])
                    .expect("neighbouring vertex lies in the affine hull");
                let mut terms = vec![(q2, Rational::one())];
                for (&v, w) in sub.cells[c1].iter().zip(l) {
                    if !w.is_zero() {
                        terms.push((v, -w));
                    }
                }
                Hinge {
                    face: f.vertices,
                    cell: c1,
                    opposite: q2,
                    terms,
                }
            })
            .collect()
    }

    pub fn is_convex(&self) -> ConvexityVerdict {
        let violation = Self::hinges(&self.subdivision).into_iter().find_map(|h| {
            let slack: Rational = h.terms.iter().map(|(v, c)| c * &self.values[*v]).sum();
            slack.is_negative().then(|| HingeViolation {
                face: h.face,
                cell: h.cell,
                opposite: h.opposite,
                excess: -slack,
            })
        });
        ConvexityVerdict {
            convex: violation.is_none(),
            violation,
        }
    }

    /// Minimum value and the lexicographically smallest point attaining it.
    pub fn min_point(&self) -> (Rational, Point) {
        let (value, point) = self
            .values
            .iter()
            .zip(&self.subdivision.points)
            .min_by(|(a, p), (b, q)| a.cmp(b).then_with(|| p.cmp(q)))
            .expect("mesh has points");
        (value.clone(), point.clone())
    }

    /// Convex max-of-affine representation (one piece per distinct cell piece).
    pub fn to_max_affine(&self) -> MaxAffinePL {
        let mut pieces: Vec<AffineFunction> = (0..self.subdivision.cells.len())
            .map(|c| self.cell_affine(c))
            .collect();
        pieces.sort();
        pieces.dedup();
        MaxAffinePL { pieces }
    }
}

impl PlFunction {
    pub fn dim(&self) -> usize {
        match self {
            PlFunction::Affine(a) => a.a.len(),
            PlFunction::MaxAffine(m) => m.dim(),
            PlFunction::Mesh(m) => m.subdivision.dim(),
        }
    }

    fn check_dim(&self, p: &DelzantPolytope) -> Result<()> {
        if self.dim() != p.dim() {
            return Err(Error::DimensionMismatch {
                expected: p.dim(),
                got: self.dim(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, p: &DelzantPolytope, x: &[Rational]) -> Result<Rational> {
        self.check_dim(p)?;
        if !p.contains(x) {
            return Err(Error::PointOutsideP);
        }
        match self {
            PlFunction::Affine(a) => Ok(a.eval(x)),
            PlFunction::MaxAffine(m) => Ok(m.eval(x)),
            PlFunction::Mesh(m) => m.eval(x).ok_or(Error::PointOutsideP),
        }
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        match self {
            PlFunction::Affine(a) => a.eval_f64(x),
            PlFunction::MaxAffine(m) => m.eval_f64(x),
            PlFunction::Mesh(m) => {
                let q: Point = x.iter().map(|&v| crate::rational::from_f64(v)).collect();
                m.eval(&q).map_or(f64::NAN, |v| crate::rational::to_f64(&v))
            }
        }
    }

    /// A mesh representation on which the function is linear per cell.
    pub fn to_mesh(&self, p: &DelzantPolytope) -> Result<MeshPL> {
        self.check_dim(p)?;
        match self {
            PlFunction::Affine(a) => {
                let sub = p.triangulation();
                let values = sub.points.iter().map(|x| a.eval(x)).collect();
                Ok(MeshPL { subdivision: sub, values })
            }
            PlFunction::MaxAffine(m) => crease_refine(m, p),
            PlFunction::Mesh(m) => {
                if m.subdivision.cells.is_empty() || &m.subdivision.total_volume() != p.volume() {
                    return Err(Error::NonPiecewiseLinear(
                        "mesh does not cover the polytope".into(),
                    ));
                }
                Ok(m.clone())
            }
        }
    }

    pub fn add_affine(&self, l: &AffineFunction) -> PlFunction {
        match self {
            PlFunction::Affine(a) => PlFunction::Affine(a.add(l)),
            PlFunction::MaxAffine(m) => PlFunction::MaxAffine(MaxAffinePL {
                pieces: m.pieces.iter().map(|p| p.add(l)).collect(),
            }),
            PlFunction::Mesh(m) => PlFunction::Mesh(MeshPL {
                values: m
                    .values
                    .iter()
                    .zip(&m.subdivision.points)
                    .map(|(v, x)| v + l.eval(x))
                    .collect(),
                subdivision: m.subdivision.clone(),
            }),
        }
    }

    /// `q·f`. Max-affine input requires `q ≥ 0`, since negating the pieces of a
    /// maximum does not negate the maximum.
    pub fn scale(&self, q: &Rational) -> Result<PlFunction> {
        Ok(match self {
            PlFunction::Affine(a) => PlFunction::Affine(a.scale(q)),
            PlFunction::MaxAffine(m) => {
                if q.is_negative() {
                    return Err(Error::InvalidInput(
                        "a max-affine function can only be scaled by a nonnegative factor".into(),
                    ));
                }
                PlFunction::MaxAffine(MaxAffinePL {
                    pieces: m.pieces.iter().map(|p| p.scale(q)).collect(),
                })
            }
            PlFunction::Mesh(m) => PlFunction::Mesh(MeshPL {
                values: m.values.iter().map(|v| v * q).collect(),
                subdivision: m.subdivision.clone(),
            }),
        })
    }

    /// Exact convexity verdict on P.
    pub fn is_convex(&self, p: &DelzantPolytope) -> Result<ConvexityVerdict> {
        match self {
            PlFunction::Mesh(m) => Ok(m.is_convex()),
            _ => {
                self.check_dim(p)?;
                Ok(ConvexityVerdict {
                    convex: true,
                    violation: None,
                })
            }
        }
    }

    pub fn require_convex(&self, p: &DelzantPolytope) -> Result<()> {
        let v = self.is_convex(p)?;
        match v.violation {
            None => Ok(()),
            Some(h) => Err(Error::NotConvex(format!(
                "hinge across face {:?} fails by {}",
                h.face, h.excess
            ))),
        }
    }

    /// Exact minimum over P with a deterministic witness.
    pub fn min_over(&self, p: &DelzantPolytope) -> Result<(Rational, Point)> {
        self.check_dim(p)?;
        let n = p.dim();
        match self {
            PlFunction::Mesh(m) => Ok(m.min_point()),
            PlFunction::Affine(a) => {
                let mut prog = LinearProgram::new(n);
                prog.objective = a.a.clone();
                for f in p.facets() {
                    prog.add_ge(f.normal_rational(), f.offset.clone());
                }
                let (x, _) = lp::solve_optimal(&prog)?;
                Ok((a.eval(&x), x))
            }
            PlFunction::MaxAffine(m) => {
                // minimise s subject to s ≥ piece_i(x), x ∈ P
                let mut prog = LinearProgram::new(n + 1);
                prog.objective[n] = Rational::one();
                for f in p.facets() {
                    let mut c = f.normal_rational();
                    c.push(Rational::zero());
                    prog.add_ge(c, f.offset.clone());
                }
                for piece in &m.pieces {
                    let mut c: Vec<Rational> = piece.a.iter().map(|x| -x).collect();
                    c.push(Rational::one());
                    prog.add_ge(c, piece.b.clone());
                }
                let (mut x, _) = lp::solve_optimal(&prog)?;
                x.pop();
                Ok((m.eval(&x), x))
            }
        }
    }

    /// `f − (1/V)∫_P f`
    pub fn tilde(&self, p: &DelzantPolytope) -> Result<PlFunction> {
        let mean = p.integrate(self, crate::polytope::Region::Interior)? / p.volume();
        Ok(self.add_affine(&AffineFunction::constant(self.dim(), -mean)))
    }

    /// The function `x' ↦ f(A^{-1}(x' − t))` on the image polytope `A P + t`.
    pub fn transform(&self, a: &[Vec<i64>], t: &[Rational]) -> Result<PlFunction> {
        let ar: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let inv = inverse(&ar).ok_or_else(|| Error::NotUnimodular("0".into()))?;
        Ok(match self {
            PlFunction::Affine(l) => PlFunction::Affine(l.transform(&inv, t)),
            PlFunction::MaxAffine(m) => PlFunction::MaxAffine(MaxAffinePL {
                pieces: m.pieces.iter().map(|l| l.transform(&inv, t)).collect(),
            }),
            PlFunction::Mesh(m) => {
                let points = m
                    .subdivision
                    .points
                    .iter()
                    .map(|x| {
                        ar.iter()
                            .zip(t)
                            .map(|(row, ti)| dot(row, x) + ti)
                            .collect()
                    })
                    .collect();
                PlFunction::Mesh(MeshPL {
                    subdivision: SimplicialSubdivision {
                        points,
                        cells: m.subdivision.cells.clone(),
                        depth: m.subdivision.depth,
                    },
                    values: m.values.clone(),
                })
            }
        })
    }

    /// Max-affine representation with redundant pieces removed.
    pub fn canonical_pieces(&self, p: &DelzantPolytope) -> Result<MaxAffinePL> {
        let m = match self {
            PlFunction::Affine(a) => MaxAffinePL { pieces: vec![a.clone()] },
            PlFunction::MaxAffine(m) => m.clone(),
            PlFunction::Mesh(m) => {
                self.require_convex(p)?;
                m.to_max_affine()
            }
        };
        m.canonicalize(p)
    }
}

/// Subdivision of P whose cells each lie in one linearity region of `f`:
/// P is cut along every hyperplane where two pieces agree, and the resulting
/// cells are triangulated compatibly by pulling.
pub fn crease_refine(f: &MaxAffinePL, p: &DelzantPolytope) -> Result<MeshPL> {
    if f.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: f.dim(),
        });
    }
    let n = p.dim();
    let mut pieces = f.pieces.clone();
    pieces.sort();
    pieces.dedup();
    let mut hyperplanes: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let a: Vec<Rational> = pieces[i].a.iter().zip(&pieces[j].a).map(|(x, y)| x - y).collect();
            if a.iter().all(Zero::is_zero) {
                continue;
            }
            let b = &pieces[j].b - &pieces[i].b;
            // normalise so identical hyperplanes coincide
            let lead = a.iter().find(|x| !x.is_zero()).unwrap().abs();
            let h = (a.iter().map(|x| x / &lead).collect::<Vec<_>>(), b / &lead);
            let neg = (h.0.iter().map(|x| -x).collect::<Vec<_>>(), -h.1.clone());
            if !hyperplanes.contains(&h) && !hyperplanes.contains(&neg) {
                hyperplanes.push(h);
            }
        }
    }

    struct Cell {
        vertices: Vec<Point>,
        constraints: Vec<(Vec<Rational>, Rational)>,
    }
    let mut cells = vec![Cell {
        vertices: p.vertices().to_vec(),
        constraints: p
            .facets()
            .iter()
            .map(|f| (f.normal_rational(), f.offset.clone()))
            .collect(),
    }];
    for (a, b) in &hyperplanes {
        let mut next = Vec::with_capacity(cells.len());
        for cell in cells {
            let signs: Vec<Rational> = cell.vertices.iter().map(|v| dot(a, v) - b).collect();
            let pos = signs.iter().any(Signed::is_positive);
            let neg = signs.iter().any(Signed::is_negative);
            if !(pos && neg) {
                next.push(cell);
                continue;
            }
            for side in [1i64, -1] {
                let s = int(side);
                let mut constraints = cell.constraints.clone();
                constraints.push((a.iter().map(|x| x * &s).collect(), b * &s));
                let vertices = enumerate_vertices_general(n, &constraints);
                next.push(Cell { vertices, constraints });
            }
        }
        cells = next;
        if cells.len() > crate::polytope::DEFAULT_MESH_CAP {
            return Err(Error::MeshTooLarge {
                cap: crate::polytope::DEFAULT_MESH_CAP,
            });
        }
    }

    let mut index: BTreeMap<Point, usize> = BTreeMap::new();
    for c in &cells {
        for v in &c.vertices {
            index.entry(v.clone()).or_insert(0);
        }
    }
    let points: Vec<Point> = index.keys().cloned().collect();
    for (i, v) in index.values_mut().enumerate() {
        *v = i;
    }
    let pcells: Vec<PolytopeCell> = cells
        .iter()
        .map(|c| PolytopeCell {
            vertices: c.vertices.iter().map(|v| index[v]).collect(),
            constraints: c.constraints.clone(),
        })
        .collect();
    let simplices = pulling(&points, &pcells);
    let values = points.iter().map(|x| f.eval(x)).collect();
    Ok(MeshPL {
        subdivision: SimplicialSubdivision {
            points,
            cells: simplices,
            depth: None,
        },
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::Facet;
    use crate::rational::frac;

    fn interval() -> DelzantPolytope {
        DelzantPolytope::new(1, vec![Facet::new(vec![1], int(0)), Facet::new(vec![-1], int(-1))]).unwrap()
    }

    fn square() -> DelzantPolytope {
        DelzantPolytope::new(
            2,
            vec![
                Facet::new(vec![1, 0], int(0)),
                Facet::new(vec![0, 1], int(0)),
                Facet::new(vec![-1, 0], int(-1)),
                Facet::new(vec![0, -1], int(-1)),
            ],
        )
        .unwrap()
    }

    fn hinge_half() -> MaxAffinePL {
        MaxAffinePL::simple(vec![int(2)], int(1))
    }

    #[test]
    fn crease_at_one_half() {
        let m = crease_refine(&hinge_half(), &interval()).unwrap();
        assert_eq!(m.subdivision.points, vec![vec![int(0)], vec![frac(1, 2)], vec![int(1)]]);
        assert_eq!(m.values, vec![int(0), int(0), int(1)]);
        assert_eq!(m.subdivision.cells.len(), 2);
    }

    #[test]
    fn crease_refine_on_square_matches_pointwise() {
        let p = square();
        let f = MaxAffinePL::new(vec![
            AffineFunction::new(vec![int(1), int(0)], int(0)),
            AffineFunction::new(vec![int(0), int(1)], int(0)),
            AffineFunction::new(vec![int(-1), int(-1)], int(1)),
        ])
        .unwrap();
        let m = crease_refine(&f, &p).unwrap();
        m.subdivision.check_invariants(p.volume()).unwrap();
        assert!(m.is_convex().convex);
        for i in 0..=6 {
            for j in 0..=6 {
                let x = vec![frac(i, 6), frac(j, 6)];
                assert_eq!(m.eval(&x).unwrap(), f.eval(&x));
            }
        }
    }

    #[test]
    fn concave_tent_fails_hinge() {
        let f = crease_refine(&hinge_half(), &interval()).unwrap();
        let tent = MeshPL::new(f.subdivision, vec![int(0), int(1), int(0)]).unwrap();
        let v = tent.is_convex();
        assert!(!v.convex);
        assert_eq!(v.violation.unwrap().face, vec![1]);
    }

    #[test]
    fn evaluation_examples() {
        let p = interval();
        let f = PlFunction::MaxAffine(hinge_half());
        assert_eq!(f.evaluate(&p, &[frac(3, 4)]).unwrap(), frac(1, 2));
        assert_eq!(f.evaluate(&p, &[int(2)]).unwrap_err(), Error::PointOutsideP);
        let m = crease_refine(&hinge_half(), &p).unwrap();
        let mesh = PlFunction::Mesh(MeshPL::new(m.subdivision, vec![int(2), int(0), int(2)]).unwrap());
        assert_eq!(mesh.evaluate(&p, &[frac(1, 4)]).unwrap(), int(1));
    }

    #[test]
    fn minimum_examples() {
        let p = interval();
        let v = PlFunction::MaxAffine(MaxAffinePL::new(vec![
            AffineFunction::new(vec![int(-4)], int(2)),
            AffineFunction::new(vec![int(4)], int(-2)),
        ])
        .unwrap());
        assert_eq!(v.min_over(&p).unwrap(), (int(0), vec![frac(1, 2)]));
        let x = PlFunction::Affine(AffineFunction::coordinate(1, 0));
        assert_eq!(x.min_over(&p).unwrap(), (int(0), vec![int(0)]));
    }

    #[test]
    fn tilde_recentres() {
        let p = interval();
        let t = PlFunction::MaxAffine(hinge_half()).tilde(&p).unwrap();
        assert_eq!(t.evaluate(&p, &[int(0)]).unwrap(), frac(-1, 4));
    }

    #[test]
    fn canonicalize_drops_dominated_pieces() {
        let p = interval();
        let f = MaxAffinePL::new(vec![
            AffineFunction::constant(1, int(0)),
            AffineFunction::constant(1, int(-1)),
            AffineFunction::new(vec![int(2)], int(-1)),
            AffineFunction::new(vec![int(2)], int(-1)),
            AffineFunction::new(vec![int(1)], int(-1)),
        ])
        .unwrap();
        let c = f.canonicalize(&p).unwrap();
        assert_eq!(c.pieces.len(), 2);
    }
}
