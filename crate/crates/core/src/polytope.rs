//! Exact rational geometry of Delzant polytopes: validation, measures,
//! integration of piecewise-linear functions, grid subdivisions, and support
//! functions.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lp::{self, LinearProgram, LpOutcome};
use crate::plconvex::PlFunction;
use crate::rational::{
    affine_dimension, denominator_lcm, determinant, dot, dot_int, factorial, int, inverse, solve,
    sub, Point, Rational,
};
use crate::triangulation::{insert_point, placing, pulling, PolytopeCell, SimplicialSubdivision};

/// Default bound on the number of points in a generated subdivision.
pub const DEFAULT_MESH_CAP: usize = 20_000;

/// Half-space `⟨x, normal⟩ − offset ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: Rational,
}

impl Facet {
    pub fn new(normal: Vec<i64>, offset: Rational) -> Self {
        Self { normal, offset }
    }

    /// `ℓ(x) = ⟨x, α⟩ − β`
    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot_int(&self.normal, x) - &self.offset
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.normal
            .iter()
            .zip(x)
            .map(|(a, xi)| *a as f64 * xi)
            .sum::<f64>()
            - crate::rational::to_f64(&self.offset)
    }

    pub fn normal_rational(&self) -> Vec<Rational> {
        self.normal.iter().map(|&a| int(a)).collect()
    }

    pub fn norm_squared(&self) -> i64 {
        self.normal.iter().map(|a| a * a).sum()
    }

    pub fn is_primitive(&self) -> bool {
        self.normal.iter().fold(0i64, |g, a| g.gcd(a)) == 1
    }
}

/// Bounded full-dimensional polytope given by irredundant facet inequalities,
/// with its vertices and a triangulation cached at construction.
#[derive(Clone, Debug)]
pub struct DelzantPolytope {
    dim: usize,
    facets: Vec<Facet>,
    vertices: Vec<Point>,
    /// Simplices (indices into `vertices`) triangulating P.
    cells: Vec<Vec<usize>>,
    /// For each facet, the simplices (indices into `vertices`) triangulating it.
    facet_cells: Vec<Vec<Vec<usize>>>,
    volume: Rational,
    boundary_area: Rational,
    barycenter: Point,
}

impl PartialEq for DelzantPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.facets == other.facets
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Interior,
    Boundary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexReport {
    pub point: Point,
    pub incident: Vec<usize>,
    /// Determinant of the incident normals (rows in facet order) when exactly
    /// `dim` facets meet at the vertex.
    pub determinant: Option<BigInt>,
}

impl VertexReport {
    pub fn is_smooth(&self, dim: usize) -> bool {
        self.incident.len() == dim && self.determinant.as_ref().is_some_and(|d| d.abs().is_one())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DelzantReport {
    pub vertices: Vec<VertexReport>,
    pub non_primitive: Vec<usize>,
    pub valid: bool,
}

impl DelzantPolytope {
    /// Validates the facet data (dimensions, nonempty interior, boundedness,
    /// irredundancy) and caches vertices and triangulations. The Delzant
    /// condition itself is reported by [`DelzantPolytope::check_delzant`].
    pub fn new(dim: usize, facets: Vec<Facet>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for f in &facets {
            if f.normal.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: f.normal.len(),
                });
            }
            if f.normal.iter().all(|&a| a == 0) {
                return Err(Error::InvalidInput("zero facet normal".into()));
            }
        }
        check_bounded_nonempty(dim, &facets)?;
        let vertices = enumerate_vertices(dim, &facets)?;
        let refs: Vec<&Point> = vertices.iter().collect();
        if affine_dimension(&refs) < dim {
            return Err(Error::LowerDimensional);
        }
        let mut facet_vertex_sets: Vec<Vec<usize>> = Vec::with_capacity(facets.len());
        for (k, f) in facets.iter().enumerate() {
            let tight: Vec<usize> = (0..vertices.len())
                .filter(|&v| f.eval(&vertices[v]).is_zero())
                .collect();
            let trefs: Vec<&Point> = tight.iter().map(|&i| &vertices[i]).collect();
            if trefs.len() < dim || affine_dimension(&trefs) + 1 != dim || facet_vertex_sets.contains(&tight) {
                return Err(Error::RedundantFacet(k));
            }
            facet_vertex_sets.push(tight);
        }

        let constraints: Vec<(Vec<Rational>, Rational)> = facets
            .iter()
            .map(|f| (f.normal_rational(), f.offset.clone()))
            .collect();
        let cells = pulling(
            &vertices,
            &[PolytopeCell {
                vertices: (0..vertices.len()).collect(),
                constraints: constraints.clone(),
            }],
        );
        let facet_cells: Vec<Vec<Vec<usize>>> = facet_vertex_sets
            .iter()
            .map(|set| {
                pulling(
                    &vertices,
                    &[PolytopeCell {
                        vertices: set.clone(),
                        constraints: constraints.clone(),
                    }],
                )
            })
            .collect();

        let mut volume = Rational::zero();
        let mut moment = vec![Rational::zero(); dim];
        for c in &cells {
            let pts: Vec<&Point> = c.iter().map(|&i| &vertices[i]).collect();
            let v = crate::rational::simplex_volume(&pts);
            let scale = &v / int(dim as i64 + 1);
            for p in &pts {
                for (m, x) in moment.iter_mut().zip(p.iter()) {
                    *m += &scale * x;
                }
            }
            volume += v;
        }
        let barycenter = moment.into_iter().map(|m| m / &volume).collect();
        let boundary_area = facet_cells
            .iter()
            .enumerate()
            .flat_map(|(k, cs)| {
                let vertices = &vertices;
                let facet = &facets[k];
                cs.iter().map(move |c| {
                    let pts: Vec<&Point> = c.iter().map(|&i| &vertices[i]).collect();
                    facet_simplex_mass(&pts, facet)
                })
            })
            .sum();

        Ok(Self {
            dim,
            facets,
            vertices,
            cells,
            facet_cells,
            volume,
            boundary_area,
            barycenter,
        })
    }

    /// Like [`DelzantPolytope::new`], additionally requiring the Delzant condition.
    pub fn new_delzant(dim: usize, facets: Vec<Facet>) -> Result<Self> {
        let p = Self::new(dim, facets)?;
        let report = p.check_delzant();
        if !report.valid {
            return Err(Error::NotDelzant(report.first_failure().unwrap_or_default()));
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Simplices of the cached triangulation, as indices into `vertices()`.
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Simplices triangulating facet `k`, as indices into `vertices()`.
    pub fn facet_cells(&self, k: usize) -> &[Vec<usize>] {
        &self.facet_cells[k]
    }

    pub fn volume(&self) -> &Rational {
        &self.volume
    }

    pub fn boundary_area(&self) -> &Rational {
        &self.boundary_area
    }

    /// `Ŝ = area(∂P) / vol(P)`
    pub fn mean_scalar(&self) -> Rational {
        &self.boundary_area / &self.volume
    }

    pub fn barycenter(&self) -> &Point {
        &self.barycenter
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim && self.facets.iter().all(|f| !f.eval(x).is_negative())
    }

    /// Index of the first facet containing all of `pts`, if any.
    pub fn facet_containing(&self, pts: &[&Point]) -> Option<usize> {
        self.facets
            .iter()
            .position(|f| pts.iter().all(|p| f.eval(p).is_zero()))
    }

    pub fn check_delzant(&self) -> DelzantReport {
        let vertices: Vec<VertexReport> = self
            .vertices
            .iter()
            .map(|v| {
                let incident: Vec<usize> = (0..self.facets.len())
                    .filter(|&k| self.facets[k].eval(v).is_zero())
                    .collect();
                let determinant = (incident.len() == self.dim).then(|| {
                    let m: Vec<Vec<Rational>> = incident
                        .iter()
                        .map(|&k| self.facets[k].normal_rational())
                        .collect();
                    determinant(&m).to_integer()
                });
                VertexReport {
                    point: v.clone(),
                    incident,
                    determinant,
                }
            })
            .collect();
        let non_primitive: Vec<usize> = (0..self.facets.len())
            .filter(|&k| !self.facets[k].is_primitive())
            .collect();
        let valid = non_primitive.is_empty() && vertices.iter().all(|v| v.is_smooth(self.dim));
        DelzantReport {
            vertices,
            non_primitive,
            valid,
        }
    }

    /// Exact integral of a piecewise-linear function over P or over ∂P with dσ.
    pub fn integrate(&self, f: &PlFunction, region: Region) -> Result<Rational> {
        let mesh = f.to_mesh(self)?;
        let w = match region {
            Region::Interior => self.interior_weights(&mesh.subdivision),
            Region::Boundary => self.boundary_weights(&mesh.subdivision)?,
        };
        Ok(w.iter().zip(&mesh.values).map(|(a, b)| a * b).sum())
    }

    /// Per-point weights `w` with `∫_P g = Σ w_v g(v)` for every g linear on each cell.
    pub fn interior_weights(&self, sub: &SimplicialSubdivision) -> Vec<Rational> {
        let mut w = vec![Rational::zero(); sub.points.len()];
        let k = int(self.dim as i64 + 1);
        for (c, cell) in sub.cells.iter().enumerate() {
            let share = sub.cell_volume(c) / &k;
            for &v in cell {
                w[v] += &share;
            }
        }
        w
    }

    /// Per-point weights `w` with `∫_∂P g dσ = Σ w_v g(v)` for every g linear on each cell.
    pub fn boundary_weights(&self, sub: &SimplicialSubdivision) -> Result<Vec<Rational>> {
        let mut w = vec![Rational::zero(); sub.points.len()];
        let k = int(self.dim as i64);
        for face in sub.boundary_faces() {
            let pts: Vec<&Point> = face.vertices.iter().map(|&i| &sub.points[i]).collect();
            let facet = self.facet_containing(&pts).ok_or_else(|| {
                Error::NonPiecewiseLinear("subdivision boundary face not on ∂P".into())
            })?;
            let share = facet_simplex_mass(&pts, &self.facets[facet]) / &k;
            for &v in &face.vertices {
                w[v] += &share;
            }
        }
        Ok(w)
    }

    /// The cached triangulation as a subdivision of P.
    pub fn triangulation(&self) -> SimplicialSubdivision {
        SimplicialSubdivision {
            points: self.vertices.clone(),
            cells: self.cells.clone(),
            depth: None,
        }
    }

    /// Grid subdivision at `depth`: lattice points of spacing `1/(D·2^depth)`
    /// lying in P (D clears the vertex denominators), plus vertices and the
    /// barycenter. Depth 0 is a lexicographic placing triangulation; each
    /// further depth inserts the new grid points into the previous depth by
    /// stellar subdivision, so the meshes are nested.
    pub fn subdivide(&self, depth: u32, cap: usize) -> Result<SimplicialSubdivision> {
        Ok(self.subdivide_sequence(depth, cap)?.pop().unwrap())
    }

    /// Subdivisions for all depths `0..=max_depth`, each refining the previous.
    pub fn subdivide_sequence(&self, max_depth: u32, cap: usize) -> Result<Vec<SimplicialSubdivision>> {
        let mut out: Vec<SimplicialSubdivision> = Vec::new();
        for k in 0..=max_depth {
            let grid = self.grid_points(k, cap)?;
            let sub = match out.last() {
                None => {
                    let mut points: BTreeSet<Point> = grid.into_iter().collect();
                    points.extend(self.vertices.iter().cloned());
                    points.insert(self.barycenter.clone());
                    if points.len() > cap {
                        return Err(Error::MeshTooLarge { cap });
                    }
                    let points: Vec<Point> = points.into_iter().collect();
                    let cells = placing(&points);
                    SimplicialSubdivision {
                        points,
                        cells,
                        depth: Some(0),
                    }
                }
                Some(prev) => {
                    let mut sub = prev.clone();
                    sub.depth = Some(k);
                    let existing: BTreeSet<&Point> = prev.points.iter().collect();
                    let fresh: Vec<Point> = grid.into_iter().filter(|p| !existing.contains(p)).collect();
                    if prev.points.len() + fresh.len() > cap {
                        return Err(Error::MeshTooLarge { cap });
                    }
                    for p in fresh {
                        let inserted = insert_point(&mut sub, p);
                        debug_assert!(inserted);
                    }
                    sub
                }
            };
            out.push(sub);
        }
        Ok(out)
    }

    /// Grid points of spacing `1/(D·2^depth)` inside P, in lexicographic order.
    pub fn grid_points(&self, depth: u32, cap: usize) -> Result<Vec<Point>> {
        let d = denominator_lcm(self.vertices.iter().flatten()) << depth as usize;
        let step = Rational::new(BigInt::one(), d.clone());
        let dr = Rational::from_integer(d);
        let mut ranges = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let lo = self.vertices.iter().map(|v| &v[i]).min().unwrap();
            let hi = self.vertices.iter().map(|v| &v[i]).max().unwrap();
            let lo = (lo * &dr).ceil().to_integer();
            let hi = (hi * &dr).floor().to_integer();
            let lo = lo.to_i64().ok_or(Error::MeshTooLarge { cap })?;
            let hi = hi.to_i64().ok_or(Error::MeshTooLarge { cap })?;
            ranges.push(lo..=hi);
        }
        let box_size: f64 = ranges
            .iter()
            .map(|r| (r.end() - r.start() + 1) as f64)
            .product();
        let simplex_share = (1..=self.dim).map(|k| k as f64).product::<f64>();
        if box_size > cap as f64 * simplex_share * 64.0 {
            return Err(Error::MeshTooLarge { cap });
        }
        let mut out = Vec::new();
        for idx in ranges.into_iter().multi_cartesian_product() {
            let p: Point = idx.iter().map(|&m| int(m) * &step).collect();
            if self.contains(&p) {
                out.push(p);
                if out.len() > cap {
                    return Err(Error::MeshTooLarge { cap });
                }
            }
        }
        Ok(out)
    }

    /// Image under `x ↦ A x + t` for unimodular integer `A`.
    pub fn transform(&self, a: &[Vec<i64>], t: &[Rational]) -> Result<DelzantPolytope> {
        let n = self.dim;
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: a.len(),
            });
        }
        if t.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: t.len(),
            });
        }
        let ar: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
        let det = determinant(&ar);
        if det.abs() != Rational::one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        let inv = inverse(&ar).expect("unimodular matrix is invertible");
        // α' = A^{-T} α, so α'_i = Σ_j inv[j][i] α_j
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let normal: Vec<i64> = (0..n)
                    .map(|i| {
                        let s: Rational = (0..n).map(|j| &inv[j][i] * int(f.normal[j])).sum();
                        s.to_integer().to_i64().expect("normal fits in i64")
                    })
                    .collect();
                let offset = &f.offset + dot_int(&normal, t);
                Facet { normal, offset }
            })
            .collect();
        DelzantPolytope::new(n, facets)
    }

    pub fn to_f64_vertices(&self) -> Vec<Vec<f64>> {
        self.vertices.iter().map(|v| crate::rational::point_to_f64(v)).collect()
    }
}

impl DelzantReport {
    pub fn first_failure(&self) -> Option<String> {
        if let Some(k) = self.non_primitive.first() {
            return Some(format!("facet {k} has a non-primitive normal"));
        }
        self.vertices
            .iter()
            .find(|v| v.determinant.as_ref().is_none_or(|d| !d.abs().is_one()))
            .map(|v| {
                let pt: Vec<String> = v.point.iter().map(|q| q.to_string()).collect();
                match &v.determinant {
                    Some(d) => format!("vertex ({}) has determinant {d}", pt.join(", ")),
                    None => format!("{} facets meet at vertex ({})", v.incident.len(), pt.join(", ")),
                }
            })
    }
}

/// dσ-mass of an (n−1)-simplex lying in the hyperplane of `facet`:
/// `|det(v_1 − v_0, …, v_{n−1} − v_0, α/‖α‖²)| / (n−1)!`.
pub fn facet_simplex_mass(pts: &[&Point], facet: &Facet) -> Rational {
    let n = facet.normal.len();
    let nsq = int(facet.norm_squared());
    let mut rows: Vec<Vec<Rational>> = pts[1..].iter().map(|p| sub(p, pts[0])).collect();
    rows.push(facet.normal.iter().map(|&a| int(a) / &nsq).collect());
    determinant(&rows).abs() / factorial(n - 1)
}

/// `h(λ) = max_χ ⟨χ, λ⟩` over a finite weight set.
pub fn support_function(weights: &[Vec<i64>], lambda: &[Rational]) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for w in weights {
        if w.len() != lambda.len() {
            return Err(Error::DimensionMismatch {
                expected: lambda.len(),
                got: w.len(),
            });
        }
        let v = dot_int(w, lambda);
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    }
    best.ok_or(Error::EmptyWeightSet)
}

fn check_bounded_nonempty(dim: usize, facets: &[Facet]) -> Result<()> {
    let mut lp = LinearProgram::new(dim);
    for f in facets {
        lp.add_ge(f.normal_rational(), f.offset.clone());
    }
    match lp::solve(&lp)? {
        LpOutcome::Infeasible { .. } => return Err(Error::EmptyPolytope),
        LpOutcome::Optimal { .. } => {}
        LpOutcome::Unbounded { .. } => unreachable!("zero objective"),
    }
    for i in 0..dim {
        for s in [1, -1] {
            let mut probe = lp.clone();
            probe.objective[i] = int(s);
            if let LpOutcome::Unbounded { .. } = lp::solve(&probe)? {
                return Err(Error::UnboundedPolytope);
            }
        }
    }
    Ok(())
}

/// All vertices of the bounded polyhedron `{x : a_k·x ≥ b_k}`, lexicographically
/// sorted and deduplicated.
pub fn enumerate_vertices_general(dim: usize, constraints: &[(Vec<Rational>, Rational)]) -> Vec<Point> {
    let mut out: BTreeSet<Point> = BTreeSet::new();
    for combo in (0..constraints.len()).combinations(dim) {
        let a: Vec<Vec<Rational>> = combo.iter().map(|&k| constraints[k].0.clone()).collect();
        let b: Vec<Rational> = combo.iter().map(|&k| constraints[k].1.clone()).collect();
        let Some(x) = solve(&a, &b) else { continue };
        if constraints.iter().all(|(a, b)| &dot(a, &x) >= b) {
            out.insert(x);
        }
    }
    out.into_iter().collect()
}

/// Vertices of the polytope cut out by `facets`.
pub fn enumerate_vertices(dim: usize, facets: &[Facet]) -> Result<Vec<Point>> {
    let constraints: Vec<(Vec<Rational>, Rational)> = facets
        .iter()
        .map(|f| (f.normal_rational(), f.offset.clone()))
        .collect();
    let v = enumerate_vertices_general(dim, &constraints);
    if v.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn poly(dim: usize, facets: &[(&[i64], i64)]) -> Result<DelzantPolytope> {
        DelzantPolytope::new(
            dim,
            facets
                .iter()
                .map(|(n, b)| Facet::new(n.to_vec(), int(*b)))
                .collect(),
        )
    }

    fn pt(v: &[i64]) -> Point {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn hirzebruch_measures() {
        let p = poly(2, &[(&[1, 0], -1), (&[0, 1], -1), (&[1, 1], -1), (&[-1, -1], -1)]).unwrap();
        assert_eq!(
            p.vertices(),
            &[pt(&[-1, 0]), pt(&[-1, 2]), pt(&[0, -1]), pt(&[2, -1])]
        );
        assert_eq!(p.volume(), &int(4));
        assert_eq!(p.boundary_area(), &int(8));
        assert_eq!(p.mean_scalar(), int(2));
        assert_eq!(p.barycenter(), &vec![frac(1, 12), frac(1, 12)]);
        assert!(p.check_delzant().valid);
    }

    #[test]
    fn simplex_hypotenuse_has_unit_mass() {
        let p = poly(2, &[(&[1, 0], 0), (&[0, 1], 0), (&[-1, -1], -1)]).unwrap();
        assert_eq!(p.volume(), &frac(1, 2));
        assert_eq!(p.boundary_area(), &int(3));
        assert_eq!(p.mean_scalar(), int(6));
    }

    #[test]
    fn interval_point_facets() {
        let p = poly(1, &[(&[1], 0), (&[-1], -1)]).unwrap();
        assert_eq!(p.boundary_area(), &int(2));
        assert_eq!(p.barycenter(), &vec![frac(1, 2)]);
    }

    #[test]
    fn bad_triangle_reports_determinant() {
        let p = poly(2, &[(&[1, 0], 0), (&[0, 1], 0), (&[-1, -2], -2)]).unwrap();
        let r = p.check_delzant();
        assert!(!r.valid);
        let v = r.vertices.iter().find(|v| v.point == pt(&[0, 1])).unwrap();
        assert_eq!(v.determinant, Some(BigInt::from(-2)));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(poly(1, &[(&[1], 0)]).unwrap_err(), Error::UnboundedPolytope);
        assert_eq!(poly(1, &[(&[1], 1), (&[-1], 0)]).unwrap_err(), Error::EmptyPolytope);
        assert_eq!(poly(1, &[(&[1], 0), (&[-1], 0)]).unwrap_err(), Error::LowerDimensional);
        assert_eq!(
            poly(1, &[(&[1], 0), (&[-1], -1), (&[1], -1)]).unwrap_err(),
            Error::RedundantFacet(2)
        );
        assert_eq!(
            poly(1, &[(&[1], 0), (&[-1], -1), (&[-1], -1)]).unwrap_err(),
            Error::RedundantFacet(2)
        );
    }

    #[test]
    fn square_subdivision_depths() {
        let p = poly(2, &[(&[1, 0], 0), (&[0, 1], 0), (&[-1, 0], -1), (&[0, -1], -1)]).unwrap();
        let seq = p.subdivide_sequence(2, DEFAULT_MESH_CAP).unwrap();
        assert_eq!(seq[0].points.len(), 5);
        assert_eq!(seq[0].cells.len(), 4);
        for s in &seq {
            s.check_invariants(p.volume()).unwrap();
        }
        assert_eq!(seq[2].points.len(), 25);
        assert!(matches!(p.subdivide(6, 100), Err(Error::MeshTooLarge { cap: 100 })));
    }

    #[test]
    fn transform_preserves_measures() {
        let p = poly(2, &[(&[1, 0], 0), (&[0, 1], 0), (&[-1, -1], -1)]).unwrap();
        let q = p.transform(&[vec![1, 1], vec![0, 1]], &[frac(1, 3), int(-2)]).unwrap();
        assert_eq!(q.volume(), p.volume());
        assert_eq!(q.boundary_area(), p.boundary_area());
        assert!(q.check_delzant().valid);
        assert!(matches!(
            p.transform(&[vec![2, 0], vec![0, 1]], &[int(0), int(0)]),
            Err(Error::NotUnimodular(_))
        ));
    }

    #[test]
    fn support_function_basics() {
        let w = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(support_function(&w, &[int(2), int(3)]).unwrap(), int(3));
        assert_eq!(support_function(&[], &[int(1)]).unwrap_err(), Error::EmptyWeightSet);
    }
}
