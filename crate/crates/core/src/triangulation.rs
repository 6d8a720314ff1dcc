//! Exact simplicial subdivisions: placing and pulling triangulations, stellar
//! point insertion, and face bookkeeping.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{affine_dimension, barycentric, dot, simplex_volume, Point, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialSubdivision {
    pub points: Vec<Point>,
    /// Each cell is a sorted list of `dim + 1` point indices.
    pub cells: Vec<Vec<usize>>,
    /// Refinement depth for grid subdivisions; `None` for other constructions.
    pub depth: Option<u32>,
}

/// A codimension-one face together with the cells containing it and the
/// vertex of each cell opposite to the face.
#[derive(Clone, Debug)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub incident: Vec<(usize, usize)>,
}

impl SimplicialSubdivision {
    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn cell_points(&self, c: usize) -> Vec<&Point> {
        self.cells[c].iter().map(|&i| &self.points[i]).collect()
    }

    pub fn cell_volume(&self, c: usize) -> Rational {
        simplex_volume(&self.cell_points(c))
    }

    pub fn total_volume(&self) -> Rational {
        (0..self.cells.len()).map(|c| self.cell_volume(c)).sum()
    }

    /// All codimension-one faces in deterministic (sorted) order.
    pub fn faces(&self) -> Vec<Face> {
        let mut map: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (c, cell) in self.cells.iter().enumerate() {
            for (skip, &opp) in cell.iter().enumerate() {
                let face: Vec<usize> = cell
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect();
                map.entry(face).or_default().push((c, opp));
            }
        }
        map.into_iter()
            .map(|(vertices, incident)| Face { vertices, incident })
            .collect()
    }

    pub fn boundary_faces(&self) -> Vec<Face> {
        self.faces().into_iter().filter(|f| f.incident.len() == 1).collect()
    }

    /// First cell (in index order) containing `p`, with barycentric coordinates.
    pub fn locate(&self, p: &[Rational]) -> Option<(usize, Vec<Rational>)> {
        self.cells.iter().enumerate().find_map(|(c, _)| {
            let l = barycentric(&self.cell_points(c), p)?;
            l.iter().all(|x| !x.is_negative()).then_some((c, l))
        })
    }

    /// Checks positive cell volumes, that the volumes add up to `expected_volume`,
    /// and that every face is shared by at most two cells lying on opposite sides.
    pub fn check_invariants(&self, expected_volume: &Rational) -> Result<()> {
        for c in 0..self.cells.len() {
            if self.cell_volume(c).is_zero() {
                return Err(Error::InvalidInput(format!("cell {c} is degenerate")));
            }
        }
        let total = self.total_volume();
        if &total != expected_volume {
            return Err(Error::InvalidInput(format!(
                "cell volumes sum to {total}, expected {expected_volume}"
            )));
        }
        for f in self.faces() {
            match f.incident.as_slice() {
                [_] => {}
                [(c1, _), (_, q2)] => {
                    let l = barycentric(&self.cell_points(*c1), &self.points[*q2])
                        .ok_or_else(|| Error::InvalidInput("face outside affine hull".into()))?;
                    let pos = self.cells[*c1].iter().position(|v| !f.vertices.contains(v)).unwrap();
                    if !l[pos].is_negative() {
                        return Err(Error::InvalidInput(format!(
                            "cells sharing face {:?} overlap",
                            f.vertices
                        )));
                    }
                }
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "face {:?} shared by {} cells",
                        f.vertices,
                        f.incident.len()
                    )))
                }
            }
        }
        Ok(())
    }
}

/// Placing triangulation of `points`, inserted in the given order. The result
/// has dimension equal to the affine dimension of the point set. When points
/// arrive in lexicographic order each one is a vertex of the running hull, so
/// every point is used.
pub fn placing(points: &[Point]) -> Vec<Vec<usize>> {
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for (p, pt) in points.iter().enumerate() {
        if cells.is_empty() {
            cells.push(vec![p]);
            continue;
        }
        let hull: Vec<&Point> = cells[0].iter().map(|&i| &points[i]).collect();
        if barycentric(&hull, pt).is_none() {
            for c in cells.iter_mut() {
                c.push(p);
            }
            continue;
        }
        let mut faces: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
        for (ci, cell) in cells.iter().enumerate() {
            for (skip, &opp) in cell.iter().enumerate() {
                let mut f = cell.clone();
                f.remove(skip);
                faces.entry(f).or_default().push((ci, opp));
            }
        }
        let mut visible: Vec<Vec<usize>> = Vec::new();
        for (face, inc) in faces {
            if inc.len() != 1 {
                continue;
            }
            let (ci, opp) = inc[0];
            let cell = &cells[ci];
            let verts: Vec<&Point> = cell.iter().map(|&i| &points[i]).collect();
            let l = barycentric(&verts, pt).expect("point lies in the affine hull");
            let pos = cell.iter().position(|&v| v == opp).unwrap();
            if l[pos].is_negative() {
                visible.push(face);
            }
        }
        visible.sort();
        for mut f in visible {
            f.push(p);
            cells.push(f);
        }
    }
    for c in cells.iter_mut() {
        c.sort_unstable();
    }
    cells
}

/// Stellar insertion of a new point into a full-dimensional triangulation:
/// the minimal face containing the point is subdivided together with its star.
/// Returns `false` when the point lies outside every cell.
pub fn insert_point(sub: &mut SimplicialSubdivision, p: Point) -> bool {
    let Some((c, l)) = sub.locate(&p) else {
        return false;
    };
    let carrier: Vec<usize> = sub.cells[c]
        .iter()
        .zip(&l)
        .filter(|(_, x)| x.is_positive())
        .map(|(&v, _)| v)
        .collect();
    let new_index = sub.points.len();
    sub.points.push(p);
    let mut next = Vec::with_capacity(sub.cells.len() + carrier.len());
    for cell in sub.cells.drain(..) {
        if carrier.iter().all(|v| cell.contains(v)) {
            for v in &carrier {
                let mut nc: Vec<usize> = cell.iter().copied().filter(|x| x != v).collect();
                nc.push(new_index);
                nc.sort_unstable();
                next.push(nc);
            }
        } else {
            next.push(cell);
        }
    }
    sub.cells = next;
    true
}

/// A convex polytope cell given by its vertex indices (into a global point list)
/// and the inequalities `a·x ≥ b` that cut it out.
#[derive(Clone, Debug)]
pub struct PolytopeCell {
    pub vertices: Vec<usize>,
    pub constraints: Vec<(Vec<Rational>, Rational)>,
}

/// Pulling triangulation of a polyhedral complex: each face is coned from its
/// lowest-index vertex over the recursively triangulated facets avoiding it.
/// Faces shared between cells receive identical triangulations because the
/// construction depends only on a face's vertex set and the global order.
pub fn pulling(points: &[Point], cells: &[PolytopeCell]) -> Vec<Vec<usize>> {
    let mut memo: HashMap<Vec<usize>, Vec<Vec<usize>>> = HashMap::new();
    let mut out = Vec::new();
    for cell in cells {
        let mut verts = cell.vertices.clone();
        verts.sort_unstable();
        let refs: Vec<&Point> = verts.iter().map(|&i| &points[i]).collect();
        let d = affine_dimension(&refs);
        out.extend(pull_face(points, &verts, d, &cell.constraints, &mut memo));
    }
    for c in out.iter_mut() {
        c.sort_unstable();
    }
    out
}

fn pull_face(
    points: &[Point],
    verts: &[usize],
    dim: usize,
    constraints: &[(Vec<Rational>, Rational)],
    memo: &mut HashMap<Vec<usize>, Vec<Vec<usize>>>,
) -> Vec<Vec<usize>> {
    if let Some(t) = memo.get(verts) {
        return t.clone();
    }
    let result = if dim == 0 {
        vec![vec![verts[0]]]
    } else {
        let apex = verts[0];
        let mut facets: Vec<Vec<usize>> = Vec::new();
        for (a, b) in constraints {
            let tight: Vec<usize> = verts
                .iter()
                .copied()
                .filter(|&v| &dot(a, &points[v]) == b)
                .collect();
            if tight.is_empty() || tight.len() == verts.len() || tight.contains(&apex) {
                continue;
            }
            let refs: Vec<&Point> = tight.iter().map(|&i| &points[i]).collect();
            if affine_dimension(&refs) + 1 == dim && !facets.contains(&tight) {
                facets.push(tight);
            }
        }
        facets.sort();
        let mut simplices = Vec::new();
        for f in facets {
            for mut s in pull_face(points, &f, dim - 1, constraints, memo) {
                s.push(apex);
                simplices.push(s);
            }
        }
        simplices
    };
    memo.insert(verts.to_vec(), result.clone());
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn pts(v: &[(i64, i64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| vec![int(x), int(y)]).collect()
    }

    #[test]
    fn placing_square_with_center_gives_four_triangles() {
        let mut points = pts(&[(0, 0), (0, 1), (1, 0), (1, 1)]);
        points.push(vec![frac(1, 2), frac(1, 2)]);
        points.sort();
        let cells = placing(&points);
        assert_eq!(cells.len(), 4);
        let center = points.iter().position(|p| p[0] == frac(1, 2)).unwrap();
        assert!(cells.iter().all(|c| c.contains(&center)));
        let sub = SimplicialSubdivision { points, cells, depth: Some(0) };
        sub.check_invariants(&int(1)).unwrap();
    }

    #[test]
    fn placing_handles_collinear_prefix() {
        let mut points = pts(&[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]);
        points.sort();
        let cells = placing(&points);
        let sub = SimplicialSubdivision { points, cells, depth: None };
        sub.check_invariants(&int(2)).unwrap();
    }

    #[test]
    fn stellar_insertion_on_edge_and_interior() {
        let points = pts(&[(0, 0), (0, 1), (1, 0), (1, 1)]);
        let cells = placing(&points);
        let mut sub = SimplicialSubdivision { points, cells, depth: None };
        assert!(insert_point(&mut sub, vec![frac(1, 2), int(0)]));
        assert!(insert_point(&mut sub, vec![frac(1, 3), frac(1, 3)]));
        assert!(!insert_point(&mut sub, vec![int(2), int(2)]));
        sub.check_invariants(&int(1)).unwrap();
    }

    #[test]
    fn pulling_triangulates_hexagon() {
        let mut points = pts(&[(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]);
        points.sort();
        let normals = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1)];
        let constraints = normals
            .iter()
            .map(|&(a, b)| (vec![int(a), int(b)], int(-1)))
            .collect();
        let cell = PolytopeCell { vertices: (0..6).collect(), constraints };
        let cells = pulling(&points, &[cell]);
        assert_eq!(cells.len(), 4);
        let sub = SimplicialSubdivision { points, cells, depth: None };
        sub.check_invariants(&int(3)).unwrap();
    }
}
