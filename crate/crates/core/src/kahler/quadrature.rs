//! Graded tensor Gauss–Legendre quadrature on simplices through collapsed
//! (Duffy) coordinates, with facet values carried alongside each node so that
//! logarithms near the boundary keep full relative accuracy.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polytope::{facet_simplex_mass, DelzantPolytope};
use crate::rational::{factorial, simplex_volume, to_f64, Point};
use crate::triangulation::SimplicialSubdivision;

/// Upper bound on materialised quadrature nodes.
pub const MAX_NODES: usize = 8_000_000;

const CHUNK: usize = 1024;

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    for i in 0..order {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_order(x), p0 = P_{order-1}(x)
            dp = order as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// A 1D rule on `[0, 1]`; each node is stored with its complement `1 − t`,
/// both computed without cancellation.
#[derive(Clone, Debug)]
pub struct Rule1D {
    pub t: Vec<f64>,
    pub s: Vec<f64>,
    pub w: Vec<f64>,
}

/// Gauss–Legendre of the given order on intervals refined geometrically
/// (ratio ½) towards both endpoints, `depth` levels on each side.
pub fn graded_rule(depth: u32, order: usize) -> Rule1D {
    let (gn, gw) = gauss_legendre(order);
    let mut left: Vec<(f64, f64)> = Vec::new();
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut hi = 0.5f64;
    for _ in 0..depth {
        let lo = hi * 0.5;
        intervals.push((lo, hi));
        hi = lo;
    }
    intervals.push((0.0, hi));
    for (a, b) in intervals {
        for (x, w) in gn.iter().zip(&gw) {
            left.push((a + (b - a) * x, (b - a) * w));
        }
    }
    let mut rule = Rule1D {
        t: Vec::with_capacity(2 * left.len()),
        s: Vec::with_capacity(2 * left.len()),
        w: Vec::with_capacity(2 * left.len()),
    };
    for &(t, w) in &left {
        rule.t.push(t);
        rule.s.push(1.0 - t);
        rule.w.push(w);
    }
    for &(t, w) in &left {
        rule.t.push(1.0 - t);
        rule.s.push(t);
        rule.w.push(w);
    }
    rule
}

/// A simplex to integrate over: vertices, the total mass it represents, and
/// labels copied to each node.
#[derive(Clone, Debug)]
pub struct SimplexSpec {
    pub vertices: Vec<Point>,
    pub mass: f64,
    pub cell: usize,
    pub facet: Option<usize>,
}

/// Materialised quadrature nodes with positions, facet values, and weights.
#[derive(Clone, Debug, Default)]
pub struct NodeSet {
    dim: usize,
    nfacets: usize,
    xs: Vec<f64>,
    ells: Vec<f64>,
    ws: Vec<f64>,
    cells: Vec<usize>,
    facets: Vec<Option<usize>>,
}

#[derive(Clone, Copy, Debug)]
pub struct Node<'a> {
    pub x: &'a [f64],
    pub ell: &'a [f64],
    pub w: f64,
    pub cell: usize,
    pub facet: Option<usize>,
    /// Position of the node in its set.
    pub index: usize,
}

impl NodeSet {
    pub fn build(p: &DelzantPolytope, simplices: &[SimplexSpec], depth: u32, order: usize) -> Result<NodeSet> {
        let n = p.dim();
        let nf = p.facets().len();
        let rule = graded_rule(depth, order);
        let r = rule.t.len();
        let mut total = 0usize;
        for s in simplices {
            let d = s.vertices.len() - 1;
            total = total.saturating_add(r.saturating_pow(d as u32));
        }
        if total > MAX_NODES {
            return Err(Error::QuadratureBudgetExceeded(format!(
                "{total} nodes requested, limit {MAX_NODES}"
            )));
        }
        let mut set = NodeSet {
            dim: n,
            nfacets: nf,
            xs: Vec::with_capacity(total * n),
            ells: Vec::with_capacity(total * nf),
            ws: Vec::with_capacity(total),
            cells: Vec::with_capacity(total),
            facets: Vec::with_capacity(total),
        };
        for s in simplices {
            let d = s.vertices.len() - 1;
            let vx: Vec<Vec<f64>> = s.vertices.iter().map(|v| v.iter().map(to_f64).collect()).collect();
            let vl: Vec<Vec<f64>> = s
                .vertices
                .iter()
                .map(|v| p.facets().iter().map(|f| to_f64(&f.eval(v))).collect())
                .collect();
            let scale = s.mass * to_f64(&factorial(d));
            let mut idx = vec![0usize; d];
            let count = r.pow(d as u32);
            let mut lambda = vec![0.0; d + 1];
            for _ in 0..count {
                let mut prod = 1.0;
                let mut w = scale;
                for (i, &k) in idx.iter().enumerate() {
                    lambda[i + 1] = prod * rule.t[k];
                    prod *= rule.s[k];
                    w *= rule.w[k] * rule.s[k].powi((d - 1 - i) as i32);
                }
                lambda[0] = prod;
                for c in 0..n {
                    set.xs.push((0..=d).map(|j| lambda[j] * vx[j][c]).sum());
                }
                for k in 0..nf {
                    set.ells.push((0..=d).map(|j| lambda[j] * vl[j][k]).sum());
                }
                set.ws.push(w);
                set.cells.push(s.cell);
                set.facets.push(s.facet);
                for slot in idx.iter_mut().rev() {
                    *slot += 1;
                    if *slot < r {
                        break;
                    }
                    *slot = 0;
                }
            }
        }
        Ok(set)
    }

    /// Nodes over the interior of P, from its cached triangulation.
    pub fn interior(p: &DelzantPolytope, depth: u32, order: usize) -> Result<NodeSet> {
        let specs: Vec<SimplexSpec> = p
            .cells()
            .iter()
            .enumerate()
            .map(|(c, cell)| {
                let vertices: Vec<Point> = cell.iter().map(|&i| p.vertices()[i].clone()).collect();
                let refs: Vec<&Point> = vertices.iter().collect();
                SimplexSpec {
                    mass: to_f64(&simplex_volume(&refs)),
                    vertices,
                    cell: c,
                    facet: None,
                }
            })
            .collect();
        Self::build(p, &specs, depth, order)
    }

    /// Nodes over ∂P carrying dσ weights and facet labels.
    pub fn boundary(p: &DelzantPolytope, depth: u32, order: usize) -> Result<NodeSet> {
        let mut specs = Vec::new();
        for k in 0..p.facets().len() {
            for cell in p.facet_cells(k) {
                let vertices: Vec<Point> = cell.iter().map(|&i| p.vertices()[i].clone()).collect();
                let refs: Vec<&Point> = vertices.iter().collect();
                specs.push(SimplexSpec {
                    mass: to_f64(&facet_simplex_mass(&refs, &p.facets()[k])),
                    vertices,
                    cell: 0,
                    facet: Some(k),
                });
            }
        }
        Self::build(p, &specs, depth, order)
    }

    /// Interior and boundary nodes of a subdivision of P; every node is
    /// labelled with a cell of the subdivision containing it.
    pub fn on_subdivision(
        p: &DelzantPolytope,
        sub: &SimplicialSubdivision,
        depth: u32,
        order: usize,
    ) -> Result<(NodeSet, NodeSet)> {
        let interior: Vec<SimplexSpec> = (0..sub.cells.len())
            .map(|c| SimplexSpec {
                vertices: sub.cell_points(c).into_iter().cloned().collect(),
                mass: to_f64(&sub.cell_volume(c)),
                cell: c,
                facet: None,
            })
            .collect();
        let mut boundary = Vec::new();
        for face in sub.boundary_faces() {
            let vertices: Vec<Point> = face.vertices.iter().map(|&i| sub.points[i].clone()).collect();
            let refs: Vec<&Point> = vertices.iter().collect();
            let k = p.facet_containing(&refs).ok_or_else(|| {
                Error::InvalidInput("subdivision boundary face not on a facet".into())
            })?;
            boundary.push(SimplexSpec {
                mass: to_f64(&facet_simplex_mass(&refs, &p.facets()[k])),
                vertices,
                cell: face.incident[0].0,
                facet: Some(k),
            });
        }
        Ok((
            Self::build(p, &interior, depth, order)?,
            Self::build(p, &boundary, depth, order)?,
        ))
    }

    pub fn len(&self) -> usize {
        self.ws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ws.is_empty()
    }

    pub fn node(&self, i: usize) -> Node<'_> {
        Node {
            x: &self.xs[i * self.dim..(i + 1) * self.dim],
            ell: &self.ells[i * self.nfacets..(i + 1) * self.nfacets],
            w: self.ws[i],
            cell: self.cells[i],
            facet: self.facets[i],
            index: i,
        }
    }

    /// `(Σ w f, Σ |w f|)` over all nodes with a fixed summation tree, so the
    /// result does not depend on the number of worker threads.
    pub fn try_sum<F>(&self, f: F) -> Result<(f64, f64)>
    where
        F: Fn(Node<'_>) -> Result<f64> + Sync,
    {
        let partials: Vec<(f64, f64)> = (0..self.len().div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut s = 0.0;
                let mut a = 0.0;
                for i in c * CHUNK..((c + 1) * CHUNK).min(self.len()) {
                    let node = self.node(i);
                    let v = node.w * f(node)?;
                    s += v;
                    a += v.abs();
                }
                Ok((s, a))
            })
            .collect::<Result<_>>()?;
        Ok(partials
            .into_iter()
            .fold((0.0, 0.0), |(s, a), (ps, pa)| (s + ps, a + pa)))
    }

    pub fn sum<F>(&self, f: F) -> (f64, f64)
    where
        F: Fn(Node<'_>) -> f64 + Sync,
    {
        self.try_sum(|n| Ok(f(n))).expect("infallible integrand")
    }

    /// Evaluates `f` at every node, in node order.
    pub fn try_map<F>(&self, f: F) -> Result<Vec<f64>>
    where
        F: Fn(Node<'_>) -> Result<f64> + Sync,
    {
        (0..self.len()).into_par_iter().map(|i| f(self.node(i))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::Facet;
    use crate::rational::int;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(8);
        for k in 0..16 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            assert!((q - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "degree {k}");
        }
    }

    #[test]
    fn graded_rule_handles_log_singularity() {
        let r = graded_rule(24, 8);
        let q: f64 = (0..r.t.len()).map(|i| r.w[i] * r.t[i].ln()).sum();
        assert!((q + 1.0).abs() < 1e-9);
        let q: f64 = (0..r.t.len()).map(|i| r.w[i] * r.s[i].ln()).sum();
        assert!((q + 1.0).abs() < 1e-9);
    }

    #[test]
    fn simplex_nodes_reproduce_volume_and_moments() {
        let p = DelzantPolytope::new(
            2,
            vec![
                Facet::new(vec![1, 0], int(0)),
                Facet::new(vec![0, 1], int(0)),
                Facet::new(vec![-1, -1], int(-1)),
            ],
        )
        .unwrap();
        let nodes = NodeSet::interior(&p, 4, 4).unwrap();
        let (v, _) = nodes.sum(|_| 1.0);
        assert!((v - 0.5).abs() < 1e-14);
        let (m, _) = nodes.sum(|n| n.x[0] * n.x[1]);
        assert!((m - 1.0 / 24.0).abs() < 1e-14);
        let b = NodeSet::boundary(&p, 4, 4).unwrap();
        let (a, _) = b.sum(|_| 1.0);
        assert!((a - 3.0).abs() < 1e-14);
        // facet values are nonnegative combinations, exact zero on the facet
        for i in 0..b.len() {
            let node = b.node(i);
            assert_eq!(node.ell[node.facet.unwrap()], 0.0);
        }
    }
}
