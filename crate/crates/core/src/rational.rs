//! Exact rational scalars and small dense linear algebra over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type Point = Vec<Rational>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Canonical `p/q` form with `q > 0`; zero is `0/1`.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite double.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

pub fn point_to_f64(p: &[Rational]) -> Vec<f64> {
    p.iter().map(to_f64).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[i64], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + y * int(*x))
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Rational], s: &Rational) -> Point {
    a.iter().map(|x| x * s).collect()
}

pub fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n as u64).fold(BigInt::one(), |acc, k| acc * BigInt::from(k)))
}

/// Least common multiple of the denominators of all coordinates.
pub fn denominator_lcm<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    qs.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Scales a nonzero rational vector to the primitive integer vector with the same direction.
pub fn primitive_direction(v: &[Rational]) -> Option<Vec<BigInt>> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let l = denominator_lcm(v);
    let ints: Vec<BigInt> = v.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Some(ints.into_iter().map(|x| x / &g).collect())
}

/// Reduces the augmented matrix in place to reduced row echelon form over the
/// first `ncols` columns; returns the pivot columns.
fn rref(m: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let (src, dst) = if r < row {
                    let (a, b) = m.split_at_mut(row);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = m.split_at_mut(r);
                    (&a[row], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d -= &f * s;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let piv = a[col][col].clone();
        det *= &piv;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &piv;
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    det
}

/// Solves `A x = b` for a system with full column rank. Returns `None` when the
/// system is inconsistent or the columns are dependent.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, ncols);
    if pivots.len() != ncols {
        return None;
    }
    if m[ncols..].iter().any(|r| !r[ncols].is_zero()) {
        return None;
    }
    Some(m[..ncols].iter().map(|r| r[ncols].clone()).collect())
}

/// Dimension of the affine hull of a nonempty point set.
pub fn affine_dimension(points: &[&Point]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let base = points[0];
    let diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| sub(p, base)).collect();
    rank(&diffs)
}

/// Barycentric coordinates of `p` with respect to affinely independent points.
/// `None` when `p` is not in their affine hull.
pub fn barycentric(simplex: &[&Point], p: &[Rational]) -> Option<Vec<Rational>> {
    let n = p.len();
    let k = simplex.len();
    let mut a = vec![vec![Rational::zero(); k]; n + 1];
    for (j, v) in simplex.iter().enumerate() {
        for i in 0..n {
            a[i][j] = v[i].clone();
        }
        a[n][j] = Rational::one();
    }
    let mut b = p.to_vec();
    b.push(Rational::one());
    solve(&a, &b)
}

/// `|det(v_1 - v_0, ..., v_n - v_0)| / n!` for an n-simplex in ℝⁿ.
pub fn simplex_volume(vertices: &[&Point]) -> Rational {
    let n = vertices.len() - 1;
    let rows: Vec<Vec<Rational>> = vertices[1..].iter().map(|v| sub(v, vertices[0])).collect();
    determinant(&rows).abs() / factorial(n)
}

/// Inverse of a square rational matrix.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    if rref(&mut aug, n).len() != n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_are_canonical() {
        assert_eq!(format_rational(&parse_rational("4/-6").unwrap()), "-2/3");
        assert_eq!(format_rational(&parse_rational("0").unwrap()), "0/1");
        assert_eq!(format_rational(&parse_rational(" 7 ").unwrap()), "7/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn determinant_of_small_matrices() {
        let m = vec![vec![int(1), int(0)], vec![int(-1), int(-2)]];
        assert_eq!(determinant(&m), int(-2));
        let m = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(determinant(&m), int(0));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = vec![vec![int(1)], vec![int(1)]];
        assert_eq!(solve(&a, &[int(2), int(2)]), Some(vec![int(2)]));
        assert_eq!(solve(&a, &[int(2), int(3)]), None);
    }

    #[test]
    fn barycentric_on_segment_in_plane() {
        let a = vec![int(0), int(0)];
        let b = vec![int(2), int(2)];
        let l = barycentric(&[&a, &b], &[int(1), int(1)]).unwrap();
        assert_eq!(l, vec![frac(1, 2), frac(1, 2)]);
        assert!(barycentric(&[&a, &b], &[int(1), int(0)]).is_none());
    }

    #[test]
    fn primitive_direction_clears_denominators() {
        let v = vec![frac(1, 3), frac(-2, 3)];
        let p = primitive_direction(&v).unwrap();
        assert_eq!(p, vec![BigInt::from(1), BigInt::from(-2)]);
    }
}
