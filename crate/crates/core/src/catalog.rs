//! Built-in example polytopes.

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::polytope::{DelzantPolytope, Facet};
use crate::rational::{int, parse_rational, Rational};

/// A named example polytope with a short description of its expected properties.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub polytope: DelzantPolytope,
    pub notes: String,
    /// Entries tagged invalid fail the Delzant check on purpose.
    pub valid: bool,
}

fn build(dim: usize, facets: &[(&[i64], Rational)]) -> DelzantPolytope {
    let facets = facets
        .iter()
        .map(|(a, b)| Facet::new(a.to_vec(), b.clone()))
        .collect();
    DelzantPolytope::new(dim, facets).expect("catalog polytope is well formed")
}

fn check_scale(lambda: &Rational) -> Result<()> {
    if !lambda.is_positive() {
        return Err(Error::InvalidInput(format!("scale {lambda} must be positive")));
    }
    Ok(())
}

/// `[0, λ]`
pub fn interval(lambda: &Rational) -> Result<DelzantPolytope> {
    check_scale(lambda)?;
    Ok(build(1, &[(&[1], int(0)), (&[-1], -lambda)]))
}

/// `{x, y ≥ 0, x + y ≤ λ}`
pub fn simplex2(lambda: &Rational) -> Result<DelzantPolytope> {
    check_scale(lambda)?;
    Ok(build(2, &[(&[1, 0], int(0)), (&[0, 1], int(0)), (&[-1, -1], -lambda)]))
}

/// `[0, λ]²`
pub fn square(lambda: &Rational) -> Result<DelzantPolytope> {
    check_scale(lambda)?;
    Ok(build(
        2,
        &[(&[1, 0], int(0)), (&[0, 1], int(0)), (&[-1, 0], -lambda), (&[0, -1], -lambda)],
    ))
}

/// Anticanonical polytope of the first Hirzebruch surface.
pub fn hirzebruch_fano() -> DelzantPolytope {
    build(
        2,
        &[(&[1, 0], int(-1)), (&[0, 1], int(-1)), (&[1, 1], int(-1)), (&[-1, -1], int(-1))],
    )
}

/// `[0, 1]³`
pub fn cube() -> DelzantPolytope {
    build(
        3,
        &[
            (&[1, 0, 0], int(0)),
            (&[0, 1, 0], int(0)),
            (&[0, 0, 1], int(0)),
            (&[-1, 0, 0], int(-1)),
            (&[0, -1, 0], int(-1)),
            (&[0, 0, -1], int(-1)),
        ],
    )
}

/// A lattice triangle that is not Delzant at its vertex `(0, 1)`.
pub fn bad_triangle() -> DelzantPolytope {
    build(2, &[(&[1, 0], int(0)), (&[0, 1], int(0)), (&[-1, -2], int(-2))])
}

/// Names accepted by [`lookup`]; the first three take an optional scale `name(λ)`.
pub const NAMES: [&str; 6] = ["interval", "simplex2", "square", "hirzebruch_fano", "cube", "bad_triangle"];

/// Resolves `name` or `name(λ)` to a catalog entry. Returns `Ok(None)` for
/// unknown names.
pub fn lookup(spec: &str) -> Result<Option<CatalogEntry>> {
    let spec = spec.trim();
    let (name, lambda) = match spec.split_once('(') {
        Some((name, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parenthesis in {spec:?}")))?;
            (name.trim(), Some(parse_rational(inner.trim())?))
        }
        None => (spec, None),
    };
    let scaled = |f: fn(&Rational) -> Result<DelzantPolytope>| -> Result<DelzantPolytope> {
        f(lambda.as_ref().unwrap_or(&Rational::one()))
    };
    let unscaled = |p: DelzantPolytope| -> Result<DelzantPolytope> {
        if lambda.is_some() {
            return Err(Error::InvalidInput(format!("{name} takes no scale")));
        }
        Ok(p)
    };
    let (polytope, notes, valid) = match name {
        "interval" => (scaled(interval)?, "Futaki zero; vol λ, boundary area 2", true),
        "simplex2" => (scaled(simplex2)?, "Futaki zero; vol λ²/2, boundary area 3λ", true),
        "square" => (scaled(square)?, "Futaki zero; vol λ², boundary area 4λ", true),
        "hirzebruch_fano" => (
            unscaled(hirzebruch_fano())?,
            "Futaki (1/3, 1/3), unstable; vol 4, boundary area 8",
            true,
        ),
        "cube" => (unscaled(cube())?, "Futaki zero; vol 1, boundary area 6", true),
        "bad_triangle" => (
            unscaled(bad_triangle())?,
            "not Delzant: determinant -2 at vertex (0, 1)",
            false,
        ),
        _ => return Ok(None),
    };
    Ok(Some(CatalogEntry {
        name: spec.to_string(),
        polytope,
        notes: notes.to_string(),
        valid,
    }))
}

/// All entries at unit scale.
pub fn entries() -> Vec<CatalogEntry> {
    NAMES
        .iter()
        .map(|n| lookup(n).expect("catalog entry builds").expect("known name"))
        .collect()
}
