//! JSON documents for polytopes, PL functions, subdivisions, reports, and
//! potentials. Exact quantities are canonical `"p/q"` strings; floats appear
//! only in energy reports.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kahler::{EnergyReport, Monomial, SymplecticPotential};
use crate::plconvex::{AffineFunction, MaxAffinePL, MeshPL, PlFunction};
use crate::polytope::{DelzantPolytope, DelzantReport, Facet};
use crate::rational::{format_rational, parse_rational, Point, Rational};
use crate::stability::{FutakiReport, StabilityReport, TestConfiguration};
use crate::triangulation::SimplicialSubdivision;

/// A rational serialised as its canonical `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => parse_rational(&s).map(Q).map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(Q(Rational::from_integer(n.into()))),
        }
    }
}

fn qs(v: &[Rational]) -> Vec<Q> {
    v.iter().cloned().map(Q).collect()
}

fn unq(v: Vec<Q>) -> Vec<Rational> {
    v.into_iter().map(|q| q.0).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FacetJson {
    pub normal: Vec<i64>,
    pub offset: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub facets: Vec<FacetJson>,
}

impl PolytopeJson {
    fn from_facets(dim: usize, facets: &[Facet]) -> Self {
        Self {
            dim,
            facets: facets
                .iter()
                .map(|f| FacetJson {
                    normal: f.normal.clone(),
                    offset: Q(f.offset.clone()),
                })
                .collect(),
        }
    }

    pub fn from_polytope(p: &DelzantPolytope) -> Self {
        Self::from_facets(p.dim(), p.facets())
    }

    pub fn to_facets(&self) -> Vec<Facet> {
        self.facets
            .iter()
            .map(|f| Facet::new(f.normal.clone(), f.offset.0.clone()))
            .collect()
    }

    pub fn to_polytope(&self) -> Result<DelzantPolytope> {
        DelzantPolytope::new(self.dim, self.to_facets())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubdivisionJson {
    pub points: Vec<Vec<Q>>,
    pub cells: Vec<Vec<usize>>,
}

impl SubdivisionJson {
    pub fn from_subdivision(s: &SimplicialSubdivision) -> Self {
        Self {
            points: s.points.iter().map(|p| qs(p)).collect(),
            cells: s.cells.clone(),
        }
    }

    pub fn to_subdivision(&self) -> Result<SimplicialSubdivision> {
        let points: Vec<Point> = self.points.iter().map(|p| unq(p.clone())).collect();
        let dim = points.first().map(Vec::len).unwrap_or(0);
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::Parse("subdivision points have mixed dimensions".into()));
        }
        for c in &self.cells {
            if c.len() != dim + 1 || c.iter().any(|&i| i >= points.len()) {
                return Err(Error::Parse(format!("bad cell {c:?}")));
            }
        }
        Ok(SimplicialSubdivision {
            points,
            cells: self.cells.clone(),
            depth: None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineJson {
    pub a: Vec<Q>,
    pub b: Q,
}

impl AffineJson {
    pub fn from_affine(f: &AffineFunction) -> Self {
        Self {
            a: qs(&f.a),
            b: Q(f.b.clone()),
        }
    }

    pub fn to_affine(&self) -> AffineFunction {
        AffineFunction::new(unq(self.a.clone()), self.b.0.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PlJson {
    Affine { a: Vec<Q>, b: Q },
    MaxAffine { pieces: Vec<AffineJson> },
    Mesh { subdivision: SubdivisionJson, values: Vec<Q> },
}

impl PlJson {
    pub fn from_pl(f: &PlFunction) -> Self {
        match f {
            PlFunction::Affine(a) => PlJson::Affine {
                a: qs(&a.a),
                b: Q(a.b.clone()),
            },
            PlFunction::MaxAffine(m) => PlJson::MaxAffine {
                pieces: m.pieces.iter().map(AffineJson::from_affine).collect(),
            },
            PlFunction::Mesh(m) => PlJson::Mesh {
                subdivision: SubdivisionJson::from_subdivision(&m.subdivision),
                values: qs(&m.values),
            },
        }
    }

    pub fn to_pl(&self) -> Result<PlFunction> {
        Ok(match self {
            PlJson::Affine { a, b } => PlFunction::Affine(AffineFunction::new(unq(a.clone()), b.0.clone())),
            PlJson::MaxAffine { pieces } => {
                PlFunction::MaxAffine(MaxAffinePL::new(pieces.iter().map(AffineJson::to_affine).collect())?)
            }
            PlJson::Mesh { subdivision, values } => {
                PlFunction::Mesh(MeshPL::new(subdivision.to_subdivision()?, unq(values.clone()))?)
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexJson {
    pub point: Vec<Q>,
    pub incident: Vec<usize>,
    pub determinant: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelzantReportJson {
    /// `"Delzant"` or `"NotDelzant"`.
    pub verdict: String,
    pub valid: bool,
    pub failure: Option<String>,
    pub vertices: Vec<VertexJson>,
    pub non_primitive: Vec<usize>,
    pub volume: Q,
    pub boundary_area: Q,
    pub mean_scalar: Q,
    pub barycenter: Vec<Q>,
}

impl DelzantReportJson {
    pub fn new(p: &DelzantPolytope, r: &DelzantReport) -> Self {
        Self {
            verdict: if r.valid { "Delzant" } else { "NotDelzant" }.to_string(),
            valid: r.valid,
            failure: r.first_failure(),
            vertices: r
                .vertices
                .iter()
                .map(|v| VertexJson {
                    point: qs(&v.point),
                    incident: v.incident.clone(),
                    determinant: v.determinant.as_ref().map(|d| d.to_string()),
                })
                .collect(),
            non_primitive: r.non_primitive.clone(),
            volume: Q(p.volume().clone()),
            boundary_area: Q(p.boundary_area().clone()),
            mean_scalar: Q(p.mean_scalar()),
            barycenter: qs(p.barycenter()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FutakiJson {
    pub futaki: Vec<Q>,
    pub futaki_zero: bool,
    /// `"FutakiZero"` or `"UnstableAffine"`.
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub destabilizer: Option<AffineJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub destabilizer_l: Option<Q>,
}

impl FutakiJson {
    pub fn new(p: &DelzantPolytope, r: &FutakiReport) -> Self {
        let d = r.destabilizer();
        Self {
            futaki: qs(&r.values),
            futaki_zero: r.zero,
            verdict: if r.zero { "FutakiZero" } else { "UnstableAffine" }.to_string(),
            destabilizer_l: d.as_ref().map(|l| Q(crate::stability::l_of_affine(p, l))),
            destabilizer: d.as_ref().map(AffineJson::from_affine),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaJson {
    pub depth: u32,
    pub value: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReportJson {
    pub futaki: Vec<Q>,
    pub futaki_zero: bool,
    pub delta: Vec<DeltaJson>,
    pub verdict: String,
    pub witness: Option<PlJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_l: Option<Q>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_j: Option<Q>,
}

impl StabilityReportJson {
    pub fn new(r: &StabilityReport) -> Self {
        Self {
            futaki: qs(&r.futaki),
            futaki_zero: r.futaki_zero,
            delta: r
                .delta_by_depth
                .iter()
                .map(|(depth, v)| DeltaJson {
                    depth: *depth,
                    value: Q(v.clone()),
                })
                .collect(),
            verdict: r.verdict.as_str().to_string(),
            witness: r.witness.as_ref().map(PlJson::from_pl),
            witness_l: r.witness_l.clone().map(Q),
            witness_j: r.witness_j.clone().map(Q),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellJson {
    pub piece: AffineJson,
    pub vertices: Vec<Vec<Q>>,
}

/// The big polytope in the polytope schema plus the linearity cells of `f`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestConfigJson {
    pub dim: usize,
    pub facets: Vec<FacetJson>,
    pub cells: Vec<CellJson>,
}

impl TestConfigJson {
    pub fn new(t: &TestConfiguration) -> Self {
        let p = PolytopeJson::from_facets(t.dim, &t.facets);
        Self {
            dim: p.dim,
            facets: p.facets,
            cells: t
                .cells
                .iter()
                .map(|c| CellJson {
                    piece: AffineJson::from_affine(&c.piece),
                    vertices: c.vertices.iter().map(|v| qs(v)).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialJson {
    pub exponents: Vec<u32>,
    pub coeff: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialJson {
    pub polytope: PolytopeJson,
    #[serde(default)]
    pub smooth_poly: Vec<MonomialJson>,
    pub affine: Option<AffineJson>,
}

impl PotentialJson {
    pub fn from_potential(u: &SymplecticPotential) -> Self {
        Self {
            polytope: PolytopeJson::from_polytope(u.polytope()),
            smooth_poly: u
                .smooth_part()
                .iter()
                .map(|m| MonomialJson {
                    exponents: m.exponents.clone(),
                    coeff: Q(m.coeff.clone()),
                })
                .collect(),
            affine: Some(AffineJson::from_affine(u.affine_part())),
        }
    }

    pub fn to_potential(&self) -> Result<SymplecticPotential> {
        let p = self.polytope.to_polytope()?;
        let smooth = self
            .smooth_poly
            .iter()
            .map(|m| Monomial {
                exponents: m.exponents.clone(),
                coeff: m.coeff.0.clone(),
            })
            .collect();
        let affine = match &self.affine {
            Some(a) => a.to_affine(),
            None => AffineFunction::zero(p.dim()),
        };
        SymplecticPotential::new(p, smooth, affine)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyJson {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub nonlinear_term: f64,
    pub linear_term: f64,
    pub error_estimate: f64,
    pub volume: f64,
}

impl From<&EnergyReport> for EnergyJson {
    fn from(r: &EnergyReport) -> Self {
        Self {
            e: r.e,
            m: r.m,
            nonlinear_term: r.nonlinear_term,
            linear_term: r.linear_term,
            error_estimate: r.error_estimate,
            volume: r.volume,
        }
    }
}

/// Parses a JSON document into `T`, mapping failures to [`Error::Parse`].
pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Pretty-printed JSON.
pub fn to_string<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("JSON documents always serialise")
}
