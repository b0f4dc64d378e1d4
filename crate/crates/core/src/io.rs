//! File formats for bodies, fans, covers and Euclidean sets. Angles may be written
//! as fractions of π (`"pi/4"`, `"3pi/4"`, `"2*pi/3"`).

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::body::{make_body, ConvexBody, RepSource};
use crate::covering::{CoveringInstance, LuneFan};
use crate::error::{GeometryError, Result};
use crate::gnomonic::EuclideanPolytope;
use crate::linhart::SimplexInBall;
use crate::sphere::{SphericalCap, UnitVector};
use crate::{check_dim, Vector};

/// Norm tolerance for vectors read from files.
pub const LOAD_UNIT_TOL: f64 = 1e-9;

/// Parse a real number or a multiple of π: `pi`, `-pi/2`, `3pi/4`, `2*pi/3`, `0.25`, `1/3`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase();
    let bad = || GeometryError::invalid(format!("cannot parse angle {text:?}"));
    let number = |t: &str| t.parse::<f64>().ok().filter(|x| x.is_finite());
    let fraction = |t: &str| -> Option<f64> {
        match t.split_once('/') {
            Some((a, b)) => Some(number(a)? / number(b).filter(|d| *d != 0.0)?),
            None => number(t),
        }
    };
    if let Some((coef, rest)) = s.split_once("pi") {
        let coef = coef.strip_suffix('*').unwrap_or(coef);
        let c = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => number(coef).ok_or_else(bad)?,
        };
        let den = match rest {
            "" => 1.0,
            _ => rest
                .strip_prefix('/')
                .and_then(number)
                .filter(|d| *d != 0.0)
                .ok_or_else(bad)?,
        };
        Ok(c * PI / den)
    } else {
        fraction(&s).ok_or_else(bad)
    }
}

/// An angle given either as a number or symbolically.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Angle {
    Radians(f64),
    Symbolic(String),
}

impl Angle {
    pub fn radians(&self) -> Result<f64> {
        match self {
            Angle::Radians(x) if x.is_finite() => Ok(*x),
            Angle::Radians(x) => Err(GeometryError::invalid(format!("angle {x} is not finite"))),
            Angle::Symbolic(s) => parse_angle(s),
        }
    }
}

impl From<f64> for Angle {
    fn from(x: f64) -> Self {
        Angle::Radians(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rep {
    H,
    V,
    #[serde(rename = "both")]
    Both,
}

impl fmt::Display for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rep::H => "H",
            Rep::V => "V",
            Rep::Both => "both",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BodyTags {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lune_angle: Option<Angle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
}

impl BodyTags {
    fn is_empty(&self) -> bool {
        self == &BodyTags::default()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BodyFile {
    pub dim: usize,
    pub rep: Rep,
    #[serde(default)]
    pub normals: Vec<Vec<f64>>,
    #[serde(default)]
    pub generators: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "BodyTags::is_empty")]
    pub tags: BodyTags,
}

fn units(field: &str, n: usize, rows: &[Vec<f64>]) -> Result<Vec<UnitVector>> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != n + 1 {
                return Err(GeometryError::invalid(format!(
                    "{field}[{i}]: expected {} coordinates, found {}",
                    n + 1,
                    row.len()
                )));
            }
            let v = Vector::from_column_slice(row);
            UnitVector::checked(v, LOAD_UNIT_TOL)
                .map_err(|e| GeometryError::invalid(format!("{field}[{i}]: {e}")))
        })
        .collect()
}

impl BodyFile {
    pub fn from_body(body: &ConvexBody) -> Self {
        let rows = |vs: &[UnitVector]| vs.iter().map(|v| v.as_slice().to_vec()).collect();
        BodyFile {
            dim: body.dim(),
            rep: Rep::Both,
            normals: rows(body.h_normals()),
            generators: rows(body.v_generators()),
            tags: BodyTags::default(),
        }
    }

    pub fn with_tags(mut self, tags: BodyTags) -> Self {
        self.tags = tags;
        self
    }

    /// Validate and build the body; field errors name the offending entry.
    pub fn to_body(&self) -> Result<ConvexBody> {
        let n = self.dim;
        check_dim(n)?;
        let normals = units("normals", n, &self.normals)?;
        let generators = units("generators", n, &self.generators)?;
        let need = |field: &str, rows: &[UnitVector]| {
            if rows.is_empty() {
                Err(GeometryError::invalid(format!("{field}: required for rep {}", self.rep)))
            } else {
                Ok(())
            }
        };
        let (h, v) = match self.rep {
            Rep::H => {
                need("normals", &normals)?;
                (Some(normals), None)
            }
            Rep::V => {
                need("generators", &generators)?;
                (None, Some(generators))
            }
            Rep::Both => {
                need("normals", &normals)?;
                need("generators", &generators)?;
                (Some(normals), Some(generators))
            }
        };
        make_body(n, h, v)
    }

    pub fn lune_angle(&self) -> Result<Option<f64>> {
        self.tags.lune_angle.as_ref().map(Angle::radians).transpose()
    }
}

impl From<RepSource> for Rep {
    fn from(s: RepSource) -> Self {
        match s {
            RepSource::H => Rep::H,
            RepSource::V => Rep::V,
            RepSource::Both => Rep::Both,
        }
    }
}

/// Lune fan. Either `boundary_angles` (with `θ_m = θ_0 + 2π`) or `gaps` is given; the frame
/// defaults to the coordinate frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FanFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary_angles: Vec<Angle>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gaps: Vec<Angle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Angle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub widening: Option<Angle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ridge_basis: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane_basis: Option<[Vec<f64>; 2]>,
    /// Informational; recomputed on load.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sum_inradii: Option<f64>,
}

fn angles(field: &str, xs: &[Angle]) -> Result<Vec<f64>> {
    xs.iter()
        .enumerate()
        .map(|(i, a)| a.radians().map_err(|e| GeometryError::invalid(format!("{field}[{i}]: {e}"))))
        .collect()
}

fn vector(field: &str, n: usize, row: &[f64]) -> Result<Vector> {
    if row.len() != n + 1 {
        return Err(GeometryError::invalid(format!(
            "{field}: expected {} coordinates, found {}",
            n + 1,
            row.len()
        )));
    }
    Ok(Vector::from_column_slice(row))
}

impl FanFile {
    pub fn from_fan(fan: &LuneFan) -> Self {
        let (p, q) = fan.plane_basis();
        FanFile {
            dim: fan.dim(),
            boundary_angles: fan.boundary_angles().iter().map(|&a| Angle::Radians(a)).collect(),
            gaps: Vec::new(),
            start: None,
            widening: (fan.widening() > 0.0).then_some(Angle::Radians(fan.widening())),
            ridge_basis: Some(fan.ridge_basis().iter().map(|v| v.as_slice().to_vec()).collect()),
            plane_basis: Some([p.as_slice().to_vec(), q.as_slice().to_vec()]),
            sum_inradii: Some(fan.inradius_sum()),
        }
    }

    pub fn to_fan(&self) -> Result<LuneFan> {
        let n = self.dim;
        check_dim(n)?;
        let boundary = match (self.boundary_angles.is_empty(), self.gaps.is_empty()) {
            (false, true) => angles("boundary_angles", &self.boundary_angles)?,
            (true, false) => {
                let start = self.start.as_ref().map(Angle::radians).transpose()?.unwrap_or(0.0);
                let mut out = vec![start];
                for g in angles("gaps", &self.gaps)? {
                    out.push(out[out.len() - 1] + g);
                }
                out
            }
            _ => {
                return Err(GeometryError::invalid(
                    "exactly one of boundary_angles and gaps must be given",
                ))
            }
        };
        let (ridge, plane) = match (&self.ridge_basis, &self.plane_basis) {
            (None, None) => crate::covering::standard_frame(n)?,
            (Some(r), Some([p, q])) => (
                r.iter()
                    .enumerate()
                    .map(|(i, v)| vector(&format!("ridge_basis[{i}]"), n, v))
                    .collect::<Result<Vec<_>>>()?,
                (vector("plane_basis[0]", n, p)?, vector("plane_basis[1]", n, q)?),
            ),
            _ => return Err(GeometryError::invalid("ridge_basis and plane_basis must be given together")),
        };
        let fan = LuneFan::new(ridge, plane, boundary)?;
        match &self.widening {
            Some(w) => fan.widened(w.radians()?),
            None => Ok(fan),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CapFile {
    pub center: Vec<f64>,
    pub radius: Angle,
}

impl CapFile {
    pub fn to_cap(&self, n: usize) -> Result<SphericalCap> {
        let c = UnitVector::checked(vector("ball.center", n, &self.center)?, LOAD_UNIT_TOL)
            .map_err(|e| GeometryError::invalid(format!("ball.center: {e}")))?;
        SphericalCap::new(c, self.radius.radians()?)
    }
}

/// Cover of `ball` (whole sphere when absent) by a fan or by explicit bodies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ball: Option<CapFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bodies: Vec<BodyFile>,
}

impl CoveringFile {
    pub fn to_instance(&self) -> Result<CoveringInstance> {
        let n = self.dim;
        check_dim(n)?;
        let ball = self.ball.as_ref().map(|b| b.to_cap(n)).transpose()?;
        match (&self.fan, self.bodies.is_empty()) {
            (Some(f), true) => {
                if f.dim != n {
                    return Err(GeometryError::invalid(format!("fan.dim: expected {n}, found {}", f.dim)));
                }
                f.to_fan()?.instance(ball)
            }
            (None, false) => {
                let mut bodies = Vec::new();
                let mut lune_angles = Vec::new();
                for (i, b) in self.bodies.iter().enumerate() {
                    let ctx = |e: GeometryError| GeometryError::invalid(format!("bodies[{i}]: {e}"));
                    if b.dim != n {
                        return Err(ctx(GeometryError::DimensionMismatch {
                            expected: n,
                            found: b.dim,
                        }));
                    }
                    bodies.push(b.to_body().map_err(ctx)?);
                    lune_angles.push(b.lune_angle().map_err(ctx)?);
                }
                let ball = match ball {
                    Some(b) => b,
                    None => SphericalCap::new(UnitVector::axis(n + 1, 0), PI)?,
                };
                CoveringInstance::with_lune_angles(ball, bodies, lune_angles, crate::covering::Construction::Custom)
            }
            _ => Err(GeometryError::invalid("exactly one of fan and bodies must be given")),
        }
    }
}

/// Euclidean point set in `E^n` (`n` coordinates per vertex).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeFile {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    /// Ball radius for inscribed simplices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

impl PolytopeFile {
    fn points(&self) -> Result<Vec<Vector>> {
        if self.vertices.is_empty() {
            return Err(GeometryError::invalid("vertices: at least one vertex is required"));
        }
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if v.len() != self.dim {
                    Err(GeometryError::invalid(format!(
                        "vertices[{i}]: expected {} coordinates, found {}",
                        self.dim,
                        v.len()
                    )))
                } else if v.iter().any(|x| !x.is_finite()) {
                    Err(GeometryError::invalid(format!("vertices[{i}]: non-finite coordinate")))
                } else {
                    Ok(Vector::from_column_slice(v))
                }
            })
            .collect()
    }

    pub fn to_polytope(&self) -> Result<EuclideanPolytope> {
        EuclideanPolytope::new(self.points()?)
    }

    pub fn to_simplex(&self) -> Result<SimplexInBall> {
        let radius = self
            .radius
            .ok_or_else(|| GeometryError::invalid("radius: required for an inscribed simplex"))?;
        SimplexInBall::new(radius, self.points()?)
    }

    pub fn from_simplex(s: &SimplexInBall) -> Self {
        PolytopeFile {
            dim: s.dim(),
            vertices: s.vertices().iter().map(|v| v.as_slice().to_vec()).collect(),
            radius: Some(s.radius()),
        }
    }
}
