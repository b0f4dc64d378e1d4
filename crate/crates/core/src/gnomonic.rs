//! Gnomonic projection of an open hemisphere onto its tangent space, the induced
//! parametrization of great subspheres as affine hyperplanes, and the weighted
//! hyperplane functional `U_f(P) = ∫_{S^{n-1}} ∫_0^∞ 1{H(u, t) ∩ P ≠ ∅} f(t) dt μ(du)`.

use std::f64::consts::PI;

use crate::body::{circumradius, ConvexBody};
use crate::error::{GeometryError, Result};
use crate::measure::{body_digest, mean_width_mc};
use crate::minnorm::min_norm_point;
use crate::quadrature::gauss16;
use crate::report::{combined_stderr, Claim, Detail, Estimate, Quantity, VerificationReport};
use crate::rng::{run_batches, Moments, StreamSeed};
use crate::sphere::{fill_uniform_sphere, reduce, sphere_area, UnitVector};
use crate::weight::WeightFunction;
use crate::{dot, Vector};

/// Points with `⟨e, x⟩` at or below this are treated as on/below the equator.
pub const HEMISPHERE_TOL: f64 = 1e-9;

/// Tangency point `e` and an orthonormal basis of `e^⊥`, the coordinates of `E^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionFrame {
    pub e: UnitVector,
    pub basis: Vec<Vector>,
}

impl ProjectionFrame {
    /// Basis by Gram–Schmidt of the coordinate axes against `e`, skipping the axis
    /// most aligned with `e` (lowest index on ties).
    pub fn new(e: UnitVector) -> Self {
        let d = e.len();
        let skip = (0..d).fold(0, |best, k| if e[k].abs() > e[best].abs() { k } else { best });
        let mut basis: Vec<Vector> = vec![e.as_vector().clone()];
        for k in (0..d).filter(|&k| k != skip) {
            let mut axis = Vector::zeros(d);
            axis[k] = 1.0;
            let w = reduce(axis, &basis).expect("axes other than the dominant one span e^perp");
            basis.push(w);
        }
        basis.remove(0);
        ProjectionFrame { e, basis }
    }

    /// Frame centered at the circumcenter of `body`.
    pub fn at_circumcenter(body: &ConvexBody) -> Result<Self> {
        let outer = circumradius(body);
        match outer.center {
            Some(c) if !outer.hemisphere => Ok(Self::new(c)),
            _ => Err(GeometryError::OutsideHemisphere(0.0)),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn coords(&self, x: &Vector) -> Vector {
        Vector::from_iterator(self.basis.len(), self.basis.iter().map(|b| b.dot(x)))
    }
}

/// `Π(x)`: coordinates of `x / ⟨e, x⟩ - e` in the frame basis.
pub fn project_point(frame: &ProjectionFrame, x: &UnitVector) -> Result<Vector> {
    if x.len() != frame.e.len() {
        return Err(GeometryError::DimensionMismatch {
            expected: frame.e.len(),
            found: x.len(),
        });
    }
    let c = frame.e.dot(x);
    if c <= HEMISPHERE_TOL {
        return Err(GeometryError::OutsideHemisphere(c));
    }
    Ok(frame.coords(x) / c)
}

/// Inverse of [`project_point`].
pub fn unproject_point(frame: &ProjectionFrame, y: &Vector) -> UnitVector {
    let mut x = frame.e.as_vector().clone();
    for (b, c) in frame.basis.iter().zip(y.iter()) {
        x.axpy(*c, b, 1.0);
    }
    UnitVector::normalize(x).expect("e + y is never zero")
}

/// Convex hull of finitely many points of `E^n`, kept as its vertex list.
#[derive(Clone, Debug, PartialEq)]
pub struct EuclideanPolytope {
    pub n: usize,
    pub vertices: Vec<Vector>,
    pub contains_origin: bool,
}

impl EuclideanPolytope {
    pub fn new(vertices: Vec<Vector>) -> Result<Self> {
        let first = vertices.first().ok_or(GeometryError::Empty)?;
        let n = first.len();
        if let Some(v) = vertices.iter().find(|v| v.len() != n) {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        let scale = vertices.iter().map(|v| v.norm()).fold(1.0, f64::max);
        let contains_origin = min_norm_point(&vertices).norm() <= 1e-9 * scale;
        Ok(EuclideanPolytope {
            n,
            vertices,
            contains_origin,
        })
    }

    /// Segment `[-r·dir, r·dir]`.
    pub fn segment(radius: f64, dir: &Vector) -> Result<Self> {
        let d = dir.normalize() * radius;
        Self::new(vec![-&d, d])
    }
}

/// `h(P, u) = max_{x ∈ P} ⟨x, u⟩`.
pub fn support_function(p: &EuclideanPolytope, u0: &Vector) -> f64 {
    p.support(u0.as_slice())
}

/// A compact convex set of `E^n` known through its support function.
pub trait SupportSet: Sync {
    fn dim(&self) -> usize;
    fn support(&self, u: &[f64]) -> f64;
    /// Angles in `[0, 2π)` at which the planar integrand of [`uf`] may fail to be
    /// smooth; used to split the quadrature for `n = 2`.
    fn planar_breakpoints(&self) -> Vec<f64>;
}

impl SupportSet for EuclideanPolytope {
    fn dim(&self) -> usize {
        self.n
    }

    fn support(&self, u: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(v.as_slice(), u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn planar_breakpoints(&self) -> Vec<f64> {
        let hull = planar_hull(&self.vertices);
        let mut out = Vec::new();
        let m = hull.len();
        for i in 0..m {
            let a = hull[i];
            let b = hull[(i + 1) % m];
            if m > 1 && (a.0 != b.0 || a.1 != b.1) {
                let edge = (b.1 - a.1).atan2(b.0 - a.0);
                out.push(edge + PI / 2.0);
                out.push(edge - PI / 2.0);
            }
            let arg = a.1.atan2(a.0);
            out.push(arg + PI / 2.0);
            out.push(arg - PI / 2.0);
        }
        out
    }
}

/// Euclidean ball of radius `radius` centered at 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EuclideanBall {
    pub n: usize,
    pub radius: f64,
}

impl SupportSet for EuclideanBall {
    fn dim(&self) -> usize {
        self.n
    }

    fn support(&self, _u: &[f64]) -> f64 {
        self.radius
    }

    fn planar_breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// Andrew's monotone chain; returns hull vertices counter-clockwise.
fn planar_hull(points: &[Vector]) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Image of `S^n_e ∩ u^⊥` under `Π`: the hyperplane `{x : ⟨u_0, x⟩ = t}` where
/// `u = τe - √(1 - τ²) u_0` and `t = τ / √(1 - τ²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperplaneParam {
    pub u0: Vector,
    pub t: f64,
    pub tau: f64,
}

pub fn hyperplane_param(frame: &ProjectionFrame, u: &UnitVector) -> Result<HyperplaneParam> {
    let tau = frame.e.dot(u);
    if tau < 0.0 {
        return Err(GeometryError::invalid(format!("u must satisfy <e, u> >= 0, got {tau}")));
    }
    let c = frame.coords(u.as_vector());
    let s = c.norm();
    if s <= 1e-15 {
        return Err(GeometryError::invalid("u = e has no hyperplane image"));
    }
    Ok(HyperplaneParam {
        u0: -c / s,
        t: tau / s,
        tau,
    })
}

/// How [`uf`] evaluates the direction integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UfMode {
    /// Gauss–Legendre on the circle split at the support function's kinks (`n = 2` only).
    Quadrature,
    MonteCarlo { samples: u64, seed: StreamSeed },
    /// Quadrature for `n = 2`, Monte Carlo otherwise.
    Auto { samples: u64, seed: StreamSeed },
}

/// `ν_f` measure of the hyperplanes `H(u_0, t)`, `t ≥ 0`, hitting the set in direction `u_0`:
/// `F(h(u_0)) - F(max(0, -h(-u_0)))`, which is `F(h(u_0))` when the set contains 0.
pub fn uf_integrand<S: SupportSet + ?Sized>(set: &S, w: &WeightFunction, u0: &[f64]) -> f64 {
    let hi = set.support(u0);
    let neg: Vec<f64> = u0.iter().map(|x| -x).collect();
    let lo = (-set.support(&neg)).max(0.0);
    if hi <= lo {
        0.0
    } else {
        w.cumulative(hi) - w.cumulative(lo)
    }
}

/// `U_f(P) = ∫_{S^{n-1}} [F(h(P, u)) - F(max(0, -h(P, -u)))] μ(du)`.
pub fn uf<S: SupportSet + ?Sized>(set: &S, w: &WeightFunction, mode: UfMode) -> Result<Estimate> {
    let n = set.dim();
    if n == 0 {
        return Err(GeometryError::UnsupportedDimension(0));
    }
    let mode = match mode {
        UfMode::Auto { .. } if n == 2 => UfMode::Quadrature,
        UfMode::Auto { samples, seed } => UfMode::MonteCarlo { samples, seed },
        m => m,
    };
    match mode {
        UfMode::Quadrature => {
            if n != 2 {
                return Err(GeometryError::invalid("quadrature mode is implemented for n = 2"));
            }
            let mut cuts: Vec<f64> = set
                .planar_breakpoints()
                .into_iter()
                .map(|a| a.rem_euclid(2.0 * PI))
                .collect();
            cuts.push(0.0);
            cuts.push(2.0 * PI);
            cuts.sort_by(f64::total_cmp);
            cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
            let f = |theta: f64| uf_integrand(set, w, &[theta.cos(), theta.sin()]);
            let value = cuts.windows(2).map(|p| gauss16(&f, p[0], p[1])).sum();
            Ok(Estimate::exact(Quantity::Uf, value))
        }
        UfMode::MonteCarlo { samples, seed } => {
            let parts = run_batches(seed, samples, |rng, len| {
                let mut m = Moments::default();
                let mut u = vec![0.0; n];
                for _ in 0..len {
                    fill_uniform_sphere(rng, &mut u);
                    m.push(uf_integrand(set, w, &u));
                }
                m
            });
            let m = Moments::merged(&parts);
            let area = sphere_area(n - 1)?;
            Ok(Estimate {
                quantity: Quantity::Uf,
                value: area * m.mean(),
                stderr: area * m.stderr(),
                samples,
                seed: seed.seed,
            })
        }
        UfMode::Auto { .. } => unreachable!(),
    }
}

/// `Π(K)` for a body whose generators all lie strictly inside the frame's hemisphere.
pub fn project_body(frame: &ProjectionFrame, body: &ConvexBody) -> Result<EuclideanPolytope> {
    let vertices = body
        .v_generators()
        .iter()
        .map(|v| project_point(frame, v))
        .collect::<Result<Vec<_>>>()?;
    EuclideanPolytope::new(vertices)
}

/// Compares the spherical mean width `U(K)` with `U_f(Π(K))` for the spherical weight,
/// projecting from the circumcenter of `K`.
pub fn check_projection_consistency(body: &ConvexBody, samples: u64, seed: StreamSeed) -> Result<VerificationReport> {
    let n = body.dim();
    let frame = ProjectionFrame::at_circumcenter(body)?;
    let projected = project_body(&frame, body)?;
    let w = WeightFunction::spherical(n)?;
    let sphere_side = mean_width_mc(body, samples, seed.substream(1))?;
    let plane_side = uf(
        &projected,
        &w,
        UfMode::Auto {
            samples,
            seed: seed.substream(2),
        },
    )?;
    let se = combined_stderr(&[sphere_side.stderr, plane_side.stderr]);
    // quadrature error allowance for the deterministic planar route
    let tol = 3.0 * se + 1e-9;
    let slack = -(sphere_side.value - plane_side.value).abs();
    let digest = body_digest("projection", body).count(samples).count(seed.seed).finish();
    Ok(VerificationReport::new(
        Claim::ProjectionConsistency,
        sphere_side,
        plane_side,
        slack,
        tol,
        "|U(K) - U_f(Pi(K))| <= 3 * combined stderr + 1e-9",
    )
    .with_sampling(seed.seed, samples)
    .with_digest(digest)
    .with_detail("frame_center", Detail::Reals(frame.e.as_slice().to_vec()))
    .with_detail("weight", Detail::Text(w.label())))
}
