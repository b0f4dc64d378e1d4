//! Spherically convex bodies as `S^n ∩ C` for a polyhedral cone `C`.
//!
//! Facet poles `u_i` describe the body as `{x : ⟨u_i, x⟩ ≤ 0 ∀i}`; generators `v_j`
//! describe it as `S^n ∩ pos{v_j}`. With this sign convention the polar body is the
//! same pair of lists with the roles swapped.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::cone::polar_generators;
use crate::error::{GeometryError, Result};
use crate::minnorm::min_norm_point;
use crate::sphere::{angle_between, orthogonal_complement, SphericalCap, UnitVector};
use crate::{check_dim, dot, Vector};

/// Membership slack for `⟨u_i, x⟩ ≤ 0`.
pub const CONTAINS_TOL: f64 = 1e-12;
/// Allowed violation of `⟨u_i, v_j⟩ ≤ 0` between supplied representations.
pub const CONSISTENCY_TOL: f64 = 1e-9;
/// A body has interior points iff its facet poles stay this far from containing 0 in
/// their convex hull (the conic inradius sine).
pub const INTERIOR_TOL: f64 = 1e-9;
/// Target accuracy of the conic radius programs (on the sine / cosine of the radius).
pub const SOLVER_TOL: f64 = 1e-9;

/// Which representation the body was built from; the other one is derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepSource {
    H,
    V,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyStatus {
    /// Has interior points.
    Body,
    /// Lower-dimensional (e.g. a point, arc or great-subsphere slice).
    Degenerate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvexBody {
    n: usize,
    h_normals: Vec<UnitVector>,
    v_generators: Vec<UnitVector>,
    source: RepSource,
    status: BodyStatus,
}

fn check_vectors(n: usize, vs: &[UnitVector]) -> Result<()> {
    for v in vs {
        if v.len() != n + 1 {
            return Err(GeometryError::DimensionMismatch {
                expected: n + 1,
                found: v.len(),
            });
        }
    }
    Ok(())
}

fn to_units(vs: Vec<Vector>) -> Vec<UnitVector> {
    vs.into_iter().filter_map(|v| UnitVector::normalize(v).ok()).collect()
}

fn vectors(vs: &[UnitVector]) -> Vec<Vector> {
    vs.iter().map(|v| v.as_vector().clone()).collect()
}

fn classify(h_normals: &[UnitVector]) -> BodyStatus {
    if inner_sine(h_normals).0 > INTERIOR_TOL {
        BodyStatus::Body
    } else {
        BodyStatus::Degenerate
    }
}

/// `(s*, x*)` maximizing `s` subject to `⟨u_i, x⟩ + s ≤ 0`, `‖x‖ ≤ 1`.
fn inner_sine(h_normals: &[UnitVector]) -> (f64, Option<Vector>) {
    let pts: Vec<Vector> = h_normals.iter().map(|u| -u.as_vector()).collect();
    let p = min_norm_point(&pts);
    let s = p.norm();
    if s > 0.0 {
        (s, Some(&p.point / s))
    } else {
        (0.0, None)
    }
}

/// Generators of the cone described by `normals`, as unit vectors.
pub fn h_to_v(n: usize, normals: &[UnitVector]) -> Vec<UnitVector> {
    to_units(polar_generators(&vectors(normals), n + 1).all())
}

/// Facet poles of the conic hull of `generators`.
pub fn v_to_h(n: usize, generators: &[UnitVector]) -> Vec<UnitVector> {
    to_units(polar_generators(&vectors(generators), n + 1).all())
}

/// Build and validate a body from facet poles and/or generators. The missing
/// representation is computed by double description. Lower-dimensional sets are
/// accepted with [`BodyStatus::Degenerate`].
pub fn make_body(
    n: usize,
    h_normals: Option<Vec<UnitVector>>,
    v_generators: Option<Vec<UnitVector>>,
) -> Result<ConvexBody> {
    check_dim(n)?;
    let h = h_normals.filter(|h| !h.is_empty());
    let v = v_generators.filter(|v| !v.is_empty());
    let (h, v, source) = match (h, v) {
        (None, None) => return Err(GeometryError::MissingRepresentation),
        (Some(h), Some(v)) => {
            check_vectors(n, &h)?;
            check_vectors(n, &v)?;
            for (i, u) in h.iter().enumerate() {
                for (j, g) in v.iter().enumerate() {
                    let value = u.dot(g);
                    if value > CONSISTENCY_TOL {
                        return Err(GeometryError::InconsistentRepresentations {
                            normal: i,
                            generator: j,
                            value,
                        });
                    }
                }
            }
            (h, v, RepSource::Both)
        }
        (Some(h), None) => {
            check_vectors(n, &h)?;
            let v = h_to_v(n, &h);
            if v.is_empty() {
                return Err(GeometryError::Empty);
            }
            (h, v, RepSource::H)
        }
        (None, Some(v)) => {
            check_vectors(n, &v)?;
            let h = v_to_h(n, &v);
            if h.is_empty() {
                return Err(GeometryError::NotInHemisphere);
            }
            (h, v, RepSource::V)
        }
    };
    let status = classify(&h);
    Ok(ConvexBody {
        n,
        h_normals: h,
        v_generators: v,
        source,
        status,
    })
}

/// Recompute the derived representation from the source one.
pub fn convert_rep(body: &ConvexBody) -> Result<ConvexBody> {
    match body.source {
        RepSource::H | RepSource::Both => make_body(body.n, Some(body.h_normals.clone()), None),
        RepSource::V => make_body(body.n, None, Some(body.v_generators.clone())),
    }
}

impl ConvexBody {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn h_normals(&self) -> &[UnitVector] {
        &self.h_normals
    }

    pub fn v_generators(&self) -> &[UnitVector] {
        &self.v_generators
    }

    pub fn source(&self) -> RepSource {
        self.source
    }

    pub fn status(&self) -> BodyStatus {
        self.status
    }

    pub fn is_body(&self) -> bool {
        self.status == BodyStatus::Body
    }

    /// True when the body lies in an open hemisphere (its cone is pointed).
    pub fn in_open_hemisphere(&self) -> bool {
        min_norm_point(&vectors(&self.v_generators)).norm() > INTERIOR_TOL
    }

    pub fn contains(&self, x: &UnitVector) -> bool {
        self.contains_slice(x.as_slice())
    }

    /// Membership test on raw coordinates; scale-invariant, so `x` need not be unit.
    pub fn contains_slice(&self, x: &[f64]) -> bool {
        self.h_normals.iter().all(|u| dot(u.as_slice(), x) <= CONTAINS_TOL)
    }

    /// Whether the great subsphere `u^⊥` meets the body: false exactly when all
    /// generators lie strictly on one side.
    pub fn hyperplane_meets(&self, u: &UnitVector) -> bool {
        self.hyperplane_meets_slice(u.as_slice())
    }

    pub fn hyperplane_meets_slice(&self, u: &[f64]) -> bool {
        let mut pos = false;
        let mut neg = false;
        for v in &self.v_generators {
            let s = dot(v.as_slice(), u);
            if s > 0.0 {
                pos = true;
            } else if s < 0.0 {
                neg = true;
            } else {
                return true;
            }
            if pos && neg {
                return true;
            }
        }
        false
    }
}

/// `K* = {u : ⟨u, v⟩ ≤ 0 ∀v ∈ K}`: the representations swap roles.
pub fn polar(body: &ConvexBody) -> ConvexBody {
    let h = body.v_generators.clone();
    let status = classify(&h);
    ConvexBody {
        n: body.n,
        h_normals: h,
        v_generators: body.h_normals.clone(),
        source: match body.source {
            RepSource::H => RepSource::V,
            RepSource::V => RepSource::H,
            RepSource::Both => RepSource::Both,
        },
        status,
    }
}

/// Largest cap contained in a body.
#[derive(Clone, Debug, PartialEq)]
pub struct Inball {
    pub radius: f64,
    pub center: UnitVector,
}

/// Smallest cap containing a body, or the hemisphere flag when no cap of radius
/// below π/2 contains it.
#[derive(Clone, Debug, PartialEq)]
pub struct Circumball {
    pub radius: f64,
    pub center: Option<UnitVector>,
    pub hemisphere: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BodyMetrics {
    pub inradius: f64,
    pub incenter: UnitVector,
    pub circumradius: f64,
    pub circumcenter: Option<UnitVector>,
    pub hemisphere_flag: bool,
    pub solver_tolerance: f64,
}

/// Inradius `r(K) = arcsin(s*)` of the conic program
/// `max s  s.t. ⟨u_i, x⟩ + s ≤ 0, ‖x‖ ≤ 1`, solved as the distance from the origin
/// to `conv{-u_i}`.
pub fn inradius(body: &ConvexBody) -> Result<Inball> {
    if !body.is_body() {
        return Err(GeometryError::NotABody);
    }
    match inner_sine(&body.h_normals) {
        (s, Some(x)) if s > INTERIOR_TOL => Ok(Inball {
            radius: s.min(1.0).asin(),
            center: UnitVector::normalize(x)?,
        }),
        _ => Err(GeometryError::NotABody),
    }
}

/// Circumradius `R(K) = arccos(c*)` of `max c  s.t. ⟨v_j, e⟩ ≥ c, ‖e‖ ≤ 1`. Caps of
/// radius at most π/2 are convex, so the smallest cap around the generators is the
/// smallest cap around the body.
pub fn circumradius(body: &ConvexBody) -> Circumball {
    let p = min_norm_point(&vectors(&body.v_generators));
    let c = p.norm();
    if c <= INTERIOR_TOL {
        return Circumball {
            radius: FRAC_PI_2,
            center: None,
            hemisphere: true,
        };
    }
    Circumball {
        radius: c.min(1.0).acos(),
        center: UnitVector::normalize(p.point).ok(),
        hemisphere: false,
    }
}

pub fn metrics(body: &ConvexBody) -> Result<BodyMetrics> {
    let inner = inradius(body)?;
    let outer = circumradius(body);
    Ok(BodyMetrics {
        inradius: inner.radius,
        incenter: inner.center,
        circumradius: outer.radius,
        circumcenter: outer.center,
        hemisphere_flag: outer.hemisphere,
        solver_tolerance: SOLVER_TOL,
    })
}

/// `K ∩ cap` for a hemisphere cap: adds the pole `-center` to the facet list.
pub fn intersect_with_hemisphere(body: &ConvexBody, cap: &SphericalCap) -> Result<ConvexBody> {
    if (cap.radius - FRAC_PI_2).abs() > 1e-12 {
        return Err(GeometryError::invalid(format!(
            "intersection needs a hemisphere, got cap radius {}",
            cap.radius
        )));
    }
    if cap.center.len() != body.n + 1 {
        return Err(GeometryError::DimensionMismatch {
            expected: body.n + 1,
            found: cap.center.len(),
        });
    }
    let mut h = body.h_normals.clone();
    h.push(cap.center.antipode());
    make_body(body.n, Some(h), None)
}

/// Two-halfspace body with an explicit ridge.
#[derive(Clone, Debug, PartialEq)]
pub struct Lune {
    pub normals: [UnitVector; 2],
    /// Interior dihedral angle in `(0, π]`.
    pub angle: f64,
    /// Orthonormal basis of an `(n-1)`-dimensional subspace of `u_1^⊥ ∩ u_2^⊥`.
    pub ridge_basis: Vec<Vector>,
}

impl Lune {
    pub fn inradius(&self) -> f64 {
        self.angle / 2.0
    }

    /// `(σ_n / π) r`, the measure of a lune with inradius `r`.
    pub fn volume(&self) -> f64 {
        let n = self.normals[0].dim();
        crate::sphere::sphere_area(n).expect("lune dimension") / PI * self.inradius()
    }
}

/// Lune `{x : ⟨u_1, x⟩ ≤ 0, ⟨u_2, x⟩ ≤ 0}` with angle `π - d(u_1, u_2)`.
pub fn make_lune(n: usize, u1: UnitVector, u2: UnitVector) -> Result<(Lune, ConvexBody)> {
    check_dim(n)?;
    check_vectors(n, &[u1.clone(), u2.clone()])?;
    let dist = angle_between(u1.as_slice(), u2.as_slice());
    let angle = PI - dist;
    if angle <= 1e-12 {
        return Err(GeometryError::AntipodalNormals);
    }
    let mut ridge = orthogonal_complement(&[u1.as_vector().clone(), u2.as_vector().clone()], n + 1);
    ridge.truncate(n - 1);
    let body = make_body(n, Some(vec![u1.clone(), u2.clone()]), None)?;
    Ok((
        Lune {
            normals: [u1, u2],
            angle,
            ridge_basis: ridge,
        },
        body,
    ))
}

/// Lune of points whose angular coordinate in the plane `span(p, q)` (orthogonal to
/// the ridge) lies in `[theta_start, theta_end]`. The stored angle is the exact
/// difference, so fan sums avoid any rounding from the facet poles.
pub fn make_lune_in_frame(
    ridge_basis: &[Vector],
    plane: (&Vector, &Vector),
    theta_start: f64,
    theta_end: f64,
) -> Result<(Lune, ConvexBody)> {
    let angle = theta_end - theta_start;
    if !(angle > 0.0 && angle <= PI + 1e-15) {
        return Err(GeometryError::invalid(format!(
            "lune angle {angle} must lie in (0, pi]"
        )));
    }
    let (p, q) = plane;
    let ambient = p.len();
    let n = ambient - 1;
    check_dim(n)?;
    if ridge_basis.len() != n - 1 {
        return Err(GeometryError::invalid(format!(
            "ridge needs {} basis vectors, got {}",
            n - 1,
            ridge_basis.len()
        )));
    }
    let dir = |theta: f64| p * theta.cos() + q * theta.sin();
    let u1 = UnitVector::normalize(dir(theta_start - FRAC_PI_2))?;
    let u2 = UnitVector::normalize(dir(theta_end + FRAC_PI_2))?;
    let body = make_body(n, Some(vec![u1.clone(), u2.clone()]), None)?;
    Ok((
        Lune {
            normals: [u1, u2],
            angle: angle.min(PI),
            ridge_basis: ridge_basis.to_vec(),
        },
        body,
    ))
}

/// The coordinate octant `{x : x_k ≥ 0, k = 0..=n}` of `S^n`.
pub fn octant(n: usize) -> Result<ConvexBody> {
    let h = (0..=n).map(|k| UnitVector::axis(n + 1, k).antipode()).collect();
    make_body(n, Some(h), None)
}

/// Closed hemisphere `{x : ⟨u, x⟩ ≤ 0}`, centered at `-u`.
pub fn hemisphere(u: UnitVector) -> Result<ConvexBody> {
    make_body(u.dim(), Some(vec![u]), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn uv(xs: &[f64]) -> UnitVector {
        UnitVector::from_slice(xs).unwrap()
    }

    fn same_set(a: &[UnitVector], b: &[UnitVector]) -> bool {
        a.len() == b.len()
            && a.iter().all(|x| b.iter().any(|y| (x.as_vector() - y.as_vector()).norm() < 1e-9))
    }

    #[test]
    fn octant_reps() {
        let k = octant(2).unwrap();
        assert!(k.is_body());
        let axes: Vec<_> = (0..3).map(|i| UnitVector::axis(3, i)).collect();
        assert!(same_set(k.v_generators(), &axes));
    }

    #[test]
    fn single_generator_is_point() {
        let k = make_body(2, None, Some(vec![UnitVector::axis(3, 0)])).unwrap();
        assert_eq!(k.status(), BodyStatus::Degenerate);
        assert!(k.contains(&UnitVector::axis(3, 0)));
        assert!(!k.contains(&UnitVector::axis(3, 1)));
        assert_eq!(inradius(&k), Err(GeometryError::NotABody));
    }

    #[test]
    fn duplicated_normal_is_hemisphere() {
        let u = uv(&[0.3, -0.2, 0.9]);
        let k = make_body(2, Some(vec![u.clone(), u.clone()]), None).unwrap();
        assert!(k.is_body());
        assert_abs_diff_eq!(inradius(&k).unwrap().radius, FRAC_PI_2, epsilon = 1e-12);
    }

    #[test]
    fn errors() {
        assert_eq!(make_body(2, None, None), Err(GeometryError::MissingRepresentation));
        assert_eq!(make_body(7, Some(vec![UnitVector::axis(8, 0)]), None), Err(GeometryError::UnsupportedDimension(7)));
        assert!(matches!(
            make_body(2, Some(vec![UnitVector::axis(4, 0)]), None),
            Err(GeometryError::DimensionMismatch { .. })
        ));
        let all: Vec<_> = (0..3)
            .flat_map(|k| [UnitVector::axis(3, k), UnitVector::axis(3, k).antipode()])
            .collect();
        assert_eq!(make_body(2, None, Some(all.clone())), Err(GeometryError::NotInHemisphere));
        assert_eq!(make_body(2, Some(all), None), Err(GeometryError::Empty));
        let bad = make_body(
            2,
            Some(vec![UnitVector::axis(3, 0)]),
            Some(vec![UnitVector::axis(3, 0)]),
        );
        assert!(matches!(bad, Err(GeometryError::InconsistentRepresentations { .. })));
    }

    #[test]
    fn hemisphere_generators() {
        let u = UnitVector::axis(3, 2);
        let k = hemisphere(u.clone()).unwrap();
        // ± basis of u^⊥ and -u
        assert_eq!(k.v_generators().len(), 5);
        assert!(k.v_generators().iter().any(|g| (g.as_vector() + u.as_vector()).norm() < 1e-12));
        let inner = inradius(&k).unwrap();
        assert_abs_diff_eq!(inner.radius, FRAC_PI_2, epsilon = 1e-12);
        assert!((inner.center.as_vector() + u.as_vector()).norm() < 1e-9);
    }

    #[test]
    fn contains_examples() {
        let k = octant(2).unwrap();
        assert!(k.contains(&uv(&[1., 1., 1.])));
        assert!(!k.contains(&UnitVector::axis(3, 0).antipode()));
        let h = hemisphere(UnitVector::axis(3, 2)).unwrap();
        assert!(h.contains(&UnitVector::axis(3, 0)));
    }

    #[test]
    fn hyperplane_examples() {
        let k = octant(2).unwrap();
        assert!(!k.hyperplane_meets(&uv(&[1., 1., 1.])));
        assert!(k.hyperplane_meets(&UnitVector::axis(3, 0)));
    }

    #[test]
    fn polar_examples() {
        let u = UnitVector::axis(3, 0);
        let p = polar(&hemisphere(u.clone()).unwrap());
        assert_eq!(p.status(), BodyStatus::Degenerate);
        assert_eq!(p.v_generators(), std::slice::from_ref(&u));
        assert!(p.contains(&u));

        let neg: Vec<_> = (0..3).map(|k| UnitVector::axis(3, k).antipode()).collect();
        let po = polar(&octant(2).unwrap());
        assert!(same_set(po.v_generators(), &neg));
        assert!(po.is_body());
    }

    #[test]
    fn lune_polar_is_arc() {
        let alpha = PI / 3.0;
        let p = Vector::from_column_slice(&[1., 0., 0.]);
        let q = Vector::from_column_slice(&[0., 1., 0.]);
        let ridge = vec![Vector::from_column_slice(&[0., 0., 1.])];
        let (lune, body) = make_lune_in_frame(&ridge, (&p, &q), 0.2, 0.2 + alpha).unwrap();
        assert_abs_diff_eq!(lune.angle, alpha, epsilon = 1e-15);
        let pol = polar(&body);
        assert_eq!(pol.status(), BodyStatus::Degenerate);
        let g = pol.v_generators();
        assert_eq!(g.len(), 2);
        let arc = angle_between(g[0].as_slice(), g[1].as_slice());
        assert_abs_diff_eq!(arc, PI - alpha, epsilon = 1e-12);
        // generators of the lune: two arc endpoints plus ± ridge
        assert_eq!(body.v_generators().len(), 4);
    }

    #[test]
    fn lune_examples() {
        let u = UnitVector::axis(3, 0);
        let (l, b) = make_lune(2, u.clone(), u.clone()).unwrap();
        assert_abs_diff_eq!(l.angle, PI, epsilon = 1e-15);
        assert_abs_diff_eq!(inradius(&b).unwrap().radius, FRAC_PI_2, epsilon = 1e-12);
        assert_eq!(l.ridge_basis.len(), 1);

        let (l, b) = make_lune(2, u.clone(), UnitVector::axis(3, 1)).unwrap();
        assert_abs_diff_eq!(l.angle, FRAC_PI_2, epsilon = 1e-15);
        assert_abs_diff_eq!(inradius(&b).unwrap().radius, PI / 4.0, epsilon = 1e-12);

        assert_eq!(make_lune(2, u.clone(), u.antipode()).unwrap_err(), GeometryError::AntipodalNormals);
    }

    #[test]
    fn lune_inradius_is_half_angle() {
        for alpha in [0.1, 0.9, 1.7, 2.9, PI] {
            let u1 = UnitVector::from_slice(&[-(alpha / 2.0).cos(), -(alpha / 2.0).sin(), 0.0]).unwrap();
            let u2 = UnitVector::from_slice(&[(alpha / 2.0).cos(), -(alpha / 2.0).sin(), 0.0]).unwrap();
            let (l, b) = make_lune(2, u1, u2).unwrap();
            assert_abs_diff_eq!(l.angle, alpha, epsilon = 1e-12);
            assert_abs_diff_eq!(inradius(&b).unwrap().radius, alpha / 2.0, epsilon = 1e-9);
            let outer = circumradius(&b);
            assert!(outer.hemisphere);
            assert_eq!(outer.radius, FRAC_PI_2);
        }
    }

    #[test]
    fn octant_radii() {
        let k = octant(2).unwrap();
        let m = metrics(&k).unwrap();
        assert_abs_diff_eq!(m.inradius, (1.0 / 3f64.sqrt()).asin(), epsilon = 1e-12);
        assert_abs_diff_eq!(m.circumradius, (1.0 / 3f64.sqrt()).acos(), epsilon = 1e-12);
        let c = m.circumcenter.unwrap();
        assert!((c.as_vector() - uv(&[1., 1., 1.]).as_vector()).norm() < 1e-12);
        assert!(!m.hemisphere_flag);
    }

    #[test]
    fn intersect_examples() {
        let c = UnitVector::axis(3, 2);
        let cap = SphericalCap::hemisphere(c.clone());
        let h = hemisphere(c.antipode()).unwrap();
        let same = intersect_with_hemisphere(&h, &cap).unwrap();
        assert!(same.is_body());
        assert_abs_diff_eq!(inradius(&same).unwrap().radius, FRAC_PI_2, epsilon = 1e-12);

        let opposite = hemisphere(c.clone()).unwrap();
        let slice = intersect_with_hemisphere(&opposite, &cap).unwrap();
        assert_eq!(slice.status(), BodyStatus::Degenerate);

        let o = octant(2).unwrap();
        let cut = intersect_with_hemisphere(&o, &cap).unwrap();
        assert_abs_diff_eq!(inradius(&cut).unwrap().radius, inradius(&o).unwrap().radius, epsilon = 1e-12);

        let bad = SphericalCap::new(c, 1.0).unwrap();
        assert!(intersect_with_hemisphere(&o, &bad).is_err());
    }

    #[test]
    fn bipolar_keeps_normals() {
        let k = make_body(
            3,
            None,
            Some(vec![
                uv(&[1., 0.1, 0., 0.2]),
                uv(&[0., 1., 0.3, 0.1]),
                uv(&[0.2, 0., 1., 0.]),
                uv(&[0.1, 0.1, 0.1, 1.]),
                uv(&[0.5, 0.5, 0.5, 0.5]),
            ]),
        )
        .unwrap();
        let pp = polar(&polar(&k));
        assert!(same_set(pp.h_normals(), k.h_normals()));
    }

    #[test]
    fn convert_rep_is_idempotent() {
        let k = octant(3).unwrap();
        let again = convert_rep(&k).unwrap();
        assert!(same_set(again.v_generators(), k.v_generators()));
    }
}
