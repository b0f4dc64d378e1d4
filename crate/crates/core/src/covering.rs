//! Covers of a spherical cap by convex bodies: lune fans with a common ridge, the
//! sampled covering check, and the covering bound `Σ r(K_i) ≥ r(B)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::body::{inradius, intersect_with_hemisphere, make_lune_in_frame, ConvexBody, Lune};
use crate::error::{GeometryError, Result};
use crate::report::{Claim, Detail, InputDigest, VerificationReport};
use crate::rng::{run_batches, StreamSeed};
use crate::sphere::{fill_uniform_sphere, reduce, SphericalCap, UnitVector};
use crate::{check_dim, Vector};

/// Tolerance of the covering bound.
pub const BOUND_TOL: f64 = 1e-7;
/// Agreement required between the direct and antipodal routes.
pub const ROUTE_TOL: f64 = 1e-9;
/// Slack allowed on the fan wrap `θ_m - θ_0 = 2π` and on gaps of exactly π.
pub const ANGLE_TOL: f64 = 1e-12;
/// Uncovered witnesses kept in a report.
pub const MAX_WITNESSES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    LuneFan,
    PerturbedFan,
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoveringInstance {
    pub ball: SphericalCap,
    pub bodies: Vec<ConvexBody>,
    /// Exact dihedral angle for bodies that are lunes.
    pub lune_angles: Vec<Option<f64>>,
    pub construction: Construction,
}

impl CoveringInstance {
    pub fn new(ball: SphericalCap, bodies: Vec<ConvexBody>, construction: Construction) -> Result<Self> {
        let k = bodies.len();
        Self::with_lune_angles(ball, bodies, vec![None; k], construction)
    }

    pub fn with_lune_angles(
        ball: SphericalCap,
        bodies: Vec<ConvexBody>,
        lune_angles: Vec<Option<f64>>,
        construction: Construction,
    ) -> Result<Self> {
        if ball.radius < FRAC_PI_2 - ANGLE_TOL || ball.radius > PI {
            return Err(GeometryError::invalid(format!(
                "covered cap must have radius in [pi/2, pi], got {}",
                ball.radius
            )));
        }
        if bodies.is_empty() {
            return Err(GeometryError::invalid("a cover needs at least one body"));
        }
        if lune_angles.len() != bodies.len() {
            return Err(GeometryError::invalid("one lune angle entry per body is required"));
        }
        let n = ball.dim();
        for b in &bodies {
            if b.dim() != n {
                return Err(GeometryError::DimensionMismatch {
                    expected: n,
                    found: b.dim(),
                });
            }
            if !b.is_body() {
                return Err(GeometryError::NotABody);
            }
        }
        Ok(CoveringInstance {
            ball,
            bodies,
            lune_angles,
            construction,
        })
    }

    pub fn dim(&self) -> usize {
        self.ball.dim()
    }

    /// Same bodies, different cap.
    pub fn with_ball(&self, ball: SphericalCap) -> Result<Self> {
        Self::with_lune_angles(ball, self.bodies.clone(), self.lune_angles.clone(), self.construction)
    }

    fn covered(&self, x: &[f64]) -> bool {
        self.bodies.iter().any(|b| b.contains_slice(x))
    }

    fn digest(&self, tag: &str) -> InputDigest {
        let mut d = InputDigest::new(tag)
            .vectors([self.ball.center.as_slice()])
            .reals(&[self.ball.radius]);
        for (b, a) in self.bodies.iter().zip(&self.lune_angles) {
            d = d
                .count(b.h_normals().len() as u64)
                .vectors(b.h_normals().iter().map(|u| u.as_slice()))
                .reals(&[a.unwrap_or(f64::NAN)]);
        }
        d
    }
}

/// `m` lunes sharing the ridge `L`, the `i`-th spanning the angles
/// `[θ_{i-1} - δ, θ_i + δ]` of the plane `L^⊥`.
#[derive(Clone, Debug, PartialEq)]
pub struct LuneFan {
    ridge_basis: Vec<Vector>,
    plane_basis: (Vector, Vector),
    boundary_angles: Vec<f64>,
    widening: f64,
}

impl LuneFan {
    pub fn new(ridge_basis: Vec<Vector>, plane_basis: (Vector, Vector), boundary_angles: Vec<f64>) -> Result<Self> {
        let ambient = plane_basis.0.len();
        let n = ambient.saturating_sub(1);
        check_dim(n)?;
        if ridge_basis.len() != n - 1 {
            return Err(GeometryError::invalid(format!(
                "ridge needs {} basis vectors, got {}",
                n - 1,
                ridge_basis.len()
            )));
        }
        let mut frame: Vec<Vector> = Vec::new();
        for v in ridge_basis.iter().chain([&plane_basis.0, &plane_basis.1]) {
            if v.len() != ambient {
                return Err(GeometryError::DimensionMismatch {
                    expected: ambient,
                    found: v.len(),
                });
            }
            if (v.norm() - 1.0).abs() > 1e-12 || frame.iter().any(|w| w.dot(v).abs() > 1e-12) {
                return Err(GeometryError::invalid("fan frame is not orthonormal"));
            }
            frame.push(v.clone());
        }
        if boundary_angles.len() < 3 {
            return Err(GeometryError::invalid("a fan needs at least two lunes"));
        }
        for w in boundary_angles.windows(2) {
            let gap = w[1] - w[0];
            if !(gap > 0.0) {
                return Err(GeometryError::invalid(format!(
                    "boundary angles must increase strictly ({} then {})",
                    w[0], w[1]
                )));
            }
            if gap > PI + ANGLE_TOL {
                return Err(GeometryError::invalid(format!(
                    "gap {gap} exceeds pi; that lune is not in a hemisphere"
                )));
            }
        }
        let span = boundary_angles[boundary_angles.len() - 1] - boundary_angles[0];
        if (span - TAU).abs() > ANGLE_TOL {
            return Err(GeometryError::invalid(format!(
                "boundary angles span {span}, not 2pi"
            )));
        }
        Ok(LuneFan {
            ridge_basis,
            plane_basis,
            boundary_angles,
            widening: 0.0,
        })
    }

    /// Fan from the gap list, starting at `start`, in the coordinate frame
    /// (plane `e_0, e_1`, ridge `e_2, …, e_n`).
    pub fn from_gaps(n: usize, start: f64, gaps: &[f64]) -> Result<Self> {
        let mut angles = vec![start];
        for g in gaps {
            angles.push(angles[angles.len() - 1] + g);
        }
        let (ridge, plane) = standard_frame(n)?;
        Self::new(ridge, plane, angles)
    }

    /// `m` equal gaps in the coordinate frame.
    pub fn equal(n: usize, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(GeometryError::invalid("a fan needs at least two lunes"));
        }
        let angles = (0..=m).map(|i| TAU * i as f64 / m as f64).collect();
        let (ridge, plane) = standard_frame(n)?;
        Self::new(ridge, plane, angles)
    }

    /// The same fan with each lune extended by `delta` on both sides.
    pub fn widened(&self, delta: f64) -> Result<Self> {
        if !(delta >= 0.0) {
            return Err(GeometryError::invalid(format!("widening must be non-negative, got {delta}")));
        }
        let total = self.widening + delta;
        if let Some(g) = self.gaps().into_iter().find(|g| g + 2.0 * total > PI + ANGLE_TOL) {
            return Err(GeometryError::invalid(format!(
                "widened lune angle {} exceeds pi",
                g + 2.0 * total
            )));
        }
        Ok(LuneFan {
            widening: total,
            ..self.clone()
        })
    }

    pub fn dim(&self) -> usize {
        self.plane_basis.0.len() - 1
    }

    pub fn len(&self) -> usize {
        self.boundary_angles.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn boundary_angles(&self) -> &[f64] {
        &self.boundary_angles
    }

    pub fn ridge_basis(&self) -> &[Vector] {
        &self.ridge_basis
    }

    pub fn plane_basis(&self) -> (&Vector, &Vector) {
        (&self.plane_basis.0, &self.plane_basis.1)
    }

    pub fn widening(&self) -> f64 {
        self.widening
    }

    pub fn gaps(&self) -> Vec<f64> {
        self.boundary_angles.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Angular interval of each lune in the plane `L^⊥`.
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        let d = self.widening;
        self.boundary_angles.windows(2).map(|w| (w[0] - d, w[1] + d)).collect()
    }

    /// Exact dihedral angle of each lune.
    pub fn angles(&self) -> Vec<f64> {
        self.gaps().into_iter().map(|g| g + 2.0 * self.widening).collect()
    }

    /// `Σ r_i = π + m δ` in angle arithmetic.
    pub fn inradius_sum(&self) -> f64 {
        let span = self.boundary_angles[self.len()] - self.boundary_angles[0];
        span / 2.0 + self.len() as f64 * self.widening
    }

    pub fn lunes(&self) -> Result<Vec<(Lune, ConvexBody)>> {
        let plane = (&self.plane_basis.0, &self.plane_basis.1);
        self.intervals()
            .into_iter()
            .map(|(a, b)| make_lune_in_frame(&self.ridge_basis, plane, a, b))
            .collect()
    }

    /// Point of the plane `L^⊥` at angle `psi`; its hemisphere has the ridge on its boundary.
    pub fn plane_direction(&self, psi: f64) -> Result<UnitVector> {
        UnitVector::normalize(&self.plane_basis.0 * psi.cos() + &self.plane_basis.1 * psi.sin())
    }

    /// `Σ r(K_i ∩ B)` for the hemisphere `B` centered at [`plane_direction`](Self::plane_direction)`(psi)`:
    /// half the total length of the lune intervals clipped to `[ψ - π/2, ψ + π/2]`.
    pub fn hemisphere_inradius_sum(&self, psi: f64) -> f64 {
        self.intervals()
            .into_iter()
            .map(|(a, b)| 0.5 * circular_overlap((a, b), (psi - FRAC_PI_2, psi + FRAC_PI_2)))
            .sum()
    }

    /// Instance covering the cap `ball` (the whole sphere when `None`).
    pub fn instance(&self, ball: Option<SphericalCap>) -> Result<CoveringInstance> {
        let bodies: Vec<ConvexBody> = self.lunes()?.into_iter().map(|(_, b)| b).collect();
        let ball = match ball {
            Some(b) => b,
            None => SphericalCap::new(self.plane_direction(0.0)?, PI)?,
        };
        let construction = if self.widening > 0.0 {
            Construction::PerturbedFan
        } else {
            Construction::LuneFan
        };
        CoveringInstance::with_lune_angles(ball, bodies, self.angles().into_iter().map(Some).collect(), construction)
    }
}

/// Plane `(e_0, e_1)` and ridge `(e_2, …, e_n)`.
pub fn standard_frame(n: usize) -> Result<(Vec<Vector>, (Vector, Vector))> {
    check_dim(n)?;
    let e = |k: usize| UnitVector::axis(n + 1, k).into_vector();
    Ok(((2..=n).map(e).collect(), (e(0), e(1))))
}

/// Uniformly rotated frame from Gram–Schmidt on Gaussian vectors.
pub fn random_frame(n: usize, rng: &mut ChaCha8Rng) -> Result<(Vec<Vector>, (Vector, Vector))> {
    check_dim(n)?;
    let mut basis: Vec<Vector> = Vec::new();
    let mut buf = vec![0.0; n + 1];
    while basis.len() < n + 1 {
        fill_uniform_sphere(rng, &mut buf);
        if let Some(b) = reduce(Vector::from_column_slice(&buf), &basis) {
            basis.push(b);
        }
    }
    let p = basis.remove(0);
    let q = basis.remove(0);
    Ok((basis, (p, q)))
}

/// Random fan of `m` lunes, every gap at most `max_gap`, in a random frame.
pub fn random_lune_fan(n: usize, m: usize, max_gap: f64, rng: &mut ChaCha8Rng) -> Result<LuneFan> {
    if m < 2 || max_gap * m as f64 <= TAU || max_gap > PI {
        return Err(GeometryError::invalid(format!(
            "cannot split 2pi into {m} gaps of at most {max_gap}"
        )));
    }
    let (ridge, plane) = random_frame(n, rng)?;
    let start = rng.random_range(0.0..TAU);
    for _ in 0..10_000 {
        let mut cuts: Vec<f64> = (0..m - 1).map(|_| rng.random_range(0.0..TAU)).collect();
        cuts.push(0.0);
        cuts.push(TAU);
        cuts.sort_by(f64::total_cmp);
        if cuts.windows(2).all(|w| w[1] - w[0] > 1e-3 && w[1] - w[0] <= max_gap) {
            let mut angles: Vec<f64> = cuts.iter().map(|c| start + c).collect();
            angles[m] = angles[0] + TAU;
            return LuneFan::new(ridge, plane, angles);
        }
    }
    Err(GeometryError::invalid("could not draw admissible fan gaps"))
}

/// Length of the intersection of two arcs of length at most 2π, given as angle intervals.
pub fn circular_overlap(a: (f64, f64), b: (f64, f64)) -> f64 {
    // shift b so that its start lies in [a.0, a.0 + 2π)
    let shift = ((b.0 - a.0) / TAU).floor() * TAU;
    let (b0, b1) = (b.0 - shift, b.1 - shift);
    let direct = (a.1.min(b1) - a.0.max(b0)).max(0.0);
    let wrapped = (a.1.min(b1 - TAU) - a.0.max(b0 - TAU)).max(0.0);
    direct + wrapped
}

/// Deterministic cover test for arcs of the circle: `Ok(())` when their union is the whole
/// circle up to gaps of [`ANGLE_TOL`], otherwise the first uncovered arc, as an interval
/// starting in `[0, 2π)`.
pub fn arcs_cover_circle(arcs: &[(f64, f64)]) -> std::result::Result<(), (f64, f64)> {
    let mut pieces: Vec<(f64, f64)> = Vec::new();
    for &(a, b) in arcs {
        if b - a >= TAU {
            return Ok(());
        }
        let a0 = a.rem_euclid(TAU);
        let b0 = a0 + (b - a);
        pieces.push((a0, b0.min(TAU)));
        if b0 > TAU {
            pieces.push((0.0, b0 - TAU));
        }
    }
    pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut reach = 0.0;
    for (a, b) in pieces {
        if a > reach + ANGLE_TOL {
            return Err((reach, a));
        }
        reach = f64::max(reach, b);
    }
    if reach < TAU - ANGLE_TOL {
        Err((reach, TAU))
    } else {
        Ok(())
    }
}

/// Samples uniform points of `B` and reports those outside every body.
pub fn check_covering(inst: &CoveringInstance, samples: u64, seed: StreamSeed) -> VerificationReport {
    let (uncovered, witnesses) = uncovered_points(inst.dim(), samples, seed, |x| {
        inst.ball.contains(x, 0.0)
    }, |x| inst.covered(x));
    let digest = inst.digest("covering").count(samples).count(seed.seed).finish();
    VerificationReport::new(
        Claim::Covering,
        crate::report::Term::Exact { value: uncovered as f64 },
        crate::report::Term::Exact { value: 0.0 },
        -(uncovered as f64),
        0.0,
        "every sample of B lies in some body (membership tolerance 1e-12)",
    )
    .with_sampling(seed.seed, samples)
    .with_digest(digest)
    .with_detail("uncovered", Detail::Count(uncovered))
    .with_detail("witnesses", Detail::Points(witnesses))
}

/// Draws `samples` points uniformly from the region `domain` by rejection from the
/// sphere, counting those failing `covered` and keeping up to [`MAX_WITNESSES`].
fn uncovered_points<D, C>(n: usize, samples: u64, seed: StreamSeed, domain: D, covered: C) -> (u64, Vec<Vec<f64>>)
where
    D: Fn(&[f64]) -> bool + Sync,
    C: Fn(&[f64]) -> bool + Sync,
{
    let parts = run_batches(seed, samples, |rng, len| {
        let mut x = vec![0.0; n + 1];
        let mut bad = 0u64;
        let mut wit = Vec::new();
        let mut drawn = 0;
        while drawn < len {
            fill_uniform_sphere(rng, &mut x);
            if !domain(&x) {
                continue;
            }
            drawn += 1;
            if !covered(&x) {
                bad += 1;
                if wit.len() < MAX_WITNESSES {
                    wit.push(x.clone());
                }
            }
        }
        (bad, wit)
    });
    let mut total = 0;
    let mut witnesses = Vec::new();
    for (bad, wit) in parts {
        total += bad;
        witnesses.extend(wit);
    }
    witnesses.truncate(MAX_WITNESSES);
    (total, witnesses)
}

/// `Σ r(K_i)`: exact half-angles for lunes, the inradius solver otherwise.
pub fn inradius_sum(inst: &CoveringInstance) -> Result<f64> {
    inst.bodies
        .iter()
        .zip(&inst.lune_angles)
        .map(|(b, a)| match a {
            Some(angle) => Ok(angle / 2.0),
            None => inradius(b).map(|ib| ib.radius),
        })
        .sum()
}

/// `Σ r(K_i ∩ B)` for a hemisphere `B`; pieces without interior count as 0.
pub fn hemisphere_inradius_sum(inst: &CoveringInstance) -> Result<f64> {
    let mut sum = 0.0;
    for b in &inst.bodies {
        match intersect_with_hemisphere(b, &inst.ball) {
            Ok(piece) if piece.is_body() => match inradius(&piece) {
                Ok(ib) => sum += ib.radius,
                Err(GeometryError::NotABody) => {}
                Err(e) => return Err(e),
            },
            Ok(_) | Err(GeometryError::Empty) | Err(GeometryError::NotABody) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(sum)
}

fn is_hemisphere(cap: &SphericalCap) -> bool {
    (cap.radius - FRAC_PI_2).abs() <= ANGLE_TOL
}

/// Checks `Σ r(K_i) ≥ r(B)` after certifying the cover by sampling; for a hemisphere
/// `B` also `Σ r(K_i ∩ B) ≥ r(B)`.
pub fn verify_thm1(inst: &CoveringInstance, samples: u64, seed: StreamSeed) -> Result<VerificationReport> {
    let cover = check_covering(inst, samples, seed.substream(0));
    if !cover.pass {
        let uncovered = match cover.details.get("uncovered") {
            Some(Detail::Count(k)) => *k,
            _ => 0,
        };
        return Err(GeometryError::NotACover(uncovered));
    }
    let sum = inradius_sum(inst)?;
    let r = inst.ball.radius;
    let digest = inst.digest("covering_bound").count(samples).count(seed.seed).finish();
    let mut report = VerificationReport::new(
        Claim::CoveringBound,
        sum,
        r,
        sum - r,
        BOUND_TOL,
        "sum of inradii >= r(B) - 1e-7",
    )
    .with_sampling(seed.seed, samples)
    .with_digest(digest)
    .with_detail("bodies", Detail::Count(inst.bodies.len() as u64))
    .with_detail(
        "exact_lunes",
        Detail::Count(inst.lune_angles.iter().filter(|a| a.is_some()).count() as u64),
    )
    .with_detail("cover_uncovered", Detail::Count(0));
    if is_hemisphere(&inst.ball) {
        let strong = hemisphere_inradius_sum(inst)?;
        let strong_slack = strong - r;
        report = report
            .with_detail("hemisphere_sum", Detail::Real(strong))
            .with_detail("hemisphere_slack", Detail::Real(strong_slack));
        if strong_slack < -BOUND_TOL {
            report = report.fail_because("sum of r(K_i cap B) is below r(B)");
        }
    }
    Ok(report)
}

/// Adds the cap `B'` of radius `π - r(B)` about the antipode of `B`'s center, checks by
/// sampling that `B'` and the bodies cover the sphere, and compares
/// `π - r(B) + Σ r(K_i) ≥ π` with the direct bound.
pub fn verify_antipodal_argument(inst: &CoveringInstance, samples: u64, seed: StreamSeed) -> Result<VerificationReport> {
    let r = inst.ball.radius;
    let sum = inradius_sum(inst)?;
    let digest = inst.digest("antipodal_reduction").count(samples).count(seed.seed).finish();
    if inst.ball.is_full_sphere() {
        return Ok(VerificationReport::new(
            Claim::AntipodalReduction,
            sum,
            PI,
            sum - PI,
            BOUND_TOL,
            "r(B) = pi: B' is a point; route skipped, direct bound reported",
        )
        .with_sampling(seed.seed, samples)
        .with_digest(digest)
        .with_detail("skipped", Detail::Flag(true)));
    }
    let b_prime = SphericalCap::new(inst.ball.center.antipode(), PI - r)?;
    let (uncovered, witnesses) = uncovered_points(
        inst.dim(),
        samples,
        seed.substream(1),
        |_| true,
        |x| b_prime.contains(x, crate::body::CONTAINS_TOL) || inst.covered(x),
    );
    let lhs = (PI - r) + sum;
    let reduced = lhs - PI;
    let direct = sum - r;
    let gap = (reduced - direct).abs();
    let mut report = VerificationReport::new(
        Claim::AntipodalReduction,
        lhs,
        PI,
        reduced,
        BOUND_TOL,
        "pi - r(B) + sum of inradii >= pi - 1e-7",
    )
    .with_sampling(seed.seed, samples)
    .with_digest(digest)
    .with_detail("skipped", Detail::Flag(false))
    .with_detail("b_prime_radius", Detail::Real(PI - r))
    .with_detail("direct_slack", Detail::Real(direct))
    .with_detail("route_gap", Detail::Real(gap))
    .with_detail("uncovered", Detail::Count(uncovered))
    .with_detail("witnesses", Detail::Points(witnesses));
    if uncovered > 0 {
        report = report.fail_because("B' and the bodies do not cover the sphere");
    }
    if gap > ROUTE_TOL {
        report = report.fail_because("direct and antipodal routes disagree");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn fan_examples() {
        let two = LuneFan::equal(2, 2).unwrap();
        assert_eq!(two.angles(), vec![PI, PI]);
        assert_eq!(two.inradius_sum(), PI);

        let four = LuneFan::equal(2, 4).unwrap();
        assert_abs_diff_eq!(four.inradius_sum(), PI, epsilon = 1e-12);

        let three = LuneFan::from_gaps(2, 0.0, &[PI, FRAC_PI_2, FRAC_PI_2]).unwrap();
        let r: Vec<f64> = three.angles().iter().map(|a| a / 2.0).collect();
        assert_eq!(r, vec![FRAC_PI_2, FRAC_PI_4, FRAC_PI_4]);
        assert_eq!(three.inradius_sum(), PI);
    }

    #[test]
    fn fan_validation() {
        assert!(LuneFan::from_gaps(2, 0.0, &[1.5 * PI, 0.5 * PI]).is_err());
        assert!(LuneFan::from_gaps(2, 0.0, &[PI, 0.9 * PI]).is_err());
        assert!(LuneFan::from_gaps(3, 0.0, &[PI, 0.0, PI]).is_err());
        assert!(LuneFan::from_gaps(2, 0.0, &[TAU]).is_err());
        assert!(LuneFan::equal(2, 2).unwrap().widened(0.01).is_err());
        let (ridge, (p, _)) = standard_frame(3).unwrap();
        assert!(LuneFan::new(ridge, (p.clone(), p), vec![0.0, PI, TAU]).is_err());
    }

    #[test]
    fn widened_sum() {
        let fan = LuneFan::equal(3, 5).unwrap().widened(0.01).unwrap();
        assert_abs_diff_eq!(fan.inradius_sum(), PI + 5.0 * 0.01, epsilon = 1e-12);
        let inst = fan.instance(None).unwrap();
        assert_eq!(inst.construction, Construction::PerturbedFan);
        assert_abs_diff_eq!(inradius_sum(&inst).unwrap(), PI + 0.05, epsilon = 1e-12);
    }

    #[test]
    fn solver_agrees_with_exact_angles() {
        let fan = LuneFan::from_gaps(2, 0.3, &[2.0, 2.5, TAU - 4.5]).unwrap().widened(0.02).unwrap();
        let lunes = fan.lunes().unwrap();
        for ((lune, body), a) in lunes.iter().zip(fan.angles()) {
            assert_abs_diff_eq!(lune.angle, a, epsilon = 1e-12);
            assert_abs_diff_eq!(inradius(body).unwrap().radius, a / 2.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn overlap_and_arc_cover() {
        assert_abs_diff_eq!(circular_overlap((0.0, 1.0), (0.5, 2.0)), 0.5);
        assert_abs_diff_eq!(circular_overlap((0.0, 1.0), (0.5 + TAU, 2.0 + TAU)), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(circular_overlap((5.0, 7.0), (0.0, 1.0)), 7.0 - TAU, epsilon = 1e-12);
        assert_abs_diff_eq!(circular_overlap((0.0, 1.0), (2.0, 3.0)), 0.0);

        let fan = LuneFan::equal(2, 4).unwrap();
        assert_eq!(arcs_cover_circle(&fan.intervals()), Ok(()));
        let mut arcs = fan.intervals();
        arcs.remove(1);
        let gap = arcs_cover_circle(&arcs).unwrap_err();
        assert_abs_diff_eq!(gap.0, FRAC_PI_2, epsilon = 1e-12);
        assert_abs_diff_eq!(gap.1, PI, epsilon = 1e-12);
    }

    #[test]
    fn fan_covers_and_deleted_fan_fails() {
        let fan = LuneFan::equal(2, 4).unwrap();
        let inst = fan.instance(None).unwrap();
        assert!(check_covering(&inst, 100_000, StreamSeed::new(1)).pass);

        let mut holed = inst.clone();
        holed.bodies.remove(0);
        holed.lune_angles.remove(0);
        let r = check_covering(&holed, 100_000, StreamSeed::new(1));
        assert!(!r.pass);
        let Detail::Points(w) = &r.details["witnesses"] else { panic!() };
        assert_eq!(w.len(), MAX_WITNESSES);
        // the deleted lune spans angles [0, π/2] of the (e_0, e_1) plane
        for x in w {
            assert!(x[0] >= -1e-12 && x[1] >= -1e-12);
        }
        assert!(matches!(
            verify_thm1(&holed, 100_000, StreamSeed::new(1)),
            Err(GeometryError::NotACover(k)) if k > 0
        ));
    }

    #[test]
    fn thm1_equality_and_widening() {
        let fan = LuneFan::equal(3, 3).unwrap();
        let r = verify_thm1(&fan.instance(None).unwrap(), 100_000, StreamSeed::new(2)).unwrap();
        assert!(r.pass);
        assert_abs_diff_eq!(r.slack, 0.0, epsilon = 1e-12);

        let wide = fan.widened(0.01).unwrap();
        let r = verify_thm1(&wide.instance(None).unwrap(), 100_000, StreamSeed::new(2)).unwrap();
        assert_abs_diff_eq!(r.slack, 0.03, epsilon = 1e-12);
    }

    #[test]
    fn hemisphere_strong_form() {
        let fan = LuneFan::from_gaps(2, 0.0, &[2.0, 2.0, TAU - 4.0]).unwrap().widened(0.05).unwrap();
        let psi = 0.7;
        let ball = SphericalCap::hemisphere(fan.plane_direction(psi).unwrap());
        let inst = fan.instance(Some(ball)).unwrap();
        let r = verify_thm1(&inst, 100_000, StreamSeed::new(3)).unwrap();
        assert!(r.pass);
        let Detail::Real(strong) = r.details["hemisphere_sum"] else { panic!() };
        assert_abs_diff_eq!(strong, fan.hemisphere_inradius_sum(psi), epsilon = 1e-7);
        // the widened arcs overlap the half-circle in total length π plus the overlaps inside it
        assert!(strong > FRAC_PI_2);
    }

    #[test]
    fn antipodal_routes() {
        let fan = LuneFan::equal(2, 4).unwrap().widened(0.02).unwrap();
        let ball = SphericalCap::new(fan.plane_direction(0.4).unwrap(), 0.75 * PI).unwrap();
        let inst = fan.instance(Some(ball)).unwrap();
        let r = verify_antipodal_argument(&inst, 100_000, StreamSeed::new(4)).unwrap();
        assert!(r.pass, "{r:?}");
        let direct = verify_thm1(&inst, 100_000, StreamSeed::new(4)).unwrap();
        assert!((r.slack - direct.slack).abs() <= ROUTE_TOL);

        let full = verify_antipodal_argument(&fan.instance(None).unwrap(), 1000, StreamSeed::new(4)).unwrap();
        assert_eq!(full.details["skipped"], Detail::Flag(true));
    }

    #[test]
    fn hemisphere_b_prime_is_complement() {
        let fan = LuneFan::equal(2, 2).unwrap();
        let ball = SphericalCap::hemisphere(fan.plane_direction(FRAC_PI_2).unwrap());
        let r = verify_antipodal_argument(&fan.instance(Some(ball)).unwrap(), 50_000, StreamSeed::new(5)).unwrap();
        assert!(r.pass);
        assert_eq!(r.details["b_prime_radius"], Detail::Real(FRAC_PI_2));
    }

    #[test]
    fn random_fans_are_valid() {
        let mut rng = StreamSeed::new(6).rng();
        for n in 2..=4 {
            for m in 3..8 {
                let fan = random_lune_fan(n, m, PI - 0.1, &mut rng).unwrap();
                assert_abs_diff_eq!(fan.inradius_sum(), PI, epsilon = 1e-12);
                fan.widened(0.05).unwrap();
            }
        }
    }

    #[test]
    fn instance_validation() {
        let fan = LuneFan::equal(2, 3).unwrap();
        let small = SphericalCap::new(fan.plane_direction(0.0).unwrap(), 1.0).unwrap();
        assert!(fan.instance(Some(small)).is_err());
    }
}
