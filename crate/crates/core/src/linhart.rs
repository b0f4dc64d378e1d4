//! Simplices inscribed in a ball, their spherical images (normal cones at vertices),
//! the hemisphere average `C(R, f)` of `g(φ) = F(R cos φ)`, and the search showing
//! that segments minimize `U_f` among sets with a prescribed circumball.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{GeometryError, Result};
use crate::gnomonic::{uf, EuclideanPolytope, UfMode};
use crate::minnorm::min_norm_point;
use crate::quadrature;
use crate::report::{combined_stderr, Claim, Detail, Estimate, InputDigest, Quantity, VerificationReport};
use crate::rng::{map_indexed, run_batches, Moments, StreamSeed};
use crate::seb::smallest_enclosing_ball;
use crate::sphere::{fill_uniform_sphere, reduce, sphere_area};
use crate::weight::WeightFunction;
use crate::{dot, Vector};

/// Normal-cone membership slack.
pub const CONE_TOL: f64 = 1e-12;
/// Allowed relative deviation of the enclosing ball from `(0, R)`.
pub const BALL_TOL: f64 = 1e-8;

/// A `k`-simplex in `E^n` with all vertices on the sphere of radius `R` about 0, whose
/// smallest enclosing ball is that ball.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexInBall {
    radius: f64,
    vertices: Vec<Vector>,
}

impl SimplexInBall {
    pub fn new(radius: f64, vertices: Vec<Vector>) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(GeometryError::invalid(format!("ball radius must be positive, got {radius}")));
        }
        if vertices.len() < 2 {
            return Err(GeometryError::invalid("a simplex needs at least two vertices"));
        }
        let n = vertices[0].len();
        let k = vertices.len() - 1;
        if k > n {
            return Err(GeometryError::invalid(format!("{k}-simplex does not fit in dimension {n}")));
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.len() != n {
                return Err(GeometryError::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
            if (v.norm() - radius).abs() > 1e-9 * radius.max(1.0) {
                return Err(GeometryError::invalid(format!(
                    "vertex {i} has norm {} but the ball radius is {radius}",
                    v.norm()
                )));
            }
        }
        let mut basis: Vec<Vector> = Vec::new();
        for v in &vertices[1..] {
            match reduce(v - &vertices[0], &basis) {
                Some(b) => basis.push(b),
                None => return Err(GeometryError::invalid("simplex vertices are affinely dependent")),
            }
        }
        let ball = smallest_enclosing_ball(&vertices)?;
        if ball.center.norm() > BALL_TOL * radius || (ball.radius - radius).abs() > BALL_TOL * radius {
            return Err(GeometryError::invalid(format!(
                "enclosing ball of the vertices is (|c| = {:e}, r = {}), not (0, {radius})",
                ball.center.norm(),
                ball.radius
            )));
        }
        Ok(SimplexInBall { radius, vertices })
    }

    /// Regular `k`-simplex (`k ≤ 3`, `k ≤ n`) centered at 0 in the first `k` coordinates.
    pub fn regular(n: usize, k: usize, radius: f64) -> Result<Self> {
        if k == 0 || k > n || k > 3 {
            return Err(GeometryError::invalid(format!("no regular {k}-simplex in dimension {n}")));
        }
        let embed = |xs: &[f64]| {
            let mut v = Vector::zeros(n);
            for (i, x) in xs.iter().enumerate() {
                v[i] = x * radius;
            }
            v
        };
        let vertices = match k {
            1 => vec![embed(&[1.0]), embed(&[-1.0])],
            2 => (0..3)
                .map(|i| {
                    let a = 2.0 * PI * i as f64 / 3.0;
                    embed(&[a.cos(), a.sin()])
                })
                .collect(),
            _ => {
                let s = 1.0 / 3f64.sqrt();
                vec![
                    embed(&[s, s, s]),
                    embed(&[s, -s, -s]),
                    embed(&[-s, s, -s]),
                    embed(&[-s, -s, s]),
                ]
            }
        };
        Self::new(radius, vertices)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    /// Simplex dimension `k`.
    pub fn order(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn polytope(&self) -> EuclideanPolytope {
        EuclideanPolytope::new(self.vertices.clone()).expect("simplex has vertices")
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j < self.vertices.len() {
            Ok(())
        } else {
            Err(GeometryError::invalid(format!(
                "vertex index {j} out of range (simplex has {} vertices)",
                self.vertices.len()
            )))
        }
    }

    fn in_cone(&self, j: usize, u: &[f64]) -> bool {
        let vj = self.vertices[j].as_slice();
        let base = dot(vj, u);
        self.vertices
            .iter()
            .enumerate()
            .all(|(i, vi)| i == j || dot(vi.as_slice(), u) - base <= CONE_TOL)
    }
}

/// Whether `u` lies in the normal cone `N(T, v_j)`: `⟨u, v_i - v_j⟩ ≤ 0` for all `i ≠ j`.
pub fn normal_cone_membership(s: &SimplexInBall, j: usize, u: &Vector) -> Result<bool> {
    s.check_index(j)?;
    if u.len() != s.dim() {
        return Err(GeometryError::DimensionMismatch {
            expected: s.dim(),
            found: u.len(),
        });
    }
    Ok(s.in_cone(j, u.as_slice()))
}

/// Random simplex in `𝒦(B)`: a uniformly chosen order `k`, a random `k`-dimensional
/// linear subspace, and `k + 1` points on its great sphere containing 0 in their hull.
pub fn random_simplex(n: usize, radius: f64, rng: &mut ChaCha8Rng) -> Result<SimplexInBall> {
    let k = rng.random_range(1..=n);
    random_simplex_of_order(n, k, radius, rng)
}

pub fn random_simplex_of_order(n: usize, k: usize, radius: f64, rng: &mut ChaCha8Rng) -> Result<SimplexInBall> {
    if k == 0 || k > n {
        return Err(GeometryError::invalid(format!("no {k}-simplex in dimension {n}")));
    }
    let mut frame: Vec<Vector> = Vec::new();
    let mut buf = vec![0.0; n];
    while frame.len() < k {
        fill_uniform_sphere(rng, &mut buf);
        if let Some(b) = reduce(Vector::from_column_slice(&buf), &frame) {
            frame.push(b);
        }
    }
    let point = |rng: &mut ChaCha8Rng| {
        let mut c = vec![0.0; k];
        fill_uniform_sphere(rng, &mut c);
        let mut v = Vector::zeros(n);
        for (b, x) in frame.iter().zip(&c) {
            v.axpy(x * radius, b, 1.0);
        }
        v
    };
    for _ in 0..100 {
        let vertices: Vec<Vector> = if k == 1 {
            let v = point(rng);
            vec![v.clone(), -v]
        } else {
            (0..=k).map(|_| point(rng)).collect()
        };
        // on the sphere the enclosing ball is B iff 0 lies in the hull; require a margin
        if min_norm_point(&vertices).norm() > 1e-12 * radius {
            continue;
        }
        if let Ok(s) = SimplexInBall::new(radius, vertices) {
            return Ok(s);
        }
    }
    Err(GeometryError::invalid("could not generate an inscribed simplex in 100 attempts"))
}

/// `g(φ) = F(R cos φ)`.
pub fn g(radius: f64, w: &WeightFunction, phi: f64) -> f64 {
    w.cumulative(radius * phi.cos())
}

/// `C(R, f)`: the average of `g` over a hemisphere `D_j` of `S^{n-1}`, reduced to
/// `∫_0^{π/2} g(φ) sin^{n-2}φ dφ / ∫_0^{π/2} sin^{n-2}φ dφ`.
pub fn constant_c(radius: f64, w: &WeightFunction, n: usize) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(GeometryError::invalid(format!("ball radius must be positive, got {radius}")));
    }
    if n < 2 {
        return Err(GeometryError::UnsupportedDimension(n));
    }
    let jac = |phi: f64| phi.sin().powi(n as i32 - 2);
    let num = quadrature::adaptive(|phi| g(radius, w, phi) * jac(phi), 0.0, FRAC_PI_2, 1e-13);
    let den = quadrature::adaptive(jac, 0.0, FRAC_PI_2, 1e-13);
    Ok(num / den)
}

/// `μ(S^{n-1}) C(R, f)`, the minimum of `U_f` over `𝒦(B)`.
pub fn uf_lower_bound(radius: f64, w: &WeightFunction, n: usize) -> Result<f64> {
    Ok(sphere_area(n - 1)? * constant_c(radius, w, n)?)
}

/// Sample `u` uniformly in `D_j` (reflecting uniform directions into the hemisphere)
/// and keep those in `S_j`. Returns the number of `D_j` draws and the moments of
/// `g(φ(u))` over the accepted ones.
fn sample_image(s: &SimplexInBall, j: usize, w: &WeightFunction, samples: u64, seed: StreamSeed) -> (u64, Moments) {
    let n = s.dim();
    let vj = s.vertices[j].as_slice();
    let parts = run_batches(seed, samples, |rng, len| {
        let mut m = Moments::default();
        let mut u = vec![0.0; n];
        for _ in 0..len {
            fill_uniform_sphere(rng, &mut u);
            if dot(vj, &u) < 0.0 {
                u.iter_mut().for_each(|x| *x = -*x);
            }
            if s.in_cone(j, &u) {
                // h(T, u) = <v_j, u> = R cos φ on S_j
                m.push(w.cumulative(dot(vj, &u)));
            }
        }
        m
    });
    (samples, Moments::merged(&parts))
}

/// `μ(S_j)` estimated by the fraction of `D_j` falling in the normal cone.
pub fn measure_sj(s: &SimplexInBall, j: usize, samples: u64, seed: StreamSeed) -> Result<Estimate> {
    s.check_index(j)?;
    let w = WeightFunction::Constant { value: 1.0 };
    let (total, m) = sample_image(s, j, &w, samples, seed);
    let half = 0.5 * sphere_area(s.dim() - 1)?;
    let (p, se) = crate::rng::binomial(m.count, total);
    Ok(Estimate {
        quantity: Quantity::MeasureSj,
        value: half * p,
        stderr: half * se,
        samples,
        seed: seed.seed,
    })
}

/// Number of uniform directions in `S_j` with `⟨u, v_j⟩ < 0`; zero when `S_j ⊆ D_j`.
pub fn image_outside_hemisphere(s: &SimplexInBall, j: usize, samples: u64, seed: StreamSeed) -> Result<u64> {
    s.check_index(j)?;
    let n = s.dim();
    let vj = s.vertices[j].as_slice();
    let counts = run_batches(seed, samples, |rng, len| {
        let mut u = vec![0.0; n];
        let mut bad = 0u64;
        for _ in 0..len {
            fill_uniform_sphere(rng, &mut u);
            if s.in_cone(j, &u) && dot(vj, &u) < -CONE_TOL {
                bad += 1;
            }
        }
        bad
    });
    Ok(counts.into_iter().sum())
}

/// Compares the `S_j`-average of `g` with `C(R, f)`; passes when
/// `lhs + 3·stderr ≥ rhs`. `equality_slack = lhs - rhs` is ~0 exactly when `S_j = D_j`.
pub fn check_7_1(
    s: &SimplexInBall,
    j: usize,
    w: &WeightFunction,
    samples: u64,
    seed: StreamSeed,
) -> Result<VerificationReport> {
    s.check_index(j)?;
    let n = s.dim();
    let (total, m) = sample_image(s, j, w, samples, seed);
    if m.count == 0 {
        return Err(GeometryError::invalid(format!(
            "spherical image of vertex {j} has estimated measure 0"
        )));
    }
    let half = 0.5 * sphere_area(n - 1)?;
    let (p, p_se) = crate::rng::binomial(m.count, total);
    let lhs = Estimate {
        quantity: Quantity::SjAverage,
        value: m.mean(),
        stderr: m.stderr(),
        samples,
        seed: seed.seed,
    };
    let rhs = constant_c(s.radius, w, n)?;
    let slack = lhs.value - rhs;
    let tol = 3.0 * lhs.stderr;
    let digest = InputDigest::new("normal_cone_average")
        .reals(&[s.radius])
        .vectors(s.vertices.iter().map(|v| v.as_slice()))
        .count(j as u64)
        .count(samples)
        .count(seed.seed)
        .finish();
    Ok(VerificationReport::new(
        Claim::NormalConeAverage,
        lhs,
        rhs,
        slack,
        tol,
        "S_j-average of g + 3 * stderr >= C(R, f)",
    )
    .with_sampling(seed.seed, samples)
    .with_digest(digest)
    .with_detail("vertex", Detail::Count(j as u64))
    .with_detail("weight", Detail::Text(w.label()))
    .with_detail("measure_Sj", Detail::Real(half * p))
    .with_detail("measure_Sj_stderr", Detail::Real(half * p_se))
    .with_detail("measure_Dj", Detail::Real(half))
    .with_detail("equality_slack", Detail::Real(slack))
    .with_detail("equality_within_3sigma", Detail::Flag(slack.abs() <= tol)))
}

/// `Σ_j ∫_{S_j} F(h(T, u)) μ(du)`, each term sampled over `D_j` on its own substream.
pub fn uf_by_spherical_images(s: &SimplexInBall, w: &WeightFunction, samples: u64, seed: StreamSeed) -> Result<Estimate> {
    let half = 0.5 * sphere_area(s.dim() - 1)?;
    let mut value = 0.0;
    let mut var = 0.0;
    for j in 0..s.vertices.len() {
        let (total, m) = sample_image(s, j, w, samples, seed.substream(j as u64));
        // mean of 1{u ∈ S_j} g over D_j, with the zeros included
        let n = total as f64;
        let mean = m.sum / n;
        let var_j = if total > 1 { ((m.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0) / n } else { 0.0 };
        value += half * mean;
        var += half * half * var_j;
    }
    Ok(Estimate {
        quantity: Quantity::Uf,
        value,
        stderr: var.sqrt(),
        samples,
        seed: seed.seed,
    })
}

/// A compact convex set whose smallest enclosing ball is centered at 0 with radius `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct KbInstance {
    pub radius: f64,
    pub body: EuclideanPolytope,
}

impl KbInstance {
    pub fn new(radius: f64, points: Vec<Vector>) -> Result<Self> {
        let ball = smallest_enclosing_ball(&points)?;
        if ball.center.norm() > BALL_TOL * radius || (ball.radius - radius).abs() > BALL_TOL * radius {
            return Err(GeometryError::invalid(format!(
                "enclosing ball is (|c| = {:e}, r = {}), not (0, {radius})",
                ball.center.norm(),
                ball.radius
            )));
        }
        Ok(KbInstance {
            radius,
            body: EuclideanPolytope::new(points)?,
        })
    }
}

/// Random member of `𝒦(B)`. Half of the draws contain an antipodal diameter pair;
/// the rest are boundary point clouds redrawn until their enclosing ball is `B`.
/// Both receive a few interior points.
pub fn random_kb_instance(n: usize, radius: f64, rng: &mut ChaCha8Rng) -> Result<KbInstance> {
    let mut unit = vec![0.0; n];
    let mut boundary = |rng: &mut ChaCha8Rng| {
        fill_uniform_sphere(rng, &mut unit);
        Vector::from_column_slice(&unit) * radius
    };
    for _ in 0..100 {
        let mut pts: Vec<Vector> = Vec::new();
        if rng.random_bool(0.5) {
            let v = boundary(rng);
            pts.push(-&v);
            pts.push(v);
            for _ in 0..rng.random_range(0..=2) {
                pts.push(boundary(rng));
            }
        } else {
            for _ in 0..rng.random_range(n + 1..=n + 3) {
                pts.push(boundary(rng));
            }
        }
        for _ in 0..rng.random_range(0..=3) {
            let scale = rng.random::<f64>().powf(1.0 / n as f64) * 0.999;
            pts.push(boundary(rng) * scale);
        }
        if let Ok(inst) = KbInstance::new(radius, pts) {
            return Ok(inst);
        }
    }
    Err(GeometryError::invalid("could not generate a set with circumball B in 100 attempts"))
}

/// Samples `trials` random members of `𝒦(B)` and checks that none has `U_f` below the
/// diameter segment, and that the segment attains `μ(S^{n-1}) C(R, f)`.
pub fn min_uf_search(
    n: usize,
    radius: f64,
    w: &WeightFunction,
    trials: u64,
    samples: u64,
    seed: StreamSeed,
) -> Result<VerificationReport> {
    if trials == 0 {
        return Err(GeometryError::invalid("min_uf_search needs at least one trial"));
    }
    crate::check_dim(n).or_else(|e| if n == 2 { Ok(()) } else { Err(e) })?;
    let mut axis = Vector::zeros(n);
    axis[0] = 1.0;
    let segment = EuclideanPolytope::segment(radius, &axis)?;
    let seg = uf(
        &segment,
        w,
        UfMode::Auto {
            samples,
            seed: seed.substream(0),
        },
    )?;
    let bound = uf_lower_bound(radius, w, n)?;

    let results = map_indexed(trials, |i| -> Result<(KbInstance, Estimate)> {
        let trial = seed.substream(i + 1);
        let inst = random_kb_instance(n, radius, &mut trial.rng())?;
        let value = uf(
            &inst.body,
            w,
            UfMode::Auto {
                samples,
                seed: trial.substream(1),
            },
        )?;
        Ok((inst, value))
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;

    const QUAD_TOL: f64 = 1e-9;
    let mut worst = (0usize, f64::INFINITY);
    let mut below = 0u64;
    let mut max_se = 0.0f64;
    for (i, (_, value)) in results.iter().enumerate() {
        let gap = value.value - seg.value;
        let se = combined_stderr(&[value.stderr, seg.stderr]);
        max_se = max_se.max(se);
        if gap < -(3.0 * se + QUAD_TOL) {
            below += 1;
        }
        if gap < worst.1 {
            worst = (i, gap);
        }
    }
    let bound_gap = seg.value - bound;
    let bound_ok = bound_gap.abs() <= 3.0 * seg.stderr + 1e-8;
    let min_value = results[worst.0].1.clone();
    let digest = InputDigest::new("segment_minimality")
        .count(n as u64)
        .reals(&[radius])
        .count(trials)
        .count(samples)
        .count(seed.seed)
        .finish();
    let mut report = VerificationReport::new(
        Claim::SegmentMinimality,
        min_value,
        seg.clone(),
        worst.1,
        3.0 * max_se + QUAD_TOL,
        "min over instances of U_f >= U_f(diameter segment) - 3 * combined stderr - 1e-9",
    )
    .with_sampling(seed.seed, samples)
    .with_digest(digest)
    .with_detail("trials", Detail::Count(trials))
    .with_detail("instances_below", Detail::Count(below))
    .with_detail("worst_instance", Detail::Count(worst.0 as u64))
    .with_detail("segment_value", Detail::Real(seg.value))
    .with_detail("lower_bound", Detail::Real(bound))
    .with_detail("segment_bound_gap", Detail::Real(bound_gap))
    .with_detail("weight", Detail::Text(w.label()));
    if below > 0 {
        report = report.fail_because("an instance fell below the segment value");
    }
    if !bound_ok {
        report = report.fail_because("segment value does not match mu(S^{n-1}) C(R, f)");
    }
    Ok(report)
}
