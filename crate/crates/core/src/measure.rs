//! Monte Carlo estimators for spherical volume and spherical mean width, and the
//! checks built on them.

use std::f64::consts::PI;

use crate::body::{inradius, polar, ConvexBody};
use crate::error::{GeometryError, Result};
use crate::report::{combined_stderr, Claim, Detail, Estimate, InputDigest, Quantity, VerificationReport};
use crate::rng::{binomial, run_batches, StreamSeed};
use crate::sphere::{fill_uniform_sphere, sphere_area};

/// Default sample count for sphere dimension `n`.
pub fn default_samples(n: usize) -> u64 {
    if n >= 4 {
        4_000_000
    } else {
        1_000_000
    }
}

/// Count uniform points of `S^n` satisfying `pred`.
pub fn count_hits<P>(n: usize, samples: u64, seed: StreamSeed, pred: P) -> u64
where
    P: Fn(&[f64]) -> bool + Sync,
{
    run_batches(seed, samples, |rng, len| {
        let mut buf = vec![0.0; n + 1];
        let mut hits = 0u64;
        for _ in 0..len {
            fill_uniform_sphere(rng, &mut buf);
            if pred(&buf) {
                hits += 1;
            }
        }
        hits
    })
    .into_iter()
    .sum()
}

fn indicator_estimate(quantity: Quantity, total: f64, hits: u64, samples: u64, seed: StreamSeed) -> Estimate {
    let (p, se) = binomial(hits, samples);
    Estimate {
        quantity,
        value: total * p,
        stderr: total * se,
        samples,
        seed: seed.seed,
    }
}

/// `σ(K) ≈ σ_n · (hit fraction)`. Lower-dimensional sets have measure exactly 0.
pub fn volume_mc(body: &ConvexBody, samples: u64, seed: StreamSeed) -> Result<Estimate> {
    let n = body.dim();
    if !body.is_body() {
        return Ok(Estimate::exact(Quantity::Volume, 0.0));
    }
    let hits = count_hits(n, samples, seed, |x| body.contains_slice(x));
    Ok(indicator_estimate(Quantity::Volume, sphere_area(n)?, hits, samples, seed))
}

/// `U(K) = ½ σ({u : u^⊥ ∩ K ≠ ∅})`.
pub fn mean_width_mc(body: &ConvexBody, samples: u64, seed: StreamSeed) -> Result<Estimate> {
    let n = body.dim();
    let hits = count_hits(n, samples, seed, |u| body.hyperplane_meets_slice(u));
    Ok(indicator_estimate(Quantity::MeanWidth, 0.5 * sphere_area(n)?, hits, samples, seed))
}

/// Measure `(σ_n / π) r` of a lune with inradius `r`.
pub fn lune_volume(n: usize, inradius: f64) -> Result<f64> {
    Ok(sphere_area(n)? / PI * inradius)
}

pub(crate) fn body_digest(tag: &str, body: &ConvexBody) -> InputDigest {
    InputDigest::new(tag)
        .count(body.dim() as u64)
        .vectors(body.h_normals().iter().map(|u| u.as_slice()))
        .vectors(body.v_generators().iter().map(|u| u.as_slice()))
}

/// Checks `σ_n - 2σ(K*) = 2U(K)` with independent substreams for the two sides.
pub fn check_identity_2_1(body: &ConvexBody, samples: u64, seed: StreamSeed) -> Result<VerificationReport> {
    if !body.is_body() {
        return Err(GeometryError::NotABody);
    }
    let n = body.dim();
    let sigma = sphere_area(n)?;
    let polar_volume = volume_mc(&polar(body), samples, seed.substream(1))?;
    let width = mean_width_mc(body, samples, seed.substream(2))?;
    let lhs = sigma - 2.0 * polar_volume.value;
    let rhs = 2.0 * width.value;
    let se = combined_stderr(&[2.0 * polar_volume.stderr, 2.0 * width.stderr]);
    let digest = body_digest("identity_2_1", body).count(samples).count(seed.seed).finish();
    Ok(VerificationReport::new(
        Claim::PolarityIdentity,
        lhs,
        rhs,
        -(lhs - rhs).abs(),
        3.0 * se,
        "|lhs - rhs| <= 3 * combined stderr",
    )
    .with_sampling(seed.seed, samples)
    .with_digest(digest)
    .with_detail("polar_volume", Detail::Real(polar_volume.value))
    .with_detail("polar_volume_stderr", Detail::Real(polar_volume.stderr))
    .with_detail("mean_width", Detail::Real(width.value))
    .with_detail("mean_width_stderr", Detail::Real(width.stderr)))
}

/// Checks `σ(K) ≤ (σ_n/π) r(K)` at 3 sigma; `equality_slack = rhs - lhs` and
/// `equality_within_3sigma` expose the lune (equality) signature.
pub fn verify_thm2(body: &ConvexBody, samples: u64, seed: StreamSeed) -> Result<VerificationReport> {
    let inner = inradius(body)?;
    let n = body.dim();
    let volume = volume_mc(body, samples, seed)?;
    let bound = lune_volume(n, inner.radius)?;
    let slack = bound - volume.value;
    let tol = 3.0 * volume.stderr;
    let digest = body_digest("volume_inradius", body).count(samples).count(seed.seed).finish();
    Ok(VerificationReport::new(
        Claim::VolumeInradius,
        volume.clone(),
        bound,
        slack,
        tol,
        "volume - 3 * stderr <= (sigma_n / pi) * inradius",
    )
    .with_sampling(seed.seed, samples)
    .with_digest(digest)
    .with_detail("inradius", Detail::Real(inner.radius))
    .with_detail("equality_slack", Detail::Real(slack))
    .with_detail("equality_within_3sigma", Detail::Flag(slack.abs() <= tol)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{hemisphere, make_lune, octant};
    use crate::sphere::UnitVector;

    fn within(e: &Estimate, want: f64) -> bool {
        (e.value - want).abs() <= 3.0 * e.stderr
    }

    #[test]
    fn volume_examples() {
        let seed = StreamSeed::new(21);
        let h = hemisphere(UnitVector::axis(3, 2)).unwrap();
        let e = volume_mc(&h, 1_000_000, seed).unwrap();
        assert!(within(&e, 2.0 * PI), "{e:?}");

        let (_, l) = make_lune(2, UnitVector::axis(3, 0), UnitVector::axis(3, 1)).unwrap();
        let e = volume_mc(&l, 1_000_000, seed.substream(1)).unwrap();
        assert!(within(&e, PI), "{e:?}");

        let e = volume_mc(&octant(2).unwrap(), 1_000_000, seed.substream(2)).unwrap();
        assert!(within(&e, PI / 2.0), "{e:?}");
        assert_eq!(e.samples, 1_000_000);
        assert_eq!(e.seed, 21);
    }

    #[test]
    fn degenerate_volume_is_zero() {
        let p = polar(&hemisphere(UnitVector::axis(3, 0)).unwrap());
        let e = volume_mc(&p, 1000, StreamSeed::new(1)).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn mean_width_examples() {
        let seed = StreamSeed::new(4);
        let h = hemisphere(UnitVector::axis(3, 2)).unwrap();
        let e = mean_width_mc(&h, 200_000, seed).unwrap();
        assert_eq!(e.value, 2.0 * PI);
        let e = mean_width_mc(&octant(2).unwrap(), 1_000_000, seed).unwrap();
        assert!(within(&e, 2.0 * PI - PI / 2.0), "{e:?}");
    }

    #[test]
    fn identity_examples() {
        let seed = StreamSeed::new(8);
        let r = check_identity_2_1(&octant(2).unwrap(), 1_000_000, seed).unwrap();
        assert!(r.pass, "{r:?}");
        let h = hemisphere(UnitVector::axis(3, 1)).unwrap();
        let r = check_identity_2_1(&h, 100_000, seed).unwrap();
        assert!(r.pass);
        assert_eq!(r.lhs.value(), 4.0 * PI);
        assert_eq!(r.rhs.value(), 4.0 * PI);
    }

    #[test]
    fn thm2_examples() {
        let seed = StreamSeed::new(2);
        let (_, l) = make_lune(2, UnitVector::axis(3, 0), UnitVector::axis(3, 1)).unwrap();
        let r = verify_thm2(&l, 1_000_000, seed).unwrap();
        assert!(r.pass);
        assert_eq!(r.details["equality_within_3sigma"], Detail::Flag(true));

        let r = verify_thm2(&octant(2).unwrap(), 1_000_000, seed).unwrap();
        assert!(r.pass);
        assert!((r.rhs.value() - 4.0 * (1.0 / 3f64.sqrt()).asin()).abs() < 1e-9);
        assert!((r.slack - 0.891).abs() < 0.02, "{}", r.slack);
        assert_eq!(r.details["equality_within_3sigma"], Detail::Flag(false));
    }

    #[test]
    fn reproducible() {
        let k = octant(3).unwrap();
        let a = volume_mc(&k, 100_000, StreamSeed::new(3)).unwrap();
        let b = volume_mc(&k, 100_000, StreamSeed::new(3)).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        let c = volume_mc(&k, 100_000, StreamSeed::new(4)).unwrap();
        assert_ne!(a.value, c.value);
    }
}
