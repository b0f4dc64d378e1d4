//! Random bodies for property suites and the CLI.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::body::{make_body, make_lune_in_frame, ConvexBody, Lune};
use crate::covering::random_frame;
use crate::error::{GeometryError, Result};
use crate::rng::StreamSeed;
use crate::sphere::{fill_uniform_sphere, orthogonal_complement, sample_uniform_cap, SphericalCap, UnitVector};
use crate::{check_dim, Vector};

const ATTEMPTS: usize = 1000;

fn random_unit(n: usize, rng: &mut ChaCha8Rng) -> UnitVector {
    let mut buf = vec![0.0; n + 1];
    fill_uniform_sphere(rng, &mut buf);
    UnitVector::from_slice(&buf).expect("sampler returns unit vectors")
}

/// Hull of `k` uniform points from the cap of radius `rho < π/2` about `center`.
pub fn random_v_body(center: &UnitVector, rho: f64, k: usize, rng: &mut ChaCha8Rng) -> Result<ConvexBody> {
    let n = center.dim();
    check_dim(n)?;
    if !(rho > 0.0 && rho < FRAC_PI_2) {
        return Err(GeometryError::invalid(format!("cap radius {rho} must lie in (0, pi/2)")));
    }
    if k < n + 1 {
        return Err(GeometryError::invalid(format!("need at least {} generators", n + 1)));
    }
    let cap = SphericalCap::new(center.clone(), rho)?;
    for _ in 0..ATTEMPTS {
        let pts = (0..k).map(|_| sample_uniform_cap(&cap, rng)).collect();
        let body = make_body(n, None, Some(pts))?;
        if body.is_body() {
            return Ok(body);
        }
    }
    Err(GeometryError::invalid("no full-dimensional hull drawn"))
}

/// Intersection of `k` halfspaces whose poles lie within `spread < π/2` of `-center`,
/// redrawn until the result is a body in an open hemisphere.
pub fn random_h_body(center: &UnitVector, spread: f64, k: usize, rng: &mut ChaCha8Rng) -> Result<ConvexBody> {
    let n = center.dim();
    check_dim(n)?;
    if !(spread > 0.0 && spread < FRAC_PI_2) {
        return Err(GeometryError::invalid(format!("pole spread {spread} must lie in (0, pi/2)")));
    }
    if k < n + 1 {
        return Err(GeometryError::invalid(format!("need at least {} normals", n + 1)));
    }
    let cap = SphericalCap::new(center.antipode(), spread)?;
    for _ in 0..ATTEMPTS {
        let normals = (0..k).map(|_| sample_uniform_cap(&cap, rng)).collect();
        match make_body(n, Some(normals), None) {
            Ok(body) if body.is_body() && body.in_open_hemisphere() => return Ok(body),
            Ok(_) | Err(GeometryError::Empty) | Err(GeometryError::NotInHemisphere) => {}
            Err(e) => return Err(e),
        }
    }
    Err(GeometryError::invalid("no bounded body drawn"))
}

/// Lune with a uniform random frame and dihedral angle `angle ∈ (0, π]`.
pub fn random_lune(n: usize, angle: f64, rng: &mut ChaCha8Rng) -> Result<(Lune, ConvexBody)> {
    let (ridge, (p, q)) = random_frame(n, rng)?;
    let start = rng.random_range(0.0..2.0 * PI);
    make_lune_in_frame(&ridge, (&p, &q), start, start + angle)
}

/// Polytope inscribed in the cap of radius `rho` about `center`, with `k` vertices on its
/// boundary: a regular polygon for `n = 2`, a Fibonacci lattice for `n = 3`, and
/// `k` seeded uniform points for `n = 4`.
pub fn polytopal_cap(center: &UnitVector, rho: f64, k: usize) -> Result<ConvexBody> {
    let n = center.dim();
    check_dim(n)?;
    if !(rho > 0.0 && rho < FRAC_PI_2) {
        return Err(GeometryError::invalid(format!("cap radius {rho} must lie in (0, pi/2)")));
    }
    if k < n + 1 {
        return Err(GeometryError::invalid(format!("need at least {} vertices", n + 1)));
    }
    let c = center.as_vector();
    let frame = orthogonal_complement(std::slice::from_ref(c), n + 1);
    let dirs: Vec<Vec<f64>> = match n {
        2 => (0..k)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / k as f64;
                vec![a.cos(), a.sin()]
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..k)
                .map(|i| {
                    let z = 1.0 - (2.0 * i as f64 + 1.0) / k as f64;
                    let r = (1.0 - z * z).sqrt();
                    let a = golden * i as f64;
                    vec![r * a.cos(), r * a.sin(), z]
                })
                .collect()
        }
        _ => {
            let mut rng = StreamSeed::new(k as u64).rng();
            (0..k)
                .map(|_| {
                    let mut d = vec![0.0; n];
                    fill_uniform_sphere(&mut rng, &mut d);
                    d
                })
                .collect()
        }
    };
    let vertices = dirs
        .into_iter()
        .map(|d| {
            let mut v: Vector = c * rho.cos();
            for (b, x) in frame.iter().zip(&d) {
                v.axpy(x * rho.sin(), b, 1.0);
            }
            UnitVector::normalize(v)
        })
        .collect::<Result<Vec<_>>>()?;
    make_body(n, None, Some(vertices))
}

/// Radius of the largest cap inside the regular `k`-gon inscribed in a cap of radius `rho` on `S^2`.
pub fn polygon_cap_inradius(rho: f64, k: usize) -> f64 {
    (rho.tan() * (PI / k as f64).cos()).atan()
}

/// Mixed family used by the property suites: V-hulls, H-intersections and lunes,
/// each about a random center.
pub fn random_body(n: usize, rng: &mut ChaCha8Rng) -> Result<ConvexBody> {
    let center = random_unit(n, rng);
    match rng.random_range(0..3) {
        0 => {
            let rho = rng.random_range(0.2..1.4);
            let k = rng.random_range(n + 1..=n + 8);
            random_v_body(&center, rho, k, rng)
        }
        1 => {
            let spread = rng.random_range(0.3..1.3);
            let k = rng.random_range(n + 1..=n + 8);
            random_h_body(&center, spread, k, rng)
        }
        _ => {
            let angle = rng.random_range(0.05..PI);
            random_lune(n, angle, rng).map(|(_, b)| b)
        }
    }
}

/// Random polytopal body in an open hemisphere (V-hull or H-intersection).
pub fn random_polytope(n: usize, rng: &mut ChaCha8Rng) -> Result<ConvexBody> {
    loop {
        let body = random_body(n, rng)?;
        if body.in_open_hemisphere() {
            return Ok(body);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{circumradius, inradius};
    use approx::assert_abs_diff_eq;

    #[test]
    fn generated_bodies_are_bodies() {
        let mut rng = StreamSeed::new(17).rng();
        for n in 2..=4 {
            for _ in 0..30 {
                let b = random_body(n, &mut rng).unwrap();
                assert!(b.is_body());
                assert!(inradius(&b).unwrap().radius > 0.0);
                let p = random_polytope(n, &mut rng).unwrap();
                assert!(p.in_open_hemisphere());
                assert!(circumradius(&p).radius < FRAC_PI_2);
            }
        }
    }

    #[test]
    fn v_body_stays_in_cap() {
        let mut rng = StreamSeed::new(3).rng();
        let c = UnitVector::axis(4, 3);
        let b = random_v_body(&c, 0.5, 10, &mut rng).unwrap();
        for g in b.v_generators() {
            assert!(g.dot(&c) >= 0.5f64.cos() - 1e-12);
        }
        assert!(random_v_body(&c, 2.0, 10, &mut rng).is_err());
    }

    #[test]
    fn polytopal_cap_radii() {
        let c = UnitVector::from_slice(&[0.0, 0.6, 0.8]).unwrap();
        let rho = 0.7;
        let k = 64;
        let cap = polytopal_cap(&c, rho, k).unwrap();
        assert_eq!(cap.v_generators().len(), k);
        let outer = circumradius(&cap);
        assert_abs_diff_eq!(outer.radius, rho, epsilon = 1e-8);
        let inner = inradius(&cap).unwrap();
        assert_abs_diff_eq!(inner.radius, polygon_cap_inradius(rho, k), epsilon = 1e-8);
        for n in 3..=4 {
            let c = UnitVector::axis(n + 1, 0);
            let cap = polytopal_cap(&c, 0.9, 200).unwrap();
            assert_abs_diff_eq!(circumradius(&cap).radius, 0.9, epsilon = 1e-6);
        }
    }
}
