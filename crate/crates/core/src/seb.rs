//! Smallest enclosing ball of a finite point set (Welzl's randomized recursion).

use nalgebra::DMatrix;
use rand::seq::SliceRandom;

use crate::error::{GeometryError, Result};
use crate::rng::StreamSeed;
use crate::Vector;

#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Vector,
    pub radius: f64,
}

impl Ball {
    fn contains(&self, p: &Vector) -> bool {
        (p - &self.center).norm() <= self.radius * (1.0 + 1e-12) + 1e-12
    }
}

/// Exact smallest ball containing `points`. The processing order is a fixed
/// pseudo-random permutation, so the result is deterministic.
pub fn smallest_enclosing_ball(points: &[Vector]) -> Result<Ball> {
    let first = points.first().ok_or(GeometryError::Empty)?;
    let d = first.len();
    if let Some(p) = points.iter().find(|p| p.len() != d) {
        return Err(GeometryError::DimensionMismatch {
            expected: d,
            found: p.len(),
        });
    }
    let mut order: Vec<&Vector> = points.iter().collect();
    order.shuffle(&mut StreamSeed::new(0x5eb).rng());
    let mut support: Vec<&Vector> = Vec::with_capacity(d + 1);
    Ok(welzl(&order, &mut support, d))
}

fn welzl<'a>(points: &[&'a Vector], support: &mut Vec<&'a Vector>, d: usize) -> Ball {
    if points.is_empty() || support.len() == d + 1 {
        return ball_through(support, d);
    }
    let (p, rest) = points.split_last().unwrap();
    let ball = welzl(rest, support, d);
    if ball.radius >= 0.0 && ball.contains(p) {
        return ball;
    }
    support.push(p);
    let ball = welzl(rest, support, d);
    support.pop();
    ball
}

/// Smallest ball with all of `support` on its boundary (circumball within their
/// affine hull). An empty support gives radius -1 so that nothing is contained.
fn ball_through(support: &[&Vector], d: usize) -> Ball {
    match support {
        [] => Ball {
            center: Vector::zeros(d),
            radius: -1.0,
        },
        [p] => Ball {
            center: (*p).clone(),
            radius: 0.0,
        },
        [q0, rest @ ..] => {
            let k = rest.len();
            let diffs: Vec<Vector> = rest.iter().map(|q| *q - *q0).collect();
            let mut a = DMatrix::<f64>::zeros(k, k);
            let mut b = Vector::zeros(k);
            for i in 0..k {
                for j in 0..k {
                    a[(i, j)] = 2.0 * diffs[i].dot(&diffs[j]);
                }
                b[i] = diffs[i].norm_squared();
            }
            let lambda = a
                .clone()
                .lu()
                .solve(&b)
                .filter(|x| x.iter().all(|v| v.is_finite()))
                .unwrap_or_else(|| a.svd(true, true).solve(&b, 1e-14).expect("svd solve"));
            let mut center = (*q0).clone();
            for (l, diff) in lambda.iter().zip(&diffs) {
                center.axpy(*l, diff, 1.0);
            }
            let radius = support.iter().map(|q| (*q - &center).norm()).fold(0.0, f64::max);
            Ball { center, radius }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn single_point() {
        let b = smallest_enclosing_ball(&[v(&[1.0, 2.0])]).unwrap();
        assert_eq!(b.center, v(&[1.0, 2.0]));
        assert_eq!(b.radius, 0.0);
        assert!(smallest_enclosing_ball(&[]).is_err());
    }

    #[test]
    fn antipodal_pair() {
        let b = smallest_enclosing_ball(&[v(&[-2.0, 0.0, 0.0]), v(&[2.0, 0.0, 0.0])]).unwrap();
        assert!(b.center.norm() < 1e-15);
        assert!((b.radius - 2.0).abs() < 1e-15);
    }

    #[test]
    fn equilateral_triangle() {
        let s = 1.7;
        let pts = [v(&[0.0, 0.0]), v(&[s, 0.0]), v(&[s / 2.0, s * 3f64.sqrt() / 2.0])];
        let b = smallest_enclosing_ball(&pts).unwrap();
        assert!((b.radius - s / 3f64.sqrt()).abs() < 1e-12);
        // brute-force grid over candidate centers
        let mut best = f64::INFINITY;
        let steps = 600;
        for i in 0..=steps {
            for j in 0..=steps {
                let c = v(&[s * i as f64 / steps as f64, s * j as f64 / steps as f64]);
                let r = pts.iter().map(|p| (p - &c).norm()).fold(0.0, f64::max);
                best = best.min(r);
            }
        }
        assert!(b.radius <= best + 1e-12 && best - b.radius < 1e-2);
    }

    #[test]
    fn random_clouds_are_enclosed_tightly() {
        let mut rng = StreamSeed::new(3).rng();
        for d in 2..=4 {
            for _ in 0..50 {
                let pts: Vec<Vector> = (0..30)
                    .map(|_| Vector::from_fn(d, |_, _| rng.random_range(-1.0..1.0)))
                    .collect();
                let b = smallest_enclosing_ball(&pts).unwrap();
                let dists: Vec<f64> = pts.iter().map(|p| (p - &b.center).norm()).collect();
                assert!(dists.iter().all(|&r| r <= b.radius + 1e-10));
                // at least two points on the boundary
                assert!(dists.iter().filter(|&&r| (r - b.radius).abs() < 1e-9).count() >= 2);
            }
        }
    }
}
