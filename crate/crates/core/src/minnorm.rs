//! Minimum-norm point of a convex hull (Wolfe's active-set method).
//!
//! Both conic radius problems reduce to this: for unit vectors `a_i`,
//! `max_{‖x‖ ≤ 1} min_i ⟨a_i, x⟩ = dist(0, conv{a_i})` when the right side is
//! positive, attained at `x = p / ‖p‖` for the min-norm point `p`.

use nalgebra::DMatrix;

use crate::Vector;

#[derive(Clone, Debug)]
pub struct MinNormPoint {
    pub point: Vector,
    /// Convex weights on the active points (index into the input, weight).
    pub weights: Vec<(usize, f64)>,
}

impl MinNormPoint {
    pub fn norm(&self) -> f64 {
        self.point.norm()
    }
}

const MAJOR_TOL: f64 = 1e-15;
const WEIGHT_TOL: f64 = 1e-14;

/// Point of `conv(points)` closest to the origin. Panics on an empty slice.
pub fn min_norm_point(points: &[Vector]) -> MinNormPoint {
    assert!(!points.is_empty(), "min-norm point of an empty set");
    let scale = points.iter().map(|p| p.norm_squared()).fold(0.0, f64::max).max(1e-300);
    let start = (0..points.len())
        .min_by(|&i, &j| points[i].norm_squared().total_cmp(&points[j].norm_squared()))
        .unwrap();
    let mut active = vec![start];
    let mut lambda = vec![1.0];
    let mut x = points[start].clone();

    for _ in 0..10_000 {
        let (j, best) = (0..points.len())
            .map(|j| (j, x.dot(&points[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if x.norm_squared() - best <= MAJOR_TOL * scale || active.contains(&j) {
            break;
        }
        active.push(j);
        lambda.push(0.0);

        loop {
            let mu = affine_min_norm(points, &active);
            if mu.iter().all(|&m| m > WEIGHT_TOL) {
                lambda = mu;
                break;
            }
            let mut theta = 1.0f64;
            for (l, m) in lambda.iter().zip(&mu) {
                if *m <= WEIGHT_TOL && l - m > 0.0 {
                    theta = theta.min(l / (l - m));
                }
            }
            for (l, m) in lambda.iter_mut().zip(&mu) {
                *l += theta * (m - *l);
            }
            let mut keep = Vec::with_capacity(active.len());
            let mut kept = Vec::with_capacity(active.len());
            for (&i, &l) in active.iter().zip(&lambda) {
                if l > WEIGHT_TOL {
                    keep.push(i);
                    kept.push(l);
                }
            }
            if keep.is_empty() {
                // numerical breakdown; fall back to the newest point
                keep.push(*active.last().unwrap());
                kept.push(1.0);
            }
            let total: f64 = kept.iter().sum();
            active = keep;
            lambda = kept.into_iter().map(|l| l / total).collect();
            if active.len() == 1 {
                break;
            }
        }
        x = combine(points, &active, &lambda);
    }

    MinNormPoint {
        point: x,
        weights: active.into_iter().zip(lambda).collect(),
    }
}

fn combine(points: &[Vector], active: &[usize], lambda: &[f64]) -> Vector {
    let mut x = Vector::zeros(points[0].len());
    for (&i, &l) in active.iter().zip(lambda) {
        x.axpy(l, &points[i], 1.0);
    }
    x
}

/// Weights of the min-norm point of the affine hull of the active points.
fn affine_min_norm(points: &[Vector], active: &[usize]) -> Vec<f64> {
    let k = active.len();
    let mut m = DMatrix::<f64>::zeros(k + 1, k + 1);
    for (r, &i) in active.iter().enumerate() {
        for (c, &j) in active.iter().enumerate() {
            m[(r, c)] = points[i].dot(&points[j]);
        }
        m[(r, k)] = 1.0;
        m[(k, r)] = 1.0;
    }
    let mut rhs = Vector::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = m
        .clone()
        .lu()
        .solve(&rhs)
        .filter(|s| s.iter().all(|v| v.is_finite()))
        .unwrap_or_else(|| m.svd(true, true).solve(&rhs, 1e-14).expect("svd solve"));
    sol.iter().take(k).copied().collect()
}
