//! Double-description conversion for polyhedral cones in low dimension.
//!
//! [`polar_generators`] turns a finite set of constraint normals `a_i` into generators
//! of `C = {x : ⟨a_i, x⟩ ≤ 0 ∀i}`: an orthonormal basis of the lineality space plus
//! the extreme rays of the pointed part. Applied to facet normals it yields
//! generators; applied to generators it yields the facet normals of their conic hull,
//! because `cone(V)` is the polar of `{x : ⟨v, x⟩ ≤ 0 ∀v ∈ V}`.
//!
//! Constraints are inserted one at a time (Motzkin's scheme). While the current
//! lineality space is not orthogonal to the new constraint, one lineality direction
//! is turned into a ray; otherwise rays are split by sign and adjacent pairs across
//! the hyperplane are combined, adjacency decided by the combinatorial zero-set test.

use crate::sphere::reduce;
use crate::Vector;

/// Constraint values within this band count as zero.
const ZERO_TOL: f64 = 1e-10;
/// Generator de-duplication tolerance (on unit vectors).
pub const DEDUP_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Default)]
pub struct ConeGenerators {
    /// Orthonormal basis of the lineality space.
    pub lineality: Vec<Vector>,
    /// Unit extreme rays of the pointed part.
    pub rays: Vec<Vector>,
}

impl ConeGenerators {
    /// Rays followed by `±l` for each lineality direction `l`.
    pub fn all(&self) -> Vec<Vector> {
        let mut out = self.rays.clone();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(-l);
        }
        out
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    /// True when the cone is `{0}`.
    pub fn is_trivial(&self) -> bool {
        self.lineality.is_empty() && self.rays.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(len: usize) -> Self {
        ZeroSet(vec![0; len.div_ceil(64).max(1)])
    }

    fn first(len: usize, upto: usize) -> Self {
        let mut z = Self::new(len);
        for k in 0..upto {
            z.insert(k);
        }
        z
    }

    fn insert(&mut self, k: usize) {
        self.0[k / 64] |= 1 << (k % 64);
    }

    fn and(&self, other: &ZeroSet) -> ZeroSet {
        ZeroSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn subset_of(&self, other: &ZeroSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

#[derive(Clone, Debug)]
struct Ray {
    v: Vector,
    zeros: ZeroSet,
}

/// Generators of `{x ∈ R^ambient : ⟨a, x⟩ ≤ 0 for every a in normals}`.
pub fn polar_generators(normals: &[Vector], ambient: usize) -> ConeGenerators {
    let m = normals.len();
    let mut lineality: Vec<Vector> = (0..ambient)
        .map(|k| {
            let mut e = Vector::zeros(ambient);
            e[k] = 1.0;
            e
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, a) in normals.iter().enumerate() {
        let scale = a.norm();
        if scale == 0.0 {
            continue;
        }
        let a = a / scale;
        let pivot = lineality
            .iter()
            .enumerate()
            .map(|(i, l)| (i, a.dot(l)))
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()));

        if let Some((idx, c0)) = pivot.filter(|p| p.1.abs() > ZERO_TOL) {
            let l0 = lineality.remove(idx);
            let rest: Vec<Vector> = lineality
                .drain(..)
                .map(|l| {
                    let c = a.dot(&l) / c0;
                    l - &l0 * c
                })
                .collect();
            for l in rest {
                if let Some(w) = reduce(l, &lineality) {
                    lineality.push(w);
                }
            }
            for r in &mut rays {
                let c = a.dot(&r.v) / c0;
                r.v.axpy(-c, &l0, 1.0);
                r.v.normalize_mut();
                r.zeros.insert(k);
            }
            rays.push(Ray {
                v: l0 * (-c0.signum()),
                zeros: ZeroSet::first(m, k),
            });
            continue;
        }

        let values: Vec<f64> = rays.iter().map(|r| a.dot(&r.v)).collect();
        if values.iter().all(|&s| s <= ZERO_TOL) {
            for (r, &s) in rays.iter_mut().zip(&values) {
                if s >= -ZERO_TOL {
                    r.zeros.insert(k);
                }
            }
            continue;
        }

        let pointed_dim = ambient - lineality.len();
        let min_common = pointed_dim.saturating_sub(2);
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len());
        for (i, p) in rays.iter().enumerate() {
            if values[i] <= ZERO_TOL {
                continue;
            }
            for (j, q) in rays.iter().enumerate() {
                if values[j] >= -ZERO_TOL {
                    continue;
                }
                let common = p.zeros.and(&q.zeros);
                if common.count() < min_common {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(l, r)| l != i && l != j && common.subset_of(&r.zeros));
                if blocked {
                    continue;
                }
                let mut v = &q.v * values[i] - &p.v * values[j];
                let norm = v.norm();
                if norm <= 1e-14 {
                    continue;
                }
                v /= norm;
                let mut zeros = common;
                zeros.insert(k);
                next.push(Ray { v, zeros });
            }
        }
        for (r, &s) in rays.iter().zip(&values) {
            if s < -ZERO_TOL {
                next.push(r.clone());
            } else if s <= ZERO_TOL {
                let mut r = r.clone();
                r.zeros.insert(k);
                next.push(r);
            }
        }
        rays = next;
    }

    let mut unique: Vec<Vector> = Vec::with_capacity(rays.len());
    for r in rays {
        if !unique.iter().any(|u| (u - &r.v).norm() <= DEDUP_TOL) {
            unique.push(r.v);
        }
    }
    ConeGenerators {
        lineality,
        rays: unique,
    }
}
