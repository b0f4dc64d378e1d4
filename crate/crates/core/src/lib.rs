//! Computational convex geometry on the unit sphere `S^n`.
//!
//! Spherically convex bodies are stored as the intersection of the sphere with a
//! polyhedral cone, carrying both a facet (H) and a generator (V) description.
//! On top of that the crate provides:
//!
//! * inradius / circumradius solvers and cone polarity ([`body`]),
//! * Monte Carlo estimators for spherical volume and spherical mean width ([`measure`]),
//! * the gnomonic projection and the weighted hyperplane functional `U_f` ([`gnomonic`]),
//! * normal-cone averages over inscribed simplices and the segment-minimality search ([`linhart`]),
//! * covering instances built from lune fans and the covering bound verifiers ([`covering`]).
//!
//! Every randomized routine takes an explicit [`rng::StreamSeed`]; results are
//! reproducible for a fixed seed regardless of the number of worker threads.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod body;
pub mod cone;
pub mod covering;
pub mod error;
pub mod generate;
pub mod gnomonic;
pub mod io;
pub mod linhart;
pub mod measure;
pub mod minnorm;
pub mod quadrature;
pub mod report;
pub mod rng;
pub mod seb;
pub mod sphere;
pub mod weight;

pub use error::{GeometryError, Result};

/// Dense real vector used for all ambient and tangent-space coordinates.
pub type Vector = nalgebra::DVector<f64>;

/// Smallest supported sphere dimension `n`.
pub const MIN_DIM: usize = 2;
/// Largest supported sphere dimension `n` (ambient dimension 5).
pub const MAX_DIM: usize = 4;

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(GeometryError::UnsupportedDimension(n))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
