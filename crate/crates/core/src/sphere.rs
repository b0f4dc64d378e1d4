//! Points, caps and measure constants of the unit sphere `S^n ⊂ R^{n+1}`.

use std::f64::consts::PI;
use std::ops::Deref;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{GeometryError, Result};
use crate::quadrature;
use crate::Vector;

/// Tolerance on `|‖x‖ - 1|` for a valid [`UnitVector`].
pub const UNIT_TOL: f64 = 1e-12;

/// A point of `S^n`, stored with its `n + 1` ambient coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitVector(Vector);

impl UnitVector {
    /// Rescale `v` to unit length.
    pub fn normalize(v: Vector) -> Result<Self> {
        let norm = v.norm();
        if !(norm.is_finite() && norm > 1e-300) {
            return Err(GeometryError::ZeroVector(norm));
        }
        Ok(UnitVector(v / norm))
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::normalize(Vector::from_column_slice(coords))
    }

    /// Accept `v` only if it is already unit length within `tolerance`, then renormalize.
    pub fn checked(v: Vector, tolerance: f64) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() > tolerance || !norm.is_finite() {
            return Err(GeometryError::NotUnit { norm, tolerance });
        }
        Self::normalize(v)
    }

    /// Coordinate axis `e_k` in ambient dimension `ambient`.
    pub fn axis(ambient: usize, k: usize) -> Self {
        let mut v = Vector::zeros(ambient);
        v[k] = 1.0;
        UnitVector(v)
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.len()
    }

    /// Sphere dimension `n`.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn as_vector(&self) -> &Vector {
        &self.0
    }

    pub fn into_vector(self) -> Vector {
        self.0
    }

    pub fn antipode(&self) -> Self {
        UnitVector(-&self.0)
    }
}

impl Deref for UnitVector {
    type Target = Vector;
    fn deref(&self) -> &Vector {
        &self.0
    }
}

/// Closed spherical cap `{x : d(x, center) ≤ radius}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalCap {
    pub center: UnitVector,
    pub radius: f64,
}

impl SphericalCap {
    pub fn new(center: UnitVector, radius: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&radius) {
            return Err(GeometryError::invalid(format!("cap radius {radius} outside [0, pi]")));
        }
        Ok(SphericalCap { center, radius })
    }

    pub fn hemisphere(center: UnitVector) -> Self {
        SphericalCap { center, radius: PI / 2.0 }
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    /// Membership with an angular slack of `tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if self.radius >= PI {
            return true;
        }
        let c = self.center.as_slice();
        let norm = crate::dot(x, x).sqrt();
        let cos = crate::dot(c, x) / norm;
        cos >= (self.radius + tol).min(PI).cos()
    }

    pub fn is_full_sphere(&self) -> bool {
        self.radius >= PI
    }
}

/// Surface measure `σ_n = 2π^{(n+1)/2} / Γ((n+1)/2)` of `S^n`. The Gamma factor is
/// evaluated exactly: `Γ(m) = (m-1)!` and `Γ(m + 1/2) = √π (2m-1)!! / 2^m`, the `√π`
/// cancelling against the numerator.
pub fn sphere_area(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(GeometryError::UnsupportedDimension(n));
    }
    let k = n + 1;
    let m = k / 2;
    let pi_m = PI.powi(m as i32);
    if k.is_multiple_of(2) {
        let factorial: f64 = (1..m).map(|i| i as f64).product();
        Ok(2.0 * pi_m / factorial)
    } else {
        let double_factorial: f64 = (1..=m).map(|i| (2 * i - 1) as f64).product();
        Ok(2.0 * pi_m * 2f64.powi(m as i32) / double_factorial)
    }
}

/// Measure of a cap of angular radius `rho` in `S^n`: `σ_{n-1} ∫_0^ρ sin^{n-1}θ dθ`.
pub fn cap_area(n: usize, rho: f64) -> Result<f64> {
    if n < 1 {
        return Err(GeometryError::UnsupportedDimension(n));
    }
    let rho = rho.clamp(0.0, PI);
    if n == 1 {
        return Ok(2.0 * rho);
    }
    let base = sphere_area(n - 1)?;
    Ok(base * quadrature::adaptive(|t: f64| t.sin().powi(n as i32 - 1), 0.0, rho, 1e-14))
}

/// Angle between `x` and `y`, in `[0, π]`.
pub fn geodesic_distance(x: &UnitVector, y: &UnitVector) -> Result<f64> {
    if x.len() != y.len() {
        return Err(GeometryError::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(angle_between(x.as_slice(), y.as_slice()))
}

/// Angle between two unit vectors via `2 atan2(‖x - y‖, ‖x + y‖)`, which agrees with
/// `acos⟨x, y⟩` but keeps full precision near 0 and π.
pub(crate) fn angle_between(x: &[f64], y: &[f64]) -> f64 {
    let (mut d2, mut s2) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        d2 += (a - b) * (a - b);
        s2 += (a + b) * (a + b);
    }
    (2.0 * d2.sqrt().atan2(s2.sqrt())).clamp(0.0, PI)
}

/// Overwrite `buf` with a uniform point of the unit sphere in `R^{buf.len()}`.
pub fn fill_uniform_sphere<R: Rng + ?Sized>(rng: &mut R, buf: &mut [f64]) {
    loop {
        let mut norm2 = 0.0;
        for x in buf.iter_mut() {
            *x = rng.sample(StandardNormal);
            norm2 += *x * *x;
        }
        if norm2 > 1e-200 {
            let inv = norm2.sqrt().recip();
            buf.iter_mut().for_each(|x| *x *= inv);
            return;
        }
    }
}

/// Uniform point of `S^n` (normalized standard Gaussian vector in `R^{n+1}`).
pub fn sample_uniform_sphere<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<UnitVector> {
    if n < 1 {
        return Err(GeometryError::UnsupportedDimension(n));
    }
    let mut v = Vector::zeros(n + 1);
    fill_uniform_sphere(rng, v.as_mut_slice());
    Ok(UnitVector(v))
}

/// Uniform point of a cap by rejection from the whole sphere. Intended for the large
/// caps (radius ≥ π/2) used by covering checks; a zero-radius cap returns its center.
pub fn sample_uniform_cap<R: Rng + ?Sized>(cap: &SphericalCap, rng: &mut R) -> UnitVector {
    if cap.radius <= 0.0 {
        return cap.center.clone();
    }
    let mut v = Vector::zeros(cap.center.len());
    loop {
        fill_uniform_sphere(rng, v.as_mut_slice());
        if cap.contains(v.as_slice(), 0.0) {
            return UnitVector(v);
        }
    }
}

/// Orthonormal basis of the orthogonal complement of `span(vectors)` in `R^ambient`,
/// obtained by Gram–Schmidt over the coordinate axes in index order.
pub fn orthogonal_complement(vectors: &[Vector], ambient: usize) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    for v in vectors {
        if let Some(w) = reduce(v.clone(), &basis) {
            basis.push(w);
        }
    }
    let span_len = basis.len();
    for k in 0..ambient {
        if basis.len() == ambient {
            break;
        }
        let mut e = Vector::zeros(ambient);
        e[k] = 1.0;
        if let Some(w) = reduce(e, &basis) {
            basis.push(w);
        }
    }
    basis.split_off(span_len)
}

/// Orthogonalize `v` against an orthonormal `basis` (twice, for stability) and normalize.
pub(crate) fn reduce(mut v: Vector, basis: &[Vector]) -> Option<Vector> {
    let scale = v.norm();
    for _ in 0..2 {
        for b in basis {
            let c = b.dot(&v);
            v.axpy(-c, b, 1.0);
        }
    }
    let norm = v.norm();
    if norm > 1e-9 * scale.max(1.0) {
        Some(v / norm)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamSeed;
    use approx::assert_abs_diff_eq;

    #[test]
    fn area_constants() {
        assert_abs_diff_eq!(sphere_area(1).unwrap(), 2.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(sphere_area(2).unwrap(), 4.0 * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(sphere_area(3).unwrap(), 2.0 * PI * PI, epsilon = 1e-12);
        assert_abs_diff_eq!(sphere_area(4).unwrap(), 8.0 * PI * PI / 3.0, epsilon = 1e-12);
        assert!(sphere_area(0).is_err());
    }

    #[test]
    fn area_matches_surface_element_integral() {
        // σ_n = σ_{n-1} ∫_0^π sin^{n-1}θ dθ, integrated independently of the Gamma formula.
        let s1 = 2.0 * PI;
        let s2 = s1 * quadrature::adaptive(|t: f64| t.sin(), 0.0, PI, 1e-14);
        let s3 = s2 * quadrature::adaptive(|t: f64| t.sin().powi(2), 0.0, PI, 1e-14);
        assert_abs_diff_eq!(sphere_area(2).unwrap(), s2, epsilon = 1e-9);
        assert_abs_diff_eq!(sphere_area(3).unwrap(), s3, epsilon = 1e-9);
    }

    #[test]
    fn cap_area_closed_form_on_s2() {
        for rho in [0.1, 0.7, PI / 2.0, 2.5, PI] {
            assert_abs_diff_eq!(cap_area(2, rho).unwrap(), 2.0 * PI * (1.0 - rho.cos()), epsilon = 1e-12);
        }
    }

    #[test]
    fn distance_examples() {
        let x = UnitVector::axis(3, 0);
        let y = UnitVector::axis(3, 1);
        assert_eq!(geodesic_distance(&x, &x).unwrap(), 0.0);
        assert_abs_diff_eq!(geodesic_distance(&x, &x.antipode()).unwrap(), PI, epsilon = 1e-15);
        assert_abs_diff_eq!(geodesic_distance(&x, &y).unwrap(), PI / 2.0, epsilon = 1e-15);
        assert!(matches!(
            geodesic_distance(&x, &UnitVector::axis(4, 0)),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sample_is_unit() {
        let mut rng = StreamSeed::new(1).rng();
        for n in 1..=4 {
            for _ in 0..100 {
                let x = sample_uniform_sphere(n, &mut rng).unwrap();
                assert!((x.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn uniform_sphere_statistics() {
        let mut rng = StreamSeed::new(11).rng();
        let draws = 1_000_000;
        let mut hits = 0u64;
        let mut sums = [0.0f64; 3];
        let mut buf = [0.0; 3];
        for _ in 0..draws {
            fill_uniform_sphere(&mut rng, &mut buf);
            if buf[2] > 0.0 {
                hits += 1;
            }
            for k in 0..3 {
                sums[k] += buf[k];
            }
        }
        let frac = hits as f64 / draws as f64;
        assert!((frac - 0.5).abs() <= 3.0 * 0.5 / 1e3);
        for s in sums {
            assert!((s / draws as f64).abs() <= 3.0 / 1e3);
        }
    }

    #[test]
    fn cap_sampler() {
        let mut rng = StreamSeed::new(5).rng();
        let c = UnitVector::axis(3, 2);
        let zero = SphericalCap::new(c.clone(), 0.0).unwrap();
        assert_eq!(sample_uniform_cap(&zero, &mut rng), c);

        let cap = SphericalCap::hemisphere(c.clone());
        let draws = 1_000_000u64;
        let mut sub = 0u64;
        for _ in 0..draws {
            let x = sample_uniform_cap(&cap, &mut rng);
            let d = geodesic_distance(&x, &c).unwrap();
            assert!(d <= PI / 2.0 + 1e-12);
            if d <= PI / 4.0 {
                sub += 1;
            }
        }
        // cap-area ratio 2π(1 - cos π/4) / 2π
        let p = 1.0 - (PI / 4.0).cos();
        let se = (p * (1.0 - p) / draws as f64).sqrt();
        assert!((sub as f64 / draws as f64 - p).abs() <= 3.0 * se);
    }

    #[test]
    fn complement_is_orthonormal() {
        let u = UnitVector::from_slice(&[1.0, 2.0, -0.5, 0.3]).unwrap();
        let basis = orthogonal_complement(std::slice::from_ref(u.as_vector()), 4);
        assert_eq!(basis.len(), 3);
        for (i, a) in basis.iter().enumerate() {
            assert!(a.dot(&u).abs() < 1e-12);
            for (j, b) in basis.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((a.dot(b) - want).abs() < 1e-12);
            }
        }
    }
}
