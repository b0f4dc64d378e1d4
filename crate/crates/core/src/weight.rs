//! Positive radial weights `f` on `[0, ∞)` and their cumulative integrals
//! `F(s) = ∫_0^s f(t) dt`, which define the hyperplane measure `ν_f`.

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::quadrature;

/// Quadrature tolerance used wherever `F` is integrated numerically.
pub const QUAD_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightFunction {
    /// `f(t) = (1 + t²)^{-(n+1)/2}`: pulls hyperplane measure on `E^n` back to the
    /// measure of great subspheres of `S^n` under the gnomonic map.
    Spherical { n: usize },
    /// `f ≡ value`.
    Constant { value: f64 },
    /// Piecewise-linear `f` through `(t[i], f[i])`, with `t[0] = 0`, held constant
    /// after the last knot.
    Table { t: Vec<f64>, f: Vec<f64> },
}

impl WeightFunction {
    pub fn spherical(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GeometryError::UnsupportedDimension(n));
        }
        Ok(WeightFunction::Spherical { n })
    }

    pub fn constant(value: f64) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(GeometryError::invalid(format!("constant weight must be positive, got {value}")));
        }
        Ok(WeightFunction::Constant { value })
    }

    pub fn table(t: Vec<f64>, f: Vec<f64>) -> Result<Self> {
        if t.is_empty() || t.len() != f.len() {
            return Err(GeometryError::invalid("weight table needs matching, nonempty t and f"));
        }
        if t[0] != 0.0 || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GeometryError::invalid("weight table knots must start at 0 and increase"));
        }
        if f.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(GeometryError::invalid("weight table values must be positive"));
        }
        Ok(WeightFunction::Table { t, f })
    }

    /// Short label for reports.
    pub fn label(&self) -> String {
        match self {
            WeightFunction::Spherical { n } => format!("spherical({n})"),
            WeightFunction::Constant { value } => format!("constant({value})"),
            WeightFunction::Table { t, .. } => format!("table({} knots)", t.len()),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            WeightFunction::Spherical { n } => (1.0 + t * t).powf(-((*n as f64) + 1.0) / 2.0),
            WeightFunction::Constant { value } => *value,
            WeightFunction::Table { t: knots, f } => {
                let k = knots.partition_point(|&x| x <= t);
                if k >= knots.len() {
                    *f.last().unwrap()
                } else {
                    let (t0, t1) = (knots[k - 1], knots[k]);
                    let w = (t - t0) / (t1 - t0);
                    f[k - 1] * (1.0 - w) + f[k] * w
                }
            }
        }
    }

    /// `F(s)` in closed form. For the spherical weight the substitution
    /// `τ = s / √(1 + s²)` turns `F` into `∫_0^τ (1 - x²)^{(n-2)/2} dx`.
    pub fn cumulative(&self, s: f64) -> f64 {
        let s = s.max(0.0);
        match self {
            WeightFunction::Spherical { n } => {
                let tau = s / (1.0 + s * s).sqrt();
                match n {
                    1 => tau.asin(),
                    2 => tau,
                    3 => 0.5 * (tau * (1.0 - tau * tau).sqrt() + tau.asin()),
                    4 => tau - tau * tau * tau / 3.0,
                    _ => {
                        let e = (*n as f64 - 2.0) / 2.0;
                        quadrature::adaptive(|x: f64| (1.0 - x * x).powf(e), 0.0, tau, QUAD_TOL * 1e-2)
                    }
                }
            }
            WeightFunction::Constant { value } => value * s,
            WeightFunction::Table { t, f } => {
                let mut acc = 0.0;
                for k in 1..t.len() {
                    if s <= t[k - 1] {
                        return acc;
                    }
                    let hi = s.min(t[k]);
                    let w = (hi - t[k - 1]) / (t[k] - t[k - 1]);
                    let f_hi = f[k - 1] * (1.0 - w) + f[k] * w;
                    acc += 0.5 * (f[k - 1] + f_hi) * (hi - t[k - 1]);
                    if s <= t[k] {
                        return acc;
                    }
                }
                acc + f.last().unwrap() * (s - t.last().unwrap())
            }
        }
    }
}

/// `F(s)` for `s ≥ 0`.
pub fn cumulative_f(w: &WeightFunction, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(GeometryError::invalid(format!("F needs s >= 0, got {s}")));
    }
    Ok(w.cumulative(s))
}

/// `F(s)` by adaptive quadrature of `f`, independent of [`WeightFunction::cumulative`].
pub fn cumulative_f_quadrature(w: &WeightFunction, s: f64) -> f64 {
    let f = |t: f64| w.eval(t);
    match w {
        WeightFunction::Table { t, .. } => {
            // integrate knot to knot so kinks sit on panel edges
            let mut acc = 0.0;
            let mut lo = 0.0;
            for &k in t.iter().skip(1).chain(std::iter::once(&f64::INFINITY)) {
                let hi = k.min(s);
                if hi > lo {
                    acc += quadrature::adaptive(f, lo, hi, QUAD_TOL);
                }
                if s <= k {
                    break;
                }
                lo = k;
            }
            acc
        }
        _ => quadrature::adaptive(f, 0.0, s, QUAD_TOL),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_zero_at_zero() {
        for w in [
            WeightFunction::spherical(2).unwrap(),
            WeightFunction::spherical(3).unwrap(),
            WeightFunction::constant(2.0).unwrap(),
            WeightFunction::table(vec![0.0, 1.0], vec![1.0, 0.5]).unwrap(),
        ] {
            assert_eq!(cumulative_f(&w, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn examples() {
        let w = WeightFunction::spherical(2).unwrap();
        assert!((cumulative_f(&w, 1.0).unwrap() - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((cumulative_f_quadrature(&w, 1.0) - 1.0 / 2f64.sqrt()).abs() < 1e-10);
        let c = WeightFunction::constant(1.0).unwrap();
        assert_eq!(cumulative_f(&c, 2.5).unwrap(), 2.5);
        assert!(cumulative_f(&c, -1.0).is_err());
    }

    #[test]
    fn closed_forms_match_quadrature() {
        for n in 1..=6 {
            let w = WeightFunction::spherical(n).unwrap();
            let mut s = 0.0;
            while s <= 100.0 {
                let exact = w.cumulative(s);
                let quad = cumulative_f_quadrature(&w, s);
                assert!((exact - quad).abs() <= 1e-9, "n={n} s={s}: {exact} vs {quad}");
                s += 0.37;
            }
        }
    }

    #[test]
    fn table_weight() {
        let w = WeightFunction::table(vec![0.0, 1.0, 3.0], vec![2.0, 1.0, 1.5]).unwrap();
        assert_eq!(w.eval(0.5), 1.5);
        assert_eq!(w.eval(10.0), 1.5);
        for s in [0.3, 1.0, 2.2, 3.0, 7.5] {
            assert!((w.cumulative(s) - cumulative_f_quadrature(&w, s)).abs() < 1e-10, "s={s}");
        }
        assert!(WeightFunction::table(vec![0.5], vec![1.0]).is_err());
        assert!(WeightFunction::table(vec![0.0, 1.0], vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn strictly_increasing() {
        let w = WeightFunction::spherical(4).unwrap();
        let vals: Vec<f64> = (0..1000).map(|i| w.cumulative(i as f64 * 0.05)).collect();
        assert!(vals.windows(2).all(|p| p[1] > p[0]));
    }
}
