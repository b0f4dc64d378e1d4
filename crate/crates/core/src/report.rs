//! Estimates and verification reports shared by every checker.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Volume,
    MeanWidth,
    Uf,
    #[serde(rename = "measure_Sj")]
    MeasureSj,
    /// Average of `g(φ)` over a spherical image `S_j`.
    SjAverage,
}

/// A sampled (or exactly known) value with its standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub quantity: Quantity,
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl Estimate {
    /// A value known in closed form (stderr 0, no samples).
    pub fn exact(quantity: Quantity, value: f64) -> Self {
        Estimate {
            quantity,
            value,
            stderr: 0.0,
            samples: 0,
            seed: 0,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Estimate {
            value: self.value * factor,
            stderr: self.stderr * factor.abs(),
            ..self.clone()
        }
    }
}

/// Combined standard error of independent estimates.
pub fn combined_stderr(parts: &[f64]) -> f64 {
    parts.iter().map(|s| s * s).sum::<f64>().sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Term {
    Exact { value: f64 },
    Estimate(Estimate),
}

impl Term {
    pub fn value(&self) -> f64 {
        match self {
            Term::Exact { value } => *value,
            Term::Estimate(e) => e.value,
        }
    }

    pub fn stderr(&self) -> f64 {
        match self {
            Term::Exact { .. } => 0.0,
            Term::Estimate(e) => e.stderr,
        }
    }
}

impl From<f64> for Term {
    fn from(value: f64) -> Self {
        Term::Exact { value }
    }
}

impl From<Estimate> for Term {
    fn from(e: Estimate) -> Self {
        Term::Estimate(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    /// `Σ r(K_i) ≥ r(B)` for covers of a cap with radius ≥ π/2.
    CoveringBound,
    /// Probabilistic certificate that the bodies cover the cap.
    Covering,
    /// The antipodal-cap reduction of the covering bound to full-sphere covers.
    AntipodalReduction,
    /// `σ(K) ≤ (σ_n/π) r(K)`.
    VolumeInradius,
    /// `(σ_n/π) r` for lunes.
    LuneVolume,
    /// `σ_n - 2σ(K*) = 2U(K)`.
    PolarityIdentity,
    /// `U(K) = U_f(Π(K))` for the spherical weight.
    ProjectionConsistency,
    /// Normal-cone average of `g` versus the hemisphere average `C(R, f)`.
    NormalConeAverage,
    /// Segments minimize `U_f` among sets with a given circumball.
    SegmentMinimality,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Detail {
    Flag(bool),
    Count(u64),
    Real(f64),
    Text(String),
    Reals(Vec<f64>),
    Points(Vec<Vec<f64>>),
}

/// Outcome of one check. `pass` holds exactly when `slack ≥ -tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: Claim,
    pub lhs: Term,
    pub rhs: Term,
    pub slack: f64,
    pub tolerance: f64,
    pub tolerance_rule: String,
    pub pass: bool,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub inputs_digest: String,
    pub details: BTreeMap<String, Detail>,
}

impl VerificationReport {
    pub fn new(
        claim: Claim,
        lhs: impl Into<Term>,
        rhs: impl Into<Term>,
        slack: f64,
        tolerance: f64,
        tolerance_rule: impl Into<String>,
    ) -> Self {
        VerificationReport {
            claim,
            lhs: lhs.into(),
            rhs: rhs.into(),
            slack,
            tolerance,
            tolerance_rule: tolerance_rule.into(),
            pass: slack >= -tolerance,
            seed: None,
            samples: None,
            inputs_digest: String::new(),
            details: BTreeMap::new(),
        }
    }

    pub fn with_sampling(mut self, seed: u64, samples: u64) -> Self {
        self.seed = Some(seed);
        self.samples = Some(samples);
        self
    }

    pub fn with_digest(mut self, digest: String) -> Self {
        self.inputs_digest = digest;
        self
    }

    pub fn with_detail(mut self, key: &str, value: Detail) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    /// Force a failure (e.g. a sub-check failed) while keeping the numbers.
    pub fn fail_because(mut self, reason: &str) -> Self {
        self.pass = false;
        self.details.insert("failure".to_string(), Detail::Text(reason.to_string()));
        self
    }
}

/// SHA-256 over the exact bit patterns of the inputs of a check.
#[derive(Clone, Default)]
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn new(tag: &str) -> Self {
        let mut h = Sha256::new();
        h.update(tag.as_bytes());
        InputDigest(h)
    }

    pub fn reals(mut self, xs: &[f64]) -> Self {
        for x in xs {
            self.0.update(x.to_bits().to_le_bytes());
        }
        self
    }

    pub fn count(mut self, k: u64) -> Self {
        self.0.update(k.to_le_bytes());
        self
    }

    pub fn vectors<'a>(mut self, vs: impl IntoIterator<Item = &'a [f64]>) -> Self {
        for v in vs {
            self = self.count(v.len() as u64).reals(v);
        }
        self
    }

    pub fn finish(self) -> String {
        self.0.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_follows_slack() {
        let r = VerificationReport::new(Claim::VolumeInradius, 1.0, 2.0, -0.1, 0.2, "3 sigma");
        assert!(r.pass);
        let r = VerificationReport::new(Claim::VolumeInradius, 1.0, 2.0, -0.3, 0.2, "3 sigma");
        assert!(!r.pass);
    }

    #[test]
    fn digest_is_stable() {
        let a = InputDigest::new("x").reals(&[1.0, 2.0]).finish();
        let b = InputDigest::new("x").reals(&[1.0, 2.0]).finish();
        let c = InputDigest::new("x").reals(&[1.0, 2.0000000000000004]).finish();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn term_serialization_is_tagged() {
        let t = Term::from(Estimate::exact(Quantity::MeasureSj, 1.5));
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.starts_with(r#"{"kind":"estimate","quantity":"measure_Sj""#), "{s}");
    }
}
