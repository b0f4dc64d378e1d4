use std::io::Write;

use serde::Serialize;
use sphere_planks::report::{Estimate, VerificationReport};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// What a verb produces.
pub enum Output {
    Reports(Vec<VerificationReport>),
    Estimate(Estimate),
    /// Named scalar results, e.g. `inradius`.
    Values(Vec<(&'static str, ValueCell)>),
    /// A file (body, fan); JSON only.
    Document(serde_json::Value),
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum ValueCell {
    Real(f64),
    Flag(bool),
    Vector(Vec<f64>),
    Missing(Option<()>),
}

impl ValueCell {
    fn csv(&self) -> String {
        match self {
            ValueCell::Real(x) => x.to_string(),
            ValueCell::Flag(b) => b.to_string(),
            ValueCell::Vector(v) => v.iter().map(f64::to_string).collect::<Vec<_>>().join(" "),
            ValueCell::Missing(_) => String::new(),
        }
    }
}

impl Output {
    /// Verification verdict: false when any report fails.
    pub fn passed(&self) -> bool {
        match self {
            Output::Reports(rs) => rs.iter().all(|r| r.pass),
            _ => true,
        }
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> Result<(), Failure> {
        match format {
            Format::Json => self.write_json(out),
            Format::Csv => self.write_csv(out),
        }
    }

    fn write_json(&self, out: &mut impl Write) -> Result<(), Failure> {
        let line = |out: &mut dyn Write, v: &dyn erased::Json| -> Result<(), Failure> {
            writeln!(out, "{}", v.to_json()?).map_err(Failure::io)
        };
        match self {
            Output::Reports(rs) => {
                for r in rs {
                    line(out, r)?;
                }
                Ok(())
            }
            Output::Estimate(e) => line(out, e),
            Output::Values(vs) => {
                let map: serde_json::Map<String, serde_json::Value> = vs
                    .iter()
                    .map(|(k, v)| (k.to_string(), serde_json::to_value(v).expect("plain values serialize")))
                    .collect();
                line(out, &serde_json::Value::Object(map))
            }
            Output::Document(doc) => {
                let text = serde_json::to_string_pretty(doc).map_err(|e| Failure::Internal(e.to_string()))?;
                writeln!(out, "{text}").map_err(Failure::io)
            }
        }
    }

    fn write_csv(&self, out: &mut impl Write) -> Result<(), Failure> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Failure::Internal(e.to_string());
        match self {
            Output::Reports(rs) => {
                w.write_record([
                    "claim",
                    "pass",
                    "lhs",
                    "lhs_stderr",
                    "rhs",
                    "rhs_stderr",
                    "slack",
                    "tolerance",
                    "tolerance_rule",
                    "seed",
                    "samples",
                    "inputs_digest",
                ])
                .map_err(csv_err)?;
                for r in rs {
                    let claim = serde_json::to_value(r.claim).expect("claim serializes");
                    w.write_record([
                        claim.as_str().unwrap_or_default().to_string(),
                        r.pass.to_string(),
                        r.lhs.value().to_string(),
                        r.lhs.stderr().to_string(),
                        r.rhs.value().to_string(),
                        r.rhs.stderr().to_string(),
                        r.slack.to_string(),
                        r.tolerance.to_string(),
                        r.tolerance_rule.clone(),
                        r.seed.map(|s| s.to_string()).unwrap_or_default(),
                        r.samples.map(|s| s.to_string()).unwrap_or_default(),
                        r.inputs_digest.clone(),
                    ])
                    .map_err(csv_err)?;
                }
            }
            Output::Estimate(e) => {
                let q = serde_json::to_value(e.quantity).expect("quantity serializes");
                w.write_record(["quantity", "value", "stderr", "samples", "seed"]).map_err(csv_err)?;
                w.write_record([
                    q.as_str().unwrap_or_default().to_string(),
                    e.value.to_string(),
                    e.stderr.to_string(),
                    e.samples.to_string(),
                    e.seed.to_string(),
                ])
                .map_err(csv_err)?;
            }
            Output::Values(vs) => {
                w.write_record(vs.iter().map(|(k, _)| *k)).map_err(csv_err)?;
                w.write_record(vs.iter().map(|(_, v)| v.csv())).map_err(csv_err)?;
            }
            Output::Document(_) => {
                return Err(Failure::Input("this verb writes a JSON file; --format csv is not available".into()))
            }
        }
        w.flush().map_err(Failure::io)
    }
}

mod erased {
    use crate::Failure;

    pub trait Json {
        fn to_json(&self) -> Result<String, Failure>;
    }

    impl<T: serde::Serialize> Json for T {
        fn to_json(&self) -> Result<String, Failure> {
            serde_json::to_string(self).map_err(|e| Failure::Internal(e.to_string()))
        }
    }
}
