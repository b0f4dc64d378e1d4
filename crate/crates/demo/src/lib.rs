//! wasm-bindgen exports for the browser demo in `www/`. Each export returns a JSON string.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;
use sphere_planks::body::inradius;
use sphere_planks::covering::LuneFan;
use sphere_planks::generate::{random_lune, random_polytope};
use sphere_planks::gnomonic::{uf, EuclideanPolytope, UfMode};
use sphere_planks::io::parse_angle;
use sphere_planks::linhart::{constant_c, g, uf_lower_bound};
use sphere_planks::measure::{lune_volume, volume_mc};
use sphere_planks::rng::StreamSeed;
use sphere_planks::weight::WeightFunction;
use sphere_planks::Vector;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct LuneRow {
    start: f64,
    end: f64,
    inradius: f64,
    clipped: f64,
}

#[derive(Serialize)]
struct FanProfile {
    lunes: Vec<LuneRow>,
    sum_inradii: f64,
    psi: f64,
    hemisphere_sum: f64,
}

/// Lune fan from comma-separated gaps (`"pi,pi/2,pi/2"`), widened by `widen` per side,
/// with the clipped inradii for the hemisphere centered at angle `psi` of the fan plane.
pub fn fan_profile_json(gaps: &str, widen: f64, psi: f64) -> Result<String, String> {
    let gaps = gaps
        .split(',')
        .map(parse_angle)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let fan = LuneFan::from_gaps(2, 0.0, &gaps)
        .and_then(|f| f.widened(widen))
        .map_err(|e| e.to_string())?;
    let half = (psi - FRAC_PI_2, psi + FRAC_PI_2);
    let lunes = fan
        .intervals()
        .into_iter()
        .map(|(a, b)| LuneRow {
            start: a,
            end: b,
            inradius: (b - a) / 2.0,
            clipped: sphere_planks::covering::circular_overlap((a, b), half) / 2.0,
        })
        .collect();
    to_json(&FanProfile {
        lunes,
        sum_inradii: fan.inradius_sum(),
        psi,
        hemisphere_sum: fan.hemisphere_inradius_sum(psi),
    })
}

#[derive(Serialize)]
struct VolumePoint {
    inradius: f64,
    volume: f64,
    stderr: f64,
    lune: bool,
}

#[derive(Serialize)]
struct VolumeProfile {
    dim: usize,
    /// `σ_n / π`.
    slope: f64,
    points: Vec<VolumePoint>,
}

/// `count` random polytopes and `count / 4` lunes with their sampled volume and inradius.
pub fn volume_profile_json(n: usize, count: usize, samples: u64, seed: u64) -> Result<String, String> {
    let base = StreamSeed::new(seed);
    let mut rng = base.rng();
    let mut points = Vec::new();
    let err = |e: sphere_planks::error::GeometryError| e.to_string();
    for i in 0..count + count / 4 {
        let lune = i >= count;
        let body = if lune {
            let angle = 0.05 + (PI - 0.05) * (i - count) as f64 / (count / 4).max(1) as f64;
            random_lune(n, angle, &mut rng).map_err(err)?.1
        } else {
            random_polytope(n, &mut rng).map_err(err)?
        };
        let r = inradius(&body).map_err(err)?.radius;
        let v = volume_mc(&body, samples, base.substream(i as u64)).map_err(err)?;
        points.push(VolumePoint {
            inradius: r,
            volume: v.value,
            stderr: v.stderr,
            lune,
        });
    }
    to_json(&VolumeProfile {
        dim: n,
        slope: lune_volume(n, 1.0).map_err(err)?,
        points,
    })
}

#[derive(Serialize)]
struct LinhartProfile {
    phi: Vec<f64>,
    g: Vec<f64>,
    c: f64,
    lower_bound: f64,
    segment_uf: f64,
}

/// `g(φ) = F(R cos φ)` on `[0, π/2]`, its hemisphere average `C(R, f)`, and `U_f` of the
/// diameter segment in the plane. `weight` is `"spherical"` or `"constant"`.
pub fn linhart_profile_json(radius: f64, weight: &str) -> Result<String, String> {
    let n = 2;
    let w = match weight {
        "spherical" => WeightFunction::spherical(n),
        "constant" => WeightFunction::constant(1.0),
        other => return Err(format!("unknown weight {other:?}")),
    }
    .map_err(|e| e.to_string())?;
    let err = |e: sphere_planks::error::GeometryError| e.to_string();
    let phi: Vec<f64> = (0..=90).map(|i| FRAC_PI_2 * i as f64 / 90.0).collect();
    let gs = phi.iter().map(|&p| g(radius, &w, p)).collect();
    let seg = EuclideanPolytope::segment(radius, &Vector::from_column_slice(&[1.0, 0.0])).map_err(err)?;
    to_json(&LinhartProfile {
        phi,
        g: gs,
        c: constant_c(radius, &w, n).map_err(err)?,
        lower_bound: uf_lower_bound(radius, &w, n).map_err(err)?,
        segment_uf: uf(&seg, &w, UfMode::Quadrature).map_err(err)?.value,
    })
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn fan_profile(gaps: &str, widen: f64, psi: f64) -> Result<String, JsError> {
    fan_profile_json(gaps, widen, psi).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn volume_profile(n: usize, count: usize, samples: u32, seed: u32) -> Result<String, JsError> {
    volume_profile_json(n, count, samples as u64, seed as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn linhart_profile(radius: f64, weight: &str) -> Result<String, JsError> {
    linhart_profile_json(radius, weight).map_err(|e| JsError::new(&e))
}
