use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use sphere_planks::body::{circumradius, inradius, make_body, polar};
use sphere_planks::covering::{arcs_cover_circle, random_lune_fan};
use sphere_planks::generate::{random_body, random_polytope};
use sphere_planks::gnomonic::{project_point, unproject_point, ProjectionFrame};
use sphere_planks::io::parse_angle;
use sphere_planks::minnorm::min_norm_point;
use sphere_planks::report::VerificationReport;
use sphere_planks::rng::StreamSeed;
use sphere_planks::seb::smallest_enclosing_ball;
use sphere_planks::sphere::{
    geodesic_distance, sample_uniform_cap, sample_uniform_sphere, SphericalCap, UnitVector,
};
use sphere_planks::weight::{cumulative_f_quadrature, WeightFunction};
use sphere_planks::Vector;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 48,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn geodesic_metric(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = StreamSeed::new(seed).rng();
        let x = sample_uniform_sphere(n, &mut rng).unwrap();
        let y = sample_uniform_sphere(n, &mut rng).unwrap();
        let z = sample_uniform_sphere(n, &mut rng).unwrap();
        let d = |a: &UnitVector, b: &UnitVector| geodesic_distance(a, b).unwrap();
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z) + 1e-12);
        prop_assert!((0.0..=PI).contains(&d(&x, &y)));
        prop_assert!((d(&x, &x.antipode()) - PI).abs() < 1e-12);
    }

    #[test]
    fn rep_round_trip(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = StreamSeed::new(seed).rng();
        let body = random_body(n, &mut rng).unwrap();
        let from_h = make_body(n, Some(body.h_normals().to_vec()), None).unwrap();
        let from_v = make_body(n, None, Some(from_h.v_generators().to_vec())).unwrap();
        // same set: each generator satisfies each facet of the other description
        for u in from_v.h_normals() {
            for v in body.v_generators() {
                prop_assert!(u.dot(v) <= 1e-9);
            }
        }
        for u in body.h_normals() {
            for v in from_v.v_generators() {
                prop_assert!(u.dot(v) <= 1e-9);
            }
        }
        let p = polar(&polar(&body));
        prop_assert_eq!(p.h_normals(), body.h_normals());
        prop_assert_eq!(p.v_generators(), body.v_generators());
    }

    #[test]
    fn polar_radius_duality(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = StreamSeed::new(seed).rng();
        let body = random_polytope(n, &mut rng).unwrap();
        let r_polar = inradius(&polar(&body)).unwrap().radius;
        let outer = circumradius(&body).radius;
        prop_assert!((r_polar - (FRAC_PI_2 - outer)).abs() <= 1e-7);
        let r_back = inradius(&body).unwrap().radius;
        let outer_polar = circumradius(&polar(&body)).radius;
        prop_assert!((r_back - (FRAC_PI_2 - outer_polar)).abs() <= 1e-7);
    }

    #[test]
    fn inball_is_inside(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = StreamSeed::new(seed).rng();
        let body = random_body(n, &mut rng).unwrap();
        let ib = inradius(&body).unwrap();
        let cap = SphericalCap::new(ib.center.clone(), (ib.radius - 1e-7).max(0.0)).unwrap();
        for _ in 0..2000 {
            let x = sample_uniform_cap(&cap, &mut rng);
            prop_assert!(body.contains(&x));
        }
        // circumcap contains every generator
        let cb = circumradius(&body);
        if let Some(c) = cb.center {
            for v in body.v_generators() {
                prop_assert!(geodesic_distance(&c, v).unwrap() <= cb.radius + 1e-7);
            }
        }
    }

    #[test]
    fn extra_constraint_never_grows_inradius(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = StreamSeed::new(seed).rng();
        let mut body = random_polytope(n, &mut rng).unwrap();
        let mut r = inradius(&body).unwrap().radius;
        for _ in 0..4 {
            let mut h = body.h_normals().to_vec();
            h.push(sample_uniform_sphere(n, &mut rng).unwrap());
            let Ok(next) = make_body(n, Some(h), None) else { break };
            if !next.is_body() {
                break;
            }
            let r2 = inradius(&next).unwrap().radius;
            prop_assert!(r2 <= r + 1e-9);
            body = next;
            r = r2;
        }
    }

    #[test]
    fn fan_sum_and_widening(seed in any::<u64>(), n in 2usize..=4, m in 3usize..10, delta in 0.0..0.05f64) {
        let mut rng = StreamSeed::new(seed).rng();
        let fan = random_lune_fan(n, m, PI - 0.1, &mut rng).unwrap();
        prop_assert!((fan.inradius_sum() - PI).abs() <= 1e-12);
        prop_assert_eq!(arcs_cover_circle(&fan.intervals()), Ok(()));
        let wide = fan.widened(delta).unwrap();
        prop_assert!((wide.inradius_sum() - fan.inradius_sum() - m as f64 * delta).abs() <= 1e-12);
        let mut holed = fan.intervals();
        holed.remove(seed as usize % m);
        prop_assert!(arcs_cover_circle(&holed).is_err());
    }

    #[test]
    fn symbolic_angles(p in -12i32..12, q in 1i32..12) {
        let a = parse_angle(&format!("{p}pi/{q}")).unwrap();
        prop_assert_eq!(a, p as f64 * PI / q as f64);
        let b = parse_angle(&format!("{p}*pi/{q}")).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn gnomonic_round_trip(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = StreamSeed::new(seed).rng();
        let e = sample_uniform_sphere(n, &mut rng).unwrap();
        let frame = ProjectionFrame::new(e.clone());
        let cap = SphericalCap::new(e, 1.4).unwrap();
        let x = sample_uniform_cap(&cap, &mut rng);
        let y = project_point(&frame, &x).unwrap();
        let back = unproject_point(&frame, &y);
        prop_assert!((back.as_vector() - x.as_vector()).norm() < 1e-12);
    }

    #[test]
    fn min_norm_point_optimality(seed in any::<u64>(), d in 2usize..=5, k in 1usize..9) {
        let mut rng = StreamSeed::new(seed).rng();
        let pts: Vec<Vector> = (0..k)
            .map(|_| sample_uniform_sphere(d - 1, &mut rng).unwrap().into_vector() + Vector::from_element(d, 0.3))
            .collect();
        let m = min_norm_point(&pts);
        let p = &m.point;
        for x in &pts {
            prop_assert!(p.dot(&(x - p)) >= -1e-9);
        }
        prop_assert!((m.weights.iter().map(|w| w.1).sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn enclosing_ball_is_minimal(seed in any::<u64>(), d in 2usize..=4, k in 1usize..12) {
        let mut rng = StreamSeed::new(seed).rng();
        let pts: Vec<Vector> = (0..k)
            .map(|_| sample_uniform_sphere(d - 1, &mut rng).unwrap().into_vector() * 2.0)
            .collect();
        let b = smallest_enclosing_ball(&pts).unwrap();
        for x in &pts {
            prop_assert!((x - &b.center).norm() <= b.radius * (1.0 + 1e-9) + 1e-12);
        }
        // no other point of the hull encloses them with a smaller radius: the center lies
        // in the hull of the points on the boundary
        let support: Vec<Vector> = pts
            .iter()
            .filter(|x| ((*x - &b.center).norm() - b.radius).abs() <= 1e-7 * b.radius.max(1.0))
            .map(|x| x - &b.center)
            .collect();
        prop_assert!(min_norm_point(&support).norm() <= 1e-7 * b.radius.max(1.0));
    }

    #[test]
    fn cumulative_weight_matches_quadrature(s in 0.0..50.0f64, n in 1usize..=4) {
        let w = WeightFunction::spherical(n).unwrap();
        prop_assert!((w.cumulative(s) - cumulative_f_quadrature(&w, s)).abs() <= 1e-9);
        prop_assert!(w.cumulative(s) <= w.cumulative(s + 0.1));
    }

    #[test]
    fn fan_boundary_angles_span_tau(seed in any::<u64>()) {
        let mut rng = StreamSeed::new(seed).rng();
        let fan = random_lune_fan(2, 5, PI - 0.01, &mut rng).unwrap();
        let a = fan.boundary_angles();
        prop_assert!((a[a.len() - 1] - a[0] - TAU).abs() <= 1e-12);
    }
}

#[test]
fn report_json_round_trip() {
    let body = sphere_planks::body::octant(2).unwrap();
    let r = sphere_planks::measure::verify_thm2(&body, 10_000, StreamSeed::new(3)).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    let back: VerificationReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
    assert_eq!(serde_json::to_string(&back).unwrap(), json);
}
