use num_complex::Complex64;
use proptest::prelude::*;

use loopvir::loewner::*;

fn i(y: f64) -> Complex64 {
    Complex64::new(0.0, y)
}

#[test]
fn zero_driver_closed_form() {
    let w = DrivingFunction::constant_zero(1.0, 1e-3);
    let z = i(3.0);
    let g = forward_map(&w, z, 1.0).unwrap();
    let exact = (z * z + 4.0).sqrt();
    assert!((g - exact).norm() < 1e-6, "{g} vs {exact}");
    assert!((g - i(5f64.sqrt())).norm() < 1e-6);
    // closed form at intermediate times and off the axis
    for (z, t) in [
        (Complex64::new(1.0, 1.0), 0.5),
        (Complex64::new(-2.0, 0.5), 1.0),
    ] {
        let g = forward_map(&w, z, t).unwrap();
        let mut e = (z * z + 4.0 * t).sqrt();
        if e.im < 0.0 {
            e = -e;
        }
        assert!((g - e).norm() < 1e-6, "{z} at {t}: {g} vs {e}");
    }
}

#[test]
fn time_zero_is_identity() {
    let w = DrivingFunction::constant_zero(1.0, 1e-2);
    let z = Complex64::new(0.3, 0.7);
    assert_eq!(forward_map(&w, z, 0.0).unwrap(), z);
}

#[test]
fn tip_point_is_swallowed_near_one() {
    let w = DrivingFunction::constant_zero(1.0, 1e-4);
    match forward_map(&w, i(2.0), 1.0) {
        // |g - W| = 2 sqrt(1 - t) drops below 10 sqrt(dt) = 0.1 at t = 1 - 1/400
        Err(LoewnerError::Swallowed { time, .. }) => {
            assert!(time <= 1.0 && time > 0.997, "{time}")
        }
        other => panic!("expected swallowing, got {other:?}"),
    }
}

#[test]
fn rejects_lower_half_plane_and_bad_times() {
    let w = DrivingFunction::constant_zero(1.0, 1e-2);
    assert!(forward_map(&w, Complex64::new(0.0, -1.0), 0.5).is_err());
    assert!(forward_map(&w, i(1.0), 2.0).is_err());
    assert!(DrivingFunction::new(0.1, vec![1.0, 2.0]).is_err());
    assert!(DrivingFunction::new(0.0, vec![0.0]).is_err());
}

#[test]
fn zero_driver_trace_is_vertical() {
    let w = DrivingFunction::constant_zero(1.0, 1e-4);
    let t = tip(&w, w.steps());
    assert!((t - i(2.0)).norm() < 1e-3, "{t}");
    let small = DrivingFunction::constant_zero(1.0, 1e-2);
    let tr = trace(&small);
    assert_eq!(tr.points[0], Complex64::new(0.0, 0.0));
    for (k, p) in tr.points.iter().enumerate() {
        assert!(p.re.abs() < 1e-12);
        let expected = 2.0 * (k as f64 * 1e-2).sqrt();
        assert!((p.im - expected).abs() < 1e-9, "step {k}");
    }
}

#[test]
fn constant_driver_translates() {
    let dt = 1e-2;
    let shift = 0.7;
    let zero = DrivingFunction::constant_zero(0.5, dt);
    // W = 0 at t = 0 and w afterwards
    let w = DrivingFunction::from_fn(0.5, dt, |t| if t > 0.0 { shift } else { 0.0 }).unwrap();
    let a = trace(&zero);
    let b = trace(&w);
    for k in 1..a.points.len() {
        assert!((b.points[k] - a.points[k] - shift).norm() < 1e-12);
    }
}

#[test]
fn zero_driver_scaling() {
    let r = 1.7;
    let w = DrivingFunction::constant_zero(1.0, 1e-3);
    let scaled = w.rescaled(r);
    let a = tip(&w, w.steps());
    let b = tip(&scaled, scaled.steps());
    assert!((b - a * r).norm() < 1e-12);
}

#[test]
fn sampling_is_deterministic() {
    let a = sample_sle_driving(2.0, 1.0, 1e-2, 42).unwrap();
    let b = sample_sle_driving(2.0, 1.0, 1e-2, 42).unwrap();
    let c = sample_sle_driving(2.0, 1.0, 1e-2, 43).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    assert_ne!(a.samples(), c.samples());
    assert_eq!(a.samples()[0], 0.0);
    assert_eq!(a.steps(), 100);
}

#[test]
fn sampled_variance() {
    let (kappa, t, dt, n) = (8.0 / 3.0, 1.0, 0.01, 10_000);
    let ends: Vec<f64> = (0..n)
        .map(|s| {
            *sample_sle_driving(kappa, t, dt, s)
                .unwrap()
                .samples()
                .last()
                .unwrap()
        })
        .collect();
    let mean = ends.iter().sum::<f64>() / n as f64;
    let var = ends.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    let se = kappa * t * (2.0 / (n as f64 - 1.0)).sqrt();
    assert!((var - kappa * t).abs() < 3.0 * se, "{var} vs {}", kappa * t);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn capacity_normalization(seed in 0u64..1000) {
        let w = sample_sle_driving(2.0, 1.0, 1e-2, seed).unwrap();
        prop_assume!(w.samples().iter().all(|x| x.abs() < 5.0));
        for radius in [50.0, 100.0] {
            for arg in [0.5f64, 1.5, 2.5] {
                let z = Complex64::from_polar(radius, arg);
                let g = forward_map(&w, z, 1.0).unwrap();
                let rest = g - z - 2.0 / z;
                // O(1/|z|^2) with constant bounded by |W| and T
                prop_assert!(rest.norm() * radius * radius < 50.0, "{}", rest.norm());
            }
        }
    }

    #[test]
    fn concatenation(seed in 0u64..1000, re in -2.0f64..2.0, im in 0.5f64..3.0) {
        let w = sample_sle_driving(1.0, 1.0, 1e-2, seed).unwrap();
        let z = Complex64::new(re, im);
        let full = forward_map(&w, z, 1.0);
        let half_steps = w.steps() / 2;
        let first = forward_map(&w, z, 0.5);
        if let (Ok(full), Ok(first)) = (full, first) {
            let base = w.samples()[half_steps];
            if let Ok(h) = forward_map(&w.shifted(half_steps), first - base, 0.5) {
                let second = h + base;
                prop_assert!((full - second).norm() < 1e-8, "{} vs {}", full, second);
            }
        }
    }

    #[test]
    fn trace_in_closed_upper_half_plane(seed in 0u64..1000) {
        let w = sample_sle_driving(3.0, 0.2, 2e-3, seed).unwrap();
        let tr = trace(&w);
        prop_assert_eq!(tr.points[0], Complex64::new(0.0, 0.0));
        for p in &tr.points {
            prop_assert!(p.im >= 0.0);
        }
    }
}
