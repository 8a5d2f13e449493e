mod common;

use common::*;
use proptest::prelude::*;
use spdbound::linalg;
use spdbound::spd::*;

fn spd(r: &mut rand_chacha::ChaCha8Rng, n: usize, model: Model) -> SpdMatrix {
    make_spd(&random_spd(r, n), model).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs()))
}

#[test]
fn congruence_invariance() {
    let mut r = rng(1);
    for case in 0..300 {
        let n = 2 + case % 4;
        let (x, y) = (spd(&mut r, n, Model::E), spd(&mut r, n, Model::E));
        let g = random_frame(&mut r, n, 5.0);
        let gx = make_spd(&(&g * x.matrix() * g.transpose()), Model::E).unwrap();
        let gy = make_spd(&(&g * y.matrix() * g.transpose()), Model::E).unwrap();
        let a = complex_distance(&x, &y).unwrap();
        let b = complex_distance(&gx, &gy).unwrap();
        assert!(close(&a.psis, &b.psis, 1e-9), "case {case}: {:?} vs {:?}", a.psis, b.psis);
    }
}

#[test]
fn triangle_theorem_and_metric() {
    let mut r = rng(2);
    for case in 0..1000 {
        let n = 1 + case % 5;
        let (x, y, z) = (spd(&mut r, n, Model::E), spd(&mut r, n, Model::E), spd(&mut r, n, Model::E));
        let psi = complex_distance(&x, &y).unwrap();
        let phi = complex_distance(&y, &z).unwrap();
        let theta = complex_distance(&x, &z).unwrap();
        assert!(triangle_membership(&theta, &psi, &phi).unwrap(), "case {case}");
        assert!(theta.rho() <= psi.rho() + phi.rho() + 1e-8);
    }
}

#[test]
fn distance_is_antisymmetric_in_order() {
    let mut r = rng(3);
    for n in 1..=5 {
        let (x, y) = (spd(&mut r, n, Model::PE), spd(&mut r, n, Model::PE));
        let a = complex_distance(&x, &y).unwrap();
        let mut b: Vec<f64> = complex_distance(&y, &x).unwrap().psis.iter().map(|p| -p).collect();
        b.reverse();
        assert!(close(&a.psis, &b, 1e-9));
        assert!(a.psis.iter().sum::<f64>().abs() < 1e-9);
    }
}

#[test]
fn cartan_frames_are_flat() {
    let mut r = rng(4);
    for _ in 0..50 {
        let n = 3;
        let frame = CartanFrame { frame: random_frame(&mut r, n, 8.0) };
        let s: Vec<f64> = (0..n).map(|_| gaussian(&mut r)).collect();
        let t: Vec<f64> = (0..n).map(|_| gaussian(&mut r)).collect();
        let d = riemannian_distance(&frame.point(&s, Model::E), &frame.point(&t, Model::E)).unwrap();
        let e = s.iter().zip(&t).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        assert!((d - e).abs() < 1e-9, "{d} vs {e}");
        assert!(cartan_contains(&frame, &frame.point(&s, Model::E)).unwrap());
    }
}

/// Ostrowski: the j-th eigenvalue of g D gᵀ is d_j times something in [σ_min², σ_max²] of g,
/// so τ_j(t) - φ_j t stays bounded and τ_j(t)/t tends to φ_j.
#[test]
fn log_spectrum_grows_like_velocity() {
    let mut r = rng(5);
    for case in 0..100 {
        let n = 2 + case % 3;
        let exps: Vec<f64> = (0..n).map(|_| gaussian(&mut r)).collect();
        let frame = random_frame(&mut r, n, 10.0);
        let sv = frame.clone().singular_values();
        let (lo, hi) = (2.0 * sv.min().ln(), 2.0 * sv.max().ln());
        let g = Geodesic::from_exponents(&frame, &exps, Model::E).unwrap();
        // keep the eigenvalue spread well inside double precision
        let spread = g.expanded().first().unwrap() - g.expanded().last().unwrap();
        for t in [1.0, 2.0, 10.0 / spread.max(0.2)] {
            let x = geodesic_eval(&g, t);
            let (vals, _) = linalg::sym_eigen(x.matrix());
            let mut tau: Vec<f64> = vals.iter().map(|v| v.ln()).collect();
            tau.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (a, phi) in tau.iter().zip(g.expanded()) {
                let gap = a - phi * t;
                assert!(gap >= lo - 1e-6 && gap <= hi + 1e-6, "case {case}: gap {gap} outside [{lo}, {hi}]");
            }
        }
    }
}

#[test]
fn geodesic_through_hits_both_points() {
    let mut r = rng(6);
    for case in 0..100 {
        let n = 1 + case % 4;
        let model = if case % 2 == 0 { Model::E } else { Model::PE };
        let (x, y) = (spd(&mut r, n, model), spd(&mut r, n, model));
        if n == 1 && model == Model::PE {
            assert_eq!(geodesic_through(&x, &y).unwrap_err(), spdbound::Error::CoincidentPoints);
            continue;
        }
        let g = geodesic_through(&x, &y).unwrap();
        assert!(geodesic_eval(&g, 0.0).approx_eq(&x, 1e-9), "case {case}");
        assert!(geodesic_eval(&g, 1.0).approx_eq(&y, 1e-9), "case {case}");
    }
}

proptest! {
    #[test]
    fn diagonal_distance_is_log_ratio(a in proptest::collection::vec(-3.0f64..3.0, 1..6), seed in 0u64..1000) {
        let mut r = rng(seed);
        let b: Vec<f64> = a.iter().map(|_| gaussian(&mut r)).collect();
        let da = Mat::from_diagonal(&nalgebra::DVector::from_iterator(a.len(), a.iter().map(|x| x.exp())));
        let db = Mat::from_diagonal(&nalgebra::DVector::from_iterator(b.len(), b.iter().map(|x| x.exp())));
        let d = complex_distance(&make_spd(&da, Model::E).unwrap(), &make_spd(&db, Model::E).unwrap()).unwrap();
        let mut want: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        want.sort_by(|p, q| q.partial_cmp(p).unwrap());
        prop_assert!(close(&d.psis, &want, 1e-9));
    }

    #[test]
    fn distance_to_self_vanishes(seed in 0u64..1000, n in 1usize..6) {
        let mut r = rng(seed);
        let x = spd(&mut r, n, Model::E);
        prop_assert!(riemannian_distance(&x, &x).unwrap() < 1e-9);
    }
}
