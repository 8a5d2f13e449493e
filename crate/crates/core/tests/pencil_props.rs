mod common;

use common::*;
use rand::Rng;
use spdbound::pencil::*;
use spdbound::spd::{Geodesic, Model};

fn classes(a: &Geodesic, b: &Geodesic) -> (bool, bool, bool) {
    (same_finite_pencil(a, b).unwrap(), same_solvable_pencil(a, b).unwrap(), same_null_pencil(a, b).unwrap())
}

#[test]
fn shapes_land_in_predicted_classes() {
    let mut r = rng(11);
    for case in 0..300 {
        let n = 2 + case % 3;
        let g = pencil_geodesic(&mut r, n, Model::E);
        let null = act_in_frame(&g, &shape_matrix(&mut r, &g.blocks, Shape::Null));
        assert_eq!(classes(&g, &null), (true, true, true), "case {case} null");
        let solv = act_in_frame(&g, &shape_matrix(&mut r, &g.blocks, Shape::Solvable));
        assert_eq!(classes(&g, &solv), (true, true, false), "case {case} solvable {:?} {:?}", g.blocks, g.values);
        let fin = act_in_frame(&g, &shape_matrix(&mut r, &g.blocks, Shape::Finite));
        let expect_solvable = g.blocks.iter().all(|&b| b == 1);
        let (f, s, _) = classes(&g, &fin);
        assert!(f, "case {case} finite");
        if !expect_solvable {
            assert!(!s, "case {case}: non-scalar diagonal block kept the solvable pencil");
        }
    }
}

/// Pairs drawn from a mix of generators, so that every class occurs with both answers.
#[test]
fn nesting_and_equivalence_laws() {
    let mut r = rng(12);
    let mut seen = [0usize; 4];
    for case in 0..600 {
        let n = 2 + case % 3;
        let model = if case % 4 == 3 { Model::PE } else { Model::E };
        let a = pencil_geodesic(&mut r, n, model);
        let pick = |r: &mut rand_chacha::ChaCha8Rng, g: &Geodesic| -> Geodesic {
            match r.gen_range(0..5) {
                0 => act_in_frame(g, &shape_matrix(r, &g.blocks, Shape::Null)),
                1 => act_in_frame(g, &shape_matrix(r, &g.blocks, Shape::Solvable)),
                2 => act_in_frame(g, &shape_matrix(r, &g.blocks, Shape::Finite)),
                3 => g.shifted(r.gen_range(-2.0..2.0)),
                _ => Geodesic::new(random_frame(r, g.n(), 10.0), g.blocks.clone(), g.values.clone(), g.model).unwrap(),
            }
        };
        let b = pick(&mut r, &a);
        let c = pick(&mut r, &b);
        let (f, s, nu) = classes(&a, &b);
        assert!(!nu || s, "case {case}: null but not solvable");
        assert!(!s || f, "case {case}: solvable but not finite");
        seen[usize::from(f) + usize::from(s) + usize::from(nu)] += 1;

        let preds: [fn(&Geodesic, &Geodesic) -> spdbound::Result<bool>; 3] =
            [same_finite_pencil, same_solvable_pencil, same_null_pencil];
        for p in preds {
            assert!(p(&a, &a).unwrap());
            assert_eq!(p(&a, &b).unwrap(), p(&b, &a).unwrap(), "case {case}: symmetry");
            if p(&a, &b).unwrap() && p(&b, &c).unwrap() {
                assert!(p(&a, &c).unwrap(), "case {case}: transitivity");
            }
        }
    }
    assert!(seen.iter().all(|&k| k > 0), "class mix {seen:?}");
}

#[test]
fn null_data_ignores_the_origin() {
    let mut r = rng(13);
    for case in 0..100 {
        let g = pencil_geodesic(&mut r, 2 + case % 3, Model::E);
        let a = null_pencil_data(&g, 0.0);
        let b = null_pencil_data(&g, r.gen_range(-3.0..3.0));
        assert!(null_data_equal(&a, &b), "case {case}");
    }
}

#[test]
fn pencil_through_point_passes_the_point() {
    let mut r = rng(14);
    for case in 0..100 {
        let n = 2 + case % 3;
        let g = pencil_geodesic(&mut r, n, Model::E);
        let x = spdbound::spd::make_spd(&random_spd(&mut r, n), Model::E).unwrap();
        let mu = pencil_through_point(&g, &x).unwrap();
        assert!(spdbound::spd::geodesic_eval(&mu, 0.0).approx_eq(&x, 1e-8), "case {case}");
        assert!(same_finite_pencil(&g, &mu).unwrap());
    }
}

/// Distance at infinity vanishes inside a null pencil and is symmetric in general.
#[test]
fn distance_at_infinity_laws() {
    let mut r = rng(15);
    for case in 0..100 {
        let g = pencil_geodesic(&mut r, 2 + case % 3, Model::E);
        let null = act_in_frame(&g, &shape_matrix(&mut r, &g.blocks, Shape::Null));
        assert!(distance_at_infinity(&g, &null).unwrap() < 1e-7, "case {case}");
        let fin = act_in_frame(&g, &shape_matrix(&mut r, &g.blocks, Shape::Finite));
        let (d1, d2) = (distance_at_infinity(&g, &fin).unwrap(), distance_at_infinity(&fin, &g).unwrap());
        assert!((d1 - d2).abs() < 1e-7 * (1.0 + d1), "case {case}: {d1} vs {d2}");
    }
}

/// Complex distance from a fixed point to μ(t), divided by t, approaches the velocity;
/// the deviation is bounded by the fixed offsets of the Ostrowski sandwich.
#[test]
fn distance_from_fixed_point_tracks_velocity() {
    let mut r = rng(16);
    for case in 0..50 {
        let n = 2 + case % 3;
        let g = pencil_geodesic(&mut r, n, Model::E);
        let a = spdbound::spd::make_spd(&random_spd(&mut r, n), Model::E).unwrap();
        let e = g.expanded();
        let t = 10.0 / (e[0] - e[n - 1]);
        let d = spdbound::spd::complex_distance(&spdbound::spd::geodesic_eval(&g, t), &a).unwrap();
        let sv = g.frame.clone().singular_values();
        let (av, _) = spdbound::linalg::sym_eigen(a.matrix());
        let amax = av.iter().fold(0.0f64, |m, v| m.max(v.ln().abs()));
        let slack = 2.0 * sv.max().ln().abs().max(sv.min().ln().abs()) + amax;
        for (s, phi) in d.psis.iter().zip(&e) {
            assert!((s - phi * t).abs() <= slack + 1e-6, "case {case}: {s} vs {}", phi * t);
        }
    }
}
