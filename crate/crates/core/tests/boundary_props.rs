mod common;

use common::*;
use rand::Rng;
use spdbound::boundary::*;
use spdbound::polytope::karp_to_pass;
use spdbound::satake::{point_from_frame, satake_point_equal, ScaleMode};
use spdbound::spd::Model;

#[test]
fn ass_and_karp_points_agree_on_geodesics() {
    let mut r = rng(31);
    for case in 0..200 {
        let n = 2 + case % 4;
        let g = pencil_geodesic(&mut r, n, Model::PE);
        let a = geodesic_boundary_point(&g, BoundaryKind::Ass);
        let k = geodesic_boundary_point(&g, BoundaryKind::Karp);
        assert!(satake_point_equal(&a.satake, &k.satake, 1e-9), "case {case}");
        let (BoundaryIndex::Tree(t), BoundaryIndex::Leveled(l)) = (&a.index, &k.index) else {
            panic!("case {case}: unexpected indices");
        };
        assert_eq!(*t, karp_to_pass(l));
        assert!(semiaxis_defect(&a) < 1e-9 && semiaxis_defect(&k) < 1e-9, "case {case}");
        for c in &k.chamber {
            assert!(c.iter().sum::<f64>().abs() < 1e-9);
        }
        let m = geodesic_boundary_point(&g, BoundaryKind::Martin);
        assert_eq!(m.index, BoundaryIndex::Subset(g.codims()));
    }
}

/// A sorted growth vector paired with frames whose Satake limit has the cuts its Karp
/// limit asks for.
#[test]
fn sequence_points_satisfy_the_semiaxis_constraint() {
    let mut r = rng(32);
    let mut built = 0;
    for _ in 0..300 {
        let n = r.gen_range(2..=5);
        let mut v = growth::random_growth(&mut r, n);
        v.coords.sort_by(|a, b| (b - a).leading().cmp(&num_rational::BigRational::from_integer(0.into())));
        if !v.is_sorted() {
            continue;
        }
        let kl = spdbound::xi::karp_limit(&v);
        let last = kl.leveled.levels.last().unwrap().lists();
        let blocks: Vec<usize> = last.iter().map(Vec::len).collect();
        if last.iter().flatten().copied().collect::<Vec<_>>() != (1..=n).collect::<Vec<_>>() {
            continue;
        }
        let sp = point_from_frame(&random_frame(&mut r, n, 10.0), &blocks, ScaleMode::UpToScale);
        let p = sequence_boundary_point(&v, &sp, BoundaryKind::Karp).unwrap();
        assert!(semiaxis_defect(&p) < 1e-9);
        assert_eq!(p.rays.len(), kl.leveled.tau());
        for (_, ray) in &p.rays {
            let top = ray.iter().cloned().fold(0.0, f64::max);
            assert!(top == 0.0 || (top - 1.0).abs() < 1e-12);
        }
        built += 1;
    }
    assert!(built > 50, "only {built} usable samples");
}

#[test]
fn mismatched_frames_are_rejected() {
    let g = spdbound::growth::parse_growth(&["2n", "n", "0"]).unwrap();
    let sp = point_from_frame(&nalgebra::DMatrix::identity(3, 3), &[1, 2], ScaleMode::UpToScale);
    assert!(sequence_boundary_point(&g, &sp, BoundaryKind::Karp).is_err());
    let unsorted = spdbound::growth::parse_growth(&["0", "n", "2n"]).unwrap();
    assert_eq!(
        sequence_boundary_point(&unsorted, &sp, BoundaryKind::Karp).unwrap_err(),
        spdbound::Error::NotSorted
    );
}
