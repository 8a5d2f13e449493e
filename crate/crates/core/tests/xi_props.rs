mod common;

use common::growth::*;
use common::rng;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;
use spdbound::growth::{GrowthVector, Poly};
use spdbound::polytope::{karp_to_pass, stratum_karp};
use spdbound::xi::*;

fn shift(v: &GrowthVector, p: &Poly) -> GrowthVector {
    GrowthVector::new(v.coords.iter().map(|c| c + p).collect())
}

fn scale(v: &GrowthVector, c: &BigRational) -> GrowthVector {
    GrowthVector::new(v.coords.iter().map(|x| x.scale(c)).collect())
}

#[test]
fn pass_is_the_projection_of_karp() {
    let mut r = rng(21);
    let mut deep = 0;
    for case in 0..500 {
        let n = 1 + case % 6;
        let v = random_growth(&mut r, n);
        let k = karp_limit(&v);
        assert_eq!(pass_limit(&v).tree, karp_to_pass(&k.leveled), "case {case}: {v:?}");
        assert!(k.leveled.tau() < n.max(1));
        assert_eq!(stratum_karp(&k.leveled).dim, n - 1 - k.leveled.tau());
        assert_eq!(k.rays.len(), k.leveled.tau());
        assert_eq!(k.points.len(), k.leveled.levels.last().unwrap().blocks.len());
        deep += usize::from(k.leveled.tau() >= 2);
    }
    assert!(deep > 50, "generator too shallow: {deep}");
}

#[test]
fn limits_ignore_a_common_summand() {
    let mut r = rng(22);
    for _ in 0..200 {
        let n = r.gen_range(1..=6);
        let v = random_growth(&mut r, n);
        let d = r.gen_range(0..=5);
        let w = shift(&v, &poly(&mut r, d));
        assert_eq!(pass_limit(&v), pass_limit(&w));
        assert_eq!(karp_limit(&v), karp_limit(&w));
    }
}

#[test]
fn positive_scaling_keeps_indices_and_rays() {
    let mut r = rng(23);
    for _ in 0..200 {
        let n = r.gen_range(1..=6);
        let v = random_growth(&mut r, n);
        let c = BigRational::new(r.gen_range(1i64..=7).into(), r.gen_range(1i64..=5).into());
        let (a, b) = (karp_limit(&v), karp_limit(&scale(&v, &c)));
        assert_eq!(a.leveled, b.leveled);
        assert_eq!(a.rays, b.rays);
        for (p, q) in a.points.iter().zip(&b.points) {
            let scaled: Vec<BigRational> = p.coords.iter().map(|x| x * &c).collect();
            assert_eq!(scaled, q.coords);
        }
        let (a, b) = (pass_limit(&v), pass_limit(&scale(&v, &c)));
        assert_eq!(a.tree, b.tree);
        for (x, y) in a.data.iter().zip(&b.data) {
            if let (XiLimit::Ray(p), XiLimit::Ray(q)) = (&x.limit, &y.limit) {
                assert_eq!(p, q);
            }
        }
    }
}

proptest! {
    #[test]
    fn canonical_representatives(vals in proptest::collection::vec((-20i64..20, 1i64..6), 1..7)) {
        let labels: Vec<usize> = (1..=vals.len()).collect();
        let q: Vec<BigRational> = vals.iter().map(|&(p, d)| BigRational::new(p.into(), d.into())).collect();
        let p = XiPoint::canonical(labels.clone(), q.clone());
        prop_assert!(p.coords.iter().any(|x| *x == BigRational::from_integer(0.into())));
        prop_assert!(p.coords.iter().all(|x| *x >= BigRational::from_integer(0.into())));
        let ray = XiRay::canonical(labels.clone(), q.clone());
        let doubled = XiRay::canonical(labels, q.iter().map(|x| x * BigRational::from_integer(3.into())).collect());
        prop_assert_eq!(&ray, &doubled);
        let g = ray.dir.iter().fold(num_bigint::BigInt::from(0), |a, x| num_integer::Integer::gcd(&a, x));
        prop_assert!(g == 0.into() || g == 1.into());
    }
}
