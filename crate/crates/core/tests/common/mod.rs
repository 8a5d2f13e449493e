#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use spdbound::spd::{Geodesic, Model};

pub type Mat = DMatrix<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(r: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = r.gen_range(1e-12..1.0);
    let u2: f64 = r.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn random_matrix(r: &mut ChaCha8Rng, n: usize) -> Mat {
    Mat::from_fn(n, n, |_, _| gaussian(r))
}

pub fn random_orthogonal(r: &mut ChaCha8Rng, n: usize) -> Mat {
    random_matrix(r, n).qr().q()
}

/// Frame with singular values in [1, cond].
pub fn random_frame(r: &mut ChaCha8Rng, n: usize, cond: f64) -> Mat {
    let u = random_orthogonal(r, n);
    let v = random_orthogonal(r, n);
    let s: Vec<f64> = (0..n)
        .map(|i| if i == 0 { 1.0 } else if i == 1 { cond } else { cond.powf(r.gen()) })
        .collect();
    u * Mat::from_diagonal(&nalgebra::DVector::from_vec(s)) * v.transpose()
}

pub fn random_spd(r: &mut ChaCha8Rng, n: usize) -> Mat {
    let a = random_matrix(r, n);
    &a * a.transpose() + Mat::identity(n, n) * 0.1
}

pub fn random_composition(r: &mut ChaCha8Rng, n: usize, parts: usize) -> Vec<usize> {
    loop {
        let mut cuts: Vec<usize> = (1..n).collect();
        let mut chosen = Vec::new();
        for _ in 0..parts - 1 {
            let i = r.gen_range(0..cuts.len());
            chosen.push(cuts.remove(i));
        }
        chosen.sort();
        let mut blocks = Vec::new();
        let mut prev = 0;
        for c in chosen.into_iter().chain([n]) {
            blocks.push(c - prev);
            prev = c;
        }
        if blocks.iter().all(|&b| b > 0) {
            return blocks;
        }
    }
}

/// Geodesic with two or three blocks; successive gaps d1 ∈ [0.4, 0.45] and d2 ∈ `d2`.
pub fn sampling_geodesic_with(
    r: &mut ChaCha8Rng,
    n: usize,
    model: Model,
    d2: std::ops::Range<f64>,
) -> Geodesic {
    let m = r.gen_range(2..=n.min(3));
    let blocks = random_composition(r, n, m);
    let d1: f64 = r.gen_range(0.4..0.45);
    let d2: f64 = r.gen_range(d2);
    let mut values = vec![0.0, -d1, -d1 - d2];
    values.truncate(m);
    Geodesic::new(random_frame(r, n, 10.0), blocks, values, model).unwrap()
}

/// Gaps suited to samples at t = 4, 8, …, 64.
pub fn sampling_geodesic(r: &mut ChaCha8Rng, n: usize, model: Model) -> Geodesic {
    sampling_geodesic_with(r, n, model, 0.8..0.9)
}

/// Gaps suited to dense samples t = 0.5, 1, …, 64 fed to both sequence algorithms.
pub fn packet_geodesic(r: &mut ChaCha8Rng, n: usize, model: Model) -> Geodesic {
    sampling_geodesic_with(r, n, model, 3.5..4.0)
}

pub fn dense_samples(g: &Geodesic) -> Vec<spdbound::spd::SpdMatrix> {
    (1..=128).map(|k| spdbound::spd::geodesic_eval(g, 0.5 * k as f64)).collect()
}

pub mod curves {
    use super::*;
    use num_rational::BigRational;
    use spdbound::laurent::Laurent;
    use spdbound::urchin::{CurveFactorization, MeromorphicCurve, SeriesMat};

    pub fn q(p: i64) -> BigRational {
        BigRational::from_integer(p.into())
    }

    /// Integer matrix with determinant ±1 or ±2, built from random row operations.
    fn integer_frame(r: &mut ChaCha8Rng, n: usize) -> Vec<Vec<i64>> {
        let mut a: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        if r.gen_bool(0.3) {
            a[0][0] = 2;
        }
        for _ in 0..2 * n {
            let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
            if i != j {
                let f = r.gen_range(-2..=2);
                for c in 0..n {
                    a[i][c] += f * a[j][c];
                }
            }
        }
        a
    }

    /// A curve together with the factorization it was built from:
    /// `X = P·diag(c_i z^{-k_i})·Pᵀ`, `P = P_0 + z P_1 + z² P_2` with integer entries.
    pub fn random_curve(r: &mut ChaCha8Rng, n: usize, t: usize) -> (MeromorphicCurve, CurveFactorization) {
        let big = 200;
        let p0 = integer_frame(r, n);
        let mut k: Vec<i64> = (0..n).map(|_| r.gen_range(-3..=3)).collect();
        k.sort_by(|a, b| b.cmp(a));
        let c: Vec<BigRational> = (0..n).map(|_| q(r.gen_range(1..=4))).collect();
        let p: SeriesMat = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let hi: Vec<i64> = (0..2).map(|_| r.gen_range(-2..=2)).collect();
                        Laurent::from_ints(0, &[p0[i][j], hi[0], hi[1]], big)
                    })
                    .collect()
            })
            .collect();
        let f = CurveFactorization { g: p, k, c };
        let prod = f.product();
        let x = MeromorphicCurve::new(prod).unwrap().truncated(t);
        (x, f)
    }

    pub fn random_unit(r: &mut ChaCha8Rng) -> Laurent {
        let c: Vec<i64> = vec![r.gen_range(1..=3), r.gen_range(-2..=2), r.gen_range(-2..=2)];
        Laurent::from_ints(0, &c, 200)
    }

    /// Power-series matrix with invertible integer constant term.
    pub fn random_h(r: &mut ChaCha8Rng, n: usize) -> SeriesMat {
        let h0 = integer_frame(r, n);
        (0..n)
            .map(|i| (0..n).map(|j| Laurent::from_ints(0, &[h0[i][j], r.gen_range(-1..=1)], 40)).collect())
            .collect()
    }
}

/// Block-triangular generators of the three pencil groups of the frame-`I` geodesic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Shape {
    /// orthogonal diagonal blocks
    Null,
    /// diagonal blocks τ_k·O_k, τ_k ≠ 1
    Solvable,
    /// arbitrary invertible diagonal blocks, at least one with non-scalar Gram matrix
    Finite,
}

pub fn shape_matrix(r: &mut ChaCha8Rng, blocks: &[usize], shape: Shape) -> Mat {
    let n: usize = blocks.iter().sum();
    let mut h = Mat::zeros(n, n);
    let mut s = 0;
    let big = blocks.iter().position(|&b| b >= 2);
    for (k, &b) in blocks.iter().enumerate() {
        let d = match shape {
            Shape::Null => random_orthogonal(r, b),
            Shape::Solvable => {
                let tau = if r.gen_bool(0.5) { r.gen_range(1.2..2.0) } else { r.gen_range(0.5..0.8) };
                random_orthogonal(r, b) * tau
            }
            Shape::Finite if Some(k) == big => {
                let cond = r.gen_range(2.0..5.0);
                random_frame(r, b, cond)
            }
            Shape::Finite if b == 1 => Mat::from_element(1, 1, r.gen_range(1.3..2.5)),
            Shape::Finite => random_frame(r, b, 3.0),
        };
        h.view_mut((s, s), (b, b)).copy_from(&d);
        for j in s + b..n {
            for i in s..s + b {
                h[(i, j)] = gaussian(r);
            }
        }
        s += b;
    }
    h
}

/// A geodesic with `m ≥ 2` blocks and strictly decreasing values.
pub fn pencil_geodesic(r: &mut ChaCha8Rng, n: usize, model: Model) -> Geodesic {
    let m = r.gen_range(2..=n);
    let blocks = random_composition(r, n, m);
    let mut values = vec![r.gen_range(-1.0..1.0)];
    for _ in 1..m {
        let last = *values.last().unwrap();
        values.push(last - r.gen_range(0.3..1.5));
    }
    if model == Model::PE {
        let mean: f64 = blocks.iter().zip(&values).map(|(b, v)| *b as f64 * v).sum::<f64>() / n as f64;
        values.iter_mut().for_each(|v| *v -= mean);
    }
    Geodesic::new(random_frame(r, n, 10.0), blocks, values, model).unwrap()
}

/// Moves `γ` by the pencil generator `H`, written in γ's own frame: `h = g H g⁻¹`.
pub fn act_in_frame(gamma: &Geodesic, hh: &Mat) -> Geodesic {
    let g = &gamma.frame;
    let h = g * hh * g.clone().try_inverse().unwrap();
    gamma.transformed(&h)
}

pub mod growth {
    use super::*;
    use num_rational::BigRational;
    use spdbound::growth::{GrowthVector, Poly};

    pub fn rational(r: &mut ChaCha8Rng) -> BigRational {
        BigRational::new(r.gen_range(-4i64..=4).into(), r.gen_range(1i64..=3).into())
    }

    pub fn poly(r: &mut ChaCha8Rng, deg: usize) -> Poly {
        Poly::from_coeffs((0..=deg).map(|_| rational(r)).collect())
    }

    /// Coordinates share leading parts often enough that limits nest several levels.
    pub fn random_growth(r: &mut ChaCha8Rng, n: usize) -> GrowthVector {
        let pool: Vec<Poly> = (0..r.gen_range(1..=3)).map(|_| {
            let d = r.gen_range(0..=4);
            poly(r, d)
        }).collect();
        let coords = (0..n)
            .map(|_| {
                let base = pool[r.gen_range(0..pool.len())].clone();
                if r.gen_bool(0.6) {
                    let d = r.gen_range(0..=3);
                    &base + &poly(r, d)
                } else {
                    base
                }
            })
            .collect();
        GrowthVector::new(coords)
    }
}
