//! Finite, solvable and null pencils of directed geodesics.
//!
//! Geodesics are stored as `g·diag(e^{ψ_k t} E_{α_k})·gᵀ` with ψ_1 > ψ_2 > …, so the
//! transformations preserving the finite pencil of the frame-`I` geodesic are the
//! block-upper-triangular `h` (nonzero `h_ij` only when block(i) ≤ block(j)).

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::satake::{self, Flag, SatakePoint, ScaleMode, SubquotientForm};
use crate::spd::{Geodesic, Model, SpdMatrix, Velocity};

pub const FLAG_TOL: f64 = 1e-7;
pub const FORM_TOL: f64 = 1e-7;
const VELOCITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct FinitePencilData {
    pub velocity: Velocity,
    pub limit_flag: Flag,
}

#[derive(Clone, Debug)]
pub struct SolvablePencilData {
    pub velocity: Velocity,
    pub satake: SatakePoint,
}

/// Literal velocity, flag and literal subquotient forms in the canonical slice of the
/// shift action `(R_k) ↦ (e^{ψ_k s} R_k)`.
#[derive(Clone, Debug)]
pub struct NullPencilData {
    pub velocity: Velocity,
    pub flag: Flag,
    pub forms: Vec<SubquotientForm>,
}

fn check_same(a: &Geodesic, b: &Geodesic) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    if a.model != b.model {
        return Err(Error::Incompatible("models differ".into()));
    }
    Ok(())
}

fn whole_space_flag(n: usize) -> Flag {
    Flag { n, codims: vec![], basis: Mat::identity(n, n) }
}

pub fn finite_pencil_data(gamma: &Geodesic) -> FinitePencilData {
    let velocity = gamma.velocity().expect("geodesic has nonzero velocity");
    let limit_flag = if gamma.blocks.len() == 1 {
        whole_space_flag(gamma.n())
    } else {
        satake::geodesic_satake_limit(gamma).flag
    };
    FinitePencilData { velocity, limit_flag }
}

pub fn same_finite_pencil(a: &Geodesic, b: &Geodesic) -> Result<bool> {
    check_same(a, b)?;
    let (da, db) = (finite_pencil_data(a), finite_pencil_data(b));
    Ok(da.velocity.approx_eq(&db.velocity, VELOCITY_TOL)
        && da.limit_flag.approx_eq(&db.limit_flag, FLAG_TOL))
}

pub fn solvable_pencil_data(gamma: &Geodesic) -> SolvablePencilData {
    SolvablePencilData {
        velocity: gamma.velocity().expect("geodesic has nonzero velocity"),
        satake: satake::geodesic_satake_limit(gamma),
    }
}

pub fn same_solvable_pencil(a: &Geodesic, b: &Geodesic) -> Result<bool> {
    check_same(a, b)?;
    let (da, db) = (solvable_pencil_data(a), solvable_pencil_data(b));
    Ok(da.velocity.approx_eq(&db.velocity, VELOCITY_TOL)
        && satake::satake_point_equal(&da.satake, &db.satake, FORM_TOL))
}

/// Index of the block whose form fixes the canonical slice: the one with the largest
/// |ψ_k| (first on ties). A tiny ψ_k would need a huge shift and underflow the others.
fn slice_block(values: &[f64]) -> Option<usize> {
    let (k, v) = values.iter().enumerate().fold((0, 0.0f64), |(bk, bv), (k, v)| {
        if v.abs() > bv + 1e-12 { (k, v.abs()) } else { (bk, bv) }
    });
    (v > 1e-12).then_some(k)
}

/// Moves literal forms into the slice det(R_k) = 1 for the block chosen by `slice_block`.
pub fn canonical_slice(values: &[f64], forms: &[Mat]) -> Vec<Mat> {
    let Some(k) = slice_block(values) else {
        return forms.to_vec();
    };
    let ld = forms[k].clone().lu().determinant().ln();
    let s = -ld / (values[k] * forms[k].nrows() as f64);
    forms.iter().zip(values).map(|(r, v)| r * (v * s).exp()).collect()
}

/// Null-pencil data of γ after moving its origin to γ(s0); the canonical slice makes
/// the result independent of `s0`.
pub fn null_pencil_data(gamma: &Geodesic, s0: f64) -> NullPencilData {
    let g = gamma.shifted(s0);
    let n = g.n();
    let velocity = Velocity { blocks: g.blocks.clone(), values: g.values.clone(), model: Model::E };
    let (flag, raw) = if g.blocks.len() == 1 {
        (whole_space_flag(n), vec![&g.frame * g.frame.transpose()])
    } else {
        let p = satake::point_from_frame(&g.frame, &g.blocks, ScaleMode::Literal);
        (p.flag, p.forms.into_iter().map(|f| f.matrix).collect())
    };
    let forms = canonical_slice(&g.values, &raw).iter().map(SubquotientForm::literal).collect();
    NullPencilData { velocity, flag, forms }
}

pub fn null_data_equal(a: &NullPencilData, b: &NullPencilData) -> bool {
    if a.velocity.blocks != b.velocity.blocks {
        return false;
    }
    let vel_ok = a.velocity.values.iter().zip(&b.velocity.values).all(|(x, y)| {
        (x - y).abs() <= VELOCITY_TOL * (1.0 + x.abs().max(y.abs()))
    });
    if !vel_ok || !a.flag.approx_eq(&b.flag, FLAG_TOL) {
        return false;
    }
    (0..a.forms.len()).all(|k| {
        let (pa, pb) = (a.flag.piece(k), b.flag.piece(k));
        let ea = &pa * &a.forms[k].matrix * pa.transpose();
        let eb = &pb * &b.forms[k].matrix * pb.transpose();
        let scale = linalg::max_abs(&ea).max(linalg::max_abs(&eb));
        linalg::max_abs(&(ea - eb)) <= FORM_TOL * scale.max(1e-300)
    })
}

pub fn same_null_pencil(a: &Geodesic, b: &Geodesic) -> Result<bool> {
    check_same(a, b)?;
    Ok(null_data_equal(&null_pencil_data(a, 0.0), &null_pencil_data(b, 0.0)))
}

/// `UDUᵀ` with `U` unit block-upper-triangular; returns `(U, [D_k])`.
fn block_udu(x: &Mat, blocks: &[usize]) -> Option<(Mat, Vec<Mat>)> {
    let n = x.nrows();
    let rev = |m: &Mat| Mat::from_fn(m.nrows(), m.ncols(), |r, c| m[(m.nrows() - 1 - r, m.ncols() - 1 - c)]);
    let rb: Vec<usize> = blocks.iter().rev().copied().collect();
    let (l, ds) = linalg::block_ldl(&rev(x), &rb)?;
    let u = rev(&l);
    let ds = ds.iter().rev().map(rev).collect();
    debug_assert_eq!(u.nrows(), n);
    Some((u, ds))
}

fn frame_inverse(gamma: &Geodesic) -> Mat {
    linalg::inverse(&gamma.frame).expect("geodesic frames are nonsingular")
}

/// Diagonal-block Gram matrices `H_kk H_kkᵀ` of `μ(0)` written as `g h hᵀ gᵀ` with
/// `g` the frame of γ and `h` in the block-triangular group of γ.
pub fn finite_pencil_project(gamma: &Geodesic, mu: &Geodesic) -> Result<Vec<SpdMatrix>> {
    if !same_finite_pencil(gamma, mu)? {
        return Err(Error::NotInPencil);
    }
    let gi = frame_inverse(gamma);
    let f = &gi * &mu.frame;
    let x = linalg::symmetrize(&(&f * f.transpose()));
    let (_, ds) = block_udu(&x, &gamma.blocks).ok_or(Error::NotInPencil)?;
    Ok(ds.into_iter().map(|d| SpdMatrix::trusted(linalg::symmetrize(&d), Model::E)).collect())
}

/// `lim_{t→∞} inf_s ρ(ν1(t), ν2(s))`, in closed form from the block projections.
///
/// With `x_kj(u) = ln σ_kj + ψ_k u` (σ_kj the eigenvalues of ν2's k-th projection
/// relative to ν1) the limit is `min_u ‖x(u)‖`, and in the projective model also
/// minimized over a common additive constant.
pub fn distance_at_infinity(nu1: &Geodesic, nu2: &Geodesic) -> Result<f64> {
    let proj = finite_pencil_project(nu1, nu2)?;
    let mut rows: Vec<(f64, f64)> = Vec::new();
    for (k, p) in proj.iter().enumerate() {
        let (vals, _) = linalg::sym_eigen(p.matrix());
        for v in vals {
            rows.push((v.ln(), nu1.values[k]));
        }
    }
    let m = rows.len() as f64;
    let (mut a, mut b): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    if nu1.model == Model::PE {
        let ma = a.iter().sum::<f64>() / m;
        let mb = b.iter().sum::<f64>() / m;
        a.iter_mut().for_each(|x| *x -= ma);
        b.iter_mut().for_each(|x| *x -= mb);
    }
    let bb: f64 = b.iter().map(|x| x * x).sum();
    let ab: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    let u = if bb > 0.0 { -ab / bb } else { 0.0 };
    Ok(a.iter().zip(&b).map(|(x, y)| (x + u * y).powi(2)).sum::<f64>().sqrt())
}

/// The geodesic of γ's finite pencil through X at t = 0.
pub fn pencil_through_point(gamma: &Geodesic, x: &SpdMatrix) -> Result<Geodesic> {
    if x.n() != gamma.n() {
        return Err(Error::DimensionMismatch(gamma.n(), x.n()));
    }
    let gi = frame_inverse(gamma);
    let y = linalg::symmetrize(&(&gi * x.matrix() * gi.transpose()));
    let (u, ds) = block_udu(&y, &gamma.blocks).ok_or(Error::NotPositiveDefinite)?;
    let n = gamma.n();
    let mut c = Mat::zeros(n, n);
    for (k, d) in ds.iter().enumerate() {
        let r = gamma.block_range(k);
        let l = linalg::cholesky_loose(d).ok_or(Error::NotPositiveDefinite)?;
        c.view_mut((r.start, r.start), (r.len(), r.len())).copy_from(&l);
    }
    let frame = &gamma.frame * u * c;
    Geodesic::new(frame, gamma.blocks.clone(), gamma.values.clone(), gamma.model)
}

/// Whether every subspace of `w2` is one of the subspaces of `w`.
pub fn sphere_cell_closure_contains(w: &Flag, w2: &Flag) -> bool {
    if w.n != w2.n {
        return false;
    }
    w2.codims.iter().enumerate().all(|(k2, c)| match w.codims.iter().position(|x| x == c) {
        Some(k) => linalg::max_abs(&(w.projector(k + 1) - w2.projector(k2 + 1))) <= FLAG_TOL,
        None => false,
    })
}

/// Dimension of the stratum of the visibility sphere with cut set `codims`: the open
/// simplex of velocities (dimension p - 1) times the Satake stratum.
pub fn visibility_stratum_dim(n: usize, codims: &[usize]) -> Result<i64> {
    let s = satake::satake_stratum_dim(n, codims)? as i64;
    Ok(codims.len() as i64 - 1 + s)
}
