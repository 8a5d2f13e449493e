//! Points of E_n / PE_n, complex distance, geodesics and Cartan frames.

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use nalgebra::DVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    E,
    PE,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::E => "E",
            Model::PE => "PE",
        }
    }
}

const SYM_TOL: f64 = 1e-10;
const PE_TOL: f64 = 1e-9;
/// Log-eigenvalues closer than this are merged into one velocity block.
pub const BLOCK_MERGE_TOL: f64 = 1e-9;

/// A validated positive definite symmetric matrix.
#[derive(Clone, Debug)]
pub struct SpdMatrix {
    m: Mat,
    model: Model,
}

fn log_abs_det(m: &Mat) -> f64 {
    let lu = m.clone().lu();
    let u = lu.u();
    (0..u.nrows()).map(|i| u[(i, i)].abs().ln()).sum()
}

/// Validates a square matrix as a point of E_n or PE_n.
pub fn make_spd(matrix: &Mat, model: Model) -> Result<SpdMatrix> {
    let n = matrix.nrows();
    if matrix.ncols() != n {
        return Err(Error::DimensionMismatch(n, matrix.ncols()));
    }
    let scale = linalg::max_abs(matrix);
    let dev = linalg::max_abs(&(matrix - matrix.transpose()));
    if dev > SYM_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotSymmetric(dev));
    }
    let s = linalg::symmetrize(matrix);
    if linalg::cholesky(&s).is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(SpdMatrix::trusted(s, model))
}

impl SpdMatrix {
    /// Wraps a matrix known to be positive definite; PE values are rescaled to det 1.
    pub fn trusted(m: Mat, model: Model) -> SpdMatrix {
        let mut m = linalg::symmetrize(&m);
        if model == Model::PE && m.nrows() > 0 {
            let ld = log_abs_det(&m);
            m *= (-ld / m.nrows() as f64).exp();
        }
        SpdMatrix { m, model }
    }

    pub fn matrix(&self) -> &Mat {
        &self.m
    }
    pub fn n(&self) -> usize {
        self.m.nrows()
    }
    pub fn model(&self) -> Model {
        self.model
    }

    /// Model equality: entrywise within `tol` relative to the larger entry scale.
    pub fn approx_eq(&self, other: &SpdMatrix, tol: f64) -> bool {
        if self.n() != other.n() || self.model != other.model {
            return false;
        }
        let scale = linalg::max_abs(&self.m).max(linalg::max_abs(&other.m)).max(1.0);
        linalg::max_abs(&(&self.m - &other.m)) <= tol * scale
    }

    pub fn eq_model(&self, other: &SpdMatrix) -> bool {
        self.approx_eq(other, PE_TOL)
    }
}

/// Sorted log generalized eigenvalues of a pair of points.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexDistance {
    pub psis: Vec<f64>,
}

impl ComplexDistance {
    pub fn new(mut psis: Vec<f64>) -> ComplexDistance {
        psis.sort_by(|a, b| b.partial_cmp(a).unwrap());
        ComplexDistance { psis }
    }
    pub fn rho(&self) -> f64 {
        self.psis.iter().map(|p| p * p).sum::<f64>().sqrt()
    }
}

fn check_pair(x: &SpdMatrix, y: &SpdMatrix) -> Result<()> {
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch(x.n(), y.n()));
    }
    if x.model != y.model {
        return Err(Error::Incompatible("models differ".into()));
    }
    Ok(())
}

/// Solutions of det(X − λY) = 0, as ln λ sorted non-increasing.
pub fn complex_distance(x: &SpdMatrix, y: &SpdMatrix) -> Result<ComplexDistance> {
    check_pair(x, y)?;
    let l = linalg::cholesky_loose(&y.m).ok_or(Error::NotPositiveDefinite)?;
    let a = linalg::congruence_by_inverse(&l, &x.m);
    let (vals, _) = linalg::sym_eigen(&a);
    let mut psis: Vec<f64> = vals.iter().map(|v| v.max(f64::MIN_POSITIVE).ln()).collect();
    if x.model == Model::PE {
        let mean = psis.iter().sum::<f64>() / psis.len() as f64;
        psis.iter_mut().for_each(|p| *p -= mean);
    }
    Ok(ComplexDistance::new(psis))
}

pub fn riemannian_distance(x: &SpdMatrix, y: &SpdMatrix) -> Result<f64> {
    Ok(complex_distance(x, y)?.rho())
}

/// Majorization test for Θ − Ψ lying in the permutohedron of Φ.
pub fn triangle_membership(
    theta: &ComplexDistance,
    psi: &ComplexDistance,
    phi: &ComplexDistance,
) -> Result<bool> {
    let scale = theta
        .psis
        .iter()
        .chain(&psi.psis)
        .chain(&phi.psis)
        .fold(1.0f64, |m, x| m.max(x.abs()));
    triangle_membership_tol(theta, psi, phi, 1e-9 * scale)
}

pub fn triangle_membership_tol(
    theta: &ComplexDistance,
    psi: &ComplexDistance,
    phi: &ComplexDistance,
    tol: f64,
) -> Result<bool> {
    let n = theta.psis.len();
    if psi.psis.len() != n {
        return Err(Error::DimensionMismatch(n, psi.psis.len()));
    }
    if phi.psis.len() != n {
        return Err(Error::DimensionMismatch(n, phi.psis.len()));
    }
    let mut d: Vec<f64> = theta.psis.iter().zip(&psi.psis).map(|(a, b)| a - b).collect();
    d.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut f = phi.psis.clone();
    f.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let (mut sd, mut sf) = (0.0, 0.0);
    for k in 0..n {
        sd += d[k];
        sf += f[k];
        if sd > sf + tol {
            return Ok(false);
        }
    }
    Ok((sd - sf).abs() <= tol)
}

/// Normalized velocity of a geodesic: block sizes and strictly decreasing values.
#[derive(Clone, Debug, PartialEq)]
pub struct Velocity {
    pub blocks: Vec<usize>,
    pub values: Vec<f64>,
    pub model: Model,
}

impl Velocity {
    /// Normalizes literal block values to the unique representative of the model.
    pub fn from_literal(blocks: &[usize], values: &[f64], model: Model) -> Result<Velocity> {
        let n: usize = blocks.iter().sum();
        let mut v: Vec<f64> = values.to_vec();
        if model == Model::PE {
            let mean = blocks.iter().zip(&v).map(|(&a, &x)| a as f64 * x).sum::<f64>() / n as f64;
            v.iter_mut().for_each(|x| *x -= mean);
        }
        let norm = blocks.iter().zip(&v).map(|(&a, &x)| a as f64 * x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::CoincidentPoints);
        }
        v.iter_mut().for_each(|x| *x /= norm);
        Ok(Velocity { blocks: blocks.to_vec(), values: v, model })
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Per-coordinate values φ_1 ≥ … ≥ φ_n.
    pub fn expanded(&self) -> Vec<f64> {
        expand(&self.blocks, &self.values)
    }

    /// Partial sums i_1 < … < i_{m-1} (the last one, n, dropped).
    pub fn codims(&self) -> Vec<usize> {
        block_codims(&self.blocks)
    }

    /// Cut set {0, i_1, …, i_{m-1}, n}.
    pub fn cut_set(&self) -> Vec<usize> {
        let mut c = vec![0];
        c.extend(self.codims());
        c.push(self.n());
        c
    }

    pub fn approx_eq(&self, other: &Velocity, tol: f64) -> bool {
        self.blocks == other.blocks
            && self.model == other.model
            && self.values.iter().zip(&other.values).all(|(a, b)| (a - b).abs() <= tol)
    }
}

pub fn expand(blocks: &[usize], values: &[f64]) -> Vec<f64> {
    blocks
        .iter()
        .zip(values)
        .flat_map(|(&a, &v)| std::iter::repeat_n(v, a))
        .collect()
}

pub fn block_codims(blocks: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    let mut out = Vec::new();
    for &b in &blocks[..blocks.len().saturating_sub(1)] {
        acc += b;
        out.push(acc);
    }
    out
}

/// Converts a cut set {0, i_1, …, n} into block sizes.
pub fn blocks_from_cut_set(cuts: &[usize]) -> Vec<usize> {
    cuts.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Directed geodesic t ↦ g·diag(e^{ψ_k t} E_{α_k})·gᵀ with literal exponents.
#[derive(Clone, Debug)]
pub struct Geodesic {
    pub frame: Mat,
    pub blocks: Vec<usize>,
    pub values: Vec<f64>,
    pub model: Model,
}

impl Geodesic {
    pub fn new(frame: Mat, blocks: Vec<usize>, values: Vec<f64>, model: Model) -> Result<Geodesic> {
        let n = frame.nrows();
        if frame.ncols() != n {
            return Err(Error::DimensionMismatch(n, frame.ncols()));
        }
        if blocks.len() != values.len() || blocks.contains(&0) {
            return Err(Error::InvalidGeodesic("blocks and values disagree".into()));
        }
        let total: usize = blocks.iter().sum();
        if total != n {
            return Err(Error::DimensionMismatch(n, total));
        }
        if values.windows(2).any(|w| !(w[0] > w[1])) {
            return Err(Error::InvalidGeodesic("values must be strictly decreasing".into()));
        }
        let svd = frame.clone().svd(false, false);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if !(smin > 1e-14 * smax) {
            return Err(Error::InvalidGeodesic("frame is singular".into()));
        }
        let g = Geodesic { frame, blocks, values, model };
        g.velocity()?;
        Ok(g)
    }

    /// Builds a geodesic from per-column exponents, sorting and merging equal ones.
    pub fn from_exponents(frame: &Mat, exps: &[f64], model: Model) -> Result<Geodesic> {
        let n = frame.nrows();
        if exps.len() != n {
            return Err(Error::DimensionMismatch(n, exps.len()));
        }
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| exps[b].partial_cmp(&exps[a]).unwrap());
        let sorted_frame = Mat::from_fn(n, n, |r, c| frame[(r, idx[c])]);
        let sorted: Vec<f64> = idx.iter().map(|&i| exps[i]).collect();
        let (blocks, values) = group_values(&sorted, BLOCK_MERGE_TOL);
        Geodesic::new(sorted_frame, blocks, values, model)
    }

    pub fn n(&self) -> usize {
        self.frame.nrows()
    }

    pub fn velocity(&self) -> Result<Velocity> {
        Velocity::from_literal(&self.blocks, &self.values, self.model)
    }

    pub fn expanded(&self) -> Vec<f64> {
        expand(&self.blocks, &self.values)
    }

    pub fn codims(&self) -> Vec<usize> {
        block_codims(&self.blocks)
    }

    /// Column range of block k.
    pub fn block_range(&self, k: usize) -> std::ops::Range<usize> {
        let s: usize = self.blocks[..k].iter().sum();
        s..s + self.blocks[k]
    }

    /// Same geodesic with origin moved to γ(s0).
    pub fn shifted(&self, s0: f64) -> Geodesic {
        let e = self.expanded();
        let mut f = self.frame.clone();
        for (j, v) in e.iter().enumerate() {
            let c = (v * s0 / 2.0).exp();
            f.column_mut(j).scale_mut(c);
        }
        Geodesic { frame: f, ..self.clone() }
    }

    /// `h·γ·hᵀ`.
    pub fn transformed(&self, h: &Mat) -> Geodesic {
        Geodesic { frame: h * &self.frame, ..self.clone() }
    }
}

/// Groups a non-increasing list into runs whose consecutive gaps are at most `tol`.
pub fn group_values(sorted: &[f64], tol: f64) -> (Vec<usize>, Vec<f64>) {
    let mut blocks = Vec::new();
    let mut values = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j - 1] - sorted[j] <= tol * (1.0 + sorted[j].abs()) {
            j += 1;
        }
        blocks.push(j - i);
        values.push(sorted[i..j].iter().sum::<f64>() / (j - i) as f64);
        i = j;
    }
    (blocks, values)
}

/// Geodesic with γ(0) = X and γ(1) = Y.
pub fn geodesic_through(x: &SpdMatrix, y: &SpdMatrix) -> Result<Geodesic> {
    check_pair(x, y)?;
    if x.eq_model(y) {
        return Err(Error::CoincidentPoints);
    }
    let l = linalg::cholesky_loose(&x.m).ok_or(Error::NotPositiveDefinite)?;
    let a = linalg::congruence_by_inverse(&l, &y.m);
    let (vals, q) = linalg::sym_eigen(&a);
    let g = &l * q;
    let exps: Vec<f64> = vals.iter().map(|v| v.max(f64::MIN_POSITIVE).ln()).collect();
    let (blocks, values) = group_values(&exps, BLOCK_MERGE_TOL);
    if x.model == Model::PE && blocks.len() == 1 {
        return Err(Error::CoincidentPoints);
    }
    if values.iter().all(|v| v.abs() < 1e-12) {
        return Err(Error::CoincidentPoints);
    }
    Geodesic::new(g, blocks, values, x.model)
}

/// γ(t); PE values are returned det-normalized.
pub fn geodesic_eval(gamma: &Geodesic, t: f64) -> SpdMatrix {
    let mut e = gamma.expanded();
    let mut g = gamma.frame.clone();
    let n = gamma.n();
    if gamma.model == Model::PE {
        let mean = e.iter().sum::<f64>() / n as f64;
        e.iter_mut().for_each(|v| *v -= mean);
        let ld = log_abs_det(&g);
        g *= (-ld / n as f64).exp();
    }
    for (j, v) in e.iter().enumerate() {
        g.column_mut(j).scale_mut((v * t / 2.0).exp());
    }
    let m = &g * g.transpose();
    SpdMatrix { m: linalg::symmetrize(&m), model: gamma.model }
}

/// Cartan subspace: all g·diag(e^{t_j})·gᵀ.
#[derive(Clone, Debug)]
pub struct CartanFrame {
    pub frame: Mat,
}

impl CartanFrame {
    pub fn point(&self, t: &[f64], model: Model) -> SpdMatrix {
        let d = Mat::from_diagonal(&DVector::from_iterator(t.len(), t.iter().map(|x| x.exp())));
        SpdMatrix::trusted(&self.frame * d * self.frame.transpose(), model)
    }
}

pub fn cartan_contains(frame: &CartanFrame, x: &SpdMatrix) -> Result<bool> {
    let n = frame.frame.nrows();
    if x.n() != n {
        return Err(Error::DimensionMismatch(n, x.n()));
    }
    let gi = linalg::inverse(&frame.frame).ok_or(Error::InvalidGeodesic("singular frame".into()))?;
    let m = &gi * &x.m * gi.transpose();
    for i in 0..n {
        if !(m[(i, i)] > 0.0) {
            return Ok(false);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && m[(i, j)].abs() > 1e-9 * (m[(i, i)] * m[(j, j)]).sqrt() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
