//! Flags with forms on the subquotients, and limits of geodesics and sequences.

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::spd::{Geodesic, SpdMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScaleMode {
    UpToScale,
    Literal,
}

impl ScaleMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScaleMode::UpToScale => "upToScale",
            ScaleMode::Literal => "literal",
        }
    }
}

/// A positive form on one subquotient, in the basis inherited from the flag.
#[derive(Clone, Debug)]
pub struct SubquotientForm {
    pub matrix: Mat,
    pub mode: ScaleMode,
}

fn top_eigenvalue(m: &Mat) -> f64 {
    linalg::sym_eigen(m).0.first().copied().unwrap_or(1.0)
}

impl SubquotientForm {
    pub fn up_to_scale(m: &Mat) -> SubquotientForm {
        let s = linalg::symmetrize(m);
        let top = top_eigenvalue(&s);
        SubquotientForm { matrix: s / top, mode: ScaleMode::UpToScale }
    }
    pub fn literal(m: &Mat) -> SubquotientForm {
        SubquotientForm { matrix: linalg::symmetrize(m), mode: ScaleMode::Literal }
    }
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
    /// Representative used for comparisons: largest eigenvalue 1.
    pub fn normalized(&self) -> Mat {
        let top = top_eigenvalue(&self.matrix);
        &self.matrix / top
    }
}

/// A flag ℝⁿ = W_0 ⊃ W_1 ⊃ … ⊃ W_p with codim W_k = i_k.
#[derive(Clone, Debug)]
pub struct Flag {
    pub n: usize,
    pub codims: Vec<usize>,
    pub basis: Mat,
}

pub fn valid_codims(n: usize, codims: &[usize]) -> bool {
    codims.windows(2).all(|w| w[0] < w[1]) && codims.iter().all(|&c| c >= 1 && c < n)
}

impl Flag {
    pub fn new(basis: Mat, codims: Vec<usize>) -> Result<Flag> {
        let n = basis.nrows();
        if basis.ncols() != n {
            return Err(Error::DimensionMismatch(n, basis.ncols()));
        }
        if !valid_codims(n, &codims) {
            return Err(Error::BadCodims(codims));
        }
        let dev = linalg::max_abs(&(basis.transpose() * &basis - Mat::identity(n, n)));
        if dev > 1e-10 {
            return Err(Error::Incompatible(format!("flag basis not orthonormal ({dev:e})")));
        }
        Ok(Flag { n, codims, basis })
    }

    /// Boundaries 0 = i_0 < i_1 < … < i_p < i_{p+1} = n.
    pub fn cuts(&self) -> Vec<usize> {
        let mut c = vec![0];
        c.extend(&self.codims);
        c.push(self.n);
        c
    }

    /// Orthonormal basis of W_k (k = 0..=p).
    pub fn subspace(&self, k: usize) -> Mat {
        let c = self.cuts()[k];
        self.basis.columns(c, self.n - c).into_owned()
    }

    /// Orthogonal projector onto W_k.
    pub fn projector(&self, k: usize) -> Mat {
        let b = self.subspace(k);
        &b * b.transpose()
    }

    /// Basis of W_k ∩ W_{k+1}^⊥ (k = 0..=p).
    pub fn piece(&self, k: usize) -> Mat {
        let c = self.cuts();
        self.basis.columns(c[k], c[k + 1] - c[k]).into_owned()
    }

    pub fn approx_eq(&self, other: &Flag, tol: f64) -> bool {
        self.n == other.n
            && self.codims == other.codims
            && (1..=self.codims.len())
                .all(|k| linalg::max_abs(&(self.projector(k) - other.projector(k))) <= tol)
    }
}

/// A point of the Satake space: flag plus one form per subquotient.
#[derive(Clone, Debug)]
pub struct SatakePoint {
    pub flag: Flag,
    pub forms: Vec<SubquotientForm>,
}

impl SatakePoint {
    pub fn new(flag: Flag, forms: Vec<SubquotientForm>) -> Result<SatakePoint> {
        let c = flag.cuts();
        if forms.len() != c.len() - 1 {
            return Err(Error::Incompatible("one form per subquotient expected".into()));
        }
        for (k, f) in forms.iter().enumerate() {
            if f.dim() != c[k + 1] - c[k] {
                return Err(Error::Incompatible(format!("form {k} has wrong dimension")));
            }
        }
        Ok(SatakePoint { flag, forms })
    }

    /// Interior point X of PE_n.
    pub fn interior(x: &Mat) -> SatakePoint {
        let n = x.nrows();
        SatakePoint {
            flag: Flag { n, codims: vec![], basis: Mat::identity(n, n) },
            forms: vec![SubquotientForm::up_to_scale(x)],
        }
    }

    pub fn n(&self) -> usize {
        self.flag.n
    }
    pub fn codims(&self) -> &[usize] {
        &self.flag.codims
    }

    /// Form k as an n×n matrix, normalized when the form is up to scale.
    pub fn embedded_form(&self, k: usize) -> Mat {
        let b = self.flag.piece(k);
        let f = &self.forms[k];
        let m = match f.mode {
            ScaleMode::UpToScale => f.normalized(),
            ScaleMode::Literal => f.matrix.clone(),
        };
        &b * m * b.transpose()
    }

    /// Image under X ↦ g X gᵀ.
    pub fn act(&self, g: &Mat) -> Result<SatakePoint> {
        let gi = linalg::inverse(g).ok_or(Error::Incompatible("singular matrix".into()))?;
        let nb = orthonormalize_trailing(&(gi.transpose() * &self.flag.basis));
        let flag = Flag { n: self.n(), codims: self.flag.codims.clone(), basis: nb };
        let mut forms = Vec::new();
        for k in 0..self.forms.len() {
            let b = self.flag.piece(k);
            let f = &self.forms[k];
            let emb = &b * &f.matrix * b.transpose();
            let nbk = flag.piece(k);
            let m = nbk.transpose() * g * emb * g.transpose() * &nbk;
            forms.push(match f.mode {
                ScaleMode::UpToScale => SubquotientForm::up_to_scale(&m),
                ScaleMode::Literal => SubquotientForm::literal(&m),
            });
        }
        SatakePoint::new(flag, forms)
    }
}

pub fn satake_point_equal(a: &SatakePoint, b: &SatakePoint, tol: f64) -> bool {
    if a.n() != b.n() || !a.flag.approx_eq(&b.flag, tol) {
        return false;
    }
    (0..a.forms.len()).all(|k| {
        let both_literal =
            a.forms[k].mode == ScaleMode::Literal && b.forms[k].mode == ScaleMode::Literal;
        let (ea, eb) = if both_literal {
            (a.embedded_form(k), b.embedded_form(k))
        } else {
            let pa = a.flag.piece(k);
            let pb = b.flag.piece(k);
            (
                &pa * a.forms[k].normalized() * pa.transpose(),
                &pb * b.forms[k].normalized() * pb.transpose(),
            )
        };
        let scale = linalg::max_abs(&ea).max(linalg::max_abs(&eb)).max(1.0);
        linalg::max_abs(&(ea - eb)) <= tol * scale
    })
}

/// Flag and forms generated by a frame split into column blocks:
/// W_k annihilates the columns of blocks 1..k, form k is Σ_{cols in block k} (g_jᵀ v)².
pub fn point_from_frame(frame: &Mat, blocks: &[usize], mode: ScaleMode) -> SatakePoint {
    let n = frame.nrows();
    let q = linalg::orthonormalize(frame);
    let codims = crate::spd::block_codims(blocks);
    let flag = Flag { n, codims, basis: q };
    let mut forms = Vec::new();
    let mut start = 0;
    for (k, &b) in blocks.iter().enumerate() {
        let gk = frame.columns(start, b);
        let bk = flag.piece(k);
        let m = bk.transpose() * gk * gk.transpose() * &bk;
        forms.push(match mode {
            ScaleMode::UpToScale => SubquotientForm::up_to_scale(&m),
            ScaleMode::Literal => SubquotientForm::literal(&m),
        });
        start += b;
    }
    SatakePoint { flag, forms }
}

/// Closed-form limit of a geodesic as t → ∞.
pub fn geodesic_satake_limit(gamma: &Geodesic) -> SatakePoint {
    if gamma.blocks.len() == 1 {
        return SatakePoint::interior(&(&gamma.frame * gamma.frame.transpose()));
    }
    point_from_frame(&gamma.frame, &gamma.blocks, ScaleMode::UpToScale)
}

pub fn satake_stratum_dim(n: usize, codims: &[usize]) -> Result<usize> {
    if n == 0 || !valid_codims(n, codims) {
        return Err(Error::BadCodims(codims.to_vec()));
    }
    Ok(n * n - 1 - codims.len())
}

/// Whether the stratum of `j` lies in the closure of the stratum of `i`.
pub fn satake_closure_contains(i: &[usize], j: &[usize]) -> bool {
    i.iter().all(|x| j.contains(x))
}

fn normalize_top(m: &Mat) -> Mat {
    let top = top_eigenvalue(m);
    m / top
}

fn spread(ms: &[Mat]) -> f64 {
    let mut s: f64 = 0.0;
    for a in 0..ms.len() {
        for b in a + 1..ms.len() {
            s = s.max(linalg::max_abs(&(&ms[a] - &ms[b])));
        }
    }
    s
}

/// [`best_window`] over the samples whose normalized spectrum resolves index `idx`
/// (all samples when fewer than three do).
fn best_resolved_window(seq: &[Mat], spectra: &[Vec<f64>], idx: usize, floor: f64) -> (usize, f64) {
    let keep: Vec<usize> = (0..seq.len()).filter(|&j| spectra[j][idx] > floor).collect();
    if keep.len() < 3 {
        return best_window(seq);
    }
    let sub: Vec<Mat> = keep.iter().map(|&j| seq[j].clone()).collect();
    let (end, s) = best_window(&sub);
    (keep[end], s)
}

/// Consecutive triple with the smallest pairwise spread (ties go to the later triple).
/// Returns the index of the last element of the triple and the spread.
fn best_window(seq: &[Mat]) -> (usize, f64) {
    let mut best = (seq.len() - 1, f64::INFINITY);
    for end in 2..seq.len() {
        let s = spread(&seq[end - 2..=end]);
        if s <= best.1 {
            best = (end, s);
        }
    }
    best
}

fn check_samples(samples: &[SpdMatrix]) -> Result<usize> {
    if samples.len() < 3 {
        return Err(Error::NotStabilized { spread: f64::INFINITY, tol: 0.0 });
    }
    let n = samples[0].n();
    for s in samples {
        if s.n() != n {
            return Err(Error::DimensionMismatch(n, s.n()));
        }
    }
    Ok(n)
}

/// Recursive limit: normalize, find the stable candidate, split off its range, recurse on its kernel.
pub fn sequence_limit_inductive(samples: &[SpdMatrix], tol: f64) -> Result<SatakePoint> {
    let n = check_samples(samples)?;
    let mats: Vec<Mat> = samples.iter().map(|s| s.matrix().clone()).collect();
    let pieces = inductive_level(&mats, tol)?;
    let mut basis = Mat::zeros(n, n);
    let mut codims = Vec::new();
    let mut forms = Vec::new();
    let mut col = 0;
    for (b, m) in pieces {
        basis.columns_mut(col, b.ncols()).copy_from(&b);
        col += b.ncols();
        codims.push(col);
        forms.push(SubquotientForm::up_to_scale(&m));
    }
    codims.pop();
    SatakePoint::new(Flag { n, codims, basis }, forms)
}

fn inductive_level(mats: &[Mat], tol: f64) -> Result<Vec<(Mat, Mat)>> {
    let d = mats[0].nrows();
    let normed: Vec<Mat> = mats.iter().map(normalize_top).collect();
    let (end, s) = best_window(&normed);
    if s > tol {
        return Err(Error::NotStabilized { spread: s, tol });
    }
    let y = &normed[end];
    let (vals, vecs) = linalg::sym_eigen(y);
    let r = vals.iter().filter(|&&v| v >= tol).count();
    if r == d {
        return Ok(vec![(Mat::identity(d, d), y.clone())]);
    }
    let range = vecs.columns(0, r).into_owned();
    let kernel = vecs.columns(r, d - r).into_owned();
    let form = range.transpose() * y * &range;
    let mut out = vec![(range, form)];
    if d - r == 1 {
        out.push((kernel, Mat::identity(1, 1)));
        return Ok(out);
    }
    let restricted: Vec<Mat> = mats.iter().map(|m| kernel.transpose() * m * &kernel).collect();
    for (b, f) in inductive_level(&restricted, tol)? {
        out.push((&kernel * b, f));
    }
    Ok(out)
}

/// Gap between neighbouring normalized eigenvalues above which a packet boundary can form.
pub const LOG_GAP: f64 = std::f64::consts::LN_10;
/// Relative eigenvalue size below which a sample no longer resolves an eigenvalue.
const RESOLVED_FLOOR: f64 = 1e-8;
/// Looser floor for the aligned subquotient forms, which stay accurate further out.
const FORM_FLOOR: f64 = 1e-11;

/// Packet sizes of a sequence: neighbouring eigenvalues stay in one packet unless their
/// log-gap is at least [`LOG_GAP`] and keeps growing over the last three samples that
/// resolve the smaller eigenvalue.
pub fn packet_sizes(spectra: &[Vec<f64>]) -> Vec<usize> {
    let n = spectra[0].len();
    let mut sizes = Vec::new();
    let mut cur = 1;
    for i in 0..n.saturating_sub(1) {
        let resolved: Vec<&Vec<f64>> =
            spectra.iter().filter(|mu| mu[i + 1] > RESOLVED_FLOOR).collect();
        let boundary = if resolved.len() < 3 {
            true
        } else {
            let g: Vec<f64> = resolved[resolved.len() - 3..]
                .iter()
                .map(|mu| mu[i].ln() - mu[i + 1].ln())
                .collect();
            let growth = g[2] - g[0];
            g[2] >= LOG_GAP && g[1] > g[0] && growth > 1e-3 && g[2] - g[1] >= 0.5 * (g[1] - g[0])
        };
        if boundary {
            sizes.push(cur);
            cur = 1;
        } else {
            cur += 1;
        }
    }
    sizes.push(cur);
    sizes
}

/// Non-inductive limit from eigenvalue packets of each sample.
pub fn sequence_limit_packets(samples: &[SpdMatrix], tol: f64) -> Result<SatakePoint> {
    let n = check_samples(samples)?;
    let mats: Vec<Mat> = samples.iter().map(|s| normalize_top(s.matrix())).collect();
    let eig: Vec<(Vec<f64>, Mat)> = mats.iter().map(linalg::sym_eigen).collect();
    let spectra: Vec<Vec<f64>> = eig.iter().map(|(v, _)| v.clone()).collect();
    let sizes = packet_sizes(&spectra);
    let codims = crate::spd::block_codims(&sizes);
    let p = codims.len();
    if p == 0 {
        let (end, s) = best_window(&mats);
        if s > tol {
            return Err(Error::NotStabilized { spread: s, tol });
        }
        return Ok(SatakePoint::interior(&mats[end]));
    }

    // Limit subspaces W_q from the best-stabilized projectors.
    let mut limit_proj = Vec::new();
    for &c in &codims {
        let projs: Vec<Mat> = eig
            .iter()
            .map(|(_, v)| {
                let t = v.columns(c, n - c);
                t * t.transpose()
            })
            .collect();
        let (end, s) = best_resolved_window(&projs, &spectra, c - 1, RESOLVED_FLOOR);
        if s > tol {
            return Err(Error::NotStabilized { spread: s, tol });
        }
        limit_proj.push(projs[end].clone());
    }

    // Nested orthonormal basis, deepest subspace first.
    let mut pieces: Vec<Mat> = vec![Mat::zeros(n, 0); p + 1];
    let mut acc = Mat::zeros(n, 0);
    let cuts: Vec<usize> = std::iter::once(0).chain(codims.iter().copied()).chain([n]).collect();
    for q in (1..=p).rev() {
        let want = cuts[q + 1] - cuts[q];
        let rest = Mat::identity(n, n) - &acc * acc.transpose();
        let m = &rest * &limit_proj[q - 1] * &rest;
        let (_, vecs) = linalg::sym_eigen(&m);
        let piece = linalg::orthonormalize(&vecs.columns(0, want).into_owned());
        acc = concat(&piece, &acc);
        pieces[q] = piece;
    }
    pieces[0] = linalg::complement(&acc);
    let mut basis = Mat::zeros(n, n);
    for q in 0..=p {
        basis.columns_mut(cuts[q], pieces[q].ncols()).copy_from(&pieces[q]);
    }
    let flag = Flag { n, codims: codims.clone(), basis };

    // Alignment maps h^{(j)} sending each sample's packet spaces onto the limit pieces.
    let aligned: Vec<Mat> = eig
        .iter()
        .zip(&mats)
        .map(|((_, v), x)| {
            let mut h = Mat::zeros(n, n);
            for q in 0..=p {
                let vq = v.columns(cuts[q], cuts[q + 1] - cuts[q]);
                let bq = &pieces[q];
                let o = linalg::polar_orthogonal(&(bq.transpose() * vq));
                h += bq * o * vq.transpose();
            }
            &h * x * h.transpose()
        })
        .collect();

    let mut forms = Vec::new();
    for q in 0..=p {
        let wq = flag.subspace(q);
        let rs: Vec<Mat> = aligned.iter().map(|x| normalize_top(&(wq.transpose() * x * &wq))).collect();
        let (end, s) = best_resolved_window(&rs, &spectra, cuts[q + 1] - 1, FORM_FLOOR);
        if s > tol {
            return Err(Error::NotStabilized { spread: s, tol });
        }
        let k = cuts[q + 1] - cuts[q];
        forms.push(SubquotientForm::up_to_scale(&rs[end].view((0, 0), (k, k)).into_owned()));
    }
    SatakePoint::new(flag, forms)
}

/// Orthonormalization preserving the spans of trailing column sets.
fn orthonormalize_trailing(m: &Mat) -> Mat {
    let n = m.ncols();
    let rev = Mat::from_fn(m.nrows(), n, |r, c| m[(r, n - 1 - c)]);
    let q = linalg::orthonormalize(&rev);
    Mat::from_fn(m.nrows(), n, |r, c| q[(r, n - 1 - c)])
}

fn concat(a: &Mat, b: &Mat) -> Mat {
    let mut m = Mat::zeros(a.nrows(), a.ncols() + b.ncols());
    m.columns_mut(0, a.ncols()).copy_from(a);
    m.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    m
}
