//! Dense kernels: cyclic Jacobi, Cholesky, orthonormalization, block LDL.

use nalgebra::DMatrix;

pub type Mat = DMatrix<f64>;

pub fn symmetrize(a: &Mat) -> Mat {
    (a + a.transpose()) * 0.5
}

pub fn max_abs(a: &Mat) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn off_norm(a: &Mat) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Symmetric eigendecomposition by cyclic Jacobi sweeps.
///
/// Returns eigenvalues sorted non-increasing and the matching eigenvectors as columns.
pub fn sym_eigen(a: &Mat) -> (Vec<f64>, Mat) {
    let n = a.nrows();
    let mut a = symmetrize(a);
    let mut v = Mat::identity(n, n);
    let norm = a.norm();
    if n > 1 && norm > 0.0 {
        for _sweep in 0..100 {
            if off_norm(&a) < 1e-12 * norm {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap_or(std::cmp::Ordering::Equal));
    let vals = idx.iter().map(|&i| a[(i, i)]).collect();
    let vecs = Mat::from_fn(n, n, |r, c| v[(r, idx[c])]);
    (vals, vecs)
}

/// Lower Cholesky factor; `None` unless every pivot exceeds `1e-12 * trace / n`.
pub fn cholesky(a: &Mat) -> Option<Mat> {
    let n = a.nrows();
    let tr: f64 = (0..n).map(|i| a[(i, i)]).sum();
    let floor = 1e-12 * tr / n.max(1) as f64;
    if !(tr > 0.0) {
        return None;
    }
    cholesky_with_floor(a, floor)
}

/// Lower Cholesky factor requiring only positive pivots.
pub fn cholesky_loose(a: &Mat) -> Option<Mat> {
    cholesky_with_floor(a, 0.0)
}

fn cholesky_with_floor(a: &Mat, floor: f64) -> Option<Mat> {
    let n = a.nrows();
    let mut l = Mat::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > floor) {
            return None;
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Some(l)
}

/// Solves `L x = b` column-wise for lower-triangular `L`.
pub fn lower_solve(l: &Mat, b: &Mat) -> Mat {
    let n = l.nrows();
    let mut x = b.clone();
    for c in 0..b.ncols() {
        for i in 0..n {
            let mut s = x[(i, c)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)];
        }
    }
    x
}

/// `L^{-1} A L^{-T}` for lower-triangular `L`.
pub fn congruence_by_inverse(l: &Mat, a: &Mat) -> Mat {
    let y = lower_solve(l, a);
    let z = lower_solve(l, &y.transpose());
    symmetrize(&z)
}

pub fn inverse(a: &Mat) -> Option<Mat> {
    a.clone().try_inverse()
}

/// Modified Gram-Schmidt with one reorthogonalization pass.
/// Columns that become numerically dependent are dropped.
pub fn orthonormalize(cols: &Mat) -> Mat {
    let n = cols.nrows();
    let mut out: Vec<nalgebra::DVector<f64>> = Vec::new();
    for c in 0..cols.ncols() {
        let mut v = cols.column(c).into_owned();
        let scale = v.norm();
        for _ in 0..2 {
            for q in &out {
                let d = q.dot(&v);
                v -= q * d;
            }
        }
        let nv = v.norm();
        if nv > 1e-10 * scale.max(f64::MIN_POSITIVE) {
            out.push(v / nv);
        }
    }
    let mut m = Mat::zeros(n, out.len());
    for (j, q) in out.iter().enumerate() {
        m.set_column(j, q);
    }
    m
}

/// Orthonormal basis of the orthogonal complement of the column span of `b` (b orthonormal).
pub fn complement(b: &Mat) -> Mat {
    let n = b.nrows();
    let k = b.ncols();
    if k == 0 {
        return Mat::identity(n, n);
    }
    let p = Mat::identity(n, n) - b * b.transpose();
    let (_, vecs) = sym_eigen(&p);
    vecs.columns(0, n - k).into_owned()
}

/// Orthogonal factor of the polar decomposition.
pub fn polar_orthogonal(m: &Mat) -> Mat {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("svd u");
    let vt = svd.v_t.expect("svd v_t");
    u * vt
}

/// Block LDLᵀ of a symmetric positive definite matrix: `a = L D Lᵀ` with `L` unit
/// block-lower-triangular and `D` block diagonal; returns `(L, [D_k])`.
pub fn block_ldl(a: &Mat, blocks: &[usize]) -> Option<(Mat, Vec<Mat>)> {
    let n = a.nrows();
    let mut s = a.clone();
    let mut l = Mat::identity(n, n);
    let mut ds = Vec::new();
    let mut start = 0;
    for &b in blocks {
        let end = start + b;
        let d = symmetrize(&s.view((start, start), (b, b)).into_owned());
        let dinv = d.clone().try_inverse()?;
        if end < n {
            let m = n - end;
            let c = s.view((end, start), (m, b)).into_owned();
            let lk = &c * &dinv;
            l.view_mut((end, start), (m, b)).copy_from(&lk);
            let upd = s.view((end, end), (m, m)).into_owned() - &lk * c.transpose();
            s.view_mut((end, end), (m, m)).copy_from(&upd);
        }
        ds.push(d);
        start = end;
    }
    Some((l, ds))
}

/// Principal square root of a symmetric positive semidefinite matrix.
pub fn sym_sqrt(a: &Mat) -> Mat {
    let (vals, vecs) = sym_eigen(a);
    let d = Mat::from_diagonal(&nalgebra::DVector::from_iterator(
        vals.len(),
        vals.iter().map(|v| v.max(0.0).sqrt()),
    ));
    &vecs * d * vecs.transpose()
}
