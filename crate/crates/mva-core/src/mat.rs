//! Dense complex matrix utilities: Hermitian/normal eigendecomposition,
//! functional calculus, principal logarithms, pseudo-inverses, nullspaces.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::Rng;

use crate::{MvaError, Result};

pub type C = Complex<f64>;
pub type CMat = DMatrix<C>;
pub type CVec = DVector<C>;

pub fn czero() -> C {
    C::new(0.0, 0.0)
}

pub fn cone() -> C {
    C::new(1.0, 0.0)
}

pub fn ci() -> C {
    C::new(0.0, 1.0)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

/// Largest entry magnitude; the norm used by every residual report.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

pub fn diff_norm(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b))
}

pub fn vec_diff_norm(a: &CVec, b: &CVec) -> f64 {
    (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Inner product, linear in the first argument.
pub fn inner(x: &CVec, y: &CVec) -> C {
    y.dotc(x)
}

/// Hilbert-Schmidt inner product Tr(b* a).
pub fn hs_inner(a: &CMat, b: &CMat) -> C {
    b.iter().zip(a.iter()).map(|(y, x)| y.conj() * x).sum()
}

/// Row-major vectorization; pairs (i,j) map to i*ncols+j, consistent with
/// `kronecker` index order.
pub fn vec_of(m: &CMat) -> CVec {
    let (r, c) = m.shape();
    CVec::from_fn(r * c, |k, _| m[(k / c, k % c)])
}

pub fn mat_of(v: &CVec, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |i, j| v[i * cols + j])
}

pub fn conj_mat(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

/// Eigendecomposition of a Hermitian matrix: (ascending real eigenvalues, unitary U)
/// with m = U diag(ev) U*.
pub fn herm_eig(m: &CMat) -> (Vec<f64>, CMat) {
    let se = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let ev: Vec<f64> = idx.iter().map(|&k| se.eigenvalues[k]).collect();
    let u = CMat::from_fn(n, n, |i, j| se.eigenvectors[(i, idx[j])]);
    (ev, u)
}

/// Functional calculus on a Hermitian matrix.
pub fn func_herm(m: &CMat, f: impl Fn(f64) -> C) -> CMat {
    let (ev, u) = herm_eig(m);
    let d = CMat::from_diagonal(&CVec::from_iterator(ev.len(), ev.iter().map(|&x| f(x))));
    &u * d * u.adjoint()
}

/// m^p for positive semidefinite m, treating eigenvalues below `cut * max` as zero
/// (so negative powers act as pseudo-inverses on the support).
pub fn psd_pow_cut(m: &CMat, p: f64, cut: f64) -> CMat {
    let (ev, u) = herm_eig(m);
    let top = ev.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let d = CMat::from_diagonal(&CVec::from_iterator(
        ev.len(),
        ev.iter().map(|&x| {
            if x > top * cut {
                C::new(x.powf(p), 0.0)
            } else {
                czero()
            }
        }),
    ));
    &u * d * u.adjoint()
}

/// m^{it} for positive definite Hermitian m.
pub fn pow_it(m: &CMat, t: f64) -> CMat {
    func_herm(m, |x| (ci() * C::new(t * x.ln(), 0.0)).exp())
}

/// m^z for positive definite Hermitian m and complex exponent z.
pub fn pow_c(m: &CMat, z: C) -> CMat {
    func_herm(m, |x| (z * x.ln()).exp())
}

/// Eigendecomposition of a normal matrix via its commuting Hermitian parts.
/// Returns (complex eigenvalues, unitary U) with m = U diag(ev) U*.
pub fn eig_normal(m: &CMat) -> Result<(Vec<C>, CMat)> {
    let a = (m + m.adjoint()).scale(0.5);
    let b = (m - m.adjoint()) * C::new(0.0, -0.5);
    let comm = diff_norm(&(&a * &b), &(&b * &a));
    let scale = max_abs(m).max(1.0);
    if comm > 1e-8 * scale * scale.max(1.0) {
        return Err(MvaError::NotOfKind("normal", comm));
    }
    let (eva, mut u) = herm_eig(&a);
    let n = m.nrows();
    let tol = 1e-8 * (eva.iter().fold(1.0f64, |x, &y| x.max(y.abs())));
    // diagonalize b within each eigenvalue cluster of a
    let mut start = 0;
    let mut evs = vec![czero(); n];
    while start < n {
        let mut end = start + 1;
        while end < n && (eva[end] - eva[end - 1]).abs() <= tol {
            end += 1;
        }
        let k = end - start;
        let uc = u.columns(start, k).into_owned();
        let bc = uc.adjoint() * &b * &uc;
        let (evb, v) = herm_eig(&bc);
        let newcols = uc * v;
        u.columns_mut(start, k).copy_from(&newcols);
        for (off, lb) in evb.iter().enumerate() {
            evs[start + off] = C::new(eva[start], 0.0) + ci() * C::new(*lb, 0.0);
        }
        start = end;
    }
    Ok((evs, u))
}

/// Principal logarithm of a normal matrix with no spectrum near the negative
/// real axis (guard = minimal angular distance in radians).
pub fn log_principal(m: &CMat, guard: f64) -> Result<CMat> {
    let (evs, u) = eig_normal(m)?;
    let mut d = zeros(evs.len(), evs.len());
    for (k, w) in evs.iter().enumerate() {
        if w.norm() < 1e-300 {
            return Err(MvaError::Singular("log_principal", w.norm()));
        }
        let arg = w.arg();
        if (std::f64::consts::PI - arg.abs()) < guard {
            return Err(MvaError::BranchCut(arg));
        }
        d[(k, k)] = C::new(w.norm().ln(), arg);
    }
    Ok(&u * d * u.adjoint())
}

/// Moore-Penrose pseudo-inverse with relative singular-value cutoff.
pub fn pinv(m: &CMat, rcond: f64) -> CMat {
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
    svd.pseudo_inverse(rcond * smax.max(1e-300)).unwrap()
}

/// Least-squares solve of A X = B.
pub fn lstsq(a: &CMat, b: &CMat) -> CMat {
    pinv(a, 1e-12) * b
}

/// Orthonormal basis of the (right) nullspace of A, via the Hermitian Gram A*A.
pub fn nullspace(a: &CMat, tol: f64) -> Vec<CVec> {
    let g = a.adjoint() * a;
    let (ev, u) = herm_eig(&g);
    let top = ev.iter().fold(1.0f64, |x, &y| x.max(y.abs()));
    let thresh = (tol * tol * top).max(1e-13 * top);
    let mut out = Vec::new();
    for (k, &l) in ev.iter().enumerate() {
        if l <= thresh {
            out.push(u.column(k).into_owned());
        }
    }
    out
}

/// Build the matrix of a linear map on C^n from its action on basis vectors.
pub fn op_from_action(n_in: usize, n_out: usize, f: impl Fn(&CVec) -> CVec) -> CMat {
    let mut m = zeros(n_out, n_in);
    for j in 0..n_in {
        let mut e = CVec::zeros(n_in);
        e[j] = cone();
        m.set_column(j, &f(&e));
    }
    m
}

/// Solve the antilinear least-squares problem A conj(x_k) = y_k for the matrix A;
/// equivalent to an ordinary least-squares on conjugated inputs.  Returns
/// (A, relative residual).
pub fn solve_antilinear(xs: &[CVec], ys: &[CVec]) -> (CMat, f64) {
    let n_in = xs[0].len();
    let n_out = ys[0].len();
    let mut xm = zeros(n_in, xs.len());
    let mut ym = zeros(n_out, xs.len());
    for (k, (x, y)) in xs.iter().zip(ys.iter()).enumerate() {
        xm.set_column(k, &x.map(|z| z.conj()));
        ym.set_column(k, y);
    }
    let a = &ym * pinv(&xm, 1e-12);
    let res = diff_norm(&(&a * &xm), &ym);
    let scale = max_abs(&ym).max(1e-300);
    (a, res / scale)
}

/// Antilinear operator composition helpers.  An antilinear operator is stored as
/// the matrix of v -> A conj(v).
pub mod antilinear {
    use super::*;

    /// Apply the antilinear operator.
    pub fn apply(a: &CMat, v: &CVec) -> CVec {
        a * v.map(|z| z.conj())
    }

    /// Compose antilinear after linear: (A ∘ L)(v) = A conj(Lv); matrix A conj(L).
    pub fn after_linear(a: &CMat, l: &CMat) -> CMat {
        a * conj_mat(l)
    }

    /// Compose linear after antilinear: matrix L A.
    pub fn before_linear(l: &CMat, a: &CMat) -> CMat {
        l * a
    }

    /// Compose two antilinear operators into a linear one: A1 conj(A2).
    pub fn compose(a1: &CMat, a2: &CMat) -> CMat {
        a1 * conj_mat(a2)
    }

    /// J x J for an (involutive) antilinear J applied on both sides of a linear
    /// operator; the result is linear with matrix J conj(x) conj(J).
    pub fn sandwich(j: &CMat, x: &CMat) -> CMat {
        j * conj_mat(x) * conj_mat(j)
    }

    /// Adjoint of an antilinear operator (A^# with <A v, w> = <A^# w, v>):
    /// matrix transpose.
    pub fn adjoint(a: &CMat) -> CMat {
        a.transpose()
    }
}

pub fn random_mat(n: usize, m: usize, rng: &mut impl Rng) -> CMat {
    CMat::from_fn(n, m, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn random_herm(n: usize, rng: &mut impl Rng) -> CMat {
    let a = random_mat(n, n, rng);
    (&a + a.adjoint()).scale(0.5)
}

pub fn random_unit_vec(n: usize, rng: &mut impl Rng) -> CVec {
    let v = CVec::from_fn(n, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let nrm = v.norm();
    v.unscale(nrm)
}
