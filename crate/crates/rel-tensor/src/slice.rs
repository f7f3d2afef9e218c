//! Slice maps on relative tensor products and weight slicing.

use mva_core::algebra::AlgebraPresentation;
use mva_core::mat::{self, CMat, CVec};
use mva_core::weight::Weight;

use crate::rel::RelativeTensorSpace;

/// (ω_{ξ1,ξ2} ⋆ id)(A): slice the left leg; result acts on the right leg.
pub fn slice_left(t: &RelativeTensorSpace, xi1: &CVec, xi2: &CVec, a: &CMat) -> CMat {
    t.lambda_slice(xi2).adjoint() * a * t.lambda_slice(xi1)
}

/// (id ⋆ ω_{η1,η2})(A): slice the right leg; result acts on the left leg.
pub fn slice_right(t: &RelativeTensorSpace, eta1: &CVec, eta2: &CVec, a: &CMat) -> CMat {
    t.rho_slice(eta2).adjoint() * a * t.rho_slice(eta1)
}

/// A density on the representation space implementing a weight of a
/// represented algebra: Tr(D pres(x)) = φ(x).  Least-norm Hermitian solution.
pub fn implementing_density(pres: &AlgebraPresentation, w: &Weight) -> CMat {
    let d = pres.rep_dim();
    let n = pres.images.len();
    let units = pres.alg.units();
    let mut c = mat::zeros(n, d * d);
    let mut b = CVec::zeros(n);
    for (u, x) in pres.images.iter().enumerate() {
        // Tr(D X) = vec(D) · vec(X^T)
        c.set_row(u, &mat::vec_of(&x.transpose()).transpose());
        b[u] = w.value(&units[u]);
    }
    let vd = mat::pinv(&c, 1e-12) * b;
    let dm = mat::mat_of(&vd, d, d);
    (&dm + dm.adjoint()).scale(0.5)
}

/// (φ ⋆ id)(A): slice the left leg by a weight of the algebra represented there.
pub fn slice_weight_left(
    t: &RelativeTensorSpace,
    pres: &AlgebraPresentation,
    w: &Weight,
    a: &CMat,
) -> CMat {
    let dm = implementing_density(pres, w);
    let (ev, u) = mat::herm_eig(&dm);
    let mut out = mat::zeros(t.right.dim_h, t.right.dim_h);
    for (k, &l) in ev.iter().enumerate() {
        if l.abs() > 1e-14 {
            let g = u.column(k).into_owned();
            out += slice_left(t, &g, &g, a) * mat::C::new(l, 0.0);
        }
    }
    out
}

/// (id ⋆ φ)(A): slice the right leg by a weight of the algebra represented there.
pub fn slice_weight_right(
    t: &RelativeTensorSpace,
    pres: &AlgebraPresentation,
    w: &Weight,
    a: &CMat,
) -> CMat {
    let dm = implementing_density(pres, w);
    let (ev, u) = mat::herm_eig(&dm);
    let mut out = mat::zeros(t.left.dim_h, t.left.dim_h);
    for (k, &l) in ev.iter().enumerate() {
        if l.abs() > 1e-14 {
            let g = u.column(k).into_owned();
            out += slice_right(t, &g, &g, a) * mat::C::new(l, 0.0);
        }
    }
    out
}
