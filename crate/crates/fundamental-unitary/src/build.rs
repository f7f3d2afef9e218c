//! Construction of the fundamental isometry and its unitary extension.

use hopf_bimodule::MeasuredQuantumGroupoid;
use mva_core::algebra::AlgebraPresentation;
use mva_core::mat::{self, antilinear, CMat, CVec};
use mva_core::Gns;
use rel_tensor::basis::RelBasis;
use rel_tensor::slice;
use rel_tensor::{BasisRep, LinkKind, RelativeTensorSpace};

use crate::{FunError, Result};

/// A (pseudo-multiplicative) unitary between two relative tensor squares of
/// H, together with the leg data it intertwines.  `u` is the fundamental
/// isometry from `t_src` to `t_tgt`; `w` is the designated unitary (u* for
/// the left version, u itself for the right version).
#[derive(Debug, Clone)]
pub struct PseudoMultiplicativeUnitary {
    pub t_src: RelativeTensorSpace,
    pub t_tgt: RelativeTensorSpace,
    pub u: CMat,
    pub w: CMat,
    pub isometry_defect: f64,
    pub gns: Gns,
    /// J-twisted leg: beta-hat for the left version, alpha-hat for the right
    pub hat_images: Vec<CMat>,
    pub right_version: bool,
}

/// J x* J on H as images of the algebra units, turning a representation into
/// the commutant anti-representation and vice versa.
pub fn hat_images(gns_j: &CMat, alg: &mva_core::algebra::MultiMatrixAlgebra, images: &[CMat]) -> Vec<CMat> {
    alg.unit_labels()
        .iter()
        .map(|&(k, i, j)| antilinear::sandwich(gns_j, &images[alg.unit_index(k, j, i)]))
        .collect()
}

/// U_H(v ⊗ Λ_Φ(a)) = Σ_i ξ_i ⊗ Λ_Φ((ω_{v,ξ_i} ⋆ id)(Γ(a))) over an
/// (N°,ν°)-basis (ξ_i) of H_β, extended linearly and checked to be isometric.
pub fn build_w_with_basis(
    g: &MeasuredQuantumGroupoid,
    basis: &RelBasis,
) -> Result<PseudoMultiplicativeUnitary> {
    let gns = g.gns.clone();
    let dh = gns.dim_h;
    let alpha_leg = g.alpha_leg()?;
    let beta_hat = hat_images(&gns.jm, g.n_alg(), &g.alpha_ops());
    let beta_hat_leg = BasisRep::new(g.base.clone(), beta_hat.clone(), true)?;
    let t_src = RelativeTensorSpace::new(alpha_leg, beta_hat_leg, LinkKind::OverPsiOp)?;
    let t_tgt = g.coproduct_space()?;
    let pres = AlgebraPresentation::new(g.m_alg().clone(), gns.pi.clone())?;

    let units = g.m_alg().units();
    let cols = dh * units.len();
    let mut src = mat::zeros(t_src.dim, cols);
    let mut tgt = mat::zeros(t_tgt.dim, cols);
    let mut c = 0;
    for a in &units {
        let lam_a = gns.lambda(a);
        let gam = g.gamma_of(a);
        for k in 0..dh {
            let mut v = CVec::zeros(dh);
            v[k] = mat::cone();
            src.set_column(c, &t_src.elementary(&v, &lam_a));
            let mut out = CVec::zeros(t_tgt.dim);
            for xi in &basis.vectors {
                let sliced = slice::slice_left(&t_tgt, &v, xi, &gam);
                let (m_elt, _) = pres.pull_back(&sliced);
                out += t_tgt.elementary(xi, &gns.lambda(&m_elt));
            }
            tgt.set_column(c, &out);
            c += 1;
        }
    }
    let u = &tgt * mat::pinv(&src, 1e-12);
    finish(u, t_src, t_tgt, gns, beta_hat, false)
}

/// Left fundamental unitary W = U*_{H_Φ}.
pub fn build_w(g: &MeasuredQuantumGroupoid) -> Result<PseudoMultiplicativeUnitary> {
    let basis = g.beta_leg()?.make_basis()?;
    build_w_with_basis(g, &basis)
}

/// Right version: U'_H(Λ_Ψ(a) ⊗ v) = Σ_i Λ_Ψ((id ⋆ ω_{v,η_i})(Γ(a))) ⊗ η_i
/// over an (N,ν)-basis (η_i) of the alpha leg; W' = U'.
pub fn build_w_prime(g: &MeasuredQuantumGroupoid) -> Result<PseudoMultiplicativeUnitary> {
    let gns_psi = g.gns.sibling(g.psi()?)?;
    let dh = gns_psi.dim_h;
    let alpha_leg = g.alpha_leg()?;
    let beta_leg = g.beta_leg()?;
    let alpha_hat = hat_images(&gns_psi.jm, g.n_alg(), &g.beta_ops());
    let alpha_hat_leg = BasisRep::new(g.base.clone(), alpha_hat.clone(), false)?;
    let t_src = RelativeTensorSpace::new(alpha_hat_leg, beta_leg, LinkKind::OverPsiOp)?;
    let t_tgt = g.coproduct_space()?;
    let t_gamma = g.coproduct_space()?;
    let pres = AlgebraPresentation::new(g.m_alg().clone(), gns_psi.pi.clone())?;
    let basis = alpha_leg.make_basis()?;

    let units = g.m_alg().units();
    let cols = dh * units.len();
    let mut src = mat::zeros(t_src.dim, cols);
    let mut tgt = mat::zeros(t_tgt.dim, cols);
    let mut c = 0;
    for a in &units {
        let lam_a = gns_psi.lambda(a);
        let gam = g.gamma_of(a);
        for k in 0..dh {
            let mut v = CVec::zeros(dh);
            v[k] = mat::cone();
            src.set_column(c, &t_src.elementary(&lam_a, &v));
            let mut out = CVec::zeros(t_tgt.dim);
            for eta in &basis.vectors {
                let sliced = slice::slice_right(&t_gamma, &v, eta, &gam);
                let (m_elt, _) = pres.pull_back(&sliced);
                out += t_tgt.elementary(&gns_psi.lambda(&m_elt), eta);
            }
            tgt.set_column(c, &out);
            c += 1;
        }
    }
    let u = &tgt * mat::pinv(&src, 1e-12);
    finish(u, t_src, t_tgt, gns_psi, alpha_hat, true)
}

fn finish(
    u: CMat,
    t_src: RelativeTensorSpace,
    t_tgt: RelativeTensorSpace,
    gns: Gns,
    hat: Vec<CMat>,
    right_version: bool,
) -> Result<PseudoMultiplicativeUnitary> {
    let iso = mat::diff_norm(&(u.adjoint() * &u), &mat::eye(t_src.dim))
        .max(mat::diff_norm(&(&u * u.adjoint()), &mat::eye(t_tgt.dim)));
    if iso > 1e-7 {
        return Err(FunError::IsometryDefect(iso));
    }
    let w = if right_version { u.clone() } else { u.adjoint() };
    Ok(PseudoMultiplicativeUnitary {
        t_src,
        t_tgt,
        u,
        w,
        isometry_defect: iso,
        gns,
        hat_images: hat,
        right_version,
    })
}
