//! The relative tensor product as a Gram quotient, operator tensor products,
//! flips, and fiber products.

use mva_core::algebra::{self, AlgebraPresentation};
use mva_core::mat::{self, psd_pow_cut, CMat, CVec};

use crate::basis::BasisRep;
use crate::class::{swap_matrix, ClassSpace};
use crate::{RelError, Result};

/// Which base weight the product is taken over, fixing which leg carries which
/// kind of action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkKind {
    /// over psi: left leg anti-representation (beta), right leg representation (alpha)
    OverPsi,
    /// over psi-opposite: left leg representation (alpha), right leg anti-representation (beta)
    OverPsiOp,
}

#[derive(Debug, Clone)]
pub struct RelativeTensorSpace {
    pub left: BasisRep,
    pub right: BasisRep,
    pub kind: LinkKind,
    pub dim: usize,
    /// Gram operator on the ambient tensor product.
    pub q: CMat,
    pub space: ClassSpace,
}

impl RelativeTensorSpace {
    pub fn new(left: BasisRep, right: BasisRep, kind: LinkKind) -> Result<Self> {
        match kind {
            LinkKind::OverPsi => {
                if !left.anti || right.anti {
                    return Err(RelError::Mismatch("OverPsi needs (anti, rep) legs"));
                }
            }
            LinkKind::OverPsiOp => {
                if left.anti || !right.anti {
                    return Err(RelError::Mismatch("OverPsiOp needs (rep, anti) legs"));
                }
            }
        }
        let (dh, dk) = (left.dim_h, right.dim_h);
        // brackets of the left leg's standard basis vectors
        let r_ops: Vec<CMat> = (0..dh)
            .map(|k| {
                let mut e = CVec::zeros(dh);
                e[k] = mat::cone();
                left.r_op(&e)
            })
            .collect();
        let mut q = mat::zeros(dh * dk, dh * dk);
        for i in 0..dh {
            for j in 0..dh {
                let target = if left.anti {
                    r_ops[i].adjoint() * &r_ops[j]
                } else {
                    let x = r_ops[j].adjoint() * &r_ops[i];
                    mat::antilinear::sandwich(&left.base.jm, &x)
                };
                let (n, res) = left.pull_base(&target);
                if res > 1e-7 {
                    return Err(RelError::BracketEscape(res));
                }
                let block = right.apply(&n);
                for k in 0..dk {
                    for l in 0..dk {
                        q[(i * dk + k, j * dk + l)] = block[(k, l)];
                    }
                }
            }
        }
        q = (&q + q.adjoint()).scale(0.5);
        let (ev, u) = mat::herm_eig(&q);
        let top = ev.iter().fold(0.0f64, |a, &x| a.max(x));
        if ev[0] < -1e-8 * top.max(1.0) {
            return Err(RelError::GramNegative(ev[0]));
        }
        let keep: Vec<usize> = (0..ev.len()).filter(|&k| ev[k] > 1e-10 * top).collect();
        let dim = keep.len();
        let mut v = mat::zeros(dh * dk, dim);
        for (c, &k) in keep.iter().enumerate() {
            v.set_column(c, &u.column(k));
        }
        let q_sqrt = psd_pow_cut(&q, 0.5, 1e-10);
        let q_isqrt = psd_pow_cut(&q, -0.5, 1e-10);
        let space = ClassSpace {
            dim,
            ambient: dh * dk,
            e: v.adjoint() * &q_sqrt,
            p: &q_isqrt * &v,
            v,
        };
        Ok(RelativeTensorSpace { left, right, kind, dim, q, space })
    }

    /// Support projection on the ambient tensor product.
    pub fn support(&self) -> CMat {
        &self.space.v * self.space.v.adjoint()
    }

    /// Class of an elementary tensor.
    pub fn elementary(&self, xi: &CVec, eta: &CVec) -> CVec {
        let amb = CVec::from_fn(xi.len() * eta.len(), |k, _| {
            xi[k / eta.len()] * eta[k % eta.len()]
        });
        self.space.class(&amb)
    }

    /// x ⊗ y on the quotient; x must commute with the left action, y with the right.
    pub fn op_tensor(&self, x: &CMat, y: &CMat) -> Result<CMat> {
        let worst = self
            .left
            .images
            .iter()
            .map(|g| mat::diff_norm(&(x * g), &(g * x)))
            .chain(self.right.images.iter().map(|g| mat::diff_norm(&(y * g), &(g * y))))
            .fold(0.0f64, f64::max);
        if worst > 1e-7 {
            return Err(RelError::NotModular(worst));
        }
        Ok(self.space.compress(&x.kronecker(y)))
    }

    /// Same compression without the commutant membership check (for operators
    /// known to preserve classes for structural reasons).
    pub fn op_tensor_unchecked(&self, x: &CMat, y: &CMat) -> CMat {
        self.space.compress(&x.kronecker(y))
    }

    /// Left slice map λ_ξ : K -> T, η ↦ class(ξ ⊗ η).
    pub fn lambda_slice(&self, xi: &CVec) -> CMat {
        mat::op_from_action(self.right.dim_h, self.dim, |eta| self.elementary(xi, eta))
    }

    /// Right slice map ρ_η : H -> T, ξ ↦ class(ξ ⊗ η).
    pub fn rho_slice(&self, eta: &CVec) -> CMat {
        mat::op_from_action(self.left.dim_h, self.dim, |xi| self.elementary(xi, eta))
    }
}

/// Unitary flip between T(left β ⊗ right α over ψ) and the opposite-ordered
/// product over ψ°: classes [ξ⊗η] ↦ [η⊗ξ].
pub fn flip(src: &RelativeTensorSpace, dst: &RelativeTensorSpace) -> CMat {
    let s = swap_matrix(src.left.dim_h, src.right.dim_h);
    &dst.space.e * s * &src.space.p
}

/// Fiber product M1 ⋆_N M2 on the quotient: commutant of the algebra generated
/// by compressed commutant tensor factors.
pub fn fiber_product(
    m1_images: &[CMat],
    m2_images: &[CMat],
    t: &RelativeTensorSpace,
    seed: u64,
) -> Result<AlgebraPresentation> {
    let m1p = algebra::commutant_basis(m1_images);
    let m2p = algebra::commutant_basis(m2_images);
    let mut gens: Vec<CMat> = Vec::new();
    let idk = mat::eye(t.right.dim_h);
    let idh = mat::eye(t.left.dim_h);
    for x in &m1p {
        gens.push(t.space.compress(&x.kronecker(&idk)));
    }
    for y in &m2p {
        gens.push(t.space.compress(&idh.kronecker(y)));
    }
    let span = algebra::commutant_basis(&algebra::generate_algebra(&gens, 1e-10));
    algebra::recover_structure(&span, seed).map_err(RelError::Core)
}
