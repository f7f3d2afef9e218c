//! The pentagon relation of the fundamental unitary, phrased over the five
//! relative tensor products it connects, with every flip and leg permutation
//! realized as a transport between explicitly nested triple products.

use hopf_bimodule::MeasuredQuantumGroupoid;
use mva_core::mat::{self, CMat};
use rel_tensor::{class, BasisRep, ClassSpace, LinkKind, RelativeTensorSpace};

use crate::build::PseudoMultiplicativeUnitary;
use crate::{FunError, Result};

enum Nest {
    // inner product sits on legs 2,3; the extra leg is appended on the left
    Right,
    // inner product sits on legs 1,2; the extra leg is appended on the right
    Left,
}

fn triple(
    inner: &RelativeTensorSpace,
    outer_left: BasisRep,
    outer_right: BasisRep,
    kind: LinkKind,
    nest: Nest,
) -> Result<ClassSpace> {
    let outer = RelativeTensorSpace::new(outer_left, outer_right, kind)?;
    Ok(match nest {
        Nest::Right => inner.space.nest_right(&outer.space, outer.left.dim_h),
        Nest::Left => inner.space.nest_left(&outer.space, outer.right.dim_h),
    })
}

/// Residual of the pentagon relation for the left-version unitary.
pub fn check_pentagon(
    g: &MeasuredQuantumGroupoid,
    pmu: &PseudoMultiplicativeUnitary,
) -> Result<f64> {
    if pmu.right_version {
        return Err(FunError::WrongVersion("left"));
    }
    let gns = &pmu.gns;
    let dh = gns.dim_h;
    let eye = mat::eye(dh);
    let alpha_leg = || g.alpha_leg();
    let beta_leg = || g.beta_leg();
    let hat_leg = || BasisRep::new(g.base.clone(), pmu.hat_images.clone(), true);

    // pairwise products on adjacent legs
    let t_ba = RelativeTensorSpace::new(beta_leg()?, alpha_leg()?, LinkKind::OverPsi)?;
    let t_abh = RelativeTensorSpace::new(alpha_leg()?, hat_leg()?, LinkKind::OverPsiOp)?;
    let t_bha = RelativeTensorSpace::new(hat_leg()?, alpha_leg()?, LinkKind::OverPsi)?;
    let t_ab = RelativeTensorSpace::new(alpha_leg()?, beta_leg()?, LinkKind::OverPsiOp)?;

    let alpha_ops = g.alpha_ops();
    let beta_ops = g.beta_ops();
    let hat_ops = &pmu.hat_images;
    // lift a family of leg operators through a pairwise product, acting on
    // its first or second factor
    let lifted = |t: &RelativeTensorSpace, ops: &[CMat], first: bool, anti: bool| -> Result<BasisRep> {
        let images: Vec<CMat> = ops
            .iter()
            .map(|x| {
                if first {
                    t.op_tensor_unchecked(x, &eye)
                } else {
                    t.op_tensor_unchecked(&eye, x)
                }
            })
            .collect();
        Ok(BasisRep::new(g.base.clone(), images, anti)?)
    };

    // the unitary as an ambient operator on H ⊗ H
    let v_amb = &pmu.t_src.space.p * &pmu.w * &pmu.t_tgt.space.e;
    let swap = class::swap_matrix(dh, dh);
    let cycle = class::leg_permutation(&[dh, dh, dh], &[2, 0, 1]);
    let kron_l = |m: &CMat| m.kronecker(&eye);
    let kron_r = |m: &CMat| eye.kronecker(m);

    // nested triples along the two sides of the relation
    let x1r = triple(&t_ba, beta_leg()?, lifted(&t_ba, &alpha_ops, true, false)?, LinkKind::OverPsi, Nest::Right)?;
    let x1l = triple(&t_ba, lifted(&t_ba, &beta_ops, false, true)?, alpha_leg()?, LinkKind::OverPsi, Nest::Left)?;
    let x2r = triple(&t_abh, beta_leg()?, lifted(&t_abh, &alpha_ops, false, false)?, LinkKind::OverPsi, Nest::Right)?;
    let x3r = triple(&t_bha, beta_leg()?, lifted(&t_bha, &alpha_ops, true, false)?, LinkKind::OverPsi, Nest::Right)?;
    let x4r = triple(&t_ba, alpha_leg()?, lifted(&t_ba, hat_ops, false, true)?, LinkKind::OverPsiOp, Nest::Right)?;
    let x5r = triple(&t_abh, alpha_leg()?, lifted(&t_abh, &beta_ops, true, true)?, LinkKind::OverPsiOp, Nest::Right)?;
    let x5l = triple(&t_ab, lifted(&t_ab, &alpha_ops, false, false)?, hat_leg()?, LinkKind::OverPsiOp, Nest::Left)?;
    let x6l = triple(&t_ba, lifted(&t_ba, &alpha_ops, true, false)?, hat_leg()?, LinkKind::OverPsiOp, Nest::Left)?;
    let x7l = triple(&t_abh, lifted(&t_abh, &alpha_ops, false, false)?, hat_leg()?, LinkKind::OverPsiOp, Nest::Left)?;
    let y2l = triple(&t_abh, lifted(&t_abh, &beta_ops, false, true)?, alpha_leg()?, LinkKind::OverPsi, Nest::Left)?;
    let y2r = triple(&t_ba, alpha_leg()?, lifted(&t_ba, hat_ops, true, true)?, LinkKind::OverPsiOp, Nest::Right)?;
    let x7r = triple(&t_abh, alpha_leg()?, lifted(&t_abh, hat_ops, true, true)?, LinkKind::OverPsiOp, Nest::Right)?;

    let tr = class::transport;
    let id3 = mat::eye(dh * dh * dh);

    let f1 = tr(&x1r, &x2r, &kron_r(&v_amb));
    let f2 = tr(&x2r, &x3r, &kron_r(&swap));
    let f3 = tr(&x3r, &x4r, &cycle);
    let f4 = tr(&x4r, &x5r, &kron_r(&v_amb));
    let t5 = tr(&x5r, &x5l, &id3);
    let f5 = tr(&x5l, &x6l, &kron_l(&swap));
    let f6 = tr(&x6l, &x7l, &kron_l(&v_amb));
    let lhs = f6 * f5 * t5 * f4 * f3 * f2 * f1;

    let a0 = tr(&x1r, &x1l, &id3);
    let g1 = tr(&x1l, &y2l, &kron_l(&v_amb));
    let ty = tr(&y2l, &y2r, &id3);
    let g2 = tr(&y2r, &x7r, &kron_r(&v_amb));
    let t7 = tr(&x7r, &x7l, &id3);
    let rhs = t7 * g2 * ty * g1 * a0;

    Ok(mat::diff_norm(&lhs, &rhs))
}
