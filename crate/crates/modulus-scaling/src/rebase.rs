//! Rebasing the bundle along a perturbation of the basis weight, and the
//! transformation laws linking the old and new derived data.

use antipode_engine::build_antipode;
use hopf_bimodule::{MeasuredQuantumGroupoid, OperatorValuedWeight, Report};
use mva_core::mat::{self, antilinear, herm_eig, pow_it, psd_pow_cut, CMat};
use mva_core::weight::connes_cocycle;
use mva_core::Gns;

use crate::manageable::build_p;
use crate::modulus::{extract_modulus, T_GRID};
use crate::{Result, ScaError};

/// The rebased bundle together with a report tying its coinvolution, scaling
/// group, scaling constant, modulus and implementing operator to the old ones.
#[derive(Debug, Clone)]
pub struct RebaseOutcome {
    pub bundle: MeasuredQuantumGroupoid,
    pub report: Report,
}

fn positivity(n_alg: &mva_core::algebra::MultiMatrixAlgebra, x: &CMat) -> Result<()> {
    let herm = mat::diff_norm(x, &x.adjoint());
    let member = n_alg.membership_error(x);
    if herm > 1e-10 || member > 1e-10 {
        return Err(ScaError::NotPositive(herm.max(member)));
    }
    let (ev, _) = herm_eig(x);
    if ev[0] <= 1e-12 {
        return Err(ScaError::NotPositive(1e-12 - ev[0]));
    }
    Ok(())
}

/// Replace the basis weight ν by its perturbation ν' = ν_h (with k recording
/// the quadratic part of the expected cocycle k^{it²/2} h^{it}), rebuild the
/// bundle on the same Hilbert space, and verify the transformation laws.
pub fn rebase_weight(
    g: &MeasuredQuantumGroupoid,
    h: &CMat,
    k: &CMat,
) -> Result<RebaseOutcome> {
    let n_alg = g.n_alg();
    let m_alg = g.m_alg().clone();
    positivity(n_alg, h)?;
    positivity(n_alg, k)?;
    let comm = mat::diff_norm(&(h * k), &(k * h));
    if comm > 1e-10 {
        return Err(ScaError::NonCommuting(comm));
    }

    let nu = &g.base.weight;
    let nu2 = nu.perturb(n_alg, h)?;
    let mut rep = Report::new("rebase");

    let mut coc = 0.0f64;
    for &t in &T_GRID {
        let got = connes_cocycle(&nu2, nu, t);
        let want = pow_it(k, t * t / 2.0) * pow_it(h, t);
        coc = coc.max(mat::diff_norm(&got, &want));
    }
    rep.push("basis cocycle has the declared form", coc);

    let h_root = psd_pow_cut(h, 0.5, 1e-14);
    let bh = g.beta_of(&h_root);
    let ah = g.alpha_of(&h_root);
    let left_images: Vec<CMat> = m_alg
        .units()
        .iter()
        .map(|e| g.t_left.apply(&m_alg, &(&bh * e * &bh)))
        .collect();
    let right_images: Vec<CMat> = m_alg
        .units()
        .iter()
        .map(|e| g.t_right.apply(&m_alg, &(&ah * e * &ah)))
        .collect();
    let t_left2 = OperatorValuedWeight::new(g.t_left.via_alpha, left_images);
    let t_right2 = OperatorValuedWeight::new(g.t_right.via_alpha, right_images);

    let base2 = Gns::canonical(n_alg.clone(), nu2.clone())?;
    let phi2 = t_left2.compose_weight(&m_alg, &nu2)?;
    let gns2 = g.gns.sibling(phi2)?;

    let mut g2 = MeasuredQuantumGroupoid {
        base: base2,
        gns: gns2,
        alpha: g.alpha.clone(),
        beta: g.beta.clone(),
        gamma: g.gamma.clone(),
        t_left: t_left2,
        t_right: t_right2,
    };
    let t_old = g.coproduct_space()?;
    let t_new = g2.coproduct_space()?;
    g2.gamma = m_alg
        .units()
        .iter()
        .map(|e| t_new.space.compress(&g.gamma_ambient(&t_old, e)))
        .collect();

    let ap1 = build_antipode(g)?;
    let ap2 = build_antipode(&g2)?;
    let eps = 1.0 / 16.0;
    let md1 = extract_modulus(g, &ap1.r, eps)?;
    let md2 = extract_modulus(&g2, &ap2.r, eps)?;
    let p1 = build_p(g, &ap1, &md1)?;
    let p2 = build_p(&g2, &ap2, &md2)?;

    let mut r_diff = 0.0f64;
    for (a, b) in ap1.r.images.iter().zip(ap2.r.images.iter()) {
        r_diff = r_diff.max(mat::diff_norm(a, b));
    }
    rep.push("coinvolution unchanged", r_diff);
    rep.push("scaling constant unchanged", mat::diff_norm(&md1.lambda, &md2.lambda));

    let mut tau_diff = 0.0f64;
    for &t in &T_GRID {
        let u_t = connes_cocycle(&g2.base.weight, nu, t);
        let c_t = g.alpha_of(&u_t.adjoint()) * g.beta_of(&u_t);
        for e in m_alg.units() {
            let want = &c_t * ap1.tau(t, &e) * c_t.adjoint();
            tau_diff = tau_diff.max(mat::diff_norm(&ap2.tau(t, &e), &want));
        }
    }
    rep.push("scaling group conjugated by the embedded cocycle", tau_diff);

    // the β(h)-move of T_L and the ν-perturbation cancel on the modulus
    rep.push("modulus unchanged", mat::diff_norm(&md1.delta, &md2.delta));

    let jm = &g.gns.jm;
    let mut p_diff = 0.0f64;
    for &t in &T_GRID {
        let w_t = pow_it(k, t * t / 2.0) * pow_it(h, t);
        let a_t = g.gns.pi_apply(&(g.alpha_of(&w_t) * g.beta_of(&w_t.adjoint())));
        let want = &a_t * antilinear::sandwich(jm, &a_t) * pow_it(&p1.p, t);
        p_diff = p_diff.max(mat::diff_norm(&pow_it(&p2.p, t), &want));
    }
    rep.push("implementing operator moves by the twist", p_diff);

    Ok(RebaseOutcome { bundle: g2, report: rep })
}
