//! The positive self-adjoint operator implementing the scaling group on the
//! GNS space, manageability of the fundamental unitary relative to it, and
//! weak regularity of the slice span.

use antipode_engine::Antipode;
use fundamental_unitary::PseudoMultiplicativeUnitary;
use hopf_bimodule::{MeasuredQuantumGroupoid, Report};
use mva_core::algebra::{commutant_basis, orthonormalize_span};
use mva_core::mat::{self, pow_c, pow_it, psd_pow_cut, vec_of, CMat, C};
use rel_tensor::rel::flip;
use rel_tensor::{BasisRep, LinkKind, RelativeTensorSpace};

use crate::modulus::{positive_root, span_coords, ModulusData, T_GRID};
use crate::Result;

/// The positive operator P with P^{it} Λ(x) = Λ(λ^{t/2} τ_t(x)), recovered
/// from one imaginary power of that prescription.
#[derive(Debug, Clone)]
pub struct ManageableOp {
    pub p: CMat,
    /// worst defect of the defining action over the unit grid
    pub implementation_residual: f64,
}

pub fn build_p(
    g: &MeasuredQuantumGroupoid,
    ap: &Antipode,
    md: &ModulusData,
) -> Result<ManageableOp> {
    let gns = &g.gns;
    let m_alg = g.m_alg();
    let mut eps = md.eps;
    let mut p = None;
    for _ in 0..4 {
        let lam_half = pow_c(&md.lambda, C::new(eps / 2.0, 0.0));
        let coords = m_alg.op_from_alg_action(|x| &lam_half * ap.tau(eps, x));
        let u = &gns.lam * coords * &gns.lam_inv;
        match positive_root(&u, eps) {
            Ok(m) => {
                p = Some(m);
                break;
            }
            Err(_) => eps /= 2.0,
        }
    }
    let p = p.ok_or(crate::ScaError::BranchCut(4))?;

    let mut worst = 0.0f64;
    for &t in &T_GRID {
        let pt = pow_it(&p, t);
        let lam_t = pow_c(&md.lambda, C::new(t / 2.0, 0.0));
        for e in m_alg.units() {
            let got = &pt * gns.lambda(&e);
            let want = gns.lambda(&(&lam_t * ap.tau(t, &e)));
            worst = worst.max((got - want).norm());
        }
    }
    Ok(ManageableOp { p, implementation_residual: worst })
}

fn conj_residual(pt: &CMat, pt_inv: &CMat, x: &CMat, want: &CMat) -> f64 {
    mat::diff_norm(&(pt * x * pt_inv), want)
}

/// Manageability of the fundamental unitary: covariance of P with the four
/// leg structures, commutation of W with P^{it} ⊗ P^{it}, and the defining
/// bilinear identity linking W, its flip, J and P^{±1/2}.
pub fn check_manageability(
    g: &MeasuredQuantumGroupoid,
    ap: &Antipode,
    pmu: &PseudoMultiplicativeUnitary,
    mo: &ManageableOp,
) -> Result<Report> {
    let gns = &g.gns;
    let nu = &g.base.weight;
    let mut rep = Report::new("manageability");

    let beta_hat_leg = BasisRep::new(g.base.clone(), pmu.hat_images.clone(), true)?;
    let mut cov_m = 0.0f64;
    let mut cov_a = 0.0f64;
    let mut cov_b = 0.0f64;
    let mut cov_h = 0.0f64;
    for &t in &T_GRID {
        let pt = pow_it(&mo.p, t);
        let pt_inv = pow_it(&mo.p, -t);
        for e in g.m_alg().units() {
            cov_m = cov_m.max(conj_residual(&pt, &pt_inv, &gns.pi_apply(&e), &gns.pi_apply(&ap.tau(t, &e))));
        }
        for n in g.n_alg().units() {
            let s = nu.sigma(t, &n);
            cov_a = cov_a.max(conj_residual(&pt, &pt_inv, &gns.pi_apply(&g.alpha_of(&n)), &gns.pi_apply(&g.alpha_of(&s))));
            cov_b = cov_b.max(conj_residual(&pt, &pt_inv, &gns.pi_apply(&g.beta_of(&n)), &gns.pi_apply(&g.beta_of(&s))));
            cov_h = cov_h.max(conj_residual(&pt, &pt_inv, &beta_hat_leg.apply(&n), &beta_hat_leg.apply(&s)));
        }
    }
    rep.push("P implements the scaling group", cov_m);
    rep.push("P covariance with alpha", cov_a);
    rep.push("P covariance with beta", cov_b);
    rep.push("P covariance with the commutant leg", cov_h);

    let mut comm = 0.0f64;
    for &t in &T_GRID {
        let k = pow_it(&mo.p, t).kronecker(&pow_it(&mo.p, t));
        let a_tgt = &pmu.t_tgt.space.e * &k * &pmu.t_tgt.space.p;
        let a_src = &pmu.t_src.space.e * &k * &pmu.t_src.space.p;
        comm = comm.max(mat::diff_norm(&(&pmu.w * a_tgt), &(a_src * &pmu.w)));
    }
    rep.push("W commutes with P x P", comm);

    // bilinear identity: (sWs(q # v) | p # w) = (sW*s(Jp # P^{-1/2}v) | Jq # P^{1/2}w)
    let a_sp = RelativeTensorSpace::new(beta_hat_leg, g.alpha_leg()?, LinkKind::OverPsi)?;
    let b_sp = RelativeTensorSpace::new(g.alpha_leg()?, g.beta_leg()?, LinkKind::OverPsiOp)?;
    let l = flip(&pmu.t_tgt, &b_sp) * &pmu.u * flip(&a_sp, &pmu.t_src);
    let r = flip(&pmu.t_src, &a_sp) * &pmu.w * flip(&b_sp, &pmu.t_tgt);
    let half = psd_pow_cut(&mo.p, 0.5, 1e-14);
    let ihalf = psd_pow_cut(&mo.p, -0.5, 1e-14);
    let d = gns.dim_h;
    let m1 = b_sp.space.e.adjoint() * &l * &a_sp.space.e;
    let x = &b_sp.space.e * gns.jm.kronecker(&ihalf);
    let y = &a_sp.space.e * gns.jm.kronecker(&half);
    let m2 = y.adjoint() * &r * &x;
    let mut bil = 0.0f64;
    for p in 0..d {
        for q in 0..d {
            for v in 0..d {
                for w in 0..d {
                    bil = bil.max((m1[(p * d + w, q * d + v)] - m2[(q * d + w, p * d + v)]).norm());
                }
            }
        }
    }
    rep.push("manageability bilinear identity", bil);
    Ok(rep)
}

/// Weak regularity data: the slice span of the flipped unitary against the
/// commutant of the alpha leg.
#[derive(Debug, Clone)]
pub struct WeakRegularity {
    pub rank: usize,
    pub commutant_dim: usize,
    pub membership_residual: f64,
}

/// Slices (λ_v)* Ŵ ρ_w of the flipped fundamental unitary span exactly the
/// commutant of the alpha leg.
pub fn check_weak_regularity(
    g: &MeasuredQuantumGroupoid,
    pmu: &PseudoMultiplicativeUnitary,
) -> Result<WeakRegularity> {
    let gns = &g.gns;
    let d = gns.dim_h;
    let beta_hat_leg = BasisRep::new(g.base.clone(), pmu.hat_images.clone(), true)?;
    let a_sp = RelativeTensorSpace::new(beta_hat_leg, g.alpha_leg()?, LinkKind::OverPsi)?;
    let b_sp = RelativeTensorSpace::new(g.alpha_leg()?, g.beta_leg()?, LinkKind::OverPsiOp)?;
    let hat = flip(&pmu.t_tgt, &b_sp) * &pmu.u * flip(&a_sp, &pmu.t_src);

    let mut ops = Vec::new();
    for v in 0..d {
        let mut ev = mva_core::mat::CVec::zeros(d);
        ev[v] = mat::cone();
        let lam_v = b_sp.lambda_slice(&ev).adjoint();
        for w in 0..d {
            let mut ew = mva_core::mat::CVec::zeros(d);
            ew[w] = mat::cone();
            ops.push(&lam_v * &hat * a_sp.rho_slice(&ew));
        }
    }

    let mut stacked = mat::zeros(ops.len(), d * d);
    for (i, op) in ops.iter().enumerate() {
        stacked.set_row(i, &vec_of(op).transpose());
    }
    let svals = stacked.singular_values();
    let tol = 1e-8 * svals.max();
    let rank = svals.iter().filter(|&&s| s > tol).count();

    let comm = commutant_basis(&g.alpha_ops());
    let commutant_dim = comm.len();
    let targets = orthonormalize_span(&comm, 1e-10);
    let mut worst = 0.0f64;
    for op in &ops {
        let n = op.norm();
        if n < 1e-12 {
            continue;
        }
        let (_, res) = span_coords(&targets, op);
        worst = worst.max(res / n);
    }
    Ok(WeakRegularity { rank, commutant_dim, membership_residual: worst })
}
