//! Extraction of the modulus and the scaling operator from the Connes
//! cocycle of Φ∘R against Φ, and their structural relations.

use antipode_engine::Antipode;
use hopf_bimodule::{Coinvolution, MeasuredQuantumGroupoid, Report};
use mva_core::mat::{self, pow_c, pow_it, psd_pow_cut, CMat, CVec, C};
use mva_core::weight::{connes_cocycle, Weight};

use crate::{Result, ScaError};

pub const T_GRID: [f64; 4] = [-1.0, -0.5, 0.5, 1.0];

/// The modulus δ and scaling operator λ, as ambient M elements, with the
/// residuals certifying their defining relations.
#[derive(Debug, Clone)]
pub struct ModulusData {
    pub delta: CMat,
    pub lambda: CMat,
    /// extraction step actually used (after branch-guard halvings)
    pub eps: f64,
    /// [DΦ∘R:DΦ]_t = λ^{it²/2} δ^{it} on the t-grid
    pub cocycle_residual: f64,
    /// σ^{Φ∘R}_t = δ^{it} σ^Φ_t(·) δ^{-it} on the t-grid
    pub conjugation_residual: f64,
    /// λ against Z(M) ∩ α(N) ∩ β(N)
    pub centrality_residual: f64,
}

/// The weight x ↦ w(R(x)) on M, by transporting the density through the
/// coinvolution.
pub fn weight_through(
    g: &MeasuredQuantumGroupoid,
    r: &Coinvolution,
    w: &Weight,
) -> Result<Weight> {
    let m_alg = g.m_alg();
    let units = m_alg.units();
    let vals = CVec::from_fn(m_alg.dim_vs(), |u, _| w.value(&r.apply(m_alg, &units[u])));
    Ok(Weight::from_functional(m_alg, &vals)?)
}

/// Least-squares coordinates of x on the span of the targets, with the
/// projection residual.
pub(crate) fn span_coords(targets: &[CMat], x: &CMat) -> (CVec, f64) {
    let n = x.nrows() * x.ncols();
    let mut a = mat::zeros(n, targets.len());
    for (k, t) in targets.iter().enumerate() {
        a.set_column(k, &mat::vec_of(t));
    }
    let c = mat::pinv(&a, 1e-12) * mat::vec_of(x);
    let proj = mat::mat_of(&(&a * &c), x.nrows(), x.ncols());
    (c, mat::diff_norm(&proj, x))
}

/// Recover the positive X from the unitary u = X^{is}; every eigenvalue
/// argument must stay strictly inside (-π/2, π/2).
pub(crate) fn positive_root(u: &CMat, s: f64) -> Result<CMat> {
    let (evs, q) = mat::eig_normal(u)?;
    let mut d = mat::zeros(evs.len(), evs.len());
    for (k, w) in evs.iter().enumerate() {
        if w.arg().abs() >= std::f64::consts::FRAC_PI_2 {
            return Err(ScaError::BranchCut(0));
        }
        d[(k, k)] = C::new((w.arg() / s).exp(), 0.0);
    }
    let x = &q * d * q.adjoint();
    Ok((&x + x.adjoint()).scale(0.5))
}

fn args_guarded(u: &CMat) -> Result<()> {
    let (evs, _) = mat::eig_normal(u)?;
    if evs.iter().any(|w| w.arg().abs() >= std::f64::consts::FRAC_PI_2) {
        return Err(ScaError::BranchCut(0));
    }
    Ok(())
}

/// λ^{it²/2} δ^{it} for extracted data.
fn cocycle_model(md: &ModulusData, t: f64) -> CMat {
    pow_c(&md.lambda, C::new(0.0, t * t / 2.0)) * pow_it(&md.delta, t)
}

/// Extract δ and λ from u_t = [DΦ∘R:DΦ]_t: the step ε isolates
/// λ^{iε²} = u_{2ε} u_ε^{-2} and δ^{iε} = λ^{-iε²/2} u_ε, both inverted by a
/// principal logarithm under a branch guard; on a guard violation the step is
/// halved, at most three times.
pub fn extract_modulus(
    g: &MeasuredQuantumGroupoid,
    r: &Coinvolution,
    eps0: f64,
) -> Result<ModulusData> {
    let m_alg = g.m_alg();
    let phi = g.gns.weight.clone();
    let phi_r = weight_through(g, r, &phi)?;

    let mut eps = eps0;
    let mut extracted = None;
    let mut halvings = 0usize;
    while extracted.is_none() {
        let attempt = (|| -> Result<(CMat, CMat)> {
            let u1 = connes_cocycle(&phi_r, &phi, eps);
            let u2 = connes_cocycle(&phi_r, &phi, 2.0 * eps);
            args_guarded(&u1)?;
            let lam_pow = &u2 * (&u1 * &u1).adjoint();
            let lambda = positive_root(&lam_pow, eps * eps)?;
            let d_pow = pow_c(&lambda, C::new(0.0, -eps * eps / 2.0)) * &u1;
            let delta = positive_root(&d_pow, eps)?;
            Ok((lambda, delta))
        })();
        match attempt {
            Ok(pair) => extracted = Some(pair),
            Err(ScaError::BranchCut(_)) => {
                if halvings == 3 {
                    return Err(ScaError::BranchCut(halvings));
                }
                halvings += 1;
                eps /= 2.0;
            }
            Err(e) => return Err(e),
        }
    }
    let (lambda, delta) = extracted.unwrap();

    let mut centrality = m_alg.membership_error(&lambda);
    for e in m_alg.units() {
        centrality = centrality.max(mat::diff_norm(&(&lambda * &e), &(&e * &lambda)));
    }
    centrality = centrality.max(span_coords(&g.alpha, &lambda).1);
    centrality = centrality.max(span_coords(&g.beta, &lambda).1);
    if centrality > 1e-6 {
        return Err(ScaError::NotCentral(centrality));
    }

    let mut md = ModulusData {
        delta,
        lambda,
        eps,
        cocycle_residual: 0.0,
        conjugation_residual: 0.0,
        centrality_residual: centrality,
    };
    for &t in &T_GRID {
        let u = connes_cocycle(&phi_r, &phi, t);
        md.cocycle_residual = md.cocycle_residual.max(mat::diff_norm(&u, &cocycle_model(&md, t)));
        let dt = pow_it(&md.delta, t);
        for e in m_alg.units() {
            let lhs = phi_r.sigma(t, &e);
            let rhs = &dt * phi.sigma(t, &e) * dt.adjoint();
            md.conjugation_residual = md.conjugation_residual.max(mat::diff_norm(&lhs, &rhs));
        }
    }
    Ok(md)
}

/// Structural relations of the modulus and scaling operator: behaviour under
/// the coinvolution and the scaling group, grouplikeness of δ, centrality of
/// λ over the basis embeddings, and the commutation laws tying the modular
/// groups of the two invariant weights to each other, to the scaling group,
/// and to the coproduct.
pub fn check_modulus_relations(
    g: &MeasuredQuantumGroupoid,
    md: &ModulusData,
    ap: &Antipode,
) -> Result<Report> {
    let m_alg = g.m_alg();
    let mut rep = Report::new("modulus-relations");
    let lam = m_alg.from_coords(&m_alg.coords(&md.lambda));
    let del = m_alg.from_coords(&m_alg.coords(&md.delta));

    rep.push("coinvolution fixes the scaling operator", mat::diff_norm(&ap.r_of(&lam), &lam));
    rep.push(
        "coinvolution inverts the modulus",
        mat::diff_norm(&ap.r_of(&del), &psd_pow_cut(&del, -1.0, 1e-14)),
    );
    let mut tau_d = 0.0f64;
    let mut tau_l = 0.0f64;
    for &t in &T_GRID {
        tau_d = tau_d.max(mat::diff_norm(&ap.tau(t, &del), &del));
        tau_l = tau_l.max(mat::diff_norm(&ap.tau(t, &lam), &lam));
    }
    rep.push("scaling group fixes the modulus", tau_d);
    rep.push("scaling group fixes the scaling operator", tau_l);

    let mut emb = 0.0f64;
    for a in g.alpha.iter().chain(g.beta.iter()) {
        emb = emb.max(mat::diff_norm(&(&del * a), &(a * &del)));
    }
    rep.push("modulus commutes with both embeddings", emb);
    rep.push("scaling operator centrality", md.centrality_residual);

    // the same central q realizes λ through either embedding
    let (qa, res_a) = span_coords(&g.alpha, &lam);
    let (qb, res_b) = span_coords(&g.beta, &lam);
    rep.push("scaling operator in the alpha image", res_a);
    rep.push("scaling operator in the beta image", res_b);
    rep.push("alpha and beta cores agree", (&qa - &qb).iter().fold(0.0f64, |m, z| m.max(z.norm())));

    // Γ(δ) = δ ⊗ δ on the relative tensor square
    let t12 = g.coproduct_space()?;
    let pd = g.gns.pi_apply(&del);
    let rhs = t12.op_tensor(&pd, &pd)?;
    rep.push("modulus is group-like", mat::diff_norm(&g.gamma_of(&del), &rhs));

    // commutation of the modular generators of Φ and Ψ
    let phi = &g.gns.weight;
    let psi = g.psi()?;
    let log_phi = mat::func_herm(&phi.rho, |x| C::new(x.ln(), 0.0));
    let log_psi = mat::func_herm(&psi.rho, |x| C::new(x.ln(), 0.0));
    rep.push(
        "modular generators of the invariant weights commute",
        mat::diff_norm(&(&log_phi * &log_psi), &(&log_psi * &log_phi)),
    );

    // both modular groups commute with the scaling group
    let mut comm = 0.0f64;
    for &s in &T_GRID {
        for &t in &[-0.7, 0.4] {
            for e in m_alg.units() {
                comm = comm.max(mat::diff_norm(
                    &phi.sigma(s, &ap.tau(t, &e)),
                    &ap.tau(t, &phi.sigma(s, &e)),
                ));
                comm = comm.max(mat::diff_norm(
                    &psi.sigma(s, &ap.tau(t, &e)),
                    &ap.tau(t, &psi.sigma(s, &e)),
                ));
            }
        }
    }
    rep.push("modular groups commute with the scaling group", comm);

    // Γ ∘ τ_t = (σ^Φ_t ⋆ σ^{Φ∘R}_{-t}) ∘ Γ
    let phi_r = weight_through(g, &ap.r, phi)?;
    let mut twist = 0.0f64;
    for &t in &T_GRID {
        let k = g.gns.delta_pow_it(t).kronecker(&g.gns.pi_apply(&pow_it(&phi_r.rho, -t)));
        for e in m_alg.units() {
            let amb = &k * g.gamma_ambient(&t12, &e) * k.adjoint();
            let rhs = &t12.space.e * amb * &t12.space.p;
            twist = twist.max(mat::diff_norm(&g.gamma_of(&ap.tau(t, &e)), &rhs));
        }
    }
    rep.push("coproduct intertwines the scaling group", twist);
    Ok(rep)
}
