//! Identity suite for the antipode: polar data, scaling group, unitary
//! antipode, slice characterizations, and the modular exchange relations
//! tying the modulus to the fundamental unitary.

use fundamental_unitary::{build_w_prime, PseudoMultiplicativeUnitary};
use hopf_bimodule::{check_coinvolution, MeasuredQuantumGroupoid, OperatorValuedWeight, Report};
use mva_core::algebra::AlgebraPresentation;
use mva_core::mat::{self, antilinear, CMat, CVec, C};
use mva_core::Gns;
use rel_tensor::slice::slice_left;

use crate::engine::{build_antipode, Antipode};
use crate::Result;

const T_GRID: [f64; 6] = [-1.0, -0.5, -0.1, 0.1, 0.5, 1.0];

/// Polar data, scaling group, unitary antipode and the algebraic antipode
/// identities (commutations, involutions, S² as analytic continuation).
pub fn check_antipode_properties(
    g: &MeasuredQuantumGroupoid,
    ap: &Antipode,
) -> Result<Report> {
    let mut rep = Report::new("antipode");
    rep.push("spanning solve", ap.solve_residual);
    rep.push("generator involution", ap.involution_residual);
    rep.push("polar reconstruction", ap.polar_residual);
    rep.push("unitary antipode membership", ap.r_residual);

    let i = &ap.i_mat;
    let dh = ap.gns().dim_h;
    rep.push("antiunitary is symmetric", mat::diff_norm(&i.transpose(), i));
    rep.push(
        "antiunitary is involutive",
        mat::diff_norm(&antilinear::compose(i, i), &mat::eye(dh)),
    );
    rep.push(
        "modulus is inverted by the antiunitary",
        mat::diff_norm(
            &antilinear::sandwich(i, &ap.d),
            &mat::psd_pow_cut(&ap.d, -1.0, 1e-12),
        ),
    );

    // I alpha(n*) = beta(n) I as antilinear operators
    let mut leg = 0.0f64;
    for e in g.n_alg().units() {
        let lhs = i * mat::conj_mat(&ap.gns().pi_apply(&g.alpha_of(&e.adjoint())));
        let rhs = ap.gns().pi_apply(&g.beta_of(&e)) * i;
        leg = leg.max(mat::diff_norm(&lhs, &rhs));
    }
    rep.push("antiunitary exchanges the legs", leg);

    // unitary antipode as a coinvolution (anti-automorphism, R∘alpha = beta,
    // flipped coproduct)
    rep.merge(check_coinvolution(g, &ap.r)?);

    // scaling group: membership, group law, action on the legs, commutation
    // with R
    let nu = &g.base.weight;
    let units = g.m_alg().units();
    let mut membership = 0.0f64;
    let mut group_law = 0.0f64;
    let mut on_alpha = 0.0f64;
    let mut on_beta = 0.0f64;
    let mut with_r = 0.0f64;
    for &t in &T_GRID {
        for x in &units {
            membership = membership.max(ap.tau_residual(t, x));
            group_law = group_law.max(mat::diff_norm(
                &ap.tau(t, &ap.tau(0.3, x)),
                &ap.tau(t + 0.3, x),
            ));
            with_r = with_r.max(mat::diff_norm(
                &ap.tau(t, &ap.r_of(x)),
                &ap.r_of(&ap.tau(t, x)),
            ));
        }
        for n in g.n_alg().units() {
            let sn = nu.sigma(t, &n);
            on_alpha = on_alpha.max(mat::diff_norm(
                &ap.tau(t, &g.alpha_of(&n)),
                &g.alpha_of(&sn),
            ));
            on_beta = on_beta.max(mat::diff_norm(
                &ap.tau(t, &g.beta_of(&n)),
                &g.beta_of(&sn),
            ));
        }
    }
    rep.push("scaling group stays in M", membership);
    rep.push("scaling group law", group_law);
    rep.push("scaling group on the range leg", on_alpha);
    rep.push("scaling group on the source leg", on_beta);
    rep.push("scaling group commutes with R", with_r);

    // antipode identities
    let mut s_sq = 0.0f64;
    let mut sr = 0.0f64;
    let mut star = 0.0f64;
    let mut inv = 0.0f64;
    for x in &units {
        s_sq = s_sq.max(mat::diff_norm(
            &ap.s_of(&ap.s_of(x)),
            &ap.tau_c(C::new(0.0, -1.0), x),
        ));
        sr = sr.max(mat::diff_norm(&ap.s_of(&ap.r_of(x)), &ap.r_of(&ap.s_of(x))));
        star = star.max(mat::diff_norm(&ap.s_of(&ap.s_of(x).adjoint()).adjoint(), x));
        inv = inv.max(mat::diff_norm(&ap.s_inv(&ap.s_of(x)), x));
    }
    rep.push("antipode squared is the continued flow", s_sq);
    rep.push("antipode commutes with R", sr);
    rep.push("antipode star involution", star);
    rep.push("antipode inverse", inv);
    Ok(rep)
}

/// First-leg slice of a unitary between relative tensor squares, as an
/// operator on H.
fn slice_op(pmu: &PseudoMultiplicativeUnitary, v: &CVec, w: &CVec, starred: bool) -> CMat {
    if starred {
        pmu.t_src.lambda_slice(w).adjoint() * pmu.u.adjoint() * pmu.t_tgt.lambda_slice(v)
    } else {
        pmu.t_tgt.lambda_slice(w).adjoint() * &pmu.u * pmu.t_src.lambda_slice(v)
    }
}

fn pulled_slice(
    pres: &AlgebraPresentation,
    pmu: &PseudoMultiplicativeUnitary,
    v: &CVec,
    w: &CVec,
    starred: bool,
) -> CMat {
    pres.pull_back(&slice_op(pmu, v, w, starred)).0
}

/// S applied to the slices of the right unitary turns it into slices of its
/// adjoint.
pub fn check_slice_antipode_identity(
    g: &MeasuredQuantumGroupoid,
    ap: &Antipode,
    pmu_prime: &PseudoMultiplicativeUnitary,
) -> Result<f64> {
    let psi = g.psi()?;
    let gns_psi = g.gns.sibling(psi)?;
    let pres = AlgebraPresentation::new(g.m_alg().clone(), g.gns.pi.clone())?;
    let vs: Vec<CVec> = g.m_alg().units().iter().map(|e| gns_psi.lambda(e)).collect();
    let mut worst = 0.0f64;
    for v in &vs {
        for w in &vs {
            let x = pulled_slice(&pres, pmu_prime, v, w, false);
            let y = pulled_slice(&pres, pmu_prime, v, w, true);
            worst = worst.max(mat::diff_norm(&ap.s_of(&x), &y));
        }
    }
    Ok(worst)
}

/// The antipode on coproduct slices: S((ω_{Λ(a),Λ(b)} ⋆ id)Γ(cd)) equals
/// (ω_{Λ(c),Λ(σ_{-i}(d*))} ⋆ id)Γ(σ_i(a)b*), and the unitary antipode
/// exchanges the diagonal slices of Γ(b*b) and Γ(a*a).
pub fn check_coproduct_slice_antipode(
    g: &MeasuredQuantumGroupoid,
    ap: &Antipode,
) -> Result<Report> {
    let mut rep = Report::new("coproduct-slice-antipode");
    let psi = g.psi()?;
    let gns_psi = g.gns.sibling(psi.clone())?;
    let pres = AlgebraPresentation::new(g.m_alg().clone(), g.gns.pi.clone())?;
    let t12 = g.coproduct_space()?;
    let units = g.m_alg().units();
    let mi = C::new(0.0, -1.0);

    let mut full = 0.0f64;
    for a in &units {
        for b in &units {
            for c in &units {
                for d in &units {
                    let lhs_slice = slice_left(
                        &t12,
                        &gns_psi.lambda(a),
                        &gns_psi.lambda(b),
                        &g.gamma_of(&(c * d)),
                    );
                    let lhs = ap.s_of(&pres.pull_back(&lhs_slice).0);
                    let rhs_slice = slice_left(
                        &t12,
                        &gns_psi.lambda(c),
                        &gns_psi.lambda(&psi.sigma_c(mi, &d.adjoint())),
                        &g.gamma_of(&(psi.sigma_c(-mi, a) * b.adjoint())),
                    );
                    let rhs = pres.pull_back(&rhs_slice).0;
                    full = full.max(mat::diff_norm(&lhs, &rhs));
                }
            }
        }
    }
    rep.push("antipode on coproduct slices", full);

    let mut diag = 0.0f64;
    for a in &units {
        for b in &units {
            let ja = antilinear::apply(&gns_psi.jm, &gns_psi.lambda(a));
            let jb = antilinear::apply(&gns_psi.jm, &gns_psi.lambda(b));
            let lhs_slice = slice_left(&t12, &ja, &ja, &g.gamma_of(&(b.adjoint() * b)));
            let lhs = ap.r_of(&pres.pull_back(&lhs_slice).0);
            let rhs_slice = slice_left(&t12, &jb, &jb, &g.gamma_of(&(a.adjoint() * a)));
            let rhs = pres.pull_back(&rhs_slice).0;
            diag = diag.max(mat::diff_norm(&lhs, &rhs));
        }
    }
    rep.push("unitary antipode on diagonal slices", diag);
    Ok(rep)
}

/// The modulus against the fundamental unitary: the antiunitary exchange of
/// the left unitary, commutation of D^{-1}⊗Δ_Φ with it, and the three
/// twisted coproduct covariances for the modular and scaling flows.
pub fn check_modular_exchange(
    g: &MeasuredQuantumGroupoid,
    ap: &Antipode,
    pmu: &PseudoMultiplicativeUnitary,
) -> Result<Report> {
    let mut rep = Report::new("modular-exchange");
    let gns = &g.gns;
    let psi = g.psi()?;
    let gns_psi = gns.sibling(psi.clone())?;
    let t12 = g.coproduct_space()?;

    // (I ⊗ J_Φ) W* = W (I ⊗ J_Φ)
    let k = ap.i_mat.kronecker(&gns.jm);
    let a_src = &pmu.t_src.space.e * &k * mat::conj_mat(&pmu.t_tgt.space.p);
    let a_tgt = &pmu.t_tgt.space.e * &k * mat::conj_mat(&pmu.t_src.space.p);
    rep.push(
        "antiunitary exchange of the unitary",
        mat::diff_norm(&(a_src * mat::conj_mat(&pmu.u)), &(&pmu.w * a_tgt)),
    );

    // (D^{-1} ⊗ Δ_Φ) commutes with the isometry
    let d_inv = mat::psd_pow_cut(&ap.d, -1.0, 1e-12);
    let k2 = d_inv.kronecker(&gns.delta);
    let lhs = pmu.t_tgt.space.compress(&k2) * &pmu.u;
    let rhs = &pmu.u * pmu.t_src.space.compress(&k2);
    rep.push("modulus tensor modular commutes", mat::diff_norm(&lhs, &rhs));

    // twisted covariances of the coproduct under the three flows
    let units = g.m_alg().units();
    let mut by_phi = 0.0f64;
    let mut by_psi = 0.0f64;
    let mut by_tau = 0.0f64;
    let twisted = |kk: &CMat, e: &CMat| {
        t12.space
            .compress(&(kk * g.gamma_ambient(&t12, e) * kk.adjoint()))
    };
    for &t in &T_GRID {
        let d_it = mat::pow_it(&ap.d, t);
        let d_mit = mat::pow_it(&ap.d, -t);
        for e in &units {
            let k_phi = d_mit.kronecker(&gns.delta_pow_it(t));
            by_phi = by_phi.max(mat::diff_norm(
                &twisted(&k_phi, e),
                &g.gamma_of(&gns.weight.sigma(t, e)),
            ));
            let k_psi = gns_psi.delta_pow_it(t).kronecker(&d_it);
            by_psi = by_psi.max(mat::diff_norm(
                &twisted(&k_psi, e),
                &g.gamma_of(&psi.sigma(t, e)),
            ));
            let k_tau = d_mit.kronecker(&d_mit);
            by_tau = by_tau.max(mat::diff_norm(
                &twisted(&k_tau, e),
                &g.gamma_of(&ap.tau(t, e)),
            ));
        }
    }
    rep.push("coproduct covariance under the left modular flow", by_phi);
    rep.push("coproduct covariance under the right modular flow", by_psi);
    rep.push("coproduct covariance under the scaling flow", by_tau);
    Ok(rep)
}

/// Antilinear-symmetry of the unitary antipode's ingredients under a change
/// of left-invariant weight: rebuilding from a rescaled T_L gives the same R,
/// and the original S still switches the slices of the rescaled right
/// unitary.
pub fn check_strong_invariance(
    g: &MeasuredQuantumGroupoid,
    ap: &Antipode,
    scale: f64,
) -> Result<Report> {
    let mut rep = Report::new("strong-invariance");
    let mut g2 = g.clone();
    let t_old = g.coproduct_space()?;
    g2.t_left = OperatorValuedWeight::new(
        true,
        g.t_left.images.iter().map(|x| x.scale(scale)).collect(),
    );
    let phi2 = g2.phi()?;
    g2.gns = Gns::canonical(g.m_alg().clone(), phi2)?;
    let t_new = g2.coproduct_space()?;
    g2.gamma = g
        .m_alg()
        .units()
        .iter()
        .map(|e| t_new.space.compress(&g.gamma_ambient(&t_old, e)))
        .collect();

    let ap2 = build_antipode(&g2)?;
    let mut r_diff = 0.0f64;
    for (a, b) in ap.r.images.iter().zip(&ap2.r.images) {
        r_diff = r_diff.max(mat::diff_norm(a, b));
    }
    rep.push("unitary antipode is weight independent", r_diff);

    let w2 = build_w_prime(&g2)?;
    rep.push(
        "antipode switches slices of the rescaled unitary",
        check_slice_antipode_identity(&g2, ap, &w2)?,
    );
    Ok(rep)
}
