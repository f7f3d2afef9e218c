//! Leg commutations, coproduct implementation, slice identities, generation,
//! and the co-fixed vector of the expectation case.

use hopf_bimodule::{MeasuredQuantumGroupoid, Report};
use mva_core::algebra::{self, AlgebraPresentation};
use mva_core::mat::{self, antilinear, CMat, CVec};

use crate::build::PseudoMultiplicativeUnitary;
use crate::{FunError, Result};

/// The three relations of the fundamental isometry with alpha and beta, the
/// commutant relations, and the hat-leg relation (left version only).
pub fn check_commutations(
    g: &MeasuredQuantumGroupoid,
    pmu: &PseudoMultiplicativeUnitary,
) -> Result<Report> {
    if pmu.right_version {
        return Err(FunError::WrongVersion("left"));
    }
    let mut rep = Report::new("commutations");
    let u = &pmu.u;
    let (ts, tt) = (&pmu.t_src, &pmu.t_tgt);
    let dh = pmu.gns.dim_h;
    let eye = mat::eye(dh);
    let alpha_ops = g.alpha_ops();
    let beta_ops = g.beta_ops();
    let hat = &pmu.hat_images;

    let mut r1 = 0.0f64;
    let mut r2 = 0.0f64;
    let mut r3 = 0.0f64;
    let mut r4 = 0.0f64;
    for n in 0..alpha_ops.len() {
        r1 = r1.max(mat::diff_norm(
            &(u * ts.op_tensor_unchecked(&eye, &alpha_ops[n])),
            &(tt.op_tensor_unchecked(&alpha_ops[n], &eye) * u),
        ));
        r2 = r2.max(mat::diff_norm(
            &(u * ts.op_tensor_unchecked(&eye, &beta_ops[n])),
            &(tt.op_tensor_unchecked(&eye, &beta_ops[n]) * u),
        ));
        r3 = r3.max(mat::diff_norm(
            &(u * ts.op_tensor_unchecked(&beta_ops[n], &eye)),
            &(tt.op_tensor_unchecked(&eye, &hat[n]) * u),
        ));
        r4 = r4.max(mat::diff_norm(
            &(u * ts.op_tensor_unchecked(&hat[n], &eye)),
            &(tt.op_tensor_unchecked(&hat[n], &eye) * u),
        ));
    }
    rep.push("U(1⊗alpha) = (alpha⊗1)U", r1);
    rep.push("U(1⊗beta) = (1⊗beta)U", r2);
    rep.push("U(beta⊗1) = (1⊗beta-hat)U", r3);
    rep.push("U(beta-hat⊗1) = (beta-hat⊗1)U", r4);

    // commutant elements pass through the first leg untouched
    let mut r5 = 0.0f64;
    for e in g.m_alg().units() {
        let x = antilinear::sandwich(&pmu.gns.jm, &pmu.gns.pi_apply(&e.adjoint()));
        r5 = r5.max(mat::diff_norm(
            &(u * ts.op_tensor_unchecked(&x, &eye)),
            &(tt.op_tensor_unchecked(&x, &eye) * u),
        ));
    }
    rep.push("U(x'⊗1) = (x'⊗1)U for x' in M'", r5);
    Ok(rep)
}

/// Gamma(m) U = U (1 ⊗ m).
pub fn check_coproduct_implemented(
    g: &MeasuredQuantumGroupoid,
    pmu: &PseudoMultiplicativeUnitary,
) -> Result<f64> {
    if pmu.right_version {
        return Err(FunError::WrongVersion("left"));
    }
    let mut worst = 0.0f64;
    let eye = mat::eye(pmu.gns.dim_h);
    for (k, e) in g.m_alg().units().iter().enumerate() {
        let m_op = pmu.gns.pi_apply(e);
        worst = worst.max(mat::diff_norm(
            &(g.gamma[k].clone() * &pmu.u),
            &(&pmu.u * pmu.t_src.op_tensor_unchecked(&eye, &m_op)),
        ));
    }
    Ok(worst)
}

/// The identities tying U to Gamma through rho- and lambda-slices: the
/// shortcut relation (1 ⊗ JeJ) U ρ_{Λ(x)} = Gamma(x) ρ_{JΛ(e)} and the
/// slice correspondence (λ_w)* U (v ⊗ Λ(a)) = Λ((ω_{v,w} ⋆ id)Gamma(a)).
pub fn check_slice_identities(
    g: &MeasuredQuantumGroupoid,
    pmu: &PseudoMultiplicativeUnitary,
) -> Result<Report> {
    if pmu.right_version {
        return Err(FunError::WrongVersion("left"));
    }
    let mut rep = Report::new("slice-identities");
    let gns = &pmu.gns;
    let eye = mat::eye(gns.dim_h);
    let units = g.m_alg().units();
    let pres = AlgebraPresentation::new(g.m_alg().clone(), gns.pi.clone())?;

    let mut shortcut = 0.0f64;
    for e in &units {
        let jej = antilinear::sandwich(&gns.jm, &gns.pi_apply(e));
        let j_lam_e = antilinear::apply(&gns.jm, &gns.lambda(e));
        let lhs_op = pmu.t_tgt.op_tensor_unchecked(&eye, &jej);
        for x in &units {
            let lhs = &lhs_op * &pmu.u * pmu.t_src.rho_slice(&gns.lambda(x));
            let rhs = g.gamma_of(x) * pmu.t_tgt.rho_slice(&j_lam_e);
            shortcut = shortcut.max(mat::diff_norm(&lhs, &rhs));
        }
    }
    rep.push("shortcut relation", shortcut);

    let mut corr = 0.0f64;
    for a in &units {
        let gam = g.gamma_of(a);
        for k in 0..gns.dim_h {
            let mut v = CVec::zeros(gns.dim_h);
            v[k] = mat::cone();
            let moved = &pmu.u * pmu.t_src.elementary(&v, &gns.lambda(a));
            for l in 0..gns.dim_h {
                let mut w = CVec::zeros(gns.dim_h);
                w[l] = mat::cone();
                let lhs = pmu.t_tgt.lambda_slice(&w).adjoint() * &moved;
                let sliced = rel_tensor::slice::slice_left(&pmu.t_tgt, &v, &w, &gam);
                let (m_elt, _) = pres.pull_back(&sliced);
                corr = corr.max(mat::vec_diff_norm(&lhs, &gns.lambda(&m_elt)));
            }
        }
    }
    rep.push("slice correspondence", corr);
    Ok(rep)
}

/// Adjoints of first-leg slices of the right unitary against GNS vectors.
pub fn check_slice_adjoint_rule(
    g: &MeasuredQuantumGroupoid,
    pmu: &PseudoMultiplicativeUnitary,
) -> Result<f64> {
    if !pmu.right_version {
        return Err(FunError::WrongVersion("right"));
    }
    let gns = &pmu.gns;
    let slice = |v: &CVec, w: &CVec| -> CMat {
        pmu.t_tgt.lambda_slice(w).adjoint() * &pmu.u * pmu.t_src.lambda_slice(v)
    };
    let mut worst = 0.0f64;
    for a in &g.m_alg().units() {
        for b in &g.m_alg().units() {
            let lhs = slice(&gns.lambda(a), &antilinear::apply(&gns.jm, &gns.lambda(b))).adjoint();
            let rhs = slice(
                &gns.lambda(&a.adjoint()),
                &antilinear::apply(&gns.jm, &gns.lambda(&b.adjoint())),
            );
            worst = worst.max(mat::diff_norm(&lhs, &rhs));
        }
    }
    Ok(worst)
}

/// Rank of the span of first-leg slices (should be dim M), rank of the
/// dual-leg span, and *-closure of both.
pub fn check_generation(
    g: &MeasuredQuantumGroupoid,
    pmu: &PseudoMultiplicativeUnitary,
) -> Result<Report> {
    let mut rep = Report::new("generation");
    let gns = &pmu.gns;
    let vs: Vec<CVec> = g.m_alg().units().iter().map(|e| gns.lambda(e)).collect();

    let mut leg = Vec::new();
    let mut dual = Vec::new();
    for v in &vs {
        for w in &vs {
            leg.push(pmu.t_tgt.lambda_slice(w).adjoint() * &pmu.u * pmu.t_src.lambda_slice(v));
            dual.push(pmu.t_tgt.rho_slice(w).adjoint() * &pmu.u * pmu.t_src.rho_slice(v));
        }
    }
    for (name, fam) in [("algebra leg", leg), ("dual leg", dual)] {
        let span = algebra::orthonormalize_span(&fam, 1e-9);
        let closed = algebra::generate_algebra(&fam, 1e-9);
        let mut star = 0.0f64;
        for b in &span {
            let adj = b.adjoint();
            let mut resid = adj.clone();
            for s in &span {
                resid -= s * mat::hs_inner(&adj, s);
            }
            star = star.max(mat::max_abs(&resid));
        }
        rep.push(format!("{} span rank {}", name, span.len()), 0.0);
        rep.push(
            format!("{} algebra closure", name),
            if closed.len() == span.len() { 0.0 } else { 1.0 },
        );
        rep.push(format!("{} star closure", name), star);
    }
    Ok(rep)
}

/// Rank of the first-leg slice span.
pub fn generation_rank(pmu: &PseudoMultiplicativeUnitary) -> usize {
    let gns = &pmu.gns;
    let mut vs = Vec::new();
    for k in 0..gns.dim_h {
        let mut v = CVec::zeros(gns.dim_h);
        v[k] = mat::cone();
        vs.push(v);
    }
    let mut leg = Vec::new();
    for v in &vs {
        for w in &vs {
            leg.push(pmu.t_tgt.lambda_slice(w).adjoint() * &pmu.u * pmu.t_src.lambda_slice(v));
        }
    }
    algebra::orthonormalize_span(&leg, 1e-9).len()
}

/// When T_L is a conditional expectation, Λ_Φ(1) is co-fixed and its three
/// brackets are the identity of N.
pub fn check_cofixed_vector(
    g: &MeasuredQuantumGroupoid,
    pmu: &PseudoMultiplicativeUnitary,
) -> Result<Option<Report>> {
    if pmu.right_version {
        return Err(FunError::WrongVersion("left"));
    }
    let one_n = g.n_alg().identity();
    let expectation = mat::diff_norm(
        &g.t_left.apply(g.m_alg(), &g.m_alg().identity()),
        &one_n,
    );
    if expectation > 1e-9 {
        return Ok(None);
    }
    let mut rep = Report::new("cofixed-vector");
    let gns = &pmu.gns;
    let xi = gns.lambda(&g.m_alg().identity());
    let mut fixed = 0.0f64;
    for k in 0..gns.dim_h {
        let mut v = CVec::zeros(gns.dim_h);
        v[k] = mat::cone();
        let lhs = &pmu.u * pmu.t_src.elementary(&v, &xi);
        let rhs = pmu.t_tgt.elementary(&v, &xi);
        fixed = fixed.max(mat::vec_diff_norm(&lhs, &rhs));
    }
    rep.push("U(v ⊗ Λ(1)) = v ⊗ Λ(1)", fixed);

    for (name, leg) in [
        ("alpha bracket", g.alpha_leg()?),
        ("beta bracket", g.beta_leg()?),
        (
            "beta-hat bracket",
            rel_tensor::BasisRep::new(g.base.clone(), pmu.hat_images.clone(), true)?,
        ),
    ] {
        let br = leg.bracket(&xi, &xi)?;
        rep.push(name, mat::diff_norm(&br, &one_n));
    }
    Ok(Some(rep))
}
