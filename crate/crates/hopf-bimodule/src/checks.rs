//! Residual checks for Hopf-bimodule structure, invariance, adaptedness, and
//! co-involutions.

use mva_core::algebra::{AlgebraPresentation, SpanMap};
use mva_core::mat::{self, CMat};
use rel_tensor::class::{self, ClassSpace};
use rel_tensor::rel::flip;
use rel_tensor::slice;
use rel_tensor::{BasisRep, LinkKind, RelativeTensorSpace};

use crate::mqg::{Coinvolution, MeasuredQuantumGroupoid};
use crate::report::Report;
use crate::Result;

const T_GRID: [f64; 6] = [-1.0, -0.5, -0.1, 0.1, 0.5, 1.0];

/// The two nestings of the triple tensor square, their associativity
/// transport, and the span extensions of Gamma ⋆ id and id ⋆ Gamma.
pub struct CoassocContext {
    pub t12: RelativeTensorSpace,
    pub nested_left: ClassSpace,
    pub nested_right: ClassSpace,
    /// unitary from the left nesting onto the right nesting
    pub assoc: CMat,
    pub ext_left: SpanMap,
    pub ext_right: SpanMap,
}

impl CoassocContext {
    pub fn new(g: &MeasuredQuantumGroupoid) -> Result<Self> {
        let dh = g.gns.dim_h;
        let alpha_ops = g.alpha_ops();
        let beta_ops = g.beta_ops();
        let t12 = g.coproduct_space()?;

        let lifted_beta: Vec<CMat> = beta_ops
            .iter()
            .map(|b| t12.op_tensor_unchecked(&mat::eye(dh), b))
            .collect();
        let left_leg = BasisRep::new(g.base.clone(), lifted_beta, true)?;
        let outer_l = RelativeTensorSpace::new(left_leg, g.alpha_leg()?, LinkKind::OverPsi)?;
        let nested_left = t12.space.nest_left(&outer_l.space, dh);

        let lifted_alpha: Vec<CMat> = alpha_ops
            .iter()
            .map(|a| t12.op_tensor_unchecked(a, &mat::eye(dh)))
            .collect();
        let right_leg = BasisRep::new(g.base.clone(), lifted_alpha, false)?;
        let outer_r = RelativeTensorSpace::new(g.beta_leg()?, right_leg, LinkKind::OverPsi)?;
        let nested_right = t12.space.nest_right(&outer_r.space, dh);

        let assoc = class::transport(&nested_left, &nested_right, &mat::eye(dh * dh * dh));

        let units = g.m_alg().units();
        let pi: Vec<CMat> = units.iter().map(|e| g.gns.pi_apply(e)).collect();
        let gam: Vec<CMat> = (0..units.len()).map(|u| g.gamma[u].clone()).collect();
        let mut sources = Vec::new();
        let mut tgt_l = Vec::new();
        let mut tgt_r = Vec::new();
        for u in 0..units.len() {
            for v in 0..units.len() {
                sources.push(t12.op_tensor_unchecked(&pi[u], &pi[v]));
                tgt_l.push(outer_l.op_tensor_unchecked(&gam[u], &pi[v]));
                tgt_r.push(outer_r.op_tensor_unchecked(&pi[u], &gam[v]));
            }
        }
        let ext_left = SpanMap::new(sources.clone(), tgt_l);
        let ext_right = SpanMap::new(sources, tgt_r);
        Ok(CoassocContext { t12, nested_left, nested_right, assoc, ext_left, ext_right })
    }
}

/// Bimodule property, homomorphism laws, and coassociativity of the coproduct.
pub fn check_bimodule(g: &MeasuredQuantumGroupoid) -> Result<Report> {
    let mut rep = Report::new("bimodule");
    let t = g.coproduct_space()?;
    let units = g.m_alg().units();

    let one = g.gamma_of(&g.m_alg().identity());
    rep.push("unitality", mat::diff_norm(&one, &mat::eye(t.dim)));

    let mut hom = 0.0f64;
    let mut star = 0.0f64;
    for eu in &units {
        star = star.max(mat::diff_norm(
            &g.gamma_of(&eu.adjoint()),
            &g.gamma_of(eu).adjoint(),
        ));
        for ev in &units {
            hom = hom.max(mat::diff_norm(
                &g.gamma_of(&(eu * ev)),
                &(g.gamma_of(eu) * g.gamma_of(ev)),
            ));
        }
    }
    rep.push("multiplicativity", hom);
    rep.push("star compatibility", star);

    let mut bimod = 0.0f64;
    let n_units = g.n_alg().units();
    for n in &n_units {
        for m in &n_units {
            let lhs = g.gamma_of(&(g.alpha_of(n) * g.beta_of(m)));
            let rhs = t.op_tensor(&g.gns.pi_apply(&g.alpha_of(n)), &g.gns.pi_apply(&g.beta_of(m)))?;
            bimod = bimod.max(mat::diff_norm(&lhs, &rhs));
        }
    }
    rep.push("alpha-beta tensor splitting", bimod);

    let ctx = CoassocContext::new(g)?;
    let mut coassoc = 0.0f64;
    let mut escape = 0.0f64;
    for eu in &units {
        let gc = g.gamma_of(eu);
        let (a, r1) = ctx.ext_left.apply(&gc);
        let (b, r2) = ctx.ext_right.apply(&gc);
        escape = escape.max(r1).max(r2);
        coassoc = coassoc.max(mat::diff_norm(&(&ctx.assoc * &a), &(&b * &ctx.assoc)));
    }
    rep.push("coproduct range in fiber product", escape);
    rep.push("coassociativity", coassoc);
    Ok(rep)
}

/// (id ⋆ Phi) Gamma(x) = T_L(x) over an algebra basis of M.
pub fn check_left_invariant(g: &MeasuredQuantumGroupoid) -> Result<Report> {
    let mut rep = Report::new("left-invariance");
    let t = g.coproduct_space()?;
    let pres = AlgebraPresentation::new(g.m_alg().clone(), g.gns.pi.clone())?;
    let phi = g.phi()?;
    let mut worst = 0.0f64;
    for (u, eu) in g.m_alg().units().iter().enumerate() {
        let sliced = slice::slice_weight_right(&t, &pres, &phi, &g.gamma[u]);
        let target = g.gns.pi_apply(&g.alpha_of(&g.t_left.images[u]));
        worst = worst.max(mat::diff_norm(&sliced, &target));
        let _ = eu;
    }
    rep.push("(id ⋆ Phi)Gamma = T_L", worst);
    Ok(rep)
}

/// (Psi ⋆ id) Gamma(x) = T_R(x) over an algebra basis of M.
pub fn check_right_invariant(g: &MeasuredQuantumGroupoid) -> Result<Report> {
    let mut rep = Report::new("right-invariance");
    let t = g.coproduct_space()?;
    let pres = AlgebraPresentation::new(g.m_alg().clone(), g.gns.pi.clone())?;
    let psi = g.psi()?;
    let mut worst = 0.0f64;
    for u in 0..g.m_alg().dim_vs() {
        let sliced = slice::slice_weight_left(&t, &pres, &psi, &g.gamma[u]);
        let target = g.gns.pi_apply(&g.beta_of(&g.t_right.images[u]));
        worst = worst.max(mat::diff_norm(&sliced, &target));
    }
    rep.push("(Psi ⋆ id)Gamma = T_R", worst);
    Ok(rep)
}

/// sigma_t^Phi(beta(n)) = beta(sigma_{-t}^nu(n)) on a t-grid.
pub fn check_adapted(g: &MeasuredQuantumGroupoid) -> Result<Report> {
    let mut rep = Report::new("beta-adapted");
    let phi = g.phi()?;
    let mut worst = 0.0f64;
    for &t in &T_GRID {
        for n in &g.n_alg().units() {
            let lhs = phi.sigma(t, &g.beta_of(n));
            let rhs = g.beta_of(&g.base.weight.sigma(-t, n));
            worst = worst.max(mat::diff_norm(&lhs, &rhs));
        }
    }
    rep.push("modular flow of Phi on beta(N)", worst);
    Ok(rep)
}

/// sigma_t^Psi(alpha(n)) = alpha(sigma_t^nu(n)) on a t-grid.
pub fn check_adapted_dual(g: &MeasuredQuantumGroupoid) -> Result<Report> {
    let mut rep = Report::new("alpha-adapted");
    let psi = g.psi()?;
    let mut worst = 0.0f64;
    for &t in &T_GRID {
        for n in &g.n_alg().units() {
            let lhs = psi.sigma(t, &g.alpha_of(n));
            let rhs = g.alpha_of(&g.base.weight.sigma(t, n));
            worst = worst.max(mat::diff_norm(&lhs, &rhs));
        }
    }
    rep.push("modular flow of Psi on alpha(N)", worst);
    Ok(rep)
}

/// R ∘ alpha = beta, R² = id, anti-*-automorphism laws, and the flipped
/// coproduct identity.
pub fn check_coinvolution(g: &MeasuredQuantumGroupoid, r: &Coinvolution) -> Result<Report> {
    let mut rep = Report::new("coinvolution");
    let m_alg = g.m_alg();
    let units = m_alg.units();

    let mut swap_legs = 0.0f64;
    for n in &g.n_alg().units() {
        swap_legs = swap_legs.max(mat::diff_norm(&r.apply(m_alg, &g.alpha_of(n)), &g.beta_of(n)));
    }
    rep.push("R ∘ alpha = beta", swap_legs);

    let mut invol = 0.0f64;
    let mut anti = 0.0f64;
    let mut star = 0.0f64;
    for eu in &units {
        invol = invol.max(mat::diff_norm(&r.apply(m_alg, &r.apply(m_alg, eu)), eu));
        star = star.max(mat::diff_norm(
            &r.apply(m_alg, &eu.adjoint()),
            &r.apply(m_alg, eu).adjoint(),
        ));
        for ev in &units {
            anti = anti.max(mat::diff_norm(
                &r.apply(m_alg, &(eu * ev)),
                &(r.apply(m_alg, ev) * r.apply(m_alg, eu)),
            ));
        }
    }
    rep.push("involution", invol);
    rep.push("anti-multiplicativity", anti);
    rep.push("star compatibility", star);

    // flip ∘ (R ⋆ R) ∘ Gamma = Gamma ∘ R
    let t12 = g.coproduct_space()?;
    let t_op = RelativeTensorSpace::new(g.alpha_leg()?, g.beta_leg()?, LinkKind::OverPsiOp)?;
    let pi: Vec<CMat> = units.iter().map(|e| g.gns.pi_apply(e)).collect();
    let pi_r: Vec<CMat> = units.iter().map(|e| g.gns.pi_apply(&r.apply(m_alg, e))).collect();
    let mut sources = Vec::new();
    let mut targets = Vec::new();
    for u in 0..units.len() {
        for v in 0..units.len() {
            sources.push(t12.op_tensor_unchecked(&pi[u], &pi[v]));
            targets.push(t_op.op_tensor_unchecked(&pi_r[u], &pi_r[v]));
        }
    }
    let rr = SpanMap::new(sources, targets);
    let f = flip(&t_op, &t12);
    let mut worst = 0.0f64;
    let mut escape = 0.0f64;
    for eu in &units {
        let (mapped, res) = rr.apply(&g.gamma_of(eu));
        escape = escape.max(res);
        let lhs = &f * mapped * f.adjoint();
        let rhs = g.gamma_of(&r.apply(m_alg, eu));
        worst = worst.max(mat::diff_norm(&lhs, &rhs));
    }
    rep.push("R ⋆ R well-defined", escape);
    rep.push("flipped coproduct", worst);
    Ok(rep)
}

/// Aggregate of all structural checks plus range commutation, faithfulness,
/// weight consistency, and the operator-valued weight laws.
pub fn check_all(g: &MeasuredQuantumGroupoid, r: Option<&Coinvolution>) -> Result<Report> {
    let mut rep = Report::new("measured-quantum-groupoid");

    let alpha_ops = g.alpha_ops();
    let beta_ops = g.beta_ops();
    let mut comm = 0.0f64;
    for a in &alpha_ops {
        for b in &beta_ops {
            comm = comm.max(mat::diff_norm(&(a * b), &(b * a)));
        }
    }
    rep.push("alpha and beta ranges commute", comm);

    let n_dim = g.n_alg().dim_vs();
    for (label, images) in [("alpha faithful", &g.alpha), ("beta faithful", &g.beta)] {
        let mut m = mat::zeros(g.m_alg().dim_vs(), n_dim);
        for (u, im) in images.iter().enumerate() {
            m.set_column(u, &g.m_alg().coords(im));
        }
        let rank = m.svd(false, false).singular_values.iter().filter(|s| **s > 1e-9).count();
        rep.push(label, if rank == n_dim { 0.0 } else { 1.0 });
    }

    // realization weight agrees with the derived Phi; its density is
    // nonsingular exactly when T_L is faithful
    let phi = g.phi()?;
    rep.push(
        "realized weight is nu ∘ T_L",
        mat::diff_norm(&phi.rho, &g.gns.weight.rho),
    );
    let (ev, _) = mat::herm_eig(&phi.rho);
    rep.push("T_L faithful", (-ev[0]).max(0.0).max(if ev[0] > 1e-12 { 0.0 } else { 1.0 }));
    let psi = g.psi()?;
    let (ev_psi, _) = mat::herm_eig(&psi.rho);
    rep.push("T_R faithful", if ev_psi[0] > 1e-12 { 0.0 } else { 1.0 });

    rep.merge(g.t_left.validate(g.m_alg(), g.n_alg(), &|n| g.alpha_of(n), false));
    rep.merge(g.t_right.validate(g.m_alg(), g.n_alg(), &|n| g.beta_of(n), true));

    rep.merge(check_bimodule(g)?);
    rep.merge(check_left_invariant(g)?);
    rep.merge(check_right_invariant(g)?);
    rep.merge(check_adapted(g)?);
    rep.merge(check_adapted_dual(g)?);
    if let Some(r) = r {
        rep.merge(check_coinvolution(g, r)?);
    }
    Ok(rep)
}

/// Solution space of "x commutes with alpha(N) and Gamma(x) = 1 ⊗ x",
/// returned as coordinate vectors in M; by the fixed-point property this
/// should coincide with the span of beta(N).
pub fn cofixed_subspace(g: &MeasuredQuantumGroupoid) -> Result<Vec<mva_core::mat::CVec>> {
    let t = g.coproduct_space()?;
    let dim_m = g.m_alg().dim_vs();
    let units = g.m_alg().units();
    let alpha_ops = g.alpha_ops();
    // rows: for each unit u, the linear conditions on coords c
    let mut cols: Vec<CMat> = Vec::new();
    for eu in &units {
        let pi_u = g.gns.pi_apply(eu);
        let mut rows = Vec::new();
        rows.push(g.gamma_of(eu) - t.op_tensor_unchecked(&mat::eye(g.gns.dim_h), &pi_u));
        for a in &alpha_ops {
            rows.push(&pi_u * a - a * &pi_u);
        }
        let total: usize = rows.iter().map(|m| m.nrows() * m.ncols()).sum();
        let mut col = mva_core::mat::CVec::zeros(total);
        let mut off = 0;
        for m in rows {
            for v in mat::vec_of(&m).iter() {
                col[off] = *v;
                off += 1;
            }
        }
        cols.push(CMat::from_columns(&[col]));
    }
    let mut a = mat::zeros(cols[0].nrows(), dim_m);
    for (u, c) in cols.iter().enumerate() {
        a.set_column(u, &c.column(0));
    }
    Ok(mat::nullspace(&a, 1e-8))
}
