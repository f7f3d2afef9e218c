//! Assembly of the antipode from the fundamental unitary.
//!
//! The antilinear generator acts on slice vectors of the unitary by swapping
//! the two element pairs that parametrize them; solved in least squares over
//! a spanning family, its polar decomposition yields the positive modulus
//! implementing the scaling group and the antiunitary implementing the
//! unitary antipode.

use fundamental_unitary::{build_w, PseudoMultiplicativeUnitary};
use hopf_bimodule::{Coinvolution, MeasuredQuantumGroupoid};
use mva_core::algebra::AlgebraPresentation;
use mva_core::mat::{self, antilinear, CMat, CVec, C};
use mva_core::weight::Weight;
use mva_core::Gns;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{AntError, Result};

/// The antipode data of a measured quantum groupoid: S = R ∘ τ_{-i/2} with
/// R(m) = I m* I and τ_t(x) = D^{-it} x D^{it}.
#[derive(Debug, Clone)]
pub struct Antipode {
    /// antilinear generator, v ↦ g_mat · conj(v) on H
    pub g_mat: CMat,
    pub span_rank: usize,
    pub solve_residual: f64,
    pub involution_residual: f64,
    /// positive modulus of the generator
    pub d: CMat,
    /// antiunitary part, v ↦ i_mat · conj(v)
    pub i_mat: CMat,
    pub polar_residual: f64,
    /// unitary antipode on the canonical units of M
    pub r: Coinvolution,
    pub r_residual: f64,
    gns: Gns,
    pres: AlgebraPresentation,
}

impl Antipode {
    /// Scaling group at real time t, as a map of canonical elements of M.
    pub fn tau(&self, t: f64, x: &CMat) -> CMat {
        self.tau_c(C::new(t, 0.0), x)
    }

    /// Analytic continuation of the scaling group, exact in finite dimension.
    pub fn tau_c(&self, z: C, x: &CMat) -> CMat {
        let minus_iz = C::new(0.0, -1.0) * z;
        let left = mat::pow_c(&self.d, minus_iz);
        let right = mat::pow_c(&self.d, -minus_iz);
        self.pres.pull_back(&(left * self.pres.apply(x) * right)).0
    }

    /// Residual of membership of τ_t(x) in M.
    pub fn tau_residual(&self, t: f64, x: &CMat) -> f64 {
        let u = mat::pow_it(&self.d, -t);
        self.pres
            .pull_back(&(&u * self.pres.apply(x) * u.adjoint()))
            .1
    }

    /// Unitary antipode R(m) = I m* I.
    pub fn r_of(&self, x: &CMat) -> CMat {
        self.r.apply(&self.pres.alg, x)
    }

    /// Antipode S = R ∘ τ_{-i/2}.
    pub fn s_of(&self, x: &CMat) -> CMat {
        self.r_of(&self.tau_c(C::new(0.0, -0.5), x))
    }

    /// Inverse antipode S^{-1} = R ∘ τ_{i/2}.
    pub fn s_inv(&self, x: &CMat) -> CMat {
        self.r_of(&self.tau_c(C::new(0.0, 0.5), x))
    }
}

/// Spanning vector: a first-leg slice of the fundamental isometry applied to
/// a GNS tensor, parametrized by two element pairs (a,b) and (c,d).
fn span_vector(
    pmu: &PseudoMultiplicativeUnitary,
    gns_psi: &Gns,
    psi: &Weight,
    a: &CMat,
    b: &CMat,
    c: &CMat,
    d: &CMat,
) -> CVec {
    let w = gns_psi.lambda(&psi.sigma_c(C::new(0.0, -1.0), &b.adjoint()));
    let src = pmu
        .t_src
        .elementary(&gns_psi.lambda(a), &pmu.gns.lambda(&(c * d).adjoint()));
    pmu.t_tgt.lambda_slice(&w).adjoint() * &pmu.u * src
}

pub fn build_antipode(g: &MeasuredQuantumGroupoid) -> Result<Antipode> {
    let pmu = build_w(g)?;
    build_antipode_with(g, &pmu)
}

pub fn build_antipode_with(
    g: &MeasuredQuantumGroupoid,
    pmu: &PseudoMultiplicativeUnitary,
) -> Result<Antipode> {
    let gns = g.gns.clone();
    let psi = g.psi()?;
    let gns_psi = gns.sibling(psi.clone())?;
    let m_alg = g.m_alg();
    let pres = AlgebraPresentation::new(m_alg.clone(), gns.pi.clone())?;

    // pair parameters: all matrix units against a small fixed family, enough
    // to exhaust the slice span without quartic blowup
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut family = vec![m_alg.identity()];
    for _ in 0..2 {
        let h = mat::random_mat(m_alg.ambient_dim(), m_alg.ambient_dim(), &mut rng);
        family.push(m_alg.from_coords(&m_alg.coords(&h)));
    }

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for a in &m_alg.units() {
        for c in &m_alg.units() {
            for b in &family {
                for d in &family {
                    xs.push(span_vector(pmu, &gns_psi, &psi, a, b, c, d));
                    ys.push(span_vector(pmu, &gns_psi, &psi, c, d, a, b));
                }
            }
        }
    }
    let span_mats: Vec<CMat> = xs.iter().map(|v| CMat::from_column_slice(v.len(), 1, v.as_slice())).collect();
    let span_rank = mva_core::algebra::orthonormalize_span(&span_mats, 1e-9).len();
    if span_rank < gns.dim_h {
        return Err(AntError::SpanDeficient {
            rank: span_rank,
            dim: gns.dim_h,
        });
    }
    let (g_mat, solve_residual) = mat::solve_antilinear(&xs, &ys);
    if solve_residual > 1e-7 {
        return Err(AntError::Inconsistent(solve_residual));
    }
    let involution_residual = mat::diff_norm(
        &antilinear::compose(&g_mat, &g_mat),
        &mat::eye(gns.dim_h),
    );

    // polar decomposition G = I D^{1/2} with D = G♯ G
    let mut d = antilinear::compose(&antilinear::adjoint(&g_mat), &g_mat);
    d = (&d + d.adjoint()).scale(0.5);
    let (evs, _) = mat::herm_eig(&d);
    let top = evs.iter().cloned().fold(0.0f64, f64::max);
    if evs.iter().any(|&e| e < 1e-10 * top) {
        return Err(AntError::SingularModulus);
    }
    let d_inv_sqrt = mat::psd_pow_cut(&d, -0.5, 1e-12);
    let i_mat = antilinear::after_linear(&g_mat, &d_inv_sqrt);
    let polar_residual = mat::diff_norm(
        &antilinear::after_linear(&i_mat, &mat::psd_pow_cut(&d, 0.5, 1e-12)),
        &g_mat,
    );

    let mut r_residual = 0.0f64;
    let r_images: Vec<CMat> = m_alg
        .units()
        .iter()
        .map(|e| {
            let target = antilinear::sandwich(&i_mat, &pres.apply(&e.adjoint()));
            let (m, res) = pres.pull_back(&target);
            r_residual = r_residual.max(res);
            m
        })
        .collect();

    Ok(Antipode {
        g_mat,
        span_rank,
        solve_residual,
        involution_residual,
        d,
        i_mat,
        polar_residual,
        r: Coinvolution { images: r_images },
        r_residual,
        gns,
        pres,
    })
}

impl Antipode {
    pub fn gns(&self) -> &Gns {
        &self.gns
    }

    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.pres
    }
}
