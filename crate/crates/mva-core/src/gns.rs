//! GNS spaces with closed-form modular data.
//!
//! For a faithful weight φ with density ρ the canonical realization is the
//! Hilbert-Schmidt picture Λ(x) = coords(x ρ^{1/2}); arbitrary standard
//! representations are supported through a cyclic vector implementing φ.

use crate::algebra::MultiMatrixAlgebra;
use crate::mat::{self, antilinear, conj_mat, pow_it, psd_pow_cut, CMat, CVec};
use crate::weight::Weight;
use crate::{MvaError, Result};

#[derive(Debug, Clone)]
pub struct Gns {
    pub alg: MultiMatrixAlgebra,
    pub weight: Weight,
    /// Unit images of the (left) representation on H.
    pub pi: Vec<CMat>,
    /// Cyclic vector implementing the weight.
    pub omega: CVec,
    pub dim_h: usize,
    /// Λ on matrix units, as a dim_h × dim_vs matrix of columns.
    pub lam: CMat,
    pub lam_inv: CMat,
    /// Modular operator: Δ Λ(x) = Λ(ρ x ρ^{-1}).
    pub delta: CMat,
    /// Modular conjugation as an antilinear matrix: J v = jm · conj(v);
    /// J Λ(x) = Λ(ρ^{1/2} x* ρ^{-1/2}).
    pub jm: CMat,
}

impl Gns {
    /// GNS data on an arbitrary standard representation with cyclic vector ω.
    pub fn with_rep(
        alg: MultiMatrixAlgebra,
        weight: Weight,
        pi: Vec<CMat>,
        omega: CVec,
    ) -> Result<Self> {
        let dim_h = omega.len();
        let n = alg.dim_vs();
        if dim_h != n {
            return Err(MvaError::Mismatch("Gns::with_rep (representation not standard)"));
        }
        let mut lam = mat::zeros(dim_h, n);
        for (u, p) in pi.iter().enumerate() {
            lam.set_column(u, &(p * &omega));
        }
        // ⟨Λ(x),Λ(y)⟩ = φ(y* x) on matrix units
        let units = alg.units();
        let mut worst = 0.0f64;
        for (u, eu) in units.iter().enumerate() {
            for (v, ev) in units.iter().enumerate() {
                let got = mat::inner(&lam.column(u).into_owned(), &lam.column(v).into_owned());
                let want = weight.value(&(ev.adjoint() * eu));
                worst = worst.max((got - want).norm());
            }
        }
        if worst > 1e-8 {
            return Err(MvaError::NotOfKind("a GNS inner product for the weight", worst));
        }
        let lam_inv = mat::pinv(&lam, 1e-12);
        if mat::diff_norm(&(&lam_inv * &lam), &mat::eye(n)) > 1e-8 {
            return Err(MvaError::Singular("Gns lambda map", 0.0));
        }
        let rho = weight.rho.clone();
        let rho_is = psd_pow_cut(&rho, -0.5, 1e-14);
        let rho_s = psd_pow_cut(&rho, 0.5, 1e-14);
        let mod_coords = alg.op_from_alg_action(|x| &rho * x * psd_pow_cut(&rho, -1.0, 1e-14));
        let delta = &lam * mod_coords * &lam_inv;
        // x ↦ ρ^{1/2} x* ρ^{-1/2} in coordinates: on the (real) matrix-unit basis the
        // adjoint is a permutation, so the antilinear map is v ↦ star_coords · conj(v).
        let star_coords = alg.op_from_alg_action(|x| &rho_s * x.adjoint() * &rho_is);
        let jm = &lam * star_coords * conj_mat(&lam_inv);
        Ok(Gns { alg, weight, pi, omega, dim_h, lam, lam_inv, delta, jm })
    }

    /// Canonical Hilbert-Schmidt realization.
    pub fn canonical(alg: MultiMatrixAlgebra, weight: Weight) -> Result<Self> {
        let units = alg.units();
        let pi: Vec<CMat> = units
            .iter()
            .map(|e| alg.op_from_alg_action(|x| e * x))
            .collect();
        let omega = alg.coords(&psd_pow_cut(&weight.rho, 0.5, 1e-14));
        Gns::with_rep(alg, weight, pi, omega)
    }

    /// GNS data of a second weight of the same algebra on the same space:
    /// the cyclic vector is Λ_φ(ρ_2^{1/2} ρ_φ^{-1/2}).
    pub fn sibling(&self, weight2: Weight) -> Result<Self> {
        let a = psd_pow_cut(&weight2.rho, 0.5, 1e-14) * psd_pow_cut(&self.weight.rho, -0.5, 1e-14);
        let omega2 = self.lambda(&a);
        Gns::with_rep(self.alg.clone(), weight2, self.pi.clone(), omega2)
    }

    pub fn lambda(&self, x: &CMat) -> CVec {
        &self.lam * self.alg.coords(x)
    }

    pub fn lambda_inv(&self, v: &CVec) -> CMat {
        self.alg.from_coords(&(&self.lam_inv * v))
    }

    /// Left action of a canonical algebra element on H.
    pub fn pi_apply(&self, x: &CMat) -> CMat {
        let c = self.alg.coords(x);
        let mut out = mat::zeros(self.dim_h, self.dim_h);
        for (u, p) in self.pi.iter().enumerate() {
            if c[u] != mat::czero() {
                out += p * c[u];
            }
        }
        out
    }

    /// Right action (commutant) π'(x) = J π(x*) J.
    pub fn right_rep(&self, x: &CMat) -> CMat {
        antilinear::sandwich(&self.jm, &self.pi_apply(&x.adjoint()))
    }

    pub fn delta_pow_it(&self, t: f64) -> CMat {
        pow_it(&self.delta, t)
    }

    /// S = JΔ^{1/2} as an antilinear matrix (S Λ(x) = Λ(x*)).
    pub fn s_op(&self) -> CMat {
        antilinear::after_linear(&self.jm, &psd_pow_cut(&self.delta, 0.5, 1e-14))
    }

    /// F = S* = Δ^{1/2}J as an antilinear matrix.
    pub fn f_op(&self) -> CMat {
        antilinear::adjoint(&self.s_op())
    }

    /// Max residual of the Tomita relations on the matrix-unit spanning set.
    pub fn tomita_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        let s = self.s_op();
        for e in self.alg.units() {
            let got = antilinear::apply(&s, &self.lambda(&e));
            worst = worst.max(mat::vec_diff_norm(&got, &self.lambda(&e.adjoint())));
        }
        let jj = antilinear::compose(&self.jm, &self.jm);
        worst = worst.max(mat::diff_norm(&jj, &mat::eye(self.dim_h)));
        let jdj = antilinear::sandwich(&self.jm, &self.delta);
        worst = worst.max(mat::diff_norm(&jdj, &psd_pow_cut(&self.delta, -1.0, 1e-14)));
        worst
    }
}
