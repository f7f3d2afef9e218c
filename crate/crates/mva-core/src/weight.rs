//! Faithful weights φ(x) = Tr(ρ x) against the non-normalized block trace,
//! modular flows, and Connes cocycles.

use crate::algebra::MultiMatrixAlgebra;
use crate::mat::{self, pow_c, pow_it, CMat, CVec, C};
use crate::{MvaError, Result};

#[derive(Debug, Clone)]
pub struct Weight {
    pub rho: CMat,
}

impl Weight {
    /// A density must be Hermitian, strictly positive and in the algebra.
    pub fn new(alg: &MultiMatrixAlgebra, rho: CMat) -> Result<Self> {
        let herm = mat::diff_norm(&rho, &rho.adjoint());
        if herm > 1e-10 {
            return Err(MvaError::NotOfKind("Hermitian", herm));
        }
        let memb = alg.membership_error(&rho);
        if memb > 1e-10 {
            return Err(MvaError::Membership("Weight::new", memb));
        }
        let (ev, _) = mat::herm_eig(&rho);
        if ev[0] <= 1e-12 {
            return Err(MvaError::NotOfKind("strictly positive", ev[0]));
        }
        Ok(Weight { rho })
    }

    pub fn tracial(alg: &MultiMatrixAlgebra) -> Self {
        Weight { rho: alg.identity() }
    }

    /// Recover a density from the values of the functional on matrix units:
    /// ρ_{ji} = φ(e_{ij}).
    pub fn from_functional(alg: &MultiMatrixAlgebra, vals: &CVec) -> Result<Self> {
        let mut rho = mat::zeros(alg.ambient_dim(), alg.ambient_dim());
        for (u, (k, i, j)) in alg.unit_labels().into_iter().enumerate() {
            let o = alg.block_offset(k);
            rho[(o + j, o + i)] = vals[u];
        }
        Weight::new(alg, rho)
    }

    pub fn value(&self, x: &CMat) -> C {
        (&self.rho * x).trace()
    }

    /// σ_t(x) = ρ^{it} x ρ^{-it}.
    pub fn sigma(&self, t: f64, x: &CMat) -> CMat {
        let u = pow_it(&self.rho, t);
        &u * x * u.adjoint()
    }

    /// Analytic continuation σ_z(x) = ρ^{iz} x ρ^{-iz} (so σ_{-i}(x) = ρ x ρ^{-1}).
    pub fn sigma_c(&self, z: C, x: &CMat) -> CMat {
        let iz = mat::ci() * z;
        &pow_c(&self.rho, iz) * x * pow_c(&self.rho, -iz)
    }

    /// Perturbed weight φ_h(x) = φ(h^{1/2} x h^{1/2}) for positive h commuting
    /// is not assumed; the density is ρ_h = h^{1/2} ρ h^{1/2}.
    pub fn perturb(&self, alg: &MultiMatrixAlgebra, h: &CMat) -> Result<Weight> {
        let hs = mat::psd_pow_cut(h, 0.5, 1e-14);
        Weight::new(alg, &hs * &self.rho * &hs)
    }
}

/// Connes cocycle [Dφ:Dψ]_t = ρ_φ^{it} ρ_ψ^{-it} of two faithful weights of the
/// same algebra, evaluated in a common faithful representation.
pub fn connes_cocycle(phi: &Weight, psi: &Weight, t: f64) -> CMat {
    pow_it(&phi.rho, t) * pow_it(&psi.rho, -t)
}

/// Unitarity and cocycle-identity residuals of [Dφ:Dψ] on a t-grid.
pub fn cocycle_residuals(phi: &Weight, psi: &Weight, grid: &[f64]) -> f64 {
    let n = phi.rho.nrows();
    let mut worst = 0.0f64;
    for &s in grid {
        for &t in grid {
            let us = connes_cocycle(phi, psi, s);
            let ut = connes_cocycle(phi, psi, t);
            let ust = connes_cocycle(phi, psi, s + t);
            worst = worst.max(mat::diff_norm(&(&us * psi.sigma(s, &ut)), &ust));
            worst = worst.max(mat::diff_norm(&(&us * us.adjoint()), &mat::eye(n)));
        }
    }
    worst
}
