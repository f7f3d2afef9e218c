//! The measured quantum groupoid bundle and its derived realizations.

use mva_core::algebra::MultiMatrixAlgebra;
use mva_core::mat::{CMat, CVec};
use mva_core::weight::Weight;
use mva_core::Gns;
use rel_tensor::class::swap_matrix;
use rel_tensor::{BasisRep, LinkKind, RelativeTensorSpace};

use crate::ovw::OperatorValuedWeight;
use crate::Result;

/// A *-anti-automorphism of M given by its values on the matrix units
/// (ambient M elements).
#[derive(Debug, Clone)]
pub struct Coinvolution {
    pub images: Vec<CMat>,
}

impl Coinvolution {
    pub fn apply(&self, m_alg: &MultiMatrixAlgebra, x: &CMat) -> CMat {
        let c = m_alg.coords(x);
        let mut out = self.images[0].scale(0.0);
        for (u, im) in self.images.iter().enumerate() {
            out += im * c[u];
        }
        out
    }
}

/// The full bundle (N, M, alpha, beta, Gamma, nu, T_L, T_R) together with a
/// standard realization of (M, Phi) on a Hilbert space H.  Constructing one
/// performs no verification; run `checks::check_all` to certify it.
#[derive(Debug, Clone)]
pub struct MeasuredQuantumGroupoid {
    /// canonical GNS of (N, nu)
    pub base: Gns,
    /// realization of (M, Phi) with Phi = nu ∘ T_L's N-part
    pub gns: Gns,
    /// alpha(e_u) as ambient M elements, one per N unit
    pub alpha: Vec<CMat>,
    /// beta(e_u) as ambient M elements, one per N unit
    pub beta: Vec<CMat>,
    /// coproduct of each M unit, compressed on the relative tensor square
    pub gamma: Vec<CMat>,
    pub t_left: OperatorValuedWeight,
    pub t_right: OperatorValuedWeight,
}

impl MeasuredQuantumGroupoid {
    pub fn m_alg(&self) -> &MultiMatrixAlgebra {
        &self.gns.alg
    }

    pub fn n_alg(&self) -> &MultiMatrixAlgebra {
        &self.base.alg
    }

    /// alpha as a linear map on ambient elements.
    pub fn alpha_of(&self, n: &CMat) -> CMat {
        let c = self.n_alg().coords(n);
        let mut out = self.alpha[0].scale(0.0);
        for (u, im) in self.alpha.iter().enumerate() {
            out += im * c[u];
        }
        out
    }

    pub fn beta_of(&self, n: &CMat) -> CMat {
        let c = self.n_alg().coords(n);
        let mut out = self.beta[0].scale(0.0);
        for (u, im) in self.beta.iter().enumerate() {
            out += im * c[u];
        }
        out
    }

    /// alpha on H, one operator per N unit.
    pub fn alpha_ops(&self) -> Vec<CMat> {
        self.alpha.iter().map(|a| self.gns.pi_apply(a)).collect()
    }

    pub fn beta_ops(&self) -> Vec<CMat> {
        self.beta.iter().map(|b| self.gns.pi_apply(b)).collect()
    }

    pub fn alpha_leg(&self) -> Result<BasisRep> {
        Ok(BasisRep::new(self.base.clone(), self.alpha_ops(), false)?)
    }

    pub fn beta_leg(&self) -> Result<BasisRep> {
        Ok(BasisRep::new(self.base.clone(), self.beta_ops(), true)?)
    }

    /// The relative tensor square H_beta ⊗_alpha H carrying the coproduct.
    pub fn coproduct_space(&self) -> Result<RelativeTensorSpace> {
        Ok(RelativeTensorSpace::new(self.beta_leg()?, self.alpha_leg()?, LinkKind::OverPsi)?)
    }

    /// Coproduct of an ambient M element, compressed.
    pub fn gamma_of(&self, x: &CMat) -> CMat {
        let c = self.m_alg().coords(x);
        let mut out = self.gamma[0].scale(0.0);
        for (u, im) in self.gamma.iter().enumerate() {
            out += im * c[u];
        }
        out
    }

    /// Ambient lift of the coproduct on H ⊗ H (supported on the Gram range).
    pub fn gamma_ambient(&self, t: &RelativeTensorSpace, x: &CMat) -> CMat {
        &t.space.v * self.gamma_of(x) * t.space.v.adjoint()
    }

    /// The weight Psi = nu ∘ T_R's N-part on M.
    pub fn psi(&self) -> Result<Weight> {
        Ok(self.t_right.compose_weight(self.m_alg(), &self.base.weight)?)
    }

    /// The weight Phi = nu ∘ T_L's N-part on M (should agree with gns.weight).
    pub fn phi(&self) -> Result<Weight> {
        Ok(self.t_left.compose_weight(self.m_alg(), &self.base.weight)?)
    }

    /// The opposite bundle: alpha and beta exchanged through the blockwise
    /// transpose of N, nu replaced by its transpose, and the coproduct
    /// flipped.  The realization stays on the same H with the weight Psi.
    pub fn opposite(&self) -> Result<MeasuredQuantumGroupoid> {
        let n_alg = self.n_alg().clone();
        let tr = |x: &CMat| blockwise_transpose(&n_alg, x);
        let nu_t = Weight::new(&n_alg, tr(&self.base.weight.rho))?;
        let base = Gns::canonical(n_alg.clone(), nu_t)?;
        let gns = self.gns.sibling(self.psi()?)?;

        let n_units = n_alg.units();
        let alpha: Vec<CMat> = n_units.iter().map(|e| self.beta_of(&tr(e))).collect();
        let beta: Vec<CMat> = n_units.iter().map(|e| self.alpha_of(&tr(e))).collect();

        let t_left = OperatorValuedWeight::new(
            true,
            self.t_right.images.iter().map(|n| tr(n)).collect(),
        );
        let t_right = OperatorValuedWeight::new(
            false,
            self.t_left.images.iter().map(|n| tr(n)).collect(),
        );

        let mut flipped = MeasuredQuantumGroupoid {
            base,
            gns,
            alpha,
            beta,
            gamma: Vec::new(),
            t_left,
            t_right,
        };
        // flip the coproduct through the ambient leg swap and compress on the
        // opposite tensor square
        let t_old = self.coproduct_space()?;
        let t_new = flipped.coproduct_space()?;
        let s = swap_matrix(self.gns.dim_h, self.gns.dim_h);
        flipped.gamma = self
            .m_alg()
            .units()
            .iter()
            .map(|e| {
                let amb = &s * self.gamma_ambient(&t_old, e) * &s;
                &t_new.space.e * amb * &t_new.space.p
            })
            .collect();
        Ok(flipped)
    }
}

/// Blockwise transpose: the standard anti-automorphism of a multi-matrix
/// algebra in its defining ambient form.
pub fn blockwise_transpose(alg: &MultiMatrixAlgebra, x: &CMat) -> CMat {
    let c = alg.coords(x);
    let mut out = CVec::zeros(c.len());
    for (k, &m) in alg.block_dims.iter().enumerate() {
        for i in 0..m {
            for j in 0..m {
                out[alg.unit_index(k, i, j)] = c[alg.unit_index(k, j, i)];
            }
        }
    }
    alg.from_coords(&out)
}
