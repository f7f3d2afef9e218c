//! Operator-valued weights between multi-matrix algebras.

use mva_core::algebra::MultiMatrixAlgebra;
use mva_core::mat::{self, CMat};
use mva_core::weight::Weight;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::Report;

/// A linear map T from M onto alpha(N) or beta(N), stored through its
/// N-valued part: `images[u]` is the N element with T(e_u) = alpha(images[u])
/// (resp. beta(images[u])).
#[derive(Debug, Clone)]
pub struct OperatorValuedWeight {
    /// target is alpha(N) when true, beta(N) when false
    pub via_alpha: bool,
    pub images: Vec<CMat>,
}

impl OperatorValuedWeight {
    pub fn new(via_alpha: bool, images: Vec<CMat>) -> Self {
        OperatorValuedWeight { via_alpha, images }
    }

    /// N-valued part of T(x) for an ambient element x of M.
    pub fn apply(&self, m_alg: &MultiMatrixAlgebra, x: &CMat) -> CMat {
        let c = m_alg.coords(x);
        let mut out = self.images[0].scale(0.0);
        for (u, im) in self.images.iter().enumerate() {
            out += im * c[u];
        }
        out
    }

    /// The composed weight nu ∘ T on M.
    pub fn compose_weight(&self, m_alg: &MultiMatrixAlgebra, nu: &Weight) -> mva_core::Result<Weight> {
        let vals = mat::CVec::from_fn(m_alg.dim_vs(), |u, _| nu.value(&self.images[u]));
        Weight::from_functional(m_alg, &vals)
    }

    /// Positivity of T on a positive spanning family of M plus random x*x,
    /// and the N-bimodule law over the embedding's images.
    pub fn validate(
        &self,
        m_alg: &MultiMatrixAlgebra,
        n_alg: &MultiMatrixAlgebra,
        embed: &dyn Fn(&CMat) -> CMat,
        embed_anti: bool,
    ) -> Report {
        let mut rep = Report::new(if self.via_alpha { "ovw-left" } else { "ovw-right" });
        let mut worst_neg = 0.0f64;
        let mut check_pos = |p: &CMat, t: &OperatorValuedWeight| {
            let (ev, _) = mat::herm_eig(&t.apply(m_alg, p));
            worst_neg = worst_neg.max((-ev[0]).max(0.0));
        };
        for (k, &m) in m_alg.block_dims.iter().enumerate() {
            for i in 0..m {
                for j in i..m {
                    let eii = m_alg.unit(k, i, i);
                    let ejj = m_alg.unit(k, j, j);
                    if i == j {
                        check_pos(&eii, self);
                    } else {
                        let eij = m_alg.unit(k, i, j);
                        let eji = m_alg.unit(k, j, i);
                        check_pos(&(&eii + &ejj + &eij + &eji), self);
                        check_pos(&(&eii + &ejj + (&eji - &eij) * mat::ci()), self);
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let d = m_alg.ambient_dim();
        for _ in 0..4 {
            let x = m_alg.from_coords(&mat::random_unit_vec(m_alg.dim_vs(), &mut rng).scale((d as f64).sqrt()));
            check_pos(&(x.adjoint() * &x), self);
        }
        rep.push("positivity defect", worst_neg);

        // bimodule law: T(g(n1) x g(n2)) = n1' T(x) n2' where the primes
        // follow the embedding's (anti)multiplicativity
        let mut worst = 0.0f64;
        let n_units = n_alg.units();
        for x in m_alg.units() {
            for n1 in &n_units {
                for n2 in &n_units {
                    let lhs = self.apply(m_alg, &(embed(n1) * &x * embed(n2)));
                    let t = self.apply(m_alg, &x);
                    let rhs = if embed_anti { n2 * &t * n1 } else { n1 * &t * n2 };
                    worst = worst.max(mat::diff_norm(&lhs, &rhs));
                }
            }
        }
        rep.push("bimodule law", worst);
        rep
    }
}
