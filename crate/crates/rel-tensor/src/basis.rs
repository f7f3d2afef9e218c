//! Legs: (anti-)representations of the basis algebra, bounded-vector operators,
//! brackets, and relative bases.

use mva_core::algebra::AlgebraPresentation;
use mva_core::mat::{self, antilinear, psd_pow_cut, CMat, CVec};
use mva_core::{Gns, MvaError};

use crate::{RelError, Result};

/// A Hilbert space carrying a representation (`anti = false`, "alpha-type") or
/// anti-representation (`anti = true`, "beta-type") of the basis (N, psi).
#[derive(Debug, Clone)]
pub struct BasisRep {
    /// GNS data of the base weight psi on N (canonical realization).
    pub base: Gns,
    /// Images of the canonical matrix units of N on H.
    pub images: Vec<CMat>,
    pub dim_h: usize,
    pub anti: bool,
    base_pres: AlgebraPresentation,
}

impl BasisRep {
    pub fn new(base: Gns, images: Vec<CMat>, anti: bool) -> Result<Self> {
        let dim_h = images[0].nrows();
        let alg = base.alg.clone();
        // representation images of the straight map: for an anti-representation
        // the unit e_{ij} maps to the image of e_{ji} of the opposite algebra,
        // so the presentation check uses the transposed assignment.
        let check_images: Vec<CMat> = if anti {
            alg.unit_labels()
                .iter()
                .map(|&(k, i, j)| images[alg.unit_index(k, j, i)].clone())
                .collect()
        } else {
            images.clone()
        };
        AlgebraPresentation::new(alg.clone(), check_images).map_err(|e| match e {
            MvaError::NotOfKind(_, r) => RelError::BadRep(r),
            other => RelError::Core(other),
        })?;
        let base_pres = AlgebraPresentation::new(alg, base.pi.clone())
            .expect("GNS left action is a faithful presentation");
        Ok(BasisRep { base, images, dim_h, anti, base_pres })
    }

    /// Apply the (anti-)representation to a canonical element of N.
    pub fn apply(&self, n: &CMat) -> CMat {
        let c = self.base.alg.coords(n);
        let mut out = mat::zeros(self.dim_h, self.dim_h);
        for (u, im) in self.images.iter().enumerate() {
            if c[u] != mat::czero() {
                out += im * c[u];
            }
        }
        out
    }

    /// Identity leg: H = H_psi with the left action (alpha-type) of N.
    pub fn standard_left(base: &Gns) -> Self {
        BasisRep::new(base.clone(), base.pi.clone(), false).expect("standard rep")
    }

    /// H = H_psi with the right action of N (beta-type / anti-representation).
    pub fn standard_right(base: &Gns) -> Self {
        let units = base.alg.units();
        let images: Vec<CMat> = units.iter().map(|e| base.right_rep(e)).collect();
        BasisRep::new(base.clone(), images, true).expect("standard anti-rep")
    }

    /// The bounded-vector operator R(xi): H_psi -> H.
    ///
    /// Beta-type (over psi-opposite): R(xi) Lambda(z) = beta(rho^{-1/2} z rho^{1/2}) xi.
    /// Alpha-type (over psi):        R(xi) Lambda(y) = alpha(y) xi.
    pub fn r_op(&self, xi: &CVec) -> CMat {
        let rho = &self.base.weight.rho;
        let rho_s = psd_pow_cut(rho, 0.5, 1e-14);
        let rho_is = psd_pow_cut(rho, -0.5, 1e-14);
        mat::op_from_action(self.base.dim_h, self.dim_h, |v| {
            let z = self.base.lambda_inv(v);
            let arg = if self.anti { &rho_is * &z * &rho_s } else { z };
            self.apply(&arg) * xi
        })
    }

    /// N-valued bracket of two vectors; positive in the diagonal.
    ///
    /// Beta-type: the unique n with pi(n) = R(eta)* R(xi).
    /// Alpha-type: the unique n with pi(n) = J R(xi)* R(eta) J; the antilinear
    /// J-twist restores linearity in xi and is the only *-sound positive
    /// convention for the commutant-valued product.
    pub fn bracket(&self, xi: &CVec, eta: &CVec) -> Result<CMat> {
        let target = if self.anti {
            self.r_op(eta).adjoint() * self.r_op(xi)
        } else {
            let x = self.r_op(xi).adjoint() * self.r_op(eta);
            antilinear::sandwich(&self.base.jm, &x)
        };
        let (n, res) = self.base_pres.pull_back(&target);
        if res > 1e-7 {
            return Err(RelError::BracketEscape(res));
        }
        Ok(n)
    }

    /// Pull an operator on H_psi back to N through the GNS left action.
    pub fn pull_base(&self, target: &CMat) -> (CMat, f64) {
        self.base_pres.pull_back(target)
    }

    /// Greedy relative basis: partial-isometry R's with orthogonal ranges
    /// summing to the identity.
    pub fn make_basis(&self) -> Result<RelBasis> {
        self.make_basis_inner(None)
    }

    /// Same greedy construction but seeded with random candidate directions,
    /// producing a genuinely different basis of the same module.
    pub fn make_basis_seeded(&self, seed: u64) -> Result<RelBasis> {
        use rand::SeedableRng;
        let rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        self.make_basis_inner(Some(rng))
    }

    fn make_basis_inner(&self, mut rng: Option<rand_chacha::ChaCha8Rng>) -> Result<RelBasis> {
        let lam1 = self.base.lambda(&self.base.alg.identity());
        let mut p = mat::eye(self.dim_h);
        let mut vecs: Vec<CVec> = Vec::new();
        let mut rops: Vec<CMat> = Vec::new();
        for _ in 0..self.dim_h + 1 {
            if mat::max_abs(&p) < 1e-9 {
                let basis = RelBasis { vectors: vecs, r_ops: rops };
                let defect = basis.completeness_defect(self.dim_h);
                if defect > 1e-8 {
                    return Err(RelError::BasisDefect(defect));
                }
                return Ok(basis);
            }
            // candidate with the largest bounded-vector operator
            let mut best: Option<(f64, CVec)> = None;
            for k in 0..self.dim_h {
                let cand = match rng.as_mut() {
                    None => p.column(k).into_owned(),
                    Some(r) => &p * mat::random_unit_vec(self.dim_h, r),
                };
                if cand.norm() < 1e-10 {
                    continue;
                }
                let r = self.r_op(&cand);
                let score = mat::max_abs(&r);
                if best.as_ref().map_or(true, |(s, _)| score > *s) {
                    best = Some((score, cand));
                }
            }
            let (_, cand) = best.ok_or(RelError::BasisDefect(mat::max_abs(&p)))?;
            let r = self.r_op(&cand);
            // partial-isometry factor of the polar decomposition
            let u = &r * psd_pow_cut(&(r.adjoint() * &r), -0.5, 1e-9);
            let xi = &u * &lam1;
            let ru = self.r_op(&xi);
            if mat::diff_norm(&ru, &u) > 1e-7 {
                return Err(RelError::BasisDefect(mat::diff_norm(&ru, &u)));
            }
            p -= &u * u.adjoint();
            vecs.push(xi);
            rops.push(u);
        }
        Err(RelError::BasisDefect(mat::max_abs(&p)))
    }
}

/// A vector together with its bounded-vector operator.
#[derive(Debug, Clone)]
pub struct BoundedVectorOp {
    pub xi: CVec,
    pub r: CMat,
}

#[derive(Debug, Clone)]
pub struct RelBasis {
    pub vectors: Vec<CVec>,
    pub r_ops: Vec<CMat>,
}

impl RelBasis {
    /// Residual of sum R_i R_i* = 1.
    pub fn completeness_defect(&self, dim_h: usize) -> f64 {
        let mut s = mat::zeros(dim_h, dim_h);
        for r in &self.r_ops {
            s += r * r.adjoint();
        }
        mat::diff_norm(&s, &mat::eye(dim_h))
    }
}
