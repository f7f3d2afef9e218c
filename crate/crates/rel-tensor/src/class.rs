//! Class/representative calculus for (possibly nested) Gram quotients.
//!
//! A `ClassSpace` maps between a flattened ambient tensor product and a
//! compressed quotient: `e` sends an ambient representative to its class
//! coordinates, `p` picks a representative, and `v` is the isometry onto the
//! Gram support.  Nesting composes these maps so that multi-leg spaces stay
//! cheap (no Gram on the full ambient product is ever formed).

use mva_core::mat::{self, CMat, CVec};

#[derive(Debug, Clone)]
pub struct ClassSpace {
    pub dim: usize,
    pub ambient: usize,
    /// class coordinates of an ambient vector (dim × ambient)
    pub e: CMat,
    /// canonical representative of a class (ambient × dim)
    pub p: CMat,
    /// isometry onto the Gram support (ambient × dim)
    pub v: CMat,
}

impl ClassSpace {
    /// Plain tensor product (no quotient).
    pub fn full(ambient: usize) -> Self {
        ClassSpace {
            dim: ambient,
            ambient,
            e: mat::eye(ambient),
            p: mat::eye(ambient),
            v: mat::eye(ambient),
        }
    }

    pub fn class(&self, ambient_vec: &CVec) -> CVec {
        &self.e * ambient_vec
    }

    pub fn representative(&self, class_vec: &CVec) -> CVec {
        &self.p * class_vec
    }

    /// Compress an ambient operator that preserves classes.
    pub fn compress(&self, ambient_op: &CMat) -> CMat {
        self.v.adjoint() * ambient_op * &self.v
    }

    /// Nest: this quotient sits on the left legs of an outer quotient whose
    /// left factor is our compressed space and whose right factor has
    /// dimension `right_dim`.
    pub fn nest_left(&self, outer: &ClassSpace, right_dim: usize) -> ClassSpace {
        let id = mat::eye(right_dim);
        ClassSpace {
            dim: outer.dim,
            ambient: self.ambient * right_dim,
            e: &outer.e * self.e.kronecker(&id),
            p: self.p.kronecker(&id) * &outer.p,
            v: self.v.kronecker(&id) * &outer.v,
        }
    }

    /// Nest on the right legs: outer's right factor is our compressed space,
    /// outer's left factor has dimension `left_dim`.
    pub fn nest_right(&self, outer: &ClassSpace, left_dim: usize) -> ClassSpace {
        let id = mat::eye(left_dim);
        ClassSpace {
            dim: outer.dim,
            ambient: left_dim * self.ambient,
            e: &outer.e * id.kronecker(&self.e),
            p: id.kronecker(&self.p) * &outer.p,
            v: id.kronecker(&self.v) * &outer.v,
        }
    }
}

/// Transport an ambient-level map (class-preserving by assumption) between two
/// class spaces: dst.e ∘ amb ∘ src.p.
pub fn transport(src: &ClassSpace, dst: &ClassSpace, amb: &CMat) -> CMat {
    &dst.e * amb * &src.p
}

/// Permutation matrix reordering tensor legs (row-major flattening).
/// `perm[j]` names the source leg placed at target position j.
pub fn leg_permutation(dims: &[usize], perm: &[usize]) -> CMat {
    let total: usize = dims.iter().product();
    let n = dims.len();
    let mut m = mat::zeros(total, total);
    let tdims: Vec<usize> = perm.iter().map(|&s| dims[s]).collect();
    for src in 0..total {
        // unflatten the source index
        let mut rem = src;
        let mut idx = vec![0usize; n];
        for k in (0..n).rev() {
            idx[k] = rem % dims[k];
            rem /= dims[k];
        }
        let mut dst = 0usize;
        for j in 0..n {
            dst = dst * tdims[j] + idx[perm[j]];
        }
        m[(dst, src)] = mat::cone();
    }
    m
}

/// Swap of two tensor factors.
pub fn swap_matrix(d1: usize, d2: usize) -> CMat {
    leg_permutation(&[d1, d2], &[1, 0])
}
