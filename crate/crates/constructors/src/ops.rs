//! Blockwise and tensor assembly of measured quantum groupoid bundles.

use hopf_bimodule::{MeasuredQuantumGroupoid, OperatorValuedWeight};
use mva_core::algebra::{orthonormalize_span, recover_structure, MultiMatrixAlgebra};
use mva_core::mat::{self, CMat, CVec};
use mva_core::weight::Weight;
use mva_core::Gns;
use rel_tensor::class::leg_permutation;

use crate::{ConError, Result};

fn embed_block(x: &CMat, off: usize, total: usize) -> CMat {
    let mut out = mat::zeros(total, total);
    for i in 0..x.nrows() {
        for j in 0..x.ncols() {
            out[(off + i, off + j)] = x[(i, j)];
        }
    }
    out
}

/// Blockwise direct sum: algebras, weights, legs, and coproducts all act on
/// the diagonal of the concatenated structures.
pub fn direct_sum(parts: &[MeasuredQuantumGroupoid]) -> Result<MeasuredQuantumGroupoid> {
    if parts.is_empty() {
        return Err(ConError::Groupoid("direct sum of no parts".into()));
    }
    let n_dims: Vec<usize> = parts.iter().flat_map(|p| p.n_alg().block_dims.clone()).collect();
    let m_dims: Vec<usize> = parts.iter().flat_map(|p| p.m_alg().block_dims.clone()).collect();
    let n_alg = MultiMatrixAlgebra::new(n_dims);
    let m_alg = MultiMatrixAlgebra::new(m_dims);

    let mut nu_rho = mat::zeros(n_alg.ambient_dim(), n_alg.ambient_dim());
    let mut phi_rho = mat::zeros(m_alg.ambient_dim(), m_alg.ambient_dim());
    let mut n_amb_off = 0;
    let mut m_amb_off = 0;
    for p in parts {
        let nr = &p.base.weight.rho;
        let mr = &p.gns.weight.rho;
        nu_rho += embed_block(nr, n_amb_off, n_alg.ambient_dim());
        phi_rho += embed_block(mr, m_amb_off, m_alg.ambient_dim());
        n_amb_off += p.n_alg().ambient_dim();
        m_amb_off += p.m_alg().ambient_dim();
    }
    let base = Gns::canonical(n_alg.clone(), Weight::new(&n_alg, nu_rho)?)?;
    let gns = Gns::canonical(m_alg.clone(), Weight::new(&m_alg, phi_rho)?)?;

    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    let mut tl = Vec::new();
    let mut tr = Vec::new();
    let mut m_amb_off = 0;
    let mut n_amb_off = 0;
    for p in parts {
        for a in &p.alpha {
            alpha.push(embed_block(a, m_amb_off, m_alg.ambient_dim()));
        }
        for b in &p.beta {
            beta.push(embed_block(b, m_amb_off, m_alg.ambient_dim()));
        }
        for x in &p.t_left.images {
            tl.push(embed_block(x, n_amb_off, n_alg.ambient_dim()));
        }
        for x in &p.t_right.images {
            tr.push(embed_block(x, n_amb_off, n_alg.ambient_dim()));
        }
        m_amb_off += p.m_alg().ambient_dim();
        n_amb_off += p.n_alg().ambient_dim();
    }

    let mut out = MeasuredQuantumGroupoid {
        base,
        gns,
        alpha,
        beta,
        gamma: Vec::new(),
        t_left: OperatorValuedWeight::new(true, tl),
        t_right: OperatorValuedWeight::new(false, tr),
    };
    let t = out.coproduct_space()?;
    let dim = out.gns.dim_h;
    let mut gamma = Vec::new();
    let mut h_off = 0;
    for p in parts {
        let tp = p.coproduct_space()?;
        let dp = p.gns.dim_h;
        for e in p.m_alg().units() {
            let amb_p = p.gamma_ambient(&tp, &e);
            let mut amb = mat::zeros(dim * dim, dim * dim);
            for x in 0..dp {
                for y in 0..dp {
                    for x2 in 0..dp {
                        for y2 in 0..dp {
                            amb[(
                                (h_off + x) * dim + (h_off + y),
                                (h_off + x2) * dim + (h_off + y2),
                            )] = amb_p[(x * dp + y, x2 * dp + y2)];
                        }
                    }
                }
            }
            gamma.push(t.space.compress(&amb));
        }
        h_off += dp;
    }
    out.gamma = gamma;
    Ok(out)
}

/// Coordinates of each image in an independent operator family.
fn family_coords(family: &[CMat], xs: &[CMat]) -> Vec<CVec> {
    let rows = family[0].nrows() * family[0].ncols();
    let mut s = mat::zeros(rows, family.len());
    for (c, f) in family.iter().enumerate() {
        s.set_column(c, &mat::vec_of(f));
    }
    let s_pinv = mat::pinv(&s, 1e-12);
    xs.iter().map(|x| &s_pinv * mat::vec_of(x)).collect()
}

/// Componentwise tensor product of two bundles: algebras, legs, weights, and
/// coproducts all factor, with the tensor-square legs re-interleaved.
pub fn tensor_product(
    g1: &MeasuredQuantumGroupoid,
    g2: &MeasuredQuantumGroupoid,
) -> Result<MeasuredQuantumGroupoid> {
    let m1 = g1.m_alg();
    let m2 = g2.m_alg();
    let n1 = g1.n_alg();
    let n2 = g2.n_alg();
    let (d1, d2) = (g1.gns.dim_h, g2.gns.dim_h);

    let m_span: Vec<CMat> = m1
        .units()
        .iter()
        .flat_map(|u| m2.units().iter().map(|v| u.kronecker(v)).collect::<Vec<_>>())
        .collect();
    let n_span: Vec<CMat> = n1
        .units()
        .iter()
        .flat_map(|u| n2.units().iter().map(|v| u.kronecker(v)).collect::<Vec<_>>())
        .collect();
    let mpres = recover_structure(&orthonormalize_span(&m_span, 1e-10), 17)?;
    let npres = recover_structure(&orthonormalize_span(&n_span, 1e-10), 19)?;
    let cm = family_coords(&m_span, &mpres.images);
    let cn = family_coords(&n_span, &npres.images);
    let m2v = m2.dim_vs();
    let n2v = n2.dim_vs();

    let combine = |coords: &CVec, parts1: &[CMat], parts2: &[CMat], stride: usize| {
        let mut out = parts1[0].kronecker(&parts2[0]).scale(0.0);
        for (k, c) in coords.iter().enumerate() {
            if c.norm() > 1e-14 {
                out += parts1[k / stride].kronecker(&parts2[k % stride]) * *c;
            }
        }
        out
    };

    // standard realizations of both factors, tensored
    let pi_m: Vec<CMat> = cm.iter().map(|c| combine(c, &g1.gns.pi, &g2.gns.pi, m2v)).collect();
    let omega = CVec::from_fn(d1 * d2, |k, _| g1.gns.omega[k / d2] * g2.gns.omega[k % d2]);
    let phi_vals = CVec::from_fn(pi_m.len(), |i, _| mat::inner(&(&pi_m[i] * &omega), &omega));
    let gns = Gns::with_rep(
        mpres.alg.clone(),
        Weight::from_functional(&mpres.alg, &phi_vals)?,
        pi_m,
        omega,
    )?;
    let pi_n: Vec<CMat> = cn.iter().map(|c| combine(c, &g1.base.pi, &g2.base.pi, n2v)).collect();
    let omega_n = CVec::from_fn(g1.base.dim_h * g2.base.dim_h, |k, _| {
        g1.base.omega[k / g2.base.dim_h] * g2.base.omega[k % g2.base.dim_h]
    });
    let nu_vals = CVec::from_fn(pi_n.len(), |i, _| mat::inner(&(&pi_n[i] * &omega_n), &omega_n));
    let base = Gns::with_rep(
        npres.alg.clone(),
        Weight::from_functional(&npres.alg, &nu_vals)?,
        pi_n,
        omega_n,
    )?;

    let mut alpha = Vec::with_capacity(cn.len());
    let mut beta = Vec::with_capacity(cn.len());
    for c in &cn {
        let (a, ra) = mpres.pull_back(&combine(c, &g1.alpha, &g2.alpha, n2v));
        let (b, rb) = mpres.pull_back(&combine(c, &g1.beta, &g2.beta, n2v));
        if ra.max(rb) > 1e-8 {
            return Err(ConError::SpanEscape("tensor legs", ra.max(rb)));
        }
        alpha.push(a);
        beta.push(b);
    }

    let mut tl = Vec::with_capacity(cm.len());
    let mut tr = Vec::with_capacity(cm.len());
    for c in &cm {
        let (l, rl) = npres.pull_back(&combine(c, &g1.t_left.images, &g2.t_left.images, m2v));
        let (r, rr) = npres.pull_back(&combine(c, &g1.t_right.images, &g2.t_right.images, m2v));
        if rl.max(rr) > 1e-8 {
            return Err(ConError::SpanEscape("tensor weights", rl.max(rr)));
        }
        tl.push(l);
        tr.push(r);
    }

    let mut out = MeasuredQuantumGroupoid {
        base,
        gns,
        alpha,
        beta,
        gamma: Vec::new(),
        t_left: OperatorValuedWeight::new(true, tl),
        t_right: OperatorValuedWeight::new(false, tr),
    };
    let t = out.coproduct_space()?;
    let t1 = g1.coproduct_space()?;
    let t2 = g2.coproduct_space()?;
    let g1_amb: Vec<CMat> = m1.units().iter().map(|e| g1.gamma_ambient(&t1, e)).collect();
    let g2_amb: Vec<CMat> = m2.units().iter().map(|e| g2.gamma_ambient(&t2, e)).collect();
    let perm = leg_permutation(&[d1, d1, d2, d2], &[0, 2, 1, 3]);
    out.gamma = cm
        .iter()
        .map(|c| {
            let amb = combine(c, &g1_amb, &g2_amb, m2v);
            t.space.compress(&(&perm * amb * perm.adjoint()))
        })
        .collect();
    Ok(out)
}
