//! The quantum-space bundle of a multi-matrix algebra with nontrivial center:
//! the commutant and the algebra glued over the center on the relative tensor
//! square of the standard space, with the invariant weights sliced through the
//! center-valued expectation calibrated by a trace on the center.

use hopf_bimodule::{MeasuredQuantumGroupoid, OperatorValuedWeight};
use mva_core::algebra::{orthonormalize_span, recover_structure, MultiMatrixAlgebra, SpanMap};
use mva_core::mat::{self, antilinear, CMat, CVec, C};
use mva_core::weight::Weight;
use mva_core::Gns;
use rel_tensor::{BasisRep, LinkKind, RelativeTensorSpace};

use crate::{ConError, Result};

/// The center-valued expectation determined by nu = tr ∘ T, as an ambient
/// element per matrix unit of M.
fn center_expectation(m: &MultiMatrixAlgebra, nu: &Weight, tr: &[f64]) -> Vec<CMat> {
    let kb = m.block_dims.len();
    let z_ops: Vec<CMat> = (0..kb)
        .map(|k| {
            let mut z = mat::zeros(m.ambient_dim(), m.ambient_dim());
            for i in 0..m.block_dims[k] {
                z += m.unit(k, i, i);
            }
            z
        })
        .collect();
    m.units()
        .iter()
        .map(|e| {
            let mut out = mat::zeros(m.ambient_dim(), m.ambient_dim());
            for k in 0..kb {
                out += &z_ops[k] * (nu.value(&(&z_ops[k] * e)) / C::new(tr[k], 0.0));
            }
            out
        })
        .collect()
}

/// The bundle on base (M, nu) over the relative tensor square of H_nu across
/// the center of M, with the trace weights `tr` on the center blocks.
pub fn quantum_space_quantum_groupoid(
    m: &MultiMatrixAlgebra,
    nu: &Weight,
    tr: &[f64],
) -> Result<MeasuredQuantumGroupoid> {
    let h = Gns::canonical(m.clone(), nu.clone())?;
    let kb = m.block_dims.len();
    assert_eq!(tr.len(), kb);
    let units = m.units();
    let nv = units.len();
    let pis: Vec<CMat> = units.iter().map(|e| h.pi_apply(e)).collect();
    let jots: Vec<CMat> = units
        .iter()
        .map(|e| antilinear::sandwich(&h.jm, &h.pi_apply(&e.adjoint())))
        .collect();

    // the center acting on H, and the relative tensor square over it
    let z_alg = MultiMatrixAlgebra::new(vec![1; kb]);
    let z_rho = CMat::from_diagonal(&CVec::from_iterator(kb, tr.iter().map(|&x| C::new(x, 0.0))));
    let z_w = Weight::new(&z_alg, z_rho)?;
    let z_gns = Gns::canonical(z_alg, z_w)?;
    let z_ops: Vec<CMat> = (0..kb)
        .map(|k| {
            let mut z = mat::zeros(m.ambient_dim(), m.ambient_dim());
            for i in 0..m.block_dims[k] {
                z += m.unit(k, i, i);
            }
            h.pi_apply(&z)
        })
        .collect();
    let left = BasisRep::new(z_gns.clone(), z_ops.clone(), true)?;
    let right = BasisRep::new(z_gns, z_ops, false)?;
    let tz = RelativeTensorSpace::new(left, right, LinkKind::OverPsi)?;

    let t_exp = center_expectation(m, nu, tr);
    let eye = mat::eye(h.dim_h);
    let mut span = Vec::with_capacity(nv * nv);
    let mut tl_targets = Vec::with_capacity(nv * nv);
    let mut tr_targets = Vec::with_capacity(nv * nv);
    let mut gamma_targets = Vec::with_capacity(nv * nv);
    let a_legs: Vec<CMat> = (0..nv).map(|v| tz.op_tensor_unchecked(&eye, &pis[v])).collect();
    let b_legs: Vec<CMat> = (0..nv).map(|u| tz.op_tensor_unchecked(&jots[u], &eye)).collect();
    for u in 0..nv {
        for v in 0..nv {
            span.push(tz.op_tensor(&jots[u], &pis[v])?);
            tl_targets.push(&units[v] * &t_exp[u]);
            tr_targets.push(&units[u] * &t_exp[v]);
            gamma_targets.push(a_legs[v].kronecker(&b_legs[u]));
        }
    }

    let pres = recover_structure(&orthonormalize_span(&span, 1e-10), 13)?;
    let omega_amb = CVec::from_fn(h.dim_h * h.dim_h, |k, _| {
        h.omega[k / h.dim_h] * h.omega[k % h.dim_h]
    });
    let omega = tz.space.class(&omega_amb);
    let vals = CVec::from_fn(pres.images.len(), |i, _| {
        mat::inner(&(&pres.images[i] * &omega), &omega)
    });
    let phi = Weight::from_functional(&pres.alg, &vals)?;
    let gns = Gns::with_rep(pres.alg.clone(), phi, pres.images.clone(), omega)?;

    let mut alpha = Vec::with_capacity(nv);
    let mut beta = Vec::with_capacity(nv);
    for i in 0..nv {
        let (a, ra) = pres.pull_back(&a_legs[i]);
        let (b, rb) = pres.pull_back(&b_legs[i]);
        if ra.max(rb) > 1e-8 {
            return Err(ConError::SpanEscape("leg embeddings", ra.max(rb)));
        }
        alpha.push(a);
        beta.push(b);
    }

    let tl_map = SpanMap::new(span.clone(), tl_targets);
    let tr_map = SpanMap::new(span.clone(), tr_targets);
    let t_left = OperatorValuedWeight::new(
        true,
        pres.images.iter().map(|x| tl_map.apply(x).0).collect(),
    );
    let t_right = OperatorValuedWeight::new(
        false,
        pres.images.iter().map(|x| tr_map.apply(x).0).collect(),
    );

    let mut out = MeasuredQuantumGroupoid {
        base: h,
        gns,
        alpha,
        beta,
        gamma: Vec::new(),
        t_left,
        t_right,
    };
    let t = out.coproduct_space()?;
    let gamma_map = SpanMap::new(span, gamma_targets);
    out.gamma = pres
        .images
        .iter()
        .map(|x| t.space.compress(&gamma_map.apply(x).0))
        .collect();
    Ok(out)
}
