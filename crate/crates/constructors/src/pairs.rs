//! The pairs bundle of a multi-matrix algebra: the commutant tensor the
//! algebra on the doubled standard space, with the two legs carrying the
//! commutant twist and the algebra itself, and both invariant weights given by
//! slicing with the base weight.

use hopf_bimodule::{MeasuredQuantumGroupoid, OperatorValuedWeight};
use mva_core::algebra::{orthonormalize_span, recover_structure, MultiMatrixAlgebra, SpanMap};
use mva_core::mat::{self, antilinear, CMat, CVec};
use mva_core::weight::Weight;
use mva_core::Gns;

use crate::{ConError, Result};

/// The bundle on base (M, nu) realized on H_nu ⊗ H_nu: the algebra generated
/// by j(M) on the first leg and M on the second, with alpha the second-leg
/// inclusion and beta the first-leg commutant twist j(x) = J x* J.
pub fn pairs_quantum_groupoid(m: &MultiMatrixAlgebra, nu: &Weight) -> Result<MeasuredQuantumGroupoid> {
    let h = Gns::canonical(m.clone(), nu.clone())?;
    let d = h.dim_h;
    let units = m.units();
    let pis: Vec<CMat> = units.iter().map(|e| h.pi_apply(e)).collect();
    let jots: Vec<CMat> = units
        .iter()
        .map(|e| antilinear::sandwich(&h.jm, &h.pi_apply(&e.adjoint())))
        .collect();

    let nv = units.len();
    let eye = mat::eye(d);
    let mut span = Vec::with_capacity(nv * nv);
    let mut tl_targets = Vec::with_capacity(nv * nv);
    let mut tr_targets = Vec::with_capacity(nv * nv);
    let mut gamma_targets = Vec::with_capacity(nv * nv);
    for u in 0..nv {
        for v in 0..nv {
            span.push(jots[u].kronecker(&pis[v]));
            tl_targets.push(&units[v] * nu.value(&units[u]));
            tr_targets.push(&units[u] * nu.value(&units[v]));
            gamma_targets.push(eye.kronecker(&pis[v]).kronecker(&jots[u].kronecker(&eye)));
        }
    }

    let pres = recover_structure(&orthonormalize_span(&span, 1e-10), 11)?;
    let omega2 = CVec::from_fn(d * d, |k, _| h.omega[k / d] * h.omega[k % d]);
    let vals = CVec::from_fn(pres.images.len(), |i, _| {
        mat::inner(&(&pres.images[i] * &omega2), &omega2)
    });
    let phi = Weight::from_functional(&pres.alg, &vals)?;
    let gns = Gns::with_rep(pres.alg.clone(), phi, pres.images.clone(), omega2)?;

    let mut alpha = Vec::with_capacity(nv);
    let mut beta = Vec::with_capacity(nv);
    for i in 0..nv {
        let (a, ra) = pres.pull_back(&eye.kronecker(&pis[i]));
        let (b, rb) = pres.pull_back(&jots[i].kronecker(&eye));
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
