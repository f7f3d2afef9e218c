use antipode_engine::build_antipode;
use fundamental_unitary::build_w;
use hopf_bimodule::{MeasuredQuantumGroupoid, OperatorValuedWeight};
use modulus_scaling::{
    build_p, check_manageability, check_modulus_relations, check_right_weight_uniqueness,
    check_uniqueness, check_weak_regularity, extract_modulus, rebase_weight, ScaError,
};
use mva_core::algebra::MultiMatrixAlgebra;
use mva_core::mat::{self, psd_pow_cut, CMat, CVec, C};
use mva_core::weight::Weight;
use mva_core::Gns;
use proptest::prelude::*;

fn diag(vals: &[f64]) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&x| C::new(x, 0.0)),
    ))
}

fn trivial_groupoid() -> MeasuredQuantumGroupoid {
    let n = MultiMatrixAlgebra::new(vec![1]);
    let base = Gns::canonical(n.clone(), Weight::tracial(&n)).unwrap();
    let gns = base.clone();
    MeasuredQuantumGroupoid {
        base,
        gns,
        alpha: vec![mat::eye(1)],
        beta: vec![mat::eye(1)],
        gamma: vec![mat::eye(1)],
        t_left: OperatorValuedWeight::new(true, vec![mat::eye(1)]),
        t_right: OperatorValuedWeight::new(false, vec![mat::eye(1)]),
    }
}

fn cyclic_bundle(p: usize) -> MeasuredQuantumGroupoid {
    let n = MultiMatrixAlgebra::new(vec![1]);
    let base = Gns::canonical(n.clone(), Weight::tracial(&n)).unwrap();
    let m = MultiMatrixAlgebra::new(vec![1; p]);
    let h = 1.0 / p as f64;
    let phi = Weight::new(&m, diag(&vec![h; p])).unwrap();
    let gns = Gns::canonical(m.clone(), phi).unwrap();

    let mut g = MeasuredQuantumGroupoid {
        base,
        gns,
        alpha: vec![m.identity()],
        beta: vec![m.identity()],
        gamma: Vec::new(),
        t_left: OperatorValuedWeight::new(true, vec![diag(&[h]); p]),
        t_right: OperatorValuedWeight::new(false, vec![diag(&[h]); p]),
    };
    let t = g.coproduct_space().unwrap();
    g.gamma = (0..p)
        .map(|a| {
            let mut amb = mat::zeros(p * p, p * p);
            for b in 0..p {
                let c = (a + p - b) % p;
                amb += g.gns.pi_apply(&m.unit(b, 0, 0)).kronecker(&g.gns.pi_apply(&m.unit(c, 0, 0)));
            }
            t.space.compress(&amb)
        })
        .collect();
    g
}

fn pair_groupoid(mu: [f64; 2]) -> MeasuredQuantumGroupoid {
    let n = MultiMatrixAlgebra::new(vec![1, 1]);
    let base = Gns::canonical(n.clone(), Weight::new(&n, diag(&mu)).unwrap()).unwrap();
    let m = MultiMatrixAlgebra::new(vec![1, 1, 1, 1]);
    let idx = |a: usize, b: usize| 2 * a + b;
    let range = |g: usize| g / 2;
    let source = |g: usize| g % 2;

    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for u in 0..2 {
        let mut av = [0.0; 4];
        let mut bv = [0.0; 4];
        for g in 0..4 {
            if range(g) == u {
                av[g] = 1.0;
            }
            if source(g) == u {
                bv[g] = 1.0;
            }
        }
        alpha.push(diag(&av));
        beta.push(diag(&bv));
    }
    let t_left = OperatorValuedWeight::new(true, (0..4).map(|g| n.unit(range(g), 0, 0)).collect());
    let t_right =
        OperatorValuedWeight::new(false, (0..4).map(|g| n.unit(source(g), 0, 0)).collect());
    let phi_vals: Vec<f64> = (0..4).map(|g| mu[range(g)]).collect();
    let phi = Weight::new(&m, diag(&phi_vals)).unwrap();
    let gns = Gns::canonical(m.clone(), phi).unwrap();

    let mut g = MeasuredQuantumGroupoid {
        base,
        gns,
        alpha,
        beta,
        gamma: Vec::new(),
        t_left,
        t_right,
    };
    let t = g.coproduct_space().unwrap();
    g.gamma = (0..4)
        .map(|u| {
            let mut d = mat::zeros(16, 16);
            for x in 0..4 {
                for y in 0..4 {
                    if source(x) == range(y) && idx(range(x), source(y)) == u {
                        d[(4 * x + y, 4 * x + y)] = C::new(1.0, 0.0);
                    }
                }
            }
            t.space.compress(&d)
        })
        .collect();
    g
}

// two disjoint copies of the order-two group, with block weights c on the base
fn direct_sum_z2(c: [f64; 2]) -> MeasuredQuantumGroupoid {
    let n = MultiMatrixAlgebra::new(vec![1, 1]);
    let base = Gns::canonical(n.clone(), Weight::new(&n, diag(&c)).unwrap()).unwrap();
    let m = MultiMatrixAlgebra::new(vec![1, 1, 1, 1]);
    let mut alpha = Vec::new();
    for k in 0..2 {
        let mut v = [0.0; 4];
        v[2 * k] = 1.0;
        v[2 * k + 1] = 1.0;
        alpha.push(diag(&v));
    }
    let beta = alpha.clone();
    let images: Vec<CMat> = (0..4).map(|g| n.unit(g / 2, 0, 0) * C::new(0.5, 0.0)).collect();
    let t_left = OperatorValuedWeight::new(true, images.clone());
    let t_right = OperatorValuedWeight::new(false, images);
    let phi_vals: Vec<f64> = (0..4).map(|g| 0.5 * c[g / 2]).collect();
    let gns = Gns::canonical(m.clone(), Weight::new(&m, diag(&phi_vals)).unwrap()).unwrap();

    let mut g = MeasuredQuantumGroupoid {
        base,
        gns,
        alpha,
        beta,
        gamma: Vec::new(),
        t_left,
        t_right,
    };
    let t = g.coproduct_space().unwrap();
    g.gamma = (0..4)
        .map(|u| {
            let (k, a) = (u / 2, u % 2);
            let mut amb = mat::zeros(16, 16);
            for b in 0..2 {
                let x = m.unit(2 * k + b, 0, 0);
                let y = m.unit(2 * k + (a ^ b), 0, 0);
                amb += g.gns.pi_apply(&x).kronecker(&g.gns.pi_apply(&y));
            }
            t.space.compress(&amb)
        })
        .collect();
    g
}

const EPS: f64 = 1.0 / 16.0;

#[test]
fn trivial_bundle_has_unit_scaling_data() {
    let g = trivial_groupoid();
    let ap = build_antipode(&g).unwrap();
    let md = extract_modulus(&g, &ap.r, EPS).unwrap();
    assert!(mat::diff_norm(&md.delta, &mat::eye(1)) < 1e-10);
    assert!(mat::diff_norm(&md.lambda, &mat::eye(1)) < 1e-10);
    let rep = check_modulus_relations(&g, &md, &ap).unwrap();
    assert!(rep.passes(1e-10), "{}", rep);
    let mo = build_p(&g, &ap, &md).unwrap();
    assert!(mat::diff_norm(&mo.p, &mat::eye(1)) < 1e-10);
    let wr = check_weak_regularity(&g, &build_w(&g).unwrap()).unwrap();
    assert_eq!(wr.rank, 1);
    assert_eq!(wr.commutant_dim, 1);
}

#[test]
fn group_bundles_have_trivial_modulus() {
    for p in [2, 3] {
        let g = cyclic_bundle(p);
        let ap = build_antipode(&g).unwrap();
        let md = extract_modulus(&g, &ap.r, EPS).unwrap();
        assert!(mat::diff_norm(&md.delta, &mat::eye(p)) < 1e-9);
        assert!(mat::diff_norm(&md.lambda, &mat::eye(p)) < 1e-9);
        let rep = check_modulus_relations(&g, &md, &ap).unwrap();
        assert!(rep.passes(1e-8), "{}", rep);
        let mo = build_p(&g, &ap, &md).unwrap();
        assert!(mat::diff_norm(&mo.p, &mat::eye(p)) < 1e-9);
    }
}

#[test]
fn pair_groupoid_modulus_is_the_density_ratio() {
    let mu = [1.0 / 3.0, 2.0 / 3.0];
    let g = pair_groupoid(mu);
    let ap = build_antipode(&g).unwrap();
    let md = extract_modulus(&g, &ap.r, EPS).unwrap();
    // multiplication by μ(source)/μ(range) on the arrow (range, source)
    let expected: Vec<f64> = (0..4).map(|a| mu[a % 2] / mu[a / 2]).collect();
    assert!(mat::diff_norm(&md.delta, &diag(&expected)) < 1e-9);
    assert_eq!(expected[1], 2.0);
    assert!(mat::diff_norm(&md.lambda, &mat::eye(4)) < 1e-9);
    let rep = check_modulus_relations(&g, &md, &ap).unwrap();
    assert!(rep.passes(1e-8), "{}", rep);

    // the extraction is stable under halving the step
    let md2 = extract_modulus(&g, &ap.r, EPS / 2.0).unwrap();
    assert!(mat::diff_norm(&md.lambda, &md2.lambda) < 1e-8);
    assert!(mat::diff_norm(&md.delta, &md2.delta) < 1e-8);
}

#[test]
fn block_sum_has_trivial_modulus_blockwise() {
    let g = direct_sum_z2([0.4, 1.7]);
    let ap = build_antipode(&g).unwrap();
    let md = extract_modulus(&g, &ap.r, EPS).unwrap();
    assert!(mat::diff_norm(&md.delta, &mat::eye(4)) < 1e-9);
    assert!(mat::diff_norm(&md.lambda, &mat::eye(4)) < 1e-9);
    let rep = check_modulus_relations(&g, &md, &ap).unwrap();
    assert!(rep.passes(1e-8), "{}", rep);
}

#[test]
fn uniqueness_recovers_the_central_element() {
    let g = pair_groupoid([1.0 / 3.0, 2.0 / 3.0]);
    let m = g.m_alg().clone();

    let same = check_uniqueness(&g, &g.t_left).unwrap();
    assert!(mat::diff_norm(&same.h, &mat::eye(2)) < 1e-9);
    assert!(same.report.passes(1e-9), "{}", same.report);

    let h = diag(&[1.0, 2.0]);
    let bh = g.beta_of(&psd_pow_cut(&h, 0.5, 1e-14));
    let images: Vec<CMat> = m
        .units()
        .iter()
        .map(|e| g.t_left.apply(&m, &(&bh * e * &bh)))
        .collect();
    let t_prime = OperatorValuedWeight::new(true, images);
    let out = check_uniqueness(&g, &t_prime).unwrap();
    assert!(mat::diff_norm(&out.h, &h) < 1e-9);
    assert!(out.report.passes(1e-9), "{}", out.report);
}

#[test]
fn uniqueness_flags_a_perturbation_through_the_wrong_leg() {
    let g = pair_groupoid([1.0 / 3.0, 2.0 / 3.0]);
    let m = g.m_alg().clone();
    let ah = g.alpha_of(&psd_pow_cut(&diag(&[1.0, 2.0]), 0.5, 1e-14));
    let images: Vec<CMat> = m
        .units()
        .iter()
        .map(|e| g.t_left.apply(&m, &(&ah * e * &ah)))
        .collect();
    let bad = OperatorValuedWeight::new(true, images);
    let out = check_uniqueness(&g, &bad).unwrap();
    assert!(out.membership_residual > 1e-3, "residual {}", out.membership_residual);
}

#[test]
fn right_weight_is_the_reflected_left_weight() {
    for g in [pair_groupoid([0.3, 0.7]), cyclic_bundle(3)] {
        let ap = build_antipode(&g).unwrap();
        let out = check_right_weight_uniqueness(&g, &ap.r).unwrap();
        assert!(mat::diff_norm(&out.h, &mat::eye(g.n_alg().ambient_dim())) < 1e-8);
        assert!(out.report.passes(1e-8), "{}", out.report);
    }
}

#[test]
fn fundamental_unitary_is_manageable() {
    for g in [pair_groupoid([1.0 / 3.0, 2.0 / 3.0]), cyclic_bundle(3)] {
        let ap = build_antipode(&g).unwrap();
        let md = extract_modulus(&g, &ap.r, EPS).unwrap();
        let mo = build_p(&g, &ap, &md).unwrap();
        assert!(mo.implementation_residual < 1e-9);
        let w = build_w(&g).unwrap();
        let rep = check_manageability(&g, &ap, &w, &mo).unwrap();
        assert!(rep.passes(1e-8), "{}", rep);
    }
}

#[test]
fn slices_of_the_flipped_unitary_fill_the_commutant() {
    let g = pair_groupoid([1.0 / 3.0, 2.0 / 3.0]);
    let wr = check_weak_regularity(&g, &build_w(&g).unwrap()).unwrap();
    assert_eq!(wr.commutant_dim, 8);
    assert_eq!(wr.rank, 8);
    assert!(wr.membership_residual < 1e-8);
}

#[test]
fn identity_rebase_changes_nothing() {
    let g = pair_groupoid([1.0 / 3.0, 2.0 / 3.0]);
    let out = rebase_weight(&g, &mat::eye(2), &mat::eye(2)).unwrap();
    assert!(out.report.passes(1e-9), "{}", out.report);
    assert!(mat::diff_norm(&out.bundle.base.weight.rho, &g.base.weight.rho) < 1e-12);
}

#[test]
fn rebase_moves_the_bundle_coherently() {
    let g = pair_groupoid([1.0 / 3.0, 2.0 / 3.0]);
    let out = rebase_weight(&g, &diag(&[2.0, 1.0]), &mat::eye(2)).unwrap();
    assert!(out.report.passes(1e-8), "{}", out.report);
    assert!(mat::diff_norm(&out.bundle.base.weight.rho, &diag(&[2.0 / 3.0, 2.0 / 3.0])) < 1e-12);
}

#[test]
fn rebase_with_scalar_basis_keeps_the_scaling_group() {
    let g = cyclic_bundle(2);
    let out = rebase_weight(&g, &diag(&[1.5]), &mat::eye(1)).unwrap();
    assert!(out.report.passes(1e-9), "{}", out.report);
}

#[test]
fn rebase_rejects_bad_perturbations() {
    let g = pair_groupoid([1.0 / 3.0, 2.0 / 3.0]);
    match rebase_weight(&g, &diag(&[1.0, -0.5]), &mat::eye(2)) {
        Err(ScaError::NotPositive(_)) => {}
        other => panic!("expected positivity rejection, got {:?}", other.map(|_| ())),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn modulus_oracle_over_random_measures(a in 0.2f64..2.0, b in 0.2f64..2.0) {
        let g = pair_groupoid([a, b]);
        let ap = build_antipode(&g).unwrap();
        let md = extract_modulus(&g, &ap.r, EPS).unwrap();
        let mu = [a, b];
        let expected: Vec<f64> = (0..4).map(|g| mu[g % 2] / mu[g / 2]).collect();
        prop_assert!(mat::diff_norm(&md.delta, &diag(&expected)) < 1e-8);
        prop_assert!(mat::diff_norm(&md.lambda, &mat::eye(4)) < 1e-8);
    }
}
