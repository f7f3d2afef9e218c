use fundamental_unitary::{
    build_w, build_w_prime, build_w_with_basis, check_cofixed_vector, check_commutations,
    check_coproduct_implemented, check_pentagon, check_slice_adjoint_rule, check_slice_identities,
    generation_rank, FunError,
};
use hopf_bimodule::{MeasuredQuantumGroupoid, OperatorValuedWeight};
use mva_core::algebra::MultiMatrixAlgebra;
use mva_core::mat::{self, CMat, CVec, C};
use mva_core::weight::Weight;
use mva_core::Gns;

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

/// Function algebra of the cyclic group Z/p with convolution coproduct
/// Gamma(e_a) = sum over b+c = a of e_b ⊗ e_c, Haar weight 1/p per point.
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

/// The pair groupoid on {1,2} with base measure mu, elements enumerated
/// (a,b) row-major with range a and source b.
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

#[test]
fn trivial_unitary_is_one() {
    let g = trivial_groupoid();
    let pmu = build_w(&g).unwrap();
    assert_eq!(pmu.u.nrows(), 1);
    assert!(mat::diff_norm(&pmu.u, &mat::eye(1)) < 1e-12);
    assert!(check_pentagon(&g, &pmu).unwrap() < 1e-12);
}

#[test]
fn cyclic_group_coproduct_is_implemented() {
    for p in [2, 3] {
        let g = cyclic_bundle(p);
        let pmu = build_w(&g).unwrap();
        assert!(pmu.isometry_defect < 1e-10);
        assert!(check_coproduct_implemented(&g, &pmu).unwrap() < 1e-10);
        let rep = check_commutations(&g, &pmu).unwrap();
        assert!(rep.passes(1e-10), "{}", rep);
    }
}

#[test]
fn cyclic_group_pentagon_and_generation() {
    let g = cyclic_bundle(3);
    let pmu = build_w(&g).unwrap();
    assert!(check_pentagon(&g, &pmu).unwrap() < 1e-9);
    assert_eq!(generation_rank(&pmu), 3);
}

#[test]
fn cyclic_group_cofixed_vector() {
    let g = cyclic_bundle(3);
    let pmu = build_w(&g).unwrap();
    let rep = check_cofixed_vector(&g, &pmu).unwrap().expect("Haar expectation case");
    assert!(rep.passes(1e-10), "{}", rep);
}

#[test]
fn pair_groupoid_full_suite() {
    let g = pair_groupoid([0.3, 0.7]);
    let pmu = build_w(&g).unwrap();
    assert!(pmu.isometry_defect < 1e-9);
    let rep = check_commutations(&g, &pmu).unwrap();
    assert!(rep.passes(1e-9), "{}", rep);
    assert!(check_coproduct_implemented(&g, &pmu).unwrap() < 1e-9);
    let rep = check_slice_identities(&g, &pmu).unwrap();
    assert!(rep.passes(1e-9), "{}", rep);
    assert!(check_pentagon(&g, &pmu).unwrap() < 1e-9);
    assert_eq!(generation_rank(&pmu), 4);
    // the left Haar system has total mass 2, so this is not an expectation
    assert!(check_cofixed_vector(&g, &pmu).unwrap().is_none());
}

#[test]
fn unitary_does_not_depend_on_basis_choice() {
    let g = pair_groupoid([0.4, 0.6]);
    let w1 = build_w(&g).unwrap();
    let basis = g.beta_leg().unwrap().make_basis_seeded(7).unwrap();
    let w2 = build_w_with_basis(&g, &basis).unwrap();
    assert!(mat::diff_norm(&w1.u, &w2.u) < 1e-8);
}

#[test]
fn right_unitary_slice_adjoint_rule() {
    for g in [pair_groupoid([0.3, 0.7]), cyclic_bundle(3)] {
        let pmu = build_w_prime(&g).unwrap();
        assert!(pmu.isometry_defect < 1e-9);
        assert!(check_slice_adjoint_rule(&g, &pmu).unwrap() < 1e-9);
        assert!(matches!(
            check_pentagon(&g, &pmu),
            Err(FunError::WrongVersion(_))
        ));
    }
}

#[test]
fn right_unitary_pentagon_via_opposite() {
    let g = pair_groupoid([0.3, 0.7]).opposite().unwrap();
    let pmu = build_w(&g).unwrap();
    assert!(check_pentagon(&g, &pmu).unwrap() < 1e-9);
}

#[test]
fn corrupted_coproduct_is_rejected() {
    let mut g = pair_groupoid([0.3, 0.7]);
    let d = g.gamma[0].nrows();
    g.gamma[0][(0, d - 1)] += C::new(0.05, 0.0);
    match build_w(&g) {
        Err(FunError::IsometryDefect(d)) => assert!(d > 1e-4),
        Ok(pmu) => {
            assert!(check_coproduct_implemented(&g, &pmu).unwrap() > 1e-4);
        }
        Err(e) => panic!("unexpected error {e}"),
    }
}
