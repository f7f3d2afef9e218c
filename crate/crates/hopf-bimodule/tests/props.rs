use hopf_bimodule::{check_all, Coinvolution, MeasuredQuantumGroupoid, OperatorValuedWeight};
use mva_core::algebra::MultiMatrixAlgebra;
use mva_core::mat::{self, CMat, CVec, C};
use mva_core::weight::Weight;
use mva_core::Gns;
use proptest::prelude::*;

fn diag(vals: &[f64]) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&x| C::new(x, 0.0)),
    ))
}

fn pair_groupoid(mu: [f64; 2]) -> (MeasuredQuantumGroupoid, Coinvolution) {
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
    let gns = Gns::canonical(m.clone(), Weight::new(&m, diag(&phi_vals)).unwrap()).unwrap();
    let mut g = MeasuredQuantumGroupoid { base, gns, alpha, beta, gamma: Vec::new(), t_left, t_right };
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
    let r = Coinvolution {
        images: (0..4).map(|g| m.unit(idx(source(g), range(g)), 0, 0)).collect(),
    };
    (g, r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pair_groupoid_bundle_holds_for_any_base_measure(w in 0.05f64..0.95) {
        let (g, r) = pair_groupoid([w, 1.0 - w]);
        let rep = check_all(&g, Some(&r)).unwrap();
        prop_assert!(rep.passes(1e-8), "{}", rep);
    }

    #[test]
    fn opposite_bundle_holds_for_any_base_measure(w in 0.05f64..0.95) {
        let (g, _) = pair_groupoid([w, 1.0 - w]);
        let rep = check_all(&g.opposite().unwrap(), None).unwrap();
        prop_assert!(rep.passes(1e-8), "{}", rep);
    }
}
