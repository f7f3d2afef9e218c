use mva_core::algebra::MultiMatrixAlgebra;
use mva_core::mat::{self, CMat, CVec, C};
use mva_core::weight::{self, Weight};
use mva_core::Gns;
use proptest::prelude::*;

fn weight_from(parts: &[f64], alg: &MultiMatrixAlgebra) -> Weight {
    // strictly positive diagonal density built from bounded raw parts
    let vals: Vec<f64> = parts.iter().map(|x| 0.1 + x.abs()).collect();
    let rho = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter().map(|&x| C::new(x, 0.0)),
    ));
    Weight::new(alg, rho).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tomita_relations_for_random_weights(parts in proptest::collection::vec(0.01f64..4.0, 5)) {
        let alg = MultiMatrixAlgebra::new(vec![1, 2]);
        let mut w = weight_from(&parts[..3], &alg);
        // mix in an off-diagonal Hermitian perturbation kept positive
        let bump = (alg.unit(1, 0, 1) + alg.unit(1, 1, 0)).scale(0.2 * parts[3] / 4.0);
        w.rho += bump;
        if let Ok(w) = Weight::new(&alg, w.rho.clone()) {
            let g = Gns::canonical(alg, w).unwrap();
            prop_assert!(g.tomita_residual() < 1e-8);
        }
    }

    #[test]
    fn cocycle_curve_is_unitary_cocycle(a in proptest::collection::vec(0.05f64..3.0, 3),
                                        b in proptest::collection::vec(0.05f64..3.0, 3)) {
        let alg = MultiMatrixAlgebra::new(vec![3]);
        let phi = weight_from(&a, &alg);
        let psi = weight_from(&b, &alg);
        prop_assert!(weight::cocycle_residuals(&phi, &psi, &[-1.0, -0.5, 0.5, 1.0]) < 1e-9);
    }

    #[test]
    fn principal_log_round_trips_positive_matrices(d in proptest::collection::vec(0.05f64..5.0, 3)) {
        let p = CMat::from_diagonal(&CVec::from_iterator(3, d.iter().map(|&x| C::new(x, 0.0))));
        let l = mat::log_principal(&p, 1e-6).unwrap();
        let back = mat::func_herm(&((&l + l.adjoint()).scale(0.5)), |x| C::new(x.exp(), 0.0));
        prop_assert!(mat::diff_norm(&back, &p) < 1e-10);
    }
}
