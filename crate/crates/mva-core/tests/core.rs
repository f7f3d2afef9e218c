use mva_core::algebra::{self, AlgebraPresentation, MultiMatrixAlgebra};
use mva_core::mat::{self, antilinear, CMat, CVec, C};
use mva_core::weight::{self, Weight};
use mva_core::Gns;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn diag(vals: &[f64]) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(vals.len(), vals.iter().map(|&x| c(x, 0.0))))
}

#[test]
fn commutant_of_full_m2_is_scalars() {
    let m2 = AlgebraPresentation::canonical(MultiMatrixAlgebra::new(vec![2]));
    let comm = algebra::commutant(&m2, 0).unwrap();
    assert_eq!(comm.alg.block_dims, vec![1]);
}

#[test]
fn commutant_of_scalars_on_c2_is_full_m2() {
    let images = vec![mat::eye(2)];
    let scal = AlgebraPresentation::new(MultiMatrixAlgebra::scalar(), images).unwrap();
    let comm = algebra::commutant(&scal, 0).unwrap();
    assert_eq!(comm.alg.block_dims, vec![2]);
    assert_eq!(comm.alg.dim_vs(), 4);
}

#[test]
fn commutant_of_diagonal_c2_is_diagonal_c2() {
    // oracle: solve XA = AX over a basis by linear least squares -> dim 2, diagonal
    let alg = MultiMatrixAlgebra::new(vec![1, 1]);
    let pres = AlgebraPresentation::canonical(alg);
    let comm = algebra::commutant(&pres, 3).unwrap();
    assert_eq!(comm.alg.block_dims, vec![1, 1]);
    for im in &comm.images {
        assert!(im[(0, 1)].norm() < 1e-10 && im[(1, 0)].norm() < 1e-10);
    }
}

#[test]
fn double_commutant_spans_original() {
    // C ⊕ M_2 conjugated by a fixed unitary, doubled up to multiplicity two
    let alg = MultiMatrixAlgebra::new(vec![1, 2]);
    let base = AlgebraPresentation::canonical(alg.clone());
    let units: Vec<CMat> = base.images.iter().map(|e| e.kronecker(&mat::eye(2))).collect();
    let pres = AlgebraPresentation::new(alg, units).unwrap();
    let comm = algebra::commutant(&pres, 1).unwrap();
    let bicomm = algebra::commutant(&comm, 2).unwrap();
    let a = algebra::orthonormalize_span(&pres.images, 1e-10);
    let b = algebra::orthonormalize_span(&[pres.images.clone(), bicomm.images.clone()].concat(), 1e-8);
    assert_eq!(a.len(), b.len());
}

#[test]
fn recover_structure_finds_blocks_in_rotated_presentation() {
    let alg = MultiMatrixAlgebra::new(vec![2, 1]);
    let pres = AlgebraPresentation::canonical(alg);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let h = mat::random_herm(3, &mut rng);
    let u = mat::func_herm(&h, |x| (mat::ci() * c(x, 0.0)).exp());
    let rotated: Vec<CMat> = pres.images.iter().map(|e| &u * e * u.adjoint()).collect();
    let rec = algebra::recover_structure(&rotated, 5).unwrap();
    let mut dims = rec.alg.block_dims.clone();
    dims.sort();
    assert_eq!(dims, vec![1, 2]);
    assert!(rec.star_hom_residual() < 1e-8);
}

#[test]
fn gns_trace_on_m2() {
    let alg = MultiMatrixAlgebra::new(vec![2]);
    let g = Gns::canonical(alg.clone(), Weight::tracial(&alg)).unwrap();
    assert_eq!(g.dim_h, 4);
    let v = g.lambda(&alg.unit(0, 0, 0));
    assert!((mat::inner(&v, &v) - c(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn gns_skew_weight_on_m2() {
    // [DERIVED] phi(e_21 e_12) = phi(e_22) = 2/3
    let alg = MultiMatrixAlgebra::new(vec![2]);
    let w = Weight::new(&alg, diag(&[1.0 / 3.0, 2.0 / 3.0])).unwrap();
    let g = Gns::canonical(alg.clone(), w).unwrap();
    let v = g.lambda(&alg.unit(0, 0, 1));
    assert!((mat::inner(&v, &v) - c(2.0 / 3.0, 0.0)).norm() < 1e-12);
}

#[test]
fn modular_data_tracial_case() {
    let alg = MultiMatrixAlgebra::new(vec![2]);
    let g = Gns::canonical(alg.clone(), Weight::tracial(&alg)).unwrap();
    assert!(mat::diff_norm(&g.delta, &mat::eye(4)) < 1e-12);
    for e in alg.units() {
        let got = antilinear::apply(&g.jm, &g.lambda(&e));
        assert!(mat::vec_diff_norm(&got, &g.lambda(&e.adjoint())) < 1e-12);
    }
}

#[test]
fn modular_flow_on_skew_weight() {
    // [DERIVED] sigma_t(e_12) = (1/2)^{it} e_12 for rho = diag(1/3, 2/3)
    let alg = MultiMatrixAlgebra::new(vec![2]);
    let w = Weight::new(&alg, diag(&[1.0 / 3.0, 2.0 / 3.0])).unwrap();
    let t = 0.7;
    let got = w.sigma(t, &alg.unit(0, 0, 1));
    let phase = (mat::ci() * c(t * (0.5f64).ln(), 0.0)).exp();
    let want = alg.unit(0, 0, 1) * phase;
    assert!(mat::diff_norm(&got, &want) < 1e-12);
    // e_11 commutes with any diagonal rho
    let g = Gns::canonical(alg.clone(), w).unwrap();
    let v = g.lambda(&alg.unit(0, 0, 0));
    assert!(mat::vec_diff_norm(&(&g.delta * &v), &v) < 1e-12);
}

#[test]
fn tomita_relations_hold() {
    let alg = MultiMatrixAlgebra::new(vec![1, 2]);
    let w = Weight::new(&alg, diag(&[0.5, 1.0, 3.0])).unwrap();
    let g = Gns::canonical(alg, w).unwrap();
    assert!(g.tomita_residual() < 1e-9);
}

#[test]
fn left_and_right_actions_commute() {
    let alg = MultiMatrixAlgebra::new(vec![2, 1]);
    let w = Weight::new(&alg, diag(&[1.0, 2.0, 0.5])).unwrap();
    let g = Gns::canonical(alg.clone(), w).unwrap();
    for x in alg.units() {
        for y in alg.units() {
            let l = g.pi_apply(&x);
            let r = g.right_rep(&y);
            assert!(mat::diff_norm(&(&l * &r), &(&r * &l)) < 1e-10);
        }
    }
}

#[test]
fn sibling_gns_shares_representation() {
    let alg = MultiMatrixAlgebra::new(vec![2]);
    let w1 = Weight::new(&alg, diag(&[1.0 / 3.0, 2.0 / 3.0])).unwrap();
    let w2 = Weight::new(&alg, diag(&[1.0, 2.0])).unwrap();
    let g1 = Gns::canonical(alg.clone(), w1).unwrap();
    let g2 = g1.sibling(w2).unwrap();
    assert!(g2.tomita_residual() < 1e-9);
    for (a, b) in g1.pi.iter().zip(g2.pi.iter()) {
        assert!(mat::diff_norm(a, b) < 1e-14);
    }
}

#[test]
fn cocycle_trivial_and_diagonal() {
    let alg = MultiMatrixAlgebra::new(vec![1, 1]);
    let phi = Weight::new(&alg, diag(&[0.3, 0.7])).unwrap();
    let u = weight::connes_cocycle(&phi, &phi, 0.9);
    assert!(mat::diff_norm(&u, &mat::eye(2)) < 1e-12);
    let psi = Weight::new(&alg, diag(&[0.5, 0.25])).unwrap();
    let t = 1.3;
    let got = weight::connes_cocycle(&phi, &psi, t);
    let want = CMat::from_diagonal(&CVec::from_vec(vec![
        (mat::ci() * c(t * (0.3f64 / 0.5).ln(), 0.0)).exp(),
        (mat::ci() * c(t * (0.7f64 / 0.25).ln(), 0.0)).exp(),
    ]));
    assert!(mat::diff_norm(&got, &want) < 1e-12);
}

/// Balanced-weight oracle: embed both densities diagonally in M ⊗ M_2 and read
/// the cocycle off the corner of the modular flow of the balanced weight.
fn balanced_oracle(phi: &Weight, psi: &Weight, t: f64) -> CMat {
    let d = phi.rho.nrows();
    let mut rho = mat::zeros(2 * d, 2 * d);
    rho.view_mut((0, 0), (d, d)).copy_from(&phi.rho);
    rho.view_mut((d, d), (d, d)).copy_from(&psi.rho);
    let mut x = mat::zeros(2 * d, 2 * d);
    x.view_mut((0, d), (d, d)).copy_from(&mat::eye(d));
    let u = mat::pow_it(&rho, t);
    let conj = &u * x * u.adjoint();
    conj.view((0, d), (d, d)).into_owned()
}

#[test]
fn cocycle_matches_balanced_weight_oracle() {
    let alg = MultiMatrixAlgebra::new(vec![3]);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..4 {
        let h1 = mat::random_herm(3, &mut rng);
        let h2 = mat::random_herm(3, &mut rng);
        let r1 = mat::func_herm(&h1, |x| c(x.exp(), 0.0));
        let r2 = mat::func_herm(&h2, |x| c(x.exp(), 0.0));
        let phi = Weight::new(&alg, r1).unwrap();
        let psi = Weight::new(&alg, r2).unwrap();
        for t in [-1.0, -0.3, 0.4, 1.0] {
            let got = weight::connes_cocycle(&phi, &psi, t);
            let want = balanced_oracle(&phi, &psi, t);
            assert!(mat::diff_norm(&got, &want) < 1e-10);
        }
    }
}

#[test]
fn cocycle_chain_rule_on_m3_weights() {
    let alg = MultiMatrixAlgebra::new(vec![3]);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..3 {
        let mk = |rng: &mut ChaCha8Rng| {
            let h = mat::random_herm(3, rng);
            Weight::new(&alg, mat::func_herm(&h, |x| c(x.exp(), 0.0))).unwrap()
        };
        let (phi, psi, chi) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
        // chain rule holds when the middle weight's flow links the two factors
        for t in [-0.8, 0.5] {
            let lhs = weight::connes_cocycle(&phi, &psi, t)
                * weight::connes_cocycle(&psi, &chi, t);
            let rhs = weight::connes_cocycle(&phi, &chi, t);
            assert!(mat::diff_norm(&lhs, &rhs) < 1e-10);
        }
        assert!(weight::cocycle_residuals(&phi, &psi, &[-1.0, -0.3, 0.3, 1.0]) < 1e-10);
    }
}

#[test]
fn log_principal_cases() {
    assert!(mat::max_abs(&mat::log_principal(&mat::eye(3), 1e-6).unwrap()) < 1e-12);
    let u = CMat::from_diagonal(&CVec::from_vec(vec![
        (mat::ci() * c(std::f64::consts::FRAC_PI_4, 0.0)).exp(),
    ]));
    let l = mat::log_principal(&u, 1e-6).unwrap();
    assert!((l[(0, 0)] - mat::ci() * c(std::f64::consts::FRAC_PI_4, 0.0)).norm() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let h = mat::random_herm(4, &mut rng);
    let p = mat::func_herm(&h, |x| c(x.exp(), 0.0));
    let lp = mat::log_principal(&p, 1e-6).unwrap();
    let back = mat::func_herm(&((&lp + lp.adjoint()).scale(0.5)), |x| c(x.exp(), 0.0));
    assert!(mat::diff_norm(&back, &p) < 1e-10);
    // branch-cut violation is reported
    let bad = CMat::from_diagonal(&CVec::from_vec(vec![c(-1.0, 1e-9)]));
    assert!(mat::log_principal(&bad, 1e-6).is_err());
}

#[test]
fn modular_flow_group_law_grid() {
    let alg = MultiMatrixAlgebra::new(vec![2, 1]);
    let w = Weight::new(&alg, diag(&[0.2, 1.1, 2.5])).unwrap();
    let grid = [-1.0, -0.3, 0.0, 0.3, 1.0];
    let x = alg.unit(0, 0, 1) + alg.unit(1, 0, 0) * c(0.3, 0.4);
    for &s in &grid {
        for &t in &grid {
            let a = w.sigma(s, &w.sigma(t, &x));
            let b = w.sigma(s + t, &x);
            assert!(mat::diff_norm(&a, &b) < 1e-10);
            let c1 = w.sigma(t, &x).adjoint();
            let c2 = w.sigma(t, &x.adjoint());
            assert!(mat::diff_norm(&c1, &c2) < 1e-10);
        }
    }
}
