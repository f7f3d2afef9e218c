//! Timing probe for the heavy pairs bundle path.

use std::time::Instant;

use constructors::pairs_quantum_groupoid;
use hopf_bimodule::check_all;
use mva_core::algebra::MultiMatrixAlgebra;
use mva_core::mat::{CMat, CVec, C};
use mva_core::weight::Weight;

fn main() {
    let m = MultiMatrixAlgebra::new(vec![2]);
    let rho = CMat::from_diagonal(&CVec::from_iterator(
        2,
        [1.0 / 3.0, 2.0 / 3.0].iter().map(|&x| C::new(x, 0.0)),
    ));
    let nu = Weight::new(&m, rho).unwrap();

    let t0 = Instant::now();
    let g = pairs_quantum_groupoid(&m, &nu).unwrap();
    println!("construct: {:?}", t0.elapsed());

    let t1 = Instant::now();
    let rep = hopf_bimodule::check_bimodule(&g).unwrap();
    println!("check_bimodule: {:?} (passes {})", t1.elapsed(), rep.passes(1e-8));
    let t1 = Instant::now();
    let rep = hopf_bimodule::check_left_invariant(&g).unwrap();
    println!("check_left_invariant: {:?} (passes {})", t1.elapsed(), rep.passes(1e-8));
    let t1 = Instant::now();
    let rep = hopf_bimodule::check_right_invariant(&g).unwrap();
    println!("check_right_invariant: {:?} (passes {})", t1.elapsed(), rep.passes(1e-8));
    let t1 = Instant::now();
    let rep = hopf_bimodule::check_adapted(&g).unwrap();
    println!("check_adapted: {:?} (passes {})", t1.elapsed(), rep.passes(1e-8));
    let t1 = Instant::now();
    let rep = hopf_bimodule::check_adapted_dual(&g).unwrap();
    println!("check_adapted_dual: {:?} (passes {})", t1.elapsed(), rep.passes(1e-8));
    let t1 = Instant::now();
    let rep = check_all(&g, None).unwrap();
    println!("check_all: {:?} (passes {})", t1.elapsed(), rep.passes(1e-8));

    let t2 = Instant::now();
    let pmu = fundamental_unitary::build_w(&g).unwrap();
    println!("build_w: {:?} (defect {:.2e})", t2.elapsed(), pmu.isometry_defect);

    let t3 = Instant::now();
    let ap = antipode_engine::build_antipode(&g).unwrap();
    println!("antipode: {:?} (solve {:.2e})", t3.elapsed(), ap.solve_residual);

    let t4 = Instant::now();
    let md = modulus_scaling::extract_modulus(&g, &ap.r, 1.0 / 16.0).unwrap();
    println!("modulus: {:?} (cocycle {:.2e})", t4.elapsed(), md.cocycle_residual);
}
