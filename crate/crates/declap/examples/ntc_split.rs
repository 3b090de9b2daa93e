//! N/T/C split: the nonzero eigenvalues of the 1-form Laplacian decompose
//! into the normal-gradient spectrum (shared with L_0n), the
//! tangential-gradient spectrum (shared with L_0t), and a leftover curl
//! spectrum, here on a grid-aligned square where the BIG spectra are exact.

use declap::grid::{build_grid, Aabb};
use declap::laplacian::{laplacian, ntc_split, LaplacianKind, NTC_MATCH_TOL};
use declap::sdf::{sample_sdf, Shape, ShapeKind};
use declap::sparse::BoundaryCondition;

fn spectrum(k: usize, bc: BoundaryCondition, m: usize) -> Vec<f64> {
    let grid = build_grid(Aabb::new([0.0; 3], [2.0, 2.0, 0.0]), 0.25, 2).unwrap();
    let shape = Shape::new(ShapeKind::Square { side: 2.0 }, [1.0, 1.0, 0.0]).unwrap();
    let field = sample_sdf(&shape, &grid);
    let sys = laplacian(&field, k, bc, LaplacianKind::Big, None).unwrap();
    sys.spectrum(m.min(sys.size()), 1e-9).unwrap().eigenvalues
}

fn main() {
    let l0n = spectrum(0, BoundaryCondition::Normal, 6);
    let l0t = spectrum(0, BoundaryCondition::Tangential, 6);
    let l1n = spectrum(1, BoundaryCondition::Normal, 24);
    println!("L_0n: {l0n:7.3?}");
    println!("L_0t: {l0t:7.3?}");
    println!("L_1n: {l1n:7.3?}");

    let ntc = ntc_split(&l0n, &l0t, &l1n, NTC_MATCH_TOL).unwrap();
    println!("\nN (normal gradients):     {:7.3?}", ntc.n);
    println!("T (tangential gradients): {:7.3?}", ntc.t);
    println!("C (curl modes):           {:7.3?}", ntc.c);
    println!("\nEvery nonzero L_1n eigenvalue is accounted for by one of the");
    println!("two scalar spectra or the curl family.");
}
