//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (run with `--nocapture` to see them). Tolerances are
//! pinned here; a failing criterion lists every violated clause.

use std::time::Instant;

use declap::boundary::hodge_star;
use declap::decompose::{
    decompose, discrete_curl, discrete_div, grid_form_context, star_inner, star_norm,
    transfer_one_form, DiscreteForm,
};
use declap::eigen::{dense_path, lanczos_path, smallest_eigenpairs};
use declap::exact::{ball_spectrum, bessel_zeros, box_spectrum, disk_spectrum, ExactBc};
use declap::grid::{build_grid, Aabb};
use declap::laplacian::{laplacian, LaplacianKind, LaplacianSystem};
use declap::sdf::{grid_for_shape, sample_sdf, ScalarField, Shape, ShapeKind};
use declap::simplicial::{
    clique_complex, cotangent_star_1, barycentric_vertex_star, nonuniform_square_triangulation,
    quad_torus, SimplicialComplex,
};
use declap::sparse::{BoundaryCondition, SparseOperator};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXACT_EIG_TOL: f64 = 1e-9;
const SOLVER_TOL: f64 = 1e-9;

fn finish(criterion: usize, name: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("criterion {criterion} ({name}): pass");
    } else {
        println!("criterion {criterion} ({name}): FAIL");
        for f in &failures {
            println!("  - {f}");
        }
        panic!("criterion {criterion} failed: {}", failures.join("; "));
    }
}

macro_rules! check {
    ($failures:expr, $cond:expr, $($msg:tt)+) => {
        if !$cond {
            $failures.push(format!($($msg)+));
        }
    };
}

/// The worked-example grid: [0,3]² (or [0,3]³) with the shape at its center.
fn fig_field(kind: ShapeKind) -> ScalarField {
    let grid = build_grid(Aabb::new([0.0; 3], [3.0, 3.0, 0.0]), 1.0, 2).unwrap();
    let shape = Shape::new(kind, [1.5, 1.5, 0.0]).unwrap();
    sample_sdf(&shape, &grid)
}

fn eigs(sys: &LaplacianSystem, m: usize) -> Vec<f64> {
    sys.spectrum(m, SOLVER_TOL).unwrap().eigenvalues
}

fn matrix_eigs(m: &SparseOperator, count: usize) -> Vec<f64> {
    smallest_eigenpairs(m, None, count, SOLVER_TOL)
        .unwrap()
        .eigenvalues
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_01_disk_fixture() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let field = fig_field(ShapeKind::Disk { radius: 1.0 });

    let big = laplacian(&field, 0, BoundaryCondition::Normal, LaplacianKind::Big, None).unwrap();
    let big_eigs = eigs(&big, 4);
    check!(
        failures,
        max_abs_diff(&big_eigs, &[2.0, 4.0, 4.0, 6.0]) < EXACT_EIG_TOL,
        "BIG eigenvalues {big_eigs:?} differ from {{2,4,4,6}}"
    );

    let hodge =
        laplacian(&field, 0, BoundaryCondition::Normal, LaplacianKind::Hodge, None).unwrap();
    for i in 0..hodge.size() {
        let d = hodge.stiffness.get(i, i) * hodge.scale;
        check!(
            failures,
            (d - 7.405).abs() <= 0.01,
            "Hodge diagonal entry {i} is {d:.4}, want 7.405 +- 0.01"
        );
    }
    let hodge_eigs = eigs(&hodge, 4);
    for (v, want) in hodge_eigs.iter().zip([5.41, 7.41, 7.41, 9.41]) {
        check!(
            failures,
            (v - want).abs() <= 0.01,
            "Hodge eigenvalue {v:.4} differs from {want} by more than 0.01"
        );
    }

    // the crossing-edge partial length is the reciprocal of the largest
    // edge star entry (full edges contribute exactly 1)
    let s1 = hodge_star(&field, 1, BoundaryCondition::Normal, 1e-4).unwrap();
    let l_p = 1.0 / s1.diag.iter().cloned().fold(f64::MIN, f64::max);
    check!(
        failures,
        (l_p - 0.366).abs() <= 0.005,
        "crossing-edge partial length {l_p:.4}, want 0.366 +- 0.005"
    );

    let elapsed = start.elapsed().as_secs_f64();
    check!(failures, elapsed < 1.0, "runtime {elapsed:.2}s exceeds 1 s");
    finish(1, "disk fixture", failures);
}

#[test]
fn criterion_02_square_fixture() {
    let mut failures = Vec::new();
    // the square boundary lies on grid lines, so no partial measures arise
    let field = fig_field(ShapeKind::Square { side: 3.0 });
    let big = laplacian(&field, 0, BoundaryCondition::Normal, LaplacianKind::Big, None).unwrap();
    let hodge =
        laplacian(&field, 0, BoundaryCondition::Normal, LaplacianKind::Hodge, None).unwrap();

    let n = big.size();
    let mut max_entry_diff = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let b = big.stiffness.get(i, j) * big.scale;
            let h = hodge.stiffness.get(i, j) * hodge.scale;
            max_entry_diff = max_entry_diff.max((b - h).abs());
        }
    }
    check!(
        failures,
        max_entry_diff < 1e-12,
        "Hodge and BIG matrices differ by {max_entry_diff:.3e}"
    );
    let e = eigs(&big, 4);
    check!(
        failures,
        max_abs_diff(&e, &[2.0, 4.0, 4.0, 6.0]) < EXACT_EIG_TOL,
        "eigenvalues {e:?} differ from {{2,4,4,6}}"
    );
    let reference = box_spectrum(&[3.0, 3.0], ExactBc::Dirichlet, 4).unwrap();
    let pinned = [2.1932, 5.4831, 5.4831, 8.773];
    check!(
        failures,
        max_abs_diff(&reference, &pinned) <= 5e-4,
        "box spectrum {reference:?} differs from {pinned:?} by more than 5e-4"
    );
    finish(2, "square fixture", failures);
}

#[test]
fn criterion_03_tangential_fixtures() {
    let mut failures = Vec::new();
    let big2 = fig_field(ShapeKind::Square { side: 2.0 });
    let small1 = fig_field(ShapeKind::Square { side: 1.0 });

    let sys2 = laplacian(
        &big2,
        0,
        BoundaryCondition::Tangential,
        LaplacianKind::Hodge,
        None,
    )
    .unwrap();
    let e2 = eigs(&sys2, 4);
    check!(
        failures,
        max_abs_diff(&e2, &[0.0, 2.0, 2.0, 4.0]) < EXACT_EIG_TOL,
        "2x2 tangential spectrum {e2:?} differs from {{0,2,2,4}}"
    );
    let reference = box_spectrum(&[2.0, 2.0], ExactBc::Neumann, 4).unwrap();
    let pinned = [0.0, 2.4674, 2.4674, 4.9348];
    check!(
        failures,
        max_abs_diff(&reference, &pinned) <= 5e-4,
        "Neumann box spectrum {reference:?} differs from {pinned:?}"
    );

    let sys1 = laplacian(
        &small1,
        0,
        BoundaryCondition::Tangential,
        LaplacianKind::Hodge,
        None,
    )
    .unwrap();
    let e1 = eigs(&sys1, 4);
    let doubled: Vec<f64> = e2.iter().map(|v| 2.0 * v).collect();
    check!(
        failures,
        max_abs_diff(&e1, &doubled) < 1e-6,
        "1x1 Hodge spectrum {e1:?} is not double the 2x2 spectrum {e2:?}"
    );

    // unit square split along one diagonal
    let points = vec![
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [1.0, 1.0, 0.0],
        [0.0, 1.0, 0.0],
    ];
    let tri =
        SimplicialComplex::from_simplices(Some(points), &[vec![0, 1, 2], vec![0, 2, 3]]).unwrap();
    let comb = tri.combinatorial_laplacian(0).unwrap();
    let e_comb = matrix_eigs(&comb, 4);
    check!(
        failures,
        max_abs_diff(&e_comb, &[0.0, 2.0, 4.0, 4.0]) < EXACT_EIG_TOL,
        "split-square BIG spectrum {e_comb:?} differs from {{0,2,4,4}}"
    );
    let s1 = cotangent_star_1(&tri).unwrap();
    let d0 = tri.boundary_matrix(1).unwrap().transpose();
    let lh = d0.transpose().matmul(&d0.scale_rows(&s1.diag));
    let e_cot = matrix_eigs(&lh, 4);
    check!(
        failures,
        max_abs_diff(&e_cot, &[0.0, 2.0, 2.0, 4.0]) < EXACT_EIG_TOL,
        "split-square cotangent spectrum {e_cot:?} differs from {{0,2,2,4}}"
    );
    finish(3, "tangential fixtures", failures);
}

fn disk_first_eigs(l_g: f64, kind: LaplacianKind, m: usize) -> Vec<f64> {
    let shape = Shape::centered(ShapeKind::Disk { radius: 1.0 }).unwrap();
    let grid = grid_for_shape(&shape, l_g).unwrap();
    let field = sample_sdf(&shape, &grid);
    let sys = laplacian(&field, 0, BoundaryCondition::Normal, kind, None).unwrap();
    eigs(&sys, m)
}

#[test]
fn criterion_04_disk_convergence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let exact = disk_spectrum(1.0, ExactBc::Dirichlet, 10).unwrap();
    let h05 = disk_first_eigs(0.05, LaplacianKind::Hodge, 10);
    let h10 = disk_first_eigs(0.1, LaplacianKind::Hodge, 10);
    let b05 = disk_first_eigs(0.05, LaplacianKind::Big, 1);

    for (i, (v, ex)) in h05.iter().zip(&exact).enumerate() {
        let rel = (v - ex).abs() / ex;
        check!(
            failures,
            rel < 0.03,
            "Hodge l_g=0.05 eigenvalue {i} off by {:.2}% (> 3%)",
            100.0 * rel
        );
    }
    let e_h05 = (h05[0] - exact[0]).abs() / exact[0];
    let e_h10 = (h10[0] - exact[0]).abs() / exact[0];
    let e_b05 = (b05[0] - exact[0]).abs() / exact[0];
    check!(
        failures,
        e_h05 < e_h10,
        "first-eigenvalue error did not shrink: {e_h05:.4e} at 0.05 vs {e_h10:.4e} at 0.1"
    );
    check!(
        failures,
        e_h10 <= 1.1 * e_b05,
        "Hodge(0.1) error {e_h10:.4e} exceeds 1.1x BIG(0.05) error {e_b05:.4e}"
    );
    let elapsed = start.elapsed().as_secs_f64();
    check!(failures, elapsed < 30.0, "runtime {elapsed:.1}s exceeds 30 s");
    finish(4, "disk convergence", failures);
}

#[test]
fn criterion_05_cube_convergence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let shape = Shape::centered(ShapeKind::Cube { side: 1.0 }).unwrap();
    let exact = box_spectrum(&[1.0, 1.0, 1.0], ExactBc::Dirichlet, 5).unwrap();
    let mut solved = Vec::new();
    for l_g in [0.06, 0.04] {
        let grid = grid_for_shape(&shape, l_g).unwrap();
        let field = sample_sdf(&shape, &grid);
        let sys =
            laplacian(&field, 0, BoundaryCondition::Normal, LaplacianKind::Hodge, None).unwrap();
        solved.push(eigs(&sys, 5));
    }
    let pi2 = std::f64::consts::PI.powi(2);
    let rel0 = (solved[1][0] - 3.0 * pi2).abs() / (3.0 * pi2);
    check!(
        failures,
        rel0 < 0.02,
        "first eigenvalue at l_g=0.04 off by {:.2}% (> 2%)",
        100.0 * rel0
    );
    for i in 0..5 {
        let coarse = (solved[0][i] - exact[i]).abs() / exact[i];
        let fine = (solved[1][i] - exact[i]).abs() / exact[i];
        check!(
            failures,
            fine < coarse,
            "eigenvalue {i} error grew from {coarse:.4e} (0.06) to {fine:.4e} (0.04)"
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    check!(failures, elapsed < 600.0, "runtime {elapsed:.1}s exceeds 10 min");
    finish(5, "cube convergence", failures);
}

fn grid_kernel(kind: ShapeKind, l_g: f64, k: usize) -> usize {
    let shape = Shape::centered(kind).unwrap();
    let grid = grid_for_shape(&shape, l_g).unwrap();
    let field = sample_sdf(&shape, &grid);
    let sys = laplacian(&field, k, BoundaryCondition::Normal, LaplacianKind::Big, None).unwrap();
    let spec = sys.spectrum(4.min(sys.size()), SOLVER_TOL).unwrap();
    assert!(!spec.kernel_indeterminate, "ambiguous kernel for k={k}");
    spec.kernel_dim
}

#[test]
fn criterion_06_kernels_and_betti() {
    let mut failures = Vec::new();
    let ball = grid_kernel(ShapeKind::Ball { radius: 1.0 }, 0.06, 0);
    check!(failures, ball == 0, "ball L_0n kernel is {ball}, want 0");
    let torus = grid_kernel(
        ShapeKind::Torus {
            major: 1.0,
            minor: 0.4,
        },
        0.06,
        3,
    );
    check!(failures, torus == 1, "torus L_3n kernel is {torus}, want 1");
    let shell = grid_kernel(
        ShapeKind::Shell {
            outer: 1.0,
            inner: 0.5,
        },
        0.06,
        1,
    );
    check!(failures, shell == 1, "shell L_1n kernel is {shell}, want 1");

    let mesh = quad_torus(50, 40).unwrap();
    let (nv, _, nf) = mesh.counts();
    check!(failures, nf == 2000, "quad torus has {nf} faces, want 2000");
    let (b0, b1, b2) = mesh.betti_numbers().unwrap();
    check!(
        failures,
        (b0, b1, b2) == (1, 2, 1),
        "cell-complex Betti numbers ({b0},{b1},{b2}), want (1,2,1)"
    );
    let clique = clique_complex(nv, mesh.edges(), 2).unwrap();
    let cb = clique.betti_numbers(2).unwrap();
    check!(
        failures,
        cb == vec![1, 1999, 0],
        "clique-complex Betti numbers {cb:?}, want [1, 1999, 0]"
    );
    finish(6, "kernels and Betti numbers", failures);
}

#[test]
fn criterion_07_combinatorial_vs_cotangent() {
    let mut failures = Vec::new();
    let tri = nonuniform_square_triangulation(1.0, 16, 11).unwrap();
    let exact = box_spectrum(&[1.0, 1.0], ExactBc::Neumann, 10).unwrap();

    let comb = tri.combinatorial_laplacian(0).unwrap();
    let comb_spec = matrix_eigs(&comb, 10);

    let s1 = cotangent_star_1(&tri).unwrap();
    let mass = barycentric_vertex_star(&tri).unwrap();
    let d0 = tri.boundary_matrix(1).unwrap().transpose();
    let stiff = d0.transpose().matmul(&d0.scale_rows(&s1.diag));
    let cot_spec = smallest_eigenpairs(&stiff, Some(&mass.diag), 10, 1e-7)
        .unwrap()
        .eigenvalues;

    // normalize both spectra to the first nonzero exact eigenvalue so only
    // the spectral shape is compared, then average the relative deviation
    // of eigenvalues 2-10
    let deviation = |spec: &[f64]| -> f64 {
        let factor = exact[1] / spec[1];
        (2..10)
            .map(|i| (spec[i] * factor - exact[i]).abs() / exact[i])
            .sum::<f64>()
            / 8.0
    };
    let dev_comb = deviation(&comb_spec);
    let dev_cot = deviation(&cot_spec);
    check!(
        failures,
        dev_comb >= 2.0 * dev_cot,
        "combinatorial deviation {dev_comb:.4} is not >= 2x cotangent deviation {dev_cot:.4}"
    );
    finish(7, "combinatorial-vs-cotangent divergence", failures);
}

/// Annulus SDF sampled on a shiftable grid, used for a domain with a
/// nontrivial harmonic 1-form space.
fn annulus_field(l_g: f64, shift: f64) -> ScalarField {
    let grid = build_grid(
        Aabb::new(
            [-1.3 + shift, -1.3 + shift, 0.0],
            [1.3 + shift, 1.3 + shift, 0.0],
        ),
        l_g,
        2,
    )
    .unwrap();
    let nv = grid.vertex_counts();
    let values: Vec<f64> = (0..grid.cell_count(0))
        .map(|i| {
            let p = grid.vertex_position([i % nv[0], i / nv[0], 0]);
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            (r - 1.0).max(0.45 - r)
        })
        .collect();
    ScalarField::from_values(grid, values).unwrap()
}

#[test]
fn criterion_08_decomposition() {
    let mut failures = Vec::new();

    // true-star decomposition on an annulus: reconstruction, orthogonality,
    // and exactness of the curl-free part
    let field = annulus_field(0.13, 0.0);
    let ctx = grid_form_context(&field, BoundaryCondition::Normal, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let omega = DiscreteForm::new(
        1,
        (0..ctx.d0.nrows()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
    );
    let dec = decompose(&ctx, &omega).unwrap();
    let norm = star_norm(&ctx.s1, &omega.values).max(1e-300);
    let recon: f64 = omega
        .values
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            (w - dec.exact.values[i] - dec.coexact.values[i] - dec.harmonic.values[i]).powi(2)
        })
        .sum::<f64>()
        .sqrt()
        / norm;
    check!(
        failures,
        recon < 1e-10,
        "reconstruction residual {recon:.3e} exceeds 1e-10"
    );
    let parts = [
        ("exact", &dec.exact.values),
        ("coexact", &dec.coexact.values),
        ("harmonic", &dec.harmonic.values),
    ];
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let (na, a) = parts[i];
            let (nb, b) = parts[j];
            let sa = star_norm(&ctx.s1, a);
            let sb = star_norm(&ctx.s1, b);
            if sa > 1e-12 * norm && sb > 1e-12 * norm {
                let cosine = star_inner(&ctx.s1, a, b).abs() / (sa * sb);
                check!(
                    failures,
                    cosine < 1e-8,
                    "{na}/{nb} S-orthogonality {cosine:.3e} exceeds 1e-8"
                );
            }
        }
    }
    let exact_norm = star_norm(&ctx.s1, &dec.exact.values).max(1e-300);
    let curl_of_exact = discrete_curl(&ctx, &dec.exact).unwrap();
    let curl_frac = star_norm(&ctx.s2, &curl_of_exact.values) / exact_norm;
    check!(
        failures,
        curl_frac < 1e-8,
        "curl of the exact component is {curl_frac:.3e} of its norm"
    );

    // identity-star pipeline on a solid torus: a combinatorially harmonic
    // tangential 1-form built on a coarse grid and resampled onto a finer
    // one is neither curl- nor divergence-free under the true stars
    let shape = Shape::centered(ShapeKind::Torus {
        major: 1.0,
        minor: 0.4,
    })
    .unwrap();
    let coarse_field = sample_sdf(&shape, &grid_for_shape(&shape, 0.15).unwrap());
    let fine_field = sample_sdf(&shape, &grid_for_shape(&shape, 0.1).unwrap());
    let cctx = grid_form_context(&coarse_field, BoundaryCondition::Tangential, None)
        .unwrap()
        .with_identity_stars();
    let l_id = cctx
        .d1
        .transpose()
        .matmul(&cctx.d1)
        .add(&cctx.d0.matmul(&cctx.d0.transpose()));
    let spec = smallest_eigenpairs(&l_id, None, 3, SOLVER_TOL).unwrap();
    check!(
        failures,
        spec.kernel_dim == 1,
        "solid-torus identity-star harmonic space has dimension {}, want 1",
        spec.kernel_dim
    );
    let h = transfer_one_form(
        &coarse_field,
        &fine_field,
        BoundaryCondition::Tangential,
        &spec.eigenvectors[0],
    )
    .unwrap();
    // the resampled combinatorially-harmonic field, measured under the
    // true stars of the finer complex
    let fctx = grid_form_context(&fine_field, BoundaryCondition::Tangential, None).unwrap();
    let hf = DiscreteForm::new(1, h);
    let h_norm = star_norm(&fctx.s1, &hf.values).max(1e-300);
    let curl = discrete_curl(&fctx, &hf).unwrap();
    let div = discrete_div(&fctx, &hf).unwrap();
    let curl_frac = star_norm(&fctx.s2, &curl.values) / h_norm;
    let div_frac = star_norm(&fctx.s0, &div.values) / h_norm;
    check!(
        failures,
        curl_frac > 1e-3,
        "identity-star harmonic curl fraction {curl_frac:.3e} not > 1e-3"
    );
    check!(
        failures,
        div_frac > 1e-3,
        "identity-star harmonic divergence fraction {div_frac:.3e} not > 1e-3"
    );
    finish(8, "Hodge decomposition", failures);
}

#[test]
fn criterion_09_eigensolver_cross_validation() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e11);
    for case in 0..20 {
        let n = rng.gen_range(500..=2000);
        let mut t = vec![(0usize, 0usize, 0.0f64); 0];
        for i in 0..n {
            t.push((i, i, 0.1));
            for _ in 0..3 {
                let j = rng.gen_range(0..n);
                if j != i {
                    let v = rng.gen_range(0.1..1.0);
                    t.push((i, j, -v));
                    t.push((j, i, -v));
                    t.push((i, i, v));
                    t.push((j, j, v));
                }
            }
        }
        let l = SparseOperator::from_triplets(n, n, t);
        let mass: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
        let dense = dense_path(&l, Some(&mass), 5).unwrap();
        let lanczos = lanczos_path(&l, Some(&mass), 5, SOLVER_TOL).unwrap();
        for (i, (a, b)) in lanczos.eigenvalues.iter().zip(&dense.eigenvalues).enumerate() {
            check!(
                failures,
                (a - b).abs() <= 1e-8 * b.abs().max(1.0),
                "case {case} (n={n}) eigenvalue {i}: iterative {a} vs dense {b}"
            );
        }
        for (path, res) in [("dense", &dense.residuals), ("lanczos", &lanczos.residuals)] {
            let worst = res.iter().cloned().fold(0.0, f64::max);
            check!(
                failures,
                worst <= SOLVER_TOL,
                "case {case} (n={n}) {path} residual {worst:.3e} exceeds {SOLVER_TOL:.1e}"
            );
        }
    }
    finish(9, "eigensolver cross-validation", failures);
}

#[test]
fn criterion_10_exact_spectra_self_checks() {
    let mut failures = Vec::new();
    let j0 = bessel_zeros(0, 1)[0];
    check!(
        failures,
        (j0 - 2.404826).abs() <= 1e-6,
        "first Bessel J_0 zero {j0:.8}, want 2.404826 +- 1e-6"
    );
    let shell = declap::exact::shell_spectrum(1.0, 0.5, ExactBc::Dirichlet, 1).unwrap();
    let want = 4.0 * std::f64::consts::PI.powi(2);
    check!(
        failures,
        (shell[0] - want).abs() <= 1e-6,
        "shell first Dirichlet eigenvalue {:.8}, want 4pi^2 = {want:.8}",
        shell[0]
    );

    // ball Neumann reference against a volumetric grid solve: L_3n with
    // Hodge stars is the discrete Neumann scalar Laplacian on cell centers
    let exact = ball_spectrum(1.0, ExactBc::Neumann, 2).unwrap();
    let shape = Shape::centered(ShapeKind::Ball { radius: 1.0 }).unwrap();
    let field = sample_sdf(&shape, &grid_for_shape(&shape, 0.03).unwrap());
    let sys = laplacian(&field, 3, BoundaryCondition::Normal, LaplacianKind::Hodge, None).unwrap();
    let grid_eigs = eigs(&sys, 2);
    let rel = (grid_eigs[1] - exact[1]).abs() / exact[1];
    check!(
        failures,
        rel < 0.03,
        "first nonzero Neumann eigenvalue off by {:.2}% (> 3%): grid {} vs exact {}",
        100.0 * rel,
        grid_eigs[1],
        exact[1]
    );
    finish(10, "exact-spectra self-checks", failures);
}
