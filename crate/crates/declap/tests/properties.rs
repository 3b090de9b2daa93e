//! Property-based checks of the structural invariants: index round trips,
//! d∘d = 0 before and after restriction, star positivity, Bessel-zero
//! interlacing, box-spectrum scaling, and file round trips.

use declap::boundary::{classify_cells, hodge_star, projection_matrix, restricted_coboundary};
use declap::cli::multiplicity_groups;
use declap::decompose::grid_form_context;
use declap::eigen::smallest_eigenpairs;
use declap::exact::{bessel_j, bessel_zeros, box_spectrum, ExactBc};
use declap::grid::{build_grid, Aabb, CellId, GridComplex};
use declap::sdf::{load_sdf, sample_sdf, save_sdf, save_sdf_binary, ScalarField, Shape, ShapeKind};
use declap::simplicial::clique_complex;
use declap::sparse::BoundaryCondition;

use proptest::prelude::*;

fn small_grid() -> impl Strategy<Value = GridComplex> {
    (2usize..=3, proptest::array::uniform3(2usize..6), 0.2f64..1.5).prop_map(
        |(dim, counts, l_g)| {
            let mut hi = [0.0; 3];
            for a in 0..dim {
                hi[a] = l_g * (counts[a] - 1) as f64;
            }
            build_grid(Aabb::new([0.0; 3], hi), l_g, dim).unwrap()
        },
    )
}

fn random_disk_field() -> impl Strategy<Value = ScalarField> {
    (0.4f64..1.0, -0.3f64..0.3, -0.3f64..0.3, 0.15f64..0.35).prop_map(|(r, cx, cy, l_g)| {
        let shape = Shape::new(ShapeKind::Disk { radius: r }, [cx, cy, 0.0]).unwrap();
        let grid = build_grid(Aabb::new([-1.4, -1.4, 0.0], [1.4, 1.4, 0.0]), l_g, 2).unwrap();
        sample_sdf(&shape, &grid)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cell_index_round_trip(grid in small_grid(), k_seed: usize, idx_seed: usize) {
        let k = k_seed % (grid.dim() + 1);
        let n = grid.cell_count(k);
        prop_assume!(n > 0);
        let index = idx_seed % n;
        let id = grid.cell_id(k, index);
        prop_assert_eq!(grid.cell_index(id), index);
        prop_assert_eq!(id.k, k);
    }

    #[test]
    fn full_coboundary_squares_to_zero(grid in small_grid()) {
        for k in 0..grid.dim().saturating_sub(1) {
            let d_k = grid.coboundary(k).unwrap();
            let d_k1 = grid.coboundary(k + 1).unwrap();
            prop_assert_eq!(d_k1.matmul(&d_k).norm_inf(), 0.0);
        }
    }

    #[test]
    fn restricted_coboundary_squares_to_zero(field in random_disk_field()) {
        let grid = field.grid();
        let masks: Vec<_> = (0..=2).map(|k| classify_cells(&field, k).unwrap()).collect();
        let ps: Vec<_> = masks.iter().map(projection_matrix).collect();
        let d0 = restricted_coboundary(&grid.coboundary(0).unwrap(), &ps[0], &ps[1]).unwrap();
        let d1 = restricted_coboundary(&grid.coboundary(1).unwrap(), &ps[1], &ps[2]).unwrap();
        prop_assert_eq!(d1.matmul(&d0).norm_inf(), 0.0);
    }

    #[test]
    fn tangential_chain_squares_to_zero(field in random_disk_field()) {
        if let Ok(ctx) = grid_form_context(&field, BoundaryCondition::Tangential, None) {
            prop_assert_eq!(ctx.d1.matmul(&ctx.d0).norm_inf(), 0.0);
        }
    }

    #[test]
    fn hodge_star_entries_positive_and_clamped(field in random_disk_field(), k in 0usize..=2) {
        let l_g = field.grid().spacing();
        let eps = 1e-4 * l_g;
        let star = hodge_star(&field, k, BoundaryCondition::Normal, eps).unwrap();
        let bound = l_g.powi((2 - k) as i32) / eps.powi(k as i32) + 1e-12;
        for &v in &star.diag {
            prop_assert!(v > 0.0);
            prop_assert!(v <= bound, "star entry {v} above the clamp bound {bound}");
        }
    }

    #[test]
    fn bessel_zeros_interlace(n in 0usize..5) {
        let a = bessel_zeros(n, 6);
        let b = bessel_zeros(n + 1, 6);
        for i in 0..5 {
            prop_assert!(a[i] < a[i + 1]);
            prop_assert!(a[i] < b[i] && b[i] < a[i + 1]);
        }
        for &z in &a {
            prop_assert!(bessel_j(n, z).abs() < 1e-10);
        }
    }

    #[test]
    fn box_spectrum_scaling_law(a in 0.5f64..3.0, bc_flag: bool) {
        let bc = if bc_flag { ExactBc::Dirichlet } else { ExactBc::Neumann };
        let base = box_spectrum(&[a, a], bc, 8).unwrap();
        let doubled = box_spectrum(&[2.0 * a, 2.0 * a], bc, 8).unwrap();
        for (x, y) in base.iter().zip(&doubled) {
            prop_assert!((x - 4.0 * y).abs() <= 1e-10 * x.abs().max(1.0));
        }
        for w in base.windows(2) {
            prop_assert!(w[0] <= w[1] + 1e-12);
        }
    }

    #[test]
    fn clique_boundaries_square_to_zero(
        edge_bits in proptest::collection::vec(any::<bool>(), 28),
    ) {
        // random graph on 8 vertices from the edge-presence bitmask
        let mut edges = Vec::new();
        let mut bit = 0;
        for i in 0..8usize {
            for j in i + 1..8 {
                if edge_bits[bit] {
                    edges.push((i, j));
                }
                bit += 1;
            }
        }
        let complex = clique_complex(8, &edges, 3).unwrap();
        for k in 1..3 {
            let bk = complex.boundary_matrix(k).unwrap();
            let bk1 = complex.boundary_matrix(k + 1).unwrap();
            if bk.ncols() > 0 && bk1.ncols() > 0 {
                prop_assert_eq!(bk.matmul(&bk1).norm_inf(), 0.0);
            }
        }
        // the graph Laplacian is positive semidefinite
        let l = complex.combinatorial_laplacian(0).unwrap();
        let spec = smallest_eigenpairs(&l, None, 1, 1e-8).unwrap();
        prop_assert!(spec.eigenvalues[0] > -1e-9);
    }

    #[test]
    fn sdf_files_round_trip(
        grid in small_grid(),
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..grid.cell_count(0))
            .map(|_| rng.gen_range(-10.0..10.0))
            .collect();
        let field = ScalarField::from_values(grid, values).unwrap();
        let dir = tempfile::tempdir().unwrap();
        for (name, writer) in [
            ("f.sdf", save_sdf as fn(&ScalarField, &std::path::Path) -> _),
            ("f.sdfb", save_sdf_binary),
        ] {
            let path = dir.path().join(name);
            writer(&field, &path).unwrap();
            let back = load_sdf(&path).unwrap();
            prop_assert_eq!(back.values(), field.values());
            prop_assert_eq!(back.grid().origin(), field.grid().origin());
        }
    }

    #[test]
    fn multiplicity_groups_are_monotone(mut values in proptest::collection::vec(0.0f64..100.0, 1..40)) {
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let groups = multiplicity_groups(&values);
        prop_assert_eq!(groups.len(), values.len());
        prop_assert_eq!(groups[0], 0);
        for w in groups.windows(2) {
            prop_assert!(w[1] == w[0] || w[1] == w[0] + 1);
        }
    }
}

#[test]
fn cell_id_fields_are_consistent() {
    let grid = build_grid(Aabb::new([0.0; 3], [1.0, 1.0, 1.0]), 0.5, 3).unwrap();
    for k in 0..=3 {
        for i in 0..grid.cell_count(k) {
            let id: CellId = grid.cell_id(k, i);
            assert_eq!(grid.cell_index(id), i);
        }
    }
}
