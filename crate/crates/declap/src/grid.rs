//! Cartesian cell complexes (primal and dual) over a bounding box.
//!
//! Cells of each dimension are grouped into axis-alignment classes:
//! in 3D, edges come in x/y/z classes, faces in xy/yz/zx classes.
//! Within a class, cells are indexed row-major with x fastest; classes
//! are laid out consecutively. Edges are oriented toward the increasing
//! axis coordinate, faces and cells by the right-handed axis order, so
//! every incidence matrix is byte-reproducible.

use crate::error::Error;
use crate::sparse::SparseOperator;

/// Axis-aligned bounding box; only the first `dim` coordinates are used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Aabb {
    pub fn new(min: [f64; 3], max: [f64; 3]) -> Self {
        Aabb { min, max }
    }

    pub fn expanded(&self, margin: f64) -> Self {
        Aabb {
            min: [
                self.min[0] - margin,
                self.min[1] - margin,
                self.min[2] - margin,
            ],
            max: [
                self.max[0] + margin,
                self.max[1] + margin,
                self.max[2] + margin,
            ],
        }
    }
}

/// Identifies one cell of the complex by dimension, alignment class and
/// lattice coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CellId {
    pub k: usize,
    pub axis_class: usize,
    pub coords: [usize; 3],
}

/// Immutable Cartesian cell complex.
#[derive(Clone, Debug, PartialEq)]
pub struct GridComplex {
    dim: usize,
    origin: [f64; 3],
    l_g: f64,
    /// vertices per axis (1 for unused axes)
    nv: [usize; 3],
}

/// Hard cap on total cell counts so index arithmetic stays well inside usize.
const MAX_CELLS: usize = 1 << 33;

/// Builds the grid covering `bbox` with spacing `l_g`; a gridpoint sits at
/// the bbox minimum and counts come from ceiling division.
pub fn build_grid(bbox: Aabb, l_g: f64, dim: usize) -> Result<GridComplex, Error> {
    if !(l_g > 0.0) || !l_g.is_finite() {
        return Err(Error::InvalidInput(format!("grid length must be positive, got {l_g}")));
    }
    if !(dim == 2 || dim == 3) {
        return Err(Error::InvalidInput(format!("dim must be 2 or 3, got {dim}")));
    }
    let mut nv = [1usize; 3];
    let mut total: u128 = 1;
    for a in 0..dim {
        let span = bbox.max[a] - bbox.min[a];
        if !(span > 0.0) {
            return Err(Error::InvalidInput("degenerate bounding box".into()));
        }
        // ceiling division with a tolerance so exact multiples of l_g do not
        // gain a spurious extra layer from roundoff
        let cells = ((span / l_g) - 1e-9).ceil().max(1.0);
        if cells > 1e12 {
            return Err(Error::InvalidInput("grid too large for index type".into()));
        }
        nv[a] = cells as usize + 1;
        total *= nv[a] as u128;
    }
    if total > MAX_CELLS as u128 {
        return Err(Error::InvalidInput(format!(
            "grid would have {total} vertices, exceeding the size cap"
        )));
    }
    Ok(GridComplex {
        dim,
        origin: bbox.min,
        l_g,
        nv,
    })
}

impl GridComplex {
    /// Reassembles a grid from stored header data (see the SDF file format).
    pub fn from_parts(
        dim: usize,
        origin: [f64; 3],
        l_g: f64,
        nv: [usize; 3],
    ) -> Result<GridComplex, Error> {
        if !(dim == 2 || dim == 3) {
            return Err(Error::InvalidInput(format!("dim must be 2 or 3, got {dim}")));
        }
        if !(l_g > 0.0) || !l_g.is_finite() {
            return Err(Error::InvalidInput(format!("grid length must be positive, got {l_g}")));
        }
        let mut total: u128 = 1;
        for a in 0..3 {
            let n = if a < dim { nv[a] } else { 1 };
            if a < dim && n < 1 {
                return Err(Error::InvalidInput("vertex counts must be positive".into()));
            }
            if a >= dim && nv[a] != 1 {
                return Err(Error::InvalidInput("unused axis count must be 1".into()));
            }
            total *= n as u128;
        }
        if total > MAX_CELLS as u128 {
            return Err(Error::InvalidInput("grid exceeds the size cap".into()));
        }
        Ok(GridComplex { dim, origin, l_g, nv })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spacing(&self) -> f64 {
        self.l_g
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn vertex_counts(&self) -> [usize; 3] {
        self.nv
    }

    /// Per-axis extent (1 past the last cell) of k-cells of a class:
    /// an axis along which the cell extends has nv-1 slots, others nv.
    fn class_extents(&self, k: usize, class: usize) -> [usize; 3] {
        let ext_axes = self.class_axes(k, class);
        let mut e = [1usize; 3];
        for a in 0..self.dim {
            e[a] = if ext_axes.contains(&a) {
                self.nv[a] - 1
            } else {
                self.nv[a]
            };
        }
        e
    }

    /// Axes a k-cell of the given class extends along.
    /// Face classes in 3D follow the right-handed order xy, yz, zx.
    pub fn class_axes(&self, k: usize, class: usize) -> Vec<usize> {
        match (self.dim, k, class) {
            (_, 0, 0) => vec![],
            (2, 1, c) if c < 2 => vec![c],
            (2, 2, 0) => vec![0, 1],
            (3, 1, c) if c < 3 => vec![c],
            (3, 2, 0) => vec![0, 1],
            (3, 2, 1) => vec![1, 2],
            (3, 2, 2) => vec![2, 0],
            (3, 3, 0) => vec![0, 1, 2],
            _ => panic!("invalid cell class k={k} class={class} in dim {}", self.dim),
        }
    }

    pub fn num_classes(&self, k: usize) -> usize {
        match (self.dim, k) {
            (_, 0) => 1,
            (2, 1) => 2,
            (2, 2) => 1,
            (3, 1) => 3,
            (3, 2) => 3,
            (3, 3) => 1,
            _ => panic!("invalid cell dimension {k} in dim {}", self.dim),
        }
    }

    pub fn class_count(&self, k: usize, class: usize) -> usize {
        self.class_extents(k, class).iter().product()
    }

    /// Total number of k-cells.
    pub fn cell_count(&self, k: usize) -> usize {
        (0..self.num_classes(k))
            .map(|c| self.class_count(k, c))
            .sum()
    }

    /// Flat index of a cell: class-major, then row-major with x fastest.
    pub fn cell_index(&self, id: CellId) -> usize {
        let ext = self.class_extents(id.k, id.axis_class);
        debug_assert!((0..3).all(|a| id.coords[a] < ext[a]));
        let local = id.coords[0] + ext[0] * (id.coords[1] + ext[1] * id.coords[2]);
        let offset: usize = (0..id.axis_class).map(|c| self.class_count(id.k, c)).sum();
        offset + local
    }

    pub fn cell_id(&self, k: usize, mut index: usize) -> CellId {
        for class in 0..self.num_classes(k) {
            let n = self.class_count(k, class);
            if index < n {
                let ext = self.class_extents(k, class);
                let coords = [
                    index % ext[0],
                    (index / ext[0]) % ext[1],
                    index / (ext[0] * ext[1]),
                ];
                return CellId {
                    k,
                    axis_class: class,
                    coords,
                };
            }
            index -= n;
        }
        panic!("cell index out of range for k={k}");
    }

    pub fn vertex_position(&self, coords: [usize; 3]) -> [f64; 3] {
        [
            self.origin[0] + self.l_g * coords[0] as f64,
            self.origin[1] + self.l_g * coords[1] as f64,
            self.origin[2] + self.l_g * coords[2] as f64,
        ]
    }

    /// Position of the minimum corner of a cell.
    pub fn cell_min_corner(&self, id: CellId) -> [f64; 3] {
        self.vertex_position(id.coords)
    }

    /// Vertex indices incident to a cell (its corners), 2^k of them.
    pub fn cell_vertices(&self, id: CellId) -> Vec<usize> {
        let axes = self.class_axes(id.k, id.axis_class);
        let mut verts = Vec::with_capacity(1 << axes.len());
        for bits in 0..(1usize << axes.len()) {
            let mut c = id.coords;
            for (i, &a) in axes.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    c[a] += 1;
                }
            }
            verts.push(self.cell_index(CellId {
                k: 0,
                axis_class: 0,
                coords: c,
            }));
        }
        verts
    }

    /// Signed incidence matrix `D_k` from k-cells to (k+1)-cells.
    ///
    /// Rows are (k+1)-cells, columns k-cells, entries ±1. Each row has
    /// exactly 2(k+1) nonzeros.
    pub fn coboundary(&self, k: usize) -> Result<SparseOperator, Error> {
        if k >= self.dim {
            return Err(Error::InvalidInput(format!(
                "coboundary dimension {k} out of range for dim {}",
                self.dim
            )));
        }
        let nrows = self.cell_count(k + 1);
        let ncols = self.cell_count(k);
        let mut triplets = Vec::with_capacity(nrows * 2 * (k + 2));
        for row in 0..nrows {
            let cell = self.cell_id(k + 1, row);
            for (face, sign) in self.cell_boundary(cell) {
                triplets.push((row, self.cell_index(face), sign as f64));
            }
        }
        Ok(SparseOperator::from_triplets(nrows, ncols, triplets))
    }

    /// Oriented boundary faces of a cell, as (face id, sign) pairs.
    pub fn cell_boundary(&self, id: CellId) -> Vec<(CellId, i32)> {
        let axes = self.class_axes(id.k, id.axis_class);
        match id.k {
            1 => {
                // edge c -> c+e_a: boundary is +head -tail
                let a = axes[0];
                let mut head = id.coords;
                head[a] += 1;
                vec![
                    (
                        CellId {
                            k: 0,
                            axis_class: 0,
                            coords: head,
                        },
                        1,
                    ),
                    (
                        CellId {
                            k: 0,
                            axis_class: 0,
                            coords: id.coords,
                        },
                        -1,
                    ),
                ]
            }
            2 => {
                // face spanned by (u, v) in right-handed order:
                // +u@c, +v@(c+e_u), -u@(c+e_v), -v@c
                let (u, v) = (axes[0], axes[1]);
                let edge = |axis: usize, coords: [usize; 3]| CellId {
                    k: 1,
                    axis_class: axis,
                    coords,
                };
                let mut cu = id.coords;
                cu[u] += 1;
                let mut cv = id.coords;
                cv[v] += 1;
                vec![
                    (edge(u, id.coords), 1),
                    (edge(v, cu), 1),
                    (edge(u, cv), -1),
                    (edge(v, id.coords), -1),
                ]
            }
            3 => {
                // cube: for each face class (normal axis w), the face at
                // c+e_w gets +1 and the face at c gets -1, with a sign fixed
                // so that the xy/yz/zx orientation convention makes d∘d = 0.
                let mut out = Vec::with_capacity(6);
                for (class, w) in [(0usize, 2usize), (1, 0), (2, 1)] {
                    let mut far = id.coords;
                    far[w] += 1;
                    out.push((
                        CellId {
                            k: 2,
                            axis_class: class,
                            coords: far,
                        },
                        1,
                    ));
                    out.push((
                        CellId {
                            k: 2,
                            axis_class: class,
                            coords: id.coords,
                        },
                        -1,
                    ));
                }
                out
            }
            _ => panic!("cell_boundary of a vertex"),
        }
    }

    /// The staggered dual grid: one fewer gridpoint per axis, offset by l_g/2.
    pub fn dual_grid(&self) -> GridComplex {
        let mut nv = [1usize; 3];
        for a in 0..self.dim {
            nv[a] = self.nv[a] - 1;
        }
        let h = self.l_g * 0.5;
        let mut origin = self.origin;
        for a in 0..self.dim {
            origin[a] += h;
        }
        GridComplex {
            dim: self.dim,
            origin,
            l_g: self.l_g,
            nv,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid2(span: f64, l_g: f64) -> GridComplex {
        build_grid(Aabb::new([0.0; 3], [span, span, 0.0]), l_g, 2).unwrap()
    }

    #[test]
    fn fig_example_grid_counts() {
        // 3x3 cells with unit grid length
        let g = grid2(3.0, 1.0);
        assert_eq!(g.cell_count(0), 16);
        assert_eq!(g.cell_count(1), 24);
        assert_eq!(g.cell_count(2), 9);
    }

    #[test]
    fn single_cell_counts() {
        let g = grid2(1.0, 1.0);
        assert_eq!(g.cell_count(0), 4);
        assert_eq!(g.cell_count(1), 4);
        assert_eq!(g.cell_count(2), 1);
    }

    #[test]
    fn unit_cube_half_spacing_counts() {
        let g = build_grid(Aabb::new([0.0; 3], [1.0, 1.0, 1.0]), 0.5, 3).unwrap();
        assert_eq!(g.cell_count(0), 27);
        assert_eq!(g.cell_count(1), 54);
        assert_eq!(g.cell_count(2), 36);
        assert_eq!(g.cell_count(3), 8);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(build_grid(Aabb::new([0.0; 3], [1.0, 1.0, 0.0]), 0.0, 2).is_err());
        assert!(build_grid(Aabb::new([0.0; 3], [0.0, 1.0, 0.0]), 1.0, 2).is_err());
        assert!(build_grid(Aabb::new([0.0; 3], [1e9, 1e9, 1e9]), 1e-4, 3).is_err());
    }

    #[test]
    fn coboundary_row_structure() {
        let g = build_grid(Aabb::new([0.0; 3], [1.0, 1.0, 1.0]), 0.5, 3).unwrap();
        for k in 0..3 {
            let d = g.coboundary(k).unwrap();
            assert_eq!(d.nrows(), g.cell_count(k + 1));
            assert_eq!(d.ncols(), g.cell_count(k));
            for r in 0..d.nrows() {
                let (_, vals) = d.row(r);
                assert_eq!(vals.len(), 2 * (k + 1), "row nnz for k={k}");
                assert!(vals.iter().all(|v| v.abs() == 1.0));
            }
        }
    }

    #[test]
    fn d_after_d_is_zero() {
        let g2 = grid2(3.0, 1.0);
        assert!(g2.coboundary(1).unwrap().matmul(&g2.coboundary(0).unwrap()).is_zero());
        let g3 = build_grid(Aabb::new([0.0; 3], [1.0, 1.0, 1.0]), 0.25, 3).unwrap();
        assert!(g3.coboundary(1).unwrap().matmul(&g3.coboundary(0).unwrap()).is_zero());
        assert!(g3.coboundary(2).unwrap().matmul(&g3.coboundary(1).unwrap()).is_zero());
    }

    #[test]
    fn edge_row_signs() {
        // 2D, k=0: interior edge v_a -> v_b along +x gets -1 at v_a, +1 at v_b
        let g = grid2(3.0, 1.0);
        let d0 = g.coboundary(0).unwrap();
        let e = CellId { k: 1, axis_class: 0, coords: [1, 1, 0] };
        let row = g.cell_index(e);
        let va = g.cell_index(CellId { k: 0, axis_class: 0, coords: [1, 1, 0] });
        let vb = g.cell_index(CellId { k: 0, axis_class: 0, coords: [2, 1, 0] });
        assert_eq!(d0.get(row, va), -1.0);
        assert_eq!(d0.get(row, vb), 1.0);
    }

    #[test]
    fn single_face_boundary() {
        let g = grid2(1.0, 1.0);
        let d1 = g.coboundary(1).unwrap();
        assert_eq!(d1.nrows(), 1);
        let (_, vals) = d1.row(0);
        assert_eq!(vals.iter().sum::<f64>(), 0.0);
        assert_eq!(vals.iter().map(|v| v.abs()).sum::<f64>(), 4.0);
    }

    #[test]
    fn index_roundtrip() {
        let g = build_grid(Aabb::new([0.0; 3], [1.0, 2.0, 0.5]), 0.25, 3).unwrap();
        for k in 0..=3 {
            for i in 0..g.cell_count(k) {
                assert_eq!(g.cell_index(g.cell_id(k, i)), i);
            }
        }
    }

    #[test]
    fn dual_grid_is_staggered() {
        let g = grid2(3.0, 1.0);
        let d = g.dual_grid();
        assert_eq!(d.vertex_counts()[0], 3);
        assert_eq!(d.origin()[0], 0.5);
        assert_eq!(d.spacing(), 1.0);
    }
}
