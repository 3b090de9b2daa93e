//! Cell classification against an SDF, projection (selection) matrices,
//! partial primal measures of boundary-crossing cells, and the diagonal
//! Hodge stars with small-cell clamping.
//!
//! A gridpoint is inside the domain iff its SDF value is strictly negative;
//! a k-cell is included iff at least one of its corner gridpoints is inside.
//! Partial measures are computed by adaptive subdivision with Lipschitz
//! pruning: bisection on edges, a quadtree with polygon clipping on faces,
//! and an octree with tetrahedral clipping on 3-cells. Fields that carry
//! their analytic shape are evaluated exactly at subdivision points.

use crate::error::Error;
use crate::grid::CellId;
use crate::sdf::ScalarField;
use crate::sparse::{BoundaryCondition, DiagonalStar, SparseOperator};

/// Default clamping threshold factor: eps = 1e-4 · l_g.
pub const DEFAULT_EPS_FACTOR: f64 = 1e-4;

/// Relative length below which edge bisection stops.
const EDGE_TOL_FACTOR: f64 = 1e-9;
/// Quadtree depth for face areas.
const FACE_DEPTH: u32 = 8;
/// Octree depth for cell volumes.
const VOLUME_DEPTH: u32 = 5;

/// Which k-cells are kept, with their dense reindexing.
#[derive(Clone, Debug)]
pub struct InclusionMask {
    k: usize,
    included: Vec<bool>,
    reindex: Vec<Option<usize>>,
    count: usize,
}

impl InclusionMask {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of included cells.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Number of cells in the unrestricted complex.
    pub fn total(&self) -> usize {
        self.included.len()
    }

    pub fn is_included(&self, cell: usize) -> bool {
        self.included[cell]
    }

    /// Dense index of an included cell, None for excluded ones.
    pub fn new_index(&self, cell: usize) -> Option<usize> {
        self.reindex[cell]
    }

    /// Original indices of the included cells, in dense-index order.
    pub fn included_indices(&self) -> Vec<usize> {
        (0..self.included.len()).filter(|&i| self.included[i]).collect()
    }
}

/// Classifies k-cells against the field's sign: included iff any corner
/// gridpoint has a strictly negative value.
pub fn classify_cells(field: &ScalarField, k: usize) -> Result<InclusionMask, Error> {
    let grid = field.grid();
    if k > grid.dim() {
        return Err(Error::InvalidInput(format!(
            "cell dimension {k} out of range for dim {}",
            grid.dim()
        )));
    }
    let n = grid.cell_count(k);
    let mut included = vec![false; n];
    let mut reindex = vec![None; n];
    let mut count = 0;
    for i in 0..n {
        let id = grid.cell_id(k, i);
        if grid.cell_vertices(id).iter().any(|&v| field.value(v) < 0.0) {
            included[i] = true;
            reindex[i] = Some(count);
            count += 1;
        }
    }
    Ok(InclusionMask {
        k,
        included,
        reindex,
        count,
    })
}

/// Selection matrix P: one row per included cell with a single 1.
pub fn projection_matrix(mask: &InclusionMask) -> SparseOperator {
    let triplets = mask
        .included_indices()
        .into_iter()
        .enumerate()
        .map(|(new, old)| (new, old, 1.0))
        .collect();
    SparseOperator::from_triplets(mask.count(), mask.total(), triplets)
}

/// Restricted coboundary D_{k,n} = P_{k+1} D_k P_k^T.
pub fn restricted_coboundary(
    d_k: &SparseOperator,
    p_k: &SparseOperator,
    p_k1: &SparseOperator,
) -> Result<SparseOperator, Error> {
    if p_k.ncols() != d_k.ncols() || p_k1.ncols() != d_k.nrows() {
        return Err(Error::InvalidInput(format!(
            "projection shapes {}x{} / {}x{} do not conform with D {}x{}",
            p_k.nrows(),
            p_k.ncols(),
            p_k1.nrows(),
            p_k1.ncols(),
            d_k.nrows(),
            d_k.ncols()
        )));
    }
    Ok(p_k1.matmul(d_k).matmul(&p_k.transpose()))
}

/// Lipschitz bound used for pruning: analytic SDFs are 1-Lipschitz;
/// multilinear interpolants of 1-Lipschitz samples are at most sqrt(dim).
fn lipschitz_bound(field: &ScalarField) -> f64 {
    if field.source().is_some() {
        1.0
    } else {
        (field.grid().dim() as f64).sqrt()
    }
}

/// Measure of the inside portion (field < 0) of an included cell.
/// k=0 cells count as 1.
pub fn partial_measure(field: &ScalarField, cell: CellId) -> Result<f64, Error> {
    let grid = field.grid();
    let idx = grid.cell_index(cell);
    let included = grid
        .cell_vertices(cell)
        .iter()
        .any(|&v| field.value(v) < 0.0);
    if !included {
        return Err(Error::InvalidInput(format!(
            "partial measure requested for excluded cell {idx} (k={})",
            cell.k
        )));
    }
    let lip = lipschitz_bound(field);
    let l_g = grid.spacing();
    let p0 = grid.cell_min_corner(cell);
    let axes = grid.class_axes(cell.k, cell.axis_class);
    let m = match cell.k {
        0 => 1.0,
        1 => {
            let mut p1 = p0;
            p1[axes[0]] += l_g;
            inside_length(field, lip, p0, p1, l_g, EDGE_TOL_FACTOR * l_g, 60)?
        }
        2 => inside_area(field, lip, p0, axes[0], axes[1], l_g, FACE_DEPTH)?,
        3 => inside_volume(field, lip, p0, l_g, VOLUME_DEPTH)?,
        _ => unreachable!(),
    };
    let full = l_g.powi(cell.k as i32);
    Ok(m.clamp(0.0, full))
}

fn midpoint(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        0.5 * (a[0] + b[0]),
        0.5 * (a[1] + b[1]),
        0.5 * (a[2] + b[2]),
    ]
}

fn inside_length(
    field: &ScalarField,
    lip: f64,
    p0: [f64; 3],
    p1: [f64; 3],
    len: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, Error> {
    let m = midpoint(p0, p1);
    let f = field.eval(m)?;
    let reach = lip * len * 0.5;
    if f <= -reach {
        return Ok(len);
    }
    if f >= reach {
        return Ok(0.0);
    }
    // a segment grazing the zero set (within rounding of the sdf
    // arithmetic) counts as inside; without this the reach tests never
    // fire and the recursion visits every leaf
    let band = 1e-9 * len;
    if f.abs() <= band
        && field.eval(p0)?.abs() <= band
        && field.eval(p1)?.abs() <= band
    {
        return Ok(len);
    }
    if len < tol || depth == 0 {
        return Ok(if f <= 0.0 { len } else { 0.0 });
    }
    let a = inside_length(field, lip, p0, m, len * 0.5, tol, depth - 1)?;
    let b = inside_length(field, lip, m, p1, len * 0.5, tol, depth - 1)?;
    Ok(a + b)
}

fn inside_area(
    field: &ScalarField,
    lip: f64,
    p: [f64; 3],
    u: usize,
    v: usize,
    s: f64,
    depth: u32,
) -> Result<f64, Error> {
    let mut c = p;
    c[u] += 0.5 * s;
    c[v] += 0.5 * s;
    let f = field.eval(c)?;
    let reach = lip * s * std::f64::consts::FRAC_1_SQRT_2;
    if f <= -reach {
        return Ok(s * s);
    }
    if f >= reach {
        return Ok(0.0);
    }
    // a face grazing the zero set counts as inside (see inside_length)
    let band = 1e-9 * s;
    if f.abs() <= band {
        let mut on_boundary = true;
        for (du, dv) in [(0.0, 0.0), (s, 0.0), (0.0, s), (s, s)] {
            let mut q = p;
            q[u] += du;
            q[v] += dv;
            if field.eval(q)?.abs() > band {
                on_boundary = false;
                break;
            }
        }
        if on_boundary {
            return Ok(s * s);
        }
    }
    if depth == 0 {
        return leaf_polygon_area(field, p, u, v, s);
    }
    let h = 0.5 * s;
    let mut acc = 0.0;
    for (du, dv) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
        let mut q = p;
        q[u] += du * h;
        q[v] += dv * h;
        acc += inside_area(field, lip, q, u, v, h, depth - 1)?;
    }
    Ok(acc)
}

/// Marching-squares style clip at a quadtree leaf: walk the square boundary,
/// emit inside corners and linear sign-change crossings, shoelace the polygon.
fn leaf_polygon_area(
    field: &ScalarField,
    p: [f64; 3],
    u: usize,
    v: usize,
    s: f64,
) -> Result<f64, Error> {
    // corners in cyclic order
    let offsets = [(0.0, 0.0), (s, 0.0), (s, s), (0.0, s)];
    let mut fs = [0.0f64; 4];
    for (i, (du, dv)) in offsets.iter().enumerate() {
        let mut q = p;
        q[u] += du;
        q[v] += dv;
        fs[i] = field.eval(q)?;
    }
    let mut poly: Vec<(f64, f64)> = Vec::with_capacity(6);
    for i in 0..4 {
        let j = (i + 1) % 4;
        let (fa, fb) = (fs[i], fs[j]);
        // points exactly on the zero set count as inside: the difference has
        // measure zero and this keeps boundary-aligned leaves exact
        if fa <= 0.0 {
            poly.push((offsets[i].0, offsets[i].1));
        }
        if (fa <= 0.0) != (fb <= 0.0) {
            let t = fa / (fa - fb);
            poly.push((
                offsets[i].0 + t * (offsets[j].0 - offsets[i].0),
                offsets[i].1 + t * (offsets[j].1 - offsets[i].1),
            ));
        }
    }
    let mut area2 = 0.0;
    for i in 0..poly.len() {
        let (x0, y0) = poly[i];
        let (x1, y1) = poly[(i + 1) % poly.len()];
        area2 += x0 * y1 - x1 * y0;
    }
    Ok(0.5 * area2.abs())
}

fn inside_volume(
    field: &ScalarField,
    lip: f64,
    p: [f64; 3],
    s: f64,
    depth: u32,
) -> Result<f64, Error> {
    let c = [p[0] + 0.5 * s, p[1] + 0.5 * s, p[2] + 0.5 * s];
    let f = field.eval(c)?;
    let reach = lip * s * 0.5 * 3f64.sqrt();
    if f <= -reach {
        return Ok(s * s * s);
    }
    if f >= reach {
        return Ok(0.0);
    }
    if depth == 0 {
        return leaf_tet_volume(field, p, s);
    }
    let h = 0.5 * s;
    let mut acc = 0.0;
    for bits in 0..8usize {
        let q = [
            p[0] + (bits & 1) as f64 * h,
            p[1] + (bits >> 1 & 1) as f64 * h,
            p[2] + (bits >> 2 & 1) as f64 * h,
        ];
        acc += inside_volume(field, lip, q, h, depth - 1)?;
    }
    Ok(acc)
}

/// Six-tetrahedron (Kuhn) decomposition of the leaf cube, each tet clipped
/// against the linear interpolant of its corner values.
fn leaf_tet_volume(field: &ScalarField, p: [f64; 3], s: f64) -> Result<f64, Error> {
    let mut corner_pos = [[0.0f64; 3]; 8];
    let mut corner_val = [0.0f64; 8];
    for bits in 0..8usize {
        let q = [
            p[0] + (bits & 1) as f64 * s,
            p[1] + (bits >> 1 & 1) as f64 * s,
            p[2] + (bits >> 2 & 1) as f64 * s,
        ];
        corner_pos[bits] = q;
        corner_val[bits] = field.eval(q)?;
    }
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut acc = 0.0;
    for perm in PERMS {
        let mut bits = [0usize; 4];
        for i in 0..3 {
            bits[i + 1] = bits[i] | 1 << perm[i];
        }
        let pos = bits.map(|b| corner_pos[b]);
        let val = bits.map(|b| corner_val[b]);
        acc += tet_inside_volume(&pos, &val);
    }
    Ok(acc)
}

fn tet_volume(p: &[[f64; 3]; 4]) -> f64 {
    let a = sub(p[1], p[0]);
    let b = sub(p[2], p[0]);
    let c = sub(p[3], p[0]);
    (det3(a, b, c) / 6.0).abs()
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

fn crossing(pa: [f64; 3], fa: f64, pb: [f64; 3], fb: f64) -> [f64; 3] {
    let t = fa / (fa - fb);
    [
        pa[0] + t * (pb[0] - pa[0]),
        pa[1] + t * (pb[1] - pa[1]),
        pa[2] + t * (pb[2] - pa[2]),
    ]
}

/// Volume of the {f < 0} part of a tetrahedron with linearly interpolated
/// vertex values.
fn tet_inside_volume(pos: &[[f64; 3]; 4], val: &[f64; 4]) -> f64 {
    let neg: Vec<usize> = (0..4).filter(|&i| val[i] <= 0.0).collect();
    match neg.len() {
        0 => 0.0,
        4 => tet_volume(pos),
        1 => {
            let n = neg[0];
            let mut corner = [pos[n]; 4];
            let mut j = 1;
            for i in 0..4 {
                if i != n {
                    corner[j] = crossing(pos[n], val[n], pos[i], val[i]);
                    j += 1;
                }
            }
            tet_volume(&corner)
        }
        3 => {
            let p = (0..4).find(|i| !neg.contains(i)).unwrap();
            let mut corner = [pos[p]; 4];
            let mut j = 1;
            for i in 0..4 {
                if i != p {
                    corner[j] = crossing(pos[p], val[p], pos[i], val[i]);
                    j += 1;
                }
            }
            tet_volume(pos) - tet_volume(&corner)
        }
        2 => {
            // wedge with two inside vertices: split into three tets
            let (n0, n1) = (neg[0], neg[1]);
            let ps: Vec<usize> = (0..4).filter(|i| !neg.contains(i)).collect();
            let (p0, p1) = (ps[0], ps[1]);
            let q00 = crossing(pos[n0], val[n0], pos[p0], val[p0]);
            let q01 = crossing(pos[n0], val[n0], pos[p1], val[p1]);
            let q10 = crossing(pos[n1], val[n1], pos[p0], val[p0]);
            let q11 = crossing(pos[n1], val[n1], pos[p1], val[p1]);
            tet_volume(&[pos[n0], q00, q01, q11])
                + tet_volume(&[pos[n0], q00, q11, q10])
                + tet_volume(&[pos[n0], pos[n1], q10, q11])
        }
        _ => unreachable!(),
    }
}

/// Diagonal Hodge star: dual (dim−k)-measure over clamped partial primal
/// k-measure, one entry per included k-cell in mask order. Dual measures are
/// the uniform l_g powers; only primal measures are truncated by the domain.
pub fn hodge_star(
    field: &ScalarField,
    k: usize,
    bc: BoundaryCondition,
    eps: f64,
) -> Result<DiagonalStar, Error> {
    let grid = field.grid();
    let l_g = grid.spacing();
    if !(eps > 0.0 && eps < l_g) {
        return Err(Error::InvalidInput(format!(
            "eps must lie in (0, l_g); got {eps} with l_g {l_g}"
        )));
    }
    let mask = classify_cells(field, k)?;
    let dual_measure = l_g.powi((grid.dim() - k) as i32);
    let clamp = eps.powi(k as i32);
    let mut diag = Vec::with_capacity(mask.count());
    for old in mask.included_indices() {
        let m = partial_measure(field, grid.cell_id(k, old))?;
        diag.push(dual_measure / m.max(clamp));
    }
    Ok(DiagonalStar::new(k, bc, diag))
}
