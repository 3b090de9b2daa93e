//! Simplicial and quad cell complexes: boundary matrices, combinatorial
//! Laplacians with their explicit entry rules, clique complexes, the 2D
//! cotangent edge star, and Betti numbers.
//!
//! Simplices are stored as sorted vertex tuples; the induced orientation is
//! the ascending one. Betti numbers come from exact boundary-matrix ranks
//! (column reduction over two large prime fields, which must agree) and are
//! cross-checked against the eigensolver kernel on small complexes.

use std::collections::{BTreeMap, BTreeSet};

use crate::eigen::smallest_eigenpairs;
use crate::error::Error;
use crate::sparse::{BoundaryCondition, DiagonalStar, SparseOperator};

/// An abstract simplicial complex of dimension at most 3, optionally with
/// embedded vertex coordinates.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    points: Option<Vec<[f64; 3]>>,
    simplices: [Vec<Vec<usize>>; 4],
    index: [BTreeMap<Vec<usize>, usize>; 4],
}

impl SimplicialComplex {
    /// Builds a complex from its maximal simplices (any dimension mix);
    /// all faces are added automatically so closure holds by construction.
    pub fn from_simplices(
        points: Option<Vec<[f64; 3]>>,
        maximal: &[Vec<usize>],
    ) -> Result<SimplicialComplex, Error> {
        let mut sets: [BTreeSet<Vec<usize>>; 4] = Default::default();
        let mut nv = points.as_ref().map(|p| p.len()).unwrap_or(0);
        for s in maximal {
            if s.is_empty() || s.len() > 4 {
                return Err(Error::InvalidInput(format!(
                    "simplex with {} vertices out of supported range 1..=4",
                    s.len()
                )));
            }
            let mut t = s.clone();
            t.sort_unstable();
            t.dedup();
            if t.len() != s.len() {
                return Err(Error::InvalidInput(format!(
                    "simplex {s:?} repeats a vertex"
                )));
            }
            nv = nv.max(t[t.len() - 1] + 1);
            // all nonempty subsets are faces
            for bits in 1..(1u32 << t.len()) {
                let face: Vec<usize> = (0..t.len())
                    .filter(|i| bits >> i & 1 == 1)
                    .map(|i| t[i])
                    .collect();
                sets[face.len() - 1].insert(face);
            }
        }
        if let Some(p) = &points {
            if nv > p.len() {
                return Err(Error::InvalidInput(format!(
                    "simplex references vertex {} but only {} points given",
                    nv - 1,
                    p.len()
                )));
            }
        }
        for v in 0..nv {
            sets[0].insert(vec![v]);
        }
        let mut simplices: [Vec<Vec<usize>>; 4] = Default::default();
        let mut index: [BTreeMap<Vec<usize>, usize>; 4] = Default::default();
        for k in 0..4 {
            simplices[k] = sets[k].iter().cloned().collect();
            for (i, s) in simplices[k].iter().enumerate() {
                index[k].insert(s.clone(), i);
            }
        }
        Ok(SimplicialComplex {
            points,
            simplices,
            index,
        })
    }

    pub fn points(&self) -> Option<&[[f64; 3]]> {
        self.points.as_deref()
    }

    /// Number of k-simplices.
    pub fn count(&self, k: usize) -> usize {
        if k < 4 {
            self.simplices[k].len()
        } else {
            0
        }
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        &self.simplices[k]
    }

    pub fn simplex_index(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s.len().checked_sub(1)?)?.get(s).copied()
    }

    /// Dimension of the largest simplex present.
    pub fn dim(&self) -> usize {
        (0..4).rev().find(|&k| self.count(k) > 0).unwrap_or(0)
    }

    /// Boundary matrix B_k: rows are (k−1)-simplices, columns k-simplices,
    /// entry (−1)^i for the face omitting the i-th vertex.
    pub fn boundary_matrix(&self, k: usize) -> Result<SparseOperator, Error> {
        if !(1..=3).contains(&k) {
            return Err(Error::InvalidInput(format!(
                "boundary matrix degree {k} out of range 1..=3"
            )));
        }
        let mut trips = Vec::new();
        for (j, s) in self.simplices[k].iter().enumerate() {
            for omit in 0..s.len() {
                let face: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != omit)
                    .map(|(_, &v)| v)
                    .collect();
                let i = self.index[k - 1][&face];
                let sign = if omit % 2 == 0 { 1.0 } else { -1.0 };
                trips.push((i, j, sign));
            }
        }
        Ok(SparseOperator::from_triplets(
            self.count(k - 1),
            self.count(k),
            trips,
        ))
    }

    /// Combinatorial Laplacian L^G_k, built both as
    /// B_{k+1} B_{k+1}^T + B_k^T B_k and from the explicit degree/adjacency
    /// entry rules; any disagreement is an internal error.
    pub fn combinatorial_laplacian(&self, k: usize) -> Result<SparseOperator, Error> {
        if k > 3 {
            return Err(Error::InvalidInput(format!(
                "Laplacian degree {k} out of range 0..=3"
            )));
        }
        let n = self.count(k);
        let mut product = SparseOperator::zeros(n, n);
        if k < 3 && self.count(k + 1) > 0 {
            let b = self.boundary_matrix(k + 1)?;
            product = product.add(&b.matmul(&b.transpose()));
        }
        if k >= 1 && n > 0 {
            let b = self.boundary_matrix(k)?;
            product = product.add(&b.transpose().matmul(&b));
        }
        let rules = self.entry_rule_laplacian(k)?;
        for i in 0..n {
            for j in 0..n {
                if (product.get(i, j) - rules.get(i, j)).abs() > 0.0 {
                    return Err(Error::Numerical(format!(
                        "combinatorial Laplacian entry rules disagree with the \
                         matrix product at ({i},{j}): {} vs {}",
                        rules.get(i, j),
                        product.get(i, j)
                    )));
                }
            }
        }
        Ok(product)
    }

    /// Entry-rule form: diagonal deg_U + deg_L (deg_U only for k=0);
    /// off-diagonal 0 when upper adjacent, else the product of the two
    /// incidence signs against the shared face when lower adjacent.
    fn entry_rule_laplacian(&self, k: usize) -> Result<SparseOperator, Error> {
        let n = self.count(k);
        let mut trips = Vec::new();
        // upper degrees and upper adjacency through (k+1)-cofaces
        let mut deg_u = vec![0usize; n];
        let mut upper: BTreeSet<(usize, usize)> = BTreeSet::new();
        if k < 3 {
            for s in self.simplices(k + 1) {
                let faces: Vec<usize> = (0..s.len())
                    .map(|omit| {
                        let f: Vec<usize> = s
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| *i != omit)
                            .map(|(_, &v)| v)
                            .collect();
                        self.index[k][&f]
                    })
                    .collect();
                for &f in &faces {
                    deg_u[f] += 1;
                }
                for a in 0..faces.len() {
                    for b in a + 1..faces.len() {
                        upper.insert((faces[a].min(faces[b]), faces[a].max(faces[b])));
                    }
                }
            }
        }
        for (i, &d) in deg_u.iter().enumerate() {
            let deg = if k == 0 { d } else { d + k + 1 };
            if deg > 0 {
                trips.push((i, i, deg as f64));
            }
        }
        if k == 0 {
            for &(i, j) in &upper {
                trips.push((i, j, -1.0));
                trips.push((j, i, -1.0));
            }
        } else {
            // lower adjacency through shared (k−1)-faces
            let mut cofaces: BTreeMap<usize, Vec<(usize, f64)>> = BTreeMap::new();
            for (j, s) in self.simplices(k).iter().enumerate() {
                for omit in 0..s.len() {
                    let f: Vec<usize> = s
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != omit)
                        .map(|(_, &v)| v)
                        .collect();
                    let fi = self.index[k - 1][&f];
                    let sign = if omit % 2 == 0 { 1.0 } else { -1.0 };
                    cofaces.entry(fi).or_default().push((j, sign));
                }
            }
            for group in cofaces.values() {
                for a in 0..group.len() {
                    for b in a + 1..group.len() {
                        let (i, si) = group[a];
                        let (j, sj) = group[b];
                        if upper.contains(&(i.min(j), i.max(j))) {
                            continue;
                        }
                        trips.push((i, j, si * sj));
                        trips.push((j, i, si * sj));
                    }
                }
            }
        }
        Ok(SparseOperator::from_triplets(n, n, trips))
    }

    /// Betti numbers β_0..β_max_k via exact boundary ranks, cross-checked
    /// against the eigensolver kernel of L^G_k when the complex is small.
    pub fn betti_numbers(&self, max_k: usize) -> Result<Vec<usize>, Error> {
        let ranks: Vec<usize> = (1..=3)
            .map(|k| {
                if self.count(k) == 0 {
                    Ok(0)
                } else {
                    boundary_rank(&self.boundary_matrix(k)?)
                }
            })
            .collect::<Result<_, Error>>()?;
        let mut betti = Vec::new();
        for k in 0..=max_k.min(3) {
            let n = self.count(k);
            let r_down = if k >= 1 { ranks[k - 1] } else { 0 };
            let r_up = if k < 3 { ranks[k] } else { 0 };
            let b = n - r_down - r_up;
            if n > 0 && n <= 400 {
                let lap = self.combinatorial_laplacian(k)?;
                let spec = smallest_eigenpairs(&lap, None, n.min(b + 5), 1e-9)?;
                if spec.kernel_dim != b {
                    return Err(Error::Numerical(format!(
                        "Betti cross-check failed for k={k}: rank gives {b}, \
                         eigensolver kernel gives {}",
                        spec.kernel_dim
                    )));
                }
            }
            betti.push(b);
        }
        Ok(betti)
    }
}

/// Clique complex of a simple graph: k-simplices are the (k+1)-cliques,
/// for k ≤ max_dim ≤ 3.
pub fn clique_complex(
    num_vertices: usize,
    edges: &[(usize, usize)],
    max_dim: usize,
) -> Result<SimplicialComplex, Error> {
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); num_vertices];
    let mut seen = BTreeSet::new();
    for &(a, b) in edges {
        if a == b {
            return Err(Error::InvalidInput(format!("self-loop at vertex {a}")));
        }
        if a >= num_vertices || b >= num_vertices {
            return Err(Error::InvalidInput(format!(
                "edge ({a},{b}) out of range for {num_vertices} vertices"
            )));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(Error::InvalidInput(format!("duplicate edge ({a},{b})")));
        }
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let mut maximal: Vec<Vec<usize>> = (0..num_vertices).map(|v| vec![v]).collect();
    if max_dim >= 1 {
        for &(a, b) in seen.iter() {
            maximal.push(vec![a, b]);
        }
    }
    if max_dim >= 2 {
        for &(a, b) in seen.iter() {
            for &c in adj[a].iter().filter(|&&c| c > b && adj[b].contains(&c)) {
                maximal.push(vec![a, b, c]);
                if max_dim >= 3 {
                    for &d in adj[a]
                        .iter()
                        .filter(|&&d| d > c && adj[b].contains(&d) && adj[c].contains(&d))
                    {
                        maximal.push(vec![a, b, c, d]);
                    }
                }
            }
        }
    }
    SimplicialComplex::from_simplices(None, &maximal)
}

/// Cotangent weights for the edges of an embedded 2D triangulation: half the
/// sum of the cotangents of the angles opposite each edge (boundary edges
/// keep the single cotangent).
pub fn cotangent_star_1(complex: &SimplicialComplex) -> Result<DiagonalStar, Error> {
    let points = complex.points().ok_or_else(|| {
        Error::InvalidInput("cotangent star needs embedded vertex coordinates".into())
    })?;
    if complex.count(3) > 0 {
        return Err(Error::InvalidInput(
            "cotangent star is defined for 2D triangulations only".into(),
        ));
    }
    let ne = complex.count(1);
    let mut weight = vec![0.0f64; ne];
    let mut incident = vec![0usize; ne];
    for tri in complex.simplices(2) {
        for omit in 0..3 {
            let apex = points[tri[omit]];
            let (a, b) = match omit {
                0 => (tri[1], tri[2]),
                1 => (tri[0], tri[2]),
                _ => (tri[0], tri[1]),
            };
            let u = [
                points[a][0] - apex[0],
                points[a][1] - apex[1],
                points[a][2] - apex[2],
            ];
            let v = [
                points[b][0] - apex[0],
                points[b][1] - apex[1],
                points[b][2] - apex[2],
            ];
            let dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
            let cx = u[1] * v[2] - u[2] * v[1];
            let cy = u[2] * v[0] - u[0] * v[2];
            let cz = u[0] * v[1] - u[1] * v[0];
            let cross = (cx * cx + cy * cy + cz * cz).sqrt();
            if cross == 0.0 {
                return Err(Error::InvalidInput(format!(
                    "degenerate triangle {tri:?}"
                )));
            }
            let e = complex.simplex_index(&[a.min(b), a.max(b)]).unwrap();
            weight[e] += dot / cross;
            incident[e] += 1;
        }
    }
    // interior edges take the half-sum; boundary edges keep the single cotangent
    for (w, &c) in weight.iter_mut().zip(&incident) {
        if c > 1 {
            *w *= 0.5;
        }
    }
    Ok(DiagonalStar {
        k: 1,
        bc: BoundaryCondition::Tangential,
        diag: weight,
    })
}

/// Barycentric lumped vertex areas of a 2D triangulation: one third of the
/// incident triangle areas, usable as the 0-form mass in the generalized
/// cotangent eigenproblem.
pub fn barycentric_vertex_star(complex: &SimplicialComplex) -> Result<DiagonalStar, Error> {
    let points = complex.points().ok_or_else(|| {
        Error::InvalidInput("vertex star needs embedded vertex coordinates".into())
    })?;
    let mut area = vec![0.0f64; complex.count(0)];
    for tri in complex.simplices(2) {
        let (p, q, r) = (points[tri[0]], points[tri[1]], points[tri[2]]);
        let ux = q[0] - p[0];
        let uy = q[1] - p[1];
        let vx = r[0] - p[0];
        let vy = r[1] - p[1];
        let a = 0.5 * (ux * vy - uy * vx).abs();
        if a == 0.0 {
            return Err(Error::InvalidInput(format!("degenerate triangle {tri:?}")));
        }
        for &v in tri {
            area[v] += a / 3.0;
        }
    }
    Ok(DiagonalStar {
        k: 0,
        bc: BoundaryCondition::Tangential,
        diag: area,
    })
}

/// A 2D cell complex with polygonal faces given as vertex cycles (enough for
/// quad meshes); edges are derived from the cycles.
#[derive(Clone, Debug)]
pub struct CellComplex {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    edge_index: BTreeMap<(usize, usize), usize>,
    faces: Vec<Vec<usize>>,
}

impl CellComplex {
    pub fn from_faces(num_vertices: usize, faces: Vec<Vec<usize>>) -> Result<CellComplex, Error> {
        let mut edge_index = BTreeMap::new();
        let mut edges = Vec::new();
        for f in &faces {
            if f.len() < 3 {
                return Err(Error::InvalidInput(format!(
                    "face cycle {f:?} has fewer than 3 vertices"
                )));
            }
            for i in 0..f.len() {
                let (a, b) = (f[i], f[(i + 1) % f.len()]);
                if a == b || a >= num_vertices || b >= num_vertices {
                    return Err(Error::InvalidInput(format!("bad face cycle {f:?}")));
                }
                let key = (a.min(b), a.max(b));
                edge_index.entry(key).or_insert_with(|| {
                    edges.push(key);
                    edges.len() - 1
                });
            }
        }
        Ok(CellComplex {
            num_vertices,
            edges,
            edge_index,
            faces,
        })
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        (self.num_vertices, self.edges.len(), self.faces.len())
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// B_1: vertices × edges, −1 at the tail and +1 at the head.
    pub fn boundary_1(&self) -> Result<SparseOperator, Error> {
        let mut trips = Vec::new();
        for (j, &(a, b)) in self.edges.iter().enumerate() {
            trips.push((a, j, -1.0));
            trips.push((b, j, 1.0));
        }
        Ok(SparseOperator::from_triplets(
            self.num_vertices,
            self.edges.len(),
            trips,
        ))
    }

    /// B_2: edges × faces, ±1 per cycle edge against the stored ascending
    /// edge orientation.
    pub fn boundary_2(&self) -> Result<SparseOperator, Error> {
        let mut trips = Vec::new();
        for (j, f) in self.faces.iter().enumerate() {
            for i in 0..f.len() {
                let (a, b) = (f[i], f[(i + 1) % f.len()]);
                let e = self.edge_index[&(a.min(b), a.max(b))];
                trips.push((e, j, if a < b { 1.0 } else { -1.0 }));
            }
        }
        Ok(SparseOperator::from_triplets(
            self.edges.len(),
            self.faces.len(),
            trips,
        ))
    }

    /// Betti numbers (β₀, β₁, β₂) via exact boundary ranks.
    pub fn betti_numbers(&self) -> Result<(usize, usize, usize), Error> {
        let b1 = self.boundary_1()?;
        let b2 = self.boundary_2()?;
        debug_assert!(b1.matmul(&b2).is_zero());
        let r1 = boundary_rank(&b1)?;
        let r2 = boundary_rank(&b2)?;
        Ok((
            self.num_vertices - r1,
            self.edges.len() - r1 - r2,
            self.faces.len() - r2,
        ))
    }
}

/// An n×m quad mesh of the torus (both directions periodic); requires
/// n, m ≥ 3 so the 1-skeleton stays simple.
pub fn quad_torus(n: usize, m: usize) -> Result<CellComplex, Error> {
    if n < 3 || m < 3 {
        return Err(Error::InvalidInput(format!(
            "quad torus needs at least 3 cells per direction, got {n}x{m}"
        )));
    }
    let vid = |i: usize, j: usize| (j % m) * n + (i % n);
    let mut faces = Vec::with_capacity(n * m);
    for j in 0..m {
        for i in 0..n {
            faces.push(vec![vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)]);
        }
    }
    CellComplex::from_faces(n * m, faces)
}

/// Rank of a boundary-style integer matrix, computed by sparse column
/// reduction over two distinct prime fields; the ranks must agree.
fn boundary_rank(b: &SparseOperator) -> Result<usize, Error> {
    const PRIMES: [u64; 2] = [2_147_483_647, 1_000_000_007];
    let mut ranks = [0usize; 2];
    for (ri, &p) in PRIMES.iter().enumerate() {
        ranks[ri] = rank_mod_p(b, p)?;
    }
    if ranks[0] != ranks[1] {
        return Err(Error::Numerical(format!(
            "modular ranks disagree: {} vs {}",
            ranks[0], ranks[1]
        )));
    }
    Ok(ranks[0])
}

fn rank_mod_p(b: &SparseOperator, p: u64) -> Result<usize, Error> {
    // columns as sorted (row, value) lists
    let bt = b.transpose();
    let mut cols: Vec<Vec<(usize, u64)>> = (0..b.ncols())
        .map(|j| {
            let (idx, vals) = bt.row(j);
            idx.iter()
                .zip(vals)
                .map(|(&r, &v)| {
                    let iv = v.round() as i64;
                    if (v - iv as f64).abs() > 0.0 {
                        return Err(Error::InvalidInput(
                            "exact rank requires integer entries".into(),
                        ));
                    }
                    Ok((r, iv.rem_euclid(p as i64) as u64))
                })
                .filter(|e| !matches!(e, Ok((_, 0))))
                .collect()
        })
        .collect::<Result<_, Error>>()?;
    let inv = |a: u64| -> u64 {
        // Fermat inverse
        let mut base = a % p;
        let mut e = p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    let mut pivot_of_row: BTreeMap<usize, usize> = BTreeMap::new();
    let mut rank = 0usize;
    for j in 0..cols.len() {
        loop {
            let Some(&(low, lv)) = cols[j].last() else {
                break;
            };
            let Some(&pj) = pivot_of_row.get(&low) else {
                pivot_of_row.insert(low, j);
                rank += 1;
                break;
            };
            // cols[j] -= (lv / pivot_low) * cols[pj]
            let &(_, pv) = cols[pj].last().unwrap();
            let factor = lv * inv(pv) % p;
            let mut merged = Vec::with_capacity(cols[j].len() + cols[pj].len());
            let (mut a, mut c) = (0usize, 0usize);
            let x = &cols[j];
            let y = &cols[pj];
            while a < x.len() || c < y.len() {
                let pick_x = c >= y.len() || (a < x.len() && x[a].0 < y[c].0);
                if pick_x {
                    merged.push(x[a]);
                    a += 1;
                } else if a >= x.len() || y[c].0 < x[a].0 {
                    let v = (p - factor * y[c].1 % p) % p;
                    if v != 0 {
                        merged.push((y[c].0, v));
                    }
                    c += 1;
                } else {
                    let v = (x[a].1 + p - factor * y[c].1 % p) % p;
                    if v != 0 {
                        merged.push((x[a].0, v));
                    }
                    a += 1;
                    c += 1;
                }
            }
            cols[j] = merged;
        }
    }
    Ok(rank)
}

/// Parses OFF-style text: `OFF`, counts line `nv nf ne`, vertex coordinate
/// lines (2 or 3 numbers), then facet lines `count v0 v1 ...`.
pub fn read_off(text: &str) -> Result<(Vec<[f64; 3]>, Vec<Vec<usize>>), Error> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split_whitespace())
        .peekable();
    if tokens.next() != Some("OFF") {
        return Err(Error::Format("missing OFF header".into()));
    }
    let mut next_usize = |what: &str| -> Result<usize, Error> {
        tokens
            .next()
            .ok_or_else(|| Error::Format(format!("unexpected end of OFF data at {what}")))?
            .parse::<usize>()
            .map_err(|e| Error::Format(format!("bad {what}: {e}")))
    };
    let nv = next_usize("vertex count")?;
    let nf = next_usize("face count")?;
    let _ne = next_usize("edge count")?;
    let rest: Vec<&str> = tokens.collect();
    // vertex lines may be 2D or 3D: pick the width whose face block then
    // consumes the remaining tokens exactly
    let face_block_fits = |start: usize| -> bool {
        let mut pos = start;
        for _ in 0..nf {
            let Some(k) = rest.get(pos).and_then(|t| t.parse::<usize>().ok()) else {
                return false;
            };
            pos += 1 + k;
        }
        pos == rest.len()
    };
    let coords_per_vertex = if rest.len() >= nv * 3 && face_block_fits(nv * 3) {
        3
    } else if rest.len() >= nv * 2 && face_block_fits(nv * 2) {
        2
    } else {
        return Err(Error::Format("malformed OFF vertex or face block".into()));
    };
    fn take<'a>(rest: &'a [&str], pos: &mut usize, what: &str) -> Result<&'a str, Error> {
        let t = rest
            .get(*pos)
            .ok_or_else(|| Error::Format(format!("unexpected end of OFF data at {what}")))?;
        *pos += 1;
        Ok(t)
    }
    let mut pos = 0usize;
    let mut points = Vec::with_capacity(nv);
    for _ in 0..nv {
        let mut coords = [0.0f64; 3];
        for c in coords.iter_mut().take(coords_per_vertex) {
            let t = take(&rest, &mut pos, "vertex coordinate")?;
            *c = t
                .parse::<f64>()
                .map_err(|e| Error::Format(format!("bad vertex coordinate {t:?}: {e}")))?;
        }
        points.push(coords);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let t = take(&rest, &mut pos, "facet size")?;
        let c = t
            .parse::<usize>()
            .map_err(|e| Error::Format(format!("bad facet size {t:?}: {e}")))?;
        let mut f = Vec::with_capacity(c);
        for _ in 0..c {
            let t = take(&rest, &mut pos, "facet vertex")?;
            let v = t
                .parse::<usize>()
                .map_err(|e| Error::Format(format!("bad facet vertex {t:?}: {e}")))?;
            if v >= nv {
                return Err(Error::Format(format!(
                    "facet vertex {v} out of range (nv={nv})"
                )));
            }
            f.push(v);
        }
        faces.push(f);
    }
    Ok((points, faces))
}

/// Parses edge-list text: optional `nv` header line, then `a b` pairs.
/// The vertex count is the header value or 1 + the largest endpoint.
pub fn read_edge_list(text: &str) -> Result<(usize, Vec<(usize, usize)>), Error> {
    let mut nv = 0usize;
    let mut edges = Vec::new();
    let mut first = true;
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| Error::Format(format!("bad edge-list token {t:?}: {e}")))
            })
            .collect::<Result<_, Error>>()?;
        match (first, nums.len()) {
            (true, 1) => nv = nums[0],
            (_, 2) => {
                edges.push((nums[0], nums[1]));
                nv = nv.max(nums[0].max(nums[1]) + 1);
            }
            _ => {
                return Err(Error::Format(format!(
                    "edge-list line {line:?} is neither a count nor a pair"
                )))
            }
        }
        first = false;
    }
    Ok((nv, edges))
}

/// Triangulates the square [0,a]² on an (n+1)×(n+1) point lattice with a
/// smooth grading that crowds points toward one corner, plus seeded jitter,
/// to produce a deliberately nonuniform mesh.
pub fn nonuniform_square_triangulation(
    side: f64,
    n: usize,
    seed: u64,
) -> Result<SimplicialComplex, Error> {
    use rand::{Rng, SeedableRng};
    if n < 2 || !(side > 0.0) {
        return Err(Error::InvalidInput(format!(
            "bad triangulation request: side {side}, n {n}"
        )));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let grade = |t: f64| t.powf(1.6);
    let np = n + 1;
    let h = 1.0 / n as f64;
    let mut points = Vec::with_capacity(np * np);
    for j in 0..np {
        for i in 0..np {
            // jitter in parameter space before grading: ordering is
            // preserved for any |offset| < h/2, so cells never invert
            let mut s = i as f64 * h;
            let mut t = j as f64 * h;
            if i > 0 && i < n {
                s += rng.gen_range(-0.18..0.18) * h;
            }
            if j > 0 && j < n {
                t += rng.gen_range(-0.18..0.18) * h;
            }
            points.push([side * grade(s), side * grade(t), 0.0]);
        }
    }
    let mut tris = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let v00 = j * np + i;
            let v10 = v00 + 1;
            let v01 = v00 + np;
            let v11 = v01 + 1;
            tris.push(vec![v00, v10, v11]);
            tris.push(vec![v00, v11, v01]);
        }
    }
    SimplicialComplex::from_simplices(Some(points), &tris)
}
