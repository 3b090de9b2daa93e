//! Analytic signed distance functions for the test shapes, sampled SDF
//! fields, and SDF volume file I/O.
//!
//! Convention: negative inside, positive outside, zero on the boundary.

use std::fs;
use std::path::Path;

use crate::error::Error;
use crate::grid::{build_grid, Aabb, GridComplex};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ShapeKind {
    Disk { radius: f64 },
    Square { side: f64 },
    Ball { radius: f64 },
    Cube { side: f64 },
    Torus { major: f64, minor: f64 },
    Shell { outer: f64, inner: f64 },
}

/// An analytic shape with an exact Euclidean SDF.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Shape {
    pub kind: ShapeKind,
    pub center: [f64; 3],
}

impl Shape {
    pub fn new(kind: ShapeKind, center: [f64; 3]) -> Result<Shape, Error> {
        let ok = match kind {
            ShapeKind::Disk { radius } | ShapeKind::Ball { radius } => radius > 0.0,
            ShapeKind::Square { side } | ShapeKind::Cube { side } => side > 0.0,
            ShapeKind::Torus { major, minor } => minor > 0.0 && minor < major,
            ShapeKind::Shell { outer, inner } => inner > 0.0 && inner < outer,
        };
        if !ok {
            return Err(Error::InvalidInput(format!("invalid shape dimensions: {kind:?}")));
        }
        Ok(Shape { kind, center })
    }

    pub fn centered(kind: ShapeKind) -> Result<Shape, Error> {
        Shape::new(kind, [0.0; 3])
    }

    /// 2 for planar shapes, 3 for solids.
    pub fn dim(&self) -> usize {
        match self.kind {
            ShapeKind::Disk { .. } | ShapeKind::Square { .. } => 2,
            _ => 3,
        }
    }

    /// Exact signed Euclidean distance from `p` to the boundary.
    pub fn sdf(&self, p: [f64; 3]) -> f64 {
        let q = [
            p[0] - self.center[0],
            p[1] - self.center[1],
            p[2] - self.center[2],
        ];
        match self.kind {
            ShapeKind::Disk { radius } => (q[0] * q[0] + q[1] * q[1]).sqrt() - radius,
            ShapeKind::Ball { radius } => {
                (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt() - radius
            }
            ShapeKind::Square { side } => box_sdf(&q[..2], side),
            ShapeKind::Cube { side } => box_sdf(&q, side),
            ShapeKind::Torus { major, minor } => {
                let ring = (q[0] * q[0] + q[1] * q[1]).sqrt() - major;
                (ring * ring + q[2] * q[2]).sqrt() - minor
            }
            ShapeKind::Shell { outer, inner } => {
                let d = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
                (d - outer).max(inner - d)
            }
        }
    }

    /// Tight axis-aligned bounding box of the shape.
    pub fn bbox(&self) -> Aabb {
        let r = match self.kind {
            ShapeKind::Disk { radius } | ShapeKind::Ball { radius } => {
                [radius, radius, if self.dim() == 3 { radius } else { 0.0 }]
            }
            ShapeKind::Square { side } => [side / 2.0, side / 2.0, 0.0],
            ShapeKind::Cube { side } => [side / 2.0; 3],
            ShapeKind::Torus { major, minor } => [major + minor, major + minor, minor],
            ShapeKind::Shell { outer, .. } => [outer; 3],
        };
        Aabb::new(
            [
                self.center[0] - r[0],
                self.center[1] - r[1],
                self.center[2] - r[2],
            ],
            [
                self.center[0] + r[0],
                self.center[1] + r[1],
                self.center[2] + r[2],
            ],
        )
    }
}

/// Exact SDF of an axis-aligned box with equal sides, centered at the origin.
fn box_sdf(q: &[f64], side: f64) -> f64 {
    let h = side / 2.0;
    let mut outside = 0.0;
    let mut inside = f64::NEG_INFINITY;
    for &c in q {
        let d = c.abs() - h;
        if d > 0.0 {
            outside += d * d;
        }
        inside = inside.max(d);
    }
    if outside > 0.0 {
        outside.sqrt()
    } else {
        inside
    }
}

pub fn sdf_eval(shape: &Shape, p: [f64; 3]) -> f64 {
    shape.sdf(p)
}

/// Grid for a shape: the shape's bounding box expanded by one grid length,
/// so a full layer of gridpoints lies strictly outside the shape.
pub fn grid_for_shape(shape: &Shape, l_g: f64) -> Result<GridComplex, Error> {
    if !(l_g > 0.0) {
        return Err(Error::InvalidInput(format!("grid length must be positive, got {l_g}")));
    }
    build_grid(shape.bbox().expanded(l_g), l_g, shape.dim())
}

/// One real value per gridpoint. For SDF fields, negative means inside.
///
/// A field sampled from an analytic [`Shape`] remembers it, so off-gridpoint
/// evaluations are exact; otherwise they fall back to multilinear
/// interpolation of the samples.
#[derive(Clone, Debug)]
pub struct ScalarField {
    grid: GridComplex,
    values: Vec<f64>,
    source: Option<Shape>,
}

impl ScalarField {
    pub fn from_values(grid: GridComplex, values: Vec<f64>) -> Result<ScalarField, Error> {
        if values.len() != grid.cell_count(0) {
            return Err(Error::InvalidInput(format!(
                "field has {} values but grid has {} vertices",
                values.len(),
                grid.cell_count(0)
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("field contains non-finite values".into()));
        }
        Ok(ScalarField {
            grid,
            values,
            source: None,
        })
    }

    pub fn grid(&self) -> &GridComplex {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, vertex: usize) -> f64 {
        self.values[vertex]
    }

    pub fn source(&self) -> Option<&Shape> {
        self.source.as_ref()
    }

    /// Evaluates the field at an arbitrary point: analytically when the field
    /// carries its source shape, by multilinear interpolation otherwise.
    /// Interpolation clamps points within 1e-9·l_g of the grid box and
    /// rejects points farther outside.
    pub fn eval(&self, p: [f64; 3]) -> Result<f64, Error> {
        if let Some(shape) = &self.source {
            return Ok(shape.sdf(p));
        }
        self.interpolate(p)
    }

    fn interpolate(&self, p: [f64; 3]) -> Result<f64, Error> {
        let dim = self.grid.dim();
        let origin = self.grid.origin();
        let nv = self.grid.vertex_counts();
        let l_g = self.grid.spacing();
        let tol = 1e-9 * l_g;
        let mut i0 = [0usize; 3];
        let mut t = [0.0f64; 3];
        for a in 0..dim {
            let u = (p[a] - origin[a]) / l_g;
            let top = (nv[a] - 1) as f64;
            if u < -tol / l_g || u > top + tol / l_g {
                return Err(Error::InvalidInput(format!(
                    "point {p:?} lies outside the sampled grid; the field has no \
                     padding to interpolate there"
                )));
            }
            let uc = u.clamp(0.0, top);
            let cell = (uc.floor() as usize).min(nv[a].saturating_sub(2));
            i0[a] = cell;
            t[a] = uc - cell as f64;
        }
        let corners = 1usize << dim;
        let mut acc = 0.0;
        for bits in 0..corners {
            let mut c = i0;
            let mut w = 1.0;
            for a in 0..dim {
                if bits >> a & 1 == 1 {
                    c[a] += 1;
                    w *= t[a];
                } else {
                    w *= 1.0 - t[a];
                }
            }
            let idx = c[0] + nv[0] * (c[1] + nv[1] * c[2]);
            acc += w * self.values[idx];
        }
        Ok(acc)
    }
}

/// Samples the shape's SDF at every gridpoint.
pub fn sample_sdf(shape: &Shape, grid: &GridComplex) -> ScalarField {
    let n = grid.cell_count(0);
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let id = grid.cell_id(0, i);
        values.push(shape.sdf(grid.vertex_position(id.coords)));
    }
    ScalarField {
        grid: grid.clone(),
        values,
        source: Some(*shape),
    }
}

/// Resamples the field at the staggered dual-grid vertex positions
/// (primal positions shifted by l_g/2 along every axis). The result lives
/// on the dual grid and realizes tangential boundary conditions as normal
/// ones there.
pub fn dual_shift_field(field: &ScalarField) -> Result<ScalarField, Error> {
    let dual = field.grid().dual_grid();
    let n = dual.cell_count(0);
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let id = dual.cell_id(0, i);
        values.push(field.eval(dual.vertex_position(id.coords))?);
    }
    Ok(ScalarField {
        grid: dual,
        values,
        source: field.source,
    })
}

const SDF_MAGIC: &str = "SDF";

fn header_line(field: &ScalarField) -> String {
    let grid = field.grid();
    let dim = grid.dim();
    let nv = grid.vertex_counts();
    let origin = grid.origin();
    let mut s = format!("{SDF_MAGIC} {dim}");
    for a in 0..dim {
        s.push_str(&format!(" {}", nv[a]));
    }
    for a in 0..dim {
        s.push_str(&format!(" {}", origin[a]));
    }
    s.push_str(&format!(" {}", grid.spacing()));
    s.push('\n');
    s
}

fn parse_header(line: &str) -> Result<GridComplex, Error> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.first() != Some(&SDF_MAGIC) {
        return Err(Error::Format("missing SDF magic in header".into()));
    }
    let dim: usize = toks
        .get(1)
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Format("bad dimension in header".into()))?;
    if dim != 2 && dim != 3 {
        return Err(Error::Format(format!("dimension must be 2 or 3, got {dim}")));
    }
    if toks.len() != 2 + 2 * dim + 1 {
        return Err(Error::Format(format!(
            "header has {} fields, expected {}",
            toks.len(),
            2 + 2 * dim + 1
        )));
    }
    let mut nv = [1usize; 3];
    for a in 0..dim {
        nv[a] = toks[2 + a]
            .parse()
            .map_err(|_| Error::Format("bad vertex count in header".into()))?;
    }
    let mut origin = [0.0f64; 3];
    for a in 0..dim {
        origin[a] = toks[2 + dim + a]
            .parse()
            .map_err(|_| Error::Format("bad origin in header".into()))?;
    }
    let l_g: f64 = toks[2 + 2 * dim]
        .parse()
        .map_err(|_| Error::Format("bad grid length in header".into()))?;
    GridComplex::from_parts(dim, origin, l_g, nv)
}

/// Writes the field as text: header line, then values in vertex index order.
pub fn save_sdf(field: &ScalarField, path: &Path) -> Result<(), Error> {
    let mut out = header_line(field);
    for (i, v) in field.values().iter().enumerate() {
        if i > 0 {
            out.push(if i % 8 == 0 { '\n' } else { ' ' });
        }
        out.push_str(&format!("{v}"));
    }
    out.push('\n');
    fs::write(path, out)?;
    Ok(())
}

/// Binary variant: the same text header line, then little-endian f64 values.
pub fn save_sdf_binary(field: &ScalarField, path: &Path) -> Result<(), Error> {
    let mut out = header_line(field).into_bytes();
    for v in field.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads either variant, detecting binary payloads by their exact byte length.
pub fn load_sdf(path: &Path) -> Result<ScalarField, Error> {
    let bytes = fs::read(path)?;
    let nl = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::Format("missing header line".into()))?;
    let header = std::str::from_utf8(&bytes[..nl])
        .map_err(|_| Error::Format("header is not valid UTF-8".into()))?;
    let grid = parse_header(header)?;
    let n = grid.cell_count(0);
    let payload = &bytes[nl + 1..];

    let values = if payload.len() == 8 * n && !payload_is_text(payload) {
        payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect::<Vec<_>>()
    } else {
        let text = std::str::from_utf8(payload)
            .map_err(|_| Error::Format("payload is neither text nor sized as binary".into()))?;
        let vals: Result<Vec<f64>, _> = text.split_whitespace().map(str::parse).collect();
        let vals = vals.map_err(|e| Error::Format(format!("bad value in payload: {e}")))?;
        if vals.len() != n {
            return Err(Error::Format(format!(
                "payload has {} values but header implies {n}",
                vals.len()
            )));
        }
        vals
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Format("payload contains non-finite values".into()));
    }
    ScalarField::from_values(grid, values)
}

fn payload_is_text(payload: &[u8]) -> bool {
    payload
        .iter()
        .all(|&b| b.is_ascii_digit() || b" \t\n\r.eE+-".contains(&b))
}
