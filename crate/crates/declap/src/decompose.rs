//! Hodge decomposition of discrete 1-forms into exact (curl-free), coexact
//! (divergence-free), and harmonic components, plus discrete curl and
//! divergence operators.
//!
//! The exact part is extracted first by a star-weighted least-squares fit of
//! a 0-form potential, then the coexact part from a 2-form potential, and
//! the harmonic part is the remainder. Both solves use conjugate gradients
//! on the normal equations with relative residual 1e-12 starting from zero,
//! which keeps the iterates inside the range of the singular operators.

use crate::boundary::{
    classify_cells, hodge_star, projection_matrix, restricted_coboundary, DEFAULT_EPS_FACTOR,
};
use crate::error::Error;
use crate::sdf::{dual_shift_field, ScalarField};
use crate::sparse::{BoundaryCondition, DiagonalStar, SparseOperator};

/// Relative CG residual for the potential solves.
pub const SOLVE_TOL: f64 = 1e-12;

/// A discrete k-form: one integrated value per included k-cell, in mask
/// index order.
#[derive(Clone, Debug)]
pub struct DiscreteForm {
    pub k: usize,
    pub values: Vec<f64>,
}

impl DiscreteForm {
    pub fn new(k: usize, values: Vec<f64>) -> Self {
        DiscreteForm { k, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The 0→1→2 chain a 1-form decomposition runs on: restricted coboundaries
/// and the three diagonal stars, under one boundary condition.
#[derive(Clone, Debug)]
pub struct FormContext {
    pub bc: BoundaryCondition,
    pub d0: SparseOperator,
    pub d1: SparseOperator,
    pub s0: DiagonalStar,
    pub s1: DiagonalStar,
    pub s2: DiagonalStar,
}

impl FormContext {
    /// The same chain with all stars replaced by identities (the
    /// combinatorial setting).
    pub fn with_identity_stars(&self) -> FormContext {
        FormContext {
            bc: self.bc,
            d0: self.d0.clone(),
            d1: self.d1.clone(),
            s0: DiagonalStar::identity(0, self.bc, self.s0.len()),
            s1: DiagonalStar::identity(1, self.bc, self.s1.len()),
            s2: DiagonalStar::identity(2, self.bc, self.s2.len()),
        }
    }

    fn check_form(&self, form: &DiscreteForm, k: usize) -> Result<(), Error> {
        let want = match k {
            0 => self.d0.ncols(),
            1 => self.d0.nrows(),
            2 => self.d1.nrows(),
            _ => 0,
        };
        if form.k != k || form.len() != want {
            return Err(Error::InvalidInput(format!(
                "expected a {k}-form with {want} values, got k={} with {}",
                form.k,
                form.len()
            )));
        }
        Ok(())
    }
}

/// Builds the 1-form chain for a grid domain. Normal conditions restrict the
/// primal chain directly; tangential conditions use the half-shifted dual
/// grid, reversing degrees and inverting the star entries.
pub fn grid_form_context(
    field: &ScalarField,
    bc: BoundaryCondition,
    eps: Option<f64>,
) -> Result<FormContext, Error> {
    let dim = field.grid().dim();
    if dim < 2 {
        return Err(Error::InvalidInput(format!(
            "1-form decomposition needs dim >= 2, got {dim}"
        )));
    }
    let ctx = match bc {
        BoundaryCondition::Normal => {
            let (d, s) = restricted_chain(field, eps)?;
            let [s0, s1, s2, _] = s;
            FormContext {
                bc,
                d0: d[0].clone(),
                d1: d[1].clone(),
                s0,
                s1,
                s2,
            }
        }
        BoundaryCondition::Tangential => {
            let shifted = dual_shift_field(field)?;
            let (d, s) = restricted_chain(&shifted, eps)?;
            let inv = |star: &DiagonalStar, k: usize| DiagonalStar {
                k,
                bc,
                diag: star.inverse(),
            };
            // primal tangential k-forms live on dual (dim-k)-cells
            FormContext {
                bc,
                d0: d[dim - 1].transpose(),
                d1: d[dim - 2].transpose(),
                s0: inv(&s[dim], 0),
                s1: inv(&s[dim - 1], 1),
                s2: inv(&s[dim - 2], 2),
            }
        }
    };
    debug_assert!(ctx.d1.matmul(&ctx.d0).norm_inf() == 0.0);
    Ok(ctx)
}

/// Restricted coboundaries D_0..D_{dim-1} and stars S_0..S_dim of a field
/// under normal conditions.
fn restricted_chain(
    field: &ScalarField,
    eps: Option<f64>,
) -> Result<(Vec<SparseOperator>, [DiagonalStar; 4]), Error> {
    let grid = field.grid();
    let dim = grid.dim();
    let eps = eps.unwrap_or(DEFAULT_EPS_FACTOR * grid.spacing());
    let projections: Vec<SparseOperator> = (0..=dim)
        .map(|k| Ok(projection_matrix(&classify_cells(field, k)?)))
        .collect::<Result<_, Error>>()?;
    let mut d = Vec::with_capacity(dim);
    for k in 0..dim {
        d.push(restricted_coboundary(
            &grid.coboundary(k)?,
            &projections[k],
            &projections[k + 1],
        )?);
    }
    let mut stars: [DiagonalStar; 4] = std::array::from_fn(|k| {
        DiagonalStar::identity(k, BoundaryCondition::Normal, 0)
    });
    for (k, star) in stars.iter_mut().enumerate().take(dim + 1) {
        *star = hodge_star(field, k, BoundaryCondition::Normal, eps)?;
    }
    Ok((d, stars))
}

/// The three components of a decomposed 1-form plus the two potentials.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub exact: DiscreteForm,
    pub coexact: DiscreteForm,
    pub harmonic: DiscreteForm,
    pub scalar_potential: DiscreteForm,
    pub flux_potential: DiscreteForm,
}

/// Splits a 1-form into exact + coexact + harmonic parts, mutually
/// orthogonal under the S_1 inner product.
pub fn decompose(ctx: &FormContext, form: &DiscreteForm) -> Result<Decomposition, Error> {
    ctx.check_form(form, 1)?;
    let d0 = &ctx.d0;
    let d1 = &ctx.d1;

    // exact part: alpha minimizes |omega - D0 alpha|_{S1}
    let a = d0.transpose().matmul(&d0.scale_rows(&ctx.s1.diag));
    let rhs: Vec<f64> = d0.mul_vec_transpose(&weighted(&ctx.s1, &form.values));
    let alpha = conjugate_gradient(&a, &rhs, SOLVE_TOL, true)?;
    let exact = d0.mul_vec(&alpha);

    // coexact part: y solves D1 S1^{-1} D1^T y = D1 omega,
    // coexact = S1^{-1} D1^T y
    let s1_inv = ctx.s1.inverse();
    let m = d1.scale_cols(&s1_inv).matmul(&d1.transpose());
    let rhs2 = d1.mul_vec(&form.values);
    let y = conjugate_gradient(&m, &rhs2, SOLVE_TOL, false)?;
    let mut coexact = d1.mul_vec_transpose(&y);
    for (c, w) in coexact.iter_mut().zip(&s1_inv) {
        *c *= w;
    }

    let harmonic: Vec<f64> = form
        .values
        .iter()
        .zip(exact.iter().zip(&coexact))
        .map(|(&w, (&e, &c))| w - e - c)
        .collect();
    Ok(Decomposition {
        exact: DiscreteForm::new(1, exact),
        coexact: DiscreteForm::new(1, coexact),
        harmonic: DiscreteForm::new(1, harmonic),
        scalar_potential: DiscreteForm::new(0, alpha),
        flux_potential: DiscreteForm::new(2, y),
    })
}

/// Discrete curl of a 1-form: D_1 ω, a 2-form.
pub fn discrete_curl(ctx: &FormContext, form: &DiscreteForm) -> Result<DiscreteForm, Error> {
    ctx.check_form(form, 1)?;
    Ok(DiscreteForm::new(2, ctx.d1.mul_vec(&form.values)))
}

/// Discrete divergence of a 1-form: S_0^{-1} D_0^T S_1 ω, a 0-form.
pub fn discrete_div(ctx: &FormContext, form: &DiscreteForm) -> Result<DiscreteForm, Error> {
    ctx.check_form(form, 1)?;
    let mut v = ctx.d0.mul_vec_transpose(&weighted(&ctx.s1, &form.values));
    for (x, w) in v.iter_mut().zip(ctx.s0.inverse()) {
        *x *= w;
    }
    Ok(DiscreteForm::new(0, v))
}

/// Resamples a 1-form from one grid domain onto another by reading its
/// staggered vector proxy at the destination cell centers (nearest included
/// source cell of the same class). The source and destination play the roles
/// of an irregular mesh and the measuring grid: resampling does not preserve
/// discrete closedness, so transferred fields generally pick up both curl
/// and divergence.
pub fn transfer_one_form(
    src_field: &ScalarField,
    dst_field: &ScalarField,
    bc: BoundaryCondition,
    src_values: &[f64],
) -> Result<Vec<f64>, Error> {
    let dim = src_field.grid().dim();
    if dim != dst_field.grid().dim() {
        return Err(Error::InvalidInput(format!(
            "transfer between dim {dim} and dim {} grids",
            dst_field.grid().dim()
        )));
    }
    let (src_eff, dst_eff, k_eff) = match bc {
        BoundaryCondition::Normal => (src_field.clone(), dst_field.clone(), 1),
        BoundaryCondition::Tangential => (
            dual_shift_field(src_field)?,
            dual_shift_field(dst_field)?,
            dim - 1,
        ),
    };
    let src_grid = src_eff.grid().clone();
    let dst_grid = dst_eff.grid().clone();
    let src_mask = classify_cells(&src_eff, k_eff)?;
    let dst_mask = classify_cells(&dst_eff, k_eff)?;
    if src_values.len() != src_mask.count() {
        return Err(Error::InvalidInput(format!(
            "source form has {} values, mask holds {}",
            src_values.len(),
            src_mask.count()
        )));
    }
    let l_src = src_grid.spacing();
    let l_dst = dst_grid.spacing();
    let scale = (l_dst / l_src).powi(k_eff as i32);
    let center = |grid: &crate::grid::GridComplex, id: crate::grid::CellId| -> [f64; 3] {
        let mut c = grid.cell_min_corner(id);
        for &a in &grid.class_axes(id.k, id.axis_class) {
            c[a] += 0.5 * grid.spacing();
        }
        c
    };
    let mut out = Vec::with_capacity(dst_mask.count());
    for dst_idx in dst_mask.included_indices() {
        let id = dst_grid.cell_id(k_eff, dst_idx);
        let p = center(&dst_grid, id);
        // nearest source lattice cell of the same class, then widen the
        // search until an included one appears
        let src_origin = src_grid.origin();
        let axes = src_grid.class_axes(k_eff, id.axis_class);
        let mut base = [0usize; 3];
        let mut ext = [1usize; 3];
        for a in 0..dim {
            let off = if axes.contains(&a) { 0.5 * l_src } else { 0.0 };
            let n = if axes.contains(&a) {
                src_grid.vertex_counts()[a] - 1
            } else {
                src_grid.vertex_counts()[a]
            };
            ext[a] = n;
            let t = ((p[a] - src_origin[a] - off) / l_src).round();
            base[a] = t.clamp(0.0, (n - 1) as f64) as usize;
        }
        let mut best: Option<(f64, usize)> = None;
        'search: for radius in 0..4i64 {
            let mut candidates = Vec::new();
            for dz in -radius..=radius {
                for dy in -radius..=radius {
                    for dx in -radius..=radius {
                        let d = [dx, dy, dz];
                        if d.iter().map(|v| v.abs()).max() != Some(radius) {
                            continue;
                        }
                        let mut c = [0usize; 3];
                        let mut ok = true;
                        for a in 0..3 {
                            let v = base[a] as i64 + d[a];
                            if v < 0 || v >= ext[a] as i64 {
                                ok = false;
                                break;
                            }
                            c[a] = v as usize;
                        }
                        if !ok {
                            continue;
                        }
                        candidates.push(crate::grid::CellId {
                            k: k_eff,
                            axis_class: id.axis_class,
                            coords: c,
                        });
                    }
                }
            }
            for cid in candidates {
                let idx = src_grid.cell_index(cid);
                if let Some(new) = src_mask.new_index(idx) {
                    let q = center(&src_grid, cid);
                    let d2 = (0..3).map(|a| (q[a] - p[a]).powi(2)).sum::<f64>();
                    if best.map_or(true, |(bd, _)| d2 < bd) {
                        best = Some((d2, new));
                    }
                }
            }
            if best.is_some() && radius >= 1 {
                break 'search;
            }
        }
        let Some((_, new)) = best else {
            return Err(Error::Numerical(format!(
                "no included source cell near destination cell {dst_idx}"
            )));
        };
        out.push(src_values[new] * scale);
    }
    Ok(out)
}

/// S-weighted inner product of two vectors.
pub fn star_inner(star: &DiagonalStar, a: &[f64], b: &[f64]) -> f64 {
    star.diag
        .iter()
        .zip(a.iter().zip(b))
        .map(|(&s, (&x, &y))| s * x * y)
        .sum()
}

/// S-weighted norm.
pub fn star_norm(star: &DiagonalStar, a: &[f64]) -> f64 {
    star_inner(star, a, a).sqrt()
}

fn weighted(star: &DiagonalStar, v: &[f64]) -> Vec<f64> {
    star.diag.iter().zip(v).map(|(&s, &x)| s * x).collect()
}

/// Jacobi-preconditioned conjugate gradients for a symmetric PSD system,
/// starting at zero. `deflate_constants` keeps the residual mean-free,
/// pinning the constant kernel of Neumann-type 0-form solves.
fn conjugate_gradient(
    a: &SparseOperator,
    b: &[f64],
    tol: f64,
    deflate_constants: bool,
) -> Result<Vec<f64>, Error> {
    let n = b.len();
    // constants are only deflated when they really span a kernel direction
    // (tangential / full-box settings); boundary-crossing rows usually make
    // the 0-form system nonsingular
    let deflate_constants = deflate_constants && n > 0 && {
        let a_one = a.mul_vec(&vec![1.0; n]);
        let norm = a_one.iter().map(|v| v * v).sum::<f64>().sqrt();
        norm <= 1e-12 * a.norm_inf().max(1.0) * (n as f64).sqrt()
    };
    let deflate = |v: &mut Vec<f64>| {
        if deflate_constants && n > 0 {
            let mean = v.iter().sum::<f64>() / n as f64;
            for x in v.iter_mut() {
                *x -= mean;
            }
        }
    };
    let precond: Vec<f64> = (0..n)
        .map(|i| {
            let d = a.get(i, i);
            if d > 0.0 {
                1.0 / d
            } else {
                1.0
            }
        })
        .collect();
    let mut r = b.to_vec();
    deflate(&mut r);
    let b_norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut x = vec![0.0; n];
    if b_norm == 0.0 {
        return Ok(x);
    }
    let mut z: Vec<f64> = r.iter().zip(&precond).map(|(&v, &m)| m * v).collect();
    deflate(&mut z);
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(&u, &v)| u * v).sum();
    let max_iter = 20 * n + 200;
    for _ in 0..max_iter {
        let r_norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r_norm <= tol * b_norm {
            return Ok(x);
        }
        let mut ap = a.mul_vec(&p);
        deflate(&mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(&u, &v)| u * v).sum();
        if pap <= 0.0 {
            return Err(Error::Numerical(format!(
                "conjugate gradient hit a non-positive curvature direction \
                 (p^T A p = {pap:.3e}); system is not PSD on the search space"
            )));
        }
        let step = rz / pap;
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        deflate(&mut r);
        z = r.iter().zip(&precond).map(|(&v, &m)| m * v).collect();
        deflate(&mut z);
        let rz_new: f64 = r.iter().zip(&z).map(|(&u, &v)| u * v).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let r_norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    Err(Error::Numerical(format!(
        "conjugate gradient stalled at relative residual {:.3e} after {max_iter} \
         iterations (possible unresolved kernel deficiency)",
        r_norm / b_norm
    )))
}
