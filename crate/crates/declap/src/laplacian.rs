//! Assembly of BIG, Hodge, and combinatorial Laplacians on grid domains
//! under normal or tangential boundary conditions, plus the N/T/C reduction
//! of their spectra.
//!
//! Normal systems are assembled directly from the restricted coboundaries
//! and (for the Hodge kind) the partial-measure stars. A tangential k-form
//! system is realized as the normal (dim−k)-form system on the staggered
//! dual grid with the SDF resampled there, then relabeled.

use crate::boundary::{
    classify_cells, hodge_star, projection_matrix, restricted_coboundary, DEFAULT_EPS_FACTOR,
};
use crate::eigen::{smallest_eigenpairs, SpectrumResult};
use crate::error::Error;
use crate::sdf::{dual_shift_field, ScalarField};
use crate::sparse::{BoundaryCondition, DiagonalStar, SparseOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaplacianKind {
    /// Boundary-induced graph Laplacian: identity stars, spectra rescaled
    /// by 1/l_g².
    Big,
    /// Diagonal-star Hodge Laplacian; generalized problem L ω = λ S ω.
    Hodge,
    /// Same incidence as BIG but with unit spectral scale.
    Combinatorial,
}

impl std::fmt::Display for LaplacianKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LaplacianKind::Big => write!(f, "big"),
            LaplacianKind::Hodge => write!(f, "hodge"),
            LaplacianKind::Combinatorial => write!(f, "combinatorial"),
        }
    }
}

/// An assembled Laplacian: stiffness, optional diagonal mass, and the
/// multiplier applied to reported eigenvalues.
#[derive(Clone, Debug)]
pub struct LaplacianSystem {
    pub k: usize,
    pub bc: BoundaryCondition,
    pub kind: LaplacianKind,
    pub stiffness: SparseOperator,
    pub mass: Option<DiagonalStar>,
    pub scale: f64,
}

impl LaplacianSystem {
    pub fn size(&self) -> usize {
        self.stiffness.nrows()
    }

    /// Solves for min(m, size) smallest eigenpairs, with `scale` applied to
    /// the reported eigenvalues.
    pub fn spectrum(&self, m: usize, tol: f64) -> Result<SpectrumResult, Error> {
        let m = m.min(self.size());
        let mut r = smallest_eigenpairs(
            &self.stiffness,
            self.mass.as_ref().map(|s| s.diag.as_slice()),
            m,
            tol,
        )?;
        for v in r.eigenvalues.iter_mut() {
            *v *= self.scale;
        }
        Ok(r)
    }
}

/// Assembles the k-Laplacian of the requested kind and boundary condition.
/// `eps` is the star clamping threshold (default 1e-4·l_g when None); it is
/// ignored by the BIG and combinatorial kinds.
pub fn laplacian(
    field: &ScalarField,
    k: usize,
    bc: BoundaryCondition,
    kind: LaplacianKind,
    eps: Option<f64>,
) -> Result<LaplacianSystem, Error> {
    let dim = field.grid().dim();
    if k > dim {
        return Err(Error::InvalidInput(format!(
            "form degree {k} out of range for dim {dim}"
        )));
    }
    match bc {
        BoundaryCondition::Normal => assemble_normal(field, k, kind, eps),
        BoundaryCondition::Tangential => tangential_system(field, k, kind, eps),
    }
}

pub fn big_laplacian(
    field: &ScalarField,
    k: usize,
    bc: BoundaryCondition,
) -> Result<LaplacianSystem, Error> {
    laplacian(field, k, bc, LaplacianKind::Big, None)
}

pub fn hodge_laplacian(
    field: &ScalarField,
    k: usize,
    bc: BoundaryCondition,
    eps: Option<f64>,
) -> Result<LaplacianSystem, Error> {
    laplacian(field, k, bc, LaplacianKind::Hodge, eps)
}

pub fn combinatorial_grid_laplacian(
    field: &ScalarField,
    k: usize,
    bc: BoundaryCondition,
) -> Result<LaplacianSystem, Error> {
    laplacian(field, k, bc, LaplacianKind::Combinatorial, None)
}

/// Realizes the tangential k-system as the normal (dim−k)-system on the
/// half-shifted dual grid, relabeled back to degree k.
pub fn tangential_system(
    field: &ScalarField,
    k: usize,
    kind: LaplacianKind,
    eps: Option<f64>,
) -> Result<LaplacianSystem, Error> {
    let dim = field.grid().dim();
    let shifted = dual_shift_field(field)?;
    let mut sys = assemble_normal(&shifted, dim - k, kind, eps)?;
    sys.k = k;
    sys.bc = BoundaryCondition::Tangential;
    if let Some(mass) = sys.mass.as_mut() {
        mass.k = k;
        mass.bc = BoundaryCondition::Tangential;
    }
    Ok(sys)
}

fn assemble_normal(
    field: &ScalarField,
    k: usize,
    kind: LaplacianKind,
    eps: Option<f64>,
) -> Result<LaplacianSystem, Error> {
    let grid = field.grid();
    let dim = grid.dim();
    let l_g = grid.spacing();
    let eps = eps.unwrap_or(DEFAULT_EPS_FACTOR * l_g);
    let mask_k = classify_cells(field, k)?;
    let n_k = mask_k.count();
    let p_k = projection_matrix(&mask_k);

    let mut stiffness = SparseOperator::zeros(n_k, n_k);
    let hodge = kind == LaplacianKind::Hodge;
    let s_k = if hodge {
        Some(hodge_star(field, k, BoundaryCondition::Normal, eps)?)
    } else {
        None
    };

    if k < dim && n_k > 0 {
        let p_k1 = projection_matrix(&classify_cells(field, k + 1)?);
        let d = restricted_coboundary(&grid.coboundary(k)?, &p_k, &p_k1)?;
        let up = if let Some(s_k) = &s_k {
            let s_k1 = hodge_star(field, k + 1, BoundaryCondition::Normal, eps)?;
            // D^T S_{k+1} D
            let _ = s_k;
            d.transpose().matmul(&d.scale_rows(&s_k1.diag))
        } else {
            d.transpose().matmul(&d)
        };
        stiffness = stiffness.add(&up);
    }
    if k > 0 && n_k > 0 {
        let p_km1 = projection_matrix(&classify_cells(field, k - 1)?);
        let b = restricted_coboundary(&grid.coboundary(k - 1)?, &p_km1, &p_k)?;
        let down = if let Some(s_k) = &s_k {
            let s_km1 = hodge_star(field, k - 1, BoundaryCondition::Normal, eps)?;
            // S_k B S_{k-1}^{-1} B^T S_k
            let left = b.scale_rows(&s_k.diag).scale_cols(&s_km1.inverse());
            left.matmul(&b.transpose().scale_cols(&s_k.diag))
        } else {
            b.matmul(&b.transpose())
        };
        stiffness = stiffness.add(&down);
    }

    debug_assert!(stiffness.asymmetry() <= 1e-12 * stiffness.norm_inf().max(1.0));
    let scale = match kind {
        LaplacianKind::Big => 1.0 / (l_g * l_g),
        LaplacianKind::Hodge | LaplacianKind::Combinatorial => 1.0,
    };
    Ok(LaplacianSystem {
        k,
        bc: BoundaryCondition::Normal,
        kind,
        stiffness,
        mass: s_k,
        scale,
    })
}

/// The three reduced spectra.
#[derive(Clone, Debug, Default)]
pub struct NtcSpectra {
    pub n: Vec<f64>,
    pub t: Vec<f64>,
    pub c: Vec<f64>,
}

/// Default relative tolerance for the N/T/C multiset difference.
pub const NTC_MATCH_TOL: f64 = 1e-6;

/// Splits spectra into the N/T/C components: N and T are the nonzero scalar
/// spectra under normal and tangential conditions; C is the nonzero vector
/// spectrum with the scalar-derived values removed by multiset difference.
/// A scalar value inside the vector spectrum's range that finds no match is
/// an inconsistency.
pub fn ntc_split(
    l0n: &[f64],
    l0t: &[f64],
    l_vec: &[f64],
    rel_tol: f64,
) -> Result<NtcSpectra, Error> {
    let scale = [l0n, l0t, l_vec]
        .iter()
        .filter_map(|s| s.last())
        .fold(0.0f64, |a, &b| a.max(b));
    let zero_tol = 1e-7 * scale.max(f64::MIN_POSITIVE);
    let nonzero = |s: &[f64]| -> Vec<f64> {
        let mut v: Vec<f64> = s.iter().cloned().filter(|&x| x > zero_tol).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    };
    let n = nonzero(l0n);
    let t = nonzero(l0t);
    let vec_nz = nonzero(l_vec);

    // pool of scalar-derived values, each consumable once
    let mut pool: Vec<(f64, bool)> = n.iter().chain(t.iter()).map(|&v| (v, false)).collect();
    pool.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut c = Vec::new();
    for &v in &vec_nz {
        let mut matched = false;
        for entry in pool.iter_mut() {
            if entry.1 {
                continue;
            }
            if (entry.0 - v).abs() <= rel_tol * v.max(entry.0) {
                entry.1 = true;
                matched = true;
                break;
            }
            if entry.0 > v * (1.0 + rel_tol) {
                break;
            }
        }
        if !matched {
            c.push(v);
        }
    }
    // scalar values well inside the vector range must have found a partner
    if let Some(&top) = vec_nz.last() {
        for &(v, used) in &pool {
            if !used && v < top * (1.0 - rel_tol) {
                return Err(Error::Numerical(format!(
                    "scalar eigenvalue {v} missing from the vector Laplacian spectrum"
                )));
            }
        }
    }
    Ok(NtcSpectra { n, t, c })
}
