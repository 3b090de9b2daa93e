//! Generalized symmetric eigensolver for `L x = λ S x` with positive
//! diagonal mass `S`.
//!
//! Small systems (n ≤ 2000) are whitened by `S^{-1/2}` and handed to a dense
//! self-adjoint eigendecomposition. Larger systems use shift-invert Lanczos
//! in the S-inner product with full reorthogonalization: `K = L + σS` is
//! factored once by sparse Cholesky and the iteration targets the largest
//! eigenvalues of `K^{-1}S`, which are the smallest of the pencil.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::Side;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::sparse::SparseOperator;

/// Systems at or below this size take the dense path.
pub const DENSE_LIMIT: usize = 2000;
/// Default relative residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Relative shift for the shift-invert factorization.
const SHIFT_FACTOR: f64 = 1e-8;
/// Eigenvalues below this fraction of the spectral scale count as kernel.
const KERNEL_REL_TOL: f64 = 1e-7;

#[derive(Clone, Debug)]
pub struct SpectrumResult {
    /// Ascending generalized eigenvalues.
    pub eigenvalues: Vec<f64>,
    /// Matching eigenvectors (columns of the pencil problem).
    pub eigenvectors: Vec<Vec<f64>>,
    /// Relative residual ‖Lx − λSx‖ / (‖L‖·‖x‖) per pair.
    pub residuals: Vec<f64>,
    /// Number of numerically-zero eigenvalues.
    pub kernel_dim: usize,
    /// Set when an eigenvalue sits too close to the zero threshold to call.
    pub kernel_indeterminate: bool,
}

/// Splits eigenvalues into kernel and non-kernel below a threshold relative
/// to the characteristic magnitude of the pencil; the boolean flags values
/// within a factor of 10 of the threshold, where the split is not trustworthy.
pub fn kernel_dimension(eigenvalues: &[f64], characteristic: f64) -> (usize, bool) {
    let thresh = KERNEL_REL_TOL * characteristic;
    let count = eigenvalues.iter().filter(|&&v| v < thresh).count();
    let ambiguous = eigenvalues
        .iter()
        .any(|&v| v >= 0.1 * thresh && v <= 10.0 * thresh);
    (count, ambiguous)
}

fn characteristic_scale(l: &SparseOperator, mass: Option<&[f64]>) -> f64 {
    let norm = l.norm_inf();
    match mass {
        None => norm.max(f64::MIN_POSITIVE),
        Some(s) => {
            let mean = s.iter().sum::<f64>() / s.len().max(1) as f64;
            (norm / mean).max(f64::MIN_POSITIVE)
        }
    }
}

/// Computes the `m` smallest generalized eigenpairs of `L x = λ S x`.
/// `mass = None` means the identity. `tol` bounds the relative residual of
/// every returned pair.
pub fn smallest_eigenpairs(
    l: &SparseOperator,
    mass: Option<&[f64]>,
    m: usize,
    tol: f64,
) -> Result<SpectrumResult, Error> {
    let n = l.nrows();
    if l.ncols() != n {
        return Err(Error::InvalidInput("eigenproblem matrix must be square".into()));
    }
    if let Some(s) = mass {
        if s.len() != n {
            return Err(Error::InvalidInput("mass diagonal length mismatch".into()));
        }
        if s.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::InvalidInput("mass diagonal must be positive".into()));
        }
    }
    if m > n {
        return Err(Error::InvalidInput(format!(
            "requested {m} eigenpairs from a system of size {n}"
        )));
    }
    if m == 0 {
        return Ok(SpectrumResult {
            eigenvalues: vec![],
            eigenvectors: vec![],
            residuals: vec![],
            kernel_dim: 0,
            kernel_indeterminate: false,
        });
    }
    let mut result = if n <= DENSE_LIMIT {
        dense_path(l, mass, m)?
    } else {
        lanczos_path(l, mass, m, tol)?
    };
    let worst = result.residuals.iter().cloned().fold(0.0, f64::max);
    if worst > tol {
        return Err(Error::Numerical(format!(
            "eigensolver residual {worst:.3e} exceeds tolerance {tol:.3e}"
        )));
    }
    let (kdim, ambiguous) = kernel_dimension(&result.eigenvalues, characteristic_scale(l, mass));
    result.kernel_dim = kdim;
    result.kernel_indeterminate = ambiguous;
    Ok(result)
}

fn residual(l: &SparseOperator, mass: Option<&[f64]>, lambda: f64, x: &[f64]) -> f64 {
    let lx = l.mul_vec(x);
    let norm_l = l.norm_inf().max(f64::MIN_POSITIVE);
    let mut num = 0.0;
    let mut xn = 0.0;
    for i in 0..x.len() {
        let s = mass.map_or(1.0, |s| s[i]);
        let r = lx[i] - lambda * s * x[i];
        num += r * r;
        xn += x[i] * x[i];
    }
    (num.sqrt()) / (norm_l * xn.sqrt().max(f64::MIN_POSITIVE))
}

/// Dense whitened path, exposed for cross-validation against the iterative
/// path on systems where both are feasible.
pub fn dense_path(
    l: &SparseOperator,
    mass: Option<&[f64]>,
    m: usize,
) -> Result<SpectrumResult, Error> {
    let n = l.nrows();
    let inv_sqrt: Vec<f64> = match mass {
        None => vec![1.0; n],
        Some(s) => s.iter().map(|v| 1.0 / v.sqrt()).collect(),
    };
    let whitened = l.scale_rows(&inv_sqrt).scale_cols(&inv_sqrt);
    let dense = whitened.to_dense();
    let evd = dense
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("dense eigendecomposition failed: {e:?}")))?;
    let s = evd.S();
    let u = evd.U();
    let mut eigenvalues = Vec::with_capacity(m);
    let mut eigenvectors = Vec::with_capacity(m);
    let mut residuals = Vec::with_capacity(m);
    for j in 0..m {
        let lambda = s[j];
        let x: Vec<f64> = (0..n).map(|i| u[(i, j)] * inv_sqrt[i]).collect();
        residuals.push(residual(l, mass, lambda, &x));
        eigenvalues.push(lambda);
        eigenvectors.push(x);
    }
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors,
        residuals,
        kernel_dim: 0,
        kernel_indeterminate: false,
    })
}

fn to_faer_csc(l: &SparseOperator, shift: f64, mass: Option<&[f64]>) -> Result<SparseColMat<usize, f64>, Error> {
    let n = l.nrows();
    let mut triplets: Vec<Triplet<usize, usize, f64>> = Vec::with_capacity(l.nnz() + n);
    for (r, c, v) in l.iter() {
        triplets.push(Triplet::new(r, c, v));
    }
    for i in 0..n {
        let s = mass.map_or(1.0, |s| s[i]);
        triplets.push(Triplet::new(i, i, shift * s));
    }
    SparseColMat::try_new_from_triplets(n, n, &triplets)
        .map_err(|e| Error::Numerical(format!("sparse matrix assembly failed: {e:?}")))
}

/// Shift-invert Lanczos path, exposed for cross-validation against the
/// dense path on systems where both are feasible.
pub fn lanczos_path(
    l: &SparseOperator,
    mass: Option<&[f64]>,
    m: usize,
    tol: f64,
) -> Result<SpectrumResult, Error> {
    let n = l.nrows();
    let trace_l: f64 = (0..n).map(|i| l.get(i, i)).sum();
    let trace_s: f64 = match mass {
        None => n as f64,
        Some(s) => s.iter().sum(),
    };
    let sigma = (SHIFT_FACTOR * trace_l / trace_s).max(f64::MIN_POSITIVE);
    let mut llt = None;
    let mut shift = sigma;
    for boost in 0..4 {
        shift = sigma * 1000f64.powi(boost);
        match to_faer_csc(l, shift, mass)?.sp_cholesky(Side::Lower) {
            Ok(f) => {
                llt = Some(f);
                break;
            }
            Err(_) if boost < 3 => continue,
            Err(e) => {
                return Err(Error::Numerical(format!(
                    "shift-invert factorization failed: {e:?}"
                )))
            }
        }
    }
    let llt = llt.unwrap();
    let sigma = shift;

    let sdot = |a: &[f64], b: &[f64]| -> f64 {
        match mass {
            None => a.iter().zip(b).map(|(x, y)| x * y).sum(),
            Some(s) => a.iter().zip(b).zip(s).map(|((x, y), w)| x * y * w).sum(),
        }
    };
    let apply = |v: &[f64]| -> Vec<f64> {
        // K^{-1} S v
        let mut rhs = faer::Mat::<f64>::zeros(n, 1);
        for i in 0..n {
            rhs[(i, 0)] = mass.map_or(v[i], |s| s[i] * v[i]);
        }
        let sol = llt.solve(&rhs);
        (0..n).map(|i| sol[(i, 0)]).collect()
    };

    let base = (2 * m + 10).max(50).min(n);
    let mut last_err = 0.0;
    for attempt in 0..3 {
        let ncv = (base << attempt).min(n);
        let out = lanczos_run(l, mass, m, ncv, sigma, &sdot, &apply)?;
        let worst = out.residuals.iter().cloned().fold(0.0, f64::max);
        if worst <= tol || ncv == n {
            return Ok(out);
        }
        last_err = worst;
    }
    Err(Error::Numerical(format!(
        "Lanczos did not converge: residual {last_err:.3e} > {tol:.3e}"
    )))
}

#[allow(clippy::too_many_arguments)]
fn lanczos_run(
    l: &SparseOperator,
    mass: Option<&[f64]>,
    m: usize,
    ncv: usize,
    sigma: f64,
    sdot: &dyn Fn(&[f64], &[f64]) -> f64,
    apply: &dyn Fn(&[f64]) -> Vec<f64>,
) -> Result<SpectrumResult, Error> {
    let n = l.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(ncv);
    let mut alphas = Vec::with_capacity(ncv);
    let mut betas = Vec::with_capacity(ncv);

    let fresh = |rng: &mut ChaCha8Rng, basis: &[Vec<f64>]| -> Option<Vec<f64>> {
        for _ in 0..20 {
            let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for b in basis {
                let c = sdot(&v, b);
                for i in 0..n {
                    v[i] -= c * b[i];
                }
            }
            let norm = sdot(&v, &v).sqrt();
            if norm > 1e-12 {
                for x in v.iter_mut() {
                    *x /= norm;
                }
                return Some(v);
            }
        }
        None
    };

    let v0 = fresh(&mut rng, &basis)
        .ok_or_else(|| Error::Numerical("could not generate a start vector".into()))?;
    basis.push(v0);
    for j in 0..ncv {
        let mut w = apply(&basis[j]);
        let alpha = sdot(&w, &basis[j]);
        for i in 0..n {
            w[i] -= alpha * basis[j][i];
        }
        if j > 0 {
            let beta_prev: f64 = betas[j - 1];
            for i in 0..n {
                w[i] -= beta_prev * basis[j - 1][i];
            }
        }
        // full reorthogonalization, two passes
        for _ in 0..2 {
            for b in &basis {
                let c = sdot(&w, b);
                for i in 0..n {
                    w[i] -= c * b[i];
                }
            }
        }
        alphas.push(alpha);
        if j + 1 == ncv {
            break;
        }
        let beta = sdot(&w, &w).sqrt();
        if beta > 1e-13 * alpha.abs().max(1.0) {
            for x in w.iter_mut() {
                *x /= beta;
            }
            betas.push(beta);
            basis.push(w);
        } else {
            // invariant subspace found; restart the recurrence orthogonally
            match fresh(&mut rng, &basis) {
                Some(v) => {
                    betas.push(0.0);
                    basis.push(v);
                }
                None => break,
            }
        }
    }

    let steps = alphas.len();
    let mut t = faer::Mat::<f64>::zeros(steps, steps);
    for j in 0..steps {
        t[(j, j)] = alphas[j];
        if j + 1 < steps {
            t[(j, j + 1)] = betas[j];
            t[(j + 1, j)] = betas[j];
        }
    }
    let evd = t
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("tridiagonal eigensolve failed: {e:?}")))?;
    let thetas = evd.S();
    let y = evd.U();

    // largest θ of K^{-1}S are the smallest λ of the pencil
    let take = m.min(steps);
    let mut eigenvalues = Vec::with_capacity(take);
    let mut eigenvectors = Vec::with_capacity(take);
    let mut residuals = Vec::with_capacity(take);
    for idx in 0..take {
        let col = steps - 1 - idx;
        let theta = thetas[col];
        if !(theta > 0.0) {
            return Err(Error::Numerical(format!(
                "non-positive Ritz value {theta} in shift-inverted operator"
            )));
        }
        let lambda = 1.0 / theta - sigma;
        let mut x = vec![0.0; n];
        for (j, b) in basis.iter().enumerate().take(steps) {
            let c = y[(j, col)];
            for i in 0..n {
                x[i] += c * b[i];
            }
        }
        residuals.push(residual(l, mass, lambda, &x));
        eigenvalues.push(lambda);
        eigenvectors.push(x);
    }
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors,
        residuals,
        kernel_dim: 0,
        kernel_indeterminate: false,
    })
}
