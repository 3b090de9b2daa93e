//! Exact continuum reference spectra: Bessel-zero spectra of the disk,
//! separable box spectra, and spherical Bessel spectra of the ball and
//! spherical shell, for anchoring convergence tests.
//!
//! Roots are bracketed by scanning and polished by bisection to ~1e-12;
//! Bessel evaluations use the stable downward (Miller) recurrences.

use crate::error::Error;

/// Continuum boundary condition for scalar spectra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactBc {
    Dirichlet,
    Neumann,
}

/// J_0..J_nmax at x by Miller's downward recurrence.
fn bessel_j_seq(nmax: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; nmax + 1];
        out[0] = 1.0;
        return out;
    }
    let start = (nmax.max(x.abs() as usize) + 42) & !1; // even
    let mut bp = 0.0f64;
    let mut b = 1e-30f64;
    let mut out = vec![0.0; nmax + 1];
    let mut norm = 0.0;
    for k in (0..start).rev() {
        let bm = (2.0 * (k as f64 + 1.0)) / x * b - bp;
        bp = b;
        b = bm;
        if k % 2 == 0 && k > 0 {
            norm += 2.0 * b;
        }
        if k <= nmax {
            out[k] = b;
        }
        if b.abs() > 1e100 {
            bp /= 1e100;
            b /= 1e100;
            norm /= 1e100;
            for v in out.iter_mut() {
                *v /= 1e100;
            }
        }
    }
    norm += b; // J_0 term
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

/// Bessel function of the first kind J_n(x).
pub fn bessel_j(n: usize, x: f64) -> f64 {
    let v = bessel_j_seq(n, x.abs())[n];
    if x < 0.0 && n % 2 == 1 {
        -v
    } else {
        v
    }
}

/// d/dx J_n(x).
pub fn bessel_j_prime(n: usize, x: f64) -> f64 {
    if n == 0 {
        -bessel_j(1, x)
    } else {
        let seq = bessel_j_seq(n + 1, x);
        0.5 * (seq[n - 1] - seq[n + 1])
    }
}

/// Refines a bracketed sign change by bisection.
fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    debug_assert!(flo * f(hi) <= 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < 1e-13 * mid.max(1.0) {
            return mid;
        }
        let fm = f(mid);
        if flo * fm <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}

/// First `count` positive roots of `f`, scanning upward from `start` in
/// steps of `step`.
fn scan_roots(f: &dyn Fn(f64) -> f64, start: f64, step: f64, count: usize) -> Vec<f64> {
    let mut roots = Vec::with_capacity(count);
    let mut x = start;
    let mut fx = f(x);
    let mut guard = 0usize;
    while roots.len() < count {
        let x2 = x + step;
        let f2 = f(x2);
        if fx == 0.0 {
            roots.push(x);
        } else if fx * f2 < 0.0 {
            roots.push(bisect(f, x, x2));
        }
        x = x2;
        fx = f2;
        guard += 1;
        assert!(guard < 2_000_000, "root scan ran away");
    }
    roots
}

/// First `count` positive zeros of J_n, ascending.
pub fn bessel_zeros(n: usize, count: usize) -> Vec<f64> {
    if count == 0 {
        return vec![];
    }
    // the first zero exceeds n; zero spacing is at least ~3
    scan_roots(&|x| bessel_j(n, x), (n as f64).max(0.1), 0.5, count)
}

/// Merges per-order root lists (λ = (root/r)², multiplicity per order) into
/// the sorted first `m` eigenvalues. `roots_for(order, count)` must return
/// ascending positive roots; orders are exhausted once their first root can
/// no longer contribute.
fn merge_orders(
    r: f64,
    m: usize,
    zero_count: usize,
    multiplicity: &dyn Fn(usize) -> usize,
    roots_for: &dyn Fn(usize, usize) -> Vec<f64>,
) -> Vec<f64> {
    let mut all: Vec<f64> = Vec::new();
    let mut order = 0usize;
    loop {
        let roots = roots_for(order, m);
        let first = roots.first().copied().unwrap_or(f64::INFINITY);
        // once we already hold m values all below this order's first root,
        // no later order can contribute (first roots increase with order)
        all.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let lam_first = (first / r).powi(2);
        if all.len() >= m && all[m - 1] <= lam_first {
            break;
        }
        for root in roots {
            let lam = (root / r).powi(2);
            for _ in 0..multiplicity(order) {
                all.push(lam);
            }
        }
        order += 1;
        assert!(order < 1000, "order loop ran away");
    }
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    all.truncate(m);
    let mut out = vec![0.0; zero_count.min(m)];
    out.extend_from_slice(&all[..m.saturating_sub(zero_count)]);
    out
}

/// Scalar Laplacian spectrum of the disk of radius `r`.
pub fn disk_spectrum(r: f64, bc: ExactBc, m: usize) -> Result<Vec<f64>, Error> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput("disk radius must be positive".into()));
    }
    if m == 0 {
        return Ok(vec![]);
    }
    let zeros = match bc {
        ExactBc::Dirichlet => 0,
        ExactBc::Neumann => 1,
    };
    let mult = |n: usize| if n == 0 { 1 } else { 2 };
    let roots: Box<dyn Fn(usize, usize) -> Vec<f64>> = match bc {
        ExactBc::Dirichlet => Box::new(|n, c| bessel_zeros(n, c)),
        ExactBc::Neumann => Box::new(|n: usize, c: usize| {
            scan_roots(&move |x| bessel_j_prime(n, x), (n as f64).max(0.1), 0.5, c)
        }),
    };
    Ok(merge_orders(r, m, zeros, &mult, &*roots))
}

/// Separable box spectrum π²Σ(nᵢ/aᵢ)²; Dirichlet has nᵢ ≥ 1, Neumann nᵢ ≥ 0.
pub fn box_spectrum(sides: &[f64], bc: ExactBc, m: usize) -> Result<Vec<f64>, Error> {
    let dim = sides.len();
    if !(dim == 2 || dim == 3) || sides.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::InvalidInput("box needs 2 or 3 positive side lengths".into()));
    }
    if m == 0 {
        return Ok(vec![]);
    }
    let pi = std::f64::consts::PI;
    let min_n = match bc {
        ExactBc::Dirichlet => 1usize,
        ExactBc::Neumann => 0,
    };
    let mut cutoff = pi * pi * dim as f64 / sides.iter().fold(f64::INFINITY, |a, &b| a.min(b)).powi(2);
    loop {
        let mut vals = Vec::new();
        let caps: Vec<usize> = sides
            .iter()
            .map(|&a| (a * cutoff.sqrt() / pi).floor() as usize)
            .collect();
        let mut idx = vec![min_n; dim];
        'outer: loop {
            let lam: f64 = idx
                .iter()
                .zip(sides)
                .map(|(&n, &a)| (pi * n as f64 / a).powi(2))
                .sum();
            if lam <= cutoff {
                vals.push(lam);
            }
            for d in 0..dim {
                if idx[d] < caps[d] {
                    idx[d] += 1;
                    for e in idx.iter_mut().take(d) {
                        *e = min_n;
                    }
                    continue 'outer;
                }
            }
            break;
        }
        if vals.len() >= m {
            vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            vals.truncate(m);
            return Ok(vals);
        }
        cutoff *= 2.0;
    }
}

/// Spherical Bessel functions j_0..j_lmax at x (stable downward recurrence).
fn sph_j_seq(lmax: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; lmax + 1];
        out[0] = 1.0;
        return out;
    }
    let j0 = x.sin() / x;
    if lmax == 0 {
        return vec![j0];
    }
    let start = lmax.max(x.abs() as usize) + 40;
    let mut dp = 0.0f64;
    let mut d = 1e-30f64;
    let mut out = vec![0.0; lmax + 1];
    for k in (0..start).rev() {
        let dm = (2.0 * k as f64 + 3.0) / x * d - dp;
        dp = d;
        d = dm;
        if k <= lmax {
            out[k] = d;
        }
        if d.abs() > 1e100 {
            dp /= 1e100;
            d /= 1e100;
            for v in out.iter_mut() {
                *v /= 1e100;
            }
        }
    }
    // normalize against j0, or j1 when x is near a multiple of pi
    let j1 = x.sin() / (x * x) - x.cos() / x;
    let scale = if j0.abs() > j1.abs() {
        j0 / out[0]
    } else {
        j1 / out[1]
    };
    for v in out.iter_mut() {
        *v *= scale;
    }
    out
}

/// Spherical Bessel j_l(x).
pub fn sph_bessel_j(l: usize, x: f64) -> f64 {
    sph_j_seq(l, x)[l]
}

/// Spherical Bessel y_l(x) (upward recurrence is stable).
pub fn sph_bessel_y(l: usize, x: f64) -> f64 {
    let y0 = -x.cos() / x;
    if l == 0 {
        return y0;
    }
    let y1 = -x.cos() / (x * x) - x.sin() / x;
    let mut ym = y0;
    let mut y = y1;
    for k in 1..l {
        let yn = (2.0 * k as f64 + 1.0) / x * y - ym;
        ym = y;
        y = yn;
    }
    y
}

/// d/dx j_l(x).
pub fn sph_bessel_j_prime(l: usize, x: f64) -> f64 {
    if l == 0 {
        -sph_bessel_j(1, x)
    } else {
        sph_bessel_j(l - 1, x) - (l as f64 + 1.0) / x * sph_bessel_j(l, x)
    }
}

/// d/dx y_l(x).
pub fn sph_bessel_y_prime(l: usize, x: f64) -> f64 {
    if l == 0 {
        -sph_bessel_y(1, x)
    } else {
        sph_bessel_y(l - 1, x) - (l as f64 + 1.0) / x * sph_bessel_y(l, x)
    }
}

/// Scalar Laplacian spectrum of the ball of radius `r`.
pub fn ball_spectrum(r: f64, bc: ExactBc, m: usize) -> Result<Vec<f64>, Error> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput("ball radius must be positive".into()));
    }
    if m == 0 {
        return Ok(vec![]);
    }
    let zeros = match bc {
        ExactBc::Dirichlet => 0,
        ExactBc::Neumann => 1,
    };
    let mult = |l: usize| 2 * l + 1;
    let roots: Box<dyn Fn(usize, usize) -> Vec<f64>> = match bc {
        ExactBc::Dirichlet => Box::new(|l: usize, c: usize| {
            scan_roots(&move |x| sph_bessel_j(l, x), (l as f64).max(0.1), 0.5, c)
        }),
        ExactBc::Neumann => Box::new(|l: usize, c: usize| {
            scan_roots(&move |x| sph_bessel_j_prime(l, x), (l as f64).max(0.1), 0.5, c)
        }),
    };
    Ok(merge_orders(r, m, zeros, &mult, &*roots))
}

/// Scalar Laplacian spectrum of the closed spherical shell with radii
/// `inner < outer`: roots of the cross-product characteristic per angular
/// order l, multiplicity 2l+1.
pub fn shell_spectrum(outer: f64, inner: f64, bc: ExactBc, m: usize) -> Result<Vec<f64>, Error> {
    if !(inner > 0.0 && inner < outer) {
        return Err(Error::InvalidInput("shell needs 0 < inner < outer".into()));
    }
    if m == 0 {
        return Ok(vec![]);
    }
    let (a, b) = (inner, outer);
    let zeros = match bc {
        ExactBc::Dirichlet => 0,
        ExactBc::Neumann => 1,
    };
    let mult = |l: usize| 2 * l + 1;
    let roots: Box<dyn Fn(usize, usize) -> Vec<f64>> = match bc {
        ExactBc::Dirichlet => Box::new(move |l: usize, c: usize| {
            scan_roots(
                &move |k| {
                    sph_bessel_j(l, k * a) * sph_bessel_y(l, k * b)
                        - sph_bessel_j(l, k * b) * sph_bessel_y(l, k * a)
                },
                0.05,
                0.2 / (b - a).max(0.5),
                c,
            )
        }),
        ExactBc::Neumann => Box::new(move |l: usize, c: usize| {
            scan_roots(
                &move |k| {
                    sph_bessel_j_prime(l, k * a) * sph_bessel_y_prime(l, k * b)
                        - sph_bessel_j_prime(l, k * b) * sph_bessel_y_prime(l, k * a)
                },
                0.05,
                0.2 / (b - a).max(0.5),
                c,
            )
        }),
    };
    Ok(merge_orders(1.0, m, zeros, &mult, &*roots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn first_bessel_zeros() {
        let z0 = bessel_zeros(0, 3);
        assert!((z0[0] - 2.404826).abs() < 1e-6);
        assert!((z0[1] - 5.520078).abs() < 1e-6);
        let z1 = bessel_zeros(1, 1);
        assert!((z1[0] - 3.831706).abs() < 1e-6);
    }

    #[test]
    fn zeros_interlace() {
        for n in 0..6usize {
            let zn = bessel_zeros(n, 11);
            let zn1 = bessel_zeros(n + 1, 10);
            for k in 0..10 {
                assert!(zn[k] < zn1[k], "j_{n},{k}");
                assert!(zn1[k] < zn[k + 1], "j_{}-interlace k={k}", n + 1);
            }
        }
    }

    #[test]
    fn disk_dirichlet_first_four() {
        let s = disk_spectrum(1.0, ExactBc::Dirichlet, 4).unwrap();
        let expect = [5.7832, 14.682, 14.682, 26.3746];
        for (v, e) in s.iter().zip(expect) {
            assert!((v - e).abs() < 1e-3, "{v} vs {e}");
        }
    }

    #[test]
    fn disk_scaling() {
        let s1 = disk_spectrum(1.0, ExactBc::Dirichlet, 10).unwrap();
        let s2 = disk_spectrum(2.0, ExactBc::Dirichlet, 10).unwrap();
        for (a, b) in s1.iter().zip(&s2) {
            assert!((a / 4.0 - b).abs() < 1e-9 * a);
        }
    }

    #[test]
    fn disk_multiplicities_nondecreasing() {
        let s = disk_spectrum(1.0, ExactBc::Dirichlet, 40).unwrap();
        assert_eq!(s.len(), 40);
        for w in s.windows(2) {
            assert!(w[1] >= w[0]);
        }
        // brute-force merge oracle over the (n,k) lattice
        let mut oracle = Vec::new();
        for n in 0..30usize {
            for z in bessel_zeros(n, 30) {
                let lam = z * z;
                oracle.push(lam);
                if n > 0 {
                    oracle.push(lam);
                }
            }
        }
        oracle.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in s.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-8 * b, "{a} vs oracle {b}");
        }
    }

    #[test]
    fn square_spectra_match_references() {
        let d = box_spectrum(&[3.0, 3.0], ExactBc::Dirichlet, 4).unwrap();
        for (v, e) in d.iter().zip([2.1932, 5.4831, 5.4831, 8.773]) {
            assert!((v - e).abs() < 5e-4, "{v} vs {e}");
        }
        let n = box_spectrum(&[2.0, 2.0], ExactBc::Neumann, 4).unwrap();
        for (v, e) in n.iter().zip([0.0, 2.4674, 2.4674, 4.9348]) {
            assert!((v - e).abs() < 5e-4, "{v} vs {e}");
        }
    }

    #[test]
    fn unit_cube_dirichlet_ground_state() {
        let s = box_spectrum(&[1.0, 1.0, 1.0], ExactBc::Dirichlet, 1).unwrap();
        assert!((s[0] - 3.0 * PI * PI).abs() < 1e-9);
    }

    #[test]
    fn ball_dirichlet_and_neumann() {
        let d = ball_spectrum(1.0, ExactBc::Dirichlet, 4).unwrap();
        assert!((d[0] - PI * PI).abs() < 1e-8, "{}", d[0]);
        let n = ball_spectrum(1.0, ExactBc::Neumann, 5).unwrap();
        assert_eq!(n[0], 0.0);
        // first positive root of j_1' is 2.081576, triply degenerate
        let first = 2.081576f64.powi(2);
        for k in 1..4 {
            assert!((n[k] - first).abs() < 1e-4, "{} vs {first}", n[k]);
        }
        assert!(n[4] > first + 1e-3);
    }

    #[test]
    fn shell_l0_closed_form() {
        let s = shell_spectrum(1.0, 0.5, ExactBc::Dirichlet, 1).unwrap();
        assert!((s[0] - 4.0 * PI * PI).abs() < 1e-6, "{}", s[0]);
    }

    #[test]
    fn shell_limits_to_ball() {
        let shell = shell_spectrum(1.0, 1e-3, ExactBc::Dirichlet, 6).unwrap();
        let ball = ball_spectrum(1.0, ExactBc::Dirichlet, 6).unwrap();
        for (a, b) in shell.iter().zip(&ball) {
            assert!((a - b).abs() / b < 1e-2, "{a} vs {b}");
        }
    }

    #[test]
    fn shell_multiplicity_pattern() {
        // group the spectrum and check 1,3,5,... degeneracies appear
        let s = shell_spectrum(1.0, 0.5, ExactBc::Dirichlet, 9).unwrap();
        let mut groups: Vec<usize> = Vec::new();
        let mut i = 0;
        while i < s.len() {
            let mut j = i + 1;
            while j < s.len() && (s[j] - s[i]).abs() < 1e-6 * s[i] {
                j += 1;
            }
            groups.push(j - i);
            i = j;
        }
        assert_eq!(groups[0], 1); // l=0
        assert!(groups.contains(&3)); // l=1 triple
    }

    #[test]
    fn spectra_scale_inverse_square() {
        for bc in [ExactBc::Dirichlet, ExactBc::Neumann] {
            let b1 = ball_spectrum(1.0, bc, 8).unwrap();
            let b2 = ball_spectrum(2.0, bc, 8).unwrap();
            for (a, b) in b1.iter().zip(&b2) {
                assert!((a - 4.0 * b).abs() < 1e-6 * a.max(1.0));
            }
        }
    }
}
