//! Dense numeric helpers: Hermitian eigendecompositions, matrix functions
//! and Gram-Schmidt completion.

use num_complex::Complex64;

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi
/// rotations; eigenvalues ascending, eigenvectors as columns (row-major).
pub fn symmetric_eigen(mat: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = mat.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = mat.iter().map(|x| x.abs()).fold(0.0, f64::max).max(1.0);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(a[p * n + q].abs());
            }
        }
        if off < 1e-17 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-18 * scale {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x * n + x].total_cmp(&a[y * n + y]));
    let mut vals = Vec::with_capacity(n);
    let mut vecs = vec![0.0; n * n];
    for (k, &i) in order.iter().enumerate() {
        vals.push(a[i * n + i]);
        for r in 0..n {
            vecs[r * n + k] = v[r * n + i];
        }
    }
    (vals, vecs)
}

/// Eigendecomposition of a complex Hermitian matrix (row-major entries).
///
/// Uses the real-symmetric embedding `[[A, -B], [B, A]]` of `H = A + iB`;
/// the doubled spectrum is thinned by pairing and the complex eigenvectors
/// are recovered as `u + iv`. Returns (eigenvalues ascending, eigenvectors
/// as columns, row-major complex).
pub fn hermitian_eigen(h: &[Complex64], n: usize) -> (Vec<f64>, Vec<Complex64>) {
    let mut big = vec![0.0f64; (2 * n) * (2 * n)];
    for i in 0..n {
        for j in 0..n {
            let z = h[i * n + j];
            big[i * 2 * n + j] = z.re;
            big[i * 2 * n + (n + j)] = -z.im;
            big[(n + i) * 2 * n + j] = z.im;
            big[(n + i) * 2 * n + (n + j)] = z.re;
        }
    }
    let (vals, vecs) = symmetric_eigen(&big, 2 * n);

    // Each eigenvalue appears twice; pick one representative per pair and
    // orthonormalize the recovered complex vectors within degenerate groups.
    let mut out_vals: Vec<f64> = Vec::with_capacity(n);
    let mut out_vecs: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for k in 0..2 * n {
        if out_vals.len() == n {
            break;
        }
        let lam = vals[k];
        let mut v: Vec<Complex64> = (0..n)
            .map(|r| Complex64::new(vecs[r * 2 * n + k], vecs[(n + r) * 2 * n + k]))
            .collect();
        // project out previously accepted vectors (handles the pair copies)
        for prev in &out_vecs {
            let ip: Complex64 = prev.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, pi) in v.iter_mut().zip(prev) {
                *vi -= ip * pi;
            }
        }
        let nrm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if nrm < 1e-8 {
            continue; // copy of an already-accepted eigenvector
        }
        for vi in &mut v {
            *vi /= nrm;
        }
        out_vals.push(lam);
        out_vecs.push(v);
    }
    assert_eq!(out_vals.len(), n, "hermitian eigenbasis incomplete");
    let mut flat = vec![Complex64::new(0.0, 0.0); n * n];
    for (k, v) in out_vecs.iter().enumerate() {
        for r in 0..n {
            flat[r * n + k] = v[r];
        }
    }
    (out_vals, flat)
}

/// `exp(-i t H)` for Hermitian `H` (row-major).
pub fn hermitian_exp(h: &[Complex64], n: usize, t: f64) -> Vec<Complex64> {
    let (vals, vecs) = hermitian_eigen(h, n);
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        let phase = Complex64::from_polar(1.0, -t * vals[k]);
        for i in 0..n {
            let vik = vecs[i * n + k];
            if vik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += phase * vik * vecs[j * n + k].conj();
            }
        }
    }
    out
}

/// Symmetric PSD square root of a real symmetric matrix (row-major).
///
/// Eigenvalues slightly below zero (within `clip`) are clamped; anything
/// more negative is reported as an error.
pub fn symmetric_sqrt_psd(mat: &[f64], n: usize, clip: f64) -> Result<Vec<f64>, f64> {
    let (vals, vecs) = symmetric_eigen(mat, n);
    if let Some(&worst) = vals.first() {
        if worst < -clip {
            return Err(worst);
        }
    }
    let mut out = vec![0.0; n * n];
    for k in 0..n {
        let s = vals[k].max(0.0).sqrt();
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] += s * vecs[i * n + k] * vecs[j * n + k];
            }
        }
    }
    Ok(out)
}

/// Largest eigenvalue of a real symmetric matrix.
pub fn symmetric_lambda_max(mat: &[f64], n: usize) -> f64 {
    let (vals, _) = symmetric_eigen(mat, n);
    *vals.last().expect("nonempty spectrum")
}

/// Complete a partial orthonormal column set to a full unitary basis.
///
/// `cols` holds orthonormal columns of length `dim`. Candidate canonical
/// basis vectors are orthogonalized against the current set (modified
/// Gram-Schmidt, two passes) and kept when their residual norm exceeds
/// `1e-8`; the input columns are returned untouched.
pub fn complete_orthonormal_columns(
    cols: &[Vec<Complex64>],
    dim: usize,
) -> Vec<Vec<Complex64>> {
    let mut all: Vec<Vec<Complex64>> = cols.to_vec();
    for seed in 0..dim {
        if all.len() == dim {
            break;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[seed] = Complex64::new(1.0, 0.0);
        for _pass in 0..2 {
            for b in &all {
                let ip: Complex64 = b.iter().zip(&v).map(|(a, x)| a.conj() * x).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= ip * bi;
                }
            }
        }
        let nrm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if nrm < 1e-8 {
            continue;
        }
        for vi in &mut v {
            *vi /= nrm;
        }
        all.push(v);
    }
    assert_eq!(all.len(), dim, "basis completion fell short");
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hermitian_eigen_reconstructs() {
        let n = 4;
        let mut h = vec![Complex64::new(0.0, 0.0); n * n];
        // fixed Hermitian test matrix
        let entries = [
            (0, 0, 1.0, 0.0),
            (1, 1, -0.5, 0.0),
            (2, 2, 2.0, 0.0),
            (3, 3, 0.3, 0.0),
            (0, 1, 0.4, 0.2),
            (0, 2, -0.1, 0.7),
            (1, 3, 0.9, -0.3),
            (2, 3, 0.2, 0.1),
        ];
        for &(i, j, re, im) in &entries {
            h[i * n + j] = Complex64::new(re, im);
            if i != j {
                h[j * n + i] = Complex64::new(re, -im);
            }
        }
        let (vals, vecs) = hermitian_eigen(&h, n);
        let mut recon = vec![Complex64::new(0.0, 0.0); n * n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    recon[i * n + j] += vals[k] * vecs[i * n + k] * vecs[j * n + k].conj();
                }
            }
        }
        for i in 0..n * n {
            assert_abs_diff_eq!(recon[i].re, h[i].re, epsilon = 1e-10);
            assert_abs_diff_eq!(recon[i].im, h[i].im, epsilon = 1e-10);
        }
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let n = 3;
        let h = vec![Complex64::new(0.0, 0.0); n * n];
        let e = hermitian_exp(&h, n, 1.7);
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(e[i * n + j].re, want, epsilon = 1e-12);
                assert_abs_diff_eq!(e[i * n + j].im, 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn sqrt_squares_back() {
        let n = 3;
        let m = vec![2.0, 1.0, 0.0, 1.0, 2.0, 0.5, 0.0, 0.5, 1.5];
        let s = symmetric_sqrt_psd(&m, n, 1e-12).unwrap();
        let mut sq = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    sq[i * n + j] += s[i * n + k] * s[k * n + j];
                }
            }
        }
        for i in 0..n * n {
            assert_abs_diff_eq!(sq[i], m[i], epsilon = 1e-10);
        }
    }
}
