//! Closed-form inverse Fourier transform of a finite translate comb.
//!
//! For `f(x) = Σ_{m=a}^{b} f₀(x − mT)` the transform factorizes into the
//! transform of the generator times a Dirichlet kernel and a phase:
//! `ℱ⁻¹[f](y) = ℱ⁻¹[f₀](y) · sin((b−a+1)πyT)/sin(πyT) · e^{iπyT(a+b)}`,
//! with singular points filled by continuity. The phase follows from the
//! geometric sum `Σ_{q=a}^{b} e^{2πiqyT} = e^{iπyT(a+b)} D_{b−a+1}(πyT)`.

use num_complex::Complex64;

use super::quad::{dirichlet_ratio, sinc};

/// Gaussian-smoothed top-hat generator with its analytic transform.
#[derive(Clone, Copy, Debug)]
pub struct SmoothedTopHat {
    pub sigma: f64,
    pub t1: f64,
}

impl SmoothedTopHat {
    /// `f₀(x)`, the erf-smoothed unit top-hat of width `t1`.
    pub fn eval(&self, x: f64) -> f64 {
        let s = std::f64::consts::SQRT_2 * self.sigma;
        0.5 * (statrs::function::erf::erf((x / self.t1 + 0.5) / s)
            - statrs::function::erf::erf((x / self.t1 - 0.5) / s))
    }

    /// `ℱ⁻¹[f₀](y) = t₁ e^{-2π²σ²(y t₁)²} sinc(π y t₁)`.
    pub fn inverse_transform(&self, y: f64) -> f64 {
        let pi = std::f64::consts::PI;
        self.t1
            * (-2.0 * (pi * self.sigma * y * self.t1).powi(2)).exp()
            * sinc(pi * y * self.t1)
    }
}

/// Closed form for `ℱ⁻¹[Σ_{m=a}^{b} f₀(x − mT)](y)`.
pub fn fourier_comb(f0: &SmoothedTopHat, a: i64, b: i64, period: f64, y: f64) -> Complex64 {
    assert!(a <= b, "comb requires a <= b");
    let n = (b - a + 1) as u32;
    let pi = std::f64::consts::PI;
    let kernel = dirichlet_ratio(n, pi * y * period);
    let phase = Complex64::from_polar(1.0, pi * y * period * (a + b) as f64);
    phase * f0.inverse_transform(y) * kernel
}

/// Trapezoid-rule oracle for the comb transform over a grid of
/// frequencies, `samples` points; the comb is sampled once.
pub fn fourier_comb_numeric_grid(
    f0: &SmoothedTopHat,
    a: i64,
    b: i64,
    period: f64,
    ys: &[f64],
    samples: usize,
) -> Vec<Complex64> {
    // support of the comb padded well past the smoothed edges
    let lo = a as f64 * period - f0.t1 * (0.5 + 40.0 * f0.sigma.max(0.05));
    let hi = b as f64 * period + f0.t1 * (0.5 + 40.0 * f0.sigma.max(0.05));
    let h = (hi - lo) / samples as f64;
    let comb: Vec<f64> = (0..=samples)
        .map(|i| {
            let x = lo + i as f64 * h;
            let w = if i == 0 || i == samples { 0.5 } else { 1.0 };
            w * (a..=b).map(|m| f0.eval(x - m as f64 * period)).sum::<f64>()
        })
        .collect();
    ys.iter()
        .map(|&y| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, &c) in comb.iter().enumerate() {
                let x = lo + i as f64 * h;
                acc += c * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x * y);
            }
            acc * h
        })
        .collect()
}

/// Single-frequency wrapper around [`fourier_comb_numeric_grid`].
pub fn fourier_comb_numeric(
    f0: &SmoothedTopHat,
    a: i64,
    b: i64,
    period: f64,
    y: f64,
    samples: usize,
) -> Complex64 {
    fourier_comb_numeric_grid(f0, a, b, period, &[y], samples)[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_copy_is_pure_phase_shift() {
        let f0 = SmoothedTopHat { sigma: 0.05, t1: 1.0 };
        for &y in &[0.1, 0.5, 1.3] {
            let v = fourier_comb(&f0, 2, 2, 1.5, y);
            let expect = f0.inverse_transform(y);
            assert_abs_diff_eq!(v.norm(), expect.abs(), epsilon = 1e-12);
            let phase = Complex64::from_polar(1.0, std::f64::consts::PI * y * 1.5 * 4.0);
            assert_abs_diff_eq!((v - phase * expect).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_frequency_counts_copies() {
        let f0 = SmoothedTopHat { sigma: 0.05, t1 : 1.0 };
        let v = fourier_comb(&f0, -1, 3, 2.0, 0.0);
        assert_abs_diff_eq!(v.re, 5.0 * f0.inverse_transform(0.0), epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn matches_trapezoid_oracle() {
        let f0 = SmoothedTopHat { sigma: 0.05, t1: 1.0 };
        let v = fourier_comb(&f0, 0, 1, 2.0, 0.3);
        let num = fourier_comb_numeric(&f0, 0, 1, 2.0, 0.3, 1 << 18);
        assert!((v - num).norm() < 1e-8, "closed {v}, numeric {num}");
    }

    #[test]
    fn continuity_at_kernel_singularities() {
        let f0 = SmoothedTopHat { sigma: 0.03, t1: 1.0 };
        // y·T integer: sin(πyT) = 0 but the comb transform stays finite
        let t = 2.0;
        let v_at = fourier_comb(&f0, 0, 3, t, 0.5);
        let v_near = fourier_comb(&f0, 0, 3, t, 0.5 + 1e-9);
        assert!(v_at.is_finite());
        assert!((v_at - v_near).norm() < 1e-6);
    }
}
