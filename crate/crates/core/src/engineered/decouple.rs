//! Oscillatory decoupling integrals: the residual overlaps between the
//! spectral trial solutions are driven to zero by a relative phase `λ`.

use num_complex::Complex64;

use super::quad::{dirichlet_ratio, integrate_with_breakpoints, lattice_breakpoints, sinc};
use super::EngineeredError;

/// Coefficients of the two decoupling integral families.
#[derive(Clone, Copy, Debug)]
pub struct DecoupleCoeffs {
    pub a: f64,
    pub sigma: f64,
    pub b1: u32,
    pub c1: u32,
    pub d1: u32,
    pub b2: u32,
    pub c2: u32,
    pub d2: u32,
    pub h1: f64,
    pub h2: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoupleCase {
    /// Smooth product kernel.
    One,
    /// Product of two principal square roots (sign kinks at kernel zeros).
    Two,
}

impl DecoupleCoeffs {
    fn validate(&self, case: DecoupleCase) -> Result<(), EngineeredError> {
        if self.h2 == 0.0 {
            return Err(EngineeredError::ZeroDecayCoefficient);
        }
        assert!(self.d1 > 0 && self.c1 % self.d1 == 0, "C1/D1 must be integral");
        if case == DecoupleCase::Two {
            assert!(self.d2 > 0 && self.c2 % self.d2 == 0, "C2/D2 must be integral");
        }
        Ok(())
    }

    fn x_max(&self) -> f64 {
        (42.0f64 / 2.0).sqrt() / (std::f64::consts::PI * self.a * self.sigma)
    }

    fn kernel1(&self, x: f64) -> f64 {
        let pi = std::f64::consts::PI;
        sinc(pi * self.b1 as f64 * x) * dirichlet_ratio(self.c1 / self.d1, pi * self.d1 as f64 * x)
    }

    fn kernel2(&self, x: f64) -> f64 {
        let pi = std::f64::consts::PI;
        sinc(pi * self.b2 as f64 * x) * dirichlet_ratio(self.c2 / self.d2, pi * self.d2 as f64 * x)
    }

    fn gauss(&self, x: f64) -> f64 {
        (-2.0 * (std::f64::consts::PI * self.a * self.sigma * x).powi(2)).exp()
    }
}

/// `|∫ dx (kernel) e^{-2(πAσ)²x²} e^{i(H₁ + H₂λ)x}|` for the given case.
pub fn phase_decoupling_f(
    case: DecoupleCase,
    coeffs: &DecoupleCoeffs,
    lambda: f64,
) -> Result<f64, EngineeredError> {
    coeffs.validate(case)?;
    let omega = coeffs.h1 + coeffs.h2 * lambda;
    let xmax = coeffs.x_max();
    // panels small enough to resolve both the kernels and the phase
    let kernel_splits = (coeffs.b1 * coeffs.c1).max(coeffs.b2 * coeffs.c2).max(1);
    let phase_splits = (4.0 * omega.abs() / (2.0 * std::f64::consts::PI)).ceil() as u32;
    let bp = lattice_breakpoints(-xmax, xmax, kernel_splits.max(phase_splits).max(1));
    let c = *coeffs;
    let value = |part: fn(Complex64) -> f64| -> Result<f64, EngineeredError> {
        let f = move |x: f64| {
            let kernel = match case {
                DecoupleCase::One => Complex64::new(c.kernel1(x), 0.0),
                DecoupleCase::Two => {
                    let f1 = Complex64::new(c.kernel1(x), 0.0).sqrt();
                    let f2 = Complex64::new(c.kernel2(x), 0.0).sqrt();
                    f1 * f2.conj()
                }
            };
            part(kernel * c.gauss(x) * Complex64::from_polar(1.0, omega * x))
        };
        Ok(integrate_with_breakpoints(f, -xmax, xmax, &bp)?)
    };
    let re = value(|z| z.re)?;
    let im = value(|z| z.im)?;
    Ok((re * re + im * im).sqrt())
}

/// Double `λ` until the decoupling integral drops below `tol`.
pub fn decoupling_lambda(
    case: DecoupleCase,
    coeffs: &DecoupleCoeffs,
    tol: f64,
) -> Result<f64, EngineeredError> {
    let mut lambda = 1.0;
    for _ in 0..32 {
        if phase_decoupling_f(case, coeffs, lambda)? < tol {
            return Ok(lambda);
        }
        lambda *= 2.0;
    }
    Err(EngineeredError::GridUnderResolved(lambda))
}
