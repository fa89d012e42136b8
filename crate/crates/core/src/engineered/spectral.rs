//! Spectral consistency of the engineered clock: the trial energy-space
//! amplitudes are integrated explicitly and compared against the designed
//! overlap functions.
//!
//! Working variable is `y = E·t₁`; all amplitudes are scaled so that norms
//! are plain `∫ dy` integrals. The shared kernel is
//! `S(y) = e^{-2(πN_Tσy)²} sinc(πN_T y) D_n(π(N_T+1)y)`, the signed
//! quantity whose principal square root builds `x̃_l` and `x̄_l`; the
//! ancilla pair uses the analogous coupling kernel.

use num_complex::Complex64;

use super::quad::{dirichlet_ratio, integrate_with_breakpoints, lattice_breakpoints, sinc};
use super::{
    comb_g_sigma, coupling_c0, normalization_n, EngineeredError, EngineeredParams,
};

struct SpectralModel {
    params: EngineeredParams,
    normalization: f64,
    coupling: f64,
}

impl SpectralModel {
    fn new(params: &EngineeredParams) -> Result<Self, EngineeredError> {
        params.validate()?;
        Ok(SpectralModel {
            params: *params,
            normalization: normalization_n(params)?,
            coupling: coupling_c0(params)?,
        })
    }

    fn theta_flag(&self) -> f64 {
        self.params.theta_flag() as f64
    }

    /// Signed overlap kernel of the tick amplitudes.
    fn kernel_overlap(&self, y: f64) -> f64 {
        let pi = std::f64::consts::PI;
        let nt = self.params.n_ticks as f64;
        let n_comb = self.params.x0 + ((self.params.theta_flag() + 1) / 2) as u32;
        (-2.0 * (pi * nt * self.params.sigma * y).powi(2)).exp()
            * sinc(pi * nt * y)
            * dirichlet_ratio(n_comb, pi * (nt + 1.0) * y)
    }

    /// Signed kernel of the ancilla amplitudes.
    fn kernel_coupling(&self, y: f64) -> f64 {
        let pi = std::f64::consts::PI;
        let nt = self.params.n_ticks as f64;
        let n_comb = 2 * self.params.n_ticks + (self.params.x0 - 1) * (self.params.n_ticks + 1);
        (-2.0 * (pi * nt * self.params.sigma * y).powi(2)).exp()
            * sinc(pi * nt * y)
            * dirichlet_ratio(n_comb, pi * y)
    }

    /// Comb phase of `x̄_l` relative to `x̃_l` (argument multiplying `πy`).
    fn overlap_phase_factor(&self, l: u32) -> f64 {
        let nt = self.params.n_ticks as f64;
        let th = self.theta_flag();
        // translate-comb phase (a+b) plus the window shift of outcome l
        let comb = (nt + 1.0) * (self.params.x0 as f64 - 1.0 - (th + 1.0) / 2.0);
        comb + 2.0 * (th * l as f64 + 1.0) + nt
    }

    /// Comb phase of `A_on` relative to `A_off`.
    fn coupling_phase_factor(&self) -> f64 {
        let nt = self.params.n_ticks as f64;
        let th = self.theta_flag();
        let comb = (self.params.x0 as f64 - 1.0) * (nt + 1.0) - th;
        nt + comb
    }

    fn y_max(&self) -> f64 {
        (42.0f64 / 2.0).sqrt()
            / (std::f64::consts::PI * self.params.n_ticks as f64 * self.params.sigma)
    }

    fn oscillatory_integral(
        &self,
        kernel: impl Fn(f64) -> f64 + Copy,
        phase_rate: f64,
        kernel_splits: u32,
    ) -> Result<Complex64, EngineeredError> {
        let ymax = self.y_max();
        let osc = (4.0 * phase_rate.abs() / (2.0 * std::f64::consts::PI)).ceil() as u32;
        let bp = lattice_breakpoints(-ymax, ymax, kernel_splits.max(osc).max(1));
        let re = integrate_with_breakpoints(
            move |y| kernel(y) * (phase_rate * y).cos(),
            -ymax,
            ymax,
            &bp,
        )?;
        let im = integrate_with_breakpoints(
            move |y| kernel(y) * (phase_rate * y).sin(),
            -ymax,
            ymax,
            &bp,
        )?;
        Ok(Complex64::new(re, im))
    }

    /// `⟨x̃_l|x̄_r(t)⟩` by explicit energy integration.
    fn tick_overlap(&self, l: u32, r: u32, t: f64) -> Result<Complex64, EngineeredError> {
        let pi = std::f64::consts::PI;
        let nt = self.params.n_ticks as f64;
        let tau = t / self.params.t1;
        let lambda_rate = (l as f64 - r as f64) * self.params.lambda;
        let rate = pi * self.overlap_phase_factor(r) - 2.0 * pi * tau + lambda_rate;
        let n_comb = self.params.x0 + ((self.params.theta_flag() + 1) / 2) as u32;
        let splits = self.params.n_ticks * n_comb * (self.params.n_ticks + 1);
        let scale = nt / self.normalization;
        let kernel = |y: f64| self.kernel_overlap(y);
        // product of the two principal square roots collapses to the signed
        // kernel when l = r; for l ≠ r the extra λ phase is the integrand's
        // only change
        let v = self.oscillatory_integral(kernel, rate, splits)?;
        Ok(v * scale)
    }

    /// `⟨A_off|A_on(t)⟩` by explicit energy integration.
    fn ancilla_overlap(&self, t: f64) -> Result<Complex64, EngineeredError> {
        let pi = std::f64::consts::PI;
        let nt = self.params.n_ticks as f64;
        let tau = t / self.params.t1;
        let rate = pi * self.coupling_phase_factor() - 2.0 * pi * tau;
        let n_comb = 2 * self.params.n_ticks + (self.params.x0 - 1) * (self.params.n_ticks + 1);
        let splits = self.params.n_ticks * n_comb;
        let scale = self.coupling * nt / self.normalization;
        let kernel = |y: f64| self.kernel_coupling(y);
        let v = self.oscillatory_integral(kernel, rate, splits)?;
        Ok(v * scale)
    }

    fn tick_norm(&self) -> Result<f64, EngineeredError> {
        let ymax = self.y_max();
        let n_comb = self.params.x0 + ((self.params.theta_flag() + 1) / 2) as u32;
        let splits = self.params.n_ticks * n_comb * (self.params.n_ticks + 1);
        let bp = lattice_breakpoints(-ymax, ymax, splits);
        let scale = self.params.n_ticks as f64 / self.normalization;
        Ok(scale
            * integrate_with_breakpoints(|y| self.kernel_overlap(y).abs(), -ymax, ymax, &bp)?)
    }

    fn ancilla_norm(&self) -> Result<f64, EngineeredError> {
        let ymax = self.y_max();
        let n_comb = 2 * self.params.n_ticks + (self.params.x0 - 1) * (self.params.n_ticks + 1);
        let splits = self.params.n_ticks * n_comb;
        let bp = lattice_breakpoints(-ymax, ymax, splits);
        let scale = self.coupling.abs() * self.params.n_ticks as f64 / self.normalization;
        Ok(scale
            * integrate_with_breakpoints(|y| self.kernel_coupling(y).abs(), -ymax, ymax, &bp)?)
    }

    fn overlap_target(&self, l: u32, t: f64) -> f64 {
        let shift = (self.theta_flag() * l as f64 + 1.0) * self.params.t1;
        comb_g_sigma(
            &self.params,
            (t - shift) / self.params.n_ticks as f64 - self.params.t1 / 2.0,
        ) / self.normalization
    }

    fn ancilla_target(&self, t: f64) -> f64 {
        let sum: f64 = (0..=self.params.n_ticks)
            .map(|l| self.overlap_target(l, t))
            .sum();
        self.coupling * sum
    }
}

/// Report of the spectral consistency check.
#[derive(Clone, Copy, Debug)]
pub struct SpectralReport {
    /// Max deviation of `⟨x̃_l|x̄_l(t)⟩` from its designed overlap.
    pub max_overlap_deviation: f64,
    /// Max deviation of `⟨A_off|A_on(t)⟩` from the coupled comb target.
    pub max_ancilla_deviation: f64,
    /// Worst `|norm - 1|` over all constructed amplitudes.
    pub max_norm_deviation: f64,
}

impl SpectralReport {
    pub fn max_deviation(&self) -> f64 {
        self.max_overlap_deviation.max(self.max_ancilla_deviation)
    }
}

/// Build the spectral amplitudes and compare every designed overlap on a
/// `t`-grid of `grid` points across the operating window.
pub fn spectral_overlap_check(
    params: &EngineeredParams,
    grid: usize,
) -> Result<SpectralReport, EngineeredError> {
    let model = SpectralModel::new(params)?;
    let window = params.x0 as f64 * params.period();
    let mut overlap_dev = 0.0f64;
    let mut ancilla_dev = 0.0f64;
    for i in 0..grid {
        let t = window * (i as f64 + 0.5) / grid as f64;
        for l in 0..=params.n_ticks {
            let got = model.tick_overlap(l, l, t)?;
            let want = model.overlap_target(l, t);
            overlap_dev = overlap_dev.max((got - want).norm());
        }
        let got = model.ancilla_overlap(t)?;
        let want = model.ancilla_target(t);
        ancilla_dev = ancilla_dev.max((got - want).norm());
    }
    let mut norm_dev = (model.tick_norm()? - 1.0).abs();
    norm_dev = norm_dev.max((model.ancilla_norm()? - 1.0).abs());
    Ok(SpectralReport {
        max_overlap_deviation: overlap_dev,
        max_ancilla_deviation: ancilla_dev,
        max_norm_deviation: norm_dev,
    })
}

/// `|⟨x̃_l|x̄_r(t)⟩|` for `l ≠ r` at the spec's decoupling phase λ.
pub fn cross_overlap(
    params: &EngineeredParams,
    l: u32,
    r: u32,
    t: f64,
) -> Result<f64, EngineeredError> {
    let model = SpectralModel::new(params)?;
    Ok(model.tick_overlap(l, r, t)?.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_tick_overlaps_match_targets() {
        let params = EngineeredParams {
            sigma: 0.019,
            n_ticks: 1,
            x0: 1,
            theta: std::f64::consts::FRAC_PI_4,
            t1: 1.0,
            lambda: 0.0,
        };
        let report = spectral_overlap_check(&params, 8).unwrap();
        assert!(report.max_deviation() < 1e-7, "{report:?}");
        assert!(report.max_norm_deviation < 1e-8, "{report:?}");
    }

    #[test]
    fn cross_overlap_decays_with_lambda() {
        let mut params = EngineeredParams {
            sigma: 0.05,
            n_ticks: 1,
            x0: 1,
            theta: std::f64::consts::FRAC_PI_4,
            t1: 1.0,
            lambda: 0.0,
        };
        let near = cross_overlap(&params, 0, 1, 0.7).unwrap();
        params.lambda = 4096.0;
        let far = cross_overlap(&params, 0, 1, 0.7).unwrap();
        assert!(far < near);
        assert!(far < 1e-3, "cross overlap {far}");
    }
}
