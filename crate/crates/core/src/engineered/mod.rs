//! Engineered-clock numerics: erf-smoothed overlap functions, the
//! normalization and coupling integrals, the counterfactual probability
//! with its mixing-angle optimization, and the time-averaged type-1/type-2
//! error rates.

pub mod decouple;
pub mod fourier;
pub mod hamiltonian;
pub mod quad;
pub mod spectral;

use statrs::function::erf::erf;
use thiserror::Error;

pub use hamiltonian::{hamiltonian_embed, verify_embedding, EmbedCheck};
pub use quad::{dirichlet_ratio, sinc, QuadError};

#[derive(Error, Debug)]
pub enum EngineeredError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("sigma must be positive, got {0}")]
    BadSigma(f64),
    #[error("sin(theta) = 0: the coupling equation divides by s")]
    SinThetaZero,
    #[error("negative discriminant in the amplitude equation ({0:.3e})")]
    NegativeDiscriminant(f64),
    #[error("amplitude solution not positive ({0:.3e})")]
    NonPositiveAmplitude(f64),
    #[error("matrix element r0 vanishes (|r0| = {0:.3e})")]
    DegenerateR0(f64),
    #[error("phase decoupling requires H2 != 0")]
    ZeroDecayCoefficient,
    #[error("grid under-resolved: Richardson disagreement {0:.3e}")]
    GridUnderResolved(f64),
}

/// Parameter bundle for the engineered clock.
#[derive(Clone, Copy, Debug)]
pub struct EngineeredParams {
    /// Top-hat smoothing width (relative to `t1`), strictly positive.
    pub sigma: f64,
    pub n_ticks: u32,
    /// Number of cycles through the clock period.
    pub x0: u32,
    /// Mixing angle: `c = cos θ`, `s = sin θ`.
    pub theta: f64,
    /// Tick spacing; all derived quantities are independent of it.
    pub t1: f64,
    /// Phase-decoupling parameter for the spectral trial solutions.
    pub lambda: f64,
}

impl EngineeredParams {
    pub fn validate(&self) -> Result<(), EngineeredError> {
        if !(self.sigma > 0.0) {
            return Err(EngineeredError::BadSigma(self.sigma));
        }
        Ok(())
    }

    /// The window-layout flag: `-1` for a single tick, `+1` otherwise.
    pub fn theta_flag(&self) -> i32 {
        if self.n_ticks == 1 {
            -1
        } else {
            1
        }
    }

    /// Clock period `T_0 = (N_T + 1) t_1`.
    pub fn period(&self) -> f64 {
        (self.n_ticks as f64 + 1.0) * self.t1
    }

    /// Comb length of the single-outcome overlap.
    fn comb_count_overlap(&self) -> u32 {
        // q runs from -(θ̂+1)/2 to x0 - 1
        self.x0 + ((self.theta_flag() + 1) / 2) as u32
    }

    /// Comb length of the summed overlap entering the coupling integral.
    fn comb_count_coupling(&self) -> u32 {
        2 * self.n_ticks + (self.x0 - 1) * (self.n_ticks + 1)
    }

    /// Truncation point of the Gaussian weight (weight below 1e-18).
    fn y_max(&self) -> f64 {
        (42.0f64 / 2.0).sqrt() / (std::f64::consts::PI * self.n_ticks as f64 * self.sigma)
    }
}

/// Derived quantities of the engineered clock at fixed parameters.
#[derive(Clone, Copy, Debug)]
pub struct EngineeredDerived {
    /// Normalization constant `N`.
    pub normalization: f64,
    /// Coupling constant `c_0`.
    pub coupling: f64,
    /// `A_1² / N²`.
    pub a1_over_n_sq: f64,
    /// Ancilla amplitude `A_2 = √(1 - (N_T+1)(A_1/N)²)`.
    pub a2: f64,
    /// Ancilla amplitude `A_3 = √(1 - (N_T+1)(c/s)² A_1²)`.
    pub a3: f64,
    /// Per-tick counterfactual probability `c² A_1²/N²`.
    pub p_cf_per_tick: f64,
    /// Total over the `N_T + 1` counterfactual outcomes.
    pub p_cf_total: f64,
}

/// Gaussian-smoothed top-hat `G_{0,σ}`; `z` in absolute time units.
pub fn smoothed_top_hat(params: &EngineeredParams, z: f64) -> f64 {
    let s = std::f64::consts::SQRT_2 * params.sigma;
    0.5 * (erf((z / params.t1 + 0.5) / s) - erf((z / params.t1 - 0.5) / s))
}

/// The comb `G_σ` of smoothed top-hats; `z` in absolute time units.
pub fn comb_g_sigma(params: &EngineeredParams, z: f64) -> f64 {
    let spacing = params.period() / params.n_ticks as f64;
    let q_lo = -(params.theta_flag() + 1) / 2;
    let q_hi = params.x0 as i32 - 1;
    (q_lo..=q_hi)
        .map(|q| smoothed_top_hat(params, z - q as f64 * spacing))
        .sum()
}

/// Single-outcome overlap `⟨x̃_l|x̄_l(t)⟩ = G_σ((t-(θ̂l+1)t₁)/N_T - t₁/2)/N`.
pub fn overlap_g(params: &EngineeredParams, l: u32, t: f64) -> Result<f64, EngineeredError> {
    params.validate()?;
    let n = normalization_n(params)?;
    Ok(overlap_g_with_n(params, l, t, n))
}

fn overlap_g_with_n(params: &EngineeredParams, l: u32, t: f64, n: f64) -> f64 {
    comb_g_sigma(params, overlap_argument(params, l, t)) / n
}

fn overlap_argument(params: &EngineeredParams, l: u32, t: f64) -> f64 {
    let shift = (params.theta_flag() * l as i32 + 1) as f64 * params.t1;
    (t - shift) / params.n_ticks as f64 - params.t1 / 2.0
}

/// Normalization integral
/// `N = N_T ∫ dy e^{-2(πN_Tσ)²y²} |sinc(πN_T y) · D(y)|`.
pub fn normalization_n(params: &EngineeredParams) -> Result<f64, EngineeredError> {
    params.validate()?;
    let nt = params.n_ticks as f64;
    let sigma = params.sigma;
    let n_comb = params.comb_count_overlap();
    let f = move |y: f64| {
        let pi = std::f64::consts::PI;
        let gauss = (-2.0 * (pi * nt * sigma * y).powi(2)).exp();
        let kernel = sinc(pi * nt * y) * dirichlet_ratio(n_comb, pi * (nt + 1.0) * y);
        gauss * kernel.abs()
    };
    let ymax = params.y_max();
    // kernel zeros lie on k/N_T and k/(n(N_T+1))
    let splits = params.n_ticks * n_comb * (params.n_ticks + 1);
    let bp = quad::lattice_breakpoints(0.0, ymax, splits);
    let half = quad::integrate_with_breakpoints(f, 0.0, ymax, &bp)?;
    Ok(nt * 2.0 * half)
}

/// Coupling integral for `1/|c_0|`, signed by `sign(c/s)`.
pub fn coupling_c0(params: &EngineeredParams) -> Result<f64, EngineeredError> {
    params.validate()?;
    let n = normalization_n(params)?;
    coupling_c0_with_n(params, n)
}

fn coupling_c0_with_n(params: &EngineeredParams, n: f64) -> Result<f64, EngineeredError> {
    let nt = params.n_ticks as f64;
    let sigma = params.sigma;
    let n_comb = params.comb_count_coupling();
    let f = move |y: f64| {
        let pi = std::f64::consts::PI;
        let gauss = (-2.0 * (pi * nt * sigma * y).powi(2)).exp();
        let kernel = sinc(pi * nt * y) * dirichlet_ratio(n_comb, pi * y);
        gauss * kernel.abs()
    };
    let ymax = params.y_max();
    let splits = params.n_ticks * n_comb;
    let bp = quad::lattice_breakpoints(0.0, ymax, splits);
    let half = quad::integrate_with_breakpoints(f, 0.0, ymax, &bp)?;
    let inv_abs_c0 = (nt / n) * 2.0 * half;
    let ratio = params.theta.cos() / params.theta.sin();
    let sign = if ratio >= 0.0 { 1.0 } else { -1.0 };
    Ok(sign / inv_abs_c0)
}

/// Solve the coupling equation for `A_1²/N²` (the admissible branch).
pub fn amplitude_a1(
    params: &EngineeredParams,
    normalization: f64,
    coupling: f64,
) -> Result<f64, EngineeredError> {
    let s = params.theta.sin();
    if s.abs() < 1e-12 {
        return Err(EngineeredError::SinThetaZero);
    }
    let nt1 = params.n_ticks as f64 + 1.0;
    let r2 = (params.theta.cos() / s).powi(2);
    let n2 = normalization * normalization;
    let k = nt1 * nt1 - 1.0 / (coupling * coupling);
    let beta = r2 * n2 + 1.0;
    let disc = nt1 * nt1 * beta * beta - 4.0 * r2 * n2 * k;
    if disc < 0.0 {
        return Err(EngineeredError::NegativeDiscriminant(disc));
    }
    let a1_sq = (nt1 * beta - disc.sqrt()) / (2.0 * r2 * k);
    let out = a1_sq / n2;
    if !(out > 0.0) {
        return Err(EngineeredError::NonPositiveAmplitude(out));
    }
    Ok(out)
}

/// Evaluate the defining coupling equation at a candidate `A_1²/N²`.
///
/// Used as the round-trip oracle: the admissible amplitude reproduces the
/// coupling constant.
pub fn coupling_from_amplitude(
    params: &EngineeredParams,
    normalization: f64,
    a1_over_n_sq: f64,
) -> Result<f64, EngineeredError> {
    let s = params.theta.sin();
    if s.abs() < 1e-12 {
        return Err(EngineeredError::SinThetaZero);
    }
    let ratio = params.theta.cos() / s;
    let nt1 = params.n_ticks as f64 + 1.0;
    let a1_sq = a1_over_n_sq * normalization * normalization;
    let num = ratio * a1_sq / normalization;
    let den = ((1.0 - nt1 * a1_over_n_sq) * (1.0 - nt1 * ratio * ratio * a1_sq)).sqrt();
    Ok(num / den)
}

/// All derived clock quantities at the given parameters.
pub fn prob_cf(params: &EngineeredParams) -> Result<EngineeredDerived, EngineeredError> {
    let normalization = normalization_n(params)?;
    let coupling = coupling_c0_with_n(params, normalization)?;
    derived_with(params, normalization, coupling)
}

fn derived_with(
    params: &EngineeredParams,
    normalization: f64,
    coupling: f64,
) -> Result<EngineeredDerived, EngineeredError> {
    let a1_over_n_sq = amplitude_a1(params, normalization, coupling)?;
    let nt1 = params.n_ticks as f64 + 1.0;
    let c2 = params.theta.cos().powi(2);
    let s = params.theta.sin();
    let a1_sq = a1_over_n_sq * normalization * normalization;
    let a2_rad = 1.0 - nt1 * a1_over_n_sq;
    let a3_rad = 1.0 - nt1 * (params.theta.cos() / s).powi(2) * a1_sq;
    if a2_rad < -1e-12 || a3_rad < -1e-12 {
        return Err(EngineeredError::NonPositiveAmplitude(a2_rad.min(a3_rad)));
    }
    let per_tick = c2 * a1_over_n_sq;
    Ok(EngineeredDerived {
        normalization,
        coupling,
        a1_over_n_sq,
        a2: a2_rad.max(0.0).sqrt(),
        a3: a3_rad.max(0.0).sqrt(),
        p_cf_per_tick: per_tick,
        p_cf_total: nt1 * per_tick,
    })
}

/// Maximize the total counterfactual probability over the mixing angle.
///
/// A 721-point grid over `(0, π/2]` (the probability is symmetric under
/// `θ → π - θ`) followed by golden-section refinement; returns
/// `(θ*, total)`.
pub fn optimize_theta(params: &EngineeredParams) -> Result<(f64, f64), EngineeredError> {
    params.validate()?;
    let normalization = normalization_n(params)?;
    let base = EngineeredParams {
        theta: std::f64::consts::FRAC_PI_4,
        ..*params
    };
    let coupling_mag = coupling_c0_with_n(&base, normalization)?.abs();

    let total_at = |theta: f64| -> f64 {
        let p = EngineeredParams { theta, ..*params };
        let coupling = if (theta.cos() / theta.sin()) >= 0.0 {
            coupling_mag
        } else {
            -coupling_mag
        };
        match derived_with(&p, normalization, coupling) {
            Ok(d) if d.p_cf_total.is_finite() => d.p_cf_total,
            _ => f64::NEG_INFINITY,
        }
    };

    let grid = 721usize;
    let lo_bound = 1e-6;
    let hi_bound = std::f64::consts::FRAC_PI_2;
    let mut best_i = 0usize;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..grid {
        let theta = lo_bound + (hi_bound - lo_bound) * i as f64 / (grid - 1) as f64;
        let v = total_at(theta);
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let step = (hi_bound - lo_bound) / (grid - 1) as f64;
    let mut a = (lo_bound + step * best_i as f64 - step).max(lo_bound);
    let mut b = (lo_bound + step * best_i as f64 + step).min(hi_bound);
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut f1 = total_at(x1);
    let mut f2 = total_at(x2);
    for _ in 0..200 {
        if b - a < 1e-14 {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = total_at(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = total_at(x1);
        }
    }
    let theta_star = 0.5 * (a + b);
    Ok((theta_star, total_at(theta_star)))
}

/// Time-averaged error over the window where outcome `p` should occur
/// (clock on despite the correct reading).
pub fn error_type1(params: &EngineeredParams, p: u32) -> Result<f64, EngineeredError> {
    let derived = prob_cf(params)?;
    error_type1_with(params, p, &derived)
}

fn error_type1_with(
    params: &EngineeredParams,
    p: u32,
    derived: &EngineeredDerived,
) -> Result<f64, EngineeredError> {
    let nt = params.n_ticks as f64;
    let th = params.theta_flag() as f64;
    let mut acc = 0.0;
    for q in 0..params.x0 {
        // Dif integrand over the correct window, x = (t - p t1 - q T0)/t1
        let offset = (p as f64 * (1.0 - th) + q as f64 * (nt + 1.0) - 1.0) / nt - 0.5;
        let f = |x: f64| {
            let g = comb_g_sigma(params, (x / nt + offset) * params.t1);
            (1.0 - g).powi(2) - 1.0
        };
        let bp = transition_breakpoints_inner(params, offset);
        acc += quad::integrate_with_breakpoints(f, 0.0, 1.0, &bp)?;
    }
    Ok(derived.p_cf_per_tick * (acc / params.x0 as f64).abs())
}

fn transition_breakpoints_inner(params: &EngineeredParams, offset: f64) -> Vec<f64> {
    // x such that x/nt + offset hits a transition of the comb (in t1 units)
    let nt = params.n_ticks as f64;
    let spacing = (nt + 1.0) / nt;
    let q_lo = -(params.theta_flag() + 1) / 2;
    let mut bp = Vec::new();
    for q in (q_lo - 1)..=(params.x0 as i32 + 1) {
        for edge in [-0.5f64, 0.5] {
            let x = (q as f64 * spacing + edge - offset) * nt;
            if (-0.5..=1.5).contains(&x) {
                for pad in [-6.0, -2.0, 0.0, 2.0, 6.0] {
                    bp.push(x + pad * params.sigma * nt);
                }
            }
        }
    }
    bp
}

/// Time-averaged error over the windows where outcome `p` must not occur
/// (clock predicting the wrong time).
pub fn error_type2(params: &EngineeredParams, p: u32) -> Result<f64, EngineeredError> {
    let derived = prob_cf(params)?;
    error_type2_with(params, p, &derived)
}

fn error_type2_with(
    params: &EngineeredParams,
    p: u32,
    derived: &EngineeredDerived,
) -> Result<f64, EngineeredError> {
    let nt = params.n_ticks as f64;
    let th = params.theta_flag() as f64;
    let pf = p as f64;
    let mut acc = 0.0;
    for q in 0..params.x0 {
        let qf = q as f64;
        // interval [q T0, p t1 + q T0), x ∈ [0, p)
        if p > 0 {
            let offset = (-(th * pf + 1.0) + qf * (nt + 1.0)) / nt - 0.5;
            let f = |x: f64| {
                let g = comb_g_sigma(params, (x / nt + offset) * params.t1);
                (1.0 - g).powi(2)
            };
            let bp = scaled_breakpoints(params, offset, pf);
            acc += quad::integrate_with_breakpoints(f, 0.0, pf, &bp)?;
        }
        // interval [(p+1) t1 + q T0, (q+1) T0), x ∈ [0, N_T - p)
        if (p as i64) < params.n_ticks as i64 + 1 {
            let hi = nt - pf;
            if hi > 0.0 {
                let offset = ((1.0 - th) * pf + qf * (nt + 1.0)) / nt - 0.5;
                let f = |x: f64| {
                    let g = comb_g_sigma(params, (x / nt + offset) * params.t1);
                    (1.0 - g).powi(2)
                };
                let bp = scaled_breakpoints(params, offset, hi);
                acc += quad::integrate_with_breakpoints(f, 0.0, hi, &bp)?;
            }
        }
    }
    Ok(derived.p_cf_per_tick * acc / (params.x0 as f64 * nt))
}

fn scaled_breakpoints(params: &EngineeredParams, offset: f64, width: f64) -> Vec<f64> {
    let nt = params.n_ticks as f64;
    let spacing = (nt + 1.0) / nt;
    let q_lo = -(params.theta_flag() + 1) / 2;
    let mut bp = Vec::new();
    for q in (q_lo - 1)..=(params.x0 as i32 + 1) {
        for edge in [-0.5f64, 0.5] {
            let x = (q as f64 * spacing + edge - offset) * nt;
            if x >= -0.5 && x <= width + 0.5 {
                for pad in [-6.0, -2.0, 0.0, 2.0, 6.0] {
                    bp.push(x + pad * params.sigma * nt);
                }
            }
        }
    }
    bp
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(sigma: f64) -> EngineeredParams {
        EngineeredParams {
            sigma,
            n_ticks: 1,
            x0: 1,
            theta: std::f64::consts::FRAC_PI_4,
            t1: 1.0,
            lambda: 0.0,
        }
    }

    #[test]
    fn overlap_plateau_and_forbidden_window() {
        let p = params(0.01);
        let n = normalization_n(&p).unwrap();
        // plateau inside [t1, 2t1)
        let plateau = overlap_g(&p, 0, 1.5).unwrap();
        assert_abs_diff_eq!(plateau, 1.0 / n, epsilon = 1e-9);
        // forbidden window [0, t1)
        let forbidden = overlap_g(&p, 0, 0.5).unwrap();
        assert!(forbidden.abs() < 1e-12);
    }

    #[test]
    fn overlap_small_sigma_approaches_step() {
        let p = params(1e-3);
        let n = normalization_n(&p).unwrap();
        // ideal: 0 on [0,t1), 1/N on [t1,2t1); compare off the edges
        let mut worst = 0.0f64;
        for i in 0..200 {
            let t = 2.0 * (i as f64 + 0.5) / 200.0;
            let near_edge = [1.0f64, 2.0, 0.0]
                .iter()
                .any(|e| (t - e).abs() < 3.0 * p.sigma * p.t1);
            if near_edge {
                continue;
            }
            let ideal = if t >= 1.0 { 1.0 / n } else { 0.0 };
            worst = worst.max((overlap_g(&p, 0, t).unwrap() - ideal).abs());
        }
        assert!(worst < 1e-6, "max deviation {worst}");
    }

    #[test]
    fn normalization_ratio_term_is_unity_for_single_tick() {
        // with one tick and one cycle the Dirichlet ratio is identically 1,
        // so N reduces to the plain |sinc| integral
        let p = params(0.019);
        let n = normalization_n(&p).unwrap();
        let pi = std::f64::consts::PI;
        let bp = quad::lattice_breakpoints(0.0, p.y_max(), 1);
        let direct = 2.0
            * quad::integrate_with_breakpoints(
                |y| (-2.0 * (pi * p.sigma * y).powi(2)).exp() * sinc(pi * y).abs(),
                0.0,
                p.y_max(),
                &bp,
            )
            .unwrap();
        assert_abs_diff_eq!(n, direct, epsilon = 1e-10);
    }

    #[test]
    fn normalization_monotone_in_sigma() {
        let n_01 = normalization_n(&params(0.1)).unwrap();
        let n_019 = normalization_n(&params(0.019)).unwrap();
        let n_0012 = normalization_n(&params(0.0012)).unwrap();
        assert!(n_0012 > n_019 && n_019 > n_01);
    }

    #[test]
    fn coupling_sign_and_bound() {
        let p = params(0.019);
        let c0 = coupling_c0(&p).unwrap();
        assert!(c0 > 0.0); // first-quadrant theta
        assert!(c0.abs() <= p.n_ticks as f64 + 1.0 + 1e-12);
        let neg = EngineeredParams {
            theta: 2.0,
            ..p
        }; // second quadrant: c/s < 0
        let c0n = coupling_c0(&neg).unwrap();
        assert!(c0n < 0.0);
        assert_abs_diff_eq!(c0n.abs(), c0.abs(), epsilon = 1e-12);
    }

    #[test]
    fn amplitude_round_trips_to_coupling() {
        let p = params(0.019);
        let n = normalization_n(&p).unwrap();
        let c0 = coupling_c0(&p).unwrap();
        let a1 = amplitude_a1(&p, n, c0).unwrap();
        let back = coupling_from_amplitude(&p, n, a1).unwrap();
        assert_abs_diff_eq!(back / c0, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn round_trip_random_parameter_sets() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let mut checked = 0;
        while checked < 20 {
            let p = EngineeredParams {
                sigma: rng.gen_range(0.005..0.1),
                n_ticks: rng.gen_range(1..4),
                x0: rng.gen_range(1..3),
                theta: rng.gen_range(0.2..1.4),
                t1: 1.0,
                lambda: 0.0,
            };
            let n = normalization_n(&p).unwrap();
            let c0 = coupling_c0(&p).unwrap();
            let Ok(a1) = amplitude_a1(&p, n, c0) else {
                continue;
            };
            let back = coupling_from_amplitude(&p, n, a1).unwrap();
            assert_abs_diff_eq!(back / c0, 1.0, epsilon = 1e-8);
            checked += 1;
        }
    }

    #[test]
    fn pcf_vanishes_at_theta_half_pi_limit() {
        let mut p = params(0.05);
        p.theta = std::f64::consts::FRAC_PI_2 - 1e-6;
        let d = prob_cf(&p).unwrap();
        assert!(d.p_cf_total < 1e-6);
    }

    #[test]
    fn pcf_continuous_toward_theta_zero() {
        let mut p = params(0.05);
        p.theta = 1e-4;
        let d = prob_cf(&p).unwrap();
        assert!(d.p_cf_total < 1e-4);
    }

    #[test]
    fn optimum_is_symmetric_and_interior() {
        let p = params(0.05);
        let (theta_star, total) = optimize_theta(&p).unwrap();
        assert!(theta_star > 0.0 && theta_star <= std::f64::consts::FRAC_PI_2);
        // mirror point gives the same probability
        let mirrored = EngineeredParams {
            theta: std::f64::consts::PI - theta_star,
            ..p
        };
        let d = prob_cf(&mirrored).unwrap();
        assert_abs_diff_eq!(d.p_cf_total, total, epsilon = 1e-9);
        // grid neighbours do not beat the optimum
        for d_theta in [-1e-3, 1e-3] {
            let probe = EngineeredParams {
                theta: theta_star + d_theta,
                ..p
            };
            assert!(prob_cf(&probe).unwrap().p_cf_total <= total + 1e-12);
        }
    }

    #[test]
    fn errors_scale_with_sigma() {
        let p19 = params(0.019);
        let p12 = params(0.0012);
        let e1_19 = error_type1(&p19, 0).unwrap();
        let e1_12 = error_type1(&p12, 0).unwrap();
        assert!(e1_12 < e1_19);
        let e2_19 = error_type2(&p19, 0).unwrap();
        let e2_12 = error_type2(&p12, 0).unwrap();
        assert!(e2_12 < e2_19);
    }

    #[test]
    fn error_symmetric_in_p_for_single_tick() {
        let p = params(0.019);
        assert_abs_diff_eq!(
            error_type1(&p, 0).unwrap(),
            error_type1(&p, 1).unwrap(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            error_type2(&p, 0).unwrap(),
            error_type2(&p, 1).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn t1_independence() {
        for &t1 in &[0.5, 1.0, 2.0] {
            let p = EngineeredParams { t1, ..params(0.019) };
            let base = params(0.019);
            let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
            assert!(rel(
                prob_cf(&p).unwrap().p_cf_total,
                prob_cf(&base).unwrap().p_cf_total
            ) < 1e-9);
            assert!(rel(error_type1(&p, 0).unwrap(), error_type1(&base, 0).unwrap()) < 1e-9);
            assert!(rel(error_type2(&p, 0).unwrap(), error_type2(&base, 0).unwrap()) < 1e-9);
        }
    }
}
