//! The counterfactual-clock protocol: prepare `|E⟩`, split into an on/off
//! superposition with `U_0`, wait an elapsed index, apply the measurement
//! unitary `U_m` and measure in the measurement basis.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{
    apply_unitary, elementary_evolution, make_state, measure, Basis, BasisLabel, ClockSpace,
    LinalgError, Outcome, OutcomeDistribution, Projector, StateVector, UnitaryMatrix,
};

#[derive(Error, Debug)]
pub enum ProtocolError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("ancilla count {m} below tick count {n_ticks}")]
    TooFewAncillas { m: u32, n_ticks: u32 },
    #[error("measurement unitary basis does not match the clock space")]
    UmBasisMismatch,
    #[error("outcome index {0} exceeds the number of counterfactual outcomes")]
    OutcomeIndexOutOfRange(u32),
    #[error("sin(theta) = 0: the counterfactual conditions divide by s")]
    SinThetaZero,
    #[error("label {0} is not part of the measurement basis")]
    NotAMeasurementLabel(BasisLabel),
}

/// Which post-measurement states carry the counterfactual interpretation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutcomeConvention {
    /// Outcomes `{E, A_1, …, A_{N_T}}` (stationary registers).
    AncillaRegister,
    /// Outcomes `{E, τ_0, …, τ_{N_T-1}}` reached by `U_m'` alone.
    TickRegister,
}

/// Full configuration of an elementary counterfactual clock.
#[derive(Clone, Debug)]
pub struct ClockSpec {
    space: ClockSpace,
    theta: f64,
    um: UnitaryMatrix,
    convention: OutcomeConvention,
}

impl ClockSpec {
    pub fn new(
        space: ClockSpace,
        theta: f64,
        um: UnitaryMatrix,
        convention: OutcomeConvention,
    ) -> Result<Self, ProtocolError> {
        if space.ancillas < space.n_ticks {
            return Err(ProtocolError::TooFewAncillas {
                m: space.ancillas,
                n_ticks: space.n_ticks,
            });
        }
        if *um.basis() != space.measurement_basis() {
            return Err(ProtocolError::UmBasisMismatch);
        }
        Ok(ClockSpec {
            space,
            theta,
            um,
            convention,
        })
    }

    pub fn space(&self) -> ClockSpace {
        self.space
    }

    pub fn n_ticks(&self) -> u32 {
        self.space.n_ticks
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `c = cos θ` (off-branch amplitude).
    pub fn c(&self) -> f64 {
        self.theta.cos()
    }

    /// `s = sin θ` (on-branch amplitude).
    pub fn s(&self) -> f64 {
        self.theta.sin()
    }

    pub fn um(&self) -> &UnitaryMatrix {
        &self.um
    }

    pub fn convention(&self) -> OutcomeConvention {
        self.convention
    }

    /// The rotation `U_0` on span{E, ψ}: `|E⟩ → c|E⟩ + s|ψ⟩`.
    pub fn u0(&self) -> UnitaryMatrix {
        let basis = self.space.extended_basis();
        let mut u = UnitaryMatrix::identity(basis.clone());
        let d = basis.dim();
        let e = basis.position(BasisLabel::Off).unwrap();
        let p = basis.position(BasisLabel::Psi).unwrap();
        let (c, s) = (self.c(), self.s());
        let mut entries = u.entries().to_vec();
        entries[e * d + e] = Complex64::new(c, 0.0);
        entries[p * d + e] = Complex64::new(s, 0.0);
        entries[e * d + p] = Complex64::new(-s, 0.0);
        entries[p * d + p] = Complex64::new(c, 0.0);
        u = UnitaryMatrix::new(basis, entries).expect("rotation is unitary");
        u
    }

    /// Post-measurement label of the `k`-th counterfactual outcome.
    pub fn outcome_label(&self, k: u32) -> Result<BasisLabel, ProtocolError> {
        if k > self.space.n_ticks {
            return Err(ProtocolError::OutcomeIndexOutOfRange(k));
        }
        Ok(match (self.convention, k) {
            (_, 0) => BasisLabel::Off,
            (OutcomeConvention::AncillaRegister, k) => BasisLabel::Ancilla(k),
            (OutcomeConvention::TickRegister, k) => BasisLabel::Tick(k - 1),
        })
    }

    /// Off-branch amplitude `A_k^0 = ⟨label_k|U_m|E⟩`.
    pub fn off_amplitude(&self, k: u32) -> Result<Complex64, ProtocolError> {
        let label = self.outcome_label(k)?;
        Ok(self.um.entry(label, BasisLabel::Off)?)
    }

    /// On-branch amplitude `A_k^1(τ_l) = ⟨label_k|U_m|τ_l⟩`.
    pub fn on_amplitude(&self, k: u32, l: u32) -> Result<Complex64, ProtocolError> {
        let label = self.outcome_label(k)?;
        Ok(self.um.entry(label, BasisLabel::Tick(l))?)
    }

    /// Projectors onto each measurement-basis ket, in basis order.
    pub fn measurement_projectors(&self, basis: &Basis) -> Vec<Projector> {
        self.space
            .measurement_basis()
            .labels()
            .iter()
            .map(|&l| Projector::new(basis, vec![l]).expect("measurement label present"))
            .collect()
    }
}

/// Interpretation attached to a measurement outcome.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Interpretation {
    /// The clock never evolved and the elapsed time was `τ_k`.
    AlwaysOff { tick_index: u32 },
    /// The outcome carries no time claim.
    Inconclusive,
}

/// Result of one forward protocol run at a fixed elapsed index.
#[derive(Clone, Debug)]
pub struct ProtocolResult {
    pub distribution: OutcomeDistribution,
    pub elapsed_index: u32,
    pub interpretations: Vec<(BasisLabel, Interpretation)>,
    /// Set when outcome verification was impossible (s = 0).
    pub verification_warning: Option<String>,
}

/// Residuals of the two defining conditions of a counterfactual outcome.
#[derive(Clone, Copy, Debug)]
pub struct CfVerification {
    pub passed: bool,
    /// `|A_k^1(τ_k)|` — the on-branch amplitude at the matching time.
    pub own_time_residual: f64,
    /// `max_{l≠k} |A_k^1(τ_l) + (c/s) A_k^0|` — destructive cancellation.
    pub cancellation_residual: f64,
}

pub const CF_TOL: f64 = 1e-10;

/// Check the two counterfactual-outcome conditions for outcome `k`.
pub fn verify_counterfactual_outcome(
    spec: &ClockSpec,
    k: u32,
) -> Result<CfVerification, ProtocolError> {
    let s = spec.s();
    if s.abs() < 1e-12 {
        return Err(ProtocolError::SinThetaZero);
    }
    let ratio = spec.c() / s;
    let a0 = spec.off_amplitude(k)?;
    let own = spec.on_amplitude(k, k)?.norm();
    let mut cancel = 0.0f64;
    for l in 0..=spec.n_ticks() {
        if l == k {
            continue;
        }
        let a1 = spec.on_amplitude(k, l)?;
        cancel = cancel.max((a1 + a0 * ratio).norm());
    }
    Ok(CfVerification {
        passed: own <= CF_TOL && cancel <= CF_TOL,
        own_time_residual: own,
        cancellation_residual: cancel,
    })
}

/// Counterfactual probabilities `P_cf^(k) = |c A_k^0|²` for `k = 0..=N_T`.
pub fn counterfactual_probabilities(spec: &ClockSpec) -> Result<Vec<f64>, ProtocolError> {
    let c = spec.c();
    (0..=spec.n_ticks())
        .map(|k| Ok((spec.off_amplitude(k)? * c).norm_sqr()))
        .collect()
}

/// State just before measurement: `U_m U(τ_l) U_0 |E⟩` on the extended basis.
pub fn pre_measurement_state(spec: &ClockSpec, l: u32) -> Result<StateVector, ProtocolError> {
    let basis = spec.space().extended_basis();
    let e = make_state(&basis, &[(BasisLabel::Off, Complex64::new(1.0, 0.0))])?;
    let split = apply_unitary(&spec.u0(), &e)?;
    let evolution = elementary_evolution(&spec.space(), l)?;
    let evolved = apply_unitary(&evolution, &split)?;
    let um_ext = spec.um().embed(&basis)?;
    Ok(apply_unitary(&um_ext, &evolved)?)
}

/// Run the full forward protocol at elapsed index `l`.
pub fn run_forward(spec: &ClockSpec, l: u32) -> Result<ProtocolResult, ProtocolError> {
    let state = pre_measurement_state(spec, l)?;
    let projectors = spec.measurement_projectors(state.basis());
    let distribution = measure(&state, &projectors)?;

    let mut interpretations = Vec::new();
    let mut warning = None;
    let probs = counterfactual_probabilities(spec)?;
    for &label in spec.space().measurement_basis().labels() {
        let interp = match classify_with_probs(spec, label, &probs) {
            Ok(i) => i,
            Err(ProtocolError::SinThetaZero) => {
                warning = Some("sin(theta) = 0: counterfactual verification skipped".into());
                Interpretation::Inconclusive
            }
            Err(e) => return Err(e),
        };
        interpretations.push((label, interp));
    }
    Ok(ProtocolResult {
        distribution,
        elapsed_index: l,
        interpretations,
        verification_warning: warning,
    })
}

fn classify_with_probs(
    spec: &ClockSpec,
    outcome: BasisLabel,
    probs: &[f64],
) -> Result<Interpretation, ProtocolError> {
    for k in 0..=spec.n_ticks() {
        if spec.outcome_label(k)? == outcome {
            let verdict = verify_counterfactual_outcome(spec, k)?;
            if verdict.passed && probs[k as usize] > 1e-12 {
                return Ok(Interpretation::AlwaysOff { tick_index: k });
            }
            return Ok(Interpretation::Inconclusive);
        }
    }
    Ok(Interpretation::Inconclusive)
}

/// Interpretation of a single measurement outcome.
pub fn classify_outcome(
    spec: &ClockSpec,
    outcome: BasisLabel,
) -> Result<Interpretation, ProtocolError> {
    if !spec.space().measurement_basis().contains(outcome) {
        return Err(ProtocolError::NotAMeasurementLabel(outcome));
    }
    let probs = counterfactual_probabilities(spec)?;
    classify_with_probs(spec, outcome, &probs)
}

/// Probability of a specific measurement-basis outcome in a result.
pub fn outcome_probability(result: &ProtocolResult, label: BasisLabel) -> f64 {
    result.distribution.probability(Outcome::Label(label))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::um_nt1_canonical;
    use approx::assert_abs_diff_eq;

    #[test]
    fn canonical_probabilities_one_sixth() {
        let spec = um_nt1_canonical();
        let r0 = run_forward(&spec, 0).unwrap();
        assert_abs_diff_eq!(
            outcome_probability(&r0, BasisLabel::Off),
            1.0 / 6.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            outcome_probability(&r0, BasisLabel::Ancilla(1)),
            0.0,
            epsilon = 1e-12
        );
        let r1 = run_forward(&spec, 1).unwrap();
        assert_abs_diff_eq!(
            outcome_probability(&r1, BasisLabel::Ancilla(1)),
            1.0 / 6.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            outcome_probability(&r1, BasisLabel::Off),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn canonical_verifies_both_outcomes() {
        let spec = um_nt1_canonical();
        for k in 0..=1 {
            let v = verify_counterfactual_outcome(&spec, k).unwrap();
            assert!(v.passed, "outcome {k}: {v:?}");
        }
    }

    #[test]
    fn identity_um_fails_verification() {
        let space = ClockSpace::new(1, 1);
        let um = UnitaryMatrix::identity(space.measurement_basis());
        let spec = ClockSpec::new(
            space,
            std::f64::consts::FRAC_PI_4,
            um,
            OutcomeConvention::AncillaRegister,
        )
        .unwrap();
        let v = verify_counterfactual_outcome(&spec, 0).unwrap();
        assert!(!v.passed);
    }

    #[test]
    fn theta_zero_surfaces_warning() {
        let canonical = um_nt1_canonical();
        let spec = ClockSpec::new(
            canonical.space(),
            0.0,
            canonical.um().clone(),
            OutcomeConvention::AncillaRegister,
        )
        .unwrap();
        assert!(matches!(
            verify_counterfactual_outcome(&spec, 0),
            Err(ProtocolError::SinThetaZero)
        ));
        let r = run_forward(&spec, 0).unwrap();
        assert!(r.verification_warning.is_some());
        // off-branch only: distribution equals |<x|Um|E>|^2
        for &label in spec.space().measurement_basis().labels() {
            let expect = spec.um().entry(label, BasisLabel::Off).unwrap().norm_sqr();
            assert_abs_diff_eq!(outcome_probability(&r, label), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn classify_canonical_outcomes() {
        let spec = um_nt1_canonical();
        assert_eq!(
            classify_outcome(&spec, BasisLabel::Off).unwrap(),
            Interpretation::AlwaysOff { tick_index: 0 }
        );
        assert_eq!(
            classify_outcome(&spec, BasisLabel::Ancilla(1)).unwrap(),
            Interpretation::AlwaysOff { tick_index: 1 }
        );
        assert_eq!(
            classify_outcome(&spec, BasisLabel::Tick(0)).unwrap(),
            Interpretation::Inconclusive
        );
    }

    #[test]
    fn theta_half_pi_outcomes_inconclusive() {
        let canonical = um_nt1_canonical();
        let spec = ClockSpec::new(
            canonical.space(),
            std::f64::consts::FRAC_PI_2,
            canonical.um().clone(),
            OutcomeConvention::AncillaRegister,
        )
        .unwrap();
        // c = 0: every counterfactual probability vanishes
        let probs = counterfactual_probabilities(&spec).unwrap();
        assert!(probs.iter().all(|&p| p < 1e-15));
        assert_eq!(
            classify_outcome(&spec, BasisLabel::Ancilla(1)).unwrap(),
            Interpretation::Inconclusive
        );
    }

    #[test]
    fn cf_probabilities_match_forward_runs() {
        let spec = um_nt1_canonical();
        let probs = counterfactual_probabilities(&spec).unwrap();
        for k in 0..=1u32 {
            let r = run_forward(&spec, k).unwrap();
            let label = spec.outcome_label(k).unwrap();
            assert_abs_diff_eq!(outcome_probability(&r, label), probs[k as usize], epsilon = 1e-12);
        }
        assert_abs_diff_eq!(probs.iter().sum::<f64>(), 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn destructive_interference_identity() {
        let spec = um_nt1_canonical();
        let (c, s) = (spec.c(), spec.s());
        for k in 0..=1u32 {
            for l in 0..=1u32 {
                if l == k {
                    continue;
                }
                let a0 = spec.off_amplitude(k).unwrap();
                let a1 = spec.on_amplitude(k, l).unwrap();
                assert_abs_diff_eq!((a0 * c + a1 * s).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }
}
