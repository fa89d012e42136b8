//! Two-state-vector analysis: backward-evolved post-selected states,
//! pre/post-selected amplitudes, and the intermediate-time on-probability.

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{
    apply_unitary, elementary_evolution_fractional, make_state, BasisLabel, LinalgError,
    Projector, StateVector,
};
use crate::protocol::{ClockSpec, ProtocolError};

#[derive(Error, Debug)]
pub enum TsvfError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error("outcome {0} is not a verified counterfactual outcome")]
    NotCounterfactual(u32),
    #[error("time fraction {0} outside (0, 1)")]
    FractionOutOfRange(f64),
    #[error("both branch amplitudes vanish; on-probability is undefined")]
    DegenerateDenominator,
}

/// A pre/post-selected query at an intermediate time `t = u · τ_k`.
#[derive(Clone, Debug)]
pub struct TwoStateQuery {
    pub spec: ClockSpec,
    /// Index of the post-selected counterfactual outcome.
    pub postselect_index: u32,
    /// `u = t / τ_k`, strictly inside `(0, 1)`.
    pub fraction: f64,
}

/// The backward-evolved post-selected bra `⟨A_k|U_m`, unnormalized,
/// expressed over the measurement basis.
pub fn backward_state(spec: &ClockSpec, k: u32) -> Result<StateVector, TsvfError> {
    let verdict = crate::protocol::verify_counterfactual_outcome(spec, k)?;
    if !verdict.passed {
        return Err(TsvfError::NotCounterfactual(k));
    }
    let label = spec.outcome_label(k)?;
    let basis = spec.um().basis().clone();
    let amp: Vec<Complex64> = basis
        .labels()
        .iter()
        .map(|&col| spec.um().entry(label, col).unwrap())
        .collect();
    Ok(StateVector::unnormalized(basis, amp))
}

/// The two-time amplitude `⟨A_k|U_m U(τ_k) U_0|A_0⟩`.
pub fn pre_post_amplitude(spec: &ClockSpec, k: u32) -> Result<Complex64, TsvfError> {
    let state = crate::protocol::pre_measurement_state(spec, k)?;
    Ok(state.amplitude(spec.outcome_label(k)?))
}

/// Coefficients of the fully backward-evolved bra `⟨A_k|U_m U(τ_k) U_0` on
/// the extended basis. The `⟨E|` coefficient equals `c · A_k^0`.
pub fn backward_state_full(spec: &ClockSpec, k: u32) -> Result<StateVector, TsvfError> {
    let bra = backward_state(spec, k)?;
    let basis = spec.space().extended_basis();
    let bra = bra.embed(&basis)?;
    let evolution = crate::linalg::elementary_evolution(&spec.space(), k)?;
    let bra = crate::linalg::apply_unitary_bra(&bra, &evolution)?;
    Ok(crate::linalg::apply_unitary_bra(&bra, &spec.u0())?)
}

/// Probability that the clock was on at the intermediate time of a
/// pre/post-selected run; zero for every counterfactual outcome.
pub fn prob_on_at(query: &TwoStateQuery) -> Result<f64, TsvfError> {
    let spec = &query.spec;
    let k = query.postselect_index;
    let u = query.fraction;
    if !(0.0 < u && u < 1.0) {
        return Err(TsvfError::FractionOutOfRange(u));
    }
    let verdict = crate::protocol::verify_counterfactual_outcome(spec, k)?;
    if !verdict.passed {
        return Err(TsvfError::NotCounterfactual(k));
    }

    let space = spec.space();
    let basis = space.extended_basis();
    let label = spec.outcome_label(k)?;

    let on_labels: Vec<BasisLabel> = basis
        .labels()
        .iter()
        .copied()
        .filter(|l| matches!(l, BasisLabel::Psi | BasisLabel::Tick(_) | BasisLabel::Hidden(_, _)))
        .collect();
    let off_labels: Vec<BasisLabel> = basis
        .labels()
        .iter()
        .copied()
        .filter(|l| matches!(l, BasisLabel::Off | BasisLabel::Ancilla(_)))
        .collect();
    let p_on = Projector::new(&basis, on_labels)?;
    let p_off = Projector::new(&basis, off_labels)?;

    let first = elementary_evolution_fractional(&space, k, u)?;
    let second = elementary_evolution_fractional(&space, k, 1.0 - u)?;
    let um_ext = spec.um().embed(&basis)?;

    let e = make_state(&basis, &[(BasisLabel::Off, Complex64::new(1.0, 0.0))])?;
    let evolved = apply_unitary(&first, &apply_unitary(&spec.u0(), &e)?)?;

    let amp_through = |sector: &Projector| -> Result<Complex64, TsvfError> {
        let projected = sector.apply(&evolved)?;
        let late = apply_unitary(&second, &projected)?;
        let out = apply_unitary(&um_ext, &late)?;
        Ok(out.amplitude(label))
    };
    let on_amp = amp_through(&p_on)?;
    let off_amp = amp_through(&p_off)?;
    let denom = on_amp.norm_sqr() + off_amp.norm_sqr();
    if denom < 1e-14 {
        return Err(TsvfError::DegenerateDenominator);
    }
    Ok(on_amp.norm_sqr() / denom)
}
