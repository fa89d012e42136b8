//! Existence test for preparation/measurement-noncontextual ontic models
//! via reduced-space projection and convex-cone witness search.
//!
//! The pipeline: project the scenario's states onto the span of its
//! effects, build an orthonormal basis of the resulting reduced space `R`,
//! express states and effects as coordinate vectors, reduce both lists to
//! their extremal rays, and test whether the pairing tensor
//! `Σ_j R_j ⊗ R_j` lies in the cone generated by all state⊗effect
//! products. A dual extreme ray pairing negatively with the tensor is a
//! witness that no model exists.

pub mod dd;
mod io;

pub use dd::{enumerate_extreme_rays, extremal_generators, DdError};
pub use io::{read_scenario, write_scenario, write_witness};

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::BasisLabel;
use crate::protocol::ClockSpec;

pub const HERMITICITY_TOL: f64 = 1e-12;
/// Residual tolerance for span/orthonormality checks in the reduction.
pub const REDUCTION_TOL: f64 = 1e-10;

#[derive(Error, Debug)]
pub enum OnticError {
    #[error("matrix is not Hermitian (max residual {0:.3e})")]
    NotHermitian(f64),
    #[error(transparent)]
    Dd(#[from] DdError),
    #[error("reduced space too large: dim(R)^2 = {0} exceeds 256")]
    DimensionBudget(usize),
    #[error("model dimensions mismatched: {0}")]
    ModelShape(String),
    #[error("scenario file malformed: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A complex Hermitian operator, stored row-major.
#[derive(Clone, Debug)]
pub struct HermitianOp {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianOp {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self, OnticError> {
        assert_eq!(entries.len(), dim * dim);
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in 0..dim {
                worst = worst.max((entries[i * dim + j] - entries[j * dim + i].conj()).norm());
            }
        }
        if worst > HERMITICITY_TOL {
            return Err(OnticError::NotHermitian(worst));
        }
        Ok(HermitianOp { dim, entries })
    }

    /// Rank-one projector `|v⟩⟨v|`.
    pub fn projector(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] = v[i] * v[j].conj();
            }
        }
        HermitianOp { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Hilbert-Schmidt inner product `tr[A† B]` (real for Hermitian pairs).
    pub fn hs_inner(&self, other: &HermitianOp) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }

    fn axpy(&mut self, coeff: f64, other: &HermitianOp) {
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += coeff * b;
        }
    }

    fn scale(&mut self, f: f64) {
        for a in &mut self.entries {
            *a *= f;
        }
    }

    fn zeros(dim: usize) -> Self {
        HermitianOp {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }
}

/// Conjugate `U ρ U†` in a shared basis.
fn conjugate(u: &crate::linalg::UnitaryMatrix, op: &HermitianOp, adjoint: bool) -> HermitianOp {
    let d = op.dim;
    let ue = u.entries();
    let pick = |i: usize, j: usize| {
        if adjoint {
            ue[j * d + i].conj()
        } else {
            ue[i * d + j]
        }
    };
    let mut tmp = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..d {
                s += pick(i, k) * op.entries[k * d + j];
            }
            tmp[i * d + j] = s;
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..d {
                s += tmp[i * d + k] * pick(j, k).conj();
            }
            out[i * d + j] = s;
        }
    }
    HermitianOp { dim: d, entries: out }
}

/// Preparation/effect sets with the reduced operator basis.
#[derive(Clone, Debug)]
pub struct OnticScenario {
    pub states: Vec<HermitianOp>,
    pub effects: Vec<HermitianOp>,
    /// Trace-orthonormal basis of the reduced space `R`.
    pub reduced_basis: Vec<HermitianOp>,
    /// Set for scenarios other than the canonical two-time clock.
    pub experimental: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioMode {
    /// Clock only ever run dynamically: basis-projector states/effects.
    OnOnly,
    /// Adds the superposition states and the rotated measurement effects.
    Counterfactual,
}

/// Gram-Schmidt over the trace inner product, dropping null vectors.
fn orthonormalize(ops: &[HermitianOp]) -> Vec<HermitianOp> {
    let mut basis: Vec<HermitianOp> = Vec::new();
    for op in ops {
        let mut v = op.clone();
        for _pass in 0..2 {
            for b in &basis {
                let ip = b.hs_inner(&v);
                v.axpy(-ip, b);
            }
        }
        let n = v.hs_inner(&v).sqrt();
        if n > 1e-9 {
            v.scale(1.0 / n);
            basis.push(v);
        }
    }
    basis
}

fn project_onto(basis: &[HermitianOp], op: &HermitianOp) -> HermitianOp {
    let mut out = HermitianOp::zeros(op.dim);
    for b in basis {
        out.axpy(b.hs_inner(op), b);
    }
    out
}

fn coords(basis: &[HermitianOp], op: &HermitianOp) -> Vec<f64> {
    basis.iter().map(|b| b.hs_inner(op)).collect()
}

/// Build the preparation/effect scenario of a clock spec.
pub fn build_scenario(spec: &ClockSpec, mode: ScenarioMode) -> Result<OnticScenario, OnticError> {
    let basis = spec.space().measurement_basis();
    let d = basis.dim();
    let ket = |label: BasisLabel| -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[basis.position(label).unwrap()] = Complex64::new(1.0, 0.0);
        v
    };
    let nt = spec.n_ticks();
    let mut states: Vec<HermitianOp> = Vec::new();
    states.push(HermitianOp::projector(&ket(BasisLabel::Off)));
    for l in 0..=nt {
        states.push(HermitianOp::projector(&ket(BasisLabel::Tick(l))));
    }
    let mut effects = states.clone();
    for j in 1..=spec.space().ancillas {
        effects.push(HermitianOp::projector(&ket(BasisLabel::Ancilla(j))));
    }

    if mode == ScenarioMode::Counterfactual {
        let (c, s) = (spec.c(), spec.s());
        let cf_states: Vec<HermitianOp> = (0..=nt)
            .map(|l| {
                let mut v = ket(BasisLabel::Off);
                for (vi, ti) in v.iter_mut().zip(&ket(BasisLabel::Tick(l))) {
                    *vi = *vi * c + *ti * s;
                }
                HermitianOp::projector(&v)
            })
            .collect();
        let evolved: Vec<HermitianOp> = cf_states
            .iter()
            .map(|op| conjugate(spec.um(), op, false))
            .collect();
        states.extend(cf_states);
        states.extend(evolved);

        let rotated: Vec<HermitianOp> = effects
            .iter()
            .map(|e| conjugate(spec.um(), e, true))
            .collect();
        effects.extend(rotated);
    }

    let effect_span = orthonormalize(&effects);
    let projected_states: Vec<HermitianOp> = states
        .iter()
        .map(|s| project_onto(&effect_span, s))
        .collect();
    let reduced_basis = orthonormalize(&projected_states);

    let experimental = !(nt == 1 && spec.space().ancillas == 1);
    Ok(OnticScenario {
        states,
        effects,
        reduced_basis,
        experimental,
    })
}

/// Result of the witness search.
#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub model_exists: bool,
    /// Witness vector in the tensor coordinates of `R ⊗ R`, when found.
    pub witness: Option<Vec<f64>>,
    /// Most negative pairing `⟨Σ_j R_j⊗R_j, w⟩` over the dual rays.
    pub violation: f64,
    /// Estimated rounding error of the pipeline.
    pub numeric_floor: f64,
    pub reduced_dim: usize,
}

fn kron(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Coordinates of the projected states/effects of a scenario.
pub fn reduced_coordinates(sc: &OnticScenario) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let nonzero = |v: Vec<f64>| -> Option<Vec<f64>> {
        let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        (n > 1e-12).then_some(v)
    };
    let s = sc
        .states
        .iter()
        .filter_map(|op| nonzero(coords(&sc.reduced_basis, op)))
        .collect();
    let e = sc
        .effects
        .iter()
        .filter_map(|op| nonzero(coords(&sc.reduced_basis, op)))
        .collect();
    (s, e)
}

/// Search for a noncontextuality witness.
///
/// `model_exists = false` requires a dual ray pairing below
/// `-100 × numeric_floor`; the reported witness is re-verified directly
/// against every tensor generator, independently of the enumeration.
pub fn find_witness(sc: &OnticScenario) -> Result<WitnessReport, OnticError> {
    let r = sc.reduced_basis.len();
    if r * r > 256 {
        return Err(OnticError::DimensionBudget(r * r));
    }
    let (state_coords, effect_coords) = reduced_coordinates(sc);

    // redundant-ray pre-reduction on both sides
    let keep_s = extremal_generators(&state_coords)?;
    let keep_e = extremal_generators(&effect_coords)?;
    let ray_s: Vec<&Vec<f64>> = keep_s.iter().map(|&i| &state_coords[i]).collect();
    let ray_e: Vec<&Vec<f64>> = keep_e.iter().map(|&i| &effect_coords[i]).collect();

    let mut generators: Vec<Vec<f64>> = Vec::with_capacity(ray_s.len() * ray_e.len());
    for a in &ray_s {
        for b in &ray_e {
            generators.push(kron(a, b));
        }
    }
    let dual = enumerate_extreme_rays(&generators)?;

    let mut unit = vec![0.0; r * r];
    for j in 0..r {
        unit[j * r + j] = 1.0;
    }
    let max_pairing = generators
        .iter()
        .map(|g| g.iter().zip(&unit).map(|(x, y)| x * y).sum::<f64>().abs())
        .fold(1.0f64, f64::max);
    let numeric_floor = f64::EPSILON * (r * r) as f64 * max_pairing;

    let mut violation = f64::INFINITY;
    let mut witness: Option<Vec<f64>> = None;
    for w in &dual {
        let pairing: f64 = w.iter().zip(&unit).map(|(x, y)| x * y).sum();
        if pairing < violation {
            violation = pairing;
            witness = Some(w.clone());
        }
    }
    let model_exists = violation >= -100.0 * numeric_floor;
    if !model_exists {
        let w = witness.as_ref().expect("violating ray recorded");
        for g in &generators {
            let p: f64 = w.iter().zip(g).map(|(x, y)| x * y).sum();
            if p < -REDUCTION_TOL {
                return Err(OnticError::Format(format!(
                    "witness fails certificate re-verification: pairing {p:.3e}"
                )));
            }
        }
    }
    Ok(WitnessReport {
        model_exists,
        witness: if model_exists { None } else { witness },
        violation,
        numeric_floor,
        reduced_dim: r,
    })
}

/// An explicit noncontextual model: `prep[i][λ] = P[λ|ρ_i]` and
/// `response[j][λ] = P[E_j|λ]` over a finite ontic space.
#[derive(Clone, Debug)]
pub struct OnticModel {
    pub prep: Vec<Vec<f64>>,
    pub response: Vec<Vec<f64>>,
}

impl OnticModel {
    /// The deterministic model for the on-only scenario: one ontic state
    /// per measurement-basis ket and delta distributions everywhere.
    pub fn deterministic_on_only(n_states: usize, n_effects: usize) -> Self {
        let lam = n_effects;
        let prep = (0..n_states)
            .map(|i| (0..lam).map(|l| if l == i { 1.0 } else { 0.0 }).collect())
            .collect();
        let response = (0..n_effects)
            .map(|j| (0..lam).map(|l| if l == j { 1.0 } else { 0.0 }).collect())
            .collect();
        OnticModel { prep, response }
    }

    /// Convex mixture of two models over the same shapes.
    pub fn mix(&self, other: &OnticModel, p: f64) -> OnticModel {
        let mixv = |a: &Vec<f64>, b: &Vec<f64>| -> Vec<f64> {
            a.iter().zip(b).map(|(x, y)| p * x + (1.0 - p) * y).collect()
        };
        OnticModel {
            prep: self.prep.iter().zip(&other.prep).map(|(a, b)| mixv(a, b)).collect(),
            response: self
                .response
                .iter()
                .zip(&other.response)
                .map(|(a, b)| mixv(a, b))
                .collect(),
        }
    }
}

/// Maximum deviation `|tr[ρ_i E_j] − Σ_λ P[λ|ρ_i] P[E_j|λ]|` over all pairs.
pub fn verify_statistics_reproduction(
    sc: &OnticScenario,
    model: &OnticModel,
) -> Result<f64, OnticError> {
    if model.prep.len() != sc.states.len() || model.response.len() != sc.effects.len() {
        return Err(OnticError::ModelShape(format!(
            "model has {}x{} distributions, scenario has {} states and {} effects",
            model.prep.len(),
            model.response.len(),
            sc.states.len(),
            sc.effects.len()
        )));
    }
    let lam = model.prep.first().map(|v| v.len()).unwrap_or(0);
    if model.prep.iter().any(|v| v.len() != lam)
        || model.response.iter().any(|v| v.len() != lam)
    {
        return Err(OnticError::ModelShape("ragged ontic distributions".into()));
    }
    let mut worst = 0.0f64;
    for (i, rho) in sc.states.iter().enumerate() {
        for (j, eff) in sc.effects.iter().enumerate() {
            let born = rho.hs_inner(eff);
            let model_prob: f64 = (0..lam)
                .map(|l| model.prep[i][l] * model.response[j][l])
                .sum();
            worst = worst.max((born - model_prob).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::um_nt1_canonical;
    use approx::assert_abs_diff_eq;

    #[test]
    fn scenario_counts() {
        let spec = um_nt1_canonical();
        let on = build_scenario(&spec, ScenarioMode::OnOnly).unwrap();
        assert_eq!(on.states.len(), 3);
        assert_eq!(on.effects.len(), 4);
        assert!(!on.experimental);
        let cf = build_scenario(&spec, ScenarioMode::Counterfactual).unwrap();
        assert_eq!(cf.states.len(), 7);
        assert_eq!(cf.effects.len(), 8);
    }

    #[test]
    fn reduced_basis_orthonormal() {
        let spec = um_nt1_canonical();
        for mode in [ScenarioMode::OnOnly, ScenarioMode::Counterfactual] {
            let sc = build_scenario(&spec, mode).unwrap();
            for (i, a) in sc.reduced_basis.iter().enumerate() {
                for (j, b) in sc.reduced_basis.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(a.hs_inner(b), want, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn projection_is_idempotent() {
        let spec = um_nt1_canonical();
        let sc = build_scenario(&spec, ScenarioMode::Counterfactual).unwrap();
        for op in sc.states.iter().chain(&sc.effects) {
            let once = project_onto(&sc.reduced_basis, op);
            let twice = project_onto(&sc.reduced_basis, &once);
            let diff: f64 = once
                .entries()
                .iter()
                .zip(twice.entries())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-12);
        }
    }

    #[test]
    fn on_only_admits_model() {
        let spec = um_nt1_canonical();
        let sc = build_scenario(&spec, ScenarioMode::OnOnly).unwrap();
        let report = find_witness(&sc).unwrap();
        assert!(report.model_exists, "{report:?}");
        assert_eq!(report.reduced_dim, 3);
    }

    #[test]
    fn counterfactual_refutes_model() {
        let spec = um_nt1_canonical();
        let sc = build_scenario(&spec, ScenarioMode::Counterfactual).unwrap();
        let report = find_witness(&sc).unwrap();
        assert!(!report.model_exists, "{report:?}");
        assert!(report.violation < -100.0 * report.numeric_floor);
        assert!(report.witness.is_some());
    }

    #[test]
    fn single_unit_effect_admits_model() {
        let spec = um_nt1_canonical();
        let mut sc = build_scenario(&spec, ScenarioMode::OnOnly).unwrap();
        let d = sc.states[0].dim();
        let mut id = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            id[i * d + i] = Complex64::new(1.0, 0.0);
        }
        sc.effects = vec![HermitianOp::new(d, id).unwrap()];
        let span = orthonormalize(&sc.effects);
        let projected: Vec<HermitianOp> =
            sc.states.iter().map(|s| project_onto(&span, s)).collect();
        sc.reduced_basis = orthonormalize(&projected);
        let report = find_witness(&sc).unwrap();
        assert!(report.model_exists);
    }

    #[test]
    fn convex_closure_does_not_flip_verdict() {
        let spec = um_nt1_canonical();
        for (mode, expect) in [
            (ScenarioMode::OnOnly, true),
            (ScenarioMode::Counterfactual, false),
        ] {
            let mut sc = build_scenario(&spec, mode).unwrap();
            let mut mix = sc.states[0].clone();
            mix.scale(0.5);
            mix.axpy(0.5, &sc.states[1]);
            sc.states.push(mix);
            let mut emix = sc.effects[0].clone();
            emix.scale(0.25);
            emix.axpy(0.75, &sc.effects[1]);
            sc.effects.push(emix);
            let report = find_witness(&sc).unwrap();
            assert_eq!(report.model_exists, expect);
        }
    }

    #[test]
    fn deterministic_model_reproduces_on_only() {
        let spec = um_nt1_canonical();
        let sc = build_scenario(&spec, ScenarioMode::OnOnly).unwrap();
        let model = OnticModel::deterministic_on_only(sc.states.len(), sc.effects.len());
        let dev = verify_statistics_reproduction(&sc, &model).unwrap();
        assert_abs_diff_eq!(dev, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn perturbed_model_shows_deviation() {
        let spec = um_nt1_canonical();
        let sc = build_scenario(&spec, ScenarioMode::OnOnly).unwrap();
        let mut model = OnticModel::deterministic_on_only(sc.states.len(), sc.effects.len());
        model.response[0][0] = 0.0; // flip one deterministic response
        let dev = verify_statistics_reproduction(&sc, &model).unwrap();
        assert!(dev >= 1.0 - 1e-12);
    }

    #[test]
    fn mixture_of_valid_models_still_valid() {
        let spec = um_nt1_canonical();
        let sc = build_scenario(&spec, ScenarioMode::OnOnly).unwrap();
        let a = OnticModel::deterministic_on_only(sc.states.len(), sc.effects.len());
        let mixed = a.mix(&a, 0.3);
        let dev = verify_statistics_reproduction(&sc, &mixed).unwrap();
        assert_abs_diff_eq!(dev, 0.0, epsilon = 1e-15);
    }
}
