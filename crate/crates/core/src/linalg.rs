//! Labeled finite-dimensional complex linear algebra for the clock basis.
//!
//! States, unitaries and projectors all carry an explicit ordered basis of
//! [`BasisLabel`]s. Matrices use the standard column-vector convention:
//! `U[(row, col)] = ⟨row|U|col⟩`, so the image of a basis ket is the
//! corresponding column.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

/// Unitarity / orthogonality tolerance.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Normalization tolerance for state vectors.
pub const NORM_TOL: f64 = 1e-12;

/// One labeled basis ket of the clock Hilbert space.
///
/// `Hidden(j, k)` labels the internal orthogonal sector that the tick ket
/// `Tick(j)` is mapped into by the evolution over elapsed index `k`. Only
/// its orthogonality to the measurement basis matters; allocating one label
/// per `(j, k)` pair keeps every inner product exact.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum BasisLabel {
    /// The stationary energy eigenstate `|E⟩`.
    Off,
    /// The dynamical initial state `|ψ⟩`.
    Psi,
    /// Tick register ket `|τ_l⟩`, `0 ≤ l ≤ N_T`.
    Tick(u32),
    /// Ancilla ket `|A_j⟩`, `1 ≤ j ≤ m`.
    Ancilla(u32),
    /// Orthogonal image of `Tick(j)` under the elapsed-index-`k` evolution.
    Hidden(u32, u32),
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Off => write!(f, "E"),
            BasisLabel::Psi => write!(f, "psi"),
            BasisLabel::Tick(l) => write!(f, "tau{l}"),
            BasisLabel::Ancilla(j) => write!(f, "A{j}"),
            BasisLabel::Hidden(j, k) => write!(f, "h{j}_{k}"),
        }
    }
}

#[derive(Error, Debug)]
pub enum LinalgError {
    #[error("duplicate basis label {0}")]
    DuplicateLabel(BasisLabel),
    #[error("label {0} not present in basis")]
    UnknownLabel(BasisLabel),
    #[error("all amplitudes are zero")]
    ZeroState,
    #[error("basis mismatch between operator and operand")]
    BasisMismatch,
    #[error("matrix is not unitary (max residual {0:.3e})")]
    NotUnitary(f64),
    #[error("projectors are not pairwise orthogonal (labels overlap)")]
    NonOrthogonalProjectors,
    #[error("matrix is not Hermitian (max residual {0:.3e})")]
    NotHermitian(f64),
    #[error("tick index {index} out of range 0..={max}")]
    TickOutOfRange { index: u32, max: u32 },
}

/// An ordered set of distinct basis labels.
#[derive(Clone, Debug)]
pub struct Basis {
    labels: Arc<Vec<BasisLabel>>,
    index: Arc<BTreeMap<BasisLabel, usize>>,
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Basis {
    pub fn new(labels: Vec<BasisLabel>) -> Result<Self, LinalgError> {
        let mut index = BTreeMap::new();
        for (i, &l) in labels.iter().enumerate() {
            if index.insert(l, i).is_some() {
                return Err(LinalgError::DuplicateLabel(l));
            }
        }
        Ok(Basis {
            labels: Arc::new(labels),
            index: Arc::new(index),
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn position(&self, label: BasisLabel) -> Result<usize, LinalgError> {
        self.index
            .get(&label)
            .copied()
            .ok_or(LinalgError::UnknownLabel(label))
    }

    pub fn contains(&self, label: BasisLabel) -> bool {
        self.index.contains_key(&label)
    }
}

/// Dimensions of a clock space: number of ticks `N_T` and ancilla count `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClockSpace {
    pub n_ticks: u32,
    pub ancillas: u32,
}

impl ClockSpace {
    pub fn new(n_ticks: u32, ancillas: u32) -> Self {
        ClockSpace { n_ticks, ancillas }
    }

    /// The measurement basis `{E, τ_0..τ_{N_T}, A_1..A_m}`.
    pub fn measurement_basis(&self) -> Basis {
        let mut labels = vec![BasisLabel::Off];
        labels.extend((0..=self.n_ticks).map(BasisLabel::Tick));
        labels.extend((1..=self.ancillas).map(BasisLabel::Ancilla));
        Basis::new(labels).expect("labels are distinct by construction")
    }

    /// Measurement basis extended by `|ψ⟩` and the hidden tick sector.
    pub fn extended_basis(&self) -> Basis {
        let mut labels = vec![BasisLabel::Off, BasisLabel::Psi];
        labels.extend((0..=self.n_ticks).map(BasisLabel::Tick));
        labels.extend((1..=self.ancillas).map(BasisLabel::Ancilla));
        for j in 0..=self.n_ticks {
            for k in 0..=self.n_ticks {
                labels.push(BasisLabel::Hidden(j, k));
            }
        }
        Basis::new(labels).expect("labels are distinct by construction")
    }
}

/// A complex amplitude vector over a labeled basis.
///
/// Constructed through [`make_state`] states are normalized; bras and other
/// unnormalized intermediates use [`StateVector::unnormalized`].
#[derive(Clone, Debug)]
pub struct StateVector {
    basis: Basis,
    amp: Vec<Complex64>,
}

impl StateVector {
    pub fn unnormalized(basis: Basis, amp: Vec<Complex64>) -> Self {
        assert_eq!(basis.dim(), amp.len());
        StateVector { basis, amp }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn amplitude(&self, label: BasisLabel) -> Complex64 {
        match self.basis.position(label) {
            Ok(i) => self.amp[i],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn norm(&self) -> f64 {
        self.amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64, LinalgError> {
        if self.basis != other.basis {
            return Err(LinalgError::BasisMismatch);
        }
        Ok(self
            .amp
            .iter()
            .zip(&other.amp)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Re-express the state on a larger basis, zero-filling new labels.
    pub fn embed(&self, basis: &Basis) -> Result<StateVector, LinalgError> {
        let mut amp = vec![Complex64::new(0.0, 0.0); basis.dim()];
        for (i, &l) in self.basis.labels().iter().enumerate() {
            amp[basis.position(l)?] = self.amp[i];
        }
        Ok(StateVector {
            basis: basis.clone(),
            amp,
        })
    }
}

/// Build a normalized state from `(label, amplitude)` pairs.
///
/// Missing labels get amplitude zero; duplicate labels and the all-zero
/// input are rejected.
pub fn make_state(
    basis: &Basis,
    pairs: &[(BasisLabel, Complex64)],
) -> Result<StateVector, LinalgError> {
    let mut amp = vec![Complex64::new(0.0, 0.0); basis.dim()];
    let mut seen = BTreeMap::new();
    for &(label, a) in pairs {
        if seen.insert(label, ()).is_some() {
            return Err(LinalgError::DuplicateLabel(label));
        }
        amp[basis.position(label)?] = a;
    }
    let norm = amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(LinalgError::ZeroState);
    }
    for a in &mut amp {
        *a /= norm;
    }
    Ok(StateVector {
        basis: basis.clone(),
        amp,
    })
}

/// A square complex matrix with row/column basis labels, checked unitary.
#[derive(Clone, Debug)]
pub struct UnitaryMatrix {
    basis: Basis,
    entries: Vec<Complex64>, // row-major
}

impl UnitaryMatrix {
    /// Wrap entries after checking `‖U†U − 1‖_max ≤ 1e-10`.
    pub fn new(basis: Basis, entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        let d = basis.dim();
        assert_eq!(entries.len(), d * d);
        let u = UnitaryMatrix { basis, entries };
        let res = u.unitarity_residual();
        if res > UNITARITY_TOL {
            return Err(LinalgError::NotUnitary(res));
        }
        Ok(u)
    }

    pub fn identity(basis: Basis) -> Self {
        let d = basis.dim();
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            entries[i * d + i] = Complex64::new(1.0, 0.0);
        }
        UnitaryMatrix { basis, entries }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn entry(&self, row: BasisLabel, col: BasisLabel) -> Result<Complex64, LinalgError> {
        let r = self.basis.position(row)?;
        let c = self.basis.position(col)?;
        Ok(self.entries[r * self.dim() + c])
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `‖U†U − 1‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    s += self.entries[k * d + i].conj() * self.entries[k * d + j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &UnitaryMatrix) -> Result<UnitaryMatrix, LinalgError> {
        if self.basis != rhs.basis {
            return Err(LinalgError::BasisMismatch);
        }
        let d = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * rhs.entries[k * d + j];
                }
            }
        }
        Ok(UnitaryMatrix {
            basis: self.basis.clone(),
            entries: out,
        })
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        let d = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                out[j * d + i] = self.entries[i * d + j].conj();
            }
        }
        UnitaryMatrix {
            basis: self.basis.clone(),
            entries: out,
        }
    }

    /// Embed into a larger basis, acting as the identity on new labels.
    pub fn embed(&self, basis: &Basis) -> Result<UnitaryMatrix, LinalgError> {
        let mut big = UnitaryMatrix::identity(basis.clone());
        let bd = basis.dim();
        let d = self.dim();
        for (i, &li) in self.basis.labels().iter().enumerate() {
            let bi = basis.position(li)?;
            for (j, &lj) in self.basis.labels().iter().enumerate() {
                let bj = basis.position(lj)?;
                big.entries[bi * bd + bj] = self.entries[i * d + j];
            }
        }
        Ok(big)
    }
}

/// Apply a unitary to a state on the same basis.
pub fn apply_unitary(u: &UnitaryMatrix, psi: &StateVector) -> Result<StateVector, LinalgError> {
    if u.basis != psi.basis {
        return Err(LinalgError::BasisMismatch);
    }
    let d = u.dim();
    let mut out = vec![Complex64::new(0.0, 0.0); d];
    for i in 0..d {
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..d {
            s += u.entries[i * d + j] * psi.amp[j];
        }
        out[i] = s;
    }
    Ok(StateVector {
        basis: psi.basis.clone(),
        amp: out,
    })
}

/// Apply a unitary from the right to a bra (row vector of coefficients).
pub fn apply_unitary_bra(
    bra: &StateVector,
    u: &UnitaryMatrix,
) -> Result<StateVector, LinalgError> {
    if u.basis != bra.basis {
        return Err(LinalgError::BasisMismatch);
    }
    let d = u.dim();
    let mut out = vec![Complex64::new(0.0, 0.0); d];
    for j in 0..d {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..d {
            s += bra.amp[i] * u.entries[i * d + j];
        }
        out[j] = s;
    }
    Ok(StateVector {
        basis: bra.basis.clone(),
        amp: out,
    })
}

/// Rank-`|subset|` projector onto a set of basis labels.
#[derive(Clone, Debug)]
pub struct Projector {
    basis: Basis,
    subset: Vec<BasisLabel>,
}

impl Projector {
    pub fn new(basis: &Basis, subset: Vec<BasisLabel>) -> Result<Self, LinalgError> {
        let mut seen = BTreeMap::new();
        for &l in &subset {
            basis.position(l)?;
            if seen.insert(l, ()).is_some() {
                return Err(LinalgError::DuplicateLabel(l));
            }
        }
        Ok(Projector {
            basis: basis.clone(),
            subset,
        })
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.subset
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector, LinalgError> {
        if self.basis != psi.basis {
            return Err(LinalgError::BasisMismatch);
        }
        let mut amp = vec![Complex64::new(0.0, 0.0); psi.basis.dim()];
        for &l in &self.subset {
            let i = psi.basis.position(l)?;
            amp[i] = psi.amp[i];
        }
        Ok(StateVector {
            basis: psi.basis.clone(),
            amp,
        })
    }
}

/// Measurement outcome label: a basis projector or the unassigned rest.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Outcome {
    Label(BasisLabel),
    Rest,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Label(l) => write!(f, "{l}"),
            Outcome::Rest => write!(f, "rest"),
        }
    }
}

/// Probabilities per outcome, summing to one.
#[derive(Clone, Debug)]
pub struct OutcomeDistribution {
    entries: Vec<(Outcome, f64)>,
}

impl OutcomeDistribution {
    pub fn entries(&self) -> &[(Outcome, f64)] {
        &self.entries
    }

    pub fn probability(&self, outcome: Outcome) -> f64 {
        self.entries
            .iter()
            .find(|(o, _)| *o == outcome)
            .map(|(_, p)| *p)
            .unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }
}

/// Born-rule measurement with a list of pairwise-orthogonal projectors.
///
/// Each projector is reported under the label of its first basis ket;
/// probability not captured by any projector goes to [`Outcome::Rest`].
pub fn measure(
    psi: &StateVector,
    projectors: &[Projector],
) -> Result<OutcomeDistribution, LinalgError> {
    let mut used = BTreeMap::new();
    for p in projectors {
        if p.basis != psi.basis {
            return Err(LinalgError::BasisMismatch);
        }
        for &l in &p.subset {
            if used.insert(l, ()).is_some() {
                return Err(LinalgError::NonOrthogonalProjectors);
            }
        }
    }
    let mut entries = Vec::with_capacity(projectors.len() + 1);
    let mut captured = 0.0;
    for p in projectors {
        let proj = p.apply(psi)?;
        let prob = proj.norm().powi(2);
        captured += prob;
        let label = p
            .subset
            .first()
            .copied()
            .map(Outcome::Label)
            .unwrap_or(Outcome::Rest);
        entries.push((label, prob));
    }
    let total = psi.norm().powi(2);
    entries.push((Outcome::Rest, (total - captured).max(0.0)));
    Ok(OutcomeDistribution { entries })
}

/// The elementary clock evolution over elapsed index `l` on the extended
/// basis: `ψ → τ_l`, stationary labels fixed, tick kets moved into their
/// hidden sector so that `⟨τ_j|U(τ_l)` is orthogonal to `E` and `ψ` for
/// `j ≠ l`.
pub fn elementary_evolution(space: &ClockSpace, l: u32) -> Result<UnitaryMatrix, LinalgError> {
    if l > space.n_ticks {
        return Err(LinalgError::TickOutOfRange {
            index: l,
            max: space.n_ticks,
        });
    }
    let basis = space.extended_basis();
    let d = basis.dim();
    let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
    let one = Complex64::new(1.0, 0.0);
    let mut set = |to: BasisLabel, from: BasisLabel| {
        let r = basis.position(to).expect("label in extended basis");
        let c = basis.position(from).expect("label in extended basis");
        entries[r * d + c] = one;
    };
    for &label in basis.labels() {
        match label {
            BasisLabel::Psi => set(BasisLabel::Tick(l), BasisLabel::Psi),
            BasisLabel::Tick(j) => set(BasisLabel::Hidden(j, l), BasisLabel::Tick(j)),
            BasisLabel::Hidden(j, k) if k == l => {
                if j == l {
                    set(BasisLabel::Psi, BasisLabel::Hidden(j, k));
                } else {
                    set(BasisLabel::Tick(j), BasisLabel::Hidden(j, k));
                }
            }
            other => set(other, other),
        }
    }
    UnitaryMatrix::new(basis, entries)
}

/// Evolve a state by the elementary clock dynamics for elapsed index `l`.
///
/// The input is embedded into the extended basis of `space` first, so
/// states supported on `{E, ψ, ancillas, ticks}` are accepted directly.
pub fn evolve_elementary(
    psi: &StateVector,
    l: u32,
    space: &ClockSpace,
) -> Result<StateVector, LinalgError> {
    let u = elementary_evolution(space, l)?;
    let embedded = psi.embed(u.basis())?;
    apply_unitary(&u, &embedded)
}

/// Fractional power `U(τ_l)^u` of the elementary evolution, `0 ≤ u ≤ 1`.
///
/// Computed per permutation cycle through the discrete Fourier eigenbasis,
/// so `U^u · U^{1-u} = U(τ_l)` holds to rounding and stationary labels stay
/// exactly fixed. This is the Markov-consistent interpolation used by the
/// two-state-vector analysis at intermediate times.
pub fn elementary_evolution_fractional(
    space: &ClockSpace,
    l: u32,
    u: f64,
) -> Result<UnitaryMatrix, LinalgError> {
    if l > space.n_ticks {
        return Err(LinalgError::TickOutOfRange {
            index: l,
            max: space.n_ticks,
        });
    }
    let basis = space.extended_basis();
    let d = basis.dim();
    let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        entries[i * d + i] = Complex64::new(1.0, 0.0);
    }

    let mut cycles: Vec<Vec<BasisLabel>> = vec![vec![
        BasisLabel::Psi,
        BasisLabel::Tick(l),
        BasisLabel::Hidden(l, l),
    ]];
    for j in 0..=space.n_ticks {
        if j != l {
            cycles.push(vec![BasisLabel::Tick(j), BasisLabel::Hidden(j, l)]);
        }
    }

    for cycle in cycles {
        let len = cycle.len();
        let idx: Vec<usize> = cycle
            .iter()
            .map(|&lbl| basis.position(lbl).expect("label in extended basis"))
            .collect();
        for a in 0..len {
            for b in 0..len {
                let mut s = Complex64::new(0.0, 0.0);
                for m in 0..len {
                    // eigenvalue of the cyclic shift, principal argument
                    let mm = if 2 * m > len { m as i64 - len as i64 } else { m as i64 };
                    let phase = -2.0 * std::f64::consts::PI * mm as f64 / len as f64;
                    let lam_u = Complex64::from_polar(1.0, phase * u);
                    let w = Complex64::from_polar(
                        1.0,
                        2.0 * std::f64::consts::PI * (m as f64) * ((a as f64) - (b as f64))
                            / len as f64,
                    );
                    s += lam_u * w;
                }
                entries[idx[a] * d + idx[b]] = s / len as f64;
            }
        }
    }
    UnitaryMatrix::new(basis, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn make_state_single_ket() {
        let basis = ClockSpace::new(1, 1).measurement_basis();
        let s = make_state(&basis, &[(BasisLabel::Off, c(1.0, 0.0))]).unwrap();
        assert_abs_diff_eq!(s.amplitude(BasisLabel::Off).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn make_state_normalizes() {
        let basis = ClockSpace::new(1, 1).extended_basis();
        let s = make_state(
            &basis,
            &[(BasisLabel::Off, c(2.0, 0.0)), (BasisLabel::Psi, c(2.0, 0.0))],
        )
        .unwrap();
        let r = 1.0 / 2.0f64.sqrt();
        assert_abs_diff_eq!(s.amplitude(BasisLabel::Off).re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(BasisLabel::Psi).re, r, epsilon = 1e-15);
    }

    #[test]
    fn make_state_rejects_bad_input() {
        let basis = ClockSpace::new(1, 1).measurement_basis();
        assert!(matches!(
            make_state(
                &basis,
                &[
                    (BasisLabel::Off, c(1.0, 0.0)),
                    (BasisLabel::Off, c(1.0, 0.0))
                ]
            ),
            Err(LinalgError::DuplicateLabel(_))
        ));
        assert!(matches!(
            make_state(&basis, &[(BasisLabel::Off, c(0.0, 0.0))]),
            Err(LinalgError::ZeroState)
        ));
    }

    #[test]
    fn identity_preserves_state() {
        let basis = ClockSpace::new(1, 1).measurement_basis();
        let u = UnitaryMatrix::identity(basis.clone());
        let s = make_state(&basis, &[(BasisLabel::Off, c(1.0, 0.0))]).unwrap();
        let out = apply_unitary(&u, &s).unwrap();
        assert_abs_diff_eq!(out.amplitude(BasisLabel::Off).re, 1.0, epsilon = 1e-15);
    }

    fn random_haar(basis: &Basis, rng: &mut impl Rng) -> UnitaryMatrix {
        // Gram-Schmidt on a Ginibre sample.
        let d = basis.dim();
        let mut cols: Vec<Vec<Complex64>> = (0..d)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        Complex64::new(
                            rng.sample::<f64, _>(rand_distr::StandardNormal),
                            rng.sample::<f64, _>(rand_distr::StandardNormal),
                        )
                    })
                    .collect()
            })
            .collect();
        for j in 0..d {
            for _pass in 0..2 {
                for k in 0..j {
                    let proj: Complex64 = (0..d).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                    for i in 0..d {
                        let sub = proj * cols[k][i];
                        cols[j][i] -= sub;
                    }
                }
            }
            let nrm = cols[j].iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            for i in 0..d {
                cols[j][i] /= nrm;
            }
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] = cols[j][i];
            }
        }
        UnitaryMatrix::new(basis.clone(), entries).unwrap()
    }

    #[test]
    fn haar_random_preserves_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let basis = ClockSpace::new(2, 2).measurement_basis();
        for _ in 0..20 {
            let u = random_haar(&basis, &mut rng);
            let pairs: Vec<(BasisLabel, Complex64)> = basis
                .labels()
                .iter()
                .map(|&l| {
                    (
                        l,
                        Complex64::new(
                            rng.sample::<f64, _>(rand_distr::StandardNormal),
                            rng.sample::<f64, _>(rand_distr::StandardNormal),
                        ),
                    )
                })
                .collect();
            let s = make_state(&basis, &pairs).unwrap();
            let out = apply_unitary(&u, &s).unwrap();
            assert_abs_diff_eq!(out.norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn evolution_moves_psi_to_tick() {
        let space = ClockSpace::new(1, 1);
        let basis = space.extended_basis();
        let psi = make_state(&basis, &[(BasisLabel::Psi, c(1.0, 0.0))]).unwrap();
        let out = evolve_elementary(&psi, 1, &space).unwrap();
        assert_abs_diff_eq!(out.amplitude(BasisLabel::Tick(1)).re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn evolution_is_linear_and_leaves_off_alone() {
        let space = ClockSpace::new(1, 1);
        let basis = space.extended_basis();
        let r = 1.0 / 2.0f64.sqrt();
        let s = make_state(
            &basis,
            &[(BasisLabel::Off, c(r, 0.0)), (BasisLabel::Psi, c(r, 0.0))],
        )
        .unwrap();
        let out = evolve_elementary(&s, 0, &space).unwrap();
        assert_abs_diff_eq!(out.amplitude(BasisLabel::Off).re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(out.amplitude(BasisLabel::Tick(0)).re, r, epsilon = 1e-15);
    }

    #[test]
    fn orthogonality_law_all_pairs() {
        // ⟨τ_j|U(τ_l)|E⟩ = 0 and ⟨τ_j|U(τ_l)|ψ⟩ = 0 for j ≠ l, N_T ≤ 6.
        for nt in 1..=6u32 {
            let space = ClockSpace::new(nt, nt);
            for l in 0..=nt {
                let u = elementary_evolution(&space, l).unwrap();
                for j in 0..=nt {
                    if j == l {
                        continue;
                    }
                    let e = u.entry(BasisLabel::Tick(j), BasisLabel::Off).unwrap();
                    let p = u.entry(BasisLabel::Tick(j), BasisLabel::Psi).unwrap();
                    assert_eq!(e, c(0.0, 0.0));
                    assert_eq!(p, c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn fractional_evolution_composes_markov() {
        let space = ClockSpace::new(2, 2);
        let full = elementary_evolution(&space, 1).unwrap();
        for &u in &[0.1, 0.25, 0.5, 0.9] {
            let a = elementary_evolution_fractional(&space, 1, u).unwrap();
            let b = elementary_evolution_fractional(&space, 1, 1.0 - u).unwrap();
            let prod = b.compose(&a).unwrap();
            let d = prod.dim();
            let mut worst = 0.0f64;
            for i in 0..d * d {
                worst = worst.max((prod.entries()[i] - full.entries()[i]).norm());
            }
            assert!(worst < 1e-12, "markov residual {worst}");
        }
    }

    #[test]
    fn measure_complete_and_partial() {
        let space = ClockSpace::new(1, 1);
        let basis = space.measurement_basis();
        let e = make_state(&basis, &[(BasisLabel::Off, c(1.0, 0.0))]).unwrap();
        let pe = Projector::new(&basis, vec![BasisLabel::Off]).unwrap();
        let pa = Projector::new(&basis, vec![BasisLabel::Ancilla(1)]).unwrap();
        let dist = measure(&e, &[pe.clone(), pa]).unwrap();
        assert_abs_diff_eq!(dist.probability(Outcome::Label(BasisLabel::Off)), 1.0);
        assert_abs_diff_eq!(dist.probability(Outcome::Label(BasisLabel::Ancilla(1))), 0.0);
        assert_abs_diff_eq!(dist.probability(Outcome::Rest), 0.0);

        let r = 1.0 / 2.0f64.sqrt();
        let s = make_state(
            &basis,
            &[
                (BasisLabel::Off, c(r, 0.0)),
                (BasisLabel::Ancilla(1), c(r, 0.0)),
            ],
        )
        .unwrap();
        let dist = measure(&s, &[pe]).unwrap();
        assert_abs_diff_eq!(
            dist.probability(Outcome::Label(BasisLabel::Off)),
            0.5,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(dist.probability(Outcome::Rest), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn measure_rejects_overlapping_projectors() {
        let basis = ClockSpace::new(1, 1).measurement_basis();
        let s = make_state(&basis, &[(BasisLabel::Off, c(1.0, 0.0))]).unwrap();
        let p1 = Projector::new(&basis, vec![BasisLabel::Off, BasisLabel::Tick(0)]).unwrap();
        let p2 = Projector::new(&basis, vec![BasisLabel::Tick(0)]).unwrap();
        assert!(matches!(
            measure(&s, &[p1, p2]),
            Err(LinalgError::NonOrthogonalProjectors)
        ));
    }

    #[test]
    fn probability_completeness() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let space = ClockSpace::new(2, 3);
        let basis = space.measurement_basis();
        for _ in 0..25 {
            let pairs: Vec<(BasisLabel, Complex64)> = basis
                .labels()
                .iter()
                .map(|&l| {
                    (
                        l,
                        Complex64::new(
                            rng.sample::<f64, _>(rand_distr::StandardNormal),
                            rng.sample::<f64, _>(rand_distr::StandardNormal),
                        ),
                    )
                })
                .collect();
            let s = make_state(&basis, &pairs).unwrap();
            let projectors: Vec<Projector> = basis
                .labels()
                .iter()
                .map(|&l| Projector::new(&basis, vec![l]).unwrap())
                .collect();
            let dist = measure(&s, &projectors).unwrap();
            assert_abs_diff_eq!(dist.total(), 1.0, epsilon = 1e-10);
        }
    }
}
