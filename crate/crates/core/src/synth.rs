//! Construction and validation of the measurement unitary `U_m`.
//!
//! The constrained block of `U_m'` is described most naturally in the
//! row-vector convention (kets as rows); this module builds that table
//! explicitly and transposes it into the standard column convention used
//! by [`crate::linalg`].

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{Basis, BasisLabel, ClockSpace, LinalgError, UnitaryMatrix};
use crate::numeric::{complete_orthonormal_columns, symmetric_lambda_max, symmetric_sqrt_psd};
use crate::protocol::{ClockSpec, OutcomeConvention, ProtocolError};

#[derive(Error, Debug)]
pub enum SynthError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error("r must be nonzero")]
    ZeroR,
    #[error("tilde_a must have length N_T + 1 = {expected}, got {got}")]
    BadTildeALength { expected: usize, got: usize },
    #[error("tilde_gamma must have length N_T + 2 = {expected}, got {got}")]
    BadTildeGammaLength { expected: usize, got: usize },
    #[error("all tilde_a entries are zero")]
    DegenerateTildeA,
    #[error("lifting correction matrix not positive semidefinite (min eigenvalue {0:.3e})")]
    LiftNotPsd(f64),
    #[error("dimension mismatch: unitary has dim {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Parameters of the general `U_m` synthesis.
#[derive(Clone, Debug)]
pub struct SynthRequest {
    pub n_ticks: u32,
    /// `Ã_0^0 … Ã_{N_T}^0`, length `N_T + 1`.
    pub tilde_a: Vec<f64>,
    /// `γ̃_0 … γ̃_{N_T+1}`, length `N_T + 2`.
    pub tilde_gamma: Vec<f64>,
    /// `r = c/s`, nonzero.
    pub r: f64,
}

impl SynthRequest {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.r == 0.0 {
            return Err(SynthError::ZeroR);
        }
        let want_a = self.n_ticks as usize + 1;
        if self.tilde_a.len() != want_a {
            return Err(SynthError::BadTildeALength {
                expected: want_a,
                got: self.tilde_a.len(),
            });
        }
        let want_g = self.n_ticks as usize + 2;
        if self.tilde_gamma.len() != want_g {
            return Err(SynthError::BadTildeGammaLength {
                expected: want_g,
                got: self.tilde_gamma.len(),
            });
        }
        if self.tilde_a.iter().all(|&a| a == 0.0) {
            return Err(SynthError::DegenerateTildeA);
        }
        Ok(())
    }

    /// Random request with entries in `[-1, 1]` and the given `r`.
    pub fn random(n_ticks: u32, r: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tilde_a: Vec<f64> = (0..=n_ticks).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if tilde_a.iter().all(|&a| a.abs() < 1e-3) {
            tilde_a[0] = 1.0;
        }
        let tilde_gamma = (0..n_ticks + 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
        SynthRequest {
            n_ticks,
            tilde_a,
            tilde_gamma,
            r,
        }
    }
}

/// Structural validation report for a `U_m'` candidate.
#[derive(Clone, Debug)]
pub struct StructureReport {
    pub pattern_ok: bool,
    /// Scale factor from the synthesis; absent when only validating.
    pub gamma: Option<f64>,
    pub unitarity_residual: f64,
    /// Off-branch amplitudes `A_k^0` read from the matrix.
    pub extracted_a: Vec<f64>,
    /// Named residual per structural constraint.
    pub residuals: Vec<(String, f64)>,
}

const PATTERN_TOL: f64 = 1e-10;

/// The displayed (row-vector convention) table for the constrained block.
///
/// Returns the first `N_T + 2` columns of the table as vectors over the
/// rows `(E, τ_0, …, τ_{N_T})`, before scaling by `γ`.
fn constrained_columns(req: &SynthRequest) -> Vec<Vec<f64>> {
    let nt = req.n_ticks as usize;
    let rows = nt + 2;
    let mut cols = Vec::with_capacity(rows);
    for k in 0..=nt {
        let mut col = vec![0.0; rows];
        col[0] = req.tilde_a[k];
        for (i, entry) in col.iter_mut().enumerate().skip(1) {
            let tick = i - 1;
            *entry = if tick == k {
                0.0
            } else {
                -req.tilde_a[k] * req.r
            };
        }
        cols.push(col);
    }
    cols.push(req.tilde_gamma.clone());
    cols
}

/// Append lifting coordinates making a vector family orthogonal.
///
/// For `n` input vectors the Gramian `G` is formed, `c* = λ_max(G)` and the
/// symmetric PSD square root `X = (c*·1 − G)^{1/2}` is taken; column `j` of
/// `X` is the lift `x_j`, so the combined Gramian is `c*·1`.
pub fn dimensional_lift(vectors: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, SynthError> {
    let n = vectors.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut gram = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            gram[i * n + j] = vectors[i]
                .iter()
                .zip(&vectors[j])
                .map(|(a, b)| a * b)
                .sum();
        }
    }
    let cstar = symmetric_lambda_max(&gram, n);
    let mut corr = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            corr[i * n + j] = if i == j { cstar } else { 0.0 } - gram[i * n + j];
        }
    }
    let x = symmetric_sqrt_psd(&corr, n, 1e-10).map_err(SynthError::LiftNotPsd)?;
    Ok((0..n).map(|j| (0..n).map(|i| x[i * n + j]).collect()).collect())
}

/// Build the permutation `U_ex` exchanging `τ_{k-1} ↔ A_k` for `k ≤ N_T`.
fn u_exchange(space: &ClockSpace) -> UnitaryMatrix {
    let basis = space.measurement_basis();
    let d = basis.dim();
    let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
    let one = Complex64::new(1.0, 0.0);
    let mut image = |from: BasisLabel, to: BasisLabel| {
        let c = basis.position(from).unwrap();
        let r = basis.position(to).unwrap();
        entries[r * d + c] = one;
    };
    for &label in basis.labels() {
        match label {
            BasisLabel::Tick(l) if l < space.n_ticks => image(label, BasisLabel::Ancilla(l + 1)),
            BasisLabel::Ancilla(j) if j <= space.n_ticks => image(label, BasisLabel::Tick(j - 1)),
            other => image(other, other),
        }
    }
    UnitaryMatrix::new(basis, entries).expect("permutation is unitary")
}

fn table_to_unitary(basis: Basis, table: &[Vec<f64>]) -> Result<UnitaryMatrix, LinalgError> {
    // table[row][col] in the row-vector convention; standard form is the
    // transpose.
    let d = basis.dim();
    let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
    for r in 0..d {
        for c in 0..d {
            entries[c * d + r] = Complex64::new(table[r][c], 0.0);
        }
    }
    UnitaryMatrix::new(basis, entries)
}

/// The canonical two-time clock: `U_m = U_ex U_m'` with the `±√(1/3)`
/// table and `θ = π/4`.
pub fn um_nt1_canonical() -> ClockSpec {
    let space = ClockSpace::new(1, 1);
    let s3 = (1.0f64 / 3.0).sqrt();
    // rows/cols ordered (E, τ0, τ1, A1)
    let table = vec![
        vec![s3, s3, s3, 0.0],
        vec![0.0, -s3, s3, -s3],
        vec![-s3, 0.0, s3, s3],
        vec![s3, -s3, 0.0, s3],
    ];
    let um_prime =
        table_to_unitary(space.measurement_basis(), &table).expect("canonical table is unitary");
    let um = u_exchange(&space)
        .compose(&um_prime)
        .expect("same measurement basis");
    ClockSpec::new(
        space,
        std::f64::consts::FRAC_PI_4,
        um,
        OutcomeConvention::AncillaRegister,
    )
    .expect("canonical spec is valid")
}

/// Synthesize a measurement unitary for arbitrary `N_T` from scaled target
/// amplitudes; returns the clock spec and the scale `γ`.
///
/// The constrained columns are lifted to an orthogonal family, normalized
/// by `γ = 1/√(λ_max(Gram))`, and completed to a unitary with canonical
/// basis seeds (skipping seeds within `1e-8` of the current span).
pub fn synth_um_general(req: &SynthRequest) -> Result<(ClockSpec, f64), SynthError> {
    req.validate()?;
    let nt = req.n_ticks as usize;
    let block = nt + 2;
    let m = 2 * block; // ancilla count
    let dim = block + m;

    let e_cols = constrained_columns(req);
    let lifts = dimensional_lift(&e_cols)?;
    let mut gram_max = 0.0f64;
    for j in 0..block {
        let norm2: f64 = e_cols[j].iter().map(|v| v * v).sum::<f64>()
            + lifts[j].iter().map(|v| v * v).sum::<f64>();
        gram_max = gram_max.max(norm2);
    }
    let gamma = 1.0 / gram_max.sqrt();

    // columns of the displayed table, length `dim`
    let mut full_cols: Vec<Vec<Complex64>> = Vec::with_capacity(block);
    for j in 0..block {
        let mut col = Vec::with_capacity(dim);
        col.extend(e_cols[j].iter().map(|&v| Complex64::new(gamma * v, 0.0)));
        col.extend(lifts[j].iter().map(|&v| Complex64::new(gamma * v, 0.0)));
        col.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(block));
        full_cols.push(col);
    }
    let completed = complete_orthonormal_columns(&full_cols, dim);

    // assemble the displayed table: constrained columns occupy the
    // (E, τ_0..τ_{N_T}) column slots, completion fills the ancilla slots
    let mut table = vec![vec![0.0f64; dim]; dim];
    for (j, col) in completed.iter().enumerate() {
        for (r, v) in col.iter().enumerate() {
            table[r][j] = v.re;
        }
    }

    let space = ClockSpace::new(req.n_ticks, m as u32);
    let um_prime = table_to_unitary(space.measurement_basis(), &table)?;
    let um = u_exchange(&space).compose(&um_prime)?;
    let theta = 1.0f64.atan2(req.r);
    let spec = ClockSpec::new(space, theta, um, OutcomeConvention::AncillaRegister)?;
    Ok((spec, gamma))
}

/// Recover `U_m'` from a spec built with the ancilla-register convention.
pub fn um_prime_of(spec: &ClockSpec) -> UnitaryMatrix {
    let uex = u_exchange(&spec.space());
    // U_ex is an involution, so U_m' = U_ex · U_m.
    uex.compose(spec.um()).expect("same measurement basis")
}

/// Check a candidate `U_m'` against the fixed structural pattern.
pub fn validate_um_structure(
    um_prime: &UnitaryMatrix,
    n_ticks: u32,
    m: u32,
    r: f64,
) -> Result<StructureReport, SynthError> {
    let space = ClockSpace::new(n_ticks, m);
    let expected = space.measurement_basis().dim();
    if um_prime.dim() != expected {
        return Err(SynthError::DimensionMismatch {
            expected,
            got: um_prime.dim(),
        });
    }
    // Displayed-table entry (row, col) is the standard entry (col, row).
    let tab = |row: BasisLabel, col: BasisLabel| um_prime.entry(col, row).unwrap();
    let col_label = |k: u32| {
        if k == 0 {
            BasisLabel::Off
        } else {
            BasisLabel::Tick(k - 1)
        }
    };

    let mut residuals = Vec::new();
    let mut extracted_a = Vec::new();
    let mut worst = 0.0f64;
    for k in 0..=n_ticks {
        let col = col_label(k);
        let a_k = tab(BasisLabel::Off, col);
        extracted_a.push(a_k.re);
        for tick in 0..=n_ticks {
            let entry = tab(BasisLabel::Tick(tick), col);
            let (name, res) = if tick == k {
                (format!("zero[tau{tick},col{k}]"), entry.norm())
            } else {
                (
                    format!("repeat[tau{tick},col{k}]"),
                    (entry + a_k * r).norm(),
                )
            };
            worst = worst.max(res);
            residuals.push((name, res));
        }
    }
    let unitarity_residual = um_prime.unitarity_residual();
    Ok(StructureReport {
        pattern_ok: worst <= PATTERN_TOL && unitarity_residual <= PATTERN_TOL,
        gamma: None,
        unitarity_residual,
        extracted_a,
        residuals,
    })
}

/// Outcome of the no-ancilla impossibility search.
#[derive(Clone, Copy, Debug)]
pub struct NoAncillaReport {
    /// `max` over trials of `min(P_cf^(0), P_cf^(1))`.
    pub best_min_probability: f64,
    /// `max` over trials of `|A_0^0 · A_1^0|` after convergence.
    pub max_amplitude_product: f64,
    pub trials: u32,
}

/// Search for a 3×3 ancilla-free measurement unitary giving two nonzero
/// counterfactual probabilities.
///
/// Each trial alternates between forcing the structural pattern and
/// re-orthonormalizing the columns; column orthogonality drives
/// `A_0^0 · A_1^0` to zero, so the best achievable `min(P_0, P_1)` stays
/// at rounding level.
pub fn no_ancilla_search(trials: u32, seed: u64) -> NoAncillaReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    let mut max_product = 0.0f64;
    for _ in 0..trials {
        let r: f64 = {
            let mag = rng.gen_range(0.2..5.0);
            if rng.gen_bool(0.5) {
                mag
            } else {
                -mag
            }
        };
        let (p0, p1, prod) = constrained_trial(&mut rng, r);
        best = best.max(p0.min(p1));
        max_product = max_product.max(prod);
    }
    NoAncillaReport {
        best_min_probability: best,
        max_amplitude_product: max_product,
        trials,
    }
}

/// One deterministic degenerate pattern with the full weight on `A_0^0`
/// (`which = 0`) or `A_1^0` (`which = 1`); the other probability is zero
/// exactly.
pub fn no_ancilla_degenerate(which: u32, r: f64) -> (f64, f64) {
    let theta = 1.0f64.atan2(r);
    let c2 = theta.cos().powi(2);
    let a = 1.0 / (1.0 + r * r).sqrt();
    match which {
        0 => (c2 * a * a, 0.0),
        _ => (0.0, c2 * a * a),
    }
}

fn constrained_trial(rng: &mut ChaCha8Rng, r: f64) -> (f64, f64, f64) {
    // displayed 3x3 table (rows E, τ0, τ1), columns (E, τ0, τ1); the two
    // forced zeros make the first two columns' inner product collapse to
    // A_0^0 · A_1^0, so unitarity drives that product to zero
    let mut t = [[0.0f64; 3]; 3];
    for row in t.iter_mut() {
        for v in row.iter_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
    }
    for _ in 0..100 {
        t[1][0] = 0.0;
        t[2][1] = 0.0;
        // column orthonormalization (modified Gram-Schmidt)
        for j in 0..3 {
            for k in 0..j {
                let ip: f64 = (0..3).map(|i| t[i][k] * t[i][j]).sum();
                for i in 0..3 {
                    t[i][j] -= ip * t[i][k];
                }
            }
            let nrm: f64 = (0..3).map(|i| t[i][j] * t[i][j]).sum::<f64>().sqrt();
            if nrm < 1e-14 {
                t[j][j] = 1.0;
            } else {
                for i in 0..3 {
                    t[i][j] /= nrm;
                }
            }
        }
        if t[1][0].abs().max(t[2][1].abs()) < 1e-14 {
            break;
        }
    }
    // snap onto the constraint manifold along the branch the iteration is
    // converging to: with the zeros restored, ⟨col_E, col_τ0⟩ = A00·A10,
    // so exactly one of the two first-row entries survives
    t[1][0] = 0.0;
    t[2][1] = 0.0;
    if t[0][0].abs() >= t[0][1].abs() {
        let n0 = (t[0][0] * t[0][0] + t[2][0] * t[2][0]).sqrt();
        t[0][0] /= n0;
        t[2][0] /= n0;
        t[0][1] = 0.0;
        t[1][1] = t[1][1].signum();
        // col2 = col0 x col1
        t[0][2] = -t[2][0] * t[1][1];
        t[1][2] = 0.0;
        t[2][2] = t[0][0] * t[1][1];
    } else {
        let n1 = (t[0][1] * t[0][1] + t[1][1] * t[1][1]).sqrt();
        t[0][1] /= n1;
        t[1][1] /= n1;
        t[0][0] = 0.0;
        t[2][0] = t[2][0].signum();
        t[0][2] = t[1][1] * t[2][0];
        t[1][2] = -t[0][1] * t[2][0];
        t[2][2] = 0.0;
    }
    let theta = 1.0f64.atan2(r);
    let c2 = theta.cos().powi(2);
    let a00 = t[0][0];
    let a10 = t[0][1];
    (c2 * a00 * a00, c2 * a10 * a10, (a00 * a10).abs())
}
