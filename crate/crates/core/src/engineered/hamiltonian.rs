//! Hamiltonian embedding that freezes a chosen state: subtracting the
//! rank-one correction `H_on |ψ_off⟩⟨ψ_off| H_on / r_0` annihilates
//! `|ψ_off⟩` while leaving the dynamics on the orthogonal branch intact.

use num_complex::Complex64;

use super::EngineeredError;
use crate::numeric::hermitian_exp;
use crate::ontic::HermitianOp;

/// Build `Ĥ = H_on − H_on|ψ_off⟩⟨ψ_off|H_on / r_0`.
pub fn hamiltonian_embed(
    h_on: &HermitianOp,
    psi_off: &[Complex64],
) -> Result<HermitianOp, EngineeredError> {
    let d = h_on.dim();
    assert_eq!(psi_off.len(), d);
    let h = h_on.entries();
    let mut h_psi = vec![Complex64::new(0.0, 0.0); d];
    for i in 0..d {
        for j in 0..d {
            h_psi[i] += h[i * d + j] * psi_off[j];
        }
    }
    let r0: Complex64 = psi_off
        .iter()
        .zip(&h_psi)
        .map(|(p, hp)| p.conj() * hp)
        .sum();
    if r0.norm() < 1e-12 {
        return Err(EngineeredError::DegenerateR0(r0.norm()));
    }
    let mut out = h.to_vec();
    for i in 0..d {
        for j in 0..d {
            out[i * d + j] -= h_psi[i] * h_psi[j].conj() / r0;
        }
    }
    HermitianOp::new(d, out).map_err(|_| EngineeredError::DegenerateR0(r0.norm()))
}

/// Residuals of the embedding on a time grid.
#[derive(Clone, Copy, Debug)]
pub struct EmbedCheck {
    /// `max_t ‖e^{-itĤ}|ψ_off⟩ − |ψ_off⟩‖`.
    pub stationary_residual: f64,
    /// `max_t ‖e^{-itĤ}|ψ_on⟩ − e^{-itH_on}|ψ_on⟩‖`.
    pub dynamics_residual: f64,
}

/// Verify the two embedding identities, given that `⟨ψ_off|ψ_on(t)⟩ = 0`
/// holds on the grid.
pub fn verify_embedding(
    h_on: &HermitianOp,
    psi_off: &[Complex64],
    psi_on: &[Complex64],
    t_grid: &[f64],
) -> Result<EmbedCheck, EngineeredError> {
    let d = h_on.dim();
    let embedded = hamiltonian_embed(h_on, psi_off)?;
    let mut stationary = 0.0f64;
    let mut dynamics = 0.0f64;
    for &t in t_grid {
        let u_emb = hermitian_exp(embedded.entries(), d, t);
        let u_on = hermitian_exp(h_on.entries(), d, t);
        let apply = |m: &[Complex64], v: &[Complex64]| -> Vec<Complex64> {
            (0..d)
                .map(|i| (0..d).map(|j| m[i * d + j] * v[j]).sum())
                .collect()
        };
        let frozen = apply(&u_emb, psi_off);
        let rs: f64 = frozen
            .iter()
            .zip(psi_off)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        stationary = stationary.max(rs);
        let via_emb = apply(&u_emb, psi_on);
        let via_on = apply(&u_on, psi_on);
        let rd: f64 = via_emb
            .iter()
            .zip(&via_on)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        dynamics = dynamics.max(rd);
    }
    Ok(EmbedCheck {
        stationary_residual: stationary,
        dynamics_residual: dynamics,
    })
}

/// Random instance with `⟨ψ_off|ψ_on(t)⟩ = 0` for all `t`: the two states
/// are built on disjoint eigenvector supports of a random Hermitian matrix.
pub fn random_embedding_instance(
    dim: usize,
    seed: u64,
) -> (HermitianOp, Vec<Complex64>, Vec<Complex64>) {
    use rand::prelude::*;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut h = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            h[i * dim + i] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
            for j in i + 1..dim {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                h[i * dim + j] = z;
                h[j * dim + i] = z.conj();
            }
        }
        let (_, vecs) = crate::numeric::hermitian_eigen(&h, dim);
        let column = |k: usize| -> Vec<Complex64> { (0..dim).map(|r| vecs[r * dim + k]).collect() };
        let combine = |ks: &[usize], rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Complex64> {
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            for &k in ks {
                let w = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                for (vi, ci) in v.iter_mut().zip(column(k)) {
                    *vi += w * ci;
                }
            }
            let n = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            for vi in &mut v {
                *vi /= n;
            }
            v
        };
        let half = dim / 2;
        let off_support: Vec<usize> = (0..half).collect();
        let on_support: Vec<usize> = (half..dim).collect();
        let psi_off = combine(&off_support, &mut rng);
        let psi_on = combine(&on_support, &mut rng);
        // resample when the diagonal matrix element is too small
        let op = HermitianOp::new(dim, h).expect("hermitian by construction");
        let he = op.entries();
        let mut h_psi = vec![Complex64::new(0.0, 0.0); dim];
        for i in 0..dim {
            for j in 0..dim {
                h_psi[i] += he[i * dim + j] * psi_off[j];
            }
        }
        let r0: Complex64 = psi_off
            .iter()
            .zip(&h_psi)
            .map(|(p, hp)| p.conj() * hp)
            .sum();
        if r0.norm() > 0.05 {
            return (op, psi_off, psi_on);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn diagonal_h_annihilates_eigenvector() {
        let d = 3;
        let mut h = vec![Complex64::new(0.0, 0.0); d * d];
        h[0] = Complex64::new(2.0, 0.0);
        h[4] = Complex64::new(1.0, 0.0);
        h[8] = Complex64::new(-1.0, 0.0);
        let h_on = HermitianOp::new(d, h).unwrap();
        let psi_off = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let emb = hamiltonian_embed(&h_on, &psi_off).unwrap();
        // Ĥ|ψ_off⟩ = 0
        for i in 0..d {
            let v: Complex64 = (0..d).map(|j| emb.entries()[i * d + j] * psi_off[j]).sum();
            assert_abs_diff_eq!(v.norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn random_instances_satisfy_identities() {
        let grid: Vec<f64> = (0..7).map(|i| i as f64 * 0.6).collect();
        for seed in 0..5 {
            let (h_on, psi_off, psi_on) = random_embedding_instance(6, seed);
            let check = verify_embedding(&h_on, &psi_off, &psi_on, &grid).unwrap();
            assert!(check.stationary_residual < 1e-9, "{check:?}");
            assert!(check.dynamics_residual < 1e-9, "{check:?}");
        }
    }

    #[test]
    fn t_zero_is_exact() {
        let (h_on, psi_off, psi_on) = random_embedding_instance(6, 99);
        let check = verify_embedding(&h_on, &psi_off, &psi_on, &[0.0]).unwrap();
        assert!(check.stationary_residual < 1e-12);
        assert!(check.dynamics_residual < 1e-12);
    }

    #[test]
    fn degenerate_r0_rejected() {
        let d = 2;
        let mut h = vec![Complex64::new(0.0, 0.0); d * d];
        h[1] = Complex64::new(1.0, 0.0);
        h[2] = Complex64::new(1.0, 0.0);
        let h_on = HermitianOp::new(d, h).unwrap();
        // ⟨ψ|H|ψ⟩ = 0 for a basis state of the off-diagonal coupling
        let psi = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        assert!(matches!(
            hamiltonian_embed(&h_on, &psi),
            Err(EngineeredError::DegenerateR0(_))
        ));
    }
}
