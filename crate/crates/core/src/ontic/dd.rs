//! Double description enumeration of dual-cone extreme rays.
//!
//! Given generators `r_1..r_m` spanning `R^d`, the dual cone
//! `C* = {w : ⟨r_i, w⟩ ≥ 0}` is built facet by facet: start from the
//! simplicial cone cut out by `d` independent generators and insert the
//! remaining halfspaces one at a time, combining adjacent rays across each
//! new hyperplane.

use thiserror::Error;

/// Pivot/zero tolerance: inner products below this are treated as zero.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Error, Debug)]
pub enum DdError {
    #[error("no input rays")]
    Empty,
    #[error("input rays are rank deficient: rank {rank} < dim {dim}")]
    RankDeficient { rank: usize, dim: usize },
    #[error("inconsistent ray dimensions")]
    RaggedInput,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solve `A x = e_j` for the columns of the inverse via Gauss elimination
/// with partial pivoting. `a` is row-major `d × d`.
fn invert(a: &[f64], d: usize) -> Option<Vec<f64>> {
    let mut m = vec![0.0; d * 2 * d];
    for i in 0..d {
        for j in 0..d {
            m[i * 2 * d + j] = a[i * d + j];
        }
        m[i * 2 * d + d + i] = 1.0;
    }
    for col in 0..d {
        let mut piv = col;
        for r in col + 1..d {
            if m[r * 2 * d + col].abs() > m[piv * 2 * d + col].abs() {
                piv = r;
            }
        }
        if m[piv * 2 * d + col].abs() < ZERO_TOL {
            return None;
        }
        if piv != col {
            for j in 0..2 * d {
                m.swap(col * 2 * d + j, piv * 2 * d + j);
            }
        }
        let p = m[col * 2 * d + col];
        for j in 0..2 * d {
            m[col * 2 * d + j] /= p;
        }
        for r in 0..d {
            if r == col {
                continue;
            }
            let f = m[r * 2 * d + col];
            if f == 0.0 {
                continue;
            }
            for j in 0..2 * d {
                m[r * 2 * d + j] -= f * m[col * 2 * d + j];
            }
        }
    }
    let mut inv = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            inv[i * d + j] = m[i * 2 * d + d + j];
        }
    }
    Some(inv)
}

/// Greedily pick `d` rows of full rank; returns their indices or the rank
/// reached.
fn independent_rows(rows: &[Vec<f64>], d: usize) -> Result<Vec<usize>, usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        for b in &basis {
            let ip = dot(b, &v);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= ip * bi;
            }
        }
        let n = norm(&v);
        if n > 1e-9 * norm(row).max(1.0) {
            for vi in &mut v {
                *vi /= n;
            }
            basis.push(v);
            chosen.push(i);
            if chosen.len() == d {
                return Ok(chosen);
            }
        }
    }
    Err(chosen.len())
}

struct Ray {
    v: Vec<f64>,
    /// Indices of processed constraints tight at this ray.
    tight: Vec<u64>,
}

fn bitset_set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn bitset_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Extreme rays of the dual cone of `cone(rays)`.
///
/// Output rays have unit Euclidean norm and are sorted lexicographically.
/// Rank-deficient input is an error: the dual would contain a lineality
/// space and have no extreme rays.
pub fn enumerate_extreme_rays(rays: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, DdError> {
    if rays.is_empty() {
        return Err(DdError::Empty);
    }
    let d = rays[0].len();
    if rays.iter().any(|r| r.len() != d) {
        return Err(DdError::RaggedInput);
    }
    let m = rays.len();
    let initial =
        independent_rows(rays, d).map_err(|rank| DdError::RankDeficient { rank, dim: d })?;

    let words = m.div_ceil(64);
    let mut a0 = vec![0.0; d * d];
    for (r, &idx) in initial.iter().enumerate() {
        for c in 0..d {
            a0[r * d + c] = rays[idx][c];
        }
    }
    let inv = invert(&a0, d).ok_or(DdError::RankDeficient { rank: d - 1, dim: d })?;

    // Columns of the inverse satisfy ⟨a_r, w_c⟩ = δ_rc ≥ 0.
    let mut current: Vec<Ray> = (0..d)
        .map(|c| {
            let mut v: Vec<f64> = (0..d).map(|r| inv[r * d + c]).collect();
            let n = norm(&v);
            for vi in &mut v {
                *vi /= n;
            }
            let mut tight = vec![0u64; words];
            for (r, &idx) in initial.iter().enumerate() {
                if r != c {
                    bitset_set(&mut tight, idx);
                }
            }
            Ray { v, tight }
        })
        .collect();

    let mut processed: Vec<usize> = initial.clone();
    let mut in_initial = vec![false; m];
    for &i in &initial {
        in_initial[i] = true;
    }

    for ci in (0..m).filter(|i| !in_initial[*i]) {
        let a = &rays[ci];
        let vals: Vec<f64> = current.iter().map(|r| dot(a, &r.v)).collect();
        let scale = norm(a).max(1.0);
        let sign = |v: f64| -> i8 {
            if v > ZERO_TOL * scale {
                1
            } else if v < -ZERO_TOL * scale {
                -1
            } else {
                0
            }
        };
        if vals.iter().all(|&v| sign(v) >= 0) {
            for (ray, &v) in current.iter_mut().zip(&vals) {
                if sign(v) == 0 {
                    bitset_set(&mut ray.tight, ci);
                }
            }
            processed.push(ci);
            continue;
        }

        let pos: Vec<usize> = (0..current.len()).filter(|&i| sign(vals[i]) > 0).collect();
        let neg: Vec<usize> = (0..current.len()).filter(|&i| sign(vals[i]) < 0).collect();
        let zero: Vec<usize> = (0..current.len()).filter(|&i| sign(vals[i]) == 0).collect();

        let mut next: Vec<Ray> = Vec::with_capacity(pos.len() + zero.len() + pos.len());
        for &i in pos.iter().chain(&zero) {
            let mut tight = current[i].tight.clone();
            if sign(vals[i]) == 0 {
                bitset_set(&mut tight, ci);
            }
            next.push(Ray {
                v: current[i].v.clone(),
                tight,
            });
        }
        for &ip in &pos {
            for &ineg in &neg {
                let common: Vec<u64> = current[ip]
                    .tight
                    .iter()
                    .zip(&current[ineg].tight)
                    .map(|(x, y)| x & y)
                    .collect();
                // adjacency: no third ray's tight set contains the meet
                let adjacent = current.iter().enumerate().all(|(j, other)| {
                    j == ip || j == ineg || !bitset_subset(&common, &other.tight)
                });
                if !adjacent {
                    continue;
                }
                let mut v: Vec<f64> = current[ip]
                    .v
                    .iter()
                    .zip(&current[ineg].v)
                    .map(|(p, n)| vals[ip] * n - vals[ineg] * p)
                    .collect();
                let nv = norm(&v);
                if nv < ZERO_TOL {
                    continue;
                }
                for vi in &mut v {
                    *vi /= nv;
                }
                let mut tight = common;
                bitset_set(&mut tight, ci);
                // refresh tightness against all processed constraints
                for &pc in &processed {
                    if dot(&rays[pc], &v).abs() <= ZERO_TOL * norm(&rays[pc]).max(1.0) {
                        bitset_set(&mut tight, pc);
                    }
                }
                next.push(Ray { v, tight });
            }
        }
        processed.push(ci);
        current = next;
    }

    let mut out: Vec<Vec<f64>> = current.into_iter().map(|r| r.v).collect();
    dedup_rays(&mut out);
    out.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| *o != std::cmp::Ordering::Equal)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

fn dedup_rays(rays: &mut Vec<Vec<f64>>) {
    let mut keep: Vec<Vec<f64>> = Vec::with_capacity(rays.len());
    'outer: for r in rays.drain(..) {
        for k in &keep {
            let ip = dot(&r, k);
            if (ip - 1.0).abs() < 1e-9 {
                continue 'outer;
            }
        }
        keep.push(r);
    }
    *rays = keep;
}

/// Indices of the extremal generators of `cone(rays)`.
///
/// A generator is extremal when the dual facets tight at it span a
/// `(d-1)`-dimensional space, i.e. the generator lies on an edge of the
/// cone. Duplicates (up to positive scaling) keep only their first
/// occurrence.
pub fn extremal_generators(rays: &[Vec<f64>]) -> Result<Vec<usize>, DdError> {
    let d = rays[0].len();
    let facets = enumerate_extreme_rays(rays)?;
    let mut keep = Vec::new();
    let mut seen: Vec<Vec<f64>> = Vec::new();
    'outer: for (i, r) in rays.iter().enumerate() {
        let rn = norm(r);
        if rn < ZERO_TOL {
            continue;
        }
        let unit: Vec<f64> = r.iter().map(|x| x / rn).collect();
        for s in &seen {
            if (dot(&unit, s) - 1.0).abs() < 1e-9 {
                continue 'outer;
            }
        }
        let tight: Vec<&Vec<f64>> = facets
            .iter()
            .filter(|f| dot(f, &unit).abs() <= 1e-9)
            .collect();
        // rank of the tight facet normals
        let mut basis: Vec<Vec<f64>> = Vec::new();
        for f in tight {
            let mut v = (*f).clone();
            for b in &basis {
                let ip = dot(b, &v);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= ip * bi;
                }
            }
            let n = norm(&v);
            if n > 1e-8 {
                for vi in &mut v {
                    *vi /= n;
                }
                basis.push(v);
            }
        }
        if basis.len() == d - 1 {
            keep.push(i);
            seen.push(unit);
        }
    }
    Ok(keep)
}
