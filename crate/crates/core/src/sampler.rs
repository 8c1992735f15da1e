//! Simulated projection measurements on dilated output vectors.
//!
//! Sampling uses xoshiro256++ seeded through `seed_from_u64` (SplitMix64
//! expansion of the 64-bit seed). Each shot draws `u = (next_u64 >> 11) · 2⁻⁵³`
//! and selects the first coordinate whose cumulative probability exceeds `u`.
//! Branch seeds are `seed ⊕ branch_hash(i, k, step)`; see [`branch_seed`].

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::evolve::{BranchId, BranchOutput, Method, Observable};
use crate::matrix::ComplexVector;
use crate::STATE_TOL;

/// Shot count used when none is given.
pub const DEFAULT_SHOTS: u64 = 8192;

/// Outcome counts of `shots` projection measurements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotRecord {
    pub shots: u64,
    pub counts: Vec<u64>,
    pub seed: u64,
}

impl ShotRecord {
    /// Observed frequency of coordinate `j`.
    pub fn frequency(&self, j: usize) -> f64 {
        self.counts[j] as f64 / self.shots as f64
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `seed ⊕ h`, with `h = mix(mix(mix(e) ⊕ k) ⊕ step)`, `mix` the SplitMix64
/// finalizer and `e = i + 1` for ensemble member `i` (0 for the vectorized method).
pub fn branch_seed(seed: u64, id: BranchId, step: u64) -> u64 {
    let e = id.ensemble.map_or(0, |i| i as u64 + 1);
    let h = splitmix64(splitmix64(splitmix64(e) ^ id.kraus as u64) ^ step);
    seed ^ h
}

/// Draws `shots` samples from `p_j = |v_j|²`.
pub fn sample_output(v: &ComplexVector, shots: u64, seed: u64) -> Result<ShotRecord> {
    let norm = v.norm();
    if (norm - 1.0).abs() > STATE_TOL {
        return Err(Error::NotNormalized(norm));
    }
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1"));
    }
    let mut cdf = Vec::with_capacity(v.dim());
    let mut acc = 0.0;
    for z in v.as_slice() {
        acc += z.norm_sqr();
        cdf.push(acc);
    }
    let last = cdf.len() - 1;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let mut counts = alloc::vec![0u64; v.dim()];
    for _ in 0..shots {
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64) * acc;
        let j = cdf.partition_point(|&c| c <= u).min(last);
        counts[j] += 1;
    }
    Ok(ShotRecord {
        shots,
        counts,
        seed,
    })
}

/// Samples every branch with its derived seed.
pub fn sample_branches(
    branches: &[BranchOutput],
    shots: u64,
    seed: u64,
    step: u64,
) -> Result<BTreeMap<BranchId, ShotRecord>> {
    branches
        .iter()
        .map(|b| {
            Ok((
                b.id,
                sample_output(&b.vector, shots, branch_seed(seed, b.id, step))?,
            ))
        })
        .collect()
}

/// `(Σ_{j<n} counts_j) / shots`.
pub fn estimate_first_block_probability(record: &ShotRecord, base_dim: usize) -> f64 {
    let hits: u64 = record.counts.iter().take(base_dim).sum();
    hits as f64 / record.shots as f64
}

fn record_for(records: &BTreeMap<BranchId, ShotRecord>, id: BranchId) -> Result<&ShotRecord> {
    records.get(&id).ok_or(Error::MissingBranch {
        ensemble: id.ensemble,
        kraus: id.kraus,
    })
}

fn populations_with(
    branches: &[BranchOutput],
    mut prob: impl FnMut(&BranchOutput, usize) -> Result<f64>,
) -> Result<Vec<f64>> {
    let n = branches.first().map_or(0, |b| b.system_dim);
    let mut pops = alloc::vec![0.0; n];
    for b in branches {
        for (j, pop) in pops.iter_mut().enumerate() {
            let p = prob(b, b.population_index(j))?;
            *pop += b.weight
                * match b.method {
                    Method::Ensemble => p,
                    Method::Vectorized => b.scale * libm::sqrt(p),
                };
        }
    }
    Ok(pops)
}

fn tilde_with(
    branches: &[BranchOutput],
    mut prob: impl FnMut(&BranchOutput, usize) -> Result<f64>,
) -> Result<f64> {
    let mut total = 0.0;
    for b in branches {
        let n = b.system_dim;
        let mut sum = 0.0;
        match b.method {
            Method::Ensemble => {
                for j in 0..n {
                    sum += prob(b, j)?;
                }
            }
            Method::Vectorized => {
                for j in 0..n {
                    sum += b.scale * libm::sqrt(prob(b, b.population_index(j))?);
                }
            }
        }
        total += b.weight * sum;
    }
    Ok(total)
}

/// Population estimates from shot records. Ensemble branches contribute
/// `p_i · counts_j / shots`; vectorized branches contribute
/// `‖ρ‖_HS · √(counts_{jn+j} / shots)`.
pub fn estimate_populations(
    branches: &[BranchOutput],
    records: &BTreeMap<BranchId, ShotRecord>,
) -> Result<Vec<f64>> {
    populations_with(branches, |b, idx| {
        Ok(record_for(records, b.id)?.frequency(idx))
    })
}

/// Estimate of `⟨Õ⟩` from observable-pipeline shot records.
pub fn estimate_tilde_expectation(
    branches: &[BranchOutput],
    records: &BTreeMap<BranchId, ShotRecord>,
) -> Result<f64> {
    let mut total = 0.0;
    for b in branches {
        let r = record_for(records, b.id)?;
        total += match b.method {
            Method::Ensemble => b.weight * estimate_first_block_probability(r, b.system_dim),
            Method::Vectorized => {
                tilde_with(core::slice::from_ref(b), |_, idx| Ok(r.frequency(idx)))?
            }
        };
    }
    Ok(total)
}

/// `2‖O‖_HS ⟨Õ⟩ − ‖O‖_HS` with `⟨Õ⟩` estimated from shots.
pub fn estimate_expectation(
    branches: &[BranchOutput],
    records: &BTreeMap<BranchId, ShotRecord>,
    obs: &Observable,
) -> Result<f64> {
    Ok(obs.expectation_from_tilde(estimate_tilde_expectation(branches, records)?))
}

/// [`estimate_populations`] with exact probabilities in place of frequencies.
pub fn exact_limit_populations(branches: &[BranchOutput]) -> Vec<f64> {
    populations_with(branches, |b, idx| Ok(b.vector[idx].norm_sqr()))
        .expect("exact probabilities are infallible")
}

/// [`estimate_expectation`] with exact probabilities in place of frequencies.
pub fn exact_limit_expectation(branches: &[BranchOutput], obs: &Observable) -> f64 {
    let tilde = tilde_with(branches, |b, idx| Ok(b.vector[idx].norm_sqr()))
        .expect("exact probabilities are infallible");
    obs.expectation_from_tilde(tilde)
}
