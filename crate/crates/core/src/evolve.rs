//! End-to-end evolution pipelines built on dilations.
//!
//! Both pipelines produce a list of [`BranchOutput`]s: the exact dilated output
//! vector of every branch, in a fixed order (ensemble member outer, Kraus index
//! inner). Populations and expectation values are read from those vectors,
//! either exactly (this module) or from sampled shot counts
//! ([`crate::sampler`]).
//!
//! Readout differs between the two methods. In the ensemble method the
//! population of level `j` is the probability `|c_j|²` of the `j`-th output
//! entry. In the vectorized method the output's first block holds the
//! row-major flattening of `ρ_k(t) / ‖ρ‖_HS`, so the population is the real,
//! non-negative amplitude at flattened position `j·n + j` times `‖ρ‖_HS`.

use alloc::vec::Vec;

use crate::channel::{DensityMatrix, KrausSet, PureStateEnsemble};
use crate::dilation::{dilate, pad_input, Dilation};
use crate::error::{Error, Result};
use crate::matrix::{cholesky_psd, hs_norm, is_unitary, kron, ComplexMatrix, ComplexVector};
use crate::{DEFAULT_TOL, PIVOT_TOL};

/// Maximum imaginary residue tolerated on a recovered diagonal entry.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-8;

/// Dilation order used by the ensemble observable pipeline (`U_{L†} U_{M_k}`).
pub const ENSEMBLE_OBSERVABLE_ORDER: usize = 2;
/// Dilation order used by the vectorized population pipeline (`U_{N_k} U_{M_k}`).
pub const VECTORIZED_POPULATION_ORDER: usize = 2;
/// Dilation order used by the vectorized observable pipeline (four factors).
pub const VECTORIZED_OBSERVABLE_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Evolve each pure member of a known ensemble.
    Ensemble,
    /// Evolve the flattened density matrix through Kronecker lifts.
    Vectorized,
}

/// Identifies a branch: ensemble member `i` (absent for the vectorized method)
/// and Kraus index `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BranchId {
    pub ensemble: Option<usize>,
    pub kraus: usize,
}

/// Exact dilated output of one branch.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchOutput {
    pub id: BranchId,
    pub method: Method,
    /// `p_i` for the ensemble method, 1 for the vectorized method.
    pub weight: f64,
    /// Norm removed from the input: 1 for the ensemble method, `‖ρ‖_HS` for the vectorized one.
    pub scale: f64,
    /// System dimension `n`.
    pub system_dim: usize,
    pub vector: ComplexVector,
}

impl BranchOutput {
    /// Size of the block that holds the evolved quantity: `n` or `n²`.
    pub fn base_dim(&self) -> usize {
        match self.method {
            Method::Ensemble => self.system_dim,
            Method::Vectorized => self.system_dim * self.system_dim,
        }
    }

    /// Output coordinate carrying the population of level `j`.
    pub fn population_index(&self, j: usize) -> usize {
        match self.method {
            Method::Ensemble => j,
            Method::Vectorized => j * self.system_dim + j,
        }
    }
}

/// Observable `O` prepared for dilation readout: `Õ = (O + ‖O‖_HS I) / (2‖O‖_HS) = L L†`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
    hs: f64,
    tilde: ComplexMatrix,
    cholesky: ComplexMatrix,
}

impl Observable {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `‖O‖_HS`.
    pub fn hs_norm(&self) -> f64 {
        self.hs
    }

    /// `Õ`.
    pub fn tilde(&self) -> &ComplexMatrix {
        &self.tilde
    }

    /// Lower-triangular `L` with `L L† = Õ`.
    pub fn cholesky(&self) -> &ComplexMatrix {
        &self.cholesky
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Maps `⟨Õ⟩` back to `⟨O⟩ = 2‖O‖_HS ⟨Õ⟩ - ‖O‖_HS`.
    pub fn expectation_from_tilde(&self, tilde_expectation: f64) -> f64 {
        2.0 * self.hs * tilde_expectation - self.hs
    }
}

pub fn build_observable(o: &ComplexMatrix) -> Result<Observable> {
    if !o.is_square() {
        return Err(Error::DimensionMismatch {
            expected: o.rows(),
            found: o.cols(),
        });
    }
    let asym = o.hermitian_residual();
    if asym > DEFAULT_TOL {
        return Err(Error::NotHermitian(asym));
    }
    let hs = hs_norm(o);
    if hs == 0.0 {
        return Err(Error::ZeroObservable);
    }
    let n = o.rows();
    let tilde = o
        .add(&ComplexMatrix::identity(n).scale_real(hs))
        .scale_real(0.5 / hs);
    let cholesky = cholesky_psd(&tilde, PIVOT_TOL)?;
    Ok(Observable {
        matrix: o.clone(),
        hs,
        tilde,
        cholesky,
    })
}

fn check_unit(v: &ComplexVector) -> Result<()> {
    let norm = v.norm();
    if (norm - 1.0).abs() > crate::STATE_TOL {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn check_basis(t: &ComplexMatrix, n: usize) -> Result<()> {
    check_dim(n, t.rows())?;
    check_dim(n, t.cols())?;
    let residual = crate::matrix::unitarity_residual(t);
    if !is_unitary(t, DEFAULT_TOL) {
        return Err(Error::NotUnitary(residual));
    }
    Ok(())
}

/// `U_{M_k} (vᵀ, 0, …, 0)ᵀ` with the order-`order` dilation of `m`.
pub fn evolve_branch(m: &ComplexMatrix, v: &ComplexVector, order: usize) -> Result<ComplexVector> {
    check_dim(m.cols(), v.dim())?;
    check_unit(v)?;
    dilate(m, order)?.apply(&pad_input(v, order))
}

fn dilate_all(ks: &KrausSet, order: usize) -> Result<Vec<Dilation>> {
    ks.operators().iter().map(|m| dilate(m, order)).collect()
}

/// Ensemble-method branch outputs for population readout, optionally rotated
/// by `diag(T, I)` before measurement.
pub fn population_branches(
    e: &PureStateEnsemble,
    ks: &KrausSet,
    basis: Option<&ComplexMatrix>,
) -> Result<Vec<BranchOutput>> {
    let n = ks.dim();
    check_dim(n, e.dim())?;
    if let Some(t) = basis {
        check_basis(t, n)?;
    }
    let dilations = dilate_all(ks, 1)?;
    let rotation = basis.map(|t| t.embed_top_left(2 * n));
    let mut out = Vec::with_capacity(e.len() * ks.len());
    for (i, (p, phi)) in e.members().iter().enumerate() {
        let input = pad_input(phi, 1);
        for (k, d) in dilations.iter().enumerate() {
            let mut vector = d.apply(&input)?;
            if let Some(r) = &rotation {
                vector = r.mul_vec(&vector);
            }
            out.push(BranchOutput {
                id: BranchId {
                    ensemble: Some(i),
                    kraus: k,
                },
                method: Method::Ensemble,
                weight: *p,
                scale: 1.0,
                system_dim: n,
                vector,
            });
        }
    }
    Ok(out)
}

/// Ensemble-method branch outputs `U_{L†} U_{M_k} (v_iᵀ, 0, …)ᵀ` with order-2 dilations.
pub fn observable_branches(
    e: &PureStateEnsemble,
    ks: &KrausSet,
    obs: &Observable,
) -> Result<Vec<BranchOutput>> {
    let n = ks.dim();
    check_dim(n, e.dim())?;
    check_dim(n, obs.dim())?;
    let order = ENSEMBLE_OBSERVABLE_ORDER;
    let dilations = dilate_all(ks, order)?;
    let readout = dilate(&obs.cholesky().adjoint(), order)?;
    let mut out = Vec::with_capacity(e.len() * ks.len());
    for (i, (p, phi)) in e.members().iter().enumerate() {
        let input = pad_input(phi, order);
        for (k, d) in dilations.iter().enumerate() {
            let vector = readout.apply(&d.apply(&input)?)?;
            out.push(BranchOutput {
                id: BranchId {
                    ensemble: Some(i),
                    kraus: k,
                },
                method: Method::Ensemble,
                weight: *p,
                scale: 1.0,
                system_dim: n,
                vector,
            });
        }
    }
    Ok(out)
}

/// Row-major flattening of `ρ`, normalized, with the removed norm `‖ρ‖_HS`.
pub fn vectorize(rho: &DensityMatrix) -> (ComplexVector, f64) {
    let scale = hs_norm(rho.matrix());
    let flat =
        ComplexVector::new(rho.matrix().as_slice().to_vec()).expect("density entries are finite");
    (flat.scale_real(1.0 / scale), scale)
}

/// Kronecker lifts `(M ⊗ I, I ⊗ M̄)` acting on row-major flattened matrices,
/// so that `(I ⊗ M̄)(M ⊗ I) vec(ρ) = vec(M ρ M†)`.
pub fn lift_kraus(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let id = ComplexMatrix::identity(m.rows());
    (kron(m, &id), kron(&id, &m.conj()))
}

/// Vectorized-method branch outputs `U_{N_k} U_{M_k} (v_ρᵀ, 0, …)ᵀ`, optionally
/// followed by `diag(I ⊗ T̄, I) diag(T ⊗ I, I)`.
pub fn vectorized_population_branches(
    rho: &DensityMatrix,
    ks: &KrausSet,
    basis: Option<&ComplexMatrix>,
) -> Result<Vec<BranchOutput>> {
    let n = ks.dim();
    check_dim(n, rho.dim())?;
    let order = VECTORIZED_POPULATION_ORDER;
    let total = (order + 1) * n * n;
    let rotation = match basis {
        Some(t) => {
            check_basis(t, n)?;
            let (left, right) = lift_kraus(t);
            Some(right.matmul(&left).embed_top_left(total))
        }
        None => None,
    };
    let (v_rho, scale) = vectorize(rho);
    let input = pad_input(&v_rho, order);
    let mut out = Vec::with_capacity(ks.len());
    for (k, m) in ks.operators().iter().enumerate() {
        let (left, right) = lift_kraus(m);
        let mut vector = dilate(&right, order)?.apply(&dilate(&left, order)?.apply(&input)?)?;
        if let Some(r) = &rotation {
            vector = r.mul_vec(&vector);
        }
        out.push(BranchOutput {
            id: BranchId {
                ensemble: None,
                kraus: k,
            },
            method: Method::Vectorized,
            weight: 1.0,
            scale,
            system_dim: n,
            vector,
        });
    }
    Ok(out)
}

/// Vectorized-method branch outputs
/// `U_{I⊗L̄†} U_{L†⊗I} U_{N_k} U_{M_k} (v_ρᵀ, 0, …)ᵀ` with order-4 dilations.
pub fn vectorized_observable_branches(
    rho: &DensityMatrix,
    ks: &KrausSet,
    obs: &Observable,
) -> Result<Vec<BranchOutput>> {
    let n = ks.dim();
    check_dim(n, rho.dim())?;
    check_dim(n, obs.dim())?;
    let order = VECTORIZED_OBSERVABLE_ORDER;
    let (l_left, l_right) = lift_kraus(&obs.cholesky().adjoint());
    let readout_left = dilate(&l_left, order)?;
    let readout_right = dilate(&l_right, order)?;
    let (v_rho, scale) = vectorize(rho);
    let input = pad_input(&v_rho, order);
    let mut out = Vec::with_capacity(ks.len());
    for (k, m) in ks.operators().iter().enumerate() {
        let (left, right) = lift_kraus(m);
        let evolved = dilate(&right, order)?.apply(&dilate(&left, order)?.apply(&input)?)?;
        let vector = readout_right.apply(&readout_left.apply(&evolved)?)?;
        out.push(BranchOutput {
            id: BranchId {
                ensemble: None,
                kraus: k,
            },
            method: Method::Vectorized,
            weight: 1.0,
            scale,
            system_dim: n,
            vector,
        });
    }
    Ok(out)
}

/// Real diagonal entry recovered from a vectorized branch amplitude.
fn vectorized_diagonal(b: &BranchOutput, j: usize) -> Result<f64> {
    let z = b.vector[b.population_index(j)] * b.scale;
    if z.im.abs() > IMAGINARY_RESIDUE_TOL {
        return Err(Error::InternalConsistency(z.im));
    }
    Ok(z.re)
}

/// Exact populations assembled from branch outputs, summed in branch order.
pub fn read_populations(branches: &[BranchOutput]) -> Result<Vec<f64>> {
    let n = branches.first().map_or(0, |b| b.system_dim);
    let mut pops = alloc::vec![0.0; n];
    for b in branches {
        check_dim(n, b.system_dim)?;
        for (j, pop) in pops.iter_mut().enumerate() {
            *pop += match b.method {
                Method::Ensemble => b.weight * b.vector[j].norm_sqr(),
                Method::Vectorized => b.weight * vectorized_diagonal(b, j)?,
            };
        }
    }
    Ok(pops)
}

/// Exact `⟨Õ⟩` from observable-pipeline branch outputs.
pub fn read_tilde_expectation(branches: &[BranchOutput]) -> Result<f64> {
    let mut total = 0.0;
    for b in branches {
        let n = b.system_dim;
        total += match b.method {
            Method::Ensemble => {
                b.weight
                    * b.vector.as_slice()[..n]
                        .iter()
                        .map(|z| z.norm_sqr())
                        .sum::<f64>()
            }
            Method::Vectorized => {
                let mut trace = 0.0;
                for j in 0..n {
                    trace += vectorized_diagonal(b, j)?;
                }
                b.weight * trace
            }
        };
    }
    Ok(total)
}

/// `diag(ρ(t))` by the ensemble method.
pub fn populations(e: &PureStateEnsemble, ks: &KrausSet) -> Result<Vec<f64>> {
    read_populations(&population_branches(e, ks, None)?)
}

/// `diag(T ρ(t) T†)` by the ensemble method.
pub fn populations_in_basis(
    e: &PureStateEnsemble,
    ks: &KrausSet,
    t: &ComplexMatrix,
) -> Result<Vec<f64>> {
    read_populations(&population_branches(e, ks, Some(t))?)
}

/// `Tr(O ρ(t))` by the ensemble method.
pub fn expectation(e: &PureStateEnsemble, ks: &KrausSet, obs: &Observable) -> Result<f64> {
    Ok(obs.expectation_from_tilde(read_tilde_expectation(&observable_branches(e, ks, obs)?)?))
}

/// `diag(ρ(t))` by the vectorized method.
pub fn populations_vectorized(rho: &DensityMatrix, ks: &KrausSet) -> Result<Vec<f64>> {
    read_populations(&vectorized_population_branches(rho, ks, None)?)
}

/// `diag(T ρ(t) T†)` by the vectorized method.
pub fn populations_vectorized_in_basis(
    rho: &DensityMatrix,
    ks: &KrausSet,
    t: &ComplexMatrix,
) -> Result<Vec<f64>> {
    read_populations(&vectorized_population_branches(rho, ks, Some(t))?)
}

/// `Tr(O ρ(t))` by the vectorized method.
pub fn expectation_vectorized(rho: &DensityMatrix, ks: &KrausSet, obs: &Observable) -> Result<f64> {
    Ok(
        obs.expectation_from_tilde(read_tilde_expectation(&vectorized_observable_branches(
            rho, ks, obs,
        )?)?),
    )
}
