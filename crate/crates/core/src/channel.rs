//! Quantum channels in operator-sum form, density matrices and pure-state
//! ensembles, together with the classical `Σ_k M_k ρ M_k†` oracle.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigenvalues, operator_norm, ComplexMatrix, ComplexVector, C64};

/// Ordered list of same-dimension Kraus operators.
///
/// Construction only checks shapes; completeness `Σ M_k†M_k = I` is checked by
/// [`validate_kraus`] (or [`KrausSet::validated`]).
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    dim: usize,
    operators: Vec<ComplexMatrix>,
}

impl KrausSet {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or(Error::InvalidParameter("Kraus set must be non-empty"))?;
        let dim = first.rows();
        for m in &operators {
            if !m.is_square() {
                return Err(Error::DimensionMismatch {
                    expected: m.rows(),
                    found: m.cols(),
                });
            }
            if m.rows() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.rows(),
                });
            }
        }
        Ok(Self { dim, operators })
    }

    /// Builds the set and rejects it unless it passes [`validate_kraus`] at `tol`.
    pub fn validated(operators: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let set = Self::new(operators)?;
        let report = validate_kraus(&set, tol);
        if !report.passed {
            return Err(Error::InvalidParameter(
                "Kraus operators violate completeness",
            ));
        }
        Ok(set)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub passed: bool,
    /// `max |Σ M_k†M_k - I|`.
    pub completeness_residual: f64,
    pub operator_norms: Vec<f64>,
}

/// Checks completeness and reports the operator norm of every Kraus operator.
pub fn validate_kraus(ks: &KrausSet, tol: f64) -> ValidationReport {
    let n = ks.dim();
    let mut sum = ComplexMatrix::zeros(n, n);
    for m in ks.operators() {
        sum = sum.add(&m.adjoint().matmul(m));
    }
    let completeness_residual = sum.max_abs_diff(&ComplexMatrix::identity(n));
    let operator_norms = ks.operators().iter().map(operator_norm).collect();
    ValidationReport {
        passed: completeness_residual <= tol,
        completeness_residual,
        operator_norms,
    }
}

/// Amplitude-damping Kraus pair at decay rate `gamma` (s⁻¹) after time `t` (s):
/// `M₀ = diag(1, √e^{-γt})`, `M₁ = √(1 - e^{-γt}) σ⁺`.
pub fn amplitude_damping_kraus(gamma: f64, t: f64) -> Result<KrausSet> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::InvalidParameter(
            "decay rate must be finite and non-negative",
        ));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidParameter(
            "time must be finite and non-negative",
        ));
    }
    let survival = libm::exp(-gamma * t);
    let m0 = ComplexMatrix::diag_real(&[1.0, libm::sqrt(survival)]);
    let mut m1 = ComplexMatrix::zeros(2, 2);
    m1[(0, 1)] = C64::new(libm::sqrt(1.0 - survival), 0.0);
    KrausSet::new(alloc::vec![m0, m1])
}

/// Density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates `mat` at tolerance `tol`.
    pub fn new(mat: ComplexMatrix, tol: f64) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::InvalidDensity("matrix must be square"));
        }
        if mat.hermitian_residual() > tol {
            return Err(Error::InvalidDensity("matrix must be Hermitian"));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidDensity("trace must equal 1"));
        }
        if hermitian_eigenvalues(&mat)
            .first()
            .is_some_and(|&l| l < -tol)
        {
            return Err(Error::InvalidDensity(
                "matrix must be positive semidefinite",
            ));
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.mat.trace_of_square().re
    }

    /// Real diagonal (populations).
    pub fn populations(&self) -> Vec<f64> {
        self.mat.diagonal().iter().map(|z| z.re).collect()
    }
}

/// Mixture `ρ = Σ_i p_i |φ_i⟩⟨φ_i|` of unit vectors, not necessarily orthogonal.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateEnsemble {
    members: Vec<(f64, ComplexVector)>,
}

impl PureStateEnsemble {
    pub fn new(members: Vec<(f64, ComplexVector)>, tol: f64) -> Result<Self> {
        let dim = members
            .first()
            .ok_or(Error::InvalidEnsemble("ensemble must be non-empty"))?
            .1
            .dim();
        let mut total = 0.0;
        for (p, phi) in &members {
            if !(0.0..=1.0 + tol).contains(p) {
                return Err(Error::InvalidEnsemble("probabilities must lie in [0, 1]"));
            }
            if phi.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: phi.dim(),
                });
            }
            if (phi.norm() - 1.0).abs() > tol {
                return Err(Error::InvalidEnsemble("states must have unit norm"));
            }
            total += p;
        }
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidEnsemble("probabilities must sum to 1"));
        }
        Ok(Self { members })
    }

    pub fn dim(&self) -> usize {
        self.members[0].1.dim()
    }

    pub fn members(&self) -> &[(f64, ComplexVector)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `Σ_i p_i |φ_i⟩⟨φ_i|`.
pub fn ensemble_to_density(e: &PureStateEnsemble) -> DensityMatrix {
    let n = e.dim();
    let mut rho = ComplexMatrix::zeros(n, n);
    for (p, phi) in e.members() {
        rho = rho.add(&ComplexMatrix::outer(phi, phi).scale_real(*p));
    }
    DensityMatrix::from_trusted(rho)
}

/// Classical operator-sum evaluation `Σ_k M_k ρ M_k†`.
pub fn apply_channel_oracle(rho: &DensityMatrix, ks: &KrausSet) -> Result<DensityMatrix> {
    if rho.dim() != ks.dim() {
        return Err(Error::DimensionMismatch {
            expected: ks.dim(),
            found: rho.dim(),
        });
    }
    let n = ks.dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for m in ks.operators() {
        out = out.add(&m.matmul(rho.matrix()).matmul(&m.adjoint()));
    }
    Ok(DensityMatrix::from_trusted(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ONE;
    use alloc::vec;

    const LN2: f64 = core::f64::consts::LN_2;
    const GAMMA: f64 = 1.52e9;

    fn reference_rho() -> DensityMatrix {
        DensityMatrix::new(
            ComplexMatrix::from_real(2, 2, &[0.25, 0.25, 0.25, 0.75]).unwrap(),
            1e-9,
        )
        .unwrap()
    }

    fn plus() -> ComplexVector {
        let r = 0.5f64.sqrt();
        ComplexVector::from_real(&[r, r]).unwrap()
    }

    #[test]
    fn amplitude_damping_is_complete() {
        for gt in [0.0, 0.1, LN2, 1.52, 10.0, 800.0] {
            let ks = amplitude_damping_kraus(1.0, gt).unwrap();
            let report = validate_kraus(&ks, 1e-12);
            assert!(report.passed);
            assert!(
                report.completeness_residual < 1e-15,
                "γt = {gt}: {}",
                report.completeness_residual
            );
        }
    }

    #[test]
    fn validate_examples() {
        let id = KrausSet::new(vec![ComplexMatrix::identity(2)]).unwrap();
        assert!(validate_kraus(&id, 1e-10).passed);

        let twice =
            KrausSet::new(vec![ComplexMatrix::identity(2), ComplexMatrix::identity(2)]).unwrap();
        let report = validate_kraus(&twice, 1e-10);
        assert!(!report.passed);
        assert_eq!(report.completeness_residual, 1.0);
        assert_eq!(report.operator_norms.len(), 2);
        assert!(KrausSet::validated(vec![ComplexMatrix::identity(2); 2], 1e-10).is_err());
    }

    #[test]
    fn mismatched_dimensions_rejected() {
        let err = KrausSet::new(vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)])
            .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
        assert!(KrausSet::new(vec![ComplexMatrix::zeros(2, 3)]).is_err());
        assert!(KrausSet::new(vec![]).is_err());
    }

    #[test]
    fn amplitude_damping_values() {
        let ks = amplitude_damping_kraus(GAMMA, 0.0).unwrap();
        assert_eq!(ks.operators()[0], ComplexMatrix::identity(2));
        assert_eq!(ks.operators()[1], ComplexMatrix::zeros(2, 2));

        let t = LN2 / GAMMA;
        let ks = amplitude_damping_kraus(GAMMA, t).unwrap();
        let r = 0.5f64.sqrt();
        assert!(ks.operators()[0].max_abs_diff(&ComplexMatrix::diag_real(&[1.0, r])) < 1e-15);
        assert!((ks.operators()[1][(0, 1)].re - r).abs() < 1e-15);

        let ks = amplitude_damping_kraus(GAMMA, 1.0).unwrap();
        assert_eq!(ks.operators()[0], ComplexMatrix::diag_real(&[1.0, 0.0]));
        let mut sigma_plus = ComplexMatrix::zeros(2, 2);
        sigma_plus[(0, 1)] = ONE;
        assert_eq!(ks.operators()[1], sigma_plus);
    }

    #[test]
    fn amplitude_damping_rejects_negative() {
        assert!(amplitude_damping_kraus(-1.0, 1.0).is_err());
        assert!(amplitude_damping_kraus(1.0, -1.0).is_err());
        assert!(amplitude_damping_kraus(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn oracle_examples() {
        let ks = amplitude_damping_kraus(GAMMA, LN2 / GAMMA).unwrap();
        let out = apply_channel_oracle(&reference_rho(), &ks).unwrap();
        let c = 0.25 / 2f64.sqrt();
        let expected = ComplexMatrix::from_real(2, 2, &[0.625, c, c, 0.375]).unwrap();
        assert!(out.matrix().max_abs_diff(&expected) < 1e-15);

        let id = KrausSet::new(vec![ComplexMatrix::identity(2)]).unwrap();
        assert_eq!(
            apply_channel_oracle(&reference_rho(), &id).unwrap(),
            reference_rho()
        );

        let excited = DensityMatrix::new(ComplexMatrix::diag_real(&[0.0, 1.0]), 1e-9).unwrap();
        let out =
            apply_channel_oracle(&excited, &amplitude_damping_kraus(1.0, 800.0).unwrap()).unwrap();
        assert_eq!(out.matrix(), &ComplexMatrix::diag_real(&[1.0, 0.0]));

        let three = KrausSet::new(vec![ComplexMatrix::identity(3)]).unwrap();
        assert!(apply_channel_oracle(&reference_rho(), &three).is_err());
    }

    #[test]
    fn ensemble_examples() {
        let e =
            PureStateEnsemble::new(vec![(0.5, ComplexVector::basis(2, 1)), (0.5, plus())], 1e-9)
                .unwrap();
        assert!(
            ensemble_to_density(&e)
                .matrix()
                .max_abs_diff(reference_rho().matrix())
                < 1e-15
        );

        let e = PureStateEnsemble::new(vec![(1.0, ComplexVector::basis(2, 0))], 1e-9).unwrap();
        assert_eq!(
            ensemble_to_density(&e).matrix(),
            &ComplexMatrix::diag_real(&[1.0, 0.0])
        );

        let e = PureStateEnsemble::new(
            vec![
                (0.25, ComplexVector::basis(2, 0)),
                (0.75, ComplexVector::basis(2, 1)),
            ],
            1e-9,
        )
        .unwrap();
        assert_eq!(
            ensemble_to_density(&e).matrix(),
            &ComplexMatrix::diag_real(&[0.25, 0.75])
        );
    }

    #[test]
    fn ensemble_validation() {
        let v = ComplexVector::basis(2, 0);
        assert!(PureStateEnsemble::new(vec![(0.5, v.clone())], 1e-9).is_err());
        assert!(PureStateEnsemble::new(vec![(1.0, v.scale_real(2.0))], 1e-9).is_err());
        assert!(PureStateEnsemble::new(vec![(1.5, v.clone()), (-0.5, v.clone())], 1e-9).is_err());
        assert!(
            PureStateEnsemble::new(vec![(0.5, v), (0.5, ComplexVector::basis(3, 0))], 1e-9)
                .is_err()
        );
    }

    #[test]
    fn density_validation() {
        let not_herm = ComplexMatrix::from_real(2, 2, &[0.5, 0.1, 0.0, 0.5]).unwrap();
        assert!(DensityMatrix::new(not_herm, 1e-9).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag_real(&[0.5, 0.6]), 1e-9).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::diag_real(&[1.5, -0.5]), 1e-9).is_err());
        assert!((reference_rho().purity() - 0.75).abs() < 1e-15);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn unit_vector(n: usize) -> impl Strategy<Value = ComplexVector> {
            proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
                .prop_filter("non-degenerate", |v| {
                    v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3
                })
                .prop_map(|v| {
                    let raw =
                        ComplexVector::new(v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
                            .unwrap();
                    raw.scale_real(1.0 / raw.norm())
                })
        }

        fn ensemble(n: usize) -> impl Strategy<Value = PureStateEnsemble> {
            proptest::collection::vec((0.01f64..1.0, unit_vector(n)), 1..5).prop_map(|members| {
                let total: f64 = members.iter().map(|(p, _)| p).sum();
                let members = members.into_iter().map(|(p, v)| (p / total, v)).collect();
                PureStateEnsemble::new(members, 1e-9).unwrap()
            })
        }

        proptest! {
            #[test]
            fn amplitude_damping_closed_form(e in ensemble(2), gt in 0.0f64..6.0) {
                let rho = ensemble_to_density(&e);
                let out = apply_channel_oracle(&rho, &amplitude_damping_kraus(1.0, gt).unwrap()).unwrap();
                let s = (-gt).exp();
                let r = rho.matrix();
                let o = out.matrix();
                prop_assert!((o[(0, 0)] - (r[(0, 0)] + r[(1, 1)] * (1.0 - s))).norm() < 1e-12);
                prop_assert!((o[(1, 1)] - r[(1, 1)] * s).norm() < 1e-12);
                prop_assert!((o[(0, 1)] - r[(0, 1)] * s.sqrt()).norm() < 1e-12);
            }

            #[test]
            fn oracle_preserves_trace_and_positivity(e in ensemble(2), gt in 0.0f64..10.0) {
                let rho = ensemble_to_density(&e);
                let out = apply_channel_oracle(&rho, &amplitude_damping_kraus(1.0, gt).unwrap()).unwrap();
                prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-10);
                prop_assert!(hermitian_eigenvalues(out.matrix())[0] >= -1e-10);
                prop_assert!(DensityMatrix::new(out.into_matrix(), 1e-9).is_ok());
            }

            #[test]
            fn purity_at_most_one(e in (1usize..5).prop_flat_map(ensemble)) {
                prop_assert!(ensemble_to_density(&e).purity() <= 1.0 + 1e-10);
            }

            #[test]
            fn kraus_operators_are_contractions(gt in 0.0f64..50.0) {
                let ks = amplitude_damping_kraus(1.0, gt).unwrap();
                for norm in validate_kraus(&ks, 1e-10).operator_norms {
                    prop_assert!(norm <= 1.0 + 1e-10);
                }
            }
        }
    }
}
