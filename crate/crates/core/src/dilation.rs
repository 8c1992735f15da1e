//! Minimal Sz.-Nagy N-dilations of contractions.
//!
//! For an `n × n` contraction `A` the order-`N` dilation is the
//! `(N+1)n`-dimensional block unitary
//!
//! ```text
//! ⎡ A    0  …  0   D_{A†} ⎤
//! ⎢ D_A  0  …  0   -A†    ⎥
//! ⎢ 0    I  …  0   0      ⎥
//! ⎢ ⋮       ⋱      ⋮      ⎥
//! ⎣ 0    0  …  I   0      ⎦
//! ```
//!
//! with defect operators `D_A = √(I - A†A)` and `D_{A†} = √(I - AA†)`. Its
//! compression to the first block satisfies `P_H U^k P_H = A^k` for every
//! `k ≤ N`, and more generally a product of up to `N` such dilations of
//! different contractions compresses to the product of the contractions.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{
    operator_norm, sqrt_psd_clamped, unitarity_residual, ComplexMatrix, ComplexVector, ZERO,
};
use crate::CONTRACTION_TOL;

fn check_contraction(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let norm = operator_norm(a);
    if norm > 1.0 + CONTRACTION_TOL {
        return Err(Error::NotContraction(norm));
    }
    Ok(())
}

/// Defect operator `D_A = √(I - A†A)`.
pub fn defect(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_contraction(a)?;
    Ok(defect_unchecked(a))
}

fn defect_unchecked(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    sqrt_psd_clamped(&ComplexMatrix::identity(n).sub(&a.adjoint().matmul(a)))
}

/// `D_{A†} = √(I - AA†)`, computed directly rather than from `D_A`.
fn adjoint_defect_unchecked(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    sqrt_psd_clamped(&ComplexMatrix::identity(n).sub(&a.matmul(&a.adjoint())))
}

/// Unitary N-dilation of a contraction together with its base dimension and order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation {
    base_dim: usize,
    order: usize,
    unitary: ComplexMatrix,
}

/// Residuals of a dilation against its defining identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilationCheck {
    /// `max |U†U - I|`.
    pub unitarity_residual: f64,
    /// `max_{k ≤ N} max |P_H U^k P_H - A^k|`.
    pub power_residual: f64,
}

impl Dilation {
    #[inline]
    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// Dimension `(N+1)n` of the dilation space.
    #[inline]
    pub fn dim(&self) -> usize {
        self.unitary.rows()
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn into_unitary(self) -> ComplexMatrix {
        self.unitary
    }

    /// The dilated contraction (top-left block).
    pub fn contraction(&self) -> ComplexMatrix {
        self.unitary.block(0, 0, self.base_dim, self.base_dim)
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        self.unitary.checked_mul_vec(v)
    }

    pub fn check(&self) -> DilationCheck {
        let n = self.base_dim;
        let a = self.contraction();
        let mut a_pow = ComplexMatrix::identity(n);
        let mut u_pow = ComplexMatrix::identity(self.dim());
        let mut power_residual: f64 = 0.0;
        for _ in 0..self.order {
            a_pow = a_pow.matmul(&a);
            u_pow = u_pow.matmul(&self.unitary);
            power_residual = power_residual.max(u_pow.block(0, 0, n, n).max_abs_diff(&a_pow));
        }
        DilationCheck {
            unitarity_residual: unitarity_residual(&self.unitary),
            power_residual,
        }
    }
}

/// Builds the order-`order` dilation of the contraction `a`.
pub fn dilate(a: &ComplexMatrix, order: usize) -> Result<Dilation> {
    if order == 0 {
        return Err(Error::InvalidParameter("dilation order must be at least 1"));
    }
    check_contraction(a)?;
    let n = a.rows();
    let blocks = order + 1;
    let mut u = ComplexMatrix::zeros(blocks * n, blocks * n);
    u.set_block(0, 0, a);
    u.set_block(0, order * n, &adjoint_defect_unchecked(a));
    u.set_block(n, 0, &defect_unchecked(a));
    u.set_block(n, order * n, &a.adjoint().scale_real(-1.0));
    let id = ComplexMatrix::identity(n);
    for j in 2..blocks {
        u.set_block(j * n, (j - 1) * n, &id);
    }
    Ok(Dilation {
        base_dim: n,
        order,
        unitary: u,
    })
}

/// First `n` entries of `v` (the projection `P_H`).
pub fn project_h(v: &ComplexVector, n: usize) -> Result<ComplexVector> {
    if n == 0 || !v.dim().is_multiple_of(n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.dim(),
        });
    }
    ComplexVector::new(v.as_slice()[..n].to_vec())
}

/// `(vᵀ, 0, …, 0)ᵀ` with `order · dim(v)` trailing zeros.
pub fn pad_input(v: &ComplexVector, order: usize) -> ComplexVector {
    let mut data: Vec<_> = v.as_slice().to_vec();
    data.resize(v.dim() * (order + 1), ZERO);
    ComplexVector::new(data).expect("padding a valid vector stays valid")
}
