//! Two-level unitary decomposition and closed-form complexity counts.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{is_unitary, unitarity_residual, ComplexMatrix, C64, ONE, ZERO};

/// A unitary acting nontrivially only on coordinates `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLevelGate {
    pub i: usize,
    pub j: usize,
    /// 2×2 block in the `(i, j)` coordinates.
    pub block: ComplexMatrix,
}

impl TwoLevelGate {
    /// Full `n × n` matrix of the gate.
    pub fn embed(&self, n: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::identity(n);
        m[(self.i, self.i)] = self.block[(0, 0)];
        m[(self.i, self.j)] = self.block[(0, 1)];
        m[(self.j, self.i)] = self.block[(1, 0)];
        m[(self.j, self.j)] = self.block[(1, 1)];
        m
    }

    /// `m ← G m`, touching only rows `i` and `j`.
    pub fn apply_left(&self, m: &mut ComplexMatrix) {
        let b = &self.block;
        for c in 0..m.cols() {
            let x = m[(self.i, c)];
            let y = m[(self.j, c)];
            m[(self.i, c)] = b[(0, 0)] * x + b[(0, 1)] * y;
            m[(self.j, c)] = b[(1, 0)] * x + b[(1, 1)] * y;
        }
    }

    fn is_identity(&self, tol: f64) -> bool {
        self.block.max_abs_diff(&ComplexMatrix::identity(2)) <= tol
    }
}

/// Product of a gate list given in circuit order: `gates[last] ⋯ gates[0]`.
pub fn compose_gates(gates: &[TwoLevelGate], n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(n);
    for g in gates {
        g.apply_left(&mut m);
    }
    m
}

fn block(a: C64, b: C64, c: C64, d: C64) -> ComplexMatrix {
    ComplexMatrix::new(2, 2, alloc::vec![a, b, c, d]).expect("2x2 block")
}

/// Decomposes `u` into two-level gates listed in circuit order (first applied
/// first), so that `u = gates[last] ⋯ gates[0]`.
///
/// Columns are cleared left to right, each from the bottom up, by rotations on
/// adjacent rows; entries already within `tol` of zero are skipped. The
/// remaining diagonal phases are folded into the first gate touching each
/// coordinate. Identity gates are dropped.
pub fn two_level_decompose(u: &ComplexMatrix, tol: f64) -> Result<Vec<TwoLevelGate>> {
    if !u.is_square() {
        return Err(Error::DimensionMismatch {
            expected: u.rows(),
            found: u.cols(),
        });
    }
    if !is_unitary(u, tol) {
        return Err(Error::NotUnitary(unitarity_residual(u)));
    }
    let n = u.rows();
    let mut w = u.clone();
    // rotations G_1, G_2, … with G_m ⋯ G_1 u = D
    let mut eliminations = Vec::new();
    for c in 0..n {
        for r in (c + 1..n).rev() {
            let a = w[(r - 1, c)];
            let b = w[(r, c)];
            if b.norm() <= tol {
                continue;
            }
            let nu = libm::hypot(a.norm(), b.norm());
            let g = TwoLevelGate {
                i: r - 1,
                j: r,
                block: block(a.conj() / nu, b.conj() / nu, -b / nu, a / nu),
            };
            g.apply_left(&mut w);
            eliminations.push(g);
        }
    }

    // circuit order: D, then G_m†, …, G_1†
    let mut gates: Vec<TwoLevelGate> = eliminations
        .into_iter()
        .rev()
        .map(|g| TwoLevelGate {
            i: g.i,
            j: g.j,
            block: g.block.adjoint(),
        })
        .collect();

    let mut loose = Vec::new();
    for x in 0..n {
        let d = w[(x, x)];
        let phase = d / d.norm();
        if (phase - ONE).norm() <= tol {
            continue;
        }
        match gates.iter_mut().find(|g| g.i == x || g.j == x) {
            Some(g) => {
                let col = if g.i == x { 0 } else { 1 };
                for r in 0..2 {
                    g.block[(r, col)] *= phase;
                }
            }
            None => loose.push((x, phase)),
        }
    }

    let mut diagonal = Vec::new();
    for pair in loose.chunks(2) {
        let gate = match *pair {
            [(x, p), (y, q)] => TwoLevelGate {
                i: x,
                j: y,
                block: block(p, ZERO, ZERO, q),
            },
            [(x, p)] if n >= 2 => {
                if x + 1 < n {
                    TwoLevelGate {
                        i: x,
                        j: x + 1,
                        block: block(p, ZERO, ZERO, ONE),
                    }
                } else {
                    TwoLevelGate {
                        i: x - 1,
                        j: x,
                        block: block(ONE, ZERO, ZERO, p),
                    }
                }
            }
            _ => return Err(Error::InvalidParameter("a 1x1 phase has no two-level form")),
        };
        diagonal.push(gate);
    }
    diagonal.extend(gates);
    diagonal.retain(|g| !g.is_identity(tol));
    Ok(diagonal)
}

/// Number of strictly-lower-triangular entries with `|m_ij| > tol`.
pub fn count_lower_nonzeros(m: &ComplexMatrix, tol: f64) -> usize {
    let mut count = 0;
    for i in 0..m.rows() {
        for j in 0..i.min(m.cols()) {
            if m[(i, j)].norm() > tol {
                count += 1;
            }
        }
    }
    count
}

/// Per-branch counts for the three pipeline stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StageCounts {
    /// Plain evolution.
    pub basic: u64,
    /// Evolution followed by a basis change.
    pub basis_transform: u64,
    /// Evolution followed by the observable readout.
    pub observable: u64,
}

/// Closed-form gate counts (two-level gates per branch) and classical
/// arithmetic counts for both pipelines at dimension `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityReport {
    pub n: usize,
    pub ensemble_gates: StageCounts,
    pub ensemble_classical: StageCounts,
    pub vectorized_gates: StageCounts,
    /// Classical cost of `M_k ρ M_k†`, per `k`.
    pub vectorized_classical_per_branch: u64,
    /// Classical `ρ ↦ T ρ T†` overhead, independent of `k`.
    pub vectorized_basis_overhead: u64,
    /// Classical `Tr(O ρ)` overhead, independent of `k`.
    pub vectorized_observable_overhead: u64,
    /// Classical preprocessing for the observable readout (`‖O‖_HS` plus Cholesky): `n³/3 + 2n² − 1`.
    pub observable_preprocessing: f64,
    /// Two-level gates for a Stinespring unitary of size `n³`: `(n⁶ − n³)/2`.
    pub stinespring_count: u64,
}

pub fn complexity_report(n: usize) -> Result<ComplexityReport> {
    if n < 2 {
        return Err(Error::InvalidParameter("complexity report needs n >= 2"));
    }
    let n64 = n as u64;
    let n2 = n64 * n64;
    let n3 = n2 * n64;
    let nf = n as f64;
    Ok(ComplexityReport {
        n,
        ensemble_gates: StageCounts {
            basic: 2 * n2 - n64,
            basis_transform: (5 * n2 - 3 * n64) / 2,
            observable: (5 * n2 + 3 * n64) / 2,
        },
        ensemble_classical: StageCounts {
            basic: 2 * n2 - n64,
            basis_transform: 4 * n2 - 2 * n64,
            observable: 3 * n2 - n64,
        },
        vectorized_gates: StageCounts {
            basic: 3 * n3 + n2,
            basis_transform: 4 * n3,
            observable: 5 * n3 + 11 * n2,
        },
        vectorized_classical_per_branch: 4 * n3 - 2 * n2,
        vectorized_basis_overhead: 4 * n3 - 2 * n2,
        vectorized_observable_overhead: 2 * n3 - n2,
        observable_preprocessing: nf * nf * nf / 3.0 + 2.0 * nf * nf - 1.0,
        stinespring_count: (n3 * n3 - n3) / 2,
    })
}
