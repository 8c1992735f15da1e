//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.

use alloc::vec::Vec;

use crate::matrix::{ComplexMatrix, C64};

const MAX_SWEEPS: usize = 100;

fn off_diagonal_sqr(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

/// Eigenvalues (ascending) and unitary eigenvector matrix (columns) of a
/// Hermitian matrix. Only the Hermitian part of the input is meaningful.
pub(crate) fn hermitian_eigen(h: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let n = h.rows();
    let mut a = h.clone();
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);

    let total: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum();
    let threshold = total * 1e-30;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_sqr(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)];
        }
    }
    (values, vectors)
}

/// Annihilates `a[p][q]` with a two-level unitary `G`: `a ← G† a G`, `v ← v G`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if r <= 1e-18 * (app.abs() + aqq.abs()) || r < 1e-300 {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    // a[p][q] = r·e^{iφ}; the block is D·[[app, r], [r, aqq]]·D† with D = diag(1, e^{-iφ})
    let phase = apq / r;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
    let c = 1.0 / libm::sqrt(t * t + 1.0);
    let s = t * c;

    // G = D·J with J = [[c, s], [-s, c]]
    let g00 = C64::new(c, 0.0);
    let g01 = C64::new(s, 0.0);
    let g10 = -phase.conj() * s;
    let g11 = phase.conj() * c;

    let n = a.rows();
    // columns: a ← a G
    for k in 0..n {
        let x = a[(k, p)];
        let y = a[(k, q)];
        a[(k, p)] = x * g00 + y * g10;
        a[(k, q)] = x * g01 + y * g11;
    }
    // rows: a ← G† a
    for k in 0..n {
        let x = a[(p, k)];
        let y = a[(q, k)];
        a[(p, k)] = g00.conj() * x + g10.conj() * y;
        a[(q, k)] = g01.conj() * x + g11.conj() * y;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let x = v[(k, p)];
        let y = v[(k, q)];
        v[(k, p)] = x * g00 + y * g10;
        v[(k, q)] = x * g01 + y * g11;
    }
}
