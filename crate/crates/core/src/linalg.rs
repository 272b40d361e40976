//! Small dense complex linear-algebra helpers on top of nalgebra.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

/// `|u⟩⟨v|`
pub fn outer(u: &CVector, v: &CVector) -> CMatrix {
    u * v.adjoint()
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn max_abs_vec(a: &CVector) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// Largest entry modulus of `a − I`.
pub fn identity_residual(a: &CMatrix) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            r = r.max((a[(i, j)] - c64(target, 0.0)).norm());
        }
    }
    r
}

/// Largest entry modulus of `u†u − I`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    identity_residual(&(u.adjoint() * u))
}

pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * c64(0.5, 0.0)
}

pub fn trace(a: &CMatrix) -> C64 {
    a.trace()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitian_part(a).symmetric_eigen();
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = hermitian_part(a)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    values
}

pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    a.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Submatrix selected by explicit row and column index lists.
pub fn submatrix(a: &CMatrix, rows: &[usize], cols: &[usize]) -> CMatrix {
    CMatrix::from_fn(rows.len(), cols.len(), |r, c| a[(rows[r], cols[c])])
}

pub fn subvector(v: &CVector, idx: &[usize]) -> CVector {
    CVector::from_fn(idx.len(), |r, _| v[idx[r]])
}

/// Trace out the first factor of a `da·db` square matrix.
pub fn partial_trace_first(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(db, db, |i, j| {
        (0..da).map(|a| m[(a * db + i, a * db + j)]).sum()
    })
}

/// Trace out the second factor of a `da·db` square matrix.
pub fn partial_trace_second(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(da, da, |i, j| {
        (0..db).map(|b| m[(i * db + b, j * db + b)]).sum()
    })
}

/// A unitary mapping the unit vector `from` onto the unit vector `to`.
///
/// Strips the relative phase first, then applies the Householder reflection
/// exchanging the two (now real-overlapping) vectors.
pub fn unitary_mapping(from: &CVector, to: &CVector) -> CMatrix {
    let n = from.len();
    let overlap = to.dotc(from);
    let phase = if overlap.norm() > 1e-300 {
        overlap / overlap.norm()
    } else {
        c64(1.0, 0.0)
    };
    // from' = conj(phase)·from has ⟨to|from'⟩ ≥ 0
    let rotated = from * phase.conj();
    let v = &rotated - to;
    let vv = v.norm_squared();
    let mut u = CMatrix::identity(n, n);
    if vv > 1e-28 {
        u -= (&v * v.adjoint()) * c64(2.0 / vv, 0.0);
    }
    u * phase.conj()
}

/// `A^{-1/2}` of a Hermitian positive definite matrix.
pub fn inverse_sqrt(a: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(a);
    let d = CMatrix::from_fn(values.len(), values.len(), |i, j| {
        if i == j {
            c64(1.0 / libm::sqrt(values[i]), 0.0)
        } else {
            c64(0.0, 0.0)
        }
    });
    &vectors * d * vectors.adjoint()
}

/// Solve a real square system by LU; `None` when numerically singular.
pub fn solve_real(a: DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return None;
    }
    let lu = a.lu();
    let u = lu.u();
    let min_pivot = (0..u.nrows()).fold(f64::INFINITY, |m, i| m.min(u[(i, i)].abs()));
    if min_pivot < 1e-12 * scale {
        return None;
    }
    let x = lu.solve(b)?;
    x.iter().all(|v| v.is_finite()).then_some(x)
}
