//! Block-coherence measures.
//!
//! * `c_entropy(ρ) = S(ρ*) − S(ρ)`, the relative entropy to the closest
//!   block-incoherent state `ρ* = Σ π_μ ρ π_μ`, in bits.
//! * `c_l1(ρ) = Σ_{μ≠ν} ‖ρ_μν‖₁`, the sum of trace norms of the off-diagonal
//!   blocks.

use alloc::format;

use crate::linalg::{self, CMatrix, CVector};
use crate::structure::{block_dephase, BlockStructure, DensityMatrix};
use crate::{tol, Error, Result};

/// Both block-coherence measures of one state.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceReport<'a> {
    pub c_entropy: f64,
    pub c_l1: f64,
    pub structure: &'a BlockStructure,
}

pub fn coherence_report<'a>(
    rho: &DensityMatrix,
    s: &'a BlockStructure,
) -> Result<CoherenceReport<'a>> {
    Ok(CoherenceReport {
        c_entropy: c_entropy(rho, s)?,
        c_l1: c_l1(rho, s)?,
        structure: s,
    })
}

/// Von Neumann entropy in bits. Eigenvalues in `[−1e−10, 0)` are clamped.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    entropy_of_matrix(rho.matrix())
}

pub(crate) fn entropy_of_matrix(m: &CMatrix) -> Result<f64> {
    let mut s = 0.0;
    for lambda in linalg::hermitian_eigenvalues(m) {
        if lambda < -tol::ENTROPY_CLAMP {
            return Err(Error::NotADensityMatrix {
                reason: format!("eigenvalue {lambda:e} below the entropy clamp"),
            });
        }
        if lambda > 0.0 {
            s -= lambda * libm::log2(lambda);
        }
    }
    Ok(s)
}

/// `‖A‖₁ = Tr √(A†A)`, the sum of singular values.
pub fn trace_norm(a: &CMatrix) -> f64 {
    linalg::singular_values(a).iter().sum()
}

pub fn c_entropy(rho: &DensityMatrix, s: &BlockStructure) -> Result<f64> {
    let dephased = block_dephase(rho, s)?;
    Ok(von_neumann_entropy(&dephased)? - von_neumann_entropy(rho)?)
}

pub fn c_l1(rho: &DensityMatrix, s: &BlockStructure) -> Result<f64> {
    s.check_dim(rho.dim())?;
    Ok(c_l1_of_matrix(rho.matrix(), s))
}

/// `c_l1` on a raw matrix, assumed Hermitian: `‖ρ_νμ‖₁ = ‖ρ_μν‖₁`.
pub(crate) fn c_l1_of_matrix(m: &CMatrix, s: &BlockStructure) -> f64 {
    let n = s.num_blocks();
    let mut total = 0.0;
    for mu in 0..n {
        for nu in mu + 1..n {
            total += 2.0 * trace_norm(&s.block(m, mu, nu));
        }
    }
    total
}

pub(crate) fn c_entropy_of_matrix(m: &CMatrix, s: &BlockStructure) -> f64 {
    // only used inside optimizers on exact channel outputs
    let a = entropy_of_matrix(&s.dephase(m)).unwrap_or(f64::NAN);
    let b = entropy_of_matrix(m).unwrap_or(f64::NAN);
    a - b
}

/// Number of amplitudes with modulus above `tol`.
pub fn coherence_rank(psi: &CVector, tol: f64) -> usize {
    psi.iter().filter(|z| z.norm() > tol).count()
}
