//! Block structures, block decompositions of states and operators, and the
//! canonical states of the theory.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{self, c64, CMatrix, CVector};
use crate::{tol, Error, Result};

/// A partition of the computational basis `{0..d−1}` into `M` labeled groups.
///
/// Groups may be non-contiguous. The order of the groups, and of the indices
/// inside each group, is kept exactly as given; block views use that order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockStructure {
    groups: Vec<Vec<usize>>,
    owner: Vec<usize>,
}

impl BlockStructure {
    pub fn new(groups: Vec<Vec<usize>>, dim: usize) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::NoGroups);
        }
        let mut owner = vec![usize::MAX; dim];
        for (g, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::EmptyGroup { group: g });
            }
            for &i in group {
                if i >= dim {
                    return Err(Error::IndexOutOfRange { index: i, dim });
                }
                if owner[i] != usize::MAX {
                    return Err(Error::OverlappingGroups { index: i });
                }
                owner[i] = g;
            }
        }
        if let Some(index) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::IncompleteCover { index });
        }
        Ok(Self { groups, owner })
    }

    /// Consecutive blocks of the given sizes.
    pub fn contiguous(dims: &[usize]) -> Result<Self> {
        let mut groups = Vec::with_capacity(dims.len());
        let mut start = 0;
        for &d in dims {
            groups.push((start..start + d).collect());
            start += d;
        }
        Self::new(groups, start)
    }

    /// `d` one-dimensional blocks: standard coherence.
    pub fn singletons(dim: usize) -> Result<Self> {
        Self::new((0..dim).map(|i| vec![i]).collect(), dim)
    }

    /// One block spanning everything.
    pub fn single(dim: usize) -> Result<Self> {
        Self::new(vec![(0..dim).collect()], dim)
    }

    pub fn num_blocks(&self) -> usize {
        self.groups.len()
    }

    pub fn dim(&self) -> usize {
        self.owner.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    pub fn block_dim(&self, mu: usize) -> usize {
        self.groups[mu].len()
    }

    pub fn group(&self, mu: usize) -> &[usize] {
        &self.groups[mu]
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Block that basis index `i` belongs to.
    pub fn block_of(&self, i: usize) -> usize {
        self.owner[i]
    }

    /// Orthogonal projector onto block `mu`.
    pub fn projector(&self, mu: usize) -> CMatrix {
        let mut p = CMatrix::zeros(self.dim(), self.dim());
        for &i in &self.groups[mu] {
            p[(i, i)] = c64(1.0, 0.0);
        }
        p
    }

    /// Place a `d_mu`-vector into the full space, supported on block `mu`.
    pub fn embed(&self, mu: usize, v: &CVector) -> CVector {
        let mut out = CVector::zeros(self.dim());
        for (k, &i) in self.groups[mu].iter().enumerate() {
            out[i] = v[k];
        }
        out
    }

    pub fn restrict(&self, mu: usize, v: &CVector) -> CVector {
        linalg::subvector(v, &self.groups[mu])
    }

    /// The `d_mu × d_nu` block of a square operator on this structure.
    pub fn block(&self, a: &CMatrix, mu: usize, nu: usize) -> CMatrix {
        linalg::submatrix(a, &self.groups[mu], &self.groups[nu])
    }

    /// Uniform superposition of the basis states of block `mu`, embedded.
    pub fn uniform_component(&self, mu: usize) -> CVector {
        let amp = c64(1.0 / libm::sqrt(self.block_dim(mu) as f64), 0.0);
        self.embed(mu, &CVector::from_element(self.block_dim(mu), amp))
    }

    /// Zero every entry that couples two different blocks.
    pub fn dephase(&self, a: &CMatrix) -> CMatrix {
        CMatrix::from_fn(a.nrows(), a.ncols(), |i, j| {
            if self.owner[i] == self.owner[j] {
                a[(i, j)]
            } else {
                c64(0.0, 0.0)
            }
        })
    }

    /// Largest modulus of an entry coupling two different blocks.
    pub fn off_block_max(&self, a: &CMatrix) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                if self.owner[i] != self.owner[j] {
                    m = m.max(a[(i, j)].norm());
                }
            }
        }
        m
    }

    /// Product partition on `self ⊗ other`: block `(mu, alpha)` is the span of
    /// `group mu ⊗ group alpha`, blocks ordered lexicographically.
    pub fn product(&self, other: &BlockStructure) -> BlockStructure {
        let db = other.dim();
        let mut groups = Vec::with_capacity(self.num_blocks() * other.num_blocks());
        for ga in &self.groups {
            for gb in &other.groups {
                let mut g = Vec::with_capacity(ga.len() * gb.len());
                for &i in ga {
                    for &j in gb {
                        g.push(i * db + j);
                    }
                }
                groups.push(g);
            }
        }
        BlockStructure {
            groups,
            owner: {
                let mut owner = vec![0; self.dim() * db];
                for i in 0..self.dim() {
                    for j in 0..db {
                        owner[i * db + j] = self.owner[i] * other.num_blocks() + other.owner[j];
                    }
                }
                owner
            },
        }
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if found == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            })
        }
    }
}

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotADensityMatrix {
                reason: format!("matrix is {}x{}", m.nrows(), m.ncols()),
            });
        }
        let herm = linalg::max_abs(&(&m - m.adjoint()));
        if herm > tol::VALIDITY {
            return Err(Error::NotADensityMatrix {
                reason: format!("not Hermitian (deviation {herm:e})"),
            });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol::VALIDITY || tr.im.abs() > tol::VALIDITY {
            return Err(Error::NotADensityMatrix {
                reason: format!("trace is {tr}"),
            });
        }
        let min = linalg::hermitian_eigenvalues(&m)
            .first()
            .copied()
            .unwrap_or(0.0);
        if min < -tol::VALIDITY {
            return Err(Error::NotADensityMatrix {
                reason: format!("negative eigenvalue {min:e}"),
            });
        }
        Ok(Self(m))
    }

    /// `|ψ⟩⟨ψ|` for a unit vector.
    pub fn pure(psi: &CVector) -> Self {
        Self(linalg::outer(psi, psi))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim) * c64(1.0 / dim as f64, 0.0))
    }

    /// Wrap a matrix known to be a state (output of a CPTP map, etc).
    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.0)
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    /// `⟨ψ|ρ|ψ⟩`, the fidelity with a pure state.
    pub fn fidelity_with_pure(&self, psi: &CVector) -> f64 {
        psi.dotc(&(&self.0 * psi)).re
    }

    /// `p_μ = Tr(π_μ ρ π_μ)`
    pub fn block_weights(&self, s: &BlockStructure) -> Vec<f64> {
        s.groups()
            .iter()
            .map(|g| g.iter().map(|&i| self.0[(i, i)].re).sum())
            .collect()
    }
}

/// `ρ* = Σ_μ π_μ ρ π_μ`, the closest block-incoherent state.
pub fn block_dephase(rho: &DensityMatrix, s: &BlockStructure) -> Result<DensityMatrix> {
    s.check_dim(rho.dim())?;
    Ok(DensityMatrix(s.dephase(rho.matrix())))
}

/// A unit vector together with its block decomposition
/// `|Ψ⟩ = Σ_μ x_μ |μ⟩ ⊗ |ψ_μ⟩`, `x_μ ≥ 0`.
///
/// Components of zero-weight blocks are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureBlockState {
    amplitudes: CVector,
    structure: BlockStructure,
    weights: Vec<f64>,
    components: Vec<Option<CVector>>,
}

impl PureBlockState {
    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    /// The block weights `x_μ`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The block probabilities `x_μ²`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.weights.iter().map(|x| x * x).collect()
    }

    pub fn component(&self, mu: usize) -> Option<&CVector> {
        self.components[mu].as_ref()
    }

    pub fn components(&self) -> &[Option<CVector>] {
        &self.components
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::pure(&self.amplitudes)
    }

    /// `Σ_μ x_μ · embed(ψ_μ)`
    pub fn reassemble(&self) -> CVector {
        let mut out = CVector::zeros(self.structure.dim());
        for (mu, comp) in self.components.iter().enumerate() {
            if let Some(c) = comp {
                out += self.structure.embed(mu, c) * c64(self.weights[mu], 0.0);
            }
        }
        out
    }
}

/// Split a unit vector into block weights and normalized block components.
pub fn decompose(state: &CVector, s: &BlockStructure) -> Result<PureBlockState> {
    s.check_dim(state.len())?;
    let norm_sq = state.norm_squared();
    if (norm_sq - 1.0).abs() > tol::VALIDITY {
        return Err(Error::NotNormalized { norm_sq });
    }
    let mut weights = Vec::with_capacity(s.num_blocks());
    let mut components = Vec::with_capacity(s.num_blocks());
    for mu in 0..s.num_blocks() {
        let r = s.restrict(mu, state);
        let x = r.norm();
        weights.push(x);
        components.push((x > tol::ZERO_WEIGHT).then(|| r * c64(1.0 / x, 0.0)));
    }
    Ok(PureBlockState {
        amplitudes: state.clone(),
        structure: s.clone(),
        weights,
        components,
    })
}

/// `|Ψ⟩_MC = (1/√M) Σ_μ |μ⟩ ⊗ |ψ_μ⟩`.
///
/// Without explicit components every block carries the uniform superposition
/// of its own basis.
pub fn maximally_coherent_state(
    s: &BlockStructure,
    components: Option<&[CVector]>,
) -> Result<PureBlockState> {
    let m = s.num_blocks();
    let comps: Vec<CVector> = match components {
        Some(cs) => {
            if cs.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: cs.len(),
                });
            }
            for (mu, c) in cs.iter().enumerate() {
                if c.len() != s.block_dim(mu) {
                    return Err(Error::DimensionMismatch {
                        expected: s.block_dim(mu),
                        found: c.len(),
                    });
                }
                let norm_sq = c.norm_squared();
                if (norm_sq - 1.0).abs() > tol::VALIDITY {
                    return Err(Error::NotNormalized { norm_sq });
                }
            }
            cs.to_vec()
        }
        None => (0..m)
            .map(|mu| s.restrict(mu, &s.uniform_component(mu)))
            .collect(),
    };
    let w = 1.0 / libm::sqrt(m as f64);
    let mut amplitudes = CVector::zeros(s.dim());
    for (mu, c) in comps.iter().enumerate() {
        amplitudes += s.embed(mu, c) * c64(w, 0.0);
    }
    Ok(PureBlockState {
        amplitudes,
        structure: s.clone(),
        weights: vec![w; m],
        components: comps.into_iter().map(Some).collect(),
    })
}

/// A square operator viewed through a block structure: `A = Σ |μ⟩⟨ν| ⊗ A_μν`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOperator {
    matrix: CMatrix,
    structure: BlockStructure,
}

impl BlockOperator {
    pub fn new(matrix: CMatrix, structure: BlockStructure) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        structure.check_dim(matrix.nrows())?;
        Ok(Self { matrix, structure })
    }

    /// Reassemble from a full `M × M` grid of blocks.
    pub fn from_blocks(blocks: &[Vec<CMatrix>], structure: BlockStructure) -> Result<Self> {
        let m = structure.num_blocks();
        let mut matrix = CMatrix::zeros(structure.dim(), structure.dim());
        if blocks.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: blocks.len(),
            });
        }
        for (mu, row) in blocks.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: row.len(),
                });
            }
            for (nu, b) in row.iter().enumerate() {
                let (rows, cols) = (structure.group(mu), structure.group(nu));
                if b.nrows() != rows.len() || b.ncols() != cols.len() {
                    return Err(Error::DimensionMismatch {
                        expected: rows.len() * cols.len(),
                        found: b.nrows() * b.ncols(),
                    });
                }
                for (r, &i) in rows.iter().enumerate() {
                    for (c, &j) in cols.iter().enumerate() {
                        matrix[(i, j)] = b[(r, c)];
                    }
                }
            }
        }
        Ok(Self { matrix, structure })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// The block `A_μν` (rows from group `mu`, columns from group `nu`).
    pub fn block(&self, mu: usize, nu: usize) -> CMatrix {
        self.structure.block(&self.matrix, mu, nu)
    }

    pub fn blocks(&self) -> Vec<Vec<CMatrix>> {
        let m = self.structure.num_blocks();
        (0..m)
            .map(|mu| (0..m).map(|nu| self.block(mu, nu)).collect())
            .collect()
    }

    /// Same matrix, different block structure.
    pub fn with_structure(&self, structure: BlockStructure) -> Result<Self> {
        Self::new(self.matrix.clone(), structure)
    }

    pub fn unitarity_residual(&self) -> f64 {
        linalg::unitarity_residual(&self.matrix)
    }

    pub(crate) fn check_unitary(&self) -> Result<()> {
        let residual = self.unitarity_residual();
        if residual > tol::VALIDITY {
            Err(Error::NotUnitary { residual })
        } else {
            Ok(())
        }
    }
}

/// Haar-distributed `n × n` unitary from a seeded generator, as a single block.
pub fn haar_random_unitary(n: usize, seed: u64) -> BlockOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = crate::random::haar_unitary(&mut rng, n);
    BlockOperator {
        matrix: u,
        structure: BlockStructure::single(n).expect("n >= 1"),
    }
}

/// `A ⊗ B`, viewed over `⊕_{μ=1}^{M} H_N` with `M = dim A`, `N = dim B`,
/// so that block `(μ, ν)` equals `a_μν · B`.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> Result<BlockOperator> {
    for m in [a, b] {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
    }
    let structure = BlockStructure::contiguous(&vec![b.nrows(); a.nrows()])?;
    BlockOperator::new(linalg::kron(a, b), structure)
}
