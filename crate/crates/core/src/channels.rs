//! Kraus channels, block-incoherence classification and dephasing covariance.

use alloc::vec::Vec;

use crate::linalg::{self, c64, CMatrix};
use crate::random;
use crate::structure::{BlockOperator, BlockStructure, DensityMatrix};
use crate::{tol, Error, Result};

/// Seed of the pseudo-random sample used by [`is_dephasing_covariant`].
pub const COVARIANCE_SEED: u64 = 0x5eed_c0de;

/// `E(ρ) = Σ_a K_a ρ K_a†` between two block-structured spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    kraus: Vec<CMatrix>,
    input: BlockStructure,
    output: BlockStructure,
}

/// Completeness check result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptpReport {
    pub is_cptp: bool,
    /// Largest entry modulus of `Σ K†K − I`.
    pub residual: f64,
}

/// Block map of one Kraus operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KrausBlockMap {
    /// `a(ν)` for every input block `ν`; `None` where the whole block column vanishes.
    Incoherent(Vec<Option<usize>>),
    /// Block column `column` has nonzero blocks in all of `rows`.
    Violation { column: usize, rows: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncoherenceVerdict {
    pub is_block_incoherent: bool,
    pub per_kraus: Vec<KrausBlockMap>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<CMatrix>, input: BlockStructure, output: BlockStructure) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        for k in &kraus {
            output.check_dim(k.nrows())?;
            input.check_dim(k.ncols())?;
        }
        Ok(Self {
            kraus,
            input,
            output,
        })
    }

    /// Square channel on one structure.
    pub fn on(kraus: Vec<CMatrix>, s: &BlockStructure) -> Result<Self> {
        Self::new(kraus, s.clone(), s.clone())
    }

    pub fn identity(s: &BlockStructure) -> Self {
        Self {
            kraus: alloc::vec![CMatrix::identity(s.dim(), s.dim())],
            input: s.clone(),
            output: s.clone(),
        }
    }

    pub fn unitary(u: &BlockOperator) -> Self {
        Self {
            kraus: alloc::vec![u.matrix().clone()],
            input: u.structure().clone(),
            output: u.structure().clone(),
        }
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn input(&self) -> &BlockStructure {
        &self.input
    }

    pub fn output(&self) -> &BlockStructure {
        &self.output
    }

    /// Same Kraus operators, different block structures.
    pub fn with_structures(&self, input: BlockStructure, output: BlockStructure) -> Result<Self> {
        Self::new(self.kraus.clone(), input, output)
    }

    pub fn validate_cptp(&self) -> CptpReport {
        let d = self.input.dim();
        let sum = self
            .kraus
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, k| acc + k.adjoint() * k);
        let residual = linalg::identity_residual(&sum);
        CptpReport {
            is_cptp: residual <= tol::CPTP,
            residual,
        }
    }

    pub(crate) fn check_cptp(&self) -> Result<()> {
        let r = self.validate_cptp();
        if r.is_cptp {
            Ok(())
        } else {
            Err(Error::NotCptp {
                residual: r.residual,
            })
        }
    }

    /// `E(ρ)`, Hermitian-symmetrized.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.input.check_dim(rho.dim())?;
        self.check_cptp()?;
        Ok(DensityMatrix::from_matrix_unchecked(linalg::hermitian_part(
            &self.apply_matrix(rho.matrix()),
        )))
    }

    /// The linear map on an arbitrary operator, no checks.
    pub fn apply_matrix(&self, m: &CMatrix) -> CMatrix {
        let d = self.output.dim();
        self.kraus
            .iter()
            .fold(CMatrix::zeros(d, d), |acc, k| acc + k * m * k.adjoint())
    }

    /// Output on a pure input `|ψ⟩⟨ψ|`, accumulated from the vectors `K_a ψ`.
    pub(crate) fn apply_pure(&self, psi: &linalg::CVector) -> CMatrix {
        let d = self.output.dim();
        let mut out = CMatrix::zeros(d, d);
        for k in &self.kraus {
            let v = k * psi;
            out += linalg::outer(&v, &v);
        }
        out
    }

    /// At most one nonzero block per block column, for every Kraus operator.
    pub fn classify_block_incoherent(&self) -> IncoherenceVerdict {
        let per_kraus: Vec<KrausBlockMap> = self
            .kraus
            .iter()
            .map(|k| block_map(k, &self.input, &self.output))
            .collect();
        IncoherenceVerdict {
            is_block_incoherent: per_kraus
                .iter()
                .all(|m| matches!(m, KrausBlockMap::Incoherent(_))),
            per_kraus,
        }
    }
}

fn block_map(k: &CMatrix, input: &BlockStructure, output: &BlockStructure) -> KrausBlockMap {
    let mut map = Vec::with_capacity(input.num_blocks());
    for nu in 0..input.num_blocks() {
        let rows: Vec<usize> = (0..output.num_blocks())
            .filter(|&mu| {
                linalg::submatrix(k, output.group(mu), input.group(nu)).norm() > tol::BLOCK_NONZERO
            })
            .collect();
        match rows.len() {
            0 => map.push(None),
            1 => map.push(Some(rows[0])),
            _ => return KrausBlockMap::Violation { column: nu, rows },
        }
    }
    KrausBlockMap::Incoherent(map)
}

/// The channel `{π_μ}` realizing `ρ ↦ Σ π_μ ρ π_μ`.
pub fn block_dephasing_channel(s: &BlockStructure) -> KrausChannel {
    KrausChannel {
        kraus: (0..s.num_blocks()).map(|mu| s.projector(mu)).collect(),
        input: s.clone(),
        output: s.clone(),
    }
}

/// Largest deviation of `E∘Δ` from `Δ∘E` over every matrix unit `|i⟩⟨j|`
/// and `samples` pseudo-random density matrices.
pub fn dephasing_covariance_deviation(
    ch: &KrausChannel,
    s: &BlockStructure,
    samples: usize,
) -> Result<f64> {
    s.check_dim(ch.input().dim())?;
    s.check_dim(ch.output().dim())?;
    let d = s.dim();
    let deviation = |m: &CMatrix| {
        let lhs = ch.apply_matrix(&s.dephase(m));
        let rhs = s.dephase(&ch.apply_matrix(m));
        linalg::max_abs(&(lhs - rhs))
    };
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let mut unit = CMatrix::zeros(d, d);
            unit[(i, j)] = c64(1.0, 0.0);
            worst = worst.max(deviation(&unit));
        }
    }
    let mut rng = random::rng(COVARIANCE_SEED);
    for _ in 0..samples {
        let rho = random::density(&mut rng, d);
        worst = worst.max(deviation(rho.matrix()));
    }
    Ok(worst)
}

/// Whether `E` commutes with block dephasing. The matrix-unit sweep makes a
/// `true` answer exact by linearity.
pub fn is_dephasing_covariant(ch: &KrausChannel, s: &BlockStructure, samples: usize) -> Result<bool> {
    Ok(dephasing_covariance_deviation(ch, s, samples)? <= tol::COVARIANCE)
}
