//! Arbitrary gates from block-incoherent operations and a maximally coherent
//! ancilla.
//!
//! With `|ξ⟩ = |Ψ⟩ ⊗ |Φ_MC⟩` on system ⊗ ancilla (both carrying the same block
//! structure) the Kraus operators
//!
//! ```text
//! 𝒦_s = Σ_μ π_μ U ⊗ |φ_s⟩⟨φ_{μ+s}|,   s = 0, …, M−1, indices mod M
//! ```
//!
//! satisfy `𝒦_s|ξ⟩ = M^{-1/2} U|Ψ⟩ ⊗ |φ_s⟩`, so the channel outputs
//! `U|Ψ⟩⟨Ψ|U† ⊗ ρ_inc` with `ρ_inc = (1/M) Σ_s |φ_s⟩⟨φ_s|`. On their own they
//! are complete only on `I ⊗ span{φ_β}`; when some block has dimension above
//! one the block-diagonal operator `I ⊗ (I − Σ_β |φ_β⟩⟨φ_β|)` is added, which
//! annihilates `|ξ⟩`.

use alloc::vec::Vec;

use crate::channels::KrausChannel;
use crate::linalg::{self, c64, CMatrix};
use crate::structure::{maximally_coherent_state, BlockOperator, BlockStructure, DensityMatrix, PureBlockState};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GateProtocol {
    pub target: BlockOperator,
    pub ancilla: BlockStructure,
    /// Product partition of system ⊗ ancilla, blocks `(μ, α)` in lexicographic order.
    pub joint: BlockStructure,
    /// `𝒦_0, …, 𝒦_{M−1}`, followed by the completion operator if present.
    pub channel: KrausChannel,
    pub has_completion: bool,
}

pub fn build_gate_protocol(u: &BlockOperator) -> Result<GateProtocol> {
    u.check_unitary()?;
    let s = u.structure().clone();
    let m = s.num_blocks();
    let d = s.dim();
    let joint = s.product(&s);
    let phi: Vec<_> = (0..m).map(|b| s.uniform_component(b)).collect();
    let rows: Vec<CMatrix> = (0..m).map(|mu| s.projector(mu) * u.matrix()).collect();

    let mut kraus = Vec::with_capacity(m + 1);
    for shift in 0..m {
        let mut k = CMatrix::zeros(d * d, d * d);
        for (mu, row) in rows.iter().enumerate() {
            k += linalg::kron(row, &linalg::outer(&phi[shift], &phi[(mu + shift) % m]));
        }
        kraus.push(k);
    }
    let has_completion = (0..m).any(|b| s.block_dim(b) > 1);
    if has_completion {
        let mut rest = CMatrix::identity(d, d);
        for p in &phi {
            rest -= linalg::outer(p, p);
        }
        kraus.push(linalg::kron(&CMatrix::identity(d, d), &rest));
    }
    let channel = KrausChannel::on(kraus, &joint)?;
    channel.check_cptp()?;
    if !channel.classify_block_incoherent().is_block_incoherent {
        return Err(Error::NotIncoherent);
    }
    Ok(GateProtocol {
        target: u.clone(),
        ancilla: s,
        joint,
        channel,
        has_completion,
    })
}

/// Run the protocol on `|Ψ⟩ ⊗ |Φ_MC⟩` and return the system and ancilla
/// marginals.
pub fn run_gate_protocol(p: &GateProtocol, psi: &PureBlockState) -> Result<(DensityMatrix, DensityMatrix)> {
    let d = p.target.dim();
    if psi.structure().dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: psi.structure().dim(),
        });
    }
    let mc = maximally_coherent_state(&p.ancilla, None)?;
    let xi = linalg::kron_vec(psi.amplitudes(), mc.amplitudes());
    let out = p.channel.apply_pure(&xi);
    let sym = |m: CMatrix| DensityMatrix::from_matrix_unchecked(linalg::hermitian_part(&m));
    Ok((
        sym(linalg::partial_trace_second(&out, d, d)),
        sym(linalg::partial_trace_first(&out, d, d)),
    ))
}

/// `(1/M) Σ_μ |φ_μ⟩⟨φ_μ|`, the fully dephased maximally coherent state.
pub fn decohered_ancilla(s: &BlockStructure) -> DensityMatrix {
    let m = s.num_blocks();
    let mut rho = CMatrix::zeros(s.dim(), s.dim());
    for b in 0..m {
        let phi = s.uniform_component(b);
        rho += linalg::outer(&phi, &phi) * c64(1.0 / m as f64, 0.0);
    }
    DensityMatrix::from_matrix_unchecked(rho)
}
