//! Resource theory of block coherence.
//!
//! The Hilbert space is split into blocks by a partition of the computational
//! basis ([`BlockStructure`]). States without matrix elements between blocks
//! are free; channels whose Kraus operators keep at most one nonzero block per
//! block column are the free operations. On top of that the crate provides
//!
//! * the relative-entropy and trace-norm block-coherence measures ([`measures`]),
//! * Kraus channels and their incoherence classification ([`channels`]),
//! * majorization-based pure state conversion with explicit Kraus operators
//!   and a necessity certificate ([`conversion`]),
//! * synthesis of arbitrary gates from a maximally coherent ancilla ([`gates`]),
//! * block-cohering and block-decohering powers ([`powers`]),
//! * the relation between block structures and k-coherence ([`kcoherence`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(any(test, feature = "std"))]
extern crate std;

pub mod channels;
pub mod conversion;
mod error;
pub mod gates;
pub mod kcoherence;
pub mod linalg;
pub mod measures;
pub mod optimize;
pub mod powers;
pub mod random;
pub mod structure;
pub mod tol;

pub use channels::{block_dephasing_channel, IncoherenceVerdict, KrausBlockMap, KrausChannel};
pub use conversion::{
    build_conversion_channel, majorizes, necessity_certificate, verify_conversion, ConversionPlan,
    NecessityCertificate, ProbabilityVector,
};
pub use error::{Error, Result};
pub use gates::{build_gate_protocol, run_gate_protocol, GateProtocol};
pub use kcoherence::{CkCertificate, RankBoundedStructureFamily};
pub use linalg::{CMatrix, CVector, C64};
pub use measures::{c_entropy, c_l1, CoherenceReport};
pub use powers::{bcp, bcp_unitary, bdp, bdp_unitary, PowerOptions, PowerResult};
pub use structure::{
    block_dephase, decompose, haar_random_unitary, maximally_coherent_state, tensor, BlockOperator,
    BlockStructure, DensityMatrix, PureBlockState,
};
