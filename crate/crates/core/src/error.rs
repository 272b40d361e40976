use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("no groups given")]
    NoGroups,
    #[error("group {group} is empty")]
    EmptyGroup { group: usize },
    #[error("basis index {index} is out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("basis index {index} appears in more than one group")]
    OverlappingGroups { index: usize },
    #[error("groups do not cover basis index {index}")]
    IncompleteCover { index: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector is not normalized (squared norm {norm_sq})")]
    NotNormalized { norm_sq: f64 },
    #[error("not a density matrix: {reason}")]
    NotADensityMatrix { reason: String },
    #[error("operator is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("Kraus set is not trace preserving (residual {residual:e})")]
    NotCptp { residual: f64 },
    #[error("circulant system for the conversion weights is singular")]
    SingularSystem,
    #[error("conversion infeasible: {reason}")]
    Infeasible { reason: String },
    #[error("source weight is zero in sorted slot {slot} while the target weight is {target}")]
    ZeroWeightPolicy { slot: usize, target: f64 },
    #[error("verification failed: {clause}")]
    VerificationFailed { clause: String },
    #[error("channel is not block incoherent")]
    NotIncoherent,
    #[error("channel does not map the source onto the target (fidelity {fidelity})")]
    NotAConversion { fidelity: f64 },
    #[error("necessity certificate violated: {reason}")]
    CertificateViolation { reason: String },
    #[error("invalid mixture: {reason}")]
    InvalidMixture { reason: String },
    #[error("d = {d}, k = {k} is outside the supported range")]
    TooLarge { d: usize, k: usize },
    #[error("state is not block incoherent (residual {residual:e})")]
    NotBlockIncoherent { residual: f64 },
    #[error("coherence rank {rank} exceeds the bound {k}")]
    RankBoundExceeded { rank: usize, k: usize },
}
