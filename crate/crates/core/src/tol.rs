//! Numerical tolerances shared across the crate.

/// Validity of states, operators and unitarity.
pub const VALIDITY: f64 = 1e-9;

/// Frobenius norm above which a block of a Kraus operator counts as nonzero.
pub const BLOCK_NONZERO: f64 = 1e-9;

/// Most negative eigenvalue still treated as round-off by the entropy.
pub const ENTROPY_CLAMP: f64 = 1e-10;

/// Most negative conversion weight still clamped to zero.
pub const GAMMA_CLAMP: f64 = 1e-10;

/// Completeness residual accepted for a trace-preserving Kraus set.
pub const CPTP: f64 = 1e-9;

/// Maximum deviation accepted by the dephasing-covariance test.
pub const COVARIANCE: f64 = 1e-8;

/// Block weights at or below this are treated as zero.
pub const ZERO_WEIGHT: f64 = 1e-12;

/// Default amplitude threshold for the coherence rank.
pub const RANK: f64 = 1e-9;

/// Slack on prefix-sum comparisons in majorization tests.
pub const MAJORIZATION: f64 = 1e-12;

/// Slack of the necessity certificate: normalization, stochasticity, chain.
pub const CERTIFICATE: f64 = 1e-8;
