//! Block-cohering and block-decohering powers.
//!
//! `BCP(E) = max c_l1(E(|Ψ⟩⟨Ψ|))` over pure block-incoherent inputs
//! `|Ψ⟩ = |ν⟩ ⊗ |ψ_ν⟩`, and `BDP(E) = max [c_l1(Ψ) − c_l1(E(Ψ))]` over
//! maximally coherent inputs `(1/√M) Σ_μ |μ⟩ ⊗ |ψ_μ⟩`. Both are found by
//! [`maximize_on_spheres`]. For unitaries and random-unitary channels the
//! objective is evaluated in closed form instead of applying the channel.

use alloc::format;
use alloc::vec::Vec;

use crate::channels::KrausChannel;
use crate::linalg::{self, c64, CMatrix, CVector};
use crate::measures::{c_entropy_of_matrix, c_l1_of_matrix, trace_norm};
use crate::optimize::{maximize_on_spheres, Diagnostics, SearchOptions};
use crate::structure::{BlockOperator, BlockStructure};
use crate::{tol, Error, Result};

/// Coherence measure used by the generic objectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PowerMeasure {
    #[default]
    L1,
    /// Experimental: relative entropy of coherence. Closed forms and the
    /// unitary shortcuts always use the l1 measure.
    Entropy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
    pub tol: f64,
    pub measure: PowerMeasure,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            seed: 0,
            max_iter: 500,
            tol: 1e-10,
            measure: PowerMeasure::L1,
        }
    }
}

impl PowerOptions {
    fn search(&self, salt: u64) -> SearchOptions {
        SearchOptions {
            restarts: self.restarts,
            seed: self.seed.wrapping_add(salt.wrapping_mul(0x2545_f491_4f6c_dd1d)),
            max_iter: self.max_iter,
            tol: self.tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerMethod {
    /// Objective evaluated from a formula in the operator blocks.
    ClosedForm,
    /// Objective evaluated by applying the channel and measuring the output.
    Optimized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerResult {
    pub value: f64,
    /// Input block of the maximizing incoherent state (cohering power only).
    pub block: Option<usize>,
    /// Maximizing block components: one for the cohering power, `M` for the
    /// decohering power.
    pub states: Vec<CVector>,
    pub method: PowerMethod,
    pub diagnostics: Diagnostics,
}

fn check_square(ch: &KrausChannel, s: &BlockStructure) -> Result<()> {
    s.check_dim(ch.input().dim())?;
    s.check_dim(ch.output().dim())?;
    ch.check_cptp()
}

fn measure(m: &CMatrix, s: &BlockStructure, which: PowerMeasure) -> f64 {
    match which {
        PowerMeasure::L1 => c_l1_of_matrix(m, s),
        PowerMeasure::Entropy => c_entropy_of_matrix(m, s),
    }
}

/// Maximize a per-block objective over every input block.
fn over_blocks<F>(s: &BlockStructure, opts: &PowerOptions, method: PowerMethod, mut f: F) -> PowerResult
where
    F: FnMut(usize, &CVector) -> f64,
{
    let mut best: Option<PowerResult> = None;
    for nu in 0..s.num_blocks() {
        let opt = maximize_on_spheres(&[s.block_dim(nu)], &opts.search(nu as u64), |p| f(nu, &p[0]));
        if best.as_ref().is_none_or(|b| opt.value > b.value) {
            best = Some(PowerResult {
                value: opt.value,
                block: Some(nu),
                states: opt.point,
                method,
                diagnostics: opt.diagnostics,
            });
        }
    }
    let mut r = best.expect("at least one block");
    r.value = r.value.max(0.0);
    r
}

/// Block-cohering power of a channel on `s`.
pub fn bcp(ch: &KrausChannel, s: &BlockStructure, opts: &PowerOptions) -> Result<PowerResult> {
    check_square(ch, s)?;
    Ok(over_blocks(s, opts, PowerMethod::Optimized, |nu, psi| {
        measure(&ch.apply_pure(&s.embed(nu, psi)), s, opts.measure)
    }))
}

/// `(Σ_μ ‖A_μν ψ‖)² − 1`, the l1 coherence of `U|ν⟩⊗|ψ⟩`.
pub fn bcp_unitary(u: &BlockOperator, opts: &PowerOptions) -> Result<PowerResult> {
    u.check_unitary()?;
    let s = u.structure();
    let blocks = u.blocks();
    Ok(over_blocks(s, opts, PowerMethod::ClosedForm, |nu, psi| {
        let total: f64 = (0..s.num_blocks()).map(|mu| (&blocks[mu][nu] * psi).norm()).sum();
        total * total - 1.0
    }))
}

/// One term `p · (U ⊗ V) ρ (U ⊗ V)†` of a random-unitary channel.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMixtureTerm {
    pub p: f64,
    /// `M × M` unitary acting on the block label.
    pub u: CMatrix,
    /// `N × N` unitary acting inside every block.
    pub v: CMatrix,
}

fn check_mixture(terms: &[UnitaryMixtureTerm]) -> Result<(usize, usize)> {
    let invalid = |reason: alloc::string::String| Err(Error::InvalidMixture { reason });
    let Some(first) = terms.first() else {
        return invalid("no terms".into());
    };
    let (m, n) = (first.u.nrows(), first.v.nrows());
    let mut total = 0.0;
    for (i, t) in terms.iter().enumerate() {
        if !t.p.is_finite() || t.p < 0.0 {
            return invalid(format!("weight {i} is {}", t.p));
        }
        if t.u.shape() != (m, m) || t.v.shape() != (n, n) {
            return invalid(format!("term {i} has inconsistent shapes"));
        }
        let r = linalg::unitarity_residual(&t.u).max(linalg::unitarity_residual(&t.v));
        if r > tol::VALIDITY {
            return invalid(format!("term {i} is not unitary (residual {r:e})"));
        }
        total += t.p;
    }
    if (total - 1.0).abs() > tol::VALIDITY {
        return invalid(format!("weights sum to {total}"));
    }
    Ok((m, n))
}

/// The channel `Σ_i p_i (U_i ⊗ V_i) ρ (U_i ⊗ V_i)†` with `M` blocks of size `N`.
pub fn random_unitary_channel(terms: &[UnitaryMixtureTerm]) -> Result<KrausChannel> {
    let (m, n) = check_mixture(terms)?;
    let s = BlockStructure::contiguous(&alloc::vec![n; m])?;
    let kraus = terms
        .iter()
        .map(|t| linalg::kron(&t.u, &t.v) * c64(libm::sqrt(t.p), 0.0))
        .collect();
    KrausChannel::on(kraus, &s)
}

/// Cohering power of a random-unitary channel from the blocks
/// `B^ν_μμ' = Σ_i p_i u_μν conj(u_μ'ν) V_i|ψ⟩⟨ψ|V_i†`.
pub fn bcp_random_unitary(terms: &[UnitaryMixtureTerm], opts: &PowerOptions) -> Result<PowerResult> {
    let (m, n) = check_mixture(terms)?;
    let s = BlockStructure::contiguous(&alloc::vec![n; m])?;
    Ok(over_blocks(&s, opts, PowerMethod::ClosedForm, |nu, psi| {
        let images: Vec<CVector> = terms.iter().map(|t| &t.v * psi).collect();
        let mut total = 0.0;
        for mu in 0..m {
            for mu2 in mu + 1..m {
                let mut b = CMatrix::zeros(n, n);
                for (t, w) in terms.iter().zip(&images) {
                    let coeff = t.u[(mu, nu)] * t.u[(mu2, nu)].conj() * t.p;
                    b += linalg::outer(w, w) * coeff;
                }
                total += 2.0 * trace_norm(&b);
            }
        }
        total
    }))
}

fn mc_vector(s: &BlockStructure, comps: &[CVector]) -> CVector {
    let w = c64(1.0 / libm::sqrt(s.num_blocks() as f64), 0.0);
    let mut v = CVector::zeros(s.dim());
    for (mu, c) in comps.iter().enumerate() {
        v += s.embed(mu, c) * w;
    }
    v
}

fn over_mc<F>(s: &BlockStructure, opts: &PowerOptions, method: PowerMethod, f: F) -> PowerResult
where
    F: FnMut(&[CVector]) -> f64,
{
    let opt = maximize_on_spheres(&s.dims(), &opts.search(0), f);
    PowerResult {
        value: opt.value.max(0.0),
        block: None,
        states: opt.point,
        method,
        diagnostics: opt.diagnostics,
    }
}

/// Block-decohering power: `(M − 1) − min c(E(Ψ_MC))` over the components
/// of the maximally coherent input.
pub fn bdp(ch: &KrausChannel, s: &BlockStructure, opts: &PowerOptions) -> Result<PowerResult> {
    check_square(ch, s)?;
    let m = s.num_blocks() as f64;
    // coherence of every maximally coherent input
    let top = match opts.measure {
        PowerMeasure::L1 => m - 1.0,
        PowerMeasure::Entropy => libm::log2(m),
    };
    Ok(over_mc(s, opts, PowerMethod::Optimized, |comps| {
        let out = ch.apply_pure(&mc_vector(s, comps));
        top - measure(&out, s, opts.measure)
    }))
}

/// `M − (1/M) min (Σ_α ‖χ_α‖)²` with `χ_α = Σ_μ A_αμ ψ_μ`.
pub fn bdp_unitary(u: &BlockOperator, opts: &PowerOptions) -> Result<PowerResult> {
    u.check_unitary()?;
    let s = u.structure();
    let m = s.num_blocks();
    let blocks = u.blocks();
    Ok(over_mc(s, opts, PowerMethod::ClosedForm, |comps| {
        let total: f64 = (0..m)
            .map(|alpha| {
                let mut chi = CVector::zeros(s.block_dim(alpha));
                for (mu, c) in comps.iter().enumerate() {
                    chi += &blocks[alpha][mu] * c;
                }
                chi.norm()
            })
            .sum();
        m as f64 - total * total / m as f64
    }))
}

/// Rescale a Kraus set to completeness: `K_a ↦ K_a S^{-1/2}`, `S = Σ K†K`.
pub fn normalize_kraus(kraus: Vec<CMatrix>) -> Vec<CMatrix> {
    let Some(first) = kraus.first() else {
        return kraus;
    };
    let d = first.ncols();
    let sum = kraus.iter().fold(CMatrix::zeros(d, d), |acc, k| acc + k.adjoint() * k);
    let norm = linalg::inverse_sqrt(&sum);
    kraus.into_iter().map(|k| k * &norm).collect()
}
