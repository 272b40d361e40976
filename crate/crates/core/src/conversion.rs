//! Pure-state conversion by block-incoherent operations.
//!
//! `|Φx⟩ = Σ x_μ |μ⟩⊗|ψ_μ⟩` converts to `|Φy⟩` iff the probability vector
//! `y² = (y_μ²)` majorizes `x²`. The constructive side sorts both weight
//! vectors, rotates every component onto the uniform vector `φ_μ` of its block
//! and applies Kraus operators of the form
//!
//! ```text
//! A₀    = γ₀ Σ_μ (y_μ/x_μ) π_μ
//! A^π_I = (γ_π/√đ) Σ_ν (y_π(ν)/x_ν) √d_ν |π(ν)⟩⟨ν| ⊗ |φ_π(ν)⟩⟨e_{i_ν}|
//! ```
//!
//! where `đ = Π d_ν` and `I = (i_1, …, i_M)` runs over one basis index per
//! block. Completeness reads `x_ν² = Σ_π γ_π² y²_π(ν)`. The cyclic shifts
//! `π_s(ν) = ν − s` give the circulant system solved by [`solve_gammas`]; when
//! that system has no nonnegative solution the weights come from a
//! T-transform decomposition of a doubly stochastic matrix instead.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::channels::{KrausBlockMap, KrausChannel};
use crate::linalg::{self, c64, CMatrix, CVector, C64};
use crate::structure::PureBlockState;
use crate::{tol, Error, Result};

/// Nonnegative entries summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        let sum: f64 = entries.iter().sum();
        if entries.is_empty()
            || entries.iter().any(|p| !p.is_finite() || *p < -tol::VALIDITY)
            || (sum - 1.0).abs() > tol::VALIDITY
        {
            return Err(Error::NotNormalized { norm_sq: sum });
        }
        Ok(Self(entries.into_iter().map(|p| p.max(0.0)).collect()))
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entries sorted descending.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }
}

/// First prefix at which `p` fails to dominate `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrefixViolation {
    /// Prefix length, starting at 1.
    pub k: usize,
    pub p_sum: f64,
    pub q_sum: f64,
}

/// `p ≻ q`: every sorted prefix sum of `p` is at least that of `q`.
pub fn majorizes(p: &ProbabilityVector, q: &ProbabilityVector) -> bool {
    majorization_violation(p, q).is_none()
}

pub fn majorization_violation(p: &ProbabilityVector, q: &ProbabilityVector) -> Option<PrefixViolation> {
    prefix_violation(&p.sorted(), &q.sorted(), tol::MAJORIZATION)
}

/// Prefix dominance in the given order, shorter vector padded with zeros.
fn prefix_violation(p: &[f64], q: &[f64], slack: f64) -> Option<PrefixViolation> {
    let n = p.len().max(q.len());
    let (mut ps, mut qs) = (0.0, 0.0);
    for k in 0..n {
        ps += p.get(k).copied().unwrap_or(0.0);
        qs += q.get(k).copied().unwrap_or(0.0);
        if ps < qs - slack {
            return Some(PrefixViolation {
                k: k + 1,
                p_sum: ps,
                q_sum: qs,
            });
        }
    }
    None
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Solve `γ₀² y_μ² + Σ_{s≥1} γ_s² y²_{μ−s} = x_μ²` (cyclic indices) for the
/// vector `(γ₀², …, γ²_{M−1})`. Entries are taken in the given order.
pub fn solve_gammas(x: &ProbabilityVector, y: &ProbabilityVector) -> Result<Vec<f64>> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    solve_circulant(x.entries(), y.entries())
}

fn solve_circulant(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let m = x.len();
    let a = DMatrix::from_fn(m, m, |mu, s| y[(mu + m - s) % m]);
    let b = DVector::from_column_slice(x);
    let g = linalg::solve_real(a, &b).ok_or(Error::SingularSystem)?;
    if let Some(s) = (0..m).find(|&s| g[s] < -tol::GAMMA_CLAMP) {
        return Err(Error::Infeasible {
            reason: format!("circulant weight gamma_{s}^2 = {:e} is negative", g[s]),
        });
    }
    Ok(g.iter().map(|v| v.max(0.0)).collect())
}

/// How the mixing weights were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Nonnegative solution of the circulant system; terms are cyclic shifts.
    Circulant,
    /// Product of T-transforms expanded into a mixture of slot permutations.
    PermutationMixture,
}

/// One permutation of sorted slots with its weight `γ²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotTerm {
    /// `slot_map[ν]` is the output slot fed by input slot `ν`.
    pub slot_map: Vec<usize>,
    pub weight: f64,
}

/// Where a Kraus operator of the plan comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KrausRole {
    /// `A₀`, used for the identity term when both orders agree.
    Diagonal,
    /// One member `A^π_I` of the family of term `term`.
    Family { term: usize },
    /// Projector onto blocks that are empty in both states.
    Deflated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConversionPlan {
    /// `source_order[j]` is the source block in sorted slot `j`.
    pub source_order: Vec<usize>,
    pub target_order: Vec<usize>,
    /// Sorted source probabilities `x_j²`.
    pub x: Vec<f64>,
    /// Sorted target probabilities `y_j²`.
    pub y: Vec<f64>,
    /// Slots `0..active` carry weight; the rest are empty in both states.
    pub active: usize,
    pub route: Route,
    /// Circulant solution `γ_s²` when [`Route::Circulant`] was taken.
    pub gammas: Option<Vec<f64>>,
    pub terms: Vec<SlotTerm>,
    pub channel: KrausChannel,
    pub roles: Vec<KrausRole>,
    /// `K_a|Φx⟩ = expected[a]·|Φy⟩`.
    pub expected: Vec<f64>,
}

fn descending_order(p: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..p.len()).collect();
    idx.sort_by(|&a, &b| p[b].total_cmp(&p[a]));
    idx
}

/// `⊕_μ W_μ` with `W_μ ψ_μ = φ_μ`; identity on blocks without a component.
fn canonicalizer(state: &PureBlockState) -> CMatrix {
    let s = state.structure();
    let mut w = CMatrix::zeros(s.dim(), s.dim());
    for mu in 0..s.num_blocks() {
        let d = s.block_dim(mu);
        let block = match state.component(mu) {
            Some(c) => linalg::unitary_mapping(c, &s.restrict(mu, &s.uniform_component(mu))),
            None => CMatrix::identity(d, d),
        };
        for (r, &i) in s.group(mu).iter().enumerate() {
            for (c, &j) in s.group(mu).iter().enumerate() {
                w[(i, j)] = block[(r, c)];
            }
        }
    }
    w
}

/// Express `x = D·y` (both sorted descending) with `D` a mixture of slot
/// permutations, by successive T-transforms. `None` when `y` does not
/// majorize `x`.
fn permutation_mixture(x: &[f64], y: &[f64]) -> Option<Vec<SlotTerm>> {
    let m = x.len();
    let mut cur = y.to_vec();
    let mut terms: Vec<(Vec<usize>, f64)> = vec![((0..m).collect(), 1.0)];
    // last slot with surplus gives to the first deficient slot after it
    for _ in 0..2 * m {
        let Some(j) = (0..m).rev().find(|&i| cur[i] - x[i] > tol::MAJORIZATION) else {
            break;
        };
        let k = (j + 1..m).find(|&i| x[i] - cur[i] > tol::MAJORIZATION)?;
        let delta = (cur[j] - x[j]).min(x[k] - cur[k]);
        let t = delta / (cur[j] - cur[k]);
        cur[j] -= delta;
        cur[k] += delta;
        let mut next = Vec::with_capacity(2 * terms.len());
        for (map, w) in terms {
            let mut swapped = map.clone();
            swapped.swap(j, k);
            next.push((map, (1.0 - t) * w));
            next.push((swapped, t * w));
        }
        terms = merge_terms(next);
    }
    let residual = (0..m).fold(0.0f64, |r, nu| {
        let mixed: f64 = terms.iter().map(|(map, w)| w * y[map[nu]]).sum();
        r.max((mixed - x[nu]).abs())
    });
    (residual <= 1e-10).then(|| {
        terms
            .into_iter()
            .filter(|(_, w)| *w > 0.0)
            .map(|(slot_map, weight)| SlotTerm { slot_map, weight })
            .collect()
    })
}

fn merge_terms(terms: Vec<(Vec<usize>, f64)>) -> Vec<(Vec<usize>, f64)> {
    let mut out: Vec<(Vec<usize>, f64)> = Vec::new();
    for (map, w) in terms {
        if w <= 0.0 {
            continue;
        }
        match out.iter_mut().find(|(m, _)| *m == map) {
            Some(entry) => entry.1 += w,
            None => out.push((map, w)),
        }
    }
    out
}

/// Whether the circulant system alone admits a nonnegative solution for the
/// sorted, deflated probability vectors.
pub fn circulant_feasible(x: &ProbabilityVector, y: &ProbabilityVector) -> bool {
    let (xs, ys) = (x.sorted(), y.sorted());
    let active = (0..xs.len().max(ys.len()))
        .filter(|&j| {
            xs.get(j).copied().unwrap_or(0.0) > tol::ZERO_WEIGHT
                || ys.get(j).copied().unwrap_or(0.0) > tol::ZERO_WEIGHT
        })
        .count();
    if (0..active).any(|j| xs[j] <= tol::ZERO_WEIGHT) {
        return false;
    }
    solve_circulant(&xs[..active], &ys[..active]).is_ok()
}

/// Build the block-incoherent channel taking `src` to `dst`.
pub fn build_conversion_channel(src: &PureBlockState, dst: &PureBlockState) -> Result<ConversionPlan> {
    let s = src.structure();
    if s != dst.structure() {
        return Err(Error::DimensionMismatch {
            expected: s.num_blocks(),
            found: dst.structure().num_blocks(),
        });
    }
    let m = s.num_blocks();
    let (px, py) = (src.probabilities(), dst.probabilities());
    let (source_order, target_order) = (descending_order(&px), descending_order(&py));
    let x: Vec<f64> = source_order.iter().map(|&b| px[b]).collect();
    let y: Vec<f64> = target_order.iter().map(|&b| py[b]).collect();

    let active = (0..m)
        .filter(|&j| x[j] > tol::ZERO_WEIGHT || y[j] > tol::ZERO_WEIGHT)
        .count();
    if let Some(j) = (0..active).find(|&j| x[j] <= tol::ZERO_WEIGHT) {
        return Err(Error::ZeroWeightPolicy { slot: j, target: y[j] });
    }
    let (xa, ya) = (&x[..active], &y[..active]);

    let (route, gammas, terms) = match solve_circulant(xa, ya) {
        Ok(g) => {
            let terms = g
                .iter()
                .enumerate()
                .filter(|(_, &w)| w > 0.0)
                .map(|(shift, &weight)| SlotTerm {
                    slot_map: (0..active).map(|nu| (nu + active - shift) % active).collect(),
                    weight,
                })
                .collect();
            (Route::Circulant, Some(g), terms)
        }
        Err(_) => match permutation_mixture(xa, ya) {
            Some(terms) => (Route::PermutationMixture, None, terms),
            None => {
                let v = prefix_violation(&sorted_desc(&py), &sorted_desc(&px), tol::MAJORIZATION);
                let reason = match v {
                    Some(v) => format!(
                        "target does not majorize source: prefix {} has target sum {} < source sum {}",
                        v.k, v.p_sum, v.q_sum
                    ),
                    None => String::from("no nonnegative mixing weights found"),
                };
                return Err(Error::Infeasible { reason });
            }
        },
    };

    let w_src = canonicalizer(src);
    let w_dst_adj = canonicalizer(dst).adjoint();
    let same_order = source_order[..active] == target_order[..active];
    let dims: Vec<usize> = source_order[..active].iter().map(|&b| s.block_dim(b)).collect();
    let d_slash: usize = dims.iter().product();
    let phi: Vec<CVector> = (0..m).map(|b| s.uniform_component(b)).collect();
    let amp = |p: f64| libm::sqrt(p);

    let mut kraus = Vec::new();
    let mut roles = Vec::new();
    let mut expected = Vec::new();
    for (t, term) in terms.iter().enumerate() {
        let gamma = libm::sqrt(term.weight);
        let is_identity = term.slot_map.iter().enumerate().all(|(i, &j)| i == j);
        if is_identity && same_order {
            let mut a = CMatrix::zeros(s.dim(), s.dim());
            for nu in 0..active {
                let c = gamma * amp(ya[nu]) / amp(xa[nu]);
                for &i in s.group(source_order[nu]) {
                    a[(i, i)] = c64(c, 0.0);
                }
            }
            kraus.push(&w_dst_adj * a * &w_src);
            roles.push(KrausRole::Diagonal);
            expected.push(gamma);
            continue;
        }
        let prefactor = gamma / libm::sqrt(d_slash as f64);
        // columns: one scaled rank-one map per input slot, indexed by i_ν
        let columns: Vec<Vec<CMatrix>> = (0..active)
            .map(|nu| {
                let out = target_order[term.slot_map[nu]];
                let c = prefactor * amp(ya[term.slot_map[nu]]) / amp(xa[nu])
                    * libm::sqrt(dims[nu] as f64);
                s.group(source_order[nu])
                    .iter()
                    .map(|&col| {
                        let mut e = CMatrix::zeros(s.dim(), s.dim());
                        for r in 0..s.dim() {
                            e[(r, col)] = phi[out][r] * c;
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        let mut index = vec![0usize; active];
        for _ in 0..d_slash {
            let mut a = CMatrix::zeros(s.dim(), s.dim());
            for nu in 0..active {
                a += &columns[nu][index[nu]];
            }
            kraus.push(&w_dst_adj * a * &w_src);
            roles.push(KrausRole::Family { term: t });
            expected.push(prefactor);
            for nu in 0..active {
                index[nu] += 1;
                if index[nu] < dims[nu] {
                    break;
                }
                index[nu] = 0;
            }
        }
    }
    if active < m {
        let mut p = CMatrix::zeros(s.dim(), s.dim());
        for &b in &source_order[active..] {
            p += s.projector(b);
        }
        kraus.push(p);
        roles.push(KrausRole::Deflated);
        expected.push(0.0);
    }

    Ok(ConversionPlan {
        source_order,
        target_order,
        x,
        y,
        active,
        route,
        gammas,
        terms,
        channel: KrausChannel::on(kraus, s)?,
        roles,
        expected,
    })
}

/// Outcome of the four checks of [`verify_conversion`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConversionReport {
    /// `max_a ‖K_a|Φx⟩ − c_a|Φy⟩‖`.
    pub proportionality_residual: f64,
    pub cptp_residual: f64,
    pub block_incoherent: bool,
    pub fidelity: f64,
}

/// Per-Kraus proportionality, completeness, incoherence and output fidelity.
pub fn verify_conversion(
    plan: &ConversionPlan,
    src: &PureBlockState,
    dst: &PureBlockState,
) -> Result<ConversionReport> {
    let (phi_x, phi_y) = (src.amplitudes(), dst.amplitudes());
    plan.channel.input().check_dim(phi_x.len())?;
    plan.channel.output().check_dim(phi_y.len())?;
    let proportionality_residual = plan
        .channel
        .kraus()
        .iter()
        .zip(&plan.expected)
        .map(|(k, &c)| (k * phi_x - phi_y * c64(c, 0.0)).norm())
        .fold(0.0, f64::max);
    let cptp = plan.channel.validate_cptp();
    let block_incoherent = plan.channel.classify_block_incoherent().is_block_incoherent;
    let out = plan.channel.apply_pure(phi_x);
    let fidelity = phi_y.dotc(&(out * phi_y)).re;
    let report = ConversionReport {
        proportionality_residual,
        cptp_residual: cptp.residual,
        block_incoherent,
        fidelity,
    };
    let fail = |clause: String| Err(Error::VerificationFailed { clause });
    if proportionality_residual > tol::VALIDITY {
        return fail(format!(
            "Kraus image not proportional to the target (residual {proportionality_residual:e})"
        ));
    }
    if !cptp.is_cptp {
        return fail(format!("completeness residual {:e}", cptp.residual));
    }
    if !block_incoherent {
        return fail(String::from("channel is not block incoherent"));
    }
    if fidelity < 1.0 - tol::VALIDITY {
        return fail(format!("output fidelity {fidelity}"));
    }
    Ok(report)
}

/// Overlaps `α_a = ⟨Φy|K_a|Φx⟩` and the doubly stochastic matrix built from
/// them, witnessing `x ≺ B·y ≺ y`.
#[derive(Debug, Clone, PartialEq)]
pub struct NecessityCertificate {
    pub alphas: Vec<C64>,
    /// `b[ν][μ] = Σ |α_a|²` over Kraus operators whose block permutation sends
    /// source block `ν` to target block `μ`.
    pub b: Vec<Vec<f64>>,
    /// `B·y²`, indexed by source block.
    pub mixed: Vec<f64>,
    pub alpha_norm_sq: f64,
    /// Largest deviation of a row or column sum of `B` from one.
    pub stochastic_residual: f64,
    /// `x ≺ B·y`
    pub lower: bool,
    /// `B·y ≺ y`
    pub upper: bool,
}

/// Complete the partial block map of one Kraus operator to a permutation.
/// Source blocks are visited by decreasing weight; each claims its image
/// unless an earlier block already did, leftovers take the unused targets.
fn block_permutation(map: &[Option<usize>], visit: &[usize], m: usize) -> Vec<usize> {
    let mut perm = vec![usize::MAX; m];
    let mut used = vec![false; m];
    for &nu in visit {
        if let Some(mu) = map[nu] {
            if !used[mu] {
                perm[nu] = mu;
                used[mu] = true;
            }
        }
    }
    let mut free = (0..m).filter(|&mu| !used[mu]);
    for &nu in visit {
        if perm[nu] == usize::MAX {
            perm[nu] = free.next().expect("as many targets as sources");
        }
    }
    perm
}

pub fn necessity_certificate(
    ch: &KrausChannel,
    src: &PureBlockState,
    dst: &PureBlockState,
) -> Result<NecessityCertificate> {
    let s = src.structure();
    ch.input().check_dim(s.dim())?;
    ch.output().check_dim(dst.structure().dim())?;
    let ch = ch.with_structures(s.clone(), dst.structure().clone())?;
    let m = s.num_blocks();
    if dst.structure().num_blocks() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: dst.structure().num_blocks(),
        });
    }
    let verdict = ch.classify_block_incoherent();
    if !verdict.is_block_incoherent {
        return Err(Error::NotIncoherent);
    }
    let alphas: Vec<C64> = ch
        .kraus()
        .iter()
        .map(|k| dst.amplitudes().dotc(&(k * src.amplitudes())))
        .collect();
    let alpha_norm_sq: f64 = alphas.iter().map(|a| a.norm_sqr()).sum();
    if alpha_norm_sq < 1.0 - tol::CERTIFICATE {
        return Err(Error::NotAConversion {
            fidelity: alpha_norm_sq,
        });
    }

    let (px, py) = (src.probabilities(), dst.probabilities());
    let visit = descending_order(&px);
    let mut b = vec![vec![0.0; m]; m];
    for (map, alpha) in verdict.per_kraus.iter().zip(&alphas) {
        let KrausBlockMap::Incoherent(map) = map else {
            unreachable!("verdict is incoherent")
        };
        let perm = block_permutation(map, &visit, m);
        for nu in 0..m {
            b[nu][perm[nu]] += alpha.norm_sqr();
        }
    }
    let stochastic_residual = (0..m).fold(0.0f64, |r, i| {
        let row: f64 = b[i].iter().sum();
        let col: f64 = (0..m).map(|j| b[j][i]).sum();
        r.max((row - 1.0).abs()).max((col - 1.0).abs())
    });
    let mixed: Vec<f64> = (0..m)
        .map(|nu| (0..m).map(|mu| b[nu][mu] * py[mu]).sum())
        .collect();
    let lower = prefix_violation(&sorted_desc(&mixed), &sorted_desc(&px), tol::CERTIFICATE).is_none();
    let upper = prefix_violation(&sorted_desc(&py), &sorted_desc(&mixed), tol::CERTIFICATE).is_none();

    let violation = |reason: String| Err(Error::CertificateViolation { reason });
    if (alpha_norm_sq - 1.0).abs() > tol::CERTIFICATE {
        return violation(format!("sum of |alpha|^2 is {alpha_norm_sq}"));
    }
    if stochastic_residual > tol::CERTIFICATE {
        return violation(format!("B is not doubly stochastic (residual {stochastic_residual:e})"));
    }
    if !lower {
        return violation(String::from("source is not majorized by B·y"));
    }
    if !upper {
        return violation(String::from("B·y is not majorized by the target"));
    }
    Ok(NecessityCertificate {
        alphas,
        b,
        mixed,
        alpha_norm_sq,
        stochastic_residual,
        lower,
        upper,
    })
}

/// Block structure and probabilities of a state, as used by the planner.
pub fn block_probabilities(state: &PureBlockState) -> Result<ProbabilityVector> {
    ProbabilityVector::new(state.probabilities())
}

