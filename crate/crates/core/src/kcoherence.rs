//! Block structures with bounded block size and k-coherence.
//!
//! `C_k` is the convex hull of pure states with coherence rank at most `k`.
//! Every state that is block incoherent for some structure whose blocks have
//! dimension `≤ k` lies in `C_k`: diagonalizing each diagonal block yields a
//! decomposition into block-supported pure states. Whether the converse holds
//! is open; [`conjecture_probe`] only collects evidence at small `d`.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index;
use rand::Rng;

use crate::linalg::{self, c64, CMatrix, CVector};
use crate::measures::coherence_rank;
use crate::random;
use crate::structure::{BlockStructure, DensityMatrix};
use crate::{tol, Error, Result};

/// Largest dimension accepted by [`enumerate_structures`].
pub const MAX_ENUMERATION_DIM: usize = 8;
/// Largest dimension accepted by [`conjecture_probe`].
pub const MAX_PROBE_DIM: usize = 4;

/// All partitions of `{0, …, d−1}` into parts of size at most `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankBoundedStructureFamily {
    pub d: usize,
    pub k: usize,
    /// Parts sorted by their minimum element, entries ascending.
    pub structures: Vec<BlockStructure>,
}

impl RankBoundedStructureFamily {
    pub fn contains(&self, s: &BlockStructure) -> bool {
        self.structures.iter().any(|t| t == s)
    }
}

/// Enumerate by restricted growth strings: element `i` joins an existing
/// part or opens the next one, skipping parts that are already full.
pub fn enumerate_structures(d: usize, k: usize) -> Result<RankBoundedStructureFamily> {
    if k == 0 || k > d || d > MAX_ENUMERATION_DIM {
        return Err(Error::TooLarge { d, k });
    }
    let mut structures = Vec::new();
    let mut labels = vec![0usize; d];
    let mut sizes = vec![0usize; d];
    grow(0, 0, &mut labels, &mut sizes, k, &mut structures);
    Ok(RankBoundedStructureFamily { d, k, structures })
}

fn grow(
    i: usize,
    parts: usize,
    labels: &mut [usize],
    sizes: &mut [usize],
    k: usize,
    out: &mut Vec<BlockStructure>,
) {
    let d = labels.len();
    if i == d {
        let mut groups = vec![Vec::new(); parts];
        for (e, &l) in labels.iter().enumerate() {
            groups[l].push(e);
        }
        out.push(BlockStructure::new(groups, d).expect("restricted growth strings are partitions"));
        return;
    }
    for l in 0..=parts {
        if sizes[l] == k {
            continue;
        }
        labels[i] = l;
        sizes[l] += 1;
        grow(i + 1, parts.max(l + 1), labels, sizes, k, out);
        sizes[l] -= 1;
    }
}

/// `ρ = Σ_μ π_μ ρ π_μ` up to 1e−9 in every entry.
pub fn in_block_incoherent_set(rho: &DensityMatrix, s: &BlockStructure) -> Result<bool> {
    s.check_dim(rho.dim())?;
    Ok(s.off_block_max(rho.matrix()) <= tol::VALIDITY)
}

/// Decomposition `ρ = Σ w_i |ψ_i⟩⟨ψ_i|` into states of coherence rank `≤ k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CkCertificate {
    pub terms: Vec<(f64, CVector)>,
    /// Largest entry modulus of `Σ w_i |ψ_i⟩⟨ψ_i| − ρ`.
    pub residual: f64,
    pub max_rank: usize,
}

pub fn ck_certificate(rho: &DensityMatrix, s: &BlockStructure, k: usize) -> Result<CkCertificate> {
    s.check_dim(rho.dim())?;
    let widest = s.dims().into_iter().max().unwrap_or(0);
    if widest > k {
        return Err(Error::RankBoundExceeded { rank: widest, k });
    }
    let off = s.off_block_max(rho.matrix());
    if off > tol::VALIDITY {
        return Err(Error::NotBlockIncoherent { residual: off });
    }
    let mut terms = Vec::new();
    let mut rebuilt = CMatrix::zeros(s.dim(), s.dim());
    for mu in 0..s.num_blocks() {
        let (values, vectors) = linalg::hermitian_eigen(&s.block(rho.matrix(), mu, mu));
        for (j, &w) in values.iter().enumerate() {
            if w <= 0.0 {
                continue;
            }
            let psi = s.embed(mu, &vectors.column(j).into_owned());
            rebuilt += linalg::outer(&psi, &psi) * c64(w, 0.0);
            terms.push((w, psi));
        }
    }
    let max_rank = terms
        .iter()
        .map(|(_, psi)| coherence_rank(psi, tol::RANK))
        .max()
        .unwrap_or(0);
    if max_rank > k {
        return Err(Error::RankBoundExceeded { rank: max_rank, k });
    }
    Ok(CkCertificate {
        residual: linalg::max_abs(&(rebuilt - rho.matrix())),
        terms,
        max_rank,
    })
}

/// Evidence gathered by [`conjecture_probe`]. It is a probe, not a proof.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub d: usize,
    pub k: usize,
    pub trials: usize,
    pub structures: usize,
    /// Random block-incoherent states that received a valid certificate.
    pub certified: usize,
    pub certificate_violations: usize,
    /// Random pure states of rank `≤ k` found incoherent for their support structure.
    pub contained: usize,
    pub containment_violations: usize,
}

impl ProbeReport {
    pub fn violations(&self) -> usize {
        self.certificate_violations + self.containment_violations
    }
}

/// Structure with the given support as one part and singletons elsewhere.
pub fn support_structure(support: &[usize], d: usize) -> Result<BlockStructure> {
    let mut sorted = support.to_vec();
    sorted.sort_unstable();
    let mut groups: Vec<Vec<usize>> = (0..d)
        .filter(|i| !sorted.contains(i))
        .map(|i| vec![i])
        .collect();
    if !sorted.is_empty() {
        groups.push(sorted);
    }
    groups.sort_by_key(|g| g[0]);
    BlockStructure::new(groups, d)
}

/// Sample both directions of `∪_B I_inc(B_k) = C_k` at dimension `d ≤ 4`.
pub fn conjecture_probe(d: usize, k: usize, trials: usize, seed: u64) -> Result<ProbeReport> {
    if d > MAX_PROBE_DIM {
        return Err(Error::TooLarge { d, k });
    }
    let family = enumerate_structures(d, k)?;
    let mut rng = random::rng(seed);
    let mut report = ProbeReport {
        d,
        k,
        trials,
        structures: family.structures.len(),
        certified: 0,
        certificate_violations: 0,
        contained: 0,
        containment_violations: 0,
    };
    for _ in 0..trials {
        let s = &family.structures[rng.random_range(0..family.structures.len())];
        let rho = random::block_incoherent_density(&mut rng, s);
        match ck_certificate(&rho, s, k) {
            Ok(c) if c.residual <= tol::CERTIFICATE && c.max_rank <= k => report.certified += 1,
            _ => report.certificate_violations += 1,
        }

        let r = rng.random_range(1..=k);
        let support = index::sample(&mut rng, d, r).into_vec();
        let mut psi = CVector::zeros(d);
        for &i in &support {
            psi[i] = random::gaussian(&mut rng);
        }
        let psi = &psi * c64(1.0 / psi.norm(), 0.0);
        let ok = support_structure(&support, d).is_ok_and(|t| {
            family.contains(&t)
                && coherence_rank(&psi, tol::RANK) <= k
                && in_block_incoherent_set(&DensityMatrix::pure(&psi), &t).unwrap_or(false)
        });
        if ok {
            report.contained += 1;
        } else {
            report.containment_violations += 1;
        }
    }
    Ok(report)
}
