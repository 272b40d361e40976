//! Seeded generators for random states, unitaries and channels.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::linalg::{self, c64, CMatrix, CVector, C64};
use crate::structure::{BlockStructure, DensityMatrix};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex normal: `E|z|² = 1`.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c64(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Uniformly distributed unit vector in `C^d`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CVector {
    let v = CVector::from_fn(d, |_, _| gaussian(rng));
    let n = v.norm();
    v * c64(1.0 / n, 0.0)
}

/// Haar unitary: QR of a complex Ginibre matrix with the phases of the
/// diagonal of `R` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let z = gaussian_matrix(rng, n, n);
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c64(1.0, 0.0) };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Flat-Dirichlet probability vector.
pub fn probability_vector<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..m).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|x| x / total).collect()
}

/// Random density matrix of the given rank (induced measure).
pub fn density_of_rank<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> DensityMatrix {
    let g = gaussian_matrix(rng, d, rank.max(1));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::from_matrix_unchecked(linalg::hermitian_part(&(m * c64(1.0 / tr, 0.0))))
}

pub fn density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    density_of_rank(rng, d, d)
}

pub fn pure_density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    DensityMatrix::pure(&unit_vector(rng, d))
}

/// `Σ_μ p_μ |μ⟩⟨μ| ⊗ ρ_μ` with random weights and random block states.
pub fn block_incoherent_density<R: Rng + ?Sized>(rng: &mut R, s: &BlockStructure) -> DensityMatrix {
    let p = probability_vector(rng, s.num_blocks());
    let mut m = CMatrix::zeros(s.dim(), s.dim());
    for (mu, &w) in p.iter().enumerate() {
        let d = s.block_dim(mu);
        let rank = rng.random_range(1..=d);
        let block = density_of_rank(rng, d, rank);
        for (r, &i) in s.group(mu).iter().enumerate() {
            for (c, &j) in s.group(mu).iter().enumerate() {
                m[(i, j)] = block.matrix()[(r, c)] * w;
            }
        }
    }
    DensityMatrix::from_matrix_unchecked(m)
}

/// `⊕_μ u_μ` with Haar-random blocks.
pub fn block_diagonal_unitary<R: Rng + ?Sized>(rng: &mut R, s: &BlockStructure) -> CMatrix {
    let mut m = CMatrix::zeros(s.dim(), s.dim());
    for mu in 0..s.num_blocks() {
        let u = haar_unitary(rng, s.block_dim(mu));
        for (r, &i) in s.group(mu).iter().enumerate() {
            for (c, &j) in s.group(mu).iter().enumerate() {
                m[(i, j)] = u[(r, c)];
            }
        }
    }
    m
}

/// Random trace-preserving block-incoherent Kraus set.
///
/// For each of `groups` random block maps `f` and random operators
/// `B_ν : H_ν → H_f(ν)` it emits the `M` operators
/// `K_k = M^{-1/2} Σ_ν ω^{kν} |f(ν)⟩⟨ν| ⊗ B_ν`; the phases cancel the cross
/// terms of `Σ K†K`, which is then block diagonal and normalized per block.
/// The first map is the identity so every per-block Gram matrix is invertible.
pub fn block_incoherent_kraus<R: Rng + ?Sized>(
    rng: &mut R,
    s: &BlockStructure,
    groups: usize,
) -> Vec<CMatrix> {
    let m = s.num_blocks();
    let maps: Vec<Vec<usize>> = (0..groups.max(1))
        .map(|g| (0..m).map(|nu| if g == 0 { nu } else { rng.random_range(0..m) }).collect())
        .collect();
    let mut ops: Vec<Vec<CMatrix>> = maps
        .iter()
        .map(|f| {
            (0..m)
                .map(|nu| gaussian_matrix(rng, s.block_dim(f[nu]), s.block_dim(nu)))
                .collect()
        })
        .collect();
    for nu in 0..m {
        let dn = s.block_dim(nu);
        let gram = ops
            .iter()
            .fold(CMatrix::zeros(dn, dn), |acc, b| acc + b[nu].adjoint() * &b[nu]);
        let norm = linalg::inverse_sqrt(&gram);
        for b in ops.iter_mut() {
            b[nu] = &b[nu] * &norm;
        }
    }
    let scale = 1.0 / libm::sqrt(m as f64);
    let mut kraus = Vec::with_capacity(groups * m);
    for (f, b) in maps.iter().zip(&ops) {
        for k in 0..m {
            let mut op = CMatrix::zeros(s.dim(), s.dim());
            for nu in 0..m {
                let angle = core::f64::consts::TAU * (k * nu) as f64 / m as f64;
                let w = c64(libm::cos(angle), libm::sin(angle)) * scale;
                for (r, &i) in s.group(f[nu]).iter().enumerate() {
                    for (c, &j) in s.group(nu).iter().enumerate() {
                        op[(i, j)] = b[nu][(r, c)] * w;
                    }
                }
            }
            kraus.push(op);
        }
    }
    kraus
}

/// Diagonal matrix of random phases `e^{iθ_i}`.
pub fn phase_diagonal<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| {
        if i == j {
            let t: f64 = rng.random_range(0.0..core::f64::consts::TAU);
            c64(libm::cos(t), libm::sin(t))
        } else {
            c64(0.0, 0.0)
        }
    })
}
