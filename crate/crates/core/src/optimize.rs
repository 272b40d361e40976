//! Multi-start maximization over products of complex unit spheres.
//!
//! Each restart runs projected ascent along a finite-difference gradient
//! (perturb, renormalize, evaluate), doubling the step after a success and
//! halving it after a failure. The best restart is then polished by a
//! shrinking pattern search, which also copes with objectives that have kinks
//! at the optimum (norms passing through zero).

use alloc::vec::Vec;

use rand::Rng;

use crate::linalg::{c64, CVector};
use crate::random;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Ascent stops once one accepted step improves by less than this.
    pub tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            seed: 0,
            max_iter: 500,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub restarts: usize,
    pub best_restart: usize,
    pub best: f64,
    /// Best value among the other restarts (before polishing).
    pub second_best: f64,
    pub gap: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub point: Vec<CVector>,
    pub value: f64,
    pub diagnostics: Diagnostics,
}

const FD_STEP: f64 = 1e-6;

fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed ^ (restart as u64).wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

fn normalize(point: &mut [CVector]) {
    for v in point.iter_mut() {
        let n = v.norm();
        *v *= c64(1.0 / n, 0.0);
    }
}

/// Real coordinate `c` of the point: sphere, entry, real or imaginary part.
fn coordinates(dims: &[usize]) -> Vec<(usize, usize, bool)> {
    let mut out = Vec::new();
    for (s, &d) in dims.iter().enumerate() {
        for i in 0..d {
            out.push((s, i, false));
            out.push((s, i, true));
        }
    }
    out
}

fn displaced(point: &[CVector], dir: &[f64], coords: &[(usize, usize, bool)], t: f64) -> Vec<CVector> {
    let mut p = point.to_vec();
    for (&(s, i, imag), &g) in coords.iter().zip(dir) {
        if imag {
            p[s][i].im += t * g;
        } else {
            p[s][i].re += t * g;
        }
    }
    normalize(&mut p);
    p
}

struct Counter<F> {
    f: F,
    calls: usize,
}

impl<F: FnMut(&[CVector]) -> f64> Counter<F> {
    fn eval(&mut self, p: &[CVector]) -> f64 {
        self.calls += 1;
        let v = (self.f)(p);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    }
}

fn ascend<F: FnMut(&[CVector]) -> f64>(
    f: &mut Counter<F>,
    start: Vec<CVector>,
    coords: &[(usize, usize, bool)],
    opts: &SearchOptions,
) -> (Vec<CVector>, f64) {
    let mut x = start;
    let mut fx = f.eval(&x);
    let mut step = 0.1;
    let mut unit = alloc::vec![0.0; coords.len()];
    for _ in 0..opts.max_iter {
        let mut grad = alloc::vec![0.0; coords.len()];
        for c in 0..coords.len() {
            unit.iter_mut().for_each(|u| *u = 0.0);
            unit[c] = 1.0;
            let plus = f.eval(&displaced(&x, &unit, coords, FD_STEP));
            let minus = f.eval(&displaced(&x, &unit, coords, -FD_STEP));
            grad[c] = (plus - minus) / (2.0 * FD_STEP);
        }
        let norm = libm::sqrt(grad.iter().map(|g| g * g).sum::<f64>());
        if !norm.is_finite() || norm == 0.0 {
            break;
        }
        grad.iter_mut().for_each(|g| *g /= norm);
        let mut accepted = None;
        while step > 1e-12 {
            let cand = displaced(&x, &grad, coords, step);
            let fc = f.eval(&cand);
            if fc > fx {
                accepted = Some((cand, fc));
                step = (2.0 * step).min(1.0);
                break;
            }
            step *= 0.5;
        }
        let Some((cand, fc)) = accepted else { break };
        let gain = fc - fx;
        x = cand;
        fx = fc;
        if gain < opts.tol {
            break;
        }
    }
    (x, fx)
}

fn polish<F: FnMut(&[CVector]) -> f64, R: Rng>(
    f: &mut Counter<F>,
    start: Vec<CVector>,
    value: f64,
    coords: &[(usize, usize, bool)],
    rng: &mut R,
) -> (Vec<CVector>, f64) {
    let (mut x, mut fx) = (start, value);
    let n = coords.len();
    let mut h = 1e-2;
    while h > 1e-10 {
        let mut improved = false;
        let mut dirs: Vec<Vec<f64>> = (0..n)
            .map(|c| {
                let mut d = alloc::vec![0.0; n];
                d[c] = 1.0;
                d
            })
            .collect();
        for _ in 0..n {
            let d: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            dirs.push(d);
        }
        for d in &dirs {
            for sign in [1.0, -1.0] {
                let cand = displaced(&x, d, coords, sign * h);
                let fc = f.eval(&cand);
                if fc > fx {
                    x = cand;
                    fx = fc;
                    improved = true;
                }
            }
        }
        if !improved {
            h *= 0.25;
        }
    }
    (x, fx)
}

/// Maximize `f` over `S(C^{d_1}) × … × S(C^{d_k})`.
///
/// Deterministic for fixed options; ties between restarts go to the lower
/// restart index.
pub fn maximize_on_spheres<F: FnMut(&[CVector]) -> f64>(
    dims: &[usize],
    opts: &SearchOptions,
    f: F,
) -> Optimum {
    let coords = coordinates(dims);
    let mut f = Counter { f, calls: 0 };
    let restarts = opts.restarts.max(1);
    let mut results: Vec<(Vec<CVector>, f64)> = Vec::with_capacity(restarts);
    for r in 0..restarts {
        let mut rng = random::rng(restart_seed(opts.seed, r));
        let start: Vec<CVector> = dims.iter().map(|&d| random::unit_vector(&mut rng, d)).collect();
        results.push(ascend(&mut f, start, &coords, opts));
    }
    let mut best_restart = 0;
    for (r, (_, v)) in results.iter().enumerate() {
        if *v > results[best_restart].1 {
            best_restart = r;
        }
    }
    let second_best = results
        .iter()
        .enumerate()
        .filter(|(r, _)| *r != best_restart)
        .map(|(_, (_, v))| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    let (point, value) = results.swap_remove(best_restart);
    let mut rng = random::rng(restart_seed(opts.seed, usize::MAX));
    let (point, value) = polish(&mut f, point, value, &coords, &mut rng);
    Optimum {
        point,
        value,
        diagnostics: Diagnostics {
            restarts,
            best_restart,
            best: value,
            second_best,
            gap: if second_best.is_finite() {
                value - second_best
            } else {
                0.0
            },
            evaluations: f.calls,
        },
    }
}
