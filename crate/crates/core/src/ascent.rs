//! Multi-start ascent for `sup ‖Ax‖_Y / ‖x‖_X` between mixed-norm spaces.
//!
//! Both norms are of the form `(Σᵢ wᵢ |Yᵢ|ᵖ)^{1/p}` where `Yᵢ` is a block of
//! `group` consecutive coordinates measured in `ℓ²`. Each step is the
//! generalised power method: take the dual vector of `Ax`, pull it back
//! with `A*` and move to the unit vector of `X` on which it is maximal. The
//! objective never decreases along a run, so every returned value is a
//! certified lower bound of the operator norm.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::par;

/// Linear map with an adjoint for the pairing `⟨a, b⟩ = Σ conj(aᵢ) bᵢ`.
pub trait LinearOp: Sync {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn apply(&self, x: &[Complex64]) -> Vec<Complex64>;
    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64>;
    /// Whether the map sends real vectors to real vectors.
    fn is_real(&self) -> bool {
        false
    }
}

impl LinearOp for DMatrix<Complex64> {
    fn rows(&self) -> usize {
        self.nrows()
    }

    fn cols(&self) -> usize {
        self.ncols()
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.nrows())
            .map(|i| (0..self.ncols()).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        (0..self.ncols())
            .map(|j| (0..self.nrows()).map(|i| self[(i, j)].conj() * y[i]).sum())
            .collect()
    }

    fn is_real(&self) -> bool {
        self.iter().all(|z| z.im == 0.0)
    }
}

/// `L^p(w; ℓ²_group)` norm on vectors of length `weights.len() · group`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedNorm {
    pub p: f64,
    pub weights: Vec<f64>,
    pub group: usize,
}

impl GroupedNorm {
    pub fn new(p: f64, weights: Vec<f64>, group: usize) -> Self {
        Self { p, weights, group }
    }

    /// Plain weighted `ℓᵖ`.
    pub fn lp(p: f64, weights: Vec<f64>) -> Self {
        Self { p, weights, group: 1 }
    }

    pub fn unit(p: f64, n: usize) -> Self {
        Self::lp(p, vec![1.0; n])
    }

    pub fn len(&self) -> usize {
        self.weights.len() * self.group
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    fn block_moduli(&self, x: &[Complex64]) -> Vec<f64> {
        x.chunks(self.group)
            .map(|b| b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .collect()
    }

    pub fn norm(&self, x: &[Complex64]) -> f64 {
        let m = self.block_moduli(x);
        let max = m.iter().fold(0.0_f64, |a, &b| a.max(b));
        if max == 0.0 {
            return 0.0;
        }
        let s: f64 = m.iter().zip(&self.weights).map(|(a, w)| w * (a / max).powf(self.p)).sum();
        max * s.powf(1.0 / self.p)
    }

    /// Norming functional of `y` (`⟨z, y⟩ = ‖y‖`, dual norm 1).
    fn dual_vector(&self, y: &[Complex64]) -> Vec<Complex64> {
        let m = self.block_moduli(y);
        let max = m.iter().fold(0.0_f64, |a, &b| a.max(b));
        let mut z = vec![Complex64::new(0.0, 0.0); y.len()];
        if max == 0.0 {
            return z;
        }
        let norm = self.norm(y) / max;
        for (i, (block, out)) in y.chunks(self.group).zip(z.chunks_mut(self.group)).enumerate() {
            if m[i] == 0.0 {
                continue;
            }
            let r = m[i] / max;
            // wᵢ |Yᵢ|^{p−1} / ‖y‖^{p−1} along the direction of the block.
            let c = self.weights[i] * (r / norm).powf(self.p - 1.0) / m[i];
            for (o, v) in out.iter_mut().zip(block) {
                *o = v * c;
            }
        }
        z
    }

    /// Unit vector `x` maximising `Re⟨s, x⟩`.
    fn best_response(&self, s: &[Complex64]) -> Vec<Complex64> {
        let m = self.block_moduli(s);
        let mut x = vec![Complex64::new(0.0, 0.0); s.len()];
        let g = self.group;
        if self.p == 1.0 {
            let (mut best, mut arg) = (f64::NEG_INFINITY, 0);
            for (i, (&mi, &w)) in m.iter().zip(&self.weights).enumerate() {
                if mi / w > best {
                    best = mi / w;
                    arg = i;
                }
            }
            if m[arg] == 0.0 {
                return x;
            }
            for k in 0..g {
                x[arg * g + k] = s[arg * g + k] / (m[arg] * self.weights[arg]);
            }
            return x;
        }
        let q = self.p / (self.p - 1.0);
        let max = m.iter().zip(&self.weights).fold(0.0_f64, |a, (mi, w)| a.max(mi / w));
        if max == 0.0 {
            return x;
        }
        for i in 0..m.len() {
            if m[i] == 0.0 {
                continue;
            }
            let w = self.weights[i];
            // |Xᵢ| ∝ Sᵢ^{q−1} wᵢ^{−(q−1)}, rescaled by the largest ratio.
            let mag = (m[i] / w / max).powf(q - 1.0);
            for k in 0..g {
                x[i * g + k] = s[i * g + k] * (mag / m[i]);
            }
        }
        let n = self.norm(&x);
        x.iter_mut().for_each(|v| *v /= n);
        x
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentConfig {
    pub seed: u64,
    pub starts: usize,
    pub max_iter: usize,
    /// Relative improvement below which a run stops.
    pub tol: f64,
    /// Restrict to real vectors (requires a real operator).
    pub real: bool,
}

impl Default for AscentConfig {
    fn default() -> Self {
        Self { seed: 0, starts: 32, max_iter: 2000, tol: 1e-14, real: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AscentResult {
    pub value: f64,
    pub witness: Vec<Complex64>,
    pub iterations: usize,
}

/// Runs ascent from `cfg.starts` seeded random vectors plus `extra` and
/// returns the best run (first on ties).
pub fn ascent_norm<A: LinearOp + ?Sized>(
    op: &A,
    domain: &GroupedNorm,
    codomain: &GroupedNorm,
    cfg: &AscentConfig,
    extra: &[Vec<Complex64>],
) -> AscentResult {
    let n = op.cols();
    debug_assert_eq!(domain.len(), n);
    debug_assert_eq!(codomain.len(), op.rows());
    let mut starts: Vec<Vec<Complex64>> = extra.to_vec();
    starts.extend((0..cfg.starts).map(|k| {
        let mut rng = ChaCha8Rng::seed_from_u64(par::derive_seed(cfg.seed, k as u64));
        (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = if cfg.real { 0.0 } else { StandardNormal.sample(&mut rng) };
                Complex64::new(re, im)
            })
            .collect()
    }));
    let runs = par::map_slice(&starts, |s| run(op, domain, codomain, s, cfg));
    let mut best = runs[0].clone();
    for r in runs.into_iter().skip(1) {
        if r.value > best.value {
            best = r;
        }
    }
    best
}

/// A single monotone ascent run.
pub fn run<A: LinearOp + ?Sized>(
    op: &A,
    domain: &GroupedNorm,
    codomain: &GroupedNorm,
    start: &[Complex64],
    cfg: &AscentConfig,
) -> AscentResult {
    let mut x = start.to_vec();
    if cfg.real {
        x.iter_mut().for_each(|z| z.im = 0.0);
    }
    let n0 = domain.norm(&x);
    if n0 == 0.0 {
        return AscentResult { value: 0.0, witness: x, iterations: 0 };
    }
    x.iter_mut().for_each(|z| *z /= n0);
    let mut value = codomain.norm(&op.apply(&x));
    let mut iterations = 0;
    for k in 1..=cfg.max_iter {
        iterations = k;
        let y = op.apply(&x);
        let z = codomain.dual_vector(&y);
        let mut s = op.apply_adjoint(&z);
        if cfg.real {
            s.iter_mut().for_each(|v| v.im = 0.0);
        }
        let next = domain.best_response(&s);
        let next_value = codomain.norm(&op.apply(&next));
        if !(next_value > value) {
            break;
        }
        let gain = next_value - value;
        x = next;
        value = next_value;
        if gain <= cfg.tol * value {
            break;
        }
    }
    AscentResult { value, witness: x, iterations }
}

/// Real-valued convenience wrapper for a plain weighted `ℓᵖ → ℓᵖ` norm.
pub fn lp_norm_lower(m: &DMatrix<Complex64>, p: f64, weights: &[f64], cfg: &AscentConfig) -> AscentResult {
    let norm = GroupedNorm::lp(p, weights.to_vec());
    ascent_norm(m, &norm, &norm, cfg, &[])
}
