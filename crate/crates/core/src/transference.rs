//! Time kernels, their grid convolvers, transferred operators
//! `∫ k(t) T_t dt`, Rademacher/Khinchin machinery and the square-function
//! and maximal-function transference checks.
//!
//! The real line is modelled by a uniform grid of step `h`; a kernel acts on
//! grid functions by discrete convolution with `c_j = h·k_j`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::ascent::{self, ascent_norm, AscentConfig, GroupedNorm, LinearOp};
use crate::calculus::SpectralDecomposition;
use crate::special::gamma;
use crate::{par, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Kernel sampled at `t0 + j·h`, `j = 0, 1, …`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeKernel {
    pub h: f64,
    pub t0: f64,
    pub samples: Vec<Complex64>,
}

impl TimeKernel {
    pub fn new(h: f64, t0: f64, samples: Vec<Complex64>) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidParameter(format!("step h = {h} must be positive")));
        }
        if !t0.is_finite() {
            return Err(Error::InvalidParameter(format!("origin t0 = {t0} is not finite")));
        }
        if samples.is_empty() {
            return Err(Error::InvalidParameter("kernel has no samples".into()));
        }
        Ok(Self { h, t0, samples })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(h: f64, t0: f64, len: usize, f: F) -> Result<Self> {
        Self::new(h, t0, (0..len).map(|j| f(t0 + j as f64 * h)).collect())
    }

    /// Grid identity: `h⁻¹` at `t = 0`.
    pub fn delta(h: f64) -> Result<Self> {
        Self::new(h, 0.0, vec![Complex64::new(1.0 / h, 0.0)])
    }

    /// `e^{−t} 1_{t≥0}` on `[0, (len−1)h]`.
    pub fn exponential(h: f64, len: usize) -> Result<Self> {
        Self::from_fn(h, 0.0, len, |t| Complex64::new((-t).exp(), 0.0))
    }

    /// `(1/t) 1_{[0,t]}` sampled at the left end points of `⌈t/h⌉` cells.
    pub fn average(h: f64, t: f64) -> Result<Self> {
        let len = ((t / h).round() as usize).max(1);
        Self::new(h, 0.0, vec![Complex64::new(1.0 / (len as f64 * h), 0.0); len])
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, j: usize) -> f64 {
        self.t0 + j as f64 * self.h
    }

    /// Nothing at negative times.
    pub fn is_causal(&self) -> bool {
        (0..self.len()).all(|j| self.time(j) >= -1e-12 * self.h || self.samples[j] == ZERO)
    }

    /// `‖c‖₁ = h Σ |k_j|`.
    pub fn l1_norm(&self) -> f64 {
        self.h * self.samples.iter().map(|z| z.norm()).sum::<f64>()
    }

    /// Convolution weights `c_j = h·k_j`.
    pub fn coefficients(&self) -> Vec<Complex64> {
        self.samples.iter().map(|z| z * self.h).collect()
    }

    /// `∫ k(t) e^{−tx} dt` by composite Simpson on the samples (trapezoid on
    /// a final odd interval).
    pub fn laplace(&self, x: f64) -> Complex64 {
        let f: Vec<Complex64> = (0..self.len()).map(|j| self.samples[j] * (-self.time(j) * x).exp()).collect();
        simpson(&f, self.h)
    }

    /// `h Σ k_j e^{−t_j x}`, the Laplace transform of the grid model.
    pub fn laplace_riemann(&self, x: f64) -> Complex64 {
        (0..self.len()).map(|j| self.samples[j] * (self.h * (-self.time(j) * x).exp())).sum()
    }

    /// `ĉ(ω) = Σ c_j e^{−ijω}`.
    pub fn symbol(&self, omega: f64) -> Complex64 {
        self.coefficients()
            .iter()
            .enumerate()
            .map(|(j, c)| c * Complex64::from_polar(1.0, -(j as f64) * omega))
            .sum()
    }

    /// Rigorous upper bound of `sup_ω |ĉ(ω)|`: dense grid maximum plus the
    /// Lipschitz constant times half the grid spacing.
    pub fn symbol_sup(&self) -> f64 {
        symbol_sup_of(&[self.coefficients()], false)
    }

    /// `k ⋆ g` on the common grid.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if (self.h - other.h).abs() > 1e-15 * self.h {
            return Err(Error::InvalidParameter("kernels live on different grids".into()));
        }
        let (a, b) = (&self.samples, &other.samples);
        let mut out = vec![ZERO; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y * self.h;
            }
        }
        Self::new(self.h, self.t0 + other.t0, out)
    }
}

fn simpson(f: &[Complex64], h: f64) -> Complex64 {
    let n = f.len();
    if n == 1 {
        return f[0] * h;
    }
    // Simpson needs an even number of intervals.
    let m = if (n - 1).is_multiple_of(2) { n } else { n - 1 };
    let mut s = ZERO;
    if m >= 3 {
        s += f[0] + f[m - 1];
        for (k, v) in f.iter().enumerate().take(m - 1).skip(1) {
            s += v * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s *= h / 3.0;
    }
    if m != n {
        s += (f[n - 2] + f[n - 1]) * (0.5 * h);
    }
    s
}

/// Upper bound for `sup_ω (Σ_i |ĉ_i(ω)|²)^{1/2}` (or `sup_ω |ĉ_0(ω)|` for one
/// kernel) with Lipschitz padding.
fn symbol_sup_of(coeffs: &[Vec<Complex64>], _square: bool) -> f64 {
    let len = coeffs.iter().map(|c| c.len()).max().unwrap_or(1);
    let grid = (16 * len).max(4096);
    let step = TAU / grid as f64;
    let vals = par::map_range(grid, |g| {
        let w = g as f64 * step;
        coeffs
            .iter()
            .map(|c| {
                c.iter()
                    .enumerate()
                    .map(|(j, v)| v * Complex64::from_polar(1.0, -(j as f64) * w))
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    });
    let max = vals.into_iter().fold(0.0, f64::max);
    // |d/dω (Σ|ĉ_i|²)^{1/2}| ≤ (Σ_i (Σ_j j|c_ij|)²)^{1/2}.
    let lip = coeffs
        .iter()
        .map(|c| c.iter().enumerate().map(|(j, v)| j as f64 * v.norm()).sum::<f64>().powi(2))
        .sum::<f64>()
        .sqrt();
    max + lip * step / 2.0
}

/// `N×N` truncation of the convolution by `c` (lower triangular Toeplitz).
#[derive(Debug, Clone, PartialEq)]
pub struct Toeplitz {
    pub coeffs: Vec<Complex64>,
    pub n: usize,
}

impl Toeplitz {
    pub fn new(k: &TimeKernel, n: usize) -> Self {
        Self { coeffs: k.coefficients(), n }
    }
}

impl LinearOp for Toeplitz {
    fn rows(&self) -> usize {
        self.n
    }

    fn cols(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![ZERO; self.n];
        for (j, c) in self.coeffs.iter().enumerate().take(self.n) {
            if *c == ZERO {
                continue;
            }
            for m in j..self.n {
                y[m] += c * x[m - j];
            }
        }
        y
    }

    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let mut x = vec![ZERO; self.n];
        for (j, c) in self.coeffs.iter().enumerate().take(self.n) {
            if *c == ZERO {
                continue;
            }
            let cc = c.conj();
            for m in 0..self.n - j {
                x[m] += cc * y[m + j];
            }
        }
        x
    }

    fn is_real(&self) -> bool {
        self.coeffs.iter().all(|z| z.im == 0.0)
    }
}

fn plateau(n: usize, omega: f64) -> Vec<Complex64> {
    (0..n).map(|m| Complex64::from_polar(1.0, omega * m as f64)).collect()
}

/// Frequency at which `|ĉ|` is largest on a coarse grid.
fn peak_frequency(coeffs: &[Complex64]) -> f64 {
    let grid = 1024;
    (0..grid)
        .map(|g| {
            let w = TAU * g as f64 / grid as f64;
            let v: Complex64 = coeffs.iter().enumerate().map(|(j, c)| c * Complex64::from_polar(1.0, -(j as f64) * w)).sum();
            (w, v.norm())
        })
        .fold((0.0, -1.0), |a, b| if b.1 > a.1 { b } else { a })
        .0
}

/// Lower bound of `‖k‖_{p,p}` from the `N×N` truncation of the convolver.
pub fn convolver_lower(k: &TimeKernel, p: f64, window: usize, seed: u64) -> f64 {
    convolver_lower_sequence(k, p, &[window], seed)[0]
}

/// [`convolver_lower`] for increasing windows; each run is warm-started with
/// the previous witness, so the sequence is nondecreasing.
pub fn convolver_lower_sequence(k: &TimeKernel, p: f64, windows: &[usize], seed: u64) -> Vec<f64> {
    let mut prev: Option<Vec<Complex64>> = None;
    let mut best = 0.0_f64;
    let coeffs = k.coefficients();
    let peak = peak_frequency(&coeffs);
    windows
        .iter()
        .enumerate()
        .map(|(w, &n)| {
            let op = Toeplitz::new(k, n);
            let norm = GroupedNorm::unit(p, n);
            let mut extra = vec![plateau(n, 0.0), plateau(n, peak)];
            if let Some(x) = &prev {
                let mut y = x.clone();
                y.resize(n, ZERO);
                extra.push(y);
            }
            let cfg = AscentConfig {
                seed: par::derive_seed(seed, w as u64),
                starts: 4,
                max_iter: 500,
                tol: 1e-12,
                real: false,
            };
            let r = ascent_norm(&op, &norm, &norm, &cfg, &extra);
            if r.value >= best {
                best = r.value;
                prev = Some(r.witness);
            }
            best
        })
        .collect()
}

/// `θ` and the exponent used for Riesz–Thorin between `1` and `2`.
fn interpolation_theta(p: f64) -> f64 {
    let r = if p > 2.0 { p / (p - 1.0) } else { p };
    2.0 * (1.0 - 1.0 / r)
}

/// Riesz–Thorin upper bound `‖c‖₁^{1−θ} (sup|ĉ|)^θ` (`p > 2` by duality).
pub fn convolver_upper(k: &TimeKernel, p: f64) -> f64 {
    let l1 = k.l1_norm();
    if p == 1.0 {
        return l1;
    }
    let s = k.symbol_sup();
    if p == 2.0 {
        return s;
    }
    let theta = interpolation_theta(p);
    l1.powf(1.0 - theta) * s.powf(theta)
}

/// `∫₀^∞ k(t) T_t dt` on the grid, `Σ_j h k_j T_{t_j}`, evaluated through
/// the spectrum. On the grid `k ↦ transfer(k)` is exactly multiplicative.
pub fn transfer_operator(k: &TimeKernel, dec: &SpectralDecomposition) -> Result<DMatrix<Complex64>> {
    if !k.is_causal() {
        return Err(Error::NonCausalKernel);
    }
    dec.borel_calculus(|x| k.laplace_riemann(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferenceCheck {
    pub transferred_lower: f64,
    pub transferred_upper: f64,
    pub convolver_upper: f64,
    pub ok: bool,
    /// `max_k |Lk(−λ_k)|`.
    pub spectral_max: f64,
    /// Upper bound of `sup_ν |k̂(ν)|`.
    pub symbol_sup: f64,
    pub sharp_ok: bool,
}

/// `‖∫k(t)T_t dt‖_p ≤ ‖k‖_{p,p}` and its sharp `p = 2` form.
pub fn transference_check(k: &TimeKernel, dec: &SpectralDecomposition, p: f64, seed: u64) -> Result<TransferenceCheck> {
    let m = transfer_operator(k, dec)?;
    let b = crate::calculus::pq_norm_estimate(&m, p, &dec.mu, seed);
    let upper = convolver_upper(k, p);
    let spectral_max = dec.spectral_norm(|x| k.laplace_riemann(x))?;
    let symbol_sup = k.symbol_sup();
    Ok(TransferenceCheck {
        transferred_lower: b.lower,
        transferred_upper: b.upper,
        convolver_upper: upper,
        ok: b.lower <= upper + 1e-8,
        spectral_max,
        symbol_sup,
        sharp_ok: spectral_max <= symbol_sup + 1e-9,
    })
}

/// Rademacher functions `r_1, …, r_n` on the `2ⁿ` right-closed dyadic
/// atoms `((a−1)/2ⁿ, a/2ⁿ]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RademacherSystem {
    pub depth: usize,
}

impl RademacherSystem {
    pub fn new(depth: usize) -> Result<Self> {
        if depth == 0 || depth > 24 {
            return Err(Error::InvalidParameter(format!("Rademacher depth {depth} not in 1..=24")));
        }
        Ok(Self { depth })
    }

    pub fn atoms(&self) -> usize {
        1 << self.depth
    }

    /// `r_l` (`l ≥ 1`) on the atom with 0-based index `a`: `+1` exactly
    /// when binary digit `l` of `a` (from the most significant) is 0.
    pub fn on_atom(&self, l: usize, a: usize) -> f64 {
        if (a >> (self.depth - l)) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// `r_l(t)` for `t ∈ [0, 1]`.
    pub fn eval(l: usize, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        // t lies in ((a−1)/2^l, a/2^l]; r_l is +1 when a is odd.
        let a = (t * (1u64 << l) as f64).ceil() as u64;
        if a % 2 == 1 {
            1.0
        } else {
            -1.0
        }
    }

    /// `table[a][l−1] = r_l` on atom `a`.
    pub fn table(&self) -> Vec<Vec<f64>> {
        (0..self.atoms()).map(|a| (1..=self.depth).map(|l| self.on_atom(l, a)).collect()).collect()
    }
}

/// `(E|g|ᵖ)^{1/p}` for a standard real Gaussian `g`: `√2 (Γ((p+1)/2)/√π)^{1/p}`.
pub fn gaussian_moment(p: f64) -> f64 {
    2f64.sqrt() * (gamma((p + 1.0) / 2.0).expect("positive argument") / PI.sqrt()).powf(1.0 / p)
}

/// Best constants `(c_p, C_p)` in
/// `c_p ‖Σ αᵢ rᵢ‖_p ≤ ‖α‖₂ ≤ C_p ‖Σ αᵢ rᵢ‖_p` for real coefficients.
pub fn khinchin_constants(p: f64) -> (f64, f64) {
    if p == 2.0 {
        (1.0, 1.0)
    } else if p > 2.0 {
        (1.0 / gaussian_moment(p), 1.0)
    } else {
        let lower = (2f64.powf(0.5 - 1.0 / p)).min(gaussian_moment(p));
        (1.0, 1.0 / lower)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KhinchinEstimate {
    /// `min ‖α‖₂ / ‖Σ αᵢ rᵢ‖_p` over the trials.
    pub c_est: f64,
    /// `max ‖α‖₂ / ‖Σ αᵢ rᵢ‖_p` over the trials.
    pub big_c_est: f64,
}

/// `‖Σ αᵢ rᵢ‖_p` computed exactly on the `2ⁿ` atoms.
pub fn rademacher_sum_norm(alpha: &[f64], p: f64) -> f64 {
    let n = alpha.len();
    let sys = RademacherSystem { depth: n };
    let atoms = sys.atoms();
    let s: f64 = (0..atoms)
        .map(|a| {
            let v: f64 = (1..=n).map(|l| alpha[l - 1] * sys.on_atom(l, a)).sum();
            v.abs().powf(p)
        })
        .sum();
    (s / atoms as f64).powf(1.0 / p)
}

/// Extremal Khinchin ratios over `e_1`, the constant vector and seeded
/// Gaussian coefficient vectors.
pub fn khinchin_empirical(p: f64, n: usize, seed: u64, trials: usize) -> Result<KhinchinEstimate> {
    if n == 0 || n > 20 {
        return Err(Error::InvalidParameter(format!("Rademacher depth {n} not in 1..=20")));
    }
    let mut vectors = vec![];
    let mut e1 = vec![0.0; n];
    e1[0] = 1.0;
    vectors.push(e1);
    vectors.push(vec![1.0; n]);
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(par::derive_seed(seed, t as u64));
        vectors.push((0..n).map(|_| StandardNormal.sample(&mut rng)).collect());
    }
    let ratios = par::map_slice(&vectors, |a| {
        let l2 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        l2 / rademacher_sum_norm(a, p)
    });
    Ok(KhinchinEstimate {
        c_est: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        big_c_est: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

fn check_family(ops: &[DMatrix<Complex64>], mu: &[f64]) -> Result<usize> {
    let d = mu.len();
    if ops.is_empty() {
        return Err(Error::InvalidParameter("empty operator family".into()));
    }
    for op in ops {
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: op.nrows() });
        }
    }
    Ok(d)
}

/// The row matrix `m_{i1} = 2^{−n/p} Σ_l r_l(i) k_l` as one operator
/// `E → ℓᵖ_{2ⁿ}(E)`.
pub fn row_matrix(ops: &[DMatrix<Complex64>], p: f64) -> DMatrix<Complex64> {
    let n = ops.len();
    let d = ops[0].nrows();
    let sys = RademacherSystem { depth: n };
    let scale = (sys.atoms() as f64).powf(-1.0 / p);
    let mut m = DMatrix::zeros(sys.atoms() * d, d);
    for a in 0..sys.atoms() {
        for (l, k) in ops.iter().enumerate() {
            let r = sys.on_atom(l + 1, a) * scale;
            for x in 0..d {
                for y in 0..d {
                    m[(a * d + x, y)] += k[(x, y)] * r;
                }
            }
        }
    }
    m
}

/// `g ↦ (k_1 g, …, k_n g)` with point-major layout (`row x·n + l`).
pub fn square_stack(ops: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    let n = ops.len();
    let d = ops[0].nrows();
    DMatrix::from_fn(d * n, d, |r, y| ops[r % n][(r / n, y)])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowKhinchinCheck {
    /// Lower bound of `‖m^k‖_{(2ⁿ)}`.
    pub row_norm: f64,
    /// Lower bound of `sup_{‖g‖≤1} ‖(Σ|k_l g|²)^{1/2}‖_p`.
    pub square_norm: f64,
    pub c_p: f64,
    pub big_c_p: f64,
    pub sandwich_ok: bool,
}

/// Both sides of `c_p ‖m^k‖ ≤ sup‖(Σ|k_l g|²)^{1/2}‖ ≤ C_p ‖m^k‖`.
///
/// Both quantities are suprema over the same unit ball of `E`; each is
/// evaluated at both optimisers' witnesses and the larger value is kept, so
/// the pointwise Khinchin inequality makes the comparison rigorous.
pub fn row_khinchin_check(ops: &[DMatrix<Complex64>], p: f64, mu: &[f64], seed: u64) -> Result<RowKhinchinCheck> {
    let d = check_family(ops, mu)?;
    let n = ops.len();
    let row = row_matrix(ops, p);
    let sq = square_stack(ops);
    let dom = GroupedNorm::lp(p, mu.to_vec());
    let row_cod = GroupedNorm::lp(p, mu.iter().copied().cycle().take(d << n).collect());
    let sq_cod = GroupedNorm::new(p, mu.to_vec(), n);
    let cfg = AscentConfig { seed, ..Default::default() };
    let a = ascent_norm(&row, &dom, &row_cod, &cfg, &[]);
    let b = ascent_norm(&sq, &dom, &sq_cod, &AscentConfig { seed: seed ^ 1, ..cfg }, std::slice::from_ref(&a.witness));
    let a2 = ascent_norm(&row, &dom, &row_cod, &AscentConfig { seed: seed ^ 2, ..cfg }, std::slice::from_ref(&b.witness));
    let eval = |m: &DMatrix<Complex64>, cod: &GroupedNorm, x: &[Complex64]| cod.norm(&m.apply(x)) / dom.norm(x);
    let row_norm = a.value.max(a2.value).max(eval(&row, &row_cod, &b.witness));
    let square_norm = b.value.max(eval(&sq, &sq_cod, &a.witness)).max(eval(&sq, &sq_cod, &a2.witness));
    let (c_p, big_c_p) = khinchin_constants(p);
    let tol = 1e-9 * row_norm.max(1.0);
    Ok(RowKhinchinCheck {
        row_norm,
        square_norm,
        c_p,
        big_c_p,
        sandwich_ok: c_p * row_norm <= square_norm + tol && square_norm <= big_c_p * row_norm + tol,
    })
}

/// Lower bound of the row-matrix norm alone.
pub fn row_matrix_norm(ops: &[DMatrix<Complex64>], p: f64, mu: &[f64], seed: u64) -> Result<f64> {
    Ok(row_khinchin_check(ops, p, mu, seed)?.row_norm)
}

/// Lower bound of `sup_{‖g‖≤1} ‖(Σ|k_l g|²)^{1/2}‖_p`.
pub fn square_norm(ops: &[DMatrix<Complex64>], p: f64, mu: &[f64], seed: u64) -> Result<f64> {
    Ok(row_khinchin_check(ops, p, mu, seed)?.square_norm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionCheck {
    pub max_ratio: f64,
    /// `max{c_p⁻¹, c_q⁻¹}`.
    pub bound: f64,
    pub ok: bool,
}

/// `P_n F = Σ_i (∫F r_i) r_i` applied to `F` given by its atom values.
pub fn rademacher_projection(values: &[Vec<f64>], n: usize) -> Vec<Vec<f64>> {
    let sys = RademacherSystem { depth: n };
    let atoms = sys.atoms();
    let dim = values[0].len();
    let coeff: Vec<Vec<f64>> = (1..=n)
        .map(|l| {
            (0..dim)
                .map(|x| (0..atoms).map(|a| sys.on_atom(l, a) * values[a][x]).sum::<f64>() / atoms as f64)
                .collect()
        })
        .collect();
    (0..atoms)
        .map(|a| (0..dim).map(|x| (1..=n).map(|l| sys.on_atom(l, a) * coeff[l - 1][x]).sum()).collect())
        .collect()
}

fn bochner_norm(values: &[Vec<f64>], p: f64) -> f64 {
    let atoms = values.len() as f64;
    (values.iter().flat_map(|v| v.iter()).map(|x| x.abs().powf(p)).sum::<f64>() / atoms).powf(1.0 / p)
}

/// `‖(P_n ⊗ id)F‖ / ‖F‖` over random real `F` with values in `ℓᵖ_dim`.
pub fn rademacher_projection_check(p: f64, n: usize, dim: usize, trials: usize, seed: u64) -> Result<ProjectionCheck> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(p));
    }
    RademacherSystem::new(n)?;
    let atoms = 1usize << n;
    let ratios = par::map_range(trials, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(par::derive_seed(seed, t as u64));
        let f: Vec<Vec<f64>> = (0..atoms).map(|_| (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect()).collect();
        bochner_norm(&rademacher_projection(&f, n), p) / bochner_norm(&f, p)
    });
    let max_ratio = ratios.into_iter().fold(0.0, f64::max);
    let q = p / (p - 1.0);
    let bound = (1.0 / khinchin_constants(p).0).max(1.0 / khinchin_constants(q).0);
    Ok(ProjectionCheck { max_ratio, bound, ok: max_ratio <= bound + 1e-9 })
}

/// `K′_k` on atom values: block `(i, j) = 2^{−n} Σ_l r_l(i) r_l(j) k_l`.
pub fn kprime_matrix(ops: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    let n = ops.len();
    let d = ops[0].nrows();
    let sys = RademacherSystem { depth: n };
    let atoms = sys.atoms();
    let mut m = DMatrix::zeros(atoms * d, atoms * d);
    for i in 0..atoms {
        for j in 0..atoms {
            for (l, k) in ops.iter().enumerate() {
                let r = sys.on_atom(l + 1, i) * sys.on_atom(l + 1, j) / atoms as f64;
                for x in 0..d {
                    for y in 0..d {
                        m[(i * d + x, j * d + y)] += k[(x, y)] * r;
                    }
                }
            }
        }
    }
    m
}

/// `(f_l) ↦ (k_l f_l)` on `E(ℓ²_n)` with point-major layout.
pub fn diagonal_action(ops: &[DMatrix<Complex64>]) -> DMatrix<Complex64> {
    let n = ops.len();
    let d = ops[0].nrows();
    DMatrix::from_fn(d * n, d * n, |r, c| {
        if r % n == c % n {
            ops[r % n][(r / n, c / n)]
        } else {
            ZERO
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricMatrixCheck {
    /// Lower bound of `‖K′_k‖`.
    pub norm_kprime: f64,
    /// Lower bound of `‖k‖_{[2]}`.
    pub norm_diagonal: f64,
    pub d_p: f64,
    pub big_d_p: f64,
    pub sandwich_ok: bool,
}

/// Both sides of `d_p ‖K′_k‖ ≤ ‖k‖_{[2]} ≤ D_p ‖K′_k‖` with
/// `D_p = C_p/c_p` and `d_p = (c_p/C_p) min{c_p, c_q}`.
pub fn symmetric_matrix_norm_check(ops: &[DMatrix<Complex64>], p: f64, mu: &[f64], seed: u64) -> Result<SymmetricMatrixCheck> {
    let d = check_family(ops, mu)?;
    let n = ops.len();
    let atoms = 1usize << n;
    let kp = kprime_matrix(ops);
    let diag = diagonal_action(ops);
    let atom_norm = GroupedNorm::lp(p, mu.iter().map(|m| m / atoms as f64).cycle().take(atoms * d).collect());
    let mixed = GroupedNorm::new(p, mu.to_vec(), n);
    let cfg = AscentConfig { seed, ..Default::default() };
    let b = ascent_norm(&diag, &mixed, &mixed, &cfg, &[]);
    // Seeds for K′: r_l ⊗ (component l of the ℓ²-witness), and r_l ⊗ δ_x.
    let sys = RademacherSystem { depth: n };
    let mut extra = Vec::new();
    for l in 1..=n {
        let comp: Vec<Complex64> = (0..d).map(|x| b.witness[x * n + l - 1]).collect();
        extra.push((0..atoms).flat_map(|a| comp.iter().map(move |z| z * sys.on_atom(l, a))).collect());
        for x in 0..d {
            extra.push(
                (0..atoms)
                    .flat_map(|a| (0..d).map(move |y| if y == x { Complex64::new(sys.on_atom(l, a), 0.0) } else { ZERO }))
                    .collect(),
            );
        }
    }
    let a = ascent_norm(&kp, &atom_norm, &atom_norm, &AscentConfig { seed: seed ^ 1, ..cfg }, &extra);
    let (c_p, big_c_p) = khinchin_constants(p);
    let q = p / (p - 1.0);
    let c_q = khinchin_constants(q).0;
    let big_d_p = big_c_p / c_p;
    let d_p = c_p / big_c_p * c_p.min(c_q);
    let tol = 1e-9 * a.value.max(1.0);
    Ok(SymmetricMatrixCheck {
        norm_kprime: a.value,
        norm_diagonal: b.value,
        d_p,
        big_d_p,
        sandwich_ok: d_p * a.value <= b.value + tol && b.value <= big_d_p * a.value + tol,
    })
}

/// Norm of `B : ℓ²(w_dom) → ℓ²(w_cod)`, the largest singular value of
/// `D_cod^{1/2} B D_dom^{−1/2}`.
pub fn weighted_operator_two_norm(b: &DMatrix<Complex64>, dom: &[f64], cod: &[f64]) -> f64 {
    let s = DMatrix::from_fn(b.nrows(), b.ncols(), |i, j| b[(i, j)] * (cod[i] / dom[j]).sqrt());
    s.svd(false, false).singular_values.iter().fold(0.0, |a, &v| a.max(v))
}

/// Exact `p = 2` values of the row-matrix norm and of the square-function
/// norm, by singular values.
pub fn row_khinchin_exact_p2(ops: &[DMatrix<Complex64>], mu: &[f64]) -> Result<(f64, f64)> {
    let d = check_family(ops, mu)?;
    let n = ops.len();
    let row_w: Vec<f64> = mu.iter().copied().cycle().take(d << n).collect();
    let sq_w: Vec<f64> = mu.iter().flat_map(|&m| std::iter::repeat_n(m, n)).collect();
    Ok((
        weighted_operator_two_norm(&row_matrix(ops, 2.0), mu, &row_w),
        weighted_operator_two_norm(&square_stack(ops), mu, &sq_w),
    ))
}

/// Exact `p = 2` values of `‖K′_k‖` and `‖k‖_{[2]}`.
pub fn symmetric_exact_p2(ops: &[DMatrix<Complex64>], mu: &[f64]) -> Result<(f64, f64)> {
    let d = check_family(ops, mu)?;
    let n = ops.len();
    let atom_w: Vec<f64> = mu.iter().map(|m| m / (1u64 << n) as f64).cycle().take(d << n).collect();
    let mixed_w: Vec<f64> = mu.iter().flat_map(|&m| std::iter::repeat_n(m, n)).collect();
    Ok((
        weighted_operator_two_norm(&kprime_matrix(ops), &atom_w, &atom_w),
        weighted_operator_two_norm(&diagonal_action(ops), &mixed_w, &mixed_w),
    ))
}

/// Discrete Hardy–Littlewood maximal function. One-sided: windows
/// `[x−j, x]`; otherwise centred windows `[x−j, x+j]` clipped to the grid.
pub fn hardy_littlewood_max(f: &[f64], one_sided: bool) -> Vec<f64> {
    let n = f.len();
    let mut prefix = vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + f[i];
    }
    let mean = |a: usize, b: usize| ((prefix[b + 1] - prefix[a]) / (b + 1 - a) as f64).abs();
    par::map_range(n, |x| {
        if one_sided {
            (0..=x).map(|j| mean(x - j, x)).fold(0.0, f64::max)
        } else {
            (0..n).map(|j| mean(x.saturating_sub(j), (x + j).min(n - 1))).fold(0.0, f64::max)
        }
    })
}

/// Ascent for `sup ‖max_i |A_i x|‖ / ‖x‖` over a family sharing domain and
/// codomain. Each step freezes the maximising index per coordinate, which
/// turns the maximal operator into a linear one; the value never decreases.
pub fn max_family_ascent<A: LinearOp>(
    ops: &[A],
    domain: &GroupedNorm,
    codomain: &GroupedNorm,
    cfg: &AscentConfig,
    extra: &[Vec<Complex64>],
) -> ascent::AscentResult {
    let n = ops[0].cols();
    let mut starts: Vec<Vec<Complex64>> = extra.to_vec();
    starts.extend((0..cfg.starts).map(|k| {
        let mut rng = ChaCha8Rng::seed_from_u64(par::derive_seed(cfg.seed, k as u64));
        (0..n)
            .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect()
    }));
    let runs = par::map_slice(&starts, |s| {
        let mut x = s.clone();
        let mut value = max_value(ops, codomain, &x) / domain.norm(&x);
        for _ in 0..cfg.max_iter {
            let outs: Vec<Vec<Complex64>> = ops.iter().map(|o| o.apply(&x)).collect();
            let choice: Vec<usize> = (0..outs[0].len())
                .map(|r| (0..ops.len()).fold(0, |b, i| if outs[i][r].norm() > outs[b][r].norm() { i } else { b }))
                .collect();
            let lin = Selected { ops, choice: &choice };
            let step = ascent::run(&lin, domain, codomain, &x, &AscentConfig { max_iter: 1, ..*cfg });
            let next_value = max_value(ops, codomain, &step.witness) / domain.norm(&step.witness);
            if !(next_value > value) {
                break;
            }
            let gain = next_value - value;
            x = step.witness;
            value = next_value;
            if gain <= cfg.tol * value {
                break;
            }
        }
        ascent::AscentResult { value, witness: x, iterations: 0 }
    });
    let mut best = runs[0].clone();
    for r in runs.into_iter().skip(1) {
        if r.value > best.value {
            best = r;
        }
    }
    best
}

fn max_value<A: LinearOp>(ops: &[A], codomain: &GroupedNorm, x: &[Complex64]) -> f64 {
    let outs: Vec<Vec<Complex64>> = ops.iter().map(|o| o.apply(x)).collect();
    let m: Vec<Complex64> = (0..outs[0].len())
        .map(|r| Complex64::new(outs.iter().map(|o| o[r].norm()).fold(0.0, f64::max), 0.0))
        .collect();
    codomain.norm(&m)
}

struct Selected<'a, A> {
    ops: &'a [A],
    choice: &'a [usize],
}

impl<A: LinearOp> LinearOp for Selected<'_, A> {
    fn rows(&self) -> usize {
        self.choice.len()
    }

    fn cols(&self) -> usize {
        self.ops[0].cols()
    }

    fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let outs: Vec<Vec<Complex64>> = self.ops.iter().map(|o| o.apply(x)).collect();
        self.choice.iter().enumerate().map(|(r, &i)| outs[i][r]).collect()
    }

    fn apply_adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let mut x = vec![ZERO; self.cols()];
        for i in 0..self.ops.len() {
            let yi: Vec<Complex64> = y.iter().zip(self.choice).map(|(v, &c)| if c == i { *v } else { ZERO }).collect();
            if yi.iter().all(|v| *v == ZERO) {
                continue;
            }
            for (a, b) in x.iter_mut().zip(self.ops[i].apply_adjoint(&yi)) {
                *a += b;
            }
        }
        x
    }
}

fn check_kernels(kernels: &[TimeKernel]) -> Result<()> {
    let first = kernels.first().ok_or_else(|| Error::InvalidParameter("empty kernel family".into()))?;
    for k in kernels {
        if (k.h - first.h).abs() > 1e-15 * first.h || (k.t0 - first.t0).abs() > 1e-12 * first.h {
            return Err(Error::InvalidParameter("kernel family must share one grid".into()));
        }
        if !k.is_causal() {
            return Err(Error::NonCausalKernel);
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SquareTransferCheck {
    /// Largest `‖(Σ|∫k_i T_t f dt|²)^{1/2}‖_p / ‖f‖_p` over the sampled `f`.
    pub lhs: f64,
    /// Upper bound of the grid square-function constant `M`.
    pub grid_upper: f64,
    /// `M · C_p / c_p`.
    pub bound: f64,
    pub ok: bool,
}

/// Upper bound of `sup ‖(Σ_i |c_i ⋆ f|²)^{1/2}‖_p / ‖f‖_p` by vector-valued
/// Riesz–Thorin between `‖(Σ_i|c_i|²)^{1/2}‖₁` and
/// `sup_ω (Σ_i |ĉ_i(ω)|²)^{1/2}`.
pub fn square_grid_upper(kernels: &[TimeKernel], p: f64) -> f64 {
    let coeffs: Vec<Vec<Complex64>> = kernels.iter().map(|k| k.coefficients()).collect();
    let len = coeffs.iter().map(|c| c.len()).max().unwrap_or(0);
    let l1: f64 = (0..len)
        .map(|j| coeffs.iter().map(|c| c.get(j).map_or(0.0, |z| z.norm_sqr())).sum::<f64>().sqrt())
        .sum();
    if p == 1.0 {
        return l1;
    }
    let s = symbol_sup_of(&coeffs, true);
    let theta = interpolation_theta(p);
    l1.powf(1.0 - theta) * s.powf(theta)
}

/// Square-function transference for a kernel family on a generator.
pub fn square_transfer_check(
    kernels: &[TimeKernel],
    dec: &SpectralDecomposition,
    p: f64,
    fs: &[Vec<Complex64>],
) -> Result<SquareTransferCheck> {
    check_kernels(kernels)?;
    let ops: Vec<DMatrix<Complex64>> = kernels.iter().map(|k| transfer_operator(k, dec)).collect::<Result<_>>()?;
    let stack = square_stack(&ops);
    let dom = GroupedNorm::lp(p, dec.mu.clone());
    let cod = GroupedNorm::new(p, dec.mu.clone(), ops.len());
    let lhs = fs
        .iter()
        .map(|f| cod.norm(&stack.apply(f)) / dom.norm(f))
        .fold(0.0, f64::max);
    let grid_upper = square_grid_upper(kernels, p);
    let (c_p, big_c_p) = khinchin_constants(p);
    let bound = grid_upper * big_c_p / c_p;
    Ok(SquareTransferCheck { lhs, grid_upper, bound, ok: lhs <= bound + 1e-9 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaximalTransferCheck {
    /// Lower bound of the grid maximal constant.
    pub m_grid: f64,
    /// Lower bound of the semigroup maximal constant.
    pub m_semigroup: f64,
    /// `‖max_i |c_i|‖₁`, an upper bound of the grid constant.
    pub grid_upper: f64,
    pub ok: bool,
}

/// Empirical maximal constants `sup ‖max_i |K_i h|‖/‖h‖` on the generator
/// and on the grid model (window `N`).
pub fn maximal_transfer_check(
    kernels: &[TimeKernel],
    dec: &SpectralDecomposition,
    p: f64,
    window: usize,
    seed: u64,
) -> Result<MaximalTransferCheck> {
    check_kernels(kernels)?;
    let ops: Vec<DMatrix<Complex64>> = kernels.iter().map(|k| transfer_operator(k, dec)).collect::<Result<_>>()?;
    let d = dec.n();
    let norm_e = GroupedNorm::lp(p, dec.mu.clone());
    let cfg = AscentConfig { seed, starts: 16, max_iter: 300, tol: 1e-12, real: false };
    let eig: Vec<Vec<Complex64>> = (0..d)
        .map(|k| dec.eigenvectors.column(k).iter().map(|&x| Complex64::new(x, 0.0)).collect())
        .collect();
    let sem = max_family_ascent(&ops, &norm_e, &norm_e, &cfg, &eig);

    let h = kernels[0].h;
    let toeps: Vec<Toeplitz> = kernels.iter().map(|k| Toeplitz::new(k, window)).collect();
    let norm_g = GroupedNorm::unit(p, window);
    let mut extra = vec![plateau(window, 0.0)];
    for k in kernels {
        extra.push(plateau(window, peak_frequency(&k.coefficients())));
    }
    // Growing exponentials are eigenfunctions of every convolver with the
    // Laplace transform as eigenvalue.
    for &l in &dec.eigenvalues {
        let a = -l;
        extra.push((0..window).map(|x| Complex64::new((-a * (window - 1 - x) as f64 * h).exp(), 0.0)).collect());
    }
    // Orbits x ↦ (T_{(N−1−x)h} h)(ω) of the semigroup witness.
    let steps: Vec<Complex64> = dec.eigenvalues.iter().map(|&l| Complex64::new((l * h).exp(), 0.0)).collect();
    let coeff: Vec<Complex64> = (0..d)
        .map(|k| (0..d).map(|i| sem.witness[i] * (dec.eigenvectors[(i, k)] * dec.mu[i])).sum())
        .collect();
    for w in 0..d {
        let mut f = vec![ZERO; window];
        for k in 0..d {
            let base = coeff[k] * dec.eigenvectors[(w, k)];
            let mut pow = ONE;
            for x in (0..window).rev() {
                f[x] += base * pow;
                pow *= steps[k];
            }
        }
        extra.push(f);
    }
    let grid = max_family_ascent(&toeps, &norm_g, &norm_g, &AscentConfig { starts: 4, max_iter: 60, ..cfg }, &extra);

    let len = kernels.iter().map(|k| k.len()).max().unwrap_or(0);
    let grid_upper = (0..len)
        .map(|j| kernels.iter().map(|k| k.samples.get(j).map_or(0.0, |z| z.norm() * h)).fold(0.0, f64::max))
        .sum();
    Ok(MaximalTransferCheck {
        m_grid: grid.value,
        m_semigroup: sem.value,
        grid_upper,
        ok: sem.value <= grid.value + 1e-6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::SubmarkovianGenerator;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn delta_is_identity() {
        let k = TimeKernel::delta(0.1).unwrap();
        assert!((convolver_lower(&k, 1.5, 64, 0) - 1.0).abs() < 1e-12);
        assert!((convolver_upper(&k, 1.5) - 1.0).abs() < 1e-12);
        assert!((k.l1_norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_kernel() {
        let k = TimeKernel::exponential(0.01, 4001).unwrap();
        assert!((k.laplace(1.0) - c(0.5)).norm() < 1e-8);
        // Riemann sums overshoot by about h/2.
        assert!((k.symbol_sup() - 1.0).abs() < 0.01);
        assert!((convolver_upper(&k, 1.0) - k.l1_norm()).abs() < 1e-15);
    }

    #[test]
    fn transfer_exponential_on_minus_identity() {
        let g = SubmarkovianGenerator::new(vec![1.0; 2], -DMatrix::identity(2, 2)).unwrap();
        let d = g.decompose().unwrap();
        let k = TimeKernel::exponential(0.01, 4001).unwrap();
        let m = transfer_operator(&k, &d).unwrap();
        assert!((m[(0, 0)] - k.laplace_riemann(1.0)).norm() < 1e-14);
        assert!((m[(0, 0)] - c(0.5)).norm() < 0.01);
        assert!(m[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn noncausal_is_rejected() {
        let k = TimeKernel::new(0.1, -1.0, vec![c(1.0); 3]).unwrap();
        let g = SubmarkovianGenerator::new(vec![1.0], -DMatrix::identity(1, 1)).unwrap();
        assert!(matches!(transfer_operator(&k, &g.decompose().unwrap()), Err(Error::NonCausalKernel)));
    }

    #[test]
    fn toeplitz_adjoint() {
        let k = TimeKernel::new(0.5, 0.0, vec![c(1.0), Complex64::new(0.3, -2.0), c(0.5)]).unwrap();
        let t = Toeplitz::new(&k, 6);
        let x: Vec<Complex64> = (0..6).map(|i| Complex64::new(i as f64, 1.0 - i as f64)).collect();
        let y: Vec<Complex64> = (0..6).map(|i| Complex64::new(0.5 * i as f64, 2.0)).collect();
        let lhs: Complex64 = t.apply(&x).iter().zip(&y).map(|(a, b)| a.conj() * b).sum();
        let rhs: Complex64 = x.iter().zip(t.apply_adjoint(&y)).map(|(a, b)| a.conj() * b).sum();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn rademacher_matches_recursive_definition() {
        fn recursive(l: usize, t: f64) -> f64 {
            if l == 1 {
                if t <= 0.5 {
                    1.0
                } else {
                    -1.0
                }
            } else if t <= 0.5 {
                recursive(l - 1, 2.0 * t)
            } else {
                recursive(l - 1, 2.0 * t - 1.0)
            }
        }
        let sys = RademacherSystem::new(5).unwrap();
        for a in 0..sys.atoms() {
            let right = (a + 1) as f64 / sys.atoms() as f64;
            let mid = (a as f64 + 0.5) / sys.atoms() as f64;
            for l in 1..=5 {
                assert_eq!(sys.on_atom(l, a), recursive(l, right));
                assert_eq!(sys.on_atom(l, a), recursive(l, mid));
                assert_eq!(RademacherSystem::eval(l, right), recursive(l, right));
            }
        }
    }

    #[test]
    fn rademacher_orthonormal() {
        let sys = RademacherSystem::new(6).unwrap();
        for l in 1..=6 {
            for m in 1..=6 {
                let s: f64 = (0..sys.atoms()).map(|a| sys.on_atom(l, a) * sys.on_atom(m, a)).sum::<f64>() / sys.atoms() as f64;
                assert_eq!(s, if l == m { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn khinchin_constants_shape() {
        assert_eq!(khinchin_constants(2.0), (1.0, 1.0));
        assert!((gaussian_moment(2.0) - 1.0).abs() < 1e-14);
        assert!((gaussian_moment(4.0) - 3f64.powf(0.25)).abs() < 1e-14);
        // Szarek's constant at p = 1.
        assert!((khinchin_constants(1.0).1 - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn khinchin_estimates_bracket() {
        let e = khinchin_empirical(2.0, 8, 1, 50).unwrap();
        assert!((e.c_est - 1.0).abs() < 1e-12 && (e.big_c_est - 1.0).abs() < 1e-12);
        let e = khinchin_empirical(1.5, 8, 1, 50).unwrap();
        assert!((e.c_est - 1.0).abs() < 1e-12);
        let e = khinchin_empirical(4.0, 10, 1, 50).unwrap();
        let (cp, big) = khinchin_constants(4.0);
        assert!(e.c_est <= 1.0 && e.big_c_est >= 1.0 - 1e-12);
        assert!(e.c_est >= cp - 1e-12 && e.big_c_est <= big + 1e-12);
    }

    #[test]
    fn identity_row_and_square() {
        let r = row_khinchin_check(&[DMatrix::identity(3, 3)], 3.0, &[1.0; 3], 0).unwrap();
        assert!((r.row_norm - 1.0).abs() < 1e-12 && (r.square_norm - 1.0).abs() < 1e-12);
        let ops: Vec<DMatrix<Complex64>> = (0..3)
            .map(|l| DMatrix::from_fn(3, 3, |i, j| if i == l && j == l { c(1.0) } else { c(0.0) }))
            .collect();
        let r = row_khinchin_check(&ops, 3.0, &[1.0; 3], 0).unwrap();
        assert!((r.square_norm - 1.0).abs() < 1e-10);
        assert!(r.sandwich_ok);
    }

    #[test]
    fn projection_fixes_rademacher_span() {
        let n = 4;
        let sys = RademacherSystem::new(n).unwrap();
        let f: Vec<Vec<f64>> = (0..sys.atoms()).map(|a| vec![2.0 * sys.on_atom(1, a) - sys.on_atom(3, a), sys.on_atom(2, a)]).collect();
        let pf = rademacher_projection(&f, n);
        for (u, v) in f.iter().zip(&pf) {
            for (a, b) in u.iter().zip(v) {
                assert!((a - b).abs() < 1e-14);
            }
        }
        let r = rademacher_projection_check(2.0, 4, 3, 50, 0).unwrap();
        assert!(r.max_ratio <= 1.0 + 1e-12);
    }

    #[test]
    fn hardy_littlewood_examples() {
        assert_eq!(hardy_littlewood_max(&[2.0; 5], true), vec![2.0; 5]);
        let mut f = vec![0.0; 8];
        f[2] = 1.0;
        let m = hardy_littlewood_max(&f, true);
        for j in 0..6 {
            assert!((m[2 + j] - 1.0 / (j as f64 + 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn kprime_of_identities_is_projection() {
        let ops = vec![DMatrix::<Complex64>::identity(2, 2); 3];
        let k = kprime_matrix(&ops);
        let k2 = &k * &k;
        assert!((k2 - &k).iter().all(|z| z.norm() < 1e-14));
    }
}
