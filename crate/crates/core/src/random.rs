//! Seeded random instances for checks, benchmarks and Monte-Carlo suites.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;

use crate::calculus::SubmarkovianGenerator;
use crate::transference::TimeKernel;

/// Nonnegative matrix with row and column sums at most 1, hence a
/// contraction on every unit-weight `ℓᵖ`. Each column has `per_column`
/// nonzero entries (all of them when `per_column ≥ n`). About half of the
/// instances are scaled to have largest row or column sum exactly 1.
pub fn substochastic<R: Rng>(rng: &mut R, n: usize, per_column: usize) -> DMatrix<f64> {
    let k = per_column.clamp(1, n);
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in sample(rng, n, k) {
            m[(i, j)] = rng.random_range(0.05..1.0);
        }
    }
    let rows = (0..n).map(|i| m.row(i).sum()).fold(0.0, f64::max);
    let cols = (0..n).map(|j| m.column(j).sum()).fold(0.0, f64::max);
    let scale = if rng.random_bool(0.5) { 1.0 } else { rng.random_range(0.5..1.0) };
    m * (scale / rows.max(cols))
}

/// Complex matrix whose entrywise modulus is [`substochastic`].
pub fn complex_substochastic<R: Rng>(rng: &mut R, n: usize, per_column: usize) -> DMatrix<Complex64> {
    let modulus = substochastic(rng, n, per_column);
    modulus.map(|r| {
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        Complex64::from_polar(r, phase)
    })
}

/// Valid nonsingular generator: random symmetric conductances on a sparse
/// connected graph, measure in `[0.5, 2]`, killing rates in `[0, 0.5]` with
/// at least one rate `≥ 0.1`.
pub fn generator<R: Rng>(rng: &mut R, n: usize) -> SubmarkovianGenerator {
    let mu: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
    let mut c = DMatrix::zeros(n, n);
    for i in 1..n {
        // A random spanning tree keeps the graph connected.
        let j = rng.random_range(0..i);
        let w = rng.random_range(0.2..2.0);
        c[(i, j)] = w;
        c[(j, i)] = w;
    }
    for i in 0..n {
        for j in 0..i {
            if c[(i, j)] == 0.0 && rng.random_bool(0.3) {
                let w = rng.random_range(0.1..1.5);
                c[(i, j)] = w;
                c[(j, i)] = w;
            }
        }
    }
    let mut kill: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..0.5)).collect();
    let k = rng.random_range(0..n);
    kill[k] = kill[k].max(0.1);
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        let mut off = 0.0;
        for j in 0..n {
            if i != j {
                a[(i, j)] = c[(i, j)] / mu[i];
                off += a[(i, j)];
            }
        }
        a[(i, i)] = -off - kill[i];
    }
    SubmarkovianGenerator::new(mu, a).expect("construction satisfies every condition")
}

/// Real matrix with entries uniform in `[−1, 1]`.
pub fn signed<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

/// Complex matrix with entries uniform in the square `[−1, 1]²`.
pub fn complex<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// Complex matrix with largest singular value `≤ 1`.
pub fn contraction<R: Rng>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    let m = complex(rng, n, n);
    let s = m.clone().svd(false, false).singular_values[0];
    let target = if rng.random_bool(0.3) { 1.0 } else { rng.random_range(0.3..1.0) };
    m * Complex64::new(target / s, 0.0)
}

/// Positive weights in `[0.25, 4]`.
pub fn weights<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| 2f64.powf(rng.random_range(-2.0..2.0))).collect()
}

/// Smooth causal kernel on `[0, 12]` with step `h`: one or two complex
/// Gaussian bumps, widths in `[0.3, 0.7]`, modulated by `e^{iωt}` with
/// `|ω| ≤ 2`. Each bump is at least eight widths away from both ends.
pub fn smooth_kernel<R: Rng>(rng: &mut R, h: f64) -> TimeKernel {
    let span = 12.0;
    let bumps: Vec<(Complex64, f64, f64, f64)> = (0..rng.random_range(1..=2))
        .map(|_| {
            let s: f64 = rng.random_range(0.3..0.7);
            let c = rng.random_range(8.0 * s..span - 8.0 * s);
            let a = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            (a, c, s, rng.random_range(-2.0..2.0))
        })
        .collect();
    let len = (span / h).round() as usize + 1;
    TimeKernel::from_fn(h, 0.0, len, |t| {
        bumps
            .iter()
            .map(|&(a, c, s, w)| a * (-(t - c).powi(2) / (2.0 * s * s)).exp() * Complex64::from_polar(1.0, w * t))
            .sum()
    })
    .expect("positive step")
}
