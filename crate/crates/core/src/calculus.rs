//! Finite submarkovian semigroups `T_t = e^{tA}` on `ℓᵖ(μ)` and their
//! spectral calculus.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::ascent::{ascent_norm, AscentConfig, GroupedNorm};
use crate::{par, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `μ`-symmetric generator with nonnegative off-diagonal entries and
/// nonpositive row sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubmarkovianGenerator {
    pub mu: Vec<f64>,
    pub a: DMatrix<f64>,
    /// Admits a zero eigenvalue (row sums may all vanish).
    #[serde(default)]
    pub conservative: bool,
}

/// Outcome of [`SubmarkovianGenerator::validate`]; each failed condition is
/// listed separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<String>,
    /// Smallest entry of `e^{tA}` over the sample times.
    pub min_semigroup_entry: f64,
    /// Largest interpolated `p`-norm bound of `e^{tA}` over the sample times.
    pub max_norm_bound: f64,
}

impl SubmarkovianGenerator {
    /// Validated generator with `P_0 = 0` (no zero eigenvalue).
    pub fn new(mu: Vec<f64>, a: DMatrix<f64>) -> Result<Self> {
        let g = Self { mu, a, conservative: false };
        g.checked()
    }

    /// Validated generator that may have a zero eigenvalue.
    pub fn conservative(mu: Vec<f64>, a: DMatrix<f64>) -> Result<Self> {
        let g = Self { mu, a, conservative: true };
        g.checked()
    }

    fn checked(self) -> Result<Self> {
        let report = self.validate();
        if report.valid {
            Ok(self)
        } else {
            Err(Error::InvalidGenerator(report.violations.join("; ")))
        }
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// Checks every defining condition and reports each violation.
    pub fn validate(&self) -> ValidationReport {
        let n = self.n();
        let mut violations = Vec::new();
        if self.a.nrows() != n || self.a.ncols() != n {
            violations.push(format!("matrix is {}x{}, measure has {n} points", self.a.nrows(), self.a.ncols()));
            return ValidationReport {
                valid: false,
                violations,
                min_semigroup_entry: f64::NAN,
                max_norm_bound: f64::NAN,
            };
        }
        if let Some((i, &m)) = self.mu.iter().enumerate().find(|(_, m)| !(**m > 0.0)) {
            violations.push(format!("measure: mu[{i}] = {m} is not positive"));
        }
        let scale = self.a.iter().fold(0.0_f64, |s, x| s.max(x.abs())).max(1e-300);
        for i in 0..n {
            for j in 0..n {
                if i != j && self.a[(i, j)] < 0.0 {
                    violations.push(format!("positivity: A[{i}][{j}] = {} < 0", self.a[(i, j)]));
                }
                let asym = (self.mu[i] * self.a[(i, j)] - self.mu[j] * self.a[(j, i)]).abs();
                let size = (self.mu[i] * self.a[(i, j)]).abs().max(self.mu[j] * self.a[(j, i)].abs());
                if i < j && asym > 1e-12 * size.max(scale * 1e-3) {
                    violations.push(format!("symmetry: mu_{i} A_{i}{j} != mu_{j} A_{j}{i} (defect {asym:e})"));
                }
            }
            let row: f64 = self.a.row(i).sum();
            if row > 1e-12 * scale {
                violations.push(format!("contraction: row {i} sums to {row} > 0"));
            }
        }
        let mut min_entry = f64::NAN;
        let mut max_norm = f64::NAN;
        if violations.is_empty() {
            match self.decompose() {
                Ok(dec) => {
                    let max_eig = dec.eigenvalues.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
                    let min_abs = dec.eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b.abs()));
                    if max_eig > 1e-10 * scale {
                        violations.push(format!("spectrum: eigenvalue {max_eig} > 0"));
                    }
                    if !self.conservative && min_abs <= 1e-12 * scale {
                        violations.push("nonsingularity: A has a zero eigenvalue".to_string());
                    }
                    min_entry = f64::INFINITY;
                    max_norm = 0.0_f64;
                    for &t in &[0.01, 0.1, 0.5, 1.0, 3.0, 10.0] {
                        let tt = dec.semigroup_at(Complex64::new(t, 0.0));
                        min_entry = tt.iter().fold(min_entry, |m, z| m.min(z.re));
                        max_norm = max_norm.max(weighted_one_norm(&tt, &self.mu)).max(inf_norm(&tt));
                    }
                    if min_entry < -1e-12 {
                        violations.push(format!("positivity: e^(tA) has entry {min_entry}"));
                    }
                    if max_norm > 1.0 + 1e-8 {
                        violations.push(format!("contraction: e^(tA) has p-norm bound {max_norm}"));
                    }
                }
                Err(e) => violations.push(e.to_string()),
            }
        }
        ValidationReport {
            valid: violations.is_empty(),
            violations,
            min_semigroup_entry: min_entry,
            max_norm_bound: max_norm,
        }
    }

    /// Eigendecomposition through the symmetric matrix `D^{1/2} A D^{−1/2}`.
    pub fn decompose(&self) -> Result<SpectralDecomposition> {
        let n = self.n();
        let s = DMatrix::from_fn(n, n, |i, j| {
            let v = self.a[(i, j)] * (self.mu[i] / self.mu[j]).sqrt();
            let w = self.a[(j, i)] * (self.mu[j] / self.mu[i]).sqrt();
            0.5 * (v + w)
        });
        let eig = SymmetricEigen::new(s);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let eigenvectors = DMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])] / self.mu[i].sqrt());
        Ok(SpectralDecomposition { mu: self.mu.clone(), eigenvalues, eigenvectors })
    }
}

/// `A = Σ λ_k e_k e_kᵀ diag(μ)` with `μ`-orthonormal `e_k` (columns).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    pub mu: Vec<f64>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// `Σ c_k e_k e_kᵀ diag(μ)`.
    pub fn assemble(&self, coeff: &[Complex64]) -> DMatrix<Complex64> {
        let n = self.n();
        let e = &self.eigenvectors;
        DMatrix::from_fn(n, n, |i, j| {
            let mut s = ZERO;
            for (k, &c) in coeff.iter().enumerate() {
                s += c * (e[(i, k)] * e[(j, k)] * self.mu[j]);
            }
            s
        })
    }

    /// `m(−A)`; fails where `m` is not finite on the spectrum of `−A`.
    pub fn borel_calculus<F: Fn(f64) -> Complex64>(&self, m: F) -> Result<DMatrix<Complex64>> {
        let coeff = self.symbol_values(m)?;
        Ok(self.assemble(&coeff))
    }

    /// `m(−λ_k)` for every eigenvalue.
    pub fn symbol_values<F: Fn(f64) -> Complex64>(&self, m: F) -> Result<Vec<Complex64>> {
        self.eigenvalues
            .iter()
            .map(|&l| {
                let x = -l;
                let v = m(x);
                if v.re.is_finite() && v.im.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::SymbolUndefined(x))
                }
            })
            .collect()
    }

    /// `T_z = e^{zA}` for `Re z ≥ 0`.
    pub fn semigroup_at(&self, z: Complex64) -> DMatrix<Complex64> {
        let coeff: Vec<Complex64> = self.eigenvalues.iter().map(|&l| (z * l).exp()).collect();
        self.assemble(&coeff)
    }

    /// `(−A)^{iγ}`.
    pub fn imaginary_power(&self, gamma: f64) -> Result<DMatrix<Complex64>> {
        self.borel_calculus(|x| power_symbol(x, gamma))
    }

    /// Largest `|m(−λ_k)|`, the exact `ℓ²(μ)` norm of `m(−A)`.
    pub fn spectral_norm<F: Fn(f64) -> Complex64>(&self, m: F) -> Result<f64> {
        Ok(self.symbol_values(m)?.iter().fold(0.0, |a, z| a.max(z.norm())))
    }

    /// `max_k |A e_k − λ_k e_k|`.
    pub fn eigen_residual(&self, a: &DMatrix<f64>) -> f64 {
        let mut r: f64 = 0.0;
        for k in 0..self.n() {
            let e = self.eigenvectors.column(k);
            let d = a * e - e * self.eigenvalues[k];
            r = r.max(d.amax());
        }
        r
    }

    /// `max_{k,l} |Σ μ_i e_k(i) e_l(i) − δ_kl|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.n();
        let mut r: f64 = 0.0;
        for k in 0..n {
            for l in 0..n {
                let s: f64 = (0..n).map(|i| self.mu[i] * self.eigenvectors[(i, k)] * self.eigenvectors[(i, l)]).sum();
                r = r.max((s - if k == l { 1.0 } else { 0.0 }).abs());
            }
        }
        r
    }
}

/// `x^{iγ} = e^{iγ ln x}`; not finite at `x = 0` unless `γ = 0`.
pub fn power_symbol(x: f64, gamma: f64) -> Complex64 {
    if gamma == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    if !(x > 0.0) {
        return Complex64::new(f64::NAN, f64::NAN);
    }
    Complex64::from_polar(1.0, gamma * x.ln())
}

/// `(1 − e^{−tx}) / (tx)`, the symbol of `t⁻¹∫₀ᵗ T_s ds`; `1` at `x = 0`.
pub fn ergodic_symbol(x: f64, t: f64) -> f64 {
    let s = t * x;
    if s == 0.0 {
        1.0
    } else {
        -(-s).exp_m1() / s
    }
}

/// `max_j Σ_i μ_i |M_ij| / μ_j`, the norm on `ℓ¹(μ)`.
pub fn weighted_one_norm(m: &DMatrix<Complex64>, mu: &[f64]) -> f64 {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| mu[i] * m[(i, j)].norm()).sum::<f64>() / mu[j])
        .fold(0.0, f64::max)
}

/// `max_i Σ_j |M_ij|`, the norm on `ℓ^∞`.
pub fn inf_norm(m: &DMatrix<Complex64>) -> f64 {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest singular value of `D^{1/2} M D^{−1/2}`, the norm on `ℓ²(μ)`.
pub fn weighted_two_norm(m: &DMatrix<Complex64>, mu: &[f64]) -> f64 {
    let (r, c) = m.shape();
    let s = DMatrix::from_fn(r, c, |i, j| m[(i, j)] * (mu[i] / mu[j]).sqrt());
    s.svd(false, false).singular_values.iter().fold(0.0, |a, &b| a.max(b))
}

/// Top right singular vector of `D^{1/2} M D^{−1/2}`, mapped back.
fn top_singular_input(m: &DMatrix<Complex64>, mu: &[f64]) -> Vec<Complex64> {
    let (r, c) = m.shape();
    let s = DMatrix::from_fn(r, c, |i, j| m[(i, j)] * (mu[i] / mu[j]).sqrt());
    let svd = s.svd(false, true);
    let k = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc })
        .0;
    let vt = svd.v_t.expect("requested");
    (0..c).map(|j| vt[(k, j)].conj() / mu[j].sqrt()).collect()
}

/// Riesz–Thorin bound from the exact `(1,1)`, `(2,2)` and `(∞,∞)` norms.
pub fn riesz_thorin_upper(m: &DMatrix<Complex64>, p: f64, mu: &[f64]) -> f64 {
    let two = weighted_two_norm(m, mu);
    if p == 2.0 {
        return two;
    }
    if p == 1.0 {
        return weighted_one_norm(m, mu);
    }
    if p < 2.0 {
        let theta = 2.0 * (1.0 - 1.0 / p);
        weighted_one_norm(m, mu).powf(1.0 - theta) * two.powf(theta)
    } else {
        let theta = 1.0 - 2.0 / p;
        two.powf(1.0 - theta) * inf_norm(m).powf(theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Ascent lower bound and interpolation upper bound for `‖M‖` on `ℓᵖ(μ)`.
pub fn pq_norm_estimate(m: &DMatrix<Complex64>, p: f64, mu: &[f64], seed: u64) -> NormBounds {
    pq_norm_estimate_with(m, p, mu, &AscentConfig { seed, ..Default::default() })
}

pub fn pq_norm_estimate_with(m: &DMatrix<Complex64>, p: f64, mu: &[f64], cfg: &AscentConfig) -> NormBounds {
    let norm = GroupedNorm::lp(p, mu.to_vec());
    let mut extra = vec![top_singular_input(m, mu)];
    extra.extend((0..m.ncols()).map(|j| {
        let mut e = vec![ZERO; m.ncols()];
        e[j] = Complex64::new(1.0, 0.0);
        e
    }));
    let lower = ascent_norm(m, &norm, &norm, cfg, &extra).value;
    NormBounds { lower, upper: riesz_thorin_upper(m, p, mu) }
}

/// Stein's analyticity angle `π/2 − π|1/p − 1/2|`.
pub fn stein_angle(p: f64) -> f64 {
    FRAC_PI_2 - PI * (1.0 / p - 0.5).abs()
}

/// The angle `π/2 − arctan(|p−2| / (2√(p−1)))`.
pub fn liskevich_perelmuter_angle(p: f64) -> f64 {
    if p == 1.0 {
        return 0.0;
    }
    FRAC_PI_2 - ((p - 2.0).abs() / (2.0 * (p - 1.0).sqrt())).atan()
}

/// Largest admissible cone half-angle `(π/2)(1 − |2/p − 1|)` for the cone
/// maximal function.
pub fn cone_maximal_angle(p: f64) -> f64 {
    FRAC_PI_2 * (1.0 - (2.0 / p - 1.0).abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CowlingRow {
    pub gamma: f64,
    pub p: f64,
    pub lower: f64,
    pub upper: f64,
    /// `e^{π|1/p−1/2||γ|}`.
    pub reference: f64,
    /// `lower / reference`.
    pub ratio: f64,
}

/// `‖(−A)^{iγ}‖_p` over a `(γ, p)` grid against `e^{π|1/p−1/2||γ|}`.
pub fn cowling_bound_scan(
    dec: &SpectralDecomposition,
    gammas: &[f64],
    ps: &[f64],
    seed: u64,
) -> Result<Vec<CowlingRow>> {
    let cells: Vec<(f64, f64)> = gammas.iter().flat_map(|&g| ps.iter().map(move |&p| (g, p))).collect();
    let mats: Vec<DMatrix<Complex64>> = gammas.iter().map(|&g| dec.imaginary_power(g)).collect::<Result<_>>()?;
    let rows = par::map_range(cells.len(), |k| {
        let (g, p) = cells[k];
        let m = &mats[k / ps.len()];
        let cfg = AscentConfig { seed: par::derive_seed(seed, k as u64), starts: 16, ..Default::default() };
        let b = pq_norm_estimate_with(m, p, &dec.mu, &cfg);
        let reference = (PI * (1.0 / p - 0.5).abs() * g.abs()).exp();
        CowlingRow { gamma: g, p, lower: b.lower, upper: b.upper, reference, ratio: b.lower / reference }
    });
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeScan {
    /// `(ψ, max_r ‖T_{re^{iψ}}‖_p lower bound)`.
    pub rows: Vec<(f64, f64)>,
    /// Largest grid angle up to which every sampled norm is `≤ 1 + 1e-8`.
    pub empirical_angle: f64,
    pub stein_angle: f64,
    pub liskevich_perelmuter_angle: f64,
}

/// Contractivity of `T_z` on rays `z = re^{iψ}`.
pub fn cone_contractivity_scan(
    dec: &SpectralDecomposition,
    p: f64,
    angles: &[f64],
    radii: &[f64],
    seed: u64,
) -> ConeScan {
    let rows: Vec<(f64, f64)> = par::map_range(angles.len(), |k| {
        let psi = angles[k];
        let worst = radii
            .iter()
            .enumerate()
            .map(|(l, &r)| {
                let t = dec.semigroup_at(Complex64::from_polar(r, psi));
                let cfg = AscentConfig {
                    seed: par::derive_seed(seed, (k * radii.len() + l) as u64),
                    starts: 8,
                    ..Default::default()
                };
                pq_norm_estimate_with(&t, p, &dec.mu, &cfg).lower
            })
            .fold(0.0, f64::max);
        (psi, worst)
    });
    let mut sorted = rows.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut empirical_angle = 0.0;
    for &(psi, v) in &sorted {
        if v > 1.0 + 1e-8 {
            break;
        }
        empirical_angle = psi;
    }
    ConeScan {
        rows,
        empirical_angle,
        stein_angle: stein_angle(p),
        liskevich_perelmuter_angle: liskevich_perelmuter_angle(p),
    }
}

fn weighted_lp(v: &[f64], p: f64, mu: &[f64]) -> f64 {
    let max = v.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
    if max == 0.0 {
        return 0.0;
    }
    max * v.iter().zip(mu).map(|(x, w)| w * (x.abs() / max).powf(p)).sum::<f64>().powf(1.0 / p)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalFunction {
    pub max_function: Vec<f64>,
    /// `‖max_function‖_p / ‖f‖_p`.
    pub ratio: f64,
}

/// `sup_t |t⁻¹∫₀ᵗ T_s f ds|` over a time grid.
pub fn ergodic_maximal(dec: &SpectralDecomposition, f: &[f64], p: f64, times: &[f64]) -> Result<MaximalFunction> {
    if let Some(&t) = times.iter().find(|t| !(**t > 0.0)) {
        return Err(Error::InvalidParameter(format!("time {t} is not positive")));
    }
    let fc: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut sup = vec![0.0_f64; f.len()];
    for &t in times {
        let m = dec.borel_calculus(|x| Complex64::new(ergodic_symbol(x, t), 0.0))?;
        let g = &m * DVector::from_vec(fc.clone());
        for (s, z) in sup.iter_mut().zip(g.iter()) {
            *s = s.max(z.norm());
        }
    }
    let ratio = weighted_lp(&sup, p, &dec.mu) / weighted_lp(f, p, &dec.mu);
    Ok(MaximalFunction { max_function: sup, ratio })
}

/// `sup |T_z f|` over `z = re^{iφ}` with `r ∈ [0, 1)`, `|φ| ≤ θ`.
pub fn cone_maximal(
    dec: &SpectralDecomposition,
    f: &[Complex64],
    theta: f64,
    p: f64,
    samples: usize,
) -> Result<MaximalFunction> {
    let limit = cone_maximal_angle(p);
    if !(theta >= 0.0) || (theta >= limit && theta > 0.0) {
        return Err(Error::AngleOutOfRange { psi: theta, theta: limit });
    }
    let samples = samples.max(2);
    let angles: Vec<f64> = if theta == 0.0 {
        vec![0.0]
    } else {
        (0..samples).map(|k| -theta + 2.0 * theta * k as f64 / (samples - 1) as f64).collect()
    };
    // r = 0 stands for the limit z → 0 inside the cone (T_0 = I).
    let radii: Vec<f64> = (0..samples).map(|k| k as f64 / samples as f64).collect();
    let fv = DVector::from_vec(f.to_vec());
    let mut sup = vec![0.0_f64; f.len()];
    for &phi in &angles {
        for &r in &radii {
            let g = dec.semigroup_at(Complex64::from_polar(r, phi)) * &fv;
            for (s, z) in sup.iter_mut().zip(g.iter()) {
                *s = s.max(z.norm());
            }
        }
    }
    let moduli: Vec<f64> = f.iter().map(|z| z.norm()).collect();
    let ratio = weighted_lp(&sup, p, &dec.mu) / weighted_lp(&moduli, p, &dec.mu);
    Ok(MaximalFunction { max_function: sup, ratio })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VonNeumannCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// `‖Σ aₙ Tⁿ‖₂ ≤ sup_{|z|≤1} |Σ aₙ zⁿ|` for a Hilbert-space contraction.
pub fn von_neumann_check(t: &DMatrix<Complex64>, coeffs: &[Complex64]) -> Result<VonNeumannCheck> {
    let n = t.nrows();
    let s = t.clone().svd(false, false).singular_values[0];
    if s > 1.0 + 1e-12 {
        return Err(Error::NotContraction { norm: s, tol: 1e-12 });
    }
    let mut acc = DMatrix::<Complex64>::zeros(n, n);
    for &a in coeffs.iter().rev() {
        acc = &acc * t + DMatrix::from_diagonal_element(n, n, a);
    }
    let lhs = if n == 0 { 0.0 } else { acc.svd(false, false).singular_values[0] };
    let rhs = circle_max(coeffs);
    Ok(VonNeumannCheck { lhs, rhs, ok: lhs <= rhs + 1e-9 })
}

fn poly_abs(coeffs: &[Complex64], phi: f64) -> f64 {
    let z = Complex64::from_polar(1.0, phi);
    coeffs.iter().rev().fold(ZERO, |acc, &a| acc * z + a).norm()
}

/// Maximum of `|p|` on the unit circle: 4096-point grid, then a local
/// golden-section refinement around the best grid point.
pub fn circle_max(coeffs: &[Complex64]) -> f64 {
    const GRID: usize = 4096;
    let h = std::f64::consts::TAU / GRID as f64;
    let (mut best, mut arg) = (f64::NEG_INFINITY, 0.0);
    for k in 0..GRID {
        let phi = k as f64 * h;
        let v = poly_abs(coeffs, phi);
        if v > best {
            best = v;
            arg = phi;
        }
    }
    let (mut a, mut b) = (arg - h, arg + h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if poly_abs(coeffs, c) > poly_abs(coeffs, d) {
            b = d;
        } else {
            a = c;
        }
    }
    best.max(poly_abs(coeffs, 0.5 * (a + b)))
}
