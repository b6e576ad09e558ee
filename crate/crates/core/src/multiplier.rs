//! Cone-holomorphic symbols, Mihlin constants of their boundary values, and
//! the Mellin inversion formulas that express `e^{te^{iθ}x}` through the
//! family `(−x)^{iγ}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::calculus::SpectralDecomposition;
use crate::special::complex_gamma;
use crate::{par, Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Holomorphic function on `Γ_θ = {z ≠ 0 : |arg z| < θ}` with a bound `M_θ`.
#[derive(Clone)]
pub struct ConeSymbol {
    eval: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    pub theta: f64,
    pub sup_bound: f64,
}

impl fmt::Debug for ConeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConeSymbol").field("theta", &self.theta).field("sup_bound", &self.sup_bound).finish()
    }
}

impl ConeSymbol {
    /// Symbol with a supplied bound. Angles up to `π` are accepted.
    pub fn new<F>(theta: f64, sup_bound: f64, eval: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        if !(theta > 0.0 && theta <= PI) {
            return Err(Error::InvalidParameter(format!("cone angle {theta} not in (0, π]")));
        }
        if !(sup_bound >= 0.0) || !sup_bound.is_finite() {
            return Err(Error::InvalidParameter(format!("bound {sup_bound} is not finite")));
        }
        Ok(Self { eval: Arc::new(eval), theta, sup_bound })
    }

    /// Symbol whose bound is the maximum of `|m|` over [`cone_samples`].
    pub fn sampled<F>(theta: f64, eval: F) -> Result<Self>
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        let mut s = Self::new(theta, 0.0, eval)?;
        s.sup_bound = cone_samples(theta).iter().map(|z| s.eval(*z).norm()).fold(0.0, f64::max);
        if !s.sup_bound.is_finite() {
            return Err(Error::InvalidParameter("symbol is unbounded on the sampled cone".into()));
        }
        Ok(s)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.eval)(z)
    }

    pub fn constant(theta: f64, c: Complex64) -> Result<Self> {
        Self::new(theta, c.norm(), move |_| c)
    }

    /// `z^{iγ} = exp(iγ log|z| − γ arg z)`, bounded by `e^{|γ|θ}`.
    pub fn power(theta: f64, gamma: f64) -> Result<Self> {
        Self::new(theta, (gamma.abs() * theta).exp(), move |z| (I * gamma * z.ln()).exp())
    }

    /// `e^{−z}` on `Γ_θ`, `θ ≤ π/2`.
    pub fn exponential(theta: f64) -> Result<Self> {
        if theta > PI / 2.0 {
            return Err(Error::InvalidParameter("e^{-z} is unbounded beyond the right half-plane".into()));
        }
        Self::new(theta, 1.0, |z| (-z).exp())
    }

    /// `z/(1+z)`; bounded by 1 for `θ ≤ π/2` and by `1/sin θ` otherwise.
    pub fn resolvent(theta: f64) -> Result<Self> {
        let bound = if theta <= PI / 2.0 { 1.0 } else { 1.0 / theta.sin() };
        if !bound.is_finite() || theta >= PI {
            return Err(Error::InvalidParameter("z/(1+z) is unbounded on the slit plane".into()));
        }
        Self::new(theta, bound, |z| z / (1.0 + z))
    }

    /// Largest `|m(z)| − M_θ` over [`cone_samples`].
    pub fn bound_violation(&self) -> f64 {
        cone_samples(self.theta)
            .iter()
            .map(|z| self.eval(*z).norm() - self.sup_bound)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Points of `Γ_θ` (closure minus 0): 41 angles, radii `10^{−6}…10^{6}`.
pub fn cone_samples(theta: f64) -> Vec<Complex64> {
    let mut out = Vec::new();
    for a in 0..=40 {
        let phi = -theta + 2.0 * theta * a as f64 / 40.0;
        for r in 0..=240 {
            let rho = 10f64.powf(-6.0 + r as f64 / 20.0);
            out.push(Complex64::from_polar(rho, phi));
        }
    }
    out
}

/// Symmetric log-spaced grid `±[min, max]` with `per_decade` points per decade.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogGrid {
    pub min: f64,
    pub max: f64,
    pub per_decade: usize,
}

impl Default for LogGrid {
    fn default() -> Self {
        Self { min: 1e-6, max: 1e6, per_decade: 400 }
    }
}

impl LogGrid {
    /// Positive half, increasing.
    pub fn positive(&self) -> Vec<f64> {
        let decades = (self.max / self.min).log10();
        let count = (decades * self.per_decade as f64).ceil() as usize;
        (0..=count).map(|k| self.min * 10f64.powf(decades * k as f64 / count as f64)).collect()
    }
}

/// `m_ψ` sampled on both half lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySamples {
    /// Increasing; negative half first.
    pub x: Vec<f64>,
    pub values: Vec<Complex64>,
}

/// `m_ψ(x) = m(x e^{iψ})` for `x ≥ 0` and `m(|x| e^{−iψ})` for `x < 0`.
pub fn boundary_restriction(m: &ConeSymbol, psi: f64, grid: &LogGrid) -> Result<BoundarySamples> {
    if !(psi >= 0.0 && psi < m.theta) {
        return Err(Error::AngleOutOfRange { psi, theta: m.theta });
    }
    let pos = grid.positive();
    let mut x: Vec<f64> = pos.iter().rev().map(|v| -v).collect();
    x.extend(pos.iter().copied());
    let values = par::map_slice(&x, |&v| {
        if v >= 0.0 {
            m.eval(Complex64::from_polar(v, psi))
        } else {
            m.eval(Complex64::from_polar(-v, -psi))
        }
    });
    Ok(BoundarySamples { x, values })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MihlinReport {
    /// `max |m_ψ|`.
    pub c0: f64,
    /// `max |ν · ∂m_ψ/∂ν|` by central differences.
    pub c1: f64,
    /// Largest adjacent ratio of grid points on either half line.
    pub max_ratio: f64,
    pub points: usize,
}

/// Mihlin constants from boundary samples. Differences never straddle 0.
pub fn mihlin_constants(s: &BoundarySamples) -> Result<MihlinReport> {
    if s.x.len() != s.values.len() || s.x.len() < 3 {
        return Err(Error::InvalidParameter("need at least three samples".into()));
    }
    let mut max_ratio: f64 = 1.0;
    let mut c1: f64 = 0.0;
    for i in 1..s.x.len() - 1 {
        let (a, b, c) = (s.x[i - 1], s.x[i], s.x[i + 1]);
        if a * b <= 0.0 || b * c <= 0.0 {
            continue;
        }
        max_ratio = max_ratio.max((b / a).max(a / b)).max((c / b).max(b / c));
        let d = (s.values[i + 1] - s.values[i - 1]) / (c - a);
        c1 = c1.max((b * d).norm());
    }
    if max_ratio >= 1.1 {
        return Err(Error::UnstableGrid(max_ratio));
    }
    let c0 = s.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    Ok(MihlinReport { c0, c1, max_ratio, points: s.x.len() })
}

/// `M_θ / sin(θ − ψ)`.
pub fn cauchy_cone_bound(m_theta: f64, theta: f64, psi: f64) -> Result<f64> {
    if !(psi >= 0.0 && psi < theta) {
        return Err(Error::AngleOutOfRange { psi, theta });
    }
    Ok(m_theta / (theta - psi).sin())
}

/// The universal multiplier constant `[ψ/π − |1/p − 1/2|]^{−5/2}`, recorded
/// for report annotations; `None` outside its range.
pub fn universal_multiplier_constant(psi: f64, p: f64) -> Option<f64> {
    let base = psi / PI - (1.0 / p - 0.5).abs();
    (base > 0.0).then(|| base.powf(-2.5))
}

/// Which Mellin inversion formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MellinIdentity {
    /// `e^{te^{iθ}x} − e^{tx}`.
    Exponential,
    /// `e^{te^{iθ}x} − t⁻¹∫₀ᵗ e^{sx} ds`.
    Average,
}

/// `[e^{−γθ} − b(γ)] Γ(−iγ)`, with `b = 1` or `1/(1+iγ)`; the removable
/// singularity at `γ = 0` is handled through `Γ(−iγ) = iΓ(1−iγ)/γ`.
pub fn mellin_weight(identity: MellinIdentity, gamma: f64, theta: f64) -> Complex64 {
    let g1 = complex_gamma(Complex64::new(1.0, -gamma)).expect("Re = 1 is pole free");
    let e = if gamma == 0.0 { Complex64::new(-theta, 0.0) } else { Complex64::new((-gamma * theta).exp_m1() / gamma, 0.0) };
    let bracket = match identity {
        MellinIdentity::Exponential => e,
        MellinIdentity::Average => e + I / (1.0 + I * gamma),
    };
    bracket * g1 * I
}

/// Rigorous bound of `∫_{|γ|>G} |integrand| dγ / 2π` from
/// `|Γ(−iγ)|² = π/(γ sinh πγ)`.
pub fn mellin_tail_bound(identity: MellinIdentity, theta: f64, gamma_cut: f64) -> f64 {
    let g = gamma_cut.max(1.0);
    let a = PI / 2.0 - theta.abs();
    let k = (2.0 * PI / ((1.0 - (-2.0 * PI).exp()) * g)).sqrt();
    let k = match identity {
        MellinIdentity::Exponential => 2.0 * k,
        MellinIdentity::Average => (1.0 + 1.0 / g) * k + k,
    };
    // ∫_G^∞ K e^{−aγ} dγ on both sides, divided by 2π.
    2.0 * k * (-a * gamma_cut).exp() / a / (2.0 * PI)
}

/// Analytic bound for `sup_γ |weight(γ)| e^{(π/2−|θ|)|γ|}`: `|Γ(1+iy)| ≤ 1`
/// on `|γ| < 1` and `|Γ(−iγ)|² ≤ 2π e^{−π|γ|} / ((1 − e^{−2π})|γ|)` beyond.
pub fn melest_constant_bound(identity: MellinIdentity, theta: f64) -> f64 {
    let th = theta.abs();
    let far = (2.0 * PI / (1.0 - (-2.0 * PI).exp())).sqrt();
    match identity {
        MellinIdentity::Exponential => far.max(th * (PI / 2.0).exp()),
        MellinIdentity::Average => (2.0 * far).max(th * (PI / 2.0).exp() + (PI / 2.0 - th).exp()),
    }
}

/// Smallest cut-off (on a 1/4 grid) whose tail bound is below `limit`.
pub fn default_gamma_cut(identity: MellinIdentity, theta: f64, limit: f64) -> f64 {
    let mut g = 1.0;
    while mellin_tail_bound(identity, theta, g) > limit {
        g += 0.25;
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MellinResidual {
    pub quadrature: Complex64,
    pub closed_form: Complex64,
    pub residual: f64,
    pub tail_bound: f64,
    /// `sup_γ |weight(γ)| e^{(π/2−|θ|)|γ|}` over the quadrature nodes.
    pub majorant_constant: f64,
}

const TAIL_LIMIT: f64 = 1e-10;

fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

fn mellin_residual(identity: MellinIdentity, t: f64, theta: f64, x: f64, gamma_cut: f64, steps: usize) -> Result<MellinResidual> {
    if !(x < 0.0) || !(t > 0.0) || !(theta.abs() < PI / 2.0) {
        return Err(Error::InvalidParameter(format!("need x < 0, t > 0, |θ| < π/2; got x = {x}, t = {t}, θ = {theta}")));
    }
    if steps < 2 || !(gamma_cut > 0.0) {
        return Err(Error::InvalidParameter("need steps ≥ 2 and a positive cut-off".into()));
    }
    let tail_bound = mellin_tail_bound(identity, theta, gamma_cut);
    if tail_bound > TAIL_LIMIT {
        return Err(Error::TailBoundExceeded { bound: tail_bound, limit: TAIL_LIMIT });
    }
    let steps = steps + steps % 2;
    let h = 2.0 * gamma_cut / steps as f64;
    let ln_lambda = (-t * x).ln();
    let a = PI / 2.0 - theta.abs();
    let nodes = par::map_range(steps + 1, |k| {
        let g = -gamma_cut + k as f64 * h;
        let w = mellin_weight(identity, g, theta);
        let simpson = if k == 0 || k == steps { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
        (w * Complex64::from_polar(1.0, g * ln_lambda) * simpson, w.norm() * (a * g.abs()).exp())
    });
    let terms: Vec<Complex64> = nodes.iter().map(|n| n.0).collect();
    let quadrature = pairwise_sum(&terms) * (h / 3.0 / (2.0 * PI));
    let majorant_constant = nodes.iter().map(|n| n.1).fold(0.0, f64::max);
    let z = Complex64::from_polar(t, theta) * x;
    let closed_form = match identity {
        MellinIdentity::Exponential => z.exp() - (t * x).exp(),
        MellinIdentity::Average => z.exp() - Complex64::new((t * x).exp_m1() / (t * x), 0.0),
    };
    Ok(MellinResidual { quadrature, closed_form, residual: (quadrature - closed_form).norm(), tail_bound, majorant_constant })
}

/// `e^{te^{iθ}x} − e^{tx} = (2π)⁻¹ ∫ [e^{−γθ} − 1] Γ(−iγ) (−tx)^{iγ} dγ`,
/// composite Simpson on `[−G, G]`.
pub fn mellin_identity_residual(t: f64, theta: f64, x: f64, gamma_cut: f64, steps: usize) -> Result<MellinResidual> {
    mellin_residual(MellinIdentity::Exponential, t, theta, x, gamma_cut, steps)
}

/// `e^{te^{iθ}x} − t⁻¹∫₀ᵗ e^{sx} ds = (2π)⁻¹ ∫ [e^{−γθ} − (1+iγ)⁻¹] Γ(−iγ) (−tx)^{iγ} dγ`.
pub fn mellin_average_residual(t: f64, theta: f64, x: f64, gamma_cut: f64, steps: usize) -> Result<MellinResidual> {
    mellin_residual(MellinIdentity::Average, t, theta, x, gamma_cut, steps)
}

/// Residuals for `steps, 2·steps, 4·steps, …` (`levels` entries).
pub fn mellin_convergence(
    identity: MellinIdentity,
    t: f64,
    theta: f64,
    x: f64,
    gamma_cut: f64,
    steps: usize,
    levels: usize,
) -> Result<Vec<f64>> {
    (0..levels).map(|l| mellin_residual(identity, t, theta, x, gamma_cut, steps << l).map(|r| r.residual)).collect()
}

/// Whether each halving of the step cut the residual at least threefold,
/// ignoring levels already at the floor.
pub fn converges_at_order(residuals: &[f64], floor: f64) -> bool {
    residuals.windows(2).all(|w| w[0] <= floor || w[1] <= floor || w[0] >= 3.0 * w[1])
}

/// The `ε`-truncated kernel `Γ(−iγ)⁻¹ t^{−iγ−1}` on `(ε, t_max]`, whose
/// Laplace transform tends to `λ^{iγ}`. The piece on `(0, ε]` enters through
/// its finite part `ε^{−iγ}/(−iγ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerKernel {
    pub gamma: f64,
    pub epsilon: f64,
    pub t_max: f64,
    /// Simpson intervals in `u = ln t`.
    pub steps: usize,
}

/// Kernel for `(−A)^{iγ}`; `t_max = 60` and 16 log-steps per unit.
pub fn power_kernel(gamma: f64, epsilon: f64) -> Result<PowerKernel> {
    PowerKernel::new(gamma, epsilon, 60.0, 0)
}

impl PowerKernel {
    pub fn new(gamma: f64, epsilon: f64, t_max: f64, steps: usize) -> Result<Self> {
        if gamma == 0.0 {
            return Err(Error::GammaPole(0.0));
        }
        if !(epsilon > 0.0 && t_max > epsilon) {
            return Err(Error::InvalidParameter(format!("need 0 < ε < t_max; got ε = {epsilon}, t_max = {t_max}")));
        }
        let steps = if steps == 0 { ((t_max / epsilon).ln() * 64.0).ceil() as usize } else { steps };
        Ok(Self { gamma, epsilon, t_max, steps: steps + steps % 2 })
    }

    fn normalisation(&self) -> Complex64 {
        1.0 / complex_gamma(Complex64::new(0.0, -self.gamma)).expect("γ ≠ 0")
    }

    /// `Γ(−iγ)⁻¹ t^{−iγ−1}`.
    pub fn value(&self, t: f64) -> Complex64 {
        self.normalisation() * Complex64::from_polar(1.0 / t, -self.gamma * t.ln())
    }

    /// `∫ k(t) e^{−tλ} dt` with the endpoint correction.
    pub fn laplace(&self, lambda: f64) -> Complex64 {
        let (u0, u1) = (self.epsilon.ln(), self.t_max.ln());
        let h = (u1 - u0) / self.steps as f64;
        let terms: Vec<Complex64> = (0..=self.steps)
            .map(|k| {
                let u = u0 + k as f64 * h;
                let w = if k == 0 || k == self.steps { 1.0 } else if k % 2 == 1 { 4.0 } else { 2.0 };
                Complex64::from_polar((-lambda * u.exp()).exp() * w, -self.gamma * u)
            })
            .collect();
        let body = pairwise_sum(&terms) * (h / 3.0);
        let head = Complex64::from_polar(1.0, -self.gamma * self.epsilon.ln()) / (-I * self.gamma);
        self.normalisation() * (body + head)
    }

    /// `∫ k(t) T_t dt` on the generator.
    pub fn transfer(&self, dec: &SpectralDecomposition) -> Result<nalgebra::DMatrix<Complex64>> {
        dec.borel_calculus(|x| self.laplace(x))
    }
}
