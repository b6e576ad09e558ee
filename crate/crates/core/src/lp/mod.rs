//! Weighted `ℓᵖ` spaces and positive operators on them.
//!
//! A space `ℓᵖₙ(ω)` is reduced to unit weights by the isometry
//! `m_ω : α ↦ (αᵢ ωᵢ^{1/p})`; the `M`-map machinery ([`m_map`],
//! [`positive_norm`], [`extremal_vector`]) works on the conjugated operator
//! `T′ = m_ω T m_ω⁻¹`.

mod complexify;
mod extremal;
mod norm;

pub use complexify::{complexification_check, ComplexificationEstimate};
pub use extremal::{extremal_vector, ExtremalVector};
pub use norm::{positive_norm, positive_norm_with, NormCertificate, PowerIteration};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Finite-dimensional `ℓᵖ` space with strictly positive weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedLpSpace {
    p: f64,
    weights: Vec<f64>,
}

impl WeightedLpSpace {
    pub fn new(p: f64, weights: Vec<f64>) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::InvalidExponent(p));
        }
        if weights.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if let Some((index, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(**w > 0.0) || !w.is_finite())
        {
            return Err(Error::NonPositiveWeight { index, value });
        }
        Ok(Self { p, weights })
    }

    pub fn unweighted(n: usize, p: f64) -> Result<Self> {
        Self::new(p, vec![1.0; n])
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_unweighted(&self) -> bool {
        self.weights.iter().all(|&w| w == 1.0)
    }

    /// Conjugate exponent `q` with `1/p + 1/q = 1` (`∞` for `p = 1`).
    pub fn conjugate(&self) -> f64 {
        conjugate_exponent(self.p)
    }

    /// Same weights, different exponent.
    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(p, self.weights.clone())
    }

    /// `(Σ |vᵢ|ᵖ ωᵢ)^{1/p}`.
    pub fn norm(&self, v: &[f64]) -> f64 {
        debug_assert_eq!(v.len(), self.n());
        weighted_norm(self.p, &self.weights, v.iter().map(|x| x.abs()))
    }

    pub fn norm_complex(&self, v: &[Complex64]) -> f64 {
        debug_assert_eq!(v.len(), self.n());
        weighted_norm(self.p, &self.weights, v.iter().map(|x| x.norm()))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: len });
        }
        Ok(())
    }

    /// `m_ω`: weighted coordinates to unit-weight coordinates.
    pub fn to_unit(&self, v: &[f64]) -> Vec<f64> {
        v.iter()
            .zip(&self.weights)
            .map(|(x, w)| x * w.powf(1.0 / self.p))
            .collect()
    }

    /// `m_ω⁻¹`.
    pub fn from_unit(&self, v: &[f64]) -> Vec<f64> {
        v.iter()
            .zip(&self.weights)
            .map(|(x, w)| x / w.powf(1.0 / self.p))
            .collect()
    }
}

pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

fn weighted_norm(p: f64, weights: &[f64], abs: impl Iterator<Item = f64>) -> f64 {
    let scale = abs
        .zip(weights)
        .map(|(a, &w)| (a, w))
        .collect::<Vec<_>>();
    // Scale by the largest modulus so |v|^p neither overflows nor underflows.
    let max = scale.iter().fold(0.0_f64, |m, &(a, _)| m.max(a));
    if max == 0.0 {
        return 0.0;
    }
    let sum: f64 = scale.iter().map(|&(a, w)| (a / max).powf(p) * w).sum();
    max * sum.powf(1.0 / p)
}

/// `(Σ |vᵢ|ᵖ ωᵢ)^{1/p}` for a vector of `space`.
pub fn lp_norm(space: &WeightedLpSpace, v: &LatticeVector) -> f64 {
    space.norm(v.entries())
}

/// Real element of a vector lattice `ℓᵖₙ(ω)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeVector {
    entries: Vec<f64>,
}

impl LatticeVector {
    pub fn new(entries: Vec<f64>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<f64> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|&x| x >= 0.0)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: other.len() });
        }
        Ok(Self::new(
            self.entries.iter().zip(&other.entries).map(|(&a, &b)| f(a, b)).collect(),
        ))
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::new(self.entries.iter().map(|&x| f(x)).collect())
    }

    /// `f ∨ g`.
    pub fn sup(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, f64::max)
    }

    /// `f ∧ g`.
    pub fn inf(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, f64::min)
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    /// `f⁺ = f ∨ 0`.
    pub fn pos_part(&self) -> Self {
        self.map(|x| x.max(0.0))
    }

    /// `f⁻ = (−f) ∨ 0`.
    pub fn neg_part(&self) -> Self {
        self.map(|x| (-x).max(0.0))
    }
}

impl From<Vec<f64>> for LatticeVector {
    fn from(entries: Vec<f64>) -> Self {
        Self::new(entries)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeParts {
    pub sup: LatticeVector,
    pub inf: LatticeVector,
    pub abs: LatticeVector,
    pub pos_part: LatticeVector,
    pub neg_part: LatticeVector,
}

/// All lattice operations of `f` (and `f ∨ g`, `f ∧ g`) at once.
pub fn lattice_ops(
    space: &WeightedLpSpace,
    f: &LatticeVector,
    g: &LatticeVector,
) -> Result<LatticeParts> {
    space.check_len(f.len())?;
    space.check_len(g.len())?;
    Ok(LatticeParts {
        sup: f.sup(g)?,
        inf: f.inf(g)?,
        abs: f.abs(),
        pos_part: f.pos_part(),
        neg_part: f.neg_part(),
    })
}

/// `α* = (α₁^{p−1}, …, αₙ^{p−1})`; for `p = 1` the indicator of `supp α`.
pub fn star_map(alpha: &[f64], p: f64) -> Result<Vec<f64>> {
    if let Some((index, &value)) = alpha.iter().enumerate().find(|(_, x)| **x < 0.0) {
        return Err(Error::NegativeCoordinate { index, value });
    }
    Ok(star_unchecked(alpha, p))
}

pub(crate) fn star_unchecked(alpha: &[f64], p: f64) -> Vec<f64> {
    if p == 1.0 {
        alpha.iter().map(|&a| if a != 0.0 { 1.0 } else { 0.0 }).collect()
    } else {
        alpha.iter().map(|&a| a.powf(p - 1.0)).collect()
    }
}

/// `Mα = Tᵀ (Tα)*` for an operator on unit-weight `ℓᵖₙ`.
///
/// Weighted operators must be conjugated first
/// ([`PositiveOperator::unit_weight_conjugate`]).
pub fn m_map(op: &PositiveOperator, alpha: &[f64]) -> Result<Vec<f64>> {
    op.space.check_len(alpha.len())?;
    if let Some((index, &value)) = alpha.iter().enumerate().find(|(_, x)| **x < 0.0) {
        return Err(Error::NegativeCoordinate { index, value });
    }
    Ok(m_map_matrix(&op.entries, alpha, op.space.p))
}

pub(crate) fn m_map_matrix(t: &DMatrix<f64>, alpha: &[f64], p: f64) -> Vec<f64> {
    let y = mat_vec(t, alpha);
    let star = star_unchecked(&y, p);
    mat_t_vec(t, &star)
}

pub(crate) fn mat_vec(t: &DMatrix<f64>, x: &[f64]) -> Vec<f64> {
    (0..t.nrows())
        .map(|i| (0..t.ncols()).map(|j| t[(i, j)] * x[j]).sum())
        .collect()
}

pub(crate) fn mat_t_vec(t: &DMatrix<f64>, y: &[f64]) -> Vec<f64> {
    (0..t.ncols())
        .map(|j| (0..t.nrows()).map(|i| t[(i, j)] * y[i]).sum())
        .collect()
}

/// Matrix with nonnegative entries acting on a weighted `ℓᵖ` space.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveOperator {
    space: WeightedLpSpace,
    entries: DMatrix<f64>,
}

impl PositiveOperator {
    pub fn new(space: WeightedLpSpace, entries: DMatrix<f64>) -> Result<Self> {
        let n = space.n();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: entries.nrows() });
        }
        for i in 0..n {
            for j in 0..n {
                let value = entries[(i, j)];
                if !(value >= 0.0) || !value.is_finite() {
                    return Err(Error::NegativeEntry { row: i, col: j, value });
                }
            }
        }
        Ok(Self { space, entries })
    }

    /// Unit-weight operator from row-major rows.
    pub fn from_rows(p: f64, rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let space = WeightedLpSpace::unweighted(n, p)?;
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        Self::new(space, m)
    }

    pub fn identity(n: usize, p: f64) -> Result<Self> {
        Self::new(WeightedLpSpace::unweighted(n, p)?, DMatrix::identity(n, n))
    }

    pub fn space(&self) -> &WeightedLpSpace {
        &self.space
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn p(&self) -> f64 {
        self.space.p
    }

    /// Same matrix regarded on the same weights with another exponent.
    pub fn with_p(&self, p: f64) -> Result<Self> {
        Ok(Self { space: self.space.with_p(p)?, entries: self.entries.clone() })
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.entries, x)
    }

    pub fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        mat_t_vec(&self.entries, y)
    }

    pub fn transpose(&self) -> Self {
        Self { space: self.space.clone(), entries: self.entries.transpose() }
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.entries.iter().all(|&x| x > 0.0)
    }

    /// `T′ = m_ω T m_ω⁻¹` on unit-weight `ℓᵖₙ`; an isometric copy of `T`.
    pub fn unit_weight_conjugate(&self) -> Self {
        if self.space.is_unweighted() {
            return self.clone();
        }
        let p = self.space.p;
        let w = &self.space.weights;
        let n = self.n();
        let entries =
            DMatrix::from_fn(n, n, |i, j| self.entries[(i, j)] * (w[i] / w[j]).powf(1.0 / p));
        Self {
            space: WeightedLpSpace { p, weights: vec![1.0; n] },
            entries,
        }
    }
}

/// Complex matrix viewed together with its entrywise modulus `|T|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedOperator {
    entries: DMatrix<Complex64>,
    modulus: PositiveOperator,
}

impl SignedOperator {
    pub fn new(space: WeightedLpSpace, entries: DMatrix<Complex64>) -> Result<Self> {
        let modulus = PositiveOperator::new(space, entries.map(|z| z.norm()))?;
        Ok(Self { entries, modulus })
    }

    pub fn from_real(space: WeightedLpSpace, entries: &DMatrix<f64>) -> Result<Self> {
        Self::new(space, entries.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn modulus(&self) -> &PositiveOperator {
        &self.modulus
    }

    pub fn space(&self) -> &WeightedLpSpace {
        self.modulus.space()
    }

    pub fn n(&self) -> usize {
        self.modulus.n()
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n();
        (0..n)
            .map(|i| (0..n).map(|j| self.entries[(i, j)] * x[j]).sum())
            .collect()
    }

    /// Unimodular sign of entry `(i, j)`; `1` where the entry vanishes.
    pub fn sign(&self, i: usize, j: usize) -> Complex64 {
        let z = self.entries[(i, j)];
        let r = z.norm();
        if r == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            z / r
        }
    }

    /// Conjugate to unit weights, like [`PositiveOperator::unit_weight_conjugate`].
    pub fn unit_weight_conjugate(&self) -> Self {
        let space = self.space();
        if space.is_unweighted() {
            return self.clone();
        }
        let p = space.p;
        let w = space.weights.clone();
        let n = self.n();
        let entries =
            DMatrix::from_fn(n, n, |i, j| self.entries[(i, j)] * (w[i] / w[j]).powf(1.0 / p));
        let unit = WeightedLpSpace { p, weights: vec![1.0; n] };
        Self::new(unit, entries).expect("conjugation preserves validity")
    }
}
