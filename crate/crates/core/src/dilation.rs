//! Rectangle-partition dilation `(D, S, P)` of a positive or sub-positive
//! contraction on a finite `ℓᵖ` space.
//!
//! The measure space is a disjoint union of copies `Z_0, Z_1, …, Z_K` of
//! `Z_0 = X_1 ∪ … ∪ X_n`, each `X_i` a unit square in its own local
//! coordinates. `S` sends the horizontal band `R_ij ⊂ X_i` affinely onto the
//! vertical strip `S_ij ⊂ X_j`, the rest of `X_i` to the same place in
//! `Z_1`, and `Z_m` to `Z_{m+1}`. Weighted spaces are handled on the
//! unit-weight conjugate, so vectors passed to [`DilationGeometry::apply_d`]
//! are in unit-weight coordinates.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::lp::{extremal_vector, PositiveOperator, SignedOperator};
use crate::{par, Error, Result};

/// Endpoints closer than this are identified.
pub const MERGE_EPS: f64 = 1e-14;

const CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RectangleCell {
    /// `0` for `Z_0`, `m` for the copy `Z_m`.
    pub copy: usize,
    /// Index `i` of the square `X_i` (within the copy).
    pub column: usize,
    /// Left end and width of the `x`-interval. Widths are kept separately
    /// so that repeated affine contractions do not lose them to rounding.
    pub x0: f64,
    pub width: f64,
    pub y0: f64,
    pub height: f64,
}

impl RectangleCell {
    /// Cell `[a, b] × [c, d]`; `None` for a cell of zero measure.
    pub fn new(copy: usize, column: usize, x: [f64; 2], y: [f64; 2]) -> Option<Self> {
        Self::from_extent(copy, column, x[0], x[1] - x[0], y[0], y[1] - y[0])
    }

    pub fn from_extent(copy: usize, column: usize, x0: f64, width: f64, y0: f64, height: f64) -> Option<Self> {
        if !(width > 0.0) || !(height > 0.0) {
            return None;
        }
        Some(Self { copy, column, x0, width, y0, height })
    }

    pub fn x_interval(&self) -> [f64; 2] {
        [self.x0, self.x0 + self.width]
    }

    pub fn y_interval(&self) -> [f64; 2] {
        [self.y0, self.y0 + self.height]
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }
}

/// Piecewise-constant function on pairwise disjoint cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionFunction {
    cells: Vec<RectangleCell>,
    values: Vec<Complex64>,
}

impl PartitionFunction {
    pub fn new(cells: Vec<RectangleCell>, values: Vec<Complex64>) -> Result<Self> {
        if cells.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: cells.len(), found: values.len() });
        }
        Ok(Self { cells, values })
    }

    pub fn zero() -> Self {
        Self { cells: Vec::new(), values: Vec::new() }
    }

    pub fn cells(&self) -> &[RectangleCell] {
        &self.cells
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// `(Σ |value|ᵖ · area)^{1/p}`.
    pub fn norm(&self, p: f64) -> f64 {
        let max = self.values.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
        if max == 0.0 {
            return 0.0;
        }
        let s: f64 = self
            .cells
            .iter()
            .zip(&self.values)
            .map(|(c, z)| (z.norm() / max).powf(p) * c.area())
            .sum();
        max * s.powf(1.0 / p)
    }

    /// Highest copy index carrying a nonzero value.
    pub fn max_copy(&self) -> Option<usize> {
        self.cells
            .iter()
            .zip(&self.values)
            .filter(|(_, v)| **v != Complex64::new(0.0, 0.0))
            .map(|(c, _)| c.copy)
            .max()
    }

    /// Integral over `X_i ⊂ Z_0` for every `i < n`.
    pub fn column_integrals(&self, n: usize) -> Vec<Complex64> {
        column_integrals(&self.cells, &self.values, 1, n)
            .into_iter()
            .collect()
    }
}

/// Explicit dilation data of a contraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationGeometry {
    pub n: usize,
    pub p: f64,
    /// Truncation depth: copies `Z_1 … Z_K`.
    pub depth: usize,
    /// Extremal vector of `|T|` and `v = |T|u` (unit-weight coordinates).
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// `ξ_ij = |T_ji| u_i / v_j`, the width of `I_ij ⊂ I_j`.
    pub xi: DMatrix<f64>,
    /// `η_ij = |T_ji| (v_j/u_i)^{p−1}`, the height of `J_ij ⊂ J_i`.
    pub eta: DMatrix<f64>,
    /// `ρ_ij = (v_j/u_i)ᵖ`.
    pub rho: DMatrix<f64>,
    /// Unimodular sign carried by the strip `S_ij`: the sign of `T_ji`.
    pub sigma: DMatrix<Complex64>,
    /// Left end of `I_ij` inside `I_j`.
    pub x_start: DMatrix<f64>,
    /// Lower end of `J_ij` inside `J_i`.
    pub y_start: DMatrix<f64>,
    /// `Σ_j η_ij`, the height of `R_i = ∪_j R_ij`.
    pub eta_total: Vec<f64>,
    /// The (unit-weight) matrix being dilated.
    pub matrix: DMatrix<Complex64>,
}

/// Builds the dilation of a sub-positive contraction (its modulus must be a
/// contraction up to `tol`).
pub fn build_dilation(op: &SignedOperator, depth: usize, tol: f64) -> Result<DilationGeometry> {
    if depth < 1 {
        return Err(Error::InvalidDepth);
    }
    let unit = op.unit_weight_conjugate();
    let modulus = unit.modulus();
    let p = modulus.p();
    let n = modulus.n();
    let ext = extremal_vector(modulus, tol)?;
    let (u, v) = (ext.u, ext.v);
    let t = modulus.entries();

    let mut xi = DMatrix::zeros(n, n);
    let mut eta = DMatrix::zeros(n, n);
    let mut rho = DMatrix::zeros(n, n);
    let mut sigma = DMatrix::from_element(n, n, Complex64::new(1.0, 0.0));
    for i in 0..n {
        for j in 0..n {
            let tji = t[(j, i)];
            sigma[(i, j)] = unit.sign(j, i);
            if v[j] > 0.0 {
                let r = v[j] / u[i];
                rho[(i, j)] = r.powf(p);
                if tji > 0.0 {
                    xi[(i, j)] = tji * u[i] / v[j];
                    eta[(i, j)] = if p == 1.0 { tji } else { tji * r.powf(p - 1.0) };
                }
            }
        }
    }

    let mut x_start = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut acc = 0.0;
        for i in 0..n {
            x_start[(i, j)] = acc;
            acc += xi[(i, j)];
        }
    }
    let mut y_start = DMatrix::zeros(n, n);
    let mut eta_total = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..n {
            y_start[(i, j)] = acc;
            acc += eta[(i, j)];
        }
        if acc > 1.0 + tol {
            return Err(Error::NotContraction { norm: acc, tol });
        }
        // Rounding can push the stack a hair past the top of J_i.
        if acc > 1.0 - MERGE_EPS {
            let scale = 1.0 / acc;
            for j in 0..n {
                eta[(i, j)] *= scale.min(1.0);
                y_start[(i, j)] *= scale.min(1.0);
            }
            acc = 1.0;
        }
        eta_total[i] = acc;
    }

    Ok(DilationGeometry {
        n,
        p,
        depth,
        u,
        v,
        xi,
        eta,
        rho,
        sigma,
        x_start,
        y_start,
        eta_total,
        matrix: unit.entries().clone(),
    })
}

/// [`build_dilation`] for a positive contraction.
pub fn build_positive_dilation(op: &PositiveOperator, depth: usize, tol: f64) -> Result<DilationGeometry> {
    let signed = SignedOperator::from_real(op.space().clone(), op.entries())?;
    build_dilation(&signed, depth, tol)
}

impl DilationGeometry {
    /// Set of `j` with `v_j ≠ 0`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| self.v[j] > 0.0).collect()
    }

    /// `max_{j∈J} |Σ_i ξ_ij − 1|`.
    pub fn xi_column_defect(&self) -> f64 {
        self.support()
            .into_iter()
            .map(|j| (self.xi.column(j).sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// `max_i (Σ_j η_ij − 1)`, positive only on a violation.
    pub fn eta_row_excess(&self) -> f64 {
        (0..self.n)
            .map(|i| self.eta.row(i).sum() - 1.0)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max |ρ_ij ξ_ij − η_ij|` over `ξ_ij > 0`.
    pub fn rho_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if self.xi[(i, j)] > 0.0 {
                    d = d.max((self.rho[(i, j)] * self.xi[(i, j)] - self.eta[(i, j)]).abs());
                }
            }
        }
        d
    }

    /// `Dα = Σ αᵢ χ_{X_i}`.
    pub fn apply_d(&self, alpha: &[Complex64]) -> Result<PartitionFunction> {
        if alpha.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: alpha.len() });
        }
        Ok(PartitionFunction {
            cells: self.columns(),
            values: alpha.to_vec(),
        })
    }

    /// `D` on a real vector.
    pub fn apply_d_real(&self, alpha: &[f64]) -> Result<PartitionFunction> {
        self.apply_d(&alpha.iter().map(|&a| Complex64::new(a, 0.0)).collect::<Vec<_>>())
    }

    fn columns(&self) -> Vec<RectangleCell> {
        (0..self.n)
            .map(|i| RectangleCell { copy: 0, column: i, x0: 0.0, width: 1.0, y0: 0.0, height: 1.0 })
            .collect()
    }

    /// `SF(x, y) = σ ρ^{1/p} F(τ⁻¹(x, y))`.
    pub fn apply_s(&self, f: &PartitionFunction) -> Result<PartitionFunction> {
        let (cells, values) = self.push_forward(&f.cells, &f.values, 1)?;
        Ok(PartitionFunction { cells, values })
    }

    /// `S^k F`.
    pub fn apply_s_power(&self, f: &PartitionFunction, k: usize) -> Result<PartitionFunction> {
        let mut g = f.clone();
        for _ in 0..k {
            g = self.apply_s(&g)?;
        }
        Ok(g)
    }

    /// Averages over each `X_i`; zero on every `Z_m`.
    pub fn apply_p(&self, f: &PartitionFunction) -> PartitionFunction {
        PartitionFunction {
            cells: self.columns(),
            values: f.column_integrals(self.n),
        }
    }

    /// Applies `S` to `width` functions sharing one cell list; `values` is
    /// cell-major (`values[c * width + t]`).
    pub(crate) fn push_forward(
        &self,
        cells: &[RectangleCell],
        values: &[Complex64],
        width: usize,
    ) -> Result<(Vec<RectangleCell>, Vec<Complex64>)> {
        if let Some(c) = cells.iter().find(|c| c.copy >= self.depth) {
            return Err(Error::TruncationOverflow(c.copy));
        }
        let chunks: Vec<(usize, usize)> = (0..cells.len())
            .step_by(CHUNK)
            .map(|s| (s, (s + CHUNK).min(cells.len())))
            .collect();
        let parts = par::map_slice(&chunks, |&(s, e)| {
            let mut out_c = Vec::with_capacity((e - s) * 2);
            let mut out_v = Vec::with_capacity((e - s) * 2 * width);
            for k in s..e {
                self.push_cell(&cells[k], &values[k * width..(k + 1) * width], &mut out_c, &mut out_v);
            }
            (out_c, out_v)
        });
        let total: usize = parts.iter().map(|(c, _)| c.len()).sum();
        let mut out_c = Vec::with_capacity(total);
        let mut out_v = Vec::with_capacity(total * width);
        for (c, v) in parts {
            out_c.extend(c);
            out_v.extend(v);
        }
        Ok((out_c, out_v))
    }

    fn push_cell(
        &self,
        cell: &RectangleCell,
        vals: &[Complex64],
        out_c: &mut Vec<RectangleCell>,
        out_v: &mut Vec<Complex64>,
    ) {
        if cell.copy > 0 {
            out_c.push(RectangleCell { copy: cell.copy + 1, ..*cell });
            out_v.extend_from_slice(vals);
            return;
        }
        let i = cell.column;
        let [c, d] = cell.y_interval();
        for j in 0..self.n {
            let h = self.eta[(i, j)];
            if h == 0.0 {
                continue;
            }
            let lo = self.y_start[(i, j)];
            let hi = lo + h;
            // Band endpoints within MERGE_EPS of the cell's are identified.
            let (y0, clip_lo) = if (c - lo).abs() <= MERGE_EPS || c < lo { (lo, true) } else { (c, false) };
            let (y1, clip_hi) = if (d - hi).abs() <= MERGE_EPS || d > hi { (hi, true) } else { (d, false) };
            if y1 - y0 <= MERGE_EPS {
                continue;
            }
            let ny0 = if clip_lo { 0.0 } else { (y0 - lo) / h };
            let height = match (clip_lo, clip_hi) {
                (true, true) => 1.0,
                (false, false) => cell.height / h,
                (false, true) => 1.0 - ny0,
                (true, false) => (y1 - lo) / h,
            };
            let w = self.xi[(i, j)];
            let x0 = self.x_start[(i, j)] + w * cell.x0;
            let Some(img) = RectangleCell::from_extent(0, j, x0, w * cell.width, ny0, height) else {
                continue;
            };
            let factor = self.sigma[(i, j)] * (self.v[j] / self.u[i]);
            out_c.push(img);
            out_v.extend(vals.iter().map(|z| z * factor));
        }
        let top = self.eta_total[i];
        let y0 = if (c - top).abs() <= MERGE_EPS || c < top { top } else { c };
        if d - y0 > MERGE_EPS {
            let height = if y0 == c { cell.height } else { d - y0 };
            out_c.push(RectangleCell { copy: 1, y0, height, ..*cell });
            out_v.extend_from_slice(vals);
        }
    }
}

/// `∫_{X_i} F` for each column and each of `width` functions (column-major
/// output, `out[i * width + t]`).
fn column_integrals(cells: &[RectangleCell], values: &[Complex64], width: usize, n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * width];
    for (k, c) in cells.iter().enumerate() {
        if c.copy != 0 || c.column >= n {
            continue;
        }
        let a = c.area();
        for t in 0..width {
            out[c.column * width + t] += values[k * width + t] * a;
        }
    }
    out
}

/// Result of a dilation identity run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilationReport {
    /// `max_k max_α ‖P S^k Dα − D T^k α‖_p`.
    pub max_error: f64,
    /// Maximum error for each `k = 0…K`.
    pub per_k_errors: Vec<f64>,
    /// Number of cells of `S^k Dα` for each `k`.
    pub cell_counts: Vec<usize>,
}

/// Checks `P S^k D α = D T^k α` for `k = 0…K` on random nonnegative `α`.
pub fn verify_dilation(
    op: &PositiveOperator,
    depth: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<DilationReport> {
    let geom = build_positive_dilation(op, depth, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphas: Vec<Vec<Complex64>> = (0..trials)
        .map(|_| (0..geom.n).map(|_| Complex64::new(rng.random_range(0.0..1.0), 0.0)).collect())
        .collect();
    run_identity(&geom, &alphas)
}

/// Signed version with complex `α`.
pub fn verify_subpositive(
    op: &SignedOperator,
    depth: usize,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<DilationReport> {
    let geom = build_dilation(op, depth, tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphas: Vec<Vec<Complex64>> = (0..trials)
        .map(|_| {
            (0..geom.n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    run_identity(&geom, &alphas)
}

/// Runs the identity for given vectors; all vectors share one cell list.
pub fn run_identity(geom: &DilationGeometry, alphas: &[Vec<Complex64>]) -> Result<DilationReport> {
    let n = geom.n;
    let width = alphas.len();
    let mut cells = geom.columns();
    let mut values = vec![Complex64::new(0.0, 0.0); n * width];
    for (t, a) in alphas.iter().enumerate() {
        if a.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: a.len() });
        }
        for i in 0..n {
            values[i * width + t] = a[i];
        }
    }
    let mut powers: Vec<Vec<Complex64>> = alphas.to_vec();
    let mut per_k_errors = Vec::with_capacity(geom.depth + 1);
    let mut cell_counts = Vec::with_capacity(geom.depth + 1);
    for k in 0..=geom.depth {
        if k > 0 {
            let (c, v) = geom.push_forward(&cells, &values, width)?;
            cells = c;
            values = v;
            powers = powers.iter().map(|a| mat_vec(&geom.matrix, a)).collect();
        }
        let avg = column_integrals(&cells, &values, width, n);
        let err = (0..width)
            .map(|t| {
                let diff: Vec<f64> = (0..n).map(|i| (avg[i * width + t] - powers[t][i]).norm()).collect();
                lp_abs(&diff, geom.p)
            })
            .fold(0.0, f64::max);
        per_k_errors.push(err);
        cell_counts.push(cells.len());
    }
    let max_error = per_k_errors.iter().copied().fold(0.0, f64::max);
    Ok(DilationReport { max_error, per_k_errors, cell_counts })
}

fn mat_vec(m: &DMatrix<Complex64>, x: &[Complex64]) -> Vec<Complex64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * x[j]).sum())
        .collect()
}

fn lp_abs(v: &[f64], p: f64) -> f64 {
    let max = v.iter().fold(0.0_f64, |a, &b| a.max(b));
    if max == 0.0 {
        return 0.0;
    }
    max * v.iter().map(|x| (x / max).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Whether, within every column of every copy, cells whose `x`-intervals
/// overlap carry equal values (to `1e-12`).
pub fn x_dependence_check(f: &PartitionFunction) -> bool {
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by(|&a, &b| {
        let (ca, cb) = (&f.cells[a], &f.cells[b]);
        (ca.copy, ca.column)
            .cmp(&(cb.copy, cb.column))
            .then(ca.x0.total_cmp(&cb.x0))
    });
    // Active cells: (right end, width, value).
    let mut active: Vec<(f64, f64, Complex64)> = Vec::new();
    let mut group = None;
    for k in order {
        let c = &f.cells[k];
        if group != Some((c.copy, c.column)) {
            group = Some((c.copy, c.column));
            active.clear();
        }
        // Touching intervals differ by rounding only; count an overlap when it
        // exceeds a small fraction of the thinner cell.
        active.retain(|&(end, w, _)| end - c.x0 > 1e-9 * w.min(c.width));
        let v = f.values[k];
        if active.iter().any(|&(_, _, w)| (w - v).norm() > 1e-12) {
            return false;
        }
        active.push((c.x0 + c.width, c.width, v));
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::WeightedLpSpace;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn positive(p: f64, rows: &[Vec<f64>]) -> PositiveOperator {
        PositiveOperator::from_rows(p, rows).unwrap()
    }

    #[test]
    fn identity_geometry() {
        let g = build_positive_dilation(&PositiveOperator::identity(2, 2.0).unwrap(), 3, 1e-10).unwrap();
        assert_eq!(g.xi, DMatrix::identity(2, 2));
        assert_eq!(g.eta, DMatrix::identity(2, 2));
        assert_eq!(g.rho[(0, 0)], 1.0);
        assert_eq!(g.rho[(1, 1)], 1.0);
        let f = g.apply_d_real(&[0.3, 2.0]).unwrap();
        assert_eq!(g.apply_s(&f).unwrap(), f);
    }

    #[test]
    fn swap_geometry() {
        let t = positive(3.0, &[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let g = build_positive_dilation(&t, 2, 1e-10).unwrap();
        assert!((g.u[0] - g.u[1]).abs() < 1e-12);
        for (i, j) in [(0, 1), (1, 0)] {
            assert!((g.xi[(i, j)] - 1.0).abs() < 1e-12);
            assert!((g.eta[(i, j)] - 1.0).abs() < 1e-12);
            assert!((g.rho[(i, j)] - 1.0).abs() < 1e-12);
        }
        assert_eq!(g.xi[(0, 0)], 0.0);
    }

    #[test]
    fn zero_row_drops_strips() {
        let t = positive(2.0, &[vec![0.5, 0.2], vec![0.0, 0.0]]);
        let g = build_positive_dilation(&t, 2, 1e-10).unwrap();
        assert_eq!(g.v[1], 0.0);
        assert_eq!(g.support(), vec![0]);
        assert_eq!(g.xi.column(1).sum(), 0.0);
        let s = g.apply_s(&g.apply_d_real(&[1.0, 1.0]).unwrap()).unwrap();
        assert!(s.cells().iter().all(|c| !(c.copy == 0 && c.column == 1)));
    }

    #[test]
    fn d_and_p_basics() {
        let t = positive(2.0, &[vec![0.5, 0.5], vec![0.5, 0.5]]);
        let g = build_positive_dilation(&t, 3, 1e-10).unwrap();
        let e1 = g.apply_d_real(&[1.0, 0.0]).unwrap();
        assert_eq!(e1.values(), &[c(1.0), c(0.0)]);
        assert_eq!(g.apply_d_real(&[0.0, 0.0]).unwrap().norm(2.0), 0.0);
        assert!((g.apply_d_real(&[3.0, 4.0]).unwrap().norm(2.0) - 5.0).abs() < 1e-15);

        assert_eq!(g.apply_p(&e1), e1);
        let z1 = PartitionFunction::new(
            vec![RectangleCell::new(1, 0, [0.0, 1.0], [0.0, 1.0]).unwrap()],
            vec![c(5.0)],
        )
        .unwrap();
        assert_eq!(g.apply_p(&z1).values(), &[c(0.0), c(0.0)]);
        let top = PartitionFunction::new(
            vec![RectangleCell::new(0, 0, [0.0, 1.0], [0.5, 1.0]).unwrap()],
            vec![c(1.0)],
        )
        .unwrap();
        assert_eq!(g.apply_p(&top).values(), &[c(0.5), c(0.0)]);
    }

    #[test]
    fn strip_maps_to_strip() {
        let t = positive(1.5, &[vec![0.2, 0.3], vec![0.5, 0.1]]);
        let g = build_positive_dilation(&t, 2, 1e-10).unwrap();
        let (i, j) = (0, 1);
        let lo = g.y_start[(i, j)];
        let r = RectangleCell::new(0, i, [0.0, 1.0], [lo, lo + g.eta[(i, j)]]).unwrap();
        let f = PartitionFunction::new(vec![r], vec![c(1.0)]).unwrap();
        let s = g.apply_s(&f).unwrap();
        assert_eq!(s.len(), 1);
        let img = s.cells()[0];
        assert_eq!((img.copy, img.column), (0, j));
        assert!((img.width - g.xi[(i, j)]).abs() < 1e-14);
        assert!((s.values()[0].re - g.rho[(i, j)].powf(1.0 / 1.5)).abs() < 1e-14);
        assert!((s.norm(1.5) - f.norm(1.5)).abs() < 1e-14);
    }

    #[test]
    fn identity_dilation_is_exact() {
        let r = verify_dilation(&PositiveOperator::identity(3, 2.0).unwrap(), 5, 4, 1, 1e-10).unwrap();
        assert_eq!(r.max_error, 0.0);
    }

    #[test]
    fn swap_dilation() {
        let t = positive(3.0, &[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let r = verify_dilation(&t, 4, 5, 2, 1e-10).unwrap();
        assert!(r.max_error < 1e-12);
    }

    #[test]
    fn negative_and_imaginary_identity() {
        for (z, name) in [(c(-1.0), "minus"), (Complex64::new(0.0, 1.0), "i")] {
            let space = WeightedLpSpace::unweighted(2, 2.0).unwrap();
            let m = DMatrix::from_diagonal_element(2, 2, z);
            let op = SignedOperator::new(space, m).unwrap();
            let g = build_dilation(&op, 4, 1e-10).unwrap();
            let alpha = [Complex64::new(0.3, -0.2), c(1.0)];
            let mut f = g.apply_d(&alpha).unwrap();
            for k in 1..4 {
                f = g.apply_s(&f).unwrap();
                let got = g.apply_p(&f);
                for i in 0..2 {
                    let want = alpha[i] * z.powu(k);
                    assert!((got.values()[i] - want).norm() < 1e-14, "{name} k={k}");
                }
            }
        }
    }

    #[test]
    fn truncation_overflow_is_reported() {
        let g = build_positive_dilation(&positive(2.0, &[vec![0.5]]), 1, 1e-10).unwrap();
        let f = g.apply_s(&g.apply_d_real(&[1.0]).unwrap()).unwrap();
        assert_eq!(f.max_copy(), Some(1));
        assert!(matches!(g.apply_s(&f), Err(Error::TruncationOverflow(1))));
    }

    #[test]
    fn rejects_bad_inputs() {
        let t = positive(2.0, &[vec![1.5, 0.0], vec![0.0, 0.2]]);
        assert!(matches!(build_positive_dilation(&t, 2, 1e-10), Err(Error::NotContraction { .. })));
        let id = PositiveOperator::identity(2, 2.0).unwrap();
        assert!(matches!(build_positive_dilation(&id, 0, 1e-10), Err(Error::InvalidDepth)));
    }

    #[test]
    fn x_dependence_is_preserved() {
        let t = positive(2.0, &[vec![0.2, 0.3, 0.1], vec![0.4, 0.1, 0.2], vec![0.1, 0.5, 0.3]]);
        let g = build_positive_dilation(&t, 4, 1e-10).unwrap();
        let mut f = g.apply_d_real(&[0.3, 0.9, 0.5]).unwrap();
        assert!(x_dependence_check(&f));
        for _ in 0..3 {
            f = g.apply_s(&f).unwrap();
            assert!(x_dependence_check(&f));
        }
        let bad = PartitionFunction::new(
            vec![
                RectangleCell::new(0, 0, [0.0, 1.0], [0.0, 0.5]).unwrap(),
                RectangleCell::new(0, 0, [0.0, 1.0], [0.5, 1.0]).unwrap(),
            ],
            vec![c(1.0), c(2.0)],
        )
        .unwrap();
        assert!(!x_dependence_check(&bad));
    }
}
