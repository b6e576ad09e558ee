use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{m_map_matrix, mat_vec, PositiveOperator, WeightedLpSpace};
use crate::par;

/// Outcome of a norm computation for a positive operator.
///
/// `witness` is a nonnegative unit vector of the original (weighted) space
/// with `‖T·witness‖ = value`; `residual` is the max-norm defect
/// `‖Mu − valueᵖ u^{p−1}‖_∞` of the fixed-point equation, measured on the
/// unit-weight conjugate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormCertificate {
    pub value: f64,
    pub witness: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Parameters of the nonlinear power iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    pub seed: u64,
    pub tol: f64,
    pub max_iter: usize,
    /// Seeded random positive starts, in addition to the uniform vector and
    /// the basis directions.
    pub random_starts: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        Self { seed: 0, tol: 1e-12, max_iter: 100_000, random_starts: 4 }
    }
}

/// `‖T‖` on `ℓᵖₙ(ω)` for a positive matrix, with a certificate.
pub fn positive_norm(op: &PositiveOperator, seed: u64, tol: f64) -> NormCertificate {
    positive_norm_with(op, &PowerIteration { seed, tol, ..Default::default() })
}

pub fn positive_norm_with(op: &PositiveOperator, cfg: &PowerIteration) -> NormCertificate {
    let space = op.space();
    let unit = op.unit_weight_conjugate();
    let p = space.p();
    let mut cert = if p == 1.0 {
        column_sum_norm(unit.entries())
    } else {
        maximize(unit.entries(), p, cfg)
    };
    cert.witness = space.from_unit(&cert.witness);
    cert
}

/// Exact `p = 1` norm: the largest column sum (witness a basis vector).
fn column_sum_norm(t: &DMatrix<f64>) -> NormCertificate {
    let (mut best, mut arg) = (f64::NEG_INFINITY, 0);
    for j in 0..t.ncols() {
        let s: f64 = t.column(j).iter().sum();
        if s > best {
            best = s;
            arg = j;
        }
    }
    let mut witness = vec![0.0; t.ncols()];
    witness[arg] = 1.0;
    NormCertificate { value: best, witness, residual: 0.0, iterations: 0, converged: true }
}

/// Multi-start maximisation of `‖Tα‖_p` over nonnegative unit `α`, unit
/// weights, `p > 1`. `t` may be rectangular (restricted operators).
pub(crate) fn maximize(t: &DMatrix<f64>, p: f64, cfg: &PowerIteration) -> NormCertificate {
    let starts = starting_vectors(t.ncols(), cfg);
    let results = par::map_slice(&starts, |s| iterate(t, p, s, cfg.tol, cfg.max_iter));
    // Fixed-order reduction: first strictly better certificate wins.
    let mut best = results[0].clone();
    for r in results.into_iter().skip(1) {
        if r.value > best.value * (1.0 + 1e-14) + 1e-300 {
            best = r;
        }
    }
    best
}

fn starting_vectors(n: usize, cfg: &PowerIteration) -> Vec<Vec<f64>> {
    let mut starts = vec![vec![1.0; n]];
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        starts.push(e);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.random_starts {
        starts.push((0..n).map(|_| rng.random_range(0.05..1.0)).collect());
    }
    starts
}

fn unit_normalize(v: &mut [f64], p: f64) -> bool {
    let space_norm = super::weighted_norm(p, &vec![1.0; v.len()], v.iter().copied());
    if !(space_norm > 0.0) || !space_norm.is_finite() {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= space_norm);
    true
}

/// One run of `α ← normalize((Mα)^{1/(p−1)})`.
pub(crate) fn iterate(
    t: &DMatrix<f64>,
    p: f64,
    start: &[f64],
    tol: f64,
    max_iter: usize,
) -> NormCertificate {
    let mut alpha = start.to_vec();
    if !unit_normalize(&mut alpha, p) {
        return NormCertificate {
            value: 0.0,
            witness: alpha,
            residual: 0.0,
            iterations: 0,
            converged: true,
        };
    }
    let mut prev = f64::NAN;
    let mut best: Option<NormCertificate> = None;
    for k in 1..=max_iter {
        let (value, m, residual) = evaluate(t, p, &alpha);
        let cert = NormCertificate {
            value,
            witness: alpha.clone(),
            residual,
            iterations: k,
            converged: false,
        };
        if best.as_ref().is_none_or(|b| value >= b.value) {
            best = Some(cert.clone());
        }
        if value == 0.0 {
            return NormCertificate { converged: true, ..cert };
        }
        let scale = value.max(1.0);
        if (value - prev).abs() <= tol * scale && residual <= tol * scale.powf(p) {
            return NormCertificate { converged: true, ..cert };
        }
        prev = value;

        // (Mα)^{1/(p−1)}, scaled by max(Mα) first so large exponents stay finite.
        let mmax = m.iter().fold(0.0_f64, |a, &b| a.max(b));
        if mmax == 0.0 {
            return NormCertificate { converged: true, ..cert };
        }
        let mut next: Vec<f64> = m.iter().map(|&x| (x / mmax).powf(1.0 / (p - 1.0))).collect();
        if !unit_normalize(&mut next, p) {
            break;
        }
        alpha = next;
    }
    best.expect("at least one iteration")
}

/// Returns `(‖Tα‖, Mα, ‖Mα − ‖Tα‖ᵖ α^{p−1}‖_∞)` for unit-norm `α`.
pub(crate) fn evaluate(t: &DMatrix<f64>, p: f64, alpha: &[f64]) -> (f64, Vec<f64>, f64) {
    let y = mat_vec(t, alpha);
    let value = super::weighted_norm(p, &vec![1.0; y.len()], y.iter().copied());
    let m = m_map_matrix(t, alpha, p);
    let lp = value.powf(p);
    let residual = m
        .iter()
        .zip(alpha)
        .map(|(&mi, &ai)| (mi - lp * ai.powf(p - 1.0)).abs())
        .fold(0.0, f64::max);
    (value, m, residual)
}

#[allow(dead_code)]
pub(crate) fn unit_space(n: usize, p: f64) -> WeightedLpSpace {
    WeightedLpSpace::unweighted(n, p).expect("valid exponent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::WeightedLpSpace;

    fn op(p: f64, rows: &[Vec<f64>]) -> PositiveOperator {
        PositiveOperator::from_rows(p, rows).unwrap()
    }

    #[test]
    fn identity_has_norm_one() {
        for p in [1.0, 1.5, 2.0, 3.0, 7.0] {
            let c = positive_norm(&PositiveOperator::identity(4, p).unwrap(), 1, 1e-12);
            assert!((c.value - 1.0).abs() < 1e-14, "p={p}: {}", c.value);
            assert!(c.residual < 1e-14);
            assert!(c.converged);
        }
    }

    #[test]
    fn averaging_matrix_has_norm_one() {
        for p in [1.0, 1.3, 2.0, 4.0] {
            let c = positive_norm(&op(p, &[vec![0.5, 0.5], vec![0.5, 0.5]]), 3, 1e-12);
            assert!((c.value - 1.0).abs() < 1e-12, "p={p}: {}", c.value);
        }
    }

    #[test]
    fn golden_ratio_example() {
        // Largest singular value of [[1,1],[0,1]]: √((3+√5)/2), the golden ratio.
        let c = positive_norm(&op(2.0, &[vec![1.0, 1.0], vec![0.0, 1.0]]), 0, 1e-13);
        let oracle = ((3.0 + 5f64.sqrt()) / 2.0).sqrt();
        assert!((c.value - oracle).abs() < 1e-9, "{} vs {oracle}", c.value);
        assert!((oracle - 1.618034).abs() < 1e-6);
    }

    #[test]
    fn golden_ratio_matches_grid_search() {
        // Brute force over the unit circle's nonnegative quadrant.
        let mut best: f64 = 0.0;
        let steps = 200_000;
        for k in 0..=steps {
            let th = std::f64::consts::FRAC_PI_2 * k as f64 / steps as f64;
            let (x, y) = (th.cos(), th.sin());
            best = best.max(((x + y).powi(2) + y * y).sqrt());
        }
        let c = positive_norm(&op(2.0, &[vec![1.0, 1.0], vec![0.0, 1.0]]), 0, 1e-13);
        assert!((c.value - best).abs() < 1e-9);
    }

    #[test]
    fn p_one_is_max_column_sum() {
        let t = op(1.0, &[vec![0.2, 0.7], vec![0.5, 0.2]]);
        let c = positive_norm(&t, 0, 1e-12);
        assert!((c.value - 0.9).abs() < 1e-15);
        assert_eq!(c.witness, vec![0.0, 1.0]);
    }

    #[test]
    fn weighted_p_one_uses_weighted_column_sums() {
        // ‖T‖ = max_j Σ_i ω_i T_ij / ω_j.
        let space = WeightedLpSpace::new(1.0, vec![2.0, 1.0]).unwrap();
        let t = DMatrix::from_row_slice(2, 2, &[0.2, 0.7, 0.5, 0.2]);
        let c = positive_norm(&PositiveOperator::new(space.clone(), t.clone()).unwrap(), 0, 1e-12);
        let sums = [(2.0 * 0.2 + 0.5) / 2.0, 2.0 * 0.7 + 0.2];
        assert!((c.value - 1.6).abs() < 1e-15);
        assert!((c.value - sums[1]).abs() < 1e-15);
        assert!((space.norm(&c.witness) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn certificate_witness_attains_value() {
        let space = WeightedLpSpace::new(3.0, vec![0.5, 2.0, 1.0]).unwrap();
        let t = DMatrix::from_row_slice(3, 3, &[0.3, 0.1, 0.4, 0.2, 0.6, 0.0, 0.1, 0.2, 0.3]);
        let o = PositiveOperator::new(space.clone(), t).unwrap();
        let c = positive_norm(&o, 9, 1e-12);
        assert!(c.converged);
        assert!(c.witness.iter().all(|&x| x >= 0.0));
        assert!((space.norm(&c.witness) - 1.0).abs() < 1e-12);
        assert!((space.norm(&o.apply(&c.witness)) - c.value).abs() <= c.residual + 1e-12);
    }

    #[test]
    fn reducible_block_matrix() {
        // Two invariant blocks; the larger block wins regardless of the start.
        let t = op(
            2.5,
            &[
                vec![0.3, 0.0, 0.0],
                vec![0.0, 0.5, 0.4],
                vec![0.0, 0.4, 0.5],
            ],
        );
        let c = positive_norm(&t, 0, 1e-12);
        // The second block is symmetric doubly-stochastic times 0.9.
        assert!((c.value - 0.9).abs() < 1e-10, "{}", c.value);
    }
}
