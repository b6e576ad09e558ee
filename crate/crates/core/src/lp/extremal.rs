use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::norm::{maximize, positive_norm_with, PowerIteration};
use super::{m_map_matrix, mat_vec, PositiveOperator};
use crate::{Error, Result};

/// Strictly positive `u` with `Mu ≤ u^{p−1}` for the unit-weight conjugate
/// of a positive contraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalVector {
    /// `u` in unit-weight coordinates.
    pub u: Vec<f64>,
    /// `v = T′u`.
    pub v: Vec<f64>,
    /// `max_i ((Mu)_i − u_i^{p−1})`, clipped at 0.
    pub defect: f64,
    /// Number of support-extension rounds.
    pub rounds: usize,
}

/// Builds `u` by repeatedly adding a norm maximiser on the current zero set.
pub fn extremal_vector(op: &PositiveOperator, tol: f64) -> Result<ExtremalVector> {
    let p = op.p();
    let cfg = PowerIteration { tol: 1e-13, ..Default::default() };
    let norm = positive_norm_with(op, &cfg);
    if norm.value > 1.0 + tol {
        return Err(Error::NotContraction { norm: norm.value, tol });
    }
    let unit = op.unit_weight_conjugate();
    let t = unit.entries();
    let n = t.nrows();

    let mut u = vec![0.0; n];
    let mut rounds = 0;
    if p == 1.0 {
        u.iter_mut().for_each(|x| *x = 1.0);
    }
    loop {
        let zero: Vec<usize> = (0..n).filter(|&i| u[i] == 0.0).collect();
        if zero.is_empty() {
            break;
        }
        rounds += 1;
        let beta = restricted_maximizer(t, p, &zero, &cfg);
        for (k, &i) in zero.iter().enumerate() {
            u[i] += beta[k];
        }
    }

    let v = mat_vec(t, &u);
    let m = m_map_matrix(t, &u, p);
    let star = super::star_unchecked(&u, p);
    let defect = m.iter().zip(&star).map(|(a, b)| a - b).fold(0.0, f64::max);
    if defect > tol {
        return Err(Error::NonConvergence(rounds));
    }
    Ok(ExtremalVector { u, v, defect, rounds })
}

/// Maximiser of `‖T_X β‖` over nonnegative unit `β` supported in `cols`,
/// in the coordinates of `cols`; `χ_X` when `T_X = 0`.
fn restricted_maximizer(t: &DMatrix<f64>, p: f64, cols: &[usize], cfg: &PowerIteration) -> Vec<f64> {
    let sub = t.select_columns(cols.iter());
    if sub.iter().all(|&x| x == 0.0) {
        return vec![1.0; cols.len()];
    }
    let mut beta = maximize(&sub, p, cfg).witness;
    let max = beta.iter().fold(0.0_f64, |a, &b| a.max(b));
    for b in beta.iter_mut() {
        if *b < 1e-13 * max {
            *b = 0.0;
        }
    }
    beta
}
