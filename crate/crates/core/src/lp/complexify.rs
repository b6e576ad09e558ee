use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::WeightedLpSpace;
use crate::ascent::{ascent_norm, AscentConfig, GroupedNorm};

/// Norm estimates of a real matrix over real and over complex vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexificationEstimate {
    pub real_norm_estimate: f64,
    pub complex_norm_estimate: f64,
}

impl ComplexificationEstimate {
    pub fn gap(&self) -> f64 {
        (self.real_norm_estimate - self.complex_norm_estimate).abs()
    }
}

/// Runs two independent multi-start optimisers, one restricted to real
/// vectors, for `‖T‖` on `space` (entries of any sign).
pub fn complexification_check(
    t: &DMatrix<f64>,
    space: &WeightedLpSpace,
    seed: u64,
) -> ComplexificationEstimate {
    let m = t.map(|x| Complex64::new(x, 0.0));
    let norm = GroupedNorm::lp(space.p(), space.weights().to_vec());
    let base = AscentConfig { seed, starts: 64, max_iter: 5000, tol: 1e-15, real: false };
    let real = ascent_norm(&m, &norm, &norm, &AscentConfig { real: true, ..base }, &[]);
    let complex = ascent_norm(
        &m,
        &norm,
        &norm,
        &AscentConfig { seed: seed ^ 0x5eed_c0de, ..base },
        &[],
    );
    ComplexificationEstimate {
        real_norm_estimate: real.value,
        complex_norm_estimate: complex.value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_diagonal() {
        let s = WeightedLpSpace::unweighted(2, 4.0).unwrap();
        let e = complexification_check(&DMatrix::identity(2, 2), &s, 1);
        assert!((e.real_norm_estimate - 1.0).abs() < 1e-12);
        assert!((e.complex_norm_estimate - 1.0).abs() < 1e-12);
        let d = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 3.0]);
        let e = complexification_check(&d, &s, 1);
        assert!((e.real_norm_estimate - 3.0).abs() < 1e-10);
        assert!((e.complex_norm_estimate - 3.0).abs() < 1e-10);
    }

    #[test]
    fn random_signed_matrix_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = DMatrix::from_fn(3, 3, |_, _| rng.random_range(-1.0..1.0));
        let s = WeightedLpSpace::unweighted(3, 3.0).unwrap();
        let e = complexification_check(&t, &s, 5);
        assert!(e.gap() < 1e-6, "{e:?}");
    }
}
