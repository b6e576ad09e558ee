//! Complex Gamma function.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::{Error, Result};

const LANCZOS_G: f64 = 671.0 / 128.0;
const LANCZOS_SER0: f64 = 0.999_999_999_999_997_1;
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// `ln Γ(z)` for `Re z ≥ 1/2` (principal branch of the Lanczos form).
pub fn ln_gamma_right(z: Complex64) -> Complex64 {
    let t = z + LANCZOS_G;
    let head = (z + 0.5) * t.ln() - t;
    let mut ser = Complex64::new(LANCZOS_SER0, 0.0);
    let mut y = z;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    head + (ser * SQRT_2PI / z).ln()
}

/// `Γ(z)`, with reflection `Γ(z)Γ(1−z) = π / sin(πz)` for `Re z < 1/2`.
pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::GammaPole(z.re));
    }
    if z.re < 0.5 {
        let s = (z * PI).sin();
        Ok(PI / (s * ln_gamma_right(1.0 - z).exp()))
    } else {
        Ok(ln_gamma_right(z).exp())
    }
}

/// `Γ(z)` for real `z`.
pub fn gamma(x: f64) -> Result<f64> {
    complex_gamma(Complex64::new(x, 0.0)).map(|z| z.re)
}

/// `Γ(−iγ)` for `γ ≠ 0`.
pub fn gamma_minus_i(gamma_: f64) -> Result<Complex64> {
    complex_gamma(Complex64::new(0.0, -gamma_))
}
