//! JSON documents for matrices, generators and kernels.
//!
//! Complex numbers are written as `[re, im]`; a bare number is read as a
//! real entry.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::calculus::SubmarkovianGenerator;
use crate::lp::{PositiveOperator, SignedOperator, WeightedLpSpace};
use crate::transference::TimeKernel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn value(self) -> Complex64 {
        match self {
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }

    pub fn is_real(self) -> bool {
        match self {
            Entry::Real(_) => true,
            Entry::Complex([_, im]) => im == 0.0,
        }
    }
}

impl From<Complex64> for Entry {
    fn from(z: Complex64) -> Self {
        if z.im == 0.0 {
            Entry::Real(z.re)
        } else {
            Entry::Complex([z.re, z.im])
        }
    }
}

/// `{n, p, weights, entries}` with row-major entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub n: usize,
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    pub entries: Vec<Vec<Entry>>,
}

impl MatrixDocument {
    pub fn from_real(p: f64, weights: Option<Vec<f64>>, m: &DMatrix<f64>) -> Self {
        Self {
            n: m.nrows(),
            p,
            weights,
            entries: m.row_iter().map(|r| r.iter().map(|&x| Entry::Real(x)).collect()).collect(),
        }
    }

    pub fn from_complex(p: f64, weights: Option<Vec<f64>>, m: &DMatrix<Complex64>) -> Self {
        Self {
            n: m.nrows(),
            p,
            weights,
            entries: m.row_iter().map(|r| r.iter().map(|&z| Entry::from(z)).collect()).collect(),
        }
    }

    pub fn space(&self) -> Result<WeightedLpSpace> {
        match &self.weights {
            Some(w) => {
                if w.len() != self.n {
                    return Err(Error::DimensionMismatch { expected: self.n, found: w.len() });
                }
                WeightedLpSpace::new(self.p, w.clone())
            }
            None => WeightedLpSpace::unweighted(self.n, self.p),
        }
    }

    pub fn is_real(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.is_real())
    }

    pub fn complex_entries(&self) -> Result<DMatrix<Complex64>> {
        if self.entries.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: self.entries.len() });
        }
        if let Some(r) = self.entries.iter().find(|r| r.len() != self.n) {
            return Err(Error::DimensionMismatch { expected: self.n, found: r.len() });
        }
        Ok(DMatrix::from_fn(self.n, self.n, |i, j| self.entries[i][j].value()))
    }

    pub fn real_entries(&self) -> Result<DMatrix<f64>> {
        if !self.is_real() {
            return Err(Error::Input("matrix has complex entries".into()));
        }
        Ok(self.complex_entries()?.map(|z| z.re))
    }

    pub fn to_positive(&self) -> Result<PositiveOperator> {
        PositiveOperator::new(self.space()?, self.real_entries()?)
    }

    pub fn to_signed(&self) -> Result<SignedOperator> {
        SignedOperator::new(self.space()?, self.complex_entries()?)
    }
}

/// `{n, mu, A}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorDocument {
    pub n: usize,
    pub mu: Vec<f64>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(default)]
    pub conservative: bool,
}

impl GeneratorDocument {
    pub fn from_generator(g: &SubmarkovianGenerator) -> Self {
        Self {
            n: g.n(),
            mu: g.mu.clone(),
            a: g.a.row_iter().map(|r| r.iter().copied().collect()).collect(),
            conservative: g.conservative,
        }
    }

    pub fn to_generator(&self) -> Result<SubmarkovianGenerator> {
        if self.mu.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: self.mu.len() });
        }
        if self.a.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: self.a.len() });
        }
        if let Some(r) = self.a.iter().find(|r| r.len() != self.n) {
            return Err(Error::DimensionMismatch { expected: self.n, found: r.len() });
        }
        let a = DMatrix::from_fn(self.n, self.n, |i, j| self.a[i][j]);
        if self.conservative {
            SubmarkovianGenerator::conservative(self.mu.clone(), a)
        } else {
            SubmarkovianGenerator::new(self.mu.clone(), a)
        }
    }
}

/// `{h, t0, samples}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelDocument {
    pub h: f64,
    #[serde(default)]
    pub t0: f64,
    pub samples: Vec<Entry>,
}

impl KernelDocument {
    pub fn from_kernel(k: &TimeKernel) -> Self {
        Self { h: k.h, t0: k.t0, samples: k.samples.iter().map(|&z| Entry::from(z)).collect() }
    }

    pub fn to_kernel(&self) -> Result<TimeKernel> {
        TimeKernel::new(self.h, self.t0, self.samples.iter().map(|e| e.value()).collect())
    }
}

/// Reads a JSON document; parse failures become input errors.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let text = r#"{"n": 2, "p": 1.5, "entries": [[0.5, [0.1, -0.2]], [0, 0.25]]}"#;
        let doc: MatrixDocument = serde_json::from_str(text).unwrap();
        assert!(!doc.is_real());
        let m = doc.complex_entries().unwrap();
        assert_eq!(m[(0, 1)], Complex64::new(0.1, -0.2));
        let back: MatrixDocument = serde_json::from_str(&serde_json::to_string(&MatrixDocument::from_complex(1.5, None, &m)).unwrap()).unwrap();
        assert_eq!(back, doc);
        assert!(doc.to_signed().is_ok());
        assert!(matches!(doc.to_positive(), Err(Error::Input(_))));
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let doc: MatrixDocument = serde_json::from_str(r#"{"n": 2, "p": 2, "entries": [[1, 0], [0]]}"#).unwrap();
        assert!(matches!(doc.complex_entries(), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn generator_document() {
        let doc: GeneratorDocument = serde_json::from_str(r#"{"n": 2, "mu": [1, 1], "A": [[-2, 1], [1, -2]]}"#).unwrap();
        let g = doc.to_generator().unwrap();
        assert_eq!(GeneratorDocument::from_generator(&g), doc);
    }

    #[test]
    fn kernel_document() {
        let doc: KernelDocument = serde_json::from_str(r#"{"h": 0.5, "samples": [1, [0, 1]]}"#).unwrap();
        let k = doc.to_kernel().unwrap();
        assert_eq!(k.samples[1], Complex64::new(0.0, 1.0));
        assert_eq!(KernelDocument::from_kernel(&k), doc);
    }
}
