//! Fixed-length lossy compression: excess-distortion probability and its
//! characterization as a binary test between the source and an auxiliary
//! measure on the source alphabet.

use serde::{Deserialize, Serialize};

use crate::binary::alpha_beta;
use crate::error::{Error, Result};
use crate::measures::{FiniteMeasure, TOL};

/// Distortion matrix `d(v, w)` (rows indexed by source symbol) with a
/// maximum allowed distortion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionSpec {
    source_size: usize,
    reconstruction_size: usize,
    d: Vec<f64>,
    threshold: f64,
}

impl DistortionSpec {
    pub fn new(source_size: usize, reconstruction_size: usize, d: Vec<f64>, threshold: f64) -> Result<Self> {
        if source_size == 0 || reconstruction_size == 0 {
            return Err(Error::SizeMismatch { expected: 1, found: 0 });
        }
        if d.len() != source_size * reconstruction_size {
            return Err(Error::SizeMismatch { expected: source_size * reconstruction_size, found: d.len() });
        }
        if let Some(&value) = d.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::OutOfRange { name: "distortion", value });
        }
        if !threshold.is_finite() || threshold < 0.0 {
            return Err(Error::OutOfRange { name: "D", value: threshold });
        }
        Ok(Self { source_size, reconstruction_size, d, threshold })
    }

    pub fn from_rows(rows: &[Vec<f64>], threshold: f64) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(row) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::SizeMismatch { expected: cols, found: row.len() });
        }
        Self::new(rows.len(), cols, rows.concat(), threshold)
    }

    /// `d(v, w) = 1{v != w}` on a common alphabet.
    pub fn hamming(size: usize, threshold: f64) -> Result<Self> {
        let d = (0..size * size).map(|i| if i / size == i % size { 0.0 } else { 1.0 }).collect();
        Self::new(size, size, d, threshold)
    }

    pub fn source_size(&self) -> usize {
        self.source_size
    }

    pub fn reconstruction_size(&self) -> usize {
        self.reconstruction_size
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn get(&self, v: usize, w: usize) -> f64 {
        self.d[v * self.reconstruction_size + w]
    }

    /// Whether `v` is reproduced within `D` by some codeword.
    pub fn covered(&self, v: usize, code: &LossyCode) -> bool {
        code.codewords.iter().any(|&w| self.get(v, w) <= self.threshold)
    }

    fn check(&self, code: &LossyCode) -> Result<()> {
        match code.codewords.iter().position(|&w| w >= self.reconstruction_size) {
            Some(index) => Err(Error::SymbolOutOfRange { index }),
            None => Ok(()),
        }
    }
}

/// `M` distinct reconstruction symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LossyCode {
    codewords: Vec<usize>,
}

impl LossyCode {
    pub fn new(codewords: Vec<usize>) -> Result<Self> {
        if codewords.is_empty() {
            return Err(Error::OutOfRange { name: "M", value: 0.0 });
        }
        if let Some(index) = (1..codewords.len()).find(|&i| codewords[..i].contains(&codewords[i])) {
            return Err(Error::DuplicateCodeword { index });
        }
        Ok(Self { codewords })
    }

    pub fn codewords(&self) -> &[usize] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }
}

fn covered_mass(measure: &FiniteMeasure, spec: &DistortionSpec, code: &LossyCode) -> Result<f64> {
    measure.require_len(spec.source_size)?;
    spec.check(code)?;
    Ok((0..spec.source_size).filter(|&v| spec.covered(v, code)).map(|v| measure.get(v)).sum())
}

/// `Pr[d(V, C) > D]` under the min-distortion encoder.
pub fn excess_distortion(pv: &FiniteMeasure, spec: &DistortionSpec, code: &LossyCode) -> Result<f64> {
    pv.require_probability()?;
    measure_uncovered(pv, spec, code)
}

fn measure_uncovered(pv: &FiniteMeasure, spec: &DistortionSpec, code: &LossyCode) -> Result<f64> {
    pv.require_len(spec.source_size)?;
    spec.check(code)?;
    Ok((0..spec.source_size).filter(|&v| !spec.covered(v, code)).map(|v| pv.get(v)).sum())
}

/// `Q_V[d(V, C) <= D]`, the type-1 error of the test that accepts exactly
/// the covered source symbols.
pub fn lsc_test_budget(qv: &FiniteMeasure, spec: &DistortionSpec, code: &LossyCode) -> Result<f64> {
    covered_mass(qv, spec, code)
}

/// Uniform measure on the uncovered source symbols; `None` when the code
/// covers everything.
pub fn qv_codebook(spec: &DistortionSpec, code: &LossyCode) -> Result<Option<FiniteMeasure>> {
    spec.check(code)?;
    let indicator: Vec<f64> = (0..spec.source_size)
        .map(|v| if spec.covered(v, code) { 0.0 } else { 1.0 })
        .collect();
    if indicator.iter().all(|&x| x == 0.0) {
        return Ok(None);
    }
    FiniteMeasure::normalize(indicator).map(Some)
}

/// `max_{Q_V} α_{Q_V[d(V,C) <= D]}(P_V, Q_V)`, evaluated at its maximizer
/// [`qv_codebook`]. Requires `P_V(v) < 1` for every `v`.
pub fn theorem3_exact(pv: &FiniteMeasure, spec: &DistortionSpec, code: &LossyCode) -> Result<f64> {
    pv.require_probability()?;
    pv.require_len(spec.source_size)?;
    if let Some(index) = pv.weights().iter().position(|&w| w >= 1.0 - TOL) {
        return Err(Error::PointMass { index, value: pv.get(index) });
    }
    let Some(qc) = qv_codebook(spec, code)? else {
        return Ok(0.0);
    };
    let budget = lsc_test_budget(&qc, spec, code)?;
    Ok(alpha_beta(pv, &qc, budget)?.alpha)
}

/// `M max_w Q_V[d(V, w) <= D]`.
pub fn kostina_budget(qv: &FiniteMeasure, spec: &DistortionSpec, m: usize) -> Result<f64> {
    qv.require_len(spec.source_size)?;
    let best = (0..spec.reconstruction_size)
        .map(|w| {
            (0..spec.source_size)
                .filter(|&v| spec.get(v, w) <= spec.threshold)
                .map(|v| qv.get(v))
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    Ok(m as f64 * best)
}

/// Codebook-free converse `α_{M max_w Q_V[d(V,w) <= D]}(P_V, Q_V)`, a lower
/// bound on the excess distortion of every size-`M` code.
pub fn kostina_relaxation(pv: &FiniteMeasure, spec: &DistortionSpec, m: usize, qv: &FiniteMeasure) -> Result<f64> {
    if m == 0 {
        return Err(Error::OutOfRange { name: "M", value: 0.0 });
    }
    pv.require_probability()?;
    pv.require_len(spec.source_size)?;
    let budget = kostina_budget(qv, spec, m)?;
    Ok(alpha_beta(pv, qv, budget)?.alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_symbol() -> (FiniteMeasure, DistortionSpec) {
        (
            FiniteMeasure::probability(vec![0.4, 0.3, 0.2, 0.1]).unwrap(),
            DistortionSpec::hamming(4, 0.0).unwrap(),
        )
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= TOL
    }

    #[test]
    fn four_symbol_values() {
        let (pv, spec) = four_symbol();
        let code = LossyCode::new(vec![0, 1]).unwrap();
        assert!(close(excess_distortion(&pv, &spec, &code).unwrap(), 0.3));
        assert!(close(theorem3_exact(&pv, &spec, &code).unwrap(), 0.3));
        let u = FiniteMeasure::uniform(4).unwrap();
        assert!(close(kostina_budget(&u, &spec, 2).unwrap(), 0.5));
        assert!(close(kostina_relaxation(&pv, &spec, 2, &u).unwrap(), 0.3));
        assert!(close(lsc_test_budget(&u, &spec, &code).unwrap(), 0.5));
    }

    #[test]
    fn full_coverage_is_zero() {
        let (pv, _) = four_symbol();
        let spec = DistortionSpec::hamming(4, 1.0).unwrap();
        let code = LossyCode::new(vec![2]).unwrap();
        assert_eq!(excess_distortion(&pv, &spec, &code).unwrap(), 0.0);
        assert_eq!(theorem3_exact(&pv, &spec, &code).unwrap(), 0.0);
        assert!(qv_codebook(&spec, &code).unwrap().is_none());
    }

    #[test]
    fn codebook_measure_has_zero_budget() {
        let (_, spec) = four_symbol();
        let code = LossyCode::new(vec![3, 1]).unwrap();
        let qc = qv_codebook(&spec, &code).unwrap().unwrap();
        assert_eq!(qc.weights(), &[0.5, 0.0, 0.5, 0.0]);
        assert_eq!(lsc_test_budget(&qc, &spec, &code).unwrap(), 0.0);
    }

    #[test]
    fn no_coverage_budget_is_zero() {
        let spec = DistortionSpec::from_rows(&[vec![1.0, 2.0], vec![3.0, 1.5]], 0.5).unwrap();
        let code = LossyCode::new(vec![0, 1]).unwrap();
        let u = FiniteMeasure::uniform(2).unwrap();
        assert_eq!(lsc_test_budget(&u, &spec, &code).unwrap(), 0.0);
    }

    #[test]
    fn large_budget_gives_zero() {
        let (pv, spec) = four_symbol();
        let u = FiniteMeasure::uniform(4).unwrap();
        assert_eq!(kostina_relaxation(&pv, &spec, 4, &u).unwrap(), 0.0);
    }

    #[test]
    fn point_mass_rejected() {
        let pv = FiniteMeasure::probability(vec![1.0, 0.0, 0.0]).unwrap();
        let spec = DistortionSpec::hamming(3, 0.0).unwrap();
        let code = LossyCode::new(vec![1]).unwrap();
        assert!(matches!(theorem3_exact(&pv, &spec, &code), Err(Error::PointMass { index: 0, .. })));
    }

    #[test]
    fn invalid_inputs() {
        assert!(LossyCode::new(vec![1, 2, 1]).is_err());
        assert!(LossyCode::new(vec![]).is_err());
        assert!(DistortionSpec::new(2, 2, vec![0.0, -1.0, 0.0, 0.0], 0.0).is_err());
        assert!(DistortionSpec::new(2, 2, vec![0.0; 4], f64::NAN).is_err());
        let (pv, spec) = four_symbol();
        let code = LossyCode::new(vec![7]).unwrap();
        assert!(matches!(excess_distortion(&pv, &spec, &code), Err(Error::SymbolOutOfRange { index: 0 })));
    }
}
