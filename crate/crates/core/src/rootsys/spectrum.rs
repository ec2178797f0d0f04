use num_rational::BigRational;
use thiserror::Error;

use crate::numeric::ExactField;

/// Spectrum of a positive diagonal modular matrix: `(eigenvalue, multiplicity)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QSpectrum<T = BigRational> {
    entries: Vec<(T, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("spectrum is empty")]
    Empty,
    #[error("eigenvalue {0} is not positive")]
    NonPositive(String),
    #[error("zero multiplicity")]
    ZeroMultiplicity,
    #[error("trace symmetry Tr(Q) = Tr(Q^-1) fails")]
    NotTraceSymmetric,
}

impl<T: ExactField> QSpectrum<T> {
    /// Validates positivity and the normalization `Tr(Q) = Tr(Q⁻¹)`.
    pub fn new(entries: Vec<(T, u64)>) -> Result<Self, SpectrumError> {
        let spectrum = Self::new_unchecked(entries)?;
        if !spectrum.is_trace_symmetric() {
            return Err(SpectrumError::NotTraceSymmetric);
        }
        Ok(spectrum)
    }

    /// Only checks positivity; used for spectra under construction.
    pub fn new_unchecked(entries: Vec<(T, u64)>) -> Result<Self, SpectrumError> {
        if entries.is_empty() {
            return Err(SpectrumError::Empty);
        }
        for (v, m) in &entries {
            if !v.is_positive_elem() {
                return Err(SpectrumError::NonPositive(format!("{v:?}")));
            }
            if *m == 0 {
                return Err(SpectrumError::ZeroMultiplicity);
            }
        }
        Ok(QSpectrum { entries })
    }

    /// Diagonal of size `n` with all entries equal to one (Kac case).
    pub fn identity(n: u64) -> Self {
        QSpectrum { entries: vec![(T::one_elem(), n.max(1))] }
    }

    pub fn entries(&self) -> &[(T, u64)] {
        &self.entries
    }

    /// Classical dimension: total multiplicity.
    pub fn dimension(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn trace(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero_elem(), |acc, (v, m)| acc.plus(&v.times(&T::from_rational(&BigRational::from_integer((*m).into())))))
    }

    pub fn trace_inverse(&self) -> T {
        self.entries.iter().fold(T::zero_elem(), |acc, (v, m)| {
            acc.plus(&v.inverse().times(&T::from_rational(&BigRational::from_integer((*m).into()))))
        })
    }

    pub fn is_trace_symmetric(&self) -> bool {
        self.trace() == self.trace_inverse()
    }

    /// Diagonal entries in the fixed basis order (entries in stored order,
    /// each repeated by multiplicity).
    pub fn diagonal(&self) -> Vec<T> {
        self.entries
            .iter()
            .flat_map(|(v, m)| std::iter::repeat(v.clone()).take(*m as usize))
            .collect()
    }

    pub fn max_eigenvalue(&self) -> T {
        let mut best = self.entries[0].0.clone();
        for (v, _) in &self.entries[1..] {
            if v.minus(&best).is_positive_elem() {
                best = v.clone();
            }
        }
        best
    }
}

