//! Matrix-coefficient calculus over diagonal modular matrices.
//!
//! With `Q_α` diagonal, the Haar state on coefficients is
//! `h((u_ij)* u_st) = δ_is δ_jt Q_ii^{−1}/d` and
//! `h(u_ij (u_st)*) = δ_is δ_jt Q_jj/d`, and the modular group acts by
//! `σ_z(u_st) = Q_ss^{iz} Q_tt^{iz} u_st`.
//!
//! Exact mode covers purely imaginary `z = −is`, where the multiplier is the
//! positive real `(Q_ss Q_tt)^s`; it is carried symbolically and only
//! evaluated when a norm is taken. Float mode handles arbitrary complex `z`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::khintchine::{KpReport, Verdict};
use crate::models::IrrLabel;
use crate::numeric::{to_f64, ExactField, QuadSurd};
use crate::rootsys::{QSpectrum, SpectrumError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchurError {
    #[error("no modular spectrum attached to label {0}")]
    MissingSpectrum(String),
    #[error("index ({i}, {j}) out of range for label {label} of dimension {n}")]
    IndexOutOfRange { label: String, i: usize, j: usize, n: usize },
    #[error("coefficient matrix for label {label} is {got}x{got}, series size is {expected}")]
    SizeMismatch { label: String, expected: usize, got: usize },
    #[error("power {0} of a modular entry is not exact in the coefficient field")]
    NotExact(String),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("K_2 is not available ({0}); cannot bound against it")]
    KUnavailable(&'static str),
}

impl SchurError {
    pub fn code(&self) -> &'static str {
        match self {
            SchurError::MissingSpectrum(_) => "SCHUR_MISSING_SPECTRUM",
            SchurError::IndexOutOfRange { .. } => "SCHUR_INDEX_OUT_OF_RANGE",
            SchurError::SizeMismatch { .. } => "SCHUR_SIZE_MISMATCH",
            SchurError::NotExact(_) => "SCHUR_NOT_EXACT",
            SchurError::Spectrum(_) => "SCHUR_BAD_SPECTRUM",
            SchurError::KUnavailable(_) => "SCHUR_K_UNAVAILABLE",
        }
    }
}

/// Modular spectra keyed by label; each expands to its diagonal in a fixed order.
#[derive(Debug, Clone)]
pub struct SpectrumBook<F: ExactField = BigRational> {
    diagonals: BTreeMap<IrrLabel, (Vec<F>, F)>,
}

impl<F: ExactField> Default for SpectrumBook<F> {
    fn default() -> Self {
        SpectrumBook { diagonals: BTreeMap::new() }
    }
}

impl<F: ExactField> SpectrumBook<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, label: IrrLabel, q: &QSpectrum<F>) -> Result<(), SchurError> {
        if !q.is_trace_symmetric() {
            return Err(SpectrumError::NotTraceSymmetric.into());
        }
        self.diagonals.insert(label, (q.diagonal(), q.trace()));
        Ok(())
    }

    pub fn with(mut self, label: IrrLabel, q: &QSpectrum<F>) -> Result<Self, SchurError> {
        self.insert(label, q)?;
        Ok(self)
    }

    /// Diagonal of `Q_α` and `d_α = Tr(Q_α)`.
    pub fn get(&self, label: &IrrLabel) -> Result<(&[F], &F), SchurError> {
        self.diagonals
            .get(label)
            .map(|(diag, d)| (diag.as_slice(), d))
            .ok_or_else(|| SchurError::MissingSpectrum(label.to_string()))
    }

    fn entry(&self, label: &IrrLabel, i: usize, j: usize) -> Result<(&F, &F, &F), SchurError> {
        let (diag, d) = self.get(label)?;
        let n = diag.len();
        if i >= n || j >= n {
            return Err(SchurError::IndexOutOfRange { label: label.to_string(), i, j, n });
        }
        Ok((&diag[i], &diag[j], d))
    }
}

/// `x^e` for a positive field element and rational `e`, when exact.
fn exact_power<F: ExactField>(x: &F, e: &BigRational) -> Result<F, SchurError> {
    if e.is_integer() {
        let k = e.to_integer().try_into().map_err(|_| SchurError::NotExact(e.to_string()))?;
        return Ok(x.pow_int(k));
    }
    let den: u32 = e.denom().try_into().map_err(|_| SchurError::NotExact(e.to_string()))?;
    let num: i64 = e.numer().try_into().map_err(|_| SchurError::NotExact(e.to_string()))?;
    let root = x.root_exact(den).ok_or_else(|| SchurError::NotExact(e.to_string()))?;
    Ok(root.pow_int(num))
}

/// Exact coefficient `(re + i·im)·(Q_ii Q_jj)^{exponent}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCoefficient<F: ExactField = BigRational> {
    pub re: F,
    pub im: F,
    pub exponent: BigRational,
}

impl<F: ExactField> ExactCoefficient<F> {
    pub fn real(re: F) -> Self {
        ExactCoefficient { re, im: F::zero_elem(), exponent: BigRational::zero() }
    }

    /// `|c|²` with the symbolic factor evaluated against `q_ii`, `q_jj`.
    fn modulus_squared(&self, q_ii: &F, q_jj: &F, same: bool) -> Result<F, SchurError> {
        let base = self.re.times(&self.re).plus(&self.im.times(&self.im));
        if self.exponent.is_zero() {
            return Ok(base);
        }
        let two = BigRational::from_integer(2.into());
        let factor = if same {
            // (Q_ii²)^{2e} = Q_ii^{4e}
            exact_power(q_ii, &(&self.exponent * &two * &two))?
        } else {
            exact_power(&q_ii.times(q_jj), &(&self.exponent * &two))?
        };
        Ok(base.times(&factor))
    }

    /// Value in the field, when the symbolic factor is exact.
    pub fn value(&self, q_ii: &F, q_jj: &F) -> Result<(F, F), SchurError> {
        if self.exponent.is_zero() {
            return Ok((self.re.clone(), self.im.clone()));
        }
        let factor = exact_power(&q_ii.times(q_jj), &self.exponent)?;
        Ok((self.re.times(&factor), self.im.times(&factor)))
    }
}

/// Finitely supported combination of matrix coefficients `u^α_{ij}` (0-based indices).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector<F: ExactField = BigRational> {
    entries: BTreeMap<(IrrLabel, usize, usize), ExactCoefficient<F>>,
}

impl<F: ExactField> Default for CoefficientVector<F> {
    fn default() -> Self {
        CoefficientVector { entries: BTreeMap::new() }
    }
}

impl<F: ExactField> CoefficientVector<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, label: IrrLabel, i: usize, j: usize, c: ExactCoefficient<F>) {
        self.entries.insert((label, i, j), c);
    }

    pub fn get(&self, label: &IrrLabel, i: usize, j: usize) -> Option<&ExactCoefficient<F>> {
        self.entries.get(&(label.clone(), i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(IrrLabel, usize, usize), &ExactCoefficient<F>)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The character `χ_α = Σ_j u^α_{jj}`.
    pub fn character(label: &IrrLabel, book: &SpectrumBook<F>) -> Result<Self, SchurError> {
        let (diag, _) = book.get(label)?;
        let mut v = Self::new();
        for j in 0..diag.len() {
            v.set(label.clone(), j, j, ExactCoefficient::real(F::one_elem()));
        }
        Ok(v)
    }

    fn check(&self, book: &SpectrumBook<F>) -> Result<(), SchurError> {
        for (label, i, j) in self.entries.keys() {
            book.entry(label, *i, *j)?;
        }
        Ok(())
    }
}

/// `σ_{−is}`: multiplies each `u_st` coefficient by `(Q_ss Q_tt)^s`.
pub fn sigma_imaginary<F: ExactField>(
    v: &CoefficientVector<F>,
    s: &BigRational,
    book: &SpectrumBook<F>,
) -> Result<CoefficientVector<F>, SchurError> {
    v.check(book)?;
    let mut out = v.clone();
    for c in out.entries.values_mut() {
        c.exponent += s;
    }
    Ok(out)
}

/// `‖v‖₂² = Σ |c^α_ij|² (Q_α)_ii^{−1} / d_α`.
pub fn l2_norm_squared<F: ExactField>(v: &CoefficientVector<F>, book: &SpectrumBook<F>) -> Result<F, SchurError> {
    let mut acc = F::zero_elem();
    for ((label, i, j), c) in &v.entries {
        let (q_ii, q_jj, d) = book.entry(label, *i, *j)?;
        let m = c.modulus_squared(q_ii, q_jj, i == j)?;
        acc = acc.plus(&m.over(&q_ii.times(d)));
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaCheck<F: ExactField = BigRational> {
    pub lhs: F,
    pub rhs: F,
    pub equal: bool,
}

/// `‖σ_{−i/4}(χ)‖₂²` against `n/d` for a single spectrum.
pub fn lemma_base_check<F: ExactField>(q: &QSpectrum<F>) -> Result<LemmaCheck<F>, SchurError> {
    let label = IrrLabel::Level(0);
    let book = SpectrumBook::new().with(label.clone(), q)?;
    let chi = CoefficientVector::character(&label, &book)?;
    let quarter = BigRational::new(1.into(), 4.into());
    let smoothed = sigma_imaginary(&chi, &quarter, &book)?;
    let lhs = l2_norm_squared(&smoothed, &book)?;
    let n = F::from_rational(&BigRational::from_integer(q.dimension().into()));
    let rhs = n.over(&q.trace());
    let equal = lhs == rhs;
    Ok(LemmaCheck { lhs, rhs, equal })
}

/// `h(u_ij (u_st)*)` against `h((u_st)* σ_{−i}(u_ij))` for every index quadruple.
/// Returns the number of quadruples checked, or the first failing one.
pub fn modular_duality_check<F: ExactField>(q: &QSpectrum<F>) -> Result<Result<usize, [usize; 4]>, SchurError> {
    let label = IrrLabel::Level(0);
    let book = SpectrumBook::new().with(label.clone(), q)?;
    let (diag, d) = book.get(&label)?;
    let n = diag.len();
    let one = BigRational::one();
    let mut checked = 0;
    for i in 0..n {
        for j in 0..n {
            let mut f = CoefficientVector::new();
            f.set(label.clone(), i, j, ExactCoefficient::real(F::one_elem()));
            let shifted = sigma_imaginary(&f, &one, &book)?;
            let (mult, _) = shifted.get(&label, i, j).expect("same support").value(&diag[i], &diag[j])?;
            for s in 0..n {
                for t in 0..n {
                    let hit = i == s && j == t;
                    let lhs = if hit { diag[j].over(d) } else { F::zero_elem() };
                    let schur1 = if hit { diag[s].inverse().over(d) } else { F::zero_elem() };
                    let rhs = mult.times(&schur1);
                    if lhs != rhs {
                        return Ok(Err([i, j, s, t]));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(Ok(checked))
}

/// Random positive rational diagonal of size `n`, rescaled into `Q(√m)` so that
/// `Tr(Q) = Tr(Q⁻¹)` holds exactly.
pub fn synthetic_spectrum<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QSpectrum<QuadSurd> {
    let n = n.max(1);
    let raw: Vec<BigRational> = (0..n)
        .map(|_| BigRational::new(rng.gen_range(1..=60i64).into(), rng.gen_range(1..=12i64).into()))
        .collect();
    let tr: BigRational = raw.iter().sum();
    let tr_inv: BigRational = raw.iter().map(|x| x.recip()).sum();
    let s = QuadSurd::sqrt_of(&(tr_inv / tr));
    let entries = raw.iter().map(|x| (s.times(&QuadSurd::rational(x.clone())), 1)).collect();
    QSpectrum::new(entries).expect("rescaled spectra are trace symmetric")
}

/// Float-mode coefficient vector for general complex `z`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FloatCoefficientVector {
    entries: BTreeMap<(IrrLabel, usize, usize), Complex64>,
}

impl FloatCoefficientVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, label: IrrLabel, i: usize, j: usize, c: Complex64) {
        self.entries.insert((label, i, j), c);
    }

    pub fn get(&self, label: &IrrLabel, i: usize, j: usize) -> Option<Complex64> {
        self.entries.get(&(label.clone(), i, j)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(IrrLabel, usize, usize), &Complex64)> {
        self.entries.iter()
    }
}

/// `σ_z(u_st) = Q_ss^{iz} Q_tt^{iz} u_st` in double precision.
pub fn sigma_z_apply<F: ExactField>(
    v: &FloatCoefficientVector,
    z: Complex64,
    book: &SpectrumBook<F>,
) -> Result<FloatCoefficientVector, SchurError> {
    let mut out = v.clone();
    for ((label, s, t), c) in out.entries.iter_mut() {
        let (q_ss, q_tt, _) = book.entry(label, *s, *t)?;
        let log = q_ss.approx_f64().ln() + q_tt.approx_f64().ln();
        *c *= (Complex64::i() * z * log).exp();
    }
    Ok(out)
}

pub fn l2_norm_squared_f64<F: ExactField>(v: &FloatCoefficientVector, book: &SpectrumBook<F>) -> Result<f64, SchurError> {
    let mut acc = 0.0;
    for ((label, i, j), c) in &v.entries {
        let (q_ii, _, d) = book.entry(label, *i, *j)?;
        acc += c.norm_sqr() / (q_ii.approx_f64() * d.approx_f64());
    }
    Ok(acc)
}

/// `f = Σ_α x_α ⊗ χ_α` with `n × n` complex coefficients.
#[derive(Debug, Clone)]
pub struct CentralSeries<F: ExactField = BigRational> {
    n: usize,
    terms: BTreeMap<IrrLabel, DMatrix<Complex64>>,
    book: SpectrumBook<F>,
}

impl<F: ExactField> CentralSeries<F> {
    pub fn new(n: usize) -> Self {
        CentralSeries { n, terms: BTreeMap::new(), book: SpectrumBook::new() }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, label: IrrLabel, x: DMatrix<Complex64>, q: &QSpectrum<F>) -> Result<(), SchurError> {
        if x.nrows() != self.n || x.ncols() != self.n {
            return Err(SchurError::SizeMismatch { label: label.to_string(), expected: self.n, got: x.nrows() });
        }
        self.book.insert(label.clone(), q)?;
        self.terms.insert(label, x);
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IrrLabel, &DMatrix<Complex64>)> {
        self.terms.iter()
    }

    /// `‖f‖²` by expanding each `χ_α` into diagonal coefficients:
    /// `Σ_α tr(x_α* x_α) Σ_j Q_jj^{−1}/d_α`.
    pub fn l2_norm_squared(&self) -> Result<f64, SchurError> {
        let mut acc = 0.0;
        for (label, x) in &self.terms {
            let (diag, d) = self.book.get(label)?;
            let d = d.approx_f64();
            let char_norm: f64 = diag.iter().map(|q| 1.0 / (q.approx_f64() * d)).sum();
            acc += frobenius_squared(x) * char_norm;
        }
        Ok(acc)
    }

    pub fn l2_norm(&self) -> Result<f64, SchurError> {
        self.l2_norm_squared().map(f64::sqrt)
    }
}

fn frobenius_squared(x: &DMatrix<Complex64>) -> f64 {
    x.iter().map(|c| c.norm_sqr()).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremP2Check {
    /// `‖f‖_{L²(S²_n)}` through the Schur expansion.
    pub lhs: f64,
    /// `(Σ tr(x_α* x_α))^{1/2}`, the direct oracle.
    pub direct: f64,
    /// `‖(Σ x_α* x_α)^{1/2}‖_{S²}` from the eigenvalues of `Σ x_α* x_α`.
    pub square_function: f64,
    pub k2: f64,
    pub rhs_bound: f64,
    pub holds: bool,
}

/// Relative slack for `lhs ≤ rhs_bound` in double precision.
pub const P2_FLOAT_TOLERANCE: f64 = 1e-10;

/// Checks `‖f‖₂ ≤ K₂ ‖(Σ x*x)^{1/2}‖_{S²}`. Without a report `K₂ = 1`, which
/// already suffices since both sides agree at `p = 2`.
pub fn theorem_p2_check<F: ExactField>(
    series: &CentralSeries<F>,
    k2: Option<&KpReport>,
) -> Result<TheoremP2Check, SchurError> {
    let k2 = match k2 {
        None => 1.0,
        Some(report) => match &report.verdict {
            Verdict::Converged { upper, .. } => to_f64(upper),
            other => return Err(SchurError::KUnavailable(other.name())),
        },
    };
    let lhs = series.l2_norm()?;
    let direct = series.terms.values().map(frobenius_squared).sum::<f64>().sqrt();
    let n = series.n;
    let mut gram = DMatrix::<Complex64>::zeros(n, n);
    for x in series.terms.values() {
        gram += x.adjoint() * x;
    }
    let eig = gram.symmetric_eigenvalues();
    let square_function = eig.iter().map(|l| l.max(0.0)).sum::<f64>().sqrt();
    let rhs_bound = k2 * square_function;
    let holds = lhs <= rhs_bound * (1.0 + P2_FLOAT_TOLERANCE) + P2_FLOAT_TOLERANCE;
    Ok(TheoremP2Check { lhs, direct, square_function, k2, rhs_bound, holds })
}

/// Random series with `labels` terms, each `x_α` an `n × n` complex matrix with
/// entries in the unit square and `Q_α` synthetic.
pub fn random_series<R: Rng + ?Sized>(rng: &mut R, n: usize, labels: usize) -> CentralSeries<QuadSurd> {
    let mut series = CentralSeries::new(n);
    for a in 0..labels {
        let x = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let size = rng.gen_range(1..=5);
        let q = synthetic_spectrum(rng, size);
        series.add_term(IrrLabel::Level(a as u64), x, &q).expect("sizes agree");
    }
    series
}
