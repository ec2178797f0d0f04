//! Root systems of simple Lie types and the highest-weight data built on them:
//! Weyl dimensions, Freudenthal weight multiplicities, modular-matrix spectra
//! and quantum dimensions of Drinfeld-Jimbo deformations.
//!
//! Normalization: the invariant form is scaled so that short roots have
//! squared length 2. The constants `t_i = q^{(ω_i, 2ρ)}` depend on this
//! choice; every other quantity here (dimensions, spectra written as powers
//! of `q`) is normalization independent only up to that same convention.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numeric::rational_powi;

mod spectrum;
pub use spectrum::{QSpectrum, SpectrumError};

pub const NORMALIZATION_NOTE: &str = "invariant form normalized so that short roots have (alpha, alpha) = 2";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LieType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            LieType::A => 'A',
            LieType::B => 'B',
            LieType::C => 'C',
            LieType::D => 'D',
            LieType::E => 'E',
            LieType::F => 'F',
            LieType::G => 'G',
        };
        write!(f, "{c}")
    }
}

impl FromStr for LieType {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(LieType::A),
            "B" | "b" => Ok(LieType::B),
            "C" | "c" => Ok(LieType::C),
            "D" | "d" => Ok(LieType::D),
            "E" | "e" => Ok(LieType::E),
            "F" | "f" => Ok(LieType::F),
            "G" | "g" => Ok(LieType::G),
            other => Err(RootSystemError::UnknownType(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSystemError {
    #[error("unknown Lie type `{0}` (expected one of A-G)")]
    UnknownType(String),
    #[error("{lie_type}{rank} is not a simple type (A_r r>=1, B_r r>=2, C_r r>=3, D_r r>=4, E6-E8, F4, G2)")]
    InvalidRank { lie_type: LieType, rank: usize },
    #[error("weight has {got} coordinates, rank is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("weight {0} is not dominant")]
    NotDominant(Weight),
    #[error("q = {0} must satisfy 0 < q < 1")]
    QOutOfRange(String),
}

impl RootSystemError {
    /// Stable diagnostic code.
    pub fn code(&self) -> &'static str {
        match self {
            RootSystemError::UnknownType(_) => "ROOT_UNKNOWN_TYPE",
            RootSystemError::InvalidRank { .. } => "ROOT_INVALID_RANK",
            RootSystemError::DimensionMismatch { .. } => "ROOT_DIMENSION_MISMATCH",
            RootSystemError::NotDominant(_) => "ROOT_NOT_DOMINANT",
            RootSystemError::QOutOfRange(_) => "ROOT_Q_OUT_OF_RANGE",
        }
    }
}

/// Integral weight in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    /// Sum of coordinates; for dominant weights this is the length function.
    pub fn level(&self) -> i64 {
        self.0.iter().sum()
    }

    fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn scaled_add(&self, other: &Weight, k: i64) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + k * b).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for Weight {
    fn from(v: Vec<i64>) -> Self {
        Weight(v)
    }
}

/// Full weight system of an irreducible highest-weight module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    pub highest: Weight,
    pub multiplicities: BTreeMap<Weight, u64>,
}

impl WeightSystem {
    pub fn dimension(&self) -> u64 {
        self.multiplicities.values().sum()
    }
}

/// Cartan data of a simple Lie type plus memoized weight systems.
pub struct RootSystem {
    lie_type: LieType,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    simple_form: Vec<Vec<i64>>,
    half_lengths: Vec<i64>,
    positive_roots: Vec<Vec<i64>>,
    inverse_cartan: Vec<Vec<BigRational>>,
    fundamental_weight_gram: Vec<Vec<BigRational>>,
    gram_scaled: Vec<Vec<i128>>,
    gram_denom: i128,
    two_rho_pairings: Vec<i64>,
    cache: Mutex<HashMap<Weight, Arc<WeightSystem>>>,
}

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootSystem")
            .field("lie_type", &self.lie_type)
            .field("rank", &self.rank)
            .field("positive_roots", &self.positive_roots.len())
            .finish()
    }
}

fn simple_root_form(lie_type: LieType, rank: usize) -> Result<Vec<Vec<i64>>, RootSystemError> {
    let valid = match lie_type {
        LieType::A => rank >= 1,
        LieType::B => rank >= 2,
        LieType::C => rank >= 3,
        LieType::D => rank >= 4,
        LieType::E => (6..=8).contains(&rank),
        LieType::F => rank == 4,
        LieType::G => rank == 2,
    };
    if !valid {
        return Err(RootSystemError::InvalidRank { lie_type, rank });
    }
    let mut b = vec![vec![0i64; rank]; rank];
    let mut link = |i: usize, j: usize, v: i64| {
        b[i][j] = v;
        b[j][i] = v;
    };
    // (α_i, α_j) with short roots of squared length 2, Bourbaki numbering.
    let lengths: Vec<i64> = match lie_type {
        LieType::A | LieType::D | LieType::E => {
            match lie_type {
                LieType::A => (0..rank - 1).for_each(|i| link(i, i + 1, -1)),
                LieType::D => {
                    (0..rank - 2).for_each(|i| link(i, i + 1, -1));
                    link(rank - 3, rank - 1, -1);
                }
                _ => {
                    link(0, 2, -1);
                    link(1, 3, -1);
                    (2..rank - 1).for_each(|i| link(i, i + 1, -1));
                }
            }
            vec![2; rank]
        }
        LieType::B => {
            (0..rank - 1).for_each(|i| link(i, i + 1, -2));
            (0..rank).map(|i| if i + 1 < rank { 4 } else { 2 }).collect()
        }
        LieType::C => {
            (0..rank - 2).for_each(|i| link(i, i + 1, -1));
            link(rank - 2, rank - 1, -2);
            (0..rank).map(|i| if i + 1 < rank { 2 } else { 4 }).collect()
        }
        LieType::F => {
            link(0, 1, -2);
            link(1, 2, -2);
            link(2, 3, -1);
            vec![4, 4, 2, 2]
        }
        LieType::G => {
            link(0, 1, -3);
            vec![2, 6]
        }
    };
    for (i, l) in lengths.into_iter().enumerate() {
        b[i][i] = l;
    }
    Ok(b)
}

fn invert_rational(m: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|&v| BigRational::from_integer(v.into())).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("Cartan matrix is nonsingular");
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn lcm(a: i128, b: i128) -> i128 {
    let g = num_integer::gcd(a, b);
    a / g * b
}

impl RootSystem {
    /// Builds Cartan data for the simple type `lie_type` of rank `rank`.
    pub fn new(lie_type: LieType, rank: usize) -> Result<Self, RootSystemError> {
        let simple_form = simple_root_form(lie_type, rank)?;
        let half_lengths: Vec<i64> = (0..rank).map(|i| simple_form[i][i] / 2).collect();
        // a_ij = 2(α_i, α_j)/(α_j, α_j); row i is α_i in fundamental-weight coordinates.
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| 2 * simple_form[i][j] / simple_form[j][j]).collect())
            .collect();
        let positive_roots = reflection_closure(&cartan);
        let inverse_cartan = invert_rational(&cartan);
        // (ω_i, ω_j) = (A⁻¹)_{ji} · (α_i, α_i)/2
        let fundamental_weight_gram: Vec<Vec<BigRational>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| &inverse_cartan[j][i] * BigRational::from_integer(half_lengths[i].into()))
                    .collect()
            })
            .collect();
        let gram_denom = fundamental_weight_gram
            .iter()
            .flatten()
            .map(|v| i128::try_from(v.denom()).expect("small denominator"))
            .fold(1, lcm);
        let gram_scaled = fundamental_weight_gram
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        let scaled = v * BigRational::from_integer(gram_denom.into());
                        i128::try_from(scaled.to_integer()).expect("small Gram entry")
                    })
                    .collect()
            })
            .collect();
        // (ω_i, 2ρ) = Σ_{α>0} (ω_i, α) = Σ_{α>0} c_i(α)·(α_i,α_i)/2
        let two_rho_pairings = (0..rank)
            .map(|i| positive_roots.iter().map(|c| c[i] * half_lengths[i]).sum())
            .collect();
        Ok(RootSystem {
            lie_type,
            rank,
            cartan,
            simple_form,
            half_lengths,
            positive_roots,
            inverse_cartan,
            fundamental_weight_gram,
            gram_scaled,
            gram_denom,
            two_rho_pairings,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// `(α_i, α_j)` on simple roots.
    pub fn simple_root_form(&self) -> &[Vec<i64>] {
        &self.simple_form
    }

    /// Positive roots in simple-root coordinates.
    /// `D_i = (α_i, α_i)/2`, so that `(ω_i, α_j) = δ_ij·D_j`.
    pub fn half_lengths(&self) -> &[i64] {
        &self.half_lengths
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn fundamental_weight_gram(&self) -> &[Vec<BigRational>] {
        &self.fundamental_weight_gram
    }

    /// ρ = Σ ω_i.
    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    /// A root given in simple-root coordinates, rewritten in fundamental-weight coordinates.
    pub fn root_to_weight(&self, root: &[i64]) -> Weight {
        Weight((0..self.rank).map(|j| (0..self.rank).map(|i| root[i] * self.cartan[i][j]).sum()).collect())
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        Weight(self.cartan[i].clone())
    }

    fn check_len(&self, v: &Weight) -> Result<(), RootSystemError> {
        if v.rank() != self.rank {
            return Err(RootSystemError::DimensionMismatch { expected: self.rank, got: v.rank() });
        }
        Ok(())
    }

    fn check_dominant(&self, mu: &Weight) -> Result<(), RootSystemError> {
        self.check_len(mu)?;
        if !mu.is_dominant() {
            return Err(RootSystemError::NotDominant(mu.clone()));
        }
        Ok(())
    }

    /// The invariant form on weights, exact.
    pub fn inner_product(&self, v: &Weight, w: &Weight) -> Result<BigRational, RootSystemError> {
        self.check_len(v)?;
        self.check_len(w)?;
        Ok(BigRational::new(self.scaled_inner(v, w).into(), self.gram_denom.into()))
    }

    fn scaled_inner(&self, v: &Weight, w: &Weight) -> i128 {
        let mut acc = 0i128;
        for i in 0..self.rank {
            if v.0[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                acc += v.0[i] as i128 * self.gram_scaled[i][j] * w.0[j] as i128;
            }
        }
        acc
    }

    /// `(λ, α)` for a root in simple-root coordinates; always an integer.
    pub fn pair_with_root(&self, lambda: &Weight, root: &[i64]) -> i64 {
        (0..self.rank).map(|j| root[j] * lambda.0[j] * self.half_lengths[j]).sum()
    }

    /// `(ω_i, 2ρ)` for each i.
    pub fn two_rho_pairings(&self) -> &[i64] {
        &self.two_rho_pairings
    }

    /// `(λ, 2ρ)`.
    pub fn pair_with_two_rho(&self, lambda: &Weight) -> i64 {
        lambda.0.iter().zip(&self.two_rho_pairings).map(|(a, b)| a * b).sum()
    }

    /// Weyl dimension formula `Π_{α>0} (μ+ρ, α)/(ρ, α)`.
    pub fn weyl_dimension(&self, mu: &Weight) -> Result<BigInt, RootSystemError> {
        self.check_dominant(mu)?;
        let shifted = mu.add(&self.rho());
        let rho = self.rho();
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for root in &self.positive_roots {
            num *= self.pair_with_root(&shifted, root);
            den *= self.pair_with_root(&rho, root);
        }
        let dim = BigRational::new(num, den);
        debug_assert!(dim.is_integer());
        Ok(dim.to_integer())
    }

    /// Quantum dimension by the q-deformed Weyl product
    /// `Π_{α>0} [(μ+ρ, α)]_q / [(ρ, α)]_q`, exact for rational `q`.
    pub fn quantum_dimension_weyl(&self, mu: &Weight, q: &BigRational) -> Result<BigRational, RootSystemError> {
        self.check_dominant(mu)?;
        check_q(q)?;
        let shifted = mu.add(&self.rho());
        let rho = self.rho();
        let mut num = BigRational::one();
        let mut den = BigRational::one();
        for root in &self.positive_roots {
            num *= q_bracket(q, self.pair_with_root(&shifted, root));
            den *= q_bracket(q, self.pair_with_root(&rho, root));
        }
        Ok(num / den)
    }

    /// Maps a weight into the dominant chamber by simple reflections.
    pub fn dominant_conjugate(&self, lambda: &Weight) -> Weight {
        let mut w = lambda.clone();
        while let Some(i) = w.0.iter().position(|&c| c < 0) {
            let k = w.0[i];
            w = w.scaled_add(&self.simple_root(i), -k);
        }
        w
    }

    /// Simple-root coordinates of `μ - λ`, if integral.
    fn root_coordinates(&self, diff: &Weight) -> Option<Vec<i64>> {
        // diff = Σ m_i α_i = m·A  ⇒  m = diff·A⁻¹
        let mut out = Vec::with_capacity(self.rank);
        for j in 0..self.rank {
            let mut acc = BigRational::zero();
            for i in 0..self.rank {
                if diff.0[i] != 0 {
                    acc += &self.inverse_cartan[i][j] * BigRational::from_integer(diff.0[i].into());
                }
            }
            if !acc.is_integer() {
                return None;
            }
            out.push(i64::try_from(acc.to_integer()).ok()?);
        }
        Some(out)
    }

    /// Depth of λ below μ (height of μ - λ), if λ ≤ μ in the dominance order.
    fn depth_below(&self, mu: &Weight, lambda: &Weight) -> Option<i64> {
        let m = self.root_coordinates(&mu.sub(lambda))?;
        m.iter().all(|&c| c >= 0).then(|| m.iter().sum())
    }

    /// Weight multiplicities of the irreducible module with highest weight `mu`,
    /// by Freudenthal's recursion on dominant weights. Memoized per `mu`.
    pub fn weight_multiplicities(&self, mu: &Weight) -> Result<Arc<WeightSystem>, RootSystemError> {
        self.check_dominant(mu)?;
        if let Some(hit) = self.cache.lock().expect("weight cache poisoned").get(mu) {
            return Ok(Arc::clone(hit));
        }
        let system = Arc::new(self.freudenthal(mu));
        let mut cache = self.cache.lock().expect("weight cache poisoned");
        let entry = cache.entry(mu.clone()).or_insert(system);
        Ok(Arc::clone(entry))
    }

    fn freudenthal(&self, mu: &Weight) -> WeightSystem {
        // Weight set: saturated, reachable from μ by subtracting simple roots.
        let mut weights: HashSet<Weight> = HashSet::new();
        let mut queue = VecDeque::from([mu.clone()]);
        weights.insert(mu.clone());
        while let Some(w) = queue.pop_front() {
            for i in 0..self.rank {
                let next = w.sub(&self.simple_root(i));
                if weights.contains(&next) {
                    continue;
                }
                let dom = self.dominant_conjugate(&next);
                if self.depth_below(mu, &dom).is_some() {
                    weights.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }

        let mut dominant: Vec<(i64, Weight)> = weights
            .iter()
            .filter(|w| w.is_dominant())
            .map(|w| (self.depth_below(mu, w).expect("dominant weight below mu"), w.clone()))
            .collect();
        dominant.sort();

        let roots_as_weights: Vec<(Weight, &Vec<i64>)> =
            self.positive_roots.iter().map(|r| (self.root_to_weight(r), r)).collect();
        let rho = self.rho();
        let top = {
            let s = mu.add(&rho);
            self.scaled_inner(&s, &s)
        };
        let mut dom_mult: HashMap<Weight, u64> = HashMap::new();
        for (depth, lambda) in dominant {
            if depth == 0 {
                dom_mult.insert(lambda, 1);
                continue;
            }
            // (|μ+ρ|² - |λ+ρ|²)·m(λ) = 2 Σ_{α>0} Σ_{j≥1} (λ+jα, α)·m(λ+jα)
            let mut sum: i128 = 0;
            for (alpha_w, alpha) in &roots_as_weights {
                let mut j = 1;
                loop {
                    let shifted = lambda.scaled_add(alpha_w, j);
                    if !weights.contains(&shifted) {
                        break;
                    }
                    let m = dom_mult[&self.dominant_conjugate(&shifted)];
                    sum += self.pair_with_root(&shifted, alpha) as i128 * m as i128;
                    j += 1;
                }
            }
            let s = lambda.add(&rho);
            let denom = top - self.scaled_inner(&s, &s);
            // Scaled Gram multiplies norms by gram_denom; compensate in the numerator.
            let numer = 2 * sum * self.gram_denom;
            debug_assert!(denom > 0 && numer % denom == 0);
            dom_mult.insert(lambda, (numer / denom) as u64);
        }

        let multiplicities = weights
            .into_iter()
            .filter_map(|w| {
                let m = dom_mult[&self.dominant_conjugate(&w)];
                (m > 0).then_some((w, m))
            })
            .collect();
        WeightSystem { highest: mu.clone(), multiplicities }
    }

    /// Spectrum of the modular matrix `Q_μ`: eigenvalue `q^{-(ν, 2ρ)}` for each
    /// weight ν, grouped, largest eigenvalue first.
    pub fn q_matrix_spectrum(&self, mu: &Weight, q: &BigRational) -> Result<QSpectrum, RootSystemError> {
        check_q(q)?;
        let system = self.weight_multiplicities(mu)?;
        let mut by_exponent: BTreeMap<i64, u64> = BTreeMap::new();
        for (nu, m) in &system.multiplicities {
            *by_exponent.entry(self.pair_with_two_rho(nu)).or_default() += m;
        }
        let entries = by_exponent.into_iter().rev().map(|(e, m)| (rational_powi(q, -e), m)).collect();
        Ok(QSpectrum::new(entries).expect("modular spectra of weight systems are trace symmetric"))
    }

    /// Quantum dimension `d_μ = Tr(Q_μ)` from the spectrum.
    pub fn quantum_dimension(&self, mu: &Weight, q: &BigRational) -> Result<BigRational, RootSystemError> {
        Ok(self.q_matrix_spectrum(mu, q)?.trace())
    }

    /// `t_i = q^{(ω_i, 2ρ)}`.
    pub fn t_constants(&self, q: &BigRational) -> Result<Vec<BigRational>, RootSystemError> {
        check_q(q)?;
        Ok(self.two_rho_pairings.iter().map(|&e| rational_powi(q, e)).collect())
    }

    /// `Π t_i^{-μ_i} = q^{-(μ, 2ρ)}`, the predicted largest modular eigenvalue.
    pub fn predicted_max_eigenvalue(&self, mu: &Weight, q: &BigRational) -> Result<BigRational, RootSystemError> {
        self.check_dominant(mu)?;
        let t = self.t_constants(q)?;
        Ok(t.iter().zip(&mu.0).fold(BigRational::one(), |acc, (ti, &m)| acc * rational_powi(ti, -m)))
    }

    /// Number of positive roots for the type, from the classification.
    pub fn classical_positive_root_count(lie_type: LieType, rank: usize) -> usize {
        match lie_type {
            LieType::A => rank * (rank + 1) / 2,
            LieType::B | LieType::C => rank * rank,
            LieType::D => rank * (rank - 1),
            LieType::E => match rank {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            LieType::F => 24,
            LieType::G => 6,
        }
    }

    /// Dominant weights `μ` with `Σ μ_i = level`, in descending lexicographic order.
    pub fn dominant_weights_of_level(&self, level: u64) -> Vec<Weight> {
        let mut out = Vec::new();
        let mut current = vec![0i64; self.rank];
        compositions(level as i64, 0, &mut current, &mut out);
        out
    }
}

fn compositions(remaining: i64, idx: usize, current: &mut Vec<i64>, out: &mut Vec<Weight>) {
    if idx + 1 == current.len() {
        current[idx] = remaining;
        out.push(Weight(current.clone()));
        return;
    }
    for v in (0..=remaining).rev() {
        current[idx] = v;
        compositions(remaining - v, idx + 1, current, out);
    }
}

/// Positive roots (simple-root coordinates) as the closure of the simple roots
/// under simple reflections, keeping positive images only.
fn reflection_closure(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rank = cartan.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    for i in 0..rank {
        let mut e = vec![0; rank];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..rank {
            // s_i(β) = β - ⟨β, α_i^∨⟩ α_i,  ⟨β, α_i^∨⟩ = Σ_j β_j a_{ji}
            let pairing: i64 = (0..rank).map(|j| beta[j] * cartan[j][i]).sum();
            if pairing == 0 {
                continue;
            }
            let mut image = beta.clone();
            image[i] -= pairing;
            if image.iter().all(|&c| c >= 0) && seen.insert(image.clone()) {
                queue.push_back(image);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
    roots.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum::<i64>()).then_with(|| b.cmp(a)));
    roots
}

pub(crate) fn check_q(q: &BigRational) -> Result<(), RootSystemError> {
    if !q.is_positive() || q >= &BigRational::one() {
        return Err(RootSystemError::QOutOfRange(crate::numeric::format_rational(q)));
    }
    Ok(())
}

/// `q^{-x} - q^{x}`; the common factor `q^{-1} - q` of q-integers cancels in ratios.
fn q_bracket(q: &BigRational, x: i64) -> BigRational {
    rational_powi(q, -x) - rational_powi(q, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    #[test]
    fn rejects_invalid_pairs() {
        for (t, n) in [(LieType::A, 0), (LieType::B, 1), (LieType::C, 2), (LieType::D, 3), (LieType::E, 5), (LieType::E, 9), (LieType::F, 3), (LieType::G, 3)] {
            let err = RootSystem::new(t, n).unwrap_err();
            assert_eq!(err.code(), "ROOT_INVALID_RANK");
        }
        assert!(matches!("X".parse::<LieType>(), Err(RootSystemError::UnknownType(_))));
    }

    #[test]
    fn small_root_counts() {
        let a1 = RootSystem::new(LieType::A, 1).unwrap();
        assert_eq!(a1.positive_roots().len(), 1);
        assert_eq!(a1.rho(), w(&[1]));
        assert_eq!(RootSystem::new(LieType::A, 2).unwrap().positive_roots().len(), 3);
        assert_eq!(RootSystem::new(LieType::G, 2).unwrap().positive_roots().len(), 6);
    }

    #[test]
    fn inner_products() {
        let a1 = RootSystem::new(LieType::A, 1).unwrap();
        let alpha = a1.simple_root(0);
        assert_eq!(a1.inner_product(&w(&[1]), &alpha).unwrap(), r(1, 1));
        let a2 = RootSystem::new(LieType::A, 2).unwrap();
        let two_rho = w(&[2, 2]);
        assert_eq!(a2.inner_product(&w(&[1, 0]), &two_rho).unwrap(), r(2, 1));
        assert_eq!(a2.inner_product(&a2.rho(), &Weight::zero(2)).unwrap(), r(0, 1));
        assert!(matches!(
            a2.inner_product(&w(&[1]), &two_rho),
            Err(RootSystemError::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn weyl_dimensions() {
        let a1 = RootSystem::new(LieType::A, 1).unwrap();
        for m in 0..10 {
            assert_eq!(a1.weyl_dimension(&w(&[m])).unwrap(), BigInt::from(m + 1));
        }
        let a2 = RootSystem::new(LieType::A, 2).unwrap();
        assert_eq!(a2.weyl_dimension(&w(&[1, 1])).unwrap(), BigInt::from(8));
        assert_eq!(a2.weyl_dimension(&w(&[0, 0])).unwrap(), BigInt::from(1));
        let g2 = RootSystem::new(LieType::G, 2).unwrap();
        // 7-dimensional and adjoint (14) representations of G2.
        assert_eq!(g2.weyl_dimension(&w(&[1, 0])).unwrap(), BigInt::from(7));
        assert_eq!(g2.weyl_dimension(&w(&[0, 1])).unwrap(), BigInt::from(14));
        let e8 = RootSystem::new(LieType::E, 8).unwrap();
        assert_eq!(e8.weyl_dimension(&w(&[0, 0, 0, 0, 0, 0, 0, 1])).unwrap(), BigInt::from(248));
        assert!(matches!(a2.weyl_dimension(&w(&[-1, 0])), Err(RootSystemError::NotDominant(_))));
    }

    #[test]
    fn multiplicities_small_cases() {
        let a1 = RootSystem::new(LieType::A, 1).unwrap();
        let sys = a1.weight_multiplicities(&w(&[2])).unwrap();
        let expected: BTreeMap<Weight, u64> = [(w(&[2]), 1), (w(&[0]), 1), (w(&[-2]), 1)].into_iter().collect();
        assert_eq!(sys.multiplicities, expected);

        let a2 = RootSystem::new(LieType::A, 2).unwrap();
        let adj = a2.weight_multiplicities(&w(&[1, 1])).unwrap();
        assert_eq!(adj.multiplicities[&w(&[0, 0])], 2);
        assert_eq!(adj.dimension(), 8);

        let triv = a2.weight_multiplicities(&Weight::zero(2)).unwrap();
        assert_eq!(triv.multiplicities.len(), 1);
        assert_eq!(triv.multiplicities[&Weight::zero(2)], 1);
    }

    #[test]
    fn spectra_and_quantum_dimensions() {
        let a1 = RootSystem::new(LieType::A, 1).unwrap();
        let half = r(1, 2);
        let s = a1.q_matrix_spectrum(&w(&[1]), &half).unwrap();
        assert_eq!(s.entries(), &[(r(2, 1), 1), (r(1, 2), 1)]);
        let triv = a1.q_matrix_spectrum(&w(&[0]), &half).unwrap();
        assert_eq!(triv.entries(), &[(r(1, 1), 1)]);
        let m = 5;
        let ladder = a1.q_matrix_spectrum(&w(&[m]), &half).unwrap();
        let expected: Vec<(BigRational, u64)> = (0..=m).map(|j| (rational_powi(&half, -(m - 2 * j)), 1)).collect();
        assert_eq!(ladder.entries(), expected.as_slice());

        assert_eq!(a1.quantum_dimension(&w(&[2]), &half).unwrap(), r(21, 4));
        assert_eq!(a1.quantum_dimension(&w(&[1]), &half).unwrap(), r(5, 2));
        assert_eq!(a1.quantum_dimension(&w(&[0]), &half).unwrap(), r(1, 1));
        assert_eq!(a1.quantum_dimension_weyl(&w(&[2]), &half).unwrap(), r(21, 4));
        assert!(matches!(a1.quantum_dimension(&w(&[1]), &r(1, 1)), Err(RootSystemError::QOutOfRange(_))));
        assert!(matches!(a1.q_matrix_spectrum(&w(&[1]), &r(0, 1)), Err(RootSystemError::QOutOfRange(_))));
    }

    #[test]
    fn t_constant_examples() {
        let q = r(3, 4);
        let a1 = RootSystem::new(LieType::A, 1).unwrap();
        assert_eq!(a1.t_constants(&q).unwrap(), vec![q.clone()]);
        let a2 = RootSystem::new(LieType::A, 2).unwrap();
        assert_eq!(a2.t_constants(&q).unwrap(), vec![&q * &q, &q * &q]);
        // q → 1⁻: t_i → 1
        let near_one = r(999_999, 1_000_000);
        for t in a2.t_constants(&near_one).unwrap() {
            assert!(crate::numeric::rational_to_f64(&t) > 0.9999);
        }
    }

    #[test]
    fn level_enumeration_order() {
        let a2 = RootSystem::new(LieType::A, 2).unwrap();
        assert_eq!(a2.dominant_weights_of_level(2), vec![w(&[2, 0]), w(&[1, 1]), w(&[0, 2])]);
        assert_eq!(a2.dominant_weights_of_level(0), vec![w(&[0, 0])]);
    }

    #[test]
    fn cache_returns_shared_system() {
        let b2 = RootSystem::new(LieType::B, 2).unwrap();
        let a = b2.weight_multiplicities(&w(&[1, 1])).unwrap();
        let b = b2.weight_multiplicities(&w(&[1, 1])).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
