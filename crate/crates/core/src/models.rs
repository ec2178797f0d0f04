//! The three example families and their per-irreducible data.
//!
//! Spec strings: `djq:<type><rank>:<q>`, `oplus:<N>:<Nq>`, `aut:<dimB>:<d1>`,
//! where `q`, `Nq` and `d1` are decimal or `num/den` literals.
//!
//! For the quantum automorphism family `n_k = g_k(dimB)` and
//! `d_k = g_k(d1 + 1)`, so `n_1 = dimB − 1`, `d_1 = d1`, and the model is Kac
//! exactly when `d1 = dimB − 1`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::chebyshev::{chebyshev_f, chebyshev_g};
use crate::fusion::Rule;
use crate::numeric::{format_rational, parse_rational, ParseRationalError};
use crate::rootsys::{LieType, QSpectrum, RootSystem, RootSystemError, Weight};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("malformed model spec `{0}` (expected djq:<type><rank>:<q>, oplus:<N>:<Nq> or aut:<dimB>:<d1>)")]
    MalformedSpec(String),
    #[error("unknown model family `{0}`")]
    UnknownFamily(String),
    #[error("bad numeric parameter: {0}")]
    BadNumber(#[from] ParseRationalError),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error("free orthogonal model needs N >= 2, got {0}")]
    NTooSmall(u64),
    #[error("free orthogonal model needs Nq >= N = {n}, got Nq = {nq}")]
    NqBelowN { n: u64, nq: String },
    #[error("quantum automorphism model needs dimB >= 4, got {0}")]
    DimBTooSmall(u64),
    #[error("quantum automorphism model needs d1 >= n1 = dimB - 1 = {n1}, got d1 = {d1}")]
    D1BelowN1 { n1: u64, d1: String },
    #[error("label {label} is not valid for {model}")]
    InvalidLabel { label: String, model: String },
}

impl ModelError {
    pub fn code(&self) -> &'static str {
        match self {
            ModelError::MalformedSpec(_) => "MODEL_MALFORMED_SPEC",
            ModelError::UnknownFamily(_) => "MODEL_UNKNOWN_FAMILY",
            ModelError::BadNumber(_) => "MODEL_BAD_NUMBER",
            ModelError::RootSystem(e) => e.code(),
            ModelError::NTooSmall(_) => "MODEL_N_TOO_SMALL",
            ModelError::NqBelowN { .. } => "MODEL_NQ_BELOW_N",
            ModelError::DimBTooSmall(_) => "MODEL_DIMB_TOO_SMALL",
            ModelError::D1BelowN1 { .. } => "MODEL_D1_BELOW_N1",
            ModelError::InvalidLabel { .. } => "MODEL_INVALID_LABEL",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Family {
    DrinfeldJimbo { root_system: Arc<RootSystem>, q: BigRational },
    FreeOrthogonal { n: u64, nq: BigRational },
    QuantumAutomorphism { dim_b: u64, d1: BigRational },
}

#[derive(Debug, Clone)]
pub struct QuantumGroupModel {
    family: Family,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IrrLabel {
    Weight(Weight),
    Level(u64),
}

impl IrrLabel {
    pub fn length(&self) -> u64 {
        match self {
            IrrLabel::Weight(w) => w.level() as u64,
            IrrLabel::Level(k) => *k,
        }
    }
}

impl fmt::Display for IrrLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrLabel::Weight(w) => write!(f, "{w}"),
            IrrLabel::Level(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IrrData {
    pub label: IrrLabel,
    pub n: BigInt,
    pub d: BigRational,
    pub chi_sup: BigInt,
    pub length: u64,
}

impl QuantumGroupModel {
    pub fn drinfeld_jimbo(lie_type: LieType, rank: usize, q: BigRational) -> Result<Self, ModelError> {
        crate::rootsys::check_q(&q)?;
        let rs = RootSystem::new(lie_type, rank)?;
        Ok(QuantumGroupModel { family: Family::DrinfeldJimbo { root_system: Arc::new(rs), q } })
    }

    pub fn free_orthogonal(n: u64, nq: BigRational) -> Result<Self, ModelError> {
        if n < 2 {
            return Err(ModelError::NTooSmall(n));
        }
        if nq < BigRational::from_integer(n.into()) {
            return Err(ModelError::NqBelowN { n, nq: format_rational(&nq) });
        }
        Ok(QuantumGroupModel { family: Family::FreeOrthogonal { n, nq } })
    }

    pub fn quantum_automorphism(dim_b: u64, d1: BigRational) -> Result<Self, ModelError> {
        if dim_b < 4 {
            return Err(ModelError::DimBTooSmall(dim_b));
        }
        if d1 < BigRational::from_integer((dim_b - 1).into()) {
            return Err(ModelError::D1BelowN1 { n1: dim_b - 1, d1: format_rational(&d1) });
        }
        Ok(QuantumGroupModel { family: Family::QuantumAutomorphism { dim_b, d1 } })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn root_system(&self) -> Option<&Arc<RootSystem>> {
        match &self.family {
            Family::DrinfeldJimbo { root_system, .. } => Some(root_system),
            _ => None,
        }
    }

    /// Canonical spec string; parsing it yields an equal model.
    pub fn spec(&self) -> String {
        match &self.family {
            Family::DrinfeldJimbo { root_system, q } => {
                format!("djq:{}{}:{}", root_system.lie_type(), root_system.rank(), format_rational(q))
            }
            Family::FreeOrthogonal { n, nq } => format!("oplus:{n}:{}", format_rational(nq)),
            Family::QuantumAutomorphism { dim_b, d1 } => format!("aut:{dim_b}:{}", format_rational(d1)),
        }
    }

    /// Number of coordinates of a label: the rank, or 1 for ℕ₀-graded families.
    pub fn label_rank(&self) -> usize {
        self.root_system().map_or(1, |rs| rs.rank())
    }

    /// Fusion rule of the ℕ₀-graded families.
    pub fn fusion_rule(&self) -> Option<Rule> {
        match self.family {
            Family::FreeOrthogonal { .. } => Some(Rule::SU2),
            Family::QuantumAutomorphism { .. } => Some(Rule::SO3),
            Family::DrinfeldJimbo { .. } => None,
        }
    }

    pub fn is_kac(&self) -> bool {
        match &self.family {
            Family::DrinfeldJimbo { .. } => false,
            Family::FreeOrthogonal { n, nq } => nq == &BigRational::from_integer((*n).into()),
            Family::QuantumAutomorphism { dim_b, d1 } => d1 == &BigRational::from_integer((*dim_b - 1).into()),
        }
    }

    /// Trivial label of the model.
    pub fn trivial_label(&self) -> IrrLabel {
        match self.root_system() {
            Some(rs) => IrrLabel::Weight(Weight::zero(rs.rank())),
            None => IrrLabel::Level(0),
        }
    }

    /// Labels of length `k`. For Drinfeld-Jimbo models these are the dominant
    /// weights with coefficient sum `k` in descending lexicographic order.
    pub fn enumerate_level(&self, k: u64) -> Vec<IrrLabel> {
        match self.root_system() {
            Some(rs) => rs.dominant_weights_of_level(k).into_iter().map(IrrLabel::Weight).collect(),
            None => vec![IrrLabel::Level(k)],
        }
    }

    fn invalid(&self, label: &IrrLabel) -> ModelError {
        ModelError::InvalidLabel { label: label.to_string(), model: self.spec() }
    }

    pub fn irr_data(&self, label: &IrrLabel) -> Result<IrrData, ModelError> {
        match (&self.family, label) {
            (Family::DrinfeldJimbo { root_system, q }, IrrLabel::Weight(mu)) => {
                if mu.rank() != root_system.rank() || !mu.is_dominant() {
                    return Err(self.invalid(label));
                }
                let n = root_system.weyl_dimension(mu)?;
                // q-Weyl product; agrees exactly with the trace of the modular spectrum.
                let d = root_system.quantum_dimension_weyl(mu, q)?;
                Ok(IrrData { label: label.clone(), chi_sup: n.clone(), n, d, length: mu.level() as u64 })
            }
            (Family::FreeOrthogonal { n, nq }, IrrLabel::Level(k)) => {
                let nk = chebyshev_f(*k, &BigRational::from_integer((*n).into())).expect("N >= 2");
                let dk = chebyshev_f(*k, nq).expect("Nq >= N >= 2");
                Ok(IrrData {
                    label: label.clone(),
                    n: nk.to_integer(),
                    d: dk,
                    chi_sup: BigInt::from(*k + 1),
                    length: *k,
                })
            }
            (Family::QuantumAutomorphism { dim_b, d1 }, IrrLabel::Level(k)) => {
                let nk = chebyshev_g(*k, &BigRational::from_integer((*dim_b).into())).expect("dimB >= 4");
                let dk = chebyshev_g(*k, &(d1 + BigRational::one())).expect("d1 + 1 >= dimB >= 4");
                Ok(IrrData {
                    label: label.clone(),
                    n: nk.to_integer(),
                    d: dk,
                    chi_sup: BigInt::from(2 * *k + 1),
                    length: *k,
                })
            }
            _ => Err(self.invalid(label)),
        }
    }

    /// All irreducibles of length `≤ max_length`, in level order.
    pub fn dims_table(&self, max_length: u64) -> Result<Vec<IrrData>, ModelError> {
        let mut out = Vec::new();
        for k in 0..=max_length {
            for label in self.enumerate_level(k) {
                out.push(self.irr_data(&label)?);
            }
        }
        Ok(out)
    }

    /// Modular spectrum of a Drinfeld-Jimbo irreducible; `None` for the
    /// ℕ₀-graded families, whose spectra are not determined by `(n, d)`.
    pub fn q_spectrum(&self, label: &IrrLabel) -> Result<Option<QSpectrum>, ModelError> {
        match (&self.family, label) {
            (Family::DrinfeldJimbo { root_system, q }, IrrLabel::Weight(mu)) => {
                Ok(Some(root_system.q_matrix_spectrum(mu, q)?))
            }
            (Family::DrinfeldJimbo { .. }, _) => Err(self.invalid(label)),
            (_, IrrLabel::Level(_)) => Ok(None),
            _ => Err(self.invalid(label)),
        }
    }

    /// Parses a label such as `3`, `(1,0)` or `1,0`.
    pub fn parse_label(&self, s: &str) -> Result<IrrLabel, ModelError> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let bad = || ModelError::InvalidLabel { label: s.to_string(), model: self.spec() };
        match self.root_system() {
            Some(rs) => {
                let coeffs: Vec<i64> = trimmed
                    .split(',')
                    .map(|c| c.trim().parse::<i64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad())?;
                if coeffs.len() != rs.rank() || coeffs.iter().any(|&c| c < 0) {
                    return Err(bad());
                }
                Ok(IrrLabel::Weight(Weight(coeffs)))
            }
            None => trimmed.parse::<u64>().map(IrrLabel::Level).map_err(|_| bad()),
        }
    }
}

impl fmt::Display for QuantumGroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

impl FromStr for QuantumGroupModel {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 3 {
            return Err(ModelError::MalformedSpec(s.to_string()));
        }
        let malformed = || ModelError::MalformedSpec(s.to_string());
        match parts[0].to_ascii_lowercase().as_str() {
            "djq" => {
                let ty = parts[1].get(..1).ok_or_else(malformed)?;
                let lie_type: LieType = ty.parse()?;
                let rank: usize = parts[1][1..].parse().map_err(|_| malformed())?;
                let q = parse_rational(parts[2])?;
                QuantumGroupModel::drinfeld_jimbo(lie_type, rank, q)
            }
            "oplus" => {
                let n: u64 = parts[1].trim().parse().map_err(|_| malformed())?;
                QuantumGroupModel::free_orthogonal(n, parse_rational(parts[2])?)
            }
            "aut" => {
                let dim_b: u64 = parts[1].trim().parse().map_err(|_| malformed())?;
                QuantumGroupModel::quantum_automorphism(dim_b, parse_rational(parts[2])?)
            }
            other => Err(ModelError::UnknownFamily(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parse_and_validate() {
        let m: QuantumGroupModel = "oplus:3:3.5".parse().unwrap();
        assert!(!m.is_kac());
        assert_eq!(m.spec(), "oplus:3:7/2");
        assert!("oplus:3:3".parse::<QuantumGroupModel>().unwrap().is_kac());
        assert!(!"aut:4:4".parse::<QuantumGroupModel>().unwrap().is_kac());
        assert!("aut:4:3".parse::<QuantumGroupModel>().unwrap().is_kac());
        assert_eq!("djq:A1:1/2".parse::<QuantumGroupModel>().unwrap().spec(), "djq:A1:1/2");
        let err = |s: &str| s.parse::<QuantumGroupModel>().unwrap_err().code();
        assert_eq!(err("oplus:3:2.5"), "MODEL_NQ_BELOW_N");
        assert_eq!(err("aut:5:3"), "MODEL_D1_BELOW_N1");
        assert_eq!(err("djq:A1:1"), "ROOT_Q_OUT_OF_RANGE");
        assert_eq!(err("djq:B1:1/2"), "ROOT_INVALID_RANK");
        assert_eq!(err("foo:1:2"), "MODEL_UNKNOWN_FAMILY");
        assert_eq!(err("oplus:3"), "MODEL_MALFORMED_SPEC");
        assert_eq!(err("oplus:3:x"), "MODEL_BAD_NUMBER");
    }

    #[test]
    fn irr_examples() {
        let m: QuantumGroupModel = "oplus:3:3.5".parse().unwrap();
        let data = m.irr_data(&IrrLabel::Level(2)).unwrap();
        assert_eq!((data.n, data.d, data.chi_sup), (8.into(), r(45, 4), 3.into()));
        let dj: QuantumGroupModel = "djq:A1:1/2".parse().unwrap();
        let data = dj.irr_data(&IrrLabel::Weight(Weight(vec![2]))).unwrap();
        assert_eq!((data.n, data.d, data.chi_sup), (3.into(), r(21, 4), 3.into()));
        for model in [&m, &dj] {
            let t = model.irr_data(&model.trivial_label()).unwrap();
            assert_eq!((t.n, t.d, t.chi_sup), (1.into(), r(1, 1), 1.into()));
        }
        let aut: QuantumGroupModel = "aut:5:6".parse().unwrap();
        let one = aut.irr_data(&IrrLabel::Level(1)).unwrap();
        assert_eq!((one.n, one.d, one.chi_sup), (4.into(), r(6, 1), 3.into()));
    }

    #[test]
    fn levels() {
        let dj: QuantumGroupModel = "djq:A2:1/2".parse().unwrap();
        let level: Vec<String> = dj.enumerate_level(2).iter().map(|l| l.to_string()).collect();
        assert_eq!(level, ["(2,0)", "(1,1)", "(0,2)"]);
        let fo: QuantumGroupModel = "oplus:3:3.5".parse().unwrap();
        assert_eq!(fo.enumerate_level(5), vec![IrrLabel::Level(5)]);
        assert!(dj.irr_data(&IrrLabel::Level(1)).is_err());
        assert!(dj.parse_label("(1,-1)").is_err());
        assert_eq!(dj.parse_label("1,1").unwrap(), IrrLabel::Weight(Weight(vec![1, 1])));
    }
}
