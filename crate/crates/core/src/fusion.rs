//! Fusion rings of the two ℕ₀-graded families.
//!
//! Only the generator rules are encoded; every other product is obtained by
//! folding them through the character recursions
//! `χ_l = χ_1·χ_{l−1} − χ_{l−2}` (SU(2) type) and
//! `χ_l = χ_1·χ_{l−1} − χ_{l−1} − χ_{l−2}` (SO(3) type).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `k ⊗ 1 = (k−1) ⊕ (k+1)`
    SU2,
    /// `k ⊗ 1 = (k−1) ⊕ k ⊕ (k+1)`
    SO3,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::SU2 => "su2",
            Rule::SO3 => "so3",
        })
    }
}

/// Finitely supported multiset of labels with exact multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FusionMultiset {
    entries: BTreeMap<u64, BigInt>,
}

impl FusionMultiset {
    pub fn singleton(k: u64) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(k, BigInt::one());
        FusionMultiset { entries }
    }

    pub fn from_pairs<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Self {
        let mut out = FusionMultiset::default();
        for (k, m) in pairs {
            out.add(k, &BigInt::from(m));
        }
        out
    }

    pub fn multiplicity(&self, k: u64) -> BigInt {
        self.entries.get(&k).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigInt)> {
        self.entries.iter().map(|(k, m)| (*k, m))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total number of irreducible components, with multiplicity.
    pub fn total(&self) -> BigInt {
        self.entries.values().sum()
    }

    fn add(&mut self, k: u64, m: &BigInt) {
        let slot = self.entries.entry(k).or_default();
        *slot += m;
        if slot.is_zero() {
            self.entries.remove(&k);
        }
    }

    fn combine(&mut self, other: &FusionMultiset, sign: i32) {
        for (k, m) in &other.entries {
            if sign >= 0 {
                self.add(*k, m);
            } else {
                self.add(*k, &-m);
            }
        }
    }

    fn scaled(&self, c: &BigInt) -> FusionMultiset {
        let mut out = FusionMultiset::default();
        for (k, m) in &self.entries {
            out.add(*k, &(m * c));
        }
        out
    }
}

impl fmt::Display for FusionMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, m)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}:{m}")?;
        }
        f.write_str("}")
    }
}

/// `k ⊗ 1`.
pub fn tensor_with_generator(rule: Rule, k: u64) -> FusionMultiset {
    if k == 0 {
        return FusionMultiset::singleton(1);
    }
    let mut out = FusionMultiset::default();
    out.add(k - 1, &BigInt::one());
    if rule == Rule::SO3 {
        out.add(k, &BigInt::one());
    }
    out.add(k + 1, &BigInt::one());
    out
}

/// Applies `· ⊗ 1` linearly.
fn times_generator(rule: Rule, m: &FusionMultiset) -> FusionMultiset {
    let mut out = FusionMultiset::default();
    for (k, c) in &m.entries {
        out.combine(&tensor_with_generator(rule, *k).scaled(c), 1);
    }
    out
}

/// `k ⊗ l`, built as `P_j = k ⊗ j` by the character recursion in `j`.
pub fn tensor_decompose(rule: Rule, k: u64, l: u64) -> FusionMultiset {
    let (k, l) = if l > k { (l, k) } else { (k, l) };
    let mut prev = FusionMultiset::singleton(k);
    if l == 0 {
        return prev;
    }
    let mut cur = tensor_with_generator(rule, k);
    for _ in 2..=l {
        let mut next = times_generator(rule, &cur);
        next.combine(&prev, -1);
        if rule == Rule::SO3 {
            next.combine(&cur, -1);
        }
        prev = std::mem::replace(&mut cur, next);
    }
    debug_assert!(cur.entries.values().all(|m| m.is_positive()));
    cur
}

/// Product of two multisets.
pub fn multiply(rule: Rule, a: &FusionMultiset, b: &FusionMultiset) -> FusionMultiset {
    let mut out = FusionMultiset::default();
    for (i, mi) in &a.entries {
        for (j, mj) in &b.entries {
            out.combine(&tensor_decompose(rule, *i, *j).scaled(&(mi * mj)), 1);
        }
    }
    out
}

/// Full decomposition of `labels[0] ⊗ labels[1] ⊗ …`; the empty product is `{0 ↦ 1}`.
pub fn decompose_all(rule: Rule, labels: &[u64]) -> FusionMultiset {
    labels
        .iter()
        .fold(FusionMultiset::singleton(0), |acc, &l| multiply(rule, &acc, &FusionMultiset::singleton(l)))
}

/// Multiplicity of the trivial label in the iterated product.
pub fn trivial_multiplicity(rule: Rule, labels: &[u64]) -> BigInt {
    decompose_all(rule, labels).multiplicity(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_rules() {
        assert_eq!(tensor_with_generator(Rule::SU2, 3), FusionMultiset::from_pairs([(2, 1), (4, 1)]));
        assert_eq!(tensor_with_generator(Rule::SO3, 1), FusionMultiset::from_pairs([(0, 1), (1, 1), (2, 1)]));
        assert_eq!(tensor_with_generator(Rule::SO3, 0), FusionMultiset::singleton(1));
    }

    #[test]
    fn small_products() {
        assert_eq!(tensor_decompose(Rule::SU2, 1, 1), FusionMultiset::from_pairs([(0, 1), (2, 1)]));
        assert_eq!(tensor_decompose(Rule::SO3, 1, 1), FusionMultiset::from_pairs([(0, 1), (1, 1), (2, 1)]));
        assert_eq!(tensor_decompose(Rule::SO3, 0, 7), FusionMultiset::singleton(7));
        assert_eq!(tensor_decompose(Rule::SU2, 2, 3), FusionMultiset::from_pairs([(1, 1), (3, 1), (5, 1)]));
    }

    #[test]
    fn trivial_counts() {
        assert_eq!(trivial_multiplicity(Rule::SU2, &[1, 1, 1, 1]), BigInt::from(2));
        assert_eq!(trivial_multiplicity(Rule::SU2, &[1, 1, 1]), BigInt::zero());
        assert_eq!(trivial_multiplicity(Rule::SO3, &[]), BigInt::one());
    }
}
