//! Cross-checks against independently coded reference computations.

use cqg_core::chebyshev::{chebyshev_f, chebyshev_f_closed, chebyshev_f_hp, chebyshev_g};
use cqg_core::fusion::{tensor_decompose, Rule};
use cqg_core::khintchine::{kp_constant, KpOptions, Verdict};
use cqg_core::models::{IrrLabel, QuantumGroupModel};
use cqg_core::numeric::{to_f64, Hp};
use cqg_core::rootsys::{LieType, RootSystem};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `Σ_k (k+1)/[k+1]_q` in plain `f64`, where `[m]_q = (q^{-m} − q^m)/(q^{-1} − q)`.
fn su2_k2_squared_f64(q: f64) -> f64 {
    let mut sum = 0.0;
    for k in 0..400 {
        let m = (k + 1) as f64;
        let qint = (q.powf(-m) - q.powf(m)) / (1.0 / q - q);
        sum += m / qint;
    }
    sum
}

#[test]
fn k2_squared_for_su2_matches_brute_force() {
    let model: QuantumGroupModel = "djq:A1:1/2".parse().unwrap();
    let report = kp_constant(&model, &r(2, 1), &KpOptions::default()).unwrap();
    let Verdict::Converged { lower, upper } = &report.verdict else { panic!("{:?}", report.verdict) };
    let oracle = su2_k2_squared_f64(0.5);
    let (lo, hi) = (to_f64(lower).powi(2), to_f64(upper).powi(2));
    assert!((lo - oracle).abs() < 1e-8 && (hi - oracle).abs() < 1e-8, "{lo} {hi} {oracle}");
    assert!((oracle - 3.3107).abs() < 1e-3);
}

/// `n/d` for SU_q(2) and `O_F^+` with `F` of size 2 agree termwise.
#[test]
fn su2_bridge_dimensions() {
    let dj: QuantumGroupModel = "djq:A1:1/3".parse().unwrap();
    let fo: QuantumGroupModel = "oplus:2:10/3".parse().unwrap();
    for k in 0..40 {
        let a = dj.irr_data(&dj.enumerate_level(k)[0]).unwrap();
        let b = fo.irr_data(&IrrLabel::Level(k)).unwrap();
        assert_eq!((a.n, a.d), (b.n, b.d), "k = {k}");
    }
}

#[test]
fn weyl_product_matches_spectrum_trace() {
    for (ty, rank) in [(LieType::A, 3), (LieType::B, 3), (LieType::C, 3), (LieType::G, 2)] {
        let rs = RootSystem::new(ty, rank).unwrap();
        for level in 0..=3 {
            for mu in rs.dominant_weights_of_level(level) {
                for q in [r(1, 2), r(3, 4)] {
                    let spec = rs.q_matrix_spectrum(&mu, &q).unwrap();
                    assert_eq!(spec.trace(), rs.quantum_dimension_weyl(&mu, &q).unwrap(), "{ty}{rank} {mu}");
                    assert_eq!(BigInt::from(spec.dimension()), rs.weyl_dimension(&mu).unwrap());
                }
            }
        }
    }
}

fn dimension_map(rule: Rule, x: &BigRational, k: u64) -> BigRational {
    match rule {
        Rule::SU2 => chebyshev_f(k, x).unwrap(),
        Rule::SO3 => chebyshev_g(k, x).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fusion_respects_every_dimension_function(k in 0u64..25, l in 0u64..25, num in 12i64..120, so3 in any::<bool>()) {
        let rule = if so3 { Rule::SO3 } else { Rule::SU2 };
        // Any x ≥ 4 is admissible for both rules.
        let x = r(num, 3);
        let lhs = dimension_map(rule, &x, k) * dimension_map(rule, &x, l);
        let mut rhs = BigRational::from_integer(0.into());
        for (j, m) in tensor_decompose(rule, k, l).iter() {
            rhs += BigRational::from_integer(m.clone()) * dimension_map(rule, &x, j);
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn recursion_matches_closed_form(k in 0u64..300, num in 21i64..80) {
        let hp = Hp::new(192);
        let t = hp.from_rational(&r(num, 10));
        let a = to_f64(&chebyshev_f_hp(k, &t, &hp).unwrap());
        let b = to_f64(&chebyshev_f_closed(k, &t, &hp).unwrap());
        prop_assert!(((a - b) / b).abs() < 1e-9);
    }

    #[test]
    fn g_is_even_chebyshev_at_square_root(k in 0u64..30, root in 2i64..9) {
        let x = r(root * root, 1);
        prop_assert_eq!(chebyshev_g(k, &x).unwrap(), chebyshev_f(2 * k, &r(root, 1)).unwrap());
    }
}
