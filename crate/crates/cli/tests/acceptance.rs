//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion; run with
//! `cargo test -p cqg-cli --test acceptance -- --nocapture`.
//!
//! Criteria listed in `KNOWN_RED` are expected to fail; the test asserts that
//! they still do, so a change in status is noticed.

use std::process::Command;
use std::time::{Duration, Instant};

use cqg_core::chebyshev::{chebyshev_f, chebyshev_f_closed, chebyshev_f_hp, chebyshev_g, normalized_growth, normalized_limit};
use cqg_core::fusion::{tensor_decompose, Rule};
use cqg_core::khintchine::{
    corollary_constants, corollary_exponents, decay_rate, kp_constant, KpOptions, KpReport, Verdict,
};
use cqg_core::models::{IrrLabel, QuantumGroupModel};
use cqg_core::numeric::{format_rational, hp::cmp, rational_powi, to_f64, to_rational, Hp};
use cqg_core::rootsys::{LieType, QSpectrum, RootSystem};
use cqg_core::schur::{lemma_base_check, modular_duality_check, random_series, synthetic_spectrum, theorem_p2_check};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_RED: &[&str] = &["7b"];

const TOL_KP_TAIL: f64 = 1e-10;
const TOL_K2_ORACLE: f64 = 1e-8;
const TOL_P2: f64 = 1e-10;
const TOL_CHEB_REL: f64 = 1e-9;
const TOL_DECAY_REL: f64 = 0.01;
const TOL_LIMIT: f64 = 1e-6;
const TOL_BRIDGE: f64 = 1e-10;
const BUDGET_1: Duration = Duration::from_secs(10);
const BUDGET_2: Duration = Duration::from_secs(10);
const BUDGET_4: Duration = Duration::from_secs(60);

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn model(s: &str) -> QuantumGroupModel {
    s.parse().unwrap()
}

struct Outcome {
    id: &'static str,
    passed: bool,
}

fn report(id: &'static str, title: &str, passed: bool, detail: String, elapsed: Duration) -> Outcome {
    let tag = if passed { "PASS" } else { "FAIL" };
    println!("{tag} {id:<5} {title}: {detail} [{:.2}s]", elapsed.as_secs_f64());
    Outcome { id, passed }
}

fn small_spectra(q: &BigRational, types: &[(LieType, usize)], max_level: u64) -> Vec<(String, QSpectrum)> {
    let mut out = Vec::new();
    for &(ty, rank) in types {
        let rs = RootSystem::new(ty, rank).unwrap();
        for level in 0..=max_level {
            for mu in rs.dominant_weights_of_level(level) {
                out.push((format!("{ty}{rank}{mu}"), rs.q_matrix_spectrum(&mu, q).unwrap()));
            }
        }
    }
    out
}

fn c1() -> Outcome {
    let t = Instant::now();
    let spectra = small_spectra(&r(1, 2), &[(LieType::A, 1), (LieType::A, 2)], 4);
    let mut ok = spectra.iter().all(|(_, q)| lemma_base_check(q).unwrap().equal);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut synthetic = 0;
    for i in 0..1000 {
        let q = synthetic_spectrum(&mut rng, 1 + i % 10);
        ok &= lemma_base_check(&q).unwrap().equal;
        synthetic += 1;
    }
    let el = t.elapsed();
    report(
        "1",
        "lemma base case exact",
        ok && el < BUDGET_1,
        format!("{} root-system spectra, {synthetic} synthetic, all equal: {ok}", spectra.len()),
        el,
    )
}

fn k2_report() -> KpReport {
    kp_constant(&model("djq:A1:1/2"), &r(2, 1), &KpOptions::default()).unwrap()
}

fn c2() -> Outcome {
    let t = Instant::now();
    let k2 = k2_report();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0f64;
    let mut holds = true;
    for i in 0..100 {
        let n = 1 + i % 4;
        let labels = rng.gen_range(1..=6);
        let series = random_series(&mut rng, n, labels);
        let free = theorem_p2_check(&series, None).unwrap();
        let bounded = theorem_p2_check(&series, Some(&k2)).unwrap();
        let sum_tr = free.direct * free.direct;
        worst = worst.max((free.lhs * free.lhs - sum_tr).abs() / sum_tr.max(1.0));
        holds &= free.holds && bounded.holds;
    }
    let el = t.elapsed();
    report(
        "2",
        "p = 2 identity and K_2 bound",
        worst <= TOL_P2 && holds && el < BUDGET_2,
        format!("100 series, worst |lhs^2 - sum tr|/max(1,sum tr) = {worst:.2e}, bound holds: {holds}"),
        el,
    )
}

fn c3() -> Outcome {
    let t = Instant::now();
    let mut count = 0;
    let mut ok = true;
    for (_, q) in small_spectra(&r(1, 2), &[(LieType::A, 1), (LieType::A, 2)], 4) {
        ok &= modular_duality_check(&q).unwrap().is_ok();
        count += 1;
    }
    for (_, q) in small_spectra(&r(3, 4), &[(LieType::B, 2), (LieType::G, 2)], 1) {
        ok &= modular_duality_check(&q).unwrap().is_ok();
        count += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..100 {
        let q = synthetic_spectrum(&mut rng, 1 + i % 8);
        ok &= modular_duality_check(&q).unwrap().is_ok();
        count += 1;
    }
    report("3", "modular duality on all basis pairs", ok, format!("{count} spectra exact"), t.elapsed())
}

fn c4() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    let tol = BigRational::new(BigInt::one(), BigInt::from(10u64.pow(10)));
    for spec in ["djq:A1:1/2", "djq:A2:1/2", "oplus:3:3.5", "aut:4:5", "aut:5:5"] {
        let m = model(spec);
        for p in [4, 8, 16] {
            let rep = kp_constant(&m, &r(p, 1), &KpOptions::default()).unwrap();
            let tail_ok = rep.tail_bound.as_ref().is_some_and(|tb| to_rational(tb).unwrap() < tol);
            let conv = matches!(rep.verdict, Verdict::Converged { .. });
            if !(tail_ok && conv) {
                notes.push(format!("{spec} p={p}: {}", rep.verdict.name()));
            }
            ok &= tail_ok && conv;
        }
    }
    for spec in ["oplus:3:3", "aut:4:3"] {
        let rep = kp_constant(&model(spec), &r(4, 1), &KpOptions::default()).unwrap();
        let div = matches!(rep.verdict, Verdict::Divergent { .. });
        if !div {
            notes.push(format!("{spec}: {}", rep.verdict.name()));
        }
        ok &= div;
    }
    let k2 = k2_report();
    let Verdict::Converged { lower, upper } = &k2.verdict else { panic!("K_2 must converge") };
    let oracle: f64 = (0..400)
        .map(|k| {
            let m = (k + 1) as f64;
            m * (2.0 - 0.5) / (2f64.powf(m) - 0.5f64.powf(m))
        })
        .sum();
    let k2_gap = (to_f64(lower).powi(2) - oracle).abs().max((to_f64(upper).powi(2) - oracle).abs());
    ok &= k2_gap < TOL_K2_ORACLE;
    let el = t.elapsed();
    ok &= el < BUDGET_4;
    report(
        "4",
        "K_p finite off Kac, divergent on Kac",
        ok,
        format!(
            "15 converged with tail < {TOL_KP_TAIL:e}, 2 divergent; K_2^2 = {:.10} vs brute force {oracle:.10}; issues: [{}]",
            to_f64(lower).powi(2),
            notes.join("; ")
        ),
        el,
    )
}

fn c5() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    let mut count = 0;
    for (ty, rank) in [(LieType::A, 1), (LieType::A, 2), (LieType::B, 2), (LieType::G, 2)] {
        let rs = RootSystem::new(ty, rank).unwrap();
        for q in [r(1, 2), r(3, 4)] {
            let ts = rs.t_constants(&q).unwrap();
            ok &= ts.iter().all(|ti| ti < &BigRational::one());
            let t_max = ts.iter().max().unwrap().clone();
            for level in 0..=4 {
                for mu in rs.dominant_weights_of_level(level) {
                    let spec = rs.q_matrix_spectrum(&mu, &q).unwrap();
                    let product = ts.iter().zip(mu.coeffs()).fold(BigRational::one(), |acc, (ti, &m)| acc * rational_powi(ti, -m));
                    ok &= spec.max_eigenvalue() == product;
                    ok &= spec.trace() >= rational_powi(&t_max, -(level as i64));
                    count += 1;
                }
            }
        }
    }
    report("5", "largest modular eigenvalue", ok, format!("{count} spectra exact"), t.elapsed())
}

fn c6() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    let mut weights = 0;
    for (ty, rank) in [(LieType::A, 1), (LieType::A, 2), (LieType::A, 3), (LieType::B, 2), (LieType::B, 3), (LieType::C, 3), (LieType::G, 2)] {
        let rs = RootSystem::new(ty, rank).unwrap();
        for level in 0..=5 {
            for mu in rs.dominant_weights_of_level(level) {
                for q in [r(1, 2), r(2, 3)] {
                    ok &= rs.quantum_dimension(&mu, &q).unwrap() == rs.quantum_dimension_weyl(&mu, &q).unwrap();
                }
                weights += 1;
            }
        }
    }
    let hp = Hp::new(192);
    let mut worst = 0f64;
    for tq in [r(21, 10), r(5, 2), r(7, 2), r(6, 1)] {
        let tf = hp.from_rational(&tq);
        for k in 0..=300 {
            let a = chebyshev_f_hp(k, &tf, &hp).unwrap();
            let b = chebyshev_f_closed(k, &tf, &hp).unwrap();
            worst = worst.max(to_f64(&hp.div(&hp.sub(&a, &b), &b)).abs());
        }
    }
    ok &= worst <= TOL_CHEB_REL;
    let mut fusion_ok = true;
    for (rule, x) in [(Rule::SU2, r(7, 2)), (Rule::SU2, r(3, 1)), (Rule::SO3, r(5, 1)), (Rule::SO3, r(13, 2))] {
        let dim = |k: u64| match rule {
            Rule::SU2 => chebyshev_f(k, &x).unwrap(),
            Rule::SO3 => chebyshev_g(k, &x).unwrap(),
        };
        let table: Vec<BigRational> = (0..=81).map(dim).collect();
        for k in 0..=40u64 {
            for l in 0..=40u64 {
                let mut rhs = BigRational::zero();
                for (j, m) in tensor_decompose(rule, k, l).iter() {
                    rhs += BigRational::from_integer(m.clone()) * &table[j as usize];
                }
                fusion_ok &= rhs == &table[k as usize] * &table[l as usize];
            }
        }
    }
    ok &= fusion_ok;
    report(
        "6",
        "dimension oracles agree",
        ok,
        format!("{weights} weights exact; Chebyshev worst rel {worst:.1e}; fusion k,l <= 40 exact: {fusion_ok}"),
        t.elapsed(),
    )
}

fn empirical_base(spec: &str, k: u64) -> f64 {
    to_f64(&decay_rate(&model(spec), k, 128).unwrap().empirical_base)
}

fn c7() -> Vec<Outcome> {
    let t = Instant::now();
    let oplus = empirical_base("oplus:3:3.5", 50);
    let target_a = 0.82169;
    let rel_a = (oplus - target_a).abs() / target_a;
    let a = report(
        "7a",
        "decay base oplus:3:3.5",
        rel_a <= TOL_DECAY_REL,
        format!("empirical {oplus:.6} vs {target_a} (rel {rel_a:.2e})"),
        t.elapsed(),
    );

    let t = Instant::now();
    let aut = empirical_base("aut:5:5", 50);
    let target_b = 2.0 / (3.0 + 5f64.sqrt());
    let rel_b = (aut - target_b).abs() / target_b;
    let b = report(
        "7b",
        "decay base aut:5:5 against 2/(3+sqrt5)",
        rel_b <= TOL_DECAY_REL,
        format!("empirical {aut:.6} vs {target_b:.5} (rel {rel_b:.2e}); see notes on the g_k(dimB), g_k(d1+1) convention"),
        t.elapsed(),
    );

    let t = Instant::now();
    let theory = to_f64(&decay_rate(&model("aut:5:5"), 50, 128).unwrap().theoretical_base);
    let rel_b2 = (aut - theory).abs() / theory;
    let b2 = report(
        "7b'",
        "decay base aut:5:5 against its closed form",
        rel_b2 <= TOL_DECAY_REL,
        format!("empirical {aut:.6} vs {theory:.6} = (3+sqrt5)/(4+sqrt12) (rel {rel_b2:.2e})"),
        t.elapsed(),
    );

    let t = Instant::now();
    let hp = Hp::new(256);
    let tf = hp.from_rational(&r(7, 2));
    let residual = to_f64(&hp.sub(&normalized_growth(200, &tf, &hp).unwrap(), &normalized_limit(&tf, &hp))).abs();
    let c = report(
        "7c",
        "normalized Chebyshev limit",
        residual < TOL_LIMIT,
        format!("residual {residual:.2e} at k = 200, t = 3.5"),
        t.elapsed(),
    );
    vec![a, b, b2, c]
}

fn c8() -> Outcome {
    let t = Instant::now();
    let dj = model("djq:A1:1/2");
    let fo = model("oplus:2:5/2");
    let mut ok = true;
    for k in 0..=60 {
        let a = dj.irr_data(&dj.enumerate_level(k)[0]).unwrap();
        let b = fo.irr_data(&IrrLabel::Level(k)).unwrap();
        ok &= a.n == b.n && a.d == b.d;
    }
    let mut worst = 0f64;
    for p in [2, 4, 8, 16] {
        let opts = KpOptions::default();
        let a = kp_constant(&dj, &r(p, 1), &opts).unwrap().interval().unwrap();
        let b = kp_constant(&fo, &r(p, 1), &opts).unwrap().interval().unwrap();
        ok &= cmp(&a.0, &b.1) <= 0 && cmp(&b.0, &a.1) <= 0;
        let gap = (to_f64(&a.0) - to_f64(&b.0)).abs().max((to_f64(&a.1) - to_f64(&b.1)).abs());
        worst = worst.max(gap);
    }
    ok &= worst <= TOL_BRIDGE;
    report("8", "SU_q(2) bridge", ok, format!("dims k <= 60 exact, worst endpoint gap {worst:.1e}"), t.elapsed())
}

fn c9() -> Outcome {
    let t = Instant::now();
    let mut ok = corollary_exponents(&r(4, 1), &r(3, 1)).unwrap() == [r(2, 1), r(3, 1), r(8, 3)];
    for p in [4, 8, 16] {
        let pr = r(p, 1);
        let e = corollary_exponents(&pr, &r(5, 2)).unwrap();
        ok &= e[0] == &pr / (&pr - r(2, 1));
        ok &= e[1] == (r(2, 1) * &pr - r(2, 1)) / (&pr - r(2, 1));
        ok &= e[2] == r(2, 1) * &pr * r(3, 2) / (r(5, 2) * (&pr - r(2, 1)));
    }
    let grid = [r(1, 1), r(3, 2), r(2, 1), r(3, 1), r(5, 1), r(10, 1)];
    let mut monotone = true;
    for spec in ["djq:A1:1/2", "oplus:3:3.5"] {
        let rep = kp_constant(&model(spec), &r(4, 1), &KpOptions::default()).unwrap();
        let mut prev: Option<BigRational> = None;
        for rr in &grid {
            let c = corollary_constants(&rep, rr).unwrap();
            let v = to_rational(&c.constants[2]).unwrap();
            monotone &= prev.as_ref().map_or(true, |p| &v >= p);
            prev = Some(v);
        }
    }
    ok &= monotone;
    let e = corollary_exponents(&r(4, 1), &r(3, 1)).unwrap();
    report(
        "9",
        "corollary exponents and constants",
        ok,
        format!("p=4, r=3: ({}); monotone in r: {monotone}", e.iter().map(format_rational).collect::<Vec<_>>().join(", ")),
        t.elapsed(),
    )
}

fn cqg(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_cqg")).args(args).output().unwrap();
    out.stdout
}

fn c10() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    for m in ["djq:A2:1/2", "aut:5:5"] {
        let v1 = cqg(&["verify", "--model", m, "--threads", "1"]);
        let v2 = cqg(&["verify", "--model", m, "--threads", "4"]);
        let k1 = cqg(&["kp", "--model", m, "--p", "8", "--threads", "1"]);
        let k2 = cqg(&["kp", "--model", m, "--p", "8", "--threads", "4"]);
        let k3 = cqg(&["kp", "--model", m, "--p", "8"]);
        ok &= !v1.is_empty() && v1 == v2 && !k1.is_empty() && k1 == k2 && k2 == k3;
    }
    report("10", "byte-identical reports across thread counts", ok, "verify and kp, 1 vs 4 threads".into(), t.elapsed())
}

#[test]
fn acceptance() {
    let mut outcomes = vec![c1(), c2(), c3(), c4(), c5(), c6()];
    outcomes.extend(c7());
    outcomes.extend([c8(), c9(), c10()]);
    let mut unexpected = Vec::new();
    for o in &outcomes {
        let red = KNOWN_RED.contains(&o.id);
        if o.passed == red {
            unexpected.push(format!("{} {}", o.id, if o.passed { "now passes" } else { "fails" }));
        }
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("acceptance: {passed}/{} pass; known red: {KNOWN_RED:?}", outcomes.len());
    assert!(unexpected.is_empty(), "unexpected status: {unexpected:?}");
}
