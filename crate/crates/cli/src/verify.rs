//! Invariant suite run by `cqg verify`.

use cqg_core::chebyshev::{chebyshev_f, chebyshev_g, chebyshev_f_hp, envelope};
use cqg_core::fusion::tensor_decompose;
use cqg_core::khintchine::{decay_rate, kp_constant, KpOptions, Verdict};
use cqg_core::models::{Family, IrrLabel, QuantumGroupModel};
use cqg_core::numeric::{format_rational as fr, hp::cmp, Hp};
use cqg_core::schur::{lemma_base_check, modular_duality_check, random_series, synthetic_spectrum, theorem_p2_check};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::Tabular;

/// Spectral checks are skipped above this classical dimension.
const SPECTRUM_DIM_CAP: u64 = 400;
/// Modular duality enumerates `n⁴` quadruples.
const DUALITY_DIM_CAP: u64 = 12;
const SEED: u64 = 0x5eed;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct VerifyResult {
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl VerifyResult {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

impl Tabular for VerifyResult {
    fn header(&self) -> Vec<&'static str> {
        vec!["name", "passed", "detail"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.checks.iter().map(|c| vec![c.name.to_string(), c.passed.to_string(), c.detail.clone()]).collect()
    }
}

fn labels(model: &QuantumGroupModel, max_level: u64) -> Vec<IrrLabel> {
    (0..=max_level).flat_map(|k| model.enumerate_level(k)).collect()
}

/// Exact checks go to length 3 in rank ≤ 2 and length 2 beyond.
fn depth(model: &QuantumGroupModel) -> u64 {
    if model.label_rank() <= 2 {
        3
    } else {
        2
    }
}

fn small_labels(model: &QuantumGroupModel, cap: u64) -> Result<Vec<(IrrLabel, u64)>, CliError> {
    let mut out = Vec::new();
    for label in labels(model, depth(model)) {
        let n = model.irr_data(&label)?.n;
        if n <= BigInt::from(cap) {
            out.push((label, u64::try_from(n).expect("bounded by cap")));
        }
    }
    Ok(out)
}

fn kac_consistency(model: &QuantumGroupModel) -> Result<Check, CliError> {
    let mut all_equal = true;
    let levels = depth(model) + 1;
    for label in labels(model, levels) {
        let data = model.irr_data(&label)?;
        all_equal &= BigRational::from_integer(data.n) == data.d;
    }
    Ok(Check {
        name: "kac_consistency",
        passed: all_equal == model.is_kac(),
        detail: format!("kac type: {}; n = d through length {levels}: {}", yes_no(model.is_kac()), yes_no(all_equal)),
    })
}

fn dimension_oracle(model: &QuantumGroupModel) -> Result<Check, CliError> {
    let mut checked = 0;
    let mut bad = Vec::new();
    match model.family() {
        Family::FreeOrthogonal { n, nq } => {
            let t = BigRational::from_integer((*n).into());
            for k in 0..=20 {
                let data = model.irr_data(&IrrLabel::Level(k))?;
                let ok = BigRational::from_integer(data.n) == chebyshev_f(k, &t).expect("N >= 2")
                    && data.d == chebyshev_f(k, nq).expect("Nq >= N");
                checked += 1;
                if !ok {
                    bad.push(k.to_string());
                }
            }
        }
        Family::QuantumAutomorphism { dim_b, d1 } => {
            let x = BigRational::from_integer((*dim_b).into());
            let y = d1 + BigRational::one();
            for k in 0..=20 {
                let data = model.irr_data(&IrrLabel::Level(k))?;
                let ok = BigRational::from_integer(data.n) == chebyshev_g(k, &x).expect("dimB >= 4")
                    && data.d == chebyshev_g(k, &y).expect("d1 + 1 >= dimB");
                checked += 1;
                if !ok {
                    bad.push(k.to_string());
                }
            }
        }
        Family::DrinfeldJimbo { .. } => {
            for (label, _) in small_labels(model, SPECTRUM_DIM_CAP)? {
                let data = model.irr_data(&label)?;
                let q = model.q_spectrum(&label)?.expect("weight labels carry spectra");
                let ok = BigInt::from(q.dimension()) == data.n && q.trace() == data.d;
                checked += 1;
                if !ok {
                    bad.push(label.to_string());
                }
            }
        }
    }
    Ok(Check {
        name: "dimension_oracle",
        passed: bad.is_empty(),
        detail: format!("{checked} labels; mismatches: [{}]", bad.join(" ")),
    })
}

fn fusion_homomorphism(model: &QuantumGroupModel) -> Result<Option<Check>, CliError> {
    let Some(rule) = model.fusion_rule() else { return Ok(None) };
    let mut bad = Vec::new();
    let data = |j| model.irr_data(&IrrLabel::Level(j));
    for k in 0..=8 {
        for l in 0..=8 {
            let (a, b) = (data(k)?, data(l)?);
            let mut n = BigInt::zero();
            let mut d = BigRational::zero();
            for (j, m) in tensor_decompose(rule, k, l).iter() {
                let c = data(j)?;
                n += m * &c.n;
                d += BigRational::from_integer(m.clone()) * &c.d;
            }
            if n != &a.n * &b.n || d != &a.d * &b.d {
                bad.push(format!("{k}x{l}"));
            }
        }
    }
    Ok(Some(Check {
        name: "fusion_homomorphism",
        passed: bad.is_empty(),
        detail: format!("{rule}, k,l <= 8; failures: [{}]", bad.join(" ")),
    }))
}

fn max_eigenvalue(model: &QuantumGroupModel) -> Result<Option<Check>, CliError> {
    let Family::DrinfeldJimbo { root_system, q } = model.family() else { return Ok(None) };
    let t = root_system.t_constants(q).map_err(cqg_core::models::ModelError::from)?;
    let t_max = t.iter().max().expect("rank >= 1").clone();
    let mut passed = t.iter().all(|ti| ti < &BigRational::one());
    let mut checked = 0;
    for (label, _) in small_labels(model, SPECTRUM_DIM_CAP)? {
        let IrrLabel::Weight(mu) = &label else { continue };
        let spec = model.q_spectrum(&label)?.expect("weight labels carry spectra");
        let predicted = root_system.predicted_max_eigenvalue(mu, q).map_err(cqg_core::models::ModelError::from)?;
        let lower = cqg_core::numeric::rational_powi(&t_max, -(label.length() as i64));
        passed &= spec.max_eigenvalue() == predicted && spec.trace() >= lower;
        checked += 1;
    }
    let t_text: Vec<String> = t.iter().map(fr).collect();
    Ok(Some(Check {
        name: "max_eigenvalue",
        passed,
        detail: format!("{checked} spectra; t = [{}]", t_text.join(" ")),
    }))
}

fn lemma_and_duality(model: &QuantumGroupModel) -> Result<Vec<Check>, CliError> {
    let mut lemma_ok = true;
    let mut duality_ok = true;
    let mut lemma_count = 0;
    let mut duality_count = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    if model.root_system().is_some() {
        for (label, n) in small_labels(model, SPECTRUM_DIM_CAP)? {
            let q = model.q_spectrum(&label)?.expect("weight labels carry spectra");
            lemma_ok &= lemma_base_check(&q)?.equal;
            lemma_count += 1;
            if n <= DUALITY_DIM_CAP {
                duality_ok &= modular_duality_check(&q)?.is_ok();
                duality_count += 1;
            }
        }
    } else {
        // Spectra are not fixed by (n, d) here; the identity is checked on
        // synthetic spectra of the same sizes.
        for (_, n) in small_labels(model, SPECTRUM_DIM_CAP)? {
            let q = synthetic_spectrum(&mut rng, n as usize);
            lemma_ok &= lemma_base_check(&q)?.equal;
            lemma_count += 1;
            if n <= DUALITY_DIM_CAP {
                duality_ok &= modular_duality_check(&q)?.is_ok();
                duality_count += 1;
            }
        }
    }
    Ok(vec![
        Check { name: "lemma_base_case", passed: lemma_ok, detail: format!("{lemma_count} spectra, exact") },
        Check { name: "modular_duality", passed: duality_ok, detail: format!("{duality_count} spectra, exact") },
    ])
}

fn theorem_p2() -> Result<Check, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0f64;
    let mut holds = true;
    for _ in 0..20 {
        let series = random_series(&mut rng, 3, 4);
        let check = theorem_p2_check(&series, None)?;
        let rel = (check.lhs * check.lhs - check.direct * check.direct).abs() / (check.direct * check.direct);
        worst = worst.max(rel);
        holds &= check.holds;
    }
    Ok(Check {
        name: "theorem_p2",
        passed: holds && worst <= 1e-10,
        detail: format!("20 random series; worst relative gap {worst:.3e}"),
    })
}

fn kp_verdict(model: &QuantumGroupModel, cfg: &RunConfig) -> Result<Check, CliError> {
    let p = BigRational::from_integer(4.into());
    let opts = KpOptions {
        tol: cfg.tol.clone(),
        max_length: cfg.max_length,
        precision_bits: cfg.precision_bits,
        threads: cfg.threads,
    };
    let report = kp_constant(model, &p, &opts)?;
    let passed = match (&report.verdict, model.is_kac()) {
        (Verdict::Divergent { .. }, true) => true,
        (Verdict::Converged { lower, upper }, false) => {
            let tail_ok = report.tail_bound.as_ref().is_some_and(|t| {
                let hp = Hp::new(cfg.precision_bits);
                cmp(t, &hp.from_rational(&cfg.tol)) <= 0
            });
            tail_ok && cmp(lower, upper) <= 0
        }
        _ => false,
    };
    Ok(Check {
        name: "kp_verdict",
        passed,
        detail: format!("p=4: {} after length {}", report.verdict.name(), report.terms_summed),
    })
}

fn decay(model: &QuantumGroupModel, cfg: &RunConfig) -> Result<Check, CliError> {
    let horizon = if model.label_rank() <= 2 { 20 } else { 6 };
    let report = decay_rate(model, horizon, cfg.precision_bits)?;
    let hp = Hp::new(cfg.precision_bits);
    let one = hp.from_i64(1);
    let c = cmp(&report.theoretical_base, &one);
    let passed = if model.is_kac() { c == 0 } else { c < 0 };
    Ok(Check {
        name: "decay_base",
        passed,
        detail: format!("theoretical base {:.6}", cqg_core::numeric::to_f64(&report.theoretical_base)),
    })
}

fn chebyshev_envelope(model: &QuantumGroupModel, cfg: &RunConfig) -> Result<Option<Check>, CliError> {
    let Family::FreeOrthogonal { nq, .. } = model.family() else { return Ok(None) };
    if nq <= &BigRational::from_integer(2.into()) {
        return Ok(None);
    }
    let hp = Hp::new(cfg.precision_bits);
    let t = hp.from_rational(nq);
    let mut passed = true;
    for k in 0..=50 {
        let value = chebyshev_f_hp(k, &t, &hp).expect("Nq > 2");
        passed &= envelope(k, &t, &hp).expect("Nq > 2").contains(&value);
    }
    Ok(Some(Check { name: "chebyshev_envelope", passed, detail: "f_k(Nq), k <= 50".into() }))
}

pub fn run(model: &QuantumGroupModel, cfg: &RunConfig) -> Result<VerifyResult, CliError> {
    let mut checks = vec![kac_consistency(model)?, dimension_oracle(model)?];
    checks.extend(fusion_homomorphism(model)?);
    checks.extend(max_eigenvalue(model)?);
    checks.extend(lemma_and_duality(model)?);
    checks.push(theorem_p2()?);
    checks.push(kp_verdict(model, cfg)?);
    checks.push(decay(model, cfg)?);
    checks.extend(chebyshev_envelope(model, cfg)?);
    let passed = checks.iter().filter(|c| c.passed).count();
    Ok(VerifyResult { passed, failed: checks.len() - passed, checks })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
