//! Certified evaluation of
//! `K_p² = Σ_α ‖χ_α‖∞^{2−4/p} (n_α/d_α)^{2/p}`, summed level by level.
//!
//! Tails are bounded by explicit majorants `U_k` of the level sums whose
//! consecutive ratio is nonincreasing in `k`; once that ratio `θ` drops below
//! one at `k = L+1`, the tail is at most `U_{L+1}/(1−θ)`.
//!
//! - ℕ₀-graded families: Chebyshev envelopes give `n_k/d_k ≤ A_L (k+1)^e R^{k+1}`
//!   for `k > L`, with `e = 1` only when the classical dimension grows linearly.
//! - Drinfeld-Jimbo: `n_μ ≤ Π_{α>0}(1 + |μ|·c_α)` with
//!   `c_α = max_i c_i(α) D_i / (ρ, α)`, `d_μ ≥ t_max^{−|μ|}`, and at most
//!   `C(k+r−1, r−1)` dominant weights of level `k`.
//!
//! Level sums are computed independently (in parallel when allowed), each in
//! a fresh working-precision context, and reduced in ascending order.

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::chebyshev::growth_base;
use crate::models::{Family, ModelError, QuantumGroupModel};
use crate::numeric::{format_rational, hp::cmp, Hp, DEFAULT_PRECISION_BITS};
use crate::rootsys::{RootSystem, Weight};

/// Relative slack applied to every reported bound, in bits below the working precision.
const SLACK_BITS: usize = 40;
const BLOCK: u64 = 32;
const KAC_WITNESS_LEVELS: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KhintchineError {
    #[error("p must be at least 2, got {0}")]
    PBelowTwo(String),
    #[error("tolerance must be positive, got {0}")]
    NonPositiveTol(String),
    #[error("max length must be at least 1")]
    ZeroMaxLength,
    #[error("{0} is of Kac type: terms do not decay and no finite tail bound exists")]
    KacNoTail(String),
    #[error("the majorant ratio is not yet below one at level {0}")]
    NotCertifiable(u64),
    #[error("p must be a power of two at least 4, got {0}")]
    NotDyadic(String),
    #[error("r must satisfy r >= 1, got {0}")]
    RBelowOne(String),
    #[error("K_p did not converge ({0}); constants need a certified value")]
    NotConverged(&'static str),
    #[error("could not start worker pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl KhintchineError {
    pub fn code(&self) -> &'static str {
        match self {
            KhintchineError::PBelowTwo(_) => "KP_P_BELOW_TWO",
            KhintchineError::NonPositiveTol(_) => "KP_NONPOSITIVE_TOL",
            KhintchineError::ZeroMaxLength => "KP_ZERO_MAX_LENGTH",
            KhintchineError::KacNoTail(_) => "KP_KAC_NO_TAIL",
            KhintchineError::NotCertifiable(_) => "KP_NOT_CERTIFIABLE",
            KhintchineError::NotDyadic(_) => "KP_P_NOT_DYADIC",
            KhintchineError::RBelowOne(_) => "KP_R_BELOW_ONE",
            KhintchineError::NotConverged(_) => "KP_NOT_CONVERGED",
            KhintchineError::ThreadPool(_) => "KP_THREAD_POOL",
            KhintchineError::Model(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct KpOptions {
    pub tol: BigRational,
    pub max_length: u64,
    pub precision_bits: usize,
    /// `None` uses the global rayon pool; `Some(1)` runs sequentially.
    pub threads: Option<usize>,
}

impl Default for KpOptions {
    fn default() -> Self {
        KpOptions {
            tol: BigRational::new(BigInt::one(), BigInt::from(10u64.pow(10))),
            max_length: 5000,
            precision_bits: DEFAULT_PRECISION_BITS,
            threads: None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    /// `lower ≤ K_p ≤ upper`.
    Converged { lower: BigFloat, upper: BigFloat },
    /// Every one of the first `witness_levels` levels has a term of at least
    /// `term_lower_bound`, and the same bound holds at every level.
    Divergent { term_lower_bound: BigFloat, witness_levels: u64 },
    /// `max_length` was reached before the tail dropped below `tol`.
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Converged { .. } => "converged",
            Verdict::Divergent { .. } => "divergent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct KpReport {
    pub p: BigRational,
    /// Largest length `L` included in the partial sum.
    pub terms_summed: u64,
    pub partial_sum: BigFloat,
    pub tail_bound: Option<BigFloat>,
    pub verdict: Verdict,
    pub precision_bits: usize,
}

impl KpReport {
    /// `[√partial, √(partial + tail)]` whenever a tail bound is available.
    pub fn interval(&self) -> Option<(BigFloat, BigFloat)> {
        if let Verdict::Converged { lower, upper } = &self.verdict {
            return Some((lower.clone(), upper.clone()));
        }
        let tail = self.tail_bound.as_ref()?;
        let hp = Hp::new(self.precision_bits);
        Some(bracket(&hp, &self.partial_sum, tail))
    }
}

fn bracket(hp: &Hp, partial: &BigFloat, tail: &BigFloat) -> (BigFloat, BigFloat) {
    let lower = hp.sqrt(&hp.deflate(partial, SLACK_BITS));
    let upper = hp.sqrt(&hp.inflate(&hp.add(partial, tail), SLACK_BITS));
    (lower, upper)
}

/// `(2 − 4/p, 2/p)`: exponents of `‖χ‖∞` and of `n/d`.
#[derive(Debug, Clone)]
struct Exponents {
    chi: BigRational,
    ratio: BigRational,
    /// `(a·D, b·D, log₂ D)` when both exponents share a small dyadic denominator `D`.
    dyadic: Option<(usize, usize, u32)>,
}

impl Exponents {
    fn new(p: &BigRational) -> Result<Self, KhintchineError> {
        if p < &BigRational::from_integer(2.into()) {
            return Err(KhintchineError::PBelowTwo(format_rational(p)));
        }
        let ratio = BigRational::from_integer(2.into()) / p;
        let chi = BigRational::from_integer(2.into()) - &ratio * BigRational::from_integer(2.into());
        let den = num_integer::Integer::lcm(chi.denom(), ratio.denom());
        let dyadic = den.to_u64().filter(|d| d.is_power_of_two() && *d <= 1 << 16).and_then(|d| {
            let scale = BigRational::from_integer(d.into());
            let a = (&chi * &scale).to_integer().to_usize()?;
            let b = (&ratio * &scale).to_integer().to_usize()?;
            Some((a, b, d.trailing_zeros()))
        });
        Ok(Exponents { chi, ratio, dyadic })
    }
}

/// `χ^a · x^b`.
fn term_hp(hp: &mut Hp, chi: &BigFloat, x: &BigFloat, e: &Exponents) -> BigFloat {
    if let Some((a, b, roots)) = e.dyadic {
        let mut v = hp.mul(&hp.powi(chi, a), &hp.powi(x, b));
        for _ in 0..roots {
            v = hp.sqrt(&v);
        }
        return v;
    }
    let chi_part = hp.pow_rational(chi, &e.chi);
    let ratio_part = hp.pow_rational(x, &e.ratio);
    hp.mul(&chi_part, &ratio_part)
}

fn term(hp: &mut Hp, chi: &BigInt, n: &BigInt, d: &BigRational, e: &Exponents) -> BigFloat {
    let ratio = BigRational::from_integer(n.clone()) / d;
    let x = hp.from_rational(&ratio);
    let chi = hp.from_int(chi);
    term_hp(hp, &chi, &x, e)
}

/// Exact two-term recursion `h_{k+1} = c·h_k − h_{k−1}`, `h_0 = 1`, `h_1 = first`.
#[derive(Clone)]
struct Recurrence {
    coef: BigRational,
    prev: BigRational,
    cur: BigRational,
}

impl Recurrence {
    fn new(first: BigRational, coef: BigRational) -> Self {
        // h_{-1} = c − h_1, so the recursion reproduces h_1 from h_0 = 1.
        let prev = &coef - &first;
        Recurrence { coef, prev, cur: BigRational::one() }
    }

    /// Returns `h_k` and advances to `k + 1`.
    fn next(&mut self) -> BigRational {
        let next = &self.coef * &self.cur - &self.prev;
        self.prev = std::mem::replace(&mut self.cur, next);
        self.prev.clone()
    }
}

/// Sequential generator of exact `(χ_k, n_k, d_k)` for the ℕ₀-graded families.
struct N0Stream {
    chi_scale: u64,
    n: Recurrence,
    d: Recurrence,
    k: u64,
}

impl N0Stream {
    fn new(model: &QuantumGroupModel) -> Option<Self> {
        let two = BigRational::from_integer(2.into());
        match model.family() {
            Family::FreeOrthogonal { n, nq } => {
                let t = BigRational::from_integer((*n).into());
                Some(N0Stream { chi_scale: 1, n: Recurrence::new(t.clone(), t), d: Recurrence::new(nq.clone(), nq.clone()), k: 0 })
            }
            Family::QuantumAutomorphism { dim_b, d1 } => {
                let x = BigRational::from_integer((*dim_b).into());
                let y = d1 + BigRational::one();
                let one = BigRational::one();
                Some(N0Stream {
                    chi_scale: 2,
                    n: Recurrence::new(&x - &one, &x - &two),
                    d: Recurrence::new(&y - &one, &y - &two),
                    k: 0,
                })
            }
            Family::DrinfeldJimbo { .. } => None,
        }
    }

    fn next(&mut self) -> (BigInt, BigInt, BigRational) {
        let chi = BigInt::from(self.chi_scale * self.k + 1);
        self.k += 1;
        (chi, self.n.next().to_integer(), self.d.next())
    }
}

fn with_pool<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, KhintchineError> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| KhintchineError::ThreadPool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Level-sum producer that keeps the sequential ℕ₀ recursion state between blocks.
struct LevelSums<'a> {
    model: &'a QuantumGroupModel,
    exps: Exponents,
    prec: usize,
    stream: Option<N0Stream>,
}

impl<'a> LevelSums<'a> {
    fn new(model: &'a QuantumGroupModel, exps: Exponents, prec: usize) -> Self {
        LevelSums { model, exps, prec, stream: N0Stream::new(model) }
    }

    /// Sums for levels `start..end`, in order. Must be called on consecutive ranges.
    fn block(&mut self, start: u64, end: u64) -> Vec<BigFloat> {
        let exps = &self.exps;
        let prec = self.prec;
        match (&mut self.stream, self.model.family()) {
            (Some(stream), _) => {
                let data: Vec<_> = (start..end).map(|_| stream.next()).collect();
                data.par_iter()
                    .map(|(chi, n, d)| {
                        let mut hp = Hp::new(prec);
                        term(&mut hp, chi, n, d, exps)
                    })
                    .collect()
            }
            (None, Family::DrinfeldJimbo { root_system, q }) => (start..end)
                .into_par_iter()
                .map(|k| dj_level_sum(root_system, q, k, exps, prec))
                .collect(),
            (None, _) => unreachable!("ℕ₀ families always carry a stream"),
        }
    }
}

fn dj_level_sum(rs: &RootSystem, q: &BigRational, k: u64, e: &Exponents, prec: usize) -> BigFloat {
    let mut hp = Hp::new(prec);
    let rho = rs.rho();
    let roots = rs.positive_roots();
    // [m] ∝ q^{−m} − q^{m}; the common factor cancels between numerator and denominator.
    let top = roots.iter().map(|a| rs.pair_with_root(&Weight(vec![k as i64 + 1; rs.rank()]), a)).max().unwrap_or(1);
    let q_hp = hp.from_rational(q);
    let q_inv = hp.recip(&q_hp);
    let mut bracket_table = Vec::with_capacity(top as usize + 1);
    let (mut up, mut down) = (hp.from_i64(1), hp.from_i64(1));
    for _ in 0..=top {
        bracket_table.push(hp.sub(&up, &down));
        up = hp.mul(&up, &q_inv);
        down = hp.mul(&down, &q_hp);
    }
    let rho_den = roots.iter().fold(hp.from_i64(1), |acc, a| {
        hp.mul(&acc, &bracket_table[rs.pair_with_root(&rho, a) as usize])
    });
    let mut acc = hp.from_i64(0);
    for mu in rs.dominant_weights_of_level(k) {
        let n = rs.weyl_dimension(&mu).expect("dominant by construction");
        let shifted = Weight(mu.coeffs().iter().map(|c| c + 1).collect());
        let num = roots.iter().fold(hp.from_i64(1), |acc, a| {
            hp.mul(&acc, &bracket_table[rs.pair_with_root(&shifted, a) as usize])
        });
        let d = hp.div(&num, &rho_den);
        let n_hp = hp.from_int(&n);
        let ratio = hp.div(&n_hp, &d);
        let t = term_hp(&mut hp, &n_hp, &ratio, e);
        acc = hp.add(&acc, &t);
    }
    acc
}

/// Exact-input majorant data for the tail.
enum TailData {
    N0 {
        /// 1 for the free orthogonal family, 2 for the quantum automorphism family.
        s: u64,
        /// Growth base of the classical dimensions, `None` when they grow linearly.
        u_n: Option<BigFloat>,
        u_q: BigFloat,
    },
    DrinfeldJimbo {
        rank: u64,
        c_alpha: Vec<BigRational>,
        t_max: BigRational,
    },
}

impl TailData {
    fn new(model: &QuantumGroupModel, hp: &Hp) -> Result<Self, KhintchineError> {
        if model.is_kac() {
            return Err(KhintchineError::KacNoTail(model.spec()));
        }
        Ok(match model.family() {
            Family::FreeOrthogonal { n, nq } => {
                let t_n = hp.from_i64(*n as i64);
                let u_n = (*n > 2).then(|| growth_base(&t_n, hp).expect("N >= 2"));
                TailData::N0 { s: 1, u_n, u_q: growth_base(&hp.from_rational(nq), hp).expect("Nq >= 2") }
            }
            Family::QuantumAutomorphism { dim_b, d1 } => {
                let x = hp.from_i64(*dim_b as i64);
                let u_n = (*dim_b > 4).then(|| growth_base(&hp.sqrt(&x), hp).expect("dimB >= 4"));
                let y = hp.from_rational(&(d1 + BigRational::one()));
                TailData::N0 { s: 2, u_n, u_q: growth_base(&hp.sqrt(&y), hp).expect("d1 + 1 >= 4") }
            }
            Family::DrinfeldJimbo { root_system, q } => {
                let rho = root_system.rho();
                let d = root_system.half_lengths();
                let c_alpha = root_system
                    .positive_roots()
                    .iter()
                    .map(|root| {
                        let top = root.iter().zip(d).map(|(c, di)| c * di).max().unwrap_or(0);
                        BigRational::new(top.into(), root_system.pair_with_root(&rho, root).into())
                    })
                    .collect();
                let t_max = root_system.t_constants(q).map_err(ModelError::from)?.into_iter().max().expect("rank >= 1");
                TailData::DrinfeldJimbo { rank: root_system.rank() as u64, c_alpha, t_max }
            }
        })
    }

    /// Bound on `Σ_{|α| > level} term_α`, or `None` while the majorant ratio is ≥ 1.
    fn tail(&self, level: u64, e: &Exponents, hp: &mut Hp) -> Option<BigFloat> {
        let one = hp.from_i64(1);
        let (head, theta) = match self {
            TailData::N0 { s, u_n, u_q } => {
                let inv_q = hp.recip(u_q);
                let gap_q = hp.sub(u_q, &inv_q);
                let m_next = s * (level + 1);
                let shrink = hp.sub(&one, &hp.powi(&inv_q, (2 * (m_next + 1)) as usize));
                let d_const = hp.div(&hp.mul(&hp.powi(&inv_q, (*s - 1) as usize), &shrink), &gap_q);
                let (n_const, base, linear) = match u_n {
                    Some(u) => {
                        let gap = hp.sub(u, &hp.recip(u));
                        let c = hp.div(&hp.recip(&hp.powi(u, (*s - 1) as usize)), &gap);
                        (c, hp.powi(&hp.div(u, u_q), *s as usize), false)
                    }
                    None => (hp.from_i64(*s as i64), hp.powi(&inv_q, *s as usize), true),
                };
                let a_l = hp.div(&n_const, &d_const);
                let sigma = if linear { &e.chi + &e.ratio } else { e.chi.clone() };
                let j = level + 2;
                let step = BigRational::new(BigInt::from(j + 1), BigInt::from(j));
                let growth = hp.pow_rational(&hp.from_rational(&step), &sigma);
                let rho = hp.pow_rational(&base, &e.ratio);
                let theta = hp.mul(&growth, &rho);
                let chi_part = hp.pow_rational(&hp.from_i64(*s as i64), &e.chi);
                let ratio_part = hp.pow_rational(&a_l, &e.ratio);
                let c = hp.mul(&chi_part, &ratio_part);
                let poly = hp.pow_rational(&hp.from_i64(j as i64), &sigma);
                let geo = hp.pow_rational(&base, &(&e.ratio * BigRational::from_integer(j.into())));
                (hp.mul(&c, &hp.mul(&poly, &geo)), theta)
            }
            TailData::DrinfeldJimbo { rank, c_alpha, t_max } => {
                let k = level + 1;
                let poly_at = |k: u64| -> BigRational {
                    let kk = BigRational::from_integer(k.into());
                    c_alpha.iter().fold(BigRational::one(), |acc, c| acc * (BigRational::one() + &kk * c))
                };
                let pk = poly_at(k);
                let pk1 = poly_at(k + 1);
                let ab = &e.chi + &e.ratio;
                let count: BigInt = binomial(BigInt::from(k + rank - 1), BigInt::from(rank - 1));
                let tk = hp.pow_rational(&hp.from_rational(t_max), &(&e.ratio * BigRational::from_integer(k.into())));
                let poly = hp.pow_rational(&hp.from_rational(&pk), &ab);
                let head = hp.mul(&hp.from_int(&count), &hp.mul(&poly, &tk));
                let count_step = BigRational::new(BigInt::from(k + rank), BigInt::from(k + 1));
                let poly_step = hp.pow_rational(&hp.from_rational(&(pk1 / pk)), &ab);
                let t_step = hp.pow_rational(&hp.from_rational(t_max), &e.ratio);
                let theta = hp.mul(&hp.from_rational(&count_step), &hp.mul(&poly_step, &t_step));
                (head, theta)
            }
        };
        let theta = hp.inflate(&theta, SLACK_BITS);
        if cmp(&theta, &one) >= 0 {
            return None;
        }
        let bound = hp.div(&head, &hp.sub(&one, &theta));
        Some(hp.inflate(&bound, SLACK_BITS))
    }
}

/// Certified upper bound on the tail beyond length `level`.
pub fn certified_tail(
    model: &QuantumGroupModel,
    p: &BigRational,
    level: u64,
    precision_bits: usize,
) -> Result<BigFloat, KhintchineError> {
    let e = Exponents::new(p)?;
    let mut hp = Hp::new(precision_bits);
    let data = TailData::new(model, &hp)?;
    data.tail(level, &e, &mut hp).ok_or(KhintchineError::NotCertifiable(level))
}

/// Per-level sums `Σ_{|α|=k} term_α` for `k = 0..=max_level`.
pub fn level_sums(
    model: &QuantumGroupModel,
    p: &BigRational,
    max_level: u64,
    precision_bits: usize,
    threads: Option<usize>,
) -> Result<Vec<BigFloat>, KhintchineError> {
    let e = Exponents::new(p)?;
    with_pool(threads, || LevelSums::new(model, e, precision_bits).block(0, max_level + 1))
}

/// Evaluates `K_p` until the certified tail is at most `tol`.
pub fn kp_constant(model: &QuantumGroupModel, p: &BigRational, opts: &KpOptions) -> Result<KpReport, KhintchineError> {
    let e = Exponents::new(p)?;
    if !opts.tol.is_positive() {
        return Err(KhintchineError::NonPositiveTol(format_rational(&opts.tol)));
    }
    if opts.max_length == 0 {
        return Err(KhintchineError::ZeroMaxLength);
    }
    let prec = opts.precision_bits;
    with_pool(opts.threads, || {
        if model.is_kac() {
            kac_report(model, p, e, prec, opts.max_length.min(KAC_WITNESS_LEVELS))
        } else {
            converge(model, p, e, prec, opts)
        }
    })?
}

fn kac_report(
    model: &QuantumGroupModel,
    p: &BigRational,
    e: Exponents,
    prec: usize,
    witness: u64,
) -> Result<KpReport, KhintchineError> {
    let hp = Hp::new(prec);
    let one = hp.from_i64(1);
    let sums = LevelSums::new(model, e, prec).block(0, witness + 1);
    // With n = d every term is ‖χ‖∞^{2−4/p} ≥ 1; the computed terms confirm it.
    assert!(sums.iter().all(|s| cmp(s, &one) >= 0), "Kac terms below one");
    let partial = sums.iter().fold(hp.from_i64(0), |acc, s| hp.add(&acc, s));
    Ok(KpReport {
        p: p.clone(),
        terms_summed: witness,
        partial_sum: partial,
        tail_bound: None,
        verdict: Verdict::Divergent { term_lower_bound: one, witness_levels: witness + 1 },
        precision_bits: prec,
    })
}

fn converge(
    model: &QuantumGroupModel,
    p: &BigRational,
    e: Exponents,
    prec: usize,
    opts: &KpOptions,
) -> Result<KpReport, KhintchineError> {
    let mut hp = Hp::new(prec);
    let tail_data = TailData::new(model, &hp)?;
    let tol = hp.from_rational(&opts.tol);
    let mut sums = LevelSums::new(model, e.clone(), prec);
    let mut partial = hp.from_i64(0);
    let mut last_tail = None;
    let mut start = 0;
    while start <= opts.max_length {
        let end = (start + BLOCK).min(opts.max_length + 1);
        for (k, s) in (start..end).zip(sums.block(start, end)) {
            partial = hp.add(&partial, &s);
            let tail = tail_data.tail(k, &e, &mut hp);
            if let Some(t) = &tail {
                if cmp(t, &tol) <= 0 {
                    let (lower, upper) = bracket(&hp, &partial, t);
                    return Ok(KpReport {
                        p: p.clone(),
                        terms_summed: k,
                        partial_sum: partial,
                        tail_bound: tail,
                        verdict: Verdict::Converged { lower, upper },
                        precision_bits: prec,
                    });
                }
            }
            last_tail = tail;
        }
        start = end;
    }
    Ok(KpReport {
        p: p.clone(),
        terms_summed: opts.max_length,
        partial_sum: partial,
        tail_bound: last_tail,
        verdict: Verdict::Inconclusive,
        precision_bits: prec,
    })
}

#[derive(Debug, Clone)]
pub struct DecayReport {
    pub theoretical_base: BigFloat,
    pub empirical_base: BigFloat,
    pub horizon: u64,
    /// `C` with `max_{|α|=k} n_α/d_α ≤ C·r^k` for every `k ≤ horizon`, `r` the theoretical base.
    pub constant_envelope: BigFloat,
    pub precision_bits: usize,
}

/// `max_{|α|=k} n_α/d_α`, exactly.
pub fn level_ratio_max(model: &QuantumGroupModel, k: u64) -> Result<BigRational, ModelError> {
    let mut best: Option<BigRational> = None;
    for label in model.enumerate_level(k) {
        let data = model.irr_data(&label)?;
        let ratio = BigRational::from_integer(data.n) / data.d;
        if best.as_ref().map_or(true, |b| &ratio > b) {
            best = Some(ratio);
        }
    }
    Ok(best.expect("every level is nonempty"))
}

/// Closed-form decay base of `n_α/d_α` per unit length.
pub fn theoretical_base(model: &QuantumGroupModel, hp: &Hp) -> BigFloat {
    match model.family() {
        Family::FreeOrthogonal { n, nq } => {
            let u_n = growth_base(&hp.from_i64(*n as i64), hp).expect("N >= 2");
            let u_q = growth_base(&hp.from_rational(nq), hp).expect("Nq >= 2");
            hp.div(&u_n, &u_q)
        }
        Family::QuantumAutomorphism { dim_b, d1 } => {
            // (x − 2 + √(x(x−4))) / (y − 2 + √(y(y−4))), x = dimB, y = d1 + 1
            let f = |x: &BigRational| {
                let xf = hp.from_rational(x);
                let four = hp.from_i64(4);
                let s = hp.sqrt(&hp.mul(&xf, &hp.sub(&xf, &four)));
                hp.add(&hp.sub(&xf, &hp.from_i64(2)), &s)
            };
            let x = BigRational::from_integer((*dim_b).into());
            let y = d1 + BigRational::one();
            hp.div(&f(&x), &f(&y))
        }
        Family::DrinfeldJimbo { root_system, q } => {
            let t = root_system.t_constants(q).expect("q validated by the model");
            hp.from_rational(&t.into_iter().max().expect("rank >= 1"))
        }
    }
}

pub fn decay_rate(model: &QuantumGroupModel, horizon: u64, precision_bits: usize) -> Result<DecayReport, ModelError> {
    let horizon = horizon.max(1);
    let mut hp = Hp::new(precision_bits);
    let base = theoretical_base(model, &hp);
    let mut envelope = hp.from_i64(0);
    let mut last = hp.from_i64(1);
    for k in 0..=horizon {
        let ratio = hp.from_rational(&level_ratio_max(model, k)?);
        let scaled = hp.div(&ratio, &hp.powi(&base, k as usize));
        envelope = hp.max(&envelope, &scaled).clone();
        last = ratio;
    }
    let empirical = hp.pow_rational(&last, &BigRational::new(BigInt::one(), BigInt::from(horizon)));
    Ok(DecayReport {
        theoretical_base: base,
        empirical_base: empirical,
        horizon,
        constant_envelope: hp.inflate(&envelope, SLACK_BITS),
        precision_bits,
    })
}

#[derive(Debug, Clone)]
pub struct CorollaryConstants {
    pub p: BigRational,
    pub r: BigRational,
    /// `p/(p−2)`, `(2p−2)/(p−2)`, `2p(r−1)/(r(p−2))`.
    pub exponents: [BigRational; 3],
    /// Upper end of the certified `K_p` interval.
    pub k_upper: BigFloat,
    /// `K^{exponent}` for the three exponents, in the same order.
    pub constants: [BigFloat; 3],
}

/// Exact exponents of `K_p` in the `L² → L¹`, `L^p → L¹` and `L^r → L¹` constants.
pub fn corollary_exponents(p: &BigRational, r: &BigRational) -> Result<[BigRational; 3], KhintchineError> {
    let is_dyadic = p.is_integer()
        && p.to_integer().to_u64().is_some_and(|v| v >= 4 && v.is_power_of_two());
    if !is_dyadic {
        return Err(KhintchineError::NotDyadic(format_rational(p)));
    }
    if r < &BigRational::one() {
        return Err(KhintchineError::RBelowOne(format_rational(r)));
    }
    let two = BigRational::from_integer(2.into());
    let one = BigRational::one();
    let pm2 = p - &two;
    Ok([p / &pm2, (&two * p - &two) / &pm2, (&two * p * (r - &one)) / (r * &pm2)])
}

pub fn corollary_constants(report: &KpReport, r: &BigRational) -> Result<CorollaryConstants, KhintchineError> {
    let exponents = corollary_exponents(&report.p, r)?;
    let Verdict::Converged { upper, .. } = &report.verdict else {
        return Err(KhintchineError::NotConverged(report.verdict.name()));
    };
    let mut hp = Hp::new(report.precision_bits);
    let constants = exponents.clone().map(|e| {
        if e.is_zero() {
            hp.from_i64(1)
        } else {
            let v = hp.pow_rational(upper, &e);
            hp.inflate(&v, SLACK_BITS)
        }
    });
    Ok(CorollaryConstants { p: report.p.clone(), r: r.clone(), exponents, k_upper: upper.clone(), constants })
}

/// `Σ_{|μ|=k} n_μ²`, whose polynomial growth reflects coamenability.
pub fn level_dimension_square_sum(model: &QuantumGroupModel, k: u64) -> Result<BigInt, ModelError> {
    let mut acc = BigInt::zero();
    for label in model.enumerate_level(k) {
        let n = model.irr_data(&label)?.n;
        acc += &n * &n;
    }
    Ok(acc)
}
