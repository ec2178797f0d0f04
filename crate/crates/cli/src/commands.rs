use cqg_core::fusion::tensor_decompose;
use cqg_core::khintchine::{
    corollary_constants, decay_rate, kp_constant, level_ratio_max, KpOptions, KpReport, Verdict,
};
use cqg_core::models::{IrrLabel, QuantumGroupModel};
use cqg_core::numeric::{format_rational as fr, format_rational_decimal, Direction};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, EXIT_DIVERGENT, EXIT_INCONCLUSIVE, EXIT_OK};
use crate::report::{Decimals, Tabular};

#[derive(Debug, Serialize)]
pub struct DimsRow {
    pub length: u64,
    pub label: String,
    pub n: String,
    pub d: String,
    pub chi_sup: String,
}

#[derive(Debug, Serialize)]
pub struct DimsResult {
    pub max_length: u64,
    pub rows: Vec<DimsRow>,
}

impl Tabular for DimsResult {
    fn header(&self) -> Vec<&'static str> {
        vec!["length", "label", "n", "d", "chi_sup"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| vec![r.length.to_string(), r.label.clone(), r.n.clone(), r.d.clone(), r.chi_sup.clone()])
            .collect()
    }
}

pub fn dims(model: &QuantumGroupModel, cfg: &RunConfig) -> Result<DimsResult, CliError> {
    let rows = model
        .dims_table(cfg.max_length)?
        .into_iter()
        .map(|d| DimsRow {
            length: d.length,
            label: d.label.to_string(),
            n: d.n.to_string(),
            d: fr(&d.d),
            chi_sup: d.chi_sup.to_string(),
        })
        .collect();
    Ok(DimsResult { max_length: cfg.max_length, rows })
}

#[derive(Debug, Serialize)]
pub struct EigenEntry {
    pub eigenvalue: String,
    pub multiplicity: u64,
}

#[derive(Debug, Serialize)]
pub struct SpectrumResult {
    pub label: String,
    pub n: u64,
    pub d: String,
    pub trace_inverse: String,
    pub max_eigenvalue: String,
    pub predicted_max_eigenvalue: String,
    pub entries: Vec<EigenEntry>,
}

impl Tabular for SpectrumResult {
    fn header(&self) -> Vec<&'static str> {
        vec!["eigenvalue", "multiplicity"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.entries.iter().map(|e| vec![e.eigenvalue.clone(), e.multiplicity.to_string()]).collect()
    }
}

pub fn spectrum(model: &QuantumGroupModel, cfg: &RunConfig) -> Result<SpectrumResult, CliError> {
    let text = cfg
        .weight
        .as_deref()
        .ok_or_else(|| CliError::validation("CLI_MISSING_WEIGHT", "spectrum needs --weight".into()))?;
    let label = model.parse_label(text)?;
    let (Some(q), Some(rs)) = (model.q_spectrum(&label)?, model.root_system()) else {
        return Err(CliError::validation(
            "CLI_NO_SPECTRUM",
            format!("{} does not determine modular spectra", model.spec()),
        ));
    };
    let IrrLabel::Weight(mu) = &label else { unreachable!("root-system models use weight labels") };
    let cqg_core::models::Family::DrinfeldJimbo { q: qparam, .. } = model.family() else {
        unreachable!("only Drinfeld-Jimbo models carry a root system")
    };
    let predicted = rs.predicted_max_eigenvalue(mu, qparam).map_err(cqg_core::models::ModelError::from)?;
    Ok(SpectrumResult {
        label: label.to_string(),
        n: q.dimension(),
        d: fr(&q.trace()),
        trace_inverse: fr(&q.trace_inverse()),
        max_eigenvalue: fr(&q.max_eigenvalue()),
        predicted_max_eigenvalue: fr(&predicted),
        entries: q
            .entries()
            .iter()
            .map(|(v, m)| EigenEntry { eigenvalue: fr(v), multiplicity: *m })
            .collect(),
    })
}

#[derive(Debug, Serialize)]
pub struct FusionComponent {
    pub label: u64,
    pub multiplicity: String,
}

#[derive(Debug, Serialize)]
pub struct DimensionCheck {
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

#[derive(Debug, Serialize)]
pub struct FusionResult {
    pub rule: String,
    pub k: u64,
    pub l: u64,
    pub components: Vec<FusionComponent>,
    pub classical_dimension: DimensionCheck,
    pub quantum_dimension: DimensionCheck,
}

impl Tabular for FusionResult {
    fn header(&self) -> Vec<&'static str> {
        vec!["label", "multiplicity"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        self.components.iter().map(|c| vec![c.label.to_string(), c.multiplicity.clone()]).collect()
    }
}

pub fn fusion(model: &QuantumGroupModel, cfg: &RunConfig) -> Result<FusionResult, CliError> {
    let rule = model.fusion_rule().ok_or_else(|| {
        CliError::validation("CLI_FUSION_UNSUPPORTED", format!("{} has no built-in fusion rule", model.spec()))
    })?;
    let (k, l) = (cfg.k.unwrap_or(1), cfg.l.unwrap_or(1));
    let product = tensor_decompose(rule, k, l);
    let data = |j: u64| model.irr_data(&IrrLabel::Level(j));
    let (a, b) = (data(k)?, data(l)?);
    let mut n_sum = BigInt::from(0);
    let mut d_sum = BigRational::from_integer(0.into());
    let mut components = Vec::new();
    for (j, m) in product.iter() {
        let dj = data(j)?;
        n_sum += m * &dj.n;
        d_sum += BigRational::from_integer(m.clone()) * &dj.d;
        components.push(FusionComponent { label: j, multiplicity: m.to_string() });
    }
    let n_lhs = &a.n * &b.n;
    let d_lhs = &a.d * &b.d;
    Ok(FusionResult {
        rule: rule.to_string(),
        k,
        l,
        components,
        classical_dimension: DimensionCheck { lhs: n_lhs.to_string(), rhs: n_sum.to_string(), equal: n_lhs == n_sum },
        quantum_dimension: DimensionCheck { lhs: fr(&d_lhs), rhs: fr(&d_sum), equal: d_lhs == d_sum },
    })
}

#[derive(Debug, Serialize)]
pub struct VerdictOut {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub term_lower_bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_levels: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct KpResult {
    pub p: String,
    pub terms_summed: u64,
    pub partial_sum: String,
    pub tail_bound: Option<String>,
    pub verdict: VerdictOut,
    pub tol: String,
}

impl KpResult {
    pub fn from_report(report: &KpReport, tol: &BigRational) -> Self {
        let dec = Decimals::new(report.precision_bits);
        let mut verdict =
            VerdictOut { kind: report.verdict.name(), lower: None, upper: None, term_lower_bound: None, witness_levels: None };
        match &report.verdict {
            Verdict::Converged { lower, upper } => {
                verdict.lower = Some(dec.down(lower));
                verdict.upper = Some(dec.up(upper));
            }
            Verdict::Divergent { term_lower_bound, witness_levels } => {
                verdict.term_lower_bound = Some(dec.down(term_lower_bound));
                verdict.witness_levels = Some(*witness_levels);
            }
            Verdict::Inconclusive => {}
        }
        KpResult {
            p: fr(&report.p),
            terms_summed: report.terms_summed,
            partial_sum: dec.nearest(&report.partial_sum),
            tail_bound: report.tail_bound.as_ref().map(|t| dec.up(t)),
            verdict,
            tol: fr(tol),
        }
    }

    fn row(&self) -> Vec<String> {
        let opt = |o: &Option<String>| o.clone().unwrap_or_default();
        vec![
            self.p.clone(),
            self.terms_summed.to_string(),
            self.partial_sum.clone(),
            opt(&self.tail_bound),
            self.verdict.kind.to_string(),
            opt(&self.verdict.lower),
            opt(&self.verdict.upper),
        ]
    }
}

const KP_HEADER: [&str; 7] = ["p", "terms_summed", "partial_sum", "tail_bound", "verdict", "lower", "upper"];

impl Tabular for KpResult {
    fn header(&self) -> Vec<&'static str> {
        KP_HEADER.to_vec()
    }
    fn rows(&self) -> Vec<Vec<String>> {
        vec![self.row()]
    }
}

pub fn kp_options(cfg: &RunConfig) -> KpOptions {
    KpOptions {
        tol: cfg.tol.clone(),
        max_length: cfg.max_length,
        precision_bits: cfg.precision_bits,
        threads: cfg.threads,
    }
}

pub fn verdict_exit(verdict: &Verdict) -> i32 {
    match verdict {
        Verdict::Converged { .. } => EXIT_OK,
        Verdict::Divergent { .. } => EXIT_DIVERGENT,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

pub fn kp(model: &QuantumGroupModel, cfg: &RunConfig) -> Result<(KpResult, i32), CliError> {
    let report = kp_constant(model, &cfg.p, &kp_options(cfg))?;
    Ok((KpResult::from_report(&report, &cfg.tol), verdict_exit(&report.verdict)))
}

#[derive(Debug, Serialize)]
pub struct DecayResult {
    pub horizon: u64,
    pub theoretical_base: String,
    pub empirical_base: String,
    pub constant_envelope: String,
    pub last_ratio: String,
}

impl Tabular for DecayResult {
    fn header(&self) -> Vec<&'static str> {
        vec!["horizon", "theoretical_base", "empirical_base", "constant_envelope", "last_ratio"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.horizon.to_string(),
            self.theoretical_base.clone(),
            self.empirical_base.clone(),
            self.constant_envelope.clone(),
            self.last_ratio.clone(),
        ]]
    }
}

pub fn decay(model: &QuantumGroupModel, cfg: &RunConfig) -> Result<DecayResult, CliError> {
    let horizon = cfg.k.unwrap_or(50);
    let report = decay_rate(model, horizon, cfg.precision_bits)?;
    let dec = Decimals::new(cfg.precision_bits);
    Ok(DecayResult {
        horizon: report.horizon,
        theoretical_base: dec.nearest(&report.theoretical_base),
        empirical_base: dec.nearest(&report.empirical_base),
        constant_envelope: dec.up(&report.constant_envelope),
        last_ratio: fr(&level_ratio_max(model, report.horizon)?),
    })
}

#[derive(Debug, Serialize)]
pub struct ConstantsResult {
    pub p: String,
    pub r: String,
    pub k_upper: String,
    pub exponents: Vec<String>,
    pub constants: Vec<String>,
}

impl Tabular for ConstantsResult {
    fn header(&self) -> Vec<&'static str> {
        vec!["which", "exponent", "constant"]
    }
    fn rows(&self) -> Vec<Vec<String>> {
        ["l2_to_l1", "lp_to_l1", "lr_to_l1"]
            .iter()
            .zip(self.exponents.iter().zip(&self.constants))
            .map(|(w, (e, c))| vec![w.to_string(), e.clone(), c.clone()])
            .collect()
    }
}

pub fn constants(model: &QuantumGroupModel, cfg: &RunConfig) -> Result<ConstantsResult, CliError> {
    // Exponents are validated before the expensive K_p evaluation.
    cqg_core::khintchine::corollary_exponents(&cfg.p, &cfg.r)?;
    let report = kp_constant(model, &cfg.p, &kp_options(cfg))?;
    let c = corollary_constants(&report, &cfg.r).map_err(|e| CliError {
        code: e.code(),
        message: e.to_string(),
        exit: verdict_exit(&report.verdict),
    })?;
    let dec = Decimals::new(cfg.precision_bits);
    Ok(ConstantsResult {
        p: fr(&c.p),
        r: fr(&c.r),
        k_upper: dec.up(&c.k_upper),
        exponents: c.exponents.iter().map(fr).collect(),
        constants: c.constants.iter().map(|x| dec.up(x)).collect(),
    })
}

#[derive(Debug, Serialize)]
pub struct RatioRow {
    pub length: u64,
    pub ratio: String,
    pub ratio_decimal: String,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum TableResult {
    Ratios { kind: &'static str, rows: Vec<RatioRow> },
    Kp { kind: &'static str, rows: Vec<KpResult> },
}

impl Tabular for TableResult {
    fn header(&self) -> Vec<&'static str> {
        match self {
            TableResult::Ratios { .. } => vec!["length", "ratio", "ratio_decimal"],
            TableResult::Kp { .. } => KP_HEADER.to_vec(),
        }
    }
    fn rows(&self) -> Vec<Vec<String>> {
        match self {
            TableResult::Ratios { rows, .. } => rows
                .iter()
                .map(|r| vec![r.length.to_string(), r.ratio.clone(), r.ratio_decimal.clone()])
                .collect(),
            TableResult::Kp { rows, .. } => rows.iter().map(KpResult::row).collect(),
        }
    }
}

pub fn table(model: &QuantumGroupModel, cfg: &RunConfig) -> Result<TableResult, CliError> {
    match cfg.kind {
        crate::config::TableKind::Ratios => {
            let digits = cqg_core::numeric::decimal_digits(cfg.precision_bits);
            let rows = (0..=cfg.max_length)
                .map(|k| {
                    let ratio = level_ratio_max(model, k)?;
                    Ok(RatioRow {
                        length: k,
                        ratio: fr(&ratio),
                        ratio_decimal: format_rational_decimal(&ratio, digits, Direction::Nearest),
                    })
                })
                .collect::<Result<_, CliError>>()?;
            Ok(TableResult::Ratios { kind: "ratios", rows })
        }
        crate::config::TableKind::Kp => {
            let opts = kp_options(cfg);
            let rows = cfg
                .p_grid
                .iter()
                .map(|p| Ok(KpResult::from_report(&kp_constant(model, p, &opts)?, &cfg.tol)))
                .collect::<Result<_, CliError>>()?;
            Ok(TableResult::Kp { kind: "kp", rows })
        }
    }
}
