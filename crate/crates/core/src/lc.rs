//! Unrestricted latent class model for binary items, fitted by EM.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::FitConfig;
use crate::data::ResponseMatrix;
use crate::error::{Error, Result};
use crate::exec;
use crate::math::{logistic, logit};
use crate::mixture::{self, LogTables, SufficientStats};
use crate::patterns::Patterns;

/// Class weights below this abort the EM start.
pub const EMPTY_CLASS_WEIGHT: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LcParams {
    /// π_c.
    pub weights: Vec<f64>,
    /// λ_{j|c}: one row per item, one column per class.
    pub success_probs: Vec<Vec<f64>>,
}

impl LcParams {
    pub fn new(weights: Vec<f64>, success_probs: Vec<Vec<f64>>) -> Result<Self> {
        let p = LcParams {
            weights,
            success_probs,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn n_items(&self) -> usize {
        self.success_probs.len()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.k();
        if k == 0 {
            return Err(Error::InvalidArgument("no classes".into()));
        }
        if self.weights.iter().any(|w| !(0.0..=1.0).contains(w)) {
            return Err(Error::InvalidArgument("class weights must lie in [0, 1]".into()));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("class weights sum to {total}")));
        }
        for (j, row) in self.success_probs.iter().enumerate() {
            if row.len() != k {
                return Err(Error::DimensionMismatch(format!(
                    "item {} has {} class probabilities, expected {k}",
                    j + 1,
                    row.len()
                )));
            }
            if row.iter().any(|l| !(0.0..=1.0).contains(l)) {
                return Err(Error::InvalidArgument(format!(
                    "success probabilities of item {} must lie in [0, 1]",
                    j + 1
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn log_tables(&self) -> LogTables {
        let k = self.k();
        let mut log_success = Vec::with_capacity(self.n_items() * k);
        let mut log_failure = Vec::with_capacity(self.n_items() * k);
        for row in &self.success_probs {
            for &l in row {
                log_success.push(l.ln());
                log_failure.push((-l).ln_1p());
            }
        }
        LogTables {
            k,
            log_weights: self.weights.iter().map(|w| w.ln()).collect(),
            log_success,
            log_failure,
        }
    }

    /// Reorder classes: new class `i` is old class `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> LcParams {
        LcParams {
            weights: order.iter().map(|&c| self.weights[c]).collect(),
            success_probs: self
                .success_probs
                .iter()
                .map(|row| order.iter().map(|&c| row[c]).collect())
                .collect(),
        }
    }

    fn check_data(&self, data: &ResponseMatrix) -> Result<()> {
        if self.n_items() != data.n_items() {
            return Err(Error::DimensionMismatch(format!(
                "parameters cover {} items, data has {}",
                self.n_items(),
                data.n_items()
            )));
        }
        Ok(())
    }
}

/// m_k = kJ + (k − 1).
pub fn lc_n_params(k: usize, n_items: usize) -> usize {
    k * n_items + k - 1
}

/// BIC = −2ℓ + m log n.
pub fn bic(loglik: f64, n_params: usize, n: usize) -> f64 {
    -2.0 * loglik + n_params as f64 * (n as f64).ln()
}

/// Σ_i log Σ_c π_c Π_j λ^{y}(1 − λ)^{1−y}, accumulated in log space.
pub fn lc_loglik(params: &LcParams, data: &ResponseMatrix) -> Result<f64> {
    params.validate()?;
    params.check_data(data)?;
    let patterns = Patterns::new(data);
    Ok(mixture::e_step(&patterns, &params.log_tables(), false).loglik)
}

/// Posterior class probabilities of one response vector.
pub fn posterior_assign(params: &LcParams, y: &[u8]) -> Result<Vec<f64>> {
    if y.len() != params.n_items() {
        return Err(Error::DimensionMismatch(format!(
            "response vector has {} items, model has {}",
            y.len(),
            params.n_items()
        )));
    }
    let tables = params.log_tables();
    let mut joint = vec![0.0; params.k()];
    tables.joint(y, &mut joint);
    mixture::normalize_log(&mut joint, &mut Vec::new());
    Ok(joint)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LcFit {
    pub params: LcParams,
    pub loglik: f64,
    pub n_params: usize,
    pub bic: f64,
    pub n_subjects: usize,
    pub data_fingerprint: u64,
    /// Subject-major posteriors, `n × k`.
    #[serde(skip)]
    pub posteriors: Vec<f64>,
    pub n_iterations: usize,
    pub converged: bool,
    /// Output class `i` is estimation class `class_order[i]`.
    pub class_order: Vec<usize>,
    /// 0 for the deterministic start.
    pub winning_start: usize,
    pub winning_seed: Option<u64>,
    /// Observed log-likelihood at every E-step of the winning start.
    #[serde(skip)]
    pub loglik_trace: Vec<f64>,
}

impl LcFit {
    pub fn k(&self) -> usize {
        self.params.k()
    }

    pub fn posterior(&self, i: usize) -> &[f64] {
        let k = self.k();
        &self.posteriors[i * k..(i + 1) * k]
    }

    pub fn posterior_assign(&self, y: &[u8]) -> Result<Vec<f64>> {
        posterior_assign(&self.params, y)
    }
}

/// Starting values for LC EM. Start 0 is deterministic: logits of the
/// column means spread symmetrically over classes, uniform weights. Start
/// r ≥ 1 draws λ uniformly on [0.05, 0.95] from the r-th seed.
pub fn lc_start(data: &ResponseMatrix, k: usize, start: usize, config: &FitConfig) -> LcParams {
    let j_items = data.n_items();
    let weights = vec![1.0 / k as f64; k];
    let success_probs = if start == 0 {
        data.column_means()
            .into_iter()
            .map(|m| {
                let base = logit(m.clamp(0.01, 0.99));
                (0..k)
                    .map(|c| {
                        let offset = if k == 1 {
                            0.0
                        } else {
                            2.0 * c as f64 / (k - 1) as f64 - 1.0
                        };
                        logistic(base + offset).clamp(config.epsilon, 1.0 - config.epsilon)
                    })
                    .collect()
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.start_seed(start));
        (0..j_items)
            .map(|_| (0..k).map(|_| rng.random_range(0.05..0.95)).collect())
            .collect()
    };
    LcParams {
        weights,
        success_probs,
    }
}

#[derive(Debug, Clone)]
struct Run {
    params: LcParams,
    loglik: f64,
    posteriors: Vec<f64>,
    iterations: usize,
    converged: bool,
    trace: Vec<f64>,
}

fn m_step(stats: &SufficientStats, n: f64, epsilon: f64) -> LcParams {
    let k = stats.k;
    let weights = stats.class_totals.iter().map(|t| t / n).collect();
    let n_items = stats.successes.len() / k;
    let success_probs = (0..n_items)
        .map(|j| {
            (0..k)
                .map(|c| (stats.success(j, c) / stats.class_totals[c]).clamp(epsilon, 1.0 - epsilon))
                .collect()
        })
        .collect();
    LcParams {
        weights,
        success_probs,
    }
}

fn run_em(
    patterns: &Patterns,
    init: LcParams,
    config: &FitConfig,
    max_iterations: usize,
) -> Result<Run> {
    let n = patterns.n_subjects() as f64;
    let k = init.k();
    let mut params = init;
    let mut trace = Vec::new();
    let mut iteration = 0;
    loop {
        let e = mixture::e_step(patterns, &params.log_tables(), config.parallel);
        if !e.loglik.is_finite() {
            return Err(Error::NonFinite {
                iteration,
                message: format!("log-likelihood is {}", e.loglik),
            });
        }
        let converged = trace
            .last()
            .is_some_and(|&prev: &f64| (e.loglik - prev).abs() < config.tolerance);
        trace.push(e.loglik);
        if converged || iteration >= max_iterations {
            return Ok(Run {
                params,
                loglik: e.loglik,
                posteriors: e.posteriors,
                iterations: iteration,
                converged,
                trace,
            });
        }
        iteration += 1;
        let stats = mixture::sufficient_stats(patterns, &e.posteriors, k, config.parallel);
        params = m_step(&stats, n, config.epsilon);
        if let Some(c) = params.weights.iter().position(|&w| w < EMPTY_CLASS_WEIGHT) {
            return Err(Error::Optimizer(format!(
                "class {} emptied at iteration {iteration}",
                c + 1
            )));
        }
    }
}

/// Class order putting λ_{1|c} in ascending order.
pub(crate) fn order_by_first_item(first_item: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..first_item.len()).collect();
    order.sort_by(|&a, &b| first_item[a].total_cmp(&first_item[b]));
    order
}

fn finish(run: Run, data: &ResponseMatrix, patterns: &Patterns, start: usize, config: &FitConfig) -> LcFit {
    let k = run.params.k();
    let order = order_by_first_item(&run.params.success_probs[0]);
    let params = run.params.permuted(&order);
    let posteriors: Vec<f64> = run
        .posteriors
        .chunks_exact(k)
        .flat_map(|row| order.iter().map(|&c| row[c]).collect::<Vec<_>>())
        .collect();
    let n = patterns.n_subjects();
    let n_params = lc_n_params(k, patterns.n_items());
    LcFit {
        loglik: run.loglik,
        n_params,
        bic: bic(run.loglik, n_params, n),
        n_subjects: n,
        data_fingerprint: data.fingerprint(),
        posteriors: mixture::subject_posteriors(patterns, &posteriors, k),
        n_iterations: run.iterations,
        converged: run.converged,
        class_order: order,
        winning_start: start,
        winning_seed: (start > 0).then(|| config.start_seed(start)),
        loglik_trace: run.trace,
        params,
    }
}

fn check_request(data: &ResponseMatrix, k: usize, config: &FitConfig) -> Result<()> {
    config.validate()?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > data.n_subjects() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds the {} subjects",
            data.n_subjects()
        )));
    }
    Ok(())
}

/// Multi-start EM. Returns the start with the highest log-likelihood
/// (earliest start on ties), classes ordered by λ_{1|c}.
pub fn em_fit_lc(data: &ResponseMatrix, k: usize, config: &FitConfig) -> Result<LcFit> {
    check_request(data, k, config)?;
    let patterns = Patterns::new(data);
    // k = 1 has a single closed-form optimum
    let n_starts = if k == 1 { 1 } else { config.n_random_starts + 1 };
    let runs = exec::map_indices(config.parallel, n_starts, |s| {
        run_em(&patterns, lc_start(data, k, s, config), config, config.max_iterations)
    });
    let mut best: Option<(usize, Run)> = None;
    let mut first_error = None;
    for (s, run) in runs.into_iter().enumerate() {
        match run {
            Ok(run) => {
                if best.as_ref().is_none_or(|(_, b)| run.loglik > b.loglik) {
                    best = Some((s, run));
                }
            }
            Err(e) => {
                log::debug!("LC k={k} start {s} abandoned: {e}");
                first_error.get_or_insert(e);
            }
        }
    }
    match best {
        Some((s, run)) => Ok(finish(run, data, &patterns, s, config)),
        None => Err(Error::AllStartsFailed(
            first_error.map(|e| e.to_string()).unwrap_or_default(),
        )),
    }
}

/// Single EM run from the given parameters.
pub fn em_fit_lc_from(data: &ResponseMatrix, init: LcParams, config: &FitConfig) -> Result<LcFit> {
    init.validate()?;
    init.check_data(data)?;
    check_request(data, init.k(), config)?;
    let patterns = Patterns::new(data);
    let run = run_em(&patterns, init, config, config.max_iterations)?;
    Ok(finish(run, data, &patterns, 0, config))
}

/// Short EM used to seed other estimators; no class reordering.
pub(crate) fn prefit(
    patterns: &Patterns,
    init: LcParams,
    config: &FitConfig,
) -> Result<LcParams> {
    Ok(run_em(patterns, init, config, config.prefit_iterations)?.params)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BicRow {
    pub k: usize,
    pub loglik: f64,
    pub n_params: usize,
    pub bic: f64,
}

#[derive(Debug, Clone)]
pub struct KSelection {
    pub rows: Vec<BicRow>,
    pub fits: Vec<LcFit>,
    pub selected_k: usize,
}

impl KSelection {
    pub fn selected_fit(&self) -> &LcFit {
        self.fits
            .iter()
            .find(|f| f.k() == self.selected_k)
            .expect("selected k is one of the fitted k")
    }
}

/// Fit every k in the range and pick the smallest BIC (smaller k on ties).
pub fn select_k(
    data: &ResponseMatrix,
    k_range: RangeInclusive<usize>,
    config: &FitConfig,
) -> Result<KSelection> {
    if k_range.is_empty() {
        return Err(Error::InvalidArgument("empty k range".into()));
    }
    let mut fits = Vec::new();
    for k in k_range {
        let fit = em_fit_lc(data, k, config).map_err(|e| Error::AtClassCount {
            k,
            source: Box::new(e),
        })?;
        log::info!("LC k={k}: loglik {:.3}, BIC {:.3}", fit.loglik, fit.bic);
        fits.push(fit);
    }
    let rows: Vec<BicRow> = fits
        .iter()
        .map(|f| BicRow {
            k: f.k(),
            loglik: f.loglik,
            n_params: f.n_params,
            bic: f.bic,
        })
        .collect();
    let selected_k = rows
        .iter()
        .fold(None::<&BicRow>, |best, r| match best {
            Some(b) if b.bic <= r.bic => Some(b),
            _ => Some(r),
        })
        .map(|r| r.k)
        .unwrap();
    Ok(KSelection {
        rows,
        fits,
        selected_k,
    })
}
