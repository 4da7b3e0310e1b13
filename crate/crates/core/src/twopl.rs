//! Multidimensional 2PL latent class model:
//! logit λ_{j|c} = γ_j (θ_{c,d(j)} − β_j), with one anchor item per
//! dimension fixed at γ = 1, β = 0.
//!
//! Fitted by EM. The M-step works on the expected class totals N_c and
//! expected successes R_{jc} and cycles safeguarded Newton updates over
//! item blocks (γ_j, β_j) and ability cells θ_{cd}.

use serde::{Deserialize, Serialize};

use crate::config::FitConfig;
use crate::data::{DimensionPartition, ResponseMatrix};
use crate::error::{Error, Result};
use crate::exec;
use crate::lc::{self, bic, order_by_first_item, EMPTY_CLASS_WEIGHT};
use crate::math::{logistic, logit, softplus};
use crate::mixture::{self, LogTables, SufficientStats};
use crate::patterns::Patterns;

/// Success probability logistic(γ(θ − β)).
pub fn twopl_prob(gamma: f64, beta: f64, theta: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "discrimination must be positive, got {gamma}"
        )));
    }
    Ok(logistic(gamma * (theta - beta)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPlParams {
    /// π_c.
    pub weights: Vec<f64>,
    /// γ_j.
    pub discrimination: Vec<f64>,
    /// β_j.
    pub difficulty: Vec<f64>,
    /// θ_{cd}: one row per class, one column per dimension.
    pub abilities: Vec<Vec<f64>>,
    pub partition: DimensionPartition,
}

impl TwoPlParams {
    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn n_dimensions(&self) -> usize {
        self.partition.n_groups()
    }

    pub fn n_items(&self) -> usize {
        self.discrimination.len()
    }

    /// Anchor item of every dimension (lowest index in the group).
    pub fn anchors(&self) -> Vec<usize> {
        self.partition.anchors()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.k();
        let j = self.n_items();
        let s = self.n_dimensions();
        if k == 0 {
            return Err(Error::InvalidArgument("no classes".into()));
        }
        if self.difficulty.len() != j || self.partition.n_items() != j {
            return Err(Error::DimensionMismatch(
                "discrimination, difficulty and partition cover different item counts".into(),
            ));
        }
        if self.abilities.len() != k || self.abilities.iter().any(|r| r.len() != s) {
            return Err(Error::DimensionMismatch(format!("abilities must be {k} × {s}")));
        }
        let total: f64 = self.weights.iter().sum();
        if self.weights.iter().any(|w| !(0.0..=1.0).contains(w)) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument("class weights must be a probability vector".into()));
        }
        if let Some(j) = self.discrimination.iter().position(|g| !(*g > 0.0 && g.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "discrimination of item {} must be positive",
                j + 1
            )));
        }
        if self.difficulty.iter().any(|b| !b.is_finite())
            || self.abilities.iter().flatten().any(|t| !t.is_finite())
        {
            return Err(Error::InvalidArgument("non-finite parameter".into()));
        }
        for a in self.anchors() {
            if self.discrimination[a] != 1.0 || self.difficulty[a] != 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "anchor item {} must have γ = 1 and β = 0",
                    a + 1
                )));
            }
        }
        Ok(())
    }

    #[inline]
    fn logit_at(&self, j: usize, c: usize) -> f64 {
        let d = self.partition.group_of(j);
        self.discrimination[j] * (self.abilities[c][d] - self.difficulty[j])
    }

    pub(crate) fn log_tables(&self) -> LogTables {
        let k = self.k();
        let mut log_success = Vec::with_capacity(self.n_items() * k);
        let mut log_failure = Vec::with_capacity(self.n_items() * k);
        for j in 0..self.n_items() {
            for c in 0..k {
                let z = self.logit_at(j, c);
                log_success.push(-softplus(-z));
                log_failure.push(-softplus(z));
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
    pub fn permuted(&self, order: &[usize]) -> TwoPlParams {
        TwoPlParams {
            weights: order.iter().map(|&c| self.weights[c]).collect(),
            abilities: order.iter().map(|&c| self.abilities[c].clone()).collect(),
            ..self.clone()
        }
    }

    /// Starting point for the model in which groups `a` and `b` are merged:
    /// the two ability columns are averaged class by class, every item
    /// keeps its (γ, β), and the absorbed anchor stays at (1, 0) but
    /// becomes free.
    pub fn merge_warm_start(&self, a: usize, b: usize) -> Result<TwoPlParams> {
        let partition = self.partition.merge(a, b)?;
        let (lo, hi) = (a.min(b), a.max(b));
        let abilities = self
            .abilities
            .iter()
            .map(|row| {
                let mut out: Vec<f64> = row
                    .iter()
                    .enumerate()
                    .filter(|&(d, _)| d != hi)
                    .map(|(_, &t)| t)
                    .collect();
                out[lo] = 0.5 * (row[lo] + row[hi]);
                out
            })
            .collect();
        Ok(TwoPlParams {
            partition,
            abilities,
            ..self.clone()
        })
    }

    /// Express these parameters in a finer partition that refines the
    /// current one. Every group of `finer` whose anchor is not an anchor
    /// here gets θ' = γ_a(θ − β_a) and its items γ' = γ/γ_a,
    /// β' = γ_a(β − β_a), so all success probabilities are unchanged.
    pub fn refine(&self, finer: &DimensionPartition) -> Result<TwoPlParams> {
        if finer.n_items() != self.n_items() {
            return Err(Error::DimensionMismatch("partitions cover different items".into()));
        }
        let coarse = &self.partition;
        let mut parent = vec![usize::MAX; finer.n_groups()];
        for j in 0..finer.n_items() {
            let g = finer.group_of(j);
            let p = coarse.group_of(j);
            if parent[g] == usize::MAX {
                parent[g] = p;
            } else if parent[g] != p {
                return Err(Error::InvalidArgument(
                    "partition does not refine the fitted one".into(),
                ));
            }
        }
        let mut discrimination = self.discrimination.clone();
        let mut difficulty = self.difficulty.clone();
        let mut abilities = vec![vec![0.0; finer.n_groups()]; self.k()];
        for (g, anchor) in finer.anchors().into_iter().enumerate() {
            let (ga, ba) = (self.discrimination[anchor], self.difficulty[anchor]);
            for (row, src) in abilities.iter_mut().zip(&self.abilities) {
                row[g] = ga * (src[parent[g]] - ba);
            }
            for j in finer.members(g) {
                discrimination[j] = self.discrimination[j] / ga;
                difficulty[j] = ga * (self.difficulty[j] - ba);
            }
            discrimination[anchor] = 1.0;
            difficulty[anchor] = 0.0;
        }
        Ok(TwoPlParams {
            weights: self.weights.clone(),
            discrimination,
            difficulty,
            abilities,
            partition: finer.clone(),
        })
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

/// J × k matrix of logistic(γ_j(θ_{c,d(j)} − β_j)).
pub fn implied_lambda(params: &TwoPlParams) -> Vec<Vec<f64>> {
    (0..params.n_items())
        .map(|j| (0..params.k()).map(|c| logistic(params.logit_at(j, c))).collect())
        .collect()
}

/// (k − 1) + k·s + 2(J − s).
pub fn twopl_n_params(k: usize, s: usize, n_items: usize) -> usize {
    (k - 1) + k * s + 2 * (n_items - s)
}

pub fn twopl_loglik(params: &TwoPlParams, data: &ResponseMatrix) -> Result<f64> {
    params.validate()?;
    params.check_data(data)?;
    let patterns = Patterns::new(data);
    Ok(mixture::e_step(&patterns, &params.log_tables(), false).loglik)
}

/// Expected class totals and successes under the posteriors implied by
/// `params`.
pub fn expected_stats(params: &TwoPlParams, data: &ResponseMatrix) -> Result<SufficientStats> {
    params.validate()?;
    params.check_data(data)?;
    let patterns = Patterns::new(data);
    let e = mixture::e_step(&patterns, &params.log_tables(), false);
    Ok(mixture::sufficient_stats(&patterns, &e.posteriors, params.k(), false))
}

#[inline]
fn item_objective(gamma: f64, beta: f64, theta: &[f64], n: &[f64], r: &[f64]) -> f64 {
    theta
        .iter()
        .zip(n)
        .zip(r)
        .map(|((&t, &nc), &rc)| {
            let z = gamma * (t - beta);
            rc * z - nc * softplus(z)
        })
        .sum()
}

/// Expected complete-data log-likelihood Σ_c N_c log π_c +
/// Σ_{j,c} [R_{jc} log λ_{j|c} + (N_c − R_{jc}) log(1 − λ_{j|c})].
pub fn m_objective(params: &TwoPlParams, stats: &SufficientStats) -> f64 {
    let k = params.k();
    let mut q: f64 = stats
        .class_totals
        .iter()
        .zip(&params.weights)
        .map(|(&n, &w)| if n == 0.0 { 0.0 } else { n * w.ln() })
        .sum();
    let mut theta = vec![0.0; k];
    for j in 0..params.n_items() {
        let d = params.partition.group_of(j);
        for (t, row) in theta.iter_mut().zip(&params.abilities) {
            *t = row[d];
        }
        q += item_objective(
            params.discrimination[j],
            params.difficulty[j],
            &theta,
            &stats.class_totals,
            &stats.successes[j * k..(j + 1) * k],
        );
    }
    q
}

/// Gradient of [`m_objective`] with respect to the free item parameters
/// and abilities. Anchor entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPlScore {
    pub discrimination: Vec<f64>,
    pub difficulty: Vec<f64>,
    pub abilities: Vec<Vec<f64>>,
}

pub fn m_score(params: &TwoPlParams, stats: &SufficientStats) -> TwoPlScore {
    let k = params.k();
    let s = params.n_dimensions();
    let mut discrimination = vec![0.0; params.n_items()];
    let mut difficulty = vec![0.0; params.n_items()];
    let mut abilities = vec![vec![0.0; s]; k];
    for j in 0..params.n_items() {
        let d = params.partition.group_of(j);
        let (g, b) = (params.discrimination[j], params.difficulty[j]);
        let anchor = params.partition.is_anchor(j);
        for (c, ab) in abilities.iter_mut().enumerate() {
            let t = params.abilities[c][d];
            let resid = stats.success(j, c) - stats.class_totals[c] * logistic(g * (t - b));
            ab[d] += g * resid;
            if !anchor {
                discrimination[j] += (t - b) * resid;
                difficulty[j] -= g * resid;
            }
        }
    }
    TwoPlScore {
        discrimination,
        difficulty,
        abilities,
    }
}

/// Largest score component over free parameters, ignoring components that
/// push a parameter beyond an active bound.
pub fn projected_score_max(params: &TwoPlParams, score: &TwoPlScore, config: &FitConfig) -> f64 {
    let blocked = |x: f64, g: f64, lo: f64, hi: f64| (x <= lo && g < 0.0) || (x >= hi && g > 0.0);
    let mut max = 0.0f64;
    for j in 0..params.n_items() {
        let (g, b) = (params.discrimination[j], params.difficulty[j]);
        if !blocked(g, score.discrimination[j], config.gamma_min, config.gamma_max) {
            max = max.max(score.discrimination[j].abs());
        }
        if !blocked(b, score.difficulty[j], -config.beta_max, config.beta_max) {
            max = max.max(score.difficulty[j].abs());
        }
    }
    for (row, grow) in params.abilities.iter().zip(&score.abilities) {
        for (&t, &g) in row.iter().zip(grow) {
            if !blocked(t, g, -config.theta_max, config.theta_max) {
                max = max.max(g.abs());
            }
        }
    }
    max
}

#[derive(Debug, Clone, Copy)]
struct Bounds {
    gamma: (f64, f64),
    beta: f64,
    theta: f64,
}

impl Bounds {
    fn from(config: &FitConfig) -> Self {
        Bounds {
            gamma: (config.gamma_min, config.gamma_max),
            beta: config.beta_max,
            theta: config.theta_max,
        }
    }
}

const MAX_HALVINGS: usize = 40;

/// Safeguarded Newton ascent on one item's (γ, β). Uses the observed
/// Hessian when it is negative definite and Fisher scoring otherwise; each
/// step is projected on the box and halved until the objective does not
/// decrease.
fn optimize_item(
    start: (f64, f64),
    theta: &[f64],
    n: &[f64],
    r: &[f64],
    bounds: &Bounds,
    max_iter: usize,
    tol: f64,
) -> std::result::Result<(f64, f64), String> {
    let project = |g: f64, b: f64| {
        (
            g.clamp(bounds.gamma.0, bounds.gamma.1),
            b.clamp(-bounds.beta, bounds.beta),
        )
    };
    let (mut g, mut b) = project(start.0, start.1);
    let mut f = item_objective(g, b, theta, n, r);
    for _ in 0..max_iter {
        let (mut sg, mut sb) = (0.0, 0.0);
        let (mut hgg, mut hbb, mut hgb) = (0.0, 0.0, 0.0);
        let mut resid_sum = 0.0;
        for ((&t, &nc), &rc) in theta.iter().zip(n).zip(r) {
            let u = t - b;
            let p = logistic(g * u);
            let resid = rc - nc * p;
            let w = nc * p * (1.0 - p);
            sg += u * resid;
            sb -= g * resid;
            hgg -= w * u * u;
            hbb -= w * g * g;
            hgb += w * g * u;
            resid_sum += resid;
        }
        let observed_gb = hgb - resid_sum;
        let solve = |a: f64, c: f64, m: f64| {
            // [a m; m c] x = -[sg; sb]
            let det = a * c - m * m;
            ((-sg * c + sb * m) / det, (-sb * a + sg * m) / det)
        };
        let (mut dg, mut db) = if hgg < 0.0 && hgg * hbb - observed_gb * observed_gb > 0.0 {
            solve(hgg, hbb, observed_gb)
        } else {
            let ridge = 1e-8 * (1.0 + hgg.abs() + hbb.abs());
            solve(hgg - ridge, hbb - ridge, hgb)
        };
        if !(dg.is_finite() && db.is_finite()) || dg * sg + db * sb <= 0.0 {
            // damped retry along the gradient
            let scale = 1.0 / (1.0 + (sg * sg + sb * sb).sqrt());
            dg = sg * scale;
            db = sb * scale;
        }
        if !(dg.is_finite() && db.is_finite()) {
            return Err(format!("non-finite Newton step at (γ = {g}, β = {b})"));
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let (cg, cb) = project(g + step * dg, b + step * db);
            let fc = item_objective(cg, cb, theta, n, r);
            if fc >= f {
                accepted = Some((cg, cb, fc));
                break;
            }
            step *= 0.5;
        }
        let Some((cg, cb, fc)) = accepted else { break };
        let gain = fc - f;
        g = cg;
        b = cb;
        f = fc;
        if gain <= tol {
            break;
        }
    }
    Ok((g, b))
}

/// Newton ascent on one ability cell θ_{cd}; `items` lists (γ, β, N_c, R_jc).
fn optimize_theta(
    start: f64,
    items: &[(f64, f64, f64)],
    nc: f64,
    bound: f64,
    max_iter: usize,
    tol: f64,
) -> f64 {
    let objective = |t: f64| -> f64 {
        items
            .iter()
            .map(|&(g, b, rc)| {
                let z = g * (t - b);
                rc * z - nc * softplus(z)
            })
            .sum()
    };
    let mut t = start.clamp(-bound, bound);
    let mut f = objective(t);
    for _ in 0..max_iter {
        let (mut d1, mut d2) = (0.0, 0.0);
        for &(g, b, rc) in items {
            let p = logistic(g * (t - b));
            d1 += g * (rc - nc * p);
            d2 -= g * g * nc * p * (1.0 - p);
        }
        let mut dir = -d1 / d2;
        if !dir.is_finite() || d2 >= 0.0 {
            dir = d1.signum();
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let cand = (t + step * dir).clamp(-bound, bound);
            let fc = objective(cand);
            if fc >= f {
                accepted = Some((cand, fc));
                break;
            }
            step *= 0.5;
        }
        let Some((cand, fc)) = accepted else { break };
        let gain = fc - f;
        t = cand;
        f = fc;
        if gain <= tol {
            break;
        }
    }
    t
}

fn m_step(
    params: &TwoPlParams,
    stats: &SufficientStats,
    n: f64,
    config: &FitConfig,
) -> std::result::Result<TwoPlParams, String> {
    let k = params.k();
    let s = params.n_dimensions();
    let bounds = Bounds::from(config);
    let mut next = params.clone();
    next.weights = stats.class_totals.iter().map(|t| t / n).collect();
    let members: Vec<Vec<usize>> = (0..s).map(|d| params.partition.members(d)).collect();
    let free_items: Vec<usize> = (0..params.n_items())
        .filter(|&j| !params.partition.is_anchor(j))
        .collect();
    let parallel = config.parallel && free_items.len() * k >= 512;
    let mut q = m_objective(&next, stats);
    for _ in 0..config.inner_max_iterations {
        let updated = exec::map_indices(parallel, free_items.len(), |i| {
            let j = free_items[i];
            let d = next.partition.group_of(j);
            let theta: Vec<f64> = next.abilities.iter().map(|row| row[d]).collect();
            optimize_item(
                (next.discrimination[j], next.difficulty[j]),
                &theta,
                &stats.class_totals,
                &stats.successes[j * k..(j + 1) * k],
                &bounds,
                config.inner_max_iterations,
                config.inner_tolerance,
            )
        });
        for (&j, res) in free_items.iter().zip(updated) {
            let (g, b) = res?;
            next.discrimination[j] = g;
            next.difficulty[j] = b;
        }
        for c in 0..k {
            let nc = stats.class_totals[c];
            for (d, items) in members.iter().enumerate() {
                let cell: Vec<(f64, f64, f64)> = items
                    .iter()
                    .map(|&j| (next.discrimination[j], next.difficulty[j], stats.success(j, c)))
                    .collect();
                next.abilities[c][d] = optimize_theta(
                    next.abilities[c][d],
                    &cell,
                    nc,
                    bounds.theta,
                    config.inner_max_iterations,
                    config.inner_tolerance,
                );
            }
        }
        let q_new = m_objective(&next, stats);
        if !q_new.is_finite() {
            return Err("M-step objective became non-finite".into());
        }
        let gain = q_new - q;
        q = q_new;
        if gain < config.inner_tolerance {
            break;
        }
    }
    Ok(next)
}

#[derive(Debug, Clone)]
struct Run {
    params: TwoPlParams,
    loglik: f64,
    posteriors: Vec<f64>,
    iterations: usize,
    converged: bool,
    trace: Vec<f64>,
}

fn run_em(patterns: &Patterns, init: TwoPlParams, config: &FitConfig) -> Result<Run> {
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
        let stats = mixture::sufficient_stats(patterns, &e.posteriors, k, config.parallel);
        let converged = trace
            .last()
            .is_some_and(|&prev: &f64| (e.loglik - prev).abs() < config.tolerance)
            && projected_score_max(&params, &m_score(&params, &stats), config) < config.score_tolerance;
        trace.push(e.loglik);
        if converged || iteration >= config.max_iterations {
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
        params = m_step(&params, &stats, n, config).map_err(|message| Error::NonFinite {
            iteration,
            message,
        })?;
        if let Some(c) = params.weights.iter().position(|&w| w < EMPTY_CLASS_WEIGHT) {
            return Err(Error::Optimizer(format!(
                "class {} emptied at iteration {iteration}",
                c + 1
            )));
        }
    }
}

/// Cold start `s`: a short LC EM from LC start `s`, then θ_{cd} = logit of
/// the class's mean success rate over group d, with γ = 1 and β = 0.
pub fn twopl_cold_start(
    data: &ResponseMatrix,
    partition: &DimensionPartition,
    k: usize,
    start: usize,
    config: &FitConfig,
) -> Result<TwoPlParams> {
    let patterns = Patterns::new(data);
    cold_start(&patterns, data, partition, k, start, config)
}

fn cold_start(
    patterns: &Patterns,
    data: &ResponseMatrix,
    partition: &DimensionPartition,
    k: usize,
    start: usize,
    config: &FitConfig,
) -> Result<TwoPlParams> {
    let pre = lc::prefit(patterns, lc::lc_start(data, k, start, config), config)?;
    let s = partition.n_groups();
    let members: Vec<Vec<usize>> = (0..s).map(|d| partition.members(d)).collect();
    let abilities = (0..k)
        .map(|c| {
            members
                .iter()
                .map(|items| {
                    let mean = items.iter().map(|&j| pre.success_probs[j][c]).sum::<f64>()
                        / items.len() as f64;
                    logit(mean.clamp(1e-4, 1.0 - 1e-4)).clamp(-config.theta_max, config.theta_max)
                })
                .collect()
        })
        .collect();
    let j = data.n_items();
    Ok(TwoPlParams {
        weights: pre.weights,
        discrimination: vec![1.0; j],
        difficulty: vec![0.0; j],
        abilities,
        partition: partition.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPlFit {
    pub params: TwoPlParams,
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
    /// Index into the start list (warm starts first, then cold starts).
    pub winning_start: usize,
    pub winning_seed: Option<u64>,
    #[serde(skip)]
    pub loglik_trace: Vec<f64>,
}

impl TwoPlFit {
    pub fn k(&self) -> usize {
        self.params.k()
    }

    pub fn partition(&self) -> &DimensionPartition {
        &self.params.partition
    }

    pub fn posterior(&self, i: usize) -> &[f64] {
        let k = self.k();
        &self.posteriors[i * k..(i + 1) * k]
    }
}

/// Which starts to run: explicit warm starts followed by `cold` cold
/// starts (cold start 0 is deterministic, the rest are seeded).
#[derive(Debug, Clone, Default)]
pub struct StartPlan {
    pub warm: Vec<TwoPlParams>,
    pub cold: usize,
}

fn check_request(
    data: &ResponseMatrix,
    partition: &DimensionPartition,
    k: usize,
    config: &FitConfig,
) -> Result<()> {
    config.validate()?;
    if k < 2 {
        return Err(Error::InvalidArgument(
            "the 2PL model needs at least two latent classes".into(),
        ));
    }
    if k > data.n_subjects() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds the {} subjects",
            data.n_subjects()
        )));
    }
    partition.check_items(data.n_items())
}

/// Multi-start EM: the deterministic start plus `n_random_starts` seeded
/// ones. Classes are ordered by the first item's success probability.
pub fn em_fit_2pl(
    data: &ResponseMatrix,
    partition: &DimensionPartition,
    k: usize,
    config: &FitConfig,
) -> Result<TwoPlFit> {
    let plan = StartPlan {
        warm: Vec::new(),
        cold: config.n_random_starts + 1,
    };
    em_fit_2pl_with(data, partition, k, config, &plan)
}

pub fn em_fit_2pl_with(
    data: &ResponseMatrix,
    partition: &DimensionPartition,
    k: usize,
    config: &FitConfig,
    plan: &StartPlan,
) -> Result<TwoPlFit> {
    check_request(data, partition, k, config)?;
    for w in &plan.warm {
        w.validate()?;
        if w.k() != k || &w.partition != partition {
            return Err(Error::InvalidArgument(
                "warm start does not match the requested model".into(),
            ));
        }
    }
    if plan.warm.is_empty() && plan.cold == 0 {
        return Err(Error::InvalidArgument("no starts requested".into()));
    }
    let patterns = Patterns::new(data);
    let n_warm = plan.warm.len();
    let runs = exec::map_indices(config.parallel, n_warm + plan.cold, |i| {
        let init = if i < n_warm {
            plan.warm[i].clone()
        } else {
            cold_start(&patterns, data, partition, k, i - n_warm, config)?
        };
        run_em(&patterns, init, config)
    });
    let mut best: Option<(usize, Run)> = None;
    let mut first_error = None;
    for (i, run) in runs.into_iter().enumerate() {
        match run {
            Ok(run) => {
                if best.as_ref().is_none_or(|(_, b)| run.loglik > b.loglik) {
                    best = Some((i, run));
                }
            }
            Err(e) => {
                log::debug!("2PL k={k} start {i} abandoned: {e}");
                first_error.get_or_insert(e);
            }
        }
    }
    let Some((i, run)) = best else {
        return Err(Error::AllStartsFailed(
            first_error.map(|e| e.to_string()).unwrap_or_default(),
        ));
    };
    let order = order_by_first_item(
        &(0..k).map(|c| run.params.logit_at(0, c)).collect::<Vec<_>>(),
    );
    let params = run.params.permuted(&order);
    let posteriors: Vec<f64> = run
        .posteriors
        .chunks_exact(k)
        .flat_map(|row| order.iter().map(|&c| row[c]).collect::<Vec<_>>())
        .collect();
    let n = data.n_subjects();
    let n_params = twopl_n_params(k, partition.n_groups(), data.n_items());
    let cold_index = i.checked_sub(n_warm);
    Ok(TwoPlFit {
        loglik: run.loglik,
        n_params,
        bic: bic(run.loglik, n_params, n),
        n_subjects: n,
        data_fingerprint: data.fingerprint(),
        posteriors: mixture::subject_posteriors(&patterns, &posteriors, k),
        n_iterations: run.iterations,
        converged: run.converged,
        winning_start: i,
        winning_seed: cold_index.filter(|&c| c > 0).map(|c| config.start_seed(c)),
        loglik_trace: run.trace,
        params,
    })
}

/// Single EM run from the given parameters, without class reordering.
pub fn em_fit_2pl_from(
    data: &ResponseMatrix,
    init: TwoPlParams,
    config: &FitConfig,
) -> Result<TwoPlFit> {
    let partition = init.partition.clone();
    let plan = StartPlan {
        warm: vec![init],
        cold: 0,
    };
    em_fit_2pl_with(data, &partition, plan.warm[0].k(), config, &plan)
}

/// Weighted Pearson correlations between ability columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbilityCorrelations {
    /// `None` where a dimension has zero weighted variance.
    pub values: Vec<Vec<Option<f64>>>,
}

/// ρ_{d1 d2} with weights π_c (normalized to sum to one), means
/// θ̄_d = Σ_c θ_{cd} π_c and squared deviations in the denominator.
pub fn weighted_correlations(abilities: &[Vec<f64>], weights: &[f64]) -> Result<AbilityCorrelations> {
    if abilities.len() != weights.len() || abilities.is_empty() {
        return Err(Error::DimensionMismatch("one ability row per class weight".into()));
    }
    let s = abilities[0].len();
    if abilities.iter().any(|r| r.len() != s) {
        return Err(Error::DimensionMismatch("ragged ability matrix".into()));
    }
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidArgument("weights must have positive sum".into()));
    }
    let w: Vec<f64> = weights.iter().map(|x| x / total).collect();
    let means: Vec<f64> = (0..s)
        .map(|d| abilities.iter().zip(&w).map(|(r, wc)| r[d] * wc).sum())
        .collect();
    let cov = |a: usize, b: usize| -> f64 {
        abilities
            .iter()
            .zip(&w)
            .map(|(r, wc)| (r[a] - means[a]) * (r[b] - means[b]) * wc)
            .sum()
    };
    let var: Vec<f64> = (0..s).map(|d| cov(d, d)).collect();
    let values = (0..s)
        .map(|a| {
            (0..s)
                .map(|b| {
                    if a == b {
                        Some(1.0)
                    } else if var[a] > 0.0 && var[b] > 0.0 {
                        Some((cov(a, b) / (var[a].sqrt() * var[b].sqrt())).clamp(-1.0, 1.0))
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    Ok(AbilityCorrelations { values })
}

pub fn ability_correlations(fit: &TwoPlFit) -> Result<AbilityCorrelations> {
    weighted_correlations(&fit.params.abilities, &fit.params.weights)
}

/// Outcome of comparing a constrained 2PL fit with the unconstrained LC fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NestingReport {
    pub lc_loglik: f64,
    pub twopl_loglik: f64,
    /// lc − 2PL; nonnegative up to the slack.
    pub gap: f64,
}

pub const NESTING_SLACK: f64 = 1e-6;

/// The 2PL model is a restriction of the LC model with the same k, so its
/// maximized log-likelihood cannot exceed the LC one. A violation means one
/// of the two fits stopped at a poor optimum and is returned as an error.
pub fn nested_loglik_bound(lc: &lc::LcFit, pl: &TwoPlFit) -> Result<NestingReport> {
    if lc.k() != pl.k() {
        return Err(Error::InvalidArgument(format!(
            "class counts differ: LC k = {}, 2PL k = {}",
            lc.k(),
            pl.k()
        )));
    }
    if lc.data_fingerprint != pl.data_fingerprint {
        return Err(Error::InvalidArgument("fits were computed on different data".into()));
    }
    let gap = lc.loglik - pl.loglik;
    if gap < -NESTING_SLACK {
        return Err(Error::Optimizer(format!(
            "2PL log-likelihood exceeds the LC one by {}",
            -gap
        )));
    }
    Ok(NestingReport {
        lc_loglik: lc.loglik,
        twopl_loglik: pl.loglik,
        gap,
    })
}
