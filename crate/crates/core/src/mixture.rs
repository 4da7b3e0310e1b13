//! E-step and sufficient statistics shared by the LC and 2PL estimators.
//! Both models are finite mixtures of locally independent Bernoulli items
//! and differ only in how λ is parametrized.

use crate::exec;
use crate::patterns::Patterns;

/// Log-space item tables for one parameter value: `log_success[j * k + c]`
/// is log λ_{j|c} and `log_failure` is log(1 − λ_{j|c}).
#[derive(Debug, Clone)]
pub(crate) struct LogTables {
    pub k: usize,
    pub log_weights: Vec<f64>,
    pub log_success: Vec<f64>,
    pub log_failure: Vec<f64>,
}

impl LogTables {
    /// log p(y | c) + log π_c for every class, written into `out`.
    #[inline]
    pub fn joint(&self, y: &[u8], out: &mut [f64]) {
        let k = self.k;
        out.copy_from_slice(&self.log_weights);
        for (j, &v) in y.iter().enumerate() {
            let table = if v == 1 { &self.log_success } else { &self.log_failure };
            for (o, t) in out.iter_mut().zip(&table[j * k..(j + 1) * k]) {
                *o += t;
            }
        }
    }
}

/// Normalize `joint` in place to posterior probabilities and return the
/// log marginal. Exponentials are summed in sorted order so the result does
/// not depend on how classes are labelled.
#[inline]
pub(crate) fn normalize_log(joint: &mut [f64], scratch: &mut Vec<f64>) -> f64 {
    let max = joint.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    scratch.clear();
    scratch.extend(joint.iter().map(|&x| (x - max).exp()));
    for (x, &e) in joint.iter_mut().zip(scratch.iter()) {
        *x = e;
    }
    scratch.sort_by(f64::total_cmp);
    let total: f64 = scratch.iter().sum();
    for x in joint.iter_mut() {
        *x /= total;
    }
    max + total.ln()
}

#[derive(Debug, Clone)]
pub(crate) struct EStep {
    pub loglik: f64,
    /// log p(y) for every distinct pattern.
    pub log_probs: Vec<f64>,
    /// Pattern-major posteriors, `len = patterns × k`.
    pub posteriors: Vec<f64>,
}

const CHUNK: usize = 256;

pub(crate) fn e_step(patterns: &Patterns, tables: &LogTables, parallel: bool) -> EStep {
    let k = tables.k;
    let n_pat = patterns.len();
    let chunks = exec::map_indices(parallel, n_pat.div_ceil(CHUNK), |ci| {
        let start = ci * CHUNK;
        let end = (start + CHUNK).min(n_pat);
        let mut post = vec![0.0; (end - start) * k];
        let mut lps = Vec::with_capacity(end - start);
        let mut scratch = Vec::with_capacity(k);
        for (p, row) in (start..end).zip(post.chunks_exact_mut(k)) {
            tables.joint(patterns.pattern(p), row);
            lps.push(normalize_log(row, &mut scratch));
        }
        (post, lps)
    });
    let mut posteriors = Vec::with_capacity(n_pat * k);
    let mut log_probs = Vec::with_capacity(n_pat);
    for (post, lps) in chunks {
        posteriors.extend(post);
        log_probs.extend(lps);
    }
    let loglik = log_probs
        .iter()
        .zip(patterns.counts())
        .map(|(lp, c)| c * lp)
        .sum();
    EStep {
        loglik,
        log_probs,
        posteriors,
    }
}

/// Expected class sizes and expected successes given posteriors.
#[derive(Debug, Clone, PartialEq)]
pub struct SufficientStats {
    /// N_c = Σ_i p(c | y_i).
    pub class_totals: Vec<f64>,
    /// R_{jc} = Σ_i p(c | y_i) y_ij, item-major (`j * k + c`).
    pub successes: Vec<f64>,
    pub k: usize,
}

impl SufficientStats {
    pub fn success(&self, j: usize, c: usize) -> f64 {
        self.successes[j * self.k + c]
    }
}

pub(crate) fn sufficient_stats(
    patterns: &Patterns,
    posteriors: &[f64],
    k: usize,
    parallel: bool,
) -> SufficientStats {
    let n_pat = patterns.len();
    let mut class_totals = vec![0.0; k];
    for p in 0..n_pat {
        let w = patterns.count(p);
        for (t, &q) in class_totals.iter_mut().zip(&posteriors[p * k..(p + 1) * k]) {
            *t += w * q;
        }
    }
    let j_items = patterns.n_items();
    let per_item = exec::map_indices(parallel, j_items, |j| {
        let mut r = vec![0.0; k];
        for p in 0..n_pat {
            if patterns.pattern(p)[j] == 1 {
                let w = patterns.count(p);
                for (t, &q) in r.iter_mut().zip(&posteriors[p * k..(p + 1) * k]) {
                    *t += w * q;
                }
            }
        }
        r
    });
    SufficientStats {
        class_totals,
        successes: per_item.concat(),
        k,
    }
}

/// Expand pattern posteriors to one row per subject.
pub(crate) fn subject_posteriors(patterns: &Patterns, posteriors: &[f64], k: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(patterns.n_subjects() * k);
    for &p in patterns.subject_pattern() {
        out.extend_from_slice(&posteriors[p * k..(p + 1) * k]);
    }
    out
}
