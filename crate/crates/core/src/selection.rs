//! Discriminant-power indices and threshold-based item retention.

use serde::Serialize;

use crate::data::{DimensionPartition, ItemMeta};
use crate::error::{Error, Result};
use crate::lc::LcFit;
use crate::twopl::TwoPlFit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportSource {
    Lc,
    #[serde(rename = "2pl")]
    TwoPl,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ItemDiscrimination {
    /// 1-based item index.
    pub index: usize,
    pub code: String,
    /// 1-based dimension.
    pub dimension: usize,
    /// M_j for the LC model, γ̂_j for the 2PL model.
    pub raw: f64,
    /// D_j or D*_j.
    pub relative: f64,
    /// Σ_c π̂_c λ̂_{j|c} (LC only).
    pub weighted_mean: Option<f64>,
    /// Population standard deviation of λ̂_{j|c} with weights π̂_c (LC only).
    pub weighted_std: Option<f64>,
    /// β̂_j (2PL only).
    pub difficulty: Option<f64>,
    /// The item attains its dimension's maximum raw score.
    pub is_max: bool,
    /// Another item of the same dimension attains the same maximum.
    pub tied: bool,
    /// Every raw score in the dimension is 0, so the ratio is undefined and
    /// reported as 0.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscriminantReport {
    pub source: ReportSource,
    pub n_dimensions: usize,
    pub items: Vec<ItemDiscrimination>,
}

impl DiscriminantReport {
    pub fn relative_scores(&self) -> Vec<f64> {
        self.items.iter().map(|i| i.relative).collect()
    }
}

/// Relative scores within dimensions plus max/tie/degeneracy flags.
fn relative(raw: &[f64], partition: &DimensionPartition) -> Vec<(f64, bool, bool, bool)> {
    let s = partition.n_groups();
    let mut max = vec![f64::NEG_INFINITY; s];
    for (j, &r) in raw.iter().enumerate() {
        let g = partition.group_of(j);
        max[g] = max[g].max(r);
    }
    let mut n_max = vec![0usize; s];
    for (j, &r) in raw.iter().enumerate() {
        if r == max[partition.group_of(j)] {
            n_max[partition.group_of(j)] += 1;
        }
    }
    raw.iter()
        .enumerate()
        .map(|(j, &r)| {
            let g = partition.group_of(j);
            let is_max = r == max[g];
            if max[g] <= 0.0 {
                (0.0, is_max, is_max && n_max[g] > 1, true)
            } else {
                let rel = if is_max { 1.0 } else { r / max[g] };
                (rel, is_max, is_max && n_max[g] > 1, false)
            }
        })
        .collect()
}

fn build(
    source: ReportSource,
    items: &[ItemMeta],
    partition: &DimensionPartition,
    raw: &[f64],
    mut extra: impl FnMut(usize) -> (Option<f64>, Option<f64>, Option<f64>),
) -> DiscriminantReport {
    let rel = relative(raw, partition);
    let items = items
        .iter()
        .enumerate()
        .map(|(j, meta)| {
            let (relative, is_max, tied, degenerate) = rel[j];
            let (weighted_mean, weighted_std, difficulty) = extra(j);
            ItemDiscrimination {
                index: j + 1,
                code: meta.code.clone(),
                dimension: partition.group_of(j) + 1,
                raw: raw[j],
                relative,
                weighted_mean,
                weighted_std,
                difficulty,
                is_max,
                tied,
                degenerate,
            }
        })
        .collect();
    DiscriminantReport {
        source,
        n_dimensions: partition.n_groups(),
        items,
    }
}

/// Report from externally supplied raw scores (M_j or γ̂_j), e.g. estimates
/// produced elsewhere.
pub fn discriminant_from_raw(
    source: ReportSource,
    items: &[ItemMeta],
    partition: &DimensionPartition,
    raw: &[f64],
) -> Result<DiscriminantReport> {
    if raw.len() != items.len() || partition.n_items() != items.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} scores, {} items, partition of {}",
            raw.len(),
            items.len(),
            partition.n_items()
        )));
    }
    if raw.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(Error::InvalidArgument("raw scores must be finite and nonnegative".into()));
    }
    Ok(build(source, items, partition, raw, |_| (None, None, None)))
}

/// Range-based index M_j and its within-dimension ratio D_j.
pub fn discriminant_lc(
    fit: &LcFit,
    items: &[ItemMeta],
    partition: &DimensionPartition,
) -> Result<DiscriminantReport> {
    let lambda = &fit.params.success_probs;
    if lambda.len() != items.len() || partition.n_items() != items.len() {
        return Err(Error::DimensionMismatch(format!(
            "fit has {} items, item list {}, partition {}",
            lambda.len(),
            items.len(),
            partition.n_items()
        )));
    }
    let w = &fit.params.weights;
    let raw: Vec<f64> = lambda
        .iter()
        .map(|row| {
            let hi = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = row.iter().copied().fold(f64::INFINITY, f64::min);
            hi - lo
        })
        .collect();
    Ok(build(ReportSource::Lc, items, partition, &raw, |j| {
        let row = &lambda[j];
        let mean: f64 = row.iter().zip(w).map(|(l, p)| l * p).sum();
        let var: f64 = row.iter().zip(w).map(|(l, p)| p * (l - mean).powi(2)).sum();
        (Some(mean), Some(var.sqrt()), None)
    }))
}

/// D*_j = γ̂_j / max γ̂ over the item's dimension.
pub fn discriminant_2pl(fit: &TwoPlFit, items: &[ItemMeta]) -> Result<DiscriminantReport> {
    let p = &fit.params;
    if p.n_items() != items.len() {
        return Err(Error::DimensionMismatch(format!(
            "fit has {} items, item list {}",
            p.n_items(),
            items.len()
        )));
    }
    Ok(build(
        ReportSource::TwoPl,
        items,
        &p.partition,
        &p.discrimination,
        |j| (None, None, Some(p.difficulty[j])),
    ))
}

fn check_threshold(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("threshold must lie in [0, 1], got {t}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Retention {
    pub threshold: f64,
    /// Retained 1-based item indices, ascending.
    pub retained: Vec<usize>,
    /// Retained items per dimension.
    pub counts: Vec<usize>,
}

impl Retention {
    pub fn total(&self) -> usize {
        self.retained.len()
    }
}

/// Keep item j iff its relative score is at least `t`.
pub fn apply_threshold(report: &DiscriminantReport, t: f64) -> Result<Retention> {
    check_threshold(t)?;
    let mut counts = vec![0; report.n_dimensions];
    let mut retained = Vec::new();
    for item in &report.items {
        if item.relative >= t {
            retained.push(item.index);
            counts[item.dimension - 1] += 1;
        }
    }
    Ok(Retention {
        threshold: t,
        retained,
        counts,
    })
}

pub fn threshold_sweep(report: &DiscriminantReport, grid: &[f64]) -> Result<Vec<Retention>> {
    grid.iter().map(|&t| apply_threshold(report, t)).collect()
}

/// 0.0, 0.1, …, 1.0.
pub fn default_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}
