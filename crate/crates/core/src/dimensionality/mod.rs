//! Likelihood-ratio tests between nested 2PL models and the agglomerative
//! clustering of item groups into dimensions.

mod chi2;
mod dendrogram;

use serde::Serialize;

pub use chi2::{chi2_sf, gamma_q};
pub use dendrogram::{emit_dendrogram, parse_dendrogram_text, DendrogramFormat, ParsedMerge};

use crate::config::FitConfig;
use crate::data::{DimensionPartition, ResponseMatrix};
use crate::error::{Error, Result};
use crate::exec;
use crate::mixture;
use crate::patterns::Patterns;
use crate::twopl::{em_fit_2pl, em_fit_2pl_with, StartPlan, TwoPlFit, NESTING_SLACK};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LrTestResult {
    /// 2 (ℓ_full − ℓ_reduced).
    pub lr: f64,
    /// 2 Σ_y n(y) log(p̂(y) / p̂₀(y)) over observed patterns.
    pub lr_pattern_sum: f64,
    pub df: usize,
    pub p_value: f64,
    pub full_partition: DimensionPartition,
    pub reduced_partition: DimensionPartition,
    pub full_loglik: f64,
    pub reduced_loglik: f64,
    /// lr < −slack: the reduced fit beat the full one, so one of the two
    /// stopped at a poor optimum.
    pub nesting_violated: bool,
}

/// Degrees of freedom of a single merge: the merged model loses the k
/// abilities of one dimension and frees the absorbed anchor's γ and β.
pub fn merge_df(k: usize) -> usize {
    k.saturating_sub(2)
}

/// LR test of `reduced` (two groups of `full` merged) against `full`.
pub fn lr_test(data: &ResponseMatrix, full: &TwoPlFit, reduced: &TwoPlFit) -> Result<LrTestResult> {
    let fp = data.fingerprint();
    if full.data_fingerprint != fp || reduced.data_fingerprint != fp {
        return Err(Error::InvalidArgument("fits were not computed on this data".into()));
    }
    let k = full.k();
    if reduced.k() != k {
        return Err(Error::InvalidArgument(format!(
            "class counts differ: {} vs {}",
            k,
            reduced.k()
        )));
    }
    let df = merge_df(k);
    if df == 0 {
        return Err(Error::InvalidArgument(
            "with k = 2 the merge test has zero degrees of freedom".into(),
        ));
    }
    let (fp_part, rp_part) = (full.partition(), reduced.partition());
    if fp_part != rp_part && fp_part.merged_pair(rp_part).is_none() {
        return Err(Error::InvalidArgument(
            "reduced partition is not the full one with two groups merged".into(),
        ));
    }
    let patterns = Patterns::new(data);
    let lp_full = mixture::e_step(&patterns, &full.params.log_tables(), false).log_probs;
    let lp_red = mixture::e_step(&patterns, &reduced.params.log_tables(), false).log_probs;
    let lr_pattern_sum = 2.0
        * lp_full
            .iter()
            .zip(&lp_red)
            .zip(patterns.counts())
            .map(|((a, b), n)| n * (a - b))
            .sum::<f64>();
    let lr = 2.0 * (full.loglik - reduced.loglik);
    let nesting_violated = lr < -2.0 * NESTING_SLACK;
    if nesting_violated {
        log::warn!("nesting violated: reduced model log-likelihood exceeds the full one (LR = {lr})");
    }
    let p_value = chi2_sf(lr.max(0.0), df)?;
    Ok(LrTestResult {
        lr,
        lr_pattern_sum,
        df,
        p_value,
        full_partition: fp_part.clone(),
        reduced_partition: rp_part.clone(),
        full_loglik: full.loglik,
        reduced_loglik: reduced.loglik,
        nesting_violated,
    })
}

/// A set of original (1-based) group labels.
pub type Cluster = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MergeStep {
    /// 1-based step index.
    pub h: usize,
    /// Group count after the merge.
    pub s: usize,
    pub merged: (Cluster, Cluster),
    /// Clusters after the merge, ordered by smallest label.
    pub clusters: Vec<Cluster>,
    pub lr: f64,
    pub df: usize,
    pub p_value: f64,
    pub loglik: f64,
    pub nesting_violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DendrogramPath {
    pub initial_partition: DimensionPartition,
    pub initial_loglik: f64,
    pub k: usize,
    pub alpha: f64,
    pub steps: Vec<MergeStep>,
    /// Merges kept by the stopping rule; the selected structure is the
    /// partition after this many steps.
    pub accepted: usize,
}

impl DendrogramPath {
    pub fn n_initial_groups(&self) -> usize {
        self.initial_partition.n_groups()
    }

    pub fn initial_clusters(&self) -> Vec<Cluster> {
        (1..=self.n_initial_groups()).map(|g| vec![g]).collect()
    }

    /// Clusters after `steps` merges (0 = the initial grouping).
    pub fn clusters_at(&self, steps: usize) -> Vec<Cluster> {
        if steps == 0 {
            self.initial_clusters()
        } else {
            self.steps[steps - 1].clusters.clone()
        }
    }

    pub fn partition_at(&self, steps: usize) -> DimensionPartition {
        partition_from_clusters(&self.initial_partition, &self.clusters_at(steps))
    }

    pub fn selected_clusters(&self) -> Vec<Cluster> {
        self.clusters_at(self.accepted)
    }

    pub fn selected_partition(&self) -> DimensionPartition {
        self.partition_at(self.accepted)
    }
}

fn partition_from_clusters(initial: &DimensionPartition, clusters: &[Cluster]) -> DimensionPartition {
    let mut target = vec![0; initial.n_groups()];
    for (c, cluster) in clusters.iter().enumerate() {
        for &g in cluster {
            target[g - 1] = c;
        }
    }
    DimensionPartition::new(initial.assignment().iter().map(|&g| target[g]).collect())
        .expect("clusters cover every group")
}

/// Number of merges in the selected structure: the deepest step whose LR
/// test does not reject at `alpha`, i.e. the smallest group count reached
/// by an accepted merge. 0 when every merge is rejected.
pub fn accepted_merges(steps: &[MergeStep], alpha: f64) -> usize {
    steps.iter().rposition(|s| s.p_value >= alpha).map_or(0, |i| i + 1)
}

#[derive(Debug, Clone)]
pub struct ClusterOutcome {
    pub path: DendrogramPath,
    /// Fit at every level: index 0 is the initial grouping.
    pub fits: Vec<TwoPlFit>,
}

impl ClusterOutcome {
    pub fn selected_partition(&self) -> DimensionPartition {
        self.path.selected_partition()
    }

    pub fn selected_fit(&self) -> &TwoPlFit {
        &self.fits[self.path.accepted]
    }
}

/// Agglomerative clustering of item groups. At every level all pairwise
/// merges are fitted (warm start from the parent plus one cold start) and
/// the merge with the smallest LR is kept, down to a single group. The
/// selected structure is the fewest groups reached by a merge that is not
/// rejected at `alpha`.
pub fn cluster_dimensions(
    data: &ResponseMatrix,
    initial: &DimensionPartition,
    k: usize,
    alpha: f64,
    config: &FitConfig,
) -> Result<ClusterOutcome> {
    if initial.n_groups() < 2 {
        return Err(Error::InvalidArgument("clustering needs at least two groups".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let df = merge_df(k);
    if df == 0 {
        return Err(Error::InvalidArgument(
            "dimensionality tests need k ≥ 3 latent classes".into(),
        ));
    }
    let root = em_fit_2pl(data, initial, k, config)?;
    let mut path = DendrogramPath {
        initial_partition: initial.clone(),
        initial_loglik: root.loglik,
        k,
        alpha,
        steps: Vec::new(),
        accepted: 0,
    };
    let mut clusters = path.initial_clusters();
    let mut fits = vec![root];
    while clusters.len() > 1 {
        let parent = fits.last().unwrap();
        let pairs: Vec<(usize, usize)> = (0..clusters.len())
            .flat_map(|a| (a + 1..clusters.len()).map(move |b| (a, b)))
            .collect();
        let candidates = exec::map_indices(config.parallel, pairs.len(), |i| {
            let (a, b) = pairs[i];
            let warm = parent.params.merge_warm_start(a, b)?;
            let plan = StartPlan {
                warm: vec![warm.clone()],
                cold: 1,
            };
            em_fit_2pl_with(data, &warm.partition, k, config, &plan)
        });
        let mut best: Option<(usize, TwoPlFit)> = None;
        for (i, cand) in candidates.into_iter().enumerate() {
            let cand = match cand {
                Ok(c) => c,
                Err(e) => {
                    path.accepted = accepted_merges(&path.steps, alpha);
                    return Err(Error::Clustering {
                        source: Box::new(e),
                        partial: Box::new(path),
                    });
                }
            };
            let better = match &best {
                None => true,
                Some((bi, b)) => {
                    let (lr_c, lr_b) = (parent.loglik - cand.loglik, parent.loglik - b.loglik);
                    lr_c < lr_b || (lr_c == lr_b && pair_key(&clusters, pairs[i]) < pair_key(&clusters, pairs[*bi]))
                }
            };
            if better {
                best = Some((i, cand));
            }
        }
        let (i, chosen) = best.expect("at least one candidate pair");
        let (a, b) = pairs[i];
        let test = match lr_test(data, parent, &chosen) {
            Ok(t) => t,
            Err(e) => {
                path.accepted = accepted_merges(&path.steps, alpha);
                return Err(Error::Clustering {
                    source: Box::new(e),
                    partial: Box::new(path),
                });
            }
        };
        let merged = (clusters[a].clone(), clusters[b].clone());
        let mut union = [clusters[a].as_slice(), clusters[b].as_slice()].concat();
        union.sort_unstable();
        clusters[a] = union;
        clusters.remove(b);
        let step = MergeStep {
            h: path.steps.len() + 1,
            s: clusters.len(),
            merged,
            clusters: clusters.clone(),
            lr: test.lr,
            df,
            p_value: test.p_value,
            loglik: chosen.loglik,
            nesting_violated: test.nesting_violated,
        };
        log::info!(
            "merge h={} s={}: {:?} + {:?}, LR {:.3}, p {:.3}",
            step.h,
            step.s,
            step.merged.0,
            step.merged.1,
            step.lr,
            step.p_value
        );
        path.steps.push(step);
        fits.push(chosen);
    }
    path.accepted = accepted_merges(&path.steps, alpha);
    Ok(ClusterOutcome { path, fits })
}

fn pair_key(clusters: &[Cluster], (a, b): (usize, usize)) -> (Cluster, Cluster) {
    (clusters[a].clone(), clusters[b].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(h: usize, p: f64) -> MergeStep {
        MergeStep {
            h,
            s: 0,
            merged: (vec![], vec![]),
            clusters: vec![],
            lr: 0.0,
            df: 4,
            p_value: p,
            loglik: 0.0,
            nesting_violated: false,
        }
    }

    #[test]
    fn stopping_rule_follows_first_rejection() {
        // p-values of the tabulated clustering path
        let steps: Vec<_> = [0.984, 0.424, 0.264, 0.000, 0.000, 0.000, 0.000]
            .iter()
            .enumerate()
            .map(|(i, &p)| step(i + 1, p))
            .collect();
        assert_eq!(accepted_merges(&steps, 0.05), 3);
        let mixed = vec![step(1, 0.5), step(2, 0.01), step(3, 0.9), step(4, 0.0)];
        assert_eq!(accepted_merges(&mixed, 0.05), 3);
        assert_eq!(accepted_merges(&[step(1, 0.01)], 0.05), 0);
        assert_eq!(accepted_merges(&[], 0.05), 0);
    }

    #[test]
    fn partitions_from_clusters() {
        let initial = DimensionPartition::new(vec![0, 0, 1, 2, 3, 3]).unwrap();
        let p = partition_from_clusters(&initial, &[vec![1, 3], vec![2, 4]]);
        assert_eq!(p.assignment(), &[0, 0, 1, 0, 1, 1]);
    }

    #[test]
    fn df_matches_parameter_counts() {
        use crate::twopl::twopl_n_params;
        for k in 3..8 {
            for s in 2..6 {
                let j = 12;
                assert_eq!(
                    twopl_n_params(k, s, j) - twopl_n_params(k, s - 1, j),
                    merge_df(k)
                );
            }
        }
    }
}
