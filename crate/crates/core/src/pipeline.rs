//! End-to-end analysis writing a report bundle. Every artifact is written as
//! soon as its stage finishes, so a failure leaves the earlier ones in place.

use std::fs::File;
use std::io::BufWriter;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::FitConfig;
use crate::data::{DimensionPartition, ResponseMatrix};
use crate::dimensionality::{cluster_dimensions, emit_dendrogram, DendrogramFormat};
use crate::error::{Error, Result};
use crate::report;
use crate::selection::{apply_threshold, default_grid, discriminant_2pl, discriminant_lc, threshold_sweep};
use crate::twopl::{ability_correlations, em_fit_2pl, TwoPlFit};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineOptions {
    pub k_range: RangeInclusive<usize>,
    /// Use this k instead of the BIC choice.
    pub k_override: Option<usize>,
    /// D* retention threshold for the 2PL item selection.
    pub threshold: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            k_range: 1..=7,
            k_override: None,
            threshold: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineSummary {
    pub n_subjects: usize,
    pub n_items: usize,
    pub bic_k: usize,
    pub k: usize,
    pub initial_groups: usize,
    pub retained_items: usize,
    pub retained_per_group: Vec<usize>,
    /// Selected grouping as clusters of original group labels.
    pub selected_clusters: Vec<Vec<usize>>,
    pub selected_dimensions: usize,
    pub final_loglik: f64,
    pub artifacts: Vec<String>,
}

struct Bundle {
    dir: PathBuf,
    written: Vec<String>,
}

impl Bundle {
    fn file(&mut self, name: &str) -> Result<BufWriter<File>> {
        let path = self.dir.join(name);
        let f = File::create(&path).map_err(|e| Error::io(&path, e))?;
        self.written.push(name.to_string());
        Ok(BufWriter::new(f))
    }

    fn text(&mut self, name: &str, body: &str) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.text(name, &report::to_json(value)?)
    }

    fn fit(&mut self, prefix: &str, fit: &TwoPlFit, data: &ResponseMatrix) -> Result<()> {
        self.json(&format!("{prefix}_fit.json"), fit)?;
        report::write_abilities(fit, self.file(&format!("{prefix}_abilities.csv"))?)?;
        let disc = discriminant_2pl(fit, data.items())?;
        report::write_discriminant(&disc, self.file(&format!("{prefix}_discriminant.csv"))?)
    }
}

pub fn run_pipeline(
    data: &ResponseMatrix,
    partition: &DimensionPartition,
    options: &PipelineOptions,
    config: &FitConfig,
    out_dir: impl AsRef<Path>,
) -> Result<PipelineSummary> {
    config.validate()?;
    if !(0.0..=1.0).contains(&options.threshold) {
        return Err(Error::InvalidArgument(format!(
            "threshold must lie in [0, 1], got {}",
            options.threshold
        )));
    }
    let dir = out_dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut b = Bundle {
        dir: dir.to_path_buf(),
        written: Vec::new(),
    };
    b.json("config.json", &serde_json::json!({ "fit": config, "pipeline": options }))?;

    log::info!("stage 1: class-count selection over k in {:?}", options.k_range);
    let sel = crate::lc::select_k(data, options.k_range.clone(), config)?;
    report::write_bic_table(&sel.rows, b.file("bic.csv")?)?;
    let k = options.k_override.unwrap_or(sel.selected_k);

    log::info!("stage 2: LC discriminant indices at k = {k}");
    let lc_fit = match sel.fits.iter().find(|f| f.k() == k) {
        Some(f) => f.clone(),
        None => crate::lc::em_fit_lc(data, k, config)?,
    };
    b.json("lc_fit.json", &lc_fit)?;
    let lc_disc = discriminant_lc(&lc_fit, data.items(), partition)?;
    report::write_discriminant(&lc_disc, b.file("lc_discriminant.csv")?)?;
    report::write_sweep(&threshold_sweep(&lc_disc, &default_grid())?, b.file("lc_sweep.csv")?)?;

    log::info!("stage 3: 2PL fit on all {} items", data.n_items());
    let full = em_fit_2pl(data, partition, k, config)?;
    b.fit("twopl_all", &full, data)?;
    let disc = discriminant_2pl(&full, data.items())?;
    report::write_sweep(&threshold_sweep(&disc, &default_grid())?, b.file("twopl_sweep.csv")?)?;

    log::info!("stage 4: item selection at D* >= {}", options.threshold);
    let retention = apply_threshold(&disc, options.threshold)?;
    report::write_selected_items(
        data.items(),
        partition,
        &retention.retained,
        b.file("selected_items.csv")?,
    )?;
    let sub = data.restrict(&retention.retained)?;
    let sub_partition = partition.restrict(&retention.retained)?;

    log::info!("stage 5: dimensionality clustering on {} items", sub.n_items());
    let (final_fit, clusters) = if sub_partition.n_groups() >= 2 && k >= 3 {
        match cluster_dimensions(&sub, &sub_partition, k, config.alpha, config) {
            Ok(outcome) => {
                b.fit("twopl_selected", &outcome.fits[0], &sub)?;
                write_path(&mut b, &outcome.path)?;
                (outcome.selected_fit().clone(), outcome.path.selected_clusters())
            }
            Err(Error::Clustering { source, partial }) => {
                write_path(&mut b, &partial)?;
                return Err(Error::Clustering { source, partial });
            }
            Err(e) => return Err(e),
        }
    } else {
        log::warn!(
            "clustering skipped: needs at least two groups and k >= 3 (groups {}, k {k})",
            sub_partition.n_groups()
        );
        let fit = em_fit_2pl(&sub, &sub_partition, k, config)?;
        b.fit("twopl_selected", &fit, &sub)?;
        let clusters = (1..=sub_partition.n_groups()).map(|g| vec![g]).collect();
        (fit, clusters)
    };

    log::info!("stage 6: final model and ability correlations");
    b.fit("final", &final_fit, &sub)?;
    let corr = ability_correlations(&final_fit)?;
    report::write_correlations(&corr, b.file("correlations.csv")?)?;

    let mut summary = PipelineSummary {
        n_subjects: data.n_subjects(),
        n_items: data.n_items(),
        bic_k: sel.selected_k,
        k,
        initial_groups: partition.n_groups(),
        retained_items: retention.total(),
        retained_per_group: retention.counts.clone(),
        selected_dimensions: clusters.len(),
        selected_clusters: clusters,
        final_loglik: final_fit.loglik,
        artifacts: Vec::new(),
    };
    summary.artifacts = b.written.clone();
    summary.artifacts.push("summary.json".into());
    b.json("summary.json", &summary)?;
    Ok(summary)
}

fn write_path(b: &mut Bundle, path: &crate::dimensionality::DendrogramPath) -> Result<()> {
    report::write_path(path, b.file("path.csv")?)?;
    b.json("path.json", path)?;
    if !path.steps.is_empty() {
        b.text("dendrogram.txt", &emit_dendrogram(path, DendrogramFormat::Text)?)?;
        b.text("dendrogram.dot", &emit_dendrogram(path, DendrogramFormat::Dot)?)?;
    }
    Ok(())
}
